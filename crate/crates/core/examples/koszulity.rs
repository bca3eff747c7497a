//! Admissible sequences against the brute-force intersection of relation
//! spaces, and the Koszul complex as a resolution.

use koszulhh::koszul::{admissible_count, koszul_space_generic, verify_koszul};
use koszulhh::{admissible_sequences, Caps, ConnectedSumAlgebra};

fn main() -> koszulhh::Result<()> {
    let caps = Caps::default();
    let alg = ConnectedSumAlgebra::new(1, 2);
    let basis = admissible_sequences(&alg, 3, &caps)?;
    let shown: Vec<String> = basis
        .sequences()
        .iter()
        .take(6)
        .map(|t| t.display(&alg).to_string())
        .collect();
    println!(
        "{} admissible sequences of length 3, first few: {}",
        basis.len(),
        shown.join(" ")
    );

    for k in 0..=4 {
        let generic = koszul_space_generic(&alg, k, &caps)?;
        let radix = alg.generator_count();
        let all_in = basis_members(&alg, k, &caps)?
            .iter()
            .all(|t| generic.contains_word(t, radix).unwrap_or(false));
        println!(
            "k = {k}: count {} / generic dim {} / every admissible word inside: {all_in}",
            admissible_count(1, 2, k),
            generic.basis.len()
        );
    }

    let report = verify_koszul(&alg, 6, &caps)?;
    println!(
        "Koszul complex resolves V ⊓ B up to degree 6: {}",
        report.passed()
    );
    Ok(())
}

fn basis_members(
    alg: &ConnectedSumAlgebra,
    k: usize,
    caps: &Caps,
) -> koszulhh::Result<Vec<koszulhh::AdmissibleSequence>> {
    Ok(admissible_sequences(alg, k, caps)?.sequences().to_vec())
}
