//! Massey products over H = V_* ⊓ B_* with zero differential: every tuple with
//! vanishing neighbouring products gives the zero class.

use koszulhh::massey::{massey_product, strong_massey_check, trivial_defining_system, DgAlgebra};
use koszulhh::ConnectedSumAlgebra;

fn main() -> koszulhh::Result<()> {
    let h = DgAlgebra::from_connected_sum(&ConnectedSumAlgebra::new(2, 3), 6);
    println!("dims {:?}", h.dims());

    // <v1, x1, v2>: v1·x1 = 0 and x1·v2 = 0.
    let triple = [
        h.basis_element(1, 0),
        h.basis_element(1, 2),
        h.basis_element(1, 1),
    ];
    let ds = trivial_defining_system(&h, &triple)?;
    let class = massey_product(&h, &ds)?;
    println!("<v1, x1, v2> is zero: {}", class.is_zero(&h));

    let report = strong_massey_check(&h, 200, 5, 0)?;
    println!(
        "{} samples by length {:?}, counterexamples: {}",
        report.samples,
        report.by_length,
        report.counterexamples.len()
    );
    Ok(())
}
