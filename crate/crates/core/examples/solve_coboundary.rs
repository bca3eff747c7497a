//! Writes a cocycle of bidegree (k, s), k + s ≥ 2, as an explicit ∂g.

use koszulhh::coboundary::{orbit_decomposition, solve_coboundary};
use koszulhh::hochschild::{random_combination, KoszulCochains};
use koszulhh::{AdmissibleSequence, Caps, CoefficientPair, Generator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> koszulhh::Result<()> {
    let c = KoszulCochains::new(CoefficientPair::diagonal(0, 3), 4, &Caps::default())?;
    let q = c.pair().q();

    let orbits = orbit_decomposition(c.basis(3));
    let stable = orbits.iter().filter(|o| o.stable).count();
    println!("length 3: {} orbits, {stable} stable", orbits.len());

    // f(x1, x2, x1) = x1 and zero elsewhere.
    let t = AdmissibleSequence::from_generators(
        &q,
        &[Generator::J(0), Generator::J(1), Generator::J(0)],
    );
    let f = c.elementary(3, -1, c.basis(3).index_of(&t).expect("admissible"), 0);
    let g = solve_coboundary(&c, &f)?;
    for i in g.support() {
        println!("g{} = {}", c.basis(2).get(i).display(&q), g.values[i]);
    }
    println!("∂g = f: {}", c.differential(&g)? == f);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let basis = c.cocycle_basis(4, -2);
    let f = random_combination(&basis, c.zero(4, -2), &mut rng);
    let g = solve_coboundary(&c, &f)?;
    println!(
        "random cocycle in bidegree (4,-2): support {}, ∂g = f: {}",
        f.support().count(),
        c.differential(&g)? == f
    );
    Ok(())
}
