//! Extends a cocycle of bidegree (k, 1-k) from V ⊓ A to V ⊓ A⟨x⟩ and restricts
//! it back.

use koszulhh::coboundary::{extend_any_cocycle, restrict, Refinement};
use koszulhh::hochschild::{random_combination, KoszulCochains};
use koszulhh::{BitVector, Caps, CoefficientPair, Subring};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> koszulhh::Result<()> {
    let caps = Caps::default();
    let a = Subring::prime(3);
    let x: BitVector = "110".parse()?;
    let c = KoszulCochains::new(CoefficientPair::new(1, a.clone()), 3, &caps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = Refinement::new(&a, &x)?;
    for k in 2..=3 {
        let s = 1 - k as i64;
        let f = random_combination(&c.cocycle_basis(k, s), c.zero(k, s), &mut rng);
        let (fine, lift) = extend_any_cocycle(&c, &x, &f, &caps)?;
        println!(
            "k = {k}: {} -> {} sequences, ∂f_x = 0: {}, restriction = f: {}",
            c.basis(k).len(),
            fine.basis(k).len(),
            fine.differential(&lift)?.is_zero(),
            restrict(&r, &c, &fine, &lift) == f
        );
    }
    Ok(())
}
