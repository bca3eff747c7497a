//! Lifting cocycles, coboundaries and defining systems along an acyclic
//! fibration `q: S → T`.

use koszulhh::massey::{
    acyclic_extension, lift_cocycle, lift_defining_system, massey_product, trivial_defining_system,
    DgAlgebra,
};
use koszulhh::ConnectedSumAlgebra;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> koszulhh::Result<()> {
    let target = DgAlgebra::from_connected_sum(&ConnectedSumAlgebra::new(1, 1), 3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let q = acyclic_extension(&target, &[1, 2], Some(&mut rng))?;
    println!(
        "source dims {:?} -> target dims {:?}, acyclic fibration: {}",
        q.source.dims(),
        q.target.dims(),
        q.is_acyclic_fibration()
    );

    let b = target.basis_element(1, 0);
    let a = lift_cocycle(&q, &b)?;
    println!(
        "lift of v1: δa = 0: {}, q(a) = v1: {}",
        q.source.is_cocycle(&a),
        q.apply(&a) == b
    );

    // <v1, x1, v1> in the target, lifted to the source.
    let images = [
        target.basis_element(1, 0),
        target.basis_element(1, 1),
        target.basis_element(1, 0),
    ];
    let classes: Vec<_> = images
        .iter()
        .map(|b| lift_cocycle(&q, b))
        .collect::<koszulhh::Result<_>>()?;
    let images: Vec<_> = classes.iter().map(|a| q.apply(a)).collect();
    let ds = trivial_defining_system(&target, &images)?;
    let lifted = lift_defining_system(&q, &classes, &ds)?;
    let upstairs = massey_product(&q.source, &lifted)?;
    let downstairs = massey_product(&target, &ds)?;
    let mapped = koszulhh::massey::CohomologyClass {
        representative: q.apply(&upstairs.representative),
    };
    println!(
        "lifted system maps onto the original: {}",
        q.map_system(&lifted) == ds
    );
    println!(
        "product classes match: {}",
        mapped.equals(&downstairs, &target)
    );
    Ok(())
}
