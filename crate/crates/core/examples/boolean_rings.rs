//! Boolean rings as bit strings over their atoms, subrings as partitions of
//! the atoms, and the connected sum `V_* ⊓ B_*`.

use koszulhh::{BitVector, BooleanRing, ConnectedSumAlgebra, Subring};

fn main() -> koszulhh::Result<()> {
    let b = BooleanRing::new(3)?;
    let x: BitVector = "110".parse()?;
    let y: BitVector = "001".parse()?;
    println!("x·y = {}   x+y = {}", b.mul(&x, &y), b.add(&x, &y));

    // z = 101 lies in the ideal (x, y) and splits as z = zx + zy.
    let z: BitVector = "101".parse()?;
    let (zx, zy) = b.ideal_decompose(&z, &x, &y)?;
    println!("{z} = {zx} + {zy}");

    let a = Subring::prime(3);
    let ax = a.adjoin(&x);
    println!("A = {:?}, A<x> = {:?}", a.blocks(), ax.blocks());
    println!("coarsening map A<x> -> A: {:?}", a.coarsening_map(&ax)?);

    let alg = ConnectedSumAlgebra::new(2, 3);
    let dims: Vec<usize> = (0..5).map(|d| alg.graded_dim(d)).collect();
    println!("dim (V ⊓ B)_d for d = 0..4: {dims:?}");
    for i in 0..alg.graded_dim(1) {
        let row: Vec<String> = (0..alg.graded_dim(1))
            .map(|j| match alg.mul_basis(1, i, 1, j) {
                Some(p) => alg.basis_label(2, p),
                None => "0".into(),
            })
            .collect();
        println!("  {} · _ = {row:?}", alg.basis_label(1, i));
    }
    Ok(())
}
