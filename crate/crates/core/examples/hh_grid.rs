//! A table of dim HH^{k,s}(V_* ⊓ B_*), the same numbers `koszulhh hh-grid`
//! prints.
//!
//! cargo run --release --example hh_grid -- 1 3

use koszulhh::hochschild::KoszulCochains;
use koszulhh::{Caps, CoefficientPair};

fn main() -> koszulhh::Result<()> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (m, n) = (
        args.first().copied().unwrap_or(0),
        args.get(1).copied().unwrap_or(3),
    );
    let c = KoszulCochains::new(CoefficientPair::diagonal(m, n), 6, &Caps::default())?;

    println!("dim HH^(k,s), vDim = {m}, atoms = {n}");
    print!("{:>6}", "s \\ k");
    for k in 0..=6 {
        print!("{k:>6}");
    }
    println!();
    for s in (-4..=1).rev() {
        print!("{s:>6}");
        for k in 0..=6 {
            print!("{:>6}", c.hh(k, s).hh);
        }
        println!();
    }
    Ok(())
}
