//! HH^{k,s} computed from weight-truncated normalized bar cochains, next to
//! the Koszul answer.

use koszulhh::hochschild::{hh_bar_oracle, hh_dim};
use koszulhh::{Caps, CoefficientPair};

fn main() -> koszulhh::Result<()> {
    let caps = Caps::default();
    let pair = CoefficientPair::diagonal(1, 2);
    for (k, s) in [(1, 0), (2, -1), (3, -1), (2, 0)] {
        let koszul = hh_dim(&pair, k, s, &caps)?.hh;
        let bar = hh_bar_oracle(&pair, k, s, 1, 6, &caps)?;
        let by_weight: Vec<String> = bar
            .factors
            .iter()
            .map(|f| format!("D={}:{}", f.max_weight, f.cohomology))
            .collect();
        println!("HH^({k},{s}): koszul {koszul}, bar {}", by_weight.join(" "));
    }
    Ok(())
}
