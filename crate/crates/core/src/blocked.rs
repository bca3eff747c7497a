//! Rank and kernel of linear maps that preserve a grading.
//!
//! Every complex in this crate is multigraded by the letters of its basis and
//! every differential preserves that multigrading, so a matrix that would have
//! `10^5` columns falls apart into many small diagonal blocks. The helpers here
//! take the columns (basis elements of the source) together with a key and an
//! image function, group by key and eliminate each block separately.
//!
//! Blocks are processed in parallel; results are assembled in key order so the
//! output does not depend on scheduling.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;

use crate::gf2::{BitMatrix, BitVector};

/// Groups `items` by key, preserving input order inside each group and sorting
/// the groups by key.
pub fn group_by_key<C, K: Ord + Hash + Clone>(
    items: impl IntoIterator<Item = C>,
    key: impl Fn(&C) -> K,
) -> Vec<(K, Vec<C>)> {
    let mut groups: HashMap<K, Vec<C>> = HashMap::new();
    for c in items {
        groups.entry(key(&c)).or_default().push(c);
    }
    let mut out: Vec<(K, Vec<C>)> = groups.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Builds the block matrix with one row per column of the map (the transpose of
/// the map's matrix). Targets are numbered in order of first appearance.
fn block_rows<C, T: Hash + Eq>(cols: &[C], image: &(impl Fn(&C, &mut Vec<T>) + Sync)) -> BitMatrix {
    let mut ids: HashMap<T, usize> = HashMap::new();
    let mut sparse: Vec<Vec<usize>> = Vec::with_capacity(cols.len());
    let mut buf = Vec::new();
    for c in cols {
        buf.clear();
        image(c, &mut buf);
        let row = buf
            .drain(..)
            .map(|t| {
                let next = ids.len();
                *ids.entry(t).or_insert(next)
            })
            .collect();
        sparse.push(row);
    }
    let width = ids.len();
    BitMatrix::from_rows(
        width,
        sparse
            .into_iter()
            .map(|r| BitVector::from_indices(width, r))
            .collect(),
    )
}

/// Rank of the map sending each column `c` to the sum of the targets emitted by
/// `image(c)`. Repeated targets cancel in pairs.
pub fn blocked_rank<C, K, T>(
    groups: &[(K, Vec<C>)],
    image: impl Fn(&C, &mut Vec<T>) + Sync,
) -> usize
where
    C: Sync,
    K: Sync,
    T: Hash + Eq,
{
    groups
        .par_iter()
        .map(|(_, cols)| block_rows(cols, &image).rank())
        .sum()
}

/// A basis of the kernel of the same map, each vector written as the list of
/// columns it sums.
pub fn blocked_kernel<C, K, T>(
    groups: &[(K, Vec<C>)],
    image: impl Fn(&C, &mut Vec<T>) + Sync,
) -> Vec<Vec<&C>>
where
    C: Sync,
    K: Sync,
    T: Hash + Eq,
{
    let per_block: Vec<Vec<Vec<&C>>> = groups
        .par_iter()
        .map(|(_, cols)| {
            let m = block_rows(cols, &image).transpose();
            m.kernel_basis()
                .into_iter()
                .map(|v| v.ones_iter().map(|i| &cols[i]).collect())
                .collect()
        })
        .collect();
    per_block.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocked_rank_matches_dense_rank() {
        // x^i ↦ x^i + x^{i+1} on polynomials of degree ≤ 3, truncated: one block.
        let cols: Vec<usize> = (0..4).collect();
        let groups = group_by_key(cols, |_| 0u8);
        let image = |c: &usize, out: &mut Vec<usize>| {
            out.push(*c);
            if *c + 1 < 4 {
                out.push(*c + 1);
            }
        };
        assert_eq!(blocked_rank(&groups, image), 4);

        // Two blocks; the second one has a repeated target that cancels.
        let groups = group_by_key(vec![(0, 1), (0, 2), (1, 5), (1, 6)], |c: &(u8, u8)| c.0);
        let image = |c: &(u8, u8), out: &mut Vec<u8>| match c {
            (0, x) => out.push(*x),
            (_, 5) => {
                out.push(9);
                out.push(9);
            }
            _ => out.push(7),
        };
        assert_eq!(blocked_rank(&groups, image), 3);
        let ker = blocked_kernel(&groups, image);
        assert_eq!(ker, vec![vec![&(1, 5)]]);
    }
}
