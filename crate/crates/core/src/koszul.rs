//! Koszul complexes of connected sums `V_* ⊓ B_*`.
//!
//! The top-degree piece `K^k_k` of the Koszul complex has a basis of tensors
//! `t_1 ⊗ … ⊗ t_k` of generators with no two equal atoms next to each other
//! ([`AdmissibleSequence`]). [`koszul_space_generic`] computes the same space
//! from the definition (intersection of shifted relation spaces) and is kept as
//! an oracle. [`verify_koszul`] assembles `alg ⊗ K^i_i ⊗ alg` degree by degree
//! and checks that it resolves the algebra.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;

use crate::algebra::{ConnectedSumAlgebra, Generator, MultiDegree};
use crate::blocked::{blocked_rank, group_by_key};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Default guard on enumerated sequence counts.
pub const DEFAULT_CAP: u128 = 2_000_000;

/// Resource limits for enumerations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_sequences: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_sequences: DEFAULT_CAP,
        }
    }
}

impl Caps {
    pub fn new(max_sequences: u128) -> Self {
        Self { max_sequences }
    }

    pub fn check(&self, what: impl Into<String>, count: u128) -> Result<()> {
        if count > self.max_sequences {
            Err(Error::CapExceeded {
                what: what.into(),
                count,
                cap: self.max_sequences,
            })
        } else {
            Ok(())
        }
    }
}

/// A word in the degree-one generators, stored as positions in the canonical
/// degree-one basis (`V` generators first, then atoms).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AdmissibleSequence(SmallVec<[u8; 12]>);

impl AdmissibleSequence {
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        Self(indices.into_iter().map(|i| i as u8).collect())
    }

    pub fn from_generators(alg: &ConnectedSumAlgebra, gens: &[Generator]) -> Self {
        Self::from_indices(gens.iter().map(|&g| alg.generator_index(g)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn index_at(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn first(&self) -> usize {
        self.0[0] as usize
    }

    pub fn last(&self) -> usize {
        self.0[self.0.len() - 1] as usize
    }

    pub fn first_opt(&self) -> Option<usize> {
        self.0.first().map(|&i| i as usize)
    }

    pub fn last_opt(&self) -> Option<usize> {
        self.0.last().map(|&i| i as usize)
    }

    pub fn generators(&self, alg: &ConnectedSumAlgebra) -> Vec<Generator> {
        self.indices().map(|i| alg.generator_at(i)).collect()
    }

    /// No two equal atoms are adjacent.
    pub fn is_admissible(&self, alg: &ConnectedSumAlgebra) -> bool {
        let m = alg.v_dim();
        self.0
            .windows(2)
            .all(|w| !(w[0] == w[1] && w[0] as usize >= m))
    }

    /// First and last entries are the same atom.
    pub fn is_stable(&self, alg: &ConnectedSumAlgebra) -> bool {
        !self.is_empty() && self.first() >= alg.v_dim() && self.first() == self.last()
    }

    /// `t_1..t_k ↦ t_k, t_1..t_{k-1}`, identity on stable sequences.
    pub fn right_translate(&self, alg: &ConnectedSumAlgebra) -> Self {
        if self.is_empty() || self.is_stable(alg) {
            return self.clone();
        }
        let mut out = SmallVec::with_capacity(self.len());
        out.push(self.0[self.len() - 1]);
        out.extend_from_slice(&self.0[..self.len() - 1]);
        Self(out)
    }

    /// `t_1..t_k ↦ t_2..t_k, t_1`, identity on stable sequences.
    pub fn left_translate(&self, alg: &ConnectedSumAlgebra) -> Self {
        if self.is_empty() || self.is_stable(alg) {
            return self.clone();
        }
        let mut out: SmallVec<[u8; 12]> = SmallVec::with_capacity(self.len());
        out.extend_from_slice(&self.0[1..]);
        out.push(self.0[0]);
        Self(out)
    }

    /// Drops the last entry.
    pub fn left_truncation(&self) -> Self {
        Self(SmallVec::from_slice(&self.0[..self.len() - 1]))
    }

    /// Drops the first entry.
    pub fn right_truncation(&self) -> Self {
        Self(SmallVec::from_slice(&self.0[1..]))
    }

    /// `g · self`.
    pub fn prepend(&self, g: usize) -> Self {
        let mut out = SmallVec::with_capacity(self.len() + 1);
        out.push(g as u8);
        out.extend_from_slice(&self.0);
        Self(out)
    }

    /// `self · g`.
    pub fn append(&self, g: usize) -> Self {
        let mut out = self.0.clone();
        out.push(g as u8);
        Self(out)
    }

    /// Mixed-radix code with the first entry most significant, so numeric order
    /// agrees with lexicographic order for sequences of equal length.
    pub fn code(&self, radix: usize) -> u64 {
        self.0
            .iter()
            .fold(0u64, |acc, &i| acc * radix as u64 + i as u64)
    }

    /// Letter counts as a multidegree.
    pub fn multidegree(&self, coords: usize) -> MultiDegree {
        let mut md: MultiDegree = SmallVec::from_elem(0, coords);
        for i in self.indices() {
            md[i] += 1;
        }
        md
    }

    /// Formats with generator names, e.g. `(x1,v2,x1)`.
    pub fn display<'a>(&'a self, alg: &'a ConnectedSumAlgebra) -> impl fmt::Display + 'a {
        struct D<'a>(&'a AdmissibleSequence, &'a ConnectedSumAlgebra);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("(")?;
                for (i, g) in self.0.generators(self.1).iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
        }
        D(self, alg)
    }

    pub fn parse(alg: &ConnectedSumAlgebra, names: &[String]) -> Result<Self> {
        let mut out = SmallVec::new();
        for n in names {
            let g: Generator = n.parse()?;
            let ok = match g {
                Generator::V(i) => i < alg.v_dim(),
                Generator::J(j) => j < alg.atoms(),
            };
            if !ok {
                return Err(Error::Parse(format!("generator {n} not in the algebra")));
            }
            out.push(alg.generator_index(g) as u8);
        }
        Ok(Self(out))
    }
}

impl fmt::Debug for AdmissibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// Number of admissible sequences of length `k`.
pub fn admissible_count(m: usize, n: usize, k: usize) -> u128 {
    if k == 0 {
        return 1;
    }
    // Ending in a V generator / ending in an atom.
    let (mut ends_v, mut ends_j) = (m as u128, n as u128);
    for _ in 1..k {
        let next_v = m as u128 * (ends_v + ends_j);
        let next_j = n as u128 * ends_v + (n as u128).saturating_sub(1) * ends_j;
        ends_v = next_v;
        ends_j = next_j;
    }
    ends_v + ends_j
}

/// The admissible basis of `K^k_k`, in lexicographic order.
#[derive(Clone, Debug)]
pub struct KoszulBasis {
    alg: ConnectedSumAlgebra,
    k: usize,
    seqs: Vec<AdmissibleSequence>,
    index: HashMap<AdmissibleSequence, usize>,
}

impl KoszulBasis {
    pub fn algebra(&self) -> &ConnectedSumAlgebra {
        &self.alg
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.seqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seqs.is_empty()
    }

    pub fn sequences(&self) -> &[AdmissibleSequence] {
        &self.seqs
    }

    pub fn get(&self, i: usize) -> &AdmissibleSequence {
        &self.seqs[i]
    }

    pub fn index_of(&self, t: &AdmissibleSequence) -> Option<usize> {
        self.index.get(t).copied()
    }
}

/// Enumerates `A_k(I, n)` in lexicographic order.
pub fn admissible_sequences(
    alg: &ConnectedSumAlgebra,
    k: usize,
    caps: &Caps,
) -> Result<KoszulBasis> {
    let (m, n) = (alg.v_dim(), alg.atoms());
    let count = admissible_count(m, n, k);
    caps.check(format!("admissible sequences of length {k}"), count)?;
    let r = alg.generator_count();
    let mut seqs = Vec::with_capacity(count as usize);
    let mut cur: Vec<u8> = Vec::with_capacity(k);
    fn rec(cur: &mut Vec<u8>, k: usize, r: usize, m: usize, out: &mut Vec<AdmissibleSequence>) {
        if cur.len() == k {
            out.push(AdmissibleSequence(SmallVec::from_slice(cur)));
            return;
        }
        for g in 0..r {
            if let Some(&prev) = cur.last() {
                if prev as usize == g && g >= m {
                    continue;
                }
            }
            cur.push(g as u8);
            rec(cur, k, r, m, out);
            cur.pop();
        }
    }
    rec(&mut cur, k, r, m, &mut seqs);
    debug_assert_eq!(seqs.len() as u128, count);
    let index = seqs
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    Ok(KoszulBasis {
        alg: *alg,
        k,
        seqs,
        index,
    })
}

/// `K^k_k` computed from the definition as a subspace of the `k`-fold tensor
/// power of the degree-one piece. Coordinates are mixed-radix codes of words.
#[derive(Clone, Debug)]
pub struct GenericKoszulSpace {
    pub k: usize,
    pub ambient_dim: usize,
    pub basis: Vec<BitVector>,
}

impl GenericKoszulSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Whether the tensor of `t` lies in the space.
    pub fn contains_word(&self, t: &AdmissibleSequence, radix: usize) -> Result<bool> {
        let target = BitVector::unit(self.ambient_dim, t.code(radix) as usize);
        let span = BitMatrix::from_columns(self.ambient_dim, &self.basis);
        Ok(span.solve(&target)?.is_some())
    }
}

/// The relation space `R = ker(Q_1 ⊗ Q_1 → Q_2)` as a kernel, intersected over
/// all `k - 1` positions.
pub fn koszul_space_generic(
    alg: &ConnectedSumAlgebra,
    k: usize,
    caps: &Caps,
) -> Result<GenericKoszulSpace> {
    let r = alg.generator_count();
    let ambient = (r as u128).pow(k as u32);
    caps.check(format!("tensor power of degree {k}"), ambient)?;
    let ambient = ambient as usize;
    if k < 2 {
        let basis = (0..ambient).map(|i| BitVector::unit(ambient, i)).collect();
        return Ok(GenericKoszulSpace {
            k,
            ambient_dim: ambient,
            basis,
        });
    }
    let n2 = alg.graded_dim(2);
    // One block of rows per position j: Q_1^{⊗j} ⊗ Q_2 ⊗ Q_1^{⊗(k-j-2)}.
    let block_rows = r.pow(k as u32 - 2) * n2;
    let mut mat = BitMatrix::zeros(block_rows * (k - 1), ambient);
    for col in 0..ambient {
        let mut word = vec![0usize; k];
        let mut c = col;
        for slot in word.iter_mut().rev() {
            *slot = c % r;
            c /= r;
        }
        for j in 0..k - 1 {
            let prod = alg.graded_multiply(
                &alg.basis_element(1, word[j]),
                &alg.basis_element(1, word[j + 1]),
            );
            for p in prod.coeffs.ones_iter() {
                let mut row = 0usize;
                for &w in &word[..j] {
                    row = row * r + w;
                }
                row = row * n2 + p;
                for &w in &word[j + 2..] {
                    row = row * r + w;
                }
                mat.set(j * block_rows + row, col, true);
            }
        }
    }
    Ok(GenericKoszulSpace {
        k,
        ambient_dim: ambient,
        basis: mat.kernel_basis(),
    })
}

/// Homology of one component of the Koszul complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulCell {
    /// Internal degree.
    pub degree: usize,
    /// Homological degree.
    pub i: usize,
    pub dim: usize,
    pub homology: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KoszulReport {
    pub v_dim: usize,
    pub atoms: usize,
    pub max_degree: usize,
    pub cells: Vec<KoszulCell>,
    /// `(degree, i, homology)` for every failed vanishing or `d∘d ≠ 0`.
    pub failures: Vec<String>,
}

impl KoszulReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A basis element `a ⊗ t ⊗ b` of `alg ⊗ K^i_i ⊗ alg`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct KTriple {
    left: (usize, usize),
    word: AdmissibleSequence,
    right: (usize, usize),
}

/// Checks that the Koszul complex resolves `alg` in every internal degree up to
/// `max_degree`: `d∘d = 0`, no homology in positive homological degree, and
/// `H_0` of the right dimension with the multiplication map onto `alg_d`.
pub fn verify_koszul(
    alg: &ConnectedSumAlgebra,
    max_degree: usize,
    caps: &Caps,
) -> Result<KoszulReport> {
    if max_degree < 1 {
        return Err(Error::InvalidArgument(
            "max internal degree must be ≥ 1".into(),
        ));
    }
    let bases: Vec<KoszulBasis> = (0..=max_degree)
        .map(|i| admissible_sequences(alg, i, caps))
        .collect::<Result<_>>()?;
    let coords = alg.generator_count();
    let mdeg = |t: &KTriple| -> MultiDegree {
        let mut md = alg.multidegree(t.left.0, t.left.1);
        let w = t.word.multidegree(coords);
        let r = alg.multidegree(t.right.0, t.right.1);
        for c in 0..coords {
            md[c] += w[c] + r[c];
        }
        md
    };
    let components = |d: usize, i: usize| -> Vec<KTriple> {
        let mut out = Vec::new();
        for p in 0..=(d - i) {
            let q = d - i - p;
            for a in 0..alg.graded_dim(p) {
                for t in bases[i].sequences() {
                    for b in 0..alg.graded_dim(q) {
                        out.push(KTriple {
                            left: (p, a),
                            word: t.clone(),
                            right: (q, b),
                        });
                    }
                }
            }
        }
        out
    };
    // d_i(a ⊗ t ⊗ b) = (a t_1) ⊗ r(t) ⊗ b + a ⊗ l(t) ⊗ (t_i b)
    let differential = |t: &KTriple, out: &mut Vec<KTriple>| {
        let (p, a) = t.left;
        let (q, b) = t.right;
        if let Some(c) = alg.mul_basis(p, a, 1, t.word.first()) {
            out.push(KTriple {
                left: (p + 1, c),
                word: t.word.right_truncation(),
                right: t.right,
            });
        }
        if let Some(c) = alg.mul_basis(1, t.word.last(), q, b) {
            out.push(KTriple {
                left: t.left,
                word: t.word.left_truncation(),
                right: (q + 1, c),
            });
        }
    };
    let augmentation = |t: &KTriple, out: &mut Vec<(usize, usize)>| {
        let (p, a) = t.left;
        let (q, b) = t.right;
        if let Some(c) = alg.mul_basis(p, a, q, b) {
            out.push((p + q, c));
        }
    };

    let mut cells = Vec::new();
    let mut failures = Vec::new();
    for d in 0..=max_degree {
        let groups: Vec<_> = (0..=d)
            .map(|i| group_by_key(components(d, i), mdeg))
            .collect();
        // rank of d_i : K_i → K_{i-1}, with d_0 replaced by the augmentation.
        let mut ranks = vec![0usize; d + 2];
        ranks[0] = blocked_rank(&groups[0], augmentation);
        for i in 1..=d {
            ranks[i] = blocked_rank(&groups[i], differential);
            // d_{i-1} ∘ d_i = 0, checked on every basis element.
            for (_, cols) in &groups[i] {
                for t in cols {
                    let mut once = Vec::new();
                    differential(t, &mut once);
                    if i == 1 {
                        let mut twice = Vec::new();
                        for u in &once {
                            augmentation(u, &mut twice);
                        }
                        if !cancels(twice) {
                            failures.push(format!("degree {d}: augmentation ∘ d_1 ≠ 0"));
                        }
                    } else {
                        let mut twice = Vec::new();
                        for u in &once {
                            differential(u, &mut twice);
                        }
                        if !cancels(twice) {
                            failures.push(format!("degree {d}: d_{} ∘ d_{i} ≠ 0", i - 1));
                        }
                    }
                }
            }
        }
        for i in 0..=d {
            let dim: usize = groups[i].iter().map(|(_, c)| c.len()).sum();
            let kernel = if i == 0 { dim } else { dim - ranks[i] };
            let homology = kernel - ranks[i + 1];
            cells.push(KoszulCell {
                degree: d,
                i,
                dim,
                homology,
            });
            if i > 0 && homology != 0 {
                failures.push(format!(
                    "degree {d}, i = {i}: homology of dimension {homology}"
                ));
            }
            if i == 0 {
                if homology != alg.graded_dim(d) {
                    failures.push(format!(
                        "degree {d}: H_0 has dimension {homology}, algebra has {}",
                        alg.graded_dim(d)
                    ));
                }
                if ranks[0] != alg.graded_dim(d) {
                    failures.push(format!("degree {d}: multiplication is not onto"));
                }
            }
        }
    }
    failures.dedup();
    Ok(KoszulReport {
        v_dim: alg.v_dim(),
        atoms: alg.atoms(),
        max_degree,
        cells,
        failures,
    })
}

/// Whether a formal sum of basis elements is zero over GF(2).
fn cancels<T: std::hash::Hash + Eq>(terms: Vec<T>) -> bool {
    let mut odd: HashMap<T, bool> = HashMap::new();
    for t in terms {
        *odd.entry(t).or_insert(false) ^= true;
    }
    odd.values().all(|&v| !v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(alg: &ConnectedSumAlgebra, basis: &KoszulBasis) -> Vec<String> {
        basis
            .sequences()
            .iter()
            .map(|s| s.display(alg).to_string())
            .collect()
    }

    #[test]
    fn admissible_examples() {
        let caps = Caps::default();
        let b3 = ConnectedSumAlgebra::new(0, 3);
        assert_eq!(admissible_sequences(&b3, 2, &caps).unwrap().len(), 6);
        let mixed = ConnectedSumAlgebra::new(1, 1);
        let basis = admissible_sequences(&mixed, 2, &caps).unwrap();
        assert_eq!(names(&mixed, &basis), vec!["(v1,v1)", "(v1,x1)", "(x1,v1)"]);
        let empty = admissible_sequences(&b3, 0, &caps).unwrap();
        assert_eq!(empty.len(), 1);
        assert!(empty.get(0).is_empty());
    }

    #[test]
    fn admissible_count_against_brute_force() {
        let caps = Caps::default();
        for m in 0..=4 {
            for n in 0..=(4 - m) {
                let alg = ConnectedSumAlgebra::new(m, n);
                let r = m + n;
                for k in 0..=6 {
                    let brute = (0..r.pow(k as u32))
                        .filter(|&code| {
                            let mut word = Vec::with_capacity(k);
                            let mut c = code;
                            for _ in 0..k {
                                word.push(c % r);
                                c /= r;
                            }
                            AdmissibleSequence::from_indices(word).is_admissible(&alg)
                        })
                        .count();
                    let brute = if r == 0 && k == 0 { 1 } else { brute };
                    let basis = admissible_sequences(&alg, k, &caps).unwrap();
                    assert_eq!(basis.len(), brute, "m={m} n={n} k={k}");
                    assert_eq!(admissible_count(m, n, k), brute as u128);
                    assert!(basis.sequences().windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
        // m = 0: n (n-1)^{k-1}
        assert_eq!(admissible_count(0, 3, 4), 24);
        assert_eq!(admissible_count(0, 5, 3), 80);
    }

    #[test]
    fn cap_is_enforced() {
        let alg = ConnectedSumAlgebra::new(2, 3);
        let err = admissible_sequences(&alg, 6, &Caps::new(100)).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }

    #[test]
    fn generic_space_examples() {
        let caps = Caps::default();
        let alg = ConnectedSumAlgebra::new(1, 2);
        assert_eq!(koszul_space_generic(&alg, 0, &caps).unwrap().dim(), 1);
        assert_eq!(koszul_space_generic(&alg, 1, &caps).unwrap().dim(), 3);
        let b3 = ConnectedSumAlgebra::new(0, 3);
        assert_eq!(koszul_space_generic(&b3, 2, &caps).unwrap().dim(), 6);
        let dual = ConnectedSumAlgebra::new(2, 0);
        assert_eq!(koszul_space_generic(&dual, 3, &caps).unwrap().dim(), 8);
    }

    #[test]
    fn relation_space_complements_squares() {
        let caps = Caps::default();
        for m in 0..=3 {
            for n in 0..=(4 - m) {
                let alg = ConnectedSumAlgebra::new(m, n);
                let r = koszul_space_generic(&alg, 2, &caps).unwrap();
                assert_eq!(r.dim() + n, (m + n) * (m + n));
            }
        }
    }

    #[test]
    fn translations_and_truncations() {
        let alg = ConnectedSumAlgebra::new(1, 3);
        let t = AdmissibleSequence::from_generators(
            &alg,
            &[Generator::J(0), Generator::V(0), Generator::J(2)],
        );
        let r = t.right_translate(&alg);
        assert_eq!(r.display(&alg).to_string(), "(x3,x1,v1)");
        assert_eq!(r.left_translate(&alg), t);
        assert_eq!(t.left_truncation().display(&alg).to_string(), "(x1,v1)");
        assert_eq!(t.right_truncation().display(&alg).to_string(), "(v1,x3)");
        let stable = AdmissibleSequence::from_generators(
            &alg,
            &[Generator::J(0), Generator::J(1), Generator::J(0)],
        );
        assert!(stable.is_stable(&alg));
        assert_eq!(stable.right_translate(&alg), stable);
    }

    #[test]
    fn small_algebras_are_koszul() {
        let caps = Caps::default();
        for (m, n, d) in [(0, 1, 4), (2, 0, 4), (1, 3, 5)] {
            let report = verify_koszul(&ConnectedSumAlgebra::new(m, n), d, &caps).unwrap();
            assert!(report.passed(), "{:?}", report.failures);
        }
    }

    #[test]
    fn degree_zero_homology_of_polynomial_ring() {
        let caps = Caps::default();
        let report = verify_koszul(&ConnectedSumAlgebra::new(0, 1), 2, &caps).unwrap();
        let h0: Vec<usize> = report
            .cells
            .iter()
            .filter(|c| c.i == 0)
            .map(|c| c.homology)
            .collect();
        assert_eq!(h0, vec![1, 1, 1]);
    }
}
