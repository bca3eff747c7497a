//! Bigraded Hochschild cohomology `HH^{k,s}(Q, M)` for `Q = V_* ⊓ A_*` acting on
//! `M = V_* ⊓ B_*`.
//!
//! Because `Q` is Koszul, `HH^{k,s}` is the cohomology of the complex of maps
//! `K^k_k → M_{k+s}` with
//!
//! ```text
//! ∂f(t_1..t_{k+1}) = t_1·f(t_2..t_{k+1}) + f(t_1..t_k)·t_{k+1}
//! ```
//!
//! [`hh_bar_oracle`] recomputes the same groups from the reduced bar complex,
//! which knows nothing about admissible sequences.

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::algebra::{CoefficientPair, MultiDegree};
use crate::blocked::{blocked_kernel, blocked_rank, group_by_key};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::koszul::{admissible_sequences, AdmissibleSequence, Caps, KoszulBasis};

/// A cochain of bidegree `(k, s)`: one value in `M_{k+s}` per admissible
/// sequence of length `k`, in the order of the Koszul basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    pub k: usize,
    pub s: i64,
    pub values: Vec<BitVector>,
}

impl Cochain {
    /// Internal degree `k + s` of the values.
    pub fn target_degree(&self) -> i64 {
        self.k as i64 + self.s
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(BitVector::is_zero)
    }

    pub fn add_assign(&mut self, other: &Cochain) {
        assert_eq!((self.k, self.s), (other.k, other.s));
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.xor_assign(b);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, _)| i)
    }
}

/// Dimensions of one bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhReport {
    pub k: usize,
    pub s: i64,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub hh: usize,
}

/// A basis element of a cochain space: the cochain sending the sequence to the
/// basis vector `e` of `M_{k+s}` and everything else to zero.
type Elementary = (AdmissibleSequence, usize);

/// The Koszul cochain complexes of a coefficient pair, with the admissible
/// bases enumerated once up to length `k_max`.
#[derive(Clone, Debug)]
pub struct KoszulCochains {
    pair: CoefficientPair,
    bases: Vec<KoszulBasis>,
}

impl KoszulCochains {
    pub fn new(pair: CoefficientPair, k_max: usize, caps: &Caps) -> Result<Self> {
        let q = pair.q();
        let bases = (0..=k_max)
            .map(|k| admissible_sequences(&q, k, caps))
            .collect::<Result<_>>()?;
        Ok(Self { pair, bases })
    }

    pub fn pair(&self) -> &CoefficientPair {
        &self.pair
    }

    pub fn k_max(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, k: usize) -> &KoszulBasis {
        &self.bases[k]
    }

    pub fn target_dim(&self, k: usize, s: i64) -> usize {
        self.pair.m_dim(k as i64 + s)
    }

    pub fn dim(&self, k: usize, s: i64) -> usize {
        self.bases[k].len() * self.target_dim(k, s)
    }

    pub fn zero(&self, k: usize, s: i64) -> Cochain {
        let t = self.target_dim(k, s);
        Cochain {
            k,
            s,
            values: vec![BitVector::zeros(t); self.bases[k].len()],
        }
    }

    /// The cochain with a single nonzero value.
    pub fn elementary(&self, k: usize, s: i64, seq: usize, e: usize) -> Cochain {
        let mut f = self.zero(k, s);
        f.values[seq].toggle(e);
        f
    }

    /// Coordinates in the basis ordered by sequence, then by target index.
    pub fn to_vector(&self, f: &Cochain) -> BitVector {
        let t = self.target_dim(f.k, f.s);
        let mut v = BitVector::zeros(self.dim(f.k, f.s));
        for (i, val) in f.values.iter().enumerate() {
            for e in val.ones_iter() {
                v.set(i * t + e, true);
            }
        }
        v
    }

    pub fn from_vector(&self, k: usize, s: i64, v: &BitVector) -> Cochain {
        let t = self.target_dim(k, s);
        let mut f = self.zero(k, s);
        for idx in v.ones_iter() {
            f.values[idx / t].toggle(idx % t);
        }
        f
    }

    pub fn check_shape(&self, f: &Cochain) -> Result<()> {
        if f.k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "cochain length {} beyond the enumerated {}",
                f.k,
                self.k_max()
            )));
        }
        let t = self.target_dim(f.k, f.s);
        if f.values.len() != self.bases[f.k].len() || f.values.iter().any(|v| v.len() != t) {
            return Err(Error::Dimension(format!(
                "cochain of bidegree ({}, {}) has the wrong shape",
                f.k, f.s
            )));
        }
        Ok(())
    }

    /// `g · u` for a degree-one generator index `g` of `Q` and `u ∈ M_j`.
    pub fn act(&self, g: usize, j: i64, u: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.pair.m_dim(j + 1));
        if j >= 0 {
            for e in u.ones_iter() {
                self.pair.act_basis(1, g, j as usize, e, |c| out.toggle(c));
            }
        }
        out
    }

    /// Value of `∂f` at a sequence of length `f.k + 1`.
    pub fn differential_at(&self, f: &Cochain, u: &AdmissibleSequence) -> BitVector {
        let basis = &self.bases[f.k];
        let j = f.target_degree();
        let head = basis
            .index_of(&u.right_truncation())
            .expect("truncation of an admissible sequence is admissible");
        let tail = basis
            .index_of(&u.left_truncation())
            .expect("truncation of an admissible sequence is admissible");
        let mut out = self.act(u.first(), j, &f.values[head]);
        out.xor_assign(&self.act(u.last(), j, &f.values[tail]));
        out
    }

    /// `∂f`, a cochain of bidegree `(k + 1, s)`.
    pub fn differential(&self, f: &Cochain) -> Result<Cochain> {
        self.check_shape(f)?;
        if f.k + 1 > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "∂ of a length-{} cochain needs sequences of length {}",
                f.k,
                f.k + 1
            )));
        }
        let next = &self.bases[f.k + 1];
        let values = next
            .sequences()
            .iter()
            .map(|u| self.differential_at(f, u))
            .collect();
        Ok(Cochain {
            k: f.k + 1,
            s: f.s,
            values,
        })
    }

    /// The dense matrix of `∂^k` in the coordinates of [`Self::to_vector`].
    pub fn differential_matrix(&self, k: usize, s: i64) -> Result<BitMatrix> {
        if k + 1 > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "need sequences of length {}",
                k + 1
            )));
        }
        let rows = self.dim(k + 1, s);
        let cols = self.dim(k, s);
        let t = self.target_dim(k, s);
        let columns: Vec<BitVector> = (0..cols)
            .map(|c| {
                let f = self.elementary(k, s, c / t, c % t);
                self.to_vector(&self.differential(&f).expect("shape checked"))
            })
            .collect();
        Ok(BitMatrix::from_columns(rows, &columns))
    }

    fn elementaries(&self, k: usize, s: i64) -> Vec<Elementary> {
        let t = self.target_dim(k, s);
        self.bases[k]
            .sequences()
            .iter()
            .flat_map(|seq| (0..t).map(move |e| (seq.clone(), e)))
            .collect()
    }

    fn grouped(&self, k: usize, s: i64) -> Vec<(MultiDegree, Vec<Elementary>)> {
        let j = (k as i64 + s).max(0) as usize;
        let coords = self.pair.q().generator_count();
        group_by_key(self.elementaries(k, s), |(seq, e)| {
            let mut key = seq.multidegree(coords);
            for (a, b) in key.iter_mut().zip(self.pair.m_multidegree(j, *e)) {
                *a -= b;
            }
            key
        })
    }

    /// Image of an elementary cochain under `∂`, as elementary cochains of the
    /// next bidegree.
    fn image(&self, s: i64, (seq, e): &Elementary, out: &mut Vec<Elementary>) {
        let q = self.pair.q();
        let j = (seq.len() as i64 + s) as usize;
        let m = q.v_dim();
        for g in 0..q.generator_count() {
            let atom = g >= m;
            if !(atom && seq.first_opt() == Some(g)) {
                let u = seq.prepend(g);
                self.pair
                    .act_basis(1, g, j, *e, |c| out.push((u.clone(), c)));
            }
            if !(atom && seq.last_opt() == Some(g)) {
                let u = seq.append(g);
                self.pair
                    .act_basis(1, g, j, *e, |c| out.push((u.clone(), c)));
            }
        }
    }

    /// `rank ∂^k` on bidegree `(k, s)`.
    pub fn differential_rank(&self, k: usize, s: i64) -> usize {
        if self.dim(k, s) == 0 {
            return 0;
        }
        blocked_rank(&self.grouped(k, s), |c, out| self.image(s, c, out))
    }

    pub fn hh(&self, k: usize, s: i64) -> HhReport {
        let cochains = self.dim(k, s);
        let cocycles = cochains - self.differential_rank(k, s);
        let coboundaries = if k == 0 {
            0
        } else {
            self.differential_rank(k - 1, s)
        };
        HhReport {
            k,
            s,
            cochains,
            cocycles,
            coboundaries,
            hh: cocycles - coboundaries,
        }
    }

    /// A basis of the cocycles of bidegree `(k, s)`.
    pub fn cocycle_basis(&self, k: usize, s: i64) -> Vec<Cochain> {
        if self.dim(k, s) == 0 {
            return Vec::new();
        }
        let groups = self.grouped(k, s);
        blocked_kernel(&groups, |c, out| self.image(s, c, out))
            .into_iter()
            .map(|vec| {
                let mut f = self.zero(k, s);
                for (seq, e) in vec {
                    let i = self.bases[k].index_of(seq).expect("enumerated");
                    f.values[i].toggle(*e);
                }
                f
            })
            .collect()
    }

    /// A uniformly random cochain.
    pub fn random_cochain(&self, k: usize, s: i64, rng: &mut impl Rng) -> Cochain {
        let mut f = self.zero(k, s);
        for v in &mut f.values {
            for e in 0..v.len() {
                if rng.gen::<bool>() {
                    v.toggle(e);
                }
            }
        }
        f
    }
}

/// A uniformly random element of the span of `basis`.
pub fn random_combination(basis: &[Cochain], zero: Cochain, rng: &mut impl Rng) -> Cochain {
    let mut f = zero;
    for b in basis {
        if rng.gen::<bool>() {
            f.add_assign(b);
        }
    }
    f
}

/// `HH^{k,s}(Q, M)` from the Koszul cochain complex.
pub fn hh_dim(pair: &CoefficientPair, k: usize, s: i64, caps: &Caps) -> Result<HhReport> {
    let cochains = KoszulCochains::new(pair.clone(), k, caps)?;
    Ok(cochains.hh(k, s))
}

/// The bar-complex computation for one truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BarFactor {
    /// Largest total degree of bar arguments kept.
    pub max_weight: usize,
    pub cochains: usize,
    pub cohomology: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BarReport {
    pub k: usize,
    pub s: i64,
    pub factors: Vec<BarFactor>,
}

impl BarReport {
    /// Factors whose truncation is deep enough to compute `HH^{k,s}` exactly.
    pub fn stable_factors(&self) -> impl Iterator<Item = &BarFactor> {
        self.factors.iter().filter(move |f| f.max_weight > self.k)
    }
}

/// A basis element of `Q_+`: degree and index.
type QBasis = (u8, u8);

/// An elementary reduced bar cochain: arguments `a_1 ⊗ … ⊗ a_q` and a basis
/// index of the value.
type BarCell = (SmallVec<[QBasis; 8]>, usize);

struct BarComplex<'a> {
    pair: &'a CoefficientPair,
    s: i64,
    max_weight: usize,
}

impl BarComplex<'_> {
    fn weight(args: &[QBasis]) -> usize {
        args.iter().map(|a| a.0 as usize).sum()
    }

    fn q_basis(&self, max_degree: usize) -> Vec<QBasis> {
        let q = self.pair.q();
        (1..=max_degree)
            .flat_map(|d| (0..q.graded_dim(d)).map(move |i| (d as u8, i as u8)))
            .collect()
    }

    /// Number of elementary cochains in degree `len`.
    fn count(&self, len: usize) -> u128 {
        let q = self.pair.q();
        // ways[w] = number of argument tuples of the current length and weight w
        let mut ways = vec![0u128; self.max_weight + 1];
        ways[0] = 1;
        for _ in 0..len {
            let mut next = vec![0u128; self.max_weight + 1];
            for (w, &c) in ways.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for d in 1..=self.max_weight - w {
                    next[w + d] += c * q.graded_dim(d) as u128;
                }
            }
            ways = next;
        }
        ways.iter()
            .enumerate()
            .map(|(w, &c)| c * self.pair.m_dim(w as i64 + self.s) as u128)
            .sum()
    }

    fn cells(&self, len: usize) -> Vec<BarCell> {
        let basis = self.q_basis(self.max_weight);
        let mut out = Vec::new();
        let mut args: SmallVec<[QBasis; 8]> = SmallVec::new();
        self.extend(&basis, len, 0, &mut args, &mut out);
        out
    }

    fn extend(
        &self,
        basis: &[QBasis],
        len: usize,
        weight: usize,
        args: &mut SmallVec<[QBasis; 8]>,
        out: &mut Vec<BarCell>,
    ) {
        if args.len() == len {
            for e in 0..self.pair.m_dim(weight as i64 + self.s) {
                out.push((args.clone(), e));
            }
            return;
        }
        for &b in basis {
            if weight + b.0 as usize > self.max_weight {
                continue;
            }
            args.push(b);
            self.extend(basis, len, weight + b.0 as usize, args, out);
            args.pop();
        }
    }

    fn key(&self, (args, e): &BarCell) -> MultiDegree {
        let q = self.pair.q();
        let mut key: MultiDegree = SmallVec::from_elem(0, q.generator_count());
        for &(d, i) in args {
            for (a, b) in key.iter_mut().zip(q.multidegree(d as usize, i as usize)) {
                *a += b;
            }
        }
        let j = (Self::weight(args) as i64 + self.s) as usize;
        for (a, b) in key.iter_mut().zip(self.pair.m_multidegree(j, *e)) {
            *a -= b;
        }
        key
    }

    /// Image under the Hochschild differential, dropping arguments heavier
    /// than the truncation.
    fn image(&self, (args, e): &BarCell, out: &mut Vec<BarCell>) {
        let q = self.pair.q();
        let w = Self::weight(args);
        let j = (w as i64 + self.s) as usize;
        if w < self.max_weight {
            for b in self.q_basis(self.max_weight - w) {
                let mut left = SmallVec::with_capacity(args.len() + 1);
                left.push(b);
                left.extend_from_slice(args);
                let mut right = args.clone();
                right.push(b);
                self.pair.act_basis(b.0 as usize, b.1 as usize, j, *e, |c| {
                    out.push((left.clone(), c));
                    out.push((right.clone(), c));
                });
            }
        }
        // Inner terms: every way of writing a_i as a product of two basis
        // elements of Q_+. Only x^d with d ≥ 2 factors, as x^p · x^{d-p}.
        for (pos, &(d, idx)) in args.iter().enumerate() {
            let Some(block) = q.atom_of(d as usize, idx as usize) else {
                continue;
            };
            for p in 1..d as usize {
                let factor = |deg: usize| -> QBasis {
                    let i = if deg == 1 { q.v_dim() + block } else { block };
                    (deg as u8, i as u8)
                };
                let mut split: SmallVec<[QBasis; 8]> = SmallVec::with_capacity(args.len() + 1);
                split.extend_from_slice(&args[..pos]);
                split.push(factor(p));
                split.push(factor(d as usize - p));
                split.extend_from_slice(&args[pos + 1..]);
                out.push((split, *e));
            }
        }
    }

    fn rank(&self, len: usize) -> usize {
        let groups = group_by_key(self.cells(len), |c| self.key(c));
        blocked_rank(&groups, |c, out| self.image(c, out))
    }
}

/// `H^k` of the reduced bar cochain complex `Hom(Q_+^{⊗*}, M)` of shift `s`,
/// truncated to arguments of total degree at most `D`, for every
/// `D ∈ d_min..=d_max`.
///
/// The differential never lowers the total degree of the arguments, so the
/// truncation is a quotient complex. For a Koszul algebra the truncation at
/// `D > k` already has the cohomology of the full complex; smaller `D` are
/// reported for completeness.
pub fn hh_bar_oracle(
    pair: &CoefficientPair,
    k: usize,
    s: i64,
    d_min: usize,
    d_max: usize,
    caps: &Caps,
) -> Result<BarReport> {
    let mut factors = Vec::new();
    for max_weight in d_min..=d_max {
        let complex = BarComplex {
            pair,
            s,
            max_weight,
        };
        let count = complex.count(k) + if k > 0 { complex.count(k - 1) } else { 0 };
        caps.check(
            format!("bar cochains of degree {k} and weight ≤ {max_weight}"),
            count,
        )?;
        let cochains = complex.count(k) as usize;
        let rank_k = if cochains == 0 { 0 } else { complex.rank(k) };
        let rank_prev = if k == 0 { 0 } else { complex.rank(k - 1) };
        factors.push(BarFactor {
            max_weight,
            cochains,
            cohomology: cochains - rank_k - rank_prev,
        });
    }
    Ok(BarReport { k, s, factors })
}

/// Result of checking `HH^{k,2-k} = 0` for `3 ≤ k ≤ k_max`.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KadeishviliReport {
    pub k_max: usize,
    pub cells: Vec<HhReport>,
    pub failures: Vec<(usize, i64)>,
}

impl KadeishviliReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn kadeishvili_check(
    pair: &CoefficientPair,
    k_max: usize,
    caps: &Caps,
) -> Result<KadeishviliReport> {
    if k_max < 3 {
        return Err(Error::InvalidArgument("k_max must be at least 3".into()));
    }
    let cochains = KoszulCochains::new(pair.clone(), k_max, caps)?;
    let cells: Vec<HhReport> = (3..=k_max).map(|k| cochains.hh(k, 2 - k as i64)).collect();
    let failures = cells
        .iter()
        .filter(|c| c.hh != 0)
        .map(|c| (c.k, c.s))
        .collect();
    Ok(KadeishviliReport {
        k_max,
        cells,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Subring;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn differential_squares_to_zero() {
        for (m, n) in [(0, 3), (1, 2), (2, 1), (1, 1)] {
            let c = KoszulCochains::new(CoefficientPair::diagonal(m, n), 5, &caps()).unwrap();
            for k in 0..=3 {
                for s in -3..=1 {
                    let d0 = c.differential_matrix(k, s).unwrap();
                    let d1 = c.differential_matrix(k + 1, s).unwrap();
                    assert!(d1.mul(&d0).is_zero(), "m={m} n={n} k={k} s={s}");
                }
            }
        }
    }

    #[test]
    fn hand_evaluated_differential() {
        let c = KoszulCochains::new(CoefficientPair::diagonal(0, 3), 2, &caps()).unwrap();
        let seq = AdmissibleSequence::from_indices([0]);
        let i = c.basis(1).index_of(&seq).unwrap();
        let f = c.elementary(1, 0, i, 0);
        let df = c.differential(&f).unwrap();
        let u = c
            .basis(2)
            .index_of(&AdmissibleSequence::from_indices([0, 1]))
            .unwrap();
        assert!(df.values[u].is_zero());
    }

    #[test]
    fn blocked_rank_matches_dense_rank() {
        let pair = CoefficientPair::new(
            1,
            Subring::from_blocks(3, vec![vec![0, 2], vec![1]]).unwrap(),
        );
        let c = KoszulCochains::new(pair, 4, &caps()).unwrap();
        for k in 0..=3 {
            for s in -4..=1 {
                let dense = c.differential_matrix(k, s).unwrap().rank();
                assert_eq!(c.differential_rank(k, s), dense, "k={k} s={s}");
                let ker = c.cocycle_basis(k, s);
                assert_eq!(ker.len(), c.dim(k, s) - dense);
                for z in &ker {
                    assert!(c.differential(z).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn hh_examples() {
        assert_eq!(
            hh_dim(&CoefficientPair::diagonal(2, 0), 2, 0, &caps())
                .unwrap()
                .hh,
            0
        );
        assert_eq!(
            hh_dim(&CoefficientPair::diagonal(0, 3), 3, -1, &caps())
                .unwrap()
                .hh,
            0
        );
        assert_eq!(
            hh_dim(&CoefficientPair::diagonal(0, 1), 0, 0, &caps())
                .unwrap()
                .hh,
            1
        );
        let empty = hh_dim(&CoefficientPair::diagonal(1, 2), 2, -3, &caps()).unwrap();
        assert_eq!(empty.cochains, 0);
        assert_eq!(empty.hh, 0);
    }

    #[test]
    fn kadeishvili_examples() {
        for (m, n, k) in [(0, 3, 6), (2, 0, 6), (1, 1, 5)] {
            let r = kadeishvili_check(&CoefficientPair::diagonal(m, n), k, &caps()).unwrap();
            assert!(r.passed(), "m={m} n={n}: {:?}", r.failures);
        }
        assert!(kadeishvili_check(&CoefficientPair::diagonal(0, 3), 2, &caps()).is_err());
    }

    #[test]
    fn bar_oracle_agrees_with_koszul_side() {
        for (m, blocks) in [
            (0, vec![vec![0], vec![1]]),
            (1, vec![vec![0]]),
            (1, vec![vec![0, 1]]),
            (2, vec![]),
        ] {
            let ambient = blocks.iter().map(Vec::len).sum();
            let pair = CoefficientPair::new(m, Subring::from_blocks(ambient, blocks).unwrap());
            let c = KoszulCochains::new(pair.clone(), 3, &caps()).unwrap();
            for k in 0..=3 {
                for s in (-(k as i64) - 1)..=1 {
                    let koszul = c.hh(k, s).hh;
                    let bar = hh_bar_oracle(&pair, k, s, k + 1, 5, &caps()).unwrap();
                    for f in bar.stable_factors() {
                        assert_eq!(f.cohomology, koszul, "m={m} k={k} s={s} D={}", f.max_weight);
                    }
                }
            }
        }
    }

    #[test]
    fn bar_center_in_degree_zero() {
        let pair = CoefficientPair::diagonal(1, 2);
        let bar = hh_bar_oracle(&pair, 0, 0, 0, 3, &caps()).unwrap();
        assert!(bar.factors.iter().all(|f| f.cohomology == 1));
    }

    #[test]
    fn random_cochains_have_the_right_shape() {
        let c = KoszulCochains::new(CoefficientPair::diagonal(1, 2), 3, &caps()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = c.random_cochain(2, 0, &mut rng);
        c.check_shape(&f).unwrap();
        assert_eq!(c.from_vector(2, 0, &c.to_vector(&f)), f);
    }
}
