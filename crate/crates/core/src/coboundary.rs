//! Explicit coboundaries for cocycles of `V_* ⊓ A_*` with values in `B_j`, and
//! the extension of bottom-weight cocycles from `A` to `A⟨x⟩`.
//!
//! The solver works one orbit of the right translation `R` at a time. Every
//! value of a cocycle splits as `f(t) = α(t) + β(t)` with `α(t) ∈ (p(t_1))` and
//! `β(t) ∈ (p(t_k))`; the primitive is `g(r(t)) = α(t)·p(t_1)`, summed over the
//! orbit.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{BooleanRing, CoefficientPair, Subring};
use crate::error::{Error, Result};
use crate::gf2::BitVector;
use crate::hochschild::{Cochain, KoszulCochains};
use crate::koszul::{AdmissibleSequence, Caps, KoszulBasis};

/// An orbit of `R` on the admissible sequences of one length.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Orbit {
    /// Basis indices `t, R(t), R²(t), …` starting at the least member.
    pub members: Vec<usize>,
    pub stable: bool,
    /// A fixed point of `R` that is not stable, such as `(v, v)`.
    pub fixed_unstable: bool,
}

impl Orbit {
    pub fn representative(&self) -> usize {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Partitions the basis into `R`-orbits, ordered by least member.
pub fn orbit_decomposition(basis: &KoszulBasis) -> Vec<Orbit> {
    let alg = basis.algebra();
    let mut seen = vec![false; basis.len()];
    let mut orbits = Vec::new();
    for start in 0..basis.len() {
        if seen[start] || basis.get(start).is_empty() {
            continue;
        }
        let mut members = vec![start];
        seen[start] = true;
        let mut cur = basis.get(start).right_translate(alg);
        loop {
            let idx = basis.index_of(&cur).expect("R preserves admissibility");
            if idx == start {
                break;
            }
            seen[idx] = true;
            members.push(idx);
            cur = cur.right_translate(alg);
        }
        let stable = basis.get(start).is_stable(alg);
        orbits.push(Orbit {
            fixed_unstable: !stable && members.len() == 1,
            stable,
            members,
        });
    }
    orbits
}

/// Head and tail values of a cocycle at every basis sequence, as elements of
/// `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadTail {
    pub alpha: Vec<BitVector>,
    pub beta: Vec<BitVector>,
}

/// The `B`-component of a value in `M_j`, `j ≥ 1`. Fails if a `V` coefficient
/// is set.
fn boolean_part(pair: &CoefficientPair, j: i64, v: &BitVector) -> Result<BitVector> {
    let m = pair.v_dim();
    if j == 1 {
        if v.slice(0, m).count_ones() != 0 {
            return Err(Error::InvalidArgument("cochain has a V-component".into()));
        }
        Ok(v.slice(m, v.len() - m))
    } else if j >= 2 {
        Ok(v.clone())
    } else {
        Err(Error::InvalidArgument(format!(
            "values of degree {j} are not in B"
        )))
    }
}

/// Places an element of `B` in `M_j`.
fn embed(pair: &CoefficientPair, j: i64, b: &BitVector) -> BitVector {
    if j == 1 {
        BitVector::zeros(pair.v_dim()).concat(b)
    } else {
        b.clone()
    }
}

/// `p(t_i)` for a generator index of `Q`.
fn p_of(pair: &CoefficientPair, g: usize) -> BitVector {
    pair.p(pair.q().generator_at(g))
}

/// Splits every value `f(t)` into its head and tail value.
pub fn head_tail(c: &KoszulCochains, f: &Cochain) -> Result<HeadTail> {
    c.check_shape(f)?;
    let pair = c.pair();
    let basis = c.basis(f.k);
    let n = pair.subring().ambient_atoms();
    let j = f.target_degree();
    let q = pair.q();
    let mut alpha = Vec::with_capacity(basis.len());
    let mut beta = Vec::with_capacity(basis.len());
    for (t, value) in basis.sequences().iter().zip(&f.values) {
        let z = boolean_part(pair, j, value)?;
        if t.is_empty() {
            return Err(Error::InvalidArgument("head and tail need k ≥ 1".into()));
        }
        if n == 0 {
            alpha.push(z.clone());
            beta.push(z);
            continue;
        }
        let ring = BooleanRing::new(n)?;
        let x = p_of(pair, t.first());
        let y = p_of(pair, t.last());
        if !ring.ideal_membership(&z, &x, &y) {
            return Err(Error::NotACocycle(format!(
                "f{} = {z} is not in the ideal (p(t_1), p(t_k))",
                t.display(&q)
            )));
        }
        if t.is_stable(&q) {
            alpha.push(z.clone());
            beta.push(z);
        } else {
            let (a, b) = ring.ideal_decompose(&z, &x, &y)?;
            alpha.push(a);
            beta.push(b);
        }
    }
    Ok(HeadTail { alpha, beta })
}

/// Checks `α(R(t)) = β(t)` for every sequence; returns the first failure.
pub fn head_tail_law(basis: &KoszulBasis, ht: &HeadTail) -> Option<usize> {
    let alg = basis.algebra();
    (0..basis.len()).find(|&i| {
        let r = basis
            .index_of(&basis.get(i).right_translate(alg))
            .expect("admissible");
        ht.alpha[r] != ht.beta[i]
    })
}

/// First sequence of length `k + 1` where `∂f` does not vanish, if any.
fn first_violation(c: &KoszulCochains, f: &Cochain) -> Option<AdmissibleSequence> {
    c.basis(f.k + 1)
        .sequences()
        .iter()
        .find(|u| !c.differential_at(f, u).is_zero())
        .cloned()
}

/// A cochain `g` of bidegree `(k-1, s)` with `∂g = f`, for a cocycle `f` of
/// bidegree `(k, s)` with `k ≥ 2` and `k + s ≥ 2`.
///
/// `c` must enumerate sequences up to length `k`; if it reaches `k + 1` the
/// input is first checked to be a cocycle.
pub fn solve_coboundary(c: &KoszulCochains, f: &Cochain) -> Result<Cochain> {
    c.check_shape(f)?;
    let j = f.target_degree();
    if f.k < 2 || j < 2 {
        return Err(Error::InvalidArgument(format!(
            "the solver needs k ≥ 2 and k + s ≥ 2, got ({}, {})",
            f.k, f.s
        )));
    }
    if c.k_max() > f.k {
        if let Some(u) = first_violation(c, f) {
            return Err(Error::NotACocycle(format!(
                "∂f{} ≠ 0",
                u.display(&c.pair().q())
            )));
        }
    }
    let pair = c.pair();
    let q = pair.q();
    let basis = c.basis(f.k);
    let lower = c.basis(f.k - 1);
    let ht = head_tail(c, f)?;
    let mut g = c.zero(f.k - 1, f.s);
    for orbit in orbit_decomposition(basis) {
        let mut part: HashMap<usize, BitVector> = HashMap::new();
        for &i in &orbit.members {
            let t = basis.get(i);
            // α(t)·p(t_1)^{j-1}, and p(t_1) is idempotent.
            let value = ht.alpha[i].and(&p_of(pair, t.first()));
            if value.is_zero() {
                continue;
            }
            let r = lower.index_of(&t.right_truncation()).expect("admissible");
            part.entry(r)
                .or_insert_with(|| BitVector::zeros(value.len()))
                .xor_assign(&value);
        }
        if cfg!(debug_assertions) && !orbit.stable {
            // The same values computed from the tail side.
            for &i in &orbit.members {
                let t = basis.get(i);
                let l = lower.index_of(&t.left_truncation()).expect("admissible");
                let other = ht.beta[i].and(&p_of(pair, t.last()));
                let here = part
                    .get(&l)
                    .cloned()
                    .unwrap_or_else(|| BitVector::zeros(other.len()));
                debug_assert_eq!(
                    here,
                    other,
                    "head and tail formulas disagree at {}",
                    t.display(&q)
                );
            }
        }
        for (r, value) in part {
            g.values[r].xor_assign(&embed(pair, j - 1, &value));
        }
    }
    // ∂g has length k, which the basis always covers.
    let check = lower_differential(c, &g);
    if check != *f {
        return Err(Error::Verification(format!(
            "∂g ≠ f for a cochain of bidegree ({}, {})",
            f.k, f.s
        )));
    }
    Ok(g)
}

fn lower_differential(c: &KoszulCochains, g: &Cochain) -> Cochain {
    c.differential(g).expect("g has length k - 1 ≤ k_max - 1")
}

/// Dimension of the cocycles of bidegree `(k, -k)`, with values in `M_0`.
pub fn bottom_cocycles(pair: &CoefficientPair, k: usize, caps: &Caps) -> Result<usize> {
    let c = KoszulCochains::new(pair.clone(), k, caps)?;
    Ok(c.hh(k, -(k as i64)).cocycles)
}

/// The refinement `A ⊆ A⟨x⟩` seen on spectra: `a*` sends a block of `A⟨x⟩` to
/// the block of `A` containing it, and the section `s` picks the part of a
/// block of `A` on which `x` is 1 when the block splits.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub coarse: Subring,
    pub fine: Subring,
    pub a_star: Vec<usize>,
    pub section: Vec<usize>,
}

impl Refinement {
    pub fn new(a: &Subring, x: &BitVector) -> Result<Self> {
        if x.len() != a.ambient_atoms() {
            return Err(Error::Dimension(format!(
                "x has {} coordinates, the ambient ring {}",
                x.len(),
                a.ambient_atoms()
            )));
        }
        let fine = a.adjoin(x);
        let a_star = a.coarsening_map(&fine)?;
        let mut section = vec![usize::MAX; a.atom_count()];
        for (b, &c) in a_star.iter().enumerate() {
            let inside = x.get(fine.blocks()[b][0]);
            if section[c] == usize::MAX || inside {
                section[c] = b;
            }
        }
        Ok(Self {
            coarse: a.clone(),
            fine,
            a_star,
            section,
        })
    }

    /// `a*` on a sequence of `V_* ⊓ A⟨x⟩_*` generators.
    pub fn a_star_seq(&self, v_dim: usize, t: &AdmissibleSequence) -> AdmissibleSequence {
        AdmissibleSequence::from_indices(t.indices().map(|g| {
            if g < v_dim {
                g
            } else {
                v_dim + self.a_star[g - v_dim]
            }
        }))
    }

    /// `s` on a sequence of `V_* ⊓ A_*` generators.
    pub fn section_seq(&self, v_dim: usize, t: &AdmissibleSequence) -> AdmissibleSequence {
        AdmissibleSequence::from_indices(t.indices().map(|g| {
            if g < v_dim {
                g
            } else {
                v_dim + self.section[g - v_dim]
            }
        }))
    }

    /// `t` is admissible and `t = s(a*(t))`.
    pub fn is_x_admissible(&self, v_dim: usize, t: &AdmissibleSequence) -> bool {
        let q = crate::algebra::ConnectedSumAlgebra::new(v_dim, self.fine.atom_count());
        t.is_admissible(&q) && self.section_seq(v_dim, &self.a_star_seq(v_dim, t)) == *t
    }
}

/// The lift `f_x` of a cocycle of bidegree `(k, 1-k)` over `V_* ⊓ A_*` with
/// `f = x·f`, as a cochain over `V_* ⊓ A⟨x⟩_*`. Returns the cochain space of
/// `A⟨x⟩` together with the lift.
pub fn extend_cocycle(
    c: &KoszulCochains,
    x: &BitVector,
    f: &Cochain,
    caps: &Caps,
) -> Result<(KoszulCochains, Cochain)> {
    let pair = c.pair();
    let v_dim = pair.v_dim();
    c.check_shape(f)?;
    if f.k < 2 || f.target_degree() != 1 {
        return Err(Error::InvalidArgument(format!(
            "extension needs bidegree (k, 1-k) with k ≥ 2, got ({}, {})",
            f.k, f.s
        )));
    }
    for v in &f.values {
        let b = boolean_part(pair, 1, v)?;
        if b.and(x) != b {
            return Err(Error::InvalidArgument("f ≠ x·f".into()));
        }
    }
    let refinement = Refinement::new(pair.subring(), x)?;
    let fine = KoszulCochains::new(
        CoefficientPair::new(v_dim, refinement.fine.clone()),
        f.k + 1,
        caps,
    )?;
    let lift = lift_along(&refinement, c, &fine, f);
    Ok((fine, lift))
}

fn lift_along(
    r: &Refinement,
    coarse: &KoszulCochains,
    fine: &KoszulCochains,
    f: &Cochain,
) -> Cochain {
    let v_dim = coarse.pair().v_dim();
    let mut out = fine.zero(f.k, f.s);
    for (i, t) in coarse.basis(f.k).sequences().iter().enumerate() {
        let u = r.section_seq(v_dim, t);
        let idx = fine
            .basis(f.k)
            .index_of(&u)
            .expect("the section preserves admissibility");
        out.values[idx] = f.values[i].clone();
    }
    out
}

/// Restriction along `K^k_k(V_* ⊓ A_*) → K^k_k(V_* ⊓ A⟨x⟩_*)`: the value at `t`
/// is the sum over all `u` with `a*(u) = t`.
pub fn restrict(
    r: &Refinement,
    coarse: &KoszulCochains,
    fine: &KoszulCochains,
    g: &Cochain,
) -> Cochain {
    let v_dim = coarse.pair().v_dim();
    let coarse_basis = coarse.basis(g.k);
    let mut out = coarse.zero(g.k, g.s);
    for (i, u) in fine.basis(g.k).sequences().iter().enumerate() {
        if let Some(idx) = coarse_basis.index_of(&r.a_star_seq(v_dim, u)) {
            out.values[idx].xor_assign(&g.values[i]);
        }
    }
    out
}

/// Extends an arbitrary cocycle of bidegree `(k, 1-k)`: the `V`-valued part is
/// lifted along the section, the rest is split as `x·f + (1+x)·f` and each
/// half is extended with [`extend_cocycle`].
pub fn extend_any_cocycle(
    c: &KoszulCochains,
    x: &BitVector,
    f: &Cochain,
    caps: &Caps,
) -> Result<(KoszulCochains, Cochain)> {
    c.check_shape(f)?;
    let pair = c.pair();
    let m = pair.v_dim();
    if f.target_degree() != 1 {
        return Err(Error::InvalidArgument(
            "extension needs bidegree (k, 1-k)".into(),
        ));
    }
    let n = pair.subring().ambient_atoms();
    let v_mask = BitVector::ones(m).concat(&BitVector::zeros(n));
    let on_x = BitVector::zeros(m).concat(x);
    let off_x = BitVector::zeros(m).concat(&x.not());
    let part = |mask: &BitVector| Cochain {
        k: f.k,
        s: f.s,
        values: f.values.iter().map(|v| v.and(mask)).collect(),
    };
    let (fine, mut lift) = extend_cocycle(c, x, &part(&on_x), caps)?;
    let (fine_other, other) = extend_cocycle(c, &x.not(), &part(&off_x), caps)?;
    debug_assert_eq!(fine.pair(), fine_other.pair());
    lift.add_assign(&other);
    let refinement = Refinement::new(pair.subring(), x)?;
    lift.add_assign(&lift_along(&refinement, c, &fine, &part(&v_mask)));
    Ok((fine, lift))
}
