//! Finite dg-algebras over GF(2), Massey products, and lifting along acyclic
//! fibrations.
//!
//! Over GF(2) every sign in the theory disappears: `ā = a`, and a defining
//! system for classes `a_1..a_n` is an array `a_{ij}`, `1 ≤ i < j ≤ n + 1`,
//! `(i, j) ≠ (1, n + 1)`, with `δ a_{ij} = Σ_{i<k<j} a_{ik} a_{kj}` and `a_{i,i+1}`
//! representing `a_i`.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::ConnectedSumAlgebra;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// A homogeneous element. Degrees above the top degree have the zero space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DgElement {
    pub degree: usize,
    pub coeffs: BitVector,
}

impl DgElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &DgElement) -> DgElement {
        assert_eq!(
            self.degree, other.degree,
            "adding elements of different degrees"
        );
        DgElement {
            degree: self.degree,
            coeffs: self.coeffs.xor(&other.coeffs),
        }
    }
}

/// A dg-algebra concentrated in degrees `0..=top`, given by its structure
/// constants. Products that would land above `top` are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgAlgebra {
    dims: Vec<usize>,
    /// `diff[d]` maps degree `d` to degree `d + 1`.
    diff: Vec<BitMatrix>,
    /// `mult[d1][d2][i * dim(d2) + j]` is the product of basis elements.
    mult: Vec<Vec<Vec<BitVector>>>,
    unit: BitVector,
}

impl DgAlgebra {
    /// Builds an algebra from structure constants without validating it.
    pub fn from_fn(
        dims: Vec<usize>,
        unit: BitVector,
        mut diff: impl FnMut(usize, usize) -> BitVector,
        mut product: impl FnMut(usize, usize, usize, usize) -> BitVector,
    ) -> Self {
        let top = dims.len() - 1;
        let dim = |d: usize| dims.get(d).copied().unwrap_or(0);
        let diff = (0..=top)
            .map(|d| {
                let cols: Vec<BitVector> = (0..dims[d]).map(|i| diff(d, i)).collect();
                BitMatrix::from_columns(dim(d + 1), &cols)
            })
            .collect();
        let mult = (0..=top)
            .map(|d1| {
                (0..=top)
                    .map(|d2| {
                        if d1 + d2 > top {
                            return Vec::new();
                        }
                        let mut out = Vec::with_capacity(dims[d1] * dims[d2]);
                        for i in 0..dims[d1] {
                            for j in 0..dims[d2] {
                                out.push(product(d1, i, d2, j));
                            }
                        }
                        out
                    })
                    .collect()
            })
            .collect();
        Self {
            dims,
            diff,
            mult,
            unit,
        }
    }

    /// Builds and validates an algebra.
    pub fn new(
        dims: Vec<usize>,
        unit: BitVector,
        diff: Vec<BitMatrix>,
        products: &BTreeMap<(usize, usize, usize, usize), BitVector>,
    ) -> Result<Self> {
        if dims.is_empty() || dims[0] == 0 {
            return Err(Error::InvalidArgument(
                "a unital algebra needs degree 0".into(),
            ));
        }
        let top = dims.len() - 1;
        let dim = |d: usize| dims.get(d).copied().unwrap_or(0);
        if diff.len() != dims.len() {
            return Err(Error::Dimension(format!(
                "{} differential matrices for {} degrees",
                diff.len(),
                dims.len()
            )));
        }
        for (d, m) in diff.iter().enumerate() {
            if m.rows() != dim(d + 1) || m.cols() != dims[d] {
                return Err(Error::Dimension(format!(
                    "differential in degree {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    dim(d + 1),
                    dims[d]
                )));
            }
        }
        if unit.len() != dims[0] {
            return Err(Error::Dimension("unit has the wrong length".into()));
        }
        for (&(d1, i, d2, j), v) in products {
            if d1 > top || d2 > top || i >= dims[d1] || j >= dims[d2] {
                return Err(Error::Dimension(format!(
                    "product {d1}:{i}*{d2}:{j} out of range"
                )));
            }
            if v.len() != dim(d1 + d2) {
                return Err(Error::Dimension(format!(
                    "product {d1}:{i}*{d2}:{j} has length {}, expected {}",
                    v.len(),
                    dim(d1 + d2)
                )));
            }
        }
        let alg = Self::from_fn(
            dims.clone(),
            unit,
            |d, i| diff[d].column(i),
            |d1, i, d2, j| {
                products
                    .get(&(d1, i, d2, j))
                    .cloned()
                    .unwrap_or_else(|| BitVector::zeros(dim(d1 + d2)))
            },
        );
        alg.validate()?;
        Ok(alg)
    }

    /// `V_* ⊓ B_*` truncated above `top`, with zero differential.
    pub fn from_connected_sum(alg: &ConnectedSumAlgebra, top: usize) -> Self {
        let dims: Vec<usize> = (0..=top).map(|d| alg.graded_dim(d)).collect();
        let dim = |d: usize| if d <= top { alg.graded_dim(d) } else { 0 };
        Self::from_fn(
            dims,
            BitVector::ones(1),
            |d, _| BitVector::zeros(dim(d + 1)),
            |d1, i, d2, j| {
                let mut v = BitVector::zeros(dim(d1 + d2));
                if let Some(c) = alg.mul_basis(d1, i, d2, j) {
                    v.set(c, true);
                }
                v
            },
        )
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims.get(d).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// The differential out of degree `d`; the zero map above the top.
    pub fn differential(&self, d: usize) -> BitMatrix {
        self.diff
            .get(d)
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(0, 0))
    }

    pub fn unit(&self) -> DgElement {
        DgElement {
            degree: 0,
            coeffs: self.unit.clone(),
        }
    }

    pub fn zero(&self, d: usize) -> DgElement {
        DgElement {
            degree: d,
            coeffs: BitVector::zeros(self.dim(d)),
        }
    }

    pub fn basis_element(&self, d: usize, i: usize) -> DgElement {
        DgElement {
            degree: d,
            coeffs: BitVector::unit(self.dim(d), i),
        }
    }

    pub fn element(&self, d: usize, coeffs: BitVector) -> Result<DgElement> {
        if coeffs.len() != self.dim(d) {
            return Err(Error::Dimension(format!(
                "element of degree {d} needs {} coefficients, got {}",
                self.dim(d),
                coeffs.len()
            )));
        }
        Ok(DgElement { degree: d, coeffs })
    }

    pub fn product_basis(&self, d1: usize, i: usize, d2: usize, j: usize) -> BitVector {
        if d1 + d2 > self.top() {
            return BitVector::zeros(0);
        }
        self.mult[d1][d2][i * self.dims[d2] + j].clone()
    }

    pub fn mul(&self, a: &DgElement, b: &DgElement) -> DgElement {
        let degree = a.degree + b.degree;
        let mut out = self.zero(degree);
        if degree > self.top() {
            return out;
        }
        let table = &self.mult[a.degree][b.degree];
        for i in a.coeffs.ones_iter() {
            for j in b.coeffs.ones_iter() {
                out.coeffs.xor_assign(&table[i * self.dims[b.degree] + j]);
            }
        }
        out
    }

    pub fn d(&self, x: &DgElement) -> DgElement {
        if x.degree > self.top() {
            return self.zero(x.degree + 1);
        }
        DgElement {
            degree: x.degree + 1,
            coeffs: self.diff[x.degree].mul_vec(&x.coeffs),
        }
    }

    pub fn has_trivial_differential(&self) -> bool {
        self.diff.iter().all(BitMatrix::is_zero)
    }

    /// Checks `δ∘δ = 0`, the Leibniz rule, associativity and unitality on
    /// basis elements.
    pub fn validate(&self) -> Result<()> {
        let top = self.top();
        for d in 0..top.saturating_sub(1) {
            if !self.diff[d + 1].mul(&self.diff[d]).is_zero() {
                return Err(Error::InvalidArgument(format!("δ∘δ ≠ 0 in degree {d}")));
            }
        }
        let unit = self.unit();
        for d in 0..=top {
            for i in 0..self.dims[d] {
                let x = self.basis_element(d, i);
                if self.mul(&unit, &x) != x || self.mul(&x, &unit) != x {
                    return Err(Error::InvalidArgument(format!("unit fails on {d}:{i}")));
                }
            }
        }
        if !self.d(&unit).is_zero() {
            return Err(Error::InvalidArgument("δ(1) ≠ 0".into()));
        }
        for d1 in 0..=top {
            for d2 in 0..=top - d1 {
                for i in 0..self.dims[d1] {
                    let a = self.basis_element(d1, i);
                    for j in 0..self.dims[d2] {
                        let b = self.basis_element(d2, j);
                        let ab = self.mul(&a, &b);
                        let leibniz = self.mul(&self.d(&a), &b).add(&self.mul(&a, &self.d(&b)));
                        if self.d(&ab) != leibniz {
                            return Err(Error::InvalidArgument(format!(
                                "Leibniz rule fails on {d1}:{i}, {d2}:{j}"
                            )));
                        }
                        for d3 in 0..=top - d1 - d2 {
                            for l in 0..self.dims[d3] {
                                let c = self.basis_element(d3, l);
                                if self.mul(&ab, &c) != self.mul(&a, &self.mul(&b, &c)) {
                                    return Err(Error::InvalidArgument(format!(
                                        "associativity fails on {d1}:{i}, {d2}:{j}, {d3}:{l}"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_cocycle(&self, x: &DgElement) -> bool {
        self.d(x).is_zero()
    }

    /// A primitive of `x` if it is a coboundary.
    pub fn primitive(&self, x: &DgElement) -> Option<DgElement> {
        if x.degree == 0 {
            return None;
        }
        let m = self.differential(x.degree - 1);
        m.solve(&x.coeffs)
            .expect("dimensions match")
            .map(|coeffs| DgElement {
                degree: x.degree - 1,
                coeffs,
            })
    }

    pub fn is_coboundary(&self, x: &DgElement) -> bool {
        x.is_zero() || self.primitive(x).is_some()
    }

    pub fn cocycle_basis(&self, d: usize) -> Vec<BitVector> {
        self.differential(d).kernel_basis()
    }

    pub fn cohomology_dim(&self, d: usize) -> usize {
        let z = self.dim(d) - self.differential(d).rank();
        let b = if d == 0 {
            0
        } else {
            self.differential(d - 1).rank()
        };
        z - b
    }

    /// Canonical representative of `x` modulo coboundaries.
    pub fn reduce(&self, x: &DgElement) -> BitVector {
        if x.degree == 0 || x.degree > self.top() {
            return x.coeffs.clone();
        }
        let image = self
            .differential(x.degree - 1)
            .transpose()
            .row_space_basis();
        let mut v = x.coeffs.clone();
        for row in &image {
            let p = row.first_one().expect("nonzero row");
            if v.get(p) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn same_class(&self, a: &DgElement, b: &DgElement) -> bool {
        a.degree == b.degree && self.is_coboundary(&a.add(b))
    }

    /// A basis of `{y ∈ C^d : a·y = 0}`.
    pub fn right_annihilator(&self, a: &DgElement, d: usize) -> Vec<BitVector> {
        let cols: Vec<BitVector> = (0..self.dim(d))
            .map(|j| self.mul(a, &self.basis_element(d, j)).coeffs)
            .collect();
        BitMatrix::from_columns(self.dim(a.degree + d), &cols).kernel_basis()
    }
}

/// A degreewise linear map between two dg-algebras with the same top degree.
#[derive(Clone, Debug)]
pub struct DgMap {
    pub source: DgAlgebra,
    pub target: DgAlgebra,
    /// `maps[d]` sends degree `d` of the source to degree `d` of the target.
    pub maps: Vec<BitMatrix>,
}

impl DgMap {
    pub fn new(source: DgAlgebra, target: DgAlgebra, maps: Vec<BitMatrix>) -> Result<Self> {
        let q = Self {
            source,
            target,
            maps,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn identity(alg: &DgAlgebra) -> Self {
        let maps = alg.dims().iter().map(|&n| BitMatrix::identity(n)).collect();
        Self {
            source: alg.clone(),
            target: alg.clone(),
            maps,
        }
    }

    pub fn apply(&self, x: &DgElement) -> DgElement {
        if x.degree > self.source.top() {
            return self.target.zero(x.degree);
        }
        DgElement {
            degree: x.degree,
            coeffs: self.maps[x.degree].mul_vec(&x.coeffs),
        }
    }

    /// Chain map, multiplicative and unital.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if s.top() != t.top() || self.maps.len() != s.dims().len() {
            return Err(Error::Dimension(
                "source and target have different top degrees".into(),
            ));
        }
        for (d, m) in self.maps.iter().enumerate() {
            if m.rows() != t.dim(d) || m.cols() != s.dim(d) {
                return Err(Error::Dimension(format!(
                    "map in degree {d} has the wrong shape"
                )));
            }
        }
        if self.apply(&s.unit()) != t.unit() {
            return Err(Error::InvalidArgument(
                "map does not preserve the unit".into(),
            ));
        }
        for d in 0..=s.top() {
            for i in 0..s.dim(d) {
                let x = s.basis_element(d, i);
                if self.apply(&s.d(&x)) != t.d(&self.apply(&x)) {
                    return Err(Error::InvalidArgument(format!(
                        "not a chain map at {d}:{i}"
                    )));
                }
                for d2 in 0..=s.top() - d {
                    for j in 0..s.dim(d2) {
                        let y = s.basis_element(d2, j);
                        if self.apply(&s.mul(&x, &y)) != t.mul(&self.apply(&x), &self.apply(&y)) {
                            return Err(Error::InvalidArgument(format!(
                                "not multiplicative on {d}:{i}, {d2}:{j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps
            .iter()
            .enumerate()
            .all(|(d, m)| m.rank() == self.target.dim(d))
    }

    /// Whether the induced map is an isomorphism in every degree `≤ top`.
    pub fn is_quasi_isomorphism(&self) -> bool {
        let (s, t) = (&self.source, &self.target);
        (0..=s.top()).all(|d| {
            let hs = s.cohomology_dim(d);
            if hs != t.cohomology_dim(d) {
                return false;
            }
            // Rank of Z_s → H_t.
            let z: Vec<BitVector> = s
                .cocycle_basis(d)
                .into_iter()
                .map(|v| self.maps[d].mul_vec(&v))
                .collect();
            let zm = BitMatrix::from_columns(t.dim(d), &z);
            let bt = if d == 0 {
                BitMatrix::zeros(t.dim(d), 0)
            } else {
                t.differential(d - 1)
            };
            zm.hstack(&bt).rank() - bt.rank() == hs
        })
    }

    pub fn is_acyclic_fibration(&self) -> bool {
        self.is_surjective() && self.is_quasi_isomorphism()
    }

    pub fn map_system(&self, ds: &DefiningSystem) -> DefiningSystem {
        DefiningSystem {
            degrees: ds.degrees.clone(),
            entries: ds
                .entries
                .iter()
                .map(|(&k, v)| (k, self.apply(v)))
                .collect(),
        }
    }
}

/// A cohomology class, remembered through one representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub representative: DgElement,
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.representative.degree
    }

    pub fn is_zero(&self, alg: &DgAlgebra) -> bool {
        alg.is_coboundary(&self.representative)
    }

    pub fn equals(&self, other: &CohomologyClass, alg: &DgAlgebra) -> bool {
        alg.same_class(&self.representative, &other.representative)
    }
}

/// A defining system for an `n`-fold Massey product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningSystem {
    /// Degrees `d_1..d_n` of the classes.
    pub degrees: Vec<usize>,
    /// Entries keyed by `(i, j)`, 1-based.
    pub entries: BTreeMap<(usize, usize), DgElement>,
}

/// `d_{ij} = Σ_{s=i}^{j-1} d_s − (j − 1 − i)`, for 1-based `i < j`.
pub fn entry_degree(degrees: &[usize], i: usize, j: usize) -> usize {
    let sum: usize = degrees[i - 1..j - 1].iter().sum();
    sum + 1 + i - j
}

/// All index pairs of a defining system, shortest first.
fn positions(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for len in 1..n {
        for i in 1..=n + 1 - len {
            out.push((i, i + len));
        }
    }
    out
}

impl DefiningSystem {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &DgElement {
        &self.entries[&(i, j)]
    }

    /// `Σ_{i<k<j} a_{ik} a_{kj}`.
    pub fn interior_sum(&self, alg: &DgAlgebra, i: usize, j: usize) -> DgElement {
        interior_sum(alg, &self.entries, &self.degrees, i, j)
    }

    /// Checks degrees and the relations `δ a_{ij} = Σ a_{ik} a_{kj}`; when
    /// classes are given, also that `a_{i,i+1}` represents `a_i`.
    pub fn validate(&self, alg: &DgAlgebra, classes: Option<&[DgElement]>) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(Error::InvalidDefiningSystem(
                "need at least two classes".into(),
            ));
        }
        if self.degrees.contains(&0) {
            return Err(Error::InvalidDefiningSystem(
                "classes must have positive degree".into(),
            ));
        }
        let expected = positions(n);
        if self.entries.len() != expected.len() {
            return Err(Error::InvalidDefiningSystem(format!(
                "{} entries, expected {}",
                self.entries.len(),
                expected.len()
            )));
        }
        for (i, j) in expected {
            let Some(a) = self.entries.get(&(i, j)) else {
                return Err(Error::InvalidDefiningSystem(format!(
                    "missing entry a_{{{i},{j}}}"
                )));
            };
            let deg = entry_degree(&self.degrees, i, j);
            if a.degree != deg || a.coeffs.len() != alg.dim(deg) {
                return Err(Error::InvalidDefiningSystem(format!(
                    "a_{{{i},{j}}} has degree {}, expected {deg}",
                    a.degree
                )));
            }
            if alg.d(a) != self.interior_sum(alg, i, j) {
                return Err(Error::InvalidDefiningSystem(format!(
                    "δ a_{{{i},{j}}} ≠ Σ a_{{{i},k}} a_{{k,{j}}}"
                )));
            }
            if j == i + 1 {
                if let Some(cls) = classes {
                    if !alg.same_class(a, &cls[i - 1]) {
                        return Err(Error::InvalidDefiningSystem(format!(
                            "a_{{{i},{j}}} does not represent a_{i}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn interior_sum(
    alg: &DgAlgebra,
    entries: &BTreeMap<(usize, usize), DgElement>,
    degrees: &[usize],
    i: usize,
    j: usize,
) -> DgElement {
    let mut out = alg.zero(entry_degree(degrees, i, j) + 1);
    for k in i + 1..j {
        out = out.add(&alg.mul(&entries[&(i, k)], &entries[&(k, j)]));
    }
    out
}

/// The class of `Σ_{k=2}^{n} a_{1k} a_{k,n+1}`.
pub fn massey_product(alg: &DgAlgebra, ds: &DefiningSystem) -> Result<CohomologyClass> {
    ds.validate(alg, None)?;
    let n = ds.n();
    let representative = interior_sum(alg, &ds.entries, &ds.degrees, 1, n + 1);
    if !alg.is_cocycle(&representative) {
        return Err(Error::Verification(
            "the Massey sum is not a cocycle".into(),
        ));
    }
    Ok(CohomologyClass { representative })
}

/// The defining system with `a_{i,i+1} = a_i` and every other entry zero, for
/// an algebra with zero differential whose neighbouring products vanish.
pub fn trivial_defining_system(alg: &DgAlgebra, classes: &[DgElement]) -> Result<DefiningSystem> {
    if !alg.has_trivial_differential() {
        return Err(Error::InvalidArgument(
            "the algebra has a nonzero differential".into(),
        ));
    }
    if classes.len() < 2 {
        return Err(Error::InvalidDefiningSystem(
            "need at least two classes".into(),
        ));
    }
    for (i, w) in classes.windows(2).enumerate() {
        if !alg.mul(&w[0], &w[1]).is_zero() {
            return Err(Error::InvalidDefiningSystem(format!(
                "a_{} ∪ a_{} ≠ 0",
                i + 1,
                i + 2
            )));
        }
    }
    let degrees: Vec<usize> = classes.iter().map(|a| a.degree).collect();
    let n = classes.len();
    let entries = positions(n)
        .into_iter()
        .map(|(i, j)| {
            let a = if j == i + 1 {
                classes[i - 1].clone()
            } else {
                alg.zero(entry_degree(&degrees, i, j))
            };
            ((i, j), a)
        })
        .collect();
    let ds = DefiningSystem { degrees, entries };
    ds.validate(alg, Some(classes))?;
    Ok(ds)
}

/// Every class in the Massey product set `⟨a_1, …, a_n⟩`, as canonical
/// representatives, by enumerating all defining systems. Refuses when the
/// search space exceeds `2^max_bits`.
pub fn massey_set(
    alg: &DgAlgebra,
    classes: &[DgElement],
    max_bits: u32,
) -> Result<BTreeSet<BitVector>> {
    let n = classes.len();
    if n < 2 {
        return Err(Error::InvalidDefiningSystem(
            "need at least two classes".into(),
        ));
    }
    for a in classes {
        if !alg.is_cocycle(a) {
            return Err(Error::NotACocycle(format!(
                "class of degree {} is not a cocycle",
                a.degree
            )));
        }
    }
    let degrees: Vec<usize> = classes.iter().map(|a| a.degree).collect();
    if degrees.contains(&0) {
        return Err(Error::InvalidDefiningSystem(
            "classes must have positive degree".into(),
        ));
    }
    let pos = positions(n);
    // Freedom at each entry: coboundaries for adjacent entries, cocycles for
    // the others.
    let freedom: Vec<Vec<BitVector>> = pos
        .iter()
        .map(|&(i, j)| {
            let d = entry_degree(&degrees, i, j);
            if j == i + 1 {
                if d == 0 {
                    Vec::new()
                } else {
                    alg.differential(d - 1).transpose().row_space_basis()
                }
            } else {
                alg.cocycle_basis(d)
            }
        })
        .collect();
    let bits: usize = freedom.iter().map(Vec::len).sum();
    if bits > max_bits as usize {
        return Err(Error::CapExceeded {
            what: "defining systems".into(),
            count: 1u128.checked_shl(bits as u32).unwrap_or(u128::MAX),
            cap: 1u128 << max_bits,
        });
    }
    let mut out = BTreeSet::new();
    let mut entries = BTreeMap::new();
    enumerate_systems(
        alg,
        classes,
        &degrees,
        &pos,
        &freedom,
        0,
        &mut entries,
        &mut out,
    );
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_systems(
    alg: &DgAlgebra,
    classes: &[DgElement],
    degrees: &[usize],
    pos: &[(usize, usize)],
    freedom: &[Vec<BitVector>],
    at: usize,
    entries: &mut BTreeMap<(usize, usize), DgElement>,
    out: &mut BTreeSet<BitVector>,
) {
    let n = classes.len();
    if at == pos.len() {
        let sum = interior_sum(alg, entries, degrees, 1, n + 1);
        out.insert(alg.reduce(&sum));
        return;
    }
    let (i, j) = pos[at];
    let base = if j == i + 1 {
        classes[i - 1].clone()
    } else {
        let rhs = interior_sum(alg, entries, degrees, i, j);
        match alg.primitive(&rhs) {
            Some(p) => p,
            None if rhs.is_zero() => alg.zero(rhs.degree - 1),
            None => return,
        }
    };
    let free = &freedom[at];
    for mask in 0u64..(1u64 << free.len()) {
        let mut a = base.clone();
        for (b, v) in free.iter().enumerate() {
            if mask >> b & 1 == 1 {
                a.coeffs.xor_assign(v);
            }
        }
        entries.insert((i, j), a);
        enumerate_systems(alg, classes, degrees, pos, freedom, at + 1, entries, out);
    }
    entries.remove(&(i, j));
}

fn not_fibration(what: &str) -> Error {
    Error::NotAcyclicFibration(what.into())
}

/// A cocycle `a` of the source with `q(a) = b`, for a cocycle `b` of the
/// target.
///
/// Solves `δa' = 0, q(a') + δc = b` in one system, lifts `c` to `d` and
/// returns `a' + δd`.
pub fn lift_cocycle(q: &DgMap, b: &DgElement) -> Result<DgElement> {
    let (s, t) = (&q.source, &q.target);
    let n = b.degree;
    if !t.is_cocycle(b) {
        return Err(Error::NotACocycle(format!("target element of degree {n}")));
    }
    if n > s.top() {
        return Ok(s.zero(n));
    }
    let ds = s.differential(n);
    let qn = &q.maps[n];
    let prev = if n == 0 { 0 } else { s.dim(n - 1) };
    let tprev = if n == 0 { 0 } else { t.dim(n - 1) };
    let dt = if n == 0 {
        BitMatrix::zeros(t.dim(n), 0)
    } else {
        t.differential(n - 1)
    };
    let top = ds.hstack(&BitMatrix::zeros(ds.rows(), tprev));
    let bottom = qn.hstack(&dt);
    let rhs = BitVector::zeros(ds.rows()).concat(&b.coeffs);
    let sol = top
        .vstack(&bottom)
        .solve(&rhs)?
        .ok_or_else(|| not_fibration("the class of b has no preimage"))?;
    let a_prime = s.element(n, sol.slice(0, s.dim(n)))?;
    let mut a = a_prime;
    if n > 0 {
        let c = sol.slice(s.dim(n), tprev);
        let d = q.maps[n - 1]
            .solve(&c)?
            .ok_or_else(|| not_fibration("not surjective"))?;
        debug_assert_eq!(d.len(), prev);
        a = a.add(&s.d(&s.element(n - 1, d)?));
    }
    if q.apply(&a) != *b || !s.is_cocycle(&a) {
        return Err(Error::Verification(
            "lifted cocycle fails its equations".into(),
        ));
    }
    Ok(a)
}

/// An element `e` of the source with `q(e) = c` and `δe = d`, for a source
/// cocycle `d` and a target element `c` with `δc = q(d)`.
pub fn lift_coboundary(q: &DgMap, d: &DgElement, c: &DgElement) -> Result<DgElement> {
    let (s, t) = (&q.source, &q.target);
    if d.degree != c.degree + 1 {
        return Err(Error::InvalidArgument(
            "δc and d must have the same degree".into(),
        ));
    }
    if !s.is_cocycle(d) {
        return Err(Error::NotACocycle(format!(
            "source element of degree {}",
            d.degree
        )));
    }
    if t.d(c) != q.apply(d) {
        return Err(Error::InvalidArgument("δc ≠ q(d)".into()));
    }
    let d_prime = if d.is_zero() {
        s.zero(c.degree)
    } else {
        s.primitive(d)
            .ok_or_else(|| not_fibration("q(d) is a coboundary but d is not"))?
    };
    let rest = c.add(&q.apply(&d_prime));
    let e = d_prime.add(&lift_cocycle(q, &rest)?);
    if q.apply(&e) != *c || s.d(&e) != *d {
        return Err(Error::Verification(
            "lifted coboundary fails its equations".into(),
        ));
    }
    Ok(e)
}

/// A defining system of the source for `classes` whose image under `q` is
/// `ds`.
pub fn lift_defining_system(
    q: &DgMap,
    classes: &[DgElement],
    ds: &DefiningSystem,
) -> Result<DefiningSystem> {
    let (s, t) = (&q.source, &q.target);
    let n = ds.n();
    if classes.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} classes for an {n}-fold system",
            classes.len()
        )));
    }
    let images: Vec<DgElement> = classes.iter().map(|a| q.apply(a)).collect();
    ds.validate(t, Some(&images))?;
    let mut entries = BTreeMap::new();
    for (i, j) in positions(n) {
        let target = ds.get(i, j);
        let a = if j == i + 1 {
            let a = lift_cocycle(q, target)?;
            if !s.same_class(&a, &classes[i - 1]) {
                return Err(not_fibration("lifted entry represents a different class"));
            }
            a
        } else {
            let sum = interior_sum(s, &entries, &ds.degrees, i, j);
            if !s.is_cocycle(&sum) {
                return Err(Error::Verification(format!(
                    "Σ a_{{{i},k}} a_{{k,{j}}} is not a cocycle"
                )));
            }
            lift_coboundary(q, &sum, target)?
        };
        entries.insert((i, j), a);
    }
    let lifted = DefiningSystem {
        degrees: ds.degrees.clone(),
        entries,
    };
    lifted.validate(s, Some(classes))?;
    Ok(lifted)
}

/// One sampled tuple of classes with vanishing neighbouring products.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MasseySample {
    pub degrees: Vec<usize>,
    pub classes: Vec<String>,
    pub product_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MasseyReport {
    pub samples: usize,
    pub max_n: usize,
    pub seed: u64,
    /// Number of sampled tuples of each length `2..=max_n`.
    pub by_length: BTreeMap<usize, usize>,
    pub counterexamples: Vec<MasseySample>,
}

impl MasseyReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// A random element of the span of `basis` in degree `d`.
fn random_span(alg: &DgAlgebra, d: usize, basis: &[BitVector], rng: &mut impl Rng) -> DgElement {
    let mut x = alg.zero(d);
    for v in basis {
        if rng.gen::<bool>() {
            x.coeffs.xor_assign(v);
        }
    }
    x
}

/// A tuple `a_1..a_n` of elements of an algebra with zero differential and
/// `a_i a_{i+1} = 0`, each next entry drawn from the annihilator of the last.
/// Degrees are kept small enough for the product to stay below the top.
pub fn sample_tuple(alg: &DgAlgebra, n: usize, rng: &mut impl Rng) -> Vec<DgElement> {
    let top = alg.top();
    let positive: Vec<usize> = (1..=top).filter(|&d| alg.dim(d) > 0).collect();
    let mut out: Vec<DgElement> = Vec::with_capacity(n);
    let mut budget = top as i64 + n as i64 - 2;
    for i in 0..n {
        let remaining = (n - i - 1) as i64;
        let fits: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&d| d as i64 + remaining <= budget)
            .collect();
        let d = *fits.choose(rng).or(positive.first()).unwrap_or(&1);
        budget -= d as i64;
        let basis = match out.last() {
            None => (0..alg.dim(d))
                .map(|j| BitVector::unit(alg.dim(d), j))
                .collect(),
            Some(prev) => alg.right_annihilator(prev, d),
        };
        out.push(random_span(alg, d, &basis, rng));
    }
    out
}

/// Samples tuples with vanishing neighbouring products and checks that the
/// trivial defining system gives the zero class every time.
pub fn strong_massey_check(
    alg: &DgAlgebra,
    samples: usize,
    max_n: usize,
    seed: u64,
) -> Result<MasseyReport> {
    if max_n < 2 {
        return Err(Error::InvalidArgument("max_n must be at least 2".into()));
    }
    let results: Vec<Result<(usize, Option<MasseySample>)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let n = rng.gen_range(2..=max_n);
            let tuple = sample_tuple(alg, n, &mut rng);
            let ds = trivial_defining_system(alg, &tuple)?;
            let class = massey_product(alg, &ds)?;
            let zero = class.is_zero(alg);
            let sample = (!zero).then(|| MasseySample {
                degrees: tuple.iter().map(|a| a.degree).collect(),
                classes: tuple.iter().map(|a| a.coeffs.to_string()).collect(),
                product_zero: zero,
            });
            Ok((n, sample))
        })
        .collect();
    let mut by_length = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for r in results {
        let (n, bad) = r?;
        *by_length.entry(n).or_insert(0) += 1;
        counterexamples.extend(bad);
    }
    Ok(MasseyReport {
        samples,
        max_n,
        seed,
        by_length,
        counterexamples,
    })
}

/// A random invertible `n×n` matrix.
pub fn random_invertible(n: usize, rng: &mut impl Rng) -> BitMatrix {
    loop {
        let rows = (0..n)
            .map(|_| BitVector::from_bools(&(0..n).map(|_| rng.gen()).collect::<Vec<bool>>()))
            .collect();
        let m = BitMatrix::from_rows(n, rows);
        if m.rank() == n {
            return m;
        }
    }
}

/// Inverse of an invertible square matrix.
pub fn inverse(m: &BitMatrix) -> Option<BitMatrix> {
    let n = m.rows();
    if m.cols() != n {
        return None;
    }
    let cols: Option<Vec<BitVector>> = (0..n)
        .map(|i| m.solve(&BitVector::unit(n, i)).ok().flatten())
        .collect();
    Some(BitMatrix::from_columns(n, &cols?))
}

/// The acyclic fibration `T ⊕ E → T`, where `E` is spanned by pairs
/// `e ↦ δe` with `e` in the given degrees. `T` must be connected; `E` is a
/// square-zero ideal on which `T` acts through its augmentation. With an
/// `rng`, the source is transported along a random change of basis in every
/// degree.
pub fn acyclic_extension(
    target: &DgAlgebra,
    pair_degrees: &[usize],
    rng: Option<&mut ChaCha8Rng>,
) -> Result<DgMap> {
    let top = target.top();
    if target.dim(0) != 1 {
        return Err(Error::InvalidArgument(
            "the target must be connected".into(),
        ));
    }
    if pair_degrees.iter().any(|&d| d == 0 || d >= top) {
        return Err(Error::InvalidArgument(format!(
            "pair degrees must lie in 1..{top}"
        )));
    }
    // Extra basis of degree d: e_p for pairs with degree d, then δe_p for
    // pairs with degree d - 1.
    let extra = |d: usize| -> Vec<(usize, bool)> {
        let mut v: Vec<(usize, bool)> = pair_degrees
            .iter()
            .enumerate()
            .filter(|&(_, &pd)| pd == d)
            .map(|(p, _)| (p, false))
            .collect();
        v.extend(
            pair_degrees
                .iter()
                .enumerate()
                .filter(|&(_, &pd)| pd + 1 == d)
                .map(|(p, _)| (p, true)),
        );
        v
    };
    let extras: Vec<Vec<(usize, bool)>> = (0..=top + 1).map(extra).collect();
    let dims: Vec<usize> = (0..=top).map(|d| target.dim(d) + extras[d].len()).collect();
    let sdim = |d: usize| dims.get(d).copied().unwrap_or(0);
    let tdim = |d: usize| target.dim(d);
    let source = DgAlgebra::from_fn(
        dims.clone(),
        BitVector::ones(1).concat(&BitVector::zeros(extras[0].len())),
        |d, i| {
            let mut out = BitVector::zeros(sdim(d + 1));
            if d + 1 > top {
                return out;
            }
            if i < tdim(d) {
                let img = target.d(&target.basis_element(d, i)).coeffs;
                for c in img.ones_iter() {
                    out.set(c, true);
                }
            } else {
                let (p, is_image) = extras[d][i - tdim(d)];
                if !is_image {
                    let pos = extras[d + 1]
                        .iter()
                        .position(|&x| x == (p, true))
                        .expect("paired");
                    out.set(tdim(d + 1) + pos, true);
                }
            }
            out
        },
        |d1, i, d2, j| {
            let d = d1 + d2;
            let mut out = BitVector::zeros(sdim(d));
            let (in_t1, in_t2) = (i < tdim(d1), j < tdim(d2));
            match (in_t1, in_t2) {
                (true, true) => {
                    let p = target.product_basis(d1, i, d2, j);
                    for c in p.ones_iter() {
                        out.set(c, true);
                    }
                }
                // The unit of T is the only element with nonzero augmentation.
                (true, false) if d1 == 0 && target.unit().coeffs.get(i) => {
                    out.set(j - tdim(d2) + tdim(d), true)
                }
                (false, true) if d2 == 0 && target.unit().coeffs.get(j) => {
                    out.set(i - tdim(d1) + tdim(d), true)
                }
                _ => {}
            }
            out
        },
    );
    let maps: Vec<BitMatrix> = (0..=top)
        .map(|d| BitMatrix::identity(tdim(d)).hstack(&BitMatrix::zeros(tdim(d), sdim(d) - tdim(d))))
        .collect();
    let q = match rng {
        None => DgMap {
            source,
            target: target.clone(),
            maps,
        },
        Some(rng) => {
            let p: Vec<BitMatrix> = dims.iter().map(|&n| random_invertible(n, rng)).collect();
            let p_inv: Vec<BitMatrix> = p.iter().map(|m| inverse(m).expect("invertible")).collect();
            let transported = transport(&source, &p, &p_inv);
            let maps = maps.iter().zip(&p_inv).map(|(m, pi)| m.mul(pi)).collect();
            DgMap {
                source: transported,
                target: target.clone(),
                maps,
            }
        }
    };
    q.validate()?;
    q.source.validate()?;
    Ok(q)
}

/// The same algebra written in the basis `p_d` applied to the old one.
fn transport(alg: &DgAlgebra, p: &[BitMatrix], p_inv: &[BitMatrix]) -> DgAlgebra {
    let top = alg.top();
    let old = |d: usize, i: usize| DgElement {
        degree: d,
        coeffs: p_inv[d].column(i),
    };
    let new = |x: DgElement| -> BitVector {
        if x.degree > top {
            BitVector::zeros(0)
        } else {
            p[x.degree].mul_vec(&x.coeffs)
        }
    };
    DgAlgebra::from_fn(
        alg.dims().to_vec(),
        p[0].mul_vec(&alg.unit().coeffs),
        |d, i| new(alg.d(&old(d, i))),
        |d1, i, d2, j| new(alg.mul(&old(d1, i), &old(d2, j))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(m: usize, n: usize, top: usize) -> DgAlgebra {
        DgAlgebra::from_connected_sum(&ConnectedSumAlgebra::new(m, n), top)
    }

    #[test]
    fn connected_sum_is_a_dg_algebra() {
        h(2, 3, 4).validate().unwrap();
        h(0, 1, 5).validate().unwrap();
    }

    #[test]
    fn two_fold_product_is_the_cup_product() {
        let alg = h(0, 2, 4);
        let x1 = alg.basis_element(1, 0);
        let x2 = alg.basis_element(1, 1);
        let ds = trivial_defining_system(&alg, &[x1.clone(), x2.clone()]).unwrap();
        assert!(massey_product(&alg, &ds).unwrap().is_zero(&alg));
        assert!(trivial_defining_system(&alg, &[x1.clone(), x1.clone()]).is_err());
    }

    #[test]
    fn repeated_v_class() {
        let alg = h(2, 3, 5);
        let v = alg.basis_element(1, 0);
        let ds = trivial_defining_system(&alg, &[v.clone(), v.clone(), v.clone()]).unwrap();
        let p = massey_product(&alg, &ds).unwrap();
        assert_eq!(p.degree(), 2);
        assert!(p.representative.is_zero());
    }

    #[test]
    fn massey_set_of_distinct_v_classes() {
        let alg = h(3, 0, 4);
        let classes: Vec<DgElement> = (0..3).map(|i| alg.basis_element(1, i)).collect();
        let set = massey_set(&alg, &classes, 20).unwrap();
        assert!(set.contains(&BitVector::zeros(alg.dim(2))));
    }

    #[test]
    fn lifting_through_identity() {
        let alg = h(1, 2, 4);
        let id = DgMap::identity(&alg);
        assert!(id.is_acyclic_fibration());
        let b = alg.basis_element(1, 1);
        assert_eq!(lift_cocycle(&id, &b).unwrap(), b);
        assert!(lift_cocycle(&id, &alg.zero(2)).unwrap().is_zero());
    }

    #[test]
    fn smallest_fibration() {
        let alg = h(1, 0, 2);
        let q = acyclic_extension(&alg, &[1], None).unwrap();
        assert_eq!(q.source.dims(), &[1, 2, 1]);
        assert!(q.is_acyclic_fibration());
        let b = alg.basis_element(1, 0);
        let a = lift_cocycle(&q, &b).unwrap();
        assert_eq!(q.apply(&a), b);
        assert!(q.source.is_cocycle(&a));
        let c = alg.zero(1);
        let e = lift_coboundary(&q, &q.source.zero(2), &c).unwrap();
        assert!(e.is_zero());
    }

    #[test]
    fn scrambled_fibrations_lift_defining_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let target = h(2, 1, 3);
        for _ in 0..10 {
            let q = acyclic_extension(&target, &[1, 2], Some(&mut rng)).unwrap();
            assert!(q.is_acyclic_fibration());
            let tuple = sample_tuple(&target, 3, &mut rng);
            let classes: Vec<DgElement> =
                tuple.iter().map(|b| lift_cocycle(&q, b).unwrap()).collect();
            let ds = trivial_defining_system(&target, &tuple).unwrap();
            let lifted = lift_defining_system(&q, &classes, &ds).unwrap();
            assert_eq!(q.map_system(&lifted), ds);
            let p_src = massey_product(&q.source, &lifted).unwrap();
            let p_tgt = massey_product(&target, &ds).unwrap();
            assert_eq!(q.apply(&p_src.representative), p_tgt.representative);
        }
    }

    #[test]
    fn non_fibrations_are_detected() {
        // Inclusion of the unit into V_*: surjective fails.
        let alg = h(1, 0, 2);
        let q = DgMap {
            source: alg.clone(),
            target: alg.clone(),
            maps: vec![
                BitMatrix::identity(1),
                BitMatrix::zeros(1, 1),
                BitMatrix::zeros(0, 0),
            ],
        };
        assert!(!q.is_surjective());
        let err = lift_cocycle(&q, &alg.basis_element(1, 0)).unwrap_err();
        assert!(matches!(err, Error::NotAcyclicFibration(_)), "{err}");
    }

    #[test]
    fn entry_degrees() {
        assert_eq!(entry_degree(&[1, 1, 1], 1, 2), 1);
        assert_eq!(entry_degree(&[1, 1, 1], 1, 3), 1);
        assert_eq!(entry_degree(&[2, 1, 3], 2, 4), 3);
    }

    #[test]
    fn strong_massey_check_is_deterministic() {
        let alg = h(2, 3, 8);
        let a = strong_massey_check(&alg, 40, 5, 9).unwrap();
        let b = strong_massey_check(&alg, 40, 5, 9).unwrap();
        assert!(a.passed());
        assert_eq!(a.by_length, b.by_length);
    }
}
