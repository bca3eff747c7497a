//! Finite Boolean rings, their subrings, and the graded algebras built from them.
//!
//! A finite Boolean ring with `n` atoms is `GF(2)^n`: elements are bit vectors
//! over the atom basis, product is AND and sum is XOR. A subring is recorded as
//! a partition of the ambient atoms; its elements are the unions of blocks and
//! its atoms are the blocks themselves.
//!
//! [`ConnectedSumAlgebra`] is the graded algebra `V_* ⊓ B_*`: degree 0 is the
//! ground field, degree 1 is `V ⊕ B` and every higher degree is a copy of `B`.
//! All products between the `V` part and the `B` part vanish, products of two
//! positive-degree `V` elements vanish, and the `B` parts multiply by the ring
//! product.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// A finite Boolean ring `GF(2)^n` presented on its atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BooleanRing {
    atoms: usize,
}

impl BooleanRing {
    pub fn new(atoms: usize) -> Result<Self> {
        if atoms == 0 {
            return Err(Error::InvalidArgument(
                "a Boolean ring needs at least one atom".into(),
            ));
        }
        Ok(Self { atoms })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms
    }

    /// Number of elements, `2^n`.
    pub fn order(&self) -> u128 {
        1u128 << self.atoms.min(127)
    }

    pub fn zero(&self) -> BitVector {
        BitVector::zeros(self.atoms)
    }

    pub fn one(&self) -> BitVector {
        BitVector::ones(self.atoms)
    }

    pub fn atom(&self, i: usize) -> BitVector {
        BitVector::unit(self.atoms, i)
    }

    pub fn atoms(&self) -> Vec<BitVector> {
        (0..self.atoms).map(|i| self.atom(i)).collect()
    }

    pub fn mul(&self, a: &BitVector, b: &BitVector) -> BitVector {
        self.check(a);
        self.check(b);
        a.and(b)
    }

    pub fn add(&self, a: &BitVector, b: &BitVector) -> BitVector {
        self.check(a);
        self.check(b);
        a.xor(b)
    }

    /// An element is an atom iff its support is a single point.
    pub fn is_atom(&self, x: &BitVector) -> bool {
        x.count_ones() == 1
    }

    /// The atoms lying below `x`, i.e. `{e_i : e_i x = e_i}`.
    pub fn atoms_below(&self, x: &BitVector) -> Vec<usize> {
        x.ones_iter().collect()
    }

    /// Every element of the ring, in binary counting order. Only sensible for
    /// small rings.
    pub fn elements(&self) -> impl Iterator<Item = BitVector> + '_ {
        assert!(
            self.atoms < 24,
            "refusing to enumerate a ring with 2^{} elements",
            self.atoms
        );
        (0u32..(1u32 << self.atoms)).map(move |mask| {
            BitVector::from_indices(self.atoms, (0..self.atoms).filter(|i| mask >> i & 1 == 1))
        })
    }

    /// `z ∈ (x, y)`, decided by `(1 + x + y + xy) z = 0`.
    pub fn ideal_membership(&self, z: &BitVector, x: &BitVector, y: &BitVector) -> bool {
        let w = self.one().xor(x).xor(y).xor(&self.mul(x, y));
        self.mul(&w, z).is_zero()
    }

    /// Splits `z ∈ (x, y)` as `z_x + z_y` with `z_x ∈ (x)` and `z_y ∈ (y)`,
    /// which is unique when `xy = 0`.
    pub fn ideal_decompose(
        &self,
        z: &BitVector,
        x: &BitVector,
        y: &BitVector,
    ) -> Result<(BitVector, BitVector)> {
        if !self.mul(x, y).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "generators {x} and {y} are not orthogonal"
            )));
        }
        if !self.ideal_membership(z, x, y) {
            return Err(Error::InvalidArgument(format!(
                "{z} does not lie in the ideal ({x}, {y})"
            )));
        }
        Ok((self.mul(x, z), self.mul(y, z)))
    }

    fn check(&self, a: &BitVector) {
        assert_eq!(a.len(), self.atoms, "element does not belong to this ring");
    }
}

/// A subring of a finite Boolean ring, stored as a partition of the ambient
/// atoms. Blocks are sorted internally and ordered by their smallest atom.
///
/// An ambient size of zero stands for the absent Boolean factor (`B = 0`) and
/// carries no blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subring {
    ambient: usize,
    blocks: Vec<Vec<usize>>,
}

impl Subring {
    /// The whole ring: every atom is its own block.
    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            blocks: (0..ambient).map(|i| vec![i]).collect(),
        }
    }

    /// The prime subring `{0, 1}`.
    pub fn prime(ambient: usize) -> Self {
        if ambient == 0 {
            return Self::full(0);
        }
        Self {
            ambient,
            blocks: vec![(0..ambient).collect()],
        }
    }

    pub fn from_blocks(ambient: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; ambient];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidArgument("empty block in subring".into()));
            }
            for &a in b {
                if a >= ambient {
                    return Err(Error::InvalidArgument(format!(
                        "atom {a} out of range for ambient ring with {ambient} atoms"
                    )));
                }
                if std::mem::replace(&mut seen[a], true) {
                    return Err(Error::InvalidArgument(format!(
                        "atom {a} appears in two blocks"
                    )));
                }
            }
        }
        if let Some(a) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(format!(
                "atom {a} is not covered by any block"
            )));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { ambient, blocks })
    }

    pub fn ambient_atoms(&self) -> usize {
        self.ambient
    }

    /// Atom count of the abstract subring: the number of blocks.
    pub fn atom_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == self.ambient
    }

    /// The ambient element of block `b`.
    pub fn block_element(&self, b: usize) -> BitVector {
        BitVector::from_indices(self.ambient, self.blocks[b].iter().copied())
    }

    /// For each ambient atom, the index of the block containing it.
    pub fn block_of_atoms(&self) -> Vec<usize> {
        let mut owner = vec![0; self.ambient];
        for (b, block) in self.blocks.iter().enumerate() {
            for &a in block {
                owner[a] = b;
            }
        }
        owner
    }

    /// Whether an ambient element is a union of blocks.
    pub fn contains(&self, x: &BitVector) -> bool {
        assert_eq!(x.len(), self.ambient);
        self.blocks.iter().all(|b| {
            let first = x.get(b[0]);
            b.iter().all(|&a| x.get(a) == first)
        })
    }

    /// The subring generated by `self` and `x`: every block is split into its
    /// intersection with the support of `x` and with the complement.
    pub fn adjoin(&self, x: &BitVector) -> Subring {
        assert_eq!(x.len(), self.ambient);
        let mut blocks = Vec::with_capacity(self.blocks.len() * 2);
        for b in &self.blocks {
            let (inside, outside): (Vec<usize>, Vec<usize>) = b.iter().partition(|&&a| x.get(a));
            if !inside.is_empty() {
                blocks.push(inside);
            }
            if !outside.is_empty() {
                blocks.push(outside);
            }
        }
        blocks.sort_by_key(|b| b[0]);
        Subring {
            ambient: self.ambient,
            blocks,
        }
    }

    /// For a refinement `finer` of `self`, the coarse block containing each
    /// fine block (the map on spectra induced by the inclusion).
    pub fn coarsening_map(&self, finer: &Subring) -> Result<Vec<usize>> {
        if finer.ambient != self.ambient {
            return Err(Error::InvalidArgument("subrings of different rings".into()));
        }
        let owner = self.block_of_atoms();
        finer
            .blocks
            .iter()
            .map(|fb| {
                let b = owner[fb[0]];
                if fb.iter().all(|&a| owner[a] == b) {
                    Ok(b)
                } else {
                    Err(Error::InvalidArgument(
                        "subring does not contain the coarser one".into(),
                    ))
                }
            })
            .collect()
    }
}

/// A degree-one generator of `V_* ⊓ B_*`: a basis vector of `V` or an atom of
/// the Boolean ring. `V` generators sort first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    V(usize),
    J(usize),
}

impl Generator {
    pub fn is_atom(self) -> bool {
        matches!(self, Generator::J(_))
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::V(i) => write!(f, "v{}", i + 1),
            Generator::J(j) => write!(f, "x{}", j + 1),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid generator name {s:?}"));
        let (tag, idx) = s.split_at(s.char_indices().nth(1).map_or(s.len(), |(i, _)| i));
        let idx: usize = idx.parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        match tag {
            "v" => Ok(Generator::V(idx - 1)),
            "x" => Ok(Generator::J(idx - 1)),
            _ => Err(bad()),
        }
    }
}

/// Multidegree of a homogeneous element: one coordinate per `V` generator and
/// one per atom. `v_i` has degree `e_i`, an atom `x` in degree `d` has `d·e_x`.
pub type MultiDegree = SmallVec<[i16; 8]>;

/// An element of one graded piece of a [`ConnectedSumAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedElement {
    pub degree: usize,
    pub coeffs: BitVector,
}

impl GradedElement {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }
}

/// The graded algebra `V_* ⊓ B_*` with `dim V = v_dim` and `B = GF(2)^atoms`.
///
/// Basis of degree 1: `v_1..v_m` followed by `x_1..x_n`. Degrees `j ≥ 2` use the
/// atom basis `x_1..x_n` (the copy of `B` in degree `j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ConnectedSumAlgebra {
    v_dim: usize,
    atoms: usize,
}

impl ConnectedSumAlgebra {
    /// `atoms = 0` gives the dual algebra `V_*` alone.
    pub fn new(v_dim: usize, atoms: usize) -> Self {
        Self { v_dim, atoms }
    }

    pub fn with_ring(v_dim: usize, ring: &BooleanRing) -> Self {
        Self::new(v_dim, ring.atom_count())
    }

    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// Number of degree-one generators, `m + n`.
    pub fn generator_count(&self) -> usize {
        self.v_dim + self.atoms
    }

    pub fn graded_dim(&self, degree: usize) -> usize {
        match degree {
            0 => 1,
            1 => self.v_dim + self.atoms,
            _ => self.atoms,
        }
    }

    pub fn generators(&self) -> Vec<Generator> {
        (0..self.v_dim)
            .map(Generator::V)
            .chain((0..self.atoms).map(Generator::J))
            .collect()
    }

    /// Position of a generator in the degree-1 basis.
    pub fn generator_index(&self, g: Generator) -> usize {
        match g {
            Generator::V(i) => i,
            Generator::J(j) => self.v_dim + j,
        }
    }

    pub fn generator_at(&self, idx: usize) -> Generator {
        if idx < self.v_dim {
            Generator::V(idx)
        } else {
            Generator::J(idx - self.v_dim)
        }
    }

    pub fn zero(&self, degree: usize) -> GradedElement {
        GradedElement {
            degree,
            coeffs: BitVector::zeros(self.graded_dim(degree)),
        }
    }

    pub fn unit(&self) -> GradedElement {
        GradedElement {
            degree: 0,
            coeffs: BitVector::ones(1),
        }
    }

    pub fn basis_element(&self, degree: usize, idx: usize) -> GradedElement {
        GradedElement {
            degree,
            coeffs: BitVector::unit(self.graded_dim(degree), idx),
        }
    }

    pub fn generator(&self, g: Generator) -> GradedElement {
        self.basis_element(1, self.generator_index(g))
    }

    /// The atom `x_j` placed in degree `degree ≥ 1`.
    pub fn atom_in_degree(&self, j: usize, degree: usize) -> GradedElement {
        assert!(degree >= 1 && j < self.atoms);
        let idx = if degree == 1 { self.v_dim + j } else { j };
        self.basis_element(degree, idx)
    }

    /// Human-readable name of a basis element.
    pub fn basis_label(&self, degree: usize, idx: usize) -> String {
        match degree {
            0 => "1".into(),
            1 => self.generator_at(idx).to_string(),
            d => format!("x{}^{d}", idx + 1),
        }
    }

    /// The product of two basis elements: another basis element or zero.
    pub fn mul_basis(&self, da: usize, a: usize, db: usize, b: usize) -> Option<usize> {
        match (da, db) {
            (0, _) => Some(b),
            (_, 0) => Some(a),
            _ => {
                let atom_a = self.atom_of(da, a)?;
                let atom_b = self.atom_of(db, b)?;
                (atom_a == atom_b).then_some(atom_a)
            }
        }
    }

    /// For a positive-degree basis element, the atom it lives over, or `None`
    /// for `V` generators.
    pub fn atom_of(&self, degree: usize, idx: usize) -> Option<usize> {
        match degree {
            0 => None,
            1 => idx.checked_sub(self.v_dim),
            _ => Some(idx),
        }
    }

    pub fn graded_multiply(&self, u: &GradedElement, w: &GradedElement) -> GradedElement {
        assert_eq!(
            u.coeffs.len(),
            self.graded_dim(u.degree),
            "u is not in this algebra"
        );
        assert_eq!(
            w.coeffs.len(),
            self.graded_dim(w.degree),
            "w is not in this algebra"
        );
        let degree = u.degree + w.degree;
        let mut out = self.zero(degree);
        for a in u.coeffs.ones_iter() {
            for b in w.coeffs.ones_iter() {
                if let Some(c) = self.mul_basis(u.degree, a, w.degree, b) {
                    out.coeffs.toggle(c);
                }
            }
        }
        out
    }

    pub fn multidegree(&self, degree: usize, idx: usize) -> MultiDegree {
        let mut md: MultiDegree = SmallVec::from_elem(0, self.v_dim + self.atoms);
        match degree {
            0 => {}
            1 => md[idx] = 1,
            d => md[self.v_dim + idx] = d as i16,
        }
        md
    }
}

/// The coefficient pair `Q = V_* ⊓ A_*` acting on `M = V_* ⊓ B_*` for a subring
/// `A ⊆ B`. When `A = B` this is the algebra with coefficients in itself.
///
/// Elements of `M` are written in the basis of [`ConnectedSumAlgebra`] for `M`.
/// A block of `A` acts on `M` through its ambient element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientPair {
    v_dim: usize,
    subring: Subring,
    block_of_atom: Vec<usize>,
}

impl CoefficientPair {
    pub fn new(v_dim: usize, subring: Subring) -> Self {
        let block_of_atom = subring.block_of_atoms();
        Self {
            v_dim,
            subring,
            block_of_atom,
        }
    }

    /// `Q = M = V_* ⊓ B_*`.
    pub fn diagonal(v_dim: usize, atoms: usize) -> Self {
        Self::new(v_dim, Subring::full(atoms))
    }

    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn subring(&self) -> &Subring {
        &self.subring
    }

    pub fn q(&self) -> ConnectedSumAlgebra {
        ConnectedSumAlgebra::new(self.v_dim, self.subring.atom_count())
    }

    pub fn m(&self) -> ConnectedSumAlgebra {
        ConnectedSumAlgebra::new(self.v_dim, self.subring.ambient_atoms())
    }

    /// Dimension of `M_j`, zero for negative `j`.
    pub fn m_dim(&self, j: i64) -> usize {
        if j < 0 {
            0
        } else {
            self.m().graded_dim(j as usize)
        }
    }

    /// `g · u` for a degree-one generator `g` of `Q` and `u ∈ M_j`.
    pub fn act(&self, g: Generator, j: usize, u: &BitVector) -> BitVector {
        let m = self.m();
        let mut out = BitVector::zeros(m.graded_dim(j + 1));
        self.act_into(g, j, u, &mut out);
        out
    }

    /// Adds `g · u` to `out`.
    pub fn act_into(&self, g: Generator, j: usize, u: &BitVector, out: &mut BitVector) {
        for e in u.ones_iter() {
            self.act_basis(1, self.q().generator_index(g), j, e, |t| out.toggle(t));
        }
    }

    /// Calls `emit` with each basis index of `M_{j+p}` occurring in the product
    /// of the `Q` basis element `(p, a)` with the `M` basis element `(j, e)`.
    pub fn act_basis(&self, p: usize, a: usize, j: usize, e: usize, mut emit: impl FnMut(usize)) {
        let q = self.q();
        if p == 0 {
            emit(e);
            return;
        }
        let block = q.atom_of(p, a);
        match (j, block) {
            // Q_+ times the unit of M: the image of `a` in M_p.
            (0, None) => emit(a),
            (0, Some(b)) => {
                let offset = if p == 1 { self.v_dim } else { 0 };
                for &atom in &self.subring.blocks()[b] {
                    emit(offset + atom);
                }
            }
            (_, None) => {}
            (_, Some(b)) => {
                let Some(atom) = self.m().atom_of(j, e) else {
                    return;
                };
                if self.block_of_atom[atom] == b {
                    emit(atom);
                }
            }
        }
    }

    /// The projection `p`: zero on `V`, the block's ambient element on atoms.
    pub fn p(&self, g: Generator) -> BitVector {
        match g {
            Generator::V(_) => BitVector::zeros(self.subring.ambient_atoms()),
            Generator::J(b) => self.subring.block_element(b),
        }
    }

    pub fn q_multidegree(&self, degree: usize, idx: usize) -> MultiDegree {
        self.q().multidegree(degree, idx)
    }

    /// Multidegree of an `M` basis element in the coordinates of `Q`: an
    /// ambient atom counts towards the block containing it.
    pub fn m_multidegree(&self, degree: usize, idx: usize) -> MultiDegree {
        let mut md: MultiDegree = SmallVec::from_elem(0, self.v_dim + self.subring.atom_count());
        let m = self.m();
        match degree {
            0 => {}
            _ => match m.atom_of(degree, idx) {
                None => md[idx] = 1,
                Some(atom) => md[self.v_dim + self.block_of_atom[atom]] = degree as i16,
            },
        }
        md
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn boolean_ring_arithmetic() {
        let r = BooleanRing::new(3).unwrap();
        assert_eq!(r.mul(&bv("110"), &bv("011")), bv("010"));
        assert_eq!(r.add(&bv("110"), &bv("011")), bv("101"));
        let r1 = BooleanRing::new(1).unwrap();
        assert_eq!(r1.mul(&r1.one(), &r1.one()), r1.one());
        assert!(BooleanRing::new(0).is_err());
    }

    #[test]
    fn every_element_is_idempotent_and_the_sum_of_its_atoms() {
        let r = BooleanRing::new(4).unwrap();
        for x in r.elements() {
            assert_eq!(r.mul(&x, &x), x);
            let mut sum = r.zero();
            for a in r.atoms_below(&x) {
                sum = r.add(&sum, &r.atom(a));
            }
            assert_eq!(sum, x);
        }
        let atoms: Vec<BitVector> = r.elements().filter(|x| r.is_atom(x)).collect();
        assert_eq!(atoms, r.atoms());
    }

    #[test]
    fn ideal_membership_examples() {
        let r = BooleanRing::new(3).unwrap();
        assert!(r.ideal_membership(&bv("110"), &bv("100"), &bv("010")));
        assert!(!r.ideal_membership(&bv("111"), &bv("100"), &bv("010")));
        for x in r.elements() {
            assert!(r.ideal_membership(&x, &x, &r.zero()));
        }
    }

    #[test]
    fn principal_ideal_criterion_matches_enumeration() {
        let r = BooleanRing::new(3).unwrap();
        for x in r.elements() {
            let ideal: Vec<BitVector> = r.elements().map(|a| r.mul(&a, &x)).collect();
            for z in r.elements() {
                let by_formula = r.mul(&r.one().xor(&x), &z).is_zero();
                assert_eq!(r.ideal_membership(&z, &x, &r.zero()), by_formula);
                assert_eq!(by_formula, ideal.contains(&z));
            }
        }
    }

    #[test]
    fn ideal_decompose_examples() {
        let r = BooleanRing::new(3).unwrap();
        let (zx, zy) = r
            .ideal_decompose(&bv("110"), &bv("100"), &bv("011"))
            .unwrap();
        assert_eq!((zx, zy), (bv("100"), bv("010")));
        let (zx, zy) = r
            .ideal_decompose(&r.zero(), &bv("100"), &bv("011"))
            .unwrap();
        assert!(zx.is_zero() && zy.is_zero());
        let (zx, zy) = r
            .ideal_decompose(&bv("100"), &bv("100"), &bv("010"))
            .unwrap();
        assert_eq!((zx, zy), (bv("100"), bv("000")));
        assert!(r
            .ideal_decompose(&bv("100"), &bv("110"), &bv("010"))
            .is_err());
        assert!(r
            .ideal_decompose(&bv("001"), &bv("100"), &bv("010"))
            .is_err());
    }

    #[test]
    fn adjoin_examples() {
        let a = Subring::prime(3);
        let b = a.adjoin(&bv("110"));
        assert_eq!(b.blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(b.adjoin(&bv("001")), b);
        let full = Subring::full(3);
        assert_eq!(full.adjoin(&bv("101")), full);
        assert!(b.contains(&bv("110")) && !b.contains(&bv("100")));
        assert_eq!(a.coarsening_map(&b).unwrap(), vec![0, 0]);
        assert!(b.coarsening_map(&a).is_err());
    }

    #[test]
    fn subring_validation() {
        assert!(Subring::from_blocks(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Subring::from_blocks(3, vec![vec![0, 1]]).is_err());
        assert!(Subring::from_blocks(3, vec![vec![0, 3], vec![1, 2]]).is_err());
        let s = Subring::from_blocks(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(s.blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn connected_sum_dimensions() {
        let poly = ConnectedSumAlgebra::new(0, 1);
        assert_eq!(
            (0..4).map(|d| poly.graded_dim(d)).collect::<Vec<_>>(),
            vec![1, 1, 1, 1]
        );
        let dual = ConnectedSumAlgebra::new(2, 0);
        assert_eq!(
            (0..4).map(|d| dual.graded_dim(d)).collect::<Vec<_>>(),
            vec![1, 2, 0, 0]
        );
        let mixed = ConnectedSumAlgebra::new(1, 3);
        assert_eq!(
            (0..4).map(|d| mixed.graded_dim(d)).collect::<Vec<_>>(),
            vec![1, 4, 3, 3]
        );
    }

    #[test]
    fn graded_multiply_examples() {
        let alg = ConnectedSumAlgebra::new(1, 3);
        let v1 = alg.generator(Generator::V(0));
        let x2 = alg.generator(Generator::J(1));
        assert!(alg.graded_multiply(&v1, &x2).is_zero());
        assert_eq!(alg.graded_multiply(&v1, &x2).degree, 2);

        let b = ConnectedSumAlgebra::new(0, 3);
        let x1 = b.atom_in_degree(0, 1);
        let x1_2 = b.atom_in_degree(0, 2);
        assert_eq!(b.graded_multiply(&x1, &x1_2), b.atom_in_degree(0, 3));
        assert!(b.graded_multiply(&x1, &b.atom_in_degree(1, 1)).is_zero());
        assert_eq!(b.graded_multiply(&b.unit(), &x1), x1);
    }

    #[test]
    fn graded_multiply_is_associative_and_commutative_on_basis_triples() {
        for m in 0..=3 {
            for n in 0..=(5 - m) {
                let alg = ConnectedSumAlgebra::new(m, n);
                let basis: Vec<GradedElement> = (0..=4)
                    .flat_map(|d| (0..alg.graded_dim(d)).map(move |i| (d, i)))
                    .map(|(d, i)| alg.basis_element(d, i))
                    .collect();
                for a in &basis {
                    for b in &basis {
                        assert_eq!(alg.graded_multiply(a, b), alg.graded_multiply(b, a));
                        for c in &basis {
                            let left = alg.graded_multiply(&alg.graded_multiply(a, b), c);
                            let right = alg.graded_multiply(a, &alg.graded_multiply(b, c));
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_action_on_module() {
        // A = {0, 1} inside F_2^3: the single block acts as the identity of B.
        let pair = CoefficientPair::new(1, Subring::prime(3));
        let m = pair.m();
        let unit = BitVector::ones(1);
        let image = pair.act(Generator::J(0), 0, &unit);
        assert_eq!(image.to_string(), "0111");
        let x2 = m.atom_in_degree(1, 1).coeffs;
        assert_eq!(pair.act(Generator::J(0), 1, &x2).to_string(), "010");
        assert!(pair.act(Generator::V(0), 1, &x2).is_zero());
        assert_eq!(pair.act(Generator::V(0), 0, &unit).to_string(), "1000");
    }

    #[test]
    fn generator_names_round_trip() {
        for g in [Generator::V(0), Generator::J(4), Generator::V(11)] {
            assert_eq!(g.to_string().parse::<Generator>().unwrap(), g);
        }
        assert!("y1".parse::<Generator>().is_err());
        assert!("x0".parse::<Generator>().is_err());
    }
}
