use koszulhh::coboundary::{head_tail, head_tail_law, solve_coboundary, Refinement};
use koszulhh::hochschild::KoszulCochains;
use koszulhh::{
    admissible_sequences, AdmissibleSequence, BitMatrix, BitVector, BooleanRing, Caps,
    CoefficientPair, ConnectedSumAlgebra, Subring,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(
            move |rows| {
                BitMatrix::from_rows(c, rows.iter().map(|b| BitVector::from_bools(b)).collect())
            },
        )
    })
}

fn bits(n: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), n).prop_map(|b| BitVector::from_bools(&b))
}

/// Every vector of length `n`, for brute force.
fn all_vectors(n: usize) -> impl Iterator<Item = BitVector> {
    (0u32..1 << n).map(move |m| BitVector::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
}

proptest! {
    #[test]
    fn rank_nullity(m in matrix(12, 70)) {
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_zero());
        }
        prop_assert_eq!(BitMatrix::from_rows(m.cols(), kernel).rank(), m.cols() - m.rank());
        prop_assert_eq!(m.transpose().rank(), m.rank());
    }

    #[test]
    fn solve_agrees_with_brute_force(m in matrix(6, 8), b in bits(6)) {
        let b = b.slice(0, m.rows());
        let brute = all_vectors(m.cols()).find(|x| m.mul_vec(x) == b);
        match m.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(m.mul_vec(&x), b),
            None => prop_assert!(brute.is_none()),
        }
    }

    #[test]
    fn rank_of_product_is_bounded(a in matrix(9, 9), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inv = koszulhh::massey::random_invertible(a.cols(), &mut rng);
        prop_assert_eq!(a.mul(&inv).rank(), a.rank());
        let back = koszulhh::massey::inverse(&inv).unwrap();
        prop_assert_eq!(inv.mul(&back), BitMatrix::identity(a.cols()));
    }

    #[test]
    fn ideal_decomposition(n in 1usize..7, x in bits(7), y in bits(7), z in bits(7)) {
        let ring = BooleanRing::new(n).unwrap();
        let (x, y, z) = (x.slice(0, n), y.slice(0, n), z.slice(0, n));
        // Make x and y orthogonal.
        let y = ring.add(&y, &ring.mul(&x, &y));
        let member = ring.ideal_membership(&z, &x, &y);
        let brute = ring.elements().any(|a| ring.elements().any(|b| ring.add(&ring.mul(&a, &x), &ring.mul(&b, &y)) == z));
        prop_assert_eq!(member, brute);
        if member {
            let (zx, zy) = ring.ideal_decompose(&z, &x, &y).unwrap();
            prop_assert_eq!(ring.add(&zx, &zy), z);
            prop_assert_eq!(ring.mul(&zx, &x), zx);
            prop_assert_eq!(ring.mul(&zy, &y), zy);
        }
    }

    #[test]
    fn translations_are_inverse(m in 0usize..3, n in 0usize..4, k in 0usize..6) {
        let alg = ConnectedSumAlgebra::new(m, n);
        let basis = admissible_sequences(&alg, k, &Caps::default()).unwrap();
        for t in basis.sequences() {
            let r = t.right_translate(&alg);
            prop_assert!(r.is_admissible(&alg) || !t.is_admissible(&alg));
            prop_assert_eq!(&r.left_translate(&alg), t);
            prop_assert_eq!(&t.left_translate(&alg).right_translate(&alg), t);
        }
    }

    #[test]
    fn section_is_a_bijection_onto_x_admissible(v in 0usize..2, n in 1usize..5, x in bits(4), k in 1usize..5, seed in any::<u64>()) {
        let x = x.slice(0, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_partition(n, &mut rng);
        let r = Refinement::new(&a, &x).unwrap();
        let coarse = ConnectedSumAlgebra::new(v, r.coarse.atom_count());
        let fine = ConnectedSumAlgebra::new(v, r.fine.atom_count());
        let caps = Caps::default();
        let coarse_seqs = admissible_sequences(&coarse, k, &caps).unwrap();
        let fine_seqs = admissible_sequences(&fine, k, &caps).unwrap();
        let x_adm: Vec<&AdmissibleSequence> = fine_seqs.sequences().iter().filter(|t| r.is_x_admissible(v, t)).collect();
        prop_assert_eq!(x_adm.len(), coarse_seqs.len());
        for t in coarse_seqs.sequences() {
            let s = r.section_seq(v, t);
            prop_assert!(s.is_admissible(&fine));
            prop_assert_eq!(&r.a_star_seq(v, &s), t);
        }
    }

    #[test]
    fn solver_inverts_coboundaries(m in 0usize..3, n in 1usize..4, k in 2usize..4, j in 2i64..4, seed in any::<u64>()) {
        let c = KoszulCochains::new(CoefficientPair::diagonal(m, n), k + 1, &Caps::default()).unwrap();
        let s = j - k as i64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = c.random_cochain(k - 1, s, &mut rng);
        let f = c.differential(&h).unwrap();
        let g = solve_coboundary(&c, &f).unwrap();
        prop_assert_eq!(c.differential(&g).unwrap(), f.clone());
        let ht = head_tail(&c, &f).unwrap();
        prop_assert_eq!(head_tail_law(c.basis(k), &ht), None);
    }

    #[test]
    fn differential_squares_to_zero(m in 0usize..3, n in 0usize..4, k in 0usize..4, s in -3i64..2, seed in any::<u64>()) {
        let c = KoszulCochains::new(CoefficientPair::diagonal(m, n), k + 2, &Caps::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = c.random_cochain(k, s, &mut rng);
        prop_assert!(c.differential(&c.differential(&f).unwrap()).unwrap().is_zero());
    }
}

fn random_partition(n: usize, rng: &mut ChaCha8Rng) -> Subring {
    use rand::Rng;
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (atom, l) in labels.iter().enumerate() {
        match seen.iter().position(|s| s == l) {
            Some(b) => blocks[b].push(atom),
            None => {
                seen.push(*l);
                blocks.push(vec![atom]);
            }
        }
    }
    Subring::from_blocks(n, blocks).unwrap()
}
