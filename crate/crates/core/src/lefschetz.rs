//! Graded Artinian Gorenstein algebras `K[x] / Ann(F)` for multilinear `F`,
//! their Hilbert functions, higher Hessians and the strong Lefschetz check.
//!
//! Every `x_i^2` annihilates a multilinear `F`, so all bases and pairings
//! range over squarefree monomials only.

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graphs::MultiGraph;
use crate::kirchhoff::{all_ones, kirchhoff_polynomial, Monomial, MultilinearPoly};
use crate::linalg::{determinant, ExactMatrix};

/// Candidate order for greedy basis selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum BasisOrder {
    #[default]
    Lex,
    ReverseLex,
}

/// Squarefree degree-`k` monomials in `n` variables, lexicographic on
/// their sorted position lists.
pub fn squarefree_monomials(n: usize, k: usize) -> Vec<Monomial> {
    (0..n)
        .combinations(k)
        .map(Monomial::from_positions)
        .collect()
}

fn pairing(f: &MultilinearPoly, u: Monomial, v: Monomial) -> BigRational {
    if u.is_disjoint(v) {
        BigRational::from_integer(f.coefficient(u.union(v)))
    } else {
        BigRational::zero()
    }
}

fn check_degree(k: usize, max: usize) -> Result<()> {
    if k > max {
        return Err(Error::DegreeOutOfRange { k, max });
    }
    Ok(())
}

/// Pairing matrix between degree-`k` and degree-`(s - k)` squarefree
/// monomials: entry `(u, v)` is the constant `u(∂) v(∂) F`.
pub fn catalecticant(f: &MultilinearPoly, k: usize) -> Result<ExactMatrix> {
    let s = f.homogeneous_degree()?;
    check_degree(k, s)?;
    let n = f.variable_count();
    let rows = squarefree_monomials(n, k);
    let cols = squarefree_monomials(n, s - k);
    Ok(ExactMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        pairing(f, rows[i], cols[j])
    }))
}

/// Incremental row echelon form used to pick independent rows greedily.
struct Echelon {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Echelon {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<BigRational>) -> bool {
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone() / &row[*pivot];
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &factor * y;
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

/// `A = K[x] / Ann(F)` with a chosen monomial basis `Λ_k` of each `A_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebraModel {
    f: MultilinearPoly,
    s: usize,
    hilbert: Vec<usize>,
    bases: Vec<Vec<Monomial>>,
    order: BasisOrder,
}

impl GradedAlgebraModel {
    pub fn polynomial(&self) -> &MultilinearPoly {
        &self.f
    }

    /// Socle degree, equal to `deg F`.
    pub fn socle_degree(&self) -> usize {
        self.s
    }

    pub fn hilbert(&self) -> &[usize] {
        &self.hilbert
    }

    pub fn basis(&self, k: usize) -> &[Monomial] {
        &self.bases[k]
    }

    pub fn order(&self) -> BasisOrder {
        self.order
    }

    /// Whether `Λ_1` consists of every variable.
    pub fn linear_basis_is_all_variables(&self) -> bool {
        self.s == 0 || self.bases[1].len() == self.f.variable_count()
    }
}

pub fn hilbert_and_bases(f: &MultilinearPoly) -> Result<GradedAlgebraModel> {
    hilbert_and_bases_with(f, BasisOrder::Lex)
}

/// Hilbert function from catalecticant ranks, with `Λ_k` the first
/// independent rows of the degree-`k` catalecticant in the given order.
pub fn hilbert_and_bases_with(
    f: &MultilinearPoly,
    order: BasisOrder,
) -> Result<GradedAlgebraModel> {
    let s = f.homogeneous_degree()?;
    let n = f.variable_count();
    let mut bases = Vec::with_capacity(s + 1);
    for k in 0..=s {
        let mut candidates = squarefree_monomials(n, k);
        if order == BasisOrder::ReverseLex {
            candidates.reverse();
        }
        let cols = squarefree_monomials(n, s - k);
        let mut echelon = Echelon::new();
        let basis: Vec<Monomial> = candidates
            .into_iter()
            .filter(|&u| echelon.insert(cols.iter().map(|&v| pairing(f, u, v)).collect()))
            .collect();
        bases.push(basis);
    }
    let hilbert: Vec<usize> = bases.iter().map(Vec::len).collect();
    assert!(
        (0..=s).all(|k| hilbert[k] == hilbert[s - k]),
        "Hilbert function {hilbert:?} is not symmetric"
    );
    debug_assert_eq!((hilbert[0], hilbert[s]), (1, 1));
    Ok(GradedAlgebraModel {
        f: f.clone(),
        s,
        hilbert,
        bases,
        order,
    })
}

/// `H^{(k)} = (u(∂) v(∂) F)(point)` over `u, v ∈ Λ_k`.
pub fn kth_hessian_at(
    model: &GradedAlgebraModel,
    k: usize,
    point: &[BigRational],
) -> Result<ExactMatrix> {
    check_degree(k, model.s / 2)?;
    let f = &model.f;
    if point.len() != f.variable_count() {
        return Err(Error::DimensionMismatch {
            expected: f.variable_count(),
            found: point.len(),
        });
    }
    let basis = &model.bases[k];
    let size = basis.len();
    let mut entries = vec![BigRational::zero(); size * size];
    for i in 0..size {
        for j in i..size {
            let (u, v) = (basis[i], basis[j]);
            if u.is_disjoint(v) {
                let val = f.derivative_at_unchecked(u.union(v), point);
                entries[i * size + j] = val.clone();
                entries[j * size + i] = val;
            }
        }
    }
    ExactMatrix::new(size, size, entries)?.into_symmetric()
}

/// Determinant of `H^{(k)}` at the Lefschetz point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeRecord {
    pub k: usize,
    pub dim: usize,
    /// `s - 2k`, the power of `L` whose bijectivity this degree decides.
    pub power: usize,
    pub det: BigRational,
    pub nonzero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlpReport {
    pub s: usize,
    pub hilbert: Vec<usize>,
    pub point: Vec<BigRational>,
    pub per_k: Vec<DegreeRecord>,
    /// `false` when `Λ_1` had to drop dependent variables.
    pub lambda1_all_variables: bool,
    pub verdict: bool,
}

/// Strong Lefschetz check for `L = Σ a_i x_i` on `K[x] / Ann(F)`:
/// `det H^{(k)}(a) != 0` for every `k <= s / 2`.
pub fn slp_check_poly(
    f: &MultilinearPoly,
    point: &[BigRational],
    order: BasisOrder,
) -> Result<SlpReport> {
    let model = hilbert_and_bases_with(f, order)?;
    let per_k = (0..=model.s / 2)
        .map(|k| {
            let det = determinant(&kth_hessian_at(&model, k, point)?)?;
            Ok(DegreeRecord {
                k,
                dim: model.hilbert[k],
                power: model.s - 2 * k,
                nonzero: !det.is_zero(),
                det,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SlpReport {
        s: model.s,
        hilbert: model.hilbert.clone(),
        point: point.to_vec(),
        verdict: per_k.iter().all(|r| r.nonzero),
        lambda1_all_variables: model.linear_basis_is_all_variables(),
        per_k,
    })
}

/// Strong Lefschetz check on the Kirchhoff polynomial of `g`, with
/// `L = x_1 + ... + x_N` unless coefficients are given.
pub fn slp_check(g: &MultiGraph, coefficients: Option<&[BigRational]>) -> Result<SlpReport> {
    let f = kirchhoff_polynomial(g)?;
    let point = match coefficients {
        Some(c) => c.to_vec(),
        None => all_ones(f.variable_count()),
    };
    if point.len() != f.variable_count() {
        return Err(Error::DimensionMismatch {
            expected: f.variable_count(),
            found: point.len(),
        });
    }
    slp_check_poly(&f, &point, BasisOrder::Lex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_graph, random_connected_graph, GraphSpec};
    use crate::kirchhoff::{apply_operator, hessian_at, DiffOperator};
    use crate::linalg::{int, rank, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn kirchhoff(spec: GraphSpec) -> MultilinearPoly {
        kirchhoff_polynomial(&build_graph(&spec).unwrap()).unwrap()
    }

    #[test]
    fn catalecticant_examples() {
        let f = kirchhoff(GraphSpec::Complete(3));
        let c = catalecticant(&f, 1).unwrap();
        assert_eq!(
            c,
            ExactMatrix::from_int_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        );
        assert_eq!(rank(&c), 3);
        let c0 = catalecticant(&f, 0).unwrap();
        assert_eq!((c0.rows(), rank(&c0)), (1, 1));
        assert_eq!(
            rank(&catalecticant(&kirchhoff(GraphSpec::Complete(4)), 1).unwrap()),
            6
        );
        assert_eq!(
            catalecticant(&f, 3),
            Err(Error::DegreeOutOfRange { k: 3, max: 2 })
        );
        let zero = MultilinearPoly::zero(vec![0, 1]).unwrap();
        assert_eq!(catalecticant(&zero, 0), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(
            hilbert_and_bases(&kirchhoff(GraphSpec::Complete(3)))
                .unwrap()
                .hilbert(),
            &[1, 3, 1]
        );
        assert_eq!(
            hilbert_and_bases(&kirchhoff(GraphSpec::Complete(4)))
                .unwrap()
                .hilbert(),
            &[1, 6, 6, 1]
        );
        let mono = MultilinearPoly::parse("1: e0 e1", vec![0, 1]).unwrap();
        assert_eq!(hilbert_and_bases(&mono).unwrap().hilbert(), &[1, 2, 1]);
        let model = hilbert_and_bases(&kirchhoff(GraphSpec::Complete(5))).unwrap();
        assert_eq!(model.socle_degree(), 4);
        let h = model.hilbert();
        assert_eq!((h[0], h[1], h[3], h[4]), (1, 10, 10, 1));
    }

    #[test]
    fn dependent_variables_shrink_linear_basis() {
        // parallel edges give identical partial derivatives
        let g = MultiGraph::from_pairs(2, vec![(0, 1), (0, 1)]).unwrap();
        let model = hilbert_and_bases(&kirchhoff_polynomial(&g).unwrap()).unwrap();
        assert_eq!(model.hilbert(), &[1, 1]);
        assert!(!model.linear_basis_is_all_variables());
        assert_eq!(model.basis(1), &[Monomial::from_positions([0])]);
        let rev = hilbert_and_bases_with(model.polynomial(), BasisOrder::ReverseLex).unwrap();
        assert_eq!(rev.basis(1), &[Monomial::from_positions([1])]);
    }

    #[test]
    fn kth_hessian_examples() {
        let f3 = kirchhoff(GraphSpec::Complete(3));
        let m3 = hilbert_and_bases(&f3).unwrap();
        let h = kth_hessian_at(&m3, 1, &all_ones(3)).unwrap();
        assert_eq!(
            h,
            ExactMatrix::from_int_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        );
        assert_eq!(determinant(&h).unwrap(), int(2));

        let m4 = hilbert_and_bases(&kirchhoff(GraphSpec::Complete(4))).unwrap();
        assert_eq!(
            kth_hessian_at(&m4, 0, &all_ones(6)).unwrap(),
            ExactMatrix::from_int_rows(&[[16]])
        );
        assert_eq!(
            kth_hessian_at(&m4, 2, &all_ones(6)),
            Err(Error::DegreeOutOfRange { k: 2, max: 1 })
        );
        assert!(matches!(
            kth_hessian_at(&m4, 1, &all_ones(5)),
            Err(Error::DimensionMismatch { .. })
        ));

        let m23 = hilbert_and_bases(&kirchhoff(GraphSpec::CompleteBipartite(2, 3))).unwrap();
        let h2 = kth_hessian_at(&m23, 2, &all_ones(6)).unwrap();
        assert_eq!(h2.rows(), m23.hilbert()[2]);
        assert!(!determinant(&h2).unwrap().is_zero());
    }

    #[test]
    fn slp_examples() {
        let r = slp_check(&build_graph(&GraphSpec::Complete(4)).unwrap(), None).unwrap();
        assert!(r.verdict);
        assert_eq!(r.per_k[0].det, int(16));
        assert_eq!(r.per_k[1].det, int(-4096));
        assert!(r.lambda1_all_variables);
        let r = slp_check(
            &build_graph(&GraphSpec::CompleteBipartite(2, 3)).unwrap(),
            None,
        )
        .unwrap();
        assert!(r.verdict);
        assert_eq!(r.per_k.len(), 3);
        assert_eq!(r.per_k[2].power, 0);
    }

    #[test]
    fn slp_complete_five() {
        let r = slp_check(&build_graph(&GraphSpec::Complete(5)).unwrap(), None).unwrap();
        assert!(r.verdict);
        assert_eq!(r.per_k.len(), 3);
        assert_eq!(r.per_k[1].det, int(-5_859_375_000_000));
    }

    #[test]
    fn slp_detects_degenerate_points() {
        // at the origin every H^{(k)} with s - 2k > 0 vanishes
        let g = build_graph(&GraphSpec::Complete(4)).unwrap();
        let r = slp_check(&g, Some(&vec![int(0); 6])).unwrap();
        assert!(!r.verdict);
        assert!(!r.per_k[0].nonzero);
        assert!(slp_check(&g, Some(&[int(1)])).is_err());
        let disconnected = MultiGraph::from_pairs(3, vec![(0, 1)]).unwrap();
        assert_eq!(slp_check(&disconnected, None), Err(Error::Disconnected));
    }

    fn arb_graph() -> impl Strategy<Value = MultiGraph> {
        (any::<u64>(), 2usize..=5, 0usize..=3).prop_map(|(seed, v, extra)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_connected_graph(&mut rng, v, v - 1 + extra)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn nonvanishing_is_basis_independent(
            g in arb_graph(),
            nums in proptest::collection::vec((-3i64..=3, 1i64..=2), 8),
        ) {
            let f = kirchhoff_polynomial(&g).unwrap();
            let point: Vec<BigRational> =
                nums.iter().cycle().take(g.edge_count()).map(|&(a, b)| ratio(a, b)).collect();
            let lex = slp_check_poly(&f, &point, BasisOrder::Lex).unwrap();
            let rev = slp_check_poly(&f, &point, BasisOrder::ReverseLex).unwrap();
            prop_assert_eq!(&lex.hilbert, &rev.hilbert);
            let flags = |r: &SlpReport| r.per_k.iter().map(|d| d.nonzero).collect::<Vec<_>>();
            prop_assert_eq!(flags(&lex), flags(&rev));
        }

        #[test]
        fn hilbert_is_symmetric_and_matches_ranks(g in arb_graph()) {
            let f = kirchhoff_polynomial(&g).unwrap();
            let model = hilbert_and_bases(&f).unwrap();
            let s = model.socle_degree();
            prop_assert_eq!(s, g.vertex_count() - 1);
            for k in 0..=s {
                prop_assert_eq!(model.hilbert()[k], model.hilbert()[s - k]);
                prop_assert_eq!(model.hilbert()[k], rank(&catalecticant(&f, k).unwrap()));
            }
        }

        #[test]
        fn squares_annihilate(g in arb_graph()) {
            let f = kirchhoff_polynomial(&g).unwrap();
            let n = f.variable_count();
            for i in 0..n {
                let mut e = vec![0; n];
                e[i] = 2;
                prop_assert!(apply_operator(&f, &DiffOperator::new(e)).unwrap().is_zero());
            }
        }

        #[test]
        fn first_hessian_matches_graph_hessian(g in arb_graph()) {
            let f = kirchhoff_polynomial(&g).unwrap();
            let model = hilbert_and_bases(&f).unwrap();
            prop_assume!(model.socle_degree() >= 2);
            let ones = all_ones(f.variable_count());
            let positions: Vec<usize> = model.basis(1).iter().map(|m| m.positions().next().unwrap()).collect();
            let full = hessian_at(&f, &ones).unwrap();
            prop_assert_eq!(kth_hessian_at(&model, 1, &ones).unwrap(), full.submatrix(&positions, &positions));
            let full_rank = rank(&catalecticant(&f, 1).unwrap()) == f.variable_count();
            prop_assert_eq!(model.linear_basis_is_all_variables(), full_rank);
        }
    }
}
