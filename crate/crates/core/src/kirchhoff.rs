//! Multilinear polynomials over edge variables, the Kirchhoff polynomial
//! of a graph and its Hessian.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graphs::{
    enumerate_spanning_trees_capped, trees_containing, EdgeId, MultiGraph, DEFAULT_EDGE_CAP,
};
use crate::linalg::ExactMatrix;

/// Largest supported variable universe.
pub const MAX_VARIABLES: usize = 64;

/// Squarefree monomial as a bitset over universe positions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    pub fn from_positions(positions: impl IntoIterator<Item = usize>) -> Self {
        Self(positions.into_iter().fold(0, |acc, p| acc | (1u64 << p)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, pos: usize) -> bool {
        self.0 >> pos & 1 == 1
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.0 & other.0 == self.0
    }

    pub fn is_disjoint(self, other: Monomial) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Monomial) -> Monomial {
        Monomial(self.0 | other.0)
    }

    pub fn without(self, other: Monomial) -> Monomial {
        Monomial(self.0 & !other.0)
    }

    pub fn positions(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |p| bits >> p & 1 == 1)
    }
}

/// Integer polynomial whose terms are squarefree monomials in variables
/// indexed by an ordered universe of edge ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultilinearPoly {
    universe: Vec<EdgeId>,
    /// No zero coefficients.
    terms: BTreeMap<Monomial, BigInt>,
}

impl MultilinearPoly {
    pub fn zero(universe: Vec<EdgeId>) -> Result<Self> {
        if universe.len() > MAX_VARIABLES {
            return Err(Error::UniverseTooLarge(universe.len()));
        }
        Ok(Self {
            universe,
            terms: BTreeMap::new(),
        })
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    pub fn from_terms(
        universe: Vec<EdgeId>,
        terms: impl IntoIterator<Item = (Monomial, BigInt)>,
    ) -> Result<Self> {
        let mut p = Self::zero(universe)?;
        let mask = p.universe_mask();
        for (m, c) in terms {
            if !m.divides(Monomial(mask)) {
                return Err(Error::InvalidParameter(format!(
                    "monomial {:#x} outside a universe of {} variables",
                    m.bits(),
                    p.universe.len()
                )));
            }
            *p.terms.entry(m).or_insert_with(BigInt::zero) += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        Ok(p)
    }

    pub fn universe(&self) -> &[EdgeId] {
        &self.universe
    }

    pub fn variable_count(&self) -> usize {
        self.universe.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<usize> {
        let mut degrees = self.terms.keys().map(|m| m.degree());
        let first = degrees.next().ok_or(Error::ZeroPolynomial)?;
        if degrees.all(|d| d == first) {
            Ok(first)
        } else {
            Err(Error::NotHomogeneous)
        }
    }

    fn universe_mask(&self) -> u64 {
        match self.universe.len() {
            64 => u64::MAX,
            n => (1u64 << n) - 1,
        }
    }

    fn check_point(&self, point: &[BigRational]) -> Result<()> {
        if point.len() != self.universe.len() {
            return Err(Error::DimensionMismatch {
                expected: self.universe.len(),
                found: point.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        self.check_point(point)?;
        Ok(self.eval_unchecked(point))
    }

    fn eval_unchecked(&self, point: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (m, c)| {
            acc + monomial_value(*m, point) * BigRational::from_integer(c.clone())
        })
    }

    /// `(d/dx)^support F` evaluated at `point`: sum over terms divisible by
    /// `support` of the coefficient times the remaining variables.
    pub fn derivative_at(&self, support: Monomial, point: &[BigRational]) -> Result<BigRational> {
        self.check_point(point)?;
        Ok(self.derivative_at_unchecked(support, point))
    }

    pub(crate) fn derivative_at_unchecked(
        &self,
        support: Monomial,
        point: &[BigRational],
    ) -> BigRational {
        self.terms
            .iter()
            .filter(|(m, _)| support.divides(**m))
            .fold(BigRational::zero(), |acc, (m, c)| {
                acc + monomial_value(m.without(support), point)
                    * BigRational::from_integer(c.clone())
            })
    }

    /// Text form: one `coeff: e<id> e<id> ...` line per term, in bitset order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            let _ = write!(out, "{c}:");
            for p in m.positions() {
                let _ = write!(out, " e{}", self.universe[p]);
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`MultilinearPoly::dump`] for a given universe.
    pub fn parse(text: &str, universe: Vec<EdgeId>) -> Result<Self> {
        let mut p = Self::zero(universe)?;
        let position: BTreeMap<EdgeId, usize> = p
            .universe
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i))
            .collect();
        if position.len() != p.universe.len() {
            return Err(Error::InvalidParameter(
                "universe has repeated edge ids".into(),
            ));
        }
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let (coeff, vars) = line
                .split_once(':')
                .ok_or_else(|| err("expected `coeff: e<id> ...`".into()))?;
            let coeff: BigInt = coeff
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid coefficient `{}`", coeff.trim())))?;
            let mut m = Monomial::ONE;
            for tok in vars.split_whitespace() {
                let id: EdgeId = tok
                    .strip_prefix('e')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err(format!("invalid variable `{tok}`")))?;
                let &pos = position
                    .get(&id)
                    .ok_or_else(|| err(format!("edge e{id} not in universe")))?;
                if m.contains(pos) {
                    return Err(err(format!("variable e{id} repeated")));
                }
                m = m.union(Monomial::from_positions([pos]));
            }
            if p.terms.contains_key(&m) {
                return Err(err("duplicate monomial".into()));
            }
            if !coeff.is_zero() {
                p.terms.insert(m, coeff);
            }
        }
        Ok(p)
    }
}

fn monomial_value(m: Monomial, point: &[BigRational]) -> BigRational {
    m.positions()
        .fold(BigRational::one(), |acc, p| acc * &point[p])
}

/// Differential operator `prod (d/dx_i)^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    exponents: Vec<u32>,
}

impl DiffOperator {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    /// `prod_{i in positions} d/dx_i` over a universe of `len` variables.
    pub fn squarefree(len: usize, positions: &[usize]) -> Self {
        let mut exponents = vec![0; len];
        for &p in positions {
            exponents[p] += 1;
        }
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// The support as a monomial, or `None` if some exponent is at least 2.
    pub fn squarefree_support(&self) -> Option<Monomial> {
        self.exponents
            .iter()
            .enumerate()
            .try_fold(Monomial::ONE, |m, (i, &e)| match e {
                0 => Some(m),
                1 => Some(m.union(Monomial::from_positions([i]))),
                _ => None,
            })
    }
}

/// Exact iterated partial differentiation of a multilinear polynomial.
/// Any exponent of 2 or more annihilates it.
pub fn apply_operator(p: &MultilinearPoly, op: &DiffOperator) -> Result<MultilinearPoly> {
    if op.exponents.len() != p.universe.len() {
        return Err(Error::UniverseMismatch);
    }
    let Some(support) = op.squarefree_support() else {
        return MultilinearPoly::zero(p.universe.clone());
    };
    let terms = p
        .terms
        .iter()
        .filter(|(m, _)| support.divides(**m))
        .map(|(m, c)| (m.without(support), c.clone()))
        .collect();
    Ok(MultilinearPoly {
        universe: p.universe.clone(),
        terms,
    })
}

/// `F = sum over spanning trees T of prod_{e in T} x_e`, with the graph's
/// edge ids (in id order) as the variable universe.
pub fn kirchhoff_polynomial(g: &MultiGraph) -> Result<MultilinearPoly> {
    kirchhoff_polynomial_capped(g, DEFAULT_EDGE_CAP)
}

pub fn kirchhoff_polynomial_capped(g: &MultiGraph, cap: usize) -> Result<MultilinearPoly> {
    let universe = g.edge_ids();
    if universe.len() > MAX_VARIABLES {
        return Err(Error::UniverseTooLarge(universe.len()));
    }
    let trees = enumerate_spanning_trees_capped(g, cap)?;
    let terms = trees.into_iter().map(|t| {
        let m = Monomial::from_positions(t.iter().map(|id| g.edge_index(*id).expect("tree edge")));
        (m, BigInt::one())
    });
    MultilinearPoly::from_terms(universe, terms)
}

/// Hessian `(d_i d_j p)(point)`. The diagonal vanishes for multilinear `p`.
pub fn hessian_at(p: &MultilinearPoly, point: &[BigRational]) -> Result<ExactMatrix> {
    p.check_point(point)?;
    let n = p.universe.len();
    let mut entries = vec![BigRational::zero(); n * n];
    for (m, c) in &p.terms {
        let c = BigRational::from_integer(c.clone());
        let pos: Vec<usize> = m.positions().collect();
        for (a, &i) in pos.iter().enumerate() {
            for &j in &pos[a + 1..] {
                let rest = m.without(Monomial::from_positions([i, j]));
                let v = monomial_value(rest, point) * &c;
                entries[i * n + j] += &v;
                entries[j * n + i] += v;
            }
        }
    }
    ExactMatrix::new(n, n, entries)?.into_symmetric()
}

/// The Hessian at the all-ones point, computed without enumerating trees:
/// entry `(i, j)` is the number of spanning trees containing edges `i`
/// and `j`, read off the contraction `G / {i, j}`. Pairs of parallel
/// edges lie in no tree and give 0.
pub fn hessian_at_ones(g: &MultiGraph) -> Result<ExactMatrix> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let ids = g.edge_ids();
    let n = ids.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let counts: Vec<BigInt> = pairs
        .par_iter()
        .map(|&(i, j)| match trees_containing(g, &[ids[i], ids[j]]) {
            Ok(c) => c,
            Err(Error::CyclicEdgeSet) => BigInt::zero(),
            Err(e) => unreachable!("edge ids come from the graph: {e}"),
        })
        .collect();
    let mut entries = vec![BigRational::zero(); n * n];
    for (&(i, j), c) in pairs.iter().zip(counts) {
        let v = BigRational::from_integer(c);
        entries[i * n + j] = v.clone();
        entries[j * n + i] = v;
    }
    ExactMatrix::new(n, n, entries)?.into_symmetric()
}

pub fn all_ones(n: usize) -> Vec<BigRational> {
    vec![BigRational::one(); n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_graph, random_connected_graph, tree_count_cofactor, GraphSpec};
    use crate::linalg::{int, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(spec: GraphSpec) -> MultiGraph {
        build_graph(&spec).unwrap()
    }

    fn k3_poly() -> MultilinearPoly {
        kirchhoff_polynomial(&graph(GraphSpec::Complete(3))).unwrap()
    }

    #[test]
    fn kirchhoff_examples() {
        let f = k3_poly();
        assert_eq!(f.dump(), "1: e0 e1\n1: e0 e2\n1: e1 e2\n");
        let f23 = kirchhoff_polynomial(&graph(GraphSpec::CompleteBipartite(2, 3))).unwrap();
        assert_eq!(f23.term_count(), 12);
        assert_eq!(f23.homogeneous_degree().unwrap(), 4);
        let path = MultiGraph::from_pairs(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(kirchhoff_polynomial(&path).unwrap().dump(), "1: e0 e1\n");
    }

    #[test]
    fn kirchhoff_errors() {
        let disconnected = MultiGraph::from_pairs(3, vec![(0, 1)]).unwrap();
        assert_eq!(
            kirchhoff_polynomial(&disconnected),
            Err(Error::Disconnected)
        );
        assert!(matches!(
            kirchhoff_polynomial(&graph(GraphSpec::Complete(8))),
            Err(Error::EdgeCapExceeded { .. })
        ));
    }

    #[test]
    fn operator_examples() {
        let f = k3_poly();
        let d0 = apply_operator(&f, &DiffOperator::new(vec![1, 0, 0])).unwrap();
        assert_eq!(d0.dump(), "1: e1\n1: e2\n");
        let d01 = apply_operator(&f, &DiffOperator::new(vec![1, 1, 0])).unwrap();
        assert_eq!(d01.dump(), "1:\n");
        let d00 = apply_operator(&f, &DiffOperator::new(vec![2, 0, 0])).unwrap();
        assert!(d00.is_zero());
        assert_eq!(
            apply_operator(&f, &DiffOperator::new(vec![1, 0])),
            Err(Error::UniverseMismatch)
        );
    }

    #[test]
    fn hessian_examples() {
        let f = k3_poly();
        let h = hessian_at(&f, &all_ones(3)).unwrap();
        assert_eq!(
            h,
            ExactMatrix::from_int_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        );

        let k4 = graph(GraphSpec::Complete(4));
        let h4 = hessian_at(&kirchhoff_polynomial(&k4).unwrap(), &all_ones(6)).unwrap();
        for a in k4.edges() {
            for b in k4.edges() {
                let expected = if a.id == b.id {
                    0
                } else if a.shares_vertex(b) {
                    3
                } else {
                    4
                };
                assert_eq!(h4.get(a.id, b.id), &int(expected));
            }
        }
        assert_eq!(
            hessian_at(&f, &all_ones(2)),
            Err(Error::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn bipartite_hessian_entries() {
        // X = {0, 1}, Y = {2, 3, 4}
        let g = graph(GraphSpec::CompleteBipartite(2, 3));
        let h = hessian_at(&kirchhoff_polynomial(&g).unwrap(), &all_ones(6)).unwrap();
        for a in g.edges() {
            for b in g.edges() {
                let expected = if a.id == b.id {
                    0
                } else if a.u == b.u {
                    5
                } else if a.v == b.v {
                    4
                } else {
                    5
                };
                assert_eq!(h.get(a.id, b.id), &int(expected), "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn contraction_route_matches_polynomial_route() {
        for spec in [
            GraphSpec::Complete(4),
            GraphSpec::Complete(5),
            GraphSpec::CompleteBipartite(2, 3),
            GraphSpec::EdgeList {
                vertex_count: 3,
                pairs: vec![(0, 1), (0, 1), (1, 2), (0, 2)],
            },
        ] {
            let g = graph(spec);
            let f = kirchhoff_polynomial(&g).unwrap();
            let ones = all_ones(g.edge_count());
            assert_eq!(hessian_at(&f, &ones).unwrap(), hessian_at_ones(&g).unwrap());
        }
    }

    #[test]
    fn dump_parse_round_trip_and_errors() {
        let f = kirchhoff_polynomial(&graph(GraphSpec::CompleteBipartite(2, 2))).unwrap();
        let text = f.dump();
        assert_eq!(
            MultilinearPoly::parse(&text, f.universe().to_vec()).unwrap(),
            f
        );
        let u = vec![0, 1, 2];
        assert!(MultilinearPoly::parse("1 e0", u.clone()).is_err());
        assert!(MultilinearPoly::parse("x: e0", u.clone()).is_err());
        assert!(MultilinearPoly::parse("1: e7", u.clone()).is_err());
        assert!(MultilinearPoly::parse("1: e0 e0", u.clone()).is_err());
        assert!(MultilinearPoly::parse("1: e0\n2: e0", u.clone()).is_err());
        assert!(MultilinearPoly::parse("1: q0", u).is_err());
        assert_eq!(
            MultilinearPoly::zero((0..65).collect()),
            Err(Error::UniverseTooLarge(65))
        );
    }

    fn arb_graph() -> impl Strategy<Value = MultiGraph> {
        (any::<u64>(), 2usize..=6, 0usize..=5).prop_map(|(seed, v, extra)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_connected_graph(&mut rng, v, v - 1 + extra)
        })
    }

    proptest! {
        #[test]
        fn hessian_counts_trees_through_pairs(g in arb_graph()) {
            let f = kirchhoff_polynomial(&g).unwrap();
            prop_assert_eq!(
                f.eval(&all_ones(g.edge_count())).unwrap(),
                BigRational::from_integer(tree_count_cofactor(&g))
            );
            prop_assert_eq!(
                hessian_at(&f, &all_ones(g.edge_count())).unwrap(),
                hessian_at_ones(&g).unwrap()
            );
        }

        #[test]
        fn euler_identity(g in arb_graph(), nums in proptest::collection::vec((-6i64..=6, 1i64..=4), 11)) {
            let f = kirchhoff_polynomial(&g).unwrap();
            let n = g.edge_count();
            let point: Vec<BigRational> = nums.iter().cycle().take(n).map(|&(a, b)| ratio(a, b)).collect();
            let lhs = (0..n).fold(BigRational::zero(), |acc, i| {
                acc + &point[i] * f.derivative_at(Monomial::from_positions([i]), &point).unwrap()
            });
            let deg = BigRational::from_integer(BigInt::from(g.vertex_count() - 1));
            prop_assert_eq!(lhs, deg * f.eval(&point).unwrap());
            let h = hessian_at(&f, &point).unwrap();
            prop_assert!(h.is_symmetric());
            prop_assert!((0..n).all(|i| h.get(i, i).is_zero()));
        }
    }
}
