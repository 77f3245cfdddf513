use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{char_poly, rank, sign, ExactMatrix, Polynomial};
use crate::error::{Error, Result};

/// Multiset of exact eigenvalues.
///
/// Canonical form: equal values merged, zero multiplicities dropped, sorted
/// by decreasing value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Spectrum {
    pairs: Vec<(BigRational, usize)>,
}

impl Spectrum {
    pub fn new(pairs: impl IntoIterator<Item = (BigRational, usize)>) -> Self {
        let mut merged: Vec<(BigRational, usize)> = Vec::new();
        for (value, mult) in pairs {
            if mult == 0 {
                continue;
            }
            match merged.iter_mut().find(|(v, _)| *v == value) {
                Some((_, m)) => *m += mult,
                None => merged.push((value, mult)),
            }
        }
        merged.sort_by(|a, b| b.0.cmp(&a.0));
        Self { pairs: merged }
    }

    pub fn pairs(&self) -> &[(BigRational, usize)] {
        &self.pairs
    }

    /// Sum of multiplicities.
    pub fn dimension(&self) -> usize {
        self.pairs.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity(&self, value: &BigRational) -> usize {
        self.pairs
            .iter()
            .find(|(v, _)| v == value)
            .map_or(0, |(_, m)| *m)
    }

    /// Product of eigenvalues with multiplicity.
    pub fn product(&self) -> BigRational {
        self.pairs.iter().fold(BigRational::one(), |acc, (v, m)| {
            (0..*m).fold(acc, |acc, _| acc * v)
        })
    }

    pub fn trace(&self) -> BigRational {
        self.pairs.iter().fold(BigRational::zero(), |acc, (v, m)| {
            acc + v * BigRational::from_integer((*m).into())
        })
    }

    /// `prod (t - value)^mult`.
    pub fn char_poly(&self) -> Polynomial {
        self.pairs.iter().fold(Polynomial::one(), |acc, (v, m)| {
            &acc * &Polynomial::linear_factor(v).pow(*m)
        })
    }

    pub fn inertia(&self) -> Inertia {
        let mut out = Inertia::default();
        for (v, m) in &self.pairs {
            match sign(v) {
                1 => out.positive += m,
                -1 => out.negative += m,
                _ => out.zero += m,
            }
        }
        out
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    /// Exactly one positive eigenvalue, the rest negative.
    pub fn is_lorentzian(&self) -> bool {
        self.positive == 1 && self.zero == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumCheck {
    pub char_poly_match: bool,
    pub diagonalizable: bool,
    /// Only reported when the characteristic polynomial matched.
    pub inertia: Option<Inertia>,
}

impl SpectrumCheck {
    pub fn passed(&self) -> bool {
        self.char_poly_match && self.diagonalizable
    }
}

/// Checks a claimed spectrum against a matrix exactly.
///
/// The characteristic polynomial must equal `prod (t - value)^mult`, and
/// every claimed eigenspace must have the claimed dimension.
pub fn verify_spectrum(m: &ExactMatrix, claimed: &Spectrum) -> Result<SpectrumCheck> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if claimed.dimension() != n {
        return Err(Error::MultiplicityMismatch {
            expected: n,
            found: claimed.dimension(),
        });
    }
    let char_poly_match = char_poly(m)? == claimed.char_poly();
    let diagonalizable = claimed
        .pairs()
        .iter()
        .all(|(v, mult)| m.shifted(v).map(|s| n - rank(&s) == *mult).unwrap_or(false));
    Ok(SpectrumCheck {
        char_poly_match,
        diagonalizable,
        inertia: char_poly_match.then(|| claimed.inertia()),
    })
}
