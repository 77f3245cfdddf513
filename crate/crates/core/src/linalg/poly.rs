use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational_to_f64;

/// Univariate polynomial in `t` with exact rational coefficients, lowest
/// degree first. Trailing zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `t - root`.
    pub fn linear_factor(root: &BigRational) -> Self {
        Self::new(vec![-root.clone(), BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lead = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let q = &rem[i + dd] / &lead;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * dc;
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, made monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }

    /// Splits off every rational root with its multiplicity.
    ///
    /// Roots are located numerically on the square-free part and then
    /// confirmed by exact evaluation, so a reported root is always exact.
    /// Anything not confirmed stays in the returned residual factor
    /// (monic, degree 0 when the polynomial splits over the rationals).
    pub fn rational_roots(&self) -> (Vec<(BigRational, usize)>, Polynomial) {
        if self.is_zero() {
            return (Vec::new(), Self::zero());
        }
        let mut residual = self.monic();
        let mut roots = Vec::new();
        let sqfree = integer_primitive(&residual.square_free_part());
        for root in rational_root_candidates(&sqfree) {
            let factor = Self::linear_factor(&root);
            let mut mult = 0;
            loop {
                let (q, r) = residual.div_rem(&factor);
                if !r.is_zero() {
                    break;
                }
                residual = q;
                mult += 1;
            }
            if mult > 0 {
                roots.push((root, mult));
            }
        }
        roots.sort_by(|a, b| b.0.cmp(&a.0));
        (roots, residual)
    }
}

/// Scales by a rational so that the coefficients are coprime integers with
/// a positive leading coefficient.
fn integer_primitive(p: &Polynomial) -> Vec<BigInt> {
    let den = p
        .coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !g.is_zero() {
        for c in &mut ints {
            *c = &*c / &g;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    ints
}

fn eval_int(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
        acc * x + BigRational::from_integer(c.clone())
    })
}

/// Exact rational roots of a square-free integer polynomial, found from
/// numeric approximations. A rational root `p/q` in lowest terms has `q`
/// dividing the leading coefficient, so `lead * root` is an integer; the
/// numeric estimate of that integer and its neighbours are tested exactly.
fn rational_root_candidates(coeffs: &[BigInt]) -> Vec<BigRational> {
    let mut found: Vec<BigRational> = Vec::new();
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return found;
    }
    let lead = coeffs[degree].clone();
    let push_if_root = |cand: BigRational, found: &mut Vec<BigRational>| {
        if !found.contains(&cand) && eval_int(coeffs, &cand).is_zero() {
            found.push(cand);
        }
    };
    if coeffs[0].is_zero() {
        push_if_root(BigRational::zero(), &mut found);
    }
    if degree == 1 {
        push_if_root(BigRational::new(-coeffs[0].clone(), lead), &mut found);
        return found;
    }
    let Some(approx) = numeric_roots(coeffs) else {
        return found;
    };
    let lead_f = lead.to_f64().unwrap_or(f64::INFINITY);
    for z in approx {
        if !z.re.is_finite() || z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
            continue;
        }
        let scaled = (z.re * lead_f).round();
        if !scaled.is_finite() || scaled.abs() > 9.0e15 {
            continue;
        }
        let centre = scaled as i64;
        for delta in -2..=2 {
            let cand = BigRational::new(BigInt::from(centre + delta), lead.clone());
            push_if_root(cand, &mut found);
        }
    }
    found
}

/// Companion-matrix eigenvalues; `None` if coefficients overflow `f64`.
fn numeric_roots(coeffs: &[BigInt]) -> Option<Vec<num_complex::Complex<f64>>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].to_f64()?;
    let mut normalized = Vec::with_capacity(n);
    for c in &coeffs[..n] {
        let v = c.to_f64()? / lead;
        if !v.is_finite() {
            return None;
        }
        normalized.push(v);
    }
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -normalized[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    Some(companion.complex_eigenvalues().iter().copied().collect())
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, ratio};

    #[test]
    fn arithmetic_and_display() {
        let p = Polynomial::from_integers(&[-2, -3, 0, 1]);
        assert_eq!(p.to_string(), "t^3 - 3t - 2");
        let q = &Polynomial::linear_factor(&int(2)) * &Polynomial::linear_factor(&int(-1)).pow(2);
        assert_eq!(p, q);
        assert_eq!(Polynomial::zero().to_string(), "0");
        assert_eq!(
            Polynomial::new(vec![ratio(1, 2), int(-1)]).to_string(),
            "-t + (1/2)"
        );
        assert_eq!(p.eval(&int(2)), int(0));
        assert_eq!((&p - &p), Polynomial::zero());
    }

    #[test]
    fn division_and_gcd() {
        let a = &Polynomial::linear_factor(&int(1)).pow(3) * &Polynomial::linear_factor(&int(4));
        let b = Polynomial::linear_factor(&int(1)).pow(2);
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(&q * &b, a);
        assert_eq!(a.gcd(&b), b);
        let sf = a.square_free_part();
        assert_eq!(
            sf,
            &Polynomial::linear_factor(&int(1)) * &Polynomial::linear_factor(&int(4))
        );
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (t + 2)^20 (t + 4)^5 (t - 16)(2t - 3)
        let p = &(&(&Polynomial::linear_factor(&int(-2)).pow(20)
            * &Polynomial::linear_factor(&int(-4)).pow(5))
            * &Polynomial::linear_factor(&int(16)))
            * &Polynomial::new(vec![int(-3), int(2)]);
        let (roots, residual) = p.rational_roots();
        assert_eq!(residual, Polynomial::one());
        assert_eq!(
            roots,
            vec![(int(16), 1), (ratio(3, 2), 1), (int(-2), 20), (int(-4), 5)]
        );
    }

    #[test]
    fn irrational_roots_stay_in_residual() {
        // (t^2 - 2) t^2 (t - 1)
        let p = &(&Polynomial::from_integers(&[-2, 0, 1]) * &Polynomial::from_integers(&[0, 0, 1]))
            * &Polynomial::linear_factor(&int(1));
        let (roots, residual) = p.rational_roots();
        assert_eq!(roots, vec![(int(1), 1), (int(0), 2)]);
        assert_eq!(residual, Polynomial::from_integers(&[-2, 0, 1]));
    }
}
