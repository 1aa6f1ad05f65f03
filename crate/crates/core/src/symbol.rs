//! Exact Laurent polynomials with rational coefficients.
//!
//! A mask `a` corresponds one-to-one to its symbol `s_a(z) = Σ a_i z^i`. Convergence and
//! smoothness questions reduce to arithmetic on these symbols: evaluation at `±1`, division
//! by `(1+z)` and multiplication by `(1+z)/2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Finitely supported `Σ c_e z^e`, `e ∈ ℤ`.
///
/// Invariant: no stored coefficient is zero, so the key range is exactly the support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    pub fn monomial(coeff: Rational, exponent: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponent, coeff);
        p
    }

    /// `c_0 z^min_exp + c_1 z^{min_exp+1} + …`; zero entries are dropped.
    pub fn from_coeffs(min_exp: i64, coeffs: &[Rational]) -> Self {
        let mut p = Self::zero();
        for (offset, c) in coeffs.iter().enumerate() {
            p.add_term(min_exp + offset as i64, c.clone());
        }
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `(1 + z)`.
    pub fn one_plus_z() -> Self {
        Self::from_coeffs(0, &[rational::int(1), rational::int(1)])
    }

    /// `(1 + z) / 2`, the smoothing factor.
    pub fn half_one_plus_z() -> Self {
        Self::from_coeffs(0, &[rational::rat(1, 2), rational::rat(1, 2)])
    }

    fn add_term(&mut self, exponent: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exponent).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.coeffs.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exponent: i64) -> Rational {
        self.coeffs.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Dense coefficient list from `min_exp` to `max_exp`, zeros filled in.
    pub fn dense(&self) -> (i64, Vec<Rational>) {
        match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, (lo..=hi).map(|e| self.coeff(e)).collect()),
            _ => (0, Vec::new()),
        }
    }

    /// Exact value at a nonzero rational point.
    pub fn eval(&self, z: &Rational) -> Result<Rational> {
        if z.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let inv = z.recip();
        Ok(self.terms().fold(Rational::zero(), |acc, (e, c)| {
            let base = if e < 0 { &inv } else { z };
            acc + c * num_traits::pow(base.clone(), e.unsigned_abs() as usize)
        }))
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * factor)))
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Substitutes `z -> z^factor` (`factor >= 1`).
    pub fn dilate(&self, factor: i64) -> Self {
        assert!(factor >= 1, "dilation factor must be positive");
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e * factor, c.clone()))
                .collect(),
        }
    }

    /// Formal derivative `d/dz`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms()
                .map(|(e, c)| (e - 1, c * Rational::from_integer(e.into()))),
        )
    }

    /// `(Σ_j |c_{2j}|, Σ_j |c_{2j+1}|)`.
    pub fn parity_sums(&self) -> (Rational, Rational) {
        let mut even = Rational::zero();
        let mut odd = Rational::zero();
        for (e, c) in self.terms() {
            if e.rem_euclid(2) == 0 {
                even += c.abs();
            } else {
                odd += c.abs();
            }
        }
        (even, odd)
    }

    /// `max_r Σ_j |c_{m j + r}|` over residues `r mod m`.
    pub fn residue_abs_sums(&self, modulus: i64) -> Vec<Rational> {
        let mut sums = vec![Rational::zero(); modulus as usize];
        for (e, c) in self.terms() {
            sums[e.rem_euclid(modulus) as usize] += c.abs();
        }
        sums
    }

    fn leading(&self) -> Option<(i64, &Rational)> {
        self.coeffs.iter().next_back().map(|(e, c)| (*e, c))
    }

    /// Polynomial long division `self = divisor * q + r` with `deg r < deg divisor`.
    ///
    /// Both operands are treated as ordinary polynomials; negative exponents are not allowed.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dlead_exp = divisor.degree().ok_or(Error::DivisionByZero)?;
        debug_assert!(self.min_exp().unwrap_or(0) >= 0 && divisor.min_exp().unwrap_or(0) >= 0);
        let Some(deg) = self.degree().filter(|&d| d >= dlead_exp) else {
            return Ok((Self::zero(), self.clone()));
        };
        let d: Vec<Rational> = (0..=dlead_exp).map(|k| divisor.coeff(k)).collect();
        let inv_lead = d[dlead_exp as usize].recip();
        let mut rem: Vec<Rational> = (0..=deg).map(|k| self.coeff(k)).collect();
        let mut quotient = vec![Rational::zero(); (deg - dlead_exp + 1) as usize];
        for shift in (0..quotient.len()).rev() {
            let top = shift + dlead_exp as usize;
            if rem[top].is_zero() {
                continue;
            }
            let factor = &rem[top] * &inv_lead;
            for (k, dk) in d.iter().enumerate() {
                if !dk.is_zero() {
                    rem[shift + k] -= &factor * dk;
                }
            }
            quotient[shift] = factor;
        }
        rem.truncate(dlead_exp as usize);
        Ok((Self::from_coeffs(0, &quotient), Self::from_coeffs(0, &rem)))
    }

    /// Exact division in the Laurent ring.
    ///
    /// Returns `q` with `self = divisor * q`, or [`Error::InexactDivision`] carrying the remainder
    /// `r` of `self = divisor * q + r` after normalizing both operands to start at `z^0`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let dmin = divisor.min_exp().ok_or(Error::DivisionByZero)?;
        let Some(pmin) = self.min_exp() else {
            return Ok(Self::zero());
        };
        let (q, r) = self.shift(-pmin).div_rem(&divisor.shift(-dmin))?;
        if r.is_zero() {
            Ok(q.shift(pmin - dmin))
        } else {
            Err(Error::InexactDivision {
                remainder: r.shift(pmin),
            })
        }
    }

    /// Monic greatest common divisor of two ordinary polynomials.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Scales so that the leading coefficient is one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Self::zero(),
        }
    }

    /// Degree of an ordinary polynomial (`None` for zero).
    pub fn degree(&self) -> Option<i64> {
        self.max_exp()
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{e}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: `{"min_exp": int, "coeffs": ["p/q", ...]}` (dense, zero polynomial has no coeffs).
#[derive(Serialize, Deserialize)]
struct DenseForm {
    min_exp: i64,
    #[serde(with = "rational::serde_vec_str")]
    coeffs: Vec<Rational>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (min_exp, coeffs) = self.dense();
        DenseForm { min_exp, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let dense = DenseForm::deserialize(d)?;
        Ok(Self::from_coeffs(dense.min_exp, &dense.coeffs))
    }
}
