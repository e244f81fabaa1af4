//! Exact Laurent polynomials in `t` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigRational::one(), 0)
    }

    /// `c · t^e`.
    pub fn monomial(c: BigRational, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn int_monomial(c: i64, e: i64) -> Self {
        Self::monomial(BigRational::from_integer(c.into()), e)
    }

    /// Builds `Σ coeffs[k] t^{offset + k}` from integers.
    pub fn from_ints(offset: i64, coeffs: &[i64]) -> Self {
        let mut p = Self::zero();
        for (k, &c) in coeffs.iter().enumerate() {
            p.add_term(offset + k as i64, BigRational::from_integer(c.into()));
        }
        p
    }

    pub fn t() -> Self {
        Self::int_monomial(1, 1)
    }

    fn add_term(&mut self, e: i64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Value at an integer point, for `t = ±1` and friends.
    pub fn eval_int(&self, t: i64) -> BigRational {
        let tr = BigRational::from_integer(t.into());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let pw = if *e >= 0 {
                num_traits::pow(tr.clone(), *e as usize)
            } else {
                num_traits::pow(tr.recip(), (-*e) as usize)
            };
            acc += c * pw;
        }
        acc
    }

    /// Exact quotient `self / d`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dn, nn) = (d.min_exp()?, self.min_exp()?);
        let den = d.shift(-dn);
        let mut rem = self.shift(-nn);
        let dlead_e = den.max_exp()?;
        let dlead = den.coeff(dlead_e);
        let mut quot = Self::zero();
        while let Some(re) = rem.max_exp() {
            if re < dlead_e {
                return None;
            }
            let c = rem.coeff(re) / &dlead;
            let step = Self::monomial(c, re - dlead_e);
            rem = &rem - &(&step * &den);
            quot = &quot + &step;
        }
        Some(quot.shift(nn - dn))
    }

    /// Shifts exponents to be centered around zero and fixes the sign so
    /// the value at `t = 1` is positive. An odd span is centered as closely
    /// as possible.
    pub fn symmetrized(&self) -> LaurentPoly {
        let (lo, hi) = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return self.clone(),
        };
        let shift = -(lo + hi).div_euclid(2);
        let mut p = self.shift(shift);
        if p.eval_int(1).is_negative() {
            p = -&p;
        }
        p
    }

    /// True if `self = ±t^k · other` for some `k`.
    pub fn equal_up_to_unit(&self, other: &LaurentPoly) -> bool {
        match (self.min_exp(), other.min_exp()) {
            (None, None) => true,
            (Some(a), Some(b)) => {
                let x = self.shift(-a);
                let y = other.shift(-b);
                x == y || x == -&y
            }
            _ => false,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| self.terms.get(&-e) == Some(c))
    }

    /// Integer coefficients from `min_exp` to `max_exp`, if all are integral.
    pub fn integer_coefficients(&self) -> Option<(i64, Vec<i64>)> {
        let (lo, hi) = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Some((0, Vec::new())),
        };
        let mut out = Vec::with_capacity((hi - lo + 1) as usize);
        for e in lo..=hi {
            let c = self.coeff(e);
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer().to_i64()?);
        }
        Some((lo, out))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == BigRational::one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("t")?,
                1 => write!(f, "{mag}t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{mag}t^{e}")?,
            }
        }
        Ok(())
    }
}

/// Integer value of a rational known to be integral.
pub(crate) fn as_bigint(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}
