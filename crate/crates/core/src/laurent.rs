//! Finite Laurent polynomials in the equivariant parameter `t` with
//! coefficients in a truncated cohomology ring.
//!
//! The coefficient of `t^{-2-a}` of a correlator encodes the push-forward of
//! the `a`-th power of the cotangent class.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::ring::{CohClass, RingSpec};

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    spec: Arc<RingSpec>,
    terms: BTreeMap<i32, CohClass>,
}

impl LaurentPoly {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        LaurentPoly {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::from_class(CohClass::one(spec))
    }

    pub fn from_class(c: CohClass) -> Self {
        Self::monomial(c, 0)
    }

    pub fn constant(spec: &Arc<RingSpec>, r: Rational) -> Self {
        Self::from_class(CohClass::constant(spec, r))
    }

    /// `c · t^exponent`.
    pub fn monomial(c: CohClass, exponent: i32) -> Self {
        let spec = c.spec().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exponent, c);
        }
        LaurentPoly { spec, terms }
    }

    /// `t^exponent`.
    pub fn t_pow(spec: &Arc<RingSpec>, exponent: i32) -> Self {
        Self::monomial(CohClass::one(spec), exponent)
    }

    pub fn h(spec: &Arc<RingSpec>) -> Self {
        Self::from_class(CohClass::h(spec))
    }

    /// `a·h + b·t`.
    pub fn linear(spec: &Arc<RingSpec>, a: &Rational, b: &Rational) -> Self {
        let mut p = Self::from_class(CohClass::h(spec).scale(a));
        p.add_term(1, CohClass::constant(spec, b.clone()));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, CohClass)>>(
        spec: &Arc<RingSpec>,
        terms: I,
    ) -> Result<Self> {
        let mut p = Self::zero(spec);
        for (e, c) in terms {
            if c.spec() != spec {
                return Err(Error::SpecMismatch);
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `t^exponent` (zero when absent).
    pub fn coeff(&self, exponent: i32) -> CohClass {
        self.terms
            .get(&exponent)
            .cloned()
            .unwrap_or_else(|| CohClass::zero(&self.spec))
    }

    /// Nonzero terms in increasing `t` exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &CohClass)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    fn add_term(&mut self, exponent: i32, c: CohClass) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exponent) {
            None => {
                self.terms.insert(exponent, c);
            }
            Some(prev) => {
                let sum = &prev + &c;
                if !sum.is_zero() {
                    self.terms.insert(exponent, sum);
                }
            }
        }
    }

    /// Keeps only terms with exponent in `range`.
    pub fn restrict<R: std::ops::RangeBounds<i32>>(&self, range: R) -> Self {
        LaurentPoly {
            spec: self.spec.clone(),
            terms: self
                .terms
                .range(range)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(&self.spec);
        }
        LaurentPoly {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, c.scale(r))).collect(),
        }
    }

    pub fn mul_class(&self, c: &CohClass) -> Self {
        let mut out = Self::zero(&self.spec);
        for (e, a) in &self.terms {
            out.add_term(*e, a * c);
        }
        out
    }

    pub fn checked_add(&self, rhs: &LaurentPoly) -> Result<Self> {
        if self.spec != rhs.spec {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &LaurentPoly) -> Result<Self> {
        if self.spec != rhs.spec {
            return Err(Error::SpecMismatch);
        }
        let mut out = Self::zero(&self.spec);
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                out.add_term(ea + eb, a.checked_mul(b)?);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.spec);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit.
    ///
    /// A unit has exactly one `t`-exponent `N` whose coefficient carries a
    /// nonzero scalar part `c`; every other piece is nilpotent. Writing
    /// `p = c·t^N·(1 + u)` with `u` nilpotent, the inverse is the finite sum
    /// `c^{-1} t^{-N} Σ (-u)^k`.
    pub fn invert_unit(&self) -> Result<Self> {
        let mut lead: Option<(i32, Rational)> = None;
        for (e, c) in &self.terms {
            let scalar = c.constant_part();
            if scalar.is_zero() {
                continue;
            }
            if lead.is_some() {
                return Err(Error::NotInvertible(format!(
                    "several t-exponents carry a scalar part in {self}"
                )));
            }
            lead = Some((*e, scalar));
        }
        let (top, scalar) =
            lead.ok_or_else(|| Error::NotInvertible(format!("no scalar leading term in {self}")))?;
        let inv_lead = Self::monomial(CohClass::constant(&self.spec, scalar.recip()?), -top);
        let mut u = &(self * &inv_lead) - &Self::one(&self.spec);
        u = -u;
        // (1 + u)^{-1} with u replaced by -u: Σ u^k
        let mut acc = Self::one(&self.spec);
        let mut power = Self::one(&self.spec);
        for _ in 0..=self.spec.top_degree() {
            power = &power * &u;
            if power.is_zero() {
                return Ok(&acc * &inv_lead);
            }
            acc = &acc + &power;
        }
        Err(Error::NotInvertible(format!(
            "geometric series did not terminate for {self}"
        )))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    /// Panics if the operands live in different rings.
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("LaurentPoly + LaurentPoly")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(&-rhs).expect("LaurentPoly - LaurentPoly")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("LaurentPoly * LaurentPoly")
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing `t` exponent.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces = Vec::new();
        for (&e, c) in self.terms.iter().rev() {
            let coeff = c.to_string();
            let tpart = match e {
                0 => None,
                1 => Some("t".to_string()),
                _ => Some(format!("t^{e}")),
            };
            let piece = match tpart {
                None => {
                    if c.num_terms() > 1 && self.terms.len() > 1 {
                        format!("({coeff})")
                    } else {
                        coeff
                    }
                }
                Some(tp) if c.num_terms() > 1 => format!("({coeff})*{tp}"),
                Some(tp) if coeff == "1" => tp,
                Some(tp) if coeff == "-1" => format!("-{tp}"),
                Some(tp) => format!("{coeff}*{tp}"),
            };
            pieces.push(piece);
        }
        crate::ring::write_sum(f, &pieces)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn invert_t() {
        let spec = RingSpec::absolute(3);
        let t = LaurentPoly::t_pow(&spec, 1);
        assert_eq!(t.invert_unit().unwrap(), LaurentPoly::t_pow(&spec, -1));
    }

    #[test]
    fn invert_h_plus_t() {
        let spec = RingSpec::absolute(3);
        let p = LaurentPoly::linear(&spec, &q(1, 1), &q(1, 1));
        let inv = p.invert_unit().unwrap();
        let h = |k| CohClass::h_pow(&spec, k);
        let expected =
            LaurentPoly::from_terms(&spec, [(-1, h(0)), (-2, -h(1)), (-3, h(2)), (-4, -h(3))])
                .unwrap();
        assert_eq!(inv, expected);
        assert_eq!(&inv * &p, LaurentPoly::one(&spec));
    }

    #[test]
    fn invert_h_plus_2t() {
        let spec = RingSpec::absolute(1);
        let p = LaurentPoly::linear(&spec, &q(1, 1), &q(2, 1));
        let inv = p.invert_unit().unwrap();
        let expected = LaurentPoly::from_terms(
            &spec,
            [
                (-1, CohClass::constant(&spec, q(1, 2))),
                (-2, CohClass::h(&spec).scale(&q(-1, 4))),
            ],
        )
        .unwrap();
        assert_eq!(inv, expected);
    }

    #[test]
    fn non_units_are_rejected() {
        let spec = RingSpec::absolute(2);
        let h = LaurentPoly::h(&spec);
        assert!(matches!(h.invert_unit(), Err(Error::NotInvertible(_))));
        let two_lead = &LaurentPoly::t_pow(&spec, 1) + &LaurentPoly::one(&spec);
        assert!(matches!(
            two_lead.invert_unit(),
            Err(Error::NotInvertible(_))
        ));
        assert!(LaurentPoly::zero(&spec).invert_unit().is_err());
    }

    #[test]
    fn display_orders_by_decreasing_exponent() {
        let spec = RingSpec::absolute(3);
        let p = LaurentPoly::linear(&spec, &q(1, 1), &q(1, 1))
            .pow(3)
            .invert_unit()
            .unwrap()
            .mul_class(&CohClass::h(&spec));
        assert_eq!(p.to_string(), "h*t^-3 - 3*h^2*t^-4 + 6*h^3*t^-5");
    }
}
