//! Power series in `q` truncated at a caller-chosen degree `D`.
//!
//! Every operation is exact modulo `q^{D+1}`. Coefficients come from any
//! commutative [`Ring`] containing `Q`: plain rationals, cohomology classes,
//! or Laurent polynomials in `t`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::ring::{CohClass, RingSpec};

/// A commutative `Q`-algebra usable as a series coefficient.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    /// Whatever is needed to build `0` and `1` (e.g. the ring spec).
    type Context: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero_in(ctx: &Self::Context) -> Self;
    fn one_in(ctx: &Self::Context) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-Rational::one()))
    }
}

impl Ring for Rational {
    type Context = ();

    fn zero_in(_: &()) -> Self {
        Rational::zero()
    }
    fn one_in(_: &()) -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
}

impl Ring for CohClass {
    type Context = Arc<RingSpec>;

    fn zero_in(ctx: &Self::Context) -> Self {
        CohClass::zero(ctx)
    }
    fn one_in(ctx: &Self::Context) -> Self {
        CohClass::one(ctx)
    }
    fn is_zero(&self) -> bool {
        CohClass::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, r: &Rational) -> Self {
        CohClass::scale(self, r)
    }
}

impl Ring for LaurentPoly {
    type Context = Arc<RingSpec>;

    fn zero_in(ctx: &Self::Context) -> Self {
        LaurentPoly::zero(ctx)
    }
    fn one_in(ctx: &Self::Context) -> Self {
        LaurentPoly::one(ctx)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn scale(&self, r: &Rational) -> Self {
        LaurentPoly::scale(self, r)
    }
}

/// `Σ_{k=0}^{D} c_k q^k`, exact modulo `q^{D+1}`.
#[derive(Clone, PartialEq)]
pub struct Series<R: Ring> {
    ctx: R::Context,
    coeffs: Vec<R>,
}

/// Series with Laurent-polynomial coefficients.
pub type QSeries = Series<LaurentPoly>;

impl<R: Ring> Series<R> {
    pub fn zero(ctx: &R::Context, truncation: usize) -> Self {
        Series {
            ctx: ctx.clone(),
            coeffs: vec![R::zero_in(ctx); truncation + 1],
        }
    }

    pub fn one(ctx: &R::Context, truncation: usize) -> Self {
        Self::constant(ctx, truncation, R::one_in(ctx))
    }

    pub fn constant(ctx: &R::Context, truncation: usize, c: R) -> Self {
        Self::monomial(ctx, truncation, c, 0)
    }

    /// `c · q^k` (zero when `k > D`).
    pub fn monomial(ctx: &R::Context, truncation: usize, c: R, k: usize) -> Self {
        let mut s = Self::zero(ctx, truncation);
        if k <= truncation {
            s.coeffs[k] = c;
        }
        s
    }

    /// Coefficients beyond `D` are dropped; missing ones are zero.
    pub fn from_coeffs(ctx: &R::Context, truncation: usize, coeffs: Vec<R>) -> Self {
        let mut s = Self::zero(ctx, truncation);
        for (k, c) in coeffs.into_iter().enumerate().take(truncation + 1) {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn context(&self) -> &R::Context {
        &self.ctx
    }

    pub fn coeff(&self, k: usize) -> &R {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    fn check(&self, rhs: &Self) -> Result<()> {
        if self.truncation() != rhs.truncation() {
            return Err(Error::TruncationMismatch(
                self.truncation(),
                rhs.truncation(),
            ));
        }
        if self.ctx != rhs.ctx {
            return Err(Error::SpecMismatch);
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(Series {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Series {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    /// Multiplies every coefficient by the ring element `c`.
    pub fn mul_coeff(&self, c: &R) -> Self {
        Series {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let d = self.truncation();
        let mut out = Self::zero(&self.ctx, d);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=d - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// `exp(f)` for `f` with zero constant term, as the finite Taylor sum.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let d = self.truncation();
        let mut acc = Self::one(&self.ctx, d);
        let mut power = Self::one(&self.ctx, d);
        for k in 1..=d {
            power = power.mul(self)?.scale(&Rational::new(1, k as i64));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc)
    }

    /// `log(g)` for `g` with constant term one: `Σ (-1)^{k+1} (g-1)^k / k`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0] != R::one_in(&self.ctx) {
            return Err(Error::ConstantTermNotOne);
        }
        let d = self.truncation();
        let u = self.sub(&Self::one(&self.ctx, d))?;
        let mut acc = Self::zero(&self.ctx, d);
        let mut power = Self::one(&self.ctx, d);
        for k in 1..=d {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Rational::new(sign, k as i64)))?;
        }
        Ok(acc)
    }

    /// `P(q·e^{f(q)}) = Σ_d P_d q^d e^{d·f(q)}` for `f` with zero constant term.
    pub fn substitute(&self, f: &Self) -> Result<Self> {
        self.check(f)?;
        let d = self.truncation();
        let e_f = f.exp()?;
        // running = (q e^f)^k
        let mut running = Self::one(&self.ctx, d);
        let q_e_f = Self::monomial(&self.ctx, d, R::one_in(&self.ctx), 1).mul(&e_f)?;
        let mut acc = Self::zero(&self.ctx, d);
        for k in 0..=d {
            if !self.coeffs[k].is_zero() {
                acc = acc.add(&running.mul_coeff(&self.coeffs[k]))?;
            }
            running = running.mul(&q_e_f)?;
        }
        Ok(acc)
    }

    /// Index of the first coefficient where `self` and `rhs` differ.
    pub fn first_difference(&self, rhs: &Self) -> Option<usize> {
        self.coeffs
            .iter()
            .zip(&rhs.coeffs)
            .position(|(a, b)| a != b)
    }
}

impl<R: Ring> fmt::Debug for Series<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Series")
            .field("truncation", &self.truncation())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}
