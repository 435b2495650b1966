//! Truncated graded coefficient rings.
//!
//! Two flavours share one representation:
//!
//! * absolute: `Q[h]/(h^{n+1})`, the cohomology of `P^n`;
//! * relative: `B[h]/(h^{n+1} + c_1 h^n + ... + c_{n+1})` where `B` is a
//!   polynomial ring in graded base generators truncated above a cutoff
//!   degree, and the `c_j` are supplied base classes (the Chern classes of
//!   the bundle being projectivized).
//!
//! A [`CohClass`] is dense in the `h` exponent (`0..=n`) and sparse in base
//! monomials. All multiplication reduces `h`-powers above `n` through the
//! relation and drops base monomials above the cutoff.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Exponent vector over the base generators. Empty in absolute mode.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<u16>);

impl Monomial {
    pub fn one(generators: usize) -> Self {
        Monomial(vec![0; generators])
    }

    pub fn from_exponents(exponents: Vec<u16>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Sparse polynomial in the base generators.
pub type BasePoly = BTreeMap<Monomial, Rational>;

fn accumulate(target: &mut BasePoly, mono: Monomial, value: Rational) {
    if value.is_zero() {
        return;
    }
    match target.entry(mono) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += value;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingMode {
    Absolute,
    Relative {
        generators: Vec<Generator>,
        base_cutoff: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingSpec {
    n: usize,
    mode: RingMode,
    /// `c_1 .. c_{n+1}` of the projective-bundle relation; all zero when absolute.
    relation: Vec<BasePoly>,
}

impl RingSpec {
    pub fn absolute(n: usize) -> Arc<Self> {
        Arc::new(RingSpec {
            n,
            mode: RingMode::Absolute,
            relation: vec![BasePoly::new(); n + 1],
        })
    }

    /// Relative ring over `generators` truncated above `base_cutoff`.
    ///
    /// `chern[j-1]` is `c_j`; missing entries are zero. Every `c_j` must be
    /// homogeneous of degree `j` so the ring stays graded.
    pub fn relative(
        n: usize,
        generators: Vec<Generator>,
        base_cutoff: u32,
        chern: Vec<BasePoly>,
    ) -> Result<Arc<Self>> {
        if chern.len() > n + 1 {
            return Err(Error::InvalidModel(format!(
                "{} Chern classes given for a rank {} bundle",
                chern.len(),
                n + 1
            )));
        }
        if generators.iter().any(|g| g.degree == 0) {
            return Err(Error::InvalidModel(
                "base generators need degree >= 1".into(),
            ));
        }
        let mut spec = RingSpec {
            n,
            mode: RingMode::Relative {
                generators,
                base_cutoff,
            },
            relation: Vec::new(),
        };
        let mut relation = Vec::with_capacity(n + 1);
        for (j, c) in chern.into_iter().enumerate() {
            let mut reduced = BasePoly::new();
            for (mono, value) in c {
                if mono.0.len() != spec.num_generators() {
                    return Err(Error::InvalidModel("monomial arity mismatch".into()));
                }
                let deg = spec.monomial_degree(&mono);
                if deg != j as u32 + 1 {
                    return Err(Error::InvalidModel(format!(
                        "c_{} has a term of degree {deg}",
                        j + 1
                    )));
                }
                if deg <= base_cutoff {
                    accumulate(&mut reduced, mono, value);
                }
            }
            relation.push(reduced);
        }
        relation.resize(n + 1, BasePoly::new());
        spec.relation = relation;
        Ok(Arc::new(spec))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> &RingMode {
        &self.mode
    }

    pub fn is_relative(&self) -> bool {
        matches!(self.mode, RingMode::Relative { .. })
    }

    pub fn generators(&self) -> &[Generator] {
        match &self.mode {
            RingMode::Absolute => &[],
            RingMode::Relative { generators, .. } => generators,
        }
    }

    pub fn num_generators(&self) -> usize {
        self.generators().len()
    }

    pub fn base_cutoff(&self) -> u32 {
        match &self.mode {
            RingMode::Absolute => 0,
            RingMode::Relative { base_cutoff, .. } => *base_cutoff,
        }
    }

    /// `c_j` of the bundle relation (`c_0 = 1`).
    pub fn chern(&self, j: usize) -> BasePoly {
        match j {
            0 => BasePoly::from([(Monomial::one(self.num_generators()), Rational::one())]),
            j if j <= self.n + 1 => self.relation[j - 1].clone(),
            _ => BasePoly::new(),
        }
    }

    pub fn monomial_degree(&self, mono: &Monomial) -> u32 {
        self.generators()
            .iter()
            .zip(mono.exponents())
            .map(|(g, &e)| g.degree * e as u32)
            .sum()
    }

    /// Largest cohomological degree a nonzero class can have.
    pub fn top_degree(&self) -> u32 {
        self.n as u32 + self.base_cutoff()
    }

    pub(crate) fn base_mul(&self, a: &BasePoly, b: &BasePoly) -> BasePoly {
        let mut out = BasePoly::new();
        if a.is_empty() || b.is_empty() {
            return out;
        }
        let cutoff = self.base_cutoff();
        for (ma, va) in a {
            let da = self.monomial_degree(ma);
            for (mb, vb) in b {
                if da + self.monomial_degree(mb) > cutoff {
                    continue;
                }
                accumulate(&mut out, ma.times(mb), va * vb);
            }
        }
        out
    }

    fn same(a: &Arc<RingSpec>, b: &Arc<RingSpec>) -> bool {
        Arc::ptr_eq(a, b) || a == b
    }

    fn format_monomial(&self, mono: &Monomial) -> String {
        let mut factors = Vec::new();
        for (g, &e) in self.generators().iter().zip(mono.exponents()) {
            match e {
                0 => {}
                1 => factors.push(g.name.clone()),
                _ => factors.push(format!("{}^{e}", g.name)),
            }
        }
        factors.join("*")
    }
}

/// An element of a truncated coefficient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct CohClass {
    spec: Arc<RingSpec>,
    coeffs: Vec<BasePoly>,
}

impl CohClass {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        CohClass {
            spec: spec.clone(),
            coeffs: vec![BasePoly::new(); spec.n + 1],
        }
    }

    pub fn constant(spec: &Arc<RingSpec>, value: Rational) -> Self {
        let mut c = Self::zero(spec);
        accumulate(
            &mut c.coeffs[0],
            Monomial::one(spec.num_generators()),
            value,
        );
        c
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::constant(spec, Rational::one())
    }

    /// `h^k`, reduced through the ring relation when `k > n`.
    pub fn h_pow(spec: &Arc<RingSpec>, k: u32) -> Self {
        Self::from_terms(
            spec,
            [(k, Monomial::one(spec.num_generators()), Rational::one())],
        )
        .expect("arity matches")
    }

    pub fn h(spec: &Arc<RingSpec>) -> Self {
        Self::h_pow(spec, 1)
    }

    /// A class pulled back from the base.
    pub fn from_base(spec: &Arc<RingSpec>, poly: BasePoly) -> Self {
        let mut c = Self::zero(spec);
        for (mono, value) in poly {
            if spec.monomial_degree(&mono) <= spec.base_cutoff() {
                accumulate(&mut c.coeffs[0], mono, value);
            }
        }
        c
    }

    /// The base generator with index `idx` (in declaration order).
    pub fn generator(spec: &Arc<RingSpec>, idx: usize) -> Result<Self> {
        if idx >= spec.num_generators() {
            return Err(Error::OutOfRange(format!("no base generator #{idx}")));
        }
        let mut exps = vec![0u16; spec.num_generators()];
        exps[idx] = 1;
        Ok(Self::from_base(
            spec,
            BasePoly::from([(Monomial(exps), Rational::one())]),
        ))
    }

    /// Builds `Σ value · h^k · mono`, reducing `h^k` for `k > n`.
    pub fn from_terms<I>(spec: &Arc<RingSpec>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Monomial, Rational)>,
    {
        let mut wide: Vec<BasePoly> = vec![BasePoly::new(); spec.n + 1];
        for (k, mono, value) in terms {
            if mono.0.len() != spec.num_generators() {
                return Err(Error::InvalidModel("monomial arity mismatch".into()));
            }
            if spec.monomial_degree(&mono) > spec.base_cutoff() {
                continue;
            }
            let k = k as usize;
            if k >= wide.len() {
                wide.resize(k + 1, BasePoly::new());
            }
            accumulate(&mut wide[k], mono, value);
        }
        Ok(Self::reduce(spec, wide))
    }

    fn reduce(spec: &Arc<RingSpec>, mut wide: Vec<BasePoly>) -> Self {
        let n = spec.n;
        if wide.len() > n + 1 {
            if spec.is_relative() {
                for e in (n + 1..wide.len()).rev() {
                    let top = std::mem::take(&mut wide[e]);
                    if top.is_empty() {
                        continue;
                    }
                    // h^e = -(c_1 h^{e-1} + ... + c_{n+1} h^{e-n-1})
                    for j in 1..=n + 1 {
                        let c = &spec.relation[j - 1];
                        if c.is_empty() {
                            continue;
                        }
                        for (mono, value) in spec.base_mul(&top, c) {
                            accumulate(&mut wide[e - j], mono, -value);
                        }
                    }
                }
            }
            wide.truncate(n + 1);
        }
        CohClass {
            spec: spec.clone(),
            coeffs: wide,
        }
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_empty())
    }

    /// The base polynomial multiplying `h^k`.
    pub fn h_coefficient(&self, k: usize) -> Option<&BasePoly> {
        self.coeffs.get(k)
    }

    /// All nonzero terms as `(h exponent, base monomial, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Monomial, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(k, poly)| poly.iter().map(move |(m, v)| (k as u32, m, v)))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().map(|c| c.len()).sum()
    }

    /// The degree-zero (scalar) part.
    pub fn constant_part(&self) -> Rational {
        self.coeffs[0]
            .get(&Monomial::one(self.spec.num_generators()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_nilpotent(&self) -> bool {
        self.constant_part().is_zero()
    }

    /// `Some(r)` when the class is the scalar `r`.
    pub fn as_rational(&self) -> Option<Rational> {
        let mut terms = self.terms();
        match (terms.next(), terms.next()) {
            (None, _) => Some(Rational::zero()),
            (Some((0, m, v)), None) if m.is_one() => Some(v.clone()),
            _ => None,
        }
    }

    /// `Some((k, r))` when the class is `r · h^k` (zero gives `None`).
    pub fn as_h_monomial(&self) -> Option<(u32, Rational)> {
        let mut terms = self.terms();
        match (terms.next(), terms.next()) {
            (Some((k, m, v)), None) if m.is_one() => Some((k, v.clone())),
            _ => None,
        }
    }

    /// Cohomological degrees present (h has degree one).
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms()
            .map(|(k, m, _)| k + self.spec.monomial_degree(m))
            .collect()
    }

    pub fn is_homogeneous_of(&self, degree: u32) -> bool {
        self.terms()
            .all(|(k, m, _)| k + self.spec.monomial_degree(m) == degree)
    }

    /// Fiber integration: the coefficient of `h^n`, as a base class.
    pub fn integrate(&self) -> CohClass {
        Self::from_base(&self.spec, self.coeffs[self.spec.n].clone())
    }

    /// Fiber integration for classes whose push-forward is a scalar.
    pub fn integrate_rational(&self) -> Result<Rational> {
        self.integrate()
            .as_rational()
            .ok_or(Error::ModeMismatch("scalar-valued (absolute)"))
    }

    /// `r` with `self == r · other`, if one exists.
    pub fn ratio_to(&self, other: &CohClass) -> Option<Rational> {
        if !RingSpec::same(&self.spec, &other.spec) {
            return None;
        }
        let (k, mono, value) = match other.terms().next() {
            Some(t) => t,
            None => {
                return if self.is_zero() {
                    Some(Rational::zero())
                } else {
                    None
                }
            }
        };
        let here = self.coeffs[k as usize]
            .get(mono)
            .cloned()
            .unwrap_or_default();
        let r = here.checked_div(value).ok()?;
        if &other.scale(&r) == self {
            Some(r)
        } else {
            None
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero(&self.spec);
        }
        CohClass {
            spec: self.spec.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|p| p.iter().map(|(m, v)| (m.clone(), v * r)).collect())
                .collect(),
        }
    }

    pub fn checked_add(&self, rhs: &CohClass) -> Result<Self> {
        self.combine(rhs, &Rational::one())
    }

    pub fn checked_sub(&self, rhs: &CohClass) -> Result<Self> {
        self.combine(rhs, &-Rational::one())
    }

    fn combine(&self, rhs: &CohClass, sign: &Rational) -> Result<Self> {
        if !RingSpec::same(&self.spec, &rhs.spec) {
            return Err(Error::SpecMismatch);
        }
        let mut out = self.clone();
        for (k, poly) in rhs.coeffs.iter().enumerate() {
            for (m, v) in poly {
                accumulate(&mut out.coeffs[k], m.clone(), v * sign);
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &CohClass) -> Result<Self> {
        if !RingSpec::same(&self.spec, &rhs.spec) {
            return Err(Error::SpecMismatch);
        }
        let n = self.spec.n;
        let relative = self.spec.is_relative();
        let width = if relative { 2 * n + 1 } else { n + 1 };
        let mut wide: Vec<BasePoly> = vec![BasePoly::new(); width];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_empty() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_empty() || (!relative && i + j > n) {
                    continue;
                }
                for (mono, value) in self.spec.base_mul(a, b) {
                    accumulate(&mut wide[i + j], mono, value);
                }
            }
        }
        Ok(Self::reduce(&self.spec, wide))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.spec);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    /// Panics if the operands live in different rings.
    fn add(self, rhs: &CohClass) -> CohClass {
        self.checked_add(rhs).expect("CohClass + CohClass")
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        self.checked_sub(rhs).expect("CohClass - CohClass")
    }
}

impl Mul for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        self.checked_mul(rhs).expect("CohClass * CohClass")
    }
}

impl Add for CohClass {
    type Output = CohClass;
    fn add(self, rhs: CohClass) -> CohClass {
        &self + &rhs
    }
}

impl Sub for CohClass {
    type Output = CohClass;
    fn sub(self, rhs: CohClass) -> CohClass {
        &self - &rhs
    }
}

impl Mul for CohClass {
    type Output = CohClass;
    fn mul(self, rhs: CohClass) -> CohClass {
        &self * &rhs
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        self.scale(&-Rational::one())
    }
}

impl Neg for CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        -&self
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.terms().collect();
        // ascending in h, base monomials in descending order
        terms.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(a.1)));
        let mut pieces = Vec::new();
        for (k, mono, value) in terms {
            let mut factors = Vec::new();
            let base = self.spec.format_monomial(mono);
            if !base.is_empty() {
                factors.push(base);
            }
            match k {
                0 => {}
                1 => factors.push("h".to_string()),
                _ => factors.push(format!("h^{k}")),
            }
            pieces.push(format_term(value, &factors.join("*")));
        }
        write_sum(f, &pieces)
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn format_term(value: &Rational, factors: &str) -> String {
    if factors.is_empty() {
        value.to_string()
    } else if value.is_one() {
        factors.to_string()
    } else if (-value).is_one() {
        format!("-{factors}")
    } else {
        format!("{value}*{factors}")
    }
}

pub(crate) fn write_sum(f: &mut fmt::Formatter<'_>, pieces: &[String]) -> fmt::Result {
    if pieces.is_empty() {
        return write!(f, "0");
    }
    for (i, p) in pieces.iter().enumerate() {
        match (i, p.strip_prefix('-')) {
            (0, _) => write!(f, "{p}")?,
            (_, Some(rest)) => write!(f, " - {rest}")?,
            (_, None) => write!(f, " + {p}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn poly(spec: &Arc<RingSpec>, coeffs: &[i64]) -> CohClass {
        CohClass::from_terms(
            spec,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (k as u32, Monomial::one(0), r(c))),
        )
        .unwrap()
    }

    #[test]
    fn truncation_kills_top_power() {
        let spec = RingSpec::absolute(4);
        let h = CohClass::h(&spec);
        assert!((&CohClass::h_pow(&spec, 4) * &h).is_zero());
        assert!(CohClass::h_pow(&spec, 9).is_zero());
    }

    #[test]
    fn identity_and_geometric_inverse() {
        let spec = RingSpec::absolute(4);
        let c = poly(&spec, &[3, 0, -2, 5]);
        assert_eq!(&CohClass::one(&spec) * &c, c);
        let a = poly(&spec, &[1, 1]);
        let b = poly(&spec, &[1, -1, 1, -1, 1]);
        assert_eq!(&a * &b, CohClass::one(&spec));
    }

    #[test]
    fn integration_extracts_top_coefficient() {
        let spec = RingSpec::absolute(4);
        assert_eq!(
            CohClass::h_pow(&spec, 4).integrate_rational().unwrap(),
            r(1)
        );
        assert_eq!(
            CohClass::h_pow(&spec, 3).integrate_rational().unwrap(),
            r(0)
        );
        let c = poly(&spec, &[0, 0, 0, 7, 2875]);
        assert_eq!(c.integrate_rational().unwrap(), r(2875));
    }

    #[test]
    fn mismatched_specs_are_rejected() {
        let a = CohClass::h(&RingSpec::absolute(3));
        let b = CohClass::h(&RingSpec::absolute(4));
        assert_eq!(a.checked_mul(&b), Err(Error::SpecMismatch));
        assert_eq!(a.checked_add(&b), Err(Error::SpecMismatch));
    }

    #[test]
    fn display() {
        let spec = RingSpec::absolute(4);
        assert_eq!(poly(&spec, &[0, 1]).to_string(), "h");
        assert_eq!(poly(&spec, &[1, -1, 0, 3]).to_string(), "1 - h + 3*h^3");
        assert_eq!(CohClass::zero(&spec).to_string(), "0");
    }

    #[test]
    fn relative_relation_reduces_h() {
        // rank 2 bundle with c_1 = x, c_2 = 0: h^2 = -x h
        let gens = vec![Generator {
            name: "x".into(),
            degree: 1,
        }];
        let c1 = BasePoly::from([(Monomial(vec![1]), r(1))]);
        let spec = RingSpec::relative(1, gens, 3, vec![c1]).unwrap();
        let h = CohClass::h(&spec);
        let x = CohClass::generator(&spec, 0).unwrap();
        assert_eq!(&h * &h, -(&x * &h));
        // h^4 = -x^3 h
        assert_eq!(h.pow(4), -(&x.pow(3) * &h));
        assert!(h.pow(5).is_zero());
        assert_eq!((&h * &h).integrate(), -x);
    }

    #[test]
    fn ratio() {
        let spec = RingSpec::absolute(4);
        let a = poly(&spec, &[0, 0, 6]);
        let b = poly(&spec, &[0, 0, 4]);
        assert_eq!(a.ratio_to(&b), Some(Rational::new(3, 2)));
        assert_eq!(poly(&spec, &[0, 1, 6]).ratio_to(&b), None);
        assert_eq!(CohClass::zero(&spec).ratio_to(&b), Some(r(0)));
    }
}
