//! Hypergeometric Laurent polynomials `φ_d` and the closed-form one-point
//! correlators of projective space and Fano complete intersections.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::ring::{CohClass, RingSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    /// `Σ l_i < n`
    FanoIndexGe2,
    /// `Σ l_i = n`
    FanoIndexOne,
    /// `Σ l_i = n + 1`
    CalabiYau,
    /// `Σ l_i > n + 1`
    GeneralType,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::FanoIndexGe2 => "Fano (index >= 2)",
            Classification::FanoIndexOne => "Fano (index 1)",
            Classification::CalabiYau => "Calabi-Yau",
            Classification::GeneralType => "general type",
        })
    }
}

/// A complete intersection of type `(l_1, ..., l_m)` in `P^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CIModel {
    n: usize,
    degrees: Vec<u32>,
    classification: Classification,
    spec: Arc<RingSpec>,
}

impl CIModel {
    pub fn classify(n: usize, degrees: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("ambient dimension must be >= 1".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidModel(
                "hypersurface degrees must be >= 1".into(),
            ));
        }
        let sum: u32 = degrees.iter().sum();
        let n32 = n as u32;
        let classification = match sum {
            s if s < n32 => Classification::FanoIndexGe2,
            s if s == n32 => Classification::FanoIndexOne,
            s if s == n32 + 1 => Classification::CalabiYau,
            _ => Classification::GeneralType,
        };
        Ok(CIModel {
            n,
            degrees: degrees.to_vec(),
            classification,
            spec: RingSpec::absolute(n),
        })
    }

    /// The quintic threefold in `P^4`.
    pub fn quintic() -> Self {
        Self::classify(4, &[5]).expect("valid model")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn m(&self) -> usize {
        self.degrees.len()
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn degree_sum(&self) -> u32 {
        self.degrees.iter().sum()
    }

    /// `∏ l_i`
    pub fn degree_product(&self) -> Rational {
        self.degrees.iter().map(|&l| Rational::from(l)).product()
    }

    /// `∏ l_i!`
    pub fn factorial_product(&self) -> Rational {
        self.degrees
            .iter()
            .map(|&l| Rational::factorial(l))
            .product()
    }

    /// The class `[S] = (∏ l_i) h^m`.
    pub fn fundamental_class(&self) -> CohClass {
        CohClass::h_pow(&self.spec, self.m() as u32).scale(&self.degree_product())
    }

    pub(crate) fn reject_general_type(&self) -> Result<()> {
        if self.classification == Classification::GeneralType {
            Err(Error::GeneralType {
                n: self.n,
                sum: self.degree_sum(),
            })
        } else {
            Ok(())
        }
    }

    pub(crate) fn require(&self, expected: Classification) -> Result<()> {
        self.reject_general_type()?;
        if self.classification != expected {
            return Err(Error::WrongClassification {
                expected,
                actual: self.classification,
            });
        }
        Ok(())
    }
}

/// `∏_i ∏_{k=0}^{d l_i} (l_i h + k t)`.
pub(crate) fn phi_numerator(spec: &Arc<RingSpec>, degrees: &[u32], d: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one(spec);
    for &l in degrees {
        let lr = Rational::from(l);
        for k in 0..=d * l {
            acc = &acc * &LaurentPoly::linear(spec, &lr, &Rational::from(k));
        }
    }
    acc
}

/// `∏_{k=1}^{d} (h + k t)^{n+1}`.
pub(crate) fn pn_euler(spec: &Arc<RingSpec>, d: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one(spec);
    let one = Rational::one();
    for k in 1..=d {
        let factor = LaurentPoly::linear(spec, &one, &Rational::from(k));
        acc = &acc * &factor.pow(spec.n() as u32 + 1);
    }
    acc
}

/// `φ_d = ∏_i ∏_{k=0}^{d l_i}(l_i h + k t) / ∏_{k=1}^d (h + k t)^{n+1}`,
/// expanded exactly in the truncated ring.
pub fn phi(model: &CIModel, d: u32) -> LaurentPoly {
    let numerator = phi_numerator(&model.spec, &model.degrees, d);
    let inverse = pn_euler(&model.spec, d)
        .invert_unit()
        .expect("equivariant Euler class is a unit");
    &numerator * &inverse
}

/// `φ_0, ..., φ_max_d`.
pub fn phi_table(model: &CIModel, max_d: u32) -> Vec<LaurentPoly> {
    (0..=max_d).map(|d| phi(model, d)).collect()
}

/// One-point correlator of `P^n` itself: `1 / ∏_{k=1}^d (h + k t)^{n+1}`.
pub fn pn_one_point(n: usize, d: u32) -> LaurentPoly {
    let spec = RingSpec::absolute(n);
    pn_euler(&spec, d)
        .invert_unit()
        .expect("equivariant Euler class is a unit")
}

/// Correlator of a Fano complete intersection of index at least two: `φ_d`.
pub fn fano_ge2_correlator(model: &CIModel, d: u32) -> Result<LaurentPoly> {
    model.require(Classification::FanoIndexGe2)?;
    if d == 0 {
        return Ok(LaurentPoly::from_class(model.fundamental_class()));
    }
    Ok(phi(model, d))
}

/// Correlator of a Fano complete intersection of index one:
/// `Σ_{r=0}^d (-∏ l_i!)^r φ_{d-r} / (r! t^r)`.
pub fn fano_index1_correlator(model: &CIModel, d: u32) -> Result<LaurentPoly> {
    model.require(Classification::FanoIndexOne)?;
    if d == 0 {
        return Ok(LaurentPoly::from_class(model.fundamental_class()));
    }
    let base = -model.factorial_product();
    let mut acc = LaurentPoly::zero(&model.spec);
    for r in 0..=d {
        let weight = &base.pow(r) / &Rational::factorial(r);
        let term = phi(model, d - r).scale(&weight).shift(-(r as i32));
        acc = &acc + &term;
    }
    Ok(acc)
}

/// `∫ h^b · (coefficient of t^{-2-a})` as a base class (a scalar in the
/// absolute case).
pub fn one_point_class(correlator: &LaurentPoly, a: u32, b: u32) -> CohClass {
    let spec = correlator.spec();
    let coeff = correlator.coeff(-2 - a as i32);
    (&CohClass::h_pow(spec, b) * &coeff).integrate()
}

/// `∫ ψ^a ∪ e^*(h^b) ∪ [S]_d`, read off a correlator.
pub fn one_point_invariant(correlator: &LaurentPoly, a: u32, b: u32) -> Result<Rational> {
    one_point_class(correlator, a, b)
        .as_rational()
        .ok_or(Error::ModeMismatch("scalar-valued (absolute)"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(spec: &Arc<RingSpec>, k: u32) -> CohClass {
        CohClass::h_pow(spec, k)
    }

    #[test]
    fn classification_examples() {
        use Classification::*;
        assert_eq!(
            CIModel::classify(4, &[5]).unwrap().classification(),
            CalabiYau
        );
        assert_eq!(
            CIModel::classify(3, &[3]).unwrap().classification(),
            FanoIndexOne
        );
        assert_eq!(
            CIModel::classify(4, &[1, 1]).unwrap().classification(),
            FanoIndexGe2
        );
        assert_eq!(
            CIModel::classify(4, &[6]).unwrap().classification(),
            GeneralType
        );
        assert_eq!(
            CIModel::classify(2, &[]).unwrap().classification(),
            FanoIndexGe2
        );
        assert!(CIModel::classify(0, &[1]).is_err());
        assert!(CIModel::classify(3, &[0]).is_err());
    }

    #[test]
    fn phi_zero_is_fundamental_class() {
        let q = CIModel::quintic();
        assert_eq!(
            phi(&q, 0),
            LaurentPoly::from_class(h(q.spec(), 1).scale(&5.into()))
        );
    }

    #[test]
    fn phi_hyperplane_in_p3() {
        let m = CIModel::classify(3, &[1]).unwrap();
        let s = m.spec();
        let expected = LaurentPoly::from_terms(
            s,
            [
                (-3, h(s, 1)),
                (-4, h(s, 2).scale(&(-3).into())),
                (-5, h(s, 3).scale(&6.into())),
            ],
        )
        .unwrap();
        assert_eq!(phi(&m, 1), expected);
        assert_eq!(fano_ge2_correlator(&m, 1).unwrap(), expected);
    }

    #[test]
    fn quintic_phi1_constant_term() {
        let q = CIModel::quintic();
        assert_eq!(phi(&q, 1).coeff(0), h(q.spec(), 1).scale(&600.into()));
    }

    #[test]
    fn pn_one_point_examples() {
        let p = pn_one_point(1, 1);
        let s = p.spec().clone();
        let expected =
            LaurentPoly::from_terms(&s, [(-2, h(&s, 0)), (-3, h(&s, 1).scale(&(-2).into()))])
                .unwrap();
        assert_eq!(p, expected);
        let p4 = pn_one_point(4, 1);
        assert_eq!(p4.max_exponent(), Some(-5));
        assert!(p4.coeff(-2).is_zero());
        let m0 = CIModel::classify(4, &[]).unwrap();
        assert_eq!(fano_ge2_correlator(&m0, 2).unwrap(), pn_one_point(4, 2));
    }

    #[test]
    fn two_hyperplanes_in_p4_simplify() {
        let m = CIModel::classify(4, &[1, 1]).unwrap();
        let s = m.spec();
        let cube = LaurentPoly::linear(s, &1.into(), &1.into()).pow(3);
        let expected = cube.invert_unit().unwrap().mul_class(&h(s, 2));
        assert_eq!(fano_ge2_correlator(&m, 1).unwrap(), expected);
    }

    #[test]
    fn index_one_degree_one() {
        let cubic = CIModel::classify(3, &[3]).unwrap();
        let s = cubic.spec();
        let expected = &phi(&cubic, 1) - &LaurentPoly::monomial(h(s, 1).scale(&18.into()), -1);
        assert_eq!(fano_index1_correlator(&cubic, 1).unwrap(), expected);

        let m = CIModel::classify(4, &[2, 2]).unwrap();
        let expected = &phi(&m, 1) - &phi(&m, 0).scale(&4.into()).shift(-1);
        assert_eq!(fano_index1_correlator(&m, 1).unwrap(), expected);
        assert_eq!(
            fano_index1_correlator(&m, 0).unwrap(),
            LaurentPoly::from_class(m.fundamental_class())
        );
    }

    #[test]
    fn classification_is_enforced() {
        let q = CIModel::quintic();
        assert!(matches!(
            fano_ge2_correlator(&q, 1),
            Err(Error::WrongClassification { .. })
        ));
        let gt = CIModel::classify(4, &[6]).unwrap();
        let err = fano_index1_correlator(&gt, 1).unwrap_err();
        assert!(err.to_string().contains("general type: l_1+...+l_m > n+1"));
    }

    #[test]
    fn invariant_outside_range_is_zero() {
        let m = CIModel::classify(3, &[1]).unwrap();
        let c = phi(&m, 1);
        assert_eq!(one_point_invariant(&c, 40, 0).unwrap(), Rational::zero());
        // coefficient of t^-3 is h, times h^2 integrates to 1
        assert_eq!(one_point_invariant(&c, 1, 2).unwrap(), Rational::one());
    }
}
