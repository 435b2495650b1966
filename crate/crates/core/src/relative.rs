//! Projective bundles `P(V) -> X` over a formal base.
//!
//! The base ring is generated by the Segre classes `s_1, ..., s_{n+1}` of the
//! rank `n+1` bundle `V` (which freely generate the characteristic classes of
//! such a bundle) and truncated above a cutoff degree standing in for
//! `dim X`. Chern classes come from `c(V) = 1 / s(V)`; Segre classes of index
//! above `n+1` are the polynomials forced by `c_j(V) = 0` for `j > n+1`.
//! The Chern roots never appear individually.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::correlators::phi_numerator;
use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::ring::{CohClass, Generator, RingSpec};
use crate::series::{QSeries, Series};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeModel {
    n: usize,
    base_cutoff: u32,
    degrees: Vec<u32>,
    spec: Arc<RingSpec>,
}

impl RelativeModel {
    /// Fiber `P^n` (so `V` has rank `n+1`), complete intersection of type
    /// `degrees`, base classes above degree `base_cutoff` discarded.
    pub fn new(n: usize, base_cutoff: u32, degrees: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("fiber dimension must be >= 1".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidModel(
                "hypersurface degrees must be >= 1".into(),
            ));
        }
        let rank = n as u32 + 1;
        let generators: Vec<Generator> = (1..=rank.min(base_cutoff))
            .map(|i| Generator {
                name: format!("s{i}"),
                degree: i,
            })
            .collect();
        let free = RingSpec::relative(n, generators.clone(), base_cutoff, Vec::new())?;
        // c = 1/s: c_j = -Σ_{i=1}^{j} s_i c_{j-i}
        let segre = |i: u32| -> CohClass {
            if i as usize <= generators.len() {
                CohClass::generator(&free, i as usize - 1).expect("generator exists")
            } else {
                CohClass::zero(&free)
            }
        };
        let mut chern = vec![CohClass::one(&free)];
        for j in 1..=rank {
            let mut c = CohClass::zero(&free);
            for i in 1..=j {
                c = &c - &(&segre(i) * &chern[(j - i) as usize]);
            }
            chern.push(c);
        }
        let relation = chern[1..]
            .iter()
            .map(|c| c.h_coefficient(0).cloned().unwrap_or_default())
            .collect();
        let spec = RingSpec::relative(n, generators, base_cutoff, relation)?;
        Ok(RelativeModel {
            n,
            base_cutoff,
            degrees: degrees.to_vec(),
            spec,
        })
    }

    /// `V` trivial: no base generators, every Chern class vanishes.
    pub fn trivial_bundle(n: usize, base_cutoff: u32, degrees: &[u32]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModel("fiber dimension must be >= 1".into()));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidModel(
                "hypersurface degrees must be >= 1".into(),
            ));
        }
        Ok(RelativeModel {
            n,
            base_cutoff,
            degrees: degrees.to_vec(),
            spec: RingSpec::relative(n, Vec::new(), base_cutoff, Vec::new())?,
        })
    }

    /// `n+1` sections of `O(1)`.
    pub fn linear_calabi_yau(n: usize, base_cutoff: u32) -> Result<Self> {
        Self::new(n, base_cutoff, &vec![1; n + 1])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base_cutoff(&self) -> u32 {
        self.base_cutoff
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn m(&self) -> usize {
        self.degrees.len()
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn is_linear_calabi_yau(&self) -> bool {
        self.m() == self.n + 1 && self.degrees.iter().all(|&l| l == 1)
    }

    /// `c_j(V)` pulled back to `P(V)`.
    pub fn chern(&self, j: usize) -> CohClass {
        CohClass::from_base(&self.spec, self.spec.chern(j))
    }

    /// `s_k(V)`; `s_0 = 1` and negative indices give zero.
    pub fn segre(&self, k: i64) -> CohClass {
        let rank = self.n as i64 + 1;
        match k {
            k if k < 0 => CohClass::zero(&self.spec),
            0 => CohClass::one(&self.spec),
            k if k <= rank => {
                if k as usize <= self.spec.num_generators() {
                    CohClass::generator(&self.spec, k as usize - 1).expect("generator exists")
                } else {
                    CohClass::zero(&self.spec)
                }
            }
            k if k > self.base_cutoff as i64 => CohClass::zero(&self.spec),
            k => {
                let mut acc = CohClass::zero(&self.spec);
                for j in 1..=rank {
                    acc = &acc - &(&self.chern(j as usize) * &self.segre(k - j));
                }
                acc
            }
        }
    }
}

/// `∏_{k=1}^d ∏_{j=1}^{n+1} (h + α_j + k t) = ∏_k Σ_j c_j(V) (h + k t)^{n+1-j}`.
pub fn relative_euler(model: &RelativeModel, d: u32) -> LaurentPoly {
    let spec = model.spec();
    let rank = model.n as u32 + 1;
    let mut acc = LaurentPoly::one(spec);
    for k in 1..=d {
        let base = LaurentPoly::linear(spec, &Rational::one(), &Rational::from(k));
        let mut factor = LaurentPoly::zero(spec);
        for j in 0..=rank {
            let c = model.chern(j as usize);
            if !c.is_zero() {
                factor = &factor + &base.pow(rank - j).mul_class(&c);
            }
        }
        acc = &acc * &factor;
    }
    acc
}

/// `φ_d` with the relative Euler class in the denominator.
pub fn relative_phi(model: &RelativeModel, d: u32) -> LaurentPoly {
    let numerator = phi_numerator(model.spec(), &model.degrees, d);
    let inverse = relative_euler(model, d)
        .invert_unit()
        .expect("relative Euler class is a unit");
    &numerator * &inverse
}

/// A symmetric polynomial `σ(q_1, q_2)` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertInput {
    coeffs: BTreeMap<(u32, u32), Rational>,
}

impl SchubertInput {
    /// `coeffs[(i, j)]` multiplies `q_1^i q_2^j`.
    pub fn new(coeffs: BTreeMap<(u32, u32), Rational>) -> Result<Self> {
        let coeffs: BTreeMap<_, _> = coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        let symmetric = coeffs
            .iter()
            .all(|(&(i, j), v)| coeffs.get(&(j, i)) == Some(v));
        if !symmetric {
            return Err(Error::NonSymmetric);
        }
        Ok(SchubertInput { coeffs })
    }

    pub fn one() -> Self {
        SchubertInput {
            coeffs: BTreeMap::from([((0, 0), Rational::one())]),
        }
    }

    /// `(q_1 q_2)^m`, the class of `m` linear sections.
    pub fn top_power(m: u32) -> Self {
        SchubertInput {
            coeffs: BTreeMap::from([((m, m), Rational::one())]),
        }
    }

    /// `σ(h, h + t)`.
    pub fn evaluate(&self, spec: &Arc<RingSpec>) -> LaurentPoly {
        let h = LaurentPoly::h(spec);
        let h_plus_t = LaurentPoly::linear(spec, &Rational::one(), &Rational::one());
        let mut acc = LaurentPoly::zero(spec);
        for (&(i, j), v) in &self.coeffs {
            acc = &acc + &(&h.pow(i) * &h_plus_t.pow(j)).scale(v);
        }
        acc
    }
}

/// Main term `σ(h, h+t) / ∏_j (h + α_j + t)` of the degree-one push-forward.
///
/// Only this term is certified; the true push-forward differs from it by
/// a boundary correction divided by `t`.
pub fn relative_schubert_leading(model: &RelativeModel, sigma: &SchubertInput) -> LaurentPoly {
    let inverse = relative_euler(model, 1)
        .invert_unit()
        .expect("relative Euler class is a unit");
    &sigma.evaluate(model.spec()) * &inverse
}

/// Push-forward to the base of `[S]_1 ∪ e^*h` for `m` linear sections:
/// the `t^{-2}` coefficient of the Porteous main term, times `h`,
/// integrated over the fiber.
pub fn porteous_lines(model: &RelativeModel) -> Result<CohClass> {
    if model.degrees.iter().any(|&l| l != 1) {
        return Err(Error::InvalidModel(
            "Porteous formula needs sections of O(1)".into(),
        ));
    }
    if model.m() > model.n + 1 {
        return Err(Error::OutOfRange(format!(
            "{} linear sections exceed the rank {}",
            model.m(),
            model.n + 1
        )));
    }
    let main = relative_schubert_leading(model, &SchubertInput::top_power(model.m() as u32));
    let coefficient = main.coeff(-2);
    Ok((&CohClass::h(model.spec()) * &coefficient).integrate())
}

/// The classical formula `s_{m-n+1}^2 - s_{m-n} s_{m-n+2}`.
pub fn porteous_formula(model: &RelativeModel) -> CohClass {
    let k = model.m() as i64 - model.n as i64;
    &model.segre(k + 1).pow(2) - &(&model.segre(k) * &model.segre(k + 2))
}

/// `λ_e(t) = a_e t + b_e` with `a_e ∈ Q` and `b_e` a degree-one base class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeLambda {
    pub t_coeff: Rational,
    pub constant: CohClass,
}

impl RelativeLambda {
    /// `λ_e(t) / t = a_e + b_e t^{-1}`.
    fn over_t(&self) -> LaurentPoly {
        let spec = self.constant.spec();
        &LaurentPoly::constant(spec, self.t_coeff.clone())
            + &LaurentPoly::monomial(self.constant.clone(), -1)
    }
}

fn require_linear_cy(model: &RelativeModel) -> Result<()> {
    if !model.is_linear_calabi_yau() {
        return Err(Error::InvalidModel(
            "linear Calabi-Yau needs n+1 sections of O(1)".into(),
        ));
    }
    if model.base_cutoff == 0 {
        return Err(Error::Degenerate(
            "base cutoff 0 leaves no Segre classes".into(),
        ));
    }
    Ok(())
}

/// `λ_e(t) = -(t + s_1) / e`.
pub fn linear_cy_lambda(model: &RelativeModel, e: u32) -> Result<RelativeLambda> {
    require_linear_cy(model)?;
    if e == 0 {
        return Err(Error::OutOfRange("linear forms start at degree 1".into()));
    }
    let inv = Rational::new(-1, e as i64);
    Ok(RelativeLambda {
        t_coeff: inv.clone(),
        constant: model.segre(1).scale(&inv),
    })
}

fn phi_series(model: &RelativeModel, max_d: usize) -> QSeries {
    let coeffs = (0..=max_d as u32).map(|d| relative_phi(model, d)).collect();
    Series::from_coeffs(model.spec(), max_d, coeffs)
}

/// Solves `λ_1..λ_E` from `Φ(q) · exp(Σ_e q^e λ_e(t)/t)`, assuming `λ_e`
/// has no `h`: at each `q^e` the `t^0` and `t^{-1}` coefficients must vanish.
pub fn derive_linear_cy_lambdas(model: &RelativeModel, max_e: u32) -> Result<Vec<RelativeLambda>> {
    require_linear_cy(model)?;
    let spec = model.spec();
    let top = CohClass::h_pow(spec, model.n as u32 + 1);
    let s1_top = &model.segre(1) * &top;
    if top.is_zero() || s1_top.is_zero() {
        return Err(Error::Degenerate(
            "h^{n+1} s_1 vanishes; raise the base cutoff".into(),
        ));
    }
    let mut lambdas: Vec<RelativeLambda> = Vec::new();
    for e in 1..=max_e as usize {
        let phi = phi_series(model, e);
        let mut exponent = vec![LaurentPoly::zero(spec)];
        exponent.extend(lambdas.iter().map(RelativeLambda::over_t));
        let known = Series::from_coeffs(spec, e, exponent).exp()?;
        let error = phi.mul(&known)?.coeff(e).clone();
        let a = error.coeff(0).ratio_to(&top).ok_or(Error::ErrorShape {
            exponent: 0,
            expected: "h^{n+1}".into(),
        })?;
        let b = error.coeff(-1).ratio_to(&s1_top).ok_or(Error::ErrorShape {
            exponent: -1,
            expected: "s1*h^{n+1}".into(),
        })?;
        lambdas.push(RelativeLambda {
            t_coeff: -a,
            constant: model.segre(1).scale(&-b),
        });
    }
    Ok(lambdas)
}

/// `(Σ_e q^e φ_e) (1 - q) exp((s_1/t) log(1 - q))` modulo `q^{D+1}`: the
/// generating function of the correlators once `λ_e = -(t + s_1)/e`.
pub fn linear_cy_series(model: &RelativeModel, max_d: u32) -> Result<QSeries> {
    require_linear_cy(model)?;
    let spec = model.spec();
    let d = max_d as usize;
    let one_minus_q = Series::from_coeffs(
        spec,
        d,
        vec![
            LaurentPoly::one(spec),
            LaurentPoly::constant(spec, -Rational::one()),
        ],
    );
    let s1_over_t = LaurentPoly::monomial(model.segre(1), -1);
    let twist = one_minus_q.log()?.mul_coeff(&s1_over_t).exp()?;
    phi_series(model, d).mul(&one_minus_q)?.mul(&twist)
}

/// The `t^{-2}` coefficient at `q^d`, i.e. `e_*([S]_d)`; equals
/// `(1/d^2) h^{n+1} (s_2 - s_1 h)`.
pub fn linear_cy_pushforward(model: &RelativeModel, d: u32, max_d: u32) -> Result<CohClass> {
    if max_d < d {
        return Err(Error::OutOfRange(format!(
            "truncation {max_d} below degree {d}"
        )));
    }
    Ok(linear_cy_series(model, max_d)?.coeff(d as usize).coeff(-2))
}

/// `(1/d^2) h^{n+1} (s_2 - s_1 h)`.
pub fn linear_cy_expected_pushforward(model: &RelativeModel, d: u32) -> CohClass {
    let spec = model.spec();
    let top = CohClass::h_pow(spec, model.n as u32 + 1);
    let bracket = &model.segre(2) - &(&model.segre(1) * &CohClass::h(spec));
    (&top * &bracket).scale(&Rational::new(1, (d * d) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::{phi, CIModel};

    #[test]
    fn segre_chern_duality() {
        let model = RelativeModel::new(2, 6, &[1]).unwrap();
        // Σ_j c_j s_{k-j} = 0 for 1 <= k <= cutoff
        for k in 1..=6i64 {
            let mut acc = CohClass::zero(model.spec());
            for j in 0..=k {
                acc = &acc + &(&model.chern(j as usize) * &model.segre(k - j));
            }
            assert!(acc.is_zero(), "degree {k}: {acc}");
        }
        assert_eq!(model.chern(1), -model.segre(1));
        assert!(model.chern(4).is_zero());
    }

    #[test]
    fn euler_is_homogeneous() {
        let model = RelativeModel::new(2, 4, &[1]).unwrap();
        for d in 1..=3 {
            let e = relative_euler(&model, d);
            for (j, c) in e.terms() {
                assert!(c.is_homogeneous_of(3 * d - j as u32), "t^{j}: {c}");
            }
        }
    }

    #[test]
    fn degree_one_inverse_in_segre_classes() {
        let model = RelativeModel::new(2, 4, &[]).unwrap();
        let spec = model.spec();
        let inv_base = LaurentPoly::linear(spec, &1.into(), &1.into())
            .invert_unit()
            .unwrap();
        let mut expected = LaurentPoly::zero(spec);
        for i in 0..=4 {
            let term = inv_base.pow(3 + i as u32).mul_class(&model.segre(i));
            expected = &expected + &term;
        }
        assert_eq!(relative_euler(&model, 1).invert_unit().unwrap(), expected);
    }

    #[test]
    fn zero_cutoff_reduces_to_absolute() {
        let model = RelativeModel::new(3, 0, &[2, 1]).unwrap();
        let absolute = CIModel::classify(3, &[2, 1]).unwrap();
        for d in 0..=2 {
            let rel = relative_phi(&model, d);
            let abs = phi(&absolute, d);
            let as_strings: Vec<_> = rel.terms().map(|(e, c)| (e, c.to_string())).collect();
            let expected: Vec<_> = abs.terms().map(|(e, c)| (e, c.to_string())).collect();
            assert_eq!(as_strings, expected);
        }
    }

    #[test]
    fn schubert_symmetry_is_checked() {
        let bad = BTreeMap::from([((1, 0), Rational::one())]);
        assert_eq!(SchubertInput::new(bad), Err(Error::NonSymmetric));
        let good = BTreeMap::from([((1, 0), Rational::one()), ((0, 1), Rational::one())]);
        assert!(SchubertInput::new(good).is_ok());
    }

    #[test]
    fn porteous_rejects_bad_shapes() {
        assert!(porteous_lines(&RelativeModel::new(2, 4, &[2]).unwrap()).is_err());
        assert!(matches!(
            porteous_lines(&RelativeModel::new(1, 4, &[1, 1, 1]).unwrap()),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn linear_lambda_values() {
        let model = RelativeModel::linear_calabi_yau(2, 3).unwrap();
        let l3 = linear_cy_lambda(&model, 3).unwrap();
        assert_eq!(l3.t_coeff, Rational::new(-1, 3));
        assert_eq!(l3.constant, model.segre(1).scale(&Rational::new(-1, 3)));
        assert!(linear_cy_lambda(&RelativeModel::new(2, 3, &[1]).unwrap(), 1).is_err());
    }
}
