//! Calabi–Yau correlators as sums over comb strata, with the linear forms
//! `λ_d = α_d h + β_d t` solved degree by degree from the requirement that
//! the correlator has no `t^{-1}` or `t^0` term.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::correlators::{
    fano_ge2_correlator, fano_index1_correlator, one_point_invariant, phi, phi_table, CIModel,
    Classification,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::ring::{CohClass, RingSpec};

/// A comb `0 <= d_1 < ... < d_{r+1} = d`: a handle of degree `d_1` with `r`
/// teeth of degrees `Δ_i = d_{i+1} - d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Comb {
    endpoints: Vec<u32>,
}

impl Comb {
    /// The comb whose endpoints below `d` are the set bits of `mask`.
    pub fn from_mask(d: u32, mask: u64) -> Self {
        let mut endpoints: Vec<u32> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        endpoints.push(d);
        Comb { endpoints }
    }

    pub fn from_endpoints(endpoints: Vec<u32>) -> Result<Self> {
        if endpoints.is_empty() || endpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::OutOfRange(format!(
                "comb endpoints must be strictly increasing: {endpoints:?}"
            )));
        }
        Ok(Comb { endpoints })
    }

    pub fn degree(&self) -> u32 {
        *self.endpoints.last().expect("nonempty")
    }

    pub fn endpoints(&self) -> &[u32] {
        &self.endpoints
    }

    /// Handle degree `d_1`.
    pub fn handle(&self) -> u32 {
        self.endpoints[0]
    }

    pub fn teeth(&self) -> usize {
        self.endpoints.len() - 1
    }

    pub fn deltas(&self) -> impl Iterator<Item = u32> + '_ {
        self.endpoints.windows(2).map(|w| w[1] - w[0])
    }

    /// The comb `{0 < d}` with a single tooth of full degree.
    pub fn is_simple(&self) -> bool {
        self.endpoints.len() == 2 && self.endpoints[0] == 0
    }
}

/// All `2^d` combs of degree `d`, ordered by the bitmask of endpoints below `d`.
pub fn enumerate_combs(d: u32) -> Vec<Comb> {
    assert!(d < 64, "comb degree {d} too large to enumerate");
    (0..1u64 << d)
        .map(|mask| Comb::from_mask(d, mask))
        .collect()
}

/// `λ(h, t) = α h + β t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LambdaForm {
    pub alpha: Rational,
    pub beta: Rational,
}

impl LambdaForm {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        LambdaForm { alpha, beta }
    }

    /// `λ(h + shift·t, t) = α h + (α·shift + β) t`.
    pub fn shifted(&self, spec: &Arc<RingSpec>, shift: u32) -> LaurentPoly {
        let tcoeff = &(&self.alpha * &Rational::from(shift)) + &self.beta;
        LaurentPoly::linear(spec, &self.alpha, &tcoeff)
    }
}

/// `φ_{d_1} · ∏_i λ_{Δ_i}(h + d_i t, t) / (r! t^r)` with `φ` taken from `phis`.
pub(crate) fn comb_term(
    phis: &[LaurentPoly],
    comb: &Comb,
    lambdas: &[LambdaForm],
) -> Result<LaurentPoly> {
    let mut acc = phis[comb.handle() as usize].clone();
    let spec = acc.spec().clone();
    for (i, delta) in comb.deltas().enumerate() {
        let lambda = lambdas
            .get(delta as usize - 1)
            .ok_or(Error::MissingLambda(delta))?;
        acc = &acc * &lambda.shifted(&spec, comb.endpoints[i]);
    }
    let r = comb.teeth() as u32;
    Ok(acc
        .scale(&Rational::factorial(r).recip()?)
        .shift(-(r as i32)))
}

/// One comb's contribution to the degree-`d` correlator.
///
/// `lambdas[k-1]` is `λ_k`; it must cover every tooth degree of `comb`.
pub fn cy_term(model: &CIModel, comb: &Comb, lambdas: &[LambdaForm]) -> Result<LaurentPoly> {
    let phis = phi_table(model, comb.handle());
    comb_term(&phis, comb, lambdas)
}

/// Sum of all comb terms of degree `d`, optionally skipping the simple comb.
fn comb_sum(
    phis: &[LaurentPoly],
    d: u32,
    lambdas: &[LambdaForm],
    skip_simple: bool,
    exec: Execution,
) -> Result<LaurentPoly> {
    let spec = phis[0].spec().clone();
    exec.try_sum(
        1u64 << d,
        LaurentPoly::zero(&spec),
        |mask| {
            let comb = Comb::from_mask(d, mask);
            if skip_simple && comb.is_simple() {
                Ok(LaurentPoly::zero(&spec))
            } else {
                comb_term(phis, &comb, lambdas)
            }
        },
        |a, b| &a + &b,
    )
}

/// Solves `λ_d` from the `t^{-1}` and `t^0` coefficients of the comb sum
/// without the simple comb: those must equal `-(∏ l_i) α_d h^{m+1}` and
/// `-(∏ l_i) β_d h^m` respectively.
fn lambda_from_errors(model: &CIModel, partial: &LaurentPoly) -> Result<LambdaForm> {
    let spec = model.spec();
    if let Some(top) = partial.max_exponent().filter(|&e| e > 0) {
        return Err(Error::ErrorShape {
            exponent: top,
            expected: "zero".into(),
        });
    }
    let m = model.m() as u32;
    let product = model.degree_product();
    let solve = |exponent: i32, h_power: u32| -> Result<Rational> {
        let target = CohClass::h_pow(spec, h_power).scale(&product);
        if target.is_zero() {
            return Err(Error::Degenerate(format!(
                "h^{h_power} vanishes in P^{}; the linear form is not determined",
                model.n()
            )));
        }
        partial
            .coeff(exponent)
            .ratio_to(&target)
            .map(|r| -r)
            .ok_or_else(|| Error::ErrorShape {
                exponent,
                expected: format!("h^{h_power}"),
            })
    };
    Ok(LambdaForm::new(solve(-1, m + 1)?, solve(0, m)?))
}

/// Independent read-off of `λ_d`: the simple-comb term `φ_0 λ_d / t` must be
/// `-(t^{-1} and t^0 part of the partial sum)`, and
/// `α_d t^{-1} = (1/∏l_i) ∫ h^{n-m-1} φ_0 λ_d / t`,
/// `β_d = (1/∏l_i) ∫ h^{n-m} φ_0 λ_d / t`.
fn lambda_by_integration(model: &CIModel, partial: &LaurentPoly) -> Result<LambdaForm> {
    let spec = model.spec();
    let (n, m) = (model.n() as u32, model.m() as u32);
    if m + 1 > n {
        return Err(Error::Degenerate(format!(
            "complete intersection of codimension {m} in P^{n} has dimension 0"
        )));
    }
    let simple = -&partial.restrict(-1..=0);
    let inv = model.degree_product().recip()?;
    let read = |h_power: u32, exponent: i32| -> Result<Rational> {
        let integrand = simple.mul_class(&CohClass::h_pow(spec, h_power));
        Ok(&integrand.coeff(exponent).integrate_rational()? * &inv)
    };
    Ok(LambdaForm::new(read(n - m - 1, -1)?, read(n - m, 0)?))
}

/// Correlators and linear forms of a Calabi–Yau model up to degree `max_d`.
#[derive(Clone, Debug)]
pub struct CySolution {
    pub model: CIModel,
    /// `φ_0 ..= φ_max_d`
    pub phis: Vec<LaurentPoly>,
    /// `lambdas[k-1] = λ_k`, from cancelling the error coefficients.
    pub lambdas: Vec<LambdaForm>,
    /// The same forms from the integral read-off; must equal `lambdas`.
    pub lambdas_read_off: Vec<LambdaForm>,
    /// `correlators[0] = [S]`, `correlators[d]` the degree-`d` correlator.
    pub correlators: Vec<LaurentPoly>,
}

impl CySolution {
    pub fn max_degree(&self) -> u32 {
        self.lambdas.len() as u32
    }

    pub fn correlator(&self, d: u32) -> &LaurentPoly {
        &self.correlators[d as usize]
    }
}

/// Runs the recursion for `d = 1..=max_d`. Comb terms for one degree are
/// summed with `exec`; the degree loop itself is sequential.
pub fn solve_calabi_yau(model: &CIModel, max_d: u32, exec: Execution) -> Result<CySolution> {
    model.require(Classification::CalabiYau)?;
    let degrees: Vec<u32> = (0..=max_d).collect();
    let phis = exec.map(&degrees, |&d| phi(model, d));
    let mut lambdas = Vec::with_capacity(max_d as usize);
    let mut read_off = Vec::with_capacity(max_d as usize);
    let mut correlators = vec![LaurentPoly::from_class(model.fundamental_class())];
    for d in 1..=max_d {
        let partial = comb_sum(&phis, d, &lambdas, true, exec)?;
        let lambda = lambda_from_errors(model, &partial)?;
        read_off.push(lambda_by_integration(model, &partial)?);
        lambdas.push(lambda);
        let simple = comb_term(&phis, &Comb::from_endpoints(vec![0, d])?, &lambdas)?;
        let full = &partial + &simple;
        if let Some(top) = full.max_exponent().filter(|&e| e >= -1) {
            return Err(Error::ErrorShape {
                exponent: top,
                expected: "zero after adding the simple comb".into(),
            });
        }
        correlators.push(full);
    }
    Ok(CySolution {
        model: model.clone(),
        phis,
        lambdas,
        lambdas_read_off: read_off,
        correlators,
    })
}

/// `λ_d`, given `λ_1 ..= λ_{d-1}`.
pub fn solve_lambda(
    model: &CIModel,
    d: u32,
    lambdas: &[LambdaForm],
    exec: Execution,
) -> Result<LambdaForm> {
    model.require(Classification::CalabiYau)?;
    if d == 0 {
        return Err(Error::OutOfRange("linear forms start at degree 1".into()));
    }
    if lambdas.len() + 1 < d as usize {
        return Err(Error::MissingLambda(lambdas.len() as u32 + 1));
    }
    let phis = phi_table(model, d);
    let partial = comb_sum(&phis, d, &lambdas[..d as usize - 1], true, exec)?;
    lambda_from_errors(model, &partial)
}

/// Full comb sum of degree `d` after solving all forms up to `d`.
pub fn cy_correlator(model: &CIModel, d: u32, exec: Execution) -> Result<LaurentPoly> {
    Ok(solve_calabi_yau(model, d, exec)?.correlators[d as usize].clone())
}

/// Degree-`d` correlator of any model that is not of general type: the
/// closed forms for Fano models, the comb recursion for Calabi–Yau ones.
pub fn correlator(model: &CIModel, d: u32, exec: Execution) -> Result<LaurentPoly> {
    match model.classification() {
        Classification::FanoIndexGe2 => fano_ge2_correlator(model, d),
        Classification::FanoIndexOne => fano_index1_correlator(model, d),
        Classification::CalabiYau => cy_correlator(model, d, exec),
        Classification::GeneralType => Err(Error::GeneralType {
            n: model.n(),
            sum: model.degree_sum(),
        }),
    }
}

/// Converts `n_d / d` into counts `N_d` of immersed curves via
/// `n_d / d = Σ_{k | d} N_{d/k} / k^3` (a degree-`d/k` curve covered `k` times).
pub fn aspinwall_morrison(n_over_d: &BTreeMap<u32, Rational>) -> Result<BTreeMap<u32, Rational>> {
    let mut counts = BTreeMap::new();
    for (&d, value) in n_over_d {
        if d == 0 {
            return Err(Error::OutOfRange("degree must be >= 1".into()));
        }
        let mut rest = value.clone();
        for e in (1..d).filter(|e| d % e == 0) {
            let n_e: &Rational = counts.get(&e).ok_or(Error::MissingDegree(e))?;
            let cover = Rational::from(d / e).pow(3);
            rest -= &(n_e / &cover);
        }
        counts.insert(d, rest);
    }
    Ok(counts)
}

/// One degree of a Calabi–Yau threefold computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreefoldRow {
    pub d: u32,
    /// Coefficient of `h^{m+2} t^{-2}`.
    pub n_d: Rational,
    /// Coefficient of `h^{m+3} t^{-3}`.
    pub m_d: Rational,
    /// Expected number of immersed rational curves.
    pub instanton: Rational,
    pub lambda: LambdaForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreefoldReport {
    pub model: CIModel,
    pub rows: Vec<ThreefoldRow>,
}

/// Curve counts of a Calabi–Yau threefold (`n - m = 3`), e.g. the quintic.
pub fn threefold_report(model: &CIModel, max_d: u32, exec: Execution) -> Result<ThreefoldReport> {
    model.require(Classification::CalabiYau)?;
    if model.n() != model.m() + 3 {
        return Err(Error::InvalidModel(format!(
            "not a threefold: n - m = {}",
            model.n() as i64 - model.m() as i64
        )));
    }
    let solution = solve_calabi_yau(model, max_d, exec)?;
    let mut rows = Vec::new();
    let mut per_degree = BTreeMap::new();
    for d in 1..=max_d {
        let c = solution.correlator(d);
        let n_d = one_point_invariant(c, 0, 1)?;
        let m_d = one_point_invariant(c, 1, 0)?;
        per_degree.insert(d, &n_d / &Rational::from(d));
        rows.push(ThreefoldRow {
            d,
            n_d,
            m_d,
            instanton: Rational::zero(),
            lambda: solution.lambdas[d as usize - 1].clone(),
        });
    }
    let counts = aspinwall_morrison(&per_degree)?;
    for row in &mut rows {
        row.instanton = counts[&row.d].clone();
    }
    Ok(ThreefoldReport {
        model: model.clone(),
        rows,
    })
}

/// The quintic threefold pipeline.
pub fn quintic_report(max_d: u32, exec: Execution) -> Result<ThreefoldReport> {
    threefold_report(&CIModel::quintic(), max_d, exec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn comb_enumeration() {
        let ends = |d| -> Vec<Vec<u32>> {
            enumerate_combs(d)
                .into_iter()
                .map(|c| c.endpoints().to_vec())
                .collect()
        };
        assert_eq!(ends(1), vec![vec![1], vec![0, 1]]);
        assert_eq!(
            ends(2),
            vec![vec![2], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(enumerate_combs(5).len(), 32);
        let c = Comb::from_endpoints(vec![0, 1, 3, 6]).unwrap();
        assert_eq!(c.deltas().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(c.teeth(), 3);
        assert!(Comb::from_endpoints(vec![0, 3]).unwrap().is_simple());
        assert!(Comb::from_endpoints(vec![2, 1]).is_err());
    }

    #[test]
    fn terms_with_no_teeth_and_simple_comb() {
        let model = CIModel::quintic();
        let spec = model.spec();
        let single = Comb::from_endpoints(vec![2]).unwrap();
        assert_eq!(
            cy_term(&model, &single, &[]).unwrap(),
            crate::correlators::phi(&model, 2)
        );

        let lambda = LambdaForm::new(q(3, 2), q(-7, 1));
        let simple = Comb::from_endpoints(vec![0, 1]).unwrap();
        let expected = LaurentPoly::from_class(model.fundamental_class())
            .mul_class(&CohClass::one(spec))
            * LaurentPoly::linear(spec, &q(3, 2), &q(-7, 1)).shift(-1);
        assert_eq!(cy_term(&model, &simple, &[lambda]).unwrap(), expected);
    }

    #[test]
    fn two_tooth_quintic_term() {
        let model = CIModel::quintic();
        let spec = model.spec();
        let l1 = LambdaForm::new(q(-770, 1), q(-120, 1));
        let comb = Comb::from_endpoints(vec![0, 1, 2]).unwrap();
        let five_h = LaurentPoly::from_class(CohClass::h(spec).scale(&q(5, 1)));
        let first = LaurentPoly::linear(spec, &q(-770, 1), &q(-120, 1));
        let second = LaurentPoly::linear(spec, &q(-770, 1), &q(-890, 1));
        let expected = (five_h * first * second).scale(&q(1, 2)).shift(-2);
        assert_eq!(cy_term(&model, &comb, &[l1]).unwrap(), expected);
        assert_eq!(cy_term(&model, &comb, &[]), Err(Error::MissingLambda(1)));
    }

    #[test]
    fn quintic_first_forms() {
        let model = CIModel::quintic();
        let l1 = solve_lambda(&model, 1, &[], Execution::Sequential).unwrap();
        assert_eq!(l1, LambdaForm::new(q(-770, 1), q(-120, 1)));
        let l2 = solve_lambda(&model, 2, &[l1], Execution::Sequential).unwrap();
        assert_eq!(l2, LambdaForm::new(q(-421375, 1), q(-60000, 1)));
    }

    #[test]
    fn quintic_degree_one_correlator() {
        let model = CIModel::quintic();
        let spec = model.spec();
        let expected = LaurentPoly::from_terms(
            spec,
            [
                (-2, CohClass::h_pow(spec, 3).scale(&q(2875, 1))),
                (-3, CohClass::h_pow(spec, 4).scale(&q(-5750, 1))),
            ],
        )
        .unwrap();
        assert_eq!(
            cy_correlator(&model, 1, Execution::Sequential).unwrap(),
            expected
        );
    }

    #[test]
    fn zero_lambdas_reduce_to_phi() {
        let model = CIModel::quintic();
        let phis = phi_table(&model, 3);
        let zeros = vec![LambdaForm::default(); 3];
        let sum = comb_sum(&phis, 3, &zeros, false, Execution::Sequential).unwrap();
        assert_eq!(sum, phis[3]);
    }

    #[test]
    fn requires_calabi_yau() {
        let fano = CIModel::classify(4, &[3]).unwrap();
        assert!(matches!(
            solve_calabi_yau(&fano, 1, Execution::Sequential),
            Err(Error::WrongClassification { .. })
        ));
        let gt = CIModel::classify(4, &[6]).unwrap();
        assert!(matches!(
            cy_correlator(&gt, 2, Execution::Sequential),
            Err(Error::GeneralType { .. })
        ));
    }

    #[test]
    fn degenerate_linear_model_is_reported() {
        // P^1 cut by two hyperplanes: h^3 = 0 so nothing pins alpha
        let model = CIModel::classify(1, &[1, 1]).unwrap();
        assert!(matches!(
            solve_calabi_yau(&model, 1, Execution::Sequential),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn aspinwall_morrison_small() {
        let input = BTreeMap::from([(1, q(1, 1)), (2, q(1, 1))]);
        let out = aspinwall_morrison(&input).unwrap();
        assert_eq!(out[&1], q(1, 1));
        // 1 = N_2 + N_1 / 2^3
        assert_eq!(out[&2], q(7, 8));
        let missing = BTreeMap::from([(4, q(1, 1))]);
        assert_eq!(aspinwall_morrison(&missing), Err(Error::MissingDegree(1)));
    }
}
