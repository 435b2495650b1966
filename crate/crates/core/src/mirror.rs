//! The mirror-map change of variables.
//!
//! The comb generating function
//! `F(q) = Σ_d Σ_{0<d_1<...<d_r=d} ∏_i (y_{Δ_i} + x_{Δ_i} d_{i-1}) / r! · q^d`
//! has `log F` linear in the `y`'s, so `F = exp(Σ y'_e q^e)` with
//! `y'_e = Σ_{0<d_1<...<d_r=e} y_{d_1} ∏_{i>=2} (x_{d_i-d_{i-1}} d_{i-1}) / r!`.
//! Feeding in `x_k = α_k` and `y_k = α_k (d + h/t) + β_k` turns the linear
//! forms of the Calabi–Yau recursion into the mirror coefficients `a_e, b_e`.

use crate::calabi_yau::{solve_calabi_yau, CySolution, LambdaForm};
use crate::correlators::CIModel;
use crate::error::Result;
use crate::exec::Execution;
use crate::laurent::LaurentPoly;
use crate::rational::Rational;
use crate::ring::CohClass;
use crate::series::{QSeries, Ring, Series};

/// A `Q`-vector space element; enough structure for the transform, which is
/// linear in `y`.
pub trait QVector: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
}

impl<R: Ring> QVector for R {
    fn zero_like(&self) -> Self {
        self.scale(&Rational::zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        Ring::add(self, rhs)
    }
    fn scale(&self, r: &Rational) -> Self {
        Ring::scale(self, r)
    }
}

/// The formal pair `α·(d + h/t) + β`.
impl QVector for LambdaForm {
    fn zero_like(&self) -> Self {
        LambdaForm::default()
    }
    fn add(&self, rhs: &Self) -> Self {
        LambdaForm::new(&self.alpha + &rhs.alpha, &self.beta + &rhs.beta)
    }
    fn scale(&self, r: &Rational) -> Self {
        LambdaForm::new(&self.alpha * r, &self.beta * r)
    }
}

/// `weights[e][s]`: the coefficient of `y_s` in `y'_e` (`1 <= s <= e <= D`).
///
/// Chains starting at `s` are grown one endpoint at a time, tracking the
/// number of endpoints so the `1/r!` can be applied at the end.
pub fn corollary_weights(x: &[Rational], max_d: usize) -> Vec<Vec<Rational>> {
    let mut weights = vec![vec![Rational::zero(); max_d + 1]; max_d + 1];
    for start in 1..=max_d {
        // chains[k] = Σ over chains start = c_1 < ... < c_r = k of ∏_{i>=2} x_{c_i - c_{i-1}} c_{i-1}
        let mut chains = vec![Rational::zero(); max_d + 1];
        chains[start] = Rational::one();
        let mut r = 1u32;
        loop {
            let inv = Rational::factorial(r).recip().expect("nonzero");
            for e in start..=max_d {
                if !chains[e].is_zero() {
                    weights[e][start] += &(&chains[e] * &inv);
                }
            }
            let mut next = vec![Rational::zero(); max_d + 1];
            let mut any = false;
            for j in start..=max_d {
                if chains[j].is_zero() {
                    continue;
                }
                for k in j + 1..=max_d {
                    let step = &x[k - j - 1] * &Rational::from(j);
                    if !step.is_zero() {
                        next[k] += &(&chains[j] * &step);
                        any = true;
                    }
                }
            }
            if !any {
                break;
            }
            chains = next;
            r += 1;
        }
    }
    weights
}

/// `y'_1 ..= y'_D` from `x_1..x_D` and `y_1..y_D` (slices indexed from
/// degree one).
pub fn corollary_transform<T: QVector>(x: &[Rational], y: &[T]) -> Vec<T> {
    let max_d = y.len().min(x.len());
    let weights = corollary_weights(x, max_d);
    (1..=max_d)
        .map(|e| {
            let mut acc = y[0].zero_like();
            for s in 1..=e {
                if !weights[e][s].is_zero() {
                    acc = acc.add(&y[s - 1].scale(&weights[e][s]));
                }
            }
            acc
        })
        .collect()
}

/// `F(q)` by direct enumeration of chains `0 < d_1 < ... < d_r = d`.
pub fn comb_generating_function(x: &[Rational], y: &[Rational], max_d: usize) -> Series<Rational> {
    let mut coeffs = vec![Rational::zero(); max_d + 1];
    coeffs[0] = Rational::one();
    for (d, slot) in coeffs.iter_mut().enumerate().skip(1) {
        for mask in 0..1u64 << (d - 1) {
            let mut chain: Vec<usize> = (1..d).filter(|i| mask >> (i - 1) & 1 == 1).collect();
            chain.push(d);
            let mut prev = 0usize;
            let mut term = Rational::one();
            for &c in &chain {
                let delta = c - prev;
                term *= &(&y[delta - 1] + &(&x[delta - 1] * &Rational::from(prev)));
                prev = c;
            }
            *slot += &(&term / &Rational::factorial(chain.len() as u32));
        }
    }
    Series::from_coeffs(&(), max_d, coeffs)
}

/// Mirror coefficients: `f(q) = Σ a_e q^e`, `g(q) = Σ b_e q^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorData {
    /// `a[e-1] = a_e`
    pub a: Vec<Rational>,
    /// `b[e-1] = b_e`
    pub b: Vec<Rational>,
}

impl MirrorData {
    pub fn max_degree(&self) -> usize {
        self.a.len()
    }

    fn series(spec: &std::sync::Arc<crate::ring::RingSpec>, values: &[Rational]) -> QSeries {
        let mut coeffs = vec![LaurentPoly::zero(spec)];
        coeffs.extend(
            values
                .iter()
                .map(|v| LaurentPoly::constant(spec, v.clone())),
        );
        Series::from_coeffs(spec, values.len(), coeffs)
    }

    pub fn f_series(&self, spec: &std::sync::Arc<crate::ring::RingSpec>) -> QSeries {
        Self::series(spec, &self.a)
    }

    pub fn g_series(&self, spec: &std::sync::Arc<crate::ring::RingSpec>) -> QSeries {
        Self::series(spec, &self.b)
    }
}

/// Applies the transform with `x_k = α_k` and `y_k = (α_k, β_k)`.
pub fn mirror_coefficients(lambdas: &[LambdaForm]) -> MirrorData {
    let x: Vec<Rational> = lambdas.iter().map(|l| l.alpha.clone()).collect();
    let transformed = corollary_transform(&x, lambdas);
    MirrorData {
        a: transformed.iter().map(|l| l.alpha.clone()).collect(),
        b: transformed.into_iter().map(|l| l.beta).collect(),
    }
}

/// `Σ_{combs} φ_{d_1} ∏_i (a_{Δ_i}(d_1 + h/t) + b_{Δ_i}) / r!`, the
/// degree-`d` coefficient of `e^{(h/t) f + g} Φ(q e^f)`.
pub fn mirror_comb_sum(
    phis: &[LaurentPoly],
    mirror: &MirrorData,
    d: u32,
    exec: Execution,
) -> LaurentPoly {
    use crate::calabi_yau::Comb;
    let spec = phis[0].spec().clone();
    let h_over_t = LaurentPoly::h(&spec).shift(-1);
    exec.sum(
        1u64 << d,
        LaurentPoly::zero(&spec),
        |mask| {
            let comb = Comb::from_mask(d, mask);
            let d1 = comb.handle();
            let mut acc = phis[d1 as usize].clone();
            for delta in comb.deltas() {
                let a = &mirror.a[delta as usize - 1];
                let b = &mirror.b[delta as usize - 1];
                let factor = &h_over_t.scale(a)
                    + &LaurentPoly::constant(&spec, &(a * &Rational::from(d1)) + b);
                acc = &acc * &factor;
            }
            acc.scale(
                &Rational::factorial(comb.teeth() as u32)
                    .recip()
                    .expect("nonzero"),
            )
        },
        |a, b| &a + &b,
    )
}

#[derive(Clone, Debug)]
pub struct MirrorReport {
    pub holds: bool,
    pub first_failing_degree: Option<u32>,
    /// `Σ(q) = e^{(h/t) f + g} Φ(q e^f)` as truncated series.
    pub series_identity: bool,
    /// Degree-wise comb form with `(a, b)` in place of the `λ`'s.
    pub comb_form: bool,
    pub mirror: MirrorData,
    pub solution: CySolution,
}

/// Checks the mirror identity for a Calabi–Yau model modulo `q^{D+1}`.
pub fn verify_mirror_identity(
    model: &CIModel,
    max_d: u32,
    exec: Execution,
) -> Result<MirrorReport> {
    let solution = solve_calabi_yau(model, max_d, exec)?;
    let spec = model.spec();
    let d = max_d as usize;
    let mirror = mirror_coefficients(&solution.lambdas);

    let sigma = Series::from_coeffs(spec, d, solution.correlators.clone());
    let phi = Series::from_coeffs(spec, d, solution.phis.clone());
    let f = mirror.f_series(spec);
    let g = mirror.g_series(spec);
    let h_over_t = LaurentPoly::monomial(CohClass::h(spec), -1);
    let exponent = f.mul_coeff(&h_over_t).add(&g)?;
    let rhs = exponent.exp()?.mul(&phi.substitute(&f)?)?;
    let series_failure = sigma.first_difference(&rhs).map(|k| k as u32);

    let comb_failure = (0..=max_d).find(|&k| {
        mirror_comb_sum(&solution.phis, &mirror, k, exec) != solution.correlators[k as usize]
    });

    let first_failing_degree = match (series_failure, comb_failure) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(MirrorReport {
        holds: first_failing_degree.is_none(),
        first_failing_degree,
        series_identity: series_failure.is_none(),
        comb_form: comb_failure.is_none(),
        mirror,
        solution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn first_two_corollary_coefficients() {
        let x = [Rational::new(2, 3), q(5)];
        let y = [Rational::new(-1, 7), q(3)];
        let out = corollary_transform(&x, &y);
        assert_eq!(out[0], y[0]);
        assert_eq!(out[1], &y[1] + &(&(&y[0] * &x[0]) / &q(2)));
    }

    #[test]
    fn vanishing_y_gives_vanishing_output() {
        let x = [q(1), q(-4), Rational::new(9, 2), q(7)];
        let y = vec![Rational::zero(); 4];
        assert!(corollary_transform(&x, &y).iter().all(|v| v.is_zero()));
    }

    #[test]
    fn quintic_mirror_coefficients() {
        let lambdas = [
            LambdaForm::new(q(-770), q(-120)),
            LambdaForm::new(q(-421375), q(-60000)),
        ];
        let m = mirror_coefficients(&lambdas);
        assert_eq!(m.a, vec![q(-770), q(-124925)]);
        assert_eq!(m.b, vec![q(-120), q(-13800)]);
        let zero = mirror_coefficients(&[LambdaForm::default(), LambdaForm::default()]);
        assert!(zero.a.iter().chain(&zero.b).all(Rational::is_zero));
    }

    #[test]
    fn generating_function_matches_corollary() {
        let x = [q(1), Rational::new(-1, 2), q(3), q(2)];
        let y = [q(2), q(1), Rational::new(1, 3), q(-1)];
        let f = comb_generating_function(&x, &y, 4);
        let y_prime = corollary_transform(&x, &y);
        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(y_prime);
        let exp = Series::from_coeffs(&(), 4, coeffs).exp().unwrap();
        assert_eq!(exp, f);
    }

    #[test]
    fn degree_zero_identity() {
        let model = CIModel::quintic();
        let report = verify_mirror_identity(&model, 0, Execution::Sequential).unwrap();
        assert!(report.holds);
        assert_eq!(
            report.solution.correlators[0],
            LaurentPoly::from_class(model.fundamental_class())
        );
    }
}
