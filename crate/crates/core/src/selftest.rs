//! The acceptance suite: reference values and internal-consistency checks,
//! all exact. Shared by the `acceptance` test target and `gw selftest`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calabi_yau::{quintic_report, solve_calabi_yau, LambdaForm};
use crate::correlators::{
    fano_ge2_correlator, fano_index1_correlator, phi, pn_one_point, CIModel, Classification,
};
use crate::exec::Execution;
use crate::laurent::LaurentPoly;
use crate::mirror::{comb_generating_function, corollary_transform, verify_mirror_identity};
use crate::rational::Rational;
use crate::relative::{
    derive_linear_cy_lambdas, linear_cy_expected_pushforward, linear_cy_lambda,
    linear_cy_pushforward, linear_cy_series, porteous_formula, porteous_lines, RelativeModel,
};
use crate::ring::{CohClass, Monomial, RingSpec};
use crate::series::{QSeries, Series};

/// Quintic `n_1..n_4` as `(numerator, denominator)`.
pub const QUINTIC_N: [(i64, i64); 4] = [
    (2875, 1),
    (4876875, 4),
    (8564575000, 9),
    (15517926796875, 16),
];

/// Quintic `λ_1..λ_4` as `((α num, α den), β)`.
pub const QUINTIC_LAMBDA: [((i64, i64), i64); 4] = [
    ((-770, 1), -120),
    ((-421375, 1), -60000),
    ((-436236875, 1), -59937500),
    ((-17351562078125, 6), -390555125000),
];

/// Quintic instanton numbers `N_1..N_4`.
pub const QUINTIC_INSTANTONS: [i64; 4] = [2875, 609250, 317206375, 242467530000];

/// Calabi–Yau models for the mirror and read-off checks, with the degree
/// to which the mirror identity is verified.
pub const MIRROR_MODELS: [(usize, &[u32], u32); 3] =
    [(4, &[5], 4), (5, &[3, 3], 3), (5, &[2, 4], 3)];

/// `(n, m)` for the Porteous checks.
pub const PORTEOUS_CASES: [(usize, usize); 4] = [(2, 3), (3, 3), (3, 4), (1, 2)];

const RANDOM_SEED: u64 = 0x5eed_0001;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "[{verdict}] {:>2} {}: {}",
            self.id, self.name, self.detail
        )
    }
}

type Check = fn(Execution) -> Result<String, String>;

const CRITERIA: [(u32, &str, Check); 12] = [
    (1, "quintic counts", quintic_counts),
    (2, "lambda table", lambda_table),
    (3, "instanton numbers", instanton_numbers),
    (4, "n_d/d = -m_d/2", descendant_relation),
    (5, "mirror identity", mirror_identity),
    (6, "lambda read-off", lambda_read_off),
    (7, "Fano properties", fano_properties),
    (8, "projective space", projective_space),
    (9, "Porteous", porteous),
    (10, "linear relative Calabi-Yau", linear_relative_cy),
    (11, "comb generating function", comb_generating),
    (12, "algebra kernel", algebra_kernel),
];

pub fn criterion_ids() -> impl Iterator<Item = u32> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion; `None` for an unknown id.
pub fn run_criterion(id: u32, exec: Execution) -> Option<CriterionOutcome> {
    let &(id, name, check) = CRITERIA.iter().find(|c| c.0 == id)?;
    let (passed, detail) = match check(exec) {
        Ok(detail) => (true, detail),
        Err(detail) => (false, detail),
    };
    Some(CriterionOutcome {
        id,
        name,
        passed,
        detail,
    })
}

pub fn run_all(exec: Execution) -> Vec<CriterionOutcome> {
    criterion_ids()
        .filter_map(|id| run_criterion(id, exec))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn math<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn quintic_counts(exec: Execution) -> Result<String, String> {
    let report = math(quintic_report(4, exec))?;
    for (row, &(p, q)) in report.rows.iter().zip(&QUINTIC_N) {
        let expected = Rational::new(p, q);
        ensure(row.n_d == expected, || {
            format!("n_{} = {}, expected {expected}", row.d, row.n_d)
        })?;
    }
    Ok("n_1..n_4 exact".into())
}

fn lambda_table(exec: Execution) -> Result<String, String> {
    let solution = math(solve_calabi_yau(&CIModel::quintic(), 4, exec))?;
    for (d, (got, &((an, ad), b))) in solution.lambdas.iter().zip(&QUINTIC_LAMBDA).enumerate() {
        let expected = LambdaForm::new(Rational::new(an, ad), Rational::integer(b));
        ensure(*got == expected, || {
            format!(
                "lambda_{}: ({}, {}), expected ({}, {})",
                d + 1,
                got.alpha,
                got.beta,
                expected.alpha,
                expected.beta
            )
        })?;
    }
    Ok("lambda_1..lambda_4 exact".into())
}

fn instanton_numbers(exec: Execution) -> Result<String, String> {
    let report = math(quintic_report(4, exec))?;
    for (row, &expected) in report.rows.iter().zip(&QUINTIC_INSTANTONS) {
        ensure(row.instanton == Rational::integer(expected), || {
            format!("N_{} = {}, expected {expected}", row.d, row.instanton)
        })?;
    }
    Ok("N_1..N_4 exact".into())
}

fn descendant_relation(exec: Execution) -> Result<String, String> {
    let report = math(quintic_report(4, exec))?;
    for row in &report.rows {
        let lhs = &row.n_d / &Rational::from(row.d);
        let rhs = -(&row.m_d / &Rational::integer(2));
        ensure(lhs == rhs, || format!("d = {}: {lhs} != {rhs}", row.d))?;
    }
    Ok("d = 1..4".into())
}

fn mirror_identity(exec: Execution) -> Result<String, String> {
    let mut checked = Vec::new();
    for &(n, degrees, max_d) in &MIRROR_MODELS {
        let model = math(CIModel::classify(n, degrees))?;
        let report = math(verify_mirror_identity(&model, max_d, exec))?;
        ensure(report.holds, || {
            format!(
                "{degrees:?} in P^{n}: fails at q^{} (series {}, comb form {})",
                report.first_failing_degree.unwrap_or_default(),
                report.series_identity,
                report.comb_form
            )
        })?;
        checked.push(format!("{degrees:?}/P^{n} to q^{max_d}"));
    }
    Ok(checked.join(", "))
}

fn lambda_read_off(exec: Execution) -> Result<String, String> {
    for &(n, degrees, _) in &MIRROR_MODELS {
        let model = math(CIModel::classify(n, degrees))?;
        let solution = math(solve_calabi_yau(&model, 4, exec))?;
        let mismatch = solution
            .lambdas
            .iter()
            .zip(&solution.lambdas_read_off)
            .position(|(a, b)| a != b);
        ensure(mismatch.is_none(), || {
            format!(
                "{degrees:?} in P^{n}: degree {}",
                mismatch.unwrap_or_default() + 1
            )
        })?;
    }
    Ok(format!("{} models, d <= 4", MIRROR_MODELS.len()))
}

/// Nondecreasing degree vectors with entries >= 1 and sum at most `bound`.
pub fn degree_vectors(bound: u32) -> Vec<Vec<u32>> {
    fn extend(prefix: &mut Vec<u32>, min: u32, left: u32, out: &mut Vec<Vec<u32>>) {
        out.push(prefix.clone());
        for l in min..=left {
            prefix.push(l);
            extend(prefix, l, left - l, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, bound, &mut out);
    out
}

/// Checks homogeneity and the absence of `t^j`, `j >= -1`, for one model.
pub fn check_fano_model(model: &CIModel, max_d: u32) -> Result<(), String> {
    let n = model.n() as i64;
    let m = model.m() as i64;
    let sum = model.degree_sum() as i64;
    for d in 1..=max_d {
        let corr = match model.classification() {
            Classification::FanoIndexGe2 => fano_ge2_correlator(model, d),
            Classification::FanoIndexOne => fano_index1_correlator(model, d),
            other => return Err(format!("{other} model in a Fano sweep")),
        };
        let corr = math(corr)?;
        let label = || format!("{:?} in P^{n}, d = {d}", model.degrees());
        if let Some(top) = corr.max_exponent() {
            ensure(top < -1, || format!("{}: t^{top} present", label()))?;
        }
        for (j, c) in corr.terms() {
            let degree = m + d as i64 * (sum - n - 1) - j as i64;
            let ok = if degree < 0 {
                c.is_zero()
            } else {
                c.is_homogeneous_of(degree as u32)
            };
            ensure(ok, || {
                format!("{}: t^{j} coefficient {c} not of degree {degree}", label())
            })?;
        }
    }
    Ok(())
}

fn fano_properties(exec: Execution) -> Result<String, String> {
    let mut models = Vec::new();
    for n in 1..=6usize {
        for degrees in degree_vectors(n as u32) {
            models.push(math(CIModel::classify(n, &degrees))?);
        }
    }
    let results = exec.map(&models, |model| check_fano_model(model, 3));
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok(format!("{} models, d <= 3", models.len()))
}

fn projective_space(_: Execution) -> Result<String, String> {
    for n in 1..=6 {
        let model = math(CIModel::classify(n, &[]))?;
        for d in 0..=3 {
            ensure(pn_one_point(n, d) == phi(&model, d), || {
                format!("P^{n}, d = {d}")
            })?;
        }
    }
    Ok("n <= 6, d <= 3".into())
}

fn porteous(_: Execution) -> Result<String, String> {
    for &(n, m) in &PORTEOUS_CASES {
        let model = math(RelativeModel::new(n, 6, &vec![1; m]))?;
        let got = math(porteous_lines(&model))?;
        let expected = porteous_formula(&model);
        ensure(!expected.is_zero() && got == expected, || {
            format!("n = {n}, m = {m}: {got}, expected {expected}")
        })?;
        let trivial = math(RelativeModel::trivial_bundle(n, 6, &vec![1; m]))?;
        let got = math(porteous_lines(&trivial))?;
        ensure(got.is_zero(), || {
            format!("trivial bundle n = {n}, m = {m}: {got}")
        })?;
    }
    Ok(format!(
        "{} (n, m) instances and the trivial bundle",
        PORTEOUS_CASES.len()
    ))
}

fn linear_relative_cy(_: Execution) -> Result<String, String> {
    for n in 1..=2usize {
        let model = math(RelativeModel::linear_calabi_yau(n, 4))?;
        let derived = math(derive_linear_cy_lambdas(&model, 5))?;
        for (e, got) in (1..).zip(&derived) {
            let expected = math(linear_cy_lambda(&model, e))?;
            ensure(*got == expected, || {
                format!(
                    "n = {n}, lambda_{e} = {} t + {}, expected {} t + {}",
                    got.t_coeff, got.constant, expected.t_coeff, expected.constant
                )
            })?;
        }
        let series = math(linear_cy_series(&model, 5))?;
        for d in 1..=5 {
            let c = series.coeff(d);
            ensure(c.coeff(0).is_zero() && c.coeff(-1).is_zero(), || {
                format!("n = {n}: q^{d} has t^0 or t^-1 terms: {c}")
            })?;
        }
        for d in 1..=4 {
            let got = math(linear_cy_pushforward(&model, d, 5))?;
            let expected = linear_cy_expected_pushforward(&model, d);
            ensure(got == expected, || {
                format!("n = {n}, d = {d}: {got}, expected {expected}")
            })?;
        }
    }
    Ok("n = 1, 2; lambda_e for e <= 5, push-forwards d <= 4".into())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

fn random_nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    let r = random_rational(rng);
    if r.is_zero() {
        Rational::one()
    } else {
        r
    }
}

fn random_vector(rng: &mut ChaCha8Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| random_rational(rng)).collect()
}

fn log_f(x: &[Rational], y: &[Rational], max_d: usize) -> crate::Result<Series<Rational>> {
    comb_generating_function(x, y, max_d).log()
}

fn comb_generating(_: Execution) -> Result<String, String> {
    const D: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for case in 0..20 {
        let x = random_vector(&mut rng, D);
        let y1 = random_vector(&mut rng, D);
        let y2 = random_vector(&mut rng, D);
        let c = random_rational(&mut rng);
        let sum: Vec<Rational> = y1.iter().zip(&y2).map(|(a, b)| a + b).collect();
        let scaled: Vec<Rational> = y1.iter().map(|a| a * &c).collect();

        let l1 = math(log_f(&x, &y1, D))?;
        let l2 = math(log_f(&x, &y2, D))?;
        ensure(math(log_f(&x, &sum, D))? == math(l1.add(&l2))?, || {
            format!("case {case}: log F not additive in y")
        })?;
        ensure(math(log_f(&x, &scaled, D))? == l1.scale(&c), || {
            format!("case {case}: log F not homogeneous in y")
        })?;

        let mut coeffs = vec![Rational::zero()];
        coeffs.extend(corollary_transform(&x, &y1));
        let rebuilt = math(Series::from_coeffs(&(), D, coeffs).exp())?;
        ensure(rebuilt == comb_generating_function(&x, &y1, D), || {
            format!("case {case}: exp(sum y'_e q^e) != F")
        })?;
    }
    Ok("20 instances, D = 5".into())
}

/// Absolute rings `P^1..P^4` and two relative rings.
fn kernel_specs() -> Vec<Arc<RingSpec>> {
    let mut specs: Vec<_> = (1..=4).map(RingSpec::absolute).collect();
    for (n, cutoff) in [(1, 3), (2, 2)] {
        specs.push(
            RelativeModel::new(n, cutoff, &[])
                .expect("valid model")
                .spec()
                .clone(),
        );
    }
    specs
}

pub fn random_class(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>) -> CohClass {
    let generators = spec.num_generators();
    let count = rng.gen_range(0..=4);
    let terms: Vec<_> = (0..count)
        .map(|_| {
            let k = rng.gen_range(0..=spec.n() as u32 + 1);
            let mono =
                Monomial::from_exponents((0..generators).map(|_| rng.gen_range(0..=2)).collect());
            (k, mono, random_rational(rng))
        })
        .collect();
    CohClass::from_terms(spec, terms).expect("monomial arity matches")
}

pub fn random_laurent(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>) -> LaurentPoly {
    let count = rng.gen_range(0..=3);
    let terms: Vec<_> = (0..count)
        .map(|_| (rng.gen_range(-3..=2), random_class(rng, spec)))
        .collect();
    LaurentPoly::from_terms(spec, terms).expect("same ring")
}

/// A unit: one scalar-carrying `t`-exponent plus nilpotent terms anywhere.
pub fn random_unit(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>) -> LaurentPoly {
    let lead = rng.gen_range(-3..=3);
    let mut terms = vec![(lead, CohClass::constant(spec, random_nonzero_rational(rng)))];
    for _ in 0..rng.gen_range(0..=3) {
        let c = random_class(rng, spec);
        let nilpotent = &c - &CohClass::constant(spec, c.constant_part());
        terms.push((rng.gen_range(-3..=3), nilpotent));
    }
    LaurentPoly::from_terms(spec, terms).expect("same ring")
}

/// A truncated series; the constant term is dropped when `zero_constant`.
pub fn random_series(
    rng: &mut ChaCha8Rng,
    spec: &Arc<RingSpec>,
    truncation: usize,
    zero_constant: bool,
) -> QSeries {
    let coeffs = (0..=truncation)
        .map(|k| {
            if k == 0 && zero_constant {
                LaurentPoly::zero(spec)
            } else {
                random_laurent(rng, spec)
            }
        })
        .collect();
    Series::from_coeffs(spec, truncation, coeffs)
}

fn ring_axioms(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>) -> Result<(), String> {
    let a = random_laurent(rng, spec);
    let b = random_laurent(rng, spec);
    let c = random_laurent(rng, spec);
    let one = LaurentPoly::one(spec);
    let zero = LaurentPoly::zero(spec);
    let checks = [
        ("associativity", &(&a * &b) * &c == &a * &(&b * &c)),
        ("commutativity", &a * &b == &b * &a),
        ("distributivity", &a * &(&b + &c) == &(&a * &b) + &(&a * &c)),
        ("additive associativity", &(&a + &b) + &c == &a + &(&b + &c)),
        ("identities", &a * &one == a && &a + &zero == a),
        ("negation", (&a + &(-&a)).is_zero()),
    ];
    for (name, ok) in checks {
        ensure(ok, || format!("{name} fails for a = {a}, b = {b}, c = {c}"))?;
    }
    Ok(())
}

fn inversion(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>) -> Result<(), String> {
    let p = random_unit(rng, spec);
    let inv = math(p.invert_unit())?;
    ensure(&p * &inv == LaurentPoly::one(spec), || {
        format!("p * p^-1 != 1 for p = {p}")
    })
}

fn exp_and_substitute(rng: &mut ChaCha8Rng, spec: &Arc<RingSpec>) -> Result<(), String> {
    const D: usize = 3;
    let f = random_series(rng, spec, D, true);
    let g = random_series(rng, spec, D, true);
    let p = random_series(rng, spec, D, false);
    let q = random_series(rng, spec, D, false);
    let exp_sum = math(math(f.add(&g))?.exp())?;
    ensure(
        exp_sum == math(math(f.exp())?.mul(&math(g.exp())?))?,
        || "exp(f + g) != exp f exp g".into(),
    )?;
    ensure(math(math(f.exp())?.log())? == f, || "log exp f != f".into())?;
    let sub = |s: &QSeries| s.substitute(&f);
    ensure(
        math(sub(&math(p.mul(&q))?))? == math(math(sub(&p))?.mul(&math(sub(&q))?))?,
        || "substitution not multiplicative".into(),
    )?;
    ensure(
        math(sub(&math(p.add(&q))?))? == math(math(sub(&p))?.add(&math(sub(&q))?))?,
        || "substitution not additive".into(),
    )?;
    ensure(math(p.substitute(&Series::zero(spec, D)))? == p, || {
        "substitution by f = 0 not the identity".into()
    })?;
    // q^k c -> q^k c e^{k f}
    let k = rng.gen_range(1..=D);
    let c = random_laurent(rng, spec);
    let mono = Series::monomial(spec, D, c.clone(), k);
    let expected = math(math(f.scale(&Rational::from(k)).exp())?.mul(&mono))?;
    ensure(math(mono.substitute(&f))? == expected, || {
        format!("substitution of q^{k} disagrees with e^(k f)")
    })
}

type Property = fn(&mut ChaCha8Rng, &Arc<RingSpec>) -> Result<(), String>;

fn algebra_kernel(_: Execution) -> Result<String, String> {
    let specs = kernel_specs();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED ^ 0x12);
    let properties: [(&str, Property); 3] = [
        ("ring axioms", ring_axioms),
        ("inversion", inversion),
        ("exp/substitute", exp_and_substitute),
    ];
    for (name, property) in properties {
        for case in 0..100 {
            let spec = &specs[case % specs.len()];
            property(&mut rng, spec).map_err(|e| format!("{name}, case {case}: {e}"))?;
        }
    }
    Ok("3 properties x 100 cases".into())
}
