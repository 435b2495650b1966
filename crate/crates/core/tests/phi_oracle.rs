//! `φ_d` against an independent expansion: with `x = h/t`,
//! `φ_d = t^w · ∏_i ∏_k (l_i x + k) / ∏_k (x + k)^{n+1}` (`w` the weight),
//! expanded as a power series in `x` modulo `x^{n+1}` using binomial series
//! for each `(x + k)^{-(n+1)}`.

use gw_core::correlators::{fano_index1_correlator, phi};
use gw_core::{CIModel, CohClass, LaurentPoly, Rational};

fn binomial(top: i64, k: u32) -> Rational {
    // generalized binomial coefficient, top may be negative
    let mut acc = Rational::one();
    for i in 0..k as i64 {
        acc = &acc * &Rational::new(top - i, i + 1);
    }
    acc
}

fn mul_trunc(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if i + j < len {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Coefficients of `x^0..x^n` and the total weight.
fn oracle(n: usize, degrees: &[u32], d: u32) -> (Vec<Rational>, i64) {
    let len = n + 1;
    let mut series = vec![Rational::zero(); len];
    series[0] = Rational::one();
    let mut weight = 0i64;
    for &l in degrees {
        for k in 0..=(d * l) {
            series = mul_trunc(&series, &[Rational::from(k), Rational::from(l)], len);
            weight += 1;
        }
    }
    for k in 1..=d as i64 {
        // (x + k)^{-(n+1)} = k^{-(n+1)} Σ_j C(-(n+1), j) (x/k)^j
        let e = -(n as i64 + 1);
        let factor: Vec<Rational> = (0..len as u32)
            .map(|j| {
                let scale = Rational::integer(k).pow(n as u32 + 1 + j).recip().unwrap();
                &binomial(e, j) * &scale
            })
            .collect();
        series = mul_trunc(&series, &factor, len);
        weight -= n as i64 + 1;
    }
    (series, weight)
}

fn from_oracle(model: &CIModel, coeffs: &[Rational], weight: i64) -> LaurentPoly {
    let spec = model.spec();
    let terms = coeffs.iter().enumerate().map(|(j, c)| {
        (
            (weight - j as i64) as i32,
            CohClass::h_pow(spec, j as u32).scale(c),
        )
    });
    LaurentPoly::from_terms(spec, terms).unwrap()
}

#[test]
fn phi_matches_binomial_expansion() {
    let cases: &[(usize, &[u32])] = &[
        (1, &[]),
        (2, &[1]),
        (2, &[2]),
        (3, &[2]),
        (3, &[1, 1]),
        (4, &[5]),
        (4, &[3]),
        (5, &[3, 3]),
        (5, &[2, 4]),
        (6, &[2, 2, 2]),
    ];
    for &(n, degrees) in cases {
        let model = CIModel::classify(n, degrees).unwrap();
        for d in 0..=4 {
            let (coeffs, weight) = oracle(n, degrees, d);
            assert_eq!(
                phi(&model, d),
                from_oracle(&model, &coeffs, weight),
                "{degrees:?} in P^{n}, d = {d}"
            );
        }
    }
}

#[test]
fn quintic_phi_one_top_coefficients() {
    // 5h ∏_{k=1}^5 (5h + kt) = 600 h t^5 + 6850 h^2 t^4 + ...
    // (h + t)^{-5} = t^{-5} (1 - 5 h/t + ...)
    let model = CIModel::quintic();
    let p = phi(&model, 1);
    assert_eq!(
        p.coeff(0),
        CohClass::h(model.spec()).scale(&Rational::integer(600))
    );
    assert_eq!(
        p.coeff(-1),
        CohClass::h_pow(model.spec(), 2).scale(&Rational::integer(3850))
    );
}

#[test]
fn conic_has_no_lines() {
    let model = CIModel::classify(2, &[2]).unwrap();
    assert!(fano_index1_correlator(&model, 1).unwrap().is_zero());
}
