//! Serialized forms. Rationals are always strings (`"p"` or `"p/q"`).
//!
//! An absolute Laurent polynomial is an array of `{"t": j, "h": [c_0, c_1, ...]}`
//! in decreasing `t`, where `c_k` multiplies `h^k` and trailing zeros are
//! dropped. A relative one is an array of
//! `{"t": j, "terms": [{"h": k, "base": {"s1": e}, "c": "p/q"}]}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use gw_core::ring::Monomial;
use gw_core::{CohClass, Error, LaurentPoly, Rational, Result, RingSpec};

pub fn rational(r: &Rational) -> String {
    r.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.parse()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTerm {
    pub h: u32,
    pub base: BTreeMap<String, u16>,
    pub c: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsoluteTerm {
    pub t: i32,
    pub h: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeTerm {
    pub t: i32,
    pub terms: Vec<ClassTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LaurentJson {
    Absolute(Vec<AbsoluteTerm>),
    Relative(Vec<RelativeTerm>),
}

pub fn class_terms(c: &CohClass) -> Vec<ClassTerm> {
    let names: Vec<&str> = c
        .spec()
        .generators()
        .iter()
        .map(|g| g.name.as_str())
        .collect();
    c.terms()
        .map(|(h, mono, value)| ClassTerm {
            h,
            base: names
                .iter()
                .zip(mono.exponents())
                .filter(|(_, &e)| e > 0)
                .map(|(name, &e)| (name.to_string(), e))
                .collect(),
            c: rational(value),
        })
        .collect()
}

pub fn class_from_terms(spec: &Arc<RingSpec>, terms: &[ClassTerm]) -> Result<CohClass> {
    let generators = spec.generators();
    let mut out = Vec::with_capacity(terms.len());
    for term in terms {
        let mut exponents = vec![0u16; generators.len()];
        for (name, &e) in &term.base {
            let idx = generators
                .iter()
                .position(|g| &g.name == name)
                .ok_or_else(|| Error::Parse(format!("unknown base generator {name}")))?;
            exponents[idx] = e;
        }
        out.push((
            term.h,
            Monomial::from_exponents(exponents),
            parse_rational(&term.c)?,
        ));
    }
    CohClass::from_terms(spec, out)
}

fn h_coefficients(c: &CohClass) -> Vec<String> {
    let mut coeffs = vec![Rational::zero(); c.spec().n() + 1];
    for (k, _, value) in c.terms() {
        coeffs[k as usize] = value.clone();
    }
    while coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
    coeffs.iter().map(rational).collect()
}

pub fn laurent(p: &LaurentPoly) -> LaurentJson {
    if p.spec().is_relative() {
        LaurentJson::Relative(
            p.terms()
                .rev()
                .map(|(t, c)| RelativeTerm {
                    t,
                    terms: class_terms(c),
                })
                .collect(),
        )
    } else {
        LaurentJson::Absolute(
            p.terms()
                .rev()
                .map(|(t, c)| AbsoluteTerm {
                    t,
                    h: h_coefficients(c),
                })
                .collect(),
        )
    }
}

impl LaurentJson {
    /// Rebuilds the polynomial in the ring given by `spec`.
    pub fn to_laurent(&self, spec: &Arc<RingSpec>) -> Result<LaurentPoly> {
        let mut terms = Vec::new();
        match self {
            LaurentJson::Absolute(rows) => {
                for row in rows {
                    let mut c = CohClass::zero(spec);
                    for (k, v) in row.h.iter().enumerate() {
                        c = &c + &CohClass::h_pow(spec, k as u32).scale(&parse_rational(v)?);
                    }
                    terms.push((row.t, c));
                }
            }
            LaurentJson::Relative(rows) => {
                for row in rows {
                    terms.push((row.t, class_from_terms(spec, &row.terms)?));
                }
            }
        }
        LaurentPoly::from_terms(spec, terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    pub n: usize,
    pub degrees: Vec<u32>,
    pub classification: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda {
    pub d: u32,
    pub alpha: String,
    pub beta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLaurent {
    pub d: u32,
    pub value: LaurentJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiOutput {
    pub model: Model,
    pub d: u32,
    pub phi: LaurentJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatorOutput {
    pub model: Model,
    pub d: u32,
    pub correlator: LaurentJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantOutput {
    pub model: Model,
    pub d: u32,
    pub a: u32,
    pub b: u32,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyOutput {
    pub model: Model,
    pub max_d: u32,
    pub lambdas: Vec<Lambda>,
    pub correlators: Vec<DegreeLaurent>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldRow {
    pub d: u32,
    pub n_d: String,
    pub m_d: String,
    #[serde(rename = "N_d")]
    pub instanton: String,
    pub lambda: Lambda,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreefoldOutput {
    pub model: Model,
    pub rows: Vec<ThreefoldRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorOutput {
    pub model: Model,
    pub max_d: u32,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub holds: bool,
    pub series_identity: bool,
    pub comb_form: bool,
    pub first_failing_degree: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bundle {
    pub n: usize,
    pub base_cutoff: u32,
    pub degrees: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeLaurentOutput {
    pub bundle: Bundle,
    pub d: u32,
    pub value: LaurentJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PorteousOutput {
    pub bundle: Bundle,
    pub result: Vec<ClassTerm>,
    pub formula: Vec<ClassTerm>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeLambda {
    pub e: u32,
    pub t: String,
    pub constant: Vec<ClassTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pushforward {
    pub d: u32,
    pub class: Vec<ClassTerm>,
    pub matches_formula: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCyOutput {
    pub bundle: Bundle,
    pub max_d: u32,
    pub lambdas: Vec<RelativeLambda>,
    pub lambdas_match_formula: bool,
    pub pushforwards: Vec<Pushforward>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestOutput {
    pub criteria: Vec<Criterion>,
    pub passed: bool,
}
