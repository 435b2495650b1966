//! Argument parsing and command execution for the `gw` binary.

pub mod json;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use gw_core::calabi_yau::{correlator, threefold_report};
use gw_core::correlators::one_point_invariant;
use gw_core::relative::{
    derive_linear_cy_lambdas, linear_cy_expected_pushforward, linear_cy_lambda,
    linear_cy_pushforward, porteous_formula, porteous_lines, relative_euler, relative_phi,
    RelativeModel,
};
use gw_core::selftest::{criterion_ids, run_criterion};
use gw_core::{
    phi, solve_calabi_yau, verify_mirror_identity, CIModel, CohClass, Error, Execution,
    LaurentPoly, Rational, Result,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "gw",
    version,
    about = "Exact one-point Gromov-Witten invariants of complete intersections"
)]
pub struct Cli {
    /// Output format on stdout.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Evaluate comb sums on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Dimension of the ambient projective space.
    #[arg(long)]
    pub n: usize,
    /// Hypersurface degrees, comma separated or repeated; omit for P^n.
    #[arg(long = "l", value_delimiter = ',', num_args = 1..)]
    pub degrees: Vec<u32>,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    /// Fiber dimension; the bundle has rank n+1.
    #[arg(long)]
    pub n: usize,
    /// Base classes above this degree are discarded.
    #[arg(long, default_value_t = 4)]
    pub base_cutoff: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The hypergeometric Laurent polynomial phi_d.
    Phi {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        d: u32,
    },
    /// The degree-d one-point correlator.
    Correlator {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        d: u32,
    },
    /// The invariant with psi^a and h^b.
    Invariant {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
    },
    /// Calabi-Yau correlators and linear forms up to degree max-d.
    Cy {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        max_d: u32,
    },
    /// Curve counts of the quintic threefold.
    Quintic {
        #[arg(long, default_value_t = 4)]
        max_d: u32,
    },
    /// Mirror coefficients and a check of the mirror identity.
    Mirror {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        max_d: u32,
    },
    /// Projective bundles over a formal base.
    #[command(subcommand)]
    Relative(RelativeCommand),
    /// Runs the acceptance suite.
    Selftest {
        /// Run only this criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum RelativeCommand {
    /// The relative equivariant Euler class of degree d.
    Euler {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        d: u32,
    },
    /// phi_d with the relative Euler class.
    Phi {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long = "l", value_delimiter = ',', num_args = 1..)]
        degrees: Vec<u32>,
        #[arg(long)]
        d: u32,
    },
    /// Push-forward of lines meeting m linear sections.
    Porteous {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        m: usize,
    },
    /// Linear forms and push-forwards for n+1 sections of O(1).
    LinearCy {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long, default_value_t = 4)]
        max_d: u32,
    },
}

/// A finished command: its text rendering, its JSON form, and whether it
/// counts as success (a failing self-test does not).
#[derive(Debug)]
pub struct Report {
    pub text: String,
    /// Pretty-printed JSON, newline terminated.
    pub json: String,
    pub success: bool,
}

fn report<T: Serialize>(text: String, value: &T) -> Report {
    Report {
        text,
        json: serde_json::to_string_pretty(value).expect("serializable") + "\n",
        success: true,
    }
}

fn model_json(model: &CIModel) -> json::Model {
    json::Model {
        n: model.n(),
        degrees: model.degrees().to_vec(),
        classification: model.classification().to_string(),
    }
}

fn bundle_json(model: &RelativeModel) -> json::Bundle {
    json::Bundle {
        n: model.n(),
        base_cutoff: model.base_cutoff(),
        degrees: model.degrees().to_vec(),
    }
}

fn header(model: &CIModel) -> String {
    format!(
        "X = {:?} in P^{} ({})",
        model.degrees(),
        model.n(),
        model.classification()
    )
}

/// `α h + β t` with the sign of `β` folded into the operator.
fn linear_form(alpha: &Rational, beta: &Rational) -> String {
    if beta.is_negative() {
        format!("{alpha}*h - {}*t", -beta)
    } else {
        format!("{alpha}*h + {beta}*t")
    }
}

impl ModelArgs {
    fn model(&self) -> Result<CIModel> {
        CIModel::classify(self.n, &self.degrees)
    }
}

impl Cli {
    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report> {
    let exec = cli.exec();
    match &cli.command {
        Command::Phi { model, d } => {
            let model = model.model()?;
            let value = phi(&model, *d);
            let out = json::PhiOutput {
                model: model_json(&model),
                d: *d,
                phi: json::laurent(&value),
            };
            Ok(report(format!("{value}\n"), &out))
        }
        Command::Correlator { model, d } => {
            let model = model.model()?;
            let value = correlator(&model, *d, exec)?;
            let out = json::CorrelatorOutput {
                model: model_json(&model),
                d: *d,
                correlator: json::laurent(&value),
            };
            Ok(report(format!("{value}\n"), &out))
        }
        Command::Invariant { model, d, a, b } => {
            let model = model.model()?;
            let value = one_point_invariant(&correlator(&model, *d, exec)?, *a, *b)?;
            let out = json::InvariantOutput {
                model: model_json(&model),
                d: *d,
                a: *a,
                b: *b,
                value: json::rational(&value),
            };
            Ok(report(format!("{value}\n"), &out))
        }
        Command::Cy { model, max_d } => {
            let model = model.model()?;
            let solution = solve_calabi_yau(&model, *max_d, exec)?;
            let mut text = header(&model) + "\n";
            let mut lambdas = Vec::new();
            for (d, l) in (1..).zip(&solution.lambdas) {
                writeln!(text, "lambda_{d} = {}", linear_form(&l.alpha, &l.beta)).unwrap();
                lambdas.push(json::Lambda {
                    d,
                    alpha: json::rational(&l.alpha),
                    beta: json::rational(&l.beta),
                });
            }
            let mut correlators = Vec::new();
            for (d, c) in (0..).zip(&solution.correlators) {
                writeln!(text, "d = {d}: {c}").unwrap();
                correlators.push(json::DegreeLaurent {
                    d,
                    value: json::laurent(c),
                });
            }
            let out = json::CyOutput {
                model: model_json(&model),
                max_d: *max_d,
                lambdas,
                correlators,
            };
            Ok(report(text, &out))
        }
        Command::Quintic { max_d } => {
            let r = threefold_report(&CIModel::quintic(), *max_d, exec)?;
            let mut text = header(&r.model) + "\n";
            let mut rows = Vec::new();
            for row in &r.rows {
                writeln!(
                    text,
                    "d = {}: n_d = {}, m_d = {}, N_d = {}, lambda_d = {}",
                    row.d,
                    row.n_d,
                    row.m_d,
                    row.instanton,
                    linear_form(&row.lambda.alpha, &row.lambda.beta)
                )
                .unwrap();
                rows.push(json::ThreefoldRow {
                    d: row.d,
                    n_d: json::rational(&row.n_d),
                    m_d: json::rational(&row.m_d),
                    instanton: json::rational(&row.instanton),
                    lambda: json::Lambda {
                        d: row.d,
                        alpha: json::rational(&row.lambda.alpha),
                        beta: json::rational(&row.lambda.beta),
                    },
                });
            }
            let out = json::ThreefoldOutput {
                model: model_json(&r.model),
                rows,
            };
            Ok(report(text, &out))
        }
        Command::Mirror { model, max_d } => {
            let model = model.model()?;
            let r = verify_mirror_identity(&model, *max_d, exec)?;
            let mut text = header(&model) + "\n";
            for e in 0..r.mirror.max_degree() {
                writeln!(
                    text,
                    "a_{} = {}, b_{} = {}",
                    e + 1,
                    r.mirror.a[e],
                    e + 1,
                    r.mirror.b[e]
                )
                .unwrap();
            }
            match r.first_failing_degree {
                None => writeln!(text, "mirror identity holds modulo q^{}", max_d + 1),
                Some(k) => writeln!(text, "mirror identity FAILS at q^{k}"),
            }
            .unwrap();
            let out = json::MirrorOutput {
                model: model_json(&model),
                max_d: *max_d,
                a: r.mirror.a.iter().map(json::rational).collect(),
                b: r.mirror.b.iter().map(json::rational).collect(),
                holds: r.holds,
                series_identity: r.series_identity,
                comb_form: r.comb_form,
                first_failing_degree: r.first_failing_degree,
            };
            Ok(report(text, &out))
        }
        Command::Relative(command) => run_relative(command),
        Command::Selftest { criterion } => {
            let ids: Vec<u32> = match criterion {
                Some(id) => vec![*id],
                None => criterion_ids().collect(),
            };
            let mut text = String::new();
            let mut criteria = Vec::new();
            for id in ids {
                let outcome = run_criterion(id, exec)
                    .ok_or_else(|| Error::OutOfRange(format!("no criterion {id}")))?;
                writeln!(text, "{outcome}").unwrap();
                criteria.push(json::Criterion {
                    id: outcome.id,
                    name: outcome.name.to_string(),
                    passed: outcome.passed,
                    detail: outcome.detail,
                });
            }
            let passed = criteria.iter().all(|c| c.passed);
            let out = json::SelftestOutput { criteria, passed };
            let mut r = report(text, &out);
            r.success = passed;
            Ok(r)
        }
    }
}

fn run_relative(command: &RelativeCommand) -> Result<Report> {
    match command {
        RelativeCommand::Euler { bundle, d } => {
            let model = RelativeModel::new(bundle.n, bundle.base_cutoff, &[])?;
            let value = relative_euler(&model, *d);
            let out = json::RelativeLaurentOutput {
                bundle: bundle_json(&model),
                d: *d,
                value: json::laurent(&value),
            };
            Ok(report(format!("{value}\n"), &out))
        }
        RelativeCommand::Phi { bundle, degrees, d } => {
            let model = RelativeModel::new(bundle.n, bundle.base_cutoff, degrees)?;
            let value = relative_phi(&model, *d);
            let out = json::RelativeLaurentOutput {
                bundle: bundle_json(&model),
                d: *d,
                value: json::laurent(&value),
            };
            Ok(report(format!("{value}\n"), &out))
        }
        RelativeCommand::Porteous { bundle, m } => {
            let model = RelativeModel::new(bundle.n, bundle.base_cutoff, &vec![1; *m])?;
            let result = porteous_lines(&model)?;
            let formula = porteous_formula(&model);
            let matches = result == formula;
            let text = format!(
                "{result}\nformula s_(m-n+1)^2 - s_(m-n) s_(m-n+2) = {formula} ({})\n",
                if matches { "match" } else { "MISMATCH" }
            );
            let out = json::PorteousOutput {
                bundle: bundle_json(&model),
                result: json::class_terms(&result),
                formula: json::class_terms(&formula),
                matches,
            };
            Ok(report(text, &out))
        }
        RelativeCommand::LinearCy { bundle, max_d } => {
            let model = RelativeModel::linear_calabi_yau(bundle.n, bundle.base_cutoff)?;
            let derived = derive_linear_cy_lambdas(&model, *max_d)?;
            let mut text = String::new();
            let mut lambdas = Vec::new();
            let mut lambdas_match = true;
            for (e, l) in (1..).zip(&derived) {
                lambdas_match &= *l == linear_cy_lambda(&model, e)?;
                let form =
                    &LaurentPoly::monomial(CohClass::constant(model.spec(), l.t_coeff.clone()), 1)
                        + &LaurentPoly::from_class(l.constant.clone());
                writeln!(text, "lambda_{e} = {form}").unwrap();
                lambdas.push(json::RelativeLambda {
                    e,
                    t: json::rational(&l.t_coeff),
                    constant: json::class_terms(&l.constant),
                });
            }
            let mut pushforwards = Vec::new();
            for d in 1..=*max_d {
                let class = linear_cy_pushforward(&model, d, *max_d)?;
                let matches = class == linear_cy_expected_pushforward(&model, d);
                writeln!(
                    text,
                    "d = {d}: {class}{}",
                    if matches { "" } else { " (MISMATCH)" }
                )
                .unwrap();
                pushforwards.push(json::Pushforward {
                    d,
                    class: json::class_terms(&class),
                    matches_formula: matches,
                });
            }
            let out = json::LinearCyOutput {
                bundle: bundle_json(&model),
                max_d: *max_d,
                lambdas,
                lambdas_match_formula: lambdas_match,
                pushforwards,
            };
            Ok(report(text, &out))
        }
    }
}
