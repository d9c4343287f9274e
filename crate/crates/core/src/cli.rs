//! Command-line front end: argument parsing, dispatch and reports.

use std::ffi::OsString;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::admissibility::{admissible, langer_textorius, LimitProbe};
use crate::boundary::{von_neumann_triplet, BoundaryError, BoundaryRelation, OrdinaryTriplet};
use crate::coupling::{couple, krein_rhs, tau_of_extension};
use crate::io::{MatrixJson, ModelFile, ObjectJson, RelationJson};
use crate::kreinspace::KreinRelation;
use crate::linalg::{max_abs, C64};
use crate::linrel::Tol;
use crate::models::ParamModel;
use crate::nevanlinna::{family_from_pair, nev_kernel};
use crate::selftest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "extensio", version, about = "Boundary relations, Weyl families and couplings in finite dimension")]
struct Cli {
    /// Angle and residual tolerance for all checks.
    #[arg(long, global = true, env = "EXTENSIO_TOL")]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    report: ReportFormat,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kreĭn-space unitarity of a relation Γ: C^(2n) -> C^(2m).
    CheckUnitary { file: String, name: String },
    /// Value of a Weyl family or parameter at a nonreal point.
    WeylEval {
        file: String,
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Selfadjoint extension coupling a triplet with a boundary relation.
    Couple {
        file: String,
        triplet: String,
        chi: String,
        /// Write the coupled scene as a model file.
        #[arg(long)]
        out: Option<String>,
    },
    /// Compressed resolvent of a scene against the Kreĭn-Naimark formula.
    Resolvent {
        file: String,
        scene: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Admissibility of a parameter with respect to a triplet.
    Admissibility {
        file: String,
        triplet: String,
        pair: String,
        /// Base point of the Langer-Textorius test.
        #[arg(long, allow_hyphen_values = true)]
        z0: Option<String>,
    },
    /// Runs the oracle property suite.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Cases per property; defaults vary per property.
        #[arg(long)]
        cases: Option<usize>,
    },
}

/// Machine-readable outcome of one subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub op: &'static str,
    pub inputs: Value,
    pub residuals: Value,
    pub verdict: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    fn text(&self) -> String {
        let mut s = format!("op: {}\n", self.op);
        for (k, v) in [("inputs", &self.inputs), ("residuals", &self.residuals), ("data", &self.data), ("verdict", &self.verdict)] {
            if !v.is_null() {
                s.push_str(&format!("{k}: {}\n", render(v)));
            }
        }
        s
    }
}

fn render(v: &Value) -> String {
    match v {
        Value::Object(m) => m.iter().map(|(k, v)| format!("\n  {k} = {}", render_inline(v))).collect(),
        other => render_inline(other),
    }
}

fn render_inline(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Exit code and everything printed.
#[derive(Clone, Debug)]
pub struct CliOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    C64::from_str(s.trim()).map_err(|_| format!("cannot parse `{s}` as a complex number a+bi"))
}

fn nonreal(s: &str) -> Result<C64, InputError> {
    let z = parse_complex(s).map_err(InputError)?;
    if z.im == 0.0 {
        return Err(InputError("lambda must be nonreal".into()));
    }
    Ok(z)
}

fn cjson(z: C64) -> Value {
    json!([z.re, z.im])
}

fn mjson(m: &crate::linalg::CMat) -> Value {
    serde_json::to_value(MatrixJson::from_mat(m)).expect("serializable")
}

pub fn cli_run<I, T>(argv: I) -> CliOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let msg = e.render().to_string();
            return if code == EXIT_OK {
                CliOutcome { code, stdout: msg, stderr: String::new() }
            } else {
                CliOutcome { code, stdout: String::new(), stderr: msg }
            };
        }
    };
    let tol = match cli.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => {
            return CliOutcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: tolerance must be positive, got {t}\n") }
        }
        Some(t) => Tol::with_check(t),
        None => Tol::default(),
    };
    match dispatch(&cli.cmd, &tol) {
        Ok((report, passed)) => CliOutcome {
            code: if passed { EXIT_OK } else { EXIT_CHECK_FAILED },
            stdout: match cli.report {
                ReportFormat::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
                ReportFormat::Text => report.text(),
            },
            stderr: String::new(),
        },
        Err(InputError(msg)) => CliOutcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}

fn dispatch(cmd: &Command, tol: &Tol) -> Result<(Report, bool), InputError> {
    match cmd {
        Command::CheckUnitary { file, name } => check_unitary(&ModelFile::load(file)?, file, name, tol),
        Command::WeylEval { file, name, lambda } => {
            let l = nonreal(lambda)?;
            weyl_eval(&ModelFile::load(file)?, file, name, l, tol)
        }
        Command::Couple { file, triplet, chi, out } => run_couple(&ModelFile::load(file)?, file, triplet, chi, out.as_deref(), tol),
        Command::Resolvent { file, scene, lambda } => {
            let l = nonreal(lambda)?;
            resolvent(&ModelFile::load(file)?, file, scene, l, tol)
        }
        Command::Admissibility { file, triplet, pair, z0 } => {
            let z0 = match z0 {
                Some(s) => nonreal(s).map_err(|_| InputError("z0 must be nonreal".into()))?,
                None => C64::new(0.0, 1.0),
            };
            run_admissibility(&ModelFile::load(file)?, file, triplet, pair, z0, tol)
        }
        Command::Selftest { seed, cases } => Ok(run_selftest(*seed, *cases)),
    }
}

fn check_unitary(f: &ModelFile, file: &str, name: &str, tol: &Tol) -> Result<(Report, bool), InputError> {
    let g = f.relation(name)?;
    let k = KreinRelation::new(g)?;
    let isometric = k.is_isometric(tol);
    let unitary = k.is_unitary(tol);
    let gap = k.krein_adjoint().rel().gap(&k.rel().inverse());
    Ok((
        Report {
            op: "check-unitary",
            inputs: json!({"file": file, "name": name, "n": k.n(), "m": k.m()}),
            residuals: json!({"isometry": k.isometry_residual(), "adjoint_inverse_gap": gap}),
            verdict: json!({"isometric": isometric, "unitary": unitary}),
            data: Value::Null,
        },
        unitary,
    ))
}

fn weyl_eval(f: &ModelFile, file: &str, name: &str, l: C64, tol: &Tol) -> Result<(Report, bool), InputError> {
    let inputs = json!({"file": file, "name": name, "lambda": cjson(l)});
    let (value, residuals) = match f.get(name)? {
        ObjectJson::Pair(_) => {
            let p = f.pair(name)?;
            let v = family_from_pair(&p, l)?;
            let kernel = nev_kernel(&p, l, l)?;
            let min_eig = crate::linalg::herm_eigvals(&kernel).first().copied().unwrap_or(0.0);
            (v, json!({"nevanlinna_kernel_min_eig": min_eig}))
        }
        _ => {
            let g = f.boundary(name, tol)?;
            let v = g.weyl(l)?;
            let res = match crate::boundary::check_weyl_identities(&g, l, l.conj() + C64::new(0.5, 0.0)) {
                Ok(r) => json!({"gamma_identity": r.gamma_residual, "weyl_identity": r.weyl_residual}),
                Err(_) => json!({}),
            };
            (v, res)
        }
    };
    let data = match value.as_matrix() {
        Ok(m) => json!({"matrix": mjson(&m)}),
        Err(_) => json!({"relation": serde_json::to_value(RelationJson::from_rel(&value)).expect("serializable")}),
    };
    let dissipative = if l.im > 0.0 { value.classify(tol).dissipative } else { value.classify(tol).accumulative };
    Ok((
        Report {
            op: "weyl-eval",
            inputs,
            residuals,
            verdict: json!({"operator": value.is_operator(), "mul_dim": value.mul().dim(), "nevanlinna_sign": dissipative}),
            data,
        },
        dissipative,
    ))
}

fn run_couple(f: &ModelFile, file: &str, triplet: &str, chi: &str, out: Option<&str>, tol: &Tol) -> Result<(Report, bool), InputError> {
    let pi = f.triplet(triplet, tol)?;
    let chi_rel = f.boundary(chi, tol)?;
    let a = couple(&pi, &chi_rel, tol)?;
    let sa_gap = a.adjoint().gap(&a);
    let selfadjoint = a.classify(tol).selfadjoint;
    if let Some(path) = out {
        let mut o = ModelFile::default();
        o.insert(triplet, f.get(triplet)?.clone());
        o.insert(
            "coupled",
            ObjectJson::Scene { a_tilde: RelationJson::from_rel(&a), h1: pi.base().n(), triplet: Some(triplet.to_string()) },
        );
        std::fs::write(path, o.to_json() + "\n").map_err(|e| InputError(format!("cannot write {path}: {e}")))?;
    }
    Ok((
        Report {
            op: "couple",
            inputs: json!({"file": file, "triplet": triplet, "chi": chi, "out": out}),
            residuals: json!({"selfadjoint_gap": sa_gap}),
            verdict: json!({"selfadjoint": selfadjoint, "operator": a.is_operator(), "mul_dim": a.mul().dim()}),
            data: json!({"dim": a.dim_in(), "h1": pi.base().n(), "h2": chi_rel.n()}),
        },
        selfadjoint,
    ))
}

fn resolvent(f: &ModelFile, file: &str, scene: &str, l: C64, tol: &Tol) -> Result<(Report, bool), InputError> {
    let (sc, tname) = f.scene(scene, tol)?;
    let pi: OrdinaryTriplet = match &tname {
        Some(t) => f.triplet(t, tol)?,
        None => von_neumann_triplet(&sc.s1, None, tol)?,
    };
    let tau = tau_of_extension(&sc, &pi, tol)?;
    let lhs = sc.generalized_resolvent(l)?.compressed;
    let rhs = krein_rhs(&pi, &tau, l)?;
    let residual = max_abs(&(&lhs - &rhs));
    let passed = residual < tol.residual;
    Ok((
        Report {
            op: "resolvent",
            inputs: json!({"file": file, "scene": scene, "lambda": cjson(l), "triplet": tname.unwrap_or_else(|| "von-neumann".into())}),
            residuals: json!({"max_abs": residual}),
            verdict: json!({"pass": passed}),
            data: json!({"lhs": mjson(&lhs), "rhs": mjson(&rhs)}),
        },
        passed,
    ))
}

fn run_admissibility(f: &ModelFile, file: &str, triplet: &str, pair: &str, z0: C64, tol: &Tol) -> Result<(Report, bool), InputError> {
    let pi = f.triplet(triplet, tol)?;
    let tau: ParamModel = f.pair(pair)?;
    let chi: Option<BoundaryRelation> = match tau.realize(tol) {
        Ok(c) => Some(c),
        Err(BoundaryError::RealizationUnavailable(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let probe = LimitProbe::standard(pi.base().m());
    let r = admissible(&pi, &tau, chi.as_ref(), &probe, tol)?;
    let lt = langer_textorius(&pi, &tau, z0, &probe)?;
    let (verdict, basis) = match (r.exact_verdict(), r.refined_verdict()) {
        (Some(v), _) => (v, "exact"),
        (None, Some(v)) => (v, "refined-limit"),
        (None, None) => (r.limit_verdict(), "limit"),
    };
    Ok((
        Report {
            op: "admissibility",
            inputs: json!({"file": file, "triplet": triplet, "pair": pair, "z0": cjson(z0)}),
            residuals: json!({}),
            verdict: json!({
                "admissible": verdict,
                "basis": basis,
                "adm1": r.adm1_pass,
                "adm2": r.adm2_pass,
                "langer_textorius": lt,
                "exact_mul_dim": r.exact_mul_dim,
                "limit_agrees_with_exact": r.agreement,
            }),
            data: Value::Null,
        },
        verdict,
    ))
}

fn run_selftest(seed: u64, cases: Option<usize>) -> (Report, bool) {
    let outcomes = selftest::run_all(seed, cases);
    let passed = outcomes.iter().all(|o| o.passed);
    let residuals: serde_json::Map<String, Value> = outcomes.iter().map(|o| (format!("criterion_{}", o.id), json!(o.max_residual))).collect();
    (
        Report {
            op: "selftest",
            inputs: json!({"seed": seed, "cases": cases}),
            residuals: Value::Object(residuals),
            verdict: json!({"pass": passed, "failed": outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect::<Vec<_>>()}),
            data: json!({"criteria": outcomes, "lines": outcomes.iter().map(|o| o.line()).collect::<Vec<_>>()}),
        },
        passed,
    )
}
