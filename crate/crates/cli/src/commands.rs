use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use twomode_core::exponent::{ComplexLabel, GaussianKet, NormalizationClass};
use twomode_core::fock::{fock_expand, FockVector};
use twomode_core::squeezer::{
    squeezed_vacuum, unitarity_check, variance_closed_form, variance_fock, variance_phase_space,
    SqueezeParams,
};
use twomode_core::states::{make_eta_state, make_eta_theta_state};
use twomode_core::tolerances::{
    DEFAULT_CUTOFF, DEFAULT_GUARD, UNITARITY, VARIANCE_BOUND_SLACK, VARIANCE_CLOSED, VARIANCE_FOCK,
    VARIANCE_FOCK_MAX_LAMBDA,
};
use twomode_core::verify::report::{fmt_f64, to_canonical_json};
use twomode_core::verify::{assemble_report, run_suite, GridSpec, Suite, SuiteConfig, SuiteReport};
use twomode_core::check_theta;

use crate::config::{parse_pair, Settings};
use crate::{CliError, Common};

/// Resolved settings and the output path. The path is kept out of the
/// settings so the embedded config does not depend on where output goes.
fn resolve(common: &Common) -> Result<(Settings, Option<PathBuf>), CliError> {
    let mut s = Settings::load(common.config.as_deref())?;
    s.set_flag("theta", common.theta.clone());
    s.set_flag("lambda", common.lambda.clone());
    s.set_flag("eta", common.eta.clone());
    s.set_flag("cutoff", common.cutoff.clone());
    s.set_flag("guard", common.guard.clone());
    s.set_flag("grid-radius", common.grid_radius.clone());
    s.set_flag("grid-step", common.grid_step.clone());
    s.set_flag("seed", common.seed.clone());
    let out = common.out.clone().or(s.take("out").map(PathBuf::from));
    Ok((s, out))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    config: &'a BTreeMap<String, String>,
    config_sha256: String,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(command: &str, s: &Settings, body: T) -> String {
    to_canonical_json(&Envelope { command, config: s.as_map(), config_sha256: s.hash(), body })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    Eta,
    EtaTheta,
    SqueezedVacuum,
}

#[derive(Serialize)]
struct EtaEcho {
    re: f64,
    im: f64,
    eta1: f64,
    eta2: f64,
}

#[derive(Serialize)]
struct StateDump {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    eta: Option<EtaEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    class: NormalizationClass,
    c: [f64; 2],
    w: [[f64; 2]; 2],
    f: [[[f64; 2]; 2]; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    fock: Option<FockVector>,
}

#[derive(Serialize)]
struct StateBody {
    state: StateDump,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn theta_of(s: &Settings) -> Result<f64, CliError> {
    let t = s.parsed::<f64>("theta")?.ok_or_else(|| CliError::Usage("--theta is required".into()))?;
    Ok(check_theta(t)?)
}

pub fn state(common: &Common, kind: StateKind, with_fock: bool) -> Result<(), CliError> {
    let (mut s, out) = resolve(common)?;
    let label = match kind {
        StateKind::Eta => "eta",
        StateKind::EtaTheta => "eta_theta",
        StateKind::SqueezedVacuum => "squeezed_vacuum",
    };
    s.insert_default("kind", label);
    if kind != StateKind::SqueezedVacuum {
        s.insert_default("eta", "0,0");
    }
    if with_fock {
        s.insert_default("cutoff", DEFAULT_CUTOFF);
        s.insert_default("fock", true);
    }
    let eta = s.get("eta").map(parse_pair).transpose()?.map(|[re, im]| ComplexLabel::new(C64::new(re, im)));
    let (ket, theta, lambda): (GaussianKet, Option<f64>, Option<f64>) = match kind {
        StateKind::Eta => (make_eta_state(eta.expect("defaulted")), None, None),
        StateKind::EtaTheta => {
            let t = theta_of(&s)?;
            (make_eta_theta_state(eta.expect("defaulted"), t)?, Some(t), None)
        }
        StateKind::SqueezedVacuum => {
            let t = theta_of(&s)?;
            let l = s.parsed::<f64>("lambda")?.ok_or_else(|| CliError::Usage("--lambda is required".into()))?;
            (squeezed_vacuum(&SqueezeParams::new(l, t)?), Some(t), Some(l))
        }
    };
    let fock = if with_fock {
        let n = s.parsed::<usize>("cutoff")?.expect("defaulted");
        Some(fock_expand(&ket, n))
    } else {
        None
    };
    let f = ket.f();
    let dump = StateDump {
        kind: label,
        eta: eta.filter(|_| kind != StateKind::SqueezedVacuum).map(|e| EtaEcho {
            re: e.eta().re,
            im: e.eta().im,
            eta1: e.eta1(),
            eta2: e.eta2(),
        }),
        theta,
        lambda,
        class: ket.class(),
        c: pair(ket.c()),
        w: ket.w().map(pair),
        f: [[pair(f.get(0, 0)), pair(f.get(0, 1))], [pair(f.get(1, 0)), pair(f.get(1, 1))]],
        fock,
    };
    write_text(out.as_deref(), &envelope("state", &s, StateBody { state: dump }))
}

fn suite_config(s: &Settings) -> Result<SuiteConfig, CliError> {
    let mut cfg = SuiteConfig::default();
    if let Some(t) = s.parsed::<f64>("theta")? {
        cfg.thetas = vec![t];
    }
    if let Some(ts) = s.list::<f64>("theta-grid")? {
        cfg.thetas = ts;
    }
    for &t in &cfg.thetas {
        check_theta(t)?;
    }
    if let Some(l) = s.parsed::<f64>("lambda")? {
        cfg.lambdas = vec![l];
    }
    if let Some(e) = s.get("eta") {
        cfg.squeeze_eta = parse_pair(e)?;
    }
    cfg.cutoff = s.parsed("cutoff")?.unwrap_or(cfg.cutoff);
    cfg.guard = s.parsed("guard")?.unwrap_or(cfg.guard);
    if cfg.guard >= cfg.cutoff {
        return Err(CliError::Usage(format!("guard {} must be below cutoff {}", cfg.guard, cfg.cutoff)));
    }
    cfg.grid_radius = s.parsed("grid-radius")?.unwrap_or(cfg.grid_radius);
    cfg.grid_step = s.parsed("grid-step")?.unwrap_or(cfg.grid_step);
    for &t in &cfg.completeness_thetas {
        GridSpec::new(cfg.grid_radius, cfg.grid_step, t, cfg.completeness_cutoff, cfg.completeness_subspace)?;
    }
    cfg.seed = s.parsed("seed")?.unwrap_or(cfg.seed);
    Ok(cfg)
}

#[derive(Serialize, Deserialize)]
struct ReportBody {
    report: SuiteReport,
}

pub fn verify(common: &Common, suite: Option<String>, theta_grid: Option<String>) -> Result<(), CliError> {
    let (mut s, out) = resolve(common)?;
    s.set_flag("suite", suite);
    s.set_flag("theta-grid", theta_grid);
    s.insert_default("suite", "all");
    s.insert_default("cutoff", DEFAULT_CUTOFF);
    s.insert_default("guard", DEFAULT_GUARD);
    s.insert_default("seed", 0);
    let suite: Suite = s.get("suite").expect("defaulted").parse()?;
    let cfg = suite_config(&s)?;

    let report = assemble_report(run_suite(suite, &cfg), cfg.seed);
    for e in &report.experiments {
        let status = if e.pass { "PASS" } else { "FAIL" };
        let detail: Vec<String> =
            e.violations().iter().map(|(k, x, _)| format!("{k}={}", fmt_f64(*x))).collect();
        eprintln!("{status} {:?} {}", e.kind, detail.join(" "));
    }
    let overall = report.overall_pass;
    let n = report.experiments.len();
    write_text(out.as_deref(), &envelope("verify", &s, ReportBody { report }))?;
    if overall {
        Ok(())
    } else {
        Err(CliError::Failed(format!("suite {suite} failed ({n} experiments)")))
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(CliError::Usage(format!("expected min,max,count, got {s:?}")));
    };
    let num = |x: &str| x.parse::<f64>().map_err(|e| CliError::Usage(format!("{x:?}: {e}")));
    let (lo, hi) = (num(lo)?, num(hi)?);
    let n: usize = n.parse().map_err(|e| CliError::Usage(format!("{n:?}: {e}")))?;
    match n {
        0 => Err(CliError::Usage("grid count must be positive".into())),
        1 => Ok(vec![lo]),
        _ => Ok((0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()),
    }
}

struct ScanRow {
    lambda: f64,
    theta: f64,
    s: f64,
    phi: f64,
    closed: (f64, f64),
    fock: Option<(f64, f64)>,
    ps: (f64, f64),
    unitarity: f64,
}

impl ScanRow {
    fn compute(lambda: f64, theta: f64, cutoff: usize, fock_max: f64) -> Result<Self, CliError> {
        let p = SqueezeParams::new(lambda, theta)?;
        let fock = if lambda.abs() <= fock_max { Some(variance_fock(&p, cutoff)?) } else { None };
        Ok(ScanRow {
            lambda,
            theta,
            s: p.s,
            phi: p.phi,
            closed: variance_closed_form(&p),
            fock,
            ps: variance_phase_space(&p)?,
            unitarity: unitarity_check(&p),
        })
    }

    fn bound(&self) -> f64 {
        (2.0 * self.lambda).exp()
    }

    fn bound_holds(&self) -> bool {
        self.closed.1 - self.bound() >= -VARIANCE_BOUND_SLACK
    }

    fn pass(&self) -> bool {
        let (x, p) = self.closed;
        let ps_ok = (x - self.ps.0).abs() < VARIANCE_CLOSED && (p - self.ps.1).abs() < VARIANCE_CLOSED;
        let fock_ok = self
            .fock
            .is_none_or(|(xf, pf)| ((x - xf) / x).abs() < VARIANCE_FOCK && ((p - pf) / p).abs() < VARIANCE_FOCK);
        ps_ok && fock_ok && self.bound_holds() && self.unitarity < UNITARITY
    }
}

pub fn scan(
    common: &Common,
    lambda_grid: Option<String>,
    theta_grid: Option<String>,
    fock_max_lambda: Option<String>,
    schema: Option<String>,
) -> Result<(), CliError> {
    let (mut s, out) = resolve(common)?;
    s.set_flag("lambda-grid", lambda_grid);
    s.set_flag("theta-grid", theta_grid);
    s.set_flag("fock-max-lambda", fock_max_lambda);
    s.set_flag("schema", schema);
    s.insert_default("lambda-grid", "0,1,11");
    s.insert_default("theta-grid", format!("{},{},11", fmt_f64(PI / 12.0), fmt_f64(5.0 * PI / 12.0)));
    s.insert_default("fock-max-lambda", fmt_f64(VARIANCE_FOCK_MAX_LAMBDA));
    s.insert_default("cutoff", DEFAULT_CUTOFF);
    s.insert_default("schema", "squeezer");

    let lambdas = parse_range(s.get("lambda-grid").expect("defaulted"))?;
    let thetas = parse_range(s.get("theta-grid").expect("defaulted"))?;
    for &t in &thetas {
        check_theta(t)?;
    }
    let fock_max: f64 = s.parsed("fock-max-lambda")?.expect("defaulted");
    let cutoff: usize = s.parsed("cutoff")?.expect("defaulted");
    let full = match s.get("schema").expect("defaulted") {
        "squeezer" => true,
        "phase-space" => false,
        other => return Err(CliError::Usage(format!("unknown schema {other:?}; expected squeezer or phase-space"))),
    };

    let mut rows = Vec::with_capacity(lambdas.len() * thetas.len());
    for &l in &lambdas {
        for &t in &thetas {
            rows.push(ScanRow::compute(l, t, cutoff, fock_max)?);
        }
    }

    let mut w = csv::Writer::from_writer(Vec::new());
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let csv_err = |e: csv::Error| CliError::Failed(format!("csv: {e}"));
    if full {
        w.write_record([
            "lambda", "theta", "S", "phi", "varX_closed", "varP_closed", "varX_fock", "varP_fock", "varX_ps",
            "varP_ps", "unitarity_dev", "pass",
        ])
        .map_err(csv_err)?;
        for r in &rows {
            w.write_record([
                fmt_f64(r.lambda),
                fmt_f64(r.theta),
                fmt_f64(r.s),
                fmt_f64(r.phi),
                fmt_f64(r.closed.0),
                fmt_f64(r.closed.1),
                opt(r.fock.map(|f| f.0)),
                opt(r.fock.map(|f| f.1)),
                fmt_f64(r.ps.0),
                fmt_f64(r.ps.1),
                fmt_f64(r.unitarity),
                r.pass().to_string(),
            ])
            .map_err(csv_err)?;
        }
    } else {
        w.write_record(["theta", "lambda", "var_X_sum", "var_P_sum", "bound_e2lambda", "pass"]).map_err(csv_err)?;
        for r in &rows {
            w.write_record([
                fmt_f64(r.theta),
                fmt_f64(r.lambda),
                fmt_f64(r.ps.0),
                fmt_f64(r.ps.1),
                fmt_f64(r.bound()),
                r.bound_holds().to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failed(format!("csv: {e}")))?;
    let text = String::from_utf8(bytes).expect("csv output is UTF-8");
    write_text(out.as_deref(), &text)?;
    if let Some(p) = out {
        #[derive(Serialize)]
        struct Meta {
            rows: usize,
            failing_rows: usize,
        }
        let failing_rows = rows.iter().filter(|r| !r.pass()).count();
        let meta = envelope("scan", &s, Meta { rows: rows.len(), failing_rows });
        let mut name = p.into_os_string();
        name.push(".meta.json");
        std::fs::write(PathBuf::from(name), meta)?;
    }
    Ok(())
}

fn read_report(path: &Path) -> Result<SuiteReport, CliError> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let inner = value.get("report").cloned().unwrap_or(value);
    serde_json::from_value(inner).map_err(|e| CliError::Usage(format!("{}: not a suite report: {e}", path.display())))
}

pub fn report(input: &Path, common: &Common) -> Result<(), CliError> {
    let (_, out) = resolve(common)?;
    let rep = read_report(input)?;
    if let Some(dir) = out {
        std::fs::create_dir_all(&dir)?;
        for (i, e) in rep.experiments.iter().enumerate() {
            let kind = serde_json::to_value(e.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            std::fs::write(dir.join(format!("{i:02}_{kind}.csv")), e.to_csv())?;
        }
    }
    let mut out = String::new();
    for e in &rep.experiments {
        out.push_str(&format!("{} {:?}\n", if e.evaluate() { "PASS" } else { "FAIL" }, e.kind));
    }
    out.push_str(&format!(
        "overall {} ({} experiments, seed {})\n",
        if rep.overall_pass { "PASS" } else { "FAIL" },
        rep.experiments.len(),
        rep.seed
    ));
    std::io::stdout().write_all(out.as_bytes())?;
    if rep.overall_pass {
        Ok(())
    } else {
        Err(CliError::Failed("report records failing experiments".into()))
    }
}
