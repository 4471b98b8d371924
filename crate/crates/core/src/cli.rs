//! Command-line front end. [`run`] turns parsed arguments into a rendered
//! report and a pass flag; the binary maps those to output and exit codes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{catalog, sample_params, sample_same_weight_params, FamilyKind, FamilySpec};
use crate::interlacing::{interlace_check_with, InterlaceOptions};
use crate::stieltjes::{
    build_stieltjes_system, default_fd_step, hypothesis_report, monotonicity_verdict,
    zero_derivatives_fd, HypothesisReport, StieltjesSystem,
};
use crate::weights::{gram_matrix, max_offdiag_residual, pearson_residuals, weight_table};
use crate::zeros::{eq1_consistency, find_zeros, separation_check, ZeroProblem, ZeroSet};

/// Version of the JSON layout.
pub const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "copz",
    version,
    about = "Zeros of classical discrete orthogonal polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the family catalog.
    Families,
    /// Zeros of P_n for one family instance.
    Zeros {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
    },
    /// Zero trajectories while one parameter varies.
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        /// Initial sample count; midpoints are added where zeros move fast
        #[arg(long, default_value_t = 15)]
        steps: usize,
    },
    /// Hypotheses, eq1 residuals, orthogonality, separation and the
    /// derivative system for one instance.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        /// Parameter to study; defaults to every parameter with a claim.
        #[arg(long)]
        param: Option<String>,
        #[command(flatten)]
        tol: Tolerances,
    },
    /// The zero-derivative system against finite differences.
    Stieltjes {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        param: String,
    },
    /// Zeros for support sizes N and N+1 (N taken from --set N=..).
    Interlace {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        /// Run even when the weight changes with N.
        #[arg(long)]
        allow_weight_change: bool,
    },
    /// Randomized checks over the whole catalog.
    VerifyAll {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Parameter draws per family.
        #[arg(long, default_value_t = 3)]
        draws: usize,
        #[command(flatten)]
        tol: Tolerances,
    },
}

#[derive(Clone, Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: FamilyKind,
    /// Parameter assignment name=value; repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_assignment)]
    pub set: Vec<(String, f64)>,
}

impl FamilyArgs {
    pub fn spec(&self) -> Result<FamilySpec> {
        FamilySpec::new(self.family, self.set.iter().cloned().collect())
    }
}

#[derive(Clone, Copy, Debug, Args, Serialize)]
pub struct Tolerances {
    /// Relative agreement of the solved derivatives with finite differences.
    #[arg(long, default_value_t = 1e-4)]
    pub fd_tol: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub eq1_tol: f64,
    /// Largest relative off-diagonal Gram entry.
    #[arg(long, default_value_t = 1e-8)]
    pub orth_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            fd_tol: 1e-4,
            eq1_tol: 1e-6,
            orth_tol: 1e-8,
        }
    }
}

fn parse_family(s: &str) -> std::result::Result<FamilyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_assignment(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("'{v}' is not a number"))?;
    Ok((k.trim().to_string(), v))
}

/// Rendered report plus whether every asserted check passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub pass: bool,
}

fn render_json(command: &str, result: Value) -> String {
    let doc = json!({ "schema": SCHEMA, "command": command, "result": result });
    serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn e(x: f64) -> String {
    format!("{x:.6e}")
}

fn params_text(p: &BTreeMap<String, f64>) -> String {
    p.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let fmt = cli.format;
    match &cli.command {
        Command::Families => Ok(families(fmt)),
        Command::Zeros { family, n } => zeros(fmt, family, *n),
        Command::Sweep {
            family,
            n,
            param,
            from,
            to,
            steps,
        } => sweep(fmt, family, *n, param, (*from, *to), *steps),
        Command::Verify {
            family,
            n,
            param,
            tol,
        } => verify(fmt, family, *n, param.as_deref(), tol),
        Command::Stieltjes { family, n, param } => stieltjes(fmt, family, *n, param),
        Command::Interlace {
            family,
            n,
            allow_weight_change,
        } => interlace(fmt, family, *n, *allow_weight_change),
        Command::VerifyAll { seed, draws, tol } => verify_all(fmt, *seed, *draws, tol),
    }
}

fn families(fmt: Format) -> Outcome {
    let cat = catalog();
    let output = match fmt {
        Format::Json => render_json("families", to_value(&cat)),
        Format::Csv => {
            let mut s = String::from("family,name,grid,support,params,coefficients\n");
            for c in &cat {
                let params: Vec<&str> = c.params.iter().map(|p| p.name).collect();
                let _ = writeln!(
                    s,
                    "{},\"{}\",\"{}\",\"{}\",{},{:?}",
                    c.kind,
                    c.name,
                    c.grid,
                    c.support,
                    params.join(" "),
                    c.coefficients
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for c in &cat {
                let params: Vec<String> = c
                    .params
                    .iter()
                    .map(|p| format!("{} ({})", p.name, p.domain))
                    .collect();
                let _ = writeln!(s, "{} [{}]", c.kind, c.name);
                let _ = writeln!(s, "  grid: {}  support: {}", c.grid, c.support);
                let _ = writeln!(s, "  params: {}", params.join(", "));
                for claim in &c.claims {
                    let _ = writeln!(s, "  claim: {claim}");
                }
            }
            s
        }
    };
    Outcome { output, pass: true }
}

fn zeros(fmt: Format, args: &FamilyArgs, n: usize) -> Result<Outcome> {
    let problem = ZeroProblem::new(args.spec()?, n)?;
    let zs = find_zeros(&problem)?;
    let output = match fmt {
        Format::Json => render_json("zeros", to_value(&zs)),
        Format::Csv => {
            let mut s = String::from("index,s,x,residual\n");
            for (i, ((s_, x), r)) in zs
                .zeros_s
                .iter()
                .zip(&zs.zeros_x)
                .zip(&zs.residuals)
                .enumerate()
            {
                let _ = writeln!(s, "{},{s_},{x},{r}", i + 1);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} {} n={n}\n",
                args.family,
                params_text(&problem.family.params)
            );
            for (i, (s_, x)) in zs.zeros_s.iter().zip(&zs.zeros_x).enumerate() {
                let _ = writeln!(s, "  z{} s={} X={}", i + 1, e(*s_), e(*x));
            }
            s
        }
    };
    Ok(Outcome { output, pass: true })
}

fn sweep(
    fmt: Format,
    args: &FamilyArgs,
    n: usize,
    param: &str,
    range: (f64, f64),
    steps: usize,
) -> Result<Outcome> {
    let problem = ZeroProblem::new(args.spec()?, n)?.with_sweep(param)?;
    let v = monotonicity_verdict(&problem, param, range, steps)?;
    let output = match fmt {
        Format::Json => render_json("sweep", to_value(&v)),
        Format::Csv => {
            let cols: Vec<String> = (1..=n).map(|j| format!("z{j}")).collect();
            let mut s = format!("t,{}\n", cols.join(","));
            for (t, row) in v.ts.iter().zip(&v.zeros_x) {
                let vals: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                let _ = writeln!(s, "{t},{}", vals.join(","));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} {} n={n} sweep {param} over [{}, {}] ({} samples, {} inserted)\n",
                args.family,
                params_text(&problem.family.params),
                range.0,
                range.1,
                v.ts.len(),
                v.inserted
            );
            for z in &v.per_zero {
                let _ = writeln!(
                    s,
                    "  z{}: {:?}, {} reversals",
                    z.index, z.trend, z.reversals
                );
            }
            let _ = writeln!(
                s,
                "  direction: {:?}  claimed: {:?}  agrees: {:?}",
                v.direction, v.claimed, v.agrees
            );
            s
        }
    };
    Ok(Outcome { output, pass: true })
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub detail: String,
    /// Headline measurement, if the check has one.
    pub value: Option<f64>,
    /// `None` for informational lines.
    pub pass: Option<bool>,
}

impl Check {
    fn assert(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            detail: detail.into(),
            value: None,
            pass: Some(pass),
        }
    }

    fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            detail: detail.into(),
            value: None,
            pass: None,
        }
    }
}

fn render_checks(fmt: Format, command: &str, header: &str, checks: &[Check]) -> String {
    match fmt {
        Format::Json => render_json(
            command,
            json!({ "header": header, "checks": to_value(&checks) }),
        ),
        Format::Csv => {
            let mut s = String::from("check,pass,detail\n");
            for c in checks {
                let p = c.pass.map_or("info", verdict);
                let _ = writeln!(s, "{},{p},\"{}\"", c.name, c.detail.replace('"', "'"));
            }
            s
        }
        Format::Text => {
            let mut s = format!("{header}\n");
            for c in checks {
                let p = c.pass.map_or("INFO", verdict);
                let _ = writeln!(s, "  [{p}] {}: {}", c.name, c.detail);
            }
            let pass = checks.iter().all(|c| c.pass != Some(false));
            let _ = writeln!(s, "overall: {}", verdict(pass));
            s
        }
    }
}

/// Largest componentwise relative gap between solved and differenced
/// derivatives.
pub fn fd_mismatch(sys: &StieltjesSystem, fd: &[f64]) -> f64 {
    sys.solution
        .iter()
        .zip(fd)
        .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()))
        .fold(0.0, f64::max)
}

/// Checks tied to the derivative system for one parameter. Assertions are
/// made only where the hypotheses hold.
fn parameter_checks(problem: &ZeroProblem, param: &str, tol: &Tolerances) -> Result<Vec<Check>> {
    let t = problem.family.param(param)?;
    let h: HypothesisReport = hypothesis_report(problem, param, t)?;
    let mut out = vec![Check::info(
        format!("hypotheses[{param}]"),
        format!(
            "K=({}, {}) f>0:{} f1<0:{} f2:{:?} zeros in K:{} samples:{} -> {}",
            h.k_interval.0,
            h.k_interval.1,
            h.f_positive,
            h.f1_negative,
            h.f2_sign,
            h.zero_set_inside_k,
            h.sample_count,
            if h.pass { "hold" } else { "do not hold" }
        ),
    )];
    if !h.pass {
        return Ok(out);
    }
    let sys = build_stieltjes_system(problem, param, t)?;
    let fd = zero_derivatives_fd(problem, param, t, default_fd_step(t))?;
    let mismatch = fd_mismatch(&sys, &fd);
    out.push(Check::assert(
        format!("stieltjes-matrix[{param}]"),
        sys.flags_hold(),
        format!(
            "offdiag<0:{} diag dominant:{} inverse>0:{}",
            sys.offdiag_negative, sys.diag_dominant, sys.inverse_positive
        ),
    ));
    out.push(
        Check::assert(
            format!("derivatives-vs-fd[{param}]"),
            mismatch <= tol.fd_tol,
            format!("max relative gap {}", e(mismatch)),
        )
        .with_value(mismatch),
    );
    if !h.param_moves_grid {
        let dir = problem.family.grid.direction().sign();
        let sign = h.f2_sign.value().unwrap_or(0.0) * dir;
        let ok = sys.solution_x.iter().all(|&v| v.signum() == sign);
        let predicted = if sign > 0.0 {
            "increasing"
        } else {
            "decreasing"
        };
        out.push(Check::assert(
            format!("sign-law[{param}]"),
            ok,
            format!("zeros predicted {predicted} in X"),
        ));
    }
    Ok(out)
}

/// The standard checks for one instance.
pub fn verify_instance(
    problem: &ZeroProblem,
    params: &[String],
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let family = &problem.family;
    let zs: ZeroSet = find_zeros(problem)?;
    let mut checks = vec![Check::info(
        "zeros",
        zs.zeros_x
            .iter()
            .map(|x| e(*x))
            .collect::<Vec<_>>()
            .join(" "),
    )];
    let worst_residual = zs.residuals.iter().copied().fold(0.0, f64::max);
    checks.push(Check::assert(
        "zero-residual",
        worst_residual < 1e-10,
        format!("max |P|/scale {}", e(worst_residual)),
    ));

    let f_pos = zs
        .zeros_s
        .iter()
        .map(|&y| family.monotonicity_f(y))
        .collect::<Result<Vec<_>>>()?;
    let sep = separation_check(&zs);
    let gap = sep.min_gap.map_or("n/a".to_string(), e);
    if f_pos.iter().all(|&f| f > 0.0) {
        checks.push(Check::assert(
            "separation",
            sep.pass,
            format!("min gap in s {gap}"),
        ));
    } else {
        checks.push(Check::info(
            "separation",
            format!("min gap in s {gap} (f>0 fails on the zero set)"),
        ));
    }

    let eq1 = eq1_consistency(problem, &zs)?;
    checks.push(
        Check::assert(
            "eq1",
            eq1.max_active <= tol.eq1_tol,
            format!(
                "max residual {} (printed table {})",
                e(eq1.max_active),
                e(eq1.max_printed)
            ),
        )
        .with_value(eq1.max_active),
    );

    let k = family.degree_max.min(8);
    let gram = gram_matrix(family, k)?;
    let orth = max_offdiag_residual(&gram);
    checks.push(
        Check::assert(
            "orthogonality",
            orth < tol.orth_tol,
            format!("degrees <= {k}, max off-diagonal {}", e(orth)),
        )
        .with_value(orth),
    );
    let pearson = pearson_residuals(&weight_table(family)?)?
        .into_iter()
        .fold(0.0, f64::max);
    checks.push(Check::assert(
        "pearson",
        pearson < 1e-12,
        format!("max ratio residual {}", e(pearson)),
    ));

    for p in params {
        checks.extend(parameter_checks(problem, p, tol)?);
    }
    Ok(checks)
}

fn claim_params(family: &FamilySpec) -> Vec<String> {
    family.claims().into_iter().map(|c| c.param).collect()
}

fn verify(
    fmt: Format,
    args: &FamilyArgs,
    n: usize,
    param: Option<&str>,
    tol: &Tolerances,
) -> Result<Outcome> {
    let family = args.spec()?;
    let params = match param {
        Some(p) => {
            ZeroProblem::new(family.clone(), n)?.with_sweep(p)?;
            vec![p.to_string()]
        }
        None => claim_params(&family),
    };
    let header = format!("{} {} n={n}", args.family, params_text(&family.params));
    let problem = ZeroProblem::new(family, n)?;
    let checks = verify_instance(&problem, &params, tol)?;
    let pass = checks.iter().all(|c| c.pass != Some(false));
    Ok(Outcome {
        output: render_checks(fmt, "verify", &header, &checks),
        pass,
    })
}

fn stieltjes(fmt: Format, args: &FamilyArgs, n: usize, param: &str) -> Result<Outcome> {
    let problem = ZeroProblem::new(args.spec()?, n)?.with_sweep(param)?;
    let t = problem.family.param(param)?;
    let h = hypothesis_report(&problem, param, t)?;
    let sys = build_stieltjes_system(&problem, param, t)?;
    let fd = zero_derivatives_fd(&problem, param, t, default_fd_step(t))?;
    let mismatch = fd_mismatch(&sys, &fd);
    let pass = !h.pass || (sys.flags_hold() && mismatch <= Tolerances::default().fd_tol);
    let output = match fmt {
        Format::Json => render_json(
            "stieltjes",
            json!({ "hypotheses": to_value(&h), "system": to_value(&sys), "fd": fd, "fd_mismatch": mismatch }),
        ),
        Format::Csv => {
            let mut s = String::from("j,y,solution,fd,rhs\n");
            for (j, d) in fd.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    j + 1,
                    sys.zeros_s[j],
                    sys.solution[j],
                    d,
                    sys.rhs[j]
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} {} n={n} param={param}\n",
                args.family,
                params_text(&problem.family.params)
            );
            let _ = writeln!(s, "  hypotheses hold: {}  f2 sign: {:?}", h.pass, h.f2_sign);
            for (j, row) in sys.matrix.iter().enumerate() {
                let r: Vec<String> = row.iter().map(|v| e(*v)).collect();
                let _ = writeln!(s, "  A[{}] = [{}]", j + 1, r.join(", "));
            }
            for (j, d) in fd.iter().enumerate() {
                let _ = writeln!(s, "  y'{} = {}  fd {}", j + 1, e(sys.solution[j]), e(*d));
            }
            let _ = writeln!(
                s,
                "  flags: offdiag<0:{} diag dominant:{} inverse>0:{}  fd gap {}",
                sys.offdiag_negative,
                sys.diag_dominant,
                sys.inverse_positive,
                e(mismatch)
            );
            s
        }
    };
    Ok(Outcome { output, pass })
}

fn interlace(fmt: Format, args: &FamilyArgs, n: usize, allow: bool) -> Result<Outcome> {
    let family = args.spec()?;
    let nn = family.support_size().ok_or_else(|| {
        Error::InvalidInput(format!(
            "{} has infinite support; interlacing needs a finite family",
            args.family
        ))
    })?;
    let opts = InterlaceOptions {
        require_same_weight: !allow,
    };
    let r = interlace_check_with(args.family, &family.params, n, nn, opts)?;
    let conn_ok = r.connection.as_ref().is_none_or(|c| c.residual < 1e-7);
    let pass = r.pass() && conn_ok;
    let output = match fmt {
        Format::Json => render_json("interlace", to_value(&r)),
        Format::Csv => {
            let mut s = String::from("lo,hi,count,expected\n");
            for p in &r.corollary_placement {
                let _ = writeln!(s, "{},{},{},{}", p.lo, p.hi, p.count, p.expected);
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{} {} n={n} N={nn}->{}\n",
                args.family,
                params_text(&family.params),
                nn + 1
            );
            let _ = writeln!(s, "  case: {:?}  x(b)={}", r.case, e(r.x_b));
            let fmt_z = |z: &ZeroSet| {
                z.sorted_x()
                    .iter()
                    .map(|x| e(*x))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let _ = writeln!(s, "  zeros N:   {}", fmt_z(&r.zeros_n));
            let _ = writeln!(s, "  zeros N+1: {}", fmt_z(&r.zeros_n1));
            for p in &r.corollary_placement {
                let _ = writeln!(s, "  ({}, {}): {} zero(s)", e(p.lo), e(p.hi), p.count);
            }
            if let Some(c) = &r.connection {
                let _ = writeln!(s, "  connection residual {}", e(c.residual));
            }
            let _ = writeln!(s, "overall: {}", verdict(pass));
            s
        }
    };
    Ok(Outcome { output, pass })
}

/// Summary of the randomized suite for one family.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FamilySummary {
    pub family: String,
    pub instances: usize,
    pub failed_checks: usize,
    pub sweeps: usize,
    pub sweeps_agreeing: usize,
    pub systems: usize,
    pub interlacing: usize,
    pub interlacing_pass: usize,
    pub max_eq1: f64,
    pub max_orthogonality: f64,
    pub max_fd_gap: f64,
    pub errors: Vec<String>,
}

impl FamilySummary {
    pub fn pass(&self) -> bool {
        self.failed_checks == 0
            && self.errors.is_empty()
            && self.sweeps == self.sweeps_agreeing
            && self.interlacing == self.interlacing_pass
    }
}

/// Randomized suite for one family: `draws` parameter contexts, degrees
/// 1..=3, every standard check, a 15-point sweep over the central 80% of
/// each claimed interval, and interlacing on same-weight sub-families.
pub fn family_suite(kind: FamilyKind, seed: u64, draws: usize, tol: &Tolerances) -> FamilySummary {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ (kind as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut sum = FamilySummary {
        family: kind.slug().into(),
        ..Default::default()
    };
    for _ in 0..draws {
        let family = match FamilySpec::new(kind, sample_params(kind, &mut rng)) {
            Ok(f) => f,
            Err(err) => {
                sum.errors.push(err.to_string());
                continue;
            }
        };
        let params = claim_params(&family);
        for n in 1..=3usize.min(family.degree_max) {
            sum.instances += 1;
            let problem = ZeroProblem::new(family.clone(), n).expect("degree within cap");
            match verify_instance(&problem, &params, tol) {
                Ok(checks) => {
                    for c in &checks {
                        sum.failed_checks += usize::from(c.pass == Some(false));
                        if c.pass == Some(false) && sum.errors.len() < 3 {
                            sum.errors.push(format!(
                                "n={n} {} {}: {}",
                                params_text(&family.params),
                                c.name,
                                c.detail
                            ));
                        }
                        let v = c.value.unwrap_or(0.0);
                        match c.name.as_str() {
                            "eq1" => sum.max_eq1 = sum.max_eq1.max(v),
                            "orthogonality" => sum.max_orthogonality = sum.max_orthogonality.max(v),
                            name if name.starts_with("derivatives-vs-fd") => {
                                sum.systems += 1;
                                sum.max_fd_gap = sum.max_fd_gap.max(v);
                            }
                            _ => {}
                        }
                    }
                }
                Err(err) => sum.errors.push(format!("n={n}: {err}")),
            }
            for claim in family.claims() {
                sum.sweeps += 1;
                let range = claim.sweep_range(family.sweep_upper_cap(), 0.8);
                match monotonicity_verdict(&problem, &claim.param, range, 15) {
                    Ok(v) if v.agrees == Some(true) => sum.sweeps_agreeing += 1,
                    Ok(v) => sum
                        .errors
                        .push(format!("n={n} sweep {}: {:?}", claim.param, v.direction)),
                    Err(err) => sum
                        .errors
                        .push(format!("n={n} sweep {}: {err}", claim.param)),
                }
            }
        }
        if let Some(p) = sample_same_weight_params(kind, 6, 20, &mut rng) {
            let nn = p["N"] as usize;
            let n = 1 + (nn % 5);
            sum.interlacing += 1;
            match interlace_check_with(kind, &p, n, nn, InterlaceOptions::default()) {
                Ok(r) if r.pass() && r.connection.as_ref().is_some_and(|c| c.residual < 1e-7) => {
                    sum.interlacing_pass += 1
                }
                Ok(_) => sum.errors.push(format!("interlacing n={n} N={nn} failed")),
                Err(err) => sum.errors.push(format!("interlacing: {err}")),
            }
        }
    }
    sum
}

fn verify_all(fmt: Format, seed: u64, draws: usize, tol: &Tolerances) -> Result<Outcome> {
    let kinds: Vec<FamilyKind> = FamilyKind::ALL.to_vec();
    let summaries: Vec<FamilySummary> = kinds
        .par_iter()
        .map(|&k| family_suite(k, seed, draws, tol))
        .collect();
    let pass = summaries.iter().all(FamilySummary::pass);
    let output = match fmt {
        Format::Json => render_json(
            "verify-all",
            json!({ "seed": seed, "draws": draws, "tolerances": to_value(tol), "families": to_value(&summaries), "pass": pass }),
        ),
        Format::Csv => {
            let mut s = String::from(
                "family,instances,failed_checks,sweeps,sweeps_agreeing,systems,interlacing,interlacing_pass,max_eq1,max_orthogonality,max_fd_gap,pass\n",
            );
            for m in &summaries {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{:e},{:e},{:e},{}",
                    m.family,
                    m.instances,
                    m.failed_checks,
                    m.sweeps,
                    m.sweeps_agreeing,
                    m.systems,
                    m.interlacing,
                    m.interlacing_pass,
                    m.max_eq1,
                    m.max_orthogonality,
                    m.max_fd_gap,
                    m.pass()
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!("verify-all seed={seed} draws={draws}\n");
            for m in &summaries {
                let _ = writeln!(
                    s,
                    "{:4} {:24} inst {:3} sweeps {:3}/{:<3} systems {:3} interlace {}/{} eq1 {} orth {} fd {}",
                    verdict(m.pass()),
                    m.family,
                    m.instances,
                    m.sweeps_agreeing,
                    m.sweeps,
                    m.systems,
                    m.interlacing_pass,
                    m.interlacing,
                    e(m.max_eq1),
                    e(m.max_orthogonality),
                    e(m.max_fd_gap)
                );
                for err in &m.errors {
                    let _ = writeln!(s, "       {err}");
                }
            }
            let _ = writeln!(s, "overall: {}", verdict(pass));
            s
        }
    };
    Ok(Outcome { output, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("copz").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn assignment_parsing() {
        assert_eq!(
            parse_assignment("alpha=0.5").unwrap(),
            ("alpha".into(), 0.5)
        );
        assert!(parse_assignment("alpha").is_err());
        assert!(parse_assignment("alpha=x").is_err());
    }

    #[test]
    fn charlier_sweep_csv() {
        let c = cli(&[
            "sweep", "--family", "charlier", "--n", "1", "--param", "alpha", "--from", "0.5",
            "--to", "4", "--steps", "8", "--set", "alpha=1", "--format", "csv",
        ]);
        let out = run(&c).unwrap().output;
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("t,z1"));
        for line in lines {
            let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            assert!((v[0] - v[1]).abs() < 1e-10 * v[0], "{line}");
        }
    }

    #[test]
    fn json_has_schema() {
        let c = cli(&[
            "zeros",
            "--family",
            "hahn",
            "--n",
            "3",
            "--set",
            "alpha=0.5",
            "--set",
            "beta=1",
            "--set",
            "N=10",
            "--format",
            "json",
        ]);
        let v: Value = serde_json::from_str(&run(&c).unwrap().output).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["result"]["zeros_x"].as_array().unwrap().len(), 3);
    }
}
