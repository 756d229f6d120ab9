//! Command-line front end: knot generation, spline and theta evaluation,
//! Mellin transforms, finite-N identity checks, convergence experiments,
//! and the conjecture / decay probes.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use thetaspline::bspline::{eval_assoc, eval_divided_difference};
use thetaspline::experiments::{
    conjecture_probe, run_cosh, run_gaussian, run_perfect_spline, run_theta_mellin,
    run_theta_pointwise, write_csv, write_json, ConvergenceRecord,
};
use thetaspline::interp::{identity_cor39, identity_prop26, limit_cor24, InterpCase};
use thetaspline::mellin::{gn_contour, mellin_assoc_bspline, mellin_theta_closed, rbeta_probe};
use thetaspline::numerics::{PrecisionContext, QuadratureRule};
use thetaspline::polyfamilies::{FamilyKind, KnotSet, PolyFamily};
use thetaspline::thetafn::{theta1_integral_diagnostic, theta_eval, ThetaSpec};
use thetaspline::Error;

#[derive(Parser)]
#[command(
    name = "thetaspline",
    about = "B-splines on squared-zero knot sets, theta-like limit functions, \
             and their Mellin transforms",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    ChebyshevT,
    ChebyshevU,
    Gegenbauer,
    Hermite,
    Equidistant,
}

impl Family {
    fn kind(self, lambda: f64) -> FamilyKind {
        match self {
            Family::ChebyshevT => FamilyKind::ChebyshevT,
            Family::ChebyshevU => FamilyKind::ChebyshevU,
            Family::Gegenbauer => FamilyKind::Gegenbauer { lambda },
            Family::Hermite => FamilyKind::Hermite,
            Family::Equidistant => FamilyKind::Equidistant,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Recipe {
    /// {0, u^2} plus the squared positive zeros of the family polynomial
    Squared,
    /// {-1, 2u^2 - 1} plus the Chebyshev zeros themselves (shifted image)
    Star,
    /// Integer knots centered at 0
    Cardinal,
    /// Reciprocals of odd integers, clustered at 0
    Reciprocal,
}

#[derive(Args, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyArgs {
    /// Polynomial family whose positive zeros generate the knots
    #[arg(long, value_enum, default_value_t = Family::ChebyshevT)]
    family: Family,
    /// Endpoint multiplicity parameter of the family (0 or 1)
    #[arg(long, default_value_t = 0)]
    d: u8,
    /// Gegenbauer index (only read when --family gegenbauer)
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Half-degree index: the polynomial degree is 2N + d
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Extra knot parameter u; the squared recipe appends u^2
    #[arg(long, default_value_t = 1.0)]
    u: f64,
}

impl FamilyArgs {
    fn poly(&self) -> Result<PolyFamily, Error> {
        PolyFamily::new(self.family.kind(self.lambda), self.d, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Experiment {
    /// Scaled associated B-spline against the theta-like function
    ThetaPointwise,
    /// Contour-route Mellin transform against the theta closed form
    ThetaMellin,
    /// Scaled cardinal B-spline against the standard Gaussian
    Gaussian,
    /// Reciprocal-knot B-spline against 2/(pi cosh t)
    Cosh,
    /// Shifted-knot spline ratio against its predicted size near -1
    PerfectSpline,
    /// Scaled interpolation differences against the h_d integral
    ScaledInterp,
}

/// Full configuration of a `converge` run; round-trips through JSON.
#[derive(Args, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    #[arg(long, value_enum)]
    experiment: Experiment,
    #[command(flatten)]
    #[serde(flatten)]
    fam: FamilyArgs,
    /// Comma-separated list of N values
    #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 32, 64, 128])]
    n_list: Vec<usize>,
    /// Comma-separated evaluation grid (t or s values)
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 1.0, 4.0, 9.0, 16.0])]
    grid: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path; stdout when omitted
    #[arg(long)]
    output: Option<String>,
    /// Keep real wall-clock times in the output (off by default so repeated
    /// runs are byte-identical)
    #[arg(long, default_value_t = false)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print a knot set, one knot per line
    Knots {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Recipe::Squared)]
        recipe: Recipe,
        /// Reciprocal-recipe half-count (degree is 2 nu)
        #[arg(long, default_value_t = 4)]
        nu: usize,
    },
    /// Evaluate the B-spline (or associated B-spline) on a knot set
    Eval {
        /// Explicit comma-separated knots; overrides the family recipe
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<f64>>,
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        t: f64,
        /// Evaluate B*_N = t^{-N} B_N instead of B_N
        #[arg(long, default_value_t = false)]
        assoc: bool,
    },
    /// Evaluate the theta-like limit function
    Theta {
        #[arg(long, default_value_t = 0)]
        d: u8,
        #[arg(long)]
        t: Option<f64>,
        /// Print the total-integral diagnostic instead of a point value
        #[arg(long, default_value_t = false)]
        integral: bool,
    },
    /// Mellin transforms: theta closed form, spline transform, contour route
    Mellin {
        /// closed-form theta transform at this sigma (parity taken from --d)
        #[arg(long)]
        sigma: Option<f64>,
        /// Explicit knots for the associated-spline transform
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<f64>>,
        /// Contour-route evaluation at this s (uses the family flags)
        #[arg(long)]
        s: Option<f64>,
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Exact finite-N identities: interpolation difference vs integral
    Identity {
        /// cor39 (spline route) or prop26 (contour route)
        #[arg(long)]
        which: String,
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        zeros: Option<Vec<f64>>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        m: Option<u32>,
    },
    /// Run a convergence experiment and emit CSV or JSON records
    Converge(RunConfig),
    /// Probes: conjectured theta limits and the vertical-line decay check
    Probe {
        /// conjecture (scaled splines, unproved families) or rbeta (decay)
        #[arg(long, default_value = "conjecture")]
        which: String,
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, value_delimiter = ',', default_values_t = vec![16usize, 32, 64])]
        n_list: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.25, 1.0, 4.0])]
        grid: Vec<f64>,
        /// Real part of s for the decay probe
        #[arg(long, default_value_t = 2.0)]
        r: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<String>,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. }
        | Error::NonConvergent { .. }
        | Error::SlowConvergence { .. } => 3,
        Error::Io(_) => 4,
        _ => 2,
    }
}

fn emit(records: &[ConvergenceRecord], format: Format, output: Option<&str>, timings: bool) -> Result<(), Error> {
    let mut records = records.to_vec();
    if !timings {
        for r in &mut records {
            r.wall_ms = 0;
        }
    }
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&records, &mut buf)?,
        Format::Json => write_json(&records, &mut buf)?,
    }
    match output {
        Some(path) => std::fs::write(path, buf)?,
        None => std::io::stdout().write_all(&buf)?,
    }
    Ok(())
}

fn knotset_for(fam: &FamilyArgs, recipe: Recipe, nu: usize) -> Result<KnotSet, Error> {
    match recipe {
        Recipe::Squared => KnotSet::omega_squared(fam.poly()?, fam.u),
        Recipe::Star => KnotSet::omega_star(fam.poly()?, fam.u),
        Recipe::Cardinal => KnotSet::cardinal(fam.n),
        Recipe::Reciprocal => KnotSet::reciprocal(nu),
    }
}

fn interp_case(s: Option<f64>, m: Option<u32>) -> Result<InterpCase, Error> {
    match (s, m) {
        (Some(s), None) => Ok(InterpCase::Power { s }),
        (None, Some(m)) => Ok(InterpCase::Log { m }),
        _ => Err(Error::InvalidInput(
            "give exactly one of --s (power case) or --m (log case)".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let ctx = PrecisionContext::default().with_env_override();
    let rule = QuadratureRule::default();
    match cli.command {
        Command::Knots { fam, recipe, nu } => {
            let ks = knotset_for(&fam, recipe, nu)?;
            for k in ks.knots_f64() {
                println!("{k:.17}");
            }
        }
        Command::Eval {
            omega,
            fam,
            t,
            assoc,
        } => {
            let ks = match omega {
                Some(knots) => KnotSet::custom(knots)?,
                None => KnotSet::omega_squared(fam.poly()?, fam.u)?,
            };
            if assoc {
                let e = eval_assoc(&ks, t, &ctx)?;
                println!(
                    "value {:.12e}  sign {}  ln|value| {:.12e}  bits {}",
                    e.value, e.value_log.sign, e.value_log.log_mag, e.precision_used
                );
            } else {
                let e = eval_divided_difference(&ks, t, &ctx)?;
                println!(
                    "value {:.12e}  bits {}",
                    e.b_value.to_f64(),
                    e.precision_used
                );
            }
        }
        Command::Theta { d, t, integral } => {
            if integral {
                if d == 1 {
                    let rep = theta1_integral_diagnostic(&rule)?;
                    println!("integral {:.12}", rep.measured);
                    println!("dist to 7 zeta(3)  {:.3e}", rep.dist_to_7_zeta3);
                    println!("dist to 14 zeta(3) {:.3e}", rep.dist_to_14_zeta3);
                    println!(
                        "matches: {}",
                        if rep.matches_7_zeta3 {
                            "7 zeta(3)"
                        } else {
                            "14 zeta(3)"
                        }
                    );
                } else {
                    let v = thetaspline::thetafn::theta_integral(0, &rule)?;
                    let target = thetaspline::thetafn::theta0_integral_target()?;
                    println!("integral {v:.12} (4 x Catalan = {target:.12})");
                }
            } else {
                let t = t.ok_or_else(|| Error::InvalidInput("--t is required".into()))?;
                let v = theta_eval(d, t, &ThetaSpec::default())?;
                println!("{v:.12}");
            }
        }
        Command::Mellin {
            sigma,
            omega,
            s,
            fam,
        } => match (sigma, omega, s) {
            (Some(sigma), None, None) => {
                let v = mellin_theta_closed(fam.d, sigma)?;
                println!("{v:.12}");
            }
            (Some(sigma), Some(knots), None) => {
                let ks = KnotSet::custom(knots)?;
                let p = mellin_assoc_bspline(&ks, Complex64::new(sigma, 0.0), &rule, &ctx)?;
                println!("{:.12e} (err est {:.1e})", p.value.re, p.err_estimate);
            }
            (None, None, Some(s)) => {
                let p = gn_contour(&fam.poly()?, fam.u, s, &rule)?;
                println!("{:.12e} (err est {:.1e})", p.value.re, p.err_estimate);
            }
            _ => {
                return Err(Error::InvalidInput(
                    "use --sigma [--omega] for transforms or --s with family flags \
                     for the contour route"
                        .into(),
                ))
            }
        },
        Command::Identity {
            which,
            omega,
            zeros,
            u,
            y,
            s,
            m,
        } => {
            let rep = match which.as_str() {
                "cor39" => {
                    let knots =
                        omega.ok_or_else(|| Error::InvalidInput("--omega required".into()))?;
                    let u = u.ok_or_else(|| Error::InvalidInput("--u required".into()))?;
                    let ks = KnotSet::custom(knots)?;
                    identity_cor39(&ks, u, interp_case(s, m)?, &ctx, &rule)?
                }
                "prop26" => {
                    let zeros =
                        zeros.ok_or_else(|| Error::InvalidInput("--zeros required".into()))?;
                    let y = y.ok_or_else(|| Error::InvalidInput("--y required".into()))?;
                    let s = s.ok_or_else(|| Error::InvalidInput("--s required".into()))?;
                    identity_prop26(&zeros, y, s, &ctx, &rule)?
                }
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown identity '{other}' (expected cor39 or prop26)"
                    )))
                }
            };
            println!(
                "lhs {:.12e}\nrhs {:.12e}\nrel_gap {:.3e}",
                rep.lhs, rep.rhs, rep.rel_gap
            );
        }
        Command::Converge(cfg) => {
            let kind = cfg.fam.family.kind(cfg.fam.lambda);
            let records = match cfg.experiment {
                Experiment::ThetaPointwise => run_theta_pointwise(
                    kind,
                    cfg.fam.d,
                    cfg.fam.u,
                    &cfg.grid,
                    &cfg.n_list,
                    &ctx,
                )?,
                Experiment::ThetaMellin => run_theta_mellin(
                    kind,
                    cfg.fam.d,
                    cfg.fam.u,
                    &cfg.grid,
                    &cfg.n_list,
                    &rule,
                )?,
                Experiment::Gaussian => run_gaussian(&cfg.n_list, &cfg.grid)?,
                Experiment::Cosh => run_cosh(&cfg.n_list, &cfg.grid, &ctx)?,
                Experiment::PerfectSpline => {
                    run_perfect_spline(&cfg.n_list, &cfg.grid, &ctx)?
                }
                Experiment::ScaledInterp => {
                    let fam = cfg.fam.poly()?;
                    let recs = limit_cor24(
                        fam,
                        cfg.fam.u,
                        InterpCase::Power { s: cfg.grid[0] },
                        &cfg.n_list,
                        &ctx,
                    )?;
                    recs.iter()
                        .map(|r| {
                            let mut rec = ConvergenceRecord {
                                experiment_id: "scaled-interp".into(),
                                n: r.n,
                                point: cfg.grid[0],
                                scaled_log: r.scaled.abs().max(1e-300).ln(),
                                scaled_sign: if r.scaled >= 0.0 { 1 } else { -1 },
                                limit: r.limit,
                                abs_err: r.abs_err,
                                rel_err: r.rel_err,
                                precision_bits: 0,
                                wall_ms: 0,
                            };
                            if r.scaled == 0.0 {
                                rec.scaled_sign = 0;
                            }
                            rec
                        })
                        .collect()
                }
            };
            emit(&records, cfg.format, cfg.output.as_deref(), cfg.timings)?;
        }
        Command::Probe {
            which,
            fam,
            n_list,
            grid,
            r,
            format,
            output,
        } => match which.as_str() {
            "conjecture" => {
                let records = conjecture_probe(
                    fam.family.kind(fam.lambda),
                    fam.d,
                    fam.u,
                    &grid,
                    &n_list,
                    &ctx,
                )?;
                emit(&records, format, output.as_deref(), false)?;
            }
            "rbeta" => {
                for &n in &n_list {
                    let fam_n = PolyFamily::new(fam.family.kind(fam.lambda), fam.d, n)?;
                    let samples = rbeta_probe(&fam_n, fam.u, r, &grid, &rule)?;
                    for s in samples {
                        println!(
                            "N {n}  v {:.4}  lhs {:.6e}  envelope {:.6e}  ratio {:.6e}",
                            s.v, s.lhs, s.envelope, s.ratio
                        );
                    }
                }
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown probe '{other}' (expected conjecture or rbeta)"
                )))
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_round_trips() {
        let cfg = RunConfig {
            experiment: Experiment::Gaussian,
            fam: FamilyArgs {
                family: Family::ChebyshevU,
                d: 1,
                lambda: 1.0,
                n: 8,
                u: 1.0,
            },
            n_list: vec![16, 32],
            grid: vec![0.0, 1.0],
            format: Format::Json,
            output: None,
            timings: false,
        };
        let text = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn run_config_rejects_unknown_keys() {
        let text = r#"{"experiment":"gaussian","family":"chebyshev-t","d":0,
            "lambda":1.0,"n":8,"u":1.0,"n_list":[16],"grid":[0.0],
            "format":"csv","output":null,"timings":false,"bogus":1}"#;
        assert!(serde_json::from_str::<RunConfig>(text).is_err());
    }

    #[test]
    fn empty_record_list_gives_header_only_csv() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert!(text.ends_with('\n'));
    }
}
