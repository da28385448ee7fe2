//! Command-line front end.
//!
//! Exit codes: 0 when every requested check passes, 1 when a mathematical
//! check fails, 2 on a usage error. The default precision is 256 bits,
//! overridable through `APERY_PREC` and per run through `--prec`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::apery::{apery_binomial, apery_recurrence};
use crate::density::figures::write_figures;
use crate::density::phi;
use crate::error::{Error, Result};
use crate::exactnum::{rat, BigFloat, DEFAULT_PREC};
use crate::heun::certify::certify_positive;
use crate::heun::{params_l2, params_l6};
use crate::hyper::f21_eval;
use crate::modular::{parameterization_check, special_values, theta_logderiv_identity};
use crate::moments::{moment_suite, QuadratureSpec};
use crate::odecheck::{frobenius_slope_check, indicial_exponents, Singularity};
use crate::selfcheck;

pub const PREC_ENV: &str = "APERY_PREC";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "apery-moments", version, about = "Checks that the Apery numbers are moments of an explicit density")]
pub struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true)]
    pub prec: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    #[value(name = "L2", alias = "l2")]
    L2,
    #[value(name = "L6", alias = "l6")]
    L6,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModularCheck {
    Theta,
    Param,
    Specials,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print A_0..A_N.
    Apery {
        #[arg(long)]
        n: u64,
        /// Also compare the recurrence with the binomial sum.
        #[arg(long)]
        check: bool,
    },
    /// Certify positivity of a Heun coefficient stream.
    Certify {
        #[arg(long, value_enum)]
        case: Case,
    },
    /// 2F1(1/3, 2/3; 1; z) with an error bound.
    Hyper {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// The density at a point of (0, c).
    Phi {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// ODE residuals, indicial exponents and slopes.
    Ode {
        #[arg(long)]
        check_all: bool,
    },
    /// Quadrature of the first moments against A_k.
    Moments {
        #[arg(long, default_value_t = 12)]
        kmax: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Do not split the interval at c0.
        #[arg(long)]
        unsplit: bool,
    },
    /// Exact q-series identities and the special-value table.
    Modular {
        #[arg(long, value_enum, default_value_t = ModularCheck::All)]
        check: ModularCheck,
        #[arg(long, default_value_t = 40)]
        terms: usize,
    },
    /// Write the figure data as CSV.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every acceptance check and print a table.
    Selfcheck,
}

/// Precision from the flag, else the environment, else the default.
pub fn resolve_prec(flag: Option<usize>) -> std::result::Result<usize, String> {
    let p = match flag {
        Some(p) => p,
        None => match std::env::var(PREC_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| format!("{PREC_ENV}={v} is not a bit count"))?,
            Err(_) => DEFAULT_PREC,
        },
    };
    if p < 64 {
        return Err(format!("precision must be at least 64 bits, got {p}"));
    }
    Ok(p)
}

/// Parses `argv` (including the program name) and runs it, writing to `out`.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let prec = match resolve_prec(cli.prec) {
        Ok(p) => p,
        Err(m) => {
            eprintln!("error: {m}");
            return EXIT_USAGE;
        }
    };
    eprintln!("# precision: {prec} bits");
    match execute(&cli.command, prec, out) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(Error::InvalidParameter(m)) | Err(Error::Domain(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn number(s: &str, prec: usize) -> Result<BigFloat> {
    BigFloat::parse(s, prec).ok_or_else(|| Error::InvalidParameter(format!("not a number: {s}")))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn execute(cmd: &Command, prec: usize, out: &mut dyn Write) -> Result<bool> {
    match cmd {
        Command::Apery { n, check } => {
            let a = apery_recurrence(*n)?.values;
            for v in &a {
                writeln!(out, "{v}")?;
            }
            if *check {
                let ok = a.iter().enumerate().all(|(k, v)| apery_binomial(k as u64) == *v);
                writeln!(out, "binomial sum agrees: {}", verdict(ok))?;
                return Ok(ok);
            }
            Ok(true)
        }
        Command::Certify { case } => {
            let (params, n0, kappa) = match case {
                Case::L2 => (params_l2(), 45, 10),
                Case::L6 => (params_l6(), 18, 4),
            };
            match certify_positive(&params, n0, &rat(kappa, 1)) {
                Ok(c) => {
                    writeln!(out, "PASS")?;
                    write!(out, "{}", c.summary())?;
                    Ok(c.is_valid())
                }
                Err(e) => {
                    writeln!(out, "FAIL")?;
                    writeln!(out, "{e}")?;
                    Ok(false)
                }
            }
        }
        Command::Hyper { z } => {
            let h = f21_eval(&number(z, prec)?, prec)?;
            let digits = prec * 3 / 10;
            writeln!(out, "value {:.*}", digits, h.value)?;
            writeln!(out, "error_bound {:.3}", h.error_bound)?;
            writeln!(out, "branch {:?}", h.branch)?;
            Ok(true)
        }
        Command::Phi { x } => {
            let p = phi(&number(x, prec)?, prec)?;
            let digits = prec * 3 / 10;
            writeln!(out, "x {:.*}", digits, p.x)?;
            writeln!(out, "phi {:.*}", digits, p.phi)?;
            writeln!(out, "branch {:?}", p.branch)?;
            writeln!(out, "error_bound {:.3}", p.error_bound)?;
            Ok(true)
        }
        Command::Ode { check_all } => ode(*check_all, prec, out),
        Command::Moments { kmax, tol, unsplit } => {
            if *tol <= 0.0 {
                return Err(Error::InvalidParameter("tolerance must be positive".into()));
            }
            let spec = QuadratureSpec { prec, tol: *tol, split_at_c0: !unsplit, ..QuadratureSpec::default() };
            let s = moment_suite(*kmax, &spec)?;
            writeln!(out, "k,value,exact,rel_error,estimate,panels,status")?;
            for r in &s.reports {
                writeln!(
                    out,
                    "{},{:.20},{},{:.3e},{:.3e},{},{}",
                    r.k, r.value, r.exact, r.rel_error, r.estimate, r.panels, verdict(r.pass)
                )?;
            }
            if s.kink_inside_panel {
                writeln!(out, "warning: c0 lies inside a panel")?;
            }
            if s.nonpositive_nodes > 0 {
                writeln!(out, "warning: {} nodes with phi <= 0", s.nonpositive_nodes)?;
            }
            Ok(s.all_pass() && s.nonpositive_nodes == 0)
        }
        Command::Modular { check, terms } => modular(*check, *terms, prec, out),
        Command::Figures { out: dir } => {
            for p in write_figures(dir, prec)? {
                writeln!(out, "{}", p.display())?;
            }
            Ok(true)
        }
        Command::Selfcheck => {
            let mut all = true;
            for i in 1..=selfcheck::COUNT {
                let c = selfcheck::run(i, prec);
                writeln!(out, "{}", c.line())?;
                all &= c.pass;
            }
            writeln!(out, "overall {}", verdict(all))?;
            Ok(all)
        }
    }
}

fn ode(check_all: bool, prec: usize, out: &mut dyn Write) -> Result<bool> {
    let mut ok = true;
    writeln!(out, "point,exponents,log_rank")?;
    for s in Singularity::ALL {
        let d = indicial_exponents(s)?;
        let ex: Vec<String> = d.exponents.iter().map(|e| e.to_string()).collect();
        writeln!(out, "{},{},{}", s, ex.join(" "), d.log_rank)?;
    }
    for r in frobenius_slope_check()? {
        writeln!(
            out,
            "slope at {}: stated {} extends {}, perturbation detected {}",
            r.singularity,
            r.stated,
            r.extends,
            r.perturbation_detected
        )?;
        ok &= r.extends && r.perturbation_detected;
    }
    if check_all {
        writeln!(out, "solution,x,residual")?;
        for (name, x, r) in selfcheck::residual_table(prec)? {
            writeln!(out, "{name},{x:.12},{r:.3e}")?;
            ok &= r <= 1e-15;
        }
    }
    Ok(ok)
}

fn modular(check: ModularCheck, terms: usize, prec: usize, out: &mut dyn Write) -> Result<bool> {
    let mut ok = true;
    let want = |c| check == c || check == ModularCheck::All;
    if want(ModularCheck::Theta) {
        let r = theta_logderiv_identity(terms)?;
        writeln!(out, "theta identity through q^{}: {}", terms, mismatch(&r.first_mismatch))?;
        ok &= r.passed();
    }
    if want(ModularCheck::Param) {
        let r = parameterization_check(terms)?;
        writeln!(out, "parameterization through q^{}: {}", terms, mismatch(&r.first_mismatch))?;
        ok &= r.passed();
    }
    if want(ModularCheck::Specials) {
        writeln!(out, "entry,computed,stated,error,status")?;
        for r in special_values(prec) {
            writeln!(out, "{},{:.25},{:.25},{:.3e},{}", r.name, r.computed, r.stated, r.error, verdict(r.pass))?;
            ok &= r.pass;
        }
    }
    Ok(ok)
}

fn mismatch(m: &Option<i64>) -> String {
    match m {
        None => "PASS".into(),
        Some(k) => format!("FAIL (first mismatch at q^{k})"),
    }
}
