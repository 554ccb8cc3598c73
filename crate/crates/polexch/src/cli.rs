//! Command-line front end: every computation in the crate as a
//! deterministic, scriptable command emitting CSV, JSON or aligned text.
//!
//! Global flags `--digits`, `--format` and `--out` apply to every
//! subcommand and can also be preset through the environment variables
//! `POLEXCH_DIGITS`, `POLEXCH_FORMAT` and `POLEXCH_OUT`; truncation
//! orders default to `POLEXCH_KMAX` where a `--kmax` flag exists.
//! Output is byte-identical across reruns at fixed flags, and the exit
//! status is zero exactly when every requested value met its precision
//! contract.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::coeffs::{rational_parts, tcoeffs};
use crate::energy::{
    decay_report, eps, error_model, figure_rows, j0, table1_rows, Formula,
};
use crate::error::{Error, Result};
use crate::integrals::{l_closed_integral, l_quad};
use crate::mp::{format_sci, Prec, Real};
use crate::output::{Format, Table};
use crate::twocenter;

/// Arbitrary-precision exchange-splitting series and their reference
/// solver, emitted as tables.
#[derive(Parser, Debug)]
#[command(name = "polexch", version, about)]
pub struct Cli {
    /// Significant digits carried by every emitted value (minimum 10)
    #[arg(long, global = true, default_value_t = 60, env = "POLEXCH_DIGITS")]
    pub digits: u32,

    /// Output encoding: csv, json or text
    #[arg(long, global = true, default_value = "csv", env = "POLEXCH_FORMAT")]
    pub format: String,

    /// Write to this file instead of standard output
    #[arg(long, global = true, env = "POLEXCH_OUT")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact rational series coefficients t[k][n] of the radial expansion
    Coeffs {
        /// Largest polarization order k
        #[arg(long, default_value_t = 12)]
        kmax: u32,
        /// Largest power n within each order
        #[arg(long, default_value_t = 40)]
        nmax: u32,
    },
    /// Two-index overlap integrals L(k1, k2) on a grid
    Lvalues {
        /// Largest first index
        #[arg(long, default_value_t = 4)]
        k1max: u32,
        /// Largest second index
        #[arg(long, default_value_t = 4)]
        k2max: u32,
    },
    /// Leading exchange coefficient j0 at truncation orders K = 0..kmax
    J0 {
        /// surf, sapt, var, or all
        #[arg(long, default_value = "all")]
        formula: String,
        /// Largest truncation order
        #[arg(long, default_value_t = 12, env = "POLEXCH_KMAX")]
        kmax: u32,
    },
    /// Error-versus-order data set behind the log plot (always CSV)
    Figure1 {
        /// Largest truncation order (at least 2)
        #[arg(long, default_value_t = 12, env = "POLEXCH_KMAX")]
        kmax: u32,
    },
    /// Computed decay-rate diagnostics beside the fixed reference columns
    Table1 {
        /// Largest truncation order (at least 6)
        #[arg(long, default_value_t = 12, env = "POLEXCH_KMAX")]
        kmax: u32,
    },
    /// Two-center eigensolver scan over separations R (digits capped at 40)
    Oracle {
        /// Comma-separated separations, each within [1, 40]
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<String>,
    },
    /// Error decay-rate report with ratio diagnostics and their limits
    Errors {
        /// surf, sapt, var, or all
        #[arg(long, default_value = "all")]
        formula: String,
        /// Largest truncation order (at least 4)
        #[arg(long, default_value_t = 12, env = "POLEXCH_KMAX")]
        kmax: u32,
    },
}

fn formula_set(name: &str) -> Result<Vec<Formula>> {
    if name == "all" {
        Ok(Formula::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

fn build_table(command: &Command, digits: u32) -> Result<Table> {
    match command {
        Command::Coeffs { kmax, nmax } => {
            let mut table = Table::new(&["k", "n", "numerator", "denominator"]);
            for (k, n, c) in tcoeffs(*kmax, *nmax).iter() {
                let (num, den) = rational_parts(c);
                table.push(vec![k.to_string(), n.to_string(), num, den]);
            }
            Ok(table)
        }
        Command::Lvalues { k1max, k2max } => {
            let mut table = Table::new(&["k1", "k2", "value", "method"]);
            for k1 in 0..=*k1max {
                for k2 in 0..=*k2max {
                    let l = if k2 == 0 {
                        l_closed_integral(k1, digits)?
                    } else {
                        l_quad(k1, k2, digits)?
                    };
                    table.push(vec![
                        k1.to_string(),
                        k2.to_string(),
                        format_sci(l.value.value(), digits),
                        l.method.as_str().to_string(),
                    ]);
                }
            }
            Ok(table)
        }
        Command::J0 { formula, kmax } => {
            let mut table = Table::new(&["formula", "K", "j0", "error", "model_error"]);
            for f in formula_set(formula)? {
                for k in 0..=*kmax {
                    let value = j0(f, k, digits)?;
                    let deficit = eps(f, k, digits)?;
                    let model = if k == 0 {
                        String::new()
                    } else {
                        format_sci(error_model(f, k, digits)?.value(), digits)
                    };
                    table.push(vec![
                        f.as_str().to_string(),
                        k.to_string(),
                        format_sci(value.value(), digits),
                        format_sci(deficit.value(), digits),
                        model,
                    ]);
                }
            }
            Ok(table)
        }
        Command::Figure1 { kmax } => {
            let mut table = Table::new(&[
                "formula",
                "K",
                "j0",
                "error",
                "model_error",
                "log10_error",
                "log10_model",
            ]);
            for row in figure_rows(*kmax, digits)? {
                table.push(vec![
                    row.formula.as_str().to_string(),
                    row.big_k.to_string(),
                    format_sci(row.j0.value(), digits),
                    format_sci(row.error.value(), digits),
                    format_sci(row.model_error.value(), digits),
                    format_sci(row.log10_error.value(), digits),
                    format_sci(row.log10_model.value(), digits),
                ]);
            }
            Ok(table)
        }
        Command::Table1 { kmax } => {
            let mut table = Table::new(&[
                "formula",
                "K",
                "diagnostic",
                "polarization_reference",
                "multipole_reference",
            ]);
            for row in table1_rows(*kmax, digits)? {
                table.push(vec![
                    row.formula.as_str().to_string(),
                    row.big_k.to_string(),
                    format_sci(row.diagnostic.value(), digits),
                    row.polarization_reference.to_string(),
                    row.multipole_reference.to_string(),
                ]);
            }
            Ok(table)
        }
        Command::Oracle { r } => {
            let prec = Prec::new(digits)?;
            let mut table = Table::new(&[
                "R",
                "E_g",
                "E_u",
                "J",
                "scaled_ratio",
                "model",
                "deviation",
            ]);
            for raw in r {
                let parsed = rug::Float::parse(raw).map_err(|_| Error::OutOfDomain {
                    name: "R",
                    value: raw.clone(),
                    domain: "decimal numbers in [1, 40]",
                })?;
                let separation = Real::new(prec.float(parsed), prec);
                let solved = twocenter::solve(&separation, digits)?;
                let model = twocenter::asymptotic_model(&separation, digits)?;
                let mut deviation = solved.scaled_ratio.value().clone();
                deviation -= model.value();
                table.push(vec![
                    format_sci(solved.r.value(), digits),
                    format_sci(solved.e_g.value(), digits),
                    format_sci(solved.e_u.value(), digits),
                    format_sci(solved.j.value(), digits),
                    format_sci(solved.scaled_ratio.value(), digits),
                    format_sci(model.value(), digits),
                    format_sci(&deviation, digits),
                ]);
            }
            Ok(table)
        }
        Command::Errors { formula, kmax } => {
            let mut table = Table::new(&[
                "formula",
                "K",
                "error",
                "model_error",
                "diagnostic",
                "target",
            ]);
            for f in formula_set(formula)? {
                let report = decay_report(f, *kmax, digits)?;
                for row in &report.rows {
                    table.push(vec![
                        f.as_str().to_string(),
                        row.big_k.to_string(),
                        format_sci(row.eps.value(), digits),
                        format_sci(row.model.value(), digits),
                        format_sci(row.diagnostic.value(), digits),
                        format_sci(row.target.value(), digits),
                    ]);
                }
            }
            Ok(table)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content.as_bytes())?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

/// Execute a parsed invocation; the exit status is nonzero iff this errs.
pub fn run(cli: &Cli) -> Result<()> {
    if cli.digits < 10 {
        return Err(Error::OutOfDomain {
            name: "digits",
            value: cli.digits.to_string(),
            domain: "10 and up",
        });
    }
    let format: Format = match &cli.command {
        // the log-plot data set is defined as a CSV artifact
        Command::Figure1 { .. } => Format::Csv,
        _ => cli.format.parse()?,
    };
    let table = build_table(&cli.command, cli.digits)?;
    emit(&cli.out, &table.render(format))
}
