//! The three truncated series for the leading exchange coefficient j0, the
//! closed-form error laws they obey, per-order decay diagnostics, and the
//! assembly of J(R) from j0 and j1.
//!
//! All series values are stored unitless with limit -1; the (2/e) R e^(-R)
//! envelope enters only in [`j_of_r`]. Working precision is raised
//! automatically with the truncation order so that the deficit -1 - j0,
//! which shrinks roughly like a^(2K) for the variational series, never
//! drowns in rounding.

use std::fmt;
use std::str::FromStr;

use rug::ops::{CompleteRound, Pow};
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::integrals::{l_closed, l_quad};
use crate::mp::{consts, factorial, Prec, Real};

/// Which truncated series to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    Surf,
    Sapt,
    Var,
}

impl Formula {
    pub const ALL: [Formula; 3] = [Formula::Surf, Formula::Sapt, Formula::Var];

    pub fn as_str(self) -> &'static str {
        match self {
            Formula::Surf => "surf",
            Formula::Sapt => "sapt",
            Formula::Var => "var",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        match s {
            "surf" => Ok(Formula::Surf),
            "sapt" => Ok(Formula::Sapt),
            "var" => Ok(Formula::Var),
            other => Err(Error::OutOfDomain {
                name: "formula",
                value: other.into(),
                domain: "surf, sapt, var",
            }),
        }
    }
}

/// Effective digits for order K: the larger of the user request and
/// 2K|log10 a| + 2 log10 K! + 20, so the deficit stays resolvable.
pub fn digits_for_order(big_k: u32, digits: u32) -> u32 {
    let log_a = (std::f64::consts::LN_2 - 0.5).log10().abs();
    let mut log_fac = 0.0f64;
    for k in 2..=big_k {
        log_fac += (k as f64).log10();
    }
    let needed = (2.0 * big_k as f64 * log_a + 2.0 * log_fac + 20.0).ceil() as u32;
    digits.max(needed)
}

/// Surface-integral series: -(e/4)(sum_{k=0}^K a^k/k!)^2.
pub fn j0_surf(big_k: u32, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits_for_order(big_k, digits))?;
    let bits = prec.bits();
    let c = consts(bits);
    let mut term = Float::with_val(bits, 1);
    let mut sum = Float::with_val(bits, 1);
    for k in 1..=big_k {
        term *= &c.a;
        term /= k;
        sum += &term;
    }
    sum.square_mut();
    sum *= &c.e;
    sum /= 4u32;
    Ok(Real::new(-sum, prec))
}

/// Perturbative series: (e/2)(-(1/4) sum_{k=0}^K L(k)/k!), the inner sum
/// held as an exact rational until the final conversion.
pub fn j0_sapt(big_k: u32, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits_for_order(big_k, digits))?;
    let mut sum = Rational::new();
    let mut fac = Rational::from(1);
    for k in 0..=big_k {
        if k > 0 {
            fac *= Rational::from(k);
        }
        sum += l_closed(k) / fac.clone();
    }
    sum /= 4u32;
    let mut v = prec.float(sum);
    v *= &consts(prec.bits()).e;
    v /= 2u32;
    Ok(Real::new(-v, prec))
}

/// Variational series: (e/2)(-(1/(4 K!)) sum_{k=0}^K L(k, K)/k!), the inner
/// integrals evaluated by quadrature and summed in ascending k.
pub fn j0_var(big_k: u32, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits_for_order(big_k, digits))?;
    let bits = prec.bits();
    if big_k == 0 {
        // L(0,0) = 8/3 exactly, so the K = 0 point is -e/3
        let mut v = prec.float(Rational::from((1u32, 3u32)));
        v *= &consts(bits).e;
        return Ok(Real::new(-v, prec));
    }
    let mut sum = Float::new(bits);
    let mut fac = Rational::from(1);
    for k in 0..=big_k {
        if k > 0 {
            fac *= Rational::from(k);
        }
        let l = l_quad(k, big_k, prec.digits())?;
        let mut term = l.value.into_value();
        term /= fac.clone();
        sum += term;
    }
    sum /= 4u32;
    sum /= prec.float(factorial(big_k));
    sum *= &consts(bits).e;
    sum /= 2u32;
    Ok(Real::new(-sum, prec))
}

/// Evaluate the series named by `formula`.
pub fn j0(formula: Formula, big_k: u32, digits: u32) -> Result<Real> {
    match formula {
        Formula::Surf => j0_surf(big_k, digits),
        Formula::Sapt => j0_sapt(big_k, digits),
        Formula::Var => j0_var(big_k, digits),
    }
}

/// Truncation deficit eps(K) = -1 - j0(K); negative, shrinking to zero.
pub fn eps(formula: Formula, big_k: u32, digits: u32) -> Result<Real> {
    let j = j0(formula, big_k, digits)?;
    let prec = Prec::new(j.digits())?;
    let mut e = j.into_value();
    e += 1u32;
    Ok(Real::new(-e, prec))
}

/// A = e sqrt(pi) / (4 sqrt(1 - 4a)), the variational error amplitude.
pub fn var_amplitude(prec: Prec) -> Float {
    let bits = prec.bits();
    let c = consts(bits);
    let mut den = c.a.clone();
    den *= 4u32;
    den = 1u32 - den;
    den.sqrt_mut();
    den *= 4u32;
    let mut v = c.pi.clone().sqrt();
    v *= &c.e;
    v / den
}

/// Leading error term of each series at order K >= 1:
/// surf -sqrt(e) a^(K+1)/(K+1)!, sapt -(1/(6e^2)) 3^(-K),
/// var -A a^(2K+2)/(sqrt(K) K! (K+1)!).
pub fn error_model(formula: Formula, big_k: u32, digits: u32) -> Result<Real> {
    if big_k == 0 {
        return Err(Error::OutOfDomain {
            name: "K",
            value: "0".into(),
            domain: "K >= 1",
        });
    }
    let prec = Prec::new(digits_for_order(big_k, digits))?;
    let bits = prec.bits();
    let c = consts(bits);
    let v = match formula {
        Formula::Surf => {
            let mut v = c.e.clone().sqrt();
            v *= c.a.clone().pow(big_k + 1);
            v /= prec.float(factorial(big_k + 1));
            v
        }
        Formula::Sapt => {
            let mut v = c.e.clone().square();
            v *= 6u32;
            v *= Float::with_val(bits, 3u32).pow(big_k);
            v.recip_mut();
            v
        }
        Formula::Var => {
            let mut v = var_amplitude(prec);
            v *= c.a.clone().pow(2 * big_k + 2);
            v /= Float::with_val(bits, big_k).sqrt();
            v /= prec.float(factorial(big_k));
            v /= prec.float(factorial(big_k + 1));
            v
        }
    };
    Ok(Real::new(-v, prec))
}

/// One order of a decay-rate report.
#[derive(Clone, Debug)]
pub struct DecayRow {
    pub big_k: u32,
    pub eps: Real,
    pub model: Real,
    /// Forward ratio diagnostic built from eps(K+1)/eps(K); see
    /// [`decay_report`] for the per-formula normalization.
    pub diagnostic: Real,
    /// The value the diagnostic approaches as K grows.
    pub target: Real,
}

#[derive(Clone, Debug)]
pub struct DecayRateReport {
    pub formula: Formula,
    pub k_max: u32,
    pub digits: u32,
    pub rows: Vec<DecayRow>,
}

/// Per-order deficits, model predictions and ratio diagnostics for
/// K = 1..K_max. The diagnostics and their limits:
/// sapt eps(K+1)/eps(K) -> 1/3; surf (K+2) eps(K+1)/eps(K) -> a;
/// var eps(K+1)/eps(K) (K+1)(K+2)/a^2 -> sqrt(K/(K+1)) -> 1.
pub fn decay_report(formula: Formula, k_max: u32, digits: u32) -> Result<DecayRateReport> {
    if k_max < 4 {
        return Err(Error::OutOfDomain {
            name: "K_max",
            value: k_max.to_string(),
            domain: "K_max >= 4",
        });
    }
    let eff = digits_for_order(k_max + 1, digits);
    let prec = Prec::new(eff)?;
    let bits = prec.bits();
    let c = consts(bits);
    let mut deficits = Vec::with_capacity(k_max as usize + 1);
    for k in 1..=k_max + 1 {
        deficits.push(eps(formula, k, eff)?);
    }
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let cur = &deficits[(k - 1) as usize];
        let next = &deficits[k as usize];
        let ratio = (next.value() / cur.value()).complete(bits);
        let diagnostic = match formula {
            Formula::Sapt => ratio,
            Formula::Surf => ratio * (k + 2),
            Formula::Var => {
                let mut d = ratio;
                d *= (k + 1) * (k + 2);
                d /= c.a.clone().square();
                d
            }
        };
        let target = match formula {
            Formula::Sapt => {
                let mut t = Float::with_val(bits, 1);
                t /= 3u32;
                t
            }
            Formula::Surf => c.a.clone(),
            Formula::Var => {
                let mut t = Float::with_val(bits, k);
                t /= k + 1;
                t.sqrt()
            }
        };
        rows.push(DecayRow {
            big_k: k,
            eps: cur.clone(),
            model: error_model(formula, k, eff)?,
            diagnostic: Real::new(diagnostic, prec),
            target: Real::new(target, prec),
        });
    }
    Ok(DecayRateReport {
        formula,
        k_max,
        digits,
        rows,
    })
}

/// J(R) = (2/e) R e^(-R) (j0 + j1/R) for R > 0.
pub fn j_of_r(r: &Real, j0: &Real, j1: &Real, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    if !(*r.value() > 0) {
        return Err(Error::OutOfDomain {
            name: "R",
            value: r.to_sci(),
            domain: "R > 0",
        });
    }
    let bits = prec.bits();
    let mut v = (-r.value()).complete(bits).exp();
    v *= r.value();
    v *= 2u32;
    v /= &consts(bits).e;
    let mut par = j1.value().clone();
    par /= r.value();
    par += j0.value();
    v *= par;
    Ok(Real::new(v, prec))
}

/// One line of the error-versus-order data set behind the log plot.
#[derive(Clone, Debug)]
pub struct FigureRow {
    pub formula: Formula,
    pub big_k: u32,
    pub j0: Real,
    pub error: Real,
    pub model_error: Real,
    pub log10_error: Real,
    pub log10_model: Real,
}

/// Errors and model predictions for all three formulas, K = 1..K_max.
pub fn figure_rows(k_max: u32, digits: u32) -> Result<Vec<FigureRow>> {
    if k_max < 2 {
        return Err(Error::OutOfDomain {
            name: "K_max",
            value: k_max.to_string(),
            domain: "K_max >= 2",
        });
    }
    let mut rows = Vec::with_capacity(3 * k_max as usize);
    for formula in Formula::ALL {
        for k in 1..=k_max {
            let j = j0(formula, k, digits)?;
            let prec = Prec::new(j.digits())?;
            let mut e = j.value().clone();
            e += 1u32;
            let error = -e;
            let model = error_model(formula, k, digits)?;
            let log10_error = error.clone().abs().log10();
            let log10_model = model.value().clone().abs().log10();
            rows.push(FigureRow {
                formula,
                big_k: k,
                j0: j,
                error: Real::new(error, prec),
                model_error: model,
                log10_error: Real::new(log10_error, prec),
                log10_model: Real::new(log10_model, prec),
            });
        }
    }
    Ok(rows)
}

/// One line of the decay-rate comparison table.
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub formula: Formula,
    pub big_k: u32,
    /// Computed ratio diagnostic at this order.
    pub diagnostic: Real,
    /// Reference decay written as a formula in K (computed column).
    pub polarization_reference: &'static str,
    /// Fixed reference constant for the companion truncation scheme;
    /// echoed as printed, never recomputed here.
    pub multipole_reference: &'static str,
}

pub fn table1_rows(k_max: u32, digits: u32) -> Result<Vec<Table1Row>> {
    if k_max < 6 {
        return Err(Error::OutOfDomain {
            name: "K_max",
            value: k_max.to_string(),
            domain: "K_max >= 6",
        });
    }
    let mut rows = Vec::with_capacity(3 * k_max as usize);
    for formula in Formula::ALL {
        let report = decay_report(formula, k_max, digits)?;
        let (pol, multi) = match formula {
            Formula::Surf => ("a^K/(K+1)!", "4^(-K)"),
            Formula::Sapt => ("3^(-K)", "K^(-2)"),
            Formula::Var => ("a^(2K)/(K!(K+1)!sqrt(K))", "16^(-K)"),
        };
        for row in &report.rows {
            rows.push(Table1Row {
                formula,
                big_k: row.big_k,
                diagnostic: row.diagnostic.clone(),
                polarization_reference: pol,
                multipole_reference: multi,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Real, want: &str, digits: u32) {
        let p = Prec::new(digits).unwrap();
        let w = p.float(Float::parse(want).unwrap());
        let mut d = a.value().clone();
        d -= &w;
        d.abs_mut();
        let mut tol = w.abs();
        if tol.is_zero() {
            tol = p.float(1u32);
        }
        tol *= Float::with_val(p.bits(), 10u32).pow(-(digits as i32));
        assert!(d <= tol, "got {}, want {}", a.to_sci(), want);
    }

    #[test]
    fn surf_small_orders() {
        let j = j0_surf(0, 40).unwrap();
        close(&j, "-6.795704571147613088400718678381656244393e-1", 38);
        let j = j0_surf(1, 40).unwrap();
        close(&j, "-9.67436634910177274178041744185557792927e-1", 38);
        let j = j0_surf(5, 40).unwrap();
        close(&j, "-9.99999877748699106677590780612392518781737e-1", 38);
    }

    #[test]
    fn sapt_small_orders() {
        let j = j0_sapt(0, 40).unwrap();
        close(&j, "-9.060939428196817451200958237842208325857e-1", 38);
        let j = j0_sapt(1, 40).unwrap();
        close(&j, "-9.816017713879885572134371424329059019679e-1", 38);
        let j = j0_sapt(5, 40).unwrap();
        close(&j, "-9.998856640238718585795290764412502602859e-1", 38);
    }

    #[test]
    fn var_order_zero_matches_sapt() {
        let v = j0_var(0, 35).unwrap();
        let s = j0_sapt(0, 35).unwrap();
        let d = (v.value() - s.value()).complete(v.value().prec());
        assert!(d.abs() < Prec::new(35).unwrap().tol());
    }

    #[test]
    fn var_order_one_closed_form() {
        // (e/2)(pi^2/9 - 989/540)
        let v = j0_var(1, 40).unwrap();
        close(&v, "-9.987766208262578046235982980797266633756e-1", 36);
    }

    #[test]
    fn var_order_two() {
        let v = j0_var(2, 40).unwrap();
        close(&v, "-9.999937861123325932048216088329879794836e-1", 36);
    }

    #[test]
    fn formula_parsing() {
        assert_eq!("surf".parse::<Formula>().unwrap(), Formula::Surf);
        assert_eq!("var".parse::<Formula>().unwrap(), Formula::Var);
        assert!("midpoint".parse::<Formula>().is_err());
    }

    #[test]
    fn amplitude_constant() {
        let p = Prec::new(40).unwrap();
        let a = var_amplitude(p);
        let want = p.float(Float::parse("2.52582599020287657954641033303").unwrap());
        assert!((a - want).abs() < 1e-28);
    }

    #[test]
    fn model_spot_values() {
        let m = error_model(Formula::Surf, 3, 40).unwrap();
        close(&m, "-9.56069560175e-5", 11);
        let m = error_model(Formula::Sapt, 5, 40).unwrap();
        close(&m, "-9.28225536602e-5", 11);
        let m = error_model(Formula::Var, 1, 40).unwrap();
        assert!(m.value().is_sign_negative());
        assert!(error_model(Formula::Var, 0, 40).is_err());
    }

    #[test]
    fn deficit_sign_and_shrink() {
        for f in Formula::ALL {
            let e1 = eps(f, 1, 30).unwrap();
            let e3 = eps(f, 3, 30).unwrap();
            assert!(e1.value().is_sign_negative());
            assert!(e3.value().is_sign_negative());
            assert!(e3.value().clone().abs() < e1.value().clone().abs());
        }
    }

    #[test]
    fn ordering_at_order_four() {
        let ev = eps(Formula::Var, 4, 30).unwrap().value().clone().abs();
        let es = eps(Formula::Surf, 4, 30).unwrap().value().clone().abs();
        let ep = eps(Formula::Sapt, 4, 30).unwrap().value().clone().abs();
        assert!(ev < es && es < ep);
    }

    #[test]
    fn decay_report_shape() {
        let r = decay_report(Formula::Sapt, 4, 25).unwrap();
        assert_eq!(r.rows.len(), 4);
        for w in r.rows.windows(2) {
            assert!(
                w[1].eps.value().clone().abs() < w[0].eps.value().clone().abs(),
                "deficit not shrinking"
            );
        }
        assert!(decay_report(Formula::Sapt, 3, 25).is_err());
    }

    #[test]
    fn sapt_ratio_near_one_third() {
        let r = decay_report(Formula::Sapt, 6, 25).unwrap();
        let d = r.rows.last().unwrap().diagnostic.to_f64();
        assert!((d - 1.0 / 3.0).abs() < 0.05, "diagnostic {d}");
    }

    #[test]
    fn envelope_values() {
        let p = Prec::new(30).unwrap();
        let r = Real::new(p.float(10u32), p);
        let zero = Real::new(p.float(0u32), p);
        let mone = Real::new(p.float(-1), p);
        let j = j_of_r(&r, &mone, &zero, 30).unwrap();
        close(&j, "-3.3403401580491318625271034721162e-4", 28);
        let j = j_of_r(&r, &zero, &zero, 30).unwrap();
        assert!(j.value().is_zero());
        let mhalf = Real::new(p.float(Rational::from((-1, 2))), p);
        let full = j_of_r(&r, &mone, &mhalf, 30).unwrap();
        let base = j_of_r(&r, &mone, &zero, 30).unwrap();
        let ratio = (full.value() / base.value()).complete(p.bits());
        let target = p.float(Rational::from((21u32, 20u32)));
        assert!((ratio - target).abs() < 1e-20);
        let bad = Real::new(p.float(0u32), p);
        assert!(j_of_r(&bad, &mone, &zero, 30).is_err());
    }

    #[test]
    fn digits_rise_with_order() {
        assert_eq!(digits_for_order(0, 60), 60);
        assert!(digits_for_order(12, 10) >= 50);
        assert!(digits_for_order(20, 60) > digits_for_order(10, 60));
    }

    #[test]
    fn figure_rows_shape() {
        let rows = figure_rows(2, 20).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(figure_rows(1, 20).is_err());
        for row in &rows {
            assert!(row.error.value().is_sign_negative());
            assert!(row.log10_error.value().is_sign_negative());
        }
    }

    #[test]
    fn table_rows_echo_fixed_constants() {
        let rows = table1_rows(6, 20).unwrap();
        assert_eq!(rows.len(), 18);
        let multi: Vec<&str> = rows.iter().map(|r| r.multipole_reference).collect();
        assert!(multi.contains(&"4^(-K)"));
        assert!(multi.contains(&"K^(-2)"));
        assert!(multi.contains(&"16^(-K)"));
    }
}
