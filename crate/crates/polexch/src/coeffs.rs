//! Exact rational coefficients t_n^(k) of the collinear polarization
//! factors, their generating-function cross-check, and evaluation of the
//! factors f^(k)(rho) and partial sums F^(K)(rho).
//!
//! The table is defined by the recurrence
//!
//! ```text
//! t_n^(0) = [n = 0],    t_n^(k) = (1/n) * sum_{j=2k-2}^{n-2} t_j^(k-1)
//! ```
//!
//! with empty sums zero. Independently, t_n^(k) is the z^n coefficient of
//! [-z - ln(1-z)]^k / k!; both routes are implemented and must agree as
//! exact rationals, which is what pins the recurrence down in tests.

use rug::ops::Pow;
use rug::Rational;

use crate::error::{Error, Result};
use crate::mp::{factorial, Prec, Real};

/// Triangular table of exact coefficients, `t[k][n]` for k <= k_max,
/// n <= n_max.
#[derive(Clone, Debug)]
pub struct RationalCoeffTable {
    pub k_max: u32,
    pub n_max: u32,
    t: Vec<Vec<Rational>>,
}

impl RationalCoeffTable {
    pub fn get(&self, k: u32, n: u32) -> &Rational {
        &self.t[k as usize][n as usize]
    }

    /// (k, n, coefficient) in row-major order, the serialization order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.t.iter().enumerate().flat_map(|(k, row)| {
            row.iter()
                .enumerate()
                .map(move |(n, c)| (k as u32, n as u32, c))
        })
    }
}

/// Fill the coefficient table by the recurrence.
pub fn tcoeffs(k_max: u32, n_max: u32) -> RationalCoeffTable {
    let nn = n_max as usize + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(k_max as usize + 1);
    let mut row0 = vec![Rational::new(); nn];
    row0[0] = Rational::from(1);
    t.push(row0);
    for k in 1..=k_max as usize {
        let prev = &t[k - 1];
        let mut row = vec![Rational::new(); nn];
        let lo = 2 * k - 2;
        // running sum of prev[lo..=n-2]
        let mut acc = Rational::new();
        for n in 2..nn {
            if n - 2 >= lo {
                acc += &prev[n - 2];
            }
            if !acc.is_zero() {
                row[n] = acc.clone() / Rational::from(n as u32);
            }
        }
        t.push(row);
    }
    RationalCoeffTable { k_max, n_max, t }
}

/// z^n coefficient of [-z - ln(1-z)]^k / k!, by exact truncated power-series
/// powering. Entirely independent of the recurrence.
pub fn gf_coeff(k: u32, n: u32) -> Rational {
    let nn = n as usize + 1;
    // base series: -z - ln(1-z) = sum_{j>=2} z^j / j
    let mut base = vec![Rational::new(); nn];
    for (j, b) in base.iter_mut().enumerate().skip(2) {
        *b = Rational::from((1u32, j as u32));
    }
    let mut pow = vec![Rational::new(); nn];
    pow[0] = Rational::from(1);
    for _ in 0..k {
        let mut next = vec![Rational::new(); nn];
        for i in 0..nn {
            if pow[i].is_zero() {
                continue;
            }
            for j in 2..nn - i {
                if !base[j].is_zero() {
                    let mut term = pow[i].clone();
                    term *= &base[j];
                    next[i + j] += term;
                }
            }
        }
        pow = next;
    }
    let mut c = pow[n as usize].clone();
    c /= Rational::from(factorial(k));
    c
}

fn check_rho(rho: &Real) -> Result<()> {
    let v = rho.value();
    if v.is_sign_negative() && !v.is_zero() || *v >= 1 || v.is_nan() {
        return Err(Error::OutOfDomain {
            name: "rho",
            value: rho.to_sci(),
            domain: "[0, 1)",
        });
    }
    Ok(())
}

/// x(rho) = -rho - ln(1 - rho), the argument every factor is a power of.
fn x_of_rho(rho: &Real, prec: Prec) -> rug::Float {
    let r = prec.float(rho.value());
    let mut x = prec.float(1u32);
    x -= &r;
    x.ln_mut();
    -x - r
}

/// f^(k)(rho) = [-rho - ln(1-rho)]^k / k!, the closed form of the k-th
/// collinear factor, valid on [0, 1).
pub fn ftilde(k: u32, rho: &Real, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    check_rho(rho)?;
    let x = x_of_rho(rho, prec);
    let mut v = x.pow(k);
    v /= prec.float(factorial(k));
    Ok(Real::new(v, prec))
}

/// Partial sum F^(K)(rho) = sum_{k=0}^K f^(k)(rho); tends to
/// e^(-rho)/(1-rho) as K grows.
pub fn fsum(big_k: u32, rho: &Real, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    check_rho(rho)?;
    let x = x_of_rho(rho, prec);
    // truncated exponential series at x, ascending powers
    let mut term = prec.float(1u32);
    let mut sum = prec.float(1u32);
    for k in 1..=big_k {
        term *= &x;
        term /= k;
        sum += &term;
    }
    Ok(Real::new(sum, prec))
}

impl RationalCoeffTable {
    /// Exact partial sums of a row, used by the differential-identity test.
    pub fn row_prefix_sum(&self, k: u32, n_hi: u32) -> Rational {
        let mut s = Rational::new();
        for n in 0..=n_hi {
            s += self.get(k, n);
        }
        s
    }
}

/// Exact t[k][n] via binomial-free factorial arithmetic is not available;
/// the two independent routes above are the ground truth. This helper just
/// renders one coefficient as (numerator, denominator) strings for
/// serialization.
pub fn rational_parts(r: &Rational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

/// Exact value of the truncated-series tail bound used by the limit test:
/// |F^(K)(rho) - e^(-rho)/(1-rho)| <= e^x * x^(K+1)/(K+1)! at x = x(rho).
pub fn fsum_limit_gap(big_k: u32, rho: &Real, digits: u32) -> Result<(Real, Real)> {
    let prec = Prec::new(digits)?;
    check_rho(rho)?;
    let s = fsum(big_k, rho, digits)?;
    let r = prec.float(rho.value());
    let mut lim = prec.float(1u32);
    lim -= &r;
    lim.recip_mut();
    lim *= (-r).exp();
    let mut gap = lim;
    gap -= s.value();
    gap.abs_mut();
    let x = x_of_rho(rho, prec);
    let mut bound = x.clone().exp();
    bound *= x.pow(big_k + 1);
    bound /= prec.float(factorial(big_k + 1));
    Ok((Real::new(gap, prec), Real::new(bound, prec)))
}
