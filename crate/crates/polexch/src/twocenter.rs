//! Reference eigensolver for one electron shared by two unit point charges
//! a distance R apart: the lowest even (gerade) and odd (ungerade) states,
//! their splitting J = (E_g - E_u)/2, and the comparison of J against the
//! large-R law (2/e) R e^(-R) (-1 - 1/(2R)).
//!
//! The Schroedinger equation separates in prolate spheroidal coordinates
//! (xi, eta) with the charges at the foci. Writing the electronic energy as
//! E and c^2 = -R^2 E / 2:
//!
//! * angular part: d/deta[(1-eta^2) Y'] + (A + c^2 eta^2) Y = 0, expanded
//!   over Legendre polynomials of one parity; the separation constant A is
//!   the smallest eigenvalue of a symmetric tridiagonal matrix, found by
//!   Sturm-sequence bisection;
//! * radial part: d/dxi[(xi^2-1) X'] + (2R xi - c^2 xi^2 - A) X = 0, with
//!   X = e^(-c xi) (xi+1)^(R/c-1) sum_N g_N u^N, u = (xi-1)/(xi+1). The
//!   g_N obey a three-term recurrence whose minimal solution exists exactly
//!   at an energy eigenvalue; the eigencondition is a continued fraction
//!   evaluated backward.
//!
//! A bound E is located by a coarse low-precision scan for sign changes of
//! the eigencondition (with bracket classification, since the continued
//! fraction also crosses through poles), then polished to full precision by
//! a bracket-preserving secant iteration, and finally recomputed with
//! enlarged truncations to certify the digits.

use rug::ops::{CompleteRound, Pow};
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{format_sci, Prec, Real};

/// Converged pair of states at one separation.
#[derive(Clone, Debug)]
pub struct OracleResult {
    pub r: Real,
    /// Total energy of the even state, nuclear 1/R included.
    pub e_g: Real,
    /// Total energy of the odd state, nuclear 1/R included.
    pub e_u: Real,
    /// (E_g - E_u)/2, negative.
    pub j: Real,
    /// J e / (2 R e^(-R)); approaches -1 - 1/(2R) at large R.
    pub scaled_ratio: Real,
    pub digits: u32,
}

/// One row of the asymptotic comparison scan.
#[derive(Clone, Debug)]
pub struct AsymptoticRow {
    pub r: Real,
    pub scaled_ratio: Real,
    /// Two-term law -1 - 1/(2R).
    pub model: Real,
    /// scaled_ratio - model.
    pub deviation: Real,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn offset(self) -> u64 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

/// Smallest eigenvalue of the angular problem at given c^2 and parity,
/// from the symmetric tridiagonal Legendre-basis matrix of dimension n.
fn angular_ground(c2: &Float, parity: Parity, n: usize, bits: u32) -> Float {
    let ls: Vec<u64> = (0..n as u64).map(|i| parity.offset() + 2 * i).collect();
    let coupling_up = |l: u64| -> Float {
        // <l| eta^2 |l+2> factor (l+1)(l+2)/((2l+1)(2l+3))
        let num = (l + 1) * (l + 2);
        let den = (2 * l + 1) * (2 * l + 3);
        Float::with_val(bits, num) / den
    };
    let diag_weight = |l: u64| -> Float {
        // <l| eta^2 |l> factor (2l^2+2l-1)/((2l-1)(2l+3))
        let num = 2 * (l * l) as i64 + 2 * l as i64 - 1;
        let den = (2 * l as i64 - 1) * (2 * l as i64 + 3);
        Float::with_val(bits, num) / den
    };
    let coupling_down = |l: u64| -> Float {
        // <l| eta^2 |l-2> factor l(l-1)/((2l-1)(2l+1))
        let num = l * (l - 1);
        let den = (2 * l - 1) * (2 * l + 1);
        Float::with_val(bits, num) / den
    };
    let mut d = Vec::with_capacity(n);
    for &l in &ls {
        let mut v = diag_weight(l);
        v *= c2;
        v = Float::with_val(bits, l * (l + 1)) - v;
        d.push(v);
    }
    let mut b2 = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let mut v = coupling_up(ls[i]);
        v *= coupling_down(ls[i + 1]);
        v *= c2.clone().square();
        b2.push(v);
    }
    // Sturm sequence: how many eigenvalues lie below x
    let count_below = |x: &Float| -> usize {
        let mut cnt = 0;
        let mut q = (&d[0] - x).complete(bits);
        if q.is_sign_negative() {
            cnt += 1;
        }
        for i in 1..n {
            if q.is_zero() {
                q = Float::with_val(bits, 1e-50f64);
            }
            let mut next = (&d[i] - x).complete(bits);
            next -= (&b2[i - 1] / &q).complete(bits);
            q = next;
            if q.is_sign_negative() {
                cnt += 1;
            }
        }
        cnt
    };
    let spread = c2.clone().abs() * 2u32 + 10u32;
    let mut lo = d
        .iter()
        .fold(d[0].clone(), |m, v| if *v < m { v.clone() } else { m });
    lo -= &spread;
    let mut hi = d
        .iter()
        .fold(d[0].clone(), |m, v| if *v > m { v.clone() } else { m });
    hi += &spread;
    while count_below(&lo) > 0 {
        lo -= &spread;
    }
    let tol = Float::with_val(bits, 2u32) >> (bits - 6);
    for _ in 0..bits + 40 {
        let mut mid = lo.clone();
        mid += &hi;
        mid /= 2u32;
        if count_below(&mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        let mut width = hi.clone();
        width -= &lo;
        let mut scale = hi.clone().abs();
        if scale < 1 {
            scale = Float::with_val(bits, 1u32);
        }
        scale *= &tol;
        if width < scale {
            break;
        }
    }
    let mut mid = lo;
    mid += hi;
    mid /= 2u32;
    mid
}

/// Backward-evaluated eigencondition of the radial three-term recurrence:
/// alpha_n = (n+1)^2, beta_n = -(2n^2 + (4c+2-2R/c) n + A - 2R - R/c
/// + (c+1)^2), gamma_n = (n - R/c)^2; returns beta_0 + alpha_0 r_0.
fn radial_condition(c: &Float, a_ang: &Float, r: &Float, nmax: u32, bits: u32) -> Float {
    let sigma = (r / c).complete(bits);
    // beta_n = -(2n^2 + lin*n + con)
    let mut lin = c.clone();
    lin *= 4u32;
    lin += 2u32;
    lin -= &sigma;
    lin -= &sigma;
    let mut con = c.clone();
    con += 1u32;
    con.square_mut();
    con += a_ang;
    con -= (r * 2u32).complete(bits);
    con -= &sigma;
    let mut t = Float::new(bits);
    for n in (1..=nmax).rev() {
        let mut beta = Float::with_val(bits, 2 * (n as u64) * (n as u64));
        let mut l = lin.clone();
        l *= n;
        beta += l;
        beta += &con;
        beta = -beta;
        let mut gamma = (n - &sigma).complete(bits);
        gamma.square_mut();
        // t_{n-1} = -gamma_n / (beta_n + alpha_n t_n), alpha_n = (n+1)^2
        let mut den = t;
        den *= (n as u64 + 1) * (n as u64 + 1);
        den += beta;
        t = -(gamma / den);
    }
    let mut beta0 = con;
    beta0 = -beta0;
    beta0 += t; // alpha_0 = 1
    beta0
}

/// Truncation sizes used for one eigencondition evaluation.
#[derive(Clone, Copy)]
struct Truncation {
    nmax: u32,
    ang_base: usize,
}

fn eigencondition(
    e_elec: &Float,
    r: &Float,
    parity: Parity,
    trunc: Truncation,
    bits: u32,
) -> Float {
    let mut c2 = r.clone().square();
    c2 *= e_elec;
    c2 /= 2u32;
    c2 = -c2;
    let c = c2.clone().sqrt();
    let nang = trunc.ang_base + (c.to_f64() * 3.0).ceil() as usize;
    let a_ang = angular_ground(&c2, parity, nang, bits);
    radial_condition(&c, &a_ang, r, trunc.nmax, bits)
}

const SCAN_TRUNC: Truncation = Truncation {
    nmax: 300,
    ang_base: 60,
};
const FULL_TRUNC: Truncation = Truncation {
    nmax: 800,
    ang_base: 80,
};
const CHECK_TRUNC: Truncation = Truncation {
    nmax: 1200,
    ang_base: 110,
};

/// Locate a sign-change bracket around the lowest energy at which the
/// eigencondition has a genuine root (not a pole) inside the window.
fn scan_bracket(
    r: &Float,
    parity: Parity,
    window: (f64, f64),
    bits: u32,
) -> Result<(Float, Float)> {
    let evals = |e: &Float| eigencondition(e, r, parity, SCAN_TRUNC, bits);
    for points in [49usize, 193] {
        let (wlo, whi) = window;
        let step = (whi - wlo) / (points - 1) as f64;
        let mut prev_e = Float::with_val(bits, wlo);
        let mut prev_f = evals(&prev_e);
        for i in 1..points {
            let e = Float::with_val(bits, wlo + step * i as f64);
            let f = evals(&e);
            let crossing = prev_f.is_sign_negative() != f.is_sign_negative();
            if crossing {
                // classify: bisect and watch whether |F| collapses (root)
                // or explodes (pole) at the crossing
                let mut a = prev_e.clone();
                let mut b = e.clone();
                let mut fa = prev_f.clone();
                let reference = prev_f.clone().abs().min(&f.clone().abs());
                let mut fmid = Float::new(bits);
                for _ in 0..22 {
                    let mut m = a.clone();
                    m += &b;
                    m /= 2u32;
                    fmid = evals(&m);
                    if fmid.is_sign_negative() == fa.is_sign_negative() {
                        a = m;
                        fa = fmid.clone();
                    } else {
                        b = m;
                    }
                }
                if fmid.clone().abs() < reference {
                    return Ok((a, b));
                }
            }
            prev_e = e;
            prev_f = f;
        }
    }
    Err(Error::SolverDidNotConverge {
        r: format_sci(r, 6),
        detail: "no eigencondition root inside the scan window".into(),
    })
}

/// Bracket-preserving secant (Illinois) refinement at full precision.
fn refine_root<F>(
    f: F,
    mut a: Float,
    mut b: Float,
    rel_tol: &Float,
    bits: u32,
) -> Result<Float>
where
    F: Fn(&Float) -> Float,
{
    let mut fa = f(&a);
    let mut fb = f(&b);
    if fa.is_sign_negative() == fb.is_sign_negative() {
        // the coarse bracket may sit marginally off at higher truncation
        let mut width = (&b - &a).complete(bits);
        width *= 5u32;
        let mut a2 = a.clone();
        a2 -= &width;
        let mut b2 = b.clone();
        b2 += &width;
        fa = f(&a2);
        fb = f(&b2);
        a = a2;
        b = b2;
        if fa.is_sign_negative() == fb.is_sign_negative() {
            return Err(Error::SolverDidNotConverge {
                r: String::new(),
                detail: "sign-change bracket lost during refinement".into(),
            });
        }
    }
    for _ in 0..200 {
        let mut width = (&b - &a).complete(bits);
        width.abs_mut();
        let mut scale = b.clone().abs();
        scale *= rel_tol;
        if width <= scale {
            let mut mid = a;
            mid += &b;
            mid /= 2u32;
            return Ok(mid);
        }
        // false-position point (a fb - b fa)/(fb - fa)
        let mut num = (&a * &fb).complete(bits);
        num -= (&b * &fa).complete(bits);
        let mut den = fb.clone();
        den -= &fa;
        let mut x = num / den;
        // guard against degenerate interpolation
        if !(x > a && x < b) && !(x > b && x < a) {
            x = (&a + &b).complete(bits);
            x /= 2u32;
        }
        let fx = f(&x);
        if fx.is_zero() {
            return Ok(x);
        }
        if fx.is_sign_negative() == fa.is_sign_negative() {
            a = x;
            fa = fx;
            fb /= 2u32; // Illinois step keeps the stagnant side moving
        } else {
            b = x;
            fb = fx;
            fa /= 2u32;
        }
    }
    Err(Error::SolverDidNotConverge {
        r: String::new(),
        detail: "secant refinement did not reach tolerance".into(),
    })
}

/// Electronic energy of the lowest state of one parity.
fn solve_parity(r: &Float, parity: Parity, digits: u32, bits: u32) -> Result<Float> {
    // For R in [1, 40] the lowest state of either parity stays below
    // -1/2 - 1/(2R) <= -0.5125 while every higher state of the same parity
    // stays above -1/2, so a fixed upper edge isolates exactly one root.
    let window = match parity {
        Parity::Even => (-2.2, -0.501),
        Parity::Odd => (-0.9, -0.501),
    };
    let scan_bits = Prec::new(14)?.bits();
    let (lo, hi) = scan_bracket(
        &Float::with_val(scan_bits, r),
        parity,
        window,
        scan_bits,
    )
    .map_err(|e| match e {
        Error::SolverDidNotConverge { detail, .. } => Error::SolverDidNotConverge {
            r: format_sci(r, 6),
            detail,
        },
        other => other,
    })?;
    let mut rel_tol = Float::with_val(bits, 10u32);
    rel_tol = rel_tol.pow(-(digits as i32 + 6));
    let refined = |trunc: Truncation| -> Result<Float> {
        refine_root(
            |e| eigencondition(e, r, parity, trunc, bits),
            Float::with_val(bits, &lo),
            Float::with_val(bits, &hi),
            &rel_tol,
            bits,
        )
        .map_err(|e| match e {
            Error::SolverDidNotConverge { detail, .. } => Error::SolverDidNotConverge {
                r: format_sci(r, 6),
                detail,
            },
            other => other,
        })
    };
    let first = refined(FULL_TRUNC)?;
    let second = refined(CHECK_TRUNC)?;
    let mut drift = first.clone();
    drift -= &second;
    drift.abs_mut();
    let mut allowed = second.clone().abs();
    allowed *= Float::with_val(bits, 10u32).pow(-(digits as i32 + 2));
    if drift > allowed {
        return Err(Error::SolverDidNotConverge {
            r: format_sci(r, 6),
            detail: format!(
                "energy moved by {} between truncation levels",
                format_sci(&drift, 3)
            ),
        });
    }
    Ok(second)
}

fn check_domain(r: &Real, digits: u32) -> Result<()> {
    if digits > 40 {
        return Err(Error::OutOfDomain {
            name: "digits",
            value: digits.to_string(),
            domain: "1..=40",
        });
    }
    if !(*r.value() >= 1 && *r.value() <= 40) {
        return Err(Error::OutOfDomain {
            name: "R",
            value: r.to_sci(),
            domain: "[1, 40]",
        });
    }
    Ok(())
}

/// Both total energies, their splitting and the scaled ratio at one R.
pub fn solve(r: &Real, digits: u32) -> Result<OracleResult> {
    check_domain(r, digits)?;
    let prec = Prec::new(digits)?;
    let wp = Prec::new(digits + 12)?;
    let bits = wp.bits();
    let rf = wp.float(r.value());
    let e_g_elec = solve_parity(&rf, Parity::Even, digits, bits)?;
    let e_u_elec = solve_parity(&rf, Parity::Odd, digits, bits)?;
    let nuclear = (1u32 / &rf).complete(bits);
    let mut e_g = e_g_elec;
    e_g += &nuclear;
    let mut e_u = e_u_elec;
    e_u += &nuclear;
    let mut j = e_g.clone();
    j -= &e_u;
    j /= 2u32;
    // scaled = J e / (2 R e^(-R)) = J e^(R+1) / (2R)
    let mut scaled = (&rf + 1u32).complete(bits).exp();
    scaled *= &j;
    scaled /= (&rf * 2u32).complete(bits);
    Ok(OracleResult {
        r: Real::new(rf, prec),
        e_g: Real::new(e_g, prec),
        e_u: Real::new(e_u, prec),
        j: Real::new(j, prec),
        scaled_ratio: Real::new(scaled, prec),
        digits,
    })
}

/// Scaled ratios against the two-term law -1 - 1/(2R) for a list of
/// separations, all of which must satisfy R >= 8.
pub fn asymptotic_check(rs: &[Real], digits: u32) -> Result<Vec<AsymptoticRow>> {
    for r in rs {
        if !(*r.value() >= 8) {
            return Err(Error::OutOfDomain {
                name: "R",
                value: r.to_sci(),
                domain: "[8, 40]",
            });
        }
    }
    let prec = Prec::new(digits)?;
    let bits = prec.bits();
    let mut rows = Vec::with_capacity(rs.len());
    for r in rs {
        let solved = solve(r, digits)?;
        let mut model = (r.value() * 2u32).complete(bits).recip();
        model += 1u32;
        model = -model;
        let mut deviation = solved.scaled_ratio.value().clone();
        deviation -= &model;
        rows.push(AsymptoticRow {
            r: solved.r,
            scaled_ratio: solved.scaled_ratio,
            model: Real::new(model, prec),
            deviation: Real::new(deviation, prec),
        });
    }
    Ok(rows)
}

/// The two-term law itself, -1 - 1/(2R).
pub fn asymptotic_model(r: &Real, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    let bits = prec.bits();
    let mut model = (r.value() * 2u32).complete(bits).recip();
    model += 1u32;
    Ok(Real::new(-model, prec))
}
