//! Double-exponential quadrature: exp-sinh on [0, inf) and tanh-sinh on a
//! finite interval.
//!
//! The change of variable t = exp(pi/2 * sinh(u)) pushes both endpoints to
//! double-exponentially decaying tails in u, which is what makes an
//! *integrable logarithmic singularity at the finite endpoint* harmless: the
//! singular factor grows only single-exponentially in |u| while the weight
//! collapses like exp(-c * e^|u|). No user-supplied interval splitting is
//! needed, per the substrate contract.
//!
//! Each level halves the step and reuses every node already summed
//! (trapezoid refinement), so the final level dominates the cost. The error
//! estimate is the last inter-level difference; once the scheme is in its
//! convergence regime that difference overestimates the true error.

use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};
use crate::mp::{format_sci, Prec};

/// Outcome of one adaptive quadrature run.
#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: Float,
    pub abs_error_estimate: Float,
    pub evaluations: usize,
}

const MAX_LEVEL: u32 = 14;
/// consecutive negligible terms before a tail is declared dead
const TAIL_RUN: u32 = 4;
/// hard cap on nodes per side per level, defensive only
const SIDE_CAP: i64 = 1 << 22;

/// Terms below tol * scale / 2^10 cannot move the result at the requested
/// precision; sweeps stop after a run of them.
fn term_floor(scale: &Float, tol: &Float, bits: u32) -> Float {
    let mut s = scale.clone().abs();
    if s.is_zero() || !s.is_finite() {
        s = Float::with_val(bits, 1u32);
    }
    s *= tol;
    s >> 10
}

struct Levels<G> {
    g: G,
    bits: u32,
    tol: Float,
    sum: Float,
    evaluations: usize,
    floor: Float,
    /// Farthest |u| per side at which any level found a contributing term.
    /// A dead run may only end a sweep beyond this radius, so refinement
    /// passes cannot give up inside a quiet inner region when the mass of
    /// the integrand sits off-center (e.g. hard against one endpoint).
    reach: [Float; 2],
}

impl<G> Levels<G>
where
    G: Fn(&Float) -> Option<Float>,
{
    /// Walk k = start, start+step, ... accumulating g(u_k) until a run of
    /// negligible terms past the known support or a declared endpoint
    /// (None) ends the side.
    fn sweep(&mut self, h: &Float, start: i64, step: i64) {
        let side = (step > 0) as usize;
        let mut dead = 0u32;
        let mut k = start;
        while k.abs() < SIDE_CAP {
            let mut u = Float::with_val(self.bits, k);
            u *= h;
            let distance = u.clone().abs();
            if dead >= TAIL_RUN && distance > self.reach[side] {
                break;
            }
            let term = match (self.g)(&u) {
                Some(t) => t,
                None => break,
            };
            self.evaluations += 1;
            if term.clone().abs() < self.floor {
                dead += 1;
            } else {
                dead = 0;
                if distance > self.reach[side] {
                    self.reach[side] = distance;
                }
            }
            self.sum += term;
            k += step;
        }
    }

    fn run(mut self) -> Result<QuadResult> {
        let bits = self.bits;
        let mut h = Float::with_val(bits, 1u32);
        // support detection must see structure far below the final
        // tolerance, so the first pass uses an absolute floor of tol^4
        let mut absolute_floor = self.tol.clone();
        absolute_floor.square_mut();
        absolute_floor.square_mut();
        absolute_floor >>= 10;
        self.floor = absolute_floor.clone();
        self.sweep(&h, 0, 1);
        self.sweep(&h, -1, -1);
        let mut estimate = self.sum.clone() * &h;
        let mut last_diff = Float::with_val(bits, 1u32);

        for _level in 1..=MAX_LEVEL {
            h /= 2u32;
            self.floor = term_floor(&estimate, &self.tol, bits);
            if self.floor < absolute_floor {
                self.floor = absolute_floor.clone();
            }
            self.sweep(&h, 1, 2);
            self.sweep(&h, -1, -2);
            let refined = self.sum.clone() * &h;
            let mut diff = refined.clone();
            diff -= &estimate;
            diff.abs_mut();
            estimate = refined;
            let mut target = estimate.clone().abs();
            if target < 1e-300 {
                target = Float::with_val(bits, 1e-300f64);
            }
            target *= &self.tol;
            if diff <= target {
                return Ok(QuadResult {
                    value: estimate,
                    abs_error_estimate: diff,
                    evaluations: self.evaluations,
                });
            }
            last_diff = diff;
        }
        Err(Error::QuadratureDidNotConverge {
            estimate: format_sci(&last_diff, 3),
            target: format_sci(&self.tol, 3),
            evaluations: self.evaluations,
        })
    }
}

/// Integrate `f` over [0, inf) to the requested precision.
///
/// `f` must decay at least exponentially at infinity; at t = 0 it may be
/// bounded or carry an integrable logarithmic singularity. Non-convergence
/// within the level budget is an error carrying the achieved estimate.
pub fn semi_infinite<F>(f: F, prec: Prec) -> Result<QuadResult>
where
    F: Fn(&Float) -> Float,
{
    let bits = prec.bits() + 16;
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let g = move |u: &Float| -> Option<Float> {
        let (sinh_u, cosh_u) = u.clone().sinh_cosh(Float::new(bits));
        let mut arg = sinh_u;
        arg *= &half_pi;
        let t = arg.exp();
        if !t.is_finite() || t.is_zero() {
            // transform under/overflowed: this side is exhausted
            return None;
        }
        let mut w = cosh_u;
        w *= &half_pi;
        w *= &t;
        let mut term = f(&t);
        term *= w;
        Some(term)
    };
    Levels {
        g,
        bits,
        tol: prec.tol(),
        sum: Float::new(bits),
        evaluations: 0,
        floor: Float::new(bits),
        reach: [Float::new(bits), Float::new(bits)],
    }
    .run()
}

/// Integrate `f` over [a, b] to the requested precision (tanh-sinh).
///
/// Tolerates integrable endpoint singularities the same way the
/// semi-infinite rule does.
pub fn finite<F>(f: F, a: &Float, b: &Float, prec: Prec) -> Result<QuadResult>
where
    F: Fn(&Float) -> Float,
{
    let bits = prec.bits() + 16;
    let mut mid = Float::with_val(bits, a);
    mid += b;
    mid /= 2u32;
    let mut rad = Float::with_val(bits, b);
    rad -= a;
    rad /= 2u32;
    let half_pi = Float::with_val(bits, rug::float::Constant::Pi) / 2u32;
    let lo = (&mid - &rad).complete(bits);
    let hi = (&mid + &rad).complete(bits);
    let g = move |u: &Float| -> Option<Float> {
        let (sinh_u, cosh_u) = u.clone().sinh_cosh(Float::new(bits));
        let mut arg = sinh_u;
        arg *= &half_pi;
        let mut sech2 = arg.clone().cosh();
        sech2.square_mut();
        sech2.recip_mut();
        let mut x = arg.tanh();
        x *= &rad;
        x += &mid;
        if x == lo || x == hi {
            // the abscissa has rounded onto an endpoint: this side is done
            return None;
        }
        let mut w = cosh_u;
        w *= &half_pi;
        w *= sech2;
        w *= &rad;
        let mut term = f(&x);
        term *= w;
        Some(term)
    };
    Levels {
        g,
        bits,
        tol: prec.tol(),
        sum: Float::new(bits),
        evaluations: 0,
        floor: Float::new(bits),
        reach: [Float::new(bits), Float::new(bits)],
    }
    .run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::Prec;
    use rug::ops::CompleteRound;

    fn check_semi<F>(f: F, want: f64, digits: u32)
    where
        F: Fn(&Float) -> Float,
    {
        let p = Prec::new(digits).unwrap();
        let r = semi_infinite(f, p).unwrap();
        let got = r.value.to_f64();
        assert!(
            (got - want).abs() <= 1e-13 * want.abs().max(1.0),
            "got {got}, want {want}"
        );
        assert!(r.abs_error_estimate.is_sign_positive());
    }

    #[test]
    fn exp_decay() {
        // integral of e^(-3t) = 1/3
        check_semi(|t| (t * -3i32).complete(t.prec()).exp(), 1.0 / 3.0, 40);
    }

    #[test]
    fn t_exp_decay() {
        // integral of t e^(-t) = 1
        check_semi(|t| (-t).complete(t.prec()).exp() * t, 1.0, 40);
    }

    #[test]
    fn log_singular_endpoint() {
        // integral of -ln(t) e^(-t) = Euler's gamma
        check_semi(
            |t| -(t.clone().ln() * (-t).complete(t.prec()).exp()),
            0.577_215_664_901_532_9,
            40,
        );
    }

    #[test]
    fn digits_scale() {
        // 45-digit check against the closed form 1/3
        let p = Prec::new(45).unwrap();
        let r = semi_infinite(|t| (t * -3i32).complete(t.prec()).exp(), p).unwrap();
        let third = Float::with_val(p.bits(), 1u32) / 3u32;
        let err = (r.value - third).abs();
        assert!(err < p.tol());
    }

    #[test]
    fn finite_polynomial() {
        // integral of (1+x)^2 over (-1, 1) = 8/3
        let p = Prec::new(40).unwrap();
        let one = Float::with_val(p.bits(), 1u32);
        let r = finite(
            |x| (x + 1u32).complete(x.prec()).square(),
            &(-one.clone()),
            &one,
            p,
        )
        .unwrap();
        assert!((r.value.to_f64() - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn finite_log_endpoint() {
        // integral of ln(x) over (0, 1) = -1
        let p = Prec::new(30).unwrap();
        let zero = Float::new(p.bits());
        let one = Float::with_val(p.bits(), 1u32);
        let r = finite(|x| x.clone().ln(), &zero, &one, p).unwrap();
        assert!((r.value.to_f64() + 1.0).abs() < 1e-13);
    }

    #[test]
    fn reports_evaluation_count() {
        let p = Prec::new(20).unwrap();
        let r = semi_infinite(|t| (-t).complete(t.prec()).exp(), p).unwrap();
        assert!(r.evaluations > 50);
    }
}
