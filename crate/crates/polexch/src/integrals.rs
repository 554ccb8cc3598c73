//! The integral layer: the kernel gamma(eta), the two-index integrals
//! L(k1, k2), the exact closed form for L(k) = L(k, 0), the collapse
//! constant M(K) = 8 K!/e, the interior-maximum (Laplace) approximation of
//! L(K+p, K), and the Schwartz bound chain.
//!
//! The defining integral
//!
//! ```text
//! L(k1,k2) = integral_{-1}^{1} (1+eta)^2 gamma(eta)^k1 gamma(-eta)^k2 deta
//! ```
//!
//! is evaluated by tanh-sinh quadrature directly on (-1, 1). Both index
//! powers only sharpen the integrable log-power behavior at the endpoints
//! (gamma blows up logarithmically where its argument approaches -1 and
//! vanishes to second order where it approaches +1), which the
//! double-exponential transformation absorbs at any order. The kernel is
//! computed in a two-branch form that stays cancellation-free all the way
//! into both endpoints.
//!
//! An independent cross-check route runs in the substituted variable
//! t = ln2 - ln(1+eta), where the same integral becomes
//!
//! ```text
//! integral_0^inf 8 e^(-3t) g1(t)^k1 g2(t)^k2 dt,
//! g1 = e^(-t) + t - 1,   g2 = -e^(-t) - ln(1 - e^(-t)),
//! ```
//!
//! and its reflection partner (weight (1-eta)^2, powers exchanged) becomes
//! a weight 8 e^(-t) (1 - e^(-t))^2; comparing the two catches transform
//! and kernel mistakes at once. Note the weight (1+eta)^2 is not even in
//! eta, so L(k1,k2) is *not* symmetric in its indices.

use rug::ops::{CompleteRound, Pow};
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::mp::{consts, factorial, Prec, Real};
use crate::quad;

/// How an L value was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LMethod {
    Quadrature,
    ClosedRational,
}

impl LMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            LMethod::Quadrature => "quadrature",
            LMethod::ClosedRational => "closed-rational",
        }
    }
}

/// One evaluated L(k1, k2) with its provenance and certified digits.
#[derive(Clone, Debug)]
pub struct LIntegral {
    pub k1: u32,
    pub k2: u32,
    pub value: Real,
    pub method: LMethod,
    pub digits: u32,
}

/// gamma(eta) = (eta-1)/2 + ln2 - ln(eta+1) on (-1, 1]; nonnegative, zero
/// only at eta = 1.
pub fn gamma_eta(eta: &Real) -> Result<Real> {
    let prec = Prec::new(eta.digits())?;
    let v = eta.value();
    if !(*v > -1 && *v <= 1) {
        return Err(Error::OutOfDomain {
            name: "eta",
            value: eta.to_sci(),
            domain: "(-1, 1]",
        });
    }
    Ok(Real::new(gamma_f(v), prec))
}

/// The same kernel on a raw Float, branch-split so each endpoint is
/// approached through an exactly representable offset: near +1 through
/// d = (x-1)/2 with ln(1+d), near -1 through u = (x+1)/2 with ln(u).
fn gamma_f(x: &Float) -> Float {
    let bits = x.prec();
    if *x >= 0 {
        let mut d = (x - 1u32).complete(bits);
        d /= 2u32;
        let l = d.clone().ln_1p();
        d - l
    } else {
        let mut u = (x + 1u32).complete(bits);
        u /= 2u32;
        let l = u.clone().ln();
        u - 1u32 - l
    }
}

/// g1(t) = e^(-t) + t - 1 at full working accuracy near t = 0.
pub fn gamma1_t(t: &Float) -> Float {
    let mut g = (-t).complete(t.prec()).exp_m1();
    g += t;
    g
}

/// g2(t) = -e^(-t) - ln(1 - e^(-t)); the ln argument is formed as
/// -expm1(-t) so neither end of the range loses accuracy.
pub fn gamma2_t(t: &Float) -> Float {
    let bits = t.prec();
    let em = (-t).complete(bits).exp_m1(); // e^(-t) - 1
    let ln_arg = (-em.clone()).ln();
    -(em + 1u32) - ln_arg
}

/// L(k1, k2) by tanh-sinh quadrature on (-1, 1).
pub fn l_quad(k1: u32, k2: u32, digits: u32) -> Result<LIntegral> {
    let prec = Prec::new(digits)?;
    let lo = Float::with_val(64, -1);
    let hi = Float::with_val(64, 1);
    let r = quad::finite(
        move |eta| {
            let bits = eta.prec();
            let mut f = (eta + 1u32).complete(bits).square();
            if k1 > 0 {
                f *= gamma_f(eta).pow(k1);
            }
            if k2 > 0 {
                f *= gamma_f(&(-eta).complete(bits)).pow(k2);
            }
            f
        },
        &lo,
        &hi,
        prec,
    )?;
    Ok(LIntegral {
        k1,
        k2,
        value: Real::new(r.value, prec),
        method: LMethod::Quadrature,
        digits,
    })
}

/// Truncated exponential series e_n(x) = sum_{m=0}^n x^m/m!, exact.
pub fn expsum(n: u32, x: &Rational) -> Rational {
    let mut term = Rational::from(1);
    let mut sum = Rational::from(1);
    for m in 1..=n {
        term *= x;
        term /= Rational::from(m);
        sum += &term;
    }
    sum
}

/// Exact rational L(k) = L(k, 0):
/// sum_{l=0}^{k} 8 k! e_{k-l}(-l-3) / (l! (l+3)^(k-l+1)).
pub fn l_closed(k: u32) -> Rational {
    let kfac = factorial(k);
    let mut sum = Rational::new();
    for l in 0..=k {
        let x = Rational::from(-(l as i64) - 3);
        let mut term = Rational::from(8) * Rational::from(&kfac);
        term *= expsum(k - l, &x);
        term /= Rational::from(factorial(l));
        let base = Integer::from(l + 3);
        term /= Rational::from(base.pow(k - l + 1));
        sum += term;
    }
    sum
}

/// L(k, 0) wrapped as an LIntegral at the requested digits.
pub fn l_closed_integral(k: u32, digits: u32) -> Result<LIntegral> {
    let prec = Prec::new(digits)?;
    let v = prec.float(l_closed(k));
    Ok(LIntegral {
        k1: k,
        k2: 0,
        value: Real::new(v, prec),
        method: LMethod::ClosedRational,
        digits,
    })
}

/// M(K) = 8 K!/e, the collapsed value of sum_k L(k, K)/k!.
pub fn m_of_k(big_k: u32, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    let mut v = prec.float(factorial(big_k));
    v *= 8u32;
    v /= &consts(prec.bits()).e;
    Ok(Real::new(v, prec))
}

/// Interior-maximum approximation of L(K+p, K).
#[derive(Clone, Debug)]
pub struct LaplaceApprox {
    pub big_k: u32,
    pub p: u32,
    pub leading: Real,
    pub lambda2: Real,
}

/// lambda2 = (4a - 1)/(4a^2), the curvature of ln(gamma(eta) gamma(-eta))
/// at its eta = 0 maximum; always negative.
pub fn lambda2(prec: Prec) -> Float {
    let a = &consts(prec.bits()).a;
    let mut num = a.clone();
    num *= 4u32;
    num -= 1u32;
    let mut den = a.clone().square();
    den *= 4u32;
    num / den
}

/// Leading Laplace value sqrt(pi / (K |lambda2|)) * a^(2K+p).
pub fn laplace_l(big_k: u32, p: u32, digits: u32) -> Result<LaplaceApprox> {
    let prec = Prec::new(digits)?;
    if big_k == 0 {
        return Err(Error::OutOfDomain {
            name: "K",
            value: "0".into(),
            domain: "K >= 1",
        });
    }
    let bits = prec.bits();
    let c = consts(bits);
    let l2 = lambda2(prec);
    let mut v = l2.clone().abs();
    v *= big_k;
    v.recip_mut();
    v *= &c.pi;
    v.sqrt_mut();
    v *= c.a.clone().pow(2 * big_k + p);
    Ok(LaplaceApprox {
        big_k,
        p,
        leading: Real::new(v, prec),
        lambda2: Real::new(l2, prec),
    })
}

/// P_m = integral_0^inf 32 e^(-5t) g1(t)^m dt
/// (the (1+eta)^4 gamma^m moment in the t variable).
pub fn p_m(m: u32, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    let r = quad::semi_infinite(
        move |t| {
            let bits = t.prec();
            let mut f = (t * -5i32).complete(bits).exp();
            f *= 32u32;
            if m > 0 {
                f *= gamma1_t(t).pow(m);
            }
            f
        },
        prec,
    )?;
    Ok(Real::new(r.value, prec))
}

/// Q_m = integral_0^inf 2 e^(-t) (g1 g2)^m dt
/// (the [gamma(eta) gamma(-eta)]^m moment in the t variable).
pub fn q_m(m: u32, digits: u32) -> Result<Real> {
    let prec = Prec::new(digits)?;
    let r = quad::semi_infinite(
        move |t| {
            let bits = t.prec();
            let mut f = (-t).complete(bits).exp();
            f *= 2u32;
            if m > 0 {
                let mut g = gamma1_t(t);
                g *= gamma2_t(t);
                f *= g.pow(m);
            }
            f
        },
        prec,
    )?;
    Ok(Real::new(r.value, prec))
}

/// The Schwartz-inequality chain around L(K+p, K).
#[derive(Clone, Debug)]
pub struct BoundChain {
    pub big_k: u32,
    pub p: u32,
    pub q_2k: Real,
    pub p_2p: Real,
    /// sqrt(P_{2p} Q_{2K}) >= L(K+p, K)
    pub schwartz: Real,
    /// (32/5) (2p)!/5^(2p) >= P_{2p}
    pub p_bound: Real,
    /// T^K_p = 4 [ (2/5)(2p)! Q_{2K} ]^(1/2) 5^(-p) / (K+p)!
    pub t_tilde: Real,
}

pub fn bound_chain(big_k: u32, p: u32, digits: u32) -> Result<BoundChain> {
    let prec = Prec::new(digits)?;
    if big_k == 0 || p == 0 {
        return Err(Error::OutOfDomain {
            name: "(K, p)",
            value: format!("({big_k}, {p})"),
            domain: "K >= 1 and p >= 1",
        });
    }
    let bits = prec.bits();
    let q2k = q_m(2 * big_k, digits)?;
    let p2p = p_m(2 * p, digits)?;
    let mut schwartz = q2k.value().clone();
    schwartz *= p2p.value();
    schwartz.sqrt_mut();
    let mut p_bound = prec.float(factorial(2 * p));
    p_bound *= Rational::from((32u32, 5u32));
    p_bound /= Float::with_val(bits, 5u32).pow(2 * p);
    let mut t_tilde = q2k.value().clone();
    t_tilde *= prec.float(factorial(2 * p));
    t_tilde *= Rational::from((2u32, 5u32));
    t_tilde.sqrt_mut();
    t_tilde *= 4u32;
    t_tilde /= Float::with_val(bits, 5u32).pow(p);
    t_tilde /= prec.float(factorial(big_k + p));
    Ok(BoundChain {
        big_k,
        p,
        q_2k: q2k,
        p_2p: p2p,
        schwartz: Real::new(schwartz, prec),
        p_bound: Real::new(p_bound, prec),
        t_tilde: Real::new(t_tilde, prec),
    })
}

/// The eta -> -eta image of l_quad: weight (1-eta)^2 with the two gamma
/// factors exchanged. Substituting eta = -u in the defining integral shows
/// this equals L(k1, k2) itself, even though L is not index-symmetric.
/// In the t variable the weight becomes 8 e^(-t) (1 - e^(-t))^2.
pub fn l_quad_reflected(k1: u32, k2: u32, digits: u32) -> Result<LIntegral> {
    let prec = Prec::new(digits)?;
    let r = quad::semi_infinite(
        move |t| {
            let bits = t.prec();
            let em = (-t).complete(bits).exp();
            let mut w = (1u32 - &em).complete(bits).square();
            w *= 8u32;
            w *= em;
            if k1 > 0 {
                w *= gamma2_t(t).pow(k1);
            }
            if k2 > 0 {
                w *= gamma1_t(t).pow(k2);
            }
            w
        },
        prec,
    )?;
    Ok(LIntegral {
        k1,
        k2,
        value: Real::new(r.value, prec),
        method: LMethod::Quadrature,
        digits,
    })
}
