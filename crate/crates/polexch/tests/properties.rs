//! Randomized invariants: the exact coefficient recurrence against its
//! generating-function route, formatting digit counts, partial-sum
//! telescoping and envelope monotonicity.

use polexch::coeffs::{fsum, ftilde, gf_coeff, tcoeffs, RationalCoeffTable};
use polexch::energy::j_of_r;
use polexch::mp::{format_sci, Prec, Real};
use proptest::prelude::*;
use rug::Float;
use std::sync::LazyLock;

static TABLE: LazyLock<RationalCoeffTable> = LazyLock::new(|| tcoeffs(8, 40));

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn recurrence_matches_generating_function(k in 0u32..=8, n in 0u32..=40) {
        prop_assert_eq!(TABLE.get(k, n), &gf_coeff(k, n));
    }

    #[test]
    fn formatted_mantissa_has_exact_digit_count(
        m in 0.1f64..10.0,
        e in -18i32..18,
        digits in 10u32..=30,
        neg in any::<bool>(),
    ) {
        let prec = Prec::new(digits).unwrap();
        let bits = prec.bits();
        let mut x = prec.float(m);
        let mut scale = Float::with_val(bits, e);
        scale.exp10_mut();
        x *= scale;
        if neg {
            x = -x;
        }
        let s = format_sci(&x, digits);
        let mantissa_digits = s
            .chars()
            .take_while(|c| *c != 'e')
            .filter(|c| c.is_ascii_digit())
            .count();
        prop_assert_eq!(mantissa_digits, digits as usize, "rendered {}", s);
        let back = Float::with_val(bits + 64, Float::parse(&s).unwrap());
        let mut rel = back;
        rel -= &x;
        rel /= &x;
        rel.abs_mut();
        prop_assert!(
            rel.to_f64() <= 10f64.powi(1 - digits as i32),
            "round trip {} vs input", s
        );
    }

    #[test]
    fn partial_sums_telescope(k in 1u32..6, rho in 0.0f64..0.95) {
        let digits = 25;
        let prec = Prec::new(digits).unwrap();
        let r = Real::new(prec.float(rho), prec);
        let lo = fsum(k - 1, &r, digits).unwrap();
        let hi = fsum(k, &r, digits).unwrap();
        let single = ftilde(k, &r, digits).unwrap();
        let mut gap = hi.into_value();
        gap -= lo.value();
        gap -= single.value();
        gap.abs_mut();
        prop_assert!(gap.to_f64() <= 1e-22);
    }

    #[test]
    fn exchange_envelope_decreases_with_separation(
        r1 in 1.5f64..20.0,
        step in 0.25f64..10.0,
    ) {
        let digits = 20;
        let prec = Prec::new(digits).unwrap();
        let mk = |v: f64| Real::new(prec.float(v), prec);
        let j0 = mk(-1.0);
        let j1 = mk(-0.5);
        let near = j_of_r(&mk(r1), &j0, &j1, digits).unwrap();
        let far = j_of_r(&mk(r1 + step), &j0, &j1, digits).unwrap();
        let near_mag = near.value().clone().abs();
        let far_mag = far.value().clone().abs();
        prop_assert!(far_mag < near_mag);
    }
}
