//! High-precision evaluation of the exchange-energy splitting between the
//! lowest gerade and ungerade states of an electron shared by two protons,
//! in the regime where the nuclei are far apart.
//!
//! The splitting J(R) = (E_g - E_u)/2 behaves like (2/e) R e^(-R) times an
//! inverse-power series in R whose leading coefficient j0 equals -1. This
//! crate evaluates three different truncated approximations to j0 at finite
//! polarization order K, together with closed-form laws for how fast each
//! one approaches -1:
//!
//! * a surface-integral form, error shrinking like a^K/(K+1)! with
//!   a = ln2 - 1/2,
//! * a perturbative (energy-functional) form, error shrinking like 3^(-K),
//! * a variational form, error shrinking like a^(2K)/(K! (K+1)! sqrt(K)).
//!
//! Everything is built on arbitrary-precision arithmetic ([`mp`]), a
//! double-exponential quadrature ([`quad`]), exact rational coefficient
//! tables ([`coeffs`]) and a family of two-index integrals ([`integrals`]).
//! An independent two-center eigensolver ([`twocenter`]) provides ground
//! truth for the asymptotic law at finite R, and [`cli`] exposes every
//! computation as a reproducible command.

pub mod cli;
pub mod coeffs;
pub mod energy;
pub mod error;
pub mod integrals;
pub mod mp;
pub mod output;
pub mod quad;
pub mod twocenter;

pub use error::{Error, Result};

// Snippets in the guide run as doc-tests so the book cannot drift from
// the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/precision.md")]
    mod precision {}
    #[doc = include_str!("../../../book/src/coefficients.md")]
    mod coefficients {}
    #[doc = include_str!("../../../book/src/integrals.md")]
    mod integrals {}
    #[doc = include_str!("../../../book/src/series.md")]
    mod series {}
    #[doc = include_str!("../../../book/src/reference-solver.md")]
    mod reference_solver {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
