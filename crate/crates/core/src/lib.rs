//! Lie-theoretic and dynamical invariants of Anosov subgroups of `SL(d, R)` and
//! `SL(d, C)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`rootdata`]: restricted roots, fundamental weights, `rho_Theta`, Killing form.
//! * [`jordan`]: Jordan projection and decomposition, proximality, class functions.
//! * [`flags`]: flags, gradings, transversality, nilradicals.
//! * [`densities`]: densities, multidensities, the flow space and its cocycles.
//! * [`geometry`]: Killing metric on transverse pairs, the 2-form of a period function.
//! * [`anosov`]: group specs, cyclic words, limit cones, admissibility, period spectra.
//! * [`zeta`]: truncated twisted Ruelle zeta functions.
//! * [`check`]: self-verification suites used by the command line tool.

pub mod anosov;
pub mod check;
pub mod densities;
pub mod flags;
pub mod geometry;
pub mod jordan;
pub mod linalg;
pub mod rootdata;
pub mod zeta;

mod par;

pub use linalg::{Field, CMat, C64};
pub use par::set_thread_limit;
pub use rootdata::{CartanVector, RootSystem, ThetaSet, WeightVector};

/// Version string embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
