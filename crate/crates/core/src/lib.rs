//! Short hybrid exponential sums over plane curves mod p.
//!
//! The crate computes S_H(x;C) = sum over curve points P in a sliding window
//! of chi(g(P)) psi(f(P)), together with everything needed to test its
//! limiting behaviour at desk scale: empirical and predicted moments, the
//! exact auxiliary-curve splitting of S(j1,j2), a Weil-count irreducibility
//! probe, a unit-circle Monte Carlo model, and empirical-CDF comparisons
//! against the Gaussian limit laws.
//!
//! Modules:
//! - [`ff_char`]: prime fields, discrete logs, multiplicative/additive characters
//! - [`curve_geom`]: bivariate polynomials, rational maps, curve columns
//! - [`window_sums`]: the sliding-window kernel and projections
//! - [`moments`]: empirical moments and predicted main terms
//! - [`aux_curves`]: auxiliary systems C_h / C°_h, the splitting identity,
//!   irreducibility and degeneracy probes
//! - [`model_mc`]: the unit-circle sum model Z_H and its Monte Carlo checks
//! - [`dist_tests`]: ECDFs, Gaussian CDFs, KS distances, rectangle laws

pub mod aux_curves;
pub mod combin;
pub mod curve_geom;
pub mod error;
pub mod ff_char;
pub mod model_mc;
pub mod moments;
pub mod univar;
pub mod window_sums;

pub use error::{Error, Result};
pub use num_complex::Complex64;
