//! Interpolation, geometry and structured singular values for the extended
//! symmetrized polydisc `G̃_n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: exact 2×2 complex algebra, the matricial Möbius map, `K_Z(ρ)`.
//! * [`geometry`]: points of `G̃_n`, the maps `Φ_j`, `π_n`, `π̂_n`, `J_n`.
//! * [`schwarz`]: the two-point Schwarz data `(w_j, X_j, R_j, θ_j, ϑ_j)` and
//!   the Schur parameters of the interpolant.
//! * [`poly`]: polynomial roots and the balanced factorization `h = f g`.
//! * [`interpolation`]: building, evaluating, verifying and characterizing
//!   analytic discs `ψ: D → G̃_n` with `ψ(0) = 0`, `ψ(λ₀) = y⁰`.
//! * [`mu`]: the diagonal structured singular value and its realization.
//! * [`distance`]: Carathéodory and Lempert distances from the origin.
//! * [`oracles`]: brute-force baselines for tests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod distance;
pub mod error;
pub mod geometry;
pub mod interpolation;
pub mod json;
pub mod linalg;
pub mod mu;
pub mod oracles;
pub mod poly;
pub mod schwarz;

pub use num_complex::Complex64;

pub use distance::{dist_origin, hyperbolic_distance, DistanceReport};
pub use error::{Error, Result};
pub use geometry::{
    beta_coeffs, binom, in_gamma_tilde, in_gtilde, in_jn, jn_embed, phi, phi_supnorm, pi_hat,
    pi_map, MembershipReport, PointGn,
};
pub use interpolation::{
    build_interpolant_g2, build_interpolant_jn, characterize, eval_interpolant, verify_interpolant,
    Interpolant, InterpolantFactor, MatPoly, RationalCurve, VerifyReport,
};
pub use linalg::{hermitian_min_eig, k_matrix, mobius, op_norm, uv_vectors, Mat2, Vec2};
pub use mu::{lift_to_mu_ball, mu_diag, mu_membership_check, mu_realization, MuResult};
pub use poly::{balanced_factorize, poly_roots, BalancedFactors, PolyC};
pub use schwarz::{SchwarzData, SchwarzInstance};
