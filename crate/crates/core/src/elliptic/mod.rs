//! Elliptic model problems and the regularity checks around them.

pub mod dst;
pub mod greens;
pub mod ops;
pub mod poisson;
pub mod stokes;
pub mod study;

pub use greens::{greens_disk, greens_disk_gradient};
pub use ops::{
    c01_norm, c2_norm, curl, divergence, gradient_sup, lipschitz_seminorm, mac_c11_norm,
    max_normal_trace, rot, second_derivative_sup, velocity_from_vorticity,
    velocity_from_vorticity_with,
};
pub use poisson::{neg_laplace5, poisson_residual, poisson_solve, PoissonSolver};
pub use stokes::{stokes_solve, StokesSolution, StokesSolver};
pub use study::{
    linear_fit, regularity_ratio_study, relative_spread, second_derivative_series,
    EstimateCheck, RatioKind,
};
