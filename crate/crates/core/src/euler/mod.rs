//! 2-D incompressible Euler in vorticity form: semi-Lagrangian transport
//! along traced characteristics, windowed Picard iteration to the fixed
//! point, and the transport/growth diagnostics.

pub mod advect;
pub mod diagnostics;
pub mod picard;
pub mod transport;

pub use advect::{advect_trace, flow_map, FlowMap, TraceResult, VelocitySeries};
pub use diagnostics::{
    diagnostics, fit_c1, holder_pair_fraction, DiagnosticsOptions, EulerDiagnostics,
    TimeSeminorms, GRAD_VORT_RATIO_CEILING,
};
pub use picard::{euler_solve, picard_step, EulerConfig, EulerState, EulerTrajectory, WindowLog};
pub use transport::{transport_vorticity, ForcingSeries};
