//! Moduli of continuity, the Dini-type semi-norm families, witness fields,
//! and composition with self-maps of the domain.

pub mod compose;
pub mod modulus;
pub mod oracle;
pub mod seminorm;
pub mod witness;

pub use compose::{compose, GridMap};
pub use modulus::{
    default_radii, modulus_global, modulus_pointwise, modulus_sphere, ModulusKind, ModulusProfile,
};
pub use seminorm::{
    dini_integral, pairwise_seminorms, seminorm_bstar, seminorm_cstar, seminorm_dstar,
    seminorm_holder, seminorm_holderlog, seminorm_report, Cutoffs, PairwiseSeminorms, Quadrature,
    SeminormReport,
};
pub use witness::{
    cascade_bumps, make_cascade_witness, make_witness, Bump, CascadeParams, WitnessKind,
};
