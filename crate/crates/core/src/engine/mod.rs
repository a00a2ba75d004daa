//! Bound engines for the joint spectral radius and subradius.

pub mod bounds;
pub mod conic;
pub mod kron_lift;
pub mod perturb;
pub mod trace_seq;

pub(crate) use bounds::enumerate_layers;
