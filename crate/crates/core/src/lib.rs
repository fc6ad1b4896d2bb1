//! Interaction energies of power-law kernels W_{α,β}(x) = |x|^α/α − |x|^β/β:
//! radial potentials of spherical shells, steady states, gradient flows,
//! optimal transport distances and convexity of the energy along signed
//! perturbations.

pub mod acceptance;
pub mod convexity;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod measure;
pub mod potential;
pub mod quadrature;
pub mod radial;
pub mod roots;
pub mod special;
pub mod stability;
pub mod sum;
pub mod transport;

pub use equilibria::{RingConfig, SimplexConfig};
pub use error::{Error, Result};
pub use measure::{DiscreteMeasure, Point, SignedMeasure};
pub use potential::Kernel;
pub use radial::{RadialMixture, RadialProfile};
pub use special::KernelParams;
