//! Desk-scale numerical laboratory for lattice-point counting in congruence
//! subgroups, optimal-lifting coverage of finite quotients, regular-tree
//! convolution geometry, and graph-spectral density profiles.
//!
//! The exact side (matrix groups, coset tables, lattice counts, tree
//! combinatorics) works in overflow-checked integers with big-integer
//! promotion. The analytic side (Cartan lengths, Harish-Chandra estimates,
//! spectra, density profiles) is generic over the floating-point scalar via
//! [`scalar::Real`]; the aliases below pin the `f64` defaults.
//!
//! ```
//! use latspec_core::counting::{count_bruteforce, count_divisor_fast};
//! use latspec_core::matgroups::{Ambient, SubgroupKind, SubgroupSpec};
//!
//! // gamma = I mod 2, entries bounded by 100: two independent counters agree
//! let spec = SubgroupSpec::new(Ambient::Sl2, SubgroupKind::Principal, 2)?;
//! let brute = count_bruteforce(&spec, 100, None)?.count;
//! assert_eq!(brute, count_divisor_fast(2, 100)?.count);
//!
//! // the tempered boundary of the 4-regular tree sits at 2 sqrt(3)
//! let lambda = latspec_core::trees::p_to_eigen(2.0, 3)?;
//! assert!((lambda - 2.0 * 3f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), latspec_core::Error>(())
//! ```

pub mod cartan;
pub mod counting;
pub mod error;
pub mod fit;
pub mod graphs;
pub mod lifting;
pub mod linalg;
pub mod matgroups;
pub mod scalar;
pub mod spectral;
pub mod trees;

pub use error::{Error, Result};

/// Default floating-point scalar for the analytic modules.
pub type Scalar = f64;

pub type CartanData = cartan::CartanData<Scalar>;
pub type IwasawaData = cartan::IwasawaData<Scalar>;
pub type XiEstimate = cartan::XiEstimate<Scalar>;
pub type GraphSpectrum = spectral::GraphSpectrum<Scalar>;
pub type NbSpectrum = spectral::NbSpectrum<Scalar>;
pub type DensityProfile = spectral::DensityProfile<Scalar>;
pub type RamanujanReport = spectral::RamanujanReport<Scalar>;
pub type DMat = linalg::DMat<Scalar>;
