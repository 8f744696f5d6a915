//! Target domains, boundary quadrature, and tangential sampling of the pole
//! part `H(s, p)` of `T(s, p)^{-1}` through resolvent quadrature.

mod domain;
mod probe;
mod quadrature;
mod sampling;

pub use domain::ContourDomain;
pub use probe::{probe_samples, ProbedSampleSet, Provenance};
pub use quadrature::{build_trapezoid_rule, QuadratureRule};
pub use sampling::{default_sampling, sampling_on_contour, SamplingConfig, DEFAULT_INFLATION};
