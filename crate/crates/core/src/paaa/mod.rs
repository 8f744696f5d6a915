//! Bivariate barycentric rational approximation in `(z, p)`: models, the
//! greedy p-AAA fit, vector-valued lifts, and the rank consistency check
//! across parameter samples.

mod fit;
mod model;
mod rank;

pub use fit::{paaa_fit, FitOptions, FitReport};
pub use model::{lift_vector, BarycentricModel2D, VectorBarycentricModel};
pub use rank::{consistency_rank_check, tangential_data_at};
