//! Numerical rank-`r` fitting and the constructive two-point split.

mod fit;
mod split;

pub use fit::{certify, fit_rank, local_model, local_model_dim, FitOptions, LocalModel};
pub use split::{two_point_split_complex, two_point_split_real, SplitReport, DEFAULT_ANCHORS};
