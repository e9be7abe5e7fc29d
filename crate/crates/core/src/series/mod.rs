//! Exact series arithmetic in `q` and `λ`.

pub mod bi;
pub mod lambda;
pub mod numbers;
pub mod qseries;
pub mod rational;

pub use bi::BiSeries;
pub use lambda::LambdaSeries;
pub use numbers::{bernoulli, divisor_sigma, eisenstein, euler_product, sinh_kernel, vacuum_partition_function};
pub use qseries::{series_invert, QSeries};
pub use rational::Rational;
