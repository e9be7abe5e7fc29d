//! Exact computation of stationary descendant Gromov-Witten invariants of the
//! elliptic curve by two independent routes.
//!
//! * [`fock`]: partition sums of fermionic zero-mode eigenvalues, with
//!   cumulant extraction of connected invariants.
//! * [`graph`]: Wick-contraction sums of vertex Lagrangians from [`jet`]
//!   against the `q`-expanded propagator.
//!
//! Both produce [`InvariantRecord`]s whose `q`-series must agree exactly.
//! [`modular`] recognizes those series as quasi-modular forms.

pub mod correlator;
pub mod error;
pub mod fock;
pub mod graph;
pub mod jet;
pub mod linalg;
pub mod modular;
pub mod series;

pub use correlator::{CorrelatorRequest, InvariantRecord, Pipeline};
pub use error::{Error, Result};
pub use jet::{DiffPoly, JetMonomial, NormalForm};
pub use modular::{AlmostHolomorphicRep, QuasiModularRep};
pub use series::{BiSeries, LambdaSeries, QSeries, Rational};
