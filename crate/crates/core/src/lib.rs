//! Crossing limit cycles of planar piecewise linear Hamiltonian systems.
//!
//! The plane is split by vertical switching lines into two zones (line `x = 0`)
//! or three zones (lines `x = -1` and `x = 1`). Each zone carries an affine
//! Hamiltonian field `(a x + b y + alpha, c x - a y + beta)` whose linear part has
//! an isolated singular point, a center or a saddle.
//!
//! A crossing periodic orbit meets the switching lines at corner points whose
//! ordinates satisfy one Hamiltonian-matching equation per arc. [`closure`]
//! reduces those equations exhaustively: a discontinuous three-zone system has
//! at most one ordered solution, every other configuration either has none or
//! carries a continuum of periodic orbits. [`cycle`] turns an admissible solution
//! into a certified limit cycle using closed-form flows from [`flow`], and
//! [`poincare`] re-derives it independently with a numerical return map.

pub mod cli;
pub mod closure;
pub mod cycle;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod io;
pub mod model;
pub mod numeric;
pub mod plot;
pub mod poincare;

pub use closure::{solve, solve_three_zone, solve_two_zone, ClosureBranch, ClosureOutcome};
pub use cycle::{find_limit_cycle, search_limit_cycle, CycleCertificate, CycleOutcome};
pub use error::{ClosureError, FlowError, InputError, ModelError, PlotError, PoincareError};
pub use model::{
    LinearHamiltonianField, PiecewiseSystem, Point, SingularKind, Singularity, SwitchingLine,
    ZoneId, ZoneLayout,
};
