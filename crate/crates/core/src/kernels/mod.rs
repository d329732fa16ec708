//! Strategy components for the annealing engines.
//!
//! Each engine is assembled from a [`Neighborhood`] (where to look next), an
//! [`AcceptCriterion`] (whether to go there) and a cooling schedule. The BSA,
//! FSA and GSA variants differ only in which kernels are plugged in.

mod accept;
mod moves;
mod neighbor;
mod visit;

pub use accept::{
    fermi_accept, fermi_probability, gsa_accept, gsa_probability, metropolis_accept,
    metropolis_probability, AcceptCriterion, AcceptDecision, AccepterKind, Fermi, Metropolis,
    TsallisAccept, QA_LIMIT_EPS,
};
pub use moves::{boltzmann_move, BoltzmannMove, MoveClass};
pub use neighbor::{
    boltzmann_neighbor, DisplacementNeighbor, Neighborhood, NormalProjected, VisitorKind,
    MAX_RESAMPLES,
};
pub use visit::{cauchy_visit, gsa_visit, CauchyVisitor, GsaParams, GsaVisitor, Visitor};
