//! First-order Edgeworth expansions for integer-valued additive functionals
//! of finite Markov chains, with exact big-integer oracles, applied to
//! generalized Litt coin-flip games.
//!
//! * [`markov`]: stationary law, group inverse, passage times and visits.
//! * [`cumulants`] and [`perturbation`]: asymptotic `mu`, `sigma^2`, `kappa_3`.
//! * [`aperiodicity`]: the value-length lattice and its certificates.
//! * [`edgeworth`]: the expansion itself.
//! * [`litt`]: word games and their closed forms.
//! * [`oracle`]: exact score distributions and simulation.

pub mod aperiodicity;
pub mod chain;
pub mod cumulants;
pub mod edgeworth;
pub mod error;
pub mod fixtures;
pub mod limits;
pub mod linalg;
pub mod litt;
pub mod markov;
pub mod oracle;
pub mod perturbation;
pub mod rational;
pub mod report;

pub use chain::{ChainFile, ChainSpec, Score};
pub use cumulants::{cumulants, cumulants_edge_score, cumulants_state_score, CumulantTriple};
pub use error::{Error, Result};
pub use litt::{GameSpec, Word};
pub use rational::Rational;
