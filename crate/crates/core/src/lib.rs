//! Cooperative analysis of capped and taxed emission permits shared among
//! firms with a common Leontief technology.
//!
//! The cap is rationed with a bankruptcy rule over whatever coalition
//! structure forms, which yields a game in partition function form. From it
//! the crate derives the optimistic and pessimistic characteristic games and
//! the permit (resource-allocation) games, decides core nonemptiness exactly,
//! builds dual-based core allocations, and checks whether truthful demand
//! reporting is a dominant strategy under a rule.
//!
//! All arithmetic is exact (`num_rational::BigRational`).

pub mod bankruptcy;
pub mod error;
pub mod game;
pub mod lp;
pub mod mechanism;
pub mod partition;
pub mod production;
pub mod rational;
pub mod stability;

pub use bankruptcy::{apply_rule, bankruptcy_game, BankruptcyProblem, Rule};
pub use error::{Error, Result};
pub use game::{CharacteristicGame, Coalition};
pub use lp::{solve, LinearProgram, LpSolution, LpStatus};
pub use partition::{build_game, enumerate_partitions, Partition, PartitionFunctionGame};
pub use production::LppSituation;
pub use rational::Rational;
