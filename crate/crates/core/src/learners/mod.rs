//! Online learners: regret matching, RM+, SAOL and swap regret with
//! contextual and history-expert wrappers, tabular Q-learning, and
//! best-response exploiters.

mod agent;
mod contextual;
pub mod exploit;
pub mod experts;
mod learner;
pub mod qlearn;
mod regret;
mod saol;
mod swap;

pub use agent::{Agent, AgentAlgorithm, AgentConfig, AgentError, ContextMode, FixedAgent, Lifetime, QAgent, RegretAgent};
pub use contextual::ContextTable;
pub use exploit::{
    omniscient_exploit_step, omniscient_exploitability, train_exploiter, ExploitError, ExploiterOptions,
    ExploiterReport, ExploiterRun,
};
pub use learner::{Learner, RegretAlgorithm};
pub use qlearn::{EpsilonSchedule, QTable};
pub use regret::{dot, rm_policy, PayoffVector, RegretMatcher, RegretVariant};
pub use saol::{intervals_containing, Saol, SaolInterval};
pub use swap::{power_stationary, stationary_distribution, stationary_residual, SwapRegret};
