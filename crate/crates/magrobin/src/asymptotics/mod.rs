//! Sweeps over `h`, two-term remainder fits, scaling bridges, the diamagnetic gap and
//! localization diagnostics.

mod bridge;
mod diamag;
mod fit;
mod localize;
mod sweep;

pub use bridge::{mu1_bridge, mu1_direct_disk, BridgeDerived, BridgeResult, RobinMagParams};
pub use diamag::{diamag_gap, DiamagCase, DiamagInputs, DiamagResult};
pub use fit::{fit_power, fit_two_term, two_term_prediction, PowerFit, TwoTermFit};
pub use localize::{interior_decay_rate, localization_profile, LocalizationProfile, AGMON_ALPHAS};
pub use sweep::{solve_with, sweep_lambda1, DomainSpec, SolverKind, SweepConfig, SweepResult, SweepRow};
