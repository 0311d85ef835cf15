//! Area-based pursuit-evasion with heterogeneous pursuer speeds.
//!
//! Each pursuer faster than the evader defines an Apollonius disc: the
//! points the evader reaches first. Their intersection is the evader's
//! safe-reachable set. Pursuers cooperate to shrink its area and the
//! evader tries to grow it; the area gradients with respect to every
//! agent position have a closed form in terms of boundary-arc centroids,
//! which gives the equilibrium headings directly.
//!
//! - [`geometry`]: vectors, agents and Apollonius discs
//! - [`safeset`]: boundary arcs and area of the safe-reachable set
//! - [`gradients`]: analytic area gradients
//! - [`control`]: equilibrium heading laws
//! - [`simulator`]: closed-loop integration and capture detection
//! - [`oracle`]: Monte Carlo, finite-difference and sampling checks
//! - [`scenario`], [`trajectory`], [`render`], [`cli`]: file formats and
//!   the `pursuit` command line

pub mod cli;
pub mod control;
pub mod error;
pub mod geometry;
pub mod gradients;
pub mod interval;
pub mod oracle;
pub mod render;
pub mod safeset;
pub mod scenario;
pub mod simulator;
pub mod trajectory;

pub use control::{HeadingCommand, Headings};
pub use error::{GeometryError, OracleError, ScenarioError, SimError};
pub use geometry::{AgentConfig, ApolloniusDisc, Vec2};
pub use gradients::AreaGradients;
pub use safeset::{BoundaryArc, SafeSetBoundary};
pub use scenario::ScenarioConfig;
pub use simulator::{GameState, SimulationResult, Termination};

/// Library version written into trajectory headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
