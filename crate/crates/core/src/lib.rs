//! Born-rule probabilities for circuits of passive (particle number-conserving)
//! matchgates and controlled-phase gates.
//!
//! Probabilities are computed for chosen output bitstrings only. Sampled
//! estimates cost time linear in the circuit extent and polynomial in the
//! number of modes; exact evaluation is exponential only in the number of
//! controlled-phase gates.
//!
//! ```
//! use fermsim::{parse_circuit, BasisState, Simulator};
//!
//! let circuit = parse_circuit(r#"{
//!     "num_qubits": 2, "initial_state": "10",
//!     "gates": [{"type": "cphase", "modes": [0, 1], "theta": 1.0}]
//! }"#).unwrap();
//! let sim = Simulator::new(&circuit);
//! let b = BasisState::parse("10").unwrap();
//! assert!((sim.exact(&b).unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod bits;
pub mod circuit;
pub mod engine;
mod error;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod lucj;
pub mod oracle;
pub mod testbed;

pub use circuit::{
    epsilon_from_count, extent, parse_circuit, serialize_circuit, trajectory_count, BasisState,
    Circuit, ExtentReport, Gate,
};
pub use engine::{
    amplitude, batch_estimate, estimate, exact, mode_matrix, raw_estimate, sample_trajectory,
    EngineConfig, EstimateResult, Mode, SamplerTables, Simulator, Trajectory,
};
pub use error::{Error, Result};
pub use linalg::ModeMatrix;
pub use lucj::{build_cache, detect_lucj, LucjCache, LucjStructure};
pub use oracle::{oracle_probability, oracle_support, DenseState};
