//! Random CNF□m formulas for the modal logic K(m): generation, parameter
//! inference, exact emission probabilities, a satisfiability decider and a
//! campaign harness.

pub mod campaign;
pub mod decider;
pub mod error;
pub mod formula;
pub mod generator;
pub mod inference;
pub mod oracle;
pub mod params;
pub mod rng;
pub mod spec;
pub mod syntax;

pub use error::{FormulaError, GenError, OracleError, ParamError, SpecError};
pub use formula::{Atom, Clause, Formula, Literal};
pub use generator::{generate_formula, Generator};
pub use inference::{infer_gen_params, infer_params, Widening};
pub use params::{Diagnostic, GenParams, Severity};
pub use spec::{LengthSpec, Method, PropRateSpec};
pub use syntax::{parse_formula, print_formula};
pub use campaign::{run_campaign, CampaignConfig, PointStats};
pub use decider::{k_satisfiable, DecisionOutcome, Status};
pub use error::{CampaignError, DecideError};
pub use oracle::{enumerate_clause_distribution, formula_probability};
