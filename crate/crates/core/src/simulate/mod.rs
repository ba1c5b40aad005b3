//! Synthetic regression datasets and a replication harness.

mod export;
mod generate;
mod replicate;
mod scenario;

pub use export::{read_dataset, write_dataset, DatasetMetadata};
pub use generate::{
    ar1_quadratic_form, gen_coefficients, gen_design, gen_response, generate_dataset, generate_test_set,
    population_quadratic_form, SimDataset, TestSet,
};
pub use replicate::{replicate_curve, run_replications, MethodSpec, ReplicationConfig};
pub use scenario::{CoefficientScheme, DesignKind, SimScenario};
