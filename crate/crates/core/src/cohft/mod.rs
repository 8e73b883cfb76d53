//! Correlators of `BH` and of the twisted stabilizer theories, conjugacy
//! counting over classes of `Q`, and the generalized orthogonality relation.

mod checks;
mod counting;
mod frobenius;
mod omega;

pub use checks::{
    cutting_axiom_check, cutting_axiom_check_exact, gw_decomposition_check, gw_decomposition_rows, gw_summary,
    multisets, oracle_agreement, potential_coefficients, GwRow, GwSetup, GwTolerance, Insertion, Method,
    OmegaEvaluator, OracleRow, PotentialRow,
};
pub use counting::{
    count_conjugacy_direct, count_conjugacy_formula, counting_checks, counting_table, orthogonality_check,
    orthogonality_expected, orthogonality_sum, CountRow, Specialization,
};
pub use frobenius::{c_regular_classes, is_regular, ClassLabel, FrobeniusData, RegularClass, RegularClassReport};
pub use omega::{omega_character_formula, Exact, OmegaCounter, DEFAULT_BRUTE_CAP};
