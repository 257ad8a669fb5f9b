//! Explicit-state verification toolkit for CTL* extended with cycle
//! quantifiers over finite Kripke structures: parsing, model checking with
//! witness extraction, bounded satisfiability search, tree-like unwinding
//! machinery, and a parity-game front end.

pub mod buchi;
pub mod checker;
pub mod corpus;
pub mod formula;
pub mod kripke;
pub mod satsearch;
pub mod unwind;

pub use buchi::{Lasso, Nba, ProductGraph};
pub use checker::{
    brute_force_eval, check_exists_cycle, find_simple_lasso_witness, lasso_satisfies, model_check,
    model_check_with_witness, CheckError, LabelingTable, ModelChecker, Oracle, Verdict,
};
pub use formula::{parse, Formula, ParseError};
pub use kripke::{
    build_nonprompt_formula, build_parity_formula, GameError, KripkeStructure, ModelError,
    ParityGame, World,
};
pub use satsearch::{sat_search, SatError, SearchBudget};
pub use unwind::{
    check_projection_cycle_bisim, duplicate_world, find_standard_bisimulation, tree_representation,
    unwind_bounded, CycleBisimReport, Flag, TreeRepresentation, TreeValidationReport,
    TreeWithBackEdges, UnwindError,
};
