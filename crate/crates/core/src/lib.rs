//! Semantic machinery for iterated one-variable substitutions in
//! intuitionistic propositional calculus: formula iteration, IPC/CPC decision
//! procedures with countermodel search, finite Kripke models with bounded
//! bisimulations, the dual substitution map and its periodicity analysis, the
//! modified Rieger-Nishimura ladder, and period bounds.

pub mod bounds;
pub mod corpus;
pub mod dualitylite;
pub mod evaluation;
pub mod formula;
pub mod iteration;
pub mod ladder;
pub(crate) mod masks;
pub mod modeltext;
pub mod poset;
pub mod prover;
pub mod suite;

pub use evaluation::{equiv_n, leq_n, Evaluation, TypeStore};
pub use formula::{degree, iterate_formula, parse, substitute, Formula, Substitution};
pub use iteration::{chi, iterate_psi, ruitenburg_index, CombinedModel, IterationTrace};
pub use poset::{is_open, product_labels, LabelPoset, PosetMap, RootedPoset};
pub use prover::{
    countermodel, equiv_ipc, prove_cpc, prove_ipc, Countermodel, Prover, ProverConfig, ProverError,
};
