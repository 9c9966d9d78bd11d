//! Rule engine for semantic emphasis in text generation.
//!
//! A lexical field is described by a basic semantic scheme. From it the
//! engine derives the maximum case frame, enumerates emphasis distributions
//! and blocking sets, assigns grammatical cases, picks an Upper Model process
//! type, builds SPL sentence plans and realizes small German clauses.

pub mod discourse;
pub mod emphasis;
pub mod lexicon;
pub mod pipeline;
pub mod realize;
pub mod roles;
pub mod scheme;
pub mod sexpr;
pub mod shipped;
pub mod spl;

pub use discourse::{
    decide_emphasis_q, status_of, update_discourse, DiscourseState, EmphasisQ, TextualStatus,
};
pub use emphasis::{
    assign_cases, check_blocking, enumerate_emphasis, enumerate_semantic_forms, BlockingSet, Case,
    CaseTable, EmphasisAssignment, FormAtlas, ObliqueTable, Realization, Realized, SemanticForm,
};
pub use lexicon::{
    match_verbs, select_process_type, Lexicon, UmRole, UmRoleMap, UmSelection, UpperModel,
    VerbEntry,
};
pub use pipeline::{Bundle, BundleSources, EmphasisSource, Generated, PipelineError, Stage};
pub use realize::{inflect_np, realize, MorphTable, NpLexicon, NpSpec};
pub use roles::{apply_rule, derive_case_frame, CaseFrame, Polarity, Role, RoleRuleTable};
pub use scheme::{
    parse_field, print_field, validate_binding, Binding, FieldDefinition, NodePath, Referent,
    Scheme, Variable,
};
pub use spl::{build_spl, read_spl, serialize_spl, SplTerm};
