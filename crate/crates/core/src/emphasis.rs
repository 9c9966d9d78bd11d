//! Emphasis distribution, blocking and case assignment.
//!
//! Emphasis starts at the field's start node and is handed down, one argument
//! at a time, until it reaches a basic proposition. Optional branches (the
//! start node's siblings by default) may open a second chain. Roles of
//! emphatic basic propositions that are not blocked get a direct case; other
//! verbalized roles are realized as prepositional objects.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::roles::{derive_case_frame, CaseFrame, Role, RoleRuleTable, RuleError};
use crate::scheme::{FieldDefinition, NodePath, Scheme, Variable};
use crate::sexpr::{self, Sexp, SyntaxError};

/// The set of emphatic propositions.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmphasisAssignment(BTreeSet<NodePath>);

impl EmphasisAssignment {
    pub fn new(paths: impl IntoIterator<Item = NodePath>) -> Self {
        EmphasisAssignment(paths.into_iter().collect())
    }

    pub fn contains(&self, path: &NodePath) -> bool {
        self.0.contains(path)
    }

    pub fn paths(&self) -> impl Iterator<Item = &NodePath> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Variables whose basic proposition is emphatic.
    pub fn emphatic_variables(&self, scheme: &Scheme) -> BTreeSet<Variable> {
        scheme
            .variable_sites()
            .into_iter()
            .filter(|(_, site)| self.0.contains(site))
            .map(|(v, _)| v)
            .collect()
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom("emphasis")];
        items.extend(self.0.iter().map(NodePath::to_sexp));
        Sexp::list(items)
    }
}

impl fmt::Display for EmphasisAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Variables that are not verbalized.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockingSet(BTreeSet<Variable>);

impl BlockingSet {
    pub fn new(vars: impl IntoIterator<Item = Variable>) -> Self {
        BlockingSet(vars.into_iter().collect())
    }

    pub fn of(names: &[&str]) -> Self {
        BlockingSet::new(names.iter().map(|n| Variable::new(*n)))
    }

    pub fn contains(&self, var: &Variable) -> bool {
        self.0.contains(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Variable> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom("blocked")];
        items.extend(self.0.iter().map(|v| Sexp::atom(v.to_string())));
        Sexp::list(items)
    }
}

impl fmt::Display for BlockingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    Nominative,
    Genitive,
    Dative,
    Accusative,
}

impl Case {
    pub const ALL: [Case; 4] = [Case::Nominative, Case::Genitive, Case::Dative, Case::Accusative];

    pub fn name(self) -> &'static str {
        match self {
            Case::Nominative => "nominative",
            Case::Genitive => "genitive",
            Case::Dative => "dative",
            Case::Accusative => "accusative",
        }
    }

    pub fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        Case::ALL
            .into_iter()
            .find(|c| term.as_atom() == Some(c.name()))
            .ok_or_else(|| SyntaxError::new(term.pos, format!("expected a case, found {term}")))
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How one variable surfaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Realized {
    Direct(Case),
    Oblique { preposition: String, case: Case },
    Blocked,
}

impl Realized {
    pub fn to_sexp(&self) -> Sexp {
        match self {
            Realized::Direct(c) => Sexp::atom(c.name()),
            Realized::Oblique { preposition, case } => Sexp::list(vec![
                Sexp::atom("oblique"),
                Sexp::string(preposition.clone()),
                Sexp::atom(case.name()),
            ]),
            Realized::Blocked => Sexp::atom("blocked"),
        }
    }
}

impl fmt::Display for Realized {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Realized::Direct(c) => write!(f, "{c}"),
            Realized::Oblique { preposition, case } => write!(f, "{preposition}+{case}"),
            Realized::Blocked => f.write_str("—"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Realization(IndexMap<Variable, Realized>);

impl Realization {
    pub fn get(&self, var: &Variable) -> Option<&Realized> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Realized)> {
        self.0.iter()
    }

    pub fn with_case(&self, case: Case) -> impl Iterator<Item = &Variable> {
        self.0
            .iter()
            .filter(move |(_, r)| **r == Realized::Direct(case))
            .map(|(v, _)| v)
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom("realization")];
        items.extend(
            self.0
                .iter()
                .map(|(v, r)| Sexp::list(vec![Sexp::atom(v.to_string()), r.to_sexp()])),
        );
        Sexp::list(items)
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, r)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} {r}")?;
        }
        Ok(())
    }
}

/// Which direct case an emphatic, unblocked role receives.
///
/// ```text
/// (nominative-order agens source goal)
/// (dative goal source)
/// (accusative to-obj from-obj)
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseTable {
    pub nominative_order: Vec<String>,
    pub dative: Vec<String>,
    pub accusative: Vec<String>,
    pub genitive: Vec<String>,
}

impl CaseTable {
    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, SyntaxError> {
        let mut table = CaseTable::default();
        for term in terms {
            let labels = |head: &str| -> Result<Vec<String>, SyntaxError> {
                term.expect_form(head)?
                    .iter()
                    .map(|l| l.expect_atom("role label").map(str::to_string))
                    .collect()
            };
            match term.head() {
                Some("nominative-order") => table.nominative_order = labels("nominative-order")?,
                Some("dative") => table.dative = labels("dative")?,
                Some("accusative") => table.accusative = labels("accusative")?,
                Some("genitive") => table.genitive = labels("genitive")?,
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        format!("unexpected case-table entry {term}"),
                    ))
                }
            }
        }
        Ok(table)
    }

    fn non_nominative(&self, label: &str) -> Option<Case> {
        let has = |list: &[String]| list.iter().any(|l| l == label);
        if has(&self.dative) {
            Some(Case::Dative)
        } else if has(&self.accusative) {
            Some(Case::Accusative)
        } else if has(&self.genitive) {
            Some(Case::Genitive)
        } else {
            None
        }
    }
}

pub fn parse_case_table(text: &str) -> Result<CaseTable, SyntaxError> {
    CaseTable::from_sexps(&sexpr::read_all(text)?)
}

/// Preposition and governed case per role: `(oblique (goal have) "an" accusative)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ObliqueTable(HashMap<Role, (String, Case)>);

impl ObliqueTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, role: Role, preposition: &str, case: Case) -> Self {
        self.0.insert(role, (preposition.to_string(), case));
        self
    }

    pub fn get(&self, role: &Role) -> Option<&(String, Case)> {
        self.0.get(role)
    }

    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, SyntaxError> {
        let mut table = ObliqueTable::new();
        for term in terms {
            match term.expect_form("oblique")? {
                [role, prep, case] => {
                    let prep = prep.as_str().ok_or_else(|| {
                        SyntaxError::new(prep.pos, "expected preposition string")
                    })?;
                    table.0.insert(Role::from_sexp(role)?, (prep.to_string(), Case::from_sexp(case)?));
                }
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        "expected (oblique (label anchor) \"prep\" case)",
                    ))
                }
            }
        }
        Ok(table)
    }
}

pub fn parse_oblique_table(text: &str) -> Result<ObliqueTable, SyntaxError> {
    ObliqueTable::from_sexps(&sexpr::read_all(text)?)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmphasisViolation {
    #[error("start node {0} is not emphatic")]
    StartMissing(NodePath),
    #[error("{0} does not address a proposition")]
    UnknownNode(NodePath),
    #[error("{0} is emphatic but its parent is not")]
    Orphan(NodePath),
    #[error("{path} has {count} emphatic arguments instead of one")]
    Distribution { path: NodePath, count: usize },
}

/// Checks the emphasis-distribution invariants for `field`.
pub fn validate_emphasis(
    field: &FieldDefinition,
    emphasis: &EmphasisAssignment,
) -> Result<(), EmphasisViolation> {
    let scheme = &field.scheme;
    if !emphasis.contains(&field.emphasis_start) {
        return Err(EmphasisViolation::StartMissing(field.emphasis_start.clone()));
    }
    let optional = field.optional_branch_paths();
    for path in emphasis.paths() {
        let node = scheme
            .node(path)
            .ok_or_else(|| EmphasisViolation::UnknownNode(path.clone()))?;
        if *path != field.emphasis_start && !optional.contains(path) {
            match path.parent() {
                Some(parent) if emphasis.contains(&parent) => {}
                _ => return Err(EmphasisViolation::Orphan(path.clone())),
            }
        }
        let children: Vec<NodePath> = node.children().map(|(i, _)| path.child(i)).collect();
        if !children.is_empty() {
            let count = children.iter().filter(|c| emphasis.contains(c)).count();
            if count != 1 {
                return Err(EmphasisViolation::Distribution {
                    path: path.clone(),
                    count,
                });
            }
        }
    }
    Ok(())
}

/// Every chain from `path` down to a basic proposition.
fn chains(scheme: &Scheme, path: &NodePath) -> Vec<Vec<NodePath>> {
    let node = scheme.node(path).expect("chain path");
    let children: Vec<usize> = node.children().map(|(i, _)| i).collect();
    if children.is_empty() {
        return vec![vec![path.clone()]];
    }
    children
        .into_iter()
        .flat_map(|i| {
            chains(scheme, &path.child(i)).into_iter().map(|mut tail| {
                tail.insert(0, path.clone());
                tail
            })
        })
        .collect()
}

/// All legal emphasis distributions of `field`, in canonical order.
pub fn enumerate_emphasis(field: &FieldDefinition) -> Vec<EmphasisAssignment> {
    let scheme = &field.scheme;
    let mut partial: Vec<Vec<NodePath>> = chains(scheme, &field.emphasis_start);
    for branch in field.optional_branch_paths() {
        let options = chains(scheme, &branch);
        partial = partial
            .into_iter()
            .flat_map(|base| {
                let with = options.iter().map({
                    let base = base.clone();
                    move |chain| base.iter().chain(chain).cloned().collect::<Vec<_>>()
                });
                std::iter::once(base).chain(with).collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out: Vec<EmphasisAssignment> = partial
        .into_iter()
        .map(EmphasisAssignment::new)
        .filter(|e| validate_emphasis(field, e).is_ok())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Emphatic basic propositions whose arguments are all blocked.
pub fn check_blocking(
    scheme: &Scheme,
    emphasis: &EmphasisAssignment,
    blocking: &BlockingSet,
) -> Result<(), Vec<NodePath>> {
    let offending: Vec<NodePath> = scheme
        .nodes()
        .into_iter()
        .filter(|(path, node)| {
            emphasis.contains(path) && node.is_basic() && node.variables().all(|v| blocking.contains(v))
        })
        .map(|(path, _)| path)
        .collect();
    if offending.is_empty() {
        Ok(())
    } else {
        Err(offending)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error("no emphatic unblocked role is eligible for nominative")]
    NoNominativeCandidate,
    #[error("no direct case for emphatic role {role} of {var}")]
    NoDirectCase { var: Variable, role: Role },
    #[error("no oblique realization for role {role} of {var}")]
    MissingOblique { var: Variable, role: Role },
}

/// Assigns a realization to every variable of `frame`.
pub fn assign_cases(
    scheme: &Scheme,
    frame: &CaseFrame,
    emphasis: &EmphasisAssignment,
    blocking: &BlockingSet,
    cases: &CaseTable,
    oblique: &ObliqueTable,
) -> Result<Realization, CaseError> {
    let emphatic = emphasis.emphatic_variables(scheme);
    let direct: Vec<(&Variable, &Role)> = frame
        .iter()
        .filter(|(v, _)| emphatic.contains(*v) && !blocking.contains(v))
        .collect();

    let subject = cases
        .nominative_order
        .iter()
        .find_map(|label| direct.iter().find(|(_, r)| r.label == *label))
        .map(|(v, _)| *v)
        .ok_or(CaseError::NoNominativeCandidate)?;

    let mut out = IndexMap::new();
    for (var, role) in frame.iter() {
        let realized = if blocking.contains(var) {
            Realized::Blocked
        } else if var == subject {
            Realized::Direct(Case::Nominative)
        } else if emphatic.contains(var) {
            let case = cases
                .non_nominative(&role.label)
                .ok_or_else(|| CaseError::NoDirectCase {
                    var: var.clone(),
                    role: role.clone(),
                })?;
            Realized::Direct(case)
        } else {
            let (preposition, case) =
                oblique.get(role).ok_or_else(|| CaseError::MissingOblique {
                    var: var.clone(),
                    role: role.clone(),
                })?;
            Realized::Oblique {
                preposition: preposition.clone(),
                case: *case,
            }
        };
        out.insert(var.clone(), realized);
    }
    Ok(Realization(out))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("invalid emphasis: {0}")]
    Emphasis(#[from] EmphasisViolation),
    #[error("blocked variable {0} does not occur in the scheme")]
    UnknownVariable(Variable),
    #[error("every role of emphatic proposition(s) {} is blocked", display_paths(.0))]
    Blocking(Vec<NodePath>),
    #[error(transparent)]
    Case(#[from] CaseError),
}

fn display_paths(paths: &[NodePath]) -> String {
    paths.iter().map(NodePath::to_string).collect::<Vec<_>>().join(" ")
}

/// A scheme with one emphasis distribution, blocking set and realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemanticForm {
    pub field_name: String,
    pub emphasis: EmphasisAssignment,
    pub blocking: BlockingSet,
    pub realization: Realization,
    pub case_frame: CaseFrame,
    emphatic: BTreeSet<Variable>,
}

impl SemanticForm {
    /// Validates the pattern and computes its realization.
    pub fn build(
        field: &FieldDefinition,
        frame: &CaseFrame,
        emphasis: EmphasisAssignment,
        blocking: BlockingSet,
        cases: &CaseTable,
        oblique: &ObliqueTable,
    ) -> Result<Self, FormError> {
        validate_emphasis(field, &emphasis)?;
        let vars = field.scheme.variables();
        if let Some(v) = blocking.iter().find(|v| !vars.contains(v)) {
            return Err(FormError::UnknownVariable(v.clone()));
        }
        check_blocking(&field.scheme, &emphasis, &blocking).map_err(FormError::Blocking)?;
        let realization = assign_cases(&field.scheme, frame, &emphasis, &blocking, cases, oblique)?;
        Ok(SemanticForm {
            field_name: field.name.clone(),
            emphatic: emphasis.emphatic_variables(&field.scheme),
            emphasis,
            blocking,
            realization,
            case_frame: frame.clone(),
        })
    }

    pub fn is_emphatic(&self, var: &Variable) -> bool {
        self.emphatic.contains(var)
    }

    pub fn is_blocked(&self, var: &Variable) -> bool {
        self.blocking.contains(var)
    }

    /// The variable carrying a role label, if the frame has one.
    pub fn variable_with_label(&self, label: &str) -> Option<&Variable> {
        self.case_frame.variable_with_label(label)
    }

    pub fn to_sexp(&self) -> Sexp {
        Sexp::list(vec![
            Sexp::atom("form"),
            Sexp::list(vec![Sexp::atom("field"), Sexp::atom(self.field_name.clone())]),
            self.emphasis.to_sexp(),
            self.blocking.to_sexp(),
            self.realization.to_sexp(),
        ])
    }
}

/// Result of exhaustive enumeration.
#[derive(Debug, Clone, Default)]
pub struct FormAtlas {
    pub forms: Vec<SemanticForm>,
    /// Candidate pairs passing the blocking rule but rejected by case assignment.
    pub skipped: usize,
}

/// Every (emphasis, blocking) pair of `field` that yields a semantic form.
pub fn enumerate_semantic_forms(
    field: &FieldDefinition,
    rules: &RoleRuleTable,
    cases: &CaseTable,
    oblique: &ObliqueTable,
) -> Result<FormAtlas, RuleError> {
    let frame = derive_case_frame(&field.scheme, rules)?;
    let vars = field.scheme.variables();
    assert!(vars.len() < 32, "too many variables to enumerate blocking sets");
    let mut atlas = FormAtlas::default();
    for emphasis in enumerate_emphasis(field) {
        for mask in 0u32..(1 << vars.len()) {
            let blocking = BlockingSet::new(
                vars.iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| v.clone()),
            );
            match SemanticForm::build(field, &frame, emphasis.clone(), blocking, cases, oblique) {
                Ok(form) => atlas.forms.push(form),
                Err(FormError::Case(_)) => atlas.skipped += 1,
                Err(_) => {}
            }
        }
    }
    atlas
        .forms
        .sort_by(|a, b| (&a.emphasis, &a.blocking).cmp(&(&b.emphasis, &b.blocking)));
    Ok(atlas)
}
