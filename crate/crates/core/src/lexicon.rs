//! Verb lexicon keyed by semantic form, the Upper Model fragment and
//! process-type selection.
//!
//! Selection rules are data. A rule names a process type and a disjunction of
//! `when` clauses, each a conjunction of role-status tests:
//!
//! ```text
//! (select change-of-possession directed-action
//!   (when (unblocked agens) (unblocked goal)))
//! (role-map change-of-possession actor agens source)
//! ```
//!
//! A role map fills its Upper Model role with the first verbalized role whose
//! label appears in the list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::emphasis::{
    BlockingSet, CaseTable, EmphasisAssignment, ObliqueTable, Realized, SemanticForm,
};
use crate::roles::{CaseFrame, Role};
use crate::scheme::{FieldDefinition, NodePath, Variable};
use crate::sexpr::{self, Sexp, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbEntry {
    pub lemma: String,
    pub field_name: String,
    /// Event symbol used as the SPL head, e.g. `send` for schicken.
    pub event: String,
    /// Third person singular present, e.g. `schickt`.
    pub finite: String,
    pub separable_prefix: Option<String>,
    pub emphasis_pattern: EmphasisAssignment,
    pub blocking_pattern: BlockingSet,
    pub oblique_roles: BTreeSet<Role>,
    /// Declared process type, cross-checked against selection.
    pub um: Option<String>,
}

impl VerbEntry {
    pub fn matches(&self, form: &SemanticForm) -> bool {
        self.field_name == form.field_name
            && self.emphasis_pattern == form.emphasis
            && self.blocking_pattern == form.blocking
    }

    fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        let args = term.expect_form("verb")?;
        let (lemma, clauses) = args
            .split_first()
            .ok_or_else(|| SyntaxError::new(term.pos, "verb needs a lemma"))?;
        let lemma = lemma
            .as_str()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| SyntaxError::new(lemma.pos, "expected lemma string"))?
            .to_string();

        let mut field_name = None;
        let mut event = None;
        let mut finite = None;
        let mut separable_prefix = None;
        let mut emphasis_pattern = None;
        let mut blocking_pattern = BlockingSet::default();
        let mut oblique_roles = BTreeSet::new();
        let mut um = None;

        let single = |clause: &Sexp, head: &str| -> Result<Sexp, SyntaxError> {
            match clause.expect_form(head)? {
                [x] => Ok(x.clone()),
                _ => Err(SyntaxError::new(clause.pos, format!("({head} ...) takes one value"))),
            }
        };
        let string = |x: Sexp| -> Result<String, SyntaxError> {
            x.as_str()
                .map(str::to_string)
                .ok_or_else(|| SyntaxError::new(x.pos, "expected string"))
        };

        for clause in clauses {
            match clause.head() {
                Some("field") => {
                    field_name = Some(single(clause, "field")?.expect_atom("field")?.to_string())
                }
                Some("event") => {
                    event = Some(single(clause, "event")?.expect_atom("event")?.to_string())
                }
                Some("finite") => finite = Some(string(single(clause, "finite")?)?),
                Some("prefix") => separable_prefix = Some(string(single(clause, "prefix")?)?),
                Some("um") => um = Some(single(clause, "um")?.expect_atom("type")?.to_string()),
                Some("emphasis") => {
                    emphasis_pattern = Some(EmphasisAssignment::new(
                        clause
                            .expect_form("emphasis")?
                            .iter()
                            .map(NodePath::from_sexp)
                            .collect::<Result<Vec<_>, _>>()?,
                    ))
                }
                Some("blocked") => {
                    blocking_pattern = BlockingSet::new(
                        clause
                            .expect_form("blocked")?
                            .iter()
                            .map(Variable::from_sexp)
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                Some("oblique") => {
                    for r in clause.expect_form("oblique")? {
                        oblique_roles.insert(Role::from_sexp(r)?);
                    }
                }
                _ => {
                    return Err(SyntaxError::new(
                        clause.pos,
                        format!("unexpected verb clause {clause}"),
                    ))
                }
            }
        }

        let missing = |what: &str| SyntaxError::new(term.pos, format!("verb {lemma} lacks ({what} ...)"));
        Ok(VerbEntry {
            field_name: field_name.ok_or_else(|| missing("field"))?,
            event: event.ok_or_else(|| missing("event"))?,
            finite: finite.ok_or_else(|| missing("finite"))?,
            emphasis_pattern: emphasis_pattern.ok_or_else(|| missing("emphasis"))?,
            lemma,
            separable_prefix,
            blocking_pattern,
            oblique_roles,
            um,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    pub entries: Vec<VerbEntry>,
}

impl Lexicon {
    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, SyntaxError> {
        Ok(Lexicon {
            entries: terms.iter().map(VerbEntry::from_sexp).collect::<Result<_, _>>()?,
        })
    }

    pub fn by_lemma<'a>(&'a self, lemma: &'a str) -> impl Iterator<Item = &'a VerbEntry> + 'a {
        self.entries.iter().filter(move |e| e.lemma == lemma)
    }
}

pub fn parse_lexicon(text: &str) -> Result<Lexicon, SyntaxError> {
    Lexicon::from_sexps(&sexpr::read_all(text)?)
}

/// Lexicon entries whose field and patterns equal the form's.
pub fn match_verbs<'a>(form: &SemanticForm, lexicon: &'a Lexicon) -> Vec<&'a VerbEntry> {
    lexicon.entries.iter().filter(|e| e.matches(form)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UmRole {
    Actor,
    Recipient,
    Actee,
}

impl UmRole {
    pub const ALL: [UmRole; 3] = [UmRole::Actor, UmRole::Recipient, UmRole::Actee];

    pub fn keyword(self) -> &'static str {
        match self {
            UmRole::Actor => "actor",
            UmRole::Recipient => "recipient",
            UmRole::Actee => "actee",
        }
    }

    fn parse(term: &Sexp) -> Result<Self, SyntaxError> {
        UmRole::ALL
            .into_iter()
            .find(|r| term.as_atom() == Some(r.keyword()))
            .ok_or_else(|| SyntaxError::new(term.pos, format!("unknown Upper Model role {term}")))
    }
}

impl fmt::Display for UmRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Upper Model roles and the variables filling them, in slot order.
pub type UmRoleMap = BTreeMap<UmRole, Variable>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoleStatus {
    Emphatic,
    NonEmphatic,
    Blocked,
    Unblocked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub status: RoleStatus,
    pub label: String,
}

impl Condition {
    /// False when the frame has no role with this label.
    pub fn holds(&self, form: &SemanticForm) -> bool {
        let Some(var) = form.variable_with_label(&self.label) else {
            return false;
        };
        match self.status {
            RoleStatus::Emphatic => form.is_emphatic(var),
            RoleStatus::NonEmphatic => !form.is_emphatic(var),
            RoleStatus::Blocked => form.is_blocked(var),
            RoleStatus::Unblocked => !form.is_blocked(var),
        }
    }

    fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        match term.as_list() {
            Some([status, label]) => {
                let status = match status.as_atom() {
                    Some("emphatic") => RoleStatus::Emphatic,
                    Some("non-emphatic") => RoleStatus::NonEmphatic,
                    Some("blocked") => RoleStatus::Blocked,
                    Some("unblocked") => RoleStatus::Unblocked,
                    _ => {
                        return Err(SyntaxError::new(
                            status.pos,
                            format!("unknown role status {status}"),
                        ))
                    }
                };
                Ok(Condition {
                    status,
                    label: label.expect_atom("role label")?.to_string(),
                })
            }
            _ => Err(SyntaxError::new(term.pos, "expected (status label)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionRule {
    pub um_type: String,
    /// Disjunction of conjunctions.
    pub when: Vec<Vec<Condition>>,
}

impl SelectionRule {
    pub fn applies(&self, form: &SemanticForm) -> bool {
        self.when.iter().any(|all| all.iter().all(|c| c.holds(form)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UmType {
    pub name: String,
    pub parent: Option<String>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UpperModelError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("type {0} defined twice")]
    Duplicate(String),
    #[error("type {child} has unknown parent {parent}")]
    UnknownParent { child: String, parent: String },
    #[error("subsumption cycle through {0}")]
    Cycle(String),
    #[error("selection rule names unknown type {0}")]
    UnknownType(String),
}

/// The Upper Model fragment plus per-field selection rules and role maps.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UpperModel {
    types: IndexMap<String, Option<String>>,
    rules: IndexMap<String, Vec<SelectionRule>>,
    role_maps: IndexMap<String, Vec<(UmRole, Vec<String>)>>,
}

impl UpperModel {
    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, UpperModelError> {
        let mut um = UpperModel::default();
        for term in terms {
            match term.head() {
                Some("um-type") => {
                    let (name, parent) = match term.expect_form("um-type")? {
                        [name] => (name.expect_atom("type")?, None),
                        [name, parent] => (
                            name.expect_atom("type")?,
                            Some(parent.expect_atom("type")?.to_string()),
                        ),
                        _ => {
                            return Err(SyntaxError::new(term.pos, "expected (um-type name [parent])")
                                .into())
                        }
                    };
                    if um.types.insert(name.to_string(), parent).is_some() {
                        return Err(UpperModelError::Duplicate(name.to_string()));
                    }
                }
                Some("select") => match term.expect_form("select")? {
                    [field, ty, whens @ ..] if !whens.is_empty() => {
                        let when = whens
                            .iter()
                            .map(|w| {
                                w.expect_form("when")?
                                    .iter()
                                    .map(Condition::from_sexp)
                                    .collect::<Result<Vec<_>, _>>()
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        um.rules
                            .entry(field.expect_atom("field")?.to_string())
                            .or_default()
                            .push(SelectionRule {
                                um_type: ty.expect_atom("type")?.to_string(),
                                when,
                            });
                    }
                    _ => {
                        return Err(SyntaxError::new(
                            term.pos,
                            "expected (select field type (when ...)+)",
                        )
                        .into())
                    }
                },
                Some("role-map") => match term.expect_form("role-map")? {
                    [field, role, labels @ ..] if !labels.is_empty() => {
                        let labels = labels
                            .iter()
                            .map(|l| l.expect_atom("role label").map(str::to_string))
                            .collect::<Result<Vec<_>, _>>()?;
                        um.role_maps
                            .entry(field.expect_atom("field")?.to_string())
                            .or_default()
                            .push((UmRole::parse(role)?, labels));
                    }
                    _ => {
                        return Err(SyntaxError::new(
                            term.pos,
                            "expected (role-map field um-role label+)",
                        )
                        .into())
                    }
                },
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        format!("unexpected Upper Model entry {term}"),
                    )
                    .into())
                }
            }
        }
        um.validate()?;
        Ok(um)
    }

    fn validate(&self) -> Result<(), UpperModelError> {
        for (name, parent) in &self.types {
            if let Some(p) = parent {
                if !self.types.contains_key(p) {
                    return Err(UpperModelError::UnknownParent {
                        child: name.clone(),
                        parent: p.clone(),
                    });
                }
            }
            let mut seen = BTreeSet::new();
            let mut cur = Some(name);
            while let Some(n) = cur {
                if !seen.insert(n) {
                    return Err(UpperModelError::Cycle(name.clone()));
                }
                cur = self.types.get(n).and_then(|p| p.as_ref());
            }
        }
        for rule in self.rules.values().flatten() {
            if !self.types.contains_key(&rule.um_type) {
                return Err(UpperModelError::UnknownType(rule.um_type.clone()));
            }
        }
        Ok(())
    }

    pub fn types(&self) -> impl Iterator<Item = UmType> + '_ {
        self.types.iter().map(|(n, p)| UmType {
            name: n.clone(),
            parent: p.clone(),
        })
    }

    /// True if `general` is `specific` or one of its ancestors.
    pub fn subsumes(&self, general: &str, specific: &str) -> bool {
        let mut cur = Some(specific);
        while let Some(n) = cur {
            if n == general {
                return true;
            }
            cur = self.types.get(n).and_then(|p| p.as_deref());
        }
        false
    }

    pub fn rules_for(&self, field: &str) -> &[SelectionRule] {
        self.rules.get(field).map(Vec::as_slice).unwrap_or_default()
    }
}

pub fn parse_upper_model(text: &str) -> Result<UpperModel, UpperModelError> {
    UpperModel::from_sexps(&sexpr::read_all(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UmSelection {
    pub um_type: String,
    pub roles: UmRoleMap,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SelectionError {
    #[error("unclassified form: no process-type rule of field {0} applies")]
    Unclassified(String),
    #[error("ambiguous form: rules for {} all apply", .0.join(", "))]
    Ambiguous(Vec<String>),
}

/// Picks the Upper Model process type of `form` and maps its verbalized
/// roles onto Upper Model roles.
pub fn select_process_type(
    form: &SemanticForm,
    um: &UpperModel,
) -> Result<UmSelection, SelectionError> {
    let matching: Vec<&SelectionRule> = um
        .rules_for(&form.field_name)
        .iter()
        .filter(|r| r.applies(form))
        .collect();
    let um_type = match matching.as_slice() {
        [] => return Err(SelectionError::Unclassified(form.field_name.clone())),
        [one] => one.um_type.clone(),
        many => {
            return Err(SelectionError::Ambiguous(
                many.iter().map(|r| r.um_type.clone()).collect(),
            ))
        }
    };
    let mut roles = UmRoleMap::new();
    for (um_role, labels) in um.role_maps.get(&form.field_name).into_iter().flatten() {
        let filler = labels.iter().find_map(|label| {
            form.variable_with_label(label)
                .filter(|v| !form.is_blocked(v))
        });
        if let Some(var) = filler {
            roles.insert(*um_role, var.clone());
        }
    }
    Ok(UmSelection { um_type, roles })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexiconIssue {
    pub lemma: String,
    pub message: String,
}

impl fmt::Display for LexiconIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.lemma, self.message)
    }
}

/// Cross-checks every entry of `field` against the engine: its pattern must
/// be a valid semantic form, its oblique roles must be the form's, its
/// declared process type must be the selected one, and no two entries may
/// share a pattern.
pub fn check_lexicon(
    lexicon: &Lexicon,
    field: &FieldDefinition,
    frame: &CaseFrame,
    cases: &CaseTable,
    oblique: &ObliqueTable,
    um: &UpperModel,
) -> Vec<LexiconIssue> {
    let mut issues = Vec::new();
    let mut seen = BTreeMap::new();
    for entry in lexicon.entries.iter().filter(|e| e.field_name == field.name) {
        let issue = |message: String| LexiconIssue {
            lemma: entry.lemma.clone(),
            message,
        };
        let key = (entry.emphasis_pattern.clone(), entry.blocking_pattern.clone());
        if let Some(other) = seen.insert(key, entry.lemma.clone()) {
            issues.push(issue(format!("pattern already used by {other}")));
        }
        let form = match SemanticForm::build(
            field,
            frame,
            entry.emphasis_pattern.clone(),
            entry.blocking_pattern.clone(),
            cases,
            oblique,
        ) {
            Ok(f) => f,
            Err(e) => {
                issues.push(issue(format!("pattern is not a semantic form: {e}")));
                continue;
            }
        };
        let obliques: BTreeSet<Role> = form
            .realization
            .iter()
            .filter(|(_, r)| matches!(r, Realized::Oblique { .. }))
            .filter_map(|(v, _)| frame.get(v).cloned())
            .collect();
        if obliques != entry.oblique_roles {
            issues.push(issue(format!(
                "declared oblique roles differ from the form's ({})",
                obliques.iter().map(Role::to_string).collect::<Vec<_>>().join(", ")
            )));
        }
        match (select_process_type(&form, um), &entry.um) {
            (Ok(sel), Some(declared)) if sel.um_type != *declared => issues.push(issue(format!(
                "declared process type {declared}, selected {}",
                sel.um_type
            ))),
            (Err(e), Some(_)) => issues.push(issue(e.to_string())),
            _ => {}
        }
    }
    issues
}
