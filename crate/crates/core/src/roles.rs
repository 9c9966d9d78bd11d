//! Derivation of the maximum case frame.
//!
//! Every elementary argument receives an initial role from its basic
//! predicate; each enclosing propositional predicate then rewrites that role,
//! innermost first. Polarity predicates (`not`) leave the role alone but flip
//! the polarity context seen by everything above them. The rules themselves
//! are data, see [`RoleRuleTable`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::scheme::{Argument, Proposition, Scheme, Variable};
use crate::sexpr::{self, Sexp, SyntaxError};

/// A deep case such as `<goal, have>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Role {
    pub label: String,
    /// The basic predicate the role belongs to.
    pub anchor: String,
}

impl Role {
    pub fn new(label: impl Into<String>, anchor: impl Into<String>) -> Self {
        let (label, anchor) = (label.into(), anchor.into());
        assert!(!label.is_empty() && !anchor.is_empty(), "empty role component");
        Role { label, anchor }
    }

    pub fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        match term.expect_list("role (label anchor)")? {
            [label, anchor] => Ok(Role::new(
                label.expect_atom("role label")?,
                anchor.expect_atom("role anchor")?,
            )),
            _ => Err(SyntaxError::new(term.pos, "expected role (label anchor)")),
        }
    }

    pub fn to_sexp(&self) -> Sexp {
        Sexp::list(vec![
            Sexp::atom(self.label.clone()),
            Sexp::atom(self.anchor.clone()),
        ])
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.label, self.anchor)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Pos,
    Neg,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Pos => Polarity::Neg,
            Polarity::Neg => Polarity::Pos,
        }
    }

    fn parse(term: &Sexp) -> Result<Self, SyntaxError> {
        match term.as_atom() {
            Some("pos") => Ok(Polarity::Pos),
            Some("neg") => Ok(Polarity::Neg),
            _ => Err(SyntaxError::new(term.pos, format!("expected pos or neg, found {term}"))),
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Pos => "pos",
            Polarity::Neg => "neg",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("missing rule: no initial role for argument {position} of {predicate}")]
    MissingInitial { predicate: String, position: usize },
    #[error("missing rule: ({predicate}, {incoming}, {polarity}) has no modifier entry")]
    MissingModifier {
        predicate: String,
        incoming: Role,
        polarity: Polarity,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleTableError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: conflicting entry {entry}")]
    Conflict { pos: sexpr::Pos, entry: String },
}

/// Role rules, loaded from a file such as
///
/// ```text
/// (init have 1 (locat have))
/// (modify bec pos (locat have) (goal have))
/// (flip not)
/// (transparent et)
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoleRuleTable {
    initial: HashMap<(String, usize), Role>,
    modifiers: HashMap<(String, Polarity, Role), Role>,
    flips: BTreeSet<String>,
    transparent: BTreeSet<String>,
}

impl RoleRuleTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_initial(mut self, predicate: &str, position: usize, role: Role) -> Self {
        self.initial.insert((predicate.to_string(), position), role);
        self
    }

    pub fn with_modifier(mut self, predicate: &str, polarity: Polarity, from: Role, to: Role) -> Self {
        self.modifiers.insert((predicate.to_string(), polarity, from), to);
        self
    }

    pub fn with_flip(mut self, predicate: &str) -> Self {
        self.flips.insert(predicate.to_string());
        self
    }

    pub fn with_transparent(mut self, predicate: &str) -> Self {
        self.transparent.insert(predicate.to_string());
        self
    }

    pub fn is_flip(&self, predicate: &str) -> bool {
        self.flips.contains(predicate)
    }

    pub fn initial_role(&self, predicate: &str, position: usize) -> Result<Role, RuleError> {
        self.initial
            .get(&(predicate.to_string(), position))
            .cloned()
            .ok_or_else(|| RuleError::MissingInitial {
                predicate: predicate.to_string(),
                position,
            })
    }

    /// Modifier entries sorted for stable output.
    pub fn modifier_entries(&self) -> Vec<(&str, Polarity, &Role, &Role)> {
        let mut out: Vec<_> = self
            .modifiers
            .iter()
            .map(|((p, pol, from), to)| (p.as_str(), *pol, from, to))
            .collect();
        out.sort();
        out
    }

    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, RuleTableError> {
        let mut table = RoleRuleTable::new();
        for term in terms {
            let conflict = || RuleTableError::Conflict {
                pos: term.pos,
                entry: term.to_string(),
            };
            match term.head() {
                Some("init") => match term.expect_form("init")? {
                    [pred, pos, role] => {
                        let position = pos
                            .as_atom()
                            .and_then(|a| a.parse::<usize>().ok())
                            .filter(|&n| n > 0)
                            .ok_or_else(|| SyntaxError::new(pos.pos, "expected argument position"))?;
                        let key = (pred.expect_atom("predicate")?.to_string(), position);
                        let role = Role::from_sexp(role)?;
                        if table.initial.insert(key, role.clone()).is_some_and(|r| r != role) {
                            return Err(conflict());
                        }
                    }
                    _ => return Err(SyntaxError::new(term.pos, "expected (init pred n role)").into()),
                },
                Some("modify") => match term.expect_form("modify")? {
                    [pred, pol, from, to] => {
                        let key = (
                            pred.expect_atom("predicate")?.to_string(),
                            Polarity::parse(pol)?,
                            Role::from_sexp(from)?,
                        );
                        let to = Role::from_sexp(to)?;
                        if table.modifiers.insert(key, to.clone()).is_some_and(|r| r != to) {
                            return Err(conflict());
                        }
                    }
                    _ => {
                        return Err(
                            SyntaxError::new(term.pos, "expected (modify pred pol role role)").into(),
                        )
                    }
                },
                Some(head @ ("flip" | "transparent")) => {
                    for pred in term.expect_form(head)? {
                        let pred = pred.expect_atom("predicate")?.to_string();
                        if head == "flip" {
                            table.flips.insert(pred);
                        } else {
                            table.transparent.insert(pred);
                        }
                    }
                }
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        format!("expected init, modify, flip or transparent, found {term}"),
                    )
                    .into())
                }
            }
        }
        if table.flips.intersection(&table.transparent).next().is_some() {
            return Err(SyntaxError::new(
                sexpr::Pos::default(),
                "a predicate cannot be both flip and transparent",
            )
            .into());
        }
        Ok(table)
    }
}

pub fn parse_rule_table(text: &str) -> Result<RoleRuleTable, RuleTableError> {
    RoleRuleTable::from_sexps(&sexpr::read_all(text)?)
}

/// One rewriting step: the role `incoming` passing through `predicate` under
/// `polarity`. Transparent and flip predicates leave the role unchanged.
pub fn apply_rule(
    table: &RoleRuleTable,
    predicate: &str,
    incoming: &Role,
    polarity: Polarity,
) -> Result<Role, RuleError> {
    if table.transparent.contains(predicate) || table.flips.contains(predicate) {
        return Ok(incoming.clone());
    }
    table
        .modifiers
        .get(&(predicate.to_string(), polarity, incoming.clone()))
        .cloned()
        .ok_or_else(|| RuleError::MissingModifier {
            predicate: predicate.to_string(),
            incoming: incoming.clone(),
            polarity,
        })
}

/// The maximum case frame: one role per elementary argument, in scheme order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CaseFrame(IndexMap<Variable, Role>);

impl CaseFrame {
    pub fn from_entries(entries: impl IntoIterator<Item = (Variable, Role)>) -> Self {
        CaseFrame(entries.into_iter().collect())
    }

    pub fn get(&self, var: &Variable) -> Option<&Role> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Role)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First variable carrying a role with this label.
    pub fn variable_with_label(&self, label: &str) -> Option<&Variable> {
        self.0.iter().find(|(_, r)| r.label == label).map(|(v, _)| v)
    }

    pub fn to_sexp(&self, field: &str) -> Sexp {
        let mut items = vec![Sexp::atom("frame"), Sexp::atom(field)];
        items.extend(
            self.0
                .iter()
                .map(|(v, r)| Sexp::list(vec![Sexp::atom(v.to_string()), r.to_sexp()])),
        );
        Sexp::list(items)
    }
}

impl fmt::Display for CaseFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, r) in &self.0 {
            writeln!(f, "{:<5} {r}", v.name())?;
        }
        Ok(())
    }
}

struct Derived {
    var: Variable,
    role: Role,
    polarity: Polarity,
}

fn derive_node(p: &Proposition, table: &RoleRuleTable) -> Result<Vec<Derived>, RuleError> {
    if p.is_basic() {
        return p
            .args
            .iter()
            .enumerate()
            .map(|(i, arg)| match arg {
                Argument::Var(v) => Ok(Derived {
                    var: v.clone(),
                    role: table.initial_role(&p.predicate, i + 1)?,
                    polarity: Polarity::Pos,
                }),
                Argument::Prop(_) => unreachable!("basic propositions hold variables only"),
            })
            .collect();
    }
    let flips = table.is_flip(&p.predicate);
    let mut out = Vec::new();
    for (_, child) in p.children() {
        for mut d in derive_node(child, table)? {
            if flips {
                d.polarity = d.polarity.flipped();
            } else {
                d.role = apply_rule(table, &p.predicate, &d.role, d.polarity)?;
            }
            out.push(d);
        }
    }
    Ok(out)
}

pub fn derive_case_frame(scheme: &Scheme, table: &RoleRuleTable) -> Result<CaseFrame, RuleError> {
    let derived = derive_node(scheme.root(), table)?;
    Ok(CaseFrame::from_entries(
        derived.into_iter().map(|d| (d.var, d.role)),
    ))
}

/// Every rule the table is missing for `scheme`, rather than only the first.
pub fn coverage_gaps(scheme: &Scheme, table: &RoleRuleTable) -> Vec<RuleError> {
    let mut gaps = Vec::new();
    for (var, owner) in scheme.variable_sites() {
        let node = scheme.node(&owner).expect("site path");
        let position = node
            .args
            .iter()
            .position(|a| matches!(a, Argument::Var(v) if *v == var))
            .expect("variable at its site")
            + 1;
        let mut role = match table.initial_role(&node.predicate, position) {
            Ok(r) => r,
            Err(e) => {
                if !gaps.contains(&e) {
                    gaps.push(e);
                }
                continue;
            }
        };
        let mut polarity = Polarity::Pos;
        let mut path = owner;
        while let Some(parent) = path.parent() {
            let pred = &scheme.node(&parent).expect("ancestor").predicate;
            if table.is_flip(pred) {
                polarity = polarity.flipped();
            } else {
                match apply_rule(table, pred, &role, polarity) {
                    Ok(r) => role = r,
                    Err(e) => {
                        if !gaps.contains(&e) {
                            gaps.push(e);
                        }
                        break;
                    }
                }
            }
            path = parent;
        }
    }
    gaps
}
