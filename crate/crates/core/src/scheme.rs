//! Basic semantic schemes, lexical-field definitions and referent bindings,
//! plus the reader and canonical printer for field files.
//!
//! A field file looks like
//!
//! ```text
//! (field change-of-possession
//!   (scheme (cause (act ?a) (et (bec (have ?a1 ?a2)) (bec (not (have ?a3 ?a4))))))
//!   (emphasis-start (2))
//!   (coref (distinct ?a1 ?a3) (= ?a2 ?a4) (one-of (= ?a ?a1) (= ?a ?a3))))
//! ```
//!
//! Nodes are addressed by [`NodePath`]s of 1-based argument positions, so
//! `(2)` is the second argument of the root and `(2 1)` is the first argument
//! of that.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::sexpr::{self, Pos, Sexp, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub(crate) fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        match term.as_atom().and_then(|a| a.strip_prefix('?')) {
            Some(name) if !name.is_empty() => Ok(Variable::new(name)),
            _ => Err(SyntaxError::new(
                term.pos,
                format!("expected variable ?name, found {term}"),
            )),
        }
    }

    pub(crate) fn to_sexp(&self) -> Sexp {
        Sexp::atom(self.to_string())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

/// Address of a proposition: 1-based argument positions from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn new(steps: Vec<usize>) -> Self {
        NodePath(steps)
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parent(&self) -> Option<NodePath> {
        let (_, init) = self.0.split_last()?;
        Some(NodePath(init.to_vec()))
    }

    pub fn child(&self, position: usize) -> NodePath {
        let mut steps = self.0.clone();
        steps.push(position);
        NodePath(steps)
    }

    /// True if `self` lies strictly above `other`.
    pub fn is_strict_ancestor_of(&self, other: &NodePath) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    pub fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        let items = term.expect_list("node path")?;
        let mut steps = Vec::with_capacity(items.len());
        for item in items {
            let step = item
                .as_atom()
                .and_then(|a| a.parse::<usize>().ok())
                .filter(|&n| n > 0)
                .ok_or_else(|| {
                    SyntaxError::new(item.pos, format!("expected positive integer, found {item}"))
                })?;
            steps.push(step);
        }
        Ok(NodePath(steps))
    }

    pub fn to_sexp(&self) -> Sexp {
        Sexp::list(self.0.iter().map(|s| Sexp::atom(s.to_string())).collect())
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_sexp().fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PredicateKind {
    /// Takes elementary (variable) arguments only.
    Basic,
    /// Takes propositional arguments only.
    Propositional,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Predicate {
    pub name: String,
    pub kind: PredicateKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Argument {
    Var(Variable),
    Prop(Proposition),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proposition {
    pub predicate: String,
    pub args: Vec<Argument>,
}

impl Proposition {
    pub fn basic(predicate: impl Into<String>, vars: &[&str]) -> Self {
        Proposition {
            predicate: predicate.into(),
            args: vars
                .iter()
                .map(|v| Argument::Var(Variable::new(*v)))
                .collect(),
        }
    }

    pub fn compound(predicate: impl Into<String>, children: Vec<Proposition>) -> Self {
        Proposition {
            predicate: predicate.into(),
            args: children.into_iter().map(Argument::Prop).collect(),
        }
    }

    /// `None` when the argument list is empty or mixes variables and
    /// propositions.
    pub fn kind(&self) -> Option<PredicateKind> {
        if self.args.is_empty() {
            None
        } else if self.args.iter().all(|a| matches!(a, Argument::Var(_))) {
            Some(PredicateKind::Basic)
        } else if self.args.iter().all(|a| matches!(a, Argument::Prop(_))) {
            Some(PredicateKind::Propositional)
        } else {
            None
        }
    }

    pub fn is_basic(&self) -> bool {
        self.kind() == Some(PredicateKind::Basic)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.args.iter().filter_map(|a| match a {
            Argument::Var(v) => Some(v),
            Argument::Prop(_) => None,
        })
    }

    /// Propositional children with their 1-based argument positions.
    pub fn children(&self) -> impl Iterator<Item = (usize, &Proposition)> {
        self.args.iter().enumerate().filter_map(|(i, a)| match a {
            Argument::Prop(p) => Some((i + 1, p)),
            Argument::Var(_) => None,
        })
    }

    fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom(self.predicate.clone())];
        items.extend(self.args.iter().map(|a| match a {
            Argument::Var(v) => v.to_sexp(),
            Argument::Prop(p) => p.to_sexp(),
        }));
        Sexp::list(items)
    }

    fn from_sexp(term: &Sexp) -> Result<Self, FieldError> {
        let items = term.expect_list("proposition")?;
        let (head, rest) = items
            .split_first()
            .ok_or_else(|| SyntaxError::new(term.pos, "empty proposition"))?;
        let predicate = head.expect_atom("predicate name")?;
        if predicate.starts_with('?') {
            return Err(SyntaxError::new(head.pos, "predicate name may not be a variable").into());
        }
        if rest.is_empty() {
            return Err(FieldError::UnknownKind {
                pos: term.pos,
                predicate: predicate.to_string(),
                reason: "no arguments".into(),
            });
        }
        let mut args = Vec::with_capacity(rest.len());
        for arg in rest {
            if arg.as_list().is_some() {
                args.push(Argument::Prop(Proposition::from_sexp(arg)?));
            } else {
                args.push(Argument::Var(Variable::from_sexp(arg)?));
            }
        }
        let prop = Proposition {
            predicate: predicate.to_string(),
            args,
        };
        if prop.kind().is_none() {
            return Err(FieldError::UnknownKind {
                pos: term.pos,
                predicate: prop.predicate,
                reason: "mixes elementary and propositional arguments".into(),
            });
        }
        Ok(prop)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_sexp().fmt(f)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("predicate {0} has no arguments or mixes elementary and propositional arguments")]
    UnknownKind(String),
    #[error("predicate {0} is used both as basic and as propositional")]
    InconsistentKind(String),
    #[error("variable {0} occurs more than once")]
    DuplicateVariable(Variable),
}

/// A validated basic semantic scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    root: Proposition,
}

impl Scheme {
    pub fn new(root: Proposition) -> Result<Self, SchemeError> {
        let mut kinds: HashMap<&str, PredicateKind> = HashMap::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![&root];
        while let Some(p) = stack.pop() {
            let kind = p
                .kind()
                .ok_or_else(|| SchemeError::UnknownKind(p.predicate.clone()))?;
            if *kinds.entry(&p.predicate).or_insert(kind) != kind {
                return Err(SchemeError::InconsistentKind(p.predicate.clone()));
            }
            for v in p.variables() {
                if !seen.insert(v.clone()) {
                    return Err(SchemeError::DuplicateVariable(v.clone()));
                }
            }
            stack.extend(p.children().map(|(_, c)| c));
        }
        Ok(Scheme { root })
    }

    pub fn root(&self) -> &Proposition {
        &self.root
    }

    pub fn node(&self, path: &NodePath) -> Option<&Proposition> {
        let mut cur = &self.root;
        for &step in path.steps() {
            match cur.args.get(step.checked_sub(1)?)? {
                Argument::Prop(p) => cur = p,
                Argument::Var(_) => return None,
            }
        }
        Some(cur)
    }

    /// Every proposition in pre-order (which is also ascending path order).
    pub fn nodes(&self) -> Vec<(NodePath, &Proposition)> {
        fn walk<'a>(p: &'a Proposition, path: NodePath, out: &mut Vec<(NodePath, &'a Proposition)>) {
            out.push((path.clone(), p));
            for (i, c) in p.children() {
                walk(c, path.child(i), out);
            }
        }
        let mut out = Vec::new();
        walk(&self.root, NodePath::root(), &mut out);
        out
    }

    /// Variables in left-to-right order.
    pub fn variables(&self) -> Vec<Variable> {
        self.variable_sites().into_iter().map(|(v, _)| v).collect()
    }

    /// Each variable with the path of the basic proposition owning it.
    pub fn variable_sites(&self) -> Vec<(Variable, NodePath)> {
        self.nodes()
            .into_iter()
            .flat_map(|(path, p)| p.variables().map(move |v| (v.clone(), path.clone())))
            .collect()
    }

    pub fn predicates(&self) -> Vec<Predicate> {
        let mut seen = Vec::<Predicate>::new();
        for (_, p) in self.nodes() {
            let pred = Predicate {
                name: p.predicate.clone(),
                kind: p.kind().expect("validated scheme"),
            };
            if !seen.contains(&pred) {
                seen.push(pred);
            }
        }
        seen
    }

    pub fn depth(&self) -> usize {
        fn d(p: &Proposition) -> usize {
            1 + p.children().map(|(_, c)| d(c)).max().unwrap_or(0)
        }
        d(&self.root)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

/// Coreference constraint between variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coref {
    Equal(Variable, Variable),
    Distinct(Variable, Variable),
    /// Satisfied if any of the listed equalities holds.
    OneOf(Vec<(Variable, Variable)>),
}

impl Coref {
    pub fn variables(&self) -> Vec<&Variable> {
        match self {
            Coref::Equal(v, w) | Coref::Distinct(v, w) => vec![v, w],
            Coref::OneOf(alts) => alts.iter().flat_map(|(v, w)| [v, w]).collect(),
        }
    }

    fn to_sexp(&self) -> Sexp {
        let eq = |v: &Variable, w: &Variable| {
            Sexp::list(vec![Sexp::atom("="), v.to_sexp(), w.to_sexp()])
        };
        match self {
            Coref::Equal(v, w) => eq(v, w),
            Coref::Distinct(v, w) => {
                Sexp::list(vec![Sexp::atom("distinct"), v.to_sexp(), w.to_sexp()])
            }
            Coref::OneOf(alts) => {
                let mut items = vec![Sexp::atom("one-of")];
                items.extend(alts.iter().map(|(v, w)| eq(v, w)));
                Sexp::list(items)
            }
        }
    }

    fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        let pair = |args: &[Sexp]| -> Result<(Variable, Variable), SyntaxError> {
            match args {
                [v, w] => Ok((Variable::from_sexp(v)?, Variable::from_sexp(w)?)),
                _ => Err(SyntaxError::new(term.pos, "expected two variables")),
            }
        };
        match term.head() {
            Some("=") => {
                let (v, w) = pair(term.expect_form("=")?)?;
                Ok(Coref::Equal(v, w))
            }
            Some("distinct") => {
                let (v, w) = pair(term.expect_form("distinct")?)?;
                Ok(Coref::Distinct(v, w))
            }
            Some("one-of") => {
                let alts = term.expect_form("one-of")?;
                if alts.is_empty() {
                    return Err(SyntaxError::new(term.pos, "one-of needs at least one (= ...)"));
                }
                alts.iter()
                    .map(|a| pair(a.expect_form("=")?))
                    .collect::<Result<_, _>>()
                    .map(Coref::OneOf)
            }
            _ => Err(SyntaxError::new(
                term.pos,
                format!("expected (= ...), (distinct ...) or (one-of ...), found {term}"),
            )),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: unknown predicate kind for {predicate}: {reason}")]
    UnknownKind {
        pos: Pos,
        predicate: String,
        reason: String,
    },
    #[error("{pos}: invalid scheme: {source}")]
    Scheme { pos: Pos, source: SchemeError },
    #[error("{pos}: constraint mentions {var}, which does not occur in the scheme")]
    DanglingVariable { pos: Pos, var: Variable },
    #[error("{pos}: path {path} does not address a proposition of the scheme")]
    PathOutOfRange { pos: Pos, path: NodePath },
    #[error("{pos}: missing clause ({clause} ...)")]
    MissingClause { pos: Pos, clause: &'static str },
    #[error("{pos}: unexpected clause {found}")]
    UnexpectedClause { pos: Pos, found: String },
}

/// A lexical field: its scheme, where emphasis distribution starts, and the
/// coreference constraints on its variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldDefinition {
    pub name: String,
    pub scheme: Scheme,
    pub emphasis_start: NodePath,
    /// Nodes that may receive emphasis without an emphatic parent. `None`
    /// means the propositional siblings of the start node.
    pub optional_branches: Option<Vec<NodePath>>,
    pub coref: Vec<Coref>,
}

impl FieldDefinition {
    pub fn optional_branch_paths(&self) -> Vec<NodePath> {
        if let Some(explicit) = &self.optional_branches {
            return explicit.clone();
        }
        let Some(parent) = self.emphasis_start.parent() else {
            return Vec::new();
        };
        let node = self.scheme.node(&parent).expect("validated start path");
        node.children()
            .map(|(i, _)| parent.child(i))
            .filter(|p| *p != self.emphasis_start)
            .collect()
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![
            Sexp::atom("field"),
            Sexp::atom(self.name.clone()),
            Sexp::list(vec![Sexp::atom("scheme"), self.scheme.root.to_sexp()]),
            Sexp::list(vec![
                Sexp::atom("emphasis-start"),
                self.emphasis_start.to_sexp(),
            ]),
        ];
        if let Some(branches) = &self.optional_branches {
            let mut clause = vec![Sexp::atom("optional-branch")];
            clause.extend(branches.iter().map(NodePath::to_sexp));
            items.push(Sexp::list(clause));
        }
        if !self.coref.is_empty() {
            let mut clause = vec![Sexp::atom("coref")];
            clause.extend(self.coref.iter().map(Coref::to_sexp));
            items.push(Sexp::list(clause));
        }
        Sexp::list(items)
    }

    pub fn from_sexp(term: &Sexp) -> Result<Self, FieldError> {
        let args = term.expect_form("field")?;
        let (name, clauses) = args
            .split_first()
            .ok_or_else(|| SyntaxError::new(term.pos, "field needs a name"))?;
        let name = name.expect_atom("field name")?.to_string();

        let mut scheme_cl = None;
        let mut start_cl = None;
        let mut branch_cl = None;
        let mut coref_cl = None;
        for clause in clauses {
            let slot = match clause.head() {
                Some("scheme") => &mut scheme_cl,
                Some("emphasis-start") => &mut start_cl,
                Some("optional-branch") => &mut branch_cl,
                Some("coref") => &mut coref_cl,
                _ => {
                    return Err(FieldError::UnexpectedClause {
                        pos: clause.pos,
                        found: clause.to_string(),
                    })
                }
            };
            if slot.is_some() {
                return Err(FieldError::UnexpectedClause {
                    pos: clause.pos,
                    found: format!("duplicate {}", clause.head().unwrap_or_default()),
                });
            }
            *slot = Some(clause);
        }

        let scheme_cl = scheme_cl.ok_or(FieldError::MissingClause {
            pos: term.pos,
            clause: "scheme",
        })?;
        let root = match scheme_cl.expect_form("scheme")? {
            [prop] => Proposition::from_sexp(prop)?,
            _ => return Err(SyntaxError::new(scheme_cl.pos, "scheme takes one proposition").into()),
        };
        let scheme = Scheme::new(root).map_err(|source| FieldError::Scheme {
            pos: scheme_cl.pos,
            source,
        })?;

        let resolve = |term: &Sexp| -> Result<NodePath, FieldError> {
            let path = NodePath::from_sexp(term)?;
            if scheme.node(&path).is_none() {
                return Err(FieldError::PathOutOfRange {
                    pos: term.pos,
                    path,
                });
            }
            Ok(path)
        };

        let start_cl = start_cl.ok_or(FieldError::MissingClause {
            pos: term.pos,
            clause: "emphasis-start",
        })?;
        let emphasis_start = match start_cl.expect_form("emphasis-start")? {
            [path] => resolve(path)?,
            _ => return Err(SyntaxError::new(start_cl.pos, "emphasis-start takes one path").into()),
        };

        let optional_branches = branch_cl
            .map(|cl| {
                cl.expect_form("optional-branch")?
                    .iter()
                    .map(resolve)
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;

        let mut coref = Vec::new();
        if let Some(cl) = coref_cl {
            let known: BTreeSet<Variable> = scheme.variables().into_iter().collect();
            for c in cl.expect_form("coref")? {
                let constraint = Coref::from_sexp(c)?;
                if let Some(v) = constraint.variables().into_iter().find(|v| !known.contains(v)) {
                    return Err(FieldError::DanglingVariable {
                        pos: c.pos,
                        var: v.clone(),
                    });
                }
                coref.push(constraint);
            }
        }

        Ok(FieldDefinition {
            name,
            scheme,
            emphasis_start,
            optional_branches,
            coref,
        })
    }
}

pub fn parse_field(text: &str) -> Result<FieldDefinition, FieldError> {
    FieldDefinition::from_sexp(&sexpr::read_one(text)?)
}

/// Canonical single-line form; `parse_field(&print_field(d)) == Ok(d)`.
pub fn print_field(field: &FieldDefinition) -> String {
    field.to_sexp().to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Referent {
    pub name: String,
    /// Semantic sort such as `person` or `object`.
    pub sort: String,
}

impl Referent {
    pub fn new(name: impl Into<String>, sort: impl Into<String>) -> Self {
        Referent {
            name: name.into(),
            sort: sort.into(),
        }
    }
}

/// Assignment of referents to scheme variables, e.g.
/// `(binding (?a he person) (?a1 him person) ...)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Binding(IndexMap<Variable, Referent>);

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    pub fn with(mut self, var: &str, name: &str, sort: &str) -> Self {
        self.insert(Variable::new(var), Referent::new(name, sort));
        self
    }

    pub fn insert(&mut self, var: Variable, referent: Referent) {
        self.0.insert(var, referent);
    }

    pub fn get(&self, var: &Variable) -> Option<&Referent> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Referent)> {
        self.0.iter()
    }

    pub fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        let mut binding = Binding::new();
        for entry in term.expect_form("binding")? {
            match entry.expect_list("(?var referent sort)")? {
                [var, name, sort] => {
                    let var = Variable::from_sexp(var)?;
                    if binding.0.contains_key(&var) {
                        return Err(SyntaxError::new(entry.pos, format!("{var} bound twice")));
                    }
                    binding.insert(
                        var,
                        Referent::new(name.expect_atom("referent")?, sort.expect_atom("sort")?),
                    );
                }
                _ => return Err(SyntaxError::new(entry.pos, "expected (?var referent sort)")),
            }
        }
        Ok(binding)
    }

    pub fn to_sexp(&self) -> Sexp {
        let mut items = vec![Sexp::atom("binding")];
        items.extend(self.0.iter().map(|(v, r)| {
            Sexp::list(vec![
                v.to_sexp(),
                Sexp::atom(r.name.clone()),
                Sexp::atom(r.sort.clone()),
            ])
        }));
        Sexp::list(items)
    }
}

pub fn parse_binding(text: &str) -> Result<Binding, SyntaxError> {
    Binding::from_sexp(&sexpr::read_one(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Missing(Variable),
    UnknownVariable(Variable),
    NotEqual(Variable, Variable),
    NotDistinct(Variable, Variable),
    NoAlternative(Vec<(Variable, Variable)>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Missing(v) => write!(f, "{v} is not bound"),
            Violation::UnknownVariable(v) => write!(f, "{v} is not a variable of the scheme"),
            Violation::NotEqual(v, w) => write!(f, "ref({v}) and ref({w}) must be equal"),
            Violation::NotDistinct(v, w) => write!(f, "ref({v}) and ref({w}) must be different"),
            Violation::NoAlternative(alts) => {
                write!(f, "none of")?;
                for (v, w) in alts {
                    write!(f, " ref({v})=ref({w})")?;
                }
                write!(f, " holds")
            }
        }
    }
}

/// Checks coverage and every coreference constraint. Constraints touching an
/// unbound variable are skipped; the missing variable is reported instead.
pub fn validate_binding(field: &FieldDefinition, binding: &Binding) -> Result<(), Vec<Violation>> {
    let vars = field.scheme.variables();
    let mut violations: Vec<Violation> = vars
        .iter()
        .filter(|v| binding.get(v).is_none())
        .cloned()
        .map(Violation::Missing)
        .collect();
    violations.extend(
        binding
            .iter()
            .map(|(v, _)| v)
            .filter(|v| !vars.contains(v))
            .cloned()
            .map(Violation::UnknownVariable),
    );

    let same = |v: &Variable, w: &Variable| -> Option<bool> {
        Some(binding.get(v)?.name == binding.get(w)?.name)
    };
    for c in &field.coref {
        match c {
            Coref::Equal(v, w) => {
                if same(v, w) == Some(false) {
                    violations.push(Violation::NotEqual(v.clone(), w.clone()));
                }
            }
            Coref::Distinct(v, w) => {
                if same(v, w) == Some(true) {
                    violations.push(Violation::NotDistinct(v.clone(), w.clone()));
                }
            }
            Coref::OneOf(alts) => {
                let results: Vec<Option<bool>> = alts.iter().map(|(v, w)| same(v, w)).collect();
                if results.iter().all(|r| *r == Some(false)) {
                    violations.push(Violation::NoAlternative(alts.clone()));
                }
            }
        }
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shipped;

    fn cop() -> FieldDefinition {
        parse_field(shipped::FIELD).unwrap()
    }

    #[test]
    fn shipped_field_parses() {
        let f = cop();
        assert_eq!(f.name, "change-of-possession");
        assert_eq!(f.emphasis_start, NodePath::new(vec![2]));
        assert_eq!(f.scheme.node(&f.emphasis_start).unwrap().predicate, "et");
        assert_eq!(f.optional_branch_paths(), vec![NodePath::new(vec![1])]);
        assert_eq!(f.scheme.nodes().len(), 8);
        let names: Vec<String> = f.scheme.variables().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["?a", "?a1", "?a2", "?a3", "?a4"]);
    }

    #[test]
    fn predicates_are_classified() {
        let f = cop();
        let kinds: Vec<(String, PredicateKind)> = f
            .scheme
            .predicates()
            .into_iter()
            .map(|p| (p.name, p.kind))
            .collect();
        use PredicateKind::*;
        assert_eq!(
            kinds,
            [
                ("cause".into(), Propositional),
                ("act".into(), Basic),
                ("et".into(), Propositional),
                ("bec".into(), Propositional),
                ("have".into(), Basic),
                ("not".into(), Propositional),
            ]
        );
    }

    #[test]
    fn minimal_field() {
        let f = parse_field("(field f (scheme (have ?x ?y)) (emphasis-start ()))").unwrap();
        assert_eq!(f.scheme.nodes().len(), 1);
        assert!(f.emphasis_start.is_root());
        assert!(f.optional_branch_paths().is_empty());
    }

    #[test]
    fn start_path_out_of_range() {
        let err = parse_field(
            "(field f (scheme (cause (act ?a) (have ?b ?c))) (emphasis-start (3)))",
        )
        .unwrap_err();
        assert!(matches!(err, FieldError::PathOutOfRange { .. }), "{err}");
        // a path into a variable is not a proposition either
        let err = parse_field("(field f (scheme (have ?x ?y)) (emphasis-start (1)))").unwrap_err();
        assert!(matches!(err, FieldError::PathOutOfRange { .. }), "{err}");
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_field("(field f\n  (scheme (have ?x ?y)\n  (emphasis-start ())").unwrap_err();
        match err {
            FieldError::Syntax(e) => assert_eq!(e.pos, Pos { line: 2, column: 3 }),
            other => panic!("unexpected {other}"),
        }
        let err = parse_field("(field f (scheme (have ?x y)) (emphasis-start ()))").unwrap_err();
        match err {
            FieldError::Syntax(e) => assert_eq!(e.pos, Pos { line: 1, column: 27 }),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn mixed_arguments_are_an_unknown_kind() {
        let err = parse_field("(field f (scheme (p ?x (q ?y))) (emphasis-start ()))").unwrap_err();
        assert!(matches!(err, FieldError::UnknownKind { .. }), "{err}");
    }

    #[test]
    fn inconsistent_and_duplicate() {
        let err =
            parse_field("(field f (scheme (p (p ?x))) (emphasis-start ()))").unwrap_err();
        assert!(
            matches!(err, FieldError::Scheme { source: SchemeError::InconsistentKind(_), .. }),
            "{err}"
        );
        let err = parse_field("(field f (scheme (et (p ?x) (q ?x))) (emphasis-start ()))")
            .unwrap_err();
        assert!(
            matches!(err, FieldError::Scheme { source: SchemeError::DuplicateVariable(_), .. }),
            "{err}"
        );
    }

    #[test]
    fn dangling_constraint_variable() {
        let err = parse_field(
            "(field f (scheme (have ?x ?y)) (emphasis-start ()) (coref (= ?x ?z)))",
        )
        .unwrap_err();
        assert!(
            matches!(&err, FieldError::DanglingVariable { var, .. } if var.name() == "z"),
            "{err}"
        );
    }

    #[test]
    fn print_is_canonical_and_round_trips() {
        let f = cop();
        let text = print_field(&f);
        assert_eq!(
            text,
            "(field change-of-possession (scheme (cause (act ?a) (et (bec (have ?a1 ?a2)) \
             (bec (not (have ?a3 ?a4)))))) (emphasis-start (2)) (coref (distinct ?a1 ?a3) \
             (= ?a2 ?a4) (one-of (= ?a ?a1) (= ?a ?a3))))"
        );
        assert_eq!(print_field(&f), text);
        let back = parse_field(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.emphasis_start, f.emphasis_start);
    }

    #[test]
    fn explicit_optional_branch_round_trips() {
        let text = "(field f (scheme (cause (act ?a) (et (have ?b ?c)))) (emphasis-start (2)) (optional-branch))";
        let f = parse_field(text).unwrap();
        assert_eq!(f.optional_branches, Some(vec![]));
        assert!(f.optional_branch_paths().is_empty());
        assert_eq!(print_field(&f), text);
    }

    #[test]
    fn node_paths_resolve() {
        let f = cop();
        for (path, node) in f.scheme.nodes() {
            assert_eq!(f.scheme.node(&path), Some(node));
            let again = NodePath::from_sexp(&sexpr::read_one(&path.to_string()).unwrap()).unwrap();
            assert_eq!(again, path);
        }
        assert_eq!(
            f.scheme.node(&NodePath::new(vec![2, 2, 1, 1])).unwrap().predicate,
            "have"
        );
    }

    fn she_key() -> Binding {
        Binding::new()
            .with("a", "she", "person")
            .with("a1", "x1", "person")
            .with("a2", "key", "object")
            .with("a3", "she", "person")
            .with("a4", "key", "object")
    }

    #[test]
    fn binding_ok_via_second_alternative() {
        assert_eq!(validate_binding(&cop(), &she_key()), Ok(()));
    }

    #[test]
    fn binding_distinct_violated() {
        let b = Binding::new()
            .with("a", "bob", "person")
            .with("a1", "bob", "person")
            .with("a2", "key", "object")
            .with("a3", "bob", "person")
            .with("a4", "key", "object");
        let v = validate_binding(&cop(), &b).unwrap_err();
        assert_eq!(
            v,
            vec![Violation::NotDistinct(Variable::new("a1"), Variable::new("a3"))]
        );
    }

    #[test]
    fn binding_equal_violated() {
        let b = she_key().with("a4", "invitation", "object");
        let v = validate_binding(&cop(), &b).unwrap_err();
        assert_eq!(
            v,
            vec![Violation::NotEqual(Variable::new("a2"), Variable::new("a4"))]
        );
    }

    #[test]
    fn binding_one_of_violated() {
        let b = she_key().with("a", "carl", "person");
        let v = validate_binding(&cop(), &b).unwrap_err();
        assert!(matches!(v.as_slice(), [Violation::NoAlternative(_)]));
    }

    #[test]
    fn missing_variables_reported_individually() {
        let b = Binding::new().with("a", "she", "person");
        let v = validate_binding(&cop(), &b).unwrap_err();
        let missing: Vec<_> = v
            .iter()
            .filter_map(|x| match x {
                Violation::Missing(v) => Some(v.name().to_string()),
                _ => None,
            })
            .collect();
        assert_eq!(missing, ["a1", "a2", "a3", "a4"]);
    }

    #[test]
    fn binding_file_round_trips() {
        let text = "(binding (?a he person) (?a1 him person) (?a2 invitation object))";
        let b = parse_binding(text).unwrap();
        assert_eq!(b.to_sexp().to_string(), text);
        assert_eq!(b.get(&Variable::new("a1")).unwrap().sort, "person");
        assert!(parse_binding("(binding (?a he person) (?a she person))").is_err());
    }
}
