//! Template realizer for German declarative main clauses.
//!
//! Constituent order is fixed: nominative, finite verb, dative, accusative,
//! genitive, prepositional phrases, separable prefix. The last NP or PP is
//! the focus position.

use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::discourse::EmphasisQ;
use crate::emphasis::{Case, Realized, SemanticForm};
use crate::lexicon::VerbEntry;
use crate::scheme::{Binding, Variable};
use crate::sexpr::{self, Sexp, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gender {
    Masc,
    Fem,
    Neut,
}

impl Gender {
    fn parse(term: &Sexp) -> Result<Self, SyntaxError> {
        match term.as_atom() {
            Some("masc") => Ok(Gender::Masc),
            Some("fem") => Ok(Gender::Fem),
            Some("neut") => Ok(Gender::Neut),
            _ => Err(SyntaxError::new(term.pos, format!("expected gender, found {term}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    Def,
    Indef,
}

impl Definiteness {
    fn parse(term: &Sexp) -> Result<Self, SyntaxError> {
        match term.as_atom() {
            Some("def") => Ok(Definiteness::Def),
            Some("indef") => Ok(Definiteness::Indef),
            _ => Err(SyntaxError::new(
                term.pos,
                format!("expected def or indef, found {term}"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NpKind {
    Noun {
        lemma: String,
        definiteness: Definiteness,
    },
    Pronoun,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpEntry {
    pub kind: NpKind,
    pub gender: Gender,
}

/// Singular NP to inflect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NpSpec {
    pub kind: NpKind,
    pub gender: Gender,
    pub case: Case,
}

impl NpEntry {
    pub fn spec(&self, case: Case) -> NpSpec {
        NpSpec {
            kind: self.kind.clone(),
            gender: self.gender,
            case,
        }
    }
}

/// Referent key to NP: `(np key "Schlüssel" masc def)`, `(pronoun he masc)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NpLexicon(IndexMap<String, NpEntry>);

impl NpLexicon {
    pub fn get(&self, key: &str) -> Option<&NpEntry> {
        self.0.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, SyntaxError> {
        let mut lex = NpLexicon::default();
        for term in terms {
            let (key, entry) = match (term.head(), term.as_list().unwrap_or_default()) {
                (Some("np"), [_, key, lemma, gender, def]) => (
                    key.expect_atom("key")?,
                    NpEntry {
                        kind: NpKind::Noun {
                            lemma: lemma
                                .as_str()
                                .ok_or_else(|| SyntaxError::new(lemma.pos, "expected lemma string"))?
                                .to_string(),
                            definiteness: Definiteness::parse(def)?,
                        },
                        gender: Gender::parse(gender)?,
                    },
                ),
                (Some("pronoun"), [_, key, gender]) => (
                    key.expect_atom("key")?,
                    NpEntry {
                        kind: NpKind::Pronoun,
                        gender: Gender::parse(gender)?,
                    },
                ),
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        format!("expected (np key \"lemma\" gender def) or (pronoun key gender), found {term}"),
                    ))
                }
            };
            if lex.0.insert(key.to_string(), entry).is_some() {
                return Err(SyntaxError::new(term.pos, format!("{key} defined twice")));
            }
        }
        Ok(lex)
    }
}

pub fn parse_np_lexicon(text: &str) -> Result<NpLexicon, SyntaxError> {
    NpLexicon::from_sexps(&sexpr::read_all(text)?)
}

/// Articles and personal pronouns.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MorphTable {
    articles: HashMap<(Definiteness, Gender, Case), String>,
    pronouns: HashMap<(Gender, Case), String>,
}

impl MorphTable {
    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, SyntaxError> {
        let mut table = MorphTable::default();
        for term in terms {
            let form = |t: &Sexp| -> Result<String, SyntaxError> {
                t.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| SyntaxError::new(t.pos, "expected form string"))
            };
            match (term.head(), term.as_list().unwrap_or_default()) {
                (Some("article"), [_, def, gender, case, f]) => {
                    table.articles.insert(
                        (Definiteness::parse(def)?, Gender::parse(gender)?, Case::from_sexp(case)?),
                        form(f)?,
                    );
                }
                (Some("pronoun-form"), [_, gender, case, f]) => {
                    table
                        .pronouns
                        .insert((Gender::parse(gender)?, Case::from_sexp(case)?), form(f)?);
                }
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        format!("unexpected morphology entry {term}"),
                    ))
                }
            }
        }
        Ok(table)
    }
}

pub fn parse_morph_table(text: &str) -> Result<MorphTable, SyntaxError> {
    MorphTable::from_sexps(&sexpr::read_all(text)?)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("no morphology for {0:?}")]
    MissingMorphology(NpSpec),
    #[error("referent {0} has no entry in the NP lexicon")]
    UnknownReferent(String),
    #[error("{0} has no referent in the binding")]
    Unbound(Variable),
    #[error("verb {0} does not lexicalize this semantic form")]
    VerbMismatch(String),
    #[error("form has no nominative")]
    NoSubject,
    #[error("non-emphatic {label} role of {var} has no prepositional realization")]
    UnsupportedOblique { var: Variable, label: String },
    #[error("ordering conflict: the emphatic recipient would occupy the focus position")]
    OrderingConflict,
}

pub fn inflect_np(spec: &NpSpec, table: &MorphTable) -> Result<String, RealizeError> {
    let missing = || RealizeError::MissingMorphology(spec.clone());
    match &spec.kind {
        NpKind::Pronoun => table
            .pronouns
            .get(&(spec.gender, spec.case))
            .cloned()
            .ok_or_else(missing),
        NpKind::Noun {
            lemma,
            definiteness,
        } => {
            let article = table
                .articles
                .get(&(*definiteness, spec.gender, spec.case))
                .ok_or_else(missing)?;
            Ok(format!("{article} {lemma}"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Slot {
    Dative,
    Accusative,
    Genitive,
    Prepositional,
}

/// A realized clause, kept in parts so callers can inspect the word order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub subject: String,
    pub finite: String,
    /// Post-verbal constituents in surface order, with the variable each one
    /// realizes and its realization.
    pub constituents: Vec<(Variable, Realized, String)>,
    pub prefix: Option<String>,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut words = vec![self.subject.clone(), self.finite.clone()];
        words.extend(self.constituents.iter().map(|(_, _, s)| s.clone()));
        words.extend(self.prefix.clone());
        let sentence = words.join(" ");
        let mut chars = sentence.chars();
        if let Some(first) = chars.next() {
            write!(f, "{}{}", first.to_uppercase(), chars.as_str())?;
        }
        f.write_str(".")
    }
}

pub fn realize_clause(
    form: &SemanticForm,
    verb: &VerbEntry,
    binding: &Binding,
    nps: &NpLexicon,
    morph: &MorphTable,
    emphasis_q: Option<EmphasisQ>,
) -> Result<Clause, RealizeError> {
    if !verb.matches(form) {
        return Err(RealizeError::VerbMismatch(verb.lemma.clone()));
    }
    let np_for = |var: &Variable, case: Case| -> Result<String, RealizeError> {
        let referent = binding
            .get(var)
            .ok_or_else(|| RealizeError::Unbound(var.clone()))?;
        let entry = nps
            .get(&referent.name)
            .ok_or_else(|| RealizeError::UnknownReferent(referent.name.clone()))?;
        inflect_np(&entry.spec(case), morph)
    };

    let mut subject = None;
    let mut rest: Vec<(Slot, Variable, Realized, String)> = Vec::new();
    for (var, realized) in form.realization.iter() {
        let (slot, text) = match realized {
            Realized::Blocked => continue,
            Realized::Direct(Case::Nominative) => {
                subject = Some(np_for(var, Case::Nominative)?);
                continue;
            }
            Realized::Direct(Case::Dative) => (Slot::Dative, np_for(var, Case::Dative)?),
            Realized::Direct(Case::Accusative) => (Slot::Accusative, np_for(var, Case::Accusative)?),
            Realized::Direct(Case::Genitive) => (Slot::Genitive, np_for(var, Case::Genitive)?),
            Realized::Oblique { preposition, case } => {
                let label = form.case_frame.get(var).map(|r| r.label.as_str()).unwrap_or("");
                if matches!(label, "agens" | "source") {
                    return Err(RealizeError::UnsupportedOblique {
                        var: var.clone(),
                        label: label.to_string(),
                    });
                }
                (Slot::Prepositional, format!("{preposition} {}", np_for(var, *case)?))
            }
        };
        rest.push((slot, var.clone(), realized.clone(), text));
    }
    rest.sort_by_key(|(slot, ..)| *slot);

    if emphasis_q == Some(EmphasisQ::Emphatic)
        && matches!(rest.last(), Some((Slot::Dative, ..)))
    {
        return Err(RealizeError::OrderingConflict);
    }

    Ok(Clause {
        subject: subject.ok_or(RealizeError::NoSubject)?,
        finite: verb.finite.clone(),
        constituents: rest.into_iter().map(|(_, v, r, s)| (v, r, s)).collect(),
        prefix: verb.separable_prefix.clone(),
    })
}

/// Realizes `form` with `verb` as a declarative sentence.
pub fn realize(
    form: &SemanticForm,
    verb: &VerbEntry,
    binding: &Binding,
    nps: &NpLexicon,
    morph: &MorphTable,
    emphasis_q: Option<EmphasisQ>,
) -> Result<String, RealizeError> {
    realize_clause(form, verb, binding, nps, morph, emphasis_q).map(|c| c.to_string())
}
