//! Sentence Plan Language terms: construction from a classified semantic
//! form and a canonical single-line serialization with a matching reader.

use std::fmt;

use thiserror::Error;

use crate::discourse::EmphasisQ;
use crate::emphasis::SemanticForm;
use crate::lexicon::{UmRole, UmSelection};
use crate::scheme::{Binding, Variable};
use crate::sexpr::{self, Sexp, SexpKind, SyntaxError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Filler {
    Term(SplTerm),
    Value(String),
}

/// `(head / type :keyword filler ...)`. Keywords are stored without the
/// leading colon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplTerm {
    pub head_id: String,
    pub um_type: String,
    pub slots: Vec<(String, Filler)>,
}

impl SplTerm {
    pub fn new(head_id: impl Into<String>, um_type: impl Into<String>) -> Self {
        SplTerm {
            head_id: head_id.into(),
            um_type: um_type.into(),
            slots: Vec::new(),
        }
    }

    pub fn slot(&self, keyword: &str) -> Option<&Filler> {
        self.slots.iter().find(|(k, _)| k == keyword).map(|(_, f)| f)
    }

    fn to_sexp(&self) -> Sexp {
        let mut items = vec![
            Sexp::atom(self.head_id.clone()),
            Sexp::atom("/"),
            Sexp::atom(self.um_type.clone()),
        ];
        for (k, filler) in &self.slots {
            items.push(Sexp::atom(format!(":{k}")));
            items.push(match filler {
                Filler::Term(t) => t.to_sexp(),
                Filler::Value(v) => Sexp::atom(v.clone()),
            });
        }
        Sexp::list(items)
    }

    fn from_sexp(term: &Sexp) -> Result<Self, SyntaxError> {
        let items = term.expect_list("SPL term")?;
        let [head, slash, ty, rest @ ..] = items else {
            return Err(SyntaxError::new(term.pos, "expected (id / type ...)"));
        };
        if slash.as_atom() != Some("/") {
            return Err(SyntaxError::new(slash.pos, "expected '/'"));
        }
        let mut out = SplTerm::new(head.expect_atom("id")?, ty.expect_atom("type")?);
        if rest.len() % 2 != 0 {
            return Err(SyntaxError::new(term.pos, "keyword without filler"));
        }
        for pair in rest.chunks(2) {
            let keyword = pair[0]
                .as_atom()
                .and_then(|k| k.strip_prefix(':'))
                .filter(|k| !k.is_empty())
                .ok_or_else(|| SyntaxError::new(pair[0].pos, "expected :keyword"))?;
            let filler = match &pair[1].kind {
                SexpKind::List(_) => Filler::Term(SplTerm::from_sexp(&pair[1])?),
                SexpKind::Atom(a) => Filler::Value(a.clone()),
                SexpKind::Str(_) => {
                    return Err(SyntaxError::new(pair[1].pos, "strings are not SPL fillers"))
                }
            };
            out.slots.push((keyword.to_string(), filler));
        }
        Ok(out)
    }
}

impl fmt::Display for SplTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_sexp().fmt(f)
    }
}

pub fn serialize_spl(term: &SplTerm) -> String {
    term.to_string()
}

pub fn read_spl(text: &str) -> Result<SplTerm, SyntaxError> {
    SplTerm::from_sexp(&sexpr::read_one(text)?)
}

/// Token sequence of an SPL text, for layout-insensitive comparison.
pub fn spl_tokens(text: &str) -> Vec<String> {
    text.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplError {
    #[error("Upper Model role {0} is not verbalized in this form")]
    UnverbalizedRole(UmRole),
    #[error("{0} has no referent in the binding")]
    Unbound(Variable),
    #[error("emphasis-q {requested} contradicts the form, whose recipient is {actual}")]
    EmphasisMismatch {
        requested: EmphasisQ,
        actual: EmphasisQ,
    },
}

/// Builds the SPL term for `form`. `emphasis_q`, when given, is attached to
/// the recipient and must agree with the form's emphasis on it.
pub fn build_spl(
    event: &str,
    form: &SemanticForm,
    selection: &UmSelection,
    binding: &Binding,
    emphasis_q: Option<EmphasisQ>,
) -> Result<SplTerm, SplError> {
    let mut term = SplTerm::new(event, selection.um_type.clone());
    if emphasis_q.is_some() && !selection.roles.contains_key(&UmRole::Recipient) {
        return Err(SplError::UnverbalizedRole(UmRole::Recipient));
    }
    for (role, var) in &selection.roles {
        let referent = binding
            .get(var)
            .ok_or_else(|| SplError::Unbound(var.clone()))?;
        let mut filler = SplTerm::new(referent.name.clone(), referent.sort.clone());
        if *role == UmRole::Recipient {
            if let Some(q) = emphasis_q {
                let actual = if form.is_emphatic(var) {
                    EmphasisQ::Emphatic
                } else {
                    EmphasisQ::Nonemphatic
                };
                if actual != q {
                    return Err(SplError::EmphasisMismatch {
                        requested: q,
                        actual,
                    });
                }
                filler
                    .slots
                    .push(("emphasis-q".into(), Filler::Value(q.name().into())));
            }
        }
        term.slots
            .push((role.keyword().to_string(), Filler::Term(filler)));
    }
    Ok(term)
}
