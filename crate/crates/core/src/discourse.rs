//! Discourse state and the textual decision behind dative shift: a recipient
//! that is both given and the hypertheme is realized with emphasis, and an
//! emphatic participant may not take the focus position.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::sexpr::{self, Sexp, SyntaxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmphasisQ {
    Emphatic,
    Nonemphatic,
}

impl EmphasisQ {
    pub fn name(self) -> &'static str {
        match self {
            EmphasisQ::Emphatic => "emphatic",
            EmphasisQ::Nonemphatic => "nonemphatic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "emphatic" => Some(EmphasisQ::Emphatic),
            "nonemphatic" => Some(EmphasisQ::Nonemphatic),
            _ => None,
        }
    }
}

impl fmt::Display for EmphasisQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Givenness {
    Given,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextualStatus {
    pub givenness: Givenness,
    pub is_hypertheme: bool,
    pub in_focus: bool,
}

impl fmt::Display for TextualStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.givenness {
            Givenness::Given => "given",
            Givenness::New => "new",
        })?;
        if self.is_hypertheme {
            f.write_str(" hypertheme")?;
        }
        if self.in_focus {
            f.write_str(" focus")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("hypertheme is already {current}; cannot redeclare it as {requested}")]
    HyperthemeRedeclared { current: String, requested: String },
    #[error(
        "{referent} is emphatic (given hypertheme) but was put in focus; \
         the focus position is reserved for new, non-thematic information"
    )]
    EmphaticFocus { referent: String },
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiscourseState {
    pub mentioned: BTreeSet<String>,
    pub hypertheme: Option<String>,
    pub sentence_index: usize,
}

impl DiscourseState {
    pub fn new() -> Self {
        Self::default()
    }
}

/// State after one more proposition. The hypertheme can be set once and
/// counts as mentioned.
pub fn update_discourse<S: AsRef<str>>(
    state: &DiscourseState,
    mentioned: &[S],
    hypertheme: Option<&str>,
) -> Result<DiscourseState, PlanError> {
    let mut next = state.clone();
    if let Some(h) = hypertheme {
        match &state.hypertheme {
            Some(current) if current != h => {
                return Err(PlanError::HyperthemeRedeclared {
                    current: current.clone(),
                    requested: h.to_string(),
                })
            }
            _ => {
                next.hypertheme = Some(h.to_string());
                next.mentioned.insert(h.to_string());
            }
        }
    }
    next.mentioned
        .extend(mentioned.iter().map(|m| m.as_ref().to_string()));
    next.sentence_index += 1;
    Ok(next)
}

pub fn status_of(state: &DiscourseState, referent: &str, in_focus: bool) -> TextualStatus {
    TextualStatus {
        givenness: if state.mentioned.contains(referent) {
            Givenness::Given
        } else {
            Givenness::New
        },
        is_hypertheme: state.hypertheme.as_deref() == Some(referent),
        in_focus,
    }
}

/// Emphatic iff the recipient is given and the hypertheme.
pub fn decide_emphasis_q(referent: &str, status: &TextualStatus) -> Result<EmphasisQ, PlanError> {
    if status.givenness == Givenness::Given && status.is_hypertheme {
        if status.in_focus {
            return Err(PlanError::EmphaticFocus {
                referent: referent.to_string(),
            });
        }
        Ok(EmphasisQ::Emphatic)
    } else {
        Ok(EmphasisQ::Nonemphatic)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptStep {
    Proposition {
        mentions: Vec<String>,
        hypertheme: Option<String>,
    },
    /// Caller's focus choice for the next generated clause.
    Focus(String),
}

/// A discourse script, one term per line:
///
/// ```text
/// (proposition (mentions him industrieprodukte) (hypertheme him))
/// (proposition (mentions him flaschen))
/// (focus invitation)
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Script {
    pub steps: Vec<ScriptStep>,
}

impl Script {
    pub fn from_sexps(terms: &[Sexp]) -> Result<Self, SyntaxError> {
        let mut steps = Vec::new();
        for term in terms {
            match term.head() {
                Some("proposition") => {
                    let mut mentions = Vec::new();
                    let mut hypertheme = None;
                    for clause in term.expect_form("proposition")? {
                        match clause.head() {
                            Some("mentions") => {
                                for r in clause.expect_form("mentions")? {
                                    mentions.push(r.expect_atom("referent")?.to_string());
                                }
                            }
                            Some("hypertheme") => match clause.expect_form("hypertheme")? {
                                [r] => hypertheme = Some(r.expect_atom("referent")?.to_string()),
                                _ => {
                                    return Err(SyntaxError::new(
                                        clause.pos,
                                        "hypertheme takes one referent",
                                    ))
                                }
                            },
                            _ => {
                                return Err(SyntaxError::new(
                                    clause.pos,
                                    format!("unexpected clause {clause}"),
                                ))
                            }
                        }
                    }
                    steps.push(ScriptStep::Proposition {
                        mentions,
                        hypertheme,
                    });
                }
                Some("focus") => match term.expect_form("focus")? {
                    [r] => steps.push(ScriptStep::Focus(r.expect_atom("referent")?.to_string())),
                    _ => return Err(SyntaxError::new(term.pos, "focus takes one referent")),
                },
                _ => {
                    return Err(SyntaxError::new(
                        term.pos,
                        format!("expected (proposition ...) or (focus ...), found {term}"),
                    ))
                }
            }
        }
        Ok(Script { steps })
    }
}

pub fn parse_script(text: &str) -> Result<Script, SyntaxError> {
    Script::from_sexps(&sexpr::read_all(text)?)
}

/// Outcome of replaying a script.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Replay {
    /// State after each proposition.
    pub trace: Vec<DiscourseState>,
    pub state: DiscourseState,
    /// Referents put in focus after the last proposition.
    pub focus: BTreeSet<String>,
}

impl Replay {
    pub fn status_of(&self, referent: &str) -> TextualStatus {
        status_of(&self.state, referent, self.focus.contains(referent))
    }
}

pub fn replay(script: &Script) -> Result<Replay, PlanError> {
    let mut out = Replay::default();
    for step in &script.steps {
        match step {
            ScriptStep::Proposition {
                mentions,
                hypertheme,
            } => {
                out.state = update_discourse(&out.state, mentions, hypertheme.as_deref())?;
                out.trace.push(out.state.clone());
                out.focus.clear();
            }
            ScriptStep::Focus(r) => {
                out.focus.insert(r.clone());
            }
        }
    }
    Ok(out)
}
