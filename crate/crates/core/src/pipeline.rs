//! End-to-end wiring: a loaded data bundle and the generation pipeline from
//! verb and binding to SPL and sentence.

use std::fmt;

use thiserror::Error;

use crate::discourse::{decide_emphasis_q, EmphasisQ, Replay};
use crate::emphasis::{
    enumerate_semantic_forms, parse_case_table, parse_oblique_table, CaseError, CaseTable,
    FormAtlas, FormError, ObliqueTable, SemanticForm,
};
use crate::lexicon::{
    check_lexicon, parse_lexicon, parse_upper_model, select_process_type, Lexicon, SelectionError,
    UmRole, UmSelection, UpperModel, VerbEntry,
};
use crate::realize::{parse_morph_table, parse_np_lexicon, realize, MorphTable, NpLexicon, RealizeError};
use crate::roles::{coverage_gaps, derive_case_frame, parse_rule_table, CaseFrame, RoleRuleTable};
use crate::scheme::{parse_field, validate_binding, Binding, FieldDefinition};
use crate::shipped;
use crate::spl::{build_spl, SplError, SplTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Load,
    Frame,
    Forms,
    Binding,
    Lexicon,
    Selection,
    Planning,
    Spl,
    Realization,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Load => "load",
            Stage::Frame => "frame",
            Stage::Forms => "forms",
            Stage::Binding => "binding",
            Stage::Lexicon => "lexicon",
            Stage::Selection => "selection",
            Stage::Planning => "planning",
            Stage::Spl => "spl",
            Stage::Realization => "realization",
        })
    }
}

/// A stage failure. `rule_gap` marks errors caused by incomplete rule or
/// morphology data rather than by malformed input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{stage}: {message}")]
pub struct PipelineError {
    pub stage: Stage,
    pub rule_gap: bool,
    pub message: String,
}

impl PipelineError {
    pub fn input(stage: Stage, message: impl fmt::Display) -> Self {
        PipelineError {
            stage,
            rule_gap: false,
            message: message.to_string(),
        }
    }

    pub fn gap(stage: Stage, message: impl fmt::Display) -> Self {
        PipelineError {
            stage,
            rule_gap: true,
            message: message.to_string(),
        }
    }
}

fn form_error(stage: Stage, e: FormError) -> PipelineError {
    match e {
        FormError::Case(CaseError::MissingOblique { .. } | CaseError::NoDirectCase { .. }) => {
            PipelineError::gap(stage, e)
        }
        other => PipelineError::input(stage, other),
    }
}

fn realize_error(e: RealizeError) -> PipelineError {
    match e {
        RealizeError::MissingMorphology(_) | RealizeError::UnknownReferent(_) => {
            PipelineError::gap(Stage::Realization, e)
        }
        other => PipelineError::input(Stage::Realization, other),
    }
}

fn selection_error(e: SelectionError) -> PipelineError {
    PipelineError::gap(Stage::Selection, e)
}

/// Source texts of a bundle, each with a name used in diagnostics.
#[derive(Debug, Clone)]
pub struct BundleSources<'a> {
    pub field: (&'a str, &'a str),
    pub rules: (&'a str, &'a str),
    pub cases: (&'a str, &'a str),
    pub oblique: (&'a str, &'a str),
    pub lexicon: (&'a str, &'a str),
    pub upper_model: (&'a str, &'a str),
    pub np_lexicon: (&'a str, &'a str),
    pub morphology: (&'a str, &'a str),
}

impl BundleSources<'static> {
    pub fn shipped() -> Self {
        BundleSources {
            field: ("change-of-possession.field", shipped::FIELD),
            rules: ("rules/change-of-possession.rules", shipped::RULES),
            cases: ("default.cases", shipped::CASES),
            oblique: ("change-of-possession.oblique", shipped::OBLIQUE),
            lexicon: ("change-of-possession.lexicon", shipped::LEXICON),
            upper_model: ("upper-model.um", shipped::UPPER_MODEL),
            np_lexicon: ("german.np", shipped::NP_LEXICON),
            morphology: ("german.morph", shipped::MORPHOLOGY),
        }
    }
}

/// Everything the pipeline needs for one field.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub field: FieldDefinition,
    pub rules: RoleRuleTable,
    pub cases: CaseTable,
    pub oblique: ObliqueTable,
    pub lexicon: Lexicon,
    pub upper_model: UpperModel,
    pub np_lexicon: NpLexicon,
    pub morphology: MorphTable,
}

impl Bundle {
    pub fn load(src: &BundleSources<'_>) -> Result<Self, PipelineError> {
        fn wrap<T, E: fmt::Display>(
            (name, text): (&str, &str),
            parse: impl FnOnce(&str) -> Result<T, E>,
        ) -> Result<T, PipelineError> {
            parse(text).map_err(|e| PipelineError::input(Stage::Load, format!("{name}: {e}")))
        }
        Ok(Bundle {
            field: wrap(src.field, parse_field)?,
            rules: wrap(src.rules, parse_rule_table)?,
            cases: wrap(src.cases, parse_case_table)?,
            oblique: wrap(src.oblique, parse_oblique_table)?,
            lexicon: wrap(src.lexicon, parse_lexicon)?,
            upper_model: wrap(src.upper_model, parse_upper_model)?,
            np_lexicon: wrap(src.np_lexicon, parse_np_lexicon)?,
            morphology: wrap(src.morphology, parse_morph_table)?,
        })
    }

    pub fn shipped() -> Self {
        Bundle::load(&BundleSources::shipped()).expect("shipped data set loads")
    }

    pub fn frame(&self) -> Result<CaseFrame, PipelineError> {
        derive_case_frame(&self.field.scheme, &self.rules)
            .map_err(|e| PipelineError::gap(Stage::Frame, e))
    }

    pub fn atlas(&self) -> Result<FormAtlas, PipelineError> {
        enumerate_semantic_forms(&self.field, &self.rules, &self.cases, &self.oblique)
            .map_err(|e| PipelineError::gap(Stage::Forms, e))
    }

    /// The semantic form a lexicon entry lexicalizes.
    pub fn form_of(&self, verb: &VerbEntry) -> Result<SemanticForm, PipelineError> {
        if verb.field_name != self.field.name {
            return Err(PipelineError::input(
                Stage::Lexicon,
                format!("{} belongs to field {}", verb.lemma, verb.field_name),
            ));
        }
        SemanticForm::build(
            &self.field,
            &self.frame()?,
            verb.emphasis_pattern.clone(),
            verb.blocking_pattern.clone(),
            &self.cases,
            &self.oblique,
        )
        .map_err(|e| form_error(Stage::Lexicon, e))
    }

    pub fn select(&self, form: &SemanticForm) -> Result<UmSelection, PipelineError> {
        select_process_type(form, &self.upper_model).map_err(selection_error)
    }

    /// Problems found when cross-checking the bundle.
    pub fn check(&self) -> Vec<PipelineError> {
        let mut problems: Vec<PipelineError> = coverage_gaps(&self.field.scheme, &self.rules)
            .into_iter()
            .map(|g| PipelineError::gap(Stage::Frame, g))
            .collect();
        let Ok(frame) = self.frame() else {
            return problems;
        };
        problems.extend(
            check_lexicon(
                &self.lexicon,
                &self.field,
                &frame,
                &self.cases,
                &self.oblique,
                &self.upper_model,
            )
            .into_iter()
            .map(|i| PipelineError::input(Stage::Lexicon, i)),
        );
        for entry in self.lexicon.entries.iter().filter(|e| e.field_name != self.field.name) {
            problems.push(PipelineError::input(
                Stage::Lexicon,
                format!("{}: unknown field {}", entry.lemma, entry.field_name),
            ));
        }
        problems
    }
}

/// Where the recipient's emphasis-q comes from.
#[derive(Debug, Clone, Copy)]
pub enum EmphasisSource<'a> {
    None,
    Flag(EmphasisQ),
    Discourse(&'a Replay),
}

#[derive(Debug, Clone)]
pub struct Generated<'b> {
    pub verb: &'b VerbEntry,
    pub form: SemanticForm,
    pub selection: UmSelection,
    pub emphasis_q: Option<EmphasisQ>,
    pub spl: SplTerm,
    pub sentence: String,
}

impl Bundle {
    /// Plans and realizes `lemma` for `binding`. When the lemma has several
    /// frames, the first one consistent with the recipient's emphasis-q wins.
    pub fn generate<'b>(
        &'b self,
        lemma: &str,
        binding: &Binding,
        emphasis: EmphasisSource<'_>,
    ) -> Result<Generated<'b>, PipelineError> {
        validate_binding(&self.field, binding).map_err(|violations| {
            PipelineError::input(
                Stage::Binding,
                violations
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        let candidates: Vec<&VerbEntry> = self.lexicon.entries.iter().filter(|e| e.lemma == lemma).collect();
        if candidates.is_empty() {
            return Err(PipelineError::input(
                Stage::Lexicon,
                format!("no lexicon entry for {lemma}"),
            ));
        }

        let mut last_err = None;
        for verb in candidates {
            let form = self.form_of(verb)?;
            let selection = self.select(&form)?;
            let emphasis_q = match emphasis {
                EmphasisSource::None => None,
                EmphasisSource::Flag(q) => Some(q),
                EmphasisSource::Discourse(replay) => {
                    let recipient = selection.roles.get(&UmRole::Recipient).ok_or_else(|| {
                        PipelineError::input(
                            Stage::Planning,
                            format!("{lemma} has no verbalized recipient to plan for"),
                        )
                    })?;
                    let referent = &binding
                        .get(recipient)
                        .expect("validated binding covers every variable")
                        .name;
                    Some(
                        decide_emphasis_q(referent, &replay.status_of(referent))
                            .map_err(|e| PipelineError::input(Stage::Planning, e))?,
                    )
                }
            };
            let spl = match build_spl(&verb.event, &form, &selection, binding, emphasis_q) {
                Ok(spl) => spl,
                Err(e @ SplError::EmphasisMismatch { .. }) => {
                    last_err = Some(PipelineError::input(Stage::Spl, e));
                    continue;
                }
                Err(e) => return Err(PipelineError::input(Stage::Spl, e)),
            };
            let sentence = realize(
                &form,
                verb,
                binding,
                &self.np_lexicon,
                &self.morphology,
                emphasis_q,
            )
            .map_err(realize_error)?;
            return Ok(Generated {
                verb,
                form,
                selection,
                emphasis_q,
                spl,
                sentence,
            });
        }
        Err(last_err.expect("at least one candidate was tried"))
    }
}
