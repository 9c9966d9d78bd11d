//! The change-of-possession data set bundled with the crate. The same files
//! live under `data/` for use with the command-line tool.

pub const FIELD: &str = include_str!("../data/change-of-possession.field");
pub const RULES: &str = include_str!("../data/rules/change-of-possession.rules");
pub const CASES: &str = include_str!("../data/default.cases");
pub const OBLIQUE: &str = include_str!("../data/change-of-possession.oblique");
pub const LEXICON: &str = include_str!("../data/change-of-possession.lexicon");
pub const UPPER_MODEL: &str = include_str!("../data/upper-model.um");
pub const MORPHOLOGY: &str = include_str!("../data/german.morph");
pub const NP_LEXICON: &str = include_str!("../data/german.np");
pub const SEND_BINDING: &str = include_str!("../data/bindings/send.bind");
pub const LOSE_BINDING: &str = include_str!("../data/bindings/lose.bind");
pub const BEHRENS_SCRIPT: &str = include_str!("../data/scripts/behrens.script");
