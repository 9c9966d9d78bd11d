//! Fixtures for the pipeline benchmarks.

use emphase_core::discourse::{parse_script, replay, Replay};
use emphase_core::scheme::parse_binding;
use emphase_core::{shipped, Binding, Bundle};

pub struct Fixture {
    pub bundle: Bundle,
    pub send: Binding,
    pub lose: Binding,
    pub behrens: Replay,
}

impl Fixture {
    pub fn shipped() -> Self {
        Fixture {
            bundle: Bundle::shipped(),
            send: parse_binding(shipped::SEND_BINDING).expect("send binding"),
            lose: parse_binding(shipped::LOSE_BINDING).expect("lose binding"),
            behrens: replay(&parse_script(shipped::BEHRENS_SCRIPT).expect("script")).expect("replay"),
        }
    }
}
