//! Grammars shipped with the crate.

pub const BLINK: &str = include_str!("../fixtures/blink.stag");
pub const EIGHT: &str = include_str!("../fixtures/eight.stag");
pub const SMOKE: &str = include_str!("../fixtures/smoke.stag");
pub const ABCD: &str = include_str!("../fixtures/abcd.tag");

use crate::format::{load_grammar, load_tag};
use crate::synchronous::SynchronousGrammar;
use crate::tree::TagGrammar;

pub fn blink() -> SynchronousGrammar {
    load_grammar(BLINK).expect("fixture loads")
}

pub fn eight() -> SynchronousGrammar {
    load_grammar(EIGHT).expect("fixture loads")
}

pub fn smoke() -> SynchronousGrammar {
    load_grammar(SMOKE).expect("fixture loads")
}

pub fn abcd() -> TagGrammar {
    load_tag(ABCD).expect("fixture loads")
}
