//! Browser demo: transduction, step-by-step rewriting and a comparison of
//! the two semantics. Every export returns JSON text so the page stays a thin
//! shell and the logic can be tested natively.

use serde_json::{json, Value};
use stag::derivation::interpret;
use stag::fixtures;
use stag::format::load_grammar;
use stag::rewriting::{enumerate_rewriting, init_state, rewrite_step, DerivedPairState};
use stag::synchronous::{enumerate_natural, SynchronousGrammar};
use stag::transduce::transductions;
use wasm_bindgen::prelude::*;

pub mod svg;

/// Largest bound `compare` accepts; enumeration grows fast.
pub const MAX_BOUND: usize = 10;

fn error(msg: impl ToString) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Grammar text of a bundled fixture, or an empty string.
#[wasm_bindgen]
pub fn fixture(name: &str) -> String {
    match name {
        "blink" => fixtures::BLINK,
        "eight" => fixtures::EIGHT,
        "smoke" => fixtures::SMOKE,
        _ => "",
    }
    .to_string()
}

/// Every reading of `input` with its derivations and derived trees.
#[wasm_bindgen]
pub fn transduce(grammar: &str, input: &str) -> String {
    let g = match load_grammar(grammar) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    let toks: Vec<String> = input.split_whitespace().map(String::from).collect();
    let (lg, rg) = (g.left_grammar(), g.right_grammar());
    let alphabet = lg.terminals();
    if let Some(bad) = toks.iter().find(|t| !alphabet.contains(*t)) {
        return error(format!("unknown word {bad:?}"));
    }
    let mut readings = Vec::new();
    for t in transductions(&g, &toks) {
        let (dl, dr) = (t.derivation.left(), t.derivation.right());
        let (Ok(left), Ok(right)) = (interpret(&dl, &lg), interpret(&dr, &rg)) else {
            continue;
        };
        readings.push(json!({
            "output": t.output,
            "left_derivation": dl.canonical().to_string(),
            "right_derivation": dr.canonical().to_string(),
            "derivation_svg": svg::derivation_svg(&dl),
            "right_derivation_svg": svg::derivation_svg(&dr),
            "left_svg": svg::tree_svg(&left),
            "right_svg": svg::tree_svg(&right),
        }));
    }
    readings.sort_by(|a, b| a["output"].as_str().cmp(&b["output"].as_str()));
    json!({ "input": lg.render(&toks), "readings": readings }).to_string()
}

/// Natural and rewriting languages side by side. Natural counts derivation
/// nodes, rewriting counts steps, so `bound` nodes is `bound - 1` steps.
#[wasm_bindgen]
pub fn compare(grammar: &str, bound: usize) -> String {
    let g = match load_grammar(grammar) {
        Ok(g) => g,
        Err(e) => return error(e),
    };
    if !(1..=MAX_BOUND).contains(&bound) {
        return error(format!("bound must be between 1 and {MAX_BOUND}"));
    }
    let natural = enumerate_natural(&g, bound);
    let rewriting = enumerate_rewriting(&g, bound - 1);
    let rows = |set: Vec<&(String, String)>| -> Value { set.into_iter().map(|(l, r)| json!([l, r])).collect() };
    json!({
        "bound": bound,
        "natural": rows(natural.iter().collect()),
        "rewriting": rows(rewriting.iter().collect()),
        "rewriting_only": rows(rewriting.difference(&natural).collect()),
        "natural_only": rows(natural.difference(&rewriting).collect()),
    })
    .to_string()
}

/// Rewrites a derived pair one link at a time.
#[wasm_bindgen]
pub struct RewriteExplorer {
    grammar: SynchronousGrammar,
    history: Vec<(DerivedPairState, String)>,
}

#[wasm_bindgen]
impl RewriteExplorer {
    #[wasm_bindgen(constructor)]
    pub fn new(grammar: &str) -> Result<RewriteExplorer, String> {
        let grammar = load_grammar(grammar).map_err(|e| e.to_string())?;
        Ok(RewriteExplorer {
            grammar,
            history: Vec::new(),
        })
    }

    /// Names of the pairs a rewrite can begin with, as a JSON array.
    pub fn starts(&self) -> String {
        json!(self.grammar.start_pairs().map(|p| p.name.clone()).collect::<Vec<_>>()).to_string()
    }

    /// Discards the history and begins with `pair`.
    pub fn start(&mut self, pair: &str) -> Result<(), String> {
        let p = self.grammar.pair(pair).ok_or_else(|| format!("no pair named {pair}"))?;
        let s = init_state(p).map_err(|e| e.to_string())?;
        self.history = vec![(s, format!("start {pair}"))];
        Ok(())
    }

    /// Applicable steps as `[{link, pair}]`; `apply` takes an index into it.
    pub fn moves(&self) -> String {
        let Some((s, _)) = self.history.last() else { return "[]".into() };
        let moves: Vec<Value> = s
            .moves(&self.grammar)
            .into_iter()
            .map(|(i, p)| json!({ "link": s.links[i].to_string(), "pair": p.name }))
            .collect();
        Value::Array(moves).to_string()
    }

    pub fn apply(&mut self, index: usize) -> Result<(), String> {
        let (s, _) = self.history.last().ok_or("nothing started")?;
        let moves = s.moves(&self.grammar);
        let &(i, p) = moves.get(index).ok_or_else(|| format!("no move {index}"))?;
        let link = s.links[i].clone();
        let next = rewrite_step(s, &link, p).map_err(|e| e.to_string())?;
        self.history.push((next, format!("{} at {link}", p.name)));
        Ok(())
    }

    /// Steps back once; the starting pair itself is never removed.
    pub fn undo(&mut self) -> bool {
        if self.history.len() > 1 {
            self.history.pop();
            true
        } else {
            false
        }
    }

    /// The current pair as `{left, right, complete, steps, svg}`.
    pub fn state(&self) -> String {
        let Some((s, _)) = self.history.last() else {
            return error("nothing started");
        };
        let (left, right) = s.yields(&self.grammar);
        let links: Vec<_> = s
            .links
            .iter()
            .map(|l| (l.origin.clone(), l.link.left.clone(), l.link.right.clone()))
            .collect();
        json!({
            "left": left,
            "right": right,
            "complete": s.is_complete(),
            "steps": self.history.iter().map(|(_, step)| step.clone()).collect::<Vec<_>>(),
            "svg": svg::pair_svg(&s.left, &s.right, &links),
        })
        .to_string()
    }
}
