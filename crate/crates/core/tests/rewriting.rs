use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stag::fixtures;
use stag::rewriting::{enumerate_rewriting, explore, init_state, rewrite_step, DerivedPairState, StateLink};
use stag::synchronous::SynchronousGrammar;
use stag::Error;

fn grammars() -> Vec<SynchronousGrammar> {
    vec![fixtures::blink(), fixtures::eight(), fixtures::smoke()]
}

/// Every link end names a nonterminal node that is neither a foot nor
/// already filled.
fn links_are_live(s: &DerivedPairState) -> bool {
    s.links_resolve()
        && s.links.iter().all(|l| {
            let (a, b) = (s.left.node_at(&l.link.left).unwrap(), s.right.node_at(&l.link.right).unwrap());
            a.label.nonterminal().is_some() && b.label.nonterminal().is_some() && !a.foot && !b.foot
        })
}

#[test]
fn auxiliary_pairs_cannot_start() {
    let g = fixtures::blink();
    assert!(matches!(init_state(g.pair("twice").unwrap()), Err(Error::State(_))));
}

#[test]
fn spent_links_cannot_be_reused() {
    let g = fixtures::blink();
    let s = init_state(g.pair("blink").unwrap()).unwrap();
    let link: StateLink = s.links.iter().find(|l| l.origin == "blink#3").unwrap().clone();
    let next = rewrite_step(&s, &link, g.pair("john").unwrap()).unwrap();
    assert_eq!(next.links.len(), 2);
    assert!(matches!(rewrite_step(&next, &link, g.pair("john").unwrap()), Err(Error::Link(_))));
    assert_eq!(next.yields(&g), ("John blinked".to_string(), "blink(john)".to_string()));
}

#[test]
fn blink_rewriting_readings() {
    let g = fixtures::blink();
    let found = enumerate_rewriting(&g, 3);
    let rights: Vec<&str> = found
        .iter()
        .filter(|(l, _)| l == "John intentionally blinked twice")
        .map(|(_, r)| r.as_str())
        .collect();
    assert_eq!(rights, ["int(twice(blink(john)))", "twice(int(blink(john)))"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn links_survive_random_steps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for g in grammars() {
            let starts: Vec<_> = g.start_pairs().collect();
            let mut s = init_state(starts.choose(&mut rng).unwrap()).unwrap();
            for _ in 0..8 {
                prop_assert!(links_are_live(&s));
                let moves = s.moves(&g);
                let Some(&(i, p)) = moves.choose(&mut rng) else { break };
                let link = s.links[i].clone();
                let before = s.links.len();
                let next = rewrite_step(&s, &link, p).unwrap();
                prop_assert_eq!(next.links.len(), before - 1 + p.links.len());
                prop_assert_eq!(next.left.size(), s.left.size() + p.left.tree.size() - 1);
                prop_assert_eq!(next.right.size(), s.right.size() + p.right.tree.size() - 1);
                s = next;
            }
        }
    }

    #[test]
    fn traces_replay_to_their_states(steps in 0usize..7) {
        for g in grammars() {
            for ((l, r), trace) in explore(&g, steps) {
                prop_assert!(trace.steps.len() <= steps);
                let state = trace.replay(&g).unwrap();
                prop_assert_eq!(&state, &trace.final_state);
                prop_assert!(state.is_complete());
                prop_assert_eq!(state.yields(&g), (l, r));
            }
        }
    }
}
