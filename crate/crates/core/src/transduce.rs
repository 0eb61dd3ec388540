//! Left string to left derivation to right derivation to right string.

use std::collections::BTreeSet;

use crate::derivation::{build, validate_node, DerivationNode, WellFormednessMode};
use crate::parser::parse;
use crate::synchronous::{check_paired, order_arcs, project_left, PairedArc, PairedDerivation, SynchronousGrammar};
use crate::tree::{check_site, TagGrammar};

/// Cap on derivation size when a parse forest is infinite.
pub const INFINITE_FOREST_LIMIT: usize = 16;

/// Every synchronous derivation whose left component is `d_left`.
pub fn map_paired(d_left: &DerivationNode, g: &SynchronousGrammar) -> Vec<PairedDerivation> {
    let right = g.right_grammar();
    let left = g.left_grammar();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for d in map_node(&d_left.canonical(), g, &left, &right) {
        if seen.insert(d.projection()) {
            out.push(d);
        }
    }
    out
}

fn map_node(d: &DerivationNode, g: &SynchronousGrammar, left: &TagGrammar, right: &TagGrammar) -> Vec<PairedDerivation> {
    let Some(pair) = g.pair(&d.tree) else {
        return Vec::new();
    };
    let children: Vec<Vec<PairedDerivation>> = d.children.iter().map(|a| map_node(&a.child, g, left, right)).collect();
    if children.iter().any(Vec::is_empty) {
        return Vec::new();
    }

    // assign each arc a distinct link whose left end is the arc's address and
    // whose right end admits the child's right half
    let mut assignments: Vec<Vec<usize>> = Vec::new();
    fn assign(
        d: &DerivationNode,
        pair: &crate::synchronous::TreePair,
        g: &SynchronousGrammar,
        k: usize,
        used: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == d.children.len() {
            out.push(used.clone());
            return;
        }
        let arc = &d.children[k];
        let Some(child) = g.pair(&arc.child.tree) else {
            return;
        };
        for (li, link) in pair.links.iter().enumerate() {
            if used.contains(&li) || link.left != arc.addr || !check_site(&pair.right.tree, &child.right, &link.right) {
                continue;
            }
            used.push(li);
            assign(d, pair, g, k + 1, used, out);
            used.pop();
        }
    }
    assign(d, pair, g, 0, &mut Vec::new(), &mut assignments);

    let mut out = Vec::new();
    for links in assignments {
        // cartesian product of the children's mappings
        let mut combos: Vec<Vec<PairedArc>> = vec![Vec::new()];
        for (k, arc) in d.children.iter().enumerate() {
            let link = &pair.links[links[k]];
            let mut next = Vec::new();
            for combo in &combos {
                for child in &children[k] {
                    let mut c = combo.clone();
                    c.push(PairedArc {
                        left_addr: arc.addr.clone(),
                        right_addr: link.right.clone(),
                        left_order: arc.order,
                        right_order: 0,
                        child: child.clone(),
                    });
                    next.push(c);
                }
            }
            combos = next;
        }
        for arcs in combos {
            // keep the left orders; permute only the right stacks
            for ordered in order_arcs(&arcs, left, right, WellFormednessMode::MultiAdjunction) {
                if ordered.iter().zip(&arcs).any(|(a, b)| a.left_order != b.left_order) {
                    continue;
                }
                let p = PairedDerivation {
                    pair: d.tree.clone(),
                    children: ordered,
                };
                if validate_node(&p.right(), right, WellFormednessMode::MultiAdjunction).is_ok() {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Right derivations paired with `d_left`, distinct up to sibling order.
pub fn map_derivation(d_left: &DerivationNode, g: &SynchronousGrammar) -> BTreeSet<DerivationNode> {
    map_paired(d_left, g).iter().map(|p| p.right().canonical()).collect()
}

/// One way a left string was transduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transduction {
    pub derivation: PairedDerivation,
    pub output: String,
}

pub fn transductions(g: &SynchronousGrammar, tokens: &[String]) -> Vec<Transduction> {
    let projected = project_left(g);
    let Ok(forest) = parse(&projected, tokens) else {
        return Vec::new();
    };
    let lefts = forest
        .derivations()
        .unwrap_or_else(|| forest.up_to(INFINITE_FOREST_LIMIT));
    let right = g.right_grammar();
    let mut out = Vec::new();
    for d in &lefts {
        for p in map_paired(d, g) {
            if check_paired(&p, g, WellFormednessMode::MultiAdjunction).is_err() {
                continue;
            }
            let output = right.render(&build(&p.right(), &right).yield_tokens());
            out.push(Transduction { derivation: p, output });
        }
    }
    out
}

/// Right strings for a left string, sorted and deduplicated.
pub fn transduce(g: &SynchronousGrammar, tokens: &[String]) -> BTreeSet<String> {
    transductions(g, tokens).into_iter().map(|t| t.output).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn blink_readings() {
        let g = fixtures::blink();
        assert_eq!(
            transduce(&g, &toks("John intentionally blinked twice")),
            BTreeSet::from(["int(twice(blink(john)))".to_string(), "twice(int(blink(john)))".to_string()])
        );
        assert_eq!(transduce(&g, &toks("John blinked")), BTreeSet::from(["blink(john)".to_string()]));
        assert!(transduce(&g, &toks("blinked John")).is_empty());
        assert!(transduce(&g, &toks("Mary blinked")).is_empty());
    }

    #[test]
    fn ambiguous_left_derivation_maps_twice() {
        let g = fixtures::blink();
        let d = DerivationNode::leaf("blink")
            .with_child([1], 0, DerivationNode::leaf("john"))
            .with_child(crate::tree::TreeAddress::root(), 0, DerivationNode::leaf("twice"))
            .with_child([2], 0, DerivationNode::leaf("intentionally"));
        assert_eq!(map_derivation(&d, &g).len(), 2);
        assert_eq!(map_derivation(&DerivationNode::leaf("john"), &g), BTreeSet::from([DerivationNode::leaf("john")]));
    }

    #[test]
    fn eight_adjunctions_do_not_map() {
        let g = fixtures::eight();
        let d = DerivationNode::leaf("alpha").with_child([1], 0, DerivationNode::leaf("beta1"));
        assert!(map_derivation(&d, &g).is_empty());
        assert_eq!(transduce(&g, &[]), BTreeSet::from([String::new()]));
    }
}
