//! Reduction of a synchronous grammar to a tree-local multicomponent TAG.
//!
//! Each pair becomes a two-tree set. Left and right nonterminals are renamed
//! apart with `_L` and `_R` suffixes, and every node may host only the sets
//! that could operate across one of its links. A fresh start symbol pairs
//! the two halves of each start pair.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::format::tree_to_string;
use crate::synchronous::SynchronousGrammar;
use crate::tree::{Allowed, Constraint, ElementaryTree, Label, Node, Tree, TreeAddress, TreeClass};

pub const START_SYMBOL: &str = "START";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeSet {
    pub name: String,
    pub trees: Vec<ElementaryTree>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCTagGrammar {
    pub name: String,
    pub sets: Vec<TreeSet>,
    pub start_symbol: String,
    pub start_trees: Vec<ElementaryTree>,
}

fn rename(node: &Node, suffix: &str) -> Node {
    Node {
        label: match &node.label {
            Label::Nonterminal(l) => Label::Nonterminal(format!("{l}{suffix}")),
            other => other.clone(),
        },
        children: node.children.iter().map(|c| rename(c, suffix)).collect(),
        ..node.clone()
    }
}

/// Sets allowed at `addr`, given the names of pairs operable on links there.
fn constrain(tree: &Tree, addr: &TreeAddress, sets: BTreeSet<String>) -> Tree {
    let node = tree.node_at(addr).expect("address from the same tree");
    let obligatory = node.constraint.obligatory;
    let allowed = if sets.is_empty() && !obligatory {
        Allowed::Nothing
    } else {
        Allowed::Only(sets)
    };
    let updated = Node {
        constraint: Constraint { allowed, obligatory },
        ..node.clone()
    };
    tree.with_subtree(addr, updated).expect("address from the same tree")
}

pub fn to_mctag(g: &SynchronousGrammar) -> MCTagGrammar {
    let mut sets = Vec::new();
    for p in &g.pairs {
        let mut halves = Vec::new();
        for (half, suffix, is_left) in [(&p.left, "_L", true), (&p.right, "_R", false)] {
            let mut tree = Tree::new(rename(&half.tree.root, suffix));
            for (addr, node) in half.tree.nodes() {
                if node.foot || node.label.nonterminal().is_none() {
                    continue;
                }
                let operable: BTreeSet<String> = p
                    .links
                    .iter()
                    .filter(|l| if is_left { l.left == addr } else { l.right == addr })
                    .flat_map(|l| g.pairs.iter().filter(move |q| p.admits(l, q)).map(|q| q.name.clone()))
                    .collect();
                tree = constrain(&tree, &addr, operable);
            }
            halves.push(ElementaryTree {
                name: format!("{}.{}", p.name, if is_left { "L" } else { "R" }),
                kind: half.kind,
                class: half.class,
                tree,
            });
        }
        sets.push(TreeSet {
            name: p.name.clone(),
            trees: halves,
        });
    }

    let start_trees = g
        .start_pairs()
        .map(|p| {
            let site = |label: String| Node::substitution_site(label).with_constraint(Constraint::selective([p.name.clone()]));
            let root = Node::nonterminal(
                START_SYMBOL,
                vec![
                    site(format!("{}_L", p.left.root_label())),
                    site(format!("{}_R", p.right.root_label())),
                ],
            )
            .with_constraint(Constraint::null());
            ElementaryTree::new(format!("start.{}", p.name), root, TreeClass::default()).expect("well-formed start tree")
        })
        .collect();

    MCTagGrammar {
        name: g.name.clone(),
        sets,
        start_symbol: START_SYMBOL.into(),
        start_trees,
    }
}

impl MCTagGrammar {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mctag {}", self.name);
        let _ = writeln!(out, "start-symbol {}", self.start_symbol);
        for t in &self.start_trees {
            let _ = writeln!(out, "start {} {}", t.name, tree_to_string(t));
        }
        for set in &self.sets {
            let _ = writeln!(out, "\nset {}", set.name);
            for t in &set.trees {
                let _ = writeln!(out, "  tree {} {}", t.name, tree_to_string(t));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn blink_shape() {
        let m = to_mctag(&fixtures::blink());
        assert_eq!(m.sets.len(), 4);
        assert_eq!(m.start_trees.len(), 1);
        let blink = m.sets.iter().find(|s| s.name == "blink").unwrap();
        let right = &blink.trees[1].tree;
        assert_eq!(right.root.constraint, Constraint::selective(["twice", "intentionally"]));
        assert_eq!(right.root.label, Label::Nonterminal("F_R".into()));
        let left = &blink.trees[0].tree;
        assert_eq!(left.root.constraint, Constraint::selective(["twice"]));
        assert_eq!(left.node_at(&[2].into()).unwrap().constraint, Constraint::selective(["intentionally"]));
        assert_eq!(left.node_at(&[1].into()).unwrap().constraint, Constraint::selective(["john"]));
    }

    #[test]
    fn linkless_pair() {
        let m = to_mctag(&fixtures::smoke());
        assert_eq!(m.sets.len(), 1);
        assert_eq!(m.start_trees.len(), 1);
        for t in &m.sets[0].trees {
            assert!(t.tree.nodes().iter().all(|(_, n)| n.label.nonterminal().is_none() || n.constraint == Constraint::null()));
        }
        assert!(m.to_text().contains("start start.hello (START:NA S_L↓:SA(hello) T_R↓:SA(hello))"));
    }
}
