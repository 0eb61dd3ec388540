//! Derivation trees and their interpretation as derived trees.
//!
//! A derivation node names an elementary tree; each arc records the address
//! in the parent tree where the child operated and, for adjunctions sharing an
//! address, its position in the stack (0 = outermost in the derived tree).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::tree::{check_site, plant_stack, Node, TagGrammar, Tree, TreeAddress, TreeClass, TreeKind};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivationNode {
    pub tree: String,
    pub children: Vec<DerivationArc>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DerivationArc {
    pub addr: TreeAddress,
    pub order: u32,
    pub child: DerivationNode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum WellFormednessMode {
    /// At most one operation per address.
    Standard,
    /// Any number of modifier trees per address, at most one predicative.
    #[default]
    MultiAdjunction,
}

impl DerivationNode {
    pub fn leaf(tree: impl Into<String>) -> Self {
        DerivationNode {
            tree: tree.into(),
            children: Vec::new(),
        }
    }

    pub fn with_child(mut self, addr: impl Into<TreeAddress>, order: u32, child: DerivationNode) -> Self {
        self.children.push(DerivationArc {
            addr: addr.into(),
            order,
            child,
        });
        self
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|a| a.child.size()).sum::<usize>()
    }

    /// Children sorted by `(addr, order)` with orders renumbered densely per
    /// address, recursively. Equal derivations have equal canonical forms.
    pub fn canonical(&self) -> DerivationNode {
        let mut children: Vec<DerivationArc> = self
            .children
            .iter()
            .map(|a| DerivationArc {
                addr: a.addr.clone(),
                order: a.order,
                child: a.child.canonical(),
            })
            .collect();
        children.sort_by(|a, b| (&a.addr, a.order, &a.child).cmp(&(&b.addr, b.order, &b.child)));
        let mut rank = 0;
        for i in 0..children.len() {
            rank = if i > 0 && children[i - 1].addr == children[i].addr { rank + 1 } else { 0 };
            children[i].order = rank;
        }
        DerivationNode {
            tree: self.tree.clone(),
            children,
        }
    }

    /// Children that operate at `addr`, sorted by order.
    pub fn arcs_at(&self, addr: &TreeAddress) -> Vec<&DerivationArc> {
        let mut arcs: Vec<_> = self.children.iter().filter(|a| &a.addr == addr).collect();
        arcs.sort_by_key(|a| a.order);
        arcs
    }
}

impl fmt::Display for DerivationNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tree)?;
        if self.children.is_empty() {
            return Ok(());
        }
        let canon = self.canonical();
        f.write_str("[")?;
        for (i, arc) in canon.children.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let stacked = canon.children.iter().filter(|a| a.addr == arc.addr).count() > 1;
            if stacked {
                write!(f, "{}/{}:{}", arc.addr, arc.order, arc.child)?;
            } else {
                write!(f, "{}:{}", arc.addr, arc.child)?;
            }
        }
        f.write_str("]")
    }
}

/// Reports the first well-formedness violation. Unknown tree names surface as
/// [`Error::UnknownTree`], everything else as [`Error::Derivation`].
pub fn validate(d: &DerivationNode, grammar: &TagGrammar, mode: WellFormednessMode) -> Result<()> {
    validate_node(d, grammar, mode)?;
    for arc in &d.children {
        validate(&arc.child, grammar, mode)?;
    }
    Ok(())
}

/// The checks for `d` alone; children are only looked up, not validated.
pub(crate) fn validate_node(d: &DerivationNode, grammar: &TagGrammar, mode: WellFormednessMode) -> Result<()> {
    let tree = grammar.lookup(&d.tree)?;
    let ill = |msg: String| Err(Error::Derivation(format!("in {}: {msg}", d.tree)));

    let mut groups: BTreeMap<&TreeAddress, Vec<&DerivationArc>> = BTreeMap::new();
    for arc in &d.children {
        groups.entry(&arc.addr).or_default().push(arc);
    }

    for (addr, arcs) in &groups {
        let Some(node) = tree.tree.node_at(addr) else {
            return ill(format!("address {addr} does not resolve"));
        };
        let mut orders = BTreeSet::new();
        let mut predicative = Vec::new();
        for arc in arcs {
            let child = grammar.lookup(&arc.child.tree)?;
            if !check_site(&tree.tree, child, addr) {
                return ill(format!("{} cannot operate at {addr}", child.name));
            }
            if !orders.insert(arc.order) {
                return ill(format!("repeated order {} at {addr}", arc.order));
            }
            if child.kind == TreeKind::Auxiliary && child.class == TreeClass::Predicative {
                predicative.push(arc.order);
            }
        }
        if node.substitution && arcs.len() != 1 {
            return ill(format!("substitution site {addr} filled {} times", arcs.len()));
        }
        match mode {
            WellFormednessMode::Standard if arcs.len() > 1 => {
                return ill(format!("{} operations at {addr}", arcs.len()));
            }
            WellFormednessMode::MultiAdjunction if predicative.len() > 1 => {
                return ill(format!("{} predicative trees at {addr}", predicative.len()));
            }
            WellFormednessMode::MultiAdjunction => {
                if let Some(&p) = predicative.first() {
                    if orders.iter().next() != Some(&p) {
                        return ill(format!("predicative tree at {addr} is not outermost"));
                    }
                }
            }
            _ => {}
        }
    }

    for (addr, node) in tree.tree.nodes() {
        if groups.contains_key(&addr) {
            continue;
        }
        if node.substitution {
            return ill(format!("substitution site {addr} is unfilled"));
        }
        if node.constraint.obligatory {
            return ill(format!("obligatory adjunction at {addr} is not satisfied"));
        }
    }
    Ok(())
}

pub fn check_well_formed(d: &DerivationNode, grammar: &TagGrammar, mode: WellFormednessMode) -> Result<bool> {
    match validate(d, grammar, mode) {
        Ok(()) => Ok(true),
        Err(Error::Derivation(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// The derived tree a derivation specifies. The derivation must be
/// well-formed under multi-adjunction (which includes every standard one).
pub fn interpret(d: &DerivationNode, grammar: &TagGrammar) -> Result<Tree> {
    validate(d, grammar, WellFormednessMode::MultiAdjunction)?;
    Ok(build(d, grammar))
}

struct Operation {
    order: u32,
    derived: Tree,
}

/// Rebuilds the elementary tree bottom-up, wrapping each node with its stack of
/// adjoined trees from the innermost outward.
pub(crate) fn build(d: &DerivationNode, grammar: &TagGrammar) -> Tree {
    let tree = grammar.get(&d.tree).expect("validated derivation");
    let mut ops: BTreeMap<TreeAddress, Vec<Operation>> = BTreeMap::new();
    for arc in &d.children {
        ops.entry(arc.addr.clone()).or_default().push(Operation {
            order: arc.order,
            derived: build(&arc.child, grammar),
        });
    }
    for stack in ops.values_mut() {
        stack.sort_by_key(|op| op.order);
    }

    fn rebuild(node: &Node, path: &mut Vec<u32>, ops: &BTreeMap<TreeAddress, Vec<Operation>>) -> Node {
        let here = ops.get(&TreeAddress::new(path.clone()));
        if node.substitution {
            if let Some(stack) = here {
                return stack[0].derived.root.clone();
            }
        }
        let children = node
            .children
            .iter()
            .enumerate()
            .map(|(i, c)| {
                path.push(i as u32 + 1);
                let out = rebuild(c, path, ops);
                path.pop();
                out
            })
            .collect();
        let out = Node {
            label: node.label.clone(),
            constraint: node.constraint.clone(),
            substitution: node.substitution,
            foot: node.foot,
            children,
        };
        match here {
            Some(stack) => plant_stack(stack.iter().map(|op| &op.derived), out),
            None => out,
        }
    }

    Tree::new(rebuild(&tree.tree.root, &mut Vec::new(), &ops))
}

/// Adjoins a stack of derived auxiliary trees at one node: `stack[0]` ends up
/// outermost, each later entry beneath the previous one's foot, and the
/// original subtree beneath the last foot.
pub fn interpret_multi(host: &Tree, t: &TreeAddress, stack: &[(Tree, TreeClass)]) -> Result<Tree> {
    let node = host.node_at(t).ok_or_else(|| Error::Address(t.clone()))?;
    if node.substitution || node.foot || node.label.nonterminal().is_none() {
        return Err(Error::Site {
            addr: t.clone(),
            reason: "not an adjunction site".into(),
        });
    }
    let predicative: Vec<usize> = stack
        .iter()
        .enumerate()
        .filter(|(_, (_, c))| *c == TreeClass::Predicative)
        .map(|(i, _)| i)
        .collect();
    if predicative.len() > 1 {
        return Err(Error::MultiAdjunction(t.clone()));
    }
    if predicative.first().is_some_and(|&i| i != 0) {
        return Err(Error::Derivation(format!("predicative tree at {t} must be outermost")));
    }
    for (derived, _) in stack {
        if derived.foot_address().is_none() || derived.root.label != node.label {
            return Err(Error::Adjunction {
                tree: derived.root.label.to_string(),
                addr: t.clone(),
                reason: format!("not an auxiliary tree over {}", node.label),
            });
        }
    }
    host.with_subtree(t, plant_stack(stack.iter().map(|(derived, _)| derived), node.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{Constraint, ElementaryTree};

    fn grammar() -> TagGrammar {
        let s = ElementaryTree::new(
            "s",
            Node::nonterminal("S", vec![Node::substitution_site("NP"), Node::nonterminal("VP", vec![Node::terminal("v")])]),
            TreeClass::default(),
        )
        .unwrap();
        let np = ElementaryTree::new("np", Node::nonterminal("NP", vec![Node::terminal("n")]), TreeClass::default()).unwrap();
        let m1 = ElementaryTree::new("m1", Node::nonterminal("VP", vec![Node::foot_node("VP"), Node::terminal("x")]), TreeClass::Modifier).unwrap();
        let m2 = ElementaryTree::new("m2", Node::nonterminal("VP", vec![Node::terminal("y"), Node::foot_node("VP")]), TreeClass::Modifier).unwrap();
        let p1 = ElementaryTree::new("p1", Node::nonterminal("VP", vec![Node::foot_node("VP"), Node::terminal("p")]), TreeClass::Predicative).unwrap();
        let p2 = ElementaryTree::new("p2", Node::nonterminal("VP", vec![Node::foot_node("VP"), Node::terminal("q")]), TreeClass::Predicative).unwrap();
        let oa = ElementaryTree::new(
            "oa",
            Node::nonterminal("S", vec![Node::nonterminal("VP", vec![Node::terminal("v")]).with_constraint(Constraint::any().obligatory())]),
            TreeClass::default(),
        )
        .unwrap();
        TagGrammar::new("t", vec![s, np, m1, m2, p1, p2, oa]).unwrap()
    }

    fn base() -> DerivationNode {
        DerivationNode::leaf("s").with_child([1], 0, DerivationNode::leaf("np"))
    }

    #[test]
    fn single_node_without_sites_is_well_formed() {
        let g = grammar();
        assert!(check_well_formed(&DerivationNode::leaf("np"), &g, WellFormednessMode::Standard).unwrap());
        assert!(!check_well_formed(&DerivationNode::leaf("s"), &g, WellFormednessMode::Standard).unwrap());
        assert!(!check_well_formed(&DerivationNode::leaf("oa"), &g, WellFormednessMode::MultiAdjunction).unwrap());
        let d = DerivationNode::leaf("oa").with_child([1], 0, DerivationNode::leaf("m1"));
        assert!(check_well_formed(&d, &g, WellFormednessMode::Standard).unwrap());
    }

    #[test]
    fn unknown_tree_is_a_grammar_error() {
        let g = grammar();
        let d = DerivationNode::leaf("nope");
        assert_eq!(check_well_formed(&d, &g, WellFormednessMode::Standard), Err(Error::UnknownTree("nope".into())));
    }

    #[test]
    fn modes_differ_on_stacked_modifiers() {
        let g = grammar();
        let d = base()
            .with_child([2], 0, DerivationNode::leaf("m1"))
            .with_child([2], 1, DerivationNode::leaf("m2"));
        assert!(!check_well_formed(&d, &g, WellFormednessMode::Standard).unwrap());
        assert!(check_well_formed(&d, &g, WellFormednessMode::MultiAdjunction).unwrap());

        let two_pred = base()
            .with_child([2], 0, DerivationNode::leaf("p1"))
            .with_child([2], 1, DerivationNode::leaf("p2"));
        assert!(!check_well_formed(&two_pred, &g, WellFormednessMode::MultiAdjunction).unwrap());

        let pred_inner = base()
            .with_child([2], 0, DerivationNode::leaf("m1"))
            .with_child([2], 1, DerivationNode::leaf("p1"));
        assert!(!check_well_formed(&pred_inner, &g, WellFormednessMode::MultiAdjunction).unwrap());

        let dup_order = base()
            .with_child([2], 0, DerivationNode::leaf("m1"))
            .with_child([2], 0, DerivationNode::leaf("m2"));
        assert!(!check_well_formed(&dup_order, &g, WellFormednessMode::MultiAdjunction).unwrap());
    }

    #[test]
    fn stack_order_is_top_to_bottom() {
        let g = grammar();
        let d = base()
            .with_child([2], 0, DerivationNode::leaf("m1"))
            .with_child([2], 1, DerivationNode::leaf("m2"));
        // m1 outermost: (m2: y [v]) then x
        assert_eq!(interpret(&d, &g).unwrap().yield_tokens().join(" "), "n y v x");
        let swapped = base()
            .with_child([2], 1, DerivationNode::leaf("m1"))
            .with_child([2], 0, DerivationNode::leaf("m2"));
        assert_eq!(interpret(&swapped, &g).unwrap().yield_tokens().join(" "), "n y v x");
        // both orders put y left and x right of v; the bracketing differs
        assert_ne!(interpret(&d, &g).unwrap(), interpret(&swapped, &g).unwrap());
    }

    #[test]
    fn interpret_single_node_is_identity() {
        let g = grammar();
        let np = g.get("np").unwrap();
        assert_eq!(interpret(&DerivationNode::leaf("np"), &g).unwrap(), np.tree);
        let m1 = g.get("m1").unwrap();
        assert_eq!(interpret(&DerivationNode::leaf("m1"), &g).unwrap(), m1.tree);
    }

    #[test]
    fn interpret_multi_single_equals_adjoin() {
        let g = grammar();
        let host = interpret(&base(), &g).unwrap();
        let m1 = g.get("m1").unwrap();
        let via_stack = interpret_multi(&host, &[2].into(), &[(m1.tree.clone(), m1.class)]).unwrap();
        let via_adjoin = crate::tree::adjoin(&host, m1, &[2].into()).unwrap();
        assert_eq!(via_stack, via_adjoin);
    }

    #[test]
    fn interpret_multi_rejects_two_predicatives() {
        let g = grammar();
        let host = interpret(&base(), &g).unwrap();
        let p1 = g.get("p1").unwrap();
        let p2 = g.get("p2").unwrap();
        let stack = [(p1.tree.clone(), p1.class), (p2.tree.clone(), p2.class)];
        assert_eq!(
            interpret_multi(&host, &[2].into(), &stack),
            Err(Error::MultiAdjunction([2].into()))
        );
    }

    #[test]
    fn canonical_form_renumbers_orders() {
        let a = base()
            .with_child([2], 5, DerivationNode::leaf("m1"))
            .with_child([2], 9, DerivationNode::leaf("m2"));
        let b = DerivationNode::leaf("s")
            .with_child([2], 1, DerivationNode::leaf("m2"))
            .with_child([1], 0, DerivationNode::leaf("np"))
            .with_child([2], 0, DerivationNode::leaf("m1"));
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.to_string(), "s[1:np 2/0:m1 2/1:m2]");
    }
}
