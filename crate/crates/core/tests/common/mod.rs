//! Reference implementations the library is checked against. They are kept
//! deliberately naive: no charts, no memo beyond what keeps them finite.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rand::seq::IndexedRandom;
use rand::Rng;
use stag::derivation::{DerivationNode, WellFormednessMode};
use stag::mctag::MCTagGrammar;
use stag::synchronous::SynchronousGrammar;
use stag::tree::{
    adjoin_tree, remap, substitute_tree, Allowed, ElementaryTree, Label, Node, Side, TagGrammar, Tree, TreeAddress,
    TreeClass, TreeKind,
};

pub fn toks(s: &str) -> Vec<String> {
    s.split_whitespace().map(String::from).collect()
}

// ---------------------------------------------------------------------------
// brute-force derivation enumeration

enum Site {
    Substitution(TreeAddress, Vec<String>),
    Adjunction {
        addr: TreeAddress,
        options: Vec<String>,
        obligatory: bool,
    },
}

fn sites(g: &TagGrammar, t: &ElementaryTree) -> Vec<Site> {
    let mut out = Vec::new();
    for (addr, node) in t.tree.nodes() {
        let Label::Nonterminal(label) = &node.label else {
            continue;
        };
        if node.foot {
            continue;
        }
        let fits = |e: &&ElementaryTree| e.root_label() == label && node.constraint.permits(&e.name);
        if node.substitution {
            let options = g.trees.iter().filter(|e| e.kind == TreeKind::Initial).filter(fits).map(|e| e.name.clone()).collect();
            out.push(Site::Substitution(addr, options));
        } else {
            let options = g.trees.iter().filter(|e| e.kind == TreeKind::Auxiliary).filter(fits).map(|e| e.name.clone()).collect();
            out.push(Site::Adjunction {
                addr,
                options,
                obligatory: node.constraint.obligatory,
            });
        }
    }
    out
}

pub struct BruteForce<'g> {
    g: &'g TagGrammar,
    mode: WellFormednessMode,
    memo: HashMap<(String, usize), Vec<DerivationNode>>,
}

impl<'g> BruteForce<'g> {
    pub fn new(g: &'g TagGrammar, mode: WellFormednessMode) -> Self {
        BruteForce { g, mode, memo: HashMap::new() }
    }

    /// Well-formed derivations rooted at `tree` with exactly `size` nodes.
    pub fn rooted(&mut self, tree: &str, size: usize) -> Vec<DerivationNode> {
        let key = (tree.to_string(), size);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let mut out = Vec::new();
        if size > 0 {
            let t = self.g.get(tree).expect("known tree").clone();
            let sites = sites(self.g, &t);
            let mut arcs = Vec::new();
            let mut all = Vec::new();
            self.fill(&sites, 0, 0, size - 1, &mut arcs, &mut all);
            for arcs in all {
                let mut d = DerivationNode::leaf(tree);
                d.children = arcs;
                out.push(d.canonical());
            }
        }
        self.memo.insert(key, out.clone());
        out
    }

    fn fill(
        &mut self,
        sites: &[Site],
        i: usize,
        pos: u32,
        budget: usize,
        arcs: &mut Vec<stag::derivation::DerivationArc>,
        out: &mut Vec<Vec<stag::derivation::DerivationArc>>,
    ) {
        if i == sites.len() {
            if budget == 0 {
                out.push(arcs.clone());
            }
            return;
        }
        let (addr, options, can_stop, can_extend) = match &sites[i] {
            Site::Substitution(addr, options) => (addr, options, pos == 1, pos == 0),
            Site::Adjunction { addr, options, obligatory } => {
                let extend = match self.mode {
                    WellFormednessMode::Standard => pos == 0,
                    WellFormednessMode::MultiAdjunction => true,
                };
                (addr, options, !*obligatory || pos >= 1, extend)
            }
        };
        if can_stop {
            self.fill(sites, i + 1, 0, budget, arcs, out);
        }
        if !can_extend {
            return;
        }
        for name in options.clone() {
            let class = self.g.get(&name).unwrap().class;
            let aux = self.g.get(&name).unwrap().kind == TreeKind::Auxiliary;
            if aux && class == TreeClass::Predicative && pos > 0 {
                continue;
            }
            for s in 1..=budget {
                for child in self.rooted(&name, s) {
                    arcs.push(stag::derivation::DerivationArc {
                        addr: addr.clone(),
                        order: pos,
                        child,
                    });
                    self.fill(sites, i, pos + 1, budget - s, arcs, out);
                    arcs.pop();
                }
            }
        }
    }

    /// Complete derivations (from start trees) with at most `max` nodes.
    pub fn complete(&mut self, max: usize) -> BTreeSet<DerivationNode> {
        let roots: Vec<String> = self
            .g
            .trees
            .iter()
            .filter(|t| t.kind == TreeKind::Initial)
            .filter(|t| self.g.start.as_deref().is_none_or(|s| s == t.root_label()))
            .map(|t| t.name.clone())
            .collect();
        let mut out = BTreeSet::new();
        for size in 1..=max {
            for r in &roots {
                out.extend(self.rooted(r, size));
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// sequential interpretation

/// Derived tree obtained by performing the operations one at a time, top
/// down, tracking where every elementary node currently sits.
pub fn sequential(d: &DerivationNode, g: &TagGrammar) -> Tree {
    struct Placed<'a> {
        node: &'a DerivationNode,
        at: BTreeMap<TreeAddress, TreeAddress>,
    }
    let root = g.get(&d.tree).expect("known tree");
    let mut tree = root.tree.clone();
    let mut placed = vec![Placed {
        node: d,
        at: root.tree.addresses().into_iter().map(|a| (a.clone(), a)).collect(),
    }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        let node = placed[k].node;
        let mut arcs: Vec<_> = node.children.iter().collect();
        arcs.sort_by(|a, b| (&a.addr, a.order).cmp(&(&b.addr, b.order)));
        for arc in arcs {
            let child = g.get(&arc.child.tree).expect("known tree");
            let site = placed[k].at[&arc.addr].clone();
            if let Some(foot) = child.foot_address() {
                tree = adjoin_tree(&tree, &child.tree, &site).expect("adjunction");
                for p in &mut placed {
                    for v in p.at.values_mut() {
                        *v = remap(&site, &foot, v, Side::Down);
                    }
                }
            } else {
                tree = substitute_tree(&tree, &child.tree, &site).expect("substitution");
            }
            placed.push(Placed {
                node: &arc.child,
                at: child.tree.addresses().into_iter().map(|a| (a.clone(), site.concat(&a))).collect(),
            });
            queue.push_back(placed.len() - 1);
        }
    }
    tree
}

// ---------------------------------------------------------------------------
// string splicing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Word(String),
    Foot,
}

fn pieces(d: &DerivationNode, g: &TagGrammar) -> Vec<Piece> {
    let t = g.get(&d.tree).expect("known tree");
    fn walk(node: &Node, addr: TreeAddress, d: &DerivationNode, g: &TagGrammar, out: &mut Vec<Piece>) {
        let mut here: Vec<_> = d.children.iter().filter(|a| a.addr == addr).collect();
        here.sort_by_key(|a| a.order);
        if node.substitution {
            out.extend(pieces(&here[0].child, g));
            return;
        }
        let mut inner = Vec::new();
        if node.foot {
            inner.push(Piece::Foot);
        } else {
            match &node.label {
                Label::Terminal(w) => inner.push(Piece::Word(w.clone())),
                Label::Epsilon => {}
                Label::Nonterminal(_) => {
                    for (i, c) in node.children.iter().enumerate() {
                        walk(c, addr.child(i as u32 + 1), d, g, &mut inner);
                    }
                }
            }
        }
        for arc in here.iter().rev() {
            let wrap = pieces(&arc.child, g);
            let mut next = Vec::new();
            for p in wrap {
                if p == Piece::Foot {
                    next.extend(inner.iter().cloned());
                } else {
                    next.push(p);
                }
            }
            inner = next;
        }
        out.extend(inner);
    }
    let mut out = Vec::new();
    walk(&t.tree.root, TreeAddress::root(), d, g, &mut out);
    out
}

/// Yield of the derived tree computed from strings alone. For auxiliary
/// derivations the foot is dropped.
pub fn spliced_yield(d: &DerivationNode, g: &TagGrammar) -> Vec<String> {
    pieces(d, g)
        .into_iter()
        .filter_map(|p| match p {
            Piece::Word(w) => Some(w),
            Piece::Foot => None,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// random well-formed derivations

/// A random multi-adjunction well-formed derivation rooted at `tree`, or
/// `None` if the attempt got stuck.
pub fn random_derivation<R: Rng>(g: &TagGrammar, tree: &str, rng: &mut R, depth: usize) -> Option<DerivationNode> {
    if depth > 12 {
        return None;
    }
    let t = g.get(tree)?;
    let mut d = DerivationNode::leaf(tree);
    for site in sites(g, t) {
        match site {
            Site::Substitution(addr, options) => {
                let name = options.choose(rng)?;
                let child = random_derivation(g, name, rng, depth + 1)?;
                d = d.with_child(addr, 0, child);
            }
            Site::Adjunction { addr, options, obligatory } => {
                let mut n = if depth >= 4 { 0 } else { [0, 0, 1, 1, 2, 3][rng.random_range(0..6)] };
                if obligatory {
                    n = n.max(1);
                }
                for pos in 0..n {
                    let fit: Vec<&String> = options
                        .iter()
                        .filter(|o| pos == 0 || g.get(o).unwrap().class == TreeClass::Modifier)
                        .collect();
                    let Some(name) = fit.choose(rng) else {
                        if pos == 0 && obligatory {
                            return None;
                        }
                        break;
                    };
                    let child = random_derivation(g, name, rng, depth + 1)?;
                    d = d.with_child(addr.clone(), pos, child);
                }
            }
        }
    }
    Some(d)
}

pub fn random_any<R: Rng>(g: &TagGrammar, rng: &mut R) -> DerivationNode {
    loop {
        let t = g.trees.choose(rng).expect("non-empty grammar");
        if let Some(d) = random_derivation(g, &t.name, rng, 0) {
            return d;
        }
    }
}

// ---------------------------------------------------------------------------
// MCTAG structural audit

fn nonterminals(node: &Node, out: &mut BTreeSet<String>) {
    if let Label::Nonterminal(l) = &node.label {
        out.insert(l.clone());
    }
    for c in &node.children {
        nonterminals(c, out);
    }
}

fn same_shape(a: &Node, b: &Node, suffix: &str) -> bool {
    let labels = match (&a.label, &b.label) {
        (Label::Nonterminal(x), Label::Nonterminal(y)) => format!("{x}{suffix}") == *y,
        (x, y) => x == y,
    };
    labels
        && a.foot == b.foot
        && a.substitution == b.substitution
        && a.children.len() == b.children.len()
        && a.children.iter().zip(&b.children).all(|(x, y)| same_shape(x, y, suffix))
}

/// Every structural postcondition of the reduction; returns the violations.
pub fn audit_mctag(g: &SynchronousGrammar, m: &MCTagGrammar) -> Vec<String> {
    let mut bad = Vec::new();
    let mut left_nt = BTreeSet::new();
    let mut right_nt = BTreeSet::new();

    if m.sets.len() != g.pairs.len() {
        bad.push(format!("{} sets for {} pairs", m.sets.len(), g.pairs.len()));
    }
    for p in &g.pairs {
        let Some(set) = m.sets.iter().find(|s| s.name == p.name) else {
            bad.push(format!("no set for {}", p.name));
            continue;
        };
        if set.trees.len() != 2 {
            bad.push(format!("set {} has {} trees", p.name, set.trees.len()));
            continue;
        }
        for (half, image, suffix, is_left) in [(&p.left, &set.trees[0], "_L", true), (&p.right, &set.trees[1], "_R", false)] {
            if !same_shape(&half.tree.root, &image.tree.root, suffix) {
                bad.push(format!("{} differs in shape from {}", image.name, half.name));
                continue;
            }
            if image.kind != half.kind {
                bad.push(format!("{} changed kind", image.name));
            }
            nonterminals(&image.tree.root, if is_left { &mut left_nt } else { &mut right_nt });
            for (addr, node) in image.tree.nodes() {
                if node.foot || node.label.nonterminal().is_none() {
                    continue;
                }
                let links: Vec<_> = p.links.iter().filter(|l| if is_left { l.left == addr } else { l.right == addr }).collect();
                let mut expected = BTreeSet::new();
                for l in &links {
                    for q in &g.pairs {
                        if p.admits(l, q) {
                            expected.insert(q.name.clone());
                        }
                    }
                }
                let original = half.tree.node_at(&addr).unwrap();
                let ok = match &node.constraint.allowed {
                    Allowed::Only(names) => *names == expected && (!expected.is_empty() || original.constraint.obligatory),
                    Allowed::Nothing => expected.is_empty(),
                    Allowed::Any => false,
                };
                if !ok {
                    bad.push(format!("{} at {addr}: {:?}, expected {:?}", image.name, node.constraint.allowed, expected));
                }
                if node.constraint.obligatory != original.constraint.obligatory {
                    bad.push(format!("{} at {addr}: obligatory flag changed", image.name));
                }
            }
        }
    }
    if !left_nt.is_disjoint(&right_nt) {
        bad.push(format!("shared nonterminals {:?}", left_nt.intersection(&right_nt).collect::<Vec<_>>()));
    }
    if left_nt.contains(&m.start_symbol) || right_nt.contains(&m.start_symbol) {
        bad.push("start symbol is not fresh".into());
    }

    let starts: Vec<_> = g.start_pairs().collect();
    if m.start_trees.len() != starts.len() {
        bad.push(format!("{} start trees for {} start pairs", m.start_trees.len(), starts.len()));
    }
    for p in starts {
        let found = m.start_trees.iter().any(|t| {
            let r = &t.tree.root;
            r.label == Label::Nonterminal(m.start_symbol.clone())
                && r.constraint.allowed == Allowed::Nothing
                && r.children.len() == 2
                && r.children.iter().zip([format!("{}_L", p.left.root_label()), format!("{}_R", p.right.root_label())]).all(
                    |(c, label)| {
                        c.substitution
                            && c.label == Label::Nonterminal(label)
                            && c.constraint.allowed == Allowed::Only(BTreeSet::from([p.name.clone()]))
                    },
                )
        });
        if !found {
            bad.push(format!("no start tree for {}", p.name));
        }
    }
    bad
}
