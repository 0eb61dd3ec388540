//! Elementary and derived trees, Gorn addressing, and the two primitive
//! composition operations.
//!
//! Addresses are 1-based child paths; the empty path is the root. A tree
//! carries at most one *live* foot node (a leaf flagged `foot`); adjoining a
//! tree at an address splices the host subtree in at that foot. The node that
//! replaces the foot keeps the host node's label and children but takes the
//! foot's adjoining constraint, so constraints are always those written on
//! some elementary node.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TreeAddress(Vec<u32>);

impl TreeAddress {
    pub fn root() -> Self {
        TreeAddress(Vec::new())
    }

    pub fn new(path: Vec<u32>) -> Self {
        debug_assert!(path.iter().all(|&i| i >= 1), "addresses are 1-based");
        TreeAddress(path)
    }

    pub fn path(&self) -> &[u32] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Address of the `index`-th child (1-based).
    pub fn child(&self, index: u32) -> Self {
        let mut path = self.0.clone();
        path.push(index);
        TreeAddress(path)
    }

    pub fn parent(&self) -> Option<Self> {
        let (_, init) = self.0.split_last()?;
        Some(TreeAddress(init.to_vec()))
    }

    pub fn is_prefix_of(&self, other: &TreeAddress) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn concat(&self, suffix: &TreeAddress) -> Self {
        let mut path = self.0.clone();
        path.extend_from_slice(&suffix.0);
        TreeAddress(path)
    }

    pub fn strip_prefix(&self, prefix: &TreeAddress) -> Option<TreeAddress> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| TreeAddress(rest.to_vec()))
    }
}

impl From<Vec<u32>> for TreeAddress {
    fn from(path: Vec<u32>) -> Self {
        TreeAddress::new(path)
    }
}

impl<const N: usize> From<[u32; N]> for TreeAddress {
    fn from(path: [u32; N]) -> Self {
        TreeAddress::new(path.to_vec())
    }
}

impl fmt::Display for TreeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

impl FromStr for TreeAddress {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "eps" || s == "<eps>" {
            return Ok(TreeAddress::root());
        }
        s.split('.')
            .map(|part| match part.parse::<u32>() {
                Ok(0) | Err(_) => Err(format!("bad address component {part:?} in {s:?}")),
                Ok(n) => Ok(n),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(TreeAddress)
    }
}

/// Whether a link impinges on the top (↑) or bottom (↓) of its node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Side {
    #[default]
    Up,
    Down,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Up => "↑",
            Side::Down => "↓",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Nonterminal(String),
    Terminal(String),
    Epsilon,
}

impl Label {
    pub fn nonterminal(&self) -> Option<&str> {
        match self {
            Label::Nonterminal(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Nonterminal(s) | Label::Terminal(s) => f.write_str(s),
            Label::Epsilon => f.write_str("ε"),
        }
    }
}

/// Which trees may operate at a node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Allowed {
    #[default]
    Any,
    /// NA: nothing may operate here.
    Nothing,
    /// SA: only the named trees.
    Only(BTreeSet<String>),
}

impl Allowed {
    pub fn permits(&self, name: &str) -> bool {
        match self {
            Allowed::Any => true,
            Allowed::Nothing => false,
            Allowed::Only(names) => names.contains(name),
        }
    }

    pub fn intersect(&self, other: &Allowed) -> Allowed {
        match (self, other) {
            (Allowed::Any, x) | (x, Allowed::Any) => x.clone(),
            (Allowed::Nothing, _) | (_, Allowed::Nothing) => Allowed::Nothing,
            (Allowed::Only(a), Allowed::Only(b)) => {
                Allowed::Only(a.intersection(b).cloned().collect())
            }
        }
    }

    pub fn union(&self, other: &Allowed) -> Allowed {
        match (self, other) {
            (Allowed::Any, _) | (_, Allowed::Any) => Allowed::Any,
            (Allowed::Nothing, x) | (x, Allowed::Nothing) => x.clone(),
            (Allowed::Only(a), Allowed::Only(b)) => Allowed::Only(a.union(b).cloned().collect()),
        }
    }
}

/// Adjoining constraint on a node. On substitution sites the same record
/// restricts which initial trees may be substituted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Constraint {
    pub allowed: Allowed,
    pub obligatory: bool,
}

impl Constraint {
    pub fn any() -> Self {
        Constraint::default()
    }

    pub fn null() -> Self {
        Constraint {
            allowed: Allowed::Nothing,
            obligatory: false,
        }
    }

    pub fn selective<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Constraint {
            allowed: Allowed::Only(names.into_iter().map(Into::into).collect()),
            obligatory: false,
        }
    }

    pub fn obligatory(mut self) -> Self {
        self.obligatory = true;
        self
    }

    pub fn permits(&self, name: &str) -> bool {
        self.allowed.permits(name)
    }

    /// OA together with NA can never be satisfied and is rejected.
    pub fn is_valid(&self) -> bool {
        !(self.obligatory && self.allowed == Allowed::Nothing)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub label: Label,
    pub constraint: Constraint,
    pub substitution: bool,
    pub foot: bool,
    pub children: Vec<Node>,
}

impl Node {
    pub fn nonterminal(label: impl Into<String>, children: Vec<Node>) -> Self {
        Node {
            label: Label::Nonterminal(label.into()),
            constraint: Constraint::any(),
            substitution: false,
            foot: false,
            children,
        }
    }

    pub fn terminal(word: impl Into<String>) -> Self {
        Node {
            label: Label::Terminal(word.into()),
            constraint: Constraint::any(),
            substitution: false,
            foot: false,
            children: Vec::new(),
        }
    }

    pub fn epsilon() -> Self {
        Node {
            label: Label::Epsilon,
            constraint: Constraint::any(),
            substitution: false,
            foot: false,
            children: Vec::new(),
        }
    }

    pub fn substitution_site(label: impl Into<String>) -> Self {
        Node {
            substitution: true,
            ..Node::nonterminal(label, Vec::new())
        }
    }

    pub fn foot_node(label: impl Into<String>) -> Self {
        Node {
            foot: true,
            ..Node::nonterminal(label, Vec::new())
        }
    }

    pub fn with_constraint(mut self, constraint: Constraint) -> Self {
        self.constraint = constraint;
        self
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    fn collect_yield(&self, out: &mut Vec<String>) {
        match &self.label {
            Label::Terminal(w) => out.push(w.clone()),
            Label::Epsilon => {}
            Label::Nonterminal(_) => {
                for child in &self.children {
                    child.collect_yield(out);
                }
            }
        }
    }

    fn count(&self) -> usize {
        1 + self.children.iter().map(Node::count).sum::<usize>()
    }
}

/// A tree of labeled nodes. Used both for elementary tree bodies and for
/// derived trees.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    pub root: Node,
}

pub type DerivedTree = Tree;

impl Tree {
    pub fn new(root: Node) -> Self {
        Tree { root }
    }

    pub fn node_at(&self, addr: &TreeAddress) -> Option<&Node> {
        let mut node = &self.root;
        for &step in addr.path() {
            node = node.children.get(step as usize - 1)?;
        }
        Some(node)
    }

    pub fn resolves(&self, addr: &TreeAddress) -> bool {
        self.node_at(addr).is_some()
    }

    fn node_at_mut(&mut self, addr: &TreeAddress) -> Option<&mut Node> {
        let mut node = &mut self.root;
        for &step in addr.path() {
            node = node.children.get_mut(step as usize - 1)?;
        }
        Some(node)
    }

    /// Address of the live foot node, if any.
    pub fn foot_address(&self) -> Option<TreeAddress> {
        fn find(node: &Node, path: &mut Vec<u32>) -> Option<TreeAddress> {
            if node.foot {
                return Some(TreeAddress(path.clone()));
            }
            for (i, child) in node.children.iter().enumerate() {
                path.push(i as u32 + 1);
                if let Some(found) = find(child, path) {
                    return Some(found);
                }
                path.pop();
            }
            None
        }
        find(&self.root, &mut Vec::new())
    }

    /// Every node with its address, in preorder.
    pub fn nodes(&self) -> Vec<(TreeAddress, &Node)> {
        fn walk<'a>(node: &'a Node, path: &mut Vec<u32>, out: &mut Vec<(TreeAddress, &'a Node)>) {
            out.push((TreeAddress(path.clone()), node));
            for (i, child) in node.children.iter().enumerate() {
                path.push(i as u32 + 1);
                walk(child, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    pub fn addresses(&self) -> Vec<TreeAddress> {
        self.nodes().into_iter().map(|(a, _)| a).collect()
    }

    pub fn size(&self) -> usize {
        self.root.count()
    }

    /// Terminal leaves left to right; epsilon leaves contribute nothing.
    pub fn yield_tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.root.collect_yield(&mut out);
        out
    }

    /// Terminals to the left and right of the foot, for an auxiliary tree.
    pub fn foot_split(&self) -> Option<(Vec<String>, Vec<String>)> {
        fn walk(node: &Node, seen_foot: &mut bool, left: &mut Vec<String>, right: &mut Vec<String>) {
            if node.foot {
                *seen_foot = true;
                return;
            }
            match &node.label {
                Label::Terminal(w) if *seen_foot => right.push(w.clone()),
                Label::Terminal(w) => left.push(w.clone()),
                Label::Epsilon => {}
                Label::Nonterminal(_) => {
                    for child in &node.children {
                        walk(child, seen_foot, left, right);
                    }
                }
            }
        }
        let (mut seen, mut left, mut right) = (false, Vec::new(), Vec::new());
        walk(&self.root, &mut seen, &mut left, &mut right);
        seen.then_some((left, right))
    }

    /// Copy of this tree with the subtree at `addr` replaced.
    pub fn with_subtree(&self, addr: &TreeAddress, subtree: Node) -> Result<Tree> {
        let mut out = self.clone();
        let slot = out
            .node_at_mut(addr)
            .ok_or_else(|| Error::Address(addr.clone()))?;
        *slot = subtree;
        Ok(out)
    }

    pub fn has_unfilled_substitution(&self) -> bool {
        self.nodes().iter().any(|(_, n)| n.substitution)
    }

    pub fn has_obligatory_node(&self) -> bool {
        self.nodes()
            .iter()
            .any(|(_, n)| n.constraint.obligatory && !n.substitution)
    }
}

pub fn render_tokens(tokens: &[String], join: &str) -> String {
    tokens.join(join)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeKind {
    Initial,
    Auxiliary,
}

/// Auxiliary-tree class. Any number of modifier trees may stack at one node;
/// at most one predicative tree may, and it sits outermost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum TreeClass {
    Modifier,
    #[default]
    Predicative,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ElementaryTree {
    pub name: String,
    pub kind: TreeKind,
    pub class: TreeClass,
    pub tree: Tree,
}

impl ElementaryTree {
    /// Builds and validates an elementary tree. The kind follows from whether
    /// the body has a foot node.
    pub fn new(name: impl Into<String>, root: Node, class: TreeClass) -> Result<Self> {
        let name = name.into();
        let tree = Tree::new(root);
        let malformed = |reason: String| Error::Malformed {
            tree: name.clone(),
            reason,
        };

        let root_label = match &tree.root.label {
            Label::Nonterminal(s) => s.clone(),
            other => return Err(malformed(format!("root must be a nonterminal, found {other}"))),
        };

        let mut feet = Vec::new();
        for (addr, node) in tree.nodes() {
            if !node.constraint.is_valid() {
                return Err(malformed(format!("node {addr} is both OA and NA")));
            }
            match &node.label {
                Label::Terminal(_) | Label::Epsilon if !node.is_leaf() => {
                    return Err(malformed(format!("node {addr}: terminals must be leaves")));
                }
                Label::Terminal(_) | Label::Epsilon if node.substitution || node.foot => {
                    return Err(malformed(format!(
                        "node {addr}: only nonterminals can be substitution or foot nodes"
                    )));
                }
                _ => {}
            }
            if node.substitution && node.foot {
                return Err(malformed(format!("node {addr} is marked both substitution and foot")));
            }
            if (node.substitution || node.foot) && !node.is_leaf() {
                return Err(malformed(format!("node {addr}: substitution and foot nodes must be leaves")));
            }
            if node.label.nonterminal().is_some() && node.is_leaf() && !node.substitution && !node.foot {
                return Err(malformed(format!(
                    "node {addr}: nonterminal leaf must be a substitution or foot node"
                )));
            }
            if node.foot {
                feet.push((addr, node));
            }
        }

        let kind = match feet.as_slice() {
            [] => TreeKind::Initial,
            [(addr, foot)] => {
                if addr.is_root() {
                    return Err(malformed("the foot cannot be the root".into()));
                }
                if foot.label.nonterminal() != Some(root_label.as_str()) {
                    return Err(malformed(format!(
                        "foot label {} differs from root label {root_label}",
                        foot.label
                    )));
                }
                TreeKind::Auxiliary
            }
            _ => return Err(malformed("more than one foot node".into())),
        };

        Ok(ElementaryTree {
            name,
            kind,
            class,
            tree,
        })
    }

    pub fn root_label(&self) -> &str {
        self.tree.root.label.nonterminal().unwrap_or_default()
    }

    pub fn is_auxiliary(&self) -> bool {
        self.kind == TreeKind::Auxiliary
    }

    pub fn foot_address(&self) -> Option<TreeAddress> {
        self.tree.foot_address()
    }
}

/// Where a host address ends up after adjoining at `site` a tree whose foot
/// sits at `foot`. Addresses strictly below the site move under the foot; the
/// site itself maps to the adjoined root (`Up`) or to the foot image (`Down`).
pub fn remap(site: &TreeAddress, foot: &TreeAddress, u: &TreeAddress, side: Side) -> TreeAddress {
    match u.strip_prefix(site) {
        None => u.clone(),
        Some(rest) if rest.is_root() => match side {
            Side::Up => site.clone(),
            Side::Down => site.concat(foot),
        },
        Some(rest) => site.concat(foot).concat(&rest),
    }
}

/// [`remap`] with the requirement that `u` names a node of `host`.
pub fn address_map(
    host: &Tree,
    site: &TreeAddress,
    foot: &TreeAddress,
    u: &TreeAddress,
    side: Side,
) -> Result<TreeAddress> {
    if !host.resolves(u) {
        return Err(Error::Address(u.clone()));
    }
    Ok(remap(site, foot, u, side))
}

/// Copy of `aux.root` with its foot replaced by `sub`. The merged node keeps
/// `sub`'s label, children and foot flag and takes the foot's constraint.
pub(crate) fn plant(aux: &Tree, sub: Node) -> Node {
    fn go(node: &Node, sub: &mut Option<Node>) -> Node {
        if node.foot {
            let sub = sub.take().expect("a single live foot");
            return Node {
                label: sub.label,
                constraint: node.constraint.clone(),
                substitution: false,
                foot: sub.foot,
                children: sub.children,
            };
        }
        Node {
            label: node.label.clone(),
            constraint: node.constraint.clone(),
            substitution: node.substitution,
            foot: node.foot,
            children: node.children.iter().map(|c| go(c, sub)).collect(),
        }
    }
    let mut sub = Some(sub);
    let out = go(&aux.root, &mut sub);
    debug_assert!(sub.is_none(), "auxiliary tree without a live foot");
    out
}

/// Adjoins `stack[0]` at `host`, then each later entry at the previous
/// one's foot. Each adjoined root keeps its own constraint; only the host
/// node takes a foot's constraint, from the innermost tree.
pub(crate) fn plant_stack<'a>(stack: impl DoubleEndedIterator<Item = &'a Tree>, host: Node) -> Node {
    let mut out = host;
    for (i, aux) in stack.rev().enumerate() {
        let kept = out.constraint.clone();
        out = plant(aux, out);
        if i > 0 {
            let foot = aux.foot_address().expect("auxiliary tree");
            let mut node = out.clone();
            let mut slot = &mut node;
            for &k in foot.path() {
                slot = &mut slot.children[k as usize - 1];
            }
            slot.constraint = kept;
            out = node;
        }
    }
    out
}

fn adjunction_host<'a>(host: &'a Tree, name: &str, t: &TreeAddress) -> Result<&'a Node> {
    let node = host.node_at(t).ok_or_else(|| Error::Address(t.clone()))?;
    if node.substitution {
        return Err(Error::Site {
            addr: t.clone(),
            reason: "substitution sites admit no adjunction".into(),
        });
    }
    if node.foot {
        return Err(Error::Site {
            addr: t.clone(),
            reason: "foot nodes admit no adjunction".into(),
        });
    }
    if node.label.nonterminal().is_none() {
        return Err(Error::Adjunction {
            tree: name.into(),
            addr: t.clone(),
            reason: format!("{} is not a nonterminal", node.label),
        });
    }
    Ok(node)
}

/// Splices `aux` into `host` at `t`, checking only labels and site kind.
pub fn adjoin_tree(host: &Tree, aux: &Tree, t: &TreeAddress) -> Result<Tree> {
    let name = aux.root.label.to_string();
    let node = adjunction_host(host, &name, t)?;
    if aux.foot_address().is_none() {
        return Err(Error::Adjunction {
            tree: name,
            addr: t.clone(),
            reason: "tree has no foot".into(),
        });
    }
    if aux.root.label != node.label {
        return Err(Error::Adjunction {
            tree: name,
            addr: t.clone(),
            reason: format!("root label differs from {}", node.label),
        });
    }
    host.with_subtree(t, plant(aux, node.clone()))
}

/// `I[A/t]`: adjoin an auxiliary elementary tree, honouring the site's
/// constraint.
pub fn adjoin(host: &Tree, aux: &ElementaryTree, t: &TreeAddress) -> Result<Tree> {
    let node = adjunction_host(host, &aux.name, t)?;
    if !aux.is_auxiliary() {
        return Err(Error::Adjunction {
            tree: aux.name.clone(),
            addr: t.clone(),
            reason: "not an auxiliary tree".into(),
        });
    }
    if node.label != aux.tree.root.label {
        return Err(Error::Adjunction {
            tree: aux.name.clone(),
            addr: t.clone(),
            reason: format!("root label {} differs from {}", aux.root_label(), node.label),
        });
    }
    if !node.constraint.permits(&aux.name) {
        return Err(Error::Constraint {
            tree: aux.name.clone(),
            addr: t.clone(),
        });
    }
    host.with_subtree(t, plant(&aux.tree, node.clone()))
}

fn substitution_host<'a>(host: &'a Tree, label: &Label, t: &TreeAddress) -> Result<&'a Node> {
    let node = host.node_at(t).ok_or_else(|| Error::Address(t.clone()))?;
    if !node.substitution {
        return Err(Error::Site {
            addr: t.clone(),
            reason: "not a substitution site".into(),
        });
    }
    if &node.label != label {
        return Err(Error::Site {
            addr: t.clone(),
            reason: format!("site label {} differs from root label {label}", node.label),
        });
    }
    Ok(node)
}

/// Replaces the substitution leaf at `t` with `init`, checking labels only.
pub fn substitute_tree(host: &Tree, init: &Tree, t: &TreeAddress) -> Result<Tree> {
    substitution_host(host, &init.root.label, t)?;
    host.with_subtree(t, init.root.clone())
}

pub fn substitute(host: &Tree, init: &ElementaryTree, t: &TreeAddress) -> Result<Tree> {
    if init.is_auxiliary() {
        return Err(Error::Site {
            addr: t.clone(),
            reason: format!("{} is auxiliary and cannot be substituted", init.name),
        });
    }
    let node = substitution_host(host, &init.tree.root.label, t)?;
    if !node.constraint.permits(&init.name) {
        return Err(Error::Constraint {
            tree: init.name.clone(),
            addr: t.clone(),
        });
    }
    host.with_subtree(t, init.tree.root.clone())
}

/// Whether `tree` may operate (adjoin or substitute, by its kind) at `t`.
pub fn check_site(host: &Tree, tree: &ElementaryTree, t: &TreeAddress) -> bool {
    let Some(node) = host.node_at(t) else {
        return false;
    };
    if node.label != tree.tree.root.label || !node.constraint.permits(&tree.name) {
        return false;
    }
    match tree.kind {
        TreeKind::Initial => node.substitution,
        TreeKind::Auxiliary => !node.substitution && !node.foot,
    }
}

/// A component TAG: a named set of elementary trees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagGrammar {
    pub name: String,
    pub trees: Vec<ElementaryTree>,
    /// Root label that complete derivations must have; `None` accepts any
    /// initial tree.
    pub start: Option<String>,
    /// Separator used when printing yields.
    pub join: String,
    index: BTreeMap<String, usize>,
}

impl TagGrammar {
    pub fn new(name: impl Into<String>, trees: Vec<ElementaryTree>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, t) in trees.iter().enumerate() {
            if index.insert(t.name.clone(), i).is_some() {
                return Err(Error::Malformed {
                    tree: t.name.clone(),
                    reason: "duplicate tree name".into(),
                });
            }
        }
        Ok(TagGrammar {
            name: name.into(),
            trees,
            start: None,
            join: " ".into(),
            index,
        })
    }

    pub fn with_start(mut self, start: Option<String>) -> Self {
        self.start = start;
        self
    }

    pub fn with_join(mut self, join: impl Into<String>) -> Self {
        self.join = join.into();
        self
    }

    pub fn get(&self, name: &str) -> Option<&ElementaryTree> {
        self.index.get(name).map(|&i| &self.trees[i])
    }

    pub fn lookup(&self, name: &str) -> Result<&ElementaryTree> {
        self.get(name).ok_or_else(|| Error::UnknownTree(name.into()))
    }

    pub fn is_start(&self, tree: &ElementaryTree) -> bool {
        tree.kind == TreeKind::Initial
            && self
                .start
                .as_deref()
                .is_none_or(|s| tree.root_label() == s)
    }

    pub fn start_trees(&self) -> impl Iterator<Item = &ElementaryTree> {
        self.trees.iter().filter(|t| self.is_start(t))
    }

    pub fn terminals(&self) -> BTreeSet<String> {
        self.trees
            .iter()
            .flat_map(|t| t.tree.nodes())
            .filter_map(|(_, n)| match &n.label {
                Label::Terminal(w) => Some(w.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn render(&self, tokens: &[String]) -> String {
        render_tokens(tokens, &self.join)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr<const N: usize>(p: [u32; N]) -> TreeAddress {
        TreeAddress::from(p)
    }

    fn aux(name: &str, root: Node) -> ElementaryTree {
        ElementaryTree::new(name, root, TreeClass::Modifier).unwrap()
    }

    fn blink_left() -> Tree {
        Tree::new(Node::nonterminal(
            "S",
            vec![
                Node::nonterminal("NP", vec![Node::terminal("John")]),
                Node::nonterminal("VP", vec![Node::nonterminal("V", vec![Node::terminal("blinked")])]),
            ],
        ))
    }

    #[test]
    fn address_map_examples() {
        assert_eq!(remap(&addr([1]), &addr([2]), &addr([3, 1]), Side::Up), addr([3, 1]));
        assert_eq!(remap(&addr([1]), &addr([2]), &addr([1, 1]), Side::Up), addr([1, 2, 1]));
        assert_eq!(remap(&addr([]), &addr([2, 1]), &addr([]), Side::Down), addr([2, 1]));
        assert_eq!(remap(&addr([]), &addr([2, 1]), &addr([]), Side::Up), addr([]));
    }

    #[test]
    fn address_map_rejects_unresolved() {
        let host = blink_left();
        let err = address_map(&host, &addr([]), &addr([1]), &addr([7]), Side::Up).unwrap_err();
        assert_eq!(err, Error::Address(addr([7])));
    }

    #[test]
    fn address_parsing_round_trips() {
        for s in ["ε", "1", "2.1.3"] {
            let a: TreeAddress = s.parse().unwrap();
            assert_eq!(a.to_string(), s);
        }
        assert!("0".parse::<TreeAddress>().is_err());
        assert!("1.x".parse::<TreeAddress>().is_err());
    }

    #[test]
    fn adjoin_twice_at_root() {
        let twice = aux(
            "twice",
            Node::nonterminal("S", vec![Node::foot_node("S"), Node::nonterminal("Adv", vec![Node::terminal("twice")])]),
        );
        let out = adjoin(&blink_left(), &twice, &addr([])).unwrap();
        assert_eq!(out.yield_tokens().join(" "), "John blinked twice");
        assert!(out.foot_address().is_none());
    }

    #[test]
    fn trivial_auxiliary_leaves_yield_unchanged() {
        let vp = aux("vp", Node::nonterminal("VP", vec![Node::foot_node("VP")]));
        let host = blink_left();
        let out = adjoin(&host, &vp, &addr([2])).unwrap();
        assert_eq!(out.yield_tokens(), host.yield_tokens());
        assert_eq!(out.size(), host.size() + 1);
    }

    #[test]
    fn adjoin_errors() {
        let host = Tree::new(Node::nonterminal(
            "S",
            vec![
                Node::substitution_site("NP"),
                Node::nonterminal("VP", vec![Node::terminal("x")]).with_constraint(Constraint::null()),
                Node::nonterminal("W", vec![Node::terminal("y")]).with_constraint(Constraint::selective(["other"])),
            ],
        ));
        let vp = aux("vp", Node::nonterminal("VP", vec![Node::foot_node("VP")]));
        let w = aux("w", Node::nonterminal("W", vec![Node::foot_node("W")]));
        let np = aux("np", Node::nonterminal("NP", vec![Node::foot_node("NP")]));
        assert!(matches!(adjoin(&host, &vp, &addr([])), Err(Error::Adjunction { .. })));
        assert!(matches!(adjoin(&host, &vp, &addr([2])), Err(Error::Constraint { .. })));
        assert!(matches!(adjoin(&host, &w, &addr([3])), Err(Error::Constraint { .. })));
        assert!(matches!(adjoin(&host, &np, &addr([1])), Err(Error::Site { .. })));
        assert!(matches!(adjoin(&host, &vp, &addr([9])), Err(Error::Address(_))));
    }

    #[test]
    fn substitution_fills_site() {
        let host = Tree::new(Node::nonterminal(
            "S",
            vec![Node::substitution_site("NP"), Node::nonterminal("VP", vec![Node::terminal("blinked")])],
        ));
        let john = ElementaryTree::new("john", Node::nonterminal("NP", vec![Node::terminal("John")]), TreeClass::default()).unwrap();
        let out = substitute(&host, &john, &addr([1])).unwrap();
        assert_eq!(out.yield_tokens(), ["John", "blinked"]);
        assert!(!out.has_unfilled_substitution());
        assert!(matches!(substitute(&host, &john, &addr([2])), Err(Error::Site { .. })));
        assert!(!check_site(&host, &john, &addr([])));
        assert!(check_site(&host, &john, &addr([1])));
    }

    #[test]
    fn elementary_tree_validation() {
        let bad_foot = ElementaryTree::new(
            "b",
            Node::nonterminal("A", vec![Node::foot_node("B")]),
            TreeClass::Modifier,
        );
        assert!(bad_foot.is_err());
        let two_feet = ElementaryTree::new(
            "b",
            Node::nonterminal("A", vec![Node::foot_node("A"), Node::foot_node("A")]),
            TreeClass::Modifier,
        );
        assert!(two_feet.is_err());
        let bare_leaf = ElementaryTree::new("b", Node::nonterminal("A", vec![Node::nonterminal("B", vec![])]), TreeClass::Modifier);
        assert!(bare_leaf.is_err());
        let oa_na = ElementaryTree::new(
            "b",
            Node::nonterminal("A", vec![Node::terminal("x")]).with_constraint(Constraint::null().obligatory()),
            TreeClass::Modifier,
        );
        assert!(oa_na.is_err());
    }

    #[test]
    fn foot_split_reports_both_sides() {
        let t = aux(
            "b",
            Node::nonterminal(
                "A",
                vec![
                    Node::terminal("a"),
                    Node::nonterminal("A", vec![Node::terminal("b"), Node::foot_node("A"), Node::terminal("c")]),
                    Node::terminal("d"),
                ],
            ),
        );
        let (l, r) = t.tree.foot_split().unwrap();
        assert_eq!((l.join(""), r.join("")), ("ab".to_string(), "cd".to_string()));
        assert_eq!(t.foot_address(), Some(addr([2, 2])));
    }
}
