//! Synchronous grammars: linked tree pairs, synchronous derivations as pairs
//! of isomorphic derivation trees, and projections onto one component.
//!
//! Elementary trees in either component are named after their pair, so a
//! selective constraint `SA(twice)` on a right node names the right half of
//! the pair `twice`, and the same name denotes its left half after projection.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::derivation::{build, validate, validate_node, DerivationArc, DerivationNode, WellFormednessMode};
use crate::error::{Error, Result};
use crate::tree::{
    check_site, render_tokens, Allowed, Constraint, ElementaryTree, Side, TagGrammar, Tree, TreeAddress,
    TreeClass, TreeKind,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    /// Diacritic number as written in the grammar.
    pub id: u32,
    pub left: TreeAddress,
    pub left_side: Side,
    pub right: TreeAddress,
    pub right_side: Side,
}

impl Link {
    pub fn new(id: u32, left: impl Into<TreeAddress>, right: impl Into<TreeAddress>) -> Self {
        Link {
            id,
            left: left.into(),
            left_side: Side::Up,
            right: right.into(),
            right_side: Side::Up,
        }
    }

    pub fn addresses(&self) -> (&TreeAddress, &TreeAddress) {
        (&self.left, &self.right)
    }

    pub fn swapped(&self) -> Link {
        Link {
            id: self.id,
            left: self.right.clone(),
            left_side: self.right_side,
            right: self.left.clone(),
            right_side: self.left_side,
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "#{} {}{} ⌢ {}{}",
            self.id, self.left, self.left_side, self.right, self.right_side
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePair {
    pub name: String,
    pub left: ElementaryTree,
    pub right: ElementaryTree,
    pub links: Vec<Link>,
}

impl TreePair {
    pub fn new(left: ElementaryTree, right: ElementaryTree, links: Vec<Link>) -> Result<Self> {
        let name = left.name.clone();
        let malformed = |reason: String| Error::Malformed {
            tree: name.clone(),
            reason,
        };
        if right.name != name {
            return Err(malformed(format!("halves are named {} and {}", name, right.name)));
        }
        if left.kind != right.kind {
            return Err(malformed("an initial tree is paired with an auxiliary tree".into()));
        }
        for link in &links {
            if !left.tree.resolves(&link.left) || !right.tree.resolves(&link.right) {
                return Err(malformed(format!("link {link} does not resolve")));
            }
        }
        Ok(TreePair {
            name,
            left,
            right,
            links,
        })
    }

    pub fn kind(&self) -> TreeKind {
        self.left.kind
    }

    pub fn swapped(&self) -> TreePair {
        TreePair {
            name: self.name.clone(),
            left: self.right.clone(),
            right: self.left.clone(),
            links: self.links.iter().map(Link::swapped).collect(),
        }
    }

    /// Whether `other`'s halves can operate at both ends of `link`.
    pub fn admits(&self, link: &Link, other: &TreePair) -> bool {
        check_site(&self.left.tree, &other.left, &link.left) && check_site(&self.right.tree, &other.right, &link.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynchronousGrammar {
    pub name: String,
    pub pairs: Vec<TreePair>,
    /// Root labels (left, right) of start pairs; `None` lets every initial
    /// pair start a derivation.
    pub start: Option<(String, String)>,
    pub default_side: Side,
    pub join_left: String,
    pub join_right: String,
    index: BTreeMap<String, usize>,
}

impl SynchronousGrammar {
    pub fn new(name: impl Into<String>, pairs: Vec<TreePair>) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, p) in pairs.iter().enumerate() {
            if index.insert(p.name.clone(), i).is_some() {
                return Err(Error::Malformed {
                    tree: p.name.clone(),
                    reason: "duplicate pair name".into(),
                });
            }
        }
        Ok(SynchronousGrammar {
            name: name.into(),
            pairs,
            start: None,
            default_side: Side::Up,
            join_left: " ".into(),
            join_right: " ".into(),
            index,
        })
    }

    pub fn pair(&self, name: &str) -> Option<&TreePair> {
        self.index.get(name).map(|&i| &self.pairs[i])
    }

    pub fn is_start(&self, pair: &TreePair) -> bool {
        pair.kind() == TreeKind::Initial
            && self
                .start
                .as_ref()
                .is_none_or(|(l, r)| pair.left.root_label() == l && pair.right.root_label() == r)
    }

    pub fn start_pairs(&self) -> impl Iterator<Item = &TreePair> {
        self.pairs.iter().filter(|p| self.is_start(p))
    }

    pub fn left_grammar(&self) -> TagGrammar {
        TagGrammar::new(&self.name, self.pairs.iter().map(|p| p.left.clone()).collect())
            .expect("pair names are unique")
            .with_start(self.start.as_ref().map(|(l, _)| l.clone()))
            .with_join(self.join_left.clone())
    }

    pub fn right_grammar(&self) -> TagGrammar {
        self.swapped().left_grammar()
    }

    /// The same grammar with left and right components exchanged.
    pub fn swapped(&self) -> SynchronousGrammar {
        SynchronousGrammar {
            name: self.name.clone(),
            pairs: self.pairs.iter().map(TreePair::swapped).collect(),
            start: self.start.as_ref().map(|(l, r)| (r.clone(), l.clone())),
            default_side: self.default_side,
            join_left: self.join_right.clone(),
            join_right: self.join_left.clone(),
            index: self.index.clone(),
        }
    }

    pub fn render_pair(&self, left: &[String], right: &[String]) -> (String, String) {
        (render_tokens(left, &self.join_left), render_tokens(right, &self.join_right))
    }
}

/// A synchronous derivation stored as one tree of pair names. Each arc
/// carries the linked addresses in the parent pair and the stack position on
/// either side, so the node bijection is implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairedDerivation {
    pub pair: String,
    pub children: Vec<PairedArc>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairedArc {
    pub left_addr: TreeAddress,
    pub right_addr: TreeAddress,
    pub left_order: u32,
    pub right_order: u32,
    pub child: PairedDerivation,
}

/// Path from the root of a derivation tree: indices into successive
/// `children` vectors.
pub type NodePath = Vec<usize>;

/// `⟨D_L, D_R⟩` with an explicit node bijection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynchronousDerivation {
    pub left: DerivationNode,
    pub right: DerivationNode,
    pub map: Vec<(NodePath, NodePath)>,
}

impl PairedDerivation {
    pub fn leaf(pair: impl Into<String>) -> Self {
        PairedDerivation {
            pair: pair.into(),
            children: Vec::new(),
        }
    }

    pub fn with_child(
        mut self,
        left_addr: impl Into<TreeAddress>,
        right_addr: impl Into<TreeAddress>,
        orders: (u32, u32),
        child: PairedDerivation,
    ) -> Self {
        self.children.push(PairedArc {
            left_addr: left_addr.into(),
            right_addr: right_addr.into(),
            left_order: orders.0,
            right_order: orders.1,
            child,
        });
        self
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|a| a.child.size()).sum::<usize>()
    }

    pub fn left(&self) -> DerivationNode {
        DerivationNode {
            tree: self.pair.clone(),
            children: self
                .children
                .iter()
                .map(|a| DerivationArc {
                    addr: a.left_addr.clone(),
                    order: a.left_order,
                    child: a.child.left(),
                })
                .collect(),
        }
    }

    pub fn right(&self) -> DerivationNode {
        self.swapped().left()
    }

    pub fn swapped(&self) -> PairedDerivation {
        PairedDerivation {
            pair: self.pair.clone(),
            children: self
                .children
                .iter()
                .map(|a| PairedArc {
                    left_addr: a.right_addr.clone(),
                    right_addr: a.left_addr.clone(),
                    left_order: a.right_order,
                    right_order: a.left_order,
                    child: a.child.swapped(),
                })
                .collect(),
        }
    }

    /// Splits into two derivation trees related by the identity on paths.
    pub fn split(&self) -> SynchronousDerivation {
        fn paths(d: &PairedDerivation, prefix: &mut NodePath, out: &mut Vec<(NodePath, NodePath)>) {
            out.push((prefix.clone(), prefix.clone()));
            for (i, arc) in d.children.iter().enumerate() {
                prefix.push(i);
                paths(&arc.child, prefix, out);
                prefix.pop();
            }
        }
        let mut map = Vec::new();
        paths(self, &mut Vec::new(), &mut map);
        SynchronousDerivation {
            left: self.left(),
            right: self.right(),
            map,
        }
    }

    /// Canonical `(D_L, D_R)` identity; distinct bijections between the same
    /// two trees denote the same derivation.
    pub fn projection(&self) -> (DerivationNode, DerivationNode) {
        (self.left().canonical(), self.right().canonical())
    }
}

/// The first violated condition of the natural definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyncViolation {
    LeftIllFormed(String),
    RightIllFormed(String),
    NotIsomorphic(String),
    Unsanctioned(String),
}

impl fmt::Display for SyncViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyncViolation::LeftIllFormed(m) => write!(f, "condition 1 (left well-formedness): {m}"),
            SyncViolation::RightIllFormed(m) => write!(f, "condition 2 (right well-formedness): {m}"),
            SyncViolation::NotIsomorphic(m) => write!(f, "condition 3 (isomorphism): {m}"),
            SyncViolation::Unsanctioned(m) => write!(f, "condition 4 (link sanction): {m}"),
        }
    }
}

fn node_at<'a>(d: &'a DerivationNode, path: &[usize]) -> Option<(&'a DerivationNode, Option<&'a DerivationArc>)> {
    let mut node = d;
    let mut arc = None;
    for &i in path {
        let a = node.children.get(i)?;
        arc = Some(a);
        node = &a.child;
    }
    Some((node, arc))
}

fn all_paths(d: &DerivationNode) -> Vec<NodePath> {
    fn walk(d: &DerivationNode, prefix: &mut NodePath, out: &mut Vec<NodePath>) {
        out.push(prefix.clone());
        for (i, arc) in d.children.iter().enumerate() {
            prefix.push(i);
            walk(&arc.child, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    walk(d, &mut Vec::new(), &mut out);
    out
}

impl SynchronousDerivation {
    /// Checks that `map` is a parent-preserving bijection and folds the two
    /// trees into one paired tree.
    pub fn to_paired(&self) -> Result<PairedDerivation, SyncViolation> {
        let left_paths: BTreeSet<NodePath> = all_paths(&self.left).into_iter().collect();
        let right_paths: BTreeSet<NodePath> = all_paths(&self.right).into_iter().collect();
        let mut forward: BTreeMap<&NodePath, &NodePath> = BTreeMap::new();
        let mut backward: BTreeMap<&NodePath, &NodePath> = BTreeMap::new();
        for (l, r) in &self.map {
            if !left_paths.contains(l) || !right_paths.contains(r) {
                return Err(SyncViolation::NotIsomorphic(format!("{l:?} ↦ {r:?} names a missing node")));
            }
            if forward.insert(l, r).is_some_and(|prev| prev != r) || backward.insert(r, l).is_some_and(|prev| prev != l)
            {
                return Err(SyncViolation::NotIsomorphic(format!("{l:?} ↦ {r:?} is not injective")));
            }
        }
        if forward.len() != left_paths.len() || backward.len() != right_paths.len() {
            return Err(SyncViolation::NotIsomorphic("mapping is not total and onto".into()));
        }
        for (l, r) in &forward {
            let parents = (l.split_last().map(|(_, p)| p), r.split_last().map(|(_, p)| p));
            match parents {
                (None, None) => {}
                (Some(pl), Some(pr)) if forward.get(&pl.to_vec()).is_some_and(|m| m.as_slice() == pr) => {}
                _ => {
                    return Err(SyncViolation::NotIsomorphic(format!(
                        "{l:?} ↦ {r:?} does not preserve the parent relation"
                    )))
                }
            }
        }

        fn fold(
            sd: &SynchronousDerivation,
            forward: &BTreeMap<&NodePath, &NodePath>,
            lpath: &mut NodePath,
        ) -> Result<PairedDerivation, SyncViolation> {
            let rpath = forward[&*lpath];
            let (ln, _) = node_at(&sd.left, lpath).expect("checked");
            let (rn, _) = node_at(&sd.right, rpath).expect("checked");
            if ln.tree != rn.tree {
                return Err(SyncViolation::Unsanctioned(format!(
                    "{} and {} are not the halves of one pair",
                    ln.tree, rn.tree
                )));
            }
            let mut children = Vec::new();
            for (i, larc) in ln.children.iter().enumerate() {
                lpath.push(i);
                let (_, rarc) = node_at(&sd.right, forward[&*lpath]).expect("checked");
                let rarc = rarc.expect("non-root maps to non-root");
                let child = fold(sd, forward, lpath)?;
                lpath.pop();
                children.push(PairedArc {
                    left_addr: larc.addr.clone(),
                    right_addr: rarc.addr.clone(),
                    left_order: larc.order,
                    right_order: rarc.order,
                    child,
                });
            }
            Ok(PairedDerivation {
                pair: ln.tree.clone(),
                children,
            })
        }
        fold(self, &forward, &mut Vec::new())
    }

    pub fn swapped(&self) -> SynchronousDerivation {
        SynchronousDerivation {
            left: self.right.clone(),
            right: self.left.clone(),
            map: self.map.iter().map(|(l, r)| (r.clone(), l.clone())).collect(),
        }
    }
}

/// Link sanction for every arc pair. Each link sanctions at most one arc per
/// derivation node; link sides play no part.
fn check_links(d: &PairedDerivation, g: &SynchronousGrammar) -> Result<(), SyncViolation> {
    let Some(pair) = g.pair(&d.pair) else {
        return Err(SyncViolation::Unsanctioned(format!("no pair named {}", d.pair)));
    };
    let mut capacity: HashMap<(&TreeAddress, &TreeAddress), usize> = HashMap::new();
    for link in &pair.links {
        *capacity.entry(link.addresses()).or_default() += 1;
    }
    for arc in &d.children {
        match capacity.get_mut(&(&arc.left_addr, &arc.right_addr)) {
            Some(n) if *n > 0 => *n -= 1,
            Some(_) => {
                return Err(SyncViolation::Unsanctioned(format!(
                    "link {} ⌢ {} in {} used more than once",
                    arc.left_addr, arc.right_addr, d.pair
                )))
            }
            None => {
                return Err(SyncViolation::Unsanctioned(format!(
                    "{} ⌢ {} is not linked in {}",
                    arc.left_addr, arc.right_addr, d.pair
                )))
            }
        }
        check_links(&arc.child, g)?;
    }
    Ok(())
}

pub fn check_paired(d: &PairedDerivation, g: &SynchronousGrammar, mode: WellFormednessMode) -> Result<(), SyncViolation> {
    validate(&d.left(), &g.left_grammar(), mode).map_err(|e| SyncViolation::LeftIllFormed(e.to_string()))?;
    validate(&d.right(), &g.right_grammar(), mode).map_err(|e| SyncViolation::RightIllFormed(e.to_string()))?;
    check_links(d, g)
}

/// The natural definition: both components well-formed, isomorphic, and every
/// matched operation sanctioned by a link of the parent pair.
pub fn check_sync_derivation(
    sd: &SynchronousDerivation,
    g: &SynchronousGrammar,
    mode: WellFormednessMode,
) -> Result<(), SyncViolation> {
    validate(&sd.left, &g.left_grammar(), mode).map_err(|e| SyncViolation::LeftIllFormed(e.to_string()))?;
    validate(&sd.right, &g.right_grammar(), mode).map_err(|e| SyncViolation::RightIllFormed(e.to_string()))?;
    let paired = sd.to_paired()?;
    check_links(&paired, g)
}

pub fn derived_pair(sd: &SynchronousDerivation, g: &SynchronousGrammar) -> Result<(Tree, Tree)> {
    check_sync_derivation(sd, g, WellFormednessMode::MultiAdjunction).map_err(|v| Error::Derivation(v.to_string()))?;
    Ok((build(&sd.left, &g.left_grammar()), build(&sd.right, &g.right_grammar())))
}

pub(crate) fn orderings<T: Clone>(items: &[T], predicative: impl Fn(&T) -> bool) -> Vec<Vec<T>> {
    fn permute<T: Clone>(rest: &mut Vec<T>, acc: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if rest.is_empty() {
            out.push(acc.clone());
            return;
        }
        for i in 0..rest.len() {
            let item = rest.remove(i);
            acc.push(item);
            permute(rest, acc, out);
            let item = acc.pop().expect("pushed");
            rest.insert(i, item);
        }
    }
    let mut out = Vec::new();
    permute(&mut items.to_vec(), &mut Vec::new(), &mut out);
    out.retain(|perm| perm.iter().skip(1).all(|x| !predicative(x)));
    out
}

/// Assigns stack positions on both sides for every admissible ordering of a
/// set of arcs. Arcs are given with placeholder orders.
pub(crate) fn order_arcs(
    arcs: &[PairedArc],
    left: &TagGrammar,
    right: &TagGrammar,
    mode: WellFormednessMode,
) -> Vec<Vec<PairedArc>> {
    let is_pred = |g: &TagGrammar, name: &str| {
        g.get(name)
            .is_some_and(|t| t.kind == TreeKind::Auxiliary && t.class == TreeClass::Predicative)
    };
    let side_orders = |addr_of: &dyn Fn(&PairedArc) -> &TreeAddress, g: &TagGrammar| -> Option<Vec<Vec<(usize, u32)>>> {
        let mut groups: BTreeMap<&TreeAddress, Vec<usize>> = BTreeMap::new();
        for (i, a) in arcs.iter().enumerate() {
            groups.entry(addr_of(a)).or_default().push(i);
        }
        if mode == WellFormednessMode::Standard && groups.values().any(|v| v.len() > 1) {
            return None;
        }
        // cartesian product over groups of the orderings within each group
        let mut combos: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
        for members in groups.values() {
            let perms = orderings(members, |&i| is_pred(g, &arcs[i].child.pair));
            let mut next = Vec::new();
            for combo in &combos {
                for perm in &perms {
                    let mut c = combo.clone();
                    c.extend(perm.iter().enumerate().map(|(pos, &i)| (i, pos as u32)));
                    next.push(c);
                }
            }
            combos = next;
        }
        Some(combos)
    };
    let Some(lefts) = side_orders(&|a| &a.left_addr, left) else {
        return Vec::new();
    };
    let Some(rights) = side_orders(&|a| &a.right_addr, right) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for l in &lefts {
        for r in &rights {
            let mut arcs = arcs.to_vec();
            for &(i, o) in l {
                arcs[i].left_order = o;
            }
            for &(i, o) in r {
                arcs[i].right_order = o;
            }
            out.push(arcs);
        }
    }
    out
}

/// Bounded enumeration of derivations under the natural definition.
pub struct NaturalEnumerator<'g> {
    grammar: &'g SynchronousGrammar,
    left: TagGrammar,
    right: TagGrammar,
    mode: WellFormednessMode,
    memo: HashMap<(String, usize), Vec<PairedDerivation>>,
}

impl<'g> NaturalEnumerator<'g> {
    pub fn new(grammar: &'g SynchronousGrammar, mode: WellFormednessMode) -> Self {
        NaturalEnumerator {
            grammar,
            left: grammar.left_grammar(),
            right: grammar.right_grammar(),
            mode,
            memo: HashMap::new(),
        }
    }

    /// Valid derivations rooted at `pair` with exactly `size` nodes, distinct
    /// as `(D_L, D_R)` pairs.
    pub fn exact(&mut self, pair: &str, size: usize) -> Vec<PairedDerivation> {
        let key = (pair.to_string(), size);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        let out = self.compute(pair, size);
        self.memo.insert(key, out.clone());
        out
    }

    fn compute(&mut self, pair_name: &str, size: usize) -> Vec<PairedDerivation> {
        let Some(pair) = self.grammar.pair(pair_name) else {
            return Vec::new();
        };
        if size == 0 {
            return Vec::new();
        }
        // each link sanctions at most one arc: per link, skip or choose
        // (operating pair, subderivation)
        let options: Vec<Vec<&TreePair>> = pair
            .links
            .iter()
            .map(|link| self.grammar.pairs.iter().filter(|q| pair.admits(link, q)).collect())
            .collect();

        let mut selections: Vec<Vec<PairedArc>> = Vec::new();
        let mut current = Vec::new();
        self.choose(pair, &options, 0, size - 1, &mut current, &mut selections);

        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for arcs in selections {
            for ordered in order_arcs(&arcs, &self.left, &self.right, self.mode) {
                let d = PairedDerivation {
                    pair: pair_name.to_string(),
                    children: ordered,
                };
                if !self.locally_valid(&d) {
                    continue;
                }
                if seen.insert(d.projection()) {
                    out.push(d);
                }
            }
        }
        out
    }

    fn choose(
        &mut self,
        pair: &TreePair,
        options: &[Vec<&TreePair>],
        link_index: usize,
        remaining: usize,
        current: &mut Vec<PairedArc>,
        out: &mut Vec<Vec<PairedArc>>,
    ) {
        if link_index == pair.links.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        self.choose(pair, options, link_index + 1, remaining, current, out);
        let link = &pair.links[link_index];
        for q in &options[link_index] {
            for sub_size in 1..=remaining {
                for child in self.exact(&q.name, sub_size) {
                    current.push(PairedArc {
                        left_addr: link.left.clone(),
                        right_addr: link.right.clone(),
                        left_order: 0,
                        right_order: 0,
                        child,
                    });
                    self.choose(pair, options, link_index + 1, remaining - sub_size, current, out);
                    current.pop();
                }
            }
        }
    }

    /// Well-formedness of the root node only; children were validated when
    /// they were generated.
    fn locally_valid(&self, d: &PairedDerivation) -> bool {
        validate_node(&d.left(), &self.left, self.mode).is_ok() && validate_node(&d.right(), &self.right, self.mode).is_ok()
    }

    /// Every valid derivation from a start pair with at most `max_nodes` nodes.
    pub fn up_to(&mut self, max_nodes: usize) -> Vec<PairedDerivation> {
        let starts: Vec<String> = self.grammar.start_pairs().map(|p| p.name.clone()).collect();
        let mut out = Vec::new();
        for size in 1..=max_nodes {
            for s in &starts {
                out.extend(self.exact(s, size));
            }
        }
        out
    }
}

/// The string-pair language restricted to derivations of at most `max_nodes`
/// nodes, under multi-adjunction well-formedness.
pub fn enumerate_natural(g: &SynchronousGrammar, max_nodes: usize) -> BTreeSet<(String, String)> {
    enumerate_natural_with(g, max_nodes, WellFormednessMode::MultiAdjunction)
}

pub fn enumerate_natural_with(
    g: &SynchronousGrammar,
    max_nodes: usize,
    mode: WellFormednessMode,
) -> BTreeSet<(String, String)> {
    let (left, right) = (g.left_grammar(), g.right_grammar());
    NaturalEnumerator::new(g, mode)
        .up_to(max_nodes)
        .iter()
        .map(|d| {
            let l = build(&d.left(), &left).yield_tokens();
            let r = build(&d.right(), &right).yield_tokens();
            g.render_pair(&l, &r)
        })
        .collect()
}

/// The left component as a plain TAG, with each linked left node narrowed by
/// the constraints of its right partners.
///
/// * allowed trees: the node's own set intersected with the union of its
///   partners' sets;
/// * obligatory: set if the node is obligatory, or if some partner is
///   obligatory and every link at that partner leads back to this node;
/// * a node where no pair can operate across any of its links allows nothing
///   (an obligatory one keeps an empty selective set, so it can never be
///   satisfied).
///
/// Unlinked nodes allow nothing: synchronous operations happen only at links.
pub fn project_left(g: &SynchronousGrammar) -> TagGrammar {
    let mut trees = Vec::new();
    for pair in &g.pairs {
        let mut left = pair.left.clone();
        let mut by_left: BTreeMap<&TreeAddress, Vec<&Link>> = BTreeMap::new();
        for link in &pair.links {
            by_left.entry(&link.left).or_default().push(link);
        }
        let mut updated = Vec::new();
        for (addr, node) in pair.left.tree.nodes() {
            if node.foot || node.label.nonterminal().is_none() || by_left.contains_key(&addr) {
                continue;
            }
            updated.push((addr, dead(node.constraint.obligatory)));
        }
        for (addr, links) in by_left {
            let own = pair.left.tree.node_at(addr).expect("validated link").constraint.clone();
            let mut partner_allowed = Allowed::Nothing;
            let mut obligatory = own.obligatory;
            for link in &links {
                let partner = &pair.right.tree.node_at(&link.right).expect("validated link").constraint;
                partner_allowed = partner_allowed.union(&partner.allowed);
                let sole_partner = pair.links.iter().filter(|l| l.right == link.right).all(|l| &l.left == addr);
                obligatory |= partner.obligatory && sole_partner;
            }
            let operable = links.iter().any(|link| g.pairs.iter().any(|q| pair.admits(link, q)));
            let constraint = if operable {
                Constraint {
                    allowed: own.allowed.intersect(&partner_allowed),
                    obligatory,
                }
            } else {
                dead(obligatory)
            };
            updated.push((addr.clone(), constraint));
        }
        for (addr, constraint) in updated {
            let mut node = left.tree.node_at(&addr).expect("validated link").clone();
            node.constraint = constraint;
            left.tree = left.tree.with_subtree(&addr, node).expect("validated link");
        }
        trees.push(left);
    }
    TagGrammar::new(&g.name, trees)
        .expect("pair names are unique")
        .with_start(g.start.as_ref().map(|(l, _)| l.clone()))
        .with_join(g.join_left.clone())
}

/// Constraint for a node nothing can operate at.
fn dead(obligatory: bool) -> Constraint {
    if obligatory {
        Constraint {
            allowed: Allowed::Only(BTreeSet::new()),
            obligatory: true,
        }
    } else {
        Constraint::null()
    }
}

pub fn project_right(g: &SynchronousGrammar) -> TagGrammar {
    project_left(&g.swapped())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tree::Label;

    /// Both adverbs plus John; `int_outer` puts intentionally outermost on
    /// the right.
    fn fig9(int_outer: bool) -> PairedDerivation {
        let (t, i) = if int_outer { (1, 0) } else { (0, 1) };
        PairedDerivation::leaf("blink")
            .with_child([1], [2], (0, 0), PairedDerivation::leaf("john"))
            .with_child(TreeAddress::root(), TreeAddress::root(), (0, t), PairedDerivation::leaf("twice"))
            .with_child([2], TreeAddress::root(), (0, i), PairedDerivation::leaf("intentionally"))
    }

    #[test]
    fn fig9_modes() {
        let g = fixtures::blink();
        let d = fig9(true);
        assert_eq!(check_paired(&d, &g, WellFormednessMode::MultiAdjunction), Ok(()));
        assert!(matches!(
            check_paired(&d, &g, WellFormednessMode::Standard),
            Err(SyncViolation::RightIllFormed(_))
        ));
        assert_eq!(check_sync_derivation(&d.split(), &g, WellFormednessMode::MultiAdjunction), Ok(()));
    }

    #[test]
    fn fig9_readings() {
        let g = fixtures::blink();
        for (int_outer, want) in [(true, "int(twice(blink(john)))"), (false, "twice(int(blink(john)))")] {
            let (l, r) = derived_pair(&fig9(int_outer).split(), &g).unwrap();
            assert_eq!(g.render_pair(&l.yield_tokens(), &r.yield_tokens()), ("John intentionally blinked twice".into(), want.into()));
        }
    }

    #[test]
    fn unlinked_arc_is_unsanctioned() {
        let g = fixtures::blink();
        let d = PairedDerivation::leaf("blink")
            .with_child([1], [2], (0, 0), PairedDerivation::leaf("john"))
            .with_child([2], [2], (0, 0), PairedDerivation::leaf("twice"));
        assert!(check_paired(&d, &g, WellFormednessMode::MultiAdjunction).is_err());
        let reused = PairedDerivation::leaf("blink")
            .with_child([1], [2], (0, 0), PairedDerivation::leaf("john"))
            .with_child(TreeAddress::root(), TreeAddress::root(), (0, 0), PairedDerivation::leaf("twice"))
            .with_child(TreeAddress::root(), TreeAddress::root(), (1, 1), PairedDerivation::leaf("twice"));
        assert!(matches!(
            check_paired(&reused, &g, WellFormednessMode::MultiAdjunction),
            Err(SyncViolation::Unsanctioned(_))
        ));
    }

    #[test]
    fn bijection_must_preserve_parents() {
        let g = fixtures::blink();
        let mut sd = fig9(false).split();
        // map john's node onto twice's and vice versa
        sd.map = vec![(vec![], vec![]), (vec![0], vec![1]), (vec![1], vec![0]), (vec![2], vec![2])];
        let verdict = check_sync_derivation(&sd, &g, WellFormednessMode::MultiAdjunction);
        assert!(matches!(verdict, Err(SyncViolation::Unsanctioned(_))), "{verdict:?}");
        let mut partial = fig9(false).split();
        partial.map.pop();
        assert!(matches!(
            check_sync_derivation(&partial, &g, WellFormednessMode::MultiAdjunction),
            Err(SyncViolation::NotIsomorphic(_))
        ));
    }

    #[test]
    fn symmetric_under_swap() {
        let g = fixtures::blink();
        let sw = g.swapped();
        for d in [fig9(true), fig9(false)] {
            let sd = d.split();
            assert_eq!(
                check_sync_derivation(&sd, &g, WellFormednessMode::Standard).is_ok(),
                check_sync_derivation(&sd.swapped(), &sw, WellFormednessMode::Standard).is_ok()
            );
            assert!(check_sync_derivation(&sd.swapped(), &sw, WellFormednessMode::MultiAdjunction).is_ok());
        }
    }

    #[test]
    fn natural_language_of_blink() {
        let g = fixtures::blink();
        assert!(enumerate_natural(&g, 1).is_empty());
        let l2 = enumerate_natural(&g, 2);
        assert_eq!(l2, BTreeSet::from([("John blinked".to_string(), "blink(john)".to_string())]));
        let l4 = enumerate_natural(&g, 4);
        assert!(l4.contains(&("John intentionally blinked twice".into(), "int(twice(blink(john)))".into())));
        assert!(l4.contains(&("John intentionally blinked twice".into(), "twice(int(blink(john)))".into())));
        assert_eq!(l4.len(), 5);
        assert_eq!(enumerate_natural(&g, 6), l4);
    }

    #[test]
    fn natural_language_of_eight() {
        let g = fixtures::eight();
        for n in 1..=6 {
            assert_eq!(enumerate_natural(&g, n), BTreeSet::from([(String::new(), String::new())]));
        }
    }

    #[test]
    fn projection_of_eight_kills_the_auxiliary_links() {
        let g = fixtures::eight();
        let p = project_left(&g);
        let alpha = p.get("alpha").unwrap();
        assert_eq!(alpha.tree.node_at(&[1].into()).unwrap().constraint, Constraint::selective(["beta1"]));
        assert_eq!(alpha.tree.node_at(&[2].into()).unwrap().constraint, Constraint::null());
        let beta1 = p.get("beta1").unwrap();
        let inner = beta1.tree.node_at(&[2].into()).unwrap();
        assert!(inner.constraint.obligatory);
        assert_eq!(inner.constraint.allowed, Allowed::Only(BTreeSet::new()));
    }

    #[test]
    fn projection_of_linkless_grammar_keeps_trees() {
        let g = fixtures::smoke();
        let p = project_left(&g);
        let hello = p.get("hello").unwrap();
        assert_eq!(hello.tree.yield_tokens(), g.pair("hello").unwrap().left.tree.yield_tokens());
        assert_eq!(hello.tree.root.label, Label::Nonterminal("S".into()));
        let q = project_right(&g);
        assert_eq!(q.get("hello").unwrap().tree.yield_tokens(), vec!["bonjour", "monde"]);
    }
}
