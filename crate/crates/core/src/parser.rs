//! Bottom-up chart parsing for a component TAG.
//!
//! Items are spans over the input, with a foot gap for material under an
//! auxiliary tree's foot:
//!
//! * `Prefix(η, k, i, j, gap)`: the first `k` children of η span `i..j`;
//! * `Bottom(η, i, j, gap)`: all children of η;
//! * `Stack(η, state, i, j, gap)`: η's bottom wrapped in zero or more
//!   adjoined trees, innermost first;
//! * `Top(η, i, j, gap)`: η with its adjunctions complete.
//!
//! Each item keeps every way it was built, so the chart doubles as a packed
//! forest of derivation trees. Positions may be wildcards, which parses every
//! string of a given length at once.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::derivation::{DerivationArc, DerivationNode, WellFormednessMode};
use crate::error::{Error, Result};
use crate::tree::{Constraint, Label, TagGrammar, TreeAddress, TreeClass, TreeKind};

type Gap = Option<(u32, u32)>;
type ItemId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum StackState {
    /// Nothing adjoined yet.
    Bare,
    /// Only modifiers so far; more may follow.
    Open,
    /// Nothing more may adjoin.
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Item {
    Prefix { node: usize, k: u32, i: u32, j: u32, gap: Gap },
    Bottom { node: usize, i: u32, j: u32, gap: Gap },
    Stack { node: usize, state: StackState, i: u32, j: u32, gap: Gap },
    Top { node: usize, i: u32, j: u32, gap: Gap },
}

#[derive(Debug, Clone, Copy)]
enum Back {
    Axiom,
    /// Prefix extended by the top of the next child.
    Extend(ItemId, ItemId),
    /// Same derivations as the referenced item.
    Close(ItemId),
    /// A stack with the root top of an auxiliary tree wrapped around it.
    Adjoin(ItemId, ItemId),
    /// An initial tree's root top at a substitution site.
    Substitute(ItemId),
}

#[derive(Debug, Clone)]
enum Kind {
    Terminal(String),
    Epsilon,
    Foot,
    Substitution,
    Internal,
}

#[derive(Debug, Clone)]
struct NodeInfo {
    tree: usize,
    addr: TreeAddress,
    label: Label,
    constraint: Constraint,
    kind: Kind,
    children: Vec<usize>,
    /// Parent node and this node's 1-based position under it.
    parent: Option<(usize, u32)>,
}

#[derive(Debug, Clone)]
struct TreeInfo {
    name: String,
    kind: TreeKind,
    class: TreeClass,
    root: usize,
    start: bool,
}

#[derive(Debug, Clone)]
struct Compiled {
    trees: Vec<TreeInfo>,
    nodes: Vec<NodeInfo>,
}

impl Compiled {
    fn new(g: &TagGrammar) -> Self {
        let mut trees = Vec::new();
        let mut nodes: Vec<NodeInfo> = Vec::new();
        for (t, et) in g.trees.iter().enumerate() {
            let base = nodes.len();
            let mut index = HashMap::new();
            for (addr, node) in et.tree.nodes() {
                index.insert(addr.clone(), nodes.len());
                let kind = match &node.label {
                    Label::Terminal(w) => Kind::Terminal(w.clone()),
                    Label::Epsilon => Kind::Epsilon,
                    Label::Nonterminal(_) if node.foot => Kind::Foot,
                    Label::Nonterminal(_) if node.substitution => Kind::Substitution,
                    Label::Nonterminal(_) => Kind::Internal,
                };
                let parent = addr
                    .parent()
                    .map(|p| (index[&p], *addr.path().last().expect("non-root")));
                nodes.push(NodeInfo {
                    tree: t,
                    addr,
                    label: node.label.clone(),
                    constraint: node.constraint.clone(),
                    kind,
                    children: Vec::new(),
                    parent,
                });
            }
            for id in base..nodes.len() {
                if let Some((p, _)) = nodes[id].parent {
                    nodes[p].children.push(id);
                }
            }
            trees.push(TreeInfo {
                name: et.name.clone(),
                kind: et.kind,
                class: et.class,
                root: base,
                start: g.is_start(et),
            });
        }
        Compiled { trees, nodes }
    }
}

fn merge(a: Gap, b: Gap) -> Option<Gap> {
    match (a, b) {
        (Some(_), Some(_)) => None,
        (x, None) | (None, x) => Some(x),
    }
}

fn advance(state: StackState, class: TreeClass, mode: WellFormednessMode) -> Option<StackState> {
    match (mode, state, class) {
        (_, StackState::Closed, _) => None,
        (WellFormednessMode::Standard, StackState::Bare, _) => Some(StackState::Closed),
        (WellFormednessMode::Standard, _, _) => None,
        (WellFormednessMode::MultiAdjunction, _, TreeClass::Modifier) => Some(StackState::Open),
        (WellFormednessMode::MultiAdjunction, _, TreeClass::Predicative) => Some(StackState::Closed),
    }
}

/// Number of derivations in a forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForestCount {
    Finite(u128),
    Infinite,
}

/// All derivations of an input, packed.
#[derive(Debug, Clone)]
pub struct DerivationForest {
    compiled: Rc<Compiled>,
    items: Vec<Item>,
    backs: Vec<Vec<Back>>,
    goals: Vec<ItemId>,
    /// Combination attempts made while filling the chart.
    pub work: u64,
}

struct Chart<'a> {
    c: &'a Compiled,
    mode: WellFormednessMode,
    items: Vec<Item>,
    backs: Vec<Vec<Back>>,
    ids: HashMap<Item, ItemId>,
    agenda: Vec<ItemId>,
    /// Prefix items by (node, k, end).
    prefixes: HashMap<(usize, u32, u32), Vec<ItemId>>,
    /// Top items by (node, start).
    tops: HashMap<(usize, u32), Vec<ItemId>>,
    /// Stack items by (label, span).
    stacks: HashMap<(Label, u32, u32), Vec<ItemId>>,
    /// Auxiliary root tops by (label, gap).
    aux_tops: HashMap<(Label, u32, u32), Vec<ItemId>>,
    /// Substitution sites by label.
    sites: HashMap<Label, Vec<usize>>,
    work: u64,
}

impl Chart<'_> {
    fn add(&mut self, item: Item, back: Back) {
        if let Some(&id) = self.ids.get(&item) {
            self.backs[id].push(back);
            return;
        }
        let id = self.items.len();
        self.items.push(item);
        self.backs.push(vec![back]);
        self.ids.insert(item, id);
        self.agenda.push(id);
    }

    fn axioms(&mut self, lattice: &[Option<String>]) {
        let n = lattice.len() as u32;
        for node in 0..self.c.nodes.len() {
            match &self.c.nodes[node].kind {
                Kind::Terminal(w) => {
                    for (i, tok) in lattice.iter().enumerate() {
                        if tok.as_ref().is_none_or(|t| t == w) {
                            let i = i as u32;
                            self.add(Item::Top { node, i, j: i + 1, gap: None }, Back::Axiom);
                        }
                    }
                }
                Kind::Epsilon => {
                    for i in 0..=n {
                        self.add(Item::Top { node, i, j: i, gap: None }, Back::Axiom);
                    }
                }
                Kind::Foot => {
                    for p in 0..=n {
                        for q in p..=n {
                            self.add(Item::Top { node, i: p, j: q, gap: Some((p, q)) }, Back::Axiom);
                        }
                    }
                }
                Kind::Internal => {
                    for i in 0..=n {
                        self.add(Item::Prefix { node, k: 0, i, j: i, gap: None }, Back::Axiom);
                    }
                }
                Kind::Substitution => {}
            }
        }
    }

    fn run(&mut self) {
        while let Some(id) = self.agenda.pop() {
            match self.items[id] {
                Item::Prefix { node, k, i, j, gap } => self.on_prefix(id, node, k, i, j, gap),
                Item::Bottom { node, i, j, gap } => {
                    self.add(Item::Stack { node, state: StackState::Bare, i, j, gap }, Back::Close(id));
                }
                Item::Stack { node, state, i, j, gap } => self.on_stack(id, node, state, i, j, gap),
                Item::Top { node, i, j, gap } => self.on_top(id, node, i, j, gap),
            }
        }
    }

    fn on_prefix(&mut self, id: ItemId, node: usize, k: u32, i: u32, j: u32, gap: Gap) {
        let info = &self.c.nodes[node];
        if k as usize == info.children.len() {
            self.add(Item::Bottom { node, i, j, gap }, Back::Close(id));
            return;
        }
        let child = info.children[k as usize];
        self.prefixes.entry((node, k, j)).or_default().push(id);
        let tops = self.tops.get(&(child, j)).cloned().unwrap_or_default();
        for t in tops {
            self.work += 1;
            let Item::Top { j: l, gap: g2, .. } = self.items[t] else { unreachable!() };
            if let Some(g) = merge(gap, g2) {
                self.add(Item::Prefix { node, k: k + 1, i, j: l, gap: g }, Back::Extend(id, t));
            }
        }
    }

    fn on_top(&mut self, id: ItemId, node: usize, i: u32, j: u32, gap: Gap) {
        let info = &self.c.nodes[node];
        let Some((parent, pos)) = info.parent else {
            let tree = &self.c.trees[info.tree];
            match (tree.kind, gap) {
                (TreeKind::Initial, None) => {
                    let sites = self.sites.get(&info.label).cloned().unwrap_or_default();
                    for site in sites {
                        self.work += 1;
                        if self.c.nodes[site].constraint.permits(&tree.name) {
                            self.add(Item::Top { node: site, i, j, gap: None }, Back::Substitute(id));
                        }
                    }
                }
                (TreeKind::Auxiliary, Some((p, q))) => {
                    let label = info.label.clone();
                    self.aux_tops.entry((label.clone(), p, q)).or_default().push(id);
                    let stacks = self.stacks.get(&(label, p, q)).cloned().unwrap_or_default();
                    for s in stacks {
                        self.try_adjoin(s, id);
                    }
                }
                _ => {}
            }
            return;
        };
        self.tops.entry((node, i)).or_default().push(id);
        let prefixes = self.prefixes.get(&(parent, pos - 1, i)).cloned().unwrap_or_default();
        for p in prefixes {
            self.work += 1;
            let Item::Prefix { i: h, gap: g1, .. } = self.items[p] else { unreachable!() };
            if let Some(g) = merge(g1, gap) {
                self.add(Item::Prefix { node: parent, k: pos, i: h, j, gap: g }, Back::Extend(p, id));
            }
        }
    }

    fn on_stack(&mut self, id: ItemId, node: usize, state: StackState, i: u32, j: u32, gap: Gap) {
        let info = &self.c.nodes[node];
        if !(info.constraint.obligatory && state == StackState::Bare) {
            self.add(Item::Top { node, i, j, gap }, Back::Close(id));
        }
        let label = info.label.clone();
        self.stacks.entry((label.clone(), i, j)).or_default().push(id);
        let aux = self.aux_tops.get(&(label, i, j)).cloned().unwrap_or_default();
        for a in aux {
            self.try_adjoin(id, a);
        }
    }

    fn try_adjoin(&mut self, stack: ItemId, aux: ItemId) {
        self.work += 1;
        let Item::Stack { node, state, gap, .. } = self.items[stack] else { unreachable!() };
        let Item::Top { node: aux_root, i, j, .. } = self.items[aux] else { unreachable!() };
        let tree = &self.c.trees[self.c.nodes[aux_root].tree];
        if !self.c.nodes[node].constraint.permits(&tree.name) {
            return;
        }
        if let Some(next) = advance(state, tree.class, self.mode) {
            self.add(Item::Stack { node, state: next, i, j, gap }, Back::Adjoin(stack, aux));
        }
    }
}

/// Every token of `tokens` must be a terminal of `g`.
pub fn parse(g: &TagGrammar, tokens: &[String]) -> Result<DerivationForest> {
    parse_with(g, tokens, WellFormednessMode::MultiAdjunction)
}

pub fn parse_with(g: &TagGrammar, tokens: &[String], mode: WellFormednessMode) -> Result<DerivationForest> {
    let alphabet = g.terminals();
    if let Some(bad) = tokens.iter().find(|t| !alphabet.contains(*t)) {
        return Err(Error::Lexicon(bad.clone()));
    }
    let lattice: Vec<Option<String>> = tokens.iter().cloned().map(Some).collect();
    Ok(parse_lattice(g, &lattice, mode))
}

/// Parses a lattice where `None` matches any terminal.
pub fn parse_lattice(g: &TagGrammar, lattice: &[Option<String>], mode: WellFormednessMode) -> DerivationForest {
    let compiled = Rc::new(Compiled::new(g));
    let mut sites: HashMap<Label, Vec<usize>> = HashMap::new();
    for (id, n) in compiled.nodes.iter().enumerate() {
        if matches!(n.kind, Kind::Substitution) {
            sites.entry(n.label.clone()).or_default().push(id);
        }
    }
    let mut chart = Chart {
        c: &compiled,
        mode,
        items: Vec::new(),
        backs: Vec::new(),
        ids: HashMap::new(),
        agenda: Vec::new(),
        prefixes: HashMap::new(),
        tops: HashMap::new(),
        stacks: HashMap::new(),
        aux_tops: HashMap::new(),
        sites,
        work: 0,
    };
    chart.axioms(lattice);
    chart.run();
    let n = lattice.len() as u32;
    let goals = compiled
        .trees
        .iter()
        .filter(|t| t.start)
        .filter_map(|t| chart.ids.get(&Item::Top { node: t.root, i: 0, j: n, gap: None }).copied())
        .collect();
    let Chart { items, backs, work, .. } = chart;
    DerivationForest {
        compiled: compiled.clone(),
        items,
        backs,
        goals,
        work,
    }
}

/// Arcs collected for one elementary tree, plus the pending adjunction stack
/// at the current node (innermost first).
#[derive(Debug, Clone, Default)]
struct Partial {
    arcs: Vec<DerivationArc>,
    stack: Vec<DerivationNode>,
}

type Memo = HashMap<(ItemId, usize), Rc<Vec<Partial>>>;

impl DerivationForest {
    pub fn is_empty(&self) -> bool {
        self.goals.is_empty()
    }

    /// Number of chart items built.
    pub fn items(&self) -> usize {
        self.items.len()
    }

    fn tree_of(&self, item: ItemId) -> usize {
        let node = match self.items[item] {
            Item::Prefix { node, .. } | Item::Bottom { node, .. } | Item::Stack { node, .. } | Item::Top { node, .. } => node,
        };
        self.compiled.nodes[node].tree
    }

    fn node_of(&self, item: ItemId) -> usize {
        match self.items[item] {
            Item::Prefix { node, .. } | Item::Bottom { node, .. } | Item::Stack { node, .. } | Item::Top { node, .. } => node,
        }
    }

    fn edges(&self, id: ItemId) -> impl Iterator<Item = ItemId> + '_ {
        self.backs[id].iter().flat_map(|b| match *b {
            Back::Axiom => vec![],
            Back::Close(a) | Back::Substitute(a) => vec![a],
            Back::Extend(a, b) | Back::Adjoin(a, b) => vec![a, b],
        })
    }

    /// Whether some item reachable from a goal depends on itself.
    fn cyclic(&self) -> bool {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut mark = vec![0u8; self.items.len()];
        for &g in &self.goals {
            if mark[g] != 0 {
                continue;
            }
            let mut stack = vec![(g, false)];
            while let Some((id, exit)) = stack.pop() {
                if exit {
                    mark[id] = 2;
                    continue;
                }
                if mark[id] != 0 {
                    continue;
                }
                mark[id] = 1;
                stack.push((id, true));
                for e in self.edges(id) {
                    match mark[e] {
                        1 => return true,
                        0 => stack.push((e, false)),
                        _ => {}
                    }
                }
            }
        }
        false
    }

    pub fn count(&self) -> ForestCount {
        if self.cyclic() {
            return ForestCount::Infinite;
        }
        let mut memo: HashMap<ItemId, u128> = HashMap::new();
        fn go(f: &DerivationForest, id: ItemId, memo: &mut HashMap<ItemId, u128>) -> u128 {
            if let Some(&c) = memo.get(&id) {
                return c;
            }
            let mut total: u128 = 0;
            for b in &f.backs[id] {
                let c = match *b {
                    Back::Axiom => 1,
                    Back::Close(a) | Back::Substitute(a) => go(f, a, memo),
                    Back::Extend(a, b) | Back::Adjoin(a, b) => go(f, a, memo).saturating_mul(go(f, b, memo)),
                };
                total = total.saturating_add(c);
            }
            memo.insert(id, total);
            total
        }
        ForestCount::Finite(
            self.goals
                .iter()
                .fold(0u128, |acc, &g| acc.saturating_add(go(self, g, &mut memo))),
        )
    }

    fn partials(&self, id: ItemId, size: usize, memo: &mut Memo) -> Rc<Vec<Partial>> {
        if let Some(hit) = memo.get(&(id, size)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for b in &self.backs[id] {
            match *b {
                Back::Axiom => {
                    if size == 0 {
                        out.push(Partial::default());
                    }
                }
                Back::Close(a) => {
                    let from = self.partials(a, size, memo);
                    if matches!(self.items[id], Item::Top { .. }) {
                        let addr = &self.compiled.nodes[self.node_of(id)].addr;
                        for p in from.iter() {
                            let mut arcs = p.arcs.clone();
                            let m = p.stack.len() as u32;
                            for (pos, child) in p.stack.iter().enumerate() {
                                arcs.push(DerivationArc {
                                    addr: addr.clone(),
                                    order: m - 1 - pos as u32,
                                    child: child.clone(),
                                });
                            }
                            out.push(Partial { arcs, stack: Vec::new() });
                        }
                    } else {
                        out.extend(from.iter().cloned());
                    }
                }
                Back::Extend(a, b) => {
                    for left in 0..=size {
                        let xs = self.partials(a, left, memo);
                        if xs.is_empty() {
                            continue;
                        }
                        let ys = self.partials(b, size - left, memo);
                        for x in xs.iter() {
                            for y in ys.iter() {
                                let mut arcs = x.arcs.clone();
                                arcs.extend(y.arcs.iter().cloned());
                                out.push(Partial { arcs, stack: Vec::new() });
                            }
                        }
                    }
                }
                Back::Adjoin(stack, aux) => {
                    if size == 0 {
                        continue;
                    }
                    let name = &self.compiled.trees[self.tree_of(aux)].name;
                    for aux_size in 0..size {
                        let ys = self.partials(aux, aux_size, memo);
                        if ys.is_empty() {
                            continue;
                        }
                        let xs = self.partials(stack, size - 1 - aux_size, memo);
                        for x in xs.iter() {
                            for y in ys.iter() {
                                let mut p = x.clone();
                                p.stack.push(DerivationNode {
                                    tree: name.clone(),
                                    children: y.arcs.clone(),
                                });
                                out.push(p);
                            }
                        }
                    }
                }
                Back::Substitute(root) => {
                    if size == 0 {
                        continue;
                    }
                    let name = &self.compiled.trees[self.tree_of(root)].name;
                    let addr = &self.compiled.nodes[self.node_of(id)].addr;
                    for y in self.partials(root, size - 1, memo).iter() {
                        out.push(Partial {
                            arcs: vec![DerivationArc {
                                addr: addr.clone(),
                                order: 0,
                                child: DerivationNode {
                                    tree: name.clone(),
                                    children: y.arcs.clone(),
                                },
                            }],
                            stack: Vec::new(),
                        });
                    }
                }
            }
        }
        let out = Rc::new(out);
        memo.insert((id, size), out.clone());
        out
    }

    /// Derivations with exactly `size` nodes.
    pub fn of_size(&self, size: usize) -> Vec<DerivationNode> {
        let mut memo = Memo::new();
        self.of_size_memo(size, &mut memo)
    }

    fn of_size_memo(&self, size: usize, memo: &mut Memo) -> Vec<DerivationNode> {
        if size == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for &g in &self.goals {
            let name = &self.compiled.trees[self.tree_of(g)].name;
            for p in self.partials(g, size - 1, memo).iter() {
                out.push(DerivationNode {
                    tree: name.clone(),
                    children: p.arcs.clone(),
                });
            }
        }
        out
    }

    /// Size of the largest derivation, if the forest is finite.
    pub fn max_size(&self) -> Option<usize> {
        if self.cyclic() {
            return None;
        }
        fn go(f: &DerivationForest, id: ItemId, memo: &mut HashMap<ItemId, usize>) -> usize {
            if let Some(&m) = memo.get(&id) {
                return m;
            }
            let m = f.backs[id]
                .iter()
                .map(|b| match *b {
                    Back::Axiom => 0,
                    Back::Close(a) => go(f, a, memo),
                    Back::Substitute(a) => 1 + go(f, a, memo),
                    Back::Extend(a, b) => go(f, a, memo) + go(f, b, memo),
                    Back::Adjoin(a, b) => 1 + go(f, a, memo) + go(f, b, memo),
                })
                .max()
                .unwrap_or(0);
            memo.insert(id, m);
            m
        }
        let mut memo = HashMap::new();
        Some(self.goals.iter().map(|&g| 1 + go(self, g, &mut memo)).max().unwrap_or(0))
    }

    /// Derivations with at most `max_size` nodes, smallest first.
    pub fn up_to(&self, max_size: usize) -> Vec<DerivationNode> {
        let mut memo = Memo::new();
        (1..=max_size).flat_map(|s| self.of_size_memo(s, &mut memo)).collect()
    }

    /// All derivations in order of increasing size. Endless if the forest is
    /// infinite.
    pub fn iter(&self) -> impl Iterator<Item = DerivationNode> + '_ {
        let limit = self.max_size();
        let mut memo = Memo::new();
        (1..)
            .take_while(move |&s| limit.is_none_or(|m| s <= m))
            .flat_map(move |s| self.of_size_memo(s, &mut memo))
    }

    /// Every derivation of a finite forest; `None` if it is infinite.
    pub fn derivations(&self) -> Option<Vec<DerivationNode>> {
        let m = self.max_size()?;
        Some(self.up_to(m))
    }

    /// Distinct canonical derivations; used to check that packing never
    /// produces the same tree twice.
    pub fn distinct_up_to(&self, max_size: usize) -> BTreeSet<DerivationNode> {
        self.up_to(max_size).iter().map(DerivationNode::canonical).collect()
    }
}
