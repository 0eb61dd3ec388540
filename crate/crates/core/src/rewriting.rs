//! Rewriting semantics: operate on a current derived tree pair at one of its
//! links, carrying the remaining links along.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::synchronous::{Link, SynchronousGrammar, TreePair};
use crate::tree::{adjoin, check_site, remap, substitute, Tree, TreeAddress, TreeKind};

/// A link in a derived pair, tagged with the pair it came from.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateLink {
    pub link: Link,
    /// `pair#k`, the pair and diacritic that introduced the link.
    pub origin: String,
}

impl fmt::Display for StateLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}{} ⌢ {}{}",
            self.origin, self.link.left, self.link.left_side, self.link.right, self.link.right_side
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivedPairState {
    pub left: Tree,
    pub right: Tree,
    /// Kept sorted so equal states compare equal.
    pub links: Vec<StateLink>,
}

pub fn init_state(p: &TreePair) -> Result<DerivedPairState> {
    if p.kind() != TreeKind::Initial {
        return Err(Error::State(p.name.clone()));
    }
    let mut links: Vec<StateLink> = p
        .links
        .iter()
        .map(|l| StateLink {
            link: l.clone(),
            origin: format!("{}#{}", p.name, l.id),
        })
        .collect();
    links.sort();
    Ok(DerivedPairState {
        left: p.left.tree.clone(),
        right: p.right.tree.clone(),
        links,
    })
}

/// One rewriting step: `p` operates at both ends of `link`, which is used up.
/// Survivors are readdressed; links of `p` are added below the sites.
pub fn rewrite_step(s: &DerivedPairState, link: &StateLink, p: &TreePair) -> Result<DerivedPairState> {
    let Some(index) = s.links.iter().position(|l| l == link) else {
        return Err(Error::Link(link.to_string()));
    };
    let chosen = &link.link;
    let (left, right) = match p.kind() {
        TreeKind::Auxiliary => (
            adjoin(&s.left, &p.left, &chosen.left)?,
            adjoin(&s.right, &p.right, &chosen.right)?,
        ),
        TreeKind::Initial => (
            substitute(&s.left, &p.left, &chosen.left)?,
            substitute(&s.right, &p.right, &chosen.right)?,
        ),
    };
    let move_addr = |site: &TreeAddress, foot: Option<TreeAddress>, u: &TreeAddress, side| match foot {
        Some(f) => remap(site, &f, u, side),
        // a substitution leaf has nothing beneath it, so only the site itself
        // could move, and it stays put
        None => u.clone(),
    };
    let (left_foot, right_foot) = (p.left.foot_address(), p.right.foot_address());
    let mut links: Vec<StateLink> = s
        .links
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, sl)| StateLink {
            link: Link {
                left: move_addr(&chosen.left, left_foot.clone(), &sl.link.left, sl.link.left_side),
                right: move_addr(&chosen.right, right_foot.clone(), &sl.link.right, sl.link.right_side),
                ..sl.link.clone()
            },
            origin: sl.origin.clone(),
        })
        .collect();
    links.extend(p.links.iter().map(|l| StateLink {
        link: Link {
            left: chosen.left.concat(&l.left),
            right: chosen.right.concat(&l.right),
            ..l.clone()
        },
        origin: format!("{}#{}", p.name, l.id),
    }));
    links.sort();
    Ok(DerivedPairState { left, right, links })
}

impl DerivedPairState {
    /// No pending obligatory adjunction and no open substitution site on
    /// either side.
    pub fn is_complete(&self) -> bool {
        [&self.left, &self.right]
            .iter()
            .all(|t| !t.has_obligatory_node() && !t.has_unfilled_substitution())
    }

    /// Every `(link index, pair)` that can rewrite this state.
    pub fn moves<'g>(&self, g: &'g SynchronousGrammar) -> Vec<(usize, &'g TreePair)> {
        let mut out = Vec::new();
        for (i, sl) in self.links.iter().enumerate() {
            for p in &g.pairs {
                if check_site(&self.left, &p.left, &sl.link.left) && check_site(&self.right, &p.right, &sl.link.right) {
                    out.push((i, p));
                }
            }
        }
        out
    }

    pub fn yields(&self, g: &SynchronousGrammar) -> (String, String) {
        g.render_pair(&self.left.yield_tokens(), &self.right.yield_tokens())
    }

    pub fn links_resolve(&self) -> bool {
        self.links
            .iter()
            .all(|l| self.left.resolves(&l.link.left) && self.right.resolves(&l.link.right))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteTrace {
    pub initial: String,
    /// The link used and the pair applied at each step.
    pub steps: Vec<(StateLink, String)>,
    pub final_state: DerivedPairState,
}

impl RewriteTrace {
    pub fn replay(&self, g: &SynchronousGrammar) -> Result<DerivedPairState> {
        let start = g.pair(&self.initial).ok_or_else(|| Error::UnknownTree(self.initial.clone()))?;
        let mut state = init_state(start)?;
        for (link, name) in &self.steps {
            let p = g.pair(name).ok_or_else(|| Error::UnknownTree(name.clone()))?;
            state = rewrite_step(&state, link, p)?;
        }
        Ok(state)
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "start {}", self.initial)?;
        for (link, pair) in &self.steps {
            write!(f, "\n  {pair} at {link}")?;
        }
        Ok(())
    }
}

/// Breadth-first search over states reachable in at most `max_steps` steps.
/// Returns each complete yield pair with the shortest trace reaching it.
pub fn explore(g: &SynchronousGrammar, max_steps: usize) -> BTreeMap<(String, String), RewriteTrace> {
    struct Entry {
        state: DerivedPairState,
        parent: Option<(usize, StateLink, String)>,
        root: String,
        depth: usize,
    }
    let mut entries: Vec<Entry> = Vec::new();
    let mut seen: HashSet<DerivedPairState> = HashSet::new();
    let mut queue = VecDeque::new();
    for p in g.start_pairs() {
        let state = init_state(p).expect("start pairs are initial");
        if seen.insert(state.clone()) {
            queue.push_back(entries.len());
            entries.push(Entry {
                state,
                parent: None,
                root: p.name.clone(),
                depth: 0,
            });
        }
    }

    let trace = |entries: &[Entry], mut i: usize| {
        let final_state = entries[i].state.clone();
        let initial = entries[i].root.clone();
        let mut steps = Vec::new();
        while let Some((parent, link, pair)) = &entries[i].parent {
            steps.push((link.clone(), pair.clone()));
            i = *parent;
        }
        steps.reverse();
        RewriteTrace {
            initial,
            steps,
            final_state,
        }
    };

    let mut out = BTreeMap::new();
    while let Some(i) = queue.pop_front() {
        if entries[i].state.is_complete() {
            let key = entries[i].state.yields(g);
            if !out.contains_key(&key) {
                out.insert(key, trace(&entries, i));
            }
        }
        if entries[i].depth == max_steps {
            continue;
        }
        let state = entries[i].state.clone();
        for (li, p) in state.moves(g) {
            let link = state.links[li].clone();
            let Ok(next) = rewrite_step(&state, &link, p) else {
                continue;
            };
            if seen.insert(next.clone()) {
                queue.push_back(entries.len());
                entries.push(Entry {
                    state: next,
                    parent: Some((i, link, p.name.clone())),
                    root: entries[i].root.clone(),
                    depth: entries[i].depth + 1,
                });
            }
        }
    }
    out
}

/// Yield pairs of complete states reachable in at most `max_steps` steps.
pub fn enumerate_rewriting(g: &SynchronousGrammar, max_steps: usize) -> BTreeSet<(String, String)> {
    explore(g, max_steps).into_keys().collect()
}
