//! Small SVG drawings of trees, tree pairs and derivations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use stag::derivation::DerivationNode;
use stag::tree::{Allowed, Label, Node, Tree, TreeAddress};

const LEVEL: f64 = 52.0;
const PAD: f64 = 18.0;
const GAP: f64 = 60.0;

/// A node to draw: a main label, an optional small note under it, and an
/// optional label on the edge from its parent.
#[derive(Debug, Clone)]
pub struct Drawn {
    pub key: String,
    pub label: String,
    pub note: String,
    pub edge: String,
    pub terminal: bool,
    pub children: Vec<Drawn>,
}

fn slot(d: &Drawn) -> f64 {
    let chars = d.label.chars().count().max(d.note.chars().count()).max(2);
    chars as f64 * 8.0 + 14.0
}

struct Placed {
    x: f64,
    y: f64,
}

fn place(d: &Drawn, depth: usize, next: &mut f64, out: &mut BTreeMap<String, Placed>) -> f64 {
    let x = if d.children.is_empty() {
        let w = slot(d);
        let x = *next + w / 2.0;
        *next += w;
        x
    } else {
        let xs: Vec<f64> = d.children.iter().map(|c| place(c, depth + 1, next, out)).collect();
        let x = (xs[0] + xs[xs.len() - 1]) / 2.0;
        // a wide label over a narrow subtree still needs its room
        if d.children.len() == 1 {
            *next = next.max(x + slot(d) / 2.0);
        }
        x
    };
    out.insert(
        d.key.clone(),
        Placed {
            x,
            y: depth as f64 * LEVEL,
        },
    );
    x
}

fn depth(d: &Drawn) -> usize {
    1 + d.children.iter().map(depth).max().unwrap_or(0)
}

pub fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Canvas {
    body: String,
    positions: BTreeMap<String, (f64, f64)>,
    width: f64,
    height: f64,
}

/// Draws `d` with its left edge at `x0`; positions are keyed by `prefix` + key.
fn draw(d: &Drawn, x0: f64, prefix: &str, canvas: &mut Canvas) {
    let mut placed = BTreeMap::new();
    let mut next = 0.0;
    place(d, 0, &mut next, &mut placed);
    let top = PAD + 10.0;

    fn edges(d: &Drawn, placed: &BTreeMap<String, Placed>, x0: f64, top: f64, out: &mut String) {
        let p = &placed[&d.key];
        for c in &d.children {
            let q = &placed[&c.key];
            let _ = writeln!(
                out,
                r#"<line class="edge" x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
                x0 + p.x,
                top + p.y + 8.0,
                x0 + q.x,
                top + q.y - 12.0
            );
            if !c.edge.is_empty() {
                let _ = writeln!(
                    out,
                    r#"<text class="edge-label" x="{:.1}" y="{:.1}">{}</text>"#,
                    x0 + (p.x + q.x) / 2.0 + 4.0,
                    top + (p.y + q.y) / 2.0,
                    escape(&c.edge)
                );
            }
            edges(c, placed, x0, top, out);
        }
    }
    edges(d, &placed, x0, top, &mut canvas.body);

    fn nodes(d: &Drawn, placed: &BTreeMap<String, Placed>, x0: f64, top: f64, out: &mut String) {
        let p = &placed[&d.key];
        let class = if d.terminal { "word" } else { "label" };
        let _ = writeln!(
            out,
            r#"<text class="{class}" x="{:.1}" y="{:.1}">{}</text>"#,
            x0 + p.x,
            top + p.y,
            escape(&d.label)
        );
        if !d.note.is_empty() {
            let _ = writeln!(
                out,
                r#"<text class="note" x="{:.1}" y="{:.1}">{}</text>"#,
                x0 + p.x,
                top + p.y + 12.0,
                escape(&d.note)
            );
        }
        for c in &d.children {
            nodes(c, placed, x0, top, out);
        }
    }
    nodes(d, &placed, x0, top, &mut canvas.body);

    for (k, p) in &placed {
        canvas.positions.insert(format!("{prefix}{k}"), (x0 + p.x, top + p.y));
    }
    canvas.width = canvas.width.max(x0 + next + PAD);
    canvas.height = canvas.height.max(top + (depth(d) as f64 - 1.0) * LEVEL + 24.0 + PAD);
}

fn finish(canvas: Canvas) -> String {
    format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" class="tree" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.0} {h:.0}">
{body}</svg>"#,
        w = canvas.width,
        h = canvas.height,
        body = canvas.body
    )
}

fn new_canvas() -> Canvas {
    Canvas {
        body: String::new(),
        positions: BTreeMap::new(),
        width: 0.0,
        height: 0.0,
    }
}

fn note(node: &Node) -> String {
    let mut s = match &node.constraint.allowed {
        Allowed::Any => String::new(),
        Allowed::Nothing => "NA".into(),
        Allowed::Only(names) => format!("SA({})", names.iter().cloned().collect::<Vec<_>>().join(",")),
    };
    if node.constraint.obligatory {
        if !s.is_empty() {
            s.push(' ');
        }
        s.push_str("OA");
    }
    s
}

pub fn from_tree(tree: &Tree) -> Drawn {
    fn go(node: &Node, addr: TreeAddress) -> Drawn {
        let mut label = match &node.label {
            Label::Nonterminal(l) => l.clone(),
            Label::Terminal(w) if w.is_empty() => "\"\"".into(),
            Label::Terminal(w) => w.clone(),
            Label::Epsilon => "ε".into(),
        };
        if node.substitution {
            label.push('↓');
        }
        if node.foot {
            label.push('*');
        }
        Drawn {
            key: addr.to_string(),
            label,
            note: note(node),
            edge: String::new(),
            terminal: node.label.nonterminal().is_none(),
            children: node
                .children
                .iter()
                .enumerate()
                .map(|(i, c)| go(c, addr.child(i as u32 + 1)))
                .collect(),
        }
    }
    go(&tree.root, TreeAddress::root())
}

pub fn from_derivation(d: &DerivationNode) -> Drawn {
    fn go(d: &DerivationNode, key: String, edge: String) -> Drawn {
        let children = d
            .children
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let stacked = d.children.iter().filter(|b| b.addr == a.addr).count() > 1;
                let edge = if stacked { format!("{}/{}", a.addr, a.order) } else { a.addr.to_string() };
                go(&a.child, format!("{key}.{i}"), edge)
            })
            .collect();
        Drawn {
            key,
            label: d.tree.clone(),
            note: String::new(),
            edge,
            terminal: false,
            children,
        }
    }
    go(&d.canonical(), "d".into(), String::new())
}

pub fn tree_svg(tree: &Tree) -> String {
    let mut c = new_canvas();
    draw(&from_tree(tree), PAD, "", &mut c);
    finish(c)
}

pub fn derivation_svg(d: &DerivationNode) -> String {
    let mut c = new_canvas();
    draw(&from_derivation(d), PAD, "", &mut c);
    finish(c)
}

/// Two trees side by side, with a dashed curve for each `(label, left, right)`
/// link.
pub fn pair_svg(left: &Tree, right: &Tree, links: &[(String, TreeAddress, TreeAddress)]) -> String {
    let mut c = new_canvas();
    draw(&from_tree(left), PAD, "l:", &mut c);
    let x0 = c.width + GAP;
    draw(&from_tree(right), x0, "r:", &mut c);
    for (i, (label, l, r)) in links.iter().enumerate() {
        let (Some(&(x1, y1)), Some(&(x2, y2))) = (c.positions.get(&format!("l:{l}")), c.positions.get(&format!("r:{r}")))
        else {
            continue;
        };
        let lift = 26.0 + 10.0 * i as f64;
        let _ = writeln!(
            c.body,
            r#"<path class="link" d="M {:.1} {:.1} C {:.1} {:.1}, {:.1} {:.1}, {:.1} {:.1}"/>"#,
            x1 + 8.0,
            y1 - 4.0,
            x1 + 40.0,
            y1 - lift,
            x2 - 40.0,
            y2 - lift,
            x2 - 8.0,
            y2 - 4.0
        );
        let _ = writeln!(
            c.body,
            r#"<text class="link-label" x="{:.1}" y="{:.1}">{}</text>"#,
            (x1 + x2) / 2.0,
            (y1 + y2) / 2.0 - lift * 0.75,
            escape(label)
        );
    }
    finish(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use stag::fixtures;

    #[test]
    fn leaves_do_not_overlap() {
        let g = fixtures::blink();
        let t = &g.pair("blink").unwrap().right.tree;
        let mut placed = BTreeMap::new();
        let mut next = 0.0;
        place(&from_tree(t), 0, &mut next, &mut placed);
        let mut leaves: Vec<f64> = t.nodes().iter().filter(|(_, n)| n.is_leaf()).map(|(a, _)| placed[&a.to_string()].x).collect();
        let sorted = {
            let mut s = leaves.clone();
            s.sort_by(f64::total_cmp);
            s
        };
        assert_eq!(leaves, sorted);
        leaves.dedup();
        assert_eq!(leaves.len(), 4);
    }

    #[test]
    fn labels_are_escaped() {
        assert_eq!(escape("<a & \"b\">"), "&lt;a &amp; &quot;b&quot;&gt;");
    }
}
