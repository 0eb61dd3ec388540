//! Text outlines and Graphviz DOT for trees and derivations.

use std::fmt::Write as _;

use crate::derivation::DerivationNode;
use crate::tree::{Allowed, Label, Node, Tree, TreeAddress};

/// Node label with its marks, as shown in renderings.
pub fn node_caption(node: &Node) -> String {
    let mut s = match &node.label {
        Label::Terminal(w) if w.is_empty() => "\"\"".to_string(),
        other => other.to_string(),
    };
    if node.substitution {
        s.push('↓');
    }
    if node.foot {
        s.push('*');
    }
    match &node.constraint.allowed {
        Allowed::Any => {}
        Allowed::Nothing => s.push_str(" NA"),
        Allowed::Only(names) => {
            let _ = write!(s, " SA({})", names.iter().cloned().collect::<Vec<_>>().join(","));
        }
    }
    if node.constraint.obligatory {
        s.push_str(" OA");
    }
    s
}

pub fn tree_text(tree: &Tree) -> String {
    fn go(node: &Node, prefix: &str, last: bool, root: bool, out: &mut String) {
        if root {
            let _ = writeln!(out, "{}", node_caption(node));
        } else {
            let _ = writeln!(out, "{prefix}{}{}", if last { "└─ " } else { "├─ " }, node_caption(node));
        }
        let child_prefix = if root {
            String::new()
        } else {
            format!("{prefix}{}", if last { "   " } else { "│  " })
        };
        for (i, c) in node.children.iter().enumerate() {
            go(c, &child_prefix, i + 1 == node.children.len(), false, out);
        }
    }
    let mut out = String::new();
    go(&tree.root, "", true, true, &mut out);
    out
}

pub fn derivation_text(d: &DerivationNode) -> String {
    fn go(d: &DerivationNode, depth: usize, edge: Option<String>, out: &mut String) {
        let indent = "  ".repeat(depth);
        match edge {
            Some(e) => {
                let _ = writeln!(out, "{indent}{e}: {}", d.tree);
            }
            None => {
                let _ = writeln!(out, "{indent}{}", d.tree);
            }
        }
        for arc in &d.children {
            let stacked = d.children.iter().filter(|a| a.addr == arc.addr).count() > 1;
            let e = if stacked {
                format!("{}/{}", arc.addr, arc.order)
            } else {
                arc.addr.to_string()
            };
            go(&arc.child, depth + 1, Some(e), out);
        }
    }
    let mut out = String::new();
    go(&d.canonical(), 0, None, &mut out);
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn tree_nodes_dot(tree: &Tree, prefix: &str, out: &mut String) {
    for (addr, node) in tree.nodes() {
        let id = node_id(prefix, &addr);
        let shape = if node.label.nonterminal().is_some() { "plaintext" } else { "none" };
        let _ = writeln!(out, "    {id} [label=\"{}\", shape={shape}];", escape(&node_caption(node)));
        if let Some(parent) = addr.parent() {
            let _ = writeln!(out, "    {} -> {id};", node_id(prefix, &parent));
        }
    }
}

fn node_id(prefix: &str, addr: &TreeAddress) -> String {
    let path: Vec<String> = addr.path().iter().map(u32::to_string).collect();
    format!("{prefix}_{}", path.join("_"))
}

pub fn tree_dot(tree: &Tree, name: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n    node [fontname=\"Helvetica\"];\n    edge [arrowhead=none];\n", escape(name));
    tree_nodes_dot(tree, "n", &mut out);
    out.push_str("}\n");
    out
}

pub fn derivation_dot(d: &DerivationNode, name: &str) -> String {
    fn go(d: &DerivationNode, id: &mut usize, out: &mut String) -> usize {
        let me = *id;
        *id += 1;
        let _ = writeln!(out, "    d{me} [label=\"{}\"];", escape(&d.tree));
        for arc in &d.children {
            let child = go(&arc.child, id, out);
            let stacked = d.children.iter().filter(|a| a.addr == arc.addr).count() > 1;
            let label = if stacked {
                format!("{}/{}", arc.addr, arc.order)
            } else {
                arc.addr.to_string()
            };
            let _ = writeln!(out, "    d{me} -> d{child} [label=\"{}\"];", escape(&label));
        }
        me
    }
    let mut out = format!("digraph \"{}\" {{\n    node [shape=box, fontname=\"Helvetica\"];\n", escape(name));
    go(&d.canonical(), &mut 0, &mut out);
    out.push_str("}\n");
    out
}

/// Two trees side by side with dashed edges for links.
pub fn pair_dot(left: &Tree, right: &Tree, links: &[(String, TreeAddress, TreeAddress)], name: &str) -> String {
    let mut out = format!("digraph \"{}\" {{\n    node [fontname=\"Helvetica\"];\n    edge [arrowhead=none];\n", escape(name));
    out.push_str("  subgraph cluster_left {\n    label=\"left\";\n");
    tree_nodes_dot(left, "l", &mut out);
    out.push_str("  }\n  subgraph cluster_right {\n    label=\"right\";\n");
    tree_nodes_dot(right, "r", &mut out);
    out.push_str("  }\n");
    for (label, l, r) in links {
        let _ = writeln!(
            out,
            "  {} -> {} [style=dashed, constraint=false, color=gray40, label=\"{}\"];",
            node_id("l", l),
            node_id("r", r),
            escape(label)
        );
    }
    out.push_str("}\n");
    out
}
