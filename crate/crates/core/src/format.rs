//! Text format for synchronous grammars and plain TAGs.
//!
//! ```text
//! # comment
//! grammar blink
//! start S F
//! default-side up
//! join right ""
//! pair john   left (NP John)  right (T john)
//! pair blink  left (S#1 NP↓#3 (VP#2 (V blinked)))
//!             right (F#1#2 (R blink "(") T↓#3 ")")
//! ```
//!
//! A tree is `(Label[markers] child…)`. A bare child without markers is a
//! terminal, as is any quoted string; `<eps>` is the empty leaf. Markers:
//! `↓` or `!` substitution, `*` foot, `:NA`, `:OA`, `:SA(a,b)`, `:mod`,
//! `:pred`, and `#k` link diacritics with an optional side `^` (top) or `v`
//! (bottom). A plain TAG uses `tree NAME TREE` entries and `start S`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::synchronous::{Link, SynchronousGrammar, TreePair};
use crate::tree::{Allowed, Constraint, ElementaryTree, Label, Node, Side, TagGrammar, TreeAddress, TreeClass};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Atom(String),
    Quoted(String),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_atom_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '"')
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            '(' => {
                bump!();
                out.push(Token { tok: Tok::Open, line: l, column: col });
            }
            ')' => {
                bump!();
                out.push(Token { tok: Tok::Close, line: l, column: col });
            }
            '"' => {
                bump!();
                let mut s = String::new();
                loop {
                    match bump!() {
                        None => return Err(Error::load(l, col, "unterminated string")),
                        Some('"') => break,
                        Some('\\') => match bump!() {
                            Some(e @ ('"' | '\\')) => s.push(e),
                            Some('n') => s.push('\n'),
                            _ => return Err(Error::load(line, column, "bad escape in string")),
                        },
                        Some(c) => s.push(c),
                    }
                }
                out.push(Token { tok: Tok::Quoted(s), line: l, column: col });
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if is_atom_char(c) {
                        s.push(c);
                        bump!();
                    } else if c == '(' && s.ends_with(":SA") {
                        // the selective list belongs to the atom
                        while let Some(c) = bump!() {
                            s.push(c);
                            if c == ')' {
                                break;
                            }
                        }
                        if !s.ends_with(')') {
                            return Err(Error::load(l, col, "unterminated :SA list"));
                        }
                    } else {
                        break;
                    }
                }
                out.push(Token { tok: Tok::Atom(s), line: l, column: col });
            }
        }
    }
    Ok(out)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map_or(self.end, |t| (t.line, t.column))
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (l, c) = self.here();
        Err(Error::load(l, c, msg))
    }

    fn atom(&mut self, what: &str) -> Result<(String, usize, usize)> {
        match self.peek() {
            Some(Token { tok: Tok::Atom(s), line, column }) => {
                let out = (s.clone(), *line, *column);
                self.pos += 1;
                Ok(out)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn string(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Token { tok: Tok::Quoted(s) | Tok::Atom(s), .. }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        match self.peek() {
            Some(Token { tok: Tok::Atom(s), .. }) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(format!("expected `{kw}`")),
        }
    }
}

/// Diacritic occurrence while reading one tree.
#[derive(Debug, Clone)]
struct Diacritic {
    id: u32,
    side: Option<Side>,
    addr: TreeAddress,
    line: usize,
    column: usize,
}

struct ParsedTree {
    root: Node,
    class: Option<TreeClass>,
    diacritics: Vec<Diacritic>,
    line: usize,
    column: usize,
}

#[derive(Default)]
struct Markers {
    substitution: bool,
    foot: bool,
    constraint: Constraint,
    na: bool,
    class: Option<TreeClass>,
    links: Vec<(u32, Option<Side>)>,
}

const MARKER_START: [char; 5] = ['↓', '!', '*', ':', '#'];

fn split_label(atom: &str) -> (&str, &str) {
    let cut = atom.find(|c| MARKER_START.contains(&c)).unwrap_or(atom.len());
    atom.split_at(cut)
}

fn parse_markers(mut rest: &str, line: usize, column: usize) -> Result<Markers> {
    let err = |msg: String| Err(Error::load(line, column, msg));
    let mut m = Markers::default();
    while let Some(c) = rest.chars().next() {
        rest = &rest[c.len_utf8()..];
        match c {
            '↓' | '!' => m.substitution = true,
            '*' => m.foot = true,
            ':' => {
                let word_len = rest.find(|c: char| MARKER_START.contains(&c) || c == '(').unwrap_or(rest.len());
                let (word, tail) = rest.split_at(word_len);
                rest = tail;
                match word {
                    "NA" => m.na = true,
                    "OA" => m.constraint.obligatory = true,
                    "mod" => m.class = Some(TreeClass::Modifier),
                    "pred" => m.class = Some(TreeClass::Predicative),
                    "SA" => {
                        let Some(close) = rest.find(')').filter(|_| rest.starts_with('(')) else {
                            return err(":SA needs a parenthesised list".into());
                        };
                        let names: BTreeSet<String> = rest[1..close]
                            .split(',')
                            .map(str::trim)
                            .filter(|s| !s.is_empty())
                            .map(String::from)
                            .collect();
                        rest = &rest[close + 1..];
                        m.constraint.allowed = match &m.constraint.allowed {
                            Allowed::Only(prev) => Allowed::Only(prev.union(&names).cloned().collect()),
                            _ => Allowed::Only(names),
                        };
                    }
                    other => return err(format!("unknown marker :{other}")),
                }
            }
            '#' => {
                let digits = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
                let Ok(id) = rest[..digits].parse::<u32>() else {
                    return err("# must be followed by a link number".into());
                };
                rest = &rest[digits..];
                let side = match rest.chars().next() {
                    Some('^') => Some(Side::Up),
                    Some('v') => Some(Side::Down),
                    _ => None,
                };
                if side.is_some() {
                    rest = &rest[1..];
                }
                m.links.push((id, side));
            }
            other => return err(format!("unexpected {other:?} in node markers")),
        }
    }
    if m.na {
        if m.constraint.allowed != Allowed::Any {
            return err(":NA and :SA on one node".into());
        }
        m.constraint.allowed = Allowed::Nothing;
    }
    Ok(m)
}

fn parse_tree(cur: &mut Cursor) -> Result<ParsedTree> {
    let (line, column) = cur.here();
    if !matches!(cur.peek().map(|t| &t.tok), Some(Tok::Open)) {
        return cur.fail("expected `(` to start a tree");
    }
    let mut diacritics = Vec::new();
    let mut class = None;
    let root = parse_node(cur, &mut Vec::new(), &mut diacritics, &mut class)?;
    Ok(ParsedTree {
        root,
        class,
        diacritics,
        line,
        column,
    })
}

fn parse_node(
    cur: &mut Cursor,
    path: &mut Vec<u32>,
    diacritics: &mut Vec<Diacritic>,
    class: &mut Option<TreeClass>,
) -> Result<Node> {
    let Some(tok) = cur.next() else {
        return cur.fail("unexpected end of input inside a tree");
    };
    let (atom, line, column, children) = match tok.tok {
        Tok::Quoted(s) => return Ok(Node::terminal(s)),
        Tok::Close => return Err(Error::load(tok.line, tok.column, "unexpected `)`")),
        Tok::Atom(s) if s == "<eps>" => return Ok(Node::epsilon()),
        Tok::Atom(s) => {
            let (label, markers) = split_label(&s);
            if markers.is_empty() {
                if label.is_empty() {
                    return Err(Error::load(tok.line, tok.column, "empty label"));
                }
                return Ok(Node::terminal(label));
            }
            (s.clone(), tok.line, tok.column, None)
        }
        Tok::Open => {
            let Some(Token { tok: Tok::Atom(s), line, column }) = cur.next() else {
                return cur.fail("expected a node label after `(`");
            };
            let mut children = Vec::new();
            let mut index = 0;
            loop {
                match cur.peek().map(|t| &t.tok) {
                    Some(Tok::Close) => {
                        cur.pos += 1;
                        break;
                    }
                    None => return Err(Error::load(line, column, "unclosed `(`")),
                    _ => {
                        index += 1;
                        path.push(index);
                        children.push(parse_node(cur, path, diacritics, class)?);
                        path.pop();
                    }
                }
            }
            (s, line, column, Some(children))
        }
    };
    let (label, markers) = split_label(&atom);
    if label.is_empty() || label == "<eps>" {
        return Err(Error::load(line, column, "nonterminal needs a label"));
    }
    let m = parse_markers(markers, line, column)?;
    if let Some(c) = m.class {
        if !path.is_empty() {
            return Err(Error::load(line, column, ":mod and :pred belong on the root"));
        }
        *class = Some(c);
    }
    for &(id, side) in &m.links {
        diacritics.push(Diacritic {
            id,
            side,
            addr: TreeAddress::new(path.clone()),
            line,
            column,
        });
    }
    Ok(Node {
        label: Label::Nonterminal(label.to_string()),
        constraint: m.constraint,
        substitution: m.substitution,
        foot: m.foot,
        children: children.unwrap_or_default(),
    })
}

fn elementary(name: &str, parsed: &ParsedTree) -> Result<ElementaryTree> {
    ElementaryTree::new(name, parsed.root.clone(), parsed.class.unwrap_or_default())
        .map_err(|e| Error::load(parsed.line, parsed.column, e.to_string()))
}

fn diacritic_map(parsed: &ParsedTree, half: &str) -> Result<BTreeMap<u32, Diacritic>> {
    let mut out = BTreeMap::new();
    for d in &parsed.diacritics {
        if out.insert(d.id, d.clone()).is_some() {
            return Err(Error::load(d.line, d.column, format!("#{} appears twice in the {half} tree", d.id)));
        }
    }
    Ok(out)
}

/// Either kind of grammar document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Synchronous(SynchronousGrammar),
    Tag(TagGrammar),
}

pub fn load_document(text: &str) -> Result<Document> {
    let tokens = tokenize(text)?;
    let has = |kw: &str| tokens.iter().any(|t| t.tok == Tok::Atom(kw.into()));
    if has("tree") && !has("pair") {
        load_tag(text).map(Document::Tag)
    } else {
        load_grammar(text).map(Document::Synchronous)
    }
}

fn cursor(text: &str) -> Result<Cursor> {
    let tokens = tokenize(text)?;
    let lines = text.lines().count().max(1);
    let last_col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    Ok(Cursor {
        tokens,
        pos: 0,
        end: (lines, last_col),
    })
}

pub fn load_grammar(text: &str) -> Result<SynchronousGrammar> {
    let mut cur = cursor(text)?;
    let mut name = String::from("grammar");
    let mut start = None;
    let mut default_side = Side::Up;
    let (mut join_left, mut join_right) = (String::from(" "), String::from(" "));
    let mut raw: Vec<(String, usize, usize, ParsedTree, ParsedTree)> = Vec::new();

    while cur.peek().is_some() {
        let (kw, line, column) = cur.atom("a keyword")?;
        match kw.as_str() {
            "grammar" => name = cur.atom("grammar name")?.0,
            "start" => {
                let l = cur.atom("left start symbol")?.0;
                let r = cur.atom("right start symbol")?.0;
                start = Some((l, r));
            }
            "default-side" => {
                default_side = match cur.atom("up or down")?.0.as_str() {
                    "up" | "^" | "↑" => Side::Up,
                    "down" | "v" | "↓" => Side::Down,
                    _ => return Err(Error::load(line, column, "default-side is up or down")),
                }
            }
            "join" => {
                let which = cur.atom("left or right")?.0;
                let s = cur.string("a separator string")?;
                match which.as_str() {
                    "left" => join_left = s,
                    "right" => join_right = s,
                    _ => return Err(Error::load(line, column, "join takes left or right")),
                }
            }
            "pair" => {
                let (pname, pl, pc) = cur.atom("pair name")?;
                cur.keyword("left")?;
                let left = parse_tree(&mut cur)?;
                cur.keyword("right")?;
                let right = parse_tree(&mut cur)?;
                if raw.iter().any(|(n, ..)| n == &pname) {
                    return Err(Error::load(pl, pc, format!("duplicate pair name {pname}")));
                }
                raw.push((pname, pl, pc, left, right));
            }
            other => return Err(Error::load(line, column, format!("unknown keyword {other:?}"))),
        }
    }

    let mut pairs = Vec::new();
    for (pname, pl, pc, left, right) in raw {
        let lt = elementary(&pname, &left)?;
        let rt = elementary(&pname, &right)?;
        if lt.kind != rt.kind {
            return Err(Error::load(pl, pc, format!("{pname}: initial tree paired with auxiliary tree")));
        }
        let ld = diacritic_map(&left, "left")?;
        let rd = diacritic_map(&right, "right")?;
        for (id, d) in &ld {
            if !rd.contains_key(id) {
                return Err(Error::load(d.line, d.column, format!("#{id} has no partner in the right tree")));
            }
        }
        for (id, d) in &rd {
            if !ld.contains_key(id) {
                return Err(Error::load(d.line, d.column, format!("#{id} has no partner in the left tree")));
            }
        }
        let links = ld
            .iter()
            .map(|(id, l)| {
                let r = &rd[id];
                Link {
                    id: *id,
                    left: l.addr.clone(),
                    left_side: l.side.unwrap_or(default_side),
                    right: r.addr.clone(),
                    right_side: r.side.unwrap_or(default_side),
                }
            })
            .collect();
        pairs.push(TreePair::new(lt, rt, links).map_err(|e| Error::load(pl, pc, e.to_string()))?);
    }
    let mut g = SynchronousGrammar::new(name, pairs)?;
    g.start = start;
    g.default_side = default_side;
    g.join_left = join_left;
    g.join_right = join_right;
    Ok(g)
}

pub fn load_tag(text: &str) -> Result<TagGrammar> {
    let mut cur = cursor(text)?;
    let mut name = String::from("grammar");
    let mut start = None;
    let mut join = String::from(" ");
    let mut trees: Vec<ElementaryTree> = Vec::new();
    while cur.peek().is_some() {
        let (kw, line, column) = cur.atom("a keyword")?;
        match kw.as_str() {
            "grammar" => name = cur.atom("grammar name")?.0,
            "start" => start = Some(cur.atom("start symbol")?.0),
            "join" => join = cur.string("a separator string")?,
            "tree" => {
                let (tname, tl, tc) = cur.atom("tree name")?;
                let parsed = parse_tree(&mut cur)?;
                if let Some(d) = parsed.diacritics.first() {
                    return Err(Error::load(d.line, d.column, "link diacritics need a pair"));
                }
                if trees.iter().any(|t| t.name == tname) {
                    return Err(Error::load(tl, tc, format!("duplicate tree name {tname}")));
                }
                trees.push(elementary(&tname, &parsed)?);
            }
            other => return Err(Error::load(line, column, format!("unknown keyword {other:?}"))),
        }
    }
    Ok(TagGrammar::new(name, trees)?.with_start(start).with_join(join))
}

fn is_bare(word: &str) -> bool {
    !word.is_empty() && word != "<eps>" && word.chars().all(|c| is_atom_char(c) && !MARKER_START.contains(&c))
}

fn quote(word: &str) -> String {
    if is_bare(word) {
        return word.to_string();
    }
    let mut s = String::from("\"");
    for c in word.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}

fn write_node(
    out: &mut String,
    node: &Node,
    addr: &TreeAddress,
    class: Option<TreeClass>,
    links: &BTreeMap<TreeAddress, Vec<(u32, Side)>>,
    default_side: Side,
) {
    let label = match &node.label {
        Label::Terminal(w) => {
            out.push_str(&quote(w));
            return;
        }
        Label::Epsilon => {
            out.push_str("<eps>");
            return;
        }
        Label::Nonterminal(l) => l,
    };
    let mut head = label.clone();
    if node.substitution {
        head.push('↓');
    }
    if node.foot {
        head.push('*');
    }
    match &node.constraint.allowed {
        Allowed::Any => {}
        Allowed::Nothing => head.push_str(":NA"),
        Allowed::Only(names) => {
            let _ = write!(head, ":SA({})", names.iter().cloned().collect::<Vec<_>>().join(","));
        }
    }
    if node.constraint.obligatory {
        head.push_str(":OA");
    }
    if class == Some(TreeClass::Modifier) {
        head.push_str(":mod");
    }
    for (id, side) in links.get(addr).into_iter().flatten() {
        let _ = write!(head, "#{id}");
        if *side != default_side {
            head.push(if *side == Side::Up { '^' } else { 'v' });
        }
    }
    let marked = node.substitution || node.foot;
    if node.children.is_empty() && marked {
        out.push_str(&head);
        return;
    }
    out.push('(');
    out.push_str(&head);
    for (i, child) in node.children.iter().enumerate() {
        out.push(' ');
        write_node(out, child, &addr.child(i as u32 + 1), None, links, default_side);
    }
    out.push(')');
}

fn tree_text(t: &ElementaryTree, links: &BTreeMap<TreeAddress, Vec<(u32, Side)>>, default_side: Side) -> String {
    let mut out = String::new();
    let class = t.is_auxiliary().then_some(t.class);
    write_node(&mut out, &t.tree.root, &TreeAddress::root(), class, links, default_side);
    out
}

/// One elementary tree in the file syntax, without link diacritics.
pub fn tree_to_string(t: &ElementaryTree) -> String {
    tree_text(t, &BTreeMap::new(), Side::Up)
}

pub fn serialize_grammar(g: &SynchronousGrammar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "grammar {}", g.name);
    if let Some((l, r)) = &g.start {
        let _ = writeln!(out, "start {l} {r}");
    }
    if g.default_side == Side::Down {
        out.push_str("default-side down\n");
    }
    if g.join_left != " " {
        let _ = writeln!(out, "join left {}", quote_always(&g.join_left));
    }
    if g.join_right != " " {
        let _ = writeln!(out, "join right {}", quote_always(&g.join_right));
    }
    for p in &g.pairs {
        let mut left_links: BTreeMap<TreeAddress, Vec<(u32, Side)>> = BTreeMap::new();
        let mut right_links: BTreeMap<TreeAddress, Vec<(u32, Side)>> = BTreeMap::new();
        for l in &p.links {
            left_links.entry(l.left.clone()).or_default().push((l.id, l.left_side));
            right_links.entry(l.right.clone()).or_default().push((l.id, l.right_side));
        }
        let _ = writeln!(out, "\npair {}", p.name);
        let _ = writeln!(out, "  left  {}", tree_text(&p.left, &left_links, g.default_side));
        let _ = writeln!(out, "  right {}", tree_text(&p.right, &right_links, g.default_side));
    }
    out
}

fn quote_always(s: &str) -> String {
    let q = quote(s);
    if q.starts_with('"') {
        q
    } else {
        format!("\"{q}\"")
    }
}

pub fn serialize_tag(g: &TagGrammar) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "grammar {}", g.name);
    if let Some(s) = &g.start {
        let _ = writeln!(out, "start {s}");
    }
    if g.join != " " {
        let _ = writeln!(out, "join {}", quote_always(&g.join));
    }
    let none = BTreeMap::new();
    for t in &g.trees {
        let _ = writeln!(out, "tree {} {}", t.name, tree_text(t, &none, Side::Up));
    }
    out
}
