//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a command that must produce a result
//! produced none (or the input has an unknown token), 2 on usage and load
//! errors.

use std::io::{Read, Write};

use clap::{Parser, Subcommand, ValueEnum};

use crate::derivation::{build, WellFormednessMode};
use crate::format::{load_document, serialize_tag, Document};
use crate::mctag::to_mctag;
use crate::parser::{parse_with, DerivationForest, ForestCount};
use crate::render;
use crate::rewriting::{enumerate_rewriting, explore};
use crate::synchronous::{enumerate_natural_with, project_left, project_right, SynchronousGrammar};
use crate::transduce::transductions;
use crate::tree::TagGrammar;
use crate::Error;

pub const SEPARATOR: &str = " ||| ";

#[derive(Debug, Parser)]
#[command(name = "stag", version, about = "Synchronous tree-adjoining grammar toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Std,
    Multi,
}

impl From<Mode> for WellFormednessMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Std => WellFormednessMode::Standard,
            Mode::Multi => WellFormednessMode::MultiAdjunction,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Semantics {
    Natural,
    Rewriting,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum What {
    Grammar,
    Derivation,
    Derived,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse tokens with a TAG, or with the left projection of a synchronous grammar.
    Parse {
        /// Grammar file, or `-` for stdin.
        #[arg(short, long)]
        grammar: String,
        #[arg(short, long, value_enum, default_value = "multi")]
        mode: Mode,
        /// Most derivations to print.
        #[arg(long, default_value_t = 20)]
        limit: usize,
        /// Input tokens; read from stdin when absent.
        tokens: Vec<String>,
    },
    /// Map a left string to right strings.
    Transduce {
        #[arg(short, long)]
        grammar: String,
        tokens: Vec<String>,
    },
    /// Complete derived pairs reachable by rewriting.
    Rewrite {
        #[arg(short, long)]
        grammar: String,
        #[arg(long)]
        max_steps: usize,
        /// Print the steps leading to each pair.
        #[arg(long)]
        trace: bool,
    },
    /// The bounded string-pair language.
    Enumerate {
        #[arg(short, long)]
        grammar: String,
        #[arg(long, value_enum, default_value = "natural")]
        mode: Semantics,
        /// Derivation nodes (natural) or rewriting steps (rewriting).
        #[arg(long)]
        bound: usize,
        /// Well-formedness used by the natural semantics.
        #[arg(long, value_enum, default_value = "multi")]
        wf: Mode,
    },
    /// One component as a plain TAG document.
    Project {
        #[arg(short, long)]
        grammar: String,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// The equivalent tree-local multicomponent TAG.
    ToMctag {
        #[arg(short, long)]
        grammar: String,
    },
    /// Draw a grammar, or the derivations and derived trees of an input.
    Render {
        #[arg(short, long)]
        grammar: String,
        #[arg(long, value_enum, default_value = "grammar")]
        what: What,
        /// Graphviz output instead of text.
        #[arg(long)]
        dot: bool,
        tokens: Vec<String>,
    },
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

enum Failure {
    Usage(String),
    Empty(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Lexicon(_) => Failure::Empty(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, S>(argv: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut io = Io { stdin, out, err };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(Failure::Empty(msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(io.err, "stag: {msg}");
            }
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(io.err, "stag: {msg}");
            2
        }
    }
}

fn read_grammar(path: &str, io: &mut Io) -> std::result::Result<Document, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
    };
    load_document(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn synchronous(path: &str, io: &mut Io) -> std::result::Result<SynchronousGrammar, Failure> {
    match read_grammar(path, io)? {
        Document::Synchronous(g) => Ok(g),
        Document::Tag(_) => Err(Failure::Usage(format!("{path}: expected a synchronous grammar"))),
    }
}

fn tokens(args: &[String], grammar_from_stdin: bool, io: &mut Io) -> std::result::Result<Vec<String>, Failure> {
    if args.is_empty() && !grammar_from_stdin {
        let mut s = String::new();
        io.stdin.read_to_string(&mut s)?;
        return Ok(s.split_whitespace().map(String::from).collect());
    }
    Ok(args.iter().flat_map(|a| a.split_whitespace()).map(String::from).collect())
}

/// Empty yields print as ε.
pub fn show(s: &str) -> &str {
    if s.is_empty() {
        "ε"
    } else {
        s
    }
}

fn pair_line(l: &str, r: &str) -> String {
    format!("{}{SEPARATOR}{}", show(l), show(r))
}

fn component(doc: Document) -> TagGrammar {
    match doc {
        Document::Synchronous(g) => project_left(&g),
        Document::Tag(g) => g,
    }
}

fn dispatch(cmd: Command, io: &mut Io) -> Outcome {
    match cmd {
        Command::Parse {
            grammar,
            mode,
            limit,
            tokens: args,
        } => {
            let g = component(read_grammar(&grammar, io)?);
            let toks = tokens(&args, grammar == "-", io)?;
            let forest = parse_with(&g, &toks, mode.into())?;
            print_forest(&forest, limit, io)?;
            if forest.is_empty() {
                return Err(Failure::Empty(String::new()));
            }
        }
        Command::Transduce { grammar, tokens: args } => {
            let g = synchronous(&grammar, io)?;
            let toks = tokens(&args, grammar == "-", io)?;
            let lg = g.left_grammar();
            let alphabet = lg.terminals();
            if let Some(bad) = toks.iter().find(|t| !alphabet.contains(*t)) {
                return Err(Error::Lexicon(bad.clone()).into());
            }
            let left = lg.render(&toks);
            let mut outputs: Vec<String> = transductions(&g, &toks).into_iter().map(|t| t.output).collect();
            outputs.sort();
            outputs.dedup();
            for r in &outputs {
                writeln!(io.out, "{}", pair_line(&left, r))?;
            }
            if outputs.is_empty() {
                return Err(Failure::Empty(String::new()));
            }
        }
        Command::Rewrite {
            grammar,
            max_steps,
            trace,
        } => {
            let g = synchronous(&grammar, io)?;
            let found = explore(&g, max_steps);
            for ((l, r), t) in &found {
                writeln!(io.out, "{}", pair_line(l, r))?;
                if trace {
                    for line in t.to_string().lines() {
                        writeln!(io.out, "    {line}")?;
                    }
                }
            }
            if found.is_empty() {
                return Err(Failure::Empty(String::new()));
            }
        }
        Command::Enumerate {
            grammar,
            mode,
            bound,
            wf,
        } => {
            let g = synchronous(&grammar, io)?;
            let pairs = match mode {
                Semantics::Natural => {
                    if bound == 0 {
                        return Err(Failure::Usage("the natural bound counts derivation nodes and must be at least 1".into()));
                    }
                    enumerate_natural_with(&g, bound, wf.into())
                }
                Semantics::Rewriting => enumerate_rewriting(&g, bound),
            };
            for (l, r) in &pairs {
                writeln!(io.out, "{}", pair_line(l, r))?;
            }
            if pairs.is_empty() {
                return Err(Failure::Empty(String::new()));
            }
        }
        Command::Project { grammar, side } => {
            let g = synchronous(&grammar, io)?;
            let p = match side {
                SideArg::Left => project_left(&g),
                SideArg::Right => project_right(&g),
            };
            write!(io.out, "{}", serialize_tag(&p))?;
        }
        Command::ToMctag { grammar } => {
            let g = synchronous(&grammar, io)?;
            write!(io.out, "{}", to_mctag(&g).to_text())?;
        }
        Command::Render {
            grammar,
            what,
            dot,
            tokens: args,
        } => {
            let doc = read_grammar(&grammar, io)?;
            match what {
                What::Grammar => render_grammar(&doc, dot, io)?,
                What::Derivation | What::Derived => {
                    let toks = tokens(&args, grammar == "-", io)?;
                    let shown = render_input(&doc, &toks, matches!(what, What::Derived), dot, io)?;
                    if shown == 0 {
                        return Err(Failure::Empty(String::new()));
                    }
                }
            }
        }
    }
    Ok(())
}

fn print_forest(forest: &DerivationForest, limit: usize, io: &mut Io) -> Outcome {
    match forest.count() {
        ForestCount::Finite(n) => writeln!(io.out, "derivations: {n}")?,
        ForestCount::Infinite => writeln!(io.out, "derivations: infinite")?,
    }
    for d in forest.iter().take(limit) {
        writeln!(io.out, "{d}")?;
    }
    Ok(())
}

fn render_grammar(doc: &Document, dot: bool, io: &mut Io) -> Outcome {
    match doc {
        Document::Tag(g) => {
            for t in &g.trees {
                if dot {
                    write!(io.out, "{}", render::tree_dot(&t.tree, &t.name))?;
                } else {
                    writeln!(io.out, "tree {}", t.name)?;
                    write!(io.out, "{}", render::tree_text(&t.tree))?;
                }
            }
        }
        Document::Synchronous(g) => {
            for p in &g.pairs {
                if dot {
                    let links: Vec<_> = p
                        .links
                        .iter()
                        .map(|l| (format!("{}", l.id), l.left.clone(), l.right.clone()))
                        .collect();
                    write!(io.out, "{}", render::pair_dot(&p.left.tree, &p.right.tree, &links, &p.name))?;
                } else {
                    writeln!(io.out, "pair {}", p.name)?;
                    for l in &p.links {
                        writeln!(io.out, "  link {l}")?;
                    }
                    writeln!(io.out, "left")?;
                    write!(io.out, "{}", render::tree_text(&p.left.tree))?;
                    writeln!(io.out, "right")?;
                    write!(io.out, "{}", render::tree_text(&p.right.tree))?;
                }
            }
        }
    }
    Ok(())
}

fn render_input(doc: &Document, toks: &[String], derived: bool, dot: bool, io: &mut Io) -> std::result::Result<usize, Failure> {
    let mut shown = 0;
    match doc {
        Document::Tag(g) => {
            let forest = parse_with(g, toks, WellFormednessMode::MultiAdjunction)?;
            for d in forest.iter().take(20) {
                shown += 1;
                let name = format!("parse{shown}");
                match (derived, dot) {
                    (true, true) => write!(io.out, "{}", render::tree_dot(&build(&d, g), &name))?,
                    (true, false) => write!(io.out, "{}", render::tree_text(&build(&d, g)))?,
                    (false, true) => write!(io.out, "{}", render::derivation_dot(&d, &name))?,
                    (false, false) => write!(io.out, "{}", render::derivation_text(&d))?,
                }
            }
        }
        Document::Synchronous(g) => {
            let (lg, rg) = (g.left_grammar(), g.right_grammar());
            for t in transductions(g, toks) {
                shown += 1;
                let name = format!("reading{shown}");
                let (dl, dr) = (t.derivation.left(), t.derivation.right());
                if !dot {
                    writeln!(io.out, "# {}", show(&t.output))?;
                }
                match (derived, dot) {
                    (true, true) => write!(io.out, "{}", render::pair_dot(&build(&dl, &lg), &build(&dr, &rg), &[], &name))?,
                    (true, false) => {
                        write!(io.out, "{}", render::tree_text(&build(&dl, &lg)))?;
                        write!(io.out, "{}", render::tree_text(&build(&dr, &rg)))?;
                    }
                    (false, true) => {
                        write!(io.out, "{}", render::derivation_dot(&dl, &format!("{name}_left")))?;
                        write!(io.out, "{}", render::derivation_dot(&dr, &format!("{name}_right")))?;
                    }
                    (false, false) => {
                        write!(io.out, "{}", render::derivation_text(&dl))?;
                        write!(io.out, "{}", render::derivation_text(&dr))?;
                    }
                }
            }
        }
    }
    Ok(shown)
}
