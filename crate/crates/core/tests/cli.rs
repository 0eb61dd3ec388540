use std::process::Command;

use stag::cli::run;

const BLINK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/blink.stag");
const EIGHT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/eight.stag");
const ABCD: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/abcd.tag");

fn stag(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("stag").chain(args.iter().copied());
    let code = run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn transduce_prints_both_readings() {
    let (code, out, _) = stag(&["transduce", "-g", BLINK, "John intentionally blinked twice"], "");
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "John intentionally blinked twice ||| int(twice(blink(john)))\nJohn intentionally blinked twice ||| twice(int(blink(john)))\n"
    );
}

#[test]
fn transduce_reads_tokens_from_stdin() {
    let (code, out, _) = stag(&["transduce", "-g", BLINK], "John\nblinked\n");
    assert_eq!((code, out.as_str()), (0, "John blinked ||| blink(john)\n"));
}

#[test]
fn grammar_from_stdin() {
    let text = std::fs::read_to_string(BLINK).unwrap();
    let (code, out, _) = stag(&["transduce", "-g", "-", "John", "blinked"], &text);
    assert_eq!((code, out.as_str()), (0, "John blinked ||| blink(john)\n"));
}

#[test]
fn empty_results_exit_one() {
    let (code, out, err) = stag(&["transduce", "-g", BLINK, "blinked John"], "");
    assert_eq!((code, out.as_str(), err.as_str()), (1, "", ""));
    let (code, _, err) = stag(&["transduce", "-g", BLINK, "Mary blinked"], "");
    assert_eq!(code, 1);
    assert!(err.contains("Mary"));
    let (code, out, _) = stag(&["parse", "-g", ABCD, "a b c"], "");
    assert_eq!((code, out.as_str()), (1, "derivations: 0\n"));
}

#[test]
fn usage_and_load_errors_exit_two() {
    assert_eq!(stag(&["frobnicate"], "").0, 2);
    assert_eq!(stag(&["transduce"], "").0, 2);
    assert_eq!(stag(&["transduce", "-g", "/no/such/file.stag", "x"], "").0, 2);
    let (code, _, err) = stag(&["transduce", "-g", "-", "x"], "grammar g\npair p left (S#1 x) right (T y)\n");
    assert_eq!(code, 2);
    assert!(err.contains("2:"), "{err}");
    assert_eq!(stag(&["enumerate", "-g", BLINK, "--bound", "0"], "").0, 2);
    assert_eq!(stag(&["--help"], "").0, 0);
}

#[test]
fn enumerate_both_semantics() {
    let (code, out, _) = stag(&["enumerate", "-g", EIGHT, "--mode", "natural", "--bound", "12"], "");
    assert_eq!((code, out.as_str()), (0, "ε ||| ε\n"));
    let (code, out, _) = stag(&["enumerate", "-g", EIGHT, "--mode", "rewriting", "--bound", "4"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "ε ||| ε\na a b b c c d d e e f f g g h h ||| ε\na b c d e f g h ||| ε\n");
    let (code, out, _) = stag(&["enumerate", "-g", BLINK, "--bound", "1"], "");
    assert_eq!((code, out.as_str()), (1, ""));
}

#[test]
fn parse_prints_count_and_derivations() {
    let (code, out, _) = stag(&["parse", "-g", ABCD, "a a b b c c d d"], "");
    assert_eq!((code, out.as_str()), (0, "derivations: 1\nalpha[ε:beta[2:beta]]\n"));
    let (code, out, _) = stag(&["parse", "-g", BLINK, "-m", "std", "John intentionally blinked twice"], "");
    assert_eq!((code, out.as_str()), (0, "derivations: 1\nblink[ε:twice 1:john 2:intentionally]\n"));
}

#[test]
fn rewrite_traces() {
    let (code, out, _) = stag(&["rewrite", "-g", BLINK, "--max-steps", "1", "--trace"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "John blinked ||| blink(john)\n    start blink\n      john at blink#3 1↑ ⌢ 2↑\n");
}

#[test]
fn project_and_mctag() {
    let (code, out, _) = stag(&["project", "-g", EIGHT], "");
    assert_eq!(code, 0);
    assert!(out.contains("tree beta1 (A:NA a (A:SA():OA b A* c) d)"), "{out}");
    let (code, out, _) = stag(&["project", "-g", EIGHT, "--side", "right"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("grammar eight\nstart R\n"), "{out}");
    let (code, out, _) = stag(&["to-mctag", "-g", BLINK], "");
    assert_eq!(code, 0);
    assert!(out.contains("start start.blink (START:NA S_L↓:SA(blink) F_R↓:SA(blink))"), "{out}");
    assert_eq!(out.matches("\nset ").count(), 4);
}

#[test]
fn render_outputs() {
    let (code, out, _) = stag(&["render", "-g", BLINK, "--what", "derivation", "John blinked"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("# blink(john)\n"), "{out}");
    let (code, out, _) = stag(&["render", "-g", BLINK, "--dot"], "");
    assert_eq!(code, 0);
    assert_eq!(out.matches("digraph").count(), 4);
    assert!(out.contains("style=dashed"));
    let (code, out, _) = stag(&["render", "-g", ABCD, "--what", "derived", "--dot", "a b c d"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph \"parse1\""), "{out}");
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_stag"))
        .args(["transduce", "-g", BLINK, "John blinked twice"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "John blinked twice ||| twice(blink(john))\n");
    let bad = Command::new(env!("CARGO_BIN_EXE_stag")).arg("nonsense").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
