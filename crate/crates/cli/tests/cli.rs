use cpn_star::parse::{parse_expr, parse_series};
use cpn_star_cli::{run_command, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    run_command(std::iter::once("cpn-star").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut argv = args.to_vec();
    argv.extend(["--format", "json"]);
    let (code, out) = run(&argv);
    assert_eq!(code, EXIT_OK, "{out}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn classify_one_against_one_plus_l() {
    let (code, out) = run(&["classify", "--D", "1", "--Dprime", "1+l", "--order", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("verdict: non-equivalent\n"), "{out}");
    assert!(out.contains("k = 1\ndelta = 1\n"), "{out}");
    assert!(out.contains("holds: true"));

    let v = json(&["classify", "--D", "1", "--Dprime", "1+l", "--order", "4"]);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["result"]["verdict"], "non-equivalent");
    assert_eq!(v["result"]["k"], 1);
    assert_eq!(v["result"]["delta"], "1/1+0/1i");
    assert_eq!(v["result"]["c_prime"][1], "1/1+0/1i");
}

#[test]
fn classify_equal_series() {
    let (code, out) = run(&["classify", "--D", "1+l", "--Dprime", "1 + l", "--order", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("verdict: equivalent\n"));
    assert!(!out.contains("k ="));
}

#[test]
fn check_qmm_example() {
    let (code, out) = run(&["check", "--suite", "qmm", "--n", "1", "--order", "3", "--seed", "7"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("instances: 20 passed: 20 failed: 0"), "{out}");
}

#[test]
fn reduced_phi_squared() {
    let (code, out) = run(&[
        "star", "--n", "1", "--order", "1", "--D", "1", "--mu", "-1/2", "--reduced",
        "--f", "z0*zb0*x^-1", "--g", "z0*zb0*x^-1",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    let phi = parse_expr("z0*zb0*x^-1", 1).unwrap();
    let phi2 = &phi * &phi;
    let order0 = parse_expr(lines[0].strip_prefix("order 0: ").unwrap(), 1).unwrap();
    let order1 = parse_expr(lines[1].strip_prefix("order 1: ").unwrap(), 1).unwrap();
    assert!(order0.semantic_eq(&phi2));
    assert!(order1.semantic_eq(&(&phi - &phi2)));
    assert_eq!(out, "order 0: z0^2*zb0^2*x^-2\norder 1: z0*zb0*x^-1 - z0^2*zb0^2*x^-2\n");
}

#[test]
fn star_outputs_reparse() {
    let (code, out) = run(&[
        "star", "--n", "1", "--order", "2", "--D", "1 + l", "--f", "z0*zb1*x^-1", "--g", "[z1*zb0; x^-1]",
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    let exprs: Vec<&str> = out.lines().map(|l| l.split_once(": ").unwrap().1).collect();
    let series = parse_series(&format!("[{}]", exprs.join("; ")), 1, 2).unwrap();
    assert_eq!(series.order(), 2);
    let v = json(&[
        "star", "--n", "1", "--order", "2", "--D", "1 + l", "--f", "z0*zb1*x^-1", "--g", "[z1*zb0; x^-1]",
    ]);
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
    let rec = &v["result"][0][0];
    for key in ["alpha", "beta", "m", "coeff"] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn wick_accepts_non_invariant_inputs() {
    let (code, out) = run(&["star", "--wick", "--n", "0", "--order", "1", "--f", "z0", "--g", "zb0"]);
    assert_eq!(code, EXIT_OK, "{out}");
    // With n = 0, z0*zb0 is x itself.
    assert_eq!(out, "order 0: x\norder 1: 1\n");
    let (code, _) = run(&["star", "--n", "0", "--order", "1", "--f", "z0", "--g", "zb0"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn reduce_and_divide() {
    let (code, out) = run(&["reduce", "--n", "1", "--order", "1", "--mu", "-1/4", "--F", "[z0*zb0 + x^2; x^-1]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "order 0: 1/4 + 1/2*z0*zb0*x^-1\norder 1: 2\n");

    let (code, out) = run(&["divide", "--n", "1", "--order", "1", "--F", "[x - 1; 0]"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.starts_with("member: true\n"), "{out}");
    assert!(out.contains("order 0: -2\n"), "{out}");

    let (code, out) = run(&["divide", "--n", "1", "--order", "1", "--F", "z0*zb0"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("member: false\n"));
    let v = json(&["divide", "--n", "1", "--order", "1", "--F", "z0*zb0"]);
    assert_eq!(v["result"]["member"], false);
    assert_eq!(v["result"]["order"], 0);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["star", "--n", "1", "--f", "z3", "--g", "z0"],
        vec!["classify", "--D", "2 + l", "--Dprime", "1"],
        vec!["reduce", "--F", "x", "--mu", "1/2"],
        vec!["check", "--suite", "nope"],
        vec!["check", "--suite", "qmm", "--order", "0"],
        vec!["frobnicate"],
        vec!["star", "--f", "z0*"],
    ] {
        let (code, out) = run(&args);
        assert_eq!(code, EXIT_USAGE, "{args:?}: {out}");
        assert!(!out.is_empty());
    }
    let (_, out) = run(&["reduce", "--F", "x", "--mu", "1/2"]);
    assert!(out.contains("negative"), "{out}");
}

#[test]
fn check_reports_are_deterministic() {
    for suite in ["assoc-wick", "assoc-reduced", "lemma41", "cor42", "closure"] {
        let args = ["check", "--suite", suite, "--order", "2", "--seed", "42", "--instances", "4"];
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a, b);
        assert_eq!(a.0, EXIT_OK, "{}", a.1);
        let mut jargs = args.to_vec();
        jargs.extend(["--format", "json"]);
        assert_eq!(run(&jargs), run(&jargs));
    }
    let a = run(&["check", "--suite", "closure", "--seed", "1", "--instances", "5"]);
    let b = run(&["check", "--suite", "closure", "--seed", "2", "--instances", "5"]);
    assert_ne!(a.1, b.1);
}
