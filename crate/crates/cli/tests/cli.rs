use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use wimp_core::decomposition::Strategy;
use wimp_core::exact::exact_chi_w;
use wimp_core::io::{parse_coloring, parse_decomposition, parse_digraph, parse_graph};
use wimp_core::weight::Weight;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data").join(name)
}

fn wimp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wimp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> Vec<&'a str> {
    let prefix = format!("{key}=");
    text.lines().filter_map(|l| l.strip_prefix(prefix.as_str())).collect()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn prism_exact_is_three() {
    let o = wimp(&["solve", p(&data("prism.wug")), "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "chromatic"), ["3"]);
}

#[test]
fn arcless_is_one_for_every_method() {
    for m in ["exact", "fpt-indegree", "fpt-budget", "auto"] {
        let o = wimp(&["solve", p(&data("arcless.wig")), "--method", m]);
        assert_eq!(o.status.code(), Some(0), "{m}");
        assert_eq!(value(&stdout(&o), "chromatic"), ["1"], "{m}");
    }
}

#[test]
fn five_vertex_fpt_indegree_matches_exact() {
    let exact = wimp(&["solve", p(&data("five_vertex.wig")), "--method", "exact"]);
    let fpt = wimp(&[
        "solve",
        p(&data("five_vertex.wig")),
        "--method",
        "fpt-indegree",
        "--strategy",
        "exact-small",
    ]);
    assert_eq!(fpt.status.code(), Some(0));
    assert_eq!(value(&stdout(&exact), "chromatic"), value(&stdout(&fpt), "chromatic"));
    // independent oracle
    let g = parse_digraph::<i64>(&fs::read_to_string(data("five_vertex.wig")).unwrap()).unwrap();
    let chi = exact_chi_w(&g, 5).unwrap().unwrap().chromatic;
    assert_eq!(value(&stdout(&fpt), "chromatic"), [chi.to_string().as_str()]);
}

#[test]
fn bounds_output() {
    let five = stdout(&wimp(&["bounds", p(&data("five_vertex.wig"))]));
    assert!(five.lines().any(|l| l == "upper_indegree=3"), "{five}");
    assert!(five.lines().any(|l| l == "upper_sum_weights=7"), "{five}");
    let prism = stdout(&wimp(&["bounds", p(&data("prism.wug"))]));
    assert!(prism.lines().any(|l| l == "upper_degree_weight=4"), "{prism}");
    assert!(prism.lines().any(|l| l == "lower_chromatic=2"), "{prism}");
    let arcless = stdout(&wimp(&["bounds", p(&data("arcless.wig"))]));
    for l in arcless.lines().filter(|l| !l.starts_with("treewidth_cap=")) {
        assert!(l.ends_with("=1"), "{l}");
    }
}

#[test]
fn all_methods_agree_and_witnesses_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..6u64 {
        let graph = dir.path().join(format!("g{seed}.wig"));
        let s = seed.to_string();
        let o = wimp(&[
            "gen",
            "random",
            "--n",
            "8",
            "--p",
            "0.3",
            "--seed",
            &s,
            "--bits",
            "2",
            "--out",
            p(&graph),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let out = dir.path().join(format!("w{seed}"));
        let o = wimp(&["solve", p(&graph), "--all-methods", "--stats", "--out", p(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let text = stdout(&o);
        assert_eq!(value(&text, "method"), ["exact", "fpt-budget", "fpt-indegree"]);
        let values = value(&text, "chromatic");
        assert_eq!(values.len(), 3);
        assert!(values.iter().all(|v| *v == values[0]), "{text}");
        assert_eq!(value(&text, "agree"), ["true"]);

        let g = parse_digraph::<i64>(&fs::read_to_string(&graph).unwrap()).unwrap();
        let chi = exact_chi_w(&g, 8).unwrap().unwrap().chromatic;
        assert_eq!(values[0], chi.to_string());
        for w in value(&text, "witness") {
            let c = parse_coloring(&fs::read_to_string(w).unwrap(), g.n()).unwrap();
            assert!(g.is_valid_coloring(&c).unwrap());
            assert_eq!(c.distinct_colors(), chi);
        }
    }
}

#[test]
fn random_generation_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.wig");
    let b = dir.path().join("b.wig");
    for out in [&a, &b] {
        let o = wimp(&["gen", "random", "--n", "8", "--p", "0.3", "--seed", "7", "--out", p(out)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let c = wimp(&["gen", "random", "--n", "8", "--p", "0.3", "--seed", "8"]);
    assert_ne!(fs::read(&a).unwrap(), c.stdout);
}

#[test]
fn gen_partition_writes_width_two_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("part.wug");
    let o = wimp(&["gen", "partition", "1", "2", "3", "--out", p(&graph)]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_graph::<i64>(&fs::read_to_string(&graph).unwrap()).unwrap().into_digraph();
    let d = parse_decomposition(&fs::read_to_string(graph.with_extension("td")).unwrap()).unwrap();
    d.validate(&g).unwrap();
    assert_eq!(d.width(), 2);
    let v = wimp(&["decomp", "validate", p(&graph), p(&graph.with_extension("td"))]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(value(&stdout(&v), "width"), ["2"]);
    // {1, 2, 3} splits as {1, 2} / {3}
    let s = wimp(&["solve", p(&graph), "--method", "exact"]);
    assert_eq!(value(&stdout(&s), "chromatic"), ["2"]);
}

#[test]
fn gen_defective_uses_reciprocal_weights() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("path.col");
    fs::write(&edges, "c path\np edge 3 2\ne 1 2\ne 2 3\ne 2 1\n").unwrap();
    let o = wimp(&["gen", "defective", p(&edges), "--d", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_digraph::<i64>(&stdout(&o)).unwrap();
    assert_eq!(g.arc_count(), 4);
    assert!(g.arcs().iter().all(|a| a.weight == Weight::new(1, 2).unwrap()));
}

#[test]
fn complete_embed_keeps_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("k.wig");
    let o = wimp(&["gen", "complete-embed", p(&data("five_vertex.wig")), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_digraph::<i64>(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.arc_count(), 20);
    let a = wimp(&["solve", p(&data("five_vertex.wig")), "--method", "exact"]);
    let b = wimp(&["solve", p(&out), "--method", "exact"]);
    assert_eq!(value(&stdout(&a), "chromatic"), value(&stdout(&b), "chromatic"));
}

#[test]
fn decomp_build_round_trips() {
    let o = wimp(&["decomp", "build", p(&data("prism.wug")), "--strategy", "exact-small"]);
    assert_eq!(o.status.code(), Some(0));
    let d = parse_decomposition(&stdout(&o)).unwrap();
    assert_eq!(d.width(), 4);
    let g = parse_graph::<i64>(&fs::read_to_string(data("prism.wug")).unwrap()).unwrap().into_digraph();
    d.validate(&g).unwrap();
    let built = wimp_core::decomposition::build(&g, Strategy::ExactSmall).unwrap();
    assert_eq!(built.width(), d.width());
}

#[test]
fn validate_reports_violation_vertex() {
    let ok = wimp(&["validate", p(&data("five_vertex.wig")), p(&data("five_vertex_valid.col"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(value(&stdout(&ok), "valid"), ["true"]);
    let bad = wimp(&["validate", p(&data("five_vertex.wig")), p(&data("five_vertex_invalid.col"))]);
    assert_eq!(bad.status.code(), Some(3));
    let text = stdout(&bad);
    assert_eq!(value(&text, "valid"), ["false"]);
    assert!(text.lines().any(|l| l == "violation vertex=3 same_color_indegree=1/1"), "{text}");
}

#[test]
fn experiment_conjecture_is_reproducible() {
    let zero = wimp(&["experiment", "conjecture", "--max-n", "8", "--trials", "0", "--seed", "1"]);
    assert_eq!(stdout(&zero), "none found in 0 trials\n");
    let args = ["experiment", "conjecture", "--max-n", "10", "--trials", "30", "--seed", "3"];
    let a = wimp(&args);
    let b = wimp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage
    assert_eq!(wimp(&[]).status.code(), Some(1));
    assert_eq!(wimp(&["solve"]).status.code(), Some(1));
    assert_eq!(wimp(&["solve", "x", "--method", "magic"]).status.code(), Some(1));
    // input and parse
    let missing = dir.path().join("missing.wig");
    assert_eq!(wimp(&["solve", p(&missing)]).status.code(), Some(2));
    let broken = dir.path().join("broken.wig");
    fs::write(&broken, "p wig 2 1\ne 1 2 3/2\n").unwrap();
    assert_eq!(wimp(&["solve", p(&broken)]).status.code(), Some(2));
    // precondition: non-dyadic weights for fpt-budget, bad decomposition
    let o = wimp(&["solve", p(&data("five_vertex.wig")), "--method", "fpt-budget"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dyadic"));
    let o = wimp(&["solve", p(&data("prism.wug")), "--method", "fpt-budget", "--bits", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let td = dir.path().join("bad.td");
    fs::write(&td, "s td 1 2 10\nb 1 1 2\n").unwrap();
    let o = wimp(&["solve", p(&data("prism.wug")), "--method", "fpt-indegree", "--decomposition", p(&td)]);
    assert_eq!(o.status.code(), Some(3));
    let o = wimp(&["decomp", "validate", p(&data("prism.wug")), p(&td)]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(value(&stdout(&o), "valid"), ["false"]);
    // resource guards
    let big = dir.path().join("big.wig");
    let g = wimp(&["gen", "random", "--n", "30", "--p", "0.5", "--seed", "1", "--out", p(&big)]);
    assert_eq!(g.status.code(), Some(0));
    assert_eq!(wimp(&["solve", p(&big), "--method", "exact"]).status.code(), Some(4));
    assert_eq!(
        wimp(&["solve", p(&big), "--method", "fpt-indegree", "--state-limit", "1000"]).status.code(),
        Some(4)
    );
    let o = wimp(&["experiment", "conjecture", "--max-n", "40", "--trials", "1", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn wide_integers_parse_large_denominators() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("wide.wig");
    fs::write(&g, "p wig 2 2\ne 1 2 1/100000000000000000000\ne 2 1 1/3\n").unwrap();
    assert_eq!(wimp(&["solve", p(&g), "--method", "exact"]).status.code(), Some(2));
    let o = wimp(&["--wide", "solve", p(&g), "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "chromatic"), ["1"]);
}
