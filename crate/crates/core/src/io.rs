//! Text formats for graphs, colorings and tree decompositions.
//!
//! Graph files:
//!
//! ```text
//! # comment
//! p wig <n> <m>
//! e <tail> <head> <num>/<den>
//! ```
//!
//! Undirected files use `p wug` and `e <u> <v> <w>`. Weights may also be
//! written as decimals (`0.7`) or the integers `0` and `1`. Output is always
//! canonical: arcs sorted by `(tail, head)`, weights as reduced `num/den`.
//!
//! Coloring files hold `<vertex> <color>` lines. Decomposition files follow
//! the PACE `.td` layout: `s td <bags> <max-bag-size> <n>`, then
//! `b <bag-id> <v...>` lines and bag-tree edges `<i> <j>`, all 1-based.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::decomposition::{DecompositionError, TreeDecomposition};
use crate::graph::{Coloring, GraphError, UndirectedWeightedGraph, Vertex, WeightedDigraph};
use crate::weight::{Weight, WeightError, WeightInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing header line")]
    MissingHeader,
    #[error("malformed header `{0}`")]
    BadHeader(String),
    #[error("expected a {expected} file, found `{found}`")]
    WrongKind { expected: &'static str, found: String },
    #[error("malformed line `{0}`")]
    Malformed(String),
    #[error("weight {0} is outside [0, 1]")]
    WeightOutOfRange(String),
    #[error("bad weight: {0}")]
    BadWeight(WeightError),
    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(Vertex, Vertex),
    #[error("self-loop at {0}")]
    SelfLoop(Vertex),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("header announced {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("vertex {0} colored twice")]
    DuplicateVertex(Vertex),
    #[error("bag {0} defined twice")]
    DuplicateBag(usize),
    #[error("bag {0} never defined")]
    MissingBag(usize),
    #[error("invalid decomposition: {0}")]
    Decomposition(DecompositionError),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// A parsed graph file of either orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFile<I: WeightInt> {
    Directed(WeightedDigraph<I>),
    Undirected(UndirectedWeightedGraph<I>),
}

impl<I: WeightInt> GraphFile<I> {
    /// Undirected graphs are read through their symmetric embedding.
    pub fn into_digraph(self) -> WeightedDigraph<I> {
        match self {
            GraphFile::Directed(g) => g,
            GraphFile::Undirected(h) => WeightedDigraph::embed_undirected(&h),
        }
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines<'a>(text: &'a str, comment: &'a [char]) -> impl Iterator<Item = (usize, &'a str)> {
    text.lines().enumerate().filter_map(move |(i, l)| {
        let t = l.trim();
        (!t.is_empty() && !t.starts_with(comment)).then_some((i + 1, t))
    })
}

fn parse_index(tok: &str, max: usize, line: usize, raw: &str) -> Result<usize, ParseError> {
    let v: usize = tok.parse().map_err(|_| err(line, ParseErrorKind::Malformed(raw.to_string())))?;
    if v == 0 || v > max {
        return Err(err(line, ParseErrorKind::IndexOutOfRange { index: v, max }));
    }
    Ok(v)
}

fn parse_weight<I: WeightInt>(tok: &str, line: usize) -> Result<Weight<I>, ParseError> {
    tok.parse::<Weight<I>>().map_err(|e| {
        let kind = match e {
            WeightError::OutOfRange(s) => ParseErrorKind::WeightOutOfRange(s),
            WeightError::Malformed(s) => ParseErrorKind::Malformed(s),
            other => ParseErrorKind::BadWeight(other),
        };
        err(line, kind)
    })
}

/// Parses a `wig` or `wug` graph file.
pub fn parse_graph<I: WeightInt>(text: &str) -> Result<GraphFile<I>, ParseError> {
    let mut lines = content_lines(text, &['#']);
    let (hline, header) = lines.next().ok_or(err(1, ParseErrorKind::MissingHeader))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || err(hline, ParseErrorKind::BadHeader(header.to_string()));
    if toks.len() != 4 || toks[0] != "p" {
        return Err(bad_header());
    }
    let directed = match toks[1] {
        "wig" => true,
        "wug" => false,
        _ => return Err(bad_header()),
    };
    let n: usize = toks[2].parse().map_err(|_| bad_header())?;
    let m: usize = toks[3].parse().map_err(|_| bad_header())?;

    let mut entries = Vec::with_capacity(m);
    let mut seen = BTreeSet::new();
    let mut last_line = hline;
    for (ln, raw) in lines {
        last_line = ln;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.len() != 4 || toks[0] != "e" {
            return Err(err(ln, ParseErrorKind::Malformed(raw.to_string())));
        }
        let u = parse_index(toks[1], n, ln, raw)?;
        let v = parse_index(toks[2], n, ln, raw)?;
        if u == v {
            return Err(err(ln, ParseErrorKind::SelfLoop(u)));
        }
        let key = if directed { (u, v) } else { (u.min(v), u.max(v)) };
        if !seen.insert(key) {
            return Err(err(ln, ParseErrorKind::DuplicateArc(u, v)));
        }
        entries.push((u, v, parse_weight::<I>(toks[3], ln)?));
    }
    if entries.len() != m {
        return Err(err(last_line, ParseErrorKind::CountMismatch { expected: m, found: entries.len() }));
    }
    let wrap = |e: GraphError| err(hline, ParseErrorKind::Malformed(e.to_string()));
    Ok(if directed {
        GraphFile::Directed(WeightedDigraph::new(n, entries).map_err(wrap)?)
    } else {
        GraphFile::Undirected(UndirectedWeightedGraph::new(n, entries).map_err(wrap)?)
    })
}

/// Parses a graph file as a digraph; `wug` files are embedded symmetrically.
pub fn parse_digraph<I: WeightInt>(text: &str) -> Result<WeightedDigraph<I>, ParseError> {
    parse_graph(text).map(GraphFile::into_digraph)
}

pub fn parse_undirected<I: WeightInt>(text: &str) -> Result<UndirectedWeightedGraph<I>, ParseError> {
    match parse_graph(text)? {
        GraphFile::Undirected(h) => Ok(h),
        GraphFile::Directed(_) => {
            Err(err(1, ParseErrorKind::WrongKind { expected: "wug", found: "wig".into() }))
        }
    }
}

pub fn serialize_digraph<I: WeightInt>(g: &WeightedDigraph<I>) -> String {
    let mut out = format!("p wig {} {}\n", g.n(), g.arc_count());
    for a in g.arcs() {
        let _ = writeln!(out, "e {} {} {}", a.tail, a.head, a.weight);
    }
    out
}

pub fn serialize_undirected<I: WeightInt>(h: &UndirectedWeightedGraph<I>) -> String {
    let mut out = format!("p wug {} {}\n", h.n(), h.edge_count());
    for e in h.edges() {
        let _ = writeln!(out, "e {} {} {}", e.u, e.v, e.weight);
    }
    out
}

/// Parses `<vertex> <color>` lines for a graph on `n` vertices. Vertices not
/// listed stay uncolored.
pub fn parse_coloring(text: &str, n: usize) -> Result<Coloring, ParseError> {
    let mut c = Coloring::new(n);
    for (ln, raw) in content_lines(text, &['#']) {
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(err(ln, ParseErrorKind::Malformed(raw.to_string())));
        }
        let v = parse_index(toks[0], n, ln, raw)?;
        let color: usize = toks[1]
            .parse()
            .ok()
            .filter(|&x| x >= 1)
            .ok_or_else(|| err(ln, ParseErrorKind::Malformed(raw.to_string())))?;
        if c.get(v).is_some() {
            return Err(err(ln, ParseErrorKind::DuplicateVertex(v)));
        }
        c.set(v, color);
    }
    Ok(c)
}

pub fn serialize_coloring(c: &Coloring) -> String {
    let mut out = String::new();
    for (v, color) in c.iter() {
        let _ = writeln!(out, "{v} {color}");
    }
    out
}

/// Parses a PACE `.td` file. The root is bag 1.
pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition, ParseError> {
    let mut lines = content_lines(text, &['c', '#']);
    let (hline, header) = lines.next().ok_or(err(1, ParseErrorKind::MissingHeader))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let bad_header = || err(hline, ParseErrorKind::BadHeader(header.to_string()));
    if toks.len() != 5 || toks[0] != "s" || toks[1] != "td" {
        return Err(bad_header());
    }
    let nums: Vec<usize> =
        toks[2..].iter().map(|t| t.parse().map_err(|_| bad_header())).collect::<Result<_, _>>()?;
    let (count, max_size, n) = (nums[0], nums[1], nums[2]);

    let mut bags: Vec<Option<Vec<Vertex>>> = vec![None; count];
    let mut edges = Vec::new();
    let mut last_line = hline;
    for (ln, raw) in lines {
        last_line = ln;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks[0] == "b" {
            if toks.len() < 2 {
                return Err(err(ln, ParseErrorKind::Malformed(raw.to_string())));
            }
            let id = parse_index(toks[1], count, ln, raw)?;
            let bag: Vec<Vertex> =
                toks[2..].iter().map(|t| parse_index(t, n, ln, raw)).collect::<Result<_, _>>()?;
            if bag.len() > max_size {
                return Err(err(ln, ParseErrorKind::Malformed(raw.to_string())));
            }
            if bags[id - 1].replace(bag).is_some() {
                return Err(err(ln, ParseErrorKind::DuplicateBag(id)));
            }
        } else if toks.len() == 2 {
            let a = parse_index(toks[0], count, ln, raw)?;
            let b = parse_index(toks[1], count, ln, raw)?;
            edges.push((a - 1, b - 1));
        } else {
            return Err(err(ln, ParseErrorKind::Malformed(raw.to_string())));
        }
    }
    let bags: Vec<Vec<Vertex>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or(err(last_line, ParseErrorKind::MissingBag(i + 1))))
        .collect::<Result<_, _>>()?;
    TreeDecomposition::new(bags, edges, 0).map_err(|e| err(last_line, ParseErrorKind::Decomposition(e)))
}

/// Writes a PACE `.td` file. Bags keep their order, so the root is only
/// preserved when it is bag 0.
pub fn serialize_decomposition(d: &TreeDecomposition, n: usize) -> String {
    let max_size = d.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", d.bag_count(), max_size, n);
    for (i, bag) in d.bags().iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for &(a, b) in d.tree_edges() {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::generators::{random_instance, WeightModel};
    use proptest::prelude::*;

    type G = WeightedDigraph<i64>;

    #[test]
    fn parses_minimal_file() {
        let g: G = parse_digraph("p wig 2 1\ne 1 2 1/2\n").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.weight(1, 2), Some(Weight::new(1, 2).unwrap()));
    }

    #[test]
    fn decimal_weights_and_comments() {
        let g: G = parse_digraph("# five\n\np wig 3 2\ne 1 2 0.7\n# mid\ne 3 2 1\n").unwrap();
        assert_eq!(g.weight(1, 2).unwrap().to_string(), "7/10");
        assert_eq!(serialize_digraph(&g), "p wig 3 2\ne 1 2 7/10\ne 3 2 1/1\n");
    }

    #[test]
    fn error_kinds_carry_line_numbers() {
        let e = parse_digraph::<i64>("p wig 2 1\ne 1 2 3/2\n").unwrap_err();
        assert_eq!(e, err(2, ParseErrorKind::WeightOutOfRange("3/2".into())));
        let e = parse_digraph::<i64>("p wig 2 2\ne 1 2 1/2\ne 1 2 1/3\n").unwrap_err();
        assert_eq!(e, err(3, ParseErrorKind::DuplicateArc(1, 2)));
        let e = parse_digraph::<i64>("p wig 2 1\ne 1 5 1/2\n").unwrap_err();
        assert_eq!(e, err(2, ParseErrorKind::IndexOutOfRange { index: 5, max: 2 }));
        let e = parse_digraph::<i64>("p wig 2 1\nf 1 2 1/2\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(matches!(e.kind, ParseErrorKind::Malformed(_)));
        let e = parse_digraph::<i64>("p wig 2 2\ne 1 2 1/2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::CountMismatch { expected: 2, found: 1 });
        let e = parse_digraph::<i64>("").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingHeader);
        let e = parse_digraph::<i64>("p xyz 2 1\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BadHeader(_)));
        let e = parse_digraph::<i64>("p wig 2 1\ne 2 2 1/2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::SelfLoop(2));
        let e = parse_digraph::<i64>("p wig 2 1\ne 1 2 1/0\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadWeight(WeightError::ZeroDenominator));
    }

    #[test]
    fn undirected_files() {
        let text = serialize_undirected(&fixtures::prism::<i64>());
        let h = parse_undirected::<i64>(&text).unwrap();
        assert_eq!(h, fixtures::prism());
        let g = parse_digraph::<i64>(&text).unwrap();
        assert_eq!(g.arc_count(), 30);
        let e = parse_undirected::<i64>("p wug 2 2\ne 1 2 1\ne 2 1 1\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DuplicateArc(2, 1));
        assert!(parse_undirected::<i64>("p wig 2 0\n").is_err());
    }

    #[test]
    fn colorings() {
        let c = parse_coloring("1 2\n3 1\n", 3).unwrap();
        assert_eq!(c.get(1), Some(2));
        assert_eq!(c.get(2), None);
        assert_eq!(serialize_coloring(&c), "1 2\n3 1\n");
        assert_eq!(parse_coloring("1 2\n1 1\n", 3).unwrap_err().kind, ParseErrorKind::DuplicateVertex(1));
        assert!(matches!(parse_coloring("1 0\n", 3).unwrap_err().kind, ParseErrorKind::Malformed(_)));
        assert_eq!(
            parse_coloring("4 1\n", 3).unwrap_err().kind,
            ParseErrorKind::IndexOutOfRange { index: 4, max: 3 }
        );
    }

    #[test]
    fn decomposition_files() {
        let text = "c example\ns td 3 2 4\nb 1 1 2\nb 2 2 3\nb 3 3 4\n1 2\n2 3\n";
        let d = parse_decomposition(text).unwrap();
        assert_eq!(d.bag_count(), 3);
        assert_eq!(d.root(), 0);
        assert_eq!(d.width(), 1);
        assert_eq!(serialize_decomposition(&d, 4), text.trim_start_matches("c example\n"));
        let e = parse_decomposition("s td 2 2 4\nb 1 1 2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingBag(2));
        let e = parse_decomposition("s td 2 2 4\nb 1 1 2\nb 2 3 4\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Decomposition(_)));
        let e = parse_decomposition("s td 1 1 4\nb 1 1 2\n").unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Malformed(_)));
    }

    proptest! {
        #[test]
        fn digraph_round_trip(n in 0usize..9, p in 0u32..=4, seed in any::<u64>(), den in 1u64..12) {
            let g: G = random_instance(n, p as f64 / 4.0, WeightModel::Rational(den), seed).unwrap();
            let text = serialize_digraph(&g);
            let back: G = parse_digraph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(serialize_digraph(&back), text);
        }
    }
}
