//! Text formats for graphs, solutions, tree decompositions and CSP
//! instances. Every format is line-based, uses `c` comment lines and
//! 1-indexed ids.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lowerbound::{Constraint, Csp5Instance};
use crate::solution::MixedSolution;

fn parse_err(line: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse { line, token: token.to_string(), message: message.into() }
}

/// Non-empty, non-comment lines as (1-based line number, tokens).
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, toks)),
        }
    })
}

fn num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(line, tok, format!("expected {what}")))
}

/// A 1-indexed id below `bound`, returned 0-indexed.
fn id(line: usize, tok: &str, bound: usize, what: &str) -> Result<usize> {
    let v: usize = num(line, tok, what)?;
    if v == 0 || v > bound {
        return Err(parse_err(line, tok, format!("{what} must lie in 1..={bound}")));
    }
    Ok(v - 1)
}

fn expect_len(line: usize, toks: &[&str], len: usize, shape: &str) -> Result<()> {
    if toks.len() != len {
        let tok = toks.get(len).or(toks.last()).copied().unwrap_or("");
        return Err(parse_err(line, tok, format!("expected `{shape}`")));
    }
    Ok(())
}

fn header<'a>(
    it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    tag: &str,
    kind: &str,
    fields: usize,
) -> Result<(usize, Vec<usize>)> {
    let shape = format!("{tag} {kind}{}", " <int>".repeat(fields));
    let (line, toks) = it.next().ok_or_else(|| parse_err(0, "", format!("missing header `{shape}`")))?;
    if toks[0] != tag || toks.get(1) != Some(&kind) {
        return Err(parse_err(line, toks[0], format!("expected header `{shape}`")));
    }
    expect_len(line, &toks, fields + 2, &shape)?;
    let vals = toks[2..].iter().map(|t| num(line, t, "a non-negative integer")).collect::<Result<_>>()?;
    Ok((line, vals))
}

pub fn read_graph(text: &str) -> Result<Graph> {
    let mut it = records(text);
    let (hline, h) = header(&mut it, "p", "mds", 2)?;
    let (n, m) = (h[0], h[1]);
    let mut edges = Vec::with_capacity(m);
    let mut last = hline;
    for (line, toks) in it {
        expect_len(line, &toks, 2, "<u> <v>")?;
        let u = id(line, toks[0], n, "vertex")?;
        let v = id(line, toks[1], n, "vertex")?;
        if u == v {
            return Err(parse_err(line, toks[1], "self-loop"));
        }
        edges.push((u, v, line, toks[1].to_string()));
        last = line;
    }
    if edges.len() != m {
        return Err(parse_err(last, "", format!("header promises {m} edges, found {}", edges.len())));
    }
    let mut g = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for (u, v, line, tok) in edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(parse_err(line, &tok, "parallel edge"));
        }
        g.push((u, v));
    }
    Graph::from_edges(n, g)
}

pub fn write_graph(g: &Graph, comments: &[String]) -> String {
    let mut s = String::with_capacity(16 * g.m() + 32);
    for c in comments {
        let _ = writeln!(s, "c {c}");
    }
    let _ = writeln!(s, "p mds {} {}", g.n(), g.m());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

pub fn read_solution(text: &str, g: &Graph) -> Result<MixedSolution> {
    let mut it = records(text);
    let (hline, h) = header(&mut it, "s", "mds", 1)?;
    let (mut d, mut m) = (Vec::new(), Vec::new());
    let mut last = hline;
    for (line, toks) in it {
        match toks[0] {
            "v" => {
                expect_len(line, &toks, 2, "v <id>")?;
                d.push(id(line, toks[1], g.n(), "vertex")?);
            }
            "e" => {
                expect_len(line, &toks, 3, "e <u> <v>")?;
                let u = id(line, toks[1], g.n(), "vertex")?;
                let v = id(line, toks[2], g.n(), "vertex")?;
                let e = g
                    .edge_id(u, v)
                    .ok_or_else(|| parse_err(line, toks[2], format!("({}, {}) is not an edge", u + 1, v + 1)))?;
                m.push(e);
            }
            other => return Err(parse_err(line, other, "expected `v` or `e`")),
        }
        last = line;
    }
    let sol = MixedSolution::new(d, m);
    if sol.size() != h[0] {
        return Err(parse_err(last, "", format!("header promises size {}, found {} distinct elements", h[0], sol.size())));
    }
    Ok(sol)
}

pub fn write_solution(g: &Graph, sol: &MixedSolution) -> String {
    let mut s = format!("s mds {}\n", sol.size());
    for &v in sol.vertices() {
        let _ = writeln!(s, "v {}", v + 1);
    }
    for (u, v) in sol.edge_pairs(g) {
        let _ = writeln!(s, "e {} {}", u + 1, v + 1);
    }
    s
}

/// Reads a decomposition; returns it with the vertex count from the header.
pub fn read_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut it = records(text);
    let (hline, h) = header(&mut it, "s", "td", 3)?;
    let (k, width1, n) = (h[0], h[1], h[2]);
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; k];
    let mut tree = Vec::new();
    let mut last = hline;
    for (line, toks) in it {
        if toks[0] == "b" {
            if toks.len() < 2 {
                return Err(parse_err(line, "b", "expected `b <id> <v...>`"));
            }
            let b = id(line, toks[1], k, "bag id")?;
            if bags[b].is_some() {
                return Err(parse_err(line, toks[1], "bag defined twice"));
            }
            let vs = toks[2..].iter().map(|t| id(line, t, n, "vertex")).collect::<Result<Vec<_>>>()?;
            if vs.len() > width1 {
                return Err(parse_err(line, toks[1], format!("bag has {} vertices, header allows {width1}", vs.len())));
            }
            bags[b] = Some(vs);
        } else {
            expect_len(line, &toks, 2, "<b1> <b2>")?;
            tree.push((id(line, toks[0], k, "bag id")?, id(line, toks[1], k, "bag id")?));
        }
        last = line;
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_err(last, "", format!("bag {} is never defined", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((TreeDecomposition::new(bags, tree), n))
}

pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let width1 = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("s td {} {} {}\n", td.len(), width1, n);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in bag {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in &td.tree {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

pub fn read_csp(text: &str) -> Result<Csp5Instance> {
    let mut it = records(text).peekable();
    let (hline, h) = header(&mut it, "p", "csp5", 3)?;
    let (n, m, q) = (h[0], h[1], h[2]);
    let mut constraints: Vec<Constraint> = Vec::with_capacity(m);
    let mut last = hline;
    for (line, toks) in it {
        match toks[0] {
            "x" => {
                if toks.len() < 2 || toks.len() > q + 1 {
                    return Err(parse_err(line, "x", format!("a constraint needs 1..={q} variables")));
                }
                let vars = toks[1..].iter().map(|t| id(line, t, n, "variable")).collect::<Result<Vec<_>>>()?;
                constraints.push(Constraint { vars, assignments: Vec::new() });
            }
            "a" => {
                let con = constraints.last_mut().ok_or_else(|| parse_err(line, "a", "assignment before any `x` line"))?;
                if toks.len() != con.vars.len() + 1 {
                    return Err(parse_err(line, "a", format!("expected {} values", con.vars.len())));
                }
                let vals = toks[1..]
                    .iter()
                    .map(|t| match num::<u8>(line, t, "a value in 0..=4")? {
                        v @ 0..=4 => Ok(v),
                        _ => Err(parse_err(line, t, "expected a value in 0..=4")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                con.assignments.push(vals);
            }
            other => return Err(parse_err(line, other, "expected `x` or `a`")),
        }
        last = line;
    }
    if constraints.len() != m {
        return Err(parse_err(last, "", format!("header promises {m} constraints, found {}", constraints.len())));
    }
    let c = Csp5Instance { n, q, constraints };
    c.validate()?;
    Ok(c)
}

pub fn write_csp(c: &Csp5Instance) -> String {
    let mut s = format!("p csp5 {} {} {}\n", c.n, c.m(), c.q);
    for con in &c.constraints {
        s.push('x');
        for v in &con.vars {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
        for a in &con.assignments {
            s.push('a');
            for v in a {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
    }
    s
}
