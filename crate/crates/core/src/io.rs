//! PACE-style text formats.
//!
//! Graphs (`.gr`): `c` comment lines, a header `p tw <n> <m>`, then `m`
//! lines `<u> <v>` over vertices `1..=n`. Vertex labels ride in comments as
//! `c label <v> <text>`.
//!
//! Decompositions (`.td`): a header `s td <bags> <max_bag_size> <n>`, bag
//! lines `b <id> <v...>` with bag ids `1..=bags`, then tree edges `<i> <j>`.
//!
//! Graphs are written with their vertices renumbered `1..=n` in ascending
//! id order; reading gives ids `0..n`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

fn numbers(line: usize, fields: &[&str]) -> Result<Vec<usize>, FormatError> {
    fields
        .iter()
        .map(|f| {
            f.parse::<usize>().or_else(|_| fail(line, format!("expected a number, found {f:?}")))
        })
        .collect()
}

pub fn read_gr(text: &str) -> Result<Graph, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None => continue,
            Some(&"c") => {
                if fields.get(1) == Some(&"label") {
                    let v = numbers(line, &fields[2..3.min(fields.len())])?;
                    let Some(&v) = v.first() else {
                        return fail(line, "label comment without a vertex");
                    };
                    // the text is everything after the vertex number
                    let rest = raw.trim_start()[1..].trim_start()["label".len()..].trim_start();
                    let text = rest[fields[2].len()..].trim().to_string();
                    if text.is_empty() {
                        return fail(line, "empty label");
                    }
                    labels.push((line, v, text));
                }
            }
            Some(&"p") => {
                if header.is_some() {
                    return fail(line, "second header");
                }
                if fields.len() != 4 || fields[1] != "tw" {
                    return fail(line, "expected header 'p tw <n> <m>'");
                }
                let nm = numbers(line, &fields[2..])?;
                header = Some((nm[0], nm[1]));
            }
            Some(_) => {
                let Some((n, _)) = header else {
                    return fail(line, "edge before header");
                };
                if fields.len() != 2 {
                    return fail(line, "expected an edge '<u> <v>'");
                }
                let uv = numbers(line, &fields)?;
                for &x in &uv {
                    if x == 0 || x > n {
                        return fail(line, format!("vertex {x} outside 1..={n}"));
                    }
                }
                edges.push((line, uv[0] - 1, uv[1] - 1));
            }
        }
    }
    let Some((n, m)) = header else {
        return fail(text.lines().count().max(1), "missing header 'p tw <n> <m>'");
    };
    if edges.len() != m {
        return fail(
            text.lines().count().max(1),
            format!("header promises {m} edges, found {}", edges.len()),
        );
    }
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    for (line, u, v) in edges {
        if u == v {
            return fail(line, format!("self-loop at {}", u + 1));
        }
        if g.has_edge(u, v) {
            return fail(line, format!("duplicate edge {} {}", u + 1, v + 1));
        }
        g.add_edge(u, v).unwrap();
    }
    for (line, v, text) in labels {
        if v == 0 || v > n {
            return fail(line, format!("label for vertex {v} outside 1..={n}"));
        }
        if g.set_label(v - 1, text.clone()).is_err() {
            return fail(line, format!("duplicate label {text:?}"));
        }
    }
    Ok(g)
}

pub fn write_gr(g: &Graph) -> String {
    let index = position_map(g);
    let mut out = String::new();
    for (v, text) in g.labels() {
        out.push_str(&format!("c label {} {}\n", index[v], text));
    }
    out.push_str(&format!("p tw {} {}\n", g.num_vertices(), g.num_edges()));
    let mut edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (index[&u], index[&v])).collect();
    edges.sort_unstable();
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// 1-based position of each vertex in ascending id order.
fn position_map(g: &Graph) -> BTreeMap<Vertex, usize> {
    g.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect()
}

/// Reads a decomposition, returning it with 0-based vertex ids and the
/// vertex count from the header.
pub fn read_td(text: &str) -> Result<(TreeDecomposition, usize), FormatError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<BTreeSet<Vertex>>> = Vec::new();
    let mut tree_edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"s") => {
                if header.is_some() {
                    return fail(line, "second header");
                }
                if fields.len() != 5 || fields[1] != "td" {
                    return fail(line, "expected header 's td <bags> <max_bag_size> <n>'");
                }
                let h = numbers(line, &fields[2..])?;
                header = Some((h[0], h[1], h[2]));
                bags = vec![None; h[0]];
            }
            Some(&"b") => {
                let Some((count, _, n)) = header else {
                    return fail(line, "bag before header");
                };
                let nums = numbers(line, &fields[1..])?;
                let Some((&id, members)) = nums.split_first() else {
                    return fail(line, "bag line without an id");
                };
                if id == 0 || id > count {
                    return fail(line, format!("bag id {id} outside 1..={count}"));
                }
                if bags[id - 1].is_some() {
                    return fail(line, format!("bag {id} given twice"));
                }
                let mut bag = BTreeSet::new();
                for &v in members {
                    if v == 0 || v > n {
                        return fail(line, format!("vertex {v} outside 1..={n}"));
                    }
                    if !bag.insert(v - 1) {
                        return fail(line, format!("vertex {v} repeated in bag {id}"));
                    }
                }
                bags[id - 1] = Some(bag);
            }
            Some(_) => {
                let Some((count, _, _)) = header else {
                    return fail(line, "tree edge before header");
                };
                if fields.len() != 2 {
                    return fail(line, "expected a tree edge '<i> <j>'");
                }
                let ij = numbers(line, &fields)?;
                for &x in &ij {
                    if x == 0 || x > count {
                        return fail(line, format!("bag id {x} outside 1..={count}"));
                    }
                }
                tree_edges.push((ij[0] - 1, ij[1] - 1));
            }
        }
    }
    let last = text.lines().count().max(1);
    let Some((count, max_bag, n)) = header else {
        return fail(last, "missing header 's td <bags> <max_bag_size> <n>'");
    };
    let mut out = Vec::with_capacity(count);
    for (i, bag) in bags.into_iter().enumerate() {
        match bag {
            Some(b) => out.push(b),
            None => return fail(last, format!("bag {} is missing", i + 1)),
        }
    }
    let actual = out.iter().map(BTreeSet::len).max().unwrap_or(0);
    if actual != max_bag {
        return fail(
            last,
            format!("header gives maximum bag size {max_bag}, bags have {actual}"),
        );
    }
    Ok((
        TreeDecomposition {
            bags: out,
            tree_edges,
        },
        n,
    ))
}

/// Writes `td` for `g`, numbering vertices as [`write_gr`] does.
pub fn write_td(td: &TreeDecomposition, g: &Graph) -> String {
    let index = position_map(g);
    let max_bag = td.bags.iter().map(BTreeSet::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), max_bag, g.num_vertices());
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        let mut members: Vec<usize> = bag.iter().map(|v| index[v]).collect();
        members.sort_unstable();
        for v in members {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    for &(i, j) in &td.tree_edges {
        out.push_str(&format!("{} {}\n", i + 1, j + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{exact_treewidth, validate};
    use crate::graph::families;

    #[test]
    fn graph_round_trip() {
        let g = families::petersen()
            .with_labels([(0, "zero".to_string()), (7, "a b  c".to_string())])
            .unwrap();
        let text = write_gr(&g);
        assert!(text.contains("c label 8 a b  c\n"));
        assert_eq!(read_gr(&text).unwrap(), g);
        assert_eq!(write_gr(&read_gr(&text).unwrap()), text);
    }

    #[test]
    fn decomposition_round_trip() {
        let g = families::grid(3, 3);
        let td = exact_treewidth(&g).unwrap().decomposition;
        let text = write_td(&td, &g);
        let (back, n) = read_td(&text).unwrap();
        assert_eq!(n, 9);
        assert_eq!(back, td);
        assert!(validate(&g, &back).unwrap().ok);
    }

    #[test]
    fn malformed_graphs() {
        let err = |t: &str| read_gr(t).unwrap_err().line;
        assert_eq!(err("1 2\np tw 2 1\n"), 1);
        assert_eq!(err("p tw 2 1\n1 3\n"), 2);
        assert_eq!(err("p tw 2 1\n1 1\n"), 2);
        assert_eq!(err("p tw 2 2\n1 2\n2 1\n"), 3);
        assert_eq!(err("p tw 2 2\n1 2\n"), 2);
        assert_eq!(err("c hello\np tw x 1\n"), 2);
        assert_eq!(err("p td 2 1\n"), 1);
        assert!(read_gr("c only a comment\n").is_err());
        let g = read_gr("c a comment\np tw 3 0\n").unwrap();
        assert_eq!(g.num_vertices(), 3);
    }

    #[test]
    fn malformed_decompositions() {
        let err = |t: &str| read_td(t).unwrap_err().line;
        assert_eq!(err("b 1 1\n"), 1);
        assert_eq!(err("s td 1 1 2\nb 2 1\n"), 2);
        assert_eq!(err("s td 1 1 2\nb 1 3\n"), 2);
        assert_eq!(err("s td 2 1 2\nb 1 1\n"), 2);
        assert_eq!(err("s td 1 2 2\nb 1 1\n"), 2);
        assert_eq!(err("s td 1 1 2\nb 1 1\n1 2\n"), 3);
    }
}
