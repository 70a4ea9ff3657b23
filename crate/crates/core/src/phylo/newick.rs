//! Newick reading and canonical writing.

use std::collections::BTreeMap;

use crate::graph::{Graph, Vertex};

use super::{check_label, PhyloError, PhyloTree};

struct Node {
    children: Vec<usize>,
    label: Option<String>,
    pos: usize,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

const SPECIAL: &[u8] = b"()[]',:;";

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, PhyloError> {
        Err(PhyloError::Syntax {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_space(&mut self) -> Result<(), PhyloError> {
        loop {
            match self.text.get(self.pos) {
                Some(c) if c.is_ascii_whitespace() => self.pos += 1,
                Some(b'[') => {
                    let start = self.pos;
                    while self.text.get(self.pos).is_some_and(|&c| c != b']') {
                        self.pos += 1;
                    }
                    if self.pos == self.text.len() {
                        self.pos = start;
                        return self.err("unterminated comment");
                    }
                    self.pos += 1;
                }
                _ => return Ok(()),
            }
        }
    }

    fn peek(&mut self) -> Result<Option<u8>, PhyloError> {
        self.skip_space()?;
        Ok(self.text.get(self.pos).copied())
    }

    fn label(&mut self) -> Result<Option<String>, PhyloError> {
        if self.peek()? == Some(b'\'') {
            let start = self.pos;
            self.pos += 1;
            let mut out = Vec::new();
            loop {
                match self.text.get(self.pos) {
                    None => {
                        self.pos = start;
                        return self.err("unterminated quoted label");
                    }
                    Some(b'\'') if self.text.get(self.pos + 1) == Some(&b'\'') => {
                        out.push(b'\'');
                        self.pos += 2;
                    }
                    Some(b'\'') => {
                        self.pos += 1;
                        break;
                    }
                    Some(&c) => {
                        out.push(c);
                        self.pos += 1;
                    }
                }
            }
            return match String::from_utf8(out) {
                Ok(s) => Ok(Some(s)),
                Err(_) => self.err("label is not valid UTF-8"),
            };
        }
        let start = self.pos;
        while self
            .text
            .get(self.pos)
            .is_some_and(|c| !c.is_ascii_whitespace() && !SPECIAL.contains(c))
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        // underscores stand for blanks in unquoted labels
        let raw = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        Ok(Some(raw.replace('_', " ")))
    }

    fn branch_length(&mut self) -> Result<(), PhyloError> {
        if self.peek()? != Some(b':') {
            return Ok(());
        }
        self.pos += 1;
        self.skip_space()?;
        let start = self.pos;
        while self
            .text
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_digit() || b"+-.eE".contains(c))
        {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.text[start..self.pos]).unwrap();
        if text.parse::<f64>().is_err() {
            self.pos = start;
            return self.err("malformed branch length");
        }
        Ok(())
    }

    fn subtree(&mut self) -> Result<usize, PhyloError> {
        let pos = {
            self.skip_space()?;
            self.pos
        };
        let mut children = Vec::new();
        if self.peek()? == Some(b'(') {
            self.pos += 1;
            loop {
                children.push(self.subtree()?);
                match self.peek()? {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ')'"),
                }
            }
        }
        let label_pos = self.pos;
        let label = self.label()?;
        if children.is_empty() {
            match &label {
                None => return Err(PhyloError::MissingLabel { pos: label_pos }),
                Some(l) => check_label(l, label_pos)?,
            }
        }
        self.branch_length()?;
        self.nodes.push(Node {
            children,
            // internal labels (support values and the like) are kept here
            // and ignored when the tree is built
            label,
            pos,
        });
        Ok(self.nodes.len() - 1)
    }
}

/// Parses one tree. A rooted binary tree is unrooted by suppressing its
/// root; a root with three children is read as unrooted already.
pub fn parse_newick(text: &str) -> Result<PhyloTree, PhyloError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        nodes: Vec::new(),
    };
    let root = p.subtree()?;
    if p.peek()? != Some(b';') {
        return p.err("expected ';'");
    }
    p.pos += 1;
    if p.peek()?.is_some() {
        return p.err("trailing text after ';'");
    }
    let nodes = p.nodes;
    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, node) in nodes.iter().enumerate() {
        let allowed = if i == root { [0, 2, 3].as_slice() } else { &[0, 2] };
        if !allowed.contains(&node.children.len()) {
            return Err(PhyloError::NonBinary {
                pos: node.pos,
                children: node.children.len(),
            });
        }
        if node.children.is_empty() {
            let label = node.label.as_deref().unwrap();
            if labels.insert(label, i).is_some() {
                return Err(PhyloError::DuplicateLabel {
                    pos: node.pos,
                    label: label.into(),
                });
            }
        }
    }
    let mut g = Graph::new();
    for (i, node) in nodes.iter().enumerate() {
        g.add_vertex(i);
        for &c in &node.children {
            g.insert_edge(i, c);
        }
    }
    for (label, &i) in &labels {
        g.set_label(i, label.to_string()).unwrap();
    }
    if nodes[root].children.len() == 2 {
        let [x, y] = [nodes[root].children[0], nodes[root].children[1]];
        g.remove_vertex(root).unwrap();
        g.insert_edge(x, y);
    }
    PhyloTree::from_graph(g.compact().0)
}

fn quote(label: &str) -> String {
    let plain = label
        .bytes()
        .all(|c| !c.is_ascii_whitespace() && !SPECIAL.contains(&c) && c != b'_');
    if plain {
        label.to_string()
    } else {
        format!("'{}'", label.replace('\'', "''"))
    }
}

/// Canonical Newick text: rooted at the vertex next to the smallest taxon,
/// children ordered by their smallest taxon. Equal trees give equal text.
pub fn serialize(t: &PhyloTree) -> String {
    let g = t.graph();
    let (first, &leaf) = t.leaves.iter().next().expect("tree has a taxon");
    match t.num_taxa() {
        1 => return format!("{};", quote(first)),
        2 => {
            let names: Vec<String> = t.leaves.keys().map(|s| quote(s)).collect();
            return format!("({},{});", names[0], names[1]);
        }
        _ => {}
    }
    let root = g.neighbors(leaf).next().unwrap();
    // smallest taxon below each directed edge, computed on demand
    fn write(t: &PhyloTree, v: Vertex, from: Option<Vertex>) -> (String, String) {
        if let Some(label) = t.graph().label(v) {
            return (label.to_string(), quote(label));
        }
        let mut parts: Vec<(String, String)> = t
            .graph()
            .neighbors(v)
            .filter(|&w| Some(w) != from)
            .map(|w| write(t, w, Some(v)))
            .collect();
        parts.sort();
        let text = parts
            .iter()
            .map(|(_, s)| s.as_str())
            .collect::<Vec<_>>()
            .join(",");
        (parts[0].0.clone(), format!("({text})"))
    }
    format!("{};", write(t, root, None).1)
}
