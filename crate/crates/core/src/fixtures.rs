//! Expected results shipped with the crate: every candidate list and
//! search tree the index-5 classification is checked against.
//!
//! Pair files hold one pair per line, `first second`, optionally preceded
//! by a name. Tree files indent two spaces per level and mark final weeds
//! with `W`.

use crate::bigraph::{canonical_key_up_to_swap, parse_bigraph, parse_pair, BigraphPair, BigraphWithDuals};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

/// `(name, contents)` for every embedded fixture file.
pub const FILES: &[(&str, &str)] = &[
    ("corpus", include_str!("../data/corpus.txt")),
    ("family_10", include_str!("../data/family_10.txt")),
    ("family_11", include_str!("../data/family_11.txt")),
    ("family_12", include_str!("../data/family_12.txt")),
    ("forbidden_even_quadruple", include_str!("../data/forbidden_even_quadruple.txt")),
    ("main_vines", include_str!("../data/main_vines.txt")),
    ("main_weeds", include_str!("../data/main_weeds.txt")),
    ("seed_4321", include_str!("../data/seed_4321.txt")),
    ("seed_5321", include_str!("../data/seed_5321.txt")),
    ("seeds", include_str!("../data/seeds.txt")),
    ("step_e1", include_str!("../data/step_e1.txt")),
    ("step_o1a", include_str!("../data/step_o1a.txt")),
    ("step_o1c", include_str!("../data/step_o1c.txt")),
    ("tree_10", include_str!("../data/tree_10.txt")),
    ("tree_11a", include_str!("../data/tree_11a.txt")),
    ("tree_11b", include_str!("../data/tree_11b.txt")),
    ("tree_11c", include_str!("../data/tree_11c.txt")),
    ("tree_4321", include_str!("../data/tree_4321.txt")),
    ("tree_5321", include_str!("../data/tree_5321.txt")),
    ("tree_e2", include_str!("../data/tree_e2.txt")),
    ("tree_o2a", include_str!("../data/tree_o2a.txt")),
    ("tree_o2c", include_str!("../data/tree_o2c.txt")),
    ("tree_worked_step1", include_str!("../data/tree_worked_step1.txt")),
    ("tree_worked_step2", include_str!("../data/tree_worked_step2.txt")),
    ("tree_worked_step3", include_str!("../data/tree_worked_step3.txt")),
    ("tree_worked_step4", include_str!("../data/tree_worked_step4.txt")),
    ("vines_10", include_str!("../data/vines_10.txt")),
    ("vines_11a", include_str!("../data/vines_11a.txt")),
    ("vines_11b", include_str!("../data/vines_11b.txt")),
    ("vines_11c", include_str!("../data/vines_11c.txt")),
    ("vines_12", include_str!("../data/vines_12.txt")),
    ("vines_4321", include_str!("../data/vines_4321.txt")),
    ("vines_5321", include_str!("../data/vines_5321.txt")),
    ("vines_e2", include_str!("../data/vines_e2.txt")),
    ("vines_o2a", include_str!("../data/vines_o2a.txt")),
    ("vines_o2c", include_str!("../data/vines_o2c.txt")),
    ("weed_4621", include_str!("../data/weed_4621.txt")),
    ("weeds_10", include_str!("../data/weeds_10.txt")),
    ("weeds_e2", include_str!("../data/weeds_e2.txt")),
    ("weeds_o2a", include_str!("../data/weeds_o2a.txt")),
    ("weeds_o2c", include_str!("../data/weeds_o2c.txt")),
    ("worked_extensions_first", include_str!("../data/worked_extensions_first.txt")),
    ("worked_extensions_second", include_str!("../data/worked_extensions_second.txt")),
    ("worked_final_vines", include_str!("../data/worked_final_vines.txt")),
    ("worked_seed", include_str!("../data/worked_seed.txt")),
    ("worked_step1_weeds", include_str!("../data/worked_step1_weeds.txt")),
    ("worked_step2_vines", include_str!("../data/worked_step2_vines.txt")),
    ("worked_step2_weeds", include_str!("../data/worked_step2_weeds.txt")),
];

pub fn raw(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, c)| *c)
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn at_line(e: Error, line: usize) -> Error {
    Error::InvalidArgument(format!("line {line}: {e}"))
}

/// Named or unnamed pairs, one per line.
pub fn parse_pairs(text: &str) -> Result<Vec<(Option<String>, BigraphPair)>> {
    let mut out = Vec::new();
    for (n, line) in lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (name, body) = match fields.len() {
            2 => (None, line),
            3 => (Some(fields[0].to_string()), &line[fields[0].len()..]),
            _ => return Err(Error::InvalidArgument(format!("line {n}: expected a pair"))),
        };
        out.push((name, parse_pair(body).map_err(|e| at_line(e, n))?));
    }
    Ok(out)
}

pub fn parse_graphs(text: &str) -> Result<Vec<BigraphWithDuals>> {
    lines(text).map(|(n, l)| parse_bigraph(l).map_err(|e| at_line(e, n))).collect()
}

/// An embedded pair list.
pub fn pairs(name: &str) -> Vec<BigraphPair> {
    named_pairs(name).into_iter().map(|(_, p)| p).collect()
}

pub fn named_pairs(name: &str) -> Vec<(Option<String>, BigraphPair)> {
    let text = raw(name).unwrap_or_else(|| panic!("no fixture {name}"));
    parse_pairs(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// The pair called `label` in an embedded named list.
pub fn named(name: &str, label: &str) -> BigraphPair {
    named_pairs(name)
        .into_iter()
        .find(|(n, _)| n.as_deref() == Some(label))
        .unwrap_or_else(|| panic!("no {label} in {name}"))
        .1
}

pub fn graphs(name: &str) -> Vec<BigraphWithDuals> {
    let text = raw(name).unwrap_or_else(|| panic!("no fixture {name}"));
    parse_graphs(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// Keys up to exchanging the graphs.
pub fn key_set<'a, I: IntoIterator<Item = &'a BigraphPair>>(pairs: I) -> BTreeSet<String> {
    pairs.into_iter().map(canonical_key_up_to_swap).collect()
}

/// A search tree as nested `(key, is_final_weed, children)`, children sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TreeShape {
    pub key: String,
    pub weed: bool,
    pub children: Vec<TreeShape>,
}

impl TreeShape {
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|c| c.size()).sum::<usize>()
    }

    fn sort(&mut self) {
        for c in &mut self.children {
            c.sort();
        }
        self.children.sort();
    }
}

pub fn parse_tree(text: &str) -> Result<Vec<TreeShape>> {
    let mut stack: Vec<(usize, TreeShape)> = Vec::new();
    let mut roots = Vec::new();
    fn close(stack: &mut Vec<(usize, TreeShape)>, roots: &mut Vec<TreeShape>, level: usize) {
        while stack.last().is_some_and(|(l, _)| *l >= level) {
            let (_, node) = stack.pop().unwrap();
            match stack.last_mut() {
                Some((_, parent)) => parent.children.push(node),
                None => roots.push(node),
            }
        }
    }
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let level = indent / 2;
        let body = line.trim();
        let (mark, rest) = body.split_at(1);
        let weed = match mark {
            "W" => true,
            "-" => false,
            _ => return Err(Error::InvalidArgument(format!("line {}: bad node mark", n + 1))),
        };
        let p = parse_pair(rest).map_err(|e| at_line(e, n + 1))?;
        close(&mut stack, &mut roots, level);
        stack.push((level, TreeShape { key: canonical_key_up_to_swap(&p), weed, children: Vec::new() }));
    }
    close(&mut stack, &mut roots, 0);
    for r in &mut roots {
        r.sort();
    }
    roots.sort();
    Ok(roots)
}

pub fn tree(name: &str) -> Vec<TreeShape> {
    parse_tree(raw(name).unwrap_or_else(|| panic!("no fixture {name}"))).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

/// The shape of a recorded odometer tree.
pub fn shape_of(t: &crate::odometer::OdometerTree) -> Vec<TreeShape> {
    fn build(t: &crate::odometer::OdometerTree, id: usize) -> TreeShape {
        TreeShape {
            key: canonical_key_up_to_swap(&t.nodes[id].pair),
            weed: t.is_weed(id),
            children: t.children(id).map(|c| build(t, c.id)).collect(),
        }
    }
    let mut roots: Vec<TreeShape> = t.roots().map(|r| build(t, r.id)).collect();
    for r in &mut roots {
        r.sort();
    }
    roots.sort();
    roots
}
