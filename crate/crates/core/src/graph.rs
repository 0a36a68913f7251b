//! MaxCut instances, cut values and the exhaustive oracle.
//!
//! Bit convention used throughout the crate: character `i` of a bitstring
//! (leftmost = 0) is the side of node `i`. For a basis-state index over `n`
//! qubits, node `i` is bit `n - 1 - i`, so formatting the index as an
//! `n`-digit binary number yields the same bitstring.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{input, Error, Result};
use crate::scalar::Weight;

/// Largest node count accepted by [`brute_force_maxcut`].
pub const ENUMERATION_LIMIT: usize = 24;

/// Undirected weighted graph defining a MaxCut cost function.
///
/// Edges are stored normalized to `(min, max)` in insertion order; that order
/// is also the order of the cost-layer gates in the ansatz.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxCutInstance<W> {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<W>,
}

impl<W: Weight> MaxCutInstance<W> {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, weights: Vec<W>) -> Result<Self> {
        if n == 0 {
            return input("graph needs at least one node");
        }
        if edges.len() != weights.len() {
            return input(format!(
                "{} edges but {} weights",
                edges.len(),
                weights.len()
            ));
        }
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            check_edge(n, u, v, &mut seen).map_err(Error::Input)?;
            normalized.push((u.min(v), u.max(v)));
        }
        Ok(Self {
            n,
            edges: normalized,
            weights,
        })
    }

    /// Graph with every weight equal to one.
    pub fn unweighted(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let weights = vec![W::one(); edges.len()];
        Self::new(n, edges, weights)
    }

    /// The five-node instance: K(2,3) across {0,1,2} | {3,4}, maximum cut 6.
    pub fn canonical() -> Self {
        Self::unweighted(5, vec![(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)])
            .expect("canonical instance is well-formed")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    /// Iterate `(u, v, w)` triples in edge order.
    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, W)> + '_ {
        self.edges
            .iter()
            .zip(&self.weights)
            .map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn total_weight(&self) -> W {
        self.weights.iter().fold(W::zero(), |acc, &w| acc + w)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Cut weight of an assignment given as a `'0'`/`'1'` string.
    pub fn cut_value(&self, assignment: &str) -> Result<W> {
        let bits = parse_bits(assignment, self.n)?;
        Ok(self.cut_of(|i| bits[i]))
    }

    /// Cut weight of a basis-state index (see module docs for bit order).
    pub fn cut_value_index(&self, index: usize) -> W {
        let n = self.n;
        self.cut_of(|i| (index >> (n - 1 - i)) & 1 == 1)
    }

    fn cut_of(&self, side: impl Fn(usize) -> bool) -> W {
        self.weighted_edges()
            .filter(|&(u, v, _)| side(u) != side(v))
            .fold(W::zero(), |acc, (_, _, w)| acc + w)
    }

    /// Cut value of every basis index `0..2^n`.
    pub fn cut_table(&self) -> Result<Vec<W>> {
        if self.n > ENUMERATION_LIMIT {
            return Err(Error::Capacity {
                n: self.n,
                limit: ENUMERATION_LIMIT,
            });
        }
        Ok((0..1usize << self.n).map(|i| self.cut_value_index(i)).collect())
    }

    /// Serialize to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (u, v, w) in self.weighted_edges() {
            if w == W::one() {
                let _ = writeln!(out, "{u} {v}");
            } else {
                let _ = writeln!(out, "{u} {v} {w}");
            }
        }
        out
    }

    /// Parse the edge-list text format: a node count line, then `u v [w]`
    /// lines. `#` starts a comment; blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        let mut weights = Vec::new();
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let Some(nodes) = n else {
                if fields.len() != 1 {
                    return Err(perr("expected a single node count".into()));
                }
                let count: usize = fields[0]
                    .parse()
                    .map_err(|_| perr(format!("bad node count {:?}", fields[0])))?;
                if count == 0 {
                    return Err(perr("node count must be positive".into()));
                }
                n = Some(count);
                continue;
            };
            if !(2..=3).contains(&fields.len()) {
                return Err(perr(format!("expected `u v [w]`, got {content:?}")));
            }
            let idx = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| perr(format!("bad node index {s:?}")))
            };
            let (u, v) = (idx(fields[0])?, idx(fields[1])?);
            let w = match fields.get(2) {
                Some(s) => s
                    .parse::<W>()
                    .map_err(|_| perr(format!("bad weight {s:?}")))?,
                None => W::one(),
            };
            check_edge(nodes, u, v, &mut seen).map_err(perr)?;
            edges.push((u.min(v), u.max(v)));
            weights.push(w);
        }
        let n = n.ok_or(Error::Parse {
            line: 1,
            msg: "missing node count".into(),
        })?;
        Self::new(n, edges, weights)
    }
}

fn check_edge(
    n: usize,
    u: usize,
    v: usize,
    seen: &mut BTreeSet<(usize, usize)>,
) -> std::result::Result<(), String> {
    if u >= n || v >= n {
        return Err(format!("edge ({u}, {v}) out of range for {n} nodes"));
    }
    if u == v {
        return Err(format!("self-loop on node {u}"));
    }
    if !seen.insert((u.min(v), u.max(v))) {
        return Err(format!("duplicate edge ({u}, {v})"));
    }
    Ok(())
}

/// Validate a bitstring against a node count.
pub fn parse_bits(assignment: &str, n: usize) -> Result<Vec<bool>> {
    if assignment.len() != n {
        return input(format!(
            "assignment {assignment:?} has length {}, expected {n}",
            assignment.len()
        ));
    }
    assignment
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => input(format!("illegal character {other:?} in assignment")),
        })
        .collect()
}

/// Render a basis index as an `n`-character bitstring (node 0 leftmost).
pub fn index_to_bits(index: usize, n: usize) -> String {
    (0..n)
        .map(|i| if (index >> (n - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Inverse of [`index_to_bits`].
pub fn bits_to_index(bits: &str) -> Result<usize> {
    let parsed = parse_bits(bits, bits.len())?;
    Ok(parsed.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize))
}

/// Bitwise complement of a bitstring.
pub fn complement(bits: &str) -> String {
    bits.chars()
        .map(|c| if c == '1' { '0' } else { '1' })
        .collect()
}

/// Result of exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct BruteForce<W> {
    pub value: W,
    /// Every assignment attaining `value`, sorted.
    pub optima: BTreeSet<String>,
}

/// Enumerate all `2^n` assignments and return the maximum cut with all of its
/// optima (complementary pairs included).
pub fn brute_force_maxcut<W: Weight>(instance: &MaxCutInstance<W>) -> Result<BruteForce<W>> {
    let n = instance.n();
    if n > ENUMERATION_LIMIT {
        return Err(Error::Capacity {
            n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut value = W::zero();
    let mut best: Vec<usize> = Vec::new();
    for index in 0..1usize << n {
        let cut = instance.cut_value_index(index);
        if cut > value || best.is_empty() {
            value = cut;
            best.clear();
            best.push(index);
        } else if cut == value {
            best.push(index);
        }
    }
    let optima = best.into_iter().map(|i| index_to_bits(i, n)).collect();
    Ok(BruteForce { value, optima })
}
