//! Labelled digraphs on vertices `0..m`.
//!
//! Undirected graphs are stored as digraphs with both directions of every
//! edge. The `*` kinds are oriented.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Provenance of a digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DigraphKind {
    Complete(usize),
    Tournament(usize),
    Cycle(usize),
    OrientedCycle(usize),
    Kab(usize, usize),
    OrientedKab(usize, usize),
    OrientedStar(usize),
    Union,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelledDigraph {
    m: usize,
    /// Sorted, no duplicates, no loops.
    edges: Vec<(usize, usize)>,
    kind: DigraphKind,
}

impl LabelledDigraph {
    /// Builds a digraph from arbitrary edges; rejects loops, duplicates and
    /// out-of-range endpoints.
    pub fn new(m: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidDigraph(format!("loop at vertex {i}")));
            }
            if i >= m || j >= m {
                return Err(Error::InvalidDigraph(format!("edge ({i},{j}) outside 0..{m}")));
            }
            if !set.insert((i, j)) {
                return Err(Error::InvalidDigraph(format!("duplicate edge ({i},{j})")));
            }
        }
        Ok(LabelledDigraph {
            m,
            edges: set.into_iter().collect(),
            kind: DigraphKind::Custom,
        })
    }

    fn with_kind(mut self, kind: DigraphKind) -> Self {
        self.kind = kind;
        self
    }

    fn need(m: usize, min: usize, what: &str) -> Result<()> {
        if m < min {
            Err(Error::InvalidDigraph(format!(
                "{what} needs at least {min} vertices, got {m}"
            )))
        } else {
            Ok(())
        }
    }

    /// `K_m`: every ordered pair.
    pub fn complete(m: usize) -> Result<Self> {
        Self::need(m, 2, "complete")?;
        let edges = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)));
        Ok(Self::new(m, edges)?.with_kind(DigraphKind::Complete(m)))
    }

    /// Tournament `K_m^*` with the standard orientation `(i, j)` for `i < j`.
    pub fn tournament(m: usize) -> Result<Self> {
        Self::tournament_with(m, &vec![false; m * m.saturating_sub(1) / 2])
    }

    /// Tournament where `flips[t]` reverses the `t`-th pair `(i, j)`, `i < j`,
    /// pairs taken in lexicographic order.
    pub fn tournament_with(m: usize, flips: &[bool]) -> Result<Self> {
        Self::need(m, 2, "tournament")?;
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        if flips.len() != pairs.len() {
            return Err(Error::InvalidDigraph(format!(
                "tournament on {m} vertices needs {} orientation bits, got {}",
                pairs.len(),
                flips.len()
            )));
        }
        let edges = pairs
            .into_iter()
            .zip(flips)
            .map(|((i, j), &f)| if f { (j, i) } else { (i, j) });
        Ok(Self::new(m, edges)?.with_kind(DigraphKind::Tournament(m)))
    }

    /// `C_m` (undirected), `m >= 3`.
    pub fn cycle(m: usize) -> Result<Self> {
        Self::need(m, 3, "cycle")?;
        let edges = (0..m).flat_map(|i| [(i, (i + 1) % m), ((i + 1) % m, i)]);
        Ok(Self::new(m, edges)?.with_kind(DigraphKind::Cycle(m)))
    }

    /// `C_m^*` with edges `(i, i+1 mod m)`. For `m = 2` this is the single
    /// undirected edge `{(0,1), (1,0)}`.
    pub fn oriented_cycle(m: usize) -> Result<Self> {
        Self::need(m, 2, "oriented cycle")?;
        let edges = (0..m).map(|i| (i, (i + 1) % m));
        Ok(Self::new(m, edges)?.with_kind(DigraphKind::OrientedCycle(m)))
    }

    /// `K_{a,b}` with parts `{0..a}` and `{a..a+b}`, both directions.
    pub fn kab(a: usize, b: usize) -> Result<Self> {
        Self::check_parts(a, b)?;
        let edges = (0..a).flat_map(|i| (a..a + b).flat_map(move |j| [(i, j), (j, i)]));
        Ok(Self::new(a + b, edges)?.with_kind(DigraphKind::Kab(a, b)))
    }

    /// `K_{a,b}^*`: edges from the first part to the second only.
    pub fn oriented_kab(a: usize, b: usize) -> Result<Self> {
        Self::check_parts(a, b)?;
        let edges = (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)));
        Ok(Self::new(a + b, edges)?.with_kind(DigraphKind::OrientedKab(a, b)))
    }

    /// `K_{m-1,1}^*`: every leaf points at the centre `m - 1`.
    pub fn oriented_star(m: usize) -> Result<Self> {
        Self::need(m, 2, "star")?;
        Ok(Self::oriented_kab(m - 1, 1)?.with_kind(DigraphKind::OrientedStar(m)))
    }

    fn check_parts(a: usize, b: usize) -> Result<()> {
        if a < 1 || b < 1 {
            return Err(Error::InvalidDigraph(format!(
                "bipartite parts must be nonempty, got {a},{b}"
            )));
        }
        Ok(())
    }

    /// Places the parts side by side, relabelling vertices block by block.
    pub fn disjoint_union(parts: &[LabelledDigraph]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidDigraph("empty union".into()));
        }
        let mut offset = 0;
        let mut edges = Vec::new();
        for h in parts {
            edges.extend(h.edges.iter().map(|&(i, j)| (i + offset, j + offset)));
            offset += h.m;
        }
        Ok(Self::new(offset, edges)?.with_kind(DigraphKind::Union))
    }

    pub fn reverse(&self) -> Self {
        let mut edges: Vec<_> = self.edges.iter().map(|&(i, j)| (j, i)).collect();
        edges.sort_unstable();
        LabelledDigraph {
            m: self.m,
            edges,
            kind: DigraphKind::Custom,
        }
    }

    pub fn underlying_undirected(&self) -> Self {
        let set: BTreeSet<_> = self.edges.iter().flat_map(|&(i, j)| [(i, j), (j, i)]).collect();
        LabelledDigraph {
            m: self.m,
            edges: set.into_iter().collect(),
            kind: DigraphKind::Custom,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self) -> &DigraphKind {
        &self.kind
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    /// Every edge has its reverse.
    pub fn is_symmetric(&self) -> bool {
        self.edges.iter().all(|&(i, j)| self.has_edge(j, i))
    }

    /// At most one direction per vertex pair.
    pub fn is_oriented(&self) -> bool {
        self.edges.iter().all(|&(i, j)| !self.has_edge(j, i))
    }

    /// Same edge set, ignoring provenance.
    pub fn same_edges(&self, other: &LabelledDigraph) -> bool {
        self.m == other.m && self.edges == other.edges
    }

    /// Parses the textual digraph syntax: `complete:m`, `tournament:m[:bits]`,
    /// `cycle:m`, `cycle*:m`, `kab:a,b`, `kab*:a,b`, `star*:m`,
    /// `union:(spec;spec;...)` and `edges:0>1,1>2,...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let bad = |msg: &str| Error::InvalidDigraph(format!("`{spec}`: {msg}"));
        let (head, rest) = spec.split_once(':').ok_or_else(|| bad("expected KIND:PARAMS"))?;
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad("expected an integer"));
        let pair = |s: &str| -> Result<(usize, usize)> {
            let (a, b) = s.split_once(',').ok_or_else(|| bad("expected a,b"))?;
            Ok((int(a)?, int(b)?))
        };
        match head {
            "complete" => Self::complete(int(rest)?),
            "tournament" => match rest.split_once(':') {
                None => Self::tournament(int(rest)?),
                Some((m, bits)) => {
                    let flips = bits
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(bad("orientation bits must be 0 or 1")),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Self::tournament_with(int(m)?, &flips)
                }
            },
            "cycle" => Self::cycle(int(rest)?),
            "cycle*" => Self::oriented_cycle(int(rest)?),
            "kab" => {
                let (a, b) = pair(rest)?;
                Self::kab(a, b)
            }
            "kab*" => {
                let (a, b) = pair(rest)?;
                Self::oriented_kab(a, b)
            }
            "star*" => Self::oriented_star(int(rest)?),
            "union" => {
                let inner = rest
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| bad("expected union:(spec;spec;...)"))?;
                let parts = split_top_level(inner)
                    .into_iter()
                    .map(Self::parse)
                    .collect::<Result<Vec<_>>>()?;
                Self::disjoint_union(&parts)
            }
            "edges" => {
                let edges = rest
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| {
                        let (i, j) = t.split_once('>').ok_or_else(|| bad("expected i>j"))?;
                        Ok((int(i)?, int(j)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let m = edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0);
                Self::new(m, edges)
            }
            other => Err(bad(&format!("unknown digraph kind `{other}`"))),
        }
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl fmt::Display for LabelledDigraph {
    /// Emits a spec that [`LabelledDigraph::parse`] maps back to the same edges.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            DigraphKind::Complete(m) => write!(f, "complete:{m}"),
            DigraphKind::Cycle(m) => write!(f, "cycle:{m}"),
            DigraphKind::OrientedCycle(m) => write!(f, "cycle*:{m}"),
            DigraphKind::Kab(a, b) => write!(f, "kab:{a},{b}"),
            DigraphKind::OrientedKab(a, b) => write!(f, "kab*:{a},{b}"),
            DigraphKind::OrientedStar(m) => write!(f, "star*:{m}"),
            _ if self.edges.is_empty() => write!(f, "edges:"),
            _ => {
                let parts: Vec<String> = self.edges.iter().map(|(i, j)| format!("{i}>{j}")).collect();
                write!(f, "edges:{}", parts.join(","))
            }
        }
    }
}
