//! Difference multisets and the digraph-defined EDF verifier.
//!
//! A family `(A_0, ..., A_{m-1})` is an `(n, m, l, lambda; H)`-EDF when the
//! multiset union over directed edges `(i, j)` of `H` of `Delta(A_j, A_i)`
//! equals `lambda` copies of every non-identity element. Note the order: the
//! edge `(i, j)` contributes the *second* set minus the *first*.

mod transfer;
mod variants;

use std::fmt;

pub use transfer::{check_symmetric_pairs, double_to_undirected, orient_halving};
pub use variants::{decompose_c_cedf, variant_digraphs, verify_variant, Variant};

use crate::digraphs::LabelledDigraph;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupElement};

/// Maximum number of wrong-multiplicity witnesses kept in a report.
pub const MAX_WITNESSES: usize = 10;

/// Ordered tuple of duplicate-free subsets of a group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    sets: Vec<Vec<GroupElement>>,
}

impl SetFamily {
    /// Validates that no set repeats an element. Sets keep their given order.
    pub fn new(sets: Vec<Vec<GroupElement>>) -> Result<Self> {
        for s in &sets {
            let mut sorted: Vec<u32> = s.iter().map(|e| e.index()).collect();
            sorted.sort_unstable();
            if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateElement(w[0]));
            }
        }
        Ok(SetFamily { sets })
    }

    /// Builds a family from raw indices, range-checked against `g`.
    pub fn from_indices(g: &Group, sets: &[&[u32]]) -> Result<Self> {
        let sets = sets
            .iter()
            .map(|s| s.iter().map(|&i| g.element(i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets)
    }

    /// Parses each set from element tokens in the group's text form.
    pub fn parse(g: &Group, sets: &[&[&str]]) -> Result<Self> {
        let sets = sets
            .iter()
            .map(|s| s.iter().map(|t| g.parse_element(t)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(sets)
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[Vec<GroupElement>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[GroupElement] {
        &self.sets[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// The common set size, if all sets have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.sets.first()?.len();
        self.sets.iter().all(|s| s.len() == first).then_some(first)
    }

    /// The family `(A_{map[0]}, A_{map[1]}, ...)`.
    pub fn reindexed(&self, map: &[usize]) -> SetFamily {
        SetFamily {
            sets: map.iter().map(|&i| self.sets[i].clone()).collect(),
        }
    }

    /// Each set sorted by index; two families are equal as sequences of sets
    /// exactly when their canonical forms are equal.
    pub fn canonical(&self) -> Vec<Vec<u32>> {
        self.sets
            .iter()
            .map(|s| {
                let mut v: Vec<u32> = s.iter().map(|e| e.index()).collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    pub fn same_sets_as(&self, other: &SetFamily) -> bool {
        self.canonical() == other.canonical()
    }

    fn check_range(&self, g: &Group) -> Result<()> {
        for s in &self.sets {
            for e in s {
                g.element(e.index())?;
            }
        }
        Ok(())
    }

    /// Pairs `(i, j)`, `i < j`, of sets that share an element.
    pub fn overlapping_pairs(&self, order: u32) -> Vec<(usize, usize)> {
        let mut owner: Vec<Vec<usize>> = vec![Vec::new(); order as usize];
        for (i, s) in self.sets.iter().enumerate() {
            for e in s {
                owner[e.index() as usize].push(i);
            }
        }
        let mut pairs: Vec<(usize, usize)> = owner
            .iter()
            .flat_map(|o| {
                o.iter()
                    .enumerate()
                    .flat_map(move |(x, &i)| o[x + 1..].iter().map(move |&j| (i.min(j), i.max(j))))
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    pub fn format(&self, g: &Group) -> String {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|s| {
                let toks: Vec<String> = s.iter().map(|&e| g.format_element(e)).collect();
                format!("{{{}}}", toks.join(" "))
            })
            .collect();
        parts.join(" ")
    }
}

/// Element multiplicities indexed by canonical element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceMultiset {
    counts: Vec<u32>,
    total: u64,
}

impl DifferenceMultiset {
    pub fn zero(order: u32) -> Self {
        DifferenceMultiset {
            counts: vec![0; order as usize],
            total: 0,
        }
    }

    pub fn add(&mut self, e: GroupElement, times: u32) {
        self.counts[e.index() as usize] += times;
        self.total += times as u64;
    }

    /// Adds another multiset over the same group.
    pub fn merge(&mut self, other: &DifferenceMultiset) {
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
    }

    pub fn count(&self, e: GroupElement) -> u32 {
        self.counts[e.index() as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Largest count over non-identity elements.
    pub fn max_nonidentity(&self) -> u32 {
        self.counts.iter().skip(1).copied().max().unwrap_or(0)
    }

    /// The multiset `{ x^-1 : x in self }`.
    pub fn inverted(&self, g: &Group) -> DifferenceMultiset {
        let mut out = DifferenceMultiset::zero(g.order());
        for e in g.elements() {
            let c = self.count(e);
            if c > 0 {
                out.add(g.invert(e), c);
            }
        }
        out
    }
}

fn check_nonempty(a: &[GroupElement]) -> Result<()> {
    if a.is_empty() {
        Err(Error::EmptySet)
    } else {
        Ok(())
    }
}

fn tally_into(g: &Group, acc: &mut DifferenceMultiset, a: &[GroupElement], b: &[GroupElement]) {
    for &x in a {
        for &y in b {
            acc.add(g.difference(x, y), 1);
        }
    }
}

/// `Delta(A, B) = { a - b : a in A, b in B }`.
pub fn external_difference(g: &Group, a: &[GroupElement], b: &[GroupElement]) -> Result<DifferenceMultiset> {
    check_nonempty(a)?;
    check_nonempty(b)?;
    let mut acc = DifferenceMultiset::zero(g.order());
    tally_into(g, &mut acc, a, b);
    Ok(acc)
}

/// The subtraction table: entry `[r][c]` is `rows[r] - cols[c]`.
pub fn subtraction_table(g: &Group, rows: &[GroupElement], cols: &[GroupElement]) -> Vec<Vec<GroupElement>> {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| g.difference(r, c)).collect())
        .collect()
}

/// `Delta(A) = { x - y : x != y in A }`.
pub fn internal_difference(g: &Group, a: &[GroupElement]) -> Result<DifferenceMultiset> {
    check_nonempty(a)?;
    let mut acc = DifferenceMultiset::zero(g.order());
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in a.iter().enumerate() {
            if i != j {
                acc.add(g.difference(x, y), 1);
            }
        }
    }
    Ok(acc)
}

/// Largest multiplicity in `Delta(A)`; 0 for a singleton.
pub fn max_internal_multiplicity(g: &Group, a: &[GroupElement]) -> Result<u32> {
    Ok(internal_difference(g, a)?.counts().iter().copied().max().unwrap_or(0))
}

fn check_shape(h: &LabelledDigraph, fam: &SetFamily) -> Result<()> {
    if fam.len() != h.vertex_count() {
        return Err(Error::SizeMismatch {
            family: fam.len(),
            digraph: h.vertex_count(),
        });
    }
    Ok(())
}

/// Multiset union over edges `(i, j)` of `Delta(A_j, A_i)`.
pub fn edf_multiset(g: &Group, h: &LabelledDigraph, fam: &SetFamily) -> Result<DifferenceMultiset> {
    check_shape(h, fam)?;
    fam.check_range(g)?;
    let mut acc = DifferenceMultiset::zero(g.order());
    for &(i, j) in h.edges() {
        tally_into(g, &mut acc, fam.set(j), fam.set(i));
    }
    Ok(acc)
}

/// Which pairs of sets must be disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DisjointMode {
    /// All sets pairwise disjoint.
    #[default]
    Disjoint,
    /// Only sets joined by an edge must be disjoint.
    AdjacentDisjoint,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Required lambda; inferred from the data when `None`.
    pub expected_lambda: Option<u32>,
    pub mode: DisjointMode,
    /// Permit unequal set sizes (generalised families).
    pub allow_nonuniform: bool,
}

impl VerifyOptions {
    pub fn expecting(lambda: u32) -> Self {
        VerifyOptions {
            expected_lambda: Some(lambda),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Verified,
    Failed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub element: GroupElement,
    pub expected: u32,
    pub actual: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub verdict: Verdict,
    /// The lambda checked against: the expected value, or the inferred one.
    pub lambda: Option<u32>,
    /// Up to [`MAX_WITNESSES`] non-identity elements with the wrong count.
    pub witnesses: Vec<Witness>,
    pub identity_count: u32,
    /// Pairs of sets that overlap although the mode requires them disjoint.
    pub disjointness_violations: Vec<(usize, usize)>,
    pub total: u64,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// The verified lambda, if any.
    pub fn verified_lambda(&self) -> Option<u32> {
        self.is_verified().then_some(self.lambda).flatten()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.verdict, self.lambda) {
            (Verdict::Verified, Some(l)) => write!(f, "VERIFIED lambda={l}"),
            (Verdict::Verified, None) => write!(f, "VERIFIED"),
            (Verdict::Failed, _) => {
                write!(f, "FAILED")?;
                if let Some(l) = self.lambda {
                    write!(f, " (lambda={l})")?;
                }
                if self.identity_count > 0 {
                    write!(f, " identity occurs {} times", self.identity_count)?;
                }
                if !self.disjointness_violations.is_empty() {
                    write!(f, " overlapping sets {:?}", self.disjointness_violations)?;
                }
                Ok(())
            }
        }
    }
}

/// Checks the `(n, m, l, lambda; H)`-EDF condition.
pub fn verify_h_edf(
    g: &Group,
    h: &LabelledDigraph,
    fam: &SetFamily,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    check_shape(h, fam)?;
    if !opts.allow_nonuniform && fam.uniform_size().is_none() && !fam.is_empty() {
        return Err(Error::NonUniformSizes(fam.sizes()));
    }
    let ms = edf_multiset(g, h, fam)?;
    let violations: Vec<(usize, usize)> = fam
        .overlapping_pairs(g.order())
        .into_iter()
        .filter(|&(i, j)| match opts.mode {
            DisjointMode::Disjoint => true,
            DisjointMode::AdjacentDisjoint => h.has_edge(i, j) || h.has_edge(j, i),
        })
        .collect();
    Ok(judge(g, &ms, opts.expected_lambda, violations))
}

/// Compares a multiset against `lambda (G \ {0})`.
pub(crate) fn judge(
    g: &Group,
    ms: &DifferenceMultiset,
    expected: Option<u32>,
    disjointness_violations: Vec<(usize, usize)>,
) -> VerificationReport {
    let identity_count = ms.count(g.identity());
    let lambda = expected.or_else(|| (g.order() > 1).then(|| ms.counts()[1])).or(Some(0));
    let target = lambda.unwrap_or(0);
    let mut witnesses = Vec::new();
    let mut uniform = true;
    for e in g.elements().skip(1) {
        let actual = ms.count(e);
        if actual != target {
            uniform = false;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(Witness {
                    element: e,
                    expected: target,
                    actual,
                });
            } else {
                break;
            }
        }
    }
    let ok = uniform && identity_count == 0 && disjointness_violations.is_empty();
    VerificationReport {
        verdict: if ok { Verdict::Verified } else { Verdict::Failed },
        lambda,
        witnesses,
        identity_count,
        disjointness_violations,
        total: ms.total(),
    }
}
