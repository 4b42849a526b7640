//! Complete backtracking search for `H`-defined EDFs.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffcore::{verify_h_edf, DisjointMode, SetFamily, VerifyOptions};
use crate::digraphs::LabelledDigraph;
use crate::error::{Error, Result};
use crate::groups::{automorphisms, Automorphism, Group, GroupElement};

/// Groups up to this order get a precomputed difference table.
const TABLE_BOUND: u32 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymmetryBreaking {
    None,
    /// `A_0` is lexicographically least among its translates.
    #[default]
    Translation,
    /// `A_0` is least among `sigma(A_0) + beta`; abelian groups only.
    TranslationAutomorphism,
}

impl fmt::Display for SymmetryBreaking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryBreaking::None => "none",
            SymmetryBreaking::Translation => "translation",
            SymmetryBreaking::TranslationAutomorphism => "translation+automorphism",
        })
    }
}

impl std::str::FromStr for SymmetryBreaking {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SymmetryBreaking::None),
            "translation" => Ok(SymmetryBreaking::Translation),
            "translation+automorphism" | "automorphism" => Ok(SymmetryBreaking::TranslationAutomorphism),
            _ => Err(Error::BadParameter(format!("unknown symmetry breaking `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub mode: DisjointMode,
    pub max_solutions: Option<usize>,
    pub symmetry: SymmetryBreaking,
    pub time_budget: Option<Duration>,
    /// Shuffle the candidate order with this seed instead of ascending index.
    pub shuffle_seed: Option<u64>,
    /// Distribute complete choices of `A_0` across threads.
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            mode: DisjointMode::Disjoint,
            max_solutions: None,
            symmetry: SymmetryBreaking::Translation,
            time_budget: None,
            shuffle_seed: None,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxSolutions,
    TimeBudget,
}

#[derive(Debug, Clone)]
pub struct SearchCertificate {
    /// Whether `lambda (|G| - 1) = |E(H)| l^2` holds.
    pub feasible: bool,
    /// Accepted element insertions.
    pub nodes: u64,
    /// `depth_histogram[d]` counts nodes with `d` elements placed.
    pub depth_histogram: Vec<u64>,
    pub quotient: SymmetryBreaking,
    pub solutions: u64,
    /// Set when the search stopped before exhausting the space.
    pub stopped: Option<StopReason>,
    pub elapsed: Duration,
}

impl SearchCertificate {
    /// True when the whole (quotiented) space was searched.
    pub fn exhausted(&self) -> bool {
        self.stopped.is_none()
    }
}

impl fmt::Display for SearchCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.stopped {
            None if !self.feasible => write!(f, "exhausted: counting condition fails, 0 nodes")?,
            None => write!(f, "exhausted: {} solutions, {} nodes", self.solutions, self.nodes)?,
            Some(StopReason::MaxSolutions) => write!(
                f,
                "stopped at solution limit: {} solutions, {} nodes",
                self.solutions, self.nodes
            )?,
            Some(StopReason::TimeBudget) => write!(
                f,
                "partial: time budget hit, searched prefix up to node {}, {} solutions",
                self.nodes, self.solutions
            )?,
        }
        write!(
            f,
            ", quotient {}, depth histogram {:?}",
            self.quotient, self.depth_histogram
        )
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub solutions: Vec<SetFamily>,
    pub certificate: SearchCertificate,
}

/// Whether `lambda (|G| - 1) = |E(H)| l^2`.
pub fn counting_condition(g: &Group, h: &LabelledDigraph, l: usize, lambda: u32) -> bool {
    lambda as u64 * (g.order() as u64 - 1) == h.edge_count() as u64 * (l * l) as u64
}

enum Diff {
    Table(Vec<u16>, usize),
    Direct,
}

struct Shared<'a> {
    g: &'a Group,
    l: usize,
    lambda: u16,
    mode: DisjointMode,
    symmetry: SymmetryBreaking,
    /// Candidate order and its inverse.
    order: Vec<u32>,
    rank: Vec<u32>,
    /// Earlier neighbours of each vertex: `(u, true)` for an edge `(u, v)`.
    back: Vec<Vec<(usize, bool)>>,
    adjacent: Vec<Vec<bool>>,
    auts: Vec<Automorphism>,
    diff: Diff,
    nodes: AtomicU64,
    histogram: Vec<AtomicU64>,
    stop: AtomicBool,
    stopped: Mutex<Option<StopReason>>,
    solutions: AtomicU64,
    max_solutions: Option<u64>,
    deadline: Option<Instant>,
}

impl Shared<'_> {
    #[inline]
    fn difference(&self, a: u32, b: u32) -> u32 {
        match &self.diff {
            Diff::Table(t, n) => t[a as usize * n + b as usize] as u32,
            Diff::Direct => self
                .g
                .difference(GroupElement::from_index(a), GroupElement::from_index(b))
                .index(),
        }
    }

    fn halt(&self, why: StopReason) {
        self.stop.store(true, Ordering::Relaxed);
        let mut s = self.stopped.lock().unwrap();
        if s.is_none() {
            *s = Some(why);
        }
    }

    /// `A_0`, sorted by rank, is least among its images.
    fn a0_is_canonical(&self, a0: &[u32]) -> bool {
        let key = |s: &mut Vec<u32>| {
            for x in s.iter_mut() {
                *x = self.rank[*x as usize];
            }
            s.sort_unstable();
        };
        let mut own = a0.to_vec();
        key(&mut own);
        let sigmas: &[Automorphism] = &self.auts;
        let mut img = Vec::with_capacity(a0.len());
        for sigma in sigmas {
            let mapped: Vec<GroupElement> = a0.iter().map(|&x| sigma.apply(GroupElement::from_index(x))).collect();
            // only translates that contain the identity can beat a set containing it
            for &pivot in &mapped {
                let beta = self.g.invert(pivot);
                img.clear();
                img.extend(mapped.iter().map(|&y| self.g.translate(y, beta).index()));
                key(&mut img);
                if img < own {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone)]
struct State {
    counts: Vec<u16>,
    used: Vec<u16>,
    sets: Vec<Vec<u32>>,
    touched: Vec<u32>,
}

type Sink<'s> = &'s (dyn Fn(Vec<Vec<u32>>) + Sync);

fn place(sh: &Shared, st: &mut State, v: usize, x: u32) -> bool {
    let lambda = sh.lambda;
    let mark = st.touched.len();
    for &(u, forward) in &sh.back[v] {
        for k in 0..st.sets[u].len() {
            let y = st.sets[u][k];
            let d = if forward {
                sh.difference(x, y)
            } else {
                sh.difference(y, x)
            };
            st.touched.push(d);
            let c = &mut st.counts[d as usize];
            *c += 1;
            if d == 0 || *c > lambda {
                unplace_to(st, mark);
                return false;
            }
        }
    }
    st.used[x as usize] += 1;
    st.sets[v].push(x);
    true
}

fn unplace_to(st: &mut State, mark: usize) {
    for &d in &st.touched[mark..] {
        st.counts[d as usize] -= 1;
    }
    st.touched.truncate(mark);
}

fn unplace(st: &mut State, v: usize, mark: usize) {
    let x = st.sets[v].pop().unwrap();
    st.used[x as usize] -= 1;
    unplace_to(st, mark);
}

fn blocked(sh: &Shared, st: &State, v: usize, x: u32) -> bool {
    if st.sets[v].contains(&x) {
        return true;
    }
    match sh.mode {
        DisjointMode::Disjoint => st.used[x as usize] > 0,
        DisjointMode::AdjacentDisjoint => {
            st.used[x as usize] > 0 && (0..v).any(|u| sh.adjacent[v][u] && st.sets[u].contains(&x))
        }
    }
}

/// Depth-first fill of vertex `v` from candidate rank `from`. With
/// `split` set, complete choices of `A_0` are handed to `a0_out` instead of
/// being extended.
fn dfs(sh: &Shared, st: &mut State, v: usize, from: usize, sink: Sink, a0_out: Option<&mut Vec<Vec<u32>>>) {
    if sh.stop.load(Ordering::Relaxed) {
        return;
    }
    let m = st.sets.len();
    let n = sh.order.len();
    let k = st.sets[v].len();
    if k == sh.l {
        if v == 0 && sh.symmetry != SymmetryBreaking::None && !sh.a0_is_canonical(&st.sets[0]) {
            return;
        }
        if let Some(out) = a0_out {
            debug_assert_eq!(v, 0);
            out.push(st.sets[0].clone());
            return;
        }
        if v + 1 == m {
            let found = sh.solutions.fetch_add(1, Ordering::Relaxed) + 1;
            sink(st.sets.clone());
            if sh.max_solutions.is_some_and(|mx| found >= mx) {
                sh.halt(StopReason::MaxSolutions);
            }
            return;
        }
        dfs(sh, st, v + 1, 0, sink, None);
        return;
    }
    let id_rank = sh.rank[0] as usize;
    let mut a0_out = a0_out;
    for r in from..n {
        if n - r < sh.l - k {
            break;
        }
        // A_0 must contain the identity under any symmetry breaking
        if v == 0 && sh.symmetry != SymmetryBreaking::None && r > id_rank && !st.sets[0].contains(&0) {
            break;
        }
        let x = sh.order[r];
        if blocked(sh, st, v, x) {
            continue;
        }
        let mark = st.touched.len();
        if !place(sh, st, v, x) {
            continue;
        }
        let nodes = sh.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let depth = v * sh.l + k + 1;
        sh.histogram[depth].fetch_add(1, Ordering::Relaxed);
        if nodes & 0x3ff == 0 && sh.deadline.is_some_and(|d| Instant::now() >= d) {
            sh.halt(StopReason::TimeBudget);
        }
        dfs(sh, st, v, r + 1, sink, a0_out.as_deref_mut());
        unplace(st, v, mark);
        if sh.stop.load(Ordering::Relaxed) {
            return;
        }
    }
}

fn run(
    g: &Group,
    h: &LabelledDigraph,
    l: usize,
    lambda: u32,
    opts: &SearchOptions,
    emit: &(dyn Fn(Vec<Vec<u32>>) + Sync),
) -> Result<SearchCertificate> {
    let started = Instant::now();
    let m = h.vertex_count();
    let n = g.order();
    if m == 0 || l == 0 || l > n as usize {
        return Err(Error::BadParameter(format!("need m >= 1 and 1 <= l <= {n}")));
    }
    let auts = match opts.symmetry {
        SymmetryBreaking::TranslationAutomorphism => automorphisms(g)?,
        _ => vec![Automorphism::identity(g)],
    };
    let mut cert = SearchCertificate {
        feasible: counting_condition(g, h, l, lambda),
        nodes: 0,
        depth_histogram: vec![0; m * l + 1],
        quotient: opts.symmetry,
        solutions: 0,
        stopped: None,
        elapsed: Duration::ZERO,
    };
    if !cert.feasible || lambda > u16::MAX as u32 {
        cert.elapsed = started.elapsed();
        return Ok(cert);
    }
    let mut order: Vec<u32> = (0..n).collect();
    if let Some(seed) = opts.shuffle_seed {
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut rank = vec![0u32; n as usize];
    for (r, &x) in order.iter().enumerate() {
        rank[x as usize] = r as u32;
    }
    let mut back = vec![Vec::new(); m];
    let mut adjacent = vec![vec![false; m]; m];
    for &(i, j) in h.edges() {
        adjacent[i][j] = true;
        adjacent[j][i] = true;
        if i < j {
            back[j].push((i, true));
        } else {
            back[i].push((j, false));
        }
    }
    let diff = if n <= TABLE_BOUND {
        Diff::Table(g.difference_table().into_iter().map(|d| d as u16).collect(), n as usize)
    } else {
        Diff::Direct
    };
    let sh = Shared {
        g,
        l,
        lambda: lambda as u16,
        mode: opts.mode,
        symmetry: opts.symmetry,
        order,
        rank,
        back,
        adjacent,
        auts,
        diff,
        nodes: AtomicU64::new(0),
        histogram: (0..=m * l).map(|_| AtomicU64::new(0)).collect(),
        stop: AtomicBool::new(false),
        stopped: Mutex::new(None),
        solutions: AtomicU64::new(0),
        max_solutions: opts.max_solutions.map(|x| x as u64),
        deadline: opts.time_budget.map(|b| started + b),
    };
    let fresh = || State {
        counts: vec![0; n as usize],
        used: vec![0; n as usize],
        sets: vec![Vec::with_capacity(l); m],
        touched: Vec::new(),
    };
    let sink: Sink = emit;
    if sh.max_solutions == Some(0) {
        sh.halt(StopReason::MaxSolutions);
    } else if opts.parallel && m > 1 {
        let mut firsts = Vec::new();
        dfs(&sh, &mut fresh(), 0, 0, sink, Some(&mut firsts));
        firsts.par_iter().for_each(|a0| {
            let mut st = fresh();
            for &x in a0 {
                st.used[x as usize] += 1;
            }
            st.sets[0] = a0.clone();
            dfs(&sh, &mut st, 1, 0, sink, None);
        });
    } else {
        dfs(&sh, &mut fresh(), 0, 0, sink, None);
    }
    cert.nodes = sh.nodes.load(Ordering::Relaxed);
    cert.depth_histogram = sh.histogram.iter().map(|c| c.load(Ordering::Relaxed)).collect();
    cert.solutions = sh.solutions.load(Ordering::Relaxed);
    cert.stopped = *sh.stopped.lock().unwrap();
    cert.elapsed = started.elapsed();
    Ok(cert)
}

fn to_family(g: &Group, sets: Vec<Vec<u32>>) -> Result<SetFamily> {
    let mut sets = sets;
    for s in &mut sets {
        s.sort_unstable();
    }
    let refs: Vec<&[u32]> = sets.iter().map(Vec::as_slice).collect();
    SetFamily::from_indices(g, &refs)
}

fn reverify(g: &Group, h: &LabelledDigraph, lambda: u32, mode: DisjointMode, fam: &SetFamily) -> Result<()> {
    let rep = verify_h_edf(
        g,
        h,
        fam,
        &VerifyOptions {
            expected_lambda: Some(lambda),
            mode,
            allow_nonuniform: false,
        },
    )?;
    if rep.is_verified() {
        Ok(())
    } else {
        Err(Error::ConstructionFailed(format!(
            "search emitted an unverified family: {rep}"
        )))
    }
}

/// Searches for `(|G|, m, l, lambda; H)`-EDFs, calling `on_solution` for
/// each one as it is found. Every emitted family has been re-verified.
pub fn search_h_edf_streaming<F>(
    g: &Group,
    h: &LabelledDigraph,
    l: usize,
    lambda: u32,
    opts: &SearchOptions,
    on_solution: F,
) -> Result<SearchCertificate>
where
    F: FnMut(SetFamily) + Send,
{
    let cb = Mutex::new(on_solution);
    let err: Mutex<Option<Error>> = Mutex::new(None);
    let emit = |sets: Vec<Vec<u32>>| {
        let checked = to_family(g, sets).and_then(|f| reverify(g, h, lambda, opts.mode, &f).map(|_| f));
        match checked {
            Ok(f) => (cb.lock().unwrap())(f),
            Err(e) => {
                err.lock().unwrap().get_or_insert(e);
            }
        }
    };
    let cert = run(g, h, l, lambda, opts, &emit)?;
    match err.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(cert),
    }
}

/// Collects every solution of [`search_h_edf_streaming`].
pub fn search_h_edf(
    g: &Group,
    h: &LabelledDigraph,
    l: usize,
    lambda: u32,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let mut solutions = Vec::new();
    let certificate = search_h_edf_streaming(g, h, l, lambda, opts, |f| solutions.push(f))?;
    Ok(SearchOutcome { solutions, certificate })
}

/// Largest group order accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_ORDER: u32 = 13;
/// Largest `m * l` accepted by [`brute_force_oracle`].
pub const ORACLE_MAX_CELLS: usize = 6;

fn combinations(n: u32, l: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    fn rec(n: u32, l: usize, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(n, l, x + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, l, 0, &mut cur, &mut out);
    out
}

/// Every ordered family of `l`-subsets that is an `H`-defined EDF with this
/// lambda, found by plain enumeration.
pub fn brute_force_oracle(
    g: &Group,
    h: &LabelledDigraph,
    l: usize,
    lambda: u32,
    mode: DisjointMode,
) -> Result<Vec<SetFamily>> {
    let n = g.order();
    let m = h.vertex_count();
    if n > ORACLE_MAX_ORDER || m * l > ORACLE_MAX_CELLS || l == 0 || m == 0 {
        return Err(Error::BadParameter(format!(
            "oracle needs |G| <= {ORACLE_MAX_ORDER} and 1 <= m*l <= {ORACLE_MAX_CELLS}"
        )));
    }
    let subsets = combinations(n, l);
    let mut out = Vec::new();
    let mut pick = vec![0usize; m];
    loop {
        let sets: Vec<&Vec<u32>> = pick.iter().map(|&p| &subsets[p]).collect();
        if oracle_accepts(g, h, &sets, lambda, mode) {
            let refs: Vec<&[u32]> = sets.iter().map(|s| s.as_slice()).collect();
            out.push(SetFamily::from_indices(g, &refs)?);
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(out);
            }
            pick[i] += 1;
            if pick[i] < subsets.len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
    }
}

fn oracle_accepts(g: &Group, h: &LabelledDigraph, sets: &[&Vec<u32>], lambda: u32, mode: DisjointMode) -> bool {
    let shares = |a: &Vec<u32>, b: &Vec<u32>| a.iter().any(|x| b.contains(x));
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let must = match mode {
                DisjointMode::Disjoint => true,
                DisjointMode::AdjacentDisjoint => h.has_edge(i, j) || h.has_edge(j, i),
            };
            if must && shares(sets[i], sets[j]) {
                return false;
            }
        }
    }
    let mut counts = vec![0u32; g.order() as usize];
    for &(i, j) in h.edges() {
        for &a in sets[j] {
            for &b in sets[i] {
                let d = g.difference(GroupElement::from_index(a), GroupElement::from_index(b));
                counts[d.index() as usize] += 1;
            }
        }
    }
    counts[0] == 0 && counts[1..].iter().all(|&c| c == lambda)
}
