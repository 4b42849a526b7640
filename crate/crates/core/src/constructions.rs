//! Explicit constructions of digraph-defined EDFs.
//!
//! Every constructor re-verifies its output against the digraph checks it
//! declares and fails with [`Error::ConstructionFailed`] if any check does
//! not hold.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diffcore::{
    edf_multiset, verify_h_edf, verify_variant, SetFamily, Variant, VerificationReport, VerifyOptions,
};
use crate::digraphs::LabelledDigraph;
use crate::error::{Error, Result};
use crate::groups::{
    cyclotomic_class, cyclotomic_classes, minus_one_in_c0, prime_power, FieldTable, Group, GroupElement,
};

/// One digraph condition: `family.reindexed(vertex_map)` must be an
/// `H`-defined EDF with this lambda.
#[derive(Debug, Clone)]
pub struct Check {
    pub digraph: LabelledDigraph,
    pub vertex_map: Vec<usize>,
    pub lambda: u32,
}

/// Evidence that a family is not a CEDF: in each orientation of the cycle
/// two elements occur with different multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonCedfCertificate {
    /// `(x, count(x), y, count(y))` for the standard orientation.
    pub forward: (GroupElement, u32, GroupElement, u32),
    /// The same for the reversed orientation.
    pub reverse: (GroupElement, u32, GroupElement, u32),
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub group: Group,
    pub family: SetFamily,
    pub checks: Vec<Check>,
    /// Short parameter label such as `(65,4,4,1)-CEDF`.
    pub label: String,
    pub provenance: &'static str,
    pub non_cedf: Option<NonCedfCertificate>,
}

impl ConstructionResult {
    /// The lambda of the first check.
    pub fn lambda(&self) -> u32 {
        self.checks[0].lambda
    }

    /// The digraph of the first check.
    pub fn digraph(&self) -> &LabelledDigraph {
        &self.checks[0].digraph
    }

    /// Runs every declared check.
    pub fn verify(&self) -> Result<Vec<VerificationReport>> {
        self.checks
            .iter()
            .map(|c| {
                verify_h_edf(
                    &self.group,
                    &c.digraph,
                    &self.family.reindexed(&c.vertex_map),
                    &VerifyOptions {
                        expected_lambda: Some(c.lambda),
                        allow_nonuniform: true,
                        ..Default::default()
                    },
                )
            })
            .collect()
    }

    fn verified(self) -> Result<Self> {
        let ok = self.verify()?.iter().all(|r| r.is_verified());
        if ok {
            Ok(self)
        } else {
            Err(Error::ConstructionFailed(format!(
                "{} ({})",
                self.label, self.provenance
            )))
        }
    }
}

impl fmt::Display for ConstructionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} in {}: {}",
            self.label,
            self.group.spec(),
            self.family.format(&self.group)
        )
    }
}

fn identity_map(m: usize) -> Vec<usize> {
    (0..m).collect()
}

fn single(digraph: LabelledDigraph, lambda: u32) -> Vec<Check> {
    let m = digraph.vertex_count();
    vec![Check {
        digraph,
        vertex_map: identity_map(m),
        lambda,
    }]
}

fn variant_checks(variant: Variant, m: usize, lambdas: &[u32]) -> Result<Vec<Check>> {
    Ok(crate::diffcore::variant_digraphs(variant, m)?
        .into_iter()
        .zip(lambdas.iter().cycle())
        .map(|((digraph, vertex_map), &lambda)| Check {
            digraph,
            vertex_map,
            lambda,
        })
        .collect())
}

fn field_setup(q: u32, e: u32) -> Result<(FieldTable, u32)> {
    let ft = FieldTable::new(q)?;
    if e < 2 {
        return Err(Error::BadParameter(format!("e = {e} must be at least 2")));
    }
    if !(q - 1).is_multiple_of(e) {
        return Err(Error::NotADivisor { e, q_minus_one: q - 1 });
    }
    Ok((ft, (q - 1) / e))
}

fn classes_family(ft: &FieldTable, e: u32) -> Result<SetFamily> {
    SetFamily::new(cyclotomic_classes(ft, e)?)
}

/// All cyclotomic classes of order `e` in `GF(q)` as a
/// `(q, e, f, (e-1)f; K_e)`-EDF.
pub fn cyclotomic_edf(q: u32, e: u32) -> Result<ConstructionResult> {
    let (ft, f) = field_setup(q, e)?;
    let lambda = (e - 1) * f;
    ConstructionResult {
        group: ft.additive_group(),
        family: classes_family(&ft, e)?,
        checks: single(LabelledDigraph::complete(e as usize)?, lambda),
        label: format!("({q},{e},{f},{lambda})-EDF"),
        provenance: "cyclotomic classes on K_e",
        non_cedf: None,
    }
    .verified()
}

/// The classes in order as a `(q, e, f, f)`-CEDF. For `e = 2` the oriented
/// 2-cycle is the single undirected edge.
pub fn cyclotomic_cedf(q: u32, e: u32) -> Result<ConstructionResult> {
    let (ft, f) = field_setup(q, e)?;
    ConstructionResult {
        group: ft.additive_group(),
        family: classes_family(&ft, e)?,
        checks: single(LabelledDigraph::oriented_cycle(e as usize)?, f),
        label: format!("({q},{e},{f},{f})-CEDF"),
        provenance: "cyclotomic classes on C_e*",
        non_cedf: None,
    }
    .verified()
}

/// The classes on an arbitrary tournament, lambda `(e-1)f/2`. Requires
/// `-1` in `C_0^e`, i.e. `e` odd or `q = 1 mod 2e`.
pub fn tournament_edf(q: u32, e: u32, orientation: &LabelledDigraph) -> Result<ConstructionResult> {
    let (ft, f) = field_setup(q, e)?;
    if !minus_one_in_c0(q, e)? {
        return Err(Error::BadParameter(format!(
            "-1 is not in C_0^{e} of GF({q}): need e odd or q = 1 mod 2e"
        )));
    }
    if orientation.vertex_count() != e as usize
        || !orientation.is_oriented()
        || orientation.edge_count() != (e * (e - 1) / 2) as usize
    {
        return Err(Error::InvalidDigraph(format!("not a tournament on {e} vertices")));
    }
    let lambda = (e - 1) * f / 2;
    ConstructionResult {
        group: ft.additive_group(),
        family: classes_family(&ft, e)?,
        checks: single(orientation.clone(), lambda),
        label: format!("({q},{e},{f},{lambda};K_{e}^*)-EDF"),
        provenance: "cyclotomic classes on a tournament",
        non_cedf: None,
    }
    .verified()
}

/// Three `l`-sets in `Z_{(3l^2+1)/2} x Z_2` forming a `(3l^2+1, 3, l, 1)`-CEDF,
/// for `l = 3 mod 4`.
pub fn noncyclic_cedf(l: u32) -> Result<ConstructionResult> {
    if l % 4 != 3 {
        return Err(Error::BadParameter(format!("l = {l} is not 3 mod 4")));
    }
    let (l, half) = (l as i64, (3 * l as i64 * l as i64 + 1) / 2);
    let z = 3 * (l - 1) * (l - 1) / 4;
    let g = Group::product(&[half as u32, 2])?;
    let el = |a: i64, b: i64| {
        g.encode(&crate::groups::Decoded::Tuple(vec![
            a.rem_euclid(half) as u32,
            b.rem_euclid(2) as u32,
        ]))
    };
    let a0 = (0..l).map(|i| el(i, 0)).collect::<Result<Vec<_>>>()?;
    let a1 = (0..l)
        .map(|i| el(z * (i - 1) - l - i, i + 1))
        .collect::<Result<Vec<_>>>()?;
    let a2 = (0..l).map(|i| el(z * i - l, i)).collect::<Result<Vec<_>>>()?;
    ConstructionResult {
        family: SetFamily::new(vec![a0, a1, a2])?,
        group: g,
        checks: single(LabelledDigraph::oriented_cycle(3)?, 1),
        label: format!("({},3,{l},1)-CEDF", 2 * half),
        provenance: "non-cyclic abelian CEDF",
        non_cedf: None,
    }
    .verified()
}

/// Four `l`-sets in `Z_{4l^2+1}` forming a `(4l^2+1, 4, l, 1)`-CEDF, one
/// family for each divisor `d` of `l`.
pub fn m4_cedf(l: u32, d: u32) -> Result<ConstructionResult> {
    if l == 0 || d == 0 || !l.is_multiple_of(d) {
        return Err(Error::BadParameter(format!("d = {d} does not divide l = {l}")));
    }
    let n = 4 * l * l + 1;
    let g = Group::cyclic(n)?;
    let step = l * l / d;
    let a0: Vec<u32> = (0..l).collect();
    let a1: Vec<u32> = (0..d)
        .flat_map(|k| (0..l / d).map(move |i| step * (2 * k + 1) + (i + 1) * l))
        .collect();
    let a2: Vec<u32> = a0.iter().map(|x| x + step).collect();
    let a3: Vec<u32> = a1.iter().map(|x| (x + 2 * l * l) % n).collect();
    ConstructionResult {
        family: SetFamily::from_indices(&g, &[&a0, &a1, &a2, &a3])?,
        group: g,
        checks: single(LabelledDigraph::oriented_cycle(4)?, 1),
        label: format!("({n},4,{l},1)-CEDF"),
        provenance: "cyclic m = 4 CEDF",
        non_cedf: None,
    }
    .verified()
}

/// `{0, ..., k1-1}` and `{k1, 2k1, ..., k1 k2}` in `Z_{k1 k2 + 1}`, a
/// `(k1 k2 + 1, 2; k1, k2; 1, 1)`-GSEDF.
pub fn gsedf_two_set(k1: u32, k2: u32) -> Result<ConstructionResult> {
    if k1 == 0 || k2 == 0 {
        return Err(Error::BadParameter("set sizes must be positive".into()));
    }
    let n = k1 * k2 + 1;
    let g = Group::cyclic(n)?;
    let a: Vec<u32> = (0..k1).collect();
    let b: Vec<u32> = (1..=k2).map(|j| j * k1).collect();
    ConstructionResult {
        family: SetFamily::from_indices(&g, &[&a, &b])?,
        group: g,
        checks: variant_checks(Variant::Gsedf, 2, &[1])?,
        label: format!("({n},2;{k1},{k2};1,1)-GSEDF"),
        provenance: "two-set GSEDF",
        non_cedf: None,
    }
    .verified()
}

/// Nonzero squares and non-squares of `GF(q)`, `q = 1 mod 4`, as a
/// `(q, 2, (q-1)/2, (q-1)/4)`-SEDF.
pub fn sedf_squares(q: u32) -> Result<ConstructionResult> {
    if q % 4 != 1 {
        return Err(Error::BadParameter(format!("q = {q} is not 1 mod 4")));
    }
    let (ft, f) = field_setup(q, 2)?;
    let lambda = (q - 1) / 4;
    ConstructionResult {
        group: ft.additive_group(),
        family: classes_family(&ft, 2)?,
        checks: variant_checks(Variant::Sedf, 2, &[lambda])?,
        label: format!("({q},2,{f},{lambda})-SEDF"),
        provenance: "squares and non-squares",
        non_cedf: None,
    }
    .verified()
}

fn kab_sets(a: u32, b: u32, l: u32, shuffle_seed: Option<u64>) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let mut left: Vec<u32> = (0..l * a).collect();
    let mut right: Vec<u32> = (1..=l * b).map(|j| j * l * a).collect();
    if let Some(seed) = shuffle_seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        left.shuffle(&mut rng);
        right.shuffle(&mut rng);
    }
    let chunk = |v: Vec<u32>| v.chunks(l as usize).map(<[u32]>::to_vec).collect::<Vec<_>>();
    (chunk(left), chunk(right))
}

fn kab_family(g: &Group, left: &[Vec<u32>], right: &[Vec<u32>]) -> Result<SetFamily> {
    let all: Vec<&[u32]> = left.iter().chain(right).map(Vec::as_slice).collect();
    SetFamily::from_indices(g, &all)
}

/// An `(l^2 ab + 1, a+b, l, 1; K_{a,b}^*)`-EDF in `Z_{l^2 ab + 1}`. Without a
/// seed the parts are split into consecutive blocks; a seed shuffles each
/// part before splitting.
pub fn kab_star_edf(a: u32, b: u32, l: u32, shuffle_seed: Option<u64>) -> Result<ConstructionResult> {
    if a == 0 || b == 0 || l == 0 {
        return Err(Error::BadParameter("a, b, l must be positive".into()));
    }
    let n = l * l * a * b + 1;
    let g = Group::cyclic(n)?;
    let (left, right) = kab_sets(a, b, l, shuffle_seed);
    let m = a + b;
    ConstructionResult {
        family: kab_family(&g, &left, &right)?,
        group: g,
        checks: single(LabelledDigraph::oriented_kab(a as usize, b as usize)?, 1),
        label: format!("({n},{m},{l},1;K_{{{a},{b}}}^*)-EDF"),
        provenance: "oriented complete bipartite",
        non_cedf: None,
    }
    .verified()
}

/// The same sets in `Z_{2 l^2 ab + 1}` as an `(2 l^2 ab + 1, a+b, l, 1; K_{a,b})`-EDF.
pub fn kab_undirected_edf(a: u32, b: u32, l: u32) -> Result<ConstructionResult> {
    if a == 0 || b == 0 || l == 0 {
        return Err(Error::BadParameter("a, b, l must be positive".into()));
    }
    let n = 2 * l * l * a * b + 1;
    let g = Group::cyclic(n)?;
    let (left, right) = kab_sets(a, b, l, None);
    let m = a + b;
    ConstructionResult {
        family: kab_family(&g, &left, &right)?,
        group: g,
        checks: single(LabelledDigraph::kab(a as usize, b as usize)?, 1),
        label: format!("({n},{m},{l},1;K_{{{a},{b}}})-EDF"),
        provenance: "undirected complete bipartite",
        non_cedf: None,
    }
    .verified()
}

/// Two elements of a multiset with different multiplicities, if any.
fn non_uniform_pair(g: &Group, counts: &[u32]) -> Option<(GroupElement, u32, GroupElement, u32)> {
    let first = counts.get(1).copied()?;
    let j = (2..counts.len()).find(|&j| counts[j] != first)?;
    Some((g.element(1).ok()?, first, g.element(j as u32).ok()?, counts[j]))
}

/// The even cyclotomic classes `C_0, C_2, ..., C_{2(a-1)}` of order `2a` in
/// `GF(2ab+1)`: a `(q, a, b, b; C_a)`-EDF that is not a CEDF.
pub fn cycle_non_cedf(a: u32, b: u32) -> Result<ConstructionResult> {
    if a < 3 || b < 3 || a.is_multiple_of(2) || b.is_multiple_of(2) {
        return Err(Error::BadParameter(format!(
            "a = {a}, b = {b} must both be odd and > 1"
        )));
    }
    let q = 2 * a * b + 1;
    if prime_power(q as u64).is_none() {
        return Err(Error::NotPrimePower(q as u64));
    }
    let (ft, _) = field_setup(q, 2 * a)?;
    let sets = (0..a)
        .map(|i| cyclotomic_class(&ft, 2 * a, 2 * i))
        .collect::<Result<Vec<_>>>()?;
    let g = ft.additive_group();
    let family = SetFamily::new(sets)?;
    let cycle = LabelledDigraph::oriented_cycle(a as usize)?;
    let fwd = edf_multiset(&g, &cycle, &family)?;
    let rev = edf_multiset(&g, &cycle.reverse(), &family)?;
    let certificate = match (non_uniform_pair(&g, fwd.counts()), non_uniform_pair(&g, rev.counts())) {
        (Some(forward), Some(reverse)) => NonCedfCertificate { forward, reverse },
        _ => return Err(Error::ConstructionFailed(format!("cycle_non_cedf({a},{b}) is a CEDF"))),
    };
    ConstructionResult {
        group: g,
        family,
        checks: single(LabelledDigraph::cycle(a as usize)?, b),
        label: format!("({q},{a},{b},{b};C_{a})-EDF"),
        provenance: "even cyclotomic classes on C_a, not a CEDF",
        non_cedf: Some(certificate),
    }
    .verified()
}

/// Verifies a uniform family under a classical variant, expecting `lambda`.
pub fn verify_as(g: &Group, fam: &SetFamily, variant: Variant, lambda: u32) -> Result<bool> {
    Ok(verify_variant(g, fam, variant, Some(lambda))?
        .iter()
        .all(|r| r.is_verified()))
}
