//! Equivalence of CEDFs under automorphism, translation and rotation.
//!
//! `B` is equivalent to `A` when `B_{(i+c) mod m} = sigma(A_i) + beta` for
//! all `i`, with one automorphism `sigma`, one translation `beta` and one
//! rotation `c` shared by every `i`.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::diffcore::{internal_difference, SetFamily};
use crate::error::{Error, Result};
use crate::groups::{automorphisms, Automorphism, Group, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub sigma: Automorphism,
    pub beta: GroupElement,
    pub c: usize,
    /// When set the target index is `c - i` instead of `c + i`.
    pub reversed: bool,
}

impl EquivalenceWitness {
    pub fn identity(g: &Group) -> Self {
        EquivalenceWitness {
            sigma: Automorphism::identity(g),
            beta: g.identity(),
            c: 0,
            reversed: false,
        }
    }

    fn target(&self, i: usize, m: usize) -> usize {
        if self.reversed {
            (self.c + m - i % m) % m
        } else {
            (i + self.c) % m
        }
    }

    /// The image family `B`.
    pub fn apply(&self, g: &Group, fam: &SetFamily) -> Result<SetFamily> {
        let m = fam.len();
        let mut sets = vec![Vec::new(); m];
        for (i, a) in fam.sets().iter().enumerate() {
            sets[self.target(i, m)] = a.iter().map(|&x| g.translate(self.sigma.apply(x), self.beta)).collect();
        }
        SetFamily::new(sets)
    }

    /// The witness mapping `B` back onto `A`.
    pub fn inverse(&self, g: &Group, m: usize) -> Self {
        let sigma = self.sigma.inverse();
        let beta = g.invert(sigma.apply(self.beta));
        let c = if self.reversed {
            self.c % m.max(1)
        } else {
            (m - self.c % m.max(1)) % m.max(1)
        };
        EquivalenceWitness {
            sigma,
            beta,
            c,
            reversed: self.reversed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceOptions {
    /// Skip rotations whose per-set fingerprints disagree.
    pub prefilter: bool,
    /// Also try the orientation-reversed ordering.
    pub try_reversal: bool,
    /// Split the automorphism loop across threads.
    pub parallel: bool,
}

impl Default for EquivalenceOptions {
    fn default() -> Self {
        EquivalenceOptions {
            prefilter: true,
            try_reversal: false,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceOutcome {
    pub witness: Option<EquivalenceWitness>,
    /// `(sigma, c, beta)` triples compared against the target.
    pub candidates: u64,
}

/// Descending multiplicities of the nonzero entries of `Delta(A)`.
fn set_profile(g: &Group, a: &[GroupElement]) -> Result<Vec<u32>> {
    let mut v: Vec<u32> = internal_difference(g, a)?
        .counts()
        .iter()
        .copied()
        .filter(|&c| c > 0)
        .collect();
    v.sort_unstable_by(|x, y| y.cmp(x));
    Ok(v)
}

/// The per-set internal multiplicity profiles, sorted. Equivalent families
/// have equal fingerprints.
pub fn inequivalence_fingerprint(g: &Group, fam: &SetFamily) -> Result<Vec<Vec<u32>>> {
    let mut out = fam
        .sets()
        .iter()
        .map(|a| set_profile(g, a))
        .collect::<Result<Vec<_>>>()?;
    out.sort();
    Ok(out)
}

/// Decides whether `b` is equivalent to `a`, searching every automorphism,
/// rotation and translation. `None` proves inequivalence.
pub fn cedf_equivalent(
    g: &Group,
    a: &SetFamily,
    b: &SetFamily,
    opts: &EquivalenceOptions,
) -> Result<EquivalenceOutcome> {
    let m = a.len();
    if m != b.len() {
        return Err(Error::SizeMismatch {
            family: b.len(),
            digraph: m,
        });
    }
    let auts = automorphisms(g)?;
    let n = g.order() as usize;

    let mut member = vec![vec![false; n]; m];
    for (j, s) in b.sets().iter().enumerate() {
        for x in s {
            member[j][x.index() as usize] = true;
        }
    }

    let profiles_a = a.sets().iter().map(|s| set_profile(g, s)).collect::<Result<Vec<_>>>()?;
    let profiles_b = b.sets().iter().map(|s| set_profile(g, s)).collect::<Result<Vec<_>>>()?;
    let mut rotations = Vec::new();
    for reversed in [false, true] {
        if reversed && !opts.try_reversal {
            continue;
        }
        for c in 0..m {
            let w = EquivalenceWitness {
                sigma: Automorphism::identity(g),
                beta: g.identity(),
                c,
                reversed,
            };
            let fits = (0..m).all(|i| {
                let j = w.target(i, m);
                a.set(i).len() == b.set(j).len() && (!opts.prefilter || profiles_a[i] == profiles_b[j])
            });
            if fits {
                rotations.push((c, reversed));
            }
        }
    }

    let counter = AtomicU64::new(0);
    let try_sigma = |sigma: &Automorphism| -> Option<EquivalenceWitness> {
        let images: Vec<Vec<GroupElement>> = a
            .sets()
            .iter()
            .map(|s| s.iter().map(|&x| sigma.apply(x)).collect())
            .collect();
        let mut local = 0u64;
        let mut found = None;
        'outer: for &(c, reversed) in &rotations {
            let probe = EquivalenceWitness {
                sigma: Automorphism::identity(g),
                beta: g.identity(),
                c,
                reversed,
            };
            for beta in g.elements() {
                local += 1;
                let hit = (0..m).all(|i| {
                    let row = &member[probe.target(i, m)];
                    images[i].iter().all(|&x| row[g.translate(x, beta).index() as usize])
                });
                if hit {
                    found = Some(EquivalenceWitness {
                        sigma: sigma.clone(),
                        beta,
                        c,
                        reversed,
                    });
                    break 'outer;
                }
            }
        }
        counter.fetch_add(local, Ordering::Relaxed);
        found
    };

    let witness = if opts.parallel {
        auts.par_iter().find_map_first(try_sigma)
    } else {
        auts.iter().find_map(try_sigma)
    };
    if let Some(w) = &witness {
        debug_assert!(w.apply(g, a).map(|f| f.same_sets_as(b)).unwrap_or(false));
    }
    Ok(EquivalenceOutcome {
        witness,
        candidates: counter.into_inner(),
    })
}
