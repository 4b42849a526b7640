//! The classical EDF variants expressed as digraph checks.

use std::fmt;
use std::str::FromStr;

use super::{verify_h_edf, DisjointMode, SetFamily, VerificationReport, VerifyOptions};
use crate::digraphs::LabelledDigraph;
use crate::error::{Error, Result};
use crate::groups::{gcd, Group};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Edf,
    Sedf,
    Gedf,
    Gsedf,
    /// `c`-CEDF.
    Cedf(usize),
    /// `c`-SCEDF.
    Scedf(usize),
}

impl Variant {
    fn allows_nonuniform(self) -> bool {
        matches!(self, Variant::Gedf | Variant::Gsedf)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Edf => write!(f, "edf"),
            Variant::Sedf => write!(f, "sedf"),
            Variant::Gedf => write!(f, "gedf"),
            Variant::Gsedf => write!(f, "gsedf"),
            Variant::Cedf(c) => write!(f, "cedf:{c}"),
            Variant::Scedf(c) => write!(f, "scedf:{c}"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, c) = match s.split_once(':') {
            Some((n, c)) => (
                n,
                Some(
                    c.parse::<usize>()
                        .map_err(|_| Error::BadParameter(format!("bad shift in variant `{s}`")))?,
                ),
            ),
            None => (s, None),
        };
        match (name, c) {
            ("edf", None) => Ok(Variant::Edf),
            ("sedf", None) => Ok(Variant::Sedf),
            ("gedf", None) => Ok(Variant::Gedf),
            ("gsedf", None) => Ok(Variant::Gsedf),
            ("cedf", c) => Ok(Variant::Cedf(c.unwrap_or(1))),
            ("scedf", c) => Ok(Variant::Scedf(c.unwrap_or(1))),
            _ => Err(Error::BadParameter(format!("unknown variant `{s}`"))),
        }
    }
}

/// The cycles of `i -> i + c (mod m)`: `gcd(c, m)` cycles of length `m / gcd`,
/// the `j`-th being `(j, j+c, j+2c, ...)`.
pub fn decompose_c_cedf(m: usize, c: usize) -> Vec<Vec<usize>> {
    let d = gcd(c as u64, m as u64) as usize;
    (0..d).map(|j| (0..m / d).map(|t| (j + t * c) % m).collect()).collect()
}

/// Digraphs whose simultaneous verification is equivalent to the variant.
/// Each entry pairs a digraph with the set index placed at each vertex.
pub fn variant_digraphs(variant: Variant, m: usize) -> Result<Vec<(LabelledDigraph, Vec<usize>)>> {
    if m < 2 {
        return Err(Error::BadParameter(format!("variants need m >= 2, got {m}")));
    }
    let check_c = |c: usize| {
        if c == 0 || c >= m {
            Err(Error::BadParameter(format!("shift c = {c} outside 1..{m}")))
        } else {
            Ok(())
        }
    };
    match variant {
        Variant::Edf | Variant::Gedf => Ok(vec![(LabelledDigraph::complete(m)?, (0..m).collect())]),
        Variant::Sedf | Variant::Gsedf => (0..m)
            .map(|centre| {
                let mut map: Vec<usize> = (0..m).filter(|&i| i != centre).collect();
                map.push(centre);
                Ok((LabelledDigraph::oriented_star(m)?, map))
            })
            .collect(),
        Variant::Cedf(c) => {
            check_c(c)?;
            let cycles = decompose_c_cedf(m, c);
            let len = m / cycles.len();
            let piece = LabelledDigraph::oriented_cycle(len)?;
            let h = if cycles.len() == 1 {
                piece
            } else {
                LabelledDigraph::disjoint_union(&vec![piece; cycles.len()])?
            };
            Ok(vec![(h, cycles.concat())])
        }
        Variant::Scedf(c) => {
            check_c(c)?;
            let edge = LabelledDigraph::new(2, [(0, 1)])?;
            Ok((0..m).map(|i| (edge.clone(), vec![i, (i + c) % m])).collect())
        }
    }
}

/// Runs every digraph check of a variant. With `expected_lambda` unset each
/// check infers its own lambda, which is what a GSEDF needs.
pub fn verify_variant(
    g: &Group,
    fam: &SetFamily,
    variant: Variant,
    expected_lambda: Option<u32>,
) -> Result<Vec<VerificationReport>> {
    let opts = VerifyOptions {
        expected_lambda,
        mode: DisjointMode::Disjoint,
        allow_nonuniform: variant.allows_nonuniform(),
    };
    let all_disjoint = fam.overlapping_pairs(g.order());
    variant_digraphs(variant, fam.len())?
        .into_iter()
        .map(|(h, map)| {
            let mut rep = verify_h_edf(g, &h, &fam.reindexed(&map), &opts)?;
            // a sub-check sees only some of the sets; disjointness is a property of the whole family
            rep.disjointness_violations = all_disjoint.clone();
            if !all_disjoint.is_empty() {
                rep.verdict = super::Verdict::Failed;
            }
            Ok(rep)
        })
        .collect()
}
