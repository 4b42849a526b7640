//! Automorphism enumeration for small abelian groups.

use super::{arith, Group, GroupElement, Repr};
use crate::error::{Error, Result};

/// Largest group order accepted by [`automorphisms`].
pub const DEFAULT_AUT_ORDER_BOUND: u32 = 5000;

/// Cap on the number of automorphisms materialised in one call.
const MAX_AUTOMORPHISMS: usize = 2_000_000;

/// A group automorphism stored as an index map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Automorphism {
    map: Vec<u32>,
    /// For cyclic groups, the unit `u` with `x -> u * x`.
    multiplier: Option<u32>,
}

impl Automorphism {
    pub fn identity(g: &Group) -> Self {
        Automorphism {
            map: (0..g.order()).collect(),
            multiplier: matches!(g.repr, Repr::Cyclic(_)).then_some(1),
        }
    }

    pub fn apply(&self, e: GroupElement) -> GroupElement {
        GroupElement(self.map[e.0 as usize])
    }

    pub fn multiplier(&self) -> Option<u32> {
        self.multiplier
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.map
    }

    pub fn inverse(&self) -> Automorphism {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        let n = self.map.len() as u64;
        let multiplier = self.multiplier.map(|u| {
            (1..n.max(2))
                .find(|v| (u as u64 * v) % n.max(1) == 1 % n.max(1))
                .unwrap_or(1) as u32
        });
        Automorphism { map: inv, multiplier }
    }

    /// `self` after `other`.
    pub fn after(&self, other: &Automorphism) -> Automorphism {
        let n = self.map.len() as u64;
        Automorphism {
            map: other.map.iter().map(|&x| self.map[x as usize]).collect(),
            multiplier: match (self.multiplier, other.multiplier) {
                (Some(a), Some(b)) => Some(((a as u64 * b as u64) % n.max(1)) as u32),
                _ => None,
            },
        }
    }
}

/// All automorphisms of an abelian group of order at most
/// [`DEFAULT_AUT_ORDER_BOUND`].
pub fn automorphisms(g: &Group) -> Result<Vec<Automorphism>> {
    automorphisms_bounded(g, DEFAULT_AUT_ORDER_BOUND)
}

pub fn automorphisms_bounded(g: &Group, order_bound: u32) -> Result<Vec<Automorphism>> {
    if !g.is_abelian() || matches!(g.repr, Repr::Dihedral(_)) {
        return Err(Error::Unsupported(format!(
            "automorphisms of {} (only cyclic, product and field groups)",
            g.spec()
        )));
    }
    if g.order() > order_bound {
        return Err(Error::Unsupported(format!(
            "automorphisms of a group of order {} (bound {order_bound})",
            g.order()
        )));
    }
    if let Repr::Cyclic(n) = g.repr {
        let n64 = n as u64;
        return Ok((0..n.max(1))
            .filter(|&u| arith::gcd(u as u64, n64) == 1 || n == 1)
            .map(|u| Automorphism {
                map: (0..n).map(|x| ((u as u64 * x as u64) % n64) as u32).collect(),
                multiplier: Some(u),
            })
            .collect());
    }
    let gens = generators(g);
    let candidates: Vec<Vec<GroupElement>> = gens
        .iter()
        .map(|&gen| {
            let ord = g.element_order(gen);
            g.elements().filter(|&e| g.element_order(e) == ord).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut images = Vec::with_capacity(gens.len());
    extend(g, &gens, &candidates, &mut images, &mut out)?;
    Ok(out)
}

/// Standard generators: unit vectors for products and fields.
fn generators(g: &Group) -> Vec<GroupElement> {
    match &g.repr {
        Repr::Product(ns) => {
            let mut scale = 1;
            let mut out: Vec<GroupElement> = ns
                .iter()
                .rev()
                .map(|&n| {
                    let e = GroupElement(scale);
                    scale *= n;
                    e
                })
                .collect();
            out.reverse();
            out
        }
        Repr::Field { p, k } => (0..*k).map(|i| GroupElement(p.pow(i))).collect(),
        _ => vec![GroupElement(1 % g.order())],
    }
}

fn extend(
    g: &Group,
    gens: &[GroupElement],
    candidates: &[Vec<GroupElement>],
    images: &mut Vec<GroupElement>,
    out: &mut Vec<Automorphism>,
) -> Result<()> {
    let depth = images.len();
    let Some(map) = span_map(g, &gens[..depth], images) else {
        return Ok(());
    };
    if depth == gens.len() {
        let map: Vec<u32> = map.into_iter().map(|x| x.expect("generators span the group")).collect();
        if out.len() >= MAX_AUTOMORPHISMS {
            return Err(Error::Unsupported(format!(
                "more than {MAX_AUTOMORPHISMS} automorphisms of {}",
                g.spec()
            )));
        }
        out.push(Automorphism { map, multiplier: None });
        return Ok(());
    }
    for &c in &candidates[depth] {
        images.push(c);
        extend(g, gens, candidates, images, out)?;
        images.pop();
    }
    Ok(())
}

/// Extends `gens[i] -> images[i]` along the Cayley graph of the subgroup they
/// generate. Returns `None` unless the result is a well-defined injective
/// homomorphism on that subgroup.
fn span_map(g: &Group, gens: &[GroupElement], images: &[GroupElement]) -> Option<Vec<Option<u32>>> {
    let n = g.order() as usize;
    let mut map: Vec<Option<u32>> = vec![None; n];
    let mut hit = vec![false; n];
    map[0] = Some(0);
    hit[0] = true;
    let mut queue = vec![GroupElement::IDENTITY];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        let fx = GroupElement(map[x.0 as usize].unwrap());
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.compose(x, s);
            let fy = g.compose(fx, t);
            match map[y.0 as usize] {
                Some(prev) if prev != fy.0 => return None,
                Some(_) => {}
                None => {
                    if hit[fy.0 as usize] {
                        return None;
                    }
                    hit[fy.0 as usize] = true;
                    map[y.0 as usize] = Some(fy.0);
                    queue.push(y);
                }
            }
        }
    }
    Some(map)
}
