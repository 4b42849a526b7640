//! Finite groups with canonically indexed elements.
//!
//! Four kinds are supported: cyclic groups `Z_n`, direct products
//! `Z_{n1} x ... x Z_{nk}`, the additive group of `GF(p^k)`, and dihedral
//! groups `D_{2n}`. Every element carries an index in `[0, order)` with the
//! identity at index 0, so multisets of elements are plain count arrays.
//!
//! Abelian groups are written additively and [`Group::difference`] returns
//! `a - b`. In the dihedral group the difference is `a * b^-1`.

mod arith;
mod automorphism;
mod field;

use std::fmt;

pub use arith::{divisors, euler_phi, gcd, is_prime, prime_divisors, prime_power};
pub use automorphism::{automorphisms, automorphisms_bounded, Automorphism, DEFAULT_AUT_ORDER_BOUND};
pub use field::{cyclotomic_class, cyclotomic_classes, minus_one_in_c0, FieldTable};

use crate::error::{Error, Result};

/// Which finite group, with its defining parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupSpec {
    /// `Z_n`.
    Cyclic(u32),
    /// `Z_{n1} x ... x Z_{nk}`; the last factor varies fastest in the index.
    Product(Vec<u32>),
    /// Additive group of `GF(q)`.
    FieldAdditive(u32),
    /// Dihedral group of order `2n`, stored as `n` (the order of the rotation `r`).
    Dihedral(u32),
}

impl GroupSpec {
    pub fn order(&self) -> u64 {
        match self {
            GroupSpec::Cyclic(n) => *n as u64,
            GroupSpec::Product(ns) => ns.iter().map(|&n| n as u64).product(),
            GroupSpec::FieldAdditive(q) => *q as u64,
            GroupSpec::Dihedral(n) => 2 * *n as u64,
        }
    }

    /// Parses `cyclic 13`, `product 14 2`, `field 9`, `dihedral 28`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = text.split_whitespace();
        let kind = words
            .next()
            .ok_or_else(|| Error::InvalidGroup("empty group spec".into()))?;
        let nums = words
            .map(|w| {
                w.parse::<u32>()
                    .map_err(|_| Error::InvalidGroup(format!("`{w}` is not a non-negative integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        let single = |nums: &[u32]| -> Result<u32> {
            match nums {
                [n] => Ok(*n),
                _ => Err(Error::InvalidGroup(format!("`{kind}` takes exactly one integer"))),
            }
        };
        match kind {
            "cyclic" => Ok(GroupSpec::Cyclic(single(&nums)?)),
            "product" => Ok(GroupSpec::Product(nums)),
            "field" => Ok(GroupSpec::FieldAdditive(single(&nums)?)),
            "dihedral" => {
                let order = single(&nums)?;
                if order % 2 != 0 {
                    return Err(Error::InvalidGroup(format!("dihedral order {order} is odd")));
                }
                Ok(GroupSpec::Dihedral(order / 2))
            }
            other => Err(Error::InvalidGroup(format!("unknown group kind `{other}`"))),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic {n}"),
            GroupSpec::Product(ns) => {
                write!(f, "product")?;
                for n in ns {
                    write!(f, " {n}")?;
                }
                Ok(())
            }
            GroupSpec::FieldAdditive(q) => write!(f, "field {q}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral {}", 2 * n),
        }
    }
}

/// An element, identified by its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(u32);

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub(crate) fn from_index(index: u32) -> Self {
        GroupElement(index)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// Kind-specific view of an element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decoded {
    Residue(u32),
    Tuple(Vec<u32>),
    /// Coefficients `c0, c1, ..., c_{k-1}` of `sum c_i x^i`.
    FieldVector(Vec<u32>),
    /// `s^reflection r^rotation`.
    Dihedral {
        reflection: bool,
        rotation: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Cyclic(u32),
    Product(Vec<u32>),
    Field { p: u32, k: u32 },
    Dihedral(u32),
}

/// A finite group handle. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    spec: GroupSpec,
    order: u32,
    repr: Repr,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let order = spec.order();
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        if order > u32::MAX as u64 / 2 {
            return Err(Error::InvalidGroup(format!("order {order} too large")));
        }
        let repr = match &spec {
            GroupSpec::Cyclic(n) => Repr::Cyclic(*n),
            GroupSpec::Product(ns) => {
                if ns.is_empty() {
                    return Err(Error::InvalidGroup("product needs at least one factor".into()));
                }
                if let Some(n) = ns.iter().find(|&&n| n < 2) {
                    return Err(Error::InvalidGroup(format!("product factor {n} < 2")));
                }
                Repr::Product(ns.clone())
            }
            GroupSpec::FieldAdditive(q) => {
                let (p, k) = prime_power(*q as u64).ok_or(Error::NotPrimePower(*q as u64))?;
                Repr::Field { p: p as u32, k }
            }
            GroupSpec::Dihedral(n) => Repr::Dihedral(*n),
        };
        Ok(Group {
            spec,
            order: order as u32,
            repr,
        })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::new(GroupSpec::Cyclic(n))
    }

    pub fn product(ns: &[u32]) -> Result<Self> {
        Self::new(GroupSpec::Product(ns.to_vec()))
    }

    pub fn field_additive(q: u32) -> Result<Self> {
        Self::new(GroupSpec::FieldAdditive(q))
    }

    /// Dihedral group of the given order `2n`.
    pub fn dihedral(order: u32) -> Result<Self> {
        if !order.is_multiple_of(2) || order == 0 {
            return Err(Error::InvalidGroup(format!(
                "dihedral order {order} must be even and positive"
            )));
        }
        Self::new(GroupSpec::Dihedral(order / 2))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_abelian(&self) -> bool {
        match self.repr {
            // D_2 and D_4 are abelian
            Repr::Dihedral(n) => n <= 2,
            _ => true,
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::IDENTITY
    }

    pub fn element(&self, index: u32) -> Result<GroupElement> {
        if index < self.order {
            Ok(GroupElement(index))
        } else {
            Err(Error::ElementOutOfRange {
                index: index as u64,
                order: self.order,
            })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> {
        (0..self.order).map(GroupElement)
    }

    pub fn decode(&self, e: GroupElement) -> Decoded {
        let x = e.0;
        match &self.repr {
            Repr::Cyclic(_) => Decoded::Residue(x),
            Repr::Product(ns) => Decoded::Tuple(mixed_radix_digits(x, ns)),
            Repr::Field { p, k } => Decoded::FieldVector(base_digits(x, *p, *k)),
            Repr::Dihedral(n) => Decoded::Dihedral {
                reflection: x >= *n,
                rotation: x % n,
            },
        }
    }

    pub fn encode(&self, d: &Decoded) -> Result<GroupElement> {
        let bad = || Error::BadElement {
            token: format!("{d:?}"),
            reason: format!("does not belong to {}", self.spec),
        };
        let idx = match (&self.repr, d) {
            (Repr::Cyclic(n), Decoded::Residue(r)) if r < n => *r,
            (Repr::Product(ns), Decoded::Tuple(t)) if t.len() == ns.len() && t.iter().zip(ns).all(|(a, n)| a < n) => {
                t.iter().zip(ns).fold(0, |acc, (a, n)| acc * n + a)
            }
            (Repr::Field { p, k }, Decoded::FieldVector(c)) if c.len() == *k as usize && c.iter().all(|a| a < p) => {
                c.iter().rev().fold(0, |acc, a| acc * p + a)
            }
            (Repr::Field { p, k: 1 }, Decoded::Residue(r)) if r < p => *r,
            (Repr::Dihedral(n), Decoded::Dihedral { reflection, rotation }) if rotation < n => {
                u32::from(*reflection) * n + rotation
            }
            _ => return Err(bad()),
        };
        Ok(GroupElement(idx))
    }

    /// Group operation (`a + b` additively, `a * b` in the dihedral group).
    pub fn compose(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        let (x, y) = (a.0, b.0);
        GroupElement(match &self.repr {
            Repr::Cyclic(n) => (x + y) % n,
            Repr::Product(ns) => digitwise(x, y, ns.iter().copied().rev(), |u, v, n| (u + v) % n),
            Repr::Field { p, k } => digitwise(x, y, std::iter::repeat_n(*p, *k as usize), |u, v, n| (u + v) % n),
            Repr::Dihedral(n) => {
                // s^a r^i * s^b r^j = s^(a+b) r^((-1)^b i + j)
                let (fa, i) = (x / n, x % n);
                let (fb, j) = (y / n, y % n);
                let rot = if fb == 0 { (i + j) % n } else { (n - i + j) % n };
                ((fa + fb) % 2) * n + rot
            }
        })
    }

    pub fn invert(&self, a: GroupElement) -> GroupElement {
        let x = a.0;
        GroupElement(match &self.repr {
            Repr::Cyclic(n) => (n - x) % n,
            Repr::Product(ns) => digitwise(0, x, ns.iter().copied().rev(), |_, v, n| (n - v) % n),
            Repr::Field { p, k } => digitwise(0, x, std::iter::repeat_n(*p, *k as usize), |_, v, n| (n - v) % n),
            Repr::Dihedral(n) => {
                if x >= *n {
                    x
                } else {
                    (n - x) % n
                }
            }
        })
    }

    /// `a - b` for abelian groups, `a * b^-1` otherwise.
    pub fn difference(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        match &self.repr {
            Repr::Cyclic(n) => GroupElement((a.0 + n - b.0) % n),
            _ => self.compose(a, self.invert(b)),
        }
    }

    /// Checked version of [`Group::difference`] for raw indices.
    pub fn difference_checked(&self, a: u32, b: u32) -> Result<GroupElement> {
        Ok(self.difference(self.element(a)?, self.element(b)?))
    }

    /// Right translate `a * g` (`a + g` additively). Right translation
    /// preserves every difference `a * b^-1`.
    pub fn translate(&self, a: GroupElement, g: GroupElement) -> GroupElement {
        self.compose(a, g)
    }

    pub fn element_order(&self, a: GroupElement) -> u32 {
        let mut x = a;
        let mut k = 1;
        while !x.is_identity() {
            x = self.compose(x, a);
            k += 1;
        }
        k
    }

    /// Full `order x order` table of differences, row `a`, column `b`.
    pub fn difference_table(&self) -> Vec<u32> {
        let n = self.order as usize;
        let mut t = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                t[a * n + b] = self.difference(GroupElement(a as u32), GroupElement(b as u32)).0;
            }
        }
        t
    }

    pub fn format_element(&self, e: GroupElement) -> String {
        match self.decode(e) {
            Decoded::Residue(r) => r.to_string(),
            Decoded::Tuple(t) => join(&t, ","),
            Decoded::FieldVector(c) => {
                if c.len() == 1 {
                    c[0].to_string()
                } else {
                    join(&c, ":")
                }
            }
            Decoded::Dihedral { reflection, rotation } => {
                format!("{}r{}", if reflection { "s" } else { "" }, rotation)
            }
        }
    }

    /// Parses the text forms `17`, `8,1`, `c0:c1:...`, `r3`, `sr3`.
    pub fn parse_element(&self, token: &str) -> Result<GroupElement> {
        let bad = |reason: &str| Error::BadElement {
            token: token.to_string(),
            reason: reason.to_string(),
        };
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad("not a non-negative integer"));
        let decoded = match &self.repr {
            Repr::Cyclic(_) => Decoded::Residue(num(token)?),
            Repr::Product(_) => Decoded::Tuple(token.split(',').map(num).collect::<Result<_>>()?),
            Repr::Field { k: 1, .. } => Decoded::Residue(num(token)?),
            Repr::Field { .. } => Decoded::FieldVector(token.split(':').map(num).collect::<Result<_>>()?),
            Repr::Dihedral(_) => {
                let (reflection, rest) = match token {
                    "id" | "e" => (false, "r0"),
                    "s" => (true, "r0"),
                    t if t.starts_with('s') => (true, &t[1..]),
                    t => (false, t),
                };
                let rot = rest.strip_prefix('r').ok_or_else(|| bad("expected r<k> or sr<k>"))?;
                let rotation = if rot.is_empty() { 1 } else { num(rot)? };
                Decoded::Dihedral { reflection, rotation }
            }
        };
        self.encode(&decoded).map_err(|_| bad("out of range"))
    }
}

fn join(xs: &[u32], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

/// Mixed-radix digits, most significant first.
fn mixed_radix_digits(mut x: u32, ns: &[u32]) -> Vec<u32> {
    let mut out = vec![0; ns.len()];
    for (slot, &n) in out.iter_mut().zip(ns).rev() {
        *slot = x % n;
        x /= n;
    }
    out
}

/// Base-`p` digits, least significant first.
fn base_digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

/// Applies `op` digit by digit; `radices` runs from least to most significant.
fn digitwise(mut x: u32, mut y: u32, radices: impl Iterator<Item = u32>, op: impl Fn(u32, u32, u32) -> u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for n in radices {
        out += op(x % n, y % n, n) * scale;
        scale *= n;
        x /= n;
        y /= n;
    }
    out
}
