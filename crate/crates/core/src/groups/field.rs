//! Table-driven arithmetic in `GF(p^k)` and cyclotomic classes.
//!
//! Elements are indexed by `sum c_i p^i` over their coefficient vector, the
//! same indexing as [`Group::field_additive`](super::Group::field_additive),
//! so a field element and the corresponding additive group element share an
//! index.
//!
//! The tables are deterministic. For prime `q` the primitive element is the
//! smallest primitive root. For `k > 1` the modulus is the lexicographically
//! smallest monic irreducible of degree `k`, comparing coefficients from
//! `c_{k-1}` down to `c_0`, and the primitive element is the first element in
//! index order whose multiplicative order is `q - 1`.

use super::arith::{prime_divisors, prime_power};
use super::{Group, GroupElement};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, low degree first, length `k + 1`. Empty for prime fields.
    modulus: Vec<u32>,
    alpha: u32,
    exp: Vec<u32>,
    /// `log[0]` is unused.
    log: Vec<u32>,
}

impl FieldTable {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
        let (p, k) = (p as u32, k);
        let modulus = if k == 1 { Vec::new() } else { smallest_irreducible(p, k) };
        let mul = |a: u32, b: u32| mul_raw(a, b, p, k, &modulus);

        let order_factors = prime_divisors((q - 1) as u64);
        let is_primitive = |c: u32| order_factors.iter().all(|&r| pow_raw(c, (q as u64 - 1) / r, &mul) != 1);
        let alpha = (1..q)
            .find(|&c| is_primitive(c))
            .expect("multiplicative group is cyclic");

        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = mul(x, alpha);
        }
        debug_assert_eq!(x, 1);
        Ok(FieldTable {
            p,
            k,
            q,
            modulus,
            alpha,
            exp,
            log,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    /// Coefficients `c_0..c_k` of the modulus; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    /// `alpha^i`, exponent taken mod `q - 1`.
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    /// Discrete log base alpha. `None` for zero.
    pub fn log(&self, x: u32) -> Option<u32> {
        (x != 0 && x < self.q).then(|| self.log[x as usize])
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut scale) = (a, b, 0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut scale) = (a, 0, 1);
        for _ in 0..self.k {
            out += ((self.p - a % self.p) % self.p) * scale;
            scale *= self.p;
            a /= self.p;
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp(self.log[a as usize] as u64 + self.log[b as usize] as u64)
    }

    /// Index of `-1`.
    pub fn minus_one(&self) -> u32 {
        self.neg(1)
    }

    /// The additive group of this field.
    pub fn additive_group(&self) -> Group {
        Group::field_additive(self.q).expect("q is a prime power")
    }
}

/// Cyclotomic class `C_i^e = { alpha^(e*s + i) : 0 <= s < f }`, sorted by index.
pub fn cyclotomic_class(ft: &FieldTable, e: u32, i: u32) -> Result<Vec<GroupElement>> {
    let f = check_order(ft, e)?;
    if i >= e {
        return Err(Error::ClassIndexOutOfRange { i, e });
    }
    let mut out: Vec<GroupElement> = (0..f)
        .map(|s| GroupElement(ft.exp(e as u64 * s as u64 + i as u64)))
        .collect();
    out.sort();
    Ok(out)
}

/// All `e` classes `C_0^e, ..., C_{e-1}^e`.
pub fn cyclotomic_classes(ft: &FieldTable, e: u32) -> Result<Vec<Vec<GroupElement>>> {
    check_order(ft, e)?;
    (0..e).map(|i| cyclotomic_class(ft, e, i)).collect()
}

/// Whether `-1` lies in `C_0^e` of `GF(q)`.
pub fn minus_one_in_c0(q: u32, e: u32) -> Result<bool> {
    let ft = FieldTable::new(q)?;
    check_order(&ft, e)?;
    let l = ft.log(ft.minus_one()).expect("-1 is nonzero");
    Ok(l % e == 0)
}

fn check_order(ft: &FieldTable, e: u32) -> Result<u32> {
    let qm1 = ft.q - 1;
    if e == 0 || !qm1.is_multiple_of(e) {
        return Err(Error::NotADivisor { e, q_minus_one: qm1 });
    }
    Ok(qm1 / e)
}

fn pow_raw(mut base: u32, mut e: u64, mul: &impl Fn(u32, u32) -> u32) -> u32 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn digits(mut x: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Product of two field elements by schoolbook multiplication mod the modulus.
fn mul_raw(a: u32, b: u32, p: u32, k: u32, modulus: &[u32]) -> u32 {
    if k == 1 {
        return ((a as u64 * b as u64) % p as u64) as u32;
    }
    let (da, db) = (digits(a, p, k), digits(b, p, k));
    let mut prod = vec![0u64; 2 * k as usize - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut prod: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    poly_rem_in_place(&mut prod, modulus, p);
    prod.resize(k as usize, 0);
    undigits(&prod, p)
}

/// Reduces `a` modulo monic `m` (both low degree first).
fn poly_rem_in_place(a: &mut Vec<u32>, m: &[u32], p: u32) {
    let dm = m.len() - 1;
    while a.len() > dm {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let t = (lead as u64 * c as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop();
    }
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        for t in 0..p.pow(d as u32) {
            let mut g = digits(t, p, d as u32);
            g.push(1);
            let mut r = f.to_vec();
            poly_rem_in_place(&mut r, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    // counting t upward enumerates (c_{k-1}, ..., c_0) lexicographically
    (0..p.pow(k))
        .map(|t| {
            let mut f = digits(t, p, k);
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}
