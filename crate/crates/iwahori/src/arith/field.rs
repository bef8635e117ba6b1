//! The coefficient field 𝔽_{p^m} in the polynomial basis, with the Frobenius
//! endomorphism a ↦ a^p.
//!
//! One fixed finite field per run stands in for an algebraically closed field
//! of characteristic p: every algorithm downstream uses only field operations
//! and Frobenius, both of which stay inside 𝔽_{p^m}.

use crate::error::{Error, Result};
use rand::Rng;

/// Parameters of 𝔽_{p^m}.
///
/// The modulus is the least monic irreducible of degree m over 𝔽_p, where
/// polynomials are ordered by their coefficient vectors read from the top
/// degree down (equivalently, by the base-p integer whose least significant
/// digit is the constant term). Deterministic, so runs are reproducible
/// without external tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    p: u64,
    m: usize,
    /// Coefficients of the modulus below the leading term: index k holds the
    /// coefficient of t^k, for k = 0..m. The coefficient of t^m is 1.
    modulus: Vec<u64>,
}

/// An element of 𝔽_{p^m}: coefficients of 1, t, …, t^{m−1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense 𝔽_p[t] helpers on little-endian coefficient vectors (index = degree).
fn poly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_mul(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of a modulo the monic polynomial b.
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1, "divisor must be monic");
    while r.len() > db {
        // Leading coefficient is nonzero after trim; adding (p−1)·lead·b
        // shifted under it zeroes the top term, so the length strictly drops.
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for k in 0..=db {
            let idx = shift + k;
            r[idx] = (r[idx] + (p - 1) * lead % p * b[k]) % p;
        }
        poly_trim(&mut r);
    }
    r
}

/// Extended gcd in 𝔽_p[t]: returns (g, s) with s·a ≡ g (mod b), g monic.
fn poly_half_ext_gcd(p: u64, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r0: Vec<u64> = b.to_vec();
    let mut r1: Vec<u64> = a.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // Divide r0 by r1.
        let mut q: Vec<u64> = Vec::new();
        let mut rem = r0.clone();
        let d1 = r1.len() - 1;
        let inv_lead = mod_inv_prime(p, *r1.last().unwrap());
        while rem.len() > d1 {
            let shift = rem.len() - 1 - d1;
            let c = *rem.last().unwrap() % p * inv_lead % p;
            if q.len() < shift + 1 {
                q.resize(shift + 1, 0);
            }
            q[shift] = (q[shift] + c) % p;
            for k in 0..=d1 {
                let idx = shift + k;
                rem[idx] = (rem[idx] + (p - c) % p * r1[k]) % p;
            }
            poly_trim(&mut rem);
        }
        let qs1 = poly_mul(p, &q, &s1);
        let mut s2 = s0.clone();
        if s2.len() < qs1.len() {
            s2.resize(qs1.len(), 0);
        }
        for (i, &c) in qs1.iter().enumerate() {
            s2[i] = (s2[i] + p - c) % p;
        }
        poly_trim(&mut s2);
        s0 = s1;
        s1 = s2;
        r0 = r1;
        r1 = rem;
    }
    // Normalize g = r0 monic, scaling s0 accordingly.
    let lead = *r0.last().unwrap_or(&1);
    if lead != 1 && lead != 0 {
        let inv = mod_inv_prime(p, lead);
        for c in r0.iter_mut() {
            *c = *c * inv % p;
        }
        for c in s0.iter_mut() {
            *c = *c * inv % p;
        }
    }
    (r0, s0)
}

fn mod_inv_prime(p: u64, a: u64) -> u64 {
    // Fermat; p is prime and a ≢ 0.
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    // Trial division by every monic polynomial of degree 1..=deg/2.
    let d = f.len() - 1;
    for dd in 1..=d / 2 {
        // Enumerate monic polys of degree dd by base-p counter over the low
        // coefficients.
        let count = p.pow(dd as u32);
        for idx in 0..count {
            let mut g = vec![0u64; dd + 1];
            let mut v = idx;
            for c in g.iter_mut().take(dd) {
                *c = v % p;
                v /= p;
            }
            g[dd] = 1;
            if poly_rem(p, f, &g).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldParams {
    /// Builds 𝔽_{p^m} with the deterministic least monic irreducible modulus.
    pub fn new(p: u64, m: usize) -> Result<FieldParams> {
        if !is_prime(p) || m == 0 || m > 8 {
            return Err(Error::FieldMismatch);
        }
        if m == 1 {
            return Ok(FieldParams {
                p,
                m,
                modulus: vec![0],
            });
        }
        let count = p.pow(m as u32);
        for idx in 0..count {
            let mut f = vec![0u64; m + 1];
            let mut v = idx;
            for c in f.iter_mut().take(m) {
                *c = v % p;
                v /= p;
            }
            f[m] = 1;
            if poly_is_irreducible(p, &f) {
                let mut modulus = f;
                modulus.pop();
                return Ok(FieldParams { p, m, modulus });
            }
        }
        unreachable!("an irreducible of every degree exists over a finite field")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// q = p^m, the field size.
    pub fn q(&self) -> u64 {
        self.p.pow(self.m as u32)
    }

    /// Low coefficients of the modulus (constant term first); degree-m
    /// coefficient is an implicit 1. For m = 1 this is `[0]` (modulus t).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.m],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// The basis element t (requires m ≥ 2).
    pub fn gen_t(&self) -> Result<FieldElem> {
        if self.m < 2 {
            return Err(Error::FieldMismatch);
        }
        let mut coeffs = vec![0; self.m];
        coeffs[1] = 1;
        Ok(FieldElem { coeffs })
    }

    pub fn from_int(&self, v: i64) -> FieldElem {
        let mut coeffs = vec![0; self.m];
        coeffs[0] = v.rem_euclid(self.p as i64) as u64;
        FieldElem { coeffs }
    }

    /// Element from polynomial-in-t coefficients of arbitrary degree; reduced
    /// modulo the modulus.
    pub fn from_poly(&self, raw: &[u64]) -> FieldElem {
        let mut v: Vec<u64> = raw.iter().map(|c| c % self.p).collect();
        poly_trim(&mut v);
        let mut full_mod = self.modulus.clone();
        full_mod.push(1);
        let mut r = if self.m == 1 {
            // modulus is t: reduce by dropping all t-powers (t ≡ 0).
            if v.is_empty() {
                Vec::new()
            } else {
                vec![v[0]]
            }
        } else {
            poly_rem(self.p, &v, &full_mod)
        };
        r.resize(self.m, 0);
        FieldElem { coeffs: r }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + y) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let prod = poly_mul(self.p, &a.coeffs, &b.coeffs);
        self.from_poly(&prod)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.m == 1 {
            return Ok(FieldElem {
                coeffs: vec![mod_inv_prime(self.p, a.coeffs[0])],
            });
        }
        let mut full_mod = self.modulus.clone();
        full_mod.push(1);
        let mut av = a.coeffs.clone();
        poly_trim(&mut av);
        let (g, s) = poly_half_ext_gcd(self.p, &av, &full_mod);
        debug_assert_eq!(g, vec![1], "modulus is irreducible, gcd must be 1");
        Ok(self.from_poly(&s))
    }

    pub fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius endomorphism a ↦ a^p. Its fixed field is 𝔽_p, and its order
    /// on 𝔽_{p^m} divides m.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    pub fn random(&self, rng: &mut impl Rng) -> FieldElem {
        FieldElem {
            coeffs: (0..self.m).map(|_| rng.gen_range(0..self.p)).collect(),
        }
    }

    pub fn random_nonzero(&self, rng: &mut impl Rng) -> FieldElem {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// All q elements, in the deterministic base-p counter order.
    pub fn all_elems(&self) -> Vec<FieldElem> {
        let q = self.q();
        (0..q)
            .map(|idx| {
                let mut v = idx;
                let coeffs = (0..self.m)
                    .map(|_| {
                        let c = v % self.p;
                        v /= self.p;
                        c
                    })
                    .collect();
                FieldElem { coeffs }
            })
            .collect()
    }

    /// Index of an element in the `all_elems` order.
    pub fn elem_index(&self, a: &FieldElem) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c)
    }
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Coefficient of t^k (0 for k ≥ m).
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_f4_is_t2_t_1() {
        let f = FieldParams::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1]);
    }

    #[test]
    fn modulus_f8_is_t3_t_1() {
        let f = FieldParams::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0]);
    }

    #[test]
    fn prime_field_inverse() {
        let f = FieldParams::new(5, 1).unwrap();
        let three = f.from_int(3);
        assert_eq!(f.inv(&three).unwrap(), f.from_int(2));
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn f4_multiplication_table() {
        let f = FieldParams::new(2, 2).unwrap();
        let t = f.gen_t().unwrap();
        // t² = t + 1 under the modulus.
        let t2 = f.mul(&t, &t);
        assert_eq!(t2, f.from_poly(&[1, 1]));
        // Frobenius swaps t and t+1; its square is the identity.
        assert_eq!(f.frobenius(&t), t2);
        assert_eq!(f.frobenius(&f.frobenius(&t)), t);
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, m) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 3), (7, 2)] {
            let f = FieldParams::new(p, m).unwrap();
            if f.q() > 64 {
                continue;
            }
            let elems = f.all_elems();
            for a in &elems {
                assert_eq!(f.add(a, &f.zero()), *a);
                assert_eq!(f.mul(a, &f.one()), *a);
                assert_eq!(f.add(a, &f.neg(a)), f.zero());
                if !a.is_zero() {
                    let ai = f.inv(a).unwrap();
                    assert!(f.mul(a, &ai).is_one());
                }
                for b in &elems {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in &elems {
                        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
                        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_order_divides_m() {
        for (p, m) in [(2u64, 2usize), (2, 3), (3, 2), (2, 6)] {
            let f = FieldParams::new(p, m).unwrap();
            if f.q() > 64 {
                continue;
            }
            for a in f.all_elems() {
                let mut b = a.clone();
                for _ in 0..m {
                    b = f.frobenius(&b);
                }
                assert_eq!(b, a);
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = FieldParams::new(3, 2).unwrap();
        for v in 0..3 {
            let a = f.from_int(v);
            assert_eq!(f.frobenius(&a), a);
        }
        let t = f.gen_t().unwrap();
        assert_ne!(f.frobenius(&t), t);
    }

    #[test]
    fn elem_index_roundtrip() {
        let f = FieldParams::new(3, 2).unwrap();
        for (i, a) in f.all_elems().iter().enumerate() {
            assert_eq!(f.elem_index(a), i as u64);
        }
    }
}
