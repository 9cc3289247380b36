//! Exact arithmetic in GF(p^h).
//!
//! Elements are stored as integers whose base-p digits are the coefficients
//! of the polynomial-basis representation, constant term in the least
//! significant digit. The integer value doubles as the canonical field order
//! used everywhere a deterministic enumeration is needed.
//!
//! ```
//! use arclab::gf::Field;
//!
//! let f = Field::new(3, 2).unwrap();
//! assert_eq!(f.modulus(), &[1, 0, 1]);
//! let x = f.from_coeffs(&[0, 1]).unwrap();
//! assert_eq!(f.pow(x, 2), f.neg(f.one()));
//! ```

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by validation.
pub const MAX_ORDER: u64 = 1 << 16;

/// A field element, meaningful only together with its [`Field`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(u32);

impl Elem {
    /// Position in the canonical field order (the base-p digit encoding).
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Serializable description of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub h: u32,
    pub modulus: Vec<u32>,
}

struct Inner {
    p: u32,
    h: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
}

/// The finite field GF(p^h). Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.0.p, self.0.h, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d as u64 * d as u64 <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over GF(p), low degree first. Only used while building
// tables, so clarity beats speed here.
mod prime_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = super::pow_mod(m[dm] as u64, p as u64 - 2, p as u64) as u32;
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &mi) in m.iter().enumerate() {
                let idx = dr - dm + i;
                r[idx] = ((r[idx] as u64 + (p - c) as u64 * mi as u64) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|v| v as u32).collect();
        rem(&prod, m, p)
    }

    /// Monic polynomials of the given degree, enumerated in lexicographic
    /// order of their low-degree-first coefficient tuples.
    pub fn monic_of_degree(d: u32, p: u32) -> impl Iterator<Item = Vec<u32>> {
        let count = (p as u64).pow(d);
        (0..count).map(move |mut n| {
            let mut c = Vec::with_capacity(d as usize + 1);
            // Most significant digit is the constant term so that the integer
            // order matches lexicographic order on the tuple.
            let mut digits = vec![0u32; d as usize];
            for slot in digits.iter_mut().rev() {
                *slot = (n % p as u64) as u32;
                n /= p as u64;
            }
            c.extend(digits);
            c.push(1);
            c
        })
    }

    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let d = (m.len() - 1) as u32;
        if d <= 1 {
            return d == 1;
        }
        for fd in 1..=d / 2 {
            for f in monic_of_degree(fd, p) {
                if rem(m, &f, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl Field {
    /// GF(p^h) with the lexicographically least irreducible monic modulus.
    pub fn new(p: u32, h: u32) -> Result<Field> {
        Self::build(p, h, None)
    }

    /// GF(p^h) with an explicit modulus (coefficients low degree first).
    pub fn with_modulus(p: u32, h: u32, modulus: &[u32]) -> Result<Field> {
        Self::build(p, h, Some(modulus))
    }

    /// Smallest field of order `q`, if `q` is a prime power.
    pub fn of_order(q: u32) -> Result<Field> {
        let (p, h) = prime_power(q).ok_or_else(|| {
            Error::InvalidField(format!("{q} is not a prime power"))
        })?;
        Self::new(p, h)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field> {
        Self::with_modulus(spec.p, spec.h, &spec.modulus)
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.0.p, h: self.0.h, modulus: self.0.modulus.clone() }
    }

    fn build(p: u32, h: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::InvalidField("extension degree must be at least 1".into()));
        }
        let q64 = (p as u64).checked_pow(h).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::InvalidField(format!("order {p}^{h} exceeds {MAX_ORDER}"))
        })?;
        let q = q64 as u32;
        let modulus = match modulus {
            Some(m) => {
                if m.len() != h as usize + 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidField(format!(
                        "modulus {m:?} is not a degree-{h} polynomial over GF({p})"
                    )));
                }
                if m[h as usize] != 1 {
                    return Err(Error::InvalidField(format!("modulus {m:?} is not monic")));
                }
                if !prime_poly::is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(m.to_vec(), p));
                }
                m.to_vec()
            }
            None => prime_poly::monic_of_degree(h, p)
                .find(|m| prime_poly::is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree"),
        };

        let to_poly = |mut n: u32| {
            let mut v = Vec::with_capacity(h as usize);
            for _ in 0..h {
                v.push(n % p);
                n /= p;
            }
            prime_poly::trim(&mut v);
            v
        };
        let from_poly = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let slow_mul = |a: u32, b: u32| {
            from_poly(&prime_poly::mul_mod(&to_poly(a), &to_poly(b), &modulus, p))
        };
        let slow_pow = |a: u32, mut e: u64| {
            let mut r = 1u32;
            let mut b = a;
            while e > 0 {
                if e & 1 == 1 {
                    r = slow_mul(r, b);
                }
                b = slow_mul(b, b);
                e >>= 1;
            }
            r
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&c| factors.iter().all(|&r| slow_pow(c, order / r) != 1))
            .expect("the multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..(q - 1) as usize {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(cur, generator);
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q - 1) as usize];
        }

        let digit_add = |a: u32, b: u32| {
            if p == 2 {
                return a ^ b;
            }
            let (mut a, mut b) = (a, b);
            let mut r = 0;
            let mut place = 1;
            for _ in 0..h {
                r += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            r
        };
        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let mut a = a;
                let mut r = 0;
                let mut place = 1;
                for _ in 0..h {
                    r += ((p - a % p) % p) * place;
                    a /= p;
                    place *= p;
                }
                r
            })
            .collect();
        let add = if p != 2 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(a, b) as u16;
                }
            }
            Some(t)
        } else {
            None
        };

        Ok(Field(Arc::new(Inner {
            p,
            h,
            q,
            modulus,
            generator: Elem(generator),
            exp,
            log,
            neg,
            add,
        })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn h(&self) -> u32 {
        self.0.h
    }

    /// Field order q = p^h.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The primitive element: the least element (in canonical order) of
    /// multiplicative order q − 1.
    pub fn generator(&self) -> Elem {
        self.0.generator
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// Element at position `i` of the canonical order.
    pub fn elem(&self, i: u32) -> Result<Elem> {
        if i < self.0.q {
            Ok(Elem(i))
        } else {
            Err(Error::ForeignElement(i, self.0.q))
        }
    }

    /// Element from its polynomial-basis coefficients (low degree first).
    /// Missing high coefficients are zero.
    pub fn from_coeffs(&self, c: &[u32]) -> Result<Elem> {
        if c.len() > self.0.h as usize || c.iter().any(|&x| x >= self.0.p) {
            return Err(Error::InvalidField(format!(
                "{c:?} is not a coefficient tuple of GF({})",
                self.0.q
            )));
        }
        Ok(Elem(c.iter().rev().fold(0, |acc, &x| acc * self.0.p + x)))
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut n = a.0;
        (0..self.0.h)
            .map(|_| {
                let d = n % self.0.p;
                n /= self.0.p;
                d
            })
            .collect()
    }

    /// Image of an integer under Z → GF(p) ⊆ GF(q).
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.0.q).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.0.q).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if let Some(t) = &inner.add {
            return Elem(t[(a.0 * inner.q + b.0) as usize] as u32);
        }
        let (p, mut x, mut y) = (inner.p, a.0, b.0);
        let mut r = 0;
        let mut place = 1;
        for _ in 0..inner.h {
            r += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Elem(r)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        let inner = &*self.0;
        Elem(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; panics on zero (see [`Field::checked_inv`]).
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.checked_inv(a).expect("inversion of zero")
    }

    pub fn checked_inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let inner = &*self.0;
        let l = inner.log[a.0 as usize];
        let ql = inner.q - 1;
        Ok(Elem(inner.exp[((ql - l) % ql) as usize]))
    }

    /// a / b; panics when b = 0.
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// a^n for any n ≥ 0, with 0^0 = 1.
    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem(1);
        }
        if a.0 == 0 {
            return Elem(0);
        }
        let inner = &*self.0;
        let ql = (inner.q - 1) as u64;
        let e = (inner.log[a.0 as usize] as u64 * (n % ql)) % ql;
        Elem(inner.exp[e as usize])
    }

    /// a^n for a signed exponent; negative exponents need a ≠ 0.
    pub fn pow_signed(&self, a: Elem, n: i64) -> Elem {
        if n >= 0 {
            self.pow(a, n as u64)
        } else {
            self.pow(self.inv(a), n.unsigned_abs())
        }
    }

    /// The function x ↦ x^(num/den): the exponent is num · den⁻¹ mod (q − 1)
    /// on nonzero elements, and 0 ↦ 0.
    pub fn pow_frac(&self, a: Elem, num: u64, den: u64) -> Result<Elem> {
        let e = self.frac_exponent(num, den)?;
        if a.0 == 0 {
            return Ok(Elem(0));
        }
        Ok(self.pow(a, e))
    }

    /// Integer exponent equivalent to num/den on GF(q)*.
    pub fn frac_exponent(&self, num: u64, den: u64) -> Result<u64> {
        let ql = (self.0.q - 1) as u64;
        if ql == 1 {
            return Ok(0);
        }
        let inv = mod_inverse(den % ql, ql).ok_or_else(|| {
            Error::Precondition(format!("{den} is not invertible modulo {ql}"))
        })?;
        Ok(num % ql * inv % ql)
    }

    /// x ↦ x^(p^e), e reduced mod h.
    pub fn frobenius(&self, a: Elem, e: u32) -> Elem {
        let e = e % self.0.h;
        self.pow(a, (self.0.p as u64).pow(e))
    }

    /// Absolute trace to GF(2): x + x² + … + x^(2^(h−1)).
    pub fn trace2(&self, a: Elem) -> Result<Elem> {
        if self.0.p != 2 {
            return Err(Error::NotCharacteristicTwo(self.0.p));
        }
        let mut acc = Elem(0);
        let mut cur = a;
        for _ in 0..self.0.h {
            acc = self.add(acc, cur);
            cur = self.mul(cur, cur);
        }
        Ok(acc)
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Result<u64> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        let ql = (self.0.q - 1) as u64;
        let l = self.0.log[a.0 as usize] as u64;
        Ok(ql / gcd(l, ql))
    }

    /// Discrete logarithm to base [`Field::generator`].
    pub fn log(&self, a: Elem) -> Result<u32> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.0.log[a.0 as usize])
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem(0), |acc, x| self.add(acc, x))
    }

    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem(1), |acc, x| self.mul(acc, x))
    }

    /// Whether q is a perfect square; returns √q.
    pub fn sqrt_order(&self) -> Option<u32> {
        self.0.h.is_multiple_of(2).then(|| self.0.p.pow(self.0.h / 2))
    }

    /// Renders an element: residues for prime fields, coefficient tuples otherwise.
    pub fn show(&self, a: Elem) -> String {
        if self.0.h == 1 {
            a.0.to_string()
        } else {
            format!("{:?}", self.coeffs(a))
        }
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = FieldSpec::deserialize(d)?;
        Field::from_spec(&spec).map_err(serde::de::Error::custom)
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Decomposes q = p^h.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut n = q;
    let mut h = 0;
    while n.is_multiple_of(p) {
        n /= p;
        h += 1;
    }
    (n == 1).then_some((p, h))
}

/// Quadratic extension F[Y]/(Y² + c1·Y + c0) of a base field, used for the
/// hyperoval families whose parameters live in GF(q²).
#[derive(Clone, Debug)]
pub struct QuadExt {
    base: Field,
    c0: Elem,
    c1: Elem,
}

/// a + b·Y in a [`QuadExt`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QElem(pub Elem, pub Elem);

impl QuadExt {
    /// Fails if Y² + c1·Y + c0 has a root in the base field.
    pub fn new(base: &Field, c1: Elem, c0: Elem) -> Result<QuadExt> {
        let has_root = base
            .elements()
            .any(|y| base.add(base.add(base.mul(y, y), base.mul(c1, y)), c0).is_zero());
        if has_root {
            return Err(Error::Precondition("quadratic modulus is reducible".into()));
        }
        Ok(QuadExt { base: base.clone(), c0, c1 })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn embed(&self, a: Elem) -> QElem {
        QElem(a, self.base.zero())
    }

    /// The adjoined root Y.
    pub fn root(&self) -> QElem {
        QElem(self.base.zero(), self.base.one())
    }

    pub fn one(&self) -> QElem {
        self.embed(self.base.one())
    }

    pub fn add(&self, a: QElem, b: QElem) -> QElem {
        QElem(self.base.add(a.0, b.0), self.base.add(a.1, b.1))
    }

    pub fn mul(&self, a: QElem, b: QElem) -> QElem {
        let f = &self.base;
        let lo = f.mul(a.0, b.0);
        let mid = f.add(f.mul(a.0, b.1), f.mul(a.1, b.0));
        let hi = f.mul(a.1, b.1);
        // Y² = −c1·Y − c0
        QElem(f.sub(lo, f.mul(hi, self.c0)), f.sub(mid, f.mul(hi, self.c1)))
    }

    pub fn pow(&self, a: QElem, mut n: u64) -> QElem {
        let mut r = self.one();
        let mut b = a;
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            n >>= 1;
        }
        r
    }

    /// x ↦ x^q.
    pub fn conj(&self, a: QElem) -> QElem {
        self.pow(a, self.base.q() as u64)
    }

    /// T(x) = x + x^q, which lies in the base field.
    pub fn trace(&self, a: QElem) -> Elem {
        let t = self.add(a, self.conj(a));
        debug_assert!(t.1.is_zero());
        t.0
    }

    pub fn inv(&self, a: QElem) -> QElem {
        let q = self.base.q() as u64;
        self.pow(a, q * q - 2)
    }

    pub fn is_zero(&self, a: QElem) -> bool {
        a.0.is_zero() && a.1.is_zero()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: QElem) -> u64 {
        let q = self.base.q() as u64;
        let n = q * q - 1;
        let mut ord = n;
        for r in prime_factors(n) {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == self.one() {
                ord /= r;
            }
        }
        ord
    }
}
