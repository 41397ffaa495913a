//! Exact arithmetic over GF(p^k) for field sizes up to 65536.
//!
//! Elements are integers in `[0, q)` whose base-`p` digits are the
//! coefficients of a polynomial over GF(p), constant term in the least
//! significant digit. Extension fields are represented modulo the Conway
//! polynomial for `(p, k)`, so the integer encoding of an element is the same
//! in every implementation that follows that convention.
//!
//! Multiplication goes through log/antilog tables built once per field;
//! [`Field::mul_by_reduction`] is the direct polynomial route and is kept
//! public so the two can be compared.

use std::fmt;
use std::sync::Arc;

use crate::conway;
use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_ORDER: u32 = 65536;

/// Integer encoding of a field element.
pub type Elem = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    k: u32,
    q: u32,
    /// Monic modulus, constant term first, `k + 1` digits.
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("characteristic {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::UnsupportedField("extension degree must be at least 1".into()));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER as u64)
            .ok_or_else(|| Error::UnsupportedField(format!("{p}^{k} exceeds {MAX_ORDER}")))?
            as u32;
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            conway::lookup(p, k)
                .ok_or_else(|| Error::UnsupportedField(format!("no Conway polynomial for {p}^{k}")))?
                .to_vec()
        };
        Ok(FieldSpec { p, k, q, modulus })
    }

    /// Field spec from its order `q = p^k`.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
        FieldSpec::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.k)
        }
    }
}

#[derive(Debug)]
struct Tables {
    /// `log[a]` for `a != 0`; `log[0]` is unused.
    log: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    generator: Elem,
}

/// A finite field with its multiplication tables. Cheap to clone.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    tables: Arc<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.spec.fmt(f)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let generator = if spec.k == 1 {
            least_primitive_root(spec.p)
        } else {
            // x is a root of a Conway polynomial, which is primitive.
            spec.p
        };
        let n = (spec.q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u32; spec.q as usize];
        let mut acc: Elem = 1;
        for i in 0..n {
            exp.push(acc);
            log[acc as usize] = i as u32;
            acc = mul_poly(&spec, acc, generator);
        }
        debug_assert_eq!(acc, 1, "generator order must be q - 1");
        for i in 0..n {
            exp.push(exp[i]);
        }
        Field { spec, tables: Arc::new(Tables { log, exp, generator }) }
    }

    /// GF(q) for a prime power `q`.
    pub fn with_order(q: u32) -> Result<Self> {
        Ok(Field::new(FieldSpec::from_order(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.spec.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn generator(&self) -> Elem {
        self.tables.generator
    }

    pub fn contains(&self, a: Elem) -> bool {
        a < self.spec.q
    }

    /// All elements in integer order.
    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.spec.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            a ^ b
        } else if self.spec.k == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            digitwise(a, b, p, |x, y| (x + y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.spec.p;
        if p == 2 {
            a
        } else if self.spec.k == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            digitwise(a, 0, p, |x, _| (p - x) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.tables;
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let t = &self.tables;
        let n = self.spec.q - 1;
        Ok(t.exp[((n - t.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let t = &self.tables;
        let n = (self.spec.q - 1) as u64;
        t.exp[((t.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Product by schoolbook polynomial multiplication and reduction by the
    /// modulus, without the tables.
    pub fn mul_by_reduction(&self, a: Elem, b: Elem) -> Elem {
        mul_poly(&self.spec, a, b)
    }
}

fn digitwise(mut a: u32, mut b: u32, p: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        out += op(a % p, b % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn to_digits(mut a: u32, p: u32, k: usize) -> Vec<u32> {
    let mut d = vec![0; k];
    for slot in d.iter_mut() {
        *slot = a % p;
        a /= p;
    }
    d
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

fn mul_poly(spec: &FieldSpec, a: Elem, b: Elem) -> Elem {
    let p = spec.p as u64;
    if spec.k == 1 {
        return ((a as u64 * b as u64) % p) as u32;
    }
    let k = spec.k as usize;
    let da = to_digits(a, spec.p, k);
    let db = to_digits(b, spec.p, k);
    let mut prod = vec![0u64; 2 * k - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (j, &m) in spec.modulus.iter().enumerate() {
            let idx = deg - k + j;
            prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
        }
    }
    let low: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
    from_digits(&low, spec.p)
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while q % p != 0 {
        p += 1;
    }
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        b %= p as u64;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r
    };
    (2..p)
        .find(|&g| factors.iter().all(|&f| powmod(g as u64, ((p - 1) / f) as u64) != 1))
        .expect("every prime has a primitive root")
}
