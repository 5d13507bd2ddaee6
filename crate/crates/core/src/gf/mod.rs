//! Exact arithmetic in GF(p^m).
//!
//! Elements are plain `u32` values: the base-p digits of the value are the
//! coefficients of the polynomial representative, constant term first. The
//! encoding is canonical, so element equality is integer equality.
//!
//! Fields of order at most 2^16 carry exp/log tables keyed by the smallest
//! primitive element; larger fields multiply polynomials directly.

mod extension;
mod poly;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use extension::{subfield_basis, Extension};

const TABLE_LIMIT: u32 = 1 << 16;

/// A finite field GF(p^m) with an explicit monic irreducible modulus.
///
/// Cheap to clone; the arithmetic tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    m: u32,
    order: u32,
    modulus: Vec<u32>,
    /// x^m expressed as a bitmask for characteristic two.
    modulus_bits: u64,
    generator: u32,
    group_factors: Vec<u64>,
    tables: Option<Tables>,
}

struct Tables {
    /// exp[i] = g^i for i in 0..2(order-1)
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}) mod {:?}", self.0.order, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

impl Field {
    /// Builds GF(p^m).
    ///
    /// With no modulus, degree one uses `x` and higher degrees use the
    /// smallest monic irreducible (by integer encoding) whose root `x` is
    /// primitive, so the same `(p, m)` always yields the same field.
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
        if !poly::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let order = (p as u64)
            .checked_pow(m)
            .filter(|&o| o <= u32::MAX as u64)
            .ok_or(Error::OrderOverflow { p, m })? as u32;
        let modulus = match modulus {
            Some(given) => {
                if given.len() != m as usize + 1
                    || given[m as usize] != 1
                    || given.iter().any(|&c| c >= p)
                {
                    return Err(Error::BadModulus {
                        expected: m,
                        got: given.to_vec(),
                    });
                }
                if !poly::is_irreducible(given, p) {
                    return Err(Error::ReducibleModulus(given.to_vec()));
                }
                given.to_vec()
            }
            None => default_modulus(p, m, order),
        };
        Ok(Field(Arc::new(Inner::build(p, m, order, modulus))))
    }

    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Smallest primitive element by integer value.
    pub fn primitive_element(&self) -> u32 {
        self.0.generator
    }

    pub fn contains(&self, v: u32) -> bool {
        v < self.0.order
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::NotAnElement {
                value: value as u64,
                order: self.0.order,
            });
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> u32 {
        v.rem_euclid(self.0.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 {
            return a ^ b;
        }
        if inner.m == 1 {
            return ((a as u64 + b as u64) % inner.p as u64) as u32;
        }
        let p = inner.p as u64;
        let (mut x, mut y) = (a as u64, b as u64);
        let mut place = 1u64;
        let mut out = 0u64;
        for _ in 0..inner.m {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        out as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let inner = &*self.0;
        if inner.p == 2 || a == 0 {
            return a;
        }
        if inner.m == 1 {
            return inner.p - a;
        }
        let p = inner.p as u64;
        let mut x = a as u64;
        let mut place = 1u64;
        let mut out = 0u64;
        for _ in 0..inner.m {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        out as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.0.mul_poly(a, b),
        }
    }

    /// Multiplicative inverse. Panics on zero; see [`FieldElement::inv`] for
    /// the checked form.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        match &self.0.tables {
            Some(t) => t.exp[((self.0.order - 1) - t.log[a as usize]) as usize],
            None => self.pow(a, self.0.order as u64 - 2),
        }
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let group = self.0.order as u64 - 1;
        if let Some(t) = &self.0.tables {
            let l = t.log[a as usize] as u128 * (e % group) as u128 % group as u128;
            return t.exp[l as usize];
        }
        let mut base = a;
        let mut e = e % group;
        if e == 0 {
            return 1;
        }
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.0.mul_poly(acc, base);
            }
            base = self.0.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    /// Returns `d` when `q = p^d` is the order of a subfield, i.e. `d | m`.
    pub fn subfield_degree(&self, q: u32) -> Result<u32> {
        let err = Error::NotASubfield {
            q,
            order: self.0.order,
        };
        if q < self.0.p {
            return Err(err);
        }
        let mut d = 0u32;
        let mut v = q;
        while v.is_multiple_of(self.0.p) {
            v /= self.0.p;
            d += 1;
        }
        if v != 1 || !self.0.m.is_multiple_of(d) {
            return Err(err);
        }
        Ok(d)
    }

    /// `a^(q^i)`, the i-th iterate of the q-power Frobenius map.
    pub fn frobenius(&self, a: u32, q: u32, i: u32) -> Result<u32> {
        self.subfield_degree(q)?;
        if a == 0 {
            return Ok(0);
        }
        let group = self.0.order as u64 - 1;
        let e = poly::pow_mod(q as u64, i as u64, group);
        Ok(if e == 0 { 1 } else { self.pow(a, e) })
    }

    pub fn multiplicative_order(&self, a: u32) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let mut ord = self.0.order as u64 - 1;
        for &r in &self.0.group_factors {
            while ord.is_multiple_of(r) && self.pow(a, ord / r) == 1 {
                ord /= r;
            }
        }
        Some(ord)
    }

    pub fn is_primitive(&self, a: u32) -> bool {
        self.multiplicative_order(a) == Some(self.0.order as u64 - 1)
    }

    /// Base-p digits of `a`, length `m`.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.0.p;
        let mut x = a;
        (0..self.0.m)
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * self.0.p as u64 + d as u64) as u32
    }
}

impl Inner {
    fn build(p: u32, m: u32, order: u32, modulus: Vec<u32>) -> Inner {
        let modulus_bits = if p == 2 {
            modulus
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        let mut inner = Inner {
            p,
            m,
            order,
            modulus,
            modulus_bits,
            generator: 1,
            group_factors: poly::prime_factors(order as u64 - 1),
            tables: None,
        };
        inner.generator = (1..order)
            .find(|&g| inner.is_primitive_slow(g))
            .expect("multiplicative group is cyclic");
        if order <= TABLE_LIMIT {
            let group = (order - 1) as usize;
            let mut exp = vec![0u32; 2 * group.max(1)];
            let mut log = vec![0u32; order as usize];
            let mut x = 1u32;
            for i in 0..group {
                exp[i] = x;
                log[x as usize] = i as u32;
                x = inner.mul_poly(x, inner.generator);
            }
            for i in group..2 * group {
                exp[i] = exp[i - group];
            }
            if group == 0 {
                exp[0] = 1;
            }
            inner.tables = Some(Tables { exp, log });
        }
        inner
    }

    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.m == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        if self.p == 2 {
            let (a, b) = (a as u64, b as u64);
            let mut prod = 0u64;
            for i in 0..self.m {
                if (b >> i) & 1 == 1 {
                    prod ^= a << i;
                }
            }
            for i in (self.m..2 * self.m).rev() {
                if (prod >> i) & 1 == 1 {
                    prod ^= self.modulus_bits << (i - self.m);
                }
            }
            return prod as u32;
        }
        let p = self.p as u64;
        let m = self.m as usize;
        let da = digits_of(a, self.p, m);
        let db = digits_of(b, self.p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for i in (m..2 * m - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..m {
                let sub = c * self.modulus[j] as u64 % p;
                prod[i - m + j] = (prod[i - m + j] + p - sub) % p;
            }
        }
        prod[..m].iter().rev().fold(0u64, |acc, &d| acc * p + d) as u32
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn is_primitive_slow(&self, a: u32) -> bool {
        if a == 0 {
            return false;
        }
        let group = self.order as u64 - 1;
        self.group_factors
            .iter()
            .all(|&r| self.pow_slow(a, group / r) != 1)
    }
}

fn digits_of(mut a: u32, p: u32, m: usize) -> Vec<u32> {
    let mut out = vec![0u32; m];
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
    out
}

fn default_modulus(p: u32, m: u32, order: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    for low in 0..order as u64 {
        let candidate = poly::monic_from_index(low, m as usize, p);
        if candidate[0] == 0 || !poly::is_irreducible(&candidate, p) {
            continue;
        }
        let inner = Inner {
            p,
            m,
            order,
            modulus_bits: if p == 2 {
                candidate
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
            } else {
                0
            },
            modulus: candidate.clone(),
            generator: 1,
            group_factors: poly::prime_factors(order as u64 - 1),
            tables: None,
        };
        if inner.is_primitive_slow(p) {
            return candidate;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// A field element bound to its field, with checked operations.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    fn wrap(&self, value: u32) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same(other)?;
        let inv = other.inv()?;
        Ok(self.wrap(self.field.mul(self.value, inv.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::InverseOfZero);
        }
        Ok(self.wrap(self.field.inv(self.value)))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }

    pub fn frobenius(&self, q: u32, i: u32) -> Result<FieldElement> {
        Ok(self.wrap(self.field.frobenius(self.value, q, i)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf8() -> Field {
        Field::new(2, 3, Some(&[1, 1, 0, 1])).unwrap()
    }

    #[test]
    fn prime_field_default_modulus() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.primitive_element(), 1);
    }

    #[test]
    fn gf8_products() {
        let f = gf8();
        assert_eq!(f.mul(2, 2), 4);
        assert_eq!(f.mul(4, 2), 3); // x^3 = x + 1
        for a in 0..8 {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            Field::new(2, 3, Some(&[1, 0, 0, 1])),
            Err(Error::ReducibleModulus(_))
        ));
        assert!(matches!(
            Field::new(2, 3, Some(&[1, 1, 1])),
            Err(Error::BadModulus { .. })
        ));
        assert!(matches!(
            Field::new(2, 32, None),
            Err(Error::OrderOverflow { .. })
        ));
        assert_eq!(Field::new(3, 0, None).unwrap_err(), Error::ZeroDegree);
    }

    #[test]
    fn default_modulus_is_deterministic() {
        let a = Field::new(2, 8, None).unwrap();
        let b = Field::new(2, 8, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.modulus(), b.modulus());
        // x^8+x^4+x^3+x+1 is irreducible but x has order 51 there
        assert_eq!(a.modulus(), &[1, 0, 1, 1, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn element_checks() {
        let f = gf8();
        assert!(f.element(8).is_err());
        let zero = f.element(0).unwrap();
        assert_eq!(zero.inv().unwrap_err(), Error::InverseOfZero);
        let other = Field::prime(7).unwrap().element(3).unwrap();
        let three = f.element(3).unwrap();
        assert_eq!(three.add(&other).unwrap_err(), Error::FieldMismatch);
        assert_eq!(three.mul(&three.inv().unwrap()).unwrap().value(), 1);
        assert_eq!(three.div(&three).unwrap().value(), 1);
    }

    #[test]
    fn odd_characteristic_extension() {
        let f = Field::new(3, 2, None).unwrap();
        assert_eq!(f.order(), 9);
        for a in 0..9 {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
        }
        assert!(f.is_primitive(3));
    }

    #[test]
    fn large_field_without_tables() {
        let f = Field::new(2, 20, None).unwrap();
        let g = f.primitive_element();
        assert_eq!(f.pow(g, f.order() as u64 - 1), 1);
        let a = 123_457;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        let big = Field::new(251, 3, None).unwrap();
        let b = 1_000_003 % big.order();
        assert_eq!(big.mul(b, big.inv(b)), 1);
        assert_eq!(big.frobenius(b, 251, 3).unwrap(), b);
    }

    #[test]
    fn frobenius_fixed_points() {
        let f = gf8();
        for i in 0..5 {
            assert_eq!(f.frobenius(0, 2, i).unwrap(), 0);
            assert_eq!(f.frobenius(1, 2, i).unwrap(), 1);
        }
        assert_eq!(f.frobenius(2, 2, 3).unwrap(), 2);
        assert!(f.frobenius(2, 4, 1).is_err());
        let gf16 = Field::new(2, 4, None).unwrap();
        assert!(gf16.frobenius(5, 4, 1).is_ok());
        assert!(gf16.frobenius(5, 8, 1).is_err());
    }
}
