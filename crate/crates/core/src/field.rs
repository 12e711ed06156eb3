//! Table-driven arithmetic in the finite field F_q, q = p^e.
//!
//! Elements are dense integer codes in `[0, q)`. A code is read as base-p
//! digits, which are the coefficients of a polynomial over F_p reduced modulo
//! the field's modulus (lowest digit = constant term). Code 0 is the additive
//! identity and code 1 the multiplicative identity.
//!
//! [`make_field`] picks the lexicographically smallest monic irreducible
//! modulus, so every downstream construction is bit-reproducible.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Below this order non-binary addition uses a full lookup table.
const ADD_TABLE_LIMIT: u32 = 256;

/// An element of some F_q, stored as its canonical integer code.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub const fn code(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) const fn from_raw(code: u32) -> Elem {
        Elem(code as u16)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for a primitive element g, doubled so that
    /// `exp[log a + log b]` needs no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
    neg: Vec<u16>,
    /// Full q×q addition table, only for small odd-characteristic fields.
    add: Option<Vec<u16>>,
}

/// The finite field F_q together with its precomputed arithmetic tables.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p())
            .field("e", &self.e())
            .field("modulus", &self.modulus())
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.p() == other.p() && self.e() == other.e() && self.modulus() == other.modulus())
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_order(p: u32, e: u32) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::ZeroDegree);
    }
    match (p as u64).checked_pow(e) {
        Some(q) if q <= MAX_ORDER as u64 => Ok(q as u32),
        _ => Err(Error::FieldTooLarge { p, e }),
    }
}

/// Builds F_{p^e} with the lexicographically smallest monic irreducible
/// modulus of degree `e` over F_p. For `e = 1` the modulus is `x`.
pub fn make_field(p: u32, e: u32) -> Result<FieldSpec> {
    checked_order(p, e)?;
    let prime = FieldSpec::build(p, 1, vec![0, 1]);
    if e == 1 {
        return Ok(prime);
    }
    let modulus = poly::find_irreducible(&prime, e as usize)
        .into_iter()
        .map(Elem::code)
        .collect();
    Ok(FieldSpec::build(p, e, modulus))
}

impl FieldSpec {
    /// Builds a field from an explicit modulus (coefficients low to high,
    /// including the leading 1). The modulus is checked for irreducibility.
    pub fn from_modulus(p: u32, e: u32, modulus: &[u32]) -> Result<FieldSpec> {
        checked_order(p, e)?;
        let bad = || Error::BadModulus(modulus.to_vec());
        if modulus.len() != e as usize + 1
            || modulus[e as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(bad());
        }
        if e == 1 {
            if modulus != [0, 1] {
                return Err(bad());
            }
            return Ok(FieldSpec::build(p, 1, modulus.to_vec()));
        }
        let prime = FieldSpec::build(p, 1, vec![0, 1]);
        let f: Vec<Elem> = modulus.iter().map(|&c| Elem::from_raw(c)).collect();
        if !poly::is_irreducible(&prime, &f)? {
            return Err(bad());
        }
        Ok(FieldSpec::build(p, e, modulus.to_vec()))
    }

    /// Assumes the parameters were already validated.
    fn build(p: u32, e: u32, modulus: Vec<u32>) -> FieldSpec {
        let q = p.pow(e);
        let slow = SlowArith {
            p,
            e,
            modulus: &modulus,
        };

        let mut neg = vec![0u16; q as usize];
        for a in 0..q {
            neg[a as usize] = slow.neg(a) as u16;
        }

        let order = q - 1;
        let mut exp = vec![0u16; 2 * order.max(1) as usize];
        let mut log = vec![0u16; q as usize];
        if q == 2 {
            exp[0] = 1;
            exp[1] = 1;
        } else {
            let gen = (2..q)
                .find(|&g| slow.multiplicative_order(g) == order)
                .expect("the multiplicative group of a field is cyclic");
            let mut x = 1u32;
            for i in 0..order {
                exp[i as usize] = x as u16;
                exp[(i + order) as usize] = x as u16;
                log[x as usize] = i as u16;
                x = slow.mul(x, gen);
            }
        }

        let add = (p != 2 && q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = slow.add(a, b) as u16;
                }
            }
            t
        });

        FieldSpec(Arc::new(Tables {
            p,
            e,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
        }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients over F_p, low degree first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_binary(&self) -> bool {
        self.0.p == 2
    }

    pub fn elem(&self, code: u32) -> Result<Elem> {
        if code < self.q() {
            Ok(Elem::from_raw(code))
        } else {
            Err(Error::ElementOutOfRange { code, q: self.q() })
        }
    }

    /// All q elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(Elem::from_raw)
    }

    /// Nonzero elements in code order.
    pub fn units(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q()).map(Elem::from_raw)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let t = &*self.0;
        if t.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if let Some(add) = &t.add {
            return Elem(add[a.0 as usize * t.q as usize + b.0 as usize]);
        }
        Elem::from_raw(SlowArith::digit_add(t.p, a.code(), b.code()))
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
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let t = &*self.0;
        Elem(t.exp[t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let t = &*self.0;
        let order = t.q - 1;
        let l = t.log[a.0 as usize] as u32;
        Ok(Elem(t.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`, with `0^0 = 1`.
    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let t = &*self.0;
        let order = (t.q - 1) as u64;
        let l = (t.log[a.0 as usize] as u64 * (n % order)) % order;
        Elem(t.exp[l as usize])
    }

    /// Base-p digits of `a` (polynomial coefficients, constant term first),
    /// always `e` digits long.
    pub fn digits(&self, a: Elem) -> Vec<u32> {
        let mut c = a.code();
        (0..self.e())
            .map(|_| {
                let d = c % self.p();
                c /= self.p();
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.e() as usize {
            return Err(Error::DimensionMismatch {
                expected: self.e() as usize,
                found: digits.len(),
            });
        }
        let mut code = 0u32;
        for &d in digits.iter().rev() {
            if d >= self.p() {
                return Err(Error::ElementOutOfRange {
                    code: d,
                    q: self.p(),
                });
            }
            code = code * self.p() + d;
        }
        Ok(Elem::from_raw(code))
    }

    /// Schoolbook polynomial multiplication modulo the modulus, bypassing the
    /// log tables. Kept public so tests can cross-check the tables.
    pub fn mul_schoolbook(&self, a: Elem, b: Elem) -> Elem {
        let slow = SlowArith {
            p: self.p(),
            e: self.e(),
            modulus: self.modulus(),
        };
        Elem::from_raw(slow.mul(a.code(), b.code()))
    }
}

/// Digit-level arithmetic used to fill the tables.
struct SlowArith<'a> {
    p: u32,
    e: u32,
    modulus: &'a [u32],
}

impl SlowArith<'_> {
    fn to_digits(&self, mut a: u32) -> Vec<u32> {
        (0..self.e)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn pack_digits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        Self::digit_add(self.p, a, b)
    }

    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self
            .to_digits(a)
            .into_iter()
            .map(|x| (self.p - x) % self.p)
            .collect();
        self.pack_digits(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let e = self.e as usize;
        let da = self.to_digits(a);
        let db = self.to_digits(b);
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for deg in (e..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate().take(e) {
                let idx = deg - e + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
            prod[deg] = 0;
        }
        let digits: Vec<u32> = prod[..e].iter().map(|&x| x as u32).collect();
        self.pack_digits(&digits)
    }

    fn multiplicative_order(&self, g: u32) -> u32 {
        let mut x = g;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, g);
            n += 1;
            if x == 0 {
                return 0;
            }
        }
        n
    }
}

/// JSON form: `{"p": int, "e": int, "modulus": [int, ...]}`.
#[derive(Serialize, Deserialize)]
struct FieldJson {
    p: u32,
    e: u32,
    modulus: Vec<u32>,
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldJson {
            p: self.p(),
            e: self.e(),
            modulus: self.modulus().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = FieldJson::deserialize(d)?;
        FieldSpec::from_modulus(j.p, j.e, &j.modulus).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small_fields() -> Vec<FieldSpec> {
        [
            (2, 1),
            (2, 2),
            (2, 3),
            (3, 1),
            (3, 2),
            (5, 1),
            (7, 1),
            (2, 4),
            (3, 3),
            (5, 2),
        ]
        .iter()
        .map(|&(p, e)| make_field(p, e).unwrap())
        .collect()
    }

    #[test]
    fn prime_fields_use_modulus_x() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert_eq!(f2.q(), 2);
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.modulus(), &[0, 1]);
    }

    #[test]
    fn f4_modulus_is_x2_x_1() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.q(), 4);
    }

    #[test]
    fn f4_x_times_x_is_x_plus_1() {
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.mul(Elem(2), Elem(2)), Elem(3));
    }

    #[test]
    fn f3_two_plus_two_is_one() {
        let f3 = make_field(3, 1).unwrap();
        assert_eq!(f3.add(Elem(2), Elem(2)), Elem(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_field(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(make_field(1, 1).unwrap_err(), Error::NotPrime(1));
        assert_eq!(make_field(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(
            make_field(2, 17),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(matches!(
            make_field(257, 2),
            Err(Error::FieldTooLarge { .. })
        ));
        assert!(make_field(2, 16).is_ok());
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(Error::ZeroInverse));
    }

    #[test]
    fn from_modulus_rejects_reducible() {
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(matches!(
            FieldSpec::from_modulus(2, 2, &[1, 0, 1]),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            FieldSpec::from_modulus(2, 2, &[1, 1, 0]),
            Err(Error::BadModulus(_))
        ));
        assert!(matches!(
            FieldSpec::from_modulus(3, 1, &[1, 1]),
            Err(Error::BadModulus(_))
        ));
        // x^2 + x + 2 is irreducible over F_3 but not the default
        let f = FieldSpec::from_modulus(3, 2, &[2, 1, 1]).unwrap();
        assert_ne!(f, make_field(3, 2).unwrap());
    }

    #[test]
    fn tables_match_schoolbook_multiplication() {
        for f in small_fields() {
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(
                        f.mul(a, b),
                        f.mul_schoolbook(a, b),
                        "q={} a={a} b={b}",
                        f.q()
                    );
                }
            }
        }
    }

    #[test]
    fn binary_addition_is_xor() {
        let f = make_field(2, 4).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b).code(), a.code() ^ b.code());
            }
        }
    }

    #[test]
    fn unit_powers_and_inverses() {
        for f in small_fields() {
            for a in f.units() {
                assert_eq!(f.pow(a, (f.q() - 1) as u64), Elem::ONE);
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                assert_eq!(f.mul(a, Elem::ONE), a);
            }
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn sampled_field_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in small_fields()
            .into_iter()
            .chain([make_field(2, 8).unwrap(), make_field(17, 2).unwrap()])
        {
            let q = f.q();
            let mut draw = || Elem::from_raw(rng.next_u32() % q);
            for _ in 0..1000 {
                let (a, b, c) = (draw(), draw(), draw());
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }

    #[test]
    fn large_odd_field_uses_digit_addition() {
        // 17^2 = 289 is above the addition table limit
        let f = make_field(17, 2).unwrap();
        let a = f.from_digits(&[16, 3]).unwrap();
        let b = f.from_digits(&[5, 15]).unwrap();
        assert_eq!(f.digits(f.add(a, b)), vec![4, 1]);
    }

    #[test]
    fn json_round_trip() {
        let f = make_field(3, 2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"p":3,"e":2,"modulus":[1,0,1]}"#);
        let back: FieldSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"p":2,"e":2,"modulus":[1,0,1]}"#).is_err());
    }
}
