//! Univariate polynomials over F_q, stored as coefficient vectors with the
//! constant term first.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

fn trim(f: &[Elem]) -> &[Elem] {
    let len = f.iter().rposition(|c| !c.is_zero()).map_or(0, |i| i + 1);
    &f[..len]
}

/// Degree of `f`, or `None` for the zero polynomial.
pub fn degree(f: &[Elem]) -> Option<usize> {
    trim(f).len().checked_sub(1)
}

/// Remainder of `a` modulo the monic polynomial `b`.
pub fn rem_monic(field: &FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let b = trim(b);
    let db = b.len() - 1;
    debug_assert_eq!(b[db], Elem::ONE);
    let mut r = trim(a).to_vec();
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top];
        if !c.is_zero() {
            let shift = top - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = field.sub(r[shift + i], field.mul(c, bi));
            }
        }
        r.pop();
        let len = trim(&r).len();
        r.truncate(len);
    }
    r
}

pub fn eval(field: &FieldSpec, f: &[Elem], x: Elem) -> Elem {
    f.iter()
        .rev()
        .fold(Elem::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

/// The monic polynomial of degree `deg` whose lower coefficients are the
/// base-q digits of `index` (constant term = lowest digit).
fn monic_from_index(field: &FieldSpec, deg: usize, mut index: u64) -> Vec<Elem> {
    let q = field.q() as u64;
    let mut f = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        f.push(Elem::from_raw((index % q) as u32));
        index /= q;
    }
    f.push(Elem::ONE);
    f
}

/// Decides irreducibility of a monic `f` of degree ≥ 1 by trial division
/// against every monic polynomial of degree `1..=deg(f)/2`.
pub fn is_irreducible(field: &FieldSpec, f: &[Elem]) -> Result<bool> {
    let f = trim(f);
    let Some(&lead) = f.last() else {
        return Err(Error::ConstantPolynomial);
    };
    if lead != Elem::ONE {
        return Err(Error::NotMonic);
    }
    let deg = f.len() - 1;
    if deg == 0 {
        return Err(Error::ConstantPolynomial);
    }
    let q = field.q() as u64;
    for d in 1..=deg / 2 {
        let count = q.pow(d as u32);
        for index in 0..count {
            let g = monic_from_index(field, d, index);
            if rem_monic(field, f, &g).is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest monic irreducible polynomial of degree `k` over `field`.
///
/// Candidates `x^k + c_{k-1} x^{k-1} + ... + c_0` are ordered by the integer
/// `Σ c_i q^i`, so the coefficient of `x^{k-1}` is most significant and the
/// constant term is compared last. For `k = 1` this is `x`.
pub fn find_irreducible(field: &FieldSpec, k: usize) -> Vec<Elem> {
    assert!(k >= 1, "irreducible polynomials have degree at least 1");
    let count = (field.q() as u64).pow(k as u32);
    (0..count)
        .map(|i| monic_from_index(field, k, i))
        .find(|f| is_irreducible(field, f).expect("candidate is monic"))
        .expect("irreducible polynomials exist in every degree")
}
