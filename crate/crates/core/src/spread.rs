//! Partial spreads of F_q^{2k}: validation, the explicit families, duals and
//! seeded random generation.
//!
//! A partial spread is an ordered list of k-dimensional subspaces that
//! pairwise meet only in the zero vector. Member order is significant: it
//! fixes the column order of every code built from the spread.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::{span_dim, MatrixF, Subspace, SubspaceJson};
use crate::poly;

/// Consecutive rejected draws after which random generation gives up.
pub const MAX_CONSECUTIVE_REJECTIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSpread {
    field: FieldSpec,
    k: usize,
    members: Vec<Subspace>,
}

/// `q^k + 1`, saturating.
pub fn max_spread_size(field: &FieldSpec, k: usize) -> usize {
    (field.q() as usize)
        .checked_pow(k as u32)
        .map_or(usize::MAX, |n| n.saturating_add(1))
}

impl PartialSpread {
    /// Checks that `candidate` is a partial spread of F_q^m, m even, and
    /// wraps it. Diagnostics name the offending member or pair.
    pub fn validate(field: &FieldSpec, candidate: Vec<Subspace>) -> Result<PartialSpread> {
        let s = candidate.len();
        if s < 2 {
            return Err(Error::TooFewMembers(s));
        }
        let m = candidate[0].ambient();
        if let Some(bad) = candidate.iter().find(|u| u.ambient() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.ambient(),
            });
        }
        if !m.is_multiple_of(2) || m == 0 {
            return Err(Error::OddAmbient(m));
        }
        let k = m / 2;
        if let Some((index, u)) = candidate.iter().enumerate().find(|(_, u)| u.dim() != k) {
            return Err(Error::WrongMemberDimension {
                index,
                expected: k,
                found: u.dim(),
            });
        }
        let max = max_spread_size(field, k);
        if s > max {
            return Err(Error::TooManyMembers { s, max });
        }
        for i in 0..s {
            for j in i + 1..s {
                if !complementary(field, &candidate[i], &candidate[j]) {
                    let common = candidate[i].intersection(field, &candidate[j])?;
                    return Err(Error::NontrivialIntersection {
                        i,
                        j,
                        witness: common.basis()[0].clone(),
                    });
                }
            }
        }
        Ok(PartialSpread {
            field: field.clone(),
            k,
            members: candidate,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Ambient dimension `m = 2k`.
    pub fn m(&self) -> usize {
        2 * self.k
    }

    /// Number of members `s`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn is_complete(&self) -> bool {
        self.len() == max_spread_size(&self.field, self.k)
    }

    /// `{E_1^⊥, ..., E_s^⊥}` in the same order.
    pub fn dual(&self) -> Result<PartialSpread> {
        let members = self
            .members
            .iter()
            .map(|u| u.orthogonal_complement(&self.field))
            .collect();
        PartialSpread::validate(&self.field, members)
    }

    /// The members at `indices`, in the given order.
    pub fn subfamily(&self, indices: &[usize]) -> Result<PartialSpread> {
        let mut seen = vec![false; self.len()];
        let mut members = Vec::with_capacity(indices.len());
        for &index in indices {
            if index >= self.len() {
                return Err(Error::IndexOutOfRange {
                    index,
                    len: self.len(),
                });
            }
            if std::mem::replace(&mut seen[index], true) {
                return Err(Error::DuplicateIndex(index));
            }
            members.push(self.members[index].clone());
        }
        PartialSpread::validate(&self.field, members)
    }

    /// Index of the member containing the nonzero vector `v`, if any.
    pub fn member_containing(&self, v: &[Elem]) -> Option<usize> {
        self.members.iter().position(|u| u.contains(&self.field, v))
    }
}

/// `U ∩ V = {0}` for two k-subspaces of F_q^{2k}, i.e. `U + V` is everything.
fn complementary(field: &FieldSpec, u: &Subspace, v: &Subspace) -> bool {
    let rows: Vec<&Vec<Elem>> = u.basis().iter().chain(v.basis()).collect();
    span_dim(field, u.ambient(), &rows).expect("common ambient") == u.dim() + v.dim()
}

pub fn dual_spread(spread: &PartialSpread) -> Result<PartialSpread> {
    spread.dual()
}

pub fn subfamily(spread: &PartialSpread, indices: &[usize]) -> Result<PartialSpread> {
    spread.subfamily(indices)
}

/// Row space of the k × 2k block matrix `[left | right]`.
fn graph_subspace(field: &FieldSpec, left: &MatrixF, right: &MatrixF) -> Subspace {
    let (k, _) = left.shape();
    let rows: Vec<Vec<Elem>> = (0..k)
        .map(|i| left.row(i).iter().chain(right.row(i)).copied().collect())
        .collect();
    Subspace::span(field, 2 * k, &rows).expect("rows have length 2k")
}

/// `{(x, x·M) : x ∈ F_q^k}`
pub fn graph_of(field: &FieldSpec, m: &MatrixF) -> Subspace {
    let (k, _) = m.shape();
    graph_subspace(field, &MatrixF::identity(field, k), m)
}

fn scalar_matrix(field: &FieldSpec, k: usize, b: Elem) -> MatrixF {
    let mut a = MatrixF::zeros(field, k, k);
    for i in 0..k {
        a.set(i, i, b);
    }
    a
}

/// `E_b = Span{e_i + b e_{k+i} : 1 ≤ i ≤ k}` for each `b` in `subset`,
/// ordered by element code.
pub fn eb_family(field: &FieldSpec, k: usize, subset: &[Elem]) -> Result<PartialSpread> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let mut bs = subset.to_vec();
    bs.sort();
    if let Some(w) = bs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidParameter(format!(
            "element {} repeated in subset",
            w[0]
        )));
    }
    if bs.len() < 2 {
        return Err(Error::TooFewMembers(bs.len()));
    }
    for b in &bs {
        field.elem(b.code())?;
    }
    let members = bs
        .iter()
        .map(|&b| graph_of(field, &scalar_matrix(field, k, b)))
        .collect();
    PartialSpread::validate(field, members)
}

/// Companion matrix of the monic `f` of degree k, in the row convention
/// `x ↦ x·M`: row i is `e_{i+1}` for i < k-1, and the last row holds
/// `(-f_0, ..., -f_{k-1})`. Its characteristic polynomial is `f`.
pub fn companion_matrix(field: &FieldSpec, f: &[Elem]) -> MatrixF {
    let k = poly::degree(f).expect("nonzero polynomial");
    let mut c = MatrixF::zeros(field, k, k);
    for i in 0..k.saturating_sub(1) {
        c.set(i, i + 1, Elem::ONE);
    }
    for (j, &fj) in f[..k].iter().enumerate() {
        c.set(k - 1, j, field.neg(fj));
    }
    c
}

/// Matrix of `z ↦ z·λ` on `F_q[t]/(f)` in the basis `1, t, ..., t^{k-1}`;
/// row i holds the coordinates of `t^i λ`.
pub fn multiplication_matrix(field: &FieldSpec, f: &[Elem], lambda: &[Elem]) -> MatrixF {
    let k = poly::degree(f).expect("nonzero polynomial");
    assert_eq!(lambda.len(), k);
    let mut m = MatrixF::zeros(field, k, k);
    let mut cur = lambda.to_vec();
    for i in 0..k {
        for (j, &c) in cur.iter().enumerate() {
            m.set(i, j, c);
        }
        // cur ← t·cur mod f
        let top = cur[k - 1];
        cur.rotate_right(1);
        cur[0] = Elem::ZERO;
        for (j, c) in cur.iter_mut().enumerate() {
            *c = field.sub(*c, field.mul(top, f[j]));
        }
    }
    m
}

/// The complete Desarguesian spread of F_q^{2k}: `E_λ = {(x, x·M_λ)}` for
/// every λ ∈ F_{q^k} = F_q[t]/(f) in code order, then `E_∞ = {(0, x)}`.
///
/// λ's code is `Σ code(c_i) q^i` for `λ = Σ c_i t^i`, and `f` is the smallest
/// monic irreducible of degree k.
pub fn desarguesian_spread(field: &FieldSpec, k: usize) -> Result<PartialSpread> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let f = poly::find_irreducible(field, k);
    let q = field.q() as u64;
    let count = q
        .checked_pow(k as u32)
        .filter(|&n| n <= 1 << 20)
        .ok_or_else(|| Error::InvalidParameter("q^k too large for a complete spread".into()))?;
    let mut members = Vec::with_capacity(count as usize + 1);
    for code in 0..count {
        let mut lambda = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            lambda.push(Elem::from_raw((c % q) as u32));
            c /= q;
        }
        members.push(graph_of(field, &multiplication_matrix(field, &f, &lambda)));
    }
    members.push(graph_subspace(
        field,
        &MatrixF::zeros(field, k, k),
        &MatrixF::identity(field, k),
    ));
    PartialSpread::validate(field, members)
}

/// The four-member spread `{(x,0)}, {(0,x)}, {(x,x)}, {(x, x·M)}` with `M`
/// the companion matrix of the smallest monic irreducible of degree k.
///
/// Requires `k ≥ 2`. For k = 1 the companion matrix is `[0]`, so the last
/// member would coincide with the first.
pub fn companion_quadruple(field: &FieldSpec, k: usize) -> Result<PartialSpread> {
    if k < 2 {
        return Err(Error::InvalidParameter(
            "the companion-matrix quadruple needs k >= 2".into(),
        ));
    }
    let f = poly::find_irreducible(field, k);
    let zero = MatrixF::zeros(field, k, k);
    let id = MatrixF::identity(field, k);
    let members = vec![
        graph_subspace(field, &id, &zero),
        graph_subspace(field, &zero, &id),
        graph_subspace(field, &id, &id),
        graph_subspace(field, &id, &companion_matrix(field, &f)),
    ];
    PartialSpread::validate(field, members)
}

/// Seeded greedy partial spread: random full-rank k × 2k matrices are drawn
/// and a row space is kept iff it meets every kept member trivially. Gives up
/// after [`MAX_CONSECUTIVE_REJECTIONS`] rejections in a row.
///
/// The stream is ChaCha20 seeded through `seed_from_u64(seed)`; each matrix
/// entry is `next_u32() % q`, row-major.
pub fn random_partial_spread(
    field: &FieldSpec,
    k: usize,
    s: usize,
    seed: u64,
) -> Result<PartialSpread> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let max = max_spread_size(field, k);
    if s < 2 {
        return Err(Error::TooFewMembers(s));
    }
    if s > max {
        return Err(Error::TooManyMembers { s, max });
    }
    let m = 2 * k;
    let q = field.q();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut members: Vec<Subspace> = Vec::with_capacity(s);
    let mut rejections = 0;
    while members.len() < s {
        let candidate = loop {
            let rows: Vec<Vec<Elem>> = (0..k)
                .map(|_| (0..m).map(|_| Elem::from_raw(rng.next_u32() % q)).collect())
                .collect();
            let u = Subspace::span(field, m, &rows)?;
            if u.dim() == k {
                break u;
            }
        };
        if members.iter().all(|u| complementary(field, u, &candidate)) {
            members.push(candidate);
            rejections = 0;
        } else {
            rejections += 1;
            if rejections >= MAX_CONSECUTIVE_REJECTIONS {
                return Err(Error::TargetNotReached {
                    target: s,
                    reached: members.len(),
                });
            }
        }
    }
    PartialSpread::validate(field, members)
}

#[derive(Serialize)]
struct SpreadJsonOut<'a> {
    field: &'a FieldSpec,
    k: usize,
    members: &'a [Subspace],
}

#[derive(Deserialize)]
struct SpreadJsonIn {
    field: FieldSpec,
    k: usize,
    members: Vec<SubspaceJson>,
}

impl PartialSpread {
    /// `{"field": {...}, "k": int, "members": [subspace, ...]}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SpreadJsonOut {
            field: &self.field,
            k: self.k,
            members: &self.members,
        })
        .expect("spread serializes")
    }

    pub fn from_json(value: serde_json::Value) -> Result<PartialSpread> {
        let raw: SpreadJsonIn = serde_json::from_value(value)?;
        let members = raw
            .members
            .into_iter()
            .map(|u| u.into_subspace(&raw.field))
            .collect::<Result<Vec<_>>>()?;
        let spread = PartialSpread::validate(&raw.field, members)?;
        if spread.k != raw.k {
            return Err(Error::Json(format!(
                "declared k = {} but members have dimension {}",
                raw.k, spread.k
            )));
        }
        Ok(spread)
    }
}
