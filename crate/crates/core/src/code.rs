//! The code `C(D) = {(y·d_1, ..., y·d_n) : y ∈ F_q^m}` of a defining multiset
//! `D`, evaluated on demand.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::{
    check_len, dot_unchecked, is_zero_vector, EchelonBasis, MatrixF, ProjectiveSpace,
};
use crate::spread::PartialSpread;

/// Ordered multiset `d_1, ..., d_n` of nonzero vectors in F_q^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningSet {
    field: FieldSpec,
    m: usize,
    /// Row-major n × m.
    data: Vec<Elem>,
    rank: usize,
}

impl DefiningSet {
    pub fn new<R: AsRef<[Elem]>>(field: &FieldSpec, m: usize, vectors: &[R]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "ambient dimension must be positive".into(),
            ));
        }
        let mut data = Vec::with_capacity(vectors.len() * m);
        let mut echelon = EchelonBasis::new(field, m);
        for (i, v) in vectors.iter().enumerate() {
            let v = v.as_ref();
            check_len(v, m)?;
            for &c in v {
                field.elem(c.code())?;
            }
            if is_zero_vector(v) {
                return Err(Error::ZeroInDefiningSet(i));
            }
            echelon.insert(v);
            data.extend_from_slice(v);
        }
        Ok(DefiningSet {
            field: field.clone(),
            m,
            data,
            rank: echelon.rank(),
        })
    }

    /// `D = ⋃ (E_i \ {0})`: each member's nonzero vectors in enumeration
    /// order, members in spread order.
    pub fn from_spread(spread: &PartialSpread) -> DefiningSet {
        let field = spread.field();
        let vectors: Vec<Vec<Elem>> = spread
            .members()
            .iter()
            .flat_map(|u| u.vectors(field).skip(1))
            .collect();
        DefiningSet::new(field, spread.m(), &vectors).expect("subspace vectors are valid")
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Code length `n`.
    pub fn len(&self) -> usize {
        self.data.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// `r(D)`, the dimension of `Span(D)`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize) -> &[Elem] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.data.chunks(self.m)
    }

    pub fn require_full_rank(&self) -> Result<()> {
        if self.rank == self.m {
            Ok(())
        } else {
            Err(Error::RankDeficient {
                rank: self.rank,
                m: self.m,
            })
        }
    }

    pub(crate) fn evaluate(&self, y: &[Elem]) -> Vec<Elem> {
        self.iter()
            .map(|d| dot_unchecked(&self.field, y, d))
            .collect()
    }

    pub fn codeword(&self, y: &[Elem]) -> Result<Codeword> {
        check_len(y, self.m)?;
        Ok(Codeword {
            message: y.to_vec(),
            values: self.evaluate(y),
        })
    }

    /// `wt(c(y))` without materializing the codeword.
    pub fn weight_of(&self, y: &[Elem]) -> usize {
        self.iter()
            .filter(|d| !dot_unchecked(&self.field, y, d).is_zero())
            .count()
    }

    /// Weight distribution over all `q^m - 1` nonzero messages, computed from
    /// one representative per scalar class with multiplicity `q - 1`.
    pub fn weight_distribution(&self) -> Result<WeightDistribution> {
        self.require_full_rank()?;
        let space = ProjectiveSpace::new(&self.field, self.m);
        let per_class = (self.field.q() - 1) as u64;
        let counts = (0..space.len())
            .into_par_iter()
            .fold(BTreeMap::new, |mut acc, i| {
                *acc.entry(self.weight_of(&space.get(i))).or_insert(0) += per_class;
                acc
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (w, c) in b {
                    *a.entry(w).or_insert(0) += c;
                }
                a
            });
        Ok(WeightDistribution(counts))
    }

    /// The m × n matrix with columns `d_1, ..., d_n`.
    pub fn generator_matrix(&self) -> MatrixF {
        let rows: Vec<&[Elem]> = self.iter().collect();
        MatrixF::from_rows(&self.field, self.m, &rows)
            .expect("defining set rows have length m")
            .transpose()
    }

    /// Whether `self` is a sub-multiset of `other`.
    pub fn is_sub_multiset_of(&self, other: &DefiningSet) -> bool {
        if self.field != other.field || self.m != other.m {
            return false;
        }
        let mut counts: BTreeMap<&[Elem], isize> = BTreeMap::new();
        for d in other.iter() {
            *counts.entry(d).or_insert(0) += 1;
        }
        self.iter().all(|d| match counts.get_mut(d) {
            Some(c) if *c > 0 => {
                *c -= 1;
                true
            }
            _ => false,
        })
    }
}

pub fn defining_set(spread: &PartialSpread) -> DefiningSet {
    DefiningSet::from_spread(spread)
}

pub fn codeword(y: &[Elem], d: &DefiningSet) -> Result<Codeword> {
    d.codeword(y)
}

pub fn weight_distribution(d: &DefiningSet) -> Result<WeightDistribution> {
    d.weight_distribution()
}

pub fn generator_matrix(d: &DefiningSet) -> MatrixF {
    d.generator_matrix()
}

/// A codeword together with the message that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub message: Vec<Elem>,
    pub values: Vec<Elem>,
}

impl Codeword {
    pub fn weight(&self) -> usize {
        weight(&self.values)
    }

    pub fn support(&self) -> Vec<usize> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Hamming weight.
pub fn weight(values: &[Elem]) -> usize {
    values.iter().filter(|c| !c.is_zero()).count()
}

/// Whether `v` covers `u`, i.e. `Suppt(u) ⊆ Suppt(v)`.
pub fn covers(u: &[Elem], v: &[Elem]) -> Result<bool> {
    check_len(v, u.len())?;
    Ok(u.iter().zip(v).all(|(a, b)| a.is_zero() || !b.is_zero()))
}

/// Number of nonzero messages per codeword weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightDistribution(pub BTreeMap<usize, u64>);

impl WeightDistribution {
    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    /// Smallest nonzero weight.
    pub fn min_weight(&self) -> Option<usize> {
        self.0.keys().copied().find(|&w| w > 0)
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.0.keys().copied().rev().find(|&w| w > 0)
    }

    pub fn count(&self, w: usize) -> u64 {
        self.0.get(&w).copied().unwrap_or(0)
    }

    /// Sorted `[[weight, count], ...]`.
    pub fn pairs(&self) -> Vec<(usize, u64)> {
        self.0.iter().map(|(&w, &c)| (w, c)).collect()
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(usize, u64)>::deserialize(d)?;
        Ok(WeightDistribution(pairs.into_iter().collect()))
    }
}

/// Rows of element codes separated by single spaces, one line per row.
pub fn matrix_to_text(a: &MatrixF) -> String {
    let mut out = String::new();
    for row in a.rows() {
        let line: Vec<String> = row.iter().map(|c| c.code().to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct CodeJsonOut<'a> {
    field: &'a FieldSpec,
    m: usize,
    defining_set: Vec<&'a [Elem]>,
}

#[derive(Deserialize)]
struct CodeJsonIn {
    field: FieldSpec,
    m: usize,
    defining_set: Vec<Vec<u32>>,
}

impl DefiningSet {
    /// `{"field": {...}, "m": int, "defining_set": [[int,...],...]}`
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(CodeJsonOut {
            field: &self.field,
            m: self.m,
            defining_set: self.iter().collect(),
        })
        .expect("code serializes")
    }

    pub fn from_json(value: serde_json::Value) -> Result<DefiningSet> {
        let raw: CodeJsonIn = serde_json::from_value(value)?;
        let vectors = raw
            .defining_set
            .iter()
            .map(|v| {
                v.iter()
                    .map(|&c| raw.field.elem(c))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        DefiningSet::new(&raw.field, raw.m, &vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::linalg::{all_vectors, scale};
    use crate::spread::{companion_quadruple, desarguesian_spread, eb_family};

    fn desarguesian_prefix(p: u32, e: u32, k: usize, s: usize) -> DefiningSet {
        let f = make_field(p, e).unwrap();
        let d = desarguesian_spread(&f, k).unwrap();
        let idx: Vec<usize> = (0..s).collect();
        DefiningSet::from_spread(&d.subfamily(&idx).unwrap())
    }

    #[test]
    fn lengths_and_ranks() {
        let d = desarguesian_prefix(2, 1, 2, 3);
        assert_eq!((d.len(), d.rank()), (9, 4));
        let d = desarguesian_prefix(3, 1, 2, 3);
        assert_eq!((d.len(), d.rank()), (24, 4));
        let full =
            DefiningSet::from_spread(&desarguesian_spread(&make_field(2, 1).unwrap(), 2).unwrap());
        assert_eq!(full.len(), 15);
        let mut seen: Vec<Vec<Elem>> = full.iter().map(<[Elem]>::to_vec).collect();
        seen.sort();
        let mut all: Vec<Vec<Elem>> = all_vectors(full.field(), 4).skip(1).collect();
        all.sort();
        assert_eq!(seen, all);
    }

    #[test]
    fn rejects_zero_and_bad_lengths() {
        let f = make_field(2, 1).unwrap();
        let z = vec![Elem::ZERO; 2];
        assert_eq!(
            DefiningSet::new(&f, 2, &[vec![Elem::ONE, Elem::ZERO], z]),
            Err(Error::ZeroInDefiningSet(1))
        );
        assert!(matches!(
            DefiningSet::new(&f, 2, &[vec![Elem::ONE]]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn codeword_linearity_and_zero() {
        let d = desarguesian_prefix(3, 1, 2, 3);
        let f = d.field().clone();
        assert_eq!(d.codeword(&[Elem::ZERO; 4]).unwrap().weight(), 0);
        let y: Vec<Elem> = [1, 2, 0, 1].iter().map(|&c| f.elem(c).unwrap()).collect();
        let c = d.codeword(&y).unwrap();
        let two = f.elem(2).unwrap();
        let c2 = d.codeword(&scale(&f, two, &y)).unwrap();
        assert_eq!(c2.values, scale(&f, two, &c.values));
        assert_eq!(c2.weight(), c.weight());
        assert!(d.codeword(&y[..3]).is_err());
    }

    #[test]
    fn weight_in_dual_member_q2() {
        // q=2, k=2, s=3: y ∈ E_1^⊥ \ {0} has weight 9 - 3 - 2 = 4
        let f = make_field(2, 1).unwrap();
        let spread = desarguesian_spread(&f, 2)
            .unwrap()
            .subfamily(&[0, 1, 2])
            .unwrap();
        let d = DefiningSet::from_spread(&spread);
        let dual = spread.members()[0].orthogonal_complement(&f);
        for y in dual.vectors(&f).skip(1) {
            let c = d.codeword(&y).unwrap();
            let by_hand = d
                .iter()
                .filter(|x| !crate::linalg::dot(&f, x, &y).unwrap().is_zero())
                .count();
            assert_eq!(c.weight(), 4);
            assert_eq!(by_hand, 4);
        }
    }

    #[test]
    fn generic_weight_q3() {
        let f = make_field(3, 1).unwrap();
        let spread = desarguesian_spread(&f, 2)
            .unwrap()
            .subfamily(&[0, 1, 2])
            .unwrap();
        let dual = spread.dual().unwrap();
        let d = DefiningSet::from_spread(&spread);
        let generic = all_vectors(&f, 4)
            .skip(1)
            .find(|y| dual.member_containing(y).is_none())
            .unwrap();
        assert_eq!(d.weight_of(&generic), 18);
    }

    #[test]
    fn covering_relation() {
        let f = make_field(3, 1).unwrap();
        let v: Vec<Elem> = [1, 0, 2, 1].iter().map(|&c| f.elem(c).unwrap()).collect();
        for a in f.elements() {
            assert!(covers(&scale(&f, a, &v), &v).unwrap());
        }
        assert!(!covers(&v, &[Elem::ZERO; 4]).unwrap());
        assert!(covers(&[Elem::ZERO; 4], &v).unwrap());
        assert!(covers(&v, &v[..3]).is_err());
    }

    #[test]
    fn weight_distribution_q2_s3() {
        let d = desarguesian_prefix(2, 1, 2, 3);
        let w = d.weight_distribution().unwrap();
        assert_eq!(w.pairs(), vec![(4, 9), (6, 6)]);
        assert_eq!(w.total(), 15);
        assert_eq!(serde_json::to_string(&w).unwrap(), "[[4,9],[6,6]]");
    }

    #[test]
    fn weight_distribution_counts_every_message() {
        for (p, e, k, s) in [(3, 1, 2, 3), (2, 2, 2, 4), (3, 1, 1, 2)] {
            let d = desarguesian_prefix(p, e, k, s);
            let w = d.weight_distribution().unwrap();
            let mut direct = BTreeMap::new();
            for y in all_vectors(d.field(), d.m()).skip(1) {
                *direct.entry(d.weight_of(&y)).or_insert(0u64) += 1;
            }
            assert_eq!(w.0, direct);
            let q = d.field().q() as u64;
            assert_eq!(w.total(), q.pow(d.m() as u32) - 1);
            assert!(w.0.values().all(|c| c % (q - 1) == 0));
        }
    }

    #[test]
    fn f4_eb_and_quadruple_share_distribution() {
        let f = make_field(2, 2).unwrap();
        let eb =
            DefiningSet::from_spread(&eb_family(&f, 2, &f.elements().collect::<Vec<_>>()).unwrap());
        let quad = DefiningSet::from_spread(&companion_quadruple(&f, 2).unwrap());
        assert_eq!(
            eb.weight_distribution().unwrap(),
            quad.weight_distribution().unwrap()
        );
    }

    #[test]
    fn rank_deficient_distribution_rejected() {
        let f = make_field(2, 1).unwrap();
        let d = DefiningSet::new(&f, 3, &[vec![Elem::ONE, Elem::ZERO, Elem::ZERO]]).unwrap();
        assert_eq!(
            d.weight_distribution(),
            Err(Error::RankDeficient { rank: 1, m: 3 })
        );
    }

    #[test]
    fn generator_matrix_columns() {
        let d = desarguesian_prefix(2, 1, 2, 3);
        let g = d.generator_matrix();
        assert_eq!(g.shape(), (4, 9));
        assert_eq!(g.rank(), d.rank());
        for (j, col) in d.iter().enumerate() {
            assert_eq!(g.column(j), col);
        }
        let text = matrix_to_text(&g);
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().next().unwrap().split(' ').count(), 9);
    }

    #[test]
    fn sub_multiset() {
        let small = desarguesian_prefix(2, 1, 2, 3);
        let big = desarguesian_prefix(2, 1, 2, 5);
        assert!(small.is_sub_multiset_of(&big));
        assert!(!big.is_sub_multiset_of(&small));
        assert!(small.is_sub_multiset_of(&small));
    }

    #[test]
    fn json_round_trip() {
        let d = desarguesian_prefix(3, 1, 2, 3);
        let j = d.to_json();
        assert_eq!(j["m"], 4);
        assert_eq!(j["defining_set"].as_array().unwrap().len(), 24);
        assert_eq!(DefiningSet::from_json(j).unwrap(), d);
    }
}
