//! Minimality of `C(D)`, decided three ways.
//!
//! * geometric: `c(y)` is minimal iff `V(y,D) = Span{d ∈ D : y·d = 0}` has
//!   dimension `m - 1`; the code is minimal iff this holds for every `y ≠ 0`.
//! * brute force: compare supports of all pairs of codewords directly.
//! * Ashikhmin–Barg: `q·w_min > (q-1)·w_max` is sufficient, never necessary.
//!
//! Messages are scanned in projective order (one normalized representative per
//! scalar class, lexicographic), and witnesses are always the first failure in
//! that order regardless of how the work is split across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{covers, DefiningSet, WeightDistribution};
use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};
use crate::linalg::{
    check_len, dot_unchecked, is_proportional, is_zero_vector, nullspace, EchelonBasis,
    ProjectiveSpace,
};

/// `q^m` bound for [`check_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Minimal,
    NotMinimal,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Geometric,
    Bruteforce,
    AbBound,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Minimal => "Minimal",
            Verdict::NotMinimal => "NotMinimal",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Geometric => "geometric",
            Method::Bruteforce => "bruteforce",
            Method::AbBound => "ab_bound",
        })
    }
}

/// `checked` counts the messages (scalar classes) examined. The dimension
/// fields are only filled by the geometric check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub checked: u64,
    pub min_vdim: Option<usize>,
    pub max_vdim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub verdict: Verdict,
    pub method: Method,
    /// `y₀` whose codeword is not minimal.
    pub witness: Option<Vec<Elem>>,
    /// `x₀`, not a multiple of `y₀`, with `c(x₀) ⪯ c(y₀)`.
    pub certificate: Option<Vec<Elem>>,
    pub stats: Stats,
}

impl MinimalityReport {
    /// Re-checks the witness/certificate pair against `d`. Reports without a
    /// pair replay trivially.
    pub fn replay(&self, d: &DefiningSet) -> bool {
        match (&self.witness, &self.certificate) {
            (Some(y), Some(x)) => certificate_holds(d, y, x),
            (None, None) => self.verdict != Verdict::NotMinimal,
            _ => false,
        }
    }
}

fn certificate_holds(d: &DefiningSet, y: &[Elem], x: &[Elem]) -> bool {
    if y.len() != d.m() || x.len() != d.m() || is_zero_vector(y) {
        return false;
    }
    let cy = d.evaluate(y);
    let cx = d.evaluate(x);
    !is_proportional(d.field(), x, y) && covers(&cx, &cy).unwrap_or(false)
}

/// `H(y,D)` as positions into `D`, with `dim V(y,D)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperplaneRestriction {
    pub y: Vec<Elem>,
    pub members: Vec<usize>,
    pub v_dim: usize,
}

impl HyperplaneRestriction {
    pub fn vectors<'a>(&'a self, d: &'a DefiningSet) -> impl Iterator<Item = &'a [Elem]> + 'a {
        self.members.iter().map(move |&i| d.get(i))
    }
}

fn check_message(d: &DefiningSet, y: &[Elem]) -> Result<()> {
    check_len(y, d.m())?;
    if is_zero_vector(y) {
        return Err(Error::ZeroMessage);
    }
    Ok(())
}

pub fn restriction(y: &[Elem], d: &DefiningSet) -> Result<HyperplaneRestriction> {
    check_message(d, y)?;
    let f = d.field();
    let members: Vec<usize> = (0..d.len())
        .filter(|&i| dot_unchecked(f, y, d.get(i)).is_zero())
        .collect();
    let mut e = EchelonBasis::new(f, d.m());
    for &i in &members {
        e.insert(d.get(i));
    }
    Ok(HyperplaneRestriction {
        y: y.to_vec(),
        members,
        v_dim: e.rank(),
    })
}

/// `dim V(y,D)`, stopping as soon as it reaches `m - 1`.
fn v_dim(d: &DefiningSet, y: &[Elem]) -> usize {
    let f = d.field();
    let cap = d.m() - 1;
    let mut e = EchelonBasis::new(f, d.m());
    for x in d.iter() {
        if dot_unchecked(f, y, x).is_zero() && e.insert(x) && e.rank() == cap {
            break;
        }
    }
    e.rank()
}

pub fn is_codeword_minimal(y: &[Elem], d: &DefiningSet) -> Result<bool> {
    check_message(d, y)?;
    d.require_full_rank()?;
    Ok(v_dim(d, y) == d.m() - 1)
}

/// Minimality via `dim V(y,D) = m - 1` for every projective point `y`.
pub fn check_geometric(d: &DefiningSet) -> Result<MinimalityReport> {
    d.require_full_rank()?;
    let space = ProjectiveSpace::new(d.field(), d.m());
    let dims: Vec<usize> = (0..space.len())
        .into_par_iter()
        .map(|i| v_dim(d, &space.get(i)))
        .collect();
    let stats = Stats {
        checked: dims.len() as u64,
        min_vdim: dims.iter().copied().min(),
        max_vdim: dims.iter().copied().max(),
    };
    let failure = dims.iter().position(|&v| v < d.m() - 1);
    Ok(match failure {
        None => MinimalityReport {
            verdict: Verdict::Minimal,
            method: Method::Geometric,
            witness: None,
            certificate: None,
            stats,
        },
        Some(i) => {
            let y0 = space.get(i as u64);
            let x0 = covering_certificate(&y0, d)?;
            MinimalityReport {
                verdict: Verdict::NotMinimal,
                method: Method::Geometric,
                witness: Some(y0),
                certificate: Some(x0),
                stats,
            }
        }
    })
}

/// The lexicographically smallest `x₀ ∈ V(y₀,D)^⊥` outside `Span{y₀}`.
///
/// Since `c(x) ⪯ c(y₀)` exactly when `x` kills every element of `H(y₀,D)`,
/// any such `x₀` covers-witnesses the non-minimality of `c(y₀)`. The result is
/// replayed against the code before it is returned.
pub fn covering_certificate(y0: &[Elem], d: &DefiningSet) -> Result<Vec<Elem>> {
    d.require_full_rank()?;
    let h = restriction(y0, d)?;
    if h.v_dim == d.m() - 1 {
        return Err(Error::NoCertificate);
    }
    let f = d.field();
    let rows: Vec<&[Elem]> = h.vectors(d).collect();
    let perp = nullspace(f, d.m(), &rows)?;
    let x0 = perp
        .vectors(f)
        .filter(|x| !is_proportional(f, x, y0))
        .min()
        .expect("V(y0,D)^⊥ has dimension at least 2");
    assert!(
        certificate_holds(d, y0, &x0),
        "covering certificate failed replay"
    );
    Ok(x0)
}

fn support_bits(d: &DefiningSet, y: &[Elem]) -> Vec<u64> {
    let mut bits = vec![0u64; d.len().div_ceil(64)];
    for (i, x) in d.iter().enumerate() {
        if !dot_unchecked(d.field(), y, x).is_zero() {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn subset_of(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn check_bruteforce_size(f: &FieldSpec, m: usize) -> Result<()> {
    let within = (f.q() as u64)
        .checked_pow(m as u32)
        .is_some_and(|n| n <= BRUTEFORCE_LIMIT);
    if within {
        Ok(())
    } else {
        Err(Error::BruteForceTooLarge { q: f.q(), m })
    }
}

/// Minimality straight from the definition: `c(y)` is minimal iff no codeword
/// other than its multiples has support inside `Suppt(c(y))`.
pub fn check_bruteforce(d: &DefiningSet) -> Result<MinimalityReport> {
    d.require_full_rank()?;
    check_bruteforce_size(d.field(), d.m())?;
    let space = ProjectiveSpace::new(d.field(), d.m());
    let supports: Vec<Vec<u64>> = (0..space.len())
        .into_par_iter()
        .map(|i| support_bits(d, &space.get(i)))
        .collect();
    let covered_by = |yi: usize| {
        (0..supports.len()).find(|&xi| xi != yi && subset_of(&supports[xi], &supports[yi]))
    };
    let first = (0..supports.len())
        .into_par_iter()
        .find_first(|&yi| covered_by(yi).is_some());
    Ok(match first {
        None => MinimalityReport {
            verdict: Verdict::Minimal,
            method: Method::Bruteforce,
            witness: None,
            certificate: None,
            stats: Stats {
                checked: space.len(),
                min_vdim: None,
                max_vdim: None,
            },
        },
        Some(yi) => {
            let xi = covered_by(yi).expect("found above");
            MinimalityReport {
                verdict: Verdict::NotMinimal,
                method: Method::Bruteforce,
                witness: Some(space.get(yi as u64)),
                certificate: Some(space.get(xi as u64)),
                stats: Stats {
                    checked: yi as u64 + 1,
                    min_vdim: None,
                    max_vdim: None,
                },
            }
        }
    })
}

/// Per-codeword brute force: is `c(y)` covered only by its own multiples?
pub fn is_codeword_minimal_bruteforce(y: &[Elem], d: &DefiningSet) -> Result<bool> {
    check_message(d, y)?;
    d.require_full_rank()?;
    check_bruteforce_size(d.field(), d.m())?;
    let f = d.field();
    let cy = d.evaluate(y);
    let space = ProjectiveSpace::new(f, d.m());
    let covered = (0..space.len()).into_par_iter().any(|i| {
        let x = space.get(i);
        !is_proportional(f, &x, y) && covers(&d.evaluate(&x), &cy).expect("same length")
    });
    Ok(!covered)
}

/// Sufficient condition `w_min / w_max > (q-1)/q`, compared exactly as
/// `q·w_min > (q-1)·w_max`. Failing it proves nothing.
pub fn ab_bound(w: &WeightDistribution, field: &FieldSpec) -> Result<MinimalityReport> {
    let (Some(wmin), Some(wmax)) = (w.min_weight(), w.max_weight()) else {
        return Err(Error::EmptyDistribution);
    };
    let q = field.q() as u64;
    let verdict = if q * wmin as u64 > (q - 1) * wmax as u64 {
        Verdict::Minimal
    } else {
        Verdict::Inconclusive
    };
    Ok(MinimalityReport {
        verdict,
        method: Method::AbBound,
        witness: None,
        certificate: None,
        stats: Stats {
            checked: w.total(),
            min_vdim: None,
            max_vdim: None,
        },
    })
}

/// Geometric verdicts for `D₁ ⊆ D₂`, and whether they respect
/// "`C(D₁)` minimal ⇒ `C(D₂)` minimal".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Monotonicity {
    pub sub_verdict: Verdict,
    pub super_verdict: Verdict,
    pub consistent: bool,
}

pub fn monotonicity_check(sub: &DefiningSet, sup: &DefiningSet) -> Result<Monotonicity> {
    sub.require_full_rank()?;
    sup.require_full_rank()?;
    if !sub.is_sub_multiset_of(sup) {
        return Err(Error::NotSubMultiset);
    }
    let sub_verdict = check_geometric(sub)?.verdict;
    let super_verdict = check_geometric(sup)?.verdict;
    let consistent = !(sub_verdict == Verdict::Minimal && super_verdict == Verdict::NotMinimal);
    Ok(Monotonicity {
        sub_verdict,
        super_verdict,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;
    use crate::linalg::{all_vectors, scale};
    use crate::spread::{companion_quadruple, desarguesian_spread, eb_family, PartialSpread};

    fn prefix(p: u32, e: u32, k: usize, s: usize) -> (PartialSpread, DefiningSet) {
        let f = make_field(p, e).unwrap();
        let idx: Vec<usize> = (0..s).collect();
        let spread = desarguesian_spread(&f, k).unwrap().subfamily(&idx).unwrap();
        let d = DefiningSet::from_spread(&spread);
        (spread, d)
    }

    fn e1(m: usize) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; m];
        v[0] = Elem::ONE;
        v
    }

    #[test]
    fn restriction_dimensions_follow_dual_membership() {
        let (spread, d) = prefix(3, 1, 2, 3);
        let f = spread.field().clone();
        for y in all_vectors(&f, 4).skip(1) {
            let h = restriction(&y, &d).unwrap();
            for (i, u) in spread.members().iter().enumerate() {
                let in_member: Vec<&[Elem]> = h.vectors(&d).filter(|x| u.contains(&f, x)).collect();
                let dim = crate::linalg::span_dim(&f, 4, &in_member).unwrap();
                let in_dual = u.orthogonal_complement(&f).contains(&f, &y);
                assert_eq!(dim, if in_dual { 2 } else { 1 }, "member {i}");
            }
            let two = f.elem(2).unwrap();
            assert_eq!(
                restriction(&scale(&f, two, &y), &d).unwrap().members,
                h.members
            );
        }
        assert_eq!(restriction(&[Elem::ZERO; 4], &d), Err(Error::ZeroMessage));
    }

    #[test]
    fn q2_s3_every_codeword_minimal() {
        let (_, d) = prefix(2, 1, 2, 3);
        for y in all_vectors(d.field(), 4).skip(1) {
            assert!(is_codeword_minimal(&y, &d).unwrap());
        }
        assert_eq!(check_geometric(&d).unwrap().verdict, Verdict::Minimal);
        assert_eq!(check_bruteforce(&d).unwrap().verdict, Verdict::Minimal);
    }

    #[test]
    fn q3_s3_not_minimal_with_certificate() {
        let (_, d) = prefix(3, 1, 2, 3);
        let g = check_geometric(&d).unwrap();
        assert_eq!(g.verdict, Verdict::NotMinimal);
        assert!(g.replay(&d));
        let y0 = g.witness.clone().unwrap();
        assert!(!is_codeword_minimal(&y0, &d).unwrap());
        assert_eq!(restriction(&y0, &d).unwrap().v_dim, 2);
        let b = check_bruteforce(&d).unwrap();
        assert_eq!(b.verdict, Verdict::NotMinimal);
        assert!(b.replay(&d));
        // both scan in the same order and pick the smallest covering x
        assert_eq!(b.witness, g.witness);
        assert_eq!(b.certificate, g.certificate);
    }

    #[test]
    fn eb_family_e1_is_deficient() {
        let f = make_field(2, 2).unwrap();
        let all: Vec<Elem> = f.elements().collect();
        let d = DefiningSet::from_spread(&eb_family(&f, 2, &all).unwrap());
        assert!(!is_codeword_minimal(&e1(4), &d).unwrap());
        assert!(restriction(&e1(4), &d).unwrap().v_dim <= 2);
        let x0 = covering_certificate(&e1(4), &d).unwrap();
        assert!(certificate_holds(&d, &e1(4), &x0));
        let g = check_geometric(&d).unwrap();
        assert_eq!(g.verdict, Verdict::NotMinimal);
    }

    #[test]
    fn quadruple_over_f4_is_minimal_but_ab_inconclusive() {
        let f = make_field(2, 2).unwrap();
        let d = DefiningSet::from_spread(&companion_quadruple(&f, 2).unwrap());
        let g = check_geometric(&d).unwrap();
        assert_eq!(g.verdict, Verdict::Minimal);
        assert_eq!(g.stats.checked, 85);
        assert_eq!(g.stats.min_vdim, Some(3));
        assert_eq!(check_bruteforce(&d).unwrap().verdict, Verdict::Minimal);
        let ab = ab_bound(&d.weight_distribution().unwrap(), &f).unwrap();
        assert_eq!(ab.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn two_member_spreads_fail_for_q_at_least_3() {
        for (p, e) in [(3, 1), (2, 2), (5, 1)] {
            let (_, d) = prefix(p, e, 2, 2);
            let g = check_geometric(&d).unwrap();
            assert_eq!(g.verdict, Verdict::NotMinimal);
            assert!(g.replay(&d));
        }
    }

    #[test]
    fn complete_spread_of_lines_over_f2() {
        let (_, d) = prefix(2, 1, 1, 3);
        assert_eq!(check_bruteforce(&d).unwrap().verdict, Verdict::Minimal);
        assert_eq!(check_geometric(&d).unwrap().verdict, Verdict::Minimal);
    }

    #[test]
    fn certificate_requires_deficient_message() {
        let (_, d) = prefix(2, 1, 2, 3);
        assert_eq!(covering_certificate(&e1(4), &d), Err(Error::NoCertificate));
    }

    #[test]
    fn ab_bound_cases() {
        let (spread, d) = prefix(2, 1, 2, 3);
        let ab = ab_bound(&d.weight_distribution().unwrap(), spread.field()).unwrap();
        assert_eq!(ab.verdict, Verdict::Minimal);
        let (spread, d) = prefix(3, 1, 2, 3);
        let w = d.weight_distribution().unwrap();
        assert_eq!((w.min_weight(), w.max_weight()), (Some(12), Some(18)));
        assert_eq!(
            ab_bound(&w, spread.field()).unwrap().verdict,
            Verdict::Inconclusive
        );
        assert_eq!(
            ab_bound(&WeightDistribution::default(), spread.field()),
            Err(Error::EmptyDistribution)
        );
    }

    #[test]
    fn per_codeword_oracles_agree() {
        for (p, e, s) in [(3, 1, 3), (2, 2, 4), (3, 1, 2)] {
            let (_, d) = prefix(p, e, 2, s);
            for y in ProjectiveSpace::new(d.field(), 4).iter() {
                assert_eq!(
                    is_codeword_minimal(&y, &d).unwrap(),
                    is_codeword_minimal_bruteforce(&y, &d).unwrap(),
                    "{y:?}"
                );
            }
        }
    }

    #[test]
    fn rank_deficient_inputs_rejected() {
        let f = make_field(2, 1).unwrap();
        let d = DefiningSet::new(&f, 2, &[vec![Elem::ONE, Elem::ZERO]]).unwrap();
        assert!(matches!(
            check_geometric(&d),
            Err(Error::RankDeficient { .. })
        ));
        assert!(matches!(
            check_bruteforce(&d),
            Err(Error::RankDeficient { .. })
        ));
        assert!(matches!(
            is_codeword_minimal(&e1(2), &d),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn bruteforce_guard() {
        let f = make_field(2, 1).unwrap();
        let rows: Vec<Vec<Elem>> = (0..22)
            .map(|i| {
                let mut v = vec![Elem::ZERO; 22];
                v[i] = Elem::ONE;
                v
            })
            .collect();
        let d = DefiningSet::new(&f, 22, &rows).unwrap();
        assert_eq!(
            check_bruteforce(&d),
            Err(Error::BruteForceTooLarge { q: 2, m: 22 })
        );
    }

    #[test]
    fn monotonicity() {
        let f = make_field(2, 2).unwrap();
        let quad = DefiningSet::from_spread(&companion_quadruple(&f, 2).unwrap());
        let m = monotonicity_check(&quad, &quad).unwrap();
        assert!(m.consistent);
        assert_eq!(m.sub_verdict, Verdict::Minimal);
        let (_, small) = prefix(2, 2, 2, 3);
        let (_, big) = prefix(2, 2, 2, 6);
        let m = monotonicity_check(&small, &big).unwrap();
        assert!(m.consistent);
        assert_eq!(m.sub_verdict, Verdict::NotMinimal);
        assert_eq!(m.super_verdict, Verdict::Minimal);
        assert_eq!(monotonicity_check(&big, &small), Err(Error::NotSubMultiset));
    }

    #[test]
    fn report_json_shape() {
        let (_, d) = prefix(3, 1, 2, 3);
        let r = check_geometric(&d).unwrap();
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["verdict"], "NotMinimal");
        assert_eq!(j["method"], "geometric");
        assert!(j["witness"].is_array());
        assert_eq!(j["stats"]["checked"], 40);
        let back: MinimalityReport = serde_json::from_value(j).unwrap();
        assert_eq!(back, r);
    }
}
