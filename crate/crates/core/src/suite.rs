//! The reproduction matrix behind `spreadcode verify-paper`.
//!
//! Each row checks one family of claims about spread codes on a fixed set of
//! small instances and reports PASS/FAIL with a one-line detail. Everything is
//! exact and seeded, so a run is fully reproducible.

use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::code::{covers, DefiningSet};
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec};
use crate::linalg::{all_vectors, dot, nullspace, span_dim};
use crate::minimality::{
    ab_bound, check_bruteforce, check_geometric, is_codeword_minimal,
    is_codeword_minimal_bruteforce, monotonicity_check, restriction, Verdict,
};
use crate::spread::{
    companion_quadruple, desarguesian_spread, eb_family, random_partial_spread, PartialSpread,
};

/// Row identifiers, in execution order.
pub const ROWS: [&str; 12] = [
    "thm31",
    "thm32",
    "thm33",
    "thm34",
    "same-weights",
    "weight-law",
    "dual",
    "equivalence",
    "prop21",
    "ab",
    "monotone",
    "structural",
];

pub const RANDOM_SEEDS: [u64; 3] = [1, 2, 3];
/// Instances up to this `q^m` are also checked by brute force.
pub const BRUTEFORCE_CROSSCHECK_LIMIT: u64 = 1 << 16;
pub const PER_INSTANCE_BUDGET: Duration = Duration::from_secs(5);
pub const CODEWORD_SAMPLES: usize = 200;
pub const PAIR_SAMPLES: usize = 1000;
pub const DUALITY_SAMPLES: usize = 500;

#[derive(Debug, Clone, Serialize)]
pub struct RowResult {
    pub row: String,
    pub passed: bool,
    pub instances: usize,
    pub detail: String,
    pub elapsed_ms: u128,
}

/// Which claim an instance is expected to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `s ≥ q + 1`: minimal.
    Large,
    /// `2 ≤ s ≤ 3 ≤ q`: not minimal.
    Small,
    /// `{E_b : b ∈ S}`, `|S| ≥ 4`: not minimal.
    Eb,
    /// Companion-matrix quadruple: minimal.
    Quadruple,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub family: Family,
    pub spread: PartialSpread,
}

impl Instance {
    pub fn expected(&self) -> Verdict {
        match self.family {
            Family::Large | Family::Quadruple => Verdict::Minimal,
            Family::Small | Family::Eb => Verdict::NotMinimal,
        }
    }

    pub fn code(&self) -> DefiningSet {
        DefiningSet::from_spread(&self.spread)
    }

    pub fn q_pow_m(&self) -> u64 {
        (self.spread.field().q() as u64).pow(self.spread.m() as u32)
    }
}

fn field(q: u32) -> FieldSpec {
    let (p, e) = match q {
        2 => (2, 1),
        3 => (3, 1),
        4 => (2, 2),
        5 => (5, 1),
        _ => unreachable!("suite fields are q in 2..=5"),
    };
    make_field(p, e).expect("small field")
}

fn prefix(spread: &PartialSpread, s: usize) -> PartialSpread {
    let idx: Vec<usize> = (0..s).collect();
    spread.subfamily(&idx).expect("prefix of a spread")
}

/// Spreads with `s ∈ {q+1, q^k+1}` for the minimal-side shapes. Random
/// complete spreads are included only when greedy sampling reaches them.
pub fn large_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for (q, k) in [(2u32, 1usize), (2, 2), (3, 1), (3, 2), (4, 2)] {
        let f = field(q);
        let full = desarguesian_spread(&f, k).expect("desarguesian");
        let mut sizes = vec![q as usize + 1, full.len()];
        sizes.dedup();
        for &s in &sizes {
            out.push(Instance {
                label: format!("desarguesian q={q} k={k} s={s}"),
                family: Family::Large,
                spread: prefix(&full, s),
            });
            for seed in RANDOM_SEEDS {
                match random_partial_spread(&f, k, s, seed) {
                    Ok(spread) => out.push(Instance {
                        label: format!("random q={q} k={k} s={s} seed={seed}"),
                        family: Family::Large,
                        spread,
                    }),
                    Err(Error::TargetNotReached { .. }) => {}
                    Err(e) => panic!("unexpected random spread failure: {e}"),
                }
            }
        }
    }
    out
}

pub fn small_instances() -> Vec<Instance> {
    let mut out = Vec::new();
    for q in [3u32, 4, 5] {
        let f = field(q);
        let full = desarguesian_spread(&f, 2).expect("desarguesian");
        for s in [2usize, 3] {
            out.push(Instance {
                label: format!("desarguesian q={q} k=2 s={s}"),
                family: Family::Small,
                spread: prefix(&full, s),
            });
            for seed in RANDOM_SEEDS {
                out.push(Instance {
                    label: format!("random q={q} k=2 s={s} seed={seed}"),
                    family: Family::Small,
                    spread: random_partial_spread(&f, 2, s, seed).expect("small random spread"),
                });
            }
        }
    }
    out
}

/// `{E_b : b ∈ F_q}` for q = 4, 5.
pub fn eb_full_instances() -> Vec<Instance> {
    [4u32, 5]
        .into_iter()
        .map(|q| {
            let f = field(q);
            let all: Vec<Elem> = f.elements().collect();
            Instance {
                label: format!("eb q={q} k=2 S=F_{q}"),
                family: Family::Eb,
                spread: eb_family(&f, 2, &all).expect("eb family"),
            }
        })
        .collect()
}

/// `{E_b : b ∈ S}` with S the four smallest element codes.
pub fn eb_four_instances() -> Vec<Instance> {
    [4u32, 5]
        .into_iter()
        .map(|q| {
            let f = field(q);
            let s: Vec<Elem> = f.elements().take(4).collect();
            Instance {
                label: format!("eb q={q} k=2 S={{0,1,2,3}}"),
                family: Family::Eb,
                spread: eb_family(&f, 2, &s).expect("eb family"),
            }
        })
        .collect()
}

pub fn quadruple_instances() -> Vec<Instance> {
    [4u32, 5]
        .into_iter()
        .map(|q| Instance {
            label: format!("quadruple q={q} k=2"),
            family: Family::Quadruple,
            spread: companion_quadruple(&field(q), 2).expect("quadruple"),
        })
        .collect()
}

/// The quadruple followed by the first two Desarguesian members it does not
/// already contain. The quadruple is `{E_0, E_∞, E_1, E_t}` of the
/// Desarguesian spread, so the result is again a partial spread.
pub fn extended_quadruple(q: u32) -> (PartialSpread, PartialSpread) {
    let f = field(q);
    let quad = companion_quadruple(&f, 2).expect("quadruple");
    let full = desarguesian_spread(&f, 2).expect("desarguesian");
    let extra: Vec<_> = full
        .members()
        .iter()
        .filter(|u| !quad.members().contains(u))
        .take(2)
        .cloned()
        .collect();
    let members = quad.members().iter().cloned().chain(extra).collect();
    let extended = PartialSpread::validate(&f, members).expect("extension is a partial spread");
    (quad, extended)
}

pub fn all_instances() -> Vec<Instance> {
    let mut v = large_instances();
    v.extend(small_instances());
    v.extend(eb_full_instances());
    v.extend(eb_four_instances());
    v.extend(quadruple_instances());
    for q in [4, 5] {
        v.push(Instance {
            label: format!("quadruple+2 q={q} k=2"),
            family: Family::Quadruple,
            spread: extended_quadruple(q).1,
        });
    }
    v
}

fn random_vector(rng: &mut ChaCha8Rng, f: &FieldSpec, m: usize) -> Vec<Elem> {
    (0..m)
        .map(|_| Elem::from_raw(rng.next_u32() % f.q()))
        .collect()
}

fn random_nonzero(rng: &mut ChaCha8Rng, f: &FieldSpec, m: usize) -> Vec<Elem> {
    loop {
        let v = random_vector(rng, f, m);
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

struct Tally {
    instances: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            instances: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self, row: &str, started: Instant, summary: String) -> RowResult {
        let passed = self.failures.is_empty();
        let detail = if passed {
            summary
        } else {
            let mut d = format!("{} failure(s): ", self.failures.len());
            d.push_str(
                &self
                    .failures
                    .iter()
                    .take(3)
                    .cloned()
                    .collect::<Vec<_>>()
                    .join("; "),
            );
            d
        };
        RowResult {
            row: row.to_string(),
            passed,
            instances: self.instances,
            detail,
            elapsed_ms: started.elapsed().as_millis(),
        }
    }
}

fn verdict_row(row: &str, instances: &[Instance], with_bruteforce: bool, timed: bool) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    for inst in instances {
        t.instances += 1;
        let t0 = Instant::now();
        let d = inst.code();
        let g = check_geometric(&d).expect("full-rank code");
        t.check(g.verdict == inst.expected(), || {
            format!(
                "{}: geometric {} (expected {})",
                inst.label,
                g.verdict,
                inst.expected()
            )
        });
        t.check(g.replay(&d), || {
            format!("{}: certificate replay failed", inst.label)
        });
        if with_bruteforce && inst.q_pow_m() <= BRUTEFORCE_CROSSCHECK_LIMIT {
            let b = check_bruteforce(&d).expect("within brute-force bound");
            t.check(b.verdict == inst.expected(), || {
                format!("{}: bruteforce {}", inst.label, b.verdict)
            });
            t.check(b.replay(&d), || {
                format!("{}: bruteforce replay failed", inst.label)
            });
        }
        if timed {
            let el = t0.elapsed();
            t.check(el < PER_INSTANCE_BUDGET, || {
                format!("{}: took {el:?}", inst.label)
            });
        }
    }
    let n = t.instances;
    t.finish(
        row,
        started,
        format!("{n} instances, all verdicts as expected"),
    )
}

fn row_thm33() -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    for inst in eb_full_instances() {
        t.instances += 1;
        let d = inst.code();
        let g = check_geometric(&d).expect("full-rank code");
        t.check(g.verdict == Verdict::NotMinimal && g.replay(&d), || {
            format!("{}: geometric {}", inst.label, g.verdict)
        });
        let mut e1 = vec![Elem::ZERO; d.m()];
        e1[0] = Elem::ONE;
        let vd = restriction(&e1, &d).expect("nonzero").v_dim;
        t.check(vd <= d.m() - 2, || {
            format!("{}: dim V(e1,D) = {vd}", inst.label)
        });
    }
    t.finish(
        "thm33",
        started,
        "e1 has dim V(e1,D) <= m-2 for q=4,5".into(),
    )
}

fn row_same_weights() -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    for (eb, quad) in eb_four_instances().into_iter().zip(quadruple_instances()) {
        t.instances += 2;
        let (de, dq) = (eb.code(), quad.code());
        let (we, wq) = (
            de.weight_distribution().expect("full rank"),
            dq.weight_distribution().expect("full rank"),
        );
        t.check(we == wq, || {
            format!("{} vs {}: distributions differ", eb.label, quad.label)
        });
        let (ve, vq) = (
            check_geometric(&de).expect("full rank").verdict,
            check_geometric(&dq).expect("full rank").verdict,
        );
        t.check(ve == Verdict::NotMinimal && vq == Verdict::Minimal, || {
            format!("{}: {ve}, {}: {vq}", eb.label, quad.label)
        });
    }
    t.finish(
        "same-weights",
        started,
        "equal weight distributions, NotMinimal vs Minimal for q=4,5".into(),
    )
}

/// `wt(c(y)) = n - s(q^{k-1}-1) - δ(q^k - q^{k-1})` for every nonzero y.
fn row_weight_law(instances: &[Instance]) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    let mut messages = 0u64;
    for inst in instances {
        t.instances += 1;
        let sp = &inst.spread;
        let f = sp.field();
        let q = f.q() as usize;
        let (k, s) = (sp.k(), sp.len());
        let d = inst.code();
        let dual = sp.dual().expect("dual spread");
        let mut violations = 0;
        for y in all_vectors(f, sp.m()).skip(1) {
            messages += 1;
            let delta = dual.member_containing(&y).is_some() as usize;
            let expected = d.len()
                - s * (q.pow(k as u32 - 1) - 1)
                - delta * (q.pow(k as u32) - q.pow(k as u32 - 1));
            if d.weight_of(&y) != expected {
                violations += 1;
            }
        }
        t.check(violations == 0, || {
            format!("{}: {violations} violations", inst.label)
        });
    }
    t.finish(
        "weight-law",
        started,
        format!("{messages} messages, zero violations"),
    )
}

fn row_dual(instances: &[Instance]) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    for inst in instances {
        t.instances += 1;
        let r = inst.spread.dual();
        t.check(r.is_ok(), || {
            format!("{}: {}", inst.label, r.as_ref().unwrap_err())
        });
    }
    t.finish("dual", started, "every dual spread validates".into())
}

fn row_equivalence(instances: &[Instance]) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    for inst in instances
        .iter()
        .filter(|i| i.q_pow_m() <= BRUTEFORCE_CROSSCHECK_LIMIT)
    {
        t.instances += 1;
        let d = inst.code();
        let f = d.field().clone();
        let g = check_geometric(&d).expect("full rank").verdict;
        let b = check_bruteforce(&d).expect("bounded").verdict;
        t.check(g == b, || {
            format!("{}: geometric {g}, bruteforce {b}", inst.label)
        });
        let mut disagreements = 0;
        for _ in 0..CODEWORD_SAMPLES {
            let y = random_nonzero(&mut rng, &f, d.m());
            if is_codeword_minimal(&y, &d).unwrap()
                != is_codeword_minimal_bruteforce(&y, &d).unwrap()
            {
                disagreements += 1;
            }
        }
        t.check(disagreements == 0, || {
            format!("{}: {disagreements} per-codeword disagreements", inst.label)
        });
    }
    let n = t.instances;
    t.finish(
        "equivalence",
        started,
        format!("{n} instances, {CODEWORD_SAMPLES} sampled codewords each"),
    )
}

/// `c(x) ⪯ c(y)` against `H(y,D) ⊆ H(x,D)`, the latter decided as
/// `x ∈ V(y,D)^⊥`. Half the pairs draw `x` from `V(y,D)^⊥` so that both
/// directions are exercised.
fn row_prop21(instances: &[Instance]) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let mut positives = 0usize;
    for inst in instances {
        t.instances += 1;
        let d = inst.code();
        let f = d.field().clone();
        let m = d.m();
        let mut bad = 0;
        for trial in 0..PAIR_SAMPLES {
            let y = random_nonzero(&mut rng, &f, m);
            let h = restriction(&y, &d).expect("nonzero");
            let rows: Vec<&[Elem]> = h.vectors(&d).collect();
            let perp = nullspace(&f, m, &rows).expect("lengths match");
            let x = if trial % 2 == 0 || perp.dim() == 0 {
                random_vector(&mut rng, &f, m)
            } else {
                let coeffs = random_vector(&mut rng, &f, perp.dim());
                let mut x = vec![Elem::ZERO; m];
                for (c, b) in coeffs.iter().zip(perp.basis()) {
                    crate::linalg::axpy(&f, *c, b, &mut x);
                }
                x
            };
            let lhs = covers(
                &d.codeword(&x).unwrap().values,
                &d.codeword(&y).unwrap().values,
            )
            .unwrap();
            let by_subspace = perp.contains(&f, &x);
            let by_members = rows.iter().all(|r| dot(&f, r, &x).unwrap().is_zero());
            positives += lhs as usize;
            if lhs != by_subspace || lhs != by_members {
                bad += 1;
            }
        }
        t.check(bad == 0, || {
            format!("{}: {bad} counterexamples", inst.label)
        });
    }
    let n = t.instances;
    t.finish(
        "prop21",
        started,
        format!(
            "{n} instances x {PAIR_SAMPLES} pairs ({positives} covering), zero counterexamples"
        ),
    )
}

fn row_ab(instances: &[Instance]) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    let mut ab_minimal = 0;
    for inst in instances {
        t.instances += 1;
        let d = inst.code();
        let ab =
            ab_bound(&d.weight_distribution().expect("full rank"), d.field()).expect("nonempty");
        if ab.verdict == Verdict::Minimal {
            ab_minimal += 1;
            let g = check_geometric(&d).expect("full rank").verdict;
            t.check(g == Verdict::Minimal, || {
                format!("{}: ab Minimal but geometric {g}", inst.label)
            });
        }
    }
    // boundary case q=3, k=2, s=3: 12/18 = 2/3 exactly
    let f = field(3);
    let sp = prefix(&desarguesian_spread(&f, 2).expect("desarguesian"), 3);
    let d = DefiningSet::from_spread(&sp);
    let w = d.weight_distribution().expect("full rank");
    let (wmin, wmax) = (w.min_weight(), w.max_weight());
    t.check(wmin == Some(12) && wmax == Some(18), || {
        format!("q=3 k=2 s=3: weights {wmin:?}..{wmax:?}")
    });
    let ab = ab_bound(&w, &f).expect("nonempty").verdict;
    let g = check_geometric(&d).expect("full rank").verdict;
    t.check(
        ab == Verdict::Inconclusive && g == Verdict::NotMinimal,
        || format!("q=3 k=2 s=3: ab {ab}, geometric {g}"),
    );
    t.finish(
        "ab",
        started,
        format!(
            "{ab_minimal} ab-Minimal instances all geometric-Minimal; 12/18 boundary Inconclusive"
        ),
    )
}

fn row_monotone() -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    for q in [4u32, 5] {
        let (quad, ext) = extended_quadruple(q);
        t.instances += 1;
        let m = monotonicity_check(
            &DefiningSet::from_spread(&quad),
            &DefiningSet::from_spread(&ext),
        )
        .expect("sub-multiset");
        t.check(m.consistent && m.super_verdict == Verdict::Minimal, || {
            format!("q={q}: quadruple+2 {m:?}")
        });

        let f = field(q);
        let all: Vec<Elem> = f.elements().collect();
        let full = DefiningSet::from_spread(&eb_family(&f, 2, &all).expect("eb"));
        let n = all.len();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() < 2 || mask.count_ones() as usize == n {
                continue;
            }
            let subset: Vec<Elem> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            let sub = DefiningSet::from_spread(&eb_family(&f, 2, &subset).expect("eb"));
            t.instances += 1;
            let m = monotonicity_check(&sub, &full).expect("sub-multiset");
            t.check(m.consistent && m.sub_verdict == Verdict::NotMinimal, || {
                format!("q={q} S={subset:?}: {m:?}")
            });
        }
    }
    let n = t.instances;
    t.finish("monotone", started, format!("{n} nested pairs consistent"))
}

fn row_structural(instances: &[Instance]) -> RowResult {
    let started = Instant::now();
    let mut t = Tally::new();
    let mut shapes = Vec::new();
    for inst in instances {
        t.instances += 1;
        let sp = &inst.spread;
        let d = inst.code();
        let q = sp.field().q() as usize;
        let n = sp.len() * (q.pow(sp.k() as u32) - 1);
        t.check(d.len() == n && d.rank() == sp.m(), || {
            format!("{}: n={} rank={}", inst.label, d.len(), d.rank())
        });
        let shape = (sp.field().q(), sp.m());
        if !shapes.contains(&shape) {
            shapes.push(shape);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0012);
    for &(q, m) in &shapes {
        let f = field(q);
        let mut bad = 0;
        for _ in 0..DUALITY_SAMPLES {
            let count = (rng.next_u32() as usize) % (m + 3);
            let s: Vec<Vec<Elem>> = (0..count).map(|_| random_vector(&mut rng, &f, m)).collect();
            let perp = nullspace(&f, m, &s).expect("lengths match");
            let orthogonal = perp
                .basis()
                .iter()
                .all(|b| s.iter().all(|x| dot(&f, b, x).unwrap().is_zero()));
            if span_dim(&f, m, &s).unwrap() + perp.dim() != m || !orthogonal {
                bad += 1;
            }
        }
        t.check(bad == 0, || {
            format!("q={q} m={m}: {bad} dimension-formula failures")
        });
    }
    let n = t.instances;
    t.finish(
        "structural",
        started,
        format!(
            "{n} instances with n = s(q^k-1), r(D) = m; {} (q,m) shapes x {DUALITY_SAMPLES} duality cases",
            shapes.len()
        ),
    )
}

/// Runs the selected rows (all rows when `only` is empty).
pub fn run(only: &[String]) -> Result<Vec<RowResult>> {
    if let Some(bad) = only.iter().find(|r| !ROWS.contains(&r.as_str())) {
        return Err(Error::InvalidParameter(format!(
            "unknown row '{bad}', expected one of {}",
            ROWS.join(", ")
        )));
    }
    let selected: Vec<&str> = ROWS
        .iter()
        .copied()
        .filter(|r| only.is_empty() || only.iter().any(|o| o == r))
        .collect();
    let needs_all = selected.iter().any(|r| {
        matches!(
            *r,
            "weight-law" | "dual" | "equivalence" | "prop21" | "ab" | "structural"
        )
    });
    let everything = if needs_all {
        all_instances()
    } else {
        Vec::new()
    };

    Ok(selected
        .into_iter()
        .map(|row| match row {
            "thm31" => verdict_row(row, &large_instances(), true, true),
            "thm32" => verdict_row(row, &small_instances(), false, false),
            "thm33" => row_thm33(),
            "thm34" => verdict_row(row, &quadruple_instances(), true, false),
            "same-weights" => row_same_weights(),
            "weight-law" => row_weight_law(&everything),
            "dual" => row_dual(&everything),
            "equivalence" => row_equivalence(&everything),
            "prop21" => row_prop21(&everything),
            "ab" => row_ab(&everything),
            "monotone" => row_monotone(),
            "structural" => row_structural(&everything),
            _ => unreachable!(),
        })
        .collect())
}

pub fn format_table(results: &[RowResult]) -> String {
    let mut out = String::new();
    for r in results {
        out.push_str(&format!(
            "{:<4} {:<13} {:>4} inst {:>7} ms  {}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.row,
            r.instances,
            r.elapsed_ms,
            r.detail
        ));
    }
    out
}
