//! Independent checks: brute-force distance, repair round-trips, repair
//! matrix invertibility, curve sanity and the identities each theorem
//! promises.

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autgrp;
use crate::curve::{Curve, Pt};
use crate::error::{Error, Result};
use crate::ffield::Felt;
use crate::linalg::Matrix;
use crate::lrc::{self, LrcCode, Mode};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub seed: u64,
    pub budget_used: u128,
}

impl VerifyReport {
    pub fn new(seed: u64) -> Self {
        VerifyReport { checks: Vec::new(), seed, budget_used: 0 }
    }

    pub fn push(&mut self, name: &str, passed: bool, details: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, details: details.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn merge(&mut self, other: VerifyReport) {
        self.checks.extend(other.checks);
        self.budget_used += other.budget_used;
    }
}

fn weight(w: &[Felt]) -> usize {
    w.iter().filter(|x| !x.is_zero()).count()
}

/// Number of messages with leading coefficient one: `(q^k - 1) / (q - 1)`.
pub fn enumeration_cost(q: u64, k: usize) -> Option<u128> {
    let q = q as u128;
    let total = q.checked_pow(k as u32)?;
    Some((total - 1) / (q - 1))
}

/// Exact minimum distance by enumerating one message per scalar class.
pub fn min_distance_exact(code: &LrcCode, budget: u128) -> Result<usize> {
    min_distance_of_rows(code.field(), &code.matrix, code.n(), budget)
}

pub fn min_distance_of_rows(f: &crate::ffield::FieldCtx, rows: &[Vec<Felt>], n: usize, budget: u128) -> Result<usize> {
    let k = rows.len();
    let q = f.q();
    let needed = enumeration_cost(q, k).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut best = n;
    for lead in 0..k {
        let mut word = rows[lead].clone();
        let tail = k - lead - 1;
        let mut digits = vec![0u32; tail];
        loop {
            best = best.min(weight(&word));
            // Odometer step over the coordinates after the leading one.
            let mut i = 0;
            loop {
                if i == tail {
                    break;
                }
                let old = Felt(digits[i]);
                let next = (digits[i] + 1) % q as u32;
                digits[i] = next;
                let delta = f.sub(Felt(next), old);
                f.axpy(&mut word, delta, &rows[lead + 1 + i]);
                if next != 0 {
                    break;
                }
                i += 1;
            }
            if i == tail {
                break;
            }
        }
    }
    Ok(best)
}

/// Distance bracket: the pole-degree lower bound and a codeword weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceCertificate {
    pub lower: usize,
    pub upper: usize,
    /// Whether the explicit `Π (z - α_i)` codeword was confirmed in the code.
    pub witness_in_code: bool,
    pub sampled_min: Option<usize>,
}

impl DistanceCertificate {
    pub fn exact(&self) -> Option<usize> {
        (self.lower == self.upper).then_some(self.lower)
    }
}

fn in_row_space(code: &LrcCode, w: &[Felt]) -> bool {
    let mut rows = code.matrix.clone();
    rows.push(w.to_vec());
    Matrix::from_rows(rows, code.n()).rank(code.field()) == code.k()
}

/// Affordable when a full rank computation on `k x n` stays small.
fn rank_affordable(code: &LrcCode) -> bool {
    (code.k() as u128).pow(2) * code.n() as u128 <= 2_000_000_000
}

pub fn distance_certificate(code: &LrcCode, samples: usize, seed: u64) -> DistanceCertificate {
    let f = code.field();
    let lower = code.d_lower();
    let w = code.witness();
    let witness_in_code = rank_affordable(code) && in_row_space(code, &w);
    let mut upper = if witness_in_code { weight(&w) } else { code.n() };
    let mut sampled_min = None;
    if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best = code.n();
        for _ in 0..samples {
            let msg: Vec<Felt> = (0..code.k()).map(|_| f.random(&mut rng)).collect();
            if msg.iter().all(|x| x.is_zero()) {
                continue;
            }
            best = best.min(weight(&code.encode(&msg)));
        }
        sampled_min = Some(best);
        upper = upper.min(best);
    }
    DistanceCertificate { lower, upper, witness_in_code, sampled_min }
}

/// Erase-and-repair round trips on random codewords (the first trial uses
/// the zero word), set disjointness, repair matrix invertibility and
/// sensitivity to a corrupted helper.
pub fn repair_audit(code: &LrcCode, trials: usize, seed: u64) -> VerifyReport {
    let f = code.field();
    let mut rep = VerifyReport::new(seed);
    let n = code.n();
    let nsets = code.recovering.first().map_or(0, |s| s.len());

    let mut disjoint = true;
    for (pos, sets) in code.recovering.iter().enumerate() {
        let mut seen = HashSet::from([pos]);
        for s in sets {
            for &i in s {
                disjoint &= seen.insert(i);
            }
        }
    }
    rep.push("recovering_sets_disjoint", disjoint, format!("{n} positions, {nsets} sets each"));

    let mut singular = Vec::new();
    for (pos, sets) in code.recovering.iter().enumerate() {
        for s in sets {
            let r = s.len();
            let m = Matrix::from_rows(s.iter().map(|&i| code.repair_basis[i][..r].to_vec()).collect(), r);
            if !m.is_invertible(f) {
                singular.push(pos);
            }
        }
    }
    rep.push(
        "repair_matrices_invertible",
        singular.is_empty(),
        format!("{} singular of {}", singular.len(), n * nsets),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    let mut total = 0usize;
    for trial in 0..trials {
        let msg: Vec<Felt> = (0..code.k()).map(|_| if trial == 0 { Felt::ZERO } else { f.random(&mut rng) }).collect();
        let word = code.encode(&msg);
        let mut erased: Vec<Option<Felt>> = word.iter().copied().map(Some).collect();
        for pos in 0..n {
            erased[pos] = None;
            for which in 1..=nsets {
                total += 1;
                if lrc::repair(code, &erased, pos, which).ok() != Some(word[pos]) {
                    failures += 1;
                }
            }
            erased[pos] = Some(word[pos]);
        }
    }
    rep.push("repair_round_trip", failures == 0, format!("{} of {total} repairs failed", failures));

    // Corrupting one helper must change the repaired value.
    if trials > 0 && n > 0 && nsets > 0 {
        let msg: Vec<Felt> = (0..code.k()).map(|_| f.random(&mut rng)).collect();
        let word = code.encode(&msg);
        let mut sensitive = true;
        for which in 1..=nsets {
            let helper = code.recovering[0][which - 1][0];
            let mut bad: Vec<Option<Felt>> = word.iter().copied().map(Some).collect();
            bad[0] = None;
            bad[helper] = Some(f.add(word[helper], Felt::ONE));
            sensitive &= lrc::repair(code, &bad, 0, which).ok() != Some(word[0]);
        }
        rep.push("repair_detects_corrupted_helper", sensitive, "position 0, first helper of each set");
    }
    rep
}

/// Re-check the identities the theorems promise for a constructed code.
pub fn theorem_audit(code: &LrcCode) -> VerifyReport {
    let mut rep = VerifyReport::new(0);
    let (n, k, m) = (code.n(), code.k(), code.m());
    rep.push("n_is_m_times_fiber", n == m * code.fiber_size, format!("n = {n}, m = {m}, |G| = {}", code.fiber_size));
    rep.push("evaluation_injective", code.pole_bound < n, format!("pole bound {} < n = {n}", code.pole_bound));
    if rank_affordable(code) {
        let rank = code.rank();
        rep.push("rank_is_k", rank == k, format!("rank {rank}, k {k}"));
    }
    match code.mode {
        Mode::Single { r, t } => {
            rep.push("fiber_is_r_plus_1", code.fiber_size == r + 1, format!("r = {r}"));
            rep.push("k_is_rt_plus_1", k == r * t + 1, format!("k = {k}, rt+1 = {}", r * t + 1));
            rep.push("t_range", 1 <= t && t < m, format!("t = {t}, m = {m}"));
            let d = code.d_lower();
            rep.push(
                "distance_is_(m-t)(r+1)",
                d == (m - t) * (r + 1) && code.witness_weight() == d,
                format!("lower {d}, witness {}", code.witness_weight()),
            );
            if let Ok(b) = lrc::bounds(n as i64, k as i64, d as i64, &[r as i64]) {
                rep.push("classical_bound_met", b.meets_classical(), format!("bound {}, d {d}", b.classical));
            }
        }
        Mode::Two { r1, r2, d0, t1, t2 } => {
            let hsize = code.info.h.len().max(1);
            let (a1, a2) = ((r1 + 1) / hsize, r2 / hsize + 1);
            match lrc::two_params(hsize, a1, a2, m, d0) {
                Ok(p) => {
                    rep.push(
                        "t1_t2_from_d0",
                        (p.t1, p.t2, p.r1, p.r2) == (t1, t2, r1, r2),
                        format!("t1 = {t1}, t2 = {t2}"),
                    );
                    rep.push("pole_bound_is_L", p.l == code.pole_bound, format!("L = {}", p.l));
                    rep.push("k_at_least_lower_bound", k as i64 >= p.k_lower, format!("k = {k} >= {}", p.k_lower));
                    rep.push("n_minus_L_at_least_d0", n - p.l >= d0, format!("{} >= {d0}", n - p.l));
                }
                Err(e) => rep.push("two_set_parameters", false, e.to_string()),
            }
            let f = code.field();
            if let (Some(s), true) = (crate::arith::exact_sqrt(hsize as u64), code.curve.is_maximal()) {
                let root = crate::arith::isqrt(f.q());
                if (root + 1).is_multiple_of(s) {
                    if let Ok(t) = lrc::check_torsion_condition(f.q(), s, a1 as u64, a2 as u64) {
                        rep.push("torsion_condition", t.holds, format!("{} > {}", t.lhs, t.rhs));
                    }
                }
            }
            let torsion: HashSet<Pt> =
                code.curve.torsion(hsize as u64).map(|v| v.into_iter().collect()).unwrap_or_default();
            let clean = code.points.iter().all(|p| !torsion.contains(p));
            rep.push("places_outside_torsion", clean, format!("E[{hsize}] avoided"));
        }
    }
    rep
}

/// Fixed-field and fiber identities for a code built in this session.
pub fn construction_audit(code: &LrcCode) -> Result<VerifyReport> {
    let c = &code.curve;
    let mut rep = VerifyReport::new(0);
    let Some((g, _)) = code.groups.first() else {
        rep.push("construction_data", true, "not available for imported codes");
        return Ok(rep);
    };
    for (i, (gi, zi)) in code.groups.iter().enumerate() {
        rep.push(&format!("z{i}_invariant"), autgrp::check_invariance(c, gi, zi)?, format!("|G| = {}", gi.order()));
        let want = -(gi.a.len() as i64);
        let mut poles = true;
        for p in &gi.h {
            poles &= zi.valuation(c, p)? == want;
        }
        rep.push(&format!("z{i}_pole_divisor"), poles, format!("v_P(z) = {want} on H"));
    }
    let fibers = code.fibers();
    rep.push("fibers_are_orbits", autgrp::check_orbits(c, g, &fibers), format!("{} fibers", fibers.len()));
    rep.push("fiber_sums_abel", autgrp::check_abel(c, g, &fibers), "sum of fiber = [|A|] sum of H");
    rep.push("stabilizers_trivial", autgrp::check_free_action(c, g, &fibers), "free action on fibers");
    let bound = (c.count() as i64 - 2 * g.h.len() as i64 + g.order() as i64 - 1) / g.order() as i64 - 1;
    let all = autgrp::split_fibers(c, g, &code.groups[0].1, false)?;
    rep.push("fiber_count_lower_bound", all.len() as i64 >= bound, format!("{} fibers >= {bound}", all.len()));
    Ok(rep)
}

/// Hasse-Weil, `[N]P = O`, structure consistency, associativity and an
/// optional expected point count.
pub fn curve_sanity(c: &Curve, expected: Option<u64>, seed: u64) -> Result<VerifyReport> {
    let mut rep = VerifyReport::new(seed);
    let n = c.count();
    rep.push("hasse_weil", c.hasse_weil_slack() >= 0, format!("N = {n}, q = {}", c.field().q()));
    if let Some(e) = expected {
        rep.push("closed_form_count", n == e, format!("N = {n}, expected {e}"));
    }
    let pts = c.points()?;
    rep.push("enumeration_matches_count", pts.len() as u64 == n, format!("{} points", pts.len()));
    rep.push("order_kills_points", pts.iter().all(|p| c.mul(n as i64, p).is_inf()), "[N]P = O");
    let s = c.structure()?;
    let q1 = c.field().q() - 1;
    let e1 = c.torsion(s.n1)?.len() as u64;
    rep.push(
        "structure",
        s.n1 * s.n2 == n && s.n2 % s.n1 == 0 && q1.is_multiple_of(s.n1) && e1 == s.n1 * s.n1,
        format!("Z/{} x Z/{}", s.n1, s.n2),
    );
    let assoc = if pts.len() <= 100 {
        pts.iter().all(|a| pts.iter().all(|b| pts.iter().all(|d| c.add(&c.add(a, b), d) == c.add(a, &c.add(b, d)))))
    } else {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..2000).all(|_| {
            let [a, b, d] = [0; 3].map(|_| pts[rng.gen_range(0..pts.len())]);
            c.add(&c.add(&a, &b), &d) == c.add(&a, &c.add(&b, &d))
        })
    };
    rep.push("associativity", assoc, if pts.len() <= 100 { "exhaustive" } else { "2000 random triples" });
    Ok(rep)
}
