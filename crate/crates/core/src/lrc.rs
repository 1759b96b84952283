//! Code constructions: e-bases with staircase pole divisors on `H`, codes
//! with one recovering set, codes with two recovering sets, single-symbol
//! repair and Singleton-type bounds.

use std::collections::{BTreeMap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::autgrp::{self, AutoMap, Fiber, GroupSpec};
use crate::curve::{Curve, Pt};
use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};
use crate::funcfield::{riemann_roch_basis, DivisorSpec, Func};
use crate::linalg::Matrix;

/// `D_i = (μ+1)(P_1 + ... + P_ν) + μ(P_{ν+1} + ... + P_{|H|})` for
/// `i = μ|H| + ν`; places with coefficient zero are omitted.
pub fn ebasis_divisor(h: &[Pt], i: usize) -> DivisorSpec {
    let (mu, nu) = (i / h.len(), i % h.len());
    h.iter()
        .enumerate()
        .map(|(j, &p)| (p, if j < nu { mu as i64 + 1 } else { mu as i64 }))
        .filter(|&(_, n)| n > 0)
        .collect()
}

#[derive(Clone, Debug)]
pub struct EBasis {
    pub funcs: Vec<Func>,
    pub h: Vec<Pt>,
}

fn has_exact_poles(c: &Curve, g: &Func, d: &DivisorSpec) -> Result<bool> {
    if g.is_zero() {
        return Ok(false);
    }
    for &(p, n) in d {
        if g.valuation(c, &p)? != -n {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `e_1 = 1, e_2, ..., e_r` with `(e_i)_∞ = D_i` exactly.
///
/// Candidates are tried in a fixed order: the echelon basis of `L(D_i)`
/// from the top, then the sum of that basis, then seeded random
/// combinations.
pub fn build_e_basis(c: &Curve, h: &[Pt], r: usize) -> Result<EBasis> {
    let f = c.field();
    if h.is_empty() || h.len() as u64 >= f.q() {
        return Err(Error::Hypothesis("|H| < q".into()));
    }
    let mut funcs = vec![Func::one()];
    for i in 2..=r {
        let d = ebasis_divisor(h, i);
        let basis = riemann_roch_basis(c, &d)?;
        let mut chosen = None;
        let mut candidates: Vec<Func> = basis.iter().rev().cloned().collect();
        candidates.push(basis.iter().fold(Func::zero(), |acc, b| acc.add(c, b)));
        for g in candidates {
            if has_exact_poles(c, &g, &d)? {
                chosen = Some(g);
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        for _ in 0..64 {
            if chosen.is_some() {
                break;
            }
            let g = basis.iter().fold(Func::zero(), |acc, b| acc.add(c, &b.scale(c, f.random(&mut rng))));
            if has_exact_poles(c, &g, &d)? {
                chosen = Some(g);
            }
        }
        funcs.push(chosen.ok_or(Error::ExistenceFailure(i))?);
    }
    funcs.truncate(r.max(1));
    Ok(EBasis { funcs, h: h.to_vec() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Single { r: usize, t: usize },
    Two { r1: usize, r2: usize, d0: usize, t1: usize, t2: usize },
}

impl Mode {
    pub fn localities(&self) -> Vec<usize> {
        match *self {
            Mode::Single { r, .. } => vec![r],
            Mode::Two { r1, r2, .. } => vec![r1, r2],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Single { .. } => "single",
            Mode::Two { .. } => "two",
        }
    }
}

/// Evaluation code on completely split fibers, with what repair needs.
#[derive(Clone, Debug)]
pub struct LrcCode {
    pub curve: Curve,
    pub mode: Mode,
    pub fiber_size: usize,
    /// Value of the fiber function on each fiber.
    pub alphas: Vec<Felt>,
    pub points: Vec<Pt>,
    /// `k` rows of length `n`.
    pub matrix: Vec<Vec<Felt>>,
    /// Pole degree bound of every function in `V`; `d >= n - pole_bound`.
    pub pole_bound: usize,
    /// Number of fiber factors in the minimum-weight witness `Π (z - α_i)`.
    pub witness_roots: usize,
    /// Per position, one index set per recovering set.
    pub recovering: Vec<Vec<Vec<usize>>>,
    /// Per position, `e_1(P), ..., e_R(P)`.
    pub repair_basis: Vec<Vec<Felt>>,
    pub info: CodeInfo,
    /// Groups with their fixed field generators, the full group first.
    /// Empty for codes read back from a file.
    pub groups: Vec<(GroupSpec, Func)>,
}

/// Construction data kept for reports.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct CodeInfo {
    pub h: Vec<String>,
    pub automorphisms: Vec<Vec<String>>,
    pub z: Vec<String>,
    pub e_basis: Vec<String>,
    pub k_lower_bound: Option<i64>,
}

impl LrcCode {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.matrix.len()
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    pub fn field(&self) -> &FieldCtx {
        self.curve.field()
    }

    pub fn d_lower(&self) -> usize {
        self.n() - self.pole_bound
    }

    pub fn encode(&self, msg: &[Felt]) -> Vec<Felt> {
        Matrix::from_rows(self.matrix.clone(), self.n()).vec_mul(self.field(), msg)
    }

    /// Codeword of `Π_{i < witness_roots} (z - α_i)`.
    pub fn witness(&self) -> Vec<Felt> {
        let f = self.field();
        let roots = &self.alphas[..self.witness_roots];
        self.alphas
            .iter()
            .flat_map(|&a| {
                let v = roots.iter().fold(Felt::ONE, |acc, &r| f.mul(acc, f.sub(a, r)));
                std::iter::repeat_n(v, self.fiber_size)
            })
            .collect()
    }

    pub fn witness_weight(&self) -> usize {
        self.n() - self.witness_roots * self.fiber_size
    }

    /// Fibers as stored in the code.
    pub fn fibers(&self) -> Vec<Fiber> {
        self.points
            .chunks(self.fiber_size)
            .zip(&self.alphas)
            .map(|(pts, &alpha)| Fiber { alpha, places: pts.to_vec() })
            .collect()
    }

    pub fn rank(&self) -> usize {
        Matrix::from_rows(self.matrix.clone(), self.n()).rank(self.field())
    }
}

fn require_range(t: usize, m: usize, fibers: usize) -> Result<()> {
    if m > fibers {
        return Err(Error::NotEnoughFibers { needed: m, available: fibers });
    }
    if t == 0 || t >= m {
        return Err(Error::Hypothesis(format!("1 <= t < m required (t = {t}, m = {m})")));
    }
    Ok(())
}

fn flatten(fibers: &[Fiber]) -> (Vec<Pt>, Vec<Felt>) {
    let pts = fibers.iter().flat_map(|fb| fb.places.iter().copied()).collect();
    (pts, fibers.iter().map(|fb| fb.alpha).collect())
}

fn eval_table(c: &Curve, funcs: &[Func], pts: &[Pt]) -> Result<Vec<Vec<Felt>>> {
    pts.iter().map(|p| funcs.iter().map(|g| g.eval(c, p)).collect()).collect()
}

fn render_all(c: &Curve, pts: &[Pt]) -> Vec<String> {
    pts.iter().map(|p| c.render_point(p)).collect()
}

fn render_maps(f: &FieldCtx, a: &[AutoMap]) -> Vec<String> {
    a.iter().map(|s| s.render(f)).collect()
}

/// Code of `V = span{z^j : j <= t} + span{z^j e_i : 2 <= i <= r, j < t}` on
/// the first `m` fibers of `z`, with `r + 1 = |G|`.
pub fn build_code_single(c: &Curve, g: &GroupSpec, m: usize, t: usize) -> Result<LrcCode> {
    let f = c.field();
    let z = autgrp::fixed_field_generator(c, g)?;
    let fibers = autgrp::split_fibers(c, g, &z, false)?;
    require_range(t, m, fibers.len())?;
    let r = g.order() - 1;
    let eb = build_e_basis(c, &g.h, r)?;
    let (points, alphas) = flatten(&fibers[..m]);
    let n = points.len();
    let table = eval_table(c, &eb.funcs, &points)?;
    let zval: Vec<Felt> = (0..n).map(|i| alphas[i / g.order()]).collect();

    let mut matrix = Vec::with_capacity(r * t + 1);
    for j in 0..=t {
        matrix.push(zval.iter().map(|&a| f.pow(a, j as u64)).collect());
    }
    for i in 1..r {
        for j in 0..t {
            matrix.push((0..n).map(|p| f.mul(table[p][i], f.pow(zval[p], j as u64))).collect());
        }
    }
    let expected = r * t + 1;
    let actual = Matrix::from_rows(matrix.clone(), n).rank(f);
    if actual != expected {
        return Err(Error::RankMismatch { expected, actual });
    }
    let size = g.order();
    let recovering = (0..n)
        .map(|p| {
            let start = p / size * size;
            vec![(start..start + size).filter(|&q| q != p).collect()]
        })
        .collect();
    Ok(LrcCode {
        curve: c.clone(),
        mode: Mode::Single { r, t },
        fiber_size: size,
        alphas,
        points,
        matrix,
        pole_bound: t * size,
        witness_roots: t,
        recovering,
        repair_basis: table,
        info: CodeInfo {
            h: render_all(c, &g.h),
            automorphisms: vec![render_maps(f, &g.a)],
            z: vec![z.render(f)],
            e_basis: eb.funcs.iter().map(|e| e.render(f)).collect(),
            k_lower_bound: None,
        },
        groups: vec![(g.clone(), z)],
    })
}

/// Derived parameters of a two-set code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoParams {
    pub n: usize,
    pub r1: usize,
    pub r2: usize,
    pub t1: usize,
    pub t2: usize,
    /// `max(t1 (r1 + 1), t2 (r2 + |H|))`.
    pub l: usize,
    /// `t1 r1 + t2 r2 + 2 - L`.
    pub k_lower: i64,
}

pub fn two_params(h: usize, a1: usize, a2: usize, m: usize, d0: usize) -> Result<TwoParams> {
    let n = m * h * a1 * a2;
    if d0 < 1 || d0 >= n {
        return Err(Error::Hypothesis(format!("1 <= d0 < n required (d0 = {d0}, n = {n})")));
    }
    let r1 = h * a1 - 1;
    let r2 = h * (a2 - 1);
    let t1 = (n - d0) / (r1 + 1);
    let t2 = (n - d0) / (r2 + h);
    let l = (t1 * (r1 + 1)).max(t2 * (r2 + h));
    let k_lower = (t1 * r1 + t2 * r2 + 2) as i64 - l as i64;
    Ok(TwoParams { n, r1, r2, t1, t2, l, k_lower })
}

/// Basis rows of `V_i` evaluated at `sel`: first `z^j` for `j <= t`, then
/// `z^j e_l` for `2 <= l <= r`, `j < t`.
fn space_rows(f: &FieldCtx, zv: &[Felt], ev: &[Vec<Felt>], r: usize, t: usize, sel: &[usize]) -> Vec<Vec<Felt>> {
    let mut rows = Vec::new();
    for j in 0..=t {
        rows.push(sel.iter().map(|&p| f.pow(zv[p], j as u64)).collect());
    }
    for l in 1..r {
        for j in 0..t {
            rows.push(sel.iter().map(|&p| f.mul(ev[p][l], f.pow(zv[p], j as u64))).collect());
        }
    }
    rows
}

/// Two recovering sets from `G = T_H A1 A2`: the intersection of the
/// spaces repairable along `T_H A1`-orbits and along `T_H A2`-orbits.
///
/// Both spaces sit in `W = L(L0 ΣH)` of dimension `L < n`, so evaluation
/// at `L + 1` code places is injective on `W` and the intersection is
/// computed on those evaluation vectors.
pub fn build_code_two(
    c: &Curve,
    h: &[Pt],
    a1: &[AutoMap],
    a2: &[AutoMap],
    m: usize,
    d0: usize,
    exclude_torsion: bool,
) -> Result<LrcCode> {
    let f = c.field();
    let common = autgrp::intersection_size(a1, a2);
    if common != 1 {
        return Err(Error::SubgroupsIntersect(common));
    }
    let gens: Vec<AutoMap> = a1.iter().chain(a2).copied().collect();
    let a = autgrp::closure(c, &gens)?;
    if a.len() != a1.len() * a2.len() {
        return Err(Error::NotASubgroup(format!("|A1 A2| = {} is not |A1||A2|", a.len())));
    }
    let g = autgrp::make_group(c, h, &a)?;
    let g1 = autgrp::make_group(c, h, a1)?;
    let g2 = autgrp::make_group(c, h, a2)?;
    let hsize = g.h.len();
    let params = two_params(hsize, a1.len(), a2.len(), m, d0)?;
    let TwoParams { n, r1, r2, t1, t2, l, k_lower } = params;

    let z = autgrp::fixed_field_generator(c, &g)?;
    let fibers = autgrp::split_fibers(c, &g, &z, exclude_torsion)?;
    if m > fibers.len() {
        return Err(Error::NotEnoughFibers { needed: m, available: fibers.len() });
    }
    let z1 = autgrp::fixed_field_generator(c, &g1)?;
    let z2 = autgrp::fixed_field_generator(c, &g2)?;
    let eb = build_e_basis(c, &g.h, r1.max(r2))?;
    let (points, alphas) = flatten(&fibers[..m]);
    let table = eval_table(c, &eb.funcs, &points)?;
    let z1v = z1.eval_all(c, &points)?;
    let z2v = z2.eval_all(c, &points)?;

    let sel: Vec<usize> = (0..n.min(l + 1)).collect();
    let b1 = space_rows(f, &z1v, &table, r1, t1, &sel);
    let b2 = space_rows(f, &z2v, &table, r2, t2, &sel);
    let (dim1, dim2) = (b1.len(), b2.len());
    let rank2 = Matrix::from_rows(b2.clone(), sel.len()).rank(f);
    if rank2 != dim2 {
        return Err(Error::RankMismatch { expected: dim2, actual: rank2 });
    }
    let stacked: Vec<Vec<Felt>> = b1.into_iter().chain(b2).collect();
    let mut mt = Matrix::from_rows(stacked, sel.len()).transpose();
    let pivots = mt.rref(f);
    if pivots.iter().take_while(|&&p| p < dim1).count() != dim1 {
        let actual = pivots.iter().filter(|&&p| p < dim1).count();
        return Err(Error::RankMismatch { expected: dim1, actual });
    }
    // Kernel vectors have a unit at a free column of the V2 block; the V1
    // block is the negated pivot column entries.
    let mut is_pivot = vec![false; dim1 + dim2];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let coeffs: Vec<Vec<Felt>> = (dim1..dim1 + dim2)
        .filter(|&col| !is_pivot[col])
        .map(|col| (0..dim1).map(|row| f.neg(mt.rows[row][col])).collect())
        .collect();
    let k = coeffs.len();
    if (k as i64) < k_lower {
        return Err(Error::RankMismatch { expected: k_lower.max(0) as usize, actual: k });
    }
    let matrix = evaluate_combinations(f, &coeffs, &z1v, &table, r1, t1);

    // Recovering sets through orbits of T_H A1 and T_H A2.
    let index: HashMap<Pt, usize> = points.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let th = autgrp::make_group(c, h, &[AutoMap::identity()])?;
    let mut recovering = Vec::with_capacity(n);
    for p in &points {
        let o1: Vec<usize> = g1.orbit(c, p).iter().filter(|q| *q != p).map(|q| index[q]).collect();
        let skip = th.orbit(c, p);
        let o2: Vec<usize> = g2.orbit(c, p).iter().filter(|q| !skip.contains(q)).map(|q| index[q]).collect();
        if o1.len() != r1 || o2.len() != r2 || o1.iter().any(|i| o2.contains(i)) {
            return Err(Error::Invariant("recovering sets have the wrong shape".into()));
        }
        recovering.push(vec![o1, o2]);
    }
    let s = (t1 / a2.len()).min(t2 / a1.len());
    Ok(LrcCode {
        curve: c.clone(),
        mode: Mode::Two { r1, r2, d0, t1, t2 },
        fiber_size: g.order(),
        alphas,
        points,
        matrix,
        pole_bound: l,
        witness_roots: s,
        recovering,
        repair_basis: table,
        info: CodeInfo {
            h: render_all(c, &g.h),
            automorphisms: vec![render_maps(f, a1), render_maps(f, a2)],
            z: vec![z.render(f), z1.render(f), z2.render(f)],
            e_basis: eb.funcs.iter().map(|e| e.render(f)).collect(),
            k_lower_bound: Some(k_lower),
        },
        groups: vec![(g, z), (g1, z1), (g2, z2)],
    })
}

/// Rows `Σ_l e_l(P) poly_l(z1(P))` for each coefficient vector over the V1
/// basis, evaluated once per distinct `z1` value.
fn evaluate_combinations(
    f: &FieldCtx,
    coeffs: &[Vec<Felt>],
    z1v: &[Felt],
    table: &[Vec<Felt>],
    r1: usize,
    t1: usize,
) -> Vec<Vec<Felt>> {
    let n = z1v.len();
    let mut distinct: BTreeMap<Felt, usize> = BTreeMap::new();
    for &v in z1v {
        let len = distinct.len();
        distinct.entry(v).or_insert(len);
    }
    let vals: Vec<Felt> = {
        let mut v = vec![Felt::ZERO; distinct.len()];
        for (&a, &i) in &distinct {
            v[i] = a;
        }
        v
    };
    let slot: Vec<usize> = z1v.iter().map(|v| distinct[v]).collect();
    let mut zpow = vec![vec![Felt::ONE; vals.len()]];
    for j in 1..=t1 {
        let next = zpow[j - 1].iter().zip(&vals).map(|(&a, &b)| f.mul(a, b)).collect();
        zpow.push(next);
    }
    let mut out = vec![vec![Felt::ZERO; n]; coeffs.len()];
    let mut poly_vals = vec![Felt::ZERO; vals.len()];
    for (row, a) in out.iter_mut().zip(coeffs) {
        for l in 0..r1.max(1) {
            // Offsets of the block for e_{l+1} in the V1 basis order.
            let (start, len) = if l == 0 { (0, t1 + 1) } else { (t1 + 1 + (l - 1) * t1, t1) };
            poly_vals.iter_mut().for_each(|v| *v = Felt::ZERO);
            let mut any = false;
            for j in 0..len {
                let cj = a[start + j];
                if !cj.is_zero() {
                    f.axpy(&mut poly_vals, cj, &zpow[j]);
                    any = true;
                }
            }
            if !any {
                continue;
            }
            for p in 0..n {
                row[p] = f.add(row[p], f.mul(table[p][l], poly_vals[slot[p]]));
            }
        }
    }
    out
}

/// Recovering sets of a position.
pub fn recovering_sets(code: &LrcCode, pos: usize) -> &[Vec<usize>] {
    &code.recovering[pos]
}

/// Restore `word[pos]` from recovering set `which` (1 or 2).
pub fn repair(code: &LrcCode, word: &[Option<Felt>], pos: usize, which: usize) -> Result<Felt> {
    let f = code.field();
    let set = code
        .recovering
        .get(pos)
        .and_then(|s| s.get(which.wrapping_sub(1)))
        .ok_or_else(|| Error::Hypothesis(format!("no recovering set {which} at position {pos}")))?;
    let r = set.len();
    let mut rhs = Vec::with_capacity(r);
    for &i in set {
        rhs.push(word.get(i).copied().flatten().ok_or(Error::MissingSymbols(i))?);
    }
    let m = Matrix::from_rows(set.iter().map(|&i| code.repair_basis[i][..r].to_vec()).collect(), r);
    let sol = m.solve(f, &rhs).ok_or(Error::SingularRepairMatrix(pos))?;
    Ok(sol.iter().zip(&code.repair_basis[pos]).fold(Felt::ZERO, |acc, (&c, &e)| f.add(acc, f.mul(c, e))))
}

/// Result of the torsion inequality `h^2 |A1||A2| > |E[h^2]| - h^2` on a
/// maximal curve, with `|E[h^2]|` from the factorization of `sqrt(q) + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionReport {
    pub lhs: u128,
    /// `Π ℓ^{2 min(2 ν_ℓ(h), h_ℓ)}`.
    pub torsion_h2: u128,
    pub rhs: i128,
    pub holds: bool,
}

pub fn check_torsion_condition(q: u64, h: u64, a1: u64, a2: u64) -> Result<TorsionReport> {
    let s = arith::exact_sqrt(q).ok_or_else(|| Error::Hypothesis(format!("q = {q} is not a square")))?;
    if h == 0 || (s + 1) % h != 0 {
        return Err(Error::Hypothesis(format!("h = {h} must divide sqrt(q) + 1 = {}", s + 1)));
    }
    let mut prod: u128 = 1;
    for (l, e) in arith::factorize(s + 1) {
        let k = (2 * arith::valuation(h, l)).min(e);
        prod *= (l as u128).pow(2 * k);
    }
    let h2 = (h as u128) * (h as u128);
    let lhs = h2 * a1 as u128 * a2 as u128;
    let rhs = prod as i128 - h2 as i128;
    Ok(TorsionReport { lhs, torsion_h2: prod, rhs, holds: (lhs as i128) > rhs })
}

/// Exact rational `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Ratio {
        assert!(den != 0);
        let g = arith::gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        let s = if den < 0 { -1 } else { 1 };
        Ratio { num: s * num / g, den: s * den / g }
    }

    /// Decimal with `places` digits, rounding half to even.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10i128.pow(places);
        let (num, den) = (self.num as i128 * scale, self.den as i128);
        let neg = num < 0;
        let a = num.abs();
        let (mut q, r) = (a / den, a % den);
        if 2 * r > den || (2 * r == den && q % 2 == 1) {
            q += 1;
        }
        let int = q / scale;
        let frac = q % scale;
        let sign = if neg && q != 0 { "-" } else { "" };
        if places == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac:0width$}", width = places as usize)
        }
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: i64,
    pub k: i64,
    pub d: i64,
    pub localities: Vec<i64>,
    /// `n - k - ceil(k / r) + 2` with the smallest locality.
    pub classical: i64,
    /// `n - k - ceil(k t / r) + t + 1`, only for equal localities.
    pub rawat: Option<i64>,
    pub floor_bound: i64,
    pub ceil_bound: i64,
    pub defect: Ratio,
    pub defect_decimal: String,
}

impl BoundsReport {
    pub fn meets_classical(&self) -> bool {
        self.d == self.classical
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    arith::div_ceil(a, b)
}

pub fn bounds(n: i64, k: i64, d: i64, localities: &[i64]) -> Result<BoundsReport> {
    if localities.is_empty() || localities.iter().any(|&r| r < 1) {
        return Err(Error::Hypothesis("localities must be positive and nonempty".into()));
    }
    if k < 1 || n < k {
        return Err(Error::Hypothesis(format!("need 1 <= k <= n (n = {n}, k = {k})")));
    }
    let mut loc = localities.to_vec();
    loc.sort_unstable();
    let t = loc.len() as i64;
    let classical = n - k - ceil_div(k, loc[0]) + 2;
    let rawat = loc.iter().all(|&r| r == loc[0]).then(|| n - k - ceil_div(k * t, loc[0]) + t + 1);
    let mut sum = 0i64;
    let mut prod = 1i64;
    for &r in loc.iter().rev() {
        prod = prod.saturating_mul(r);
        sum += (k - 1) / prod;
    }
    let floor_bound = n - k + 1 - sum;
    let ceil_bound = n - k - ceil_div((k - 1) * t + 1, 1 + loc.iter().sum::<i64>()) + 2;
    let defect = Ratio::new(floor_bound - d, n);
    Ok(BoundsReport {
        n,
        k,
        d,
        localities: loc,
        classical,
        rawat,
        floor_bound,
        ceil_bound,
        defect,
        defect_decimal: defect.to_decimal(6),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn f49_curve() -> Curve {
        let f = FieldCtx::extension(7, 2).unwrap();
        Curve::short(&f, Felt::ZERO, f.from_int(2)).unwrap()
    }

    fn f64_curve() -> Curve {
        let f = FieldCtx::extension(2, 6).unwrap();
        Curve::new(&f, [Felt::ZERO, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO]).unwrap()
    }

    #[test]
    fn staircase_divisors() {
        let c = f49_curve();
        let h = c.torsion(7).unwrap();
        let d13 = ebasis_divisor(&h, 13);
        let mults: Vec<i64> = d13.iter().map(|&(_, n)| n).collect();
        assert_eq!(mults, vec![2, 2, 2, 2, 2, 2, 1]);
        assert_eq!(ebasis_divisor(&h, 7).len(), 7);
        assert_eq!(ebasis_divisor(&h, 3).len(), 3);
        assert_eq!(ebasis_divisor(&[Pt::Inf], 2), vec![(Pt::Inf, 2)]);
    }

    #[test]
    fn e_basis_pole_pattern() {
        let c = f49_curve();
        let mut h = c.torsion(7).unwrap();
        crate::curve::order_o_last(&mut h);
        let eb = build_e_basis(&c, &h, 13).unwrap();
        assert_eq!(eb.funcs.len(), 13);
        let poles: Vec<i64> = h.iter().map(|p| -eb.funcs[12].valuation(&c, p).unwrap()).collect();
        assert_eq!(poles, vec![2, 2, 2, 2, 2, 2, 1]);
        let e7: Vec<i64> = h.iter().map(|p| -eb.funcs[6].valuation(&c, p).unwrap()).collect();
        assert_eq!(e7, vec![1; 7]);
        let o = build_e_basis(&c, &[Pt::Inf], 2).unwrap();
        assert!(crate::autgrp::affine_equivalence(&c, &Func::x(), &o.funcs[1]).is_some());
    }

    #[test]
    fn single_code_example_one() {
        let c = f49_curve();
        let g = autgrp::make_group(&c, &c.torsion(7).unwrap(), &autgrp::parse_group(&c, "neg").unwrap()).unwrap();
        let code = build_code_single(&c, &g, 4, 2).unwrap();
        assert_eq!((code.n(), code.k(), code.d_lower()), (56, 27, 28));
        assert_eq!(code.witness_weight(), 28);
        let w = code.witness();
        assert_eq!(w.iter().filter(|x| !x.is_zero()).count(), 28);
        let mut with_w = code.matrix.clone();
        with_w.push(w);
        assert_eq!(Matrix::from_rows(with_w, 56).rank(c.field()), 27);
        let b = bounds(56, 27, 28, &[13]).unwrap();
        assert!(b.meets_classical());
        assert!(matches!(build_code_single(&c, &g, 4, 4), Err(Error::Hypothesis(_))));
        assert!(matches!(build_code_single(&c, &g, 5, 2), Err(Error::NotEnoughFibers { .. })));
    }

    #[test]
    fn single_code_repairs() {
        let c = f49_curve();
        let g = autgrp::make_group(&c, &c.torsion(7).unwrap(), &autgrp::parse_group(&c, "neg").unwrap()).unwrap();
        let code = build_code_single(&c, &g, 3, 1).unwrap();
        let f = c.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let msg: Vec<Felt> = (0..code.k()).map(|_| f.random(&mut rng)).collect();
        let word = code.encode(&msg);
        for pos in 0..code.n() {
            let mut erased: Vec<Option<Felt>> = word.iter().copied().map(Some).collect();
            erased[pos] = None;
            assert_eq!(repair(&code, &erased, pos, 1).unwrap(), word[pos]);
        }
        let mut erased: Vec<Option<Felt>> = word.iter().copied().map(Some).collect();
        let helper = code.recovering[0][0][0];
        erased[helper] = None;
        assert_eq!(repair(&code, &erased, 0, 1), Err(Error::MissingSymbols(helper)));
    }

    #[test]
    fn two_code_char2() {
        let c = f64_curve();
        let h = c.subgroup_of_order(3).unwrap();
        let a1 = autgrp::parse_group(&c, "y+1").unwrap();
        let a2 = autgrp::parse_group(&c, "zeta3").unwrap();
        let code = build_code_two(&c, &h, &a1, &a2, 3, 36, true).unwrap();
        let p = two_params(3, 2, 3, 3, 36).unwrap();
        assert_eq!((p.t1, p.t2, p.l), (3, 2, 18));
        assert_eq!(code.n(), 54);
        assert!(code.k() as i64 >= p.k_lower);
        assert_eq!(code.rank(), code.k());
        assert_eq!(code.mode.localities(), vec![5, 6]);
        let f = c.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let msg: Vec<Felt> = (0..code.k()).map(|_| f.random(&mut rng)).collect();
        let word = code.encode(&msg);
        for pos in 0..code.n() {
            for which in 1..=2 {
                let mut erased: Vec<Option<Felt>> = word.iter().copied().map(Some).collect();
                erased[pos] = None;
                assert_eq!(repair(&code, &erased, pos, which).unwrap(), word[pos]);
            }
        }
        let swapped = build_code_two(&c, &h, &a2, &a1, 3, 36, true).unwrap();
        assert_eq!(swapped.mode.localities(), vec![8, 3]);
        assert!(matches!(build_code_two(&c, &h, &a1, &a1, 3, 36, true), Err(Error::SubgroupsIntersect(2))));
    }

    #[test]
    fn torsion_condition_arithmetic() {
        let q = 15625;
        assert!(check_torsion_condition(q, 2, 2, 3).unwrap().holds);
        assert!(!check_torsion_condition(q, 3, 2, 3).unwrap().holds);
        assert!(check_torsion_condition(q, 7, 2, 3).unwrap().holds);
        assert!(check_torsion_condition(q, 1, 1, 1).unwrap().holds);
        assert!(check_torsion_condition(q, 5, 2, 3).is_err());
    }

    #[test]
    fn defect_values() {
        let cases = [(15864, 1006, 14004, vec![7, 8], "0.044945"), (15768, 4160, 8964, vec![17, 18], "0.152270")];
        for (n, k, d, loc, want) in cases {
            assert_eq!(bounds(n, k, d, &loc).unwrap().defect_decimal, want);
        }
        let b = bounds(15864, 1006, 14004, &[8, 7]).unwrap();
        assert_eq!(b.defect, Ratio::new(713, 15864));
        let one = bounds(10, 1, 10, &[3]).unwrap();
        assert_eq!(one.classical, 10);
    }

    #[test]
    fn rounding_half_even() {
        assert_eq!(Ratio::new(1, 8).to_decimal(2), "0.12");
        assert_eq!(Ratio::new(3, 8).to_decimal(2), "0.38");
        assert_eq!(Ratio::new(-1, 3).to_decimal(3), "-0.333");
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let (a, b) = (rng.gen_range(-1000..1000i64), rng.gen_range(1..500i64));
            let s = Ratio::new(a, b).to_decimal(6);
            let v: f64 = s.parse().unwrap();
            assert!((v - a as f64 / b as f64).abs() <= 5e-7 + 1e-12);
        }
    }
}
