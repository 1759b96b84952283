//! Automorphisms fixing `O`, translation maps, groups `T_H A`, their fixed
//! field generator and the completely split fibers.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::curve::{order_o_last, Curve, Pt};
use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};
use crate::funcfield::{multiple_of_sum, riemann_roch_basis, Func};
use crate::linalg::{row_space_basis, Matrix};

/// `x -> c1 x + c2`, `y -> c3 y + c4 x + c5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AutoMap {
    pub c: [Felt; 5],
}

impl AutoMap {
    pub fn identity() -> AutoMap {
        AutoMap { c: [Felt::ONE, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO] }
    }

    /// `P -> -P`.
    pub fn negation(c: &Curve) -> AutoMap {
        let f = c.field();
        AutoMap { c: [Felt::ONE, Felt::ZERO, f.neg(Felt::ONE), f.neg(c.a1()), f.neg(c.a3())] }
    }

    /// `(x, y) -> (u^2 x, u^3 y)`.
    pub fn sigma_u(f: &FieldCtx, u: Felt) -> AutoMap {
        AutoMap { c: [f.pow(u, 2), Felt::ZERO, f.pow(u, 3), Felt::ZERO, Felt::ZERO] }
    }

    /// `(x, y) -> (u^2 x + s^2, y + u^2 s x + t)` on `y^2 + y = x^3`.
    pub fn char2(f: &FieldCtx, u: Felt, s: Felt, t: Felt) -> AutoMap {
        let u2 = f.pow(u, 2);
        AutoMap { c: [u2, f.square(s), Felt::ONE, f.mul(u2, s), t] }
    }

    pub fn is_identity(&self) -> bool {
        *self == AutoMap::identity()
    }

    pub fn apply(&self, c: &Curve, p: &Pt) -> Pt {
        let f = c.field();
        match *p {
            Pt::Inf => Pt::Inf,
            Pt::Aff(x, y) => {
                let [c1, c2, c3, c4, c5] = self.c;
                let nx = f.add(f.mul(c1, x), c2);
                let ny = f.add(f.add(f.mul(c3, y), f.mul(c4, x)), c5);
                Pt::Aff(nx, ny)
            }
        }
    }

    /// `self ∘ o`: apply `o` first.
    pub fn compose(&self, f: &FieldCtx, o: &AutoMap) -> AutoMap {
        let [a1, a2, a3, a4, a5] = self.c;
        let [b1, b2, b3, b4, b5] = o.c;
        AutoMap {
            c: [
                f.mul(a1, b1),
                f.add(f.mul(a1, b2), a2),
                f.mul(a3, b3),
                f.add(f.mul(a3, b4), f.mul(a4, b1)),
                f.add(f.add(f.mul(a3, b5), f.mul(a4, b2)), a5),
            ],
        }
    }

    pub fn inverse(&self, f: &FieldCtx) -> AutoMap {
        let [c1, c2, c3, c4, c5] = self.c;
        let i1 = f.inv(c1).expect("invertible map");
        let i3 = f.inv(c3).expect("invertible map");
        // x = i1 X - i1 c2, y = i3 Y - i3 c4 x - i3 c5.
        let d4 = f.neg(f.mul(i3, f.mul(c4, i1)));
        let d5 = f.sub(f.mul(i3, f.mul(c4, f.mul(i1, c2))), f.mul(i3, c5));
        AutoMap { c: [i1, f.neg(f.mul(i1, c2)), i3, d4, d5] }
    }

    pub fn order(&self, f: &FieldCtx) -> usize {
        let mut k = 1;
        let mut cur = *self;
        while !cur.is_identity() {
            cur = cur.compose(f, self);
            k += 1;
            assert!(k <= 24, "automorphism of order above 24");
        }
        k
    }

    /// The coordinate maps as functions.
    pub fn as_funcs(&self, c: &Curve) -> (Func, Func) {
        let [c1, c2, c3, c4, c5] = self.c;
        let x = Func::x().scale(c, c1).add(c, &Func::constant(c2));
        let y = Func::y().scale(c, c3).add(c, &Func::x().scale(c, c4)).add(c, &Func::constant(c5));
        (x, y)
    }

    /// Whether the substitution maps the curve equation to a multiple of itself.
    pub fn preserves(&self, c: &Curve) -> bool {
        if self.c[0].is_zero() || self.c[2].is_zero() {
            return false;
        }
        let (x, y) = self.as_funcs(c);
        Func::y().substitute(c, &x, &y).is_ok()
    }

    pub fn render(&self, f: &FieldCtx) -> String {
        self.c.iter().map(|&e| f.render(e)).collect::<Vec<_>>().join(" ")
    }

    pub fn parse(f: &FieldCtx, s: &str) -> Result<AutoMap> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 5 {
            return Err(Error::Parse(format!("automorphism {s:?}")));
        }
        let mut c = [Felt::ZERO; 5];
        for (slot, p) in c.iter_mut().zip(parts) {
            *slot = f.parse(p)?;
        }
        Ok(AutoMap { c })
    }
}

fn is_char2_j0_standard(c: &Curve) -> bool {
    let [a1, a2, a3, a4, a6] = c.coeffs();
    c.field().p() == 2 && a1.is_zero() && a2.is_zero() && a3 == Felt::ONE && a4.is_zero() && a6.is_zero()
}

fn is_short(c: &Curve) -> bool {
    c.a1().is_zero() && c.a2().is_zero() && c.a3().is_zero()
}

/// Generators of the `O`-fixing automorphisms defined over the field.
///
/// Supported: `y^2 = x^3 + b` and `y^2 = x^3 + a x` in characteristic at
/// least 5, `y^2 + y = x^3` in characteristic 2, and every other curve
/// with only the negation. Characteristic 2 and 3 curves of `j = 0` in
/// any other shape are rejected.
pub fn aut_catalog(c: &Curve) -> Result<Vec<AutoMap>> {
    let f = c.field();
    let p = f.p();
    let q1 = f.q() - 1;
    if is_char2_j0_standard(c) {
        let mut out = Vec::new();
        let cube_roots: Vec<Felt> = f.elements().filter(|&u| f.pow(u, 3) == Felt::ONE).collect();
        let f4: Vec<Felt> = f.elements().filter(|&s| f.pow(s, 4) == s).collect();
        for &u in &cube_roots {
            for &s in &f4 {
                for t in f.solve_quadratic(Felt::ONE, Felt::ONE, f.neg(f.pow(s, 6))) {
                    out.push(AutoMap::char2(f, u, s, t));
                }
            }
        }
        return Ok(out);
    }
    if (p == 2 && c.a1().is_zero()) || (p == 3 && is_short(c) && c.a4().is_zero()) {
        return Err(Error::UnsupportedFamily("j = 0 in characteristic 2 or 3 outside y^2 + y = x^3".into()));
    }
    if p >= 5 && is_short(c) {
        if c.a4().is_zero() {
            let n = if q1.is_multiple_of(6) { 6 } else { 2 };
            return Ok(vec![AutoMap::sigma_u(f, f.root_of_unity(n)?)]);
        }
        if c.a6().is_zero() {
            let n = if q1.is_multiple_of(4) { 4 } else { 2 };
            return Ok(vec![AutoMap::sigma_u(f, f.root_of_unity(n)?)]);
        }
    }
    Ok(vec![AutoMap::negation(c)])
}

/// Subgroup generated by `gens`, sorted with the identity first.
pub fn closure(c: &Curve, gens: &[AutoMap]) -> Result<Vec<AutoMap>> {
    let f = c.field();
    for g in gens {
        if !g.preserves(c) {
            return Err(Error::NotASubgroup(format!("{} does not preserve the curve", g.render(f))));
        }
    }
    let mut seen: HashSet<AutoMap> = HashSet::from([AutoMap::identity()]);
    let mut frontier = vec![AutoMap::identity()];
    while let Some(a) = frontier.pop() {
        for g in gens {
            let b = g.compose(f, &a);
            if seen.insert(b) {
                if seen.len() > 24 {
                    return Err(Error::NotASubgroup("more than 24 automorphisms".into()));
                }
                frontier.push(b);
            }
        }
    }
    let mut v: Vec<AutoMap> = seen.into_iter().collect();
    v.sort_by_key(|a| (!a.is_identity(), *a));
    Ok(v)
}

/// The full catalog group.
pub fn aut_group(c: &Curve) -> Result<Vec<AutoMap>> {
    closure(c, &aut_catalog(c)?)
}

/// Parse one automorphism token: `id`, `neg`, `zeta3`, `zeta4`, `zeta6`,
/// `y+1`, or `char2(u,s,t)` with `u, s, t` given as integer element codes.
pub fn parse_token(c: &Curve, tok: &str) -> Result<AutoMap> {
    let f = c.field();
    let tok = tok.trim();
    let map = match tok {
        "id" => AutoMap::identity(),
        "neg" => AutoMap::negation(c),
        "zeta3" | "zeta4" | "zeta6" => {
            let n: u64 = tok[4..].parse().unwrap();
            AutoMap::sigma_u(f, f.root_of_unity(n)?)
        }
        "y+1" => AutoMap { c: [Felt::ONE, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ONE] },
        _ => {
            let inner = tok
                .strip_prefix("char2(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("automorphism token {tok:?}")))?;
            let codes: Vec<u32> = inner
                .split(',')
                .map(|s| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("element code {s:?}"))))
                .collect::<Result<_>>()?;
            if codes.len() != 3 || codes.iter().any(|&k| k >= f.order()) {
                return Err(Error::Parse(format!("automorphism token {tok:?}")));
            }
            AutoMap::char2(f, Felt(codes[0]), Felt(codes[1]), Felt(codes[2]))
        }
    };
    if !map.preserves(c) {
        return Err(Error::Hypothesis(format!("automorphism {tok} does not preserve the curve")));
    }
    Ok(map)
}

/// Subgroup generated by a comma- or space-separated token list.
pub fn parse_group(c: &Curve, spec: &str) -> Result<Vec<AutoMap>> {
    let mut gens = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in spec.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == ',' || ch == ' ') {
            if !cur.trim().is_empty() {
                gens.push(parse_token(c, &cur)?);
            }
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if !cur.trim().is_empty() {
        gens.push(parse_token(c, &cur)?);
    }
    closure(c, &gens)
}

/// Coordinates of `P ⊕ Q` as functions of `P`, by the chord formula.
pub fn translation_maps(c: &Curve, q: &Pt) -> (Func, Func) {
    let Pt::Aff(xq, yq) = *q else { return (Func::x(), Func::y()) };
    let f = c.field();
    let x = Func::x();
    let y = Func::y();
    let lam = y.sub(c, &Func::constant(yq)).div(c, &x.sub(c, &Func::constant(xq))).unwrap();
    let nu = y.sub(c, &lam.mul(c, &x));
    let a1 = Func::constant(c.a1());
    let x3 = lam.mul(c, &lam).add(c, &lam.mul(c, &a1)).sub(c, &Func::constant(f.add(c.a2(), xq))).sub(c, &x);
    let y3 = lam.add(c, &a1).mul(c, &x3).add(c, &nu).add(c, &Func::constant(c.a3())).neg(c);
    (x3, y3)
}

/// `G = T_H A` with elements `(Q, σ)` acting as `P -> σ(P) ⊕ Q`.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub h: Vec<Pt>,
    pub a: Vec<AutoMap>,
    pub elements: Vec<(Pt, AutoMap)>,
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn act(&self, c: &Curve, g: &(Pt, AutoMap), p: &Pt) -> Pt {
        c.add(&g.1.apply(c, p), &g.0)
    }

    /// Orbit of `P`, sorted in point order.
    pub fn orbit(&self, c: &Curve, p: &Pt) -> Vec<Pt> {
        let mut v: Vec<Pt> = self.elements.iter().map(|g| self.act(c, g, p)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Product in the semidirect law `(P, α)(Q, β) = (P ⊕ α(Q), αβ)`.
    pub fn compose(&self, c: &Curve, g1: &(Pt, AutoMap), g2: &(Pt, AutoMap)) -> (Pt, AutoMap) {
        (c.add(&g1.0, &g1.1.apply(c, &g2.0)), g1.1.compose(c.field(), &g2.1))
    }
}

/// Validate `H` and `A` and build `T_H A`.
pub fn make_group(c: &Curve, h: &[Pt], a: &[AutoMap]) -> Result<GroupSpec> {
    let f = c.field();
    let hset: HashSet<Pt> = h.iter().copied().collect();
    if !hset.contains(&Pt::Inf) || hset.len() != h.len() {
        return Err(Error::NotASubgroup("H must contain O and have no repeats".into()));
    }
    for p in h {
        if !c.contains(p) {
            return Err(Error::NotOnCurve);
        }
        for q in h {
            if !hset.contains(&c.add(p, q)) {
                return Err(Error::NotASubgroup("H is not closed under addition".into()));
            }
        }
    }
    let aset: HashSet<AutoMap> = a.iter().copied().collect();
    if !aset.contains(&AutoMap::identity()) || aset.len() != a.len() {
        return Err(Error::NotASubgroup("A must contain the identity and have no repeats".into()));
    }
    for s in a {
        if !s.preserves(c) {
            return Err(Error::NotASubgroup(format!("{} does not preserve the curve", s.render(f))));
        }
        for t in a {
            if !aset.contains(&s.compose(f, t)) {
                return Err(Error::NotASubgroup("A is not closed under composition".into()));
            }
        }
        for q in h {
            if !hset.contains(&s.apply(c, q)) {
                return Err(Error::NotASubgroup(format!(
                    "sigma(Q) not in H for sigma = {}, Q = {}",
                    s.render(f),
                    c.render_point(q)
                )));
            }
        }
    }
    let mut hv = h.to_vec();
    order_o_last(&mut hv);
    let mut av = a.to_vec();
    av.sort_by_key(|s| (!s.is_identity(), *s));
    let elements = av.iter().flat_map(|s| hv.iter().map(move |q| (*q, *s))).collect();
    Ok(GroupSpec { h: hv, a: av, elements })
}

/// Number of automorphisms common to two subgroups.
pub fn intersection_size(a1: &[AutoMap], a2: &[AutoMap]) -> usize {
    let s: HashSet<&AutoMap> = a1.iter().collect();
    a2.iter().filter(|x| s.contains(x)).count()
}

/// Generator of the fixed field of `G`, with pole divisor `|A| ΣH`.
///
/// `W = L(|A| ΣH)` is stable under `f -> f∘γ`, and an element of `W` that
/// agrees with `f∘γ` on more than `|A||H|` places outside `H` equals it.
/// So the invariant subspace is the kernel of the stacked differences
/// `b(γP) - b(P)` over all `γ` and `|A||H| + 1` places `P`.
pub fn fixed_field_generator(c: &Curve, g: &GroupSpec) -> Result<Func> {
    let f = c.field();
    if g.h.len() as u64 >= f.q() {
        return Err(Error::Hypothesis("|H| < q".into()));
    }
    if g.a.len() < 2 {
        return Err(Error::Hypothesis("A must be nontrivial".into()));
    }
    let deg = g.a.len() as i64;
    let basis = riemann_roch_basis(c, &multiple_of_sum(&g.h, deg))?;
    let dim = basis.len();
    let hset: HashSet<Pt> = g.h.iter().copied().collect();
    let sample: Vec<Pt> = c.points()?.iter().filter(|p| !hset.contains(p)).take(dim + 1).copied().collect();
    if sample.len() <= dim {
        return Err(Error::Hypothesis("not enough places outside H".into()));
    }
    let mut cache: HashMap<Pt, Vec<Felt>> = HashMap::new();
    let mut values = |p: &Pt| -> Result<Vec<Felt>> {
        if let Some(v) = cache.get(p) {
            return Ok(v.clone());
        }
        let v = basis.iter().map(|b| b.eval(c, p)).collect::<Result<Vec<_>>>()?;
        cache.insert(*p, v.clone());
        Ok(v)
    };
    // Columns in reverse basis order, so echelon pivots favor high pole order.
    let mut rows = Vec::new();
    for p in &sample {
        let base = values(p)?;
        for el in g.elements.iter().filter(|e| !(e.0.is_inf() && e.1.is_identity())) {
            let img = values(&g.act(c, el, p))?;
            let row: Vec<Felt> = img.iter().zip(&base).rev().map(|(&a, &b)| f.sub(a, b)).collect();
            rows.push(row);
        }
    }
    let kernel = Matrix::from_rows(rows, dim).nullspace(f);
    let inv = row_space_basis(f, kernel, dim);
    if inv.len() != 2 {
        return Err(Error::InvariantSpaceDimension(inv.len()));
    }
    let coords: Vec<Felt> = inv[0].iter().rev().copied().collect();
    let z = basis.iter().zip(&coords).fold(Func::zero(), |acc, (b, &k)| acc.add(c, &b.scale(c, k)));
    for p in &g.h {
        if z.valuation(c, p)? != -deg {
            return Err(Error::Invariant(format!("z has the wrong pole order at {}", c.render_point(p))));
        }
    }
    Ok(z)
}

/// A completely split fiber `z = alpha`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fiber {
    pub alpha: Felt,
    pub places: Vec<Pt>,
}

/// Level sets of `z` of full size `|G|`, ordered by `alpha`; with
/// `exclude_torsion`, fibers meeting `E[|H|]` are dropped.
pub fn split_fibers(c: &Curve, g: &GroupSpec, z: &Func, exclude_torsion: bool) -> Result<Vec<Fiber>> {
    let mut buckets: BTreeMap<Felt, Vec<Pt>> = BTreeMap::new();
    for p in c.points()? {
        match z.eval(c, p) {
            Ok(v) => buckets.entry(v).or_default().push(*p),
            Err(Error::PoleError) => {}
            Err(e) => return Err(e),
        }
    }
    let torsion: HashSet<Pt> =
        if exclude_torsion { c.torsion(g.h.len() as u64)?.into_iter().collect() } else { HashSet::new() };
    Ok(buckets
        .into_iter()
        .filter(|(_, pts)| pts.len() == g.order())
        .filter(|(_, pts)| !pts.iter().any(|p| torsion.contains(p)))
        .map(|(alpha, places)| Fiber { alpha, places })
        .collect())
}

/// `(a, b)` with `target = a z + b`, solved from two places and then
/// checked as an identity of functions.
pub fn affine_equivalence(c: &Curve, z: &Func, target: &Func) -> Option<(Felt, Felt)> {
    let f = c.field();
    let mut pairs: Vec<(Felt, Felt)> = Vec::new();
    for p in c.points().ok()? {
        if let (Ok(a), Ok(b)) = (z.eval(c, p), target.eval(c, p)) {
            if pairs.iter().all(|&(za, _)| za != a) {
                pairs.push((a, b));
            }
            if pairs.len() == 2 {
                break;
            }
        }
    }
    if pairs.len() < 2 {
        return None;
    }
    let (z0, t0) = pairs[0];
    let (z1, t1) = pairs[1];
    let a = f.div(f.sub(t1, t0), f.sub(z1, z0)).ok()?;
    let b = f.sub(t0, f.mul(a, z0));
    if a.is_zero() {
        return None;
    }
    let rebuilt = z.scale(c, a).add(c, &Func::constant(b));
    (rebuilt == *target).then_some((a, b))
}

/// `z(γP) = z(P)` for every element and every place off the pole set.
pub fn check_invariance(c: &Curve, g: &GroupSpec, z: &Func) -> Result<bool> {
    let hset: HashSet<Pt> = g.h.iter().copied().collect();
    for p in c.points()?.iter().filter(|p| !hset.contains(p)) {
        let v = z.eval(c, p)?;
        for el in &g.elements {
            if z.eval(c, &g.act(c, el, p))? != v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Each fiber is one orbit.
pub fn check_orbits(c: &Curve, g: &GroupSpec, fibers: &[Fiber]) -> bool {
    fibers.iter().all(|fb| {
        let mut want = fb.places.clone();
        want.sort_unstable();
        g.orbit(c, &fb.places[0]) == want
    })
}

/// `⊕ fiber ⊖ [|A|](⊕ H) = O` for every fiber.
pub fn check_abel(c: &Curve, g: &GroupSpec, fibers: &[Fiber]) -> bool {
    let hsum = g.h.iter().fold(Pt::Inf, |acc, p| c.add(&acc, p));
    let shift = c.mul(g.a.len() as i64, &hsum);
    fibers.iter().all(|fb| {
        let s = fb.places.iter().fold(Pt::Inf, |acc, p| c.add(&acc, p));
        c.sub(&s, &shift).is_inf()
    })
}

/// Only the identity fixes a fiber place.
pub fn check_free_action(c: &Curve, g: &GroupSpec, fibers: &[Fiber]) -> bool {
    fibers
        .iter()
        .flat_map(|fb| fb.places.iter())
        .all(|p| g.elements.iter().filter(|el| g.act(c, el, p) == *p).count() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{find_special_curve, CurveFamily};
    use crate::poly::Poly;

    fn f49_curve() -> Curve {
        let f = FieldCtx::extension(7, 2).unwrap();
        Curve::short(&f, Felt::ZERO, f.from_int(2)).unwrap()
    }

    fn f64_curve() -> Curve {
        let f = FieldCtx::extension(2, 6).unwrap();
        Curve::new(&f, [Felt::ZERO, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO]).unwrap()
    }

    #[test]
    fn catalog_orders() {
        assert_eq!(aut_group(&f49_curve()).unwrap().len(), 6);
        let f = FieldCtx::extension(37, 2).unwrap();
        let c = Curve::short(&f, Felt::ONE, Felt::ZERO).unwrap();
        assert_eq!(aut_group(&c).unwrap().len(), 4);
        let c64 = f64_curve();
        let all = aut_group(&c64).unwrap();
        assert_eq!(all.len(), 24);
        let a1 = parse_group(&c64, "y+1").unwrap();
        let a2 = parse_group(&c64, "zeta3").unwrap();
        assert_eq!((a1.len(), a2.len(), intersection_size(&a1, &a2)), (2, 3, 1));
        assert!(a1.iter().chain(&a2).all(|s| all.contains(s)));
        let f7 = FieldCtx::prime(7).unwrap();
        let generic = Curve::short(&f7, Felt::ONE, Felt::ONE).unwrap();
        assert_eq!(aut_group(&generic).unwrap().len(), 2);
    }

    #[test]
    fn maps_act_on_points() {
        let c = f64_curve();
        let f = c.field();
        for s in aut_group(&c).unwrap() {
            let inv = s.inverse(f);
            assert!(s.compose(f, &inv).is_identity());
            for p in c.points().unwrap() {
                let img = s.apply(&c, p);
                assert!(c.contains(&img));
                // Group automorphisms fixing O are homomorphisms.
                let q = c.points().unwrap()[5];
                assert_eq!(s.apply(&c, &c.add(p, &q)), c.add(&img, &s.apply(&c, &q)));
            }
        }
        assert!(parse_token(&c, "zeta4").is_err());
        assert!(parse_token(&c, "char2(1,0,0)").unwrap().is_identity());
    }

    #[test]
    fn translations_agree_with_group_law() {
        let c = f49_curve();
        let pts = c.points().unwrap();
        for q in pts.iter().take(6) {
            let (xm, ym) = translation_maps(&c, q);
            assert_eq!(Func::y().substitute(&c, &xm, &ym).unwrap(), ym);
            for p in pts {
                let s = c.add(p, q);
                if let Pt::Aff(sx, sy) = s {
                    if let (Ok(a), Ok(b)) = (xm.eval(&c, p), ym.eval(&c, p)) {
                        assert_eq!((a, b), (sx, sy));
                    }
                }
            }
        }
    }

    #[test]
    fn group_validation() {
        let c = f49_curve();
        let h = c.torsion(7).unwrap();
        let neg = parse_group(&c, "neg").unwrap();
        assert_eq!(make_group(&c, &h, &neg).unwrap().order(), 14);
        let c64 = f64_curve();
        let h3 = c64.subgroup_of_order(3).unwrap();
        assert_eq!(h3, vec![Pt::Aff(Felt::ZERO, Felt::ZERO), Pt::Aff(Felt::ZERO, Felt::ONE), Pt::Inf]);
        let a12 = parse_group(&c64, "y+1,zeta3").unwrap();
        assert_eq!(make_group(&c64, &h3, &a12).unwrap().order(), 18);
        let p = c64.points().unwrap().iter().find(|p| c64.point_order(p) == 9).copied().unwrap();
        let h9 = c64.generated_subgroup(&[p]);
        let stable = h9.iter().all(|q| a12.iter().all(|s| h9.contains(&s.apply(&c64, q))));
        assert_eq!(make_group(&c64, &h9, &a12).is_ok(), stable);
        let not_closed = vec![p, Pt::Inf];
        assert!(matches!(make_group(&c64, &not_closed, &a12), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn example_one_fixed_field() {
        let c = f49_curve();
        let f = c.field();
        let g = make_group(&c, &c.torsion(7).unwrap(), &parse_group(&c, "neg").unwrap()).unwrap();
        let z = fixed_field_generator(&c, &g).unwrap();
        assert!(check_invariance(&c, &g, &z).unwrap());
        let target = Func::from_x_fraction(
            f,
            Poly::from_ints(f, &[0, 6, 0, 0, 3, 0, 0, 1]),
            Poly::from_ints(f, &[1, 0, 0, 5, 0, 0, 1]),
        )
        .unwrap();
        assert!(affine_equivalence(&c, &z, &target).is_some());
        let fibers = split_fibers(&c, &g, &z, false).unwrap();
        assert_eq!(fibers.len(), 4);
        assert!(check_orbits(&c, &g, &fibers));
        assert!(check_abel(&c, &g, &fibers));
        assert!(check_free_action(&c, &g, &fibers));
    }

    #[test]
    fn trivial_translation_part_gives_x() {
        let c = f49_curve();
        let g = make_group(&c, &[Pt::Inf], &parse_group(&c, "neg").unwrap()).unwrap();
        let z = fixed_field_generator(&c, &g).unwrap();
        assert!(affine_equivalence(&c, &z, &Func::x()).is_some());
    }

    #[test]
    fn char2_fixed_field_and_fibers() {
        let c = f64_curve();
        let h3 = c.subgroup_of_order(3).unwrap();
        let a12 = parse_group(&c, "y+1,zeta3").unwrap();
        let g = make_group(&c, &h3, &a12).unwrap();
        let z = fixed_field_generator(&c, &g).unwrap();
        assert!(check_invariance(&c, &g, &z).unwrap());
        let fibers = split_fibers(&c, &g, &z, true).unwrap();
        assert_eq!(fibers.len(), 4);
        assert!(check_orbits(&c, &g, &fibers) && check_abel(&c, &g, &fibers));
    }

    #[test]
    fn special_curve_catalog() {
        let f = FieldCtx::extension(5, 2).unwrap();
        let c = find_special_curve(CurveFamily::Max, &f).unwrap();
        assert!(aut_group(&c).unwrap().len() >= 2);
    }
}
