//! Functions on an elliptic curve in the canonical form `(u(x) + v(x) y) / d(x)`,
//! with valuations, evaluation, substitution and Riemann-Roch spaces.

use std::collections::BTreeMap;

use crate::arith;
use crate::curve::{Curve, Pt};
use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};
use crate::linalg::{row_space_basis, Matrix};
use crate::poly::Poly;
use crate::series::{self, finite_param, infinity_param, Laurent, Uniformizer};

/// `(u + v y) / d` with `d` monic and `gcd(u, v, d) = 1`. Every function on
/// the curve has exactly one such form, so equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Func {
    pub u: Poly,
    pub v: Poly,
    pub d: Poly,
}

/// Effective divisor on rational places, as `(place, multiplicity)` pairs.
pub type DivisorSpec = Vec<(Pt, i64)>;

/// Expansion of a function in the uniformizer of a place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub place: Pt,
    pub uniformizer: Uniformizer,
    pub val: i64,
    pub coeffs: Vec<Felt>,
}

const START_PREC: usize = 8;

impl Func {
    pub fn new(f: &FieldCtx, u: Poly, v: Poly, d: Poly) -> Result<Func> {
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if u.is_zero() && v.is_zero() {
            return Ok(Func::zero());
        }
        let g = u.gcd(f, &v).gcd(f, &d);
        let (mut u, mut v, mut d) = (u, v, d);
        if g.deg() > 0 {
            u = u.div_exact(f, &g)?;
            v = v.div_exact(f, &g)?;
            d = d.div_exact(f, &g)?;
        }
        let c = f.inv(d.lead())?;
        Ok(Func { u: u.scale(f, c), v: v.scale(f, c), d: d.scale(f, c) })
    }

    pub fn zero() -> Func {
        Func { u: Poly::zero(), v: Poly::zero(), d: Poly::one() }
    }

    pub fn one() -> Func {
        Func::constant(Felt::ONE)
    }

    pub fn constant(c: Felt) -> Func {
        Func { u: Poly::constant(c), v: Poly::zero(), d: Poly::one() }
    }

    pub fn x() -> Func {
        Func { u: Poly::x(), v: Poly::zero(), d: Poly::one() }
    }

    pub fn y() -> Func {
        Func { u: Poly::zero(), v: Poly::one(), d: Poly::one() }
    }

    /// The rational function `p(x) / q(x)`.
    pub fn from_x_fraction(f: &FieldCtx, p: Poly, q: Poly) -> Result<Func> {
        Func::new(f, p, Poly::zero(), q)
    }

    pub fn is_zero(&self) -> bool {
        self.u.is_zero() && self.v.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.v.is_zero() && self.u.is_constant() && self.d.is_constant()
    }

    pub fn add(&self, c: &Curve, o: &Func) -> Func {
        let f = c.field();
        let g = self.d.gcd(f, &o.d);
        let m1 = o.d.div_exact(f, &g).unwrap();
        let m2 = self.d.div_exact(f, &g).unwrap();
        let u = self.u.mul(f, &m1).add(f, &o.u.mul(f, &m2));
        let v = self.v.mul(f, &m1).add(f, &o.v.mul(f, &m2));
        Func::new(f, u, v, self.d.mul(f, &m1)).unwrap()
    }

    pub fn neg(&self, c: &Curve) -> Func {
        let f = c.field();
        Func { u: self.u.neg(f), v: self.v.neg(f), d: self.d.clone() }
    }

    pub fn sub(&self, c: &Curve, o: &Func) -> Func {
        self.add(c, &o.neg(c))
    }

    pub fn scale(&self, c: &Curve, k: Felt) -> Func {
        if k.is_zero() {
            return Func::zero();
        }
        let f = c.field();
        Func { u: self.u.scale(f, k), v: self.v.scale(f, k), d: self.d.clone() }
    }

    /// Product, reducing `y^2 = g(x) - h(x) y`.
    pub fn mul(&self, c: &Curve, o: &Func) -> Func {
        let f = c.field();
        let vv = self.v.mul(f, &o.v);
        let u = self.u.mul(f, &o.u).add(f, &vv.mul(f, &c.g_poly()));
        let v = self.u.mul(f, &o.v).add(f, &o.u.mul(f, &self.v)).sub(f, &vv.mul(f, &c.h_poly()));
        Func::new(f, u, v, self.d.mul(f, &o.d)).unwrap()
    }

    pub fn pow(&self, c: &Curve, mut e: u32) -> Func {
        let mut acc = Func::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(c, &b);
            }
            b = b.mul(c, &b);
            e >>= 1;
        }
        acc
    }

    /// `N(u + v y) = u^2 - u v h - v^2 g`, the product with the conjugate.
    pub fn numerator_norm(&self, c: &Curve) -> Poly {
        let f = c.field();
        let uu = self.u.mul(f, &self.u);
        let uvh = self.u.mul(f, &self.v).mul(f, &c.h_poly());
        let vvg = self.v.mul(f, &self.v).mul(f, &c.g_poly());
        uu.sub(f, &uvh).sub(f, &vvg)
    }

    pub fn inv(&self, c: &Curve) -> Result<Func> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = c.field();
        let n = self.numerator_norm(c);
        let u = self.d.mul(f, &self.u.sub(f, &self.v.mul(f, &c.h_poly())));
        let v = self.d.mul(f, &self.v).neg(f);
        Func::new(f, u, v, n)
    }

    pub fn div(&self, c: &Curve, o: &Func) -> Result<Func> {
        Ok(self.mul(c, &o.inv(c)?))
    }

    /// `p(self)` for a polynomial `p`.
    pub fn compose_poly(&self, c: &Curve, p: &Poly) -> Func {
        p.0.iter().rev().fold(Func::zero(), |acc, &k| acc.mul(c, self).add(c, &Func::constant(k)))
    }

    /// `v_O(f) = 2 deg d - max(2 deg u, 2 deg v + 3)`; the two terms have
    /// different parity so they never cancel.
    fn valuation_at_infinity(&self) -> i64 {
        let pu = if self.u.is_zero() { i64::MIN } else { 2 * self.u.deg() };
        let pv = if self.v.is_zero() { i64::MIN } else { 2 * self.v.deg() + 3 };
        2 * self.d.deg() - pu.max(pv)
    }

    /// Zero count of `u + v y` with multiplicity; bounds every finite
    /// valuation of the numerator.
    fn numerator_degree(&self) -> usize {
        let pu = if self.u.is_zero() { 0 } else { 2 * self.u.deg() };
        let pv = if self.v.is_zero() { 0 } else { 2 * self.v.deg() + 3 };
        pu.max(pv) as usize
    }

    /// Series of `u(x) + v(x) y` at a finite point.
    fn numerator_series(&self, c: &Curve, p: &Pt, prec: usize) -> Vec<Felt> {
        let f = c.field();
        let lp = finite_param(c, p, prec);
        let us = series::poly_of_series(f, &self.u, &lp.x, prec);
        let vs = series::poly_of_series(f, &self.v, &lp.x, prec);
        let vy = series::series_mul(f, &vs, &lp.y, prec);
        us.iter().zip(&vy).map(|(&a, &b)| f.add(a, b)).collect()
    }

    fn numerator_order(&self, c: &Curve, p: &Pt) -> Result<i64> {
        let cap = self.numerator_degree() + 2;
        let mut prec = START_PREC;
        loop {
            let s = self.numerator_series(c, p, prec);
            if let Some(k) = series::order(&s) {
                return Ok(k as i64);
            }
            if prec > cap {
                return Err(Error::PrecisionExhausted);
            }
            prec *= 2;
        }
    }

    /// `v_P(f)`.
    pub fn valuation(&self, c: &Curve, p: &Pt) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Hypothesis("valuation of the zero function".into()));
        }
        match p {
            Pt::Inf => Ok(self.valuation_at_infinity()),
            Pt::Aff(alpha, beta) => {
                let f = c.field();
                let e = if series::is_ramified(c, *alpha, *beta) { 2 } else { 1 };
                let den =
                    if self.d.eval(f, *alpha).is_zero() { e * self.d.root_multiplicity(f, *alpha) as i64 } else { 0 };
                let num =
                    if self.u.eval(f, *alpha).is_zero() || !self.v.is_zero() { self.numerator_order(c, p)? } else { 0 };
                Ok(num - den)
            }
        }
    }

    /// `f(P)`, or `PoleError` when `v_P(f) < 0`.
    pub fn eval(&self, c: &Curve, p: &Pt) -> Result<Felt> {
        let f = c.field();
        match *p {
            Pt::Inf => {
                if self.is_zero() {
                    return Ok(Felt::ZERO);
                }
                if self.valuation_at_infinity() < 0 {
                    return Err(Error::PoleError);
                }
                Ok(if self.u.deg() == self.d.deg() { self.u.lead() } else { Felt::ZERO })
            }
            Pt::Aff(x, y) => {
                let den = self.d.eval(f, x);
                if !den.is_zero() {
                    let num = f.add(self.u.eval(f, x), f.mul(self.v.eval(f, x), y));
                    return f.div(num, den);
                }
                if self.is_zero() {
                    return Ok(Felt::ZERO);
                }
                let v = self.valuation(c, p)?;
                if v < 0 {
                    return Err(Error::PoleError);
                }
                if v > 0 {
                    return Ok(Felt::ZERO);
                }
                let exp = self.local_expansion(c, p, 1)?;
                Ok(exp.coeffs[0])
            }
        }
    }

    /// Evaluate at every point of `pts`.
    pub fn eval_all(&self, c: &Curve, pts: &[Pt]) -> Result<Vec<Felt>> {
        pts.iter().map(|p| self.eval(c, p)).collect()
    }

    /// Expansion of `f` at `P` with `prec` coefficients after the leading one.
    pub fn local_expansion(&self, c: &Curve, p: &Pt, prec: usize) -> Result<LocalExpansion> {
        if self.is_zero() {
            return Err(Error::Hypothesis("expansion of the zero function".into()));
        }
        let f = c.field();
        let prec = prec.max(1);
        match p {
            Pt::Inf => {
                let pad = 2 * (self.numerator_degree() + 2 * self.d.deg().max(0) as usize) + 8;
                let (x, y) = infinity_param(c, prec + pad);
                let cp = prec + pad;
                let num = x.eval_poly(f, &self.u, cp).add(f, &x.eval_poly(f, &self.v, cp).mul(f, &y));
                let den = x.eval_poly(f, &self.d, cp);
                let q = num.mul(f, &den.inv(f)?);
                if q.coeffs.len() < prec || q.val != self.valuation_at_infinity() {
                    return Err(Error::PrecisionExhausted);
                }
                Ok(LocalExpansion {
                    place: *p,
                    uniformizer: Uniformizer::XOverY,
                    val: q.val,
                    coeffs: q.coeffs[..prec].to_vec(),
                })
            }
            Pt::Aff(alpha, beta) => {
                let e = if series::is_ramified(c, *alpha, *beta) { 2 } else { 1 };
                let vd = e * self.d.root_multiplicity(f, *alpha) as usize;
                let vn = self.numerator_order(c, p)? as usize;
                let abs = vn.max(vd) + prec;
                let lp = finite_param(c, p, abs);
                let num = self.numerator_series(c, p, abs);
                let den = series::poly_of_series(f, &self.d, &lp.x, abs);
                let qn = Laurent { val: vn as i64, coeffs: num[vn..].to_vec() };
                let qd = Laurent { val: vd as i64, coeffs: den[vd..].to_vec() };
                let q = qn.mul(f, &qd.inv(f)?);
                Ok(LocalExpansion {
                    place: *p,
                    uniformizer: lp.uniformizer(),
                    val: q.val,
                    coeffs: q.coeffs[..prec].to_vec(),
                })
            }
        }
    }

    /// `f(xmap, ymap)`; the maps must satisfy the curve equation.
    pub fn substitute(&self, c: &Curve, xmap: &Func, ymap: &Func) -> Result<Func> {
        let lhs = ymap.mul(c, ymap).add(c, &xmap.compose_poly(c, &c.h_poly()).mul(c, ymap));
        if lhs != xmap.compose_poly(c, &c.g_poly()) {
            return Err(Error::NotAnEndomorphism);
        }
        let u = xmap.compose_poly(c, &self.u);
        let v = xmap.compose_poly(c, &self.v);
        let d = xmap.compose_poly(c, &self.d);
        u.add(c, &v.mul(c, ymap)).div(c, &d).map_err(|_| Error::ZeroDenominator)
    }

    /// `(u)/(d) + (v)/(d)*y` with low-degree-first coefficient lists.
    pub fn render(&self, f: &FieldCtx) -> String {
        format!("({})/({}) + ({})/({})*y", self.u.render(f), self.d.render(f), self.v.render(f), self.d.render(f))
    }
}

/// Monomials of the ansatz numerator, as `(is_y, i)` for `x^i` or `x^i y`,
/// ordered by decreasing pole order at infinity.
fn ansatz_monomials(budget: i64) -> Vec<(bool, usize)> {
    let mut cols: Vec<(i64, bool, usize)> = Vec::new();
    if budget >= 0 {
        for i in 0..=(budget / 2) as usize {
            cols.push((2 * i as i64, false, i));
        }
    }
    if budget >= 3 {
        for i in 0..=((budget - 3) / 2) as usize {
            cols.push((2 * i as i64 + 3, true, i));
        }
    }
    cols.sort_by_key(|c| std::cmp::Reverse(c.0));
    cols.into_iter().map(|(_, y, i)| (y, i)).collect()
}

/// Basis of `L(D)` for an effective divisor on rational places.
///
/// The ansatz is `(u + v y) / prod (x - alpha_j)^{m_j}`: the denominator
/// covers every finite pole, degree bounds on `u, v` cover the pole at
/// infinity, and the remaining valuation conditions are linear in the
/// coefficients of `u` and `v`. The result is in reduced echelon form with
/// respect to the numerator monomials, sorted by increasing leading
/// monomial, so it is canonical.
pub fn riemann_roch_basis(c: &Curve, d: &DivisorSpec) -> Result<Vec<Func>> {
    let f = c.field();
    if d.is_empty() {
        return Err(Error::DegenerateDivisor("empty divisor".into()));
    }
    let mut mult: BTreeMap<Pt, i64> = BTreeMap::new();
    for &(p, n) in d {
        if n <= 0 {
            return Err(Error::DegenerateDivisor(format!("multiplicity {n} is not positive")));
        }
        if !c.contains(&p) {
            return Err(Error::NotOnCurve);
        }
        if mult.insert(p, n).is_some() {
            return Err(Error::DegenerateDivisor("repeated place".into()));
        }
    }
    let degree: i64 = mult.values().sum();
    let n_inf = mult.get(&Pt::Inf).copied().unwrap_or(0);

    // Distinct x-coordinates of finite support, with all places above each.
    let mut alphas: BTreeMap<Felt, Vec<(Pt, i64, i64)>> = BTreeMap::new();
    for &p in mult.keys() {
        if let Pt::Aff(alpha, _) = p {
            alphas.entry(alpha).or_insert_with(|| {
                c.ys_over(alpha)
                    .into_iter()
                    .map(|y| {
                        let q = Pt::Aff(alpha, y);
                        let e = if series::is_ramified(c, alpha, y) { 2 } else { 1 };
                        (q, mult.get(&q).copied().unwrap_or(0), e)
                    })
                    .collect()
            });
        }
    }
    let mut denom = Poly::one();
    let mut total_m = 0i64;
    let mut conditions: Vec<(Pt, usize)> = Vec::new();
    for (&alpha, places) in &alphas {
        let m = places.iter().map(|&(_, n, e)| arith::div_ceil(n, e)).max().unwrap_or(0);
        denom = denom.mul(f, &Poly::linear(f, alpha).pow(f, m as u32));
        total_m += m;
        for &(q, n, e) in places {
            let k = m * e - n;
            if k > 0 {
                conditions.push((q, k as usize));
            }
        }
    }
    let budget = n_inf + 2 * total_m;
    let cols = ansatz_monomials(budget);

    let mut rows: Vec<Vec<Felt>> = Vec::new();
    for &(q, k) in &conditions {
        let lp = finite_param(c, &q, k);
        let max_i = cols.iter().map(|&(_, i)| i).max().unwrap_or(0);
        let mut xpow = vec![vec![Felt::ZERO; k]; max_i + 1];
        xpow[0][0] = Felt::ONE;
        for i in 1..=max_i {
            xpow[i] = series::series_mul(f, &xpow[i - 1], &lp.x, k);
        }
        let base = rows.len();
        rows.extend((0..k).map(|_| Vec::with_capacity(cols.len())));
        for &(is_y, i) in &cols {
            let s = if is_y { series::series_mul(f, &xpow[i], &lp.y, k) } else { xpow[i].clone() };
            for r in 0..k {
                rows[base + r].push(s[r]);
            }
        }
    }
    let system = Matrix::from_rows(rows, cols.len());
    let kernel = system.nullspace(f);
    let basis_vecs = row_space_basis(f, kernel, cols.len());
    if basis_vecs.len() as i64 != degree {
        return Err(Error::Invariant(format!("l(D) = {} but deg D = {degree}", basis_vecs.len())));
    }
    let mut out = Vec::with_capacity(basis_vecs.len());
    for vec in basis_vecs.iter().rev() {
        let mut u = vec![Felt::ZERO; cols.len()];
        let mut v = vec![Felt::ZERO; cols.len()];
        for (&(is_y, i), &a) in cols.iter().zip(vec) {
            if is_y {
                v[i] = a;
            } else {
                u[i] = a;
            }
        }
        out.push(Func::new(f, Poly::from_coeffs(u), Poly::from_coeffs(v), denom.clone())?);
    }
    Ok(out)
}

/// Coordinates of `g` in `basis`, by interpolation at places where every
/// function is regular, confirmed by exact recombination.
pub fn coordinates_in_space(c: &Curve, g: &Func, basis: &[Func]) -> Result<Vec<Felt>> {
    let f = c.field();
    let want = basis.len() + 8;
    let mut rows = Vec::new();
    for p in c.points()?.iter().skip(1) {
        let x = p.x().unwrap();
        if basis.iter().chain(std::iter::once(g)).any(|b| b.d.eval(f, x).is_zero()) {
            continue;
        }
        let mut row: Vec<Felt> = basis.iter().map(|b| b.eval(c, p)).collect::<Result<_>>()?;
        row.push(g.eval(c, p)?);
        rows.push(row);
        if rows.len() == want {
            break;
        }
    }
    let n = basis.len();
    let mut m = Matrix::from_rows(rows, n + 1);
    let pivots = m.rref(f);
    if pivots.contains(&n) || pivots.len() < n {
        return Err(Error::NotInSpace);
    }
    let coords: Vec<Felt> = (0..n).map(|i| m.rows[i][n]).collect();
    let back = recombine(c, basis, &coords);
    if &back != g {
        return Err(Error::NotInSpace);
    }
    Ok(coords)
}

/// `sum coords[i] * basis[i]`.
pub fn recombine(c: &Curve, basis: &[Func], coords: &[Felt]) -> Func {
    basis.iter().zip(coords).fold(Func::zero(), |acc, (b, &k)| acc.add(c, &b.scale(c, k)))
}

/// Divisor `n * sum P` over a list of points.
pub fn multiple_of_sum(points: &[Pt], n: i64) -> DivisorSpec {
    points.iter().map(|&p| (p, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f49_curve() -> Curve {
        let f = FieldCtx::extension(7, 2).unwrap();
        Curve::short(&f, Felt::ZERO, f.from_int(2)).unwrap()
    }

    fn f64_curve() -> Curve {
        let f = FieldCtx::extension(2, 6).unwrap();
        Curve::new(&f, [Felt::ZERO, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO]).unwrap()
    }

    fn f7_curve() -> Curve {
        let f = FieldCtx::prime(7).unwrap();
        Curve::short(&f, Felt::ONE, Felt::ZERO).unwrap()
    }

    /// Valuation from the norm: at a ramified point `v_P = ord N`, since
    /// `v_P(x - alpha) = 2` and conjugation fixes `P`; at an unramified
    /// point strip shared `(x - alpha)` factors first, after which at most
    /// one of `P`, `-P` is a zero and the norm order is the valuation there.
    fn oracle_valuation(c: &Curve, g: &Func, p: &Pt) -> i64 {
        let f = c.field();
        let Pt::Aff(alpha, beta) = *p else { return g.valuation_at_infinity() };
        let lin = Poly::linear(f, alpha);
        let ramified = series::is_ramified(c, alpha, beta);
        let e = if ramified { 2 } else { 1 };
        let (mut u, mut v) = (g.u.clone(), g.v.clone());
        let mut k = 0i64;
        while !ramified && u.rem(f, &lin).unwrap().is_zero() && v.rem(f, &lin).unwrap().is_zero() {
            u = u.div_exact(f, &lin).unwrap();
            v = v.div_exact(f, &lin).unwrap();
            k += 1;
        }
        let h = Func { u: u.clone(), v: v.clone(), d: Poly::one() };
        let n = h.numerator_norm(c);
        let ord = n.root_multiplicity(f, alpha) as i64;
        let at_p = f.add(u.eval(f, alpha), f.mul(v.eval(f, alpha), beta));
        let num = if ramified {
            ord
        } else if at_p.is_zero() {
            k + ord
        } else {
            k
        };
        num - e * g.d.root_multiplicity(f, alpha) as i64
    }

    fn random_func(c: &Curve, rng: &mut ChaCha8Rng, deg: usize) -> Func {
        let f = c.field();
        let mut poly = |d: usize| Poly::from_coeffs((0..=d).map(|_| f.random(rng)).collect());
        let (u, v) = (poly(deg), poly(deg));
        let mut d = Poly::one();
        for _ in 0..rng.gen_range(0..3) {
            let pts = c.points().unwrap();
            let p = pts[rng.gen_range(1..pts.len())];
            d = d.mul(f, &Poly::linear(f, p.x().unwrap()));
        }
        Func::new(f, u, v, d).unwrap()
    }

    #[test]
    fn coordinate_pole_orders() {
        let c = f49_curve();
        assert_eq!(Func::x().valuation(&c, &Pt::Inf).unwrap(), -2);
        assert_eq!(Func::y().valuation(&c, &Pt::Inf).unwrap(), -3);
        assert!(matches!(Func::x().eval(&c, &Pt::Inf), Err(Error::PoleError)));
        let p = c.points().unwrap()[1];
        let alpha = p.x().unwrap();
        let xa = Func::x().sub(&c, &Func::constant(alpha));
        assert_eq!(xa.valuation(&c, &p).unwrap(), 1);
    }

    #[test]
    fn ramified_point_doubles_x_valuation() {
        let c = f7_curve();
        let p = Pt::Aff(Felt::ZERO, Felt::ZERO);
        let xa = Func::x();
        assert_eq!(xa.valuation(&c, &p).unwrap(), 2);
        assert_eq!(Func::y().valuation(&c, &p).unwrap(), 1);
        let exp = Func::x().local_expansion(&c, &p, 4).unwrap();
        assert_eq!(exp.uniformizer, Uniformizer::YMinusBeta);
        assert_eq!(exp.val, 2);
    }

    #[test]
    fn canonical_form_normalizes() {
        let c = f49_curve();
        let f = c.field();
        let a = f.from_int(3);
        let lin = Poly::linear(f, a);
        let g = Func::new(f, lin.scale(f, f.from_int(2)), Poly::zero(), lin.scale(f, f.from_int(5))).unwrap();
        assert_eq!(g, Func::constant(f.div(f.from_int(2), f.from_int(5)).unwrap()));
        let p = c.points().unwrap()[1];
        let ratio = Func::x().sub(&c, &Func::constant(p.x().unwrap()));
        let one = ratio.div(&c, &ratio).unwrap();
        assert_eq!(one.eval(&c, &p).unwrap(), Felt::ONE);
        let num = Poly::x().pow(f, 2);
        let h = Func::new(f, Poly::x(), num, Poly::linear(f, a).scale(f, f.from_int(4))).unwrap();
        assert_eq!(h.d.lead(), Felt::ONE);
    }

    #[test]
    fn valuations_match_norm_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for c in [f49_curve(), f64_curve(), f7_curve()] {
            let pts = c.points().unwrap().to_vec();
            for _ in 0..40 {
                let g = random_func(&c, &mut rng, 3);
                if g.is_zero() {
                    continue;
                }
                // Force zeros at a point by multiplying with (x - alpha)^k.
                let p = pts[rng.gen_range(1..pts.len())];
                let k = rng.gen_range(0..3u32);
                let lin = Func::x().sub(&c, &Func::constant(p.x().unwrap())).pow(&c, k);
                let g = g.mul(&c, &lin);
                for q in pts.iter().take(30) {
                    assert_eq!(g.valuation(&c, q).unwrap(), oracle_valuation(&c, &g, q), "{g:?} at {q:?}");
                }
            }
        }
    }

    #[test]
    fn valuation_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c = f49_curve();
        let pts = c.points().unwrap().to_vec();
        for _ in 0..30 {
            let a = random_func(&c, &mut rng, 2);
            let b = random_func(&c, &mut rng, 2);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let p = pts[rng.gen_range(0..pts.len())];
            let ab = a.mul(&c, &b);
            assert_eq!(ab.valuation(&c, &p).unwrap(), a.valuation(&c, &p).unwrap() + b.valuation(&c, &p).unwrap());
        }
    }

    #[test]
    fn field_operations_agree_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = f64_curve();
        let f = c.field().clone();
        let pts = c.points().unwrap().to_vec();
        for _ in 0..20 {
            let a = random_func(&c, &mut rng, 3);
            let b = random_func(&c, &mut rng, 3);
            let s = a.add(&c, &b);
            let m = a.mul(&c, &b);
            for p in &pts {
                if let (Ok(x), Ok(y)) = (a.eval(&c, p), b.eval(&c, p)) {
                    assert_eq!(s.eval(&c, p).unwrap(), f.add(x, y));
                    assert_eq!(m.eval(&c, p).unwrap(), f.mul(x, y));
                }
            }
            if !a.is_zero() {
                assert_eq!(a.mul(&c, &a.inv(&c).unwrap()), Func::one());
            }
        }
    }

    #[test]
    fn expansion_at_infinity() {
        let c = f64_curve();
        let e = Func::x().local_expansion(&c, &Pt::Inf, 5).unwrap();
        assert_eq!(e.val, -2);
        let e = Func::y().local_expansion(&c, &Pt::Inf, 5).unwrap();
        assert_eq!(e.val, -3);
        let g = Func::y().div(&c, &Func::x().pow(&c, 2)).unwrap();
        assert_eq!(g.valuation(&c, &Pt::Inf).unwrap(), 1);
        assert_eq!(g.local_expansion(&c, &Pt::Inf, 3).unwrap().val, 1);
    }

    #[test]
    fn substitution() {
        let c = f49_curve();
        let f = c.field();
        let x = Func::x();
        let negy = Func::y().neg(&c);
        assert_eq!(x.substitute(&c, &x, &negy).unwrap(), x);
        assert_eq!(Func::y().substitute(&c, &x, &negy).unwrap(), negy);
        assert_eq!(Func::y().substitute(&c, &x, &x), Err(Error::NotAnEndomorphism));
        let u = f.root_of_unity(6).unwrap();
        let xm = x.scale(&c, f.pow(u, 2));
        let ym = Func::y().scale(&c, f.pow(u, 3));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let g = random_func(&c, &mut rng, 2);
            let h = g.substitute(&c, &xm, &ym).unwrap();
            for p in c.points().unwrap() {
                let Pt::Aff(px, py) = *p else { continue };
                let img = Pt::Aff(f.mul(f.pow(u, 2), px), f.mul(f.pow(u, 3), py));
                if let Ok(v) = g.eval(&c, &img) {
                    assert_eq!(h.eval(&c, p).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn classical_riemann_roch_spaces() {
        let c = f49_curve();
        assert_eq!(riemann_roch_basis(&c, &vec![(Pt::Inf, 2)]).unwrap(), vec![Func::one(), Func::x()]);
        assert_eq!(riemann_roch_basis(&c, &vec![(Pt::Inf, 3)]).unwrap(), vec![Func::one(), Func::x(), Func::y()]);
        assert_eq!(riemann_roch_basis(&c, &vec![(Pt::Inf, 1)]).unwrap(), vec![Func::one()]);
        let e7 = c.torsion(7).unwrap();
        let b = riemann_roch_basis(&c, &multiple_of_sum(&e7, 2)).unwrap();
        assert_eq!(b.len(), 14);
        assert!(riemann_roch_basis(&c, &vec![]).is_err());
        assert!(riemann_roch_basis(&c, &vec![(Pt::Inf, -1)]).is_err());
    }

    #[test]
    fn riemann_roch_valuation_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for c in [f49_curve(), f64_curve(), f7_curve()] {
            let pts = c.points().unwrap().to_vec();
            for _ in 0..12 {
                let mut d: BTreeMap<Pt, i64> = BTreeMap::new();
                for _ in 0..rng.gen_range(1..5) {
                    d.insert(pts[rng.gen_range(0..pts.len())], rng.gen_range(1..4));
                }
                let spec: DivisorSpec = d.iter().map(|(&p, &n)| (p, n)).collect();
                let basis = riemann_roch_basis(&c, &spec).unwrap();
                assert_eq!(basis.len() as i64, d.values().sum::<i64>());
                for g in &basis {
                    for p in &pts {
                        let lower = -d.get(p).copied().unwrap_or(0);
                        assert!(g.valuation(&c, p).unwrap() >= lower, "{spec:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn coordinates_roundtrip() {
        let c = f49_curve();
        let f = c.field().clone();
        let e7 = c.torsion(7).unwrap();
        let basis = riemann_roch_basis(&c, &multiple_of_sum(&e7, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let e0 = coordinates_in_space(&c, &basis[0], &basis).unwrap();
        assert_eq!(e0[0], Felt::ONE);
        assert!(e0[1..].iter().all(|x| x.is_zero()));
        for _ in 0..20 {
            let coords: Vec<Felt> = basis.iter().map(|_| f.random(&mut rng)).collect();
            let g = recombine(&c, &basis, &coords);
            assert_eq!(coordinates_in_space(&c, &g, &basis).unwrap(), coords);
        }
        assert_eq!(coordinates_in_space(&c, &Func::y(), &basis), Err(Error::NotInSpace));
    }
}
