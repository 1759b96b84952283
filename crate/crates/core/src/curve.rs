//! Elliptic curves in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over a [`FieldCtx`].

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};
use crate::poly::Poly;

/// Enumeration refuses fields above this order.
pub const MAX_ENUM_ORDER: u64 = 1 << 22;

/// A rational point. The derived order puts `Inf` first, then affine
/// points by `(x, y)` codes; every list of points in the crate uses it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pt {
    Inf,
    Aff(Felt, Felt),
}

impl Pt {
    pub fn is_inf(&self) -> bool {
        matches!(self, Pt::Inf)
    }

    pub fn x(&self) -> Option<Felt> {
        match self {
            Pt::Inf => None,
            Pt::Aff(x, _) => Some(*x),
        }
    }

    pub fn y(&self) -> Option<Felt> {
        match self {
            Pt::Inf => None,
            Pt::Aff(_, y) => Some(*y),
        }
    }
}

/// `E(F_q) ~ Z/n1 x Z/n2` with `n1 | n2`, and generators of orders n1, n2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub n1: u64,
    pub n2: u64,
    pub g1: Pt,
    pub g2: Pt,
}

#[derive(Default)]
struct Cache {
    points: OnceLock<Vec<Pt>>,
    orders: OnceLock<Vec<u64>>,
    structure: OnceLock<std::result::Result<Structure, Error>>,
}

#[derive(Clone)]
pub struct Curve {
    f: FieldCtx,
    a: [Felt; 5],
    cache: Arc<Cache>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.a.iter().map(|&c| self.f.render(c)).collect();
        write!(fm, "Curve[{}; a = {}]", self.f.header(), c.join(" "))
    }
}

impl PartialEq for Curve {
    fn eq(&self, o: &Self) -> bool {
        self.f == o.f && self.a == o.a
    }
}

impl Curve {
    /// Curve from `[a1, a2, a3, a4, a6]`.
    pub fn new(f: &FieldCtx, a: [Felt; 5]) -> Result<Self> {
        let c = Curve { f: f.clone(), a, cache: Arc::default() };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// `y^2 = x^3 + a4 x + a6`.
    pub fn short(f: &FieldCtx, a4: Felt, a6: Felt) -> Result<Self> {
        Self::new(f, [Felt::ZERO, Felt::ZERO, Felt::ZERO, a4, a6])
    }

    pub fn field(&self) -> &FieldCtx {
        &self.f
    }

    pub fn coeffs(&self) -> [Felt; 5] {
        self.a
    }

    pub fn a1(&self) -> Felt {
        self.a[0]
    }
    pub fn a2(&self) -> Felt {
        self.a[1]
    }
    pub fn a3(&self) -> Felt {
        self.a[2]
    }
    pub fn a4(&self) -> Felt {
        self.a[3]
    }
    pub fn a6(&self) -> Felt {
        self.a[4]
    }

    pub fn discriminant(&self) -> Felt {
        let f = &self.f;
        let [a1, a2, a3, a4, a6] = self.a;
        let n = |k: i64| f.from_int(k);
        let b2 = f.add(f.square(a1), f.mul(n(4), a2));
        let b4 = f.add(f.mul(n(2), a4), f.mul(a1, a3));
        let b6 = f.add(f.square(a3), f.mul(n(4), a6));
        let b8 = {
            let t1 = f.mul(f.square(a1), a6);
            let t2 = f.mul(n(4), f.mul(a2, a6));
            let t3 = f.mul(a1, f.mul(a3, a4));
            let t4 = f.mul(a2, f.square(a3));
            let t5 = f.square(a4);
            f.sub(f.add(f.sub(f.add(t1, t2), t3), t4), t5)
        };
        let d1 = f.neg(f.mul(f.square(b2), b8));
        let d2 = f.mul(n(8), f.pow(b4, 3));
        let d3 = f.mul(n(27), f.square(b6));
        let d4 = f.mul(n(9), f.mul(b2, f.mul(b4, b6)));
        f.add(f.sub(f.sub(d1, d2), d3), d4)
    }

    /// `h(x) = a1 x + a3`, so the curve reads `y^2 + h(x) y = g(x)`.
    pub fn h_poly(&self) -> Poly {
        Poly::from_coeffs(vec![self.a3(), self.a1()])
    }

    /// `g(x) = x^3 + a2 x^2 + a4 x + a6`.
    pub fn g_poly(&self) -> Poly {
        Poly::from_coeffs(vec![self.a6(), self.a4(), self.a2(), Felt::ONE])
    }

    pub fn h_at(&self, x: Felt) -> Felt {
        self.f.add(self.f.mul(self.a1(), x), self.a3())
    }

    pub fn g_at(&self, x: Felt) -> Felt {
        let f = &self.f;
        let x2 = f.square(x);
        let mut s = f.mul(x2, x);
        s = f.add(s, f.mul(self.a2(), x2));
        s = f.add(s, f.mul(self.a4(), x));
        f.add(s, self.a6())
    }

    pub fn contains(&self, p: &Pt) -> bool {
        match *p {
            Pt::Inf => true,
            Pt::Aff(x, y) => {
                let f = &self.f;
                f.add(f.square(y), f.mul(self.h_at(x), y)) == self.g_at(x)
            }
        }
    }

    pub fn point(&self, x: Felt, y: Felt) -> Result<Pt> {
        let p = Pt::Aff(x, y);
        if self.contains(&p) {
            Ok(p)
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &Pt) -> Pt {
        match *p {
            Pt::Inf => Pt::Inf,
            Pt::Aff(x, y) => Pt::Aff(x, self.f.sub(self.f.neg(y), self.h_at(x))),
        }
    }

    /// Chord-tangent addition with the full long-Weierstrass formulas.
    pub fn add(&self, p: &Pt, q: &Pt) -> Pt {
        let f = &self.f;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Pt::Inf, _) => return *q,
            (_, Pt::Inf) => return *p,
            (Pt::Aff(x1, y1), Pt::Aff(x2, y2)) => (x1, y1, x2, y2),
        };
        let [a1, a2, a3, a4, a6] = self.a;
        let (lambda, nu) = if x1 == x2 {
            if f.add(f.add(y1, y2), self.h_at(x2)).is_zero() {
                return Pt::Inf;
            }
            let den = f.inv(f.add(f.add(y1, y1), self.h_at(x1))).unwrap();
            let x1s = f.square(x1);
            let num_l =
                f.sub(f.add(f.add(f.mul(f.from_int(3), x1s), f.mul(f.from_int(2), f.mul(a2, x1))), a4), f.mul(a1, y1));
            let num_n =
                f.sub(f.add(f.add(f.neg(f.mul(x1s, x1)), f.mul(a4, x1)), f.mul(f.from_int(2), a6)), f.mul(a3, y1));
            (f.mul(num_l, den), f.mul(num_n, den))
        } else {
            let den = f.inv(f.sub(x2, x1)).unwrap();
            (f.mul(f.sub(y2, y1), den), f.mul(f.sub(f.mul(y1, x2), f.mul(y2, x1)), den))
        };
        let x3 = f.sub(f.sub(f.sub(f.add(f.square(lambda), f.mul(a1, lambda)), a2), x1), x2);
        let y3 = f.sub(f.sub(f.neg(f.mul(f.add(lambda, a1), x3)), nu), a3);
        Pt::Aff(x3, y3)
    }

    pub fn sub(&self, p: &Pt, q: &Pt) -> Pt {
        self.add(p, &self.neg(q))
    }

    /// `[n]P` by double-and-add.
    pub fn mul(&self, n: i64, p: &Pt) -> Pt {
        let mut base = if n < 0 { self.neg(p) } else { *p };
        let mut k = n.unsigned_abs();
        let mut acc = Pt::Inf;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// Roots `y` of the curve equation over `x`, ascending.
    pub fn ys_over(&self, x: Felt) -> Vec<Felt> {
        let f = &self.f;
        f.solve_quadratic(Felt::ONE, self.h_at(x), f.neg(self.g_at(x)))
    }

    /// All rational points: `Inf`, then affine points in `(x, y)` order.
    pub fn points(&self) -> Result<&[Pt]> {
        if self.f.q() > MAX_ENUM_ORDER {
            return Err(Error::FieldTooLarge(self.f.q()));
        }
        Ok(self.cache.points.get_or_init(|| {
            let mut pts = vec![Pt::Inf];
            for x in self.f.elements() {
                for y in self.ys_over(x) {
                    pts.push(Pt::Aff(x, y));
                }
            }
            pts
        }))
    }

    /// `#E(F_q)`, counted without listing points.
    pub fn count(&self) -> u64 {
        if let Some(p) = self.cache.points.get() {
            return p.len() as u64;
        }
        let f = &self.f;
        let mut n = 1u64;
        for x in f.elements() {
            let b = self.h_at(x);
            let c = self.g_at(x);
            n += if f.p() == 2 {
                if b.is_zero() {
                    1
                } else {
                    // y = b w, w^2 + w = c / b^2
                    let t = f.trace(f.div(c, f.square(b)).unwrap());
                    if t.is_zero() {
                        2
                    } else {
                        0
                    }
                }
            } else {
                let disc = f.add(f.square(b), f.mul(f.from_int(4), c));
                if disc.is_zero() {
                    1
                } else if f.is_square(disc) {
                    2
                } else {
                    0
                }
            };
        }
        n
    }

    fn orders(&self) -> Result<&[u64]> {
        let pts = self.points()?;
        Ok(self.cache.orders.get_or_init(|| {
            let n = pts.len() as u64;
            let primes = arith::prime_divisors(n);
            pts.iter().map(|p| self.order_given(p, n, &primes)).collect()
        }))
    }

    fn order_given(&self, p: &Pt, n: u64, primes: &[u64]) -> u64 {
        let mut ord = n;
        for &l in primes {
            while ord.is_multiple_of(l) && self.mul((ord / l) as i64, p).is_inf() {
                ord /= l;
            }
        }
        ord
    }

    /// Order of a rational point.
    pub fn point_order(&self, p: &Pt) -> u64 {
        let n = self.count();
        self.order_given(p, n, &arith::prime_divisors(n))
    }

    /// Group structure from element orders: `n2` is the exponent,
    /// `n1 = N / n2`, confirmed by `#E[n1] = n1^2`.
    pub fn structure(&self) -> Result<Structure> {
        self.cache.structure.get_or_init(|| self.compute_structure()).clone()
    }

    fn compute_structure(&self) -> Result<Structure> {
        let pts = self.points()?;
        let orders = self.orders()?;
        let n = pts.len() as u64;
        let (i2, &n2) = orders.iter().enumerate().max_by_key(|&(i, &o)| (o, std::cmp::Reverse(i))).unwrap();
        if !n.is_multiple_of(n2) {
            return Err(Error::StructureInconsistent(format!("exponent {n2} does not divide N = {n}")));
        }
        let n1 = n / n2;
        if n2 % n1 != 0 {
            return Err(Error::StructureInconsistent(format!("n1 = {n1} does not divide n2 = {n2}")));
        }
        if !(self.f.q() - 1).is_multiple_of(n1) {
            return Err(Error::StructureInconsistent(format!("n1 = {n1} does not divide q - 1")));
        }
        let torsion = orders.iter().filter(|&&o| n1.is_multiple_of(o)).count() as u64;
        if torsion != n1 * n1 {
            return Err(Error::StructureInconsistent(format!("#E[{n1}] = {torsion}, expected {}", n1 * n1)));
        }
        let g2 = pts[i2];
        let g1 = if n1 == 1 {
            Pt::Inf
        } else {
            let cyclic: HashSet<Pt> = self.multiples(&g2).into_iter().collect();
            let found = pts
                .iter()
                .zip(orders)
                .find(|&(p, &o)| o == n1 && (1..n1 as i64).all(|k| !cyclic.contains(&self.mul(k, p))));
            match found {
                Some((p, _)) => *p,
                None => return Err(Error::StructureInconsistent("no complement generator".into())),
            }
        };
        Ok(Structure { n1, n2, g1, g2 })
    }

    /// `O, P, [2]P, ...` up to the order of `P`.
    pub fn multiples(&self, p: &Pt) -> Vec<Pt> {
        let mut out = vec![Pt::Inf];
        let mut cur = *p;
        while !cur.is_inf() {
            out.push(cur);
            cur = self.add(&cur, p);
        }
        out
    }

    /// `E[n] = {P : [n]P = O}`, sorted.
    pub fn torsion(&self, n: u64) -> Result<Vec<Pt>> {
        let pts = self.points()?;
        let orders = self.orders()?;
        Ok(pts.iter().zip(orders).filter(|&(_, &o)| n.is_multiple_of(o)).map(|(p, _)| *p).collect())
    }

    /// Subgroup generated by `gens`, sorted in point order with `O` last.
    pub fn generated_subgroup(&self, gens: &[Pt]) -> Vec<Pt> {
        let mut set: HashSet<Pt> = HashSet::from([Pt::Inf]);
        let mut frontier = vec![Pt::Inf];
        while let Some(p) = frontier.pop() {
            for g in gens {
                let s = self.add(&p, g);
                if set.insert(s) {
                    frontier.push(s);
                }
            }
        }
        let mut v: Vec<Pt> = set.into_iter().collect();
        order_o_last(&mut v);
        v
    }

    /// A deterministic subgroup of order `h`, sorted with `O` last.
    ///
    /// `E[h]` when it has exactly `h` points; otherwise the cyclic group of
    /// the first point of order `h`; otherwise a product of multiples of
    /// the structure generators.
    pub fn subgroup_of_order(&self, h: u64) -> Result<Vec<Pt>> {
        let n = self.count();
        if h == 0 || !n.is_multiple_of(h) {
            return Err(Error::NoSuchSubgroup(h));
        }
        let mut t = self.torsion(h)?;
        if t.len() as u64 == h {
            order_o_last(&mut t);
            return Ok(t);
        }
        let pts = self.points()?;
        let orders = self.orders()?;
        if let Some((p, _)) = pts.iter().zip(orders).find(|&(_, &o)| o == h) {
            return Ok(self.generated_subgroup(&[*p]));
        }
        let s = self.structure()?;
        for h2 in arith::divisors(h).into_iter().rev() {
            let h1 = h / h2;
            if s.n2 % h2 == 0 && s.n1 % h1 == 0 {
                let gens = [self.mul((s.n2 / h2) as i64, &s.g2), self.mul((s.n1 / h1) as i64, &s.g1)];
                let sub = self.generated_subgroup(&gens);
                if sub.len() as u64 == h {
                    return Ok(sub);
                }
            }
        }
        Err(Error::NoSuchSubgroup(h))
    }

    /// Whether `N = q + 2 sqrt(q) + 1`.
    pub fn is_maximal(&self) -> bool {
        match arith::exact_sqrt(self.f.q()) {
            Some(s) => self.count() == self.f.q() + 2 * s + 1,
            None => false,
        }
    }

    /// `2 sqrt(q) - |N - q - 1|`, scaled to an integer comparison: returns
    /// `4q - (N - q - 1)^2`, nonnegative exactly when Hasse-Weil holds.
    pub fn hasse_weil_slack(&self) -> i128 {
        let q = self.f.q() as i128;
        let t = self.count() as i128 - q - 1;
        4 * q - t * t
    }

    pub fn render(&self) -> String {
        self.a.iter().map(|&c| self.f.render(c)).collect::<Vec<_>>().join(" ")
    }

    pub fn render_point(&self, p: &Pt) -> String {
        match p {
            Pt::Inf => "INF".into(),
            Pt::Aff(x, y) => format!("{};{}", self.f.render(*x), self.f.render(*y)),
        }
    }

    pub fn parse_point(&self, s: &str) -> Result<Pt> {
        let s = s.trim();
        if s == "INF" {
            return Ok(Pt::Inf);
        }
        let (xs, ys) = s.split_once(';').ok_or_else(|| Error::Parse(format!("point {s:?}")))?;
        self.point(self.f.parse(xs)?, self.f.parse(ys)?)
    }
}

/// Sort points ascending but move `O` to the end.
pub fn order_o_last(v: &mut [Pt]) {
    v.sort_unstable_by_key(|p| (p.is_inf(), *p));
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PrimeFamily {
    /// `p = 3u^2 + 3u + 1`.
    Eisenstein,
    /// `p = v^2 + 1`.
    Gaussian,
}

/// Primes of the given form up to `limit`, with the parameter `u` or `v`.
pub fn special_primes(family: PrimeFamily, limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for k in 1u64.. {
        let p = match family {
            PrimeFamily::Eisenstein => 3 * k * k + 3 * k + 1,
            PrimeFamily::Gaussian => k * k + 1,
        };
        if p > limit {
            break;
        }
        let ok = arith::is_prime(p) && (family == PrimeFamily::Eisenstein || p % 4 == 1);
        if ok {
            out.push((p, k));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveFamily {
    /// `y^2 = x^3 + b` over `F_{p^2}`, `b in F_p^*`, with `N = p^2 + 2p`.
    OrdJ0,
    /// `y^2 = x^3 + ax` over `F_{p^2}`, `a in F_p^*`, with `N = p^2 + 2p - 3`.
    OrdJ1728,
    /// `y^2 = x^3 + b` over a square-order field with `N = q + 2 sqrt(q) + 1`.
    Max,
    /// `y^2 + y = x^3` over `F_{4^(2a+1)}`.
    MaxChar2,
}

impl CurveFamily {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "j0" | "ord-j0" => Ok(Self::OrdJ0),
            "j1728" | "ord-j1728" => Ok(Self::OrdJ1728),
            "max" => Ok(Self::Max),
            "char2" | "max-char2" => Ok(Self::MaxChar2),
            _ => Err(Error::Parse(format!("unknown curve family {s:?}"))),
        }
    }
}

/// First curve of the family, in coefficient order, whose point count hits
/// the family's target.
pub fn find_special_curve(family: CurveFamily, f: &FieldCtx) -> Result<Curve> {
    let p = f.p() as u64;
    let q = f.q();
    let p_star = || (1..f.p()).map(Felt);
    match family {
        CurveFamily::OrdJ0 | CurveFamily::OrdJ1728 => {
            if f.degree() != 2 || p < 5 {
                return Err(Error::NoCurveFound(format!("family needs F_(p^2) with p >= 5, got q = {q}")));
            }
            let (target, j0) = match family {
                CurveFamily::OrdJ0 => (p * p + 2 * p, true),
                _ => (p * p + 2 * p - 3, false),
            };
            for c in p_star() {
                let curve = if j0 { Curve::short(f, Felt::ZERO, c)? } else { Curve::short(f, c, Felt::ZERO)? };
                if curve.count() == target {
                    return Ok(curve);
                }
            }
            Err(Error::NoCurveFound(format!("no coefficient in F_{p}^* gives N = {target}")))
        }
        CurveFamily::Max => {
            let s = arith::exact_sqrt(q).ok_or_else(|| Error::NoCurveFound(format!("q = {q} is not a square")))?;
            if p < 5 {
                return Err(Error::NoCurveFound("y^2 = x^3 + b is singular in characteristic 2 and 3".into()));
            }
            for b in f.elements().skip(1) {
                let curve = Curve::short(f, Felt::ZERO, b)?;
                if curve.count() == q + 2 * s + 1 {
                    return Ok(curve);
                }
            }
            Err(Error::NoCurveFound(format!("no maximal y^2 = x^3 + b over F_{q}")))
        }
        CurveFamily::MaxChar2 => {
            if p != 2 || f.degree() % 4 != 2 {
                return Err(Error::NoCurveFound(format!("q = {q} is not an odd power of 4")));
            }
            Curve::new(f, [Felt::ZERO, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO])
        }
    }
}
