//! Truncated power and Laurent series, and the local parametrizations of a
//! curve at its rational places.

use crate::curve::{Curve, Pt};
use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};
use crate::poly::Poly;

/// `sum c_i t^(val + i)`, known exactly for exponents below `val + len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    pub val: i64,
    pub coeffs: Vec<Felt>,
}

impl Laurent {
    pub fn from_series(coeffs: Vec<Felt>) -> Self {
        let mut l = Laurent { val: 0, coeffs };
        l.normalize();
        l
    }

    /// A constant known to absolute precision `prec`.
    pub fn constant(c: Felt, prec: usize) -> Self {
        let mut coeffs = vec![Felt::ZERO; prec.max(1)];
        coeffs[0] = c;
        Laurent::from_series(coeffs)
    }

    /// Absolute precision: coefficients are known below this exponent.
    pub fn end(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Strip leading zeros. A series with no nonzero coefficient keeps
    /// `val = end` and empty coefficients.
    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.coeffs.len());
        self.val += lead as i64;
        self.coeffs.drain(..lead);
    }

    /// True when every known coefficient is zero.
    pub fn is_unknown_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Felt {
        if e < self.val || e >= self.end() {
            Felt::ZERO
        } else {
            self.coeffs[(e - self.val) as usize]
        }
    }

    pub fn mul(&self, f: &FieldCtx, o: &Laurent) -> Laurent {
        let len = self.coeffs.len().min(o.coeffs.len());
        if len == 0 {
            return Laurent { val: self.val + o.val, coeffs: Vec::new() };
        }
        Laurent { val: self.val + o.val, coeffs: series_mul(f, &self.coeffs, &o.coeffs, len) }
    }

    pub fn add(&self, f: &FieldCtx, o: &Laurent) -> Laurent {
        let start = self.val.min(o.val);
        let end = self.end().min(o.end());
        if end <= start {
            return Laurent { val: end, coeffs: Vec::new() };
        }
        let coeffs = (start..end).map(|e| f.add(self.coeff(e), o.coeff(e))).collect();
        let mut l = Laurent { val: start, coeffs };
        l.normalize();
        l
    }

    pub fn scale(&self, f: &FieldCtx, c: Felt) -> Laurent {
        if c.is_zero() {
            return Laurent { val: self.end(), coeffs: Vec::new() };
        }
        Laurent { val: self.val, coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn inv(&self, f: &FieldCtx) -> Result<Laurent> {
        if self.coeffs.is_empty() {
            return Err(Error::PrecisionExhausted);
        }
        Ok(Laurent { val: -self.val, coeffs: series_inv(f, &self.coeffs, self.coeffs.len())? })
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(&self, f: &FieldCtx, p: &Poly, const_prec: usize) -> Laurent {
        let mut acc = Laurent { val: i64::MAX / 4, coeffs: Vec::new() };
        for &c in p.0.iter().rev() {
            acc = if acc.val == i64::MAX / 4 {
                Laurent::constant(c, const_prec)
            } else {
                acc.mul(f, self).add(f, &Laurent::constant(c, const_prec))
            };
        }
        if p.is_zero() {
            return Laurent { val: const_prec as i64, coeffs: Vec::new() };
        }
        acc
    }
}

/// Product of two power series, truncated to `prec` terms.
pub fn series_mul(f: &FieldCtx, a: &[Felt], b: &[Felt], prec: usize) -> Vec<Felt> {
    let mut out = vec![Felt::ZERO; prec];
    for (i, &c) in a.iter().enumerate().take(prec) {
        if c.is_zero() {
            continue;
        }
        let len = (prec - i).min(b.len());
        f.axpy(&mut out[i..i + len], c, &b[..len]);
    }
    out
}

/// Inverse of a power series with nonzero constant term.
pub fn series_inv(f: &FieldCtx, a: &[Felt], prec: usize) -> Result<Vec<Felt>> {
    let a0_inv = f.inv(a.first().copied().unwrap_or(Felt::ZERO)).map_err(|_| Error::PoleError)?;
    let mut out = vec![Felt::ZERO; prec];
    if prec == 0 {
        return Ok(out);
    }
    out[0] = a0_inv;
    for k in 1..prec {
        let mut s = Felt::ZERO;
        for i in 1..=k.min(a.len() - 1) {
            s = f.add(s, f.mul(a[i], out[k - i]));
        }
        out[k] = f.neg(f.mul(s, a0_inv));
    }
    Ok(out)
}

/// `p(s(t))` for a polynomial `p` and power series `s`, to `prec` terms.
pub fn poly_of_series(f: &FieldCtx, p: &Poly, s: &[Felt], prec: usize) -> Vec<Felt> {
    let mut acc = vec![Felt::ZERO; prec];
    for &c in p.0.iter().rev() {
        acc = series_mul(f, &acc, s, prec);
        if prec > 0 {
            acc[0] = f.add(acc[0], c);
        }
    }
    acc
}

/// Index of the first nonzero coefficient.
pub fn order(s: &[Felt]) -> Option<usize> {
    s.iter().position(|c| !c.is_zero())
}

/// Which function serves as uniformizer at a place.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniformizer {
    /// `t = x - alpha` where `2y + a1 x + a3 != 0`.
    XMinusAlpha,
    /// `t = y - beta` at the ramified points of `x`.
    YMinusBeta,
    /// `t = x / y` at infinity.
    XOverY,
}

/// Power series of `x` and `y` in the uniformizer at a finite point.
#[derive(Clone, Debug)]
pub struct FiniteParam {
    pub alpha: Felt,
    pub beta: Felt,
    pub ramified: bool,
    pub x: Vec<Felt>,
    pub y: Vec<Felt>,
}

impl FiniteParam {
    /// Ramification index of `x` at the point.
    pub fn e(&self) -> u32 {
        if self.ramified {
            2
        } else {
            1
        }
    }

    pub fn prec(&self) -> usize {
        self.x.len()
    }

    pub fn uniformizer(&self) -> Uniformizer {
        if self.ramified {
            Uniformizer::YMinusBeta
        } else {
            Uniformizer::XMinusAlpha
        }
    }
}

pub fn is_ramified(c: &Curve, alpha: Felt, beta: Felt) -> bool {
    let f = c.field();
    f.add(f.add(beta, beta), c.h_at(alpha)).is_zero()
}

/// Expansions of `x`, `y` at a finite rational point to `prec` terms.
pub fn finite_param(c: &Curve, p: &Pt, prec: usize) -> FiniteParam {
    let Pt::Aff(alpha, beta) = *p else { panic!("finite_param needs an affine point") };
    let f = c.field();
    let prec = prec.max(2);
    let hs = c.h_poly().shift(f, alpha);
    let gs = c.g_poly().shift(f, alpha);
    let h = |i: usize| hs.coeff(i);
    let g = |i: usize| gs.coeff(i);
    if !is_ramified(c, alpha, beta) {
        // t = x - alpha; solve y^2 + h y - g = 0 term by term.
        let d_inv = f.inv(f.add(f.add(beta, beta), h(0))).unwrap();
        let mut y = vec![Felt::ZERO; prec];
        y[0] = beta;
        for k in 1..prec {
            let mut s = f.neg(g(k));
            for i in 1..k {
                s = f.add(s, f.mul(y[i], y[k - i]));
            }
            for i in 1..=k {
                s = f.add(s, f.mul(h(i), y[k - i]));
            }
            y[k] = f.neg(f.mul(s, d_inv));
        }
        let mut x = vec![Felt::ZERO; prec];
        x[0] = alpha;
        x[1] = Felt::ONE;
        FiniteParam { alpha, beta, ramified: false, x, y }
    } else {
        // t = y - beta, x = alpha + s(t). With g(alpha + s) = g0 + g1 s + g2 s^2 + s^3
        // the curve reads C(t) + B(t) s - g2 s^2 - s^3 = 0 where
        // C(t) = (beta + t)^2 + h(alpha)(beta + t) - g0 and B(t) = a1 (beta + t) - g1.
        let a1 = c.a1();
        let b0 = f.sub(f.mul(a1, beta), g(1));
        let b0_inv = f.inv(b0).expect("nonsingular point has a nonzero partial derivative");
        let ct = |k: usize| -> Felt {
            match k {
                0 => Felt::ZERO,
                1 => f.add(f.add(beta, beta), h(0)),
                2 => Felt::ONE,
                _ => Felt::ZERO,
            }
        };
        let mut s = vec![Felt::ZERO; prec];
        let mut s2 = vec![Felt::ZERO; prec];
        let mut s3 = vec![Felt::ZERO; prec];
        for k in 1..prec {
            // s2[k], s3[k] only involve s_i with i < k.
            let mut q2 = Felt::ZERO;
            for i in 1..k {
                q2 = f.add(q2, f.mul(s[i], s[k - i]));
            }
            s2[k] = q2;
            let mut q3 = Felt::ZERO;
            for i in 2..k {
                q3 = f.add(q3, f.mul(s2[i], s[k - i]));
            }
            s3[k] = q3;
            let mut rhs = f.add(ct(k), f.mul(a1, s[k - 1]));
            rhs = f.sub(rhs, f.mul(g(2), s2[k]));
            rhs = f.sub(rhs, s3[k]);
            s[k] = f.neg(f.mul(rhs, b0_inv));
        }
        let mut x = s;
        x[0] = alpha;
        let mut y = vec![Felt::ZERO; prec];
        y[0] = beta;
        y[1] = Felt::ONE;
        FiniteParam { alpha, beta, ramified: true, x, y }
    }
}

/// Laurent expansions of `x` and `y` at infinity in `t = x / y`, with
/// relative precision `prec`.
pub fn infinity_param(c: &Curve, prec: usize) -> (Laurent, Laurent) {
    let f = c.field();
    let [a1, a2, a3, a4, a6] = c.coeffs();
    // s = 1/y = t^3 + ..., from s + a1 t s + a3 s^2 = t^3 + a2 t^2 s + a4 t s^2 + a6 s^3.
    let n = prec + 4;
    let mut s = vec![Felt::ZERO; n];
    let mut s2 = vec![Felt::ZERO; n];
    let mut s3 = vec![Felt::ZERO; n];
    for k in 0..n {
        let mut q2 = Felt::ZERO;
        for i in 0..k {
            q2 = f.add(q2, f.mul(s[i], s[k - i]));
        }
        s2[k] = q2;
        let mut q3 = Felt::ZERO;
        for i in 0..k {
            q3 = f.add(q3, f.mul(s2[i], s[k - i]));
        }
        s3[k] = q3;
        let at = |v: &Vec<Felt>, i: i64| if i < 0 { Felt::ZERO } else { v[i as usize] };
        let k = k as i64;
        let mut val = if k == 3 { Felt::ONE } else { Felt::ZERO };
        val = f.add(val, f.mul(a2, at(&s, k - 2)));
        val = f.add(val, f.mul(a4, at(&s2, k - 1)));
        val = f.add(val, f.mul(a6, s3[k as usize]));
        val = f.sub(val, f.mul(a1, at(&s, k - 1)));
        val = f.sub(val, f.mul(a3, s2[k as usize]));
        s[k as usize] = val;
    }
    let s_l = Laurent::from_series(s);
    let y = s_l.inv(f).expect("1/y has a nonzero leading term");
    let t = Laurent {
        val: 1,
        coeffs: {
            let mut v = vec![Felt::ZERO; y.coeffs.len()];
            v[0] = Felt::ONE;
            v
        },
    };
    let x = t.mul(f, &y);
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(f: &FieldCtx, a: [i64; 5]) -> Curve {
        Curve::new(f, a.map(|c| f.from_int(c))).unwrap()
    }

    fn check_param_satisfies_curve(c: &Curve, p: &Pt, prec: usize) {
        let f = c.field();
        let lp = finite_param(c, p, prec);
        let y2 = series_mul(f, &lp.y, &lp.y, prec);
        let hy = series_mul(f, &poly_of_series(f, &c.h_poly(), &lp.x, prec), &lp.y, prec);
        let g = poly_of_series(f, &c.g_poly(), &lp.x, prec);
        for k in 0..prec {
            assert_eq!(f.sub(f.add(y2[k], hy[k]), g[k]), Felt::ZERO, "point {p:?}, term {k}");
        }
    }

    #[test]
    fn finite_params_solve_the_curve() {
        let f7 = FieldCtx::prime(7).unwrap();
        let c = curve(&f7, [0, 0, 0, 1, 0]); // y^2 = x^3 + x has 2-torsion
        for p in c.points().unwrap().iter().skip(1) {
            check_param_satisfies_curve(&c, p, 12);
        }
        let f64 = FieldCtx::extension(2, 6).unwrap();
        let c = curve(&f64, [0, 0, 1, 0, 0]);
        for p in c.points().unwrap().iter().skip(1).take(20) {
            check_param_satisfies_curve(&c, p, 12);
        }
        let f9 = FieldCtx::extension(3, 2).unwrap();
        let c = curve(&f9, [1, 1, 0, 0, 1]);
        for p in c.points().unwrap().iter().skip(1) {
            check_param_satisfies_curve(&c, p, 10);
        }
    }

    #[test]
    fn infinity_param_solves_the_curve() {
        for (f, a) in [
            (FieldCtx::prime(7).unwrap(), [0, 0, 0, 0, 2]),
            (FieldCtx::extension(2, 6).unwrap(), [0, 0, 1, 0, 0]),
            (FieldCtx::extension(3, 2).unwrap(), [1, 1, 0, 0, 1]),
        ] {
            let c = curve(&f, a);
            let (x, y) = infinity_param(&c, 10);
            assert_eq!((x.val, y.val), (-2, -3));
            let lhs = y.mul(&f, &y).add(&f, &c.h_poly().eval_laurent(&f, &x, 20).mul(&f, &y));
            let rhs = x.eval_poly(&f, &c.g_poly(), 20);
            let diff = lhs.add(&f, &rhs.scale(&f, f.from_int(-1)));
            assert!(diff.is_unknown_zero(), "{diff:?}");
        }
    }

    trait EvalLaurent {
        fn eval_laurent(&self, f: &FieldCtx, x: &Laurent, prec: usize) -> Laurent;
    }

    impl EvalLaurent for Poly {
        fn eval_laurent(&self, f: &FieldCtx, x: &Laurent, prec: usize) -> Laurent {
            x.eval_poly(f, self, prec)
        }
    }
}
