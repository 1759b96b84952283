//! Dense univariate polynomials over a [`FieldCtx`], low degree first.

use crate::error::{Error, Result};
use crate::ffield::{Felt, FieldCtx};

/// Coefficients `c_0, c_1, ...` with no trailing zeros; the zero
/// polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly(pub Vec<Felt>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Felt::ONE])
    }

    pub fn constant(c: Felt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `X`.
    pub fn x() -> Self {
        Poly(vec![Felt::ZERO, Felt::ONE])
    }

    /// `X - a`.
    pub fn linear(f: &FieldCtx, a: Felt) -> Self {
        Poly(vec![f.neg(a), Felt::ONE])
    }

    /// `c X^k`.
    pub fn monomial(c: Felt, k: usize) -> Self {
        let mut v = vec![Felt::ZERO; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    pub fn from_coeffs(mut v: Vec<Felt>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Poly(v)
    }

    pub fn from_ints(f: &FieldCtx, v: &[i64]) -> Self {
        Poly::from_coeffs(v.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn deg(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn coeff(&self, i: usize) -> Felt {
        self.0.get(i).copied().unwrap_or(Felt::ZERO)
    }

    pub fn lead(&self) -> Felt {
        self.0.last().copied().unwrap_or(Felt::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn add(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::from_coeffs((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, f: &FieldCtx) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, f: &FieldCtx, c: Felt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, f: &FieldCtx, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Felt::ZERO; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            f.axpy(&mut out[i..i + o.0.len()], a, &o.0);
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, f: &FieldCtx, mut e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: `(q, r)` with `self = q·d + r`, `deg r < deg d`.
    pub fn divrem(&self, f: &FieldCtx, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.deg() < d.deg() {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut r = self.0.clone();
        let dl = d.0.len();
        let lead_inv = f.inv(d.lead())?;
        let mut q = vec![Felt::ZERO; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dl - 1], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[i] = c;
            f.axpy(&mut r[i..i + dl], f.neg(c), &d.0);
        }
        r.truncate(dl - 1);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    /// Exact quotient; errors when the division leaves a remainder.
    pub fn div_exact(&self, f: &FieldCtx, d: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(f, d)?;
        if !r.is_zero() {
            return Err(Error::Invariant("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn rem(&self, f: &FieldCtx, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(f, d)?.1)
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f, f.inv(self.lead()).unwrap())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b).unwrap();
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn eval(&self, f: &FieldCtx, x: Felt) -> Felt {
        self.0.iter().rev().fold(Felt::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Multiplicity of `a` as a root.
    pub fn root_multiplicity(&self, f: &FieldCtx, a: Felt) -> u32 {
        assert!(!self.is_zero(), "zero polynomial has every root");
        let lin = Poly::linear(f, a);
        let mut p = self.clone();
        let mut k = 0;
        loop {
            let (q, r) = p.divrem(f, &lin).unwrap();
            if !r.is_zero() {
                return k;
            }
            p = q;
            k += 1;
        }
    }

    /// `self(g(X))`.
    pub fn compose(&self, f: &FieldCtx, g: &Poly) -> Poly {
        self.0.iter().rev().fold(Poly::zero(), |acc, &c| acc.mul(f, g).add(f, &Poly::constant(c)))
    }

    /// Taylor coefficients at `a`: `self(a + T)` as a polynomial in `T`.
    pub fn shift(&self, f: &FieldCtx, a: Felt) -> Poly {
        self.compose(f, &Poly(vec![a, Felt::ONE]))
    }

    /// `[c0,c1,...]` with serialized elements.
    pub fn render(&self, f: &FieldCtx) -> String {
        let parts: Vec<String> = self.0.iter().map(|&c| f.render(c)).collect();
        format!("[{}]", parts.join(" "))
    }
}
