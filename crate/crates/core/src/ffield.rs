//! Exact arithmetic in `F_p` and `F_{p^a}`.
//!
//! An element of `F_{p^a} = F_p[X]/(m(X))` is stored as the integer code
//! `c_0 + c_1 p + ... + c_{a-1} p^{a-1}` of its coefficient vector in the
//! power basis of the modulus root. Codes order elements totally; every
//! "smallest element" choice in the crate uses this order.
//!
//! Three arithmetic backends share that representation:
//! * prime fields use machine modular arithmetic,
//! * extension fields with `q <= 2^20` use exp/log/Zech tables,
//! * larger extension fields fall back to polynomial arithmetic.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Largest field order accepted.
pub const MAX_ORDER: u64 = 1 << 31;
const TABLE_LIMIT: u64 = 1 << 20;
const NONE: u32 = u32::MAX;

/// A field element, as its integer code. Meaningful only together with the
/// [`FieldCtx`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }
}

struct Tables {
    // exp has length 2(q-1) so that exp[i + j] needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg: Vec<u32>,
}

enum Backend {
    Prime,
    Tables(Tables),
    Generic,
}

struct FieldData {
    p: u32,
    degree: u32,
    modulus: Vec<u32>,
    order: u32,
    pow_p: Vec<u32>,
    backend: Backend,
}

/// A finite field `F_{p^a}` with a fixed monic irreducible modulus.
///
/// Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldData>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({})", self.header())
    }
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > MAX_ORDER {
            return Err(Error::FieldTooLarge(p));
        }
        Ok(Self::build(p as u32, vec![0, 1]))
    }

    /// `F_{p^a}` with the lexicographically smallest monic irreducible
    /// modulus, comparing coefficients from the constant term upward.
    pub fn extension(p: u64, a: u32) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if a == 0 {
            return Err(Error::InvalidModulus("extension degree must be at least 1".into()));
        }
        if a == 1 {
            return Self::prime(p);
        }
        let q = checked_order(p, a)?;
        let p32 = p as u32;
        for idx in 0..q {
            let mut m = Vec::with_capacity(a as usize + 1);
            let mut rest = idx;
            let mut scale = q / p;
            for _ in 0..a {
                m.push((rest / scale) as u32);
                rest %= scale;
                scale = (scale / p).max(1);
            }
            m.push(1);
            if m[0] != 0 && is_irreducible(p32, &m) {
                return Ok(Self::build(p32, m));
            }
        }
        Err(Error::InvalidModulus(format!("no irreducible polynomial of degree {a} over F_{p}")))
    }

    /// `F_{p^a}` with an explicit modulus `m_0, ..., m_a` (monic, degree `a`).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidModulus("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c as u64 >= p) {
            return Err(Error::InvalidModulus("coefficients must lie in [0, p)".into()));
        }
        let a = (modulus.len() - 1) as u32;
        if a == 1 {
            if modulus != [0, 1] {
                return Err(Error::InvalidModulus("degree-1 modulus must be X".into()));
            }
            return Self::prime(p);
        }
        checked_order(p, a)?;
        if !is_irreducible(p as u32, modulus) {
            return Err(Error::InvalidModulus(format!("{modulus:?} is reducible over F_{p}")));
        }
        Ok(Self::build(p as u32, modulus.to_vec()))
    }

    fn build(p: u32, modulus: Vec<u32>) -> Self {
        let degree = (modulus.len() - 1) as u32;
        let order = (p as u64).pow(degree) as u32;
        let mut pow_p = Vec::with_capacity(degree as usize);
        let mut acc = 1u64;
        for _ in 0..degree {
            pow_p.push(acc as u32);
            acc *= p as u64;
        }
        let mut data = FieldData { p, degree, modulus, order, pow_p, backend: Backend::Generic };
        data.backend = if degree == 1 {
            Backend::Prime
        } else if (order as u64) <= TABLE_LIMIT {
            Backend::Tables(build_tables(&data))
        } else {
            Backend::Generic
        };
        FieldCtx(Arc::new(data))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.order
    }

    #[cfg(test)]
    fn has_tables(&self) -> bool {
        matches!(self.0.backend, Backend::Tables(_))
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// Element count as u64, for arithmetic that may overflow u32.
    pub fn q(&self) -> u64 {
        self.0.order as u64
    }

    pub fn zero(&self) -> Felt {
        Felt::ZERO
    }

    pub fn one(&self) -> Felt {
        Felt::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Felt {
        Felt(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Felt> {
        if digits.len() != self.0.degree as usize || digits.iter().any(|&d| d >= self.0.p) {
            return Err(Error::Parse(format!("expected {} digits below {}", self.0.degree, self.0.p)));
        }
        Ok(Felt(digits.iter().zip(&self.0.pow_p).map(|(d, w)| d * w).sum()))
    }

    pub fn digits(&self, x: Felt) -> Vec<u32> {
        let p = self.0.p;
        let mut c = x.0;
        (0..self.0.degree)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.0.order).map(Felt)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        Felt(rng.gen_range(0..self.0.order))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Felt {
        Felt(rng.gen_range(1..self.0.order))
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        match &self.0.backend {
            Backend::Prime => {
                let s = a.0 as u64 + b.0 as u64;
                let p = self.0.p as u64;
                Felt(if s >= p { s - p } else { s } as u32)
            }
            Backend::Tables(t) => {
                if self.0.p == 2 {
                    return Felt(a.0 ^ b.0);
                }
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = self.0.order - 1;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + n - la };
                let z = t.zech[d as usize];
                if z == NONE {
                    Felt::ZERO
                } else {
                    Felt(t.exp[(la + z) as usize])
                }
            }
            Backend::Generic => self.digit_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        match &self.0.backend {
            Backend::Prime => {
                if a.0 == 0 {
                    a
                } else {
                    Felt(self.0.p - a.0)
                }
            }
            Backend::Tables(t) => Felt(t.neg[a.0 as usize]),
            Backend::Generic => self.digit_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        match &self.0.backend {
            Backend::Prime => Felt(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Backend::Tables(t) => {
                if a.0 == 0 || b.0 == 0 {
                    Felt::ZERO
                } else {
                    Felt(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            Backend::Generic => self.poly_mul(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: Felt) -> Felt {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0.backend {
            Backend::Prime => {
                let (mut r0, mut r1) = (self.0.p as i64, a.0 as i64);
                let (mut s0, mut s1) = (0i64, 1i64);
                while r1 != 0 {
                    let qt = r0 / r1;
                    (r0, r1) = (r1, r0 - qt * r1);
                    (s0, s1) = (s1, s0 - qt * s1);
                }
                Felt(s0.rem_euclid(self.0.p as i64) as u32)
            }
            Backend::Tables(t) => {
                let l = t.log[a.0 as usize];
                Felt(t.exp[((self.0.order - 1 - l) % (self.0.order - 1)) as usize])
            }
            Backend::Generic => self.pow(a, self.q() - 2),
        })
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Felt, mut e: u64) -> Felt {
        if let Backend::Tables(t) = &self.0.backend {
            if a.0 == 0 {
                return if e == 0 { Felt::ONE } else { Felt::ZERO };
            }
            let n = (self.0.order - 1) as u64;
            let l = (t.log[a.0 as usize] as u64 * (e % n)) % n;
            return Felt(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x -> x^p`.
    pub fn frobenius(&self, a: Felt) -> Felt {
        self.pow(a, self.0.p as u64)
    }

    /// Absolute trace to the prime field.
    pub fn trace(&self, a: Felt) -> Felt {
        let mut acc = Felt::ZERO;
        let mut x = a;
        for _ in 0..self.0.degree {
            acc = self.add(acc, x);
            x = self.frobenius(x);
        }
        acc
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Felt) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut n = self.q() - 1;
        for l in arith::prime_divisors(n) {
            while n.is_multiple_of(l) && self.pow(a, n / l) == Felt::ONE {
                n /= l;
            }
        }
        Ok(n)
    }

    /// The smallest element (in code order) of exact multiplicative order `n`.
    pub fn root_of_unity(&self, n: u64) -> Result<Felt> {
        let group = self.q() - 1;
        if n == 0 || !group.is_multiple_of(n) {
            return Err(Error::NoSuchRoot { n, group });
        }
        if n == 1 {
            return Ok(Felt::ONE);
        }
        let primes = arith::prime_divisors(n);
        self.elements()
            .skip(1)
            .find(|&x| self.pow(x, n) == Felt::ONE && primes.iter().all(|&l| self.pow(x, n / l) != Felt::ONE))
            .ok_or(Error::NoSuchRoot { n, group })
    }

    /// Elements of the subfield `F_{p^k}` (requires `k | a`), in code order.
    pub fn subfield_elements(&self, k: u32) -> Vec<Felt> {
        let size = (self.0.p as u64).pow(k);
        self.elements().filter(|&x| self.pow(x, size) == x).collect()
    }

    pub fn is_square(&self, a: Felt) -> bool {
        a.is_zero() || self.0.p == 2 || self.pow(a, (self.q() - 1) / 2) == Felt::ONE
    }

    /// Some square root of `a`, if one exists.
    pub fn sqrt(&self, a: Felt) -> Option<Felt> {
        if a.is_zero() {
            return Some(a);
        }
        let q = self.q();
        if let Backend::Tables(t) = &self.0.backend {
            let n = q - 1;
            let l = t.log[a.0 as usize] as u64;
            if self.0.p == 2 {
                let half = if l.is_multiple_of(2) { l / 2 } else { (l + n) / 2 };
                return Some(Felt(t.exp[half as usize]));
            }
            return l.is_multiple_of(2).then(|| Felt(t.exp[(l / 2) as usize]));
        }
        if self.0.p == 2 {
            return Some(self.pow(a, q / 2));
        }
        if !self.is_square(a) {
            return None;
        }
        Some(self.tonelli_shanks(a))
    }

    fn tonelli_shanks(&self, a: Felt) -> Felt {
        let q = self.q();
        let mut s = 0;
        let mut odd = q - 1;
        while odd.is_multiple_of(2) {
            odd /= 2;
            s += 1;
        }
        let nonresidue = self.elements().skip(2).find(|&z| !self.is_square(z)).expect("odd field has non-squares");
        let mut m = s;
        let mut c = self.pow(nonresidue, odd);
        let mut t = self.pow(a, odd);
        let mut r = self.pow(a, odd.div_ceil(2));
        while t != Felt::ONE {
            let mut i = 0;
            let mut tt = t;
            while tt != Felt::ONE {
                tt = self.square(tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(b);
            }
            m = i;
            c = self.square(b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        r
    }

    /// All roots of `A y^2 + B y + C = 0`, sorted by code.
    pub fn solve_quadratic(&self, a: Felt, b: Felt, c: Felt) -> Vec<Felt> {
        assert!(!(a.is_zero() && b.is_zero()), "solve_quadratic needs (A, B) != (0, 0)");
        let mut roots = if a.is_zero() {
            vec![self.mul(self.neg(c), self.inv(b).unwrap())]
        } else if self.0.p == 2 {
            if b.is_zero() {
                vec![self.sqrt(self.div(c, a).unwrap()).unwrap()]
            } else {
                // y = (B/A) w with w^2 + w = AC/B^2
                let scale = self.div(b, a).unwrap();
                let rhs = self.div(self.mul(a, c), self.square(b)).unwrap();
                match self.artin_schreier(rhs) {
                    Some(w) => vec![self.mul(scale, w), self.mul(scale, self.add(w, Felt::ONE))],
                    None => vec![],
                }
            }
        } else {
            let disc = self.sub(self.square(b), self.mul(self.from_int(4), self.mul(a, c)));
            let two_a_inv = self.inv(self.mul(self.from_int(2), a)).unwrap();
            match self.sqrt(disc) {
                Some(s) => {
                    let nb = self.neg(b);
                    vec![self.mul(self.add(nb, s), two_a_inv), self.mul(self.sub(nb, s), two_a_inv)]
                }
                None => vec![],
            }
        };
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// A root of `w^2 + w = c` in characteristic 2, if any.
    fn artin_schreier(&self, c: Felt) -> Option<Felt> {
        let a = self.0.degree;
        if a % 2 == 1 {
            let mut h = Felt::ZERO;
            let mut x = c;
            for _ in 0..=(a - 1) / 2 {
                h = self.add(h, x);
                x = self.square(self.square(x));
            }
            return (self.add(self.square(h), h) == c).then_some(h);
        }
        // w -> w^2 + w is F_2-linear; solve over the bit basis.
        let cols: Vec<u32> = (0..a)
            .map(|i| {
                let e = Felt(1 << i);
                self.add(self.square(e), e).0
            })
            .collect();
        let mut rows: Vec<(u32, u32)> = Vec::new(); // (image bits, preimage bits)
        for (i, &col) in cols.iter().enumerate() {
            rows.push((col, 1 << i));
        }
        // Reduce images to echelon form, tracking preimages.
        let mut basis: Vec<(u32, u32)> = Vec::new();
        for (mut img, mut pre) in rows {
            for &(bimg, bpre) in &basis {
                if img & top_bit(bimg) != 0 {
                    img ^= bimg;
                    pre ^= bpre;
                }
            }
            if img != 0 {
                for entry in basis.iter_mut() {
                    if entry.0 & top_bit(img) != 0 {
                        entry.0 ^= img;
                        entry.1 ^= pre;
                    }
                }
                basis.push((img, pre));
            }
        }
        let mut target = c.0;
        let mut w = 0u32;
        for &(bimg, bpre) in &basis {
            if target & top_bit(bimg) != 0 {
                target ^= bimg;
                w ^= bpre;
            }
        }
        (target == 0).then_some(Felt(w))
    }

    /// `dst[i] += c * src[i]`, the inner loop of elimination.
    pub fn axpy(&self, dst: &mut [Felt], c: Felt, src: &[Felt]) {
        if c.is_zero() {
            return;
        }
        match &self.0.backend {
            Backend::Prime => {
                let p = self.0.p as u64;
                let c = c.0 as u64;
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 != 0 {
                        d.0 = ((d.0 as u64 + c * s.0 as u64) % p) as u32;
                    }
                }
            }
            Backend::Tables(t) => {
                let lc = t.log[c.0 as usize];
                let n = self.0.order - 1;
                let char2 = self.0.p == 2;
                for (d, s) in dst.iter_mut().zip(src) {
                    if s.0 == 0 {
                        continue;
                    }
                    let lp = t.log[s.0 as usize] + lc;
                    if d.0 == 0 {
                        d.0 = t.exp[lp as usize];
                        continue;
                    }
                    if char2 {
                        d.0 ^= t.exp[lp as usize];
                        continue;
                    }
                    let lp = if lp >= n { lp - n } else { lp };
                    let ld = t.log[d.0 as usize];
                    let diff = if lp >= ld { lp - ld } else { lp + n - ld };
                    let z = t.zech[diff as usize];
                    d.0 = if z == NONE { 0 } else { t.exp[(ld + z) as usize] };
                }
            }
            Backend::Generic => {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d = self.add(*d, self.mul(c, *s));
                }
            }
        }
    }

    fn digit_add(&self, a: Felt, b: Felt) -> Felt {
        let p = self.0.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        for &w in &self.0.pow_p {
            let s = (x % p + y % p) % p;
            out += s * w;
            x /= p;
            y /= p;
        }
        Felt(out)
    }

    fn digit_neg(&self, a: Felt) -> Felt {
        let p = self.0.p;
        let mut x = a.0;
        let mut out = 0u32;
        for &w in &self.0.pow_p {
            let d = x % p;
            out += ((p - d) % p) * w;
            x /= p;
        }
        Felt(out)
    }

    /// Schoolbook product reduced by the modulus; ground truth for the tables.
    pub(crate) fn poly_mul(&self, a: Felt, b: Felt) -> Felt {
        let p = self.0.p as u64;
        let deg = self.0.degree as usize;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * deg - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let m = &self.0.modulus;
        for i in (deg..2 * deg - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..deg {
                let sub = c * m[j] as u64 % p;
                prod[i - deg + j] = (prod[i - deg + j] + p - sub) % p;
            }
            prod[i] = 0;
        }
        Felt(prod[..deg].iter().zip(&self.0.pow_p).map(|(&d, &w)| d as u32 * w).sum())
    }

    /// `c0,c1,...,c{a-1}`.
    pub fn render(&self, x: Felt) -> String {
        self.digits(x).iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse(&self, s: &str) -> Result<Felt> {
        let digits = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        self.from_digits(&digits)
    }

    /// `p a m0,m1,...,ma`.
    pub fn header(&self) -> String {
        let m = self.0.modulus.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        format!("{} {} {}", self.0.p, self.0.degree, m)
    }

    pub fn parse_header(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("field header {s:?}")));
        }
        let p: u64 = parts[0].parse().map_err(|_| Error::Parse(format!("prime {:?}", parts[0])))?;
        let a: usize = parts[1].parse().map_err(|_| Error::Parse(format!("degree {:?}", parts[1])))?;
        let m = parts[2]
            .split(',')
            .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("modulus {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if m.len() != a + 1 {
            return Err(Error::Parse("modulus length does not match degree".into()));
        }
        Self::with_modulus(p, &m)
    }
}

fn top_bit(x: u32) -> u32 {
    1 << (31 - x.leading_zeros())
}

fn checked_order(p: u64, a: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..a {
        q = q.saturating_mul(p);
        if q > MAX_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
    }
    Ok(q)
}

fn build_tables(data: &FieldData) -> Tables {
    let q = data.order;
    let n = q - 1;
    // Multiplication through the schoolbook routine on a bare context.
    let bare = FieldCtx(Arc::new(FieldData {
        p: data.p,
        degree: data.degree,
        modulus: data.modulus.clone(),
        order: data.order,
        pow_p: data.pow_p.clone(),
        backend: Backend::Generic,
    }));
    let primes = arith::prime_divisors(n as u64);
    let generator = (2..q)
        .map(Felt)
        .find(|&g| primes.iter().all(|&l| bare.pow(g, n as u64 / l) != Felt::ONE))
        .expect("multiplicative group is cyclic");
    let mut exp = vec![0u32; 2 * n as usize];
    let mut log = vec![NONE; q as usize];
    let mut x = Felt::ONE;
    for i in 0..n {
        exp[i as usize] = x.0;
        exp[(i + n) as usize] = x.0;
        log[x.0 as usize] = i;
        x = bare.poly_mul(x, generator);
    }
    let neg: Vec<u32> = (0..q).map(|c| bare.digit_neg(Felt(c)).0).collect();
    let zech: Vec<u32> = (0..n)
        .map(|k| {
            let s = bare.digit_add(Felt::ONE, Felt(exp[k as usize]));
            if s.is_zero() {
                NONE
            } else {
                log[s.0 as usize]
            }
        })
        .collect();
    Tables { exp, log, zech, neg }
}

// Polynomials over F_p as little-endian u64 coefficient vectors, for the
// modulus search only.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Remainder of `a` by a nonzero `m`; the zero polynomial is the empty vector.
fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = (r[shift + j] + p - c * mj % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = poly_rem(&[1], m, p);
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// `X^(p^k) mod m`.
fn frobenius_power_of_x(k: u32, m: &[u64], p: u64) -> Vec<u64> {
    let mut x = poly_rem(&[0, 1], m, p);
    for _ in 0..k {
        x = poly_powmod(&x, p, m, p);
    }
    x
}

fn sub_x(v: &[u64], p: u64) -> Vec<u64> {
    let mut r = v.to_vec();
    if r.len() < 2 {
        r.resize(2, 0);
    }
    r[1] = (r[1] + p - 1) % p;
    trim(&mut r);
    r
}

/// Rabin's test: `m` of degree `a` is irreducible over `F_p` iff
/// `X^(p^a) = X mod m` and `gcd(X^(p^(a/l)) - X, m) = 1` for primes `l | a`.
pub(crate) fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let p = p as u64;
    let m: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    let a = (m.len() - 1) as u32;
    if a == 1 {
        return true;
    }
    if m[0] == 0 {
        return false;
    }
    let full = frobenius_power_of_x(a, &m, p);
    if !sub_x(&full, p).is_empty() {
        return false;
    }
    for l in arith::prime_divisors(a as u64) {
        let partial = sub_x(&frobenius_power_of_x(a / l as u32, &m, p), p);
        if poly_gcd(&m, &partial, p).len() > 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = FieldCtx::prime(5).unwrap();
        let (three, four) = (f.from_int(3), f.from_int(4));
        assert_eq!(f.add(three, four), f.from_int(2));
        assert_eq!(f.mul(three, four), f.from_int(2));
        assert_eq!(f.inv(three).unwrap(), f.from_int(2));
        assert_eq!(FieldCtx::prime(7).unwrap().order(), 7);
        assert_eq!(FieldCtx::prime(6).unwrap_err(), Error::NotPrime(6));
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(f7.inv(f7.from_int(3)).unwrap(), f7.from_int(5));
        assert_eq!(f7.inv(Felt::ZERO).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn extension_orders() {
        assert_eq!(FieldCtx::extension(7, 2).unwrap().order(), 49);
        assert_eq!(FieldCtx::extension(5, 6).unwrap().order(), 15625);
        assert_eq!(FieldCtx::extension(2, 6).unwrap().order(), 64);
        assert!(matches!(FieldCtx::extension(2, 40), Err(Error::FieldTooLarge(_))));
    }

    #[test]
    fn smallest_modulus_is_chosen() {
        // X^2 + 1 is irreducible mod 7 and has the smallest constant term.
        assert_eq!(FieldCtx::extension(7, 2).unwrap().modulus(), &[1, 0, 1]);
        // Over F_2 in degree 6, X^6 + 1 is a square and X^6 + X^5 + 1 (the
        // reciprocal of X^6 + X + 1) comes next.
        assert_eq!(FieldCtx::extension(2, 6).unwrap().modulus(), &[1, 0, 0, 0, 0, 1, 1]);
    }

    #[test]
    fn explicit_modulus_validation() {
        assert!(FieldCtx::with_modulus(7, &[1, 0, 1]).is_ok());
        assert!(FieldCtx::with_modulus(5, &[1, 0, 1]).is_err()); // X^2+1 = (X-2)(X+2) mod 5
        assert!(FieldCtx::with_modulus(5, &[1, 0, 2]).is_err()); // not monic
    }

    #[test]
    fn group_order_in_f49() {
        let f = FieldCtx::extension(7, 2).unwrap();
        for x in f.elements().skip(1) {
            assert_eq!(f.mul(x, f.pow(x, 47)), Felt::ONE);
        }
    }

    #[test]
    fn frobenius_has_order_six_on_f5_6() {
        let f = FieldCtx::extension(5, 6).unwrap();
        for x in f.elements() {
            let mut y = x;
            for _ in 0..6 {
                y = f.frobenius(y);
            }
            assert_eq!(y, x);
        }
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        for (p, a) in [(7u64, 2u32), (2, 6), (3, 3), (5, 2)] {
            let f = FieldCtx::extension(p, a).unwrap();
            assert!(f.has_tables());
            for x in f.elements() {
                for y in f.elements().step_by(3) {
                    assert_eq!(f.mul(x, y), f.poly_mul(x, y));
                    assert_eq!(f.add(x, y), f.digit_add(x, y));
                }
            }
        }
    }

    #[test]
    fn roots_of_unity() {
        let f49 = FieldCtx::extension(7, 2).unwrap();
        assert_eq!(f49.root_of_unity(2).unwrap(), f49.from_int(-1));
        let f = FieldCtx::extension(37, 2).unwrap();
        let u = f.root_of_unity(4).unwrap();
        assert_eq!(f.pow(u, 4), Felt::ONE);
        assert_ne!(f.pow(u, 2), Felt::ONE);
        let f64 = FieldCtx::extension(2, 6).unwrap();
        let w = f64.root_of_unity(3).unwrap();
        assert_eq!(f64.pow(w, 3), Felt::ONE);
        assert_ne!(w, Felt::ONE);
        assert!(matches!(f49.root_of_unity(5), Err(Error::NoSuchRoot { .. })));
    }

    #[test]
    fn quadratics_mod_7() {
        let f = FieldCtx::prime(7).unwrap();
        let roots = f.solve_quadratic(Felt::ONE, Felt::ZERO, f.from_int(-2));
        assert_eq!(roots, vec![f.from_int(3), f.from_int(4)]);
        assert!(f.solve_quadratic(Felt::ONE, Felt::ZERO, f.from_int(-3)).is_empty());
    }

    #[test]
    fn artin_schreier_roots_follow_trace() {
        for a in [6u32, 5] {
            let f = FieldCtx::extension(2, a).unwrap();
            for c in f.elements() {
                let roots = f.solve_quadratic(Felt::ONE, Felt::ONE, c);
                let expected = if f.trace(c).is_zero() { 2 } else { 0 };
                assert_eq!(roots.len(), expected, "c = {c:?}");
                for y in roots {
                    assert_eq!(f.add(f.square(y), y), c);
                }
            }
        }
    }

    #[test]
    fn square_roots_in_generic_backend() {
        // 3^13 > 2^20 forces the polynomial backend.
        let f = FieldCtx::extension(3, 13).unwrap();
        assert!(!f.has_tables());
        let mut rng = rand::thread_rng();
        for _ in 0..50 {
            let x = f.random(&mut rng);
            let s = f.sqrt(f.square(x)).unwrap();
            assert_eq!(f.square(s), f.square(x));
        }
    }

    #[test]
    fn render_parse_roundtrip_f49() {
        let f = FieldCtx::extension(7, 2).unwrap();
        for x in f.elements() {
            assert_eq!(f.parse(&f.render(x)).unwrap(), x);
        }
        assert_eq!(f.render(f.from_int(3)), "3,0");
        let h = FieldCtx::parse_header(&f.header()).unwrap();
        assert_eq!(h, f);
        assert_eq!(f.header(), "7 2 1,0,1");
    }
}
