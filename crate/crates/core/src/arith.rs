//! Small integer helpers: primality, factorization, valuations.

/// Deterministic primality check by trial division. Inputs here never
/// exceed 2^32, so the loop stops below 2^16.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, exponent) pairs, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// The exponent of the prime `l` in `n` (`n > 0`).
pub fn valuation(mut n: u64, l: u64) -> u32 {
    debug_assert!(n > 0 && l > 1);
    let mut e = 0;
    while n.is_multiple_of(l) {
        n /= l;
        e += 1;
    }
    e
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// `Some(r)` when `n = r^2`.
pub fn exact_sqrt(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// `h || n`: `h` divides `n` and `gcd(h, n/h) = 1`.
pub fn exactly_divides(h: u64, n: u64) -> bool {
    h != 0 && n.is_multiple_of(h) && gcd(h, n / h) == 1
}

pub fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(7) && is_prime(37) && is_prime(2) && !is_prime(6) && !is_prime(1));
        assert_eq!(factorize(1440), vec![(2, 5), (3, 2), (5, 1)]);
        assert_eq!(factorize(28899), vec![(3, 2), (13, 2), (19, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(valuation(126, 3), 2);
    }

    #[test]
    fn exact_division() {
        assert!(exactly_divides(5, 1440));
        assert!(!exactly_divides(3, 1440));
        assert!(exactly_divides(7, 63));
        assert!(!exactly_divides(9, 81));
    }

    #[test]
    fn ceilings() {
        assert_eq!(div_ceil(7, 2), 4);
        assert_eq!(div_ceil(-7, 2), -3);
        assert_eq!(div_ceil(6, 3), 2);
        assert_eq!(isqrt(15625), 125);
        assert_eq!(exact_sqrt(64), Some(8));
        assert_eq!(exact_sqrt(63), None);
    }
}
