use ellrc::curve::{Curve, Pt};
use ellrc::funcfield::{riemann_roch_basis, DivisorSpec, Func};
use ellrc::poly::Poly;
use ellrc::{Felt, FieldCtx};
use proptest::prelude::*;

const FIELDS: [(u64, u32); 7] = [(2, 6), (2, 8), (3, 5), (7, 2), (13, 4), (37, 2), (5, 6)];

fn field(i: usize) -> FieldCtx {
    let (p, a) = FIELDS[i % FIELDS.len()];
    FieldCtx::extension(p, a).unwrap()
}

fn elt(f: &FieldCtx, code: u32) -> Felt {
    Felt(code % f.order())
}

/// Every monic polynomial of degree `d` over `F_p`, as coefficient lists.
fn monic_of_degree(p: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (p as u64).pow(d as u32);
    for mut code in 0..total {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push((code % p as u64) as u32);
            code /= p as u64;
        }
        c.push(1);
        out.push(c);
    }
    out
}

#[test]
fn default_moduli_have_no_factors() {
    for &(p, a) in &FIELDS {
        let f = FieldCtx::extension(p, a).unwrap();
        let base = FieldCtx::prime(p).unwrap();
        let to_poly = |c: &[u32]| Poly::from_coeffs(c.iter().map(|&x| Felt(x)).collect());
        let m = to_poly(f.modulus());
        assert_eq!(m.deg(), a as i64);
        for d in 1..=(a as usize / 2) {
            for g in monic_of_degree(p as u32, d) {
                assert!(!m.rem(&base, &to_poly(&g)).unwrap().is_zero(), "F_{p}^{a}: modulus divisible by {g:?}");
            }
        }
    }
}

#[test]
fn reducible_modulus_is_rejected() {
    // x^2 + 1 = (x + 2)(x + 3) over F_5.
    assert!(FieldCtx::with_modulus(5, &[1, 0, 1]).is_err());
    assert!(FieldCtx::with_modulus(7, &[1, 0, 1]).is_ok());
}

proptest! {
    #[test]
    fn field_axioms(i in 0usize..7, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(i);
        let (a, b, c) = (elt(&f, a), elt(&f, b), elt(&f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Felt::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, Felt::ONE), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), Felt::ONE);
            prop_assert_eq!(f.pow(a, f.q() - 1), Felt::ONE);
        }
        prop_assert_eq!(f.pow(a, f.q()), a);
        // Frobenius is additive.
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn square_roots(i in 0usize..7, a in any::<u32>()) {
        let f = field(i);
        let a = elt(&f, a);
        let s = f.square(a);
        let r = f.sqrt(s).unwrap();
        prop_assert_eq!(f.square(r), s);
    }

    #[test]
    fn serialization_round_trips(i in 0usize..7, a in any::<u32>()) {
        let f = field(i);
        let a = elt(&f, a);
        prop_assert_eq!(f.parse(&f.render(a)).unwrap(), a);
        let back = FieldCtx::parse_header(&f.header()).unwrap();
        prop_assert_eq!(back.modulus(), f.modulus());
    }
}

fn curves() -> Vec<Curve> {
    let f49 = FieldCtx::extension(7, 2).unwrap();
    let f64 = FieldCtx::extension(2, 6).unwrap();
    let f81 = FieldCtx::extension(3, 4).unwrap();
    let f13 = FieldCtx::prime(13).unwrap();
    vec![
        Curve::short(&f49, Felt::ZERO, f49.from_int(2)).unwrap(),
        Curve::short(&f49, Felt::ONE, f49.from_int(3)).unwrap(),
        Curve::new(&f64, [Felt::ZERO, Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO]).unwrap(),
        Curve::new(&f64, [Felt::ONE, Felt::ZERO, Felt::ZERO, Felt::ZERO, Felt::ONE]).unwrap(),
        // Characteristic 3 with a2 != 0.
        Curve::new(&f81, [Felt::ZERO, Felt::ONE, Felt::ZERO, Felt::ZERO, Felt::ONE]).unwrap(),
        Curve::new(&f13, [Felt(1), Felt(2), Felt(3), Felt(4), Felt(5)]).unwrap(),
    ]
}

fn pick(c: &Curve, i: usize) -> Pt {
    let pts = c.points().unwrap();
    pts[i % pts.len()]
}

proptest! {
    #[test]
    fn group_law(ci in 0usize..6, i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
        let c = &curves()[ci];
        let (p, q, r) = (pick(c, i), pick(c, j), pick(c, k));
        prop_assert!(c.contains(&c.add(&p, &q)));
        prop_assert_eq!(c.add(&p, &q), c.add(&q, &p));
        prop_assert_eq!(c.add(&c.add(&p, &q), &r), c.add(&p, &c.add(&q, &r)));
        prop_assert_eq!(c.add(&p, &Pt::Inf), p);
        prop_assert_eq!(c.add(&p, &c.neg(&p)), Pt::Inf);
        prop_assert_eq!(c.mul(c.count() as i64, &p), Pt::Inf);
        prop_assert_eq!(c.mul(3, &p), c.add(&p, &c.add(&p, &p)));
    }
}

fn f49() -> Curve {
    curves().swap_remove(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn riemann_roch_dimension(picks in prop::collection::vec((any::<usize>(), 1i64..4), 1..4)) {
        let c = f49();
        let mut d: DivisorSpec = Vec::new();
        for (i, n) in picks {
            let p = pick(&c, i);
            match d.iter_mut().find(|(q, _)| *q == p) {
                Some(e) => e.1 += n,
                None => d.push((p, n)),
            }
        }
        let deg: i64 = d.iter().map(|e| e.1).sum();
        let basis = riemann_roch_basis(&c, &d).unwrap();
        prop_assert_eq!(basis.len() as i64, deg);
        for g in &basis {
            for &(p, n) in &d {
                prop_assert!(g.valuation(&c, &p).unwrap() >= -n);
            }
        }
    }

    #[test]
    fn valuations_add(i in any::<usize>(), a in 0u32..49, b in 0u32..49, pt in any::<usize>()) {
        let c = f49();
        let f = c.field().clone();
        let g = Func::x().add(&c, &Func::constant(Felt(a)));
        let h = Func::y().add(&c, &Func::constant(Felt(b))).mul(&c, &Func::x());
        let p = pick(&c, pt.wrapping_add(i));
        let (vg, vh) = (g.valuation(&c, &p).unwrap(), h.valuation(&c, &p).unwrap());
        prop_assert_eq!(g.mul(&c, &h).valuation(&c, &p).unwrap(), vg + vh);
        if vg == 0 && vh == 0 {
            let prod = f.mul(g.eval(&c, &p).unwrap(), h.eval(&c, &p).unwrap());
            prop_assert_eq!(g.mul(&c, &h).eval(&c, &p).unwrap(), prod);
        }
    }
}
