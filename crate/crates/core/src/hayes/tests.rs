use std::collections::HashSet;

use super::*;
use crate::poly::MonicEnumerator;

fn field(q: u64) -> Arc<Field> {
    Arc::new(Field::with_order(q).unwrap())
}

fn group(q: u64, ell: usize, t: usize) -> GroupStructure {
    GroupStructure::build(field(q), ell, t).unwrap()
}

#[test]
fn class_of_examples() {
    let f2 = field(2);
    let r = PolyRing::new(&f2);
    let c = class_of(&f2, &r.parse("x^4+x^3+1").unwrap(), 2, 0).unwrap();
    assert_eq!(c.leading, [f2.one(), f2.zero()]);

    let c = class_of(&f2, &r.parse("x+1").unwrap(), 2, 0).unwrap();
    assert_eq!(c.leading, [f2.one(), f2.zero()]);
    let lifted = lift_representative(&r, &r.parse("x+1").unwrap(), 2, 0);
    assert_eq!(r.fmt(&lifted), "x^4+x^3");

    let f3 = field(3);
    let r3 = PolyRing::new(&f3);
    let f = r3.parse("x^2+x+2").unwrap();
    let c = class_of(&f3, &f, 1, 2).unwrap();
    assert_eq!(c.leading, [f3.one()]);
    assert_eq!(c.ending, [f3.from_int(2), f3.one()]);
    let lifted = lift_representative(&r3, &f, 1, 2);
    assert_eq!(r3.fmt(&lifted), "x^6+x^5+2*x^4+x^2+x+2");
    assert_eq!(class_of(&f3, &lifted, 1, 2).unwrap(), c);

    assert!(class_of(&f3, &r3.parse("x^2+x").unwrap(), 1, 1).is_err());
    assert!(class_of(&f3, &r3.parse("2*x^2+1").unwrap(), 1, 0).is_err());
}

#[test]
fn lifting_agrees_with_padded_reading() {
    for q in [2u64, 3] {
        let f = field(q);
        let r = PolyRing::new(&f);
        for (ell, t) in [(2, 0), (3, 0), (1, 1), (1, 2), (2, 2)] {
            for d in 1..=4 {
                for p in MonicEnumerator::all(&f, d).unwrap().iter() {
                    if t >= 1 && p.coeff(0).is_zero() {
                        continue;
                    }
                    let lifted = lift_representative(&r, &p, ell, t);
                    assert!(lifted.degree().finite().unwrap() >= ell + t);
                    assert_eq!(
                        class_of(&f, &p, ell, t).unwrap(),
                        class_of(&f, &lifted, ell, t).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn group_sizes_match_formula_and_enumeration() {
    for q in [2u64, 3] {
        for ell in 0..=5usize {
            for t in 0..=(5 - ell) {
                let g = group(q, ell, t);
                let expected = if ell + t == 0 {
                    1
                } else {
                    (q - u64::from(t > 0)) * q.pow((ell + t - 1) as u32)
                };
                assert_eq!(g.size() as u64, expected, "q={q} l={ell} t={t}");
                assert_eq!(g.orders().iter().product::<u64>(), expected);
                assert_eq!(g.count_classes_by_enumeration().unwrap(), g.size());
                assert!(g.verify_dlog());
            }
        }
    }
}

#[test]
fn lemma5_generators() {
    let g = group(2, 6, 0);
    let s = g.summary();
    assert_eq!(s.generators, ["x+1", "x^3+1", "x^5+1"]);
    assert_eq!(s.orders, [8, 4, 2]);

    let g = group(3, 4, 0);
    let s = g.summary();
    assert_eq!(s.generators, ["x+1", "x^2+1", "x^4+1"]);
    assert_eq!(s.orders, [9, 3, 3]);

    assert_eq!(group(2, 8, 0).orders(), [16, 4, 2, 2]);
    assert_eq!(group(3, 6, 0).orders(), [9, 9, 3, 3]);
    assert_eq!(group(3, 2, 1).size(), 18);
}

#[test]
fn lemma5_orders_by_brute_force() {
    for p in [2u64, 3, 5] {
        for ell in 1..=8usize {
            if (p as u128).pow(ell as u32) > 1 << 16 {
                continue;
            }
            let g = group(p, ell, 0);
            let lead = g.lead_group();
            for (&gen, &ord) in lead.generators().iter().zip(lead.orders()) {
                let mut k = 1;
                let mut cur = gen;
                while cur != 0 {
                    cur = g.mul(cur, gen);
                    k += 1;
                }
                assert_eq!(k, ord);
            }
            assert_eq!(lead.orders(), unit_group_orders(p, 1, ell).as_slice());
        }
    }
}

#[test]
fn prime_power_fields_decompose() {
    for (q, ell) in [(4u64, 3usize), (4, 4), (8, 2), (9, 3), (9, 2)] {
        let g = group(q, ell, 1);
        let (p, r) = crate::gf::prime_power(q).unwrap();
        let mut expected = component_orders(p, r, ell, 1);
        let mut got = g.orders().to_vec();
        expected.sort();
        got.sort();
        assert_eq!(got, expected, "q={q} l={ell}");
        assert!(g.verify_dlog());
    }
}

#[test]
fn redundant_generators_reduce_via_smith() {
    // add <x^2+1> = <x+1>^2 to the q = 2, l = 4 generating set
    let f = field(2);
    let g = group(2, 4, 0);
    let lead = g.lead_group();
    let mut gens = lead.generators().to_vec();
    let extra = lead.pow(&f, gens[0], 2);
    gens.push(extra);
    let orders: Vec<u64> = gens.iter().map(|&x| lead.element_order(&f, x)).collect();
    let (basis, ords) = lead.independent_basis(&f, gens, orders);
    assert_eq!(ords.iter().product::<u64>(), 16);
    let mut sorted = ords.clone();
    sorted.sort();
    assert_eq!(sorted, [2, 8]);
    // the reduced basis generates the whole group
    let mut seen = HashSet::new();
    for a in 0..ords[0] {
        for b in 0..ords[1] {
            seen.insert(lead.mul(&f, lead.pow(&f, basis[0], a), lead.pow(&f, basis[1], b)));
        }
    }
    assert_eq!(seen.len(), 16);
}

#[test]
fn group_ops() {
    let g = group(2, 2, 0);
    let f = g.field_arc().clone();
    let r = PolyRing::new(&f);
    let a = g.class_of_poly(&r.parse("x+1").unwrap()).unwrap();
    let sq = g.class_at(g.pow(a, 2));
    assert_eq!(sq.leading, [f.zero(), f.one()]);

    let g = group(3, 3, 0);
    for e in 0..g.size() {
        assert_eq!(g.mul(e, g.inv(e)), g.identity());
    }
    for delta in 0..g.size() {
        let image: HashSet<usize> = (0..g.size()).map(|e| g.translate(delta, e)).collect();
        assert_eq!(image.len(), g.size());
    }

    let g = group(3, 1, 2);
    let c = g.class_at(5);
    let inv = g.class_op(ClassOp::Inv, &c, &c).unwrap();
    let prod = g.class_op(ClassOp::Mul, &c, &inv).unwrap();
    assert_eq!(g.index_of(&prod).unwrap(), 0);
    let wrong = HayesClass::new(vec![f.one()], vec![]);
    assert!(g.class_op(ClassOp::Mul, &c, &wrong).is_err());
}

#[test]
fn dlog_is_a_homomorphism() {
    for (q, ell, t) in [(2u64, 4usize, 0usize), (3, 2, 2), (4, 2, 1), (5, 1, 2)] {
        let g = group(q, ell, t);
        for a in 0..g.size() {
            for b in (0..g.size()).step_by(3) {
                let ab = g.exponents(g.mul(a, b));
                let sum: Vec<u64> = g
                    .exponents(a)
                    .iter()
                    .zip(g.exponents(b))
                    .zip(g.orders())
                    .map(|((x, y), r)| (x + y) % r)
                    .collect();
                assert_eq!(ab, sum);
            }
        }
    }
}

#[test]
fn class_of_is_multiplicative() {
    let f = field(3);
    let r = PolyRing::new(&f);
    let g = group(3, 2, 2);
    let polys: Vec<Poly> = (1..=3)
        .flat_map(|d| MonicEnumerator::all(&f, d).unwrap().iter().collect::<Vec<_>>())
        .filter(|p| !p.coeff(0).is_zero())
        .collect();
    for a in &polys {
        for b in polys.iter().step_by(2) {
            let lhs = g.class_of_poly(&r.mul(a, b)).unwrap();
            let rhs = g.mul(g.class_of_poly(a).unwrap(), g.class_of_poly(b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn kth_roots_examples_and_brute_force() {
    let g = group(2, 4, 0);
    assert_eq!(g.orders(), [8, 2]);
    assert_eq!(g.kth_roots(0, 2).len(), 4);
    for e in 0..g.size() {
        assert_eq!(g.kth_roots(e, 1), [e]);
    }
    for q in [3u64, 5] {
        for ell in 1..=3 {
            if q.pow(ell as u32) > 200 {
                continue;
            }
            assert_eq!(group(q, ell, 0).kth_roots(0, 2).len(), 1);
            assert_eq!(group(q, ell, 1).identity_root_count(2), 2);
        }
    }
    for (q, ell, t) in [
        (2u64, 3usize, 1usize),
        (3, 2, 1),
        (3, 3, 0),
        (2, 5, 0),
        (5, 1, 1),
        (4, 2, 1),
    ] {
        let g = group(q, ell, t);
        for k in 1..=6u64 {
            for eps in 0..g.size() {
                let mut brute: Vec<usize> = (0..g.size()).filter(|&d| g.pow(d, k) == eps).collect();
                let mut fast = g.kth_roots(eps, k);
                brute.sort();
                fast.sort();
                assert_eq!(fast, brute, "q={q} l={ell} t={t} k={k}");
                assert_eq!(g.root_count(eps, k), brute.len() as u64);
                let expected = if brute.is_empty() { 0 } else { g.identity_root_count(k) };
                assert_eq!(brute.len() as u64, expected);
            }
        }
    }
}

#[test]
fn egroup_iso_round_trip() {
    let g = group(3, 1, 2);
    assert_eq!(g.size(), 18);
    let (e1, n, e2) = g.split(0).unwrap();
    assert!(e1.leading.iter().all(|c| c.is_zero()));
    assert_eq!(n, 0);
    assert!(e2.leading.iter().all(|c| c.is_zero()));
    for eps in 0..g.size() {
        let (a, n, b) = g.split(eps).unwrap();
        assert_eq!(g.compose(&a, n, &b).unwrap(), eps);
    }
    assert!(group(3, 2, 0).split(0).is_err());

    let g = group(2, 2, 3);
    let lead = group(2, 2, 0);
    for delta in 0..lead.size() {
        let c = lead.class_at(delta);
        let idx = g.compose(&c, 0, &c).unwrap();
        assert_eq!(idx, g.diagonal(delta));
        let cls = g.class_at(idx);
        assert_eq!(cls.ending[0], g.field().one());
        assert_eq!(cls.leading, c.leading);
    }
}

#[test]
fn class_text_round_trip() {
    let g = group(3, 2, 1);
    for idx in 0..g.size() {
        let s = g.fmt_index(idx);
        assert_eq!(g.index_of(&g.parse_class(&s).unwrap()).unwrap(), idx);
    }
    let c = g.parse_class("a=(1,0);b=(1)").unwrap();
    assert_eq!(g.fmt_class(&c), "a=(1,0);b=(1)");
    assert!(g.parse_class("a=1,0").is_err());
}

#[test]
fn summary_json_shape() {
    let s = group(3, 2, 1).summary();
    assert_eq!(s.generators[0], "x^3+2");
    let js = serde_json::to_value(&s).unwrap();
    assert_eq!(js["size"], 18);
    assert_eq!(js["orders"], serde_json::json!([2, 3, 3]));
}

#[test]
fn budget_is_enforced() {
    let opts = GroupOptions {
        budget: 100,
        ..Default::default()
    };
    let err = GroupStructure::build_with(field(3), 5, 0, &opts).unwrap_err();
    assert!(matches!(err, Error::Budget { .. }));
}
