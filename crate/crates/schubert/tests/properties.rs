use std::collections::BTreeMap;

use proptest::prelude::*;

use schubert::botttower::{sigma_d, mu_d, BottTowerSpec, EpsilonMask};
use schubert::structconst::{normal_form, t_eps, DList, RawPoly};
use schubert::symalg::rational;
use schubert::{Char, Poly, VarSpace};

const RANK: usize = 3;

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, RANK), -4i64..=4), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Poly::zero(VarSpace::alpha(RANK)), |acc, (e, c)| {
            acc + Poly::monomial(VarSpace::alpha(RANK), e, rational(c))
        })
    })
}

fn char_strategy() -> impl Strategy<Value = Char> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, RANK), -4i64..=4), 0..5).prop_map(|terms| {
        terms.into_iter().fold(Char::zero(VarSpace::alpha(RANK)), |acc, (e, c)| {
            acc + Char::monomial(VarSpace::alpha(RANK), e, rational(c))
        })
    })
}

fn nonzero_linear() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, RANK).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
}

fn bott_list() -> impl Strategy<Value = BottTowerSpec> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * (n - 1) / 2).prop_map(move |entries| {
            let mut spec = BottTowerSpec::new(n);
            let mut it = entries.into_iter();
            for i in 1..=n {
                for j in i + 1..=n {
                    spec.set(i, j, it.next().unwrap()).unwrap();
                }
            }
            spec
        })
    })
}

fn dlist_and_raw() -> impl Strategy<Value = (DList, RawPoly)> {
    (1usize..=5).prop_flat_map(|n| {
        let sp = VarSpace::alpha(2);
        let diagonal = prop::collection::vec(prop::collection::vec(-2i64..=2, 2), n)
            .prop_map(move |rows| rows.iter().map(|r| Poly::linear(sp, r)).collect::<Vec<_>>());
        let off = prop::collection::vec(-3i64..=3, n * (n - 1) / 2);
        let raw = prop::collection::vec((prop::collection::vec(0u32..=4, n), -3i64..=3, -2i64..=2), 1..4);
        (diagonal, off, raw).prop_map(move |(diagonal, off, raw)| {
            let mut entries = BTreeMap::new();
            let mut it = off.into_iter();
            for k in 1..=n {
                for l in 1..k {
                    entries.insert((l, k), Poly::from_int(sp, it.next().unwrap()));
                }
            }
            let dlist = DList::new(diagonal, entries).unwrap();
            let mut p = RawPoly::zero(n);
            for (mut exps, c, a) in raw {
                while exps.iter().sum::<u32>() > 4 {
                    let k = exps.iter().position(|&e| e > 0).unwrap();
                    exps[k] -= 1;
                }
                let coeff = &Poly::from_int(sp, c) + &Poly::linear(sp, &[a, 0]);
                p = p + RawPoly::monomial(exps, coeff);
            }
            (dlist, p)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn char_ring_axioms(a in char_strategy(), b in char_strategy(), c in char_strategy()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn divide_linear_round_trip(q in poly_strategy(), l in nonzero_linear()) {
        let linear = Poly::linear(VarSpace::alpha(RANK), &l);
        prop_assert_eq!((&q * &linear).divide_linear(&linear).unwrap(), q.clone());
        prop_assert_eq!((&q * &linear).div_exact(&linear).unwrap(), q);
    }

    #[test]
    fn divide_one_minus_exp_round_trip(q in char_strategy(), beta in nonzero_linear()) {
        let factor = Char::one_minus_exp_neg(VarSpace::alpha(RANK), &beta);
        prop_assert_eq!((&q * &factor).divide_one_minus_exp_neg(&beta).unwrap(), q);
    }

    #[test]
    fn star_is_ring_involution(a in char_strategy(), b in char_strategy()) {
        prop_assert_eq!((&a * &b).star(), &a.star() * &b.star());
        prop_assert_eq!((&a + &b).star(), &a.star() + &b.star());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn display_parses_back(a in poly_strategy(), c in char_strategy()) {
        prop_assert_eq!(Poly::parse(a.space(), &a.to_string()).unwrap(), a);
        prop_assert_eq!(Char::parse(c.space(), &c.to_string()).unwrap(), c);
    }

    #[test]
    fn t_eps_reads_normal_form((dlist, p) in dlist_and_raw()) {
        let nf = normal_form(&dlist, &p);
        for eps in EpsilonMask::all(dlist.len()) {
            let expect = nf.get(&eps).cloned().unwrap_or_else(|| Poly::zero(dlist.space()));
            prop_assert_eq!(t_eps(&dlist, &p, &eps), expect, "mask {}", eps);
        }
    }

    #[test]
    fn tower_support_and_degree(spec in bott_list()) {
        let masks = EpsilonMask::all(spec.height());
        for eps in &masks {
            for at in &masks {
                let s = sigma_d(&spec, eps, at).unwrap();
                let m = mu_d(&spec, eps, at).unwrap();
                if !eps.leq(at) {
                    prop_assert!(s.is_zero() && m.is_zero());
                } else {
                    prop_assert!(s.is_homogeneous());
                    prop_assert_eq!(s.degree(), Some(eps.ones() as u32));
                }
            }
        }
    }
}
