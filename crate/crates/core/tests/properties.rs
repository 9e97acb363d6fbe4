use std::collections::HashMap;

use canonfan_core::*;
use proptest::prelude::*;

fn q(n: i64) -> Scalar {
    Scalar::from_integer(n.into())
}

fn exponent(n: usize, max: u32) -> impl Strategy<Value = Exponent> {
    prop::collection::vec(0..=max, n).prop_map(Exponent::new)
}

fn nonzero_exponent(n: usize, max: u32) -> impl Strategy<Value = Exponent> {
    exponent(n, max).prop_filter("nonzero", |e| !e.is_zero())
}

fn coefficient() -> impl Strategy<Value = Scalar> {
    (-9i64..=9, 1i64..=9)
        .prop_filter("nonzero", |(a, _)| *a != 0)
        .prop_map(|(a, b)| Scalar::new(a.into(), b.into()))
}

fn poly(n: usize, terms: usize, max: u32, constant: bool) -> impl Strategy<Value = Polynomial> {
    let e = if constant {
        exponent(n, max).boxed()
    } else {
        nonzero_exponent(n, max).boxed()
    };
    prop::collection::vec((e, coefficient()), 1..=terms).prop_filter_map("nonzero", move |ts| {
        let f = Polynomial::from_terms(n, ts).unwrap();
        (!f.is_zero()).then_some(f)
    })
}

/// Membership by exhaustive search over multiplicities.
fn expressible(beta: &Exponent, gens: &[Exponent]) -> bool {
    fn go(rest: &[u32], gens: &[Exponent], from: usize) -> bool {
        if rest.iter().all(|&c| c == 0) {
            return true;
        }
        (from..gens.len()).any(|i| {
            let g = gens[i].coords();
            !gens[i].is_zero()
                && g.iter().zip(rest).all(|(a, b)| a <= b)
                && go(
                    &rest.iter().zip(g).map(|(b, a)| b - a).collect::<Vec<_>>(),
                    gens,
                    i,
                )
        })
    }
    go(beta.coords(), gens, 0)
}

fn division_case() -> impl Strategy<Value = (Polynomial, Vec<Polynomial>, Vec<i64>)> {
    (1usize..=3).prop_flat_map(|n| {
        (
            poly(n, 5, 4, true),
            prop::collection::vec(poly(n, 3, 3, false), 1..=4),
            prop::collection::vec(1i64..=4, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn division_identity_and_remainder((f, gens, w) in division_case()) {
        let ord = WeightedOrder::with_default_tie(WeightVector::from_integers(&w).unwrap());
        let top = f.terms().map(|(e, _)| ord.weight().pairing(e)).max().unwrap();
        let r = subduct(&f, &gens, &ord, &(top + q(4))).unwrap();
        prop_assert_eq!(r.reconstruct(&gens).unwrap(), f);
        if r.status.is_final() {
            let leads: Vec<Exponent> =
                gens.iter().map(|g| g.leading_exponent(&ord).unwrap()).collect();
            for (e, _) in r.remainder.terms() {
                prop_assert!(!expressible(e, &leads));
            }
        }
        if r.status == DivisionStatus::Exact {
            prop_assert!(r.tail.is_zero());
        }
    }

    #[test]
    fn membership_matches_search(
        beta in exponent(2, 9),
        gens in prop::collection::vec(nonzero_exponent(2, 4), 1..=4)
    ) {
        let got = monomial_membership(&beta, &gens).unwrap();
        prop_assert_eq!(got.is_some(), expressible(&beta, &gens));
        if let Some(fac) = got {
            prop_assert_eq!(fac.evaluate(&gens), Some(beta));
        }
    }

    #[test]
    fn kernel_decides_relations(
        thetas in prop::collection::vec(nonzero_exponent(2, 4), 2..=4),
        u in prop::collection::vec(0u32..5, 4),
        v in prop::collection::vec(0u32..5, 4)
    ) {
        let s = thetas.len();
        let (u, v) = (&u[..s], &v[..s]);
        let kernel = toric_kernel(&thetas).unwrap();
        prop_assert!(kernel.iter().all(|r| r.holds_for(&thetas)));
        let image = |m: &[u32]| -> Vec<u32> {
            (0..2).map(|i| m.iter().zip(&thetas).map(|(k, t)| k * t.coords()[i]).sum()).collect()
        };
        let same = binomial_normal_form(&kernel, u) == binomial_normal_form(&kernel, v);
        prop_assert_eq!(same, image(u) == image(v));
    }

    #[test]
    fn gap_report_matches_search(
        a in 1u32..6,
        b in 1u32..6,
        extra in prop::collection::vec(nonzero_exponent(2, 5), 0..=3)
    ) {
        let mut gens = vec![Exponent::new(vec![a, 0]), Exponent::new(vec![0, b])];
        gens.extend(extra);
        let sg = AffineSemigroup::new(2, gens.clone()).unwrap();
        let report = sg.gap_report();
        prop_assert!(!report.limited);
        if !report.cofinite {
            // gaps then run off along a strip next to an axis
            let gap = |x: u32, y: u32| !expressible(&Exponent::new(vec![x, y]), &gens);
            let far = (0..10).any(|x| (40..60).any(|y| gap(x, y) || gap(y, x)));
            prop_assert!(far);
            return Ok(());
        }
        let mut brute = Vec::new();
        for x in 0..=report.bound[0] {
            for y in 0..=report.bound[1] {
                let e = Exponent::new(vec![x, y]);
                if !expressible(&e, &gens) {
                    brute.push(e);
                }
            }
        }
        brute.sort();
        let mut gaps = report.gaps.clone();
        gaps.sort();
        prop_assert_eq!(gaps, brute);
    }

    #[test]
    fn reduced_basis_ignores_generator_order(
        gens in prop::collection::vec(poly(1, 2, 9, false), 1..=3),
        seed in any::<u64>()
    ) {
        let ord = WeightedOrder::with_default_tie(WeightVector::from_integers(&[1]).unwrap());
        let mut shuffled = gens.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        let cap = q(24);
        let a = AlgebraPresentation::new(gens).unwrap();
        let b = AlgebraPresentation::new(shuffled).unwrap();
        let (ra, rb) = (reduced_basis(&a, &ord, &cap).unwrap(), reduced_basis(&b, &ord, &cap).unwrap());
        if ra.is_exact() && rb.is_exact() {
            prop_assert_eq!(ra.elements, rb.elements);
        }
    }

    #[test]
    fn completion_leads_generate_the_initial_semigroup(
        gens in prop::collection::vec(poly(1, 2, 7, false), 1..=3)
    ) {
        // in one variable a canonical basis has every product's lead in
        // its semigroup; spot-check products of pairs
        let ord = WeightedOrder::with_default_tie(WeightVector::from_integers(&[1]).unwrap());
        let a = AlgebraPresentation::new(gens.clone()).unwrap();
        let b = complete(&a, &ord, &q(24)).unwrap();
        prop_assume!(b.is_exact());
        let sg = b.semigroup();
        let mut seen = HashMap::new();
        for f in &gens {
            for g in &gens {
                for c in [-2i64, -1, 1, 2] {
                    let h = &(f * g) + &f.scale(&q(c));
                    if !h.is_zero() {
                        let e = h.leading_exponent(&ord).unwrap();
                        seen.insert(e.clone(), sg.member(&e).unwrap());
                    }
                }
            }
        }
        prop_assert!(seen.values().all(|&m| m));
    }
}
