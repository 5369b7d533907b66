use chowring_core::gradedideal::{Ambient, GradedIdeal, HermiteBasis};
use chowring_core::localize::{fixed_points, fundamental_class};
use chowring_core::polycore::int::int;
use chowring_core::polycore::{Monomial, Polynomial, Var};
use chowring_core::symchern::{build_roots, BaseModule, ModuleDescriptor};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 200, ..ProptestConfig::default() }
}

fn vars() -> Vec<Var> {
    vec![Var::C(1), Var::C(2), Var::C(3), Var::H]
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, 4), -5i64..=5), 0..5).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(exps, c)| {
            (Monomial::from_pairs(vars().into_iter().zip(exps)), int(c))
        }))
    })
}

/// A homogeneous polynomial of weighted degree `d` in `ℤ[c1..cn]`.
fn homogeneous(n: usize, d: u32) -> impl Strategy<Value = Polynomial> {
    let monomials = Ambient::chern(n).monomials_of_degree(d);
    let count = monomials.len();
    prop::collection::vec((0..count, -4i64..=4), 1..4).prop_map(move |terms| {
        Polynomial::from_terms(terms.into_iter().map(|(i, c)| (monomials[i].clone(), int(c))))
    })
}

fn ideal() -> impl Strategy<Value = GradedIdeal> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec((1u32..=4).prop_flat_map(move |d| homogeneous(n, d)), 1..4)
            .prop_map(move |gens| GradedIdeal::new(Ambient::chern(n), gens).unwrap())
    })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn text_round_trip(a in poly()) {
        prop_assert_eq!(a.to_string().parse::<Polynomial>().unwrap(), a);
    }

    #[test]
    fn hnf_is_idempotent(i in ideal(), d in 0u32..=6) {
        let piece = i.graded_piece(d);
        let basis = piece.hermite_basis();
        let again = HermiteBasis::from_vectors(basis.width(), basis.rows().map(|(_, r)| r.to_vec()));
        prop_assert_eq!(&again, basis);
    }

    #[test]
    fn generator_order_is_irrelevant(i in ideal(), d in 0u32..=6, seed in any::<u64>()) {
        let mut gens = i.generators().to_vec();
        let len = gens.len();
        for j in (1..len).rev() {
            gens.swap(j, (seed as usize).wrapping_add(j * 7) % (j + 1));
        }
        let shuffled = i.with_generators(gens).unwrap();
        prop_assert_eq!(i.graded_piece(d), shuffled.graded_piece(d));
    }

    #[test]
    fn ideal_contains_its_generators(i in ideal()) {
        for g in i.generators() {
            prop_assert!(i.contains(g).unwrap());
        }
    }

    #[test]
    fn simplification_preserves_the_ideal(i in ideal(), extra in 0u32..=4) {
        let bound = i.max_generator_degree() + extra;
        let simple = i.with_generators(i.simplify_generators(bound)).unwrap();
        prop_assert!(simple.equal_up_to(&i, bound).unwrap().equal);
        prop_assert!(simple.generators().len() <= i.generators().len());
    }

    #[test]
    fn integer_combinations_are_members(
        i in ideal(),
        d in 1u32..=6,
        coeffs in prop::collection::vec(-3i64..=3, 64),
    ) {
        let a = i.ambient().clone();
        let mut combo = Polynomial::zero();
        let mut k = 0;
        for g in i.generators().iter().filter(|g| !g.is_zero()) {
            let e = g.degree().unwrap();
            if e > d { continue; }
            for m in a.monomials_of_degree(d - e) {
                combo = &combo + &g.mul_monomial(&m).scale(&int(coeffs[k % coeffs.len()]));
                k += 1;
            }
        }
        prop_assert!(i.contains(&combo).unwrap());
    }

    #[test]
    fn brute_force_certificates_agree(
        n in 2usize..=3,
        degs in prop::collection::vec(1u32..=3, 1..=2),
        seed in prop::collection::vec(-3i64..=3, 12),
        d in 2u32..=4,
        target in prop::collection::vec(-4i64..=4, 8),
        combo in prop::option::of(prop::collection::vec(-2i64..=2, 5)),
    ) {
        let monos = |e| Ambient::chern(n).monomials_of_degree(e);
        let gens: Vec<Polynomial> = degs.iter().enumerate().map(|(gi, &e)| {
            Polynomial::from_terms(monos(e).into_iter().enumerate()
                .map(|(j, m)| (m, int(seed[(gi * 5 + j) % seed.len()]))))
        }).filter(|g| !g.is_zero()).collect();
        let i = GradedIdeal::new(Ambient::chern(n), gens).unwrap();
        let target = Polynomial::from_terms(monos(d).into_iter().enumerate()
            .map(|(j, m)| (m, int(target[j % target.len()]))));

        let multiples: Vec<Polynomial> = i.generators().iter().flat_map(|g| {
            let e = g.degree().unwrap();
            if e > d { Vec::new() } else { monos(d - e).into_iter().map(|m| g.mul_monomial(&m)).collect() }
        }).collect();
        prop_assume!(multiples.len() <= 5);
        // half the targets are combinations inside the search box
        let from_box = combo.is_some();
        let target = match combo {
            Some(cs) => multiples.iter().zip(cs).fold(Polynomial::zero(), |acc, (m, c)| &acc + &m.scale(&int(c))),
            None => target,
        };
        const B: i64 = 2;
        let width = (2 * B + 1) as usize;
        let mut found = false;
        for code in 0..width.pow(multiples.len() as u32) {
            let mut c = code;
            let mut sum = Polynomial::zero();
            for mul in &multiples {
                sum = &sum + &mul.scale(&int((c % width) as i64 - B));
                c /= width;
            }
            if sum == target {
                found = true;
                break;
            }
        }
        if found {
            prop_assert!(i.contains(&target).unwrap());
        }
        prop_assert!(found || !from_box);
    }

    #[test]
    fn fixed_point_restriction(n in 2usize..=4, twist in -2i64..=2, base in 0usize..4, j in 0usize..10) {
        let base = [BaseModule::Standard, BaseModule::Dual, BaseModule::Sym2Dual, BaseModule::Wedge2Dual][base];
        let v = build_roots(n, &ModuleDescriptor::twisted(twist, base)).unwrap();
        let pts = fixed_points(&v).unwrap();
        let pt = &pts[j % pts.len()];
        prop_assert_eq!(pt.tangent_weights.len(), v.dimension() - 1);
        let class = fundamental_class(&v, pt.index, Var::H).unwrap();
        let euler = chowring_core::polycore::product(&pt.tangent_weights);
        prop_assert_eq!(pt.restrict(&class, Var::H), euler);
    }
}
