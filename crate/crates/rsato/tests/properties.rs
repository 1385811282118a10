//! Property suites: series ring laws, ball-arithmetic soundness,
//! reference-pi consistency, and perturbation sensitivity of the
//! verification pipeline.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use rsato::numerics::ball::{ref_pi, ref_pi_alt, BallReal};
use rsato::qseries::FractionalQSeries;

type QS = FractionalQSeries<BigRational>;

fn rational(num: i64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn series_strategy() -> impl Strategy<Value = QS> {
    (
        -2i64..=2,
        1i64..=9,
        prop::bool::ANY,
        prop::collection::vec(-9i64..=9, 0..6),
    )
        .prop_map(|(lead, head, neg, tail)| {
            let mut coeffs = vec![rational(if neg { -head } else { head }, 1)];
            coeffs.extend(tail.into_iter().map(|c| rational(c, 1)));
            QS::new(1, lead, coeffs)
        })
}

fn common_truncation(a: &QS, b: &QS) -> (QS, QS) {
    let order = a.order_num().min(b.order_num());
    (a.truncate_to(order), b.truncate_to(order))
}

proptest! {
    #[test]
    fn addition_commutes(a in series_strategy(), b in series_strategy()) {
        let lhs = a.add(&b).unwrap();
        let rhs = b.add(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_commutes(a in series_strategy(), b in series_strategy()) {
        let lhs = a.mul(&b).unwrap();
        let rhs = b.mul(&a).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_distributes(
        a in series_strategy(),
        b in series_strategy(),
        c in series_strategy(),
    ) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        let (l, r) = common_truncation(&lhs, &rhs);
        prop_assert_eq!(l, r);
    }

    #[test]
    fn inverse_round_trips(a in series_strategy()) {
        let prod = a.mul(&a.inv().unwrap()).unwrap();
        prop_assert_eq!(prod.lead_num(), 0);
        let is_one = prod.coeffs().iter().enumerate().all(|(k, c)| {
            if k == 0 { c == &rational(1, 1) } else { c.is_zero() }
        });
        prop_assert!(is_one);
    }

    #[test]
    fn theta_operator_is_a_derivation(a in series_strategy(), b in series_strategy()) {
        let lhs = a.mul(&b).unwrap().dq();
        let rhs = a.dq().mul(&b).unwrap().add(&a.mul(&b.dq()).unwrap()).unwrap();
        let (l, r) = common_truncation(&lhs, &rhs);
        prop_assert_eq!(l, r);
    }
}

fn rational_strategy() -> impl Strategy<Value = BigRational> {
    (-999i64..=999, 1u64..=99).prop_map(|(n, d)| rational(n, d))
}

proptest! {
    #[test]
    fn balls_contain_exact_rationals(r in rational_strategy(), s in rational_strategy()) {
        let prec = 64;
        let br = BallReal::from_rational(&r, prec);
        let bs = BallReal::from_rational(&s, prec);
        prop_assert!(br.contains_rational(&r));
        prop_assert!(br.add(&bs).contains_rational(&(&r + &s)));
        prop_assert!(br.sub(&bs).contains_rational(&(&r - &s)));
        prop_assert!(br.mul(&bs).contains_rational(&(&r * &s)));
        if !s.is_zero() {
            prop_assert!(bs.inv().unwrap().contains_rational(&s.recip()));
        }
    }

    #[test]
    fn ball_sqrt_squares_back(r in rational_strategy()) {
        prop_assume!(r > BigRational::zero());
        let b = BallReal::from_rational(&r, 96);
        let root = b.sqrt("operand").unwrap();
        prop_assert!(root.mul(&root).contains_rational(&r));
    }

    #[test]
    fn reference_pi_is_consistent(prec in 32u32..=256) {
        let a = ref_pi(prec);
        let b = ref_pi_alt(prec);
        prop_assert!(a.overlaps(&b));
        let refined = ref_pi(prec + 64);
        prop_assert!(a.overlaps(&refined));
        prop_assert!(refined.rad().le(a.rad()));
        prop_assert!(a.contains_dyadic(refined.mid()));
        prop_assert!(!a.contains_rational(&rational(22, 7)));
    }
}

mod perturbation {
    use super::*;
    use num_traits::One;
    use rsato::modeq::verify_annihilation;
    use rsato::odeops::{derive_recurrence, extract_r, initial_coefficients, ode_residual};
    use rsato::qseries::Poly;
    use rsato::registry;

    fn bump(p: &Poly, i: usize, delta: i64) -> Poly {
        let mut cs: Vec<BigRational> = (0..=p.degree().max(i)).map(|k| p.coeff(k)).collect();
        cs[i] += rational(delta, 1);
        Poly::new(cs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        #[test]
        fn wrong_w_is_detected(i in 1usize..=10, delta in prop_oneof![-3i64..=-1, 1i64..=3]) {
            let g = registry::find_builtin("39+39").unwrap();
            let mut bad = g.clone();
            bad.w = bump(&g.w, i, delta);
            let caught = match extract_r(&bad, 48) {
                Err(_) => true,
                Ok(r) => r != g.r || !ode_residual(&bad, 44).map_or(true, |s| s.is_empty()),
            };
            prop_assert!(caught);
        }

        #[test]
        fn wrong_r_is_detected(i in 1usize..=10, delta in prop_oneof![-3i64..=-1, 1i64..=3]) {
            let g = registry::find_builtin("39+39").unwrap();
            let mut bad = g.clone();
            bad.r = bump(&g.r, i, delta);
            let caught = match ode_residual(&bad, 44) {
                Err(_) => true,
                Ok(res) => !res.is_empty(),
            };
            prop_assert!(caught);
        }

        #[test]
        fn wrong_psi_is_detected(i in 0usize..=2, j in 0usize..=2, delta in prop_oneof![-2i64..=-1, 1i64..=2]) {
            let g = registry::find_builtin("39+39").unwrap();
            let mut psi = g.expect.psi.clone().unwrap();
            psi.coeffs[i][j] += BigInt::from(delta);
            let caught = match verify_annihilation(&psi, &g, 60) {
                Err(_) => true,
                Ok(res) => !res.is_empty(),
            };
            prop_assert!(caught);
        }

        #[test]
        fn wrong_initial_is_detected(i in 1usize..=9, delta in prop_oneof![-3i64..=-1, 1i64..=3]) {
            let g = registry::find_builtin("39+39").unwrap();
            let mut rec = derive_recurrence(&g, 64).unwrap();
            rec.initials[i] += rational(delta, 1) * BigRational::one();
            let streamed: Vec<BigRational> = rec.stream().take(12).collect();
            let direct = initial_coefficients(&g, 12, 16).unwrap();
            prop_assert!(streamed != direct);
        }
    }
}
