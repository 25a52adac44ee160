use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use isospec::exactalg::arith::{divisors, gcd, totient, units};
use isospec::exactalg::{cyclotomic_poly, series_inverse, CycloElem, IntPoly, TruncSeries};

#[test]
fn cyclotomic_products_up_to_200() {
    for q in 1..=200u32 {
        let phi = cyclotomic_poly(q);
        assert_eq!(phi.degree(), Some(totient(q as u64) as usize), "q = {q}");
        let prod = divisors(q as u64)
            .into_iter()
            .fold(IntPoly::one(), |acc, e| acc.mul(&cyclotomic_poly(e as u32)));
        let mut want = vec![0i64; q as usize + 1];
        want[0] = -1;
        want[q as usize] = 1;
        assert_eq!(prod, IntPoly::from_i64(&want), "q = {q}");
    }
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn cyclo(conductor: u32) -> impl Strategy<Value = CycloElem> {
    let deg = totient(conductor as u64) as usize;
    prop::collection::vec(small_rational(), deg)
        .prop_map(move |c| CycloElem::from_poly(conductor, c).unwrap())
}

fn conductor() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 3, 4, 5, 7, 8, 9, 12, 15, 20])
}

proptest! {
    #[test]
    fn series_inverse_is_inverse(
        c0 in prop::sample::select(vec![-3i64, -1, 1, 2, 5]),
        rest in prop::collection::vec(-9i64..=9, 0..12),
        order in 0usize..16,
    ) {
        let mut coeffs = vec![c0];
        coeffs.extend(rest);
        coeffs.resize(coeffs.len().max(order + 1), 0);
        let p = TruncSeries::from_i64(&coeffs).truncate(order);
        let inv = series_inverse(&p).unwrap();
        let prod = p.mul(&inv);
        prop_assert_eq!(prod.order(), order);
        for (k, c) in prod.coeffs().iter().enumerate() {
            let want = if k == 0 { BigRational::one() } else { BigRational::zero() };
            prop_assert_eq!(c, &want);
        }
    }

    #[test]
    fn field_axioms((a, b, c) in conductor().prop_flat_map(|n| (cyclo(n), cyclo(n), cyclo(n)))) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.sub(&a), CycloElem::zero(a.conductor()));
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), CycloElem::one(a.conductor()));
            prop_assert_eq!(b.mul(&a).div(&a).unwrap(), b);
        }
    }

    #[test]
    fn galois_fixed_elements_are_rational(a in conductor().prop_flat_map(cyclo)) {
        let n = a.conductor();
        let trace = units(n as u64)
            .into_iter()
            .fold(CycloElem::zero(n), |acc, j| acc.add(&a.galois(j as i64)));
        for j in units(n as u64) {
            prop_assert_eq!(&trace.galois(j as i64), &trace);
        }
        prop_assert!(trace.is_rational());
        let norm = a.mul(&a.conj());
        prop_assert!(norm.is_real());
    }

    #[test]
    fn root_powers_satisfy_cyclotomic(n in conductor(), e in -40i64..40) {
        let z = CycloElem::root_power(n, e);
        prop_assert_eq!(z.pow(n), CycloElem::one(n));
        let primitive = gcd(e.rem_euclid(n as i64) as u64, n as u64) == 1;
        prop_assert_eq!(z.eval_poly(&cyclotomic_poly(n)).is_zero(), primitive);
    }
}
