use proptest::prelude::*;

use isospec::exactalg::arith::{gcd, units};
use isospec::lens::LensParams;
use isospec::molien::{fingerprint, group_from_lens};

/// `(q, s)` with every `s_j` a unit mod `q`, written with random signs and
/// random multiples of `q` added.
fn lens_space(q_max: u32, n_max: usize) -> impl Strategy<Value = (u32, Vec<i64>)> {
    (3u32..=q_max).prop_flat_map(move |q| {
        let us: Vec<i64> = units(q as u64).into_iter().map(|u| u as i64).collect();
        let k = us.len();
        (
            Just(q),
            prop::collection::vec((0..k, -2i64..=2, any::<bool>()), 1..=n_max).prop_map(move |v| {
                v.into_iter()
                    .map(|(i, m, neg)| {
                        let x = us[i] + m * q as i64;
                        if neg {
                            -x
                        } else {
                            x
                        }
                    })
                    .collect()
            }),
        )
    })
}

fn apply(s: &[i64], unit: i64, perm_seed: usize, signs: &[bool]) -> Vec<i64> {
    let mut v: Vec<i64> = s
        .iter()
        .zip(signs.iter().cycle())
        .map(|(&x, &neg)| if neg { -x * unit } else { x * unit })
        .collect();
    let len = v.len();
    v.rotate_left(perm_seed % len);
    if perm_seed % 2 == 1 {
        v.reverse();
    }
    v
}

fn random_unit(q: u32, seed: usize) -> i64 {
    let us = units(q as u64);
    us[seed % us.len()] as i64
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent((q, s) in lens_space(30, 5)) {
        let l = LensParams::lens_space(q, &s).unwrap();
        let c = l.canonicalize();
        prop_assert_eq!(c.to_params().canonicalize(), c.clone());
        prop_assert!(c.to_params().is_isometric(&l));
    }

    #[test]
    fn canonical_form_is_invariant(
        (q, s) in lens_space(30, 5),
        seed in any::<usize>(),
        perm in any::<usize>(),
        signs in prop::collection::vec(any::<bool>(), 1..6),
    ) {
        let l = LensParams::lens_space(q, &s).unwrap();
        let moved = apply(&s, random_unit(q, seed), perm, &signs);
        let m = LensParams::lens_space(q, &moved).unwrap();
        prop_assert_eq!(l.canonicalize(), m.canonicalize());
    }

    #[test]
    fn isometry_is_an_equivalence(
        (q, a) in lens_space(9, 3),
        b_seed in prop::collection::vec(any::<usize>(), 3),
        c_seed in prop::collection::vec(any::<usize>(), 3),
    ) {
        let us: Vec<i64> = units(q as u64).into_iter().map(|u| u as i64).collect();
        let pick = |seed: &[usize]| -> Vec<i64> {
            seed[..a.len()].iter().map(|&i| us[i % us.len()]).collect()
        };
        let la = LensParams::lens_space(q, &a).unwrap();
        let lb = LensParams::lens_space(q, &pick(&b_seed)).unwrap();
        let lc = LensParams::lens_space(q, &pick(&c_seed)).unwrap();
        prop_assert!(la.is_isometric(&la));
        prop_assert_eq!(la.is_isometric(&lb), lb.is_isometric(&la));
        if la.is_isometric(&lb) && lb.is_isometric(&lc) {
            prop_assert!(la.is_isometric(&lc));
        }
    }

    #[test]
    fn normal_form_dominates_and_is_isometric((q, s) in lens_space(40, 6)) {
        let l = LensParams::lens_space(q, &s).unwrap();
        let e = l.normal_form_exponents().unwrap();
        prop_assert!(e.iter().all(|&x| x <= e[0]));
        prop_assert_eq!(e.iter().sum::<u32>() as usize, s.len());
        let back = LensParams::from_exponents(q, &e).unwrap();
        prop_assert!(back.is_isometric(&l));
    }

    #[test]
    fn isometric_inputs_have_equal_fingerprints(
        (q, s) in lens_space(13, 4),
        seed in any::<usize>(),
        perm in any::<usize>(),
        signs in prop::collection::vec(any::<bool>(), 1..5),
    ) {
        let l = LensParams::lens_space(q, &s).unwrap();
        let moved = apply(&s, random_unit(q, seed), perm, &signs);
        let m = LensParams::lens_space(q, &moved).unwrap();
        let fa = fingerprint(&group_from_lens(&l)).unwrap();
        let fb = fingerprint(&group_from_lens(&m)).unwrap();
        prop_assert_eq!(fa, fb);
    }

    #[test]
    fn orbifold_canonical_form_is_invariant(
        q in 2u32..16,
        raw in prop::collection::vec(0i64..40, 1..4),
        even in any::<bool>(),
        seed in any::<usize>(),
    ) {
        let g = raw.iter().fold(q as u64, |acc, &x| gcd(acc, x as u64));
        prop_assume!(g == 1);
        let d = 2 * raw.len() as u32 - if even { 0 } else { 1 };
        let l = LensParams::validate(d, q, &raw).unwrap();
        let us = units(q as u64);
        let u = us[seed % us.len()] as i64;
        let moved: Vec<i64> = raw.iter().rev().map(|&x| -x * u).collect();
        let m = LensParams::validate(d, q, &moved).unwrap();
        prop_assert!(l.is_isometric(&m));
    }
}

#[test]
fn extension_keeps_the_pair_apart() {
    let a = LensParams::lens_space(11, &[1, 2, 3]).unwrap();
    let b = LensParams::lens_space(11, &[1, 2, 4]).unwrap();
    for r in 1..=2 {
        let (ea, eb) = (a.extend(r).unwrap(), b.extend(r).unwrap());
        assert_eq!(ea.d(), 5 + 10 * r);
        assert_ne!(ea.canonicalize(), eb.canonicalize());
        let fa = fingerprint(&group_from_lens(&ea)).unwrap();
        let fb = fingerprint(&group_from_lens(&eb)).unwrap();
        assert_eq!(fa, fb);
    }
}
