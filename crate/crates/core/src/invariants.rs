//! Spectral invariants finer than the coefficient sequence: the set of
//! element orders, the partial Molien sums `F^(k)` over elements of exact
//! order `k`, pole orders of these functions, and the polynomial `P_Γ`
//! that separates lens spaces with `φ(q) = 6`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::arith::totient;
use crate::exactalg::{real_cmp, CycloElem, IntPoly, RatFunc};
use crate::lens::{unit_base, LensParams};
use crate::molien::{group_from_lens, orbit_numerator, GroupModel};

/// Element orders and the partial sums `F^(k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderProfile {
    pub orders: BTreeSet<u32>,
    pub per_order: BTreeMap<u32, RatFunc>,
}

pub fn orders_of(g: &GroupModel) -> BTreeSet<u32> {
    g.element_orders().iter().copied().collect()
}

fn require_order(g: &GroupModel, k: u32) -> Result<()> {
    if g.element_orders().contains(&k) {
        Ok(())
    } else {
        Err(Error::OrderAbsent(k))
    }
}

/// `F^(k)(z) = Σ_{γ of order k} 1/det(I - zγ)` in reduced form.
pub fn f_k(g: &GroupModel, k: u32) -> Result<RatFunc> {
    require_order(g, k)?;
    let num = orbit_numerator(g, Some(k), k)?;
    Ok(RatFunc::over_one_minus_power(
        BigRational::one(),
        num,
        k,
        g.ambient(),
    ))
}

pub fn order_profile(g: &GroupModel) -> Result<OrderProfile> {
    let orders = orders_of(g);
    let per_order = orders
        .iter()
        .map(|&k| f_k(g, k).map(|f| (k, f)))
        .collect::<Result<_>>()?;
    Ok(OrderProfile { orders, per_order })
}

/// Pole order of `f` at `ξ_M^j`.
pub fn pole_order_at(f: &RatFunc, j: u32, m: u32) -> u32 {
    f.pole_order_at(j, m)
}

/// Largest multiplicity of the eigenvalue `ξ_k` among elements of order
/// `k`.
pub fn max_mult(g: &GroupModel, k: u32) -> Result<u32> {
    require_order(g, k)?;
    let target = g.conductor() / k;
    Ok(g
        .elements()
        .iter()
        .zip(g.element_orders())
        .filter(|(_, &o)| o == k)
        .map(|(s, _)| {
            s.iter()
                .find(|&&(e, _)| e == target % g.conductor())
                .map_or(0, |&(_, m)| m)
        })
        .max()
        .unwrap_or(0))
}

/// Which of the three normal-form shapes an exponent triple has.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Phi6Case {
    /// `n_1 > max(n_2, n_3)`
    Dominant,
    /// `n_1 = n_2 > n_3`
    Pair,
    /// `n_1 = n_2 = n_3`
    Balanced,
}

/// The polynomial `P_Γ` with `F^(q) = 2 P_Γ / Φ_q^{n_1}` and its values at
/// `1` and (in squared modulus) at `ξ_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi6Gadget {
    pub q: u32,
    pub exponents: [u32; 3],
    pub case: Phi6Case,
    pub poly: IntPoly,
    pub at_one: CycloElem,
    pub abs_sq_at_root: CycloElem,
}

type CPoly = Vec<CycloElem>;

fn cpoly_mul(a: &CPoly, b: &CPoly, n: u32) -> CPoly {
    let mut out = vec![CycloElem::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// `((z - ξ^a)(z - ξ^{-a}))^e`.
fn conj_pair_power(q: u32, a: u32, e: u32) -> CPoly {
    let trace = CycloElem::root_power(q, a as i64).add(&CycloElem::root_power(q, -(a as i64)));
    let quad = vec![CycloElem::one(q), trace.neg(), CycloElem::one(q)];
    let mut acc = vec![CycloElem::one(q)];
    for _ in 0..e {
        acc = cpoly_mul(&acc, &quad, q);
    }
    acc
}

fn cpoly_add(a: &CPoly, b: &CPoly, n: u32) -> CPoly {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(|| CycloElem::zero(n));
            let y = b.get(i).cloned().unwrap_or_else(|| CycloElem::zero(n));
            x.add(&y)
        })
        .collect()
}

/// Builds `P_Γ` for `L(q; 1^{n_1}, s_2^{n_2}, s_3^{n_3})` and checks it
/// against the partial sum `F^(q)` of the actual group.
pub fn phi6_gadget(q: u32, exponents: [u32; 3]) -> Result<Phi6Gadget> {
    if totient(q as u64) != 6 {
        return Err(Error::WrongTotient(q));
    }
    let [n1, n2, n3] = exponents;
    if n1 < n2 || n1 < n3 || n1 == 0 {
        return Err(Error::InvalidParameter(format!(
            "exponents {exponents:?} are not in normal form"
        )));
    }
    let case = if n1 > n2.max(n3) {
        Phi6Case::Dominant
    } else if n1 == n2 && n2 > n3 {
        Phi6Case::Pair
    } else if n2 == n3 {
        Phi6Case::Balanced
    } else {
        return Err(Error::InvalidParameter(format!(
            "n_1 = n_3 > n_2 is excluded from the normal form: {exponents:?}"
        )));
    };
    let s = unit_base(q);
    let (s1, s2, s3) = (s[0], s[1], s[2]);
    let (a, b) = (n1 - n2, n1 - n3);
    let terms = [
        cpoly_mul(&conj_pair_power(q, s2, a), &conj_pair_power(q, s3, b), q),
        cpoly_mul(&conj_pair_power(q, s3, a), &conj_pair_power(q, s1, b), q),
        cpoly_mul(&conj_pair_power(q, s1, a), &conj_pair_power(q, s2, b), q),
    ];
    let sum = terms.iter().fold(vec![CycloElem::zero(q)], |acc, t| cpoly_add(&acc, t, q));
    let mut coeffs = Vec::with_capacity(sum.len());
    for c in &sum {
        let r = c.as_rational().ok_or_else(|| {
            Error::InternalInconsistency("P_Γ has an irrational coefficient".into())
        })?;
        if !r.is_integer() {
            return Err(Error::InternalInconsistency(
                "P_Γ has a non-integral coefficient".into(),
            ));
        }
        coeffs.push(r.to_integer());
    }
    let poly = IntPoly::new(coeffs);

    let base: Vec<i64> = [(s1, n1), (s2, n2), (s3, n3)]
        .iter()
        .flat_map(|&(x, k)| std::iter::repeat_n(x as i64, k as usize))
        .collect();
    let lens = LensParams::lens_space(q, &base)?;
    let fq = f_k(&group_from_lens(&lens), q)?;
    let mut den = BTreeMap::new();
    den.insert(q, n1);
    let claimed = RatFunc::new(BigRational::from_integer(BigInt::from(2)), poly.clone(), den);
    if claimed != fq {
        return Err(Error::InternalInconsistency(format!(
            "2 P_Γ / Φ_{q}^{n1} differs from F^({q}) for {exponents:?}"
        )));
    }

    let at_one = CycloElem::from_rational(q, BigRational::from_integer(poly.eval_int(&BigInt::one())));
    let at_root = CycloElem::root_power(q, 1).eval_poly(&poly);
    let abs_sq_at_root = at_root.mul(&at_root.conj());
    Ok(Phi6Gadget {
        q,
        exponents,
        case,
        poly,
        at_one,
        abs_sq_at_root,
    })
}

/// Outcome of the trichotomy and monotonicity checks for one `q`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phi6Report {
    pub q: u32,
    pub n_max: u32,
    pub gadgets: usize,
    pub violations: Vec<String>,
}

impl Phi6Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Normal-form triples `(n_1, n_2, n_3)` with `n_1 + n_2 + n_3 = n`,
/// `n_1 ≥ max(n_2, n_3)` and not `n_1 = n_3 > n_2`.
pub fn phi6_normal_triples(n: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for n1 in 1..=n {
        for n2 in 0..=n1.min(n - n1) {
            let n3 = n - n1 - n2;
            if n3 > n1 || (n1 == n3 && n3 > n2) {
                continue;
            }
            out.push([n1, n2, n3]);
        }
    }
    out
}

/// For every `n ≤ n_max`: `P_Γ ≡ 3` exactly in the balanced case,
/// `P_Γ(1)` is strictly smaller in the dominant case than in the pair case
/// at equal `(n, n_1)`, and `n_2 ↦ |P_Γ(ξ_q)|²` is strictly increasing on
/// dominant triples at fixed `(n, n_1)`.
pub fn phi6_sweep(q: u32, n_max: u32) -> Result<Phi6Report> {
    let mut report = Phi6Report {
        q,
        n_max,
        ..Default::default()
    };
    let three = IntPoly::from_i64(&[3]);
    for n in 1..=n_max {
        let gadgets: Vec<Phi6Gadget> = phi6_normal_triples(n)
            .into_iter()
            .map(|t| phi6_gadget(q, t))
            .collect::<Result<_>>()?;
        report.gadgets += gadgets.len();
        for g in &gadgets {
            if (g.poly == three) != (g.case == Phi6Case::Balanced) {
                report
                    .violations
                    .push(format!("q={q} {:?}: P ≡ 3 does not match the balanced case", g.exponents));
            }
        }
        for n1 in 1..=n {
            let same: Vec<&Phi6Gadget> = gadgets.iter().filter(|g| g.exponents[0] == n1).collect();
            let dominant: Vec<&&Phi6Gadget> =
                same.iter().filter(|g| g.case == Phi6Case::Dominant).collect();
            for p in same.iter().filter(|g| g.case == Phi6Case::Pair) {
                for d in &dominant {
                    if real_cmp(&d.at_one, &p.at_one) != Ordering::Less {
                        report.violations.push(format!(
                            "q={q}: P(1) for {:?} is not below P(1) for {:?}",
                            d.exponents, p.exponents
                        ));
                    }
                }
            }
            // dominant triples come out ordered by n_2
            for w in dominant.windows(2) {
                if real_cmp(&w[0].abs_sq_at_root, &w[1].abs_sq_at_root) != Ordering::Less {
                    report.violations.push(format!(
                        "q={q}: |P(ξ)|² does not increase from {:?} to {:?}",
                        w[0].exponents, w[1].exponents
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Exact sum `Σ_k F^(k)`, which must equal `N F_Γ / (1 - z²)`.
pub fn sum_of_partials(profile: &OrderProfile) -> RatFunc {
    profile
        .per_order
        .values()
        .fold(RatFunc::zero(), |acc, f| acc.add(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molien::fingerprint;

    fn lens(q: u32, s: &[i64]) -> LensParams {
        LensParams::lens_space(q, s).unwrap()
    }

    #[test]
    fn orders() {
        let g = group_from_lens(&lens(11, &[1, 2, 3]));
        assert_eq!(orders_of(&g), BTreeSet::from([1, 11]));
        let g = group_from_lens(&lens(12, &[1, 5]));
        assert_eq!(orders_of(&g), BTreeSet::from([1, 2, 3, 4, 6, 12]));
    }

    #[test]
    fn identity_partial_sum() {
        let g = group_from_lens(&lens(11, &[1, 2, 3]));
        let f1 = f_k(&g, 1).unwrap();
        assert_eq!(f1, RatFunc::over_one_minus_power(BigRational::one(), IntPoly::one(), 1, 6));
        assert!(matches!(f_k(&g, 5), Err(Error::OrderAbsent(5))));
    }

    #[test]
    fn partial_sums_add_up() {
        let g = group_from_lens(&lens(12, &[1, 5, 5]));
        let total = sum_of_partials(&order_profile(&g).unwrap());
        let f = fingerprint(&g).unwrap().generating_function();
        let scaled = f
            .mul_scalar(&BigRational::from_integer(BigInt::from(12)))
            .mul(&RatFunc::over_one_minus_power(BigRational::one(), IntPoly::one(), 2, 1).neg())
            .neg();
        assert_eq!(total, scaled);
    }

    #[test]
    fn isospectral_pair_has_equal_principal_part() {
        let a = f_k(&group_from_lens(&lens(11, &[1, 2, 3])), 11).unwrap();
        let b = f_k(&group_from_lens(&lens(11, &[1, 2, 4])), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn coset_form_of_principal_part() {
        // 2 Σ_{i≤5} Π_j 1/((1 - ξ^{i s_j} z)(1 - ξ^{-i s_j} z)) as a series over Q(ξ_11)
        let q = 11u32;
        let order = 30;
        let mut total = vec![CycloElem::zero(q); order + 1];
        for i in 1..=5i64 {
            let mut series = vec![CycloElem::zero(q); order + 1];
            series[0] = CycloElem::one(q);
            for sj in [1i64, 2, 3] {
                for e in [i * sj, -i * sj] {
                    let lam = CycloElem::root_power(q, e);
                    for k in 1..=order {
                        let prev = series[k - 1].mul(&lam);
                        series[k] = series[k].add(&prev);
                    }
                }
            }
            for (t, x) in total.iter_mut().zip(&series) {
                *t = t.add(&x.add(x));
            }
        }
        let f = f_k(&group_from_lens(&lens(11, &[1, 2, 3])), 11).unwrap();
        let taylor = f.taylor(order).unwrap();
        for (a, b) in total.iter().zip(taylor.coeffs()) {
            assert_eq!(a.as_rational().as_ref(), Some(b));
        }
        assert_eq!(pole_order_at(&f, 1, 11), 1);
    }

    #[test]
    fn max_multiplicity() {
        assert_eq!(max_mult(&group_from_lens(&lens(11, &[1, 1, 2])), 11).unwrap(), 2);
        assert_eq!(max_mult(&group_from_lens(&lens(11, &[2, 2, 3])), 11).unwrap(), 2);
    }

    #[test]
    fn gadget_balanced_is_three() {
        let g = phi6_gadget(7, [1, 1, 1]).unwrap();
        assert_eq!(g.poly, IntPoly::from_i64(&[3]));
        assert_eq!(g.at_one.as_rational(), Some(BigRational::from_integer(3.into())));
        assert_eq!(g.abs_sq_at_root.as_rational(), Some(BigRational::from_integer(9.into())));
        assert!(matches!(phi6_gadget(11, [1, 1, 1]), Err(Error::WrongTotient(11))));
    }

    #[test]
    fn gadget_sweeps() {
        for q in [7, 9, 14, 18] {
            let r = phi6_sweep(q, 6).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
        }
    }
}
