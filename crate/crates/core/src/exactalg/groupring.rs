//! Series and polynomials with coefficients in the group ring `Z[C_M]`.
//!
//! An element `Σ_r c_r ξ^r` of `Z[ξ_M]` is carried unreduced as the vector
//! `(c_0, ..., c_{M-1})`, so multiplying by a root of unity is a rotation.
//! Every quantity built here has non-negative coordinates, which lets the
//! inner loops run on a fixed-width unsigned accumulator whenever an
//! a-priori bound guarantees it cannot overflow.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::arith::root_trace;
use super::poly::cyclotomic_poly;

/// Unsigned 256-bit integer supporting only what the recurrences need.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct U256 {
    lo: u128,
    hi: u128,
}

pub(crate) trait Accum: Clone + Default {
    fn one() -> Self;
    fn add_assign(&mut self, other: &Self);
    /// Requires `self >= other`.
    fn sub_assign(&mut self, other: &Self);
    fn to_bigint(&self) -> BigInt;
}

impl Accum for U256 {
    fn one() -> Self {
        U256 { lo: 1, hi: 0 }
    }

    #[inline]
    fn add_assign(&mut self, other: &Self) {
        let (lo, carry) = self.lo.overflowing_add(other.lo);
        self.lo = lo;
        self.hi = self
            .hi
            .checked_add(other.hi + carry as u128)
            .expect("256-bit accumulator overflow despite bound check");
    }

    #[inline]
    fn sub_assign(&mut self, other: &Self) {
        let (lo, borrow) = self.lo.overflowing_sub(other.lo);
        self.lo = lo;
        self.hi = self
            .hi
            .checked_sub(other.hi + borrow as u128)
            .expect("256-bit accumulator underflow");
    }

    fn to_bigint(&self) -> BigInt {
        let hi = BigUint::from(self.hi) << 128u32;
        BigInt::from(hi + BigUint::from(self.lo))
    }
}

impl Accum for BigUint {
    fn one() -> Self {
        <BigUint as One>::one()
    }

    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }

    fn sub_assign(&mut self, other: &Self) {
        *self -= other;
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(self.clone())
    }
}

fn fits_u256(bound: &BigUint) -> bool {
    bound.bits() < 255
}

fn binomial(n: u64, k: u64) -> BigUint {
    let mut acc = <BigUint as One>::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Dense table `c[k][r]`, stored row-major.
pub(crate) struct RingTable {
    pub modulus: usize,
    pub rows: usize,
    pub data: Vec<BigInt>,
}

impl RingTable {
    pub fn row(&self, k: usize) -> &[BigInt] {
        &self.data[k * self.modulus..(k + 1) * self.modulus]
    }
}

/// Expands `Π_λ 1/(1 - λz)` to order `order`, where the eigenvalues are
/// `ξ_M^e` with the given multiplicities.
pub(crate) fn inverse_det_series(eigen: &[(u32, u32)], modulus: u32, order: usize) -> RingTable {
    let factors: u64 = eigen.iter().map(|&(_, m)| m as u64).sum();
    let bound = binomial(order as u64 + factors, factors.max(1));
    if fits_u256(&bound) {
        inverse_det_series_with::<U256>(eigen, modulus, order)
    } else {
        inverse_det_series_with::<BigUint>(eigen, modulus, order)
    }
}

fn inverse_det_series_with<A: Accum>(eigen: &[(u32, u32)], modulus: u32, order: usize) -> RingTable {
    let m = modulus as usize;
    let rows = order + 1;
    let mut c: Vec<A> = vec![A::default(); rows * m];
    c[0] = A::one();
    for &(e, mult) in eigen {
        let e = e as usize % m;
        for _ in 0..mult {
            // c_k += ξ^e c_{k-1}, ascending in k.
            for k in 1..rows {
                let (prev, cur) = c.split_at_mut(k * m);
                let prev = &prev[(k - 1) * m..];
                let cur = &mut cur[..m];
                for r in 0..m {
                    let src = (r + m - e) % m;
                    cur[r].add_assign(&prev[src]);
                }
            }
        }
    }
    RingTable {
        modulus: m,
        rows,
        data: c.iter().map(Accum::to_bigint).collect(),
    }
}

/// Multiplies out `Π_λ (1 - z^P)/(1 - λz) = Π_λ Σ_{i<P} λ^i z^i`.
/// Every eigenvalue must satisfy `λ^P = 1`.
pub(crate) fn window_product(eigen: &[(u32, u32)], modulus: u32, period: u32) -> RingTable {
    let factors: u64 = eigen.iter().map(|&(_, m)| m as u64).sum();
    let bound = BigUint::from(period).pow(factors as u32);
    if fits_u256(&bound) {
        window_product_with::<U256>(eigen, modulus, period)
    } else {
        window_product_with::<BigUint>(eigen, modulus, period)
    }
}

fn window_product_with<A: Accum>(eigen: &[(u32, u32)], modulus: u32, period: u32) -> RingTable {
    let m = modulus as usize;
    let p = period as usize;
    let factors: usize = eigen.iter().map(|&(_, mult)| mult as usize).sum();
    let rows = factors * (p - 1) + 1;
    let mut c: Vec<A> = vec![A::default(); rows * m];
    c[0] = A::one();
    let mut deg = 0usize;
    for &(e, mult) in eigen {
        assert_eq!(
            (e as u64 * period as u64) % modulus as u64,
            0,
            "eigenvalue is not a P-th root of unity"
        );
        let e = e as usize % m;
        for _ in 0..mult {
            let old: Vec<A> = c[..(deg + 1) * m].to_vec();
            let new_deg = deg + p - 1;
            for k in 0..=new_deg {
                let mut row: Vec<A> = vec![A::default(); m];
                if k > 0 {
                    let prev = &c[(k - 1) * m..k * m];
                    for r in 0..m {
                        row[r] = prev[(r + m - e) % m].clone();
                    }
                }
                if k <= deg {
                    for r in 0..m {
                        row[r].add_assign(&old[k * m + r]);
                    }
                }
                if k >= p && k - p <= deg {
                    for r in 0..m {
                        row[r].sub_assign(&old[(k - p) * m + r]);
                    }
                }
                c[k * m..(k + 1) * m].clone_from_slice(&row);
            }
            deg = new_deg;
        }
    }
    RingTable {
        modulus: m,
        rows,
        data: c.iter().map(Accum::to_bigint).collect(),
    }
}

/// Field trace `Q(ξ_M) → Q` of `Σ_r c_r ξ^r`.
pub(crate) fn trace(c: &[BigInt], table: &[i64]) -> BigInt {
    c.iter()
        .zip(table)
        .filter(|(x, t)| !x.is_zero() && **t != 0)
        .map(|(x, &t)| x * t)
        .sum()
}

pub(crate) fn trace_table(modulus: u32) -> Vec<i64> {
    (0..modulus as u64)
        .map(|r| root_trace(r, modulus as u64))
        .collect()
}

/// Reduces `Σ_r c_r ξ^r` to power-basis coordinates modulo `Φ_M`
/// (integer arithmetic, `Φ_M` is monic).
pub(crate) fn reduce_integer(c: &[BigInt], modulus: u32) -> Vec<BigInt> {
    let phi = cyclotomic_poly(modulus);
    let deg = phi.degree().unwrap();
    let mut poly = c.to_vec();
    while poly.len() > deg {
        let top = poly.len() - 1;
        let lead = poly.pop().unwrap();
        if !lead.is_zero() {
            for (j, pj) in phi.coeffs().iter().enumerate().take(deg) {
                if !pj.is_zero() {
                    poly[top - deg + j] -= &lead * pj;
                }
            }
        }
    }
    poly.resize(deg, BigInt::zero());
    poly
}
