//! Exact sign determination for real elements of `Q(ξ_N)`.
//!
//! A quick floating-point evaluation with a conservative error bound settles
//! almost every case. Otherwise the value is enclosed in rational intervals
//! of doubling precision until the enclosure excludes zero; exact zero is
//! detected up front, so the refinement always terminates.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::cyclo::{rational_to_f64, CycloElem};

#[derive(Clone, Debug)]
struct Interval {
    lo: BigRational,
    hi: BigRational,
}

impl Interval {
    fn point(x: BigRational) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    fn widen(&self, eps: &BigRational) -> Interval {
        Interval {
            lo: &self.lo - eps,
            hi: &self.hi + eps,
        }
    }

    /// Rounds outward to dyadic endpoints with `bits` fractional bits.
    fn round(&self, bits: u32) -> Interval {
        let scale = BigInt::one() << bits;
        let down = |x: &BigRational| {
            BigRational::new((x * BigRational::from_integer(scale.clone())).floor().to_integer(), scale.clone())
        };
        let up = |x: &BigRational| {
            BigRational::new((x * BigRational::from_integer(scale.clone())).ceil().to_integer(), scale.clone())
        };
        Interval {
            lo: down(&self.lo),
            hi: up(&self.hi),
        }
    }
}

fn pow2_inv(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// atan(1/x) enclosed to within 2^-bits.
fn atan_inv(x: u64, bits: u32) -> Interval {
    let x2 = BigRational::from_integer(BigInt::from(x * x));
    let mut term = BigRational::new(BigInt::one(), BigInt::from(x));
    let mut sum = BigRational::zero();
    let eps = pow2_inv(bits);
    let mut k = 0u64;
    loop {
        let t = &term / BigRational::from_integer(BigInt::from(2 * k + 1));
        if t < eps {
            // Alternating series: the tail is bounded by the first omitted term.
            return Interval::point(sum).widen(&t);
        }
        if k % 2 == 0 {
            sum += &t;
        } else {
            sum -= &t;
        }
        term /= &x2;
        k += 1;
    }
}

fn pi_interval(bits: u32) -> Interval {
    let a = atan_inv(5, bits + 6);
    let b = atan_inv(239, bits + 6);
    let sixteen = Interval::point(BigRational::from_integer(16.into()));
    let minus_four = Interval::point(BigRational::from_integer((-4).into()));
    sixteen.mul(&a).add(&minus_four.mul(&b))
}

/// Encloses cos(θ) and sin(θ) for θ in the interval, |θ| ≤ 7.
fn cos_sin(theta: &Interval, bits: u32) -> (Interval, Interval) {
    let eps = pow2_inv(bits);
    let mut cos = Interval::point(BigRational::zero());
    let mut sin = Interval::point(BigRational::zero());
    let mut power = Interval::point(BigRational::one());
    let mut fact = BigInt::one();
    let mag = theta.lo.abs().max(theta.hi.abs());
    let mut n: u64 = 0;
    loop {
        let term = Interval {
            lo: &power.lo / BigRational::from_integer(fact.clone()),
            hi: &power.hi / BigRational::from_integer(fact.clone()),
        };
        let sign = if (n / 2) % 2 == 0 {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let signed = Interval::point(sign).mul(&term);
        if n % 2 == 0 {
            cos = cos.add(&signed);
        } else {
            sin = sin.add(&signed);
        }
        n += 1;
        power = power.mul(theta).round(bits + 16);
        fact *= BigInt::from(n);
        // Lagrange remainder |θ|^n / n! bounds both tails once n > |θ|.
        let rem = num_traits::pow(mag.clone(), n as usize) / BigRational::from_integer(fact.clone());
        if BigRational::from_integer(BigInt::from(n)) > mag && rem < eps {
            return (cos.widen(&rem), sin.widen(&rem));
        }
    }
}

fn enclose_real_part(x: &CycloElem, bits: u32) -> Interval {
    let n = x.conductor();
    let pi = pi_interval(bits + 8);
    let mut acc = Interval::point(BigRational::zero());
    for (i, c) in x.coords().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let frac = Interval::point(BigRational::new(BigInt::from(2 * i as u64), BigInt::from(n)));
        let theta = frac.mul(&pi);
        let (cos, _) = cos_sin(&theta, bits + 8);
        acc = acc.add(&Interval::point(c.clone()).mul(&cos)).round(bits + 8);
    }
    acc
}

/// Sign of a real element. Panics if the element is not real.
pub fn real_sign(x: &CycloElem) -> Ordering {
    assert!(x.is_real(), "real_sign needs a real element");
    if x.is_zero() {
        return Ordering::Equal;
    }
    let (re, _) = x.to_complex_f64();
    let scale: f64 = x.coords().iter().map(|c| rational_to_f64(c).abs()).sum();
    if re.is_finite() && scale.is_finite() && re.abs() > scale * 1e-9 {
        return if re > 0.0 { Ordering::Greater } else { Ordering::Less };
    }
    let mut bits = 64;
    loop {
        let iv = enclose_real_part(x, bits);
        if iv.lo.is_positive() {
            return Ordering::Greater;
        }
        if iv.hi.is_negative() {
            return Ordering::Less;
        }
        bits *= 2;
    }
}

/// Exact comparison of two real cyclotomic numbers.
pub fn real_cmp(a: &CycloElem, b: &CycloElem) -> Ordering {
    real_sign(&a.sub(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_enclosure() {
        let iv = pi_interval(60);
        let lo = rational_to_f64(&iv.lo);
        let hi = rational_to_f64(&iv.hi);
        assert!(lo <= std::f64::consts::PI && std::f64::consts::PI <= hi);
        assert!(hi - lo < 1e-15);
    }

    #[test]
    fn refined_path_agrees_with_float() {
        // 2cos(2π/7) - 1.2469796 ≈ 3.7e-8; the float path is bypassed by
        // calling the enclosure directly.
        let x = CycloElem::root_power(7, 1).add(&CycloElem::root_power(7, 6));
        let c = BigRational::new(BigInt::from(12469796), BigInt::from(10_000_000));
        let d = x.sub(&CycloElem::from_rational(7, c));
        let iv = enclose_real_part(&d, 64);
        assert!(iv.lo.is_positive());
        assert_eq!(real_sign(&d), Ordering::Greater);
    }

    #[test]
    fn ordering_of_known_values() {
        // 2 - 2cos(2π/7) < 2 - 2cos(4π/7) < 2 - 2cos(6π/7)
        let r = |s: i64| {
            CycloElem::from_int(7, 2)
                .sub(&CycloElem::root_power(7, s))
                .sub(&CycloElem::root_power(7, -s))
        };
        assert_eq!(real_cmp(&r(1), &r(2)), Ordering::Less);
        assert_eq!(real_cmp(&r(3), &r(2)), Ordering::Greater);
        assert_eq!(real_cmp(&r(3), &r(3)), Ordering::Equal);
    }
}
