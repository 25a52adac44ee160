//! Rational functions whose denominators are products of cyclotomic
//! polynomials, kept in a canonical reduced form.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::arith::{divisors, gcd};
use super::poly::{cyclotomic_poly, IntPoly};
use super::series::TruncSeries;
use crate::error::Result;

/// `scale · num(z) / Π_e Φ_e(z)^{den[e]}` with `num` primitive, positive
/// leading coefficient, and no `Φ_e` with positive exponent dividing `num`.
///
/// Because the `Φ_e` are irreducible and pairwise coprime, this form is
/// unique: two values are equal as functions iff they are equal as structs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    scale: BigRational,
    num: IntPoly,
    den: BTreeMap<u32, u32>,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            scale: BigRational::zero(),
            num: IntPoly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(p: &IntPoly) -> Self {
        RatFunc::new(BigRational::one(), p.clone(), BTreeMap::new())
    }

    /// Normalizing constructor.
    pub fn new(scale: BigRational, num: IntPoly, den: BTreeMap<u32, u32>) -> Self {
        if scale.is_zero() || num.is_zero() {
            return RatFunc::zero();
        }
        let (c, mut num) = num.primitive_part();
        let scale = scale * BigRational::from_integer(c);
        let mut reduced = BTreeMap::new();
        for (e, mut a) in den {
            let phi = cyclotomic_poly(e);
            while a > 0 {
                match num.div_exact_monic(&phi) {
                    Some(q) => {
                        num = q;
                        a -= 1;
                    }
                    None => break,
                }
            }
            if a > 0 {
                reduced.insert(e, a);
            }
        }
        RatFunc {
            scale,
            num,
            den: reduced,
        }
    }

    /// `scale · num / (1 - z^period)^power`.
    pub fn over_one_minus_power(scale: BigRational, num: IntPoly, period: u32, power: u32) -> Self {
        let mut den = BTreeMap::new();
        for e in divisors(period as u64) {
            den.insert(e as u32, power);
        }
        // 1 - z^P = -(z^P - 1) = -Π_{e|P} Φ_e
        let sign = if power % 2 == 1 {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        RatFunc::new(scale * sign, num, den)
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    /// Exponent of each cyclotomic factor in the reduced denominator.
    pub fn denominator(&self) -> &BTreeMap<u32, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn expand_num(&self, target: &BTreeMap<u32, u32>) -> IntPoly {
        let mut p = self.num.clone();
        for (&e, &a) in target {
            let have = self.den.get(&e).copied().unwrap_or(0);
            if a > have {
                p = p.mul(&cyclotomic_poly(e).pow(a - have));
            }
        }
        p
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut den = self.den.clone();
        for (&e, &a) in &other.den {
            let slot = den.entry(e).or_insert(0);
            *slot = (*slot).max(a);
        }
        let p1 = self.expand_num(&den);
        let p2 = other.expand_num(&den);
        let (n1, d1) = (self.scale.numer(), self.scale.denom());
        let (n2, d2) = (other.scale.numer(), other.scale.denom());
        let num = p1.scale(&(n1 * d2)).add(&p2.scale(&(n2 * d1)));
        RatFunc::new(BigRational::new(BigInt::one(), d1 * d2), num, den)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            scale: -self.scale.clone(),
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let mut den = self.den.clone();
        for (&e, &a) in &other.den {
            *den.entry(e).or_insert(0) += a;
        }
        RatFunc::new(&self.scale * &other.scale, self.num.mul(&other.num), den)
    }

    pub fn mul_scalar(&self, r: &BigRational) -> RatFunc {
        RatFunc::new(&self.scale * r, self.num.clone(), self.den.clone())
    }

    pub fn mul_poly(&self, p: &IntPoly) -> RatFunc {
        RatFunc::new(self.scale.clone(), self.num.mul(p), self.den.clone())
    }

    /// Divides by `Φ_e^a`.
    pub fn div_cyclotomic(&self, e: u32, a: u32) -> RatFunc {
        let mut den = self.den.clone();
        *den.entry(e).or_insert(0) += a;
        RatFunc::new(self.scale.clone(), self.num.clone(), den)
    }

    /// Pole order at a primitive `e`-th root of unity.
    pub fn pole_order_at_primitive(&self, e: u32) -> u32 {
        self.den.get(&e).copied().unwrap_or(0)
    }

    /// Pole order at `ξ_M^j`.
    pub fn pole_order_at(&self, j: u32, m: u32) -> u32 {
        let e = m / gcd(j as u64 % m as u64, m as u64) as u32;
        self.pole_order_at_primitive(e)
    }

    /// Leading Laurent coefficient `lim (z - z0)^a F(z)` at `z0 = 1`
    /// (`sign = 1`) or `z0 = -1` (`sign = -1`), where `a` is the pole order.
    pub fn leading_laurent_at_unit(&self, sign: i64) -> BigRational {
        assert!(sign == 1 || sign == -1);
        let z0 = BigRational::from_integer(BigInt::from(sign));
        let own = if sign == 1 { 1 } else { 2 };
        let mut value = &self.scale * self.num.eval_rational(&z0);
        for (&e, &a) in &self.den {
            if e == own {
                continue;
            }
            let v = cyclotomic_poly(e).eval_rational(&z0);
            value /= num_traits::pow(v, a as usize);
        }
        value
    }

    /// Taylor expansion at `z = 0` up to `z^order`.
    pub fn taylor(&self, order: usize) -> Result<TruncSeries> {
        let mut den = IntPoly::one();
        for (&e, &a) in &self.den {
            den = den.mul(&cyclotomic_poly(e).pow(a).truncated(order + 1));
            den = den.truncated(order + 1);
        }
        let inv = TruncSeries::from_poly(&den, order).inverse()?;
        Ok(TruncSeries::from_poly(&self.num, order)
            .mul(&inv)
            .scale(&self.scale))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if !self.scale.is_one() {
            write!(f, "({}) * ", self.scale)?;
        }
        write!(f, "({})", self.num)?;
        for (e, a) in &self.den {
            write!(f, " / Φ{e}^{a}")?;
        }
        Ok(())
    }
}

impl RatFunc {
    /// Sign of the scale; handy for tests.
    pub fn is_negative(&self) -> bool {
        self.scale.is_negative()
    }
}
