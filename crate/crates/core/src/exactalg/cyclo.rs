//! Elements of the cyclotomic field `Q(ξ_N)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::arith::{gcd, totient};
use super::poly::{cyclotomic_poly, qpoly, IntPoly};
use crate::error::{Error, Result};

/// Hard cap on conductors.
pub const MAX_CONDUCTOR: u32 = 10_000;

/// An element of `Q(ξ_N)` in the power basis `1, ξ, ..., ξ^{φ(N)-1}`.
///
/// Coordinates are always reduced modulo `Φ_N`, so two elements of the same
/// conductor are equal exactly when their coordinates are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloElem {
    conductor: u32,
    coords: Vec<BigRational>,
}

fn reduce(conductor: u32, mut poly: Vec<BigRational>) -> Vec<BigRational> {
    let phi = cyclotomic_poly(conductor);
    let deg = phi.degree().unwrap();
    let phi_q: Vec<BigRational> = phi
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    while poly.len() > deg {
        let top = poly.len() - 1;
        let c = poly.pop().unwrap();
        if !c.is_zero() {
            for j in 0..deg {
                poly[top - deg + j] -= &c * &phi_q[j];
            }
        }
    }
    poly.resize(deg, BigRational::zero());
    poly
}

fn check_conductor(n: u32) -> Result<()> {
    if n == 0 || n > MAX_CONDUCTOR {
        return Err(Error::ConductorTooLarge(n as u64));
    }
    Ok(())
}

impl CycloElem {
    pub fn zero(conductor: u32) -> Self {
        let deg = totient(conductor as u64) as usize;
        CycloElem {
            conductor,
            coords: vec![BigRational::zero(); deg],
        }
    }

    pub fn from_rational(conductor: u32, r: BigRational) -> Self {
        let mut e = CycloElem::zero(conductor);
        e.coords[0] = r;
        e
    }

    pub fn one(conductor: u32) -> Self {
        CycloElem::from_rational(conductor, BigRational::one())
    }

    pub fn from_int(conductor: u32, n: i64) -> Self {
        CycloElem::from_rational(conductor, BigRational::from_integer(BigInt::from(n)))
    }

    /// `ξ_N^e` for any integer exponent.
    pub fn root_power(conductor: u32, e: i64) -> Self {
        let r = e.rem_euclid(conductor as i64) as usize;
        let mut poly = vec![BigRational::zero(); r + 1];
        poly[r] = BigRational::one();
        CycloElem {
            conductor,
            coords: reduce(conductor, poly),
        }
    }

    /// Builds an element from arbitrary polynomial coordinates in `ξ_N`,
    /// reducing them modulo `Φ_N`.
    pub fn from_poly(conductor: u32, poly: Vec<BigRational>) -> Result<Self> {
        check_conductor(conductor)?;
        Ok(CycloElem {
            conductor,
            coords: reduce(conductor, poly),
        })
    }

    /// Element `Σ_j c_j ξ_N^j` from group-ring coordinates (`c.len() == N`).
    pub fn from_group_ring(conductor: u32, c: &[BigInt]) -> Self {
        let poly = c
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        CycloElem {
            conductor,
            coords: reduce(conductor, poly),
        }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }

    fn same_field(&self, other: &CycloElem) -> (CycloElem, CycloElem) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = super::arith::lcm(self.conductor as u64, other.conductor as u64) as u32;
        (
            self.embed(m).expect("lcm is a multiple"),
            other.embed(m).expect("lcm is a multiple"),
        )
    }

    pub fn add(&self, other: &CycloElem) -> CycloElem {
        let (a, b) = self.same_field(other);
        CycloElem {
            conductor: a.conductor,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &CycloElem) -> CycloElem {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CycloElem {
        CycloElem {
            conductor: self.conductor,
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, r: &BigRational) -> CycloElem {
        CycloElem {
            conductor: self.conductor,
            coords: self.coords.iter().map(|x| x * r).collect(),
        }
    }

    pub fn mul(&self, other: &CycloElem) -> CycloElem {
        let (a, b) = self.same_field(other);
        let prod = qpoly::mul(&a.coords, &b.coords);
        CycloElem {
            conductor: a.conductor,
            coords: reduce(a.conductor, prod),
        }
    }

    pub fn pow(&self, e: u32) -> CycloElem {
        let mut acc = CycloElem::one(self.conductor);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Φ_N` over `Q`.
    pub fn inv(&self) -> Result<CycloElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi: Vec<BigRational> = cyclotomic_poly(self.conductor)
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut a = self.coords.clone();
        qpoly::trim(&mut a);
        // Invariant: s * self ≡ r (mod Φ_N).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1): (Vec<BigRational>, Vec<BigRational>) =
            (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = qpoly::divrem(&r0, &r1);
            let s = qpoly::sub(&s0, &qpoly::mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        // r0 is a nonzero constant since Φ_N is irreducible.
        if r0.len() != 1 {
            return Err(Error::InternalInconsistency(
                "cyclotomic polynomial shares a factor with a field element".into(),
            ));
        }
        let c = r0[0].clone();
        let inv: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        Ok(CycloElem {
            conductor: self.conductor,
            coords: reduce(self.conductor, inv),
        })
    }

    pub fn div(&self, other: &CycloElem) -> Result<CycloElem> {
        Ok(self.mul(&other.inv()?))
    }

    /// Embeds into `Q(ξ_M)` via `ξ_N ↦ ξ_M^{M/N}`.
    pub fn embed(&self, target: u32) -> Result<CycloElem> {
        check_conductor(target)?;
        if target % self.conductor != 0 {
            return Err(Error::ConductorMismatch {
                from: self.conductor,
                to: target,
            });
        }
        let step = (target / self.conductor) as usize;
        let mut poly = vec![BigRational::zero(); step * self.coords.len().max(1)];
        for (i, c) in self.coords.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Ok(CycloElem {
            conductor: target,
            coords: reduce(target, poly),
        })
    }

    /// The automorphism `ξ_N ↦ ξ_N^j` for `j` prime to `N`.
    pub fn galois(&self, j: i64) -> CycloElem {
        let n = self.conductor as i64;
        let jj = j.rem_euclid(n);
        assert_eq!(gcd(jj as u64, n as u64), 1, "galois exponent must be a unit");
        let mut poly = vec![BigRational::zero(); n as usize];
        for (i, c) in self.coords.iter().enumerate() {
            let e = (i as i64 * jj).rem_euclid(n) as usize;
            poly[e] += c;
        }
        CycloElem {
            conductor: self.conductor,
            coords: reduce(self.conductor, poly),
        }
    }

    /// Complex conjugation.
    pub fn conj(&self) -> CycloElem {
        self.galois(-1)
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Floating-point value, for display only.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        let n = self.conductor as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coords.iter().enumerate() {
            let x = rational_to_f64(c);
            let th = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += x * th.cos();
            im += x * th.sin();
        }
        (re, im)
    }

    /// Evaluates an integer polynomial at this element.
    pub fn eval_poly(&self, p: &IntPoly) -> CycloElem {
        let mut acc = CycloElem::zero(self.conductor);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&CycloElem::from_rational(
                self.conductor,
                BigRational::from_integer(c.clone()),
            ));
        }
        acc
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for CycloElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})*ξ{}^{i}", self.conductor)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
