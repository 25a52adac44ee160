//! Dense univariate polynomials with integer coefficients, and the
//! cyclotomic polynomials built on them.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::arith::divisors;

/// Integer polynomial, `coeffs[i]` is the coefficient of `z^i`.
///
/// The highest stored coefficient is nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl From<Vec<BigInt>> for IntPoly {
    fn from(coeffs: Vec<BigInt>) -> Self {
        IntPoly::new(coeffs)
    }
}

/// Coefficients serialize as decimal strings so records stay readable and
/// exact in any JSON consumer.
impl TryFrom<Vec<String>> for IntPoly {
    type Error = String;

    fn try_from(v: Vec<String>) -> std::result::Result<Self, String> {
        parse_decimals(&v).map(IntPoly::new)
    }
}

impl From<IntPoly> for Vec<String> {
    fn from(p: IntPoly) -> Self {
        p.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

pub(crate) fn parse_decimals(v: &[String]) -> std::result::Result<Vec<BigInt>, String> {
    v.iter()
        .map(|s| s.parse::<BigInt>().map_err(|e| format!("bad integer {s:?}: {e}")))
        .collect()
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly::new(coeffs)
    }

    /// `1 - z^k`
    pub fn one_minus_power(k: usize) -> Self {
        if k == 0 {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[0] = BigInt::one();
        coeffs[k] = -BigInt::one();
        IntPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `z^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Division with remainder by a monic polynomial; exact over Z.
    pub fn divrem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        assert!(divisor.coeffs[dd].is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for j in 0..dd {
                rem[i - dd + j] -= &c * &divisor.coeffs[j];
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    /// Exact quotient by a monic divisor, or `None` if it does not divide.
    pub fn div_exact_monic(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.divrem_monic(divisor);
        r.is_zero().then_some(q)
    }

    pub fn eval_int(&self, z: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * z + c)
    }

    pub fn eval_rational(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + BigRational::from_integer(c.clone()))
    }

    /// gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Splits into `(c, p)` with `self = c * p`, `p` primitive with
    /// positive leading coefficient.
    pub fn primitive_part(&self) -> (BigInt, IntPoly) {
        if self.is_zero() {
            return (BigInt::zero(), IntPoly::zero());
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        let p = IntPoly::new(self.coeffs.iter().map(|x| x / &c).collect());
        (c, p)
    }

    /// Truncates to terms of degree `< n`.
    pub fn truncated(&self, n: usize) -> IntPoly {
        IntPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{mag}*z^{i}")?,
            }
        }
        Ok(())
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, IntPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, IntPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The `q`-th cyclotomic polynomial `Φ_q`, obtained by dividing `z^q - 1`
/// by `Φ_e` for every proper divisor `e` of `q`.
pub fn cyclotomic_poly(q: u32) -> IntPoly {
    assert!(q >= 1, "cyclotomic_poly needs q >= 1");
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&q) {
        return p.clone();
    }
    let mut p = IntPoly::one_minus_power(q as usize).neg();
    for e in divisors(q as u64) {
        if e as u32 == q {
            continue;
        }
        p = p
            .div_exact_monic(&cyclotomic_poly(e as u32))
            .expect("cyclotomic factor must divide z^q - 1");
    }
    cyclotomic_cache().lock().unwrap().insert(q, p.clone());
    p
}

/// Dense polynomial over `Q`, used internally for gcd computations.
pub(crate) mod qpoly {
    use num_rational::BigRational;
    use num_traits::Zero;

    pub fn trim(p: &mut Vec<BigRational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    pub fn sub_mul_shift(p: &mut Vec<BigRational>, c: &BigRational, q: &[BigRational], shift: usize) {
        if p.len() < q.len() + shift {
            p.resize(q.len() + shift, BigRational::zero());
        }
        for (i, x) in q.iter().enumerate() {
            p[i + shift] -= c * x;
        }
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] -= x;
        }
        trim(&mut out);
        out
    }

    /// Division with remainder over Q. `b` must be nonzero.
    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let db = b.len() - 1;
        let lead = &b[db];
        let mut rem = a.to_vec();
        trim(&mut rem);
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quot = vec![BigRational::zero(); rem.len() - db];
        while rem.len() > db {
            let top = rem.len() - 1;
            let c = &rem[top] / lead;
            sub_mul_shift(&mut rem, &c, b, top - db);
            quot[top - db] = c;
            rem.truncate(top);
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), IntPoly::from_i64(&[1, -1, 1]));
        // Φ_11 = (z^11 - 1)/(z - 1), checked by long division independently.
        let (q, r) = IntPoly::one_minus_power(11)
            .neg()
            .divrem_monic(&IntPoly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, IntPoly::from_i64(&[1; 11]));
        assert_eq!(cyclotomic_poly(11), q);
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -2, 0, 1]).to_string(), "1 - 2*z + z^3");
        assert_eq!(IntPoly::from_i64(&[0, -1]).to_string(), "-z");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn primitive_part_normalizes_sign() {
        let p = IntPoly::from_i64(&[4, 0, -6]);
        let (c, q) = p.primitive_part();
        assert_eq!(c, BigInt::from(-2));
        assert_eq!(q, IntPoly::from_i64(&[-2, 0, 3]));
    }
}
