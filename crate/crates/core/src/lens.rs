//! Lens spaces and lens orbifolds as parameter data.
//!
//! `L_d(q; s_1, ..., s_n)` is `S^d` modulo the cyclic group generated by the
//! block rotation with angles `2π s_j / q` (plus a fixed axis when `d` is
//! even). Residues are stored as representatives in `{0, ..., floor(q/2)}`,
//! which already absorbs the sign freedom of the isometry classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::arith::{fold_residue, gcd, totient, units};

/// Validated lens orbifold parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LensParams {
    d: u32,
    q: u32,
    s: Vec<u32>,
    space_form: bool,
}

/// A lens orbifold whose parameters are the canonical representative of
/// its isometry class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalLens {
    d: u32,
    q: u32,
    s: Vec<u32>,
}

/// `n = floor((d+1)/2)`, the number of rotation blocks.
pub fn blocks(d: u32) -> usize {
    (d as usize + 1) / 2
}

/// Residues in `[1, q/2)` prime to `q`, in increasing order (`1` first).
pub fn unit_base(q: u32) -> Vec<u32> {
    (1..q)
        .filter(|&s| 2 * s < q && gcd(s as u64, q as u64) == 1)
        .collect()
}

impl LensParams {
    /// Checks `|s| = floor((d+1)/2)` and `gcd(q, s_1, ..., s_n) = 1`, folds
    /// residues into `{0, ..., floor(q/2)}`.
    pub fn validate(d: u32, q: u32, s: &[i64]) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if q == 0 {
            return Err(Error::InvalidParameter("order q must be positive".into()));
        }
        let n = blocks(d);
        if s.len() != n {
            return Err(Error::LengthMismatch {
                d,
                expected: n,
                got: s.len(),
            });
        }
        let folded: Vec<u32> = s.iter().map(|&x| fold_residue(x, q as u64) as u32).collect();
        let g = folded
            .iter()
            .fold(q as u64, |acc, &x| gcd(acc, x as u64));
        if g != 1 {
            return Err(Error::GcdViolation { gcd: g });
        }
        let space_form = d % 2 == 1 && folded.iter().all(|&x| gcd(x as u64, q as u64) == 1);
        Ok(LensParams {
            d,
            q,
            s: folded,
            space_form,
        })
    }

    /// Lens space `L(q; s)` of dimension `2|s| - 1`.
    pub fn lens_space(q: u32, s: &[i64]) -> Result<Self> {
        let d = (2 * s.len()).checked_sub(1).ok_or_else(|| {
            Error::InvalidParameter("a lens space needs at least one parameter".into())
        })?;
        let l = LensParams::validate(d as u32, q, s)?;
        if !l.space_form {
            return Err(Error::NotSpaceForm(l.to_string()));
        }
        Ok(l)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn is_space_form(&self) -> bool {
        self.space_form
    }

    /// Folded image of the parameters under multiplication by `l`, sorted.
    fn image(&self, l: u64) -> Vec<u32> {
        let q = self.q as u64;
        let mut v: Vec<u32> = self
            .s
            .iter()
            .map(|&x| fold_residue(((x as u64 * l) % q) as i64, q) as u32)
            .collect();
        v.sort_unstable();
        v
    }

    /// Lexicographically least sorted parameter multiset over all units.
    pub fn canonicalize(&self) -> CanonicalLens {
        let best = units(self.q as u64)
            .into_iter()
            .map(|l| self.image(l))
            .min()
            .expect("there is always at least one unit");
        CanonicalLens {
            d: self.d,
            q: self.q,
            s: best,
        }
    }

    pub fn is_isometric(&self, other: &LensParams) -> bool {
        self.d == other.d && self.q == other.q && self.canonicalize() == other.canonicalize()
    }

    fn require_lens_space(&self) -> Result<()> {
        if !self.space_form {
            return Err(Error::NotSpaceForm(self.to_string()));
        }
        if self.q < 3 {
            return Err(Error::InvalidParameter(format!(
                "q = {} is below 3, where every lens space is unique",
                self.q
            )));
        }
        Ok(())
    }

    /// Exponents `(n_1, ..., n_{q0})` over [`unit_base`] of an isometric
    /// representative with `n_1` maximal.
    ///
    /// Among all unit multiples realizing the maximal first exponent the
    /// lexicographically largest exponent vector is returned, so the result
    /// depends only on the isometry class.
    pub fn normal_form_exponents(&self) -> Result<Vec<u32>> {
        self.require_lens_space()?;
        let base = unit_base(self.q);
        let counts = |img: &[u32]| -> Vec<u32> {
            base.iter()
                .map(|b| img.iter().filter(|&&x| x == *b).count() as u32)
                .collect()
        };
        let best = units(self.q as u64)
            .into_iter()
            .map(|l| counts(&self.image(l)))
            .max()
            .expect("there is always at least one unit");
        Ok(best)
    }

    /// Lens space with the given exponents over [`unit_base`].
    pub fn from_exponents(q: u32, exponents: &[u32]) -> Result<Self> {
        let base = unit_base(q);
        if exponents.len() != base.len() {
            return Err(Error::InvalidParameter(format!(
                "q = {q} needs {} exponents, got {}",
                base.len(),
                exponents.len()
            )));
        }
        let s: Vec<i64> = base
            .iter()
            .zip(exponents)
            .flat_map(|(&b, &e)| std::iter::repeat_n(b as i64, e as usize))
            .collect();
        LensParams::lens_space(q, &s)
    }

    /// Appends `r` copies of the full unit base, raising the dimension by
    /// `r φ(q)`.
    pub fn extend(&self, r: u32) -> Result<Self> {
        self.require_lens_space()?;
        if r == 0 {
            return Err(Error::InvalidParameter("extension count r must be positive".into()));
        }
        let base = unit_base(self.q);
        debug_assert_eq!(2 * base.len() as u64, totient(self.q as u64));
        let mut s: Vec<i64> = self.s.iter().map(|&x| x as i64).collect();
        for _ in 0..r {
            s.extend(base.iter().map(|&b| b as i64));
        }
        LensParams::lens_space(self.q, &s)
    }
}

/// Free-function form of [`LensParams::extend`].
pub fn extend_lens(l: &LensParams, r: u32) -> Result<LensParams> {
    l.extend(r)
}

impl CanonicalLens {
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn to_params(&self) -> LensParams {
        let s: Vec<i64> = self.s.iter().map(|&x| x as i64).collect();
        LensParams::validate(self.d, self.q, &s).expect("canonical forms are valid")
    }
}

fn write_lens(f: &mut fmt::Formatter<'_>, d: u32, q: u32, s: &[u32]) -> fmt::Result {
    if d % 2 == 1 {
        write!(f, "L({q};")?;
    } else {
        write!(f, "L_{d}({q};")?;
    }
    for (i, x) in s.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lens(f, self.d, self.q, &self.s)
    }
}

impl fmt::Display for CanonicalLens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_lens(f, self.d, self.q, &self.s)
    }
}
