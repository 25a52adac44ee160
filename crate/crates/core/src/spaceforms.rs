//! Spherical space forms with non-cyclic fundamental group of order < 24.
//!
//! Each group `H ∈ {Q8, P12, Q16, P20}` acts on `C^{2m} = R^{4m}` through
//! `ρ_h ⊕ conj(ρ_h)`, where `ρ_h = h·a ⊕ (m-h)·b` is built from the
//! two-dimensional fixed-point-free irreducibles `a`, `b` of `H` (a single
//! one for `Q8` and `P12`). The group is generated from explicit 2×2
//! matrices over `Q(ξ_M)`, the presentation is re-checked on those
//! matrices, and only eigenvalue multisets are kept.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::arith::totient;
use crate::exactalg::{CycloElem, RatFunc};
use crate::invariants::f_k;
use crate::lens::LensParams;
use crate::molien::{fingerprint, group_from_lens, is_isospectral, GroupModel, SpectrumFingerprint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FpfGroup {
    Q8,
    P12,
    Q16,
    P20,
}

impl FpfGroup {
    pub const ALL: [FpfGroup; 4] = [FpfGroup::Q8, FpfGroup::P12, FpfGroup::Q16, FpfGroup::P20];

    pub fn order(self) -> u32 {
        match self {
            FpfGroup::Q8 => 8,
            FpfGroup::P12 => 12,
            FpfGroup::Q16 => 16,
            FpfGroup::P20 => 20,
        }
    }

    /// Conductor of the field holding all matrix entries and eigenvalues.
    pub fn conductor(self) -> u32 {
        match self {
            FpfGroup::Q8 => 4,
            FpfGroup::P12 => 12,
            FpfGroup::Q16 => 8,
            FpfGroup::P20 => 20,
        }
    }

    /// Number of inequivalent fixed-point-free irreducibles used.
    pub fn irreps(self) -> usize {
        match self {
            FpfGroup::Q8 | FpfGroup::P12 => 1,
            FpfGroup::Q16 | FpfGroup::P20 => 2,
        }
    }

    /// Element order `k` whose partial sum `F^(k)` separates the `ρ_h`.
    pub fn probe_order(self) -> Option<u32> {
        match self {
            FpfGroup::Q16 => Some(8),
            FpfGroup::P20 => Some(10),
            _ => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            FpfGroup::Q8 => "Q8",
            FpfGroup::P12 => "P12",
            FpfGroup::Q16 => "Q16",
            FpfGroup::P20 => "P20",
        }
    }
}

impl fmt::Display for FpfGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FpfGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FpfGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown group {s:?}")))
    }
}

/// One isometry class `S^{4m-1}/(ρ_h ⊕ conj ρ_h)(H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpfGroupSpec {
    group: FpfGroup,
    m: u32,
    h: u32,
}

impl FpfGroupSpec {
    /// Requires `m ≥ 1`, `h ≤ floor(m/2)`, and `h = 0` for `Q8` and `P12`.
    pub fn new(group: FpfGroup, m: u32, h: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        if group.irreps() == 1 && h != 0 {
            return Err(Error::InvalidParameter(format!("{group} has a single class, h must be 0")));
        }
        if h > m / 2 {
            return Err(Error::InvalidParameter(format!("h = {h} exceeds floor(m/2) = {}", m / 2)));
        }
        Ok(FpfGroupSpec { group, m, h })
    }

    pub fn group(&self) -> FpfGroup {
        self.group
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn dim(&self) -> u32 {
        4 * self.m - 1
    }

    /// All classes of dimension `4m - 1` for this group.
    pub fn classes(group: FpfGroup, m: u32) -> Result<Vec<FpfGroupSpec>> {
        let top = if group.irreps() == 1 { 0 } else { m / 2 };
        (0..=top).map(|h| FpfGroupSpec::new(group, m, h)).collect()
    }
}

impl fmt::Display for FpfGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "spaceform:{}:m={}:h={}", self.group, self.m, self.h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mat2([CycloElem; 4]);

impl Mat2 {
    fn diag(c: u32, a: i64, b: i64) -> Self {
        let z = CycloElem::zero(c);
        Mat2([CycloElem::root_power(c, a), z.clone(), z, CycloElem::root_power(c, b)])
    }

    fn identity(c: u32) -> Self {
        Mat2::diag(c, 0, 0)
    }

    /// `[[0, 1], [-1, 0]]`.
    fn turn(c: u32) -> Self {
        let z = CycloElem::zero(c);
        Mat2([z.clone(), CycloElem::one(c), CycloElem::from_int(c, -1), z])
    }

    fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2([
            a.mul(e).add(&b.mul(g)),
            a.mul(f).add(&b.mul(h)),
            c.mul(e).add(&d.mul(g)),
            c.mul(f).add(&d.mul(h)),
        ])
    }

    fn pow(&self, k: u32) -> Mat2 {
        let mut acc = Mat2::identity(self.0[0].conductor());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn neg(&self) -> Mat2 {
        Mat2(self.0.clone().map(|x| x.neg()))
    }

    fn trace(&self) -> CycloElem {
        self.0[0].add(&self.0[3])
    }

    fn det(&self) -> CycloElem {
        self.0[0].mul(&self.0[3]).sub(&self.0[1].mul(&self.0[2]))
    }

    fn inv(&self) -> Result<Mat2> {
        let di = self.det().inv()?;
        let [a, b, c, d] = &self.0;
        Ok(Mat2([d.mul(&di), b.neg().mul(&di), c.neg().mul(&di), a.mul(&di)]))
    }

    /// Eigenvalue exponents `(e1, e2)` of `ξ_M`, from the characteristic
    /// polynomial.
    fn eigen_exponents(&self) -> Result<(i64, i64)> {
        let c = self.0[0].conductor();
        let m = c as i64;
        let (tr, det) = (self.trace(), self.det());
        let t = (0..m)
            .find(|&t| CycloElem::root_power(c, t) == det)
            .ok_or_else(|| Error::RelationCheckFailed("determinant is not a root of unity".into()))?;
        (0..m)
            .find(|&e| CycloElem::root_power(c, e).add(&CycloElem::root_power(c, t - e)) == tr)
            .map(|e| (e, (t - e).rem_euclid(m)))
            .ok_or_else(|| Error::RelationCheckFailed("eigenvalues are not roots of unity".into()))
    }
}

/// Generator images `(x, y)` in one irreducible. The second generator is
/// the antidiagonal turn in every case; the presentations are
///
/// * `Q8  = ⟨B, R | B⁴ = e, R² = B², RBR⁻¹ = B³⟩`
/// * `Q16 = ⟨B, R | B⁸ = e, R² = B⁴, RBR⁻¹ = B⁷⟩`
/// * `P12 = ⟨A, B | A³ = B⁴ = e, BAB⁻¹ = A²⟩`
/// * `P20 = ⟨A, B | A⁵ = B⁴ = e, BAB⁻¹ = A⁴⟩`
fn generators(group: FpfGroup, irrep: usize) -> (Mat2, Mat2) {
    let c = group.conductor();
    let x = match (group, irrep) {
        (FpfGroup::Q8, _) => Mat2::diag(c, 1, -1),
        (FpfGroup::Q16, 0) => Mat2::diag(c, 1, -1),
        (FpfGroup::Q16, _) => Mat2::diag(c, 3, -3),
        (FpfGroup::P12, _) => Mat2::diag(c, 4, -4),
        (FpfGroup::P20, 0) => Mat2::diag(c, 4, -4),
        (FpfGroup::P20, _) => Mat2::diag(c, 8, -8),
    };
    (x, Mat2::turn(c))
}

fn check_relations(group: FpfGroup, x: &Mat2, y: &Mat2) -> Result<()> {
    let c = group.conductor();
    let id = Mat2::identity(c);
    let conj = y.mul(x).mul(&y.inv()?);
    let checks: Vec<(&str, bool)> = match group {
        FpfGroup::Q8 => vec![
            ("B^4 = e", x.pow(4) == id),
            ("R^2 = B^2", y.pow(2) == x.pow(2)),
            ("RBR^-1 = B^3", conj == x.pow(3)),
        ],
        FpfGroup::Q16 => vec![
            ("B^8 = e", x.pow(8) == id),
            ("R^2 = B^4", y.pow(2) == x.pow(4)),
            ("RBR^-1 = B^7", conj == x.pow(7)),
        ],
        FpfGroup::P12 => vec![
            ("A^3 = e", x.pow(3) == id),
            ("B^4 = e", y.pow(4) == id),
            ("B^2 = -Id", y.pow(2) == id.neg()),
            ("BAB^-1 = A^2", conj == x.pow(2)),
        ],
        FpfGroup::P20 => vec![
            ("A^5 = e", x.pow(5) == id),
            ("B^4 = e", y.pow(4) == id),
            ("B^2 = -Id", y.pow(2) == id.neg()),
            ("BAB^-1 = A^4", conj == x.pow(4)),
        ],
    };
    match checks.into_iter().find(|&(_, ok)| !ok) {
        Some((rel, _)) => Err(Error::RelationCheckFailed(format!("{group}: {rel}"))),
        None => Ok(()),
    }
}

/// Closes the generators of all irreducibles simultaneously: each group
/// element is the tuple of its images.
fn close(group: FpfGroup) -> Result<Vec<Vec<Mat2>>> {
    let k = group.irreps();
    let gens: Vec<(Mat2, Mat2)> = (0..k).map(|i| generators(group, i)).collect();
    for (x, y) in &gens {
        check_relations(group, x, y)?;
    }
    let id = vec![Mat2::identity(group.conductor()); k];
    let mut elems = vec![id];
    let mut frontier = 0;
    while frontier < elems.len() {
        let g = elems[frontier].clone();
        frontier += 1;
        for pick in 0..2 {
            let next: Vec<Mat2> = g
                .iter()
                .zip(&gens)
                .map(|(m, (x, y))| m.mul(if pick == 0 { x } else { y }))
                .collect();
            if !elems.contains(&next) {
                elems.push(next);
            }
            if elems.len() > group.order() as usize {
                return Err(Error::RelationCheckFailed(format!(
                    "{group}: generated group exceeds order {}",
                    group.order()
                )));
            }
        }
    }
    if elems.len() != group.order() as usize {
        return Err(Error::RelationCheckFailed(format!(
            "{group}: generated {} elements, expected {}",
            elems.len(),
            group.order()
        )));
    }
    Ok(elems)
}

/// Roster of `(h·a ⊕ (m-h)·b) ⊕ conj` for any `0 ≤ h ≤ m`; the range is not
/// reduced by the `h ↔ m - h` symmetry. For single-irreducible groups `h`
/// must be 0.
pub fn representation_roster(group: FpfGroup, m: u32, h: u32) -> Result<GroupModel> {
    if m == 0 || h > m || (group.irreps() == 1 && h != 0) {
        return Err(Error::InvalidParameter(format!("bad multiplicities m = {m}, h = {h}")));
    }
    let weights: Vec<u32> = if group.irreps() == 1 { vec![m] } else { vec![h, m - h] };
    let mut roster = Vec::new();
    for tuple in close(group)? {
        let mut eig: Vec<(i64, u32)> = Vec::with_capacity(4);
        let mut identity = true;
        for (mat, &w) in tuple.iter().zip(&weights) {
            let (e1, e2) = mat.eigen_exponents()?;
            identity &= e1 == 0 && e2 == 0;
            for e in [e1, e2] {
                eig.push((e, w));
                eig.push((-e, w));
            }
        }
        if !identity && eig.iter().any(|&(e, w)| e == 0 && w > 0) {
            return Err(Error::RelationCheckFailed(format!(
                "{group}: non-identity element fixes a vector"
            )));
        }
        roster.push(eig);
    }
    GroupModel::new(group.conductor(), 4 * m, roster)
        .map_err(|e| Error::RelationCheckFailed(e.to_string()))
}

pub fn roster(spec: &FpfGroupSpec) -> Result<GroupModel> {
    representation_roster(spec.group, spec.m, spec.h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrataClass {
    pub h: u32,
    /// Pole order of `F^(k)` at `ξ_k` for the probe order `k`.
    pub pole_order: Option<u32>,
    pub expected_pole_order: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrataReport {
    pub group: FpfGroup,
    pub m: u32,
    pub d: u32,
    pub probe_order: Option<u32>,
    pub classes: Vec<ErrataClass>,
    /// Every pair of classes has different spectra.
    pub pairwise_distinct: bool,
    pub poles_match: bool,
}

impl ErrataReport {
    pub fn passed(&self) -> bool {
        self.pairwise_distinct && self.poles_match
    }
}

/// For `h = 0..=floor(m/2)`: fingerprints must be pairwise distinct and
/// `F^(k)` (`k = 8` for `Q16`, `10` for `P20`) must have a pole of order
/// `2(m - h)` at `ξ_k`.
pub fn verify_errata_lemma(group: FpfGroup, m: u32) -> Result<ErrataReport> {
    let specs = FpfGroupSpec::classes(group, m)?;
    let mut prints: Vec<SpectrumFingerprint> = Vec::with_capacity(specs.len());
    let mut classes = Vec::with_capacity(specs.len());
    for spec in &specs {
        let g = roster(spec)?;
        prints.push(fingerprint(&g)?);
        let pole_order = match group.probe_order() {
            Some(k) => Some(f_k(&g, k)?.pole_order_at_primitive(k)),
            None => None,
        };
        classes.push(ErrataClass {
            h: spec.h,
            pole_order,
            expected_pole_order: group.probe_order().map(|_| 2 * (m - spec.h)),
        });
    }
    let mut pairwise_distinct = true;
    for i in 0..prints.len() {
        for j in i + 1..prints.len() {
            if is_isospectral(&prints[i], &prints[j])? {
                pairwise_distinct = false;
            }
        }
    }
    let poles_match = classes.iter().all(|c| c.pole_order == c.expected_pole_order);
    Ok(ErrataReport {
        group,
        m,
        d: 4 * m - 1,
        probe_order: group.probe_order(),
        classes,
        pairwise_distinct,
        poles_match,
    })
}

/// Checks `F^(k)` of the extension by `r` full unit bases against
/// `F^(k)_L / Φ_k^{2 q_0 r / φ(k)}` with `q_0 = φ(q)/2`.
pub fn fk_divisor_identity(l: &LensParams, r: u32, k: u32) -> Result<bool> {
    let q = l.q();
    if k == 0 || q % k != 0 {
        return Err(Error::NonDivisor { k, q });
    }
    let ext = l.extend(r)?;
    let phi_q = totient(q as u64) as u32;
    let phi_k = totient(k as u64) as u32;
    let exponent = phi_q * r / phi_k;
    if exponent * phi_k != phi_q * r {
        return Err(Error::InternalInconsistency("φ(k) does not divide r φ(q)".into()));
    }
    let lhs = f_k(&group_from_lens(&ext), k)?;
    let rhs = f_k(&group_from_lens(l), k)?.div_cyclotomic(k, exponent);
    Ok(lhs == rhs)
}

/// `F^(k)` with the `(1 - z²)/|Γ|` normalization, as a convenience for
/// reports that compare against closed forms with that factor.
pub fn normalized_f_k(g: &GroupModel, k: u32) -> Result<RatFunc> {
    let f = f_k(g, k)?;
    let scale = BigRational::new(One::one(), g.order().into());
    let one_minus_z2 = crate::exactalg::IntPoly::from_i64(&[1, 0, -1]);
    Ok(f.mul_poly(&one_minus_z2).mul_scalar(&scale))
}
