//! Spectrum generating functions via the Molien formula.
//!
//! For a finite `Γ ⊂ O(d+1)`,
//!
//! ```text
//! F_Γ(z) = Σ_k dim H_k^Γ z^k = (1 - z²)/|Γ| · Σ_γ 1/det(I - zγ).
//! ```
//!
//! Groups are given by eigenvalue rosters only. [`fingerprint`] evaluates
//! the sum twice: once as a truncated series in the group ring `Z[C_M]`
//! reduced modulo `Φ_M`, once as the exact numerator polynomial
//! `Σ_γ Π_λ (1 - z^N)/(1 - λz)` assembled from field traces over Galois
//! orbits. The two must agree coefficient by coefficient.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::arith::{lcm, root_order, totient, units};
use crate::exactalg::groupring::{inverse_det_series, reduce_integer, trace, trace_table, window_product};
use crate::exactalg::{IntPoly, RatFunc, MAX_CONDUCTOR};
use crate::lens::LensParams;

/// Eigenvalue multiset: sorted `(exponent mod M, multiplicity)` pairs with
/// positive multiplicities, standing for `ξ_M^exponent`.
pub type Eigen = Vec<(u32, u32)>;

/// Finite subgroup of `O(d+1)` given by the eigenvalues of its elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupModel {
    conductor: u32,
    ambient: u32,
    elements: Vec<Eigen>,
    orders: Vec<u32>,
}

fn normalize_eigen(conductor: u32, raw: impl IntoIterator<Item = (i64, u32)>) -> Eigen {
    let mut map: BTreeMap<u32, u32> = BTreeMap::new();
    for (e, m) in raw {
        if m > 0 {
            *map.entry(e.rem_euclid(conductor as i64) as u32).or_insert(0) += m;
        }
    }
    map.into_iter().collect()
}

fn scale_eigen(s: &Eigen, j: u64, conductor: u32) -> Eigen {
    normalize_eigen(
        conductor,
        s.iter().map(|&(e, m)| ((e as u64 * j % conductor as u64) as i64, m)),
    )
}

fn eigen_order(s: &Eigen, conductor: u32) -> u32 {
    s.iter()
        .fold(1u64, |acc, &(e, _)| lcm(acc, root_order(e as u64, conductor as u64))) as u32
}

impl GroupModel {
    /// Validates a roster. Each entry maps exponents of `ξ_M` (any integer,
    /// reduced mod `M`) to multiplicities.
    ///
    /// Checks: every element has `ambient` eigenvalues, spectra are closed
    /// under conjugation, exactly one element is the identity, element
    /// orders divide `|Γ|`, powers of elements appear in the roster, and
    /// the roster is stable under `ξ_M ↦ ξ_M^j` for units `j`.
    pub fn new(conductor: u32, ambient: u32, elements: Vec<Vec<(i64, u32)>>) -> Result<Self> {
        if conductor == 0 || ambient == 0 || elements.is_empty() {
            return Err(Error::InvalidGroup("empty group data".into()));
        }
        if conductor > MAX_CONDUCTOR {
            return Err(Error::ConductorTooLarge(conductor as u64));
        }
        let elements: Vec<Eigen> = elements
            .into_iter()
            .map(|raw| normalize_eigen(conductor, raw))
            .collect();
        let n = elements.len() as u32;
        let mut orders = Vec::with_capacity(elements.len());
        let mut counts: HashMap<&Eigen, u32> = HashMap::new();
        for s in &elements {
            let total: u32 = s.iter().map(|&(_, m)| m).sum();
            if total != ambient {
                return Err(Error::InvalidGroup(format!(
                    "element has {total} eigenvalues, expected {ambient}"
                )));
            }
            for &(e, m) in s {
                let conj = (conductor - e) % conductor;
                let mc = s.iter().find(|&&(f, _)| f == conj).map_or(0, |&(_, m)| m);
                if mc != m {
                    return Err(Error::InvalidGroup(
                        "eigenvalues are not closed under conjugation".into(),
                    ));
                }
            }
            let ord = eigen_order(s, conductor);
            if n % ord != 0 {
                return Err(Error::InvalidGroup(format!(
                    "element of order {ord} in a group of order {n}"
                )));
            }
            orders.push(ord);
            *counts.entry(s).or_insert(0) += 1;
        }
        let identity: Eigen = vec![(0, ambient)];
        if counts.get(&identity) != Some(&1) {
            return Err(Error::InvalidGroup(
                "roster must contain the identity exactly once".into(),
            ));
        }
        for s in counts.keys() {
            let ord = eigen_order(s, conductor) as u64;
            for k in 2..ord {
                if !counts.contains_key(&scale_eigen(s, k, conductor)) {
                    return Err(Error::InvalidGroup("roster is not closed under powers".into()));
                }
            }
            for j in units(conductor as u64) {
                let img = scale_eigen(s, j, conductor);
                if counts.get(&img) != counts.get(*s) {
                    return Err(Error::InvalidGroup(
                        "roster is not stable under Galois conjugation".into(),
                    ));
                }
            }
        }
        Ok(GroupModel {
            conductor,
            ambient,
            elements,
            orders,
        })
    }

    pub fn order(&self) -> u32 {
        self.elements.len() as u32
    }

    /// `d` for `Γ ⊂ O(d+1)`.
    pub fn dim(&self) -> u32 {
        self.ambient - 1
    }

    pub fn ambient(&self) -> u32 {
        self.ambient
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn elements(&self) -> &[Eigen] {
        &self.elements
    }

    pub fn element_orders(&self) -> &[u32] {
        &self.orders
    }

    /// Distinct eigenvalue multisets with their counts, optionally
    /// restricted to elements of one order.
    pub(crate) fn distinct(&self, only_order: Option<u32>) -> BTreeMap<Eigen, u32> {
        let mut map = BTreeMap::new();
        for (s, &o) in self.elements.iter().zip(&self.orders) {
            if only_order.is_none_or(|k| k == o) {
                *map.entry(s.clone()).or_insert(0) += 1;
            }
        }
        map
    }

    /// Galois orbits of the distinct multisets: canonical representative
    /// mapped to the number of group elements in the orbit.
    pub(crate) fn galois_orbits(&self, only_order: Option<u32>) -> BTreeMap<Eigen, u32> {
        let m = self.conductor;
        let us = units(m as u64);
        let mut orbits = BTreeMap::new();
        for (s, c) in self.distinct(only_order) {
            let rep = us
                .iter()
                .map(|&j| scale_eigen(&s, j, m))
                .min()
                .expect("units are nonempty");
            *orbits.entry(rep).or_insert(0) += c;
        }
        orbits
    }

    /// Dump of the roster: `(order, eigenvalues)` per element.
    pub fn roster_lines(&self) -> Vec<String> {
        self.elements
            .iter()
            .zip(&self.orders)
            .map(|(s, o)| {
                let parts: Vec<String> = s
                    .iter()
                    .map(|&(e, mult)| format!("{e}/{}:{mult}", self.conductor))
                    .collect();
                format!("order {o}: {}", parts.join(" "))
            })
            .collect()
    }
}

/// Roster of the cyclic group of a lens orbifold: the `k`-th power of the
/// generator has eigenvalues `ξ_q^{±k s_j}`, plus `1` when `d` is even.
pub fn group_from_lens(l: &LensParams) -> GroupModel {
    let q = l.q();
    let elements = (0..q as i64)
        .map(|k| {
            let mut v: Vec<(i64, u32)> = Vec::with_capacity(2 * l.n() + 1);
            for &s in l.s() {
                v.push((k * s as i64, 1));
                v.push((-k * s as i64, 1));
            }
            if l.d() % 2 == 0 {
                v.push((0, 1));
            }
            v
        })
        .collect();
    GroupModel::new(q, l.d() + 1, elements).expect("lens rosters are valid groups")
}

/// `N(d+1) + 2`, enough terms to decide equality of two generating
/// functions with the same `d` and `N`.
pub fn default_truncation(order: u32, dim: u32) -> usize {
    order as usize * (dim as usize + 1) + 2
}

/// Exact spectral data of `S^d/Γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumFingerprint {
    pub d: u32,
    #[serde(rename = "N")]
    pub order: u32,
    #[serde(rename = "K")]
    pub trunc: usize,
    /// `dim H_k^Γ` for `k = 0..=K`.
    #[serde(with = "crate::exactalg::decimal")]
    pub coeffs: Vec<BigInt>,
    /// `N · F_Γ(z) · (1 - z^N)^{d+1} / (1 - z²)`.
    pub numerator: IntPoly,
}

fn inconsistency(msg: impl Into<String>) -> Error {
    Error::InternalInconsistency(msg.into())
}

/// Series path: `S_k = Σ_γ [z^k] 1/det(I - zγ)` through the group ring.
fn series_path(g: &GroupModel, trunc: usize) -> Result<Vec<BigInt>> {
    let m = g.conductor as usize;
    let rows = trunc + 1;
    let mut total = vec![BigInt::zero(); rows * m];
    for (s, count) in g.distinct(None) {
        let table = inverse_det_series(&s, g.conductor, trunc);
        let c = BigInt::from(count);
        for (acc, x) in total.iter_mut().zip(&table.data) {
            if !x.is_zero() {
                *acc += x * &c;
            }
        }
    }
    let mut sums = Vec::with_capacity(rows);
    for k in 0..rows {
        let reduced = reduce_integer(&total[k * m..(k + 1) * m], g.conductor);
        if reduced.iter().skip(1).any(|x| !x.is_zero()) {
            return Err(inconsistency(format!("Molien sum is irrational at z^{k}")));
        }
        sums.push(reduced[0].clone());
    }
    averaged(sums, g.order(), "series path")
}

/// `F_k = (S_k - S_{k-2}) / N`, checking divisibility and sign.
fn averaged(sums: Vec<BigInt>, order: u32, what: &str) -> Result<Vec<BigInt>> {
    let n = BigInt::from(order);
    let mut out = Vec::with_capacity(sums.len());
    for k in 0..sums.len() {
        let mut v = sums[k].clone();
        if k >= 2 {
            v -= &sums[k - 2];
        }
        let (qt, r) = v.div_rem(&n);
        if !r.is_zero() || qt.is_negative() {
            return Err(inconsistency(format!(
                "{what}: coefficient {k} is not a dimension ({v}/{order})"
            )));
        }
        out.push(qt);
    }
    Ok(out)
}

/// Numerator path: `Σ_γ Π_λ Σ_{i<N} λ^i z^i`, one field trace per Galois
/// orbit.
pub(crate) fn orbit_numerator(g: &GroupModel, only_order: Option<u32>, period: u32) -> Result<IntPoly> {
    let m = g.conductor;
    let phi = BigInt::from(totient(m as u64));
    let table = trace_table(m);
    let mut acc: Vec<BigInt> = Vec::new();
    for (rep, count) in g.galois_orbits(only_order) {
        let orbit_size = units(m as u64)
            .into_iter()
            .map(|j| scale_eigen(&rep, j, m))
            .collect::<HashSet<_>>()
            .len();
        let per_member = count as usize / orbit_size;
        if per_member * orbit_size != count as usize {
            return Err(inconsistency("uneven Galois orbit"));
        }
        let w = window_product(&rep, m, period);
        if acc.len() < w.rows {
            acc.resize(w.rows, BigInt::zero());
        }
        // Σ over the orbit = (|orbit| / φ(M)) · Tr(W(rep)).
        let weight = BigInt::from(count);
        for (k, slot) in acc.iter_mut().enumerate().take(w.rows) {
            let tr = trace(w.row(k), &table) * &weight;
            let (qt, r) = tr.div_rem(&phi);
            if !r.is_zero() {
                return Err(inconsistency(format!(
                    "trace sum not divisible by φ({m}) at z^{k}"
                )));
            }
            *slot += qt;
        }
    }
    Ok(IntPoly::new(acc))
}

/// Expands `num · (1 - z²) / (N (1 - z^N)^{d+1})` to order `trunc`.
fn expand_numerator(num: &IntPoly, order: u32, ambient: u32, trunc: usize) -> Result<Vec<BigInt>> {
    let p = order as usize;
    let mut g: Vec<BigInt> = (0..=trunc).map(|k| num.coeff(k)).collect();
    for _ in 0..ambient {
        for k in p..=trunc {
            let prev = g[k - p].clone();
            g[k] += prev;
        }
    }
    averaged(g, order, "numerator path")
}

/// Fingerprint with the default truncation [`default_truncation`].
pub fn fingerprint(g: &GroupModel) -> Result<SpectrumFingerprint> {
    fingerprint_to(g, default_truncation(g.order(), g.dim()))
}

/// Fingerprint truncated at `z^trunc`. Both evaluation paths always run and
/// must agree.
pub fn fingerprint_to(g: &GroupModel, trunc: usize) -> Result<SpectrumFingerprint> {
    let coeffs = series_path(g, trunc)?;
    let numerator = orbit_numerator(g, None, g.order())?;
    let check = expand_numerator(&numerator, g.order(), g.ambient, trunc)?;
    if check != coeffs {
        let k = check.iter().zip(&coeffs).position(|(a, b)| a != b).unwrap_or(0);
        return Err(inconsistency(format!(
            "series and numerator paths disagree at z^{k}"
        )));
    }
    if !coeffs[0].is_one() {
        return Err(inconsistency("constant term is not 1"));
    }
    Ok(SpectrumFingerprint {
        d: g.dim(),
        order: g.order(),
        trunc,
        coeffs,
        numerator,
    })
}

impl SpectrumFingerprint {
    pub fn sufficient_truncation(&self) -> usize {
        default_truncation(self.order, self.d)
    }

    /// `F_Γ` as a reduced rational function.
    pub fn generating_function(&self) -> RatFunc {
        RatFunc::over_one_minus_power(
            BigRational::new(BigInt::one(), BigInt::from(self.order)),
            self.numerator.mul(&IntPoly::one_minus_power(2)),
            self.order,
            self.d + 1,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("fingerprints always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            offset: e.column().saturating_sub(1),
            message: e.to_string(),
        })
    }
}

impl fmt::Display for SpectrumFingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().take(20).map(|c| c.to_string()).collect();
        writeln!(f, "d = {}, N = {}, K = {}", self.d, self.order, self.trunc)?;
        writeln!(f, "dim H_k: {}", shown.join(", "))?;
        write!(f, "numerator: {}", self.numerator)
    }
}

/// Decides isospectrality. Requires both fingerprints to carry enough
/// terms for the comparison to be conclusive.
pub fn is_isospectral(a: &SpectrumFingerprint, b: &SpectrumFingerprint) -> Result<bool> {
    let needed = a.sufficient_truncation().max(b.sufficient_truncation());
    let got = a.trunc.min(b.trunc);
    if got < needed {
        return Err(Error::IncompatibleTruncation { needed, got });
    }
    if a.d != b.d || a.order != b.order {
        return Ok(false);
    }
    let same = a.numerator == b.numerator;
    let k = a.trunc.min(b.trunc);
    if same != (a.coeffs[..=k] == b.coeffs[..=k]) {
        return Err(inconsistency("numerator and series comparisons disagree"));
    }
    Ok(same)
}

/// Recovers `(d, N)` from a generating function: `d` is the pole order at
/// `z = 1` and `(z - 1)^d F(z) → 2(-1)^d / N`.
pub fn recover_dim_order(f: &RatFunc) -> Result<(u32, u32)> {
    let d = f.pole_order_at_primitive(1);
    let lead = f.leading_laurent_at_unit(1);
    if lead.is_zero() {
        return Err(inconsistency("no pole at z = 1"));
    }
    let sign = if d % 2 == 0 { 2 } else { -2 };
    let n = BigRational::from_integer(BigInt::from(sign)) / lead;
    if !n.is_integer() || !n.is_positive() {
        return Err(inconsistency(format!("recovered volume factor {n} is not an order")));
    }
    let n: u32 = n
        .to_integer()
        .try_into()
        .map_err(|_| inconsistency("recovered order out of range"))?;
    Ok((d, n))
}

/// Independent count: `dim H_k^Γ` from invariant monomials in the
/// eigencoordinates `x_j, y_j` (weights `±s_j`) and, for even `d`, one
/// weight-zero coordinate.
pub fn oracle_dims(l: &LensParams, k_max: usize) -> Vec<BigUint> {
    let q = l.q() as usize;
    let mut weights: Vec<usize> = Vec::new();
    for &s in l.s() {
        let s = s as usize % q;
        weights.push(s);
        weights.push((q - s) % q);
    }
    if l.d() % 2 == 0 {
        weights.push(0);
    }
    // count[k][r]: monomials of degree k and total weight r mod q
    let mut count = vec![vec![BigUint::zero(); q]; k_max + 1];
    count[0][0] = BigUint::one();
    for &w in &weights {
        for k in 1..=k_max {
            for r in 0..q {
                let from = count[k - 1][(r + q - w) % q].clone();
                count[k][r] += from;
            }
        }
    }
    (0..=k_max)
        .map(|k| {
            let p = &count[k][0];
            if k >= 2 {
                p - &count[k - 2][0]
            } else {
                p.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lens(q: u32, s: &[i64]) -> LensParams {
        LensParams::lens_space(q, s).unwrap()
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    fn binom(n: i64, k: i64) -> i64 {
        if n < k || k < 0 {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn lens_roster() {
        let g = group_from_lens(&LensParams::validate(5, 5, &[0, 1, 2]).unwrap());
        assert_eq!(g.elements()[1], vec![(0, 2), (1, 1), (2, 1), (3, 1), (4, 1)]);
        assert_eq!(g.elements()[0], vec![(0, 6)]);
        let g = group_from_lens(&lens(11, &[1, 2, 3]));
        assert_eq!(g.elements()[2], vec![(2, 1), (4, 1), (5, 1), (6, 1), (7, 1), (9, 1)]);
    }

    #[test]
    fn trivial_group_is_harmonic_dimensions() {
        let g = GroupModel::new(1, 3, vec![vec![(0, 3)]]).unwrap();
        let f = fingerprint(&g).unwrap();
        let want: Vec<i64> = (0..=f.trunc as i64).map(|k| 2 * k + 1).collect();
        assert_eq!(ints(&f.coeffs), want);
        let g = group_from_lens(&LensParams::validate(5, 1, &[0, 0, 0]).unwrap());
        let f = fingerprint(&g).unwrap();
        for (k, c) in ints(&f.coeffs).into_iter().enumerate() {
            let k = k as i64;
            assert_eq!(c, binom(k + 5, 5) - binom(k + 3, 5));
        }
    }

    #[test]
    fn antipodal_map_in_dimension_two() {
        let g = GroupModel::new(2, 3, vec![vec![(0, 3)], vec![(1, 3)]]).unwrap();
        let f = fingerprint(&g).unwrap();
        assert_eq!(&ints(&f.coeffs)[..6], &[1, 0, 5, 0, 9, 0]);
    }

    #[test]
    fn smallest_pair() {
        let a = fingerprint(&group_from_lens(&lens(11, &[1, 2, 3]))).unwrap();
        let b = fingerprint(&group_from_lens(&lens(11, &[1, 2, 4]))).unwrap();
        // {1,2,5} = 6·{1,2,4} mod 11, so that triple is no counterexample
        assert!(lens(11, &[1, 2, 5]).is_isometric(&lens(11, &[1, 2, 4])));
        let c = fingerprint(&group_from_lens(&lens(11, &[1, 1, 2]))).unwrap();
        assert_eq!(a.trunc, 68);
        assert!(is_isospectral(&a, &b).unwrap());
        assert!(!is_isospectral(&a, &c).unwrap());
        assert!(is_isospectral(&a, &a).unwrap());
        assert_eq!(&ints(&a.coeffs)[..2], &[1, 0]);
    }

    #[test]
    fn oracle_matches() {
        for (q, s) in [(7u32, vec![1i64, 1, 1]), (11, vec![1, 2, 3]), (9, vec![1, 2]), (12, vec![1, 5, 5])] {
            let l = lens(q, &s);
            let f = fingerprint_to(&group_from_lens(&l), 40).unwrap();
            let o = oracle_dims(&l, 40);
            for k in 0..=40 {
                assert_eq!(BigInt::from(o[k].clone()), f.coeffs[k], "q={q} k={k}");
            }
        }
        let l = LensParams::validate(4, 5, &[0, 2]).unwrap();
        let f = fingerprint_to(&group_from_lens(&l), 30).unwrap();
        let o = oracle_dims(&l, 30);
        assert!((0..=30).all(|k| BigInt::from(o[k].clone()) == f.coeffs[k]));
    }

    #[test]
    fn truncation_guard() {
        let g = group_from_lens(&lens(11, &[1, 2, 3]));
        let short = fingerprint_to(&g, 20).unwrap();
        let full = fingerprint(&g).unwrap();
        assert!(matches!(
            is_isospectral(&short, &full),
            Err(Error::IncompatibleTruncation { needed: 68, got: 20 })
        ));
    }

    #[test]
    fn recovery_and_round_trip() {
        let f = fingerprint(&group_from_lens(&lens(7, &[1, 2, 3, 3]))).unwrap();
        assert_eq!(recover_dim_order(&f.generating_function()).unwrap(), (7, 7));
        let taylor = f.generating_function().taylor(f.trunc).unwrap();
        assert!(taylor
            .coeffs()
            .iter()
            .zip(&f.coeffs)
            .all(|(a, b)| *a == BigRational::from_integer(b.clone())));
        let back = SpectrumFingerprint::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn invalid_rosters() {
        // not closed under conjugation
        assert!(GroupModel::new(3, 2, vec![vec![(0, 2)], vec![(1, 2)], vec![(2, 2)]]).is_err());
        // missing identity
        assert!(GroupModel::new(2, 2, vec![vec![(1, 2)], vec![(1, 2)]]).is_err());
        // element order does not divide the group order
        assert!(GroupModel::new(3, 2, vec![vec![(0, 2)], vec![(1, 1), (2, 1)]]).is_err());
    }
}
