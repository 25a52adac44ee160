//! Conjugacy classes of finite subgroups of `O(d+1)` of order at most 7,
//! described by eigenvalue data, with their spectra.
//!
//! Cyclic groups of order `N` are recorded by the multiplicities of the
//! generator's eigenvalue pairs `ξ_N^{±e}` for `e = 1..floor(N/2)` (for
//! `e = N/2` the single eigenvalue `-1`). The Klein four-group is recorded
//! by the `-1` multiplicities `m_1' ≥ m_2' ≥ m_3'` of its involutions, and
//! `S_3` by the multiplicities `(m_1', m_2')` of the sign and the standard
//! representation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::arith::{fold_residue, lcm, root_order, units};
use crate::exactalg::{IntPoly, RatFunc};
use crate::lens::LensParams;
use crate::molien::{fingerprint, group_from_lens, GroupModel, SpectrumFingerprint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Cyclic(u32),
    KleinFour,
    Sym3,
}

impl GroupKind {
    pub fn order(&self) -> u32 {
        match self {
            GroupKind::Cyclic(n) => *n,
            GroupKind::KleinFour => 4,
            GroupKind::Sym3 => 6,
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, GroupKind::Cyclic(_))
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Cyclic(n) => write!(f, "cyclic{n}"),
            GroupKind::KleinFour => write!(f, "klein4"),
            GroupKind::Sym3 => write!(f, "sym3"),
        }
    }
}

/// A conjugacy class of subgroups of `O(d+1)` of order at most 7.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SmallGroupClass {
    d: u32,
    kind: GroupKind,
    params: Vec<u32>,
}

pub const MAX_SMALL_ORDER: u32 = 7;

/// Eigenvalue budget of a cyclic generator: two per pair, one for `-1`.
fn cyclic_budget(n: u32, params: &[u32]) -> u32 {
    params
        .iter()
        .enumerate()
        .map(|(i, &m)| if 2 * (i as u32 + 1) == n { m } else { 2 * m })
        .sum()
}

/// Image of a cyclic parameter vector when the generator `γ` is replaced
/// by `γ^u`.
fn cyclic_image(n: u32, params: &[u32], u: u64) -> Vec<u32> {
    let mut out = vec![0; params.len()];
    for (i, &m) in params.iter().enumerate() {
        let e = fold_residue(((i as u64 + 1) * u) as i64, n as u64) as usize;
        out[e - 1] += m;
    }
    out
}

/// Sign vectors realizing a Klein four-group with the given `-1`
/// multiplicities, as counts of coordinates of each type `(ε_1, ε_2)`:
/// `(-,+)`, `(+,-)`, `(-,-)`. `None` when no realization exists.
pub fn klein_four_realization(m: [u32; 3], ambient: u32) -> Option<[u32; 3]> {
    let [a, b, c] = m.map(|x| x as i64);
    let only_first = a + c - b;
    let only_second = b + c - a;
    let both = a + b - c;
    if [only_first, only_second, both].iter().any(|&x| x < 0 || x % 2 != 0) {
        return None;
    }
    let counts = [only_first / 2, only_second / 2, both / 2].map(|x| x as u32);
    let used: u32 = counts.iter().sum();
    if used > ambient {
        return None;
    }
    // build the vectors and re-count, so the realization is checked rather
    // than trusted
    let mut g1 = Vec::new();
    let mut g2 = Vec::new();
    for (t, &cnt) in counts.iter().enumerate() {
        let (e1, e2) = [(-1, 1), (1, -1), (-1, -1)][t];
        for _ in 0..cnt {
            g1.push(e1);
            g2.push(e2);
        }
    }
    g1.resize(ambient as usize, 1);
    g2.resize(ambient as usize, 1);
    let neg = |v: &[i32]| v.iter().filter(|&&x| x == -1).count() as u32;
    let g3: Vec<i32> = g1.iter().zip(&g2).map(|(x, y)| x * y).collect();
    (neg(&g1) == m[0] && neg(&g2) == m[1] && neg(&g3) == m[2]).then_some(counts)
}

impl SmallGroupClass {
    /// Validates and canonicalizes. Cyclic parameters are replaced by the
    /// lexicographically largest image under generator changes; Klein
    /// four triples are sorted in decreasing order.
    pub fn new(d: u32, kind: GroupKind, params: &[u32]) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let ambient = d + 1;
        let bad = |msg: String| Err(Error::InvalidGroup(msg));
        let params = match kind {
            GroupKind::Cyclic(n) => {
                if n == 0 || n > MAX_SMALL_ORDER {
                    return Err(Error::UnsupportedOrder(n));
                }
                let len = (n / 2) as usize;
                if params.len() != len {
                    return bad(format!("cyclic{n} takes {len} multiplicities"));
                }
                if cyclic_budget(n, params) > ambient {
                    return bad(format!("multiplicities {params:?} exceed dimension {ambient}"));
                }
                let ord = params
                    .iter()
                    .enumerate()
                    .filter(|(_, &m)| m > 0)
                    .fold(1u64, |acc, (i, _)| lcm(acc, root_order(i as u64 + 1, n as u64)));
                if ord != n as u64 {
                    return bad(format!("generator {params:?} has order {ord}, not {n}"));
                }
                units(n as u64)
                    .into_iter()
                    .map(|u| cyclic_image(n, params, u))
                    .max()
                    .unwrap_or_default()
            }
            GroupKind::KleinFour => {
                let mut m: [u32; 3] = params
                    .try_into()
                    .map_err(|_| Error::InvalidGroup("klein4 takes 3 multiplicities".into()))?;
                m.sort_unstable_by(|a, b| b.cmp(a));
                if m[2] == 0 {
                    return bad("every involution must act nontrivially".into());
                }
                if klein_four_realization(m, ambient).is_none() {
                    return bad(format!("no Klein four-group in O({ambient}) has multiplicities {m:?}"));
                }
                m.to_vec()
            }
            GroupKind::Sym3 => {
                let [m1, m2]: [u32; 2] = params
                    .try_into()
                    .map_err(|_| Error::InvalidGroup("sym3 takes 2 multiplicities".into()))?;
                if m2 == 0 {
                    return bad("sym3 needs the standard representation to be faithful".into());
                }
                if m1 + 2 * m2 > ambient {
                    return bad(format!("multiplicities ({m1}, {m2}) exceed dimension {ambient}"));
                }
                vec![m1, m2]
            }
        };
        Ok(SmallGroupClass { d, kind, params })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn params(&self) -> &[u32] {
        &self.params
    }

    pub fn order(&self) -> u32 {
        self.kind.order()
    }

    pub fn is_cyclic(&self) -> bool {
        self.kind.is_cyclic()
    }
}

impl fmt::Display for SmallGroupClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.params.iter().map(|x| x.to_string()).collect();
        write!(f, "orbifold:{}:d={}:{}", self.kind, self.d, p.join(","))
    }
}

/// Eigenvalue roster of the class.
pub fn class_to_group(c: &SmallGroupClass) -> GroupModel {
    let ambient = c.d + 1;
    let (conductor, elements): (u32, Vec<Vec<(i64, u32)>>) = match c.kind {
        GroupKind::Cyclic(n) => {
            let mut gen: Vec<(i64, u32)> = Vec::new();
            for (i, &m) in c.params.iter().enumerate() {
                let e = i as i64 + 1;
                if 2 * e == n as i64 {
                    gen.push((e, m));
                } else {
                    gen.push((e, m));
                    gen.push((-e, m));
                }
            }
            gen.push((0, ambient - cyclic_budget(n, &c.params)));
            let elements = (0..n as i64)
                .map(|k| gen.iter().map(|&(e, m)| (e * k, m)).collect())
                .collect();
            (n, elements)
        }
        GroupKind::KleinFour => {
            let mut elements = vec![vec![(0, ambient)]];
            for &m in &c.params {
                elements.push(vec![(1, m), (0, ambient - m)]);
            }
            (2, elements)
        }
        GroupKind::Sym3 => {
            let (m1, m2) = (c.params[0], c.params[1]);
            let rot = vec![(2, m2), (4, m2), (0, ambient - 2 * m2)];
            let refl = vec![(3, m1 + m2), (0, ambient - m1 - m2)];
            (
                6,
                vec![
                    vec![(0, ambient)],
                    rot.clone(),
                    rot,
                    refl.clone(),
                    refl.clone(),
                    refl,
                ],
            )
        }
    };
    GroupModel::new(conductor, ambient, elements).expect("class rosters are valid groups")
}

fn compositions(len: usize, budget: u32, weights: &[u32], out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let w = weights[cur.len()];
    let used: u32 = cur.iter().zip(weights).map(|(m, w)| m * w).sum();
    for m in 0..=(budget - used) / w {
        cur.push(m);
        compositions(len, budget, weights, out, cur);
        cur.pop();
    }
}

/// Every conjugacy class of subgroups of `O(d+1)` with at most `n_max`
/// elements, each exactly once, sorted.
pub fn enumerate_classes(d: u32, n_max: u32) -> Result<Vec<SmallGroupClass>> {
    if n_max > MAX_SMALL_ORDER {
        return Err(Error::UnsupportedOrder(n_max));
    }
    let ambient = d + 1;
    let mut set = BTreeSet::new();
    for n in 1..=n_max {
        let len = (n / 2) as usize;
        let weights: Vec<u32> = (1..=len as u32).map(|e| if 2 * e == n { 1 } else { 2 }).collect();
        let mut all = Vec::new();
        compositions(len, ambient, &weights, &mut all, &mut Vec::new());
        for p in all {
            if let Ok(c) = SmallGroupClass::new(d, GroupKind::Cyclic(n), &p) {
                set.insert(c);
            }
        }
        if n == 4 {
            for a in 1..=ambient {
                for b in 1..=a {
                    for c in 1..=b {
                        if let Ok(cl) = SmallGroupClass::new(d, GroupKind::KleinFour, &[a, b, c]) {
                            set.insert(cl);
                        }
                    }
                }
            }
        }
        if n == 6 {
            for m2 in 1..=ambient / 2 {
                for m1 in 0..=ambient - 2 * m2 {
                    set.insert(SmallGroupClass::new(d, GroupKind::Sym3, &[m1, m2])?);
                }
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Class counts, injectivity verdict and any isospectral pairs found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub d: u32,
    pub n_max: u32,
    pub classes_per_order: BTreeMap<u32, usize>,
    pub total: usize,
    pub violations: Vec<(String, String)>,
    pub elapsed_ms: u128,
}

impl RigidityReport {
    pub fn injective(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        match self.violations.first() {
            None => Ok(self),
            Some((a, b)) => Err(Error::RigidityViolation(a.clone(), b.clone())),
        }
    }
}

/// Fingerprints of every enumerated class, in enumeration order.
pub fn class_fingerprints(classes: &[SmallGroupClass]) -> Result<Vec<SpectrumFingerprint>> {
    classes
        .par_iter()
        .map(|c| fingerprint(&class_to_group(c)))
        .collect()
}

/// Checks that no two enumerated classes share a spectrum.
pub fn verify_rigidity(d: u32, n_max: u32) -> Result<RigidityReport> {
    let start = std::time::Instant::now();
    let classes = enumerate_classes(d, n_max)?;
    let prints = class_fingerprints(&classes)?;
    let mut seen: HashMap<(u32, &IntPoly), &SmallGroupClass> = HashMap::new();
    let mut violations = Vec::new();
    let mut per_order = BTreeMap::new();
    for (c, f) in classes.iter().zip(&prints) {
        *per_order.entry(c.order()).or_insert(0) += 1;
        if let Some(prev) = seen.insert((f.order, &f.numerator), c) {
            violations.push((prev.to_string(), c.to_string()));
        }
    }
    Ok(RigidityReport {
        d,
        n_max,
        classes_per_order: per_order,
        total: classes.len(),
        violations,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

/// Classes of one order whose pole behaviour at `ξ_N` disagrees with
/// "pole iff cyclic".
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub order: u32,
    pub checked: usize,
    pub violations: Vec<String>,
}

/// Tests "F_Γ has a pole at `ξ_N` iff Γ is cyclic" over the given classes
/// of order `N` (4 or 6).
pub fn pole_dichotomy(classes: &[SmallGroupClass], prints: &[SpectrumFingerprint], order: u32) -> DichotomyReport {
    let mut report = DichotomyReport {
        order,
        ..Default::default()
    };
    for (c, f) in classes.iter().zip(prints) {
        if c.order() != order {
            continue;
        }
        report.checked += 1;
        let pole = f.generating_function().pole_order_at(1, order) > 0;
        if pole != c.is_cyclic() {
            report.violations.push(format!(
                "{c}: {} but {}",
                if c.is_cyclic() { "cyclic" } else { "not cyclic" },
                if pole { "has a pole" } else { "has no pole" }
            ));
        }
    }
    report
}

/// `4 F_Γ / (1 - z²) - 1/(1 - z)^{d+1}` for a Klein four class: its pole
/// order at `-1` and leading Laurent coefficient there.
pub fn klein_four_laurent(c: &SmallGroupClass) -> Result<(u32, BigRational)> {
    if c.kind != GroupKind::KleinFour {
        return Err(Error::InvalidParameter(format!("{c} is not a Klein four class")));
    }
    let f = fingerprint(&class_to_group(c))?.generating_function();
    let scaled = f
        .mul_scalar(&BigRational::from_integer(BigInt::from(4)))
        .mul(&RatFunc::over_one_minus_power(BigRational::one(), IntPoly::one(), 2, 1));
    let rest = scaled.sub(&RatFunc::over_one_minus_power(
        BigRational::one(),
        IntPoly::one(),
        1,
        c.d + 1,
    ));
    Ok((rest.pole_order_at_primitive(2), rest.leading_laurent_at_unit(-1)))
}

/// The value the three-case formula predicts for [`klein_four_laurent`].
pub fn klein_four_expected(c: &SmallGroupClass) -> BigRational {
    let [m1, m2, m3]: [u32; 3] = c.params.clone().try_into().expect("klein4 triple");
    let pow2 = |e: u32| BigRational::from_integer(BigInt::one() << e);
    let d = c.d;
    if m1 > m2 {
        pow2(d + 1 - m1).recip()
    } else if m2 > m3 {
        pow2(d - m1).recip()
    } else {
        BigRational::from_integer(3.into()) / pow2(d + 1 - m1)
    }
}

/// For cyclic classes of prime order `N ∈ {3, 5, 7}`: `(1-z)^{d+1-2Σn} F_Γ`
/// equals the generating function of `L(N; 1^{n_1}, 2^{n_2}, ...)`.
pub fn lens_reduction_holds(c: &SmallGroupClass) -> Result<bool> {
    let n = match c.kind {
        GroupKind::Cyclic(n) if matches!(n, 3 | 5 | 7) => n,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "{c} is not cyclic of odd prime order"
            )))
        }
    };
    let moving: u32 = c.params.iter().sum();
    let power = c.d + 1 - 2 * moving;
    let s: Vec<i64> = c
        .params
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i as i64 + 1, m as usize))
        .collect();
    let lens = LensParams::lens_space(n, &s)?;
    let f = fingerprint(&class_to_group(c))?.generating_function();
    let lhs = f.mul_poly(&IntPoly::one_minus_power(1).pow(power));
    let rhs = fingerprint(&group_from_lens(&lens))?.generating_function();
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumeration() {
        let cl = enumerate_classes(2, 2).unwrap();
        let names: Vec<String> = cl.iter().map(|c| c.to_string()).collect();
        assert_eq!(
            names,
            vec![
                "orbifold:cyclic1:d=2:",
                "orbifold:cyclic2:d=2:1",
                "orbifold:cyclic2:d=2:2",
                "orbifold:cyclic2:d=2:3"
            ]
        );
        assert!(matches!(enumerate_classes(2, 8), Err(Error::UnsupportedOrder(8))));
    }

    #[test]
    fn klein_four_brute_force() {
        // all triples of sign vectors in dimension 6, up to sorting
        let d = 5u32;
        let amb = d + 1;
        let mut brute = BTreeSet::new();
        for v1 in 0u32..(1 << amb) {
            for v2 in 0u32..(1 << amb) {
                let v3 = v1 ^ v2;
                if v1 == 0 || v2 == 0 || v3 == 0 {
                    continue;
                }
                let mut m = [v1.count_ones(), v2.count_ones(), v3.count_ones()];
                m.sort_unstable_by(|a, b| b.cmp(a));
                brute.insert(m.to_vec());
            }
        }
        let ours: BTreeSet<Vec<u32>> = enumerate_classes(d, 4)
            .unwrap()
            .into_iter()
            .filter(|c| c.kind() == GroupKind::KleinFour)
            .map(|c| c.params().to_vec())
            .collect();
        assert_eq!(ours, brute);
    }

    #[test]
    fn order_five_classes() {
        let cl: Vec<SmallGroupClass> = enumerate_classes(5, 5)
            .unwrap()
            .into_iter()
            .filter(|c| c.order() == 5)
            .collect();
        // (n_1, n_2) with 1 ≤ n_1 + n_2 ≤ 3 modulo swapping
        let mut expect = BTreeSet::new();
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                if a + b > 0 {
                    expect.insert(vec![a.max(b), a.min(b)]);
                }
            }
        }
        let got: BTreeSet<Vec<u32>> = cl.iter().map(|c| c.params().to_vec()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn rosters() {
        let c = SmallGroupClass::new(1, GroupKind::Cyclic(6), &[1, 0, 0]).unwrap();
        assert_eq!(class_to_group(&c).elements()[1], vec![(1, 1), (5, 1)]);
        let c = SmallGroupClass::new(2, GroupKind::Sym3, &[0, 1]).unwrap();
        let g = class_to_group(&c);
        assert_eq!(g.elements()[1], vec![(0, 1), (2, 1), (4, 1)]);
        assert_eq!(g.elements()[3], vec![(0, 2), (3, 1)]);
        assert!(SmallGroupClass::new(3, GroupKind::KleinFour, &[1, 2, 1]).is_ok());
        // triangle and parity hold but four coordinates are too few
        assert!(SmallGroupClass::new(3, GroupKind::KleinFour, &[4, 4, 2]).is_err());
        assert!(SmallGroupClass::new(3, GroupKind::Cyclic(4), &[0, 2]).is_err());
    }

    #[test]
    fn rigidity_small_dimension() {
        let r = verify_rigidity(2, 7).unwrap();
        assert!(r.injective(), "{:?}", r.violations);
    }

    #[test]
    fn klein_laurent_cases() {
        for c in enumerate_classes(5, 4).unwrap() {
            if c.kind() == GroupKind::KleinFour {
                let (pole, lead) = klein_four_laurent(&c).unwrap();
                assert_eq!(pole, c.params()[0]);
                assert_eq!(lead, klein_four_expected(&c), "{c}");
            }
        }
    }

    #[test]
    fn lens_reduction() {
        for c in enumerate_classes(4, 7).unwrap() {
            if matches!(c.kind(), GroupKind::Cyclic(3 | 5 | 7)) {
                assert!(lens_reduction_holds(&c).unwrap(), "{c}");
            }
        }
    }
}
