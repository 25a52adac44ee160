//! Exhaustive search for isospectral, non-isometric lens spaces.
//!
//! Isometry classes of `(2n-1)`-dimensional lens spaces of order `q` are
//! enumerated as sorted multisets over [`unit_base`] that are their own
//! canonical form. Classes are grouped by their exact coefficient vector
//! up to the sufficient truncation `K = q(2n) + 2`; every group of two or
//! more classes is then re-verified from scratch (numerators, canonical
//! forms, and the combinatorial oracle on 40 coefficients).
//!
//! Fingerprints can be cached in a JSON-lines file keyed by
//! `(q, n, canonical key, K)`.

use std::collections::{BTreeMap, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::arith::totient;
use crate::lens::{unit_base, CanonicalLens, LensParams};
use crate::molien::{default_truncation, fingerprint, fingerprint_to, group_from_lens, oracle_dims};

/// Coefficients compared by the independent soundness pass.
pub const ORACLE_TERMS: usize = 40;

/// One enumerated class and its spectrum data; one line of the cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub params: String,
    pub q: u32,
    pub n: u32,
    pub canonical_key: String,
    #[serde(rename = "K")]
    pub trunc: usize,
    #[serde(with = "crate::exactalg::decimal")]
    pub fingerprint_key: Vec<BigInt>,
    pub timestamp: u64,
    pub compute_cost: u64,
}

/// Isospectral groups found in one `(q, n)` cell. Deterministic: groups and
/// members are ordered by canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairReport {
    pub q: u32,
    pub n: u32,
    pub d: u32,
    #[serde(rename = "N")]
    pub order: u32,
    #[serde(rename = "K")]
    pub trunc: usize,
    pub classes: usize,
    pub groups: Vec<Vec<String>>,
    pub has_pairs: bool,
    /// Every group passed the independent recheck.
    pub verified: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    pub cache: Option<PathBuf>,
    /// Cap on newly computed coefficients; cached ones are free.
    pub budget: Option<u64>,
    /// Overrides the sufficient truncation. Values below it make grouping
    /// inconclusive and are only meant for experiments.
    pub trunc: Option<usize>,
}

/// Work counters of a search, kept apart from the deterministic reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub computed: usize,
    pub cached: usize,
    pub coefficients: u64,
}

impl SearchStats {
    fn absorb(&mut self, o: SearchStats) {
        self.computed += o.computed;
        self.cached += o.cached;
        self.coefficients += o.coefficients;
    }
}

/// Residues available to a lens space of order `q`.
fn residues(q: u32) -> Vec<u32> {
    match q {
        1 => vec![0],
        2 => vec![1],
        _ => unit_base(q),
    }
}

/// Sorted multisets of size `n` over `base`, in lexicographic order.
fn multisets(base: &[u32], n: usize) -> Vec<Vec<u32>> {
    fn go(base: &[u32], from: usize, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in from..base.len() {
            cur.push(base[i]);
            go(base, i, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(base, 0, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// One representative per isometry class of `L(q; s_1, ..., s_n)`, in
/// increasing canonical order.
pub fn enumerate_lens_classes(q: u32, n: u32) -> Result<Vec<CanonicalLens>> {
    if q == 0 || n == 0 {
        return Err(Error::InvalidParameter("q and n must be positive".into()));
    }
    let mut out = Vec::new();
    for s in multisets(&residues(q), n as usize) {
        let raw: Vec<i64> = s.iter().map(|&x| x as i64).collect();
        let canon = LensParams::lens_space(q, &raw)?.canonicalize();
        if canon.s() == s.as_slice() {
            out.push(canon);
        }
    }
    Ok(out)
}

/// Append-only JSON-lines store of [`SearchRecord`]s.
pub struct Cache {
    path: PathBuf,
    entries: HashMap<(u32, u32, String, usize), Vec<BigInt>>,
}

impl Cache {
    /// Loads `path` if it exists. Lines that fail to parse or are
    /// internally inconsistent are skipped with a warning.
    pub fn open(path: &Path) -> Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<SearchRecord>(&line) {
                    Ok(r) if r.fingerprint_key.len() == r.trunc + 1 => {
                        entries.insert((r.q, r.n, r.canonical_key, r.trunc), r.fingerprint_key);
                    }
                    Ok(_) => log::warn!("{}:{}: truncation mismatch, ignoring record", path.display(), i + 1),
                    Err(e) => log::warn!("{}:{}: skipping corrupt cache line: {e}", path.display(), i + 1),
                }
            }
        }
        Ok(Cache {
            path: path.to_path_buf(),
            entries,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn get(&self, q: u32, n: u32, key: &str, trunc: usize) -> Option<&Vec<BigInt>> {
        self.entries.get(&(q, n, key.to_string(), trunc))
    }

    fn append(&mut self, records: &[SearchRecord]) -> Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        for r in records {
            let mut line = serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
            line.push('\n');
            f.write_all(line.as_bytes())?;
            self.entries.insert(
                (r.q, r.n, r.canonical_key.clone(), r.trunc),
                r.fingerprint_key.clone(),
            );
        }
        Ok(())
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Recomputes a group from scratch: equal numerators, pairwise distinct
/// canonical forms, equal oracle dimensions that match the Molien series.
fn recheck(members: &[CanonicalLens]) -> Result<bool> {
    let lenses: Vec<LensParams> = members.iter().map(CanonicalLens::to_params).collect();
    let prints = lenses
        .iter()
        .map(|l| fingerprint(&group_from_lens(l)))
        .collect::<Result<Vec<_>>>()?;
    let same_numerator = prints.windows(2).all(|w| w[0].numerator == w[1].numerator);
    let distinct = (0..lenses.len())
        .all(|i| (i + 1..lenses.len()).all(|j| !lenses[i].is_isometric(&lenses[j])));
    let mut oracle_ok = true;
    let reference = oracle_dims(&lenses[0], ORACLE_TERMS);
    for l in &lenses {
        let molien = fingerprint_to(&group_from_lens(l), ORACLE_TERMS)?;
        let dims = oracle_dims(l, ORACLE_TERMS);
        let as_int: Vec<BigInt> = dims.iter().cloned().map(BigInt::from).collect();
        oracle_ok &= dims == reference && as_int == molien.coeffs;
    }
    Ok(same_numerator && distinct && oracle_ok)
}

/// Groups all classes of one cell by fingerprint and reports groups of
/// size at least two.
pub fn find_isospectral_pairs(q: u32, n: u32, cfg: &SearchConfig) -> Result<PairReport> {
    let mut cache = cfg.cache.as_deref().map(Cache::open).transpose()?;
    find_with_cache(q, n, cfg, cache.as_mut()).map(|(r, _)| r)
}

/// [`find_isospectral_pairs`] with an already opened cache; also returns
/// the work counters.
pub fn find_with_cache(
    q: u32,
    n: u32,
    cfg: &SearchConfig,
    mut cache: Option<&mut Cache>,
) -> Result<(PairReport, SearchStats)> {
    let classes = enumerate_lens_classes(q, n)?;
    let d = 2 * n - 1;
    let sufficient = default_truncation(q, d);
    let trunc = cfg.trunc.unwrap_or(sufficient);
    if trunc < sufficient {
        log::warn!("truncation {trunc} is below the sufficient {sufficient}; groups may merge");
    }
    let keys: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
    let mut prints: Vec<Option<Vec<BigInt>>> = keys
        .iter()
        .map(|k| cache.as_ref().and_then(|c| c.get(q, n, k, trunc).cloned()))
        .collect();
    let missing: Vec<usize> = (0..classes.len()).filter(|&i| prints[i].is_none()).collect();
    let needed = missing.len() as u64 * (trunc as u64 + 1);
    if let Some(cap) = cfg.budget {
        if needed > cap {
            return Err(Error::BudgetExceeded { needed, cap });
        }
    }
    let computed: Vec<(usize, Vec<BigInt>)> = missing
        .par_iter()
        .map(|&i| {
            let g = group_from_lens(&classes[i].to_params());
            fingerprint_to(&g, trunc).map(|f| (i, f.coeffs))
        })
        .collect::<Result<_>>()?;
    let stamp = now();
    let records: Vec<SearchRecord> = computed
        .iter()
        .map(|(i, coeffs)| SearchRecord {
            params: keys[*i].clone(),
            q,
            n,
            canonical_key: keys[*i].clone(),
            trunc,
            fingerprint_key: coeffs.clone(),
            timestamp: stamp,
            compute_cost: trunc as u64 + 1,
        })
        .collect();
    if let Some(c) = cache.as_deref_mut() {
        c.append(&records)?;
    }
    for (i, coeffs) in computed {
        prints[i] = Some(coeffs);
    }

    let mut by_key: BTreeMap<Vec<BigInt>, Vec<usize>> = BTreeMap::new();
    for (i, p) in prints.into_iter().enumerate() {
        by_key.entry(p.expect("every class has a fingerprint")).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_key.into_values().filter(|v| v.len() > 1).collect();
    groups.sort();
    let mut verified = true;
    for g in &groups {
        let members: Vec<CanonicalLens> = g.iter().map(|&i| classes[i].clone()).collect();
        verified &= recheck(&members)?;
    }
    let report = PairReport {
        q,
        n,
        d,
        order: q,
        trunc,
        classes: classes.len(),
        has_pairs: !groups.is_empty(),
        groups: groups
            .iter()
            .map(|g| g.iter().map(|&i| keys[i].clone()).collect())
            .collect(),
        verified,
    };
    let stats = SearchStats {
        computed: missing.len(),
        cached: classes.len() - missing.len(),
        coefficients: needed,
    };
    Ok((report, stats))
}

/// Per-cell outcome of [`rigidity_sweep`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub q_min: u32,
    pub q_max: u32,
    pub n_max: u32,
    pub cells: Vec<PairReport>,
    /// Cells with `φ(q) ≤ 6` that contain a pair.
    pub violations: Vec<(u32, u32)>,
}

impl SweepReport {
    pub fn pair_cells(&self) -> Vec<(u32, u32)> {
        self.cells
            .iter()
            .filter(|c| c.has_pairs)
            .map(|c| (c.q, c.n))
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.cells.iter().all(|c| c.verified)
    }
}

/// Runs every cell `q_min ≤ q ≤ q_max`, `1 ≤ n ≤ n_max`. Cells with
/// `φ(q) ≤ 6` must be free of pairs; other cells are only recorded.
pub fn rigidity_sweep(q_min: u32, q_max: u32, n_max: u32, cfg: &SearchConfig) -> Result<(SweepReport, SearchStats)> {
    let mut cache = cfg.cache.as_deref().map(Cache::open).transpose()?;
    let mut stats = SearchStats::default();
    let mut cells = Vec::new();
    let mut violations = Vec::new();
    let mut budget = cfg.budget;
    for q in q_min.max(1)..=q_max {
        for n in 1..=n_max {
            let local = SearchConfig {
                budget,
                ..cfg.clone()
            };
            let (report, s) = find_with_cache(q, n, &local, cache.as_mut())?;
            if let Some(b) = budget.as_mut() {
                *b -= s.coefficients;
            }
            stats.absorb(s);
            if report.has_pairs && totient(q as u64) <= 6 {
                violations.push((q, n));
            }
            cells.push(report);
        }
    }
    Ok((
        SweepReport {
            q_min,
            q_max,
            n_max,
            cells,
            violations,
        },
        stats,
    ))
}
