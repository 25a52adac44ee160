//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criterion 5 is a known red: the order-6 pole dichotomy is false for the
//! cyclic classes without the eigenvalue ξ_6 (generator with eigenvalues
//! ξ_3^{±1} and -1 only). It is evaluated over the full enumeration and
//! reported as FAIL; the process only fails if that red changes shape or
//! any other criterion fails.

use std::collections::{BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use isospec::exactalg::arith::units;
use isospec::exactalg::IntPoly;
use isospec::invariants::phi6_sweep;
use isospec::lens::LensParams;
use isospec::molien::{
    fingerprint, fingerprint_to, group_from_lens, oracle_dims, recover_dim_order, SpectrumFingerprint,
};
use isospec::orbifolds::{class_fingerprints, enumerate_classes, pole_dichotomy, GroupKind, MAX_SMALL_ORDER};
use isospec::search::{enumerate_lens_classes, find_isospectral_pairs, SearchConfig};
use isospec::spaceforms::{fk_divisor_identity, verify_errata_lemma, FpfGroup};

const KNOWN_RED: &[u32] = &[5];

/// Fingerprints with the `(d, N)` they were computed for.
type Seen = Vec<(SpectrumFingerprint, u32, u32)>;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn lens(q: u32, s: &[i64]) -> LensParams {
    LensParams::lens_space(q, s).unwrap()
}

fn print_of(l: &LensParams, seen: &mut Seen) -> SpectrumFingerprint {
    let f = fingerprint(&group_from_lens(l)).unwrap();
    seen.push((f.clone(), l.d(), l.q()));
    f
}

fn smallest_pair(seen: &mut Seen) -> Verdict {
    let start = Instant::now();
    let (a, b) = (lens(11, &[1, 2, 3]), lens(11, &[1, 2, 4]));
    let (fa, fb) = (print_of(&a, seen), print_of(&b, seen));
    let oracle_equal = oracle_dims(&a, 68) == oracle_dims(&b, 68);
    let elapsed = start.elapsed().as_secs_f64();
    verdict(
        fa.trunc == 68 && fa.numerator == fb.numerator && fa.coeffs == fb.coeffs
            && oracle_equal && a.canonicalize() != b.canonicalize() && elapsed < 1.0,
        format!("K = {}, canonical {} vs {}, {elapsed:.3} s", fa.trunc, a.canonicalize(), b.canonicalize()),
    )
}

/// Groups all classes of a cell by exact numerator, independently of the
/// search module's coefficient grouping.
fn numerator_groups(q: u32, n: u32, seen: &mut Seen) -> Vec<Vec<String>> {
    let mut by_num: HashMap<IntPoly, Vec<String>> = HashMap::new();
    for c in enumerate_lens_classes(q, n).unwrap() {
        let f = print_of(&c.to_params(), seen);
        by_num.entry(f.numerator).or_default().push(c.to_string());
    }
    let mut groups: Vec<Vec<String>> = by_num.into_values().filter(|g| g.len() > 1).collect();
    groups.sort();
    groups
}

fn q11_table(seen: &mut Seen) -> Verdict {
    let cfg = SearchConfig::default();
    let mut found = BTreeSet::new();
    let mut agree = true;
    for n in 3..=14 {
        let report = find_isospectral_pairs(11, n, &cfg).unwrap();
        agree &= report.verified && report.groups == numerator_groups(11, n, seen);
        if report.has_pairs {
            found.insert(n);
        }
    }
    let expected: BTreeSet<u32> = [3, 7, 8, 11, 12, 13].into();
    verdict(found == expected && agree, format!("pairs at n = {found:?}"))
}

fn q10_rigidity(seen: &mut Seen) -> Verdict {
    let cfg = SearchConfig::default();
    let mut pairs = Vec::new();
    for q in 2..=10 {
        for n in 1..=12 {
            let report = find_isospectral_pairs(q, n, &cfg).unwrap();
            let independent = numerator_groups(q, n, seen);
            if report.has_pairs || !independent.is_empty() {
                pairs.push((q, n));
            }
        }
    }
    verdict(pairs.is_empty(), format!("cells with pairs: {pairs:?}"))
}

fn orbifold_rigidity(seen: &mut Seen) -> Verdict {
    let mut total = 0;
    let mut collisions = Vec::new();
    for d in 2..=9 {
        let classes = enumerate_classes(d, MAX_SMALL_ORDER).unwrap();
        let prints = class_fingerprints(&classes).unwrap();
        let mut by_num: HashMap<(u32, IntPoly), String> = HashMap::new();
        for (c, f) in classes.iter().zip(&prints) {
            seen.push((f.clone(), d, c.order()));
            if let Some(prev) = by_num.insert((f.order, f.numerator.clone()), c.to_string()) {
                collisions.push(format!("{prev} ~ {c}"));
            }
        }
        total += classes.len();
    }
    verdict(collisions.is_empty(), format!("{total} classes over d = 2..9, collisions: {collisions:?}"))
}

/// Returns the verdict and whether the failure is exactly the documented
/// one (cyclic order-6 classes with no eigenvalue ξ_6).
fn pole_dichotomies() -> (Verdict, bool) {
    let mut order4_bad = Vec::new();
    let mut order6_bad = BTreeSet::new();
    let mut documented = BTreeSet::new();
    let mut restricted_bad = 0;
    let mut checked = [0usize; 2];
    for d in 2..=9 {
        let classes = enumerate_classes(d, MAX_SMALL_ORDER).unwrap();
        let prints = class_fingerprints(&classes).unwrap();
        let r4 = pole_dichotomy(&classes, &prints, 4);
        let r6 = pole_dichotomy(&classes, &prints, 6);
        checked[0] += r4.checked;
        checked[1] += r6.checked;
        order4_bad.extend(r4.violations);
        for v in r6.violations {
            let name = v.split(':').take(4).collect::<Vec<_>>().join(":");
            order6_bad.insert(name);
        }
        for c in &classes {
            if c.kind() == GroupKind::Cyclic(6) && c.params()[0] == 0 {
                documented.insert(c.to_string());
            }
        }
        // restricted statement: cyclic classes with ξ_6 present vs S_3
        let restricted: Vec<_> = classes
            .iter()
            .zip(&prints)
            .filter(|(c, _)| c.order() == 6 && !(c.is_cyclic() && c.params()[0] == 0))
            .map(|(c, f)| (c.clone(), f.clone()))
            .collect();
        let (rc, rf): (Vec<_>, Vec<_>) = restricted.into_iter().unzip();
        restricted_bad += pole_dichotomy(&rc, &rf, 6).violations.len();
    }
    println!(
        "    info: order 4: {} classes, {} violations; order 6: {} classes, {} violations; \
         order 6 restricted to classes with eigenvalue ξ_6 or non-cyclic: {} violations",
        checked[0],
        order4_bad.len(),
        checked[1],
        order6_bad.len(),
        restricted_bad
    );
    let passed = order4_bad.is_empty() && order6_bad.is_empty();
    let as_documented = order4_bad.is_empty() && restricted_bad == 0 && order6_bad == documented;
    let example = order6_bad.iter().next().cloned().unwrap_or_default();
    (
        verdict(
            passed,
            format!(
                "order 4 holds; order 6 fails on {} of {} classes (cyclic, m_1 = 0), e.g. {example}",
                order6_bad.len(),
                checked[1]
            ),
        ),
        as_documented,
    )
}

fn errata_lemma() -> Verdict {
    let mut ok = true;
    let mut poles = Vec::new();
    for group in [FpfGroup::Q16, FpfGroup::P20] {
        for m in 1..=4 {
            let r = verify_errata_lemma(group, m).unwrap();
            ok &= r.passed() && r.classes.len() as u32 == m / 2 + 1;
            for c in &r.classes {
                ok &= c.pole_order == Some(2 * (m - c.h));
            }
            poles.push(format!(
                "{group}/m={m}:{}",
                r.classes.iter().map(|c| c.pole_order.unwrap().to_string()).collect::<Vec<_>>().join(",")
            ));
        }
    }
    verdict(ok, poles.join(" "))
}

fn dimension_growth(seen: &mut Seen) -> Verdict {
    let (a, b) = (lens(11, &[1, 2, 3]), lens(11, &[1, 2, 4]));
    let mut ok = true;
    let mut dims = Vec::new();
    for r in 1..=2 {
        let (ea, eb) = (a.extend(r).unwrap(), b.extend(r).unwrap());
        let (fa, fb) = (print_of(&ea, seen), print_of(&eb, seen));
        ok &= fa.numerator == fb.numerator && !ea.is_isometric(&eb);
        ok &= oracle_dims(&ea, 40) == oracle_dims(&eb, 40);
        for k in [1, 11] {
            ok &= fk_divisor_identity(&a, r, k).unwrap() && fk_divisor_identity(&b, r, k).unwrap();
        }
        dims.push(ea.d());
    }
    verdict(ok && dims == [15, 25], format!("dimensions {dims:?}"))
}

fn oracle_equivalence() -> Verdict {
    let strategy = (3u32..=13, proptest::collection::vec(0usize..64, 1..=4)).prop_map(|(q, idx)| {
        let us = units(q as u64);
        let s: Vec<i64> = idx.iter().map(|&i| us[i % us.len()] as i64).collect();
        LensParams::lens_space(q, &s).unwrap()
    });
    let mut runner = TestRunner::new_with_rng(
        Config::with_cases(200),
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let mut mismatches = Vec::new();
    for _ in 0..200 {
        let l = strategy.new_tree(&mut runner).unwrap().current();
        let f = fingerprint_to(&group_from_lens(&l), 40).unwrap();
        let oracle: Vec<BigInt> = oracle_dims(&l, 40).into_iter().map(BigInt::from).collect();
        if f.coeffs != oracle {
            mismatches.push(l.to_string());
        }
    }
    verdict(mismatches.is_empty(), format!("200 lens spaces, k <= 40, mismatches: {mismatches:?}"))
}

fn volume_recovery(seen: &Seen) -> Verdict {
    let bad: Vec<String> = seen
        .iter()
        .filter(|(f, d, n)| recover_dim_order(&f.generating_function()).ok() != Some((*d, *n)))
        .map(|(f, d, n)| format!("d={d} N={n} K={}", f.trunc))
        .collect();
    verdict(bad.is_empty(), format!("{} fingerprints, failures: {bad:?}", seen.len()))
}

fn phi6_gadgets() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for q in [7, 9, 14, 18] {
        let r = phi6_sweep(q, 8).unwrap();
        ok &= r.passed();
        detail.push(format!("q={q}: {} triples, {} violations", r.gadgets, r.violations.len()));
    }
    verdict(ok, detail.join("; "))
}

fn main() -> ExitCode {
    let mut seen: Seen = Vec::new();
    let mut unexpected = Vec::new();
    let mut report = |id: u32, name: &str, start: Instant, v: Verdict| {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {name:<22} {tag}  ({:.1} s) {}",
            start.elapsed().as_secs_f64(),
            v.detail
        );
        if !v.passed && !KNOWN_RED.contains(&id) {
            unexpected.push(id);
        }
    };

    let t = Instant::now();
    report(1, "smallest-pair", t, smallest_pair(&mut seen));
    let t = Instant::now();
    report(2, "q11-table", t, q11_table(&mut seen));
    let t = Instant::now();
    report(3, "q10-rigidity", t, q10_rigidity(&mut seen));
    let t = Instant::now();
    report(4, "orbifold-rigidity", t, orbifold_rigidity(&mut seen));
    let t = Instant::now();
    let (v5, documented) = pole_dichotomies();
    let red_as_documented = !v5.passed && documented;
    report(5, "pole-dichotomies", t, v5);
    let t = Instant::now();
    report(6, "errata-lemma", t, errata_lemma());
    let t = Instant::now();
    report(7, "dimension-growth", t, dimension_growth(&mut seen));
    let t = Instant::now();
    report(8, "oracle-equivalence", t, oracle_equivalence());
    let t = Instant::now();
    report(9, "volume-recovery", t, volume_recovery(&seen));
    let t = Instant::now();
    report(10, "phi6-gadgets", t, phi6_gadgets());

    if !red_as_documented {
        println!("known red criterion 5 no longer fails exactly on the documented classes");
        return ExitCode::FAILURE;
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
