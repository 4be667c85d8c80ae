//! One line per acceptance criterion. Exact arithmetic throughout, so every
//! tolerance is zero.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use klr_core::cartan::SKey;
use klr_core::graded::{monotonicity_violations, quotient_sweep};
use klr_core::suites::{self, SuiteReport};
use klr_core::thick::{enumerate_seq, Multiplicity, ThickContext};
use klr_core::{CartanDatum, Coeff, Element, ExtendedDatum, KlrAlgebra, ScalarParams};

fn plain(d: CartanDatum) -> Arc<KlrAlgebra> {
    let p = ScalarParams::trivial(&d);
    Arc::new(KlrAlgebra::new(d, p))
}

fn extended(base: &CartanDatum) -> (ExtendedDatum, Arc<KlrAlgebra>) {
    let x = ExtendedDatum::new(base).unwrap();
    let p = x.specialized_params(&BTreeMap::new()).unwrap();
    let a = Arc::new(KlrAlgebra::new(x.datum().clone(), p));
    (x, a)
}

fn affine_with_s() -> Arc<KlrAlgebra> {
    let d = CartanDatum::affine_a1();
    let mut s = BTreeMap::new();
    s.insert(SKey { i: 0, j: 1, p: 1, q: 1 }, Coeff::from_integer(1.into()));
    s.insert(SKey { i: 1, j: 0, p: 1, q: 1 }, Coeff::from_integer(1.into()));
    let p = ScalarParams::new(&d, &BTreeMap::new(), &BTreeMap::new(), &s).unwrap();
    Arc::new(KlrAlgebra::new(d, p))
}

fn summarize(reports: &[SuiteReport]) -> (bool, String) {
    let total: usize = reports.iter().map(|r| r.total).sum();
    let failed: usize = reports.iter().map(|r| r.failed).sum();
    let mut detail = format!("{} cases, {failed} failed", total);
    if let Some(f) = reports.iter().flat_map(|r| r.failures()).next() {
        detail.push_str(&format!("; first: {} {}", f.id, f.witness.clone().unwrap_or_default()));
    }
    (failed == 0 && total > 0, detail)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Interleavings with the thick labels in order, times the distinct
/// orderings of the solid multiset.
fn interleavings(m: usize, nu: &[usize]) -> u64 {
    let l = nu.len() as u64;
    let fact = |n: u64| (1..=n).product::<u64>();
    let mut counts = BTreeMap::new();
    for &i in nu {
        *counts.entry(i).or_insert(0u64) += 1;
    }
    let orders = counts.values().fold(fact(l), |acc, &c| acc / fact(c));
    binomial(m as u64 + l, m as u64) * orders
}

fn c1() -> (bool, String) {
    let algs = [
        ("A1", plain(CartanDatum::a1())),
        ("A2", plain(CartanDatum::a2())),
        ("extA1", extended(&CartanDatum::a1()).1),
        ("extA2", extended(&CartanDatum::a2()).1),
        ("affineA1+s", affine_with_s()),
    ];
    let reports: Vec<SuiteReport> = algs.iter().map(|(_, a)| suites::defining(a, 3)).collect();
    summarize(&reports)
}

fn c2() -> (bool, String) {
    let reports: Vec<SuiteReport> = [CartanDatum::a1(), CartanDatum::a2()]
        .iter()
        .map(|b| {
            let (x, a) = extended(b);
            suites::extended(&x, &a)
        })
        .collect();
    summarize(&reports)
}

fn c3() -> (bool, String) {
    summarize(&[suites::nilhecke(&plain(CartanDatum::a1()), 4)])
}

fn c4() -> (bool, String) {
    let reports: Vec<SuiteReport> = [CartanDatum::a1(), CartanDatum::a2()]
        .iter()
        .map(|b| {
            let (x, a) = extended(b);
            suites::proposition(&x, &a, 3)
        })
        .collect();
    summarize(&reports)
}

fn c5() -> (bool, String) {
    let reports = [
        suites::dimension(&plain(CartanDatum::a1()), 3, 8),
        suites::dimension(&plain(CartanDatum::a2()), 3, 8),
    ];
    summarize(&reports)
}

fn c6() -> (bool, String) {
    let (_, a) = extended(&CartanDatum::a2());
    let r = suites::assoc(&a, 200, 2024);
    let assoc = r.cases.iter().filter(|c| c.id.starts_with("assoc/")).count();
    let trips = r.cases.iter().filter(|c| c.id.starts_with("roundtrip/")).count();
    let (ok, detail) = summarize(&[r]);
    (ok && assoc == 200 && trips == 200, format!("{assoc} triples, {trips} round trips; {detail}"))
}

fn c7() -> (bool, String) {
    let one = Multiplicity::single(0, 1).unwrap();
    let two = Multiplicity::single(0, 2).unwrap();
    let fixtures: [(Vec<Multiplicity>, Vec<usize>, u64); 3] = [
        (vec![one.clone()], vec![0], 2),
        (vec![one.clone(), two], vec![0, 1, 2], 60),
        (vec![one], vec![0, 0], 3),
    ];
    let mut ok = true;
    let mut got = Vec::new();
    for (lambda, nu, expected) in &fixtures {
        let n = enumerate_seq(lambda, nu, false).unwrap().len() as u64;
        ok &= n == *expected && n == interleavings(lambda.len(), nu);
        got.push(n.to_string());
    }
    (ok, format!("counts {}", got.join(", ")))
}

fn c8() -> (bool, String) {
    let (x, a) = extended(&CartanDatum::a1());
    let lambda = vec![Multiplicity::single(0, 2).unwrap()];
    let ctx = ThickContext::new(x, a.clone(), lambda, vec![0], false).unwrap();
    let gens: Vec<Element> = ctx.generators().unwrap().into_iter().map(|g| g.value.ambient().clone()).collect();
    let ideal: Vec<Element> =
        ctx.quotient_ideal_generators().unwrap().into_iter().map(|g| g.value.ambient().clone()).collect();
    let name = |labels: &[usize]| ctx.seq_of_expansion(labels).map(|s| ctx.seq_name(s)).unwrap_or_else(|| "?".into());
    let rows = quotient_sweep(&a, &gens, &ideal, 3, &[1, 2, 3], 6, &name).unwrap();
    let bad = monotonicity_violations(&rows);
    let pieces = rows.len() / 3;
    match bad.first() {
        None => (pieces > 0, format!("{pieces} pieces, non-increasing in L")),
        Some((p, a, b)) => (false, format!("{} violations; {:?}: {a} -> {b}", bad.len(), p)),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> (bool, String)); 8] = [
        ("defining relations, n<=3, five data", c1),
        ("dashed specializations", c2),
        ("nilHecke idempotents n<=4, degree 0", c3),
        ("thick-strand relations, total<=3", c4),
        ("dimension cross-check, n<=3, d<=8", c5),
        ("associativity fuzz and round trip", c6),
        ("sequence counts", c7),
        ("quotient monotone in L", c8),
    ];
    let mut all = true;
    for (k, (desc, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, detail) = run();
        all &= ok;
        println!(
            "{} criterion {}: {desc} [{detail}] ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            t.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
