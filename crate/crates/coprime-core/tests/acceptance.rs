//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line. Failing criteria panic with the concrete witnesses.

use coprime_core::*;
use num::integer::gcd;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeSet;

fn report(num: u32, what: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {num:02}: PASS — {what}");
    } else {
        println!("criterion {num:02}: FAIL — {what}");
        panic!(
            "criterion {num:02} failed at {} point(s); first failures:\n{}",
            failures.len(),
            failures
                .iter()
                .take(8)
                .cloned()
                .collect::<Vec<_>>()
                .join("\n")
        );
    }
}

fn solve(n: u64, k: usize) -> u64 {
    f_exact(&SolveRequest::new(n, k)).unwrap().value
}

#[test]
fn criterion_01_proved_exact_values() {
    let table = PrimeTable::build(100).unwrap();
    let mut failures = Vec::new();
    for n in 2..=40u64 {
        let got = solve(n, 1);
        if got != n / 2 {
            failures.push(format!("k=1 n={n}: {got} != {}", n / 2));
        }
    }
    // sizes of the multiples-of-first-primes sets, frozen from an
    // independent sieve, cross-checked against the built sets
    let e2: [u64; 34] = [
        2, 3, 3, 4, 4, 5, 6, 7, 7, 8, 8, 9, 10, 11, 11, 12, 12, 13, 14, 15, 15, 16, 16, 17,
        18, 19, 19, 20, 20, 21, 22, 23, 23, 24,
    ];
    for (i, n) in (3..=36u64).enumerate() {
        let ek = build_ek(&table, 2, n).unwrap().size;
        if ek != e2[i] {
            failures.push(format!("|E_2({n})| = {ek} disagrees with frozen {}", e2[i]));
        }
        let got = solve(n, 2);
        if got != ek {
            failures.push(format!("k=2 n={n}: {got} != {ek}"));
        }
    }
    let e3: [u64; 26] = [
        4, 5, 5, 6, 7, 8, 8, 9, 9, 10, 11, 12, 12, 13, 13, 14, 15, 16, 16, 17, 18, 19, 20,
        21, 21, 22,
    ];
    for (i, n) in (5..=30u64).enumerate() {
        let ek = build_ek(&table, 3, n).unwrap().size;
        if ek != e3[i] {
            failures.push(format!("|E_3({n})| = {ek} disagrees with frozen {}", e3[i]));
        }
        let got = solve(n, 3);
        if got != ek {
            failures.push(format!("k=3 n={n}: {got} != {ek}"));
        }
    }
    report(
        1,
        "exact optimum matches floor(n/2) and the first-primes multiple counts on proved ranges",
        failures,
    );
}

#[test]
fn criterion_02_oracle_equivalence() {
    let mut failures = Vec::new();
    for n in 1..=18u64 {
        for k in 1..=3usize {
            for escape in [false, true] {
                let mut req = SolveRequest::new(n, k);
                req.escape_ek = escape;
                let got = f_exact(&req).unwrap().value;
                let want = f_bruteforce(n, k, escape).unwrap();
                if got != want {
                    failures.push(format!("n={n} k={k} escape={escape}: {got} != {want}"));
                }
            }
        }
    }
    report(
        2,
        "exact solver agrees with exhaustive enumeration for n <= 18",
        failures,
    );
}

#[test]
fn criterion_03_full_interval_below_kth_prime() {
    let table = PrimeTable::build(100).unwrap();
    let mut failures = Vec::new();
    for k in 1..=5usize {
        let pk = table.nth_prime(k).unwrap();
        for n in 1..=10u64.min(pk.saturating_sub(1)) {
            let got = solve(n, k);
            if got != n {
                failures.push(format!("n={n} k={k}: {got} != {n}"));
            }
        }
    }
    report(3, "whole interval survives below the k-th prime", failures);
}

#[test]
fn criterion_04_window_construction_t8() {
    let table = PrimeTable::build(100).unwrap();
    let mut failures = Vec::new();
    for n in 529..=550u64 {
        match build_theorem1(&table, 8, 1, n) {
            Ok(r) => {
                if !r.checks.all() {
                    failures.push(format!("n={n}: checks {:?}", r.checks));
                }
                if r.delta != -2 {
                    failures.push(format!("n={n}: delta {} != -2", r.delta));
                }
            }
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    report(
        4,
        "window construction at t=8, l=1 passes all structural checks with delta = -2",
        failures,
    );
}

#[test]
fn criterion_05_strict_witness_search() {
    // needs p_{t_max + 2}: p_10002 = 104759
    let table = PrimeTable::build(105_000).unwrap();
    let witnesses = table.lemma1_witnesses(1, true, 10_000).unwrap();
    let mut failures = Vec::new();
    if witnesses.is_empty() {
        failures.push("witness list is empty".to_string());
    }
    for &t in &witnesses {
        let p = |i: usize| table.nth_prime(i).unwrap() as u128;
        let (a, b, c) = (p(t), p(t + 1), p(t + 2));
        if !(a * c > b * b && a * a > c && 2 * a > c) {
            failures.push(format!("t={t} does not re-verify its inequalities"));
        }
    }
    if witnesses.first() != Some(&8) {
        failures.push(format!(
            "expected first witness 8, found {:?} (list starts {:?})",
            witnesses.first(),
            &witnesses[..witnesses.len().min(5)]
        ));
    }
    report(
        5,
        "strict witness search over the first 10^4 primes starts at t=8",
        failures,
    );
}

#[test]
fn criterion_06_block_pattern_sweeps() {
    let mut failures = Vec::new();
    for lemma in builtin_block_lemmas() {
        let r = verify_block_lemma(&lemma, 0, 500).unwrap();
        if !r.holds {
            failures.push(format!(
                "{} fails at {:?}",
                lemma.name, r.counterexample
            ));
        }
    }
    let weakened = BlockLemma {
        name: "L5-weakened".to_string(),
        modulus: 6,
        offsets: (0..=5).collect(),
        threshold: 4,
        target: 3,
        external: ExternalElement::None,
    };
    let r = verify_block_lemma(&weakened, 0, 1).unwrap();
    match &r.counterexample {
        Some((k, subset)) if *k <= 1 => {
            let set = IntSet::from_members(subset.iter().copied().max().unwrap(), subset.iter().copied()).unwrap();
            let opts = SearchOptions::default();
            if max_pairwise_coprime(&set, &opts).unwrap().size() >= 3 {
                failures.push(format!("reported counterexample {subset:?} is not one"));
            }
        }
        other => failures.push(format!(
            "weakened threshold should fail by k <= 1, got {other:?}"
        )),
    }
    report(
        6,
        "all six builtin residue-block patterns hold to k=500; weakened threshold fails by k<=1",
        failures,
    );
}

#[test]
fn criterion_07_counting_identities() {
    let mut failures = Vec::new();
    let squarefree_factors = |a: u64| -> Option<Vec<u64>> {
        let (mut rest, mut qs, mut q) = (a, Vec::new(), 2u64);
        while q * q <= rest {
            if rest % q == 0 {
                rest /= q;
                if rest % q == 0 {
                    return None;
                }
                qs.push(q);
            }
            q += 1;
        }
        if rest > 1 {
            qs.push(rest);
        }
        Some(qs)
    };
    let five: BTreeSet<u64> = [0, 1, 2, 3, 5].into_iter().collect();
    for a in 1..=3000u64 {
        let Some(qs) = squarefree_factors(a) else { continue };
        if a % 2 == 1 {
            let product: u64 = qs.iter().map(|&q| q - 2).product();
            let got = count_consecutive_coprime(a).unwrap();
            if got != product {
                failures.push(format!("consecutive a={a}: {got} != {product}"));
            }
        }
        if gcd(a, 6) == 1 {
            let got = crt_count_pattern(a, &five).unwrap();
            let scan = (1..=a)
                .filter(|&m| five.iter().all(|&i| gcd(m + i, a) == 1))
                .count() as u64;
            if got != scan {
                failures.push(format!("pattern a={a}: {got} != {scan}"));
            }
        }
    }
    report(
        7,
        "coprimality pattern counts match factor products and direct scans to a=3000",
        failures,
    );
}

#[test]
fn criterion_08_forced_element_bounds() {
    let table = PrimeTable::build(100).unwrap();
    let mut failures = Vec::new();
    let grid: [(usize, &[u64], u64); 3] = [
        (1, &[1, 3, 5, 7, 9, 11, 13, 15], 30),
        (2, &[1, 5, 7, 11, 13], 24),
        (3, &[7, 11, 13], 30),
    ];
    for (k, a_values, n_max) in grid {
        for &a in a_values {
            for n in a..=n_max {
                match verify_proposition(&table, k, a, n, 100_000_000) {
                    Ok(r) if !r.holds => failures.push(format!(
                        "k={k} a={a} n={n}: forced_max {} exceeds bound {}",
                        r.forced_max, r.bound
                    )),
                    Ok(_) => {}
                    Err(e) => failures.push(format!("k={k} a={a} n={n}: {e}")),
                }
            }
        }
    }
    report(
        8,
        "forced-element linear bounds hold across the sampled (k, a, n) grid",
        failures,
    );
}

#[test]
fn criterion_09_escape_gap_positivity() {
    let table = PrimeTable::build(100).unwrap();
    let mut failures = Vec::new();
    for n in 4..=40u64 {
        let gap = theorem3_gap(&table, n, 1, 100_000_000).unwrap();
        if gap < 1 {
            failures.push(format!("k=1 n={n}: gap {gap} < 1"));
        }
    }
    for n in 6..=30u64 {
        let gap = theorem3_gap(&table, n, 2, 100_000_000).unwrap();
        if gap < 1 {
            failures.push(format!("k=2 n={n}: gap {gap} < 1"));
        }
    }
    let boundary = theorem3_gap(&table, 3, 1, 100_000_000).unwrap();
    if boundary != 0 {
        failures.push(format!("boundary n=3 k=1: gap {boundary} != 0"));
    }
    report(
        9,
        "escape-constrained gap is positive on the sampled ranges with boundary zero at n=3",
        failures,
    );
}

#[test]
fn criterion_10_bracket_construction_regression() {
    // frozen once from this grid: twice the largest observed normalized gap
    const FROZEN_NORMALIZED_GAP_BOUND: f64 = 2.7925445329805143;
    let table = PrimeTable::build(100).unwrap();
    let mut failures = Vec::new();
    for k in 1..=3usize {
        for n in [2310u64, 10_000, 100_000, 1_000_000] {
            match build_theorem4(&table, k, n) {
                Ok(r) => {
                    if !r.checks.all() {
                        failures.push(format!("k={k} n={n}: checks {:?}", r.checks));
                    }
                    if r.gap <= 0 {
                        failures.push(format!("k={k} n={n}: gap {} <= 0", r.gap));
                    }
                    if r.normalized_gap > FROZEN_NORMALIZED_GAP_BOUND {
                        failures.push(format!(
                            "k={k} n={n}: normalized gap {} exceeds frozen bound",
                            r.normalized_gap
                        ));
                    }
                }
                Err(e) => failures.push(format!("k={k} n={n}: {e}")),
            }
        }
    }
    report(
        10,
        "bracket construction checks, positive gaps, and frozen normalized-gap regression",
        failures,
    );
}

#[test]
fn criterion_11_cover_certificate_soundness() {
    let mut rng = StdRng::seed_from_u64(0xc0de);
    let primes_60: [u64; 17] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59];
    let opts = SearchOptions::default();
    let mut failures = Vec::new();
    for case in 0..50 {
        let cover_size = rng.gen_range(1..=6usize);
        let mut cover: Vec<u64> = Vec::new();
        while cover.len() < cover_size {
            let p = primes_60[rng.gen_range(0..primes_60.len())];
            if !cover.contains(&p) {
                cover.push(p);
            }
        }
        let mut set = IntSet::new(60);
        for &p in &cover {
            let mut m = p;
            while m <= 60 {
                if rng.gen_bool(0.6) {
                    set.insert(m);
                }
                m += p;
            }
        }
        if rng.gen_bool(0.3) {
            set.insert(1);
        }
        let bound = match clique_upper_bound_by_prime_cover(&set, &cover) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("case {case}: cover rejected: {e}"));
                continue;
            }
        };
        let exact = max_pairwise_coprime(&set, &opts).unwrap().size() as u64;
        if bound < exact {
            failures.push(format!(
                "case {case}: bound {bound} < exact {exact} for {:?} with cover {cover:?}",
                set.to_vec()
            ));
        }
    }
    report(
        11,
        "prime-cover certificate bounds dominate exact clique sizes on random sets",
        failures,
    );
}
