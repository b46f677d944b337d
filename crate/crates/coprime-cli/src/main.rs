mod cache;
mod report;

use clap::{Parser, Subcommand, ValueEnum};
use coprime_core::{
    build_bk, build_ek, build_theorem1, build_theorem4, builtin_block_lemmas, f_bruteforce,
    f_exact, theorem3_gap, verify_block_lemma, verify_proposition, CanonicalKind, Error, IntSet,
    PrimeTable, Result, SolveRequest, SolveStatus,
};
use num::integer::gcd;
use report::{emit, rational_json, RunReport, TOOL_VERSION};
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetKind {
    Ek,
    Bk,
}

#[derive(Parser)]
#[command(
    name = "coprime",
    version,
    about = "Exact computations for integer sets without k+1 pairwise coprime elements"
)]
struct Cli {
    /// Output format; csv applies to the tabular commands (pintz, gap)
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve primes up to a limit and report table statistics
    Primes {
        #[arg(long)]
        limit: u64,
    },
    /// Search for indices t where p_t * p_{t+2l} > p_{t+2l-1}^2
    Pintz {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        tmax: usize,
        /// Also require p_t^2 > p_{t+2l} and 2 p_t > p_{t+2l}
        #[arg(long)]
        strict: bool,
    },
    /// Exact maximum size of a subset of [1, n] with no k+1 pairwise coprime
    Solve {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: usize,
        /// Elements that must belong to the set
        #[arg(long = "force", num_args = 1..)]
        force: Vec<u64>,
        /// Require an element coprime to the first k primes
        #[arg(long = "escape-ek")]
        escape_ek: bool,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
        /// Cross-check with exhaustive enumeration (n <= 20)
        #[arg(long)]
        oracle: bool,
        /// Return the lexicographically smallest optimal witness
        #[arg(long)]
        canonical: bool,
    },
    /// Build the multiples-of-first-primes sets with exact sizes/densities
    Canonical {
        #[arg(long, value_enum)]
        set: SetKind,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
    /// Build and check the two explicit constructions
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
    },
    /// Exhaustive finite verifications
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Tabulate |E_k(n)| minus the best escape-constrained value
    Gap {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        nmin: u64,
        #[arg(long)]
        nmax: u64,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Window decomposition at a strict witness t with block length l
    T1 {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: u64,
    },
    /// Primorial-bracket escaping set
    T4 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check one builtin residue-block pattern over a range of blocks
    BlockLemma {
        #[arg(long)]
        name: String,
        #[arg(long, default_value_t = 0)]
        kmin: u64,
        #[arg(long)]
        kmax: u64,
    },
    /// Coprimality pattern counting identities up to a bound
    Counts {
        #[arg(long = "max-a")]
        max_a: u64,
    },
    /// Compare the exact forced optimum against the linear bound
    Proposition {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        n: u64,
    },
}

/// What one subcommand produced: parameters echo, result payload, exit code,
/// and optional CSV rows replacing the JSON report.
struct Outcome {
    parameters: Value,
    result: Value,
    exit: i32,
    csv: Option<String>,
}

fn table_with_at_least(count: usize) -> Result<PrimeTable> {
    let mut limit = 100u64;
    loop {
        let table = PrimeTable::build(limit)?;
        if table.len() >= count {
            return Ok(table);
        }
        limit = limit.saturating_mul(2);
    }
}

fn checks_t1_json(r: &coprime_core::Theorem1Report) -> Value {
    json!({
        "preconditions_hold": r.checks.preconditions_hold,
        "decomposition_disjoint": r.checks.decomposition_disjoint,
        "decomposition_covers_e": r.checks.decomposition_covers_e,
        "a_in_ck": r.checks.a_in_ck,
        "a_escapes_e": r.checks.a_escapes_e,
        "delta_matches_formula": r.checks.delta_matches_formula,
    })
}

fn run_primes(limit: u64) -> Result<Outcome> {
    let table = PrimeTable::build(limit)?;
    Ok(Outcome {
        parameters: json!({ "limit": limit }),
        result: json!({
            "limit": limit,
            "count": table.len(),
            "largest": table.primes().last(),
        }),
        exit: 0,
        csv: None,
    })
}

fn run_pintz(l: usize, tmax: usize, strict: bool) -> Result<Outcome> {
    let table = table_with_at_least(tmax.saturating_add(2 * l).saturating_add(1))?;
    let witnesses = table.lemma1_witnesses(l, strict, tmax)?;
    let mut csv = String::from("t,p_t,p_mid,p_high,outer_product,inner_square\n");
    for &t in &witnesses {
        let pt = table.nth_prime(t)? as u128;
        let pmid = table.nth_prime(t + 2 * l - 1)? as u128;
        let phigh = table.nth_prime(t + 2 * l)? as u128;
        csv.push_str(&format!(
            "{t},{pt},{pmid},{phigh},{},{}\n",
            pt * phigh,
            pmid * pmid
        ));
    }
    Ok(Outcome {
        parameters: json!({ "l": l, "tmax": tmax, "strict": strict }),
        result: json!({
            "l": l,
            "tmax": tmax,
            "strict": strict,
            "count": witnesses.len(),
            "witnesses": witnesses,
        }),
        exit: 0,
        csv: Some(csv),
    })
}

fn run_solve(
    n: u64,
    k: usize,
    mut force: Vec<u64>,
    escape_ek: bool,
    budget: u64,
    oracle: bool,
    canonical: bool,
    start: Instant,
) -> Result<i32> {
    force.sort_unstable();
    force.dedup();
    let parameters = json!({
        "n": n, "k": k, "force": force, "escape_ek": escape_ek,
        "budget": budget, "oracle": oracle, "canonical": canonical,
    });
    let canonical_request = format!(
        "solve|n={n}|k={k}|force={force:?}|escape={escape_ek}|budget={budget}|oracle={oracle}|canonical={canonical}"
    );
    let key = cache::key(&canonical_request);
    let dir = cache::cache_dir();
    if let Some(hit) = cache::lookup(&dir, &key, TOOL_VERSION) {
        let exit = if hit.result["status"] == "budget_exceeded" {
            3
        } else {
            0
        };
        emit(&RunReport {
            command: "solve".to_string(),
            parameters,
            result: hit.result,
            runtime_ms: start.elapsed().as_millis() as u64,
            cache_hit: true,
            tool_version: TOOL_VERSION.to_string(),
        });
        return Ok(exit);
    }

    let mut req = SolveRequest::new(n, k);
    req.forced = IntSet::from_members(n, force.iter().copied())?;
    req.escape_ek = escape_ek;
    req.node_budget = budget;
    req.canonical_witness = canonical;
    let sol = f_exact(&req)?;
    let mut result = json!({
        "n": n,
        "k": k,
        "value": sol.value,
        "witness": sol.witness.to_vec(),
        "nodes_explored": sol.nodes_explored,
        "status": match sol.status {
            SolveStatus::Exact => "exact",
            SolveStatus::BudgetExceeded => "budget_exceeded",
        },
        "bounds": sol.bounds.map(|(lower, upper)| json!({ "lower": lower, "upper": upper })),
    });
    if oracle {
        let oracle_value = f_bruteforce(n, k, escape_ek)?;
        result["oracle_value"] = json!(oracle_value);
        result["oracle_matches"] = json!(oracle_value == sol.value);
    }
    let exit = match sol.status {
        SolveStatus::Exact => 0,
        SolveStatus::BudgetExceeded => 3,
    };
    let report = RunReport {
        command: "solve".to_string(),
        parameters,
        result,
        runtime_ms: start.elapsed().as_millis() as u64,
        cache_hit: false,
        tool_version: TOOL_VERSION.to_string(),
    };
    cache::store(&dir, &key, &report);
    emit(&report);
    Ok(exit)
}

fn run_canonical(set: SetKind, k: usize, n: u64) -> Result<Outcome> {
    let table = table_with_at_least(k + 1)?;
    let report = match set {
        SetKind::Ek => build_ek(&table, k, n)?,
        SetKind::Bk => build_bk(&table, k, n)?,
    };
    let mut result = json!({
        "kind": match report.kind { CanonicalKind::Ek => "ek", CanonicalKind::Bk => "bk" },
        "k": report.k,
        "n": report.n,
        "size": report.size,
        "density": rational_json(&report.density_exact),
        "prefix_density": rational_json(&report.prefix_density),
    });
    if report.size <= 1000 {
        result["elements"] = json!(report.set.to_vec());
    }
    Ok(Outcome {
        parameters: json!({
            "set": match set { SetKind::Ek => "ek", SetKind::Bk => "bk" },
            "k": k,
            "n": n,
        }),
        result,
        exit: 0,
        csv: None,
    })
}

fn run_construct(which: &ConstructCmd) -> Result<Outcome> {
    match *which {
        ConstructCmd::T1 { t, l, n } => {
            let table = table_with_at_least(t + 2 * l + 1)?;
            let r = build_theorem1(&table, t, l, n)?;
            let exit = if r.checks.all() { 0 } else { 1 };
            Ok(Outcome {
                parameters: json!({ "t": t, "l": l, "n": n }),
                result: json!({
                    "t": t, "l": l, "n": n,
                    "b_size": r.b.len(),
                    "c_elements": r.c.to_vec(),
                    "d_elements": r.d.to_vec(),
                    "dprime_elements": r.dprime.to_vec(),
                    "a_size": r.a.len(),
                    "e_size": r.e.len(),
                    "delta": r.delta,
                    "checks": checks_t1_json(&r),
                }),
                exit,
                csv: None,
            })
        }
        ConstructCmd::T4 { k, n } => {
            // the primorial of 16 primes exceeds any u64 n, so 17 always
            // suffices to bracket n
            let table = table_with_at_least(17.max(k + 2))?;
            let r = build_theorem4(&table, k, n)?;
            let exit = if r.checks.all() { 0 } else { 1 };
            Ok(Outcome {
                parameters: json!({ "k": k, "n": n }),
                result: json!({
                    "k": k, "n": n, "l": r.l,
                    "special": r.special,
                    "a_size": r.a.len(),
                    "ek_size": r.ek_size,
                    "gap": r.gap,
                    "normalized_gap": r.normalized_gap,
                    "checks": {
                        "bracket_holds": r.checks.bracket_holds,
                        "a_in_ck": r.checks.a_in_ck,
                        "a_escapes_e": r.checks.a_escapes_e,
                    },
                }),
                exit,
                csv: None,
            })
        }
    }
}

fn squarefree(a: u64) -> bool {
    let mut rest = a;
    let mut q = 2u64;
    while q * q <= rest {
        if rest % q == 0 {
            rest /= q;
            if rest % q == 0 {
                return false;
            }
        }
        q += 1;
    }
    true
}

fn run_verify(which: &VerifyCmd) -> Result<Outcome> {
    match which {
        VerifyCmd::BlockLemma { name, kmin, kmax } => {
            let lemma = builtin_block_lemmas()
                .into_iter()
                .find(|l| &l.name == name)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "unknown block pattern {name:?}; builtin names: L2a, L2b, L3, L4, L5, L7"
                    ))
                })?;
            let r = verify_block_lemma(&lemma, *kmin, *kmax)?;
            Ok(Outcome {
                parameters: json!({ "name": name, "kmin": kmin, "kmax": kmax }),
                result: json!({
                    "name": lemma.name,
                    "modulus": lemma.modulus,
                    "offsets": lemma.offsets,
                    "threshold": lemma.threshold,
                    "target": lemma.target,
                    "holds": r.holds,
                    "counterexample": r.counterexample
                        .map(|(k, subset)| json!({ "k": k, "subset": subset })),
                }),
                exit: if r.holds { 0 } else { 1 },
                csv: None,
            })
        }
        VerifyCmd::Counts { max_a } => {
            let mut consecutive_checked = 0u64;
            let mut pattern_checked = 0u64;
            let mut first_mismatch: Option<Value> = None;
            let five: std::collections::BTreeSet<u64> = [0, 1, 2, 3, 5].into_iter().collect();
            for a in 1..=*max_a {
                if !squarefree(a) {
                    continue;
                }
                if a % 2 == 1 {
                    consecutive_checked += 1;
                    let got = coprime_core::count_consecutive_coprime(a)?;
                    let two: std::collections::BTreeSet<u64> = [0, 1].into_iter().collect();
                    let want = coprime_core::crt_count_pattern(a, &two)?;
                    if got != want && first_mismatch.is_none() {
                        first_mismatch =
                            Some(json!({ "kind": "consecutive", "a": a, "scan": got, "formula": want }));
                    }
                }
                if gcd(a, 6) == 1 {
                    pattern_checked += 1;
                    let formula = coprime_core::crt_count_pattern(a, &five)?;
                    let scan = (1..=a)
                        .filter(|&m| five.iter().all(|&i| gcd(m + i, a) == 1))
                        .count() as u64;
                    if formula != scan && first_mismatch.is_none() {
                        first_mismatch =
                            Some(json!({ "kind": "pattern", "a": a, "scan": scan, "formula": formula }));
                    }
                }
            }
            let all_match = first_mismatch.is_none();
            Ok(Outcome {
                parameters: json!({ "max_a": max_a }),
                result: json!({
                    "max_a": max_a,
                    "consecutive_checked": consecutive_checked,
                    "pattern_checked": pattern_checked,
                    "all_match": all_match,
                    "first_mismatch": first_mismatch,
                }),
                exit: if all_match { 0 } else { 1 },
                csv: None,
            })
        }
        VerifyCmd::Proposition { k, a, n } => {
            let table = table_with_at_least(k + 1)?;
            let r = verify_proposition(&table, *k, *a, *n, 100_000_000)?;
            Ok(Outcome {
                parameters: json!({ "k": k, "a": a, "n": n }),
                result: json!({
                    "k": k, "a": a, "n": n,
                    "forced_max": r.forced_max,
                    "bound": rational_json(&r.bound),
                    "holds": r.holds,
                }),
                exit: if r.holds { 0 } else { 1 },
                csv: None,
            })
        }
    }
}

fn run_gap(k: usize, nmin: u64, nmax: u64) -> Result<Outcome> {
    if nmin > nmax {
        return Err(Error::InvalidArgument(format!(
            "nmin = {nmin} exceeds nmax = {nmax}"
        )));
    }
    let table = table_with_at_least(k + 1)?;
    let mut rows = Vec::new();
    let mut csv = String::from("n,ek_size,constrained_max,gap\n");
    for n in nmin..=nmax {
        let ek_size = build_ek(&table, k, n)?.size;
        let gap = theorem3_gap(&table, n, k, 100_000_000)?;
        let constrained = ek_size as i64 - gap;
        rows.push(json!({
            "n": n,
            "ek_size": ek_size,
            "constrained_max": constrained,
            "gap": gap,
        }));
        csv.push_str(&format!("{n},{ek_size},{constrained},{gap}\n"));
    }
    Ok(Outcome {
        parameters: json!({ "k": k, "nmin": nmin, "nmax": nmax }),
        result: json!({ "k": k, "nmin": nmin, "nmax": nmax, "rows": rows }),
        exit: 0,
        csv: Some(csv),
    })
}

fn dispatch(cli: Cli, start: Instant) -> Result<i32> {
    if cli.format == Format::Csv
        && !matches!(cli.command, Command::Pintz { .. } | Command::Gap { .. })
    {
        return Err(Error::InvalidArgument(
            "--format csv applies only to the tabular commands (pintz, gap)".to_string(),
        ));
    }
    let (command_name, outcome) = match cli.command {
        Command::Primes { limit } => ("primes", run_primes(limit)?),
        Command::Pintz { l, tmax, strict } => ("pintz", run_pintz(l, tmax, strict)?),
        Command::Solve {
            n,
            k,
            force,
            escape_ek,
            budget,
            oracle,
            canonical,
        } => return run_solve(n, k, force, escape_ek, budget, oracle, canonical, start),
        Command::Canonical { set, k, n } => ("canonical", run_canonical(set, k, n)?),
        Command::Construct { ref which } => ("construct", run_construct(which)?),
        Command::Verify { ref which } => ("verify", run_verify(which)?),
        Command::Gap { k, nmin, nmax } => ("gap", run_gap(k, nmin, nmax)?),
    };
    if cli.format == Format::Csv {
        print!("{}", outcome.csv.expect("tabular command produces csv"));
    } else {
        emit(&RunReport {
            command: command_name.to_string(),
            parameters: outcome.parameters,
            result: outcome.result,
            runtime_ms: start.elapsed().as_millis() as u64,
            cache_hit: false,
            tool_version: TOOL_VERSION.to_string(),
        });
    }
    Ok(outcome.exit)
}

fn main() {
    let start = Instant::now();
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    let code = match dispatch(cli, start) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded { .. } => 3,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}
