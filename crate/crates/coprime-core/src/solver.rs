use crate::canonical;
use crate::clique::{self, SearchOptions};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::primes::PrimeTable;
use num::integer::gcd;
use std::cmp::Reverse;

/// Inputs of one exact maximisation: the largest A ⊆ [1, n] whose
/// pairwise-coprime subsets stay at size ≤ k, subject to the listed
/// constraints.
#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub n: u64,
    pub k: usize,
    /// Elements that must belong to A.
    pub forced: IntSet,
    /// Require A to contain an element coprime to the first k primes.
    pub escape_ek: bool,
    pub node_budget: u64,
    /// Refine the witness to the lexicographically smallest optimum.
    pub canonical_witness: bool,
}

impl SolveRequest {
    pub fn new(n: u64, k: usize) -> SolveRequest {
        SolveRequest {
            n,
            k,
            // clamp the empty placeholder: set equality ignores universes, and
            // any n beyond the cap is rejected when the request is solved
            forced: IntSet::new(n.min(crate::intset::MAX_UNIVERSE)),
            escape_ek: false,
            node_budget: 100_000_000,
            canonical_witness: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Exact,
    BudgetExceeded,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub value: u64,
    pub witness: IntSet,
    pub nodes_explored: u64,
    pub status: SolveStatus,
    /// Present exactly when the budget ran out: bounds on the true optimum.
    pub bounds: Option<(u64, u64)>,
}

/// Coprimality adjacency over [1, n]; dense rows up to the same limit the
/// clique module uses, gcd on demand beyond it.
struct Universe {
    n: u64,
    rows: Option<Vec<IntSet>>,
}

impl Universe {
    fn new(n: u64) -> Universe {
        let rows = if n as usize <= clique::MAX_DENSE_ELEMENTS {
            let mut rows = Vec::with_capacity(n as usize + 1);
            rows.push(IntSet::new(n)); // index 0 unused
            for v in 1..=n {
                let mut row = IntSet::new(n);
                for m in 1..=n {
                    if m != v && gcd(m, v) == 1 {
                        row.insert(m);
                    }
                }
                rows.push(row);
            }
            Some(rows)
        } else {
            None
        };
        Universe { n, rows }
    }

    /// Members of `set` (other than v itself) coprime to v.
    fn coprime_filter(&self, set: &IntSet, v: u64) -> IntSet {
        match &self.rows {
            Some(rows) => set.intersection(&rows[v as usize]),
            None => {
                let mut out = IntSet::new(self.n);
                for m in set.iter() {
                    if m != v && gcd(m, v) == 1 {
                        out.insert(m);
                    }
                }
                out
            }
        }
    }
}

struct Search<'a> {
    uni: &'a Universe,
    k: usize,
    forced: IntSet,
    budget: u64,
    nodes: u64,
    aborted: bool,
    abort_upper: u64,
    best_val: u64,
    best_set: Option<IntSet>,
    target: Option<u64>,
}

impl<'a> Search<'a> {
    /// First k+1 pairwise-coprime elements of `cands` in lexicographic
    /// order, if any.
    fn find_clique(&self, cands: &IntSet, need: usize, chosen: &mut Vec<u64>) -> bool {
        if need == 0 {
            return true;
        }
        if (cands.len() as usize) < need {
            return false;
        }
        let mut rest = cands.clone();
        for v in cands.to_vec() {
            rest.remove(v);
            let next = self.uni.coprime_filter(&rest, v);
            chosen.push(v);
            if self.find_clique(&next, need - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    /// Greedy vertex-disjoint packing of violated cliques; each one needs a
    /// deletion of its own, so the count lower-bounds remaining deletions.
    fn pack(&self, alive: &IntSet) -> Vec<Vec<u64>> {
        let mut remaining = alive.clone();
        let mut packed = Vec::new();
        loop {
            let mut q = Vec::new();
            if !self.find_clique(&remaining, self.k + 1, &mut q) {
                return packed;
            }
            for &v in &q {
                remaining.remove(v);
            }
            packed.push(q);
        }
    }

    fn search(&mut self, alive: &mut IntSet, kept: &mut IntSet) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            self.abort_upper = self.abort_upper.max(alive.len());
            return;
        }
        if let Some(t) = self.target {
            if self.best_val >= t {
                return;
            }
        }
        let packed = self.pack(alive);
        if packed.is_empty() {
            // alive itself is feasible and maximal for this subtree
            if alive.len() > self.best_val {
                self.best_val = alive.len();
                self.best_set = Some(alive.clone());
            }
            return;
        }
        if alive.len() - (packed.len() as u64) <= self.best_val {
            return;
        }
        // branch on the packed clique with the fewest deletable elements
        let mut branch: Option<Vec<u64>> = None;
        for q in &packed {
            let deletable: Vec<u64> = q
                .iter()
                .copied()
                .filter(|&v| !self.forced.contains(v) && !kept.contains(v))
                .collect();
            if deletable.is_empty() {
                return; // clique pinned in place: no feasible completion
            }
            if branch.as_ref().map_or(true, |b| deletable.len() < b.len()) {
                branch = Some(deletable);
            }
        }
        let mut branch = branch.unwrap();
        // most coprime neighbours first (most constraints touched), ties to
        // the smaller element
        branch.sort_by_key(|&v| (Reverse(self.uni.coprime_filter(alive, v).len()), v));
        let mut kept_here = Vec::new();
        for v in branch {
            alive.remove(v);
            self.search(alive, kept);
            alive.insert(v);
            if self.aborted {
                self.abort_upper = self.abort_upper.max(alive.len());
                break;
            }
            kept.insert(v);
            kept_here.push(v);
        }
        for v in kept_here {
            kept.remove(v);
        }
    }

    /// Runs one constrained search; `excluded` elements are pre-deleted.
    fn run(&mut self, excluded: &IntSet) {
        let mut alive = IntSet::full(self.uni.n);
        for v in excluded.iter() {
            alive.remove(v);
        }
        let mut kept = IntSet::new(self.uni.n);
        self.search(&mut alive, &mut kept);
    }
}

fn first_primes_below(k: usize, n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = 2u64;
    while out.len() < k && c <= n {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Is some member of `set` coprime to the first k primes?
pub fn escapes_ek(set: &IntSet, k: usize) -> bool {
    let ps = first_primes_below(k, set.universe());
    set.iter().any(|m| ps.iter().all(|&p| m % p != 0))
}

fn validate(req: &SolveRequest) -> Result<()> {
    if req.n == 0 {
        return Err(Error::InvalidArgument("n must be positive".to_string()));
    }
    IntSet::check_universe(req.n)?;
    if req.k == 0 {
        return Err(Error::InvalidArgument("k must be positive".to_string()));
    }
    if let Some(bad) = req.forced.iter().find(|&m| m > req.n) {
        return Err(Error::InvalidArgument(format!(
            "forced element {bad} exceeds n = {}",
            req.n
        )));
    }
    Ok(())
}

/// Exact value of the constrained maximum, with witness.
pub fn f_exact(req: &SolveRequest) -> Result<SolveResult> {
    validate(req)?;
    let forced = IntSet::from_members(req.n, req.forced.iter())?;
    let clique_opts = SearchOptions {
        node_budget: req.node_budget,
        canonical: false,
    };
    if clique::max_pairwise_coprime(&forced, &clique_opts)?.size() > req.k {
        return Err(Error::InfeasibleForced(format!(
            "forced set already contains {} pairwise coprime elements",
            req.k + 1
        )));
    }

    let uni = Universe::new(req.n);
    let escape_primes = first_primes_below(req.k, req.n);
    let is_escape_elem = |m: u64| escape_primes.iter().all(|&p| m % p != 0);

    let mut total_nodes = 0u64;
    let mut best_val = 0u64;
    let mut best_set: Option<IntSet> = None;
    let mut aborted = false;
    let mut abort_upper = 0u64;
    let mut exhausted_candidates = true;

    let no_excluded = IntSet::new(req.n);
    if !req.escape_ek || forced.iter().any(is_escape_elem) {
        let mut s = Search {
            uni: &uni,
            k: req.k,
            forced: forced.clone(),
            budget: req.node_budget,
            nodes: 0,
            aborted: false,
            abort_upper: 0,
            best_val: 0,
            best_set: None,
            target: None,
        };
        s.run(&no_excluded);
        total_nodes = s.nodes;
        best_val = s.best_val;
        best_set = s.best_set;
        aborted = s.aborted;
        abort_upper = s.abort_upper;
    } else {
        let mut any_feasible = false;
        for a in 1..=req.n {
            if !is_escape_elem(a) || forced.contains(a) {
                continue;
            }
            let mut forced_a = forced.clone();
            forced_a.insert(a);
            if clique::max_pairwise_coprime(&forced_a, &clique_opts)?.size() > req.k {
                continue; // this escape candidate conflicts with forced
            }
            any_feasible = true;
            if total_nodes >= req.node_budget {
                exhausted_candidates = false;
                aborted = true;
                break;
            }
            let mut s = Search {
                uni: &uni,
                k: req.k,
                forced: forced_a,
                budget: req.node_budget - total_nodes,
                nodes: 0,
                aborted: false,
                abort_upper: 0,
                best_val,
                best_set: None,
                target: None,
            };
            s.run(&no_excluded);
            total_nodes += s.nodes;
            if s.best_val > best_val || (best_set.is_none() && s.best_set.is_some()) {
                best_val = s.best_val;
                best_set = s.best_set;
            }
            if s.aborted {
                aborted = true;
                abort_upper = abort_upper.max(s.abort_upper);
                exhausted_candidates = false;
                break;
            }
        }
        if !any_feasible {
            return Err(Error::InfeasibleForced(
                "no escape element can be added to the forced set".to_string(),
            ));
        }
    }

    let mut witness = best_set.unwrap_or_else(|| IntSet::new(req.n));
    if aborted {
        let upper = if exhausted_candidates {
            abort_upper.max(best_val)
        } else {
            req.n
        };
        return Ok(SolveResult {
            value: best_val,
            witness,
            nodes_explored: total_nodes,
            status: SolveStatus::BudgetExceeded,
            bounds: Some((best_val, upper)),
        });
    }

    if req.canonical_witness {
        witness = canonical_witness(
            req,
            &uni,
            &forced,
            best_val,
            &mut total_nodes,
            &is_escape_elem,
        )?;
    }

    debug_assert_eq!(witness.len(), best_val);
    Ok(SolveResult {
        value: best_val,
        witness,
        nodes_explored: total_nodes,
        status: SolveStatus::Exact,
        bounds: None,
    })
}

/// Lexicographically smallest optimal witness: scan [1, n] keeping each
/// element exactly when a completion to the optimum still exists.
fn canonical_witness(
    req: &SolveRequest,
    uni: &Universe,
    forced: &IntSet,
    value: u64,
    total_nodes: &mut u64,
    is_escape_elem: &dyn Fn(u64) -> bool,
) -> Result<IntSet> {
    let feasible = |chosen: &IntSet, excluded: &IntSet, total_nodes: &mut u64| -> Result<bool> {
        let run_one = |forced_now: IntSet, total_nodes: &mut u64| -> Result<Option<bool>> {
            let mut s = Search {
                uni,
                k: req.k,
                forced: forced_now,
                budget: req.node_budget.saturating_sub(*total_nodes).max(1),
                nodes: 0,
                aborted: false,
                abort_upper: 0,
                best_val: 0,
                best_set: None,
                target: Some(value),
            };
            s.run(excluded);
            *total_nodes += s.nodes;
            if s.best_val >= value {
                Ok(Some(true))
            } else if s.aborted {
                Err(Error::BudgetExceeded {
                    nodes: *total_nodes,
                    lower: s.best_val,
                    upper: req.n,
                })
            } else {
                Ok(Some(false))
            }
        };
        if !req.escape_ek || chosen.iter().any(is_escape_elem) {
            return Ok(run_one(chosen.clone(), total_nodes)? == Some(true));
        }
        for a in 1..=req.n {
            if !is_escape_elem(a) || excluded.contains(a) || chosen.contains(a) {
                continue;
            }
            let mut with_a = chosen.clone();
            with_a.insert(a);
            let opts = SearchOptions::default();
            if clique::max_pairwise_coprime(&with_a, &opts)?.size() > req.k {
                continue;
            }
            if run_one(with_a, total_nodes)? == Some(true) {
                return Ok(true);
            }
        }
        Ok(false)
    };

    let mut chosen = forced.clone();
    let mut excluded = IntSet::new(req.n);
    for m in 1..=req.n {
        if chosen.len() == value {
            break;
        }
        if chosen.contains(m) {
            continue;
        }
        let mut with_m = chosen.clone();
        with_m.insert(m);
        if feasible(&with_m, &excluded, total_nodes)? {
            chosen = with_m;
        } else {
            excluded.insert(m);
        }
    }
    Ok(chosen)
}

/// Exhaustive oracle over all subsets of [1, n]; refuses n > 20.
pub fn f_bruteforce(n: u64, k: usize, escape_ek: bool) -> Result<u64> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument(
            "n and k must be positive".to_string(),
        ));
    }
    if n > 20 {
        return Err(Error::InvalidArgument(format!(
            "brute force is limited to n <= 20, got {n}"
        )));
    }
    let escape_primes = first_primes_below(k, n);
    let is_escape_elem = |m: u64| escape_primes.iter().all(|&p| m % p != 0);

    fn grows_clique(chosen: &[u64], m: u64, k: usize) -> bool {
        // does chosen + m contain k+1 pairwise coprime including m?
        fn rec(cands: &[u64], need: usize) -> bool {
            if need == 0 {
                return true;
            }
            if cands.len() < need {
                return false;
            }
            for (i, &v) in cands.iter().enumerate() {
                let next: Vec<u64> = cands[i + 1..]
                    .iter()
                    .copied()
                    .filter(|&w| gcd(w, v) == 1)
                    .collect();
                if rec(&next, need - 1) {
                    return true;
                }
            }
            false
        }
        let cop: Vec<u64> = chosen.iter().copied().filter(|&c| gcd(c, m) == 1).collect();
        rec(&cop, k)
    }

    struct Brute<'a> {
        n: u64,
        k: usize,
        escape_ek: bool,
        is_escape_elem: &'a dyn Fn(u64) -> bool,
        best: u64,
        chosen: Vec<u64>,
    }

    impl Brute<'_> {
        fn rec(&mut self, m: u64) {
            if m > self.n {
                if !self.escape_ek || self.chosen.iter().any(|&v| (self.is_escape_elem)(v)) {
                    self.best = self.best.max(self.chosen.len() as u64);
                }
                return;
            }
            if self.chosen.len() as u64 + (self.n - m + 1) <= self.best {
                return;
            }
            if !grows_clique(&self.chosen, m, self.k) {
                self.chosen.push(m);
                self.rec(m + 1);
                self.chosen.pop();
            }
            self.rec(m + 1);
        }
    }

    let mut b = Brute {
        n,
        k,
        escape_ek,
        is_escape_elem: &is_escape_elem,
        best: 0,
        chosen: Vec::new(),
    };
    b.rec(1);
    Ok(b.best)
}

/// |E_k(n)| minus the best escape-constrained value; negative only below p_k.
pub fn theorem3_gap(table: &PrimeTable, n: u64, k: usize, node_budget: u64) -> Result<i64> {
    let ek = canonical::build_ek(table, k, n)?;
    let mut req = SolveRequest::new(n, k);
    req.escape_ek = true;
    req.node_budget = node_budget;
    let sol = f_exact(&req)?;
    if sol.status == SolveStatus::BudgetExceeded {
        let (lower, upper) = sol.bounds.unwrap_or((0, n));
        return Err(Error::BudgetExceeded {
            nodes: sol.nodes_explored,
            lower,
            upper,
        });
    }
    Ok(ek.size as i64 - sol.value as i64)
}
