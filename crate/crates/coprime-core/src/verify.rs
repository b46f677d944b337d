use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::primes::PrimeTable;
use crate::solver::{f_exact, SolveRequest};
use num::integer::gcd;
use num::{BigInt, BigRational, BigUint};
use std::collections::BTreeSet;

/// An extra element considered alongside a residue block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExternalElement {
    None,
    /// A concrete integer, compared to block values by gcd.
    Literal(u64),
    /// An unknown integer assumed coprime to block values at exactly these
    /// offsets and sharing a factor with all others (the worst case).
    Abstract { coprime_offsets: BTreeSet<u64> },
}

/// A finitely-checkable claim about residue blocks: among any `threshold`
/// survivors of the block {modulus·k + o : o ∈ offsets} ∩ [1, ∞), together
/// with the external element, some `target` members are pairwise coprime.
#[derive(Debug, Clone)]
pub struct BlockLemma {
    pub name: String,
    pub modulus: u64,
    pub offsets: BTreeSet<u64>,
    pub threshold: usize,
    pub target: usize,
    pub external: ExternalElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLemmaReport {
    pub holds: bool,
    /// First failing (k, block subset) in scan order, if any.
    pub counterexample: Option<(u64, Vec<u64>)>,
}

pub fn builtin_block_lemmas() -> Vec<BlockLemma> {
    let lemma = |name: &str, modulus: u64, offsets: &[u64], threshold, target, external| {
        BlockLemma {
            name: name.to_string(),
            modulus,
            offsets: offsets.iter().copied().collect(),
            threshold,
            target,
            external,
        }
    };
    vec![
        lemma("L2a", 30, &[1, 3, 4, 5, 7, 8, 11, 13], 5, 4, ExternalElement::None),
        lemma("L2b", 30, &[17, 19, 22, 23, 25, 26, 27, 29], 5, 4, ExternalElement::None),
        lemma("L3", 7, &[1, 2, 3, 4, 5, 6, 7], 6, 4, ExternalElement::Literal(7)),
        lemma(
            "L4",
            13,
            &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13],
            10,
            4,
            ExternalElement::Literal(13),
        ),
        lemma("L5", 6, &[0, 1, 2, 3, 4, 5], 5, 3, ExternalElement::None),
        lemma(
            "L7",
            6,
            &[0, 1, 2, 3, 4, 5],
            4,
            3,
            ExternalElement::Abstract {
                coprime_offsets: [0u64, 1, 2, 3, 5].into_iter().collect(),
            },
        ),
    ]
}

/// Maximum clique of a tiny graph given as adjacency bitmasks.
fn max_clique_mask(adj: &[u32]) -> usize {
    fn rec(adj: &[u32], cands: u32, size: usize, best: &mut usize) {
        *best = (*best).max(size);
        let mut rest = cands;
        while rest != 0 {
            if size + rest.count_ones() as usize <= *best {
                return;
            }
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            rec(adj, rest & adj[v as usize], size + 1, best);
        }
    }
    let mut best = 0;
    rec(adj, (1u32 << adj.len()) - 1, 0, &mut best);
    best
}

/// Largest pairwise-coprime count among block values `vals` (tagged with
/// their offsets) plus the external element.
fn block_clique(vals: &[(u64, u64)], external: &ExternalElement) -> usize {
    let mut nodes: Vec<(u64, u64)> = vals.to_vec(); // (value, offset)
    let mut abstract_node = false;
    match external {
        ExternalElement::None => {}
        ExternalElement::Literal(e) => {
            if !nodes.iter().any(|&(v, _)| v == *e) {
                nodes.push((*e, u64::MAX)); // offset tag unused for literals
            }
        }
        ExternalElement::Abstract { .. } => abstract_node = true,
    }
    let total = nodes.len() + usize::from(abstract_node);
    assert!(total <= 32);
    let mut adj = vec![0u32; total];
    let mut connect = |x: usize, y: usize| {
        adj[x] |= 1 << y;
        adj[y] |= 1 << x;
    };
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            if gcd(nodes[i].0, nodes[j].0) == 1 {
                connect(i, j);
            }
        }
    }
    if let ExternalElement::Abstract { coprime_offsets } = external {
        let x = nodes.len();
        for (i, &(_, off)) in nodes.iter().enumerate() {
            if coprime_offsets.contains(&off) {
                connect(i, x);
            }
        }
    }
    max_clique_mask(&adj)
}

/// Checks the lemma for every block index k in [k_min, k_max]. Subsets of
/// size exactly `threshold` suffice: pairwise-coprime counts only grow when
/// more survivors are added.
pub fn verify_block_lemma(
    lemma: &BlockLemma,
    k_min: u64,
    k_max: u64,
) -> Result<BlockLemmaReport> {
    if k_min > k_max {
        return Err(Error::InvalidArgument(format!(
            "k_min = {k_min} exceeds k_max = {k_max}"
        )));
    }
    if lemma.offsets.is_empty() || lemma.threshold == 0 || lemma.threshold > lemma.offsets.len()
    {
        return Err(Error::InvalidArgument(
            "offsets must be nonempty with 0 < threshold <= |offsets|".to_string(),
        ));
    }
    for k in k_min..=k_max {
        let vals: Vec<(u64, u64)> = lemma
            .offsets
            .iter()
            .map(|&o| (lemma.modulus * k + o, o))
            .filter(|&(v, _)| v >= 1)
            .collect();
        if vals.len() < lemma.threshold {
            continue; // block too small (only at k = 0 with offset 0 dropped)
        }
        let mut subset_indices: Vec<usize> = (0..lemma.threshold).collect();
        loop {
            let subset: Vec<(u64, u64)> = subset_indices.iter().map(|&i| vals[i]).collect();
            if block_clique(&subset, &lemma.external) < lemma.target {
                return Ok(BlockLemmaReport {
                    holds: false,
                    counterexample: Some((k, subset.iter().map(|&(v, _)| v).collect())),
                });
            }
            // next lexicographic combination
            let t = lemma.threshold;
            let mut i = t;
            while i > 0 && subset_indices[i - 1] == vals.len() - (t - i) - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            subset_indices[i - 1] += 1;
            for j in i..t {
                subset_indices[j] = subset_indices[j - 1] + 1;
            }
        }
    }
    Ok(BlockLemmaReport {
        holds: true,
        counterexample: None,
    })
}

fn factorize_squarefree(a: u64) -> Result<Vec<u64>> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be positive".to_string()));
    }
    let mut rest = a;
    let mut qs = Vec::new();
    let mut q = 2;
    while q * q <= rest {
        if rest % q == 0 {
            rest /= q;
            if rest % q == 0 {
                return Err(Error::InvalidArgument(format!("a = {a} is not squarefree")));
            }
            qs.push(q);
        }
        q += 1;
    }
    if rest > 1 {
        qs.push(rest);
    }
    Ok(qs)
}

/// Number of m in [1, a] with gcd(m + i, a) = 1 for every offset i, for
/// squarefree a: the residues forbidden mod each prime factor q are
/// {(−i) mod q}, leaving q − r_q choices, combined multiplicatively.
pub fn crt_count_pattern(a: u64, offsets: &BTreeSet<u64>) -> Result<u64> {
    let qs = factorize_squarefree(a)?;
    let mut product = 1u64;
    for q in qs {
        let forbidden: BTreeSet<u64> = offsets.iter().map(|&i| (q - (i % q)) % q).collect();
        product *= q - forbidden.len() as u64;
        if product == 0 {
            return Ok(0);
        }
    }
    Ok(product)
}

/// Direct count of m in [1, a] with gcd(m, a) = gcd(m + 1, a) = 1.
pub fn count_consecutive_coprime(a: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::InvalidArgument("a must be positive".to_string()));
    }
    Ok((1..=a).filter(|&m| gcd(m, a) == 1 && gcd(m + 1, a) == 1).count() as u64)
}

/// Direct count of multiples of 6 in [1, n] with gcd(m + i, a) = 1 for
/// i ∈ {0, 1, 2, 3, 5}; requires gcd(a, 6) = 1.
pub fn count_admissible_six(a: u64, n: u64) -> Result<u64> {
    if a == 0 || gcd(a, 6) != 1 {
        return Err(Error::InvalidArgument(format!(
            "a must be positive and coprime to 6, got {a}"
        )));
    }
    let mut count = 0;
    let mut m = 6;
    while m <= n {
        if [0u64, 1, 2, 3, 5].iter().all(|&i| gcd(m + i, a) == 1) {
            count += 1;
        }
        m += 6;
    }
    Ok(count)
}

fn phi_primorial(table: &PrimeTable, k: usize) -> Result<BigUint> {
    let mut phi = BigUint::from(1u32);
    for i in 1..=k {
        phi *= table.nth_prime(i)? - 1;
    }
    Ok(phi)
}

fn check_coprime_to_primorial(table: &PrimeTable, k: usize, a: u64) -> Result<()> {
    for i in 1..=k {
        let p = table.nth_prime(i)?;
        if a % p == 0 {
            return Err(Error::InvalidArgument(format!(
                "a = {a} must be coprime to the first {k} primes, but {p} divides it"
            )));
        }
    }
    Ok(())
}

/// Exact slope of the conjectured linear bound for sets containing a fixed
/// element a coprime to the first k primes:
/// ((P_k − φ(P_k))·a − φ(P_{k−1})·(p_{k+1} − p_k)) / (P_k·a).
pub fn bound_coefficient(table: &PrimeTable, k: usize, a: u64) -> Result<BigRational> {
    if k == 0 || a == 0 {
        return Err(Error::InvalidArgument(
            "k and a must be positive".to_string(),
        ));
    }
    check_coprime_to_primorial(table, k, a)?;
    let pk = BigInt::from(table.primorial(k)?);
    let phi_k = BigInt::from(phi_primorial(table, k)?);
    let phi_km1 = BigInt::from(phi_primorial(table, k - 1)?);
    let gap = BigInt::from(table.nth_prime(k + 1)? - table.nth_prime(k)?);
    let a_big = BigInt::from(a);
    let numerator = (&pk - phi_k) * &a_big - phi_km1 * gap;
    Ok(BigRational::new(numerator, pk * a_big))
}

#[derive(Debug, Clone)]
pub struct PropositionReport {
    pub forced_max: u64,
    pub bound: BigRational,
    pub holds: bool,
}

/// Per-element additive constants of the proved linear bounds, k = 1, 2, 3.
fn bound_constant(k: usize) -> Result<BigRational> {
    let (num, den) = match k {
        1 => (3, 2),
        2 => (11, 3),
        3 => (176, 15),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "additive constant known only for k in 1..=3, got {k}"
            )))
        }
    };
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Compares the exact forced optimum against the linear bound
/// coefficient(k, a)·n + constant(k), all in rational arithmetic.
pub fn verify_proposition(
    table: &PrimeTable,
    k: usize,
    a: u64,
    n: u64,
    node_budget: u64,
) -> Result<PropositionReport> {
    if a > n {
        return Err(Error::InvalidArgument(format!("a = {a} exceeds n = {n}")));
    }
    let constant = bound_constant(k)?;
    let coefficient = bound_coefficient(table, k, a)?;
    let mut req = SolveRequest::new(n, k);
    req.forced = IntSet::from_members(n, [a])?;
    req.node_budget = node_budget;
    let sol = f_exact(&req)?;
    if sol.status == crate::solver::SolveStatus::BudgetExceeded {
        let (lower, upper) = sol.bounds.unwrap_or((0, n));
        return Err(Error::BudgetExceeded {
            nodes: sol.nodes_explored,
            lower,
            upper,
        });
    }
    let bound = coefficient * BigRational::from(BigInt::from(n)) + constant;
    let holds = BigRational::from(BigInt::from(sol.value)) <= bound;
    Ok(PropositionReport {
        forced_max: sol.value,
        bound,
        holds,
    })
}
