use crate::error::{Error, Result};
use crate::intset::IntSet;
use num::integer::gcd;

/// A pairwise-coprime subset found by the search, elements ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    pub elements: Vec<u64>,
}

impl CliqueWitness {
    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Knobs for the exact searches.
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Node-visit budget before the search gives up with bounds.
    pub node_budget: u64,
    /// Return the lexicographically smallest maximum clique instead of an
    /// arbitrary optimum.
    pub canonical: bool,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            node_budget: 100_000_000,
            canonical: false,
        }
    }
}

/// Largest set size for which dense adjacency rows are built; beyond this the
/// cover-certificate route is the intended tool.
pub const MAX_DENSE_ELEMENTS: usize = 4096;

/// Maximum pairwise-coprime subset of `set`, exact.
pub fn max_pairwise_coprime(set: &IntSet, opts: &SearchOptions) -> Result<CliqueWitness> {
    let labels = set.to_vec();
    let graph = Graph::from_coprime_labels(&labels)?;
    let mut budget = Budget::new(opts.node_budget);
    let indices = if opts.canonical {
        graph.lex_smallest_max_clique(&mut budget)
    } else {
        graph.max_clique(&mut budget)
    }?;
    Ok(CliqueWitness {
        elements: indices.into_iter().map(|i| labels[i]).collect(),
    })
}

/// Does `set` avoid k+1 pairwise coprime elements?
pub fn is_in_ck(set: &IntSet, k: usize, opts: &SearchOptions) -> Result<bool> {
    let labels = set.to_vec();
    if labels.len() <= k {
        return Ok(true);
    }
    let graph = Graph::from_coprime_labels(&labels)?;
    let mut budget = Budget::new(opts.node_budget);
    Ok(!graph.has_clique_of_size(k + 1, &mut budget)?)
}

/// Upper bound |cover| + [1 ∈ S] on the pairwise-coprime clique size of S,
/// valid because clique elements other than 1 must occupy distinct cover
/// primes. The cover must consist of primes dividing every element but 1.
pub fn clique_upper_bound_by_prime_cover(set: &IntSet, cover: &[u64]) -> Result<u64> {
    for &p in cover {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "cover entry {p} is not prime"
            )));
        }
    }
    for m in set.iter() {
        if m > 1 && !cover.iter().any(|&p| m % p == 0) {
            return Err(Error::CoverInvalid { element: m });
        }
    }
    Ok(cover.len() as u64 + u64::from(set.contains(1)))
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) struct Budget {
    limit: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Budget {
        Budget { limit, used: 0 }
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// Dense index bitset for graphs of at most MAX_DENSE_ELEMENTS vertices.
#[derive(Clone, PartialEq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    fn empty(m: usize) -> Bits {
        Bits(vec![0; (m + 63) / 64])
    }

    fn full(m: usize) -> Bits {
        let mut b = Bits::empty(m);
        for i in 0..m {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        for (i, &w) in self.0.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    fn intersect(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn subtract(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

/// Undirected graph on indices 0..m with bitset rows.
pub(crate) struct Graph {
    m: usize,
    rows: Vec<Bits>,
}

impl Graph {
    pub(crate) fn new(m: usize) -> Result<Graph> {
        if m > MAX_DENSE_ELEMENTS {
            return Err(Error::InvalidArgument(format!(
                "{m} elements exceed the exact-search limit of {MAX_DENSE_ELEMENTS}; \
                 use a prime-cover certificate instead"
            )));
        }
        Ok(Graph {
            m,
            rows: vec![Bits::empty(m); m],
        })
    }

    pub(crate) fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.rows[i].set(j);
            self.rows[j].set(i);
        }
    }

    pub(crate) fn from_coprime_labels(labels: &[u64]) -> Result<Graph> {
        let mut g = Graph::new(labels.len())?;
        for i in 0..labels.len() {
            for j in i + 1..labels.len() {
                if gcd(labels[i], labels[j]) == 1 {
                    g.add_edge(i, j);
                }
            }
        }
        Ok(g)
    }

    /// Greedy coloring of `p`; returns vertices grouped by ascending color
    /// along with each vertex's color. Used as the branch-and-bound bound.
    fn color(&self, p: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut uncolored = p.clone();
        let mut c = 0;
        while !uncolored.is_empty() {
            c += 1;
            let mut class_cands = uncolored.clone();
            while let Some(v) = class_cands.first() {
                class_cands.clear(v);
                class_cands.subtract(&self.rows[v]);
                uncolored.clear(v);
                order.push(v);
                colors.push(c);
            }
        }
        (order, colors)
    }

    fn expand(
        &self,
        r: &mut Vec<usize>,
        p: &Bits,
        best: &mut Vec<usize>,
        target: Option<usize>,
        budget: &mut Budget,
        aborted: &mut bool,
        abort_upper: &mut usize,
    ) {
        if !budget.tick() {
            *aborted = true;
            return;
        }
        if p.is_empty() {
            if r.len() > best.len() {
                *best = r.clone();
            }
            return;
        }
        let (order, colors) = self.color(p);
        let mut p = p.clone();
        for i in (0..order.len()).rev() {
            if let Some(t) = target {
                if best.len() >= t {
                    return;
                }
            }
            if r.len() + colors[i] <= best.len() {
                return;
            }
            let v = order[i];
            let pv = p.intersect(&self.rows[v]);
            r.push(v);
            self.expand(r, &pv, best, target, budget, aborted, abort_upper);
            r.pop();
            if *aborted {
                // everything still open at this level is bounded by the
                // color of the vertex we just abandoned
                *abort_upper = (*abort_upper).max(r.len() + colors[i]);
                return;
            }
            p.clear(v);
        }
    }

    fn search(&self, target: Option<usize>, budget: &mut Budget) -> Result<Vec<usize>> {
        let mut best = Vec::new();
        let mut r = Vec::new();
        let mut aborted = false;
        let mut abort_upper = 0usize;
        self.expand(
            &mut r,
            &Bits::full(self.m),
            &mut best,
            target,
            budget,
            &mut aborted,
            &mut abort_upper,
        );
        if aborted && target.map_or(true, |t| best.len() < t) {
            let upper = if abort_upper == 0 { self.m } else { abort_upper };
            return Err(Error::BudgetExceeded {
                nodes: budget.used,
                lower: best.len() as u64,
                upper: upper.max(best.len()) as u64,
            });
        }
        Ok(best)
    }

    pub(crate) fn max_clique(&self, budget: &mut Budget) -> Result<Vec<usize>> {
        self.search(None, budget)
    }

    pub(crate) fn max_clique_size(&self, budget: &mut Budget) -> Result<usize> {
        Ok(self.search(None, budget)?.len())
    }

    pub(crate) fn has_clique_of_size(&self, size: usize, budget: &mut Budget) -> Result<bool> {
        if size == 0 {
            return Ok(true);
        }
        if size > self.m {
            return Ok(false);
        }
        Ok(self.search(Some(size), budget)?.len() >= size)
    }

    /// Lexicographically smallest maximum clique by index order: find the
    /// clique number, then greedily keep the smallest vertex that still
    /// completes to it.
    fn lex_smallest_max_clique(&self, budget: &mut Budget) -> Result<Vec<usize>> {
        let omega = self.max_clique_size(budget)?;
        let mut chosen = Vec::new();
        let mut cands = Bits::full(self.m);
        for v in 0..self.m {
            if chosen.len() == omega {
                break;
            }
            if !cands.get(v) {
                continue;
            }
            let next = cands.intersect(&self.rows[v]);
            let need = omega - chosen.len() - 1;
            let ok = if need == 0 {
                true
            } else {
                self.restrict(&next).has_clique_of_size(need, budget)?
            };
            if ok {
                chosen.push(v);
                cands = next;
            }
        }
        debug_assert_eq!(chosen.len(), omega);
        Ok(chosen)
    }

    /// Subgraph induced by `keep` (indices renumbered in ascending order).
    fn restrict(&self, keep: &Bits) -> Graph {
        let map: Vec<usize> = (0..self.m).filter(|&i| keep.get(i)).collect();
        let mut g = Graph {
            m: map.len(),
            rows: vec![Bits::empty(map.len()); map.len()],
        };
        for (a, &ia) in map.iter().enumerate() {
            for (b, &ib) in map.iter().enumerate().skip(a + 1) {
                if self.rows[ia].get(ib) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}
