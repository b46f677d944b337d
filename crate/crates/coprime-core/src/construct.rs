use crate::canonical;
use crate::clique;
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::primes::PrimeTable;
use num::integer::gcd;
use num::BigUint;

/// Outcome of the window construction around a strict gap witness t with
/// block length l. Writing q_i = p_{t+i} for the 2l primes following p_{t-1}:
///   b      = multiples of p_1 .. p_{t-1} in [1, n]
///   c      = { q_i q_j : 0 <= i <= l-1, i < j <= 2l-1 }
///   d      = { q_i, q_i^2 : 0 <= i <= l-1 }
///   dprime = { q_i q_j : l <= i <= 2l-2, i < j <= 2l-1 }
///   a      = b ∪ c ∪ dprime,  e = multiples of p_1 .. p_{t+l-1} in [1, n]
/// b, c, d partition e; swapping d for dprime changes the size by l(l-5)/2.
#[derive(Debug, Clone)]
pub struct Theorem1Report {
    pub t: usize,
    pub l: usize,
    pub n: u64,
    pub b: IntSet,
    pub c: IntSet,
    pub d: IntSet,
    pub dprime: IntSet,
    pub a: IntSet,
    pub e: IntSet,
    /// |a| − |e|
    pub delta: i64,
    pub checks: Theorem1Checks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theorem1Checks {
    pub preconditions_hold: bool,
    pub decomposition_disjoint: bool,
    pub decomposition_covers_e: bool,
    pub a_in_ck: bool,
    pub a_escapes_e: bool,
    pub delta_matches_formula: bool,
}

impl Theorem1Checks {
    pub fn all(&self) -> bool {
        self.preconditions_hold
            && self.decomposition_disjoint
            && self.decomposition_covers_e
            && self.a_in_ck
            && self.a_escapes_e
            && self.delta_matches_formula
    }
}

/// Near-extremal escaping set for the primorial bracket:
/// P_{l+1} <= n < P_{l+2}, a = multiples of p_i p_j (i <= k < j <= l)
/// plus the single element special = p_{k+1} ··· p_l coprime to P_k.
#[derive(Debug, Clone)]
pub struct Theorem4Report {
    pub k: usize,
    pub n: u64,
    /// Bracket index: P_{l+1} <= n < P_{l+2}.
    pub l: usize,
    pub a: IntSet,
    pub special: u64,
    pub ek_size: u64,
    /// |E_k(n)| − |a|
    pub gap: i64,
    /// gap · ln(ln n) / n
    pub normalized_gap: f64,
    pub checks: Theorem4Checks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theorem4Checks {
    pub bracket_holds: bool,
    pub a_in_ck: bool,
    pub a_escapes_e: bool,
}

impl Theorem4Checks {
    pub fn all(&self) -> bool {
        self.bracket_holds && self.a_in_ck && self.a_escapes_e
    }
}

/// Largest set of vertex-disjoint edges, by bitmask DP over <= 20 vertices.
fn max_matching(vertex_count: usize, edges: &[(usize, usize)]) -> Result<usize> {
    if vertex_count > 20 {
        return Err(Error::InvalidArgument(format!(
            "matching certificate limited to 20 vertices, got {vertex_count}"
        )));
    }
    let mut adj = vec![0u32; vertex_count];
    for &(u, v) in edges {
        assert!(u < v && v < vertex_count);
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    let full = (1u32 << vertex_count) - 1;
    let mut memo = vec![-1i8; (full as usize) + 1];
    fn rec(mask: u32, adj: &[u32], memo: &mut [i8]) -> i8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] >= 0 {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros();
        let rest = mask & !(1 << v);
        let mut best = rec(rest, adj, memo); // leave v unmatched
        let mut partners = adj[v as usize] & rest;
        while partners != 0 {
            let u = partners.trailing_zeros();
            partners &= partners - 1;
            best = best.max(1 + rec(rest & !(1 << u), adj, memo));
        }
        memo[mask as usize] = best;
        best
    }
    Ok(rec(full, &adj, &mut memo) as usize)
}

fn ln_ln(n: u64) -> Result<f64> {
    if n < 16 {
        return Err(Error::InvalidArgument(format!(
            "ln(ln n) is only reported for n >= 16, got {n}"
        )));
    }
    Ok((n as f64).ln().ln())
}

fn mark_multiples(set: &mut IntSet, step: u64, n: u64) {
    let mut m = step;
    while m <= n {
        set.insert(m);
        m += step;
    }
}

pub fn build_theorem1(table: &PrimeTable, t: usize, l: usize, n: u64) -> Result<Theorem1Report> {
    if t == 0 || l == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "t, l, n must all be positive".to_string(),
        ));
    }
    IntSet::check_universe(n)?;
    let p_t = table.nth_prime(t)? as u128;
    let p_hi = table.nth_prime(t + 2 * l)? as u128; // p_{t+2l}
    let p_pen = table.nth_prime(t + 2 * l - 1)? as u128; // p_{t+2l-1}
    if p_t * p_hi <= p_pen * p_pen {
        return Err(Error::PreconditionViolated(format!(
            "requires p[t]*p[t+2l] > p[t+2l-1]^2, got {} <= {}",
            p_t * p_hi,
            p_pen * p_pen
        )));
    }
    if p_t * p_t <= p_hi {
        return Err(Error::PreconditionViolated(format!(
            "requires p[t]^2 > p[t+2l], got {} <= {}",
            p_t * p_t,
            p_hi
        )));
    }
    if 2 * p_t <= p_hi {
        return Err(Error::PreconditionViolated(format!(
            "requires 2*p[t] > p[t+2l], got {} <= {}",
            2 * p_t,
            p_hi
        )));
    }
    if (n as u128) < p_pen * p_pen || (n as u128) >= p_t * p_hi {
        return Err(Error::PreconditionViolated(format!(
            "requires p[t+2l-1]^2 <= n < p[t]*p[t+2l], got n = {n} outside [{}, {})",
            p_pen * p_pen,
            p_t * p_hi
        )));
    }

    let q = |i: usize| table.nth_prime(t + i); // q_i = p_{t+i}, 0 <= i <= 2l-1
    let mut b = IntSet::new(n);
    for i in 1..t {
        mark_multiples(&mut b, table.nth_prime(i)?, n);
    }
    let mut c = IntSet::new(n);
    let mut c_edges = Vec::new();
    for i in 0..l {
        for j in (i + 1)..(2 * l) {
            c.insert(q(i)? * q(j)?);
            c_edges.push((i, j));
        }
    }
    let mut d = IntSet::new(n);
    for i in 0..l {
        d.insert(q(i)?);
        d.insert(q(i)? * q(i)?);
    }
    let mut dprime = IntSet::new(n);
    let mut dprime_edges = Vec::new();
    for i in l..(2 * l - 1) {
        for j in (i + 1)..(2 * l) {
            dprime.insert(q(i)? * q(j)?);
            dprime_edges.push((i, j));
        }
    }
    let a = b.union(&c).union(&dprime);
    let e = canonical::build_ek(table, t + l - 1, n)?.set;

    let decomposition_disjoint =
        b.is_disjoint(&c) && b.is_disjoint(&d) && c.is_disjoint(&d);
    let decomposition_covers_e = b.union(&c).union(&d) == e;

    // membership certificate: any pairwise-coprime subset splits into a part
    // inside b (one prime of p_1..p_{t-1} each, so <= t-1) and a part inside
    // c ∪ dprime (disjoint index pairs, so <= max matching = l)
    let cover: Vec<u64> = table.primes()[..t - 1].to_vec();
    let b_bound_ok = match clique::clique_upper_bound_by_prime_cover(&b, &cover) {
        Ok(bound) => bound <= (t - 1) as u64,
        Err(_) => false,
    };
    let mut edges = c_edges;
    edges.extend(dprime_edges);
    let pair_bound_ok = max_matching(2 * l, &edges)? <= l;
    let a_in_ck = b_bound_ok && pair_bound_ok;

    let a_escapes_e = a.difference(&e) == dprime;
    let delta = a.len() as i64 - e.len() as i64;
    let l_i = l as i64;
    let delta_matches_formula = delta == l_i * (l_i - 5) / 2;

    let checks = Theorem1Checks {
        preconditions_hold: true, // guarded above
        decomposition_disjoint,
        decomposition_covers_e,
        a_in_ck,
        a_escapes_e,
        delta_matches_formula,
    };
    Ok(Theorem1Report {
        t,
        l,
        n,
        b,
        c,
        d,
        dprime,
        a,
        e,
        delta,
        checks,
    })
}

pub fn build_theorem4(table: &PrimeTable, k: usize, n: u64) -> Result<Theorem4Report> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument(
            "k and n must be positive".to_string(),
        ));
    }
    IntSet::check_universe(n)?;
    let n_big = BigUint::from(n);
    if table.primorial(k + 2)? > n_big {
        return Err(Error::PreconditionViolated(format!(
            "requires n >= product of the first {} primes = {}, got n = {n}",
            k + 2,
            table.primorial(k + 2)?
        )));
    }
    // largest l with P_{l+1} <= n; the loop needs P_{l+2} from the table
    let mut l = k + 1;
    loop {
        let next = table.primorial(l + 2)?;
        if next > n_big {
            break;
        }
        l += 1;
    }

    let mut special: u64 = 1;
    for j in (k + 1)..=l {
        special *= table.nth_prime(j)?;
    }
    let mut a = IntSet::new(n);
    for i in 1..=k {
        for j in (k + 1)..=l {
            mark_multiples(&mut a, table.nth_prime(i)? * table.nth_prime(j)?, n);
        }
    }
    let special_fresh = !a.contains(special);
    a.insert(special);

    let ek = canonical::build_ek(table, k, n)?;
    let gap = ek.size as i64 - a.len() as i64;
    let normalized_gap = gap as f64 * ln_ln(n)? / n as f64;

    let bracket_holds =
        table.primorial(l + 1)? <= n_big && n_big < table.primorial(l + 2)?;
    // certificate: p_1..p_k cover everything but special, and special shares
    // a factor with every other member, so it extends no coprime clique
    let cover: Vec<u64> = table.primes()[..k].to_vec();
    let mut rest = a.clone();
    rest.remove(special);
    let cover_ok = match clique::clique_upper_bound_by_prime_cover(&rest, &cover) {
        Ok(bound) => bound <= k as u64,
        Err(_) => false,
    };
    let special_glued = rest.iter().all(|m| gcd(m, special) > 1);
    let a_in_ck = cover_ok && special_glued && special_fresh;
    let a_escapes_e = a.contains(special) && cover.iter().all(|&p| special % p != 0);

    Ok(Theorem4Report {
        k,
        n,
        l,
        a,
        special,
        ek_size: ek.size,
        gap,
        normalized_gap,
        checks: Theorem4Checks {
            bracket_holds,
            a_in_ck,
            a_escapes_e,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::SearchOptions;

    fn table() -> PrimeTable {
        PrimeTable::build(200).unwrap()
    }

    #[test]
    fn window_t8_l1() {
        // p_8 = 19, p_9 = 23, p_10 = 29: window [529, 551)
        let t = table();
        for (n, b_size, e_size, a_size) in
            [(529, 433, 436, 434), (540, 444, 447, 445), (550, 452, 455, 453)]
        {
            let r = build_theorem1(&t, 8, 1, n).unwrap();
            assert!(r.checks.all(), "n = {n}: {:?}", r.checks);
            assert_eq!(r.b.len(), b_size);
            assert_eq!(r.e.len(), e_size);
            assert_eq!(r.a.len(), a_size);
            assert_eq!(r.c.to_vec(), vec![437]); // 19 * 23
            assert_eq!(r.d.to_vec(), vec![19, 361]);
            assert!(r.dprime.is_empty());
            assert_eq!(r.delta, -2);
        }
    }

    #[test]
    fn window_boundaries_rejected() {
        let t = table();
        assert!(matches!(
            build_theorem1(&t, 8, 1, 528),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            build_theorem1(&t, 8, 1, 551),
            Err(Error::PreconditionViolated(_))
        ));
        // p_9 * p_11 = 23 * 31 = 713 <= p_10^2 = 841
        assert!(matches!(
            build_theorem1(&t, 9, 1, 900),
            Err(Error::PreconditionViolated(_))
        ));
        // p_1^2 = 4 <= p_3 = 5: the square condition fails at t = 1
        assert!(matches!(
            build_theorem1(&t, 1, 1, 9),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(build_theorem1(&t, 0, 1, 529).is_err());
        assert!(build_theorem1(&t, 8, 0, 529).is_err());
    }

    #[test]
    fn window_t27_l2() {
        // p_27 = 103, p_28 = 107, p_29 = 109, p_30 = 113, p_31 = 127:
        // window [12769, 13081), two-block shape with nonempty dprime
        let t = PrimeTable::build(300).unwrap();
        for n in [12769, 13000, 13080] {
            let r = build_theorem1(&t, 27, 2, n).unwrap();
            assert!(r.checks.all(), "n = {n}: {:?}", r.checks);
            assert_eq!(r.c.to_vec(), vec![11021, 11227, 11639, 11663, 12091]);
            assert_eq!(r.d.to_vec(), vec![103, 107, 10609, 11449]);
            assert_eq!(r.dprime.to_vec(), vec![12317]); // 109 * 113
            assert_eq!(r.delta, -3);
            assert_eq!(r.a.difference(&r.e).to_vec(), vec![12317]);
        }
    }

    #[test]
    fn membership_cross_checked_by_exact_search() {
        let t = table();
        let r = build_theorem1(&t, 8, 1, 529).unwrap();
        assert!(r.a.len() <= 2000);
        let opts = SearchOptions::default();
        assert!(clique::is_in_ck(&r.a, 8, &opts).unwrap());
        assert!(!r.b.is_empty() && r.b.is_disjoint(&r.c.union(&r.d).union(&r.dprime)));
    }

    #[test]
    fn matching_helper() {
        assert_eq!(max_matching(2, &[(0, 1)]).unwrap(), 1);
        assert_eq!(max_matching(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(), 2);
        assert_eq!(max_matching(4, &[(0, 1), (1, 2)]).unwrap(), 1);
        // odd cycle: 5 vertices allow only 2 disjoint edges
        assert_eq!(
            max_matching(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap(),
            2
        );
        assert_eq!(max_matching(3, &[]).unwrap(), 0);
        assert!(max_matching(21, &[]).is_err());
    }

    #[test]
    fn bracket_construction_small() {
        let t = table();
        let r = build_theorem4(&t, 1, 2310).unwrap();
        assert_eq!(r.l, 4);
        assert_eq!(r.special, 105); // 3 * 5 * 7
        assert_eq!(r.a.len(), 628);
        assert_eq!(r.ek_size, 1155);
        assert_eq!(r.gap, 527);
        assert!(r.checks.all());
        assert!((r.normalized_gap - 0.4670104803).abs() < 1e-9);

        let r = build_theorem4(&t, 2, 2310).unwrap();
        assert_eq!(r.special, 35);
        assert_eq!(r.a.len(), 485);
        assert_eq!(r.gap, 1055);
        assert!(r.checks.all());

        let r = build_theorem4(&t, 3, 2310).unwrap();
        assert_eq!(r.special, 7);
        assert_eq!(r.a.len(), 243);
        assert_eq!(r.gap, 1451);
        assert!(r.checks.all());
    }

    #[test]
    fn bracket_boundaries() {
        let t = table();
        assert!(matches!(
            build_theorem4(&t, 1, 29),
            Err(Error::PreconditionViolated(_))
        ));
        let r = build_theorem4(&t, 1, 30).unwrap();
        assert_eq!(r.l, 2);
        assert_eq!(r.special, 3);
        assert_eq!(r.a.to_vec(), vec![3, 6, 12, 18, 24, 30]);
        assert_eq!(r.gap, 15 - 6);
        assert!(r.checks.all());
    }

    #[test]
    fn bracket_membership_cross_checked() {
        let t = table();
        let opts = SearchOptions::default();
        for k in 1..=3usize {
            let r = build_theorem4(&t, k, 2310).unwrap();
            assert!(r.a.len() <= 2000);
            assert!(clique::is_in_ck(&r.a, k, &opts).unwrap());
        }
    }
}
