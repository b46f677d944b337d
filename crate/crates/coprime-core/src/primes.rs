use crate::error::{Error, Result};
use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::One;

/// Sieved primes up to a fixed limit, with 1-indexed access (p_1 = 2) and the
/// gap list d_i = p_{i+1} - p_i.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    gaps: Vec<u64>,
}

impl PrimeTable {
    /// Sieve of Eratosthenes up to `limit` inclusive. Limits below 2 are
    /// rejected rather than producing an empty table.
    pub fn build(limit: u64) -> Result<PrimeTable> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "prime table limit must be at least 2, got {limit}"
            )));
        }
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        let mut primes = Vec::new();
        for m in 2..=n {
            if !composite[m] {
                primes.push(m as u64);
                let mut j = m * m;
                while j <= n {
                    composite[j] = true;
                    j += m;
                }
            }
        }
        let gaps = primes.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(PrimeTable {
            limit,
            primes,
            gaps,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Number of primes in the table.
    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Gap list; entry i (0-based) is p_{i+2} - p_{i+1}.
    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    fn need(&self, i: usize) -> Result<()> {
        if i == 0 {
            return Err(Error::InvalidArgument(
                "prime indices are 1-based".to_string(),
            ));
        }
        if i > self.primes.len() {
            return Err(Error::OutOfRange {
                limit: self.limit,
                have: self.primes.len(),
                needed: i,
            });
        }
        Ok(())
    }

    /// The i-th prime, 1-indexed (p_1 = 2). An index past the table is an
    /// error; callers rebuild with a larger limit.
    pub fn nth_prime(&self, i: usize) -> Result<u64> {
        self.need(i)?;
        Ok(self.primes[i - 1])
    }

    /// Gap d_i = p_{i+1} - p_i, 1-indexed.
    pub fn gap(&self, i: usize) -> Result<u64> {
        self.need(i + 1)?;
        Ok(self.gaps[i - 1])
    }

    /// Product of the first k primes; the empty product is 1.
    pub fn primorial(&self, k: usize) -> Result<BigUint> {
        if k > 0 {
            self.need(k)?;
        }
        let mut out = BigUint::one();
        for &p in &self.primes[..k] {
            out *= BigUint::from(p);
        }
        Ok(out)
    }

    /// d_{t+2l-1} / max{d_t, ..., d_{t+2l-2}} as an exact rational.
    pub fn gap_ratio(&self, t: usize, l: usize) -> Result<BigRational> {
        if t == 0 || l == 0 {
            return Err(Error::InvalidArgument(
                "gap_ratio needs t >= 1 and l >= 1".to_string(),
            ));
        }
        self.need(t + 2 * l)?;
        let num = self.gaps[t + 2 * l - 2];
        let den = *self.gaps[t - 1..t + 2 * l - 2].iter().max().unwrap();
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// All t <= t_max with p_t * p_{t+2l} > p_{t+2l-1}^2; `strict` adds
    /// p_t^2 > p_{t+2l} and 2 p_t > p_{t+2l}. Integer arithmetic only.
    pub fn lemma1_witnesses(&self, l: usize, strict: bool, t_max: usize) -> Result<Vec<usize>> {
        if l == 0 || t_max == 0 {
            return Err(Error::InvalidArgument(
                "witness search needs l >= 1 and t_max >= 1".to_string(),
            ));
        }
        self.need(t_max + 2 * l)?;
        let mut out = Vec::new();
        for t in 1..=t_max {
            let pt = self.primes[t - 1] as u128;
            let phigh = self.primes[t + 2 * l - 1] as u128;
            let pmid = self.primes[t + 2 * l - 2] as u128;
            if pt * phigh > pmid * pmid && (!strict || (pt * pt > phigh && 2 * pt > phigh)) {
                out.push(t);
            }
        }
        Ok(out)
    }
}

/// Euler's totient via full trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for positive integers");
    let mut n = n;
    let mut phi = 1u64;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            let mut pk = d - 1;
            while n % d == 0 {
                n /= d;
                pk *= d;
            }
            phi *= pk;
        }
        d += 1;
    }
    if n > 1 {
        phi *= n - 1;
    }
    phi
}

/// First `k` primes regardless of any table limit (incremental trial
/// division; used where a caller has only k, not a sieve bound).
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(k);
    let mut c = 2u64;
    while out.len() < k {
        if out.iter().take_while(|&&p| p * p <= c).all(|&p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn build_basics() {
        let t = PrimeTable::build(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        let t = PrimeTable::build(40).unwrap();
        assert_eq!(t.len(), 12);
        assert_eq!(t.nth_prime(12).unwrap(), 37);
        assert!(matches!(
            PrimeTable::build(1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn nth_prime_indexing() {
        let t = PrimeTable::build(100).unwrap();
        assert_eq!(t.nth_prime(1).unwrap(), 2);
        assert_eq!(t.nth_prime(8).unwrap(), 19);
        assert!(matches!(t.nth_prime(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(t.nth_prime(26), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn gaps_match_prime_differences() {
        let t = PrimeTable::build(1000).unwrap();
        for i in 1..t.len() {
            assert_eq!(
                t.gap(i).unwrap(),
                t.nth_prime(i + 1).unwrap() - t.nth_prime(i).unwrap()
            );
        }
    }

    #[test]
    fn primorials() {
        let t = PrimeTable::build(40).unwrap();
        assert_eq!(t.primorial(0).unwrap(), BigUint::from(1u32));
        assert_eq!(t.primorial(3).unwrap(), BigUint::from(30u32));
        assert_eq!(t.primorial(5).unwrap(), BigUint::from(2310u32));
        assert!(t.primorial(13).is_err());
        // recurrence against nth_prime
        let mut acc = BigUint::one();
        for k in 1..=12 {
            acc *= BigUint::from(t.nth_prime(k).unwrap());
            assert_eq!(t.primorial(k).unwrap(), acc);
        }
    }

    #[test]
    fn totient_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(30), 8);
        assert_eq!(euler_phi(2310), 480);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(euler_phi(64), 32);
    }

    #[test]
    fn gap_ratio_values() {
        let t = PrimeTable::build(100).unwrap();
        // d_9/d_8 = (29-23)/(23-19)
        let r = t.gap_ratio(8, 1).unwrap();
        assert_eq!(r, BigRational::new(BigInt::from(3), BigInt::from(2)));
        assert_eq!(
            t.gap_ratio(1, 1).unwrap(),
            BigRational::from(BigInt::from(2))
        );
        assert_eq!(
            t.gap_ratio(1, 2).unwrap(),
            BigRational::from(BigInt::from(2))
        );
        assert!(t.gap_ratio(24, 1).is_err());
    }

    #[test]
    fn witnesses_l1() {
        let t = PrimeTable::build(200).unwrap();
        let w = t.lemma1_witnesses(1, false, 10).unwrap();
        assert_eq!(w, vec![1, 3, 5, 7, 8, 10]);
        let ws = t.lemma1_witnesses(1, true, 10).unwrap();
        assert_eq!(ws, vec![5, 7, 8, 10]);
        // t=1 fails p_t^2 > p_{t+2} (4 > 5 is false); t=3 fails 2 p_t > p_{t+2}
        // (10 > 11 is false); both excluded from strict mode.
        assert!(!ws.contains(&1) && !ws.contains(&3));
    }

    #[test]
    fn witnesses_l2() {
        let t = PrimeTable::build(1000).unwrap();
        let w = t.lemma1_witnesses(2, true, 40).unwrap();
        assert_eq!(w, vec![27]);
        // p_27 * p_31 > p_30^2 with 103 * 127 = 13081 > 113^2 = 12769
        assert_eq!(t.nth_prime(27).unwrap(), 103);
        assert_eq!(t.nth_prime(31).unwrap(), 127);
    }

    #[test]
    fn witnesses_need_table_room() {
        let t = PrimeTable::build(5).unwrap(); // primes 2, 3, 5
        assert!(matches!(
            t.lemma1_witnesses(1, false, 2),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn witnesses_reverify_and_nonwitnesses_fail() {
        let t = PrimeTable::build(5000).unwrap();
        for l in [1usize, 2] {
            let t_max = t.len() - 2 * l;
            let w = t.lemma1_witnesses(l, false, t_max).unwrap();
            let strict = t.lemma1_witnesses(l, true, t_max).unwrap();
            for ti in 1..=t_max {
                let pt = BigUint::from(t.nth_prime(ti).unwrap());
                let pmid = BigUint::from(t.nth_prime(ti + 2 * l - 1).unwrap());
                let phigh = BigUint::from(t.nth_prime(ti + 2 * l).unwrap());
                let main = &pt * &phigh > &pmid * &pmid;
                let extra = &pt * &pt > phigh.clone() && BigUint::from(2u32) * &pt > phigh;
                assert_eq!(w.contains(&ti), main);
                assert_eq!(strict.contains(&ti), main && extra);
            }
        }
    }

    #[test]
    fn first_primes_matches_table() {
        let t = PrimeTable::build(1000).unwrap();
        assert_eq!(first_primes(t.len()), t.primes());
        assert!(first_primes(0).is_empty());
    }

    #[test]
    fn gap_ratio_is_exact_rational() {
        let t = PrimeTable::build(10000).unwrap();
        for (tt, l) in [(1, 1), (5, 2), (30, 3), (100, 1)] {
            let r = t.gap_ratio(tt, l).unwrap();
            let num = t.gap(tt + 2 * l - 1).unwrap();
            let den = (tt..tt + 2 * l - 1)
                .map(|i| t.gap(i).unwrap())
                .max()
                .unwrap();
            assert_eq!(
                (r.numer().to_u64().unwrap() * den),
                (r.denom().to_u64().unwrap() * num)
            );
        }
    }
}
