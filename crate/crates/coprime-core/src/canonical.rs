use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::primes::PrimeTable;
use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Zero};

/// Which canonical family a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalKind {
    /// Multiples of one of the first k primes.
    Ek,
    /// Multiples of one of p_1..p_{k-1} or p_{k+1} (p_k skipped).
    Bk,
}

/// A canonical set over [1, n] with its exact densities.
#[derive(Debug, Clone)]
pub struct CanonicalSetReport {
    pub kind: CanonicalKind,
    pub k: usize,
    pub n: u64,
    pub set: IntSet,
    pub size: u64,
    /// Asymptotic density 1 - phi(M)/M of the full congruence family.
    pub density_exact: BigRational,
    /// size / n, the realized density on [1, n].
    pub prefix_density: BigRational,
}

/// Count of m in [1, n] divisible by at least one of `primes`, by
/// inclusion-exclusion with products pruned above n.
pub fn count_multiples_any(primes: &[u64], n: u64) -> u64 {
    fn rec(primes: &[u64], start: usize, prod: u64, n: u64, sign: i64, total: &mut i64) {
        for j in start..primes.len() {
            // primes ascend, so once a product clears n every later one does
            match prod.checked_mul(primes[j]) {
                Some(p) if p <= n => {
                    *total += sign * (n / p) as i64;
                    rec(primes, j + 1, p, n, -sign, total);
                }
                _ => break,
            }
        }
    }
    let mut total = 0i64;
    rec(primes, 0, 1, n, 1, &mut total);
    total as u64
}

fn build_from_divisors(
    kind: CanonicalKind,
    k: usize,
    n: u64,
    divisors: &[u64],
    density: BigRational,
) -> CanonicalSetReport {
    let mut set = IntSet::new(n);
    for &p in divisors {
        let mut m = p;
        while m <= n {
            set.insert(m);
            m += p;
        }
    }
    let size = set.len();
    let by_inclusion_exclusion = count_multiples_any(divisors, n);
    assert_eq!(
        size, by_inclusion_exclusion,
        "membership count and inclusion-exclusion disagree"
    );
    let prefix_density = if n == 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::from(size), BigInt::from(n))
    };
    CanonicalSetReport {
        kind,
        k,
        n,
        set,
        size,
        density_exact: density,
        prefix_density,
    }
}

/// 1 - phi(M)/M for the squarefree modulus M = product of `primes`.
fn density_of_primes(primes: &[u64]) -> BigRational {
    let mut modulus = BigUint::one();
    let mut phi = BigUint::one();
    for &p in primes {
        modulus *= BigUint::from(p);
        phi *= BigUint::from(p - 1);
    }
    BigRational::one()
        - BigRational::new(
            BigInt::from(phi),
            BigInt::from(modulus),
        )
}

/// E_k(n): integers in [1, n] divisible by one of the first k primes.
pub fn build_ek(table: &PrimeTable, k: usize, n: u64) -> Result<CanonicalSetReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".to_string()));
    }
    IntSet::check_universe(n)?;
    if k > 0 {
        table.nth_prime(k)?;
    }
    let divisors: Vec<u64> = table.primes()[..k].to_vec();
    Ok(build_from_divisors(
        CanonicalKind::Ek,
        k,
        n,
        &divisors,
        density_of_primes(&divisors),
    ))
}

/// B_k(n): integers in [1, n] divisible by one of p_1..p_{k-1} or p_{k+1}.
pub fn build_bk(table: &PrimeTable, k: usize, n: u64) -> Result<CanonicalSetReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".to_string()));
    }
    IntSet::check_universe(n)?;
    if k == 0 {
        return Err(Error::InvalidArgument(
            "the skipped-prime family needs k >= 1".to_string(),
        ));
    }
    table.nth_prime(k + 1)?;
    let mut divisors: Vec<u64> = table.primes()[..k - 1].to_vec();
    divisors.push(table.nth_prime(k + 1)?);
    Ok(build_from_divisors(
        CanonicalKind::Bk,
        k,
        n,
        &divisors,
        density_of_primes(&divisors),
    ))
}

/// Density of the E_k family, 1 - phi(P_k)/P_k; zero when k = 0.
pub fn density_ek(table: &PrimeTable, k: usize) -> Result<BigRational> {
    if k > 0 {
        table.nth_prime(k)?;
    }
    Ok(density_of_primes(&table.primes()[..k]))
}
