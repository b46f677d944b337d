use crate::error::{Error, Result};

/// Dense set of integers drawn from the universe [1, n].
///
/// Membership is bit `m - 1` of the backing words. Equality is element-wise:
/// two sets with different universes but the same members compare equal.
#[derive(Debug, Clone)]
pub struct IntSet {
    n: u64,
    words: Vec<u64>,
}

/// Largest universe a dense set may span; one set at the cap takes 512 MiB.
pub const MAX_UNIVERSE: u64 = 1 << 32;

impl IntSet {
    /// Rejects universes whose dense representation would exhaust memory.
    pub fn check_universe(n: u64) -> Result<()> {
        if n > MAX_UNIVERSE {
            return Err(Error::InvalidArgument(format!(
                "n = {n} exceeds the largest supported interval length {MAX_UNIVERSE}"
            )));
        }
        Ok(())
    }

    /// Empty set over the universe [1, n].
    pub fn new(n: u64) -> IntSet {
        IntSet {
            n,
            words: vec![0; (n as usize + 63) / 64],
        }
    }

    /// The full universe [1, n].
    pub fn full(n: u64) -> IntSet {
        let mut s = IntSet::new(n);
        for m in 1..=n {
            s.insert(m);
        }
        s
    }

    /// Builds a set from members, rejecting anything outside [1, n].
    pub fn from_members<I: IntoIterator<Item = u64>>(n: u64, members: I) -> Result<IntSet> {
        IntSet::check_universe(n)?;
        let mut s = IntSet::new(n);
        for m in members {
            if m < 1 || m > n {
                return Err(Error::InvalidArgument(format!(
                    "element {m} outside universe [1, {n}]"
                )));
            }
            s.insert(m);
        }
        Ok(s)
    }

    pub fn universe(&self) -> u64 {
        self.n
    }

    pub fn insert(&mut self, m: u64) {
        assert!(m >= 1 && m <= self.n, "element {m} outside [1, {}]", self.n);
        self.words[(m as usize - 1) / 64] |= 1 << ((m - 1) % 64);
    }

    pub fn remove(&mut self, m: u64) {
        if m >= 1 && m <= self.n {
            self.words[(m as usize - 1) / 64] &= !(1 << ((m - 1) % 64));
        }
    }

    pub fn contains(&self, m: u64) -> bool {
        m >= 1 && m <= self.n && self.words[(m as usize - 1) / 64] >> ((m - 1) % 64) & 1 == 1
    }

    pub fn len(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros();
                    w &= w - 1;
                    Some(i as u64 * 64 + b as u64 + 1)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        let mut out = IntSet::new(self.n.max(other.n));
        for (i, w) in self.words.iter().enumerate() {
            out.words[i] |= w;
        }
        for (i, w) in other.words.iter().enumerate() {
            out.words[i] |= w;
        }
        out
    }

    pub fn intersection(&self, other: &IntSet) -> IntSet {
        let mut out = IntSet::new(self.n.min(other.n));
        for i in 0..out.words.len() {
            out.words[i] = self.words[i] & other.words[i];
        }
        out
    }

    pub fn difference(&self, other: &IntSet) -> IntSet {
        let mut out = self.clone();
        for (i, w) in other.words.iter().enumerate() {
            if i < out.words.len() {
                out.words[i] &= !w;
            }
        }
        out
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn is_disjoint(&self, other: &IntSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }
}

impl PartialEq for IntSet {
    fn eq(&self, other: &IntSet) -> bool {
        let (short, long) = if self.words.len() <= other.words.len() {
            (&self.words, &other.words)
        } else {
            (&other.words, &self.words)
        };
        short.iter().zip(long.iter()).all(|(a, b)| a == b)
            && long[short.len()..].iter().all(|&w| w == 0)
    }
}

impl Eq for IntSet {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_iter() {
        let mut s = IntSet::new(10);
        s.insert(1);
        s.insert(7);
        s.insert(10);
        assert!(s.contains(1) && s.contains(7) && s.contains(10));
        assert!(!s.contains(2) && !s.contains(11));
        assert_eq!(s.to_vec(), vec![1, 7, 10]);
        assert_eq!(s.len(), 3);
        s.remove(7);
        assert_eq!(s.to_vec(), vec![1, 10]);
    }

    #[test]
    fn from_members_validates_bounds() {
        assert!(IntSet::from_members(5, [1, 5]).is_ok());
        assert!(IntSet::from_members(5, [0]).is_err());
        assert!(IntSet::from_members(5, [6]).is_err());
    }

    #[test]
    fn equality_is_element_wise() {
        let a = IntSet::from_members(10, [2, 4]).unwrap();
        let b = IntSet::from_members(100, [2, 4]).unwrap();
        let c = IntSet::from_members(10, [2, 5]).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn set_algebra() {
        let a = IntSet::from_members(10, [1, 2, 3]).unwrap();
        let b = IntSet::from_members(10, [3, 4]).unwrap();
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.difference(&b).to_vec(), vec![1, 2]);
        assert!(!a.is_disjoint(&b));
        assert!(a.intersection(&b).is_subset(&a));
        assert!(IntSet::new(4).is_empty());
        assert_eq!(IntSet::full(4).to_vec(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn universes_beyond_the_cap_are_refused_without_allocating() {
        assert!(IntSet::check_universe(MAX_UNIVERSE).is_ok());
        assert!(IntSet::check_universe(MAX_UNIVERSE + 1).is_err());
        assert!(IntSet::check_universe(u64::MAX).is_err());
    }
}
