use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A subset of coordinates `{0..n}`, stored sorted.
///
/// Displayed and serialized 1-based, the way coordinate sets are usually
/// written down.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet {
    n: usize,
    indices: Vec<usize>,
}

impl SupportSet {
    /// From 0-based, strictly increasing indices.
    pub fn new(n: usize, indices: Vec<usize>) -> Result<SupportSet> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedSupport);
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(Error::IndexOutOfRange { index: last, len: n });
            }
        }
        Ok(SupportSet { n, indices })
    }

    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<SupportSet> {
        if indices.contains(&0) {
            return Err(Error::IndexOutOfRange { index: 0, len: n });
        }
        SupportSet::new(n, indices.iter().map(|i| i - 1).collect())
    }

    pub fn full(n: usize) -> SupportSet {
        SupportSet {
            n,
            indices: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> SupportSet {
        SupportSet {
            n: self.n,
            indices: (0..self.n).filter(|i| !self.contains(*i)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &SupportSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SupportRepr {
    n: usize,
    indices: Vec<usize>,
}

impl Serialize for SupportSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SupportRepr {
            n: self.n,
            indices: self.one_based(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SupportSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SupportRepr::deserialize(d)?;
        SupportSet::from_one_based(repr.n, &repr.indices).map_err(serde::de::Error::custom)
    }
}

/// Length-n vector holding only its nonzero entries, sorted by index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseVector {
    n: usize,
    entries: Vec<(usize, u32)>,
}

impl SparseVector {
    pub fn zero(n: usize) -> SparseVector {
        SparseVector {
            n,
            entries: Vec::new(),
        }
    }

    /// Entries must have strictly increasing indices; zeros are dropped.
    pub fn from_entries(n: usize, entries: Vec<(usize, u32)>) -> Result<SparseVector> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::UnsortedSupport);
        }
        if let Some(&(last, _)) = entries.last() {
            if last >= n {
                return Err(Error::IndexOutOfRange { index: last, len: n });
            }
        }
        Ok(SparseVector {
            n,
            entries: entries.into_iter().filter(|&(_, v)| v != 0).collect(),
        })
    }

    pub fn from_dense(v: &[u32]) -> SparseVector {
        SparseVector {
            n: v.len(),
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(i, &x)| (i, x))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0; self.n];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn weight(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> u32 {
        self.entries
            .binary_search_by_key(&i, |&(j, _)| j)
            .map_or(0, |k| self.entries[k].1)
    }

    pub fn support(&self) -> SupportSet {
        SupportSet {
            n: self.n,
            indices: self.entries.iter().map(|&(i, _)| i).collect(),
        }
    }
}

/// Size-k subsets of {0..n} in lexicographic order, yielded by reference to
/// an internal buffer.
pub struct Combinations {
    n: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Combinations {
        Combinations {
            n,
            current: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    /// Starts from the given subset (inclusive).
    pub fn starting_at(n: usize, start: Vec<usize>) -> Combinations {
        Combinations {
            n,
            done: start.len() > n,
            current: start,
            started: false,
        }
    }

    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.current[i] < self.n - k + i {
                break;
            }
        }
        self.current[i] += 1;
        for j in i + 1..k {
            self.current[j] = self.current[j - 1] + 1;
        }
        Some(&self.current)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_in_order() {
        let mut c = Combinations::new(4, 2);
        let mut all = Vec::new();
        while let Some(s) = c.next_subset() {
            all.push(s.to_vec());
        }
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty = Combinations::new(3, 0);
        assert_eq!(empty.next_subset(), Some(&[][..]));
        assert_eq!(empty.next_subset(), None);
        assert_eq!(Combinations::new(2, 3).next_subset(), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(9, 2), 36);
        assert_eq!(binomial(18, 4), 3060);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn support_set_round_trip() {
        let s = SupportSet::from_one_based(9, &[1, 7]).unwrap();
        assert_eq!(s.indices(), &[0, 6]);
        assert_eq!(s.to_string(), "{1, 7}");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":9,"indices":[1,7]}"#);
        let back: SupportSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(SupportSet::new(3, vec![2, 1]).is_err());
        assert!(SupportSet::new(3, vec![3]).is_err());
        assert_eq!(s.complement().len(), 7);
    }

    #[test]
    fn sparse_vector_basics() {
        let v = SparseVector::from_dense(&[0, 3, 0, 1]);
        assert_eq!(v.weight(), 2);
        assert_eq!(v.get(1), 3);
        assert_eq!(v.get(2), 0);
        assert_eq!(v.support().indices(), &[1, 3]);
        assert_eq!(v.to_dense(), vec![0, 3, 0, 1]);
        assert!(SparseVector::from_entries(4, vec![(2, 1), (1, 1)]).is_err());
    }
}
