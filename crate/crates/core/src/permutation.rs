//! Vertex relabelings.
//!
//! Stored 0-based. The text form is 1-based: `"2 3 1"` maps 1->2, 2->3, 3->1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v >= n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{map:?} is not a bijection on 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { map })
    }

    pub fn from_one_based(map: &[usize]) -> Result<Self> {
        let zero: Option<Vec<usize>> = map.iter().map(|&v| v.checked_sub(1)).collect();
        let zero = zero.ok_or_else(|| Error::InvalidPermutation("labels start at 1".into()))?;
        Self::from_vec(zero)
    }

    /// Swap of `i` and `j`, everything else fixed.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        if i >= n || j >= n {
            return Err(Error::InvalidPermutation(format!("({i} {j}) out of range for n = {n}")));
        }
        let mut p = Self::identity(n);
        p.map.swap(i, j);
        Ok(p)
    }

    /// The full cycle `i -> i + 1 (mod n)`.
    pub fn cycle(n: usize) -> Self {
        Permutation {
            map: (0..n).map(|i| (i + 1) % n.max(1)).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    #[inline]
    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }
}

/// `outer ∘ inner`: apply `inner` first.
pub fn compose(outer: &Permutation, inner: &Permutation) -> Result<Permutation> {
    if outer.len() != inner.len() {
        return Err(Error::SizeMismatch(format!(
            "composing permutations on {} and {} points",
            outer.len(),
            inner.len()
        )));
    }
    Ok(Permutation {
        map: inner.map.iter().map(|&v| outer.map[v]).collect(),
    })
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Advances `perm` to the next permutation in lexicographic order.
/// Returns `false` (leaving `perm` sorted ascending) after the last one.
pub fn next_permutation(perm: &mut [usize]) -> bool {
    let len = perm.len();
    if len < 2 {
        return false;
    }
    let mut i = len - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        perm.reverse();
        return false;
    }
    let mut j = len - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Calls `f` on every permutation of `0..n` in lexicographic order, without
/// allocating per permutation.
pub fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

/// Like [`for_each_permutation`] restricted to permutations with
/// `perm[0] == first`. Concatenating over `first = 0..n` gives the full
/// lexicographic order, so work can be split by first image.
pub fn for_each_permutation_with_first<F: FnMut(&[usize])>(n: usize, first: usize, mut f: F) {
    assert!(first < n, "first image {first} out of range for n = {n}");
    let mut perm = Vec::with_capacity(n);
    perm.push(first);
    perm.extend((0..n).filter(|&v| v != first));
    loop {
        f(&perm);
        if !next_permutation(&mut perm[1..]) {
            break;
        }
    }
}

/// Lexicographic iterator over all permutations of `0..n`.
#[derive(Clone, Debug)]
pub struct Permutations {
    current: Option<Vec<usize>>,
}

impl Permutations {
    pub(crate) fn new(n: usize) -> Self {
        Permutations {
            current: Some((0..n).collect()),
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.take()?;
        let mut next = cur.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(Permutation { map: cur })
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.map.iter().map(|v| (v + 1).to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let labels: std::result::Result<Vec<usize>, _> = s.split_whitespace().map(str::parse::<usize>).collect();
        let labels = labels.map_err(|e| Error::Parse(format!("bad permutation {s:?}: {e}")))?;
        Self::from_one_based(&labels)
    }
}
