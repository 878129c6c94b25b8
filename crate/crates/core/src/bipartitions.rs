//! Canonical bipartitions `S|S̄` of `n` parties.

use std::fmt;

use crate::error::{Error, Result};

/// One unordered split of `n` parties, stored by its canonical side `S`:
/// the strictly smaller side, or for an even split the side holding party 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    parties: Vec<usize>,
    n: usize,
}

impl Bipartition {
    /// Builds the split separating `side` from the rest. Either side of the cut
    /// may be passed; the result is canonical.
    pub fn new(side: &[usize], n: usize) -> Result<Self> {
        let mut in_side = vec![false; n];
        for &p in side {
            if p >= n {
                return Err(Error::InvalidPartition(format!(
                    "party {p} out of range for n = {n}"
                )));
            }
            if in_side[p] {
                return Err(Error::InvalidPartition(format!("party {p} listed twice")));
            }
            in_side[p] = true;
        }
        if side.is_empty() || side.len() == n {
            return Err(Error::InvalidPartition(
                "side must be a nonempty proper subset".into(),
            ));
        }
        let k = side.len();
        let keep = 2 * k < n || (2 * k == n && in_side[0]);
        let parties = (0..n).filter(|&p| in_side[p] == keep).collect();
        Ok(Self { parties, n })
    }

    /// Side `S`, sorted.
    pub fn parties(&self) -> &[usize] {
        &self.parties
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|p| self.parties.binary_search(p).is_err())
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.parties.len()
    }

    /// `min(dim S, dim S̄)` for the given local dimensions.
    pub fn min_dim(&self, local_dims: &[usize]) -> usize {
        let s: usize = self.parties.iter().map(|&p| local_dims[p]).product();
        let rest: usize = self.complement().iter().map(|&p| local_dims[p]).product();
        s.min(rest)
    }

    /// Parses the `"01|23"` form produced by `Display` (comma separated when `n > 10`).
    pub fn parse(label: &str, n: usize) -> Result<Self> {
        let (left, right) = label
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("bipartition {label:?} has no '|'")))?;
        let side = parse_side(left, n)?;
        let other = parse_side(right, n)?;
        let mut all: Vec<usize> = side.iter().chain(&other).copied().collect();
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidPartition(format!(
                "{label:?} does not split {n} parties"
            )));
        }
        Self::new(&side, n)
    }
}

fn parse_side(text: &str, n: usize) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("bad party list {text:?}"));
    if n > 10 || text.contains(',') {
        text.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect()
    } else {
        text.chars()
            .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect()
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, parties: &[usize], n: usize) -> fmt::Result {
    let sep = if n > 10 { "," } else { "" };
    for (i, p) in parties.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{p}")?;
    }
    Ok(())
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_side(f, &self.parties, self.n)?;
        f.write_str("|")?;
        write_side(f, &self.complement(), self.n)
    }
}

/// Every canonical bipartition of `n` parties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionSet {
    n: usize,
    members: Vec<Bipartition>,
}

impl BipartitionSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Bipartition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Bipartition> {
        self.members.iter()
    }
}

impl<'a> IntoIterator for &'a BipartitionSet {
    type Item = &'a Bipartition;
    type IntoIter = std::slice::Iter<'a, Bipartition>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 parties, got {n}"
        )));
    }
    if n > 63 {
        return Err(Error::InvalidArgument(format!(
            "{n} parties is too many to enumerate"
        )));
    }
    Ok(())
}

/// All canonical bipartitions, ordered by `|S|` and then lexicographically.
pub fn enumerate_bipartitions(n: usize) -> Result<BipartitionSet> {
    check_n(n)?;
    let mut members = Vec::new();
    for k in 1..=n / 2 {
        for_each_subset(n, k, |subset| {
            if 2 * k < n || subset[0] == 0 {
                members.push(Bipartition {
                    parties: subset.to_vec(),
                    n,
                });
            }
        });
    }
    Ok(BipartitionSet { n, members })
}

/// Visits the `k`-subsets of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128) as u64
}

/// Number of bipartitions `c(β)`: `Σ_{m=1}^{(n-1)/2} C(n, m)` for odd `n`, and
/// `Σ_{m=1}^{n/2-1} C(n, m) + C(n, n/2)/2` for even `n`.
pub fn cardinality(n: usize) -> Result<u64> {
    check_n(n)?;
    let n64 = n as u64;
    Ok(if n % 2 == 1 {
        (1..=(n64 - 1) / 2).map(|m| binomial(n64, m)).sum()
    } else {
        (1..n64 / 2).map(|m| binomial(n64, m)).sum::<u64>() + binomial(n64, n64 / 2) / 2
    })
}

/// Weight of the size-`k` cut class: `C(n, k)`, halved for the middle class of even `n`.
pub fn class_weight(n: usize, k: usize) -> f64 {
    let c = binomial(n as u64, k as u64) as f64;
    if 2 * k == n {
        c / 2.0
    } else {
        c
    }
}
