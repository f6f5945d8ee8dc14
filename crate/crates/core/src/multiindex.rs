//! Finitely supported multi-indices, Cantor pairing and the graded
//! enumeration of `N^d` used to flatten tensor Hermite functions.
//!
//! Positions are 1-based throughout: `entries[0]` holds `alpha_1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Element of the index set of the chaos basis. Trailing zeros are never
/// stored, so the zero index is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        Self { entries }
    }

    /// `eps^l`: one at position `l` (1-based), zero elsewhere.
    pub fn unit(l: usize) -> Self {
        assert!(l >= 1, "unit multi-index positions start at 1");
        let mut entries = vec![0; l];
        entries[l - 1] = 1;
        Self { entries }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `alpha_l` for a 1-based position; zero beyond the support.
    pub fn get(&self, l: usize) -> u32 {
        if l == 0 {
            return 0;
        }
        self.entries.get(l - 1).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `|alpha|`
    pub fn order(&self) -> u64 {
        self.entries.iter().map(|&a| a as u64).sum()
    }

    /// Position of the last nonzero entry, 0 for the zero index.
    pub fn index_of(&self) -> usize {
        self.entries.len()
    }

    /// `alpha! = alpha_1! alpha_2! ...`
    pub fn factorial(&self) -> Result<f64> {
        let mut acc = 1.0f64;
        for &a in &self.entries {
            for j in 2..=a {
                acc *= j as f64;
            }
            if !acc.is_finite() {
                return Err(Error::FactorialOverflow(self.to_string()));
            }
        }
        Ok(acc)
    }

    /// `(2N)^{k alpha} = prod_j (2j)^{k alpha_j}`; `k` may be negative.
    pub fn weight(&self, k: f64) -> f64 {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(j, &a)| (2.0 * (j + 1) as f64).powf(k * a as f64))
            .product()
    }

    /// Entrywise sum in canonical form.
    pub fn sum(&self, other: &MultiIndex) -> MultiIndex {
        let (long, short) = if self.entries.len() >= other.entries.len() {
            (&self.entries, &other.entries)
        } else {
            (&other.entries, &self.entries)
        };
        let mut entries = long.clone();
        for (e, &s) in entries.iter_mut().zip(short.iter()) {
            *e += s;
        }
        MultiIndex { entries }
    }

    /// Nonzero positions with their multiplicities, as `(l, alpha_l)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(j, &a)| (j + 1, a))
    }
}

impl std::ops::Add for &MultiIndex {
    type Output = MultiIndex;

    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        self.sum(rhs)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("multi-index must be bracketed: {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Self::zero());
        }
        let entries = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("multi-index entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(entries))
    }
}

impl Serialize for MultiIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<u32>::deserialize(d).map(Self::new)
    }
}

/// Cantor diagonalization `z(i, j) = j + (i + j - 2)(i + j - 1)/2`, `i, j >= 1`.
pub fn cantor_pair(i: u64, j: u64) -> u64 {
    assert!(i >= 1 && j >= 1, "cantor_pair takes positive arguments");
    let s = i + j;
    j + (s - 2) * (s - 1) / 2
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(k: u64) -> (u64, u64) {
    assert!(k >= 1, "cantor_unpair takes a positive argument");
    // Diagonal t = i + j - 1 holds the values (t-1)t/2 + 1 ..= t(t+1)/2.
    let mut t = ((((8 * (k as u128) + 1) as f64).sqrt() - 1.0) / 2.0).floor() as u64;
    while t * (t + 1) / 2 < k {
        t += 1;
    }
    while t > 1 && (t - 1) * t / 2 >= k {
        t -= 1;
    }
    let j = k - (t - 1) * t / 2;
    let i = t + 1 - j;
    (i, j)
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
    }
    acc as u64
}

/// Graded-lexicographic bijection `N^d -> N` (1-based on both sides):
/// tuples are ordered by coordinate sum, ties broken lexicographically.
pub fn dim_rank(tuple: &[u64]) -> u64 {
    let d = tuple.len() as u64;
    assert!(d >= 1, "dim_rank needs at least one coordinate");
    assert!(tuple.iter().all(|&t| t >= 1), "coordinates start at 1");
    let total: u64 = tuple.iter().sum();
    // Tuples with a smaller coordinate sum: sum_{s=d}^{S-1} C(s-1, d-1) = C(S-1, d).
    let mut rank = binom(total - 1, d);
    let mut remaining = total;
    for (pos, &t) in tuple.iter().enumerate() {
        let rest = d - pos as u64 - 1;
        if rest == 0 {
            break;
        }
        for a in 1..t {
            // Tuples of `rest` positive entries summing to remaining - a.
            rank += binom(remaining - a - 1, rest - 1);
        }
        remaining -= t;
    }
    rank + 1
}

/// Inverse of [`dim_rank`] for dimension `d`.
pub fn dim_unrank(k: u64, d: usize) -> Vec<u64> {
    assert!(k >= 1 && d >= 1);
    let d64 = d as u64;
    let mut total = d64;
    while binom(total, d64) < k {
        total += 1;
    }
    let mut offset = k - 1 - binom(total - 1, d64);
    let mut out = Vec::with_capacity(d);
    let mut remaining = total;
    for pos in 0..d {
        let rest = d64 - pos as u64 - 1;
        if rest == 0 {
            out.push(remaining);
            break;
        }
        let mut a = 1;
        loop {
            let block = binom(remaining - a - 1, rest - 1);
            if offset < block {
                break;
            }
            offset -= block;
            a += 1;
        }
        out.push(a);
        remaining -= a;
    }
    out
}
