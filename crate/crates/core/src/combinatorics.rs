//! Exact binomials and sorted point sets.
//!
//! Points are 1-based integers. A [`PointSet`] is kept sorted, so the derived
//! ordering on two sets of equal size is the lexicographic order used for
//! block lists, array rows and columns.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A point of a design (also a cache index). Always `>= 1`.
pub type Point = u32;

/// `C(n, k)` with overflow detection. Returns 0 when `k > n`.
pub fn binom(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(Error::Overflow(format!("C({n},{k})")));
        }
    }
    Ok(acc as u64)
}

/// Binomial for parameters already known to be small. Panics on overflow.
pub(crate) fn c(n: u64, k: u64) -> u64 {
    binom(n, k).expect("binomial overflow at desk scale")
}

/// `a * b / d`, failing unless the quotient is an exact integer.
pub fn exact_quotient(a: u64, b: u64, d: u64, what: &str) -> Result<u64> {
    if d == 0 {
        return Err(Error::NonIntegral(format!("{what}: zero divisor")));
    }
    let num = u128::from(a) * u128::from(b);
    if num % u128::from(d) != 0 {
        return Err(Error::NonIntegral(format!("{what}: {num}/{d}")));
    }
    u64::try_from(num / u128::from(d)).map_err(|_| Error::Overflow(what.to_string()))
}

/// A sorted set of distinct points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PointSet(Vec<Point>);

impl PointSet {
    /// Builds a set from arbitrary points; sorts and removes duplicates.
    pub fn new<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut v: Vec<Point> = points.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PointSet(v)
    }

    pub fn empty() -> Self {
        PointSet(Vec::new())
    }

    /// `{lo, lo+1, ..., hi}`; empty when `hi < lo`.
    pub fn range(lo: Point, hi: Point) -> Self {
        PointSet((lo..=hi).collect())
    }

    /// Parses compact notation (`"1256"`, every point a single digit) or a
    /// separated list (`"1,2,5,6"`, `"1 2 5 6"`, `"1.2.5.6"`).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let seps = |c: char| c == ',' || c == ' ' || c == '.' || c == '-';
        let pts: Vec<Point> = if s.contains(seps) {
            s.split(seps)
                .filter(|p| !p.is_empty())
                .map(|p| {
                    p.parse::<Point>()
                        .map_err(|_| Error::Parse(format!("bad point `{p}`")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .ok_or_else(|| Error::Parse(format!("bad point `{ch}` in `{s}`")))
                })
                .collect::<Result<_>>()?
        };
        Ok(PointSet::new(pts))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn contains(&self, p: Point) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.iter().all(|p| other.contains(*p))
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(
            self.0
                .iter()
                .copied()
                .filter(|p| other.contains(*p))
                .collect(),
        )
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        self.0.iter().any(|p| other.contains(*p))
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        PointSet(
            self.0
                .iter()
                .copied()
                .filter(|p| !other.contains(*p))
                .collect(),
        )
    }

    /// Image of the set under a point map.
    pub fn map<F: Fn(Point) -> Point>(&self, f: F) -> PointSet {
        PointSet::new(self.0.iter().map(|p| f(*p)))
    }

    /// All `k`-subsets of this set, in lexicographic order.
    pub fn subsets(&self, k: usize) -> impl Iterator<Item = PointSet> + '_ {
        self.0.iter().copied().combinations(k).map(PointSet)
    }

    /// Lexicographic rank of this set among all `|self|`-subsets of `universe`.
    pub fn lex_rank_in(&self, universe: &PointSet) -> Option<u64> {
        let n = universe.len() as u64;
        let k = self.len() as u64;
        let mut rank = 0u64;
        let mut next = 0usize;
        for (i, p) in self.0.iter().enumerate() {
            let pos = universe.0.iter().position(|u| u == p)?;
            if pos < next {
                return None;
            }
            // subsets that agree so far but pick a smaller element here
            for skipped in next..pos {
                rank += c(n - skipped as u64 - 1, k - i as u64 - 1);
            }
            next = pos + 1;
        }
        Some(rank)
    }
}

impl fmt::Display for PointSet {
    /// Compact notation when every point is a digit (`1256`), otherwise
    /// dot-separated (`1.10.12`). The empty set renders as `{}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "{{}}");
        }
        if self.0.iter().all(|p| *p < 10) {
            for p in &self.0 {
                write!(f, "{p}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.0.iter().join("."))
        }
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// All `k`-subsets of `[1..=n]`, lexicographic.
pub fn k_subsets(n: Point, k: usize) -> Vec<PointSet> {
    PointSet::range(1, n).subsets(k).collect()
}
