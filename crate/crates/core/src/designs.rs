//! t-designs: validation, intersection numbers, block selectors, a small
//! catalog and a text file format.
//!
//! File format (UTF-8): the first non-comment line is `v k t lambda`; every
//! following line is one block as space-separated ascending points in `1..=v`.
//! Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::combinatorics::{binom, c, exact_quotient, k_subsets, Point, PointSet};
use crate::error::{Error, Result};

/// Why a candidate block list is not a t-design. Block positions refer to the
/// caller's input order, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignViolation {
    #[error("block list is empty")]
    NoBlocks,
    #[error("parameters must satisfy v > k >= t >= 1 (v={v}, k={k}, t={t})")]
    BadParameters { v: u32, k: u32, t: u32 },
    #[error("block #{block} contains point {point} outside 1..={v}")]
    PointOutOfRange { block: usize, point: Point, v: u32 },
    #[error("block #{block} repeats point {point}")]
    DuplicatePoint { block: usize, point: Point },
    #[error("block #{block} has {found} points, expected {expected}")]
    BlockSize {
        block: usize,
        expected: usize,
        found: usize,
    },
    #[error("block {block} appears more than once")]
    RepeatedBlock { block: PointSet },
    #[error("{subset} lies in {found} blocks, expected {expected}")]
    Replication {
        subset: PointSet,
        expected: u64,
        found: u64,
    },
    #[error("design has {found} blocks, expected {expected}")]
    BlockCount { expected: u64, found: u64 },
}

/// A validated t-(v,k,λ) design with lexicographically sorted blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TDesign {
    v: u32,
    k: u32,
    t: u32,
    lambda: u64,
    blocks: Vec<PointSet>,
}

/// The intersection numbers λ_s (s in 0..=t) and λ_s^t (s in 1..=t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignParams {
    pub lambda_s: BTreeMap<u32, u64>,
    pub lambda_s_t: BTreeMap<u32, u64>,
}

/// Checks a candidate block list against the claimed strength and index.
///
/// `k` is taken from the first block. On success the blocks are stored in
/// lexicographic order regardless of input order.
pub fn validate_design(
    v: u32,
    blocks: &[Vec<Point>],
    t: u32,
    lambda: u64,
) -> std::result::Result<TDesign, DesignViolation> {
    let first = blocks.first().ok_or(DesignViolation::NoBlocks)?;
    let k = first.len() as u32;
    if !(v > k && k >= t && t >= 1) {
        return Err(DesignViolation::BadParameters { v, k, t });
    }

    let mut sets = Vec::with_capacity(blocks.len());
    for (idx, raw) in blocks.iter().enumerate() {
        if let Some(&point) = raw.iter().find(|p| **p == 0 || **p > v) {
            return Err(DesignViolation::PointOutOfRange {
                block: idx,
                point,
                v,
            });
        }
        let set = PointSet::new(raw.iter().copied());
        if set.len() != raw.len() {
            let mut seen = raw.clone();
            seen.sort_unstable();
            let point = seen
                .windows(2)
                .find(|w| w[0] == w[1])
                .map(|w| w[0])
                .unwrap_or(0);
            return Err(DesignViolation::DuplicatePoint { block: idx, point });
        }
        if set.len() != k as usize {
            return Err(DesignViolation::BlockSize {
                block: idx,
                expected: k as usize,
                found: set.len(),
            });
        }
        sets.push(set);
    }
    sets.sort();
    if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
        return Err(DesignViolation::RepeatedBlock {
            block: w[0].clone(),
        });
    }

    // replication of every t-subset, indexed by lexicographic rank
    let universe = PointSet::range(1, v);
    let mut counts = vec![0u64; c(u64::from(v), u64::from(t)) as usize];
    for block in &sets {
        for sub in block.subsets(t as usize) {
            let rank = sub.lex_rank_in(&universe).expect("subset of [v]");
            counts[rank as usize] += 1;
        }
    }
    if let Some(rank) = counts.iter().position(|&n| n != lambda) {
        let subset = universe
            .subsets(t as usize)
            .nth(rank)
            .expect("rank in range");
        return Err(DesignViolation::Replication {
            subset,
            expected: lambda,
            found: counts[rank],
        });
    }

    let expected_b = u128::from(lambda) * u128::from(c(u64::from(v), u64::from(t)))
        / u128::from(c(u64::from(k), u64::from(t)));
    if expected_b != sets.len() as u128 {
        return Err(DesignViolation::BlockCount {
            expected: expected_b as u64,
            found: sets.len() as u64,
        });
    }

    Ok(TDesign {
        v,
        k,
        t,
        lambda,
        blocks: sets,
    })
}

impl TDesign {
    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// Number of blocks.
    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks in lexicographic order.
    pub fn blocks(&self) -> &[PointSet] {
        &self.blocks
    }

    pub fn points(&self) -> PointSet {
        PointSet::range(1, self.v)
    }

    pub fn block_index(&self, block: &PointSet) -> Option<usize> {
        self.blocks.binary_search(block).ok()
    }

    /// Number of blocks through any fixed s-subset: λ·C(v−s,t−s)/C(k−s,t−s).
    pub fn lambda_s(&self, s: u32) -> Result<u64> {
        if s > self.t {
            return Err(Error::InvalidParameter(format!(
                "s={s} outside 0..={}",
                self.t
            )));
        }
        let (v, k, t, s) = (self.v as u64, self.k as u64, self.t as u64, s as u64);
        exact_quotient(
            self.lambda,
            binom(v - s, t - s)?,
            binom(k - s, t - s)?,
            "lambda_s",
        )
    }

    /// Blocks containing a fixed i-set and avoiding a disjoint fixed j-set:
    /// λ·C(v−i−j,k−i)/C(v−t,k−t), defined for i + j ≤ t.
    pub fn lambda_i_j(&self, i: u32, j: u32) -> Result<u64> {
        if i + j > self.t {
            return Err(Error::InvalidParameter(format!(
                "i + j = {} exceeds t = {}",
                i + j,
                self.t
            )));
        }
        let (v, k, t) = (self.v as u64, self.k as u64, self.t as u64);
        let (i, j) = (i as u64, j as u64);
        if k < i {
            return Ok(0);
        }
        exact_quotient(
            self.lambda,
            binom(v - i - j, k - i)?,
            binom(v - t, k - t)?,
            "lambda_i_j",
        )
    }

    /// Blocks containing a fixed s-subset Y of a t-set T and no point of T∖Y.
    pub fn lambda_s_t(&self, s: u32) -> Result<u64> {
        if s == 0 || s > self.t {
            return Err(Error::InvalidParameter(format!(
                "s={s} outside 1..={}",
                self.t
            )));
        }
        self.lambda_i_j(s, self.t - s)
    }

    pub fn params(&self) -> Result<DesignParams> {
        let lambda_s = (0..=self.t)
            .map(|s| Ok((s, self.lambda_s(s)?)))
            .collect::<Result<_>>()?;
        let lambda_s_t = (1..=self.t)
            .map(|s| Ok((s, self.lambda_s_t(s)?)))
            .collect::<Result<_>>()?;
        Ok(DesignParams {
            lambda_s,
            lambda_s_t,
        })
    }

    /// Blocks containing all of `h` and nothing of `online ∖ h`, in
    /// lexicographic order. The i-th entry is the selector A^I_H(i).
    pub fn blocks_for(&self, h: &PointSet, online: &PointSet) -> Result<Vec<PointSet>> {
        if online.len() != self.t as usize {
            return Err(Error::InvalidParameter(format!(
                "online set {online} has size {}, expected t = {}",
                online.len(),
                self.t
            )));
        }
        if !h.is_subset(online) {
            return Err(Error::InvalidParameter(format!(
                "{h} is not a subset of {online}"
            )));
        }
        let excluded = online.difference(h);
        Ok(self
            .blocks
            .iter()
            .filter(|b| h.is_subset(b) && !b.intersects(&excluded))
            .cloned()
            .collect())
    }

    /// Renders the design in the text file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.v, self.k, self.t, self.lambda);
        for b in &self.blocks {
            let row: Vec<String> = b.points().iter().map(|p| p.to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for TDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-({},{},{}) design, b={}",
            self.t,
            self.v,
            self.k,
            self.lambda,
            self.b()
        )
    }
}

/// All C(v,k) k-subsets of [v]; a t-design for every t ≤ k with λ = C(v−t,k−t).
pub fn complete_design(v: u32, k: u32, t: u32) -> Result<TDesign> {
    if !(v > k && k >= t && t >= 1) {
        return Err(DesignViolation::BadParameters { v, k, t }.into());
    }
    let lambda = binom(u64::from(v - t), u64::from(k - t))?;
    let blocks = k_subsets(v, k as usize);
    Ok(TDesign {
        v,
        k,
        t,
        lambda,
        blocks,
    })
}

/// The 3-(8,4,1) design, block list as printed in the worked example.
pub const STEINER_3_8_4_1: [&str; 14] = [
    "1256", "3478", "2468", "1357", "1458", "2367", "1234", "5678", "1278", "3456", "1368", "2457",
    "1467", "2358",
];

/// Lines of the Fano plane 2-(7,3,1).
pub const FANO: [&str; 7] = ["124", "235", "346", "457", "156", "267", "137"];

fn from_compact(v: u32, rows: &[&str], t: u32, lambda: u64) -> Result<TDesign> {
    let blocks: Vec<Vec<Point>> = rows
        .iter()
        .map(|r| r.chars().map(|ch| ch.to_digit(10).unwrap_or(0)).collect())
        .collect();
    Ok(validate_design(v, &blocks, t, lambda)?)
}

pub fn steiner_3_8_4_1() -> TDesign {
    from_compact(8, &STEINER_3_8_4_1, 3, 1).expect("catalog design is valid")
}

pub fn fano_plane() -> TDesign {
    from_compact(7, &FANO, 2, 1).expect("catalog design is valid")
}

/// Looks up a catalog design: `steiner-3-8-4-1`, `fano`, or `complete-V-K-T`.
pub fn catalog(name: &str) -> Result<TDesign> {
    match name {
        "steiner-3-8-4-1" | "3-8-4-1" => Ok(steiner_3_8_4_1()),
        "fano" | "2-7-3-1" => Ok(fano_plane()),
        other => {
            let rest = other
                .strip_prefix("complete-")
                .ok_or_else(|| Error::Parse(format!("unknown catalog design `{other}`")))?;
            let parts: Vec<u32> = rest
                .split('-')
                .map(|p| {
                    p.parse()
                        .map_err(|_| Error::Parse(format!("bad number `{p}`")))
                })
                .collect::<Result<_>>()?;
            match parts[..] {
                [v, k, t] => complete_design(v, k, t),
                _ => Err(Error::Parse(format!(
                    "expected complete-V-K-T, got `{other}`"
                ))),
            }
        }
    }
}

/// The designs every "all catalog designs" check runs over.
pub fn standard_catalog() -> Vec<(String, TDesign)> {
    let mut out = vec![
        ("steiner-3-8-4-1".to_string(), steiner_3_8_4_1()),
        ("fano".to_string(), fano_plane()),
    ];
    for (v, k, t) in [
        (4, 2, 2),
        (5, 3, 2),
        (6, 3, 2),
        (5, 3, 3),
        (6, 4, 3),
        (7, 4, 4),
    ] {
        let name = format!("complete-{v}-{k}-{t}");
        let d = complete_design(v, k, t).expect("valid complete design");
        out.push((name, d));
    }
    out
}

/// Parses and validates the text file format.
pub fn parse_design(text: &str) -> Result<TDesign> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("missing header line".into()))?;
    let nums: Vec<u64> = header
        .split_whitespace()
        .map(|x| {
            x.parse()
                .map_err(|_| Error::Parse(format!("bad header field `{x}`")))
        })
        .collect::<Result<_>>()?;
    let [v, k, t, lambda] = nums[..] else {
        return Err(Error::Parse(format!(
            "header must be `v k t lambda`, got `{header}`"
        )));
    };
    let mut blocks = Vec::new();
    for line in lines {
        let block: Vec<Point> = line
            .split_whitespace()
            .map(|x| {
                x.parse()
                    .map_err(|_| Error::Parse(format!("bad point `{x}`")))
            })
            .collect::<Result<_>>()?;
        if block.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!(
                "block `{line}` is not strictly ascending"
            )));
        }
        blocks.push(block);
    }
    let d = validate_design(v as u32, &blocks, t as u32, lambda)?;
    if u64::from(d.k) != k {
        return Err(Error::Parse(format!(
            "header claims k={k}, blocks have size {}",
            d.k
        )));
    }
    Ok(d)
}

pub fn load_design(path: &Path) -> Result<TDesign> {
    parse_design(&std::fs::read_to_string(path)?)
}

/// Resolves `catalog:NAME` or a file path.
pub fn resolve_design(spec: &str) -> Result<TDesign> {
    match spec.strip_prefix("catalog:") {
        Some(name) => catalog(name),
        None => load_design(Path::new(spec)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compact(rows: &[&str]) -> Vec<Vec<Point>> {
        rows.iter()
            .map(|r| r.chars().map(|ch| ch.to_digit(10).unwrap()).collect())
            .collect()
    }

    #[test]
    fn steiner_design_validates() {
        let d = steiner_3_8_4_1();
        assert_eq!((d.v(), d.k(), d.t(), d.lambda(), d.b()), (8, 4, 3, 1, 14));
        assert!(d.blocks().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(d.blocks()[0].to_string(), "1234");
    }

    #[test]
    fn complete_pairs_of_four() {
        let d = validate_design(4, &compact(&["12", "13", "14", "23", "24", "34"]), 2, 1).unwrap();
        assert_eq!(d.b(), 6);
    }

    #[test]
    fn mutated_block_reports_replication() {
        let mut rows = STEINER_3_8_4_1.to_vec();
        rows[13] = "2357";
        let err = validate_design(8, &compact(&rows), 3, 1).unwrap_err();
        match err {
            DesignViolation::Replication {
                subset,
                expected,
                found,
            } => {
                assert_eq!(expected, 1);
                assert_ne!(found, 1);
                // 237 is now in both 2357 and 2367; nothing lexicographically smaller changed
                assert_eq!(subset.to_string(), "237");
                assert_eq!(found, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn structural_errors() {
        assert_eq!(
            validate_design(4, &[], 2, 1).unwrap_err(),
            DesignViolation::NoBlocks
        );
        assert!(matches!(
            validate_design(4, &compact(&["12", "13", "1"]), 2, 1).unwrap_err(),
            DesignViolation::BlockSize {
                block: 2,
                expected: 2,
                found: 1
            }
        ));
        assert!(matches!(
            validate_design(4, &[vec![1, 1], vec![2, 3]], 1, 1).unwrap_err(),
            DesignViolation::DuplicatePoint { block: 0, point: 1 }
        ));
        assert!(matches!(
            validate_design(4, &[vec![0, 1]], 1, 1).unwrap_err(),
            DesignViolation::PointOutOfRange { point: 0, .. }
        ));
        assert!(matches!(
            validate_design(4, &compact(&["12", "12"]), 2, 1).unwrap_err(),
            DesignViolation::RepeatedBlock { .. }
        ));
        assert!(matches!(
            validate_design(3, &compact(&["123"]), 1, 1).unwrap_err(),
            DesignViolation::BadParameters { .. }
        ));
    }

    #[test]
    fn lambda_values_on_steiner() {
        let d = steiner_3_8_4_1();
        assert_eq!(d.lambda_s(0).unwrap(), 14);
        assert_eq!(d.lambda_s(1).unwrap(), 7);
        assert_eq!(d.lambda_s(2).unwrap(), 3);
        assert_eq!(d.lambda_s(3).unwrap(), 1);
        assert!(d.lambda_s(4).is_err());
        assert_eq!(d.lambda_i_j(1, 1).unwrap(), 4);
        assert_eq!(d.lambda_i_j(0, 0).unwrap(), 14);
        assert!(d.lambda_i_j(2, 2).is_err());
        assert_eq!(d.lambda_s_t(1).unwrap(), 2);
        assert_eq!(d.lambda_s_t(2).unwrap(), 2);
        assert_eq!(d.lambda_s_t(3).unwrap(), 1);
        assert!(d.lambda_s_t(0).is_err());
    }

    #[test]
    fn lambda_i_j_complete_five() {
        let d = complete_design(5, 3, 3).unwrap();
        assert_eq!(d.lambda(), 1);
        assert_eq!(d.lambda_i_j(1, 2).unwrap(), 1);
    }

    #[test]
    fn non_integral_lambda_is_reported() {
        // λ_1 = 7/2 for a claimed 2-(8,3,1)
        let d = TDesign {
            v: 8,
            k: 3,
            t: 2,
            lambda: 1,
            blocks: vec![],
        };
        assert!(matches!(d.lambda_s(1), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn selector_examples() {
        let d = steiner_3_8_4_1();
        let online = PointSet::parse("246").unwrap();
        let show = |h: &str| -> Vec<String> {
            d.blocks_for(&PointSet::parse(h).unwrap(), &online)
                .unwrap()
                .iter()
                .map(|b| b.to_string())
                .collect()
        };
        assert_eq!(show("2"), ["1278", "2358"]);
        assert_eq!(show("46"), ["1467", "3456"]);
        assert_eq!(show("24"), ["1234", "2457"]);
        assert!(d
            .blocks_for(&PointSet::parse("1").unwrap(), &online)
            .is_err());
        assert!(d
            .blocks_for(
                &PointSet::parse("2").unwrap(),
                &PointSet::parse("24").unwrap()
            )
            .is_err());
    }

    #[test]
    fn complete_design_counts() {
        let cases = [((4, 2, 2), 6, 1), ((5, 3, 2), 10, 3), ((6, 3, 2), 20, 4)];
        for ((v, k, t), b, lambda) in cases {
            let d = complete_design(v, k, t).unwrap();
            assert_eq!((d.b(), d.lambda()), (b, lambda));
        }
        assert!(complete_design(3, 3, 2).is_err());
        assert!(complete_design(5, 2, 3).is_err());
    }

    #[test]
    fn complete_designs_revalidate() {
        for v in 2..=10u32 {
            for k in 1..=5u32.min(v - 1) {
                for t in 1..=k {
                    let d = complete_design(v, k, t).unwrap();
                    let raw: Vec<Vec<Point>> =
                        d.blocks().iter().map(|b| b.points().to_vec()).collect();
                    let again = validate_design(v, &raw, t, d.lambda()).unwrap();
                    assert_eq!(again, d);
                }
            }
        }
    }

    #[test]
    fn file_round_trip_and_rejections() {
        let d = fano_plane();
        let text = format!("# fano\n{}", d.to_text());
        assert_eq!(parse_design(&text).unwrap(), d);
        assert!(parse_design("7 3 2 1\n0 1 2\n").is_err());
        assert!(parse_design("7 3 2 1\n2 1 4\n").is_err());
        assert!(parse_design("7 3 2\n").is_err());
        assert!(
            parse_design("7 4 2 1\n1 2 4\n2 3 5\n3 4 6\n4 5 7\n1 5 6\n2 6 7\n1 3 7\n").is_err()
        );
    }

    #[test]
    fn catalog_lookup() {
        assert_eq!(catalog("fano").unwrap().b(), 7);
        assert_eq!(catalog("complete-6-3-2").unwrap().b(), 20);
        assert!(catalog("nope").is_err());
        assert!(resolve_design("catalog:steiner-3-8-4-1").is_ok());
        for (_, d) in standard_catalog() {
            assert!(d.params().is_ok());
        }
    }
}
