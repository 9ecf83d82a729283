//! Placement delivery arrays and the C1–C3 conditions.
//!
//! A PDA is an F×K grid of stars and labels. C1: every column has the same
//! number Z of stars. C2: every declared label occurs. C3: two cells holding
//! the same label lie in distinct rows and columns, and the two cells that
//! complete their rectangle are stars.
//!
//! Dump format: one row per line, cells joined by `|`, a star as `*`, a label
//! by its `Display` form.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};

use thiserror::Error;

use crate::combinatorics::PointSet;

/// Cell position `(row, col)`, 0-based.
pub type Pos = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Cell<L> {
    Star,
    Label(L),
}

impl<L> Cell<L> {
    pub fn is_star(&self) -> bool {
        matches!(self, Cell::Star)
    }

    pub fn label(&self) -> Option<&L> {
        match self {
            Cell::Star => None,
            Cell::Label(l) => Some(l),
        }
    }
}

/// Multicast label `(set, copy)_occurrence`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub set: PointSet,
    pub copy: u32,
    pub occurrence: u32,
}

impl Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})_{}", self.set, self.copy, self.occurrence)
    }
}

/// The (K, F, Z, S) parameters of a verified array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PdaParams {
    pub k: usize,
    pub f: usize,
    pub z: usize,
    pub s: usize,
}

/// First violated condition found by a row-major scan.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdaViolation {
    #[error("grid has no rows or no columns")]
    Empty,
    #[error("row {row} has {found} cells, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("C1: column {col} has {found} stars, column 0 has {expected}")]
    StarCount {
        col: usize,
        expected: usize,
        found: usize,
    },
    #[error("C2: {found} distinct labels present, {declared} declared")]
    LabelCount { declared: usize, found: usize },
    #[error("C3: label {label} repeated in row at {first:?} and {second:?}")]
    SameRow {
        label: String,
        first: Pos,
        second: Pos,
    },
    #[error("C3: label {label} repeated in column at {first:?} and {second:?}")]
    SameColumn {
        label: String,
        first: Pos,
        second: Pos,
    },
    #[error("C3: label {label} at {first:?} and {second:?} but {not_star:?} is not a star")]
    MissingStar {
        label: String,
        first: Pos,
        second: Pos,
        not_star: Pos,
    },
}

/// A verified placement delivery array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda<L = Label> {
    cells: Vec<Vec<Cell<L>>>,
    params: PdaParams,
}

/// Checks C1–C3 on a rectangular grid. With `declared_labels` set, also checks
/// that exactly that many distinct labels occur.
pub fn verify_pda<L>(
    grid: &[Vec<Cell<L>>],
    declared_labels: Option<usize>,
) -> Result<PdaParams, PdaViolation>
where
    L: Ord + Clone + Debug,
{
    let rows = grid.len();
    let cols = grid.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(PdaViolation::Empty);
    }
    verify_shape(grid, cols)?;
    verify_conditions(grid, cols, declared_labels)
}

fn verify_shape<L>(grid: &[Vec<Cell<L>>], cols: usize) -> Result<(), PdaViolation> {
    match grid.iter().position(|r| r.len() != cols) {
        Some(row) => Err(PdaViolation::Ragged {
            row,
            expected: cols,
            found: grid[row].len(),
        }),
        None => Ok(()),
    }
}

fn verify_conditions<L>(
    grid: &[Vec<Cell<L>>],
    cols: usize,
    declared_labels: Option<usize>,
) -> Result<PdaParams, PdaViolation>
where
    L: Ord + Clone + Debug,
{
    let stars_in = |c: usize| grid.iter().filter(|r| r[c].is_star()).count();
    let z = if cols > 0 { stars_in(0) } else { 0 };
    for col in 1..cols {
        let found = stars_in(col);
        if found != z {
            return Err(PdaViolation::StarCount {
                col,
                expected: z,
                found,
            });
        }
    }

    let mut seen: BTreeMap<&L, Vec<Pos>> = BTreeMap::new();
    for (r, row) in grid.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            let Some(label) = cell.label() else { continue };
            let earlier = seen.entry(label).or_default();
            for &(r0, c0) in earlier.iter() {
                let name = format!("{label:?}");
                if r0 == r {
                    return Err(PdaViolation::SameRow {
                        label: name,
                        first: (r0, c0),
                        second: (r, c),
                    });
                }
                if c0 == c {
                    return Err(PdaViolation::SameColumn {
                        label: name,
                        first: (r0, c0),
                        second: (r, c),
                    });
                }
                for corner in [(r0, c), (r, c0)] {
                    if !grid[corner.0][corner.1].is_star() {
                        return Err(PdaViolation::MissingStar {
                            label: name,
                            first: (r0, c0),
                            second: (r, c),
                            not_star: corner,
                        });
                    }
                }
            }
            earlier.push((r, c));
        }
    }

    let s = seen.len();
    if let Some(declared) = declared_labels {
        if declared != s {
            return Err(PdaViolation::LabelCount { declared, found: s });
        }
    }
    Ok(PdaParams {
        k: cols,
        f: grid.len(),
        z,
        s,
    })
}

impl<L: Ord + Clone + Debug> Pda<L> {
    /// Verifies and wraps a grid.
    pub fn new(cells: Vec<Vec<Cell<L>>>) -> Result<Self, PdaViolation> {
        let params = verify_pda(&cells, None)?;
        Ok(Pda { cells, params })
    }

    /// Like [`Pda::new`] but admits an array with no rows (`cols` columns, F = Z = S = 0).
    pub fn with_columns(cells: Vec<Vec<Cell<L>>>, cols: usize) -> Result<Self, PdaViolation> {
        if cols == 0 {
            return Err(PdaViolation::Empty);
        }
        verify_shape(&cells, cols)?;
        let params = verify_conditions(&cells, cols, None)?;
        Ok(Pda { cells, params })
    }

    pub fn params(&self) -> PdaParams {
        self.params
    }

    pub fn cells(&self) -> &[Vec<Cell<L>>] {
        &self.cells
    }

    pub fn cell(&self, row: usize, col: usize) -> &Cell<L> {
        &self.cells[row][col]
    }

    /// Groups label cells by label; positions within a group are row-major.
    pub fn multicast_groups(&self) -> BTreeMap<L, Vec<Pos>> {
        pda_multicast_groups(&self.cells)
    }
}

pub fn pda_multicast_groups<L: Ord + Clone>(cells: &[Vec<Cell<L>>]) -> BTreeMap<L, Vec<Pos>> {
    let mut groups: BTreeMap<L, Vec<Pos>> = BTreeMap::new();
    for (r, row) in cells.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            if let Cell::Label(l) = cell {
                groups.entry(l.clone()).or_default().push((r, c));
            }
        }
    }
    groups
}

/// Renders a grid in the dump format.
pub fn dump<L: Display>(cells: &[Vec<Cell<L>>]) -> String {
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Star => "*".to_string(),
                Cell::Label(l) => l.to_string(),
            })
            .collect();
        out.push_str(&line.join("|"));
        out.push('\n');
    }
    out
}

/// Parses the dump format with integer labels (`*|3|*`).
pub fn parse_int_grid(text: &str) -> Result<Vec<Vec<Cell<u64>>>, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|line| {
            line.split('|')
                .map(|tok| match tok.trim() {
                    "*" => Ok(Cell::Star),
                    n => n
                        .parse()
                        .map(Cell::Label)
                        .map_err(|_| format!("bad cell `{n}`")),
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(text: &str) -> Vec<Vec<Cell<u64>>> {
        parse_int_grid(text).unwrap()
    }

    #[test]
    fn three_by_three() {
        let g = grid("*|*|1\n*|1|*\n1|*|*");
        assert_eq!(
            verify_pda(&g, Some(1)).unwrap(),
            PdaParams {
                k: 3,
                f: 3,
                z: 2,
                s: 1
            }
        );
        let groups = pda_multicast_groups(&g);
        assert_eq!(groups[&1], vec![(0, 2), (1, 1), (2, 0)]);
    }

    #[test]
    fn all_stars() {
        let g = grid("*|*\n*|*");
        assert_eq!(
            verify_pda(&g, None).unwrap(),
            PdaParams {
                k: 2,
                f: 2,
                z: 2,
                s: 0
            }
        );
        assert!(pda_multicast_groups(&g).is_empty());
    }

    #[test]
    fn def3_example_b1() {
        // the 3×6 integer-labelled array from the small illustration
        let g = grid("*|*|1|2|3|4\n1|2|*|*|5|6\n3|4|5|6|*|*");
        assert_eq!(
            verify_pda(&g, Some(6)).unwrap(),
            PdaParams {
                k: 6,
                f: 3,
                z: 1,
                s: 6
            }
        );
    }

    #[test]
    fn violations() {
        assert_eq!(
            verify_pda::<u64>(&[], None).unwrap_err(),
            PdaViolation::Empty
        );
        assert!(matches!(
            verify_pda(&grid("*|1\n*"), None).unwrap_err(),
            PdaViolation::Ragged { row: 1, .. }
        ));
        assert!(matches!(
            verify_pda(&grid("*|1\n2|3"), None).unwrap_err(),
            PdaViolation::StarCount {
                col: 1,
                expected: 1,
                found: 0
            }
        ));
        assert!(matches!(
            verify_pda(&grid("1|1\n*|*"), None).unwrap_err(),
            PdaViolation::SameRow {
                first: (0, 0),
                second: (0, 1),
                ..
            }
        ));
        assert!(matches!(
            verify_pda(&grid("1|*\n1|*\n*|2"), None).unwrap_err(),
            PdaViolation::StarCount { .. }
        ));
        assert!(matches!(
            verify_pda(&grid("1|*\n1|2"), None).unwrap_err(),
            PdaViolation::StarCount { .. }
        ));
        assert!(matches!(
            verify_pda(&grid("1|*\n*|3\n1|*\n*|2"), None).unwrap_err(),
            PdaViolation::SameColumn {
                first: (0, 0),
                second: (2, 0),
                ..
            }
        ));
        assert!(matches!(
            verify_pda(&grid("1|2\n3|1"), None).unwrap_err(),
            PdaViolation::MissingStar {
                not_star: (0, 1),
                ..
            }
        ));
        assert!(matches!(
            verify_pda(&grid("*|*|1\n*|1|*\n1|*|*"), Some(2)).unwrap_err(),
            PdaViolation::LabelCount {
                declared: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn label_cells_per_column() {
        let g = grid("*|*|1|2|3|4\n1|2|*|*|5|6\n3|4|5|6|*|*");
        let p = verify_pda(&g, None).unwrap();
        for c in 0..p.k {
            let labels = g.iter().filter(|r| !r[c].is_star()).count();
            assert_eq!(labels, p.f - p.z);
        }
    }

    #[test]
    fn dump_round_trip() {
        let text = "*|*|1\n*|1|*\n1|*|*\n";
        assert_eq!(dump(&grid(text)), text);
    }

    #[test]
    fn label_display() {
        let l = Label {
            set: PointSet::parse("123").unwrap(),
            copy: 1,
            occurrence: 4,
        };
        assert_eq!(l.to_string(), "(123,1)_4");
    }
}
