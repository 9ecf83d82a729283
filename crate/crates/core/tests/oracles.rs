mod common;

use hotplug_core::designs::{standard_catalog, validate_design, DesignViolation};
use hotplug_core::hppda::{build_bj, online_access, AMap};
use hotplug_core::pda::{verify_pda, PdaViolation};

use common::*;

#[test]
fn online_access_counts_blocks_meeting_a_j_set() {
    for (name, d) in standard_catalog() {
        for j in 1..=d.t() {
            assert_eq!(
                Some(online_access(&d, j).unwrap()),
                brute_meeting(&d, j as usize),
                "{name} j={j}"
            );
        }
    }
}

/// Σ_{i=1}^{j} (−1)^{i+1} C(j−1,i−1) λ_i = Σ_{s=1}^{t−j+1} λ_s^t C(t−j,s−1),
/// with every λ taken from block counts.
#[test]
fn double_counting_identity() {
    for (name, d) in standard_catalog() {
        let t = d.t() as u64;
        for j in 1..=t {
            let mut lhs: i64 = 0;
            for i in 1..=j {
                let term = (binom(j - 1, i - 1) * brute_lambda_s(&d, i as usize).unwrap()) as i64;
                lhs += if i % 2 == 1 { term } else { -term };
            }
            let rhs: u64 = (1..=(t - j + 1))
                .map(|s| {
                    brute_lambda_i_j(&d, s as usize, (t - s) as usize).unwrap()
                        * binom(t - j, s - 1)
                })
                .sum();
            assert_eq!(lhs, rhs as i64, "{name} j={j}");
        }
    }
}

#[test]
fn brute_force_rejects_non_designs() {
    let mut blocks: Vec<Vec<u32>> = hotplug_core::designs::STEINER_3_8_4_1
        .iter()
        .map(|b| b.chars().map(|c| c.to_digit(10).unwrap()).collect())
        .collect();
    blocks[0] = vec![1, 2, 3, 5];
    assert!(matches!(
        validate_design(8, &blocks, 3, 1),
        Err(DesignViolation::Replication { .. })
    ));
}

#[test]
fn relabeled_cell_breaks_the_pda() {
    let d = hotplug_core::designs::steiner_3_8_4_1();
    let a = AMap::new().with(1, 1, 2).with(2, 1, 1);
    let bj = build_bj(&d, 2, 1, &a).unwrap();
    let mut grid = bj.pda.cells().to_vec();
    // copy the label of one cell into another non-star cell of the same row
    let row = 0;
    let cols: Vec<usize> = (0..grid[row].len())
        .filter(|&c| !grid[row][c].is_star())
        .collect();
    let label = grid[row][cols[0]].clone();
    grid[row][cols[1]] = label;
    assert!(matches!(
        verify_pda(&grid, None),
        Err(PdaViolation::SameRow { .. })
    ));

    let mut grid = bj.pda.cells().to_vec();
    let star_col = (0..grid[0].len()).find(|&c| grid[0][c].is_star()).unwrap();
    let label = grid
        .iter()
        .flat_map(|r| r.iter())
        .find(|c| !c.is_star())
        .unwrap()
        .clone();
    grid[0][star_col] = label;
    assert!(verify_pda(&grid, None).is_err());
}
