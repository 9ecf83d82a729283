mod common;

use std::collections::BTreeMap;

use hotplug_core::designs::steiner_3_8_4_1;
use hotplug_core::hppda::GeneralizedHpPda;

use common::example_a;

fn rows_by_key(dump: &str) -> (String, BTreeMap<String, String>) {
    let mut lines = dump.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| {
            let (key, cells) = l.split_once('|').unwrap();
            (key.to_string(), cells.to_string())
        })
        .collect();
    (header, rows)
}

fn example() -> GeneralizedHpPda {
    GeneralizedHpPda::new(steiner_3_8_4_1(), 2, example_a()).unwrap()
}

#[test]
fn b1_matches_reference_up_to_row_order() {
    let g = example();
    let ours = g.bj(1).unwrap().dump();
    let (h1, r1) = rows_by_key(&ours);
    let (h2, r2) = rows_by_key(include_str!("golden/b1_reference_order.txt"));
    assert_eq!(h1, h2);
    assert_eq!(r1, r2);
    let keys: Vec<&str> = ours
        .lines()
        .skip(1)
        .map(|l| l.split('|').next().unwrap())
        .collect();
    assert_eq!(
        keys,
        ["(1,1)", "(1,2)", "(2,1)", "(2,2)", "(3,1)", "(3,2)", "(12,1)", "(13,1)", "(23,1)"]
    );
}

#[test]
fn b2_dump_is_exact() {
    assert_eq!(
        example().bj(2).unwrap().dump(),
        include_str!("golden/b2.txt")
    );
}

#[test]
fn pc_dump_is_exact() {
    assert_eq!(example().pc().dump(), include_str!("golden/pc.txt"));
}
