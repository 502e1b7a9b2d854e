use dixc_core::inner::{group_support, table3_preset, DEFAULT_SEARCH_BUDGET};
use dixc_core::outer::unit_rows;
use dixc_core::rational::{frac, int};
use dixc_core::*;

const BUDGET: u128 = DEFAULT_SEARCH_BUDGET;

fn p(text: &str) -> ProblemInstance {
    parse_problem(text, &[]).unwrap()
}

fn s(ids: &[usize]) -> SubsetId {
    SubsetId::from_indices(ids.iter().map(|i| i - 1))
}

fn dir(n: usize, ids: &[usize]) -> Vec<Rational> {
    (1..=n).map(|j| if ids.contains(&j) { int(1) } else { int(0) }).collect()
}

const THREE_DIRS: [&[usize]; 7] = [&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]];

#[test]
fn mais_region_with_a_two_cycle() {
    let region = outer_region(&p("(1);(2|3);(3|2)"), OuterBoundKind::Mais).unwrap();
    let expected = vec![
        (s(&[1]), int(4)),
        (s(&[2]), int(4)),
        (s(&[1, 2]), int(6)),
        (s(&[3]), int(4)),
        (s(&[1, 3]), int(6)),
    ];
    let mut got = unit_rows(&region);
    got.sort();
    let mut want = expected;
    want.sort();
    assert_eq!(got, want);
    assert_eq!(region.constraints().len(), 5 + 3);
}

#[test]
fn separate_coding_cells_for_three_cycle() {
    let q = p("(1|3);(2|1);(3|2)");
    // Rows by server, columns R1, R2, R3, R1+R2, R1+R3, R2+R3, R1+R2+R3.
    let rows: [(&[usize], [Rational; 7]); 7] = [
        (&[1], [int(1), int(0), int(0), int(1), int(1), int(0), int(1)]),
        (&[2], [int(0), int(1), int(0), int(1), int(0), int(1), int(1)]),
        (&[3], [int(0), int(0), int(1), int(0), int(1), int(1), int(1)]),
        (&[1, 2], [int(1), int(1), int(0), int(1), int(1), int(1), int(1)]),
        (&[1, 3], [int(1), int(0), int(1), int(1), int(1), int(1), int(1)]),
        (&[2, 3], [int(0), int(1), int(1), int(1), int(1), int(1), int(1)]),
        (&[1, 2, 3], [int(1), int(1), int(1), int(1), int(1), int(1), frac(3, 2)]),
    ];
    let single = |ids: &[usize], w: &[Rational]| {
        let g = ServerGrouping::new(
            3,
            SubsetId::all_nonempty(3)
                .map(|t| vec![t])
                .collect(),
        )
        .unwrap();
        let at = g.groups().iter().position(|h| h == &vec![s(ids)]).unwrap();
        inner::search_group(&q, &g.groups()[at], w).unwrap().0
    };
    for (server, cells) in &rows {
        for (d, want) in THREE_DIRS.iter().zip(cells) {
            assert_eq!(&single(server, &dir(3, d)), want, "server {server:?} dir {d:?}");
        }
    }
    let sums = [int(4), int(4), int(4), int(6), int(6), int(6), frac(15, 2)];
    for (d, want) in THREE_DIRS.iter().zip(&sums) {
        let v = scheme_separate(&q, &Decoding::Search, &dir(3, d), BUDGET).unwrap();
        assert_eq!(&v.value, want, "dir {d:?}");
    }
}

struct ClassRow {
    problems: &'static [&'static str],
    values: [i64; 7],
}

const CLASS_ROWS: [ClassRow; 6] = [
    ClassRow {
        problems: &[
            "(1);(2);(3)",
            "(1|2);(2);(3)",
            "(1|2,3);(2);(3)",
            "(1);(2|3);(3|1)",
            "(1);(2|1);(3|1)",
            "(1);(2|1);(3|1,2)",
        ],
        values: [4, 4, 4, 6, 6, 6, 7],
    },
    ClassRow {
        problems: &["(1|3);(2|1);(3|2)"],
        values: [4, 4, 4, 6, 6, 6, 9],
    },
    ClassRow {
        problems: &["(1);(2|3);(3|2)", "(1);(2|1,3);(3|2)", "(1);(2|1,3);(3|1,2)"],
        values: [4, 4, 4, 6, 6, 8, 9],
    },
    ClassRow {
        problems: &["(1|3);(2|3);(3|2)", "(1|3);(2|1,3);(3|2)", "(1|2,3);(2|3);(3|2)"],
        values: [4, 4, 4, 6, 6, 8, 10],
    },
    ClassRow {
        problems: &["(1|3);(2|3);(3|1,2)", "(1|2,3);(2|3);(3|1,2)"],
        values: [4, 4, 4, 6, 8, 8, 10],
    },
    ClassRow {
        problems: &["(1|2,3);(2|1,3);(3|1,2)"],
        values: [4, 4, 4, 8, 8, 8, 12],
    },
];

#[test]
fn every_three_receiver_class_matches_its_row() {
    let mut seen = std::collections::BTreeSet::new();
    for row in &CLASS_ROWS {
        for text in row.problems {
            let q = p(text);
            assert!(seen.insert(q.canonical_form().0.to_compact()), "{text} repeats a class");
            let rule = Decoding::Fixed(vec![DecodingConfig::table2_rule(&q)]);
            for (d, want) in THREE_DIRS.iter().zip(row.values) {
                let w = dir(3, d);
                let inner = scheme_joint(&q, &rule, &w, BUDGET).unwrap().value;
                let outer = outer_support(&q, OuterBoundKind::PolymatroidPlusCustom, &w).unwrap();
                assert_eq!(inner, int(want), "{text} inner {d:?}");
                assert_eq!(outer, int(want), "{text} outer {d:?}");
            }
        }
    }
    let classes: std::collections::BTreeSet<_> = enumerate_problems(3, false)
        .unwrap()
        .iter()
        .map(|q| q.canonical_form().0.to_compact())
        .collect();
    assert_eq!(classes.len(), 16);
    assert_eq!(classes, seen);
}

#[test]
fn custom_cut_closes_the_gap() {
    let q = p("(1);(2|3);(3|2)");
    let sum = dir(3, &[1, 2, 3]);
    assert_eq!(outer_support(&q, OuterBoundKind::Polymatroid, &sum).unwrap(), int(10));
    assert_eq!(outer_support(&q, OuterBoundKind::PolymatroidPlusCustom, &sum).unwrap(), int(9));
    let rule = Decoding::Fixed(vec![DecodingConfig::table2_rule(&q)]);
    assert_eq!(scheme_joint(&q, &rule, &sum, BUDGET).unwrap().value, int(9));
    assert_eq!(scheme_joint(&q, &Decoding::Search, &sum, BUDGET).unwrap().value, int(9));
}

#[test]
fn removing_an_acyclic_edge_changes_the_region() {
    let without = p("(1);(2|3);(3|2)");
    let with = p("(1|3);(2|3);(3|2)");
    let sum = dir(3, &[1, 2, 3]);
    let a = outer_support(&without, OuterBoundKind::PolymatroidPlusCustom, &sum).unwrap();
    let b = outer_support(&with, OuterBoundKind::PolymatroidPlusCustom, &sum).unwrap();
    assert_eq!((a, b), (int(9), int(10)));
    let a = scheme_joint(&without, &Decoding::Search, &sum, BUDGET).unwrap().value;
    let b = scheme_joint(&with, &Decoding::Search, &sum, BUDGET).unwrap().value;
    assert_eq!((a, b), (int(9), int(10)));
}

fn four() -> ProblemInstance {
    p("(1|4);(2|3,4);(3|1,2);(4|2,3)")
}

#[test]
fn joint_coding_region_on_four_receivers() {
    let q = four();
    let config = DecodingConfig::from_sets([
        (0, s(&[1])),
        (1, s(&[1, 2])),
        (2, s(&[3, 4])),
        (3, s(&[1, 4])),
    ]);
    let region = grouped_region(&q, &ServerGrouping::single(4), &[config]).unwrap();
    let mut got = unit_rows(&region);
    got.sort();
    let mut want = vec![
        (s(&[1]), int(8)),
        (s(&[2]), int(8)),
        (s(&[3]), int(8)),
        (s(&[4]), int(8)),
        (s(&[1, 2]), int(12)),
        (s(&[1, 3]), int(12)),
        (s(&[1, 4]), int(12)),
        (s(&[3, 4]), int(12)),
        (s(&[1, 2, 3]), int(18)),
        (s(&[1, 2, 3, 4]), int(23)),
    ];
    want.sort();
    assert_eq!(got, want);
    assert_eq!(region.constraints().len(), want.len() + 4);
}

#[test]
fn grouped_coding_cells_on_four_receivers() {
    let q = four();
    let (grouping, configs) = table3_preset();
    let dirs: [&[usize]; 8] = [&[1], &[2], &[3], &[4], &[1, 2], &[1, 3], &[1, 4], &[3, 4]];
    let rows: [(&[&[usize]], [i64; 8]); 8] = [
        (&[&[1]], [1, 0, 0, 0, 1, 1, 1, 0]),
        (&[&[2]], [0, 1, 0, 0, 1, 0, 0, 0]),
        (&[&[3]], [0, 0, 1, 0, 0, 1, 0, 1]),
        (&[&[4]], [0, 0, 0, 1, 0, 0, 1, 1]),
        (&[&[1, 2]], [1, 1, 0, 0, 1, 1, 1, 0]),
        (&[&[1, 3], &[3, 4]], [1, 0, 2, 1, 1, 2, 2, 2]),
        (&[&[2, 3], &[2, 4]], [0, 2, 1, 1, 2, 1, 1, 2]),
        (
            &[&[1, 4], &[1, 2, 3, 4], &[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]],
            [5, 4, 4, 5, 6, 6, 6, 6],
        ),
    ];
    for (servers, cells) in &rows {
        let mut key: Vec<SubsetId> = servers.iter().map(|ids| s(ids)).collect();
        key.sort();
        let at = grouping.groups().iter().position(|g| g == &key).unwrap();
        for (d, want) in dirs.iter().zip(cells) {
            let (v, _) = group_support(&q, &grouping.groups()[at], &configs[at], &dir(4, d)).unwrap();
            assert_eq!(v, int(*want), "group {servers:?} dir {d:?}");
        }
    }
    let fixed = Decoding::Fixed(configs.clone());
    let sums = [8, 8, 8, 8, 12, 12, 12, 12];
    for (d, want) in dirs.iter().zip(sums) {
        let v = scheme_grouped(&q, &grouping, &fixed, &dir(4, d), BUDGET).unwrap();
        assert_eq!(v.value, int(want), "dir {d:?}");
    }
    let all = dir(4, &[1, 2, 3, 4]);
    let total = scheme_grouped(&q, &grouping, &fixed, &all, BUDGET).unwrap().value;
    assert_eq!(total, int(24));
    assert_eq!(outer_support(&q, OuterBoundKind::Polymatroid, &all).unwrap(), int(24));
}

#[test]
fn grouped_preset_is_below_outer_in_untabulated_directions() {
    let q = four();
    let (grouping, configs) = table3_preset();
    let fixed = Decoding::Fixed(configs);
    for (d, inner, outer) in [(&[1, 2, 3][..], 18, 20), (&[1, 2, 4][..], 19, 20)] {
        let w = dir(4, d);
        assert_eq!(scheme_grouped(&q, &grouping, &fixed, &w, BUDGET).unwrap().value, int(inner));
        assert_eq!(outer_support(&q, OuterBoundKind::Polymatroid, &w).unwrap(), int(outer));
    }
}
