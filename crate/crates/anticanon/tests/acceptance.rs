//! Acceptance gate: each test covers one numbered criterion, verifies the
//! relevant subset of the verification suite, re-pins the printed values
//! against local copies of the frozen numbers, and emits one
//! "acceptance criterion N: PASS/FAIL" line.  All comparisons are exact.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use anticanon::check::run_all;
use anticanon::report::CheckReport;

fn suite() -> &'static (CheckReport, Duration) {
    static S: OnceLock<(CheckReport, Duration)> = OnceLock::new();
    S.get_or_init(|| {
        let t0 = Instant::now();
        let r = run_all(0).expect("verification suite runs");
        (r, t0.elapsed())
    })
}

/// Ids claimed by each criterion, used both for the per-criterion gate and
/// for the coverage test at the bottom.
fn claimed_ids(n: usize) -> Vec<String> {
    let scen9 = [
        "k6-triple",
        "k6-alternating",
        "type-iv",
        "k5-mixed",
        "type-iii",
        "k4-quartet",
        "conic-bundle",
        "type-ii",
        "type-i",
    ];
    let scen11 = {
        let mut v = vec!["k6-long", "k5-chain"];
        v.extend(scen9);
        v
    };
    let types = ["I", "II", "III", "IV"];
    let mut ids: Vec<String> = Vec::new();
    match n {
        1 => {
            ids.push("cycle.enumeration.k6".into());
            ids.push("cycle.enumeration.lengths".into());
            for s in scen11 {
                ids.push(format!("cycle.string.{s}"));
            }
            ids.push("cycle.k6-long.excess".into());
        }
        2 => {
            for s in scen9 {
                ids.push(format!("h0.double.{s}"));
            }
            ids.push("h0.twistor.values".into());
        }
        3 => {
            for s in scen9 {
                ids.push(format!("h0.oracle.{s}"));
            }
            ids.push("h0.toric.k6-triple".into());
            ids.push("h0.toric.k6-alternating".into());
        }
        4 => {
            ids.push("surface.quartet.mobile".into());
            ids.push("surface.quartet.square".into());
            ids.push("surface.quartet.genus".into());
            ids.push("surface.type-ii.pairing".into());
            for i in 1..=3 {
                ids.push(format!("surface.special.type-i.{i}"));
            }
            for i in 1..=2 {
                ids.push(format!("surface.special.type-ii.{i}"));
            }
            ids.push("surface.special.type-iii.1".into());
        }
        5 => {
            for part in ["fcube", "sheet-squares", "sheet-cubes", "slide", "lcube"] {
                ids.push(format!("threefold.quartet.{part}"));
            }
            for t in types {
                ids.push(format!("threefold.paths.{t}"));
            }
        }
        6 => {
            for t in types {
                for part in ["free", "lcube", "odp", "base-curves", "tables"] {
                    ids.push(format!("threefold.elim.{t}.{part}"));
                }
            }
        }
        7 => {
            for t in types {
                ids.push(format!("threefold.images.{t}"));
                ids.push(format!("threefold.images.{t}.points"));
            }
        }
        8 => {
            for t in types {
                ids.push(format!("branch.incidence.{t}"));
            }
            for s in [
                "k6-triple",
                "k6-alternating",
                "conic-bundle",
                "k5-mixed",
                "k4-quartet",
            ] {
                ids.push(format!("branch.halves.count.{s}"));
            }
            for s in ["k6-triple", "k6-alternating", "conic-bundle"] {
                ids.push(format!("branch.halves.selection.{s}"));
            }
            ids.push("branch.halves.relations".into());
            ids.push("branch.halves.quartet-obstruction".into());
            ids.push("branch.halves.quartet-excluded".into());
        }
        9 => {
            for t in types {
                for i in 1..=8 {
                    ids.push(format!("branch.quartic.{t}.{i}"));
                }
            }
        }
        10 => {
            for t in types {
                ids.push(format!("branch.dims.{t}"));
                ids.push(format!("branch.dims.{t}.final"));
                ids.push(format!("branch.constraints.{t}.fixture"));
                ids.push(format!("branch.curves.{t}"));
            }
            ids.push("branch.dims.I.first".into());
        }
        11 => {
            ids.push("moduli.chi-twistor".into());
            ids.push("moduli.pair-dim".into());
            ids.push("moduli.twisted-dim".into());
            for label in [
                "k6-triple",
                "k5-mixed",
                "type-iv",
                "k4-quartet",
                "type-iii",
                "conic-bundle",
                "type-ii",
                "type-i",
                "campana-kreussler",
            ] {
                ids.push(format!("moduli.total.{label}"));
            }
            ids.push("moduli.multiset".into());
        }
        _ => unreachable!(),
    }
    ids
}

fn computed(id: &str) -> Option<&'static str> {
    let (r, _) = suite();
    r.results
        .iter()
        .find(|c| c.id == id)
        .map(|c| c.computed.as_str())
}

/// Runs one criterion: every claimed check must exist and pass, and every
/// pinned (id, value) pair must match the suite's computed field exactly.
fn criterion(n: usize, pins: &[(&str, &str)]) {
    let (r, _) = suite();
    let mut problems = Vec::new();
    for id in claimed_ids(n) {
        match r.results.iter().find(|c| c.id == id) {
            None => problems.push(format!("missing check {id}")),
            Some(c) if !c.pass => problems.push(format!(
                "{}: expected {}, computed {}",
                c.id, c.expected, c.computed
            )),
            _ => {}
        }
    }
    for (id, want) in pins {
        match computed(id) {
            None => problems.push(format!("missing pinned check {id}")),
            Some(got) if got != *want => {
                problems.push(format!("{id}: pinned {want}, computed {got}"))
            }
            _ => {}
        }
    }
    let ok = problems.is_empty();
    println!(
        "acceptance criterion {n}: {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {n} failed:\n{}", problems.join("\n"));
}

#[test]
fn criterion_01_cycle_enumeration() {
    criterion(
        1,
        &[
            (
                "cycle.string.k6-long",
                "-4,-1,-2,-2,-2,-1,-4,-1,-2,-2,-2,-1",
            ),
            (
                "cycle.string.k6-triple",
                "-3,-2,-1,-3,-2,-1,-3,-2,-1,-3,-2,-1",
            ),
            (
                "cycle.string.k6-alternating",
                "-3,-1,-3,-1,-3,-1,-3,-1,-3,-1,-3,-1",
            ),
            ("cycle.k6-long.excess", "3"),
        ],
    );
}

#[test]
fn criterion_02_h0_table() {
    criterion(
        2,
        &[
            ("h0.double.k6-triple", "5"),
            ("h0.double.k6-alternating", "7"),
            ("h0.double.type-iv", "3"),
            ("h0.double.k5-mixed", "5"),
            ("h0.double.type-iii", "3"),
            ("h0.double.k4-quartet", "5"),
            ("h0.double.conic-bundle", "3"),
            ("h0.double.type-ii", "3"),
            ("h0.double.type-i", "3"),
            ("h0.twistor.values", "[5, 7, 9]"),
        ],
    );
}

#[test]
fn criterion_03_oracle_agreement() {
    criterion(
        3,
        &[
            ("h0.toric.k6-triple", "5"),
            ("h0.toric.k6-alternating", "7"),
        ],
    );
}

#[test]
fn criterion_04_lattice_spot_values() {
    criterion(
        4,
        &[
            ("surface.quartet.square", "4"),
            ("surface.quartet.genus", "1"),
            ("surface.type-ii.pairing", "-2"),
            ("surface.special.type-i.1", "1"),
            ("surface.special.type-i.2", "1"),
            ("surface.special.type-i.3", "1"),
            ("surface.special.type-ii.1", "1"),
            ("surface.special.type-ii.2", "1"),
            ("surface.special.type-iii.1", "1"),
        ],
    );
}

#[test]
fn criterion_05_threefold_products() {
    criterion(
        5,
        &[
            ("threefold.quartet.fcube", "0"),
            ("threefold.quartet.slide", "[4, 8, 12]"),
            ("threefold.quartet.lcube", "8"),
        ],
    );
}

#[test]
fn criterion_06_elimination_reports() {
    criterion(
        6,
        &[
            ("threefold.elim.I.base-curves", "none"),
            ("threefold.elim.II.base-curves", "S3-∩E1, S3+∩cE1"),
            (
                "threefold.elim.III.base-curves",
                "S4-∩E1, S4-∩E2, S4+∩cE1, S4+∩cE2",
            ),
            (
                "threefold.elim.IV.base-curves",
                "S5-∩E1, S5-∩E2, S5-∩E3, S5+∩cE1, S5+∩cE2, S5+∩cE3",
            ),
            ("threefold.elim.I.odp", "0"),
            ("threefold.elim.II.odp", "0"),
            ("threefold.elim.III.odp", "2"),
            ("threefold.elim.IV.odp", "4"),
            ("threefold.elim.I.lcube", "4"),
            ("threefold.elim.II.lcube", "4"),
            ("threefold.elim.III.lcube", "4"),
            ("threefold.elim.IV.lcube", "4"),
        ],
    );
}

#[test]
fn criterion_07_image_profiles() {
    criterion(
        7,
        &[
            ("threefold.images.I.points", "{E2} / {cE2}"),
            ("threefold.images.II.points", "{cE3, E1} / {E3, cE1}"),
            (
                "threefold.images.III.points",
                "{cE4, E1, E2} / {E4, cE1, cE2}",
            ),
            (
                "threefold.images.IV.points",
                "{cE5, E1, E2, E3} / {E5, cE1, cE2, cE3}",
            ),
        ],
    );
}

#[test]
fn criterion_08_branch_combinatorics() {
    criterion(
        8,
        &[
            ("branch.incidence.I", "26"),
            ("branch.incidence.II", "18"),
            ("branch.incidence.III", "10"),
            ("branch.incidence.IV", "2"),
            ("branch.halves.count.k6-triple", "25"),
            ("branch.halves.count.k6-alternating", "27"),
            ("branch.halves.count.conic-bundle", "12"),
            ("branch.halves.count.k5-mixed", "17"),
            ("branch.halves.count.k4-quartet", "10"),
            ("branch.halves.quartet-obstruction", "e3 - e4 - e7 + e8"),
        ],
    );
}

#[test]
fn criterion_09_quartic_validation() {
    criterion(9, &[]);
}

#[test]
fn criterion_10_quadric_dimension_counts() {
    criterion(
        10,
        &[
            ("branch.dims.I", "[(8, 8, 6), (12, 11, 3)]"),
            ("branch.dims.II", "[(12, 11, 3)]"),
            ("branch.dims.III", "[(12, 10, 4)]"),
            ("branch.dims.IV", "[(9, 9, 5)]"),
            ("branch.dims.I.first", "6"),
            ("branch.curves.I", "20/20"),
            ("branch.curves.II", "20/20"),
            ("branch.curves.III", "20/20"),
            ("branch.curves.IV", "20/20"),
        ],
    );
}

#[test]
fn criterion_11_moduli() {
    criterion(
        11,
        &[
            ("moduli.chi-twistor", "-13"),
            ("moduli.pair-dim", "14"),
            ("moduli.twisted-dim", "4"),
            ("moduli.multiset", "[3, 4, 4, 5, 5, 6, 7, 9, 9]"),
            ("moduli.total.campana-kreussler", "9"),
        ],
    );
}

#[test]
fn criteria_cover_every_check() {
    let (r, _) = suite();
    let mut claimed: Vec<String> = (1..=11).flat_map(claimed_ids).collect();
    claimed.sort();
    let dup: Vec<_> = claimed.windows(2).filter(|w| w[0] == w[1]).collect();
    assert!(dup.is_empty(), "ids claimed twice: {dup:?}");
    let mut actual: Vec<String> = r.results.iter().map(|c| c.id.clone()).collect();
    actual.sort();
    let missing: Vec<&String> = claimed.iter().filter(|i| !actual.contains(i)).collect();
    let unclaimed: Vec<&String> = actual.iter().filter(|i| !claimed.contains(i)).collect();
    assert!(
        missing.is_empty() && unclaimed.is_empty(),
        "claimed but absent: {missing:?}\npresent but unclaimed: {unclaimed:?}"
    );
}

#[test]
fn suite_runtime_is_bounded() {
    let (_, elapsed) = suite();
    assert!(
        *elapsed < Duration::from_secs(10),
        "verification suite took {elapsed:?}"
    );
}
