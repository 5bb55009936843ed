//! The full verification suite: every frozen number of the study recomputed
//! from scratch and compared against its pinned value.
//!
//! Check identifiers are grouped by area — `cycle.*` (enumeration and
//! canonical strings), `h0.*` (section counts and independent oracles),
//! `surface.*` (lattice spot values), `threefold.*` (triple products,
//! elimination, images), `branch.*` (incidence, half-cycle selections,
//! quartic assembly, quadric dimension counts, double curves), and
//! `moduli.*` (dimension table).  `run_all` is deterministic for a fixed
//! seed; the CLI exposes it as `paper-check`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::branch::{self, HalfCycle};
use crate::cycles::{enumerate, string_text};
use crate::error::Result;
use crate::linsys::{h0_anticanonical, h0_double_anticanonical, oracle_h0, toric};
use crate::moduli;
use crate::report::CheckReport;
use crate::scenario;
use crate::threefold::{self, DsType, GlobalClass, GlobalSym, Model};

/// The nine standard surfaces with their double-anticanonical section counts.
pub const DOUBLE_H0: [(&str, i64); 9] = [
    ("k6-triple", 5),
    ("k6-alternating", 7),
    ("type-iv", 3),
    ("k5-mixed", 5),
    ("type-iii", 3),
    ("k4-quartet", 5),
    ("conic-bundle", 3),
    ("type-ii", 3),
    ("type-i", 3),
];

fn rep(block: &[i64], times: usize) -> Vec<i64> {
    let mut v = Vec::with_capacity(block.len() * times);
    for _ in 0..times {
        v.extend_from_slice(block);
    }
    v
}

/// Frozen canonical self-intersection strings of the built-in scenarios.
pub fn frozen_strings() -> Vec<(&'static str, Vec<i64>)> {
    vec![
        ("k6-long", rep(&[-4, -1, -2, -2, -2, -1], 2)),
        ("k6-triple", rep(&[-3, -2, -1], 4)),
        ("k6-alternating", rep(&[-3, -1], 6)),
        ("k5-chain", rep(&[-3, -1, -2, -2, -1], 2)),
        ("type-iv", rep(&[-3, -2, -2, -2, -1], 2)),
        ("k5-mixed", rep(&[-3, -2, -1, -3, -1], 2)),
        ("type-iii", rep(&[-3, -2, -2, -1], 2)),
        ("k4-quartet", rep(&[-3, -1], 4)),
        ("conic-bundle", rep(&[-3, -2, -1, -2], 2)),
        ("type-ii", rep(&[-3, -2, -1], 2)),
        ("type-i", rep(&[-3, -1], 2)),
    ]
}

// ---------------------------------------------------------------------------
// cycle.*: enumeration and canonical strings.

fn cycle_checks(r: &mut CheckReport, seed: u64) -> Result<()> {
    let entries = enumerate(4);
    let mut k6: Vec<Vec<i64>> = entries
        .iter()
        .filter(|e| e.all_node && e.length == 12)
        .map(|e| e.canonical.clone())
        .collect();
    k6.sort();
    let mut want: Vec<Vec<i64>> = frozen_strings()
        .into_iter()
        .filter(|(n, _)| n.starts_with("k6"))
        .map(|(_, s)| s)
        .collect();
    want.sort();
    r.expect_eq(
        "cycle.enumeration.k6",
        "canonical strings of the node-only depth-4 branch",
        want.iter().map(|s| string_text(s)).collect::<Vec<_>>(),
        k6.iter().map(|s| string_text(s)).collect::<Vec<_>>(),
    );
    r.expect_true(
        "cycle.enumeration.lengths",
        "every enumerated string has even length between 4 and 12",
        entries
            .iter()
            .all(|e| e.length % 2 == 0 && (4..=12).contains(&e.length)),
    );
    for (name, want) in frozen_strings() {
        let cfg = scenario::builtin(name)?.realize()?;
        r.expect_eq(
            format!("cycle.string.{name}"),
            format!("canonical self-intersection string of {name}"),
            string_text(&want),
            string_text(&cfg.canonical_string()),
        );
    }
    let cfg = scenario::builtin("k6-long")?.realize()?;
    r.expect_eq(
        "cycle.k6-long.excess",
        "anticanonical section count on the long k=6 surface",
        3,
        h0_anticanonical(&cfg, seed)?.value,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// h0.*: section counts and independent oracles.

fn h0_checks(r: &mut CheckReport, seed: u64) -> Result<()> {
    let mut doubles = Vec::new();
    for (name, want) in DOUBLE_H0 {
        let cfg = scenario::builtin(name)?.realize()?;
        let got = h0_double_anticanonical(&cfg, seed)?.value;
        doubles.push(got);
        r.expect_eq(
            format!("h0.double.{name}"),
            format!("double-anticanonical section count on {name}"),
            want,
            got,
        );
    }
    let mut twistor: Vec<i64> = doubles.iter().map(|v| v + 2).collect();
    twistor.sort();
    twistor.dedup();
    r.expect_eq(
        "h0.twistor.values",
        "distinct anticanonical section counts upstairs (plus-two rule)",
        vec![5, 7, 9],
        twistor,
    );
    for (name, want) in DOUBLE_H0 {
        let cfg = scenario::builtin(name)?.realize()?;
        let lat = cfg.lattice();
        let route = h0_double_anticanonical(&cfg, seed)?.value;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let got = oracle_h0(&cfg, &lat.anticanonical().scale(2), &mut rng)?;
        r.expect_eq(
            format!("h0.oracle.{name}"),
            format!("point-condition oracle on the double-anticanonical class of {name}"),
            route,
            got,
        );
        if cfg.is_toric() {
            r.expect_eq(
                format!("h0.toric.{name}"),
                format!("lattice-point count of the double-anticanonical polygon of {name}"),
                want,
                toric::anticanonical_multiple_h0(&cfg.string(), 2)?,
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// surface.*: lattice spot values.

fn surface_checks(r: &mut CheckReport, seed: u64) -> Result<()> {
    let cfg = scenario::builtin("k4-quartet")?.realize()?;
    let lat = cfg.lattice();
    let mobile = h0_double_anticanonical(&cfg, seed)?.mobile;
    r.expect_eq(
        "surface.quartet.mobile",
        "mobile part of the double-anticanonical system on k4-quartet",
        lat.parse_class("2*f1 + 4*f2 - 2*e1 - e3 - e4 - 2*e5 - e7 - e8")?,
        mobile.clone(),
    );
    r.expect_eq(
        "surface.quartet.square",
        "self-intersection of the mobile part",
        4,
        lat.self_int(&mobile),
    );
    r.expect_eq(
        "surface.quartet.genus",
        "genus of the mobile part",
        1,
        lat.genus(&mobile),
    );

    let cfg = scenario::builtin("type-ii")?.realize()?;
    let lat = cfg.lattice();
    let special = branch::special_class(&lat, 1)?;
    r.expect_eq(
        "surface.type-ii.pairing",
        "special class against the first cycle component",
        -2,
        lat.pair(&special, &cfg.component_classes()[0]),
    );

    for (name, pairs) in [("type-i", 3usize), ("type-ii", 2), ("type-iii", 1)] {
        let cfg = scenario::builtin(name)?.realize()?;
        for i in 1..=pairs {
            r.expect_eq(
                format!("surface.special.{name}.{i}"),
                format!("section count of the special class swapping pair {i} on {name}"),
                1,
                branch::special_class_h0(&cfg, i, seed)?.value,
            );
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// threefold.*: triple products, elimination, images.

fn random_class(m: &Model, rng: &mut ChaCha20Rng) -> GlobalClass {
    let mut g = GlobalClass::f(rng.gen_range(-3..=3));
    for &t in &m.sheets {
        let c = rng.gen_range(-3..=3);
        if c != 0 {
            g.add_sym(GlobalSym::Sheet(t), c);
        }
    }
    g
}

fn frozen_images(ds: DsType) -> &'static str {
    match ds {
        DsType::I => "E1 -> line; E2 -> point; cE1 -> line; cE2 -> point; \
                      L1 -> conic; L2 -> conic",
        DsType::II => "E1 -> point; E2 -> line; E3 -> point; cE1 -> point; \
                      cE2 -> line; cE3 -> point; D1 -> plane (birational); \
                      cD1 -> plane (birational); S3- -> line; S3+ -> line",
        DsType::III => "E1 -> point; E2 -> point; E3 -> line; E4 -> point; \
                      cE1 -> point; cE2 -> point; cE3 -> line; cE4 -> point; \
                      D1 -> line; D2 -> plane (birational); cD1 -> line; \
                      cD2 -> plane (birational); S4- -> line; S4+ -> line",
        DsType::IV => "E1 -> point; E2 -> point; E3 -> point; E4 -> line; \
                      E5 -> point; cE1 -> point; cE2 -> point; cE3 -> point; \
                      cE4 -> line; cE5 -> point; D1 -> line; D2 -> line; \
                      D3 -> plane (birational); cD1 -> line; cD2 -> line; \
                      cD3 -> plane (birational); S5- -> line; S5+ -> line",
    }
}

fn frozen_points(ds: DsType) -> &'static str {
    match ds {
        DsType::I => "{E2} / {cE2}",
        DsType::II => "{cE3, E1} / {E3, cE1}",
        DsType::III => "{cE4, E1, E2} / {E4, cE1, cE2}",
        DsType::IV => "{cE5, E1, E2, E3} / {E5, cE1, cE2, cE3}",
    }
}

fn frozen_base_curves(ds: DsType) -> &'static str {
    match ds {
        DsType::I => "none",
        DsType::II => "S3-∩E1, S3+∩cE1",
        DsType::III => "S4-∩E1, S4-∩E2, S4+∩cE1, S4+∩cE2",
        DsType::IV => "S5-∩E1, S5-∩E2, S5-∩E3, S5+∩cE1, S5+∩cE2, S5+∩cE3",
    }
}

fn threefold_checks(r: &mut CheckReport, seed: u64) -> Result<()> {
    let m = threefold::quartet();
    let f = GlobalClass::f(1);
    let l = m.l.clone();
    r.expect_eq(
        "threefold.quartet.fcube",
        "triple self-product of the fiber class",
        0,
        m.triple(&f, &f, &f)?,
    );
    let mut squares = Vec::new();
    let mut cubes = Vec::new();
    for &t in &m.sheets {
        let e = GlobalClass::sheet(t);
        squares.push(m.triple(&l, &l, &e)?);
        cubes.push(m.triple(&e, &e, &e)?);
    }
    r.expect_eq(
        "threefold.quartet.sheet-squares",
        "squared system against each quartet sheet",
        vec![0; squares.len()],
        squares,
    );
    r.expect_eq(
        "threefold.quartet.sheet-cubes",
        "cube of each quartet sheet",
        vec![4; cubes.len()],
        cubes,
    );
    r.expect_eq(
        "threefold.quartet.slide",
        "squared system against fiber multiples 1..3",
        vec![4, 8, 12],
        (1..=3)
            .map(|k| m.triple(&l, &l, &f.scale(k)))
            .collect::<Result<Vec<i64>>>()?,
    );
    r.expect_eq(
        "threefold.quartet.lcube",
        "triple self-product of the quartet system",
        8,
        m.l_cubed()?,
    );

    for ds in DsType::all() {
        let m = if ds == DsType::I {
            threefold::stage1(ds)
        } else {
            threefold::stage2(ds)?
        };
        let mut ok = true;
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ ds.k() as u64);
        for _ in 0..100 {
            let x = random_class(&m, &mut rng);
            let y = random_class(&m, &mut rng);
            let z = random_class(&m, &mut rng);
            let t0 = m.triple(&x, &y, &z)?;
            ok &= t0 == m.triple(&y, &z, &x)?;
            ok &= t0 == m.triple(&z, &x, &y)?;
            ok &= t0 == m.triple(&y, &x, &z)?;
            ok &= t0 == m.triple(&x, &z, &y)?;
        }
        r.expect_true(
            format!("threefold.paths.{}", ds.name()),
            format!(
                "triple products are evaluation-order independent on subtype {} (100 random triples)",
                ds.name()
            ),
            ok,
        );
    }

    for ds in DsType::all() {
        let e = threefold::eliminate(ds)?;
        let name = ds.name();
        r.expect_true(
            format!("threefold.elim.{name}.free"),
            format!("final stage of subtype {name} has no base curves"),
            e.free,
        );
        r.expect_eq(
            format!("threefold.elim.{name}.lcube"),
            format!("final system cube on subtype {name}"),
            4,
            e.l_cubed,
        );
        let odp = match ds {
            DsType::I | DsType::II => 0,
            DsType::III => 2,
            DsType::IV => 4,
        };
        r.expect_eq(
            format!("threefold.elim.{name}.odp"),
            format!("ordinary double points of the subtype-{name} image"),
            odp,
            e.odp,
        );
        let got = if e.stages[0].base_curves.is_empty() {
            "none".to_string()
        } else {
            e.stages[0]
                .base_curves
                .iter()
                .map(|b| b.name())
                .collect::<Vec<_>>()
                .join(", ")
        };
        r.expect_eq(
            format!("threefold.elim.{name}.base-curves"),
            format!("stage-1 base curves of subtype {name}"),
            frozen_base_curves(ds).to_string(),
            got,
        );
        let mut tables_ok = threefold::validate_against_table(&threefold::stage1(ds)).is_ok();
        if ds != DsType::I {
            tables_ok &= threefold::validate_against_table(&threefold::stage2(ds)?).is_ok();
        }
        r.expect_true(
            format!("threefold.elim.{name}.tables"),
            format!("every printed restriction of subtype {name} matches the derived model"),
            tables_ok,
        );
        let imgs = e
            .images
            .iter()
            .map(|i| format!("{} -> {}", i.subject, i.kind))
            .collect::<Vec<_>>()
            .join("; ");
        r.expect_eq(
            format!("threefold.images.{name}"),
            format!("image profile of subtype {name}"),
            frozen_images(ds).split_whitespace().collect::<Vec<_>>().join(" "),
            imgs,
        );
        let pts = e
            .point_groups
            .iter()
            .map(|g| {
                let names: Vec<String> = g.iter().map(|t| t.to_string()).collect();
                format!("{{{}}}", names.join(", "))
            })
            .collect::<Vec<_>>()
            .join(" / ");
        r.expect_eq(
            format!("threefold.images.{name}.points"),
            format!("contracted sheet groups of subtype {name}"),
            frozen_points(ds).to_string(),
            pts,
        );
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// branch.*: incidence, half-cycle selections, quartic assembly, quadric
// dimension counts, double curves.

fn contains_selection(sols: &[[HalfCycle; 4]], sel: [HalfCycle; 4]) -> bool {
    sols.iter().any(|s| *s == sel)
}

fn branch_checks(r: &mut CheckReport, seed: u64) -> Result<()> {
    for (ds, want) in DsType::all().into_iter().zip([26usize, 18, 10, 2]) {
        r.expect_eq(
            format!("branch.incidence.{}", ds.name()),
            format!("incidence-condition total for subtype {}", ds.name()),
            want,
            branch::incidence_budget(ds).total(),
        );
    }

    for (name, want) in [
        ("k6-triple", 25usize),
        ("k6-alternating", 27),
        ("conic-bundle", 12),
        ("k5-mixed", 17),
        ("k4-quartet", 10),
    ] {
        let cfg = scenario::builtin(name)?.realize()?;
        r.expect_eq(
            format!("branch.halves.count.{name}"),
            format!("four-half selections matching twice the anticanonical class on {name}"),
            want,
            branch::half_cycle_search(&cfg)?.len(),
        );
    }

    let cfg = scenario::builtin("k6-triple")?.realize()?;
    let sols = branch::half_cycle_search(&cfg)?;
    r.expect_true(
        "branch.halves.selection.k6-triple",
        "both unpaired selections appear on k6-triple",
        contains_selection(&sols, [(1, -1), (2, 1), (3, 1), (4, 1)])
            && contains_selection(&sols, [(1, -1), (4, -1), (5, 1), (6, 1)]),
    );

    let cfg = scenario::builtin("k6-alternating")?.realize()?;
    let sols = branch::half_cycle_search(&cfg)?;
    let x1 = [(2, 1), (3, 1), (5, 1), (6, -1)];
    let x2 = [(1, -1), (3, -1), (4, 1), (6, 1)];
    let x3 = [(1, 1), (2, -1), (4, -1), (5, -1)];
    r.expect_true(
        "branch.halves.selection.k6-alternating",
        "the three alternating selections appear",
        contains_selection(&sols, x1)
            && contains_selection(&sols, x2)
            && contains_selection(&sols, x3),
    );
    let multiset = |sels: &[[HalfCycle; 4]]| {
        let mut all: Vec<HalfCycle> = sels.iter().flatten().copied().collect();
        all.sort();
        all
    };
    let with = |sel: [HalfCycle; 4], extra: [HalfCycle; 4]| {
        let mut all: Vec<HalfCycle> = sel.to_vec();
        all.extend(extra);
        all.sort();
        all
    };
    let bar = |sel: [HalfCycle; 4]| sel.map(branch::conjugate_half);
    r.expect_true(
        "branch.halves.relations",
        "the three pairwise unions match the conjugate third plus a trivial pair",
        multiset(&[x1, x2]) == with(bar(x3), [(3, -1), (3, 1), (6, -1), (6, 1)])
            && multiset(&[x2, x3]) == with(bar(x1), [(1, -1), (1, 1), (4, -1), (4, 1)])
            && multiset(&[x1, x3]) == with(bar(x2), [(2, -1), (2, 1), (5, -1), (5, 1)]),
    );

    let cfg = scenario::builtin("conic-bundle")?.realize()?;
    let sols = branch::half_cycle_search(&cfg)?;
    r.expect_true(
        "branch.halves.selection.conic-bundle",
        "the distinguished selection appears on conic-bundle",
        contains_selection(&sols, [(1, 1), (2, 1), (3, 1), (4, -1)]),
    );

    let cfg = scenario::builtin("k4-quartet")?.realize()?;
    let lat = cfg.lattice();
    let standard = [(1, 1), (2, 1), (3, 1), (4, -1)];
    r.expect_eq(
        "branch.halves.quartet-obstruction",
        "class excess of the standard selection on k4-quartet",
        lat.parse_class("e3 - e4 - e7 + e8")?,
        branch::selection_deficit(&cfg, &standard)?,
    );
    r.expect_true(
        "branch.halves.quartet-excluded",
        "the standard selection is not among the k4-quartet solutions",
        !contains_selection(&branch::half_cycle_search(&cfg)?, standard),
    );

    for ds in DsType::all() {
        let q = branch::fixture_quadric(ds);
        let params = branch::fixture_params(ds);
        let rep = branch::check_quartic(ds, &q, &params, seed)?;
        for (idx, c) in rep.checks.iter().enumerate() {
            r.expect_true(
                format!("branch.quartic.{}.{}", ds.name(), idx + 1),
                format!("subtype {}: {}", ds.name(), c.label),
                c.ok,
            );
        }
        r.expect_true(
            format!("branch.constraints.{}.fixture", ds.name()),
            format!(
                "fixture quadric of subtype {} satisfies every frozen constraint row",
                ds.name()
            ),
            branch::satisfies_constraints(ds, &q)?.iter().all(|c| c.ok),
        );
        let curves = branch::certify_double_curves(ds, &q, &params)?;
        r.expect_eq(
            format!("branch.curves.{}", ds.name()),
            format!("double-curve certifications passing on subtype {}", ds.name()),
            format!("{}/{}", curves.len(), curves.len()),
            format!("{}/{}", curves.iter().filter(|c| c.ok).count(), curves.len()),
        );
    }

    let profiles: [(DsType, Vec<(usize, usize, i64)>); 4] = [
        (DsType::I, vec![(8, 8, 6), (12, 11, 3)]),
        (DsType::II, vec![(12, 11, 3)]),
        (DsType::III, vec![(12, 10, 4)]),
        (DsType::IV, vec![(9, 9, 5)]),
    ];
    for (ds, want) in profiles {
        let dims = branch::constraint_dims(ds);
        let got: Vec<(usize, usize, i64)> =
            dims.iter().map(|s| (s.rows, s.rank, s.dim)).collect();
        r.expect_eq(
            format!("branch.dims.{}", ds.name()),
            format!("constraint (rows, rank, dim) profile for subtype {}", ds.name()),
            want,
            got,
        );
        let bound = if ds == DsType::IV { 5 } else { 2 };
        r.expect_at_least(
            format!("branch.dims.{}.final", ds.name()),
            format!("final quadric dimension for subtype {}", ds.name()),
            bound,
            dims.last().map(|s| s.dim).unwrap_or(-1),
        );
    }
    let first = branch::constraint_dims(DsType::I)
        .first()
        .map(|s| s.dim)
        .unwrap_or(-1);
    r.expect_eq(
        "branch.dims.I.first",
        "quadric dimension after the subtype-I point conditions",
        6,
        first,
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// moduli.*: dimension table.

fn moduli_checks(r: &mut CheckReport) -> Result<()> {
    r.expect_eq(
        "moduli.chi-twistor",
        "tangent-sheaf Euler characteristic over the four-plane sum",
        -13,
        moduli::chi_tangent_twistor(4),
    );
    let dims = moduli::diagram_dims(2, 0);
    r.expect_eq(
        "moduli.pair-dim",
        "deformations of the ambient-surface pair",
        14,
        dims.h1_pair,
    );
    r.expect_eq(
        "moduli.twisted-dim",
        "deformations fixing the surface",
        4,
        dims.h1_twisted,
    );
    let cases = moduli::standard_cases()?;
    for c in &cases {
        r.expect_eq(
            format!("moduli.total.{}", c.label),
            format!("family dimension of the {} case", c.label),
            match c.label.as_str() {
                "k6-triple" => 3,
                "k5-mixed" | "type-iv" => 4,
                "k4-quartet" | "type-iii" => 5,
                "conic-bundle" => 6,
                "type-ii" => 7,
                "type-i" | "campana-kreussler" => 9,
                other => panic!("unexpected case {other}"),
            },
            c.total,
        );
    }
    let mut totals: Vec<i64> = cases.iter().map(|c| c.total).collect();
    totals.sort();
    r.expect_eq(
        "moduli.multiset",
        "sorted family dimensions",
        vec![3, 4, 4, 5, 5, 6, 7, 9, 9],
        totals,
    );
    Ok(())
}

/// Run the whole suite with the given seed.
pub fn run_all(seed: u64) -> Result<CheckReport> {
    let mut r = CheckReport::new(seed);
    cycle_checks(&mut r, seed)?;
    h0_checks(&mut r, seed)?;
    surface_checks(&mut r, seed)?;
    threefold_checks(&mut r, seed)?;
    branch_checks(&mut r, seed)?;
    moduli_checks(&mut r)?;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn report() -> &'static CheckReport {
        static R: OnceLock<CheckReport> = OnceLock::new();
        R.get_or_init(|| run_all(0).unwrap())
    }

    #[test]
    fn the_full_suite_passes() {
        let r = report();
        let failures: Vec<String> = r
            .results
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: expected {}, computed {}", c.id, c.expected, c.computed))
            .collect();
        assert!(failures.is_empty(), "{}", failures.join("\n"));
        assert!(r.total() >= 60, "only {} checks", r.total());
    }

    #[test]
    fn the_suite_is_deterministic() {
        let again = run_all(0).unwrap();
        assert_eq!(report().to_json(), again.to_json());
        assert_eq!(report().to_markdown(), again.to_markdown());
    }

    #[test]
    fn every_area_is_covered() {
        let r = report();
        for prefix in ["cycle.", "h0.", "surface.", "threefold.", "branch.", "moduli."] {
            assert!(
                r.results.iter().any(|c| c.id.starts_with(prefix)),
                "no checks under {prefix}"
            );
        }
    }

    #[test]
    fn ids_are_unique() {
        let r = report();
        let mut ids: Vec<&str> = r.results.iter().map(|c| c.id.as_str()).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn filtering_narrows_to_one_area() {
        let r = report();
        let f = r.filtered("threefold");
        assert!(f.total() > 0);
        assert!(f.results.iter().all(|c| c.id.contains("threefold")));
        assert_eq!(r.filtered("no-such-check").total(), 0);
    }
}
