//! Named construction scenarios.
//!
//! A scenario file (`.acs`) is a small script describing how a surface is
//! built from the four-cycle on the quadric `F0`: a `base` line, a sequence
//! of `pair` events (each blows up a conjugate pair of points), a frozen
//! `catalog` of the expected component classes, and optional double-solid
//! metadata (`type`, `params`).  Realizing a scenario replays the events and
//! cross-checks every component class against the catalog, so the files act
//! as independent transcriptions rather than trusted inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::cycles::{parse_rat, CycleConfig, Event};
use crate::error::{Error, Result};
use crate::picard::{Class, Lattice};
use crate::poly::Rat;
use crate::threefold::DsType;

/// Names of the built-in scenarios, in catalog order.
pub const BUILTINS: [&str; 11] = [
    "k6-long",
    "k6-triple",
    "k6-alternating",
    "k5-chain",
    "type-iv",
    "k5-mixed",
    "type-iii",
    "k4-quartet",
    "conic-bundle",
    "type-ii",
    "type-i",
];

/// A parsed scenario: the construction script plus its frozen expectations.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub events: Vec<Event>,
    pub catalog: Vec<Class>,
    pub ds_type: Option<DsType>,
    pub params: BTreeMap<String, Rat>,
}

impl Scenario {
    /// Replay the events and validate the catalog; returns the realized
    /// configuration.
    pub fn realize(&self) -> Result<CycleConfig> {
        let cfg = CycleConfig::from_events(&self.events)?;
        let classes = cfg.component_classes();
        if classes.len() != self.catalog.len() {
            return Err(Error::Scenario(format!(
                "scenario '{}': catalog lists {} classes but the construction yields {} components",
                self.name,
                self.catalog.len(),
                classes.len()
            )));
        }
        for (i, (got, want)) in classes.iter().zip(&self.catalog).enumerate() {
            if got != want {
                return Err(Error::Scenario(format!(
                    "scenario '{}': component {} has class {} but the catalog says {}",
                    self.name,
                    i + 1,
                    got,
                    want
                )));
            }
        }
        Ok(cfg)
    }

    /// The lattice of the fully blown-up surface.
    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.events.len())
    }

    /// Render the scenario back into the file format.  `parse` of the result
    /// reproduces the scenario exactly.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name {}", self.name);
        let _ = writeln!(s, "base quadric-cycle");
        for e in &self.events {
            match e {
                Event::Node { edge } => {
                    let _ = writeln!(s, "pair node {edge}");
                }
                Event::Smooth { comp, t } => match t {
                    Some(tv) => {
                        let _ = writeln!(s, "pair smooth {comp} t={tv}");
                    }
                    None => {
                        let _ = writeln!(s, "pair smooth {comp}");
                    }
                },
            }
        }
        for c in &self.catalog {
            let _ = writeln!(s, "catalog {c}");
        }
        if let Some(ds) = self.ds_type {
            let _ = writeln!(s, "type {ds}");
        }
        for (k, v) in &self.params {
            let _ = writeln!(s, "params {k} = {v}");
        }
        s
    }
}

/// Parse a scenario file.  Errors carry 1-based line numbers.
pub fn parse(text: &str) -> Result<Scenario> {
    let mut name: Option<String> = None;
    let mut base_seen = false;
    let mut events: Vec<Event> = Vec::new();
    let mut catalog_raw: Vec<(usize, String)> = Vec::new();
    let mut ds_type: Option<DsType> = None;
    let mut params: BTreeMap<String, Rat> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ln = idx + 1;
        let err = |msg: String| Error::Scenario(format!("line {ln}: {msg}"));
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap();
        // The remainder of a `catalog` line is one class expression; other
        // directives are fully tokenized here.
        if head == "catalog" {
            let rest = line["catalog".len()..].trim();
            if rest.is_empty() {
                return Err(err("missing class expression".into()));
            }
            catalog_raw.push((ln, rest.to_string()));
            continue;
        }
        match head {
            "name" => {
                let n = toks.next().ok_or_else(|| err("missing scenario name".into()))?;
                name = Some(n.to_string());
            }
            "base" => {
                let b = toks.next().ok_or_else(|| err("missing base kind".into()))?;
                if b != "quadric-cycle" {
                    return Err(err(format!("unknown base kind '{b}'")));
                }
                base_seen = true;
            }
            "pair" => match toks.next() {
                Some("node") => {
                    let e = toks
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| err("node event needs an edge index".into()))?;
                    events.push(Event::Node { edge: e });
                }
                Some("smooth") => {
                    let c = toks
                        .next()
                        .and_then(|s| s.parse::<usize>().ok())
                        .ok_or_else(|| err("smooth event needs a component index".into()))?;
                    let t = match toks.next() {
                        None => None,
                        Some(opt) => {
                            let v = opt.strip_prefix("t=").ok_or_else(|| {
                                err(format!("unexpected token '{opt}' (expected t=<rational>)"))
                            })?;
                            parse_rat(v).map_err(|e| err(e.to_string()))?;
                            Some(v.to_string())
                        }
                    };
                    events.push(Event::Smooth { comp: c, t });
                }
                other => {
                    return Err(err(format!(
                        "unknown pair kind {:?} (expected node or smooth)",
                        other.unwrap_or("")
                    )));
                }
            },
            "type" => {
                let t = toks.next().ok_or_else(|| err("missing subtype".into()))?;
                ds_type = Some(DsType::parse(t).map_err(|e| err(e.to_string()))?);
            }
            "params" => {
                let key = toks.next().ok_or_else(|| err("missing parameter name".into()))?;
                if toks.next() != Some("=") {
                    return Err(err("expected '=' after the parameter name".into()));
                }
                let v = toks.next().ok_or_else(|| err("missing parameter value".into()))?;
                let v = parse_rat(v).map_err(|e| err(e.to_string()))?;
                params.insert(key.to_string(), v);
            }
            other => {
                return Err(err(format!("unknown directive '{other}'")));
            }
        }
        if let Some(extra) = toks.next() {
            return Err(err(format!("unexpected trailing token '{extra}'")));
        }
    }

    let name = name.ok_or_else(|| Error::Scenario("missing 'name' line".into()))?;
    if !base_seen {
        return Err(Error::Scenario(format!(
            "scenario '{name}': missing 'base quadric-cycle' line"
        )));
    }

    // Second pass: the catalog lives in the lattice of the finished surface,
    // with one exceptional pair per event.
    let lat = Lattice::new(events.len());
    let mut catalog = Vec::new();
    for (ln, text) in catalog_raw {
        let c = lat
            .parse_class(&text)
            .map_err(|e| Error::Scenario(format!("line {ln}: {e}")))?;
        catalog.push(c);
    }

    Ok(Scenario {
        name,
        events,
        catalog,
        ds_type,
        params,
    })
}

/// Load a scenario from a file on disk.
pub fn load(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)?;
    parse(&text)
}

const SRC_K6_LONG: &str = include_str!("../data/scenarios/k6-long.acs");
const SRC_K6_TRIPLE: &str = include_str!("../data/scenarios/k6-triple.acs");
const SRC_K6_ALTERNATING: &str = include_str!("../data/scenarios/k6-alternating.acs");
const SRC_K5_CHAIN: &str = include_str!("../data/scenarios/k5-chain.acs");
const SRC_TYPE_IV: &str = include_str!("../data/scenarios/type-iv.acs");
const SRC_K5_MIXED: &str = include_str!("../data/scenarios/k5-mixed.acs");
const SRC_TYPE_III: &str = include_str!("../data/scenarios/type-iii.acs");
const SRC_K4_QUARTET: &str = include_str!("../data/scenarios/k4-quartet.acs");
const SRC_CONIC_BUNDLE: &str = include_str!("../data/scenarios/conic-bundle.acs");
const SRC_TYPE_II: &str = include_str!("../data/scenarios/type-ii.acs");
const SRC_TYPE_I: &str = include_str!("../data/scenarios/type-i.acs");

/// Source text of a built-in scenario.
pub fn builtin_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "k6-long" => SRC_K6_LONG,
        "k6-triple" => SRC_K6_TRIPLE,
        "k6-alternating" => SRC_K6_ALTERNATING,
        "k5-chain" => SRC_K5_CHAIN,
        "type-iv" => SRC_TYPE_IV,
        "k5-mixed" => SRC_K5_MIXED,
        "type-iii" => SRC_TYPE_III,
        "k4-quartet" => SRC_K4_QUARTET,
        "conic-bundle" => SRC_CONIC_BUNDLE,
        "type-ii" => SRC_TYPE_II,
        "type-i" => SRC_TYPE_I,
        _ => return None,
    })
}

/// Parse a built-in scenario by name.
pub fn builtin(name: &str) -> Result<Scenario> {
    let text = builtin_text(name).ok_or_else(|| {
        Error::Scenario(format!(
            "unknown built-in scenario '{name}' (known: {})",
            BUILTINS.join(", ")
        ))
    })?;
    parse(text)
}

/// All built-in scenarios, parsed.
pub fn all_builtins() -> Result<Vec<Scenario>> {
    BUILTINS.iter().map(|n| builtin(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::canonical_string;
    use proptest::prelude::*;

    #[test]
    fn builtins_all_realize_with_expected_strings() {
        let expect: &[(&str, &[i64])] = &[
            ("k6-long", &[-4, -1, -2, -2, -2, -1, -4, -1, -2, -2, -2, -1]),
            ("k6-triple", &[-3, -2, -1, -3, -2, -1, -3, -2, -1, -3, -2, -1]),
            (
                "k6-alternating",
                &[-3, -1, -3, -1, -3, -1, -3, -1, -3, -1, -3, -1],
            ),
            ("k5-chain", &[-3, -1, -2, -2, -1, -3, -1, -2, -2, -1]),
            ("type-iv", &[-3, -2, -2, -2, -1, -3, -2, -2, -2, -1]),
            ("k5-mixed", &[-3, -2, -1, -3, -1, -3, -2, -1, -3, -1]),
            ("type-iii", &[-3, -2, -2, -1, -3, -2, -2, -1]),
            ("k4-quartet", &[-3, -1, -3, -1, -3, -1, -3, -1]),
            ("conic-bundle", &[-3, -2, -1, -2, -3, -2, -1, -2]),
            ("type-ii", &[-3, -2, -1, -3, -2, -1]),
            ("type-i", &[-3, -1, -3, -1]),
        ];
        assert_eq!(expect.len(), BUILTINS.len());
        for (name, want) in expect {
            let sc = builtin(name).unwrap();
            assert_eq!(&sc.name, name);
            let cfg = sc.realize().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(
                cfg.canonical_string(),
                *want,
                "canonical string of {name}"
            );
            assert_eq!(cfg.len(), sc.catalog.len());
        }
    }

    #[test]
    fn builtin_subtype_metadata() {
        use crate::threefold::DsType;
        let cases = [
            ("type-i", Some(DsType::I)),
            ("type-ii", Some(DsType::II)),
            ("type-iii", Some(DsType::III)),
            ("type-iv", Some(DsType::IV)),
            ("k6-long", None),
            ("conic-bundle", None),
        ];
        for (name, want) in cases {
            assert_eq!(builtin(name).unwrap().ds_type, want, "{name}");
        }
        let iii = builtin("type-iii").unwrap();
        assert_eq!(iii.params.get("a"), Some(&crate::cycles::parse_rat("2").unwrap()));
        let iv = builtin("type-iv").unwrap();
        assert_eq!(iv.params.get("a1"), Some(&crate::cycles::parse_rat("2").unwrap()));
        assert_eq!(iv.params.get("a2"), Some(&crate::cycles::parse_rat("3").unwrap()));
    }

    #[test]
    fn serialize_round_trips_every_builtin() {
        for name in BUILTINS {
            let sc = builtin(name).unwrap();
            let again = parse(&sc.serialize()).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(sc, again, "round trip of {name}");
        }
    }

    #[test]
    fn catalog_mismatch_is_rejected() {
        let mut sc = builtin("type-i").unwrap();
        let lat = sc.lattice();
        sc.catalog[0] = sc.catalog[0].add(&lat.e(0));
        let err = sc.realize().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("component 1"), "unexpected message: {msg}");
    }

    #[test]
    fn out_of_range_smooth_event_reports_the_index() {
        let text = "name bad\nbase quadric-cycle\npair smooth 9\n";
        let sc = parse(text).unwrap();
        let err = sc.realize().unwrap_err();
        match err {
            Error::BadIndex { kind, index, len } => {
                assert_eq!(kind, "component");
                assert_eq!(index, 9);
                assert_eq!(len, 4);
            }
            other => panic!("expected BadIndex, got {other}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "name bad\nbase quadric-cycle\nfrobnicate 3\n";
        let msg = parse(text).unwrap_err().to_string();
        assert!(msg.contains("line 3"), "unexpected message: {msg}");
        let text2 = "name bad\nbase quadric-cycle\ncatalog f1 + what\n";
        let msg2 = parse(text2).unwrap_err().to_string();
        assert!(msg2.contains("line 3"), "unexpected message: {msg2}");
    }

    #[test]
    fn missing_header_lines_are_errors() {
        assert!(parse("base quadric-cycle\n").is_err());
        assert!(parse("name x\n").is_err());
        assert!(parse("name x\nbase hexagon\n").is_err());
    }

    #[test]
    fn explicit_smooth_coordinate_round_trips() {
        let text = "name t\nbase quadric-cycle\npair smooth 0 t=1/2\ncatalog f1 - e1\ncatalog f2\ncatalog f1 - e2\ncatalog f2\n";
        let sc = parse(text).unwrap();
        match &sc.events[0] {
            Event::Smooth { comp: 0, t: Some(v) } => assert_eq!(v, "1/2"),
            other => panic!("unexpected event {other:?}"),
        }
        sc.realize().unwrap();
        assert_eq!(parse(&sc.serialize()).unwrap(), sc);
    }

    /// Random event scripts: serialization round-trips and the realized
    /// catalog always validates.
    fn arb_events() -> impl Strategy<Value = Vec<(bool, usize)>> {
        proptest::collection::vec((any::<bool>(), 0usize..100), 0..5)
    }

    proptest! {
        #[test]
        fn random_scenarios_round_trip(seed in arb_events()) {
            // Interpret the raw pairs against the evolving cycle so every
            // event index is valid.
            let mut cfg = CycleConfig::base();
            let mut events = Vec::new();
            for (is_node, raw) in seed {
                let m = cfg.len();
                if is_node {
                    let edge = raw % m;
                    cfg.apply_node(edge).unwrap();
                    events.push(Event::Node { edge });
                } else {
                    let comp = raw % m;
                    cfg.apply_smooth(comp, None).unwrap();
                    events.push(Event::Smooth { comp, t: None });
                }
            }
            let sc = Scenario {
                name: "random".into(),
                events,
                catalog: cfg.component_classes(),
                ds_type: None,
                params: BTreeMap::new(),
            };
            let again = parse(&sc.serialize()).unwrap();
            prop_assert_eq!(&again, &sc);
            let realized = sc.realize().unwrap();
            prop_assert_eq!(realized.canonical_string(), cfg.canonical_string());
        }

        #[test]
        fn canonical_strings_of_builtins_are_rotation_invariant(rot in 0usize..12) {
            // The canonical form pinned for each builtin is invariant under
            // re-canonicalizing any rotation of the raw string.
            for name in BUILTINS {
                let cfg = builtin(name).unwrap().realize().unwrap();
                let s = cfg.string();
                let m = s.len();
                let rotated: Vec<i64> = (0..m).map(|i| s[(i + rot) % m]).collect();
                prop_assert_eq!(canonical_string(&rotated), cfg.canonical_string());
            }
        }
    }
}
