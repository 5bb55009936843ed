//! Dimension bookkeeping for the verified families.
//!
//! Every configuration contributes parameters through the smoothing choices
//! of its anticanonical cycle: each smoothed double point carries two, but
//! smoothings whose fan directions are linearly dependent share one.  On top
//! of the cycle parameters the ambient construction always adds four frame
//! parameters and absorbs one (two for the rigid-pencil family) into
//! automorphisms.  The module also records the tangent-sheaf Euler
//! characteristics anchoring the top of the ladder.

use crate::cycles::Event;
use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::poly::{rat, Rat};
use crate::scenario::{self, Scenario};
use crate::threefold::DsType;

/// Frame parameters added by the ambient construction before absorption.
pub const FRAME_PARAMETERS: i64 = 4;

/// Euler characteristic of the tangent sheaf of a twistor space over the
/// connected sum of `n` projective planes.
pub fn chi_tangent_twistor(n: i64) -> i64 {
    15 - 7 * n
}

/// Euler characteristic of the tangent sheaf of the relevant rational
/// surfaces, by canonical self-intersection.
pub fn chi_tangent_surface(k_sq: i64) -> i64 {
    2 * k_sq - 10
}

/// Cohomology bookkeeping around a half-anticanonical surface inside the
/// threefold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiagramDims {
    /// Sections of the half-anticanonical class on the surface.
    pub h0_half: i64,
    /// Deformations of the pair (threefold, surface).
    pub h1_pair: i64,
    /// Deformations of the threefold fixing the surface.
    pub h1_twisted: i64,
}

/// The deformation count of the pair gains the surface sections and loses
/// the moving divisor inside its linear system; the twisted count then
/// drops by the surface's own deformations.
pub fn diagram_dims(h0_half: i64, k_sq: i64) -> DiagramDims {
    let h1_pair = 13 + h0_half - (h0_half - 1);
    DiagramDims {
        h0_half,
        h1_pair,
        h1_twisted: h1_pair + chi_tangent_surface(k_sq),
    }
}

/// Which family a configuration belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuliKind {
    Birational,
    DoubleSolid(DsType),
    ConicBundle,
    CampanaKreussler,
}

impl ModuliKind {
    /// Frame parameters absorbed by automorphisms of the model.
    pub fn absorbed(self) -> i64 {
        match self {
            ModuliKind::CampanaKreussler => 2,
            _ => 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            ModuliKind::Birational => "birational".to_string(),
            ModuliKind::DoubleSolid(ds) => format!("double solid {}", ds.name()),
            ModuliKind::ConicBundle => "conic bundle".to_string(),
            ModuliKind::CampanaKreussler => "rigid pencil".to_string(),
        }
    }
}

fn base_rays() -> Vec<[i64; 2]> {
    vec![[1, 0], [0, 1], [-1, 0], [0, -1]]
}

fn node_insert(rays: &[[i64; 2]], i: usize) -> Vec<[i64; 2]> {
    let m = rays.len();
    let j = (i + m / 2) % m;
    let plain = [
        rays[i][0] + rays[(i + 1) % m][0],
        rays[i][1] + rays[(i + 1) % m][1],
    ];
    let bar = [
        rays[j][0] + rays[(j + 1) % m][0],
        rays[j][1] + rays[(j + 1) % m][1],
    ];
    let mut out = Vec::with_capacity(m + 2);
    for p in 0..m {
        out.push(rays[p]);
        if p == i {
            out.push(plain);
        } else if p == j {
            out.push(bar);
        }
    }
    out
}

/// Fan rays attached to the cycle components after replaying the events.
/// Each node event inserts the sum of the adjacent rays, on both the plain
/// and the barred side.
pub fn component_rays(events: &[Event]) -> Result<Vec<[i64; 2]>> {
    let mut rays = base_rays();
    for ev in events {
        match ev {
            Event::Node { edge } => {
                if *edge >= rays.len() {
                    return Err(Error::BadIndex {
                        kind: "edge",
                        index: *edge,
                        len: rays.len(),
                    });
                }
                rays = node_insert(&rays, *edge);
            }
            Event::Smooth { comp, .. } => {
                if *comp >= rays.len() {
                    return Err(Error::BadIndex {
                        kind: "component",
                        index: *comp,
                        len: rays.len(),
                    });
                }
            }
        }
    }
    Ok(rays)
}

/// The fan directions recorded at the smoothing events, in event order.
pub fn smoothing_directions(events: &[Event]) -> Result<Vec<[i64; 2]>> {
    let mut rays = base_rays();
    let mut recorded = Vec::new();
    for ev in events {
        match ev {
            Event::Node { edge } => {
                if *edge >= rays.len() {
                    return Err(Error::BadIndex {
                        kind: "edge",
                        index: *edge,
                        len: rays.len(),
                    });
                }
                rays = node_insert(&rays, *edge);
            }
            Event::Smooth { comp, .. } => {
                if *comp >= rays.len() {
                    return Err(Error::BadIndex {
                        kind: "component",
                        index: *comp,
                        len: rays.len(),
                    });
                }
                recorded.push(rays[*comp]);
            }
        }
    }
    Ok(recorded)
}

/// Rank of a list of integer directions over the rationals.
pub fn direction_rank(dirs: &[[i64; 2]]) -> usize {
    let rows: Vec<Vec<Rat>> = dirs
        .iter()
        .map(|d| vec![rat(d[0]), rat(d[1])])
        .collect();
    rank(&rows)
}

/// One row of the dimension table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliCase {
    pub label: String,
    pub kind: ModuliKind,
    /// Half-length of the anticanonical cycle, where one exists.
    pub half: Option<usize>,
    /// Number of smoothed double points.
    pub smoothings: usize,
    /// Independent smoothing directions.
    pub directions: usize,
    /// Cycle parameters: two per smoothing minus the shared directions.
    pub v_dim: i64,
    /// Total family dimension.
    pub total: i64,
}

/// Assemble the dimension row of a scenario under the given family kind.
pub fn moduli_case(sc: &Scenario, kind: ModuliKind) -> Result<ModuliCase> {
    if let ModuliKind::DoubleSolid(ds) = kind {
        if sc.ds_type != Some(ds) {
            return Err(Error::Scenario(format!(
                "scenario {} does not carry subtype {}",
                sc.name,
                ds.name()
            )));
        }
    }
    let nodes = sc
        .events
        .iter()
        .filter(|e| matches!(e, Event::Node { .. }))
        .count();
    let dirs = smoothing_directions(&sc.events)?;
    let smoothings = dirs.len();
    let directions = direction_rank(&dirs);
    let v_dim = 2 * smoothings as i64 - directions as i64;
    Ok(ModuliCase {
        label: sc.name.clone(),
        kind,
        half: Some(2 + nodes),
        smoothings,
        directions,
        v_dim,
        total: v_dim + FRAME_PARAMETERS - kind.absorbed(),
    })
}

/// The rigid-pencil family: seven configuration parameters, two frame
/// parameters absorbed.
pub fn campana_kreussler_case() -> ModuliCase {
    let v_dim = 7;
    ModuliCase {
        label: "campana-kreussler".to_string(),
        kind: ModuliKind::CampanaKreussler,
        half: None,
        smoothings: 0,
        directions: 0,
        v_dim,
        total: v_dim + FRAME_PARAMETERS - ModuliKind::CampanaKreussler.absorbed(),
    }
}

/// The dimension table over the standard scenarios, ladder first, then the
/// rigid-pencil family.
pub fn standard_cases() -> Result<Vec<ModuliCase>> {
    let rows: [(&str, ModuliKind); 8] = [
        ("k6-triple", ModuliKind::Birational),
        ("k5-mixed", ModuliKind::Birational),
        ("type-iv", ModuliKind::DoubleSolid(DsType::IV)),
        ("k4-quartet", ModuliKind::Birational),
        ("type-iii", ModuliKind::DoubleSolid(DsType::III)),
        ("conic-bundle", ModuliKind::ConicBundle),
        ("type-ii", ModuliKind::DoubleSolid(DsType::II)),
        ("type-i", ModuliKind::DoubleSolid(DsType::I)),
    ];
    let mut out = Vec::new();
    for (name, kind) in rows {
        out.push(moduli_case(&scenario::builtin(name)?, kind)?);
    }
    out.push(campana_kreussler_case());
    Ok(out)
}

/// Render the standard table as Markdown.
pub fn moduli_table_markdown() -> Result<String> {
    let mut s = String::new();
    s.push_str("| case | family | half | smoothings | directions | V | dim |\n");
    s.push_str("|------|--------|------|------------|------------|---|-----|\n");
    for case in standard_cases()? {
        let half = match case.half {
            Some(h) => h.to_string(),
            None => "-".to_string(),
        };
        let (sm, di) = if case.half.is_some() {
            (case.smoothings.to_string(), case.directions.to_string())
        } else {
            ("-".to_string(), "-".to_string())
        };
        s.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            case.label,
            case.kind.label(),
            half,
            sm,
            di,
            case.v_dim,
            case.total
        ));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tangent_sheaf_characteristics() {
        assert_eq!(chi_tangent_twistor(4), -13);
        assert_eq!(chi_tangent_twistor(0), 15);
        assert_eq!(chi_tangent_surface(0), -10);
        assert_eq!(chi_tangent_surface(8), 6);
    }

    #[test]
    fn diagram_dimensions_anchor_the_ladder() {
        let dims = diagram_dims(2, 0);
        assert_eq!(dims.h1_pair, 14);
        assert_eq!(dims.h1_twisted, 4);
        // The pair count is independent of the section count.
        assert_eq!(diagram_dims(5, 0).h1_pair, 14);
    }

    #[test]
    fn standard_table_matches_the_frozen_dimensions() {
        let cases = standard_cases().unwrap();
        let rows: Vec<(String, Option<usize>, usize, usize, i64, i64)> = cases
            .iter()
            .map(|c| {
                (
                    c.label.clone(),
                    c.half,
                    c.smoothings,
                    c.directions,
                    c.v_dim,
                    c.total,
                )
            })
            .collect();
        let want: Vec<(String, Option<usize>, usize, usize, i64, i64)> = vec![
            ("k6-triple".into(), Some(6), 0, 0, 0, 3),
            ("k5-mixed".into(), Some(5), 1, 1, 1, 4),
            ("type-iv".into(), Some(5), 1, 1, 1, 4),
            ("k4-quartet".into(), Some(4), 2, 2, 2, 5),
            ("type-iii".into(), Some(4), 2, 2, 2, 5),
            ("conic-bundle".into(), Some(4), 2, 1, 3, 6),
            ("type-ii".into(), Some(3), 3, 2, 4, 7),
            ("type-i".into(), Some(2), 4, 2, 6, 9),
            ("campana-kreussler".into(), None, 0, 0, 7, 9),
        ];
        assert_eq!(rows, want);
        let mut totals: Vec<i64> = cases.iter().map(|c| c.total).collect();
        totals.sort();
        assert_eq!(totals, vec![3, 4, 4, 5, 5, 6, 7, 9, 9]);
    }

    #[test]
    fn ladder_totals_decrease_with_cycle_length() {
        let cases = standard_cases().unwrap();
        let total_of = |name: &str| cases.iter().find(|c| c.label == name).unwrap().total;
        assert!(total_of("type-i") > total_of("type-ii"));
        assert!(total_of("type-ii") > total_of("type-iii"));
        assert!(total_of("type-iii") > total_of("type-iv"));
    }

    #[test]
    fn collinear_smoothings_share_a_direction() {
        let cb = scenario::builtin("conic-bundle").unwrap();
        let dirs = smoothing_directions(&cb.events).unwrap();
        assert_eq!(dirs.len(), 2);
        assert_eq!(dirs[0], dirs[1]);
        assert_eq!(direction_rank(&dirs), 1);

        let ti = scenario::builtin("type-i").unwrap();
        let dirs = smoothing_directions(&ti.events).unwrap();
        assert_eq!(dirs.len(), 4);
        assert_eq!(direction_rank(&dirs), 2);
    }

    #[test]
    fn ray_tracking_matches_component_counts() {
        for sc in scenario::all_builtins().unwrap() {
            let cfg = sc.realize().unwrap();
            let rays = component_rays(&sc.events).unwrap();
            assert_eq!(rays.len(), cfg.len(), "{}", sc.name);
        }
    }

    #[test]
    fn toric_rays_satisfy_the_fan_relation() {
        // On a smooth toric surface consecutive fan rays obey
        // v[p-1] + v[p+1] + a[p] * v[p] = 0 with a[p] the self-intersection.
        for name in ["k6-long", "k6-triple", "k6-alternating", "k5-chain"] {
            let sc = scenario::builtin(name).unwrap();
            let cfg = sc.realize().unwrap();
            assert!(cfg.is_toric(), "{name}");
            let rays = component_rays(&sc.events).unwrap();
            let string = cfg.string();
            let m = rays.len();
            for p in 0..m {
                let prev = rays[(p + m - 1) % m];
                let next = rays[(p + 1) % m];
                let a = string[p];
                for axis in 0..2 {
                    assert_eq!(
                        prev[axis] + next[axis] + a * rays[p][axis],
                        0,
                        "{name} component {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn double_solid_rows_require_matching_subtypes() {
        let sc = scenario::builtin("type-ii").unwrap();
        assert!(moduli_case(&sc, ModuliKind::DoubleSolid(DsType::III)).is_err());
        assert!(moduli_case(&sc, ModuliKind::DoubleSolid(DsType::II)).is_ok());
    }

    #[test]
    fn markdown_table_lists_every_case() {
        let table = moduli_table_markdown().unwrap();
        assert!(table.starts_with("| case |"));
        assert!(table.contains("| type-i | double solid I | 2 | 4 | 2 | 6 | 9 |"));
        assert!(table.contains("| conic-bundle | conic bundle | 4 | 2 | 1 | 3 | 6 |"));
        assert!(table.contains("| campana-kreussler | rigid pencil | - | - | - | 7 | 9 |"));
        assert_eq!(table.lines().count(), 11);
    }

    proptest! {
        #[test]
        fn random_scripts_keep_the_parameter_count_in_range(
            raw in proptest::collection::vec((any::<bool>(), 0usize..64), 0..5)
        ) {
            let mut events = Vec::new();
            let mut len = 4usize;
            for (is_node, pick) in raw {
                if is_node {
                    events.push(Event::Node { edge: pick % len });
                    len += 2;
                } else {
                    events.push(Event::Smooth { comp: pick % len, t: None });
                }
            }
            let smooths = events.iter().filter(|e| matches!(e, Event::Smooth { .. })).count();
            let rays = component_rays(&events).unwrap();
            prop_assert_eq!(rays.len(), len);
            let dirs = smoothing_directions(&events).unwrap();
            prop_assert_eq!(dirs.len(), smooths);
            let r = direction_rank(&dirs);
            prop_assert!(r <= smooths.min(2));
            let v = 2 * smooths as i64 - r as i64;
            prop_assert!(v >= smooths as i64);
            prop_assert!(v <= 2 * smooths as i64);
        }
    }
}
