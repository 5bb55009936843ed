//! Anticanonical cycles of rational curves on blowups of the quadric `F0`,
//! built up by conjugate pairs of blowup events.
//!
//! The base configuration is the 4-cycle `C1, C2, cC1, cC2` cut out by the
//! four curves `u = 1, v = 1, u = -1, v = -1`, with the real structure
//! `sigma(u, v) = (-1/u, -1/v)` exchanging `C1 <-> cC1` and `C2 <-> cC2`
//! and the four nodes at `(+-1, +-1)`. Two kinds of events act on a
//! configuration, always as a conjugate pair of blowups:
//!
//! - `node <edge>`: blow up the node joining two adjacent components (and
//!   its conjugate). The cycle grows by two components.
//! - `smooth <comp> [t]`: blow up a smooth point of one component (and its
//!   conjugate). The cycle length is unchanged, the component's
//!   self-intersection drops by one.
//!
//! Every blown-up point is recorded with exact chart data (proper points of
//! `F0`, chart origins for points infinitely near a previous center, or a
//! slope along an exceptional curve), so downstream code can impose exact
//! point conditions on forms. Conjugate points of symbolic smooth tags track
//! the derivative scalings of `sigma` through the chart tower, which keeps
//! the conjugate cluster exact once tags are resolved.
//!
//! Throughout, components at positions `p` and `p + m/2` are conjugate; the
//! event constructors preserve this invariant.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::picard::{Class, Lattice};
use crate::poly::{Rat, rat, ratio};

/// Symbolic basis element of the blowup lattice: the two rulings and one
/// exceptional class per event side.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum BasisEl {
    F1,
    F2,
    E(usize),
    EBar(usize),
}

/// A divisor class with symbolic exceptional labels, independent of the
/// final number of events.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymClass(pub BTreeMap<BasisEl, i64>);

impl SymClass {
    pub fn single(b: BasisEl) -> Self {
        let mut m = BTreeMap::new();
        m.insert(b, 1);
        SymClass(m)
    }

    pub fn coeff(&self, b: BasisEl) -> i64 {
        self.0.get(&b).copied().unwrap_or(0)
    }

    pub fn add_el(&mut self, b: BasisEl, k: i64) {
        let c = self.0.entry(b).or_insert(0);
        *c += k;
        if *c == 0 {
            self.0.remove(&b);
        }
    }

    pub fn add(&self, other: &SymClass) -> SymClass {
        let mut out = self.clone();
        for (b, k) in &other.0 {
            out.add_el(*b, *k);
        }
        out
    }

    pub fn sub(&self, other: &SymClass) -> SymClass {
        let mut out = self.clone();
        for (b, k) in &other.0 {
            out.add_el(*b, -*k);
        }
        out
    }

    /// Intersection pairing: `f1.f2 = 1`, exceptional classes orthonormal
    /// with square -1.
    pub fn pair(&self, other: &SymClass) -> i64 {
        let mut acc = self.coeff(BasisEl::F1) * other.coeff(BasisEl::F2)
            + self.coeff(BasisEl::F2) * other.coeff(BasisEl::F1);
        for (b, k) in &self.0 {
            match b {
                BasisEl::E(_) | BasisEl::EBar(_) => acc -= k * other.coeff(*b),
                _ => {}
            }
        }
        acc
    }

    pub fn conjugate(&self) -> SymClass {
        let mut out = SymClass::default();
        for (b, k) in &self.0 {
            let cb = match b {
                BasisEl::F1 => BasisEl::F1,
                BasisEl::F2 => BasisEl::F2,
                BasisEl::E(j) => BasisEl::EBar(*j),
                BasisEl::EBar(j) => BasisEl::E(*j),
            };
            out.add_el(cb, *k);
        }
        out
    }

    /// Concrete coordinate vector in a lattice with `pairs` event pairs.
    pub fn to_class(&self, lat: &Lattice) -> Class {
        let mut c = lat.zero();
        for (b, k) in &self.0 {
            match b {
                BasisEl::F1 => c.0[0] += k,
                BasisEl::F2 => c.0[1] += k,
                BasisEl::E(j) => {
                    assert!(*j < lat.pairs, "event index beyond lattice");
                    c.0[2 + j] += k;
                }
                BasisEl::EBar(j) => {
                    assert!(*j < lat.pairs);
                    c.0[2 + lat.pairs + j] += k;
                }
            }
        }
        c
    }
}

/// Where a component came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Origin {
    /// A fiber `u = u0` of the first ruling, `u0` in `{1, -1}`.
    Ruling1 { u0: i64 },
    /// A fiber `v = v0` of the second ruling.
    Ruling2 { v0: i64 },
    /// The exceptional curve of the given event, on the plain or barred side.
    Exceptional { event: usize, barred: bool },
}

#[derive(Clone, Debug)]
pub struct CompData {
    pub class: SymClass,
    pub origin: Origin,
}

/// A smooth-point coordinate: explicit, or a symbol resolved only inside
/// randomized oracles. Conjugate points carry the transformed symbol.
#[derive(Clone, PartialEq, Debug)]
pub enum Tag {
    Rat(Rat),
    Sym { id: usize, map: SymMap },
}

/// How a symbol's drawn value maps to this coordinate.
#[derive(Clone, PartialEq, Debug)]
pub enum SymMap {
    Identity,
    /// `r -> -1/r`, the real structure on a ruling coordinate.
    NegInv,
    /// `r -> kappa * r`, the derivative of the real structure on an
    /// exceptional-curve slope.
    Scale(Rat),
}

impl Tag {
    pub fn resolve(&self, values: &[Rat]) -> Rat {
        match self {
            Tag::Rat(r) => r.clone(),
            Tag::Sym { id, map } => {
                let r = &values[*id];
                match map {
                    SymMap::Identity => r.clone(),
                    SymMap::NegInv => -(rat(1) / r),
                    SymMap::Scale(k) => k * r,
                }
            }
        }
    }
}

/// Blowup chart side over a previous center. Blowing up the node of an edge
/// `(A, B)` at local coordinates `(s, t)` with `A = {t = 0}`, `B = {s = 0}`:
/// chart A `(s, t) = (s', s' w)` contains the new node on the A side, chart B
/// `(s, t) = (w' t', t')` the one on the B side.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    A,
    B,
}

/// Exact location of one blown-up point.
#[derive(Clone, Debug)]
pub enum Geom {
    /// A proper point of `F0`. `s_from_v` records the chart orientation:
    /// true means `s = v - v0, t = u - u0` (the left component of the edge is
    /// a `u`-fiber), false the transpose.
    Base { u0: Tag, v0: Tag, s_from_v: bool },
    /// The chart origin on one side of the exceptional curve over `parent`.
    Chart { parent: usize, side: Side },
    /// A point of the exceptional curve over `parent` at chart-A slope `w`
    /// (so `w = 0` and `w = infinity` are the two nodes and are excluded).
    Slope { parent: usize, w: Tag },
}

/// One blown-up point. Points come in conjugate pairs: ids `2j` (plain) and
/// `2j + 1` (barred) for event `j`.
#[derive(Clone, Debug)]
pub struct ClusterPoint {
    pub geom: Geom,
}

/// A construction step, with indices into the configuration as it was when
/// the event was applied.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub enum Event {
    Node { edge: usize },
    Smooth { comp: usize, t: Option<String> },
}

#[derive(Clone, Debug)]
enum EdgeRecipe {
    Base { u0: Rat, v0: Rat, s_from_v: bool },
    Chart { parent: usize, side: Side },
}

/// An anticanonical cycle configuration with its full construction history.
#[derive(Clone, Debug)]
pub struct CycleConfig {
    comps: Vec<CompData>,
    edges: Vec<EdgeRecipe>,
    points: Vec<ClusterPoint>,
    events: Vec<Event>,
    next_symbol: usize,
}

impl CycleConfig {
    /// The four-cycle on `F0` itself.
    pub fn base() -> Self {
        let f1 = SymClass::single(BasisEl::F1);
        let f2 = SymClass::single(BasisEl::F2);
        let comps = vec![
            CompData {
                class: f1.clone(),
                origin: Origin::Ruling1 { u0: 1 },
            },
            CompData {
                class: f2.clone(),
                origin: Origin::Ruling2 { v0: 1 },
            },
            CompData {
                class: f1,
                origin: Origin::Ruling1 { u0: -1 },
            },
            CompData {
                class: f2,
                origin: Origin::Ruling2 { v0: -1 },
            },
        ];
        // Edge i joins comps i and i+1; left comp fixes the t-axis.
        let edges = vec![
            EdgeRecipe::Base {
                u0: rat(1),
                v0: rat(1),
                s_from_v: true,
            },
            EdgeRecipe::Base {
                u0: rat(-1),
                v0: rat(1),
                s_from_v: false,
            },
            EdgeRecipe::Base {
                u0: rat(-1),
                v0: rat(-1),
                s_from_v: true,
            },
            EdgeRecipe::Base {
                u0: rat(1),
                v0: rat(-1),
                s_from_v: false,
            },
        ];
        CycleConfig {
            comps,
            edges,
            points: Vec::new(),
            events: Vec::new(),
            next_symbol: 0,
        }
    }

    /// Validates a would-be cycle length. Cycles shorter than four components
    /// (in particular the two-component configuration) are rejected: they do
    /// not arise from the base by events and the machinery assumes `m >= 4`.
    pub fn check_length(m: usize) -> Result<()> {
        if m < 4 {
            return Err(Error::CycleTooShort(m));
        }
        Ok(())
    }

    /// A formal configuration carrying only self-intersections, for
    /// canonical-form work. No cluster data is attached.
    pub fn formal_string(s: &[i64]) -> Result<Vec<i64>> {
        Self::check_length(s.len())?;
        if s.len() % 2 != 0 {
            return Err(Error::Scenario(format!(
                "cycle length must be even, got {}",
                s.len()
            )));
        }
        Ok(s.to_vec())
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half(&self) -> usize {
        self.comps.len() / 2
    }

    pub fn comps(&self) -> &[CompData] {
        &self.comps
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn points(&self) -> &[ClusterPoint] {
        &self.points
    }

    /// Number of distinct symbolic coordinates among the blown-up points.
    pub fn symbol_count(&self) -> usize {
        self.next_symbol
    }

    pub fn conj_pos(&self, p: usize) -> usize {
        (p + self.half()) % self.len()
    }

    /// The lattice of the current blowup stage.
    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.events.len())
    }

    /// Component classes as concrete vectors, cycle order.
    pub fn component_classes(&self) -> Vec<Class> {
        let lat = self.lattice();
        self.comps.iter().map(|c| c.class.to_class(&lat)).collect()
    }

    /// Human names for components: originals keep their curve names, the
    /// exceptional of event j is `Ej+1` or `cEj+1`.
    pub fn component_names(&self) -> Vec<String> {
        self.comps
            .iter()
            .map(|c| match c.origin {
                Origin::Ruling1 { u0: 1 } => "C1".to_string(),
                Origin::Ruling1 { .. } => "cC1".to_string(),
                Origin::Ruling2 { v0: 1 } => "C2".to_string(),
                Origin::Ruling2 { .. } => "cC2".to_string(),
                Origin::Exceptional { event, barred } => {
                    if barred {
                        format!("cE{}", event + 1)
                    } else {
                        format!("E{}", event + 1)
                    }
                }
            })
            .collect()
    }

    /// Self-intersection sequence in cycle order.
    pub fn string(&self) -> Vec<i64> {
        self.comps.iter().map(|c| c.class.pair(&c.class)).collect()
    }

    /// Pairing of `d` with each component, cycle order. For the
    /// anticanonical class this is the degree profile `s_i + 2`.
    pub fn degree_profile(&self, d: &SymClass) -> Vec<i64> {
        self.comps.iter().map(|c| d.pair(&c.class)).collect()
    }

    /// The anticanonical class at the current stage.
    pub fn anticanonical(&self) -> SymClass {
        let mut k = SymClass::default();
        k.add_el(BasisEl::F1, 2);
        k.add_el(BasisEl::F2, 2);
        for j in 0..self.events.len() {
            k.add_el(BasisEl::E(j), -1);
            k.add_el(BasisEl::EBar(j), -1);
        }
        k
    }

    fn label(point_id: usize) -> BasisEl {
        if point_id % 2 == 0 {
            BasisEl::E(point_id / 2)
        } else {
            BasisEl::EBar(point_id / 2)
        }
    }

    fn recipe_to_geom(r: &EdgeRecipe) -> Geom {
        match r {
            EdgeRecipe::Base { u0, v0, s_from_v } => Geom::Base {
                u0: Tag::Rat(u0.clone()),
                v0: Tag::Rat(v0.clone()),
                s_from_v: *s_from_v,
            },
            EdgeRecipe::Chart { parent, side } => Geom::Chart {
                parent: *parent,
                side: *side,
            },
        }
    }

    /// Blows up the node on edge `i` together with its conjugate.
    pub fn apply_node(&mut self, i: usize) -> Result<()> {
        let m = self.len();
        if i >= m {
            return Err(Error::BadIndex {
                kind: "edge",
                index: i,
                len: m,
            });
        }
        let j = (i + m / 2) % m;
        let ev = self.events.len();
        let id_plain = 2 * ev;
        let id_bar = 2 * ev + 1;
        self.points.push(ClusterPoint {
            geom: Self::recipe_to_geom(&self.edges[i]),
        });
        self.points.push(ClusterPoint {
            geom: Self::recipe_to_geom(&self.edges[j]),
        });

        // Adjacent components lose the new exceptional class.
        let lbl_plain = SymClass::single(Self::label(id_plain));
        let lbl_bar = SymClass::single(Self::label(id_bar));
        let ip1 = (i + 1) % m;
        let jp1 = (j + 1) % m;
        self.comps[i].class = self.comps[i].class.sub(&lbl_plain);
        self.comps[ip1].class = self.comps[ip1].class.sub(&lbl_plain);
        self.comps[j].class = self.comps[j].class.sub(&lbl_bar);
        self.comps[jp1].class = self.comps[jp1].class.sub(&lbl_bar);

        // Rebuild the component and edge lists with the two insertions.
        let mut comps = Vec::with_capacity(m + 2);
        let mut edges = Vec::with_capacity(m + 2);
        for p in 0..m {
            comps.push(self.comps[p].clone());
            if p == i {
                comps.push(CompData {
                    class: lbl_plain.clone(),
                    origin: Origin::Exceptional {
                        event: ev,
                        barred: false,
                    },
                });
                edges.push(EdgeRecipe::Chart {
                    parent: id_plain,
                    side: Side::A,
                });
                edges.push(EdgeRecipe::Chart {
                    parent: id_plain,
                    side: Side::B,
                });
            } else if p == j {
                comps.push(CompData {
                    class: lbl_bar.clone(),
                    origin: Origin::Exceptional {
                        event: ev,
                        barred: true,
                    },
                });
                edges.push(EdgeRecipe::Chart {
                    parent: id_bar,
                    side: Side::A,
                });
                edges.push(EdgeRecipe::Chart {
                    parent: id_bar,
                    side: Side::B,
                });
            } else {
                edges.push(self.edges[p].clone());
            }
        }
        self.comps = comps;
        self.edges = edges;
        self.events.push(Event::Node { edge: i });
        debug_assert!(self.conjugation_invariant_holds());
        Ok(())
    }

    /// Blows up a smooth point of component `c` (and its conjugate point).
    /// With `t = None` the coordinate stays symbolic and is resolved only
    /// inside randomized oracles.
    pub fn apply_smooth(&mut self, c: usize, t: Option<Rat>) -> Result<()> {
        let m = self.len();
        if c >= m {
            return Err(Error::BadIndex {
                kind: "component",
                index: c,
                len: m,
            });
        }
        let ev = self.events.len();
        let cc = self.conj_pos(c);
        let origin = self.comps[c].origin;

        // Validate explicit coordinates: stay away from the nodes and from
        // previously used points on the same component.
        if let Some(tv) = &t {
            match origin {
                Origin::Ruling1 { .. } | Origin::Ruling2 { .. } => {
                    if *tv == rat(1) || *tv == rat(-1) || tv.is_zero() {
                        return Err(Error::Scenario(format!(
                            "smooth-point coordinate {tv} hits a node or a fixed point of the real structure"
                        )));
                    }
                }
                Origin::Exceptional { .. } => {
                    if tv.is_zero() {
                        return Err(Error::Scenario(
                            "slope 0 is the node with the predecessor component".into(),
                        ));
                    }
                }
            }
            if self.explicit_tag_in_use(c, tv) {
                return Err(Error::Scenario(format!(
                    "smooth-point coordinate {tv} already used on this component"
                )));
            }
        }

        let (geom_plain, geom_bar) = match origin {
            Origin::Ruling1 { u0 } => {
                let tag = self.fresh_tag(&t, SymMap::Identity);
                let conj_tag = self.conj_base_tag(&t);
                (
                    Geom::Base {
                        u0: Tag::Rat(rat(u0)),
                        v0: tag,
                        s_from_v: false,
                    },
                    Geom::Base {
                        u0: Tag::Rat(rat(-u0)),
                        v0: conj_tag,
                        s_from_v: false,
                    },
                )
            }
            Origin::Ruling2 { v0 } => {
                let tag = self.fresh_tag(&t, SymMap::Identity);
                let conj_tag = self.conj_base_tag(&t);
                (
                    Geom::Base {
                        u0: tag,
                        v0: Tag::Rat(rat(v0)),
                        s_from_v: true,
                    },
                    Geom::Base {
                        u0: conj_tag,
                        v0: Tag::Rat(rat(-v0)),
                        s_from_v: true,
                    },
                )
            }
            Origin::Exceptional { event, barred } => {
                let parent = 2 * event + usize::from(barred);
                let conj_parent = 2 * event + usize::from(!barred);
                let (alpha, beta) = self.chart_scalings(parent);
                let kappa = beta / alpha;
                let tag = self.fresh_tag(&t, SymMap::Identity);
                let conj_tag = match &t {
                    Some(tv) => Tag::Rat(&kappa * tv),
                    None => Tag::Sym {
                        id: self.next_symbol,
                        map: SymMap::Scale(kappa),
                    },
                };
                (
                    Geom::Slope { parent, w: tag },
                    Geom::Slope {
                        parent: conj_parent,
                        w: conj_tag,
                    },
                )
            }
        };
        if t.is_none() {
            self.next_symbol += 1;
        }

        self.points.push(ClusterPoint { geom: geom_plain });
        self.points.push(ClusterPoint { geom: geom_bar });
        let id_plain = 2 * ev;
        let id_bar = 2 * ev + 1;
        self.comps[c].class = self.comps[c].class.sub(&SymClass::single(Self::label(id_plain)));
        self.comps[cc].class = self.comps[cc].class.sub(&SymClass::single(Self::label(id_bar)));
        self.events.push(Event::Smooth {
            comp: c,
            t: t.map(|r| r.to_string()),
        });
        debug_assert!(self.conjugation_invariant_holds());
        Ok(())
    }

    fn fresh_tag(&self, t: &Option<Rat>, map: SymMap) -> Tag {
        match t {
            Some(r) => Tag::Rat(r.clone()),
            None => Tag::Sym {
                id: self.next_symbol,
                map,
            },
        }
    }

    fn conj_base_tag(&self, t: &Option<Rat>) -> Tag {
        match t {
            Some(r) => Tag::Rat(-(rat(1) / r)),
            None => Tag::Sym {
                id: self.next_symbol,
                map: SymMap::NegInv,
            },
        }
    }

    fn explicit_tag_in_use(&self, c: usize, tv: &Rat) -> bool {
        // Compare against earlier smooth events on the same component
        // position history. Positions are stable under smooth events, and a
        // node event changes positions, so we only compare events applied
        // since the component reached its current position. This is a
        // conservative check: symbolic tags are always distinct.
        for (k, e) in self.events.iter().enumerate().rev() {
            match e {
                Event::Node { .. } => break,
                Event::Smooth { comp, .. } if *comp == c => {
                    let pt = &self.points[2 * k];
                    let prev = match &pt.geom {
                        Geom::Base { u0: Tag::Rat(r), s_from_v: true, .. } => Some(r),
                        Geom::Base { v0: Tag::Rat(r), s_from_v: false, .. } => Some(r),
                        Geom::Slope { w: Tag::Rat(r), .. } => Some(r),
                        _ => None,
                    };
                    if prev == Some(tv) {
                        return true;
                    }
                }
                _ => {}
            }
        }
        false
    }

    /// Derivative scalings `(alpha, beta)` of the real structure on the two
    /// chart axes at a blown-up point, composed through the chart tower.
    /// Used to transport slopes to the conjugate side.
    fn chart_scalings(&self, point: usize) -> (Rat, Rat) {
        match &self.points[point].geom {
            Geom::Base { u0, v0, s_from_v } => {
                let (u0, v0) = match (u0, v0) {
                    (Tag::Rat(u), Tag::Rat(v)) => (u.clone(), v.clone()),
                    _ => unreachable!("blowup centers with children are explicit"),
                };
                // d(-1/x)/dx = 1/x^2.
                let du = ratio(1, 1) / (&u0 * &u0);
                let dv = ratio(1, 1) / (&v0 * &v0);
                if *s_from_v {
                    (dv, du)
                } else {
                    (du, dv)
                }
            }
            Geom::Chart { parent, side } => {
                let (a, b) = self.chart_scalings(*parent);
                match side {
                    Side::A => (a.clone(), b / &a),
                    Side::B => (a / &b, b),
                }
            }
            Geom::Slope { .. } => unreachable!("slope points are never centers"),
        }
    }

    fn conjugation_invariant_holds(&self) -> bool {
        let m = self.len();
        (0..m).all(|p| {
            self.comps[p].class.conjugate() == self.comps[self.conj_pos(p)].class
        })
    }

    /// Applies a whole event list to the base configuration.
    pub fn from_events(events: &[Event]) -> Result<CycleConfig> {
        let mut cfg = CycleConfig::base();
        for e in events {
            match e {
                Event::Node { edge } => cfg.apply_node(*edge)?,
                Event::Smooth { comp, t } => {
                    let tv = match t {
                        None => None,
                        Some(text) => Some(parse_rat(text)?),
                    };
                    cfg.apply_smooth(*comp, tv)?;
                }
            }
        }
        Ok(cfg)
    }

    /// True when every event is a node event, so the surface is toric.
    pub fn is_toric(&self) -> bool {
        self.events.iter().all(|e| matches!(e, Event::Node { .. }))
    }

    /// True when the anticanonical degree profile vanishes identically, the
    /// numerical obstruction to the structures studied here: no component
    /// sees the anticanonical class.
    pub fn is_obstructed(&self) -> bool {
        let k = self.anticanonical();
        self.degree_profile(&k).iter().all(|&d| d == 0)
    }

    /// Canonical form of the self-intersection string: the lexicographic
    /// minimum over rotations and reflections (conjugation is the half-turn
    /// rotation, so it is included).
    pub fn canonical_string(&self) -> Vec<i64> {
        canonical_string(&self.string())
    }
}

/// Parses a rational literal `p`, `-p`, or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let err = || Error::Scenario(format!("bad rational literal '{s}'"));
    let (ns, ds) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = ns.trim().parse().map_err(|_| err())?;
    let d: i64 = ds.trim().parse().map_err(|_| err())?;
    if d == 0 {
        return Err(err());
    }
    Ok(ratio(n, d))
}

/// Lexicographic minimum of a cyclic sequence over rotations and the two
/// orientations.
pub fn canonical_string(s: &[i64]) -> Vec<i64> {
    let m = s.len();
    if m == 0 {
        return Vec::new();
    }
    let mut best: Option<Vec<i64>> = None;
    let mut consider = |candidate: Vec<i64>| {
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
    };
    for start in 0..m {
        let fwd: Vec<i64> = (0..m).map(|i| s[(start + i) % m]).collect();
        let rev: Vec<i64> = (0..m).map(|i| s[(start + m - i) % m]).collect();
        consider(fwd);
        consider(rev);
    }
    best.unwrap()
}

/// Renders a string like `-3,-2,-1,-3,-2,-1`.
pub fn string_text(s: &[i64]) -> String {
    s.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// One distinct configuration found by the exhaustive search.
#[derive(Clone, Debug, Serialize)]
pub struct EnumEntry {
    pub canonical: Vec<i64>,
    pub length: usize,
    pub depth: usize,
    pub events: Vec<Event>,
    pub all_node: bool,
    pub obstructed: bool,
}

/// Breadth-first enumeration of all configurations reachable by at most
/// `max_depth` events, up to cycle symmetry (configurations are identified
/// by their canonical strings). The base configuration is included at
/// depth 0.
pub fn enumerate(max_depth: usize) -> Vec<EnumEntry> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![CycleConfig::base()];
    let mut depth = 0;
    loop {
        for cfg in &frontier {
            let canonical = cfg.canonical_string();
            if seen.insert(canonical.clone()) {
                out.push(EnumEntry {
                    length: canonical.len(),
                    canonical,
                    depth,
                    events: cfg.events().to_vec(),
                    all_node: cfg.is_toric(),
                    obstructed: cfg.is_obstructed(),
                });
            }
        }
        if depth == max_depth {
            break;
        }
        let mut next = Vec::new();
        let mut next_seen = std::collections::BTreeSet::new();
        for cfg in &frontier {
            let m = cfg.len();
            for edge in 0..m {
                let mut c = cfg.clone();
                c.apply_node(edge).expect("edge index in range");
                if next_seen.insert(c.canonical_string()) {
                    next.push(c);
                }
            }
            for comp in 0..m {
                let mut c = cfg.clone();
                c.apply_smooth(comp, None).expect("component index in range");
                if next_seen.insert(c.canonical_string()) {
                    next.push(c);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn base_configuration() {
        let cfg = CycleConfig::base();
        assert_eq!(cfg.string(), vec![0, 0, 0, 0]);
        assert_eq!(cfg.len(), 4);
        assert_eq!(cfg.conj_pos(0), 2);
        // Adjacent components meet once, opposite ones are disjoint in the
        // lattice sense only for the two rulings paired with themselves.
        let c = cfg.comps();
        assert_eq!(c[0].class.pair(&c[1].class), 1);
        assert_eq!(c[0].class.pair(&c[2].class), 0);
        assert_eq!(cfg.anticanonical().pair(&c[0].class), 2);
    }

    #[test]
    fn node_event_grows_the_cycle() {
        let mut cfg = CycleConfig::base();
        cfg.apply_node(0).unwrap();
        assert_eq!(cfg.len(), 6);
        assert_eq!(cfg.string(), vec![-1, -1, -1, -1, -1, -1]);
        let lat = cfg.lattice();
        let classes = cfg.component_classes();
        // C1 = f1 - e1, the new component is e1.
        assert_eq!(classes[0], lat.parse_class("f1 - e1").unwrap());
        assert_eq!(classes[1], lat.parse_class("e1").unwrap());
        assert_eq!(classes[2], lat.parse_class("f2 - e1").unwrap());
        // Barred side mirrors with e2 (the conjugate slot).
        assert_eq!(classes[3], lat.parse_class("f1 - e2").unwrap());
        let names = cfg.component_names();
        assert_eq!(names, vec!["C1", "E1", "C2", "cC1", "cE1", "cC2"]);
    }

    #[test]
    fn smooth_event_drops_self_intersection() {
        let mut cfg = CycleConfig::base();
        cfg.apply_smooth(0, Some(rat(2))).unwrap();
        assert_eq!(cfg.string(), vec![-1, 0, -1, 0]);
        // The conjugate point sits at (-1, -1/2).
        match &cfg.points()[1].geom {
            Geom::Base { u0, v0, .. } => {
                assert_eq!(u0, &Tag::Rat(rat(-1)));
                assert_eq!(v0, &Tag::Rat(ratio(-1, 2)));
            }
            g => panic!("unexpected geom {g:?}"),
        }
    }

    #[test]
    fn smooth_event_rejects_nodes_and_duplicates() {
        let mut cfg = CycleConfig::base();
        assert!(cfg.apply_smooth(0, Some(rat(1))).is_err());
        assert!(cfg.apply_smooth(0, Some(rat(0))).is_err());
        cfg.apply_smooth(0, Some(rat(2))).unwrap();
        assert!(cfg.apply_smooth(0, Some(rat(2))).is_err());
        cfg.apply_smooth(0, Some(rat(3))).unwrap();
    }

    #[test]
    fn short_cycles_are_rejected() {
        assert!(matches!(
            CycleConfig::formal_string(&[-1, -1]),
            Err(Error::CycleTooShort(2))
        ));
        assert!(CycleConfig::formal_string(&[0, 0, 0, 0]).is_ok());
        assert!(CycleConfig::formal_string(&[0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn canonical_string_is_rotation_and_reflection_invariant() {
        let s = vec![-3, -2, -1, -3, -2, -1];
        let c = canonical_string(&s);
        assert_eq!(c, canonical_string(&[-2, -1, -3, -2, -1, -3]));
        assert_eq!(c, canonical_string(&[-1, -2, -3, -1, -2, -3]));
        assert_eq!(c, vec![-3, -2, -1, -3, -2, -1]);
    }

    #[test]
    fn node_chain_produces_infinitely_near_points() {
        let mut cfg = CycleConfig::base();
        cfg.apply_node(3).unwrap();
        // The new edge layout around position 3: ... cC2, E1, C1 ...
        assert_eq!(
            cfg.component_names(),
            vec!["C1", "C2", "cE1", "cC1", "cC2", "E1"]
        );
        // Blow the node between E1 and C1 (edge 5, wrapping to comp 0).
        cfg.apply_node(5).unwrap();
        assert_eq!(cfg.len(), 8);
        // The second event's points are chart origins over the first pair.
        match &cfg.points()[2].geom {
            Geom::Chart { parent, side } => {
                assert_eq!(*parent, 0);
                assert_eq!(*side, Side::B);
            }
            g => panic!("unexpected geom {g:?}"),
        }
    }

    #[test]
    fn chart_scalings_compose() {
        let mut cfg = CycleConfig::base();
        cfg.apply_node(0).unwrap();
        // Node at (1,1): both scalings are 1.
        assert_eq!(cfg.chart_scalings(0), (rat(1), rat(1)));
        cfg.apply_node(1).unwrap();
        // Chart-origin child keeps rational scalings.
        let (a, b) = cfg.chart_scalings(2);
        assert_eq!((&a, &b), (&rat(1), &rat(1)));
    }

    #[test]
    fn enumeration_base_and_depth_one() {
        let entries = enumerate(1);
        // Depth 0: the base. Depth 1: one node orbit and one smooth orbit.
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].canonical, vec![0, 0, 0, 0]);
        let strings: Vec<_> = entries.iter().map(|e| e.canonical.clone()).collect();
        assert!(strings.contains(&vec![-1, -1, -1, -1, -1, -1]));
        assert!(strings.contains(&vec![-1, 0, -1, 0]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn random_event_sequences_keep_the_conjugation_invariant(
            choices in proptest::collection::vec((0usize..2, 0usize..12), 0..5)
        ) {
            let mut cfg = CycleConfig::base();
            for (kind, idx) in choices {
                let m = cfg.len();
                match kind {
                    0 => cfg.apply_node(idx % m).unwrap(),
                    _ => cfg.apply_smooth(idx % m, None).unwrap(),
                }
            }
            // The invariant is debug-asserted inside; re-check string symmetry.
            let s = cfg.string();
            let m = s.len();
            for p in 0..m {
                prop_assert_eq!(s[p], s[(p + m / 2) % m]);
            }
            // Anticanonical degree profile matches s_i + 2.
            let prof = cfg.degree_profile(&cfg.anticanonical());
            for (d, si) in prof.iter().zip(s.iter()) {
                prop_assert_eq!(*d, si + 2);
            }
        }

        #[test]
        fn canonical_string_invariance(s in proptest::collection::vec(-4i64..1, 4..10), r in 0usize..10, flip in proptest::bool::ANY) {
            let m = s.len();
            let mut t: Vec<i64> = (0..m).map(|i| s[(i + r % m) % m]).collect();
            if flip {
                t.reverse();
            }
            prop_assert_eq!(canonical_string(&s), canonical_string(&t));
        }
    }
}
