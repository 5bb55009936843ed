//! Linear systems on anticanonical-cycle surfaces: fixed parts, section
//! counts by several independent routes, and classification of the induced
//! maps.
//!
//! The section count `h0` of a divisor class is organized as
//!
//! 1. strip the fixed part supported on the cycle components by repeated
//!    passes over the catalog (`strip`),
//! 2. evaluate the mobile part by the first applicable route: the zero
//!    class, a multiple of a rational pencil, Riemann-Roch for classes nef
//!    against the catalog, or the exact point-condition oracle
//!    (`oracle_h0`), which imposes vanishing conditions through the whole
//!    blowup tower on bidegree-(d1, d2) forms and computes the rank of the
//!    condition matrix over the rationals.
//!
//! For configurations built from node events only, the surface is toric and
//! `toric::lattice_points` counts sections of invariant divisors entirely
//! independently, which pins the other routes down.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cycles::{CycleConfig, Geom, Side, Tag};
use crate::error::{Error, Result};
use crate::linalg;
use crate::picard::{Class, Lattice};
use crate::poly::{rat, Poly, Rat};
use crate::qform::random_rational;

/// Cap on fixed-part passes; reaching it means the class keeps absorbing
/// catalog curves and the decomposition does not stabilize.
pub const MAX_STRIP_PASSES: usize = 64;

/// Number of independent random specializations required to agree before a
/// symbolic cluster rank is accepted.
pub const ORACLE_SAMPLES: usize = 3;

/// Splits `d = fixed + mobile` where the fixed part is a nonnegative
/// combination of catalog curves. Each pass walks the catalog in cycle
/// order and subtracts one copy of every curve that meets the running class
/// negatively; passes repeat until a fixpoint.
pub fn strip(lat: &Lattice, d: &Class, catalog: &[Class]) -> Result<(Vec<i64>, Class)> {
    let mut m = d.clone();
    let mut coeffs = vec![0i64; catalog.len()];
    for _ in 0..MAX_STRIP_PASSES {
        let mut changed = false;
        for (i, c) in catalog.iter().enumerate() {
            if lat.pair(&m, c) < 0 {
                m = m.sub(c);
                coeffs[i] += 1;
                changed = true;
            }
        }
        if !changed {
            return Ok((coeffs, m));
        }
    }
    Err(Error::StripDiverged(MAX_STRIP_PASSES))
}

/// Which argument settled a section count.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Route {
    /// The mobile part is zero.
    ZeroClass,
    /// The mobile part is `g` times a rational pencil class, so `h0 = g + 1`.
    PencilMultiple(i64),
    /// Nef against the catalog with positive anticanonical degree:
    /// `h0 = chi` by Riemann-Roch with vanishing higher cohomology.
    NefChi,
    /// Exact point-condition count on the blowup tower.
    Oracle,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::ZeroClass => write!(f, "zero-class"),
            Route::PencilMultiple(g) => write!(f, "pencil-multiple({g})"),
            Route::NefChi => write!(f, "nef-chi"),
            Route::Oracle => write!(f, "oracle"),
        }
    }
}

/// Full analysis of one divisor class.
#[derive(Clone, Debug)]
pub struct H0Result {
    /// Multiplicity of each catalog curve in the fixed part, cycle order.
    pub fixed: Vec<i64>,
    /// The remaining mobile class.
    pub mobile: Class,
    /// Sections of the class (equivalently, of the mobile part).
    pub value: i64,
    pub route: Route,
}

/// Greatest common divisor of the coordinates (0 for the zero class).
fn content(c: &Class) -> i64 {
    c.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x.abs()))
}

/// Section count of a mobile class, choosing the first applicable route.
pub fn mobile_h0(
    cfg: &CycleConfig,
    lat: &Lattice,
    catalog: &[Class],
    m: &Class,
    seed: u64,
) -> Result<(i64, Route)> {
    if m.is_zero() {
        return Ok((1, Route::ZeroClass));
    }
    let nef = catalog.iter().all(|c| lat.pair(m, c) >= 0);
    let neg_k = lat.anticanonical();
    if nef
        && lat.self_int(m) == 0
        && m.f1_coeff() >= 0
        && m.f2_coeff() >= 0
    {
        let g = content(m);
        let p = Class(m.0.iter().map(|x| x / g).collect());
        if lat.pair(&p, &neg_k) == 2 {
            // m = g * p with p a base-point-free pencil of rational curves;
            // sections are the degree-g forms on the pencil parameter.
            return Ok((g + 1, Route::PencilMultiple(g)));
        }
    }
    if nef && lat.pair(m, &neg_k) >= 1 {
        return Ok((lat.chi(m), Route::NefChi));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    Ok((oracle_h0(cfg, m, &mut rng)?, Route::Oracle))
}

/// Strip plus route evaluation for an arbitrary class.
pub fn h0_full(cfg: &CycleConfig, d: &Class, seed: u64) -> Result<H0Result> {
    let lat = cfg.lattice();
    let catalog = cfg.component_classes();
    let (fixed, m) = strip(&lat, d, &catalog)?;
    let (value, route) = mobile_h0(cfg, &lat, &catalog, &m, seed)?;
    Ok(H0Result {
        fixed,
        mobile: m,
        value,
        route,
    })
}

/// Convenience wrappers for the two standard classes.
pub fn h0_anticanonical(cfg: &CycleConfig, seed: u64) -> Result<H0Result> {
    let lat = cfg.lattice();
    h0_full(cfg, &lat.anticanonical(), seed)
}

pub fn h0_double_anticanonical(cfg: &CycleConfig, seed: u64) -> Result<H0Result> {
    let lat = cfg.lattice();
    h0_full(cfg, &lat.anticanonical().scale(2), seed)
}

// ---------------------------------------------------------------------------
// The point-condition oracle.

/// Cluster point with every coordinate made explicit.
#[derive(Clone, Debug)]
enum ResolvedGeom {
    Base { u0: Rat, v0: Rat, s_from_v: bool },
    Chart { parent: usize, side: Side },
    Slope { parent: usize, w: Rat },
}

const S: usize = 2; // local chart variable s lives in slot z2
const T: usize = 3; // local chart variable t lives in slot z3

fn geom_has_symbol(g: &Geom) -> bool {
    let sym = |t: &Tag| matches!(t, Tag::Sym { .. });
    match g {
        Geom::Base { u0, v0, .. } => sym(u0) || sym(v0),
        Geom::Chart { .. } => false,
        Geom::Slope { w, .. } => sym(w),
    }
}

fn resolve_geoms(cfg: &CycleConfig, values: &[Rat]) -> Result<Vec<ResolvedGeom>> {
    let mut out = Vec::with_capacity(cfg.points().len());
    for p in cfg.points() {
        out.push(match &p.geom {
            Geom::Base { u0, v0, s_from_v } => ResolvedGeom::Base {
                u0: u0.resolve(values),
                v0: v0.resolve(values),
                s_from_v: *s_from_v,
            },
            Geom::Chart { parent, side } => ResolvedGeom::Chart {
                parent: *parent,
                side: *side,
            },
            Geom::Slope { parent, w } => ResolvedGeom::Slope {
                parent: *parent,
                w: w.resolve(values),
            },
        });
    }
    validate_resolved(&out)?;
    Ok(out)
}

/// All blown-up points must stay distinct after resolution, and slope
/// points must avoid the nodes of their exceptional curve.
fn validate_resolved(geoms: &[ResolvedGeom]) -> Result<()> {
    let mut base_pts: Vec<(&Rat, &Rat)> = Vec::new();
    let mut slopes: Vec<(usize, &Rat)> = Vec::new();
    for g in geoms {
        match g {
            ResolvedGeom::Base { u0, v0, .. } => {
                if base_pts.iter().any(|(u, v)| *u == u0 && *v == v0) {
                    return Err(Error::Scenario(format!(
                        "two blowup centers coincide at ({u0}, {v0})"
                    )));
                }
                base_pts.push((u0, v0));
            }
            ResolvedGeom::Slope { parent, w } => {
                if w.is_zero() {
                    return Err(Error::Scenario(
                        "slope point resolved onto a node of the exceptional curve".into(),
                    ));
                }
                if slopes.iter().any(|(p, v)| p == parent && *v == w) {
                    return Err(Error::Scenario(format!(
                        "two slope points over the same center coincide at w = {w}"
                    )));
                }
                slopes.push((*parent, w));
            }
            ResolvedGeom::Chart { .. } => {}
        }
    }
    Ok(())
}

/// Collects all explicit rational coordinates in the cluster, so random
/// draws can avoid them.
fn explicit_coordinates(cfg: &CycleConfig) -> Vec<Rat> {
    let mut out = Vec::new();
    for p in cfg.points() {
        let mut push = |t: &Tag| {
            if let Tag::Rat(r) = t {
                out.push(r.clone());
            }
        };
        match &p.geom {
            Geom::Base { u0, v0, .. } => {
                push(u0);
                push(v0);
            }
            Geom::Slope { w, .. } => push(w),
            Geom::Chart { .. } => {}
        }
    }
    out
}

fn draw_symbol_values(
    n: usize,
    avoid: &[Rat],
    rng: &mut ChaCha20Rng,
) -> Vec<Rat> {
    let mut values: Vec<Rat> = Vec::with_capacity(n);
    while values.len() < n {
        let r = random_rational(rng);
        if r.is_zero() || r == rat(1) || r == rat(-1) {
            continue;
        }
        if avoid.contains(&r) || values.contains(&r) {
            continue;
        }
        values.push(r);
    }
    values
}

/// Local expansion of the bidegree basis monomial `u^a v^b` at cluster
/// point `p`, in the chart coordinates `(s, t) = (z2, z3)`, transformed
/// through the blowup tower with the virtual multiplicities `mults`.
fn expansion(geoms: &[ResolvedGeom], mults: &[i64], p: usize, a: u32, b: u32) -> Poly {
    match &geoms[p] {
        ResolvedGeom::Base { u0, v0, s_from_v } => {
            let s = Poly::var(S);
            let t = Poly::var(T);
            let (du, dv) = if *s_from_v { (t, s) } else { (s, t) };
            let pu = Poly::constant(u0.clone()).add(&du).pow(a);
            let pv = Poly::constant(v0.clone()).add(&dv).pow(b);
            pu.mul(&pv)
        }
        ResolvedGeom::Chart { parent, side } => {
            let e = expansion(geoms, mults, *parent, a, b);
            chart_transform(&e, mults[*parent], *side)
        }
        ResolvedGeom::Slope { parent, w } => {
            let e = expansion(geoms, mults, *parent, a, b);
            let e = chart_transform(&e, mults[*parent], Side::A);
            let shift = Poly::constant(w.clone()).add(&Poly::var(T));
            e.subst_var(T, &shift)
        }
    }
}

/// One blowup step in local coordinates: drop the part that vanishes by the
/// conditions at the center, pull back to the chosen chart, and divide by
/// the `m`-th power of the exceptional coordinate. Negative `m` multiplies
/// instead, which is what the virtual transform of a class with positive
/// exceptional coefficient requires.
fn chart_transform(e: &Poly, m: i64, side: Side) -> Poly {
    let mut out = Poly::zero();
    for (exp, c) in e.terms() {
        let al = i64::from(exp[S]);
        let be = i64::from(exp[T]);
        if al + be < m {
            continue;
        }
        let mut ne = *exp;
        match side {
            Side::A => ne[S] = u16::try_from(al + be - m).expect("exponent in range"),
            Side::B => ne[T] = u16::try_from(al + be - m).expect("exponent in range"),
        }
        out = out.add(&Poly::monomial(ne, c.clone()));
    }
    out
}

fn h0_from_cluster(d1: i64, d2: i64, geoms: &[ResolvedGeom], mults: &[i64]) -> i64 {
    let d1 = u32::try_from(d1).expect("nonnegative degree");
    let d2 = u32::try_from(d2).expect("nonnegative degree");
    let ncols = ((d1 + 1) * (d2 + 1)) as usize;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (p, &mp) in mults.iter().enumerate() {
        if mp <= 0 {
            continue;
        }
        // Expansion of every basis monomial at this point, then one row per
        // jet coefficient of order below the multiplicity.
        let mut expansions = Vec::with_capacity(ncols);
        for a in 0..=d1 {
            for b in 0..=d2 {
                expansions.push(expansion(geoms, mults, p, a, b));
            }
        }
        for al in 0..mp {
            for be in 0..(mp - al) {
                let mut target = crate::poly::EXP_ONE;
                target[S] = al as u16;
                target[T] = be as u16;
                let row: Vec<Rat> = expansions.iter().map(|e| e.coeff(&target)).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let rank = linalg::rank(&rows);
    (ncols - rank) as i64
}

/// Exact section count of `m` by imposing all cluster point conditions on
/// bidegree forms. Symbolic coordinates are specialized at random; the
/// count must agree across `ORACLE_SAMPLES` independent draws.
pub fn oracle_h0(cfg: &CycleConfig, m: &Class, rng: &mut ChaCha20Rng) -> Result<i64> {
    let lat = cfg.lattice();
    assert_eq!(m.dim(), lat.dim(), "class from a different lattice");
    let d1 = m.f1_coeff();
    let d2 = m.f2_coeff();
    if d1 < 0 || d2 < 0 {
        return Ok(0);
    }
    let pairs = lat.pairs;
    let mut mults = vec![0i64; 2 * pairs];
    for (id, mult) in mults.iter_mut().enumerate() {
        let slot = if id % 2 == 0 {
            2 + id / 2
        } else {
            2 + pairs + id / 2
        };
        *mult = -m.0[slot];
    }
    let has_sym = cfg.points().iter().any(|p| geom_has_symbol(&p.geom));
    if !has_sym {
        let geoms = resolve_geoms(cfg, &[])?;
        return Ok(h0_from_cluster(d1, d2, &geoms, &mults));
    }
    let avoid = explicit_coordinates(cfg);
    let nsym = cfg.symbol_count();
    let mut counts = Vec::with_capacity(ORACLE_SAMPLES);
    for _ in 0..ORACLE_SAMPLES {
        // Redraw on the rare event that derived conjugate coordinates
        // collide with other centers.
        let mut attempt = 0;
        let geoms = loop {
            let values = draw_symbol_values(nsym, &avoid, rng);
            match resolve_geoms(cfg, &values) {
                Ok(g) => break g,
                Err(_) if attempt < 32 => attempt += 1,
                Err(e) => return Err(e),
            }
        };
        counts.push(h0_from_cluster(d1, d2, &geoms, &mults));
    }
    if counts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::SampleMismatch(
            counts.iter().map(|&c| c as usize).collect(),
        ));
    }
    Ok(counts[0])
}

// ---------------------------------------------------------------------------
// Toric route.

pub mod toric {
    //! Independent section counts on toric configurations. A configuration
    //! built from node events only is the toric surface whose fan rays
    //! satisfy `v(i-1) + v(i+1) = -s(i) * v(i)` around the cycle of
    //! self-intersections; invariant divisors are counted by lattice points
    //! of the associated polygon.

    use super::*;

    /// Fan rays reconstructed from the self-intersection string. Errors if
    /// the string does not close up into a smooth complete fan.
    pub fn rays(string: &[i64]) -> Result<Vec<(i64, i64)>> {
        let m = string.len();
        if m < 3 {
            return Err(Error::BadFan(format!("{m} rays cannot span a complete fan")));
        }
        let mut v: Vec<(i64, i64)> = Vec::with_capacity(m);
        v.push((1, 0));
        v.push((0, 1));
        for i in 1..m - 1 {
            let s = string[i];
            let (px, py) = v[i - 1];
            let (cx, cy) = v[i];
            v.push((-s * cx - px, -s * cy - py));
        }
        let step = |s: i64, cur: (i64, i64), prev: (i64, i64)| {
            (-s * cur.0 - prev.0, -s * cur.1 - prev.1)
        };
        if step(string[m - 1], v[m - 1], v[m - 2]) != v[0]
            || step(string[0], v[0], v[m - 1]) != v[1]
        {
            return Err(Error::BadFan(
                "self-intersection string does not close up".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for i in 0..m {
            let a = v[i];
            let b = v[(i + 1) % m];
            if a.0 * b.1 - a.1 * b.0 != 1 {
                return Err(Error::BadFan(format!(
                    "cone ({:?}, {:?}) is not unimodular",
                    a, b
                )));
            }
            if !seen.insert(a) {
                return Err(Error::BadFan(format!("repeated ray {a:?}")));
            }
        }
        Ok(v)
    }

    /// Lattice points of the polygon of the invariant divisor with
    /// coefficient `a[i]` on the divisor of ray `i`.
    pub fn lattice_points(string: &[i64], a: &[i64]) -> Result<i64> {
        let v = rays(string)?;
        if a.len() != v.len() {
            return Err(Error::BadFan(format!(
                "{} coefficients for {} rays",
                a.len(),
                v.len()
            )));
        }
        let amax = a.iter().map(|x| x.abs()).max().unwrap_or(0);
        let vmax = v
            .iter()
            .map(|(x, y)| x.abs().max(y.abs()))
            .max()
            .unwrap_or(1);
        let bound = 2 * vmax * amax + 1;
        let mut count = 0;
        for x in -bound..=bound {
            for y in -bound..=bound {
                if v.iter()
                    .zip(a.iter())
                    .all(|(&(vx, vy), &ai)| vx * x + vy * y >= -ai)
                {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Sections of `k` times the anticanonical class (all coefficients `k`).
    pub fn anticanonical_multiple_h0(string: &[i64], k: i64) -> Result<i64> {
        lattice_points(string, &vec![k; string.len()])
    }
}

// ---------------------------------------------------------------------------
// Map classification.

/// The kind of map induced by the mobile part of a complete linear system.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MapKind {
    /// Mobile part zero: the system is a single divisor.
    Point,
    /// The mobile part is `multiple` times a pencil; the image is a line.
    PencilComposite { multiple: i64 },
    /// Three sections with self-intersection two: a degree-two cover of the
    /// plane.
    DoubleCover,
    /// Degree matches a birational embedding: image of degree `degree` in
    /// projective space of dimension `ambient`.
    Birational { ambient: i64, degree: i64 },
    Unclassified,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapKind::Point => write!(f, "no moving part"),
            MapKind::PencilComposite { multiple } => {
                write!(f, "composed with a pencil ({multiple} times)")
            }
            MapKind::DoubleCover => write!(f, "degree-two onto the plane"),
            MapKind::Birational { ambient, degree } => {
                write!(f, "birational onto a degree-{degree} surface in CP{ambient}")
            }
            MapKind::Unclassified => write!(f, "unclassified"),
        }
    }
}

/// Classifies the map given the full `h0` analysis.
pub fn classify_map(r: &H0Result, lat: &Lattice) -> MapKind {
    let m2 = lat.self_int(&r.mobile);
    if r.mobile.is_zero() {
        return MapKind::Point;
    }
    if let Route::PencilMultiple(g) = r.route {
        return MapKind::PencilComposite { multiple: g };
    }
    if m2 == 0 {
        return MapKind::PencilComposite {
            multiple: content(&r.mobile),
        };
    }
    if r.value == 3 && m2 == 2 {
        return MapKind::DoubleCover;
    }
    if r.value >= 5 && m2 == r.value - 1 {
        return MapKind::Birational {
            ambient: r.value - 1,
            degree: m2,
        };
    }
    MapKind::Unclassified
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::Event;

    fn node(edge: usize) -> Event {
        Event::Node { edge }
    }

    fn smooth(comp: usize) -> Event {
        Event::Smooth { comp, t: None }
    }

    fn build(events: &[Event]) -> CycleConfig {
        CycleConfig::from_events(events).unwrap()
    }

    #[test]
    fn oracle_without_points_counts_monomials() {
        let cfg = CycleConfig::base();
        let lat = cfg.lattice();
        let d = lat.f1().scale(2).add(&lat.f2());
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert_eq!(oracle_h0(&cfg, &d, &mut rng).unwrap(), 6);
    }

    #[test]
    fn oracle_matches_chi_after_one_node() {
        let cfg = build(&[node(0)]);
        let lat = cfg.lattice();
        let k = lat.anticanonical();
        let mut rng = ChaCha20Rng::seed_from_u64(0);
        assert_eq!(oracle_h0(&cfg, &k, &mut rng).unwrap(), 7);
        assert_eq!(lat.chi(&k), 7);
    }

    #[test]
    fn conic_bundle_strip_and_pencil_route() {
        // Cycle (-2,-3,-2,-1) doubled: two infinitely near smooth points on
        // the same component force the double anticanonical system onto a
        // fiber pencil.
        let cfg = build(&[node(3), node(5), smooth(1), smooth(1)]);
        assert_eq!(cfg.string(), vec![-2, -3, -2, -1, -2, -3, -2, -1]);
        let r = h0_double_anticanonical(&cfg, 0).unwrap();
        assert_eq!(r.fixed, vec![1, 2, 1, 0, 1, 2, 1, 0]);
        let lat = cfg.lattice();
        assert_eq!(r.mobile, lat.f1().scale(2));
        assert_eq!(r.route, Route::PencilMultiple(2));
        assert_eq!(r.value, 3);
        assert_eq!(
            classify_map(&r, &lat),
            MapKind::PencilComposite { multiple: 2 }
        );
    }

    #[test]
    fn double_anticanonical_on_five_chain_cycle() {
        // Cycle (-3,-2,-2,-2,-1) doubled: chi route with a degree-two map.
        let cfg = build(&[node(3), node(5), node(7), smooth(1)]);
        assert_eq!(cfg.string(), vec![-3, -2, -2, -2, -1, -3, -2, -2, -2, -1]);
        let r = h0_double_anticanonical(&cfg, 0).unwrap();
        assert_eq!(r.fixed, vec![1, 1, 1, 1, 0, 1, 1, 1, 1, 0]);
        let lat = cfg.lattice();
        assert_eq!(lat.self_int(&r.mobile), 2);
        assert_eq!(r.route, Route::NefChi);
        assert_eq!(r.value, 3);
        assert_eq!(classify_map(&r, &lat), MapKind::DoubleCover);
        // Oracle agreement on the mobile part.
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        assert_eq!(oracle_h0(&cfg, &r.mobile, &mut rng).unwrap(), 3);
    }

    #[test]
    fn double_anticanonical_on_twelve_cycle_three_routes_agree() {
        // The toric cycle (-3,-1) six times: chi, oracle, and lattice-point
        // counts must all give 7.
        let cfg = build(&[node(3), node(5), node(7), node(7)]);
        assert_eq!(
            cfg.canonical_string(),
            vec![-3, -1, -3, -1, -3, -1, -3, -1, -3, -1, -3, -1]
        );
        let r = h0_double_anticanonical(&cfg, 0).unwrap();
        assert_eq!(r.route, Route::NefChi);
        assert_eq!(r.value, 7);
        let lat = cfg.lattice();
        assert_eq!(lat.self_int(&r.mobile), 6);
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        assert_eq!(oracle_h0(&cfg, &r.mobile, &mut rng).unwrap(), 7);
        assert_eq!(
            toric::anticanonical_multiple_h0(&cfg.string(), 2).unwrap(),
            7
        );
        assert_eq!(
            classify_map(&r, &lat),
            MapKind::Birational {
                ambient: 6,
                degree: 6
            }
        );
        // The anticanonical system itself is rigid.
        assert_eq!(toric::anticanonical_multiple_h0(&cfg.string(), 1).unwrap(), 1);
        assert_eq!(h0_anticanonical(&cfg, 0).unwrap().value, 1);
    }

    #[test]
    fn smooth_only_configuration_needs_the_oracle_cross_check() {
        // Cycle (-3,-1) doubled from four smooth blowups: three collinear
        // double points make the naive condition count overshoot, so the
        // exact rank matters.
        let cfg = build(&[smooth(0), smooth(0), smooth(0), smooth(1)]);
        assert_eq!(cfg.string(), vec![-3, -1, -3, -1]);
        let r = h0_double_anticanonical(&cfg, 0).unwrap();
        assert_eq!(r.fixed, vec![1, 0, 1, 0]);
        let lat = cfg.lattice();
        assert_eq!(lat.self_int(&r.mobile), 2);
        assert_eq!(r.route, Route::NefChi);
        assert_eq!(r.value, 3);
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        assert_eq!(oracle_h0(&cfg, &r.mobile, &mut rng).unwrap(), 3);
        // Direct oracle on the full double anticanonical class: the fixed
        // components force dependent conditions, same final count.
        let k2 = lat.anticanonical().scale(2);
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        assert_eq!(oracle_h0(&cfg, &k2, &mut rng).unwrap(), 3);
        assert_eq!(classify_map(&r, &lat), MapKind::DoubleCover);
    }

    #[test]
    fn eight_cycle_quartic_case() {
        // Cycle (-3,-1) four times: five sections, image a quartic surface.
        let cfg = build(&[node(3), node(5), smooth(0), smooth(2)]);
        assert_eq!(cfg.string(), vec![-3, -1, -3, -1, -3, -1, -3, -1]);
        let r = h0_double_anticanonical(&cfg, 0).unwrap();
        assert_eq!(r.value, 5);
        let lat = cfg.lattice();
        assert_eq!(lat.self_int(&r.mobile), 4);
        assert_eq!(lat.genus(&r.mobile), 1);
        assert_eq!(
            classify_map(&r, &lat),
            MapKind::Birational {
                ambient: 4,
                degree: 4
            }
        );
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        assert_eq!(oracle_h0(&cfg, &r.mobile, &mut rng).unwrap(), 5);
    }

    #[test]
    fn toric_fan_of_the_base_quadric() {
        let v = toric::rays(&[0, 0, 0, 0]).unwrap();
        assert_eq!(v, vec![(1, 0), (0, 1), (-1, 0), (0, -1)]);
        assert_eq!(toric::lattice_points(&[0, 0, 0, 0], &[1, 1, 1, 1]).unwrap(), 9);
        assert_eq!(toric::lattice_points(&[0, 0, 0, 0], &[2, 2, 2, 2]).unwrap(), 25);
        assert_eq!(toric::lattice_points(&[0, 0, 0, 0], &[1, 1, 0, 0]).unwrap(), 4);
    }

    #[test]
    fn toric_rejects_non_closing_strings() {
        assert!(matches!(
            toric::rays(&[-1, -1, -1, -1]),
            Err(Error::BadFan(_))
        ));
    }

    #[test]
    fn anticanonical_moves_on_the_long_toric_cycle() {
        // Cycle (-4,-1,-2,-2,-2,-1) doubled: the anticanonical system has
        // three sections (a pencil plus the rigid long component).
        let cfg = build(&[node(3), node(5), node(7), node(9)]);
        assert_eq!(
            cfg.canonical_string(),
            vec![-4, -1, -2, -2, -2, -1, -4, -1, -2, -2, -2, -1]
        );
        let r = h0_anticanonical(&cfg, 0).unwrap();
        assert_eq!(r.route, Route::PencilMultiple(2));
        assert_eq!(r.value, 3);
        assert_eq!(
            toric::anticanonical_multiple_h0(&cfg.string(), 1).unwrap(),
            3
        );
    }

    #[test]
    fn strip_diverges_on_unbounded_input() {
        // A class meeting a (-1)-curve more and more negatively keeps
        // absorbing copies; feeding an absurd multiple exhausts the cap.
        let cfg = CycleConfig::base();
        let lat = cfg.lattice();
        // Subtracting a square-zero curve never improves its own pairing,
        // so a class meeting it negatively is stripped forever.
        let d = lat.f2().neg();
        let err = strip(&lat, &d, &[lat.f1()]).unwrap_err();
        assert!(matches!(err, Error::StripDiverged(_)));
    }
}
