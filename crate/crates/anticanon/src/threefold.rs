//! Intersection products and base-locus elimination on blown-up threefolds.
//!
//! Two resolution models are covered.  The *halves* model (one per subtype
//! I..IV, with `k` = 2,3,4,5) carries sheets `E1..Ek`, `cE1..cEk` over the
//! components of an anticanonical cycle, node point-classes `D<i>`/`cD<i>`
//! from the small resolutions, a first-stage system `L1`, and (for subtypes
//! II..IV) a second stage that blows up the detected base curves, producing
//! ruled sheets `D1..`, `cD1..` and pierce-point classes `P<l>`/`cP<l>`.
//! The *quartet* model is four disjoint quadric sheets over the four fixed
//! curves of the k = 4 birational surface.
//!
//! Every restriction of a global class to a sheet is an exact divisor class
//! on that sheet; triple products are evaluated by restricting and pairing,
//! and consistency across evaluation routes is what validates the shipped
//! table files.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Subtype tag for the degree-two anticanonical models, by half-cycle length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DsType {
    I,
    II,
    III,
    IV,
}

impl DsType {
    pub fn all() -> [DsType; 4] {
        [DsType::I, DsType::II, DsType::III, DsType::IV]
    }

    /// Number of conjugate component pairs of the underlying cycle.
    pub fn k(self) -> usize {
        match self {
            DsType::I => 2,
            DsType::II => 3,
            DsType::III => 4,
            DsType::IV => 5,
        }
    }

    /// Self-intersections of the half components `C_1..C_k`.
    pub fn half_string(self) -> Vec<i64> {
        let k = self.k();
        let mut s = vec![-2; k];
        s[0] = -3;
        s[k - 1] = -1;
        s
    }

    pub fn name(self) -> &'static str {
        match self {
            DsType::I => "I",
            DsType::II => "II",
            DsType::III => "III",
            DsType::IV => "IV",
        }
    }

    pub fn parse(s: &str) -> Result<DsType> {
        match s.trim() {
            "I" | "i" | "1" => Ok(DsType::I),
            "II" | "ii" | "2" => Ok(DsType::II),
            "III" | "iii" | "3" => Ok(DsType::III),
            "IV" | "iv" | "4" => Ok(DsType::IV),
            other => Err(Error::Scenario(format!(
                "unknown subtype {other:?} (expected I, II, III or IV)"
            ))),
        }
    }
}

impl fmt::Display for DsType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A sheet of a model.  Indices are 1-based; `CE`/`CD` are the conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SheetId {
    E(usize),
    CE(usize),
    D(usize),
    CD(usize),
}

impl SheetId {
    pub fn conj(self) -> SheetId {
        match self {
            SheetId::E(i) => SheetId::CE(i),
            SheetId::CE(i) => SheetId::E(i),
            SheetId::D(i) => SheetId::CD(i),
            SheetId::CD(i) => SheetId::D(i),
        }
    }

    fn parse(tok: &str) -> Option<SheetId> {
        let (ctor, rest): (fn(usize) -> SheetId, &str) = if let Some(r) = tok.strip_prefix("cE") {
            (SheetId::CE, r)
        } else if let Some(r) = tok.strip_prefix("cD") {
            (SheetId::CD, r)
        } else if let Some(r) = tok.strip_prefix('E') {
            (SheetId::E, r)
        } else if let Some(r) = tok.strip_prefix('D') {
            (SheetId::D, r)
        } else {
            return None;
        };
        rest.parse::<usize>().ok().filter(|&i| i >= 1).map(ctor)
    }
}

impl fmt::Display for SheetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheetId::E(i) => write!(f, "E{i}"),
            SheetId::CE(i) => write!(f, "cE{i}"),
            SheetId::D(i) => write!(f, "D{i}"),
            SheetId::CD(i) => write!(f, "cD{i}"),
        }
    }
}

/// A node of the cycle, between consecutive sheets.  `P(i)` joins `E_i` to
/// `E_{i+1}` for `i < k` and `E_k` to `cE_1` for `i = k`; `CP` conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NodeId {
    P(usize),
    CP(usize),
}

impl NodeId {
    pub fn conj(self) -> NodeId {
        match self {
            NodeId::P(i) => NodeId::CP(i),
            NodeId::CP(i) => NodeId::P(i),
        }
    }

    /// Name of the point class this node contributes on its assigned sheet.
    fn class_name(self) -> String {
        match self {
            NodeId::P(i) => format!("D{i}"),
            NodeId::CP(i) => format!("cD{i}"),
        }
    }
}

/// Intersection form of a sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheetKind {
    /// Quadric surface basis `(a,b)`: `(a,b)·(a',b') = ab' + a'b`.
    Quadric,
    /// Ruled-surface basis `(sigma,f)` with `sigma^2 = -1`, `sigma·f = 1`.
    Ruled,
}

/// A divisor class on a sheet: an `(a,b)` part in the sheet basis plus named
/// exceptional point classes (self-intersection -1, mutually orthogonal).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheetClass {
    pub kind: SheetKind,
    pub a: i64,
    pub b: i64,
    pub neg: BTreeMap<String, i64>,
}

impl SheetClass {
    pub fn zero(kind: SheetKind) -> SheetClass {
        SheetClass {
            kind,
            a: 0,
            b: 0,
            neg: BTreeMap::new(),
        }
    }

    pub fn of(kind: SheetKind, a: i64, b: i64) -> SheetClass {
        SheetClass {
            kind,
            a,
            b,
            neg: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0 && self.neg.values().all(|&c| c == 0)
    }

    pub fn with_neg(mut self, name: &str, coeff: i64) -> SheetClass {
        self.add_neg(name, coeff);
        self
    }

    pub fn add_neg(&mut self, name: &str, coeff: i64) {
        let c = self.neg.entry(name.to_string()).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.neg.remove(name);
        }
    }

    pub fn add(&self, other: &SheetClass) -> SheetClass {
        assert_eq!(self.kind, other.kind, "sheet basis mismatch");
        let mut out = self.clone();
        out.a += other.a;
        out.b += other.b;
        for (n, &c) in &other.neg {
            out.add_neg(n, c);
        }
        out
    }

    pub fn sub(&self, other: &SheetClass) -> SheetClass {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> SheetClass {
        let mut out = self.clone();
        out.a *= k;
        out.b *= k;
        out.neg.retain(|_, c| {
            *c *= k;
            *c != 0
        });
        out
    }

    /// Conjugate class (for the mirrored sheet): swaps `D<i>`/`cD<i>` and
    /// `P<l>`/`cP<l>` names.
    pub fn conj(&self) -> SheetClass {
        let mut out = SheetClass::of(self.kind, self.a, self.b);
        for (n, &c) in &self.neg {
            let conj_name = match n.strip_prefix('c') {
                Some(base) => base.to_string(),
                None => format!("c{n}"),
            };
            out.add_neg(&conj_name, c);
        }
        out
    }

    /// Intersection pairing on the sheet.
    pub fn pair(&self, other: &SheetClass) -> i64 {
        assert_eq!(self.kind, other.kind, "sheet basis mismatch");
        let ab = match self.kind {
            SheetKind::Quadric => self.a * other.b + other.a * self.b,
            SheetKind::Ruled => self.a * other.b + other.a * self.b - self.a * other.a,
        };
        let mut cross = 0;
        for (n, &c) in &self.neg {
            if let Some(&c2) = other.neg.get(n) {
                cross += c * c2;
            }
        }
        ab - cross
    }

    pub fn self_int(&self) -> i64 {
        self.pair(self)
    }

    /// Section count for the nonnegative shapes the reports use.  Exceptional
    /// coefficients must be -1 points (each imposes one base condition).
    pub fn h0(&self) -> i64 {
        if self.is_zero() {
            return 1;
        }
        if self.a < 0 || self.b < 0 {
            return 0;
        }
        let free = match self.kind {
            SheetKind::Quadric => (self.a + 1) * (self.b + 1),
            SheetKind::Ruled => (0..=self.a).map(|j| (self.b - j + 1).max(0)).sum(),
        };
        let pts: i64 = self.neg.values().map(|&c| c.abs()).sum();
        (free - pts).max(0)
    }
}

impl fmt::Display for SheetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("O");
        }
        let mut wrote = false;
        if self.a != 0 || self.b != 0 {
            write!(f, "({},{})", self.a, self.b)?;
            wrote = true;
        }
        for (n, &c) in &self.neg {
            if c == 0 {
                continue;
            }
            if !wrote {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if c.abs() == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{}*{n}", c.abs())?;
            }
            wrote = true;
        }
        Ok(())
    }
}

/// Generator of the global divisor group: the degree-one pullback `F` or a
/// sheet (second-stage sheets denote strict transforms).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GlobalSym {
    F,
    Sheet(SheetId),
}

impl fmt::Display for GlobalSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GlobalSym::F => f.write_str("F"),
            GlobalSym::Sheet(s) => write!(f, "{s}"),
        }
    }
}

/// Integer combination of global generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GlobalClass(pub BTreeMap<GlobalSym, i64>);

impl GlobalClass {
    pub fn zero() -> GlobalClass {
        GlobalClass::default()
    }

    pub fn f(mult: i64) -> GlobalClass {
        let mut g = GlobalClass::zero();
        g.add_sym(GlobalSym::F, mult);
        g
    }

    pub fn sheet(id: SheetId) -> GlobalClass {
        let mut g = GlobalClass::zero();
        g.add_sym(GlobalSym::Sheet(id), 1);
        g
    }

    pub fn add_sym(&mut self, sym: GlobalSym, coeff: i64) {
        let c = self.0.entry(sym).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.0.remove(&sym);
        }
    }

    pub fn add(&self, other: &GlobalClass) -> GlobalClass {
        let mut out = self.clone();
        for (&s, &c) in &other.0 {
            out.add_sym(s, c);
        }
        out
    }

    pub fn sub(&self, other: &GlobalClass) -> GlobalClass {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> GlobalClass {
        let mut out = self.clone();
        out.0.retain(|_, c| {
            *c *= k;
            *c != 0
        });
        out
    }

    pub fn coeff(&self, sym: GlobalSym) -> i64 {
        self.0.get(&sym).copied().unwrap_or(0)
    }
}

impl fmt::Display for GlobalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut wrote = false;
        for (s, &c) in &self.0 {
            if c == 0 {
                continue;
            }
            if !wrote {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if c.abs() == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{}*{s}", c.abs())?;
            }
            wrote = true;
        }
        Ok(())
    }
}

/// Signed half of a reducible degree-one member: `(j, -1)` is the half whose
/// cycle restriction contains `C_1`, namely `C_1..C_j` plus `cC_{j+1}..cC_k`.
pub type Half = (usize, i8);

pub fn half_name(h: Half) -> String {
    format!("S{}{}", h.0, if h.1 < 0 { "-" } else { "+" })
}

/// A detected base curve: a trace of a signed half on a sheet with negative
/// system degree, together with its degree-zero continuation chain.
#[derive(Clone, Debug)]
pub struct BaseCurve {
    pub half: Half,
    pub sheet: SheetId,
    pub class: SheetClass,
    pub degree: i64,
}

impl BaseCurve {
    pub fn name(&self) -> String {
        format!("{}∩{}", half_name(self.half), self.sheet)
    }
}

/// Which model a table describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Degree-two model of the given subtype.
    Halves(DsType),
    /// Four disjoint quadric sheets of the k = 4 birational surface.
    Quartet,
}

/// A stage of a model: sheets, restriction rows for every generator, and the
/// stage linear system.
#[derive(Clone, Debug)]
pub struct Model {
    pub kind: ModelKind,
    pub stage: u8,
    pub sheets: Vec<SheetId>,
    kinds: BTreeMap<SheetId, SheetKind>,
    rows: BTreeMap<SheetId, BTreeMap<GlobalSym, SheetClass>>,
    pub l: GlobalClass,
}

impl Model {
    pub fn sheet_kind(&self, t: SheetId) -> Result<SheetKind> {
        self.kinds
            .get(&t)
            .copied()
            .ok_or_else(|| Error::Table(format!("unknown sheet {t}")))
    }

    fn row(&self, sym: GlobalSym, t: SheetId) -> Result<&SheetClass> {
        self.rows
            .get(&t)
            .and_then(|m| m.get(&sym))
            .ok_or_else(|| Error::Table(format!("no restriction entry for ({sym}, {t})")))
    }

    /// Restrict a global class to a sheet by linear extension of the table.
    pub fn restrict(&self, g: &GlobalClass, t: SheetId) -> Result<SheetClass> {
        let mut out = SheetClass::zero(self.sheet_kind(t)?);
        for (&sym, &c) in &g.0 {
            out = out.add(&self.row(sym, t)?.scale(c));
        }
        Ok(out)
    }

    /// Triple product of global classes.  Expands the last factor over its
    /// generators, pairs restrictions on sheet factors, and bottoms out at
    /// the pullback rule `F·F·F = 0`.
    pub fn triple(&self, x: &GlobalClass, y: &GlobalClass, z: &GlobalClass) -> Result<i64> {
        let mut total = 0;
        for (&sym, &c) in &z.0 {
            total += c * match sym {
                GlobalSym::Sheet(t) => self.restrict(x, t)?.pair(&self.restrict(y, t)?),
                GlobalSym::F => {
                    let mut part = 0;
                    for (&sym2, &c2) in &y.0 {
                        part += c2 * match sym2 {
                            GlobalSym::Sheet(t) => {
                                self.restrict(x, t)?.pair(self.row(GlobalSym::F, t)?)
                            }
                            GlobalSym::F => {
                                let mut inner = 0;
                                for (&sym3, &c3) in &x.0 {
                                    inner += c3 * match sym3 {
                                        GlobalSym::Sheet(t) => {
                                            self.row(GlobalSym::F, t)?.self_int()
                                        }
                                        GlobalSym::F => 0,
                                    };
                                }
                                inner
                            }
                        };
                    }
                    part
                }
            };
        }
        Ok(total)
    }

    pub fn l_cubed(&self) -> Result<i64> {
        self.triple(&self.l, &self.l, &self.l)
    }
}

// ---------------------------------------------------------------------------
// Halves model, stage 1.

fn nodes(k: usize) -> Vec<NodeId> {
    let mut v: Vec<NodeId> = (1..=k).map(NodeId::P).collect();
    v.extend((1..=k).map(NodeId::CP));
    v
}

/// The two sheets a node lies on, in cycle order.
fn incident(k: usize, p: NodeId) -> (SheetId, SheetId) {
    match p {
        NodeId::P(i) if i < k => (SheetId::E(i), SheetId::E(i + 1)),
        NodeId::P(_) => (SheetId::E(k), SheetId::CE(1)),
        NodeId::CP(i) if i < k => (SheetId::CE(i), SheetId::CE(i + 1)),
        NodeId::CP(_) => (SheetId::CE(k), SheetId::E(1)),
    }
}

/// The sheet carrying the small-resolution point class of a node.
fn assigned(k: usize, p: NodeId) -> SheetId {
    match p {
        NodeId::P(i) if i < k => SheetId::E(i),
        NodeId::P(_) => SheetId::CE(1),
        NodeId::CP(i) if i < k => SheetId::CE(i),
        NodeId::CP(_) => SheetId::E(1),
    }
}

/// Cycle component carried by a sheet: `E_i` over `C_i`, `cE_i` over `cC_i`.
/// Returns whether that component belongs to the half `(j, sign)`.
fn in_half(t: SheetId, h: Half) -> bool {
    let (j, s) = h;
    match t {
        SheetId::E(i) => {
            if s < 0 {
                i <= j
            } else {
                i > j
            }
        }
        SheetId::CE(i) => {
            if s < 0 {
                i > j
            } else {
                i <= j
            }
        }
        _ => false,
    }
}

/// The half that contains the curve cut by a node's assigned-side blowup;
/// the assigned sheet's point class lies on the traces of exactly this half.
fn partner(k: usize, p: NodeId) -> Half {
    match p {
        NodeId::P(j) if j < k => (j, 1),
        NodeId::P(_) => (k, -1),
        NodeId::CP(j) if j < k => (j, -1),
        NodeId::CP(_) => (k, 1),
    }
}

/// Self-intersection of the cycle component under a sheet.
fn sheet_s(ds: DsType, t: SheetId) -> i64 {
    let hs = ds.half_string();
    match t {
        SheetId::E(i) | SheetId::CE(i) => hs[i - 1],
        _ => unreachable!("s-value requested for a second-stage sheet"),
    }
}

fn e_sheets(k: usize) -> Vec<SheetId> {
    let mut v: Vec<SheetId> = (1..=k).map(SheetId::E).collect();
    v.extend((1..=k).map(SheetId::CE));
    v
}

/// First-stage system: `2F` minus the sheets over all cycle components except
/// the last conjugate pair.
fn l1_class(k: usize) -> GlobalClass {
    let mut l = GlobalClass::f(2);
    for i in 1..k {
        l.add_sym(GlobalSym::Sheet(SheetId::E(i)), -1);
        l.add_sym(GlobalSym::Sheet(SheetId::CE(i)), -1);
    }
    l
}

/// Build the stage-1 model of a subtype from the adjacency rules.
pub fn stage1(ds: DsType) -> Model {
    let k = ds.k();
    let sheets = e_sheets(k);
    let mut kinds = BTreeMap::new();
    let mut rows: BTreeMap<SheetId, BTreeMap<GlobalSym, SheetClass>> = BTreeMap::new();
    for &t in &sheets {
        kinds.insert(t, SheetKind::Quadric);
        let mut row = BTreeMap::new();
        let f_t = SheetClass::of(SheetKind::Quadric, 0, sheet_s(ds, t) + 2);
        row.insert(GlobalSym::F, f_t.clone());
        // Neighbour rows, and the self row from F = (hyperplane) + all sheets.
        let mut self_row = f_t.sub(&SheetClass::of(SheetKind::Quadric, 1, 0));
        for &u in &sheets {
            if u == t {
                continue;
            }
            let mut cls = SheetClass::zero(SheetKind::Quadric);
            for &p in &nodes(k) {
                let (a, b) = incident(k, p);
                if (a == t && b == u) || (a == u && b == t) {
                    let mut adj = SheetClass::of(SheetKind::Quadric, 0, 1);
                    if assigned(k, p) == t {
                        adj.add_neg(&p.class_name(), -1);
                    }
                    cls = cls.add(&adj);
                }
            }
            self_row = self_row.sub(&cls);
            row.insert(GlobalSym::Sheet(u), cls);
        }
        row.insert(GlobalSym::Sheet(t), self_row);
        rows.insert(t, row);
    }
    Model {
        kind: ModelKind::Halves(ds),
        stage: 1,
        sheets,
        kinds,
        rows,
        l: l1_class(k),
    }
}

/// Trace of the signed half `(j, s)` on a stage-1 sheet.
pub fn s_curve(ds: DsType, h: Half, t: SheetId) -> SheetClass {
    let k = ds.k();
    let (j, _) = h;
    let divisors = [NodeId::P(j), NodeId::CP(j)];
    let mut cls = SheetClass::zero(SheetKind::Quadric);
    if in_half(t, h) {
        cls = SheetClass::of(SheetKind::Quadric, 1, 0);
        for p in divisors {
            if assigned(k, p) == t {
                cls.add_neg(&p.class_name(), -1);
            }
        }
    }
    for p in divisors {
        if assigned(k, p) == t && partner(k, p) == h {
            cls.add_neg(&p.class_name(), 1);
        }
    }
    cls
}

/// All halves of a subtype in a fixed order.
pub fn halves(ds: DsType) -> Vec<Half> {
    let mut v = Vec::new();
    for j in 1..=ds.k() {
        v.push((j, -1));
        v.push((j, 1));
    }
    v
}

/// Detect base curves of the stage system: seeds are half traces of negative
/// degree; each seed extends through contiguous nonzero traces of degree
/// zero along the sheet cycle.
pub fn base_curves(model: &Model) -> Result<Vec<BaseCurve>> {
    let ds = match model.kind {
        ModelKind::Halves(ds) => ds,
        ModelKind::Quartet => return Ok(Vec::new()),
    };
    let order = e_sheets(ds.k());
    let mut found = Vec::new();
    for h in halves(ds) {
        // Degrees of every trace of this half around the sheet cycle.
        let data: Vec<(SheetId, SheetClass, i64)> = order
            .iter()
            .map(|&t| {
                let c = s_curve(ds, h, t);
                let d = model.restrict(&model.l, t)?.pair(&c);
                Ok((t, c, d))
            })
            .collect::<Result<_>>()?;
        let n = data.len();
        let seeds: Vec<usize> = (0..n).filter(|&i| data[i].2 < 0).collect();
        let mut member = vec![false; n];
        for &s in &seeds {
            member[s] = true;
            // Walk both directions through degree-zero, nonzero traces.
            for dir in [1isize, -1] {
                let mut i = s as isize;
                loop {
                    i = (i + dir).rem_euclid(n as isize);
                    let e = &data[i as usize];
                    if member[i as usize] || e.1.is_zero() || e.2 != 0 {
                        break;
                    }
                    member[i as usize] = true;
                }
            }
        }
        for i in 0..n {
            if member[i] {
                let (t, c, d) = data[i].clone();
                found.push(BaseCurve {
                    half: h,
                    sheet: t,
                    class: c,
                    degree: d,
                });
            }
        }
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// Halves model, stage 2.

/// The base-curve chain of a subtype at stage 1: component `l` lies on `E_l`,
/// for `l = 1..k-2` (empty for subtype I), plus the conjugate chain.
pub fn chain_len(ds: DsType) -> usize {
    ds.k().saturating_sub(2)
}

fn chain_class(ds: DsType, l: usize) -> SheetClass {
    s_curve(ds, (ds.k(), -1), SheetId::E(l))
}

/// Build the stage-2 model by blowing up the base-curve chains in order.
/// Blowing up component `l` pierces `E_{l+1}` (and, for `l+1 <= n`, the
/// previous exceptional sheet), creating point classes `P<l>`.
pub fn stage2(ds: DsType) -> Result<Model> {
    let k = ds.k();
    let n = chain_len(ds);
    if n == 0 {
        return Err(Error::Table(
            "subtype I is already free at stage 1; no second stage".into(),
        ));
    }
    let stage_one = stage1(ds);
    let mut sheets = e_sheets(k);
    for l in 1..=n {
        sheets.push(SheetId::D(l));
    }
    for l in 1..=n {
        sheets.push(SheetId::CD(l));
    }
    let mut syms: Vec<GlobalSym> = vec![GlobalSym::F];
    syms.extend(sheets.iter().map(|&t| GlobalSym::Sheet(t)));

    let mut kinds = BTreeMap::new();
    let mut rows: BTreeMap<SheetId, BTreeMap<GlobalSym, SheetClass>> = BTreeMap::new();

    // Rows on the transformed cycle sheets.  E_{l+1} is blown at the pierce
    // point of center l; everything else pulls back.
    for &t in &e_sheets(k) {
        kinds.insert(t, SheetKind::Quadric);
        let mut row: BTreeMap<GlobalSym, SheetClass> = BTreeMap::new();
        // Restriction of each exceptional sheet D_l / cD_l to t.
        for side in [false, true] {
            for l in 1..=n {
                let (dsym, carrier, pierce_name) = if side {
                    (SheetId::CD(l), SheetId::CE(l), format!("cP{l}"))
                } else {
                    (SheetId::D(l), SheetId::E(l), format!("P{l}"))
                };
                let cls = if t == carrier {
                    // The center itself, as a strict transform: through the
                    // previous pierce point when l >= 2.
                    let mut c = if side {
                        chain_class(ds, l).conj()
                    } else {
                        chain_class(ds, l)
                    };
                    if l >= 2 {
                        c.add_neg(&if side { format!("cP{}", l - 1) } else { format!("P{}", l - 1) }, -1);
                    }
                    c
                } else {
                    // Transverse pierce: one point class on the next sheet of
                    // the same side; separated everywhere else.
                    let next = if side { SheetId::CE(l + 1) } else { SheetId::E(l + 1) };
                    if t == next {
                        let m = stage_one
                            .row(GlobalSym::Sheet(t), carrier)?
                            .pair(&if side { chain_class(ds, l).conj() } else { chain_class(ds, l) });
                        if !(0..=1).contains(&m) {
                            return Err(Error::Table(format!(
                                "center {dsym} meets {t} in {m} points; expected 0 or 1"
                            )));
                        }
                        if m == 1 {
                            SheetClass::zero(SheetKind::Quadric).with_neg(&pierce_name, 1)
                        } else {
                            SheetClass::zero(SheetKind::Quadric)
                        }
                    } else {
                        SheetClass::zero(SheetKind::Quadric)
                    }
                };
                row.insert(GlobalSym::Sheet(dsym), cls);
            }
        }
        // Pullbacks of F and of the cycle sheets, corrected by the centers
        // each one absorbs.
        row.insert(GlobalSym::F, stage_one.row(GlobalSym::F, t)?.clone());
        for &u in &e_sheets(k) {
            let mut cls = stage_one.row(GlobalSym::Sheet(u), t)?.clone();
            let center = match u {
                SheetId::E(l) if l <= n => Some(SheetId::D(l)),
                SheetId::CE(l) if l <= n => Some(SheetId::CD(l)),
                _ => None,
            };
            if let Some(d) = center {
                cls = cls.sub(row.get(&GlobalSym::Sheet(d)).expect("d row built"));
            }
            row.insert(GlobalSym::Sheet(u), cls);
        }
        rows.insert(t, row);
    }

    // Rows on the exceptional sheets D_l (ruled over the center) and their
    // conjugates.  A pulled-back class restricts as (degree on center)·f.
    for side in [false, true] {
        for l in 1..=n {
            let (dsheet, carrier) = if side {
                (SheetId::CD(l), SheetId::CE(l))
            } else {
                (SheetId::D(l), SheetId::E(l))
            };
            kinds.insert(dsheet, SheetKind::Ruled);
            let b = if side {
                chain_class(ds, l).conj()
            } else {
                chain_class(ds, l)
            };
            let deg = |sym: GlobalSym| -> Result<i64> {
                Ok(stage_one.row(sym, carrier)?.pair(&b))
            };
            let fiber = |m: i64| SheetClass::of(SheetKind::Ruled, 0, m);
            let mut row: BTreeMap<GlobalSym, SheetClass> = BTreeMap::new();
            row.insert(GlobalSym::F, fiber(deg(GlobalSym::F)?));
            // Exceptional-sheet rows on D_l first.
            for side2 in [false, true] {
                for m in 1..=n {
                    let dsym = if side2 { SheetId::CD(m) } else { SheetId::D(m) };
                    if side2 != side {
                        row.insert(GlobalSym::Sheet(dsym), SheetClass::zero(SheetKind::Ruled));
                        continue;
                    }
                    let pn = |idx: usize| if side { format!("cP{idx}") } else { format!("P{idx}") };
                    let cls = if m == l {
                        // Self row: (carrier·b)f - sigma.
                        let e_b = deg(GlobalSym::Sheet(carrier))?;
                        fiber(e_b).sub(&SheetClass::of(SheetKind::Ruled, 1, 0))
                    } else if m == l + 1 {
                        // The next center pierces this sheet at one point.
                        SheetClass::zero(SheetKind::Ruled).with_neg(&pn(l + 1), 1)
                    } else if m + 1 == l {
                        // The previous exceptional sheet meets in a fiber.
                        fiber(1)
                    } else {
                        SheetClass::zero(SheetKind::Ruled)
                    };
                    row.insert(GlobalSym::Sheet(dsym), cls);
                }
            }
            // Cycle-sheet rows: strict transforms subtract their centers.
            for &u in &e_sheets(k) {
                let mut cls = fiber(deg(GlobalSym::Sheet(u))?);
                let center = match u {
                    SheetId::E(m) if m <= n => Some(SheetId::D(m)),
                    SheetId::CE(m) if m <= n => Some(SheetId::CD(m)),
                    _ => None,
                };
                if let Some(d) = center {
                    if let Some(dcls) = row.get(&GlobalSym::Sheet(d)) {
                        cls = cls.sub(dcls);
                    }
                }
                row.insert(GlobalSym::Sheet(u), cls);
            }
            rows.insert(dsheet, row);
        }
    }

    // Stage-2 system: 2F - (cycle sheets except the last pair) - 2·centers.
    let mut l2 = l1_class(k);
    for l in 1..=n {
        l2.add_sym(GlobalSym::Sheet(SheetId::D(l)), -2);
        l2.add_sym(GlobalSym::Sheet(SheetId::CD(l)), -2);
    }

    Ok(Model {
        kind: ModelKind::Halves(ds),
        stage: 2,
        sheets,
        kinds,
        rows,
        l: l2,
    })
}

/// Count of ordinary double points created and resolved at stage 2.
pub fn odp_count(ds: DsType) -> usize {
    2 * chain_len(ds).saturating_sub(1)
}

// ---------------------------------------------------------------------------
// Quartet model.

/// Four disjoint quadric sheets over the fixed curves of the k = 4
/// birational surface; each sheet has normal degrees (-1,-2).
pub fn quartet() -> Model {
    let sheets = vec![SheetId::E(1), SheetId::E(2), SheetId::CE(1), SheetId::CE(2)];
    let mut kinds = BTreeMap::new();
    let mut rows: BTreeMap<SheetId, BTreeMap<GlobalSym, SheetClass>> = BTreeMap::new();
    for &t in &sheets {
        kinds.insert(t, SheetKind::Quadric);
        let mut row = BTreeMap::new();
        row.insert(GlobalSym::F, SheetClass::of(SheetKind::Quadric, 0, -1));
        for &u in &sheets {
            let cls = if u == t {
                SheetClass::of(SheetKind::Quadric, -1, -2)
            } else {
                SheetClass::zero(SheetKind::Quadric)
            };
            row.insert(GlobalSym::Sheet(u), cls);
        }
        rows.insert(t, row);
    }
    let mut l = GlobalClass::f(2);
    for &t in &sheets {
        l.add_sym(GlobalSym::Sheet(t), -1);
    }
    Model {
        kind: ModelKind::Quartet,
        stage: 1,
        sheets,
        kinds,
        rows,
        l,
    }
}

// ---------------------------------------------------------------------------
// Elimination reports and image profiles.

/// Image kind of a sheet or curve under the stage system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImageKind {
    Point,
    Line,
    Conic,
    PlaneBirational,
}

impl fmt::Display for ImageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ImageKind::Point => "point",
            ImageKind::Line => "line",
            ImageKind::Conic => "conic",
            ImageKind::PlaneBirational => "plane (birational)",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ImageEntry {
    pub subject: String,
    pub kind: ImageKind,
}

#[derive(Clone, Debug)]
pub struct StageReport {
    pub stage: u8,
    pub system: String,
    pub rows: Vec<(String, String)>,
    pub base_curves: Vec<BaseCurve>,
}

#[derive(Clone, Debug)]
pub struct Elimination {
    pub ds: DsType,
    pub stages: Vec<StageReport>,
    pub free: bool,
    pub l_cubed: i64,
    pub odp: usize,
    pub images: Vec<ImageEntry>,
    pub point_groups: Vec<Vec<SheetId>>,
}

fn stage_report(model: &Model) -> Result<StageReport> {
    let mut rows = Vec::new();
    for &t in &model.sheets {
        rows.push((t.to_string(), model.restrict(&model.l, t)?.to_string()));
    }
    Ok(StageReport {
        stage: model.stage,
        system: model.l.to_string(),
        rows,
        base_curves: base_curves(model)?,
    })
}

/// Degree of the stage-1 system on the strict transform of the twistor line
/// `L_i` (the intersection of the two `i`-halves): `2F` has degree 4 on it,
/// and it meets each subtracted sheet at the small-resolution points of the
/// nodes between the `i`-halves.
pub fn line_degree(ds: DsType, i: usize) -> i64 {
    let k = ds.k();
    let sub = |t: SheetId| -> i64 {
        match t {
            SheetId::E(m) | SheetId::CE(m) if m < k => 1,
            _ => 0,
        }
    };
    let mut d = 4;
    for p in [NodeId::P(i), NodeId::CP(i)] {
        d -= sub(assigned(k, p));
    }
    d
}

/// Cycle-adjacency components of the sheets whose system restriction is
/// trivial (each maps to one of the two ridge points).
pub fn point_groups(model: &Model) -> Result<Vec<Vec<SheetId>>> {
    let ds = match model.kind {
        ModelKind::Halves(ds) => ds,
        ModelKind::Quartet => return Ok(Vec::new()),
    };
    let k = ds.k();
    let pts: BTreeSet<SheetId> = e_sheets(k)
        .into_iter()
        .filter(|&t| {
            model
                .restrict(&model.l, t)
                .map(|c| c.is_zero())
                .unwrap_or(false)
        })
        .collect();
    let mut seen: BTreeSet<SheetId> = BTreeSet::new();
    let mut groups = Vec::new();
    // Walk the sheet cycle E1..Ek, cE1..cEk in order.
    let order = e_sheets(k);
    let pos = |t: SheetId| order.iter().position(|&u| u == t).unwrap();
    let cycle_order = |i: usize| -> SheetId {
        // Cycle adjacency is E1..Ek then cE1..cEk then back to E1.
        let m = order.len();
        let idx = i % m;
        if idx < k {
            SheetId::E(idx + 1)
        } else {
            SheetId::CE(idx - k + 1)
        }
    };
    for &t in &pts {
        if seen.contains(&t) {
            continue;
        }
        let mut group = vec![t];
        seen.insert(t);
        // Extend forwards and backwards along the cycle.
        for dir in [1isize, -1] {
            let m = order.len() as isize;
            let mut i = pos(t) as isize;
            loop {
                i = (i + dir).rem_euclid(m);
                let u = cycle_order(i as usize);
                if pts.contains(&u) && !seen.contains(&u) {
                    seen.insert(u);
                    if dir == 1 {
                        group.push(u);
                    } else {
                        group.insert(0, u);
                    }
                } else {
                    break;
                }
            }
        }
        groups.push(group);
    }
    Ok(groups)
}

/// Classify the image of each sheet under the final-stage system, plus the
/// twistor-line conics (subtype I) and the distinguished half images.
fn images(ds: DsType, fin: &Model) -> Result<Vec<ImageEntry>> {
    let mut out = Vec::new();
    for &t in &fin.sheets {
        let r = fin.restrict(&fin.l, t)?;
        let kind = if r.is_zero() {
            ImageKind::Point
        } else if r.h0() == 2 {
            ImageKind::Line
        } else if r.h0() == 3 && r.self_int() == 1 {
            ImageKind::PlaneBirational
        } else {
            continue;
        };
        out.push(ImageEntry {
            subject: t.to_string(),
            kind,
        });
    }
    if ds == DsType::I {
        for i in 1..=ds.k() {
            if line_degree(ds, i) == 2 {
                out.push(ImageEntry {
                    subject: format!("L{i}"),
                    kind: ImageKind::Conic,
                });
            }
        }
    } else {
        // The halves carrying the base chains map to two distinct lines: the
        // positive-degree part of each sits on the last exceptional sheet.
        let n = chain_len(ds);
        let last = SheetId::D(n);
        let section = SheetClass::of(SheetKind::Ruled, 1, 1);
        let d = fin.restrict(&fin.l, last)?.pair(&section);
        if d == 1 {
            out.push(ImageEntry {
                subject: format!("{}", half_name((ds.k(), -1))),
                kind: ImageKind::Line,
            });
            out.push(ImageEntry {
                subject: format!("{}", half_name((ds.k(), 1))),
                kind: ImageKind::Line,
            });
        }
    }
    Ok(out)
}

/// Run the staged elimination for a subtype and collect the report.
pub fn eliminate(ds: DsType) -> Result<Elimination> {
    let m1 = stage1(ds);
    validate_against_table(&m1)?;
    let mut stages = vec![stage_report(&m1)?];
    let (fin, free) = if ds == DsType::I {
        let free = stages[0].base_curves.is_empty();
        (m1, free)
    } else {
        let m2 = stage2(ds)?;
        validate_against_table(&m2)?;
        let rep = stage_report(&m2)?;
        let free = rep.base_curves.is_empty();
        stages.push(rep);
        (m2, free)
    };
    Ok(Elimination {
        ds,
        free,
        l_cubed: fin.l_cubed()?,
        odp: odp_count(ds),
        images: images(ds, &fin)?,
        point_groups: point_groups(&fin)?,
        stages,
    })
}

impl Elimination {
    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "# elimination report: subtype {} (k = {})\n",
            self.ds,
            self.ds.k()
        ));
        for st in &self.stages {
            s.push_str(&format!("\n## stage {}\n", st.stage));
            s.push_str(&format!("system: {}\n", st.system));
            s.push_str("restrictions:\n");
            for (t, c) in &st.rows {
                s.push_str(&format!("  {t}: {c}\n"));
            }
            if st.base_curves.is_empty() {
                s.push_str("base curves: none\n");
            } else {
                let names: Vec<String> = st.base_curves.iter().map(|b| b.name()).collect();
                s.push_str(&format!("base curves: {}\n", names.join(", ")));
                for b in &st.base_curves {
                    s.push_str(&format!("  {}: class {}, degree {}\n", b.name(), b.class, b.degree));
                }
            }
        }
        s.push_str(&format!("\nfree: {}\n", self.free));
        s.push_str(&format!("L^3: {}\n", self.l_cubed));
        s.push_str(&format!("odp: {}\n", self.odp));
        s.push_str("\n## images\n");
        for e in &self.images {
            s.push_str(&format!("{} -> {}\n", e.subject, e.kind));
        }
        s.push_str("point groups: ");
        let gs: Vec<String> = self
            .point_groups
            .iter()
            .map(|g| {
                let names: Vec<String> = g.iter().map(|t| t.to_string()).collect();
                format!("{{{}}}", names.join(", "))
            })
            .collect();
        s.push_str(&gs.join(" / "));
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Table files: transcription of the per-type restriction data, validated
// against the derived model.

const TABLE_I: &str = include_str!("../data/threefold/type-i.tbl");
const TABLE_II: &str = include_str!("../data/threefold/type-ii.tbl");
const TABLE_III: &str = include_str!("../data/threefold/type-iii.tbl");
const TABLE_IV: &str = include_str!("../data/threefold/type-iv.tbl");

pub fn table_text(ds: DsType) -> &'static str {
    match ds {
        DsType::I => TABLE_I,
        DsType::II => TABLE_II,
        DsType::III => TABLE_III,
        DsType::IV => TABLE_IV,
    }
}

/// One parsed `restrict`/`degree` line of a table file.
#[derive(Clone, Debug)]
pub enum TableLine {
    Restrict {
        stage: u8,
        sym: String,
        sheet: SheetId,
        class: String,
    },
    Degree {
        stage: u8,
        half: Half,
        sheet: SheetId,
        value: i64,
    },
    Assign {
        node: NodeId,
        sheet: SheetId,
    },
    Odp(usize),
}

fn parse_half(tok: &str) -> Option<Half> {
    let body = tok.strip_prefix('S')?;
    let (num, sign) = if let Some(n) = body.strip_suffix('-') {
        (n, -1)
    } else if let Some(n) = body.strip_suffix('+') {
        (n, 1)
    } else {
        return None;
    };
    num.parse::<usize>().ok().map(|j| (j, sign))
}

fn parse_node(tok: &str) -> Option<NodeId> {
    if let Some(r) = tok.strip_prefix("cP") {
        r.parse().ok().map(NodeId::CP)
    } else if let Some(r) = tok.strip_prefix('P') {
        r.parse().ok().map(NodeId::P)
    } else {
        None
    }
}

/// Parse a sheet-class expression like `(1,1) - D1 - cD2`, `O`, or `P1`.
pub fn parse_sheet_class(kind: SheetKind, text: &str) -> Result<SheetClass> {
    let bad = |msg: String| Error::Table(format!("bad sheet class {text:?}: {msg}"));
    let mut cls = SheetClass::zero(kind);
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.is_empty() {
        return Err(bad("empty expression".into()));
    }
    if toks == ["O"] {
        return Ok(cls);
    }
    let mut sign = 1i64;
    let mut expect_term = true;
    for tok in toks {
        match tok {
            "+" => {
                if expect_term {
                    return Err(bad("dangling '+'".into()));
                }
                sign = 1;
                expect_term = true;
            }
            "-" => {
                if expect_term {
                    return Err(bad("dangling '-'".into()));
                }
                sign = -1;
                expect_term = true;
            }
            _ => {
                if !expect_term {
                    return Err(bad(format!("missing operator before {tok:?}")));
                }
                let (mult, body) = match tok.split_once('*') {
                    Some((m, b)) => (
                        m.parse::<i64>()
                            .map_err(|_| bad(format!("bad multiplier {m:?}")))?,
                        b,
                    ),
                    None => (1, tok),
                };
                if let Some(inner) = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')) {
                    let (a, b) = inner
                        .split_once(',')
                        .ok_or_else(|| bad(format!("bad pair {body:?}")))?;
                    let a: i64 = a.trim().parse().map_err(|_| bad(format!("bad pair {body:?}")))?;
                    let b: i64 = b.trim().parse().map_err(|_| bad(format!("bad pair {body:?}")))?;
                    cls.a += sign * mult * a;
                    cls.b += sign * mult * b;
                } else if body.chars().all(|c| c.is_ascii_alphanumeric()) {
                    cls.add_neg(body, sign * mult);
                } else {
                    return Err(bad(format!("unrecognized token {body:?}")));
                }
                sign = 1;
                expect_term = false;
            }
        }
    }
    if expect_term {
        return Err(bad("trailing operator".into()));
    }
    Ok(cls)
}

/// Parse a table file into typed lines.
pub fn parse_table(text: &str) -> Result<(DsType, Vec<TableLine>)> {
    let mut ds = None;
    let mut stage = 1u8;
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Table(format!("table line {}: {msg}", ln + 1));
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "type" => {
                let t = toks.next().ok_or_else(|| err("missing subtype".into()))?;
                ds = Some(DsType::parse(t)?);
            }
            "stage" => {
                let s = toks.next().ok_or_else(|| err("missing stage".into()))?;
                stage = s.parse().map_err(|_| err(format!("bad stage {s:?}")))?;
            }
            "assign" => {
                let p = toks
                    .next()
                    .and_then(parse_node)
                    .ok_or_else(|| err("bad node".into()))?;
                let t = toks
                    .next()
                    .and_then(SheetId::parse)
                    .ok_or_else(|| err("bad sheet".into()))?;
                lines.push(TableLine::Assign { node: p, sheet: t });
            }
            "odp" => {
                let v = toks
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad count".into()))?;
                lines.push(TableLine::Odp(v));
            }
            "restrict" => {
                let sym = toks.next().ok_or_else(|| err("missing generator".into()))?;
                let sheet = toks
                    .next()
                    .and_then(SheetId::parse)
                    .ok_or_else(|| err("bad sheet".into()))?;
                let rest: Vec<&str> = toks.collect();
                let eq = rest.first().copied();
                if eq != Some("=") {
                    return Err(err("expected '='".into()));
                }
                lines.push(TableLine::Restrict {
                    stage,
                    sym: sym.to_string(),
                    sheet,
                    class: rest[1..].join(" "),
                });
            }
            "degree" => {
                let half = toks
                    .next()
                    .and_then(parse_half)
                    .ok_or_else(|| err("bad half".into()))?;
                let sheet = toks
                    .next()
                    .and_then(SheetId::parse)
                    .ok_or_else(|| err("bad sheet".into()))?;
                if toks.next() != Some("=") {
                    return Err(err("expected '='".into()));
                }
                let v = toks
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("bad degree".into()))?;
                lines.push(TableLine::Degree {
                    stage,
                    half,
                    sheet,
                    value: v,
                });
            }
            other => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    let ds = ds.ok_or_else(|| Error::Table("table file missing 'type' line".into()))?;
    Ok((ds, lines))
}

/// Check every transcription line of the subtype's table against the derived
/// model for the matching stage.
pub fn validate_against_table(model: &Model) -> Result<()> {
    let ds = match model.kind {
        ModelKind::Halves(ds) => ds,
        ModelKind::Quartet => return Ok(()),
    };
    let (tds, lines) = parse_table(table_text(ds))?;
    if tds != ds {
        return Err(Error::Table(format!(
            "table declares subtype {tds}, expected {ds}"
        )));
    }
    let k = ds.k();
    for line in lines {
        match line {
            TableLine::Assign { node, sheet } => {
                if assigned(k, node) != sheet {
                    return Err(Error::Table(format!(
                        "assignment of {} differs: table {sheet}, derived {}",
                        node.class_name(),
                        assigned(k, node)
                    )));
                }
            }
            TableLine::Odp(v) => {
                if v != odp_count(ds) {
                    return Err(Error::Table(format!(
                        "odp count differs: table {v}, derived {}",
                        odp_count(ds)
                    )));
                }
            }
            TableLine::Restrict {
                stage,
                sym,
                sheet,
                class,
            } => {
                if stage != model.stage {
                    continue;
                }
                let g = match sym.as_str() {
                    "F" => GlobalClass::f(1),
                    "L1" | "L2" => model.l.clone(),
                    s => match SheetId::parse(s) {
                        Some(t) => GlobalClass::sheet(t),
                        None => {
                            return Err(Error::Table(format!("unknown generator {s:?}")));
                        }
                    },
                };
                let expected = parse_sheet_class(model.sheet_kind(sheet)?, &class)?;
                let got = model.restrict(&g, sheet)?;
                if got != expected {
                    return Err(Error::Table(format!(
                        "restriction of {sym} to {sheet} differs: table {expected}, derived {got}"
                    )));
                }
            }
            TableLine::Degree {
                stage,
                half,
                sheet,
                value,
            } => {
                if stage != model.stage || model.stage != 1 {
                    continue;
                }
                let c = s_curve(ds, half, sheet);
                let d = model.restrict(&model.l, sheet)?.pair(&c);
                if d != value {
                    return Err(Error::Table(format!(
                        "degree of {}∩{sheet} differs: table {value}, derived {d}",
                        half_name(half)
                    )));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn q(a: i64, b: i64) -> SheetClass {
        SheetClass::of(SheetKind::Quadric, a, b)
    }

    #[test]
    fn stage1_rows_subtype_i() {
        let m = stage1(DsType::I);
        let l1 = m.restrict(&m.l, SheetId::E(1)).unwrap();
        assert_eq!(l1, q(1, 1).with_neg("D1", -1).with_neg("cD2", -1));
        assert_eq!(l1.to_string(), "(1,1) - D1 - cD2");
        let l2 = m.restrict(&m.l, SheetId::E(2)).unwrap();
        assert!(l2.is_zero());
        assert_eq!(l2.to_string(), "O");
    }

    #[test]
    fn stage1_rows_subtype_ii_iii_iv() {
        let m = stage1(DsType::II);
        assert_eq!(
            m.restrict(&m.l, SheetId::E(1)).unwrap().to_string(),
            "(1,0) - cD3"
        );
        assert_eq!(
            m.restrict(&m.l, SheetId::E(2)).unwrap().to_string(),
            "(1,1) - D2"
        );
        assert_eq!(m.restrict(&m.l, SheetId::E(3)).unwrap().to_string(), "O");

        let m = stage1(DsType::III);
        assert_eq!(
            m.restrict(&m.l, SheetId::E(1)).unwrap().to_string(),
            "(1,0) - cD4"
        );
        assert_eq!(m.restrict(&m.l, SheetId::E(2)).unwrap().to_string(), "(1,0)");
        assert_eq!(
            m.restrict(&m.l, SheetId::E(3)).unwrap().to_string(),
            "(1,1) - D3"
        );
        assert_eq!(m.restrict(&m.l, SheetId::E(4)).unwrap().to_string(), "O");

        let m = stage1(DsType::IV);
        assert_eq!(
            m.restrict(&m.l, SheetId::E(1)).unwrap().to_string(),
            "(1,0) - cD5"
        );
        assert_eq!(m.restrict(&m.l, SheetId::E(2)).unwrap().to_string(), "(1,0)");
        assert_eq!(m.restrict(&m.l, SheetId::E(3)).unwrap().to_string(), "(1,0)");
        assert_eq!(
            m.restrict(&m.l, SheetId::E(4)).unwrap().to_string(),
            "(1,1) - D4"
        );
        assert_eq!(m.restrict(&m.l, SheetId::E(5)).unwrap().to_string(), "O");
    }

    #[test]
    fn half_trace_degrees_subtype_i() {
        // The four trace degrees on E1 pin the first-stage curve checks.
        let m = stage1(DsType::I);
        let expect = [((1, -1), 0), ((1, 1), 1), ((2, -1), 0), ((2, 1), 1)];
        for ((j, s), want) in expect {
            let c = s_curve(DsType::I, (j, s as i8), SheetId::E(1));
            let d = m.restrict(&m.l, SheetId::E(1)).unwrap().pair(&c);
            assert_eq!(d, want, "half S{j}{s} on E1");
        }
    }

    #[test]
    fn base_curves_per_subtype() {
        assert!(base_curves(&stage1(DsType::I)).unwrap().is_empty());

        let b = base_curves(&stage1(DsType::II)).unwrap();
        let names: Vec<String> = b.iter().map(|x| x.name()).collect();
        assert_eq!(names, vec!["S3-∩E1", "S3+∩cE1"]);
        assert_eq!(b[0].degree, -1);

        let b = base_curves(&stage1(DsType::III)).unwrap();
        let names: Vec<String> = b.iter().map(|x| x.name()).collect();
        assert_eq!(names, vec!["S4-∩E1", "S4-∩E2", "S4+∩cE1", "S4+∩cE2"]);
        assert_eq!(
            b.iter().map(|x| x.degree).collect::<Vec<_>>(),
            vec![-1, 0, -1, 0]
        );

        let b = base_curves(&stage1(DsType::IV)).unwrap();
        let names: Vec<String> = b.iter().map(|x| x.name()).collect();
        assert_eq!(
            names,
            vec!["S5-∩E1", "S5-∩E2", "S5-∩E3", "S5+∩cE1", "S5+∩cE2", "S5+∩cE3"]
        );
    }

    #[test]
    fn stage2_rows_and_freeness() {
        let m = stage2(DsType::II).unwrap();
        assert_eq!(m.restrict(&m.l, SheetId::E(1)).unwrap().to_string(), "O");
        assert_eq!(
            m.restrict(&m.l, SheetId::E(2)).unwrap().to_string(),
            "(1,1) - D2 - P1"
        );
        assert_eq!(m.restrict(&m.l, SheetId::E(3)).unwrap().to_string(), "O");
        assert_eq!(
            m.restrict(&m.l, SheetId::D(1)).unwrap().to_string(),
            "(1,1)"
        );
        assert!(base_curves(&m).unwrap().is_empty());

        let m = stage2(DsType::III).unwrap();
        assert_eq!(m.restrict(&m.l, SheetId::E(1)).unwrap().to_string(), "O");
        assert_eq!(m.restrict(&m.l, SheetId::E(2)).unwrap().to_string(), "O");
        assert_eq!(
            m.restrict(&m.l, SheetId::E(3)).unwrap().to_string(),
            "(1,1) - D3 - P2"
        );
        assert_eq!(
            m.restrict(&m.l, SheetId::D(1)).unwrap().to_string(),
            "(1,1) - P2"
        );
        assert_eq!(
            m.restrict(&m.l, SheetId::D(2)).unwrap().to_string(),
            "(1,1)"
        );
        assert!(base_curves(&m).unwrap().is_empty());

        let m = stage2(DsType::IV).unwrap();
        assert_eq!(
            m.restrict(&m.l, SheetId::E(4)).unwrap().to_string(),
            "(1,1) - D4 - P3"
        );
        assert!(base_curves(&m).unwrap().is_empty());
    }

    #[test]
    fn final_cube_is_four_for_all_subtypes() {
        for ds in DsType::all() {
            let e = eliminate(ds).unwrap();
            assert_eq!(e.l_cubed, 4, "subtype {ds}");
            assert!(e.free, "subtype {ds}");
        }
    }

    #[test]
    fn odp_counts() {
        assert_eq!(odp_count(DsType::I), 0);
        assert_eq!(odp_count(DsType::II), 0);
        assert_eq!(odp_count(DsType::III), 2);
        assert_eq!(odp_count(DsType::IV), 4);
    }

    #[test]
    fn quartet_identities() {
        let m = quartet();
        let f = GlobalClass::f(1);
        assert_eq!(m.triple(&f, &f, &f).unwrap(), 0);
        let l = m.l.clone();
        for &t in &m.sheets {
            let e = GlobalClass::sheet(t);
            assert_eq!(m.triple(&l, &l, &e).unwrap(), 0, "square on {t}");
            assert_eq!(m.triple(&e, &e, &e).unwrap(), 4, "cube of {t}");
            assert_eq!(m.triple(&f, &f, &e).unwrap(), 0);
        }
        for kf in 1..=3 {
            assert_eq!(m.triple(&l, &l, &f.scale(kf)).unwrap(), 4 * kf);
        }
        assert_eq!(m.l_cubed().unwrap(), 8);
    }

    #[test]
    fn line_degrees_subtype_i() {
        assert_eq!(line_degree(DsType::I, 1), 2);
        assert_eq!(line_degree(DsType::I, 2), 2);
    }

    #[test]
    fn image_profiles() {
        let e = eliminate(DsType::I).unwrap();
        let pts: Vec<Vec<String>> = e
            .point_groups
            .iter()
            .map(|g| g.iter().map(|t| t.to_string()).collect())
            .collect();
        assert_eq!(pts, vec![vec!["E2".to_string()], vec!["cE2".to_string()]]);
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "L1" && i.kind == ImageKind::Conic));
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "E1" && i.kind == ImageKind::Line));

        let e = eliminate(DsType::II).unwrap();
        let pts: Vec<Vec<String>> = e
            .point_groups
            .iter()
            .map(|g| g.iter().map(|t| t.to_string()).collect())
            .collect();
        assert_eq!(pts.len(), 2);
        let flat: BTreeSet<String> = pts.iter().flatten().cloned().collect();
        assert_eq!(
            flat,
            ["E1", "E3", "cE1", "cE3"].iter().map(|s| s.to_string()).collect()
        );
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "D1" && i.kind == ImageKind::PlaneBirational));
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "S3-" && i.kind == ImageKind::Line));
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "S3+" && i.kind == ImageKind::Line));

        let e = eliminate(DsType::III).unwrap();
        assert_eq!(e.point_groups.len(), 2);
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "D1" && i.kind == ImageKind::Line));
        assert!(e
            .images
            .iter()
            .any(|i| i.subject == "D2" && i.kind == ImageKind::PlaneBirational));

        let e = eliminate(DsType::IV).unwrap();
        assert_eq!(e.point_groups.len(), 2);
        assert_eq!(
            e.point_groups.iter().map(|g| g.len()).collect::<Vec<_>>(),
            vec![4, 4]
        );
    }

    #[test]
    fn tables_validate() {
        for ds in DsType::all() {
            validate_against_table(&stage1(ds)).unwrap();
            if ds != DsType::I {
                validate_against_table(&stage2(ds).unwrap()).unwrap();
            }
        }
    }

    #[test]
    fn report_text_contains_base_curves() {
        let e = eliminate(DsType::II).unwrap();
        let md = e.to_markdown();
        assert!(md.contains("base curves: S3-∩E1, S3+∩cE1"), "{md}");
        assert!(md.contains("L^3: 4"));
    }

    fn random_class(model: &Model, rng: &mut ChaCha20Rng) -> GlobalClass {
        let mut g = GlobalClass::f(rng.gen_range(-3..=3));
        for &t in &model.sheets {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                g.add_sym(GlobalSym::Sheet(t), c);
            }
        }
        g
    }

    #[test]
    fn triple_products_are_symmetric_on_random_classes() {
        for ds in DsType::all() {
            let models: Vec<Model> = if ds == DsType::I {
                vec![stage1(ds)]
            } else {
                vec![stage1(ds), stage2(ds).unwrap()]
            };
            for m in &models {
                let mut rng = ChaCha20Rng::seed_from_u64(7 + ds.k() as u64);
                for _ in 0..100 {
                    let x = random_class(m, &mut rng);
                    let y = random_class(m, &mut rng);
                    let z = random_class(m, &mut rng);
                    let t0 = m.triple(&x, &y, &z).unwrap();
                    assert_eq!(t0, m.triple(&y, &z, &x).unwrap());
                    assert_eq!(t0, m.triple(&z, &x, &y).unwrap());
                    assert_eq!(t0, m.triple(&y, &x, &z).unwrap());
                    assert_eq!(t0, m.triple(&x, &z, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn triple_is_trilinear() {
        let m = stage2(DsType::III).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..50 {
            let x = random_class(&m, &mut rng);
            let x2 = random_class(&m, &mut rng);
            let y = random_class(&m, &mut rng);
            let z = random_class(&m, &mut rng);
            let lhs = m.triple(&x.add(&x2), &y, &z).unwrap();
            let rhs = m.triple(&x, &y, &z).unwrap() + m.triple(&x2, &y, &z).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn stage_sums_reproduce_double_degree_one() {
        // Adding back the subtracted divisors recovers 2F at every stage.
        for ds in DsType::all() {
            let m1 = stage1(ds);
            let mut back = m1.l.clone();
            for (&sym, &c) in &l1_class(ds.k()).0 {
                if sym != GlobalSym::F {
                    back.add_sym(sym, -c);
                }
            }
            assert_eq!(back, GlobalClass::f(2));
            if ds == DsType::I {
                continue;
            }
            let m2 = stage2(ds).unwrap();
            let mut back = m2.l.clone();
            for (&sym, &c) in &m2.l.0 {
                if sym != GlobalSym::F {
                    back.add_sym(sym, -c);
                }
            }
            assert_eq!(back, GlobalClass::f(2));
        }
    }

    #[test]
    fn missing_row_is_a_hard_error() {
        let m = stage1(DsType::I);
        let g = GlobalClass::sheet(SheetId::D(1));
        let err = m.restrict(&g, SheetId::E(1)).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("D1") && msg.contains("E1"), "{msg}");
    }
}
