//! Generalized hotplug placement delivery arrays built from a t-design.
//!
//! For a t-(v,k,λ) design with access degree r the construction produces
//!
//! * `Pc` (b × v): block A stores cache i iff i ∈ A;
//! * `P` (b × C(v,r)): user U can read block A iff U ∩ A ≠ ∅;
//! * one PDA `B_j` per j ∈ [r], describing delivery to users that see exactly
//!   j online caches.
//!
//! Rows of `B_j` are pairs (Y, i) with Y ⊂ [t], 1 ≤ |Y| ≤ t − j and
//! i ≤ a_{s,j}, ordered by (|Y|, Y, i). Columns are the r-subsets U with
//! |U ∩ [t]| = j in lexicographic order. A cell is a star iff Y meets U ∩ [t];
//! otherwise it carries the label (Y ∪ (U ∩ [t]), i) whose occurrence index is
//! the lexicographic rank (1-based) of U ∖ [t] among the (r−j)-subsets of
//! [t+1..v].
//!
//! For an online set I, the map sending [t] onto I and [t+1..v] onto [v] ∖ I
//! (both increasing) turns the columns of `B_j` into τ_j(I) and its rows into
//! ζ_j(I), the selected blocks A^I_{φ(Y)}(i).

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::combinatorics::{c, k_subsets, Point, PointSet};
use crate::designs::TDesign;
use crate::error::{Error, Result};
use crate::pda::{Cell, Label, Pda};

/// The parameters a_{s,j}, keyed by (s, j). Absent keys are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AMap(BTreeMap<(u32, u32), u64>);

impl AMap {
    pub fn new() -> Self {
        AMap(BTreeMap::new())
    }

    pub fn with(mut self, s: u32, j: u32, value: u64) -> Self {
        self.set(s, j, value);
        self
    }

    pub fn set(&mut self, s: u32, j: u32, value: u64) {
        if value == 0 {
            self.0.remove(&(s, j));
        } else {
            self.0.insert((s, j), value);
        }
    }

    pub fn get(&self, s: u32, j: u32) -> u64 {
        self.0.get(&(s, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries in (s, j) order.
    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), u64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    /// a_{s,j} = λ_s^t for every admissible (s, j).
    pub fn maximal(design: &TDesign, r: u32) -> Result<Self> {
        let t = design.t();
        let mut a = AMap::new();
        for j in 1..=r {
            for s in 1..=t.saturating_sub(j) {
                a.set(s, j, design.lambda_s_t(s)?);
            }
        }
        Ok(a)
    }

    /// Parses `s,j=v` entries, e.g. `1,2=1,1,1=2,2,1=1` or `1,2=1;1,1=2`.
    pub fn parse(text: &str) -> Result<Self> {
        let norm: String = text
            .chars()
            .map(|ch| {
                if ch == ';' || ch.is_whitespace() {
                    ','
                } else {
                    ch
                }
            })
            .collect();
        let norm = norm.trim_matches(',');
        let mut a = AMap::new();
        if norm.is_empty() {
            return Ok(a);
        }
        let bad = || Error::Parse(format!("expected s,j=v entries, got `{text}`"));
        // "s,j=v,s,j=v" splits on '=' into [s,j] [v,s,j] ... [v]
        let pieces: Vec<Vec<u64>> = norm
            .split('=')
            .map(|piece| {
                piece
                    .split(',')
                    .filter(|x| !x.is_empty())
                    .map(|x| x.trim().parse::<u64>().map_err(|_| bad()))
                    .collect::<Result<Vec<u64>>>()
            })
            .collect::<Result<_>>()?;
        let n = pieces.len();
        if n < 2 || pieces[0].len() != 2 || pieces[n - 1].len() != 1 {
            return Err(bad());
        }
        if pieces[1..n - 1].iter().any(|p| p.len() != 3) {
            return Err(bad());
        }
        let mut key = (pieces[0][0], pieces[0][1]);
        for piece in &pieces[1..] {
            a.set(key.0 as u32, key.1 as u32, piece[0]);
            if piece.len() == 3 {
                key = (piece[1], piece[2]);
            }
        }
        Ok(a)
    }
}

impl fmt::Display for AMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|((s, j), v)| format!("{s},{j}={v}"))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

/// A star/null array with labelled rows (blocks) and columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarArray {
    pub rows: Vec<PointSet>,
    pub cols: Vec<PointSet>,
    pub cells: Vec<Vec<bool>>,
}

impl StarArray {
    pub fn is_star(&self, row: usize, col: usize) -> bool {
        self.cells[row][col]
    }

    pub fn column_star_counts(&self) -> Vec<usize> {
        (0..self.cols.len())
            .map(|c| self.cells.iter().filter(|r| r[c]).count())
            .collect()
    }

    /// Dump with a header column of row identifiers; null cells render as `.`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.cols.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("#|{}\n", header.join("|")));
        for (row, cells) in self.rows.iter().zip(&self.cells) {
            let line: Vec<&str> = cells.iter().map(|s| if *s { "*" } else { "." }).collect();
            out.push_str(&format!("{row}|{}\n", line.join("|")));
        }
        out
    }
}

/// Cache placement array: row A has a star in column i iff i ∈ A.
pub fn build_pc(design: &TDesign) -> StarArray {
    let cols: Vec<PointSet> = (1..=design.v()).map(|i| PointSet::new([i])).collect();
    build_access(design, cols)
}

/// User access array for access degree r: star at (A, U) iff U ∩ A ≠ ∅.
pub fn build_p(design: &TDesign, r: u32) -> Result<StarArray> {
    check_degree(design, r)?;
    Ok(build_access(design, k_subsets(design.v(), r as usize)))
}

fn build_access(design: &TDesign, cols: Vec<PointSet>) -> StarArray {
    let cells = design
        .blocks()
        .iter()
        .map(|a| cols.iter().map(|u| u.intersects(a)).collect())
        .collect();
    StarArray {
        rows: design.blocks().to_vec(),
        cols,
        cells,
    }
}

fn check_degree(design: &TDesign, r: u32) -> Result<()> {
    if r == 0 || r > design.t() || r >= design.v() {
        return Err(Error::InvalidParameter(format!(
            "access degree r={r} outside 1..={}",
            design.t().min(design.v() - 1)
        )));
    }
    Ok(())
}

/// Row identifier (Y, i) of a delivery array.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowKey {
    pub set: PointSet,
    pub copy: u32,
}

impl fmt::Display for RowKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.set, self.copy)
    }
}

/// The delivery PDA for users seeing exactly `j` online caches, with its row
/// and column identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BjArray {
    pub j: u32,
    pub rows: Vec<RowKey>,
    pub cols: Vec<PointSet>,
    pub pda: Pda<Label>,
}

impl BjArray {
    /// Dump with row and column identifiers.
    pub fn dump(&self) -> String {
        let header: Vec<String> = self.cols.iter().map(|c| c.to_string()).collect();
        let mut out = format!("#|{}\n", header.join("|"));
        for (key, row) in self.rows.iter().zip(self.pda.cells()) {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Star => "*".to_string(),
                    Cell::Label(l) => l.to_string(),
                })
                .collect();
            out.push_str(&format!("{key}|{}\n", cells.join("|")));
        }
        out
    }
}

/// Row identifiers of `B_j` in (|Y|, Y, i) order.
pub fn row_keys(t: u32, j: u32, a: &AMap) -> Vec<RowKey> {
    let base = PointSet::range(1, t);
    let mut rows = Vec::new();
    for s in 1..=t.saturating_sub(j) {
        let copies = a.get(s, j) as u32;
        for y in base.subsets(s as usize) {
            for copy in 1..=copies {
                rows.push(RowKey {
                    set: y.clone(),
                    copy,
                });
            }
        }
    }
    rows
}

/// Column identifiers of `B_j`: r-subsets of [v] meeting [t] in exactly j points.
pub fn column_keys(v: u32, t: u32, r: u32, j: u32) -> Vec<PointSet> {
    let base = PointSet::range(1, t);
    k_subsets(v, r as usize)
        .into_iter()
        .filter(|u| u.intersection(&base).len() == j as usize)
        .collect()
}

fn check_a(design: &TDesign, r: u32, a: &AMap) -> Result<()> {
    let t = design.t();
    for ((s, j), value) in a.entries() {
        if j == 0 || j > r || s == 0 || s + j > t {
            return Err(Error::InvalidParameter(format!(
                "a_{{{s},{j}}} is not an admissible index for t={t}, r={r}"
            )));
        }
        let bound = design.lambda_s_t(s)?;
        if value > bound {
            return Err(Error::InvalidParameter(format!(
                "a_{{{s},{j}}} = {value} exceeds λ_{s}^t = {bound}"
            )));
        }
    }
    Ok(())
}

/// Builds `B_j`. Fails when some a_{s,j} exceeds λ_s^t or when the row set is empty.
pub fn build_bj(design: &TDesign, r: u32, j: u32, a: &AMap) -> Result<BjArray> {
    check_degree(design, r)?;
    if j == 0 || j > r {
        return Err(Error::InvalidParameter(format!("j={j} outside 1..={r}")));
    }
    check_a(design, r, a)?;
    let (v, t) = (design.v(), design.t());
    let rows = row_keys(t, j, a);
    if rows.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "B_{j} has no rows: a_{{s,{j}}} = 0 for all s"
        )));
    }
    let cols = column_keys(v, t, r, j);
    let base = PointSet::range(1, t);
    let tail = PointSet::range(t + 1, v);
    let cells = rows
        .iter()
        .map(|row| {
            cols.iter()
                .map(|u| {
                    let online = u.intersection(&base);
                    if online.intersects(&row.set) {
                        Cell::Star
                    } else {
                        let rank = u.difference(&base).lex_rank_in(&tail).expect("tail subset");
                        Cell::Label(Label {
                            set: row.set.union(&online),
                            copy: row.copy,
                            occurrence: rank as u32 + 1,
                        })
                    }
                })
                .collect()
        })
        .collect();
    let pda = Pda::with_columns(cells, cols.len())?;
    Ok(BjArray { j, rows, cols, pda })
}

/// The increasing bijection sending [t] onto I and [t+1..v] onto [v] ∖ I.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    forward: Vec<Point>,
}

impl Relabeling {
    pub fn new(v: u32, online: &PointSet) -> Self {
        let rest = PointSet::range(1, v).difference(online);
        let forward = online
            .points()
            .iter()
            .chain(rest.points())
            .copied()
            .collect();
        Relabeling { forward }
    }

    pub fn apply(&self, p: Point) -> Point {
        self.forward[p as usize - 1]
    }

    pub fn apply_set(&self, set: &PointSet) -> PointSet {
        set.map(|p| self.apply(p))
    }
}

fn check_online(design: &TDesign, online: &PointSet) -> Result<()> {
    if online.len() != design.t() as usize
        || online.points().iter().any(|&p| p == 0 || p > design.v())
    {
        return Err(Error::InvalidParameter(format!(
            "online set {online:?} must be a {}-subset of 1..={}",
            design.t(),
            design.v()
        )));
    }
    Ok(())
}

/// τ_j(I): r-subsets meeting I in exactly j points, ordered as the columns of `B_j`.
pub fn tau(design: &TDesign, online: &PointSet, r: u32, j: u32) -> Result<Vec<PointSet>> {
    check_online(design, online)?;
    let phi = Relabeling::new(design.v(), online);
    Ok(column_keys(design.v(), design.t(), r, j)
        .iter()
        .map(|u| phi.apply_set(u))
        .collect())
}

/// ζ_j(I): for s = 1..t−j and H ∈ C(I, s) in order, the first a_{s,j} blocks
/// containing H and avoiding I ∖ H. Ordered as the rows of `B_j`.
pub fn zeta(design: &TDesign, online: &PointSet, j: u32, a: &AMap) -> Result<Vec<PointSet>> {
    check_online(design, online)?;
    let t = design.t();
    let mut out = Vec::new();
    for s in 1..=t.saturating_sub(j) {
        let take = a.get(s, j) as usize;
        if take == 0 {
            continue;
        }
        for h in online.subsets(s as usize) {
            let candidates = design.blocks_for(&h, online)?;
            if candidates.len() < take {
                return Err(Error::InvalidParameter(format!(
                    "a_{{{s},{j}}} = {take} but only {} blocks meet {online} exactly in {h}",
                    candidates.len()
                )));
            }
            out.extend(candidates.into_iter().take(take));
        }
    }
    Ok(out)
}

/// Closed-form parameters of `B_j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeliveryParams {
    pub j: u32,
    /// Columns: C(t,j)·C(v−t,r−j).
    pub k: u64,
    /// Rows: Σ_s a_{s,j}·C(t,s).
    pub f: u64,
    /// Stars per column: Σ_s a_{s,j}·(C(t,s) − C(t−j,s)).
    pub z: u64,
    /// Labels: Σ_s a_{s,j}·C(t,s+j)·C(v−t,r−j).
    pub s: u64,
}

/// Parameters of the generalized array triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpPdaParams {
    /// Number of caches C = v.
    pub caches: u32,
    /// Online caches C' = t.
    pub online: u32,
    pub r: u32,
    /// Coded subfiles per file F = b.
    pub f: u64,
    /// Stars per column of Pc, λ_1.
    pub z_c: u64,
    /// Stars per column of P.
    pub z: u64,
    pub per_j: Vec<DeliveryParams>,
}

pub fn delivery_params(design: &TDesign, r: u32, j: u32, a: &AMap) -> DeliveryParams {
    let (v, t) = (u64::from(design.v()), u64::from(design.t()));
    let (r64, j64) = (u64::from(r), u64::from(j));
    let tail = c(v - t, r64 - j64);
    let mut f = 0;
    let mut z = 0;
    let mut s_total = 0;
    for s in 1..=design.t().saturating_sub(j) {
        let a_sj = a.get(s, j);
        let s = u64::from(s);
        f += a_sj * c(t, s);
        z += a_sj * (c(t, s) - c(t - j64, s));
        s_total += a_sj * c(t, s + j64) * tail;
    }
    DeliveryParams {
        j,
        k: c(t, j64) * tail,
        f,
        z,
        s: s_total,
    }
}

/// Z_j = Σ_{i=1}^{j} (−1)^{i+1} C(j,i) λ_i: blocks meeting a fixed j-set.
pub fn online_access(design: &TDesign, j: u32) -> Result<u64> {
    let mut acc: i128 = 0;
    for i in 1..=j {
        let term = i128::from(c(u64::from(j), u64::from(i))) * i128::from(design.lambda_s(i)?);
        acc += if i % 2 == 1 { term } else { -term };
    }
    u64::try_from(acc).map_err(|_| Error::Overflow(format!("Z_{j}")))
}

/// Result of the chain condition Y_j ≤ Y_{j−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    /// Y_j for j = 1..=r (index j−1).
    pub y: Vec<u64>,
    /// Values of j ≥ 2 with Y_j > Y_{j−1}.
    pub violations: Vec<u32>,
}

impl Feasibility {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    /// Y_r, the MDS dimension.
    pub fn subpacketization(&self) -> u64 {
        *self.y.last().expect("r >= 1")
    }
}

/// Y_j = Z_j + Σ_s a_{s,j}·C(t−j,s) and the chain check. Y_0 is unbounded, so
/// only j ≥ 2 can violate.
pub fn feasibility_of(design: &TDesign, r: u32, a: &AMap) -> Result<Feasibility> {
    let t = u64::from(design.t());
    let mut y = Vec::with_capacity(r as usize);
    for j in 1..=r {
        let mut extra = 0;
        for s in 1..=design.t().saturating_sub(j) {
            extra += a.get(s, j) * c(t - u64::from(j), u64::from(s));
        }
        y.push(online_access(design, j)? + extra);
    }
    let violations = (2..=r)
        .filter(|&j| y[j as usize - 1] > y[j as usize - 2])
        .collect();
    Ok(Feasibility { y, violations })
}

/// The triple (Pc, P, {B_j}) with its parameters.
#[derive(Debug, Clone)]
pub struct GeneralizedHpPda {
    design: TDesign,
    r: u32,
    a: AMap,
    pc: StarArray,
    p: StarArray,
    /// `B_j` at index j−1; `None` when a_{s,j} = 0 for every s.
    b: Vec<Option<BjArray>>,
    params: HpPdaParams,
}

impl GeneralizedHpPda {
    pub fn new(design: TDesign, r: u32, a: AMap) -> Result<Self> {
        check_degree(&design, r)?;
        check_a(&design, r, &a)?;
        let pc = build_pc(&design);
        let p = build_p(&design, r)?;
        let b = (1..=r)
            .map(|j| {
                if row_keys(design.t(), j, &a).is_empty() {
                    Ok(None)
                } else {
                    build_bj(&design, r, j, &a).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let params = HpPdaParams {
            caches: design.v(),
            online: design.t(),
            r,
            f: design.b() as u64,
            z_c: design.lambda_s(1)?,
            z: online_access(&design, r)?,
            per_j: (1..=r)
                .map(|j| delivery_params(&design, r, j, &a))
                .collect(),
        };
        Ok(GeneralizedHpPda {
            design,
            r,
            a,
            pc,
            p,
            b,
            params,
        })
    }

    pub fn design(&self) -> &TDesign {
        &self.design
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn a(&self) -> &AMap {
        &self.a
    }

    pub fn pc(&self) -> &StarArray {
        &self.pc
    }

    pub fn p(&self) -> &StarArray {
        &self.p
    }

    pub fn bj(&self, j: u32) -> Option<&BjArray> {
        self.b.get(j as usize - 1).and_then(Option::as_ref)
    }

    pub fn params(&self) -> &HpPdaParams {
        &self.params
    }

    pub fn feasibility(&self) -> Result<Feasibility> {
        feasibility_of(&self.design, self.r, &self.a)
    }

    pub fn tau(&self, online: &PointSet, j: u32) -> Result<Vec<PointSet>> {
        tau(&self.design, online, self.r, j)
    }

    pub fn zeta(&self, online: &PointSet, j: u32) -> Result<Vec<PointSet>> {
        zeta(&self.design, online, j, &self.a)
    }

    /// All r-subsets meeting the online set.
    pub fn active_users(&self, online: &PointSet) -> Vec<PointSet> {
        k_subsets(self.design.v(), self.r as usize)
            .into_iter()
            .filter(|u| u.intersects(online))
            .collect()
    }
}

/// A cell where the star patterns disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarMismatch {
    pub row: usize,
    pub col: usize,
    pub block: PointSet,
    pub user: PointSet,
    /// Whether `B_j` has a star there.
    pub bj_star: bool,
}

/// Star-match result for one j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JMatch {
    pub j: u32,
    pub rows: usize,
    pub cols: usize,
    /// Size disagreement between ζ_j/τ_j and `B_j`, if any.
    pub shape_error: Option<String>,
    /// First `B_j` star whose cell in P is not a star.
    pub containment: Option<StarMismatch>,
    /// First disagreement with availability through online caches only.
    pub exact: Option<StarMismatch>,
}

impl JMatch {
    pub fn containment_ok(&self) -> bool {
        self.shape_error.is_none() && self.containment.is_none()
    }

    pub fn exact_ok(&self) -> bool {
        self.shape_error.is_none() && self.exact.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchReport {
    pub online: PointSet,
    pub per_j: Vec<JMatch>,
}

impl MatchReport {
    pub fn passes(&self) -> bool {
        self.per_j
            .iter()
            .all(|m| m.containment_ok() && m.exact_ok())
    }

    /// One line: `I=246 j=1:ok/ok j=2:ok/ok`.
    pub fn summary(&self) -> String {
        let mut out = format!("I={}", self.online);
        for m in &self.per_j {
            let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
            out.push_str(&format!(
                " j={}:{}/{}",
                m.j,
                flag(m.containment_ok()),
                flag(m.exact_ok())
            ));
        }
        out
    }
}

/// Checks, for every j, that the stars of `B_j` (i) land on stars of
/// [P]_{ζ_j(I)×τ_j(I)} and (ii) coincide exactly with the cells where the
/// block meets the user's online caches.
pub fn verify_hppda(g: &GeneralizedHpPda, online: &PointSet) -> Result<MatchReport> {
    let mut per_j = Vec::new();
    for j in 1..=g.r {
        let rows = g.zeta(online, j)?;
        let cols = g.tau(online, j)?;
        let mut m = JMatch {
            j,
            rows: rows.len(),
            cols: cols.len(),
            shape_error: None,
            containment: None,
            exact: None,
        };
        let expected = &g.params.per_j[j as usize - 1];
        if rows.len() as u64 != expected.f || cols.len() as u64 != expected.k {
            m.shape_error = Some(format!(
                "ζ×τ is {}×{}, B_{j} is {}×{}",
                rows.len(),
                cols.len(),
                expected.f,
                expected.k
            ));
        } else if let Some(bj) = g.bj(j) {
            let p_col: BTreeMap<&PointSet, usize> =
                g.p.cols.iter().enumerate().map(|(i, u)| (u, i)).collect();
            'scan: for (ri, block) in rows.iter().enumerate() {
                let p_row = g
                    .design
                    .block_index(block)
                    .expect("selected block is in the design");
                for (ci, user) in cols.iter().enumerate() {
                    let bj_star = bj.pda.cell(ri, ci).is_star();
                    let in_p = g.p.is_star(p_row, p_col[user]);
                    let reachable = block.intersects(&user.intersection(online));
                    let miss = || StarMismatch {
                        row: ri,
                        col: ci,
                        block: block.clone(),
                        user: user.clone(),
                        bj_star,
                    };
                    if m.containment.is_none() && bj_star && !in_p {
                        m.containment = Some(miss());
                    }
                    if m.exact.is_none() && bj_star != reachable {
                        m.exact = Some(miss());
                    }
                    if m.containment.is_some() && m.exact.is_some() {
                        break 'scan;
                    }
                }
            }
        }
        per_j.push(m);
    }
    Ok(MatchReport {
        online: online.clone(),
        per_j,
    })
}

/// [`verify_hppda`] for every t-subset of [v], in lexicographic order of I.
/// Runs on the current rayon pool.
pub fn verify_all_online_sets(g: &GeneralizedHpPda) -> Result<Vec<MatchReport>> {
    k_subsets(g.design.v(), g.design.t() as usize)
        .par_iter()
        .map(|online| verify_hppda(g, online))
        .collect()
}
