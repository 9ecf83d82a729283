//! Exhaustive certification over every online set, and rate–memory sweeps
//! against the baseline schemes.

use std::fmt;
use std::str::FromStr;

use log::info;
use num_rational::Ratio;
use rayon::prelude::*;

use crate::baselines::{a_vectors, crr_mt_point, crr_t_point, mt_point, rr_point, SchemeTag};
use crate::combinatorics::{k_subsets, PointSet};
use crate::designs::{resolve_design, TDesign};
use crate::error::{Error, Result};
use crate::hppda::{AMap, GeneralizedHpPda};
use crate::scheme::{
    active_user_count, decode_user, deliver, place, rate, DemandVector, Library, SchemeInstance,
};

/// Runs `f` on a dedicated pool of `workers` threads (0 = rayon default).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnlineSetReport {
    pub online: PointSet,
    pub users: usize,
    pub decoded: usize,
    pub transmissions: usize,
    pub measured_rate: Ratio<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertReport {
    pub formula_rate: Ratio<u64>,
    pub per_online_set: Vec<OnlineSetReport>,
}

impl CertReport {
    pub fn online_sets(&self) -> usize {
        self.per_online_set.len()
    }

    pub fn users_decoded(&self) -> usize {
        self.per_online_set.iter().map(|r| r.decoded).sum()
    }

    /// Every user decoded and every measured rate equals the formula.
    pub fn passes(&self) -> bool {
        self.per_online_set
            .iter()
            .all(|r| r.decoded == r.users && r.measured_rate == self.formula_rate)
    }
}

fn certify_one(
    inst: &SchemeInstance,
    library: &Library,
    online: &PointSet,
) -> Result<OnlineSetReport> {
    let demand = DemandVector::worst_case(inst.hppda(), online, library.len())?;
    let session = deliver(inst, &demand)?;
    let mut decoded = 0;
    for (user, &file) in &demand.demands {
        let tr = decode_user(inst, &session, user)?;
        if tr.file != library.file(file) {
            return Err(Error::DecodeFailure {
                online: online.to_string(),
                user: user.to_string(),
                reason: format!("reconstructed file differs from library file {file}"),
            });
        }
        decoded += 1;
    }
    Ok(OnlineSetReport {
        online: online.clone(),
        users: demand.demands.len(),
        decoded,
        transmissions: session.transmissions.len(),
        measured_rate: Ratio::new(session.transmissions.len() as u64, inst.code().d() as u64),
    })
}

/// Delivers worst-case distinct demands for every online set and decodes every
/// active user. The first failure (in online-set order) aborts the run.
pub fn check_all(inst: &SchemeInstance, library: &Library, workers: usize) -> Result<CertReport> {
    let g = inst.hppda();
    let d = g.design();
    let k_o = active_user_count(d.v(), d.t(), g.r());
    if (library.len() as u64) < k_o {
        return Err(Error::InvalidParameter(format!(
            "worst-case certification needs N ≥ K_o = {k_o}, library has {}",
            library.len()
        )));
    }
    let formula_rate = rate(g)?.rate;
    let online_sets = k_subsets(d.v(), d.t() as usize);
    let results: Vec<Result<OnlineSetReport>> = with_workers(workers, || {
        online_sets
            .par_iter()
            .map(|online| certify_one(inst, library, online))
            .collect()
    })?;
    let per_online_set = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CertReport {
        formula_rate,
        per_online_set,
    })
}

/// Sweep configuration, read from `key = value` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    /// `catalog:NAME` or a design file path.
    pub design: String,
    pub r: u32,
    pub files: usize,
    /// K and K' of the dedicated-cache baselines.
    pub baseline_k: u64,
    pub baseline_k_online: u64,
    /// |T| handed to the RR formula.
    pub rr_removed: u64,
    /// Cap on enumerated a maps per scheme.
    pub a_budget: usize,
    pub simulate: bool,
    pub seed: u64,
    pub file_bytes: usize,
    /// Include MT / CRR-MT / CRR-t / RR rows.
    pub baselines: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            design: "catalog:steiner-3-8-4-1".into(),
            r: 2,
            files: 18,
            baseline_k: 8,
            baseline_k_online: 3,
            rr_removed: 0,
            a_budget: 4096,
            simulate: false,
            seed: 1,
            file_bytes: 32,
            baselines: true,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "design" => cfg.design = value.to_string(),
                "r" => cfg.r = parse_value(key, value)?,
                "files" | "n" => cfg.files = parse_value(key, value)?,
                "baseline_k" => cfg.baseline_k = parse_value(key, value)?,
                "baseline_k_online" => cfg.baseline_k_online = parse_value(key, value)?,
                "rr_removed" => cfg.rr_removed = parse_value(key, value)?,
                "a_budget" => cfg.a_budget = parse_value(key, value)?,
                "simulate" => cfg.simulate = parse_value(key, value)?,
                "seed" => cfg.seed = parse_value(key, value)?,
                "file_bytes" => cfg.file_bytes = parse_value(key, value)?,
                "baselines" => cfg.baselines = parse_value(key, value)?,
                other => return Err(Error::Parse(format!("unknown config key `{other}`"))),
            }
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRow {
    pub scheme: SchemeTag,
    pub params: String,
    pub m_over_n: Ratio<u64>,
    pub rate: Ratio<u64>,
    pub k_o: u64,
    pub rate_per_user: Ratio<u64>,
}

impl SweepRow {
    fn new(
        scheme: SchemeTag,
        params: String,
        m_over_n: Ratio<u64>,
        rate: Ratio<u64>,
        k_o: u64,
    ) -> Self {
        let rate_per_user = rate / Ratio::from_integer(k_o);
        SweepRow {
            scheme,
            params,
            m_over_n,
            rate,
            k_o,
            rate_per_user,
        }
    }
}

impl fmt::Display for SweepRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] M/N={} R={} K_o={} R/K_o={}",
            self.scheme, self.params, self.m_over_n, self.rate, self.k_o, self.rate_per_user
        )
    }
}

/// Decimal rendering with 6 significant digits.
pub fn sig6(x: Ratio<u64>) -> String {
    let value = *x.numer() as f64 / *x.denom() as f64;
    if value == 0.0 {
        return "0.00000".into();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}

pub const CSV_HEADER: [&str; 8] = [
    "scheme",
    "params",
    "m_over_n",
    "rate",
    "k_o",
    "rate_per_user",
    "m_over_n_dec",
    "rate_per_user_dec",
];

pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        w.write_record([
            row.scheme.to_string(),
            row.params.clone(),
            row.m_over_n.to_string(),
            row.rate.to_string(),
            row.k_o.to_string(),
            row.rate_per_user.to_string(),
            sig6(row.m_over_n),
            sig6(row.rate_per_user),
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Every a map with 0 ≤ a_{s,j} ≤ λ_s^t over the admissible (s, j), in
/// odometer order, at most `budget` of them.
pub fn proposed_a_maps(design: &TDesign, r: u32, budget: usize) -> Result<Vec<AMap>> {
    let t = design.t();
    let mut slots = Vec::new();
    for j in 1..=r {
        for s in 1..=t.saturating_sub(j) {
            slots.push((s, j, design.lambda_s_t(s)?));
        }
    }
    let mut out = Vec::new();
    let mut cur = vec![0u64; slots.len()];
    'outer: loop {
        if out.len() >= budget {
            break;
        }
        let mut a = AMap::new();
        for (&(s, j, _), &value) in slots.iter().zip(&cur) {
            a.set(s, j, value);
        }
        out.push(a);
        let mut i = slots.len();
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            if cur[i] < slots[i].2 {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
    Ok(out)
}

/// Delivers once for the first online set and checks decoding and the
/// measured rate against the formula.
pub fn simulate_once(g: GeneralizedHpPda, cfg: &SweepConfig) -> Result<()> {
    let formula = rate(&g)?;
    let online = PointSet::range(1, g.design().t());
    let library = Library::random(cfg.files, cfg.file_bytes, cfg.seed)?;
    let k_o = active_user_count(g.design().v(), g.design().t(), g.r());
    let demand = if (cfg.files as u64) >= k_o {
        DemandVector::worst_case(&g, &online, cfg.files)?
    } else {
        DemandVector::random(&g, &online, cfg.files, cfg.seed)?
    };
    let inst = place(g, &library)?;
    let session = deliver(&inst, &demand)?;
    let measured = Ratio::new(session.transmissions.len() as u64, inst.code().d() as u64);
    if measured != formula.rate {
        return Err(Error::Infeasible(format!(
            "simulated rate {measured} differs from formula {}",
            formula.rate
        )));
    }
    for (user, &file) in &demand.demands {
        let tr = decode_user(&inst, &session, user)?;
        if tr.file != library.file(file) {
            return Err(Error::DecodeFailure {
                online: online.to_string(),
                user: user.to_string(),
                reason: "simulated decode differs".into(),
            });
        }
    }
    Ok(())
}

/// Result of a sweep: rows plus the a maps skipped as infeasible.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub skipped: Vec<(String, String)>,
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let design = resolve_design(&cfg.design)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let k_o = active_user_count(design.v(), design.t(), cfg.r);

    for a in proposed_a_maps(&design, cfg.r, cfg.a_budget)? {
        let g = GeneralizedHpPda::new(design.clone(), cfg.r, a.clone())?;
        let feas = g.feasibility()?;
        if !feas.passes() {
            let reason = format!(
                "Y = {:?} violates the chain at j = {:?}",
                feas.y, feas.violations
            );
            info!("skipping a = {a}: {reason}");
            skipped.push((a.to_string(), reason));
            continue;
        }
        let point = rate(&g)?;
        if cfg.simulate {
            simulate_once(g, cfg)?;
        }
        rows.push(SweepRow::new(
            SchemeTag::Proposed,
            format!("r={};{a}", cfg.r),
            point.memory_ratio,
            point.rate,
            k_o,
        ));
    }

    if cfg.baselines {
        let (k, k_online) = (cfg.baseline_k, cfg.baseline_k_online);
        for t in 1..=k_online {
            let p = mt_point(k, k_online, t)?;
            rows.push(SweepRow::new(
                p.scheme,
                p.params,
                p.memory_ratio,
                p.rate,
                k_online,
            ));
        }
        for t in 1..=k_online {
            let p = crr_mt_point(k, k_online, t)?;
            rows.push(SweepRow::new(
                p.scheme,
                p.params,
                p.memory_ratio,
                p.rate,
                k_online,
            ));
        }
        let t_online = u64::from(design.t());
        for a in a_vectors(&design, cfg.a_budget)? {
            let p = crr_t_point(&design, &a)?;
            rows.push(SweepRow::new(
                p.scheme,
                p.params,
                p.memory_ratio,
                p.rate,
                t_online,
            ));
        }
        for a in a_vectors(&design, cfg.a_budget)? {
            match rr_point(&design, &a, cfg.rr_removed) {
                Ok(p) => rows.push(SweepRow::new(
                    p.scheme,
                    p.params,
                    p.memory_ratio,
                    p.rate,
                    t_online,
                )),
                Err(e) => {
                    info!("skipping rr a = {a:?}: {e}");
                    skipped.push((format!("rr {a:?}"), e.to_string()));
                }
            }
        }
    }
    Ok(SweepOutput { rows, skipped })
}

/// Proposed rows with M/N in `[lo, hi]` whose rate per user is strictly below
/// that of every baseline row with M/N in the same band. Empty when no
/// baseline row falls in the band.
pub fn dominating_rows(rows: &[SweepRow], lo: Ratio<u64>, hi: Ratio<u64>) -> Vec<&SweepRow> {
    let in_band = |r: &&SweepRow| r.m_over_n >= lo && r.m_over_n <= hi;
    let baselines: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| r.scheme != SchemeTag::Proposed)
        .filter(in_band)
        .collect();
    if baselines.is_empty() {
        return Vec::new();
    }
    rows.iter()
        .filter(|r| r.scheme == SchemeTag::Proposed)
        .filter(in_band)
        .filter(|p| baselines.iter().all(|b| p.rate_per_user < b.rate_per_user))
        .collect()
}
