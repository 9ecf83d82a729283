//! Closed-form rate–memory points of the comparison hotplug schemes.

use std::fmt;

use num_rational::Ratio;

use crate::combinatorics::c;
use crate::designs::TDesign;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeTag {
    Proposed,
    Mt,
    CrrMt,
    CrrT,
    Rr,
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeTag::Proposed => "proposed",
            SchemeTag::Mt => "mt",
            SchemeTag::CrrMt => "crr-mt",
            SchemeTag::CrrT => "crr-t",
            SchemeTag::Rr => "rr",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TradeoffPoint {
    pub scheme: SchemeTag,
    pub params: String,
    pub memory_ratio: Ratio<u64>,
    pub rate: Ratio<u64>,
}

fn check_t(k: u64, k_online: u64, t: u64) -> Result<()> {
    if k_online > k || t == 0 || t > k_online {
        return Err(Error::InvalidParameter(format!(
            "need 1 ≤ t={t} ≤ K'={k_online} ≤ K={k}"
        )));
    }
    Ok(())
}

/// (C(K−1,t−1)/C(K,t), C(K',t+1)/C(K',t)).
pub fn mt_point(k: u64, k_online: u64, t: u64) -> Result<TradeoffPoint> {
    check_t(k, k_online, t)?;
    Ok(TradeoffPoint {
        scheme: SchemeTag::Mt,
        params: format!("t={t}"),
        memory_ratio: Ratio::new(c(k - 1, t - 1), c(k, t)),
        rate: Ratio::new(c(k_online, t + 1), c(k_online, t)),
    })
}

/// Denominator C(K',t) − C(K'−1,t−1) + C(K−1,t−1) for both coordinates.
pub fn crr_mt_point(k: u64, k_online: u64, t: u64) -> Result<TradeoffPoint> {
    check_t(k, k_online, t)?;
    let denom = c(k_online, t) - c(k_online - 1, t - 1) + c(k - 1, t - 1);
    Ok(TradeoffPoint {
        scheme: SchemeTag::CrrMt,
        params: format!("t={t}"),
        memory_ratio: Ratio::new(c(k - 1, t - 1), denom),
        rate: Ratio::new(c(k_online, t + 1), denom),
    })
}

/// Checks 0 ≤ a_s ≤ λ_s^t for s in 1..t−1 (index s−1).
fn check_a(design: &TDesign, a: &[u64]) -> Result<()> {
    let t = design.t() as usize;
    if a.len() + 1 > t.max(1) {
        return Err(Error::InvalidParameter(format!(
            "{} values given, at most t−1 = {} allowed",
            a.len(),
            t.saturating_sub(1)
        )));
    }
    for (i, &value) in a.iter().enumerate() {
        let s = i as u32 + 1;
        let bound = design.lambda_s_t(s)?;
        if value > bound {
            return Err(Error::InvalidParameter(format!(
                "a_{s} = {value} exceeds λ_{s}^t = {bound}"
            )));
        }
    }
    Ok(())
}

fn a_label(a: &[u64]) -> String {
    let parts: Vec<String> = a
        .iter()
        .enumerate()
        .map(|(i, v)| format!("a{}={v}", i + 1))
        .collect();
    parts.join(";")
}

/// Single-access t-design scheme: Z = λ_1, F' = Σ a_s C(t,s),
/// Z' = Σ a_s (C(t,s) − C(t−1,s)), S = Σ a_s C(t,s+1); the point is
/// (Z, S) / (Z + F' − Z'). `a[s−1]` holds a_s.
pub fn crr_t_point(design: &TDesign, a: &[u64]) -> Result<TradeoffPoint> {
    check_a(design, a)?;
    if a.iter().all(|&v| v == 0) {
        return Err(Error::InvalidParameter("all a_s are zero".into()));
    }
    let t = u64::from(design.t());
    let z = design.lambda_s(1)?;
    let (mut f, mut zp, mut s_total) = (0, 0, 0);
    for (i, &value) in a.iter().enumerate() {
        let s = i as u64 + 1;
        f += value * c(t, s);
        zp += value * (c(t, s) - c(t - 1, s));
        s_total += value * c(t, s + 1);
    }
    let denom = z + f - zp;
    Ok(TradeoffPoint {
        scheme: SchemeTag::CrrT,
        params: a_label(a),
        memory_ratio: Ratio::new(z, denom),
        rate: Ratio::new(s_total, denom),
    })
}

/// (λ_1 / |R|, (Σ a_s C(t,s+1) − |T|) / |R|) with |R| = Σ a_s C(t,s) > λ_1.
/// The removed-label count |T| is supplied by the caller.
pub fn rr_point(design: &TDesign, a: &[u64], removed: u64) -> Result<TradeoffPoint> {
    check_a(design, a)?;
    let t = u64::from(design.t());
    let lambda_1 = design.lambda_s(1)?;
    let rows: u64 = a
        .iter()
        .enumerate()
        .map(|(i, v)| v * c(t, i as u64 + 1))
        .sum();
    if rows <= lambda_1 {
        return Err(Error::InvalidParameter(format!(
            "|R| = {rows} must exceed λ_1 = {lambda_1}"
        )));
    }
    let labels: u64 = a
        .iter()
        .enumerate()
        .map(|(i, v)| v * c(t, i as u64 + 2))
        .sum();
    if removed > labels {
        return Err(Error::InvalidParameter(format!(
            "|T| = {removed} exceeds the {labels} transmissions"
        )));
    }
    Ok(TradeoffPoint {
        scheme: SchemeTag::Rr,
        params: format!("{};T={removed}", a_label(a)),
        memory_ratio: Ratio::new(lambda_1, rows),
        rate: Ratio::new(labels - removed, rows),
    })
}

/// Every a vector with 0 ≤ a_s ≤ λ_s^t, s = 1..t−1, lexicographic, excluding all-zero.
pub fn a_vectors(design: &TDesign, budget: usize) -> Result<Vec<Vec<u64>>> {
    let bounds: Vec<u64> = (1..design.t())
        .map(|s| design.lambda_s_t(s))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut cur = vec![0u64; bounds.len()];
    loop {
        if cur.iter().any(|&v| v > 0) {
            out.push(cur.clone());
            if out.len() >= budget {
                break;
            }
        }
        // odometer increment, last coordinate fastest
        let mut i = bounds.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::steiner_3_8_4_1;

    fn r(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    #[test]
    fn mt_examples() {
        let p = mt_point(8, 3, 1).unwrap();
        assert_eq!((p.memory_ratio, p.rate), (r(1, 8), r(1, 1)));
        let p = mt_point(8, 3, 2).unwrap();
        assert_eq!((p.memory_ratio, p.rate), (r(1, 4), r(1, 3)));
        assert_eq!(mt_point(8, 3, 3).unwrap().rate, r(0, 1));
        assert!(mt_point(8, 3, 0).is_err());
        assert!(mt_point(8, 3, 4).is_err());
    }

    #[test]
    fn crr_mt_examples() {
        let p = crr_mt_point(8, 3, 1).unwrap();
        assert_eq!((p.memory_ratio, p.rate), (r(1, 3), r(1, 1)));
        let p = crr_mt_point(8, 3, 2).unwrap();
        assert_eq!((p.memory_ratio, p.rate), (r(7, 8), r(1, 8)));
        assert_eq!(crr_mt_point(8, 3, 3).unwrap().rate, r(0, 1));
    }

    #[test]
    fn crr_t_examples() {
        let d = steiner_3_8_4_1();
        // a = λ^t: denominator λ_1 + Σ a_s C(t−1,s) = 7 + 4 + 2
        let p = crr_t_point(&d, &[2, 2]).unwrap();
        assert_eq!((p.memory_ratio, p.rate), (r(7, 13), r(8, 13)));
        assert!(crr_t_point(&d, &[0, 0]).is_err());
        assert!(crr_t_point(&d, &[3, 0]).is_err());
        assert!(crr_t_point(&d, &[1, 1, 1]).is_err());
    }

    #[test]
    fn rr_examples() {
        let d = steiner_3_8_4_1();
        // |R| = 2·3 + 2·3 = 12, S = 2·3 + 2·1 = 8
        let p = rr_point(&d, &[2, 2], 3).unwrap();
        assert_eq!((p.memory_ratio, p.rate), (r(7, 12), r(5, 12)));
        let p = rr_point(&d, &[2, 2], 0).unwrap();
        assert_eq!(p.rate, r(8, 12));
        assert!(rr_point(&d, &[2, 2], 9).is_err());
        assert!(rr_point(&d, &[1, 1], 0).is_err());
    }

    #[test]
    fn a_vector_grid() {
        let d = steiner_3_8_4_1();
        let all = a_vectors(&d, usize::MAX).unwrap();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], [0, 1]);
        assert_eq!(all[7], [2, 2]);
        assert_eq!(a_vectors(&d, 3).unwrap().len(), 3);
    }
}
