//! Closed-form predictions for the copied network, used to validate the
//! sampling simulations: binomially thinned degree distributions, the giant
//! component criterion, moment transforms, reciprocity and clustering.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("moments must be positive (got {0})")]
    BadMoments(f64),
    #[error("pmf is not normalized (sums to {0})")]
    BadPmf(f64),
}

fn check_prob(p: f64) -> Result<(), TheoryError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TheoryError::BadProbability(p));
    }
    Ok(())
}

fn check_pmf(pmf: &BTreeMap<u32, f64>) -> Result<(), TheoryError> {
    let sum: f64 = pmf.values().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(TheoryError::BadPmf(sum));
    }
    Ok(())
}

/// A (possibly truncated) probability mass function over degrees.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnedPmf {
    pub probs: BTreeMap<u32, f64>,
    /// Mass beyond the output cap, 1 - sum(probs) clamped at 0.
    pub truncated_mass: f64,
}

/// Binomial row b(k) = C(n, k) p^k (1-p)^(n-k) for k = 0..=min(n, k_cap).
///
/// Forward recurrence when (1-p)^n stays representable, log-space via a
/// cumulative log-factorial table otherwise.
fn binomial_row(n: u32, p: f64, k_cap: u32, ln_fact: &mut Vec<f64>) -> Vec<f64> {
    let top = n.min(k_cap) as usize;
    let mut row = vec![0.0; top + 1];
    if p <= 0.0 {
        row[0] = 1.0;
        return row;
    }
    if p >= 1.0 {
        if n as usize <= top {
            row[n as usize] = 1.0;
        }
        return row;
    }
    let q = 1.0 - p;
    if n as f64 * q.ln() > -700.0 {
        let mut b = q.powi(n as i32);
        for k in 0..=top {
            row[k] = b;
            if k < n as usize {
                b *= (n as usize - k) as f64 / (k + 1) as f64 * (p / q);
            }
        }
    } else {
        while ln_fact.len() <= n as usize {
            let i = ln_fact.len();
            ln_fact.push(ln_fact[i - 1] + (i as f64).ln());
        }
        let (lp, lq) = (p.ln(), q.ln());
        for (k, slot) in row.iter_mut().enumerate() {
            let ln_b = ln_fact[n as usize] - ln_fact[k] - ln_fact[n as usize - k]
                + k as f64 * lp
                + (n as usize - k) as f64 * lq;
            *slot = ln_b.exp();
        }
    }
    row
}

/// Degree distribution after thinning every link independently with the copy
/// probability: p_c(k) = sum over k0 >= k of p_s(k0) C(k0,k) p^k (1-p)^(k0-k).
pub fn thinned_degree_pmf(
    source_pmf: &BTreeMap<u32, f64>,
    copy_prob: f64,
    k_max_out: u32,
) -> Result<ThinnedPmf, TheoryError> {
    check_prob(copy_prob)?;
    check_pmf(source_pmf)?;
    let mut out: BTreeMap<u32, f64> = BTreeMap::new();
    let mut ln_fact = vec![0.0f64];
    for (&k0, &mass) in source_pmf {
        if mass == 0.0 {
            continue;
        }
        let row = binomial_row(k0, copy_prob, k_max_out, &mut ln_fact);
        for (k, b) in row.into_iter().enumerate() {
            if b > 0.0 {
                *out.entry(k as u32).or_insert(0.0) += mass * b;
            }
        }
    }
    let sum: f64 = out.values().sum();
    Ok(ThinnedPmf {
        probs: out,
        truncated_mass: (1.0 - sum).max(0.0),
    })
}

/// Joint (in, out) distribution under independent binomial thinning of each
/// coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnedJointPmf {
    pub probs: BTreeMap<(u32, u32), f64>,
    pub truncated_mass: f64,
}

pub fn thinned_joint_pmf(
    source_joint: &BTreeMap<(u32, u32), f64>,
    copy_prob: f64,
    j_cap: u32,
    k_cap: u32,
) -> Result<ThinnedJointPmf, TheoryError> {
    check_prob(copy_prob)?;
    let sum: f64 = source_joint.values().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(TheoryError::BadPmf(sum));
    }
    let mut out: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut ln_fact = vec![0.0f64];
    for (&(j0, k0), &mass) in source_joint {
        if mass == 0.0 {
            continue;
        }
        let row_j = binomial_row(j0, copy_prob, j_cap, &mut ln_fact);
        let row_k = binomial_row(k0, copy_prob, k_cap, &mut ln_fact);
        for (j, bj) in row_j.iter().enumerate() {
            if *bj == 0.0 {
                continue;
            }
            for (k, bk) in row_k.iter().enumerate() {
                let w = mass * bj * bk;
                if w > 0.0 {
                    *out.entry((j as u32, k as u32)).or_insert(0.0) += w;
                }
            }
        }
    }
    let total: f64 = out.values().sum();
    Ok(ThinnedJointPmf {
        probs: out,
        truncated_mass: (1.0 - total).max(0.0),
    })
}

/// Critical copy probability <k>'/<k2>' (equivalently <k>'/<jk>' with the
/// mixed moment for directed sources).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GccThreshold {
    /// Raw ratio; may exceed 1.
    pub raw: f64,
    /// Raw value clamped to [0, 1] for use as a probability.
    pub clamped: f64,
    /// False when raw > 1: no giant component at any copy probability.
    pub achievable: bool,
}

pub fn gcc_threshold(mean_k: f64, mean_k2_or_jk: f64) -> Result<GccThreshold, TheoryError> {
    for m in [mean_k, mean_k2_or_jk] {
        if !(m > 0.0) {
            return Err(TheoryError::BadMoments(m));
        }
    }
    let raw = mean_k / mean_k2_or_jk;
    Ok(GccThreshold {
        raw,
        clamped: raw.min(1.0),
        achievable: raw <= 1.0,
    })
}

/// Whether a giant component is predicted at the given copy probability:
/// true iff p_e >= <k>'/<jk>'.
pub fn gcc_predicate(mean_k: f64, mean_jk: f64, copy_prob: f64) -> Result<bool, TheoryError> {
    check_prob(copy_prob)?;
    let threshold = gcc_threshold(mean_k, mean_jk)?;
    Ok(copy_prob >= threshold.raw)
}

/// Copied-network degree moments from source moments:
/// <k> = p_e <k>', <k2> = p_e^2 <k2>' + p_e (1 - p_e) <k>'.
pub fn predict_moments(
    mean_k_src: f64,
    mean_k2_src: f64,
    copy_prob: f64,
) -> Result<(f64, f64), TheoryError> {
    check_prob(copy_prob)?;
    for m in [mean_k_src, mean_k2_src] {
        if m < 0.0 {
            return Err(TheoryError::BadMoments(m));
        }
    }
    Ok((
        copy_prob * mean_k_src,
        copy_prob * copy_prob * mean_k2_src + copy_prob * (1.0 - copy_prob) * mean_k_src,
    ))
}

/// Expected reciprocity of the copied network equals the link sampling rate.
pub fn predict_reciprocity(link_rate: f64) -> Result<f64, TheoryError> {
    check_prob(link_rate)?;
    Ok(link_rate)
}

/// Clustering coefficient of an uncorrelated undirected network:
/// C = (1/n) (<k2> - <k>)^2 / <k>^3. The raw value can exceed 1 for heavy
/// tails at small n, so a clamped copy is carried alongside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusteringPrediction {
    pub raw: f64,
    pub clamped: f64,
}

pub fn predict_clustering_uncorrelated(
    n: u64,
    mean_k: f64,
    mean_k2: f64,
) -> Result<ClusteringPrediction, TheoryError> {
    if n == 0 {
        return Err(TheoryError::BadMoments(0.0));
    }
    if !(mean_k > 0.0) {
        return Err(TheoryError::BadMoments(mean_k));
    }
    let excess = mean_k2 - mean_k;
    let raw = excess * excess / (mean_k * mean_k * mean_k) / n as f64;
    Ok(ClusteringPrediction {
        raw,
        clamped: raw.clamp(0.0, 1.0),
    })
}

/// Copied-network clustering: the source coefficient scaled by the link
/// sampling rate.
pub fn predict_copied_clustering(link_rate: f64, clustering_src: f64) -> Result<f64, TheoryError> {
    check_prob(link_rate)?;
    if !(0.0..=1.0).contains(&clustering_src) {
        return Err(TheoryError::BadProbability(clustering_src));
    }
    Ok(link_rate * clustering_src)
}

/// One prediction record as emitted by the CLI `theory` subcommand.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TheoryPrediction {
    DegreePmf {
        inputs: InputsDigest,
        probs: Vec<(u32, f64)>,
        truncated_mass: f64,
    },
    GccThreshold {
        inputs: InputsDigest,
        raw: f64,
        clamped: f64,
        achievable: bool,
        gcc_predicted: Option<bool>,
    },
    Moments {
        inputs: InputsDigest,
        mean_k: f64,
        mean_k2: f64,
    },
    Reciprocity {
        inputs: InputsDigest,
        value: f64,
    },
    Clustering {
        inputs: InputsDigest,
        uncorrelated_raw: Option<f64>,
        uncorrelated_clamped: Option<f64>,
        copied_from_source: Option<f64>,
    },
}

/// Echo of the inputs a prediction was computed from.
#[derive(Debug, Clone, Default, Serialize)]
pub struct InputsDigest {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_k2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_jk: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_e: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clustering_src: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pmf_support: Option<usize>,
}
