//! Node-pair local similarity and the similarity-rate metric.
//!
//! A node pair's relationship across a multiplex network is summarized by
//! its per-layer local similarities (the pair's similarity vector). The
//! vector is sorted ascending, a least-squares line `y = kx + b` is fitted
//! through it at abscissae `x = 1..n`, and the pair's similarity rate is
//! derived from the slope and intercept:
//!
//! - `k = 0, b = 0` -> `0` (no relationship anywhere)
//! - `k > 0, b != 0` -> `exp(b/k)`
//! - `k > 0, b = 0` -> `exp(1/k)`
//! - `k = 0, b > 0` -> `exp(E_max)` (constant nonzero similarity; the most
//!   persistent relationship possible, pinned to the clamp ceiling)
//!
//! Exponents are clipped to `[-E_max, E_max]` so rates stay finite. The
//! ascending sort guarantees `k >= 0` up to floating-point ties; slopes and
//! intercepts within `1e-12` of zero are snapped to exactly zero before the
//! case dispatch.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::network::{Layer, MultiplexNetwork, NodeId};

/// Default exponent clamp for [`similarity_rate`].
pub const DEFAULT_E_MAX: f64 = 50.0;

/// Slopes and intercepts within this distance of zero are treated as zero.
pub const TIE_EPS: f64 = 1e-12;

/// Pluggable per-layer local similarity. All strategies are bounded in
/// `[0, 1]` so fitted lines stay comparable across pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SimilarityMetric {
    /// `|N(u) ∩ N(v)| / |N(u) ∪ N(v)|`, 0 when the union is empty.
    #[default]
    Jaccard,
    /// Overlap coefficient `|N(u) ∩ N(v)| / min(|N(u)|, |N(v)|)`.
    Overlap,
    /// Cosine of the neighborhood indicator vectors.
    Cosine,
}

impl SimilarityMetric {
    /// Score a pair inside one layer. Callers guarantee `u != v`.
    pub fn score(self, layer: &Layer, u: NodeId, v: NodeId) -> f64 {
        let nu = layer.neighbors(u);
        let nv = layer.neighbors(v);
        let inter = nu.intersection(nv).count();
        match self {
            SimilarityMetric::Jaccard => {
                let union = nu.len() + nv.len() - inter;
                if union == 0 {
                    0.0
                } else {
                    inter as f64 / union as f64
                }
            }
            SimilarityMetric::Overlap => {
                let smaller = nu.len().min(nv.len());
                if smaller == 0 {
                    0.0
                } else {
                    inter as f64 / smaller as f64
                }
            }
            SimilarityMetric::Cosine => {
                if nu.is_empty() || nv.is_empty() {
                    0.0
                } else {
                    inter as f64 / ((nu.len() * nv.len()) as f64).sqrt()
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SimilarityMetric::Jaccard => "jaccard",
            SimilarityMetric::Overlap => "overlap",
            SimilarityMetric::Cosine => "cosine",
        }
    }
}

impl fmt::Display for SimilarityMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SimilarityMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jaccard" => Ok(SimilarityMetric::Jaccard),
            "overlap" => Ok(SimilarityMetric::Overlap),
            "cosine" => Ok(SimilarityMetric::Cosine),
            other => Err(Error::InvalidSpec(format!(
                "unknown similarity strategy {other:?} (expected jaccard, overlap, or cosine)"
            ))),
        }
    }
}

/// Jaccard local similarity of a pair in one layer.
pub fn jaccard(net: &MultiplexNetwork, layer: &str, u: NodeId, v: NodeId) -> Result<f64> {
    if u == v {
        return Err(Error::SelfPair(net.nodes().label(u).to_string()));
    }
    Ok(SimilarityMetric::Jaccard.score(net.layer(layer)?, u, v))
}

/// One node pair's local similarities across all layers, in layer order.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityVector {
    pair: (NodeId, NodeId),
    values: Vec<f64>,
}

impl SimilarityVector {
    pub fn pair(&self) -> (NodeId, NodeId) {
        self.pair
    }

    /// Per-layer similarities in layer order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Ascending view, the input to [`fit_line`].
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_unstable_by(f64::total_cmp);
        v
    }
}

/// Similarity vector of a pair using the default Jaccard metric.
pub fn similarity_vector(net: &MultiplexNetwork, u: NodeId, v: NodeId) -> Result<SimilarityVector> {
    similarity_vector_with(net, SimilarityMetric::Jaccard, u, v)
}

pub fn similarity_vector_with(
    net: &MultiplexNetwork,
    metric: SimilarityMetric,
    u: NodeId,
    v: NodeId,
) -> Result<SimilarityVector> {
    if u == v {
        return Err(Error::SelfPair(net.nodes().label(u).to_string()));
    }
    let values = net
        .layers()
        .iter()
        .map(|layer| metric.score(layer, u, v))
        .collect();
    Ok(SimilarityVector {
        pair: (u.min(v), u.max(v)),
        values,
    })
}

/// Least-squares line through points `(i+1, values[i])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    /// Slope.
    pub k: f64,
    /// Intercept.
    pub b: f64,
    /// Point count.
    pub n: usize,
}

/// Closed-form least squares over abscissae `1..=n`.
pub fn fit_line(values: &[f64]) -> Result<LineFit> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooFewPoints(n));
    }
    let nf = n as f64;
    let sx = nf * (nf + 1.0) / 2.0;
    let sxx = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 6.0;
    let mut sy = 0.0;
    let mut sxy = 0.0;
    for (i, &y) in values.iter().enumerate() {
        let x = (i + 1) as f64;
        sy += y;
        sxy += x * y;
    }
    let denom = nf * sxx - sx * sx;
    let k = (nf * sxy - sx * sy) / denom;
    let b = (sy - k * sx) / nf;
    Ok(LineFit { k, b, n })
}

/// Which branch of the rate case table a fit dispatched to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateCase {
    /// `k = 0, b = 0`: rate 0.
    Zero,
    /// `k > 0, b > 0`: `exp(b/k)`.
    PosB,
    /// `k > 0, b = 0`: `exp(1/k)`.
    ZeroB,
    /// `k > 0, b < 0`: `exp(b/k)`.
    NegB,
    /// `k = 0, b > 0`: `exp(E_max)`.
    ConstPos,
}

impl RateCase {
    pub fn as_str(self) -> &'static str {
        match self {
            RateCase::Zero => "zero",
            RateCase::PosB => "pos_b",
            RateCase::ZeroB => "zero_b",
            RateCase::NegB => "neg_b",
            RateCase::ConstPos => "const_pos",
        }
    }
}

impl fmt::Display for RateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Similarity rate of a fitted line; see the module docs for the case table.
pub fn similarity_rate(fit: &LineFit, e_max: f64) -> Result<f64> {
    similarity_rate_with_case(fit, e_max).map(|(rate, _)| rate)
}

/// As [`similarity_rate`], also reporting the dispatched case.
pub fn similarity_rate_with_case(fit: &LineFit, e_max: f64) -> Result<(f64, RateCase)> {
    if !fit.k.is_finite() || !fit.b.is_finite() {
        return Err(Error::NonFiniteFit { k: fit.k, b: fit.b });
    }
    let k = if fit.k.abs() <= TIE_EPS { 0.0 } else { fit.k };
    let b = if fit.b.abs() <= TIE_EPS { 0.0 } else { fit.b };
    if k < 0.0 {
        return Err(Error::NegativeSlope(fit.k));
    }
    let clip = |e: f64| e.clamp(-e_max, e_max);
    let (rate, case) = if k == 0.0 {
        if b > 0.0 {
            (e_max.exp(), RateCase::ConstPos)
        } else {
            (0.0, RateCase::Zero)
        }
    } else if b == 0.0 {
        (clip(1.0 / k).exp(), RateCase::ZeroB)
    } else if b > 0.0 {
        (clip(b / k).exp(), RateCase::PosB)
    } else {
        (clip(b / k).exp(), RateCase::NegB)
    };
    Ok((rate, case))
}

/// Full evaluation of one similarity vector: sort, fit, dispatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOutcome {
    pub fit: LineFit,
    pub case: RateCase,
    pub rate: f64,
}

pub fn rate_outcome(values: &[f64], e_max: f64) -> Result<RateOutcome> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let fit = fit_line(&sorted)?;
    let (rate, case) = similarity_rate_with_case(&fit, e_max)?;
    Ok(RateOutcome { fit, case, rate })
}
