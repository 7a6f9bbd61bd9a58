//! Turn a basis matrix into a ranked list of candidate sensor locations:
//! plain QR pivoting and the cost-penalized CCQR variant.
//!
//! The first `min(n, r)` entries of a ranking are QR pivots; the remainder is
//! a seeded random permutation of the unchosen locations, fixed at ranking
//! time so `selected(p)` is stable for any oversampled `p`.

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::pivoted_qr_with_penalty;
use crate::utils::{shuffled_complement, streams, SeededRng};

/// Ranked candidate locations: a permutation of `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorRanking {
    order: Vec<usize>,
    n_meaningful: usize,
    seed: u64,
}

impl SensorRanking {
    /// The full permutation, most important location first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Number of leading entries that came from QR pivoting; the rest is the
    /// random tail.
    pub fn n_meaningful(&self) -> usize {
        self.n_meaningful
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// First `p` ranked locations.
    pub fn selected(&self, p: usize) -> &[usize] {
        &self.order[..p]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Per-candidate placement costs and the trade-off weight applied during
/// CCQR selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostVector {
    costs: Vec<f64>,
    weight: f64,
}

impl CostVector {
    pub fn new(costs: Vec<f64>, weight: f64) -> Result<Self> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::NegativeCost);
        }
        if costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::NegativeCost);
        }
        Ok(CostVector { costs, weight })
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }
}

/// Which selection routine a reconstruction model uses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub enum OptimizerSpec {
    #[default]
    Qr,
    Ccqr(CostVector),
}

/// Rank all `n` candidate locations for the mode matrix `psi_r` (`n x r`).
pub fn qr_rank(psi_r: ArrayView2<'_, f64>, seed: u64) -> Result<SensorRanking> {
    rank_with_penalty(psi_r, None, seed)
}

/// CCQR ranking: the step-k pivot maximizes `residual_norm - weight * cost`.
/// With `weight = 0` the output is bitwise identical to `qr_rank`.
pub fn ccqr_rank(
    psi_r: ArrayView2<'_, f64>,
    cost: &CostVector,
    seed: u64,
) -> Result<SensorRanking> {
    let n = psi_r.nrows();
    if cost.len() != n {
        return Err(Error::dim(format!(
            "cost vector has {} entries for {} candidate locations",
            cost.len(),
            n
        )));
    }
    let penalty: Vec<f64> = cost.costs.iter().map(|c| cost.weight * c).collect();
    rank_with_penalty(psi_r, Some(&penalty), seed)
}

fn rank_with_penalty(
    psi_r: ArrayView2<'_, f64>,
    penalty: Option<&[f64]>,
    seed: u64,
) -> Result<SensorRanking> {
    let (n, r) = psi_r.dim();
    if n == 0 || r == 0 {
        return Err(Error::EmptyMatrix);
    }
    let n_meaningful = n.min(r);
    // Pivot the columns of psi^T, i.e. the candidate locations.
    let qr = pivoted_qr_with_penalty(psi_r.t(), n_meaningful, penalty)?;
    let mut order = qr.pivots;
    let mut rng = SeededRng::with_stream(seed, streams::RANKING_TAIL);
    let tail = shuffled_complement(n, &order, &mut rng)?;
    order.extend(tail);
    Ok(SensorRanking {
        order,
        n_meaningful,
        seed,
    })
}
