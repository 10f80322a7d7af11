use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest instance the exhaustive oracle accepts.
pub const BRUTE_FORCE_MAX_ITEMS: usize = 25;

/// A 0/1 knapsack instance: maximize the value of a subset of items whose
/// total weight fits the capacity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    pub id: String,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub capacity: f64,
}

impl KnapsackInstance {
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.weights.len() {
            return Err(Error::InvalidInstance(format!(
                "{}: {} values but {} weights",
                self.id,
                self.values.len(),
                self.weights.len()
            )));
        }
        if !(self.capacity > 0.0) || !self.capacity.is_finite() {
            return Err(Error::InvalidInstance(format!(
                "{}: capacity {} must be positive",
                self.id, self.capacity
            )));
        }
        let bad = |x: &f64| !(*x > 0.0) || !x.is_finite();
        if self.values.iter().any(bad) || self.weights.iter().any(bad) {
            return Err(Error::InvalidInstance(format!(
                "{}: values and weights must be positive",
                self.id
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value_of(&self, items: &[usize]) -> f64 {
        items.iter().map(|&i| self.values[i]).sum()
    }

    pub fn weight_of(&self, items: &[usize]) -> f64 {
        items.iter().map(|&i| self.weights[i]).sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceFamily {
    /// Values and weights drawn independently.
    Uncorrelated,
    /// `value = weight + R/10`; hard for ratio-based bounds.
    StronglyCorrelated,
}

impl fmt::Display for InstanceFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstanceFamily::Uncorrelated => "uncorrelated",
            InstanceFamily::StronglyCorrelated => "strongly_correlated",
        })
    }
}

/// Coefficient range `R`: weights are drawn from `1..=R`.
const COEF_RANGE: u32 = 1000;

/// Generates a reproducible instance with integer-valued coefficients and
/// capacity equal to half the total weight.
pub fn generate_instance(family: InstanceFamily, n_items: usize, seed: u64) -> Result<KnapsackInstance> {
    if n_items == 0 {
        return Err(Error::InvalidArgument("n_items must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weights = Vec::with_capacity(n_items);
    let mut values = Vec::with_capacity(n_items);
    for _ in 0..n_items {
        let w = rng.gen_range(1..=COEF_RANGE);
        let v = match family {
            InstanceFamily::Uncorrelated => rng.gen_range(1..=COEF_RANGE),
            InstanceFamily::StronglyCorrelated => w + COEF_RANGE / 10,
        };
        weights.push(f64::from(w));
        values.push(f64::from(v));
    }
    let capacity = (weights.iter().sum::<f64>() / 2.0).floor().max(1.0);
    Ok(KnapsackInstance {
        id: format!("{family}-n{n_items}-s{seed}"),
        values,
        weights,
        capacity,
    })
}

/// Exact optimum by enumerating every subset in Gray-code order.
///
/// Returns the optimal value and the (sorted) optimal item set.
pub fn brute_force_knapsack(inst: &KnapsackInstance) -> Result<(f64, Vec<usize>)> {
    inst.validate()?;
    let n = inst.len();
    if n > BRUTE_FORCE_MAX_ITEMS {
        return Err(Error::TooLarge(n, BRUTE_FORCE_MAX_ITEMS));
    }
    let (mut value, mut weight) = (0.0f64, 0.0f64);
    let mut best = (0.0f64, 0u64);
    let mut gray = 0u64;
    for k in 1u64..(1u64 << n) {
        // The k-th Gray code differs from the previous one in bit tz(k).
        let bit = k.trailing_zeros() as usize;
        gray ^= 1 << bit;
        if gray & (1 << bit) != 0 {
            value += inst.values[bit];
            weight += inst.weights[bit];
        } else {
            value -= inst.values[bit];
            weight -= inst.weights[bit];
        }
        if weight <= inst.capacity && value > best.0 {
            best = (value, gray);
        }
    }
    let items: Vec<usize> = (0..n).filter(|i| best.1 & (1 << i) != 0).collect();
    // Recompute from scratch so the reported value carries no drift.
    Ok((inst.value_of(&items), items))
}
