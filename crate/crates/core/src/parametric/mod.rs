//! Fractional 0/1 programs behind the best-response checks.
//!
//! [`LinearFractionalProgram`] covers the separable case (trees): maximise
//! `(A0 + aᵀx) / (B0 + bᵀx)` for each Hamming weight `l` by walking the `l`-th
//! level of the arrangement of lines `c_i(δ) = a_i - b_i δ`. The grouped,
//! inclusion-exclusion case for general graphs lives in [`groups`].

mod arrangement;
pub mod groups;

pub use arrangement::{fractional_max, fractional_max_shifted, layer_walk_all, layer_walk_max};
pub use groups::{
    group_value_table, improvement_test, knapsack_argmax, subset_coefficients,
    ComponentCoefficients, GroupValueTable, ImprovementTest, KnapsackSolution, SubsetCoefficients,
};

use crate::error::{Error, Result};

/// `(A0 + aᵀx) / (B0 + bᵀx)` over 0/1 vectors `x`.
///
/// Numerators must be non-negative and every nonzero `x` must give a positive
/// denominator. The latter is not checked here (it holds by construction for
/// every program built from potentials).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFractionalProgram {
    pub a0: f64,
    pub a: Vec<f64>,
    pub b0: f64,
    pub b: Vec<f64>,
}

impl LinearFractionalProgram {
    pub fn new(a0: f64, a: Vec<f64>, b0: f64, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidParameter(format!(
                "coefficient lengths differ ({} vs {})",
                a.len(),
                b.len()
            )));
        }
        let finite = |x: &f64| x.is_finite();
        if !(a0.is_finite() && b0.is_finite() && a.iter().all(finite) && b.iter().all(finite)) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        if a0 < 0.0 || a.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidParameter("negative numerator coefficient".into()));
        }
        Ok(Self { a0, a, b0, b })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Numerator and denominator at the support `x` (indices set to one).
    pub fn parts(&self, support: &[usize]) -> (f64, f64) {
        support.iter().fold((self.a0, self.b0), |(num, den), &i| {
            (num + self.a[i], den + self.b[i])
        })
    }

    /// The ratio `f(x)`.
    pub fn ratio(&self, support: &[usize]) -> f64 {
        let (num, den) = self.parts(support);
        num / den
    }
}

/// Optimum of one fixed-weight subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerOptimum {
    /// Sorted indices with `x_i = 1`.
    pub support: Vec<usize>,
    /// `δ*`, the optimal ratio at this Hamming weight.
    pub ratio: f64,
}

/// Optimum over all nonzero `x` of `(weight) · f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalOptimum {
    pub support: Vec<usize>,
    pub value: f64,
}

impl FractionalOptimum {
    pub fn indicator(&self, dim: usize) -> Vec<bool> {
        let mut x = vec![false; dim];
        for &i in &self.support {
            x[i] = true;
        }
        x
    }
}
