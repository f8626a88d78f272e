//! Evaluation and reconstruction of trigonometric polynomials on rank-1
//! lattices with one length-`M` DFT each.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::FftPlan;
use crate::index_sets::{hnorm, FrequencySet};
use crate::lattice::Rank1Lattice;

/// Coefficients aligned with the order of their support set.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    support: Arc<FrequencySet>,
    values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(support: Arc<FrequencySet>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != support.len() {
            return Err(Error::DimensionMismatch { expected: support.len(), found: values.len() });
        }
        if let Some(node) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFiniteSample { node });
        }
        Ok(CoefficientVector { support, values })
    }

    pub fn zeros(support: Arc<FrequencySet>) -> Self {
        let values = alloc::vec![Complex64::new(0.0, 0.0); support.len()];
        CoefficientVector { support, values }
    }

    pub fn support(&self) -> &FrequencySet {
        &self.support
    }

    pub fn support_arc(&self) -> &Arc<FrequencySet> {
        &self.support
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, k: &[i64]) -> Option<Complex64> {
        self.support.position(k).map(|i| self.values[i])
    }

    /// Truncated `H^β` norm of the coefficients.
    pub fn hnorm(&self, beta: f64) -> f64 {
        hnorm(&self.support, &self.values, beta)
    }
}

/// Function values at the nodes of a lattice, in node order.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSamples {
    lattice: Rank1Lattice,
    values: Vec<Complex64>,
}

impl LatticeSamples {
    pub fn new(lattice: Rank1Lattice, values: Vec<Complex64>) -> Result<Self> {
        if values.len() as u64 != lattice.size() {
            return Err(Error::DimensionMismatch { expected: lattice.size() as usize, found: values.len() });
        }
        Ok(LatticeSamples { lattice, values })
    }

    pub fn lattice(&self) -> &Rank1Lattice {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }
}

/// Whether [`reconstruct`] should check the reconstruction property first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    /// The caller vouches for the lattice.
    Trusted,
    /// Check injectivity of the bin map (`O(|I| log |I|)`).
    Verify,
}

/// A lattice together with its DFT plan, for repeated transforms.
#[derive(Debug, Clone)]
pub struct LatticeTransform {
    lattice: Rank1Lattice,
    plan: FftPlan,
}

impl LatticeTransform {
    pub fn new(lattice: Rank1Lattice) -> Self {
        let plan = FftPlan::new(lattice.size() as usize);
        LatticeTransform { lattice, plan }
    }

    pub fn lattice(&self) -> &Rank1Lattice {
        &self.lattice
    }

    /// `h(x_j) = Σ_k c_k e^{2πi k·x_j}` at every node. Coefficients sharing a
    /// bin are summed.
    pub fn evaluate(&self, coeffs: &CoefficientVector) -> Result<LatticeSamples> {
        let bins = self.lattice.bins(coeffs.support())?;
        let mut buf = alloc::vec![Complex64::new(0.0, 0.0); self.lattice.size() as usize];
        for (&b, &c) in bins.iter().zip(coeffs.values()) {
            buf[b as usize] += c;
        }
        self.plan.inverse_unnormalized(&mut buf);
        Ok(LatticeSamples { lattice: self.lattice.clone(), values: buf })
    }

    /// The full bin spectrum `(1/M) Σ_j f_j e^{-2πi j b/M}`, `b = 0..M-1`.
    pub fn spectrum(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        if samples.len() as u64 != self.lattice.size() {
            return Err(Error::DimensionMismatch { expected: self.lattice.size() as usize, found: samples.len() });
        }
        let mut buf = samples.to_vec();
        self.plan.forward(&mut buf);
        let s = 1.0 / self.lattice.size() as f64;
        for v in buf.iter_mut() {
            *v *= s;
        }
        Ok(buf)
    }

    /// Lattice approximations `(1/M) Σ_j f_j e^{-2πi k·x_j}` for `k` in `set`.
    pub fn reconstruct(
        &self,
        samples: &[Complex64],
        set: &Arc<FrequencySet>,
        verification: Verification,
    ) -> Result<CoefficientVector> {
        let bins = self.lattice.bins(set)?;
        if verification == Verification::Verify && !self.lattice.is_reconstructing(set) {
            return Err(Error::NotReconstructing);
        }
        let spec = self.spectrum(samples)?;
        let values = bins.iter().map(|&b| spec[b as usize]).collect();
        CoefficientVector::new(set.clone(), values)
    }
}

/// One-shot [`LatticeTransform::evaluate`].
pub fn evaluate(coeffs: &CoefficientVector, lattice: &Rank1Lattice) -> Result<LatticeSamples> {
    LatticeTransform::new(lattice.clone()).evaluate(coeffs)
}

/// One-shot [`LatticeTransform::reconstruct`].
pub fn reconstruct(
    samples: &LatticeSamples,
    set: &Arc<FrequencySet>,
    verification: Verification,
) -> Result<CoefficientVector> {
    LatticeTransform::new(samples.lattice.clone()).reconstruct(&samples.values, set, verification)
}
