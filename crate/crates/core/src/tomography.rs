//! Single-qubit Pauli tomography on postselected counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{fidelity_pure, hermitian_eigen, r, Axis, ComplexMatrix, DensityMatrix, StateVector};

/// Outcome counts for one measurement basis. `plus` and `minus` count
/// postselected shots only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCounts {
    pub issued: u64,
    pub kept: u64,
    pub plus: u64,
    pub minus: u64,
}

impl BasisCounts {
    fn validate(&self) -> Result<()> {
        if self.plus + self.minus != self.kept || self.kept > self.issued {
            return Err(Error::InvalidArgument(format!(
                "inconsistent counts: issued {}, kept {}, +{} / -{}",
                self.issued, self.kept, self.plus, self.minus
            )));
        }
        Ok(())
    }

    /// `(N⁺ − N⁻) / kept`.
    pub fn expectation(&self) -> Option<f64> {
        (self.kept > 0).then(|| (self.plus as f64 - self.minus as f64) / self.kept as f64)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetMetadata {
    pub seed: u64,
    pub scrambler: String,
    pub state_label: String,
}

/// Counts for the X, Y and Z bases, in that order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TomographyDataset {
    counts: [BasisCounts; 3],
    pub metadata: DatasetMetadata,
}

impl TomographyDataset {
    pub fn new(counts: [BasisCounts; 3], metadata: DatasetMetadata) -> Result<Self> {
        for c in &counts {
            c.validate()?;
        }
        Ok(Self { counts, metadata })
    }

    pub fn counts(&self, basis: Axis) -> &BasisCounts {
        &self.counts[basis.index()]
    }

    pub fn all_counts(&self) -> &[BasisCounts; 3] {
        &self.counts
    }

    pub fn total_issued(&self) -> u64 {
        self.counts.iter().map(|c| c.issued).sum()
    }

    pub fn total_kept(&self) -> u64 {
        self.counts.iter().map(|c| c.kept).sum()
    }

    fn bloch(&self) -> Result<[f64; 3]> {
        let mut v = [0.0; 3];
        for b in Axis::ALL {
            v[b.index()] = self.counts(b).expectation().ok_or(Error::InsufficientStatistics(b))?;
        }
        Ok(v)
    }
}

/// Linear inversion `½(I + r·σ)`. The result can have a negative eigenvalue.
pub fn reconstruct_linear(d: &TomographyDataset) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_bloch(d.bloch()?))
}

/// Closest physical state by eigenvalue clipping: negative eigenvalues are
/// zeroed from the bottom up and the deficit is spread evenly over the rest.
pub fn make_physical(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let dev = rho.matrix().hermiticity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotHermitian(dev));
    }
    let (mut vals, vecs) = hermitian_eigen(rho.matrix());
    if vals.first().is_none_or(|&l| l >= 0.0) {
        return Ok(rho.clone());
    }
    let n = vals.len();
    let mut deficit = 0.0;
    let mut first_kept = 0;
    while first_kept < n && vals[first_kept] + deficit / ((n - first_kept) as f64) < 0.0 {
        deficit += vals[first_kept];
        vals[first_kept] = 0.0;
        first_kept += 1;
    }
    let share = deficit / (n - first_kept) as f64;
    for v in &mut vals[first_kept..] {
        *v += share;
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (k, &l) in vals.iter().enumerate() {
        if l == 0.0 {
            continue;
        }
        let col = vecs.column(k);
        m = m.add(&ComplexMatrix::outer(&col, &col).scale(r(l)));
    }
    // restore exact Hermiticity lost to rounding
    let sym = m.add(&m.adjoint()).scale(r(0.5));
    DensityMatrix::new(sym)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub rho_raw: DensityMatrix,
    pub rho: DensityMatrix,
    pub fidelity: f64,
    pub success_probability: f64,
    pub fidelity_se: f64,
    pub probability_se: f64,
}

/// Fidelity of the physical reconstruction against `target` and the pooled
/// postselection rate, with binomial standard errors.
pub fn estimate(d: &TomographyDataset, target: &StateVector) -> Result<Estimate> {
    let bloch = d.bloch()?;
    let rho_raw = DensityMatrix::from_bloch(bloch);
    let rho = make_physical(&rho_raw)?;
    let fidelity = fidelity_pure(target, &rho)?;
    let n = DensityMatrix::from_pure(target).bloch_vector()?;
    let var_f: f64 = Axis::ALL
        .iter()
        .map(|&b| {
            let i = b.index();
            n[i] * n[i] * (1.0 - bloch[i] * bloch[i]) / d.counts(b).kept as f64
        })
        .sum();
    let issued = d.total_issued() as f64;
    let p = d.total_kept() as f64 / issued;
    Ok(Estimate {
        rho_raw,
        rho,
        fidelity,
        success_probability: p,
        fidelity_se: 0.5 * var_f.max(0.0).sqrt(),
        probability_se: (p * (1.0 - p) / issued).sqrt(),
    })
}
