//! Generators for simplex-valued data and closed-form KL divergences.

mod rng;
pub mod special;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::simplex::{Composition, CompositionalDataset};

pub use rng::RngStream;
pub use special::{digamma, log_gamma};

/// Concentration vector of a Dirichlet distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletParams {
    a: Vec<f64>,
}

impl DirichletParams {
    pub fn new(a: Vec<f64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::TooFewComponents(a.len()));
        }
        if let Some(bad) = a.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
            return Err(Error::InvalidArgument(format!(
                "Dirichlet concentrations must be positive, got {bad}"
            )));
        }
        Ok(DirichletParams { a })
    }

    /// `value` repeated `dim` times.
    pub fn symmetric(value: f64, dim: usize) -> Result<Self> {
        Self::new(vec![value; dim])
    }

    pub fn concentrations(&self) -> &[f64] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn total(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.a.iter().map(|v| v * k).collect())
    }
}

/// Independent Gamma(a_i, 1) draws per row, closed to the simplex.
pub fn sample_dirichlet(params: &DirichletParams, n: usize, stream: &RngStream) -> Result<CompositionalDataset> {
    let mut rng = stream.rng();
    let gammas = params
        .a
        .iter()
        .map(|&a| Gamma::new(a, 1.0).map_err(|e| Error::InvalidArgument(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let d = params.dim();
    let mut data = Vec::with_capacity(n * d);
    let mut row = vec![0.0; d];
    for _ in 0..n {
        // a row of all-zero gammas is possible only for tiny shapes; redraw
        loop {
            for (r, g) in row.iter_mut().zip(&gammas) {
                *r = g.sample(&mut rng);
            }
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                data.extend(row.iter().map(|v| v / sum));
                break;
            }
        }
    }
    Ok(CompositionalDataset::from_closed_flat(data, d))
}

/// Inverse additive log-ratio: the first part is the reference,
/// `x = (1, e^{u_1}, …, e^{u_{D−1}}) / (1 + Σ e^{u_j})`.
pub fn alr_inverse(u: &[f64]) -> Result<Composition> {
    if u.is_empty() {
        return Err(Error::TooFewComponents(1));
    }
    if let Some(index) = u.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(Composition::from_closed(alr_inverse_unchecked(u)))
}

fn alr_inverse_unchecked(u: &[f64]) -> Vec<f64> {
    let shift = u.iter().fold(0.0f64, |m, &v| m.max(v));
    let mut out = Vec::with_capacity(u.len() + 1);
    out.push((-shift).exp());
    out.extend(u.iter().map(|v| (v - shift).exp()));
    let sum: f64 = out.iter().sum();
    for v in &mut out {
        *v /= sum;
    }
    out
}

/// Mean and covariance of a multivariate normal in ℝ^{D−1}.
#[derive(Debug, Clone)]
pub struct SimplicialNormalParams {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl SimplicialNormalParams {
    pub fn new(mu: Vec<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let d = mu.len();
        if d == 0 {
            return Err(Error::InvalidArgument("mean vector is empty".into()));
        }
        if sigma.nrows() != d || sigma.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: sigma.nrows(),
            });
        }
        let chol = cholesky(&sigma)?;
        Ok(SimplicialNormalParams {
            mu: DVector::from_vec(mu),
            sigma,
            chol,
        })
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Dimension of the normal, `D − 1`.
    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

fn cholesky(sigma: &DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    let d = sigma.nrows();
    for i in 0..d {
        for j in i + 1..d {
            if (sigma[(i, j)] - sigma[(j, i)]).abs() > 1e-10 {
                return Err(Error::NotPositiveDefinite);
            }
        }
    }
    Cholesky::new(sigma.clone()).ok_or(Error::NotPositiveDefinite)
}

/// `n` draws from MN(μ, Σ) via the Cholesky factor, before mapping to the simplex.
pub fn sample_mvn(params: &SimplicialNormalParams, n: usize, stream: &RngStream) -> PointSet {
    let mut rng = stream.rng();
    let d = params.dim();
    let l = params.chol.l();
    let mut data = Vec::with_capacity(n * d);
    let mut z = DVector::<f64>::zeros(d);
    for _ in 0..n {
        for v in z.iter_mut() {
            *v = rng.sample(StandardNormal);
        }
        let x = &params.mu + &l * &z;
        data.extend(x.iter());
    }
    PointSet::new(data, d).expect("consistent shape")
}

/// Multivariate normal draws mapped onto the simplex by [`alr_inverse`].
pub fn sample_simplicial_normal(
    params: &SimplicialNormalParams,
    n: usize,
    stream: &RngStream,
) -> Result<CompositionalDataset> {
    let draws = sample_mvn(params, n, stream);
    let mut data = Vec::with_capacity(n * (params.dim() + 1));
    for u in draws.rows() {
        data.extend(alr_inverse_unchecked(u));
    }
    Ok(CompositionalDataset::from_closed_flat(data, params.dim() + 1))
}

/// Σ = B·diag(λ)·Bᵀ kept in factored form so the eigenvalues can be rescaled.
#[derive(Debug, Clone)]
pub struct CovarianceFactors {
    pub basis: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
}

impl CovarianceFactors {
    pub fn matrix(&self) -> DMatrix<f64> {
        self.matrix_scaled(1.0)
    }

    /// B·diag(k·λ)·Bᵀ.
    pub fn matrix_scaled(&self, k: f64) -> DMatrix<f64> {
        let lambda = DVector::from_iterator(self.eigenvalues.len(), self.eigenvalues.iter().map(|l| l * k));
        let m = &self.basis * DMatrix::from_diagonal(&lambda) * self.basis.transpose();
        (&m + m.transpose()) * 0.5
    }
}

/// Random covariance: orthonormal basis from the QR decomposition of a
/// standard Gaussian matrix, eigenvalues exponential with mean `eigen_mean`.
pub fn generate_covariance(d: usize, eigen_mean: f64, stream: &RngStream) -> Result<CovarianceFactors> {
    if d < 1 {
        return Err(Error::TooSmall {
            what: "covariance dimension",
            min: 1,
            got: d,
        });
    }
    if !(eigen_mean > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eigenvalue mean must be positive, got {eigen_mean}"
        )));
    }
    let mut rng = stream.rng();
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    let basis = g.qr().q();
    let eigenvalues = (0..d)
        .map(|_| {
            let e: f64 = rng.sample(Exp1);
            // Exp1 can return 0 with vanishing probability; Σ must stay PD
            eigen_mean * e.max(f64::MIN_POSITIVE)
        })
        .collect();
    Ok(CovarianceFactors { basis, eigenvalues })
}

/// KL(Dir(a) ‖ Dir(b)).
pub fn kl_dirichlet(a: &DirichletParams, b: &DirichletParams) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let (a0, b0) = (a.total(), b.total());
    let psi_a0 = digamma(a0)?;
    let mut kl = log_gamma(a0)? - log_gamma(b0)?;
    for (&ai, &bi) in a.a.iter().zip(&b.a) {
        kl += (ai - bi) * (digamma(ai)? - psi_a0) + log_gamma(bi)? - log_gamma(ai)?;
    }
    Ok(kl)
}

/// KL(MN(μ₁, Σ₁) ‖ MN(μ₂, Σ₂)), via Cholesky solves and log-determinants.
pub fn kl_mvn(mu1: &[f64], sigma1: &DMatrix<f64>, mu2: &[f64], sigma2: &DMatrix<f64>) -> Result<f64> {
    let d = mu1.len();
    for (len, what) in [
        (mu2.len(), "mu2"),
        (sigma1.nrows(), "sigma1"),
        (sigma2.nrows(), "sigma2"),
    ] {
        if len != d {
            return Err(Error::InvalidArgument(format!(
                "{what} has dimension {len}, expected {d}"
            )));
        }
    }
    let c1 = cholesky(sigma1)?;
    let c2 = cholesky(sigma2)?;
    let trace = c2.solve(sigma1).trace();
    let diff = DVector::from_iterator(d, mu2.iter().zip(mu1).map(|(a, b)| a - b));
    let mahalanobis = diff.dot(&c2.solve(&diff));
    let log_det = |c: &Cholesky<f64, Dyn>| 2.0 * c.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    Ok(0.5 * (trace + mahalanobis - (log_det(&c1) - log_det(&c2)) - d as f64))
}
