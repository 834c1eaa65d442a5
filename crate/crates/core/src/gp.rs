//! RBF Gaussian-process numerics on a shared evaluation grid.
//!
//! Every covariance built from a [`GpSpec`] has the form `eta^2 * R` with the
//! correlation matrix `R = exp(-(x - x')^2 / phi^2) + jitter * I`, so the
//! Cholesky factor of `R` is shared by all scale parameters.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Default diagonal inflation of correlation matrices (relative to `eta^2`).
pub const DEFAULT_JITTER: f64 = 1e-8;

/// Number of x10 jitter escalations tried before a factorization is fatal.
pub const JITTER_RETRIES: usize = 3;

/// Squared-exponential kernel `eta^2 exp(-|x - x'|^2 / phi^2)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GpSpec {
    pub grid: Vec<f64>,
    pub eta: f64,
    pub phi: f64,
    /// Diagonal inflation relative to `eta^2`.
    pub jitter: f64,
}

impl GpSpec {
    pub fn new(grid: Vec<f64>, eta: f64, phi: f64) -> Result<Self> {
        let spec = Self {
            grid,
            eta,
            phi,
            jitter: DEFAULT_JITTER,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::invalid("empty evaluation grid"));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("grid points must be finite"));
        }
        let mut sorted = self.grid.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("grid points must be distinct"));
        }
        for (name, v) in [("eta", self.eta), ("phi", self.phi), ("jitter", self.jitter)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    /// `exp(-|x - x'|^2 / phi^2)` without jitter.
    pub fn kernel_correlation(&self) -> DMatrix<f64> {
        let d = self.dim();
        let phi2 = self.phi * self.phi;
        DMatrix::from_fn(d, d, |a, b| {
            let diff = self.grid[a] - self.grid[b];
            (-diff * diff / phi2).exp()
        })
    }

    /// Gram matrix including the default diagonal inflation.
    pub fn gram(&self) -> DMatrix<f64> {
        let eta2 = self.eta * self.eta;
        let mut c = self.kernel_correlation() * eta2;
        for a in 0..self.dim() {
            c[(a, a)] += self.jitter * eta2;
        }
        c
    }

    /// Cholesky factor of the jittered correlation matrix `R`.
    pub fn correlation_factor(&self) -> Result<SpdFactor> {
        SpdFactor::robust(&self.kernel_correlation(), self.jitter).map_err(|e| {
            Error::Numeric(format!(
                "RBF correlation (phi = {}, {} points): {e}",
                self.phi,
                self.dim()
            ))
        })
    }

    /// Cholesky factor of the Gram matrix `eta^2 R`.
    pub fn factor(&self) -> Result<SpdFactor> {
        Ok(self.correlation_factor()?.scaled(self.eta * self.eta))
    }
}

/// Cholesky factorization `A = L L^T` with a cached log-determinant.
#[derive(Debug, Clone)]
pub struct SpdFactor {
    l: DMatrix<f64>,
    log_det: f64,
    /// Absolute diagonal inflation that was needed for the factorization.
    jitter: f64,
}

impl SpdFactor {
    /// Factorizes without modification.
    pub fn new(a: &DMatrix<f64>) -> Result<Self> {
        Self::try_with(a, 0.0).ok_or_else(|| Error::Numeric("matrix is not positive definite".into()))
    }

    fn try_with(a: &DMatrix<f64>, jitter: f64) -> Option<Self> {
        if a.nrows() != a.ncols() || a.nrows() == 0 {
            return None;
        }
        let mut m = a.clone();
        if jitter > 0.0 {
            for i in 0..m.nrows() {
                m[(i, i)] += jitter;
            }
        }
        let chol: Cholesky<f64, Dyn> = Cholesky::new(m)?;
        let l = chol.l();
        let log_det = 2.0 * l.diagonal().iter().map(|v| v.ln()).sum::<f64>();
        if !log_det.is_finite() {
            return None;
        }
        Some(Self { l, log_det, jitter })
    }

    /// Factorizes `a + jitter I`, multiplying the jitter by 10 up to
    /// [`JITTER_RETRIES`] times on failure. A zero starting jitter retries
    /// from `1e-10` times the mean diagonal.
    pub fn robust(a: &DMatrix<f64>, jitter: f64) -> Result<Self> {
        let d = a.nrows().max(1) as f64;
        let scale = (a.diagonal().iter().map(|v| v.abs()).sum::<f64>() / d).max(f64::MIN_POSITIVE);
        let mut j = jitter;
        for _ in 0..=JITTER_RETRIES {
            if let Some(f) = Self::try_with(a, j) {
                return Ok(f);
            }
            j = if j > 0.0 { j * 10.0 } else { 1e-10 * scale };
        }
        Err(Error::Numeric(format!(
            "Cholesky failed after {JITTER_RETRIES} jitter escalations (last jitter {:e})",
            j / 10.0
        )))
    }

    /// Factor of `s * A`.
    pub fn scaled(&self, s: f64) -> Self {
        let d = self.dim() as f64;
        Self {
            l: &self.l * s.sqrt(),
            log_det: self.log_det + d * s.ln(),
            jitter: self.jitter * s,
        }
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    pub fn l(&self) -> &DMatrix<f64> {
        &self.l
    }

    pub fn log_det(&self) -> f64 {
        self.log_det
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// The factored matrix, including any jitter.
    pub fn matrix(&self) -> DMatrix<f64> {
        &self.l * self.l.transpose()
    }

    /// `L^{-1} v`.
    pub fn whiten(&self, v: &DVector<f64>) -> DVector<f64> {
        self.l
            .solve_lower_triangular(v)
            .expect("Cholesky factor has a positive diagonal")
    }

    /// `A^{-1} v`.
    pub fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        let w = self.whiten(v);
        self.l
            .tr_solve_lower_triangular(&w)
            .expect("Cholesky factor has a positive diagonal")
    }

    /// `A^{-1} B`.
    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let w = self
            .l
            .solve_lower_triangular(b)
            .expect("Cholesky factor has a positive diagonal");
        self.l
            .tr_solve_lower_triangular(&w)
            .expect("Cholesky factor has a positive diagonal")
    }

    /// `v^T A^{-1} v`.
    pub fn quad_form(&self, v: &DVector<f64>) -> f64 {
        self.whiten(v).norm_squared()
    }

    /// Gaussian log-density of `y` with this covariance.
    pub fn log_pdf(&self, y: &DVector<f64>, mean: &DVector<f64>) -> f64 {
        let d = self.dim() as f64;
        -0.5 * (d * LN_2PI + self.log_det + self.quad_form(&(y - mean)))
    }

    /// `mean + L xi` with `xi` standard normal.
    pub fn sample<R: Rng + ?Sized>(&self, mean: &DVector<f64>, rng: &mut R) -> DVector<f64> {
        let xi = DVector::from_fn(self.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
        mean + &self.l * xi
    }
}

fn check_dims(y: usize, mean: usize, cov: &DMatrix<f64>) -> Result<()> {
    if y != mean || cov.nrows() != y || cov.ncols() != y {
        return Err(Error::invalid(format!(
            "dimension mismatch: y {y}, mean {mean}, covariance {}x{}",
            cov.nrows(),
            cov.ncols()
        )));
    }
    Ok(())
}

/// Multivariate normal log-density via Cholesky.
pub fn mvn_logpdf(y: &DVector<f64>, mean: &DVector<f64>, cov: &DMatrix<f64>) -> Result<f64> {
    check_dims(y.len(), mean.len(), cov)?;
    Ok(SpdFactor::new(cov)?.log_pdf(y, mean))
}

/// Draws from `N(mean, cov)`.
pub fn sample_gp<R: Rng + ?Sized>(
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
    rng: &mut R,
) -> Result<DVector<f64>> {
    check_dims(mean.len(), mean.len(), cov)?;
    Ok(SpdFactor::robust(cov, 0.0)?.sample(mean, rng))
}

/// Gaussian conditional of a mean function given curves observed around it.
#[derive(Debug, Clone)]
pub struct GaussianPosterior {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianPosterior {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DVector<f64>> {
        sample_gp(&self.mean, &self.cov, rng)
    }
}

/// Posterior of `theta ~ N(prior_mean, prior_cov)` after observing `count`
/// curves `y_i ~ N(theta, lik_cov)` whose sum is `curve_sum`.
///
/// Evaluated as `C_pos = C_p S^{-1} (C_l / N)`, `m_pos = m_p + C_p S^{-1}
/// (ybar - m_p)` with `S = C_p + C_l / N`, which equals
/// `(C_p^{-1} + N C_l^{-1})^{-1}` and `C_pos (C_p^{-1} m_p + C_l^{-1} sum y)`
/// without inverting the (often ill-conditioned) prior covariance.
pub fn conjugate_posterior(
    curve_sum: &DVector<f64>,
    count: usize,
    prior_mean: &DVector<f64>,
    prior_cov: &DMatrix<f64>,
    lik_cov: &DMatrix<f64>,
) -> Result<GaussianPosterior> {
    let d = prior_mean.len();
    check_dims(curve_sum.len(), d, prior_cov)?;
    check_dims(d, d, lik_cov)?;
    if count == 0 {
        return Ok(GaussianPosterior {
            mean: prior_mean.clone(),
            cov: prior_cov.clone(),
        });
    }
    let n = count as f64;
    let noise = lik_cov / n;
    let s = SpdFactor::robust(&(prior_cov + &noise), 0.0)?;
    let ybar = curve_sum / n;
    let mean = prior_mean + prior_cov * s.solve(&(ybar - prior_mean));
    let mut cov = prior_cov * s.solve_matrix(&noise);
    cov = (&cov + cov.transpose()) * 0.5;
    Ok(GaussianPosterior { mean, cov })
}

/// Conditional of a cluster mean function given its member curves.
pub fn theta_full_conditional(
    curves: &[DVector<f64>],
    prior_mean: &DVector<f64>,
    c_theta: &DMatrix<f64>,
    c_y: &DMatrix<f64>,
) -> Result<GaussianPosterior> {
    let d = prior_mean.len();
    let mut sum = DVector::zeros(d);
    for y in curves {
        if y.len() != d {
            return Err(Error::invalid("member curve length differs from the grid"));
        }
        sum += y;
    }
    conjugate_posterior(&sum, curves.len(), prior_mean, c_theta, c_y)
}

/// Log marginal likelihood of one curve under a fresh cluster mean
/// `theta ~ N(m_theta, C_theta)`: `log N(y | m_theta, C_y + C_theta)`.
pub fn marginal_loglik_new_cluster(
    y: &DVector<f64>,
    m_theta: &DVector<f64>,
    c_y: &DMatrix<f64>,
    c_theta: &DMatrix<f64>,
) -> Result<f64> {
    check_dims(y.len(), m_theta.len(), c_theta)?;
    let cov = c_y + c_theta;
    mvn_logpdf(y, m_theta, &cov)
}

/// Log marginal likelihood of several curves sharing one fresh cluster mean.
///
/// `cy` factors `C_y` and `pooled` factors `C_theta + C_y / T`, T the number
/// of curves. Uses the split of the likelihood into the curve average and the
/// within-group deviations.
pub fn marginal_loglik_curves(
    curves: &[DVector<f64>],
    m_theta: &DVector<f64>,
    cy: &SpdFactor,
    pooled: &SpdFactor,
) -> f64 {
    let t = curves.len();
    let d = m_theta.len() as f64;
    let mut ybar = DVector::zeros(m_theta.len());
    for y in curves {
        ybar += y;
    }
    ybar /= t as f64;
    let within: f64 = curves.iter().map(|y| cy.log_pdf(y, &ybar)).sum();
    let average_at_mode = -0.5 * (d * LN_2PI + cy.log_det() - d * (t as f64).ln());
    within - average_at_mode + pooled.log_pdf(&ybar, m_theta)
}
