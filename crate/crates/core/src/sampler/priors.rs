//! Hyperprior families and their log-densities.

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Gamma(shape, rate).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaPrior {
    pub shape: f64,
    pub rate: f64,
}

impl GammaPrior {
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * x.ln()
            - self.rate * x
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Gamma::new(self.shape, 1.0 / self.rate)
            .expect("validated gamma prior")
            .sample(rng)
    }
}

/// Beta(a, b).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaPrior {
    pub a: f64,
    pub b: f64,
}

impl BetaPrior {
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            return f64::NEG_INFINITY;
        }
        (self.a - 1.0) * x.ln() + (self.b - 1.0) * (1.0 - x).ln() - ln_gamma(self.a)
            - ln_gamma(self.b)
            + ln_gamma(self.a + self.b)
    }

    pub fn mean(&self) -> f64 {
        self.a / (self.a + self.b)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        Beta::new(self.a, self.b)
            .expect("validated beta prior")
            .sample(rng)
    }
}

/// Inverse-gamma IG(shape, scale): density proportional to `x^{-shape-1} exp(-scale/x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvGammaPrior {
    pub shape: f64,
    pub scale: f64,
}

impl InvGammaPrior {
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.scale.ln() - ln_gamma(self.shape) - (self.shape + 1.0) * x.ln()
            - self.scale / x
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let g: f64 = Gamma::new(self.shape, 1.0 / self.scale)
            .expect("validated inverse-gamma prior")
            .sample(rng);
        1.0 / g
    }
}

/// Priors of the partition parameters, kernel hyperparameters and the
/// overall mean function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperPriors {
    pub alpha: GammaPrior,
    pub beta: BetaPrior,
    pub tau: BetaPrior,
    /// `(a_eta, b_eta)`: both squared scales get IG(a_eta / 2, b_eta / 2).
    pub eta: [f64; 2],
    /// Both ranges get IG(shape, scale).
    pub phi: InvGammaPrior,
    /// Constant value of the prior mean m_m of the overall mean function.
    pub m_mean: f64,
    /// C_m = m_var * I.
    pub m_var: f64,
}

impl Default for HyperPriors {
    fn default() -> Self {
        Self::prior1()
    }
}

impl HyperPriors {
    fn simulation(alpha: GammaPrior, beta: BetaPrior) -> Self {
        Self {
            alpha,
            beta,
            tau: BetaPrior { a: 0.5, b: 0.5 },
            eta: [1.0, 1.0],
            phi: InvGammaPrior {
                shape: 0.5,
                scale: 0.5,
            },
            m_mean: 0.5,
            m_var: 10.0,
        }
    }

    /// alpha ~ Gamma(2, 1), beta ~ Beta(5, 1).
    pub fn prior1() -> Self {
        Self::simulation(GammaPrior { shape: 2.0, rate: 1.0 }, BetaPrior { a: 5.0, b: 1.0 })
    }

    /// alpha ~ Gamma(5, 1), beta ~ Beta(20, 1).
    pub fn prior2() -> Self {
        Self::simulation(GammaPrior { shape: 5.0, rate: 1.0 }, BetaPrior { a: 20.0, b: 1.0 })
    }

    /// Hyperpriors of the mobile-phone application: alpha ~ Gamma(5, 1),
    /// beta ~ Beta(10, 1).
    pub fn application() -> Self {
        Self::simulation(GammaPrior { shape: 5.0, rate: 1.0 }, BetaPrior { a: 10.0, b: 1.0 })
    }

    /// Similarity-based DP: alpha ~ Gamma(1, 1), beta = 1 / alpha.
    pub fn sdp() -> Self {
        Self::simulation(GammaPrior { shape: 1.0, rate: 1.0 }, BetaPrior { a: 1.0, b: 1.0 })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "prior1" => Ok(Self::prior1()),
            "prior2" => Ok(Self::prior2()),
            "application" => Ok(Self::application()),
            "sdp" => Ok(Self::sdp()),
            other => Err(Error::invalid(format!(
                "unknown prior preset {other:?} (expected prior1, prior2, application or sdp)"
            ))),
        }
    }

    pub fn eta_prior(&self) -> InvGammaPrior {
        InvGammaPrior {
            shape: self.eta[0] / 2.0,
            scale: self.eta[1] / 2.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("alpha shape", self.alpha.shape),
            ("alpha rate", self.alpha.rate),
            ("beta a", self.beta.a),
            ("beta b", self.beta.b),
            ("tau a", self.tau.a),
            ("tau b", self.tau.b),
            ("a_eta", self.eta[0]),
            ("b_eta", self.eta[1]),
            ("phi shape", self.phi.shape),
            ("phi scale", self.phi.scale),
            ("m_var", self.m_var),
        ];
        for (name, v) in checks {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("hyperprior {name} must be positive, got {v}")));
            }
        }
        if !self.m_mean.is_finite() {
            return Err(Error::invalid("hyperprior m_mean must be finite"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::substream;

    #[test]
    fn densities_integrate_to_one() {
        let g = GammaPrior { shape: 2.5, rate: 1.5 };
        let b = BetaPrior { a: 2.0, b: 3.5 };
        let ig = InvGammaPrior { shape: 3.0, scale: 2.0 };
        let h = 1e-4;
        let integrate = |f: &dyn Fn(f64) -> f64, hi: f64| {
            (0..(hi / h) as usize).map(|k| f((k as f64 + 0.5) * h).exp() * h).sum::<f64>()
        };
        assert!((integrate(&|x| g.ln_pdf(x), 40.0) - 1.0).abs() < 1e-6);
        assert!((integrate(&|x| b.ln_pdf(x), 1.0) - 1.0).abs() < 1e-6);
        assert!((integrate(&|x| ig.ln_pdf(x), 200.0) - 1.0).abs() < 1e-4);
        assert_eq!(b.ln_pdf(1.0), f64::NEG_INFINITY);
        assert_eq!(g.ln_pdf(-1.0), f64::NEG_INFINITY);
    }

    #[test]
    fn inverse_gamma_sample_mean() {
        let ig = InvGammaPrior { shape: 4.0, scale: 3.0 };
        let mut rng = substream(1, 0, 0);
        let m: f64 = (0..100_000).map(|_| ig.sample(&mut rng)).sum::<f64>() / 1e5;
        // mean scale / (shape - 1) = 1, sd 1/sqrt(2)
        assert!((m - 1.0).abs() < 0.01);
    }

    #[test]
    fn presets_validate() {
        for name in ["prior1", "prior2", "application", "sdp"] {
            HyperPriors::by_name(name).unwrap().validate().unwrap();
        }
        assert!(HyperPriors::by_name("nope").is_err());
        let mut bad = HyperPriors::prior1();
        bad.phi.scale = 0.0;
        assert!(bad.validate().is_err());
    }
}
