//! Functional observations over areas and days, with additive period
//! components (weekday, holiday, pre-holiday effect).

mod design;
mod io;

pub use design::{build_period_design, DayTag, PeriodDesign};
pub use io::{read_dataset, write_dataset, DATASET_FILES};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::partition::Adjacency;

/// Curves `y_it(x)` on a common grid for `n` areas and `T` days.
#[derive(Debug, Clone)]
pub struct FunctionalDataset {
    grid: Vec<f64>,
    n_areas: usize,
    n_days: usize,
    curves: Vec<DVector<f64>>,
    design: PeriodDesign,
    adjacency: Adjacency,
    standardized: bool,
}

/// Fitted per-period cluster means of an item, as needed by residuals.
pub trait PeriodMeans {
    fn period_mean(&self, item: usize, period: usize) -> &DVector<f64>;
}

impl FunctionalDataset {
    /// `curves[i * n_days + t]` holds area `i` on day `t`.
    pub fn new(
        grid: Vec<f64>,
        n_areas: usize,
        n_days: usize,
        curves: Vec<DVector<f64>>,
        design: PeriodDesign,
        adjacency: Adjacency,
    ) -> Result<Self> {
        if n_areas == 0 || n_days == 0 {
            return Err(Error::invalid("a dataset needs at least one area and one day"));
        }
        if grid.is_empty() {
            return Err(Error::invalid("empty grid"));
        }
        if curves.len() != n_areas * n_days {
            return Err(Error::invalid(format!(
                "expected {} curves, got {}",
                n_areas * n_days,
                curves.len()
            )));
        }
        if let Some(bad) = curves.iter().position(|c| c.len() != grid.len()) {
            return Err(Error::invalid(format!("curve {bad} does not match the grid length")));
        }
        if curves.iter().any(|c| c.iter().any(|v| !v.is_finite())) {
            return Err(Error::invalid("observations must be finite"));
        }
        if design.n_days() != n_days {
            return Err(Error::invalid("period design and observations disagree on the day count"));
        }
        if adjacency.n() != n_areas {
            return Err(Error::invalid("adjacency and observations disagree on the area count"));
        }
        Ok(Self {
            grid,
            n_areas,
            n_days,
            curves,
            design,
            adjacency,
            standardized: false,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.len()
    }

    pub fn n_areas(&self) -> usize {
        self.n_areas
    }

    pub fn n_days(&self) -> usize {
        self.n_days
    }

    pub fn n_periods(&self) -> usize {
        self.design.n_periods()
    }

    pub fn design(&self) -> &PeriodDesign {
        &self.design
    }

    pub fn adjacency(&self) -> &Adjacency {
        &self.adjacency
    }

    pub fn is_standardized(&self) -> bool {
        self.standardized
    }

    pub fn curve(&self, area: usize, day: usize) -> &DVector<f64> {
        &self.curves[area * self.n_days + day]
    }

    pub fn curves(&self) -> &[DVector<f64>] {
        &self.curves
    }

    /// Same layout, new observations.
    pub fn with_curves(&self, curves: Vec<DVector<f64>>) -> Result<Self> {
        let mut out = Self::new(
            self.grid.clone(),
            self.n_areas,
            self.n_days,
            curves,
            self.design.clone(),
            self.adjacency.clone(),
        )?;
        out.standardized = self.standardized;
        Ok(out)
    }

    /// Divides every grid point by the root mean square over all (area, day).
    pub fn standardize(&self) -> Result<Self> {
        let mut curves = self.curves.clone();
        standardize_curves(&mut curves)?;
        let mut out = self.with_curves(curves)?;
        out.standardized = true;
        Ok(out)
    }

    /// Mean of `y_it` implied by per-period cluster means.
    pub fn fitted_mean<M: PeriodMeans + ?Sized>(&self, means: &M, area: usize, day: usize) -> DVector<f64> {
        let mut mu = DVector::zeros(self.dim());
        for l in self.design.active_periods(day) {
            mu += means.period_mean(area, l);
        }
        mu
    }

    /// Residual of `y_it` after removing all active period components except `period`.
    pub fn period_residual<M: PeriodMeans + ?Sized>(
        &self,
        means: &M,
        area: usize,
        day: usize,
        period: usize,
    ) -> DVector<f64> {
        debug_assert!(self.design.is_active(day, period));
        let mut r = self.curve(area, day).clone();
        for l in self.design.active_periods(day) {
            if l != period {
                r -= means.period_mean(area, l);
            }
        }
        r
    }
}

/// In-place standardization: each grid point is divided by
/// `sqrt(sum_{i,t} y_it(x)^2 / (n T))`.
pub fn standardize_curves(curves: &mut [DVector<f64>]) -> Result<()> {
    let Some(first) = curves.first() else {
        return Err(Error::invalid("nothing to standardize"));
    };
    let d = first.len();
    let count = curves.len() as f64;
    for x in 0..d {
        let ms = curves.iter().map(|c| c[x] * c[x]).sum::<f64>() / count;
        if ms <= 0.0 {
            return Err(Error::invalid(format!(
                "grid point {x} is zero for every area and day; cannot standardize"
            )));
        }
        let root = ms.sqrt();
        for c in curves.iter_mut() {
            c[x] /= root;
        }
    }
    Ok(())
}
