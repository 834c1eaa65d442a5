use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Calendar tag of a day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DayTag {
    Weekday,
    Holiday,
    /// A weekday followed by a holiday: weekday trend plus an extra effect.
    PreHoliday,
}

impl FromStr for DayTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "weekday" => Ok(DayTag::Weekday),
            "holiday" => Ok(DayTag::Holiday),
            "pre_holiday" => Ok(DayTag::PreHoliday),
            other => Err(Error::invalid(format!("unknown day tag {other:?}"))),
        }
    }
}

impl fmt::Display for DayTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DayTag::Weekday => "weekday",
            DayTag::Holiday => "holiday",
            DayTag::PreHoliday => "pre_holiday",
        })
    }
}

const PERIOD_NAMES: [&str; 3] = ["weekday", "holiday", "pre_holiday"];

/// Indicator rows `(w_t1, w_t2, w_t3)` for weekday, holiday and pre-holiday effect.
pub fn build_period_design(tags: &[DayTag]) -> Vec<[u8; 3]> {
    tags.iter()
        .map(|tag| match tag {
            DayTag::Weekday => [1, 0, 0],
            DayTag::Holiday => [0, 1, 0],
            DayTag::PreHoliday => [1, 0, 1],
        })
        .collect()
}

/// Binary day-by-period matrix `w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodDesign {
    w: Vec<Vec<bool>>,
    names: Vec<String>,
}

impl PeriodDesign {
    /// Every day in one period.
    pub fn single(n_days: usize) -> Self {
        Self {
            w: vec![vec![true]; n_days],
            names: vec!["all".to_string()],
        }
    }

    pub fn new(w: Vec<Vec<bool>>, names: Vec<String>) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::invalid("a design needs at least one period"));
        }
        for (t, row) in w.iter().enumerate() {
            if row.len() != m {
                return Err(Error::invalid(format!("day {t} has {} indicators, expected {m}", row.len())));
            }
            if !row.iter().any(|&v| v) {
                return Err(Error::invalid(format!("day {t} belongs to no period")));
            }
        }
        for (l, name) in names.iter().enumerate() {
            if !w.iter().any(|row| row[l]) {
                return Err(Error::invalid(format!("period {name:?} has no days")));
            }
        }
        Ok(Self { w, names })
    }

    /// Weekday / holiday / pre-holiday design, keeping only periods that
    /// occur on at least one day.
    pub fn from_tags(tags: &[DayTag]) -> Result<Self> {
        let full = build_period_design(tags);
        let keep: Vec<usize> = (0..3).filter(|&l| full.iter().any(|row| row[l] == 1)).collect();
        let w = full
            .iter()
            .map(|row| keep.iter().map(|&l| row[l] == 1).collect())
            .collect();
        let names = keep.iter().map(|&l| PERIOD_NAMES[l].to_string()).collect();
        Self::new(w, names)
    }

    pub fn n_days(&self) -> usize {
        self.w.len()
    }

    pub fn n_periods(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_active(&self, day: usize, period: usize) -> bool {
        self.w[day][period]
    }

    pub fn active_periods(&self, day: usize) -> impl Iterator<Item = usize> + '_ {
        self.w[day].iter().enumerate().filter_map(|(l, &on)| on.then_some(l))
    }

    pub fn active_days(&self, period: usize) -> Vec<usize> {
        (0..self.n_days()).filter(|&t| self.w[t][period]).collect()
    }
}
