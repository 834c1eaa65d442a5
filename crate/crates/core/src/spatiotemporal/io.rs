//! CSV ingestion and export.
//!
//! * `observations.csv`: `area_id,day_index,hour_index,value`, 0-based, one row
//!   per (area, day, hour), no gaps.
//! * `calendar.csv`: `day_index,tag` with tag in {weekday, holiday, pre_holiday}.
//! * `adjacency.csv`: `area_a,area_b` undirected edges.

use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::{DayTag, FunctionalDataset, PeriodDesign};
use crate::error::{Error, Result};
use crate::partition::Adjacency;

pub const DATASET_FILES: [&str; 3] = ["observations.csv", "calendar.csv", "adjacency.csv"];

#[derive(Debug, Serialize, Deserialize)]
struct ObservationRow {
    area_id: usize,
    day_index: usize,
    hour_index: usize,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct CalendarRow {
    day_index: usize,
    tag: String,
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.display().to_string(),
        source,
    }
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut rdr = csv::Reader::from_path(path).map_err(csv_err(path))?;
    rdr.deserialize().map(|r| r.map_err(csv_err(path))).collect()
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads the three dataset files from `dir`. The grid is the hour index.
pub fn read_dataset(dir: &Path) -> Result<FunctionalDataset> {
    let obs_path = dir.join(DATASET_FILES[0]);
    let rows: Vec<ObservationRow> = read_rows(&obs_path)?;
    if rows.is_empty() {
        return Err(Error::invalid(format!("{} has no observations", obs_path.display())));
    }
    let n = rows.iter().map(|r| r.area_id).max().unwrap() + 1;
    let t = rows.iter().map(|r| r.day_index).max().unwrap() + 1;
    let d = rows.iter().map(|r| r.hour_index).max().unwrap() + 1;
    let mut values: Vec<Option<f64>> = vec![None; n * t * d];
    for r in &rows {
        let slot = &mut values[(r.area_id * t + r.day_index) * d + r.hour_index];
        if slot.is_some() {
            return Err(Error::invalid(format!(
                "duplicate observation for area {}, day {}, hour {}",
                r.area_id, r.day_index, r.hour_index
            )));
        }
        *slot = Some(r.value);
    }
    if let Some(gap) = values.iter().position(Option::is_none) {
        let (area, rest) = (gap / (t * d), gap % (t * d));
        return Err(Error::invalid(format!(
            "missing observation for area {area}, day {}, hour {}",
            rest / d,
            rest % d
        )));
    }
    let curves = values
        .chunks(d)
        .map(|c| DVector::from_iterator(d, c.iter().map(|v| v.unwrap())))
        .collect();

    let cal_path = dir.join(DATASET_FILES[1]);
    let cal: Vec<CalendarRow> = read_rows(&cal_path)?;
    let mut tags: Vec<Option<DayTag>> = vec![None; t];
    for row in cal {
        if row.day_index >= t {
            return Err(Error::invalid(format!(
                "calendar day {} has no observations",
                row.day_index
            )));
        }
        tags[row.day_index] = Some(row.tag.parse()?);
    }
    let tags: Vec<DayTag> = tags
        .into_iter()
        .enumerate()
        .map(|(day, tag)| tag.ok_or_else(|| Error::invalid(format!("day {day} has no calendar tag"))))
        .collect::<Result<_>>()?;
    let design = PeriodDesign::from_tags(&tags)?;

    let adjacency = Adjacency::read_csv(&dir.join(DATASET_FILES[2]), n)?;
    let grid = (0..d).map(|h| h as f64).collect();
    FunctionalDataset::new(grid, n, t, curves, design, adjacency)
}

/// Writes `data` in the ingestion format, with `tags` as the calendar.
pub fn write_dataset(dir: &Path, data: &FunctionalDataset, tags: &[DayTag]) -> Result<()> {
    if tags.len() != data.n_days() {
        return Err(Error::invalid("one calendar tag per day is required"));
    }
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let (t, d) = (data.n_days(), data.dim());
    write_rows(
        &dir.join(DATASET_FILES[0]),
        (0..data.n_areas()).flat_map(|i| {
            (0..t).flat_map(move |day| {
                (0..d).map(move |h| ObservationRow {
                    area_id: i,
                    day_index: day,
                    hour_index: h,
                    value: data.curve(i, day)[h],
                })
            })
        }),
    )?;
    write_rows(
        &dir.join(DATASET_FILES[1]),
        tags.iter().enumerate().map(|(day, tag)| CalendarRow {
            day_index: day,
            tag: tag.to_string(),
        }),
    )?;
    data.adjacency().write_csv(&dir.join(DATASET_FILES[2]))
}
