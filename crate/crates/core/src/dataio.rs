//! Ingestion, validation, and windowing of annual level series.
//!
//! Input format is long CSV with header `id,year,value`: UTF-8, decimal
//! point, no thousands separators. Rows may arrive unsorted; they are
//! grouped by id and sorted by year.

use std::fmt::Write as _;

use thiserror::Error;

/// Minimum usable sample; ARIMA fitting below this is numerically
/// meaningless.
pub const MIN_SERIES_LEN: usize = 10;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("series {id}: duplicate year {year}")]
    DuplicateYear { id: String, year: i32 },
    #[error("series {id}: missing year {year} inside span")]
    GapInYears { id: String, year: i32 },
    #[error("series {id}: non-positive or non-finite value at year {year}")]
    NonPositiveValue { id: String, year: i32 },
    #[error("series {id}: {len} observations, need at least {MIN_SERIES_LEN}")]
    TooShort { id: String, len: usize },
    #[error("series {id}: window {start}-{end} not fully covered by {have_start}-{have_end}")]
    WindowOutOfRange {
        id: String,
        start: i32,
        end: i32,
        have_start: i32,
        have_end: i32,
    },
    #[error("invalid sample window: start {0} must be before end {1}")]
    BadWindow(i32, i32),
}

/// One annual level series: gapless, strictly positive, at least
/// [`MIN_SERIES_LEN`] observations.
#[derive(Debug, Clone, PartialEq)]
pub struct CountrySeries {
    id: String,
    years: Vec<i32>,
    values: Vec<f64>,
}

impl CountrySeries {
    /// Validates all invariants: years strictly increasing with step 1,
    /// values finite and positive, length at least [`MIN_SERIES_LEN`].
    pub fn new(id: impl Into<String>, years: Vec<i32>, values: Vec<f64>) -> Result<Self, DataError> {
        let id = id.into();
        assert_eq!(years.len(), values.len(), "years/values length mismatch");
        if years.len() < MIN_SERIES_LEN {
            return Err(DataError::TooShort { id, len: years.len() });
        }
        for w in years.windows(2) {
            if w[1] == w[0] {
                return Err(DataError::DuplicateYear { id, year: w[0] });
            }
            if w[1] != w[0] + 1 {
                return Err(DataError::GapInYears { id, year: w[0] + 1 });
            }
        }
        for (&y, &v) in years.iter().zip(&values) {
            if !v.is_finite() || v <= 0.0 {
                return Err(DataError::NonPositiveValue { id, year: y });
            }
        }
        Ok(Self { id, years, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn years(&self) -> &[i32] {
        &self.years
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.years.len()
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn start_year(&self) -> i32 {
        self.years[0]
    }

    pub fn end_year(&self) -> i32 {
        *self.years.last().unwrap()
    }

    /// Restricts to `w.start_year..=w.end_year`, which must be fully
    /// covered.
    pub fn window(&self, w: SampleWindow) -> Result<CountrySeries, DataError> {
        if w.start_year < self.start_year() || w.end_year > self.end_year() {
            return Err(DataError::WindowOutOfRange {
                id: self.id.clone(),
                start: w.start_year,
                end: w.end_year,
                have_start: self.start_year(),
                have_end: self.end_year(),
            });
        }
        let a = (w.start_year - self.start_year()) as usize;
        let b = (w.end_year - self.start_year()) as usize;
        CountrySeries::new(
            self.id.clone(),
            self.years[a..=b].to_vec(),
            self.values[a..=b].to_vec(),
        )
    }
}

/// Inclusive year range restricting an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleWindow {
    pub start_year: i32,
    pub end_year: i32,
}

impl SampleWindow {
    pub fn new(start_year: i32, end_year: i32) -> Result<Self, DataError> {
        if start_year >= end_year {
            return Err(DataError::BadWindow(start_year, end_year));
        }
        Ok(Self { start_year, end_year })
    }
}

/// Parses long-format CSV into one series per distinct id, in order of
/// first appearance.
pub fn parse_csv(text: &str) -> Result<Vec<CountrySeries>, DataError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "id,year,value" => {}
        Some((_, h)) => {
            return Err(DataError::MalformedRow {
                line: 1,
                reason: format!("expected header `id,year,value`, got `{}`", h.trim()),
            })
        }
        None => {
            return Err(DataError::MalformedRow {
                line: 1,
                reason: "empty input".into(),
            })
        }
    }

    // id -> rows, ids kept in first-appearance order
    let mut order: Vec<String> = Vec::new();
    let mut rows: Vec<Vec<(i32, f64)>> = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 3 {
            return Err(DataError::MalformedRow {
                line: lineno,
                reason: format!("expected 3 columns, got {}", parts.len()),
            });
        }
        let id = parts[0].trim();
        let year: i32 = parts[1].trim().parse().map_err(|_| DataError::MalformedRow {
            line: lineno,
            reason: format!("unparsable year `{}`", parts[1].trim()),
        })?;
        let value: f64 = parts[2].trim().parse().map_err(|_| DataError::MalformedRow {
            line: lineno,
            reason: format!("unparsable value `{}`", parts[2].trim()),
        })?;
        match order.iter().position(|s| s == id) {
            Some(k) => rows[k].push((year, value)),
            None => {
                order.push(id.to_string());
                rows.push(vec![(year, value)]);
            }
        }
    }

    let mut out = Vec::with_capacity(order.len());
    for (id, mut r) in order.into_iter().zip(rows) {
        r.sort_by_key(|&(y, _)| y);
        let years: Vec<i32> = r.iter().map(|&(y, _)| y).collect();
        let values: Vec<f64> = r.iter().map(|&(_, v)| v).collect();
        out.push(CountrySeries::new(id, years, values)?);
    }
    Ok(out)
}

/// Inverse of [`parse_csv`] on valid series lists.
pub fn serialize_csv(series: &[CountrySeries]) -> String {
    let mut s = String::from("id,year,value\n");
    for cs in series {
        for (&y, &v) in cs.years.iter().zip(&cs.values) {
            writeln!(s, "{},{},{}", cs.id, y, v).unwrap();
        }
    }
    s
}
