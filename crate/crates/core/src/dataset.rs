//! ISBSG-style project rows: CSV ingestion, the project filter, seeded
//! train/test splitting, log-residual outlier detection and a synthetic
//! corpus generator with a known weight table.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so a seed
//! fully determines a split or a corpus for a given build.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::calibration::Observation;
use crate::effort::RegressionModel;
use crate::error::{Error, Result};
use crate::fp_model::{compute_ufp, ComponentKind, ComponentRecord, UfpBreakdown, WeightTable, CELLS};

pub const GSC_COUNT: usize = 14;

/// Breakdown columns in cell order.
pub const BREAKDOWN_COLUMNS: [&str; CELLS] = [
    "ei_low", "ei_avg", "ei_high", "eo_low", "eo_avg", "eo_high", "eq_low", "eq_avg", "eq_high", "ilf_low",
    "ilf_avg", "ilf_high", "eif_low", "eif_avg", "eif_high",
];

/// Full header, in the order written.
pub fn csv_header() -> Vec<String> {
    let mut cols: Vec<String> = ["id", "quality", "count_method", "resource_level", "dev_type"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(BREAKDOWN_COLUMNS.iter().map(|s| s.to_string()));
    cols.extend((1..=GSC_COUNT).map(|i| format!("gsc_{i}")));
    cols.push("effort_hours".to_string());
    cols
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QualityRating {
    A,
    B,
    C,
    D,
}

impl FromStr for QualityRating {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(QualityRating::A),
            "B" | "b" => Ok(QualityRating::B),
            "C" | "c" => Ok(QualityRating::C),
            "D" | "d" => Ok(QualityRating::D),
            other => Err(Error::invalid(format!("quality rating must be A-D, got {other:?}"))),
        }
    }
}

impl fmt::Display for QualityRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// One project row. `breakdown` and `gsc` are `None` when any of their
/// cells is blank in the source.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectRecord {
    pub id: String,
    pub quality: QualityRating,
    pub count_method: String,
    pub resource_level: i64,
    pub dev_type: String,
    pub breakdown: Option<UfpBreakdown>,
    pub gsc: Option<[u8; GSC_COUNT]>,
    /// Person-hours.
    pub effort: f64,
}

impl ProjectRecord {
    pub fn validate(&self) -> Result<()> {
        if !(self.effort.is_finite() && self.effort > 0.0) {
            return Err(Error::invalid(format!("effort must be positive, got {}", self.effort)));
        }
        if let Some(gsc) = &self.gsc {
            if let Some(g) = gsc.iter().find(|&&g| g > 5) {
                return Err(Error::invalid(format!("GSC ratings must be 0-5, got {g}")));
            }
        }
        Ok(())
    }

    pub fn observation(&self) -> Result<Observation> {
        let breakdown = self
            .breakdown
            .ok_or_else(|| Error::invalid(format!("project {} has no UFP breakdown", self.id)))?;
        Ok(Observation::new(breakdown, self.effort))
    }
}

/// Breakdown/effort pairs for every record, failing on incomplete rows.
pub fn observations(records: &[ProjectRecord]) -> Result<Vec<Observation>> {
    records
        .iter()
        .enumerate()
        .map(|(i, r)| r.observation().map_err(|e| Error::at(i, e)))
        .collect()
}

pub fn parse_projects(text: &str) -> Result<Vec<ProjectRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers()?.clone();
    let expected = csv_header();
    let parse_err = |line: u64, message: String| Error::Parse { line, message };
    if header.iter().all(|h| h.is_empty()) {
        return Err(parse_err(1, "missing header row".into()));
    }
    for h in header.iter() {
        if !expected.iter().any(|e| e == h) {
            return Err(parse_err(1, format!("unknown column {h:?}")));
        }
    }
    let mut index = Vec::with_capacity(expected.len());
    for name in &expected {
        let pos: Vec<usize> = header.iter().enumerate().filter(|(_, h)| h == name).map(|(i, _)| i).collect();
        match pos.as_slice() {
            [i] => index.push(*i),
            [] => return Err(parse_err(1, format!("missing column {name:?}"))),
            _ => return Err(parse_err(1, format!("duplicate column {name:?}"))),
        }
    }

    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |col: usize| row.get(index[col]).unwrap_or("");
        let rec = parse_row(&field).map_err(|e| match e {
            Error::InvalidInput(m) => parse_err(line, m),
            other => other,
        })?;
        out.push(rec);
    }
    Ok(out)
}

fn parse_row<'a>(field: &dyn Fn(usize) -> &'a str) -> Result<ProjectRecord> {
    fn num<T: FromStr>(name: &str, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| Error::invalid(format!("column {name}: expected a number, got {s:?}")))
    }
    let header = csv_header();

    let id = field(0).to_string();
    if id.is_empty() {
        return Err(Error::invalid("column id is blank"));
    }
    let quality = field(1).parse()?;
    let count_method = field(2).to_string();
    let resource_level = num(&header[3], field(3))?;
    let dev_type = field(4).to_string();

    let cells: Vec<&str> = (0..CELLS).map(|j| field(5 + j)).collect();
    let breakdown = if cells.iter().any(|c| c.is_empty()) {
        None
    } else {
        let mut v = [0u32; CELLS];
        for (j, c) in cells.iter().enumerate() {
            v[j] = num(&header[5 + j], c)?;
        }
        Some(UfpBreakdown::from_vector(&v))
    };

    let gsc_cells: Vec<&str> = (0..GSC_COUNT).map(|k| field(5 + CELLS + k)).collect();
    let gsc = if gsc_cells.iter().any(|c| c.is_empty()) {
        None
    } else {
        let mut g = [0u8; GSC_COUNT];
        for (k, c) in gsc_cells.iter().enumerate() {
            g[k] = num(&header[5 + CELLS + k], c)?;
        }
        Some(g)
    };

    let effort_col = 5 + CELLS + GSC_COUNT;
    let effort: f64 = num(&header[effort_col], field(effort_col))?;
    let rec = ProjectRecord {
        id,
        quality,
        count_method,
        resource_level,
        dev_type,
        breakdown,
        gsc,
        effort,
    };
    rec.validate()?;
    Ok(rec)
}

/// Writes records in the canonical column order; parses back losslessly.
pub fn write_projects(records: &[ProjectRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(csv_header())?;
    for r in records {
        let mut row: Vec<String> = vec![
            r.id.clone(),
            r.quality.to_string(),
            r.count_method.clone(),
            r.resource_level.to_string(),
            r.dev_type.clone(),
        ];
        match &r.breakdown {
            Some(b) => row.extend(b.counts().iter().map(|c| c.to_string())),
            None => row.extend(std::iter::repeat_n(String::new(), CELLS)),
        }
        match &r.gsc {
            Some(g) => row.extend(g.iter().map(|c| c.to_string())),
            None => row.extend(std::iter::repeat_n(String::new(), GSC_COUNT)),
        }
        row.push(r.effort.to_string());
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Input to a size estimate: level counts per project, or the components
/// of a single application.
#[derive(Clone, Debug, PartialEq)]
pub enum EstimateInput {
    /// `(id, breakdown)` rows; ids default to the 1-based row number.
    Breakdowns(Vec<(String, UfpBreakdown)>),
    Components(Vec<ComponentRecord>),
}

/// Parses either a `kind,det,secondary` component list or rows carrying
/// the fifteen breakdown columns (plus an optional `id`).
pub fn parse_estimate_input(text: &str) -> Result<EstimateInput> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers()?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let parse_err = |line: u64, message: String| Error::Parse { line, message };
    fn num<T: FromStr>(name: &str, s: &str) -> Result<T> {
        s.parse()
            .map_err(|_| Error::invalid(format!("column {name}: expected a nonnegative integer, got {s:?}")))
    }

    if let (Some(k), Some(d), Some(r)) = (col("kind"), col("det"), col("secondary")) {
        let mut out = Vec::new();
        for row in reader.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            let get = |i: usize| row.get(i).unwrap_or("");
            let comp = (|| {
                let kind: ComponentKind = get(k).parse()?;
                ComponentRecord::new(kind, num("det", get(d))?, num("secondary", get(r))?)
            })()
            .map_err(|e| parse_err(line, e.to_string()))?;
            out.push(comp);
        }
        return Ok(EstimateInput::Components(out));
    }

    let cells: Vec<usize> = BREAKDOWN_COLUMNS
        .iter()
        .map(|c| col(c).ok_or_else(|| parse_err(1, format!("expected kind,det,secondary or breakdown columns; missing {c:?}"))))
        .collect::<Result<_>>()?;
    let id_col = col("id");
    let mut out = Vec::new();
    for (n, row) in reader.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let mut v = [0u32; CELLS];
        for (j, &i) in cells.iter().enumerate() {
            v[j] = num(BREAKDOWN_COLUMNS[j], row.get(i).unwrap_or("")).map_err(|e| parse_err(line, e.to_string()))?;
        }
        let id = id_col
            .and_then(|i| row.get(i))
            .filter(|s| !s.is_empty())
            .map_or_else(|| (n + 1).to_string(), str::to_string);
        out.push((id, UfpBreakdown::from_vector(&v)));
    }
    Ok(EstimateInput::Breakdowns(out))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterCriteria {
    pub qualities: Vec<QualityRating>,
    pub count_method: String,
    pub resource_level: i64,
    pub dev_types: Vec<String>,
    pub require_complete: bool,
}

impl Default for FilterCriteria {
    fn default() -> Self {
        FilterCriteria {
            qualities: vec![QualityRating::A, QualityRating::B],
            count_method: "IFPUG".to_string(),
            resource_level: 1,
            dev_types: vec!["New Development".to_string(), "Re-development".to_string()],
            require_complete: true,
        }
    }
}

impl FilterCriteria {
    pub fn accepts(&self, r: &ProjectRecord) -> bool {
        self.qualities.contains(&r.quality)
            && r.count_method.eq_ignore_ascii_case(&self.count_method)
            && r.resource_level == self.resource_level
            && self.dev_types.iter().any(|d| d.eq_ignore_ascii_case(&r.dev_type))
            && (!self.require_complete || (r.breakdown.is_some() && r.gsc.is_some()))
    }
}

pub fn filter_isbsg(records: &[ProjectRecord], criteria: &FilterCriteria) -> Vec<ProjectRecord> {
    records.iter().filter(|r| criteria.accepts(r)).cloned().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub seed: u64,
    pub train_count: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { seed: 0, train_count: 100 }
    }
}

/// Uniformly random train/test partition; both halves keep input order.
pub fn split(records: &[ProjectRecord], spec: &SplitSpec) -> Result<(Vec<ProjectRecord>, Vec<ProjectRecord>)> {
    if spec.train_count == 0 || spec.train_count >= records.len() {
        return Err(Error::invalid(format!(
            "train_count must be in 1..{}, got {}",
            records.len(),
            spec.train_count
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.shuffle(&mut rng);
    let mut in_train = vec![false; records.len()];
    for &i in &order[..spec.train_count] {
        in_train[i] = true;
    }
    let (train, test): (Vec<_>, Vec<_>) = records.iter().zip(&in_train).partition(|(_, &t)| t);
    Ok((
        train.into_iter().map(|(r, _)| r.clone()).collect(),
        test.into_iter().map(|(r, _)| r.clone()).collect(),
    ))
}

pub const DEFAULT_OUTLIER_K: f64 = 2.5;

/// Residual deviation at or below this is rounding noise from an exact fit.
const DEGENERATE_SD: f64 = 1e-12;

/// Log residuals `ln(effort) - ln(A * ufp^B)` under `weights`.
pub fn log_residuals(records: &[ProjectRecord], model: &RegressionModel, weights: &WeightTable) -> Result<Vec<f64>> {
    model.validate()?;
    let residual = |r: &ProjectRecord| -> Result<f64> {
        let obs = r.observation()?;
        let pred = model.predict(compute_ufp(&obs.breakdown, weights))?;
        Ok(r.effort.ln() - pred.ln())
    };
    records
        .iter()
        .enumerate()
        .map(|(i, r)| residual(r).map_err(|e| Error::at(i, e)))
        .collect()
}

/// Ids of records whose absolute log residual exceeds `k` sample standard
/// deviations of the residuals.
pub fn detect_outliers(
    records: &[ProjectRecord],
    model: &RegressionModel,
    weights: &WeightTable,
    k: f64,
) -> Result<BTreeSet<String>> {
    if records.len() < 3 {
        return Err(Error::invalid(format!(
            "outlier detection needs at least 3 records, got {}",
            records.len()
        )));
    }
    if !(k > 0.0) {
        return Err(Error::invalid(format!("outlier k must be positive, got {k}")));
    }
    let res = log_residuals(records, model, weights)?;
    let n = res.len() as f64;
    let mean = res.iter().sum::<f64>() / n;
    let var = res.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    if sd <= DEGENERATE_SD {
        return Ok(BTreeSet::new());
    }
    Ok(records
        .iter()
        .zip(&res)
        .filter(|(_, r)| r.abs() > k * sd)
        .map(|(rec, _)| rec.id.clone())
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub project_count: usize,
    /// The true weight table the efforts are generated from.
    pub hidden_weights: WeightTable,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    /// Standard deviation of the Gaussian noise added to ln(effort).
    pub noise_sigma: f64,
    pub count_max: u32,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            project_count: 200,
            hidden_weights: WeightTable::default(),
            a: 10.0,
            b: 1.05,
            noise_sigma: 0.0,
            count_max: 10,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        self.hidden_weights.validate()?;
        if self.project_count < 1 {
            return Err(Error::config("project_count must be at least 1"));
        }
        if !(self.a.is_finite() && self.a > 0.0) || !self.b.is_finite() {
            return Err(Error::config(format!("need finite A > 0 and finite B, got A={} B={}", self.a, self.b)));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::config(format!("noise_sigma must be nonnegative, got {}", self.noise_sigma)));
        }
        if self.count_max < 1 {
            return Err(Error::config("count_max must be at least 1"));
        }
        Ok(())
    }
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Vec<ProjectRecord>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::config(e.to_string()))?;
    let width = spec.project_count.to_string().len().max(4);

    let mut out = Vec::with_capacity(spec.project_count);
    for i in 0..spec.project_count {
        let breakdown = loop {
            let mut v = [0u32; CELLS];
            v.iter_mut().for_each(|c| *c = rng.random_range(0..=spec.count_max));
            let b = UfpBreakdown::from_vector(&v);
            if !b.is_zero() {
                break b;
            }
        };
        let mut gsc = [0u8; GSC_COUNT];
        gsc.iter_mut().for_each(|g| *g = rng.random_range(0..=5));
        let mut effort = spec.a * compute_ufp(&breakdown, &spec.hidden_weights).powf(spec.b);
        if spec.noise_sigma > 0.0 {
            effort *= noise.sample(&mut rng).exp();
        }
        out.push(ProjectRecord {
            id: format!("P{:0width$}", i + 1),
            quality: QualityRating::A,
            count_method: "IFPUG".to_string(),
            resource_level: 1,
            dev_type: "New Development".to_string(),
            breakdown: Some(breakdown),
            gsc: Some(gsc),
            effort,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(effort: &str) -> String {
        let mut cells = vec!["X1", "B", "IFPUG", "1", "New Development"];
        cells.extend(["1"; CELLS]);
        cells.extend(["3"; GSC_COUNT]);
        cells.push(effort);
        cells.join(",")
    }

    fn header() -> String {
        csv_header().join(",")
    }

    #[test]
    fn header_only() {
        assert!(parse_projects(&format!("{}\n", header())).unwrap().is_empty());
    }

    #[test]
    fn one_row() {
        let recs = parse_projects(&format!("{}\n{}\n", header(), row("1234.5"))).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.id, "X1");
        assert_eq!(r.quality, QualityRating::B);
        assert_eq!(r.count_method, "IFPUG");
        assert_eq!(r.resource_level, 1);
        assert_eq!(r.breakdown.unwrap().total(), 15);
        assert_eq!(r.gsc, Some([3; GSC_COUNT]));
        assert_eq!(r.effort, 1234.5);
    }

    #[test]
    fn negative_effort_names_line() {
        let text = format!("{}\n{}\n{}\n", header(), row("10"), row("-5"));
        match parse_projects(&text) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("effort"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn column_errors() {
        let missing = header().replace(",effort_hours", "");
        assert!(matches!(parse_projects(&missing), Err(Error::Parse { line: 1, .. })));
        let unknown = format!("{},extra", header());
        assert!(matches!(parse_projects(&unknown), Err(Error::Parse { line: 1, .. })));
        let text = format!("{}\n{}\n", header(), row("ten"));
        assert!(matches!(parse_projects(&text), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn blank_cells_mark_incomplete() {
        let mut cells: Vec<String> = row("50").split(',').map(String::from).collect();
        cells[7] = String::new();
        let text = format!("{}\n{}\n", header(), cells.join(","));
        let recs = parse_projects(&text).unwrap();
        assert!(recs[0].breakdown.is_none());
        assert!(recs[0].gsc.is_some());
        assert!(filter_isbsg(&recs, &FilterCriteria::default()).is_empty());
    }

    #[test]
    fn gsc_out_of_range() {
        let text = format!("{}\n{}\n", header(), row("50").replacen(",3,", ",6,", 1));
        assert!(matches!(parse_projects(&text), Err(Error::Parse { line: 2, .. })));
    }

    fn record(id: &str) -> ProjectRecord {
        ProjectRecord {
            id: id.to_string(),
            quality: QualityRating::A,
            count_method: "IFPUG".into(),
            resource_level: 1,
            dev_type: "Re-development".into(),
            breakdown: Some(UfpBreakdown::from_vector(&[1; CELLS])),
            gsc: Some([0; GSC_COUNT]),
            effort: 100.0,
        }
    }

    #[test]
    fn filter_rules() {
        let c = FilterCriteria::default();
        assert!(c.accepts(&record("ok")));
        assert!(!c.accepts(&ProjectRecord { quality: QualityRating::C, ..record("c") }));
        assert!(!c.accepts(&ProjectRecord { count_method: "COSMIC-FFP".into(), ..record("f") }));
        assert!(!c.accepts(&ProjectRecord { resource_level: 2, ..record("r") }));
        assert!(!c.accepts(&ProjectRecord { dev_type: "Enhancement".into(), ..record("e") }));
        assert!(!c.accepts(&ProjectRecord { gsc: None, ..record("g") }));
    }

    #[test]
    fn split_sizes_and_errors() {
        let recs: Vec<_> = (0..184).map(|i| record(&i.to_string())).collect();
        let (train, test) = split(&recs, &SplitSpec { seed: 1, train_count: 100 }).unwrap();
        assert_eq!((train.len(), test.len()), (100, 84));
        assert!(split(&recs, &SplitSpec { seed: 1, train_count: 0 }).is_err());
        assert!(split(&recs, &SplitSpec { seed: 1, train_count: 184 }).is_err());
    }

    #[test]
    fn outliers_on_exact_data_and_infinite_k() {
        let spec = SyntheticSpec { project_count: 30, ..Default::default() };
        let recs = gen_synthetic(&spec).unwrap();
        let model = RegressionModel::from_coefficients(spec.a, spec.b).unwrap();
        let w = &spec.hidden_weights;
        assert!(detect_outliers(&recs, &model, w, 2.5).unwrap().is_empty());
        assert!(detect_outliers(&recs, &model, w, f64::INFINITY).unwrap().is_empty());
        assert!(detect_outliers(&recs[..2], &model, w, 2.5).is_err());
    }

    #[test]
    fn synthetic_noise_free_is_exact() {
        let spec = SyntheticSpec { project_count: 50, seed: 3, ..Default::default() };
        for r in gen_synthetic(&spec).unwrap() {
            let ufp = compute_ufp(&r.breakdown.unwrap(), &spec.hidden_weights);
            assert_eq!(r.effort, spec.a * ufp.powf(spec.b));
        }
    }

    #[test]
    fn synthetic_spec_validation() {
        assert!(gen_synthetic(&SyntheticSpec { count_max: 0, ..Default::default() }).is_err());
        assert!(gen_synthetic(&SyntheticSpec { a: 0.0, ..Default::default() }).is_err());
        assert!(gen_synthetic(&SyntheticSpec { noise_sigma: -1.0, ..Default::default() }).is_err());
        assert!(gen_synthetic(&SyntheticSpec { project_count: 0, ..Default::default() }).is_err());
    }

    #[test]
    fn estimate_inputs() {
        let comps = parse_estimate_input("kind,det,secondary\nILF,50,3\nEI, 4, 1\n").unwrap();
        assert_eq!(
            comps,
            EstimateInput::Components(vec![
                ComponentRecord::new(ComponentKind::ILF, 50, 3).unwrap(),
                ComponentRecord::new(ComponentKind::EI, 4, 1).unwrap(),
            ])
        );
        let header = BREAKDOWN_COLUMNS.join(",");
        let row = "0,0,0,0,0,0,0,0,0,0,1,0,0,0,0";
        match parse_estimate_input(&format!("{header}\n{row}\n")).unwrap() {
            EstimateInput::Breakdowns(rows) => {
                assert_eq!(rows.len(), 1);
                assert_eq!(rows[0].0, "1");
                assert_eq!(rows[0].1.get(ComponentKind::ILF, crate::fp_model::ComplexityLevel::Average), 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_estimate_input("kind,det,secondary\nXYZ,1,1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse_estimate_input("a,b\n1,2\n").is_err());
    }

}
