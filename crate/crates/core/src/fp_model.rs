//! Crisp IFPUG function point model.
//!
//! Components are classified to a [`ComplexityLevel`] by looking up their
//! DET count and their RET (data functions) or FTR (transactions) count in a
//! per-kind 3×3 [`KindMatrix`]. Each (kind, level) pair carries a weight, and
//! the unadjusted function point count is the weighted sum of how many
//! components fell in each of the fifteen cells.
//!
//! Cut points are stored as the *first* count of the next range, so the ILF
//! DET ranges `1-19 / 20-50 / 51+` are written `det_cuts = [20, 51]`.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of (kind, level) cells.
pub const CELLS: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    /// External input.
    EI,
    /// External output.
    EO,
    /// External inquiry.
    EQ,
    /// Internal logical file.
    ILF,
    /// External interface file.
    EIF,
}

impl ComponentKind {
    /// Canonical serialization order.
    pub const ALL: [ComponentKind; 5] = [
        ComponentKind::EI,
        ComponentKind::EO,
        ComponentKind::EQ,
        ComponentKind::ILF,
        ComponentKind::EIF,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::EI => "EI",
            ComponentKind::EO => "EO",
            ComponentKind::EQ => "EQ",
            ComponentKind::ILF => "ILF",
            ComponentKind::EIF => "EIF",
        }
    }

    /// ILF and EIF count record element types; the transactions count files
    /// referenced.
    pub fn is_data_function(self) -> bool {
        matches!(self, ComponentKind::ILF | ComponentKind::EIF)
    }

    /// Smallest valid secondary (RET/FTR) count.
    pub fn min_secondary(self) -> u32 {
        if self.is_data_function() {
            1
        } else {
            0
        }
    }
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "EI" => Ok(ComponentKind::EI),
            "EO" => Ok(ComponentKind::EO),
            "EQ" => Ok(ComponentKind::EQ),
            "ILF" => Ok(ComponentKind::ILF),
            "EIF" => Ok(ComponentKind::EIF),
            other => Err(Error::invalid(format!("unknown component kind {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexityLevel {
    Low,
    Average,
    High,
}

impl ComplexityLevel {
    pub const ALL: [ComplexityLevel; 3] = [
        ComplexityLevel::Low,
        ComplexityLevel::Average,
        ComplexityLevel::High,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

/// Flat index of a (kind, level) cell in `0..CELLS`.
pub fn cell_index(kind: ComponentKind, level: ComplexityLevel) -> usize {
    kind.index() * 3 + level.index()
}

/// One counted function point component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub kind: ComponentKind,
    /// Data element types.
    pub det: u32,
    /// Record element types for ILF/EIF, file types referenced otherwise.
    pub secondary: u32,
}

impl ComponentRecord {
    pub fn new(kind: ComponentKind, det: u32, secondary: u32) -> Result<Self> {
        let rec = ComponentRecord {
            kind,
            det,
            secondary,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn validate(&self) -> Result<()> {
        check_counts(self.kind, self.det, self.secondary)
    }
}

fn check_counts(kind: ComponentKind, det: u32, secondary: u32) -> Result<()> {
    if det < 1 {
        return Err(Error::invalid(format!("{kind}: DET must be at least 1, got {det}")));
    }
    if secondary < kind.min_secondary() {
        return Err(Error::invalid(format!(
            "{kind}: {} must be at least {}, got {secondary}",
            if kind.is_data_function() { "RET" } else { "FTR" },
            kind.min_secondary()
        )));
    }
    Ok(())
}

/// Complexity lookup for one component kind.
///
/// `grid[s][d]` is the level for secondary range `s` and DET range `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindMatrix {
    pub det_cuts: [u32; 2],
    pub secondary_cuts: [u32; 2],
    pub grid: [[ComplexityLevel; 3]; 3],
}

use ComplexityLevel::{Average as A, High as H, Low as L};

const STANDARD_GRID: [[ComplexityLevel; 3]; 3] = [[L, L, A], [L, A, H], [A, H, H]];

impl KindMatrix {
    /// IFPUG matrix for ILF and EIF: RET 1 / 2-5 / 6+ by DET 1-19 / 20-50 / 51+.
    pub fn ifpug_data_function() -> Self {
        KindMatrix {
            det_cuts: [20, 51],
            secondary_cuts: [2, 6],
            grid: STANDARD_GRID,
        }
    }

    /// IFPUG external input matrix: FTR 0-1 / 2 / 3+ by DET 1-4 / 5-15 / 16+.
    pub fn ifpug_external_input() -> Self {
        KindMatrix {
            det_cuts: [5, 16],
            secondary_cuts: [2, 3],
            grid: STANDARD_GRID,
        }
    }

    /// IFPUG external output / inquiry matrix: FTR 0-1 / 2-3 / 4+ by
    /// DET 1-5 / 6-19 / 20+.
    pub fn ifpug_external_output() -> Self {
        KindMatrix {
            det_cuts: [6, 20],
            secondary_cuts: [2, 4],
            grid: STANDARD_GRID,
        }
    }

    fn validate(&self, kind: ComponentKind) -> Result<()> {
        let [d0, d1] = self.det_cuts;
        let [s0, s1] = self.secondary_cuts;
        if !(d0 > 1 && d0 < d1) {
            return Err(Error::config(format!(
                "{kind}: det_cuts must be ascending and above 1, got {:?}",
                self.det_cuts
            )));
        }
        if !(s0 > kind.min_secondary() && s0 < s1) {
            return Err(Error::config(format!(
                "{kind}: secondary_cuts must be ascending and above {}, got {:?}",
                kind.min_secondary(),
                self.secondary_cuts
            )));
        }
        for s in 0..3 {
            for d in 0..3 {
                let here = self.grid[s][d];
                if (d > 0 && self.grid[s][d - 1] > here) || (s > 0 && self.grid[s - 1][d] > here) {
                    return Err(Error::config(format!(
                        "{kind}: complexity grid must be nondecreasing along both axes"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn det_range(&self, det: u32) -> usize {
        range_of(det, self.det_cuts)
    }

    pub fn secondary_range(&self, secondary: u32) -> usize {
        range_of(secondary, self.secondary_cuts)
    }
}

fn range_of(value: u32, cuts: [u32; 2]) -> usize {
    cuts.iter().filter(|&&c| value >= c).count()
}

/// Complexity matrices for all five kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityMatrix {
    kinds: [KindMatrix; 5],
}

impl Default for ComplexityMatrix {
    fn default() -> Self {
        ComplexityMatrix {
            kinds: [
                KindMatrix::ifpug_external_input(),
                KindMatrix::ifpug_external_output(),
                KindMatrix::ifpug_external_output(),
                KindMatrix::ifpug_data_function(),
                KindMatrix::ifpug_data_function(),
            ],
        }
    }
}

impl ComplexityMatrix {
    /// Matrices in [`ComponentKind::ALL`] order.
    pub fn new(kinds: [KindMatrix; 5]) -> Result<Self> {
        for (kind, m) in ComponentKind::ALL.iter().zip(&kinds) {
            m.validate(*kind)?;
        }
        Ok(ComplexityMatrix { kinds })
    }

    pub fn for_kind(&self, kind: ComponentKind) -> &KindMatrix {
        &self.kinds[kind.index()]
    }

    pub fn classify(&self, kind: ComponentKind, det: u32, secondary: u32) -> Result<ComplexityLevel> {
        check_counts(kind, det, secondary)?;
        let m = self.for_kind(kind);
        Ok(m.grid[m.secondary_range(secondary)][m.det_range(det)])
    }
}

/// The fifteen unadjusted function point weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightTable {
    w: [[f64; 3]; 5],
}

impl Default for WeightTable {
    /// Albrecht's original weights.
    fn default() -> Self {
        WeightTable {
            w: [
                [3.0, 4.0, 6.0],
                [4.0, 5.0, 7.0],
                [3.0, 4.0, 6.0],
                [7.0, 10.0, 15.0],
                [5.0, 7.0, 10.0],
            ],
        }
    }
}

impl WeightTable {
    /// Rows in [`ComponentKind::ALL`] order, columns Low, Average, High.
    pub fn new(w: [[f64; 3]; 5]) -> Result<Self> {
        let table = WeightTable { w };
        table.validate()?;
        Ok(table)
    }

    pub fn from_vector(v: &[f64; CELLS]) -> Result<Self> {
        let mut w = [[0.0; 3]; 5];
        for (j, &x) in v.iter().enumerate() {
            w[j / 3][j % 3] = x;
        }
        Self::new(w)
    }

    pub(crate) fn from_vector_unchecked(v: &[f64; CELLS]) -> Self {
        let mut w = [[0.0; 3]; 5];
        for (j, &x) in v.iter().enumerate() {
            w[j / 3][j % 3] = x;
        }
        WeightTable { w }
    }

    pub fn validate(&self) -> Result<()> {
        for kind in ComponentKind::ALL {
            let row = self.w[kind.index()];
            if row.iter().any(|x| !x.is_finite() || *x <= 0.0) {
                return Err(Error::config(format!("{kind}: weights must be positive, got {row:?}")));
            }
            if !(row[0] <= row[1] && row[1] <= row[2]) {
                return Err(Error::config(format!(
                    "{kind}: weights must satisfy Low <= Average <= High, got {row:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn weight(&self, kind: ComponentKind, level: ComplexityLevel) -> f64 {
        self.w[kind.index()][level.index()]
    }

    pub fn row(&self, kind: ComponentKind) -> [f64; 3] {
        self.w[kind.index()]
    }

    pub fn as_vector(&self) -> [f64; CELLS] {
        let mut v = [0.0; CELLS];
        for (j, x) in v.iter_mut().enumerate() {
            *x = self.w[j / 3][j % 3];
        }
        v
    }

    /// Entrywise mean absolute deviation from `other`.
    pub fn mean_abs_deviation(&self, other: &WeightTable) -> f64 {
        let a = self.as_vector();
        let b = other.as_vector();
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>() / CELLS as f64
    }

    /// Entrywise arithmetic mean of a nonempty list of tables.
    pub fn mean(tables: &[WeightTable]) -> Result<WeightTable> {
        if tables.is_empty() {
            return Err(Error::invalid("cannot average an empty list of weight tables"));
        }
        let mut acc = [0.0; CELLS];
        for t in tables {
            for (a, x) in acc.iter_mut().zip(t.as_vector()) {
                *a += x;
            }
        }
        acc.iter_mut().for_each(|a| *a /= tables.len() as f64);
        WeightTable::from_vector(&acc)
    }
}

/// Component counts per (kind, level) cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct UfpBreakdown {
    n: [[u32; 3]; 5],
}

impl UfpBreakdown {
    pub fn new(n: [[u32; 3]; 5]) -> Self {
        UfpBreakdown { n }
    }

    pub fn from_vector(v: &[u32; CELLS]) -> Self {
        let mut n = [[0; 3]; 5];
        for (j, &x) in v.iter().enumerate() {
            n[j / 3][j % 3] = x;
        }
        UfpBreakdown { n }
    }

    pub fn get(&self, kind: ComponentKind, level: ComplexityLevel) -> u32 {
        self.n[kind.index()][level.index()]
    }

    pub fn set(&mut self, kind: ComponentKind, level: ComplexityLevel, count: u32) {
        self.n[kind.index()][level.index()] = count;
    }

    pub fn counts(&self) -> [u32; CELLS] {
        let mut v = [0; CELLS];
        for (j, x) in v.iter_mut().enumerate() {
            *x = self.n[j / 3][j % 3];
        }
        v
    }

    pub fn as_f64(&self) -> [f64; CELLS] {
        self.counts().map(f64::from)
    }

    pub fn total(&self) -> u64 {
        self.counts().iter().map(|&x| u64::from(x)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }
}

impl AddAssign for UfpBreakdown {
    fn add_assign(&mut self, rhs: Self) {
        for (row, other) in self.n.iter_mut().zip(rhs.n) {
            for (x, y) in row.iter_mut().zip(other) {
                *x += y;
            }
        }
    }
}

impl Add for UfpBreakdown {
    type Output = UfpBreakdown;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

pub fn classify(
    kind: ComponentKind,
    det: u32,
    secondary: u32,
    matrix: &ComplexityMatrix,
) -> Result<ComplexityLevel> {
    matrix.classify(kind, det, secondary)
}

pub fn weight_of(kind: ComponentKind, level: ComplexityLevel, table: &WeightTable) -> f64 {
    table.weight(kind, level)
}

pub fn breakdown_from_components(
    components: &[ComponentRecord],
    matrix: &ComplexityMatrix,
) -> Result<UfpBreakdown> {
    let mut out = UfpBreakdown::default();
    for (i, c) in components.iter().enumerate() {
        let level = matrix
            .classify(c.kind, c.det, c.secondary)
            .map_err(|e| Error::at(i, e))?;
        out.n[c.kind.index()][level.index()] += 1;
    }
    Ok(out)
}

pub fn compute_ufp(breakdown: &UfpBreakdown, table: &WeightTable) -> f64 {
    breakdown
        .as_f64()
        .iter()
        .zip(table.as_vector())
        .map(|(n, w)| n * w)
        .sum()
}

// JSON documents: {"EI": {...}, "EO": {...}, ...} in canonical kind order.

#[derive(Serialize, Deserialize)]
struct PerKind<T> {
    #[serde(rename = "EI")]
    ei: T,
    #[serde(rename = "EO")]
    eo: T,
    #[serde(rename = "EQ")]
    eq: T,
    #[serde(rename = "ILF")]
    ilf: T,
    #[serde(rename = "EIF")]
    eif: T,
}

impl<T> PerKind<T> {
    fn from_array([ei, eo, eq, ilf, eif]: [T; 5]) -> Self {
        PerKind { ei, eo, eq, ilf, eif }
    }

    fn into_array(self) -> [T; 5] {
        [self.ei, self.eo, self.eq, self.ilf, self.eif]
    }
}

#[derive(Serialize, Deserialize)]
struct LevelWeights {
    low: f64,
    average: f64,
    high: f64,
}

impl Serialize for WeightTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PerKind::from_array(self.w.map(|[low, average, high]| LevelWeights { low, average, high })).serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightTable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PerKind::<LevelWeights>::deserialize(d)?;
        let w = doc.into_array().map(|l| [l.low, l.average, l.high]);
        WeightTable::new(w).map_err(serde::de::Error::custom)
    }
}

impl Serialize for ComplexityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PerKind::from_array(self.kinds.clone()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = PerKind::<KindMatrix>::deserialize(d)?;
        ComplexityMatrix::new(doc.into_array()).map_err(serde::de::Error::custom)
    }
}
