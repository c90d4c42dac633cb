//! Mamdani fuzzy inference over DET and RET/FTR counts.
//!
//! Each axis of a kind's complexity matrix becomes three trapezoidal sets
//! (small, medium, large) that cross at 0.5 halfway between the last count
//! of one crisp range and the first count of the next. The nine cells of the
//! matrix become nine rules whose consequents are triangular sets centred on
//! the Low/Average/High weights. Inference clips each consequent at its rule
//! activation, aggregates by pointwise max and defuzzifies by centroid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp_model::{ComplexityLevel, ComplexityMatrix, ComponentKind, ComponentRecord, WeightTable};

pub const DEFAULT_SPREAD: f64 = 0.15;
pub const DEFAULT_CENTROID_SAMPLES: usize = 10_001;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FuzzyConfig {
    /// Ramp half-width as a fraction of the crossover point.
    pub spread: f64,
    /// Uniform samples used for centroid integration.
    pub centroid_samples: usize,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig {
            spread: DEFAULT_SPREAD,
            centroid_samples: DEFAULT_CENTROID_SAMPLES,
        }
    }
}

/// Trapezoidal membership: 0 outside `[a, d]`, 1 on `[b, c]`, linear ramps
/// between. `c` and `d` may be `+inf` for a right shoulder.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapezoidSet {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl TrapezoidSet {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if !(a <= b && b <= c && c <= d) || a.is_nan() || a.is_infinite() {
            return Err(Error::config(format!(
                "trapezoid breakpoints must satisfy a <= b <= c <= d, got ({a}, {b}, {c}, {d})"
            )));
        }
        Ok(TrapezoidSet { a, b, c, d })
    }

    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.d {
            0.0
        } else if x < self.b {
            (x - self.a) / (self.b - self.a)
        } else if x <= self.c {
            1.0
        } else {
            (self.d - x) / (self.d - self.c)
        }
    }
}

/// Small / medium / large sets along one axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisSets(pub [TrapezoidSet; 3]);

impl AxisSets {
    /// Builds the three sets for the crisp cut points `cuts` (each the first
    /// count of the next range).
    fn from_cuts(cuts: [u32; 2], spread: f64) -> Result<Self> {
        let t = cuts.map(|c| f64::from(c) - 0.5);
        let h = t.map(|t| (spread * t).max(0.5));
        let small = TrapezoidSet::new(0.0, 0.0, t[0] - h[0], t[0] + h[0]);
        let medium = TrapezoidSet::new(t[0] - h[0], t[0] + h[0], t[1] - h[1], t[1] + h[1]);
        let large = TrapezoidSet::new(t[1] - h[1], t[1] + h[1], f64::INFINITY, f64::INFINITY);
        match (small, medium, large) {
            (Ok(s), Ok(m), Ok(l)) => Ok(AxisSets([s, m, l])),
            _ => Err(Error::config(format!(
                "spread {spread} makes the ramps around cuts {cuts:?} overlap"
            ))),
        }
    }

    pub fn memberships(&self, x: f64) -> [f64; 3] {
        self.0.map(|s| s.membership(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KindPartition {
    pub det: AxisSets,
    pub secondary: AxisSets,
}

/// Input sets for every kind, in [`ComponentKind::ALL`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyInputPartition {
    kinds: [KindPartition; 5],
}

impl FuzzyInputPartition {
    pub fn for_kind(&self, kind: ComponentKind) -> &KindPartition {
        &self.kinds[kind.index()]
    }
}

pub fn build_partitions(matrix: &ComplexityMatrix, spread: f64) -> Result<FuzzyInputPartition> {
    if !(spread > 0.0 && spread < 0.5) {
        return Err(Error::config(format!("spread must lie in (0, 0.5), got {spread}")));
    }
    let mut kinds = Vec::with_capacity(5);
    for kind in ComponentKind::ALL {
        let m = matrix.for_kind(kind);
        kinds.push(KindPartition {
            det: AxisSets::from_cuts(m.det_cuts, spread)?,
            secondary: AxisSets::from_cuts(m.secondary_cuts, spread)?,
        });
    }
    Ok(FuzzyInputPartition {
        kinds: kinds.try_into().expect("five kinds"),
    })
}

/// Symmetric triangle on `[center - half_width, center + half_width]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleOutputSet {
    pub center: f64,
    pub half_width: f64,
}

impl TriangleOutputSet {
    pub fn membership(&self, y: f64) -> f64 {
        (1.0 - (y - self.center).abs() / self.half_width).max(0.0)
    }
}

pub fn build_outputs(kind: ComponentKind, table: &WeightTable) -> Result<[TriangleOutputSet; 3]> {
    let [lo, avg, hi] = table.row(kind);
    let (g1, g2) = (avg - lo, hi - avg);
    if !(g1 > 0.0 && g2 > 0.0) {
        return Err(Error::config(format!(
            "{kind}: output sets need distinct weights, got ({lo}, {avg}, {hi})"
        )));
    }
    Ok([
        TriangleOutputSet { center: lo, half_width: g1 / 2.0 },
        TriangleOutputSet { center: avg, half_width: g1.min(g2) / 2.0 },
        TriangleOutputSet { center: hi, half_width: g2 / 2.0 },
    ])
}

/// Consequent sets for every kind.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyOutputs {
    kinds: [[TriangleOutputSet; 3]; 5],
}

impl FuzzyOutputs {
    pub fn from_table(table: &WeightTable) -> Result<Self> {
        let mut kinds = [[TriangleOutputSet { center: 0.0, half_width: 1.0 }; 3]; 5];
        for kind in ComponentKind::ALL {
            kinds[kind.index()] = build_outputs(kind, table)?;
        }
        Ok(FuzzyOutputs { kinds })
    }

    pub fn for_kind(&self, kind: ComponentKind) -> &[TriangleOutputSet; 3] {
        &self.kinds[kind.index()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FuzzyRule {
    pub det_set: usize,
    pub secondary_set: usize,
    pub output: ComplexityLevel,
}

/// Nine rules per kind, one per complexity matrix cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzyRuleBase {
    kinds: [[FuzzyRule; 9]; 5],
}

impl FuzzyRuleBase {
    pub fn from_matrix(matrix: &ComplexityMatrix) -> Self {
        let kinds = ComponentKind::ALL.map(|kind| {
            let grid = matrix.for_kind(kind).grid;
            std::array::from_fn(|i| FuzzyRule {
                det_set: i % 3,
                secondary_set: i / 3,
                output: grid[i / 3][i % 3],
            })
        });
        FuzzyRuleBase { kinds }
    }

    pub fn for_kind(&self, kind: ComponentKind) -> &[FuzzyRule; 9] {
        &self.kinds[kind.index()]
    }
}

/// Defuzzified component weight.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct FuzzyWeight(pub f64);

impl FuzzyWeight {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Per-level activation: max over the rules concluding that level of the
/// min of their two antecedent memberships.
pub fn level_activations(
    kind: ComponentKind,
    det: f64,
    secondary: f64,
    partition: &FuzzyInputPartition,
    rules: &FuzzyRuleBase,
) -> [f64; 3] {
    let p = partition.for_kind(kind);
    let mu_det = p.det.memberships(det);
    let mu_sec = p.secondary.memberships(secondary);
    let mut act = [0.0f64; 3];
    for rule in rules.for_kind(kind) {
        let fire = mu_det[rule.det_set].min(mu_sec[rule.secondary_set]);
        let slot = &mut act[rule.output.index()];
        *slot = slot.max(fire);
    }
    act
}

/// Centroid of `max_k min(act[k], set_k(y))` by the trapezoid rule on
/// `samples` uniform points spanning every set's support.
pub fn centroid(sets: &[TriangleOutputSet; 3], act: &[f64; 3], samples: usize) -> Result<f64> {
    if samples < 3 {
        return Err(Error::config(format!("centroid needs at least 3 samples, got {samples}")));
    }
    let max_hw = sets.iter().map(|s| s.half_width).fold(0.0, f64::max);
    let min_center = sets.iter().map(|s| s.center).fold(f64::INFINITY, f64::min);
    let max_center = sets.iter().map(|s| s.center).fold(f64::NEG_INFINITY, f64::max);
    let (lo, hi) = (min_center - max_hw, max_center + max_hw);
    let step = (hi - lo) / (samples - 1) as f64;

    let mut moment = 0.0;
    let mut area = 0.0;
    for i in 0..samples {
        let y = lo + step * i as f64;
        let mu = sets
            .iter()
            .zip(act)
            .map(|(s, &a)| a.min(s.membership(y)))
            .fold(0.0, f64::max);
        let w = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
        moment += w * mu * y;
        area += w * mu;
    }
    if area <= 0.0 {
        return Err(Error::numeric("no rule fired; aggregate output set is empty"));
    }
    // each clipped set is symmetric about its centre, so the exact centroid
    // lies between the outer centres; quadrature error may not leave them
    Ok((moment / area).clamp(min_center, max_center))
}

#[allow(clippy::too_many_arguments)]
pub fn infer_weight(
    kind: ComponentKind,
    det: f64,
    secondary: f64,
    partition: &FuzzyInputPartition,
    rules: &FuzzyRuleBase,
    outputs: &FuzzyOutputs,
    samples: usize,
) -> Result<FuzzyWeight> {
    if !(det.is_finite() && det >= 1.0) {
        return Err(Error::invalid(format!("{kind}: DET must be at least 1, got {det}")));
    }
    if !(secondary.is_finite() && secondary >= f64::from(kind.min_secondary())) {
        return Err(Error::invalid(format!(
            "{kind}: secondary count must be at least {}, got {secondary}",
            kind.min_secondary()
        )));
    }
    let act = level_activations(kind, det, secondary, partition, rules);
    centroid(outputs.for_kind(kind), &act, samples).map(FuzzyWeight)
}

pub fn fuzzy_ufp(
    components: &[ComponentRecord],
    partition: &FuzzyInputPartition,
    rules: &FuzzyRuleBase,
    outputs: &FuzzyOutputs,
    samples: usize,
) -> Result<f64> {
    let mut total = 0.0;
    for (i, c) in components.iter().enumerate() {
        let w = infer_weight(
            c.kind,
            f64::from(c.det),
            f64::from(c.secondary),
            partition,
            rules,
            outputs,
            samples,
        )
        .map_err(|e| Error::at(i, e))?;
        total += w.value();
    }
    Ok(total)
}

/// Partition, rules and outputs built together from one matrix and table.
#[derive(Clone, Debug)]
pub struct FuzzySystem {
    pub partition: FuzzyInputPartition,
    pub rules: FuzzyRuleBase,
    pub outputs: FuzzyOutputs,
    pub samples: usize,
}

impl FuzzySystem {
    pub fn new(matrix: &ComplexityMatrix, table: &WeightTable, config: &FuzzyConfig) -> Result<Self> {
        Ok(FuzzySystem {
            partition: build_partitions(matrix, config.spread)?,
            rules: FuzzyRuleBase::from_matrix(matrix),
            outputs: FuzzyOutputs::from_table(table)?,
            samples: config.centroid_samples,
        })
    }

    pub fn infer(&self, kind: ComponentKind, det: f64, secondary: f64) -> Result<FuzzyWeight> {
        infer_weight(kind, det, secondary, &self.partition, &self.rules, &self.outputs, self.samples)
    }

    pub fn ufp(&self, components: &[ComponentRecord]) -> Result<f64> {
        fuzzy_ufp(components, &self.partition, &self.rules, &self.outputs, self.samples)
    }
}
