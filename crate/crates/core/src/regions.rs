//! Determinacy maps over two-parameter policy grids.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{Calibration, Variant};
use crate::error::{ModelError, Result};
use crate::model::Economy;
use crate::perturbation::{classify_economy, Classification};
use crate::variables::VariableIndex;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Axis {
        Axis {
            name: name.to_string(),
            min,
            max,
            steps,
        }
    }

    /// Grid value at index `i`; both ends included. A single step sits at
    /// `min`.
    pub fn value(&self, i: usize) -> f64 {
        if self.steps <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    fn validate(&self, allow_single: bool) -> Result<()> {
        if Calibration::default().get(&self.name).is_none() {
            return Err(ModelError::Config(format!("unknown grid parameter '{}'", self.name)));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(ModelError::Config(format!("range of '{}' is not finite", self.name)));
        }
        if self.steps < 2 && !(allow_single && self.steps == 1) {
            return Err(ModelError::Config(format!(
                "axis '{}' needs at least 2 steps, got {}",
                self.name, self.steps
            )));
        }
        Ok(())
    }
}

impl FromStr for Axis {
    type Err = ModelError;

    /// Parses `NAME:MIN:MAX:STEPS`.
    fn from_str(s: &str) -> Result<Axis> {
        let bad = || ModelError::Config(format!("grid axis '{s}' is not NAME:MIN:MAX:STEPS"));
        let parts: Vec<&str> = s.split(':').collect();
        let [name, min, max, steps] = parts.as_slice() else {
            return Err(bad());
        };
        Ok(Axis {
            name: name.to_string(),
            min: min.parse().map_err(|_| bad())?,
            max: max.parse().map_err(|_| bad())?,
            steps: steps.parse().map_err(|_| bad())?,
        })
    }
}

/// Parameters the two-agent economy overrides.
const PINNED_BY_TWO_AGENT: [&str; 7] = [
    "pop_K", "pop_S", "pop_H", "lambda_KK", "lambda_KH", "lambda_HK", "lambda_SS",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub axis1: Axis,
    pub axis2: Axis,
    /// Parameter values applied before the axis values.
    pub overrides: BTreeMap<String, f64>,
    pub variant: Variant,
}

impl GridSpec {
    pub fn new(axis1: Axis, axis2: Axis, variant: Variant) -> GridSpec {
        GridSpec {
            axis1,
            axis2,
            overrides: BTreeMap::new(),
            variant,
        }
    }

    /// 40 by 40 grid of the inflation response against the tax response to
    /// debt.
    pub fn policy_default(variant: Variant) -> GridSpec {
        GridSpec::new(
            Axis::new("phi_pi", 0.2, 2.0, 40),
            Axis::new("gamma_T", 0.0, 1.5, 40),
            variant,
        )
    }

    /// 40 by 40 grid of the inflation response against the hand-to-mouth
    /// share.
    pub fn population_default(variant: Variant) -> GridSpec {
        GridSpec::new(
            Axis::new("phi_pi", 0.2, 2.0, 40),
            Axis::new("pop_H", 0.05, 0.45, 40),
            variant,
        )
    }

    /// Steps below 2 are rejected unless both axes are single points.
    pub fn validate(&self) -> Result<()> {
        let single = self.axis1.steps == 1 && self.axis2.steps == 1;
        self.axis1.validate(single)?;
        self.axis2.validate(single)?;
        if self.axis1.name == self.axis2.name {
            return Err(ModelError::Config("grid axes must differ".into()));
        }
        if self.variant.agents == crate::calibration::AgentCount::Two {
            for name in [&self.axis1.name, &self.axis2.name] {
                if PINNED_BY_TWO_AGENT.contains(&name.as_str()) {
                    return Err(ModelError::Config(format!(
                        "'{name}' is fixed in the two-agent economy and cannot be scanned"
                    )));
                }
            }
        }
        for name in self.overrides.keys() {
            if Calibration::default().get(name).is_none() {
                return Err(ModelError::Config(format!("unknown override '{name}'")));
            }
        }
        self.variant.validate()
    }

    pub fn n_cells(&self) -> usize {
        self.axis1.steps * self.axis2.steps
    }

    /// Calibration at cell `(i, j)`.
    pub fn calibration_at(&self, base: &Calibration, i: usize, j: usize) -> Result<Calibration> {
        let mut cal = *base;
        for (name, value) in &self.overrides {
            cal.set(name, *value)?;
        }
        cal.set(&self.axis1.name, self.axis1.value(i))?;
        cal.set(&self.axis2.name, self.axis2.value(j))?;
        Ok(cal)
    }
}

/// Classification of a grid cell, with a fourth label for points without a
/// valid steady state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellLabel {
    Determinate,
    Indeterminate,
    Explosive,
    Infeasible,
}

impl CellLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CellLabel::Determinate => "determinate",
            CellLabel::Indeterminate => "indeterminate",
            CellLabel::Explosive => "explosive",
            CellLabel::Infeasible => "infeasible",
        }
    }
}

impl fmt::Display for CellLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<Classification> for CellLabel {
    fn from(c: Classification) -> Self {
        match c {
            Classification::Determinate => CellLabel::Determinate,
            Classification::Indeterminate => CellLabel::Indeterminate,
            Classification::Explosive => CellLabel::Explosive,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
    pub axis1_value: f64,
    pub axis2_value: f64,
    pub label: CellLabel,
    /// Absent for infeasible cells.
    pub n_explosive: Option<usize>,
    pub n_predetermined: usize,
    pub boundary_warning: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminacyMap {
    pub grid: GridSpec,
    /// Row-major in `axis1`: cell `(i, j)` sits at `i * axis2.steps + j`.
    pub cells: Vec<Cell>,
}

impl DeterminacyMap {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.grid.axis2.steps + j]
    }

    pub fn label(&self, i: usize, j: usize) -> CellLabel {
        self.cell(i, j).label
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.grid.axis1.steps, self.grid.axis2.steps)
    }
}

/// Classifies a single parameter point.
pub fn classify_point(cal: &Calibration, variant: Variant) -> Result<(Classification, crate::perturbation::EigenReport)> {
    let econ = Economy::new(cal, variant)?;
    classify_economy(&econ)
}

fn evaluate_cell(grid: &GridSpec, base: &Calibration, i: usize, j: usize) -> Cell {
    let n_predetermined = VariableIndex::default().n_predetermined();
    let mut cell = Cell {
        i,
        j,
        axis1_value: grid.axis1.value(i),
        axis2_value: grid.axis2.value(j),
        label: CellLabel::Infeasible,
        n_explosive: None,
        n_predetermined,
        boundary_warning: false,
        reason: None,
    };
    match grid
        .calibration_at(base, i, j)
        .and_then(|cal| classify_point(&cal, grid.variant))
    {
        Ok((class, report)) => {
            cell.label = class.into();
            cell.n_explosive = Some(report.n_explosive);
            cell.boundary_warning = report.boundary_warning;
        }
        Err(e) => cell.reason = Some(e.to_string()),
    }
    cell
}

/// Classifies every grid cell in parallel. Failures at individual cells
/// are recorded as infeasible; the result does not depend on scheduling.
pub fn scan(grid: &GridSpec, base: &Calibration) -> Result<DeterminacyMap> {
    grid.validate()?;
    let n2 = grid.axis2.steps;
    let cells: Vec<Cell> = (0..grid.n_cells())
        .into_par_iter()
        .map(|k| evaluate_cell(grid, base, k / n2, k % n2))
        .collect();
    Ok(DeterminacyMap {
        grid: grid.clone(),
        cells,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionSummary {
    pub counts: BTreeMap<CellLabel, usize>,
    /// Cells with a 4-neighbour of a different label, as `(i, j)`.
    pub boundary: Vec<(usize, usize)>,
}

pub fn region_summary(map: &DeterminacyMap) -> RegionSummary {
    let mut counts = BTreeMap::new();
    for c in &map.cells {
        *counts.entry(c.label).or_insert(0) += 1;
    }
    let (n1, n2) = map.shape();
    let mut boundary = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let here = map.label(i, j);
            let differs = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().any(|(di, dj)| {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                a >= 0
                    && b >= 0
                    && (a as usize) < n1
                    && (b as usize) < n2
                    && map.label(a as usize, b as usize) != here
            });
            if differs {
                boundary.push((i, j));
            }
        }
    }
    RegionSummary { counts, boundary }
}
