use std::collections::BTreeSet;

use threeagent_core::regions::{
    classify_point, region_summary, scan, Axis, CellLabel, DeterminacyMap, GridSpec,
};
use threeagent_core::{Calibration, FiscalMode, Variant};

fn policy_grid(variant: Variant, n1: usize, n2: usize, gamma_min: f64) -> GridSpec {
    GridSpec::new(
        Axis::new("phi_pi", 0.2, 2.0, n1),
        Axis::new("gamma_T", gamma_min, 1.5, n2),
        variant,
    )
}

fn unstable(label: CellLabel) -> bool {
    matches!(label, CellLabel::Indeterminate | CellLabel::Explosive)
}

/// Number of connected components of the cells satisfying `keep`, with
/// 4- or 8-neighbourhoods.
fn components_with(map: &DeterminacyMap, diagonal: bool, keep: impl Fn(usize, usize) -> bool) -> usize {
    let (n1, n2) = map.shape();
    let mut seen = vec![vec![false; n2]; n1];
    let mut count = 0;
    for i in 0..n1 {
        for j in 0..n2 {
            if seen[i][j] || !keep(i, j) {
                continue;
            }
            count += 1;
            let mut stack = vec![(i, j)];
            seen[i][j] = true;
            while let Some((a, b)) = stack.pop() {
                for (da, db) in [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (-1, 1), (1, -1), (1, 1)] {
                    if !diagonal && da != 0 && db != 0 {
                        continue;
                    }
                    let (x, y) = (a as isize + da, b as isize + db);
                    if x < 0 || y < 0 || x as usize >= n1 || y as usize >= n2 {
                        continue;
                    }
                    let (x, y) = (x as usize, y as usize);
                    if !seen[x][y] && keep(x, y) {
                        seen[x][y] = true;
                        stack.push((x, y));
                    }
                }
            }
        }
    }
    count
}

fn components(map: &DeterminacyMap, keep: impl Fn(usize, usize) -> bool) -> usize {
    components_with(map, false, keep)
}

#[test]
fn repeated_scans_are_identical() {
    let base = Calibration::default();
    let grid = policy_grid(Variant::THREE, 9, 7, 0.0);
    let first = scan(&grid, &base).unwrap();
    let second = scan(&grid, &base).unwrap();
    assert_eq!(first.cells, second.cells);
}

#[test]
fn cells_match_standalone_classification() {
    let base = Calibration::default();
    for fiscal in [FiscalMode::Nominal, FiscalMode::Real] {
        let variant = Variant::THREE.with_fiscal(fiscal);
        let grid = policy_grid(variant, 5, 4, 0.0);
        let map = scan(&grid, &base).unwrap();
        for cell in &map.cells {
            let cal = grid.calibration_at(&base, cell.i, cell.j).unwrap();
            let (class, report) = classify_point(&cal, variant).unwrap();
            assert_eq!(cell.label, CellLabel::from(class), "cell ({}, {})", cell.i, cell.j);
            assert_eq!(cell.n_explosive, Some(report.n_explosive));
        }
    }
}

#[test]
fn baseline_single_cell() {
    let grid = GridSpec::new(
        Axis::new("phi_pi", 0.8, 0.8, 1),
        Axis::new("gamma_T", 1.0, 1.0, 1),
        Variant::THREE,
    );
    let map = scan(&grid, &Calibration::default()).unwrap();
    assert_eq!(map.cells.len(), 1);
    assert_eq!(map.cells[0].label, CellLabel::Determinate);
}

#[test]
fn nominal_map_splits_into_two_contiguous_regions() {
    let base = Calibration::default();
    let grid = policy_grid(Variant::THREE, 40, 40, 0.05);
    let map = scan(&grid, &base).unwrap();
    let (n1, n2) = map.shape();

    assert!(map.cells.iter().all(|c| c.label != CellLabel::Infeasible));
    assert_eq!(components(&map, |i, j| map.label(i, j) == CellLabel::Determinate), 1);
    assert_eq!(components(&map, |i, j| unstable(map.label(i, j))), 1);

    // Instability sits below the determinate region in every column.
    for i in 0..n1 {
        let first_det = (0..n2).find(|&j| map.label(i, j) == CellLabel::Determinate).unwrap();
        assert!((first_det..n2).all(|j| map.label(i, j) == CellLabel::Determinate), "column {i}");
    }
    let top_unstable = map
        .cells
        .iter()
        .filter(|c| unstable(c.label))
        .map(|c| c.axis2_value)
        .fold(0.0_f64, f64::max);
    assert!(top_unstable < 0.6, "unstable up to gamma_T = {top_unstable}");

    // Regression snapshot of the default nominal map.
    let summary = region_summary(&map);
    assert_eq!(summary.counts[&CellLabel::Determinate], 1362);
    assert_eq!(summary.counts[&CellLabel::Explosive], 228);
    assert_eq!(summary.counts[&CellLabel::Indeterminate], 10);
}

#[test]
fn boundary_of_two_region_map_is_connected() {
    let base = Calibration::default();
    let grid = policy_grid(Variant::THREE, 40, 40, 0.05);
    let map = scan(&grid, &base).unwrap();
    let det = |i: usize, j: usize| map.label(i, j) == CellLabel::Determinate;
    let boundary: BTreeSet<(usize, usize)> = region_summary(&map).boundary.into_iter().collect();
    assert!(!boundary.is_empty());

    // Oracle: the determinate cells touching an unstable cell, and vice
    // versa, recomputed independently.
    let (n1, n2) = map.shape();
    let mut oracle = BTreeSet::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let here = det(i, j);
            let nbrs = [
                (i.wrapping_sub(1), j),
                (i + 1, j),
                (i, j.wrapping_sub(1)),
                (i, j + 1),
            ];
            if nbrs
                .iter()
                .any(|&(a, b)| a < n1 && b < n2 && det(a, b) != here)
            {
                oracle.insert((i, j));
            }
        }
    }
    assert!(oracle.is_subset(&boundary));
    let det_side = |i: usize, j: usize| oracle.contains(&(i, j)) && det(i, j);
    // A boundary curve may step diagonally between cells.
    assert_eq!(components_with(&map, true, det_side), 1, "determinate side of the boundary");
}

#[test]
fn real_fiscal_rules_give_four_leeper_regions() {
    let base = Calibration::default();
    let variant = Variant::THREE.with_fiscal(FiscalMode::Real);
    let grid = policy_grid(variant, 40, 40, 0.0);
    let map = scan(&grid, &base).unwrap();
    let (n1, n2) = map.shape();
    // (passive money, active fiscal), (active, active), (passive, passive), (active, passive)
    assert_eq!(map.label(0, 0), CellLabel::Determinate);
    assert_eq!(map.label(n1 - 1, 0), CellLabel::Explosive);
    assert_eq!(map.label(0, n2 - 1), CellLabel::Indeterminate);
    assert_eq!(map.label(n1 - 1, n2 - 1), CellLabel::Determinate);
    let counts = region_summary(&map).counts;
    assert!(counts.keys().filter(|l| **l != CellLabel::Infeasible).count() == 3);
    assert_eq!(components(&map, |i, j| map.label(i, j) == CellLabel::Determinate), 2);
}

#[test]
fn two_agent_nominal_has_no_inverted_taylor_region() {
    let base = Calibration::default();
    let grid = policy_grid(Variant::TWO, 40, 40, 0.05);
    let map = scan(&grid, &base).unwrap();
    // The indeterminacy threshold drifts slightly above one only where
    // taxes barely respond to debt.
    for c in &map.cells {
        if c.label == CellLabel::Indeterminate && c.axis1_value > 1.0 {
            assert!(c.axis1_value < 1.05 && c.axis2_value < 0.1, "({}, {})", c.axis1_value, c.axis2_value);
        }
    }
    assert!(map
        .cells
        .iter()
        .filter(|c| c.axis2_value >= 0.1 && c.axis1_value > 1.0)
        .all(|c| c.label != CellLabel::Indeterminate));
}

#[test]
fn population_scan_marks_infeasible_shares() {
    let base = Calibration::default();
    let grid = GridSpec::population_default(Variant::THREE);
    let map = scan(&grid, &base).unwrap();
    // lambda_SK turns negative once pop_H passes about 0.378.
    for c in &map.cells {
        assert_eq!(c.label == CellLabel::Infeasible, c.reason.is_some());
        if c.axis2_value > 0.38 {
            assert_eq!(c.label, CellLabel::Infeasible, "pop_H = {}", c.axis2_value);
        } else if c.axis2_value < 0.377 {
            assert_eq!(c.label, CellLabel::Determinate, "pop_H = {}", c.axis2_value);
        }
    }
    let (n1, n2) = map.shape();
    for i in 0..n1 {
        let first = (0..n2).find(|&j| map.label(i, j) == CellLabel::Infeasible).unwrap();
        assert!((first..n2).all(|j| map.label(i, j) == CellLabel::Infeasible));
    }
}
