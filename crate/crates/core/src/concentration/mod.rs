//! Discrete measures, stacks, thickness, constant budgets, coarse-dimension
//! witnesses and boundary-mass scans.

mod budget;
mod coarse;
mod measure;
mod scan;
mod stack;
mod thick;

pub use budget::{budget_big_q, budget_q, BudgetParams};
pub use coarse::{
    brute_shell_intersection, coarse_dim_bound, coarse_dim_witness_check, exhaustive_packing, greedy_packing,
    packing_volume_bound, random_witness_config, shell_intersection, witness_threshold, CoarseDimReport, PackingSource,
    ThresholdReport,
};
pub use measure::DiscreteMeasure;
pub use scan::{
    boundary_ratio_scan, circle_measure, dyadic_schedule, Boundary, ScanMeasure, ScanReport, ScanRow, ScanSeries,
};
pub use stack::{GrowthMode, Stack, StackBuilder};
pub use thick::{onion_measure, thick_center_mass, thickness_fraction, ThickCenters};
