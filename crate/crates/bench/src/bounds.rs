use qae_core::estimators::theoretical_bounds;
use serde::{Deserialize, Serialize};

use crate::plan::BoundsPlan;
use crate::LabResult;

pub const BOUNDS_FILE: &str = "bounds.csv";

/// One row of `bounds.csv`. Column order is the field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub epsilon: f64,
    pub alpha: f64,
    pub mlae_lower: f64,
    pub cp_upper: f64,
    pub iqae_upper: f64,
    pub fae_upper: f64,
    /// Monte Carlo with `s_n = 1`.
    pub cmc: f64,
}

pub fn run_bounds(plan: &BoundsPlan) -> LabResult<Vec<BoundsRow>> {
    plan.epsilons
        .iter()
        .map(|&epsilon| {
            let b = theoretical_bounds(plan.alpha, epsilon)?;
            Ok(BoundsRow {
                epsilon,
                alpha: plan.alpha,
                mlae_lower: b.mlae_lower,
                cp_upper: b.cp_upper,
                iqae_upper: b.iqae_upper,
                fae_upper: b.fae_upper,
                cmc: b.cmc_unit,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[BoundsRow]) -> LabResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
        .map_err(|e| crate::LabError::io(std::path::Path::new(BOUNDS_FILE), e))?;
    Ok(w.into_inner().expect("flushed"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_the_grid() {
        let rows = run_bounds(&BoundsPlan::default()).unwrap();
        assert_eq!(rows.len(), BoundsPlan::default().epsilons.len());
        let text = String::from_utf8(to_csv(&rows).unwrap()).unwrap();
        assert!(text.starts_with("epsilon,alpha,mlae_lower,cp_upper,iqae_upper,fae_upper,cmc\n"));
    }
}
