//! Rows of the extremal-value table.

use serde::{Deserialize, Serialize};

use crate::bell::qubit_chsh_t;
use crate::bounds::{cube_bell_lhv, lhv_exact_generic, AnnealConfig};
use crate::field::PrimeDim;
use crate::operators::CubeParams;
use crate::phase_space::{
    c_min, extremal_character_scan, max_negativity, negativity_volume, wigner_rotated_bell_closed,
};
use crate::{Error, Result};

/// Dimensions the table is defined for.
pub const TABLE_DIMS: [u64; 9] = [2, 3, 5, 7, 11, 13, 17, 19, 23];

/// One row. For `d = 2` the columns hold the qubit quantities: `max W`, `N`,
/// `8 min W`, `−1/√2` and the qubit lhv maximum divided by 16.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub d: u64,
    pub max_w_scaled: f64,
    pub max_negativity: f64,
    pub min_w_scaled: f64,
    pub c_min: f64,
    pub b_lhv: f64,
    /// `"exact"`, `"anneal"` or `"qubit"`.
    pub method: String,
}

impl Table1Row {
    pub const HEADER: [&'static str; 7] = [
        "d", "d2_max_w", "max_n", "d3_min_w", "c_min", "b_lhv", "method",
    ];
}

/// Computes one row; `anneal` is used for `d ≥ 11`.
pub fn table1_row(d: PrimeDim, anneal: &AnnealConfig) -> Result<Table1Row> {
    if !TABLE_DIMS.contains(&d.get()) {
        return Err(Error::Domain(format!(
            "dimension {} is outside the table range {:?}",
            d.get(),
            TABLE_DIMS
        )));
    }
    if d.get() == 2 {
        return qubit_row();
    }
    let scan = extremal_character_scan(d)?;
    let (n, _) = max_negativity(d)?;
    let lhv = cube_bell_lhv(d, anneal)?;
    Ok(Table1Row {
        d: d.get(),
        max_w_scaled: scan.max_scaled,
        max_negativity: n,
        min_w_scaled: scan.min_scaled,
        c_min: c_min(d),
        b_lhv: lhv.bound,
        method: lhv.method,
    })
}

fn qubit_row() -> Result<Table1Row> {
    let d = PrimeDim::new(2)?;
    let w = wigner_rotated_bell_closed(&CubeParams::new(1, 0, 0, d)?);
    let (lhv, _) = lhv_exact_generic(&qubit_chsh_t())?;
    Ok(Table1Row {
        d: 2,
        max_w_scaled: w.max_re(),
        max_negativity: negativity_volume(&w)?,
        min_w_scaled: 8.0 * w.min_re(),
        c_min: c_min(d),
        b_lhv: lhv / 16.0,
        method: "qubit".into(),
    })
}
