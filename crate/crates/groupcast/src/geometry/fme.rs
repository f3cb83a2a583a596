//! Fourier-Motzkin elimination: exact orthogonal projection of an inequality
//! system along one coordinate.

use num_traits::{Signed, Zero};

use crate::geometry::{minimize, HPolytope, LinearInequality};
use crate::{Error, Result};

/// Projects `poly` onto the variables other than `var` by pairing every lower
/// bound on `var` with every upper bound, then removing redundant rows. The
/// resulting point set is exactly `{x : ∃ v, (x, v) ∈ poly}`; empty and
/// unbounded inputs are legal.
pub fn fme_eliminate(poly: &HPolytope, var: &str) -> Result<HPolytope> {
    Ok(minimize(&fme_eliminate_raw(poly, var)?))
}

/// The raw pairing step without redundancy removal (duplicates are still
/// collapsed). Exposed to let pipelines count rows before minimization.
pub(crate) fn fme_eliminate_raw(poly: &HPolytope, var: &str) -> Result<HPolytope> {
    if poly.var_index(var).is_none() {
        return Err(Error::Domain(format!("unknown variable {var:?}")));
    }

    let mut upper: Vec<&LinearInequality> = Vec::new(); // positive coefficient on var
    let mut lower: Vec<&LinearInequality> = Vec::new(); // negative coefficient on var
    let mut rest: Vec<LinearInequality> = Vec::new();
    for row in poly.rows() {
        let c = row.coeff(var);
        if c.is_positive() {
            upper.push(row);
        } else if c.is_negative() {
            lower.push(row);
        } else {
            rest.push(row.clone());
        }
    }

    let mut rows = rest;
    for lo in &lower {
        let lo_c = lo.coeff(var); // negative
        for up in &upper {
            let up_c = up.coeff(var); // positive
                                      // up_c·lo + (−lo_c)·up cancels var; both multipliers positive.
            let mut coeffs: Vec<(String, _)> = Vec::new();
            for (name, c) in lo.coeffs() {
                coeffs.push((name.clone(), c * &up_c));
            }
            for (name, c) in up.coeffs() {
                coeffs.push((name.clone(), c * &(-lo_c.clone())));
            }
            let rhs = lo.rhs() * &up_c + up.rhs() * &(-lo_c.clone());
            let row = LinearInequality::new(coeffs, rhs);
            debug_assert!(row.coeff(var).is_zero());
            if !row.is_trivial() {
                rows.push(row);
            }
        }
    }

    let variables: Vec<String> = poly
        .variables()
        .iter()
        .filter(|v| v.as_str() != var)
        .cloned()
        .collect();
    Ok(HPolytope::new(variables, rows)?.dedup_rows())
}
