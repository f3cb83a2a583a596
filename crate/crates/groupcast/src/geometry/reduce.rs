//! Redundancy removal and containment testing, both decided by exact LP.

use std::collections::BTreeMap;

use crate::geometry::lp::{maximize_rows, LpOutcome};
use crate::geometry::{HPolytope, LinearInequality};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// True iff `row` is implied by `poly`: the maximum of the row's left-hand
/// side over `poly` does not exceed the row's bound. An empty `poly` implies
/// every row; an unbounded maximum means the row is not implied.
pub fn is_redundant(row: &LinearInequality, poly: &HPolytope) -> Result<bool> {
    for name in row.coeffs().keys() {
        if poly.var_index(name).is_none() {
            return Err(Error::Domain(format!(
                "row references undeclared variable {name:?}"
            )));
        }
    }
    let (a, b) = poly.dense();
    let refs: Vec<(&[Rat], &Rat)> = a
        .iter()
        .zip(b.iter())
        .map(|(r, v)| (r.as_slice(), v))
        .collect();
    Ok(row_redundant_dense(row, poly, &refs))
}

fn row_redundant_dense(row: &LinearInequality, poly: &HPolytope, rows: &[(&[Rat], &Rat)]) -> bool {
    let mut c = vec![rat::zero(); poly.dim()];
    for (name, coeff) in row.coeffs() {
        c[poly.var_index(name).expect("validated")] = coeff.clone();
    }
    match maximize_rows(rows, &c) {
        LpOutcome::Optimal { value, .. } => value <= *row.rhs(),
        LpOutcome::Infeasible { .. } => true,
        LpOutcome::Unbounded { .. } => false,
    }
}

/// Removes every redundant row, preserving the point set exactly. Trivial rows
/// (`0 ≤ nonnegative`) and duplicates go first; each surviving row is then
/// LP-tested against all other survivors in order. Idempotent, deterministic.
pub fn minimize(poly: &HPolytope) -> HPolytope {
    let deduped = poly.dedup_rows();
    let rows: Vec<&LinearInequality> = deduped.rows().iter().filter(|r| !r.is_trivial()).collect();
    let (a, b) = {
        let tmp = HPolytope::new(
            deduped.variables().to_vec(),
            rows.iter().map(|r| (*r).clone()).collect(),
        )
        .expect("rows already validated");
        tmp.dense()
    };

    let mut keep = vec![true; rows.len()];
    for i in 0..rows.len() {
        keep[i] = false;
        let subset: Vec<(&[Rat], &Rat)> = (0..rows.len())
            .filter(|j| keep[*j])
            .map(|j| (a[j].as_slice(), &b[j]))
            .collect();
        if !row_redundant_dense(rows[i], &deduped, &subset) {
            keep[i] = true;
        }
    }

    let kept: Vec<LinearInequality> = rows
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(r, _)| (*r).clone())
        .collect();
    HPolytope::new(deduped.variables().to_vec(), kept).expect("subset of validated rows")
}

/// Outcome of a containment test. A failure carries a rational witness point
/// of the inner polytope together with the violated outer row.
#[derive(Clone, Debug)]
pub enum Containment {
    Contained,
    Violated {
        point: BTreeMap<String, Rat>,
        row: LinearInequality,
        lhs: Rat,
    },
}

impl Containment {
    pub fn holds(&self) -> bool {
        matches!(self, Containment::Contained)
    }
}

/// Decides whether every point of `inner` satisfies every row of `outer`, by
/// maximizing each outer row over `inner`. Both systems must be over the same
/// variable set (order may differ).
pub fn contains(outer: &HPolytope, inner: &HPolytope) -> Result<Containment> {
    let mut ov: Vec<&String> = outer.variables().iter().collect();
    let mut iv: Vec<&String> = inner.variables().iter().collect();
    ov.sort();
    iv.sort();
    if ov != iv {
        return Err(Error::Domain(
            "containment requires identical variable sets".into(),
        ));
    }

    let (a, b) = inner.dense();
    let refs: Vec<(&[Rat], &Rat)> = a
        .iter()
        .zip(b.iter())
        .map(|(r, v)| (r.as_slice(), v))
        .collect();

    for row in outer.rows() {
        let mut c = vec![rat::zero(); inner.dim()];
        for (name, coeff) in row.coeffs() {
            c[inner.var_index(name).expect("same variable set")] = coeff.clone();
        }
        match maximize_rows(&refs, &c) {
            LpOutcome::Optimal { value, point } => {
                if value > *row.rhs() {
                    let point: BTreeMap<String, Rat> =
                        inner.variables().iter().cloned().zip(point).collect();
                    return Ok(Containment::Violated {
                        point,
                        row: row.clone(),
                        lhs: value,
                    });
                }
            }
            LpOutcome::Infeasible { .. } => return Ok(Containment::Contained),
            LpOutcome::Unbounded { ray } => {
                // Walk far enough along the improving ray from a feasible
                // point to violate the row.
                let base = match maximize_rows(&refs, &vec![rat::zero(); inner.dim()]) {
                    LpOutcome::Optimal { point, .. } => point,
                    _ => unreachable!("unbounded implies feasible"),
                };
                let row_of = |x: &[Rat]| -> Rat {
                    let mut acc = rat::zero();
                    for (name, coeff) in row.coeffs() {
                        acc += coeff * &x[inner.var_index(name).expect("same variable set")];
                    }
                    acc
                };
                let base_val = row_of(&base);
                let ray_val = row_of(&ray);
                debug_assert!(ray_val > rat::zero());
                // t with base_val + t·ray_val = rhs + 1.
                let t = (row.rhs() + rat::int(1) - &base_val) / &ray_val;
                let t = if t > rat::zero() { t } else { rat::int(1) };
                let coords: Vec<Rat> = base.iter().zip(&ray).map(|(x, d)| x + &t * d).collect();
                let lhs = row_of(&coords);
                let point: BTreeMap<String, Rat> =
                    inner.variables().iter().cloned().zip(coords).collect();
                debug_assert!(inner.satisfied_by(&point));
                return Ok(Containment::Violated {
                    point,
                    row: row.clone(),
                    lhs,
                });
            }
        }
    }
    Ok(Containment::Contained)
}

/// Point-set equality via double containment.
pub fn equal_point_sets(a: &HPolytope, b: &HPolytope) -> Result<bool> {
    Ok(contains(a, b)?.holds() && contains(b, a)?.holds())
}
