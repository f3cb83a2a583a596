//! Vertex enumeration for low-dimensional bounded H-polytopes by exhaustive
//! basis enumeration: every square subsystem that is invertible and whose
//! solution satisfies all rows yields a candidate vertex.

use num_traits::Zero;

use crate::geometry::lp::{maximize_rows, LpOutcome};
use crate::geometry::{minimize, HPolytope};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Dimension cap; beyond this the basis enumeration is not worth running.
pub const MAX_VERTEX_DIM: usize = 6;

const MAX_BASES: u64 = 5_000_000;

/// Enumerates the vertices of a bounded polytope of dimension at most
/// [`MAX_VERTEX_DIM`]. Returns them sorted lexicographically in variable
/// order; an empty polytope has no vertices.
pub fn enumerate_vertices(poly: &HPolytope) -> Result<Vec<Vec<Rat>>> {
    let n = poly.dim();
    if n > MAX_VERTEX_DIM {
        return Err(Error::Capability(format!(
            "vertex enumeration supports dimension <= {MAX_VERTEX_DIM}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }

    let reduced = minimize(poly);
    let (a, b) = reduced.dense();
    let refs: Vec<(&[Rat], &Rat)> = a
        .iter()
        .zip(b.iter())
        .map(|(r, v)| (r.as_slice(), v))
        .collect();

    // Boundedness check: every coordinate must have a finite max and min.
    for i in 0..n {
        for sign in [1i64, -1] {
            let mut c = vec![rat::zero(); n];
            c[i] = rat::int(sign);
            match maximize_rows(&refs, &c) {
                LpOutcome::Optimal { .. } => {}
                LpOutcome::Infeasible { .. } => return Ok(Vec::new()),
                LpOutcome::Unbounded { .. } => {
                    return Err(Error::Unbounded(format!(
                        "variable {} has no finite {}",
                        reduced.variables()[i],
                        if sign > 0 { "maximum" } else { "minimum" }
                    )))
                }
            }
        }
    }

    let m = a.len();
    if m < n {
        // Bounded implies at least n rows; reaching here means numerical
        // nonsense happened.
        return Err(Error::Internal(
            "bounded polytope with fewer rows than dimensions".into(),
        ));
    }
    if binomial(m as u64, n as u64) > MAX_BASES {
        return Err(Error::Capability(format!(
            "vertex enumeration over {m} rows in dimension {n} exceeds the basis budget"
        )));
    }

    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        if let Some(x) = solve_square(&a, &b, &subset) {
            let feasible = a
                .iter()
                .zip(b.iter())
                .all(|(row, rhs)| dot(row, &x) <= *rhs);
            if feasible && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
        if !next_subset(&mut subset, m) {
            break;
        }
    }
    vertices.sort();
    Ok(vertices)
}

/// Exact solution of the square system `a[subset]·x = b[subset]`, or `None`
/// when the chosen rows are linearly dependent.
fn solve_square(a: &[Vec<Rat>], b: &[Rat], subset: &[usize]) -> Option<Vec<Rat>> {
    let n = subset.len();
    let mut mat: Vec<Vec<Rat>> = subset
        .iter()
        .map(|&i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !mat[r][col].is_zero())?;
        mat.swap(col, pivot_row);
        let pivot = mat[col][col].clone();
        for k in col..=n {
            mat[col][k] /= &pivot;
        }
        for r in 0..n {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].clone();
            for k in col..=n {
                let delta = &factor * &mat[col][k];
                mat[r][k] -= delta;
            }
        }
    }
    Some(
        mat.into_iter()
            .map(|row| row[row.len() - 1].clone())
            .collect(),
    )
}

fn dot(a: &[Rat], x: &[Rat]) -> Rat {
    let mut acc = rat::zero();
    for (c, v) in a.iter().zip(x) {
        if !c.is_zero() && !v.is_zero() {
            acc += c * v;
        }
    }
    acc
}

fn next_subset(subset: &mut [usize], m: usize) -> bool {
    let n = subset.len();
    let mut i = n;
    while i > 0 {
        i -= 1;
        if subset[i] < m - (n - i) {
            subset[i] += 1;
            for j in i + 1..n {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn binomial(m: u64, n: u64) -> u64 {
    if n > m {
        return 0;
    }
    let mut acc: u64 = 1;
    for i in 0..n {
        acc = acc.saturating_mul(m - i) / (i + 1);
    }
    acc
}
