//! Exact rational linear programming.
//!
//! The public problem is `max cᵀx  s.t.  Ax ≤ b` with free variables. It is
//! solved through its dual `min bᵀy  s.t.  Aᵀy = c, y ≥ 0`, whose row count is
//! the (small) variable count of the polytope, so the revised simplex keeps a
//! tiny basis no matter how many inequality rows the system has. Bland's rule
//! makes every pivot sequence finite; arithmetic is exact throughout.
//!
//! All three outcomes carry certificates:
//! - optimal: the optimal value and an optimal point (a vertex when the
//!   optimum is attained at one);
//! - unbounded: a ray `d` with `Ad ≤ 0` and `cᵀd > 0`;
//! - infeasible: multipliers `y ≥ 0` with `yᵀA = 0` and `yᵀb < 0`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::geometry::HPolytope;
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Result of an exact LP solve over an inequality system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Unbounded { ray: Vec<Rat> },
    Infeasible { certificate: Vec<Rat> },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

/// Maximizes (or minimizes) a linear objective over `poly`. The objective maps
/// variable names to coefficients; names must be declared in `poly`.
pub fn solve_lp(
    poly: &HPolytope,
    objective: &BTreeMap<String, Rat>,
    maximize: bool,
) -> Result<LpOutcome> {
    for name in objective.keys() {
        if poly.var_index(name).is_none() {
            return Err(Error::Domain(format!(
                "objective references undeclared variable {name:?}"
            )));
        }
    }
    let mut c = vec![rat::zero(); poly.dim()];
    for (name, coeff) in objective {
        c[poly.var_index(name).expect("checked above")] = coeff.clone();
    }
    if !maximize {
        for v in &mut c {
            *v = -v.clone();
        }
    }
    let (a, b) = poly.dense();
    let outcome = match maximize_dense(&a, &b, &c) {
        LpOutcome::Optimal { value, point } if !maximize => LpOutcome::Optimal {
            value: -value,
            point,
        },
        other => other,
    };
    Ok(outcome)
}

/// Maximizes `cᵀx` over `Ax ≤ b` in dense form.
pub(crate) fn maximize_dense(a: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpOutcome {
    let rows: Vec<(&[Rat], &Rat)> = a
        .iter()
        .zip(b.iter())
        .map(|(r, v)| (r.as_slice(), v))
        .collect();
    maximize_rows(&rows, c)
}

/// Maximizes `cᵀx` over the given `(row, rhs)` pairs. Rows may be any subset
/// of a larger system; callers use this to test one row against the others.
pub(crate) fn maximize_rows(rows: &[(&[Rat], &Rat)], c: &[Rat]) -> LpOutcome {
    let n = c.len();
    let m = rows.len();

    if n == 0 {
        // Constant system: every row reads 0 <= rhs.
        for (j, (_, rhs)) in rows.iter().enumerate() {
            if rhs.is_negative() {
                let mut cert = vec![rat::zero(); m];
                cert[j] = rat::int(1);
                return LpOutcome::Infeasible { certificate: cert };
            }
        }
        return LpOutcome::Optimal {
            value: rat::zero(),
            point: Vec::new(),
        };
    }
    if m == 0 {
        if c.iter().all(|v| v.is_zero()) {
            return LpOutcome::Optimal {
                value: rat::zero(),
                point: vec![rat::zero(); n],
            };
        }
        return LpOutcome::Unbounded { ray: c.to_vec() };
    }

    // Dual: min bᵀy s.t. Aᵀy = c, y ≥ 0. Columns of the equality problem are
    // the rows of A.
    let columns: Vec<Vec<Rat>> = rows.iter().map(|(r, _)| r.to_vec()).collect();
    let costs: Vec<Rat> = rows.iter().map(|(_, rhs)| (*rhs).clone()).collect();
    let problem = EqProblem {
        nrows: n,
        columns,
        costs,
        rhs: c.to_vec(),
    };

    match solve_eq_min(&problem) {
        EqOutcome::Optimal {
            value, multipliers, ..
        } => {
            debug_assert!(
                rows.iter()
                    .all(|(row, rhs)| &dot(row, &multipliers) <= *rhs),
                "dual multipliers must be primal feasible"
            );
            debug_assert_eq!(dot(c, &multipliers), value);
            LpOutcome::Optimal {
                value,
                point: multipliers,
            }
        }
        EqOutcome::Unbounded { ray } => {
            // y-ray with Aᵀ·ray = 0, bᵀ·ray < 0: Farkas certificate that
            // Ax ≤ b has no solution.
            debug_assert!(ray.iter().all(|v| !v.is_negative()));
            LpOutcome::Infeasible { certificate: ray }
        }
        EqOutcome::Infeasible { multipliers } => {
            // multipliers z satisfy A z ≤ 0 and cᵀz > 0: an improving ray if
            // the primal is feasible at all.
            debug_assert!(rows
                .iter()
                .all(|(row, _)| !dot(row, &multipliers).is_positive()));
            debug_assert!(dot(c, &multipliers).is_positive());
            match feasibility_certificate(rows, n) {
                None => LpOutcome::Unbounded { ray: multipliers },
                Some(cert) => LpOutcome::Infeasible { certificate: cert },
            }
        }
    }
}

/// Returns a Farkas certificate (`y ≥ 0`, `yᵀA = 0`, `yᵀb < 0`) when
/// `Ax ≤ b` is infeasible, `None` when it is feasible.
fn feasibility_certificate(rows: &[(&[Rat], &Rat)], n: usize) -> Option<Vec<Rat>> {
    let m = rows.len();
    // min bᵀy s.t. Aᵀy = 0, Σy = 1, y ≥ 0. The feasible set is bounded, so
    // the solve is never unbounded; infeasible means no normalized Farkas
    // vector exists, i.e. the primal system is feasible.
    let columns: Vec<Vec<Rat>> = rows
        .iter()
        .map(|(r, _)| {
            let mut col = r.to_vec();
            col.push(rat::int(1));
            col
        })
        .collect();
    let costs: Vec<Rat> = rows.iter().map(|(_, rhs)| (*rhs).clone()).collect();
    let mut rhs = vec![rat::zero(); n];
    rhs.push(rat::int(1));
    let problem = EqProblem {
        nrows: n + 1,
        columns,
        costs,
        rhs,
    };
    match solve_eq_min(&problem) {
        EqOutcome::Optimal {
            value, solution, ..
        } => {
            if value.is_negative() {
                debug_assert_eq!(solution.len(), m);
                Some(solution)
            } else {
                None
            }
        }
        EqOutcome::Infeasible { .. } => None,
        EqOutcome::Unbounded { .. } => {
            unreachable!("normalized Farkas program is bounded")
        }
    }
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = rat::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `min costᵀy  s.t.  Σ_j columns[j]·y_j = rhs, y ≥ 0`.
struct EqProblem {
    nrows: usize,
    columns: Vec<Vec<Rat>>,
    costs: Vec<Rat>,
    rhs: Vec<Rat>,
}

enum EqOutcome {
    Optimal {
        value: Rat,
        solution: Vec<Rat>,
        multipliers: Vec<Rat>,
    },
    /// Improving ray of the minimization: `ray ≥ 0`, `M·ray = 0`,
    /// `costᵀ·ray < 0`.
    Unbounded { ray: Vec<Rat> },
    /// Multipliers `π` with `πᵀM_j ≤ 0` for every column and `πᵀrhs > 0`.
    Infeasible { multipliers: Vec<Rat> },
}

/// Two-phase revised simplex with Bland's anti-cycling rule. The basis inverse
/// is kept densely; the row count is small by construction.
fn solve_eq_min(p: &EqProblem) -> EqOutcome {
    let r = p.nrows;
    let m = p.columns.len();
    debug_assert!(r >= 1);
    debug_assert!(p.columns.iter().all(|col| col.len() == r));
    debug_assert_eq!(p.rhs.len(), r);

    // Flip rows so the right-hand side is nonnegative; artificials then form a
    // feasible identity basis. `flip[i]` records the sign applied to row i.
    let flip: Vec<bool> = p.rhs.iter().map(|v| v.is_negative()).collect();
    let col_entry = |j: usize, i: usize| -> Rat {
        let v = if j < m {
            p.columns[j][i].clone()
        } else {
            // Artificial column j - m: unit vector in flipped space.
            if j - m == i {
                rat::int(1)
            } else {
                rat::zero()
            }
        };
        if j < m && flip[i] {
            -v
        } else {
            v
        }
    };

    let mut st = SimplexState {
        basis: (m..m + r).collect(),
        binv: identity(r),
        xb: p
            .rhs
            .iter()
            .map(|v| {
                if v.is_negative() {
                    -v.clone()
                } else {
                    v.clone()
                }
            })
            .collect(),
    };

    // Phase 1: drive the artificial sum to zero.
    let phase1_cost = |j: usize| -> Rat {
        if j < m {
            rat::zero()
        } else {
            rat::int(1)
        }
    };
    let outcome = run_simplex(&mut st, r, m + r, &col_entry, &phase1_cost, m + r);
    debug_assert!(
        matches!(outcome, RunOutcome::Optimal),
        "phase 1 is bounded below by zero"
    );
    let phase1_value = st
        .basis
        .iter()
        .zip(&st.xb)
        .filter(|(j, _)| **j >= m)
        .fold(rat::zero(), |acc, (_, v)| acc + v);
    if phase1_value.is_positive() {
        let pi = st.multipliers(r, &phase1_cost);
        // Unflip: multipliers for the original row orientation.
        let multipliers: Vec<Rat> = pi
            .into_iter()
            .zip(&flip)
            .map(|(v, f)| if *f { -v } else { v })
            .collect();
        return EqOutcome::Infeasible { multipliers };
    }

    // Pivot basic artificials out wherever a real column can replace them.
    // Any artificial that cannot be replaced sits on a linearly dependent row
    // whose transformed real entries are all zero, so no later pivot can move
    // it off zero; leaving it basic is harmless.
    for i in 0..r {
        if st.basis[i] < m {
            continue;
        }
        for j in 0..m {
            if st.basis.contains(&j) {
                continue;
            }
            let uj = st.transformed_entry(i, j, &col_entry);
            if !uj.is_zero() {
                let u = st.transformed_column(r, j, &col_entry);
                st.pivot(i, j, &u);
                break;
            }
        }
    }

    // Phase 2 on the real costs; artificials are barred from entering.
    let phase2_cost = |j: usize| -> Rat {
        if j < m {
            p.costs[j].clone()
        } else {
            rat::zero()
        }
    };
    match run_simplex(&mut st, r, m + r, &col_entry, &phase2_cost, m) {
        RunOutcome::Optimal => {
            let mut solution = vec![rat::zero(); m];
            let mut value = rat::zero();
            for (idx, j) in st.basis.iter().enumerate() {
                if *j < m {
                    value += &p.costs[*j] * &st.xb[idx];
                    solution[*j] = st.xb[idx].clone();
                }
            }
            let pi = st.multipliers(r, &phase2_cost);
            let multipliers: Vec<Rat> = pi
                .into_iter()
                .zip(&flip)
                .map(|(v, f)| if *f { -v } else { v })
                .collect();
            EqOutcome::Optimal {
                value,
                solution,
                multipliers,
            }
        }
        RunOutcome::Unbounded {
            entering,
            direction,
        } => {
            let mut ray = vec![rat::zero(); m];
            ray[entering] = rat::int(1);
            for (idx, j) in st.basis.iter().enumerate() {
                if *j < m {
                    ray[*j] = -direction[idx].clone();
                }
            }
            debug_assert!(ray.iter().all(|v| !v.is_negative()));
            EqOutcome::Unbounded { ray }
        }
    }
}

struct SimplexState {
    basis: Vec<usize>,
    binv: Vec<Vec<Rat>>,
    xb: Vec<Rat>,
}

enum RunOutcome {
    Optimal,
    Unbounded {
        entering: usize,
        direction: Vec<Rat>,
    },
}

impl SimplexState {
    /// `π` with `πᵀM_B = cost_B`, i.e. `π = binvᵀ·cost_B`.
    fn multipliers(&self, r: usize, cost: &dyn Fn(usize) -> Rat) -> Vec<Rat> {
        let mut pi = vec![rat::zero(); r];
        for (i, j) in self.basis.iter().enumerate() {
            let cb = cost(*j);
            if cb.is_zero() {
                continue;
            }
            for (k, pik) in pi.iter_mut().enumerate() {
                *pik += &cb * &self.binv[i][k];
            }
        }
        pi
    }

    /// Row `i` of `binv · M_j`.
    fn transformed_entry(
        &self,
        i: usize,
        j: usize,
        col_entry: &dyn Fn(usize, usize) -> Rat,
    ) -> Rat {
        let mut acc = rat::zero();
        for k in 0..self.binv[i].len() {
            let e = col_entry(j, k);
            if !e.is_zero() {
                acc += &self.binv[i][k] * e;
            }
        }
        acc
    }

    fn transformed_column(
        &self,
        r: usize,
        j: usize,
        col_entry: &dyn Fn(usize, usize) -> Rat,
    ) -> Vec<Rat> {
        (0..r)
            .map(|i| self.transformed_entry(i, j, col_entry))
            .collect()
    }

    /// Replaces the basic variable at position `row` by column `entering`,
    /// updating the basis inverse and the basic values in place.
    fn pivot(&mut self, row: usize, entering: usize, u: &[Rat]) {
        let pivot = u[row].clone();
        debug_assert!(!pivot.is_zero());
        let r = self.binv.len();
        for k in 0..r {
            self.binv[row][k] /= &pivot;
        }
        self.xb[row] /= &pivot;
        for i in 0..r {
            if i == row || u[i].is_zero() {
                continue;
            }
            let factor = u[i].clone();
            for k in 0..r {
                let delta = &factor * &self.binv[row][k];
                self.binv[i][k] -= delta;
            }
            let delta = &factor * &self.xb[row];
            self.xb[i] -= delta;
        }
        self.basis[row] = entering;
    }
}

/// Bland-rule simplex loop. Columns `0..enter_limit` may enter the basis.
fn run_simplex(
    st: &mut SimplexState,
    r: usize,
    ncols: usize,
    col_entry: &dyn Fn(usize, usize) -> Rat,
    cost: &dyn Fn(usize) -> Rat,
    enter_limit: usize,
) -> RunOutcome {
    loop {
        let pi = st.multipliers(r, cost);
        let mut entering = None;
        for j in 0..ncols.min(enter_limit) {
            if st.basis.contains(&j) {
                continue;
            }
            let mut reduced = cost(j);
            for (k, pik) in pi.iter().enumerate() {
                let e = col_entry(j, k);
                if !e.is_zero() {
                    reduced -= pik * e;
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(entering) = entering else {
            return RunOutcome::Optimal;
        };

        let u = st.transformed_column(r, entering, col_entry);
        let mut leave: Option<usize> = None;
        let mut best_ratio: Option<Rat> = None;
        for i in 0..r {
            if !u[i].is_positive() {
                continue;
            }
            let ratio = &st.xb[i] / &u[i];
            let better = match &best_ratio {
                None => true,
                Some(best) => {
                    ratio < *best
                        || (ratio == *best
                            && st.basis[i] < st.basis[leave.expect("set with best_ratio")])
                }
            };
            if better {
                best_ratio = Some(ratio);
                leave = Some(i);
            }
        }
        match leave {
            Some(row) => st.pivot(row, entering, &u),
            None => {
                return RunOutcome::Unbounded {
                    entering,
                    direction: u,
                }
            }
        }
    }
}

fn identity(r: usize) -> Vec<Vec<Rat>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { rat::int(1) } else { rat::zero() })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::LinearInequality;
    use crate::rat::{frac, int};

    fn poly(vars: &[&str], rows: Vec<LinearInequality>) -> HPolytope {
        HPolytope::new(vars.to_vec(), rows).unwrap()
    }

    fn obj(pairs: &[(&str, i64)]) -> BTreeMap<String, Rat> {
        pairs
            .iter()
            .map(|(n, c)| (n.to_string(), int(*c)))
            .collect()
    }

    #[test]
    fn bounded_maximum() {
        let p = poly(
            &["x"],
            vec![
                LinearInequality::from_ints(vec![("x", 1)], int(1)),
                LinearInequality::from_ints(vec![("x", -1)], int(0)),
            ],
        );
        match solve_lp(&p, &obj(&[("x", 1)]), true).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(1));
                assert_eq!(point, vec![int(1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn unbounded_with_ray() {
        let p = poly(
            &["x"],
            vec![LinearInequality::from_ints(vec![("x", -1)], int(0))],
        );
        match solve_lp(&p, &obj(&[("x", 1)]), true).unwrap() {
            LpOutcome::Unbounded { ray } => {
                assert!(ray[0].is_positive());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_with_certificate() {
        let p = poly(
            &["x"],
            vec![
                LinearInequality::from_ints(vec![("x", 1)], int(-1)),
                LinearInequality::from_ints(vec![("x", -1)], int(0)),
            ],
        );
        match solve_lp(&p, &obj(&[("x", 1)]), true).unwrap() {
            LpOutcome::Infeasible { certificate } => {
                // yᵀA = 0 and yᵀb < 0.
                let (a, b) = p.dense();
                let mut col = rat::zero();
                let mut val = rat::zero();
                for (y, (row, rhs)) in certificate.iter().zip(a.iter().zip(b.iter())) {
                    assert!(!y.is_negative());
                    col += y * &row[0];
                    val += y * rhs;
                }
                assert!(col.is_zero());
                assert!(val.is_negative());
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn minimize_flag() {
        let p = poly(
            &["x"],
            vec![
                LinearInequality::from_ints(vec![("x", 1)], int(5)),
                LinearInequality::from_ints(vec![("x", -1)], int(2)),
            ],
        );
        let out = solve_lp(&p, &obj(&[("x", 1)]), false).unwrap();
        assert_eq!(out.optimal_value(), Some(&int(-2)));
    }

    #[test]
    fn fractional_optimum_is_exact() {
        // max x + y s.t. 2x + 3y <= 7, x <= 2, y <= 3/2, x,y >= 0.
        let p = poly(
            &["x", "y"],
            vec![
                LinearInequality::from_ints(vec![("x", 2), ("y", 3)], int(7)),
                LinearInequality::from_ints(vec![("x", 1)], int(2)),
                LinearInequality::new(vec![("y", int(1))], frac(3, 2)),
                LinearInequality::from_ints(vec![("x", -1)], int(0)),
                LinearInequality::from_ints(vec![("y", -1)], int(0)),
            ],
        );
        match solve_lp(&p, &obj(&[("x", 1), ("y", 1)]), true).unwrap() {
            LpOutcome::Optimal { value, point } => {
                // Optimum sits at (2, 1): the y <= 3/2 corner only reaches 11/4.
                assert_eq!(value, int(3));
                assert_eq!(point, vec![int(2), int(1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn zero_objective_finds_feasible_point() {
        let p = poly(
            &["x", "y"],
            vec![
                LinearInequality::from_ints(vec![("x", 1), ("y", 1)], int(-3)),
                LinearInequality::from_ints(vec![("x", -1)], int(10)),
            ],
        );
        match solve_lp(&p, &BTreeMap::new(), true).unwrap() {
            LpOutcome::Optimal { point, .. } => {
                let map: BTreeMap<String, Rat> = p.variables().iter().cloned().zip(point).collect();
                assert!(p.satisfied_by(&map));
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn empty_system_is_unbounded() {
        let p = poly(&["x"], vec![]);
        assert!(matches!(
            solve_lp(&p, &obj(&[("x", 1)]), true).unwrap(),
            LpOutcome::Unbounded { .. }
        ));
        assert!(matches!(
            solve_lp(&p, &BTreeMap::new(), true).unwrap(),
            LpOutcome::Optimal { .. }
        ));
    }

    #[test]
    fn degenerate_system_terminates() {
        // Many redundant rows through the same vertex; Bland's rule must not
        // cycle.
        let mut rows = vec![
            LinearInequality::from_ints(vec![("x", 1), ("y", 1)], int(1)),
            LinearInequality::from_ints(vec![("x", 1), ("y", 2)], int(1)),
            LinearInequality::from_ints(vec![("x", 2), ("y", 1)], int(1)),
            LinearInequality::from_ints(vec![("x", -1)], int(0)),
            LinearInequality::from_ints(vec![("y", -1)], int(0)),
        ];
        rows.push(LinearInequality::from_ints(
            vec![("x", 3), ("y", 1)],
            int(1),
        ));
        let p = poly(&["x", "y"], rows);
        let out = solve_lp(&p, &obj(&[("x", 1), ("y", 1)]), true).unwrap();
        assert!(matches!(out, LpOutcome::Optimal { .. }));
    }

    #[test]
    fn objective_must_use_declared_variables() {
        let p = poly(&["x"], vec![]);
        assert!(solve_lp(&p, &obj(&[("z", 1)]), true).is_err());
    }

    #[test]
    fn unconstrained_variable_paths() {
        // y appears in no row: its dual row is all zeros, leaving an
        // artificial stuck in the basis. Optimizing x must still work, and
        // optimizing y must report an improving ray along y.
        let p = poly(
            &["x", "y"],
            vec![LinearInequality::from_ints(vec![("x", 1)], int(1))],
        );
        match solve_lp(&p, &obj(&[("x", 1)]), true).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(1));
                assert_eq!(point[0], int(1));
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        match solve_lp(&p, &obj(&[("y", 1)]), true).unwrap() {
            LpOutcome::Unbounded { ray } => {
                assert_eq!(ray[0], int(0));
                assert!(ray[1].is_positive());
            }
            other => panic!("expected unbounded, got {other:?}"),
        }
    }
}
