//! Linear inequalities over named rational variables, and finite systems of
//! them (H-polytopes). All rows have sense `≤`; lower bounds are expressed by
//! negating coefficients. Nonnegativity is never implicit: a system with zero
//! rows is all of space.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{self, Rat};
use crate::{Error, Result};

/// A single row `Σ coeffs[v]·v ≤ rhs`. Zero coefficients are omitted and the
/// row is kept normalized: coefficients are scaled to coprime integers (the
/// right-hand side scales along and may stay fractional).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearInequality {
    coeffs: BTreeMap<String, Rat>,
    rhs: Rat,
}

impl LinearInequality {
    pub fn new<I, S>(coeffs: I, rhs: Rat) -> Self
    where
        I: IntoIterator<Item = (S, Rat)>,
        S: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (name, c) in coeffs {
            if !c.is_zero() {
                let entry = map.entry(name.into()).or_insert_with(rat::zero);
                *entry += c;
            }
        }
        map.retain(|_, c| !c.is_zero());
        let mut row = LinearInequality { coeffs: map, rhs };
        row.normalize();
        row
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_ints<S: Into<String>>(coeffs: Vec<(S, i64)>, rhs: Rat) -> Self {
        LinearInequality::new(coeffs.into_iter().map(|(n, c)| (n, rat::int(c))), rhs)
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Rat> {
        &self.coeffs
    }

    pub fn coeff(&self, var: &str) -> Rat {
        self.coeffs.get(var).cloned().unwrap_or_else(rat::zero)
    }

    pub fn rhs(&self) -> &Rat {
        &self.rhs
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.is_empty() && !self.rhs.is_negative()
    }

    /// An all-zero left-hand side with negative right-hand side: the row is
    /// unsatisfiable on its own.
    pub fn is_contradiction(&self) -> bool {
        self.coeffs.is_empty() && self.rhs.is_negative()
    }

    /// Scales the row by the positive rational that makes all coefficients
    /// coprime integers. No-op for all-zero rows.
    fn normalize(&mut self) {
        if self.coeffs.is_empty() {
            return;
        }
        let mut denom_lcm = BigInt::one();
        for c in self.coeffs.values() {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let mut numer_gcd = BigInt::zero();
        for c in self.coeffs.values() {
            let scaled = c.numer() * (&denom_lcm / c.denom());
            numer_gcd = numer_gcd.gcd(&scaled);
        }
        debug_assert!(!numer_gcd.is_zero());
        let scale = Rat::new(denom_lcm, numer_gcd);
        if !scale.is_one() {
            for c in self.coeffs.values_mut() {
                *c *= &scale;
            }
            self.rhs *= &scale;
        }
    }

    /// `Σ coeffs[v]·point[v]`, with missing point entries treated as zero.
    pub fn lhs_value(&self, point: &BTreeMap<String, Rat>) -> Rat {
        let mut acc = rat::zero();
        for (name, c) in &self.coeffs {
            if let Some(x) = point.get(name) {
                acc += c * x;
            }
        }
        acc
    }

    pub fn satisfied_by(&self, point: &BTreeMap<String, Rat>) -> bool {
        self.lhs_value(point) <= self.rhs
    }

    /// Sum of two rows (the sense is preserved by nonnegative combination).
    pub fn add(&self, other: &LinearInequality) -> LinearInequality {
        let mut coeffs = self.coeffs.clone();
        for (name, c) in &other.coeffs {
            let entry = coeffs.entry(name.clone()).or_insert_with(rat::zero);
            *entry += c;
        }
        LinearInequality::new(coeffs, &self.rhs + &other.rhs)
    }

    /// Row with every variable renamed through `map`. Variables missing from
    /// the map keep their name.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> LinearInequality {
        let coeffs = self.coeffs.iter().map(|(name, c)| {
            (
                map.get(name).cloned().unwrap_or_else(|| name.clone()),
                c.clone(),
            )
        });
        LinearInequality::new(coeffs, self.rhs.clone())
    }

    /// Substitutes a fixed value for one variable, dropping it from the row.
    pub fn substitute(&self, var: &str, value: &Rat) -> LinearInequality {
        let mut coeffs = self.coeffs.clone();
        let mut rhs = self.rhs.clone();
        if let Some(c) = coeffs.remove(var) {
            rhs -= c * value;
        }
        LinearInequality::new(coeffs, rhs)
    }
}

/// A finite system of `≤` inequalities over an ordered variable list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HPolytope {
    variables: Vec<String>,
    rows: Vec<LinearInequality>,
}

impl HPolytope {
    pub fn new<S: Into<String>>(variables: Vec<S>, rows: Vec<LinearInequality>) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        {
            let mut seen = std::collections::BTreeSet::new();
            for v in &variables {
                if !seen.insert(v) {
                    return Err(Error::Domain(format!("duplicate variable {v:?}")));
                }
            }
        }
        let poly = HPolytope {
            variables,
            rows: Vec::new(),
        };
        let mut poly = poly;
        for row in rows {
            poly.push_row(row)?;
        }
        Ok(poly)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[LinearInequality] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn var_index(&self, var: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == var)
    }

    pub fn push_row(&mut self, row: LinearInequality) -> Result<()> {
        for name in row.coeffs().keys() {
            if !self.variables.iter().any(|v| v == name) {
                return Err(Error::Domain(format!(
                    "row references undeclared variable {name:?}"
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// The origin as a point map, for feasibility spot checks.
    pub fn origin(&self) -> BTreeMap<String, Rat> {
        self.variables
            .iter()
            .map(|v| (v.clone(), rat::zero()))
            .collect()
    }

    pub fn satisfied_by(&self, point: &BTreeMap<String, Rat>) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(point))
    }

    /// Dense coefficient matrix in variable order, one `Vec` per row, plus the
    /// right-hand sides. LP and vertex enumeration work on this form.
    pub fn dense(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let index: BTreeMap<&str, usize> = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut a = Vec::with_capacity(self.rows.len());
        let mut b = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut dense = vec![rat::zero(); self.variables.len()];
            for (name, c) in row.coeffs() {
                dense[index[name.as_str()]] = c.clone();
            }
            a.push(dense);
            b.push(row.rhs().clone());
        }
        (a, b)
    }

    /// Drops exact duplicate rows and rows dominated by another row with the
    /// same left-hand side and a smaller right-hand side. Keeps first
    /// occurrences, preserving order.
    pub fn dedup_rows(&self) -> HPolytope {
        let mut best: BTreeMap<String, Rat> = BTreeMap::new();
        for row in &self.rows {
            let key = lhs_key(row);
            match best.get_mut(&key) {
                Some(rhs) if *rhs <= *row.rhs() => {}
                _ => {
                    best.insert(key, row.rhs().clone());
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        let rows = self
            .rows
            .iter()
            .filter(|row| {
                let key = lhs_key(row);
                *row.rhs() == best[&key] && seen.insert(key)
            })
            .cloned()
            .collect();
        HPolytope {
            variables: self.variables.clone(),
            rows,
        }
    }

    /// New polytope with `var` fixed to `value` and removed from the variable
    /// list (intersection with a coordinate hyperplane, then projection along
    /// that coordinate).
    pub fn fix_var(&self, var: &str, value: &Rat) -> Result<HPolytope> {
        if self.var_index(var).is_none() {
            return Err(Error::Domain(format!("unknown variable {var:?}")));
        }
        let variables: Vec<String> = self
            .variables
            .iter()
            .filter(|v| v.as_str() != var)
            .cloned()
            .collect();
        let rows = self.rows.iter().map(|r| r.substitute(var, value)).collect();
        HPolytope::new(variables, rows)
    }

    /// Renames variables; the map must be injective on the variable list and
    /// must not merge variables.
    pub fn rename_vars(&self, map: &BTreeMap<String, String>) -> Result<HPolytope> {
        let variables: Vec<String> = self
            .variables
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        let rows = self.rows.iter().map(|r| r.rename(map)).collect();
        HPolytope::new(variables, rows)
    }

    /// Reorders the variable list; the set of variables must be unchanged.
    pub fn with_variable_order(&self, variables: Vec<String>) -> Result<HPolytope> {
        let mut a: Vec<&String> = self.variables.iter().collect();
        let mut b: Vec<&String> = variables.iter().collect();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::Domain(
                "variable reorder must preserve the variable set".into(),
            ));
        }
        HPolytope::new(variables, self.rows.clone())
    }
}

fn lhs_key(row: &LinearInequality) -> String {
    let parts: Vec<String> = row
        .coeffs()
        .iter()
        .map(|(name, c)| format!("{}*{}", rat::format(c), name))
        .collect();
    parts.join("+")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    #[test]
    fn row_normalizes_to_coprime_integers() {
        let r = LinearInequality::new(vec![("x", frac(2, 3)), ("y", frac(4, 3))], int(2));
        assert_eq!(r.coeff("x"), int(1));
        assert_eq!(r.coeff("y"), int(2));
        assert_eq!(*r.rhs(), int(3));
    }

    #[test]
    fn row_drops_zero_coefficients() {
        let r = LinearInequality::new(vec![("x", int(0)), ("y", int(2))], int(4));
        assert!(!r.coeffs().contains_key("x"));
        assert_eq!(r.coeff("y"), int(1));
        assert_eq!(*r.rhs(), int(2));
    }

    #[test]
    fn row_merges_repeated_names() {
        let r = LinearInequality::new(vec![("x", int(1)), ("x", int(-1))], int(1));
        assert!(r.coeffs().is_empty());
        assert!(r.is_trivial());
    }

    #[test]
    fn contradiction_detected() {
        let r = LinearInequality::new(Vec::<(String, Rat)>::new(), int(-1));
        assert!(r.is_contradiction());
        assert!(!r.is_trivial());
    }

    #[test]
    fn polytope_rejects_undeclared_variable() {
        let row = LinearInequality::from_ints(vec![("z", 1)], int(1));
        assert!(HPolytope::new(vec!["x", "y"], vec![row]).is_err());
    }

    #[test]
    fn dedup_keeps_tightest_rhs() {
        let rows = vec![
            LinearInequality::from_ints(vec![("x", 1)], int(2)),
            LinearInequality::from_ints(vec![("x", 1)], int(1)),
            LinearInequality::from_ints(vec![("x", 2)], int(2)), // same as x <= 1 after normalize
            LinearInequality::from_ints(vec![("x", 1), ("y", 1)], int(5)),
        ];
        let poly = HPolytope::new(vec!["x", "y"], rows).unwrap();
        let deduped = poly.dedup_rows();
        assert_eq!(deduped.rows().len(), 2);
        assert_eq!(*deduped.rows()[0].rhs(), int(1));
    }

    #[test]
    fn fix_var_substitutes_and_drops() {
        let rows = vec![LinearInequality::from_ints(
            vec![("x", 1), ("y", 2)],
            int(5),
        )];
        let poly = HPolytope::new(vec!["x", "y"], rows).unwrap();
        let fixed = poly.fix_var("y", &int(2)).unwrap();
        assert_eq!(fixed.variables(), &["x".to_string()]);
        assert_eq!(*fixed.rows()[0].rhs(), int(1));
    }
}
