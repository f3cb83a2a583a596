//! Generalized cut-set outer bounds.
//!
//! A cut-set bound is built from set operators: expression trees of unions and
//! intersections over the per-receiver families `W_1, …, W_K`. Evaluating an
//! operator on the message families and summing the rates it selects gives the
//! bound's left-hand side; evaluating it on the link families and summing
//! capacities gives the right-hand side. Validity rests on three extremal
//! inequalities that hold for every submodular set function and hold with
//! equality for modular functions such as link-capacity sums — which is
//! exactly why the bounds are tight for combination networks.
//!
//! Only the three operator patterns the capacity proof needs are materialized
//! ([`outer_region`]); [`GcsBound`] lets callers assemble any other member of
//! the family.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::geometry::{HPolytope, LinearInequality};
use crate::lattice::{receiver_family, receiver_power_family, ReceiverSet, SetFamily};
use crate::network::{CombinationNetwork, DiamondMessageSet};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// An expression tree over the `K` per-receiver family placeholders, with
/// binary union and intersection nodes. Leaves are 1-based receiver indices.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetExpr {
    Leaf {
        leaf: u8,
    },
    Node {
        op: SetOp,
        args: (Box<SetExpr>, Box<SetExpr>),
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetOp {
    Union,
    Intersection,
}

impl SetExpr {
    pub fn leaf(i: u8) -> SetExpr {
        SetExpr::Leaf { leaf: i }
    }

    pub fn union(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Node {
            op: SetOp::Union,
            args: (Box::new(a), Box::new(b)),
        }
    }

    pub fn intersection(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Node {
            op: SetOp::Intersection,
            args: (Box::new(a), Box::new(b)),
        }
    }

    /// Evaluates the tree on one family per receiver.
    pub fn eval(&self, families: &[SetFamily]) -> Result<SetFamily> {
        match self {
            SetExpr::Leaf { leaf } => {
                let idx = *leaf as usize;
                if idx < 1 || idx > families.len() {
                    return Err(Error::Domain(format!(
                        "leaf {leaf} out of range 1..={}",
                        families.len()
                    )));
                }
                Ok(families[idx - 1].clone())
            }
            SetExpr::Node { op, args } => {
                let a = args.0.eval(families)?;
                let b = args.1.eval(families)?;
                match op {
                    SetOp::Union => a.union(&b),
                    SetOp::Intersection => a.intersection(&b),
                }
            }
        }
    }
}

/// A weighted collection of set operators: `Σ α_i · (rate/capacity of Φ_i)`.
#[derive(Clone, Debug)]
pub struct GcsBound {
    terms: Vec<(Rat, SetExpr)>,
}

impl GcsBound {
    pub fn new(terms: Vec<(Rat, SetExpr)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain(
                "a cut-set bound needs at least one term".into(),
            ));
        }
        if terms.iter().any(|(a, _)| a.is_negative()) {
            return Err(Error::Domain("cut-set weights must be nonnegative".into()));
        }
        Ok(GcsBound { terms })
    }

    pub fn terms(&self) -> &[(Rat, SetExpr)] {
        &self.terms
    }
}

/// Left-hand side of a cut-set bound: for each term, evaluate the operator on
/// the per-receiver message families and sum the rates of the selected
/// messages, weighted by α.
pub fn gcs_rate_lhs(bound: &GcsBound, msg: &DiamondMessageSet) -> Result<BTreeMap<String, Rat>> {
    let k = msg.k();
    let message_family = msg.family();
    let families: Vec<SetFamily> = (1..=k)
        .map(|i| receiver_family(i, &message_family))
        .collect::<Result<_>>()?;

    let mut form: BTreeMap<String, Rat> = BTreeMap::new();
    for (alpha, expr) in bound.terms() {
        let selected = expr.eval(&families)?;
        for s in selected.iter() {
            if !message_family.contains(s) {
                continue;
            }
            let entry = form.entry(msg.rate_var(s)).or_insert_with(rat::zero);
            *entry += alpha;
        }
    }
    form.retain(|_, c| !num_traits::Zero::is_zero(c));
    Ok(form)
}

/// Right-hand side of a cut-set bound: the same operators evaluated on the
/// link families `W_i^P`, weighted capacity sums.
pub fn gcs_capacity_rhs(bound: &GcsBound, net: &CombinationNetwork) -> Result<Rat> {
    let k = net.k();
    let families: Vec<SetFamily> = (1..=k)
        .map(|i| receiver_power_family(i, k))
        .collect::<Result<_>>()?;
    let mut acc = rat::zero();
    for (alpha, expr) in bound.terms() {
        acc += alpha * net.capacity_sum(&expr.eval(&families)?)?;
    }
    Ok(acc)
}

/// The cut-set row `gcs_rate_lhs ≤ gcs_capacity_rhs` for a concrete network.
pub fn gcs_row(
    bound: &GcsBound,
    msg: &DiamondMessageSet,
    net: &CombinationNetwork,
) -> Result<LinearInequality> {
    let lhs = gcs_rate_lhs(bound, msg)?;
    let rhs = gcs_capacity_rhs(bound, net)?;
    Ok(LinearInequality::new(lhs, rhs))
}

/// A set function on families over `[1:K]`, assumed submodular by the caller.
pub struct SubmodularFn {
    k: u8,
    eval: Box<dyn Fn(&SetFamily) -> Rat + Send + Sync>,
}

impl SubmodularFn {
    pub fn new(k: u8, eval: Box<dyn Fn(&SetFamily) -> Rat + Send + Sync>) -> Self {
        SubmodularFn { k, eval }
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn eval(&self, family: &SetFamily) -> Rat {
        (self.eval)(family)
    }

    /// The identically-zero function.
    pub fn zero(k: u8) -> Self {
        SubmodularFn::new(k, Box::new(|_| rat::zero()))
    }

    /// The modular link-capacity sum of a network.
    pub fn capacity(net: CombinationNetwork) -> Self {
        let k = net.k();
        SubmodularFn::new(
            k,
            Box::new(move |family| net.capacity_sum(family).expect("family over the same K")),
        )
    }

    /// Coverage function: `f(W) = |∪_{S∈W} ground(S)|` for an arbitrary map
    /// from link sets to finite ground subsets (bitmask over 64 elements).
    pub fn coverage(k: u8, ground: BTreeMap<ReceiverSet, u64>) -> Self {
        SubmodularFn::new(
            k,
            Box::new(move |family| {
                let mut acc: u64 = 0;
                for s in family.iter() {
                    acc |= ground.get(&s).copied().unwrap_or(0);
                }
                rat::int(acc.count_ones() as i64)
            }),
        )
    }

    /// Truncated cardinality `f(W) = min(|W|, t)`.
    pub fn truncated_cardinality(k: u8, t: u32) -> Self {
        SubmodularFn::new(
            k,
            Box::new(move |family| rat::int((family.len() as u32).min(t) as i64)),
        )
    }

    /// Spot check of submodularity on one pair of families.
    pub fn check_pair(&self, a: &SetFamily, b: &SetFamily) -> Result<bool> {
        let lhs = self.eval(&a.union(b)?) + self.eval(&a.intersection(b)?);
        let rhs = self.eval(a) + self.eval(b);
        Ok(lhs <= rhs)
    }
}

/// Which of the three extremal inequalities to evaluate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtremalForm {
    /// `f(W_{K−1} ∪ W_K) ≤ f(W_{K−1}) + f(W_K) − f(W_{K−1} ∩ W_K)`.
    PairUnion,
    /// `f(W_{K−1} ∪ W_K ∪ W_j) + f(W_{K−1} ∩ W_K)
    ///  ≤ f(W_j) − f(W_j ∩ (W_{K−1} ∪ W_K)) + f(W_{K−1}) + f(W_K)`.
    TripleUnionPairMeet,
    /// `f(W_{K−1} ∪ W_K ∪ W_j) + f((W_{K−1}∩W_K) ∪ (W_{K−1}∩W_j) ∪ (W_K∩W_j))
    ///  ≤ f(W_j) − f(W_j ∩ W_{K−1} ∩ W_K) + f(W_{K−1}) + f(W_K)`.
    TripleUnionPairwiseMeets,
}

impl ExtremalForm {
    pub fn from_index(which: u8) -> Result<Self> {
        match which {
            0 => Ok(ExtremalForm::PairUnion),
            1 => Ok(ExtremalForm::TripleUnionPairMeet),
            2 => Ok(ExtremalForm::TripleUnionPairwiseMeets),
            other => Err(Error::Domain(format!(
                "extremal inequality index {other} not in 0..=2"
            ))),
        }
    }
}

/// Both sides of the chosen extremal inequality, evaluated on the concrete
/// link families `W_i^P` of `f`'s ground set. `j` must be a strong receiver
/// for the two triple forms and is ignored by the pair form.
pub fn extremal_sides(f: &SubmodularFn, which: ExtremalForm, j: u8) -> Result<(Rat, Rat)> {
    let k = f.k();
    if k < 3 {
        return Err(Error::Domain(format!(
            "extremal inequalities need K >= 3, got {k}"
        )));
    }
    let w = |i: u8| receiver_power_family(i, k);
    let w_second = w(k - 1)?;
    let w_last = w(k)?;

    match which {
        ExtremalForm::PairUnion => {
            let lhs = f.eval(&w_second.union(&w_last)?);
            let rhs =
                f.eval(&w_second) + f.eval(&w_last) - f.eval(&w_second.intersection(&w_last)?);
            Ok((lhs, rhs))
        }
        ExtremalForm::TripleUnionPairMeet => {
            let wj = check_strong(j, k).and_then(w)?;
            let lhs = f.eval(&w_second.union(&w_last)?.union(&wj)?)
                + f.eval(&w_second.intersection(&w_last)?);
            let rhs = f.eval(&wj) - f.eval(&wj.intersection(&w_second.union(&w_last)?)?)
                + f.eval(&w_second)
                + f.eval(&w_last);
            Ok((lhs, rhs))
        }
        ExtremalForm::TripleUnionPairwiseMeets => {
            let wj = check_strong(j, k).and_then(w)?;
            let pairwise = w_second
                .intersection(&w_last)?
                .union(&w_second.intersection(&wj)?)?
                .union(&w_last.intersection(&wj)?)?;
            let lhs = f.eval(&w_second.union(&w_last)?.union(&wj)?) + f.eval(&pairwise);
            let rhs = f.eval(&wj) - f.eval(&wj.intersection(&w_second)?.intersection(&w_last)?)
                + f.eval(&w_second)
                + f.eval(&w_last);
            Ok((lhs, rhs))
        }
    }
}

fn check_strong(j: u8, k: u8) -> Result<u8> {
    if j < 1 || j > k - 2 {
        return Err(Error::Domain(format!(
            "j={j} is not a strong receiver for K={k}"
        )));
    }
    Ok(j)
}

/// True iff the chosen extremal inequality holds for `f` at `j`.
pub fn check_extremal_inequality(f: &SubmodularFn, which: ExtremalForm, j: u8) -> Result<bool> {
    let (lhs, rhs) = extremal_sides(f, which, j)?;
    Ok(lhs <= rhs)
}

/// The three operator patterns used by the capacity converse, the two
/// receiver-indexed ones instantiated for every strong receiver.
pub fn converse_bounds(k: u8) -> Result<Vec<(String, GcsBound)>> {
    if k < 3 {
        return Err(Error::Domain(format!(
            "converse bounds need K >= 3, got {k}"
        )));
    }
    let one = rat::int(1);
    let second = SetExpr::leaf(k - 1);
    let last = SetExpr::leaf(k);
    let mut bounds = Vec::new();

    bounds.push((
        "weak-pair-union".to_string(),
        GcsBound::new(vec![(
            one.clone(),
            SetExpr::union(second.clone(), last.clone()),
        )])?,
    ));
    for j in 1..=k - 2 {
        let strong = SetExpr::leaf(j);
        bounds.push((
            format!("triple-union-pair-meet-j{j}"),
            GcsBound::new(vec![
                (
                    one.clone(),
                    SetExpr::union(SetExpr::union(second.clone(), last.clone()), strong.clone()),
                ),
                (
                    one.clone(),
                    SetExpr::intersection(second.clone(), last.clone()),
                ),
            ])?,
        ));
    }
    for j in 1..=k - 2 {
        let strong = SetExpr::leaf(j);
        let pairwise = SetExpr::union(
            SetExpr::union(
                SetExpr::intersection(second.clone(), last.clone()),
                SetExpr::intersection(second.clone(), strong.clone()),
            ),
            SetExpr::intersection(last.clone(), strong.clone()),
        );
        bounds.push((
            format!("triple-union-pairwise-meets-j{j}"),
            GcsBound::new(vec![
                (
                    one.clone(),
                    SetExpr::union(SetExpr::union(second.clone(), last.clone()), strong.clone()),
                ),
                (one.clone(), pairwise),
            ])?,
        ));
    }
    Ok(bounds)
}

/// The outer bound on the network's rate region, assembled purely from
/// cut-set machinery: plain single-receiver cuts plus the three generalized
/// patterns, with nonnegativity rows. Row for row it matches the capacity
/// region, but every right-hand side here is computed by a set-operator
/// evaluation rather than a down-closure.
pub fn outer_region(net: &CombinationNetwork) -> Result<HPolytope> {
    let k = net.k();
    if k < 3 {
        return Err(Error::Domain(format!("outer region needs K >= 3, got {k}")));
    }
    let msg = DiamondMessageSet::new(k)?;

    let mut rows = Vec::new();
    let single =
        |i: u8| -> Result<GcsBound> { GcsBound::new(vec![(rat::int(1), SetExpr::leaf(i))]) };
    // Plain cut at receiver K, receiver K−1, then the weak-pair union.
    rows.push(gcs_row(&single(k)?, &msg, net)?);
    rows.push(gcs_row(&single(k - 1)?, &msg, net)?);
    let patterns = converse_bounds(k)?;
    rows.push(gcs_row(&patterns[0].1, &msg, net)?);
    // Plain cut at each strong receiver.
    for j in 1..=k - 2 {
        rows.push(gcs_row(&single(j)?, &msg, net)?);
    }
    // The two generalized families per strong receiver.
    for (name, bound) in &patterns[1..] {
        debug_assert!(name.starts_with("triple"));
        rows.push(gcs_row(bound, &msg, net)?);
    }
    for var in msg.rate_vars() {
        rows.push(LinearInequality::new(
            vec![(var, rat::int(-1))],
            rat::zero(),
        ));
    }

    HPolytope::new(msg.rate_vars(), rows)
}
