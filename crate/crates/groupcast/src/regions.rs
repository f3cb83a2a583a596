//! Generators for every rate-region polytope of the toolkit.
//!
//! Regions over a mutual-information valuation:
//! - [`inner_bound_region`]: the rate-splitting/superposition inner bound in
//!   the four message rates;
//! - [`split_rate_region`]: the same scheme before projection, in rate and
//!   split-rate space (nine dimensions);
//! - [`binning_inner_bound`]: the inner bound extended with binning;
//! - [`binning_split_region`]: the binning scheme before projection, with the
//!   two excess rates (eleven dimensions).
//!
//! Regions over a combination network:
//! - [`capacity_region`]: the capacity region of the network under the
//!   diamond message set;
//! - [`network_inner_bound`]: the inner bound instantiated at the network's
//!   uniform coding distribution (equal to the capacity region; verified
//!   elsewhere by double containment);
//! - [`redundant_families`]: the inner-bound row families that the capacity
//!   description drops, kept available for explicit redundancy checks;
//! - [`degraded_region`]: the three- and two-message degraded specializations.
//!
//! Row families indexed by a strong receiver are fully expanded at generation
//! time, so the geometry layer never sees symbolic indices.

use std::collections::BTreeMap;

use crate::geometry::{HPolytope, LinearInequality};
use crate::lattice::ReceiverSet;
use crate::network::{CombinationNetwork, DiamondMessageSet, InfoValuation};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// The catalog of generatable regions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RegionKind {
    /// Four-rate inner bound from a valuation (no binning).
    InnerBound,
    /// Nine-dimensional rate + split-rate polytope (no binning).
    SplitRate9D,
    /// Four-rate inner bound of a network at its uniform distribution.
    NetworkInnerBound,
    /// Capacity region of a combination network.
    Capacity,
    /// Capacity region with the all-but-second message removed.
    ThreeDegraded,
    /// Capacity region with both partial messages removed.
    TwoDegraded,
    /// Four-rate inner bound with binning from a valuation.
    BinningInnerBound,
    /// Eleven-dimensional binning polytope with excess rates.
    BinningSplit11D,
    /// The explicit four-receiver capacity polytope.
    ExampleK4,
}

impl RegionKind {
    pub const ALL: [RegionKind; 9] = [
        RegionKind::InnerBound,
        RegionKind::SplitRate9D,
        RegionKind::NetworkInnerBound,
        RegionKind::Capacity,
        RegionKind::ThreeDegraded,
        RegionKind::TwoDegraded,
        RegionKind::BinningInnerBound,
        RegionKind::BinningSplit11D,
        RegionKind::ExampleK4,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            RegionKind::InnerBound => "inner",
            RegionKind::SplitRate9D => "split9d",
            RegionKind::NetworkInnerBound => "network-inner",
            RegionKind::Capacity => "capacity",
            RegionKind::ThreeDegraded => "three-degraded",
            RegionKind::TwoDegraded => "two-degraded",
            RegionKind::BinningInnerBound => "binning-inner",
            RegionKind::BinningSplit11D => "binning-split11d",
            RegionKind::ExampleK4 => "example-k4",
        }
    }
}

impl std::str::FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<RegionKind> {
        // Descriptive names are canonical; the numbered aliases mirror how the
        // results are commonly cited.
        match s.trim().to_ascii_lowercase().as_str() {
            "inner" | "theorem1" => Ok(RegionKind::InnerBound),
            "split9d" | "split" | "splitrate9d" => Ok(RegionKind::SplitRate9D),
            "network-inner" | "corollary1" => Ok(RegionKind::NetworkInnerBound),
            "capacity" | "theorem2" => Ok(RegionKind::Capacity),
            "three-degraded" => Ok(RegionKind::ThreeDegraded),
            "two-degraded" => Ok(RegionKind::TwoDegraded),
            "binning-inner" | "theorem3" => Ok(RegionKind::BinningInnerBound),
            "binning-split11d" | "binning-split" | "binningsplit11d" => {
                Ok(RegionKind::BinningSplit11D)
            }
            "example-k4" => Ok(RegionKind::ExampleK4),
            other => Err(Error::Schema(format!("unknown region kind {other:?}"))),
        }
    }
}

/// Generates `kind` for a network input; valuation-based kinds evaluate the
/// network's uniform coding distribution first.
pub fn generate_for_network(kind: RegionKind, net: &CombinationNetwork) -> Result<HPolytope> {
    match kind {
        RegionKind::InnerBound | RegionKind::NetworkInnerBound => network_inner_bound(net),
        RegionKind::SplitRate9D => split_rate_region(&net.optimal_valuation()?),
        RegionKind::Capacity => capacity_region(net),
        RegionKind::ThreeDegraded => degraded_region(net, DegradedMessages::Three),
        RegionKind::TwoDegraded => degraded_region(net, DegradedMessages::Two),
        RegionKind::BinningInnerBound => binning_inner_bound(&net.optimal_valuation()?),
        RegionKind::BinningSplit11D => binning_split_region(&net.optimal_valuation()?),
        RegionKind::ExampleK4 => {
            if net.k() != 4 {
                return Err(Error::Domain(format!(
                    "the explicit four-receiver polytope needs K=4, got {}",
                    net.k()
                )));
            }
            capacity_region(net)
        }
    }
}

/// Generates a valuation-based kind directly from a valuation.
pub fn generate_for_valuation(kind: RegionKind, v: &InfoValuation) -> Result<HPolytope> {
    match kind {
        RegionKind::InnerBound => inner_bound_region(v),
        RegionKind::SplitRate9D => split_rate_region(v),
        RegionKind::BinningInnerBound => binning_inner_bound(v),
        RegionKind::BinningSplit11D => binning_split_region(v),
        other => Err(Error::Domain(format!(
            "region kind {:?} needs a network, not a valuation",
            other.name()
        ))),
    }
}

struct RateVars {
    msg: DiamondMessageSet,
    common: String,
    all_but_last: String,
    all_but_second: String,
    strong_only: String,
}

impl RateVars {
    fn new(k: u8) -> Result<Self> {
        let msg = DiamondMessageSet::new(k)?;
        Ok(RateVars {
            common: msg.rate_var(msg.common()),
            all_but_last: msg.rate_var(msg.all_but_last()),
            all_but_second: msg.rate_var(msg.all_but_second()),
            strong_only: msg.rate_var(msg.strong_only()),
            msg,
        })
    }

    fn names(&self) -> Vec<String> {
        vec![
            self.common.clone(),
            self.all_but_last.clone(),
            self.all_but_second.clone(),
            self.strong_only.clone(),
        ]
    }

    /// Row with integer rate coefficients `(common, all_but_last,
    /// all_but_second, strong_only)` and extra terms, bounded by `rhs`.
    fn row(&self, rates: [i64; 4], extra: &[(&str, i64)], rhs: Rat) -> LinearInequality {
        let mut coeffs: Vec<(String, Rat)> = Vec::new();
        for (name, c) in [
            (&self.common, rates[0]),
            (&self.all_but_last, rates[1]),
            (&self.all_but_second, rates[2]),
            (&self.strong_only, rates[3]),
        ] {
            if c != 0 {
                coeffs.push((name.clone(), rat::int(c)));
            }
        }
        for (name, c) in extra {
            if *c != 0 {
                coeffs.push(((*name).to_string(), rat::int(*c)));
            }
        }
        LinearInequality::new(coeffs, rhs)
    }

    fn nonneg_rows(&self) -> Vec<LinearInequality> {
        self.names()
            .into_iter()
            .map(|n| LinearInequality::new(vec![(n, rat::int(-1))], rat::zero()))
            .collect()
    }
}

/// Names of the five split-rate variables in elimination order: the two
/// partial messages' shares moved into the common layer, then the strong-only
/// message's shares moved into the all-but-last, all-but-second, and common
/// layers.
pub fn split_rate_vars(msg: &DiamondMessageSet) -> Vec<String> {
    let common = msg.common();
    let abl = msg.all_but_last();
    let abs = msg.all_but_second();
    let strong = msg.strong_only();
    vec![
        split_var(abs, common),
        split_var(abl, common),
        split_var(strong, abl),
        split_var(strong, abs),
        split_var(strong, common),
    ]
}

fn split_var(src: ReceiverSet, dst: ReceiverSet) -> String {
    format!("R_{src}_to_{dst}")
}

/// Names of the two excess-rate variables of the binning scheme, for the
/// all-but-last and all-but-second layers respectively.
pub fn excess_rate_vars(msg: &DiamondMessageSet) -> Vec<String> {
    vec![
        format!("Rx_{}", msg.all_but_last()),
        format!("Rx_{}", msg.all_but_second()),
    ]
}

/// Variable rename that exchanges the roles of the two weak receivers in a
/// region over rate (and optionally split/excess) variables. Pairs with
/// [`InfoValuation::swap_weak_pair`] and [`CombinationNetwork::swap_weak_pair`]:
/// renaming the region of `v` equals the region of the swapped `v`.
pub fn weak_pair_swap_map(
    k: u8,
    include_split: bool,
    include_excess: bool,
) -> Result<BTreeMap<String, String>> {
    let msg = DiamondMessageSet::new(k)?;
    let mut map = BTreeMap::new();
    let ra = msg.rate_var(msg.all_but_last());
    let rb = msg.rate_var(msg.all_but_second());
    map.insert(ra.clone(), rb.clone());
    map.insert(rb, ra);
    if include_split {
        let s = split_rate_vars(&msg);
        map.insert(s[0].clone(), s[1].clone());
        map.insert(s[1].clone(), s[0].clone());
        map.insert(s[2].clone(), s[3].clone());
        map.insert(s[3].clone(), s[2].clone());
    }
    if include_excess {
        let t = excess_rate_vars(&msg);
        map.insert(t[0].clone(), t[1].clone());
        map.insert(t[1].clone(), t[0].clone());
    }
    Ok(map)
}

fn require_no_binning(v: &InfoValuation) -> Result<()> {
    if v.has_binning() {
        return Err(Error::Domain(
            "this region is defined for valuations without a binning atom".into(),
        ));
    }
    Ok(())
}

/// The rate-splitting/superposition inner bound as a four-dimensional
/// polytope in the message rates, at valuation `v` (binning atom must be
/// zero). Emitted unminimized: nonnegativity first, then the twelve row
/// families in their canonical order.
pub fn inner_bound_region(v: &InfoValuation) -> Result<HPolytope> {
    require_no_binning(v)?;
    let rv = RateVars::new(v.k())?;
    let mut rows = rv.nonneg_rows();

    rows.push(rv.row([1, 0, 1, 0], &[], v.a1.clone()));
    rows.push(rv.row([1, 1, 0, 0], &[], v.a2.clone()));
    rows.push(rv.row([1, 1, 1, 0], &[], &v.a3 + &v.a1));
    rows.push(rv.row([1, 1, 1, 0], &[], &v.a4 + &v.a2));
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], v.b[j].clone()));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.c[j] + &v.a1));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.d[j] + &v.a2));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.e[j] + &v.a3 + &v.a1));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.e[j] + &v.a4 + &v.a2));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([2, 1, 1, 1], &[], &v.e[j] + &v.a2 + &v.a1));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([2, 2, 2, 1], &[], &v.f[j] + &v.a2 + &v.a1));
    }
    for j1 in 0..v.strong_count() {
        for j2 in 0..v.strong_count() {
            rows.push(rv.row([2, 2, 2, 2], &[], &v.f[j1] + &v.e[j2] + &v.a2 + &v.a1));
        }
    }

    HPolytope::new(rv.names(), rows)
}

/// The scheme's polytope before projection: four message rates and five split
/// rates. Decoding rows for the strong receivers come first (one family of
/// five per receiver), then the four weak-receiver rows, the eight split-rate
/// nonnegativity rows, and the rate nonnegativity rows.
pub fn split_rate_region(v: &InfoValuation) -> Result<HPolytope> {
    require_no_binning(v)?;
    let rv = RateVars::new(v.k())?;
    let s = split_rate_vars(&rv.msg);
    let (s1, s2, s3, s4, s5) = (
        s[0].as_str(),
        s[1].as_str(),
        s[2].as_str(),
        s[3].as_str(),
        s[4].as_str(),
    );

    let mut rows = Vec::new();
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], v.b[j].clone()));
        rows.push(rv.row(
            [0, 1, 1, 1],
            &[(s1, -1), (s2, -1), (s5, -1)],
            v.f[j].clone(),
        ));
        rows.push(rv.row(
            [0, 1, 0, 1],
            &[(s2, -1), (s4, -1), (s5, -1)],
            v.c[j].clone(),
        ));
        rows.push(rv.row(
            [0, 0, 1, 1],
            &[(s1, -1), (s3, -1), (s5, -1)],
            v.d[j].clone(),
        ));
        rows.push(rv.row(
            [0, 0, 0, 1],
            &[(s3, -1), (s4, -1), (s5, -1)],
            v.e[j].clone(),
        ));
    }
    rows.push(rv.row([1, 1, 0, 0], &[(s1, 1), (s3, 1), (s5, 1)], v.a2.clone()));
    rows.push(rv.row([0, 1, 0, 0], &[(s2, -1), (s3, 1)], v.a3.clone()));
    rows.push(rv.row([1, 0, 1, 0], &[(s2, 1), (s4, 1), (s5, 1)], v.a1.clone()));
    rows.push(rv.row([0, 0, 1, 0], &[(s1, -1), (s4, 1)], v.a4.clone()));

    rows.extend(split_nonneg_rows(&rv, &s));
    rows.extend(rv.nonneg_rows());

    let mut vars = rv.names();
    vars.extend(s.iter().cloned());
    HPolytope::new(vars, rows)
}

fn split_nonneg_rows(rv: &RateVars, s: &[String]) -> Vec<LinearInequality> {
    let (s1, s2, s3, s4, s5) = (
        s[0].as_str(),
        s[1].as_str(),
        s[2].as_str(),
        s[3].as_str(),
        s[4].as_str(),
    );
    vec![
        // The untouched share of each split message stays nonnegative.
        rv.row([0, 0, 0, -1], &[(s3, 1), (s4, 1), (s5, 1)], rat::zero()),
        rv.row([0, 0, 0, 0], &[(s4, -1)], rat::zero()),
        rv.row([0, 0, 0, 0], &[(s3, -1)], rat::zero()),
        rv.row([0, 0, 0, 0], &[(s5, -1)], rat::zero()),
        rv.row([0, -1, 0, 0], &[(s2, 1)], rat::zero()),
        rv.row([0, 0, 0, 0], &[(s2, -1)], rat::zero()),
        rv.row([0, 0, -1, 0], &[(s1, 1)], rat::zero()),
        rv.row([0, 0, 0, 0], &[(s1, -1)], rat::zero()),
    ]
}

/// The inner bound extended with binning: the correlation atom `g` buys
/// coordination between the two private layers and is paid for in every row
/// that decodes both of them.
pub fn binning_inner_bound(v: &InfoValuation) -> Result<HPolytope> {
    let rv = RateVars::new(v.k())?;
    let g = &v.g;
    let mut rows = rv.nonneg_rows();

    rows.push(rv.row([1, 0, 1, 0], &[], v.a1.clone()));
    rows.push(rv.row([1, 1, 0, 0], &[], v.a2.clone()));
    rows.push(rv.row([1, 1, 1, 0], &[], &v.a3 + &v.a1 - g));
    rows.push(rv.row([1, 1, 1, 0], &[], &v.a4 + &v.a2 - g));
    rows.push(rv.row([2, 1, 1, 0], &[], &v.a2 + &v.a1 - g));
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], v.b[j].clone()));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.c[j] + &v.a1));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.d[j] + &v.a2));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.e[j] + &v.a3 + &v.a1 - g));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], &v.e[j] + &v.a4 + &v.a2 - g));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([2, 1, 1, 1], &[], &v.e[j] + &v.a2 + &v.a1 - g));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([2, 2, 2, 1], &[], &v.f[j] + &v.a2 + &v.a1 - g));
    }
    for j1 in 0..v.strong_count() {
        for j2 in 0..v.strong_count() {
            rows.push(rv.row([2, 2, 2, 2], &[], &v.f[j1] + &v.e[j2] + &v.a2 + &v.a1 - g));
        }
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([2, 2, 1, 1], &[], &v.c[j] + &v.a1 + &v.a2 - g));
    }
    for j in 0..v.strong_count() {
        rows.push(rv.row([2, 1, 2, 1], &[], &v.d[j] + &v.a1 + &v.a2 - g));
    }
    for j1 in 0..v.strong_count() {
        for j2 in 0..v.strong_count() {
            rows.push(rv.row([2, 2, 2, 2], &[], &v.d[j1] + &v.c[j2] + &v.a1 + &v.a2 - g));
        }
    }

    HPolytope::new(rv.names(), rows)
}

/// The binning scheme before projection: rates, split rates, and the two
/// excess rates at which the private codebooks are generated.
pub fn binning_split_region(v: &InfoValuation) -> Result<HPolytope> {
    let rv = RateVars::new(v.k())?;
    let s = split_rate_vars(&rv.msg);
    let t = excess_rate_vars(&rv.msg);
    let (s1, s2, s3, s4, s5) = (
        s[0].as_str(),
        s[1].as_str(),
        s[2].as_str(),
        s[3].as_str(),
        s[4].as_str(),
    );
    let (t1, t2) = (t[0].as_str(), t[1].as_str());

    let mut rows = Vec::new();
    for j in 0..v.strong_count() {
        rows.push(rv.row([1, 1, 1, 1], &[], v.b[j].clone()));
        rows.push(rv.row(
            [0, 1, 1, 1],
            &[(s1, -1), (s2, -1), (s5, -1)],
            v.f[j].clone(),
        ));
        rows.push(rv.row(
            [0, 1, 0, 1],
            &[(s2, -1), (s4, -1), (s5, -1)],
            v.c[j].clone(),
        ));
        rows.push(rv.row(
            [0, 0, 1, 1],
            &[(s1, -1), (s3, -1), (s5, -1)],
            v.d[j].clone(),
        ));
        rows.push(rv.row(
            [0, 0, 0, 1],
            &[(s3, -1), (s4, -1), (s5, -1)],
            v.e[j].clone(),
        ));
    }

    // Each excess rate covers the shares its codebook carries.
    rows.push(rv.row([0, 1, 0, 0], &[(s2, -1), (s3, 1), (t1, -1)], rat::zero()));
    rows.push(rv.row([0, 0, 1, 0], &[(s1, -1), (s4, 1), (t2, -1)], rat::zero()));
    // Mutual covering: the two selected bins must contain a compatible pair.
    rows.push(rv.row(
        [0, 1, 1, 0],
        &[(s1, -1), (s2, -1), (s3, 1), (s4, 1), (t1, -1), (t2, -1)],
        -v.g.clone(),
    ));
    // Weak receivers decode their private layer at the excess rate.
    rows.push(rv.row(
        [1, 0, 0, 0],
        &[(s1, 1), (s2, 1), (s5, 1), (t1, 1)],
        v.a2.clone(),
    ));
    rows.push(LinearInequality::new(
        vec![(t1.to_string(), rat::int(1))],
        v.a3.clone(),
    ));
    rows.push(rv.row(
        [1, 0, 0, 0],
        &[(s1, 1), (s2, 1), (s5, 1), (t2, 1)],
        v.a1.clone(),
    ));
    rows.push(LinearInequality::new(
        vec![(t2.to_string(), rat::int(1))],
        v.a4.clone(),
    ));

    rows.extend(split_nonneg_rows(&rv, &s));
    rows.extend(rv.nonneg_rows());
    rows.push(LinearInequality::new(
        vec![(t1.to_string(), rat::int(-1))],
        rat::zero(),
    ));
    rows.push(LinearInequality::new(
        vec![(t2.to_string(), rat::int(-1))],
        rat::zero(),
    ));

    let mut vars = rv.names();
    vars.extend(s);
    vars.extend(t);
    HPolytope::new(vars, rows)
}

struct CapacityTerms<'a> {
    net: &'a CombinationNetwork,
}

impl<'a> CapacityTerms<'a> {
    fn new(net: &'a CombinationNetwork) -> Result<Self> {
        if net.k() < 3 {
            return Err(Error::Domain(format!(
                "diamond message set needs K >= 3, got {}",
                net.k()
            )));
        }
        Ok(CapacityTerms { net })
    }

    fn k(&self) -> u8 {
        self.net.k()
    }

    fn w_last(&self) -> Result<Rat> {
        self.net.receiver_capacity(self.k())
    }

    fn w_second(&self) -> Result<Rat> {
        self.net.receiver_capacity(self.k() - 1)
    }

    /// Links of receiver `K−1` hidden from receiver `K`.
    fn second_private(&self) -> Result<Rat> {
        self.net
            .downset_capacity(self.k() - 1, ReceiverSet::singleton(self.k()))
    }

    /// Links of receiver `K` hidden from receiver `K−1`.
    fn last_private(&self) -> Result<Rat> {
        self.net
            .downset_capacity(self.k(), ReceiverSet::singleton(self.k() - 1))
    }

    fn w_strong(&self, j: u8) -> Result<Rat> {
        self.net.receiver_capacity(j)
    }

    /// Links of strong receiver `j` hidden from receiver `K`.
    fn strong_avoiding_last(&self, j: u8) -> Result<Rat> {
        self.net
            .downset_capacity(j, ReceiverSet::singleton(self.k()))
    }

    /// Links of strong receiver `j` hidden from receiver `K−1`.
    fn strong_avoiding_second(&self, j: u8) -> Result<Rat> {
        self.net
            .downset_capacity(j, ReceiverSet::singleton(self.k() - 1))
    }

    /// Links of strong receiver `j` hidden from both weak receivers.
    fn strong_avoiding_both(&self, j: u8) -> Result<Rat> {
        let both = ReceiverSet::singleton(self.k()).union(ReceiverSet::singleton(self.k() - 1));
        self.net.downset_capacity(j, both)
    }

    /// Links of strong receiver `j` hidden from at least one weak receiver.
    fn strong_avoiding_either(&self, j: u8) -> Result<Rat> {
        let both = ReceiverSet::singleton(self.k()).union(ReceiverSet::singleton(self.k() - 1));
        self.net.downset_capacity_antichain(j, both)
    }
}

/// The capacity region of the combination network for the diamond message
/// set, built directly from link-capacity sums over down-closures.
pub fn capacity_region(net: &CombinationNetwork) -> Result<HPolytope> {
    let terms = CapacityTerms::new(net)?;
    let rv = RateVars::new(net.k())?;

    let mut rows = vec![
        rv.row([1, 0, 1, 0], &[], terms.w_last()?),
        rv.row([1, 1, 0, 0], &[], terms.w_second()?),
        rv.row([1, 1, 1, 0], &[], terms.second_private()? + terms.w_last()?),
    ];
    for j in 1..=net.k() - 2 {
        rows.push(rv.row([1, 1, 1, 1], &[], terms.w_strong(j)?));
    }
    for j in 1..=net.k() - 2 {
        rows.push(rv.row(
            [2, 1, 1, 1],
            &[],
            terms.strong_avoiding_both(j)? + terms.w_second()? + terms.w_last()?,
        ));
    }
    for j in 1..=net.k() - 2 {
        rows.push(rv.row(
            [2, 2, 2, 1],
            &[],
            terms.strong_avoiding_either(j)? + terms.w_second()? + terms.w_last()?,
        ));
    }
    rows.extend(rv.nonneg_rows());

    HPolytope::new(rv.names(), rows)
}

/// The inner bound of the network at its uniform coding distribution.
pub fn network_inner_bound(net: &CombinationNetwork) -> Result<HPolytope> {
    inner_bound_region(&net.optimal_valuation()?)
}

/// The five inner-bound row families that the capacity description omits.
/// Every returned row is implied by [`capacity_region`]; `verify` checks this
/// by LP per instance.
pub fn redundant_families(net: &CombinationNetwork) -> Result<Vec<LinearInequality>> {
    let terms = CapacityTerms::new(net)?;
    let rv = RateVars::new(net.k())?;
    let strong = 1..=net.k() - 2;

    let mut rows = Vec::new();
    for j in strong.clone() {
        rows.push(rv.row(
            [1, 1, 1, 1],
            &[],
            terms.strong_avoiding_last(j)? + terms.w_last()?,
        ));
    }
    for j in strong.clone() {
        rows.push(rv.row(
            [1, 1, 1, 1],
            &[],
            terms.strong_avoiding_second(j)? + terms.w_second()?,
        ));
    }
    for j in strong.clone() {
        rows.push(rv.row(
            [1, 1, 1, 1],
            &[],
            terms.strong_avoiding_both(j)? + terms.second_private()? + terms.w_last()?,
        ));
    }
    for j in strong.clone() {
        rows.push(rv.row(
            [1, 1, 1, 1],
            &[],
            terms.strong_avoiding_both(j)? + terms.last_private()? + terms.w_second()?,
        ));
    }
    for j1 in strong.clone() {
        for j2 in strong.clone() {
            rows.push(rv.row(
                [2, 2, 2, 2],
                &[],
                terms.strong_avoiding_either(j1)?
                    + terms.strong_avoiding_both(j2)?
                    + terms.w_second()?
                    + terms.w_last()?,
            ));
        }
    }
    Ok(rows)
}

/// Which messages remain in a degraded specialization.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DegradedMessages {
    /// Common, all-but-last, and strong-only messages (the all-but-second
    /// rate is pinned to zero).
    Three,
    /// Common and strong-only messages.
    Two,
}

/// Capacity region of the degraded message configurations, stated directly in
/// the surviving rates.
pub fn degraded_region(net: &CombinationNetwork, which: DegradedMessages) -> Result<HPolytope> {
    let terms = CapacityTerms::new(net)?;
    let rv = RateVars::new(net.k())?;
    let strong = 1..=net.k() - 2;

    let mut vars = vec![rv.common.clone()];
    if which == DegradedMessages::Three {
        vars.push(rv.all_but_last.clone());
    }
    vars.push(rv.strong_only.clone());

    let abl = |c: i64| -> i64 {
        if which == DegradedMessages::Three {
            c
        } else {
            0
        }
    };

    let mut rows = vec![
        rv.row([1, 0, 0, 0], &[], terms.w_last()?),
        rv.row([1, abl(1), 0, 0], &[], terms.w_second()?),
    ];
    for j in strong.clone() {
        rows.push(rv.row([1, abl(1), 0, 1], &[], terms.w_strong(j)?));
    }
    for j in strong.clone() {
        rows.push(rv.row(
            [2, abl(1), 0, 1],
            &[],
            terms.strong_avoiding_both(j)? + terms.w_second()? + terms.w_last()?,
        ));
    }
    if which == DegradedMessages::Three {
        for j in strong.clone() {
            rows.push(rv.row(
                [2, 2, 0, 1],
                &[],
                terms.strong_avoiding_either(j)? + terms.w_second()? + terms.w_last()?,
            ));
        }
    }
    for var in &vars {
        rows.push(LinearInequality::new(
            vec![(var.clone(), rat::int(-1))],
            rat::zero(),
        ));
    }

    HPolytope::new(vars, rows)
}

/// A capacity-region row with symbolic link capacities: integer coefficients
/// on the four rates and an integer multiplicity per link.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolicRow {
    pub rate_coeffs: Vec<(String, i64)>,
    pub cap_coeffs: BTreeMap<ReceiverSet, u64>,
}

impl SymbolicRow {
    /// Right-hand side under a concrete capacity table.
    pub fn rhs_under(&self, net: &CombinationNetwork) -> Result<Rat> {
        let mut acc = rat::zero();
        for (s, mult) in &self.cap_coeffs {
            acc += net.capacity(*s)? * rat::int(*mult as i64);
        }
        Ok(acc)
    }
}

/// The capacity region with each link capacity tracked symbolically: row
/// order is the two pair rows, the weak sum-rate row, then the three strong
/// families expanded over `j`. Nonnegativity rows are omitted (they carry no
/// capacity terms).
pub fn capacity_region_symbolic(k: u8) -> Result<Vec<SymbolicRow>> {
    use crate::lattice::{receiver_power_family, SetFamily};

    let rv = RateVars::new(k)?;
    let rates = |c: [i64; 4]| -> Vec<(String, i64)> {
        [
            (rv.common.clone(), c[0]),
            (rv.all_but_last.clone(), c[1]),
            (rv.all_but_second.clone(), c[2]),
            (rv.strong_only.clone(), c[3]),
        ]
        .into_iter()
        .filter(|(_, c)| *c != 0)
        .collect()
    };

    let family_counts = |families: &[SetFamily]| -> BTreeMap<ReceiverSet, u64> {
        let mut counts = BTreeMap::new();
        for fam in families {
            for s in fam.iter() {
                *counts.entry(s).or_insert(0) += 1;
            }
        }
        counts
    };

    let k_last = k;
    let k_second = k - 1;
    let w_last = receiver_power_family(k_last, k)?;
    let w_second = receiver_power_family(k_second, k)?;
    let second_private = {
        let gen = SetFamily::new(k, [ReceiverSet::singleton(k_last).complement(k)])?;
        gen.lower_cone_within(&w_second)?
    };
    let both = ReceiverSet::singleton(k_last).union(ReceiverSet::singleton(k_second));
    let strong_range = 1..=k - 2;

    let mut rows = Vec::new();
    rows.push(SymbolicRow {
        rate_coeffs: rates([1, 0, 1, 0]),
        cap_coeffs: family_counts(std::slice::from_ref(&w_last)),
    });
    rows.push(SymbolicRow {
        rate_coeffs: rates([1, 1, 0, 0]),
        cap_coeffs: family_counts(std::slice::from_ref(&w_second)),
    });
    rows.push(SymbolicRow {
        rate_coeffs: rates([1, 1, 1, 0]),
        cap_coeffs: family_counts(&[second_private, w_last.clone()]),
    });
    for j in strong_range.clone() {
        rows.push(SymbolicRow {
            rate_coeffs: rates([1, 1, 1, 1]),
            cap_coeffs: family_counts(&[receiver_power_family(j, k)?]),
        });
    }
    for j in strong_range.clone() {
        let wj = receiver_power_family(j, k)?;
        let gen = SetFamily::new(k, [both.complement(k)])?;
        let avoid_both = gen.lower_cone_within(&wj)?;
        rows.push(SymbolicRow {
            rate_coeffs: rates([2, 1, 1, 1]),
            cap_coeffs: family_counts(&[avoid_both, w_second.clone(), w_last.clone()]),
        });
    }
    for j in strong_range {
        let wj = receiver_power_family(j, k)?;
        let gens = SetFamily::new(
            k,
            [
                ReceiverSet::singleton(k_last).complement(k),
                ReceiverSet::singleton(k_second).complement(k),
            ],
        )?;
        let avoid_either = gens.lower_cone_within(&wj)?;
        rows.push(SymbolicRow {
            rate_coeffs: rates([2, 2, 2, 1]),
            cap_coeffs: family_counts(&[avoid_either, w_second.clone(), w_last.clone()]),
        });
    }
    Ok(rows)
}
