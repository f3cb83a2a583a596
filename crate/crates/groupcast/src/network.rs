//! The combination-network data model and its information measures.
//!
//! A combination network has a source, `2^K − 1` intermediate relay nodes
//! indexed by nonempty receiver sets `S`, and `K` receivers. The source link
//! into relay `S` has finite capacity `C_S`; relay `S` forwards losslessly to
//! exactly the receivers in `S`, so receiver `i` observes the links indexed by
//! `W_i^P`. Capacity sums over link families are modular.
//!
//! Under the uniform product coding distribution — the cloud layer carries the
//! links seen by both weak receivers, each weak receiver's private layer
//! carries all links that receiver sees, and every link symbol is independent
//! and uniform — every mutual-information atom of the rate regions collapses
//! to a capacity sum over an explicit link family. [`InfoValuation`] holds
//! those atoms; [`CombinationNetwork::optimal_valuation`] computes them.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::lattice::{
    receiver_family, receiver_power_family, ReceiverSet, SetFamily, MAX_RECEIVERS,
};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// A `K`-receiver combination network: one nonnegative capacity per nonempty
/// `S ⊆ [1:K]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CombinationNetwork {
    k: u8,
    capacities: BTreeMap<ReceiverSet, Rat>,
}

impl CombinationNetwork {
    /// Builds a network from a complete capacity table: exactly `2^K − 1`
    /// nonnegative entries.
    pub fn new(k: u8, capacities: BTreeMap<ReceiverSet, Rat>) -> Result<Self> {
        if !(1..=MAX_RECEIVERS).contains(&k) {
            return Err(Error::Capability(format!(
                "K={k} out of range 1..={MAX_RECEIVERS}"
            )));
        }
        let expected = (1u32 << k) - 1;
        if capacities.len() as u32 != expected {
            return Err(Error::Domain(format!(
                "expected {expected} capacities for K={k}, got {}",
                capacities.len()
            )));
        }
        let full = ReceiverSet::full(k);
        for (s, c) in &capacities {
            if s.is_empty() || !s.is_subset_of(full) {
                return Err(Error::Domain(format!(
                    "capacity key {s} not a nonempty subset of [1:{k}]"
                )));
            }
            if c.is_negative() {
                return Err(Error::Domain(format!("capacity of link {s} is negative")));
            }
        }
        Ok(CombinationNetwork { k, capacities })
    }

    /// Builds a network from a possibly partial table; absent links get
    /// capacity zero. Returns the filled network together with the keys that
    /// were missing, so callers can warn about them.
    pub fn from_partial(
        k: u8,
        capacities: BTreeMap<ReceiverSet, Rat>,
    ) -> Result<(Self, Vec<ReceiverSet>)> {
        if !(1..=MAX_RECEIVERS).contains(&k) {
            return Err(Error::Capability(format!(
                "K={k} out of range 1..={MAX_RECEIVERS}"
            )));
        }
        let full = ReceiverSet::full(k);
        let mut table = BTreeMap::new();
        let mut missing = Vec::new();
        for bits in 1..=full.bits() {
            let s = ReceiverSet::from_bits(bits);
            match capacities.get(&s) {
                Some(c) => {
                    table.insert(s, c.clone());
                }
                None => {
                    missing.push(s);
                    table.insert(s, rat::zero());
                }
            }
        }
        for s in capacities.keys() {
            if s.is_empty() || !s.is_subset_of(full) {
                return Err(Error::Domain(format!(
                    "capacity key {s} not a nonempty subset of [1:{k}]"
                )));
            }
        }
        let net = CombinationNetwork::new(k, table)?;
        Ok((net, missing))
    }

    /// All-equal capacities, handy for tests.
    pub fn uniform(k: u8, value: Rat) -> Result<Self> {
        let full = ReceiverSet::full(k);
        let capacities = (1..=full.bits())
            .map(|b| (ReceiverSet::from_bits(b), value.clone()))
            .collect();
        CombinationNetwork::new(k, capacities)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn capacity(&self, s: ReceiverSet) -> Result<&Rat> {
        self.capacities
            .get(&s)
            .ok_or_else(|| Error::Domain(format!("unknown link {s} for K={}", self.k)))
    }

    pub fn capacities(&self) -> &BTreeMap<ReceiverSet, Rat> {
        &self.capacities
    }

    /// `C_W = Σ_{S ∈ W} C_S`. Modular in the family:
    /// `C_A + C_B = C_{A∪B} + C_{A∩B}`.
    pub fn capacity_sum(&self, family: &SetFamily) -> Result<Rat> {
        if family.k() != self.k {
            return Err(Error::Domain(format!(
                "family context K={} does not match network K={}",
                family.k(),
                self.k
            )));
        }
        let mut acc = rat::zero();
        for s in family.iter() {
            acc += self.capacity(s)?;
        }
        Ok(acc)
    }

    /// Capacity of the links receiver `j` observes.
    pub fn receiver_capacity(&self, j: u8) -> Result<Rat> {
        self.capacity_sum(&receiver_power_family(j, self.k)?)
    }

    /// `C` of the down-closure, within `W_j^P`, of the single complement set
    /// `S̄`; computed both by the lattice filter and by the complementary
    /// identity `C_{W_j} − C_{W_j ∩ (∪_{l∈S} W_l)}`, asserting agreement.
    /// `S` may be empty (nothing removed).
    pub fn downset_capacity(&self, j: u8, removed: ReceiverSet) -> Result<Rat> {
        let p = SetFamily::power(self.k)?;
        let wj = receiver_family(j, &p)?;
        let direct = if removed.is_empty() {
            self.capacity_sum(&wj)?
        } else {
            let gen = SetFamily::new(self.k, [removed.complement(self.k)])?;
            self.capacity_sum(&gen.lower_cone_within(&wj)?)?
        };

        let mut union = SetFamily::empty(self.k);
        for l in removed.indices() {
            union = union.union(&receiver_family(l, &p)?)?;
        }
        let identity = self.capacity_sum(&wj)? - self.capacity_sum(&wj.intersection(&union)?)?;

        if direct != identity {
            return Err(Error::Internal(format!(
                "down-set capacity mismatch at j={j}, removed={removed}: {} vs {}",
                rat::format(&direct),
                rat::format(&identity)
            )));
        }
        Ok(direct)
    }

    /// `C` of the down-closure, within `W_j^P`, of the antichain of singleton
    /// complements `{l̄ : l ∈ removed}`; computed both directly and by the
    /// intersection identity `C_{W_j} − C_{W_j ∩ (∩_{l} W_l)}`.
    pub fn downset_capacity_antichain(&self, j: u8, removed: ReceiverSet) -> Result<Rat> {
        let p = SetFamily::power(self.k)?;
        let wj = receiver_family(j, &p)?;
        let direct = if removed.is_empty() {
            self.capacity_sum(&wj)?
        } else {
            let gens = SetFamily::new(
                self.k,
                removed
                    .indices()
                    .map(|l| ReceiverSet::singleton(l).complement(self.k)),
            )?;
            self.capacity_sum(&gens.lower_cone_within(&wj)?)?
        };

        let mut inter = p.clone();
        for l in removed.indices() {
            inter = inter.intersection(&receiver_family(l, &p)?)?;
        }
        let identity = if removed.is_empty() {
            self.capacity_sum(&wj)?
        } else {
            self.capacity_sum(&wj)? - self.capacity_sum(&wj.intersection(&inter)?)?
        };

        if direct != identity {
            return Err(Error::Internal(format!(
                "antichain down-set capacity mismatch at j={j}, removed={removed}: {} vs {}",
                rat::format(&direct),
                rat::format(&identity)
            )));
        }
        Ok(direct)
    }

    /// Applies a receiver permutation: `perm[i-1]` is the new label of
    /// receiver `i`. Link `S` keeps its capacity under the relabeled index.
    pub fn relabel(&self, perm: &[u8]) -> Result<Self> {
        if perm.len() != self.k as usize {
            return Err(Error::Domain(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.k
            )));
        }
        let mut seen = vec![false; self.k as usize];
        for &p in perm {
            if p < 1 || p > self.k || seen[p as usize - 1] {
                return Err(Error::Domain("not a permutation of 1..=K".into()));
            }
            seen[p as usize - 1] = true;
        }
        let capacities = self
            .capacities
            .iter()
            .map(|(s, c)| {
                let image = ReceiverSet::from_indices(s.indices().map(|i| perm[i as usize - 1]));
                (image, c.clone())
            })
            .collect();
        CombinationNetwork::new(self.k, capacities)
    }

    /// Swaps the two weak receivers `K−1` and `K`; the canonical symmetry of
    /// the diamond message set.
    pub fn swap_weak_pair(&self) -> Result<Self> {
        if self.k < 2 {
            return Err(Error::Domain("need K >= 2 to swap the weak pair".into()));
        }
        let mut perm: Vec<u8> = (1..=self.k).collect();
        perm.swap(self.k as usize - 2, self.k as usize - 1);
        self.relabel(&perm)
    }

    /// Evaluates every mutual-information atom of the rate regions under the
    /// uniform product coding distribution. Requires `K ≥ 3` so at least one
    /// strong receiver exists.
    pub fn optimal_valuation(&self) -> Result<InfoValuation> {
        let k = self.k;
        if k < 3 {
            return Err(Error::Domain(format!(
                "diamond message set needs K >= 3, got {k}"
            )));
        }
        let last = ReceiverSet::singleton(k);
        let second = ReceiverSet::singleton(k - 1);
        let both = last.union(second);

        let a1 = self.receiver_capacity(k)?;
        let a2 = self.receiver_capacity(k - 1)?;
        let a3 = self.downset_capacity(k - 1, last)?;
        let a4 = self.downset_capacity(k, second)?;

        let strong = 1..=(k - 2);
        let mut b = Vec::new();
        let mut c = Vec::new();
        let mut d = Vec::new();
        let mut e = Vec::new();
        let mut f = Vec::new();
        for j in strong {
            b.push(self.receiver_capacity(j)?);
            // Conditioning on the layer seen by receiver K leaves receiver j
            // the links that avoid K, and symmetrically for K−1.
            c.push(self.downset_capacity(j, last)?);
            d.push(self.downset_capacity(j, second)?);
            e.push(self.downset_capacity(j, both)?);
            f.push(self.downset_capacity_antichain(j, both)?);
        }

        InfoValuation::new(k, a1, a2, a3, a4, b, c, d, e, f, rat::zero())
    }
}

/// The diamond message set for `K` receivers: the four messages indexed by
/// the receiver sets that demand them. Receivers `K−1` and `K` are the weak
/// pair; each wants only two of the four messages.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DiamondMessageSet {
    k: u8,
}

impl DiamondMessageSet {
    pub fn new(k: u8) -> Result<Self> {
        if !(3..=MAX_RECEIVERS).contains(&k) {
            return Err(Error::Domain(format!(
                "diamond message set needs 3 <= K <= {MAX_RECEIVERS}, got {k}"
            )));
        }
        Ok(DiamondMessageSet { k })
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    /// `[1:K]`: the message every receiver wants.
    pub fn common(&self) -> ReceiverSet {
        ReceiverSet::full(self.k)
    }

    /// `[1:K] \ {K}`.
    pub fn all_but_last(&self) -> ReceiverSet {
        ReceiverSet::singleton(self.k).complement(self.k)
    }

    /// `[1:K] \ {K−1}`.
    pub fn all_but_second(&self) -> ReceiverSet {
        ReceiverSet::singleton(self.k - 1).complement(self.k)
    }

    /// `[1:K−2]`: the message only the strong receivers want.
    pub fn strong_only(&self) -> ReceiverSet {
        ReceiverSet::singleton(self.k)
            .union(ReceiverSet::singleton(self.k - 1))
            .complement(self.k)
    }

    /// The four message index sets in the fixed order
    /// (common, all-but-last, all-but-second, strong-only).
    pub fn messages(&self) -> [ReceiverSet; 4] {
        [
            self.common(),
            self.all_but_last(),
            self.all_but_second(),
            self.strong_only(),
        ]
    }

    /// Message family as a `SetFamily` for set-operator evaluation.
    pub fn family(&self) -> SetFamily {
        SetFamily::new(self.k, self.messages()).expect("diamond sets are valid")
    }

    pub fn rate_var(&self, message: ReceiverSet) -> String {
        format!("R_{message}")
    }

    /// Rate variable names in the canonical order.
    pub fn rate_vars(&self) -> Vec<String> {
        self.messages().iter().map(|m| self.rate_var(*m)).collect()
    }

    pub fn weak_pair(&self) -> (u8, u8) {
        (self.k - 1, self.k)
    }
}

/// One nonnegative rational per mutual-information atom of the inner-bound
/// regions for `K` receivers. The per-receiver vectors are indexed by the
/// strong receivers `j ∈ [1:K−2]` (index `j−1`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InfoValuation {
    k: u8,
    /// Rate budget of the (cloud, all-but-second) layer pair at receiver K.
    pub a1: Rat,
    /// Rate budget of the (cloud, all-but-last) layer pair at receiver K−1.
    pub a2: Rat,
    /// Private budget of the all-but-last layer at receiver K−1 given the cloud.
    pub a3: Rat,
    /// Private budget of the all-but-second layer at receiver K given the cloud.
    pub a4: Rat,
    /// Full input budget at strong receiver j.
    pub b: Vec<Rat>,
    /// Input budget at j given the cloud and the all-but-second layer.
    pub c: Vec<Rat>,
    /// Input budget at j given the cloud and the all-but-last layer.
    pub d: Vec<Rat>,
    /// Input budget at j given the cloud and both private layers.
    pub e: Vec<Rat>,
    /// Input budget at j given the cloud alone.
    pub f: Vec<Rat>,
    /// Correlation atom between the two private layers given the cloud; zero
    /// without binning.
    pub g: Rat,
}

impl InfoValuation {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k: u8,
        a1: Rat,
        a2: Rat,
        a3: Rat,
        a4: Rat,
        b: Vec<Rat>,
        c: Vec<Rat>,
        d: Vec<Rat>,
        e: Vec<Rat>,
        f: Vec<Rat>,
        g: Rat,
    ) -> Result<Self> {
        if !(3..=MAX_RECEIVERS).contains(&k) {
            return Err(Error::Domain(format!(
                "valuation needs 3 <= K <= {MAX_RECEIVERS}, got {k}"
            )));
        }
        let strong = (k - 2) as usize;
        for (name, vec) in [("b", &b), ("c", &c), ("d", &d), ("e", &e), ("f", &f)] {
            if vec.len() != strong {
                return Err(Error::Domain(format!(
                    "atom vector {name} has length {}, expected {strong}",
                    vec.len()
                )));
            }
        }
        let val = InfoValuation {
            k,
            a1,
            a2,
            a3,
            a4,
            b,
            c,
            d,
            e,
            f,
            g,
        };
        for (name, v) in val.iter_atoms() {
            if v.is_negative() {
                return Err(Error::Domain(format!("atom {name} is negative")));
            }
        }
        Ok(val)
    }

    /// All atoms zero (binning atom included).
    pub fn zero(k: u8) -> Result<Self> {
        let strong = k.saturating_sub(2) as usize;
        InfoValuation::new(
            k,
            rat::zero(),
            rat::zero(),
            rat::zero(),
            rat::zero(),
            vec![rat::zero(); strong],
            vec![rat::zero(); strong],
            vec![rat::zero(); strong],
            vec![rat::zero(); strong],
            vec![rat::zero(); strong],
            rat::zero(),
        )
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn strong_count(&self) -> usize {
        (self.k - 2) as usize
    }

    pub fn with_binning(mut self, g: Rat) -> Result<Self> {
        if g.is_negative() {
            return Err(Error::Domain("binning atom must be nonnegative".into()));
        }
        self.g = g;
        Ok(self)
    }

    pub fn iter_atoms(&self) -> impl Iterator<Item = (String, &Rat)> {
        let scalars = [
            ("a1".to_string(), &self.a1),
            ("a2".to_string(), &self.a2),
            ("a3".to_string(), &self.a3),
            ("a4".to_string(), &self.a4),
            ("g".to_string(), &self.g),
        ];
        let vectors = [
            ("b", &self.b),
            ("c", &self.c),
            ("d", &self.d),
            ("e", &self.e),
            ("f", &self.f),
        ]
        .into_iter()
        .flat_map(|(name, vec)| {
            vec.iter()
                .enumerate()
                .map(move |(i, v)| (format!("{name}{}", i + 1), v))
        });
        scalars.into_iter().chain(vectors)
    }

    /// The valuation with the roles of receivers `K−1` and `K` exchanged:
    /// `a1↔a2`, `a3↔a4`, `c↔d`. Used by the symmetry checks.
    pub fn swap_weak_pair(&self) -> InfoValuation {
        InfoValuation {
            k: self.k,
            a1: self.a2.clone(),
            a2: self.a1.clone(),
            a3: self.a4.clone(),
            a4: self.a3.clone(),
            b: self.b.clone(),
            c: self.d.clone(),
            d: self.c.clone(),
            e: self.e.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
        }
    }

    pub fn has_binning(&self) -> bool {
        !self.g.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn unit(k: u8) -> CombinationNetwork {
        CombinationNetwork::uniform(k, int(1)).unwrap()
    }

    fn random_net(k: u8, rng: &mut StdRng) -> CombinationNetwork {
        let full = ReceiverSet::full(k);
        let caps = (1..=full.bits())
            .map(|b| {
                let p: i64 = rng.gen_range(0..=64);
                let q: i64 = [1, 2, 4, 8][rng.gen_range(0..4)];
                (ReceiverSet::from_bits(b), frac(p, q))
            })
            .collect();
        CombinationNetwork::new(k, caps).unwrap()
    }

    fn random_family(k: u8, rng: &mut StdRng) -> SetFamily {
        let full = ReceiverSet::full(k);
        let members = (1..=full.bits())
            .filter(|_| rng.gen_bool(0.5))
            .map(ReceiverSet::from_bits);
        SetFamily::new(k, members).unwrap()
    }

    #[test]
    fn capacity_sum_examples() {
        let net = unit(3);
        assert_eq!(net.capacity_sum(&SetFamily::empty(3)).unwrap(), int(0));
        let w3 = receiver_power_family(3, 3).unwrap();
        assert_eq!(net.capacity_sum(&w3).unwrap(), int(4));
    }

    #[test]
    fn capacity_sum_rejects_foreign_family() {
        let net = unit(3);
        let family = SetFamily::power(4).unwrap();
        assert!(net.capacity_sum(&family).is_err());
    }

    #[test]
    fn modularity_of_capacity_sum() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..1000 {
            let k = rng.gen_range(2..=5);
            let net = random_net(k, &mut rng);
            let a = random_family(k, &mut rng);
            let b = random_family(k, &mut rng);
            let lhs = net.capacity_sum(&a).unwrap() + net.capacity_sum(&b).unwrap();
            let rhs = net.capacity_sum(&a.union(&b).unwrap()).unwrap()
                + net.capacity_sum(&a.intersection(&b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn downset_capacity_examples() {
        // K=4, j=1, removing receivers {3,4} keeps the links within {1,2}.
        let net = unit(4);
        let removed = ReceiverSet::from_indices([3, 4]);
        assert_eq!(net.downset_capacity(1, removed).unwrap(), int(2)); // links 1 and 12

        // Removing nothing keeps all of W_j.
        assert_eq!(net.downset_capacity(1, ReceiverSet::EMPTY).unwrap(), int(8));

        // K=3, j=1, antichain over {2,3}: everything in W_1 except the links
        // seen by both 2 and 3.
        let net3 = unit(3);
        let both = ReceiverSet::from_indices([2, 3]);
        assert_eq!(
            net3.downset_capacity_antichain(1, both).unwrap(),
            int(4) - int(1)
        );
    }

    #[test]
    fn optimal_valuation_unit_k3() {
        let v = unit(3).optimal_valuation().unwrap();
        assert_eq!(v.a1, int(4));
        assert_eq!(v.a2, int(4));
        assert_eq!(v.a3, int(2)); // links 2 and 12
        assert_eq!(v.a4, int(2)); // links 3 and 13
        assert_eq!(v.b, vec![int(4)]);
        assert_eq!(v.c, vec![int(2)]); // links of receiver 1 avoiding 3: 1, 12
        assert_eq!(v.d, vec![int(2)]); // links of receiver 1 avoiding 2: 1, 13
        assert_eq!(v.e, vec![int(1)]); // link 1 alone
        assert_eq!(v.f, vec![int(3)]); // links 1, 12, 13
        assert!(v.g.is_zero());
    }

    #[test]
    fn optimal_valuation_zero_network() {
        let net = CombinationNetwork::uniform(3, int(0)).unwrap();
        let v = net.optimal_valuation().unwrap();
        for (_, atom) in v.iter_atoms() {
            assert!(atom.is_zero());
        }
    }

    #[test]
    fn optimal_valuation_requires_k3() {
        let net = unit(2);
        assert!(net.optimal_valuation().is_err());
    }

    #[test]
    fn valuation_chain_consistency() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(3..=6);
            let net = random_net(k, &mut rng);
            let v = net.optimal_valuation().unwrap();
            assert!(v.a3 <= v.a2);
            assert!(v.a4 <= v.a1);
            for j in 0..v.strong_count() {
                assert!(v.e[j] <= v.c[j]);
                assert!(v.e[j] <= v.d[j]);
                assert!(v.c[j] <= v.f[j]);
                assert!(v.d[j] <= v.f[j]);
                assert!(v.f[j] <= v.b[j]);
            }
        }
    }

    #[test]
    fn weak_pair_budget_symmetry_identity() {
        // C(lower cone of K̄ in W_{K−1}) + C(W_K) = C(lower cone of K−1̄ in W_K) + C(W_{K−1}).
        let mut rng = StdRng::seed_from_u64(13);
        for _ in 0..200 {
            let k = rng.gen_range(3..=6);
            let net = random_net(k, &mut rng);
            let v = net.optimal_valuation().unwrap();
            assert_eq!(&v.a3 + &v.a1, &v.a4 + &v.a2);
        }
    }

    #[test]
    fn relabel_round_trip() {
        let mut rng = StdRng::seed_from_u64(17);
        let net = random_net(4, &mut rng);
        let twice = net.swap_weak_pair().unwrap().swap_weak_pair().unwrap();
        assert_eq!(net, twice);
    }

    #[test]
    fn swapped_network_swaps_valuation() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..50 {
            let net = random_net(5, &mut rng);
            let direct = net.swap_weak_pair().unwrap().optimal_valuation().unwrap();
            let swapped = net.optimal_valuation().unwrap().swap_weak_pair();
            assert_eq!(direct, swapped);
        }
    }

    #[test]
    fn diamond_messages_k4() {
        let msg = DiamondMessageSet::new(4).unwrap();
        let names = msg.rate_vars();
        assert_eq!(names, vec!["R_1234", "R_123", "R_124", "R_12"]);
        assert_eq!(msg.weak_pair(), (3, 4));
    }

    #[test]
    fn from_partial_fills_missing_with_zero() {
        let mut caps = BTreeMap::new();
        caps.insert("12".parse().unwrap(), int(5));
        let (net, missing) = CombinationNetwork::from_partial(2, caps).unwrap();
        assert_eq!(missing.len(), 2);
        assert_eq!(*net.capacity("1".parse().unwrap()).unwrap(), int(0));
        assert_eq!(*net.capacity("12".parse().unwrap()).unwrap(), int(5));
    }
}
