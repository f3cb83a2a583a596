//! Bitmask algebra on subsets of `[1:K]` and families of such subsets.
//!
//! The ground lattice is the set `P` of nonempty subsets of `[1:K]` ordered by
//! inclusion. The empty set is deliberately excluded from `P`: every link index
//! of a combination network is a nonempty receiver set, and keeping the carrier
//! empty-free makes capacity sums over families well defined without special
//! cases. Down-closures therefore never produce the empty set.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Hard cap on the receiver count so a set fits one machine word.
pub const MAX_RECEIVERS: u8 = 16;

/// A subset of receiver indices `1..=K`, stored as a bitmask (bit `i-1`
/// stands for receiver `i`). Subset order coincides with bitwise containment.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ReceiverSet(u16);

impl ReceiverSet {
    pub const EMPTY: ReceiverSet = ReceiverSet(0);

    /// Set from raw bits. Callers must ensure only bits `0..K` are used;
    /// [`SetFamily::new`] revalidates against its `K`.
    pub fn from_bits(bits: u16) -> Self {
        ReceiverSet(bits)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    /// The singleton `{i}`; `i` is 1-based.
    pub fn singleton(i: u8) -> Self {
        assert!(
            (1..=MAX_RECEIVERS).contains(&i),
            "receiver index {i} out of range"
        );
        ReceiverSet(1 << (i - 1))
    }

    /// The full set `[1:K]`.
    pub fn full(k: u8) -> Self {
        assert!((1..=MAX_RECEIVERS).contains(&k), "K={k} out of range");
        ReceiverSet(((1u32 << k) - 1) as u16)
    }

    pub fn from_indices<I: IntoIterator<Item = u8>>(indices: I) -> Self {
        let mut bits = 0u16;
        for i in indices {
            assert!(
                (1..=MAX_RECEIVERS).contains(&i),
                "receiver index {i} out of range"
            );
            bits |= 1 << (i - 1);
        }
        ReceiverSet(bits)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: u8) -> bool {
        (1..=MAX_RECEIVERS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_subset_of(self, other: ReceiverSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: ReceiverSet) -> ReceiverSet {
        ReceiverSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ReceiverSet) -> ReceiverSet {
        ReceiverSet(self.0 & other.0)
    }

    /// Complement within `[1:K]`.
    pub fn complement(self, k: u8) -> ReceiverSet {
        ReceiverSet(ReceiverSet::full(k).0 & !self.0)
    }

    /// 1-based receiver indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = u8> {
        let bits = self.0;
        (1..=MAX_RECEIVERS).filter(move |i| bits & (1 << (i - 1)) != 0)
    }
}

impl fmt::Display for ReceiverSet {
    /// Sorted digit string, e.g. `"134"`. Receivers above 9 force the
    /// dot-separated form (`"2.10.13"`) so the text stays unambiguous.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        let idx: Vec<u8> = self.indices().collect();
        if idx.iter().all(|&i| i <= 9) {
            for i in idx {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl fmt::Debug for ReceiverSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for ReceiverSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "empty" {
            return Ok(ReceiverSet::EMPTY);
        }
        let mut bits = 0u16;
        let indices: Vec<u8> = if s.contains('.') {
            s.split('.')
                .map(|p| {
                    p.parse::<u8>()
                        .map_err(|_| Error::Schema(format!("bad receiver index {p:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::Schema(format!("bad receiver digit {c:?} in {s:?}")))
                })
                .collect::<Result<_>>()?
        };
        for i in indices {
            if !(1..=MAX_RECEIVERS).contains(&i) {
                return Err(Error::Schema(format!(
                    "receiver index {i} out of range in {s:?}"
                )));
            }
            let bit = 1u16 << (i - 1);
            if bits & bit != 0 {
                return Err(Error::Schema(format!("repeated receiver {i} in {s:?}")));
            }
            bits |= bit;
        }
        Ok(ReceiverSet(bits))
    }
}

impl TryFrom<String> for ReceiverSet {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<ReceiverSet> for String {
    fn from(s: ReceiverSet) -> String {
        s.to_string()
    }
}

/// A finite family of nonempty subsets of `[1:K]`, canonically ordered.
/// Serializes as a sorted JSON array of set strings (the context `K` is
/// carried by the surrounding document, not the array).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(into = "Vec<String>")]
pub struct SetFamily {
    k: u8,
    members: BTreeSet<ReceiverSet>,
}

impl From<SetFamily> for Vec<String> {
    fn from(f: SetFamily) -> Vec<String> {
        f.members.iter().map(|s| s.to_string()).collect()
    }
}

impl SetFamily {
    /// Builds a family, validating every member against the context `K`.
    pub fn new<I: IntoIterator<Item = ReceiverSet>>(k: u8, members: I) -> Result<Self> {
        if !(1..=MAX_RECEIVERS).contains(&k) {
            return Err(Error::Domain(format!(
                "K={k} out of range 1..={MAX_RECEIVERS}"
            )));
        }
        let full = ReceiverSet::full(k);
        let mut set = BTreeSet::new();
        for m in members {
            if m.is_empty() {
                return Err(Error::InvalidFamily("empty member set".into()));
            }
            if !m.is_subset_of(full) {
                return Err(Error::InvalidFamily(format!(
                    "member {m} not within [1:{k}]"
                )));
            }
            set.insert(m);
        }
        Ok(SetFamily { k, members: set })
    }

    /// The empty family over `[1:K]`.
    pub fn empty(k: u8) -> Self {
        SetFamily::new(k, []).expect("empty family is always valid")
    }

    /// The carrier `P`: all nonempty subsets of `[1:K]`.
    pub fn power(k: u8) -> Result<Self> {
        if !(1..=MAX_RECEIVERS).contains(&k) {
            return Err(Error::Domain(format!(
                "K={k} out of range 1..={MAX_RECEIVERS}"
            )));
        }
        let members = (1..(1u32 << k)).map(|b| ReceiverSet::from_bits(b as u16));
        SetFamily::new(k, members)
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: ReceiverSet) -> bool {
        self.members.contains(&s)
    }

    pub fn iter(&self) -> impl Iterator<Item = ReceiverSet> + '_ {
        self.members.iter().copied()
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.k == other.k && self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_k(other)?;
        SetFamily::new(self.k, self.members.union(&other.members).copied())
    }

    pub fn intersection(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_k(other)?;
        SetFamily::new(self.k, self.members.intersection(&other.members).copied())
    }

    pub fn difference(&self, other: &SetFamily) -> Result<SetFamily> {
        self.check_same_k(other)?;
        SetFamily::new(self.k, self.members.difference(&other.members).copied())
    }

    fn check_same_k(&self, other: &SetFamily) -> Result<()> {
        if self.k != other.k {
            return Err(Error::Domain(format!(
                "family context mismatch: K={} vs K={}",
                self.k, other.k
            )));
        }
        Ok(())
    }

    /// Smallest up-set of `P` containing `self`: every nonempty `S' ⊆ [1:K]`
    /// with `S ⊆ S'` for some member `S`.
    pub fn up_closure(&self) -> SetFamily {
        let full = ReceiverSet::full(self.k);
        let members = (1..=full.bits())
            .map(ReceiverSet::from_bits)
            .filter(|s| self.members.iter().any(|m| m.is_subset_of(*s)));
        SetFamily::new(self.k, members).expect("closure stays within [1:K]")
    }

    /// Smallest down-set of `within` containing `self ∩ within`'s lower cone:
    /// every `S' ∈ within` with `S' ⊆ S` for some member `S`.
    ///
    /// `self` must be a subfamily of `within`.
    pub fn down_closure_within(&self, within: &SetFamily) -> Result<SetFamily> {
        self.check_same_k(within)?;
        if !self.is_subfamily_of(within) {
            return Err(Error::Domain(
                "down-closure: family is not a subfamily of its carrier".into(),
            ));
        }
        let members = within
            .members
            .iter()
            .copied()
            .filter(|s| self.members.iter().any(|m| s.is_subset_of(*m)));
        SetFamily::new(self.k, members)
    }

    /// Down-closure within the full carrier `P`.
    pub fn down_closure(&self) -> SetFamily {
        let p = SetFamily::power(self.k).expect("valid K");
        self.down_closure_within(&p)
            .expect("any family is a subfamily of P")
    }

    /// Relative up-closure: every `S' ∈ within` with `S ⊆ S'` for some member.
    /// Unlike [`Self::down_closure_within`], the generators need not lie in
    /// `within` (partition identities take generators from all of `P`).
    pub fn up_closure_within(&self, within: &SetFamily) -> Result<SetFamily> {
        self.check_same_k(within)?;
        let members = within
            .members
            .iter()
            .copied()
            .filter(|s| self.members.iter().any(|m| m.is_subset_of(*s)));
        SetFamily::new(self.k, members)
    }

    /// Relative down-closure with generators allowed outside `within`.
    pub fn lower_cone_within(&self, within: &SetFamily) -> Result<SetFamily> {
        self.check_same_k(within)?;
        let members = within
            .members
            .iter()
            .copied()
            .filter(|s| self.members.iter().any(|m| s.is_subset_of(*m)));
        SetFamily::new(self.k, members)
    }

    /// True iff the family is closed upward under inclusion within `P`.
    pub fn is_up_set(&self) -> bool {
        *self == self.up_closure()
    }

    /// True iff the family is closed downward under inclusion within `P`.
    pub fn is_down_set(&self) -> bool {
        *self == self.down_closure()
    }

    /// Applies a receiver permutation (`perm[i-1]` is the image of receiver
    /// `i`) to every member.
    pub fn relabel(&self, perm: &[u8]) -> Result<SetFamily> {
        if perm.len() != self.k as usize {
            return Err(Error::Domain(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.k
            )));
        }
        let members: Vec<ReceiverSet> = self
            .members
            .iter()
            .map(|s| ReceiverSet::from_indices(s.indices().map(|i| perm[i as usize - 1])))
            .collect();
        SetFamily::new(self.k, members)
    }
}

/// The family `W_i^base` of members of `base` containing receiver `i`.
pub fn receiver_family(i: u8, base: &SetFamily) -> Result<SetFamily> {
    if i < 1 || i > base.k() {
        return Err(Error::Domain(format!(
            "receiver {i} out of range 1..={}",
            base.k()
        )));
    }
    SetFamily::new(base.k(), base.iter().filter(|s| s.contains(i)))
}

/// `W_i^P` for the full carrier.
pub fn receiver_power_family(i: u8, k: u8) -> Result<SetFamily> {
    receiver_family(i, &SetFamily::power(k)?)
}

/// Exhaustively verifies the order-theoretic identities of the subset lattice
/// for every admissible set `S` and receiver `i`:
///
/// 1. the union of the `W_k^P` over `k ∈ S` is the up-closure of the
///    singletons of `S`, and their intersection is the up-closure of `{S}`;
/// 2. `W_i^P` is partitioned by the relative down-closure of the element-wise
///    complements of `S` and the relative up-closure of `{S}`;
/// 3. `W_i^P` is partitioned by the relative down-closure of `{S̄}` and the
///    relative up-closure of the singletons of `S`.
///
/// Returns `true` iff every instance holds.
pub fn check_lattice_identities(k: u8) -> Result<bool> {
    if !(2..=12).contains(&k) {
        return Err(Error::Domain(format!("K={k} out of range 2..=12")));
    }
    let p = SetFamily::power(k)?;
    let w: Vec<SetFamily> = (1..=k)
        .map(|i| receiver_family(i, &p))
        .collect::<Result<_>>()?;

    let full_bits = ReceiverSet::full(k).bits();
    for s_bits in 1..=full_bits {
        let s = ReceiverSet::from_bits(s_bits);
        let singletons = SetFamily::new(k, s.indices().map(ReceiverSet::singleton))?;

        // Union / intersection identities, any nonempty S.
        let mut union = SetFamily::empty(k);
        let mut inter = p.clone();
        for i in s.indices() {
            union = union.union(&w[i as usize - 1])?;
            inter = inter.intersection(&w[i as usize - 1])?;
        }
        if union != singletons.up_closure() {
            return Ok(false);
        }
        if inter != SetFamily::new(k, [s])?.up_closure() {
            return Ok(false);
        }

        // Partition identities, proper nonempty S only (complements must be
        // nonempty to live in P).
        if s_bits == full_bits {
            continue;
        }
        let complements = SetFamily::new(
            k,
            s.indices().map(|i| ReceiverSet::singleton(i).complement(k)),
        )?;
        let s_bar = SetFamily::new(k, [s.complement(k)])?;
        let s_single = SetFamily::new(k, [s])?;
        for wi in &w {
            let down_a = complements.lower_cone_within(wi)?;
            let up_a = s_single.up_closure_within(wi)?;
            if down_a.union(&up_a)? != *wi || !down_a.intersection(&up_a)?.is_empty() {
                return Ok(false);
            }
            let down_b = s_bar.lower_cone_within(wi)?;
            let up_b = singletons.up_closure_within(wi)?;
            if down_b.union(&up_b)? != *wi || !down_b.intersection(&up_b)?.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(k: u8, sets: &[&str]) -> SetFamily {
        SetFamily::new(k, sets.iter().map(|s| s.parse().unwrap())).unwrap()
    }

    /// Brute-force oracle: filter all nonempty subsets by containment of some
    /// generator. Independent of the closure implementation under test in the
    /// sense that it spells out the defining predicate directly.
    fn up_oracle(family: &SetFamily) -> Vec<ReceiverSet> {
        let k = family.k();
        (1..(1u32 << k))
            .map(|b| ReceiverSet::from_bits(b as u16))
            .filter(|s| family.iter().any(|m| m.is_subset_of(*s)))
            .collect()
    }

    #[test]
    fn set_parse_display_round_trip() {
        for s in ["1", "134", "23", "123456789"] {
            let r: ReceiverSet = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        let r: ReceiverSet = "2.10.13".parse().unwrap();
        assert_eq!(r.to_string(), "2.10.13");
    }

    #[test]
    fn set_parse_rejects_bad_input() {
        assert!("0".parse::<ReceiverSet>().is_err());
        assert!("1a".parse::<ReceiverSet>().is_err());
        assert!("22".parse::<ReceiverSet>().is_err()); // repeated digit
        assert!("1.99".parse::<ReceiverSet>().is_err());
    }

    #[test]
    fn up_closure_k3() {
        let f = fam(3, &["13"]);
        let up = f.up_closure();
        assert_eq!(up, fam(3, &["13", "123"]));
    }

    #[test]
    fn up_closure_empty_family() {
        let f = SetFamily::empty(3);
        assert!(f.up_closure().is_empty());
    }

    #[test]
    fn up_closure_k4_two_generators() {
        let f = fam(4, &["12", "34"]);
        let up = f.up_closure();
        let expected = fam(4, &["12", "123", "124", "1234", "34", "134", "234"]);
        assert_eq!(up, expected);
        assert_eq!(up.iter().collect::<Vec<_>>(), up_oracle(&f));
    }

    #[test]
    fn down_closure_k3_excludes_empty() {
        let f = fam(3, &["13"]);
        assert_eq!(f.down_closure(), fam(3, &["1", "3", "13"]));
    }

    #[test]
    fn down_closure_of_top_is_carrier() {
        let f = fam(3, &["123"]);
        assert_eq!(f.down_closure(), SetFamily::power(3).unwrap());
    }

    #[test]
    fn down_closure_relative_carrier() {
        let w1 = receiver_power_family(1, 4).unwrap();
        let f = fam(4, &["12"]);
        let down = f.down_closure_within(&w1).unwrap();
        assert_eq!(down, fam(4, &["1", "12"]));
    }

    #[test]
    fn down_closure_requires_subfamily() {
        let w1 = receiver_power_family(1, 3).unwrap();
        let f = fam(3, &["23"]); // not in W_1
        assert!(f.down_closure_within(&w1).is_err());
    }

    #[test]
    fn receiver_family_k3() {
        let p = SetFamily::power(3).unwrap();
        let w3 = receiver_family(3, &p).unwrap();
        assert_eq!(w3, fam(3, &["3", "13", "23", "123"]));
        assert!(receiver_family(4, &p).is_err());
        assert!(receiver_family(0, &p).is_err());
    }

    #[test]
    fn receiver_family_of_empty_base() {
        let base = SetFamily::empty(3);
        assert!(receiver_family(1, &base).unwrap().is_empty());
    }

    #[test]
    fn receiver_family_size() {
        for k in 1..=8u8 {
            for i in 1..=k {
                let w = receiver_power_family(i, k).unwrap();
                assert_eq!(w.len(), 1 << (k - 1));
            }
        }
    }

    #[test]
    fn closures_are_idempotent_monotone_extensive() {
        // Small exhaustive check over all families of P([1:3]).
        let k = 3u8;
        let p = SetFamily::power(k).unwrap();
        let all: Vec<ReceiverSet> = p.iter().collect();
        for mask in 0u32..(1 << all.len()) {
            let members: Vec<ReceiverSet> = all
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, s)| *s)
                .collect();
            let f = SetFamily::new(k, members).unwrap();
            let up = f.up_closure();
            let down = f.down_closure();
            assert!(f.is_subfamily_of(&up));
            assert!(f.is_subfamily_of(&down));
            assert_eq!(up.up_closure(), up);
            assert_eq!(down.down_closure(), down);
            assert!(up.is_up_set());
            assert!(down.is_down_set());
        }
    }

    #[test]
    fn invalid_family_members_rejected() {
        let too_big: ReceiverSet = "4".parse().unwrap();
        assert!(matches!(
            SetFamily::new(3, [too_big]),
            Err(Error::InvalidFamily(_))
        ));
        assert!(matches!(
            SetFamily::new(3, [ReceiverSet::EMPTY]),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn identities_small_k() {
        assert!(check_lattice_identities(2).unwrap());
        assert!(check_lattice_identities(3).unwrap());
        assert!(check_lattice_identities(6).unwrap());
        assert!(check_lattice_identities(1).is_err());
        assert!(check_lattice_identities(13).is_err());
    }

    #[test]
    fn family_serializes_as_string_array() {
        // Canonical member order is bitmask order.
        let f = fam(4, &["34", "12", "123"]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"["12","123","34"]"#);
    }

    #[test]
    fn relabel_swaps_members() {
        let f = fam(3, &["13", "2"]);
        let swapped = f.relabel(&[1, 3, 2]).unwrap();
        assert_eq!(swapped, fam(3, &["12", "3"]));
    }
}
