//! Projection checks for the eleven-dimensional binning polytope: collapsing
//! the excess rates and split rates must reproduce the four-rate regions.

use groupcast::geometry::{contains, equal_point_sets, fme_eliminate, HPolytope};
use groupcast::network::{CombinationNetwork, DiamondMessageSet, InfoValuation};
use groupcast::rat;
use groupcast::regions::{
    binning_inner_bound, binning_split_region, excess_rate_vars, inner_bound_region,
    split_rate_vars,
};

/// Eliminates the excess rates first, then the split rates in canonical
/// order, leaving the four message rates.
fn project_to_rates(mut poly: HPolytope, k: u8) -> HPolytope {
    let msg = DiamondMessageSet::new(k).unwrap();
    for var in excess_rate_vars(&msg)
        .iter()
        .chain(split_rate_vars(&msg).iter())
    {
        poly = fme_eliminate(&poly, var).unwrap();
    }
    poly
}

#[test]
fn zero_binning_projection_equals_inner_bound() {
    for (k, caps) in [(3u8, rat::int(1)), (3, rat::frac(5, 4)), (4, rat::int(2))] {
        let net = CombinationNetwork::uniform(k, caps).unwrap();
        let v = net.optimal_valuation().unwrap();
        let projected = project_to_rates(binning_split_region(&v).unwrap(), k);
        let direct = inner_bound_region(&v).unwrap();
        assert!(
            equal_point_sets(&projected, &direct).unwrap(),
            "K={k}: projection disagrees with the closed-form inner bound"
        );
    }
}

#[test]
fn positive_binning_projection_is_inside_binning_bound() {
    // A few hand-picked valuations with a strictly positive binning atom.
    let make = |k: u8, g: i64| -> InfoValuation {
        let strong = (k - 2) as usize;
        InfoValuation::new(
            k,
            rat::int(6),
            rat::int(5),
            rat::int(3),
            rat::int(2),
            vec![rat::int(9); strong],
            vec![rat::int(4); strong],
            vec![rat::int(5); strong],
            vec![rat::int(2); strong],
            vec![rat::int(7); strong],
            rat::int(g),
        )
        .unwrap()
    };
    for (k, g) in [(3u8, 1i64), (3, 2), (4, 1)] {
        let v = make(k, g);
        let projected = project_to_rates(binning_split_region(&v).unwrap(), k);
        let bound = binning_inner_bound(&v).unwrap();
        assert!(
            contains(&bound, &projected).unwrap().holds(),
            "K={k}, g={g}: projection escapes the binning inner bound"
        );
    }
}

#[test]
fn excess_rates_at_lower_bounds_reduce_to_split_system() {
    // With g = 0, substituting each excess rate by the shares it must cover
    // turns the excess, covering, and excess-decoding rows into the plain
    // weak-receiver rows of the nine-dimensional system.
    let net = CombinationNetwork::uniform(3, rat::int(1)).unwrap();
    let v = net.optimal_valuation().unwrap();
    let msg = DiamondMessageSet::new(3).unwrap();
    let split = groupcast::regions::split_rate_region(&v).unwrap();

    // Substitution t = lower bound is not linear in the variables we keep, so
    // check the geometry instead: projecting only the two excess rates away
    // must give exactly the nine-dimensional system.
    let mut projected = binning_split_region(&v).unwrap();
    for var in excess_rate_vars(&msg) {
        projected = fme_eliminate(&projected, &var).unwrap();
    }
    let reordered = projected
        .with_variable_order(split.variables().to_vec())
        .unwrap();
    assert!(equal_point_sets(&reordered, &split).unwrap());
}
