//! Generic residual points: central characters, symbolic in the parameters,
//! at which the mass function has a pole of maximal order. A point is encoded
//! by its coordinate vector over the fundamental coweights, i.e. the vector of
//! values of the parent simple roots, each an affine-linear form in the
//! parameter symbols.

use crate::linalg::RatMat;
use crate::linform::{rat, LinForm, Params, Rat};
use crate::rootdata::{RootSystem, Subsystem};
use crate::weylgrp::{self, WeylGroup};
use crate::Result;
use itertools::Itertools;
use std::collections::BTreeSet;

/// Value of a parent root on the point with coweight coordinates `coords`.
pub fn alpha_value(rs: &RootSystem, root: usize, coords: &[LinForm]) -> LinForm {
    let mut acc = LinForm::zero();
    for (c, a) in rs.root_coords[root].iter().zip(coords) {
        if *c != 0 {
            acc = &acc + &a.scale(&Rat::from_integer((*c).into()));
        }
    }
    acc
}

/// The parameter form `k(alpha)` attached to a root's orbit.
pub fn k_of(rs: &RootSystem, root: usize) -> LinForm {
    LinForm::sym(&rs.param_label[root])
}

/// Residual-point test, as an identity of affine-linear forms: over all roots
/// of the subsystem, the count of roots with `alpha(xi) = k(alpha)` exceeds
/// the count with `alpha(xi) = 0` by exactly the rank.
pub fn is_residual(rs: &RootSystem, sub: &Subsystem, coords: &[LinForm]) -> bool {
    let mut hits: i64 = 0;
    let mut zeros: i64 = 0;
    for &r in &sub.root_indices {
        let val = alpha_value(rs, r, coords);
        if val == k_of(rs, r) {
            hits += 1;
        }
        if val.is_zero() {
            zeros += 1;
        }
    }
    hits - zeros == rs.rank as i64
}

/// A deterministic generic evaluation point used only to order Weyl orbits:
/// rationally independent-looking values, one per parameter symbol.
pub fn sample_params(rs: &RootSystem) -> Params {
    let mut symbols: BTreeSet<String> = BTreeSet::new();
    for l in &rs.param_label {
        symbols.insert(l.clone());
    }
    let mut out = Params::new();
    for (i, s) in symbols.into_iter().enumerate() {
        // 1, 1.41421356, 1.82842712, ... far from any small-coefficient
        // rational relation among the forms that occur.
        let v = rat(1, 1) + rat(i as i64, 1) * rat(41_421_356, 100_000_000);
        out.insert(s, v);
    }
    out
}

/// Apply Weyl element `i` of `w` to coweight coordinates: the j-th coordinate
/// of the image is the value of `w^-1(alpha_j)` on the original point.
pub fn apply_to_coords(
    rs: &RootSystem,
    w: &WeylGroup,
    i: usize,
    coords: &[LinForm],
) -> Vec<LinForm> {
    let inv = w.inverse(i);
    let perm = &w.elements[inv].perm;
    rs.simple
        .iter()
        .map(|&sj| alpha_value(rs, perm[sj] as usize, coords))
        .collect()
}

/// Full orbit of a coordinate vector under the given reflection group.
pub fn orbit(rs: &RootSystem, w: &WeylGroup, coords: &[LinForm]) -> BTreeSet<Vec<LinForm>> {
    (0..w.order())
        .map(|i| apply_to_coords(rs, w, i, coords))
        .collect()
}

/// Canonical orbit representative: the orbit element whose evaluation at the
/// sample point is lexicographically largest, with the symbolic vector as tie
/// break.
pub fn canonical_rep(rs: &RootSystem, w: &WeylGroup, coords: &[LinForm]) -> Vec<LinForm> {
    let sample = sample_params(rs);
    orbit(rs, w, coords)
        .into_iter()
        .max_by_key(|c| {
            let vals: Vec<Rat> = c
                .iter()
                .map(|f| f.eval(&sample).expect("sample assigns all symbols"))
                .collect();
            (vals, c.clone())
        })
        .expect("orbit is nonempty")
}

/// One orbit of generic residual points for a fixed subsystem.
#[derive(Clone, Debug)]
pub struct ResidualOrbit {
    pub subsystem: Subsystem,
    /// Canonical representative, coordinates over the fundamental coweights.
    pub rep: Vec<LinForm>,
    /// Orbit size under the subsystem's Weyl group.
    pub orbit_size: usize,
}

/// Enumerate the orbits of generic residual points of one subsystem: solve
/// `alpha_i(xi) = k(alpha_i)` for every linearly independent rank-subset of
/// positive subsystem roots and keep the solutions passing the residual test,
/// up to the subsystem Weyl group.
pub fn residual_orbits(rs: &RootSystem, sub: &Subsystem) -> Result<Vec<ResidualOrbit>> {
    let positives: Vec<usize> = sub
        .root_indices
        .iter()
        .copied()
        .filter(|&r| rs.positive[r])
        .collect();
    let mut raw: BTreeSet<Vec<LinForm>> = BTreeSet::new();
    for subset in positives.iter().combinations(rs.rank) {
        let m: RatMat = subset
            .iter()
            .map(|&&r| {
                rs.root_coords[r]
                    .iter()
                    .map(|c| Rat::from_integer((*c).into()))
                    .collect()
            })
            .collect();
        let rhs: Vec<LinForm> = subset.iter().map(|&&r| k_of(rs, r)).collect();
        if let Some(coords) = crate::linalg::solve_linform_system(&m, &rhs) {
            if is_residual(rs, sub, &coords) {
                raw.insert(coords);
            }
        }
    }
    let ws = weylgrp::enumerate(rs, &sub.simple)?;
    let mut seen: BTreeSet<Vec<LinForm>> = BTreeSet::new();
    let mut out = Vec::new();
    for coords in raw {
        let rep = canonical_rep(rs, &ws, &coords);
        if seen.insert(rep.clone()) {
            let orbit_size = orbit(rs, &ws, &rep).len();
            out.push(ResidualOrbit { subsystem: sub.clone(), rep, orbit_size });
        }
    }
    out.sort_by(|a, b| a.rep.cmp(&b.rep));
    Ok(out)
}

/// Classification over all pseudo-Levi subsystems of a G2 or F4 system.
pub fn classify_residual(rs: &RootSystem) -> Result<Vec<ResidualOrbit>> {
    let subs = crate::rootdata::pseudo_levi_subsystems(rs)?;
    let mut out = Vec::new();
    for sub in subs {
        out.extend(residual_orbits(rs, &sub)?);
    }
    Ok(out)
}

/// Whether two coordinate vectors lie in the same orbit of the full parent
/// Weyl group.
pub fn same_parent_orbit(
    rs: &RootSystem,
    w0: &WeylGroup,
    a: &[LinForm],
    b: &[LinForm],
) -> bool {
    canonical_rep(rs, w0, a) == canonical_rep(rs, w0, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{build_root_system, pseudo_levi_subsystems, Subsystem};
    use num::Zero;

    fn full_subsystem(rs: &RootSystem) -> Subsystem {
        Subsystem {
            root_indices: (0..rs.roots.len()).collect(),
            simple: rs.simple.clone(),
            type_tag: rs.type_tag.clone(),
            kac_values: vec![Rat::zero(); rs.rank],
        }
    }

    #[test]
    fn rank_one_point() {
        let a1 = build_root_system("An", 1).unwrap();
        let sub = full_subsystem(&a1);
        let orbits = residual_orbits(&a1, &sub).unwrap();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].rep, vec![LinForm::sym("k")]);
        assert_eq!(orbits[0].orbit_size, 2);
    }

    #[test]
    fn a2_has_one_orbit_through_rho() {
        let a2 = build_root_system("An", 2).unwrap();
        let sub = full_subsystem(&a2);
        let orbits = residual_orbits(&a2, &sub).unwrap();
        assert_eq!(orbits.len(), 1);
        // The orbit passes through the point where both simple roots take the
        // parameter value.
        let k = LinForm::sym("k");
        let w = weylgrp::enumerate(&a2, &a2.simple).unwrap();
        assert!(orbit(&a2, &w, &orbits[0].rep).contains(&vec![k.clone(), k]));
    }

    #[test]
    fn g2_orbit_counts_per_pseudo_levi() {
        let g2 = build_root_system("G2", 2).unwrap();
        let mut counts = Vec::new();
        for sub in pseudo_levi_subsystems(&g2).unwrap() {
            let orbits = residual_orbits(&g2, &sub).unwrap();
            counts.push((sub.type_tag.clone(), orbits.len()));
        }
        counts.sort();
        assert_eq!(
            counts,
            vec![("2A1".into(), 1), ("A2".into(), 1), ("G2".into(), 3)]
        );
    }

    #[test]
    fn g2_split_orbits_contain_expected_points() {
        let g2 = build_root_system("G2", 2).unwrap();
        let sub = full_subsystem(&g2);
        let orbits = residual_orbits(&g2, &sub).unwrap();
        let w = weylgrp::enumerate(&g2, &g2.simple).unwrap();
        let k1 = LinForm::sym("k1");
        let k2 = LinForm::sym("k2");
        // Orbits through [k1, k2], [k1, k2 - k1], [k1, (k2 - k1)/2].
        let expected = [
            vec![k1.clone(), k2.clone()],
            vec![k1.clone(), &k2 - &k1],
            vec![k1.clone(), (&k2 - &k1).scale(&rat(1, 2))],
        ];
        for want in &expected {
            assert_eq!(
                orbits
                    .iter()
                    .filter(|o| orbit(&g2, &w, &o.rep).contains(want))
                    .count(),
                1,
                "no unique orbit through {want:?}"
            );
        }
        // And the three orbits are pairwise distinct under the full group.
        for i in 0..orbits.len() {
            for j in i + 1..orbits.len() {
                assert!(!same_parent_orbit(&g2, &w, &orbits[i].rep, &orbits[j].rep));
            }
        }
    }

    #[test]
    fn residual_test_rejects_non_residual_points() {
        let a2 = build_root_system("An", 2).unwrap();
        let sub = full_subsystem(&a2);
        // alpha1 = k, theta = k forces alpha2 = 0: not residual.
        let k = LinForm::sym("k");
        let coords = vec![k, LinForm::zero()];
        assert!(!is_residual(&a2, &sub, &coords));
    }
}
