//! Weyl groups as explicit permutation groups of a root list, with reduced
//! words, conjugacy classes, and the elliptic pairing used for counting
//! discrete-series-relevant classes.

use crate::linalg::{self, RatMat, RatVec};
use crate::linform::Rat;
use crate::rootdata::RootSystem;
use crate::{HeckeError, Result};
use num::Zero;
use std::collections::HashMap;

const MAX_ORDER: usize = 50_000;

/// One group element: the permutation it induces on the parent root list and a
/// reduced word over the generator list.
#[derive(Clone, Debug)]
pub struct WeylElement {
    pub perm: Vec<u32>,
    /// Indices into `WeylGroup::gens`.
    pub word: Vec<usize>,
}

/// The group generated by the reflections in a set of roots, enumerated by
/// breadth-first closure. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    /// Parent root indices of the generating reflections.
    pub gens: Vec<usize>,
    pub elements: Vec<WeylElement>,
    /// Element indices of the generators themselves.
    pub gen_elems: Vec<usize>,
    index: HashMap<Vec<u32>, usize>,
}

/// A conjugacy class, with the member of lexicographically least permutation
/// as representative.
#[derive(Clone, Debug)]
pub struct ConjClass {
    pub members: Vec<usize>,
    pub rep: usize,
}

pub fn enumerate(rs: &RootSystem, gens: &[usize]) -> Result<WeylGroup> {
    let n = rs.roots.len();
    let gen_perms: Vec<Vec<u32>> = gens.iter().map(|&g| rs.reflection_perm(g)).collect();
    let id: Vec<u32> = (0..n as u32).collect();
    let mut group = WeylGroup {
        gens: gens.to_vec(),
        elements: vec![WeylElement { perm: id.clone(), word: Vec::new() }],
        gen_elems: Vec::new(),
        index: HashMap::from([(id, 0usize)]),
    };
    let mut frontier = vec![0usize];
    while let Some(cur) = frontier.pop() {
        let cur_perm = group.elements[cur].perm.clone();
        let cur_word = group.elements[cur].word.clone();
        for (gi, gp) in gen_perms.iter().enumerate() {
            // Right multiplication: (w s)(r) = w(s(r)).
            let perm: Vec<u32> = (0..n).map(|r| cur_perm[gp[r] as usize]).collect();
            if !group.index.contains_key(&perm) {
                let mut word = cur_word.clone();
                word.push(gi);
                group.index.insert(perm.clone(), group.elements.len());
                frontier.push(group.elements.len());
                group.elements.push(WeylElement { perm, word });
                if group.elements.len() > MAX_ORDER {
                    return Err(HeckeError::Precondition(format!(
                        "reflection group exceeds the supported order bound {MAX_ORDER}"
                    )));
                }
            }
        }
    }
    for (gi, gp) in gen_perms.iter().enumerate() {
        let e = group.index[gp];
        debug_assert_eq!(group.elements[e].word, vec![gi]);
        group.gen_elems.push(e);
    }
    Ok(group)
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element_index(&self, perm: &[u32]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    /// Index of the product `elements[a] * elements[b]` (apply `b` first).
    pub fn compose(&self, a: usize, b: usize) -> usize {
        let pa = &self.elements[a].perm;
        let pb = &self.elements[b].perm;
        let perm: Vec<u32> = (0..pa.len()).map(|r| pa[pb[r] as usize]).collect();
        self.index[&perm]
    }

    pub fn inverse(&self, a: usize) -> usize {
        let pa = &self.elements[a].perm;
        let mut inv = vec![0u32; pa.len()];
        for (i, &img) in pa.iter().enumerate() {
            inv[img as usize] = i as u32;
        }
        self.index[&inv]
    }

    /// Apply element `i` to an ambient vector by unwinding its reduced word.
    pub fn apply_vec(&self, rs: &RootSystem, i: usize, x: &[Rat]) -> RatVec {
        let mut v = x.to_vec();
        for &g in self.elements[i].word.iter().rev() {
            v = rs.reflect_vec(self.gens[g], &v);
        }
        v
    }

    /// Matrix of element `i` on the span of the parent simple roots, expressed
    /// in the simple basis. Entry (r, c) is the r-th coordinate of the image
    /// of the c-th simple root.
    pub fn matrix(&self, rs: &RootSystem, i: usize) -> RatMat {
        let n = rs.rank;
        let perm = &self.elements[i].perm;
        let mut m = vec![linalg::zeros(n); n];
        for c in 0..n {
            let img = perm[rs.simple[c]] as usize;
            for r in 0..n {
                m[r][c] = Rat::from_integer(rs.root_coords[img][r].into());
            }
        }
        m
    }

    /// `det(1 - w)` on the reflection representation.
    pub fn det_one_minus(&self, rs: &RootSystem, i: usize) -> Rat {
        let m = self.matrix(rs, i);
        linalg::det(&linalg::mat_sub(&linalg::identity(rs.rank), &m))
    }

    pub fn is_elliptic(&self, rs: &RootSystem, i: usize) -> bool {
        !self.det_one_minus(rs, i).is_zero()
    }

    /// Conjugacy classes, sorted by (size, trace of representative,
    /// representative permutation).
    pub fn conjugacy_classes(&self, rs: &RootSystem) -> Vec<ConjClass> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut members = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &g in &self.gen_elems {
                    // Generators are involutions, so g x g is the conjugate.
                    let y = self.compose(self.compose(g, x), g);
                    if !seen[y] {
                        seen[y] = true;
                        members.push(y);
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            let rep = *members
                .iter()
                .min_by_key(|&&m| self.elements[m].perm.clone())
                .unwrap();
            classes.push(ConjClass { members, rep });
        }
        classes.sort_by_key(|c| {
            let m = self.matrix(rs, c.rep);
            let trace: Rat = (0..rs.rank).map(|i| m[i][i].clone()).sum();
            (c.members.len(), trace, self.elements[c.rep].perm.clone())
        });
        classes
    }

    pub fn elliptic_class_count(&self, rs: &RootSystem) -> usize {
        self.conjugacy_classes(rs)
            .iter()
            .filter(|c| self.is_elliptic(rs, c.rep))
            .count()
    }

    /// Elliptic pairing of two class functions given by their values per
    /// element: `|W|^-1 sum_w det(1 - w) f(w) g(w)`.
    pub fn elliptic_pairing<F, G>(&self, rs: &RootSystem, f: F, g: G) -> Rat
    where
        F: Fn(usize) -> Rat,
        G: Fn(usize) -> Rat,
    {
        let mut acc = Rat::zero();
        for i in 0..self.order() {
            let d = self.det_one_minus(rs, i);
            if d.is_zero() {
                continue;
            }
            acc += d * f(i) * g(i);
        }
        acc / Rat::from_integer(self.order().into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linform::rat;
    use crate::rootdata::build_root_system;
    use num::Signed;

    #[test]
    fn group_orders() {
        let g2 = build_root_system("G2", 2).unwrap();
        assert_eq!(enumerate(&g2, &g2.simple).unwrap().order(), 12);
        let f4 = build_root_system("F4", 4).unwrap();
        assert_eq!(enumerate(&f4, &f4.simple).unwrap().order(), 1152);
        let c3 = build_root_system("Cn-datum", 3).unwrap();
        assert_eq!(enumerate(&c3, &c3.simple).unwrap().order(), 48);
        let a3 = build_root_system("An", 3).unwrap();
        assert_eq!(enumerate(&a3, &a3.simple).unwrap().order(), 24);
    }

    #[test]
    fn perm_and_vector_actions_agree() {
        let f4 = build_root_system("F4", 4).unwrap();
        let w = enumerate(&f4, &f4.simple).unwrap();
        for i in (0..w.order()).step_by(97) {
            for r in (0..f4.roots.len()).step_by(7) {
                let img = w.apply_vec(&f4, i, &f4.roots[r]);
                assert_eq!(f4.index_of(&img), Some(w.elements[i].perm[r] as usize));
            }
            let inv = w.inverse(i);
            assert_eq!(w.compose(i, inv), 0);
        }
    }

    #[test]
    fn class_counts_and_ellipticity() {
        let g2 = build_root_system("G2", 2).unwrap();
        let wg = enumerate(&g2, &g2.simple).unwrap();
        let classes = wg.conjugacy_classes(&g2);
        assert_eq!(classes.len(), 6);
        assert_eq!(wg.elliptic_class_count(&g2), 3);
        // Class sizes of W(G2).
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2, 3, 3]);

        let f4 = build_root_system("F4", 4).unwrap();
        let wf = enumerate(&f4, &f4.simple).unwrap();
        assert_eq!(wf.conjugacy_classes(&f4).len(), 25);
        assert_eq!(wf.elliptic_class_count(&f4), 9);
    }

    #[test]
    fn det_one_minus_is_a_nonnegative_integer() {
        let c3 = build_root_system("Cn-datum", 3).unwrap();
        let w = enumerate(&c3, &c3.simple).unwrap();
        for i in 0..w.order() {
            let d = w.det_one_minus(&c3, i);
            assert!(d.denom() == &num::BigInt::from(1));
            assert!(!d.is_negative(), "det(1-w) = {d} negative");
        }
    }

    #[test]
    fn elliptic_pairing_of_trivial_character() {
        // <1, 1>_ell over W(A1) is 1: only the reflection is elliptic, with
        // det(1 - w) = 2, averaged over the 2 elements.
        let a1 = build_root_system("An", 1).unwrap();
        let w = enumerate(&a1, &a1.simple).unwrap();
        let one = |_: usize| rat(1, 1);
        assert_eq!(w.elliptic_pairing(&a1, one, one), rat(1, 1));
    }
}
