//! Exact root-system realizations, reflections, and the enumeration of
//! full-rank reflection subsystems realized by torsion points of the torus
//! (pseudo-Levi subsystems), together with the parameter bookkeeping that
//! attaches one symbol per root orbit.
//!
//! Realizations are fixed once so that coordinates are reproducible bit for
//! bit: G2 lives in a 2-dimensional space with the simple roots as basis
//! vectors (squared lengths 6 and 2, Gram matrix encoding the 150 degree
//! angle); F4, B/C/D and the C-type datum live in the standard orthonormal
//! epsilon coordinates; A_n lives in the sum-zero hyperplane of Z^{n+1}.

use crate::linalg::{self, RatMat, RatVec};
use crate::linform::{rat, Rat};
use crate::{HeckeError, Result};
use itertools::Itertools;
use num::{One, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// A crystallographic root system in a fixed ambient space with a rational
/// inner product. Roots are stored both in ambient coordinates and as integer
/// coordinate vectors over the simple basis.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub type_tag: String,
    pub rank: usize,
    pub ambient_dim: usize,
    pub gram: RatMat,
    pub roots: Vec<RatVec>,
    /// Integer coordinates of each root over the simple roots.
    pub root_coords: Vec<Vec<i64>>,
    /// Indices of the simple roots, in diagram order.
    pub simple: Vec<usize>,
    pub positive: Vec<bool>,
    /// 0 = longest length class.
    pub length_class: Vec<usize>,
    /// Parameter symbol attached to the orbit of each root.
    pub param_label: Vec<String>,
    index: BTreeMap<RatVec, usize>,
}

impl RootSystem {
    pub fn inner(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let gy = linalg::mat_vec(&self.gram, y);
        linalg::dot(x, &gy)
    }

    pub fn sq_length(&self, i: usize) -> Rat {
        self.inner(&self.roots[i], &self.roots[i])
    }

    pub fn index_of(&self, v: &[Rat]) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// Reflect ambient vector `x` in the hyperplane of root `b`.
    pub fn reflect_vec(&self, b: usize, x: &[Rat]) -> RatVec {
        let beta = &self.roots[b];
        let c = &(self.inner(x, beta) * rat(2, 1)) / &self.sq_length(b);
        x.iter().zip(beta).map(|(xi, bi)| xi - &(&c * bi)).collect()
    }

    /// The permutation of the root list induced by the reflection in root `b`.
    pub fn reflection_perm(&self, b: usize) -> Vec<u32> {
        self.roots
            .iter()
            .map(|r| {
                let img = self.reflect_vec(b, r);
                self.index_of(&img).expect("reflection left the root set") as u32
            })
            .collect()
    }

    pub fn num_positive(&self) -> usize {
        self.positive.iter().filter(|p| **p).count()
    }
}

fn unit_vec(dim: usize, i: usize) -> RatVec {
    let mut v = linalg::zeros(dim);
    v[i] = Rat::one();
    v
}

fn e_minus(dim: usize, i: usize, j: usize) -> RatVec {
    let mut v = linalg::zeros(dim);
    v[i] = Rat::one();
    v[j] = -Rat::one();
    v
}

/// Build the canonical realization of a supported type.
///
/// Simple-root ordering follows the affine diagrams used throughout: for G2,
/// the long simple root comes first (parameter `k1`) and the short one second
/// (`k2`); for F4 the two long simple roots carry `k1` and the two short ones
/// `k2`; the C-type datum uses `F_0 = {e_i - e_{i+1}, e_n}` with labels `v1`
/// on the length-2 orbit and `v2` on the short orbit.
pub fn build_root_system(type_tag: &str, rank: usize) -> Result<RootSystem> {
    if rank == 0 || rank > 8 {
        return Err(HeckeError::Usage(format!("rank {rank} out of supported range 1..=8")));
    }
    let (ambient, gram, simples): (usize, RatMat, Vec<RatVec>) = match type_tag {
        "G2" => {
            if rank != 2 {
                return Err(HeckeError::Usage("G2 has rank 2".into()));
            }
            let gram = vec![
                vec![rat(6, 1), rat(-3, 1)],
                vec![rat(-3, 1), rat(2, 1)],
            ];
            (2, gram, vec![unit_vec(2, 0), unit_vec(2, 1)])
        }
        "F4" => {
            if rank != 4 {
                return Err(HeckeError::Usage("F4 has rank 4".into()));
            }
            let a4 = vec![rat(1, 2), rat(-1, 2), rat(-1, 2), rat(-1, 2)];
            (
                4,
                linalg::identity(4),
                vec![e_minus(4, 1, 2), e_minus(4, 2, 3), unit_vec(4, 3), a4],
            )
        }
        "An" => {
            let dim = rank + 1;
            let simples = (0..rank).map(|i| e_minus(dim, i, i + 1)).collect();
            (dim, linalg::identity(dim), simples)
        }
        "Bn" | "Cn-datum" => {
            let mut simples: Vec<RatVec> =
                (0..rank - 1).map(|i| e_minus(rank, i, i + 1)).collect();
            simples.push(unit_vec(rank, rank - 1));
            (rank, linalg::identity(rank), simples)
        }
        "Dn" => {
            if rank < 2 {
                return Err(HeckeError::Usage("Dn needs rank >= 2".into()));
            }
            let mut simples: Vec<RatVec> =
                (0..rank - 1).map(|i| e_minus(rank, i, i + 1)).collect();
            let mut last = unit_vec(rank, rank - 1);
            last[rank - 2] = Rat::one();
            simples.push(last);
            (rank, linalg::identity(rank), simples)
        }
        other => {
            return Err(HeckeError::Usage(format!("unknown root system type {other}")));
        }
    };

    // Reflection closure of the simple roots.
    let mut rs = RootSystem {
        type_tag: type_tag.to_string(),
        rank,
        ambient_dim: ambient,
        gram,
        roots: Vec::new(),
        root_coords: Vec::new(),
        simple: Vec::new(),
        positive: Vec::new(),
        length_class: Vec::new(),
        param_label: Vec::new(),
        index: BTreeMap::new(),
    };
    let mut all: BTreeMap<RatVec, ()> = BTreeMap::new();
    let mut queue: Vec<RatVec> = simples.clone();
    for s in &simples {
        all.insert(s.clone(), ());
    }
    // Temporarily install gram-only state to use reflect_vec's formula.
    let inner = |x: &[Rat], y: &[Rat]| -> Rat {
        let gy = linalg::mat_vec(&rs.gram, y);
        linalg::dot(x, &gy)
    };
    while let Some(r) = queue.pop() {
        for s in &simples {
            let c = &(inner(&r, s) * rat(2, 1)) / &inner(s, s);
            let img: RatVec = r.iter().zip(s).map(|(ri, si)| ri - &(&c * si)).collect();
            if !all.contains_key(&img) {
                all.insert(img.clone(), ());
                queue.push(img);
            }
        }
    }

    // Coordinates over the simple basis; sort canonically by those coordinates.
    let basis_cols: RatMat = (0..ambient)
        .map(|d| simples.iter().map(|s| s[d].clone()).collect())
        .collect();
    let mut decorated: Vec<(Vec<i64>, RatVec)> = Vec::new();
    for (root, ()) in all {
        let coords = linalg::solve_rectangular(&basis_cols, &root)
            .ok_or_else(|| HeckeError::Internal("root outside simple-root span".into()))?;
        let int_coords: Vec<i64> = coords
            .iter()
            .map(|c| {
                if c.denom().is_one() {
                    c.numer().to_i64().ok_or(())
                } else {
                    Err(())
                }
            })
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| HeckeError::Internal("non-integer simple-basis coordinates".into()))?;
        decorated.push((int_coords, root));
    }
    decorated.sort();
    for (i, (coords, root)) in decorated.into_iter().enumerate() {
        rs.index.insert(root.clone(), i);
        rs.positive.push(coords.iter().all(|c| *c >= 0));
        rs.root_coords.push(coords);
        rs.roots.push(root);
    }
    for s in &simples {
        rs.simple.push(rs.index_of(s).expect("simple root present"));
    }

    // Length classes, longest first.
    let mut lengths: Vec<Rat> = Vec::new();
    for i in 0..rs.roots.len() {
        let l = rs.sq_length(i);
        if !lengths.contains(&l) {
            lengths.push(l);
        }
    }
    lengths.sort_by(|a, b| b.cmp(a));
    for i in 0..rs.roots.len() {
        let l = rs.sq_length(i);
        rs.length_class.push(lengths.iter().position(|x| *x == l).unwrap());
    }

    // Per-orbit parameter symbols. For the two-parameter exceptional types the
    // orbits are exactly the length classes.
    let labels: Vec<&str> = match type_tag {
        "G2" | "F4" | "Bn" => vec!["k1", "k2"],
        "Cn-datum" => vec!["v1", "v2"],
        _ => vec!["k"],
    };
    for i in 0..rs.roots.len() {
        let class = rs.length_class[i].min(labels.len() - 1);
        rs.param_label.push(labels[class].to_string());
    }
    // Rank-1 B/C datum has only the short orbit.
    if (type_tag == "Bn" || type_tag == "Cn-datum") && rank == 1 {
        let short = labels[1].to_string();
        for l in rs.param_label.iter_mut() {
            *l = short.clone();
        }
    }

    Ok(rs)
}

/// Fundamental coweights: vectors with `<alpha_j, w_i> = delta_ij` against the
/// ambient inner product, lying in the span of the roots.
pub fn fundamental_coweights(rs: &RootSystem) -> Vec<RatVec> {
    let n = rs.rank;
    let simple_gram: RatMat = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| rs.inner(&rs.roots[rs.simple[i]], &rs.roots[rs.simple[j]]))
                .collect()
        })
        .collect();
    let inv = linalg::invert(&simple_gram).expect("simple Gram matrix is invertible");
    (0..n)
        .map(|i| {
            let mut v = linalg::zeros(rs.ambient_dim);
            for j in 0..n {
                let c = &inv[j][i];
                for (vd, sd) in v.iter_mut().zip(&rs.roots[rs.simple[j]]) {
                    *vd += c * sd;
                }
            }
            v
        })
        .collect()
}

/// A full-rank reflection subsystem of a parent system, together with the
/// torsion coweight (Kac point) realizing it as the integrality system of a
/// compact torus element `s`.
#[derive(Clone, Debug)]
pub struct Subsystem {
    /// Sorted parent root indices.
    pub root_indices: Vec<usize>,
    /// Parent root indices of a simple system for the subsystem.
    pub simple: Vec<usize>,
    pub type_tag: String,
    /// Values of the Kac coweight on the parent simple roots, each in [0, 1).
    pub kac_values: RatVec,
}

impl Subsystem {
    pub fn contains(&self, root: usize) -> bool {
        self.root_indices.binary_search(&root).is_ok()
    }

    /// Value of the Kac point on an arbitrary parent root.
    pub fn alpha_kac(&self, rs: &RootSystem, root: usize) -> Rat {
        rs.root_coords[root]
            .iter()
            .zip(&self.kac_values)
            .map(|(c, v)| Rat::from_integer((*c).into()) * v)
            .sum()
    }

    /// Whether this is the trivial torsion point (the parent itself, s = 1).
    pub fn is_parent(&self) -> bool {
        self.kac_values.iter().all(|v| v.is_zero())
    }

    /// Display label for the compact part: "1" for the parent.
    pub fn s_label(&self) -> String {
        if self.is_parent() {
            "1".into()
        } else {
            self.type_tag.clone()
        }
    }
}

/// Close a set of parent roots under mutual reflections.
fn reflection_closure(rs: &RootSystem, start: &[usize]) -> Vec<usize> {
    let mut set: Vec<bool> = vec![false; rs.roots.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &i in start {
        if !set[i] {
            set[i] = true;
            stack.push(i);
        }
    }
    while let Some(a) = stack.pop() {
        let members: Vec<usize> = (0..rs.roots.len()).filter(|&i| set[i]).collect();
        for &b in &members {
            for (x, y) in [(a, b), (b, a)] {
                let img = rs.reflect_vec(x, &rs.roots[y]);
                let idx = rs.index_of(&img).expect("closed root set");
                if !set[idx] {
                    set[idx] = true;
                    stack.push(idx);
                }
            }
        }
    }
    (0..rs.roots.len()).filter(|&i| set[i]).collect()
}

fn subsystem_rank(rs: &RootSystem, roots: &[usize]) -> usize {
    let m: RatMat = roots.iter().map(|&i| rs.roots[i].clone()).collect();
    linalg::rank(&m)
}

/// Simple system of a subsystem: indecomposable parent-positive members.
fn subsystem_simples(rs: &RootSystem, roots: &[usize]) -> Vec<usize> {
    let positives: Vec<usize> = roots.iter().copied().filter(|&i| rs.positive[i]).collect();
    positives
        .iter()
        .copied()
        .filter(|&p| {
            !positives.iter().any(|&q| {
                positives.iter().any(|&r| {
                    q != p
                        && r != p
                        && rs.roots[q]
                            .iter()
                            .zip(&rs.roots[r])
                            .map(|(a, b)| a + b)
                            .collect::<RatVec>()
                            == rs.roots[p]
                })
            })
        })
        .collect()
}

/// Partition subsystem simples into irreducible components (connectivity by
/// non-orthogonality).
fn components(rs: &RootSystem, simples: &[usize]) -> Vec<Vec<usize>> {
    let n = simples.len();
    let mut comp_of: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, i: usize) -> usize {
        if c[i] != i {
            let r = find(c, c[i]);
            c[i] = r;
        }
        c[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if !rs.inner(&rs.roots[simples[i]], &rs.roots[simples[j]]).is_zero() {
                let (a, b) = (find(&mut comp_of, i), find(&mut comp_of, j));
                if a != b {
                    comp_of[a] = b;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let r = find(&mut comp_of, i);
        groups.entry(r).or_default().push(simples[i]);
    }
    groups.into_values().collect()
}

/// Roots of a subsystem lying in the span of one component's simples.
fn component_roots(rs: &RootSystem, roots: &[usize], comp_simples: &[usize]) -> Vec<usize> {
    let cols: RatMat = (0..rs.ambient_dim)
        .map(|d| comp_simples.iter().map(|&s| rs.roots[s][d].clone()).collect())
        .collect();
    roots
        .iter()
        .copied()
        .filter(|&r| linalg::solve_rectangular(&cols, &rs.roots[r]).is_some())
        .collect()
}

/// Lowest root of an irreducible component: minimal coordinate sum over the
/// component's simple basis.
fn lowest_root(rs: &RootSystem, comp_roots: &[usize], comp_simples: &[usize]) -> usize {
    let cols: RatMat = (0..rs.ambient_dim)
        .map(|d| comp_simples.iter().map(|&s| rs.roots[s][d].clone()).collect())
        .collect();
    comp_roots
        .iter()
        .copied()
        .min_by_key(|&r| {
            let c = linalg::solve_rectangular(&cols, &rs.roots[r]).expect("component root");
            let h: Rat = c.iter().sum();
            (h, rs.root_coords[r].clone())
        })
        .expect("nonempty component")
}

/// Classify one irreducible component by rank, cardinality and length data.
fn component_type(rs: &RootSystem, comp_roots: &[usize]) -> String {
    let rank = subsystem_rank(rs, comp_roots);
    let count = comp_roots.len();
    let mut lengths: Vec<Rat> = comp_roots.iter().map(|&r| rs.sq_length(r)).collect();
    lengths.sort();
    let max_len = lengths.last().unwrap().clone();
    let n_long = lengths.iter().filter(|l| **l == max_len).count();
    match (rank, count) {
        (1, 2) => "A1".into(),
        (2, 6) => "A2".into(),
        (2, 8) => "B2".into(),
        (2, 12) => "G2".into(),
        (3, 12) => "A3".into(),
        (3, 18) => {
            if n_long == 12 {
                "B3".into()
            } else {
                "C3".into()
            }
        }
        (4, 20) => "A4".into(),
        (4, 24) => "D4".into(),
        (4, 32) => {
            if n_long == 24 {
                "B4".into()
            } else {
                "C4".into()
            }
        }
        (4, 48) => "F4".into(),
        (r, c) => format!("?{r}.{c}"),
    }
}

fn type_name(rs: &RootSystem, roots: &[usize], simples: &[usize]) -> String {
    let comps = components(rs, simples);
    let mut labels: Vec<(usize, String)> = comps
        .iter()
        .map(|c| {
            let cr = component_roots(rs, roots, c);
            (c.len(), component_type(rs, &cr))
        })
        .collect();
    // Larger components first, then alphabetically.
    labels.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut out = String::new();
    let mut i = 0;
    while i < labels.len() {
        let mut j = i;
        while j < labels.len() && labels[j].1 == labels[i].1 {
            j += 1;
        }
        if j - i > 1 {
            out.push_str(&(j - i).to_string());
        }
        out.push_str(&labels[i].1);
        i = j;
    }
    out
}

/// All candidate Kac-point values with denominator at most `max_den`, in [0,1).
fn kac_candidate_values(max_den: i64) -> Vec<Rat> {
    let mut vals = vec![Rat::zero()];
    for b in 2..=max_den {
        for a in 1..b {
            let v = rat(a, b);
            if !vals.contains(&v) {
                vals.push(v);
            }
        }
    }
    vals
}

/// Search for a Kac point of the subsystem: values on the parent simple roots,
/// denominator at most 6, such that exactly the subsystem roots are integral.
/// Candidates are tried by increasing denominator lcm, then lexicographically,
/// so the minimal-denominator point is found first.
fn find_kac_point(rs: &RootSystem, roots: &[usize]) -> Option<RatVec> {
    let vals = kac_candidate_values(6);
    let n = rs.rank;
    let mut tuples: Vec<(num::BigInt, Vec<Rat>)> = (0..n)
        .map(|_| vals.clone())
        .multi_cartesian_product()
        .map(|tuple| {
            let mut l = num::BigInt::one();
            for t in &tuple {
                l = num::integer::lcm(l, t.denom().clone());
            }
            (l, tuple)
        })
        .collect();
    tuples.sort();
    let in_sub: Vec<bool> = {
        let mut v = vec![false; rs.roots.len()];
        for &r in roots {
            v[r] = true;
        }
        v
    };
    'outer: for (_, p) in tuples {
        for r in 0..rs.roots.len() {
            let val: Rat = rs.root_coords[r]
                .iter()
                .zip(&p)
                .map(|(c, v)| Rat::from_integer((*c).into()) * v)
                .sum();
            let integral = val.denom().is_one();
            if integral != in_sub[r] {
                continue 'outer;
            }
        }
        return Some(p);
    }
    None
}

/// Enumerate pseudo-Levi subsystems of a G2 or F4 system, up to parent-Weyl
/// conjugacy: iterate Borel-de Siebenthal node deletion over full-rank
/// reflection subsystems and keep those realized by a torsion point
/// (denominator at most 6). The parent itself (s = 1) is included.
pub fn pseudo_levi_subsystems(rs: &RootSystem) -> Result<Vec<Subsystem>> {
    if rs.type_tag != "G2" && rs.type_tag != "F4" {
        return Err(HeckeError::Usage(
            "pseudo-Levi enumeration is supported for G2 and F4".into(),
        ));
    }
    let w = crate::weylgrp::enumerate(rs, &rs.simple)?;
    let all: Vec<usize> = (0..rs.roots.len()).collect();
    let mut found: Vec<Vec<usize>> = vec![all.clone()];
    let mut queue: Vec<Vec<usize>> = vec![all];
    let conjugate_seen = |found: &[Vec<usize>], cand: &[usize]| -> bool {
        for elem in &w.elements {
            let mut img: Vec<usize> =
                cand.iter().map(|&r| elem.perm[r] as usize).collect();
            img.sort_unstable();
            if found.iter().any(|f| f == &img) {
                return true;
            }
        }
        false
    };
    while let Some(current) = queue.pop() {
        let simples = subsystem_simples(rs, &current);
        let comps = components(rs, &simples);
        for comp in &comps {
            let comp_rts = component_roots(rs, &current, comp);
            if comp_rts.len() == 2 {
                // A1 component: extension-and-deletion returns the same system.
                continue;
            }
            let low = lowest_root(rs, &comp_rts, comp);
            for &delete in comp {
                let mut gens: Vec<usize> = simples
                    .iter()
                    .copied()
                    .filter(|&s| s != delete)
                    .collect();
                gens.push(low);
                let closed = reflection_closure(rs, &gens);
                if subsystem_rank(rs, &closed) != rs.rank {
                    continue;
                }
                if closed.len() == rs.roots.len() {
                    continue;
                }
                if !conjugate_seen(&found, &closed) {
                    found.push(closed.clone());
                    queue.push(closed);
                }
            }
        }
    }
    let mut out = Vec::new();
    for roots in found {
        if let Some(kac) = find_kac_point(rs, &roots) {
            let simples = subsystem_simples(rs, &roots);
            let tag = if roots.len() == rs.roots.len() {
                rs.type_tag.clone()
            } else {
                type_name(rs, &roots, &simples)
            };
            out.push(Subsystem {
                root_indices: roots,
                simple: simples,
                type_tag: tag,
                kac_values: kac,
            });
        }
    }
    out.sort_by(|a, b| a.type_tag.cmp(&b.type_tag).then(a.root_indices.cmp(&b.root_indices)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_counts_match_classification() {
        // Reflection-closure enumeration from the simple roots alone.
        let g2 = build_root_system("G2", 2).unwrap();
        assert_eq!(g2.roots.len(), 12);
        assert_eq!(g2.num_positive(), 6);
        let f4 = build_root_system("F4", 4).unwrap();
        assert_eq!(f4.roots.len(), 48);
        assert_eq!(f4.num_positive(), 24);
        let c2 = build_root_system("Cn-datum", 2).unwrap();
        assert_eq!(c2.roots.len(), 8);
        // Positive roots {e1-e2, e1+e2, e1, e2}.
        let pos: Vec<RatVec> = (0..8).filter(|&i| c2.positive[i]).map(|i| c2.roots[i].clone()).collect();
        let want: Vec<RatVec> = vec![
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1)],
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        for w in &want {
            assert!(pos.contains(w), "missing positive root {w:?}");
        }
        let a3 = build_root_system("An", 3).unwrap();
        assert_eq!(a3.roots.len(), 12);
        let d4 = build_root_system("Dn", 4).unwrap();
        assert_eq!(d4.roots.len(), 24);
        let b3 = build_root_system("Bn", 3).unwrap();
        assert_eq!(b3.roots.len(), 18);
        assert!(build_root_system("nosuch", 2).is_err());
        assert!(build_root_system("An", 9).is_err());
    }

    #[test]
    fn closure_and_negation_invariants() {
        for (tag, rank) in [("G2", 2), ("F4", 4), ("Cn-datum", 3)] {
            let rs = build_root_system(tag, rank).unwrap();
            for i in 0..rs.roots.len() {
                let neg: RatVec = rs.roots[i].iter().map(|x| -x).collect();
                assert!(rs.index_of(&neg).is_some());
                for j in 0..rs.roots.len() {
                    let img = rs.reflect_vec(i, &rs.roots[j]);
                    assert!(rs.index_of(&img).is_some());
                }
            }
        }
    }

    #[test]
    fn g2_lengths_and_labels_follow_the_diagram() {
        let g2 = build_root_system("G2", 2).unwrap();
        let a1 = g2.simple[0];
        let a2 = g2.simple[1];
        assert_eq!(g2.sq_length(a1), rat(6, 1));
        assert_eq!(g2.sq_length(a2), rat(2, 1));
        assert_eq!(g2.param_label[a1], "k1");
        assert_eq!(g2.param_label[a2], "k2");
        let f4 = build_root_system("F4", 4).unwrap();
        assert_eq!(f4.param_label[f4.simple[0]], "k1");
        assert_eq!(f4.param_label[f4.simple[1]], "k1");
        assert_eq!(f4.param_label[f4.simple[2]], "k2");
        assert_eq!(f4.param_label[f4.simple[3]], "k2");
    }

    #[test]
    fn coweights_are_dual_to_simples() {
        for (tag, rank) in [("G2", 2), ("F4", 4), ("An", 3)] {
            let rs = build_root_system(tag, rank).unwrap();
            let cw = fundamental_coweights(&rs);
            for i in 0..rank {
                for j in 0..rank {
                    let want = if i == j { Rat::one() } else { Rat::zero() };
                    assert_eq!(rs.inner(&rs.roots[rs.simple[j]], &cw[i]), want);
                }
            }
        }
    }

    #[test]
    fn g2_highest_root_height_consistency() {
        // Direct evaluation against the root list: the highest root of G2 is
        // 2*a1 + 3*a2, so it evaluates to 2 on w1 and 3 on w2.
        let g2 = build_root_system("G2", 2).unwrap();
        let cw = fundamental_coweights(&g2);
        let highest = g2
            .root_coords
            .iter()
            .position(|c| c == &vec![2, 3])
            .expect("highest root present");
        assert_eq!(g2.inner(&g2.roots[highest], &cw[0]), rat(2, 1));
        assert_eq!(g2.inner(&g2.roots[highest], &cw[1]), rat(3, 1));
    }

    #[test]
    fn pseudo_levis_of_g2() {
        let g2 = build_root_system("G2", 2).unwrap();
        let subs = pseudo_levi_subsystems(&g2).unwrap();
        let mut tags: Vec<String> = subs.iter().map(|s| s.type_tag.clone()).collect();
        tags.sort();
        assert_eq!(tags, vec!["2A1", "A2", "G2"]);
        // The A2 subsystem consists of the six long roots.
        let a2 = subs.iter().find(|s| s.type_tag == "A2").unwrap();
        assert_eq!(a2.root_indices.len(), 6);
        for &r in &a2.root_indices {
            assert_eq!(g2.sq_length(r), rat(6, 1));
        }
        for s in &subs {
            // Kac point integrality pattern characterizes the subsystem.
            for r in 0..g2.roots.len() {
                let integral = s.alpha_kac(&g2, r).denom().is_one();
                assert_eq!(integral, s.contains(r));
            }
        }
    }

    #[test]
    fn pseudo_levis_of_f4() {
        let f4 = build_root_system("F4", 4).unwrap();
        let subs = pseudo_levi_subsystems(&f4).unwrap();
        let mut tags: Vec<String> = subs.iter().map(|s| s.type_tag.clone()).collect();
        tags.sort();
        assert_eq!(tags, vec!["2A2", "A3A1", "B4", "C3A1", "F4"]);
    }
}
