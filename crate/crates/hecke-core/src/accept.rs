//! Batch acceptance suite: eleven self-contained checks covering table
//! reproduction, the sign machinery, the equal-parameter formal degree, the
//! three-parameter type-C family, and output determinism. Used both by the
//! command-line `accept` subcommand and by the integration test.

use crate::cnfamily::{
    bipartitions, build_module, is_discrete_series, restrict_to_weyl, Bipartition,
};
use crate::linform::{rat, LinForm, Params, Rat};
use crate::massfn::{
    admissible_directions, cancelling_pairs, evaluate_regularized, graded_forms, is_residual_at,
    mass_function, reeder_m, sign_graded,
};
use crate::precise::Fx;
use crate::residual::{classify_residual, orbit, residual_orbits, ResidualOrbit};
use crate::rootdata::{build_root_system, pseudo_levi_subsystems, RootSystem};
use crate::tables::reconcile;
use crate::weylgrp;
use crate::Result;
use num::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

fn equal_parameter_point() -> Params {
    Params::from([("k1".to_string(), Rat::one()), ("k2".to_string(), Rat::one())])
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x6865636b65)
}

/// A random rational parameter point with denominator 16, both coordinates
/// nonzero in [-3, 3].
fn random_point(r: &mut ChaCha8Rng) -> Params {
    let coord = |r: &mut ChaCha8Rng| loop {
        let n: i64 = r.gen_range(-48..=48);
        if n != 0 {
            return rat(n, 16);
        }
    };
    Params::from([("k1".to_string(), coord(r)), ("k2".to_string(), coord(r))])
}

fn point_is_regular(rs: &RootSystem, o: &ResidualOrbit, at: &Params) -> bool {
    let (num, den) = graded_forms(rs, &o.subsystem, &o.rep);
    num.iter()
        .chain(den.iter())
        .all(|f| !f.eval(at).map(|v| v.is_zero()).unwrap_or(true))
}

fn criterion_1() -> Result<(bool, String)> {
    let r = reconcile("g2")?;
    let bijective = r.unmatched_rows.is_empty()
        && r.orbit_matches.len() == 5
        && r.orbit_matches.iter().all(|m| m.row_labels.len() == 1);
    Ok((
        bijective && r.row_count == 5,
        format!("{} orbits against {} rows, unmatched {:?}", r.orbit_matches.len(), r.row_count, r.unmatched_rows),
    ))
}

fn criterion_2() -> Result<(bool, String)> {
    let r = reconcile("f4")?;
    let doubled: Vec<&Vec<String>> = r
        .orbit_matches
        .iter()
        .map(|m| &m.row_labels)
        .filter(|l| l.len() == 2)
        .collect();
    let shape_ok = r.orbit_matches.len() == 18
        && r.row_count == 19
        && r.unmatched_rows.is_empty()
        && doubled.len() == 1
        && *doubled[0] == vec!["b8".to_string(), "b9".to_string()];
    let f4 = build_root_system("F4", 4)?;
    let mut counts: Vec<usize> = pseudo_levi_subsystems(&f4)?
        .iter()
        .map(|s| residual_orbits(&f4, s).map(|o| o.len()))
        .collect::<Result<_>>()?;
    counts.sort_unstable_by(|a, b| b.cmp(a));
    Ok((
        shape_ok && counts == vec![8, 5, 3, 1, 1],
        format!("orbit counts {:?}, doubled rows {:?}", counts, doubled),
    ))
}

fn criterion_3() -> Result<(bool, String)> {
    let g2 = reconcile("g2")?;
    let f4 = reconcile("f4")?;
    Ok((
        g2.ledger_total == 5 && f4.ledger_total == 19,
        format!("elliptic ledgers g2 {:?} = {}, f4 {:?} = {}", g2.ledger, g2.ledger_total, f4.ledger, f4.ledger_total),
    ))
}

fn criterion_4() -> Result<(bool, String)> {
    let g2 = reconcile("g2")?;
    let f4 = reconcile("f4")?;
    let g2_signs: Vec<i8> = g2.sign_checks.iter().map(|c| c.computed).collect();
    let all_ok = g2.sign_checks.iter().chain(&f4.sign_checks).all(|c| c.ok);
    let b11 = f4.sign_checks.iter().find(|c| c.row == "b11");
    let non_ds_zero = b11.map(|c| c.expected.is_none() && c.computed == 0).unwrap_or(false);
    Ok((
        all_ok && non_ds_zero && g2_signs == vec![1, -1, 1, 1, 1],
        format!("g2 signs {:?}, f4 checks all ok: {}, b11 regularized to zero: {}", g2_signs, all_ok, non_ds_zero),
    ))
}

fn criterion_5() -> Result<(bool, String)> {
    let mut r = rng();
    let mut tested = 0;
    for tag in ["G2", "F4"] {
        let rs = build_root_system(tag, if tag == "G2" { 2 } else { 4 })?;
        for o in classify_residual(&rs)? {
            let m = mass_function(&rs, &o.subsystem, &o.rep);
            let mut done = 0;
            while done < 20 {
                let at = random_point(&mut r);
                if !point_is_regular(&rs, &o, &at) {
                    continue;
                }
                let exact = sign_graded(&rs, &o.subsystem, &o.rep, &at)?;
                let numeric = evaluate_regularized(&m, &at, &rat(2, 1), None)?;
                // The comparison is only claimed where the magnitude clears
                // the tolerance; resample points that land too close to zero.
                if !numeric.value.abs_exceeds_pow10(20) {
                    continue;
                }
                if numeric.vanishing_order != 0 || numeric.sign != exact {
                    return Ok((
                        false,
                        format!("sign mismatch for {} orbit at {:?}", tag, at),
                    ));
                }
                done += 1;
                tested += 1;
            }
        }
    }
    Ok((true, format!("{tested} regular points agreed in sign with magnitude above 1e-20")))
}

fn criterion_6() -> Result<(bool, String)> {
    let at = equal_parameter_point();
    let mut checked = 0;
    for tag in ["G2", "F4"] {
        let rs = build_root_system(tag, if tag == "G2" { 2 } else { 4 })?;
        for o in classify_residual(&rs)? {
            if !is_residual_at(&rs, &o.subsystem, &o.rep, &at)? {
                continue;
            }
            let m = reeder_m(&rs, &o.subsystem, &o.rep)?;
            if m.normalized_at_zero() != Rat::one() {
                return Ok((false, format!("normalization failed for a {tag} point")));
            }
            for q in [2i64, 3, 5] {
                if !m.eval(&rat(q, 1)).is_positive() {
                    return Ok((false, format!("non-positive value at q = {q} for a {tag} point")));
                }
            }
            checked += 1;
        }
    }
    Ok((checked > 0, format!("{checked} equal-parameter residual points positive at q = 2, 3, 5")))
}

fn criterion_7() -> Result<(bool, String)> {
    let triples = [(3, 2, 5), (7, 3, 2), (1000, 2, 2)];
    let mut built = 0;
    for n in 1..=4 {
        for bp in bipartitions(n) {
            for (v0, v1, v2) in triples {
                // The relation suite runs inside the constructor.
                build_module(&bp, &rat(v0, 1), &rat(v1, 1), &rat(v2, 1))?;
                built += 1;
            }
        }
    }
    Ok((true, format!("{built} modules passed the full relation suite")))
}

fn criterion_8() -> Result<(bool, String)> {
    let (v0, v1, v2) = (rat(1000, 1), rat(2, 1), rat(2, 1));
    for n in 1..=3 {
        for bp in bipartitions(n) {
            let m = build_module(&bp, &v0, &v1, &v2)?;
            if !is_discrete_series(&m) {
                return Ok((false, format!("{bp} fails at the dominant triple")));
            }
        }
    }
    let single = Bipartition::parse("1|")?;
    let m = build_module(&single, &rat(1, 4), &rat(2, 1), &rat(2, 1))?;
    Ok((
        !is_discrete_series(&m),
        "all n <= 3 pass at (1000, 2, 2); (1|) fails at (1/4, 2, 2)".into(),
    ))
}

fn criterion_9() -> Result<(bool, String)> {
    for n in 1..=3usize {
        let mut seen = Vec::new();
        for bp in bipartitions(n) {
            let r = restrict_to_weyl(&bp)?;
            if r.norm() != Rat::one() {
                return Ok((false, format!("norm of {bp} is {}", r.norm())));
            }
            let expected_compact: Vec<i8> = std::iter::repeat(-1i8)
                .take(bp.lambda.iter().sum())
                .chain(std::iter::repeat(1i8).take(bp.mu.iter().sum()))
                .collect();
            if r.compact_part != expected_compact {
                return Ok((false, format!("compact part of {bp} is {:?}", r.compact_part)));
            }
            if seen.contains(&r.character) {
                return Ok((false, format!("duplicate character at {bp}")));
            }
            seen.push(r.character);
        }
    }
    Ok((true, "norm-one, pairwise distinct, correct compact parts for n <= 3".into()))
}

fn criterion_10() -> Result<(bool, String)> {
    let g2 = build_root_system("G2", 2)?;
    let row = crate::tables::load_table("g2")?
        .rows
        .into_iter()
        .nth(1)
        .expect("g2 has a second row");
    let sub = pseudo_levi_subsystems(&g2)?
        .into_iter()
        .find(|s| s.is_parent())
        .expect("parent subsystem present");
    let w0 = weylgrp::enumerate(&g2, &g2.simple)?;
    let rep = crate::residual::canonical_rep(&g2, &w0, &row.coweight_coords);
    let m = mass_function(&g2, &sub, &rep);
    let at = equal_parameter_point();
    let pairs = cancelling_pairs(&m, &at)?;

    let probe = evaluate_regularized(&m, &at, &rat(2, 1), None)?;
    if probe.vanishing_order != 0 {
        return Ok((false, format!("vanishing order {}", probe.vanishing_order)));
    }
    let vanishing: Vec<LinForm> = {
        let (num, den) = graded_forms(&g2, &sub, &rep);
        num.into_iter()
            .chain(den)
            .filter(|f| f.eval(&at).map(|v| v.is_zero()).unwrap_or(false))
            .collect()
    };
    let dirs = admissible_directions(&vanishing, &m.symbols(), 2)?;
    let a = evaluate_regularized(&m, &at, &rat(2, 1), Some(&dirs[0]))?;
    let b = evaluate_regularized(&m, &at, &rat(2, 1), Some(&dirs[1]))?;
    let agree = a.sign == b.sign && Fx::rel_close(&a.value, &b.value, 30);
    Ok((
        pairs == 1 && agree,
        format!(
            "cancelling pairs {pairs}; directions agree: sign {} vs {}, values within 1e-30: {}",
            a.sign, b.sign, agree
        ),
    ))
}

fn run_twice(exe: &Path, args: &[&str]) -> std::result::Result<bool, String> {
    let run = || {
        std::process::Command::new(exe)
            .args(args)
            .output()
            .map_err(|e| format!("failed to run {exe:?}: {e}"))
    };
    let a = run()?;
    let b = run()?;
    Ok(a.stdout == b.stdout && a.status == b.status)
}

fn criterion_11(cli_exe: Option<&Path>) -> Result<(bool, String)> {
    let mut r = rng();

    // Representative invariance: 5 random conjugates at 5 random regular
    // points each, 1e-30 relative agreement of the mass values.
    for tag in ["G2", "F4"] {
        let rs = build_root_system(tag, if tag == "G2" { 2 } else { 4 })?;
        let orbits = classify_residual(&rs)?;
        // One orbit per pseudo-Levi keeps the F4 side affordable.
        let mut per_sub: BTreeMap<String, &ResidualOrbit> = BTreeMap::new();
        for o in &orbits {
            per_sub.entry(o.subsystem.s_label()).or_insert(o);
        }
        for o in per_sub.values() {
            let ws = weylgrp::enumerate(&rs, &o.subsystem.simple)?;
            let members: Vec<Vec<LinForm>> = orbit(&rs, &ws, &o.rep).into_iter().collect();
            let base = mass_function(&rs, &o.subsystem, &o.rep);
            let conjugates: Vec<&Vec<LinForm>> =
                members.choose_multiple(&mut r, 5.min(members.len())).collect();
            let mut points = Vec::new();
            while points.len() < 5 {
                let at = random_point(&mut r);
                if point_is_regular(&rs, o, &at) {
                    points.push(at);
                }
            }
            for at in &points {
                let want = evaluate_regularized(&base, at, &rat(2, 1), None)?;
                for c in &conjugates {
                    let m = mass_function(&rs, &o.subsystem, c);
                    let got = evaluate_regularized(&m, at, &rat(2, 1), None)?;
                    if got.sign != want.sign || !Fx::rel_close(&got.value, &want.value, 30) {
                        return Ok((false, format!("conjugate value drift for a {tag} orbit")));
                    }
                }
            }
        }
    }

    // Chamber constancy over the denominator-16 grid on [-3, 3]^2: the sign
    // may only depend on the sign pattern of the graded hyperplanes.
    let g2 = build_root_system("G2", 2)?;
    for o in classify_residual(&g2)? {
        let (num, den) = graded_forms(&g2, &o.subsystem, &o.rep);
        let mut walls: Vec<LinForm> = Vec::new();
        for f in num.iter().chain(den.iter()) {
            let p = f.primitive();
            if !walls.contains(&p) {
                walls.push(p);
            }
        }
        let mut chamber_sign: BTreeMap<Vec<i8>, i8> = BTreeMap::new();
        for i in -48..=48i64 {
            for j in -48..=48i64 {
                let at = Params::from([
                    ("k1".to_string(), rat(i, 16)),
                    ("k2".to_string(), rat(j, 16)),
                ]);
                let key: Vec<i8> = walls
                    .iter()
                    .map(|f| {
                        f.eval(&at).map(|v| {
                            if v.is_zero() { 0i8 } else if v.is_positive() { 1 } else { -1 }
                        })
                    })
                    .collect::<Result<_>>()?;
                if key.contains(&0) {
                    continue;
                }
                let s = sign_graded(&g2, &o.subsystem, &o.rep, &at)?;
                if let Some(prev) = chamber_sign.insert(key, s) {
                    if prev != s {
                        return Ok((false, "sign changed within a chamber".into()));
                    }
                }
            }
        }
    }

    // Output determinism: byte-identical stdout across repeated runs.
    let detail = match cli_exe {
        Some(exe) => {
            let commands: [&[&str]; 4] = [
                &["elliptic", "g2", "--json"],
                &["residual", "f4", "--json"],
                &["table", "g2", "--format", "json"],
                &["cn", "--n", "2", "--params", "1000,2,2", "--json"],
            ];
            for args in commands {
                match run_twice(exe, args) {
                    Ok(true) => {}
                    Ok(false) => return Ok((false, format!("output differs for {args:?}"))),
                    Err(e) => return Ok((false, e)),
                }
            }
            "invariance, chamber constancy, and CLI determinism all hold".to_string()
        }
        None => "invariance and chamber constancy hold; no binary supplied for the determinism replay".to_string(),
    };
    Ok((true, detail))
}

/// Run the full suite. `cli_exe` points at the command-line binary for the
/// determinism replay in criterion 11; without it that sub-check is skipped.
pub fn run_all(cli_exe: Option<&Path>) -> Vec<CriterionOutcome> {
    let criteria: Vec<(&str, Box<dyn Fn() -> Result<(bool, String)>>)> = vec![
        ("table reproduction, rank 2", Box::new(criterion_1)),
        ("table reproduction, rank 4", Box::new(criterion_2)),
        ("elliptic class ledger", Box::new(criterion_3)),
        ("recomputed sign columns", Box::new(criterion_4)),
        ("graded sign vs numeric sign", Box::new(criterion_5)),
        ("equal-parameter positivity", Box::new(criterion_6)),
        ("type-C relation suite", Box::new(criterion_7)),
        ("type-C discrete-series chamber", Box::new(criterion_8)),
        ("type-C elliptic restrictions", Box::new(criterion_9)),
        ("regularization soundness", Box::new(criterion_10)),
        ("invariance and determinism", Box::new(move || criterion_11(cli_exe))),
    ];
    let budgets_ms: [u128; 11] = [
        1_000, 30_000, u128::MAX, u128::MAX, u128::MAX, u128::MAX, u128::MAX, u128::MAX,
        u128::MAX, u128::MAX, u128::MAX,
    ];
    let mut out = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (mut passed, mut detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let millis = start.elapsed().as_millis();
        if millis > budgets_ms[i] {
            passed = false;
            detail = format!("{detail}; exceeded the {} ms budget ({millis} ms)", budgets_ms[i]);
        }
        out.push(CriterionOutcome {
            index: i + 1,
            name: name.to_string(),
            passed,
            detail,
            millis,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // The full suite runs in the dedicated integration test; here only the
    // cheap shape checks.
    #[test]
    fn single_criteria_report_details() {
        let (ok, detail) = criterion_1().unwrap();
        assert!(ok, "{detail}");
        let (ok, detail) = criterion_3().unwrap();
        assert!(ok, "{detail}");
        let (ok, detail) = criterion_8().unwrap();
        assert!(ok, "{detail}");
    }
}
