//! Single-binary command-line front end. Every command assembles one JSON
//! envelope; the csv and md renderers print the same payload. All iteration
//! orders are deterministic, so identical argv yields byte-identical output.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hecke_core::cnfamily::{
    bipartitions, build_module, central_character_string, is_discrete_series, restrict_to_weyl,
    Bipartition,
};
use hecke_core::linform::{rat_str, Params, Rat};
use hecke_core::massfn::{
    evaluate_regularized, is_residual_at, mass_function, reeder_m, sign_graded, singular_locus,
};
use hecke_core::residual::{classify_residual, ResidualOrbit};
use hecke_core::rootdata::{build_root_system, RootSystem};
use hecke_core::tables::{load_table, reconcile, Table};
use hecke_core::weylgrp;
use hecke_core::HeckeError;
use num::One;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hecke", version, about = "Discrete-series invariants of affine Hecke algebras with unequal parameters", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit the JSON envelope.
    #[arg(long, global = true, conflicts_with_all = ["csv", "md"])]
    json: bool,
    /// Render the payload as CSV.
    #[arg(long, global = true, conflicts_with = "md")]
    csv: bool,
    /// Render the payload as Markdown (default).
    #[arg(long, global = true)]
    md: bool,
    /// Forbid randomized search; all commands here are deterministic anyway.
    #[arg(long, global = true)]
    seedless: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Md,
    Csv,
    Json,
}

#[derive(Args)]
struct AtArgs {
    /// Parameter point, e.g. "k1=1,k2=1"; rationals as p/q.
    #[arg(long, default_value = "k1=1,k2=1")]
    at: String,
    /// Base v > 1 for regularized evaluation, as p/q.
    #[arg(long, default_value = "2")]
    v: String,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a root system realization.
    Root {
        /// Type tag: g2, f4, an, bn, cn-datum, dn.
        kind: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Weyl group order, class count, and elliptic class count.
    Elliptic {
        kind: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Enumerate generic residual point orbits over the pseudo-Levi subsystems.
    Residual { kind: String },
    /// Regularized mass-function evaluation per orbit.
    Mass {
        kind: String,
        /// Restrict to one orbit index from `residual` ordering.
        #[arg(long)]
        orbit: Option<usize>,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Exact graded sign per orbit at a parameter point.
    Sign {
        kind: String,
        #[command(flatten)]
        at: AtArgs,
    },
    /// Equal-parameter formal-degree data per residual orbit.
    Reeder {
        kind: String,
        /// Evaluation points for the rational function, comma separated.
        #[arg(long, default_value = "2,3,5")]
        q: String,
    },
    /// Three-parameter type-C module family on bitableaux.
    Cn {
        #[arg(long)]
        n: usize,
        /// Parameter triple "v0,v1,v2"; rationals as p/q.
        #[arg(long)]
        params: String,
        /// Restrict to one bipartition "lambda|mu", comma-separated parts.
        #[arg(long)]
        bp: Option<String>,
        /// Report the discrete-series test.
        #[arg(long)]
        ds: bool,
        /// Report the central character string.
        #[arg(long)]
        cc: bool,
        /// Report the parameter-1 restriction to the finite Weyl group.
        #[arg(long)]
        restrict: bool,
    },
    /// Print a classification table, optionally with the reconciliation report.
    Table {
        /// g2 or f4.
        which: String,
        #[arg(long, value_enum, default_value = "md")]
        format: TableFormat,
        #[arg(long)]
        reconcile: bool,
    },
    /// Run the acceptance suite and print a pass/fail ledger.
    Accept,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help and version requests are successes; bad argv is a usage error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = run(cli);
    std::process::exit(code);
}

fn exit_code(e: &HeckeError) -> i32 {
    match e {
        HeckeError::Usage(_) => 1,
        HeckeError::Precondition(_) | HeckeError::Internal(_) => 2,
    }
}

fn run(cli: Cli) -> i32 {
    let render = if cli.json {
        Render::Json
    } else if cli.csv {
        Render::Csv
    } else {
        Render::Md
    };
    let outcome = dispatch(&cli);
    match outcome {
        Ok((command, inputs, result, extra_code)) => {
            // Commands that render their own output return None here.
            if let Some(result) = result {
                let envelope = json!({
                    "schema_version": "1.0.0",
                    "command": command,
                    "inputs": inputs,
                    "result": result,
                    "warnings": [],
                });
                print_envelope(&envelope, render);
            }
            extra_code
        }
        Err(e) => {
            eprintln!("{e}");
            exit_code(&e)
        }
    }
}

enum Render {
    Json,
    Csv,
    Md,
}

fn print_envelope(envelope: &Value, render: Render) {
    match render {
        Render::Json => println!("{}", serde_json::to_string_pretty(envelope).unwrap()),
        Render::Csv => {
            println!("key,value");
            let mut rows = Vec::new();
            flatten("", &envelope["result"], &mut rows);
            for (k, v) in rows {
                println!("{},{}", k, csv_quote(&v));
            }
        }
        Render::Md => {
            println!("# {}", envelope["command"].as_str().unwrap_or("result"));
            let mut rows = Vec::new();
            flatten("", &envelope["result"], &mut rows);
            for (k, v) in rows {
                println!("- **{}**: {}", k, v);
            }
        }
    }
}

fn csv_quote(v: &str) -> String {
    if v.contains(',') || v.contains('"') {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

/// Depth-first flattening of the result payload into dotted-path rows.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar_str(other))),
    }
}

fn scalar_str(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

type CommandOutput = (String, Value, Option<Value>, i32);

fn dispatch(cli: &Cli) -> hecke_core::Result<CommandOutput> {
    match &cli.command {
        Command::Root { kind, rank } => {
            let rs = build(kind, *rank)?;
            let inputs = json!({"kind": kind, "rank": rs.rank, "seedless": cli.seedless});
            let simples: Vec<String> = rs
                .simple
                .iter()
                .map(|&s| {
                    let coords: Vec<String> = rs.roots[s].iter().map(rat_str).collect();
                    format!("[{}] ({})", coords.join(", "), rs.param_label[s])
                })
                .collect();
            let result = json!({
                "type": rs.type_tag,
                "rank": rs.rank,
                "roots": rs.roots.len(),
                "positive_roots": rs.num_positive(),
                "simple_roots": simples,
            });
            Ok(("root".into(), inputs, Some(result), 0))
        }
        Command::Elliptic { kind, rank } => {
            let rs = build(kind, *rank)?;
            let w = weylgrp::enumerate(&rs, &rs.simple)?;
            let inputs = json!({"kind": kind, "rank": rs.rank, "seedless": cli.seedless});
            let result = json!({
                "order": w.order(),
                "conjugacy_class_count": w.conjugacy_classes(&rs).len(),
                "elliptic_class_count": w.elliptic_class_count(&rs),
            });
            Ok(("elliptic".into(), inputs, Some(result), 0))
        }
        Command::Residual { kind } => {
            let rs = build_exceptional(kind)?;
            let orbits = classify_residual(&rs)?;
            let inputs = json!({"kind": kind, "seedless": cli.seedless});
            let result = json!({
                "orbits": orbits.iter().enumerate().map(orbit_json).collect::<Vec<_>>(),
                "total": orbits.len(),
            });
            Ok(("residual".into(), inputs, Some(result), 0))
        }
        Command::Mass { kind, orbit, at } => {
            let rs = build_exceptional(kind)?;
            let point = parse_at(&at.at)?;
            let v = parse_rat(&at.v)?;
            let orbits = select(classify_residual(&rs)?, *orbit)?;
            let inputs = json!({"kind": kind, "orbit": orbit, "at": at.at, "v": at.v, "seedless": cli.seedless});
            let mut rows = Vec::new();
            for (i, o) in orbits {
                let m = mass_function(&rs, &o.subsystem, &o.rep);
                let rv = evaluate_regularized(&m, &point, &v, None)?;
                let locus: Vec<String> =
                    singular_locus(&m).iter().map(|f| f.to_string()).collect();
                rows.push(json!({
                    "orbit": orbit_json((i, &o)),
                    "value": rv.value.to_decimal_string(),
                    "sign": rv.sign,
                    "vanishing_order": rv.vanishing_order,
                    "num_vanishing": rv.num_vanishing,
                    "den_vanishing": rv.den_vanishing,
                    "singular_locus": locus,
                }));
            }
            Ok(("mass".into(), inputs, Some(json!({"evaluations": rows})), 0))
        }
        Command::Sign { kind, at } => {
            let rs = build_exceptional(kind)?;
            let point = parse_at(&at.at)?;
            let orbits = classify_residual(&rs)?;
            let inputs = json!({"kind": kind, "at": at.at, "seedless": cli.seedless});
            let mut rows = Vec::new();
            for (i, o) in orbits.iter().enumerate() {
                rows.push(json!({
                    "orbit": orbit_json((i, o)),
                    "sign": sign_graded(&rs, &o.subsystem, &o.rep, &point)?,
                }));
            }
            Ok(("sign".into(), inputs, Some(json!({"signs": rows})), 0))
        }
        Command::Reeder { kind, q } => {
            let rs = build_exceptional(kind)?;
            let qs: Vec<Rat> = q
                .split(',')
                .map(parse_rat)
                .collect::<hecke_core::Result<_>>()?;
            let mut ones = Params::new();
            for l in &rs.param_label {
                ones.entry(l.clone()).or_insert_with(Rat::one);
            }
            let inputs = json!({"kind": kind, "q": q, "seedless": cli.seedless});
            let mut rows = Vec::new();
            for (i, o) in classify_residual(&rs)?.iter().enumerate() {
                if !is_residual_at(&rs, &o.subsystem, &o.rep, &ones)? {
                    continue;
                }
                let m = reeder_m(&rs, &o.subsystem, &o.rep)?;
                let values: Vec<String> = qs.iter().map(|x| rat_str(&m.eval(x))).collect();
                rows.push(json!({
                    "orbit": orbit_json((i, o)),
                    "constant": rat_str(&m.constant),
                    "q_power": m.q_power,
                    "numerator_cyclotomic": m.num_cyclotomic,
                    "denominator_cyclotomic": m.den_cyclotomic,
                    "values": values,
                }));
            }
            Ok(("reeder".into(), inputs, Some(json!({"points": rows})), 0))
        }
        Command::Cn { n, params, bp, ds, cc, restrict } => {
            let triple: Vec<Rat> = params
                .split(',')
                .map(parse_rat)
                .collect::<hecke_core::Result<_>>()?;
            if triple.len() != 3 {
                return Err(HeckeError::Usage(format!(
                    "--params expects three rationals, got {params:?}"
                )));
            }
            let list = match bp {
                Some(s) => {
                    let b = Bipartition::parse(s)?;
                    if b.n() != *n {
                        return Err(HeckeError::Usage(format!(
                            "bipartition {b} has size {}, not --n {n}",
                            b.n()
                        )));
                    }
                    vec![b]
                }
                None => bipartitions(*n),
            };
            let inputs = json!({
                "n": n, "params": params, "bp": bp, "ds": ds, "cc": cc,
                "restrict": restrict, "seedless": cli.seedless,
            });
            let mut rows = Vec::new();
            for b in list {
                let m = build_module(&b, &triple[0], &triple[1], &triple[2])?;
                let mut row = serde_json::Map::new();
                row.insert("bipartition".into(), json!(b.to_string()));
                row.insert("dim".into(), json!(m.dim()));
                if *ds {
                    row.insert("discrete_series".into(), json!(is_discrete_series(&m)));
                }
                if *cc {
                    let s: Vec<String> = central_character_string(&b)
                        .iter()
                        .map(|(u, f)| format!("({}{}, {})", if *u < 0 { "-" } else { "+" }, 1, f))
                        .collect();
                    row.insert("central_character".into(), json!(s));
                }
                if *restrict {
                    let r = restrict_to_weyl(&b)?;
                    let character: Vec<String> = r.character.iter().map(rat_str).collect();
                    row.insert(
                        "restriction".into(),
                        json!({
                            "dim": r.dim,
                            "class_sizes": r.class_sizes,
                            "character": character,
                            "compact_part": r.compact_part,
                            "norm": rat_str(&r.norm()),
                        }),
                    );
                }
                rows.push(Value::Object(row));
            }
            Ok(("cn".into(), inputs, Some(json!({"modules": rows})), 0))
        }
        Command::Table { which, format, reconcile: rec } => {
            let table = load_table(which)?;
            let inputs = json!({"which": which, "reconcile": rec, "seedless": cli.seedless});
            let mut result = table_json(&table);
            if *rec {
                let r = reconcile(which)?;
                let matches: Vec<Value> = r
                    .orbit_matches
                    .iter()
                    .map(|m| {
                        json!({
                            "s": m.s_type,
                            "rep": m.rep.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                            "rows": m.row_labels,
                        })
                    })
                    .collect();
                let signs: Vec<Value> = r
                    .sign_checks
                    .iter()
                    .map(|c| {
                        json!({
                            "row": c.row,
                            "expected": c.expected,
                            "computed": c.computed,
                            "ok": c.ok,
                        })
                    })
                    .collect();
                let ledger: Vec<Value> =
                    r.ledger.iter().map(|(s, n)| json!({"s": s, "elliptic_classes": n})).collect();
                result["reconciliation"] = json!({
                    "orbit_matches": matches,
                    "unmatched_rows": r.unmatched_rows,
                    "sign_checks": signs,
                    "ledger": ledger,
                    "ledger_total": r.ledger_total,
                    "row_count": r.row_count,
                    "ok": r.ok(),
                });
            }
            // The table subcommand has its own format flag per the interface
            // contract; it wins over the global render flags.
            match format {
                TableFormat::Json => {
                    let envelope = json!({
                        "schema_version": "1.0.0",
                        "command": "table",
                        "inputs": inputs,
                        "result": result,
                        "warnings": [],
                    });
                    println!("{}", serde_json::to_string_pretty(&envelope).unwrap());
                }
                TableFormat::Csv => print_table_csv(&table),
                TableFormat::Md => print_table_md(&table, &result),
            }
            // Rendering already happened; return an empty result so the
            // generic printer stays quiet.
            Ok(("table".into(), inputs, None, 0))
        }
        Command::Accept => {
            let exe = std::env::current_exe().ok();
            let outcomes = hecke_core::accept::run_all(exe.as_deref());
            let mut failed = 0;
            for o in &outcomes {
                let status = if o.passed { "PASS" } else { "FAIL" };
                println!("{status} {:2} {} ({} ms): {}", o.index, o.name, o.millis, o.detail);
                if !o.passed {
                    failed += 1;
                }
            }
            println!(
                "{} of {} acceptance criteria passed",
                outcomes.len() - failed,
                outcomes.len()
            );
            let inputs = json!({"seedless": cli.seedless});
            Ok(("accept".into(), inputs, None, if failed > 0 { 3 } else { 0 }))
        }
    }
}

fn build(kind: &str, rank: Option<usize>) -> hecke_core::Result<RootSystem> {
    let (tag, default_rank) = match kind.to_lowercase().as_str() {
        "g2" => ("G2", Some(2)),
        "f4" => ("F4", Some(4)),
        "an" => ("An", None),
        "bn" => ("Bn", None),
        "cn-datum" | "cn" => ("Cn-datum", None),
        "dn" => ("Dn", None),
        other => return Err(HeckeError::Usage(format!("unknown root system kind {other:?}"))),
    };
    let r = rank
        .or(default_rank)
        .ok_or_else(|| HeckeError::Usage(format!("{kind} requires --rank")))?;
    build_root_system(tag, r)
}

fn build_exceptional(kind: &str) -> hecke_core::Result<RootSystem> {
    match kind.to_lowercase().as_str() {
        "g2" => build_root_system("G2", 2),
        "f4" => build_root_system("F4", 4),
        other => Err(HeckeError::Usage(format!(
            "classification commands support g2 and f4, got {other:?}"
        ))),
    }
}

fn orbit_json((i, o): (usize, &ResidualOrbit)) -> Value {
    json!({
        "index": i,
        "s": o.subsystem.s_label(),
        "rep": o.rep.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "orbit_size": o.orbit_size,
    })
}

fn select(
    orbits: Vec<ResidualOrbit>,
    pick: Option<usize>,
) -> hecke_core::Result<Vec<(usize, ResidualOrbit)>> {
    match pick {
        None => Ok(orbits.into_iter().enumerate().collect()),
        Some(i) if i < orbits.len() => Ok(vec![(i, orbits.into_iter().nth(i).unwrap())]),
        Some(i) => Err(HeckeError::Usage(format!(
            "orbit index {i} out of range, {} orbits",
            orbits.len()
        ))),
    }
}

fn parse_rat(s: impl AsRef<str>) -> hecke_core::Result<Rat> {
    let s = s.as_ref().trim();
    let bad = || HeckeError::Usage(format!("malformed rational {s:?}, expected p or p/q"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: i64 = n.parse().map_err(|_| bad())?;
    let den: i64 = d.parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(bad());
    }
    Ok(hecke_core::rat(num, den))
}

fn parse_at(s: &str) -> hecke_core::Result<Params> {
    let mut out = Params::new();
    for pair in s.split(',') {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| HeckeError::Usage(format!("malformed assignment {pair:?}")))?;
        out.insert(k.trim().to_string(), parse_rat(v)?);
    }
    Ok(out)
}

fn table_json(t: &Table) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            let cells: Vec<Value> = r
                .columns
                .iter()
                .map(|c| json!({"column": c.name, "label": c.label, "sign": c.sign}))
                .collect();
            json!({
                "label": r.label,
                "s": r.s_type,
                "coords": r.coweight_coords.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                "d_b": rat_str(&r.d_b),
                "cells": cells,
            })
        })
        .collect();
    json!({
        "parent": t.parent,
        "columns": t.column_names,
        "rows": rows,
    })
}

fn table_cell(t: &Table, row: usize, col: &str) -> String {
    match t.rows[row].column(col) {
        Some(c) if c.sign.is_some() => {
            format!("{} {}", c.label, if c.sign == Some(1) { "+1" } else { "-1" })
        }
        Some(c) => c.label.clone(),
        None => String::new(),
    }
}

fn print_table_csv(t: &Table) {
    let mut header = vec!["label".to_string(), "s".into(), "coords".into(), "d_b".into()];
    header.extend(t.column_names.iter().cloned());
    println!("{}", header.iter().map(|h| csv_quote(h)).collect::<Vec<_>>().join(","));
    for (i, r) in t.rows.iter().enumerate() {
        let coords: Vec<String> = r.coweight_coords.iter().map(|f| f.to_string()).collect();
        let mut row = vec![
            r.label.clone(),
            r.s_type.clone(),
            format!("[{}]", coords.join("; ")),
            rat_str(&r.d_b),
        ];
        for c in &t.column_names {
            row.push(table_cell(t, i, c));
        }
        println!("{}", row.iter().map(|x| csv_quote(x)).collect::<Vec<_>>().join(","));
    }
}

fn print_table_md(t: &Table, full: &Value) {
    let mut header = vec!["label".to_string(), "s".into(), "coords".into(), "d_b".into()];
    header.extend(t.column_names.iter().cloned());
    println!("| {} |", header.join(" | "));
    println!("|{}|", vec!["---"; header.len()].join("|"));
    for (i, r) in t.rows.iter().enumerate() {
        let coords: Vec<String> = r.coweight_coords.iter().map(|f| f.to_string()).collect();
        let mut row = vec![
            r.label.clone(),
            r.s_type.clone(),
            format!("[{}]", coords.join(", ")),
            rat_str(&r.d_b),
        ];
        for c in &t.column_names {
            row.push(table_cell(t, i, c));
        }
        println!("| {} |", row.join(" | "));
    }
    if let Some(rec) = full.get("reconciliation") {
        println!();
        println!("## reconciliation");
        let mut rows = Vec::new();
        flatten("", rec, &mut rows);
        for (k, v) in rows {
            println!("- **{}**: {}", k, v);
        }
    }
}
