use std::fmt::Write as _;

use serde_json::{json, Value};

use diamond_core::cancellation::{
    self, independence_sweep, restricted_injectivity, theorem_bound_sweep, Counterexample, Scope,
    Violation,
};
use diamond_core::composed::{brawley_carlitz_verify, composed_product};
use diamond_core::conjecture::{
    self, find_witness, verify_range, Outcome, SearchTask, Strategy, SweepReport,
};
use diamond_core::{DiamondOp, Error, FieldCtx, Limits, Poly, Result};

use crate::args::{CheckArgs, Cli, Command, ConjectureCmd, StrategyArg, What};
use crate::exit;
use crate::field_spec::parse_tower;

pub const SCHEMA_VERSION: u32 = 1;

pub fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    let mut limits = Limits::default();
    if let Some(b) = g.budget {
        limits.budget = b;
    }
    if let Some(c) = g.cap {
        limits.cap = c;
    }
    match &cli.command {
        Command::Compose { f, g: gtext, op } => {
            let k = parse_tower(&g.field)?;
            compose(cli, &k, f, gtext, op, &limits)
        }
        Command::Check(args) => {
            let k = parse_tower(&g.field)?;
            check(cli, &k, args, &limits)
        }
        Command::Conjecture(ConjectureCmd::Find { p, k, l, strategy }) => {
            find(cli, *p, *k, *l, *strategy, &limits)
        }
        Command::Conjecture(ConjectureCmd::Sweep { bound, out }) => {
            sweep(cli, *bound, out.as_deref(), &limits)
        }
    }
}

fn envelope(command: &str, k: Option<&FieldCtx>, seed: u64, body: Value) -> Value {
    let mut v = json!({"schema_version": SCHEMA_VERSION, "command": command, "seed": seed});
    if let Some(k) = k {
        v["field"] = json!({
            "p": k.p(),
            "degree": k.abs_degree(),
            "cardinality": k.cardinality().to_string(),
            "tower": k.tower().iter().rev().skip(1).map(|c| c.modulus().unwrap().to_string()).collect::<Vec<_>>(),
        });
    }
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn emit(cli: &Cli, json: Value, text: String) {
    if cli.global.json {
        println!("{}", serde_json::to_string_pretty(&json).unwrap());
    } else {
        print!("{text}");
    }
}

fn compose(cli: &Cli, k: &FieldCtx, f: &str, g: &str, op: &str, limits: &Limits) -> Result<u8> {
    let f = Poly::parse(f, k)?;
    let g = Poly::parse(g, k)?;
    let d = DiamondOp::parse(op, k)?;
    let cp = composed_product(&f, &g, &d, cli.global.seed, limits)?;
    let irreducible = cp.poly.is_irreducible()?;
    let body = json!({
        "f": f, "g": g, "op": d,
        "product": cp.poly,
        "coefficients": cp.poly.coeffs(),
        "degree": cp.poly.degree(),
        "irreducible": irreducible,
        "working_degree": cp.working_degree,
        "distinct_values": cp.distinct_values,
    });
    let text = format!(
        "product: {}\ndegree: {}\nirreducible: {irreducible}\n",
        cp.poly,
        cp.poly.degree().unwrap()
    );
    emit(
        cli,
        envelope("compose", Some(k), cli.global.seed, body),
        text,
    );
    Ok(exit::OK)
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::PreconditionViolated(format!("--{name} is required")))
}

fn need_str<'a>(v: &'a Option<String>, name: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::PreconditionViolated(format!("--{name} is required")))
}

fn diamond_arg(args: &CheckArgs, k: &FieldCtx) -> Result<DiamondOp> {
    match (&args.phi, &args.op) {
        (Some(_), Some(_)) => Err(Error::PreconditionViolated(
            "give --phi or --op, not both".into(),
        )),
        (Some(phi), None) => DiamondOp::parse(&format!("phi={phi}"), k),
        (None, Some(op)) => DiamondOp::parse(op, k),
        (None, None) => Err(Error::PreconditionViolated(
            "--phi or --op is required".into(),
        )),
    }
}

fn describe(cx: &Counterexample) -> String {
    let k = cx.k.map(|k| format!(", k = {k}")).unwrap_or_default();
    match cx.kind {
        Violation::Right => format!(
            "α⋄β = α⋄β' with α = {}, β = {}, β' = {}{k}, value {}",
            cx.alpha, cx.beta, cx.partner, cx.value
        ),
        Violation::Left => format!(
            "α⋄β = α'⋄β with α = {}, α' = {}, β = {}{k}, value {}",
            cx.alpha, cx.partner, cx.beta, cx.value
        ),
    }
}

fn verdict(holds: bool) -> u8 {
    if holds {
        exit::OK
    } else {
        exit::PROPERTY_FAILS
    }
}

fn check(cli: &Cli, k: &FieldCtx, args: &CheckArgs, limits: &Limits) -> Result<u8> {
    let seed = cli.global.seed;
    let name = match args.what {
        What::Irred => "check irred",
        What::WeakCancel => "check weak-cancel",
        What::RestrictedInj => "check restricted-inj",
        What::BcVerify => "check bc-verify",
        What::PropE3 => "check prop-e3",
        What::Independence => "check independence",
        What::TheoremSweep => "check theorem-sweep",
    };
    let mut text = String::new();
    let (holds, body) = match args.what {
        What::Irred => {
            let f = Poly::parse(need_str(&args.f, "f")?, k)?;
            let irreducible = f.is_irreducible()?;
            let degrees = f.factor_degrees()?;
            writeln!(
                text,
                "f: {f}\nirreducible: {irreducible}\ndistinct factor degrees: {degrees:?}"
            )
            .unwrap();
            (
                irreducible,
                json!({"f": f, "holds": irreducible, "irreducible": irreducible, "factor_degrees": degrees}),
            )
        }
        What::WeakCancel => {
            let (m, n) = (need(args.m, "m")?, need(args.n, "n")?);
            let d = diamond_arg(args, k)?;
            let scope = if args.orbit_only {
                Scope::OrbitOnly
            } else {
                Scope::Full
            };
            let wc = cancellation::weak_cancellation(&d, k, m, n, limits, scope)?;
            writeln!(text, "op: {d}\nm: {m}\nn: {n}\nholds: {}", wc.holds).unwrap();
            if let Some(cx) = &wc.counterexample {
                writeln!(text, "counterexample: {}", describe(cx)).unwrap();
            }
            let scope = if args.orbit_only {
                "orbit_only"
            } else {
                "full"
            };
            (
                wc.holds,
                json!({"op": d, "m": m, "n": n, "scope": scope, "holds": wc.holds, "result": wc}),
            )
        }
        What::RestrictedInj => {
            let m = need(args.m, "m")?;
            let psi = Poly::parse(need_str(&args.psi, "psi")?, k)?;
            let ri = restricted_injectivity(&psi, m, limits)?;
            writeln!(text, "psi: {psi}\nm: {m}\nholds: {}", ri.holds).unwrap();
            if let Some((a, kk)) = &ri.counterexample {
                writeln!(text, "counterexample: ψ(α) = ψ(σ^{kk}(α)) with α = {a}").unwrap();
            }
            (
                ri.holds,
                json!({"psi": psi, "m": m, "holds": ri.holds, "result": ri}),
            )
        }
        What::BcVerify => {
            let (m, n) = (need(args.m, "m")?, need(args.n, "n")?);
            let d = diamond_arg(args, k)?;
            match brawley_carlitz_verify(k, m, n, &d, seed, args.samples, limits) {
                Ok(r) => {
                    writeln!(
                        text,
                        "op: {d}\nm: {m}\nn: {n}\nirreducible pairs: {}\nirreducible products: {}\nreducible samples: {}\nviolations: {}\nequivalence holds: {}",
                        r.pairs,
                        r.irreducible_products,
                        r.reducible_samples,
                        r.violations.len(),
                        r.holds()
                    )
                    .unwrap();
                    for v in &r.violations {
                        writeln!(
                            text,
                            "violation: f = {}, g = {}, product = {}",
                            v.f, v.g, v.product
                        )
                        .unwrap();
                    }
                    (r.holds(), json!({"holds": r.holds(), "result": r}))
                }
                Err(Error::WeakCancellationFails(msg)) => {
                    writeln!(text, "refused: weak cancellation fails: {msg}").unwrap();
                    (false, json!({"holds": false, "refused": msg}))
                }
                Err(e) => return Err(e),
            }
        }
        What::PropE3 => {
            let (m, n) = (need(args.m, "m")?, need(args.n, "n")?);
            match conjecture::prop_e3_equivalence(k, m, n, limits) {
                Ok(r) => {
                    let flags = r.flags();
                    writeln!(
                        text,
                        "m: {m} (m1 = {})\nn: {n} (n1 = {})\n(i): {}\n(ii): {}\n(iii): {}\n(iv): {}\nequal: true",
                        r.m1, r.n1, flags[0], flags[1], flags[2], flags[3]
                    )
                    .unwrap();
                    if let Some(f) = &r.cond_iv {
                        writeln!(text, "(iv) witness: {f}").unwrap();
                    }
                    let tight = if flags[3] {
                        conjecture::tightness_witness(k, m, n, limits)?
                    } else {
                        None
                    };
                    if let Some(t) = &tight {
                        writeln!(text, "tight diamond: phi={} fails weak cancellation", t.phi)
                            .unwrap();
                    }
                    (
                        true,
                        json!({"m": m, "n": n, "holds": true, "flags": flags, "result": r, "tightness": tight}),
                    )
                }
                Err(Error::EquivalenceViolation(msg)) => {
                    writeln!(text, "equivalence violated: {msg}").unwrap();
                    (
                        false,
                        json!({"m": m, "n": n, "holds": false, "violation": msg}),
                    )
                }
                Err(e) => return Err(e),
            }
        }
        What::Independence => {
            let m = need(args.m, "m")?;
            let s = independence_sweep(k, m, limits)?;
            let holds = s.failures.is_empty();
            writeln!(
                text,
                "m: {m}\nchecked: {}\nrank deficits: {}",
                s.checked,
                s.failures.len()
            )
            .unwrap();
            (holds, json!({"m": m, "holds": holds, "result": s}))
        }
        What::TheoremSweep => {
            let (m, n) = (need(args.m, "m")?, need(args.n, "n")?);
            let scope = if args.orbit_only {
                Scope::OrbitOnly
            } else {
                Scope::Full
            };
            let s = theorem_bound_sweep(k, m, n, scope, limits, cli.global.shards)?;
            let holds = s.failures.is_empty();
            let scope = if args.orbit_only {
                "orbit_only"
            } else {
                "full"
            };
            writeln!(
                text,
                "m: {m}\nn: {n}\nscope: {scope}\ndiamonds checked: {}\ncounterexamples: {}",
                s.checked,
                s.failures.len()
            )
            .unwrap();
            for f in &s.failures {
                writeln!(text, "phi={}: {}", f.phi, describe(&f.counterexample)).unwrap();
            }
            (
                holds,
                json!({"m": m, "n": n, "scope": scope, "holds": holds, "result": s}),
            )
        }
    };
    emit(cli, envelope(name, Some(k), seed, body), text);
    Ok(verdict(holds))
}

fn find(
    cli: &Cli,
    p: u64,
    k: usize,
    l: usize,
    strategy: StrategyArg,
    limits: &Limits,
) -> Result<u8> {
    let task = SearchTask::new(p, k, l)?;
    let strategy = match strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::FastOnly => Strategy::FastOnly,
    };
    let outcome = find_witness(task, strategy, cli.global.seed, limits)?;
    let text = match &outcome {
        Outcome::Found(w) => format!("f: {}\nc0: {}\nstrategy: {}\n", w.f, w.c0, w.source),
        Outcome::Exhausted { scanned } => {
            format!("EXHAUSTED: no witness among {scanned} candidates\n")
        }
    };
    let body = json!({"task": task, "outcome": outcome});
    emit(
        cli,
        envelope("conjecture find", None, cli.global.seed, body),
        text,
    );
    Ok(match outcome {
        Outcome::Found(_) => exit::OK,
        Outcome::Exhausted { .. } => {
            eprintln!("COUNTEREXAMPLE: ({p}, {k}, {l}) has no witness");
            exit::EXHAUSTED
        }
    })
}

fn sweep_text(r: &SweepReport) -> String {
    let mut s = String::from("# p k l p^kl strategy witness_f witness_c0 elapsed_ms\n");
    for row in &r.rows {
        let elapsed = row
            .elapsed_ms
            .map(|e| e.to_string())
            .unwrap_or_else(|| "-".into());
        writeln!(
            s,
            "{} {} {} {} {} {} {} {elapsed}",
            row.p,
            row.k,
            row.l,
            row.pkl,
            row.strategy,
            row.witness_f.as_deref().unwrap_or("-"),
            row.witness_c0.as_deref().unwrap_or("-"),
        )
        .unwrap();
    }
    writeln!(
        s,
        "# tasks {} witnessed {} exhausted {}",
        r.tasks, r.witnessed, r.exhausted
    )
    .unwrap();
    s
}

fn sweep(cli: &Cli, bound: u128, out: Option<&std::path::Path>, limits: &Limits) -> Result<u8> {
    let g = &cli.global;
    let r = verify_range(bound, g.shards, g.seed, g.timings, limits)?;
    let rendered = if g.json {
        let body = json!({"report": r});
        serde_json::to_string_pretty(&envelope("conjecture sweep", None, g.seed, body)).unwrap()
            + "\n"
    } else {
        sweep_text(&r)
    };
    match out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| {
            Error::PreconditionViolated(format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{rendered}"),
    }
    for row in r.rows.iter().filter(|r| r.witness_f.is_none()) {
        eprintln!(
            "COUNTEREXAMPLE: ({}, {}, {}) has no witness",
            row.p, row.k, row.l
        );
    }
    Ok(if r.exhausted == 0 {
        exit::OK
    } else {
        exit::EXHAUSTED
    })
}
