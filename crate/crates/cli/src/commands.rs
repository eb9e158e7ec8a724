use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use laxdyn::io::{
    dynamorphism_document, load_file, open_dynamorphism_document, serialize_spec, transition_document, BuildOptions,
    Value,
};
use laxdyn::{
    brute_force_realizations, check_lax_section, compose, compose_dynamorphisms, enumerate_realizations,
    sample_trajectory, verify_realization, EnumerateOptions, OpenDynamic, OpenDynamorphism, Realization, Report,
};
use serde_json::{json, Value as Json};

use crate::Command;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Status {
    Clean = 0,
    Violations = 1,
    Disagreement = 3,
}

impl Status {
    fn of(report: &Report) -> Status {
        if report.is_clean() {
            Status::Clean
        } else {
            Status::Violations
        }
    }
}

/// A document that parsed but failed validation: its report is the output.
struct Rejected {
    what: &'static str,
    report: Report,
}

fn load(path: &Path, options: BuildOptions) -> Result<Result<Value, Rejected>> {
    match load_file(path, options) {
        Ok((_, value)) => Ok(Ok(value)),
        Err(err) => match err.root() {
            laxdyn::Error::Invalid { what, report } => Ok(Err(Rejected {
                what,
                report: report.clone(),
            })),
            _ => Err(anyhow!(err)).with_context(|| format!("cannot load {}", path.display())),
        },
    }
}

fn emit(summary: &str, report: &Report, json: bool, mut extra: serde_json::Map<String, Json>) {
    if json {
        extra.insert("summary".into(), Json::String(summary.to_string()));
        extra.insert(
            "violations".into(),
            serde_json::to_value(report).expect("reports serialize"),
        );
        println!("{}", serde_json::to_string_pretty(&Json::Object(extra)).expect("json"));
    } else {
        println!("{summary}");
        println!("{report}");
    }
}

fn class(deterministic: bool, quasi: bool) -> &'static str {
    if deterministic {
        "deterministic"
    } else if quasi {
        "quasi-deterministic"
    } else {
        "nondeterministic"
    }
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Validate { file } => validate(&file),
        Command::Check { file, json } => check(&file, json),
        Command::Compose { f, g, out } => compose_files(&f, &g, out.as_deref()),
        Command::Morphism {
            file,
            source,
            target,
            json,
        } => morphism(&file, source.as_deref(), target.as_deref(), json),
        Command::Realize {
            file,
            total,
            maximal,
            limit,
            oracle,
            json,
        } => {
            let options = EnumerateOptions {
                total_only: total,
                maximal_only: maximal,
                limit,
            };
            realize(&file, options, oracle, json)
        }
        Command::Run {
            file,
            lam,
            start,
            schedule,
            seed,
        } => run_trajectory(&file, &lam, &start, &schedule, seed),
    }
}

fn validate(file: &Path) -> Result<Status> {
    match load(file, BuildOptions::default())? {
        Ok(value) => {
            println!("valid {}", value.kind());
            Ok(Status::Clean)
        }
        Err(rejected) => {
            println!("invalid {}", rejected.what);
            println!("{}", rejected.report);
            Ok(Status::Violations)
        }
    }
}

fn count(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

fn check(file: &Path, json: bool) -> Result<Status> {
    let value = match load(file, BuildOptions::default())? {
        Ok(value) => value,
        Err(rejected) => {
            emit(
                &format!("invalid {}", rejected.what),
                &rejected.report,
                json,
                Default::default(),
            );
            return Ok(Status::Violations);
        }
    };
    let mut extra = serde_json::Map::new();
    extra.insert("kind".into(), json!(value.kind().as_str()));
    let (summary, report) = match &value {
        Value::Engine(e) => (
            format!(
                "engine: {}, {}",
                count(e.objects().len(), "object"),
                count(e.arrow_count(), "arrow")
            ),
            Report::new(),
        ),
        Value::Functor(f) => ("functor".to_string(), laxdyn::check_functor(f)),
        Value::Transition(t) => {
            let c = class(t.is_deterministic(), t.is_quasi_deterministic());
            extra.insert("class".into(), json!(c));
            (format!("transition: {c}"), Report::new())
        }
        Value::Dynamic(d) => {
            let c = class(d.is_deterministic(), d.is_quasi_deterministic());
            extra.insert("class".into(), json!(c));
            let clock = d.is_closed() && d.is_deterministic();
            extra.insert("clock".into(), json!(clock));
            let suffix = if clock { " (a clock)" } else { "" };
            (format!("dynamic: {c}{suffix}"), d.check_laws())
        }
        Value::Dynamorphism(m) => {
            let c = class(m.is_deterministic(), m.is_quasi_deterministic());
            extra.insert("class".into(), json!(c));
            (format!("dynamorphism: {c}"), m.check())
        }
        Value::OpenDynamorphism(m) => ("open dynamorphism".to_string(), m.check()),
        Value::OpenDynamic(a) => (
            format!(
                "open dynamic: {}, {}, {}",
                count(a.clock().total_state_set().len(), "clock state"),
                count(a.alpha().total_state_set().len(), "state"),
                count(a.alpha().params().len(), "parameter")
            ),
            a.rho().check(),
        ),
        Value::Realization {
            open_dynamic,
            realization,
        } => {
            let lax = check_lax_section(open_dynamic, realization);
            extra.insert("lax_section".into(), json!(lax));
            let report = verify_realization(open_dynamic, realization)?;
            let holds = if lax { "holds" } else { "fails" };
            (format!("realization {realization}; lax section {holds}"), report)
        }
    };
    emit(&summary, &report, json, extra);
    Ok(Status::of(&report))
}

fn compose_files(f: &Path, g: &Path, out: Option<&Path>) -> Result<Status> {
    let mut loaded = Vec::new();
    for path in [f, g] {
        match load(path, BuildOptions::default())? {
            Ok(v) => loaded.push(v),
            Err(rejected) => {
                println!("invalid {} in {}", rejected.what, path.display());
                println!("{}", rejected.report);
                return Ok(Status::Violations);
            }
        }
    }
    let g_value = loaded.pop().expect("two");
    let f_value = loaded.pop().expect("two");
    let doc = match (&f_value, &g_value) {
        (Value::Transition(psi), Value::Transition(phi)) => transition_document(&compose(psi, phi)?),
        (Value::Dynamorphism(outer), Value::Dynamorphism(inner)) => {
            dynamorphism_document(&compose_dynamorphisms(outer, inner)?)
        }
        (Value::OpenDynamorphism(outer), Value::OpenDynamorphism(inner)) => {
            let composite = OpenDynamorphism::new(
                inner.source().clone(),
                outer.target().clone(),
                outer.inner().after(inner.inner())?,
                outer.clock_part().after(inner.clock_part())?,
            )?;
            open_dynamorphism_document(&composite)
        }
        (a, b) => bail!("cannot compose a {} with a {}", a.kind(), b.kind()),
    };
    let text = serialize_spec(&doc);
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(Status::Clean)
}

fn morphism(file: &Path, source: Option<&Path>, target: Option<&Path>, json: bool) -> Result<Status> {
    let mut options = BuildOptions::default();
    for (path, slot) in [(source, &mut options.source), (target, &mut options.target)] {
        let Some(path) = path else { continue };
        match load(path, BuildOptions::default())? {
            Ok(v) => *slot = Some(v),
            Err(rejected) => {
                emit(
                    &format!("invalid {} in {}", rejected.what, path.display()),
                    &rejected.report,
                    json,
                    Default::default(),
                );
                return Ok(Status::Violations);
            }
        }
    }
    let value = match load(file, options)? {
        Ok(v) => v,
        Err(rejected) => {
            emit(
                &format!("invalid {}", rejected.what),
                &rejected.report,
                json,
                Default::default(),
            );
            return Ok(Status::Violations);
        }
    };
    let (summary, report) = match &value {
        Value::Dynamorphism(m) => ("dynamorphism", m.check()),
        Value::OpenDynamorphism(m) => ("open dynamorphism", m.check()),
        other => bail!("expected a dynamorphism document, found a {}", other.kind()),
    };
    emit(summary, &report, json, Default::default());
    Ok(Status::of(&report))
}

fn load_open(file: &Path) -> Result<Result<Arc<OpenDynamic>, Rejected>> {
    Ok(match load(file, BuildOptions::default())? {
        Ok(Value::OpenDynamic(a)) => Ok(a),
        Ok(other) => bail!("expected an open_dynamic document, found a {}", other.kind()),
        Err(rejected) => Err(rejected),
    })
}

fn realization_json(r: &Realization) -> Json {
    json!({ "theta": { laxdyn::CLOSED_PARAM: r.lam() }, "sigma": r.sigma() })
}

fn realize(file: &Path, options: EnumerateOptions, oracle: bool, json: bool) -> Result<Status> {
    let a = match load_open(file)? {
        Ok(a) => a,
        Err(rejected) => {
            emit(
                &format!("invalid {}", rejected.what),
                &rejected.report,
                json,
                Default::default(),
            );
            return Ok(Status::Violations);
        }
    };
    let mut oracle_line = None;
    if oracle {
        let brute = brute_force_realizations(&a).map_err(|e| anyhow!("refusing the oracle cross-check: {e}"))?;
        let all = enumerate_realizations(&a, &EnumerateOptions::default()).realizations;
        if all != brute {
            println!("oracle disagreement");
            for r in brute.iter().filter(|r| !all.contains(r)) {
                println!("  missed: {r}");
            }
            for r in all.iter().filter(|r| !brute.contains(r)) {
                println!("  spurious: {r}");
            }
            return Ok(Status::Disagreement);
        }
        oracle_line = Some(brute.len());
    }
    let found = enumerate_realizations(&a, &options);
    if json {
        let mut out = serde_json::Map::new();
        out.insert(
            "realizations".into(),
            Json::Array(found.realizations.iter().map(realization_json).collect()),
        );
        out.insert("truncated".into(), json!(found.truncated));
        if let Some(n) = oracle_line {
            out.insert("oracle".into(), json!({ "agrees": true, "realizations": n }));
        }
        println!("{}", serde_json::to_string_pretty(&Json::Object(out)).expect("json"));
    } else {
        for r in &found.realizations {
            println!("{r}");
        }
        let more = if found.truncated { " (truncated)" } else { "" };
        println!("{}{more}", count(found.realizations.len(), "realization"));
        if let Some(total) = oracle_line {
            println!("oracle agrees on all {}", count(total, "realization"));
        }
    }
    Ok(Status::Clean)
}

fn run_trajectory(file: &Path, lam: &str, start: &str, schedule: &[String], seed: u64) -> Result<Status> {
    let a = match load_open(file)? {
        Ok(a) => a,
        Err(rejected) => {
            println!("invalid {}", rejected.what);
            println!("{}", rejected.report);
            return Ok(Status::Violations);
        }
    };
    let steps: Vec<&str> = schedule.iter().map(String::as_str).filter(|s| !s.is_empty()).collect();
    let run = sample_trajectory(&a, lam, start, &steps, seed)?;
    for (i, (t, u)) in run.steps.iter().enumerate() {
        println!("{i}\t{t}\t{u}");
    }
    if let Some(i) = run.dead_end {
        println!(
            "dead end at step {i}: '{}' has no successor under '{}'",
            run.steps[i].1, steps[i]
        );
    }
    Ok(Status::Clean)
}
