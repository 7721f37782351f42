//! Subcommand implementations: parse, compute, assemble the JSON
//! report, and decide the exit status.

use std::path::{Path, PathBuf};

use serde_json::{Map, Value};

use orbigw_core::invariants::{
    check_tasks, dilaton_invariant, divisor_invariant, twisted_invariant, CheckEntry, CheckReport,
    Outcome, Target,
};
use orbigw_core::rat::Rat;

use crate::emit;
use crate::parallel::ordered_map;
use crate::schema::{parse_target, CliError};

pub struct Invocation {
    pub targets: Vec<PathBuf>,
    pub k: usize,
    pub jmax: Option<usize>,
    pub breakdown: bool,
    pub threads: usize,
    pub order_cap: usize,
}

/// A finished run: the report and whether every requested agreement
/// check passed.
pub struct RunOutput {
    pub report: Value,
    pub pass: bool,
}

fn single_target(inv: &Invocation) -> &Path {
    &inv.targets[0]
}

fn report_header(command: &str, target: &Path) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::String(command.into()));
    obj.insert(
        "target".into(),
        Value::String(target.display().to_string()),
    );
    obj
}

fn merge(mut base: Map<String, Value>, body: Value) -> Value {
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            base.insert(k, v);
        }
    }
    Value::Object(base)
}

pub fn run_group_info(inv: &Invocation) -> Result<RunOutput, CliError> {
    let path = single_target(inv);
    let target = parse_target(path, None, inv.order_cap)?;
    let groups = match &target {
        Target::Q(model) => vec![emit::group_info_json(&model.group, "group")],
        Target::L(model) => model
            .points
            .iter()
            .map(|p| emit::group_info_json(&p.stabilizer, &format!("point:{}", p.label)))
            .collect(),
    };
    let mut obj = report_header("group-info", path);
    obj.insert("model".into(), Value::String(target.model_tag().into()));
    obj.insert("groups".into(), Value::Array(groups));
    Ok(RunOutput {
        report: Value::Object(obj),
        pass: true,
    })
}

pub fn run_dilaton(inv: &Invocation) -> Result<RunOutput, CliError> {
    let path = single_target(inv);
    let target = parse_target(path, None, inv.order_cap)?;
    let report = dilaton_invariant(&target).map_err(CliError::model)?;
    let pass = report.agree != orbigw_core::invariants::Agreement::Disagree;
    Ok(RunOutput {
        report: merge(
            report_header("dilaton", path),
            emit::invariant_json(&report, inv.breakdown),
        ),
        pass,
    })
}

pub fn run_divisor(inv: &Invocation) -> Result<RunOutput, CliError> {
    let path = single_target(inv);
    let target = parse_target(path, None, inv.order_cap)?;
    let report = divisor_invariant(&target).map_err(CliError::model)?;
    let pass = report.agree != orbigw_core::invariants::Agreement::Disagree
        && report.constancy != Some(false);
    Ok(RunOutput {
        report: merge(
            report_header("divisor", path),
            emit::invariant_json(&report, inv.breakdown),
        ),
        pass,
    })
}

pub fn run_twisted(inv: &Invocation) -> Result<RunOutput, CliError> {
    let path = single_target(inv);
    let target = parse_target(path, inv.jmax, inv.order_cap)?;
    let model = match target {
        Target::L(model) => model,
        Target::Q(_) => {
            return Err(CliError::Usage {
                message: "twisted invariants need a localization model (model \"L\")".into(),
            })
        }
    };
    if model.twist < 1 {
        return Err(CliError::Usage {
            message: "twisted runs need twist order at least 1 (set twist_order or --jmax)".into(),
        });
    }
    let report = twisted_invariant(&model, inv.k).map_err(CliError::model)?;
    // the printed-form comparison is reported, not asserted
    let pass = report.lhs_matches_variant;
    Ok(RunOutput {
        report: merge(
            report_header("twisted", path),
            emit::twisted_json(&report, inv.breakdown),
        ),
        pass,
    })
}

/// Divisor data completeness, used to decide whether cross-target
/// divisor comparison applies.
fn has_divisor_data(target: &Target) -> bool {
    match target {
        Target::Q(m) => m.divisor_table.is_some(),
        Target::L(m) => m.points.iter().all(|p| p.divisor_lift.is_some()),
    }
}

pub fn run_check(inv: &Invocation) -> Result<RunOutput, CliError> {
    let mut targets: Vec<(String, Target)> = Vec::new();
    for path in &inv.targets {
        let target = parse_target(path, None, inv.order_cap)?;
        targets.push((path.display().to_string(), target));
    }
    let multi = targets.len() > 1;

    // flatten every target's independent tasks, keeping canonical order
    let mut tasks = Vec::new();
    for (idx, (_, target)) in targets.iter().enumerate() {
        for task in check_tasks(target) {
            tasks.push((idx, task));
        }
    }
    let results = ordered_map(&tasks, inv.threads, |(idx, task)| {
        let mut entries = (task.run)();
        if multi {
            for e in &mut entries {
                e.name = format!("targets[{idx}].{}", e.name);
            }
        }
        entries
    });
    let mut entries: Vec<CheckEntry> = results.into_iter().flatten().collect();

    if multi {
        entries.extend(cross_target_entries(&targets));
    }
    let report = CheckReport { entries };
    let pass = report.all_pass();

    let mut obj = Map::new();
    obj.insert("command".into(), Value::String("check".into()));
    obj.insert(
        "targets".into(),
        Value::Array(
            targets
                .iter()
                .map(|(name, _)| Value::String(name.clone()))
                .collect(),
        ),
    );
    Ok(RunOutput {
        report: merge(obj, emit::check_json(&report)),
        pass,
    })
}

/// Invariant values must agree across every supplied description of
/// the same target.
fn cross_target_entries(targets: &[(String, Target)]) -> Vec<CheckEntry> {
    let mut entries = Vec::new();

    let dilaton_values: Vec<Result<Rat, String>> = targets
        .iter()
        .map(|(_, t)| {
            dilaton_invariant(t)
                .map(|r| r.value().clone())
                .map_err(|e| e.to_string())
        })
        .collect();
    entries.push(values_agree_entry("dilaton", targets, &dilaton_values));

    if targets.iter().all(|(_, t)| has_divisor_data(t)) {
        let divisor_values: Vec<Result<Rat, String>> = targets
            .iter()
            .map(|(_, t)| {
                divisor_invariant(t)
                    .map(|r| r.value().clone())
                    .map_err(|e| e.to_string())
            })
            .collect();
        entries.push(values_agree_entry("divisor", targets, &divisor_values));
    }
    entries
}

fn values_agree_entry(
    name: &str,
    targets: &[(String, Target)],
    values: &[Result<Rat, String>],
) -> CheckEntry {
    let witness = targets
        .iter()
        .zip(values)
        .map(|((file, _), v)| match v {
            Ok(r) => format!("{file}: {r}"),
            Err(e) => format!("{file}: error ({e})"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    let pass = values.iter().all(|v| v.is_ok())
        && values
            .windows(2)
            .all(|w| w[0].as_ref().ok() == w[1].as_ref().ok());
    CheckEntry {
        name: format!("cross_target_{name}_agreement"),
        outcome: if pass { Outcome::Pass } else { Outcome::Fail },
        witness,
    }
}

/// Writes the report to the requested destination.
pub fn write_report(report: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = emit::render(report);
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io {
            file: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
