use std::fs;
use std::io::{self, Write};
use std::path::Path;

use qinfo::dynamics::{evolve_info, AxisSchedule, Hamiltonian2};
use qinfo::entangle::{self, MaximizationMethod, PlanePair};
use qinfo::infomeasure::{self, NormalizationScheme, ProbabilityVector};
use qinfo::io::{self as qio, format_f64};
use qinfo::malus::{f_ode_at, malus_probability, quantum_oracle_probability, MalusParameter};
use qinfo::mub::{mub_construct, verify_mub, SUPPORTED_DIMS};
use qinfo::qstate::{self, density_from_info, DensityMatrix, InfoVector};
use qinfo::stochastics;
use serde_json::{json, Map, Value};

use crate::{Command, Planes};

/// Verifier errors at or above this make `mub` fail.
const MUB_ACCEPTANCE: f64 = 1e-9;

type Outcome = Result<(), String>;

fn domain(e: qinfo::Error) -> String {
    e.to_string()
}

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Info { p, scheme } => info(p, scheme.into()),
        Command::State { state, info, scheme } => {
            let rho = match (state, info) {
                (Some(path), _) => read_state(&path)?,
                (None, Some(v)) => density_from_info(InfoVector::from_array(v)).map_err(domain)?,
                (None, None) => unreachable!("clap requires one input"),
            };
            describe_state(&rho, scheme.into())
        }
        Command::Mub { dim, json } => mub(dim as usize, json.as_deref()),
        Command::Malus {
            n,
            sweep,
            steps_per_turn,
            csv,
        } => {
            let n = MalusParameter::new(n).map_err(domain)?;
            let thetas = sweep.points();
            let f = f_ode_at(n, &thetas, steps_per_turn as usize).map_err(domain)?;
            let rows = thetas.iter().zip(&f).map(|(&theta, &f_ode)| {
                let closed = (n.value() * theta).cos();
                [
                    theta,
                    f_ode,
                    closed,
                    malus_probability(n, theta),
                    quantum_oracle_probability(n.value() * theta),
                    (f_ode - closed).abs(),
                ]
            });
            write_csv(
                &["theta", "f_ode", "f_closed", "p_malus", "p_oracle", "abs_err"],
                rows,
                csv.as_deref(),
            )
        }
        Command::Entangle { state, planes } => entangle(&read_state(&state)?, planes),
        Command::Evolve {
            state,
            hamiltonian,
            t,
            dt,
            csv,
        } => {
            let rho = read_state(&state)?;
            let i0 = qstate::info_from_density(&rho).map_err(domain)?;
            let h = qio::parse_matrix(&read(&hamiltonian)?)
                .and_then(Hamiltonian2::new)
                .map_err(|e| format!("{}: {e}", hamiltonian.display()))?;
            let schedule = AxisSchedule::Constant(qinfo::dynamics::axis_from_hamiltonian(&h));
            let traj = evolve_info(i0, &schedule, t, dt).map_err(domain)?;
            let rows = traj.times.iter().zip(&traj.states).map(|(&t, s)| {
                let [a, b, c] = s.to_array();
                [t, a, b, c, s.norm()]
            });
            write_csv(&["t", "i1", "i2", "i3", "norm"], rows, csv.as_deref())
        }
        Command::SgSim {
            theta,
            trials,
            seed,
            chebyshev_k,
            runs,
        } => sg_sim(theta, trials, seed, chebyshev_k, runs),
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn read_state(path: &Path) -> Result<DensityMatrix, String> {
    qio::parse_state(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(text: &str, path: Option<&Path>) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}

fn emit_json(value: &Value, path: Option<&Path>) -> Outcome {
    let mut text = qio::to_stable_json(value).map_err(domain)?;
    text.push('\n');
    emit(&text, path)
}

fn write_csv<const N: usize>(
    header: &[&str; N],
    rows: impl Iterator<Item = [f64; N]>,
    path: Option<&Path>,
) -> Outcome {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let fail = |e: csv::Error| format!("CSV output failed: {e}");
    writer.write_record(header).map_err(fail)?;
    for row in rows {
        writer.write_record(row.map(format_f64)).map_err(fail)?;
    }
    let bytes = writer.into_inner().map_err(|e| format!("CSV output failed: {e}"))?;
    emit(&String::from_utf8(bytes).expect("ASCII output"), path)
}

fn info(p: Vec<f64>, scheme: NormalizationScheme) -> Outcome {
    let p = ProbabilityVector::new(p).map_err(domain)?;
    let mut out = Map::new();
    out.insert("H".into(), json!(infomeasure::shannon_entropy(&p)));
    out.insert("U".into(), json!(infomeasure::uncertainty(&p)));
    out.insert("I".into(), json!(infomeasure::info_measure(&p, scheme).map_err(domain)?));
    if let Ok(b) = infomeasure::binary_info(&p) {
        out.insert("i".into(), json!(b.i));
    }
    emit_json(&Value::Object(out), None)
}

fn describe_state(rho: &DensityMatrix, scheme: NormalizationScheme) -> Outcome {
    let mut out = Map::new();
    out.insert("dim".into(), json!(rho.dim()));
    out.insert("purity".into(), json!(rho.purity()));
    out.insert("density".into(), qio::density_to_value(rho));
    if rho.dim() == 2 {
        let i = qstate::info_from_density(rho).map_err(domain)?;
        out.insert("i".into(), json!(i.to_array()));
    }
    if SUPPORTED_DIMS.contains(&rho.dim()) {
        let set = mub_construct(rho.dim()).map_err(domain)?;
        let probs: Vec<Vec<f64>> = qstate::mub_probabilities(rho, &set)
            .map_err(domain)?
            .into_iter()
            .map(ProbabilityVector::into_vec)
            .collect();
        let total = qstate::total_info_general(rho, &set, scheme).map_err(domain)?;
        out.insert("mub_probabilities".into(), json!(probs));
        out.insert("I_total".into(), json!(total));
    }
    emit_json(&Value::Object(out), None)
}

fn mub(dim: usize, path: Option<&Path>) -> Outcome {
    let set = mub_construct(dim).map_err(domain)?;
    let check = verify_mub(&set);
    let value = qio::mub_to_value(&set, &check);
    match path {
        Some(p) => {
            emit_json(&value, Some(p))?;
            let summary = json!({
                "dim": dim,
                "bases": set.bases().len(),
                "max_orthonormality_error": check.max_orthonormality_error,
                "max_unbiasedness_error": check.max_unbiasedness_error,
                "output": p.display().to_string(),
            });
            emit_json(&summary, None)?;
        }
        None => emit_json(&value, None)?,
    }
    if check.passes(MUB_ACCEPTANCE) {
        Ok(())
    } else {
        Err(format!(
            "verification failed: orthonormality error {:e}, unbiasedness error {:e}",
            check.max_orthonormality_error, check.max_unbiasedness_error
        ))
    }
}

fn planes_value(p: &PlanePair) -> Value {
    json!({"a1": p.a1, "a2": p.a2, "b1": p.b1, "b2": p.b2})
}

fn entangle(rho: &DensityMatrix, planes: Planes) -> Outcome {
    let report = entangle::chsh_and_verdict(rho).map_err(domain)?;
    let (i_corr, used) = match planes {
        Planes::Canonical => {
            let p = PlanePair::canonical();
            (entangle::info_corr_from_tensor(&report.tensor, &p), p)
        }
        Planes::Optimize => {
            let best = entangle::max_info_corr(rho, MaximizationMethod::Numeric).map_err(domain)?;
            (best.value, best.argmax_planes)
        }
    };
    let value = json!({
        "T": report.tensor.matrix(),
        "singular_values": report.tensor.singular_values(),
        "M": report.m,
        "chsh_max": report.chsh_max,
        "i_corr": i_corr,
        "planes": planes_value(&used),
        "max_info_corr": report.max_info_corr,
        "verdicts": {
            "violates_bell": report.violates_bell,
            "entangled_by_criterion": report.entangled_by_criterion,
        },
    });
    emit_json(&value, None)
}

fn sg_sim(theta: f64, trials: u64, seed: u64, k: Option<f64>, runs: u64) -> Outcome {
    let run = stochastics::simulate_sg(theta, trials, seed).map_err(domain)?;
    let mut out = Map::new();
    out.insert("theta".into(), json!(run.theta));
    out.insert("p".into(), json!(run.p));
    out.insert("trials".into(), json!(run.trials));
    out.insert("seed".into(), json!(run.seed));
    out.insert("successes".into(), json!(run.successes));
    out.insert("fraction".into(), json!(run.fraction()));
    out.insert(
        "per_trial_uncertainty".into(),
        json!(stochastics::per_trial_uncertainty(run.p).map_err(domain)?),
    );
    out.insert("sigma".into(), json!((run.p * (1.0 - run.p) * trials as f64).sqrt()));
    if let Some(k) = k {
        let report = stochastics::chebyshev_report(theta, trials, k, runs, seed).map_err(domain)?;
        out.insert(
            "chebyshev".into(),
            serde_json::to_value(&report).map_err(|e| e.to_string())?,
        );
    }
    emit_json(&Value::Object(out), None)
}
