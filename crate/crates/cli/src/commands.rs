use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use noframe::irrep::spins_for;
use noframe::optics::{protocol_distribution, run_optical_protocol, DetectionDistribution, OpticalReport};
use noframe::protocols::{
    build_classical_codebook, logical_bell_chsh_trials, noiseless_subsystem_plan, rate_table,
    run_classical, run_logical, tsirelson_bound, LogicalEncoding, ProtocolReport,
};
use noframe::quantum::{max_abs_diff, random_density, unitarity_residual};
use noframe::twirl::TwirlChannel;
use noframe::{
    collective_rotation, decompose, haar_random_su2, multiplicity, trace_distance, DensityOperator,
    RandomSource, Result,
};

use crate::report::{num, Report, Verdict};
use crate::{Command, RunConfig};

/// Largest n for which `decompose` also checks unitarity of the full
/// coupling matrix.
const UNITARITY_CHECK_MAX_N: usize = 10;

struct Outcome {
    payload: Value,
    verdicts: Vec<Verdict>,
    table: Vec<Vec<String>>,
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("report payloads are plain data")
}

pub fn run_command(cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let out = match cfg.command {
        Command::Decompose => run_decompose(cfg)?,
        Command::Rates => run_rates(cfg)?,
        Command::TwirlCheck => run_twirl_check(cfg)?,
        Command::Classical => run_classical_cmd(cfg)?,
        Command::Quantum => run_quantum(cfg)?,
        Command::Optics => run_optics(cfg)?,
        Command::Bell => run_bell(cfg)?,
    };
    Ok(Report {
        command: cfg.command.name().to_string(),
        config: cfg.clone(),
        payload: out.payload,
        verdicts: out.verdicts,
        duration_ms: start.elapsed().as_millis() as u64,
        table: out.table,
    })
}

fn run_decompose(cfg: &RunConfig) -> Result<Outcome> {
    let n = cfg.n;
    let spins = spins_for(n);
    let j2: Vec<u32> = spins.iter().map(|j| j.twice() as u32).collect();
    let mult = spins.iter().map(|&j| multiplicity(n, j)).collect::<Result<Vec<u128>>>()?;
    let total: u128 = mult.iter().sum();
    let dimension_sum: u128 = spins.iter().zip(&mult).map(|(j, c)| j.dimension() as u128 * c).sum();

    let d = decompose(n)?;
    let built: Vec<u128> = spins.iter().map(|&j| d.multiplicity_of(j) as u128).collect();
    let unitarity = (n <= UNITARITY_CHECK_MAX_N).then(|| unitarity_residual(&d.coupling_matrix()));

    let mut verdicts = vec![
        Verdict::check("dimension_sum", dimension_sum.abs_diff(1u128 << n) as f64, 0.0),
        Verdict::check(
            "blocks_match_closed_form",
            built.iter().zip(&mult).filter(|(a, b)| a != b).count() as f64,
            0.0,
        ),
    ];
    if let Some(u) = unitarity {
        verdicts.push(Verdict::check("coupling_unitarity", u, cfg.tolerance));
    }
    let mut table = vec![vec!["j2".to_string(), "multiplicity".to_string()]];
    table.extend(j2.iter().zip(&mult).map(|(a, b)| vec![a.to_string(), b.to_string()]));
    Ok(Outcome {
        payload: json!({
            "n": n,
            "j2": j2,
            "multiplicity": mult.iter().map(|&c| c as u64).collect::<Vec<_>>(),
            "total": total as u64,
            "dimension_sum": dimension_sum as u64,
            "blocks_built": built.iter().map(|&c| c as u64).collect::<Vec<_>>(),
            "coupling_unitarity_residual": unitarity,
        }),
        verdicts,
        table,
    })
}

fn run_rates(cfg: &RunConfig) -> Result<Outcome> {
    let t = rate_table(cfg.max_n)?;
    let rows = &t.rows;

    let outside = rows
        .iter()
        .flat_map(|r| [r.classical_rate, r.quantum_rate, r.dephasing_quantum_rate])
        .map(|v| (-v).max(v - 1.0).max(0.0))
        .fold(0.0, f64::max);
    let even: Vec<f64> = rows.iter().filter(|r| r.n % 2 == 0).map(|r| r.classical_rate).collect();
    let drop = even.windows(2).map(|w| (w[0] - w[1]).max(0.0)).fold(0.0, f64::max);
    let mut verdicts = vec![
        Verdict::check("rates_in_unit_interval", outside, 0.0),
        Verdict::check("classical_rate_monotone_even_n", drop, 0.0),
    ];
    // gap to 1 − log₂(n)/(2n) must be positive and shrink over n = 8, 16, 32, ...
    let gaps: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .filter_map(|&n| t.row(n).map(|r| r.asymptotic_gap))
        .collect();
    if gaps.len() >= 2 {
        let worst = gaps
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(gaps.iter().map(|g| -g))
            .fold(f64::NEG_INFINITY, f64::max);
        verdicts.push(Verdict::check("asymptotic_gap_positive_and_shrinking", worst, 0.0));
    }

    let mut table = vec![[
        "n",
        "classical_rate",
        "quantum_rate",
        "dephasing_rate",
        "asymptotic_gap",
    ]
    .map(String::from)
    .to_vec()];
    table.extend(rows.iter().map(|r| {
        vec![
            r.n.to_string(),
            num(r.classical_rate),
            num(r.quantum_rate),
            num(r.dephasing_quantum_rate),
            num(r.asymptotic_gap),
        ]
    }));
    let mut report = ProtocolReport::new("rates", cfg.max_n);
    report.rate_rows = t.rows.clone();
    Ok(Outcome {
        payload: to_value(report),
        verdicts,
        table,
    })
}

#[derive(Serialize)]
struct ChannelResiduals {
    channel: &'static str,
    trace: f64,
    hermiticity: f64,
    idempotence: f64,
    mixed_fixed_point: f64,
    covariance: Option<f64>,
}

fn channel_residuals(
    name: &'static str,
    ch: &TwirlChannel,
    cfg: &RunConfig,
    covariant: bool,
) -> Result<ChannelResiduals> {
    let n = cfg.n;
    let root = RandomSource::new(cfg.seed);
    let mut res = ChannelResiduals {
        channel: name,
        trace: 0.0,
        hermiticity: 0.0,
        idempotence: 0.0,
        mixed_fixed_point: 0.0,
        covariance: covariant.then_some(0.0),
    };
    let mixed = DensityOperator::maximally_mixed(1 << n);
    res.mixed_fixed_point = trace_distance(&ch.apply(&mixed)?, &mixed)?;
    for k in 0..cfg.trials {
        let mut rng = root.split(k as u64);
        let rho = random_density(1 << n, &mut rng);
        let once = ch.apply(&rho)?;
        let m = once.matrix();
        res.trace = res.trace.max((m.trace().re - 1.0).abs());
        res.hermiticity = res.hermiticity.max(max_abs_diff(m, &m.adjoint()));
        res.idempotence = res.idempotence.max(max_abs_diff(ch.apply(&once)?.matrix(), m));
        if let Some(c) = res.covariance.as_mut() {
            let u = collective_rotation(&haar_random_su2(&mut rng), n)?;
            let moved = ch.apply(&rho.conjugate(&u)?)?;
            *c = c.max(max_abs_diff(moved.matrix(), m));
        }
    }
    Ok(res)
}

fn run_twirl_check(cfg: &RunConfig) -> Result<Outcome> {
    let su2 = channel_residuals("su2", &TwirlChannel::full_su2(cfg.n)?, cfg, true)?;
    let u1 = channel_residuals("u1_dephasing", &TwirlChannel::u1_dephasing(cfg.n)?, cfg, false)?;
    let mut verdicts = Vec::new();
    for r in [&su2, &u1] {
        let name = |what: &str| format!("{}_{what}", r.channel);
        verdicts.push(Verdict::check(&name("trace"), r.trace, cfg.tolerance));
        verdicts.push(Verdict::check(&name("hermiticity"), r.hermiticity, cfg.tolerance));
        verdicts.push(Verdict::check(&name("idempotence"), r.idempotence, cfg.tolerance));
        verdicts.push(Verdict::check(&name("mixed_fixed_point"), r.mixed_fixed_point, cfg.tolerance));
        if let Some(c) = r.covariance {
            verdicts.push(Verdict::check(&name("covariance"), c, cfg.tolerance));
        }
    }
    Ok(Outcome {
        payload: json!({ "n": cfg.n, "states": cfg.trials, "channels": [su2, u1] }),
        verdicts,
        table: Vec::new(),
    })
}

#[derive(Serialize)]
struct WithExtras<E: Serialize> {
    #[serde(flatten)]
    report: ProtocolReport,
    #[serde(flatten)]
    extras: E,
}

fn run_classical_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let cb = build_classical_codebook(cfg.n)?;
    let run = run_classical(&cb, cfg.trials, &RandomSource::new(cfg.seed))?;
    let mut report = ProtocolReport::new("classical", cfg.n);
    report.trials = run.trials;
    report.errors = run.errors;
    let verdicts = vec![
        Verdict::check("decoding_errors", run.errors as f64, 0.0),
        Verdict::check("success_probability", 1.0 - run.min_success_probability, cfg.tolerance),
    ];
    Ok(Outcome {
        payload: to_value(WithExtras {
            report,
            extras: json!({
                "messages": run.messages,
                "min_success_probability": run.min_success_probability,
            }),
        }),
        verdicts,
        table: Vec::new(),
    })
}

fn run_quantum(cfg: &RunConfig) -> Result<Outcome> {
    let codes = [
        ("dfs", LogicalEncoding::dfs_four_qubit_standard()?),
        ("nss", noiseless_subsystem_plan(cfg.n)?),
        ("dephasing", LogicalEncoding::dephasing_code(cfg.n)?),
    ];
    let rng = RandomSource::new(cfg.seed);
    let mut rows = Vec::new();
    let mut verdicts = Vec::new();
    for (k, (name, enc)) in codes.iter().enumerate() {
        let run = run_logical(enc, cfg.trials, &rng.split(k as u64))?;
        let mut report = ProtocolReport::new(format!("quantum/{name}"), enc.n());
        report.trials = run.trials;
        report.min_fidelity = Some(run.min_fidelity);
        report.mean_fidelity = Some(run.mean_fidelity);
        verdicts.push(Verdict::check(
            &format!("{name}_min_fidelity"),
            1.0 - run.min_fidelity,
            cfg.tolerance,
        ));
        rows.push(to_value(WithExtras {
            report,
            extras: json!({ "logical_dim": enc.logical_dim(), "kind": enc.kind() }),
        }));
    }
    Ok(Outcome {
        payload: json!({ "encodings": rows }),
        verdicts,
        table: Vec::new(),
    })
}

#[derive(Serialize)]
struct OpticsPayload {
    fiber_rotation: [[f64; 2]; 2],
    distributions: [DetectionDistribution; 2],
    runs: [OpticalReport; 2],
}

fn run_optics(cfg: &RunConfig) -> Result<Outcome> {
    let rng = RandomSource::new(cfg.seed);
    let g = haar_random_su2(&mut rng.split(0));
    let d = [protocol_distribution(0, &g)?, protocol_distribution(1, &g)?];
    let runs = [
        run_optical_protocol(0, &g, cfg.trials, &rng.split(1))?,
        run_optical_protocol(1, &g, cfg.trials, &rng.split(2))?,
    ];
    let verdicts = vec![
        Verdict::check("psi_minus_coincidence", (1.0 - d[0].p_coincidence).abs(), cfg.tolerance),
        Verdict::check("phi_minus_coincidence", d[1].p_coincidence.abs(), cfg.tolerance),
        Verdict::check("bit0_error_rate", runs[0].error_rate, 0.0),
        Verdict::check("bit1_error_rate", runs[1].error_rate, 0.0),
    ];
    let m = g.matrix2();
    // first row (a, b) of g; the second row is fixed by SU(2)
    let fiber_rotation = [[m[(0, 0)].re, m[(0, 0)].im], [m[(0, 1)].re, m[(0, 1)].im]];
    Ok(Outcome {
        payload: to_value(OpticsPayload {
            fiber_rotation,
            distributions: d,
            runs,
        }),
        verdicts,
        table: Vec::new(),
    })
}

fn run_bell(cfg: &RunConfig) -> Result<Outcome> {
    let values = logical_bell_chsh_trials(&RandomSource::new(cfg.seed), cfg.trials)?;
    let bound = tsirelson_bound();
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let deviation = values.iter().map(|v| (v - bound).abs()).fold(0.0, f64::max);
    let mut report = ProtocolReport::new("bell", 8);
    report.trials = values.len();
    report.errors = values.iter().filter(|&&v| v <= 2.0).count();
    report.chsh_value = Some(mean);
    let verdicts = vec![
        Verdict::check("chsh_tsirelson", deviation, cfg.tolerance),
        Verdict::check("trials_without_violation", report.errors as f64, 0.0),
    ];
    Ok(Outcome {
        payload: to_value(WithExtras {
            report,
            extras: json!({ "chsh_min": min, "chsh_max": max, "max_deviation": deviation }),
        }),
        verdicts,
        table: Vec::new(),
    })
}
