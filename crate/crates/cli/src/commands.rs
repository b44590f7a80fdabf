use serde::Serialize;

use csbattery::analysis::{default_window, find_charging_time, predict_regimes, sweep_m, ChargingSummary};
use csbattery::oracle::{self, MAX_QUBITS};
use csbattery::{build_hamiltonian, diagonalize, periodic_grid, trace, validate_params, ModelParams, RawParams};

use crate::args::{ChargeArgs, Format, ModelArgs, OracleArgs, SearchArgs, SweepArgs, TraceArgs};
use crate::error::CliError;
use crate::output::{emit, json, num, Csv};

type Params = ModelParams<f64>;
type SearchOptions = csbattery::SearchOptions<f64>;

fn params(model: &ModelArgs, m: usize) -> Result<Params, CliError> {
    Ok(validate_params(RawParams {
        b_field: model.b_field,
        h_field: model.h_field,
        coupling: model.coupling,
        ising: model.delta,
        n_battery: model.nb,
        n_charger: model.nc,
        excitations: m,
    })?)
}

fn search_options(s: &SearchArgs) -> SearchOptions {
    SearchOptions { objective: s.objective.into(), window_end: s.tmax, samples: s.steps }
}

/// `n` points on `[0, tmax)`, with `tmax` defaulting to the slowest beat period.
fn time_grid(p: &Params, tmax: Option<f64>, n: usize) -> Result<Vec<f64>, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    if n == 1 {
        return Ok(vec![0.0]);
    }
    let end = match tmax {
        Some(t) if t.is_finite() && t > 0.0 => t,
        Some(t) => return Err(CliError::Usage(format!("--tmax must be positive and finite, got {t}"))),
        None => default_window(&diagonalize(&build_hamiltonian(p))?)
            .ok_or_else(|| CliError::Usage("spectrum has no nonzero gap; pass --tmax".into()))?,
    };
    Ok(periodic_grid(end, n))
}

// serde_json keeps the sign of negative zero
fn z(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn run_trace(a: &TraceArgs) -> Result<(), CliError> {
    let p = params(&a.model, a.m)?;
    let grid = time_grid(&p, a.tmax, a.steps)?;
    let tr = trace(&p, &grid)?;
    let mut columns = vec!["t".to_string()];
    columns.extend((0..tr.dim()).map(|j| format!("p{j}")));
    columns.extend(["S", "dE", "erg"].map(String::from));
    let rows: Vec<Vec<f64>> = tr
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.t];
            v.extend(&r.populations);
            v.extend([r.report.entropy, r.report.injected, r.report.ergotropy]);
            v
        })
        .collect();
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&columns);
            for row in &rows {
                csv.line(row.iter().map(|&x| num(x)));
            }
            csv.into_string()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct TraceJson {
                columns: Vec<String>,
                rows: Vec<Vec<f64>>,
            }
            let rows = rows.into_iter().map(|r| r.into_iter().map(z).collect()).collect();
            json(&TraceJson { columns, rows })
        }
    };
    emit(&text, a.output.out.as_deref())
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct ChargeJson {
    T: f64,
    dE_T: f64,
    erg_T: f64,
    S_T: f64,
    Ep_T: f64,
    populations_T: Vec<f64>,
    objective: &'static str,
    window: [f64; 2],
}

impl From<&ChargingSummary<f64>> for ChargeJson {
    fn from(s: &ChargingSummary<f64>) -> Self {
        ChargeJson {
            T: z(s.charging_time),
            dE_T: z(s.report.injected),
            erg_T: z(s.report.ergotropy),
            S_T: z(s.report.entropy),
            Ep_T: z(s.report.passive),
            populations_T: s.populations.values().iter().map(|&x| z(x)).collect(),
            objective: s.objective.label(),
            window: [z(s.window.0), z(s.window.1)],
        }
    }
}

pub fn run_charge(a: &ChargeArgs) -> Result<(), CliError> {
    let p = params(&a.model, a.m)?;
    let summary = find_charging_time(&p, &search_options(&a.search))?;
    let text = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json(&ChargeJson::from(&summary)),
        Format::Csv => {
            let d = summary.populations.values().len();
            let mut header: Vec<String> = ["T", "dE_T", "erg_T", "S_T", "Ep_T"].map(String::from).to_vec();
            header.extend((0..d).map(|j| format!("p{j}_T")));
            header.extend(["objective", "window_start", "window_end"].map(String::from));
            let mut csv = Csv::new(&header);
            let r = &summary.report;
            let mut fields: Vec<String> =
                [summary.charging_time, r.injected, r.ergotropy, r.entropy, r.passive].map(num).to_vec();
            fields.extend(summary.populations.values().iter().map(|&x| num(x)));
            fields.extend([summary.objective.label().to_string(), num(summary.window.0), num(summary.window.1)]);
            csv.line(fields);
            csv.into_string()
        }
    };
    emit(&text, a.output.out.as_deref())
}

fn sweep_range(a: &SweepArgs) -> Result<(Params, std::ops::RangeInclusive<usize>), CliError> {
    let m_max = a.m_max.unwrap_or(a.model.nc);
    if a.m_min < 1 || a.m_min > m_max || m_max > a.model.nc {
        return Err(CliError::Usage(format!(
            "m range {}..={} must satisfy 1 <= m_min <= m_max <= N_c = {}",
            a.m_min, m_max, a.model.nc
        )));
    }
    Ok((params(&a.model, a.m_min)?, a.m_min..=m_max))
}

pub fn run_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let (p, range) = sweep_range(a)?;
    let opts = search_options(&a.search);
    let sweep = sweep_m(&p, range, &opts)?;
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["m", "T", "erg_T", "S_T", "dE_T"]);
            for (m, s) in &sweep {
                let r = &s.report;
                let mut fields = vec![m.to_string()];
                fields.extend([s.charging_time, r.ergotropy, r.entropy, r.injected].map(num));
                csv.line(fields);
            }
            csv.into_string()
        }
        Format::Json => {
            #[derive(Serialize)]
            #[allow(non_snake_case)]
            struct Row {
                m: usize,
                T: f64,
                erg_T: f64,
                S_T: f64,
                dE_T: f64,
            }
            #[derive(Serialize)]
            struct SweepJson {
                objective: &'static str,
                rows: Vec<Row>,
            }
            let rows = sweep
                .iter()
                .map(|(m, s)| Row {
                    m: *m,
                    T: z(s.charging_time),
                    erg_T: z(s.report.ergotropy),
                    S_T: z(s.report.entropy),
                    dE_T: z(s.report.injected),
                })
                .collect();
            json(&SweepJson { objective: opts.objective.label(), rows })
        }
    };
    emit(&text, a.output.out.as_deref())
}

pub fn run_regimes(a: &SweepArgs) -> Result<(), CliError> {
    let (p, range) = sweep_range(a)?;
    let sweep = sweep_m(&p, range, &search_options(&a.search))?;
    let rows: Vec<(usize, f64, f64, Option<f64>)> = sweep
        .iter()
        .map(|(m, s)| {
            let pred = predict_regimes(&p.with_excitations(*m).expect("m checked by the sweep"));
            (*m, s.charging_time, pred.tc_time, pred.ntc_time)
        })
        .collect();
    let text = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(&["m", "T_measured", "T_tc", "T_ntc"]);
            for (m, t, tc, ntc) in &rows {
                csv.line([m.to_string(), num(*t), num(*tc), ntc.map(num).unwrap_or_default()]);
            }
            csv.into_string()
        }
        Format::Json => {
            #[derive(Serialize)]
            #[allow(non_snake_case)]
            struct Row {
                m: usize,
                T_measured: f64,
                T_tc: f64,
                T_ntc: Option<f64>,
            }
            #[derive(Serialize)]
            struct RegimesJson {
                rows: Vec<Row>,
            }
            let rows = rows
                .into_iter()
                .map(|(m, t, tc, ntc)| Row { m, T_measured: z(t), T_tc: z(tc), T_ntc: ntc.map(z) })
                .collect();
            json(&RegimesJson { rows })
        }
    };
    emit(&text, a.output.out.as_deref())
}

#[derive(Serialize)]
struct OracleJson {
    n_battery: usize,
    n_charger: usize,
    m: usize,
    times: usize,
    tolerance: f64,
    populations: f64,
    entropy: f64,
    energy: f64,
    ergotropy: f64,
    leakage: f64,
    ladder_coherence: f64,
    max_deviation: f64,
    pass: bool,
}

pub fn run_oracle_check(a: &OracleArgs) -> Result<(), CliError> {
    let p = params(&a.model, a.m)?;
    let qubits = p.n_battery() + p.n_charger();
    if qubits > MAX_QUBITS {
        return Err(csbattery::Error::TooLarge { what: "qubit count", size: qubits, limit: MAX_QUBITS }.into());
    }
    let grid = time_grid(&p, a.tmax, a.steps)?;
    let r = oracle::compare(&p, &grid)?;
    let max_deviation = r.max_deviation();
    let pass = r.passes(a.tolerance);
    let report = OracleJson {
        n_battery: p.n_battery(),
        n_charger: p.n_charger(),
        m: p.excitations(),
        times: r.times,
        tolerance: a.tolerance,
        populations: r.populations,
        entropy: r.entropy,
        energy: r.energy,
        ergotropy: r.ergotropy,
        leakage: r.leakage,
        ladder_coherence: r.ladder_coherence,
        max_deviation,
        pass,
    };
    emit(&json(&report), a.out.as_deref())?;
    if pass {
        Ok(())
    } else {
        Err(CliError::OracleBreach { max_deviation, tolerance: a.tolerance })
    }
}
