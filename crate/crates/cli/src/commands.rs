use std::collections::BTreeMap;

use serde::Serialize;

use reebvol_core::arith::{Rational, RationalVector};
use reebvol_core::grading::jumping_spectrum;
use reebvol_core::invariants::{
    consistency_report, d_vol, energy_pxi, energy_tc, quasi_regular_check, s_exact, s_m_trace,
    vol_by_triangulation, vol_xi, InvariantReport, PolarizedToricSetup, Status,
};
use reebvol_core::pl::{legendre, SuperlevelProfile};
use reebvol_core::polyhedra::okounkov_body;

use crate::error::{CliError, CliResult, EXIT_VERDICT};
use crate::output::{Cell, Document, Format};
use crate::problem::{Overrides, ProblemSpec};

pub const DEFAULT_DECIMAL: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Volume,
    Derivative,
    Jumping { m: u64, cdf: bool },
    Converge,
    Energy,
    Stilde,
    Legendre { v: Vec<String> },
    Profile,
    Report,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub format: Format,
    /// Digits requested with `--decimal`.
    pub decimal: Option<usize>,
    pub overrides: Overrides,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, exit: 0 }
    }
}

fn decimal_for(spec: &ProblemSpec, settings: &Settings) -> Option<usize> {
    settings.decimal.or(spec.options.decimal)
}

fn require_filtration(setup: &PolarizedToricSetup, command: &str) -> CliResult<()> {
    match setup.filtration() {
        Some(_) => Ok(()),
        None => Err(CliError::field("filtration", format!("required by `{command}` (or give eta)"))),
    }
}

pub fn run(command: &Command, spec: &ProblemSpec, settings: &Settings) -> CliResult<Outcome> {
    let setup = spec.setup(&settings.overrides)?;
    let decimal = decimal_for(spec, settings);
    let doc = match command {
        Command::Volume => volume(&setup)?,
        Command::Derivative => {
            if setup.eta().is_none() {
                return Err(CliError::field("eta", "required by `derivative`"));
            }
            Document::default()
                .value("vol_xi", vol_xi(&setup))
                .value("d_vol", d_vol(&setup)?)
                .value("energy_tc", energy_tc(&setup)?)
        }
        Command::Jumping { m, cdf } => {
            require_filtration(&setup, "jumping")?;
            let spectrum = jumping_spectrum(&setup.graded()?, *m);
            let doc = Document::default()
                .value("m", Cell::Int(u128::from(*m)))
                .value("count", Cell::Int(spectrum.count()))
                .value("s_m", spectrum.s_m())
                .value("t_m", spectrum.t_m());
            if *cdf {
                let rows = spectrum.mu_cdf().into_iter().map(|(t, c)| vec![Cell::Rat(t), Cell::Rat(c)]).collect();
                doc.table(&["t", "cdf"], rows)
            } else {
                let rows = spectrum
                    .values()
                    .map(|(v, k)| vec![Cell::Rat(v), Cell::Int(u128::from(k))])
                    .collect();
                doc.table(&["value", "multiplicity"], rows)
            }
        }
        Command::Converge => {
            require_filtration(&setup, "converge")?;
            let opts = spec.report_options(&settings.overrides);
            let (trace, _) = s_m_trace(&setup, &opts.m_grid)?;
            let rows = trace
                .into_iter()
                .map(|e| {
                    vec![
                        Cell::Int(u128::from(e.m)),
                        Cell::Int(e.count),
                        Cell::Rat(e.s_m),
                        Cell::Rat(e.error),
                        Cell::Rat(e.mass),
                        e.cdf_distance.into(),
                        Cell::Rat(e.t_m),
                    ]
                })
                .collect();
            Document::default()
                .value("s_exact", s_exact(&setup)?)
                .value("measure_mass", vol_xi(&setup) / reebvol_core::arith::factorial(setup.rank()))
                .table(&["m", "count", "s_m", "error", "mass", "cdf_distance", "t_m"], rows)
        }
        Command::Energy => {
            require_filtration(&setup, "energy")?;
            let s = s_exact(&setup)?;
            let e = energy_pxi(&setup)?;
            let ratio = if e.volume_normalized.is_zero() { None } else { Some(&s / &e.volume_normalized) };
            let mut doc = Document::default()
                .value("s_exact", s)
                .value("energy_pxi", e.volume_normalized)
                .value("energy_cone", e.cone_normalized)
                .value("slice_integral", e.slice_integral)
                .value("slice_mass", e.slice_mass)
                .value("c_n_ratio", ratio);
            if setup.eta().is_some() {
                doc = doc.value("energy_tc", energy_tc(&setup)?);
            }
            doc
        }
        Command::Stilde => {
            require_filtration(&setup, "stilde")?;
            let opts = spec.report_options(&settings.overrides);
            let q = quasi_regular_check(&setup, opts.t_max, &opts.tolerance)?;
            let rows = q
                .stats
                .iter()
                .map(|s| vec![Cell::Int(u128::from(s.t)), Cell::Int(s.count), s.s_tilde().into()])
                .collect();
            Document::default()
                .value("s_exact", q.s_exact.clone())
                .value("s_tilde_extrapolated", q.s_tilde_limit.clone())
                .value("predicted_s", q.predicted_s.clone())
                .value("relative_error", q.relative_error())
                .value("count_coefficient", q.count_coefficient.clone())
                .value("count_coefficient_expected", q.count_coefficient_expected.clone())
                .table(&["t", "count", "s_tilde"], rows)
        }
        Command::Legendre { v } => {
            require_filtration(&setup, "legendre")?;
            let entries = v
                .iter()
                .map(|x| x.parse::<Rational>().map_err(|_| CliError::Input(format!("--v: cannot parse {x:?}"))))
                .collect::<CliResult<Vec<_>>>()?;
            if entries.len() != setup.rank() {
                return Err(CliError::Input(format!(
                    "--v: expected {} entries, found {}",
                    setup.rank(),
                    entries.len()
                )));
            }
            let v = RationalVector::new(entries);
            let h = setup.filtration().expect("checked").homogenize();
            let value = legendre(&h, &setup.slice()?.p, &v)?;
            Document::default().value("v", Cell::Text(v.to_string())).value("legendre", value)
        }
        Command::Profile => {
            require_filtration(&setup, "profile")?;
            let h = setup.filtration().expect("checked").homogenize();
            let p = SuperlevelProfile::compute(&h, &setup.slice()?.q)?;
            let width = p.pieces.iter().map(|q| q.0.len()).max().unwrap_or(1);
            let mut columns = vec!["t_from".to_string(), "t_to".to_string()];
            columns.extend((0..width).map(|d| format!("c{d}")));
            let rows = p
                .pieces
                .iter()
                .zip(p.breakpoints.windows(2))
                .map(|(poly, w)| {
                    let mut row = vec![Cell::Rat(w[0].clone()), Cell::Rat(w[1].clone())];
                    row.extend((0..width).map(|d| Cell::Rat(poly.0.get(d).cloned().unwrap_or_else(Rational::zero))));
                    row
                })
                .collect();
            let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
            Document::default().value("total", p.total.clone()).value("top", p.top()).table(&cols, rows)
        }
        Command::Report => {
            let report = consistency_report(&setup, &spec.report_options(&settings.overrides));
            let exit = if report.passed() { 0 } else { EXIT_VERDICT };
            let stdout = render_report(&report, settings.format, decimal);
            return Ok(Outcome { stdout, exit });
        }
    };
    Ok(Outcome::ok(doc.render(settings.format, decimal)))
}

fn volume(setup: &PolarizedToricSetup) -> CliResult<Document> {
    let mut doc = Document::default()
        .value("vol_xi", vol_xi(setup))
        .value("vol_triangulated", vol_by_triangulation(setup)?)
        .value("vol_q", setup.slice()?.q.volume());
    if let Some(basis) = setup.okounkov_basis() {
        let body = okounkov_body(setup.dual(), setup.xi(), &basis)?;
        doc = doc.value("vol_okounkov_body", body.volume());
    }
    Ok(doc)
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    }
}

/// Decimal renderings of the headline quantities.
fn report_decimals(r: &InvariantReport, digits: usize) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut put = |k: &str, v: Option<&Rational>| {
        if let Some(v) = v {
            out.insert(k.to_string(), v.to_decimal(digits));
        }
    };
    put("vol_xi", Some(&r.vol_xi));
    put("measure_mass", Some(&r.measure_mass));
    put("d_vol", r.d_vol.as_ref());
    put("s_exact", r.s_exact.as_ref());
    put("top", r.top.as_ref());
    put("energy_tc", r.energy_tc.as_ref());
    put("energy_pxi", r.energy_pxi.as_ref().map(|e| &e.volume_normalized));
    put("c_n_ratio", r.c_n_ratio.as_ref());
    put("s_tilde_extrapolated", r.s_tilde_extrapolated.as_ref());
    put("count_coefficient", r.count_coefficient.as_ref());
    for e in &r.s_m_trace {
        put(&format!("s_m[{}]", e.m), Some(&e.s_m));
    }
    out
}

#[derive(Serialize)]
struct ReportJson<'a> {
    report: &'a InvariantReport,
    decimal: BTreeMap<String, String>,
}

fn verdict_rows(r: &InvariantReport, statuses: &[Status]) -> Vec<Vec<Cell>> {
    r.verdicts
        .iter()
        .zip(statuses)
        .map(|(v, s)| {
            vec![
                Cell::Text(status_text(*s).into()),
                Cell::Text(v.name.clone()),
                v.parameter.clone().into(),
                v.lhs.clone().into(),
                v.rhs.clone().into(),
                Cell::Text(if v.gating { "yes" } else { "no" }.into()),
                Cell::Text(v.note.clone().unwrap_or_default()),
            ]
        })
        .collect()
}

const VERDICT_COLUMNS: [&str; 7] = ["status", "name", "parameter", "lhs", "rhs", "gating", "note"];

pub fn render_report(r: &InvariantReport, format: Format, decimal: Option<usize>) -> String {
    match format {
        Format::Json => {
            let wrapped = ReportJson { report: r, decimal: report_decimals(r, decimal.unwrap_or(DEFAULT_DECIMAL)) };
            let mut s = serde_json::to_string_pretty(&wrapped).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv | Format::Table => {
            let statuses: Vec<Status> = r.verdicts.iter().map(|v| v.status).collect();
            let mut doc = Document::default()
                .value("rank", Cell::Int(r.rank as u128))
                .value("xi", Cell::Text(r.xi.to_string()))
                .value("vol_xi", r.vol_xi.clone())
                .value("measure_mass", r.measure_mass.clone())
                .value("s_exact", r.s_exact.clone())
                .value("top", r.top.clone())
                .value("d_vol", r.d_vol.clone())
                .value("energy_tc", r.energy_tc.clone())
                .value("energy_pxi", r.energy_pxi.as_ref().map(|e| e.volume_normalized.clone()))
                .value("c_n_ratio", r.c_n_ratio.clone())
                .value("s_tilde_extrapolated", r.s_tilde_extrapolated.clone())
                .table(&VERDICT_COLUMNS, verdict_rows(r, &statuses));
            if format == Format::Table {
                for (i, note) in r.notes.iter().enumerate() {
                    doc = doc.value(&format!("note[{i}]"), Cell::Text(note.clone()));
                }
            }
            doc.render(format, decimal)
        }
    }
}

/// Re-checks a stored report: statuses recomputed from the exact values.
pub fn verify(text: &str, settings: &Settings) -> CliResult<Outcome> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let inner = value.get("report").cloned().unwrap_or(value);
    let report: InvariantReport =
        serde_json::from_value(inner).map_err(|e| CliError::Input(format!("not a report: {e}")))?;
    let fresh = report.reverify();
    let consistent = report.is_consistent();
    let rows = report
        .verdicts
        .iter()
        .zip(&fresh)
        .map(|(v, s)| {
            vec![
                Cell::Text(v.name.clone()),
                v.parameter.clone().into(),
                Cell::Text(status_text(v.status).into()),
                Cell::Text(status_text(*s).into()),
            ]
        })
        .collect();
    let doc = Document::default()
        .value("consistent", Cell::Text(consistent.to_string()))
        .value("passed", Cell::Text(report.passed().to_string()))
        .table(&["name", "parameter", "stored", "recomputed"], rows);
    let exit = if consistent && report.passed() { 0 } else { EXIT_VERDICT };
    Ok(Outcome { stdout: doc.render(settings.format, settings.decimal), exit })
}
