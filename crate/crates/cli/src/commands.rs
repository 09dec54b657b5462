use aklt_core::entropy::EntropyReport;
use aklt_core::oracle::{fock_block_spectrum, pauli_spectrum_spin1, Caps};
use aklt_core::{BigRational, BlockSpectrum, Eigenvalue, Method, TwiceSpin};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{EntropyArgs, IntRange, SpectrumArgs, SweepArgs};
use crate::config::{CommandKind, RunConfig};
use crate::report::{Check, Document, EntropyRow, ResultRow, SpectrumRow};
use crate::Failure;

/// Oracle spectra are compared with this absolute tolerance; exact ones exactly.
pub const AGREEMENT_TOLERANCE: f64 = 1e-9;

pub(crate) fn bulk_spin(s: u32) -> Result<TwiceSpin, Failure> {
    if s == 0 {
        return Err(Failure::Usage("bulk spin must be a positive integer".into()));
    }
    Ok(TwiceSpin::integer(s))
}

fn check_lengths(length: IntRange) -> Result<(), Failure> {
    if length.start == 0 {
        return Err(Failure::Usage("block length must be at least 1".into()));
    }
    Ok(())
}

fn check_methods(methods: &[Method], spin: u32) -> Result<(), Failure> {
    if methods.is_empty() {
        return Err(Failure::Usage("at least one method is required".into()));
    }
    if methods.contains(&Method::PauliOracle) && spin != 1 {
        return Err(Failure::Usage("pauli_oracle is only available for S = 1".into()));
    }
    Ok(())
}

fn check_alphas(alphas: &[f64]) -> Result<(), Failure> {
    match alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        Some(a) => Err(Failure::Usage(format!("Rényi order must be positive, got {a}"))),
        None => Ok(()),
    }
}

/// Removes repeated methods, keeping the first occurrence.
fn dedup_methods(methods: &[Method]) -> Vec<Method> {
    let mut out: Vec<Method> = Vec::new();
    for &m in methods {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

pub fn compute_spectrum(spin: TwiceSpin, length: usize, method: Method, caps: &Caps) -> Result<BlockSpectrum, Failure> {
    let spec = match method {
        Method::Recurrence | Method::ClosedForm => BlockSpectrum::exact(spin, length, method)?,
        Method::FockOracle => fock_block_spectrum(spin, length, length, 1, caps)?.spectrum,
        Method::PauliOracle => pauli_spectrum_spin1(length, caps)?.spectrum,
    };
    Ok(spec)
}

pub fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn spectrum_rows(spec: &BlockSpectrum) -> Vec<SpectrumRow> {
    let spin = spec.spin.twice() / 2;
    let length = spec.length.unwrap_or(0);
    let mut rows: Vec<SpectrumRow> = spec
        .entries
        .iter()
        .map(|e| SpectrumRow {
            spin,
            length,
            j: e.j.twice() / 2,
            lambda_exact: e.eigenvalue.exact().map(rational_string),
            lambda_float: e.eigenvalue.to_f64(),
            multiplicity: e.multiplicity,
            method: spec.method.as_str().to_string(),
        })
        .collect();
    rows.sort_by(|a, b| a.j.cmp(&b.j).then(b.lambda_float.total_cmp(&a.lambda_float)));
    rows
}

/// The eigenvalue attached to edge spin `j`; absent labels carry zero weight.
fn value_at(spec: &BlockSpectrum, j: TwiceSpin) -> Eigenvalue {
    spec.entries
        .iter()
        .find(|e| e.j == j)
        .map(|e| e.eigenvalue.clone())
        .unwrap_or(Eigenvalue::Approx(0.0))
}

fn values_agree(a: &Eigenvalue, b: &Eigenvalue) -> bool {
    match (a.exact(), b.exact()) {
        (Some(x), Some(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= AGREEMENT_TOLERANCE,
    }
}

/// Compares every spectrum of one cell with the first.
fn agreement_check(suite: &'static str, spectra: &[BlockSpectrum]) -> Check {
    let reference = &spectra[0];
    let spin = reference.spin.twice() / 2;
    let length = reference.length.unwrap_or(0);
    let mut worst: f64 = 0.0;
    let mut failure = None;
    let twice_js = (0..=spin).map(TwiceSpin::integer);
    for j in twice_js {
        let a = value_at(reference, j);
        for other in &spectra[1..] {
            let b = value_at(other, j);
            worst = worst.max((a.to_f64() - b.to_f64()).abs());
            if failure.is_none() && !values_agree(&a, &b) {
                failure = Some(json!({
                    "S": spin,
                    "L": length,
                    "J": j.twice() / 2,
                    reference.method.as_str(): render(&a),
                    other.method.as_str(): render(&b),
                }));
            }
        }
    }
    let methods: Vec<&str> = spectra.iter().map(|s| s.method.as_str()).collect();
    let mut check = Check::new(suite, "method_agreement", failure.is_none())
        .at(spin, length)
        .value(worst)
        .detail(json!({ "methods": methods }));
    if let Some(f) = failure {
        check = check.detail(json!({ "methods": methods, "counterexample": f }));
    }
    check
}

fn render(v: &Eigenvalue) -> serde_json::Value {
    match v.exact() {
        Some(r) => json!(rational_string(r)),
        None => json!(v.to_f64()),
    }
}

struct Cell {
    spectra: Vec<BlockSpectrum>,
}

fn compute_cells(
    spins: &[TwiceSpin],
    lengths: IntRange,
    methods: &[Method],
    caps: &Caps,
) -> Result<Vec<Cell>, Failure> {
    let jobs: Vec<(TwiceSpin, usize)> = spins
        .iter()
        .flat_map(|&s| lengths.iter().map(move |l| (s, l)))
        .collect();
    jobs.par_iter()
        .map(|&(s, l)| {
            let spectra = methods
                .iter()
                .map(|&m| compute_spectrum(s, l, m, caps))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Cell { spectra })
        })
        .collect()
}

fn push_spectra(doc: &mut Document, cells: &[Cell], suite: &'static str) {
    for cell in cells {
        let mut rows: Vec<SpectrumRow> = cell.spectra.iter().flat_map(spectrum_rows).collect();
        // Stable sort keeps the requested method order within each J.
        rows.sort_by_key(|r| r.j);
        doc.results.extend(rows.into_iter().map(ResultRow::Spectrum));
        if cell.spectra.len() > 1 {
            doc.checks.push(agreement_check(suite, &cell.spectra));
        }
    }
}

fn entropy_rows(spec: &BlockSpectrum, alphas: &[f64]) -> Result<Vec<EntropyRow>, Failure> {
    let report = EntropyReport::new(spec, &alphas.iter().copied().filter(|&a| a != 1.0).collect::<Vec<_>>())?;
    let spin = spec.spin.twice() / 2;
    let length = spec.length.unwrap_or(0);
    let method = spec.method.as_str().to_string();
    let row = |alpha: f64, measure: &'static str, value: f64| EntropyRow {
        spin,
        length,
        alpha,
        measure,
        value,
        saturation_gap: report.saturation_gap,
        method: method.clone(),
    };
    let mut rows = vec![row(1.0, "von_neumann", report.von_neumann)];
    rows.extend(report.renyi.iter().map(|&(a, v)| row(a, "renyi", v)));
    Ok(rows)
}

fn push_entropies(doc: &mut Document, cells: &[Cell], alphas: &[f64], suite: &'static str) -> Result<(), Failure> {
    for cell in cells {
        let per_method = cell
            .spectra
            .iter()
            .map(|s| entropy_rows(s, alphas))
            .collect::<Result<Vec<_>, _>>()?;
        if per_method.len() > 1 {
            let reference = &per_method[0];
            let mut worst: f64 = 0.0;
            for rows in &per_method[1..] {
                for (a, b) in reference.iter().zip(rows) {
                    worst = worst.max((a.value - b.value).abs());
                }
            }
            let first = &reference[0];
            doc.checks.push(
                Check::residual(suite, "entropy_agreement", worst, AGREEMENT_TOLERANCE).at(first.spin, first.length),
            );
        }
        for rows in per_method {
            doc.results.extend(rows.into_iter().map(ResultRow::Entropy));
        }
    }
    Ok(())
}

pub fn run_spectrum(args: &SpectrumArgs) -> Result<Document, Failure> {
    let spin = bulk_spin(args.spin)?;
    check_lengths(args.length)?;
    let methods = dedup_methods(&args.method);
    check_methods(&methods, args.spin)?;

    let mut config = RunConfig::new(CommandKind::Spectrum, args.common.format, args.common.max_dim);
    config.spin = Some(IntRange::single(args.spin as usize));
    config.length = Some(args.length);
    config.methods = methods.clone();
    let caps = config.caps();

    let cells = compute_cells(&[spin], args.length, &methods, &caps)?;
    let mut doc = Document::new(config);
    push_spectra(&mut doc, &cells, "spectrum");
    Ok(doc)
}

pub fn run_entropy(args: &EntropyArgs) -> Result<Document, Failure> {
    let spin = bulk_spin(args.spin)?;
    check_lengths(args.length)?;
    check_alphas(&args.alpha)?;
    let methods = dedup_methods(&args.method);
    check_methods(&methods, args.spin)?;

    let mut config = RunConfig::new(CommandKind::Entropy, args.common.format, args.common.max_dim);
    config.spin = Some(IntRange::single(args.spin as usize));
    config.length = Some(args.length);
    config.methods = methods.clone();
    config.alpha = args.alpha.clone();
    let caps = config.caps();

    let cells = compute_cells(&[spin], args.length, &methods, &caps)?;
    let mut doc = Document::new(config);
    push_entropies(&mut doc, &cells, &args.alpha, "entropy")?;
    Ok(doc)
}

pub fn run_sweep(args: &SweepArgs) -> Result<Document, Failure> {
    let spins = args
        .spin
        .iter()
        .map(|s| bulk_spin(u32::try_from(s).map_err(|_| Failure::Usage(format!("spin {s} is too large")))?))
        .collect::<Result<Vec<_>, _>>()?;
    check_lengths(args.length)?;
    check_alphas(&args.alpha)?;
    let methods = dedup_methods(&args.method);
    for s in args.spin.iter() {
        check_methods(&methods, s as u32)?;
    }

    let mut config = RunConfig::new(CommandKind::Sweep, args.common.format, args.common.max_dim);
    config.spin = Some(args.spin);
    config.length = Some(args.length);
    config.methods = methods.clone();
    config.alpha = args.alpha.clone();
    let caps = config.caps();

    let cells = compute_cells(&spins, args.length, &methods, &caps)?;
    let mut doc = Document::new(config);
    push_spectra(&mut doc, &cells, "sweep");
    push_entropies(&mut doc, &cells, &args.alpha, "sweep")?;
    Ok(doc)
}
