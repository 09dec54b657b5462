use aklt_core::oracle::{
    block_hamiltonian, block_hamiltonian_operator, build_full_vbs, correlator_reconstruction,
    degenerate_gram, degenerate_vbs, fock_block_spectrum, ground_projector_check, null_space_dimension,
    partial_inner_identity_check, pauli_channel_identity_check, pauli_ground_states_spin1,
    pauli_spectrum_spin1, psi_dagger, reduced_density_matrix, total_spin_checks, unique_hamiltonian,
    unique_hamiltonian_operator, valence_bond_commutator_check, Caps,
};
use aklt_core::spectrum::{degenerate_norm, limit_bound, vbs_norm};
use aklt_core::{BigRational, BlockSpectrum, Method, TwiceSpin};
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde_json::json;

use crate::args::{IntRange, Suite, VerifyArgs};
use crate::commands::{bulk_spin, rational_string};
use crate::config::{CommandKind, RunConfig};
use crate::report::{Check, Document};
use crate::Failure;

/// Unique-Hamiltonian instances are diagonalised only up to this dimension.
pub const UNIQUE_HAMILTONIAN_MAX_DIM: usize = 1024;

const CONJECTURE: &str = "conjecture1";
const ORACLE: &str = "oracle";
const HAMILTONIAN: &str = "hamiltonian";
const APPENDIX: &str = "appendix";

type Job<'a> = Box<dyn Fn() -> Result<Vec<Check>, Failure> + Send + Sync + 'a>;

/// Runs jobs in parallel; checks come back in job order.
fn run_jobs(jobs: Vec<Job<'_>>) -> Result<Vec<Check>, Failure> {
    let results: Vec<Result<Vec<Check>, Failure>> = jobs.par_iter().map(|j| j()).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Numerical breakdowns become failed checks; usage and cap errors abort the run.
fn guarded(suite: &'static str, name: &str, spin: u32, length: usize, r: Result<Vec<Check>, Failure>) -> Result<Vec<Check>, Failure> {
    match r {
        Err(Failure::Compute(msg)) => {
            Ok(vec![Check::new(suite, name, false).at(spin, length).detail(json!({ "error": msg }))])
        }
        other => other,
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn sp(s: u32) -> TwiceSpin {
    TwiceSpin::integer(s)
}

/// All `(J, M)` labels of a spin-`S` block, as twice-values.
fn edge_labels(s: u32) -> Vec<(TwiceSpin, i32)> {
    (0..=s).flat_map(|j| sp(j).magnetizations().map(move |m| (sp(j), m))).collect()
}

fn spin_list(filter: Option<u32>, default: &[u32]) -> Result<Vec<u32>, Failure> {
    match filter {
        Some(s) => {
            bulk_spin(s)?;
            Ok(vec![s])
        }
        None => Ok(default.to_vec()),
    }
}

// ---------------------------------------------------------------------------

/// `¼(1 + 3(-⅓)^L)` and `¼(1 - (-⅓)^L)`.
fn spin1_expected(length: usize) -> [BigRational; 2] {
    let r = BigRational::new((-1).into(), 3.into()).pow(length as i32);
    let quarter = BigRational::new(1.into(), 4.into());
    [&quarter * (BigRational::one() + int(3) * &r), &quarter * (BigRational::one() - r)]
}

fn conjecture1(max_spin: u32, max_length: usize) -> Result<Vec<Check>, Failure> {
    if max_spin == 0 {
        return Err(Failure::Usage("bulk spin must be a positive integer".into()));
    }
    if max_length < 2 {
        return Err(Failure::Usage("--max-length must be at least 2".into()));
    }
    let cells: Vec<(u32, usize)> = (1..=max_spin).flat_map(|s| (1..=max_length).map(move |l| (s, l))).collect();

    struct CellResult {
        mismatch: Option<serde_json::Value>,
        trace: Option<serde_json::Value>,
        bound: Option<serde_json::Value>,
        compared: usize,
    }
    let results = cells
        .par_iter()
        .map(|&(s, l)| -> Result<CellResult, Failure> {
            let spin = sp(s);
            let mut out = CellResult {
                mismatch: None,
                trace: None,
                bound: None,
                compared: 0,
            };
            let rec = BlockSpectrum::exact(spin, l, Method::Recurrence)?;
            let closed = BlockSpectrum::exact(spin, l, Method::ClosedForm)?;
            for (a, b) in rec.entries.iter().zip(&closed.entries) {
                let (x, y) = (a.eigenvalue.exact().unwrap(), b.eigenvalue.exact().unwrap());
                if l >= 2 {
                    out.compared += 1;
                    if out.mismatch.is_none() && x != y {
                        out.mismatch = Some(json!({
                            "S": s, "L": l, "J": a.j.twice() / 2,
                            "recurrence": rational_string(x), "closed_form": rational_string(y),
                        }));
                    }
                }
                let flat = BigRational::new(1.into(), ((s + 1) * (s + 1)).into());
                let gap = (y - flat).abs();
                let bound = limit_bound(spin, l, b.j)?;
                if out.bound.is_none() && gap > bound {
                    out.bound = Some(json!({
                        "S": s, "L": l, "J": b.j.twice() / 2,
                        "gap": rational_string(&gap), "bound": rational_string(&bound),
                    }));
                }
            }
            for spec in [&rec, &closed] {
                let t = spec.exact_trace().unwrap();
                if out.trace.is_none() && t != BigRational::one() {
                    out.trace = Some(json!({
                        "S": s, "L": l, "method": spec.method.as_str(), "trace": rational_string(&t),
                    }));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let compared: usize = results.iter().map(|r| r.compared).sum();
    let first = |f: fn(&CellResult) -> &Option<serde_json::Value>| results.iter().find_map(|r| f(r).clone());
    let with_counterexample = |check: Check, c: Option<serde_json::Value>| match c {
        Some(v) => check.detail(json!({ "counterexample": v })),
        None => check,
    };

    let mut checks = Vec::new();
    let mismatch = first(|r| &r.mismatch);
    checks.push(with_counterexample(
        Check::new(CONJECTURE, "recurrence_equals_closed_form", mismatch.is_none()).value(compared as f64),
        mismatch,
    ));
    let trace = first(|r| &r.trace);
    checks.push(with_counterexample(
        Check::new(CONJECTURE, "trace_law", trace.is_none()).value(cells.len() as f64),
        trace,
    ));
    let bound = first(|r| &r.bound);
    checks.push(with_counterexample(
        Check::new(CONJECTURE, "limit_bound", bound.is_none()).value(cells.len() as f64),
        bound,
    ));

    let mut spin1 = None;
    for l in 1..=max_length {
        let expected = spin1_expected(l);
        for method in [Method::Recurrence, Method::ClosedForm] {
            let spec = BlockSpectrum::exact(sp(1), l, method)?;
            for (e, want) in spec.entries.iter().zip(&expected) {
                let got = e.eigenvalue.exact().unwrap();
                if spin1.is_none() && got != want {
                    spin1 = Some(json!({
                        "S": 1, "L": l, "J": e.j.twice() / 2, "method": method.as_str(),
                        "value": rational_string(got), "expected": rational_string(want),
                    }));
                }
            }
        }
    }
    checks.push(with_counterexample(
        Check::new(CONJECTURE, "spin1_closed_form", spin1.is_none()).spin(1).value(max_length as f64),
        spin1,
    ));
    Ok(checks)
}

// ---------------------------------------------------------------------------

fn default_oracle_length(s: u32) -> usize {
    match s {
        1 => 6,
        2 => 4,
        3 => 3,
        _ => 2,
    }
}

fn formula(spin: TwiceSpin, l: usize) -> Result<BlockSpectrum, Failure> {
    Ok(BlockSpectrum::exact(spin, l, Method::ClosedForm)?)
}

/// Oracle spectrum against the formula: values, labels, multiplicities, rank.
fn compare_oracle(
    name: &str,
    s: u32,
    l: usize,
    oracle: &aklt_core::oracle::OracleSpectrum,
    tolerance: f64,
) -> Result<Check, Failure> {
    let f = formula(sp(s), l)?;
    let mut worst: f64 = 0.0;
    let mut counterexample = None;
    let labels_match = oracle.spectrum.entries.len() == f.entries.len()
        && oracle
            .spectrum
            .entries
            .iter()
            .zip(&f.entries)
            .all(|(a, b)| a.j == b.j && a.multiplicity == b.multiplicity);
    for e in &f.entries {
        let want = e.eigenvalue.to_f64();
        let got = oracle.spectrum.entry(e.j).map(|x| x.eigenvalue.to_f64());
        let diff = got.map_or(f64::INFINITY, |g| (g - want).abs());
        worst = worst.max(diff);
        if counterexample.is_none() && !(diff <= tolerance) {
            counterexample = Some(json!({"S": s, "L": l, "J": e.j.twice() / 2, "oracle": got, "formula": want}));
        }
    }
    let expanded = f.expanded();
    for (a, b) in oracle.eigenvalues.iter().zip(&expanded) {
        worst = worst.max((a - b).abs());
    }
    let rank_ok = oracle.rank == ((s + 1) * (s + 1)) as usize;
    let null_ok = oracle.max_null < 1e-10;
    let mut check = Check::residual(ORACLE, name, worst, tolerance).at(s, l);
    check.passed &= labels_match && rank_ok && null_ok;
    Ok(check.detail(json!({
        "rank": oracle.rank,
        "max_null": oracle.max_null,
        "labels_match": labels_match,
        "counterexample": counterexample,
    })))
}

fn oracle_cell(s: u32, l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spin = sp(s);
    let mut checks = Vec::new();
    let fock = fock_block_spectrum(spin, l, l, 1, caps)?;
    checks.push(compare_oracle("fock_vs_formula", s, l, &fock, 1e-9)?);

    let gram = degenerate_gram(spin, l, caps)?;
    let mut norms_exact = true;
    for ((j, _), n) in gram.labels.iter().zip(&gram.norms) {
        norms_exact &= *n == degenerate_norm(spin, l, *j)?;
    }
    let mut c = Check::residual(ORACLE, "degenerate_gram", gram.max_offdiag_relative, 1e-10).at(s, l);
    c.passed &= gram.m_independent && norms_exact;
    checks.push(c.detail(json!({ "m_independent": gram.m_independent, "norms_exact": norms_exact })));

    // Position and chain-length independence, on the cheaper blocks.
    if (2 * s as usize + 1).pow(l as u32) <= 81 {
        let mut worst: f64 = 0.0;
        for n in [l + 1, l + 2] {
            for k in 1..=n + 1 - l {
                let other = fock_block_spectrum(spin, l, n, k, caps)?;
                for (a, b) in other.eigenvalues.iter().zip(&fock.eigenvalues) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        checks.push(Check::residual(ORACLE, "chain_length_independence", worst, 1e-9).at(s, l));
    }
    Ok(checks)
}

fn vbs_norm_check(s: u32, n: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spin = sp(s);
    let raw = build_full_vbs(spin, n, caps)?.norm_squared();
    let want = vbs_norm(spin, n)?;
    Ok(vec![Check::new(ORACLE, "vbs_norm", raw == want).at(s, n).detail(json!({
        "N": n,
        "raw": rational_string(&raw),
        "expected": rational_string(&want),
    }))])
}

fn pauli_cell(l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let mut checks = Vec::new();
    let p = pauli_spectrum_spin1(l, caps)?;
    checks.push(compare_oracle("pauli_vs_formula", 1, l, &p, 1e-10)?);

    let states = (0..4).map(|a| pauli_ground_states_spin1(l, a)).collect::<aklt_core::Result<Vec<_>>>()?;
    let three = 3f64.powi(l as i32);
    let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
    let expected = [(three + 3.0 * sign) / 4.0, (three - sign) / 4.0];
    let mut worst: f64 = 0.0;
    for (a, g) in states.iter().enumerate() {
        let norm2: f64 = g.iter().map(|x| x * x).sum();
        let want = expected[usize::from(a > 0)];
        worst = worst.max((norm2 - want).abs() / want);
        for h in &states[a + 1..] {
            let overlap: f64 = g.iter().zip(h).map(|(x, y)| x * y).sum();
            worst = worst.max(overlap.abs());
        }
    }
    checks.push(Check::residual(ORACLE, "pauli_ground_states", worst, 1e-12).at(1, l));

    if l <= 5 {
        let c = pauli_channel_identity_check(l)?;
        checks.push(Check::residual(ORACLE, "pauli_channel_identity", c.residual, 1e-13).at(1, l));
    }
    Ok(checks)
}

fn ground_projector_checks(max_length: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let reports = (2..=max_length)
        .into_par_iter()
        .map(|l| ground_projector_check(sp(1), l, caps).map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    let mut previous = f64::INFINITY;
    let mut checks = Vec::new();
    for r in reports {
        let passed = r.rank == 4 && r.hamiltonian_residual <= 1e-9 && r.max_abs_deviation < previous;
        checks.push(Check::new(ORACLE, "ground_projector", passed).at(1, r.length).value(r.max_abs_deviation).detail(
            json!({
                "rank": r.rank,
                "hamiltonian_residual": r.hamiltonian_residual,
                "two_norm_deviation": r.two_norm_deviation,
            }),
        ));
        previous = r.max_abs_deviation;
    }
    Ok(checks)
}

fn oracle_suite(spin: Option<u32>, max_length: Option<usize>, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spins = spin_list(spin, &[1, 2, 3])?;
    let mut jobs: Vec<Job> = Vec::new();
    for &s in &spins {
        let lmax = max_length.unwrap_or_else(|| default_oracle_length(s));
        if lmax < 2 {
            return Err(Failure::Usage("--max-length must be at least 2".into()));
        }
        for n in 1..=(lmax - 1).max(1) {
            jobs.push(Box::new(move || guarded(ORACLE, "vbs_norm", s, n, vbs_norm_check(s, n, caps))));
        }
        for l in 2..=lmax {
            jobs.push(Box::new(move || guarded(ORACLE, "fock_vs_formula", s, l, oracle_cell(s, l, caps))));
        }
        if s == 1 {
            for l in 2..=lmax.min(7) {
                jobs.push(Box::new(move || guarded(ORACLE, "pauli_vs_formula", 1, l, pauli_cell(l, caps))));
            }
            jobs.push(Box::new(move || guarded(ORACLE, "ground_projector", 1, lmax, ground_projector_checks(lmax, caps))));
        }
    }
    run_jobs(jobs)
}

// ---------------------------------------------------------------------------

fn default_hamiltonian_lengths(s: u32) -> IntRange {
    match s {
        1 => IntRange { start: 2, end: 5 },
        2 => IntRange { start: 2, end: 3 },
        _ => IntRange::single(2),
    }
}

fn block_cell(s: u32, l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spin = sp(s);
    let expected = ((s + 1) * (s + 1)) as usize;
    let h = block_hamiltonian(spin, l, &[], caps)?;
    let nullity = null_space_dimension(&h)?;
    let mut checks = vec![Check::new(HAMILTONIAN, "block_null_space", nullity == expected)
        .at(s, l)
        .value(nullity as f64)
        .detail(json!({ "expected": expected }))];

    let op = block_hamiltonian_operator(spin, l, &[])?;
    let mut worst: f64 = 0.0;
    for (j, m) in edge_labels(s) {
        let v = degenerate_vbs(spin, l, j, m, caps)?.to_state_vector(caps)?;
        worst = worst.max(op.apply(&v)?.norm() / v.norm());
    }
    checks.push(Check::residual(HAMILTONIAN, "block_annihilates_degenerate_vbs", worst, 1e-9).at(s, l));

    let weights: Vec<f64> = (1..=s).map(|k| 1.0 + k as f64).collect();
    let rescaled = null_space_dimension(&block_hamiltonian(spin, l, &weights, caps)?)?;
    checks.push(
        Check::new(HAMILTONIAN, "rescaled_couplings_null_space", rescaled == nullity)
            .at(s, l)
            .value(rescaled as f64),
    );
    Ok(checks)
}

fn unique_cell(s: u32, n: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spin = sp(s);
    let h = unique_hamiltonian(spin, n, &[], &[], caps)?;
    let nullity = null_space_dimension(&h)?;
    let op = unique_hamiltonian_operator(spin, n, &[], &[])?;
    let vbs = build_full_vbs(spin, n, caps)?.to_state_vector(caps)?;
    let residual = op.apply(&vbs)?.norm() / vbs.norm();
    Ok(vec![
        Check::new(HAMILTONIAN, "unique_null_space", nullity == 1).at(s, n).value(nullity as f64),
        Check::residual(HAMILTONIAN, "unique_annihilates_vbs", residual, 1e-9).at(s, n),
    ])
}

fn unique_dimension(s: u32, n: usize) -> usize {
    let end = s as usize + 1;
    (2 * s as usize + 1).saturating_pow(n as u32).saturating_mul(end * end)
}

fn hamiltonian_suite(spin: Option<u32>, length: Option<IntRange>, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spins = spin_list(spin, &[1, 2])?;
    let mut jobs: Vec<Job> = Vec::new();
    for &s in &spins {
        let lengths = length.unwrap_or_else(|| default_hamiltonian_lengths(s));
        if lengths.start < 2 {
            return Err(Failure::Usage("block Hamiltonian lengths start at 2".into()));
        }
        for l in lengths.iter() {
            jobs.push(Box::new(move || guarded(HAMILTONIAN, "block_null_space", s, l, block_cell(s, l, caps))));
            if unique_dimension(s, l) <= UNIQUE_HAMILTONIAN_MAX_DIM {
                jobs.push(Box::new(move || guarded(HAMILTONIAN, "unique_null_space", s, l, unique_cell(s, l, caps))));
            }
        }
    }
    run_jobs(jobs)
}

// ---------------------------------------------------------------------------

fn correlator_cell(s: u32, l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let state = build_full_vbs(sp(s), l + 1, caps)?.to_state_vector(caps)?;
    let block = 1..1 + l;
    let a = correlator_reconstruction(&state, block.clone(), caps)?;
    let b = reduced_density_matrix(&state, block, caps)?;
    Ok(vec![Check::residual(APPENDIX, "correlator_reconstruction", a.max_abs_diff(&b), 1e-10).at(s, l)])
}

fn partial_inner_cell(s: u32, l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let mut worst: f64 = 0.0;
    let mut exact = true;
    let mut mismatch = None;
    for (j, m) in edge_labels(s) {
        let r = partial_inner_identity_check(sp(s), l, j, m, caps)?;
        worst = worst.max(r.residual);
        exact &= r.exact;
        if mismatch.is_none() && r.phase_mismatch() {
            mismatch = Some(json!({ "J": j.twice() / 2, "twice_M": m }));
        }
    }
    Ok(vec![Check::residual(APPENDIX, "partial_inner_identity", worst, 1e-10)
        .at(s, l)
        .detail(json!({ "exact": exact, "phase_mismatch": mismatch }))])
}

fn total_spin_cell(s: u32, l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spin = sp(s);
    let mut worst: f64 = 0.0;
    for (j, m) in edge_labels(s) {
        let v = degenerate_vbs(spin, l, j, m, caps)?.to_state_vector(caps)?;
        let raised = if m < j.twice() as i32 {
            Some(degenerate_vbs(spin, l, j, m + 2, caps)?.to_state_vector(caps)?)
        } else {
            None
        };
        // The ladder relation holds for states of equal norm, which the
        // degenerate states have (their norms do not depend on M).
        let r = total_spin_checks(&v, j, m, raised.as_ref())?;
        worst = worst
            .max(r.sz_residual)
            .max(r.s_squared_residual)
            .max(r.raising_residual.unwrap_or(0.0));
        if j.twice() == 0 {
            let n = v.norm();
            worst = worst.max(v.total_s_plus().norm() / n).max(v.total_s_minus().norm() / n);
        }
    }
    Ok(vec![Check::residual(APPENDIX, "total_spin", worst, 1e-9).at(s, l)])
}

fn commutator_cell(s: u32, l: usize, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spin = sp(s);
    let mut all = true;
    for (j, m) in edge_labels(s) {
        let seed = psi_dagger(spin, l, 0, l - 1, j, m)?;
        all &= valence_bond_commutator_check(spin, &seed, caps)? == [true; 3];
    }
    Ok(vec![Check::new(APPENDIX, "valence_bond_commutators", all).at(s, l)])
}

fn appendix_suite(spin: Option<u32>, caps: &Caps) -> Result<Vec<Check>, Failure> {
    let spins = spin_list(spin, &[1, 2])?;
    let mut jobs: Vec<Job> = Vec::new();
    for &s in &spins {
        let correlator_lengths = if s == 1 { 2..=3 } else { 2..=2 };
        for l in correlator_lengths {
            jobs.push(Box::new(move || guarded(APPENDIX, "correlator_reconstruction", s, l, correlator_cell(s, l, caps))));
        }
        jobs.push(Box::new(move || guarded(APPENDIX, "partial_inner_identity", s, 2, partial_inner_cell(s, 2, caps))));
        let spin_length = if s == 1 { 3 } else { 2 };
        jobs.push(Box::new(move || guarded(APPENDIX, "total_spin", s, spin_length, total_spin_cell(s, spin_length, caps))));
        for l in 2..=3 {
            jobs.push(Box::new(move || guarded(APPENDIX, "valence_bond_commutators", s, l, commutator_cell(s, l, caps))));
        }
    }
    run_jobs(jobs)
}

// ---------------------------------------------------------------------------

pub fn run_verify(args: &VerifyArgs) -> Result<Document, Failure> {
    let mut config = RunConfig::new(CommandKind::Verify, args.common.format, args.common.max_dim);
    config.suite = Some(args.suite);
    config.spin = args.spin.map(|s| IntRange::single(s as usize));
    config.length = args.length;
    config.max_spin = args.max_spin;
    config.max_length = args.max_length;
    let caps = config.caps();

    let max_spin = args.max_spin.or(args.spin).unwrap_or(5);
    let grid_length = args.max_length.unwrap_or(30);
    let mut checks = Vec::new();
    let pick = |suite: Suite| args.suite == suite || args.suite == Suite::All;
    if pick(Suite::Conjecture1) {
        checks.extend(conjecture1(max_spin, grid_length)?);
    }
    if pick(Suite::Oracle) {
        checks.extend(oracle_suite(args.spin, args.max_length, &caps)?);
    }
    if pick(Suite::Hamiltonian) {
        checks.extend(hamiltonian_suite(args.spin, args.length, &caps)?);
    }
    if pick(Suite::Appendix) {
        checks.extend(appendix_suite(args.spin, &caps)?);
    }
    let mut doc = Document::new(config);
    doc.checks = checks;
    Ok(doc)
}
