//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::{Duration, Instant};

use aklt_cli::run;
use aklt_core::angular::TwiceSpin;
use aklt_core::entropy::{renyi, saturated_entropy, von_neumann};
use aklt_core::oracle::{
    block_hamiltonian, block_hamiltonian_operator, build_full_vbs, correlator_reconstruction, degenerate_gram,
    degenerate_vbs, fock_block_spectrum, null_space_dimension, partial_inner_identity_check,
    pauli_channel_identity_check, pauli_ground_states_spin1, pauli_spectrum_spin1, reduced_density_matrix,
    total_spin_checks, unique_hamiltonian, unique_hamiltonian_operator, Caps,
};
use aklt_core::spectrum::limit_bound;
use aklt_core::{BigRational, BlockSpectrum, Method};
use num_traits::{One, Pow, Signed};

type Outcome = Result<String, String>;

fn sp(s: u32) -> TwiceSpin {
    TwiceSpin::integer(s)
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn factorial(n: u64) -> BigRational {
    (1..=n).fold(BigRational::one(), |acc, k| acc * int(k))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact(spin: u32, length: usize, method: Method) -> Result<BlockSpectrum, String> {
    BlockSpectrum::exact(sp(spin), length, method).map_err(|e| e.to_string())
}

fn spin1_eigenvalues() -> Outcome {
    for l in 1..=16usize {
        let r: BigRational = q(-1, 3).pow(l as i32);
        let want = [q(1, 4) * (BigRational::one() + int(3) * &r), q(1, 4) * (BigRational::one() - &r)];
        for method in [Method::Recurrence, Method::ClosedForm] {
            let spec = exact(1, l, method)?;
            for (e, w) in spec.entries.iter().zip(&want) {
                ensure(e.eigenvalue.exact() == Some(w), || format!("L={l} {method} J={}: {:?} vs {w}", e.j, e.eigenvalue))?;
            }
        }
    }
    Ok("L=1..16, both routes exact".into())
}

fn conjecture_grid() -> Outcome {
    let out = run(["aklt", "verify", "conjecture1", "--max-spin", "5", "--max-length", "30"]);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).map_err(|e| format!("{e}: {}", out.stderr))?;
    let check = &doc["checks"][0];
    ensure(out.code == 0, || format!("exit {}: {}", out.code, check["detail"]))?;
    ensure(check["name"] == "recurrence_equals_closed_form", || "unexpected first check".into())?;
    let cells = check["value"].as_f64().unwrap_or(0.0);
    ensure(cells == 580.0, || format!("{cells} cells compared"))?;
    Ok(format!("{cells} (S, L, J) cells identical"))
}

fn trace_law() -> Outcome {
    let mut cells = 0;
    for s in 1..=8 {
        for l in 1..=64 {
            for method in [Method::Recurrence, Method::ClosedForm] {
                let t = exact(s, l, method)?.exact_trace().ok_or("inexact trace")?;
                ensure(t.is_one(), || format!("S={s} L={l} {method}: trace {t}"))?;
                cells += 1;
            }
        }
    }
    Ok(format!("{cells} spectra with trace exactly 1"))
}

fn oracle_equivalence() -> Outcome {
    let caps = Caps::default();
    let mut worst: f64 = 0.0;
    let mut worst_null: f64 = 0.0;
    for (s, lmax) in [(1u32, 6usize), (2, 4), (3, 3)] {
        for l in 2..=lmax {
            let o = fock_block_spectrum(sp(s), l, l, 1, &caps).map_err(|e| e.to_string())?;
            let f = exact(s, l, Method::ClosedForm)?;
            ensure(o.spectrum.entries.len() == f.entries.len(), || format!("S={s} L={l}: labels differ"))?;
            for (a, b) in o.spectrum.entries.iter().zip(&f.entries) {
                ensure(a.j == b.j && a.multiplicity == b.j.dim(), || format!("S={s} L={l}: multiplicity of J={}", b.j))?;
                worst = worst.max((a.eigenvalue.to_f64() - b.eigenvalue.to_f64()).abs());
            }
            let expanded = f.expanded();
            let k = expanded.len();
            for (a, b) in o.eigenvalues.iter().zip(&expanded) {
                worst = worst.max((a - b).abs());
            }
            worst_null = worst_null.max(o.eigenvalues[k..].iter().fold(0.0, |m, v| m.max(v.abs())));
        }
    }
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    ensure(worst_null < 1e-10, || format!("largest null eigenvalue {worst_null:e}"))?;
    Ok(format!("max |Δ| = {worst:.1e}, max null = {worst_null:.1e}"))
}

fn norms() -> Outcome {
    let caps = Caps::default();
    for (s, nmax) in [(1u64, 5usize), (2, 2)] {
        let per_bond = factorial(2 * s + 1) / int(s + 1);
        for n in 1..=nmax {
            let want: BigRational = per_bond.clone().pow(n as i32) * factorial(s) * factorial(s + 1);
            let got = build_full_vbs(sp(s as u32), n, &caps).map_err(|e| e.to_string())?.norm_squared();
            ensure(got == want, || format!("S={s} N={n}: {got} vs {want}"))?;
        }
    }
    for l in 2..=6usize {
        let three = int(3).pow(l as i32);
        let sign = if l % 2 == 0 { int(1) } else { -int(1) };
        let want = [(&three + int(3) * &sign) / int(2), (&three - &sign) / int(2)];
        for (jv, w) in want.iter().enumerate() {
            let j = sp(jv as u32);
            for m in j.magnetizations() {
                let got = degenerate_vbs(sp(1), l, j, m, &caps).map_err(|e| e.to_string())?.norm_squared();
                ensure(&got == w, || format!("L={l} J={jv} 2M={m}: {got} vs {w}"))?;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for (s, lmax) in [(1u32, 6usize), (2, 4)] {
        for l in 2..=lmax {
            let g = degenerate_gram(sp(s), l, &caps).map_err(|e| e.to_string())?;
            ensure(g.m_independent, || format!("S={s} L={l}: diagonal depends on M"))?;
            worst = worst.max(g.max_offdiag_relative);
        }
    }
    ensure(worst <= 1e-10, || format!("Gram off-diagonal {worst:e}"))?;
    Ok(format!("chain and degenerate norms exact, Gram off-diagonal {worst:.1e}"))
}

fn hamiltonian_structure() -> Outcome {
    let caps = Caps::default();
    let mut worst: f64 = 0.0;
    for (s, lmax) in [(1u32, 5usize), (2, 3)] {
        for l in 2..=lmax {
            let h = block_hamiltonian(sp(s), l, &[], &caps).map_err(|e| e.to_string())?;
            let nullity = null_space_dimension(&h).map_err(|e| e.to_string())?;
            let want = ((s + 1) * (s + 1)) as usize;
            ensure(nullity == want, || format!("S={s} L={l}: nullity {nullity}, want {want}"))?;
            let op = block_hamiltonian_operator(sp(s), l, &[]).map_err(|e| e.to_string())?;
            for jv in 0..=s {
                for m in sp(jv).magnetizations() {
                    let v = degenerate_vbs(sp(s), l, sp(jv), m, &caps)
                        .and_then(|r| r.to_state_vector(&caps))
                        .map_err(|e| e.to_string())?;
                    worst = worst.max(op.apply(&v).map_err(|e| e.to_string())?.norm() / v.norm());
                }
            }
        }
    }
    ensure(worst <= 1e-9, || format!("H_b residual {worst:e}"))?;
    for n in 2..=5 {
        let h = unique_hamiltonian(sp(1), n, &[], &[], &caps).map_err(|e| e.to_string())?;
        let nullity = null_space_dimension(&h).map_err(|e| e.to_string())?;
        ensure(nullity == 1, || format!("unique N={n}: nullity {nullity}"))?;
        let op = unique_hamiltonian_operator(sp(1), n, &[], &[]).map_err(|e| e.to_string())?;
        let v = build_full_vbs(sp(1), n, &caps)
            .and_then(|r| r.to_state_vector(&caps))
            .map_err(|e| e.to_string())?;
        let r = op.apply(&v).map_err(|e| e.to_string())?.norm() / v.norm();
        ensure(r <= 1e-9, || format!("unique N={n}: residual {r:e}"))?;
    }
    Ok(format!("nullities (S+1)², max residual {worst:.1e}, unique ground state N=2..5"))
}

fn large_length_limit() -> Outcome {
    for s in 1..=5u32 {
        let flat = q(1, i64::from((s + 1) * (s + 1)));
        for l in 1..=40 {
            let spec = exact(s, l, Method::ClosedForm)?;
            for e in &spec.entries {
                let gap = (e.eigenvalue.exact().unwrap() - &flat).abs();
                let bound = limit_bound(sp(s), l, e.j).map_err(|e| e.to_string())?;
                ensure(gap <= bound, || format!("S={s} L={l} J={}: {gap} > {bound}", e.j))?;
            }
        }
    }
    let mut worst: f64 = 0.0;
    for s in 1..=4u32 {
        let spec = exact(s, 24, Method::ClosedForm)?;
        let target = saturated_entropy(sp(s));
        let values = [
            von_neumann(&spec).map_err(|e| e.to_string())?,
            renyi(&spec, 0.5).map_err(|e| e.to_string())?,
            renyi(&spec, 2.0).map_err(|e| e.to_string())?,
        ];
        for v in values {
            worst = worst.max((v - target).abs());
        }
    }
    ensure(worst < 1e-6, || format!("entropy gap {worst:e} at L=24"))?;
    Ok(format!("bound holds for S≤5, L≤40; entropy gap at L=24 is {worst:.1e}"))
}

fn pauli_oracle() -> Outcome {
    let caps = Caps::default();
    let mut worst: f64 = 0.0;
    let mut worst_null: f64 = 0.0;
    for l in 2..=7usize {
        let r = (-1.0f64 / 3.0).powi(l as i32);
        let want = [0.25 * (1.0 + 3.0 * r), 0.25 * (1.0 - r), 0.25 * (1.0 - r), 0.25 * (1.0 - r)];
        let mut want_sorted = want;
        want_sorted.sort_by(|a, b| b.total_cmp(a));
        let o = pauli_spectrum_spin1(l, &caps).map_err(|e| e.to_string())?;
        for (a, b) in o.eigenvalues.iter().zip(&want_sorted) {
            worst = worst.max((a - b).abs());
        }
        worst = worst.max((o.spectrum.entries[0].eigenvalue.to_f64() - want[0]).abs());
        worst = worst.max((o.spectrum.entries[1].eigenvalue.to_f64() - want[1]).abs());
        worst_null = worst_null.max(o.eigenvalues[4..].iter().fold(0.0, |m, v| m.max(v.abs())));

        let three = 3f64.powi(l as i32);
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        for alpha in 0..4 {
            let g = pauli_ground_states_spin1(l, alpha).map_err(|e| e.to_string())?;
            let norm2: f64 = g.iter().map(|x| x * x).sum();
            let want = if alpha == 0 { (three + 3.0 * sign) / 4.0 } else { (three - sign) / 4.0 };
            ensure((norm2 - want).abs() <= 1e-12 * want, || format!("L={l} α={alpha}: norm² {norm2} vs {want}"))?;
        }
    }
    ensure(worst < 1e-10, || format!("spectrum deviation {worst:e}"))?;
    ensure(worst_null < 1e-10, || format!("complement eigenvalue {worst_null:e}"))?;
    let mut channel: f64 = 0.0;
    for l in 2..=5 {
        channel = channel.max(pauli_channel_identity_check(l).map_err(|e| e.to_string())?.residual);
    }
    ensure(channel < 1e-13, || format!("channel identity residual {channel:e}"))?;
    Ok(format!("max |Δ| = {worst:.1e}, complement {worst_null:.1e}, channel {channel:.1e}"))
}

fn appendix_checks() -> Outcome {
    let caps = Caps::default();
    let mut corr: f64 = 0.0;
    for l in 2..=3usize {
        let st = build_full_vbs(sp(1), l + 1, &caps)
            .and_then(|r| r.to_state_vector(&caps))
            .map_err(|e| e.to_string())?;
        let a = correlator_reconstruction(&st, 1..1 + l, &caps).map_err(|e| e.to_string())?;
        let b = reduced_density_matrix(&st, 1..1 + l, &caps).map_err(|e| e.to_string())?;
        corr = corr.max(a.max_abs_diff(&b));
    }
    ensure(corr <= 1e-10, || format!("correlator reconstruction {corr:e}"))?;
    let mut inner: f64 = 0.0;
    for s in 1..=2u32 {
        for jv in 0..=s {
            for m in sp(jv).magnetizations() {
                let r = partial_inner_identity_check(sp(s), 2, sp(jv), m, &caps).map_err(|e| e.to_string())?;
                inner = inner.max(r.residual);
            }
        }
    }
    ensure(inner < 1e-10, || format!("partial inner product {inner:e}"))?;
    let mut spin: f64 = 0.0;
    for jv in 0..=1u32 {
        let j = sp(jv);
        for m in j.magnetizations() {
            let v = degenerate_vbs(sp(1), 3, j, m, &caps)
                .and_then(|r| r.to_state_vector(&caps))
                .map_err(|e| e.to_string())?;
            let up = if m < j.twice() as i32 {
                Some(
                    degenerate_vbs(sp(1), 3, j, m + 2, &caps)
                        .and_then(|r| r.to_state_vector(&caps))
                        .map_err(|e| e.to_string())?,
                )
            } else {
                None
            };
            let r = total_spin_checks(&v, j, m, up.as_ref()).map_err(|e| e.to_string())?;
            spin = spin
                .max(r.sz_residual)
                .max(r.s_squared_residual)
                .max(r.raising_residual.unwrap_or(0.0));
        }
    }
    ensure(spin < 1e-9, || format!("total spin residual {spin:e}"))?;
    Ok(format!("correlators {corr:.1e}, partial inner {inner:.1e}, total spin {spin:.1e}"))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { name: "spin-1 eigenvalues", budget: Duration::from_secs(1), run: spin1_eigenvalues },
        Criterion { name: "recurrence/closed-form grid", budget: Duration::from_secs(30), run: conjecture_grid },
        Criterion { name: "trace law", budget: Duration::from_secs(30), run: trace_law },
        Criterion { name: "Fock oracle equivalence", budget: Duration::from_secs(300), run: oracle_equivalence },
        Criterion { name: "VBS norms and Gram matrices", budget: Duration::from_secs(60), run: norms },
        Criterion { name: "Hamiltonian null spaces", budget: Duration::from_secs(120), run: hamiltonian_structure },
        Criterion { name: "large-L limit and entropy saturation", budget: Duration::from_secs(5), run: large_length_limit },
        Criterion { name: "spin-1 Pauli oracle", budget: Duration::from_secs(60), run: pauli_oracle },
        Criterion { name: "correlators, partial inner product, total spin", budget: Duration::from_secs(60), run: appendix_checks },
    ];
    let mut failures = 0;
    for (k, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, note) = match outcome {
            Ok(note) if elapsed <= c.budget => ("PASS", note),
            Ok(note) => ("FAIL", format!("{note}; took longer than {:?}", c.budget)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("{status} criterion {}: {} ({:.2?}) {note}", k + 1, c.name, elapsed);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
