//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines appear in plain `cargo test` output.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use torsionpoly::fixtures::{check_fixture, FIXTURES};
use torsionpoly::oracle::{collect_roots, compare, reconstruct, root_correspondence};
use torsionpoly::polyalg::{
    chebyshev_product_identity_check, chebyshev_t, chebyshev_u, exact_div, Poly,
};
use torsionpoly::scalar::Real;
use torsionpoly::torsion::{
    degree_formula, enumerate_reps, normalization_value, sigma, verify_three_term,
    SurgeryDescriptor, TorsionError, TorsionPolynomial,
};
use torsionpoly::verify::{Grid, Scope};
use torsionpoly::{BigReal, DEFAULT_PRECISION};

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

type Table = Vec<(SurgeryDescriptor, Result<TorsionPolynomial, TorsionError>)>;

fn grid_cells() -> Vec<SurgeryDescriptor> {
    Scope::Grid(Grid::STANDARD).cells()
}

fn fixtures() -> Line {
    let (reports, elapsed) = timed(|| {
        FIXTURES
            .iter()
            .map(|fx| check_fixture(fx, DEFAULT_PRECISION, 1e-9))
            .collect::<Vec<_>>()
    });
    let mut passed = elapsed < Duration::from_secs(5);
    let mut seen = Vec::new();
    let mut detail = Vec::new();
    for r in &reports {
        match r {
            Ok(r) => {
                passed &= r.passed;
                detail.push(format!(
                    "{} {}/{} direct",
                    r.descriptor,
                    r.matched,
                    r.degree + 1
                ));
                for o in &r.deviations {
                    seen.push((
                        o.deviation.p,
                        o.deviation.q,
                        o.deviation.n,
                        o.deviation.degree,
                    ));
                    detail.push(format!(
                        "t^{} {:?}->{} rel err {:.1e}",
                        o.deviation.degree,
                        o.deviation.token,
                        o.deviation.adopted,
                        o.rel_error_adopted
                    ));
                }
            }
            Err(e) => {
                passed = false;
                detail.push(e.to_string());
            }
        }
    }
    passed &= seen == [(3, 5, -1, 0), (3, 5, 1, 7)];
    Line {
        id: 1,
        name: "fixture reproduction",
        passed,
        detail: detail.join("; "),
        elapsed,
    }
}

fn zero_surgery() -> Line {
    let (bad, elapsed) = timed(|| {
        let mut bad = Vec::new();
        let mut count = 0;
        for p in 2..=12u32 {
            for q in 2..=12u32 {
                let Ok(d) = SurgeryDescriptor::new(p, q, 0) else {
                    continue;
                };
                count += 1;
                match sigma(&d) {
                    Ok(s) if *s.sigma() == Poly::one() => {}
                    _ => bad.push(d.to_string()),
                }
            }
        }
        (bad, count)
    });
    let (bad, count) = bad;
    Line {
        id: 2,
        name: "sigma_(p,q,0) = 1",
        passed: bad.is_empty(),
        detail: format!("{count} coprime pairs, failures {bad:?}"),
        elapsed,
    }
}

fn normalization(table: &Table, compute_time: Duration) -> Line {
    let (res, check_time) = timed(|| {
        let mut bad = Vec::new();
        let mut corrected = Vec::new();
        for (d, s) in table {
            match s {
                Ok(s) => {
                    if s.constant_term() != BigInt::from(normalization_value(d)) {
                        bad.push(d.to_string());
                    }
                    if s.sign_corrected() {
                        corrected.push(d.to_string());
                    }
                }
                Err(e) => bad.push(format!("{d}: {e}")),
            }
        }
        (bad, corrected)
    });
    let (bad, corrected) = res;
    let elapsed = compute_time + check_time;
    Line {
        id: 3,
        name: "normalization",
        passed: bad.is_empty() && elapsed < Duration::from_secs(30),
        detail: format!(
            "{} cells, failures {bad:?}, sign corrected in {}: {}",
            table.len(),
            corrected.len(),
            corrected.join(" ")
        ),
        elapsed,
    }
}

fn degree(table: &Table) -> Line {
    let (bad, elapsed) = timed(|| {
        let mut bad = Vec::new();
        for (d, s) in table {
            let acyclic = enumerate_reps(d).map(|r| r.iter().filter(|c| c.acyclic).count() as u64);
            match s {
                Ok(s)
                    if s.degree() as u64 == degree_formula(d)
                        && acyclic == Ok(degree_formula(d)) => {}
                _ => bad.push(d.to_string()),
            }
        }
        for (p, q, n, want) in [(4, 3, 1, 12usize), (3, 5, -1, 14)] {
            let d = SurgeryDescriptor::new(p, q, n).unwrap();
            if sigma(&d).map(|s| s.degree()) != Ok(want) {
                bad.push(format!("{d} expected degree {want}"));
            }
        }
        bad
    });
    Line {
        id: 4,
        name: "degree formula",
        passed: bad.is_empty(),
        detail: format!(
            "{} cells plus (4,3,1) = 12, (3,5,-1) = 14; failures {bad:?}",
            table.len()
        ),
        elapsed,
    }
}

fn roots(table: &Table) -> Line {
    let (res, elapsed) = timed(|| {
        let mut bad = Vec::new();
        let mut worst = 0.0f64;
        for (d, s) in table {
            let Ok(s) = s else {
                bad.push(d.to_string());
                continue;
            };
            let expected: Vec<f64> = match collect_roots::<BigReal>(d, DEFAULT_PRECISION) {
                Ok(ms) => ms.roots.iter().map(Real::to_f64).collect(),
                Err(e) => {
                    bad.push(format!("{d}: {e}"));
                    continue;
                }
            };
            let rc = root_correspondence(s.sigma(), &expected, 1e-6, 8);
            worst = worst.max(rc.max_rel_error);
            if !rc.passed || rc.expected != rc.degree {
                bad.push(format!("{d}: unresolved {:?}", rc.unresolved));
            }
        }
        (bad, worst)
    });
    let (bad, worst) = res;
    Line {
        id: 5,
        name: "root correspondence",
        passed: bad.is_empty(),
        detail: format!(
            "{} cells, max rel err {worst:.1e}, failures {bad:?}",
            table.len()
        ),
        elapsed,
    }
}

fn relation() -> Line {
    let (res, elapsed) = timed(|| {
        let nmax = Grid::STANDARD.nmax;
        let mut bad = Vec::new();
        let mut count = 0;
        for (p, q) in Grid::STANDARD.pairs() {
            for n in -nmax..=nmax {
                let d = SurgeryDescriptor::new(p, q, n).unwrap();
                count += 1;
                match verify_three_term(&d) {
                    Ok(r) if r.passed() => {}
                    Ok(_) => bad.push(d.to_string()),
                    Err(e) => bad.push(format!("{d}: {e}")),
                }
            }
        }
        (bad, count)
    });
    let (bad, count) = res;
    Line {
        id: 6,
        name: "three-term relation",
        passed: bad.is_empty() && elapsed < Duration::from_secs(60),
        detail: format!(
            "{count} centres n in [-2, 2] (so n +- step reaches |n| <= 4), failures {bad:?}"
        ),
        elapsed,
    }
}

fn integrality(table: &Table) -> Line {
    let (res, elapsed) = timed(|| {
        let mut bad = Vec::new();
        let mut coefficients = 0;
        for (d, s) in table {
            match s {
                Ok(s) => coefficients += s.sigma().coeffs().len(),
                Err(e) => bad.push(format!("{d}: {e}")),
            }
        }
        (bad, coefficients)
    });
    let (bad, coefficients) = res;
    Line {
        id: 7,
        name: "integrality",
        passed: bad.is_empty(),
        detail: format!(
            "{coefficients} coefficients over {} cells, failures {bad:?}",
            table.len()
        ),
        elapsed,
    }
}

/// Horner at 256 bits; the exact coefficients of `T_l` cancel heavily in `f64`.
fn eval_big(p: &Poly<BigInt>, x: f64) -> f64 {
    let prec = 256;
    let x = BigReal::from_f64(x, prec);
    let mut acc = BigReal::zero(prec);
    for c in p.coeffs().iter().rev() {
        acc = acc * x.clone() + BigReal::from_bigint(c, prec);
    }
    acc.to_f64()
}

fn chebyshev() -> Line {
    let (res, elapsed) = timed(|| {
        let mut bad = Vec::new();
        for m in 0..=40 {
            for n in 0..=m {
                if !chebyshev_product_identity_check(m, n) {
                    bad.push(format!("product ({m},{n})"));
                }
            }
        }
        for big_n in 1..=60usize {
            let num = &chebyshev_t(big_n + 1) - &chebyshev_t(big_n - 1);
            let den = Poly::from_i64s(&[-2, 0, 2]);
            if exact_div(&num, &den).as_ref() != Ok(&chebyshev_u(big_n - 1)) {
                bad.push(format!("U_{}", big_n - 1));
            }
        }
        let mut worst = 0.0f64;
        for l in 0..=60usize {
            let t = chebyshev_t(l);
            for i in 0..100 {
                let theta = std::f64::consts::PI * (i as f64 + 0.5) / 100.0;
                let err = (eval_big(&t, theta.cos()) - (l as f64 * theta).cos()).abs();
                worst = worst.max(err);
            }
        }
        if worst >= 1e-9 {
            bad.push(format!("numeric error {worst:.1e}"));
        }
        (bad, worst)
    });
    let (bad, worst) = res;
    Line {
        id: 8,
        name: "Chebyshev identities",
        passed: bad.is_empty(),
        detail: format!("product m,n <= 40; U identity N <= 60; T_l(cos) for l <= 60 max err {worst:.1e}; failures {bad:?}"),
        elapsed,
    }
}

fn oracle(table: &Table) -> Line {
    let (res, elapsed) = timed(|| {
        let mut bad = Vec::new();
        let mut worst = 0.0f64;
        let mut count = 0;
        let fixture_cells: Vec<SurgeryDescriptor> =
            FIXTURES.iter().map(|f| f.descriptor()).collect();
        let by_desc: HashMap<SurgeryDescriptor, &Result<TorsionPolynomial, TorsionError>> =
            table.iter().map(|(d, s)| (*d, s)).collect();
        let extra: Vec<(SurgeryDescriptor, Result<TorsionPolynomial, TorsionError>)> =
            fixture_cells
                .iter()
                .filter(|d| !by_desc.contains_key(d))
                .map(|d| (*d, sigma(d)))
                .collect();
        for (d, s) in table.iter().chain(extra.iter()) {
            count += 1;
            let Ok(s) = s else {
                bad.push(d.to_string());
                continue;
            };
            let ok = collect_roots::<BigReal>(d, DEFAULT_PRECISION)
                .map(|ms| reconstruct(&ms, &s.leading_coefficient()))
                .ok()
                .and_then(|approx| compare(s.sigma(), &approx, 1e-9).ok());
            match ok {
                Some(r) => {
                    worst = worst.max(r.max_error);
                    if !r.passed {
                        bad.push(d.to_string());
                    }
                }
                None => bad.push(d.to_string()),
            }
        }
        (bad, worst, count)
    });
    let (bad, worst, count) = res;
    Line {
        id: 9,
        name: "oracle equivalence",
        passed: bad.is_empty(),
        detail: format!("{count} polynomials (grid and fixtures) at 128 bits, max rel err {worst:.1e}, failures {bad:?}"),
        elapsed,
    }
}

fn main() -> ExitCode {
    // `cargo test -- --list` and filters expect harness-style behaviour.
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    if let Some(filter) = args.iter().find(|a| !a.starts_with('-')) {
        if !"acceptance".contains(filter.as_str()) {
            return ExitCode::SUCCESS;
        }
    }

    let cells = grid_cells();
    let (table, compute_time): (Table, Duration) =
        timed(|| cells.iter().map(|d| (*d, sigma(d))).collect());

    let lines = vec![
        fixtures(),
        zero_surgery(),
        normalization(&table, compute_time),
        degree(&table),
        roots(&table),
        relation(),
        integrality(&table),
        chebyshev(),
        oracle(&table),
    ];
    for l in &lines {
        println!(
            "{} criterion {}: {} ({:.2}s) {}",
            if l.passed { "PASS" } else { "FAIL" },
            l.id,
            l.name,
            l.elapsed.as_secs_f64(),
            l.detail
        );
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        lines.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
