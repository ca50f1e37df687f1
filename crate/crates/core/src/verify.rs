//! Property suites run by `torsionpoly verify`.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;

use crate::fixtures::{check_fixture, FIXTURES};
use crate::oracle::{collect_roots, compare, reconstruct, root_correspondence};
use crate::scalar::{BigReal, Real};
use crate::torsion::{
    acyclic_pairs, degree_formula, enumerate_reps, normalization_value, relation_step, sigma,
    ParityCase, SurgeryDescriptor, TorsionError, TorsionPolynomial,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Suite {
    Normalization,
    Degree,
    Relation,
    Oracle,
    Fixtures,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Degree => "degree",
            Suite::Relation => "relation",
            Suite::Oracle => "oracle",
            Suite::Fixtures => "fixtures",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Normalization,
                Suite::Degree,
                Suite::Relation,
                Suite::Oracle,
                Suite::Fixtures,
            ],
            s => vec![s],
        }
    }
}

/// Coprime `2 ≤ p ≤ pmax`, `2 ≤ q ≤ qmax`, with `1 ≤ |n| ≤ nmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    pub pmax: u32,
    pub qmax: u32,
    pub nmax: i64,
}

impl Grid {
    pub const STANDARD: Grid = Grid {
        pmax: 7,
        qmax: 7,
        nmax: 2,
    };

    /// Parses `"pmax,qmax,nmax"`.
    pub fn parse(s: &str) -> Result<Grid, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let [p, q, n] = parts.as_slice() else {
            return Err(format!("grid must be \"pmax,qmax,nmax\", got {s:?}"));
        };
        let num = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| format!("bad grid bound {t:?}"))
        };
        let g = Grid {
            pmax: num(p)?,
            qmax: num(q)?,
            nmax: num(n)? as i64,
        };
        if g.pmax < 2 || g.qmax < 2 {
            return Err("grid bounds for p and q must be at least 2".into());
        }
        if g.pmax > 40 || g.qmax > 40 || g.nmax > 20 {
            return Err("grid too large (p, q ≤ 40 and n ≤ 20)".into());
        }
        Ok(g)
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for p in 2..=self.pmax {
            for q in 2..=self.qmax {
                if p.gcd(&q) == 1 {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

/// What a verification run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Grid(Grid),
    Pair { p: u32, q: u32, nmax: i64 },
}

impl Scope {
    pub fn pair(p: u32, q: u32) -> Result<Scope, TorsionError> {
        SurgeryDescriptor::new(p, q, 1)?;
        Ok(Scope::Pair { p, q, nmax: 2 })
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        match *self {
            Scope::Grid(g) => g.pairs(),
            Scope::Pair { p, q, .. } => vec![(p, q)],
        }
    }

    pub fn nmax(&self) -> i64 {
        match *self {
            Scope::Grid(g) => g.nmax,
            Scope::Pair { nmax, .. } => nmax,
        }
    }

    /// Every surgery descriptor with `n ≠ 0`, ordered by `(p, q, n)`.
    pub fn cells(&self) -> Vec<SurgeryDescriptor> {
        let nmax = self.nmax();
        self.pairs()
            .into_iter()
            .flat_map(|(p, q)| {
                (-nmax..=nmax)
                    .filter(|&n| n != 0)
                    .filter_map(move |n| SurgeryDescriptor::new(p, q, n).ok())
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub precision: u32,
    /// Tolerance for coefficient comparison against the oracle.
    pub rel_tol: f64,
    /// Tolerance for matching computed roots to `1/τ`.
    pub root_tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            precision: crate::DEFAULT_PRECISION,
            rel_tol: 1e-9,
            root_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub suite: Suite,
    pub subject: String,
    pub passed: bool,
    /// Failure came from a broken internal invariant rather than a mismatch.
    pub internal: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(
        suite: Suite,
        subject: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> Self {
        CheckOutcome {
            suite,
            subject: subject.into(),
            passed,
            internal: false,
            detail: detail.into(),
        }
    }

    fn error(suite: Suite, subject: impl Into<String>, e: &TorsionError) -> Self {
        CheckOutcome {
            suite,
            subject: subject.into(),
            passed: false,
            internal: e.is_internal(),
            detail: e.to_string(),
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{tag} {:<13} {:<10} {}",
            self.suite.name(),
            self.subject,
            self.detail
        )
    }
}

type SigmaTable = HashMap<SurgeryDescriptor, Result<TorsionPolynomial, TorsionError>>;

fn sigma_table(cells: &[SurgeryDescriptor]) -> SigmaTable {
    cells
        .par_iter()
        .map(|d| (*d, sigma(d)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn normalization_check(d: &SurgeryDescriptor, s: &TorsionPolynomial) -> CheckOutcome {
    let want = normalization_value(d);
    let got = s.constant_term();
    let passed = got == want.into();
    let note = if s.sign_corrected() {
        ", sign corrected"
    } else {
        ""
    };
    CheckOutcome::new(
        Suite::Normalization,
        d.to_string(),
        passed,
        format!("sigma(0) = {got}, expected {want}{note}"),
    )
}

/// Acyclic pairs per parity case: `(p/2)((q−1)/2)`, `((p−1)/2)(q/2)` or `((p−1)/2)((q−1)/2)`.
fn pair_count_formula(p: u32, q: u32) -> usize {
    let (p, q) = (p as usize, q as usize);
    if p % 2 == 0 {
        (p / 2) * ((q - 1) / 2)
    } else if q % 2 == 0 {
        ((p - 1) / 2) * (q / 2)
    } else {
        ((p - 1) / 2) * ((q - 1) / 2)
    }
}

fn degree_check(d: &SurgeryDescriptor, s: &TorsionPolynomial) -> CheckOutcome {
    let formula = degree_formula(d);
    let acyclic = match enumerate_reps(d) {
        Ok(reps) => reps.iter().filter(|r| r.acyclic).count(),
        Err(e) => return CheckOutcome::error(Suite::Degree, d.to_string(), &e),
    };
    let pairs = acyclic_pairs(d.p(), d.q()).len();
    let pair_formula = pair_count_formula(d.p(), d.q());
    let passed = s.degree() as u64 == formula && acyclic as u64 == formula && pairs == pair_formula;
    CheckOutcome::new(
        Suite::Degree,
        d.to_string(),
        passed,
        format!(
            "deg {} vs formula {formula}, {acyclic} acyclic classes, {pairs} pairs (expected {pair_formula})",
            s.degree()
        ),
    )
}

fn oracle_check(
    d: &SurgeryDescriptor,
    s: &TorsionPolynomial,
    opts: &VerifyOptions,
) -> CheckOutcome {
    let roots = match collect_roots::<BigReal>(d, opts.precision) {
        Ok(r) => r,
        Err(e) => return CheckOutcome::error(Suite::Oracle, d.to_string(), &e),
    };
    let approx = reconstruct(&roots, &s.leading_coefficient());
    let cmp = match compare(s.sigma(), &approx, opts.rel_tol) {
        Ok(c) => c,
        Err(e) => return CheckOutcome::new(Suite::Oracle, d.to_string(), false, e.to_string()),
    };
    let expected: Vec<f64> = roots.roots.iter().map(Real::to_f64).collect();
    let rc = root_correspondence(s.sigma(), &expected, opts.root_tol, 8);
    let mut detail = format!(
        "coefficients max rel err {:.2e}, roots {}/{} located, max rel err {:.2e}",
        cmp.max_error,
        rc.expected - rc.unresolved.len(),
        rc.degree,
        rc.max_rel_error
    );
    if !rc.unresolved.is_empty() {
        detail.push_str(&format!(", unresolved {:?}", rc.unresolved));
    }
    CheckOutcome::new(
        Suite::Oracle,
        d.to_string(),
        cmp.passed && rc.passed,
        detail,
    )
}

fn relation_checks(scope: &Scope) -> Vec<CheckOutcome> {
    let nmax = scope.nmax();
    let centers: Vec<SurgeryDescriptor> = scope
        .pairs()
        .into_iter()
        .flat_map(|(p, q)| (-nmax..=nmax).filter_map(move |n| SurgeryDescriptor::new(p, q, n).ok()))
        .collect();
    centers
        .par_iter()
        .map(|d| match crate::torsion::verify_three_term(d) {
            Ok(report) => {
                let step = relation_step(d.p(), d.q());
                let failed: Vec<String> = report
                    .checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| format!("({},{}) at t^{}", c.a, c.b, c.first_mismatch.unwrap_or(0)))
                    .collect();
                let detail = if failed.is_empty() {
                    format!(
                        "Y(n+{step}) = D Y(n) - Y(n-{step}) for {} pairs",
                        report.checks.len()
                    )
                } else {
                    format!("mismatch {}", failed.join(", "))
                };
                CheckOutcome::new(Suite::Relation, d.to_string(), report.passed(), detail)
            }
            Err(e) => CheckOutcome::error(Suite::Relation, d.to_string(), &e),
        })
        .collect()
}

fn fixture_checks(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let mut out: Vec<CheckOutcome> = FIXTURES
        .par_iter()
        .map(|fx| {
            let subject = fx.descriptor().to_string();
            match check_fixture(fx, opts.precision, opts.rel_tol) {
                Ok(r) => {
                    let mut detail = format!(
                        "{} of {} printed coefficients match 4^j sigma_j",
                        r.matched,
                        fx.printed.len()
                    );
                    for o in &r.deviations {
                        detail.push_str(&format!(
                            "; t^{} printed {:?} read as {} (oracle {:.6e}, {})",
                            o.deviation.degree,
                            o.deviation.token,
                            o.deviation.adopted,
                            o.oracle_value,
                            if o.upheld { "upheld" } else { "not upheld" }
                        ));
                    }
                    if !r.undocumented.is_empty() {
                        detail.push_str(&format!(
                            "; undocumented mismatches at {:?}",
                            r.undocumented
                        ));
                    }
                    if !r.oracle.passed {
                        detail
                            .push_str(&format!("; oracle max rel err {:.2e}", r.oracle.max_error));
                    }
                    CheckOutcome::new(Suite::Fixtures, subject, r.passed, detail)
                }
                Err(e) => CheckOutcome::error(Suite::Fixtures, subject, &e),
            }
        })
        .collect();
    for (p, q) in [(4, 3), (3, 5)] {
        let d = SurgeryDescriptor::new(p, q, 0).expect("valid");
        out.push(match sigma(&d) {
            Ok(s) => {
                let one = *s.sigma() == crate::polyalg::Poly::one();
                CheckOutcome::new(
                    Suite::Fixtures,
                    d.to_string(),
                    one,
                    format!("sigma = {}", s.sigma()),
                )
            }
            Err(e) => CheckOutcome::error(Suite::Fixtures, d.to_string(), &e),
        });
    }
    out
}

/// Run one suite (or all of them) over `scope`. The fixture suite ignores the scope.
pub fn run(suite: Suite, scope: &Scope, opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let suites = suite.expand();
    let needs_sigma = suites
        .iter()
        .any(|s| matches!(s, Suite::Normalization | Suite::Degree | Suite::Oracle));
    let cells = scope.cells();
    let table = if needs_sigma {
        sigma_table(&cells)
    } else {
        SigmaTable::new()
    };

    let mut out = Vec::new();
    for s in suites {
        match s {
            Suite::Normalization | Suite::Degree | Suite::Oracle => {
                let batch: Vec<CheckOutcome> = cells
                    .par_iter()
                    .map(|d| match &table[d] {
                        Ok(tp) => match s {
                            Suite::Normalization => normalization_check(d, tp),
                            Suite::Degree => degree_check(d, tp),
                            _ => oracle_check(d, tp, opts),
                        },
                        Err(e) => CheckOutcome::error(s, d.to_string(), e),
                    })
                    .collect();
                out.extend(batch);
            }
            Suite::Relation => out.extend(relation_checks(scope)),
            Suite::Fixtures => out.extend(fixture_checks(opts)),
            Suite::All => unreachable!("expanded above"),
        }
    }
    out
}

/// The parity case label used in reports.
pub fn parity_label(case: ParityCase) -> &'static str {
    match case {
        ParityCase::PEvenQOdd => "p even",
        ParityCase::POddQEven => "q even",
        ParityCase::BothOddNOdd => "p, q, n odd",
        ParityCase::BothOddNEven => "p, q odd, n even",
        ParityCase::NZero => "n = 0",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(Grid::parse("7,7,2"), Ok(Grid::STANDARD));
        assert_eq!(
            Grid::parse(" 5, 4 ,1"),
            Ok(Grid {
                pmax: 5,
                qmax: 4,
                nmax: 1
            })
        );
        assert!(Grid::parse("7,7").is_err());
        assert!(Grid::parse("1,7,2").is_err());
        assert!(Grid::parse("a,7,2").is_err());
        assert!(Grid::parse("7,7,-2").is_err());
    }

    #[test]
    fn standard_grid_cells() {
        let pairs = Grid::STANDARD.pairs();
        assert_eq!(pairs.len(), 22);
        assert!(pairs.contains(&(2, 3)) && !pairs.contains(&(4, 6)));
        assert_eq!(Scope::Grid(Grid::STANDARD).cells().len(), 22 * 4);
    }

    #[test]
    fn pair_counts() {
        assert_eq!(pair_count_formula(4, 3), 2);
        assert_eq!(pair_count_formula(3, 4), 2);
        assert_eq!(pair_count_formula(3, 5), 2);
        for (p, q) in Grid::STANDARD.pairs() {
            assert_eq!(
                acyclic_pairs(p, q).len(),
                pair_count_formula(p, q),
                "({p},{q})"
            );
        }
    }

    #[test]
    fn small_scope_all_suites_pass() {
        let scope = Scope::Grid(Grid {
            pmax: 4,
            qmax: 3,
            nmax: 1,
        });
        let out = run(Suite::All, &scope, &VerifyOptions::default());
        assert!(out.iter().all(|c| c.passed), "{out:#?}");
        let suites: Vec<Suite> = out.iter().map(|c| c.suite).collect();
        for s in [
            Suite::Normalization,
            Suite::Degree,
            Suite::Relation,
            Suite::Oracle,
            Suite::Fixtures,
        ] {
            assert!(suites.contains(&s));
        }
    }

    #[test]
    fn pair_scope_relation_default_range() {
        let out = run(
            Suite::Relation,
            &Scope::pair(3, 5).unwrap(),
            &VerifyOptions::default(),
        );
        assert_eq!(out.len(), 5);
        assert!(out.iter().all(|c| c.passed));
        assert!(Scope::pair(4, 6).is_err());
    }

    #[test]
    fn parity_labels_cover_cases() {
        assert_eq!(
            parity_label(SurgeryDescriptor::new(4, 3, 1).unwrap().parity()),
            "p even"
        );
    }
}
