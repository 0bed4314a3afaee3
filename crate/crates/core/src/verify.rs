//! Numerical verification suite: every acceptance criterion as a function
//! returning a pass/fail outcome with timing.
//!
//! The harness can perturb the DFT it hands to the DFT-based checks, which
//! gives a negative control: a tampered splitter must make the suite fail.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::evolve::{ghz_fidelity, postselect, PostselectedState};
use crate::fock::{InternalAssignment, InternalLabel, OutputPattern, PhotonFactor};
use crate::numeric::{build_dft, ComplexMatrix};
use crate::permanent::{perm_naive, perm_ryser, transition_amplitude, LabelUnitaries};
use crate::report::{random_matrix, suppression_listing_with};
use crate::schemes::{
    closed_form, make_2n_scheme, make_even_scheme, make_pbs_cascade, make_single_mode_scheme,
    odd_phase_input, ClosedForm, SchemeInstance, SchemeKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Stated sizes, except the largest even-scheme and suppression cases.
    Quick,
    /// Every size the criteria name, up to `N = 12`.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: f64,
    pub budget_ms: f64,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {:<34} {:>10.3} ms (budget {:.0} ms)  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.budget_ms,
            self.detail
        )
    }
}

/// Collects failures inside one criterion.
#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn require(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

pub struct Harness {
    pub level: Level,
    /// Phase (radians) added to DFT entry `(1, 1)` for negative-control runs.
    pub dft_tamper: Option<f64>,
}

impl Harness {
    pub fn new(level: Level) -> Self {
        Self {
            level,
            dft_tamper: None,
        }
    }

    pub fn tampered(level: Level, phase: f64) -> Self {
        Self {
            level,
            dft_tamper: Some(phase),
        }
    }

    pub fn dft(&self, n: usize) -> Result<ComplexMatrix> {
        let mut m = build_dft(n)?;
        if let Some(phase) = self.dft_tamper {
            if n >= 2 {
                m[(1, 1)] *= Complex64::from_polar(1.0, phase);
            }
        }
        Ok(m)
    }

    /// Routes a DFT-based scheme through [`Harness::dft`].
    fn prepare(&self, s: SchemeInstance) -> Result<SchemeInstance> {
        match s.kind {
            SchemeKind::TwoNPort | SchemeKind::PbsCascade => Ok(s),
            _ if self.dft_tamper.is_none() => Ok(s),
            _ => {
                let u = LabelUnitaries::shared(self.dft(s.n)?);
                Ok(s.with_unitaries(u))
            }
        }
    }

    fn odd(&self, n: usize) -> Result<SchemeInstance> {
        self.prepare(odd_phase_input(n)?)
    }

    fn even(&self, n: usize) -> Result<SchemeInstance> {
        self.prepare(make_even_scheme(n)?)
    }

    fn single_mode_at(&self, n: usize, l: usize) -> Result<SchemeInstance> {
        self.prepare(make_single_mode_scheme(n, l)?)
    }

    fn all_schemes(&self, n: usize) -> Result<Vec<SchemeInstance>> {
        let mut v = vec![self.odd(n)?];
        if n.is_multiple_of(2) {
            v.push(self.even(n)?);
        }
        v.push(make_2n_scheme(n)?);
        v.push(self.single_mode_at(n, 1)?);
        if n >= 2 {
            v.push(make_pbs_cascade(n)?);
        }
        Ok(v)
    }

    fn run_one(
        &self,
        id: u32,
        name: &str,
        budget: Duration,
        body: impl FnOnce(&mut Checks) -> Result<()>,
    ) -> CriterionOutcome {
        let mut checks = Checks::default();
        let start = Instant::now();
        let res = body(&mut checks);
        let elapsed = start.elapsed();
        if let Err(e) = res {
            checks.failures.push(format!("error: {e}"));
        }
        if elapsed > budget {
            checks
                .failures
                .push(format!("runtime {elapsed:?} over budget {budget:?}"));
        }
        let passed = checks.failures.is_empty();
        let detail = if passed {
            checks.notes.join("; ")
        } else {
            checks.failures.join("; ")
        };
        CriterionOutcome {
            id,
            name: name.to_string(),
            passed,
            detail,
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
            budget_ms: budget.as_secs_f64() * 1e3,
        }
    }

    /// Every criterion, in order.
    pub fn run_all(&self) -> Vec<CriterionOutcome> {
        (1..=10).map(|id| self.criterion(id)).collect()
    }

    pub fn criterion(&self, id: u32) -> CriterionOutcome {
        match id {
            1 => self.hom_zero(),
            2 => self.ztl_certification(),
            3 => self.two_n_port(),
            4 => self.odd_scheme(),
            5 => self.odd_input_even_n(),
            6 => self.even_scheme(),
            7 => self.single_mode(),
            8 => self.pbs_cascade(),
            9 => self.kernel_oracle(),
            10 => self.normalization(),
            _ => panic!("no criterion {id}"),
        }
    }

    pub fn hom_zero(&self) -> CriterionOutcome {
        self.run_one(1, "HOM zero", Duration::from_millis(1), |c| {
            let u = LabelUnitaries::shared(self.dft(2)?);
            let photons = [PhotonFactor::mu(1)?, PhotonFactor::mu(2)?];
            let coinc = OutputPattern::all_ones(2);
            let p: f64 = [InternalLabel::Mu, InternalLabel::Eta]
                .iter()
                .map(|&l| {
                    let a = InternalAssignment::uniform(&coinc, l);
                    transition_amplitude(&photons, &u, &coinc, &a, Complex64::new(1.0, 0.0))
                        .map(|z| z.norm_sqr())
                })
                .sum::<Result<f64>>()?;
            c.require(p < 1e-12, || format!("P(1,1) = {p:e}"));
            c.note(format!("P(1,1) = {p:.1e}"));
            Ok(())
        })
    }

    pub fn ztl_certification(&self) -> CriterionOutcome {
        self.run_one(2, "ZTL certification", Duration::from_secs(30), |c| {
            for n in 3..=7 {
                let rep = suppression_listing_with(n, 1e-10, &self.dft(n)?)?;
                let violations = rep.violations();
                c.require(violations.is_empty(), || {
                    format!("n={n}: {} forbidden patterns occur", violations.len())
                });
                let extra = rep.extra_zeros();
                c.require(extra.is_empty(), || {
                    format!(
                        "n={n}: {} allowed patterns vanish, e.g. {}",
                        extra.len(),
                        extra[0].pattern
                    )
                });
            }
            c.note("law and numerics agree for n=3..7");
            Ok(())
        })
    }

    pub fn two_n_port(&self) -> CriterionOutcome {
        self.run_one(3, "2N-port closed form", Duration::from_secs(120), |c| {
            for n in 2..=6 {
                let s = make_2n_scheme(n)?.postselect()?;
                let want = closed_form(ClosedForm::P2N, n)?;
                let rel = (s.probability() - want).abs() / want;
                c.require(rel < 1e-8, || format!("n={n}: rel err {rel:e}"));
                let g = ghz_fidelity(&s)?;
                c.require(g.fidelity > 1.0 - 1e-10, || {
                    format!("n={n}: fidelity {}", g.fidelity)
                });
                let expected_phase = if n % 2 == 1 { 0.0 } else { PI };
                let dphi = phase_distance(g.relative_phase, expected_phase);
                c.require(dphi < 1e-8, || {
                    format!("n={n}: phase {} vs {expected_phase}", g.relative_phase)
                });
            }
            c.note("n=2..6 match (N!)^2/(2^(N-1) N^(2N))");
            Ok(())
        })
    }

    pub fn odd_scheme(&self) -> CriterionOutcome {
        self.run_one(4, "odd-N scheme", Duration::from_secs(60), |c| {
            for n in [3, 5, 7] {
                let scheme = self.odd(n)?;
                let s = scheme.postselect()?;
                check_two_point_ghz(c, n, &s)?;
                let oracle = scheme.brute_force()?;
                let p_oracle = oracle.pattern_probability(&scheme.target);
                c.require((s.probability() - p_oracle).abs() < 1e-10, || {
                    format!("n={n}: P {} vs oracle {p_oracle}", s.probability())
                });
                if n == 3 {
                    c.require((s.probability() - 1.0 / 12.0).abs() < 1e-10, || {
                        format!("n=3: P {} vs 1/12", s.probability())
                    });
                }
                c.note(format!("n={n} P={:.6e}", s.probability()));
            }
            Ok(())
        })
    }

    pub fn odd_input_even_n(&self) -> CriterionOutcome {
        self.run_one(
            5,
            "even-N suppression (odd input)",
            Duration::from_secs(120),
            |c| {
                let sizes: &[usize] = match self.level {
                    Level::Quick => &[6],
                    Level::Full => &[6, 10],
                };
                for &n in sizes {
                    let p = self.odd(n)?.postselect()?.probability();
                    c.require(p < 1e-10, || format!("n={n}: P = {p:e}"));
                }
                let s = self.odd(4)?.postselect()?;
                let survivors = survivors(&s);
                c.require(survivors == BTreeSet::from([1, 3]), || {
                    format!("n=4 survivors {survivors:?}")
                });
                c.require((s.probability() - 0.125).abs() < 1e-10, || {
                    format!("n=4: P {} vs 1/8", s.probability())
                });
                c.note(format!("n={sizes:?} suppressed; n=4 N2 in {{1,3}}, P=1/8"));
                Ok(())
            },
        )
    }

    pub fn even_scheme(&self) -> CriterionOutcome {
        self.run_one(6, "even-N scheme", Duration::from_secs(300), |c| {
            let p2 = self.even(2)?.postselect()?.probability();
            c.require((p2 - 0.5).abs() < 1e-12, || format!("n=2: P {p2}"));
            for n in [4, 6] {
                let scheme = self.even(n)?;
                let s = scheme.postselect()?;
                let g = ghz_fidelity(&s)?;
                c.require(g.fidelity > 1.0 - 1e-10, || {
                    format!("n={n}: fidelity {}", g.fidelity)
                });
                let p_oracle = scheme.brute_force()?.pattern_probability(&scheme.target);
                c.require((s.probability() - p_oracle).abs() < 1e-10, || {
                    format!("n={n}: P {} vs oracle {p_oracle}", s.probability())
                });
            }
            let top = match self.level {
                Level::Quick => 10,
                Level::Full => 12,
            };
            for n in (8..=top).step_by(2) {
                let scheme = self.even(n)?;
                let first = scheme.postselect()?;
                let second = scheme.postselect()?;
                let identical =
                    first
                        .amplitudes()
                        .iter()
                        .zip(second.amplitudes())
                        .all(|((a, x), (b, y))| {
                            a == b
                                && x.re.to_bits() == y.re.to_bits()
                                && x.im.to_bits() == y.im.to_bits()
                        });
                c.require(identical, || format!("n={n}: repeated runs differ"));
                let found = survivors(&first);
                c.require(found == BTreeSet::from([0, n]), || {
                    format!("n={n}: survivors {found:?}")
                });
                c.note(format!("n={n} P={:.6e}", first.probability()));
            }
            Ok(())
        })
    }

    pub fn single_mode(&self) -> CriterionOutcome {
        self.run_one(7, "single-mode GHZ", Duration::from_secs(60), |c| {
            for n in 2..=7 {
                let want = closed_form(ClosedForm::SingleMode, n)?;
                let p1 = self.single_mode_at(n, 1)?.postselect()?.probability();
                let rel = (p1 - want).abs() / want;
                c.require(rel < 1e-8, || format!("n={n}: rel err {rel:e}"));
                for l in 2..=n {
                    let p = self.single_mode_at(n, l)?.postselect()?.probability();
                    c.require((p - p1).abs() < 1e-12, || {
                        format!("n={n}: mode {l} gives {p} vs {p1}")
                    });
                }
            }
            c.note("n=2..7 match N!/(2^(N-1) N^N), detector-independent");
            Ok(())
        })
    }

    pub fn pbs_cascade(&self) -> CriterionOutcome {
        self.run_one(8, "PBS cascade", Duration::from_secs(30), |c| {
            for n in 2..=6 {
                let s = make_pbs_cascade(n)?.postselect()?;
                let want = closed_form(ClosedForm::Pbs, n)?;
                c.require((s.probability() - want).abs() < 1e-10, || {
                    format!("n={n}: P {} vs {want}", s.probability())
                });
                let g = ghz_fidelity(&s)?;
                c.require(g.fidelity > 1.0 - 1e-10, || {
                    format!("n={n}: fidelity {}", g.fidelity)
                });
            }
            c.note("n=2..6 match 1/2^(N-1)");
            Ok(())
        })
    }

    pub fn kernel_oracle(&self) -> CriterionOutcome {
        self.run_one(
            9,
            "Ryser vs naive permanent",
            Duration::from_secs(30),
            |c| {
                let mut rng = ChaCha8Rng::seed_from_u64(9);
                let mut worst: f64 = 0.0;
                for dim in 1..=8 {
                    for _ in 0..1000 {
                        let m = random_matrix(dim, &mut rng);
                        let fast = perm_ryser(&m)?;
                        let slow = perm_naive(&m)?;
                        let rel = (fast - slow).norm() / slow.norm();
                        worst = worst.max(rel);
                    }
                }
                c.require(worst < 1e-10, || format!("worst rel err {worst:e}"));
                c.note(format!("8000 matrices, worst rel err {worst:.1e}"));
                Ok(())
            },
        )
    }

    pub fn normalization(&self) -> CriterionOutcome {
        self.run_one(10, "global normalization", Duration::from_secs(60), |c| {
            let mut worst: f64 = 0.0;
            for n in 1..=6 {
                for s in self.all_schemes(n)? {
                    let total: f64 = s.full_distribution()?.iter().map(|(_, p)| p).sum();
                    let err = (total - 1.0).abs();
                    worst = worst.max(err);
                    c.require(err < 1e-10, || format!("{} n={n}: sum {total}", s.kind));
                }
            }
            c.note(format!("all schemes n<=6, worst |sum-1| {worst:.1e}"));
            Ok(())
        })
    }
}

fn phase_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn survivors(s: &PostselectedState) -> BTreeSet<usize> {
    s.weight_by_eta_count()
        .iter()
        .enumerate()
        .filter(|(_, w)| **w > 1e-10)
        .map(|(k, _)| k)
        .collect()
}

fn check_two_point_ghz(c: &mut Checks, n: usize, s: &PostselectedState) -> Result<()> {
    let pattern = s.pattern();
    let mu = InternalAssignment::uniform(pattern, InternalLabel::Mu);
    let eta = InternalAssignment::uniform(pattern, InternalLabel::Eta);
    for (a, z) in s.amplitudes() {
        if *a != mu && *a != eta {
            c.require(z.norm_sqr() < 1e-10, || {
                format!("n={n}: {a} carries {:e}", z.norm_sqr())
            });
        }
    }
    let (x, y) = (s.amplitude(&mu).norm(), s.amplitude(&eta).norm());
    c.require((x - y).abs() < 1e-10, || format!("n={n}: |a|={x} |b|={y}"));
    let g = ghz_fidelity(s)?;
    c.require(g.fidelity > 1.0 - 1e-10, || {
        format!("n={n}: fidelity {}", g.fidelity)
    });
    Ok(())
}

/// Runs the coincidence post-selection on the odd-scheme input for `n`
/// photons through an arbitrary network. Used by the negative controls.
pub fn odd_input_through(network: &ComplexMatrix) -> Result<PostselectedState> {
    let s = odd_phase_input(network.dim())?;
    postselect(
        &s.factors,
        &LabelUnitaries::shared(network.clone()),
        &s.target,
        s.prefactor,
    )
}
