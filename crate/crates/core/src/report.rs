//! Serializable reports: single scheme runs, the success-probability table,
//! zero-transmission listings and permanent timings.
//!
//! CSV numbers are written with 17 significant digits so every double
//! survives a round trip.

use std::fmt::Write as _;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolve::{full_distribution, ghz_fidelity, SUPPRESSION_TOL};
use crate::fock::{OutputPattern, PhotonFactor};
use crate::numeric::{build_dft, ComplexMatrix};
use crate::permanent::{perm_ryser, LabelUnitaries, RYSER_MAX_DIM};
use crate::schemes::{
    closed_form, make_scheme, odd_phase_input, ztl_allowed, ClosedForm, SchemeInstance, SchemeKind,
};

/// Largest `n` accepted by [`probability_table`].
pub const TABLE_MAX_N: usize = 12;
/// Largest `n` for which [`suppression_listing`] certifies numerically.
pub const SUPPRESSION_MAX_N: usize = 7;

/// `{:.16e}`: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub kind: SchemeKind,
    pub n: usize,
    /// Detection mode of the single-mode scheme (one-based).
    pub mode: usize,
    pub allow_special_n4: bool,
    /// Probability below which the coincidence counts as suppressed.
    pub tol: f64,
}

impl RunOptions {
    pub fn new(kind: SchemeKind, n: usize) -> Self {
        Self {
            kind,
            n,
            mode: 1,
            allow_special_n4: false,
            tol: SUPPRESSION_TOL,
        }
    }
}

/// Builds the scheme a run asks for.
///
/// The odd-scheme input is accepted at even `n` in two cases: `n = 2 mod 4`,
/// where every coincidence is suppressed and the run documents that, and
/// `n = 4` behind `allow_special_n4`.
pub fn scheme_for(opts: &RunOptions) -> Result<SchemeInstance> {
    if opts.kind == SchemeKind::OddN && opts.n.is_multiple_of(2) {
        return match opts.n % 4 {
            2 => odd_phase_input(opts.n),
            _ if opts.n == 4 && opts.allow_special_n4 => odd_phase_input(4),
            _ if opts.n == 4 => Err(Error::InvalidScheme(
                "odd scheme at n = 4 needs --allow-special-n4".into(),
            )),
            _ => Err(Error::InvalidScheme(format!(
                "odd scheme needs odd n (or n = 4 with --allow-special-n4), got {}",
                opts.n
            ))),
        };
    }
    make_scheme(opts.kind, opts.n, opts.mode)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub assignment: String,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scheme: SchemeKind,
    pub n: usize,
    pub pattern: OutputPattern,
    pub success_probability: f64,
    pub amplitudes: Vec<AmplitudeEntry>,
    pub ghz_fidelity: f64,
    pub relative_phase: f64,
    pub closed_form_reference: Option<f64>,
    pub warnings: Vec<String>,
    pub elapsed_ms: u64,
}

impl RunReport {
    /// `sum re^2 + im^2` over the listed amplitudes.
    pub fn probability_from_amplitudes(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.re * a.re + a.im * a.im)
            .sum()
    }

    pub const CSV_HEADER: &'static str = "scheme,n,assignment,re,im,success_probability,ghz_fidelity,relative_phase,closed_form_reference";

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        let reference = self.closed_form_reference.map(fmt_f64).unwrap_or_default();
        for a in &self.amplitudes {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.scheme,
                self.n,
                a.assignment,
                fmt_f64(a.re),
                fmt_f64(a.im),
                fmt_f64(self.success_probability),
                fmt_f64(self.ghz_fidelity),
                fmt_f64(self.relative_phase),
                reference
            );
        }
        out
    }
}

/// Constructor, post-selection and GHZ fidelity for one scheme.
pub fn run(opts: &RunOptions) -> Result<RunReport> {
    let start = Instant::now();
    let scheme = scheme_for(opts)?;
    let state = scheme.postselect()?;
    let fid = ghz_fidelity(&state)?;
    let mut warnings = Vec::new();
    if state.probability() < opts.tol {
        warnings.push(format!(
            "suppressed: coincidence probability {:e} below {:e}",
            state.probability(),
            opts.tol
        ));
    } else if fid.fidelity < 1.0 - opts.tol {
        warnings.push(format!("not a GHZ state: fidelity {:.12}", fid.fidelity));
    }
    let amplitudes = state
        .amplitudes()
        .iter()
        .map(|(a, z)| AmplitudeEntry {
            assignment: a.to_string(),
            re: z.re,
            im: z.im,
        })
        .collect();
    Ok(RunReport {
        scheme: scheme.kind,
        n: scheme.n,
        pattern: state.pattern().clone(),
        success_probability: state.probability(),
        amplitudes,
        ghz_fidelity: fid.fidelity,
        relative_phase: fid.relative_phase,
        closed_form_reference: scheme.closed_form_reference(),
        warnings,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// One row of the success-probability comparison: the simulated coincidence
/// probability of `scheme` at `n` next to every closed form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub scheme: SchemeKind,
    pub n: usize,
    pub simulated: Option<f64>,
    pub p_2n: f64,
    pub p_pbs: Option<f64>,
    pub p_tilde_odd: f64,
    pub p_tilde_even: f64,
    pub p_single_mode: f64,
}

pub const TABLE_CSV_HEADER: &str =
    "scheme,n,simulated,P_2N,P_PBS,P_TILDE_ODD,P_TILDE_EVEN,P_SINGLE_MODE";

fn table_scheme(kind: SchemeKind, n: usize) -> Option<Result<SchemeInstance>> {
    match kind {
        SchemeKind::OddN => Some(odd_phase_input(n)),
        SchemeKind::EvenN if n % 2 == 1 => None,
        SchemeKind::PbsCascade if n < 2 => None,
        _ => Some(make_scheme(kind, n, 1)),
    }
}

/// Rows for every scheme at `n = 1..=n_max`, ordered by `n` then scheme.
/// The odd-scheme input is simulated at every `n`, so even `n` rows show its
/// suppression.
pub fn probability_table(n_max: usize) -> Result<Vec<TableRow>> {
    if n_max > TABLE_MAX_N {
        return Err(Error::TooManyPhotons {
            photons: n_max,
            limit: TABLE_MAX_N,
        });
    }
    let jobs: Vec<(usize, SchemeKind)> = (1..=n_max)
        .flat_map(|n| SchemeKind::ALL.into_iter().map(move |k| (n, k)))
        .collect();
    jobs.into_par_iter()
        .map(|(n, kind)| {
            let simulated = match table_scheme(kind, n) {
                Some(s) => Some(s?.postselect()?.probability()),
                None => None,
            };
            Ok(TableRow {
                scheme: kind,
                n,
                simulated,
                p_2n: closed_form(ClosedForm::P2N, n)?,
                p_pbs: closed_form(ClosedForm::Pbs, n).ok(),
                p_tilde_odd: closed_form(ClosedForm::TildeOdd, n)?,
                p_tilde_even: closed_form(ClosedForm::TildeEven, n)?,
                p_single_mode: closed_form(ClosedForm::SingleMode, n)?,
            })
        })
        .collect()
}

pub fn table_to_csv(rows: &[TableRow]) -> String {
    let mut out = String::from(TABLE_CSV_HEADER);
    out.push('\n');
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            r.n,
            opt(r.simulated),
            fmt_f64(r.p_2n),
            opt(r.p_pbs),
            fmt_f64(r.p_tilde_odd),
            fmt_f64(r.p_tilde_even),
            fmt_f64(r.p_single_mode)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionRow {
    pub pattern: OutputPattern,
    pub ztl_allowed: bool,
    pub probability: f64,
    /// Law and numerics agree: allowed iff probability above the tolerance.
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuppressionReport {
    pub n: usize,
    pub tol: f64,
    pub rows: Vec<SuppressionRow>,
}

impl SuppressionReport {
    pub fn allowed_count(&self) -> usize {
        self.rows.iter().filter(|r| r.ztl_allowed).count()
    }

    /// Patterns the law forbids that still occur.
    pub fn violations(&self) -> Vec<&SuppressionRow> {
        self.rows
            .iter()
            .filter(|r| !r.ztl_allowed && r.probability >= self.tol)
            .collect()
    }

    /// Patterns the law allows that nonetheless vanish.
    pub fn extra_zeros(&self) -> Vec<&SuppressionRow> {
        self.rows
            .iter()
            .filter(|r| r.ztl_allowed && r.probability < self.tol)
            .collect()
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.consistent).count()
    }

    pub const CSV_HEADER: &'static str = "pattern,ztl_allowed,probability,consistent";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let counts: Vec<String> = r.pattern.counts().iter().map(|c| c.to_string()).collect();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                counts.join(" "),
                r.ztl_allowed,
                fmt_f64(r.probability),
                r.consistent
            );
        }
        out
    }
}

/// Every output pattern of `n` indistinguishable photons (one per input) in
/// the `n`-port DFT, with the law's verdict and the computed probability.
pub fn suppression_listing(n: usize, tol: f64) -> Result<SuppressionReport> {
    suppression_listing_with(n, tol, &build_dft(n.max(1))?)
}

/// As [`suppression_listing`], on an arbitrary `n`-mode network.
pub fn suppression_listing_with(
    n: usize,
    tol: f64,
    network: &ComplexMatrix,
) -> Result<SuppressionReport> {
    if n == 0 || n > SUPPRESSION_MAX_N {
        return Err(Error::TooManyPhotons {
            photons: n,
            limit: SUPPRESSION_MAX_N,
        });
    }
    let photons = (1..=n).map(PhotonFactor::mu).collect::<Result<Vec<_>>>()?;
    let unitaries = LabelUnitaries::shared(network.clone());
    let dist = full_distribution(&photons, &unitaries, Complex64::new(1.0, 0.0))?;
    let rows = dist
        .into_iter()
        .map(|(pattern, probability)| {
            let allowed = ztl_allowed(&pattern, n);
            SuppressionRow {
                consistent: allowed == (probability >= tol),
                ztl_allowed: allowed,
                probability,
                pattern,
            }
        })
        .collect();
    Ok(SuppressionReport { n, tol, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub dim: usize,
    pub repeats: usize,
    pub mean_ns: f64,
    pub perm_re: f64,
    pub perm_im: f64,
}

pub const BENCH_CSV_HEADER: &str = "dim,repeats,mean_ns,perm_re,perm_im";

/// Deterministic random matrix with entries uniform in `[-1, 1] + i[-1, 1]`.
pub fn random_matrix(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let entries = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(dim, entries).expect("finite entries")
}

/// Times [`perm_ryser`] on one seeded random matrix per dimension, repeating
/// small cases until roughly `budget_ns` has been spent.
pub fn bench_permanents(dims: &[usize], budget_ns: u64) -> Result<Vec<BenchRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        if dim == 0 || dim > RYSER_MAX_DIM {
            return Err(Error::PermanentTooLarge {
                dim,
                limit: RYSER_MAX_DIM,
            });
        }
        let m = random_matrix(dim, &mut rng);
        let start = Instant::now();
        let mut value = perm_ryser(&m)?;
        let mut repeats = 1;
        while (start.elapsed().as_nanos() as u64) < budget_ns && repeats < 1_000_000 {
            value = perm_ryser(&m)?;
            repeats += 1;
        }
        let mean_ns = start.elapsed().as_nanos() as f64 / repeats as f64;
        rows.push(BenchRow {
            dim,
            repeats,
            mean_ns,
            perm_re: value.re,
            perm_im: value.im,
        });
    }
    Ok(rows)
}

pub fn bench_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(BENCH_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.1},{},{}",
            r.dim,
            r.repeats,
            r.mean_ns,
            fmt_f64(r.perm_re),
            fmt_f64(r.perm_im)
        );
    }
    out
}

/// Least-squares slope of `ln(mean_ns)` against `dim`.
pub fn log_time_slope(rows: &[BenchRow]) -> f64 {
    let n = rows.len() as f64;
    let xs: Vec<f64> = rows.iter().map(|r| r.dim as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_ns.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
