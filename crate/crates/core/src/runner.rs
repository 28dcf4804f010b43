//! Job configuration, radius scans, reference comparison and CSV output.
//!
//! A job file is INI-style:
//!
//! ```ini
//! [system]
//! Z = 2
//! N = 2
//! term = 1s2_1S
//!
//! [grid]
//! n_r = 300
//! L = 1
//!
//! [run]
//! mode = x_only, xc_wigner
//! rc = 0.5, 1, 2, 5, inf
//! reference = bundled
//! ```
//!
//! `rc = inf` stands for the free atom and is mapped to a 40 bohr cavity.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::config::Term;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, FREE_ATOM_RADIUS};
use crate::observables::{
    density_distribution, format_radius, moments_csv, orbital_distribution, potential_profiles, profiles_csv, resample, MomentRow, MomentSet,
    Normalization, RadialProfile, PLOT_POINTS,
};
use crate::scf::{term_energy, EnergyComponents, Mode, ScfOptions, SingletScheme, TermEnergy};

/// Exit status of a job: everything passed.
pub const EXIT_OK: i32 = 0;
/// A runtime error occurred or a scan point failed.
pub const EXIT_RUNTIME: i32 = 1;
/// Every point ran but at least one missed its reference tolerance.
pub const EXIT_TOLERANCE: i32 = 2;

const ELEMENTS: [&str; 18] = ["H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar"];

/// Conventional label such as `He`, `Li+` or `Be2+`.
pub fn system_name(z: u32, n_elec: usize) -> String {
    let symbol = ELEMENTS.get(z as usize - 1).map(|s| s.to_string()).unwrap_or_else(|| format!("Z{z}"));
    let charge = z as i64 - n_elec as i64;
    match charge {
        0 => symbol,
        1 => format!("{symbol}+"),
        -1 => format!("{symbol}-"),
        c if c > 0 => format!("{symbol}{c}+"),
        c => format!("{symbol}{}-", -c),
    }
}

/// Parse a radius; `inf` maps to [`FREE_ATOM_RADIUS`].
pub fn parse_radius(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("inf") || s == "∞" {
        return Some(FREE_ATOM_RADIUS);
    }
    s.parse::<f64>().ok().filter(|r| *r > 0.0 && r.is_finite())
}

/// Where reference energies come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSource {
    /// The tables shipped with the crate.
    Bundled,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub system: String,
    pub z: u32,
    pub n_elec: usize,
    pub term: Term,
    pub modes: Vec<Mode>,
    pub n_r: usize,
    pub map_length: f64,
    pub radii: Vec<f64>,
    pub out: Option<PathBuf>,
    pub reference: Option<ReferenceSource>,
    /// Overrides the per-row reference tolerances.
    pub tolerance: Option<f64>,
    pub options: ScfOptions,
}

impl JobConfig {
    pub fn grid_spec(&self, r_c: f64) -> GridSpec {
        GridSpec { n_r: self.n_r, map_length: self.map_length, r_c }
    }

    /// `(mode, r_c)` pairs in output order.
    pub fn points(&self) -> Vec<(Mode, f64)> {
        self.modes.iter().flat_map(|&m| self.radii.iter().map(move |&r| (m, r))).collect()
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

/// Parse a job file. Relative paths are kept as written.
pub fn parse_config(text: &str) -> Result<JobConfig> {
    let mut section = String::new();
    let mut z: Option<(u32, usize)> = None;
    let mut n: Option<(usize, usize)> = None;
    let mut name: Option<String> = None;
    let mut term: Option<(String, usize)> = None;
    let mut modes = vec![Mode::XOnly];
    let mut n_r = 300;
    let mut map_length = 1.0;
    let mut radii: Option<Vec<f64>> = None;
    let mut out = None;
    let mut reference = None;
    let mut tolerance = None;
    let mut options = ScfOptions::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let sec = rest.strip_suffix(']').ok_or_else(|| config_err(line_no, format!("malformed section header '{line}'")))?;
            section = sec.trim().to_ascii_lowercase();
            if !matches!(section.as_str(), "system" | "grid" | "run") {
                return Err(config_err(line_no, format!("unknown section [{sec}]")));
            }
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| config_err(line_no, format!("expected key = value, found '{line}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| config_err(line_no, format!("invalid {what} '{value}' for key '{key}'"));
        match (section.as_str(), key.to_ascii_lowercase().as_str()) {
            ("system", "z") => z = Some((value.parse().ok().filter(|z| (1..=118).contains(z)).ok_or_else(|| bad("nuclear charge"))?, line_no)),
            ("system", "n") => n = Some((value.parse().ok().filter(|n| *n > 0).ok_or_else(|| bad("electron count"))?, line_no)),
            ("system", "name") => name = Some(value.to_string()),
            ("system", "term") => term = Some((value.to_string(), line_no)),
            ("grid", "n_r") => n_r = value.parse().map_err(|_| bad("point count"))?,
            ("grid", "l") => map_length = value.parse().ok().filter(|l: &f64| *l > 0.0).ok_or_else(|| bad("map length"))?,
            ("run", "mode") => {
                modes = value
                    .split(',')
                    .map(|m| m.trim().parse::<Mode>().map_err(|e| config_err(line_no, e.to_string())))
                    .collect::<Result<_>>()?;
                if modes.is_empty() {
                    return Err(bad("mode list"));
                }
            }
            ("run", "rc") => {
                let list = value.split(',').map(|r| parse_radius(r).ok_or_else(|| bad("radius list"))).collect::<Result<Vec<_>>>()?;
                radii = Some(list);
            }
            ("run", "out") => out = Some(PathBuf::from(value)),
            ("run", "reference") => {
                reference = Some(if value.eq_ignore_ascii_case("bundled") { ReferenceSource::Bundled } else { ReferenceSource::File(PathBuf::from(value)) })
            }
            ("run", "tolerance") => tolerance = Some(value.parse().ok().filter(|t: &f64| *t > 0.0).ok_or_else(|| bad("tolerance"))?),
            ("run", "mixing") => options.mixing = value.parse().ok().filter(|m: &f64| *m > 0.0 && *m <= 1.0).ok_or_else(|| bad("mixing"))?,
            ("run", "max_iter") => options.max_iter = value.parse().ok().filter(|m| *m > 0).ok_or_else(|| bad("iteration limit"))?,
            ("run", "singlet") => options.singlet = value.parse::<SingletScheme>().map_err(|e| config_err(line_no, e.to_string()))?,
            ("", _) => return Err(config_err(line_no, format!("key '{key}' appears before any section"))),
            (sec, _) => return Err(config_err(line_no, format!("unknown key '{key}' in [{sec}]"))),
        }
    }

    let end = text.lines().count().max(1);
    let (z, _) = z.ok_or_else(|| config_err(end, "missing [system] Z"))?;
    let (term_label, term_line) = term.ok_or_else(|| config_err(end, "missing [system] term"))?;
    let term = Term::parse(&term_label).map_err(|e| config_err(term_line, e.to_string()))?;
    let n_elec = match n {
        Some((n, line)) if n != term.n_electrons() => {
            return Err(config_err(line, format!("term {term_label} has {} electrons but N = {n}", term.n_electrons())))
        }
        Some((n, _)) => n,
        None => term.n_electrons(),
    };
    let radii = radii.ok_or_else(|| config_err(end, "missing [run] rc"))?;
    GridSpec::new(n_r, map_length, radii[0]).map_err(|e| config_err(end, e.to_string()))?;
    Ok(JobConfig {
        system: name.unwrap_or_else(|| system_name(z, n_elec)),
        z,
        n_elec,
        term,
        modes,
        n_r,
        map_length,
        radii,
        out,
        reference,
        tolerance,
        options,
    })
}

/// Read a job file; relative `out` and `reference` paths are resolved
/// against the file's directory.
pub fn load_config(path: &Path) -> Result<JobConfig> {
    let mut config = parse_config(&fs::read_to_string(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    if let Some(ReferenceSource::File(p)) = &config.reference {
        if p.is_relative() {
            config.reference = Some(ReferenceSource::File(base.join(p)));
        }
    }
    if let Some(p) = &config.out {
        if p.is_relative() {
            config.out = Some(base.join(p));
        }
    }
    Ok(config)
}

/// A converged scan point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub energy: EnergyComponents,
    pub iterations: usize,
    pub moments: MomentSet,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyRow {
    pub system: String,
    pub term: String,
    pub mode: Mode,
    pub r_c: f64,
    /// `Err` holds the failure message of a point that did not complete.
    pub outcome: std::result::Result<PointResult, String>,
}

impl EnergyRow {
    pub fn total(&self) -> Option<f64> {
        self.outcome.as_ref().ok().map(|p| p.energy.total)
    }

    pub fn failed(&self) -> bool {
        self.outcome.is_err()
    }
}

/// Solve one point of a job.
pub fn solve_point(config: &JobConfig, mode: Mode, r_c: f64) -> Result<TermEnergy> {
    let spec = config.grid_spec(r_c);
    spec.validate()?;
    term_energy(config.z as f64, &config.term, spec, mode, &config.options)
}

/// Run every `(mode, r_c)` point on `jobs` worker threads. Rows come back
/// in [`JobConfig::points`] order whatever the thread count.
pub fn run_scan(config: &JobConfig, jobs: usize) -> Result<Vec<EnergyRow>> {
    let points = config.points();
    let solve = || {
        points
            .par_iter()
            .map(|&(mode, r_c)| {
                let start = Instant::now();
                let outcome = solve_point(config, mode, r_c)
                    .map(|t| PointResult {
                        energy: t.energy,
                        iterations: t.scf.iterations,
                        moments: MomentSet::compute(&t.scf.density, &t.scf.grid, Normalization::Electrons),
                        seconds: start.elapsed().as_secs_f64(),
                    })
                    .map_err(|e| e.to_string());
                EnergyRow { system: config.system.clone(), term: config.term.to_string(), mode, r_c, outcome }
            })
            .collect()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfiguration(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(solve))
}

pub const ENERGIES_HEADER: &str = "system,term,mode,r_c,status,energy,kinetic,nuclear,hartree,exchange,correlation,iterations";

/// Energies table; failed points keep their row with status `FAILED`.
pub fn energies_csv(rows: &[EnergyRow]) -> String {
    let mut out = format!("{ENERGIES_HEADER}\n");
    for row in rows {
        let _ = write!(out, "{},{},{},{},", row.system, row.term, row.mode, format_radius(row.r_c));
        match &row.outcome {
            Ok(p) => {
                let e = &p.energy;
                let _ = writeln!(
                    out,
                    "OK,{:.9},{:.9},{:.9},{:.9},{:.9},{:.9},{}",
                    e.total, e.kinetic, e.nuclear, e.hartree, e.exchange, e.correlation, p.iterations
                );
            }
            Err(_) => out.push_str("FAILED,,,,,,,\n"),
        }
    }
    out
}

/// Moments table for the converged points.
pub fn scan_moments_csv(rows: &[EnergyRow]) -> String {
    let moment_rows: Vec<MomentRow> = rows
        .iter()
        .filter_map(|r| {
            r.outcome.as_ref().ok().map(|p| MomentRow {
                system: r.system.clone(),
                term: r.term.clone(),
                mode: r.mode,
                r_c: r.r_c,
                moments: p.moments,
            })
        })
        .collect();
    moments_csv(&moment_rows)
}

/// A computed `(system, term, mode, r_c, energy)` read back from an energies CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputedEnergy {
    pub system: String,
    pub term: String,
    pub mode: Mode,
    pub r_c: f64,
    /// `None` for a `FAILED` row.
    pub energy: Option<f64>,
}

impl From<&EnergyRow> for ComputedEnergy {
    fn from(row: &EnergyRow) -> Self {
        Self { system: row.system.clone(), term: row.term.clone(), mode: row.mode, r_c: row.r_c, energy: row.total() }
    }
}

fn header_index(header: &str, names: &[&str], what: &str) -> Result<Vec<usize>> {
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    names
        .iter()
        .map(|n| cols.iter().position(|c| c == n).ok_or_else(|| Error::Reference(format!("{what}: missing column '{n}'"))))
        .collect()
}

/// Parse an energies CSV as written by [`energies_csv`].
pub fn parse_energies_csv(text: &str) -> Result<Vec<ComputedEnergy>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Reference("energies file is empty".into()))?;
    let idx = header_index(header, &["system", "term", "mode", "r_c", "status", "energy"], "energies file")?;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |m: &str| Error::Reference(format!("energies line {}: {m}", i + 2));
        let get = |k: usize| f.get(idx[k]).copied().ok_or_else(|| bad("too few fields"));
        let r_c = parse_radius(get(3)?).ok_or_else(|| bad("invalid r_c"))?;
        let energy = if get(4)? == "FAILED" { None } else { Some(get(5)?.parse().map_err(|_| bad("invalid energy"))?) };
        rows.push(ComputedEnergy {
            system: get(0)?.to_string(),
            term: get(1)?.to_string(),
            mode: get(2)?.parse().map_err(|e: Error| bad(&e.to_string()))?,
            r_c,
            energy,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRow {
    pub system: String,
    pub term: String,
    pub mode: Mode,
    pub r_c: f64,
    pub energy: f64,
    pub tolerance: f64,
}

/// Parse a reference table with columns `system,term,mode,r_c,energy,tolerance`.
pub fn parse_reference_csv(text: &str) -> Result<Vec<ReferenceRow>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Reference("reference file is empty".into()))?;
    let idx = header_index(header, &["system", "term", "mode", "r_c", "energy", "tolerance"], "reference file")?;
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |m: &str| Error::Reference(format!("reference line {}: {m}", i + 2));
        let get = |k: usize| f.get(idx[k]).copied().ok_or_else(|| bad("too few fields"));
        rows.push(ReferenceRow {
            system: get(0)?.to_string(),
            term: get(1)?.to_string(),
            mode: get(2)?.parse().map_err(|e: Error| bad(&e.to_string()))?,
            r_c: parse_radius(get(3)?).ok_or_else(|| bad("invalid r_c"))?,
            energy: get(4)?.parse().map_err(|_| bad("invalid energy"))?,
            tolerance: get(5)?.parse().map_err(|_| bad("invalid tolerance"))?,
        });
    }
    Ok(rows)
}

/// Bundled energy tables as `(file name, contents)`.
pub const BUNDLED_TABLES: [(&str, &str); 5] = [
    ("he_ground.csv", include_str!("../data/reference/he_ground.csv")),
    ("he_1s2s.csv", include_str!("../data/reference/he_1s2s.csv")),
    ("he_1s2p_1s3d.csv", include_str!("../data/reference/he_1s2p_1s3d.csv")),
    ("ions.csv", include_str!("../data/reference/ions.csv")),
    ("neutrals.csv", include_str!("../data/reference/neutrals.csv")),
];

/// Bundled moment table: `system,term,mode,r_c,m_-2,…,m_4,tolerance`.
pub const BUNDLED_MOMENTS: &str = include_str!("../data/reference/moments.csv");

/// Bundled energy-difference table for level crossings:
/// `upper,lower,r_c,delta_e,delta_t,delta_v_en,delta_v_ee,tolerance`.
pub const BUNDLED_CROSSING: &str = include_str!("../data/reference/crossing.csv");

/// All bundled reference energies.
pub fn bundled_reference() -> Vec<ReferenceRow> {
    BUNDLED_TABLES
        .iter()
        .flat_map(|(name, text)| parse_reference_csv(text).unwrap_or_else(|e| panic!("bundled table {name}: {e}")))
        .collect()
}

pub fn load_reference(source: &ReferenceSource) -> Result<Vec<ReferenceRow>> {
    match source {
        ReferenceSource::Bundled => Ok(bundled_reference()),
        ReferenceSource::File(p) => parse_reference_csv(&fs::read_to_string(p).map_err(|e| Error::Reference(format!("{}: {e}", p.display())))?),
    }
}

/// Same radius up to formatting noise.
fn same_radius(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Deviation above the tolerance.
    Fail,
    /// The point itself did not complete.
    Failed,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Failed => "FAILED",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub system: String,
    pub term: String,
    pub mode: Mode,
    pub r_c: f64,
    pub computed: Option<f64>,
    pub reference: f64,
    pub abs_dev: Option<f64>,
    pub rel_dev: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn exit_code(&self) -> i32 {
        if self.rows.iter().any(|r| r.verdict == Verdict::Failed) {
            EXIT_RUNTIME
        } else if self.rows.iter().any(|r| r.verdict == Verdict::Fail) {
            EXIT_TOLERANCE
        } else {
            EXIT_OK
        }
    }

    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == Verdict::Pass).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("system,term,mode,r_c,computed,reference,abs_dev,rel_dev,tolerance,status\n");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.9}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.system,
                r.term,
                r.mode,
                format_radius(r.r_c),
                opt(r.computed),
                r.reference,
                r.abs_dev.map(|x| format!("{x:.3e}")).unwrap_or_default(),
                r.rel_dev.map(|x| format!("{x:.3e}")).unwrap_or_default(),
                r.tolerance,
                r.verdict.as_str()
            );
        }
        out
    }
}

/// Match computed rows against reference rows by `(system, term, mode, r_c)`.
/// Computed rows without a reference are left out. `tolerance` overrides
/// the per-row reference tolerance.
pub fn compare(computed: &[ComputedEnergy], reference: &[ReferenceRow], tolerance: Option<f64>) -> ComparisonReport {
    let rows = computed
        .iter()
        .filter_map(|c| {
            let r = reference.iter().find(|r| r.system == c.system && r.term == c.term && r.mode == c.mode && same_radius(r.r_c, c.r_c))?;
            let tol = tolerance.unwrap_or(r.tolerance);
            let abs_dev = c.energy.map(|e| (e - r.energy).abs());
            let verdict = match abs_dev {
                None => Verdict::Failed,
                Some(d) if d <= tol => Verdict::Pass,
                Some(_) => Verdict::Fail,
            };
            Some(ComparisonRow {
                system: c.system.clone(),
                term: c.term.clone(),
                mode: c.mode,
                r_c: c.r_c,
                computed: c.energy,
                reference: r.energy,
                abs_dev,
                rel_dev: abs_dev.map(|d| d / r.energy.abs()),
                tolerance: tol,
                verdict,
            })
        })
        .collect();
    ComparisonReport { rows }
}

/// Everything a scan produces.
#[derive(Debug, Clone)]
pub struct ScanOutcome {
    pub rows: Vec<EnergyRow>,
    pub comparison: Option<ComparisonReport>,
}

impl ScanOutcome {
    /// 1 if any point failed, else 2 if any reference deviation exceeds its
    /// tolerance, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.rows.iter().any(EnergyRow::failed) {
            return EXIT_RUNTIME;
        }
        self.comparison.as_ref().map_or(EXIT_OK, ComparisonReport::exit_code)
    }
}

/// Run a scan and compare against the configured reference, if any.
pub fn scan(config: &JobConfig, jobs: usize) -> Result<ScanOutcome> {
    let rows = run_scan(config, jobs)?;
    let comparison = match &config.reference {
        Some(src) => {
            let reference = load_reference(src)?;
            let computed: Vec<ComputedEnergy> = rows.iter().map(Into::into).collect();
            Some(compare(&computed, &reference, config.tolerance))
        }
        None => None,
    };
    Ok(ScanOutcome { rows, comparison })
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Append lines to the sidecar log `run.log`; the only output carrying
/// timestamps and timings.
pub fn append_log(dir: &Path, lines: &[String]) -> Result<()> {
    use std::io::Write;
    let mut f = fs::OpenOptions::new().create(true).append(true).open(dir.join("run.log"))?;
    let t = timestamp();
    for l in lines {
        writeln!(f, "[{t}] {l}")?;
    }
    Ok(())
}

/// Write `energies.csv`, `moments.csv` and, with a reference,
/// `comparison.csv` into `dir`; log per-point timings.
pub fn write_scan(dir: &Path, outcome: &ScanOutcome) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = vec![dir.join("energies.csv"), dir.join("moments.csv")];
    fs::write(&written[0], energies_csv(&outcome.rows))?;
    fs::write(&written[1], scan_moments_csv(&outcome.rows))?;
    if let Some(c) = &outcome.comparison {
        let p = dir.join("comparison.csv");
        fs::write(&p, c.to_csv())?;
        written.push(p);
    }
    let log: Vec<String> = outcome
        .rows
        .iter()
        .map(|r| match &r.outcome {
            Ok(p) => format!("{} {} {} r_c={} ok in {:.2}s ({} iterations)", r.system, r.term, r.mode, r.r_c, p.seconds, p.iterations),
            Err(e) => format!("{} {} {} r_c={} FAILED: {e}", r.system, r.term, r.mode, r.r_c),
        })
        .collect();
    append_log(dir, &log)?;
    Ok(written)
}

fn file_stem(config: &JobConfig, mode: Mode, r_c: f64) -> String {
    format!("{}_{}_{}_rc{}", config.system.replace('+', "p"), config.term, mode, format_radius(r_c))
}

fn state_tag(config: &JobConfig, mode: Mode, r_c: f64) -> String {
    format!("{} {} {} r_c={}", config.system, config.term, mode, format_radius(r_c))
}

/// Radial distributions `r²ρ` and `D_nl = u²` of a solved point on
/// [`PLOT_POINTS`] uniform radii. Column labels name the state and radius.
pub fn density_profiles(config: &JobConfig, term: &TermEnergy) -> Vec<RadialProfile> {
    let scf = &term.scf;
    let tag = state_tag(config, term.mode, term.r_c);
    let polarized = !scf.config.is_spin_symmetric();
    let mut profiles = vec![density_distribution(&scf.density, &scf.grid)];
    for o in &scf.orbitals {
        if !polarized && o.spin == crate::eigen::Spin::Down {
            continue;
        }
        let mut d = orbital_distribution(o, &scf.grid);
        if polarized {
            d.label.push_str(if o.spin == crate::eigen::Spin::Up { "_up" } else { "_down" });
        }
        profiles.push(d);
    }
    profiles
        .into_iter()
        .map(|p| {
            let mut fine = resample(&p, &scf.grid, PLOT_POINTS);
            fine.label = format!("{}[{tag}]", fine.label);
            fine
        })
        .collect()
}

/// Emit one density CSV per `(mode, r_c)` point.
pub fn write_densities(config: &JobConfig, dir: &Path, jobs: usize) -> Result<Vec<PathBuf>> {
    emit_profiles(config, dir, jobs, "density", density_profiles)
}

/// Emit one potential CSV per point: `v_en`, `v_h`, `v_x`, `v_c` per spin on
/// the interior collocation nodes.
pub fn write_potentials(config: &JobConfig, dir: &Path, jobs: usize) -> Result<Vec<PathBuf>> {
    emit_profiles(config, dir, jobs, "potentials", |config, term| {
        let tag = state_tag(config, term.mode, term.r_c);
        potential_profiles(&term.scf)
            .into_iter()
            .map(|mut p| {
                p.label = format!("{}[{tag}]", p.label);
                p
            })
            .collect()
    })
}

fn emit_profiles(
    config: &JobConfig,
    dir: &Path,
    jobs: usize,
    kind: &str,
    build: impl Fn(&JobConfig, &TermEnergy) -> Vec<RadialProfile> + Sync,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfiguration(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<(PathBuf, String)>> = pool.install(|| {
        config
            .points()
            .par_iter()
            .map(|&(mode, r_c)| {
                let term = solve_point(config, mode, r_c)?;
                let path = dir.join(format!("{kind}_{}.csv", file_stem(config, mode, r_c)));
                Ok((path, profiles_csv(&build(config, &term))))
            })
            .collect()
    });
    let mut written = Vec::new();
    for r in results {
        let (path, body) = r?;
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}
