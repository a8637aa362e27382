use std::path::{Path, PathBuf};

use rayon::prelude::*;
use spinhodge_core::arith::{format_rat, rat};
use spinhodge_core::classes::{calibrate, calibrate_from, CalibrationReport, Variant};
use spinhodge_core::error::{CacheError, ValidationError};
use spinhodge_core::graphs::{Conventions, Orientation};
use spinhodge_core::integrate::{cache_path, cache_stats, clear_cache, flush_cache, load_cache, verify_cache};
use spinhodge_core::limits::{genus0_oracle, psi_monomials, relation_certificates, IntegralOptions, SectorEvaluator, SectorInfo, Verdict};
use spinhodge_core::model::{enumerate_sectors, LGOrbifold, Sector};
use spinhodge_core::Error;

use crate::problem::{Mode, Monodromies, ProblemSpec};
use crate::record::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VariantChoice {
    Twisted,
    BroadCorrected,
    Both,
}

impl VariantChoice {
    fn variants(self) -> Vec<Variant> {
        match self {
            VariantChoice::Twisted => vec![Variant::Twisted],
            VariantChoice::BroadCorrected => vec![Variant::BroadCorrected],
            VariantChoice::Both => vec![Variant::Twisted, Variant::BroadCorrected],
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub cache_dir: PathBuf,
    pub variant: VariantChoice,
    pub truncation_check: bool,
    pub verbose_prelimit: bool,
    /// Test hook: replace the pinned gluing constants by a wrong value.
    pub corrupt_constant: bool,
}

/// Outcome of a command: the record plus the exit status it implies.
pub struct Outcome {
    pub record: ResultRecord,
    pub exit_code: i32,
    pub csv: Vec<CsvRow>,
}

pub fn error_record(e: &Error) -> ErrorRecord {
    let (kind, exit_code) = match e {
        Error::Parse(_) => ("parse", 2),
        Error::Domain(_) => ("domain", 2),
        Error::Validation(_) => ("validation", 2),
        Error::Integrity(_) => ("integrity", 3),
        Error::Cache(_) => ("cache", 3),
        Error::Calibration(_) => ("calibration", 4),
    };
    ErrorRecord { kind: kind.to_string(), exit_code, message: e.to_string() }
}

/// Calibration failures dominate integrity failures, which dominate bad input.
fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        4 => 3,
        3 => 2,
        2 => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

pub fn failed(command: &str, e: &Error) -> Outcome {
    failed_with(command, error_record(e))
}

pub fn failed_with(command: &str, err: ErrorRecord) -> Outcome {
    let mut record = ResultRecord::new(command);
    record.status = "error".into();
    let exit_code = err.exit_code;
    record.error = Some(err);
    Outcome { record, exit_code, csv: Vec::new() }
}

fn calibration_record(report: &CalibrationReport, with_checks: bool) -> CalibrationRecord {
    let c = &report.conventions;
    CalibrationRecord {
        fingerprint: report.fingerprint.clone(),
        boundary_scale: format_rat(&c.boundary_scale),
        excess: format_rat(&c.excess),
        orientation: match c.orientation {
            Orientation::PsiFirst => "psi-first".into(),
            Orientation::PsiSecond => "psi-second".into(),
        },
        candidates_tried: report.candidates_tried,
        checks: if with_checks {
            report
                .checks
                .iter()
                .map(|k| CheckRecord { name: k.name.clone(), expected: k.expected.clone(), observed: k.observed.clone(), pass: k.pass })
                .collect()
        } else {
            Vec::new()
        },
    }
}

fn corrupted() -> Conventions {
    Conventions { boundary_scale: rat(2, 1), ..Conventions::default() }
}

pub fn cmd_calibrate(opts: &RunOptions) -> Outcome {
    // under the hook the suite sees only the corrupted constant and must fail
    let report = if opts.corrupt_constant { calibrate_from(&[corrupted()]) } else { calibrate() };
    match report {
        Ok(report) => {
            let mut record = ResultRecord::new("calibrate");
            record.calibration = Some(calibration_record(&report, true));
            Outcome { record, exit_code: 0, csv: Vec::new() }
        }
        Err(e) => failed("calibrate", &e.into()),
    }
}

pub fn cmd_cache(action: &str, dir: &Path) -> Outcome {
    let command = format!("cache {action}");
    let result: Result<usize, CacheError> = match action {
        "stats" => cache_stats(dir).map(|s| s.file_entries),
        "verify" => verify_cache(dir),
        _ => clear_cache(dir).map(|_| 0),
    };
    match result {
        Ok(file_entries) => {
            let mut record = ResultRecord::new(&command);
            record.cache = Some(CacheRecord { action: action.to_string(), path: cache_path(dir).display().to_string(), file_entries });
            Outcome { record, exit_code: 0, csv: Vec::new() }
        }
        Err(e) => failed(&command, &e.into()),
    }
}

/// Sectors a problem asks for; explicit lists are validated here.
fn sectors(orb: &LGOrbifold, spec: &ProblemSpec) -> Result<(Vec<Sector>, bool), Error> {
    Ok(match &spec.monodromies {
        Monodromies::Explicit(k) => (vec![Sector::new(orb, spec.genus, k)?], false),
        Monodromies::AllNarrow { markings } => (enumerate_sectors(orb, spec.genus, *markings, true), true),
        Monodromies::All { markings } => (enumerate_sectors(orb, spec.genus, *markings, false), true),
    })
}

/// Monomials of the only degree with a nonzero limit, unless the problem
/// names one.
fn monomials(spec: &ProblemSpec, sector: &Sector, info: &SectorInfo) -> Vec<Vec<u32>> {
    if let Some(b) = &spec.psi_powers {
        return vec![b.clone()];
    }
    let n = sector.n();
    if info.empty {
        return vec![vec![0; n]];
    }
    let deg = sector.dim() - info.degvir - sector.genus as i64;
    if deg < 0 {
        return Vec::new();
    }
    psi_monomials(n, deg as u32).into_iter().filter(|b| b.iter().map(|&x| x as i64).sum::<i64>() == deg).collect()
}

fn sector_record(sector: &Sector, info: &SectorInfo) -> SectorRecord {
    SectorRecord {
        shape: info.shape.clone(),
        weights: info.weights.clone(),
        degree: info.degree,
        genus: info.genus,
        monodromies: info.monodromies.clone(),
        narrow: sector.is_narrow(),
        flag: info.empty.then(|| "empty component".to_string()),
        degvir: info.degvir,
        p: info.pole_bound,
        variants: Vec::new(),
        variants_agree: None,
        skipped: None,
        error: None,
    }
}

fn run_integrals(
    mode: Mode,
    orb: &LGOrbifold,
    sector: &Sector,
    options: IntegralOptions,
    b_list: &[Vec<u32>],
    verbose: bool,
) -> Result<Vec<IntegralRecord>, Error> {
    let eval = SectorEvaluator::new(orb, sector, options.clone(), 1)?;
    b_list
        .par_iter()
        .map(|b| {
            let r = eval.integral(b)?;
            let (oracle, agrees) = if mode == Mode::Genus0Check {
                let o = genus0_oracle(orb, sector, b, &options.conventions)?;
                let agrees = o == r.value;
                (Some(format_rat(&o)), Some(agrees))
            } else {
                (None, None)
            };
            Ok(IntegralRecord {
                psi_powers: b.clone(),
                value: format_rat(&r.value),
                pole_order_found: r.pole_order_found,
                oracle,
                agrees,
                laurent: verbose.then(|| r.laurent.to_string()),
                prelimit: r.prelimit.as_ref().map(|f| f.to_string()),
            })
        })
        .collect()
}

fn run_relations(orb: &LGOrbifold, sector: &Sector, options: &IntegralOptions) -> Result<RelationsRecord, Error> {
    let report = relation_certificates(orb, sector, options)?;
    let verdict = |v: Verdict| if v == Verdict::Pass { "PASS" } else { "FAIL" }.to_string();
    let certificates = report
        .certificates
        .iter()
        .map(|c| CertificateRecord {
            m: c.m,
            verdict: verdict(c.verdict),
            completeness: c.completeness.to_string(),
            residues: c
                .pairings
                .iter()
                .filter(|(_, v)| v != &rat(0, 1))
                .map(|(b, v)| ResidueRecord { psi_powers: b.clone(), m: c.m, coefficient: format_rat(v) })
                .collect(),
        })
        .collect();
    Ok(RelationsRecord {
        verdict: verdict(report.verdict),
        lowest_exponent: report.lowest_exponent,
        monomials: report.certificates.first().map_or(0, |c| c.pairings.len()),
        certificates,
        grading_checks: report.grading_checks,
        grading_violations: report
            .grading_violations
            .iter()
            .map(|v| ResidueRecord { psi_powers: v.psi_powers.clone(), m: v.m, coefficient: format_rat(&v.coefficient) })
            .collect(),
    })
}

/// Evaluates one sector under every requested variant. Returns the record
/// and its exit status.
fn evaluate_sector(mode: Mode, spec: &ProblemSpec, orb: &LGOrbifold, sector: &Sector, conv: &Conventions, opts: &RunOptions, sweep: bool) -> (SectorRecord, i32) {
    let info = SectorInfo::new(orb, sector);
    let mut rec = sector_record(sector, &info);
    let b_list = monomials(spec, sector, &info);
    for variant in opts.variant.variants() {
        let options = IntegralOptions {
            variant,
            conventions: conv.clone(),
            prelimit: opts.verbose_prelimit,
            truncation_check: opts.truncation_check,
        };
        let result = match mode {
            Mode::Relations => run_relations(orb, sector, &options)
                .map(|r| VariantRecord { variant: variant.name().into(), integrals: Vec::new(), relations: Some(r) }),
            _ => run_integrals(mode, orb, sector, options, &b_list, opts.verbose_prelimit)
                .map(|i| VariantRecord { variant: variant.name().into(), integrals: i, relations: None }),
        };
        match result {
            Ok(v) => rec.variants.push(v),
            // inside a sweep, sectors outside an evaluator's reach are listed, not fatal
            Err(Error::Validation(ValidationError::Unsupported(why))) if sweep => {
                rec.skipped = Some(why);
                rec.variants.clear();
                return (rec, 0);
            }
            Err(e) => {
                let err = error_record(&e);
                let code = err.exit_code;
                rec.error = Some(err);
                return (rec, code);
            }
        }
    }
    let mut code = 0;
    if rec.variants.len() == 2 {
        let strip = |v: &VariantRecord| {
            let mut v = v.clone();
            v.variant.clear();
            for i in &mut v.integrals {
                i.prelimit = None;
                i.laurent = None;
            }
            v
        };
        rec.variants_agree = Some(strip(&rec.variants[0]) == strip(&rec.variants[1]));
    }
    for v in &rec.variants {
        if v.relations.as_ref().is_some_and(|r| r.verdict != "PASS") || v.integrals.iter().any(|i| i.agrees == Some(false)) {
            code = 3;
        }
    }
    (rec, code)
}

fn csv_rows(rec: &SectorRecord) -> Vec<CsvRow> {
    let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let base = |variant: &str| CsvRow {
        shape: rec.shape.clone(),
        genus: rec.genus,
        monodromies: join(&rec.monodromies),
        variant: variant.to_string(),
        psi_powers: String::new(),
        value: String::new(),
        oracle: String::new(),
        verdict: String::new(),
    };
    let mut rows = Vec::new();
    if let Some(why) = &rec.skipped {
        rows.push(CsvRow { verdict: format!("skipped: {why}"), ..base("") });
    }
    if let Some(e) = &rec.error {
        rows.push(CsvRow { verdict: format!("{}: {}", e.kind, e.message), ..base("") });
    }
    for v in &rec.variants {
        if let Some(r) = &v.relations {
            rows.push(CsvRow { verdict: r.verdict.clone(), ..base(&v.variant) });
        }
        for i in &v.integrals {
            rows.push(CsvRow {
                psi_powers: i.psi_powers.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
                value: i.value.clone(),
                oracle: i.oracle.clone().unwrap_or_default(),
                verdict: match i.agrees {
                    Some(true) => "agree".into(),
                    Some(false) => "DISAGREE".into(),
                    None => String::new(),
                },
                ..base(&v.variant)
            });
        }
    }
    rows
}

/// `integral`, `relations` and `genus0-check` on a parsed problem.
pub fn cmd_problem(mode: Mode, spec: &ProblemSpec, opts: &RunOptions) -> Outcome {
    let command = match mode {
        Mode::Integral => "integral",
        Mode::Relations => "relations",
        Mode::Genus0Check => "genus0-check",
        Mode::Calibrate => return cmd_calibrate(opts),
    };
    let problem = serde_json::to_value(spec).ok();
    let fail = |e: Error| {
        let mut o = failed(command, &e);
        o.record.problem = problem.clone();
        o
    };
    let report = match calibrate() {
        Ok(r) => r,
        Err(e) => return fail(e.into()),
    };
    // the hook bypasses calibration so that downstream checks must catch it
    let conventions = if opts.corrupt_constant { corrupted() } else { report.conventions.clone() };
    let orb = match spec.shape().map_err(|e| ValidationError::Shape(e.message)).and_then(|s| LGOrbifold::new(s, spec.group_order)) {
        Ok(o) => o,
        Err(e) => return fail(e.into()),
    };
    let (list, sweep) = match sectors(&orb, spec) {
        Ok(x) => x,
        Err(e) => return fail(e),
    };
    if let Some(b) = &spec.psi_powers {
        if let Some(s) = list.iter().find(|s| s.n() != b.len()) {
            return fail(ValidationError::Ambient(format!("{} psi_powers for {} markings", b.len(), s.n())).into());
        }
    }
    if let Err(e) = load_cache(&opts.cache_dir) {
        return fail(e.into());
    }
    let results: Vec<(SectorRecord, i32)> =
        list.par_iter().map(|s| evaluate_sector(mode, spec, &orb, s, &conventions, opts, sweep)).collect();
    let mut record = ResultRecord::new(command);
    record.problem = problem.clone();
    record.calibration = Some(calibration_record(&report, false));
    let mut exit_code = 0;
    let mut csv = Vec::new();
    for (rec, code) in results {
        exit_code = worse(exit_code, code);
        csv.extend(csv_rows(&rec));
        record.sectors.push(rec);
    }
    if let Err(e) = flush_cache(&opts.cache_dir) {
        return fail(e.into());
    }
    if exit_code != 0 {
        record.status = "fail".into();
    }
    Outcome { record, exit_code, csv }
}
