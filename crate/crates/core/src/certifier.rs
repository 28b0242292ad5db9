//! Certificate assembly for `(p, n)` and the batch scans over exceptional
//! primes and bad `(p, M)` pairs.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{family_primes, is_prime_u64, legendre, primes_up_to};
use crate::classpoly::{hilbert_class_poly_cached, is_valid_discriminant, ClassPolyCache};
use crate::curve_local::{check_family, MordellData};
use crate::cyclo::{exceptional_primes, ExceptionalReport};
use crate::error::{Error, Result};
use crate::polyfp::is_cube;

/// Largest `3c^2` for which `certify` runs the cube test inline.
pub const CLASSPOLY_BUDGET: u64 = 12_000;
/// `c` range covered by the precomputed bad-pair list.
pub const BADLIST_C_LIMIT: u64 = 300;
/// `(p, c)` with `H_{-3c^2}` a cube mod `p`, for `c <= 300`.
pub const BAD_LIST: [(u64, u64); 7] = [
    (11, 271),
    (11, 174),
    (11, 261),
    (11, 290),
    (23, 174),
    (23, 261),
    (23, 290),
];
/// Primes for which the congruent curve is known to be isogenous.
pub const ISOGENY_PRIMES: [u64; 5] = [23, 29, 41, 47, 59];
pub const INTEGRAL_J_P_LIMIT: u64 = 10_000;
/// Largest `p` for which `certify` computes exceptional primes by default.
pub const DEFAULT_EXCEPTIONAL_BUDGET: u64 = 1_200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckVerdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub paper_anchor: String,
    pub verdict: CheckVerdict,
    pub data: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EvidenceKind {
    ShortcutPGt3c2,
    CubeTest,
    BadlistLookup,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeTestRecord {
    pub discriminant: u64,
    pub class_number: usize,
    /// `H_{-D} mod p`, coefficients low to high.
    pub polynomial_mod_p: Vec<u64>,
    pub is_cube: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonvanishingEvidence {
    pub method: EvidenceKind,
    pub c: u128,
    pub discriminant: String,
    pub cube_test: Option<CubeTestRecord>,
    pub bad_list_hit: Option<bool>,
    /// Cube test run alongside the shortcut when requested.
    pub cross_check: Option<CubeTestRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Evidence {
    pub nonvanishing: Option<NonvanishingEvidence>,
    pub exceptional_primes: Option<ExceptionalReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusions {
    pub status: Status,
    pub failed_checks: Vec<String>,
    /// Constraint on primes dividing the denominator of `j(F)`.
    pub denominator_primes: String,
    pub integral_j: bool,
    pub same_conductor: bool,
    pub isogeny_conclusive: bool,
    pub isogeny_statements: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool_version: String,
    pub exceptional_budget: u64,
    pub classpoly_budget: u64,
    pub timing_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Input {
    pub p: u64,
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub input: Input,
    pub checks: Vec<Check>,
    pub evidence: Evidence,
    pub conclusions: Conclusions,
    pub meta: Meta,
}

impl Certificate {
    pub fn status(&self) -> Status {
        self.conclusions.status
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Copy with the wall-clock field cleared, for comparisons.
    pub fn without_timing(&self) -> Self {
        let mut c = self.clone();
        c.meta.timing_ms = 0;
        c
    }
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    pub exceptional_budget: u64,
    pub classpoly_budget: u64,
    pub cross_check: bool,
    pub cache: Option<Arc<ClassPolyCache>>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            exceptional_budget: DEFAULT_EXCEPTIONAL_BUDGET,
            classpoly_budget: CLASSPOLY_BUDGET,
            cross_check: false,
            cache: None,
        }
    }
}

fn cube_test(d: u64, p: u64, cache: Option<&ClassPolyCache>) -> Result<CubeTestRecord> {
    let h = hilbert_class_poly_cached(d, cache)?;
    let reduced = h.reduce_mod(p);
    let (cube, _) = is_cube(&reduced)?;
    Ok(CubeTestRecord {
        discriminant: d,
        class_number: h.h,
        polynomial_mod_p: reduced.coeffs().to_vec(),
        is_cube: cube,
    })
}

fn nonvanishing(p: u64, c: u128, opts: &CertifyOptions) -> Result<(CheckVerdict, Option<NonvanishingEvidence>, Value)> {
    let d = c.checked_mul(c).and_then(|x| x.checked_mul(3));
    let cache = opts.cache.as_deref();
    let small_d = d.and_then(|d| u64::try_from(d).ok()).filter(|&d| d <= opts.classpoly_budget);
    let disc_text = d.map_or_else(|| format!("3*{c}^2"), |d| d.to_string());
    let mut ev = NonvanishingEvidence {
        method: EvidenceKind::ShortcutPGt3c2,
        c,
        discriminant: disc_text,
        cube_test: None,
        bad_list_hit: None,
        cross_check: None,
    };
    if d.is_some_and(|d| d <= p as u128) {
        if opts.cross_check {
            if let Some(d) = small_d {
                let record = cube_test(d, p, cache)?;
                if record.is_cube {
                    return Err(Error::Consistency(format!(
                        "H_(-{d}) is a cube mod {p} although 3c^2 <= p"
                    )));
                }
                ev.cross_check = Some(record);
            }
        }
        let data = json!({ "method": ev.method, "three_c_squared": ev.discriminant });
        return Ok((CheckVerdict::Pass, Some(ev), data));
    }
    if let Some(d) = small_d {
        let record = cube_test(d, p, cache)?;
        let verdict = if record.is_cube { CheckVerdict::Fail } else { CheckVerdict::Pass };
        let data = json!({
            "method": EvidenceKind::CubeTest,
            "discriminant": d,
            "class_number": record.class_number,
            "is_cube": record.is_cube,
        });
        ev.method = EvidenceKind::CubeTest;
        ev.cube_test = Some(record);
        return Ok((verdict, Some(ev), data));
    }
    if c <= BADLIST_C_LIMIT as u128 {
        let hit = BAD_LIST.contains(&(p, c as u64));
        ev.method = EvidenceKind::BadlistLookup;
        ev.bad_list_hit = Some(hit);
        let data = json!({
            "method": ev.method,
            "c": c as u64,
            "listed_as_bad": hit,
            "list": BAD_LIST,
        });
        let verdict = if hit { CheckVerdict::Fail } else { CheckVerdict::Pass };
        return Ok((verdict, Some(ev), data));
    }
    let data = json!({
        "reason": "3c^2 > p, 3c^2 above the class polynomial budget and c > 300",
        "c": c.to_string(),
        "classpoly_budget": opts.classpoly_budget,
    });
    Ok((CheckVerdict::Fail, None, data))
}

fn check(name: &str, anchor: &str, verdict: CheckVerdict, data: Value) -> Check {
    Check {
        name: name.into(),
        paper_anchor: anchor.into(),
        verdict,
        data,
    }
}

/// Runs the full pipeline for `y^2 = x^3 + n` at `p`. Hypothesis failures
/// produce an INCONCLUSIVE certificate; `Err` is reserved for internal
/// inconsistencies.
pub fn certify(p: u64, n: i64, opts: &CertifyOptions) -> Result<Certificate> {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut evidence = Evidence::default();
    let mut failed = Vec::new();
    let isogeny_statements = json!({
        "general": "isogenous when p <= 59",
        "asserted": { "primes": ISOGENY_PRIMES, "anchor": "complete-result-for-ep" },
    });

    let finish = |checks: Vec<Check>, evidence: Evidence, failed: Vec<String>, integral_j: bool| {
        let status = if failed.is_empty() { Status::Pass } else { Status::Inconclusive };
        let integral_j = integral_j && status == Status::Pass;
        Certificate {
            input: Input { p, n },
            checks,
            evidence,
            conclusions: Conclusions {
                status,
                failed_checks: failed,
                denominator_primes: format!("congruent to +-1 mod {} and exceptional for {p}", 3 * p as u128),
                integral_j,
                same_conductor: integral_j,
                isogeny_conclusive: integral_j && ISOGENY_PRIMES.contains(&p),
                isogeny_statements: isogeny_statements.clone(),
            },
            meta: Meta {
                tool_version: env!("CARGO_PKG_VERSION").into(),
                exceptional_budget: opts.exceptional_budget,
                classpoly_budget: opts.classpoly_budget,
                timing_ms: start.elapsed().as_millis() as u64,
            },
        }
    };

    let n_wide = n as i128;
    let violations = check_family(p, n_wide);
    let ok = violations.is_empty();
    checks.push(check(
        "family",
        "ep-is-good",
        if ok { CheckVerdict::Pass } else { CheckVerdict::Fail },
        json!({
            "violations": violations,
            "messages": violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
    ));
    if !ok {
        failed.push("family".into());
        return Ok(finish(checks, evidence, failed, false));
    }

    let data = MordellData::new(p, n_wide)?;
    checks.push(check(
        "surjectivity",
        "ep-is-good",
        if data.surjective { CheckVerdict::Pass } else { CheckVerdict::Fail },
        json!({
            "surjective": data.surjective,
            "rule": "not surjective iff n = 2 p^alpha a^3",
            "v_p": crate::arith::valuation(n_wide, p),
        }),
    ));
    if !data.surjective {
        failed.push("surjectivity".into());
        return Ok(finish(checks, evidence, failed, false));
    }

    checks.push(check(
        "conductor_rho_prime",
        "ep-is-good; anticyc-chars",
        CheckVerdict::Pass,
        json!({
            "M": data.m.to_string(),
            "L": data.l.to_string(),
            "c": data.c.to_string(),
            "c2": data.c2,
            "e2": data.e2,
            "e3": data.three_adic.e3,
            "e3n": data.three_adic.e3n,
            "cube_in_Q3": data.three_adic.cube_in_q3,
            "discriminant": data.discriminant.to_string(),
            "conductor_E": data.conductor.to_string(),
            "tate": [data.tate_2.clone(), data.tate_3.clone()],
        }),
    ));

    let (verdict, ev, nv_data) = nonvanishing(p, data.c, opts)?;
    evidence.nonvanishing = ev;
    checks.push(check("nonvanishing", "result-for-en; epn-supersing; injective-map", verdict, nv_data));
    if verdict != CheckVerdict::Pass {
        failed.push("nonvanishing".into());
    }

    let integral_j = if p <= opts.exceptional_budget {
        let report = exceptional_primes(p)?;
        let empty = report.is_empty_and_complete();
        checks.push(check(
            "exceptional_primes",
            "exceptional-primes",
            CheckVerdict::Pass,
            json!({
                "confirmed": report.confirmed.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "cofactor": report.cofactor.to_string(),
                "empty": empty,
            }),
        ));
        evidence.exceptional_primes = Some(report);
        empty && p <= INTEGRAL_J_P_LIMIT
    } else {
        checks.push(check(
            "exceptional_primes",
            "exceptional-primes",
            CheckVerdict::Skipped,
            json!({ "reason": "p above the exceptional-prime budget", "budget": opts.exceptional_budget }),
        ));
        false
    };

    Ok(finish(checks, evidence, failed, integral_j))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalRow {
    pub p: u64,
    #[serde(with = "crate::serde_big::biguint_vec")]
    pub exceptional: Vec<BigUint>,
    #[serde(with = "crate::serde_big::biguint")]
    pub cofactor: BigUint,
    pub millis: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalScan {
    pub p_max: u64,
    pub rows: Vec<ExceptionalRow>,
    /// Every row has no exceptional primes and cofactor 1.
    pub all_empty: bool,
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Exceptional primes for every family prime `11 <= p <= p_max`.
pub fn scan_exceptional(p_max: u64, jobs: usize) -> Result<ExceptionalScan> {
    let primes = family_primes(11, p_max);
    let rows = pool(jobs)?.install(|| {
        primes
            .par_iter()
            .map(|&p| {
                let start = Instant::now();
                let report = exceptional_primes(p)?;
                Ok(ExceptionalRow {
                    p,
                    exceptional: report.confirmed,
                    cofactor: report.cofactor,
                    millis: start.elapsed().as_millis() as u64,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let all_empty = rows.iter().all(|r| r.exceptional.is_empty() && r.cofactor == BigUint::from(1u32));
    Ok(ExceptionalScan { p_max, rows, all_empty })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScanMode {
    /// `M = 3c^2` with `v_3(c) <= 2` and the prime-to-3 part of `c`
    /// squarefree; the bound applies to `c`.
    D3CRange,
    /// Every discriminant `-M`; the bound applies to `M`.
    AllMRange,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPair {
    pub p: u64,
    pub m: u64,
    pub c: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPairScan {
    pub mode: ScanMode,
    pub bound: u64,
    pub max_disc: u64,
    pub pairs: Vec<BadPair>,
    /// Number of `(p, M)` pairs tested.
    pub examined: u64,
    /// Discriminants skipped for exceeding `max_disc`.
    pub skipped: Vec<u64>,
    pub partial: bool,
}

/// Default discriminant ceiling for the scans.
pub const SCAN_DISC_BUDGET: u64 = 30_000;

fn squarefree(mut n: u64) -> bool {
    let mut q = 2;
    while q * q <= n {
        if n % (q * q) == 0 {
            return false;
        }
        if n % q == 0 {
            n /= q;
        }
        q += 1;
    }
    true
}

/// `c = 3^i c'` with `i <= 2` and `c'` squarefree and prime to 3.
pub fn d3_parameters(bound: u64) -> Vec<u64> {
    (1..=bound)
        .filter(|&c| {
            let mut rest = c;
            let mut i = 0;
            while rest % 3 == 0 {
                rest /= 3;
                i += 1;
            }
            i <= 2 && squarefree(rest)
        })
        .collect()
}

/// Primes `p = 2, 5 mod 9`, `min_p <= p <= m`, `p ∤ m`, inert for `-m`.
pub fn candidate_primes(m: u64, min_p: u64, primes: &[u64]) -> Vec<u64> {
    primes
        .iter()
        .copied()
        .take_while(|&p| p <= m)
        .filter(|&p| p >= min_p.max(5) && matches!(p % 9, 2 | 5) && m % p != 0 && legendre(-(m as i128), p) == -1)
        .collect()
}

pub fn scan_bad_pairs(mode: ScanMode, bound: u64, max_disc: u64, jobs: usize) -> Result<BadPairScan> {
    // the D3 setting only concerns family primes
    let min_p = match mode {
        ScanMode::D3CRange => 11,
        ScanMode::AllMRange => 5,
    };
    let work: Vec<(u64, Option<u64>)> = match mode {
        ScanMode::D3CRange => d3_parameters(bound).into_iter().map(|c| (3 * c * c, Some(c))).collect(),
        ScanMode::AllMRange => (3..=bound).filter(|&m| is_valid_discriminant(m)).map(|m| (m, None)).collect(),
    };
    let top = work.iter().map(|w| w.0).max().unwrap_or(0).min(max_disc);
    let primes = primes_up_to(top);
    let (run, skipped): (Vec<_>, Vec<_>) = work.into_iter().partition(|w| w.0 <= max_disc);
    let results = pool(jobs)?.install(|| {
        run.par_iter()
            .map(|&(m, c)| {
                let cands = candidate_primes(m, min_p, &primes);
                if cands.is_empty() {
                    return Ok((0, Vec::new()));
                }
                let h = hilbert_class_poly_cached(m, None)?;
                let mut bad = Vec::new();
                for &p in &cands {
                    debug_assert!(is_prime_u64(p));
                    if is_cube(&h.reduce_mod(p))?.0 {
                        bad.push(BadPair { p, m, c });
                    }
                }
                Ok((cands.len() as u64, bad))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let examined = results.iter().map(|r| r.0).sum();
    let mut pairs: Vec<BadPair> = results.into_iter().flat_map(|r| r.1).collect();
    pairs.sort_by_key(|b| (b.m, b.p));
    let skipped: Vec<u64> = skipped.into_iter().map(|w| w.0).collect();
    Ok(BadPairScan {
        mode,
        bound,
        max_disc,
        partial: !skipped.is_empty(),
        pairs,
        examined,
        skipped,
    })
}

/// Number of candidate pairs `(p, M)` with `M <= bound`, without testing.
pub fn count_candidate_pairs(bound: u64) -> u64 {
    let primes = primes_up_to(bound);
    (3..=bound)
        .filter(|&m| is_valid_discriminant(m))
        .map(|m| candidate_primes(m, 5, &primes).len() as u64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d3_parameter_set() {
        let cs = d3_parameters(30);
        assert!(cs.contains(&6) && cs.contains(&9) && cs.contains(&18) && cs.contains(&30));
        assert!(!cs.contains(&4) && !cs.contains(&27) && !cs.contains(&12));
        assert!(d3_parameters(300).contains(&261));
    }

    #[test]
    fn candidates_respect_inertness() {
        // -108 has field Q(sqrt -3): p inert iff p = 2 mod 3
        assert_eq!(candidate_primes(108, 5, &primes_up_to(108)), vec![5, 11, 23, 29, 41, 47, 59, 83, 101]);
    }

    #[test]
    fn outside_family_is_inconclusive() {
        let cert = certify(13, 13, &CertifyOptions::default()).unwrap();
        assert_eq!(cert.status(), Status::Inconclusive);
        assert_eq!(cert.conclusions.failed_checks, vec!["family".to_string()]);
    }
}
