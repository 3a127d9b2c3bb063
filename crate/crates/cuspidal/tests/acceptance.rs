//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p cuspidal --test acceptance`.
//!
//! Every check is exact, so the only tolerance is the mismatch count (zero)
//! and the wall-clock budget of each criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cuspidal::ctx::PrimeCtx;
use cuspidal::cyclo::epsilon_p;
use cuspidal::ffchar::{classify, Kind, MultChar};
use cuspidal::kirillov::KirillovRep;
use cuspidal::sweep::{
    even_verdicts, gauss_lemma_checks, jh_checks, ktype_checks, model_checks, multiplicity_checks, normalized_nus,
    odd_verdicts, trivial_central_verdicts, Check, DEFAULT_SEED,
};
use cuspidal::tori::{split_eigenvector, xi_weyl_eigenvalue, Verdict};

const ALLOWED_MISMATCHES: usize = 0;
const RANDOM_PAIRS: usize = 10_000;

const PRIMES_13: [u32; 5] = [3, 5, 7, 11, 13];
const PRIMES_19: [u32; 7] = [3, 5, 7, 11, 13, 17, 19];
const PRIMES_31: [u32; 10] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31];
const KTYPE_PRIMES: [u32; 3] = [3, 5, 7];

/// Criteria whose literal statement is known not to hold; see the README.
const EXPECTED_FAIL: [u32; 1] = [9];

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

struct Outcome {
    id: String,
    name: &'static str,
    failures: usize,
    total: usize,
    elapsed: Duration,
    budget: Duration,
    note: String,
}

impl Outcome {
    #[allow(clippy::absurd_extreme_comparisons)]
    fn passed(&self) -> bool {
        self.failures <= ALLOWED_MISMATCHES && self.total > 0 && self.elapsed <= self.budget
    }
}

fn timed<F>(id: &str, name: &'static str, budget: Duration, f: F) -> Outcome
where
    F: FnOnce() -> (usize, usize, String),
{
    let start = Instant::now();
    let (failures, total, note) = f();
    Outcome { id: id.to_string(), name, failures, total, elapsed: start.elapsed(), budget, note }
}

fn failed_checks(checks: &[Check]) -> usize {
    checks.iter().filter(|c| !c.passed).count()
}

fn first_failure(checks: &[Check]) -> String {
    checks
        .iter()
        .find(|c| !c.passed)
        .map(|c| format!("first failure: {} p={} {}: {}", c.family, c.p, c.subject, c.detail))
        .unwrap_or_default()
}

fn ctx(p: u32) -> PrimeCtx {
    PrimeCtx::new(p as u64).expect("odd prime")
}

fn homomorphism() -> (usize, usize, String) {
    let mut checks = Vec::new();
    for &p in &PRIMES_13 {
        let c = ctx(p);
        checks.extend(model_checks(&c, RANDOM_PAIRS, DEFAULT_SEED).expect("model checks run"));
    }
    let note = checks
        .iter()
        .filter(|c| c.family == "homomorphism" && (c.p != 3 || c.subject == "nu=(1,0)"))
        .map(|c| format!("p={}: {}", c.p, c.detail))
        .take(5)
        .collect::<Vec<_>>()
        .join("; ");
    let fail = failed_checks(&checks);
    (fail, checks.len(), if fail > 0 { first_failure(&checks) } else { note })
}

fn gauss_lemma() -> (usize, usize, String) {
    let checks: Vec<Check> = PRIMES_31.iter().flat_map(|&p| gauss_lemma_checks(&ctx(p))).collect();
    (failed_checks(&checks), checks.len(), first_failure(&checks))
}

fn mismatches(vs: &[Verdict]) -> usize {
    vs.iter().filter(|v| v.mismatch()).count()
}

fn claimed(vs: &[Verdict]) -> usize {
    vs.iter().filter(|v| v.predicted.is_some()).count()
}

fn trivial_central(store: &mut Vec<Verdict>) -> (usize, usize, String) {
    let mut vs = Vec::new();
    for &p in &PRIMES_19 {
        vs.extend(trivial_central_verdicts(&ctx(p)).expect("sweep runs"));
    }
    let mut by_clause: BTreeMap<&str, usize> = BTreeMap::new();
    for v in &vs {
        *by_clause.entry(v.clause.as_str()).or_default() += 1;
    }
    let wanted = ["trivial-central/eps-equal", "trivial-central/type2/v-triv", "trivial-central/type1/v-quad"];
    let uncovered = wanted.iter().filter(|c| !by_clause.contains_key(*c)).count();
    // the eps-equal clause is the necessity direction: predicted false, so a nonzero projection mismatches
    let note = format!("{} claims, clause counts {by_clause:?}", claimed(&vs));
    let fail = mismatches(&vs) + uncovered;
    let total = claimed(&vs);
    store.extend(vs);
    (fail, total, note)
}

type Digits = (u32, u32);

/// The clause a `(nu, chi)` pair must land in, derived from scratch.
fn expected_clause(c: &PrimeCtx, nu: MultChar, chi: MultChar) -> &'static str {
    let (a, b) = nu.digits();
    let tag = classify(&c.field, nu, chi).expect("compatible");
    match ((a - b) % 2, tag.kind, tag.t % 2) {
        (0, Kind::Type1, 1) => "even/type1/t-odd",
        (0, Kind::Type2, 1) => "even/type2/t-odd",
        (0, Kind::Type1, _) => "even/type1/t-even",
        (0, Kind::Type2, _) => "even/type2/t-even",
        _ if a - b == 1 => "odd/adjacent",
        (_, Kind::Type1, _) => "odd/type1",
        (_, Kind::Type2, _) => "odd/type2",
    }
}

fn parity_sweeps(store: &mut Vec<Verdict>) -> (usize, usize, String) {
    let mut vs = Vec::new();
    let mut bad_case = 0;
    let mut pairs = 0;
    for &p in &PRIMES_13 {
        let c = ctx(p);
        let mut here = even_verdicts(&c).expect("even sweep runs");
        here.extend(odd_verdicts(&c).expect("odd sweep runs"));
        let mut positive: BTreeMap<(Digits, Digits), Vec<&str>> = BTreeMap::new();
        for v in here.iter().filter(|v| v.predicted == Some(true)) {
            positive.entry((v.nu, v.chi)).or_default().push(v.clause.as_str());
        }
        for ((nu, chi), clauses) in &positive {
            let nu = cuspidal::ffchar::char_from_digits(&c.field, nu.0, nu.1).expect("digits");
            let chi = cuspidal::ffchar::char_from_digits(&c.field, chi.0, chi.1).expect("digits");
            pairs += 1;
            if clauses.len() != 1 || clauses[0] != expected_clause(&c, nu, chi) {
                bad_case += 1;
            }
        }
        // every (nu, chi) with chi outside {nu, nu^p} is covered
        let expect_pairs: usize = normalized_nus(&c).len() * (p as usize - 1);
        bad_case += expect_pairs.abs_diff(positive.len());
        vs.extend(here);
    }
    let modp_false = vs.iter().filter(|v| v.predicted == Some(true) && !v.modp_nonzero).count();
    let note = format!(
        "{} verdicts over {pairs} (nu, chi) pairs, recommended mu modp-false {modp_false}, clause errors {bad_case}",
        vs.len()
    );
    let fail = mismatches(&vs) + bad_case + modp_false;
    let total = claimed(&vs);
    store.extend(vs);
    (fail, total, note)
}

fn multiplicity() -> (usize, usize, String) {
    let mut checks = Vec::new();
    for &p in &PRIMES_13 {
        checks.extend(multiplicity_checks(&ctx(p)).expect("multiplicity checks run"));
    }
    (failed_checks(&checks), checks.len(), first_failure(&checks))
}

fn jordan_holder() -> (usize, usize, String) {
    let mut checks = Vec::new();
    for &p in &PRIMES_13 {
        checks.extend(jh_checks(&ctx(p)).expect("jh checks run"));
    }
    let note = if failed_checks(&checks) > 0 {
        first_failure(&checks)
    } else {
        let fams: BTreeMap<&str, usize> = checks.iter().fold(BTreeMap::new(), |mut m, c| {
            *m.entry(c.family.as_str()).or_default() += 1;
            m
        });
        format!("{fams:?}")
    };
    (failed_checks(&checks), checks.len(), note)
}

fn modp_implies_char0(vs: &[Verdict]) -> (usize, usize, String) {
    let violations = vs.iter().filter(|v| v.modp_nonzero && !v.char0_nonzero).count();
    let gap = vs.iter().filter(|v| v.char0_nonzero && !v.modp_nonzero).count();
    (violations, vs.len(), format!("char0-only triples {gap}"))
}

fn ktype() -> (usize, usize, String) {
    let mut checks = Vec::new();
    for &p in &KTYPE_PRIMES {
        checks.extend(ktype_checks(p).expect("ktype checks run"));
    }
    (failed_checks(&checks), checks.len(), first_failure(&checks))
}

/// Eigenvalue of `rho(x_xi)` on `v_triv` and `v_quad` against `target(nu)`.
fn xi_eigen<F>(target: F) -> (usize, usize, String)
where
    F: Fn(&PrimeCtx, MultChar) -> cuspidal::cyclo::CycInt,
{
    let mut fail = 0;
    let mut total = 0;
    let mut first = String::new();
    for &p in &PRIMES_13 {
        let c = ctx(p);
        let quad = (p - 1) / 2;
        for nu in normalized_nus(&c).into_iter().filter(|nu| nu.central_weight() == 0) {
            let rep = KirillovRep::new(&c, nu).expect("regular");
            let want = target(&c, nu);
            for s in [0, quad] {
                total += 1;
                let got = xi_weyl_eigenvalue(&rep, &split_eigenvector(&rep, s));
                if got.as_ref().ok() != Some(&want) {
                    fail += 1;
                    if first.is_empty() {
                        let got = got.map_or_else(|e| e.to_string(), |g| format!("{:?}", c.cy.as_root(&g)));
                        first = format!(
                            "p={p} nu={:?} mu={s}: got {got}, wanted {:?}",
                            nu.digits(),
                            c.cy.as_root(&want)
                        );
                    }
                }
            }
        }
    }
    (fail, total, first)
}

fn nu_at_theta(c: &PrimeCtx, nu: MultChar) -> cuspidal::cyclo::CycInt {
    let e = c.field.eval_weight(nu.k(), c.field.theta()).expect("theta is a unit");
    c.cy.zeta(c.root_m(e) as i64)
}

fn main() -> ExitCode {
    println!("acceptance: exact checks, allowed mismatches = {ALLOWED_MISMATCHES}");
    let mut store = Vec::new();
    let mut out = Vec::new();
    out.push(timed("1", "homomorphism rho(g)rho(h) = rho(gh)", secs(120), homomorphism));
    out.push(timed("2", "Gauss sum G(chi) = p chi(sqrt xi), p <= 31", secs(60), gauss_lemma));
    out.push(timed("3", "trivial central character sweep, p <= 19", secs(300), || trivial_central(&mut store)));
    out.push(timed("4", "even and odd sweeps, p <= 13", secs(300), || parity_sweeps(&mut store)));
    out.push(timed("5", "multiplicity one on T and D, p <= 13", secs(120), multiplicity));
    out.push(timed("6", "Jordan-Holder and Brauer traces, p <= 13", secs(120), jordan_holder));
    out.push(timed("7", "modp nonzero implies char0 nonzero", secs(5), || modp_implies_char0(&store)));
    out.push(timed("8", "K-type class functions at finite level", secs(300), ktype));
    out.push(timed("9", "rho(x_xi) v = nu(sqrt xi) v on v_triv, v_quad", secs(60), || xi_eigen(nu_at_theta)));
    out.push(timed("9c", "companion: rho(x_xi) v = -eps_p(nu) v", secs(60), || {
        xi_eigen(|c, nu| epsilon_p(c, nu).expect("trivial central").scale(-1))
    }));

    let mut bad = 0;
    for o in &out {
        let expected_fail = o.id.parse::<u32>().is_ok_and(|n| EXPECTED_FAIL.contains(&n));
        let status = if o.passed() { "PASS" } else { "FAIL" };
        let tag = match (expected_fail, o.passed()) {
            (true, false) => " (expected)",
            (true, true) => " (unexpected pass)",
            _ => "",
        };
        if o.passed() == expected_fail {
            bad += 1;
        }
        println!(
            "{status}{tag} criterion {}: {} | failures {}/{} | {:.2?} (budget {:?}){}",
            o.id,
            o.name,
            o.failures,
            o.total,
            o.elapsed,
            o.budget,
            if o.note.is_empty() { String::new() } else { format!(" | {}", o.note) }
        );
    }
    if bad == 0 {
        println!("acceptance: all criteria as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {bad} criteria not as expected");
        ExitCode::FAILURE
    }
}
