//! Exhaustive sweeps over `(p, nu, chi, mu)` and the per-prime structural checks.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ctx::PrimeCtx;
use crate::cyclo::gauss_sum;
use crate::ffchar::{char_from_digits, classify, compatible_chars, normalize, Kind, MultChar};
use crate::kirillov::{check_borel_law, check_central, check_elliptic_traces, check_pairs_exact, KirillovRep};
use crate::ktype::{check_case, default_levels, FiniteLevelGroup};
use crate::modl::{random_pairs, regular_chars, ModL};
use crate::modp::{
    brauer_check, jh_factors, modp_test_vector, predict, predict_trivial_central, predict_with, uv_weight, Monomials,
    Prediction,
};
use crate::tori::{
    is_test_vector, projector_is_zero, restriction_multiplicities, split_multiplicities, Eps, TorusEmbedding, Verdict,
};
use crate::{Error, Result};

pub const PSI_CONVENTION: &str = "psi(x)=zeta_p^x";
pub const MAX_PRIME: u32 = 31;
pub const MAX_KTYPE_PRIME: u32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    GaussSum,
    Even,
    Odd,
    Jh,
    Ktype,
    All,
}

impl Theorem {
    pub const NAMES: [&'static str; 6] = ["gauss-sum", "even", "odd", "jh", "ktype", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::GaussSum => "gauss-sum",
            Theorem::Even => "even",
            Theorem::Odd => "odd",
            Theorem::Jh => "jh",
            Theorem::Ktype => "ktype",
            Theorem::All => "all",
        }
    }

    pub fn max_prime(self) -> u32 {
        match self {
            Theorem::Ktype => MAX_KTYPE_PRIME,
            _ => MAX_PRIME,
        }
    }

    fn parts(self) -> Vec<Theorem> {
        match self {
            Theorem::All => vec![Theorem::GaussSum, Theorem::Even, Theorem::Odd, Theorem::Jh, Theorem::Ktype],
            t => vec![t],
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss-sum" => Ok(Theorem::GaussSum),
            "even" => Ok(Theorem::Even),
            "odd" => Ok(Theorem::Odd),
            "jh" => Ok(Theorem::Jh),
            "ktype" => Ok(Theorem::Ktype),
            "all" => Ok(Theorem::All),
            _ => Err(Error::Usage(format!("unknown theorem {s:?}; expected one of {}", Theorem::NAMES.join(", ")))),
        }
    }
}

fn is_odd_prime(p: u32) -> bool {
    p > 2 && crate::arith::is_prime(p as u64)
}

/// `lo..hi` (inclusive) or a single prime. Both ends must be odd primes.
pub fn parse_primes(spec: &str, max: u32) -> Result<Vec<u32>> {
    let bad = || Error::Usage(format!("invalid prime range {spec:?}"));
    let (lo, hi) = match spec.split_once("..") {
        Some((a, b)) => (a.trim().parse::<u32>().map_err(|_| bad())?, b.trim().parse::<u32>().map_err(|_| bad())?),
        None => {
            let p = spec.trim().parse::<u32>().map_err(|_| bad())?;
            (p, p)
        }
    };
    for p in [lo, hi] {
        if !is_odd_prime(p) {
            return Err(Error::Usage(format!("{p} is not an odd prime")));
        }
        if p > max {
            return Err(Error::Usage(format!("{p} exceeds the supported maximum {max}")));
        }
    }
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).filter(|&p| is_odd_prime(p)).collect())
}

/// A structural check that is not a test-vector verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub family: String,
    pub p: u32,
    pub subject: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(family: &str, p: u32, subject: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { family: family.to_string(), p, subject: subject.into(), passed, detail: detail.into() }
    }
}

fn digits(chi: MultChar) -> (u32, u32) {
    chi.digits()
}

/// Representatives `nu = (a, b)` with `a > b`.
pub fn normalized_nus(ctx: &PrimeCtx) -> Vec<MultChar> {
    (0..ctx.m())
        .map(|k| MultChar::from_weight(ctx.p(), k as i64))
        .filter(|nu| {
            let (a, b) = nu.digits();
            a > b
        })
        .collect()
}

fn targets(ctx: &PrimeCtx, nu: MultChar) -> Vec<MultChar> {
    compatible_chars(&ctx.field, nu).into_iter().filter(|&c| c != nu && c != nu.frob()).collect()
}

fn make_verdict(
    rep: &KirillovRep<'_>,
    chi: MultChar,
    s: u32,
    predicted: Option<bool>,
    clause: String,
) -> Result<Verdict> {
    let ctx = rep.ctx();
    let nu = rep.nu();
    let tag = classify(&ctx.field, nu, chi)?;
    let emb = TorusEmbedding::new(ctx);
    Ok(Verdict {
        p: ctx.p(),
        nu: digits(nu),
        chi: digits(chi),
        mu_weight: s,
        kind: tag.kind,
        t_chi: tag.t,
        eps_chi: Eps::of(ctx, chi),
        eps_nu: Eps::of(ctx, nu),
        char0_nonzero: is_test_vector(rep, &emb, chi, s)?,
        modp_nonzero: modp_test_vector(ctx, nu, chi, s)?,
        predicted,
        clause,
    })
}

/// `G(chi) = p chi(theta)` for every `chi` trivial on F_p^* not factoring through the norm.
pub fn gauss_lemma_checks(ctx: &PrimeCtx) -> Vec<Check> {
    let p = ctx.p();
    (0..ctx.m())
        .map(|k| MultChar::from_weight(p, k as i64))
        .filter(|chi| chi.central_weight() == 0 && !chi.factors_through_norm())
        .map(|chi| {
            let e = ctx.field.eval_weight(chi.k(), ctx.field.theta()).expect("theta is a unit");
            let expect = ctx.cy.zeta(ctx.root_m(e) as i64).scale(p as i64);
            let ok = gauss_sum(ctx, chi) == expect;
            Check::new("gauss-lemma", p, format!("chi={}", chi.k()), ok, format!("chi(theta)=zeta_m^{e}"))
        })
        .collect()
}

fn trivial_central_clause(kind: Kind, s: u32, quad: u32, differ: bool) -> &'static str {
    match (differ, kind, s) {
        (false, _, _) => "trivial-central/eps-equal",
        (true, Kind::Type2, 0) => "trivial-central/type2/v-triv",
        (true, Kind::Type1, x) if x == quad => "trivial-central/type1/v-quad",
        _ => "trivial-central/no-claim",
    }
}

/// Trivial central character, `mu` trivial and quadratic.
pub fn trivial_central_verdicts(ctx: &PrimeCtx) -> Result<Vec<Verdict>> {
    let quad = (ctx.p() - 1) / 2;
    let nus: Vec<MultChar> = normalized_nus(ctx).into_iter().filter(|nu| nu.central_weight() == 0).collect();
    let per_nu: Vec<Result<Vec<Verdict>>> = nus
        .par_iter()
        .map(|&nu| {
            let rep = KirillovRep::new(ctx, nu)?;
            let mut out = Vec::new();
            for chi in targets(ctx, nu) {
                let kind = classify(&ctx.field, nu, chi)?.kind;
                let differ = Eps::of(ctx, chi) != Eps::of(ctx, nu);
                for s in [0, quad] {
                    let predicted = predict_trivial_central(ctx, nu, chi, s)?;
                    let clause = trivial_central_clause(kind, s, quad, differ).to_string();
                    out.push(make_verdict(&rep, chi, s, predicted, clause)?);
                }
            }
            Ok(out)
        })
        .collect();
    flatten(per_nu)
}

fn flatten<T>(parts: Vec<Result<Vec<T>>>) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// `a - b` even: the recommended `mu` for every `chi`, plus `mu_1`, `mu_2` when `t_chi` is even.
pub fn even_verdicts(ctx: &PrimeCtx) -> Result<Vec<Verdict>> {
    parity_verdicts(ctx, 0)
}

/// `a - b` odd: the recommended `mu` for every `chi`.
pub fn odd_verdicts(ctx: &PrimeCtx) -> Result<Vec<Verdict>> {
    parity_verdicts(ctx, 1)
}

fn parity_verdicts(ctx: &PrimeCtx, parity: u32) -> Result<Vec<Verdict>> {
    let p = ctx.p();
    let q = p - 1;
    let nus: Vec<MultChar> = normalized_nus(ctx)
        .into_iter()
        .filter(|nu| {
            let (a, b) = nu.digits();
            (a - b) % 2 == parity
        })
        .collect();
    let per_nu: Vec<Result<Vec<Verdict>>> = nus
        .par_iter()
        .map(|&nu| {
            let rep = KirillovRep::new(ctx, nu)?;
            let (a, b) = nu.digits();
            let mut out = Vec::new();
            for chi in targets(ctx, nu) {
                let Prediction { clause, mu } = predict(&ctx.field, nu, chi)?;
                out.push(make_verdict(&rep, chi, mu, Some(true), clause.label().to_string())?);
                let t = classify(&ctx.field, nu, chi)?.t;
                if parity == 0 && t % 2 == 0 {
                    for (name, s) in [("mu1", (a + b) / 2 % q), ("mu2", (a + b + p - 1) / 2 % q)] {
                        let label = format!("even/t-even/{name}-fails");
                        out.push(make_verdict(&rep, chi, s, Some(false), label)?);
                    }
                }
            }
            Ok(out)
        })
        .collect();
    flatten(per_nu)
}

/// Brauer equality, factor dimensions, and the torus weights carried by each factor.
pub fn jh_checks(ctx: &PrimeCtx) -> Result<Vec<Check>> {
    let p = ctx.p();
    let per_nu: Vec<Result<Vec<Check>>> = normalized_nus(ctx)
        .par_iter()
        .map(|&nu| {
            let (a, b) = nu.digits();
            let subject = format!("nu=({a},{b})");
            let rep = KirillovRep::new(ctx, nu)?;
            let mut out = Vec::new();
            match brauer_check(&rep) {
                Ok(n) => out.push(Check::new("jh-brauer", p, &subject, true, format!("{n} p-regular classes"))),
                Err(e) => out.push(Check::new("jh-brauer", p, &subject, false, e.to_string())),
            }
            let jh = jh_factors(&ctx.field, nu)?;
            let d1 = jh.v1.map_or(0, |m| m.dim());
            let d2 = jh.v2.dim();
            let dims_ok = d1 as u32 == a - b - 1 && d2 as u32 == p - (a - b) && d1 + d2 == p as usize - 1;
            out.push(Check::new("jh-dims", p, &subject, dims_ok, format!("{d1} + {d2}")));

            let mut carried: Vec<(u32, Kind)> = Vec::new();
            if let Some(m) = jh.v1 {
                carried.extend((0..=m.d).map(|j| (uv_weight(p, m, j), Kind::Type1)));
            }
            carried.extend((0..=jh.v2.d).map(|j| (uv_weight(p, jh.v2, j), Kind::Type2)));
            carried.sort();
            let mut expect: Vec<(u32, Kind)> = targets(ctx, nu)
                .into_iter()
                .map(|chi| Ok((chi.k(), classify(&ctx.field, nu, chi)?.kind)))
                .collect::<Result<_>>()?;
            expect.sort();
            out.push(Check::new("jh-weights", p, &subject, carried == expect, format!("{} weights", carried.len())));
            Ok(out)
        })
        .collect();
    flatten(per_nu)
}

/// Multiplicity one for the nonsplit and split tori.
pub fn multiplicity_checks(ctx: &PrimeCtx) -> Result<Vec<Check>> {
    let p = ctx.p();
    let per_nu: Vec<Result<Check>> = normalized_nus(ctx)
        .par_iter()
        .map(|&nu| {
            let (a, b) = nu.digits();
            let rep = KirillovRep::new(ctx, nu)?;
            let emb = TorusEmbedding::new(ctx);
            let mult = restriction_multiplicities(&rep, &emb)?;
            let wanted = targets(ctx, nu);
            let mut ok = mult.iter().all(|(chi, &m)| m == wanted.contains(chi) as u32);
            ok &= projector_is_zero(&rep, nu)? && projector_is_zero(&rep, nu.frob())?;
            for &chi in &wanted {
                ok &= !projector_is_zero(&rep, chi)?;
            }
            let split = split_multiplicities(&rep)?;
            ok &= split.len() == p as usize - 1 && split.values().all(|&m| m == 1);
            let total: u32 = mult.values().sum();
            Ok(Check::new("multiplicity", p, format!("nu=({a},{b})"), ok, format!("T total {total}, D total {}", split.values().sum::<u32>())))
        })
        .collect();
    per_nu.into_iter().collect()
}

/// Homomorphism law plus the Borel, central and elliptic-trace laws.
/// `p = 3` is checked on all pairs exactly; larger `p` on `pairs` random pairs
/// for every regular `nu` through the certified mod-l path.
pub fn model_checks(ctx: &PrimeCtx, pairs: usize, seed: u64) -> Result<Vec<Check>> {
    let p = ctx.p();
    let mut out = Vec::new();
    let nus = normalized_nus(ctx);
    if p == 3 {
        let all = crate::gl2::Gl2::all(p);
        let pairs: Vec<_> = all.iter().flat_map(|&g| all.iter().map(move |&h| (g, h))).collect();
        for &nu in &nus {
            let rep = KirillovRep::new(ctx, nu)?;
            let res = check_pairs_exact(&rep, &pairs);
            let (a, b) = nu.digits();
            out.push(Check::new(
                "homomorphism",
                p,
                format!("nu=({a},{b})"),
                res.is_ok(),
                res.map_or_else(|e| e.to_string(), |_| format!("{} pairs, exact", pairs.len())),
            ));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p as u64);
        let pairs = random_pairs(p, pairs, &mut rng);
        let regular = regular_chars(ctx);
        let checker = ModL::new(ctx);
        let res = checker.check(ctx, &regular, &pairs, None);
        out.push(Check::new(
            "homomorphism",
            p,
            "all regular nu",
            res.is_ok(),
            res.map_or_else(
                |e| e.to_string(),
                |n| format!("{} pairs x {} characters, l={}", pairs.len(), n / pairs.len().max(1), checker.ell()),
            ),
        ));
    }
    let per_nu: Vec<Result<Check>> = nus
        .par_iter()
        .map(|&nu| {
            let rep = KirillovRep::new(ctx, nu)?;
            let (a, b) = nu.digits();
            let res = check_borel_law(&rep)
                .and_then(|n| Ok((n, check_central(&rep)?, check_elliptic_traces(&rep)?)));
            Ok(Check::new(
                "model-laws",
                p,
                format!("nu=({a},{b})"),
                res.is_ok(),
                res.map_or_else(|e| e.to_string(), |(b, c, e)| format!("{b} Borel pairs, {c} scalars, {e} elliptic traces")),
            ))
        })
        .collect();
    for c in per_nu {
        out.push(c?);
    }
    Ok(out)
}

pub fn ktype_checks(p: u32) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for &s in default_levels(p) {
        let grp = FiniteLevelGroup::new(p, s)?;
        out.push(Check::new(
            "ktype-order",
            p,
            format!("s={s}"),
            grp.order() == grp.expected_order(),
            format!("{} elements, {} classes", grp.order(), grp.classes().len()),
        ));
        let js: Vec<u32> = grp.unit_chars().filter(|&j| grp.conductor(j) >= 1).collect();
        let cases: Vec<Result<_, _>> = js.par_iter().map(|&j| check_case(&grp, j)).collect();
        for case in cases {
            let case = case?;
            out.push(Check::new(
                "ktype",
                p,
                format!("s={} r={} nu={}", case.s, case.r, case.nu),
                case.passed(),
                format!(
                    "deg={} norm={} newvector={} induced-newvector={} unramified={:?} ramified={:?}",
                    case.degree,
                    case.norm,
                    case.newvector,
                    case.induced_newvector,
                    case.unramified_census,
                    case.ramified_census.units
                ),
            ));
        }
    }
    Ok(out)
}

/// Random pairs per prime in the `jh` sweep.
pub const DEFAULT_PAIRS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x6b69_7269;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Context {
    pub p: Vec<u32>,
    pub xi: Vec<u32>,
    pub sigma: Vec<(u32, u32)>,
    pub psi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checked: usize,
    pub mismatches: usize,
    pub witnesses: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub version: String,
    pub theorem: Theorem,
    pub context: Context,
    pub verdicts: Vec<Verdict>,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.summary.mismatches == 0
    }
}

fn verdict_witness(v: &Verdict) -> String {
    format!(
        "p={} nu={:?} chi={:?} mu={} [{}] predicted={:?} char0={} modp={}",
        v.p, v.nu, v.chi, v.mu_weight, v.clause, v.predicted, v.char0_nonzero, v.modp_nonzero
    )
}

fn summarize(verdicts: &[Verdict], checks: &[Check]) -> Summary {
    let mut witnesses: Vec<String> = verdicts.iter().filter(|v| v.mismatch()).map(verdict_witness).collect();
    witnesses.extend(
        checks.iter().filter(|c| !c.passed).map(|c| format!("{} p={} {}: {}", c.family, c.p, c.subject, c.detail)),
    );
    Summary {
        checked: verdicts.iter().filter(|v| v.predicted.is_some()).count() + checks.len(),
        mismatches: witnesses.len(),
        witnesses,
    }
}

/// Run every part of `theorem` over `primes`; output order is fixed by
/// `(p, part, nu, chi, mu)` whatever the thread count.
pub fn run(theorem: Theorem, primes: &[u32]) -> Result<SweepReport> {
    let max = theorem.max_prime();
    if primes.is_empty() {
        return Err(Error::Usage("no primes given".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_odd_prime(p) || p > max) {
        return Err(Error::Usage(format!("prime {p} is not supported for {theorem}")));
    }
    let mut verdicts = Vec::new();
    let mut checks = Vec::new();
    let mut context = Context { p: Vec::new(), xi: Vec::new(), sigma: Vec::new(), psi: PSI_CONVENTION.to_string() };
    for &p in primes {
        let ctx = PrimeCtx::new(p as u64)?;
        context.p.push(p);
        context.xi.push(ctx.field.xi());
        let s = ctx.field.sigma();
        context.sigma.push((s.a, s.b));
        for part in theorem.parts() {
            match part {
                Theorem::GaussSum => {
                    checks.extend(gauss_lemma_checks(&ctx));
                    verdicts.extend(trivial_central_verdicts(&ctx)?);
                }
                Theorem::Even => verdicts.extend(even_verdicts(&ctx)?),
                Theorem::Odd => verdicts.extend(odd_verdicts(&ctx)?),
                Theorem::Jh => {
                    checks.extend(model_checks(&ctx, DEFAULT_PAIRS, DEFAULT_SEED)?);
                    checks.extend(jh_checks(&ctx)?);
                    checks.extend(multiplicity_checks(&ctx)?);
                }
                Theorem::Ktype if p <= MAX_KTYPE_PRIME => checks.extend(ktype_checks(p)?),
                Theorem::Ktype | Theorem::All => {}
            }
        }
    }
    let summary = summarize(&verdicts, &checks);
    Ok(SweepReport { version: crate::VERSION.to_string(), theorem, context, verdicts, checks, summary })
}

/// Everything `query` prints for one `(p, nu, chi)` and optional `mu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QueryResult {
    pub p: u32,
    pub nu: (u32, u32),
    pub chi: (u32, u32),
    #[serde(rename = "type")]
    pub kind: Kind,
    pub t_chi: u32,
    pub eps_chi: Eps,
    pub eps_nu: Eps,
    pub predicted_mu: u32,
    pub clause: String,
    pub trivial_central: Option<Option<bool>>,
    pub mu: Option<MuResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MuResult {
    pub mu_weight: u32,
    pub char0_nonzero: bool,
    pub modp_nonzero: bool,
    /// The F_{p^2} coefficient `(a, b)` of the chi-monomial in the mu-monomial, when they share a factor.
    pub component: Option<(u32, u32)>,
}

fn mu_name(p: u32, s: u32) -> String {
    match s {
        0 => "0 (trivial)".into(),
        s if s == (p - 1) / 2 => format!("{s} (quadratic)"),
        s => s.to_string(),
    }
}

impl fmt::Display for QueryResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {}, nu = {:?}, chi = {:?}", self.p, self.nu, self.chi)?;
        writeln!(f, "type: {:?}, t_chi = {}", self.kind, self.t_chi)?;
        writeln!(f, "eps(chi) = {}, eps(nu) = {}", self.eps_chi.to_text(), self.eps_nu.to_text())?;
        writeln!(f, "predicted mu = {} [{}]", mu_name(self.p, self.predicted_mu), self.clause)?;
        if let Some(tc) = self.trivial_central {
            let txt = match tc {
                Some(true) => "v_triv/v_quad claim: test vector",
                Some(false) => "v_triv/v_quad claim: not a test vector",
                None => "v_triv/v_quad claim: none",
            };
            writeln!(f, "{txt}")?;
        }
        if let Some(m) = &self.mu {
            writeln!(f, "mu = {}: char0 {}, modp {}", mu_name(self.p, m.mu_weight), m.char0_nonzero, m.modp_nonzero)?;
            if let Some((a, b)) = m.component {
                writeln!(f, "chi-component = {a} + {b} theta")?;
            }
        }
        Ok(())
    }
}

pub fn query(p: u32, nu: (u32, u32), chi: (u32, u32), mu: Option<u32>, monomials: Monomials) -> Result<QueryResult> {
    if !is_odd_prime(p) || p > MAX_PRIME {
        return Err(Error::Usage(format!("{p} is not a supported odd prime")));
    }
    let ctx = PrimeCtx::new(p as u64)?;
    let nu0 = char_from_digits(&ctx.field, nu.0, nu.1)?;
    let nu = normalize(nu0)?;
    let chi = char_from_digits(&ctx.field, chi.0, chi.1)?;
    if chi == nu || chi == nu.frob() {
        return Err(Error::Usage("excluded character: chi is nu or nu^p".into()));
    }
    let tag = classify(&ctx.field, nu, chi)?;
    let pred = predict_with(&ctx.field, nu, chi, monomials)?;
    let trivial_central = mu
        .filter(|_| nu.central_weight() == 0)
        .map(|s| predict_trivial_central(&ctx, nu, chi, s % (p - 1)))
        .transpose()?;
    let mu = match mu {
        Some(s) => {
            let s = s % (p - 1);
            let rep = KirillovRep::new(&ctx, nu)?;
            let emb = TorusEmbedding::new(&ctx);
            let jh = jh_factors(&ctx.field, nu)?;
            let component = crate::modp::split_monomial(p, &jh, s)
                .map(|(m, i)| crate::modp::chi_component_of_split_monomial(&ctx, m, i, chi))
                .transpose()?
                .filter(|c| !c.is_zero())
                .map(|c| (c.a, c.b));
            Some(MuResult {
                mu_weight: s,
                char0_nonzero: is_test_vector(&rep, &emb, chi, s)?,
                modp_nonzero: modp_test_vector(&ctx, nu, chi, s)?,
                component,
            })
        }
        None => None,
    };
    Ok(QueryResult {
        p,
        nu: nu.digits(),
        chi: chi.digits(),
        kind: tag.kind,
        t_chi: tag.t,
        eps_chi: Eps::of(&ctx, chi),
        eps_nu: Eps::of(&ctx, nu),
        predicted_mu: pred.mu,
        clause: pred.clause.label().to_string(),
        trivial_central,
        mu,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_ranges() {
        assert_eq!(parse_primes("3..13", 31).unwrap(), vec![3, 5, 7, 11, 13]);
        assert_eq!(parse_primes("7", 31).unwrap(), vec![7]);
        assert!(parse_primes("4..4", 31).is_err());
        assert!(parse_primes("3..9", 31).is_err());
        assert!(parse_primes("3..37", 31).is_err());
        assert!(parse_primes("3..11", 7).is_err());
        assert!(parse_primes("x", 31).is_err());
    }

    #[test]
    fn theorem_names_round_trip() {
        for name in Theorem::NAMES {
            assert_eq!(name.parse::<Theorem>().unwrap().name(), name);
        }
        assert!("gauss".parse::<Theorem>().is_err());
    }

    #[test]
    fn query_examples() {
        let q = query(5, (3, 1), (2, 2), None, Monomials::Printed).unwrap();
        assert_eq!((q.kind, q.t_chi, q.predicted_mu), (Kind::Type1, 1, 2));
        assert!(matches!(query(5, (3, 1), (3, 1), None, Monomials::Printed), Err(Error::Usage(_))));
        let q = query(5, (3, 1), (0, 0), Some(0), Monomials::Printed).unwrap();
        assert!(!q.mu.unwrap().char0_nonzero);
    }

    #[test]
    fn small_sweeps_pass() {
        let r = run(Theorem::All, &[3, 5]).unwrap();
        assert!(r.passed(), "{:?}", r.summary.witnesses);
        assert!(r.summary.checked > 0);
    }
}
