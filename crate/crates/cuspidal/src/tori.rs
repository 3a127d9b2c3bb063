//! The nonsplit torus `T = F_{p^2}^*` inside GL2(F_p), eigenvectors of the
//! split torus, torus projections and the characteristic-zero test-vector
//! predicate.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ctx::PrimeCtx;
use crate::cyclo::{CycInt, Terms};
use crate::ffchar::{Fq2, Kind, MultChar};
use crate::gl2::Gl2;
use crate::kirillov::{KirillovError, KirillovRep, ModelVector, RhoMat};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToriError {
    #[error("character of weight {chi} does not match the central character of nu (weight {nu})")]
    Incompatible { chi: u32, nu: u32 },
    #[error("character of weight {0} is nu or nu^p")]
    Excluded(u32),
    #[error("central character is nontrivial")]
    NontrivialCentral,
    #[error("vector is not an eigenvector of rho(x_xi)")]
    NotAnEigenvector,
    #[error("vector has no coordinate that is a root of unity")]
    NoUnitCoordinate,
    #[error("multiplicity of weight {0} is not an integer")]
    NonIntegral(u32),
    #[error(transparent)]
    Model(#[from] KirillovError),
}

/// `a + b theta -> (a b; b xi a)`.
pub fn embed(ctx: &PrimeCtx, t: Fq2) -> Gl2 {
    let p = ctx.p();
    Gl2 { a: t.a, b: t.b, c: ctx.field.fp_mul(t.b, ctx.field.xi()), d: t.a % p }
}

/// The embedding `F_{p^2}^* -> GL2(F_p)` for a fixed prime.
#[derive(Debug, Clone, Copy)]
pub struct TorusEmbedding<'a> {
    ctx: &'a PrimeCtx,
}

impl<'a> TorusEmbedding<'a> {
    pub fn new(ctx: &'a PrimeCtx) -> Self {
        TorusEmbedding { ctx }
    }

    pub fn map(&self, t: Fq2) -> Gl2 {
        embed(self.ctx, t)
    }

    /// Representatives of `T / Z`: `1` and `x + theta`.
    pub fn coset_reps(&self) -> Vec<Fq2> {
        std::iter::once(Fq2::ONE).chain((0..self.ctx.p()).map(|x| Fq2::new(x, 1))).collect()
    }

    /// `x_xi = (0 1; xi 0)`, the image of `theta`.
    pub fn x_xi(&self) -> Gl2 {
        self.map(self.ctx.field.theta())
    }
}

/// The function `x -> mu_s(x)`, an eigenvector of `diag(a, 1)` with eigenvalue `mu_s(a)`.
pub fn split_eigenvector(rep: &KirillovRep<'_>, s: u32) -> ModelVector {
    let ctx = rep.ctx();
    let exps: Vec<u32> =
        (1..ctx.p()).map(|x| ctx.root_m(ctx.field.eval_split(s, x).expect("x is a unit"))).collect();
    crate::kirillov::root_vector(ctx, &exps)
}

fn check_compatible(rep: &KirillovRep<'_>, chi: MultChar) -> Result<(), ToriError> {
    if chi.central_weight() != rep.nu().central_weight() {
        return Err(ToriError::Incompatible { chi: chi.k(), nu: rep.nu().k() });
    }
    Ok(())
}

/// `chi(t)^{-1} rho(t)` for `t` over `T / Z`, with the scalar identity lifted to
/// denominator `p`.
struct Projector<'r, 'a> {
    rep: &'r KirillovRep<'a>,
    mats: Vec<(RhoMat, u32, i64)>,
}

impl<'r, 'a> Projector<'r, 'a> {
    fn new(rep: &'r KirillovRep<'a>, chi: MultChar) -> Result<Self, ToriError> {
        check_compatible(rep, chi)?;
        let ctx = rep.ctx();
        let emb = TorusEmbedding::new(ctx);
        let p = ctx.p() as i64;
        let mut mats = Vec::new();
        for t in emb.coset_reps() {
            let m = rep.rho(emb.map(t))?;
            let extra = ctx.neg_exp(ctx.root_m(ctx.field.eval_weight(chi.k(), t).expect("unit")));
            let mult = p.pow(1 - m.den);
            mats.push((m, extra, mult));
        }
        Ok(Projector { rep, mats })
    }

    /// Coordinate `y` (index) of `p * sum_{t in T/Z} chi(t)^{-1} rho(t) v`.
    fn coord(&self, acc: &mut crate::cyclo::Acc<'_>, vt: &[Terms], y: usize) -> CycInt {
        for (m, extra, mult) in &self.mats {
            for (x, tx) in vt.iter().enumerate() {
                if !tx.is_empty() {
                    self.rep.accumulate(acc, m.get(y, x), tx, *extra, *mult);
                }
            }
        }
        acc.take()
    }
}

fn vector_terms(rep: &KirillovRep<'_>, v: &ModelVector) -> Vec<Terms> {
    v.coeffs.iter().map(|c| rep.ctx().cy.terms(c)).collect()
}

/// `P_chi v` with `P_chi = sum_{t in F_{p^2}^*} chi(t)^{-1} rho(t)`, exactly.
pub fn chi_projection(
    rep: &KirillovRep<'_>,
    _emb: &TorusEmbedding<'_>,
    chi: MultChar,
    v: &ModelVector,
) -> Result<ModelVector, ToriError> {
    let proj = Projector::new(rep, chi)?;
    let vt = vector_terms(rep, v);
    let mut acc = rep.ctx().cy.acc();
    let central = rep.ctx().p() as i64 - 1;
    let coeffs = (0..rep.dim()).map(|y| proj.coord(&mut acc, &vt, y).scale(central)).collect();
    Ok(ModelVector { den: v.den + 1, coeffs })
}

/// Whether `P_chi v != 0`, stopping at the first nonzero coordinate.
pub fn projection_nonzero(rep: &KirillovRep<'_>, chi: MultChar, v: &ModelVector) -> Result<bool, ToriError> {
    let proj = Projector::new(rep, chi)?;
    let vt = vector_terms(rep, v);
    let mut acc = rep.ctx().cy.acc();
    Ok((0..rep.dim()).any(|y| !proj.coord(&mut acc, &vt, y).is_zero()))
}

/// Whether the operator `P_chi` vanishes.
pub fn projector_is_zero(rep: &KirillovRep<'_>, chi: MultChar) -> Result<bool, ToriError> {
    let ctx = rep.ctx();
    for x in 1..ctx.p() {
        if projection_nonzero(rep, chi, &crate::kirillov::delta(ctx, x))? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_test_vector(rep: &KirillovRep<'_>, _emb: &TorusEmbedding<'_>, chi: MultChar, s: u32) -> Result<bool, ToriError> {
    let nu = rep.nu();
    if chi == nu || chi == nu.frob() {
        return Err(ToriError::Excluded(chi.k()));
    }
    projection_nonzero(rep, chi, &split_eigenvector(rep, s))
}

/// Eigenvalue of `rho(x_xi)` on `v`, for trivial central character.
pub fn xi_weyl_eigenvalue(rep: &KirillovRep<'_>, v: &ModelVector) -> Result<CycInt, ToriError> {
    if !rep.omega_is_trivial() {
        return Err(ToriError::NontrivialCentral);
    }
    let ctx = rep.ctx();
    let cy = &ctx.cy;
    let emb = TorusEmbedding::new(ctx);
    let m = rep.rho(emb.x_xi())?;
    let w = rep.apply(&m, v);
    let (i, (sign, e)) = v
        .coeffs
        .iter()
        .enumerate()
        .find_map(|(i, c)| cy.as_root(c).map(|r| (i, r)))
        .ok_or(ToriError::NoUnitCoordinate)?;
    // Lambda = p^{m.den} * eigenvalue
    let lambda = cy.shift(&w.coeffs[i], -(e as i64)).scale(sign);
    for (wj, vj) in w.coeffs.iter().zip(&v.coeffs) {
        if *wj != cy.mul(&lambda, vj) {
            return Err(ToriError::NotAnEigenvector);
        }
    }
    lambda.div_exact((ctx.p() as i64).pow(m.den)).map_err(|_| ToriError::NotAnEigenvector)
}

/// Multiplicity of every character of `T` in `rho|T`, from the character inner product.
pub fn restriction_multiplicities(
    rep: &KirillovRep<'_>,
    emb: &TorusEmbedding<'_>,
) -> Result<BTreeMap<MultChar, u32>, ToriError> {
    let ctx = rep.ctx();
    let p = ctx.p();
    let reps = emb.coset_reps();
    let traces: Vec<CycInt> = reps.iter().map(|&t| rep.trace(emb.map(t))).collect::<Result<_, _>>()?;
    let mut out = BTreeMap::new();
    for k in 0..ctx.m() {
        let chi = MultChar::from_weight(p, k as i64);
        if chi.central_weight() != rep.nu().central_weight() {
            out.insert(chi, 0);
            continue;
        }
        let mut acc = ctx.cy.acc();
        for (t, tr) in reps.iter().zip(&traces) {
            let e = ctx.neg_exp(ctx.root_m(ctx.field.eval_weight(k, *t).expect("unit")));
            acc.add_cyc(tr, e, 1);
        }
        // sum over T is (p - 1) times the sum over T / Z; |T| = (p - 1)(p + 1)
        let s = acc.reduce();
        let mult = s
            .as_int()
            .filter(|v| v % (p as i64 + 1) == 0 && *v >= 0)
            .ok_or(ToriError::NonIntegral(k))?;
        out.insert(chi, (mult / (p as i64 + 1)) as u32);
    }
    Ok(out)
}

/// Multiplicity in `rho|D` of the character `diag(a, d) -> mu_s(a/d) omega(d)`, for each `s`.
pub fn split_multiplicities(rep: &KirillovRep<'_>) -> Result<BTreeMap<u32, u32>, ToriError> {
    let ctx = rep.ctx();
    let f = &ctx.field;
    let p = ctx.p();
    let mut traces = Vec::new();
    for a in 1..p {
        for d in 1..p {
            let m = rep.rho_borel(a, 0, d)?;
            traces.push((a, d, rep.trace_scaled(&m)));
        }
    }
    let mut out = BTreeMap::new();
    for s in 0..p - 1 {
        let mut acc = ctx.cy.acc();
        for (a, d, tr) in &traces {
            let ratio = f.fp_mul(*a, f.fp_inv(*d));
            let val = ctx.add_exp(ctx.root_m(f.eval_split(s, ratio).expect("unit")), rep.omega_exp(*d));
            acc.add_cyc(tr, ctx.neg_exp(val), 1);
        }
        let total = acc.reduce();
        let q = (p as i64 - 1).pow(2);
        let mult = total.as_int().filter(|v| v % q == 0 && *v >= 0).ok_or(ToriError::NonIntegral(s))?;
        out.insert(s, (mult / q) as u32);
    }
    Ok(out)
}

/// A sign `eps = chi(theta)`: `+-1` when real, otherwise an exponent of `zeta_{p^2-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Eps {
    Real(i8),
    Root(u32),
}

impl Eps {
    pub fn of(ctx: &PrimeCtx, chi: MultChar) -> Eps {
        let e = ctx.field.eval_weight(chi.k(), ctx.field.theta()).expect("theta is a unit");
        match e {
            0 => Eps::Real(1),
            e if e * 2 == ctx.m() => Eps::Real(-1),
            e => Eps::Root(e),
        }
    }

    pub fn to_text(self) -> String {
        match self {
            Eps::Real(s) => s.to_string(),
            Eps::Root(e) => format!("zeta^{e}"),
        }
    }
}

impl Serialize for Eps {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Eps::Real(v) => s.serialize_i8(*v),
            Eps::Root(e) => {
                use serde::ser::SerializeMap;
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("zeta_exp", e)?;
                m.end()
            }
        }
    }
}

/// One `(p, nu, chi, mu)` record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub p: u32,
    pub nu: (u32, u32),
    pub chi: (u32, u32),
    pub mu_weight: u32,
    #[serde(rename = "type")]
    pub kind: Kind,
    pub t_chi: u32,
    pub eps_chi: Eps,
    pub eps_nu: Eps,
    pub char0_nonzero: bool,
    pub modp_nonzero: bool,
    /// Predicted test-vector status; `None` where no statement applies.
    pub predicted: Option<bool>,
    pub clause: String,
}

impl Verdict {
    /// A positive prediction requires a nonzero projection in both
    /// characteristics; a negative one requires it to vanish in
    /// characteristic zero. `modp_nonzero` without `char0_nonzero` is always wrong.
    pub fn mismatch(&self) -> bool {
        let law = self.modp_nonzero && !self.char0_nonzero;
        law || match self.predicted {
            Some(true) => !(self.char0_nonzero && self.modp_nonzero),
            Some(false) => self.char0_nonzero,
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffchar::char_from_digits;

    #[test]
    fn embedding_is_multiplicative() {
        let ctx = PrimeCtx::new(7).unwrap();
        let f = &ctx.field;
        for &x in f.units().iter().step_by(5) {
            for &y in f.units().iter().step_by(3) {
                assert_eq!(embed(&ctx, f.mul(x, y)), embed(&ctx, x).mul(embed(&ctx, y), 7));
                assert_eq!(embed(&ctx, x).mul(embed(&ctx, y), 7), embed(&ctx, y).mul(embed(&ctx, x), 7));
            }
            let g = embed(&ctx, x);
            assert_eq!(g.c == 0 && g.b == 0, x.b == 0);
        }
    }

    #[test]
    fn projection_matches_full_sum() {
        let ctx = PrimeCtx::new(5).unwrap();
        let f = &ctx.field;
        let nu = char_from_digits(f, 2, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        let emb = TorusEmbedding::new(&ctx);
        let v = split_eigenvector(&rep, 1);
        for chi in crate::ffchar::compatible_chars(f, nu) {
            let fast = chi_projection(&rep, &emb, chi, &v).unwrap();
            let mut acc = vec![ctx.cy.zero(); 4];
            for &t in f.units() {
                let m = rep.rho(emb.map(t)).unwrap();
                let w = rep.apply(&m, &v);
                let lift = (5i64).pow(1 - w.den + v.den);
                let e = -(ctx.root_m(f.eval_weight(chi.k(), t).unwrap()) as i64);
                for (a, c) in acc.iter_mut().zip(&w.coeffs) {
                    *a += &ctx.cy.shift(c, e).scale(lift);
                }
            }
            assert_eq!(fast.coeffs, acc);
        }
    }

    #[test]
    fn projections_are_orthogonal_and_complete() {
        let ctx = PrimeCtx::new(5).unwrap();
        let f = &ctx.field;
        let nu = char_from_digits(f, 3, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        let emb = TorusEmbedding::new(&ctx);
        let v = crate::kirillov::delta(&ctx, 2);
        let chis = crate::ffchar::compatible_chars(f, nu);
        let mut total = vec![ctx.cy.zero(); 4];
        for &chi in &chis {
            let w = chi_projection(&rep, &emb, chi, &v).unwrap();
            for (a, c) in total.iter_mut().zip(&w.coeffs) {
                *a += c;
            }
            if chi == nu || chi == nu.frob() {
                assert!(w.is_zero());
            }
            for &other in &chis {
                if other != chi {
                    assert!(chi_projection(&rep, &emb, other, &w).unwrap().is_zero());
                }
            }
        }
        // sum_chi P_chi = (p^2 - 1) I, carried at denominator p
        let expect = v.scale(24 * 5);
        assert_eq!(total, expect.coeffs);
    }

    #[test]
    fn examples_p5() {
        let ctx = PrimeCtx::new(5).unwrap();
        let nu = char_from_digits(&ctx.field, 3, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        let emb = TorusEmbedding::new(&ctx);
        let triv = MultChar::from_weight(5, 0);
        let quad = MultChar::from_weight(5, 12);
        assert!(!is_test_vector(&rep, &emb, triv, 0).unwrap());
        assert!(is_test_vector(&rep, &emb, quad, 2).unwrap());
        assert_eq!(is_test_vector(&rep, &emb, nu, 0), Err(ToriError::Excluded(8)));
        assert!(matches!(
            is_test_vector(&rep, &emb, MultChar::from_weight(5, 1), 0),
            Err(ToriError::Incompatible { .. })
        ));
    }

    #[test]
    fn multiplicities() {
        let ctx = PrimeCtx::new(7).unwrap();
        let nu = char_from_digits(&ctx.field, 4, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        let emb = TorusEmbedding::new(&ctx);
        let mult = restriction_multiplicities(&rep, &emb).unwrap();
        assert_eq!(mult.values().sum::<u32>(), 6);
        assert_eq!(mult[&nu], 0);
        assert_eq!(mult[&nu.frob()], 0);
        assert_eq!(mult[&MultChar::from_weight(7, 1)], 0);
        let split = split_multiplicities(&rep).unwrap();
        assert!(split.values().all(|&m| m == 1));
    }

    #[test]
    fn eigenvalue_errors() {
        let ctx = PrimeCtx::new(5).unwrap();
        let nu = char_from_digits(&ctx.field, 2, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        let v = split_eigenvector(&rep, 0);
        assert_eq!(xi_weyl_eigenvalue(&rep, &v), Err(ToriError::NontrivialCentral));
        let nu = char_from_digits(&ctx.field, 3, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        let generic = crate::kirillov::delta(&ctx, 1);
        assert_eq!(xi_weyl_eigenvalue(&rep, &generic), Err(ToriError::NotAnEigenvector));
    }

    #[test]
    fn verdict_mismatch_rules() {
        let base = Verdict {
            p: 5,
            nu: (3, 1),
            chi: (0, 0),
            mu_weight: 0,
            kind: Kind::Type2,
            t_chi: 4,
            eps_chi: Eps::Real(1),
            eps_nu: Eps::Real(1),
            char0_nonzero: false,
            modp_nonzero: false,
            predicted: Some(false),
            clause: String::new(),
        };
        assert!(!base.mismatch());
        assert!(Verdict { char0_nonzero: true, ..base.clone() }.mismatch());
        assert!(Verdict { predicted: Some(true), char0_nonzero: true, ..base.clone() }.mismatch());
        assert!(!Verdict { predicted: Some(true), char0_nonzero: true, modp_nonzero: true, ..base.clone() }.mismatch());
        assert!(Verdict { predicted: None, modp_nonzero: true, ..base.clone() }.mismatch());
        assert!(!Verdict { predicted: None, char0_nonzero: true, ..base }.mismatch());
    }
}
