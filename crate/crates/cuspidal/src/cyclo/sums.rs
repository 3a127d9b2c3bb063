//! Character sums over F_{p^2}: the additive character, Gauss sums, the sign
//! `eps_p` and the Bessel numerators `p j(u)`.

use thiserror::Error;

use super::ring::{CycInt, CycloError};
use crate::ctx::PrimeCtx;
use crate::ffchar::{Fq2, MultChar};

/// `(exponent of zeta_n, coefficient)` pairs, not necessarily reduced.
pub type Terms = Vec<(u32, i64)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SumError {
    #[error("character of weight {0} is nontrivial on F_p^*")]
    NontrivialCentral(u32),
    #[error("Gauss sum not divisible by p: {0}")]
    NotDivisible(#[from] CycloError),
    #[error("Bessel kernel is only defined on F_p^*")]
    ZeroArgument,
    #[error("character of weight {0} equals its conjugate")]
    Degenerate(u32),
}

/// `psi(x) = zeta_p^x`.
pub fn psi(ctx: &PrimeCtx, x: u32) -> CycInt {
    ctx.cy.zeta(ctx.root_p(x) as i64)
}

/// `G(chi) = sum_{u != 0} chi(u) psi(tr u)`.
pub fn gauss_sum(ctx: &PrimeCtx, chi: MultChar) -> CycInt {
    let f = &ctx.field;
    let mut acc = ctx.cy.acc();
    for (l, &u) in f.units().iter().enumerate() {
        let e = ctx.add_exp(ctx.root_m((chi.k() as u64 * l as u64 % ctx.m() as u64) as u32), ctx.root_p(f.trace(u)));
        acc.add(e, 1);
    }
    acc.reduce()
}

#[derive(Debug, Clone)]
pub struct GaussData {
    pub chi: MultChar,
    pub g: CycInt,
    /// `eps_p(chi)`, present when `chi` is trivial on F_p^*.
    pub eps: Option<CycInt>,
}

pub fn gauss_data(ctx: &PrimeCtx, chi: MultChar) -> Result<GaussData, SumError> {
    let g = gauss_sum(ctx, chi);
    let eps = match epsilon_p(ctx, chi) {
        Ok(e) => Some(e),
        Err(SumError::NontrivialCentral(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(GaussData { chi, g, eps })
}

/// `eps_p(chi) = G(chi) / p` for `chi` trivial on F_p^* but not through the
/// norm; `chi(theta)` for the two characters that do factor through the norm.
pub fn epsilon_p(ctx: &PrimeCtx, chi: MultChar) -> Result<CycInt, SumError> {
    if chi.central_weight() != 0 {
        return Err(SumError::NontrivialCentral(chi.k()));
    }
    if chi.factors_through_norm() {
        let e = ctx.field.eval_weight(chi.k(), ctx.field.theta()).expect("theta is a unit");
        return Ok(ctx.cy.zeta(ctx.root_m(e) as i64));
    }
    Ok(gauss_sum(ctx, chi).div_exact(ctx.p() as i64)?)
}

/// Terms of `p j(u) = -sum_{N x = u} psi(tr x) nu(x)`.
pub fn bessel_terms(ctx: &PrimeCtx, nu: MultChar, u: u32) -> Result<Terms, SumError> {
    let f = &ctx.field;
    if u.is_multiple_of(ctx.p()) {
        return Err(SumError::ZeroArgument);
    }
    if !nu.is_regular() {
        return Err(SumError::Degenerate(nu.k()));
    }
    Ok(f.norm_fibre(u)
        .into_iter()
        .map(|x| {
            let chi = f.eval_weight(nu.k(), x).expect("fibre avoids zero");
            (ctx.add_exp(ctx.root_p(f.trace(x)), ctx.root_m(chi)), -1)
        })
        .collect())
}

pub fn bessel_num(ctx: &PrimeCtx, nu: MultChar, u: u32) -> Result<CycInt, SumError> {
    Ok(ctx.cy.from_terms(&bessel_terms(ctx, nu, u)?))
}

/// Image under the fixed ring map Z[zeta_n] -> F_{p^2}, `zeta_{p^2-1} -> sigma`,
/// `zeta_p -> 1`.
pub fn reduce_to_fq2(ctx: &PrimeCtx, x: &CycInt) -> Fq2 {
    let f = &ctx.field;
    let (p, m) = (ctx.p() as u64, ctx.m() as u64);
    let mut out = Fq2::ZERO;
    for (&c, &e) in x.coeffs().iter().zip(ctx.cy.basis_exponents()) {
        if c != 0 {
            let beta = e as u64 * p % m;
            let c = ctx.field.fp(c);
            out = f.add(out, f.scale(c, f.exp(beta)));
        }
    }
    out
}
