//! Per-prime context bundling the field tables and the ambient ring
//! Z[zeta_n] with `n = p (p^2 - 1)`.
//!
//! Roots of unity are written additively as exponents of `zeta_n`:
//! `zeta_{p^2-1} = zeta_n^p` and `zeta_p = zeta_n^{p^2-1}`.

use crate::cyclo::Cyclo;
use crate::ffchar::{FieldCtx, FieldError};

#[derive(Debug, Clone)]
pub struct PrimeCtx {
    pub field: FieldCtx,
    pub cy: Cyclo,
}

impl PrimeCtx {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        let field = FieldCtx::new(p)?;
        let n = (p * (p * p - 1)) as usize;
        let cy = Cyclo::new(n).expect("n is positive");
        Ok(PrimeCtx { field, cy })
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// `p^2 - 1`.
    pub fn m(&self) -> u32 {
        self.field.order()
    }

    pub fn n(&self) -> u32 {
        self.cy.n() as u32
    }

    /// Exponent of `zeta_n` for `zeta_{p^2-1}^e`.
    #[inline]
    pub fn root_m(&self, e: u32) -> u32 {
        ((e as u64 % self.m() as u64) * self.p() as u64) as u32
    }

    /// Exponent of `zeta_n` for `psi(x) = zeta_p^x`.
    #[inline]
    pub fn root_p(&self, x: u32) -> u32 {
        (x % self.p()) * self.m()
    }

    #[inline]
    pub fn add_exp(&self, e: u32, f: u32) -> u32 {
        let s = e + f;
        if s >= self.n() {
            s - self.n()
        } else {
            s
        }
    }

    #[inline]
    pub fn neg_exp(&self, e: u32) -> u32 {
        if e == 0 {
            0
        } else {
            self.n() - e
        }
    }
}
