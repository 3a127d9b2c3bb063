//! Exact arithmetic in Z[zeta_n].
//!
//! Elements are stored in the tensor basis: writing `n = prod N_i` with
//! `N_i = q_i^{e_i}`, the basis is `prod_i zeta_{N_i}^{j_i}` with
//! `0 <= j_i < phi(N_i)` and `zeta_{N_i} = zeta_n^{n / N_i}`. This is a Z-basis of
//! Z[zeta_n], so an element is zero exactly when its coefficient vector is.
//!
//! Sums of many roots of unity are collected in an [`Acc`] indexed by the
//! exponent of `zeta_n` and reduced to the basis in `O(n * #primes)`.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::arith::{euler_phi, factorize, inv_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("coefficient {coeff} at basis index {index} is not divisible by {divisor}")]
    NotDivisible { index: usize, coeff: i64, divisor: i64 },
    #[error("cyclotomic order must be positive")]
    ZeroOrder,
}

#[derive(Debug, Clone)]
struct Axis {
    q: usize,
    big_n: usize,
    stride: usize,
}

/// Tables for Z[zeta_n]; immutable after construction.
#[derive(Debug, Clone)]
pub struct Cyclo {
    n: usize,
    axes: Vec<Axis>,
    /// Tensor slot of `zeta_n^e`.
    slot: Vec<u32>,
    /// Tensor slot of each basis element.
    basis_slot: Vec<u32>,
    /// Exponent of `zeta_n` of each basis element.
    basis_exp: Vec<u32>,
}

impl Cyclo {
    pub fn new(n: usize) -> Result<Self, CycloError> {
        if n == 0 {
            return Err(CycloError::ZeroOrder);
        }
        let mut axes: Vec<Axis> = factorize(n as u64)
            .into_iter()
            .map(|(q, e)| Axis { q: q as usize, big_n: q.pow(e) as usize, stride: 0 })
            .collect();
        let mut stride = 1;
        for ax in axes.iter_mut().rev() {
            ax.stride = stride;
            stride *= ax.big_n;
        }
        let mut slot = vec![0u32; n];
        for (e, s) in slot.iter_mut().enumerate() {
            let mut idx = 0;
            for ax in &axes {
                let m = n / ax.big_n;
                let minv = inv_mod(m as u64, ax.big_n as u64).unwrap_or(0) as usize;
                idx += (e % ax.big_n) * minv % ax.big_n * ax.stride;
            }
            *s = idx as u32;
        }
        let mut exp_of_slot = vec![0u32; n];
        for (e, &s) in slot.iter().enumerate() {
            exp_of_slot[s as usize] = e as u32;
        }
        let mut basis_slot = Vec::with_capacity(euler_phi(n as u64) as usize);
        for s in 0..n {
            let keep = axes.iter().all(|ax| {
                let c = s / ax.stride % ax.big_n;
                c < ax.big_n - ax.big_n / ax.q
            });
            if keep {
                basis_slot.push(s as u32);
            }
        }
        let basis_exp = basis_slot.iter().map(|&s| exp_of_slot[s as usize]).collect();
        Ok(Cyclo { n, axes, slot, basis_slot, basis_exp })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Rank of Z[zeta_n], `phi(n)`.
    pub fn dim(&self) -> usize {
        self.basis_slot.len()
    }

    /// Exponent of `zeta_n` carried by each basis element.
    pub fn basis_exponents(&self) -> &[u32] {
        &self.basis_exp
    }

    pub fn zero(&self) -> CycInt {
        CycInt { c: vec![0; self.dim()] }
    }

    pub fn from_int(&self, v: i64) -> CycInt {
        let mut x = self.zero();
        x.c[0] = v;
        x
    }

    pub fn one(&self) -> CycInt {
        self.from_int(1)
    }

    /// `zeta_n^e` for any integer `e`.
    pub fn zeta(&self, e: i64) -> CycInt {
        let mut acc = self.acc();
        acc.add(self.wrap(e), 1);
        acc.reduce()
    }

    pub fn wrap(&self, e: i64) -> u32 {
        e.rem_euclid(self.n as i64) as u32
    }

    pub fn acc(&self) -> Acc<'_> {
        Acc { cy: self, buf: vec![0; self.n] }
    }

    /// Reduce a list of `(exponent, coefficient)` terms.
    pub fn from_terms(&self, terms: &[(u32, i64)]) -> CycInt {
        let mut acc = self.acc();
        acc.add_terms(terms, 0, 1);
        acc.reduce()
    }

    /// Nonzero coefficients as exponent terms (inverse of [`Cyclo::from_terms`]).
    pub fn terms(&self, x: &CycInt) -> Vec<(u32, i64)> {
        x.c.iter()
            .zip(&self.basis_exp)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, &e)| (e, c))
            .collect()
    }

    pub fn mul(&self, x: &CycInt, y: &CycInt) -> CycInt {
        let tx = self.terms(x);
        let ty = self.terms(y);
        let mut acc = self.acc();
        for &(ex, cx) in &tx {
            for &(ey, cy) in &ty {
                acc.add((ex + ey) % self.n as u32, cx.checked_mul(cy).expect("coefficient overflow"));
            }
        }
        acc.reduce()
    }

    /// Multiply by `zeta_n^e`.
    pub fn shift(&self, x: &CycInt, e: i64) -> CycInt {
        let mut acc = self.acc();
        acc.add_terms(&self.terms(x), self.wrap(e), 1);
        acc.reduce()
    }

    /// Complex conjugation `zeta_n -> zeta_n^{-1}`.
    pub fn conj(&self, x: &CycInt) -> CycInt {
        self.galois(x, -1)
    }

    /// The automorphism `zeta_n -> zeta_n^j`, `gcd(j, n) = 1`.
    pub fn galois(&self, x: &CycInt, j: i64) -> CycInt {
        let j = self.wrap(j) as u64;
        let mut acc = self.acc();
        for (e, c) in self.terms(x) {
            acc.add((e as u64 * j % self.n as u64) as u32, c);
        }
        acc.reduce()
    }

    pub fn pow(&self, x: &CycInt, mut k: u32) -> CycInt {
        let mut acc = self.one();
        let mut base = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// If `x = sign * zeta_n^e`, return `(sign, e)` with the least such `e`.
    pub fn as_root(&self, x: &CycInt) -> Option<(i64, u32)> {
        let nnz = x.c.iter().filter(|&&c| c != 0).count();
        if nnz == 0 {
            return None;
        }
        (0..self.n as u32).find_map(|e| {
            let z = self.zeta(e as i64);
            if &z == x {
                Some((1, e))
            } else if -z == *x {
                Some((-1, e))
            } else {
                None
            }
        })
    }
}

/// Dense group-ring accumulator: a vector indexed by exponents of `zeta_n`.
#[derive(Debug, Clone)]
pub struct Acc<'a> {
    cy: &'a Cyclo,
    buf: Vec<i64>,
}

impl Acc<'_> {
    #[inline]
    pub fn add(&mut self, e: u32, c: i64) {
        self.buf[self.cy.slot[e as usize] as usize] += c;
    }

    /// Add `mult * zeta^shift * sum terms`.
    #[inline]
    pub fn add_terms(&mut self, terms: &[(u32, i64)], shift: u32, mult: i64) {
        let n = self.cy.n as u32;
        for &(e, c) in terms {
            let mut f = e + shift;
            if f >= n {
                f -= n;
            }
            self.buf[self.cy.slot[f as usize] as usize] += c * mult;
        }
    }

    pub fn add_cyc(&mut self, x: &CycInt, shift: u32, mult: i64) {
        let n = self.cy.n as u32;
        for (&c, &e) in x.c.iter().zip(&self.cy.basis_exp) {
            if c != 0 {
                self.add((e + shift) % n, c * mult);
            }
        }
    }

    pub fn clear(&mut self) {
        self.buf.iter_mut().for_each(|v| *v = 0);
    }

    /// Reduce to the basis, leaving the accumulator cleared.
    pub fn take(&mut self) -> CycInt {
        let cy = self.cy;
        let n = cy.n;
        for ax in &cy.axes {
            let block = ax.big_n / ax.q;
            let top = (ax.q - 1) * block;
            let span = ax.big_n * ax.stride;
            for outer in (0..n).step_by(span) {
                for r in 0..block {
                    let src = outer + (top + r) * ax.stride;
                    for t in 0..ax.stride {
                        let v = std::mem::take(&mut self.buf[src + t]);
                        if v != 0 {
                            for u in 0..ax.q - 1 {
                                self.buf[outer + (u * block + r) * ax.stride + t] -= v;
                            }
                        }
                    }
                }
            }
        }
        let c = cy.basis_slot.iter().map(|&s| std::mem::take(&mut self.buf[s as usize])).collect();
        CycInt { c }
    }

    pub fn reduce(mut self) -> CycInt {
        self.take()
    }
}

/// An element of Z[zeta_n] in the tensor basis of its [`Cyclo`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    c: Vec<i64>,
}

impl CycInt {
    pub fn coeffs(&self) -> &[i64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    /// The integer `v` if this element is `v * 1`.
    pub fn as_int(&self) -> Option<i64> {
        if self.c[1..].iter().all(|&v| v == 0) {
            Some(self.c[0])
        } else {
            None
        }
    }

    pub fn scale(&self, k: i64) -> CycInt {
        CycInt { c: self.c.iter().map(|&v| v.checked_mul(k).expect("coefficient overflow")).collect() }
    }

    /// Exact division by an integer; fails if any coefficient is not divisible.
    pub fn div_exact(&self, d: i64) -> Result<CycInt, CycloError> {
        let mut c = Vec::with_capacity(self.c.len());
        for (index, &coeff) in self.c.iter().enumerate() {
            if coeff % d != 0 {
                return Err(CycloError::NotDivisible { index, coeff, divisor: d });
            }
            c.push(coeff / d);
        }
        Ok(CycInt { c })
    }

    pub fn max_abs(&self) -> i64 {
        self.c.iter().map(|v| v.abs()).max().unwrap_or(0)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz: Vec<(usize, i64)> = self.c.iter().copied().enumerate().filter(|(_, v)| *v != 0).collect();
        write!(f, "CycInt{nz:?}")
    }
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| a.checked_add(*b).expect("coefficient overflow")).collect();
        CycInt { c }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        let c = self.c.iter().zip(&rhs.c).map(|(a, b)| a.checked_sub(*b).expect("coefficient overflow")).collect();
        CycInt { c }
    }
}

impl Add for CycInt {
    type Output = CycInt;
    fn add(self, rhs: CycInt) -> CycInt {
        &self + &rhs
    }
}

impl Sub for CycInt {
    type Output = CycInt;
    fn sub(self, rhs: CycInt) -> CycInt {
        &self - &rhs
    }
}

impl AddAssign<&CycInt> for CycInt {
    fn add_assign(&mut self, rhs: &CycInt) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a = a.checked_add(*b).expect("coefficient overflow");
        }
    }
}

impl SubAssign<&CycInt> for CycInt {
    fn sub_assign(&mut self, rhs: &CycInt) {
        for (a, b) in self.c.iter_mut().zip(&rhs.c) {
            *a = a.checked_sub(*b).expect("coefficient overflow");
        }
    }
}

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { c: self.c.into_iter().map(|v| -v).collect() }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt { c: self.c.iter().map(|v| -v).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims() {
        for n in [1usize, 2, 3, 4, 12, 24, 120, 336, 2184] {
            let cy = Cyclo::new(n).unwrap();
            assert_eq!(cy.dim() as u64, euler_phi(n as u64));
        }
        assert!(Cyclo::new(0).is_err());
    }

    #[test]
    fn one_is_basis_zero() {
        let cy = Cyclo::new(120).unwrap();
        assert_eq!(cy.zeta(0), cy.one());
        assert_eq!(cy.basis_exponents()[0], 0);
    }

    #[test]
    fn zeta_power_n_is_one() {
        let cy = Cyclo::new(24).unwrap();
        assert_eq!(cy.pow(&cy.zeta(1), 24), cy.one());
        assert_ne!(cy.pow(&cy.zeta(1), 12), cy.one());
        assert_eq!(cy.pow(&cy.zeta(1), 12), -cy.one());
    }

    #[test]
    fn primitive_root_sums() {
        // sum of all n-th roots is 0; sum of primitive ones is mu(n)
        for n in [12usize, 24, 30, 120] {
            let cy = Cyclo::new(n).unwrap();
            let all: Vec<(u32, i64)> = (0..n as u32).map(|e| (e, 1)).collect();
            assert!(cy.from_terms(&all).is_zero());
            let prim: Vec<(u32, i64)> = (0..n as u32)
                .filter(|&e| crate::arith::gcd(e as u64, n as u64) == 1)
                .map(|e| (e, 1))
                .collect();
            let mobius = match n {
                12 | 24 | 120 => 0,
                30 => -1,
                _ => unreachable!(),
            };
            assert_eq!(cy.from_terms(&prim), cy.from_int(mobius));
        }
    }

    #[test]
    fn cyclotomic_polynomial_annihilates() {
        // Phi_12(x) = x^4 - x^2 + 1
        let cy = Cyclo::new(12).unwrap();
        let v = cy.from_terms(&[(4, 1), (2, -1), (0, 1)]);
        assert!(v.is_zero());
    }

    #[test]
    fn conj_and_galois() {
        let cy = Cyclo::new(24).unwrap();
        let x = cy.from_terms(&[(1, 2), (5, -1), (7, 3)]);
        assert_eq!(cy.conj(&cy.conj(&x)), x);
        assert_eq!(cy.galois(&cy.galois(&x, 5), 5), x);
        let prod = cy.mul(&cy.zeta(3), &cy.conj(&cy.zeta(3)));
        assert_eq!(prod, cy.one());
    }

    #[test]
    fn roots_are_recognized() {
        let cy = Cyclo::new(40).unwrap();
        assert_eq!(cy.as_root(&cy.zeta(7)), Some((1, 7)));
        assert_eq!(cy.as_root(&-cy.zeta(7)), Some((-1, 7)));
        // zeta^27 = -zeta^7 and the least exponent wins
        assert_eq!(cy.as_root(&cy.zeta(27)), Some((-1, 7)));
        assert_eq!(cy.as_root(&cy.from_int(2)), None);
        assert_eq!(cy.as_root(&cy.zero()), None);
    }

    #[test]
    fn exact_division() {
        let cy = Cyclo::new(15).unwrap();
        let x = cy.from_terms(&[(1, 6), (2, -9)]);
        assert_eq!(x.div_exact(3).unwrap().scale(3), x);
        assert!(x.div_exact(2).is_err());
    }
}
