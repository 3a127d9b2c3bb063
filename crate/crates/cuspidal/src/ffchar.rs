//! Arithmetic in F_p and F_{p^2} = F_p(theta), theta^2 = xi, together with the
//! labelling of multiplicative characters by weights `k = a + p b`.
//!
//! A character `chi` of weight `k` is `x -> zeta_{p^2-1}^{k * log_sigma(x)}`, where
//! `sigma` is the fixed generator. Characters of F_p^* ("split" characters) are
//! labelled by a weight `s` modulo `p - 1` in the same way, so that restricting
//! a weight-`k` character to F_p^* gives weight `k mod (p - 1)`.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, is_prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("digit ({a}, {b}) out of range for p = {p}")]
    DigitOutOfRange { p: u32, a: u32, b: u32 },
    #[error("character of weight {k} does not agree with nu (weight {k_nu}) on F_p^*")]
    Incompatible { k: u32, k_nu: u32 },
    #[error("nu = nu^p (weight {0}) has no cuspidal representation")]
    Degenerate(u32),
    #[error("zero has no discrete logarithm")]
    Zero,
}

/// `a + b theta` with `a, b` in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fq2 {
    pub a: u32,
    pub b: u32,
}

impl Fq2 {
    pub const ZERO: Fq2 = Fq2 { a: 0, b: 0 };
    pub const ONE: Fq2 = Fq2 { a: 1, b: 0 };

    pub fn new(a: u32, b: u32) -> Self {
        Fq2 { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// Immutable field context for a fixed odd prime.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    xi: u32,
    sigma: Fq2,
    powers: Vec<Fq2>,
    logs: Vec<u32>,
}

pub fn make_field(p: u64) -> Result<FieldCtx, FieldError> {
    FieldCtx::new(p)
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) || p > 1 << 12 {
            return Err(FieldError::NotOddPrime(p));
        }
        let p32 = p as u32;
        let squares: Vec<bool> = {
            let mut sq = vec![false; p as usize];
            for x in 1..p {
                sq[(x * x % p) as usize] = true;
            }
            sq
        };
        let xi = (2..p32).find(|&x| !squares[x as usize]).expect("odd prime has a non-square");
        let mut ctx = FieldCtx { p: p32, xi, sigma: Fq2::ONE, powers: Vec::new(), logs: Vec::new() };
        let m = (p * p - 1) as u32;
        let primes: Vec<u32> = factorize(m as u64).into_iter().map(|(q, _)| q as u32).collect();
        let sigma = (0..p32)
            .flat_map(|a| (0..p32).map(move |b| Fq2::new(a, b)))
            .filter(|x| !x.is_zero())
            .find(|&x| primes.iter().all(|&q| ctx.pow(x, (m / q) as u64) != Fq2::ONE))
            .expect("F_{p^2}^* is cyclic");
        ctx.sigma = sigma;
        let mut powers = Vec::with_capacity(m as usize);
        let mut logs = vec![u32::MAX; (p * p) as usize];
        let mut x = Fq2::ONE;
        for i in 0..m {
            powers.push(x);
            logs[ctx.index(x)] = i;
            x = ctx.mul(x, sigma);
        }
        ctx.powers = powers;
        ctx.logs = logs;
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// The distinguished non-square.
    pub fn xi(&self) -> u32 {
        self.xi
    }

    /// `theta`, the square root of `xi`.
    pub fn theta(&self) -> Fq2 {
        Fq2::new(0, 1)
    }

    pub fn sigma(&self) -> Fq2 {
        self.sigma
    }

    /// `p^2 - 1`.
    pub fn order(&self) -> u32 {
        self.p * self.p - 1
    }

    fn index(&self, x: Fq2) -> usize {
        (x.a + self.p * x.b) as usize
    }

    pub fn fp(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn fp_mul(&self, x: u32, y: u32) -> u32 {
        ((x as u64 * y as u64) % self.p as u64) as u32
    }

    pub fn fp_inv(&self, x: u32) -> u32 {
        assert!(!x.is_multiple_of(self.p), "inverse of zero in F_p");
        crate::arith::pow_mod(x as u64, (self.p - 2) as u64, self.p as u64) as u32
    }

    pub fn embed(&self, x: u32) -> Fq2 {
        Fq2::new(x % self.p, 0)
    }

    pub fn add(&self, x: Fq2, y: Fq2) -> Fq2 {
        Fq2::new((x.a + y.a) % self.p, (x.b + y.b) % self.p)
    }

    pub fn sub(&self, x: Fq2, y: Fq2) -> Fq2 {
        Fq2::new((x.a + self.p - y.a) % self.p, (x.b + self.p - y.b) % self.p)
    }

    pub fn neg(&self, x: Fq2) -> Fq2 {
        self.sub(Fq2::ZERO, x)
    }

    pub fn mul(&self, x: Fq2, y: Fq2) -> Fq2 {
        let p = self.p as u64;
        let (xa, xb, ya, yb) = (x.a as u64, x.b as u64, y.a as u64, y.b as u64);
        let a = (xa * ya + self.xi as u64 * (xb * yb % p)) % p;
        let b = (xa * yb + xb * ya) % p;
        Fq2::new(a as u32, b as u32)
    }

    pub fn scale(&self, c: u32, x: Fq2) -> Fq2 {
        self.mul(self.embed(c), x)
    }

    pub fn pow(&self, x: Fq2, mut e: u64) -> Fq2 {
        let mut acc = Fq2::ONE;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: Fq2) -> Result<Fq2, FieldError> {
        let l = self.dlog(x)?;
        Ok(self.exp((self.order() - l) as u64))
    }

    /// Frobenius `x -> x^p`, i.e. `a + b theta -> a - b theta`.
    pub fn frob(&self, x: Fq2) -> Fq2 {
        Fq2::new(x.a, (self.p - x.b) % self.p)
    }

    pub fn norm(&self, x: Fq2) -> u32 {
        let p = self.p as i64;
        let (a, b) = (x.a as i64, x.b as i64);
        (a * a - self.xi as i64 * b * b).rem_euclid(p) as u32
    }

    pub fn trace(&self, x: Fq2) -> u32 {
        (2 * x.a) % self.p
    }

    /// `sigma^e`.
    pub fn exp(&self, e: u64) -> Fq2 {
        self.powers[(e % self.order() as u64) as usize]
    }

    /// Discrete logarithm to base `sigma`.
    pub fn dlog(&self, x: Fq2) -> Result<u32, FieldError> {
        if x.is_zero() || x.a >= self.p || x.b >= self.p {
            return Err(FieldError::Zero);
        }
        Ok(self.logs[self.index(x)])
    }

    /// Discrete log of an element of F_p^*; always a multiple of `p + 1`.
    pub fn dlog_fp(&self, x: u32) -> Result<u32, FieldError> {
        self.dlog(self.embed(x))
    }

    /// Nonzero elements of F_{p^2} in the order `sigma^0, sigma^1, ...`.
    pub fn units(&self) -> &[Fq2] {
        &self.powers
    }

    /// The `p + 1` elements of norm `u`.
    pub fn norm_fibre(&self, u: u32) -> Vec<Fq2> {
        self.powers.iter().copied().filter(|&x| self.norm(x) == u % self.p).collect()
    }

    /// Weight-`k` value at `x` as an exponent of `zeta_{p^2-1}`.
    pub fn eval_weight(&self, k: u32, x: Fq2) -> Result<u32, FieldError> {
        let l = self.dlog(x)? as u64;
        Ok(((k as u64 * l) % self.order() as u64) as u32)
    }

    /// Split character of weight `s` (mod `p - 1`) evaluated at `x` in F_p^*.
    pub fn eval_split(&self, s: u32, x: u32) -> Result<u32, FieldError> {
        self.eval_weight(s % (self.p - 1), self.embed(x))
    }
}

/// A character of F_{p^2}^*, stored by its weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultChar {
    p: u32,
    k: u32,
}

impl MultChar {
    pub fn from_weight(p: u32, k: i64) -> Self {
        let m = (p * p - 1) as i64;
        MultChar { p, k: k.rem_euclid(m) as u32 }
    }

    pub fn k(self) -> u32 {
        self.k
    }

    pub fn p(self) -> u32 {
        self.p
    }

    /// Digits `(a, b)` with `k = a + p b`.
    pub fn digits(self) -> (u32, u32) {
        (self.k % self.p, self.k / self.p)
    }

    /// The conjugate character `chi^p`: digits swap.
    pub fn frob(self) -> Self {
        MultChar::from_weight(self.p, self.p as i64 * self.k as i64)
    }

    pub fn inverse(self) -> Self {
        MultChar::from_weight(self.p, -(self.k as i64))
    }

    pub fn is_trivial(self) -> bool {
        self.k == 0
    }

    /// Weight of the restriction to F_p^*, modulo `p - 1`.
    pub fn central_weight(self) -> u32 {
        self.k % (self.p - 1)
    }

    pub fn factors_through_norm(self) -> bool {
        self.k.is_multiple_of(self.p + 1)
    }

    /// `chi(-1) = (-1)^(a+b)`, as a parity bit.
    pub fn parity(self) -> u32 {
        let (a, b) = self.digits();
        (a + b) % 2
    }

    pub fn is_regular(self) -> bool {
        self.frob() != self
    }
}

pub fn char_from_digits(ctx: &FieldCtx, a: u32, b: u32) -> Result<MultChar, FieldError> {
    let p = ctx.p();
    if a >= p || b >= p {
        return Err(FieldError::DigitOutOfRange { p, a, b });
    }
    Ok(MultChar::from_weight(p, (a + p * b) as i64))
}

pub fn eval_char(ctx: &FieldCtx, chi: MultChar, x: Fq2) -> Result<u32, FieldError> {
    ctx.eval_weight(chi.k(), x)
}

/// The `p + 1` characters agreeing with `nu` on F_p^*, by increasing weight.
pub fn compatible_chars(ctx: &FieldCtx, nu: MultChar) -> Vec<MultChar> {
    let p = ctx.p();
    let r = nu.central_weight();
    (0..=p).map(|t| MultChar::from_weight(p, (r + t * (p - 1)) as i64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TypeTag {
    pub kind: Kind,
    /// `t_chi` with `k_chi = k_nu + t (p - 1)`, reduced into `0..=p`.
    pub t: u32,
}

/// `nu` with digits normalized so that `a > b`.
pub fn normalize(nu: MultChar) -> Result<MultChar, FieldError> {
    let (a, b) = nu.digits();
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => Ok(nu),
        std::cmp::Ordering::Less => Ok(nu.frob()),
        std::cmp::Ordering::Equal => Err(FieldError::Degenerate(nu.k())),
    }
}

pub fn classify(ctx: &FieldCtx, nu: MultChar, chi: MultChar) -> Result<TypeTag, FieldError> {
    let nu = normalize(nu)?;
    let p = ctx.p();
    if chi.central_weight() != nu.central_weight() {
        return Err(FieldError::Incompatible { k: chi.k(), k_nu: nu.k() });
    }
    let m = ctx.order();
    let t = ((chi.k() + m - nu.k()) % m) / (p - 1);
    let kind = if nu.k() < chi.k() && chi.k() < nu.frob().k() { Kind::Type1 } else { Kind::Type2 };
    Ok(TypeTag { kind, t })
}
