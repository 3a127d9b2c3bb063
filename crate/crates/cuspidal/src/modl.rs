//! Certified homomorphism checks through a prime `l = 1 mod n`.
//!
//! Fix a primitive `n`-th root `w` mod `l`, which gives a ring map
//! `iota: Z[zeta_n] -> F_l`. For a pair `(g, h)` let
//! `X = p^{e(gh)} A(g) A(h) - p^{e(g)+e(h)} A(gh)`, where `A` is the numerator of `rho`.
//! Every entry of `X` has tensor-basis coefficients bounded by
//! [`coefficient_bound`], which is below `l / 2`. If `iota_j(X) = 0` for all
//! `phi(n)` embeddings `zeta_n -> w^j`, then the coefficient vector vanishes
//! mod `l` (the embedding matrix is invertible mod `l`, since `l` does not divide `n`).
//! By the bound it vanishes in Z.
//!
//! The embeddings need not be enumerated one by one. Write `j = (j_m, j_p)` in
//! `(Z/(p^2-1))^* x (Z/p)^*`. The `j_m` part turns the model of `nu` into
//! the model of `nu^{j_m}`. The `j_p` part replaces `psi` by `psi_c`, which
//! conjugates every `rho(g)` by the monomial operator `f(x) -> f(c x)`, so it
//! cannot change whether `X` vanishes. Checking `iota_1` on every `nu'` in the
//! Galois orbit of `nu` therefore certifies `X = 0` exactly.

use rand::Rng;

use crate::arith::{factorize, is_prime, pow_mod};
use crate::ctx::PrimeCtx;
use crate::ffchar::MultChar;
use crate::gl2::Gl2;
use crate::kirillov::{Entry, KirillovError, KirillovRep, Mutation, RhoMat};

/// Bound on the coefficients of `X` in the tensor basis.
pub fn coefficient_bound(p: u64) -> u64 {
    p * (p - 1) * (p + 1) * (p + 1) + p * p * (p + 1)
}

#[derive(Debug, Clone)]
pub struct ModL {
    ell: u64,
    pw: Vec<u64>,
}

impl ModL {
    pub fn new(ctx: &PrimeCtx) -> Self {
        let n = ctx.n() as u64;
        let floor = (1u64 << 20).max(2 * coefficient_bound(ctx.p() as u64) + 1);
        let mut k = floor / n + 1;
        while !is_prime(k * n + 1) {
            k += 1;
        }
        let ell = k * n + 1;
        let primes: Vec<u64> = factorize(n).into_iter().map(|(q, _)| q).collect();
        let w = (2..ell)
            .map(|g| pow_mod(g, (ell - 1) / n, ell))
            .find(|&w| primes.iter().all(|&q| pow_mod(w, n / q, ell) != 1))
            .expect("F_l^* is cyclic of order divisible by n");
        let mut pw = Vec::with_capacity(n as usize);
        let mut x = 1u64;
        for _ in 0..n {
            pw.push(x);
            x = x * w % ell;
        }
        debug_assert_eq!(x, 1);
        ModL { ell, pw }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    fn eval(&self, m: &RhoMat, kernel: &[u64], out: &mut [u64]) {
        for (o, e) in out.iter_mut().zip(&m.entries) {
            *o = match *e {
                Entry::Zero => 0,
                Entry::Root(r) => self.pw[r as usize],
                Entry::Kernel { shift, u } => self.pw[shift as usize] * kernel[(u - 1) as usize] % self.ell,
            };
        }
    }

    /// Check `rho(g) rho(h) = rho(gh)` for every `nu` in `nus` and every pair.
    /// Returns the number of (nu, pair) checks.
    pub fn check(
        &self,
        ctx: &PrimeCtx,
        nus: &[MultChar],
        pairs: &[(Gl2, Gl2)],
        mutation: Option<Mutation>,
    ) -> Result<usize, KirillovError> {
        let p = ctx.p();
        let l = self.ell;
        let d = p as usize - 1;
        let mut mg = vec![0u64; d * d];
        let mut mh = vec![0u64; d * d];
        let mut mgh = vec![0u64; d * d];
        let mut prod = vec![0u64; d * d];
        let mut count = 0;
        for &nu in nus {
            let rep = match mutation {
                Some(mu) => KirillovRep::mutated(ctx, nu, mu)?,
                None => KirillovRep::new(ctx, nu)?,
            };
            let kernel: Vec<u64> = (1..p)
                .map(|u| {
                    rep.kernel_terms(u)
                        .iter()
                        .fold(0u64, |s, &(e, c)| (s + (c.rem_euclid(l as i64) as u64) * self.pw[e as usize]) % l)
                })
                .collect();
            for &(g, h) in pairs {
                let rg = rep.rho(g)?;
                let rh = rep.rho(h)?;
                let rgh = rep.rho(g.mul(h, p))?;
                self.eval(&rg, &kernel, &mut mg);
                self.eval(&rh, &kernel, &mut mh);
                self.eval(&rgh, &kernel, &mut mgh);
                for i in 0..d {
                    for j in 0..d {
                        let mut s = 0u64;
                        for k in 0..d {
                            s += mg[i * d + k] * mh[k * d + j];
                        }
                        prod[i * d + j] = s % l;
                    }
                }
                let fa = pow_mod(p as u64, rgh.den as u64, l);
                let fb = pow_mod(p as u64, (rg.den + rh.den) as u64, l);
                let ok = prod.iter().zip(&mgh).all(|(&x, &y)| x * fa % l == y * fb % l);
                if !ok {
                    return Err(KirillovError::LawViolated {
                        law: "homomorphism",
                        witness: format!("nu={} g={g:?} h={h:?}", nu.k()),
                    });
                }
                count += 1;
            }
        }
        Ok(count)
    }
}

pub fn random_pairs<R: Rng + ?Sized>(p: u32, count: usize, rng: &mut R) -> Vec<(Gl2, Gl2)> {
    (0..count).map(|_| (Gl2::random(p, rng), Gl2::random(p, rng))).collect()
}

/// `{nu^j : j in (Z/(p^2-1))^*}`, sorted by weight.
pub fn galois_orbit(ctx: &PrimeCtx, nu: MultChar) -> Vec<MultChar> {
    let m = ctx.m() as u64;
    let mut out: Vec<MultChar> = (1..m)
        .filter(|&j| crate::arith::gcd(j, m) == 1)
        .map(|j| MultChar::from_weight(ctx.p(), (nu.k() as u64 * j % m) as i64))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every character with `nu != nu^p`.
pub fn regular_chars(ctx: &PrimeCtx) -> Vec<MultChar> {
    (0..ctx.m()).map(|k| MultChar::from_weight(ctx.p(), k as i64)).filter(|c| c.is_regular()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prime_is_large_enough() {
        for p in [3u64, 5, 7, 11, 13] {
            let ctx = PrimeCtx::new(p).unwrap();
            let m = ModL::new(&ctx);
            assert_eq!((m.ell() - 1) % ctx.n() as u64, 0);
            assert!(m.ell() > 2 * coefficient_bound(p));
            assert!((p as u128 - 1) * (m.ell() as u128).pow(2) < u64::MAX as u128);
        }
    }

    #[test]
    fn agrees_with_exact_path() {
        let ctx = PrimeCtx::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pairs = random_pairs(5, 60, &mut rng);
        let checker = ModL::new(&ctx);
        let nus = regular_chars(&ctx);
        assert_eq!(checker.check(&ctx, &nus, &pairs, None).unwrap(), nus.len() * 60);
        for nu in &nus {
            let rep = KirillovRep::new(&ctx, *nu).unwrap();
            crate::kirillov::check_pairs_exact(&rep, &pairs).unwrap();
        }
        let bad = checker.check(&ctx, &nus, &pairs, Some(Mutation::NegateKernel));
        assert!(bad.is_err());
    }

    #[test]
    fn psi_twist_is_a_conjugation() {
        // zeta_p -> zeta_p^c fixing zeta_{p^2-1} acts on rho(g) as conjugation by f(x) -> f(cx)
        let ctx = PrimeCtx::new(5).unwrap();
        let (p, m, n) = (5i64, 24i64, 120i64);
        let nu = crate::ffchar::char_from_digits(&ctx.field, 2, 1).unwrap();
        let rep = KirillovRep::new(&ctx, nu).unwrap();
        for c in 2..p {
            // j = 1 mod m, j = c mod p
            let j = (0..n).find(|&j| j % m == 1 && j % p == c).unwrap();
            for g in Gl2::all(5).into_iter().step_by(23) {
                let a = rep.dense(&rep.rho(g).unwrap());
                let d = a.dim;
                for y in 0..d {
                    for x in 0..d {
                        let lhs = ctx.cy.galois(&a.entries[y * d + x], j);
                        let (cy, cx) = ((y as i64 + 1) * c % p - 1, (x as i64 + 1) * c % p - 1);
                        assert_eq!(lhs, a.entries[cy as usize * d + cx as usize]);
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_sizes() {
        let ctx = PrimeCtx::new(5).unwrap();
        let nu = MultChar::from_weight(5, 1);
        assert_eq!(galois_orbit(&ctx, nu).len(), 8);
        assert_eq!(regular_chars(&ctx).len(), 20);
    }
}
