//! The cuspidal representation rho(nu) of GL2(F_p) in its Kirillov model.
//!
//! The space is functions on F_p^* with basis `delta_y`, `y = 1..p-1` (index
//! `y - 1`). With `omega = nu|F_p^*` and `psi(x) = zeta_p^x`:
//!
//! * `(rho(a b; 0 d) f)(x) = omega(d) psi(b x / d) f(a x / d)`
//! * `(rho(w') f)(y) = sum_x j(x y) omega(x)^{-1} f(x)`, `w' = (0 1; -1 0)`
//!
//! and a general element with `c != 0` factors as
//! `(1 a/c; 0 1) w' (-c -d; 0 -det/c)`. Every entry of `rho(g)` is either a
//! root of unity or a root of unity times `p j(u)`, with a denominator `p`
//! in the second case.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ctx::PrimeCtx;
use crate::cyclo::{bessel_terms, CycInt, CycloError, Terms};
use crate::ffchar::MultChar;
use crate::gl2::Gl2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KirillovError {
    #[error("singular matrix {0:?}")]
    Singular(Gl2),
    #[error("nu of weight {0} equals nu^p")]
    Degenerate(u32),
    #[error("{law} fails: {witness}")]
    LawViolated { law: &'static str, witness: String },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Deliberate corruptions of the model, used to show the validation has teeth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Flip the sign of the Bessel kernel.
    NegateKernel,
    /// Drop the `omega(x)^{-1}` factor from the Weyl kernel.
    BareKernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    Zero,
    /// `zeta_n^e`
    Root(u32),
    /// `zeta_n^shift * p j(u)`
    Kernel { shift: u32, u: u32 },
}

/// Matrix of `p^den * rho(g)` in structured form, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoMat {
    pub den: u32,
    pub dim: usize,
    pub entries: Vec<Entry>,
}

impl RhoMat {
    pub fn get(&self, row: usize, col: usize) -> Entry {
        self.entries[row * self.dim + col]
    }

    /// For monomial matrices: the column of the nonzero entry in each row and its exponent.
    pub fn as_monomial(&self) -> Option<(Vec<usize>, Vec<u32>)> {
        let mut cols = Vec::with_capacity(self.dim);
        let mut exps = Vec::with_capacity(self.dim);
        for r in 0..self.dim {
            let mut found = None;
            for c in 0..self.dim {
                match self.get(r, c) {
                    Entry::Zero => {}
                    Entry::Root(e) if found.is_none() => found = Some((c, e)),
                    _ => return None,
                }
            }
            let (c, e) = found?;
            cols.push(c);
            exps.push(e);
        }
        Some((cols, exps))
    }
}

/// `p^den * v` for a vector `v` of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelVector {
    pub den: u32,
    pub coeffs: Vec<CycInt>,
}

impl ModelVector {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CycInt::is_zero)
    }

    pub fn scale(&self, k: i64) -> ModelVector {
        ModelVector { den: self.den, coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect() }
    }
}

/// Dense matrix `p^den * A` over Z[zeta_n].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMat {
    pub den: u32,
    pub dim: usize,
    pub entries: Vec<CycInt>,
}

impl KMat {
    pub fn mul(&self, other: &KMat, ctx: &PrimeCtx) -> KMat {
        let d = self.dim;
        let lhs: Vec<Terms> = self.entries.iter().map(|x| ctx.cy.terms(x)).collect();
        let rhs: Vec<Terms> = other.entries.iter().map(|x| ctx.cy.terms(x)).collect();
        let n = ctx.n();
        let mut acc = ctx.cy.acc();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for &(ea, ca) in &lhs[i * d + k] {
                        for &(eb, cb) in &rhs[k * d + j] {
                            let e = ea + eb;
                            acc.add(if e >= n { e - n } else { e }, ca * cb);
                        }
                    }
                }
                entries.push(acc.take());
            }
        }
        KMat { den: self.den + other.den, dim: d, entries }
    }

    /// Equality of the represented matrices, clearing the two denominators.
    pub fn same_as(&self, other: &KMat, p: u32) -> bool {
        let top = self.den.max(other.den);
        let fa = (p as i64).pow(top - self.den);
        let fb = (p as i64).pow(top - other.den);
        self.entries.iter().zip(&other.entries).all(|(x, y)| x.scale(fa) == y.scale(fb))
    }
}

#[derive(Debug, Clone)]
pub struct KirillovRep<'a> {
    ctx: &'a PrimeCtx,
    nu: MultChar,
    kernel: Vec<Terms>,
    kernel_cyc: Vec<CycInt>,
    omega: Vec<u32>,
    inv: Vec<u32>,
    mutation: Option<Mutation>,
}

impl<'a> KirillovRep<'a> {
    pub fn new(ctx: &'a PrimeCtx, nu: MultChar) -> Result<Self, KirillovError> {
        Self::build(ctx, nu, None)
    }

    pub fn mutated(ctx: &'a PrimeCtx, nu: MultChar, mutation: Mutation) -> Result<Self, KirillovError> {
        Self::build(ctx, nu, Some(mutation))
    }

    fn build(ctx: &'a PrimeCtx, nu: MultChar, mutation: Option<Mutation>) -> Result<Self, KirillovError> {
        if !nu.is_regular() {
            return Err(KirillovError::Degenerate(nu.k()));
        }
        let p = ctx.p();
        let f = &ctx.field;
        let mut kernel = Vec::with_capacity(p as usize - 1);
        for u in 1..p {
            let mut t = bessel_terms(ctx, nu, u).map_err(|_| KirillovError::Degenerate(nu.k()))?;
            if mutation == Some(Mutation::NegateKernel) {
                t.iter_mut().for_each(|(_, c)| *c = -*c);
            }
            kernel.push(t);
        }
        let kernel_cyc = kernel.iter().map(|t| ctx.cy.from_terms(t)).collect();
        let omega = (1..p)
            .map(|x| ctx.root_m(f.eval_weight(nu.k(), f.embed(x)).expect("x is a unit")))
            .collect();
        let inv = (0..p).map(|x| if x == 0 { 0 } else { f.fp_inv(x) }).collect();
        Ok(KirillovRep { ctx, nu, kernel, kernel_cyc, omega, inv, mutation })
    }

    pub fn ctx(&self) -> &'a PrimeCtx {
        self.ctx
    }

    pub fn nu(&self) -> MultChar {
        self.nu
    }

    pub fn dim(&self) -> usize {
        self.ctx.p() as usize - 1
    }

    /// `omega(x)` as an exponent of `zeta_n`.
    #[inline]
    pub fn omega_exp(&self, x: u32) -> u32 {
        self.omega[(x - 1) as usize]
    }

    pub fn omega_is_trivial(&self) -> bool {
        self.nu.central_weight() == 0
    }

    /// Terms of `p j(u)`.
    pub fn kernel_terms(&self, u: u32) -> &Terms {
        &self.kernel[(u - 1) as usize]
    }

    pub fn kernel_value(&self, u: u32) -> &CycInt {
        &self.kernel_cyc[(u - 1) as usize]
    }

    #[inline]
    fn mulp(&self, x: u32, y: u32) -> u32 {
        (x as u64 * y as u64 % self.ctx.p() as u64) as u32
    }

    #[inline]
    fn weyl_shift(&self, x: u32) -> u32 {
        if self.mutation == Some(Mutation::BareKernel) {
            0
        } else {
            self.ctx.neg_exp(self.omega_exp(x))
        }
    }

    pub fn rho_borel(&self, a: u32, b: u32, d: u32) -> Result<RhoMat, KirillovError> {
        let p = self.ctx.p();
        let (a, b, d) = (a % p, b % p, d % p);
        if a == 0 || d == 0 {
            return Err(KirillovError::Singular(Gl2 { a, b, c: 0, d }));
        }
        let dim = self.dim();
        let dinv = self.inv[d as usize];
        let ad = self.mulp(a, dinv);
        let bd = self.mulp(b, dinv);
        let w = self.omega_exp(d);
        let mut entries = vec![Entry::Zero; dim * dim];
        for x in 1..p {
            let col = self.mulp(ad, x);
            let e = self.ctx.add_exp(w, self.ctx.root_p(self.mulp(bd, x)));
            entries[(x - 1) as usize * dim + (col - 1) as usize] = Entry::Root(e);
        }
        Ok(RhoMat { den: 0, dim, entries })
    }

    pub fn rho_weyl(&self) -> RhoMat {
        let p = self.ctx.p();
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for y in 1..p {
            for x in 1..p {
                entries.push(Entry::Kernel { shift: self.weyl_shift(x), u: self.mulp(x, y) });
            }
        }
        RhoMat { den: 1, dim, entries }
    }

    pub fn rho(&self, g: Gl2) -> Result<RhoMat, KirillovError> {
        let p = self.ctx.p();
        let det = g.det(p);
        if det == 0 {
            return Err(KirillovError::Singular(g));
        }
        if g.c == 0 {
            return self.rho_borel(g.a, g.b, g.d);
        }
        let ctx = self.ctx;
        let cinv = self.inv[g.c as usize];
        let s = self.mulp(g.a, cinv);
        // right factor (alpha beta; 0 delta)
        let alpha = p - g.c;
        let beta = (p - g.d) % p;
        let delta = (p - self.mulp(det, cinv)) % p;
        let dinv = self.inv[delta as usize];
        let w_delta = self.omega_exp(delta);
        let x_of_z = self.mulp(delta, self.inv[alpha as usize]);
        let bd = self.mulp(beta, dinv);
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for y in 1..p {
            let left = ctx.root_p(self.mulp(s, y));
            for z in 1..p {
                let x = self.mulp(x_of_z, z);
                let right = ctx.add_exp(w_delta, ctx.root_p(self.mulp(bd, x)));
                let shift = ctx.add_exp(ctx.add_exp(left, right), self.weyl_shift(x));
                entries.push(Entry::Kernel { shift, u: self.mulp(x, y) });
            }
        }
        Ok(RhoMat { den: 1, dim, entries })
    }

    pub fn entry_value(&self, e: Entry) -> CycInt {
        match e {
            Entry::Zero => self.ctx.cy.zero(),
            Entry::Root(r) => self.ctx.cy.zeta(r as i64),
            Entry::Kernel { shift, u } => {
                let mut acc = self.ctx.cy.acc();
                acc.add_terms(self.kernel_terms(u), shift, 1);
                acc.reduce()
            }
        }
    }

    pub fn dense(&self, m: &RhoMat) -> KMat {
        KMat { den: m.den, dim: m.dim, entries: m.entries.iter().map(|&e| self.entry_value(e)).collect() }
    }

    /// `M v`, exactly.
    pub fn apply(&self, m: &RhoMat, v: &ModelVector) -> ModelVector {
        let cy = &self.ctx.cy;
        let vt: Vec<Terms> = v.coeffs.iter().map(|c| cy.terms(c)).collect();
        let mut acc = cy.acc();
        let mut coeffs = Vec::with_capacity(m.dim);
        for y in 0..m.dim {
            for (x, tx) in vt.iter().enumerate() {
                self.accumulate(&mut acc, m.get(y, x), tx, 0, 1);
            }
            coeffs.push(acc.take());
        }
        ModelVector { den: v.den + m.den, coeffs }
    }

    /// `acc += mult * zeta^extra * entry * sum(v_terms)`.
    #[inline]
    pub(crate) fn accumulate(&self, acc: &mut crate::cyclo::Acc<'_>, e: Entry, v_terms: &Terms, extra: u32, mult: i64) {
        match e {
            Entry::Zero => {}
            Entry::Root(r) => acc.add_terms(v_terms, self.ctx.add_exp(r, extra), mult),
            Entry::Kernel { shift, u } => {
                let k = self.kernel_terms(u);
                let s = self.ctx.add_exp(shift, extra);
                for &(ev, cv) in v_terms {
                    acc.add_terms(k, self.ctx.add_exp(s, ev), cv * mult);
                }
            }
        }
    }

    /// `p^den * trace rho(g)`.
    pub fn trace_scaled(&self, m: &RhoMat) -> CycInt {
        let mut acc = self.ctx.cy.acc();
        let one = vec![(0u32, 1i64)];
        for i in 0..m.dim {
            self.accumulate(&mut acc, m.get(i, i), &one, 0, 1);
        }
        acc.reduce()
    }

    /// `trace rho(g)`, which must be an algebraic integer.
    pub fn trace(&self, g: Gl2) -> Result<CycInt, KirillovError> {
        let m = self.rho(g)?;
        let t = self.trace_scaled(&m);
        Ok(t.div_exact((self.ctx.p() as i64).pow(m.den))?)
    }
}

pub fn rho_borel(rep: &KirillovRep<'_>, a: u32, b: u32, d: u32) -> Result<RhoMat, KirillovError> {
    rep.rho_borel(a, b, d)
}

pub fn rho_weyl(rep: &KirillovRep<'_>) -> RhoMat {
    rep.rho_weyl()
}

pub fn rho(rep: &KirillovRep<'_>, g: Gl2) -> Result<RhoMat, KirillovError> {
    rep.rho(g)
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// Random pairs for the homomorphism law when `p >= 5`.
    pub random_pairs: usize,
    pub seed: u64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions { random_pairs: 10_000, seed: 0x6b69_7269 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub homomorphism_pairs: usize,
    pub exhaustive: bool,
    pub borel_pairs: usize,
    pub central_elements: usize,
    pub elliptic_traces: usize,
}

fn violated(law: &'static str, witness: String) -> KirillovError {
    KirillovError::LawViolated { law, witness }
}

/// Exact homomorphism check on explicit pairs via dense matrices.
pub fn check_pairs_exact(rep: &KirillovRep<'_>, pairs: &[(Gl2, Gl2)]) -> Result<(), KirillovError> {
    let p = rep.ctx.p();
    let mut cache: HashMap<Gl2, KMat> = HashMap::new();
    let mut get = |g: Gl2| -> Result<KMat, KirillovError> {
        if let Some(m) = cache.get(&g) {
            return Ok(m.clone());
        }
        let m = rep.dense(&rep.rho(g)?);
        cache.insert(g, m.clone());
        Ok(m)
    };
    for &(g, h) in pairs {
        let lhs = get(g)?.mul(&get(h)?, rep.ctx);
        let rhs = get(g.mul(h, p))?;
        if !lhs.same_as(&rhs, p) {
            return Err(violated("homomorphism", format!("nu={} g={g:?} h={h:?}", rep.nu.k())));
        }
    }
    Ok(())
}

/// Composition law on every pair of upper-triangular elements, compared as
/// monomial matrices.
pub fn check_borel_law(rep: &KirillovRep<'_>) -> Result<usize, KirillovError> {
    let p = rep.ctx.p();
    let mut borel = Vec::new();
    for a in 1..p {
        for b in 0..p {
            for d in 1..p {
                let g = Gl2 { a, b, c: 0, d };
                let (cols, exps) = rep.rho(g)?.as_monomial().expect("Borel matrices are monomial");
                borel.push((g, cols, exps));
            }
        }
    }
    let index = |g: Gl2| (((g.a - 1) * p + g.b) * (p - 1) + g.d - 1) as usize;
    let mut count = 0;
    for (g, c1, e1) in &borel {
        for (h, c2, e2) in &borel {
            let gh = g.mul(*h, p);
            let (c3, e3) = (&borel[index(gh)].1, &borel[index(gh)].2);
            for r in 0..c1.len() {
                let mid = c1[r];
                if c2[mid] != c3[r] || rep.ctx.add_exp(e1[r], e2[mid]) != e3[r] {
                    return Err(violated("Borel composition", format!("g={g:?} h={h:?} row={r}")));
                }
            }
            count += 1;
        }
    }
    Ok(count)
}

/// `rho(zI) = nu(z) I` for every `z`.
pub fn check_central(rep: &KirillovRep<'_>) -> Result<usize, KirillovError> {
    let p = rep.ctx.p();
    for z in 1..p {
        let m = rep.rho(Gl2::scalar(z))?;
        let (cols, exps) = m.as_monomial().expect("scalar is monomial");
        let w = rep.omega_exp(z);
        if cols.iter().enumerate().any(|(i, &c)| c != i) || exps.iter().any(|&e| e != w) {
            return Err(violated("central character", format!("z={z}")));
        }
    }
    Ok(p as usize - 1)
}

/// `trace rho(t) = -(nu(t) + nu^p(t))` for `t` in F_{p^2} \ F_p.
pub fn check_elliptic_traces(rep: &KirillovRep<'_>) -> Result<usize, KirillovError> {
    let ctx = rep.ctx;
    let f = &ctx.field;
    let mut count = 0;
    for &t in f.units() {
        if t.b == 0 {
            continue;
        }
        let g = crate::tori::embed(ctx, t);
        let tr = rep.trace(g)?;
        let e1 = ctx.root_m(f.eval_weight(rep.nu.k(), t).expect("unit"));
        let e2 = ctx.root_m(f.eval_weight(rep.nu.frob().k(), t).expect("unit"));
        let expect = -ctx.cy.from_terms(&[(e1, 1), (e2, 1)]);
        if tr != expect {
            return Err(violated("elliptic trace", format!("t={t:?}")));
        }
        count += 1;
    }
    Ok(count)
}

pub fn validate_rep(rep: &KirillovRep<'_>, opts: ValidateOptions) -> Result<ValidationReport, KirillovError> {
    let p = rep.ctx.p();
    let mut report = ValidationReport::default();
    if p == 3 {
        let all = Gl2::all(p);
        let pairs: Vec<(Gl2, Gl2)> = all.iter().flat_map(|&g| all.iter().map(move |&h| (g, h))).collect();
        check_pairs_exact(rep, &pairs)?;
        report.homomorphism_pairs = pairs.len();
        report.exhaustive = true;
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let pairs = crate::modl::random_pairs(p, opts.random_pairs, &mut rng);
        let orbit = crate::modl::galois_orbit(rep.ctx, rep.nu);
        let checker = crate::modl::ModL::new(rep.ctx);
        checker.check(rep.ctx, &orbit, &pairs, rep.mutation)?;
        report.homomorphism_pairs = pairs.len();
    }
    report.borel_pairs = check_borel_law(rep)?;
    report.central_elements = check_central(rep)?;
    report.elliptic_traces = check_elliptic_traces(rep)?;
    Ok(report)
}

/// Value `x -> zeta_n^{e(x)}` as a model vector.
pub fn root_vector(ctx: &PrimeCtx, exps: &[u32]) -> ModelVector {
    ModelVector { den: 0, coeffs: exps.iter().map(|&e| ctx.cy.zeta(e as i64)).collect() }
}

/// The basis vector `delta_y`.
pub fn delta(ctx: &PrimeCtx, y: u32) -> ModelVector {
    let p = ctx.p();
    let coeffs = (1..p).map(|x| if x == y { ctx.cy.one() } else { ctx.cy.zero() }).collect();
    ModelVector { den: 0, coeffs }
}
