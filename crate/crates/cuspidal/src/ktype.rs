//! Class functions on `GL2(Z/p^s)`: characters induced from `B(t)`, the
//! complements `u_s`, and their restrictions to torus images.
//!
//! `B(t)` is the subgroup with lower-left entry divisible by `p^t`, and `nu`
//! (a character of `(Z/p^s)^*`) is viewed as a character of `B(t)` through the
//! upper-left entry. Values live in `Z[zeta_L]`, where `L` covers the unit
//! characters and both torus exponents.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::arith::{euler_phi, gcd, inv_mod, is_prime, lcm};
use crate::cyclo::{CycInt, Cyclo, CycloError};
use crate::gl2::Gl2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KtypeError {
    #[error("p = {0} is not an odd prime")]
    NotOddPrime(u32),
    #[error("level p^{s} with p = {p} is out of range")]
    LevelOutOfRange { p: u32, s: u32 },
    #[error("character of conductor {conductor} cannot be induced from B({t})")]
    Conductor { conductor: u32, t: u32 },
    #[error("inner product is not an integer")]
    NonIntegral,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Levels run by default: `(3,1), (3,2), (5,1), (5,2), (7,1)`.
pub fn default_levels(p: u32) -> &'static [u32] {
    match p {
        3 | 5 => &[1, 2],
        7 => &[1],
        _ => &[],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConjClass {
    pub rep: Gl2,
    pub size: usize,
}

#[derive(Debug, Clone)]
pub struct FiniteLevelGroup {
    p: u32,
    s: u32,
    n: u32,
    order: usize,
    class_of: Vec<u32>,
    classes: Vec<ConjClass>,
    phi: u32,
    /// Discrete log to a fixed generator of `(Z/p^s)^*`; `u32::MAX` off the units.
    dlog: Vec<u32>,
    level: u32,
    cy: Cyclo,
    unramified: Torus,
    ramified: Torus,
}

fn inverse(g: Gl2, n: u32) -> Gl2 {
    let di = inv_mod(g.det(n) as u64, n as u64).expect("invertible") as i64;
    let n64 = n as i64;
    Gl2::new(n, di * g.d as i64, -di * g.b as i64 % n64, -di * g.c as i64 % n64, di * g.a as i64)
}

impl FiniteLevelGroup {
    pub fn new(p: u32, s: u32) -> Result<Self, KtypeError> {
        if p == 2 || !is_prime(p as u64) {
            return Err(KtypeError::NotOddPrime(p));
        }
        let n = p.checked_pow(s).filter(|&n| s >= 1 && n <= 49).ok_or(KtypeError::LevelOutOfRange { p, s })?;
        let phi = euler_phi(n as u64) as u32;
        let gen = (2..n)
            .find(|&g| gcd(g as u64, n as u64) == 1 && crate::arith::mult_order(g as u64, n as u64) == Some(phi as u64))
            .unwrap_or(1);
        let mut dlog = vec![u32::MAX; n as usize];
        let mut x = 1u64;
        for e in 0..phi {
            dlog[x as usize] = e;
            x = x * gen as u64 % n as u64;
        }

        let size = (n as usize).pow(4);
        let mut class_of = vec![u32::MAX; size];
        let gens: Vec<(Gl2, Gl2)> = [Gl2::new(n, 1, 1, 0, 1), Gl2::new(n, 1, 0, 1, 1), Gl2::new(n, gen as i64, 0, 0, 1)]
            .into_iter()
            .map(|g| (g, inverse(g, n)))
            .collect();
        let mut classes = Vec::new();
        let mut order = 0;
        let mut queue = VecDeque::new();
        for code in 0..size as u32 {
            let g = decode(code, n);
            if class_of[code as usize] != u32::MAX || gcd(g.det(n) as u64, n as u64) != 1 {
                continue;
            }
            let id = classes.len() as u32;
            class_of[code as usize] = id;
            queue.push_back(g);
            let mut count = 0;
            while let Some(h) = queue.pop_front() {
                count += 1;
                for &(x, xi) in &gens {
                    let y = x.mul(h, n).mul(xi, n);
                    let c = encode(y, n) as usize;
                    if class_of[c] == u32::MAX {
                        class_of[c] = id;
                        queue.push_back(y);
                    }
                }
            }
            order += count;
            classes.push(ConjClass { rep: g, size: count });
        }

        let unr = Torus::build(p, s, n, TorusKind::Unramified);
        let ram = Torus::build(p, s, n, TorusKind::Ramified);
        let level = lcm(lcm(phi as u64, unr.exponent as u64), ram.exponent as u64) as u32;
        let cy = Cyclo::new(level as usize)?;
        Ok(FiniteLevelGroup { p, s, n, order, class_of, classes, phi, dlog, level, cy, unramified: unr, ramified: ram })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn modulus(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `(p^2 - 1)(p^2 - p) p^(4(s-1))`.
    pub fn expected_order(&self) -> usize {
        let p = self.p as usize;
        (p * p - 1) * (p * p - p) * p.pow(4 * (self.s - 1))
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of(&self, g: Gl2) -> Option<usize> {
        let c = self.class_of[encode(g, self.n) as usize];
        (c != u32::MAX).then_some(c as usize)
    }

    pub fn cyclo(&self) -> &Cyclo {
        &self.cy
    }

    pub fn torus(&self, kind: TorusKind) -> &Torus {
        match kind {
            TorusKind::Unramified => &self.unramified,
            TorusKind::Ramified => &self.ramified,
        }
    }

    /// Characters of `(Z/p^s)^*`, as exponents `j` with `nu(gen) = zeta_phi^j`.
    pub fn unit_chars(&self) -> std::ops::Range<u32> {
        0..self.phi
    }

    /// Least `c` with `nu` trivial on `1 + p^c`; 0 for the trivial character.
    pub fn conductor(&self, j: u32) -> u32 {
        (0..=self.s).find(|&c| self.is_trivial_on_level(j, c)).expect("trivial on 1 + p^s")
    }

    fn is_trivial_on_level(&self, j: u32, c: u32) -> bool {
        if c == 0 {
            return j.is_multiple_of(self.phi);
        }
        let step = self.p.pow(c);
        (0..self.n / step).all(|x| self.nu_exp(j, 1 + x * step) == 0)
    }

    /// Exponent of `zeta_L` for `nu_j(x)`.
    pub fn nu_exp(&self, j: u32, x: u32) -> u32 {
        let d = self.dlog[(x % self.n) as usize];
        debug_assert_ne!(d, u32::MAX);
        ((j as u64 * d as u64 % self.phi as u64) * (self.level / self.phi) as u64) as u32
    }

    /// Representatives of `G / B(t)`: `(1 0; v 1)` and `(u -1; 1 0)` with `p | u`.
    fn coset_reps(&self, t: u32) -> Vec<(Gl2, Gl2)> {
        let pt = self.p.pow(t);
        let n = self.n;
        let mut out: Vec<Gl2> = (0..pt).map(|v| Gl2::new(n, 1, 0, v as i64, 1)).collect();
        out.extend((0..pt).step_by(self.p as usize).map(|u| Gl2::new(n, u as i64, -1, 1, 0)));
        out.into_iter().map(|x| (x, inverse(x, n))).collect()
    }
}

fn encode(g: Gl2, n: u32) -> u32 {
    g.a + n * (g.b + n * (g.c + n * g.d))
}

fn decode(code: u32, n: u32) -> Gl2 {
    Gl2 { a: code % n, b: code / n % n, c: code / (n * n) % n, d: code / (n * n * n) }
}

/// Values on the conjugacy classes, in class order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFn {
    pub values: Vec<CycInt>,
}

impl ClassFn {
    pub fn degree(&self, grp: &FiniteLevelGroup) -> Option<i64> {
        self.values[grp.class_of(Gl2::identity()).expect("identity")].as_int()
    }
}

impl std::ops::Sub for &ClassFn {
    type Output = ClassFn;
    fn sub(self, o: &ClassFn) -> ClassFn {
        ClassFn { values: self.values.iter().zip(&o.values).map(|(x, y)| x - y).collect() }
    }
}

/// Character of the induction of `nu_j(a)` from `B(t)`.
pub fn induced_character(grp: &FiniteLevelGroup, t: u32, j: u32) -> Result<ClassFn, KtypeError> {
    let conductor = grp.conductor(j);
    if t == 0 || t > grp.s || conductor > t {
        return Err(KtypeError::Conductor { conductor, t });
    }
    let pt = grp.p.pow(t);
    let n = grp.n;
    let reps = grp.coset_reps(t);
    let mut acc = grp.cy.acc();
    let values = grp
        .classes
        .iter()
        .map(|cl| {
            for &(x, xi) in &reps {
                let y = xi.mul(cl.rep, n).mul(x, n);
                if y.c % pt == 0 {
                    acc.add(grp.nu_exp(j, y.a), 1);
                }
            }
            acc.take()
        })
        .collect();
    Ok(ClassFn { values })
}

/// `Ind_{B(t)} - Ind_{B(t-1)}` for `t > r`, and `Ind_{B(r)}` at `t = r`.
pub fn u_character(grp: &FiniteLevelGroup, t: u32, j: u32) -> Result<ClassFn, KtypeError> {
    let r = grp.conductor(j);
    let top = induced_character(grp, t, j)?;
    if t == r || t == 1 {
        return Ok(top);
    }
    Ok(&top - &induced_character(grp, t - 1, j)?)
}

/// `<f, h>` over the whole group.
pub fn inner_product(grp: &FiniteLevelGroup, f: &ClassFn, h: &ClassFn) -> Result<i64, KtypeError> {
    let cy = &grp.cy;
    let mut acc = cy.acc();
    for ((x, y), cl) in f.values.iter().zip(&h.values).zip(&grp.classes) {
        let ty = cy.terms(&cy.conj(y));
        for (ex, cx) in cy.terms(x) {
            acc.add_terms(&ty, ex, cx * cl.size as i64);
        }
    }
    acc.reduce().div_exact(grp.order as i64)?.as_int().ok_or(KtypeError::NonIntegral)
}

/// `<f restricted to B(s), nu_j(a)>`.
pub fn newvector_line(grp: &FiniteLevelGroup, f: &ClassFn, j: u32) -> Result<i64, KtypeError> {
    let n = grp.n;
    let cy = &grp.cy;
    let terms: Vec<Vec<(u32, i64)>> = f.values.iter().map(|v| cy.terms(v)).collect();
    let mut acc = cy.acc();
    let units: Vec<u32> = (1..n).filter(|&x| grp.dlog[x as usize] != u32::MAX).collect();
    let mut count = 0i64;
    for &a in &units {
        let shift = (grp.level - grp.nu_exp(j, a)) % grp.level;
        for &d in &units {
            for b in 0..n {
                let cl = grp.class_of(Gl2 { a, b, c: 0, d }).expect("upper triangular unit");
                acc.add_terms(&terms[cl], shift, 1);
                count += 1;
            }
        }
    }
    acc.reduce().div_exact(count)?.as_int().ok_or(KtypeError::NonIntegral)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TorusKind {
    /// `{(a b; b xi a)}`, `xi` a non-square mod p.
    Unramified,
    /// `{(a b; p b a)}`, the units of `Z_p[sqrt p]`.
    Ramified,
}

/// A torus image in `GL2(Z/p^s)` with its full character group.
#[derive(Debug, Clone)]
pub struct Torus {
    pub kind: TorusKind,
    p: u32,
    s: u32,
    n: u32,
    disc: u32,
    /// Elements `(a, b)` standing for `(a b; disc*b a)`.
    pub elems: Vec<(u32, u32)>,
    pub exponent: u32,
    /// Characters as exponents of `zeta_exponent`, indexed like `elems`.
    pub chars: Vec<Vec<u32>>,
}

impl Torus {
    fn build(p: u32, s: u32, n: u32, kind: TorusKind) -> Torus {
        let disc = match kind {
            TorusKind::Unramified => (2..p).find(|&x| crate::arith::pow_mod(x as u64, (p as u64 - 1) / 2, p as u64) == p as u64 - 1).unwrap(),
            TorusKind::Ramified => p,
        };
        let mut elems = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let det = (a as u64 * a as u64 + (n as u64 - disc as u64 * b as u64 % n as u64) * b as u64) % n as u64;
                if !det.is_multiple_of(p as u64) {
                    elems.push((a, b));
                }
            }
        }
        let mut t = Torus { kind, p, s, n, disc, elems, exponent: 1, chars: Vec::new() };
        let exponent = t.elems.iter().map(|&x| t.elem_order(x)).fold(1u64, |e, o| lcm(e, o as u64)) as u32;
        t.exponent = exponent;
        t.chars = t.enumerate_chars();
        t
    }

    fn mul(&self, x: (u32, u32), y: (u32, u32)) -> (u32, u32) {
        let n = self.n as u64;
        let (a, b, c, d) = (x.0 as u64, x.1 as u64, y.0 as u64, y.1 as u64);
        (((a * c + self.disc as u64 * (b * d % n)) % n) as u32, ((a * d + b * c) % n) as u32)
    }

    fn elem_order(&self, x: (u32, u32)) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != (1, 0) {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    fn index(&self, x: (u32, u32)) -> usize {
        self.elems.binary_search(&x).expect("torus element")
    }

    pub fn matrix(&self, x: (u32, u32)) -> Gl2 {
        Gl2 { a: x.0, b: x.1, c: (self.disc as u64 * x.1 as u64 % self.n as u64) as u32, d: x.0 }
    }

    /// Every character, built one cyclic extension at a time.
    fn enumerate_chars(&self) -> Vec<Vec<u32>> {
        let e = self.exponent as u64;
        let size = self.elems.len();
        let mut in_h = vec![false; size];
        // subgroup elements with their value under each character
        let mut h: Vec<usize> = vec![self.index((1, 0))];
        in_h[h[0]] = true;
        let mut chars: Vec<Vec<u32>> = vec![vec![0]];
        while h.len() < size {
            let gi = (0..size).find(|&i| !in_h[i]).unwrap();
            let g = self.elems[gi];
            let mut m = 1u64;
            let mut gm = g;
            while !in_h[self.index(gm)] {
                gm = self.mul(gm, g);
                m += 1;
            }
            let pos_gm = h.iter().position(|&i| i == self.index(gm)).unwrap();
            let mut new_h = h.clone();
            let mut gj = g;
            for _ in 1..m {
                for &i in &h {
                    let x = self.index(self.mul(gj, self.elems[i]));
                    in_h[x] = true;
                    new_h.push(x);
                }
                gj = self.mul(gj, g);
            }
            let mut new_chars = Vec::with_capacity(chars.len() * m as usize);
            for chi in &chars {
                let target = chi[pos_gm] as u64;
                for v in (0..e).filter(|&v| v * m % e == target) {
                    let mut vals = Vec::with_capacity(new_h.len());
                    for j in 0..m {
                        vals.extend(chi.iter().map(|&c| ((c as u64 + j * v) % e) as u32));
                    }
                    new_chars.push(vals);
                }
            }
            h = new_h;
            chars = new_chars;
        }
        let mut out: Vec<Vec<u32>> = chars
            .into_iter()
            .map(|vals| {
                let mut row = vec![0u32; size];
                for (&i, &v) in h.iter().zip(&vals) {
                    row[i] = v;
                }
                row
            })
            .collect();
        out.sort();
        out
    }

    /// Whether `chi` agrees with `nu_j` on the scalars.
    pub fn is_compatible(&self, grp: &FiniteLevelGroup, chi: &[u32], j: u32) -> bool {
        let scale = grp.level / self.exponent;
        (1..self.n)
            .filter(|&z| z % self.p != 0)
            .all(|z| chi[self.index((z, 0))] * scale == grp.nu_exp(j, z))
    }

    /// Members of the conductor filtration: `U_c` for `c` in `0..=max_conductor`.
    fn in_filtration(&self, x: (u32, u32), c: u32) -> bool {
        let pw = |k: u32| self.p.pow(k);
        let (a, b) = x;
        let am1 = (a + self.n - 1) % self.n;
        match self.kind {
            TorusKind::Unramified => c == 0 || (am1.is_multiple_of(pw(c)) && b % pw(c) == 0),
            TorusKind::Ramified => {
                let j = c / 2;
                if c == 0 {
                    true
                } else if c.is_multiple_of(2) {
                    am1.is_multiple_of(pw(j)) && b % pw(j) == 0
                } else {
                    am1.is_multiple_of(pw(j + 1)) && b % pw(j) == 0
                }
            }
        }
    }

    pub fn max_conductor(&self) -> u32 {
        match self.kind {
            TorusKind::Unramified => self.s,
            TorusKind::Ramified => 2 * self.s,
        }
    }

    pub fn conductor(&self, chi: &[u32]) -> u32 {
        (0..=self.max_conductor())
            .find(|&c| self.elems.iter().enumerate().all(|(i, &x)| !self.in_filtration(x, c) || chi[i] == 0))
            .expect("trivial on the last filtration step")
    }
}

/// `<f restricted to the torus, chi>` for every character of the torus.
pub fn torus_multiplicities(grp: &FiniteLevelGroup, f: &ClassFn, torus: &Torus) -> Result<Vec<i64>, KtypeError> {
    let cy = &grp.cy;
    let scale = grp.level / torus.exponent;
    let terms: Vec<Vec<(u32, i64)>> = torus
        .elems
        .iter()
        .map(|&x| cy.terms(&f.values[grp.class_of(torus.matrix(x)).expect("torus element is invertible")]))
        .collect();
    let mut acc = cy.acc();
    torus
        .chars
        .iter()
        .map(|chi| {
            for (t, &v) in terms.iter().zip(chi) {
                acc.add_terms(t, (grp.level - v * scale) % grp.level, 1);
            }
            acc.take().div_exact(torus.elems.len() as i64)?.as_int().ok_or(KtypeError::NonIntegral)
        })
        .collect()
}

/// Compatible characters of a torus image, counted by conductor.
pub fn conductor_census(grp: &FiniteLevelGroup, torus: &Torus, j: u32) -> BTreeMap<u32, usize> {
    let mut out = BTreeMap::new();
    for chi in &torus.chars {
        if torus.is_compatible(grp, chi, j) {
            *out.entry(torus.conductor(chi)).or_insert(0) += 1;
        }
    }
    out
}

/// Counts over `O_K^*` and over `K^*` (each unit character has two extensions,
/// one for each square root of `nu(p)`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RamifiedCensus {
    pub units: BTreeMap<u32, usize>,
    pub k_star: BTreeMap<u32, usize>,
}

pub fn ramified_census(grp: &FiniteLevelGroup, j: u32) -> RamifiedCensus {
    let units = conductor_census(grp, grp.torus(TorusKind::Ramified), j);
    let k_star = units.iter().map(|(&c, &n)| (c, 2 * n)).collect();
    RamifiedCensus { units, k_star }
}

/// `q^(r-1)` at `2r - 1` and `q^c - q^(c-1)` at each even `2c`, `r <= c <= s`.
pub fn expected_ramified_census(p: u32, s: u32, r: u32) -> BTreeMap<u32, usize> {
    let q = p as usize;
    let mut out = BTreeMap::from([(2 * r - 1, q.pow(r - 1))]);
    for c in r..=s {
        out.insert(2 * c, q.pow(c) - q.pow(c - 1));
    }
    out
}

/// `(q+1) q^(r-1)` at `r`, then `(q+1) q^(c-1) - (q+1) q^(c-2)` for `r < c <= s`.
pub fn expected_unramified_census(p: u32, s: u32, r: u32) -> BTreeMap<u32, usize> {
    (r..=s).map(|c| (c, expected_u_degree(p, c, r) as usize)).collect()
}

pub fn expected_u_degree(p: u32, s: u32, r: u32) -> i64 {
    let q = p as i64;
    if s == r {
        (q + 1) * q.pow(r - 1)
    } else {
        (q + 1) * q.pow(s - 1) - (q + 1) * q.pow(s - 2)
    }
}

/// Every check for one character `nu_j` of conductor `r >= 1` at the group's level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KtypeCase {
    pub p: u32,
    pub s: u32,
    pub r: u32,
    pub nu: u32,
    pub degree: i64,
    pub expected_degree: i64,
    pub induced_degrees_ok: bool,
    pub norm: i64,
    pub orthogonal_to_lower: bool,
    pub inner_products_nonnegative: bool,
    pub unramified_ok: bool,
    pub unramified_census: BTreeMap<u32, usize>,
    pub ramified_census: RamifiedCensus,
    pub ramified_ok: bool,
    pub newvector: i64,
    pub induced_newvector: i64,
}

impl KtypeCase {
    pub fn passed(&self) -> bool {
        self.degree == self.expected_degree
            && self.induced_degrees_ok
            && self.norm == 1
            && self.orthogonal_to_lower
            && self.inner_products_nonnegative
            && self.unramified_ok
            && self.ramified_ok
            && self.newvector == 1
            && self.induced_newvector == (self.s - self.r + 1) as i64
    }
}

pub fn check_case(grp: &FiniteLevelGroup, j: u32) -> Result<KtypeCase, KtypeError> {
    let (p, s) = (grp.p, grp.s);
    let r = grp.conductor(j);
    if r == 0 {
        return Err(KtypeError::Conductor { conductor: 0, t: s });
    }
    let u = u_character(grp, s, j)?;
    let degree = u.degree(grp).ok_or(KtypeError::NonIntegral)?;
    let mut induced_degrees_ok = true;
    let mut orthogonal_to_lower = true;
    let mut inner_products_nonnegative = true;
    for t in r..=s {
        let ind = induced_character(grp, t, j)?;
        induced_degrees_ok &= ind.degree(grp) == Some(((p + 1) * p.pow(t - 1)) as i64);
        let ip = inner_product(grp, &u, &ind)?;
        inner_products_nonnegative &= ip >= 0;
        if t < s {
            orthogonal_to_lower &= inner_product(grp, &u, &u_character(grp, t, j)?)? == 0;
        }
    }
    let norm = inner_product(grp, &u, &u)?;

    let unr = grp.torus(TorusKind::Unramified);
    let mults = torus_multiplicities(grp, &u, unr)?;
    let unramified_ok = unr.chars.iter().zip(&mults).all(|(chi, &m)| {
        let expect = unr.is_compatible(grp, chi, j) && unr.conductor(chi) == s;
        m == expect as i64
    });
    let unramified_census = conductor_census(grp, unr, j);
    let expected_unr = expected_unramified_census(p, s, r);
    let unramified_ok = unramified_ok && unramified_census == expected_unr;

    let ramified = ramified_census(grp, j);
    let expected = expected_ramified_census(p, s, r);
    let ramified_ok = ramified.units == expected
        && ramified.k_star.get(&(2 * r - 1)) == Some(&(2 * (p as usize).pow(r - 1)))
        && ramified.units.keys().all(|&c| c % 2 == 0 || c == 2 * r - 1);

    let ind_top = induced_character(grp, s, j)?;
    Ok(KtypeCase {
        p,
        s,
        r,
        nu: j,
        degree,
        expected_degree: expected_u_degree(p, s, r),
        induced_degrees_ok,
        norm,
        orthogonal_to_lower,
        inner_products_nonnegative,
        unramified_ok,
        unramified_census,
        ramified_census: ramified,
        ramified_ok,
        newvector: newvector_line(grp, &u, j)?,
        induced_newvector: newvector_line(grp, &ind_top, j)?,
    })
}

/// Every nontrivial unit character at this level.
pub fn check_level(grp: &FiniteLevelGroup) -> Result<Vec<KtypeCase>, KtypeError> {
    grp.unit_chars().filter(|&j| grp.conductor(j) >= 1).map(|j| check_case(grp, j)).collect()
}
