//! The mod-p side: `det^e (x) Sym^d` over F_{p^2}, the Jordan-Hoelder factors of
//! the reduction of rho(nu), and the recommended split characters.
//!
//! GL2 acts on polynomials by `(g.P)(X, Y) = det(g)^e P(aX + cY, bX + dY)`.
//! With `U = X - theta Y` and `V = X + theta Y`, the image of `t` in the torus
//! sends `U -> t^p U` and `V -> t V`, so `U^j V^(d-j)` carries weight
//! `(p+1)e + p j + (d - j)`.

use serde::Serialize;
use thiserror::Error;

use crate::ctx::PrimeCtx;
use crate::cyclo::reduce_to_fq2;
use crate::ffchar::{classify, normalize, FieldCtx, FieldError, Fq2, Kind, MultChar};
use crate::gl2::Gl2;
use crate::kirillov::{KirillovError, KirillovRep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModpError {
    #[error("singular matrix {0:?}")]
    Singular(Gl2),
    #[error("monomial index {index} out of range for degree {d}")]
    IndexOutOfRange { index: u32, d: u32 },
    #[error("character of weight {0} is nu or nu^p")]
    Excluded(u32),
    #[error("torus does not act diagonally on the UV basis")]
    NotDiagonal,
    #[error("Brauer characters differ at {0:?}")]
    BrauerMismatch(Gl2),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Model(#[from] KirillovError),
}

/// `det^e (x) Sym^d`, basis `X^i Y^(d-i)` for `i = 0..=d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SymModel {
    pub d: u32,
    pub e: u32,
}

impl SymModel {
    pub fn dim(self) -> usize {
        self.d as usize + 1
    }

    /// Weight of `X^i Y^(d-i)` under `diag(a, 1)`.
    pub fn split_weight(self, i: u32, p: u32) -> u32 {
        (self.e + i) % (p - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JhFactors {
    pub v1: Option<SymModel>,
    pub v2: SymModel,
}

impl JhFactors {
    pub fn models(&self) -> Vec<SymModel> {
        self.v1.into_iter().chain(std::iter::once(self.v2)).collect()
    }
}

/// `V1 = det^(b+1) Sym^(a-b-2)` (when `a - b >= 2`) and `V2 = det^a Sym^(p-1-(a-b))`.
pub fn jh_factors(ctx: &FieldCtx, nu: MultChar) -> Result<JhFactors, ModpError> {
    let nu = normalize(nu)?;
    let p = ctx.p();
    let (a, b) = nu.digits();
    let v1 = (a - b >= 2).then(|| SymModel { d: a - b - 2, e: (b + 1) % (p - 1) });
    let v2 = SymModel { d: p - 1 - (a - b), e: a % (p - 1) };
    Ok(JhFactors { v1, v2 })
}

/// Square matrix over F_{p^2}, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqMat {
    pub dim: usize,
    pub entries: Vec<Fq2>,
}

impl FqMat {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Fq2::ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Fq2::ONE;
        }
        FqMat { dim, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> Fq2 {
        self.entries[r * self.dim + c]
    }

    pub fn mul(&self, o: &FqMat, f: &FieldCtx) -> FqMat {
        let d = self.dim;
        let mut entries = vec![Fq2::ZERO; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] = f.add(entries[i * d + j], f.mul(a, o.get(k, j)));
                }
            }
        }
        FqMat { dim: d, entries }
    }

    pub fn trace(&self, f: &FieldCtx) -> Fq2 {
        (0..self.dim).fold(Fq2::ZERO, |s, i| f.add(s, self.get(i, i)))
    }
}

/// Polynomial in two linear forms, stored by the exponent of the first.
fn poly_mul(f: &FieldCtx, x: &[Fq2], y: &[Fq2]) -> Vec<Fq2> {
    let mut out = vec![Fq2::ZERO; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(a, b));
        }
    }
    out
}

/// Expand `L1^i L2^(d-i)` where `L = (coefficient of first form, coefficient of second)`,
/// returning coefficients indexed by the exponent of the first form.
fn expand(f: &FieldCtx, l1: [Fq2; 2], l2: [Fq2; 2], i: u32, d: u32) -> Vec<Fq2> {
    // linear forms as polynomials indexed by exponent of the first variable: [c_second, c_first]
    let p1 = [l1[1], l1[0]];
    let p2 = [l2[1], l2[0]];
    let mut acc = vec![Fq2::ONE];
    for _ in 0..i {
        acc = poly_mul(f, &acc, &p1);
    }
    for _ in i..d {
        acc = poly_mul(f, &acc, &p2);
    }
    acc
}

pub fn sym_action(f: &FieldCtx, model: SymModel, g: Gl2) -> Result<FqMat, ModpError> {
    let p = f.p();
    let det = g.det(p);
    if det == 0 {
        return Err(ModpError::Singular(g));
    }
    let dim = model.dim();
    let scale = f.pow(f.embed(det), model.e as u64);
    // X -> aX + cY, Y -> bX + dY
    let lx = [f.embed(g.a), f.embed(g.c)];
    let ly = [f.embed(g.b), f.embed(g.d)];
    let mut entries = vec![Fq2::ZERO; dim * dim];
    for i in 0..=model.d {
        let col = expand(f, lx, ly, i, model.d);
        for (r, &c) in col.iter().enumerate() {
            entries[r * dim + i as usize] = f.mul(scale, c);
        }
    }
    Ok(FqMat { dim, entries })
}

/// Transition matrices between `X^i Y^(d-i)` and `U^j V^(d-j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvBasis {
    /// Column `i` holds the UV coordinates of `X^i Y^(d-i)`.
    pub to_uv: FqMat,
    /// Column `j` holds the XY coordinates of `U^j V^(d-j)`.
    pub to_xy: FqMat,
}

pub fn uv_basis(f: &FieldCtx, model: SymModel) -> UvBasis {
    let dim = model.dim();
    let two_inv = f.embed(f.fp_inv(2));
    let theta = f.theta();
    let theta_inv = f.inv(theta).expect("theta is a unit");
    let half_theta_inv = f.mul(two_inv, theta_inv);
    // X = (U + V)/2, Y = (V - U)/(2 theta)
    let x_uv = [two_inv, two_inv];
    let y_uv = [f.neg(half_theta_inv), half_theta_inv];
    // U = X - theta Y, V = X + theta Y
    let u_xy = [Fq2::ONE, f.neg(theta)];
    let v_xy = [Fq2::ONE, theta];
    let mut to_uv = vec![Fq2::ZERO; dim * dim];
    let mut to_xy = vec![Fq2::ZERO; dim * dim];
    for i in 0..=model.d {
        for (r, &c) in expand(f, x_uv, y_uv, i, model.d).iter().enumerate() {
            to_uv[r * dim + i as usize] = c;
        }
        for (r, &c) in expand(f, u_xy, v_xy, i, model.d).iter().enumerate() {
            to_xy[r * dim + i as usize] = c;
        }
    }
    UvBasis { to_uv: FqMat { dim, entries: to_uv }, to_xy: FqMat { dim, entries: to_xy } }
}

/// The torus character on `U^j V^(d-j)`, read off by diagonalizing the action of `sigma`.
pub fn torus_char_of_uv_monomial(ctx: &PrimeCtx, model: SymModel, j: u32) -> Result<MultChar, ModpError> {
    if j > model.d {
        return Err(ModpError::IndexOutOfRange { index: j, d: model.d });
    }
    let f = &ctx.field;
    let uv = uv_basis(f, model);
    let g = crate::tori::embed(ctx, f.sigma());
    let m = uv.to_uv.mul(&sym_action(f, model, g)?, f).mul(&uv.to_xy, f);
    let j = j as usize;
    if (0..m.dim).any(|r| r != j && !m.get(r, j).is_zero()) {
        return Err(ModpError::NotDiagonal);
    }
    let k = f.dlog(m.get(j, j))?;
    Ok(MultChar::from_weight(f.p(), k as i64))
}

/// `(p+1)e + p j + (d - j)`, the weight of `U^j V^(d-j)`.
pub fn uv_weight(p: u32, model: SymModel, j: u32) -> u32 {
    let m = p * p - 1;
    (((p + 1) * model.e + p * j + (model.d - j)) as u64 % m as u64) as u32
}

/// Coefficient of the UV monomial carrying `chi` in `X^i Y^(d-i)`; zero if no
/// monomial of the model carries `chi`.
pub fn chi_component_of_split_monomial(
    ctx: &PrimeCtx,
    model: SymModel,
    i: u32,
    chi: MultChar,
) -> Result<Fq2, ModpError> {
    if i > model.d {
        return Err(ModpError::IndexOutOfRange { index: i, d: model.d });
    }
    let p = ctx.p();
    let Some(j) = (0..=model.d).find(|&j| uv_weight(p, model, j) == chi.k()) else {
        return Ok(Fq2::ZERO);
    };
    let uv = uv_basis(&ctx.field, model);
    Ok(uv.to_uv.get(j as usize, i as usize))
}

fn factor_of_char(p: u32, jh: &JhFactors, chi: MultChar) -> Option<SymModel> {
    jh.models().into_iter().find(|&m| (0..=m.d).any(|j| uv_weight(p, m, j) == chi.k()))
}

/// The factor and monomial index `i` with `diag(a,1)` weight `s`.
pub fn split_monomial(p: u32, jh: &JhFactors, s: u32) -> Option<(SymModel, u32)> {
    let s = s % (p - 1);
    jh.models().into_iter().find_map(|m| (0..=m.d).find(|&i| m.split_weight(i, p) == s).map(|i| (m, i)))
}

/// Nonvanishing of the `chi`-component of the reduction of `v_mu`.
pub fn modp_test_vector(ctx: &PrimeCtx, nu: MultChar, chi: MultChar, s: u32) -> Result<bool, ModpError> {
    if chi == nu || chi == nu.frob() {
        return Err(ModpError::Excluded(chi.k()));
    }
    classify(&ctx.field, nu, chi)?;
    let p = ctx.p();
    let jh = jh_factors(&ctx.field, nu)?;
    let (Some(home), Some((mu_home, i))) = (factor_of_char(p, &jh, chi), split_monomial(p, &jh, s)) else {
        return Ok(false);
    };
    if home != mu_home {
        return Ok(false);
    }
    Ok(!chi_component_of_split_monomial(ctx, home, i, chi)?.is_zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Clause {
    EvenType1Odd,
    EvenType2Odd,
    EvenType1Even,
    EvenType2Even,
    OddType1,
    OddType2,
    OddAdjacent,
}

impl Clause {
    pub fn label(self) -> &'static str {
        match self {
            Clause::EvenType1Odd => "even/type1/t-odd",
            Clause::EvenType2Odd => "even/type2/t-odd",
            Clause::EvenType1Even => "even/type1/t-even",
            Clause::EvenType2Even => "even/type2/t-even",
            Clause::OddType1 => "odd/type1",
            Clause::OddType2 => "odd/type2",
            Clause::OddAdjacent => "odd/adjacent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Prediction {
    pub clause: Clause,
    /// Recommended split weight `mu`, modulo `p - 1`.
    pub mu: u32,
}

/// Which monomial the even, `t_chi` even clauses use: `X^(d/2-1) Y^(d/2+1)`
/// or its mirror `X^(d/2+1) Y^(d/2-1)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Monomials {
    #[default]
    Printed,
    Alternate,
}

/// The recommended `mu` for `chi`, from the parity of `a - b`, the type of
/// `chi` and the parity of `t_chi`.
pub fn predict(ctx: &FieldCtx, nu: MultChar, chi: MultChar) -> Result<Prediction, ModpError> {
    predict_with(ctx, nu, chi, Monomials::Printed)
}

pub fn predict_with(ctx: &FieldCtx, nu: MultChar, chi: MultChar, monomials: Monomials) -> Result<Prediction, ModpError> {
    let nu = normalize(nu)?;
    if chi == nu || chi == nu.frob() {
        return Err(ModpError::Excluded(chi.k()));
    }
    let tag = classify(ctx, nu, chi)?;
    let p = ctx.p();
    let (a, b) = nu.digits();
    let q = p - 1;
    let red = |x: u32| x % q;
    let (clause, mu) = if (a - b) % 2 == 0 {
        let mu1 = (a + b) / 2;
        let mu2 = (a + b + p - 1) / 2;
        let shift = match monomials {
            Monomials::Printed => q - 1,
            Monomials::Alternate => 1,
        };
        match (tag.kind, tag.t % 2 == 1) {
            (Kind::Type1, true) => (Clause::EvenType1Odd, red(mu1)),
            (Kind::Type2, true) => (Clause::EvenType2Odd, red(mu2)),
            (Kind::Type1, false) => (Clause::EvenType1Even, red(mu1 + shift)),
            (Kind::Type2, false) => (Clause::EvenType2Even, red(mu2 + shift)),
        }
    } else if a - b == 1 {
        (Clause::OddAdjacent, red((a + b + p) / 2))
    } else {
        match tag.kind {
            Kind::Type1 => (Clause::OddType1, red((a + b - 1) / 2)),
            Kind::Type2 => (Clause::OddType2, red((a + b + p) / 2)),
        }
    };
    Ok(Prediction { clause, mu })
}

/// For trivial central character and `mu` trivial or quadratic: whether `v_mu`
/// is a test vector for `chi`, where a statement exists.
pub fn predict_trivial_central(ctx: &PrimeCtx, nu: MultChar, chi: MultChar, s: u32) -> Result<Option<bool>, ModpError> {
    let p = ctx.p();
    let q = p - 1;
    debug_assert_eq!(nu.central_weight(), 0);
    let tag = classify(&ctx.field, nu, chi)?;
    let differ = crate::tori::Eps::of(ctx, chi) != crate::tori::Eps::of(ctx, nu);
    let s = s % q;
    let quad = q / 2;
    Ok(match (tag.kind, s) {
        (_, _) if !differ => Some(false),
        (Kind::Type2, 0) => Some(true),
        (Kind::Type1, x) if x == quad => Some(true),
        _ => None,
    })
}

/// p-regular class representatives: central, split `diag(a, d)` with `a < d`,
/// and elliptic `t` up to Frobenius.
pub fn p_regular_classes(ctx: &PrimeCtx) -> Vec<Gl2> {
    let p = ctx.p();
    let f = &ctx.field;
    let mut out: Vec<Gl2> = (1..p).map(Gl2::scalar).collect();
    for a in 1..p {
        for d in a + 1..p {
            out.push(Gl2 { a, b: 0, c: 0, d });
        }
    }
    for &t in f.units() {
        if t.b != 0 && t.b <= p / 2 {
            out.push(crate::tori::embed(ctx, t));
        }
    }
    out
}

/// Reduction of `trace rho(g)` equals the trace on `V1 + V2` at every p-regular class.
pub fn brauer_check(rep: &KirillovRep<'_>) -> Result<usize, ModpError> {
    let ctx = rep.ctx();
    let f = &ctx.field;
    let jh = jh_factors(f, rep.nu())?;
    let classes = p_regular_classes(ctx);
    for &g in &classes {
        let lhs = reduce_to_fq2(ctx, &rep.trace(g)?);
        let mut rhs = Fq2::ZERO;
        for m in jh.models() {
            rhs = f.add(rhs, sym_action(f, m, g)?.trace(f));
        }
        if lhs != rhs {
            return Err(ModpError::BrauerMismatch(g));
        }
    }
    Ok(classes.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffchar::{char_from_digits, compatible_chars};

    #[test]
    fn factors_p5() {
        let f = FieldCtx::new(5).unwrap();
        let jh = jh_factors(&f, char_from_digits(&f, 3, 1).unwrap()).unwrap();
        assert_eq!(jh.v1, Some(SymModel { d: 0, e: 2 }));
        assert_eq!(jh.v2, SymModel { d: 2, e: 3 });
        let jh = jh_factors(&f, char_from_digits(&f, 2, 1).unwrap()).unwrap();
        assert_eq!(jh.v1, None);
        assert_eq!(jh.v2, SymModel { d: 3, e: 2 });
        // conjugate digits give the same factors
        let jh2 = jh_factors(&f, char_from_digits(&f, 1, 2).unwrap()).unwrap();
        assert_eq!(jh, jh2);
        assert!(jh_factors(&f, char_from_digits(&f, 2, 2).unwrap()).is_err());
    }

    #[test]
    fn action_basics() {
        let f = FieldCtx::new(5).unwrap();
        let m = SymModel { d: 3, e: 2 };
        assert_eq!(sym_action(&f, m, Gl2::identity()).unwrap(), FqMat::identity(4));
        let z = sym_action(&f, m, Gl2::scalar(2)).unwrap();
        let s = f.pow(f.embed(2), 2 * 2 + 3);
        assert_eq!(z.entries, FqMat::identity(4).entries.iter().map(|&x| f.mul(x, s)).collect::<Vec<_>>());
        let dg = sym_action(&f, m, Gl2 { a: 3, b: 0, c: 0, d: 1 }).unwrap();
        for i in 0..4u64 {
            assert_eq!(dg.get(i as usize, i as usize), f.pow(f.embed(3), 2 + i));
        }
        assert!(sym_action(&f, m, Gl2 { a: 1, b: 1, c: 1, d: 1 }).is_err());
    }

    #[test]
    fn uv_transitions_are_inverse() {
        let f = FieldCtx::new(7).unwrap();
        for d in 0..6 {
            let m = SymModel { d, e: 1 };
            let uv = uv_basis(&f, m);
            assert_eq!(uv.to_uv.mul(&uv.to_xy, &f), FqMat::identity(m.dim()));
        }
    }

    #[test]
    fn uv_weights_match_closed_form() {
        let ctx = PrimeCtx::new(7).unwrap();
        for (a, b) in [(5u32, 1u32), (6, 0), (4, 1), (3, 0)] {
            let nu = char_from_digits(&ctx.field, a, b).unwrap();
            let jh = jh_factors(&ctx.field, nu).unwrap();
            for m in jh.models() {
                let mut seen = std::collections::BTreeSet::new();
                for j in 0..=m.d {
                    let w = torus_char_of_uv_monomial(&ctx, m, j).unwrap().k();
                    assert_eq!(w, uv_weight(7, m, j));
                    assert!(seen.insert(w));
                }
            }
        }
    }

    #[test]
    fn closed_form_on_v1_is_mirrored() {
        let p = 7;
        let ctx = PrimeCtx::new(p as u64).unwrap();
        let nu = char_from_digits(&ctx.field, 5, 1).unwrap();
        let v1 = jh_factors(&ctx.field, nu).unwrap().v1.unwrap();
        assert_eq!(torus_char_of_uv_monomial(&ctx, v1, 0).unwrap().k(), nu.k() + (p - 1));
        assert_eq!(torus_char_of_uv_monomial(&ctx, v1, v1.d).unwrap().k(), nu.frob().k() - (p - 1));
        // (p+1)(b+1) + 2i + p(d-2i) is the weight of U^(d-2i) V^(2i) here
        for i in 0..=v1.d / 2 {
            let closed = (p + 1) * 2 + 2 * i + p * (v1.d - 2 * i);
            assert_eq!(uv_weight(p, v1, v1.d - 2 * i), closed);
        }
    }

    #[test]
    fn alternate_monomials_also_work() {
        for p in [5u64, 7, 11] {
            let ctx = PrimeCtx::new(p).unwrap();
            let mut seen = 0;
            for k in 0..ctx.m() {
                let nu = MultChar::from_weight(p as u32, k as i64);
                let (a, b) = nu.digits();
                if a <= b || (a - b) % 2 == 1 {
                    continue;
                }
                for chi in compatible_chars(&ctx.field, nu) {
                    if chi == nu || chi == nu.frob() {
                        continue;
                    }
                    let pr = predict_with(&ctx.field, nu, chi, Monomials::Alternate).unwrap();
                    if matches!(pr.clause, Clause::EvenType1Even | Clause::EvenType2Even) {
                        seen += 1;
                    }
                    assert!(modp_test_vector(&ctx, nu, chi, pr.mu).unwrap(), "p={p} nu=({a},{b}) chi={}", chi.k());
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn prediction_examples() {
        let f = FieldCtx::new(5).unwrap();
        let nu = char_from_digits(&f, 3, 1).unwrap();
        // trivial chi is type 2, t = 4 (even) for nu = (3,1): even/type2/t-even
        let pr = predict(&f, nu, MultChar::from_weight(5, 0)).unwrap();
        assert_eq!(pr.clause, Clause::EvenType2Even);
        let pr = predict(&f, nu, MultChar::from_weight(5, 12)).unwrap();
        assert_eq!((pr.clause, pr.mu), (Clause::EvenType1Odd, 2));
        let nu21 = char_from_digits(&f, 2, 1).unwrap();
        for chi in crate::ffchar::compatible_chars(&f, nu21) {
            if chi != nu21 && chi != nu21.frob() {
                assert_eq!(predict(&f, nu21, chi).unwrap().clause, Clause::OddAdjacent);
            }
        }
        assert_eq!(predict(&f, nu, nu), Err(ModpError::Excluded(8)));
    }

    #[test]
    fn modp_examples() {
        let ctx = PrimeCtx::new(5).unwrap();
        let nu = char_from_digits(&ctx.field, 3, 1).unwrap();
        let quad = MultChar::from_weight(5, 12);
        assert!(modp_test_vector(&ctx, nu, quad, 2).unwrap());
        // quad lives on V1 (weight 12), mu = 0 lives on V2
        assert!(!modp_test_vector(&ctx, nu, quad, 0).unwrap());
        assert_eq!(modp_test_vector(&ctx, nu, nu, 0), Err(ModpError::Excluded(8)));
    }

    #[test]
    fn brauer_small() {
        let ctx = PrimeCtx::new(5).unwrap();
        for k in 0..24 {
            let nu = MultChar::from_weight(5, k);
            if nu.is_regular() {
                let rep = KirillovRep::new(&ctx, nu).unwrap();
                assert_eq!(brauer_check(&rep).unwrap(), 4 + 6 + 10);
            }
        }
    }
}
