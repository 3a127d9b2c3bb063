//! 2x2 matrices over F_p.

use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Gl2 {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
}

impl Gl2 {
    /// `(a b; c d)` with entries reduced into `0..p`.
    pub fn new(p: u32, a: i64, b: i64, c: i64, d: i64) -> Self {
        let r = |x: i64| x.rem_euclid(p as i64) as u32;
        Gl2 { a: r(a), b: r(b), c: r(c), d: r(d) }
    }

    pub fn identity() -> Self {
        Gl2 { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn scalar(z: u32) -> Self {
        Gl2 { a: z, b: 0, c: 0, d: z }
    }

    pub fn det(self, p: u32) -> u32 {
        let p = p as u64;
        ((self.a as u64 * self.d as u64 % p + p - self.b as u64 * self.c as u64 % p) % p) as u32
    }

    pub fn is_invertible(self, p: u32) -> bool {
        self.det(p) != 0
    }

    pub fn mul(self, o: Gl2, p: u32) -> Gl2 {
        let p = p as u64;
        let f = |x: u32, y: u32, z: u32, w: u32| ((x as u64 * y as u64 + z as u64 * w as u64) % p) as u32;
        Gl2 {
            a: f(self.a, o.a, self.b, o.c),
            b: f(self.a, o.b, self.b, o.d),
            c: f(self.c, o.a, self.d, o.c),
            d: f(self.c, o.b, self.d, o.d),
        }
    }

    /// Every invertible matrix, in lexicographic order of `(a, b, c, d)`.
    pub fn all(p: u32) -> Vec<Gl2> {
        let mut out = Vec::with_capacity(((p * p - 1) * (p * p - p)) as usize);
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    for d in 0..p {
                        let g = Gl2 { a, b, c, d };
                        if g.is_invertible(p) {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(p: u32, rng: &mut R) -> Gl2 {
        loop {
            let g = Gl2 { a: rng.gen_range(0..p), b: rng.gen_range(0..p), c: rng.gen_range(0..p), d: rng.gen_range(0..p) };
            if g.is_invertible(p) {
                return g;
            }
        }
    }
}
