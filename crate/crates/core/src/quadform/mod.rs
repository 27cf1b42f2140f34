//! Positive definite binary quadratic forms `ax^2 + bxy + cy^2`.
//!
//! * [`QuadForm`] with reduction, Dirichlet composition and lattice counting,
//! * [`ClassGroup`] of primitive forms of a discriminant with its characters,
//! * theta coefficients `a_χ(n)` of class-group characters (see [`theta`]).

mod group;
pub mod theta;

use std::fmt;

use crate::arith::{exact_sqrt, ext_gcd, gcd, isqrt};
use crate::error::{Error, Result};

pub use group::{CharacterTable, ClassGroup, DEFAULT_DISCRIMINANT_BOUND};
pub use theta::{
    class_representation_counts, ideal_count, is_fundamental_discriminant, theta_coefficients, theta_from_prime_ideals,
    verify_character_decomposition, ThetaCoefficients,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    /// Positive definite form; rejects `a <= 0` or `b^2 - 4ac >= 0`.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let f = QuadForm { a, b, c };
        if a <= 0 || f.discriminant() >= 0 {
            return Err(Error::NotPositiveDefinite { a, b, c });
        }
        Ok(f)
    }

    /// The principal form of discriminant `d`.
    pub fn principal(d: i64) -> Result<Self> {
        if d >= 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(d));
        }
        let b = d.rem_euclid(2);
        QuadForm::new(1, b, (b * b - d) / 4)
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// Inverse class representative `(a, -b, c)`.
    pub fn inverse(&self) -> QuadForm {
        QuadForm {
            a: self.a,
            b: -self.b,
            c: self.c,
        }
    }

    /// Substitution `(x, y) -> (p x + q y, r x + s y)`; properly equivalent
    /// when `ps - qr = 1`.
    pub fn transform(&self, p: i64, q: i64, r: i64, s: i64) -> QuadForm {
        QuadForm {
            a: self.eval(p, r),
            b: 2 * self.a * p * q + self.b * (p * s + q * r) + 2 * self.c * r * s,
            c: self.eval(q, s),
        }
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// Class group of discriminant `d` with the default bound on `|d|`.
pub fn class_group(d: i64) -> Result<ClassGroup> {
    ClassGroup::new(d)
}

/// The reduced representative of the proper equivalence class of `form`.
pub fn reduce(form: QuadForm) -> Result<QuadForm> {
    let QuadForm { mut a, mut b, mut c } = form;
    if a <= 0 || form.discriminant() >= 0 {
        return Err(Error::NotPositiveDefinite { a, b, c });
    }
    loop {
        // x -> x + k y brings b into (-a, a].
        let k = (a - b).div_euclid(2 * a);
        c += b * k + a * k * k;
        b += 2 * a * k;
        if a > c {
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return Ok(QuadForm { a, b, c });
    }
}

/// Dirichlet composition of two primitive forms of equal discriminant, reduced.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm> {
    let d = f.discriminant();
    if g.discriminant() != d {
        return Err(Error::InvalidDiscriminant(g.discriminant()));
    }
    let mean = (f.b + g.b) / 2;
    let (g1, x1, y1) = ext_gcd(f.a, g.a);
    let (e, s, w) = ext_gcd(g1, mean);
    let (u, v) = (s * x1, s * y1);
    let (a1, a2, b1, b2) = (f.a as i128, g.a as i128, f.b as i128, g.b as i128);
    let e128 = e as i128;
    let big_a = a1 * a2 / (e128 * e128);
    let numerator =
        u as i128 * a1 * b2 + v as i128 * a2 * b1 + w as i128 * (b1 * b2 + d as i128) / 2;
    debug_assert_eq!(numerator % e128, 0);
    let big_b = (numerator / e128).rem_euclid(2 * big_a);
    let big_c = (big_b * big_b - d as i128) / (4 * big_a);
    debug_assert_eq!((big_b * big_b - d as i128) % (4 * big_a), 0);
    reduce(QuadForm {
        a: big_a as i64,
        b: big_b as i64,
        c: big_c as i64,
    })
}

/// `r(n, Q)`: ordered integer pairs `(x, y)` with `Q(x, y) = n`.
pub fn count_representations(form: &QuadForm, n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let d = form.discriminant();
    let (a, b, n) = (form.a, form.b, n as i64);
    let y_max = isqrt((4 * a * n / -d) as u64) as i64;
    let mut count = 0;
    for y in -y_max..=y_max {
        // a x^2 + (b y) x + (c y^2 - n) = 0 has discriminant D y^2 + 4 a n.
        let disc = d * y * y + 4 * a * n;
        let Some(s) = exact_sqrt(disc) else { continue };
        for root in [-b * y + s, -b * y - s] {
            if root % (2 * a) == 0 {
                count += 1;
            }
            if s == 0 {
                break;
            }
        }
    }
    count
}

/// `r(n, Q)` for every `1 <= n <= limit` in one pass over the lattice points
/// inside `Q(x, y) <= limit`; slot 0 is left at zero.
pub fn representation_counts(form: &QuadForm, limit: usize) -> Vec<u64> {
    let mut counts = vec![0u64; limit + 1];
    let d = form.discriminant();
    let (a, b) = (form.a, form.b);
    let lim = limit as i64;
    let y_max = isqrt((4 * a * lim / -d) as u64) as i64 + 1;
    for y in -y_max..=y_max {
        let disc = d * y * y + 4 * a * lim;
        if disc < 0 {
            continue;
        }
        let s = (disc as f64).sqrt();
        let lo = ((-b * y) as f64 - s) / (2 * a) as f64;
        let hi = ((-b * y) as f64 + s) / (2 * a) as f64;
        for x in (lo.floor() as i64 - 1)..=(hi.ceil() as i64 + 1) {
            let v = form.eval(x, y);
            if v >= 1 && v <= lim {
                counts[v as usize] += 1;
            }
        }
    }
    counts
}
