use std::cmp::Ordering;

use num_integer::Integer;

use super::Discriminant;
use crate::arith::kronecker_i128;

/// Primitive positive definite form `a x^2 + b x y + c y^2`.
///
/// Equality is coefficient equality; the class operations below always return
/// the reduced representative, so equal classes compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadForm {
    a: i128,
    b: i128,
    c: i128,
}

impl QuadForm {
    /// Builds a positive definite form; primitivity is not required here.
    pub fn new(a: i128, b: i128, c: i128) -> Option<Self> {
        (a > 0 && c > 0 && b * b - 4 * a * c < 0).then_some(Self { a, b, c })
    }

    /// The form `(a, b, (b^2 - D) / 4a)` if that is integral and positive definite.
    pub fn from_ab(a: i128, b: i128, disc: i128) -> Option<Self> {
        if a <= 0 || disc >= 0 {
            return None;
        }
        let num = b * b - disc;
        (num % (4 * a) == 0).then(|| Self { a, b, c: num / (4 * a) })
    }

    pub(crate) const fn new_unchecked(a: i128, b: i128, c: i128) -> Self {
        Self { a, b, c }
    }

    pub fn a(&self) -> i128 {
        self.a
    }

    pub fn b(&self) -> i128 {
        self.b
    }

    pub fn c(&self) -> i128 {
        self.c
    }

    pub fn discriminant(&self) -> i128 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c) == 1
    }

    pub fn is_reduced(&self) -> bool {
        let b_abs = self.b.abs();
        b_abs <= self.a
            && self.a <= self.c
            && (self.b >= 0 || (b_abs != self.a && self.a != self.c))
    }

    /// Ordering used to pick representatives deterministically: by `a`, then
    /// `|b|` with the non-negative sign first, then `c`.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        (self.a, self.b.abs(), self.b < 0, self.c).cmp(&(other.a, other.b.abs(), other.b < 0, other.c))
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Reduced representative: `|b| <= a <= c`, `b >= 0` when `|b| = a` or `a = c`.
pub fn reduce(f: &QuadForm) -> QuadForm {
    let (mut a, mut b, mut c) = (f.a, f.b, f.c);
    loop {
        if !(-a < b && b <= a) {
            // b = 2aq + r with -a < r <= a
            let two_a = 2 * a;
            let mut q = Integer::div_floor(&b, &two_a);
            let mut r = b - q * two_a;
            if r > a {
                r -= two_a;
                q += 1;
            }
            c -= (b + r) * q / 2;
            b = r;
        }
        if a > c {
            b = -b;
            std::mem::swap(&mut a, &mut c);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return QuadForm { a, b, c };
    }
}

/// Principal form of discriminant `D`.
pub fn identity_form(disc: &Discriminant) -> QuadForm {
    let d = disc.value();
    if d.rem_euclid(4) == 0 {
        QuadForm::new_unchecked(1, 0, -d / 4)
    } else {
        QuadForm::new_unchecked(1, 1, (1 - d) / 4)
    }
}

pub(crate) fn identity_for(f: &QuadForm) -> QuadForm {
    let d = f.discriminant();
    if d.rem_euclid(4) == 0 {
        QuadForm::new_unchecked(1, 0, -d / 4)
    } else {
        QuadForm::new_unchecked(1, 1, (1 - d) / 4)
    }
}

/// Dirichlet composition of two primitive forms of the same discriminant,
/// returned reduced.
pub fn compose(f: &QuadForm, g: &QuadForm) -> QuadForm {
    debug_assert_eq!(f.discriminant(), g.discriminant());
    let (mut f1, mut f2) = (*f, *g);
    if f1.a > f2.a {
        std::mem::swap(&mut f1, &mut f2);
    }
    let (a1, b1) = (f1.a, f1.b);
    let (a2, b2, c2) = (f2.a, f2.b, f2.c);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (y1, d) = if a2 % a1 == 0 {
        (0, a1)
    } else {
        let e = a2.extended_gcd(&a1);
        (e.x, e.gcd)
    };
    let (x2, y2, d1) = if s % d == 0 {
        (0, -1, d)
    } else {
        let e = s.extended_gcd(&d);
        (e.x, -e.y, e.gcd)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 % v1 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    reduce(&QuadForm::new_unchecked(a3, b3, c3))
}

/// Class inverse: the reduced form of `(a, -b, c)`.
pub fn inverse(f: &QuadForm) -> QuadForm {
    reduce(&QuadForm::new_unchecked(f.a, -f.b, f.c))
}

/// `f^e` by repeated squaring.
pub fn form_pow(f: &QuadForm, mut e: u64) -> QuadForm {
    let mut acc = identity_for(f);
    let mut base = reduce(f);
    while e > 0 {
        if e & 1 == 1 {
            acc = compose(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = compose(&base, &base);
        }
    }
    acc
}

/// Reduced form of a prime ideal of norm `ell` when `ell` splits or ramifies
/// (and is prime to the conductor); `None` when `ell` is inert.
pub fn prime_form(disc: &Discriminant, ell: u64) -> Option<QuadForm> {
    let d = disc.value();
    let ell_i = ell as i128;
    if kronecker_i128(d, ell_i) < 0 {
        return None;
    }
    let b = if ell == 2 {
        match d.rem_euclid(8) {
            0 => 0,
            4 => 2,
            1 => 1,
            _ => return None,
        }
    } else {
        let root = crate::arith::sqrt_mod_prime_power_u64(d, ell, 1)
            .into_iter()
            .min()? as i128;
        if (root - d).rem_euclid(2) == 0 {
            root
        } else {
            ell_i - root
        }
    };
    let f = QuadForm::from_ab(ell_i, b, d)?;
    f.is_primitive().then(|| reduce(&f))
}
