//! Positive definite ternary quadratic forms with integer values.
//!
//! A form `ax² + by² + cz² + dyz + ezx + fxy` is written `[a,b,c,d,e,f]`.
//! Internally everything is done on the doubled Gram matrix
//!
//! ```text
//!     G = | 2a  f  e |
//!         |  f 2b  d |
//!         |  e  d 2c |
//! ```
//!
//! so that `f(x) = xᵀGx / 2` and no half-integers ever appear. The
//! discriminant is tracked as `D = 4·det(M_f) = det(G) / 2`.

mod isometry;
mod reduce;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, Mat3, Vec3};

pub use isometry::{automorphism_order, automorphisms, is_isometric};
pub use reduce::{is_minkowski_reduced, minkowski_reduce};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormError {
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is not primitive (coefficient gcd {0})")]
    NotPrimitive(i64),
    #[error("gram matrix must be symmetric with even diagonal")]
    BadGram,
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),
    #[error("cannot parse form: {0}")]
    Parse(String),
}

/// A positive definite ternary form with integer coefficients.
///
/// Forms built with [`TernaryForm::new`] are primitive (coefficient gcd 1,
/// i.e. norm ideal ℤ). Sublattices produced by the Watson and Γ constructions
/// may have a larger content; those are built with [`TernaryForm::lattice`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 6]", into = "[i64; 6]")]
pub struct TernaryForm {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    e: i64,
    f: i64,
}

impl TernaryForm {
    /// Validated primitive positive definite form.
    pub fn new(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Result<Self, FormError> {
        let form = Self::lattice(a, b, c, d, e, f)?;
        match form.content() {
            1 => Ok(form),
            g => Err(FormError::NotPrimitive(g)),
        }
    }

    /// Positive definite form of arbitrary content.
    pub fn lattice(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> Result<Self, FormError> {
        let form = TernaryForm { a, b, c, d, e, f };
        let minor2 = 4 * a as i128 * b as i128 - f as i128 * f as i128;
        if a <= 0 || minor2 <= 0 || form.disc_raw() <= 0 {
            return Err(FormError::NotPositiveDefinite);
        }
        Ok(form)
    }

    pub fn from_coeffs(coeffs: [i64; 6]) -> Result<Self, FormError> {
        let [a, b, c, d, e, f] = coeffs;
        Self::new(a, b, c, d, e, f)
    }

    /// Diagonal form `⟨a,b,c⟩`.
    pub fn diagonal(a: i64, b: i64, c: i64) -> Result<Self, FormError> {
        Self::new(a, b, c, 0, 0, 0)
    }

    /// Form of the lattice with doubled Gram matrix `g`.
    pub fn from_gram(g: &Mat3) -> Result<Self, FormError> {
        if (0..3).any(|i| g[i][i] % 2 != 0) || (0..3).any(|i| (0..3).any(|j| g[i][j] != g[j][i])) {
            return Err(FormError::BadGram);
        }
        Self::lattice(g[0][0] / 2, g[1][1] / 2, g[2][2] / 2, g[1][2], g[0][2], g[0][1])
    }

    /// `⟨1⟩ ⊥ ℓ` for a binary form `ℓ = [a,b,c]`.
    pub fn direct_sum_one(l: &BinaryForm) -> Self {
        Self::lattice(1, l.a, l.c, l.b, 0, 0).expect("orthogonal sum of definite forms is definite")
    }

    pub fn coeffs(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn e(&self) -> i64 {
        self.e
    }
    pub fn f(&self) -> i64 {
        self.f
    }

    /// Doubled Gram matrix `2M_f`.
    pub fn gram(&self) -> Mat3 {
        [[2 * self.a, self.f, self.e], [self.f, 2 * self.b, self.d], [self.e, self.d, 2 * self.c]]
    }

    pub fn eval(&self, x: &Vec3) -> i64 {
        let [x, y, z] = x.map(|v| v as i128);
        let v = self.a as i128 * x * x
            + self.b as i128 * y * y
            + self.c as i128 * z * z
            + self.d as i128 * y * z
            + self.e as i128 * z * x
            + self.f as i128 * x * y;
        i64::try_from(v).expect("form value overflow")
    }

    fn disc_raw(&self) -> i128 {
        let (a, b, c, d, e, f) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.d as i128,
            self.e as i128,
            self.f as i128,
        );
        4 * a * b * c + d * e * f - a * d * d - b * e * e - c * f * f
    }

    pub fn discriminant4(&self) -> Discriminant4 {
        Discriminant4(u64::try_from(self.disc_raw()).expect("discriminant out of range"))
    }

    /// gcd of the coefficients; the norm ideal is `content()·ℤ`.
    pub fn content(&self) -> i64 {
        arith::gcd_all(&self.coeffs())
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// True when the scale 𝔰(L) is ℤ (all cross coefficients even).
    pub fn has_integral_scale(&self) -> bool {
        self.d % 2 == 0 && self.e % 2 == 0 && self.f % 2 == 0
    }

    /// The form restricted to the lattice spanned by the columns of `basis`.
    pub fn sublattice(&self, basis: &Mat3) -> TernaryForm {
        let g = arith::congruence(&self.gram(), basis);
        TernaryForm::from_gram(&g).expect("sublattice of a definite lattice is definite")
    }

    /// Form with every coefficient divided by `k`, which must divide the content.
    pub fn divide(&self, k: i64) -> TernaryForm {
        assert!(k > 0 && self.content() % k == 0, "{k} does not divide the content of {self}");
        let c = self.coeffs().map(|v| v / k);
        TernaryForm::lattice(c[0], c[1], c[2], c[3], c[4], c[5]).unwrap()
    }

    pub fn scale(&self, k: i64) -> TernaryForm {
        assert!(k > 0);
        let c = self.coeffs().map(|v| v * k);
        TernaryForm::lattice(c[0], c[1], c[2], c[3], c[4], c[5]).unwrap()
    }

    pub fn transform(&self, u: &UnimodularMap) -> TernaryForm {
        self.sublattice(&u.0)
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{},{}]", self.a, self.b, self.c, self.d, self.e, self.f)
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>, FormError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| FormError::Parse(format!("expected [..], got {s:?}")))?;
    inner
        .split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|e| FormError::Parse(format!("{p:?}: {e}"))))
        .collect()
}

impl FromStr for TernaryForm {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = parse_ints(s)?;
        let coeffs: [i64; 6] =
            v.try_into().map_err(|_| FormError::Parse(format!("expected 6 coefficients in {s:?}")))?;
        Self::from_coeffs(coeffs)
    }
}

impl TryFrom<[i64; 6]> for TernaryForm {
    type Error = FormError;

    fn try_from(c: [i64; 6]) -> Result<Self, FormError> {
        TernaryForm::lattice(c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

impl From<TernaryForm> for [i64; 6] {
    fn from(f: TernaryForm) -> Self {
        f.coeffs()
    }
}

/// Positive definite binary form `ax² + bxy + cy²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, FormError> {
        if a <= 0 || 4 * a as i128 * c as i128 - (b as i128) * (b as i128) <= 0 {
            return Err(FormError::NotPositiveDefinite);
        }
        Ok(BinaryForm { a, b, c })
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.a, self.b, self.c)
    }
}

impl FromStr for BinaryForm {
    type Err = FormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_ints(s)?.as_slice() {
            &[a, b, c] => BinaryForm::new(a, b, c),
            _ => Err(FormError::Parse(format!("expected 3 coefficients in {s:?}"))),
        }
    }
}

/// `D = 4·det(M_f)`, always a positive integer for integer-valued forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Discriminant4(pub u64);

impl Discriminant4 {
    pub fn value(self) -> u64 {
        self.0
    }

    /// Primes dividing `2D` (the prime support of `8·df`).
    pub fn conductor_primes(self) -> Vec<u64> {
        arith::prime_divisors(2 * self.0)
    }

    /// Divisibility of `dL` by an odd `m`, read through the `4·dL` convention.
    pub fn odd_divides(self, m: u64) -> bool {
        debug_assert!(m % 2 == 1);
        self.0 % m == 0
    }
}

impl fmt::Display for Discriminant4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A change of basis with determinant ±1. Columns are images of basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMap(Mat3);

impl UnimodularMap {
    pub fn new(m: Mat3) -> Result<Self, FormError> {
        match arith::det(&m) {
            1 | -1 => Ok(UnimodularMap(m)),
            d => Err(FormError::NotUnimodular(d)),
        }
    }

    pub fn identity() -> Self {
        UnimodularMap(arith::IDENTITY)
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn det(&self) -> i64 {
        arith::det(&self.0) as i64
    }

    pub fn compose(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap(arith::mat_mul(&self.0, &other.0))
    }

    pub fn inverse(&self) -> UnimodularMap {
        let d = self.det();
        let adj = arith::adjugate(&self.0);
        UnimodularMap(adj.map(|row| row.map(|v| v * d)))
    }

    pub fn apply(&self, x: &Vec3) -> Vec3 {
        arith::mat_vec(&self.0, x)
    }

    /// True when `Uᵀ M_f U = M_g`.
    pub fn witnesses(&self, f: &TernaryForm, g: &TernaryForm) -> bool {
        arith::congruence(&f.gram(), &self.0) == g.gram()
    }
}
