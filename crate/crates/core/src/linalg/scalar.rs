use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

use super::{exact, float, Tolerance};

/// Exact rational scalar.
pub type Rational = BigRational;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

/// A real scalar field usable by every construction in the crate.
///
/// The two implementations are `f64` (rank and containment decided at a
/// tolerance) and [`Rational`] (decisions are exact). The mode-specific
/// kernels live on the trait so that subspace arithmetic can be written once.
pub trait Scalar:
    Num + Neg<Output = Self> + Clone + Debug + Display + PartialOrd + Send + Sync + 'static
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    /// True if the value is zero (exactly), or within `rel * scale` in float mode.
    fn is_negligible(&self, scale: f64, rel: f64) -> bool;

    /// Tolerances appropriate for subspaces built in this mode.
    fn default_tolerance() -> Tolerance;

    /// Basis of the span of `vectors`: orthonormal in float mode, pairwise
    /// orthogonal in exact mode.
    fn orthogonal_basis(vectors: &[Vec<Self>], ambient: usize, tol: &Tolerance) -> Vec<Vec<Self>>;

    /// Basis of the right kernel of the `rows x cols` row-major matrix.
    fn kernel(rows: usize, cols: usize, data: &[Self], tol: &Tolerance) -> Vec<Vec<Self>>;

    /// Given an orthogonal basis of `sub` contained in span(`amb`), a basis
    /// of the orthogonal complement of `sub` in span(`amb`) with exactly
    /// `target` vectors.
    fn complement_basis(
        sub: &[Vec<Self>],
        amb: &[Vec<Self>],
        ambient: usize,
        target: usize,
        tol: &Tolerance,
    ) -> Vec<Vec<Self>>;

    /// Roots of the characteristic polynomial of the tridiagonal matrix with
    /// diagonal `a`, superdiagonal `b`, subdiagonal `c`, sorted decreasing.
    /// `None` when the roots cannot be represented in this mode.
    fn tridiagonal_eigenvalues(a: &[i64], b: &[i64], c: &[i64]) -> Option<Vec<Self>>;
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_negligible(&self, scale: f64, rel: f64) -> bool {
        self.abs() <= rel * scale
    }

    fn default_tolerance() -> Tolerance {
        Tolerance::float_default()
    }

    fn orthogonal_basis(vectors: &[Vec<Self>], ambient: usize, tol: &Tolerance) -> Vec<Vec<Self>> {
        float::orthonormal_basis(vectors, ambient, tol.rank)
    }

    fn kernel(rows: usize, cols: usize, data: &[Self], tol: &Tolerance) -> Vec<Vec<Self>> {
        float::kernel(rows, cols, data, tol.rank)
    }

    fn complement_basis(
        sub: &[Vec<Self>],
        amb: &[Vec<Self>],
        ambient: usize,
        target: usize,
        _tol: &Tolerance,
    ) -> Vec<Vec<Self>> {
        float::complement_basis(sub, amb, ambient, target)
    }

    fn tridiagonal_eigenvalues(a: &[i64], b: &[i64], c: &[i64]) -> Option<Vec<Self>> {
        Some(float::tridiagonal_eigenvalues(a, b, c))
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn is_negligible(&self, _scale: f64, _rel: f64) -> bool {
        self.is_zero()
    }

    fn default_tolerance() -> Tolerance {
        Tolerance::exact()
    }

    fn orthogonal_basis(vectors: &[Vec<Self>], _ambient: usize, _tol: &Tolerance) -> Vec<Vec<Self>> {
        exact::orthogonal_basis(vectors)
    }

    fn kernel(rows: usize, cols: usize, data: &[Self], _tol: &Tolerance) -> Vec<Vec<Self>> {
        exact::kernel(rows, cols, data)
    }

    fn complement_basis(
        sub: &[Vec<Self>],
        amb: &[Vec<Self>],
        _ambient: usize,
        _target: usize,
        _tol: &Tolerance,
    ) -> Vec<Vec<Self>> {
        exact::complement_basis(sub, amb)
    }

    fn tridiagonal_eigenvalues(a: &[i64], b: &[i64], c: &[i64]) -> Option<Vec<Self>> {
        exact::integer_tridiagonal_roots(a, b, c)
            .map(|roots| roots.into_iter().map(Rational::from_integer).collect())
    }
}

/// Parse a rational (`-3/4`) or decimal (`0.25`, `1e-3`) literal.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    let factor = num_traits::pow(ten, scale.unsigned_abs() as usize);
    if scale >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Some(if negative { -value } else { value })
}

pub(crate) fn dot<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter()
        .zip(v)
        .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

pub(crate) fn norm_f64<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(|x| x.to_f64().powi(2)).sum::<f64>().sqrt()
}

pub(crate) fn is_zero_vector<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(Zero::is_zero)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_literals() {
        assert_eq!(parse_rational("3"), Some(Rational::from_i64(3)));
        assert_eq!(parse_rational("-3/6"), Some(Rational::from_ratio(-1, 2)));
        assert_eq!(parse_rational("0.25"), Some(Rational::from_ratio(1, 4)));
        assert_eq!(parse_rational("-.5"), Some(Rational::from_ratio(-1, 2)));
        assert_eq!(parse_rational("1e-3"), Some(Rational::from_ratio(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(Rational::from_i64(250)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }

    #[test]
    fn rationals_are_reduced() {
        let r = Rational::from_ratio(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }
}
