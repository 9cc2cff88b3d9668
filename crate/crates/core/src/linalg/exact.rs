//! Exact kernels over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{dot, is_zero_vector, Rational};

/// Scale `v` to the primitive integer vector with the same direction.
fn primitive(v: &mut [Rational]) {
    let lcm = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let gcd = v
        .iter()
        .filter(|x| !x.is_zero())
        .fold(BigInt::zero(), |acc, x| acc.gcd(&(x.numer() * (&lcm / x.denom()))));
    if gcd.is_zero() {
        return;
    }
    let factor = Rational::new(lcm, gcd);
    for x in v.iter_mut() {
        *x = &*x * &factor;
    }
}

/// Subtract from `v` its projections onto the pairwise-orthogonal `basis`.
fn reduce_against(v: &mut [Rational], basis: &[Vec<Rational>]) {
    for b in basis {
        let num = dot(v, b);
        if num.is_zero() {
            continue;
        }
        let coeff = num / dot(b, b);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= &coeff * y;
        }
    }
}

/// Unnormalized Gram–Schmidt; output vectors are primitive integer vectors.
pub(crate) fn orthogonal_basis(vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        reduce_against(&mut w, &out);
        if !is_zero_vector(&w) {
            primitive(&mut w);
            out.push(w);
        }
    }
    out
}

pub(crate) fn complement_basis(
    sub: &[Vec<Rational>],
    amb: &[Vec<Rational>],
) -> Vec<Vec<Rational>> {
    let mut found: Vec<Vec<Rational>> = Vec::new();
    for a in amb {
        let mut w = a.clone();
        reduce_against(&mut w, sub);
        reduce_against(&mut w, &found);
        if !is_zero_vector(&w) {
            primitive(&mut w);
            found.push(w);
        }
    }
    found
}

/// Right kernel of a row-major matrix by reduction to row echelon form.
pub(crate) fn kernel(rows: usize, cols: usize, data: &[Rational]) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = data.chunks(cols.max(1)).take(rows).map(<[_]>::to_vec).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut out = Vec::new();
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        out.push(v);
    }
    out
}

/// Characteristic polynomial of a tridiagonal integer matrix, coefficients
/// from the constant term upwards.
pub(crate) fn tridiagonal_charpoly(a: &[i64], b: &[i64], c: &[i64]) -> Vec<BigInt> {
    // f_{k+1}(t) = (t - a_k) f_k(t) - b_{k-1} c_{k-1} f_{k-1}(t)
    let mut prev: Vec<BigInt> = vec![BigInt::one()];
    if a.is_empty() {
        return prev;
    }
    let mut cur: Vec<BigInt> = vec![BigInt::from(-a[0]), BigInt::one()];
    for k in 1..a.len() {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, coeff) in cur.iter().enumerate() {
            next[i + 1] += coeff;
            next[i] -= coeff * a[k];
        }
        let off = BigInt::from(b[k - 1]) * c[k - 1];
        for (i, coeff) in prev.iter().enumerate() {
            next[i] -= coeff * &off;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn eval(poly: &[BigInt], t: &BigInt) -> BigInt {
    poly.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

/// Synthetic division by `(t - root)`; the remainder must be zero.
fn deflate(poly: &[BigInt], root: &BigInt) -> Vec<BigInt> {
    let deg = poly.len() - 1;
    let mut out = vec![BigInt::zero(); deg];
    let mut carry = BigInt::zero();
    for i in (1..=deg).rev() {
        carry = &poly[i] + carry * root;
        out[i - 1] = carry.clone();
    }
    out
}

/// Integer roots of the tridiagonal characteristic polynomial, decreasing.
///
/// The polynomial is monic with integer coefficients, so every rational root
/// is an integer, and every eigenvalue is bounded by the largest absolute row
/// sum. Returns `None` unless all roots are found this way.
pub(crate) fn integer_tridiagonal_roots(a: &[i64], b: &[i64], c: &[i64]) -> Option<Vec<BigInt>> {
    let mut poly = tridiagonal_charpoly(a, b, c);
    let bound = (0..a.len())
        .map(|k| {
            a[k].abs()
                + if k < b.len() { b[k].abs() } else { 0 }
                + if k > 0 { c[k - 1].abs() } else { 0 }
        })
        .max()
        .unwrap_or(0);
    let mut roots = Vec::new();
    for t in (-bound..=bound).rev() {
        let t = BigInt::from(t);
        while poly.len() > 1 && eval(&poly, &t).is_zero() {
            poly = deflate(&poly, &t);
            roots.push(t.clone());
        }
    }
    (poly.len() == 1 && poly[0].abs().is_one()).then_some(roots)
}
