//! Exact linear algebra over the integers, Gaussian integers, roots of unity
//! and finitely generated abelian groups.

mod finab;
mod gauss;
mod lattice;
mod matrix;
mod roots;
mod snf;

pub use finab::FinAbGroup;
pub use gauss::GaussInt;
pub use lattice::{
    hermite_basis, integer_kernel, kernel_mod, lattice_intersection, lattice_span, quotient_group, solve_integral,
    QuotientMap,
};
pub use matrix::IntMatrix;
pub use roots::MuElem;
pub use snf::{smith_normal_form, Snf};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Converts a big integer to `i64`, failing loudly instead of truncating.
pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow("i64 conversion"))
}

pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn small_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(to_i64).collect()
}

/// Non-negative remainder of `a` modulo `m > 0`.
pub fn modulo(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

pub fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: i64, b: i64) -> i64 {
    num_integer::lcm(a, b)
}

/// Modular exponentiation with `m >= 1`.
pub fn pow_mod(base: i64, exp: u64, m: i64) -> i64 {
    let m128 = m as i128;
    let mut result: i128 = 1 % m128;
    let mut b = (base as i128).rem_euclid(m128);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    result as i64
}

/// Dot product with a checked result.
pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    let s: i128 = a.iter().zip(b).map(|(&x, &y)| x as i128 * y as i128).sum();
    i64::try_from(s).expect("dot product overflow")
}

/// Iterates the integer points of the cube `[-bound, bound]^rank` in
/// lexicographic order.
pub fn window_points(rank: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let total = side.pow(rank as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut v = vec![0i64; rank];
        let mut rest = idx;
        for slot in v.iter_mut().rev() {
            *slot = (rest % side) as i64 - bound;
            rest /= side;
        }
        out.push(v);
    }
    out
}
