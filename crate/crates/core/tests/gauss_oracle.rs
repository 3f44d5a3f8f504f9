//! Weil indices against quadratic Gauss sums summed numerically.
//!
//! For `x = p^a u` with `a` in {1, 2}, the index of the reference character
//! is `p^{-a/2} * sum_{t mod p^a} exp(2 pi i u t^2 / p^a)`, a fourth root of
//! unity. The sum is computed in floating point and rounded to `mu_4`.

use std::f64::consts::PI;

use mlk_core::exactalg::GaussInt;
use mlk_core::localfield::{weil_index, AdditiveCharacter, FieldModel};

fn numeric_gauss(p: i64, a: u32, u: i64) -> GaussInt {
    let m = p.pow(a);
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for t in 0..m {
        let phase = 2.0 * PI * ((u * t % m * t) % m) as f64 / m as f64;
        re += phase.cos();
        im += phase.sin();
    }
    let scale = (m as f64).sqrt();
    let (re, im) = (re / scale, im / scale);
    let nearest = [GaussInt::ONE, GaussInt::I, -GaussInt::ONE, -GaussInt::I]
        .into_iter()
        .min_by(|x, y| {
            let d = |g: GaussInt| (re - g.re as f64).powi(2) + (im - g.im as f64).powi(2);
            d(*x).total_cmp(&d(*y))
        })
        .unwrap();
    let err = (re - nearest.re as f64).powi(2) + (im - nearest.im as f64).powi(2);
    assert!(err < 1e-12, "sum for p={p}, a={a}, u={u} is ({re}, {im}), not in mu_4");
    nearest
}

#[test]
fn weil_index_is_the_normalized_gauss_sum() {
    for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
        let field = FieldModel::padic(p).unwrap();
        let psi0 = AdditiveCharacter::reference(&field);
        for a in [1u32, 2] {
            if a == 2 && p > 23 {
                continue;
            }
            for u in 1..p {
                let x = field.element(a as i64, u).unwrap();
                let w = weil_index(&x, &psi0, &field).unwrap();
                assert_eq!(w, numeric_gauss(p, a, u), "p={p} x=p^{a}*{u}");
            }
        }
    }
}

#[test]
fn quadratic_gauss_sum_squares_to_the_sign_of_minus_one() {
    for p in [3i64, 5, 7, 11, 13] {
        let g = numeric_gauss(p, 1, 1);
        let expected = if p % 4 == 1 { GaussInt::ONE } else { -GaussInt::ONE };
        assert_eq!(g * g, expected);
    }
}
