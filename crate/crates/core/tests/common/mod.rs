//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Eigenvalues of `[[a, b], [b, d]]` from the quadratic formula, descending.
pub fn eig2(a: f64, b: f64, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    [mean + radius, mean - radius]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Coefficients of `det(x I - A) = x^3 - c2 x^2 + c1 x - c0`.
fn char_poly3(m: &[[f64; 3]; 3]) -> (f64, f64, f64) {
    let c2 = m[0][0] + m[1][1] + m[2][2];
    let c1 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    (c2, c1, det3(m))
}

/// Roots of the characteristic cubic of a symmetric 3x3 matrix by the
/// trigonometric method, each polished by Newton steps, descending.
pub fn eig3(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let (c2, c1, c0) = char_poly3(m);
    // depressed cubic x = t + c2/3: t^3 + p t + q = 0
    let shift = c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = -2.0 * c2.powi(3) / 27.0 + c2 * c1 / 3.0 - c0;
    let mut roots = if p.abs() < 1e-300 {
        [shift - q.cbrt(); 3]
    } else {
        let r = (-p / 3.0).max(0.0).sqrt();
        let arg = if r == 0.0 { 0.0 } else { (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0) };
        let phi = arg.acos() / 3.0;
        [0.0, 1.0, 2.0].map(|k| shift + 2.0 * r * (phi - 2.0 * PI * k / 3.0).cos())
    };
    let poly = |x: f64| ((x - c2) * x + c1) * x - c0;
    let deriv = |x: f64| (3.0 * x - 2.0 * c2) * x + c1;
    for x in roots.iter_mut() {
        for _ in 0..8 {
            let d = deriv(*x);
            if d == 0.0 {
                break;
            }
            let next = *x - poly(*x) / d;
            if poly(next).abs() < poly(*x).abs() {
                *x = next;
            } else {
                break;
            }
        }
    }
    roots.sort_by(|a, b| b.total_cmp(a));
    roots
}

/// Pair similarity evaluated straight from its definition.
pub fn pair_similarity_oracle(a: &[Vec<[f64; 3]>], b: &[Vec<[f64; 3]>]) -> f64 {
    let n = a.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let d: Vec<f64> = (0..3).map(|k| (a[i][j][k] - b[i][j][k]).abs()).collect();
            let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = d.iter().cloned().fold(0.0, f64::max);
            total += (1.0 - lo) / (1.0 + hi);
        }
    }
    1.0 / n as f64 + 2.0 / (n * n) as f64 * total
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn eig2_oracle_on_diagonal() {
    assert_eq!(eig2(3.0, 0.0, -1.0), [3.0, -1.0]);
}

#[test]
fn eig3_oracle_on_known_spectrum() {
    // eigenvalues 4, 1, 1 for [[2,1,1],[1,2,1],[1,1,2]]
    let r = eig3(&[[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]);
    for (g, w) in r.iter().zip([4.0, 1.0, 1.0]) {
        assert!((g - w).abs() < 1e-9, "{r:?}");
    }
}
