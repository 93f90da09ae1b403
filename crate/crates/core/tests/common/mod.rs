//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the closed forms it is used to check.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

/// Dense annihilation operator on the truncated Fock space {|0⟩ … |dim-1⟩}.
pub fn annihilation(dim: usize) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; dim]; dim];
    for m in 1..dim {
        a[m - 1][m] = (m as f64).sqrt();
    }
    a
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = m.len();
    (0..d).map(|i| (0..d).map(|j| m[j][i]).collect()).collect()
}

fn apply_real(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn fock_ket(dim: usize, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[n] = 1.0;
    v
}

/// ⟨n-d| a^d |n⟩ for one mode by repeated application of the dense matrix.
pub fn ladder_lowering_element(n: u32, d: u32) -> f64 {
    let dim = n as usize + 2;
    let a = annihilation(dim);
    let mut v = fock_ket(dim, n as usize);
    for _ in 0..d {
        v = apply_real(&a, &v);
    }
    if d > n {
        return 0.0;
    }
    v[(n - d) as usize]
}

/// ⟨n-d| a^d |n⟩ for three modes.
pub fn ladder_monomial_element(n: [u32; 3], d: [u32; 3]) -> f64 {
    (0..3)
        .map(|i| ladder_lowering_element(n[i], d[i]))
        .product()
}

/// ⟨n+1| a^j (a†)^{j+1} |n⟩ from dense matrices.
pub fn ladder_sideband_element(j: u32, n: u32) -> f64 {
    let dim = (n + j + 3) as usize;
    let a = annihilation(dim);
    let ad = transpose(&a);
    let mut v = fock_ket(dim, n as usize);
    for _ in 0..=j {
        v = apply_real(&ad, &v);
    }
    for _ in 0..j {
        v = apply_real(&a, &v);
    }
    v[n as usize + 1]
}

pub type Mat3 = [[C64; 3]; 3];

fn matmul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// exp(-iHt) by Taylor series with scaling and squaring.
pub fn taylor_expm(h: &Mat3, t: f64) -> Mat3 {
    let norm: f64 = h.iter().flatten().map(|c| c.norm()).sum::<f64>() * t.abs();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = t / 2f64.powi(squarings as i32);
    let mut x = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            x[i][j] = C64::new(0.0, -scale) * h[i][j];
        }
    }
    let mut result = [[C64::new(0.0, 0.0); 3]; 3];
    let mut term = [[C64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        result[i][i] = C64::new(1.0, 0.0);
        term[i][i] = C64::new(1.0, 0.0);
    }
    for k in 1..40 {
        term = matmul(&term, &x);
        for row in term.iter_mut() {
            for c in row.iter_mut() {
                *c /= k as f64;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// The survival curve written out directly, as a function of phase ωt.
pub fn survival_curve(chi: f64, phase: f64) -> f64 {
    let c2 = chi * chi;
    ((c2 + phase.cos()) / (c2 + 1.0)).powi(2)
}

/// (minimum, phase of first minimum) over `intervals + 1` grid phases in
/// [0, 2π]. The first minimum is the first grid local minimum whose value is
/// within the discretization floor of the global minimum.
pub fn grid_min(chi: f64, intervals: usize) -> (f64, f64) {
    let h = TAU / intervals as f64;
    let v: Vec<f64> = (0..=intervals)
        .map(|k| survival_curve(chi, k as f64 * h))
        .collect();
    let m = v.iter().copied().fold(f64::INFINITY, f64::min);
    let k = (1..intervals)
        .find(|&k| v[k] <= v[k - 1] && v[k] <= v[k + 1] && v[k] <= m + h * h)
        .expect("a grid minimum exists");
    (m, k as f64 * h)
}

/// Trapezoidal period average of an arbitrary periodic function of phase.
pub fn period_average(f: impl Fn(f64) -> f64, panels: usize) -> f64 {
    let h = TAU / panels as f64;
    let interior: f64 = (1..panels).map(|k| f(k as f64 * h)).sum();
    (interior + 0.5 * (f(0.0) + f(TAU))) / panels as f64
}

/// Fraction of a period where the curve is below `threshold` (midpoint rule).
pub fn grid_fraction_below(chi: f64, threshold: f64, intervals: usize) -> f64 {
    let h = TAU / intervals as f64;
    (0..intervals)
        .filter(|&k| survival_curve(chi, (k as f64 + 0.5) * h) < threshold)
        .count() as f64
        / intervals as f64
}

/// P^χ(t) - P⁰(t) at |α| = 1, written with product-to-sum identities so the
/// quadratic terms of A - B cancel analytically rather than in floating point.
pub fn survival_gap(chi: f64, t: f64) -> f64 {
    let c2 = chi * chi;
    let w = (1.0 + c2).sqrt();
    let w_minus_one = c2 / (w + 1.0);
    let a = (c2 + (w * t).cos()) / (1.0 + c2);
    let b = t.cos();
    let s = (0.5 * t).sin();
    let diff = 2.0 * (c2 * s * s - (0.5 * (w + 1.0) * t).sin() * (0.5 * w_minus_one * t).sin())
        / (1.0 + c2);
    diff * (a + b)
}
