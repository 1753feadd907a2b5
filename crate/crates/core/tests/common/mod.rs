//! Dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

pub type CMat = Vec<Vec<Complex64>>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn identity(n: usize) -> CMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { ONE } else { ZERO }).collect())
        .collect()
}

pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![vec![ZERO; p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let aik = a[i][k];
            if aik == ZERO {
                continue;
            }
            for j in 0..p {
                out[i][j] += aik * bk[j];
            }
        }
    }
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![ZERO; ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &CMat, v: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn scaled(a: &CMat, s: Complex64) -> CMat {
    a.iter().map(|r| r.iter().map(|v| v * s).collect()).collect()
}

fn add(a: &CMat, b: &CMat) -> CMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

fn one_norm(a: &CMat) -> f64 {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// exp(A) by scaling and squaring with a 24-term Taylor series.
pub fn expm(a: &CMat) -> CMat {
    let n = a.len();
    let mut squarings = 0;
    let mut norm = one_norm(a);
    while norm > 0.25 {
        norm /= 2.0;
        squarings += 1;
    }
    let a = scaled(a, Complex64::new(0.5f64.powi(squarings), 0.0));
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=24 {
        term = scaled(&matmul(&term, &a), Complex64::new(1.0 / k as f64, 0.0));
        result = add(&result, &term);
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

pub fn pauli_1q(axis: char) -> CMat {
    match axis {
        'I' => identity(2),
        'X' => vec![vec![ZERO, ONE], vec![ONE, ZERO]],
        'Y' => vec![vec![ZERO, -I], vec![I, ZERO]],
        'Z' => vec![vec![ONE, ZERO], vec![ZERO, -ONE]],
        _ => panic!("bad axis {axis}"),
    }
}

/// Full 2ⁿ×2ⁿ matrix of a Pauli string; qubit 0 is the least significant
/// bit, so it is the rightmost Kronecker factor.
pub fn pauli_matrix(n_qubits: usize, terms: &[(usize, char)]) -> CMat {
    let mut out = vec![vec![ONE]];
    for q in (0..n_qubits).rev() {
        let axis = terms.iter().find(|(t, _)| *t == q).map_or('I', |(_, a)| *a);
        out = kron(&out, &pauli_1q(axis));
    }
    out
}

/// exp(iθP) computed by the dense exponential.
pub fn pauli_exp_matrix(n_qubits: usize, terms: &[(usize, char)], theta: f64) -> CMat {
    expm(&scaled(&pauli_matrix(n_qubits, terms), Complex64::new(0.0, theta)))
}

pub fn hadamard_all(n_qubits: usize) -> CMat {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let h = vec![vec![s, s], vec![s, -s]];
    let mut out = vec![vec![ONE]];
    for _ in 0..n_qubits {
        out = kron(&out, &h);
    }
    out
}

pub fn zero_state(n_qubits: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; 1 << n_qubits];
    v[0] = ONE;
    v
}

/// Circuit unitary of a 1-/2-local Pauli feature map with the shifted
/// product data map, built from dense gates.
pub fn feature_map_unitary(paulis: &[&str], alpha: f64, depth: usize, x: &[f64]) -> CMat {
    let n = x.len();
    let mut layer = identity(1 << n);
    for p in paulis {
        let axes: Vec<char> = p.chars().collect();
        match axes.len() {
            1 => {
                for i in 0..n {
                    let g = pauli_exp_matrix(n, &[(i, axes[0])], alpha * x[i]);
                    layer = matmul(&g, &layer);
                }
            }
            2 => {
                for i in 0..n {
                    for j in i + 1..n {
                        let phi = (PI - x[i]) * (PI - x[j]);
                        let g = pauli_exp_matrix(n, &[(i, axes[0]), (j, axes[1])], alpha * phi);
                        layer = matmul(&g, &layer);
                    }
                }
            }
            _ => panic!("oracle handles 1- and 2-local terms"),
        }
    }
    let rep = matmul(&layer, &hadamard_all(n));
    let mut u = identity(1 << n);
    for _ in 0..depth {
        u = matmul(&rep, &u);
    }
    u
}

pub fn random_point<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.random_range(0.0..2.0 * PI)).collect()
}

/// Exact optimum of the regularized dual
/// max (1−λ₁)Σβ − ½ Σ β_iβ_j y_iy_j (K_ij + 2λ₂δ_ij), 0 ≤ β ≤ C, yᵀβ = 0,
/// by enumerating which coordinates sit at 0, at C, or strictly inside.
/// Exponential in m; meant for m ≤ 8.
pub fn brute_force_dual(k: &[Vec<f64>], y: &[f64], c: f64, lambda1: f64, lambda2: f64) -> (Vec<f64>, f64) {
    let m = y.len();
    let q: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| y[i] * y[j] * (k[i][j] + if i == j { 2.0 * lambda2 } else { 0.0 }))
                .collect()
        })
        .collect();
    let p = 1.0 - lambda1;
    let objective = |b: &[f64]| -> f64 {
        let mut quad = 0.0;
        for i in 0..m {
            for j in 0..m {
                quad += b[i] * b[j] * q[i][j];
            }
        }
        p * b.iter().sum::<f64>() - 0.5 * quad
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for code in 0..3usize.pow(m as u32) {
        // 0 → at zero, 1 → at C, 2 → free
        let status: Vec<usize> = (0..m).map(|i| (code / 3usize.pow(i as u32)) % 3).collect();
        let free: Vec<usize> = (0..m).filter(|&i| status[i] == 2).collect();
        let mut beta: Vec<f64> = status.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        if !free.is_empty() {
            // stationarity on free coordinates plus the equality constraint
            let f = free.len();
            let mut a = vec![vec![0.0; f + 2]; f + 1];
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[r][s] = q[i][j];
                }
                a[r][f] = y[i];
                let fixed: f64 = (0..m).filter(|j| status[*j] == 1).map(|j| q[i][j] * c).sum();
                a[r][f + 1] = p - fixed;
            }
            for (s, &j) in free.iter().enumerate() {
                a[f][s] = y[j];
            }
            a[f][f + 1] = -(0..m).filter(|j| status[*j] == 1).map(|j| y[j] * c).sum::<f64>();
            let Some(sol) = solve_linear(a) else { continue };
            for (s, &j) in free.iter().enumerate() {
                beta[j] = sol[s];
            }
        }
        let feasible = beta.iter().all(|b| *b >= -1e-12 && *b <= c + 1e-12)
            && beta.iter().zip(y).map(|(b, y)| b * y).sum::<f64>().abs() < 1e-9;
        if !feasible {
            continue;
        }
        let obj = objective(&beta);
        if best.as_ref().is_none_or(|(_, o)| obj > *o) {
            best = Some((beta, obj));
        }
    }
    best.expect("β = 0 is always feasible")
}

/// Gaussian elimination with partial pivoting on an augmented matrix.
fn solve_linear(mut a: Vec<Vec<f64>>) -> Option<Vec<f64>> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

/// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Returns the
/// eigenvalues and the eigenvectors as columns.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

pub fn min_eigenvalue(a: Vec<Vec<f64>>) -> f64 {
    jacobi_eigen(a).0.into_iter().fold(f64::INFINITY, f64::min)
}
