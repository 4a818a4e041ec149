//! Plain-array complex arithmetic used as an independent oracle.
#![allow(dead_code, clippy::needless_range_loop)]

use nalgebra::Matrix4;
use num_complex::Complex64 as C;

pub type M2 = [[C; 2]; 2];
pub type M4 = [[C; 4]; 4];

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn sigma(k: usize) -> M2 {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match k {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        3 => [[o, z], [z, -o]],
        _ => panic!("no such Pauli"),
    }
}

pub fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[C::default(); 2]; 2];
    for r in 0..2 {
        for col in 0..2 {
            out[r][col] = a[r][0] * b[0][col] + a[r][1] * b[1][col];
        }
    }
    out
}

pub fn scale2(a: &M2, s: f64) -> M2 {
    a.map(|row| row.map(|z| z * s))
}

pub fn dag4(a: &M4) -> M4 {
    let mut out = [[C::default(); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = a[col][r].conj();
        }
    }
    out
}

pub fn mul4(a: &M4, b: &M4) -> M4 {
    let mut out = [[C::default(); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            for k in 0..4 {
                out[r][col] += a[r][k] * b[k][col];
            }
        }
    }
    out
}

/// Control-first tensor product: row index 2·c + t.
pub fn kron(a: &M2, b: &M2) -> M4 {
    let mut out = [[C::default(); 4]; 4];
    for (r, col) in (0..4).flat_map(|r| (0..4).map(move |col| (r, col))) {
        out[r][col] = a[r / 2][col / 2] * b[r % 2][col % 2];
    }
    out
}

pub fn add4(a: &mut M4, b: &M4) {
    for r in 0..4 {
        for col in 0..4 {
            a[r][col] += b[r][col];
        }
    }
}

pub fn ket_bra(v: [C; 2]) -> M2 {
    [
        [v[0] * v[0].conj(), v[0] * v[1].conj()],
        [v[1] * v[0].conj(), v[1] * v[1].conj()],
    ]
}

pub fn pure_target(theta: f64, phi: f64) -> M2 {
    let (s, co) = (theta / 2.0).sin_cos();
    ket_bra([c(co, 0.0), C::from_polar(s, phi)])
}

pub fn control(gamma: f64) -> M2 {
    ket_bra([c(gamma.sqrt(), 0.0), c((1.0 - gamma).sqrt(), 0.0)])
}

/// Σ_k S_k (ρ_c ⊗ ρ_t) S_k† with S_ij = |0⟩⟨0| ⊗ A_i B_j + |1⟩⟨1| ⊗ B_j A_i.
pub fn switch_output(a: &[M2], b: &[M2], rho_c: &M2, rho_t: &M2) -> M4 {
    let input = kron(rho_c, rho_t);
    let p0 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]];
    let p1 = [[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let mut out = [[C::default(); 4]; 4];
    for ai in a {
        for bj in b {
            let mut s = kron(&p0, &mul2(ai, bj));
            add4(&mut s, &kron(&p1, &mul2(bj, ai)));
            add4(&mut out, &mul4(&mul4(&s, &input), &dag4(&s)));
        }
    }
    out
}

pub fn depolarizing_ops(q: f64) -> Vec<M2> {
    let p = [1.0 - 0.75 * q, q / 4.0, q / 4.0, q / 4.0];
    (0..4).map(|k| scale2(&sigma(k), p[k].sqrt())).collect()
}

pub fn eigenvalues4(m: &M4) -> Vec<f64> {
    let mut v: Vec<f64> = Matrix4::from_fn(|r, col| m[r][col])
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn entropy_bits(eigs: &[f64]) -> f64 {
    eigs.iter()
        .filter(|&&l| l > 1e-15)
        .map(|&l| -l * l.log2())
        .sum()
}

pub fn max_diff_lib(ours: &M4, lib: &causal_switch_core::ComplexMatrix) -> f64 {
    let mut d = 0.0f64;
    for r in 0..4 {
        for col in 0..4 {
            d = d.max((ours[r][col] - lib.get(r, col)).norm());
        }
    }
    d
}
