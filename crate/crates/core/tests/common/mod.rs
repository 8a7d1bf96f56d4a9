#![allow(dead_code)]

use num_complex::Complex64;
use tailored_qec::ingest::PTM_DIM;

pub type Mat = [[Complex64; 4]; 4];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(letter: char) -> [[Complex64; 2]; 2] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match letter {
        'I' => [[o, z], [z, o]],
        'X' => [[z, o], [o, z]],
        'Y' => [[z, -i], [i, z]],
        'Z' => [[o, z], [z, -o]],
        _ => panic!("bad letter {letter}"),
    }
}

pub fn kron(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> Mat {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            m[r][col] = a[r / 2][col / 2] * b[r % 2][col % 2];
        }
    }
    m
}

/// Two-qubit Pauli matrix for a label like "XZ" (left letter is the first tensor factor).
pub fn pauli2(label: &str) -> Mat {
    let l: Vec<char> = label.chars().collect();
    kron(&single(l[0]), &single(l[1]))
}

pub fn ptm_label(i: usize) -> String {
    let l = ['I', 'X', 'Y', 'Z'];
    format!("{}{}", l[i / 4], l[i % 4])
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            m[r][col] = (0..4).map(|k| a[r][k] * b[k][col]).sum();
        }
    }
    m
}

pub fn dagger(a: &Mat) -> Mat {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            m[r][col] = a[col][r].conj();
        }
    }
    m
}

pub fn trace(a: &Mat) -> Complex64 {
    (0..4).map(|k| a[k][k]).sum()
}

/// PTM of the channel `rho -> sum_k K rho K^dagger`: `R[i][j] = Tr(P_i Phi(P_j)) / 4`.
pub fn ptm_from_kraus(kraus: &[Mat]) -> [[f64; PTM_DIM]; PTM_DIM] {
    let paulis: Vec<Mat> = (0..PTM_DIM).map(|i| pauli2(&ptm_label(i))).collect();
    let mut r = [[0.0; PTM_DIM]; PTM_DIM];
    for j in 0..PTM_DIM {
        let mut out = [[c(0.0, 0.0); 4]; 4];
        for k in kraus {
            let term = mul(&mul(k, &paulis[j]), &dagger(k));
            for a in 0..4 {
                for b in 0..4 {
                    out[a][b] += term[a][b];
                }
            }
        }
        for i in 0..PTM_DIM {
            let t = trace(&mul(&paulis[i], &out)) / 4.0;
            assert!(t.im.abs() < 1e-12);
            r[i][j] = t.re;
        }
    }
    r
}

/// Kraus operators `sqrt(p_P) P` of a Pauli channel given as (label, probability) pairs.
pub fn pauli_kraus(probs: &[(&str, f64)]) -> Vec<Mat> {
    probs
        .iter()
        .map(|&(label, p)| {
            let mut m = pauli2(label);
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v *= p.sqrt();
                }
            }
            m
        })
        .collect()
}

/// Pauli-twirl probabilities from Kraus operators: `sum_k |Tr(P K_k)|^2 / 16`.
pub fn twirl_from_kraus(kraus: &[Mat]) -> Vec<(String, f64)> {
    (0..PTM_DIM)
        .map(|i| {
            let label = ptm_label(i);
            let p = pauli2(&label);
            let v = kraus.iter().map(|k| trace(&mul(&p, k)).norm_sqr()).sum::<f64>() / 16.0;
            (label, v)
        })
        .collect()
}

/// `exp(-i theta P / 2)` for a two-qubit Pauli `P`.
pub fn rotation(label: &str, theta: f64) -> Mat {
    let p = pauli2(label);
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            let id = if r == col { c((theta / 2.0).cos(), 0.0) } else { c(0.0, 0.0) };
            m[r][col] = id - c(0.0, (theta / 2.0).sin()) * p[r][col];
        }
    }
    m
}

/// Amplitude damping with rate `gamma` on both qubits.
pub fn amplitude_damping(gamma: f64) -> Vec<Mat> {
    let z = c(0.0, 0.0);
    let k0 = [[c(1.0, 0.0), z], [z, c((1.0 - gamma).sqrt(), 0.0)]];
    let k1 = [[z, c(gamma.sqrt(), 0.0)], [z, z]];
    let ops = [k0, k1];
    let mut out = Vec::new();
    for a in &ops {
        for b in &ops {
            out.push(kron(a, b));
        }
    }
    out
}

pub fn log_slope(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    (y1.ln() - y0.ln()) / (x1.ln() - x0.ln())
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}
