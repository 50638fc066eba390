//! Test-only reference implementations, written against raw arrays so they
//! share no code path with the library routines they check.

#![allow(dead_code)]

use qsync_core::{CMat, C64};

type M4 = [[C64; 4]; 4];

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn to_array(m: &CMat) -> M4 {
    assert_eq!(m.shape(), (4, 4));
    let mut out = [[zero(); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = m[(i, j)];
        }
    }
    out
}

/// −Σ λ log₂ λ for a 2×2 Hermitian [[a, b], [b̄, d]] (unnormalised allowed: pass trace-1 input).
pub fn entropy2(a: f64, d: f64, b: C64) -> f64 {
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + r, mean - r].iter().filter(|&&x| x > 1e-15).map(|&x| -x * x.log2()).sum()
}

/// Entropy in bits from eigenvalues of the full 4×4 matrix.
pub fn entropy4(rho: &CMat) -> f64 {
    let h = (rho + rho.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().filter(|&&x| x > 1e-15).map(|&x| -x * x.log2()).sum()
}

fn reduced_a(r: &M4) -> (f64, f64, C64) {
    // |i j⟩ ↦ index 2i + j, A is the slow index
    (r[0][0].re + r[1][1].re, r[2][2].re + r[3][3].re, r[0][2] + r[1][3])
}

fn reduced_b(r: &M4) -> (f64, f64, C64) {
    (r[0][0].re + r[2][2].re, r[1][1].re + r[3][3].re, r[0][1] + r[2][3])
}

pub fn mutual_information_bits(rho: &CMat) -> f64 {
    let r = to_array(rho);
    let (a0, a1, ab) = reduced_a(&r);
    let (b0, b1, bb) = reduced_b(&r);
    entropy2(a0, a1, ab) + entropy2(b0, b1, bb) - entropy4(rho)
}

/// Projector (1 ± n·σ)/2 with textbook Pauli matrices.
fn projector(n: [f64; 3], sign: f64) -> [[C64; 2]; 2] {
    let [x, y, z] = n;
    [
        [C64::new(0.5 * (1.0 + sign * z), 0.0), C64::new(0.5 * sign * x, -0.5 * sign * y)],
        [C64::new(0.5 * sign * x, 0.5 * sign * y), C64::new(0.5 * (1.0 - sign * z), 0.0)],
    ]
}

/// Σ_k p_k S(ρ_A|k) for projective measurement along `n` on qubit B.
fn measured_conditional_entropy(r: &M4, n: [f64; 3]) -> f64 {
    let mut total = 0.0;
    for sign in [1.0, -1.0] {
        let p = projector(n, sign);
        // unnormalised ρ_A|k = tr_B[(1 ⊗ P) ρ (1 ⊗ P)] = Σ_{j,j'} P[j'][j] ρ[(i,j),(i',j')]
        let mut a = [[zero(); 2]; 2];
        for (i, row) in a.iter_mut().enumerate() {
            for (ip, x) in row.iter_mut().enumerate() {
                let mut acc = zero();
                for j in 0..2 {
                    for jp in 0..2 {
                        acc += p[jp][j] * r[2 * i + j][2 * ip + jp];
                    }
                }
                *x = acc;
            }
        }
        let prob = a[0][0].re + a[1][1].re;
        if prob > 1e-14 {
            total += prob * entropy2(a[0][0].re / prob, a[1][1].re / prob, a[0][1] / prob);
        }
    }
    total
}

/// Discord (bits) from exhaustive search over a θ × φ grid of measurement axes on B.
pub fn discord_dense_grid(rho: &CMat, n_theta: usize, n_phi: usize) -> f64 {
    let r = to_array(rho);
    let (b0, b1, bb) = reduced_b(&r);
    let s_b = entropy2(b0, b1, bb);
    let s_ab = entropy4(rho);
    let mut best = f64::INFINITY;
    for i in 0..n_theta {
        let theta = std::f64::consts::PI * i as f64 / (n_theta - 1) as f64;
        for j in 0..n_phi {
            let phi = std::f64::consts::TAU * j as f64 / n_phi as f64;
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            best = best.min(measured_conditional_entropy(&r, n));
        }
    }
    (s_b - s_ab + best).max(0.0)
}

/// Von Neumann entropy (bits) of the A marginal; equals the discord of a pure state.
pub fn marginal_entropy_a(rho: &CMat) -> f64 {
    let (a0, a1, ab) = reduced_a(&to_array(rho));
    entropy2(a0, a1, ab)
}
