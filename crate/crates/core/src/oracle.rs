//! Finite-section discretization of shift operators on circle unions.
//!
//! The grid `theta_j = 2 pi j / N` (N a power of two, divisible by every
//! rotation denominator) makes every isometry of the action an exact grid
//! permutation, so discretized shifts compose exactly and the lifted
//! operator agrees with the original one up to rounding.
//!
//! Quantization: `Op(a) = M_{a_+} P_+ + M_{a_-} P_-` with `P_+` keeping
//! Fourier modes `0 .. N/2 - 1` and `P_-` the rest.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geometry::{cotangent_action, CopyMap, CotangentPoint, IsometricAction};
use crate::linalg::{adjoint, czero, matmul, max_abs_diff, svd_full, CMat, C64};
use crate::symbol::{GammaSymbolData, PullbackConvention, TrigPoly};

use std::f64::consts::TAU;

/// Check that the grid resolves the symbol and that every rotation angle of
/// the action lands on grid points.
pub fn validate_grid(data: &GammaSymbolData, n: usize) -> Result<()> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::BadGrid { n, reason: "grid size must be a power of two, at least 4".into() });
    }
    if n / 2 <= data.max_degree() {
        return Err(Error::BadGrid {
            n,
            reason: format!("symbol degree {} needs more than {n} grid points", data.max_degree()),
        });
    }
    let action = &data.action;
    for g in action.group.elements() {
        for m in &action.map(g).per_copy {
            if n % m.angle.denom() as usize != 0 {
                return Err(Error::IncommensurableAngle {
                    angle: format!("{}/{}", m.angle.numer(), m.angle.denom()),
                    n,
                });
            }
        }
    }
    Ok(())
}

/// Exact grid displacement of a copy map: `j -> (o j + shift) mod N`.
fn grid_shift(m: &CopyMap, n: usize) -> i64 {
    let num = m.angle.numer() as i128 * n as i128;
    let den = m.angle.denom() as i128;
    debug_assert_eq!(num % den, 0);
    (num / den).rem_euclid(n as i128) as i64
}

fn grid_image(m: &CopyMap, j: usize, n: usize) -> usize {
    let o = m.orientation as i64;
    (o * j as i64 + grid_shift(m, n)).rem_euclid(n as i64) as usize
}

/// First column of the circulant projector onto Fourier modes `0..N/2-1`.
fn p_plus_kernel(n: usize) -> Vec<C64> {
    (0..n)
        .map(|d| {
            let mut acc = czero();
            for m in 0..n / 2 {
                acc += C64::from_polar(1.0, TAU * (m * d) as f64 / n as f64);
            }
            acc / n as f64
        })
        .collect()
}

/// Discretized multiplier-plus-projector operator for one coefficient symbol,
/// block diagonal over copies. `eval(copy, j, sign)` supplies the `k x k`
/// symbol value at grid node `j` of that copy.
fn symbol_op<F: Fn(usize, usize, i8) -> CMat>(copies: usize, n: usize, k: usize, eval: F) -> CMat {
    let kernel = p_plus_kernel(n);
    let dim = copies * n * k;
    let mut out = Array2::from_elem((dim, dim), czero());
    for c in 0..copies {
        let minus: Vec<CMat> = (0..n).map(|j| eval(c, j, -1)).collect();
        let delta: Vec<CMat> = (0..n).map(|j| eval(c, j, 1) - &minus[j]).collect();
        for j in 0..n {
            for l in 0..n {
                let p = kernel[(j + n - l) % n];
                for i in 0..k {
                    for ip in 0..k {
                        let mut v = delta[j][(i, ip)] * p;
                        if j == l {
                            v += minus[j][(i, ip)];
                        }
                        if v != czero() {
                            out[((c * n + j) * k + i, (c * n + l) * k + ip)] = v;
                        }
                    }
                }
            }
        }
    }
    out
}

/// Discretized shift operator `s -> U(gamma) s(gamma^{-1} x)`; an exact
/// permutation matrix tensored with the fiber unitary.
pub fn shift_matrix(action: &IsometricAction, gamma: usize, n: usize) -> CMat {
    let copies = action.manifold.copies;
    let k = action.fiber_rank();
    let u = action.fiber_rep.matrix(gamma);
    let m = action.map(gamma);
    let dim = copies * n * k;
    let mut out = Array2::from_elem((dim, dim), czero());
    for c in 0..copies {
        let cm = m.per_copy[c];
        let ct = m.copy_perm[c];
        for j in 0..n {
            let jt = grid_image(&cm, j, n);
            for i in 0..k {
                for ip in 0..k {
                    out[((ct * n + jt) * k + i, (c * n + j) * k + ip)] = u[(i, ip)];
                }
            }
        }
    }
    out
}

/// Finite section of the full operator `sum_gamma Op(a_gamma) S_gamma`.
pub fn assemble_gamma_operator(data: &GammaSymbolData, n: usize) -> Result<CMat> {
    validate_grid(data, n)?;
    let action = &data.action;
    let copies = action.manifold.copies;
    let k = data.fiber_rank();
    let dim = copies * n * k;
    let mut out = Array2::from_elem((dim, dim), czero());
    for (&gamma, sym) in &data.symbols {
        let op = symbol_op(copies, n, k, |c, j, s| {
            sym.eval(CotangentPoint::new(c, TAU * j as f64 / n as f64, s))
        });
        out = out + matmul(&op, &shift_matrix(action, gamma, n));
    }
    Ok(out)
}

fn slot_dim(data: &GammaSymbolData, n: usize) -> usize {
    data.action.manifold.copies * n * data.fiber_rank()
}

/// Finite section of the lifted operator on sections over `M x Gamma`
/// (flat index: group slot outermost, then copy, grid node, fiber).
///
/// In slot `r` the coefficient of the right translation by `gamma` is the
/// symbol pulled back through `r^{-1}` and conjugated by `U(r)`; the
/// `Transposed` convention pulls back through `r` instead and serves as a
/// negative control.
pub fn assemble_uniformized(
    data: &GammaSymbolData,
    n: usize,
    convention: PullbackConvention,
) -> Result<CMat> {
    validate_grid(data, n)?;
    let action = &data.action;
    let group = &action.group;
    let copies = action.manifold.copies;
    let k = data.fiber_rank();
    let base = slot_dim(data, n);
    let dim = group.order() * base;
    let mut out = Array2::from_elem((dim, dim), czero());
    for r in group.elements() {
        let pull = match convention {
            PullbackConvention::Inverse => group.inv(r),
            PullbackConvention::Transposed => r,
        };
        let u = action.fiber_rep.matrix(r);
        let uh = adjoint(u);
        for (&gamma, sym) in &data.symbols {
            let op = symbol_op(copies, n, k, |c, j, s| {
                let pt = cotangent_action(action, pull, CotangentPoint::new(c, TAU * j as f64 / n as f64, s));
                matmul(&matmul(u, &sym.eval(pt)), &uh)
            });
            // right translation by gamma: output slot r reads input slot r*gamma
            let col_slot = group.mul(r, gamma);
            for a in 0..base {
                for b in 0..base {
                    let v = op[(a, b)];
                    if v != czero() {
                        out[(r * base + a, col_slot * base + b)] += v;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Isometric embedding `V s = |Gamma|^{-1/2} (S_r s)_r` intertwining the
/// original operator with the lifted one.
pub fn embedding_matrix(data: &GammaSymbolData, n: usize) -> CMat {
    let group = &data.action.group;
    let base = slot_dim(data, n);
    let scale = 1.0 / (group.order() as f64).sqrt();
    let mut out = Array2::from_elem((group.order() * base, base), czero());
    for r in group.elements() {
        let s = shift_matrix(&data.action, r, n);
        for a in 0..base {
            for b in 0..base {
                let v = s[(a, b)];
                if v != czero() {
                    out[(r * base + a, b)] = v * scale;
                }
            }
        }
    }
    out
}

/// `|| V^H D_lift V - D ||_max` at grid size `n`.
pub fn uniformization_residual(
    data: &GammaSymbolData,
    n: usize,
    convention: PullbackConvention,
) -> Result<f64> {
    let lifted = assemble_uniformized(data, n, convention)?;
    let plain = assemble_gamma_operator(data, n)?;
    let v = embedding_matrix(data, n);
    let compressed = matmul(&matmul(&adjoint(&v), &lifted), &v);
    Ok(max_abs_diff(&compressed, &plain))
}

/// Discretized flip `s(x, mu) -> U(mu) s(mu^{-1} x, mu^{-1})`.
pub fn q_full_matrix(data: &GammaSymbolData, n: usize) -> CMat {
    let action = &data.action;
    let group = &action.group;
    let base = slot_dim(data, n);
    let dim = group.order() * base;
    let mut out = Array2::from_elem((dim, dim), czero());
    for gamma in group.elements() {
        // output slot gamma at x reads input slot gamma^{-1} at gamma^{-1} x
        let s = shift_matrix(action, gamma, n);
        let gi = group.inv(gamma);
        for a in 0..base {
            for b in 0..base {
                let v = s[(a, b)];
                if v != czero() {
                    out[(gamma * base + a, gi * base + b)] = v;
                }
            }
        }
    }
    out
}

/// Discretized `1 (x) R_gamma`: output slot `mu` reads input slot `mu gamma`.
pub fn r_full_matrix(data: &GammaSymbolData, n: usize, gamma: usize) -> CMat {
    let group = &data.action.group;
    let base = slot_dim(data, n);
    let dim = group.order() * base;
    let mut out = Array2::from_elem((dim, dim), czero());
    for mu in group.elements() {
        let src = group.mul(mu, gamma);
        for a in 0..base {
            out[(mu * base + a, src * base + a)] = C64::new(1.0, 0.0);
        }
    }
    out
}

/// Discretized `T_gamma (x) L_gamma`: `s(x, nu) -> U(gamma) s(gamma^{-1} x,
/// gamma^{-1} nu)`.
pub fn tl_full_matrix(data: &GammaSymbolData, n: usize, gamma: usize) -> CMat {
    let action = &data.action;
    let group = &action.group;
    let base = slot_dim(data, n);
    let dim = group.order() * base;
    let s = shift_matrix(action, gamma, n);
    let gi = group.inv(gamma);
    let mut out = Array2::from_elem((dim, dim), czero());
    for nu in group.elements() {
        let src = group.mul(gi, nu);
        for a in 0..base {
            for b in 0..base {
                let v = s[(a, b)];
                if v != czero() {
                    out[(nu * base + a, src * base + b)] = v;
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub n: usize,
    pub sigma_min: f64,
    pub count_below: usize,
}

/// Smallest singular value and near-null count of the finite sections.
pub fn singular_sweep(data: &GammaSymbolData, sizes: &[usize], eps: f64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &n in sizes {
        let op = assemble_gamma_operator(data, n)?;
        let sv = crate::linalg::singular_values(&op);
        let sigma_min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let count_below = sv.iter().filter(|&&s| s < eps).count();
        rows.push(SweepRow { n, sigma_min, count_below });
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct IndexReport {
    pub n: usize,
    pub index: i64,
    pub genuine_kernel: usize,
    pub genuine_cokernel: usize,
    pub raw_below: usize,
}

/// Fraction of a section's mass in Fourier modes `|m| < N/4`, maximized over
/// nothing — computed channel by channel and summed.
fn low_mode_mass(vec: &[C64], copies: usize, n: usize, k: usize) -> (f64, f64) {
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let mut low = 0.0;
    let mut total = 0.0;
    for c in 0..copies {
        for i in 0..k {
            let mut buf: Vec<Complex64> =
                (0..n).map(|j| vec[(c * n + j) * k + i]).collect();
            fft.process(&mut buf);
            for (m, z) in buf.iter().enumerate() {
                let freq = if m <= n / 2 { m } else { n - m };
                let e = z.norm_sqr();
                total += e;
                if freq < n / 4 {
                    low += e;
                }
            }
        }
    }
    (low, total)
}

/// Signed count of genuine near-null directions: kernel minus cokernel,
/// where near-null singular vectors concentrated at the mode cutoff are
/// discarded as finite-section artifacts.
pub fn numerical_index(data: &GammaSymbolData, n: usize, eps: f64) -> Result<IndexReport> {
    let copies = data.action.manifold.copies;
    let k = data.fiber_rank();
    let op = assemble_gamma_operator(data, n)?;
    let (u, s, vt) = svd_full(&op);
    let dim = s.len();
    let raw_below = s.iter().filter(|&&x| x < eps).count();
    if raw_below > dim / 8 {
        return Err(Error::NotFredholmScenario);
    }
    let mut genuine_kernel = 0usize;
    let mut genuine_cokernel = 0usize;
    for idx in 0..dim {
        if s[idx] >= eps {
            continue;
        }
        // right singular vector: conjugated row of vt
        let right: Vec<C64> = (0..dim).map(|j| vt[(idx, j)].conj()).collect();
        let (low, total) = low_mode_mass(&right, copies, n, k);
        if low >= 0.5 * total {
            genuine_kernel += 1;
        }
        let left: Vec<C64> = (0..dim).map(|j| u[(j, idx)]).collect();
        let (low, total) = low_mode_mass(&left, copies, n, k);
        if low >= 0.5 * total {
            genuine_cokernel += 1;
        }
    }
    Ok(IndexReport {
        n,
        index: genuine_kernel as i64 - genuine_cokernel as i64,
        genuine_kernel,
        genuine_cokernel,
        raw_below,
    })
}

/// Winding number of a nonvanishing scalar trigonometric polynomial around
/// the origin.
pub fn winding_number(poly: &TrigPoly, min_samples: usize) -> Result<i64> {
    let samples = min_samples.max(16 * (poly.degree() + 1)).max(64);
    let mut total = 0.0f64;
    let mut prev = poly.eval(0.0);
    for i in 1..=samples {
        let theta = TAU * i as f64 / samples as f64;
        let cur = poly.eval(theta);
        if cur.norm() < 1e-9 {
            return Err(Error::VanishingSymbol { min: cur.norm(), theta });
        }
        total += (cur / prev).arg();
        prev = cur;
    }
    Ok((total / TAU).round() as i64)
}
