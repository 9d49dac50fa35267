//! The remainder functional R_p(a, b) = |b|^p + (p-1)|a|^p - p|a|^{p-2}a·b
//! and the empirical constant M_p with R_p >= M_p·|b-a|^p for p >= 2.

use crate::error::CknError;
use crate::par;
use crate::Result;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// R_p for same-length vectors. At a = 0 the coupling term |a|^{p-2}a·b is
/// taken as 0, its continuous limit for p > 1.
pub fn rp(a_vec: &[f64], b_vec: &[f64], p: f64) -> f64 {
    debug_assert_eq!(a_vec.len(), b_vec.len());
    let na = norm(a_vec);
    let nb = norm(b_vec);
    let coupling = if na == 0.0 { 0.0 } else { p * na.powf(p - 2.0) * dot(a_vec, b_vec) };
    nb.powf(p) + (p - 1.0) * na.powf(p) - coupling
}

/// Scalar shortcut for radial integrands, where both arguments point along
/// x/|x| and only the signed magnitudes matter.
pub fn rp_scalar(a: f64, b: f64, p: f64) -> f64 {
    let na = a.abs();
    let coupling = if na == 0.0 { 0.0 } else { p * na.powf(p - 2.0) * a * b };
    b.abs().powf(p) + (p - 1.0) * na.powf(p) - coupling
}

/// Ratio R_p(a, b)/|b - a|^p for the planar configuration
/// a = (1, 0), b = rho·(cos θ, sin θ). By p-homogeneity every pair reduces
/// to this two-parameter family.
fn planar_ratio(rho: f64, theta: f64, p: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    let b = [rho * c, rho * s];
    let a = [1.0, 0.0];
    let diff = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
    if diff < 1e-12 {
        return f64::INFINITY;
    }
    rp(&a, &b, p) / diff.powf(p)
}

/// Structured-scan lower-bound estimate of M_p.
///
/// The scan covers log-spaced magnitude ratios |b|/|a| in [1e-6, 1e6]
/// (the quotient range of two [1e-3, 1e3] grids) crossed with 64 angles,
/// then locally refines around the grid minimum. For p = 2 the ratio is
/// identically one (R_2 = |b-a|^2), so 1.0 is returned exactly.
pub fn mp_lower_bound(p: f64, sample_budget: usize) -> Result<f64> {
    if p < 2.0 {
        return Err(CknError::Regime(format!("M_p lower bound requires p >= 2, got {p}")));
    }
    if p == 2.0 {
        return Ok(1.0);
    }
    let angles = 64usize;
    let rho_count = (sample_budget / angles).max(64);
    let (lr_min, lr_max) = (-6.0 * std::f64::consts::LN_10, 6.0 * std::f64::consts::LN_10);

    let idx: Vec<usize> = (0..rho_count).collect();
    let mins = par::map_collect(&idx, |&i| {
        let rho = (lr_min + (lr_max - lr_min) * i as f64 / (rho_count - 1) as f64).exp();
        let mut best = f64::INFINITY;
        let mut best_t = 0.0;
        for j in 0..angles {
            let theta = std::f64::consts::PI * j as f64 / (angles - 1) as f64;
            let v = planar_ratio(rho, theta, p);
            if v < best {
                best = v;
                best_t = theta;
            }
        }
        (best, rho, best_t)
    });
    let (mut best, mut rho, mut theta) =
        mins.iter().fold((f64::INFINITY, 1.0, 0.0), |acc, &(v, r, t)| if v < acc.0 { (v, r, t) } else { acc });

    // local shrink refinement around the grid minimum
    let mut dr = (lr_max - lr_min) / (rho_count - 1) as f64;
    let mut dt = std::f64::consts::PI / (angles - 1) as f64;
    for _ in 0..40 {
        let lr = rho.ln();
        for (cand_lr, cand_t) in [
            (lr - dr, theta),
            (lr + dr, theta),
            (lr, theta - dt),
            (lr, theta + dt),
            (lr - dr, theta - dt),
            (lr + dr, theta + dt),
            (lr - dr, theta + dt),
            (lr + dr, theta - dt),
        ] {
            let t = cand_t.clamp(0.0, std::f64::consts::PI);
            let v = planar_ratio(cand_lr.exp(), t, p);
            if v < best {
                best = v;
                rho = cand_lr.exp();
                theta = t;
            }
        }
        dr *= 0.6;
        dt *= 0.6;
    }
    Ok(best)
}
