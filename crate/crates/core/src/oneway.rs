//! One-way thermal protocol: Alice sends Gaussian-modulated thermal states,
//! Bob homodynes, Eve runs an entangling cloner of transmission `T` and
//! variance `W`.
//!
//! Two independent routes are provided: closed-form asymptotic rates
//! (`V_a → ∞`) and a finite-modulation engine that builds Eve's covariance
//! matrices explicitly and takes their entropies.

use nalgebra::DMatrix;

use crate::error::{check_transmission, check_variance, ensure, Result};
use crate::gaussian::{
    condition_on_homodyne, h_clipped as h, identity2, pauli_z, CovarianceMatrix, Quadrature,
};
use crate::rate::{Direction, RateBreakdown};

/// Inputs of the one-way protocol, in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneWayParams {
    /// Preparation noise `V0 = 1 + η`.
    pub v0: f64,
    /// Gaussian modulation variance `V_a`.
    pub va: f64,
    /// Channel transmission.
    pub t: f64,
    /// Variance of Eve's EPR ancilla.
    pub w: f64,
}

impl OneWayParams {
    pub fn new(v0: f64, va: f64, t: f64, w: f64) -> Result<Self> {
        check_variance("V0", v0)?;
        check_variance("W", w)?;
        check_transmission(t)?;
        ensure(va > 0.0 && va.is_finite(), "V_a", va, "0 < V_a < inf")?;
        Ok(Self { v0, va, t, w })
    }
}

/// `Λ(x, y) = T x + (1 - T) y`.
pub fn lambda_fn(x: f64, y: f64, t: f64) -> f64 {
    t * x + (1.0 - t) * y
}

/// Covariance matrix of Eve's output modes `E'` (transmitted ancilla) and `E''` (kept ancilla),
/// ordered `(E'', E')` as in the block form `[[W I, φ Z], [φ Z, (TW + (1-T)(V_a+V0)) I]]`.
pub fn eve_cm(p: &OneWayParams) -> Result<CovarianceMatrix> {
    CovarianceMatrix::new(eve_matrix(p))
}

fn eve_matrix(p: &OneWayParams) -> DMatrix<f64> {
    let OneWayParams { v0, va, t, w } = *p;
    let phi = (t * (w * w - 1.0)).sqrt();
    let out = t * w + (1.0 - t) * (va + v0);
    let mut m = DMatrix::zeros(4, 4);
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&(identity2() * w));
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(pauli_z() * phi));
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&(pauli_z() * phi));
    m.fixed_view_mut::<2, 2>(2, 2)
        .copy_from(&(identity2() * out));
    m
}

/// Eve's state given Alice's encoding: the modulation is removed from the
/// `q` quadrature of the transmitted mode.
pub fn eve_cm_given_a(p: &OneWayParams) -> Result<CovarianceMatrix> {
    let mut m = eve_matrix(p);
    m[(2, 2)] -= (1.0 - p.t) * p.va;
    CovarianceMatrix::new(m)
}

/// Joint state of Eve's two modes and Bob's output mode `B` (mode index 2).
pub fn joint_cm_eve_bob(p: &OneWayParams) -> Result<CovarianceMatrix> {
    let OneWayParams { v0, va, t, w } = *p;
    let mut m = DMatrix::zeros(6, 6);
    m.view_mut((0, 0), (4, 4)).copy_from(&eve_matrix(p));
    let c_kept = pauli_z() * ((1.0 - t) * (w * w - 1.0)).sqrt();
    let c_trans = identity2() * ((t * (1.0 - t)).sqrt() * (w - (va + v0)));
    let bob = identity2() * (lambda_fn(v0, w, t) + t * va);
    m.fixed_view_mut::<2, 2>(0, 4).copy_from(&c_kept);
    m.fixed_view_mut::<2, 2>(4, 0)
        .copy_from(&c_kept.transpose());
    m.fixed_view_mut::<2, 2>(2, 4).copy_from(&c_trans);
    m.fixed_view_mut::<2, 2>(4, 2)
        .copy_from(&c_trans.transpose());
    m.fixed_view_mut::<2, 2>(4, 4).copy_from(&bob);
    CovarianceMatrix::new(m)
}

/// Eve's state given Bob's homodyne outcome.
pub fn eve_cm_given_b(p: &OneWayParams) -> Result<CovarianceMatrix> {
    condition_on_homodyne(&joint_cm_eve_bob(p)?, &[0, 1], 2, Quadrature::Q)
}

/// `I(a:b) = ½ log2(1 + T V_a / Λ(V0, W))`.
pub fn mutual_info(p: &OneWayParams) -> f64 {
    0.5 * (p.t * p.va / lambda_fn(p.v0, p.w, p.t)).ln_1p() / std::f64::consts::LN_2
}

fn check_asym(v0: f64, t: f64, w: f64) -> Result<()> {
    check_variance("V0", v0)?;
    check_variance("W", w)?;
    check_transmission(t)
}

/// Asymptotic direct-reconciliation rate.
pub fn rate_dr_asym(v0: f64, t: f64, w: f64) -> Result<f64> {
    check_asym(v0, t, w)?;
    let lam_wv = lambda_fn(w, v0, t);
    let lam_vw = lambda_fn(v0, w, t);
    let nu_bar = (w * lambda_fn(1.0, w * v0, t) / lam_wv).sqrt();
    Ok(0.5 * (t * lam_wv / ((1.0 - t) * lam_vw)).log2() + h(nu_bar) - h(w))
}

/// Asymptotic reverse-reconciliation rate.
pub fn rate_rr_asym(v0: f64, t: f64, w: f64) -> Result<f64> {
    check_asym(v0, t, w)?;
    Ok(0.5 * (w / ((1.0 - t) * lambda_fn(v0, w, t))).log2() - h(w))
}

/// Finite-modulation rate: `I(a:b)` minus the Holevo bound computed from Eve's
/// covariance matrices.
pub fn rate_numeric(p: &OneWayParams, direction: Direction) -> Result<RateBreakdown> {
    let s_e = eve_cm(p)?.entropy();
    let s_cond = match direction {
        Direction::Direct => eve_cm_given_a(p)?.entropy(),
        Direction::Reverse => eve_cm_given_b(p)?.entropy(),
    };
    RateBreakdown::new(direction, mutual_info(p), s_e - s_cond)
}

/// Excess noise referred to the channel input, `N = (W - 1)(1 - T)/T`.
pub fn excess_noise_from_w(w: f64, t: f64) -> Result<f64> {
    check_variance("W", w)?;
    check_transmission(t)?;
    Ok((w - 1.0) * (1.0 - t) / t)
}

/// Inverse of [`excess_noise_from_w`]: `W = 1 + N T/(1 - T)`.
pub fn w_from_excess_noise(n: f64, t: f64) -> Result<f64> {
    ensure(n >= 0.0 && n.is_finite(), "N", n, "N >= 0")?;
    check_transmission(t)?;
    Ok(1.0 + n * t / (1.0 - t))
}
