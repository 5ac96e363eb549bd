//! Two-way thermal protocol in the ON configuration.
//!
//! Bob sends a modulated thermal mode `B1` (signal variance `μ`), Alice adds a
//! Gaussian displacement of variance `μ` and returns it, and Bob homodynes the
//! returning mode `B2`. His key variable is `b = b2 - T b1`. Eve attacks each
//! pass with an independent entangling cloner `(T, W)` and keeps the four
//! output modes `E1' E1'' E2' E2''`.

use nalgebra::{DMatrix, Matrix2, SMatrix};

use crate::error::{check_transmission, check_variance, ensure, Result};
use crate::gaussian::{
    condition_on_homodyne, h_clipped as h, identity2, pauli_z, CovarianceMatrix, Quadrature,
};
use crate::rate::{Direction, RateBreakdown};

/// Inputs of the two-way protocol, in shot-noise units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoWayParams {
    /// Preparation noise, identical at Alice and Bob.
    pub v0: f64,
    /// Signal variance `μ`, used for both Bob's modulation and Alice's displacement.
    pub mu: f64,
    pub t: f64,
    pub w: f64,
}

impl TwoWayParams {
    pub fn new(v0: f64, mu: f64, t: f64, w: f64) -> Result<Self> {
        check_variance("V0", v0)?;
        check_variance("W", w)?;
        check_transmission(t)?;
        ensure(mu > 0.0 && mu.is_finite(), "mu", mu, "0 < mu < inf")?;
        Ok(Self { v0, mu, t, w })
    }

    /// Variance of Bob's input mode, `V_B1 = V0 + μ`.
    pub fn v_b1(&self) -> f64 {
        self.v0 + self.mu
    }
}

/// Scalar entries of Eve's four-mode covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EveCm4Params {
    pub epsilon: f64,
    pub chi: f64,
    pub theta: f64,
    pub gamma: f64,
    pub phi: f64,
    t: f64,
}

impl EveCm4Params {
    pub fn new(p: &TwoWayParams) -> Self {
        let TwoWayParams { t, w, .. } = *p;
        let vb1 = p.v_b1();
        let s = 1.0 - t;
        Self {
            epsilon: s * vb1 + t * w,
            chi: -t.sqrt() * s * (w - vb1),
            // correlation between the first kept ancilla and the second transmitted one
            theta: -s * (w * w - 1.0).sqrt(),
            gamma: t * s * vb1 + (1.0 - t + t * t) * w,
            phi: (t * (w * w - 1.0)).sqrt(),
            t,
        }
    }

    /// `Δ(x, y) = γ I + (1 - T) diag(x, y)`.
    pub fn delta(&self, x: f64, y: f64) -> Matrix2<f64> {
        identity2() * self.gamma + Matrix2::new(x, 0.0, 0.0, y) * (1.0 - self.t)
    }
}

fn eve_matrix(p: &TwoWayParams, delta_x: f64, delta_y: f64) -> DMatrix<f64> {
    let e = EveCm4Params::new(p);
    let i = identity2();
    let z = pauli_z();
    let o = Matrix2::zeros();
    let grid = [
        [i * e.epsilon, z * e.phi, i * e.chi, o],
        [z * e.phi, i * p.w, z * e.theta, o],
        [i * e.chi, z * e.theta, e.delta(delta_x, delta_y), z * e.phi],
        [o, o, z * e.phi, i * p.w],
    ];
    let mut m = DMatrix::zeros(8, 8);
    for (r, row) in grid.iter().enumerate() {
        for (c, block) in row.iter().enumerate() {
            m.fixed_view_mut::<2, 2>(2 * r, 2 * c).copy_from(block);
        }
    }
    m
}

/// Eve's covariance matrix `V_E(x, y)` over modes `E1' E1'' E2' E2''`.
///
/// `V_E(μ, μ)` is her unconditional state; `V_E(0, μ)` is her state given Alice's
/// displacement, with the displacement removed from the `q` quadrature.
pub fn eve_cm(p: &TwoWayParams, delta_x: f64, delta_y: f64) -> Result<CovarianceMatrix> {
    ensure(delta_x >= 0.0, "delta_x", delta_x, ">= 0")?;
    ensure(delta_y >= 0.0, "delta_y", delta_y, ">= 0")?;
    CovarianceMatrix::new(eve_matrix(p, delta_x, delta_y))
}

/// Variance of Bob's processed variable, `V_b = T² V0 + T μ + (1 - T²) W`.
pub fn bob_output_variance(p: &TwoWayParams) -> f64 {
    let TwoWayParams { v0, mu, t, w } = *p;
    t * t * v0 + t * mu + (1.0 - t * t) * w
}

/// `V_b|a`: Bob's variance given Alice's displacement (the `μ = 0` value of `V_b`).
pub fn bob_conditional_variance(p: &TwoWayParams) -> f64 {
    let TwoWayParams { v0, t, w, .. } = *p;
    t * t * v0 + (1.0 - t * t) * w
}

/// `I(a:b) = ½ log2(V_b / V_b|a)`.
pub fn mutual_info(p: &TwoWayParams) -> f64 {
    0.5 * (t_mu_ratio(p)).ln_1p() / std::f64::consts::LN_2
}

fn t_mu_ratio(p: &TwoWayParams) -> f64 {
    p.t * p.mu / bob_conditional_variance(p)
}

fn check_asym(v0: f64, t: f64, w: f64) -> Result<()> {
    check_variance("V0", v0)?;
    check_variance("W", w)?;
    check_transmission(t)
}

/// Asymptotic direct-reconciliation rate.
pub fn rate_dr_asym(v0: f64, t: f64, w: f64) -> Result<f64> {
    check_asym(v0, t, w)?;
    let num = t * (1.0 + t) * w;
    let den = (1.0 - t) * (t * t * v0 + (1.0 - t * t) * w);
    Ok(0.5 * (num / den).log2() - h(w))
}

/// `T² V0 + W + T³ (W - V0)`, the recurring term of the reverse-reconciliation formulas.
fn rr_kernel(v0: f64, t: f64, w: f64) -> f64 {
    t * t * v0 + w + t.powi(3) * (w - v0)
}

/// Asymptotic value of the finite conditional eigenvalue `ν̃2` of Eve's state given `b`.
pub fn rr_conditional_nu2(v0: f64, t: f64, w: f64) -> f64 {
    let num = w * (1.0 + t * t * v0 * w + t.powi(3) * (1.0 - v0 * w));
    (num / rr_kernel(v0, t, w)).sqrt()
}

/// Asymptotic reverse-reconciliation rate.
pub fn rate_rr_asym(v0: f64, t: f64, w: f64) -> Result<f64> {
    check_asym(v0, t, w)?;
    let den = (v0 * t * t + (1.0 - t * t) * w) * (1.0 - t);
    Ok(0.5 * (rr_kernel(v0, t, w) / den).log2() + h(rr_conditional_nu2(v0, t, w)) - h(w))
}

/// Cross-correlations `D` (8×2) between Eve's modes and Bob's processed mode `B`,
/// with `Dᵀ = (ξ1 I, φ1 Z, ξ2 I, φ2 Z)`.
pub fn rr_conditional_correlations(p: &TwoWayParams) -> SMatrix<f64, 8, 2> {
    let TwoWayParams { v0, mu, t, w } = *p;
    let s = 1.0 - t;
    let r = (t * s).sqrt();
    let sq = (w * w - 1.0).sqrt();
    let xi1 = -t * s.sqrt() * (v0 - w);
    let phi1 = r * sq;
    let xi2 = -r * (t * v0 + mu) + t * w * r;
    let phi2 = s.sqrt() * sq;

    let mut d = SMatrix::<f64, 8, 2>::zeros();
    d.fixed_view_mut::<2, 2>(0, 0)
        .copy_from(&(identity2() * xi1));
    d.fixed_view_mut::<2, 2>(2, 0)
        .copy_from(&(pauli_z() * phi1));
    d.fixed_view_mut::<2, 2>(4, 0)
        .copy_from(&(identity2() * xi2));
    d.fixed_view_mut::<2, 2>(6, 0)
        .copy_from(&(pauli_z() * phi2));
    d
}

/// Joint state of Eve's four modes and Bob's processed mode `B` (mode index 4).
pub fn joint_cm_eve_bob(p: &TwoWayParams) -> Result<CovarianceMatrix> {
    let mu = p.mu;
    let mut m = DMatrix::zeros(10, 10);
    m.view_mut((0, 0), (8, 8)).copy_from(&eve_matrix(p, mu, mu));
    let d = rr_conditional_correlations(p);
    m.view_mut((0, 8), (8, 2)).copy_from(&d);
    m.view_mut((8, 0), (2, 8)).copy_from(&d.transpose());
    m.fixed_view_mut::<2, 2>(8, 8)
        .copy_from(&(identity2() * bob_output_variance(p)));
    CovarianceMatrix::new(m)
}

/// Eve's state given Bob's homodyne outcome on `B`.
pub fn eve_cm_given_b(p: &TwoWayParams) -> Result<CovarianceMatrix> {
    condition_on_homodyne(&joint_cm_eve_bob(p)?, &[0, 1, 2, 3], 4, Quadrature::Q)
}

/// Finite-modulation rate from Eve's covariance matrices.
pub fn rate_numeric(p: &TwoWayParams, direction: Direction) -> Result<RateBreakdown> {
    let s_e = eve_cm(p, p.mu, p.mu)?.entropy();
    let s_cond = match direction {
        Direction::Direct => eve_cm(p, 0.0, p.mu)?.entropy(),
        Direction::Reverse => eve_cm_given_b(p)?.entropy(),
    };
    RateBreakdown::new(direction, mutual_info(p), s_e - s_cond)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bob_variances() {
        let p = TwoWayParams::new(1.0, 4.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(bob_output_variance(&p), 3.0, epsilon = 1e-14);
        assert_relative_eq!(bob_conditional_variance(&p), 1.0, epsilon = 1e-14);
        let p = TwoWayParams::new(1.0, 1e-9, 0.999, 1.0).unwrap();
        assert_relative_eq!(bob_output_variance(&p), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn mutual_info_values() {
        let p = TwoWayParams::new(1.0, 4.0, 0.5, 1.0).unwrap();
        assert_relative_eq!(mutual_info(&p), 0.5 * 3f64.log2(), epsilon = 1e-14);
        let p = TwoWayParams::new(1.0, 1e-12, 0.5, 1.0).unwrap();
        assert!(mutual_info(&p) < 1e-11);
        let p = TwoWayParams::new(1.0, 1e6, 0.5, 1.0).unwrap();
        let asym = 0.5 * (0.5e6f64 / 1.0).log2();
        assert!((mutual_info(&p) - asym).abs() < 1e-5);
    }

    #[test]
    fn eve_cm_parameters() {
        let p = TwoWayParams::new(1.5, 3.0, 0.4, 2.0).unwrap();
        let e = EveCm4Params::new(&p);
        let vb1 = 4.5;
        assert_relative_eq!(e.epsilon, 0.6 * vb1 + 0.4 * 2.0, epsilon = 1e-14);
        assert_relative_eq!(e.chi, -(0.4f64).sqrt() * 0.6 * (2.0 - vb1), epsilon = 1e-14);
        assert_relative_eq!(
            e.gamma,
            0.4 * 0.6 * vb1 + (1.0 - 0.4 + 0.16) * 2.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(e.phi, (0.4f64 * 3.0).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(e.theta, -0.6 * 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(
            e.delta(0.0, 3.0),
            Matrix2::new(e.gamma, 0.0, 0.0, e.gamma + 1.8),
            epsilon = 1e-14
        );
    }

    #[test]
    fn pure_loss_has_no_ancilla_correlations() {
        let p = TwoWayParams::new(2.0, 1e-3, 0.3, 1.0).unwrap();
        let cm = eve_cm(&p, p.mu, p.mu).unwrap();
        for (i, j) in [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)] {
            assert_eq!(cm.block(i, j), Matrix2::zeros(), "block ({i}, {j})");
        }
        let d = rr_conditional_correlations(&p);
        assert_eq!(d.fixed_view::<2, 2>(2, 0).into_owned(), Matrix2::zeros());
        assert_eq!(d.fixed_view::<2, 2>(6, 0).into_owned(), Matrix2::zeros());
    }

    #[test]
    fn correlation_block_values() {
        let p = TwoWayParams::new(1.0, 4.0, 0.5, 2.0).unwrap();
        let d = rr_conditional_correlations(&p);
        assert_relative_eq!(d[(0, 0)], 0.5 * 0.5f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(d[(2, 0)], 0.5 * 3f64.sqrt(), epsilon = 1e-14);
        assert_relative_eq!(d[(3, 1)], -0.5 * 3f64.sqrt(), epsilon = 1e-14);
        // -0.5 (0.5 + 4) + 0.5·2·0.5
        assert_relative_eq!(d[(4, 0)], -1.75, epsilon = 1e-14);
        assert_relative_eq!(d[(6, 0)], 1.5f64.sqrt(), epsilon = 1e-14);

        let p = TwoWayParams::new(1.7, 1e-12, 0.5, 1.7).unwrap();
        assert_eq!(rr_conditional_correlations(&p)[(0, 0)], 0.0);
    }

    #[test]
    fn asymptotic_rates() {
        assert_relative_eq!(
            rate_dr_asym(1.0, 0.5, 1.0).unwrap(),
            0.5 * 1.5f64.log2(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            rate_rr_asym(1.0, 0.5, 1.0).unwrap(),
            0.5 * 2.5f64.log2(),
            epsilon = 1e-14
        );
        assert_relative_eq!(
            rate_rr_asym(10.0, 0.5, 1.0).unwrap(),
            0.5 * (2.375f64 / 1.625).log2(),
            epsilon = 1e-14
        );
        assert!(rate_rr_asym(1.0, 1e-9, 1.0).unwrap().abs() < 1e-8);
        assert!((rate_dr_asym(1.0, 2f64.sqrt() - 1.0, 1.0).unwrap()).abs() < 1e-14);
        assert!(rate_rr_asym(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn pure_loss_nu2_is_vacuum() {
        for v0 in [1.0, 7.0, 300.0] {
            for t in [0.1, 0.6] {
                assert_relative_eq!(rr_conditional_nu2(v0, t, 1.0), 1.0, epsilon = 1e-14);
            }
        }
    }
}
