//! Economy primitives and validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-12;

/// Validated economy parameters. Construct through [`ParamSpec::validate`]
/// or one of the baseline constructors; `purchase_rate` is always the
/// balanced-budget rate delta_g = delta_m * M / (1 - M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    /// Population shares theta_i (sum to 1).
    pub theta: [f64; 3],
    /// Meeting rate alpha.
    pub alpha: f64,
    /// Agents' discount rate rho.
    pub rho: f64,
    /// Government discount rate rho_g (defaults to rho).
    pub rho_g: f64,
    /// Net consumption utilities u_i = U_i - D_i.
    pub u: [f64; 3],
    /// Production disutilities D_i.
    pub d: [f64; 3],
    /// Storage costs c_i per unit time (any sign).
    pub c: [f64; 3],
    /// Money share of holdings, M in [0, 1).
    pub money_stock: f64,
    /// Seignorage (confiscation) rate delta_m.
    pub seignorage_rate: f64,
    /// Balanced-budget purchase rate delta_g (derived).
    pub purchase_rate: f64,
    /// Government altruism weight lambda in [0, 1].
    pub altruism: f64,
}

/// Raw parameter bundle as read from configuration; validated into
/// [`ModelParams`]. Optional fields take the documented defaults.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub theta: [f64; 3],
    pub alpha: f64,
    pub rho: f64,
    #[serde(default)]
    pub rho_g: Option<f64>,
    pub u: [f64; 3],
    pub d: [f64; 3],
    pub c: [f64; 3],
    #[serde(default)]
    pub money_stock: f64,
    #[serde(default)]
    pub seignorage_rate: f64,
    #[serde(default = "default_altruism")]
    pub altruism: f64,
}

fn default_altruism() -> f64 {
    1.0
}

impl ParamSpec {
    pub fn validate(&self) -> Result<ModelParams> {
        let fail = |msg: String| Err(Error::Domain(msg));
        for (i, &t) in self.theta.iter().enumerate() {
            if !(t > 0.0) || !t.is_finite() {
                return fail(format!("theta[{}] = {t} must be positive", i + 1));
            }
        }
        let sum: f64 = self.theta.iter().sum();
        if (sum - 1.0).abs() > SIMPLEX_TOL {
            return fail(format!("population shares sum to {sum}, expected 1"));
        }
        if !(self.alpha > 0.0) {
            return fail(format!("alpha = {} must be positive", self.alpha));
        }
        if !(self.rho > 0.0) {
            return fail(format!("rho = {} must be positive", self.rho));
        }
        let rho_g = self.rho_g.unwrap_or(self.rho);
        if !(rho_g > 0.0) {
            return fail(format!("rho_g = {rho_g} must be positive"));
        }
        for (i, &x) in self.u.iter().enumerate() {
            if !(x > 0.0) {
                return fail(format!("u[{}] = {x} must be positive", i + 1));
            }
        }
        for (i, &x) in self.d.iter().enumerate() {
            if !(x > 0.0) {
                return fail(format!("D[{}] = {x} must be positive", i + 1));
            }
        }
        for (i, &x) in self.c.iter().enumerate() {
            if !x.is_finite() {
                return fail(format!("c[{}] = {x} must be finite", i + 1));
            }
        }
        let m = self.money_stock;
        if !(0.0..1.0).contains(&m) {
            return fail(format!("money stock M = {m} must lie in [0, 1)"));
        }
        if !(self.seignorage_rate >= 0.0) {
            return fail(format!(
                "seignorage rate delta_m = {} must be nonnegative",
                self.seignorage_rate
            ));
        }
        if !(0.0..=1.0).contains(&self.altruism) {
            return fail(format!("altruism lambda = {} must lie in [0, 1]", self.altruism));
        }
        let purchase_rate = if m == 0.0 {
            0.0
        } else {
            self.seignorage_rate * m / (1.0 - m)
        };
        Ok(ModelParams {
            theta: self.theta,
            alpha: self.alpha,
            rho: self.rho,
            rho_g,
            u: self.u,
            d: self.d,
            c: self.c,
            money_stock: m,
            seignorage_rate: self.seignorage_rate,
            purchase_rate,
            altruism: self.altruism,
        })
    }
}

impl ModelParams {
    /// Baseline economy A: storage costs increasing in the good index
    /// (c1 < c2 < c3), no money.
    pub fn model_a() -> ModelParams {
        ParamSpec {
            theta: [1.0 / 3.0; 3],
            alpha: 1.0,
            rho: 0.03,
            rho_g: None,
            u: [1.0; 3],
            d: [0.028; 3],
            c: [0.03, 0.1, 0.2],
            money_stock: 0.0,
            seignorage_rate: 0.0,
            altruism: 1.0,
        }
        .validate()
        .expect("baseline A parameters are valid")
    }

    /// Baseline economy B: storage costs decreasing in the good index
    /// (c1 > c2 > c3), no money.
    pub fn model_b() -> ModelParams {
        ParamSpec {
            c: [0.1, 0.05, 0.03],
            ..ModelParams::model_a().spec()
        }
        .validate()
        .expect("baseline B parameters are valid")
    }

    /// The raw spec equivalent of these params (for `..` updates).
    pub fn spec(&self) -> ParamSpec {
        ParamSpec {
            theta: self.theta,
            alpha: self.alpha,
            rho: self.rho,
            rho_g: Some(self.rho_g),
            u: self.u,
            d: self.d,
            c: self.c,
            money_stock: self.money_stock,
            seignorage_rate: self.seignorage_rate,
            altruism: self.altruism,
        }
    }

    /// Same economy with a different money stock and seignorage rate
    /// (purchase rate re-derived).
    pub fn with_money(&self, money_stock: f64, seignorage_rate: f64) -> Result<ModelParams> {
        ParamSpec {
            money_stock,
            seignorage_rate,
            ..self.spec()
        }
        .validate()
    }

    /// Same economy with different population shares.
    pub fn with_theta(&self, theta: [f64; 3]) -> Result<ModelParams> {
        ParamSpec { theta, ..self.spec() }.validate()
    }
}
