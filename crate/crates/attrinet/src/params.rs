use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full parameter bundle for the growth models.
///
/// `kappa[a][b]` weighs how attractive an existing vertex of type `a` is to a
/// newcomer of type `b`. `gamma` selects preferential (`1.0`) or uniform
/// (`0.0`) attachment. `nu` is the optional weight measure of the jointly
/// weighted model; when absent only the independent-attribute model applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub k: usize,
    pub pi: Vec<f64>,
    pub kappa: Vec<Vec<f64>>,
    pub m: Vec<u32>,
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<f64>>,
}

impl ModelParams {
    /// Tree-case constructor: all out-degrees one.
    pub fn tree(pi: Vec<f64>, kappa: Vec<Vec<f64>>, gamma: f64) -> Result<Self> {
        let k = pi.len();
        validate(ModelParams {
            k,
            pi,
            kappa,
            m: vec![1; k],
            gamma,
            nu: None,
        })
    }

    pub fn new(pi: Vec<f64>, kappa: Vec<Vec<f64>>, m: Vec<u32>, gamma: f64) -> Result<Self> {
        let k = pi.len();
        validate(ModelParams {
            k,
            pi,
            kappa,
            m,
            gamma,
            nu: None,
        })
    }

    pub fn with_nu(mut self, nu: Vec<f64>) -> Result<Self> {
        self.nu = Some(nu);
        validate(self)
    }

    pub fn is_tree(&self) -> bool {
        self.m.iter().all(|&m| m == 1)
    }

    /// Single-type Barabási–Albert tree.
    pub fn barabasi_albert() -> Self {
        ModelParams::tree(vec![1.0], vec![vec![1.0]], 1.0).unwrap()
    }

    /// The rare-minority two-type kernel: kappa = ((1,1),(a,1)),
    /// pi = (theta, 1)/(1+theta) with theta = D*sqrt(a).
    pub fn rare_minority(a: f64, d: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::ZeroEntry(format!(
                "rare-minority kernel parameter must lie in (0,1), got {a}"
            )));
        }
        let theta = d * a.sqrt();
        ModelParams::tree(
            vec![theta / (1.0 + theta), 1.0 / (1.0 + theta)],
            vec![vec![1.0, 1.0], vec![a, 1.0]],
            1.0,
        )
    }
}

/// Checks positivity and shape invariants; renormalizes `pi` when it is off
/// by at most 1e-12.
pub fn validate(mut params: ModelParams) -> Result<ModelParams> {
    let k = params.k;
    if k == 0 || params.pi.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "pi has length {}, expected K={}",
            params.pi.len(),
            k
        )));
    }
    if params.kappa.len() != k || params.kappa.iter().any(|row| row.len() != k) {
        return Err(Error::DimensionMismatch(format!("kappa is not {k}x{k}")));
    }
    if params.m.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "m has length {}, expected K={}",
            params.m.len(),
            k
        )));
    }
    if let Some(nu) = &params.nu {
        if nu.len() != k {
            return Err(Error::DimensionMismatch(format!(
                "nu has length {}, expected K={}",
                nu.len(),
                k
            )));
        }
        if nu.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::ZeroEntry("nu has a non-positive entry".into()));
        }
    }
    if params.gamma != 0.0 && params.gamma != 1.0 {
        return Err(Error::BadGamma(params.gamma));
    }
    if params.pi.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::ZeroEntry("pi has a non-positive entry".into()));
    }
    let total: f64 = params.pi.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::ZeroEntry(format!(
            "pi sums to {total}, expected 1 within 1e-12"
        )));
    }
    for p in &mut params.pi {
        *p /= total;
    }
    if params
        .kappa
        .iter()
        .any(|row| row.iter().any(|&x| !(x > 0.0)))
    {
        return Err(Error::ZeroEntry("kappa has a non-positive entry".into()));
    }
    if params.m.iter().any(|&m| m < 1) {
        return Err(Error::ZeroEntry("out-degree m_a must be >= 1".into()));
    }
    Ok(params)
}
