use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// All closed-form limit quantities for a parameter set at a fixed damping c.
///
/// `m_mat[a][b] = phi_ab[a][b] * (m_a/m_b) / (2 - phi_a[a])`; with unit
/// out-degrees this is the plain `phi_ab / (2 - phi_a)` kernel. The
/// out-degree weighting makes `pi` its left unit-eigenvector in every case,
/// so one matrix serves both the tree and multi-edge models.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheorySolution {
    pub k: usize,
    pub gamma: f64,
    pub m: Vec<u32>,
    pub c: f64,
    pub eta: Vec<f64>,
    pub nu: Vec<f64>,
    pub phi_ab: Vec<Vec<f64>>,
    pub phi_a: Vec<f64>,
    #[serde(rename = "M")]
    pub m_mat: Vec<Vec<f64>>,
    #[serde(rename = "Mc")]
    pub mc: Vec<Vec<f64>>,
    pub lambda_c: f64,
    pub h: Vec<f64>,
    #[serde(rename = "Psi")]
    pub psi: Vec<f64>,
    #[serde(rename = "markov_P")]
    pub markov_p: Vec<Vec<f64>>,
    pub expected_pr: Vec<f64>,
}

impl TheorySolution {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// nu, phi_{a,b} and row sums phi_a computed from eta.
#[derive(Debug, Clone)]
pub struct Derived {
    pub nu: Vec<f64>,
    pub phi_ab: Vec<Vec<f64>>,
    pub phi_a: Vec<f64>,
}

// ---------------------------------------------------------------------------
// small dense linear algebra (K is tiny, typically <= 5)
// ---------------------------------------------------------------------------

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-300 {
            return Err(Error::SingularSystem);
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[row][j] -= f * a[col][j];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for j in row + 1..n {
            s -= a[row][j] * x[j];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

pub(crate) fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
        .collect()
}

/// Perron root and right eigenvector (normalized to sum 1) of a positive
/// matrix, by power iteration to residual 1e-13.
pub(crate) fn perron(a: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = a.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..1_000_000 {
        let w = mat_vec(a, &v);
        let total: f64 = w.iter().sum();
        let v_next: Vec<f64> = w.iter().map(|x| x / total).collect();
        // Rayleigh-style estimate: ratio of consecutive iterate scales.
        lambda = total;
        let resid = mat_vec(a, &v_next)
            .iter()
            .zip(&v_next)
            .map(|(av, vv)| (av - lambda * vv).abs())
            .fold(0.0f64, f64::max);
        v = v_next;
        if resid < 1e-13 * lambda.max(1.0) {
            return Ok((lambda, v));
        }
    }
    // accept only if the residual is already decent
    let resid = mat_vec(a, &v)
        .iter()
        .zip(&v)
        .map(|(av, vv)| (av - lambda * vv).abs())
        .fold(0.0f64, f64::max);
    if resid < 1e-11 * lambda.max(1.0) {
        Ok((lambda, v))
    } else {
        Err(Error::NoConvergence(format!(
            "power iteration stalled at residual {resid:.3e}"
        )))
    }
}

// ---------------------------------------------------------------------------
// the degree-share minimizer eta
// ---------------------------------------------------------------------------

fn potential(y: &[f64], w: &[f64], kappa: &[Vec<f64>]) -> f64 {
    let k = y.len();
    let mut f: f64 = y.iter().sum();
    for j in 0..k {
        let s: f64 = (0..k).map(|l| y[l] * kappa[l][j]).sum();
        f -= 0.5 * w[j] * (y[j].ln() + s.ln());
    }
    f
}

/// Unique minimizer of the convex degree-share potential. Works in log
/// coordinates (damped Newton with gradient fallback), so iterates stay
/// strictly positive; the residual criterion is max_a |y_a dV/dy_a| < 1e-13.
pub fn solve_eta(params: &ModelParams) -> Result<Vec<f64>> {
    if params.gamma != 1.0 {
        return Err(Error::BadGamma(params.gamma));
    }
    let k = params.k;
    let w: Vec<f64> = (0..k)
        .map(|a| params.m[a] as f64 * params.pi[a])
        .collect();
    let kappa = &params.kappa;

    // y = w is exact for identical kappa rows and a good start in general
    let mut y: Vec<f64> = w.clone();
    let mut f_cur = potential(&y, &w, kappa);

    let grad = |y: &[f64]| -> (Vec<f64>, Vec<f64>) {
        // returns (gradient in log coords, per-column sums s_j)
        let s: Vec<f64> = (0..k)
            .map(|j| (0..k).map(|l| y[l] * kappa[l][j]).sum())
            .collect();
        let g: Vec<f64> = (0..k)
            .map(|a| {
                let t: f64 = (0..k).map(|j| w[j] * kappa[a][j] / s[j]).sum();
                y[a] - 0.5 * w[a] - 0.5 * y[a] * t
            })
            .collect();
        (g, s)
    };

    for _ in 0..500 {
        let (g, s) = grad(&y);
        let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // component-relative residual, so tiny degree shares are resolved to
        // full relative precision as well
        let gmax_rel = g
            .iter()
            .zip(&y)
            .map(|(gg, yy)| gg.abs() / yy.max(1e-300))
            .fold(0.0f64, f64::max);
        if gmax < 1e-13 && gmax_rel < 1e-12 {
            return Ok(y);
        }
        // Hessian in log coordinates:
        // H_ab = delta_ab (g_a + w_a/2) + (1/2) y_a y_b sum_j w_j k_aj k_bj / s_j^2
        let mut hess = vec![vec![0.0; k]; k];
        for a in 0..k {
            for b in 0..k {
                let mut q = 0.0;
                for j in 0..k {
                    q += w[j] * kappa[a][j] * kappa[b][j] / (s[j] * s[j]);
                }
                hess[a][b] = 0.5 * y[a] * y[b] * q;
            }
            hess[a][a] += g[a] + 0.5 * w[a];
        }
        let mut dir = match solve_linear(hess, g.iter().map(|x| -x).collect()) {
            Ok(d) => d,
            Err(_) => g.iter().map(|x| -x).collect(),
        };
        if dir.iter().zip(&g).map(|(d, gg)| d * gg).sum::<f64>() >= 0.0 {
            dir = g.iter().map(|x| -x).collect();
        }
        if gmax < 1e-7 {
            // inside the quadratic basin: potential differences fall below
            // f64 rounding, so take plain Newton steps on the gradient alone
            y = y
                .iter()
                .zip(&dir)
                .map(|(yi, d)| yi * d.exp())
                .collect();
            continue;
        }
        // backtracking line search on the potential
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = y
                .iter()
                .zip(&dir)
                .map(|(yi, d)| yi * (step * d).exp())
                .collect();
            let f_trial = potential(&trial, &w, kappa);
            if f_trial < f_cur {
                y = trial;
                f_cur = f_trial;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(format!(
                "line search stalled at gradient residual {gmax:.3e}"
            )));
        }
    }
    let (g, _) = grad(&y);
    let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if gmax < 1e-12 {
        Ok(y)
    } else {
        Err(Error::NoConvergence(format!(
            "iteration budget exhausted at gradient residual {gmax:.3e}"
        )))
    }
}

/// nu_b = pi_b / sum_l kappa_{l,b} eta_l; phi_{a,b} = kappa_{a,b} m_b nu_b;
/// phi_a = row sum = 2 - m_a pi_a / eta_a.
pub fn derived_quantities(eta: &[f64], params: &ModelParams) -> Derived {
    let k = params.k;
    let nu: Vec<f64> = (0..k)
        .map(|b| {
            let s: f64 = (0..k).map(|l| params.kappa[l][b] * eta[l]).sum();
            params.pi[b] / s
        })
        .collect();
    let phi_ab: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| params.kappa[a][b] * params.m[b] as f64 * nu[b])
                .collect()
        })
        .collect();
    let phi_a: Vec<f64> = phi_ab.iter().map(|row| row.iter().sum()).collect();
    Derived { nu, phi_ab, phi_a }
}

/// Spectral objects at damping c.
#[derive(Debug, Clone)]
pub struct Spectral {
    pub m_mat: Vec<Vec<f64>>,
    pub mc: Vec<Vec<f64>>,
    pub lambda_c: f64,
    pub h: Vec<f64>,
    pub psi: Vec<f64>,
    pub markov_p: Vec<Vec<f64>>,
}

pub fn spectral_data(der: &Derived, params: &ModelParams, c: f64) -> Result<Spectral> {
    let k = params.k;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::MalformedInput(format!(
            "damping must lie in (0,1), got {c}"
        )));
    }
    let m: Vec<f64> = params.m.iter().map(|&x| x as f64).collect();
    let m_mat: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| der.phi_ab[a][b] * (m[a] / m[b]) / (2.0 - der.phi_a[a]))
                .collect()
        })
        .collect();
    let mc: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    c * der.phi_ab[a][b] * (m[a] / m[b])
                        + if a == b { der.phi_a[a] } else { 0.0 }
                })
                .collect()
        })
        .collect();
    let (lambda_c, h) = perron(&mc)?;

    // Psi solves (I - M) Psi = 0 with pi . Psi = 1. Since the unit eigenvalue
    // of M is simple with left eigenvector pi, replacing the first row of
    // I - M by pi yields a nonsingular system.
    let mut a_sys: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { 1.0 } else { 0.0 } - m_mat[i][j])
                .collect()
        })
        .collect();
    // replace the row of the largest pi entry: the dropped equation is
    // implied by the left-eigenvector identity with the smallest
    // amplification factor
    let drop = (0..k)
        .max_by(|&i, &j| params.pi[i].total_cmp(&params.pi[j]))
        .unwrap();
    a_sys[drop] = params.pi.clone();
    let mut rhs = vec![0.0; k];
    rhs[drop] = 1.0;
    let mut psi = solve_linear(a_sys.clone(), rhs.clone())?;
    // iterative refinement: the system is ill-conditioned when some pi_a is
    // tiny (e.g. rare-minority regimes)
    for _ in 0..3 {
        let mut r = mat_vec(&a_sys, &psi);
        for (ri, bi) in r.iter_mut().zip(&rhs) {
            *ri -= bi;
        }
        let d = solve_linear(a_sys.clone(), r)?;
        for (pi_i, di) in psi.iter_mut().zip(&d) {
            *pi_i -= di;
        }
    }
    let resid = mat_vec(&m_mat, &psi)
        .iter()
        .zip(&psi)
        .map(|(mv, v)| (mv - v).abs())
        .fold(0.0f64, f64::max);
    if resid > 1e-10 || psi.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::NoConvergence(format!(
            "unit eigenvector residual {resid:.3e}"
        )));
    }
    let markov_p: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| m_mat[i][j] * psi[j] / psi[i]).collect())
        .collect();
    Ok(Spectral {
        m_mat,
        mc,
        lambda_c,
        h,
        psi,
        markov_p,
    })
}

/// Limiting mean normalized Page-rank per attribute, computed two ways: a
/// geometric-stopped-chain linear system (authoritative) and a truncated
/// attribute-string series. The two must agree within 1e-9.
pub fn expected_pagerank(spec: &Spectral, params: &ModelParams, c: f64) -> Result<Vec<f64>> {
    let k = params.k;
    // route 1: (I - c P) x = 1/Psi, E_a = (1-c) Psi_a x_a
    let a_sys: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { 1.0 } else { 0.0 } - c * spec.markov_p[i][j])
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = spec.psi.iter().map(|&p| 1.0 / p).collect();
    let x = solve_linear(a_sys, rhs)?;
    let linear: Vec<f64> = (0..k)
        .map(|a| (1.0 - c) * spec.psi[a] * x[a])
        .collect();

    // route 2: series E_a = (1-c)(1 + sum_n c^n (M^n 1)_a)
    let mut series = vec![1.0; k];
    let mut term = vec![1.0; k];
    let mut cn = 1.0;
    for _ in 0..100_000 {
        term = mat_vec(&spec.m_mat, &term);
        cn *= c;
        let maxterm = term.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for a in 0..k {
            series[a] += cn * term[a];
        }
        if cn * maxterm < 1e-14 {
            break;
        }
    }
    for s in series.iter_mut() {
        *s *= 1.0 - c;
    }
    for a in 0..k {
        if (linear[a] - series[a]).abs() > 1e-9 {
            return Err(Error::NoConvergence(format!(
                "expected Page-rank routes disagree at type {a}: {} vs {}",
                linear[a], series[a]
            )));
        }
    }
    Ok(linear)
}

/// Full pipeline: minimizer, derived quantities, spectral data, expected
/// Page-rank; requires gamma = 1.
pub fn solve(params: &ModelParams, c: f64) -> Result<TheorySolution> {
    let eta = solve_eta(params)?;
    let der = derived_quantities(&eta, params);
    let spec = spectral_data(&der, params, c)?;
    let expected_pr = expected_pagerank(&spec, params, c)?;
    Ok(TheorySolution {
        k: params.k,
        gamma: params.gamma,
        m: params.m.clone(),
        c,
        eta,
        nu: der.nu,
        phi_ab: der.phi_ab,
        phi_a: der.phi_a,
        m_mat: spec.m_mat,
        mc: spec.mc,
        lambda_c: spec.lambda_c,
        h: spec.h,
        psi: spec.psi,
        markov_p: spec.markov_p,
        expected_pr,
    })
}

// ---------------------------------------------------------------------------
// limiting degree laws
// ---------------------------------------------------------------------------

/// Limiting degree pmf for one attribute. Preferential attachment gives the
/// gamma-ratio law with polynomial tail exponent 1 + 2/phi_a; uniform
/// attachment gives a Geometric with success probability 1/(1+phi_a).
#[derive(Debug, Clone, Serialize)]
pub struct DegreeLaw {
    pub attribute: usize,
    pub support_min: u64,
    pub gamma: f64,
    pub phi_a: f64,
    /// 1 + 2/phi_a for gamma=1; geometric success probability for gamma=0.
    pub tail_exponent: f64,
}

impl DegreeLaw {
    pub fn pmf(&self, deg: u64) -> f64 {
        if deg < self.support_min {
            return 0.0;
        }
        let k = deg as f64;
        if self.gamma == 1.0 {
            let e = 2.0 / self.phi_a;
            let m = self.support_min as f64;
            ((2.0 / self.phi_a).ln() + ln_gamma(m + e) + ln_gamma(k)
                - ln_gamma(k + 1.0 + e)
                - ln_gamma(m))
            .exp()
        } else {
            let p = 1.0 / (1.0 + self.phi_a);
            p * (1.0 - p).powf(k - 1.0)
        }
    }

    /// P(degree >= deg); closed form in both cases.
    pub fn survival(&self, deg: u64) -> f64 {
        if deg <= self.support_min {
            return 1.0;
        }
        let k = deg as f64;
        if self.gamma == 1.0 {
            let e = 2.0 / self.phi_a;
            let m = self.support_min as f64;
            (ln_gamma(m + e) + ln_gamma(k) - ln_gamma(k + e) - ln_gamma(m)).exp()
        } else {
            let p = 1.0 / (1.0 + self.phi_a);
            (1.0 - p).powf(k - 1.0)
        }
    }
}

pub fn degree_law(a: usize, params: &ModelParams) -> Result<DegreeLaw> {
    if params.gamma == 1.0 {
        let eta = solve_eta(params)?;
        let der = derived_quantities(&eta, params);
        Ok(DegreeLaw {
            attribute: a,
            support_min: params.m[a] as u64,
            gamma: 1.0,
            phi_a: der.phi_a[a],
            tail_exponent: 1.0 + 2.0 / der.phi_a[a],
        })
    } else {
        let z = chi_phi_gamma0(params)?;
        Ok(DegreeLaw {
            attribute: a,
            support_min: 1,
            gamma: 0.0,
            phi_a: z.varphi_a[a],
            tail_exponent: 1.0 / (1.0 + z.varphi_a[a]),
        })
    }
}

/// Uniform-attachment analogues of nu and phi.
#[derive(Debug, Clone)]
pub struct ZeroGamma {
    pub chi: Vec<f64>,
    pub varphi_ab: Vec<Vec<f64>>,
    pub varphi_a: Vec<f64>,
}

pub fn chi_phi_gamma0(params: &ModelParams) -> Result<ZeroGamma> {
    if params.gamma != 0.0 {
        return Err(Error::BadGamma(params.gamma));
    }
    let k = params.k;
    let chi: Vec<f64> = (0..k)
        .map(|b| {
            let s: f64 = (0..k).map(|a| params.pi[a] * params.kappa[a][b]).sum();
            params.pi[b] / s
        })
        .collect();
    let varphi_ab: Vec<Vec<f64>> = (0..k)
        .map(|a| (0..k).map(|b| params.kappa[a][b] * chi[b]).collect())
        .collect();
    let varphi_a: Vec<f64> = varphi_ab.iter().map(|r| r.iter().sum()).collect();
    Ok(ZeroGamma {
        chi,
        varphi_ab,
        varphi_a,
    })
}

/// Tail exponent of the limiting normalized Page-rank distribution: the same
/// for every attribute.
pub fn pagerank_tail_exponent(lambda_c: f64, gamma: f64, c: f64) -> f64 {
    if gamma == 1.0 {
        2.0 / lambda_c
    } else {
        1.0 / c
    }
}

// ---------------------------------------------------------------------------
// sampling limits
// ---------------------------------------------------------------------------

/// Limiting attribute distribution of each node-sampling scheme (tree case).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingLimits {
    pub c: f64,
    pub walk_len: usize,
    pub uniform: Vec<f64>,
    pub degree: Vec<f64>,
    pub in_degree: Vec<f64>,
    pub pagerank: Vec<f64>,
    pub fixed_walk: Vec<f64>,
    /// common c -> 1 / walk-length -> infinity limit (pi_b Psi_b)
    pub stationary: Vec<f64>,
}

pub fn sampling_limits(
    sol: &TheorySolution,
    params: &ModelParams,
    c: f64,
    walk_len: usize,
) -> Result<SamplingLimits> {
    if !params.is_tree() {
        return Err(Error::NotTreeCase);
    }
    let k = params.k;
    let in_degree: Vec<f64> = (0..k)
        .map(|b| params.pi[b] * sol.phi_a[b] / (2.0 - sol.phi_a[b]))
        .collect();
    let stationary: Vec<f64> = (0..k).map(|b| params.pi[b] * sol.psi[b]).collect();

    // Page-rank scheme: pi_b Psi_b E_b[1/Psi at a Geom(1-c)-1 stopped chain],
    // same resolvent as the expected Page-rank.
    let a_sys: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { 1.0 } else { 0.0 } - c * sol.markov_p[i][j])
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = sol.psi.iter().map(|&p| 1.0 / p).collect();
    let x = solve_linear(a_sys, rhs)?;
    let pagerank: Vec<f64> = (0..k)
        .map(|b| (1.0 - c) * stationary[b] * x[b])
        .collect();

    let mut w: Vec<f64> = sol.psi.iter().map(|&p| 1.0 / p).collect();
    for _ in 0..walk_len {
        w = mat_vec(&sol.markov_p, &w);
    }
    let fixed_walk: Vec<f64> = (0..k).map(|b| stationary[b] * w[b]).collect();

    Ok(SamplingLimits {
        c,
        walk_len,
        uniform: params.pi.clone(),
        degree: sol.eta.clone(),
        in_degree,
        pagerank,
        fixed_walk,
        stationary,
    })
}

// ---------------------------------------------------------------------------
// rare minority asymptotics
// ---------------------------------------------------------------------------

/// Exact minority-representation values next to their small-a expansions for
/// the two-type kernel ((1,1),(a,1)) with pi = (theta,1)/(1+theta),
/// theta = D sqrt(a).
#[derive(Debug, Clone, Serialize)]
pub struct RareMinorityReport {
    pub a: f64,
    pub d: f64,
    pub theta: f64,
    pub exact_uniform: f64,
    pub exact_degree: f64,
    pub exact_in_degree: f64,
    pub exact_pagerank: f64,
    pub exact_fixed_walk: f64,
    pub exact_stationary: f64,
    pub asym_uniform: f64,
    pub asym_degree: f64,
    pub asym_in_degree: f64,
    pub asym_walk_limit: f64,
}

pub fn rare_minority(a: f64, d: f64, c: f64, walk_len: usize) -> Result<RareMinorityReport> {
    let params = ModelParams::rare_minority(a, d)?;
    let sol = solve(&params, c)?;
    let lim = sampling_limits(&sol, &params, c, walk_len)?;
    let theta = d * a.sqrt();
    let t = 2.0 * d * d - 0.5;
    let root = (t * t + 4.0 * d * d).sqrt();
    Ok(RareMinorityReport {
        a,
        d,
        theta,
        exact_uniform: lim.uniform[0],
        exact_degree: lim.degree[0],
        exact_in_degree: lim.in_degree[0],
        exact_pagerank: lim.pagerank[0],
        exact_fixed_walk: lim.fixed_walk[0],
        exact_stationary: lim.stationary[0],
        asym_uniform: d * a.sqrt(),
        asym_degree: 2.0 * d * a.sqrt() - (4.0 * d * d + 0.5) * a,
        asym_in_degree: 3.0 * d * a.sqrt(),
        asym_walk_limit: (t + root) / (2.0 * d * d + 0.5 + root),
    })
}

// ---------------------------------------------------------------------------
// homophily, heavier tails, sampling bias
// ---------------------------------------------------------------------------

/// Limits of the edge-density homophily statistics: D_a = M_{a,a}/pi_a and
/// symmetrized off-diagonal H.
pub fn homophily_limits(sol: &TheorySolution, params: &ModelParams) -> (Vec<f64>, Vec<Vec<f64>>) {
    let k = params.k;
    let d: Vec<f64> = (0..k).map(|a| sol.m_mat[a][a] / params.pi[a]).collect();
    let h: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|b| {
                    (sol.m_mat[b][a] / params.pi[a] + sol.m_mat[a][b] / params.pi[b]) / 2.0
                })
                .collect()
        })
        .collect();
    (d, h)
}

/// Golden-section minimization of a unimodal function on (lo, hi).
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c1 = b - inv_phi * (b - a);
    let mut c2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(c1), f(c2));
    while b - a > tol {
        if f1 < f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - inv_phi * (b - a);
            f1 = f(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + inv_phi * (b - a);
            f2 = f(c2);
        }
    }
    (a + b) / 2.0
}

/// Two-type tail comparison: the minority (type 1) degree law has the heavier
/// tail iff m_1 pi (M - eta) < m_2 (1-pi) eta, with eta the minimizer of the
/// potential restricted to the line y_1 + y_2 = M.
pub fn heavier_tail_condition(params: &ModelParams) -> Result<(f64, bool)> {
    if params.k != 2 {
        return Err(Error::DimensionMismatch(format!(
            "tail comparison needs exactly two types, got {}",
            params.k
        )));
    }
    let (m1, m2) = (params.m[0] as f64, params.m[1] as f64);
    let pi = params.pi[0];
    let kap = &params.kappa;
    let big_m = pi * m1 + (1.0 - pi) * m2;
    let v = |y: f64| -> f64 {
        big_m
            - 0.5
                * (m1 * pi * (y.ln() + (y * kap[0][0] + (big_m - y) * kap[1][0]).ln())
                    + m2 * (1.0 - pi)
                        * ((big_m - y).ln() + (y * kap[0][1] + (big_m - y) * kap[1][1]).ln()))
    };
    // golden section brackets the minimum; the Newton solver refines it to
    // full precision so the boundary case (equality) is decided correctly
    let coarse = golden_min(v, 1e-14 * big_m, big_m * (1.0 - 1e-14), 1e-10 * big_m);
    let eta_m = solve_eta(params).map(|e| e[0]).unwrap_or(coarse);
    let lhs = m1 * pi * (big_m - eta_m);
    let rhs = m2 * (1.0 - pi) * eta_m;
    let minority_heavier = lhs < rhs - 1e-10 * (lhs + rhs);
    Ok((eta_m, minority_heavier))
}

/// Sampling bias limit for the top-alpha degree percentile after retaining a
/// proportion p of nodes (or edges): binomial thinning shifts the percentile
/// and the two attribute tail masses differently.
pub fn bias_limit(params: &ModelParams, p: f64, alpha: f64) -> Result<f64> {
    if params.k != 2 {
        return Err(Error::DimensionMismatch(format!(
            "bias limit needs exactly two types, got {}",
            params.k
        )));
    }
    if params.gamma != 1.0 || !params.is_tree() {
        return Err(Error::NotTreeCase);
    }
    if !(p > 0.0 && p <= 1.0) || !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::MalformedInput(format!(
            "need p in (0,1] and alpha in (0,1), got p={p}, alpha={alpha}"
        )));
    }
    let law1 = degree_law(0, params)?;
    let law2 = degree_law(1, params)?;
    let pi = params.pi[0];
    let mix_pmf = |k: u64| pi * law1.pmf(k) + (1.0 - pi) * law2.pmf(k);
    let mix_surv = |k: u64| pi * law1.survival(k) + (1.0 - pi) * law2.survival(k);

    // (1-alpha) percentile of the mixture: smallest k with P(Z <= k) >= 1-alpha
    let mut k_alpha = 1u64;
    while mix_surv(k_alpha + 1) > alpha {
        k_alpha += 1;
    }
    let alpha_tilde = mix_surv(k_alpha);
    if alpha_tilde <= alpha + 1e-12 {
        return Err(Error::ConditionFailed(format!(
            "tail mass at the percentile, {alpha_tilde}, must exceed alpha"
        )));
    }

    if p == 1.0 {
        return Ok(0.0);
    }

    // Binomial-p thinned pmfs: mu_p(j) = sum_k mu(k) C(k,j) p^j (1-p)^(k-j),
    // truncated when the remaining upper tail cannot contribute 1e-12.
    let thinned = |pmf: &dyn Fn(u64) -> f64, surv: &dyn Fn(u64) -> f64, j: u64| -> f64 {
        let mut total = 0.0;
        let lj = j as f64;
        let mut k = j.max(1);
        loop {
            let kk = k as f64;
            let log_binom = ln_gamma(kk + 1.0) - ln_gamma(lj + 1.0) - ln_gamma(kk - lj + 1.0);
            let w = (log_binom + lj * p.ln() + (kk - lj) * (1.0 - p).ln()).exp();
            total += pmf(k) * w;
            // crude bound: every remaining term has binomial weight <= current
            if surv(k + 1) * w.max(1e-300) < 1e-13 && k > j + 8 {
                break;
            }
            k += 1;
            if k > 10_000_000 {
                break;
            }
        }
        total
    };
    let mix_thin = |j: u64| thinned(&|k| mix_pmf(k), &|k| mix_surv(k), j);
    let law1_thin = |j: u64| thinned(&|k| law1.pmf(k), &|k| law1.survival(k), j);

    // percentile of the thinned mixture via its cdf
    let mut cdf = mix_thin(0);
    let mut k_alpha_p = 0u64;
    while 1.0 - cdf > alpha {
        k_alpha_p += 1;
        cdf += mix_thin(k_alpha_p);
    }
    // survival at the percentile (recompute without accumulation error)
    let mut alpha_tilde_p = 1.0;
    for j in 0..k_alpha_p {
        alpha_tilde_p -= mix_thin(j);
    }
    if alpha_tilde_p <= alpha + 1e-12 {
        return Err(Error::ConditionFailed(format!(
            "thinned tail mass at the percentile, {alpha_tilde_p}, must exceed alpha"
        )));
    }
    let mut tail1_p = 1.0;
    for j in 0..k_alpha_p {
        tail1_p -= law1_thin(j);
    }
    let tail1 = law1.survival(k_alpha);
    Ok(pi * (tail1_p / alpha_tilde_p - tail1 / alpha_tilde))
}
