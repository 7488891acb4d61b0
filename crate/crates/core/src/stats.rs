//! Statistical inference: paired bootstrap CIs, Spearman correlation, the
//! random-intercept mixed-effects fit with Wald contrasts, and the
//! degree-2 capability-lift fit.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::hypervolume_2d;
use crate::record::Condition;
use crate::rng;

/// Standard normal CDF via the Numerical-Recipes erfc approximation
/// (fractional error below 1.2e-7, ample for reported p-values).
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

fn erfc(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let poly = -z * z - 1.26551223
        + t * (1.00002368
            + t * (0.37409196
                + t * (0.09678418
                    + t * (-0.18628806
                        + t * (0.27886807
                            + t * (-1.13520398
                                + t * (1.48851587
                                    + t * (-0.82215223 + t * 0.17087277))))))));
    let ans = t * poly.exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

/// Two-sided normal p-value for a z statistic.
pub fn two_sided_p(z: f64) -> f64 {
    2.0 * (1.0 - normal_cdf(z.abs()))
}

/// Average ranks (1-based), ties sharing the mean of their positions.
fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks on ties. Constant vectors
/// have no defined rank correlation and are reported as an error.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput(format!(
            "spearman length mismatch: {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidInput("spearman needs at least 2 points".into()));
    }
    let rx = average_ranks(xs);
    let ry = average_ranks(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..xs.len() {
        let dx = rx[i] - mx;
        let dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidInput("spearman undefined for a constant vector".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// CI construction method. Basic (Hall-reflected): quantiles of the
/// bootstrap distribution reflected around the full-sample estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    #[default]
    BasicHallReflected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    pub n_boot: usize,
    pub seed: u64,
    pub method: CiMethod,
    pub alpha: f64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { n_boot: 5000, seed: 0, method: CiMethod::BasicHallReflected, alpha: 0.05 }
    }
}

impl BootstrapConfig {
    fn validate(&self) -> Result<()> {
        if self.n_boot < 100 {
            return Err(Error::InvalidConfig(format!(
                "n_boot must be at least 100, got {}",
                self.n_boot
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!("alpha must be in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_boot: usize,
}

/// Type-7 empirical quantile of a sorted sample.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    debug_assert!(m > 0);
    let h = p * (m - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(m - 1);
    let frac = h - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Core engine: resample unit indices with replacement, replicate `i`
/// drawing from substream `(seed, i)` so results are identical across
/// thread counts and replicate orderings.
fn bootstrap_over_indices<F>(n_units: usize, cfg: &BootstrapConfig, stat: F) -> Result<BootstrapResult>
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    cfg.validate()?;
    if n_units == 0 {
        return Err(Error::InvalidInput("bootstrap needs at least one unit".into()));
    }
    let identity: Vec<usize> = (0..n_units).collect();
    let estimate = stat(&identity);

    let mut replicates: Vec<f64> = (0..cfg.n_boot)
        .into_par_iter()
        .map(|i| {
            let mut prng = rng::substream(cfg.seed, i as u64);
            let idx: Vec<usize> =
                (0..n_units).map(|_| rng::gen_index(&mut prng, n_units)).collect();
            stat(&idx)
        })
        .collect();
    replicates.sort_by(f64::total_cmp);

    let q_lo = quantile_sorted(&replicates, cfg.alpha / 2.0);
    let q_hi = quantile_sorted(&replicates, 1.0 - cfg.alpha / 2.0);
    Ok(BootstrapResult {
        estimate,
        ci_low: 2.0 * estimate - q_hi,
        ci_high: 2.0 * estimate - q_lo,
        n_boot: cfg.n_boot,
    })
}

/// Paired bootstrap on (baseline, treatment) values matched on task id;
/// statistic is the mean difference, the resampling unit is the pair.
/// Pairs are canonicalized by sorting so the output depends only on the
/// pair multiset, not input order.
pub fn paired_bootstrap_mean(pairs: &[(f64, f64)], cfg: &BootstrapConfig) -> Result<BootstrapResult> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("paired bootstrap needs at least one pair".into()));
    }
    let mut diffs: Vec<f64> = pairs.iter().map(|(b, t)| t - b).collect();
    diffs.sort_by(f64::total_cmp);
    bootstrap_over_indices(diffs.len(), cfg, |idx| {
        idx.iter().map(|&i| diffs[i]).sum::<f64>() / idx.len() as f64
    })
}

/// Paired bootstrap on per-agent (quality, cost) points under a baseline
/// and a treatment condition; statistic is the hypervolume difference, the
/// resampling unit is the agent.
pub fn paired_bootstrap_hypervolume(
    pairs: &[((f64, f64), (f64, f64))],
    cost_ref: f64,
    cfg: &BootstrapConfig,
) -> Result<BootstrapResult> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("paired bootstrap needs at least one pair".into()));
    }
    let mut pairs: Vec<((f64, f64), (f64, f64))> = pairs.to_vec();
    pairs.sort_by(|a, b| {
        (a.0 .0, a.0 .1, a.1 .0, a.1 .1)
            .partial_cmp(&(b.0 .0, b.0 .1, b.1 .0, b.1 .1))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    bootstrap_over_indices(pairs.len(), cfg, |idx| {
        let baseline: Vec<(f64, f64)> = idx.iter().map(|&i| pairs[i].0).collect();
        let treatment: Vec<(f64, f64)> = idx.iter().map(|&i| pairs[i].1).collect();
        hypervolume_2d(&treatment, cost_ref) - hypervolume_2d(&baseline, cost_ref)
    })
}

/// One observation for the mixed-effects fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedRow {
    pub q: f64,
    pub condition: Condition,
    pub group: String,
}

/// Maximum-likelihood fit of `q ~ condition + (1 | group)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedFitResult {
    pub intercept: f64,
    pub intercept_se: f64,
    /// Fixed effects vs the blind reference, one per non-blind condition
    /// present in the data.
    pub beta: BTreeMap<Condition, f64>,
    pub se: BTreeMap<Condition, f64>,
    pub sigma2_u: f64,
    pub sigma2_e: f64,
    pub icc: f64,
    pub loglik: f64,
    pub n_obs: usize,
    pub n_groups: usize,
}

struct GroupStats {
    n: f64,
    /// X' 1 (column sums of the design rows in this group).
    s: Vec<f64>,
    /// X' X.
    t: Vec<Vec<f64>>,
    /// X' y.
    u: Vec<f64>,
    /// 1' y.
    ty: f64,
    /// y' y.
    qy: f64,
}

struct ProfiledFit {
    loglik: f64,
    beta: Vec<f64>,
    cov_unscaled: nalgebra::DMatrix<f64>,
    sigma2: f64,
}

/// Profiled ML at a fixed variance ratio `lambda = sigma2_u / sigma2_e`:
/// GLS for the fixed effects, closed-form residual variance, and the
/// profiled log-likelihood. Group inverses come from Sherman-Morrison on
/// the compound-symmetric block, so each evaluation is O(groups * p^2).
fn profiled_fit(groups: &[GroupStats], p: usize, n: f64, lambda: f64) -> Option<ProfiledFit> {
    let mut a = nalgebra::DMatrix::<f64>::zeros(p, p);
    let mut b = nalgebra::DVector::<f64>::zeros(p);
    let mut c = 0.0;
    let mut logdet = 0.0;
    for g in groups {
        let w = lambda / (1.0 + g.n * lambda);
        for i in 0..p {
            for j in 0..p {
                a[(i, j)] += g.t[i][j] - w * g.s[i] * g.s[j];
            }
            b[i] += g.u[i] - w * g.ty * g.s[i];
        }
        c += g.qy - w * g.ty * g.ty;
        logdet += (1.0 + g.n * lambda).ln();
    }
    let a_inv = a.clone().try_inverse()?;
    let beta = &a_inv * &b;
    let rss = c - beta.dot(&b);
    if rss <= 0.0 {
        return None;
    }
    let sigma2 = rss / n;
    let loglik = -0.5 * n * (2.0 * std::f64::consts::PI).ln()
        - 0.5 * n * sigma2.ln()
        - 0.5 * logdet
        - 0.5 * n;
    Some(ProfiledFit { loglik, beta: beta.iter().copied().collect(), cov_unscaled: a_inv, sigma2 })
}

const LAMBDA_CAP: f64 = 1e5;

/// Fit the random-intercept model by 1-D search over the profiled variance
/// ratio: a coarse log grid (plus the zero boundary) bracketed and refined
/// by golden-section. The tracked best never decreases, and the
/// `sigma2_u = 0` boundary is an admissible solution.
pub fn fit_random_intercept(rows: &[MixedRow]) -> Result<MixedFitResult> {
    let mut group_ids: Vec<&str> = rows.iter().map(|r| r.group.as_str()).collect();
    group_ids.sort_unstable();
    group_ids.dedup();
    if group_ids.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "random-intercept fit needs at least 2 groups, got {}",
            group_ids.len()
        )));
    }
    if !rows.iter().any(|r| r.condition.is_baseline()) {
        return Err(Error::InvalidInput("no blind reference rows in the data".into()));
    }
    let mut conditions: Vec<Condition> = Condition::ALL
        .iter()
        .copied()
        .filter(|c| !c.is_baseline() && rows.iter().any(|r| r.condition == *c))
        .collect();
    conditions.sort();
    let p = 1 + conditions.len();
    let col_of = |c: Condition| -> usize {
        1 + conditions.iter().position(|x| *x == c).expect("known condition")
    };

    let group_index: BTreeMap<&str, usize> =
        group_ids.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut groups: Vec<GroupStats> = (0..group_ids.len())
        .map(|_| GroupStats {
            n: 0.0,
            s: vec![0.0; p],
            t: vec![vec![0.0; p]; p],
            u: vec![0.0; p],
            ty: 0.0,
            qy: 0.0,
        })
        .collect();
    for row in rows {
        let g = &mut groups[group_index[row.group.as_str()]];
        let mut x = vec![0.0; p];
        x[0] = 1.0;
        if !row.condition.is_baseline() {
            x[col_of(row.condition)] = 1.0;
        }
        g.n += 1.0;
        for i in 0..p {
            if x[i] == 0.0 {
                continue;
            }
            g.s[i] += x[i];
            g.u[i] += x[i] * row.q;
            for j in 0..p {
                g.t[i][j] += x[i] * x[j];
            }
        }
        g.ty += row.q;
        g.qy += row.q * row.q;
    }
    let n = rows.len() as f64;

    let eval = |lambda: f64| profiled_fit(&groups, p, n, lambda).map(|f| (lambda, f));

    // Coarse scan: the zero boundary plus a log grid.
    let mut candidates: Vec<f64> = vec![0.0];
    let grid_points = 61;
    for i in 0..grid_points {
        let t = i as f64 / (grid_points - 1) as f64;
        candidates.push(10f64.powf(-5.0 + t * 10.0)); // 1e-5 .. 1e5
    }
    let mut best: Option<(f64, ProfiledFit)> = None;
    for lambda in &candidates {
        if let Some((l, f)) = eval(*lambda) {
            if best.as_ref().map_or(true, |(_, bf)| f.loglik > bf.loglik) {
                best = Some((l, f));
            }
        }
    }
    let (best_lambda, _) = best
        .as_ref()
        .ok_or_else(|| Error::NonConvergence {
            message: "profiled likelihood undefined everywhere".into(),
            last_ratio: 0.0,
        })?;

    // Golden-section refinement around the grid winner. The best-so-far
    // tracking keeps the reported likelihood monotone over iterations.
    let pos = candidates
        .iter()
        .position(|l| l == best_lambda)
        .expect("winner came from the candidate list");
    let lo = if pos == 0 { 0.0 } else { candidates[pos - 1] };
    let hi = if pos + 1 < candidates.len() { candidates[pos + 1] } else { LAMBDA_CAP };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = eval(x1).map(|(_, f)| f.loglik).unwrap_or(f64::NEG_INFINITY);
    let mut f2 = eval(x2).map(|(_, f)| f.loglik).unwrap_or(f64::NEG_INFINITY);
    for _ in 0..120 {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = eval(x1).map(|(_, f)| f.loglik).unwrap_or(f64::NEG_INFINITY);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = eval(x2).map(|(_, f)| f.loglik).unwrap_or(f64::NEG_INFINITY);
        }
    }
    for lambda in [a, (a + b) / 2.0, b] {
        if let Some((l, f)) = eval(lambda) {
            if f.loglik > best.as_ref().unwrap().1.loglik {
                best = Some((l, f));
            }
        }
    }

    let (lambda_hat, fit) = best.unwrap();
    if lambda_hat >= 0.999 * LAMBDA_CAP {
        return Err(Error::NonConvergence {
            message: "variance ratio ran into the search cap".into(),
            last_ratio: lambda_hat,
        });
    }

    let sigma2_e = fit.sigma2;
    let sigma2_u = lambda_hat * sigma2_e;
    let mut beta = BTreeMap::new();
    let mut se = BTreeMap::new();
    for cond in &conditions {
        let j = col_of(*cond);
        beta.insert(*cond, fit.beta[j]);
        se.insert(*cond, (sigma2_e * fit.cov_unscaled[(j, j)]).sqrt());
    }
    Ok(MixedFitResult {
        intercept: fit.beta[0],
        intercept_se: (sigma2_e * fit.cov_unscaled[(0, 0)]).sqrt(),
        beta,
        se,
        sigma2_u,
        sigma2_e,
        icc: sigma2_u / (sigma2_u + sigma2_e),
        loglik: fit.loglik,
        n_obs: rows.len(),
        n_groups: group_ids.len(),
    })
}

/// Wald contrast between two non-baseline conditions, with the
/// shared-intercept covariance approximation cov ~= se_a * se_b / 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaldContrast {
    pub delta_beta: f64,
    pub z: f64,
    pub p: f64,
}

pub fn wald_contrast(fit: &MixedFitResult, a: Condition, b: Condition) -> Result<WaldContrast> {
    if a == b {
        return Ok(WaldContrast { delta_beta: 0.0, z: 0.0, p: 1.0 });
    }
    let (ba, sa) = match (fit.beta.get(&a), fit.se.get(&a)) {
        (Some(b), Some(s)) => (*b, *s),
        _ => return Err(Error::InvalidInput(format!("condition {a} not in the fit"))),
    };
    let (bb, sb) = match (fit.beta.get(&b), fit.se.get(&b)) {
        (Some(b), Some(s)) => (*b, *s),
        _ => return Err(Error::InvalidInput(format!("condition {b} not in the fit"))),
    };
    let delta = ba - bb;
    let cov = 0.5 * sa * sb;
    let var = sa * sa + sb * sb - 2.0 * cov;
    let z = if var > 0.0 { delta / var.sqrt() } else { 0.0 };
    Ok(WaldContrast { delta_beta: delta, z, p: two_sided_p(z) })
}

/// Least-squares quadratic fit with vertex and concavity report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadFit {
    /// Coefficients (c0, c1, c2) of c0 + c1 x + c2 x^2.
    pub coefficients: (f64, f64, f64),
    /// Vertex (x, y); absent when the fit is effectively linear.
    pub vertex: Option<(f64, f64)>,
    pub concave: bool,
}

pub fn quad_fit(points: &[(f64, f64)]) -> Result<QuadFit> {
    let mut xs: Vec<f64> = points.iter().map(|(x, _)| *x).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "quadratic fit needs at least 3 distinct x values, got {}",
            xs.len()
        )));
    }
    let mut xtx = nalgebra::DMatrix::<f64>::zeros(3, 3);
    let mut xty = nalgebra::DVector::<f64>::zeros(3);
    for &(x, y) in points {
        let row = [1.0, x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                xtx[(i, j)] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }
    let coef = xtx
        .lu()
        .solve(&xty)
        .ok_or_else(|| Error::InvalidInput("degenerate quadratic design".into()))?;
    let (c0, c1, c2) = (coef[0], coef[1], coef[2]);
    let scale = points.iter().map(|(_, y)| y.abs()).fold(1.0_f64, f64::max);
    let eps = 1e-9 * scale;
    if c2.abs() <= eps {
        return Ok(QuadFit { coefficients: (c0, c1, 0.0), vertex: None, concave: false });
    }
    let vx = -c1 / (2.0 * c2);
    let vy = c0 - c1 * c1 / (4.0 * c2);
    Ok(QuadFit { coefficients: (c0, c1, c2), vertex: Some((vx, vy)), concave: c2 < 0.0 })
}
