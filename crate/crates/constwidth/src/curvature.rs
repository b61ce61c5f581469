//! Tangential and sectional radii of curvature, indicatrix slices,
//! quadratic-form fits, wideness predicates, and the curvature dichotomy
//! classification.
//!
//! The tangential estimator evaluates the support quotient
//! `(h(K,w) - <x,w>) / (1 - <u,w>)` along `w = u cos(beta) + t sin(beta)`
//! for a geometric angle schedule; liminf/limsup are approximated by the
//! min/max over the schedule tail. The sectional estimator reads squared
//! radial functions of rescaled hyperplane slices. Both carry a
//! convergence flag instead of forcing a value.

use crate::body::{Body, Membership};
use crate::error::{Error, Result};
use crate::geom::{make_direction_grid, Cap, Direction, DirectionGrid};
use crate::vecmath as vm;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Convergence tolerance for the schedule tail spread.
pub const RHO_CONV_TOL: f64 = 1e-2;
/// Default classification thresholds.
pub const TOL_ONE: f64 = 0.05;
pub const TOL_ZERO: f64 = 0.05;

/// Geometric angle schedule `beta_j = beta0 * factor^j`.
#[derive(Debug, Clone)]
pub struct RhoSchedule {
    pub beta0: f64,
    pub factor: f64,
    pub steps: usize,
}

impl Default for RhoSchedule {
    fn default() -> Self {
        RhoSchedule {
            beta0: 0.1,
            factor: 0.5,
            steps: 14,
        }
    }
}

impl RhoSchedule {
    pub fn new(beta0: f64, factor: f64, steps: usize) -> Result<Self> {
        if !(beta0 > 0.0 && beta0 <= std::f64::consts::FRAC_PI_8) {
            return Err(Error::InvalidInput(format!(
                "schedule start angle must lie in (0, pi/8], got {beta0}"
            )));
        }
        if !(factor > 0.0 && factor < 1.0) {
            return Err(Error::InvalidInput(format!(
                "schedule factor must lie in (0,1), got {factor}"
            )));
        }
        if steps < 3 {
            return Err(Error::InvalidInput("schedule needs at least 3 steps".into()));
        }
        Ok(RhoSchedule {
            beta0,
            factor,
            steps,
        })
    }

    pub fn angles(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.steps).map(|j| self.beta0 * self.factor.powi(j as i32))
    }
}

/// Default slice heights for the sectional estimator.
pub fn default_etas() -> Vec<f64> {
    (0..12).map(|j| 0.02 * 0.5f64.powi(j)).collect()
}

/// Tail min/max of a quotient sequence with liminf/limsup semantics.
#[derive(Debug, Clone)]
pub struct RhoEstimate {
    pub lower: f64,
    pub upper: f64,
    pub tail_len: usize,
    pub converged: bool,
    pub quotients: Vec<f64>,
}

impl RhoEstimate {
    fn from_quotients(quotients: Vec<f64>) -> Self {
        let tail_len = quotients.len().div_ceil(3);
        let tail = &quotients[quotients.len() - tail_len..];
        let lower = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let upper = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        RhoEstimate {
            lower,
            upper,
            tail_len,
            converged: upper - lower <= RHO_CONV_TOL,
            quotients,
        }
    }

    pub fn value(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn check_orthogonal(u: &Direction, t: &Direction) -> Result<()> {
    if u.dot(t).abs() > 1e-10 {
        return Err(Error::InvalidInput(format!(
            "tangent is not orthogonal to the normal (dot {})",
            u.dot(t)
        )));
    }
    Ok(())
}

/// Lower/upper tangential radius of curvature of `K` at `(u, t)` via the
/// support quotient along the angle schedule.
pub fn tangential_rho(
    k: &Body,
    u: &Direction,
    t: &Direction,
    sched: &RhoSchedule,
) -> Result<RhoEstimate> {
    check_orthogonal(u, t)?;
    let x = k.boundary_point(u, 1e-12)?;
    let guard = 10.0 * k.support_accuracy();
    let mut quotients = Vec::with_capacity(sched.steps);
    for beta in sched.angles() {
        // 1 - cos(beta), computed cancellation-free.
        let denom = 2.0 * (0.5 * beta).sin().powi(2);
        if denom < guard {
            break;
        }
        let w = u.rotate_towards(t, beta);
        let h = k.support(&w, 1e-12)?.finite()?;
        quotients.push((h - vm::dot(&x, w.coords())) / denom);
    }
    if quotients.len() < 2 {
        return Err(Error::ToleranceFailure {
            op: "tangential_rho (support tolerance coarser than the schedule)",
            achieved: guard,
            needed: 2.0 * (0.5 * sched.beta0).sin().powi(2),
        });
    }
    Ok(RhoEstimate::from_quotients(quotients))
}

/// Sectional radius of curvature via squared radial functions of the
/// rescaled slices `D_x(K, eta)`.
pub fn sectional_rho(
    k: &Body,
    u: &Direction,
    t: &Direction,
    etas: &[f64],
) -> Result<RhoEstimate> {
    let x = k.boundary_point(u, 1e-12)?;
    sectional_rho_at(k, &x, u, t, etas)
}

pub fn sectional_rho_at(
    k: &Body,
    x: &[f64],
    u: &Direction,
    t: &Direction,
    etas: &[f64],
) -> Result<RhoEstimate> {
    check_orthogonal(u, t)?;
    let mut quotients = Vec::with_capacity(etas.len());
    for &eta in etas {
        let p0 = vm::add_scaled(x, -eta, u.coords());
        if k.signed_margin(&p0) < -1e-12 {
            return Err(Error::EmptySlice { eta });
        }
        let b = k.ray_boundary(&p0, t.coords(), 1e-13)?;
        let s = vm::dist(&b, &p0);
        quotients.push(s * s / (2.0 * eta));
    }
    if quotients.len() < 2 {
        return Err(Error::InvalidInput("sectional schedule too short".into()));
    }
    Ok(RhoEstimate::from_quotients(quotients))
}

/// One rescaled slice `D_x(K, eta)` sampled over a tangent grid: radial
/// values feed sectional radii, support values feed the tangential
/// (Blaschke) side.
#[derive(Debug, Clone)]
pub struct IndicatrixSlice {
    pub tangents: Vec<Direction>,
    pub radial: Vec<f64>,
    pub support: Vec<f64>,
}

impl IndicatrixSlice {
    /// Consistency of the two descriptions: the support table must match
    /// the support of the radial outline (they describe the same convex
    /// slice).
    pub fn consistency_gap(&self) -> f64 {
        let mut worst = 0.0f64;
        for (g, hg) in self.tangents.iter().zip(&self.support) {
            let mut inner = f64::NEG_INFINITY;
            for (tj, rj) in self.tangents.iter().zip(&self.radial) {
                inner = inner.max(rj * tj.dot(g));
            }
            worst = worst.max((hg - inner).abs());
        }
        worst
    }
}

pub fn indicatrix_slice(
    k: &Body,
    u: &Direction,
    eta: f64,
    tangents: &[Direction],
) -> Result<IndicatrixSlice> {
    let x = k.boundary_point(u, 1e-12)?;
    let p0 = vm::add_scaled(&x, -eta, u.coords());
    if k.signed_margin(&p0) < -1e-12 {
        return Err(Error::EmptySlice { eta });
    }
    let scale = 1.0 / (2.0 * eta).sqrt();
    let mut radial = Vec::with_capacity(tangents.len());
    for t in tangents {
        check_orthogonal(u, t)?;
        let b = k.ray_boundary(&p0, t.coords(), 1e-13)?;
        radial.push(vm::dist(&b, &p0) * scale);
    }
    let support = if k.dim() == 2 {
        radial.clone()
    } else {
        tangents
            .iter()
            .map(|t| slice_support(k, &p0, u, t).map(|s| s * scale))
            .collect::<Result<Vec<f64>>>()?
    };
    Ok(IndicatrixSlice {
        tangents: tangents.to_vec(),
        radial,
        support,
    })
}

/// Support of the hyperplane slice `K inter {<y,u> = <p0,u>}` in tangent
/// direction `t`, maximized by a fan scan plus golden-section refinement
/// (the slice is convex, so the chord functional is quasi-unimodal).
fn slice_support(k: &Body, p0: &[f64], u: &Direction, t: &Direction) -> Result<f64> {
    let basis = vm::tangent_basis(u.coords());
    let tau: Vec<f64> = basis.iter().map(|b| vm::dot(t.coords(), b)).collect();
    let m = basis.len();
    if m != 2 {
        // Dimension > 3: fall back to the radial value along t.
        let b = k.ray_boundary(p0, t.coords(), 1e-13)?;
        return Ok(vm::dist(&b, p0));
    }
    let eval_angle = |phi: f64| -> Result<f64> {
        let c = [phi.cos(), phi.sin()];
        let mut dir = vec![0.0; p0.len()];
        for (ci, b) in c.iter().zip(&basis) {
            dir = vm::add_scaled(&dir, *ci, b);
        }
        let b = k.ray_boundary(p0, &dir, 1e-13)?;
        let s = vm::dist(&b, p0);
        Ok(s * (c[0] * tau[0] + c[1] * tau[1]))
    };
    let samples = 64;
    let mut best_phi = 0.0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..samples {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / samples as f64;
        let v = eval_angle(phi)?;
        if v > best {
            best = v;
            best_phi = phi;
        }
    }
    let h = 2.0 * std::f64::consts::PI / samples as f64;
    let (mut lo, mut hi) = (best_phi - h, best_phi + h);
    for _ in 0..50 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if eval_angle(m1)? >= eval_angle(m2)? {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    Ok(best.max(eval_angle(0.5 * (lo + hi))?))
}

/// Deterministic tangent grid in `u^perp`: `{t, -t}` in the plane, equally
/// spaced otherwise.
pub fn tangent_directions(u: &Direction, count: usize) -> Vec<Direction> {
    let basis = vm::tangent_basis(u.coords());
    if u.dim() == 2 {
        let t = Direction::new(&basis[0]).unwrap();
        return vec![t.clone(), t.negate()];
    }
    let count = count.max(4);
    (0..count)
        .map(|i| {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / count as f64;
            let mut c = vm::scale(&basis[0], phi.cos());
            c = vm::add_scaled(&c, phi.sin(), &basis[1]);
            Direction::new(&c).unwrap()
        })
        .collect()
}

/// Classification of a normal direction under the curvature dichotomy.
#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// All principal tangential radii within `tol_one` of 1.
    AllOne { residual: f64 },
    /// Some tangent with lower tangential radius below `tol_zero`.
    SomeZero { tangent: Direction, value: f64 },
    Indeterminate,
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::AllOne { .. } => "all_one",
            Classification::SomeZero { .. } => "some_zero",
            Classification::Indeterminate => "indeterminate",
        }
    }
}

/// Per-normal curvature report from a quadratic-form fit.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    pub u: Direction,
    /// Principal tangential radii, ascending.
    pub principal_radii: Vec<f64>,
    /// Reciprocals of the radii (principal curvatures), ascending.
    pub principal_curvatures: Vec<f64>,
    /// Max absolute deviation of the fit from the converged samples.
    pub fit_residual: f64,
    pub classification: Classification,
    pub samples_used: usize,
    pub samples_non_converged: usize,
    /// Smallest lower tangential radius seen over the tangent grid.
    pub min_lower: f64,
    pub min_lower_tangent: Option<Direction>,
}

/// Least-squares fit of a quadratic form to converged tangential radii
/// over a tangent grid (the Blaschke side).
pub fn fit_blaschke(
    k: &Body,
    u: &Direction,
    tangents: &[Direction],
    sched: &RhoSchedule,
) -> Result<CurvatureReport> {
    let needed = {
        let n = u.dim();
        n * (n - 1) / 2 + n - 1
    };
    if tangents.len() < needed {
        return Err(Error::InvalidInput(format!(
            "Blaschke fit needs at least {needed} tangent directions"
        )));
    }
    let mut samples = Vec::with_capacity(tangents.len());
    let mut lowers = Vec::with_capacity(tangents.len());
    let mut non_converged = 0usize;
    for t in tangents {
        let est = tangential_rho(k, u, t, sched)?;
        lowers.push((t.clone(), est.lower));
        if est.converged {
            samples.push((t.clone(), est.value()));
        } else {
            non_converged += 1;
        }
    }
    build_report(u, tangents.len(), non_converged, samples, lowers, false)
}

/// Euler-side fit on sectional curvature reciprocals at the support
/// element `(x, u)`.
pub fn fit_euler(
    k: &Body,
    x: &[f64],
    u: &Direction,
    tangents: &[Direction],
    etas: &[f64],
) -> Result<CurvatureReport> {
    let mut samples = Vec::with_capacity(tangents.len());
    let mut lowers = Vec::with_capacity(tangents.len());
    let mut non_converged = 0usize;
    for t in tangents {
        let est = sectional_rho_at(k, x, u, t, etas)?;
        lowers.push((t.clone(), est.lower));
        if est.converged && est.value() > 1e-9 {
            samples.push((t.clone(), 1.0 / est.value()));
        } else {
            non_converged += 1;
        }
    }
    build_report(u, tangents.len(), non_converged, samples, lowers, true)
}

fn build_report(
    u: &Direction,
    total: usize,
    non_converged: usize,
    samples: Vec<(Direction, f64)>,
    lowers: Vec<(Direction, f64)>,
    fitted_curvatures: bool,
) -> Result<CurvatureReport> {
    let min_pair = lowers
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .cloned();
    let (min_lower, min_lower_tangent) = match &min_pair {
        Some((t, v)) => (*v, Some(t.clone())),
        None => (f64::INFINITY, None),
    };
    let somezero = min_pair.filter(|(_, v)| *v <= TOL_ZERO);
    if non_converged as f64 > 0.2 * total as f64 || samples.is_empty() {
        let classification = match somezero {
            Some((t, v)) => Classification::SomeZero {
                tangent: t,
                value: v,
            },
            None => Classification::Indeterminate,
        };
        return Ok(CurvatureReport {
            u: u.clone(),
            principal_radii: Vec::new(),
            principal_curvatures: Vec::new(),
            fit_residual: f64::INFINITY,
            classification,
            samples_used: samples.len(),
            samples_non_converged: non_converged,
            min_lower,
            min_lower_tangent,
        });
    }
    let (values, residual) = fit_quadratic_form(u, &samples)?;
    let recip = |v: &f64| {
        if v.abs() > 1e-12 {
            1.0 / v
        } else {
            f64::INFINITY
        }
    };
    let (mut radii, mut curvatures) = if fitted_curvatures {
        (values.iter().map(recip).collect::<Vec<f64>>(), values)
    } else {
        (values.clone(), values.iter().map(recip).collect())
    };
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    curvatures.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let allone = radii.iter().all(|r| (*r - 1.0).abs() <= TOL_ONE);
    let classification = match (allone, somezero) {
        (true, None) => Classification::AllOne { residual },
        (false, Some((t, v))) => Classification::SomeZero {
            tangent: t,
            value: v,
        },
        _ => Classification::Indeterminate,
    };
    Ok(CurvatureReport {
        u: u.clone(),
        principal_radii: radii,
        principal_curvatures: curvatures,
        fit_residual: residual,
        classification,
        samples_used: samples.len(),
        samples_non_converged: non_converged,
        min_lower,
        min_lower_tangent,
    })
}

/// Fit `f(t) = t' S t` over unit tangents; returns the eigenvalues of `S`
/// (ascending) and the max fit deviation.
fn fit_quadratic_form(u: &Direction, samples: &[(Direction, f64)]) -> Result<(Vec<f64>, f64)> {
    let basis = vm::tangent_basis(u.coords());
    let m = basis.len();
    let unknowns = m * (m + 1) / 2;
    if samples.len() < unknowns {
        return Err(Error::InvalidInput(
            "not enough converged samples for the quadratic fit".into(),
        ));
    }
    let mut a = DMatrix::zeros(samples.len(), unknowns);
    let mut rhs = DVector::zeros(samples.len());
    for (row, (t, val)) in samples.iter().enumerate() {
        let tau: Vec<f64> = basis.iter().map(|b| vm::dot(t.coords(), b)).collect();
        let mut col = 0;
        for i in 0..m {
            for j in i..m {
                a[(row, col)] = if i == j {
                    tau[i] * tau[i]
                } else {
                    2.0 * tau[i] * tau[j]
                };
                col += 1;
            }
        }
        rhs[row] = *val;
    }
    let svd = a.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::InvalidInput(format!("quadratic fit failed: {e}")))?;
    let mut s = DMatrix::zeros(m, m);
    let mut col = 0;
    for i in 0..m {
        for j in i..m {
            s[(i, j)] = sol[col];
            s[(j, i)] = sol[col];
            col += 1;
        }
    }
    let residual = (&a * &sol - &rhs)
        .iter()
        .map(|r| r.abs())
        .fold(0.0, f64::max);
    let eig = SymmetricEigen::new(s);
    let mut values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((values, residual))
}

/// Is `K` alpha-wide at `(u, t)`: does the planar shadow profile on the
/// `t`-side avoid the open disc of radius `alpha` tangent from inside at
/// the top point (within margin `tol`)?
pub fn alpha_wide(k: &Body, u: &Direction, t: &Direction, alpha: f64, tol: f64) -> Result<bool> {
    check_orthogonal(u, t)?;
    let x = k.boundary_point(u, 1e-12)?;
    // Profile point at shadow normal angle phi, in (u, t) frame
    // coordinates relative to x.
    let profile = |phi: f64| -> Result<[f64; 2]> {
        let w = u.rotate_towards(t, phi);
        let p = k.boundary_point(&w, 1e-12)?;
        let d = vm::sub(&p, &x);
        Ok([vm::dot(&d, u.coords()), vm::dot(&d, t.coords())])
    };
    let gap = |p: &[f64; 2]| -> f64 {
        let dx = p[0] + alpha;
        let dy = p[1];
        (dx * dx + dy * dy).sqrt() - alpha
    };
    let mut min_gap = f64::INFINITY;
    let coarse = 512;
    let mut vals = Vec::with_capacity(coarse);
    for i in 1..coarse {
        let phi = std::f64::consts::PI * i as f64 / coarse as f64;
        let g = gap(&profile(phi)?);
        vals.push((phi, g));
        min_gap = min_gap.min(g);
    }
    // Local refinement around interior minima of the coarse sweep.
    for w in 1..vals.len().saturating_sub(1) {
        if vals[w].1 <= vals[w - 1].1 && vals[w].1 <= vals[w + 1].1 {
            let (mut lo, mut hi) = (vals[w - 1].0, vals[w + 1].0);
            for _ in 0..40 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if gap(&profile(m1)?) <= gap(&profile(m2)?) {
                    hi = m2;
                } else {
                    lo = m1;
                }
            }
            min_gap = min_gap.min(gap(&profile(0.5 * (lo + hi))?));
        }
    }
    // Geometric ladder of chord distances from x: catches corner dips at
    // scales far below the coarse sweep resolution.
    let plen = |phi: f64| -> Result<f64> {
        let p = profile(phi)?;
        Ok((p[0] * p[0] + p[1] * p[1]).sqrt())
    };
    let reach = plen(std::f64::consts::FRAC_PI_2)?.max(1e-6);
    let mut s_target = reach.min(0.5);
    while s_target > 1e-7 {
        let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI * 0.95);
        if plen(hi)? >= s_target {
            for _ in 0..45 {
                let mid = 0.5 * (lo + hi);
                if plen(mid)? < s_target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            min_gap = min_gap.min(gap(&profile(hi)?));
        }
        s_target *= 0.5;
    }
    Ok(min_gap >= -tol)
}

/// Membership test of the ball `B(x_K(u) - alpha*u, alpha)` via sampled
/// sphere points.
pub fn inscribed_ball_test(k: &Body, u: &Direction, alpha: f64) -> Result<bool> {
    let x = k.boundary_point(u, 1e-12)?;
    let center = vm::add_scaled(&x, -alpha, u.coords());
    let probes = match k.dim() {
        2 => make_direction_grid(2, std::f64::consts::PI / 64.0)?,
        3 => make_direction_grid(3, 0.3)?,
        d => make_direction_grid(d, 0.8)?,
    };
    for d in probes.dirs() {
        let p = vm::add_scaled(&center, alpha, d.coords());
        if k.membership(&p, 1e-9) == Membership::Outside {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Residual of the constant-width identity
/// `rho_s(K,u,t) + rho_i(K,-u,-t) = 1`.
pub fn zamfirescu_residual(
    k: &Body,
    u: &Direction,
    t: &Direction,
    sched: &RhoSchedule,
) -> Result<f64> {
    let grid = match k.dim() {
        2 => make_direction_grid(2, std::f64::consts::PI / 32.0)?,
        d => make_direction_grid(d, 0.35)?,
    };
    let wp = crate::body::width_profile(k, &grid)?;
    if wp.deficit > 2e-2 || (wp.max_width - 1.0).abs() > 2e-2 {
        return Err(Error::InvalidInput(format!(
            "zamfirescu residual needs constant width 1 (deficit {:.3e})",
            wp.deficit
        )));
    }
    let upper = tangential_rho(k, u, t, sched)?.upper;
    let lower = tangential_rho(k, &u.negate(), &t.negate(), sched)?.lower;
    Ok((upper + lower - 1.0).abs())
}

/// Dichotomy classification of a normal direction at the given thresholds.
pub fn classify_normal(
    k: &Body,
    u: &Direction,
    tol_one: f64,
    tol_zero: f64,
    sched: &RhoSchedule,
    tangent_count: usize,
) -> Result<CurvatureReport> {
    let tangents = tangent_directions(u, tangent_count);
    let mut report = fit_blaschke(k, u, &tangents, sched)?;
    let min_lower = report.min_lower;
    let min_t = report
        .min_lower_tangent
        .clone()
        .unwrap_or_else(|| tangents[0].clone());
    let fit_ok = report.fit_residual.is_finite() && !report.principal_radii.is_empty();
    let allone = fit_ok
        && report
            .principal_radii
            .iter()
            .all(|r| (*r - 1.0).abs() <= tol_one);
    let somezero = min_lower <= tol_zero;
    report.classification = match (allone, somezero) {
        (true, false) => Classification::AllOne {
            residual: report.fit_residual,
        },
        (false, true) => Classification::SomeZero {
            tangent: min_t,
            value: min_lower,
        },
        _ => Classification::Indeterminate,
    };
    Ok(report)
}

/// Grid parameters for the obstruction search.
#[derive(Debug, Clone)]
pub struct BkmGrids {
    pub cap_grid: DirectionGrid,
    pub tangent_count: usize,
    pub margin_tol: f64,
}

/// Search the cap for a witness `(u, t)` such that `K` is `1/k`-wide at
/// `(-u,-t)` while containing the inscribed ball `B(x_K(u) - u/k, 1/k)`.
/// `None` over all caps and all k is the numerical proxy for membership in
/// the typical set.
pub fn bkm_obstruction(
    k: &Body,
    kk: usize,
    cap: &Cap,
    grids: &BkmGrids,
) -> Result<Option<(Direction, Direction)>> {
    if kk == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let alpha = 1.0 / kk as f64;
    for u in grids.cap_grid.dirs() {
        if !cap.contains(u) {
            continue;
        }
        if !inscribed_ball_test(k, u, alpha)? {
            continue;
        }
        for t in tangent_directions(u, grids.tangent_count) {
            if alpha_wide(k, &u.negate(), &t.negate(), alpha, grids.margin_tol)? {
                return Ok(Some((u.clone(), t.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball_half() -> Body {
        Body::ball(&[0.0, 0.0], 0.5).unwrap()
    }

    #[test]
    fn ball_tangential_is_radius() {
        let k = ball_half();
        let u = Direction::from_angle(0.3);
        let t = tangent_directions(&u, 2)[0].clone();
        let est = tangential_rho(&k, &u, &t, &RhoSchedule::default()).unwrap();
        assert!(est.converged);
        // Support differences at the smallest schedule angles carry
        // ~1e-6 relative cancellation noise.
        assert!((est.lower - 0.5).abs() < 1e-4);
        assert!((est.upper - 0.5).abs() < 1e-4);
    }

    #[test]
    fn ball_sectional_is_radius() {
        let k = ball_half();
        let u = Direction::from_angle(1.2);
        let t = tangent_directions(&u, 2)[0].clone();
        let est = sectional_rho(&k, &u, &t, &default_etas()).unwrap();
        assert!(est.converged);
        assert!((est.value() - 0.5).abs() < 3e-3);
    }

    #[test]
    fn ball_classification_is_indeterminate() {
        // Radii 1/2 fire neither branch of the dichotomy; the honest
        // outcome is Indeterminate.
        let k = ball_half();
        let u = Direction::from_angle(0.0);
        let report =
            classify_normal(&k, &u, TOL_ONE, TOL_ZERO, &RhoSchedule::default(), 2).unwrap();
        assert_eq!(report.classification, Classification::Indeterminate);
        assert!((report.principal_radii[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ball_is_alpha_wide_up_to_radius() {
        let k = ball_half();
        let u = Direction::from_angle(0.9);
        let t = tangent_directions(&u, 2)[0].clone();
        assert!(alpha_wide(&k, &u, &t, 0.4, 1e-9).unwrap());
        assert!(!alpha_wide(&k, &u, &t, 0.6, 1e-9).unwrap());
    }

    #[test]
    fn ball_inscribed_test() {
        let k = ball_half();
        let u = Direction::from_angle(2.0);
        assert!(inscribed_ball_test(&k, &u, 0.45).unwrap());
        assert!(!inscribed_ball_test(&k, &u, 0.55).unwrap());
    }

    #[test]
    fn ball_zamfirescu_zero() {
        let k = ball_half();
        let u = Direction::from_angle(0.5);
        let t = tangent_directions(&u, 2)[0].clone();
        let r = zamfirescu_residual(&k, &u, &t, &RhoSchedule::default()).unwrap();
        assert!(r < 1e-4);
    }

    #[test]
    fn schedule_validation() {
        assert!(RhoSchedule::new(1.0, 0.5, 10).is_err());
        assert!(RhoSchedule::new(0.1, 1.5, 10).is_err());
        assert!(RhoSchedule::new(0.1, 0.5, 2).is_err());
    }

    #[test]
    fn ellipsoid_pole_radii() {
        // Semi-axes (1/2, 1/2, 1/4): at the pole e3 both principal
        // tangential radii equal a^2/c = 1.
        let e = Body::ellipsoid(&[0.0; 3], &[0.5, 0.5, 0.25]).unwrap();
        let u = Direction::axis(3, 2);
        let tangents = tangent_directions(&u, 8);
        let rep = fit_blaschke(&e, &u, &tangents, &RhoSchedule::default()).unwrap();
        assert_eq!(rep.principal_radii.len(), 2);
        for r in &rep.principal_radii {
            assert!((r - 1.0).abs() < 5e-3, "radius {r}");
        }
    }
}
