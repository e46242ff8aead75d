//! Floating-point symplectic geometry on the charts: Fubini–Study forms on
//! the ambient embeddings, moment maps, Hamiltonian vector fields, Poisson
//! brackets, the fibration map, and the residual checks certifying the
//! Lagrangian, special, and horizontal-proportionality conditions.
//!
//! Conventions. A chart point z in C^d is identified with x in R^{2d} via
//! x[2i] = Re z_i, x[2i+1] = Im z_i. The Fubini–Study form on a factor with
//! homogeneous tuple x and complex tangent lifts u, v is
//! omega(u, v) = Im h(u, v) with
//! h(u, v) = (<u,v>|x|^2 - <u,x><x,v>) / |x|^4, <u,v> = sum u_a conj(v_a);
//! this normalization makes the circle action of weight w Hamiltonian with
//! moment value sum_a w_a |x_a|^2 / (2|x|^2), so iota_V omega = d mu holds
//! on the nose and every residual below is scale-free.
//!
//! Measured scope. With these restricted Fubini–Study structures the full
//! certificate (all brackets, Lagrangian fibers, horizontal
//! proportionality) holds when the fibration base is one-dimensional
//! (flag n = 3, both quadrics at m = 2). When the base is two-dimensional
//! or larger, the torus brackets {mu_i, mu_j} and {mu_i, |f_j|} still
//! vanish, but the base brackets {|f_i|, |f_j|} do not, the fibers of rho
//! are measurably non-Lagrangian, and omega restricted to the horizontal
//! space is not proportional to the pulled-back base form. The deviation is
//! stable under refinement of the finite-difference step and was reproduced
//! by independent reimplementations, so the suite reports it honestly
//! instead of suppressing it; see the repository README for the details.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::DifferentialForm;
use crate::models::{DivisorChoice, Family, VarietyChart};
use crate::ExecMode;

/// Tolerances used by the numeric suites.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Residual tolerance for the Lagrangian / special / bracket checks.
    pub residual: f64,
    /// Relative tolerance for symbolic-numeric agreement.
    pub agreement: f64,
    /// Tight tolerance for identities that hold to machine precision.
    pub tight: f64,
    /// Pole guard used when evaluating rational functions.
    pub pole_guard: f64,
    /// Central-difference step on free coordinates.
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-6,
            agreement: 1e-8,
            tight: 1e-10,
            pole_guard: crate::exactfield::DEFAULT_POLE_GUARD,
            fd_step: 1e-5,
        }
    }
}

/// How points are drawn.
#[derive(Clone, Copy, Debug)]
pub struct SampleConfig {
    /// Minimum magnitude of every guard quantity.
    pub eps_den: f64,
    /// Draws before giving up.
    pub budget: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            eps_den: crate::exactfield::DEFAULT_POLE_GUARD,
            budget: 10_000,
        }
    }
}

impl SampleConfig {
    /// Guard used by the certification suites: keeps points comfortably
    /// away from poles so finite differences stay accurate at 1e-6.
    pub fn suite() -> Self {
        SampleConfig {
            eps_den: 5e-2,
            ..Self::default()
        }
    }
}

/// A sampled chart point with its cached ambient tuples.
#[derive(Clone, Debug)]
pub struct NumericPoint {
    pub z: Vec<Complex64>,
    pub tuples: Vec<Vec<Complex64>>,
    pub relation_residual: f64,
}

/// Real tangent frames at a point: the fiber of rho, the vertical space
/// ker dF, and its omega-orthogonal complement. Columns are orthonormal
/// basis vectors in chart real coordinates.
#[derive(Clone, Debug)]
pub struct TangentFrame {
    pub fiber: DMatrix<f64>,
    pub vertical: DMatrix<f64>,
    pub horizontal: DMatrix<f64>,
}

/// Aggregated outcome of one residual check over a point set.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub schema_version: u32,
    pub id: String,
    pub family: Family,
    pub size: usize,
    pub divisor: usize,
    pub points: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn from_values(
        id: &str,
        chart: &VarietyChart,
        d: DivisorChoice,
        values: &[f64],
        tolerance: f64,
    ) -> Self {
        let max = values.iter().cloned().fold(0.0f64, f64::max);
        let mean = if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        ResidualReport {
            schema_version: crate::SCHEMA_VERSION,
            id: format!("{}-{}-{}-j{}", id, chart.family.as_str(), chart.size, d.j),
            family: chart.family,
            size: chart.size,
            divisor: d.j,
            points: values.len(),
            max_residual: max,
            mean_residual: mean,
            tolerance,
            pass: max < tolerance,
        }
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{} {} (points {}, max {:.3e}, mean {:.3e}, tol {:.1e})",
            self.id,
            if self.pass { "ok" } else { "FAILED" },
            self.points,
            self.max_residual,
            self.mean_residual,
            self.tolerance
        )
    }
}

// ---------------------------------------------------------------------------
// Points and sampling

impl NumericPoint {
    pub fn from_coordinates(chart: &VarietyChart, z: Vec<Complex64>) -> Result<Self> {
        if z.len() != chart.dim() {
            return Err(Error::Config(format!(
                "expected {} coordinates, got {}",
                chart.dim(),
                z.len()
            )));
        }
        let tuples = chart.ambient_embedding(&z)?;
        let relation_residual = chart.defining_residual(&tuples);
        if relation_residual >= 1e-10 {
            return Err(Error::Numerical(format!(
                "defining-equation residual {relation_residual:.3e} too large"
            )));
        }
        Ok(NumericPoint {
            z,
            tuples,
            relation_residual,
        })
    }
}

/// Draws a chart point away from all guard loci of divisor choice `d`:
/// log-uniform modulus in [0.3, 3], uniform phase, rejection sampling.
/// Deterministic under a fixed seed.
pub fn sample_point(
    chart: &VarietyChart,
    d: DivisorChoice,
    seed: u64,
    cfg: &SampleConfig,
) -> Result<NumericPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guards = chart.guard_polys(d);
    for _ in 0..cfg.budget {
        let z: Vec<Complex64> = (0..chart.dim())
            .map(|_| {
                let r = (0.3f64.ln() + rng.gen::<f64>() * (3.0f64.ln() - 0.3f64.ln())).exp();
                let phi = rng.gen::<f64>() * std::f64::consts::TAU;
                Complex64::from_polar(r, phi)
            })
            .collect();
        let clear = guards
            .iter()
            .all(|g| g.eval_complex(&z).map(|v| v.norm() > cfg.eps_den).unwrap_or(false));
        if !clear {
            continue;
        }
        return NumericPoint::from_coordinates(chart, z);
    }
    Err(Error::Sampling(format!(
        "rejection budget {} exhausted (guard {:.1e})",
        cfg.budget, cfg.eps_den
    )))
}

// ---------------------------------------------------------------------------
// Fubini-Study geometry

fn herm(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

/// Fubini-Study Hermitian pairing of two tangent lifts at tuple x.
fn fs_h(x: &[Complex64], u: &[Complex64], v: &[Complex64]) -> Complex64 {
    let n2 = herm(x, x).re;
    (herm(u, v) * n2 - herm(u, x) * herm(x, v)) / (n2 * n2)
}

/// Complex direction of the real chart basis vector `r`.
fn real_dir(r: usize) -> (usize, Complex64) {
    if r % 2 == 0 {
        (r / 2, Complex64::new(1.0, 0.0))
    } else {
        (r / 2, Complex64::new(0.0, 1.0))
    }
}

/// Complex Jacobian of polynomial tuple `coords` at z: rows indexed by the
/// tuple entries, columns by chart coordinates.
fn poly_jacobian(
    coords: &[crate::exactfield::Polynomial],
    z: &[Complex64],
) -> Result<DMatrix<Complex64>> {
    let d = z.len();
    let mut m = DMatrix::zeros(coords.len(), d);
    for (row, p) in coords.iter().enumerate() {
        for col in 0..d {
            m[(row, col)] = p.partial_derivative(col)?.eval_complex(z)?;
        }
    }
    Ok(m)
}

/// The pulled-back symplectic form as a 2d x 2d real matrix on chart real
/// coordinates: the sum of the ambient factors' Fubini-Study forms.
pub fn fubini_study_matrix(chart: &VarietyChart, p: &NumericPoint) -> Result<DMatrix<f64>> {
    let d2 = 2 * chart.dim();
    let mut w = DMatrix::zeros(d2, d2);
    for (factor, x) in chart.ambient_factors.iter().zip(&p.tuples) {
        let jac = poly_jacobian(&factor.coords, &p.z)?;
        // Lift of each real chart direction into the factor.
        let lifts: Vec<Vec<Complex64>> = (0..d2)
            .map(|r| {
                let (j, c) = real_dir(r);
                (0..x.len()).map(|a| jac[(a, j)] * c).collect()
            })
            .collect();
        for r in 0..d2 {
            for s in r + 1..d2 {
                let val = fs_h(x, &lifts[r], &lifts[s]).im;
                w[(r, s)] += val;
                w[(s, r)] -= val;
            }
        }
    }
    Ok(w)
}

/// Moment value of generator `i` at ambient tuples.
fn moment_at(chart: &VarietyChart, tuples: &[Vec<Complex64>]) -> Vec<f64> {
    (0..chart.torus_rank)
        .map(|i| {
            chart
                .ambient_factors
                .iter()
                .zip(tuples)
                .map(|(factor, x)| {
                    let n2: f64 = x.iter().map(|c| c.norm_sqr()).sum();
                    let num: f64 = factor
                        .weights
                        .iter()
                        .zip(x)
                        .map(|(wa, xa)| wa[i] * xa.norm_sqr())
                        .sum();
                    num / (2.0 * n2)
                })
                .sum()
        })
        .collect()
}

/// The moment map of the torus action, one value per generator.
pub fn moment_map(chart: &VarietyChart, p: &NumericPoint) -> Vec<f64> {
    moment_at(chart, &p.tuples)
}

/// rho at raw coordinates: moment values followed by the moduli of the
/// fibration functions of divisor choice `d`.
fn rho_at(
    chart: &VarietyChart,
    d: DivisorChoice,
    z: &[Complex64],
    pole_guard: f64,
) -> Result<Vec<f64>> {
    let tuples = chart.ambient_embedding(z)?;
    let mut out = moment_at(chart, &tuples);
    for f in chart.fibration_functions(d) {
        out.push(f.eval_complex(z, pole_guard)?.norm());
    }
    Ok(out)
}

/// The fibration rho = (mu_1..mu_k, |f_1|..|f_{n-k}|).
pub fn rho(chart: &VarietyChart, d: DivisorChoice, p: &NumericPoint, tol: &Tolerances) -> Result<Vec<f64>> {
    rho_at(chart, d, &p.z, tol.pole_guard)
}

fn perturbed(z: &[Complex64], r: usize, h: f64) -> Vec<Complex64> {
    let mut out = z.to_vec();
    let (j, c) = real_dir(r);
    out[j] += c * h;
    out
}

/// Central-difference gradient of a real function of the chart point, as a
/// vector over the 2d real coordinates.
pub fn fd_gradient<F>(f: F, z: &[Complex64], h: f64) -> Result<DVector<f64>>
where
    F: Fn(&[Complex64]) -> Result<f64>,
{
    let d2 = 2 * z.len();
    let mut g = DVector::zeros(d2);
    for r in 0..d2 {
        let fp = f(&perturbed(z, r, h))?;
        let fm = f(&perturbed(z, r, -h))?;
        g[r] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

/// Central-difference Jacobian of rho: rows are components of rho, columns
/// the 2d real chart coordinates.
pub fn rho_jacobian(
    chart: &VarietyChart,
    d: DivisorChoice,
    p: &NumericPoint,
    tol: &Tolerances,
) -> Result<DMatrix<f64>> {
    let d2 = 2 * chart.dim();
    let rows = chart.dim();
    let mut m = DMatrix::zeros(rows, d2);
    for r in 0..d2 {
        let fp = rho_at(chart, d, &perturbed(&p.z, r, tol.fd_step), tol.pole_guard)?;
        let fm = rho_at(chart, d, &perturbed(&p.z, r, -tol.fd_step), tol.pole_guard)?;
        for row in 0..rows {
            m[(row, r)] = (fp[row] - fm[row]) / (2.0 * tol.fd_step);
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Hamiltonian fields and brackets

/// Solves omega(V, .) = df, i.e. W^T V = grad f, on the chart tangent space.
pub fn hamiltonian_field(w: &DMatrix<f64>, grad: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = w.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || smax / smin > 1e10 {
        return Err(Error::Numerical(format!(
            "symplectic form restriction ill-conditioned (cond {:.3e})",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    let lu = w.transpose().lu();
    lu.solve(grad)
        .ok_or_else(|| Error::Numerical("singular symplectic form".into()))
}

/// Normalized Poisson bracket |df(V_g)| / (|df| |V_g|); scale-free, so the
/// 1e-6 tolerance is meaningful across charts.
pub fn poisson_bracket_normalized(
    w: &DMatrix<f64>,
    grad_f: &DVector<f64>,
    grad_g: &DVector<f64>,
) -> Result<f64> {
    let vg = hamiltonian_field(w, grad_g)?;
    let denom = grad_f.norm() * vg.norm();
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((grad_f.dot(&vg)).abs() / denom)
}

/// Raw bracket omega(V_f, V_g) = df(V_g).
pub fn poisson_bracket(
    w: &DMatrix<f64>,
    grad_f: &DVector<f64>,
    grad_g: &DVector<f64>,
) -> Result<f64> {
    let vg = hamiltonian_field(w, grad_g)?;
    Ok(grad_f.dot(&vg))
}

// ---------------------------------------------------------------------------
// Frames

/// Orthonormal kernel basis of `m` with a fixed expected dimension; errors
/// when the singular-value gap is not clean.
fn kernel_basis(m: &DMatrix<f64>, expected: usize) -> Result<DMatrix<f64>> {
    let n = m.ncols();
    let gram = m.transpose() * m;
    let eig = nalgebra::SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let sv: Vec<f64> = order
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();
    let smax = sv[n - 1].max(f64::MIN_POSITIVE);
    if expected == 0 || expected > n {
        return Err(Error::Numerical("bad kernel dimension request".into()));
    }
    let inside = sv[expected - 1];
    let outside = if expected < n { sv[expected] } else { f64::INFINITY };
    if inside > 1e-4 * smax || outside / inside.max(1e-300) < 1e3 {
        return Err(Error::NearSingularFiber {
            gap: outside / inside.max(1e-300),
        });
    }
    let mut basis = DMatrix::zeros(n, expected);
    for (col, &i) in order[..expected].iter().enumerate() {
        basis.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok(basis)
}

/// Real matrix of dF at a point: chart real coordinates to the tangent of
/// the base projective space (components orthogonal to the line C*y).
fn fibration_differential(chart: &VarietyChart, p: &NumericPoint) -> Result<DMatrix<f64>> {
    let y: Vec<Complex64> = chart
        .y_coords()
        .iter()
        .map(|c| c.eval_complex(&p.z))
        .collect::<Result<_>>()?;
    let n2: f64 = y.iter().map(|c| c.norm_sqr()).sum();
    if n2 < 1e-30 {
        return Err(Error::Numerical("fibration image vanishes".into()));
    }
    let jac = poly_jacobian(chart.y_coords(), &p.z)?;
    let d2 = 2 * chart.dim();
    let rows = 2 * y.len();
    let mut m = DMatrix::zeros(rows, d2);
    for r in 0..d2 {
        let (j, c) = real_dir(r);
        let u: Vec<Complex64> = (0..y.len()).map(|a| jac[(a, j)] * c).collect();
        // project off the homogeneous scaling direction
        let proj = herm(&u, &y) / n2;
        for a in 0..y.len() {
            let v = u[a] - proj * y[a];
            m[(2 * a, r)] = v.re;
            m[(2 * a + 1, r)] = v.im;
        }
    }
    Ok(m)
}

/// Pullback of the base Fubini-Study form through the fibration map, as a
/// 2d x 2d matrix on chart real coordinates.
pub fn base_form_pullback(chart: &VarietyChart, p: &NumericPoint) -> Result<DMatrix<f64>> {
    let y: Vec<Complex64> = chart
        .y_coords()
        .iter()
        .map(|c| c.eval_complex(&p.z))
        .collect::<Result<_>>()?;
    let jac = poly_jacobian(chart.y_coords(), &p.z)?;
    let d2 = 2 * chart.dim();
    let lifts: Vec<Vec<Complex64>> = (0..d2)
        .map(|r| {
            let (j, c) = real_dir(r);
            (0..y.len()).map(|a| jac[(a, j)] * c).collect()
        })
        .collect();
    let mut w = DMatrix::zeros(d2, d2);
    for r in 0..d2 {
        for s in r + 1..d2 {
            let val = fs_h(&y, &lifts[r], &lifts[s]).im;
            w[(r, s)] = val;
            w[(s, r)] = -val;
        }
    }
    Ok(w)
}

/// Builds the fiber / vertical / horizontal frames at a regular point.
pub fn fiber_frame(
    chart: &VarietyChart,
    d: DivisorChoice,
    p: &NumericPoint,
    tol: &Tolerances,
) -> Result<TangentFrame> {
    let jrho = rho_jacobian(chart, d, p, tol)?;
    let fiber = kernel_basis(&jrho, chart.dim())?;

    let df = fibration_differential(chart, p)?;
    let vertical = kernel_basis(&df, 2 * chart.torus_rank)?;

    let w = fubini_study_matrix(chart, p)?;
    // Hor = { u : omega(u, v) = 0 for all vertical v } = ker(V^T W)
    let constraint = vertical.transpose() * &w;
    let horizontal = kernel_basis(&constraint, 2 * chart.base_dim())?;

    Ok(TangentFrame {
        fiber,
        vertical,
        horizontal,
    })
}

// ---------------------------------------------------------------------------
// Residual checks

/// max |omega(u, v)| over fiber basis pairs, normalized by the largest
/// singular value of omega.
pub fn lagrangian_residual(w: &DMatrix<f64>, frame: &TangentFrame) -> f64 {
    let s = frame.fiber.transpose() * w * &frame.fiber;
    let scale = w.clone().svd(false, false).singular_values.max();
    s.iter().cloned().fold(0.0f64, |acc, v| acc.max(v.abs())) / scale
}

/// Evaluates the volume form on the complexified fiber basis and reports
/// the parity residual. On a fiber frame the form takes values in a real
/// line of phase i^dim, so the restriction is real when the complex chart
/// dimension is even and purely imaginary when it is odd; the residual is
/// |Im|/|value| in the even case and |Re|/|value| in the odd case.
pub fn special_residual(
    chart: &VarietyChart,
    d: DivisorChoice,
    p: &NumericPoint,
    frame: &TangentFrame,
    tol: &Tolerances,
) -> Result<f64> {
    let dim = chart.dim();
    let vectors: Vec<Vec<Complex64>> = (0..frame.fiber.ncols())
        .map(|col| {
            (0..dim)
                .map(|i| Complex64::new(frame.fiber[(2 * i, col)], frame.fiber[(2 * i + 1, col)]))
                .collect()
        })
        .collect();
    let value = chart
        .volume_form(d)
        .eval_on_vectors(&p.z, &vectors, tol.pole_guard)?;
    let norm = value.norm();
    if norm < 1e-30 {
        return Err(Error::Numerical("volume form vanishes on the fiber".into()));
    }
    Ok(if chart.dim() % 2 == 0 {
        value.im.abs() / norm
    } else {
        value.re.abs() / norm
    })
}

/// Restricts omega_X and the pulled-back base form to the horizontal space
/// and fits the proportionality scalar; returns (relative residual, c).
pub fn horizontal_proportionality(
    chart: &VarietyChart,
    p: &NumericPoint,
    frame: &TangentFrame,
) -> Result<(f64, f64)> {
    let w = fubini_study_matrix(chart, p)?;
    let wy = base_form_pullback(chart, p)?;
    let h = &frame.horizontal;
    let sx = h.transpose() * w * h;
    let sy = h.transpose() * wy * h;
    let denom = sy.iter().map(|v| v * v).sum::<f64>();
    if denom < 1e-30 {
        return Err(Error::Numerical("pulled-back base form degenerate on Hor".into()));
    }
    let c = sx.iter().zip(sy.iter()).map(|(a, b)| a * b).sum::<f64>() / denom;
    let num = sx
        .iter()
        .zip(sy.iter())
        .map(|(a, b)| (a - c * b) * (a - c * b))
        .sum::<f64>()
        .sqrt();
    let scale = sx.iter().map(|v| v * v).sum::<f64>().sqrt();
    if scale < 1e-30 {
        return Err(Error::Numerical("omega_X degenerate on Hor".into()));
    }
    Ok((num / scale, c))
}

/// Relative disagreement between the evaluated coefficients of two forms at
/// a point, normalized by the largest coefficient magnitude.
pub fn form_agreement_residual(
    lhs: &DifferentialForm,
    rhs: &DifferentialForm,
    z: &[Complex64],
    pole_guard: f64,
) -> Result<f64> {
    let a = lhs.eval_coefficients(z, pole_guard)?;
    let b = rhs.eval_coefficients(z, pole_guard)?;
    let keys: std::collections::BTreeSet<_> = a.keys().chain(b.keys()).cloned().collect();
    let zero = Complex64::new(0.0, 0.0);
    let scale = keys
        .iter()
        .map(|k| a.get(k).unwrap_or(&zero).norm().max(b.get(k).unwrap_or(&zero).norm()))
        .fold(0.0f64, f64::max)
        .max(1e-300);
    Ok(keys
        .iter()
        .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm())
        .fold(0.0f64, f64::max)
        / scale)
}

/// Applies the chart torus action with the given angles (one per generator).
pub fn torus_act(chart: &VarietyChart, z: &[Complex64], angles: &[f64]) -> Vec<Complex64> {
    let weights = chart.chart_weights();
    z.iter()
        .enumerate()
        .map(|(v, &zv)| {
            let phase: f64 = angles
                .iter()
                .zip(&weights)
                .map(|(t, row)| t * row[v] as f64)
                .sum();
            zv * Complex64::from_polar(1.0, phase)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Suites

/// Per-point residuals, aggregated by the suite runner.
struct PointResiduals {
    poisson: f64,
    lagrangian: f64,
    special: f64,
    horizontal: f64,
    scalar_ok: bool,
    agreement: f64,
}

fn point_residuals(
    chart: &VarietyChart,
    d: DivisorChoice,
    seed: u64,
    tol: &Tolerances,
    sample: &SampleConfig,
    lhs: &DifferentialForm,
    rhs: &DifferentialForm,
) -> Result<PointResiduals> {
    let p = sample_point(chart, d, seed, sample)?;
    let w = fubini_study_matrix(chart, &p)?;

    // Gradients of every component of rho.
    let n = chart.dim();
    let grads: Vec<DVector<f64>> = (0..n)
        .map(|c| {
            fd_gradient(
                |z| rho_at(chart, d, z, tol.pole_guard).map(|v| v[c]),
                &p.z,
                tol.fd_step,
            )
        })
        .collect::<Result<_>>()?;

    let mut poisson = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            poisson = poisson.max(poisson_bracket_normalized(&w, &grads[i], &grads[j])?);
        }
    }

    let frame = fiber_frame(chart, d, &p, tol)?;
    let lagrangian = lagrangian_residual(&w, &frame);
    let special = special_residual(chart, d, &p, &frame, tol)?;
    let (horizontal, c) = horizontal_proportionality(chart, &p, &frame)?;
    let agreement = form_agreement_residual(lhs, rhs, &p.z, tol.pole_guard)?;

    Ok(PointResiduals {
        poisson,
        lagrangian,
        special,
        horizontal,
        scalar_ok: c > 0.0,
        agreement,
    })
}

/// Runs the full numeric certification of one (chart, divisor) case at
/// `points` seeded points and returns one report per check.
pub fn run_numeric_case(
    chart: &VarietyChart,
    d: DivisorChoice,
    points: usize,
    base_seed: u64,
    tol: &Tolerances,
    mode: ExecMode,
) -> Result<Vec<ResidualReport>> {
    let sample = SampleConfig::suite();
    let lhs = {
        let contracted = crate::symverify::iterated_contraction(chart, &chart.top_form())?;
        let mut den = crate::exactfield::Polynomial::from_int(chart.vars(), 1);
        for f in chart.volume_denominator_factors(d) {
            den = den.mul(&f);
        }
        contracted.scale(&crate::exactfield::RationalFunction::new(
            crate::exactfield::Polynomial::from_int(chart.vars(), 1),
            den,
        )?)
    };
    let rhs = {
        // The identity lhs = sign * wedge(dlog f_j) carries a family- and
        // divisor-dependent global sign; take it from the exact check so the
        // numeric comparison is sign-correct for every family.
        let sign = crate::symverify::dlog_identity_check(chart, d)?
            .sign
            .unwrap_or(1);
        let w = crate::symverify::wedge_dlogs(&chart.fibration_functions(d))?;
        let num = crate::exactfield::Polynomial::from_int(chart.vars(), sign);
        let den = crate::exactfield::Polynomial::from_int(chart.vars(), 1);
        w.scale(&crate::exactfield::RationalFunction::new(num, den)?)
    };

    let results: Vec<Result<PointResiduals>> = mode.run(points, |i| {
        point_residuals(chart, d, base_seed.wrapping_add(i as u64), tol, &sample, &lhs, &rhs)
    });
    let mut collected = Vec::with_capacity(points);
    for r in results {
        collected.push(r?);
    }

    let take = |f: fn(&PointResiduals) -> f64| -> Vec<f64> { collected.iter().map(f).collect() };
    let scalar: Vec<f64> = collected
        .iter()
        .map(|r| if r.scalar_ok { 0.0 } else { 1.0 })
        .collect();

    Ok(vec![
        ResidualReport::from_values("poisson", chart, d, &take(|r| r.poisson), tol.residual),
        ResidualReport::from_values("lagrangian", chart, d, &take(|r| r.lagrangian), tol.residual),
        ResidualReport::from_values("special", chart, d, &take(|r| r.special), tol.residual),
        ResidualReport::from_values("horizontal", chart, d, &take(|r| r.horizontal), tol.residual),
        ResidualReport::from_values("horizontal-scalar-positive", chart, d, &scalar, 0.5),
        ResidualReport::from_values("agreement", chart, d, &take(|r| r.agreement), tol.agreement),
    ])
}
