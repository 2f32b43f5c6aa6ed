//! Truncated number-basis oracle.
//!
//! Everything here exists to check the closed forms by brute force:
//! squeezed coherent states built two independent ways, Euler-Maruyama
//! integration of the linear filtering equation on the exact same noise
//! path the closed forms consume, posterior expectations, the
//! unconditional (averaged) master equation, and a moment-based fit back
//! onto the Gaussian family.
//!
//! Dense matrices are only used where operators genuinely mix the whole
//! basis (squeeze exponentials, eigenvalues); the filtering and master
//! equation steps exploit the ladder structure and cost O(N) and O(N^2).

mod dense;

pub use dense::{expm, hermitian_eigenvalues, FockMatrix};

use crate::error::Error;
use crate::noise::NoisePath;
use crate::params::ModelParams;
use crate::squeeze::{gamma_from_squeeze, QuadratureMoments, SqueezeParam, SqueezedCoherentRecord};
use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64 as C64;
use num_traits::Float;

pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// State vector over |0..=cutoff>.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            amps: vec![C64::new(0.0, 0.0); cutoff + 1],
        }
    }

    pub fn basis_state(cutoff: usize, n: usize) -> Self {
        let mut v = Self::zeros(cutoff);
        v.amps[n] = C64::new(1.0, 0.0);
        v
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self | other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn normalized(&self) -> Result<Self, Error> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    /// Mass in the last two amplitudes; the truncation-adequacy measure.
    pub fn tail_mass(&self) -> f64 {
        let n = self.amps.len();
        self.amps[n - 1].norm_sqr() + self.amps[n - 2].norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// `a |psi>` in place of a matrix product: `(a psi)_n = sqrt(n+1) psi_{n+1}`.
pub fn lower(v: &FockVector) -> FockVector {
    let d = v.dim();
    let mut out = FockVector::zeros(v.cutoff());
    for n in 0..d - 1 {
        out.amps[n] = ((n + 1) as f64).sqrt() * v.amps[n + 1];
    }
    out
}

/// `a^dag |psi>`: `(a^dag psi)_n = sqrt(n) psi_{n-1}` (top row truncated away).
pub fn raise(v: &FockVector) -> FockVector {
    let d = v.dim();
    let mut out = FockVector::zeros(v.cutoff());
    for n in 1..d {
        out.amps[n] = (n as f64).sqrt() * v.amps[n - 1];
    }
    out
}

/// Ladder matrices and the Hamiltonian over hbar:
/// `<m| a |n> = sqrt(n) delta_{m,n-1}`, `H/hbar = omega (a^dag a + 1/2)`.
pub fn build_operators(cutoff: usize, omega: f64) -> (FockMatrix, FockMatrix, FockMatrix) {
    let dim = cutoff + 1;
    let mut a = FockMatrix::zeros(dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.dagger();
    let mut h = FockMatrix::zeros(dim);
    for n in 0..dim {
        h[(n, n)] = C64::new(omega * (n as f64 + 0.5), 0.0);
    }
    (a, a_dag, h)
}

/// Coherent state amplitudes `e^{-|alpha|^2/2} alpha^n / sqrt(n!)`.
pub fn coherent_vector(alpha: C64, cutoff: usize) -> FockVector {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut c = C64::new(1.0, 0.0);
    amps.push(c);
    for n in 1..=cutoff {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let w = (-0.5 * alpha.norm_sqr()).exp();
    FockVector {
        amps: amps.into_iter().map(|z| z * w).collect(),
    }
}

/// Apply `exp(c a^2)` (or `exp(c a^dag^2)` with `raising = true`) by its
/// Taylor series. Each application shifts the support by two, so the
/// series terminates within the truncated space.
fn apply_quadratic_exp(v: &FockVector, c: C64, raising: bool) -> FockVector {
    let mut acc = v.clone();
    let mut term = v.clone();
    for k in 1..=v.dim() {
        let applied = if raising {
            raise(&raise(&term))
        } else {
            lower(&lower(&term))
        };
        term = applied.scale(c / k as f64);
        let t2 = term.norm_sqr();
        if t2 == 0.0 {
            break;
        }
        for (a, t) in acc.amps.iter_mut().zip(&term.amps) {
            *a += t;
        }
        if t2 < 1e-36 * acc.norm_sqr() {
            break;
        }
    }
    acc
}

/// Squeezed coherent state via the normally ordered squeeze operator:
/// `(cosh rho)^{-1/2} exp(-Gamma a^dag^2 / 2) exp(-ln(cosh rho) a^dag a)
/// exp(conj(Gamma) a^2 / 2)` applied to `|alpha>`, with
/// `Gamma = e^{i theta} tanh rho`.
pub fn build_squeezed_coherent_tol(
    xi: &SqueezeParam,
    alpha: C64,
    cutoff: usize,
    tail_tol: f64,
) -> Result<FockVector, Error> {
    if cutoff < 8 {
        return Err(Error::InvalidParameter {
            name: "cutoff",
            value: cutoff as f64,
            reason: "oracle cutoff must be at least 8",
        });
    }
    let gamma = gamma_from_squeeze(xi).gamma();
    let v = coherent_vector(alpha, cutoff);
    let mut u = apply_quadratic_exp(&v, gamma.conj() / 2.0, false);
    let ln_cosh = xi.rho().cosh().ln();
    for (n, a) in u.amps.iter_mut().enumerate() {
        *a *= (-ln_cosh * n as f64).exp();
    }
    let w = apply_quadratic_exp(&u, -gamma / 2.0, true);
    let out = w.scale(C64::new(1.0 / xi.rho().cosh().sqrt(), 0.0));
    let tail = out.tail_mass();
    if !(tail < tail_tol) {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail_mass: tail,
        });
    }
    Ok(out)
}

pub fn build_squeezed_coherent(
    xi: &SqueezeParam,
    alpha: C64,
    cutoff: usize,
) -> Result<FockVector, Error> {
    build_squeezed_coherent_tol(xi, alpha, cutoff, DEFAULT_TAIL_TOL)
}

/// Head block of the squeeze operator `S(xi) = exp((conj(xi) a^2 -
/// xi a^dag^2)/2)`, computed by matrix exponential at a padded cutoff.
///
/// Exponentiating the generator truncated at `cutoff` directly reflects
/// amplitude off the boundary back into low indices; padding pushes that
/// reflection out to where it no longer matters, so the extracted block
/// agrees with the true projected operator.
fn squeeze_operator_block(xi: &SqueezeParam, cutoff: usize) -> FockMatrix {
    let padded = cutoff + cutoff / 2 + 16;
    let (a, a_dag, _) = build_operators(padded, 1.0);
    let gen = a
        .matmul(&a)
        .scale(xi.xi().conj() * 0.5)
        .sub(&a_dag.matmul(&a_dag).scale(xi.xi() * 0.5));
    let s = expm(&gen);
    let mut out = FockMatrix::zeros(cutoff + 1);
    for i in 0..=cutoff {
        for j in 0..=cutoff {
            out[(i, j)] = s[(i, j)];
        }
    }
    out
}

/// Independent construction: matrix exponential of the squeeze generator
/// `(conj(xi) a^2 - xi a^dag^2) / 2` applied to the displaced vacuum.
pub fn build_squeezed_coherent_expm(
    xi: &SqueezeParam,
    alpha: C64,
    cutoff: usize,
) -> Result<FockVector, Error> {
    let s = squeeze_operator_block(xi, cutoff);
    let v = coherent_vector(alpha, cutoff);
    let out = FockVector::from_amplitudes(s.matvec(v.amplitudes()));
    let tail = out.tail_mass();
    if !(tail < DEFAULT_TAIL_TOL) {
        return Err(Error::CutoffTooSmall {
            cutoff,
            tail_mass: tail,
        });
    }
    Ok(out)
}

/// Build the full unnormalized state `l * S(xi) |alpha>` of a record.
pub fn assemble_record(r: &SqueezedCoherentRecord, cutoff: usize) -> Result<FockVector, Error> {
    Ok(build_squeezed_coherent(&r.squeeze, r.alpha, cutoff)?.scale(r.l))
}

/// Numerically confirm the Bogoliubov transform and the eigenvalue
/// identity of the squeeze operator: max over a test set of
/// `|S^dag a S v - (a cosh rho - a^dag e^{i theta} sinh rho) v|` and
/// `|(S a S^dag - alpha) |xi, alpha>|`.
///
/// Squeezed number states carry long tails, so the operator products are
/// taken in the same padded space as the exponential itself; residual
/// norms are measured on the first `cutoff + 1` amplitudes (away from
/// the truncation tail), and `cutoff` controls how accurate that window
/// is.
pub fn bogoliubov_check(xi: &SqueezeParam, cutoff: usize) -> Result<f64, Error> {
    let padded = cutoff + cutoff / 2 + 16;
    let (a, a_dag, _) = build_operators(padded, 1.0);
    let gen = a
        .matmul(&a)
        .scale(xi.xi().conj() * 0.5)
        .sub(&a_dag.matmul(&a_dag).scale(xi.xi() * 0.5));
    let s = expm(&gen);
    let s_dag = s.dagger();
    let g = gamma_from_squeeze(xi);
    let head_norm = |v: &[C64]| -> f64 {
        v[..=cutoff].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    };

    let mut worst: f64 = 0.0;
    for n in 0..=6.min(cutoff / 4) {
        let v = FockVector::basis_state(padded, n);
        let lhs = s_dag.matvec(&FockMatrix::matvec(&a, &s.matvec(v.amplitudes())));
        let rhs_v = lower(&v)
            .scale(C64::new(g.gamma1(), 0.0))
            .sub(&raise(&v).scale(g.gamma2()));
        let diff: Vec<C64> = lhs
            .iter()
            .zip(rhs_v.amplitudes())
            .map(|(x, y)| x - y)
            .collect();
        worst = worst.max(head_norm(&diff));
    }

    for &alpha in &[C64::new(0.0, 0.0), C64::new(0.7, 0.0)] {
        let state = build_squeezed_coherent(xi, alpha, padded)?;
        let lhs = s.matvec(&FockMatrix::matvec(&a, &s_dag.matvec(state.amplitudes())));
        let diff: Vec<C64> = lhs
            .iter()
            .zip(state.amplitudes())
            .map(|(x, y)| x - alpha * y)
            .collect();
        worst = worst.max(head_norm(&diff));
    }
    Ok(worst)
}

/// One Euler-Maruyama step of the linear filtering equation,
/// `psi += -(i H/hbar + (mu/2) a^dag a) psi dt + sqrt(mu) e^{-i phi(t)} a psi dQ`,
/// with `phi` sampled at the step start. No normalization: the equation
/// is linear and the norm carries the record's probability density.
pub fn sde_step(
    psi: &FockVector,
    dq: C64,
    dt: f64,
    t: f64,
    params: &ModelParams,
) -> Result<FockVector, Error> {
    let noise = params.mu.sqrt() * params.lo_factor(t) * dq;
    let mut out = FockVector::zeros(psi.cutoff());
    let d = psi.dim();
    for n in 0..d {
        let nf = n as f64;
        let drift = C64::new(
            -0.5 * params.mu * nf * dt,
            -params.omega * (nf + 0.5) * dt,
        );
        let mut z = psi.amps[n] + drift * psi.amps[n];
        if n + 1 < d {
            z += noise * (nf + 1.0).sqrt() * psi.amps[n + 1];
        }
        out.amps[n] = z;
    }
    if !out.is_finite() {
        return Err(Error::NumericalGuard {
            what: "filtering state became non-finite",
            step: 0,
        });
    }
    Ok(out)
}

/// Integrate the filtering equation along a whole record, returning the
/// state at every `sample_every`-th grid point (index 0 and the final
/// point always included).
pub fn run_filtering(
    path: &NoisePath,
    params: &ModelParams,
    psi0: &FockVector,
    sample_every: usize,
) -> Result<Vec<(usize, FockVector)>, Error> {
    let every = sample_every.max(1);
    let grid = path.grid();
    let mut psi = psi0.clone();
    let mut out = Vec::with_capacity(grid.n_steps() / every + 2);
    out.push((0, psi.clone()));
    for k in 0..grid.n_steps() {
        psi = sde_step(&psi, path.increments()[k], grid.dt(), grid.time(k), params)
            .map_err(|e| match e {
                Error::NumericalGuard { what, .. } => Error::NumericalGuard { what, step: k },
                other => other,
            })?;
        if (k + 1) % every == 0 || k + 1 == grid.n_steps() {
            out.push((k + 1, psi.clone()));
        }
    }
    Ok(out)
}

/// Posterior mean `<psi|Z psi> / <psi|psi>` of an arbitrary operator.
pub fn posterior_expectation(psi: &FockVector, z: &FockMatrix) -> Result<C64, Error> {
    let n2 = psi.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let zv = z.matvec(psi.amplitudes());
    let num: C64 = psi
        .amplitudes()
        .iter()
        .zip(&zv)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(num / n2)
}

/// Posterior quadrature moments from the ladder sums
/// `<a>`, `<a^2>`, `<a^dag a>` (all O(N), no matrices).
pub fn posterior_moments(psi: &FockVector) -> Result<QuadratureMoments, Error> {
    let n2 = psi.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let amps = psi.amplitudes();
    let d = amps.len();
    let mut ea = C64::new(0.0, 0.0);
    let mut ea2 = C64::new(0.0, 0.0);
    let mut en = 0.0;
    for n in 0..d {
        let nf = n as f64;
        en += nf * amps[n].norm_sqr();
        if n + 1 < d {
            ea += amps[n].conj() * amps[n + 1] * (nf + 1.0).sqrt();
        }
        if n + 2 < d {
            ea2 += amps[n].conj() * amps[n + 2] * ((nf + 1.0) * (nf + 2.0)).sqrt();
        }
    }
    ea /= n2;
    ea2 /= n2;
    en /= n2;
    let dx2 = (2.0 * ea2.re + 2.0 * en + 1.0) / 4.0 - ea.re * ea.re;
    let dy2 = (-2.0 * ea2.re + 2.0 * en + 1.0) / 4.0 - ea.im * ea.im;
    Ok(QuadratureMoments {
        mean_x: ea.re,
        mean_y: ea.im,
        dx: dx2.max(0.0).sqrt(),
        dy: dy2.max(0.0).sqrt(),
    })
}

/// Mixed state over the truncated basis.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    m: FockMatrix,
}

impl DensityMatrix {
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            m: FockMatrix::zeros(cutoff + 1),
        }
    }

    /// Projector |psi><psi| / <psi|psi>.
    pub fn from_pure(psi: &FockVector) -> Result<Self, Error> {
        let mut rho = Self::zeros(psi.cutoff());
        let n2 = psi.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        rho.add_scaled_outer(psi, 1.0 / n2);
        Ok(rho)
    }

    /// `rho += w |psi><psi|` (unnormalized psi); used for ensemble averages.
    pub fn add_scaled_outer(&mut self, psi: &FockVector, w: f64) {
        let d = self.m.dim();
        for i in 0..d {
            for j in 0..d {
                let v = w * psi.amplitudes()[i] * psi.amplitudes()[j].conj();
                self.m[(i, j)] += v;
            }
        }
    }

    #[inline]
    pub fn cutoff(&self) -> usize {
        self.m.cutoff()
    }

    pub fn matrix(&self) -> &FockMatrix {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn scale(&mut self, w: f64) {
        for z in self.m.data_mut() {
            *z *= w;
        }
    }

    /// `Tr rho^2` for Hermitian rho: the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.m.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<psi| rho |psi>` for a normalized pure target.
    pub fn fidelity_with_pure(&self, psi: &FockVector) -> Result<f64, Error> {
        let p = psi.normalized()?;
        let rv = self.m.matvec(p.amplitudes());
        let f: C64 = p
            .amplitudes()
            .iter()
            .zip(&rv)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(f.re)
    }

    /// Trace 1 within `1e-9`, Hermitian within `1e-12`, eigenvalues above
    /// `-1e-9`.
    pub fn validate(&self) -> Result<(), Error> {
        if (self.trace() - 1.0).abs() > 1e-9 {
            return Err(Error::InvariantViolation {
                what: "density matrix trace drifted from 1",
                t: 0.0,
            });
        }
        let d = self.m.dim();
        for i in 0..d {
            for j in i..d {
                if (self.m[(i, j)] - self.m[(j, i)].conj()).norm() > 1e-12 {
                    return Err(Error::InvariantViolation {
                        what: "density matrix lost Hermiticity",
                        t: 0.0,
                    });
                }
            }
        }
        let eig = hermitian_eigenvalues(&self.m);
        if eig.first().copied().unwrap_or(0.0) < -1e-9 {
            return Err(Error::InvariantViolation {
                what: "density matrix lost positivity",
                t: 0.0,
            });
        }
        Ok(())
    }
}

/// `(1/2) ||r1 - r2||_1`, half the sum of absolute eigenvalues of the
/// difference.
pub fn trace_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> f64 {
    let diff = r1.m.sub(&r2.m);
    0.5 * hermitian_eigenvalues(&diff).iter().map(|x| x.abs()).sum::<f64>()
}

/// Right-hand side of the unconditional master equation
/// `drho/dt = -i omega [n, rho] + mu (a rho a^dag - {n, rho}/2)`,
/// using the ladder structure (O(N^2), no matrix products).
fn lindblad_rhs(rho: &FockMatrix, params: &ModelParams) -> FockMatrix {
    let d = rho.dim();
    let mut out = FockMatrix::zeros(d);
    for m in 0..d {
        for n in 0..d {
            let mf = m as f64;
            let nf = n as f64;
            let mut z = C64::new(-0.5 * params.mu * (mf + nf), -params.omega * (mf - nf))
                * rho[(m, n)];
            if m + 1 < d && n + 1 < d {
                z += params.mu * ((mf + 1.0) * (nf + 1.0)).sqrt() * rho[(m + 1, n + 1)];
            }
            out[(m, n)] = z;
        }
    }
    out
}

/// One RK4 step of the master equation. The generator is exactly
/// trace-free on the truncated space, so the trace is preserved to
/// rounding per step.
pub fn lindblad_step(rho: &DensityMatrix, dt: f64, params: &ModelParams) -> Result<DensityMatrix, Error> {
    let k1 = lindblad_rhs(&rho.m, params);
    let k2 = lindblad_rhs(&rho.m.add(&k1.scale(C64::new(0.5 * dt, 0.0))), params);
    let k3 = lindblad_rhs(&rho.m.add(&k2.scale(C64::new(0.5 * dt, 0.0))), params);
    let k4 = lindblad_rhs(&rho.m.add(&k3.scale(C64::new(dt, 0.0))), params);
    let incr = k1
        .add(&k2.scale(C64::new(2.0, 0.0)))
        .add(&k3.scale(C64::new(2.0, 0.0)))
        .add(&k4)
        .scale(C64::new(dt / 6.0, 0.0));
    let m = rho.m.add(&incr);
    if !m.is_finite() {
        return Err(Error::NumericalGuard {
            what: "master equation state became non-finite",
            step: 0,
        });
    }
    Ok(DensityMatrix { m })
}

/// Integrate the master equation to `t_max` with step `dt`, validating
/// trace, Hermiticity, and positivity (eigenvalue floor 1e-6) at roughly
/// sixteen points along the way.
pub fn lindblad_evolve(
    rho0: &DensityMatrix,
    t_max: f64,
    dt: f64,
    params: &ModelParams,
) -> Result<DensityMatrix, Error> {
    let steps = (t_max / dt).round() as usize;
    let check_every = (steps / 16).max(1);
    let mut rho = rho0.clone();
    for k in 0..steps {
        rho = lindblad_step(&rho, dt, params).map_err(|e| match e {
            Error::NumericalGuard { what, .. } => Error::NumericalGuard { what, step: k },
            other => other,
        })?;
        if (k + 1) % check_every == 0 {
            if (rho.trace() - 1.0).abs() > 1e-8 {
                return Err(Error::InvariantViolation {
                    what: "master equation trace drifted",
                    t: (k + 1) as f64 * dt,
                });
            }
            let min_eig = hermitian_eigenvalues(&rho.m)[0];
            if min_eig < -1e-6 {
                return Err(Error::InvariantViolation {
                    what: "master equation lost positivity",
                    t: (k + 1) as f64 * dt,
                });
            }
        }
    }
    Ok(rho)
}

/// Result of projecting a state back onto the squeezed coherent family.
#[derive(Clone, Copy, Debug)]
pub struct SqueezedCoherentFit {
    pub xi: SqueezeParam,
    pub alpha: C64,
    /// Overlap `|<xi, alpha | psi/|psi|>|^2` with the fitted member.
    pub fidelity: f64,
    /// False when the first and second moments are inconsistent with any
    /// family member (the fit is then best-effort).
    pub gaussian: bool,
}

/// Estimate `(xi, alpha)` from first and centered second moments and
/// report the overlap. For a family member, `<a^2> - <a>^2 =
/// -Gamma_1 Gamma_2` and `<n> - |<a>|^2 = |Gamma_2|^2` determine the
/// squeeze, and `alpha = Gamma_1 <a> + Gamma_2 conj(<a>)`.
pub fn fit_squeezed_coherent(psi: &FockVector) -> Result<SqueezedCoherentFit, Error> {
    let n2 = psi.norm_sqr();
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let amps = psi.amplitudes();
    let d = amps.len();
    let mut ea = C64::new(0.0, 0.0);
    let mut ea2 = C64::new(0.0, 0.0);
    let mut en = 0.0;
    for n in 0..d {
        let nf = n as f64;
        en += nf * amps[n].norm_sqr();
        if n + 1 < d {
            ea += amps[n].conj() * amps[n + 1] * (nf + 1.0).sqrt();
        }
        if n + 2 < d {
            ea2 += amps[n].conj() * amps[n + 2] * ((nf + 1.0) * (nf + 2.0)).sqrt();
        }
    }
    ea /= n2;
    ea2 /= n2;
    en /= n2;

    let m2 = ea2 - ea * ea; // -Gamma_1 Gamma_2 for a family member
    let nc = en - ea.norm_sqr(); // sinh^2(rho) for a family member
    let nc_pos = nc.max(0.0);
    let rho = nc_pos.sqrt().asinh();
    let theta = if m2.norm() < 1e-12 { 0.0 } else { (-m2).arg() };
    // consistency of the two squeeze estimates
    let expected_m2 = (nc_pos * (nc_pos + 1.0)).sqrt();
    let gaussian = nc > -1e-9 && (m2.norm() - expected_m2).abs() <= 1e-3 * (1.0 + nc_pos);

    let xi = SqueezeParam::new(rho, theta)?;
    let g = gamma_from_squeeze(&xi);
    let alpha = g.gamma1() * ea + g.gamma2() * ea.conj();

    let target = build_squeezed_coherent(&xi, alpha, psi.cutoff())?;
    let overlap = target.normalized()?.inner(&psi.normalized()?);
    Ok(SqueezedCoherentFit {
        xi,
        alpha,
        fidelity: overlap.norm_sqr(),
        gaussian,
    })
}

/// Truncation-adequacy gate: run the same filtered trajectory at
/// `cutoff` and `2 * cutoff` and return the largest difference in any
/// reported observable (means, spreads, squared norm) over
/// `checkpoints` evenly spaced grid points.
pub fn cutoff_gate(
    path: &NoisePath,
    params: &ModelParams,
    xi0: &SqueezeParam,
    alpha0: C64,
    cutoff: usize,
    checkpoints: usize,
) -> Result<f64, Error> {
    let every = (path.grid().n_steps() / checkpoints.max(1)).max(1);
    let run = |c: usize| -> Result<Vec<(f64, QuadratureMoments)>, Error> {
        let psi0 = build_squeezed_coherent(xi0, alpha0, c)?;
        let states = run_filtering(path, params, &psi0, every)?;
        states
            .into_iter()
            .map(|(_, psi)| Ok((psi.norm_sqr(), posterior_moments(&psi)?)))
            .collect()
    };
    let coarse = run(cutoff)?;
    let fine = run(2 * cutoff)?;
    let mut worst: f64 = 0.0;
    for ((n1, m1), (n2, m2)) in coarse.iter().zip(&fine) {
        worst = worst.max((n1 - n2).abs());
        worst = worst.max((m1.mean_x - m2.mean_x).abs());
        worst = worst.max((m1.mean_y - m2.mean_y).abs());
        worst = worst.max((m1.dx - m2.dx).abs());
        worst = worst.max((m1.dy - m2.dy).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests;
