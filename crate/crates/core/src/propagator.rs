//! Discrete nonlocal Schrödinger propagator.
//!
//! The Hamiltonian is `H = σ₁·A + σ₂·B` where `A` is the Dirichlet lattice
//! Laplacian and `B` the auditory spreading potential. The time-one map
//! `exp(iH)` is evaluated through a symmetric eigendecomposition so that it
//! stays unitary to eigensolver precision.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::auditory::SpreadingMatrix;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::matrix::{ComplexMatrix, RealMatrix};

/// Relative reconstruction bound on the eigendecomposition of `H`.
pub const EIGEN_RECONSTRUCTION_TOL: f64 = 1e-10;
/// Unitarity tolerance accepted by [`spreading_metric`].
pub const METRIC_UNITARITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropagatorConfig {
    /// Laplacian weight.
    pub sigma1: f64,
    /// Potential weight.
    pub sigma2: f64,
}

impl PropagatorConfig {
    /// Default operating point.
    pub const DEFAULT: PropagatorConfig = PropagatorConfig {
        sigma1: 0.6,
        sigma2: 0.04,
    };

    pub fn new(sigma1: f64, sigma2: f64) -> Result<Self> {
        let cfg = PropagatorConfig { sigma1, sigma2 };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Both weights must be finite and nonnegative. Zero weights are
    /// accepted so the identity transform can be expressed.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sigma1", self.sigma1), ("sigma2", self.sigma2)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::domain(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for PropagatorConfig {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Which exponential the time-one map uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentSign {
    /// exp(+iH)
    #[default]
    Positive,
    /// exp(-iH), the flow of i·u_t = H·u at t = 1.
    Negative,
}

impl ExponentSign {
    fn factor(self) -> f64 {
        match self {
            ExponentSign::Positive => 1.0,
            ExponentSign::Negative => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ExponentSign::Positive => "exp(+iH)",
            ExponentSign::Negative => "exp(-iH)",
        }
    }
}

/// Tridiagonal Dirichlet Laplacian: -2 on the diagonal, 1 beside it.
pub fn build_laplacian(order: usize) -> Result<RealMatrix> {
    if order < 1 {
        return Err(Error::domain("laplacian order must be at least 1"));
    }
    Ok(RealMatrix::from_fn(order, order, |i, j| {
        if i == j {
            -2.0
        } else if i.abs_diff(j) == 1 {
            1.0
        } else {
            0.0
        }
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    entries: RealMatrix,
}

impl Hamiltonian {
    /// Wraps an arbitrary real symmetric matrix. Asymmetry above
    /// `1e-12 · max|H|` is rejected.
    pub fn from_symmetric(entries: RealMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Dimension {
                expected: entries.rows(),
                actual: entries.cols(),
                context: "hamiltonian must be square",
            });
        }
        if entries.asymmetry() > 1e-12 * entries.max_abs() {
            return Err(Error::domain("hamiltonian is not symmetric"));
        }
        Ok(Hamiltonian { entries })
    }

    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }
}

/// H = σ₁·A + σ₂·B.
pub fn build_hamiltonian(
    cfg: &PropagatorConfig,
    laplacian: &RealMatrix,
    potential: &SpreadingMatrix,
) -> Result<Hamiltonian> {
    cfg.validate()?;
    let b = potential.entries();
    if laplacian.rows() != b.rows() || !laplacian.is_square() {
        return Err(Error::Dimension {
            expected: b.rows(),
            actual: laplacian.rows(),
            context: "laplacian and spreading matrix orders differ",
        });
    }
    let n = b.rows();
    let entries = RealMatrix::from_fn(n, n, |i, j| {
        cfg.sigma1 * laplacian[(i, j)] + cfg.sigma2 * b[(i, j)]
    });
    Ok(Hamiltonian { entries })
}

/// Complex unitary N_h×N_h matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMap {
    entries: ComplexMatrix,
}

impl UnitaryMap {
    pub fn identity(order: usize) -> Self {
        UnitaryMap {
            entries: ComplexMatrix::identity(order),
        }
    }

    /// Accepts `m` if its unitarity defect is at most `tol`.
    pub fn from_matrix(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension {
                expected: m.rows(),
                actual: m.cols(),
                context: "unitary map must be square",
            });
        }
        let defect = m.unitarity_defect();
        if defect > tol {
            return Err(Error::domain(format!(
                "matrix is not unitary: max|T·T† - I| = {defect:e} > {tol:e}"
            )));
        }
        Ok(UnitaryMap { entries: m })
    }

    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.entries.unitarity_defect()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.entries.mul_vec(v)
    }
}

/// exp(+iH) through H = Q·diag(λ)·Qᵀ.
pub fn time_one_map(h: &Hamiltonian) -> Result<UnitaryMap> {
    time_one_map_with_sign(h, ExponentSign::Positive)
}

pub fn time_one_map_with_sign(h: &Hamiltonian, sign: ExponentSign) -> Result<UnitaryMap> {
    let eig = symmetric_eigen(h.entries())?;
    let n = h.order();

    let scale = h.entries().max_abs();
    let recon = eig.reconstruct();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((recon[(i, j)] - h.entries()[(i, j)]).abs());
        }
    }
    if worst > EIGEN_RECONSTRUCTION_TOL * scale {
        return Err(Error::Numerical(format!(
            "eigendecomposition residual {worst:e} exceeds {EIGEN_RECONSTRUCTION_TOL:e}·{scale:e}"
        )));
    }

    let phases: Vec<Complex64> = eig
        .values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, sign.factor() * l))
        .collect();
    let q = &eig.vectors;
    // Accumulate row by row: T[i][j] = Σ_k Q[i][k]·e^{±iλ_k}·Q[j][k].
    let mut scaled = vec![Complex64::new(0.0, 0.0); n];
    let mut t = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for (k, s) in scaled.iter_mut().enumerate() {
            *s = phases[k] * q[(i, k)];
        }
        for j in 0..n {
            let qj = q.row(j);
            t[(i, j)] = scaled.iter().zip(qj).map(|(&s, &x)| s * x).sum();
        }
    }
    Ok(UnitaryMap { entries: t })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(pub Vec<Complex64>);

impl StateVector {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Integrates `u_t = +i·H·u` with classical fourth-order Runge–Kutta, so the
/// state at `t = 1` matches `time_one_map(H)·u0`.
pub fn evolve_ode(h: &Hamiltonian, u0: &StateVector, t: f64, dt: f64) -> Result<StateVector> {
    evolve_ode_observed(h, u0, t, dt, |_, _| {})
}

/// Like [`evolve_ode`], calling `observe(step, state)` after every step.
pub fn evolve_ode_observed(
    h: &Hamiltonian,
    u0: &StateVector,
    t: f64,
    dt: f64,
    mut observe: impl FnMut(usize, &StateVector),
) -> Result<StateVector> {
    if !(dt > 0.0 && dt.is_finite()) || !(t >= 0.0 && t.is_finite()) {
        return Err(Error::domain(format!(
            "need dt > 0 and t >= 0, got dt={dt}, t={t}"
        )));
    }
    if dt >= t {
        return Err(Error::domain(format!(
            "step {dt} must be smaller than horizon {t}"
        )));
    }
    if u0.0.len() != h.order() {
        return Err(Error::Dimension {
            expected: h.order(),
            actual: u0.0.len(),
            context: "initial state length",
        });
    }
    if u0.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::domain("initial state has non-finite entries"));
    }

    let steps = (t / dt - 1e-9).ceil() as usize;
    let step = t / steps as f64;
    let hm = h.entries();
    let i_unit = Complex64::new(0.0, 1.0);
    let rhs = |u: &[Complex64]| -> Vec<Complex64> {
        (0..hm.rows())
            .map(|r| {
                i_unit
                    * hm.row(r)
                        .iter()
                        .zip(u)
                        .map(|(&a, &b)| b * a)
                        .sum::<Complex64>()
            })
            .collect()
    };
    let axpy = |u: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
        u.iter().zip(k).map(|(&a, &b)| a + b * c).collect()
    };

    let mut u = u0.clone();
    for s in 0..steps {
        let k1 = rhs(&u.0);
        let k2 = rhs(&axpy(&u.0, &k1, 0.5 * step));
        let k3 = rhs(&axpy(&u.0, &k2, 0.5 * step));
        let k4 = rhs(&axpy(&u.0, &k3, step));
        for (idx, x) in u.0.iter_mut().enumerate() {
            *x += (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]) * (step / 6.0);
        }
        observe(s + 1, &u);
    }
    Ok(u)
}

/// Mean column participation ratio 1/Σ_j |T[j][k]|⁴ of any matrix with
/// unit-norm columns. No unitarity check.
pub fn participation_ratio(m: &ComplexMatrix) -> f64 {
    let cols = m.cols();
    if cols == 0 {
        return 1.0;
    }
    let mut fourth = vec![0.0f64; cols];
    for i in 0..m.rows() {
        for (k, z) in m.row(i).iter().enumerate() {
            let p = z.norm_sqr();
            fourth[k] += p * p;
        }
    }
    fourth.iter().map(|s| 1.0 / s).sum::<f64>() / cols as f64
}

/// Spreading diagnostic: 1 for a phased permutation, larger as columns
/// disperse across bins.
pub fn spreading_metric(t: &UnitaryMap) -> Result<f64> {
    let defect = t.unitarity_defect();
    if defect > METRIC_UNITARITY_TOL {
        return Err(Error::domain(format!(
            "spreading metric needs a unitary input, defect {defect:e}"
        )));
    }
    Ok(participation_ratio(t.entries()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::auditory::{build_spreading_matrix, BinGrid};
    use proptest::prelude::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// Scaling-and-squaring Taylor oracle for exp(M), small orders only.
    fn expm_taylor(m: &ComplexMatrix) -> ComplexMatrix {
        let n = m.rows();
        let norm = m.as_slice().iter().map(|z| z.norm()).sum::<f64>();
        let mut s = 0;
        while norm / 2f64.powi(s) > 0.25 {
            s += 1;
        }
        let scaled = m.map(|z| z / 2f64.powi(s));
        let mut result = ComplexMatrix::identity(n);
        let mut term = ComplexMatrix::identity(n);
        for k in 1..30 {
            term = term.matmul(&scaled).map(|z| z / k as f64);
            result = ComplexMatrix::from_fn(n, n, |i, j| result[(i, j)] + term[(i, j)]);
        }
        for _ in 0..s {
            result = result.matmul(&result);
        }
        result
    }

    fn random_hamiltonian(n: usize, seed: u64) -> Hamiltonian {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.random_range(-1.0..1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        Hamiltonian::from_symmetric(a).unwrap()
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        StateVector(
            (0..n)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect(),
        )
    }

    #[test]
    fn laplacian_shapes() {
        assert_eq!(
            build_laplacian(1).unwrap(),
            RealMatrix::from_row_major(1, 1, vec![-2.0])
        );
        assert_eq!(
            build_laplacian(3).unwrap(),
            RealMatrix::from_row_major(3, 3, vec![-2.0, 1.0, 0.0, 1.0, -2.0, 1.0, 0.0, 1.0, -2.0])
        );
        assert!(build_laplacian(0).is_err());
    }

    #[test]
    fn laplacian_spectrum_matches_closed_form() {
        let n = 8;
        let eig = symmetric_eigen(&build_laplacian(n).unwrap()).unwrap();
        let mut want: Vec<f64> = (1..=n)
            .map(|k| -2.0 + 2.0 * (k as f64 * PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(f64::total_cmp);
        for (got, want) in eig.values.iter().zip(&want) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn hamiltonian_without_potential_is_scaled_laplacian() {
        let grid = BinGrid::new(16000.0, 32).unwrap();
        let b = build_spreading_matrix(&grid);
        let a = build_laplacian(grid.order()).unwrap();
        let cfg = PropagatorConfig::new(0.6, 0.0).unwrap();
        let h = build_hamiltonian(&cfg, &a, &b).unwrap();
        assert_eq!(h.entries(), &a.map(|x| 0.6 * x));
        assert!(build_hamiltonian(&cfg, &build_laplacian(3).unwrap(), &b).is_err());
    }

    #[test]
    fn config_rejects_negative_weights() {
        assert!(PropagatorConfig::new(-0.1, 0.0).is_err());
        assert!(PropagatorConfig::new(0.1, f64::NAN).is_err());
        assert!(PropagatorConfig::new(0.0, 0.0).is_ok());
    }

    #[test]
    fn zero_hamiltonian_gives_identity() {
        let h = Hamiltonian::from_symmetric(RealMatrix::zeros(5, 5)).unwrap();
        let t = time_one_map(&h).unwrap();
        assert_eq!(t.entries().max_abs_diff(&ComplexMatrix::identity(5)), 0.0);
    }

    #[test]
    fn free_propagator_matches_sine_basis_and_taylor_oracle() {
        let n = 8;
        let sigma1 = 0.6;
        let a = build_laplacian(n).unwrap();
        let h = Hamiltonian::from_symmetric(a.map(|x| sigma1 * x)).unwrap();
        let t = time_one_map(&h).unwrap();

        let norm = (2.0 / (n as f64 + 1.0)).sqrt();
        let phi = |m: usize, j: usize| norm * ((j * m) as f64 * PI / (n as f64 + 1.0)).sin();
        let closed = ComplexMatrix::from_fn(n, n, |j, k| {
            (1..=n)
                .map(|m| {
                    let lambda = -2.0 + 2.0 * (m as f64 * PI / (n as f64 + 1.0)).cos();
                    Complex64::from_polar(phi(m, j + 1) * phi(m, k + 1), sigma1 * lambda)
                })
                .sum()
        });
        assert!(t.entries().max_abs_diff(&closed) < 1e-12);

        let generator = h.entries().map(|x| Complex64::new(0.0, x));
        assert!(t.entries().max_abs_diff(&expm_taylor(&generator)) < 1e-12);
    }

    #[test]
    fn negative_sign_is_conjugate() {
        let h = random_hamiltonian(6, 3);
        let plus = time_one_map_with_sign(&h, ExponentSign::Positive).unwrap();
        let minus = time_one_map_with_sign(&h, ExponentSign::Negative).unwrap();
        assert!(plus.entries().conj().max_abs_diff(minus.entries()) < 1e-14);
    }

    #[test]
    fn ode_oracle_agrees_with_time_one_map() {
        for (n, seed) in [(1, 10), (4, 11), (9, 12)] {
            let h = random_hamiltonian(n, seed);
            let u0 = random_state(n, seed + 100);
            let t = time_one_map(&h).unwrap();
            let direct = t.apply(&u0.0);
            let ode = evolve_ode(&h, &u0, 1.0, 1e-3).unwrap();
            let diff = direct
                .iter()
                .zip(&ode.0)
                .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
            assert!(diff < 1e-9, "n={n}: {diff:e}");
        }
    }

    #[test]
    fn ode_conserves_norm_and_handles_zero_hamiltonian() {
        let h = random_hamiltonian(5, 21);
        let u0 = random_state(5, 22);
        let n0 = u0.norm();
        let mut worst = 0.0f64;
        evolve_ode_observed(&h, &u0, 1.0, 1e-3, |_, u| {
            worst = worst.max((u.norm() - n0).abs())
        })
        .unwrap();
        assert!(worst < 1e-8, "{worst:e}");

        let zero = Hamiltonian::from_symmetric(RealMatrix::zeros(5, 5)).unwrap();
        assert_eq!(evolve_ode(&zero, &u0, 0.5, 0.1).unwrap(), u0);
    }

    #[test]
    fn ode_rejects_bad_steps() {
        let h = random_hamiltonian(2, 1);
        let u0 = random_state(2, 2);
        assert!(evolve_ode(&h, &u0, 1.0, 1.0).is_err());
        assert!(evolve_ode(&h, &u0, 1.0, 0.0).is_err());
        assert!(evolve_ode(&h, &StateVector(vec![]), 1.0, 0.1).is_err());
    }

    #[test]
    fn metric_identity_and_invariances() {
        assert_eq!(spreading_metric(&UnitaryMap::identity(7)).unwrap(), 1.0);

        let h = random_hamiltonian(6, 5);
        let t = time_one_map(&h).unwrap();
        let base = spreading_metric(&t).unwrap();
        let perm = [3, 0, 5, 1, 4, 2];
        let permuted = ComplexMatrix::from_fn(6, 6, |i, j| t.entries()[(i, perm[j])]);
        let phased = ComplexMatrix::from_fn(6, 6, |i, j| {
            t.entries()[(i, j)] * Complex64::from_polar(1.0, 0.37 * (i * 7 + j) as f64)
        });
        assert!((participation_ratio(&permuted) - base).abs() < 1e-12);
        assert!((participation_ratio(&phased) - base).abs() < 1e-12);

        let not_unitary = ComplexMatrix::from_fn(3, 3, |_, _| Complex64::new(1.0, 0.0));
        assert!(UnitaryMap::from_matrix(not_unitary, 1e-8).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn time_one_map_is_unitary(n in 1usize..24, seed in any::<u64>()) {
            let t = time_one_map(&random_hamiltonian(n, seed)).unwrap();
            prop_assert!(t.unitarity_defect() <= 1e-10);
        }

        #[test]
        fn hamiltonian_is_symmetric(s1 in 0.0f64..2.0, s2 in 0.0f64..1.0, half in 4usize..40) {
            let grid = BinGrid::new(16000.0, 2 * half).unwrap();
            let b = build_spreading_matrix(&grid);
            let a = build_laplacian(grid.order()).unwrap();
            let h = build_hamiltonian(&PropagatorConfig::new(s1, s2).unwrap(), &a, &b).unwrap();
            prop_assert!(h.entries().asymmetry() <= 1e-14);
        }
    }
}
