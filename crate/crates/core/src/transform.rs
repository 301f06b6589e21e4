//! Frames, spectra, and the orthogonal auditory transform `S = X·DFT(s)`.
//!
//! `X` is block diagonal over DFT bin indices:
//!
//! ```text
//! index 0            -> 1
//! indices 1..N/2-1   -> T_w
//! index N/2          -> 1
//! indices N/2+1..N-1 -> J·conj(T_w)·J     (J = order reversal)
//! ```
//!
//! The lower block mirrors the upper one so that conjugate-symmetric
//! spectra stay conjugate-symmetric and real frames invert to real frames.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::auditory::{build_spreading_matrix, BinGrid, SpreadingMatrix};
use crate::error::{Error, Result};
use crate::fft;
use crate::matrix::ComplexMatrix;
use crate::propagator::{
    build_hamiltonian, build_laplacian, time_one_map_with_sign, ExponentSign, PropagatorConfig,
    UnitaryMap,
};

/// Imaginary residue (relative to output norm) above which an inverse
/// transform is rejected as non-conjugate-symmetric.
pub const SYMMETRY_LIMIT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Frame(Vec<f64>);

impl Frame {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if let Some(i) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::domain(format!("frame sample {i} is not finite")));
        }
        Ok(Frame(samples))
    }

    pub fn zeros(n: usize) -> Self {
        Frame(vec![0.0; n])
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Dft,
    Odat,
}

impl Domain {
    pub fn label(self) -> &'static str {
        match self {
            Domain::Dft => "dft",
            Domain::Odat => "odat",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub bins: Vec<Complex64>,
    pub domain: Domain,
}

impl Spectrum {
    pub fn new(bins: Vec<Complex64>, domain: Domain) -> Self {
        Spectrum { bins, domain }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.bins.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.bins.iter().map(|z| z.norm()).collect()
    }

    /// Worst violation of `S[N-k] = conj(S[k])`, including the imaginary
    /// parts of bins 0 and N/2, relative to the largest bin magnitude.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.bins.len();
        let scale = self.bins.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if n == 0 || scale == 0.0 {
            return 0.0;
        }
        let mut worst = self.bins[0].im.abs();
        if n.is_multiple_of(2) {
            worst = worst.max(self.bins[n / 2].im.abs());
        }
        for k in 1..n.div_ceil(2) {
            worst = worst.max((self.bins[n - k] - self.bins[k].conj()).norm());
        }
        worst / scale
    }
}

fn require_even(n: usize) -> Result<()> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::domain(format!(
            "transform length must be even and nonzero, got {n}"
        )));
    }
    Ok(())
}

/// ŝ_k = Σ_n s_n e^{-2πi nk/N}, unnormalized.
pub fn dft(frame: &Frame) -> Result<Spectrum> {
    require_even(frame.len())?;
    let input: Vec<Complex64> = frame
        .samples()
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    Ok(Spectrum::new(fft::transform(&input), Domain::Dft))
}

/// Inverse DFT with 1/N scaling. Returns the real frame and the discarded
/// imaginary residue, measured as ‖Im‖/‖output‖.
pub fn idft_with_residue(spec: &Spectrum) -> Result<(Frame, f64)> {
    require_even(spec.len())?;
    let out = fft::inverse_transform(&spec.bins);
    let total: f64 = out.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let imag: f64 = out.iter().map(|z| z.im * z.im).sum::<f64>().sqrt();
    let residue = if total > 0.0 { imag / total } else { 0.0 };
    if residue > SYMMETRY_LIMIT {
        return Err(Error::SymmetryViolation {
            residue,
            limit: SYMMETRY_LIMIT,
        });
    }
    Ok((Frame(out.into_iter().map(|z| z.re).collect()), residue))
}

pub fn idft(spec: &Spectrum) -> Result<Frame> {
    idft_with_residue(spec).map(|(f, _)| f)
}

/// Builds the full N×N block-diagonal unitary `X` around `tw`.
pub fn assemble_x(tw: &UnitaryMap, n: usize) -> Result<ComplexMatrix> {
    require_even(n)?;
    let order = n / 2 - 1;
    if tw.order() != order {
        return Err(Error::Dimension {
            expected: order,
            actual: tw.order(),
            context: "T_w order must be N/2 - 1",
        });
    }
    let t = tw.entries();
    let half = n / 2;
    let mut x = ComplexMatrix::zeros(n, n);
    x[(0, 0)] = Complex64::new(1.0, 0.0);
    x[(half, half)] = Complex64::new(1.0, 0.0);
    for i in 0..order {
        for j in 0..order {
            x[(1 + i, 1 + j)] = t[(i, j)];
            x[(half + 1 + i, half + 1 + j)] = t[(order - 1 - i, order - 1 - j)].conj();
        }
    }
    Ok(x)
}

/// Everything needed to run the transform at one operating point.
/// Built once; immutable and shareable across threads.
#[derive(Clone, Debug)]
pub struct TransformPlan {
    n: usize,
    fs: f64,
    cfg: PropagatorConfig,
    sign: ExponentSign,
    potential: SpreadingMatrix,
    tw: UnitaryMap,
    x: ComplexMatrix,
}

impl TransformPlan {
    pub fn new(n: usize, fs: f64, cfg: PropagatorConfig) -> Result<Self> {
        Self::with_sign(n, fs, cfg, ExponentSign::default())
    }

    pub fn with_sign(n: usize, fs: f64, cfg: PropagatorConfig, sign: ExponentSign) -> Result<Self> {
        cfg.validate()?;
        let grid = BinGrid::new(fs, n)?;
        let potential = build_spreading_matrix(&grid);
        let laplacian = build_laplacian(grid.order())?;
        let h = build_hamiltonian(&cfg, &laplacian, &potential)?;
        let tw = time_one_map_with_sign(&h, sign)?;
        let x = assemble_x(&tw, n)?;
        Ok(TransformPlan {
            n,
            fs,
            cfg,
            sign,
            potential,
            tw,
            x,
        })
    }

    pub fn frame_len(&self) -> usize {
        self.n
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn config(&self) -> PropagatorConfig {
        self.cfg
    }

    pub fn sign(&self) -> ExponentSign {
        self.sign
    }

    pub fn potential(&self) -> &SpreadingMatrix {
        &self.potential
    }

    pub fn time_one_map(&self) -> &UnitaryMap {
        &self.tw
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    fn check_len(&self, len: usize, context: &'static str) -> Result<()> {
        if len != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: len,
                context,
            });
        }
        Ok(())
    }

    /// X·v using the block structure. With `adjoint`, X†·v.
    fn apply_blocks(&self, v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        let n = self.n;
        let half = n / 2;
        let order = half - 1;
        let t = self.tw.entries();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = v[0];
        out[half] = v[half];
        let upper = &v[1..half];
        let lower = &v[half + 1..];
        for i in 0..order {
            let mut hi = Complex64::new(0.0, 0.0);
            let mut lo = Complex64::new(0.0, 0.0);
            let ri = order - 1 - i;
            for j in 0..order {
                let rj = order - 1 - j;
                if adjoint {
                    // (X†)_upper = T†, (X†)_lower = J·Tᵀ·J
                    hi += t[(j, i)].conj() * upper[j];
                    lo += t[(rj, ri)] * lower[j];
                } else {
                    hi += t[(i, j)] * upper[j];
                    lo += t[(ri, rj)].conj() * lower[j];
                }
            }
            out[1 + i] = hi;
            out[half + 1 + i] = lo;
        }
        out
    }

    /// Maps a DFT spectrum into the auditory domain.
    pub fn apply_x(&self, spec: &Spectrum) -> Result<Spectrum> {
        self.check_len(spec.len(), "spectrum length")?;
        Ok(Spectrum::new(
            self.apply_blocks(&spec.bins, false),
            Domain::Odat,
        ))
    }

    /// Maps an auditory-domain spectrum back to the DFT domain.
    pub fn apply_x_adjoint(&self, spec: &Spectrum) -> Result<Spectrum> {
        self.check_len(spec.len(), "spectrum length")?;
        Ok(Spectrum::new(
            self.apply_blocks(&spec.bins, true),
            Domain::Dft,
        ))
    }
}

/// S = X·DFT(s).
pub fn forward(frame: &Frame, plan: &TransformPlan) -> Result<Spectrum> {
    plan.check_len(frame.len(), "frame length")?;
    plan.apply_x(&dft(frame)?)
}

/// s = IDFT(X†·S).
pub fn inverse(spec: &Spectrum, plan: &TransformPlan) -> Result<Frame> {
    if spec.domain != Domain::Odat {
        return Err(Error::domain("inverse expects an auditory-domain spectrum"));
    }
    idft(&plan.apply_x_adjoint(spec)?)
}

/// K_{l,m} = Σ_n X_{m,n} e^{+2πi ln/N}. Inspection only; the signal path
/// uses the e^{-i} kernel of [`dft`].
pub fn compute_kernel(plan: &TransformPlan, l: usize, m: usize) -> Result<Complex64> {
    kernel_entry(plan.x(), l, m)
}

pub fn kernel_entry(x: &ComplexMatrix, l: usize, m: usize) -> Result<Complex64> {
    let n = x.rows();
    if l >= n || m >= n {
        return Err(Error::domain(format!(
            "kernel index ({l}, {m}) out of range for N = {n}"
        )));
    }
    Ok(x.row(m)
        .iter()
        .enumerate()
        .map(|(j, &xm)| xm * Complex64::from_polar(1.0, 2.0 * PI * ((l * j) % n) as f64 / n as f64))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_frame(n: usize, seed: u64) -> Frame {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Frame::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
    }

    fn default_plan(n: usize) -> TransformPlan {
        TransformPlan::new(n, 16000.0, PropagatorConfig::DEFAULT).unwrap()
    }

    #[test]
    fn dft_of_delta_and_constant() {
        let mut delta = vec![0.0; 8];
        delta[0] = 1.0;
        let s = dft(&Frame::new(delta).unwrap()).unwrap();
        assert!(s.bins.iter().all(|&z| z == Complex64::new(1.0, 0.0)));

        let s = dft(&Frame::new(vec![1.0; 8]).unwrap()).unwrap();
        assert!((s.bins[0] - Complex64::new(8.0, 0.0)).norm() < 1e-14);
        assert!(s.bins[1..].iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn dft_rejects_odd_lengths() {
        assert!(matches!(
            dft(&Frame::new(vec![0.0; 7]).unwrap()),
            Err(Error::Domain(_))
        ));
        assert!(Frame::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn non_power_of_two_uses_direct_path() {
        let f = random_frame(12, 4);
        let s = dft(&f).unwrap();
        let back = idft(&s).unwrap();
        for (a, b) in back.samples().iter().zip(f.samples()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn idft_of_flat_spectrum_is_delta() {
        let s = Spectrum::new(vec![Complex64::new(1.0, 0.0); 8], Domain::Dft);
        let f = idft(&s).unwrap();
        assert!((f.samples()[0] - 1.0).abs() < 1e-15);
        assert!(f.samples()[1..].iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn idft_rejects_non_hermitian_input() {
        let mut bins = vec![Complex64::new(0.0, 0.0); 8];
        bins[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(
            idft(&Spectrum::new(bins, Domain::Dft)),
            Err(Error::SymmetryViolation { .. })
        ));
    }

    #[test]
    fn assemble_identity_and_dimension_checks() {
        let x = assemble_x(&UnitaryMap::identity(7), 16).unwrap();
        assert_eq!(x, ComplexMatrix::identity(16));
        assert!(assemble_x(&UnitaryMap::identity(6), 16).is_err());
    }

    #[test]
    fn x_fixes_dc_and_nyquist_and_is_unitary() {
        let plan = default_plan(16);
        let x = plan.x();
        for k in [0, 8] {
            for j in 0..16 {
                let want = if j == k { 1.0 } else { 0.0 };
                assert_eq!(x[(j, k)], Complex64::new(want, 0.0));
                assert_eq!(x[(k, j)], Complex64::new(want, 0.0));
            }
        }
        assert!(x.unitarity_defect() < 1e-12);
    }

    #[test]
    fn block_application_matches_full_matrix() {
        let plan = default_plan(16);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let v: Vec<Complex64> = (0..16)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let spec = Spectrum::new(v.clone(), Domain::Dft);
        let blocks = plan.apply_x(&spec).unwrap();
        let full = plan.x().mul_vec(&v);
        for (a, b) in blocks.bins.iter().zip(&full) {
            assert!((a - b).norm() < 1e-14);
        }
        let adj = plan.apply_x_adjoint(&spec).unwrap();
        let full_adj = plan.x().adjoint().mul_vec(&v);
        for (a, b) in adj.bins.iter().zip(&full_adj) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn zero_weights_reduce_to_dft() {
        let plan =
            TransformPlan::new(32, 16000.0, PropagatorConfig::new(0.0, 0.0).unwrap()).unwrap();
        let f = random_frame(32, 2);
        assert_eq!(forward(&f, &plan).unwrap().bins, dft(&f).unwrap().bins);
    }

    #[test]
    fn forward_preserves_energy_and_rejects_wrong_length() {
        let plan = default_plan(64);
        let f = random_frame(64, 3);
        let s = forward(&f, &plan).unwrap();
        let e = dft(&f).unwrap().energy();
        assert!((s.energy() - e).abs() <= 1e-10 * e);
        assert!(matches!(
            forward(&random_frame(32, 1), &plan),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn inverse_of_zero_is_zero_and_requires_odat_domain() {
        let plan = default_plan(16);
        let zero = Spectrum::new(vec![Complex64::new(0.0, 0.0); 16], Domain::Odat);
        assert_eq!(inverse(&zero, &plan).unwrap(), Frame::zeros(16));
        let wrong = Spectrum::new(zero.bins.clone(), Domain::Dft);
        assert!(inverse(&wrong, &plan).is_err());
    }

    #[test]
    fn kernel_identity_and_parseval() {
        let n = 8;
        let id = ComplexMatrix::identity(n);
        for l in 0..n {
            for m in 0..n {
                let want = Complex64::from_polar(1.0, 2.0 * PI * (l * m) as f64 / n as f64);
                assert!((kernel_entry(&id, l, m).unwrap() - want).norm() < 1e-14);
            }
        }

        let plan = default_plan(n);
        for m in 0..n {
            let total: f64 = (0..n)
                .map(|l| compute_kernel(&plan, l, m).unwrap().norm_sqr())
                .sum();
            assert!((total - n as f64).abs() < 1e-12);
            // direct double sum, no index reduction
            for l in 0..n {
                let direct: Complex64 = (0..n)
                    .map(|j| {
                        plan.x()[(m, j)]
                            * Complex64::from_polar(1.0, 2.0 * PI * (l * j) as f64 / n as f64)
                    })
                    .sum();
                assert!((compute_kernel(&plan, l, m).unwrap() - direct).norm() < 1e-12);
            }
        }
        assert!(compute_kernel(&plan, n, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn idft_inverts_dft(seed in any::<u64>(), big in any::<bool>()) {
            let n = if big { 256 } else { 8 };
            let f = random_frame(n, seed);
            let back = idft(&dft(&f).unwrap()).unwrap();
            let scale = f.energy().sqrt();
            for (a, b) in back.samples().iter().zip(f.samples()) {
                prop_assert!((a - b).abs() <= 1e-10 * scale.max(1.0));
            }
        }

        #[test]
        fn x_preserves_conjugate_symmetry(seed in any::<u64>()) {
            let plan = default_plan(16);
            let f = random_frame(16, seed);
            let s = plan.apply_x(&dft(&f).unwrap()).unwrap();
            prop_assert!(s.hermitian_defect() <= 1e-10);
        }

        #[test]
        fn roundtrip_through_auditory_domain(seed in any::<u64>()) {
            let plan = default_plan(64);
            let f = random_frame(64, seed);
            let back = inverse(&forward(&f, &plan).unwrap(), &plan).unwrap();
            for (a, b) in back.samples().iter().zip(f.samples()) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }
    }
}
