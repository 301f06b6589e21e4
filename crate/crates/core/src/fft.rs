//! Unnormalized discrete Fourier transform.
//!
//! Power-of-two lengths go through an iterative radix-2 Cooley–Tukey FFT;
//! every other length falls back to the direct O(N²) sum. Both use the
//! `e^{-2πi nk/N}` kernel and no scaling on the forward side.

use std::f64::consts::PI;

use num_complex::Complex64;

fn twiddle(k: usize, n: usize) -> Complex64 {
    // Reduce first so large k·n products keep full angle precision.
    let angle = -2.0 * PI * (k % n) as f64 / n as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// Direct summation, O(N²). Reference path and fallback.
pub fn dft_direct(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    (0..n)
        .map(|k| {
            input
                .iter()
                .enumerate()
                .map(|(j, &x)| x * twiddle(j * k, n))
                .sum()
        })
        .collect()
}

/// In-place radix-2 FFT. Panics unless the length is a power of two.
pub fn fft_in_place(data: &mut [Complex64]) {
    let n = data.len();
    assert!(
        n.is_power_of_two(),
        "radix-2 FFT needs a power-of-two length, got {n}"
    );
    if n <= 1 {
        return;
    }

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }

    let table: Vec<Complex64> = (0..n / 2).map(|k| twiddle(k, n)).collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = table[k * stride];
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Forward transform choosing the fast path when possible.
pub fn transform(input: &[Complex64]) -> Vec<Complex64> {
    if input.len().is_power_of_two() {
        let mut out = input.to_vec();
        fft_in_place(&mut out);
        out
    } else {
        dft_direct(input)
    }
}

/// Inverse with 1/N scaling, via conjugation of the forward transform.
pub fn inverse_transform(input: &[Complex64]) -> Vec<Complex64> {
    let n = input.len();
    let conj: Vec<Complex64> = input.iter().map(|z| z.conj()).collect();
    transform(&conj)
        .into_iter()
        .map(|z| z.conj() / n as f64)
        .collect()
}
