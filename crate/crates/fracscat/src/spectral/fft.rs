//! Unitary d-dimensional FFT on row-major arrays, axis by axis. Plans are
//! cached in a shared planner; lanes are gathered into a scratch buffer since
//! the transform library wants contiguous data.

use std::sync::Mutex;

use num_complex::Complex64;
use rustfft::FftPlanner;

static PLANNER: Mutex<Option<FftPlanner<f64>>> = Mutex::new(None);

fn plan(len: usize, inverse: bool) -> std::sync::Arc<dyn rustfft::Fft<f64>> {
    let mut guard = PLANNER.lock().unwrap();
    let planner = guard.get_or_insert_with(FftPlanner::new);
    if inverse {
        planner.plan_fft_inverse(len)
    } else {
        planner.plan_fft_forward(len)
    }
}

/// In-place unitary FFT over a row-major array with the given axis lengths.
pub(crate) fn fftnd(dims: &[usize], data: &mut [Complex64], inverse: bool) {
    let total: usize = dims.iter().product();
    assert_eq!(data.len(), total, "array length does not match dims");
    let mut scratch = Vec::new();
    // row-major: stride of axis a is the product of the lengths after it
    let mut stride_after = vec![1usize; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        stride_after[a] = stride_after[a + 1] * dims[a + 1];
    }
    for (a, &len) in dims.iter().enumerate() {
        let fft = plan(len, inverse);
        scratch.resize(len, Complex64::ZERO);
        let stride = stride_after[a];
        let block = stride * len;
        let n_blocks = total / block;
        for b in 0..n_blocks {
            for off in 0..stride {
                let base = b * block + off;
                for i in 0..len {
                    scratch[i] = data[base + i * stride];
                }
                fft.process(&mut scratch);
                for i in 0..len {
                    data[base + i * stride] = scratch[i];
                }
            }
        }
    }
    let scale = 1.0 / (total as f64).sqrt();
    for v in data.iter_mut() {
        *v *= scale;
    }
}
