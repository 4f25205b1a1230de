//! Multi-dimensional complex FFT over row-major cubes of side `n`.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;

const BATCH: usize = 32;

/// Forward/inverse FFT for an `n^dim` row-major array.
///
/// The inverse is normalized, so `inverse(forward(x)) == x`.
#[derive(Clone)]
pub struct FftNd<T: Real> {
    dim: usize,
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> std::fmt::Debug for FftNd<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FftNd").field("dim", &self.dim).field("n", &self.n).finish()
    }
}

impl<T: Real> FftNd<T> {
    pub fn new(dim: usize, n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            dim,
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.transform(data, &*self.forward);
    }

    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.transform(data, &*self.inverse);
        let scale = T::one() / T::from_usize_lossy(self.len());
        for z in data.iter_mut() {
            *z *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex<T>], plan: &dyn Fft<T>) {
        assert_eq!(data.len(), self.len(), "FFT buffer length mismatch");
        let n = self.n;
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        let mut lines = vec![Complex::new(T::zero(), T::zero()); BATCH * n];
        for axis in 0..self.dim {
            let stride = n.pow((self.dim - 1 - axis) as u32);
            if stride == 1 {
                plan.process_with_scratch(data, &mut scratch);
                continue;
            }
            let block = stride * n;
            for chunk in data.chunks_mut(block) {
                let mut col = 0;
                while col < stride {
                    let width = BATCH.min(stride - col);
                    for i in 0..n {
                        let src = &chunk[i * stride + col..i * stride + col + width];
                        for (b, &z) in src.iter().enumerate() {
                            lines[b * n + i] = z;
                        }
                    }
                    plan.process_with_scratch(&mut lines[..width * n], &mut scratch);
                    for i in 0..n {
                        let dst = &mut chunk[i * stride + col..i * stride + col + width];
                        for (b, z) in dst.iter_mut().enumerate() {
                            *z = lines[b * n + i];
                        }
                    }
                    col += width;
                }
            }
        }
    }
}
