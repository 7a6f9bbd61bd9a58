//! Shared helpers: seeded RNG, validation, the RMSE metric, and the warning
//! channel used by the estimators.

use ndarray::{Array2, ArrayView, Dimension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Stream ids so independent consumers of one user-facing seed never share a
/// generator stream.
pub mod streams {
    pub const RANKING_TAIL: u64 = 1;
    pub const RANDOM_PROJECTION: u64 = 2;
    pub const RANGE_FINDER: u64 = 3;
    pub const TRAIN_TEST_SPLIT: u64 = 4;
    pub const DATA_GEN: u64 = 5;
}

/// Seeded random number generator.
///
/// Backed by the ChaCha20 stream cipher (`rand_chacha::ChaCha20Rng`), whose
/// output for a given (seed, stream) pair is specified by the ChaCha20
/// algorithm and therefore portable across platforms and releases. Normal
/// variates come from the `rand_distr` ziggurat sampler at the pinned crate
/// version. Every randomized operation in this crate takes a seed or a
/// `SeededRng` explicitly; there is no ambient global generator.
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { seed, inner }
    }

    /// Fresh generator on a distinct stream of the same seed. The substream
    /// starts from the beginning of its stream regardless of how much of the
    /// parent stream has been consumed, so it is safe to hand to another
    /// thread.
    pub fn substream(&self, stream: u64) -> Self {
        Self::with_stream(self.seed, stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// One draw from the standard normal distribution.
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// `rows x cols` matrix of i.i.d. standard normal entries, filled in
    /// row-major order.
    pub fn normal_matrix(&mut self, rows: usize, cols: usize) -> Array2<f64> {
        Array2::from_shape_fn((rows, cols), |_| self.standard_normal())
    }

    pub fn index_below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.inner.gen_range(0..=i);
            xs.swap(i, j);
        }
    }
}

/// Root-mean-square error over all entries of two equally shaped arrays.
pub fn rmse<D: Dimension>(a: ArrayView<'_, f64, D>, b: ArrayView<'_, f64, D>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dim(format!(
            "rmse expects equal shapes, got {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut sum_sq = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        sum_sq += d * d;
    }
    Ok((sum_sq / n as f64).sqrt())
}

/// Uniformly shuffled complement of `chosen` within `[0, n)`.
pub fn shuffled_complement(n: usize, chosen: &[usize], rng: &mut SeededRng) -> Result<Vec<usize>> {
    let mut taken = vec![false; n];
    for &idx in chosen {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, n });
        }
        if taken[idx] {
            return Err(Error::InvalidParams(format!(
                "duplicate index {idx} in chosen set"
            )));
        }
        taken[idx] = true;
    }
    let mut complement: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
    rng.shuffle(&mut complement);
    Ok(complement)
}

/// Reject NaN and infinity in externally supplied data.
pub fn validate_finite<'a, I>(context: &str, values: I) -> Result<()>
where
    I: IntoIterator<Item = &'a f64>,
{
    for v in values {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: context.to_string(),
            });
        }
    }
    Ok(())
}

/// Warning channel: messages go to the `log` facade and, when a test has
/// installed a capture guard, to a thread-local sink it can inspect.
pub mod warnings {
    use std::cell::RefCell;

    thread_local! {
        static SINK: RefCell<Option<Vec<String>>> = const { RefCell::new(None) };
    }

    pub fn emit(message: impl Into<String>) {
        let message = message.into();
        log::warn!("{message}");
        SINK.with(|sink| {
            if let Some(buf) = sink.borrow_mut().as_mut() {
                buf.push(message);
            }
        });
    }

    /// Start capturing warnings on this thread; capture stops when the guard
    /// drops.
    pub fn capture() -> CaptureGuard {
        SINK.with(|sink| *sink.borrow_mut() = Some(Vec::new()));
        CaptureGuard { _private: () }
    }

    pub struct CaptureGuard {
        _private: (),
    }

    impl CaptureGuard {
        /// Messages captured so far.
        pub fn messages(&self) -> Vec<String> {
            SINK.with(|sink| sink.borrow().clone().unwrap_or_default())
        }
    }

    impl Drop for CaptureGuard {
        fn drop(&mut self) {
            SINK.with(|sink| *sink.borrow_mut() = None);
        }
    }
}
