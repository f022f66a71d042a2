//! Small numerical and random-number helpers shared by the enumerators.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Kahan–Babuška (Neumaier) compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// The generator used everywhere: ChaCha8 seeded through
/// `SeedableRng::seed_from_u64`, with independent streams selected by
/// `set_stream`. Results are reproducible bit-for-bit for a given
/// `(seed, stream)`.
pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Work units per parallel block in randomized routines. Fixed so that
/// output never depends on the number of worker threads.
pub const BLOCK: usize = 4096;

/// Split `reps` into fixed-size blocks `(index, len)`.
pub fn blocks(reps: usize) -> impl Iterator<Item = (u64, usize)> + Clone {
    (0..reps.div_ceil(BLOCK)).map(move |b| (b as u64, BLOCK.min(reps - b * BLOCK)))
}

/// Dot product written with independent lanes so it vectorizes.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut lanes = [0.0f64; 8];
    let chunks = a.len() / 8;
    for c in 0..chunks {
        let (x, y) = (&a[c * 8..c * 8 + 8], &b[c * 8..c * 8 + 8]);
        for l in 0..8 {
            lanes[l] += x[l] * y[l];
        }
    }
    let mut tail = 0.0;
    for i in chunks * 8..a.len() {
        tail += a[i] * b[i];
    }
    lanes.iter().sum::<f64>() + tail
}

pub fn sum(a: &[f64]) -> f64 {
    let mut lanes = [0.0f64; 8];
    let chunks = a.len() / 8;
    for c in 0..chunks {
        let x = &a[c * 8..c * 8 + 8];
        for l in 0..8 {
            lanes[l] += x[l];
        }
    }
    let mut tail = 0.0;
    for v in &a[chunks * 8..] {
        tail += v;
    }
    lanes.iter().sum::<f64>() + tail
}
