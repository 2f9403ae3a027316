//! Self-contained, portable randomness for corpus synthesis and training.
//!
//! Everything downstream of a seed must reproduce bit-for-bit across
//! platforms and releases, so the generator is pinned here instead of
//! depending on an external crate whose stream might change: splitmix64
//! (Steele, Lea & Flood's constants), plus a Box–Muller Gaussian layered on
//! top. The u64 stream for seed 0 starts `e220a8397b1dcdaf, 6e789e6aa1b965f4,
//! 06c45d188009454f`, matching the published reference outputs.

/// splitmix64: one 64-bit multiply-xorshift mix per output, equidistributed,
/// and fast enough to never matter at desk scale.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    /// Box–Muller produces Gaussians in pairs; the second is held here.
    spare_gaussian: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed, spare_gaussian: None }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`: the top 53 bits scaled by 2^-53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)` by rejection-free scaling; `n` is tiny
    /// here (alphabet sizes, word lengths), so modulo bias through the
    /// 53-bit float path is far below anything observable.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        let v = (self.next_f64() * n as f64) as usize;
        v.min(n - 1)
    }

    /// Bernoulli draw with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Standard normal via Box–Muller; draws two uniforms every other call
    /// and caches the second deviate. `u1` is shifted into `(0, 1]` so the
    /// logarithm stays finite.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(g) = self.spare_gaussian.take() {
            return g;
        }
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_gaussian = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// In-place Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
