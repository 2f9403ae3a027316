//! ADADELTA, exactly as published: per-coordinate RMS-scaled steps with no
//! global learning rate. Two exponential accumulators per parameter — one
//! for squared gradients, one for squared updates — and the step is
//! `Δ = −(RMS[Δ]/RMS[g])·g` with `RMS[v] = sqrt(E[v²] + ε)`.

/// Optimizer state for one flat parameter vector.
#[derive(Debug, Clone)]
pub struct Adadelta {
    rho: f64,
    eps: f64,
    sq_grad: Vec<f64>,
    sq_update: Vec<f64>,
}

impl Adadelta {
    /// Standard defaults: decay 0.95, stabilizer 1e-6.
    pub const DEFAULT_RHO: f64 = 0.95;
    pub const DEFAULT_EPS: f64 = 1e-6;

    pub fn new(dim: usize, rho: f64, eps: f64) -> Self {
        assert!((0.0..1.0).contains(&rho), "decay {rho} outside [0, 1)");
        assert!(eps > 0.0, "stabilizer must be positive");
        Adadelta { rho, eps, sq_grad: vec![0.0; dim], sq_update: vec![0.0; dim] }
    }

    /// One in-place update of `params` against `grad`.
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) {
        assert_eq!(params.len(), grad.len());
        assert_eq!(params.len(), self.sq_grad.len());
        for i in 0..params.len() {
            let g = grad[i];
            self.sq_grad[i] = self.rho * self.sq_grad[i] + (1.0 - self.rho) * g * g;
            let delta = (self.sq_update[i] + self.eps).sqrt()
                / (self.sq_grad[i] + self.eps).sqrt()
                * g;
            self.sq_update[i] = self.rho * self.sq_update[i] + (1.0 - self.rho) * delta * delta;
            params[i] -= delta;
        }
    }
}
