/// Classical fourth-order Runge-Kutta stepper with reusable stage buffers.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            stage: vec![0.0; dim],
        }
    }

    /// Advances the autonomous system `y' = f(y)` by `dt`, writing into `out`.
    pub fn step<F>(&mut self, mut f: F, y: &[f64], dt: f64, out: &mut [f64])
    where
        F: FnMut(&[f64], &mut [f64]),
    {
        let half = 0.5 * dt;
        f(y, &mut self.k1);
        for i in 0..y.len() {
            self.stage[i] = y[i] + half * self.k1[i];
        }
        f(&self.stage, &mut self.k2);
        for i in 0..y.len() {
            self.stage[i] = y[i] + half * self.k2[i];
        }
        f(&self.stage, &mut self.k3);
        for i in 0..y.len() {
            self.stage[i] = y[i] + dt * self.k3[i];
        }
        f(&self.stage, &mut self.k4);
        for i in 0..y.len() {
            out[i] = y[i]
                + dt / 6.0 * (self.k1[i] + 2.0 * self.k2[i] + 2.0 * self.k3[i] + self.k4[i]);
        }
    }
}
