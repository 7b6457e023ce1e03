//! Adaptive Dormand-Prince 5(4) integrator for autonomous systems in `R^3`.

use crate::error::{Error, Result};
use crate::monopole::Vec3;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub h_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { rtol: 1e-10, atol: 1e-12, h_min: 1e-14, h_max: 0.1 }
    }
}

pub struct Dopri5<F> {
    field: F,
    tol: Tolerances,
    h: f64,
}

impl<F: Fn(&Vec3) -> Result<Vec3>> Dopri5<F> {
    pub fn new(field: F, tol: Tolerances) -> Self {
        let h = (tol.h_max * 1e-3).max(tol.h_min * 10.0);
        Dopri5 { field, tol, h }
    }

    /// Trial stages of one step; `None` if the field could not be evaluated.
    fn attempt(&self, y: &Vec3, h: f64) -> Option<(Vec3, f64)> {
        let mut k = [Vec3::zeros(); 7];
        k[0] = (self.field)(y).ok()?;
        for s in 1..7 {
            let mut ys = *y;
            for (j, kj) in k.iter().enumerate().take(s) {
                ys += kj * (h * A[s][j]);
            }
            k[s] = (self.field)(&ys).ok()?;
        }
        let mut y_new = *y;
        for (s, ks) in k.iter().enumerate().take(6) {
            y_new += ks * (h * A[6][s]);
        }
        let mut err = Vec3::zeros();
        for (ks, es) in k.iter().zip(E) {
            err += ks * (h * es);
        }
        let mut e: f64 = 0.0;
        for i in 0..3 {
            let scale = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
            e = e.max(err[i].abs() / scale);
        }
        e.is_finite().then_some((y_new, e))
    }

    /// Advances one accepted step, never past `t_end`. Returns the new time and state.
    pub fn step(&mut self, t: f64, y: &Vec3, t_end: f64) -> Result<(f64, Vec3)> {
        loop {
            let remaining = t_end - t;
            let h = self.h.min(remaining).min(self.tol.h_max);
            if h < self.tol.h_min && h < remaining {
                return Err(Error::StepUnderflow { t });
            }
            match self.attempt(y, h) {
                Some((y_new, e)) if e <= 1.0 => {
                    let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
                    // A step shortened to land on t_end says nothing about the step size.
                    if h >= self.h.min(self.tol.h_max) || grow < 1.0 {
                        self.h = h * grow;
                    }
                    let t_new = if h == remaining { t_end } else { t + h };
                    return Ok((t_new, y_new));
                }
                Some((_, e)) => self.h = h * (0.9 * e.powf(-0.2)).clamp(0.1, 0.9),
                None => self.h = h * 0.25,
            }
            if self.h < self.tol.h_min {
                return Err(Error::StepUnderflow { t });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exponential_decay() {
        let mut ode = Dopri5::new(|y: &Vec3| Ok(-y), Tolerances::default());
        let mut t = 0.0;
        let mut y = Vec3::new(1.0, 2.0, -1.0);
        while t < 3.0 {
            let (tn, yn) = ode.step(t, &y, 3.0).unwrap();
            t = tn;
            y = yn;
        }
        assert_eq!(t, 3.0);
        assert_relative_eq!(y, Vec3::new(1.0, 2.0, -1.0) * (-3.0f64).exp(), epsilon = 1e-10);
    }

    #[test]
    fn rotation_conserves_radius() {
        let mut ode = Dopri5::new(|y: &Vec3| Ok(Vec3::new(-y.y, y.x, 0.0)), Tolerances::default());
        let mut t = 0.0;
        let mut y = Vec3::new(1.0, 0.0, 0.5);
        while t < 10.0 {
            (t, y) = ode.step(t, &y, 10.0).unwrap();
        }
        assert_relative_eq!(y.x, 10f64.cos(), epsilon = 1e-9);
        assert_relative_eq!(y.y, 10f64.sin(), epsilon = 1e-9);
        assert_eq!(y.z, 0.5);
    }

    #[test]
    fn unevaluable_field_underflows() {
        let mut ode = Dopri5::new(|_: &Vec3| Err(Error::NotRestPoint), Tolerances::default());
        assert!(matches!(ode.step(0.0, &Vec3::zeros(), 1.0), Err(Error::StepUnderflow { .. })));
    }
}
