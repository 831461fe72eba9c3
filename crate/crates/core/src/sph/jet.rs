//! Truncated Taylor series in one variable, used to differentiate the
//! angular coefficient functions (unit vectors, cot, csc, 1/r) exactly.

use std::ops::{Add, Mul, Neg, Sub};

pub const ORDER: usize = 6;

/// Taylor coefficients c_k with f(t0 + t) = sum c_k t^k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [f64; ORDER + 1]);

impl Jet {
    pub fn constant(c: f64) -> Self {
        let mut a = [0.0; ORDER + 1];
        a[0] = c;
        Jet(a)
    }

    /// The identity t -> t0 + t.
    pub fn variable(t0: f64) -> Self {
        let mut a = [0.0; ORDER + 1];
        a[0] = t0;
        a[1] = 1.0;
        Jet(a)
    }

    /// sin(t0 + t)
    pub fn sin_at(t0: f64) -> Self {
        let mut a = [0.0; ORDER + 1];
        let mut fact = 1.0;
        for (k, c) in a.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *c = (t0 + k as f64 * std::f64::consts::FRAC_PI_2).sin() / fact;
        }
        Jet(a)
    }

    pub fn cos_at(t0: f64) -> Self {
        Self::sin_at(t0 + std::f64::consts::FRAC_PI_2)
    }

    /// k-th derivative at t0.
    pub fn deriv(&self, k: usize) -> f64 {
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        self.0[k] * fact
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn recip(&self) -> Self {
        let a = &self.0;
        let mut b = [0.0; ORDER + 1];
        b[0] = 1.0 / a[0];
        for k in 1..=ORDER {
            let s: f64 = (1..=k).map(|j| a[j] * b[k - j]).sum();
            b[k] = -s / a[0];
        }
        Jet(b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Jet(self.0.map(|c| c * s))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0) {
            *x += y;
        }
        Jet(a)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut c = [0.0; ORDER + 1];
        for i in 0..=ORDER {
            for j in 0..=ORDER - i {
                c[i + j] += self.0[i] * o.0[j];
            }
        }
        Jet(c)
    }
}
