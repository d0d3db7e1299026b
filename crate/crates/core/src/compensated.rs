//! Neumaier-compensated accumulation.

use std::ops::AddAssign;

/// Running sum with Kahan-Babuška-Neumaier error compensation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let s: NeumaierSum = [1e200, 0.1, 0.2, 0.3, -1e200].into_iter().collect();
        assert!((s.value() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn beats_naive_on_many_small_terms() {
        let mut acc = NeumaierSum::new();
        let mut naive = 0.0f64;
        for _ in 0..1_000_000 {
            acc += 0.1;
            naive += 0.1;
        }
        assert!((acc.value() - 100_000.0).abs() < 1e-9);
        assert!((naive - 100_000.0).abs() > (acc.value() - 100_000.0).abs());
    }
}
