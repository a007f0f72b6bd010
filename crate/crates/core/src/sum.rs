//! Deterministic summation primitives.

/// Pairwise summation splitting at the midpoint; the reduction tree depends
/// only on the length of the input.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Same tree as [`pairwise_sum`], forking the two halves onto the rayon pool
/// above `grain` elements.
pub fn par_pairwise_sum(xs: &[f64], grain: usize) -> f64 {
    if xs.len() <= grain.max(2) || rayon::current_num_threads() == 1 {
        return pairwise_sum(xs);
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    let (x, y) = rayon::join(|| par_pairwise_sum(a, grain), || par_pairwise_sum(b, grain));
    x + y
}

/// Neumaier's variant of compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    c: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_small_sums() {
        assert_eq!(pairwise_sum(&[]), 0.0);
        assert_eq!(pairwise_sum(&[1.0, 2.0, 3.0, 4.0, 5.0]), 15.0);
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(par_pairwise_sum(&xs, 8), pairwise_sum(&xs));
    }

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut s = Neumaier::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
