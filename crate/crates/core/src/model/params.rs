use crate::error::{Result, SbmError};

/// Tolerance on `Σ alphas = 1`.
pub const ALPHA_SUM_TOL: f64 = 1e-12;

/// Stochastic block model description.
///
/// `alphas` are the community fractions in nondecreasing order, so
/// `alphas[0]` and `alphas[1]` are the two smallest communities.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    n: usize,
    alphas: Vec<f64>,
    p: f64,
    q: f64,
}

impl SbmParams {
    pub fn new(n: usize, alphas: Vec<f64>, p: f64, q: f64) -> Result<Self> {
        if n == 0 {
            return Err(SbmError::param("n must be positive"));
        }
        if alphas.len() < 2 {
            return Err(SbmError::param(format!(
                "need at least 2 communities, got {}",
                alphas.len()
            )));
        }
        if alphas.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(SbmError::param("community fractions must be positive"));
        }
        if alphas.windows(2).any(|w| w[0] > w[1]) {
            return Err(SbmError::param(
                "community fractions must be sorted in nondecreasing order",
            ));
        }
        let total: f64 = alphas.iter().sum();
        if (total - 1.0).abs() > ALPHA_SUM_TOL {
            return Err(SbmError::param(format!(
                "community fractions sum to {total}, expected 1"
            )));
        }
        for (name, v) in [("p", p), ("q", q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(SbmError::param(format!("{name}={v} is not a probability")));
            }
        }
        if p < q {
            return Err(SbmError::param(format!(
                "intra-community probability p={p} is below q={q}"
            )));
        }
        Ok(SbmParams { n, alphas, p, q })
    }

    /// `p = a·ln(n)/n`, `q = b·ln(n)/n`.
    pub fn log_scaled(n: usize, alphas: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        let scale = log_scale(n);
        Self::new(n, alphas, a * scale, b * scale)
    }

    /// Two communities of equal size with log-scaled probabilities.
    pub fn binary_symmetric(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::log_scaled(n, vec![0.5, 0.5], a, b)
    }

    /// `k` communities of equal size.
    pub fn balanced(n: usize, k: usize, p: f64, q: f64) -> Result<Self> {
        Self::new(n, vec![1.0 / k as f64; k], p, q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p/q − 1`, infinite when `q = 0`. Reported only; never enforced beyond
    /// `p ≥ q`.
    pub fn epsilon(&self) -> f64 {
        if self.q == 0.0 {
            f64::INFINITY
        } else {
            self.p / self.q - 1.0
        }
    }

    /// Community sizes: `floor(α_k·n)` each, then the remainder handed out
    /// one vertex at a time starting from the largest community.
    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self
            .alphas
            .iter()
            .map(|a| (a * self.n as f64).floor() as usize)
            .collect();
        let assigned: usize = sizes.iter().sum();
        // Rounding of α·n can overshoot by one when α·n is an integer
        // represented just above itself.
        let mut excess = assigned.saturating_sub(self.n);
        for s in sizes.iter_mut() {
            if excess == 0 {
                break;
            }
            if *s > 0 {
                *s -= 1;
                excess -= 1;
            }
        }
        let mut remainder = self.n.saturating_sub(sizes.iter().sum());
        let k = sizes.len();
        let mut idx = k;
        while remainder > 0 {
            idx = if idx == 0 { k - 1 } else { idx - 1 };
            sizes[idx] += 1;
            remainder -= 1;
        }
        sizes
    }

    /// Ground-truth label of every vertex: contiguous blocks in community
    /// order.
    pub fn truth_labels(&self) -> Vec<usize> {
        self.community_sizes()
            .iter()
            .enumerate()
            .flat_map(|(k, &s)| std::iter::repeat_n(k, s))
            .collect()
    }

    /// Closed-form expected number of edges.
    pub fn expected_edges(&self) -> f64 {
        let (within, across) = self.pair_counts();
        self.p * within + self.q * across
    }

    /// Variance of the edge count (sum of independent Bernoullis).
    pub fn edge_count_variance(&self) -> f64 {
        let (within, across) = self.pair_counts();
        self.p * (1.0 - self.p) * within + self.q * (1.0 - self.q) * across
    }

    fn pair_counts(&self) -> (f64, f64) {
        let sizes = self.community_sizes();
        let n = self.n as f64;
        let within: f64 = sizes
            .iter()
            .map(|&s| s as f64 * (s as f64 - 1.0) / 2.0)
            .sum();
        let total = n * (n - 1.0) / 2.0;
        (within, total - within)
    }
}

/// `ln(n)/n`.
pub fn log_scale(n: usize) -> f64 {
    let n = n as f64;
    n.ln() / n
}
