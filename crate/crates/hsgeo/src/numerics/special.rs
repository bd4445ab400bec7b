//! Log-factorials and harmonic numbers.

/// Table of `log(k!)` built by accumulating `log(j)`.
///
/// Accumulated sums keep the construction exact enough for `k` up to 10^4
/// (relative error stays near machine precision) while avoiding any
/// factorial overflow.
#[derive(Debug, Clone)]
pub struct LogFactorial {
    table: Vec<f64>,
}

impl LogFactorial {
    pub fn up_to(kmax: usize) -> Self {
        let mut table = Vec::with_capacity(kmax + 1);
        table.push(0.0);
        let mut acc = 0.0;
        for j in 1..=kmax {
            acc += (j as f64).ln();
            table.push(acc);
        }
        LogFactorial { table }
    }

    /// `log(k!)`.
    pub fn get(&self, k: usize) -> f64 {
        self.table[k]
    }

    pub fn kmax(&self) -> usize {
        self.table.len() - 1
    }
}

/// Harmonic number `H_n = sum_{j=1..n} 1/j`; `H_0 = 0`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|j| 1.0 / j as f64).sum()
}
