//! Log-space combinatorial kernel shared by every objective.
//!
//! Counts of compatible hypergraphs overflow fixed-width integers almost
//! immediately, so every quantity here is a natural logarithm and the count
//! itself is never materialized. An impossible selection (choosing more items
//! than exist) is encoded as [`f64::NEG_INFINITY`] instead of an error, so
//! objective evaluations can propagate incompatibility and the annealer can
//! reject such states deterministically.

use std::sync::OnceLock;

use thiserror::Error;

/// Entries kept in the shared exact table; larger arguments take the
/// Stirling tail, whose truncation error is far below f64 resolution there.
const SHARED_TABLE_LEN: usize = 1 << 16;

/// ln(2^53): below this an integer round-trips exactly through f64.
const LN_EXACT_LIMIT: f64 = 53.0 * std::f64::consts::LN_2;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CombinatoricsError {
    #[error("multinomial parts sum to {got}, expected {expected}")]
    PartsMismatch { expected: u64, got: u64 },
}

#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    fn add(&mut self, term: f64) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum
    }
}

/// Cache of ln(k!) for k in [0, len), built once by compensated summation.
#[derive(Debug, Clone)]
pub struct LogFactorialTable {
    values: Vec<f64>,
}

impl LogFactorialTable {
    pub fn new(len: usize) -> Self {
        let len = len.max(2);
        let mut values = vec![0.0_f64; len];
        // Compensated summation keeps the cumulative error of the prefix
        // sums well under the 1e-12 relative contract.
        let mut sum = KahanSum::default();
        for (k, slot) in values.iter_mut().enumerate().skip(2) {
            sum.add((k as f64).ln());
            *slot = sum.value();
        }
        Self { values }
    }

    /// ln(k!), exact-table path for small k, Stirling beyond the table.
    pub fn ln_factorial(&self, k: u64) -> f64 {
        match self.values.get(k as usize) {
            Some(&v) => v,
            None => stirling_ln_factorial(k),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn shared_table() -> &'static LogFactorialTable {
    static TABLE: OnceLock<LogFactorialTable> = OnceLock::new();
    TABLE.get_or_init(|| LogFactorialTable::new(SHARED_TABLE_LEN))
}

/// Stirling series for ln Γ(k + 1), used only for k past the shared table.
fn stirling_ln_factorial(k: u64) -> f64 {
    let x = k as f64 + 1.0;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    (x - 0.5) * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// ln(k!).
pub fn ln_factorial(k: u64) -> f64 {
    shared_table().ln_factorial(k)
}

/// ln C(n, k). Returns the negative-infinity sentinel when k > n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// ln C(N, k) where N is given only through ln N and may be far too large to
/// represent. Uses ln C(N, k) = sum_{j<k} ln(N - j) - ln k!, with the factor
/// ln(N - j) expanded as ln N + ln1p(-j/N) once N exceeds the exact range.
pub fn ln_binomial_real(ln_n: f64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if ln_n == f64::NEG_INFINITY {
        // N = 0 and k >= 1.
        return f64::NEG_INFINITY;
    }
    if ln_n <= LN_EXACT_LIMIT {
        let n = ln_n.exp().round() as u64;
        if k > n {
            return f64::NEG_INFINITY;
        }
        let k = k.min(n - k);
        if k == 0 {
            return 0.0;
        }
        let mut sum = KahanSum::default();
        for j in 0..k {
            sum.add(((n - j) as f64).ln());
        }
        sum.value() - ln_factorial(k)
    } else {
        let inv_n = (-ln_n).exp();
        let mut sum = KahanSum::default();
        for j in 0..k {
            sum.add(ln_n + (-(j as f64) * inv_n).ln_1p());
        }
        sum.value() - ln_factorial(k)
    }
}

/// ln of the multinomial coefficient total! / prod(part!).
pub fn ln_multinomial(total: u64, parts: &[u64]) -> Result<f64, CombinatoricsError> {
    let got: u64 = parts.iter().sum();
    if got != total {
        return Err(CombinatoricsError::PartsMismatch {
            expected: total,
            got,
        });
    }
    Ok(ln_factorial(total) - parts.iter().map(|&p| ln_factorial(p)).sum::<f64>())
}
