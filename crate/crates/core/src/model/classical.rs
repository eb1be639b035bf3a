use crate::scalar::Scalar;

/// Partial sum `sum_{i=1..n} 2^-i ln(2^i)` of the log-utility value of the
/// St. Petersburg game. Converges to `ln 4`.
pub fn st_petersburg_log_value<T: Scalar>(n_terms: usize) -> T {
    let ln2 = T::LN_2();
    let mut weight = T::one();
    let mut sum = T::zero();
    for i in 1..=n_terms {
        weight = weight * T::half();
        sum = sum + weight * T::from_usize_lossy(i) * ln2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converges_to_log_four() {
        assert!((st_petersburg_log_value::<f64>(1) - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert!((st_petersburg_log_value::<f64>(60) - 4f64.ln()).abs() < 1e-12);
        let v: f64 = st_petersburg_log_value(200);
        assert!((v.exp() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn partial_sums_increase() {
        let sums: Vec<f64> = (1..40).map(st_petersburg_log_value).collect();
        assert!(sums.windows(2).all(|w| w[1] > w[0]));
    }
}
