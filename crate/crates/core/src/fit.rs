/// Ordinary least-squares fit `y = slope·x + intercept`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Slope of `log y` against `log x`. Non-positive values make the fit undefined.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs
        .iter()
        .chain(ys)
        .any(|v| v.is_nan() || *v <= 0.0 || !v.is_finite())
    {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    least_squares(&lx, &ly).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let xs = [0.2, 0.1, 0.05, 0.025];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powi(6)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(least_squares(&[1.0], &[2.0]).is_none());
        assert!(least_squares(&[1.0, 1.0], &[2.0, 3.0]).is_none());
        assert!(log_log_slope(&[1.0, 2.0], &[0.0, 1.0]).is_none());
    }
}
