use crate::error::{invalid, Error, Result};

/// Least-squares line through `(ln N, ln MSE)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
}

/// Fits `ln MSE = intercept + slope·ln N`. Needs at least three points with
/// strictly increasing `N` and positive `MSE`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::Dimension(format!("scaling fit needs at least 3 points, got {}", points.len())));
    }
    if points.windows(2).any(|w| !(w[1].0 > w[0].0)) || !(points[0].0 > 0.0) {
        return Err(Error::Dimension("N must be positive and strictly increasing".into()));
    }
    if let Some(&(_, mse)) = points.iter().find(|(_, mse)| !(*mse > 0.0 && mse.is_finite())) {
        return Err(invalid("MSE", mse, "log-log fit needs positive values"));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|(n, m)| (n.ln(), m.ln())).collect();
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xy.iter().map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let s2 = rss / (k - 2.0);
    Ok(ScalingFit {
        slope,
        intercept,
        slope_stderr: (s2 / sxx).sqrt(),
        intercept_stderr: (s2 * (1.0 / k + mx * mx / sxx)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<_> = [1e3, 1e4, 1e5, 1e6].iter().map(|&n| (n, 2.5 / n)).collect();
        let fit = scaling_fit(&pts).unwrap();
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!((fit.intercept - 2.5f64.ln()).abs() < 1e-10);
        assert!(fit.slope_stderr < 1e-12);
    }

    #[test]
    fn plateau() {
        let pts = [(1e4, 0.02), (1e5, 0.0201), (1e6, 0.0199)];
        assert!(scaling_fit(&pts).unwrap().slope.abs() < 0.01);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 0.5)]).is_err());
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 0.3)]).is_err());
        assert!(scaling_fit(&[(1.0, 1.0), (1.0, 0.5), (3.0, 0.3)]).is_err());
    }
}
