use crate::error::{Error, Result};

const MIN_POINTS: usize = 10;

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Least-squares fits on `gaps[k]`, `k ≥ 1`, up to the first value at or
/// below `floor`. Returns `(exp(slope of ln gap vs k), slope of ln gap vs ln k)`.
pub fn estimate_empirical_rate(gaps: &[f64], floor: f64) -> Result<(f64, f64)> {
    let used: Vec<(f64, f64)> = gaps
        .iter()
        .enumerate()
        .skip(1)
        .take_while(|(_, g)| **g > floor && g.is_finite())
        .map(|(k, g)| (k as f64, g.ln()))
        .collect();
    if used.len() < MIN_POINTS {
        return Err(Error::TooShort {
            needed: MIN_POINTS,
            found: used.len(),
        });
    }
    let ks: Vec<f64> = used.iter().map(|p| p.0).collect();
    let logs: Vec<f64> = used.iter().map(|p| p.1).collect();
    let log_ks: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    Ok((slope(&ks, &logs).exp(), slope(&log_ks, &logs)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_sequence() {
        let gaps: Vec<f64> = (0..30).map(|k| 0.5f64.powi(k)).collect();
        let (q, _) = estimate_empirical_rate(&gaps, 0.0).unwrap();
        assert!((q - 0.5).abs() < 1e-6);
    }

    #[test]
    fn inverse_square() {
        let gaps: Vec<f64> = (0..200).map(|k| 1.0 / ((k.max(1) * k.max(1)) as f64)).collect();
        let (_, s) = estimate_empirical_rate(&gaps, 0.0).unwrap();
        assert!((s + 2.0).abs() < 0.05);
    }

    #[test]
    fn too_short() {
        let gaps = vec![1.0; 5];
        assert_eq!(
            estimate_empirical_rate(&gaps, 0.0),
            Err(Error::TooShort { needed: 10, found: 4 })
        );
    }
}
