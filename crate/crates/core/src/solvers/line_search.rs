use crate::linalg::vecops::{dot, lerp, norm2, sub};
use crate::objective::BlockObjective;

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const POLISH_STEPS: usize = 80;
const BRACKET_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchResult {
    pub beta: f64,
    pub y: Vec<f64>,
    pub f_y: f64,
}

/// `β = argmin_{β∈[0,1]} f(x + β(v − x))`.
///
/// Quadratic objectives use the closed-form minimizer clipped to `[0, 1]`.
/// Otherwise golden-section search narrows `[0, 1]` to width `tol`, the
/// bracket is polished by bisection on the directional derivative, and the
/// best of the interior point and both endpoints is returned.
pub fn exact_line_search(h: &dyn BlockObjective, x: &[f64], v: &[f64], tol: f64) -> LineSearchResult {
    let d = sub(v, x);
    let f_x = h.smooth_value(x);
    if norm2(&d) == 0.0 {
        return LineSearchResult {
            beta: 0.0,
            y: x.to_vec(),
            f_y: f_x,
        };
    }
    let phi = |b: f64| h.smooth_value(&lerp(x, v, b));

    let beta = if let Some(curv) = h.quadratic_curvature(&d) {
        let slope = dot(&h.gradient(x), &d);
        if curv > 0.0 {
            (-slope / curv).clamp(0.0, 1.0)
        } else if slope < 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        let (a, b) = golden_section(&phi, 0.0, 1.0, tol);
        let dphi = |t: f64| dot(&h.gradient(&lerp(x, v, t)), &d);
        // value comparisons resolve β only to about √ε, so widen the bracket
        let margin = BRACKET_MARGIN.max(10.0 * tol);
        let (a, b) = ((a - margin).max(0.0), (b + margin).min(1.0));
        if (dphi(a) >= 0.0 && a > 0.0) || (dphi(b) <= 0.0 && b < 1.0) {
            polish(&dphi, 0.0, 1.0)
        } else {
            polish(&dphi, a, b)
        }
    };

    let f_beta = phi(beta);
    // fall back to an endpoint if it is strictly better
    let f_v = if beta == 1.0 { f_beta } else { phi(1.0) };
    let (beta, f_y) = [(beta, f_beta), (0.0, f_x), (1.0, f_v)]
        .into_iter()
        .fold((beta, f_beta), |best, cand| if cand.1 < best.1 { cand } else { best });
    LineSearchResult {
        beta,
        y: lerp(x, v, beta),
        f_y,
    }
}

/// Golden-section search; returns the final bracket.
fn golden_section(phi: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = phi(c);
    let mut fd = phi(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = phi(d);
        }
    }
    (a, b)
}

/// Bisection on the sign of `φ'` inside `[a, b]`; midpoint when the
/// derivative does not change sign there.
fn polish(dphi: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let (da, db) = (dphi(a), dphi(b));
    if da >= 0.0 {
        return a;
    }
    if db <= 0.0 {
        return b;
    }
    for _ in 0..POLISH_STEPS {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if dphi(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{BlockPartition, FnObjective};

    fn parabola(with_curvature: bool) -> FnObjective {
        let b = FnObjective::builder(BlockPartition::contiguous(1, 1).unwrap())
            .value(|x| x[0] * x[0])
            .gradient(|x| vec![2.0 * x[0]]);
        if with_curvature {
            b.quadratic_curvature(|d| 2.0 * d[0] * d[0]).build()
        } else {
            b.build()
        }
    }

    #[test]
    fn degenerate_direction_returns_zero() {
        let h = parabola(true);
        let r = exact_line_search(&h, &[3.0], &[3.0], 1e-10);
        assert_eq!(r.beta, 0.0);
        assert_eq!(r.y, vec![3.0]);
    }

    #[test]
    fn symmetric_parabola_midpoint() {
        for curv in [true, false] {
            let h = parabola(curv);
            let r = exact_line_search(&h, &[1.0], &[-1.0], 1e-10);
            assert!((r.beta - 0.5).abs() < 1e-9, "{curv}: {}", r.beta);
            assert!(r.y[0].abs() < 1e-9);
        }
    }

    #[test]
    fn clips_to_endpoints() {
        for curv in [true, false] {
            let h = parabola(curv);
            // minimizer beyond v
            let r = exact_line_search(&h, &[4.0], &[2.0], 1e-10);
            assert_eq!(r.beta, 1.0);
            // minimizer behind x
            let r = exact_line_search(&h, &[1.0], &[3.0], 1e-10);
            assert_eq!(r.beta, 0.0);
        }
    }

    #[test]
    fn non_quadratic_is_polished_to_stationarity() {
        let h = FnObjective::builder(BlockPartition::contiguous(1, 1).unwrap())
            .value(|x| x[0].cosh() + 0.3 * x[0])
            .gradient(|x| vec![x[0].sinh() + 0.3])
            .build();
        let r = exact_line_search(&h, &[2.0], &[-3.0], 1e-10);
        let g = r.y[0].sinh() + 0.3;
        assert!(g.abs() < 1e-12, "{g}");
    }
}
