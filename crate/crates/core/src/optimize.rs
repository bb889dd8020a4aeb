//! One-dimensional minimisation.

/// Golden-section ratio 1/φ.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenResult {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol` (absolute). `f` may return `+∞` for
/// infeasible points.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> GoldenResult {
    let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iterations = 0;
    while hi - lo > tol && iterations < 500 {
        iterations += 1;
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let (x, fx) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    GoldenResult { x, fx, iterations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let r = golden_section(|x| (x - 1.25) * (x - 1.25) + 3.0, -4.0, 9.0, 1e-10);
        // x is only resolvable to ~sqrt(eps) at a quadratic minimum
        assert!((r.x - 1.25).abs() < 1e-7);
        assert!((r.fx - 3.0).abs() < 1e-15);
    }

    #[test]
    fn infeasible_region_is_avoided() {
        // minimum pressed against an infinite wall at x = 2
        let r = golden_section(|x| if x > 2.0 { f64::INFINITY } else { -x }, 0.0, 5.0, 1e-10);
        assert!((r.x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn reversed_bracket() {
        let r = golden_section(|x| libm::cosh(x - 0.5), 3.0, -3.0, 1e-9);
        assert!((r.x - 0.5).abs() < 1e-7);
    }
}
