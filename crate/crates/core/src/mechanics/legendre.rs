use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Legendre transform `ℒf(p) = max_x (p·x − f(x))` of a convex function,
/// searched by golden section on `[lo, hi]`.
///
/// Returns [`Error::BoundaryHit`] when the maximizer lies at an end of the
/// interval, which means the caller must widen it.
pub fn legendre_transform<F: Fn(f64) -> f64>(f: F, p: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!("empty search interval [{lo}, {hi}]")));
    }
    let g = |x: f64| p * x - f(x);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let tol = 1e-12 * (hi - lo);
    while b - a > tol {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    let edge = 1e-7 * (hi - lo);
    if x - lo < edge || hi - x < edge {
        return Err(Error::BoundaryHit(x));
    }
    Ok(g(x).max(gc).max(gd))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_examples() {
        let v = legendre_transform(|x| x * x, 2.0, -10.0, 10.0).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        let v = legendre_transform(|x| 0.5 * x * x, 3.0, -10.0, 10.0).unwrap();
        assert!((v - 4.5).abs() < 1e-9);
    }

    #[test]
    fn involution() {
        let f = |x: f64| x.powi(4) + x * x;
        let lf = |p: f64| legendre_transform(f, p, -10.0, 10.0).unwrap();
        let llf = legendre_transform(lf, 0.7, -20.0, 20.0).unwrap();
        assert!((llf - f(0.7)).abs() < 1e-6, "{}", llf - f(0.7));
    }

    #[test]
    fn boundary_hit() {
        let r = legendre_transform(|x| x * x, 100.0, -1.0, 1.0);
        assert!(matches!(r, Err(Error::BoundaryHit(_))));
    }
}
