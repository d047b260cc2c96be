//! Largest real root of integer polynomials of degree at most three.

use thiserror::Error;

use crate::poly::IntPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("polynomial {0} has no real root")]
    NoRealRoot(String),
    #[error("zero polynomial")]
    Zero,
    #[error("constant polynomial {0} has no roots")]
    Constant(String),
    #[error("degree {0} not supported (at most 3)")]
    UnsupportedDegree(usize),
}

/// Bisection stops once the bracket is this narrow.
pub const BRACKET_WIDTH: f64 = 1e-13;

/// Largest real root of `p`.
///
/// The bracket comes from the monotone piece right of the largest critical point
/// (or left of the smallest, when the local minimum is positive), capped by the
/// Cauchy root bound. Bisection narrows it to [`BRACKET_WIDTH`] and a single Newton
/// step polishes the midpoint if it stays inside the bracket and lowers `|p|`.
pub fn largest_real_root(p: &IntPoly) -> Result<f64, RootError> {
    let deg = p.degree().ok_or(RootError::Zero)?;
    let p = if p.leading() < 0 {
        IntPoly::new(p.coeffs().iter().map(|c| -c).collect())
    } else {
        p.clone()
    };
    let c = p.coeffs();
    match deg {
        0 => return Err(RootError::Constant(p.to_string())),
        1 => return Ok(-(c[0] as f64) / c[1] as f64),
        2 | 3 => {}
        d => return Err(RootError::UnsupportedDegree(d)),
    }
    let lead = p.leading() as f64;
    let cauchy = 1.0
        + c[..deg]
            .iter()
            .map(|&a| (a as f64 / lead).abs())
            .fold(0.0, f64::max);

    let (lo, hi) = if deg == 2 {
        let vertex = -(c[1] as f64) / (2.0 * c[2] as f64);
        if p.eval_f64(vertex) > 0.0 {
            return Err(RootError::NoRealRoot(p.to_string()));
        }
        (vertex, cauchy)
    } else {
        // p' = 3a x^2 + 2b x + c
        let (a, b, cc) = (c[3] as f64, c[2] as f64, c[1] as f64);
        let disc = 4.0 * b * b - 12.0 * a * cc;
        if disc <= 0.0 {
            (-cauchy, cauchy)
        } else {
            let sq = disc.sqrt();
            let c1 = (-2.0 * b - sq) / (6.0 * a);
            let c2 = (-2.0 * b + sq) / (6.0 * a);
            if p.eval_f64(c2) <= 0.0 {
                (c2, cauchy)
            } else {
                (-cauchy, c1)
            }
        }
    };
    Ok(bisect_and_polish(&p, lo, hi))
}

/// `p(lo) <= 0 <= p(hi)` is assumed; `p` is increasing across the root.
fn bisect_and_polish(p: &IntPoly, mut lo: f64, mut hi: f64) -> f64 {
    if p.eval_f64(lo) == 0.0 {
        return lo;
    }
    for _ in 0..400 {
        if hi - lo <= BRACKET_WIDTH {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if p.eval_f64(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let dp = p.derivative().eval_f64(x);
    let px = p.eval_f64(x);
    if dp != 0.0 {
        let polished = x - px / dp;
        let slack = BRACKET_WIDTH;
        if polished >= lo - slack
            && polished <= hi + slack
            && p.eval_f64(polished).abs() <= px.abs()
        {
            return polished;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(desc: &[i128]) -> f64 {
        largest_real_root(&IntPoly::from_descending(desc)).unwrap()
    }

    #[test]
    fn worked_examples() {
        assert!((root(&[1, 0, -3, 0]) - 3f64.sqrt()).abs() < 1e-12);
        assert!((root(&[1, -1, -10]) - (1.0 + 41f64.sqrt()) / 2.0).abs() < 1e-12);
        // n = 8: x^3 - 4x^2 - 7x + 8
        let t8 = root(&[1, -4, -7, 8]);
        assert!((t8 - 5.07).abs() < 0.01, "{t8}");
        assert!((root(&[2, -6]) - 3.0).abs() < 1e-15);
        assert!((root(&[-1, 0, 4]) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn awkward_shapes() {
        // double root at the top: (x - 2)^2 (x + 1)
        assert!((root(&[1, -3, 0, 4]) - 2.0).abs() < 1e-6);
        // single real root left of both critical points: x^3 - 3x + 5
        let r = root(&[1, 0, -3, 5]);
        assert!((r.powi(3) - 3.0 * r + 5.0).abs() < 1e-9);
        // monotone cubic
        assert!((root(&[1, 0, 1, -2]) - 1.0).abs() < 1e-12);
        assert!(matches!(
            largest_real_root(&IntPoly::from_descending(&[1, 0, 1])),
            Err(RootError::NoRealRoot(_))
        ));
        assert_eq!(
            largest_real_root(&IntPoly::new(vec![])),
            Err(RootError::Zero)
        );
        assert!(largest_real_root(&IntPoly::from_descending(&[1, 0, 0, 0, 1])).is_err());
    }

    #[test]
    fn residual_is_small_for_many_cubics() {
        let mut state = 99u64;
        for _ in 0..2000 {
            let mut next = || {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                ((state >> 54) as i128) - 512
            };
            let p = IntPoly::from_descending(&[1 + next().abs(), next(), next(), next()]);
            let r = largest_real_root(&p).unwrap();
            assert!(p.eval_f64(r).abs() <= 1e-9 * (1.0 + p.l1_norm()) * (1.0 + r.abs()).powi(3));
            // no sign change to the right of the returned root
            assert!(p.eval_f64(r + 1e-6 * (1.0 + r.abs())) >= 0.0);
        }
    }
}
