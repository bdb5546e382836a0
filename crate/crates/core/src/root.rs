//! Bracketed bisection for monotone functions on the positive half-line.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("no sign change found while expanding the bracket from {start:e}")]
    BracketNotFound { start: f64 },
    #[error("bisection did not reach relative tolerance {tol:e} in {iterations} iterations")]
    NoConvergence { tol: f64, iterations: usize },
}

/// Direction of a monotone function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    /// Stop once the bracket width is below `rel_tol` times its upper end.
    pub rel_tol: f64,
    pub max_iter: usize,
    /// Where the geometric bracket search begins.
    pub start: f64,
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection {
            rel_tol: 1e-12,
            max_iter: 200,
            start: 1.0,
        }
    }
}

// Doubling from 1.0 overflows f64 after ~1024 steps and halving underflows after ~1075.
const MAX_EXPANSIONS: usize = 1100;

impl Bisection {
    /// Finds the `x > 0` with `f(x) = target`, assuming `f` is monotone in the
    /// given direction on `(0, ∞)`.
    ///
    /// The bracket is grown geometrically from `start` (doubling up or halving
    /// down) until it straddles the target, then halved until its relative
    /// width drops below `rel_tol`.
    pub fn solve<F>(&self, f: F, target: f64, direction: Monotonicity) -> Result<f64, RootError>
    where
        F: Fn(f64) -> f64,
    {
        // g < 0 means "x is too small"
        let g = |x: f64| match direction {
            Monotonicity::Increasing => f(x) - target,
            Monotonicity::Decreasing => target - f(x),
        };

        let start = self.start;
        let g0 = g(start);
        if g0 == 0.0 {
            return Ok(start);
        }
        let (mut lo, mut hi) = if g0 < 0.0 {
            let mut lo = start;
            let mut hi = 2.0 * start;
            let mut n = 0;
            loop {
                let gh = g(hi);
                if gh == 0.0 {
                    return Ok(hi);
                }
                if gh > 0.0 {
                    break;
                }
                n += 1;
                if n > MAX_EXPANSIONS || !hi.is_finite() {
                    return Err(RootError::BracketNotFound { start });
                }
                lo = hi;
                hi *= 2.0;
            }
            (lo, hi)
        } else {
            let mut hi = start;
            let mut lo = 0.5 * start;
            let mut n = 0;
            loop {
                let gl = g(lo);
                if gl == 0.0 {
                    return Ok(lo);
                }
                if gl < 0.0 {
                    break;
                }
                n += 1;
                if n > MAX_EXPANSIONS || lo == 0.0 {
                    return Err(RootError::BracketNotFound { start });
                }
                hi = lo;
                lo *= 0.5;
            }
            (lo, hi)
        };

        for _ in 0..self.max_iter {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= self.rel_tol * hi || mid <= lo || mid >= hi {
                return Ok(mid);
            }
            let gm = g(mid);
            if gm == 0.0 {
                return Ok(mid);
            }
            if gm < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if hi - lo <= self.rel_tol * hi {
            Ok(0.5 * (lo + hi))
        } else {
            Err(RootError::NoConvergence {
                tol: self.rel_tol,
                iterations: self.max_iter,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let x = Bisection::default()
            .solve(|x| x * x * x, 27.0, Monotonicity::Increasing)
            .unwrap();
        assert!((x - 3.0).abs() < 1e-11);
    }

    #[test]
    fn decreasing_small_root() {
        let x = Bisection::default()
            .solve(|x| 1.0 / x, 1e6, Monotonicity::Decreasing)
            .unwrap();
        assert!((x - 1e-6).abs() / 1e-6 < 1e-11);
    }

    #[test]
    fn unreachable_target() {
        let r = Bisection::default().solve(|x: f64| x.atan(), 2.0, Monotonicity::Increasing);
        assert!(matches!(r, Err(RootError::BracketNotFound { .. })));
    }

    #[test]
    fn iteration_cap() {
        let b = Bisection {
            max_iter: 3,
            ..Bisection::default()
        };
        let r = b.solve(|x| x, 1.7, Monotonicity::Increasing);
        assert!(matches!(r, Err(RootError::NoConvergence { .. })));
    }
}
