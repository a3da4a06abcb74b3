//! Shared oracle helpers for the integration tests: adaptive quadrature and
//! a small deterministic uniform generator, independent of the library's
//! numerical routines.
#![allow(dead_code)]

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth > 60 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, left, 0.5 * tol, depth + 1)
                + recurse(f, m, b, right, 0.5 * tol, depth + 1)
        }
    }
    recurse(&f, a, b, simpson(&f, a, b), tol, 0)
}

/// Integrate `f` over `(a, ∞)` by mapping tail segments until they stop
/// contributing.
pub fn integrate_to_infinity<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut span = 1.0f64.max(a);
    for _ in 0..200 {
        let hi = lo + span;
        let piece = adaptive_simpson(f, lo, hi, tol * 0.01);
        total += piece;
        if piece.abs() < tol * 0.01 && span > 8.0 {
            break;
        }
        lo = hi;
        span *= 2.0;
    }
    total
}

/// Deterministic LCG uniform in (0,1) for test point generation.
pub struct TestUniform {
    state: u64,
}

impl TestUniform {
    pub fn new(seed: u64) -> Self {
        TestUniform { state: seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1) }
    }

    pub fn next(&mut self) -> f64 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.state >> 11) as f64 + 0.5) / ((1u64 << 53) as f64)
    }

    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next()
    }
}

/// Median of a slice (panics on empty).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
