//! Global adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

use crate::error::{contract, numerical};
use crate::Result;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let q = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x < 1.0;
        if !ok(self.rel_tol) || !ok(self.abs_tol) {
            return contract("quadrature tolerances must lie in (0, 1)");
        }
        if self.max_subdivisions == 0 || self.max_subdivisions > 1_000_000 {
            return contract("max_subdivisions must lie in 1..=10^6");
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-300,
            max_subdivisions: 4000,
        }
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut finite = fc.is_finite();
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        finite &= s.is_finite();
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    if !finite {
        return numerical(format!("non-finite integrand on [{a}, {b}]"));
    }
    Ok(Piece {
        a,
        b,
        value: k * h,
        err: ((k - g) * h).abs(),
    })
}

/// Integrates `f` over [a, b]; returns (value, error estimate).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: &QuadratureSpec) -> Result<(f64, f64)> {
    q.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return contract("integration limits must be finite");
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut heap = BinaryHeap::new();
    let first = gk15(&f, a, b)?;
    let (mut total, mut err) = (first.value, first.err);
    heap.push(first);
    let mut pieces = 1usize;
    loop {
        if err <= q.abs_tol.max(q.rel_tol * total.abs()) {
            return Ok((total, err));
        }
        if pieces >= q.max_subdivisions {
            return numerical(format!(
                "quadrature on [{a}, {b}] did not converge in {pieces} subdivisions (err {err:e}, value {total:e})"
            ));
        }
        let worst = heap.pop().expect("heap never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval at machine resolution; accept what we have
            return Ok((total, err));
        }
        let l = gk15(&f, worst.a, m)?;
        let r = gk15(&f, m, worst.b)?;
        total += l.value + r.value - worst.value;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        pieces += 1;
        if pieces.is_multiple_of(64) {
            // refresh sums to keep rounding drift out of the stopping test
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.err).sum();
        }
    }
}
