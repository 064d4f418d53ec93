//! Cancellation-safe elementary functions used by the estimates and kernels.
//!
//! Each function switches to a truncated Taylor series where the direct
//! formula would subtract nearly equal quantities.

const SERIES_CUT: f64 = 0.1;

fn horner(x: f64, c: &[f64]) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// sinh(y) - y.
pub fn sinh_minus_id(y: f64) -> f64 {
    if y.abs() < 1.0 {
        // y^3/3! + y^5/5! + ... to y^17
        let y2 = y * y;
        let mut term = y * y2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        for _ in 0..8 {
            term *= y2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        y.sinh() - y
    }
}

/// e^y - y - 1.
pub fn expm1_minus_id(y: f64) -> f64 {
    if y.abs() < 0.5 {
        let mut term = y * y / 2.0;
        let mut sum = term;
        for k in 3..20 {
            term *= y / k as f64;
            sum += term;
        }
        sum
    } else {
        y.exp_m1() - y
    }
}

/// ln((e^y - y - 1) / (y^2/2)) for y >= 0; zero at the origin.
pub fn ln_expm1_minus_id_ratio(y: f64) -> f64 {
    debug_assert!(y >= 0.0);
    if y < SERIES_CUT {
        // ratio = 1 + sum_{j>=1} 2 y^j / (j+2)!
        let mut term = 2.0 / 6.0 * y;
        let mut sum = term;
        for j in 2..12 {
            term *= y / (j + 2) as f64;
            sum += term;
        }
        sum.ln_1p()
    } else if y > 30.0 {
        y + (-(1.0 + y) * (-y).exp()).ln_1p() - (0.5 * y * y).ln()
    } else {
        expm1_minus_id(y).ln() - (0.5 * y * y).ln()
    }
}

/// x coth x - 1, even, zero at the origin.
pub fn x_coth_minus_one(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUT {
        let x2 = x * x;
        x2 * horner(
            x2,
            &[1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0, 2.0 / 93555.0],
        )
    } else {
        x / x.tanh() - 1.0
    }
}

/// (x coth x - 1) / x^2, finite at the origin (1/3).
pub fn x_coth_minus_one_over_sq(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUT {
        horner(
            x * x,
            &[1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0, 2.0 / 93555.0],
        )
    } else {
        x_coth_minus_one(x) / (x * x)
    }
}

/// (x coth x - 1) / x, odd, zero at the origin.
pub fn x_coth_minus_one_over_x(x: f64) -> f64 {
    x * x_coth_minus_one_over_sq(x)
}

/// csch^2 x - 1/x^2, finite at the origin (-1/3).
pub fn csch_sq_minus_inv_sq(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUT {
        horner(
            x * x,
            &[
                -1.0 / 3.0,
                1.0 / 15.0,
                -2.0 / 189.0,
                1.0 / 675.0,
                -2.0 / 10395.0,
                1382.0 / 58046625.0,
            ],
        )
    } else if x > 300.0 {
        -1.0 / (x * x)
    } else {
        let s = x.sinh();
        1.0 / (s * s) - 1.0 / (x * x)
    }
}

pub fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// ln(sinh(x)/x), even.
pub fn ln_sinhc(x: f64) -> f64 {
    let x = x.abs();
    if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - x.ln()
    } else if x == 0.0 {
        0.0
    } else {
        (sinh_minus_id(x) / x).ln_1p()
    }
}

/// ln(sinh x) for x > 0 without overflow.
pub fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    }
}

/// asinh(q)/q, even, 1 at the origin.
pub fn asinh_ratio(q: f64) -> f64 {
    let q = q.abs();
    if q < 0.05 {
        horner(
            q * q,
            &[
                1.0,
                -1.0 / 6.0,
                3.0 / 40.0,
                -5.0 / 112.0,
                35.0 / 1152.0,
                -63.0 / 2816.0,
            ],
        )
    } else {
        q.asinh() / q
    }
}

/// 1 - asinh(q)/q.
pub fn one_minus_asinh_ratio(q: f64) -> f64 {
    let q = q.abs();
    if q < 0.05 {
        let q2 = q * q;
        q2 * horner(
            q2,
            &[1.0 / 6.0, -3.0 / 40.0, 5.0 / 112.0, -35.0 / 1152.0, 63.0 / 2816.0],
        )
    } else {
        1.0 - q.asinh() / q
    }
}

/// (sinh x cosh x - x) / sinh^2 x, i.e. alpha - 1 for the nonlinear pair.
pub fn alpha_minus_one(x: f64) -> f64 {
    if x > 20.0 {
        let e = (-2.0 * x).exp();
        // coth x - x csch^2 x
        (1.0 + e) / (1.0 - e) - 4.0 * x * e / ((1.0 - e) * (1.0 - e))
    } else {
        let s = x.sinh();
        0.5 * sinh_minus_id(2.0 * x) / (s * s)
    }
}
