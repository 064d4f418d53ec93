use super::{alpha_phi, Variant};
use crate::special::coth;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TechnicalValues {
    /// 4(alpha-1) phi - n alpha^2 (2 coth x - 1/(cosh x sinh x)) at k = 1; claimed <= 0.
    pub lemma23_value: f64,
    /// (e^(2x) - e^(-2x))(1 + 2x/3 + x^2/9) - 2x(1 + 4x/3 + 4x^2/9); claimed >= 0.
    pub i_value: f64,
}

/// The two terms of `lemma23_value`: (4(alpha-1)phi, n alpha^2 (...)).
pub fn lemma23_terms(x: f64, n: usize) -> (f64, f64) {
    let ap = alpha_phi(Variant::MainNonlinear, n, 1.0, x);
    let a = 4.0 * (ap.alpha - 1.0) * ap.phi;
    let b = n as f64 * ap.alpha * ap.alpha * (2.0 * coth(x) - 2.0 / (2.0 * x).sinh());
    (a, b)
}

pub fn technical_inequalities(x: f64, n: usize) -> TechnicalValues {
    let (a, b) = lemma23_terms(x, n);
    let i_value = 2.0 * (2.0 * x).sinh() * (1.0 + 2.0 * x / 3.0 + x * x / 9.0)
        - 2.0 * x * (1.0 + 4.0 * x / 3.0 + 4.0 * x * x / 9.0);
    TechnicalValues {
        lemma23_value: a - b,
        i_value,
    }
}
