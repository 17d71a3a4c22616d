//! The standard compactly supported bump and its derivatives.
//!
//! `b(u) = exp(-1/(1-u^2))` on `(-1, 1)`, zero outside. Derivatives stay in
//! the form `b^{(k)}(u) = b(u) * N_k(u) / (1-u^2)^{2k}` with `N_k` a
//! polynomial generated by the recurrence
//! `N_{k+1} = -2u N_k + (1-u^2)^2 N_k' + 4k u (1-u^2) N_k`, `N_1 = -2u`.
//! Evaluating through the polynomial keeps every derivative smooth and
//! exactly zero outside the support, with no finite differencing anywhere.

/// Dense polynomial in ascending powers of `u`.
type Poly = Vec<f64>;

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_derivative(a: &Poly) -> Poly {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| i as f64 * c)
        .collect()
}

fn poly_eval(a: &Poly, u: f64) -> f64 {
    a.iter().rev().fold(0.0, |acc, &c| acc * u + c)
}

/// Evaluator for `b^{(order)}`; `order = 0` is the bump itself.
#[derive(Clone, Debug)]
pub struct BumpDerivative {
    order: usize,
    numerator: Poly, // N_order (empty polynomial means the constant 1)
}

impl BumpDerivative {
    pub fn new(order: usize) -> Self {
        let mut n_k: Poly = vec![1.0];
        // (1-u^2) and its square, reused across recurrence steps.
        let one_minus = vec![1.0, 0.0, -1.0];
        let one_minus_sq = poly_mul(&one_minus, &one_minus);
        for k in 0..order {
            let term1 = poly_mul(&vec![0.0, -2.0], &n_k);
            let term2 = poly_mul(&one_minus_sq, &poly_derivative(&n_k));
            let term3 = poly_mul(
                &poly_mul(&vec![0.0, 4.0 * k as f64], &one_minus),
                &n_k,
            );
            n_k = poly_add(&poly_add(&term1, &term2), &term3);
        }
        Self {
            order,
            numerator: n_k,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `b^{(order)}(u)`; exactly `0.0` for `|u| >= 1` and deep in the tail
    /// where the exponential underflows.
    pub fn eval(&self, u: f64) -> f64 {
        let t = 1.0 - u * u;
        if t <= 0.0 {
            return 0.0;
        }
        let inv = 1.0 / t;
        // exp underflows to zero before inv^(2k) can overflow; cut early so
        // the product can never form 0 * inf.
        if inv > 700.0 {
            return 0.0;
        }
        let b = (-inv).exp();
        let denom = inv.powi(2 * self.order as i32);
        b * poly_eval(&self.numerator, u) * denom
    }
}
