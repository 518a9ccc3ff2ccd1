//! The principal-series action of the quantized enveloping algebra of sl2 on
//! boundary Laurent polynomials, realized by q-difference operators, with the
//! Casimir acting as the scalar Lambda(l).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qspecial::{qbracket, qpow, Deformation};

/// Laurent polynomial in z with complex coefficients, canonical form (no
/// stored zeros).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaurentPolynomial {
    terms: BTreeMap<i64, Complex64>,
}

/// One serialized term: coefficient of z^m.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LaurentTerm {
    pub m: i64,
    pub re: f64,
    pub im: f64,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: i64, coeff: Complex64) -> Self {
        let mut p = Self::default();
        p.add_term(m, coeff);
        p
    }

    pub fn one() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    pub fn add_term(&mut self, m: i64, coeff: Complex64) {
        if coeff == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(m).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(&m);
        }
    }

    pub fn coeff(&self, m: i64) -> Complex64 {
        self.terms.get(&m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.terms.iter().map(|(&m, &c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut p = Self::default();
        for (m, c) in self.terms() {
            p.add_term(m, a * c);
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (m, c) in other.terms() {
            p.add_term(m, c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Map each monomial z^m to weight(m) * z^{m + shift}.
    fn map_monomials(&self, shift: i64, weight: impl Fn(i64) -> Complex64) -> Self {
        let mut p = Self::default();
        for (m, c) in self.terms() {
            p.add_term(m + shift, weight(m) * c);
        }
        p
    }

    pub fn to_terms(&self) -> Vec<LaurentTerm> {
        self.terms()
            .map(|(m, c)| LaurentTerm { m, re: c.re, im: c.im })
            .collect()
    }

    pub fn from_terms(terms: &[LaurentTerm]) -> Self {
        let mut p = Self::default();
        for t in terms {
            p.add_term(t.m, Complex64::new(t.re, t.im));
        }
        p
    }
}

/// The weight-l module structure on Laurent polynomials.
#[derive(Debug, Clone, Copy)]
pub struct ModuleWeight {
    l: Complex64,
    q: f64,
}

impl ModuleWeight {
    pub fn new(l: Complex64, deformation: &Deformation) -> Self {
        Self { l, q: deformation.q() }
    }

    pub fn l(&self) -> Complex64 {
        self.l
    }

    /// H z^m = 2m z^m.
    pub fn act_h(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        f.map_monomials(0, |m| Complex64::new(2.0 * m as f64, 0.0))
    }

    /// K = q^H: z^m -> q^{2m} z^m.
    pub fn act_k(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let q = self.q;
        f.map_monomials(0, |m| Complex64::new(q.powi(2 * m as i32), 0.0))
    }

    /// K^{-1}: z^m -> q^{-2m} z^m.
    pub fn act_k_inv(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let q = self.q;
        f.map_monomials(0, |m| Complex64::new(q.powi(-2 * m as i32), 0.0))
    }

    /// Raising generator, closed form on monomials:
    /// X+ z^m = A_m z^{m+1}, A_m = q^{-1/2}(q^{m-2l} - q^{-m})/(q^{-1} - q).
    pub fn act_xplus(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let (l, q) = (self.l, self.q);
        let d = 1.0 / q - q;
        f.map_monomials(1, |m| {
            q.powf(-0.5) * (qpow(q, Complex64::new(m as f64, 0.0) - 2.0 * l) - q.powi(-m as i32))
                / d
        })
    }

    /// Lowering generator, closed form on monomials:
    /// X- z^m = B_m z^{m-1}, B_m = q^{1/2}(q^{-m} - q^{m+2l})/(q^{-1} - q).
    pub fn act_xminus(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let (l, q) = (self.l, self.q);
        let d = 1.0 / q - q;
        f.map_monomials(-1, |m| {
            q.powf(0.5) * (q.powi(-m as i32) - qpow(q, Complex64::new(m as f64, 0.0) + 2.0 * l))
                / d
        })
    }

    /// X+ as a q-difference operator:
    /// -q^{-1/2} z^2 (Df)(z) + q^{-3/2} (q^{-2l} - 1)/(q^{-2} - 1) z f(qz),
    /// with D the symmetric q-derivative acting by D z^m = [m]_q z^{m-1}.
    pub fn act_xplus_operator(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let (l, q) = (self.l, self.q);
        let deriv_part = f.map_monomials(1, |m| {
            -q.powf(-0.5) * qbracket(Complex64::new(m as f64, 0.0), q)
        });
        let mult = q.powf(-1.5) * (qpow(q, -2.0 * l) - 1.0) / (1.0 / (q * q) - 1.0);
        let shift_part = f.map_monomials(1, |m| mult * q.powi(m as i32));
        deriv_part.add(&shift_part)
    }

    /// X- as a q-difference operator:
    /// q^{1/2} (Df)(z) + q^{3/2} (1 - q^{2l})/(1 - q^2) z^{-1} f(qz).
    pub fn act_xminus_operator(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let (l, q) = (self.l, self.q);
        let deriv_part = f.map_monomials(-1, |m| {
            q.powf(0.5) * qbracket(Complex64::new(m as f64, 0.0), q)
        });
        let mult = q.powf(1.5) * (Complex64::new(1.0, 0.0) - qpow(q, 2.0 * l)) / (1.0 - q * q);
        let shift_part = f.map_monomials(-1, |m| mult * q.powi(m as i32));
        deriv_part.add(&shift_part)
    }

    /// Casimir Omega = X- X+ + (q^{H+1} + q^{-H-1} - q - q^{-1})/(q^{-1} - q)^2;
    /// acts as the scalar Lambda(l) on the whole module.
    pub fn casimir(&self, f: &LaurentPolynomial) -> LaurentPolynomial {
        let q = self.q;
        let d = 1.0 / q - q;
        let xx = self.act_xminus(&self.act_xplus(f));
        let hpart = f.map_monomials(0, |m| {
            let e = 2 * m as i32;
            Complex64::new((q.powi(e + 1) + q.powi(-e - 1) - q - 1.0 / q) / (d * d), 0.0)
        });
        xx.add(&hpart)
    }
}
