//! q-special functions: q-Pochhammer symbols, q-Gamma, q-brackets, basic
//! hypergeometric series and the Harish-Chandra c-function.
//!
//! All series are summed in ascending index order with compensated
//! accumulation, so repeated evaluation at identical inputs is bit-identical.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Threshold below which a denominator q-Pochhammer factor counts as a zero.
pub(crate) const POLE_EPS: f64 = 1e-9;

/// The deformation parameter q in (0,1) together with h = -2 ln q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deformation {
    q: f64,
    h: f64,
}

impl Deformation {
    /// Default margin keeping q away from the classical limit q = 1.
    pub const DEFAULT_MARGIN: f64 = 1e-6;

    pub fn new(q: f64) -> Result<Self> {
        Self::with_margin(q, Self::DEFAULT_MARGIN)
    }

    /// Construct with an explicit exclusion margin: q must lie in (0, 1 - margin).
    pub fn with_margin(q: f64, margin: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q >= 1.0 - margin {
            return Err(Error::ConfigError(format!(
                "deformation parameter must satisfy 0 < q < {}, got {q}",
                1.0 - margin
            )));
        }
        Ok(Self { q, h: -2.0 * q.ln() })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// h = -2 ln q, the period scale of the spectral parameter.
    pub fn h(&self) -> f64 {
        self.h
    }
}

/// Truncation control for infinite sums and products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerance {
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-14, max_terms: 10_000 }
    }
}

impl SeriesTolerance {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol >= 0.0) || max_terms == 0 {
            return Err(Error::ConfigError(format!(
                "tolerance needs abs_tol >= 0 and max_terms > 0, got {abs_tol}, {max_terms}"
            )));
        }
        Ok(Self { abs_tol, max_terms })
    }
}

/// Kahan-compensated complex accumulator; keeps summation order deterministic
/// while bounding per-term rounding.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: Complex64) {
        let y = v - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> Complex64 {
        self.sum
    }
}

/// q^z for complex z, principal branch (q real positive).
pub(crate) fn qpow(q: f64, z: Complex64) -> Complex64 {
    (z * q.ln()).exp()
}

/// x^l for real x > 0 and complex l, principal branch.
pub(crate) fn cpow(x: f64, l: Complex64) -> Complex64 {
    (l * x.ln()).exp()
}

/// Finite q-Pochhammer symbol (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k).
pub fn qpochhammer_finite(a: Complex64, q: f64, n: usize) -> Complex64 {
    let mut p = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..n {
        p *= Complex64::new(1.0, 0.0) - aq;
        aq *= q;
    }
    p
}

/// Infinite q-Pochhammer symbol (a;q)_infty, truncated once |a| q^k drops
/// below the absolute tolerance.
pub fn qpochhammer_infinite(a: Complex64, q: f64, tol: &SeriesTolerance) -> Result<Complex64> {
    let mut p = Complex64::new(1.0, 0.0);
    let mut aq = a;
    for _ in 0..tol.max_terms {
        if aq.norm() < tol.abs_tol {
            return Ok(p);
        }
        p *= Complex64::new(1.0, 0.0) - aq;
        if p == Complex64::new(0.0, 0.0) {
            return Ok(p);
        }
        aq *= q;
    }
    Err(Error::NonConvergence { max_terms: tol.max_terms })
}

/// Gamma_{q2}(z) = (q2;q2)_infty (1-q2)^{1-z} / (q2^z;q2)_infty, base q2 = q^2.
pub fn qgamma(z: Complex64, qsq: f64, tol: &SeriesTolerance) -> Result<Complex64> {
    let denom = qpochhammer_infinite(qpow(qsq, z), qsq, tol)?;
    if denom.norm() < POLE_EPS {
        return Err(Error::PoleOfGamma);
    }
    let num = qpochhammer_infinite(Complex64::new(qsq, 0.0), qsq, tol)?;
    let pw = cpow(1.0 - qsq, Complex64::new(1.0, 0.0) - z);
    Ok(num * pw / denom)
}

/// q-bracket [a]_q = (q^{-a} - q^a)/(q^{-1} - q).
pub fn qbracket(a: Complex64, q: f64) -> Complex64 {
    (qpow(q, -a) - qpow(q, a)) / (1.0 / q - q)
}

/// The series 1Phi0(a;-;q,t) = sum_k (a;q)_k/(q;q)_k t^k, |t| < 1.
pub fn phi_1_0(a: Complex64, q: f64, t: Complex64, tol: &SeriesTolerance) -> Result<Complex64> {
    if t.norm() >= 1.0 {
        return Err(Error::EvaluationOutOfDomain { x: t.norm() });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut acc = CompensatedSum::default();
    let mut term = one;
    let mut qk = 1.0;
    for k in 0..tol.max_terms {
        acc.add(term);
        let num = one - a * qk;
        if num == Complex64::new(0.0, 0.0) {
            return Ok(acc.value());
        }
        term *= num / (1.0 - q * qk) * t;
        qk *= q;
        if term.norm() < tol.abs_tol && k > 0 {
            acc.add(term);
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { max_terms: tol.max_terms })
}

/// The series 2Phi1(a,b;c;q,t) = sum_k (a;q)_k (b;q)_k / ((c;q)_k (q;q)_k) t^k.
///
/// Terminates exactly when an upper-parameter factor vanishes; raises
/// `SingularParameter` when a lower-parameter factor vanishes first.
pub fn phi_2_1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    q: f64,
    t: Complex64,
    tol: &SeriesTolerance,
) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = CompensatedSum::default();
    let mut term = one;
    let mut qk = 1.0;
    for k in 0..tol.max_terms {
        acc.add(term);
        let num = (one - a * qk) * (one - b * qk);
        if num == zero {
            return Ok(acc.value());
        }
        let cf = one - c * qk;
        if cf.norm() < POLE_EPS {
            return Err(Error::SingularParameter { dist: cf.norm() });
        }
        term *= num / (cf * (1.0 - q * qk)) * t;
        qk *= q;
        if term.norm() < tol.abs_tol && k > 0 {
            acc.add(term);
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { max_terms: tol.max_terms })
}

/// Index j with x = q^{-2j}, or `NotOnLattice`.
pub fn lattice_index(x: f64, q: f64) -> Result<usize> {
    if !(x > 0.0) {
        return Err(Error::NotOnLattice { x });
    }
    let jf = x.ln() / (-2.0 * q.ln());
    let j = jf.round();
    if j < -0.5 {
        return Err(Error::NotOnLattice { x });
    }
    let j = j as usize;
    let xj = q.powi(-2 * j as i32);
    if ((x - xj) / xj).abs() > 1e-12 {
        return Err(Error::NotOnLattice { x });
    }
    Ok(j)
}

/// The terminating series 3Phi2[x, q^{-2l}, q^{2(l+1)}; q^2, 0; q^2, q^2]
/// at a lattice point x = q^{-2j}.
///
/// The value is obtained by the three-term recurrence in j that the series
/// satisfies (the radial eigenvalue equation seeded by the value 1 at x = 1).
/// The recurrence computes the same finite quantity as the j+1-term sum but
/// stays stable: the direct sum passes through terms of size q^{-j^2} and
/// loses all significance in double precision beyond j ~ 7.
pub fn phi_3_2_terminating(x_lat: f64, l: Complex64, q: f64) -> Result<Complex64> {
    let j = lattice_index(x_lat, q)?;
    Ok(phi_3_2_sequence(j, l, q)[j])
}

/// Values of the terminating 3Phi2 at x = q^{-2i} for i = 0..=j_max,
/// in one pass of the recurrence.
pub fn phi_3_2_sequence(j_max: usize, l: Complex64, q: f64) -> Vec<Complex64> {
    let lambda = SpectralParameter::raw_lambda(l, q);
    let qinv2 = 1.0 / (q * q);
    let mut vals = Vec::with_capacity(j_max + 1);
    vals.push(Complex64::new(1.0, 0.0));
    let mut x = 1.0_f64;
    for j in 0..j_max {
        // row j of D x (q^{-1}x - 1) D f = lambda f determines f_{j+1}
        let a = (qinv2 * x - 1.0) / (q * (qinv2 - 1.0));
        let d = (1.0 / q - q) * x;
        let mut t = lambda * vals[j] * d;
        if j >= 1 {
            let b = q * (x - 1.0) / (1.0 - q * q);
            t += b * (vals[j] - vals[j - 1]);
        }
        let next = vals[j] + t / a;
        vals.push(next);
        x *= qinv2;
    }
    vals
}

/// The q-analogue of the Harish-Chandra c-function,
/// c(l) = (q^{2(l+1)};q^2)_infty^2 / ((q^{2(2l+1)};q^2)_infty (q^2;q^2)_infty).
///
/// Both the product form and the Gamma_{q2}-quotient form are evaluated and
/// must agree; the product form is returned.
pub fn cfunc(l: Complex64, q: f64, tol: &SeriesTolerance) -> Result<Complex64> {
    let qsq = q * q;
    let two = Complex64::new(2.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let denom_prod = qpochhammer_infinite(qpow(qsq, two * l + one), qsq, tol)?;
    if denom_prod.norm() < POLE_EPS {
        return Err(Error::PoleOfC);
    }
    let num = qpochhammer_infinite(qpow(qsq, l + one), qsq, tol)?;
    let base = qpochhammer_infinite(Complex64::new(qsq, 0.0), qsq, tol)?;
    let product_form = num * num / (denom_prod * base);

    let gamma_form = match (qgamma(two * l + one, qsq, tol), qgamma(l + one, qsq, tol)) {
        (Ok(gn), Ok(gd)) if gd.norm() > POLE_EPS => Some(gn / (gd * gd)),
        _ => None,
    };
    if let Some(g) = gamma_form {
        let scale = 1.0 + product_form.norm();
        if (g - product_form).norm() > 100.0 * tol.abs_tol.max(1e-14) * scale {
            return Err(Error::InternalInconsistency(format!(
                "c-function forms disagree: product {product_form}, gamma quotient {g}"
            )));
        }
    }
    Ok(product_form)
}

/// 1/c(l); entire along the critical line, vanishing where c has poles.
pub fn inv_cfunc(l: Complex64, q: f64, tol: &SeriesTolerance) -> Result<Complex64> {
    let qsq = q * q;
    let two = Complex64::new(2.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let num = qpochhammer_infinite(qpow(qsq, two * l + one), qsq, tol)?
        * qpochhammer_infinite(Complex64::new(qsq, 0.0), qsq, tol)?;
    let den = qpochhammer_infinite(qpow(qsq, l + one), qsq, tol)?;
    if den.norm() < POLE_EPS {
        return Err(Error::PoleOfC);
    }
    Ok(num / (den * den))
}

/// A point l of the spectral plane together with its eigenvalue data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    l: Complex64,
    q: f64,
}

impl SpectralParameter {
    pub fn new(l: Complex64, deformation: &Deformation) -> Self {
        Self { l, q: deformation.q() }
    }

    pub fn l(&self) -> Complex64 {
        self.l
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// lambda(l) = -(1 - q^{-2l})(1 - q^{2l+2})/(1 - q^2)^2, symmetric under
    /// l -> -1-l.
    pub fn lambda(&self) -> Complex64 {
        Self::raw_lambda(self.l, self.q)
    }

    pub(crate) fn raw_lambda(l: Complex64, q: f64) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let d = 1.0 - q * q;
        -(one - qpow(q, -2.0 * l)) * (one - qpow(q, 2.0 * l + 2.0)) / (d * d)
    }

    /// Lambda(l) = (q^{-l} - q^l)(q^{-(l+1)} - q^{l+1})/(q^{-1} - q)^2,
    /// the Casimir eigenvalue; equals q * lambda(l).
    pub fn capital_lambda(&self) -> Complex64 {
        let (l, q) = (self.l, self.q);
        let d = 1.0 / q - q;
        (qpow(q, -l) - qpow(q, l)) * (qpow(q, -(l + 1.0)) - qpow(q, l + 1.0)) / (d * d)
    }

    /// Distance from l to the singular set: the half-integer points n/2 on the
    /// real axis and the grid {n/2 + i pi m / h : n >= 0, m integer} where
    /// q^{-4l} hits q^{-2Z+}.
    pub fn distance_to_singular_set(&self) -> f64 {
        let h = -2.0 * self.q.ln();
        let re = self.l.re;
        let im = self.l.im;
        // nearest real half-integer
        let n_half = (2.0 * re).round() / 2.0;
        let d_real_axis = ((re - n_half).powi(2) + im * im).sqrt();
        // nearest point of {n/2 + i pi m / h, n >= 0}
        let n_grid = (2.0 * re).round().max(0.0) / 2.0;
        let m_grid = (im * h / std::f64::consts::PI).round();
        let d_grid = ((re - n_grid).powi(2)
            + (im - m_grid * std::f64::consts::PI / h).powi(2))
        .sqrt();
        d_real_axis.min(d_grid)
    }
}
