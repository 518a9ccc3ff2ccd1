//! Jackson q-calculus on the truncated lattice x_j = q^{-2j}, j = 0..J:
//! derivative, integral, L2 inner product, the radial operator
//! box = D x (q^{-1}x - 1) D, and the discrete Wronskian.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qspecial::{CompensatedSum, Deformation};

/// The geometric lattice q^{-2j}, j = 0..=J. Points are generated by repeated
/// multiplication so that x_{j+1} = q^{-2} x_j holds exactly in f64.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    q: f64,
    points: Vec<f64>,
}

impl Lattice {
    pub fn new(deformation: &Deformation, j_max: usize) -> Self {
        let q = deformation.q();
        let ratio = 1.0 / (q * q);
        let mut points = Vec::with_capacity(j_max + 1);
        let mut x = 1.0;
        for _ in 0..=j_max {
            points.push(x);
            x *= ratio;
        }
        Self { q, points }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Largest index J.
    pub fn j_max(&self) -> usize {
        self.points.len() - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point(&self, j: usize) -> Result<f64> {
        self.points
            .get(j)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: j, max: self.j_max() })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    /// Integration weight w_j = (1 - q^2) q^{-2j}; equals the gap x_j - x_{j-1}
    /// for j >= 1.
    pub fn weight(&self, j: usize) -> f64 {
        (1.0 - self.q * self.q) * self.points[j]
    }
}

/// Complex values on a lattice, one per index.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    lattice: Arc<Lattice>,
    values: Vec<Complex64>,
}

/// One serialized sample: index, abscissa, value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LatticeSample {
    pub j: usize,
    pub x: f64,
    pub re: f64,
    pub im: f64,
}

impl LatticeFunction {
    pub fn new(lattice: Arc<Lattice>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != lattice.len() {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { lattice, values })
    }

    pub fn from_fn(
        lattice: Arc<Lattice>,
        mut f: impl FnMut(usize, f64) -> Complex64,
    ) -> Self {
        let values = lattice
            .points()
            .iter()
            .enumerate()
            .map(|(j, &x)| f(j, x))
            .collect();
        Self { lattice, values }
    }

    pub fn zero(lattice: Arc<Lattice>) -> Self {
        let n = lattice.len();
        Self { lattice, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    /// The indicator of j = 0.
    pub fn delta_at_origin(lattice: Arc<Lattice>) -> Self {
        let mut f = Self::zero(lattice);
        f.values[0] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, j: usize) -> Result<Complex64> {
        self.values
            .get(j)
            .copied()
            .ok_or(Error::IndexOutOfRange { index: j, max: self.lattice.j_max() })
    }

    /// Restriction to the sublattice 0..=j_max.
    pub fn restrict(&self, j_max: usize) -> Result<Self> {
        if j_max > self.lattice.j_max() {
            return Err(Error::IndexOutOfRange { index: j_max, max: self.lattice.j_max() });
        }
        let sub = Arc::new(Lattice {
            q: self.lattice.q,
            points: self.lattice.points[..=j_max].to_vec(),
        });
        Ok(Self { lattice: sub, values: self.values[..=j_max].to_vec() })
    }

    /// Largest index carrying a nonzero value, if any.
    pub fn support_max(&self) -> Option<usize> {
        self.values
            .iter()
            .rposition(|v| *v != Complex64::new(0.0, 0.0))
    }

    pub fn samples(&self) -> Vec<LatticeSample> {
        self.values
            .iter()
            .enumerate()
            .map(|(j, v)| LatticeSample { j, x: self.lattice.points[j], re: v.re, im: v.im })
            .collect()
    }

    fn same_lattice(&self, other: &Self) -> Result<()> {
        if self.lattice.q != other.lattice.q || self.lattice.points != other.lattice.points {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }
}

/// Jackson derivative (Df)(x) = (f(q^{-1}x) - f(qx))/((q^{-1} - q) x) of a
/// pointwise-evaluable function.
pub fn jackson_derivative(
    f: impl Fn(f64) -> Complex64,
    x: f64,
    deformation: &Deformation,
) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::EvaluationOutOfDomain { x });
    }
    let q = deformation.q();
    Ok((f(x / q) - f(q * x)) / ((1.0 / q - q) * x))
}

/// Defect of the q-Leibniz rule at x:
/// D(uv)(x) - [(Du)(x) v(q^{-1}x) + u(qx)(Dv)(x)]; zero to rounding for any
/// u, v.
pub fn q_leibniz_defect(
    u: impl Fn(f64) -> Complex64,
    v: impl Fn(f64) -> Complex64,
    x: f64,
    deformation: &Deformation,
) -> Result<Complex64> {
    let q = deformation.q();
    let prod = |t: f64| u(t) * v(t);
    let lhs = jackson_derivative(prod, x, deformation)?;
    let du = jackson_derivative(&u, x, deformation)?;
    let dv = jackson_derivative(&v, x, deformation)?;
    Ok(lhs - (du * v(x / q) + u(q * x) * dv))
}

/// The radial operator box = D x (q^{-1}x - 1) D as a lattice difference
/// operator. Row j needs the value at j+1, so the output lives on the lattice
/// truncated at J-1; the j = 0 row is natural (its lower coefficient carries
/// the factor x_0 - 1 = 0).
pub fn apply_radial_laplacian(f: &LatticeFunction) -> Result<LatticeFunction> {
    let lat = f.lattice();
    let j_top = lat.j_max();
    if j_top < 2 {
        return Err(Error::LatticeTooSmall { j_max: j_top, need: 2 });
    }
    let q = lat.q();
    let qinv2 = 1.0 / (q * q);
    let x = lat.points();
    let v = f.values();
    let mut out = Vec::with_capacity(j_top);
    for j in 0..j_top {
        let xj = x[j];
        let upper = xj / q * (qinv2 * xj - 1.0) * (v[j + 1] - v[j]) / (x[j + 1] - xj);
        let lower = if j == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            q * xj * (xj - 1.0) * (v[j] - v[j - 1]) / (xj - x[j - 1])
        };
        out.push((upper - lower) / ((1.0 / q - q) * xj));
    }
    let sub = Arc::new(Lattice { q, points: x[..j_top].to_vec() });
    LatticeFunction::new(sub, out)
}

/// Jackson integral over [1, infinity): sum_j w_j f(x_j), w_j = (1-q^2) q^{-2j}.
pub fn jackson_integral(f: &LatticeFunction) -> Complex64 {
    let mut acc = CompensatedSum::default();
    for (j, v) in f.values().iter().enumerate() {
        acc.add(f.lattice().weight(j) * v);
    }
    acc.value()
}

/// Weighted inner product (f, g) = sum_j w_j conj(g_j) f_j.
pub fn l2_inner(f: &LatticeFunction, g: &LatticeFunction) -> Result<Complex64> {
    f.same_lattice(g)?;
    let mut acc = CompensatedSum::default();
    for (j, (a, b)) in f.values().iter().zip(g.values()).enumerate() {
        acc.add(f.lattice().weight(j) * b.conj() * a);
    }
    Ok(acc.value())
}

/// L2 norm induced by `l2_inner`.
pub fn l2_norm(f: &LatticeFunction) -> f64 {
    l2_inner(f, f).expect("same lattice").re.max(0.0).sqrt()
}

/// Discrete Wronskian of two lattice functions at index j >= 1, evaluated at
/// x = x_{j-1}: x(q^{-2}x - 1)[ (Delta f) g(x) - f(x) (Delta g) ] with
/// Delta h = (h(q^{-2}x) - h(x))/(q^{-2}x - x). Constant in j when f and g
/// solve the same eigen-equation.
pub fn wronskian(f: &LatticeFunction, g: &LatticeFunction, j: usize) -> Result<Complex64> {
    f.same_lattice(g)?;
    let j_top = f.lattice().j_max();
    if j < 1 || j > j_top {
        return Err(Error::IndexOutOfRange { index: j, max: j_top });
    }
    let x = f.lattice().point(j - 1)?;
    let xn = f.lattice().point(j)?;
    let gap = xn - x;
    let df = (f.value(j)? - f.value(j - 1)?) / gap;
    let dg = (g.value(j)? - g.value(j - 1)?) / gap;
    Ok(x * (xn - 1.0) * (df * g.value(j - 1)? - f.value(j - 1)? * dg))
}
