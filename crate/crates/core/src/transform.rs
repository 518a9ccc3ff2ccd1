//! The spectral side: Plancherel density, forward and inverse transforms,
//! and the unitarity/diagonalization defects.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{apply_radial_laplacian, l2_inner, Lattice, LatticeFunction};
use crate::qspecial::{
    inv_cfunc, phi_3_2_sequence, CompensatedSum, Deformation, SeriesTolerance, SpectralParameter,
};

/// Uniform grid of N + 1 nodes rho_k on [0, pi/h] with composite-trapezoid
/// quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    deformation: Deformation,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralGrid {
    pub fn new(deformation: &Deformation, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ConfigError("spectral grid needs at least one panel".into()));
        }
        let top = std::f64::consts::PI / deformation.h();
        let step = top / n as f64;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut weights = Vec::with_capacity(n + 1);
        for k in 0..=n {
            nodes.push(if k == n { top } else { k as f64 * step });
            weights.push(if k == 0 || k == n { 0.5 * step } else { step });
        }
        Ok(Self { deformation: *deformation, nodes, weights })
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Complex values on a spectral grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    grid: Arc<SpectralGrid>,
    values: Vec<Complex64>,
}

/// One serialized spectral sample: node index, abscissa, value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SpectralSample {
    pub k: usize,
    pub rho: f64,
    pub re: f64,
    pub im: f64,
}

impl SpectralFunction {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self { grid, values })
    }

    pub fn zero(grid: Arc<SpectralGrid>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn samples(&self) -> Vec<SpectralSample> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| SpectralSample { k, rho: self.grid.nodes[k], re: v.re, im: v.im })
            .collect()
    }
}

/// Density of the spectral measure,
/// d sigma / d rho = (1/2 pi) (h/(1-q^2)) |1/c(-1/2 + i rho)|^2.
///
/// Evaluated through the reciprocal c-function, which is pole-free on the
/// line and vanishes where c blows up, so the endpoints contribute zero.
pub fn spectral_density(rho: f64, deformation: &Deformation, tol: &SeriesTolerance) -> Result<f64> {
    let q = deformation.q();
    let h = deformation.h();
    if !(0.0..=std::f64::consts::PI / h + 1e-12).contains(&rho) {
        return Err(Error::EvaluationOutOfDomain { x: rho });
    }
    let ic = inv_cfunc(Complex64::new(-0.5, rho), q, tol)?;
    Ok(h / (2.0 * std::f64::consts::PI * (1.0 - q * q)) * ic.norm_sqr())
}

/// Forward transform fhat(rho_k) = sum_j w_j Phi_{-1/2 + i rho_k}(x_j) f(x_j).
/// Each node value is a finite exact sum over the support of f.
pub fn forward(f: &LatticeFunction, grid: &Arc<SpectralGrid>) -> SpectralFunction {
    let q = grid.deformation().q();
    let support = f.support_max();
    let mut values = Vec::with_capacity(grid.len());
    for &rho in grid.nodes() {
        let l = Complex64::new(-0.5, rho);
        let v = match support {
            None => Complex64::new(0.0, 0.0),
            Some(s) => {
                let phi = phi_3_2_sequence(s, l, q);
                let mut acc = CompensatedSum::default();
                for j in 0..=s {
                    acc.add(f.lattice().weight(j) * phi[j] * f.values()[j]);
                }
                acc.value()
            }
        };
        values.push(v);
    }
    SpectralFunction { grid: grid.clone(), values }
}

/// Inverse (adjoint) transform
/// f(x_j) = sum_k tw_k Phi_{-1/2 + i rho_k}(x_j) fhat(rho_k) density(rho_k),
/// a trapezoid discretization of integration against d sigma.
pub fn inverse(
    fh: &SpectralFunction,
    lattice: &Arc<Lattice>,
    tol: &SeriesTolerance,
) -> Result<LatticeFunction> {
    let grid = fh.grid();
    if (grid.deformation().q() - lattice.q()).abs() > 0.0 {
        return Err(Error::LatticeMismatch);
    }
    let q = lattice.q();
    let j_top = lattice.j_max();
    let mut acc: Vec<CompensatedSum> = vec![CompensatedSum::default(); j_top + 1];
    for (k, &rho) in grid.nodes().iter().enumerate() {
        let coeff = grid.weights()[k] * spectral_density(rho, grid.deformation(), tol)?;
        if coeff == 0.0 && fh.values()[k] == Complex64::new(0.0, 0.0) {
            continue;
        }
        let l = Complex64::new(-0.5, rho);
        let phi = phi_3_2_sequence(j_top, l, q);
        let fv = coeff * fh.values()[k];
        for j in 0..=j_top {
            acc[j].add(phi[j] * fv);
        }
    }
    LatticeFunction::new(lattice.clone(), acc.into_iter().map(|a| a.value()).collect())
}

/// Quadrature of |fhat|^2 against the spectral measure.
pub fn spectral_norm_sq(fh: &SpectralFunction, tol: &SeriesTolerance) -> Result<f64> {
    let grid = fh.grid();
    let mut acc = CompensatedSum::default();
    for (k, &rho) in grid.nodes().iter().enumerate() {
        let dens = spectral_density(rho, grid.deformation(), tol)?;
        acc.add(Complex64::new(
            grid.weights()[k] * dens * fh.values()[k].norm_sqr(),
            0.0,
        ));
    }
    Ok(acc.value().re)
}

/// Relative Plancherel defect | integral |fhat|^2 dsigma - ||f||^2 | / ||f||^2.
pub fn plancherel_defect(
    f: &LatticeFunction,
    grid: &Arc<SpectralGrid>,
    tol: &SeriesTolerance,
) -> Result<f64> {
    let norm_sq = l2_inner(f, f)?.re;
    if norm_sq == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let fh = forward(f, grid);
    let spec = spectral_norm_sq(&fh, tol)?;
    Ok((spec - norm_sq).abs() / norm_sq)
}

/// Max-norm defect of the diagonalization identity
/// forward(box f)(rho) = lambda(-1/2 + i rho) forward(f)(rho); both sides are
/// exact finite sums, so this is a rounding-level identity.
pub fn diagonalization_defect(f: &LatticeFunction, grid: &Arc<SpectralGrid>) -> Result<f64> {
    let j_top = f.lattice().j_max();
    if let Some(s) = f.support_max() {
        if j_top < 5 || s > j_top - 5 {
            return Err(Error::SupportTooWide { max_support: s, limit: j_top.saturating_sub(5) });
        }
    }
    let bf = apply_radial_laplacian(f)?;
    let fh = forward(f, grid);
    let bfh = forward(&bf, grid);
    let d = grid.deformation();
    let mut defect = 0.0f64;
    for (k, &rho) in grid.nodes().iter().enumerate() {
        let lam = SpectralParameter::new(Complex64::new(-0.5, rho), d).lambda();
        defect = defect.max((bfh.values()[k] - lam * fh.values()[k]).norm());
    }
    Ok(defect)
}

/// The continuous-spectrum segment [-1/(1-q)^2, -1/(1+q)^2].
pub fn spectrum_segment(deformation: &Deformation) -> (f64, f64) {
    let q = deformation.q();
    (-1.0 / (1.0 - q).powi(2), -1.0 / (1.0 + q).powi(2))
}
