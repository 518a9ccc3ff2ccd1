//! Eigenfunctions of the radial operator, the Green/resolvent kernel, the
//! delta-source Poisson solution, and the resolvent jump across the
//! continuous spectrum.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeFunction};
use crate::qspecial::{
    cfunc, cpow, lattice_index, phi_3_2_sequence, phi_3_2_terminating, qbracket, qpow,
    CompensatedSum, Deformation, SeriesTolerance, SpectralParameter, POLE_EPS,
};

/// Eigenvalue lambda(l) of the radial operator.
pub fn lambda_eig(l: Complex64, deformation: &Deformation) -> Complex64 {
    SpectralParameter::new(l, deformation).lambda()
}

/// The solution psi_l(x) = x^l 2Phi1(q^{-2l}, q^{-2l}; q^{-4l}; q^2, q^2/x)
/// with asymptotics psi_l ~ x^l; defined for x > q^2.
pub fn psi_l(x: f64, l: Complex64, deformation: &Deformation, tol: &SeriesTolerance) -> Result<Complex64> {
    let q = deformation.q();
    if !(x > q * q) {
        return Err(Error::EvaluationOutOfDomain { x });
    }
    let qsq = q * q;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let a = qpow(q, -2.0 * l);
    let c = qpow(q, -4.0 * l);
    let z = Complex64::new(qsq / x, 0.0);
    let mut acc = CompensatedSum::default();
    let mut term = one;
    let mut qk = 1.0f64;
    for k in 0..tol.max_terms {
        acc.add(term);
        let numf = one - a * qk;
        if numf == zero {
            // upper parameter hit q^{-2n}: series terminates (l = 0 case)
            return Ok(cpow(x, l) * acc.value());
        }
        let cf = one - c * qk;
        if cf.norm() < POLE_EPS {
            return Err(Error::SingularParameter { dist: cf.norm() });
        }
        term *= numf * numf / (cf * (1.0 - qsq * qk)) * z;
        qk *= qsq;
        if term.norm() < tol.abs_tol && k > 0 {
            acc.add(term);
            return Ok(cpow(x, l) * acc.value());
        }
    }
    Err(Error::NonConvergence { max_terms: tol.max_terms })
}

/// The lattice-regular eigenfunction Phi_l, normalized by Phi_l(1) = 1.
pub fn phi_l(x_lat: f64, l: Complex64, deformation: &Deformation) -> Result<Complex64> {
    phi_3_2_terminating(x_lat, l, deformation.q())
}

fn check_green_admissible(l: Complex64, deformation: &Deformation) -> Result<()> {
    let crit = (l.re + 0.5).abs();
    if crit <= 1e-6 {
        return Err(Error::CriticalLine { dist: crit });
    }
    // degenerate points l = 0, -1 (constant solutions, vanishing Wronskian)
    let d0 = (l - Complex64::new(0.0, 0.0)).norm();
    let d1 = (l - Complex64::new(-1.0, 0.0)).norm();
    let dsing = SpectralParameter::new(l, deformation).distance_to_singular_set();
    let dist = d0.min(d1).min(dsing);
    if dist <= 1e-6 {
        return Err(Error::SingularParameter { dist });
    }
    Ok(())
}

/// The kernel G(x, xi, l) of (box - lambda(l))^{-1}, built from the
/// L2-recessive solution at infinity and the lattice-regular Phi_l.
///
/// With m the recessive order (m = l when Re l < -1/2, m = -1-l otherwise),
/// G(x, xi, l) = psi_m(max) Phi_l(min) / (c(-1-m) [2m+1]_q).
#[derive(Debug, Clone)]
pub struct GreenKernel {
    l: Complex64,
    recessive_order: Complex64,
    constant: Complex64,
    deformation: Deformation,
    tol: SeriesTolerance,
}

impl GreenKernel {
    pub fn new(l: Complex64, deformation: &Deformation, tol: &SeriesTolerance) -> Result<Self> {
        check_green_admissible(l, deformation)?;
        let m = if l.re > -0.5 { -(l + 1.0) } else { l };
        let q = deformation.q();
        let c = cfunc(-(m + 1.0), q, tol)?;
        let w = qbracket(2.0 * m + 1.0, q);
        let denom = c * w;
        if denom.norm() < POLE_EPS {
            return Err(Error::SingularParameter { dist: denom.norm() });
        }
        Ok(Self {
            l,
            recessive_order: m,
            constant: 1.0 / denom,
            deformation: *deformation,
            tol: *tol,
        })
    }

    pub fn l(&self) -> Complex64 {
        self.l
    }

    /// G(x, xi, l) at two lattice points; symmetric in (x, xi).
    pub fn eval(&self, x: f64, xi: f64) -> Result<Complex64> {
        let q = self.deformation.q();
        let i = lattice_index(x, q)?;
        let j = lattice_index(xi, q)?;
        let (mn, mx) = if i <= j { (x, xi) } else { (xi, x) };
        let p = psi_l(mx, self.recessive_order, &self.deformation, &self.tol)?;
        let f = phi_3_2_terminating(mn, self.l, q)?;
        Ok(self.constant * p * f)
    }

    /// The window G(x_i, x_j) for i, j = 0..=n, computed with shared
    /// eigenfunction tables.
    pub fn window(&self, lattice: &Lattice, n: usize) -> Result<Vec<Vec<Complex64>>> {
        if n > lattice.j_max() {
            return Err(Error::IndexOutOfRange { index: n, max: lattice.j_max() });
        }
        let (psi, phi) = self.tables(lattice, n)?;
        let mut rows = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let mut row = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let (mn, mx) = if i <= j { (i, j) } else { (j, i) };
                row.push(self.constant * psi[mx] * phi[mn]);
            }
            rows.push(row);
        }
        Ok(rows)
    }

    fn tables(&self, lattice: &Lattice, n: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let q = self.deformation.q();
        let phi = phi_3_2_sequence(n, self.l, q);
        let mut psi = Vec::with_capacity(n + 1);
        for j in 0..=n {
            psi.push(psi_l(lattice.point(j)?, self.recessive_order, &self.deformation, &self.tol)?);
        }
        Ok((psi, phi))
    }
}

/// u = (box - lambda(l))^{-1} psi via the Green kernel:
/// u(x_i) = sum_j w_j G(x_i, x_j, l) psi(x_j). The source must be supported
/// at indices <= J - 20 so the kernel tail is resolved by the truncation.
pub fn resolvent_apply(
    psi: &LatticeFunction,
    l: Complex64,
    deformation: &Deformation,
    tol: &SeriesTolerance,
) -> Result<LatticeFunction> {
    let lat = psi.lattice();
    let j_top = lat.j_max();
    let support = match psi.support_max() {
        None => return Ok(LatticeFunction::zero(lat.clone())),
        Some(s) => s,
    };
    if j_top < 20 || support > j_top - 20 {
        return Err(Error::SupportTooWide {
            max_support: support,
            limit: j_top.saturating_sub(20),
        });
    }
    let kernel = GreenKernel::new(l, deformation, tol)?;
    let (psi_tab, phi_tab) = kernel.tables(lat, j_top)?;
    let src = psi.values();
    let mut out = Vec::with_capacity(j_top + 1);
    for i in 0..=j_top {
        let mut acc = CompensatedSum::default();
        for j in 0..=support {
            let (mn, mx) = if i <= j { (i, j) } else { (j, i) };
            acc.add(lat.weight(j) * kernel.constant * psi_tab[mx] * phi_tab[mn] * src[j]);
        }
        out.push(acc.value());
    }
    LatticeFunction::new(lat.clone(), out)
}

/// The solution of box psi = f_0 (indicator of x = 1) vanishing at infinity:
/// psi(x) = -(q^{-2}-1)^2 q^2 sum_{m>=1} q^{2m}/(1 - q^{2m}) x^{-m}.
pub fn poisson_delta_solution(
    lattice: &Arc<Lattice>,
    tol: &SeriesTolerance,
) -> Result<LatticeFunction> {
    let q = lattice.q();
    let qsq = q * q;
    let pref = -(1.0 / qsq - 1.0).powi(2) * qsq;
    let mut vals = Vec::with_capacity(lattice.len());
    for j in 0..lattice.len() {
        // x_j^{-m} = q^{2jm}; term_m = q^{2m(j+1)}/(1 - q^{2m})
        let r = qsq.powi(j as i32 + 1);
        let mut acc = CompensatedSum::default();
        let mut num = r;
        let mut den_pow = qsq;
        let mut converged = false;
        for _ in 1..=tol.max_terms {
            let term = num / (1.0 - den_pow);
            acc.add(Complex64::new(term, 0.0));
            if term.abs() < tol.abs_tol {
                converged = true;
                break;
            }
            num *= r;
            den_pow *= qsq;
        }
        if !converged {
            return Err(Error::NonConvergence { max_terms: tol.max_terms });
        }
        vals.push(pref * acc.value());
    }
    LatticeFunction::new(lattice.clone(), vals)
}

/// Jump of the resolvent kernel across the spectral cut at l = -1/2 + i rho:
/// G(x, xi, l - eps) - G(x, xi, l + eps), which converges as eps -> 0 to
/// Phi_l(xi) Phi_l(x) / (c(l) c(-1-l) [2l+1]_q).
pub fn resolvent_jump(
    x: f64,
    xi: f64,
    rho: f64,
    eps: f64,
    deformation: &Deformation,
    tol: &SeriesTolerance,
) -> Result<Complex64> {
    let h = deformation.h();
    if !(rho > 0.0 && rho < std::f64::consts::PI / h) {
        return Err(Error::EvaluationOutOfDomain { x: rho });
    }
    if !(eps > 1e-6 && eps < 0.1) {
        return Err(Error::ConfigError(format!("jump width must be in (1e-6, 0.1), got {eps}")));
    }
    let l_minus = Complex64::new(-0.5 - eps, rho);
    let l_plus = Complex64::new(-0.5 + eps, rho);
    let g_minus = GreenKernel::new(l_minus, deformation, tol)?.eval(x, xi)?;
    let g_plus = GreenKernel::new(l_plus, deformation, tol)?.eval(x, xi)?;
    Ok(g_minus - g_plus)
}

/// The eps -> 0 limit of `resolvent_jump`, evaluated directly on the line.
pub fn resolvent_jump_limit(
    x: f64,
    xi: f64,
    rho: f64,
    deformation: &Deformation,
    tol: &SeriesTolerance,
) -> Result<Complex64> {
    let q = deformation.q();
    let l = Complex64::new(-0.5, rho);
    let fx = phi_3_2_terminating(x, l, q)?;
    let fxi = phi_3_2_terminating(xi, l, q)?;
    let c_plus = cfunc(l, q, tol)?;
    let c_minus = cfunc(-(l + 1.0), q, tol)?;
    let w = qbracket(2.0 * l + 1.0, q);
    Ok(fx * fxi / (c_plus * c_minus * w))
}
