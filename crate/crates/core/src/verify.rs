//! Self-contained verification suites exercising the library invariants.
//! Each check reports the measured defect against its threshold; the CLI
//! surfaces these as a JSON report.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eigen::{
    lambda_eig, phi_l, poisson_delta_solution, psi_l, GreenKernel,
};
use crate::error::Result;
use crate::lattice::{
    apply_radial_laplacian, jackson_integral, l2_inner, l2_norm, q_leibniz_defect, wronskian,
    Lattice, LatticeFunction,
};
use crate::qspecial::{
    cfunc, inv_cfunc, phi_1_0, qbracket, qgamma, qpochhammer_infinite, qpow, Deformation,
    SeriesTolerance, SpectralParameter,
};
use crate::transform::{
    diagonalization_defect, forward, plancherel_defect, spectral_density, spectrum_segment,
    SpectralGrid,
};
use crate::uqsl2::{LaurentPolynomial, ModuleWeight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Qseries,
    Lattice,
    Eigen,
    Transform,
    Uqsl2,
}

impl std::str::FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Self::All),
            "qseries" => Ok(Self::Qseries),
            "lattice" => Ok(Self::Lattice),
            "eigen" => Ok(Self::Eigen),
            "transform" => Ok(Self::Transform),
            "uqsl2" => Ok(Self::Uqsl2),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub defect: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub q: f64,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyParams {
    pub deformation: Deformation,
    pub j_max: usize,
    pub grid_n: usize,
    pub tol: SeriesTolerance,
}

struct Recorder {
    checks: Vec<CheckResult>,
}

impl Recorder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn record(&mut self, name: &str, defect: f64, threshold: f64) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            defect,
            threshold,
            pass: defect.is_finite() && defect < threshold,
        });
    }
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_regular_l(rng: &mut ChaCha8Rng, d: &Deformation) -> Complex64 {
    loop {
        let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let re = -0.5 + side * rng.gen_range(0.05..1.5);
        let im = rng.gen_range(-0.95..0.95) * std::f64::consts::PI / d.h();
        let l = c64(re, im);
        if SpectralParameter::new(l, d).distance_to_singular_set() > 0.02 {
            return l;
        }
    }
}

fn qseries_suite(p: &VerifyParams, rec: &mut Recorder) -> Result<()> {
    let d = &p.deformation;
    let q = d.q();
    let tol = &p.tol;
    let mut rng = ChaCha8Rng::seed_from_u64(101);

    // q-binomial theorem: 1Phi0(a; q, t) = (a t; q)_inf / (t; q)_inf
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = c64(rng.gen_range(-0.9..0.9), rng.gen_range(-0.5..0.5));
        let t = c64(rng.gen_range(-0.8..0.8), rng.gen_range(-0.4..0.4));
        if t.norm() >= 0.95 {
            continue;
        }
        let lhs = phi_1_0(a, q, t, tol)?;
        let rhs = qpochhammer_infinite(a * t, q, tol)? / qpochhammer_infinite(t, q, tol)?;
        worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
    rec.record("q_binomial_theorem", worst, 1e-11);

    // c-function: product form against its reciprocal
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let l = random_regular_l(&mut rng, d);
        let c = cfunc(l, q, tol)?;
        let ic = inv_cfunc(l, q, tol)?;
        worst = worst.max((c * ic - c64(1.0, 0.0)).norm());
    }
    rec.record("cfunc_dual_form", worst, 1e-11);

    // Gamma functional equation
    let qsq = q * q;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let z = c64(rng.gen_range(0.2..3.0), rng.gen_range(-2.0..2.0));
        let lhs = qgamma(z + c64(1.0, 0.0), qsq, tol)?;
        let rhs = (c64(1.0, 0.0) - qpow(qsq, z)) / (1.0 - qsq) * qgamma(z, qsq, tol)?;
        worst = worst.max((lhs - rhs).norm() / (1.0 + rhs.norm()));
    }
    rec.record("qgamma_functional_equation", worst, 1e-11);

    // lambda symmetry under l -> -1-l
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let l = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a = lambda_eig(l, d);
        let b = lambda_eig(-(l + 1.0), d);
        worst = worst.max((a - b).norm() / (1.0 + a.norm()));
    }
    rec.record("lambda_reflection_symmetry", worst, 1e-12);
    Ok(())
}

fn lattice_suite(p: &VerifyParams, rec: &mut Recorder) -> Result<()> {
    let d = &p.deformation;
    let lat = Arc::new(Lattice::new(d, p.j_max));
    let mut rng = ChaCha8Rng::seed_from_u64(103);

    // weight/gap identity
    let mut worst = 0.0f64;
    for j in 1..=lat.j_max() {
        let gap = lat.point(j)? - lat.point(j - 1)?;
        worst = worst.max((lat.weight(j) - gap).abs() / gap);
    }
    rec.record("weight_gap_identity", worst, 1e-14);

    // q-Leibniz defect on random polynomial pairs
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let cu: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let cv: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = lat.point(rng.gen_range(0..6))?;
        let poly = |c: Vec<f64>| {
            move |t: f64| {
                c.iter()
                    .enumerate()
                    .map(|(k, ck)| c64(ck * t.powi(k as i32), 0.0))
                    .sum::<Complex64>()
            }
        };
        let z = q_leibniz_defect(poly(cu), poly(cv), x, d)?;
        worst = worst.max(z.norm() / (1.0 + x.powi(6)));
    }
    rec.record("q_leibniz_defect", worst, 1e-12);

    // jackson integral of the origin indicator
    let f0 = LatticeFunction::delta_at_origin(lat.clone());
    let got = jackson_integral(&f0);
    rec.record(
        "jackson_integral_f0",
        (got - c64(1.0 - d.q() * d.q(), 0.0)).norm(),
        1e-14,
    );

    // interior self-adjointness
    let interior_top = lat.j_max().saturating_sub(6);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let mk = |rng: &mut ChaCha8Rng| {
            let mut vals = vec![c64(0.0, 0.0); lat.len()];
            for v in vals.iter_mut().take(interior_top).skip(1) {
                *v = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
            LatticeFunction::new(lat.clone(), vals)
        };
        let f = mk(&mut rng)?;
        let g = mk(&mut rng)?;
        let bf = apply_radial_laplacian(&f)?;
        let bg = apply_radial_laplacian(&g)?;
        let short = lat.j_max() - 1;
        let a = l2_inner(&bf, &g.restrict(short)?)?;
        let b = l2_inner(&f.restrict(short)?, &bg)?;
        let scale = l2_norm(&bf) * l2_norm(&g.restrict(short)?) + 1.0;
        worst = worst.max((a - b).norm() / scale);
    }
    rec.record("box_self_adjoint_interior", worst, 1e-10);

    // Rayleigh quotient enclosure
    let (lo, hi) = spectrum_segment(d);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let mut vals = vec![c64(0.0, 0.0); lat.len()];
        for v in vals.iter_mut().take(interior_top).skip(1) {
            *v = c64(rng.gen_range(-1.0..1.0), 0.0);
        }
        let f = LatticeFunction::new(lat.clone(), vals)?;
        let bf = apply_radial_laplacian(&f)?;
        let fr = f.restrict(lat.j_max() - 1)?;
        let r = l2_inner(&bf, &fr)?.re / l2_inner(&fr, &fr)?.re;
        worst = worst.max((lo - r).max(r - hi).max(0.0));
    }
    rec.record("rayleigh_quotient_enclosure", worst, 0.05);
    Ok(())
}

fn eigen_suite(p: &VerifyParams, rec: &mut Recorder) -> Result<()> {
    let d = &p.deformation;
    let q = d.q();
    let tol = &p.tol;
    let lat = Arc::new(Lattice::new(d, p.j_max.max(60)));
    let mut rng = ChaCha8Rng::seed_from_u64(107);

    // Lambda = q lambda
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let l = c64(rng.gen_range(-2.5..2.5), rng.gen_range(-2.0..2.0));
        let sp = SpectralParameter::new(l, d);
        worst = worst.max((sp.capital_lambda() - q * sp.lambda()).norm() / (1.0 + sp.lambda().norm()));
    }
    rec.record("capital_lambda_is_q_lambda", worst, 1e-13);

    // Wronskian of the psi pair
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let l = random_regular_l(&mut rng, d);
        let f = LatticeFunction::from_fn(lat.clone(), |_, x| psi_l(x, l, d, tol).unwrap());
        let g = LatticeFunction::from_fn(lat.clone(), |_, x| psi_l(x, -(l + 1.0), d, tol).unwrap());
        let want = qbracket(2.0 * l + 1.0, q);
        for j in 1..=25 {
            worst = worst.max((wronskian(&f, &g, j)? - want).norm() / want.norm());
        }
    }
    rec.record("wronskian_psi_pair", worst, 1e-9);

    // connection formula
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let l = random_regular_l(&mut rng, d);
        let cl = cfunc(l, q, tol)?;
        let cm = cfunc(-(l + 1.0), q, tol)?;
        for j in 5..=15 {
            let x = lat.point(j)?;
            let lhs = phi_l(x, l, d)?;
            let t1 = cl * psi_l(x, l, d, tol)?;
            let t2 = cm * psi_l(x, -(l + 1.0), d, tol)?;
            worst = worst.max((lhs - t1 - t2).norm() / (t1.norm() + t2.norm()));
        }
    }
    rec.record("connection_formula", worst, 1e-7);

    // Green kernel delta defect
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let l = random_regular_l(&mut rng, d);
        let g = GreenKernel::new(l, d, tol)?;
        let lam = lambda_eig(l, d);
        for xi_idx in [0usize, 3] {
            let xi = lat.point(xi_idx)?;
            let col = LatticeFunction::from_fn(lat.clone(), |_, x| g.eval(x, xi).unwrap());
            let bcol = apply_radial_laplacian(&col)?;
            let expected = 1.0 / ((1.0 - q * q) * xi);
            for j in 0..30 {
                let r = bcol.value(j)? - lam * col.value(j)?;
                let want = if j == xi_idx { c64(expected, 0.0) } else { c64(0.0, 0.0) };
                worst = worst.max((r - want).norm() / expected.abs());
            }
        }
    }
    rec.record("green_delta_defect", worst, 1e-8);

    // Poisson delta solution: recurrence and box residual
    let psi = poisson_delta_solution(&lat, tol)?;
    let qsq = q * q;
    let mut worst_rec = 0.0f64;
    for j in 1..lat.j_max() {
        let x = lat.point(j)?;
        let drop = (1.0 / qsq - 1.0).powi(2) * qsq * qsq / x / (1.0 - qsq / x);
        worst_rec = worst_rec.max((psi.value(j)? - psi.value(j + 1)? + c64(drop, 0.0)).norm());
    }
    rec.record("poisson_recurrence_residual", worst_rec, 1e-12);
    let bpsi = apply_radial_laplacian(&psi)?;
    let mut worst_box = 0.0f64;
    for j in 0..lat.j_max() - 1 {
        let want = if j == 0 { 1.0 } else { 0.0 };
        worst_box = worst_box.max((bpsi.value(j)? - c64(want, 0.0)).norm());
    }
    rec.record("poisson_box_equals_delta", worst_box, 1e-10);
    Ok(())
}

fn transform_suite(p: &VerifyParams, rec: &mut Recorder) -> Result<()> {
    let d = &p.deformation;
    let q = d.q();
    let tol = &p.tol;
    let lat = Arc::new(Lattice::new(d, p.j_max));
    let grid = Arc::new(SpectralGrid::new(d, p.grid_n)?);
    let mut rng = ChaCha8Rng::seed_from_u64(109);

    // forward of the origin indicator is the constant 1 - q^2
    let f0 = LatticeFunction::delta_at_origin(lat.clone());
    let fh = forward(&f0, &grid);
    let mut worst = 0.0f64;
    for v in fh.values() {
        worst = worst.max((v - c64(1.0 - q * q, 0.0)).norm());
    }
    rec.record("forward_f0_constant", worst, 1e-13);

    // density is real nonnegative (imaginary part is zero by construction;
    // check nonnegativity and the independent modulus oracle)
    let mut worst = 0.0f64;
    let top = std::f64::consts::PI / d.h();
    for _ in 0..50 {
        let rho = rng.gen_range(0.01..top * 0.99);
        let dens = spectral_density(rho, d, tol)?;
        if dens < 0.0 {
            worst = worst.max(-dens);
        }
        let c = cfunc(c64(-0.5, rho), q, tol)?;
        let oracle = d.h() / (2.0 * std::f64::consts::PI * (1.0 - q * q)) / c.norm_sqr();
        worst = worst.max((dens - oracle).abs() / (1.0 + oracle));
    }
    rec.record("density_modulus_oracle", worst, 1e-11);

    // Plancherel defect for random finitely supported functions
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let mut vals = vec![c64(0.0, 0.0); lat.len()];
        for v in vals.iter_mut().take(8) {
            *v = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let f = LatticeFunction::new(lat.clone(), vals)?;
        worst = worst.max(plancherel_defect(&f, &grid, tol)?);
    }
    rec.record("plancherel_defect", worst, 1e-6);

    // diagonalization identity
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let mut vals = vec![c64(0.0, 0.0); lat.len()];
        for j in 1..6 {
            vals[j] = c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
        let f = LatticeFunction::new(lat.clone(), vals)?;
        let norm = l2_norm(&f).max(1.0);
        worst = worst.max(diagonalization_defect(&f, &grid)? / norm);
    }
    rec.record("diagonalization_defect", worst, 1e-9);

    // segment endpoints against lambda
    let (lo, hi) = spectrum_segment(d);
    let e1 = (lambda_eig(c64(-0.5, 0.0), d).re - hi).abs();
    let e2 = (lambda_eig(c64(-0.5, top), d).re - lo).abs();
    rec.record("segment_endpoints", e1.max(e2) / (1.0 + lo.abs()), 1e-13);
    Ok(())
}

fn uqsl2_suite(p: &VerifyParams, rec: &mut Recorder) -> Result<()> {
    let d = &p.deformation;
    let q = d.q();
    let mut rng = ChaCha8Rng::seed_from_u64(113);

    let mut worst_weight = 0.0f64;
    let mut worst_comm = 0.0f64;
    for _ in 0..20 {
        let l = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let w = ModuleWeight::new(l, d);
        for m in -20..=20i64 {
            let f = LaurentPolynomial::monomial(m, c64(1.0, 0.0));
            let xp = w.act_xplus(&f);
            let comm_p = w.act_h(&xp).sub(&w.act_xplus(&w.act_h(&f)));
            worst_weight = worst_weight
                .max(comm_p.sub(&xp.scale(c64(2.0, 0.0))).max_abs() / (1.0 + xp.max_abs()));
            let xm = w.act_xminus(&f);
            let comm_m = w.act_h(&xm).sub(&w.act_xminus(&w.act_h(&f)));
            worst_weight = worst_weight
                .max(comm_m.sub(&xm.scale(c64(-2.0, 0.0))).max_abs() / (1.0 + xm.max_abs()));

            let kx = w.act_k(&xp);
            let xk = w.act_xplus(&w.act_k(&f)).scale(c64(q * q, 0.0));
            worst_weight = worst_weight.max(kx.sub(&xk).max_abs() / (1.0 + kx.max_abs()));

            let comm = w.act_xplus(&w.act_xminus(&f)).sub(&w.act_xminus(&w.act_xplus(&f)));
            let want = qbracket(c64(2.0 * m as f64, 0.0), q);
            worst_comm = worst_comm.max((comm.coeff(m) - want).norm() / (1.0 + want.norm()));
        }
    }
    rec.record("weight_relations", worst_weight, 1e-12);
    rec.record("xplus_xminus_commutator", worst_comm, 1e-12);

    // Casimir scalarity and cross-module eigenvalue identity
    let mut worst_cas = 0.0f64;
    let mut worst_cross = 0.0f64;
    for _ in 0..50 {
        let l = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let w = ModuleWeight::new(l, d);
        let sp = SpectralParameter::new(l, d);
        let lam_cas = sp.capital_lambda();
        let mut f = LaurentPolynomial::zero();
        for _ in 0..rng.gen_range(1..6) {
            f.add_term(
                rng.gen_range(-10..=10),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let defect = w.casimir(&f).sub(&f.scale(lam_cas)).max_abs();
        // scale by the pre-cancellation size of the X-X+ composition
        let scale = 1.0 + w.act_xminus(&w.act_xplus(&f)).max_abs() + lam_cas.norm() * f.max_abs();
        worst_cas = worst_cas.max(defect / scale);
        worst_cross =
            worst_cross.max((lam_cas - q * sp.lambda()).norm() / (1.0 + sp.lambda().norm()));
    }
    rec.record("casimir_scalar", worst_cas, 1e-12);
    rec.record("casimir_eq_q_lambda", worst_cross, 1e-13);

    // operator vs closed monomial forms
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let l = c64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let w = ModuleWeight::new(l, d);
        let mut f = LaurentPolynomial::zero();
        for _ in 0..rng.gen_range(1..6) {
            f.add_term(
                rng.gen_range(-10..=10),
                c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let dp = w.act_xplus(&f).sub(&w.act_xplus_operator(&f)).max_abs();
        let dm = w.act_xminus(&f).sub(&w.act_xminus_operator(&f)).max_abs();
        worst = worst.max(dp.max(dm) / (1.0 + f.max_abs() * 1e4));
    }
    rec.record("operator_vs_closed_forms", worst, 1e-10);
    Ok(())
}

/// Run one suite (or all of them) and collect the report.
pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<SuiteReport> {
    let mut rec = Recorder::new();
    match suite {
        Suite::Qseries => qseries_suite(params, &mut rec)?,
        Suite::Lattice => lattice_suite(params, &mut rec)?,
        Suite::Eigen => eigen_suite(params, &mut rec)?,
        Suite::Transform => transform_suite(params, &mut rec)?,
        Suite::Uqsl2 => uqsl2_suite(params, &mut rec)?,
        Suite::All => {
            qseries_suite(params, &mut rec)?;
            lattice_suite(params, &mut rec)?;
            eigen_suite(params, &mut rec)?;
            transform_suite(params, &mut rec)?;
            uqsl2_suite(params, &mut rec)?;
        }
    }
    let pass = rec.checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: format!("{suite:?}").to_lowercase(),
        q: params.deformation.q(),
        checks: rec.checks,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(q: f64) -> VerifyParams {
        VerifyParams {
            deformation: Deformation::new(q).unwrap(),
            j_max: 60,
            grid_n: 1024,
            tol: SeriesTolerance::default(),
        }
    }

    #[test]
    fn all_suites_pass_at_half() {
        let report = run_suite(Suite::All, &params(0.5)).unwrap();
        for c in &report.checks {
            assert!(c.pass, "{}: defect {} >= {}", c.name, c.defect, c.threshold);
        }
        assert!(report.pass);
    }

    #[test]
    fn suites_pass_at_other_q() {
        for q in [0.3, 0.8] {
            for suite in [Suite::Qseries, Suite::Lattice, Suite::Eigen, Suite::Transform, Suite::Uqsl2] {
                let report = run_suite(suite, &params(q)).unwrap();
                for c in &report.checks {
                    assert!(c.pass, "q = {q}, {}: defect {} >= {}", c.name, c.defect, c.threshold);
                }
            }
        }
    }
}
