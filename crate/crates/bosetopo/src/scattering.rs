//! Input-output simulation of a lossy quadratic Hamiltonian.
//!
//! Every mode `j` is coupled to its own bath at rate `κ_j`. With the input
//! field `b_j^in` at frequency `ω > 0`, the mean fields `v = (⟨a⟩, ⟨a†⟩)`
//! solve `𝒢(ω) v = i·diag(Γ, Γ†)·v^in`, where
//! `𝒢(ω) = ωI − τ₃Gτ₃ + (i/2)·diag(ΓΓ†, 0)` and `Γ = diag(√κ)`, and the
//! scattering matrix between ports is `S_ij = δ_ij − √(κ_i*)·v_i / b_j^in`,
//! the output field of port `i` being `b_i^out = b_i^in − √(κ_i*)·⟨a_i⟩`.
//! With this readout factor a lossless chain with real couplings has
//! `S = Sᵀ` even when the two ports are damped at different rates.
//! The Lamb shift is neglected and `κ` does not depend on frequency.
//!
//! Square roots of complex rates take the principal branch, so phases of
//! `S_ij` depend on that convention while magnitudes do not.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{solve_with_rcond, zeros, CMat, CVec, C64, I, ONE, ZERO};
use crate::qbh::{tau3, QuadraticHamiltonian};

/// Grid points whose `𝒢(ω)` has a reciprocal condition number below this
/// are flagged as singular.
pub const SINGULAR_RCOND: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct ScatteringSetup {
    h: QuadraticHamiltonian,
    kappa: Vec<C64>,
    ports: Vec<usize>,
}

impl ScatteringSetup {
    /// `kappa` has one rate per mode; `ports` lists the modes that are
    /// driven and read out. Non-port modes may still be lossy.
    pub fn new(h: QuadraticHamiltonian, kappa: Vec<C64>, ports: Vec<usize>) -> Result<Self> {
        let n = h.n_modes();
        if kappa.len() != n {
            return Err(Error::DimensionMismatch(format!("{} loss rates for {n} modes", kappa.len())));
        }
        if let Some(z) = kappa.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("loss rate {z} is not finite")));
        }
        if ports.is_empty() {
            return Err(Error::InvalidParameter("at least one port is required".into()));
        }
        for (i, &p) in ports.iter().enumerate() {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, n_modes: n });
            }
            if ports[..i].contains(&p) {
                return Err(Error::InvalidParameter(format!("port {p} listed twice")));
            }
        }
        Ok(Self { h, kappa, ports })
    }

    /// Loss assignment for a photo-magnonic chain: `κ_c` on the two boundary
    /// photons, `κ_m` on every magnon, nothing on bulk photons. The ports
    /// are the first and the last photon; a single-cell chain has only one
    /// photon, so its ports are the photon and the magnon.
    pub fn photo_magnonic(h: QuadraticHamiltonian, kappa_c: f64, kappa_m: f64) -> Result<Self> {
        let labels = h.labels();
        let photons: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].starts_with("a_")).collect();
        let magnons: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].starts_with("m_")).collect();
        if photons.is_empty() || magnons.is_empty() || photons.len() + magnons.len() != labels.len() {
            return Err(Error::IncompatibleLayout("expected photon modes a_j and magnon modes m_j".into()));
        }
        let mut kappa = vec![ZERO; labels.len()];
        let first = photons[0];
        let last = *photons.last().unwrap();
        kappa[first] = C64::new(kappa_c, 0.0);
        kappa[last] = C64::new(kappa_c, 0.0);
        for &m in &magnons {
            kappa[m] = C64::new(kappa_m, 0.0);
        }
        let ports = if first == last { vec![first, magnons[0]] } else { vec![first, last] };
        Self::new(h, kappa, ports)
    }

    pub fn hamiltonian(&self) -> &QuadraticHamiltonian {
        &self.h
    }

    pub fn kappa(&self) -> &[C64] {
        &self.kappa
    }

    pub fn ports(&self) -> &[usize] {
        &self.ports
    }

    fn gamma(&self) -> Vec<C64> {
        self.kappa.iter().map(|k| k.sqrt()).collect()
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(Error::InvalidParameter(format!("frequency {omega} must be positive")));
    }
    Ok(())
}

/// `𝒢(ω) = ωI − τ₃Gτ₃ + (i/2)·diag(ΓΓ†, 0)`.
pub fn response_matrix(setup: &ScatteringSetup, omega: f64) -> Result<CMat> {
    check_frequency(omega)?;
    let n = setup.h.n_modes();
    let g = setup.h.dynamical_matrix();
    let t3 = tau3(n);
    let mut m = -t3.dot(g.matrix()).dot(&t3);
    for (j, gam) in setup.gamma().iter().enumerate() {
        m[[j, j]] += omega + I * 0.5 * gam.norm_sqr();
        m[[n + j, n + j]] += omega;
    }
    Ok(m)
}

/// Mean fields `v` for arbitrary input amplitudes on the ports.
///
/// Returns the solution and the reciprocal condition number of `𝒢(ω)`.
pub fn driven_response(setup: &ScatteringSetup, inputs: &[C64], omega: f64) -> Result<(CVec, f64)> {
    if inputs.len() != setup.ports.len() {
        return Err(Error::DimensionMismatch(format!("{} inputs for {} ports", inputs.len(), setup.ports.len())));
    }
    let n = setup.h.n_modes();
    let m = response_matrix(setup, omega)?;
    let gamma = setup.gamma();
    let mut rhs = CVec::zeros(2 * n);
    for (&p, &b) in setup.ports.iter().zip(inputs) {
        rhs[p] = I * gamma[p] * b;
    }
    match solve_with_rcond(&m, &rhs) {
        Ok((v, rcond)) if rcond >= SINGULAR_RCOND && v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
            Ok((v, rcond))
        }
        _ => Err(Error::Singular(omega)),
    }
}

#[derive(Debug, Clone)]
pub struct ScatteringResponse {
    pub frequencies: Vec<f64>,
    /// Ports in the order of [`ScatteringSetup::ports`]; `s_matrix[f][(i, j)]`
    /// is the amplitude read at port `i` when port `j` is driven. Singular
    /// points hold NaN.
    pub s_matrix: Vec<CMat>,
    /// `mode_profiles[f][j]` is the full `2N` mean-field vector when port
    /// `j` is driven with unit amplitude.
    pub mode_profiles: Vec<Vec<CVec>>,
    /// `true` where `𝒢(ω)` could not be inverted.
    pub singular: Vec<bool>,
}

impl ScatteringResponse {
    /// `|S_ij|` along the grid, with port positions `i`, `j`.
    pub fn magnitude(&self, i: usize, j: usize) -> Vec<f64> {
        self.s_matrix.iter().map(|s| s[[i, j]].norm()).collect()
    }
}

/// S-parameters over a frequency grid. Grid points are independent and are
/// solved in parallel; the output keeps the grid order.
pub fn s_parameters(setup: &ScatteringSetup, omegas: &[f64]) -> Result<ScatteringResponse> {
    for &w in omegas {
        check_frequency(w)?;
    }
    let p = setup.ports.len();
    let n2 = 2 * setup.h.n_modes();
    let rows: Vec<(CMat, Vec<CVec>, bool)> = omegas
        .par_iter()
        .map(|&w| match s_at(setup, w) {
            Ok((s, prof)) => (s, prof, false),
            Err(_) => {
                let nan = C64::new(f64::NAN, f64::NAN);
                (CMat::from_elem((p, p), nan), vec![CVec::from_elem(n2, nan); p], true)
            }
        })
        .collect();
    let mut out = ScatteringResponse {
        frequencies: omegas.to_vec(),
        s_matrix: Vec::with_capacity(rows.len()),
        mode_profiles: Vec::with_capacity(rows.len()),
        singular: Vec::with_capacity(rows.len()),
    };
    for (s, prof, sing) in rows {
        out.s_matrix.push(s);
        out.mode_profiles.push(prof);
        out.singular.push(sing);
    }
    Ok(out)
}

fn s_at(setup: &ScatteringSetup, omega: f64) -> Result<(CMat, Vec<CVec>)> {
    let p = setup.ports.len();
    let gamma = setup.gamma();
    let mut s = zeros(p, p);
    let mut profiles = Vec::with_capacity(p);
    for j in 0..p {
        let mut inputs = vec![ZERO; p];
        inputs[j] = ONE;
        let (v, _) = driven_response(setup, &inputs, omega)?;
        for (i, &pi) in setup.ports.iter().enumerate() {
            let direct = if i == j { ONE } else { ZERO };
            s[[i, j]] = direct - gamma[pi].conj() * v[pi];
        }
        profiles.push(v);
    }
    Ok((s, profiles))
}

#[derive(Debug, Clone)]
pub struct DrivenProfile {
    /// `(⟨a_0⟩, …, ⟨a_{N−1}⟩, ⟨a_0†⟩, …)` for a unit input amplitude.
    pub vector: CVec,
    /// `|⟨a_j⟩|` divided by its largest value.
    pub magnitudes: Vec<f64>,
    /// Mode index of the detection site: the port farthest from the drive.
    pub detection_mode: usize,
    pub detection_amplitude: C64,
}

/// Mean-field mode expectations when a single port is driven at `ω`.
pub fn driven_mode_profile(setup: &ScatteringSetup, drive_port: usize, omega: f64) -> Result<DrivenProfile> {
    let pos = setup
        .ports
        .iter()
        .position(|&p| p == drive_port)
        .ok_or_else(|| Error::InvalidParameter(format!("mode {drive_port} is not a port")))?;
    let mut inputs = vec![ZERO; setup.ports.len()];
    inputs[pos] = ONE;
    let (vector, _) = driven_response(setup, &inputs, omega)?;
    let n = setup.h.n_modes();
    let peak = (0..n).map(|j| vector[j].norm()).fold(0.0, f64::max);
    let magnitudes = (0..n).map(|j| if peak > 0.0 { vector[j].norm() / peak } else { 0.0 }).collect();
    let detection_mode = *setup.ports.iter().max_by_key(|&&p| p.abs_diff(drive_port)).unwrap();
    Ok(DrivenProfile { detection_amplitude: vector[detection_mode], vector, magnitudes, detection_mode })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qbh::build_qbh;
    use crate::qbh::Term;

    fn single(omega0: f64, kappa: f64) -> ScatteringSetup {
        let h = build_qbh(1, &[Term::Onsite(0, omega0)]).unwrap();
        ScatteringSetup::new(h, vec![C64::new(kappa, 0.0)], vec![0]).unwrap()
    }

    #[test]
    fn lossless_mode_is_singular_on_resonance() {
        let s = single(5.0, 0.0);
        let r = s_parameters(&s, &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.singular, vec![false, true, false]);
        assert!(r.s_matrix[1][[0, 0]].re.is_nan());
    }

    #[test]
    fn lossless_response_matrix_has_no_damping() {
        let s = single(5.0, 0.0);
        let m = response_matrix(&s, 2.0).unwrap();
        assert_eq!(m[[0, 0]], C64::new(-3.0, 0.0));
        assert_eq!(m[[1, 1]], C64::new(7.0, 0.0));
    }

    #[test]
    fn non_positive_frequencies_are_rejected() {
        let s = single(5.0, 1.0);
        assert!(response_matrix(&s, 0.0).is_err());
        assert!(s_parameters(&s, &[1.0, -1.0]).is_err());
    }

    #[test]
    fn ports_are_validated() {
        let h = build_qbh(2, &[Term::Onsite(0, 1.0), Term::Onsite(1, 1.0)]).unwrap();
        assert!(ScatteringSetup::new(h.clone(), vec![ZERO; 2], vec![]).is_err());
        assert!(ScatteringSetup::new(h.clone(), vec![ZERO; 2], vec![2]).is_err());
        assert!(ScatteringSetup::new(h, vec![ZERO; 1], vec![0]).is_err());
    }
}
