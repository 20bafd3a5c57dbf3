//! Ideal Bose gas on the unit torus in the grand-canonical ensemble.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{build_shells, shell_sum, sum_integral_upper_bound, ShellTable, MAX_RADIUS_INDEX, TWO_PI};
use crate::numerics::special::{bose, log1mexp, zeta};

/// ζ(3/2).
pub fn zeta_3_2() -> f64 {
    zeta(1.5)
}

/// β_c = (1/4π) (N/ζ(3/2))^{−2/3}.
pub fn beta_c(n: f64) -> f64 {
    (n / zeta_3_2()).powf(-2.0 / 3.0) / (4.0 * PI)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealGasState {
    pub beta: f64,
    pub n_total: f64,
    pub mu0: f64,
    pub n0: f64,
    pub beta_c: f64,
    /// Lattice truncation used for every sum over Λ*₊.
    pub p_max: f64,
    /// Certified bound on the omitted occupation Σ_{|p|>p_max}.
    pub occupation_tail: f64,
    /// Σ_{p∈Λ*} occupation − N at the returned μ₀.
    pub residual: f64,
    pub iterations: usize,
    #[serde(skip)]
    shells: ShellTable,
}

/// Relative size of the certified occupation tail.
const TAIL_REL: f64 = 1e-12;

/// Lattice radius whose tail bound for Σ 1/(e^{β|p|²} − 1) is below `tol`.
/// Returns the radius and the bound attained.
fn choose_p_max(beta: f64, tol: f64) -> Result<(f64, f64)> {
    let cap = TWO_PI * MAX_RADIUS_INDEX as f64;
    let scale = 1.0 / beta.sqrt();
    let occ = |p: f64| bose(beta * p * p);
    let mut lambda = (30.0 / beta).sqrt().max(4.0 * PI);
    loop {
        let lam = lambda.min(cap);
        let bound = sum_integral_upper_bound(occ, lam, scale)?;
        if bound < tol || lam >= cap {
            return Ok((lam, bound));
        }
        lambda *= 1.2;
    }
}

struct Occupation<'a> {
    beta: f64,
    shells: &'a ShellTable,
}

impl Occupation<'_> {
    /// (Σ_{p∈Λ*} 1/(e^{β(|p|²−μ₀)} − 1), derivative with respect to y = −βμ₀),
    /// parametrized by y > 0.
    fn eval(&self, y: f64) -> Result<(f64, f64)> {
        let n0 = bose(y);
        let beta = self.beta;
        let sum = shell_sum(self.shells, |p2| bose(beta * p2 + y))?;
        let d0 = -bose_deriv(y);
        let dsum = -shell_sum(self.shells, |p2| bose_deriv(beta * p2 + y))?;
        Ok((n0 + sum, d0 + dsum))
    }
}

/// eˣ/(eˣ − 1)², the magnitude of d/dx of the Bose occupation.
fn bose_deriv(x: f64) -> f64 {
    let b = bose(x);
    b * (1.0 + b)
}

/// Solve Σ_{p∈Λ*} (e^{β(|p|²−μ₀)} − 1)⁻¹ = N for μ₀ < 0.
pub fn solve_mu0(beta: f64, n: f64) -> Result<IdealGasState> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Input(format!("β must be positive, got {beta}")));
    }
    if !(n >= 1.0 && n.is_finite()) {
        return Err(Error::Input(format!("N must be at least 1, got {n}")));
    }
    let (p_max, occupation_tail) = choose_p_max(beta, TAIL_REL * n)?;
    let shells = build_shells(p_max)?;
    let occ = Occupation { beta, shells: &shells };
    let g = |y: f64| occ.eval(y).map(|(s, d)| (s - n, d));

    // g decreases in y. At y = ln(1 + 1/N) the condensate alone holds N.
    let mut lo = (1.0 / n).ln_1p();
    let mut hi = 60.0f64;
    let mut iterations = 0;
    while g(hi)?.0 > 0.0 {
        hi *= 2.0;
        iterations += 1;
        if hi > 1e6 {
            return Err(Error::Solver(format!("cannot bracket μ₀ at β = {beta}, N = {n}")));
        }
    }
    if g(lo)?.0 < 0.0 {
        return Err(Error::Solver(format!(
            "occupation below N at the lower bracket y = {lo}"
        )));
    }
    // Bisection in log y down to 1e-3 relative width.
    while hi / lo > 1.0 + 1e-3 {
        let mid = (lo * hi).sqrt();
        if g(mid)?.0 > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    // Newton polish, kept inside the bracket.
    let mut y = (lo * hi).sqrt();
    for _ in 0..60 {
        iterations += 1;
        let (val, d) = g(y)?;
        if val == 0.0 {
            break;
        }
        if val > 0.0 {
            lo = lo.max(y);
        } else {
            hi = hi.min(y);
        }
        let mut next = y - val / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - y).abs();
        y = next;
        if step <= 1e-15 * y {
            break;
        }
    }
    let (val, _) = g(y)?;
    let mu0 = -y / beta;
    let n0 = bose(y);
    Ok(IdealGasState {
        beta,
        n_total: n,
        mu0,
        n0,
        beta_c: beta_c(n),
        p_max,
        occupation_tail,
        residual: val,
        iterations,
        shells,
    })
}

/// The state at β = κ β_c(N).
pub fn solve_kappa(kappa: f64, n: f64) -> Result<IdealGasState> {
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Input(format!("κ must be positive, got {kappa}")));
    }
    solve_mu0(kappa * beta_c(n), n)
}

impl IdealGasState {
    pub fn kappa(&self) -> f64 {
        self.beta / self.beta_c
    }

    /// N₀/N.
    pub fn condensate_fraction(&self) -> f64 {
        self.n0 / self.n_total
    }

    pub fn shells(&self) -> &ShellTable {
        &self.shells
    }

    /// Independent re-evaluation of Σ_{p∈Λ*} occupation at the stored μ₀ on
    /// a lattice of radius `p_max`.
    pub fn occupation_at_radius(&self, p_max: f64) -> Result<f64> {
        let t = build_shells(p_max)?;
        let (beta, y) = (self.beta, -self.beta * self.mu0);
        Ok(bose(y) + shell_sum(&t, |p2| bose(beta * p2 + y))?)
    }

    /// (1/β) Σ_{Λ*₊} log(1 − e^{−β(|p|²−μ₀)}) with its certified tail
    /// magnitude.
    pub fn log_sum_plus(&self) -> Result<(f64, f64)> {
        let (beta, y) = (self.beta, -self.beta * self.mu0);
        let s = shell_sum(&self.shells, |p2| log1mexp(beta * p2 + y))?;
        let tail = sum_integral_upper_bound(|p| -log1mexp(beta * p * p + y), self.p_max, 1.0 / beta.sqrt())?;
        Ok((s / beta, tail / beta))
    }
}

/// (1/β) log(1 − e^{βμ₀}) + μ₀ N₀ with N₀ = 1/(e^{−βμ₀} − 1).
pub fn f0_bec_at(beta: f64, mu0: f64) -> Result<f64> {
    if !(mu0 < 0.0) {
        return Err(Error::Domain(format!("μ₀ must be negative, got {mu0}")));
    }
    let y = -beta * mu0;
    Ok(log1mexp(y) / beta + mu0 * bose(y))
}

pub fn f0_bec(state: &IdealGasState) -> Result<f64> {
    f0_bec_at(state.beta, state.mu0)
}

/// Free energy of the thermal cloud and its certified tail magnitude.
pub fn f0_plus_with_tail(state: &IdealGasState) -> Result<(f64, f64)> {
    if !(state.mu0 < 0.0) {
        return Err(Error::Domain(format!("μ₀ must be negative, got {}", state.mu0)));
    }
    let (s, tail) = state.log_sum_plus()?;
    Ok((s + state.mu0 * (state.n_total - state.n0), tail))
}

pub fn f0_plus(state: &IdealGasState) -> Result<f64> {
    f0_plus_with_tail(state).map(|(v, _)| v)
}

/// F₀ = F₀^BEC + F₀^+.
pub fn f0_total(state: &IdealGasState) -> Result<f64> {
    Ok(f0_bec(state)? + f0_plus(state)?)
}
