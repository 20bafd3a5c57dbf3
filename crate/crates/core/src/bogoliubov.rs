//! Bogoliubov spectrum, thermal occupations and the Bogoliubov free-energy
//! correction for the condensate coupling c = 16π𝔞_N N₀.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal_gas::IdealGasState;
use crate::lattice::{
    build_shells, shell_sum, sum_integral_upper_bound, ShellTable, FOUR_PI_SQ, MAX_RADIUS_INDEX, TWO_PI,
};
use crate::numerics::special::{bose, log1mexp, log1p_quartic_remainder, x_minus_log1p, CUBIC_INV_N4, CUBIC_INV_N6};
use crate::numerics::{integrate_to_infinity, QuadOptions};

pub const DEFAULT_DELTA_BOG: f64 = 1.0 / 18.0;

#[derive(Debug, Clone, Serialize)]
pub struct BogoliubovModel {
    pub a_n: f64,
    pub n0: f64,
    pub mu0: f64,
    pub delta_bog: f64,
    pub beta: f64,
    pub n_total: f64,
    #[serde(skip)]
    shells: ShellTable,
    /// Number of leading shells forming P_B.
    #[serde(skip)]
    pb_len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovMode {
    pub tau: f64,
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OccupationPair {
    pub gamma: f64,
    pub gamma_diag: f64,
    /// |α_p|; the phase (z/|z|)² is not represented.
    pub alpha: f64,
}

/// A value together with a bound on what the truncated lattice omits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracketed {
    pub value: f64,
    pub tail_bound: f64,
}

impl BogoliubovModel {
    /// `shells` must cover P_B and whatever range the thermal sums need.
    pub fn new(
        a_n: f64,
        n0: f64,
        mu0: f64,
        beta: f64,
        n_total: f64,
        delta_bog: f64,
        shells: ShellTable,
    ) -> Result<Self> {
        if !(a_n >= 0.0 && n0 >= 0.0) {
            return Err(Error::Input(format!("𝔞_N and N₀ must be nonnegative, got {a_n}, {n0}")));
        }
        if !(mu0 < 0.0) {
            return Err(Error::Domain(format!("μ₀ must be negative, got {mu0}")));
        }
        if !(beta > 0.0) || !(n_total >= 1.0) {
            return Err(Error::Input(format!("need β > 0 and N ≥ 1, got {beta}, {n_total}")));
        }
        if !(delta_bog > 0.0 && delta_bog.is_finite()) {
            return Err(Error::Input(format!("δ_Bog must be positive, got {delta_bog}")));
        }
        let cutoff = n_total.powf(delta_bog);
        let shells = if shells.p_max() < cutoff {
            build_shells(cutoff)?
        } else {
            shells
        };
        let pb_len = shells.shells().partition_point(|s| s.norm() <= cutoff);
        Ok(Self {
            a_n,
            n0,
            mu0,
            delta_bog,
            beta,
            n_total,
            shells,
            pb_len,
        })
    }

    /// Model on top of a solved ideal-gas state with unscaled length `a`.
    pub fn from_ideal(state: &IdealGasState, a: f64, delta_bog: f64) -> Result<Self> {
        Self::new(
            a / state.n_total,
            state.n0,
            state.mu0,
            state.beta,
            state.n_total,
            delta_bog,
            state.shells().clone(),
        )
    }

    /// 16π𝔞_N N₀.
    pub fn coupling(&self) -> f64 {
        16.0 * PI * self.a_n * self.n0
    }

    /// N^{δ_Bog}.
    pub fn pb_radius(&self) -> f64 {
        self.n_total.powf(self.delta_bog)
    }

    pub fn pb_shells(&self) -> &[crate::lattice::Shell] {
        &self.shells.shells()[..self.pb_len]
    }

    pub fn pb_point_count(&self) -> u64 {
        self.pb_shells().iter().map(|s| s.multiplicity).sum()
    }

    /// Membership by shell, matching the sums exactly.
    pub fn in_pb(&self, p2: f64) -> bool {
        match self.pb_shells().last() {
            None => false,
            Some(s) => p2 <= s.norm_sq() * (1.0 + 1e-14),
        }
    }

    pub fn mode(&self, p2: f64) -> BogoliubovMode {
        let x = if self.in_pb(p2) {
            self.coupling() / (p2 - self.mu0)
        } else {
            0.0
        };
        let tau = -0.25 * x.ln_1p();
        BogoliubovMode {
            tau,
            u: tau.cosh(),
            v: tau.sinh(),
        }
    }

    /// ε(p) = √(|p|²−μ₀)·√(|p|²−μ₀+c) on P_B, |p|²−μ₀ elsewhere.
    pub fn dispersion(&self, p2: f64) -> f64 {
        let a = p2 - self.mu0;
        if self.in_pb(p2) {
            a.sqrt() * (a + self.coupling()).sqrt()
        } else {
            a
        }
    }

    /// |p|² − μ₀ + c/2 − ε(p) in a cancellation-free form.
    fn e0_bracket(&self, p2: f64) -> f64 {
        let a = p2 - self.mu0;
        let c = self.coupling();
        0.25 * c * c / (a + 0.5 * c + (a * (a + c)).sqrt())
    }

    /// E₀ = −½ Σ_{P_B} [|p|² − μ₀ + 8π𝔞_N N₀ − ε(p)].
    pub fn e0_ground(&self) -> f64 {
        let mut acc = crate::numerics::CompensatedSum::new();
        for s in self.pb_shells() {
            acc.add(s.multiplicity as f64 * self.e0_bracket(s.norm_sq()));
        }
        -0.5 * acc.value()
    }

    pub fn occupations(&self, p2: f64) -> OccupationPair {
        let m = self.mode(p2);
        let gd = bose(self.beta * self.dispersion(p2));
        OccupationPair {
            gamma: (1.0 + 2.0 * m.v * m.v) * gd + m.v * m.v,
            gamma_diag: gd,
            alpha: (m.u * m.v * (2.0 * gd + 1.0)).abs(),
        }
    }

    /// Σ_{Λ*₊} γ_p^diag over the model's lattice.
    pub fn gamma_diag_sum(&self) -> Result<f64> {
        shell_sum(&self.shells, |p2| bose(self.beta * self.dispersion(p2)))
    }

    /// −(1/2β) Σ_{Λ*₊} [x − log(1 + x)], x = c/|p|².
    ///
    /// The quadratic and cubic parts of the summand are summed in closed
    /// form through Σ|n|⁻⁴ and Σ|n|⁻⁶; only the remainder, which decays
    /// like |p|⁻⁸, is summed on the lattice, with a certified tail.
    pub fn bog_correction(&self) -> Result<Bracketed> {
        bog_correction(self.coupling(), self.beta)
    }

    /// (1/β) Σ_{Λ*₊} log(1 − e^{−βε(p)}) with certified tail.
    pub fn free_energy_direct(&self) -> Result<Bracketed> {
        let beta = self.beta;
        let value = shell_sum(&self.shells, |p2| log1mexp(beta * self.dispersion(p2)))? / beta;
        let y = -beta * self.mu0;
        // ε ≥ |p|² − μ₀ beyond the table, where ε is free anyway.
        let tail = sum_integral_upper_bound(|p| -log1mexp(beta * p * p + y), self.shells.p_max(), 1.0 / beta.sqrt())?;
        Ok(Bracketed {
            value,
            tail_bound: tail / beta,
        })
    }

    /// Compare the P_B part of the Bogoliubov free energy with its
    /// expansion; see [`ExpansionCheck`].
    pub fn expansion_check(&self) -> Result<ExpansionCheck> {
        let beta = self.beta;
        let c = self.coupling();
        let mut lhs = crate::numerics::CompensatedSum::new();
        let mut free = crate::numerics::CompensatedSum::new();
        let mut occ = crate::numerics::CompensatedSum::new();
        for s in self.pb_shells() {
            let p2 = s.norm_sq();
            let w = s.multiplicity as f64;
            let a = p2 - self.mu0;
            lhs.add(w * log1mexp(beta * self.dispersion(p2)));
            free.add(w * log1mexp(beta * a));
            occ.add(w * bose(beta * a));
        }
        let correction = self.bog_correction()?;
        let lhs = lhs.value() / beta;
        let rhs = free.value() / beta + 0.5 * c * occ.value() + correction.value;
        let n = self.n_total;
        let nd = n.powf(self.delta_bog);
        let shape = (self.n0 / n).powi(2) * (nd + 1.0 / (beta * nd) + 1.0 / (beta * beta * self.n0));
        Ok(ExpansionCheck {
            lhs,
            rhs,
            residual: lhs - rhs,
            budget_shape: shape,
            pb_points: self.pb_point_count(),
        })
    }
}

/// −(1/2β) Σ_{Λ*₊} [c/|p|² − log(1 + c/|p|²)].
pub fn bog_correction(c: f64, beta: f64) -> Result<Bracketed> {
    if !(c >= 0.0 && beta > 0.0) {
        return Err(Error::Input(format!("need c ≥ 0 and β > 0, got {c}, {beta}")));
    }
    if c == 0.0 {
        return Ok(Bracketed {
            value: 0.0,
            tail_bound: 0.0,
        });
    }
    let s4 = CUBIC_INV_N4 / FOUR_PI_SQ.powi(2);
    let s6 = CUBIC_INV_N6 / FOUR_PI_SQ.powi(3);
    let poly = 0.5 * c * c * s4 - c * c * c * s6 / 3.0;
    let rem = |p: f64| log1p_quartic_remainder(c / (p * p));
    // Remainder tail ~ c⁴/(20π²λ⁵); pick λ for 1e-13 relative.
    let target = 1e-13 * 0.5 * c * c * s4;
    let cap = TWO_PI * MAX_RADIUS_INDEX as f64;
    let mut lambda = (TWO_PI * 8.0).max(2.0 * c.sqrt());
    let (table, tail) = loop {
        let lam = lambda.min(cap);
        let tail = sum_integral_upper_bound(rem, lam, lam)?;
        if tail <= target || lam >= cap {
            break (build_shells(lam)?, tail);
        }
        lambda *= 1.5;
    };
    let partial = shell_sum(&table, |p2| log1p_quartic_remainder(c / p2))?;
    // Σ[x − log(1+x)] = Σ(x²/2 − x³/3) + Σ remainder ∈ [poly + partial, poly + partial + tail].
    let sum = poly + partial;
    Ok(Bracketed {
        value: -sum / (2.0 * beta),
        tail_bound: tail / (2.0 * beta),
    })
}

/// Direct shell-by-shell evaluation of the same sum, for cross-checks.
pub fn bog_correction_direct(c: f64, beta: f64, table: &ShellTable) -> Result<f64> {
    Ok(-shell_sum(table, |p2| x_minus_log1p(c / p2))? / (2.0 * beta))
}

/// Result of comparing (1/β)Σ_{P_B} log(1 − e^{−βε}) with its expansion.
///
/// The budget is C·`budget_shape`, where
/// shape = (N₀/N)²(N^δ + 1/(βN^δ) + 1/(β²N₀)) and C is not known a priori.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub budget_shape: f64,
    pub pb_points: u64,
}

impl ExpansionCheck {
    pub fn ratio(&self) -> f64 {
        self.residual / self.budget_shape
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermoLimit {
    pub closed_form: f64,
    pub integral: f64,
    pub integral_error: f64,
}

impl ThermoLimit {
    pub fn relative_gap(&self) -> f64 {
        if self.closed_form == 0.0 {
            self.integral.abs()
        } else {
            ((self.integral - self.closed_form) / self.closed_form).abs()
        }
    }
}

/// Energy density −(1/2β(2π)³) ∫_{R³} [c/|p|² − log(1 + c/|p|²)] dp with
/// c = 16π𝔞ρ₀, both in closed form −(16√π/3β)(𝔞ρ₀)^{3/2} and by radial
/// quadrature.
pub fn thermo_limit_correction(beta: f64, a: f64, rho0: f64) -> Result<ThermoLimit> {
    if !(beta > 0.0 && a >= 0.0 && rho0 >= 0.0) {
        return Err(Error::Input(format!(
            "need β > 0, 𝔞 ≥ 0, ρ₀ ≥ 0; got {beta}, {a}, {rho0}"
        )));
    }
    let ar = a * rho0;
    let closed_form = -16.0 * PI.sqrt() / (3.0 * beta) * ar.powf(1.5);
    if ar == 0.0 {
        return Ok(ThermoLimit {
            closed_form,
            integral: 0.0,
            integral_error: 0.0,
        });
    }
    let c = 16.0 * PI * ar;
    let radial = |p: f64| {
        if p == 0.0 {
            return c;
        }
        let p2 = p * p;
        p2 * x_minus_log1p(c / p2)
    };
    let r = integrate_to_infinity(radial, 0.0, c.sqrt(), QuadOptions::rel(1e-13))
        .map_err(|e| e.context("thermodynamic-limit integral"))?;
    let pref = -4.0 * PI / (2.0 * beta * (TWO_PI * TWO_PI * TWO_PI));
    Ok(ThermoLimit {
        closed_form,
        integral: pref * r.value,
        integral_error: (pref * r.error).abs(),
    })
}
