//! Assembly of the upper bound on the free energy from its pieces.
//!
//! F ≤ F₀⁺ + 8π𝔞_N N² + min{F^BEC − 8π𝔞_N N₀², F₀^BEC} + (Bogoliubov
//! correction) + O(N^{11/18}). The remainder has no explicit constant and
//! is only reported as a scale.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bogoliubov::{bog_correction, DEFAULT_DELTA_BOG};
use crate::condensate::{bec_model, classify_regime, Regime, DEFAULT_REGIME_EPS};
use crate::error::{ensure_finite, Error, Result};
use crate::ideal_gas::{f0_bec, f0_plus_with_tail, solve_kappa, IdealGasState};
use crate::scattering::{solve_zero_energy, PotentialSpec};

/// Exponent of the unquantified remainder.
pub const ERROR_EXPONENT: f64 = 11.0 / 18.0;
/// Default ℓ = N^{−11/18}.
pub const DEFAULT_ELL_EXPONENT: f64 = -11.0 / 18.0;

/// How the scattering length is supplied.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    ScatteringLength(f64),
    Potential(PotentialSpec),
}

impl Interaction {
    /// Unscaled 𝔞; the GP-scaled length is 𝔞/N.
    pub fn scattering_length(&self) -> Result<f64> {
        match self {
            Interaction::ScatteringLength(a) => {
                if !(*a >= 0.0 && a.is_finite()) {
                    return Err(Error::Input(format!("scattering length must be nonnegative, got {a}")));
                }
                Ok(*a)
            }
            Interaction::Potential(p) => Ok(solve_zero_energy(p)
                .map_err(|e| e.context("scattering length"))?
                .scattering_length),
        }
    }

    fn potential(&self) -> Option<PotentialSpec> {
        match self {
            Interaction::Potential(p) => Some(p.clone()),
            Interaction::ScatteringLength(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundOptions {
    pub delta_bog: f64,
    pub ell_exponent: f64,
    pub regime_eps: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            delta_bog: DEFAULT_DELTA_BOG,
            ell_exponent: DEFAULT_ELL_EXPONENT,
            regime_eps: DEFAULT_REGIME_EPS,
        }
    }
}

impl BoundOptions {
    fn validate(&self) -> Result<()> {
        if !(self.delta_bog > 0.0 && self.delta_bog.is_finite()) {
            return Err(Error::Input(format!("δ_Bog must be positive, got {}", self.delta_bog)));
        }
        if !(self.ell_exponent < 0.0) {
            return Err(Error::Input(format!(
                "ℓ exponent must be negative, got {}",
                self.ell_exponent
            )));
        }
        if !(self.regime_eps > 0.0 && self.regime_eps < 5.0 / 6.0) {
            return Err(Error::Input(format!("ε must lie in (0, 5/6), got {}", self.regime_eps)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Interacting,
    Ideal,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Interacting => "interacting",
            Branch::Ideal => "ideal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundForm {
    /// Minimum over both condensate branches.
    Theorem,
    /// κ > 1: the interacting branch replaced by its large-N₀ expansion.
    Condensed,
    /// κ < 1: ideal condensate, no Bogoliubov term.
    Noncondensed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportInputs {
    pub n: f64,
    pub kappa: f64,
    pub beta: f64,
    pub beta_c: f64,
    pub a: f64,
    pub a_n: f64,
    pub potential: Option<PotentialSpec>,
    pub delta_bog: f64,
    /// N^{ℓ exponent}; enters only the error scale.
    pub ell: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReportTerms {
    pub f0_plus: f64,
    /// 8π𝔞_N N².
    pub density_density: f64,
    /// The condensate contribution that enters the total.
    pub condensate: f64,
    /// F^BEC − 8π𝔞_N N₀².
    pub condensate_branch_interacting: Option<f64>,
    /// F₀^BEC.
    pub condensate_branch_ideal: Option<f64>,
    pub f_bec: Option<f64>,
    pub bog_correction: Option<f64>,
    pub selected_branch: Option<Branch>,
}

impl ReportTerms {
    fn sum(&self) -> f64 {
        self.f0_plus + self.density_density + self.condensate + self.bog_correction.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorScale {
    pub exponent: f64,
    /// N^{11/18}; the constant in front is not known.
    pub n_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    pub mu0: f64,
    pub n0: f64,
    pub ideal_residual: f64,
    pub occupation_tail: f64,
    pub f0_plus_tail: f64,
    pub bog_correction_tail: Option<f64>,
    pub condensate_mu: Option<f64>,
    pub condensate_eta: Option<f64>,
    pub regime: Regime,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreeEnergyReport {
    pub form: BoundForm,
    pub inputs: ReportInputs,
    pub terms: ReportTerms,
    pub total: f64,
    pub error_scale: ErrorScale,
    pub diagnostics: Diagnostics,
}

/// A certified tail is flagged when it exceeds this fraction of its term.
pub const TAIL_FLAG_REL: f64 = 1e-10;

impl FreeEnergyReport {
    /// Names of the lattice truncations whose certified tail is not
    /// negligible against the term it belongs to.
    pub fn tail_flags(&self) -> Vec<&'static str> {
        let d = &self.diagnostics;
        let mut out = Vec::new();
        if d.occupation_tail > TAIL_FLAG_REL * self.inputs.n {
            out.push("occupation");
        }
        if d.f0_plus_tail > TAIL_FLAG_REL * self.terms.f0_plus.abs() {
            out.push("f0_plus");
        }
        if let (Some(t), Some(b)) = (d.bog_correction_tail, self.terms.bog_correction) {
            if t > TAIL_FLAG_REL * b.abs() && t > 0.0 {
                out.push("bog_correction");
            }
        }
        out
    }
}

struct Common {
    state: IdealGasState,
    inputs: ReportInputs,
    f0_plus: f64,
    f0_plus_tail: f64,
    density_density: f64,
    regime: Regime,
}

fn common(n: f64, kappa: f64, interaction: &Interaction, opts: &BoundOptions) -> Result<Common> {
    opts.validate()?;
    if !(n >= 10.0 && n.is_finite()) {
        return Err(Error::Input(format!("N must be at least 10, got {n}")));
    }
    let a = interaction.scattering_length()?;
    let state = solve_kappa(kappa, n).map_err(|e| e.context("ideal gas"))?;
    let (f0_plus, f0_plus_tail) = f0_plus_with_tail(&state).map_err(|e| e.context("f0_plus"))?;
    let a_n = a / n;
    let regime = classify_regime(state.n0, n, opts.regime_eps)?.regime;
    Ok(Common {
        inputs: ReportInputs {
            n,
            kappa,
            beta: state.beta,
            beta_c: state.beta_c,
            a,
            a_n,
            potential: interaction.potential(),
            delta_bog: opts.delta_bog,
            ell: n.powf(opts.ell_exponent),
        },
        f0_plus,
        f0_plus_tail,
        density_density: 8.0 * PI * a_n * n * n,
        regime,
        state,
    })
}

impl Common {
    fn error_scale(&self) -> ErrorScale {
        ErrorScale {
            exponent: ERROR_EXPONENT,
            n_power: self.inputs.n.powf(ERROR_EXPONENT),
        }
    }

    fn diagnostics(&self, bog_tail: Option<f64>, cond: Option<(f64, Option<f64>)>) -> Diagnostics {
        Diagnostics {
            mu0: self.state.mu0,
            n0: self.state.n0,
            ideal_residual: self.state.residual,
            occupation_tail: self.state.occupation_tail,
            f0_plus_tail: self.f0_plus_tail,
            bog_correction_tail: bog_tail,
            condensate_mu: cond.map(|c| c.0),
            condensate_eta: cond.and_then(|c| c.1),
            regime: self.regime,
        }
    }

    fn bog(&self) -> Result<(f64, f64)> {
        let c = 16.0 * PI * self.inputs.a_n * self.state.n0;
        let b = bog_correction(c, self.state.beta).map_err(|e| e.context("bog_correction"))?;
        Ok((b.value, b.tail_bound))
    }

    fn finish(self, form: BoundForm, terms: ReportTerms, diagnostics: Diagnostics) -> Result<FreeEnergyReport> {
        let total = ensure_finite(terms.sum(), || "total free energy bound".into())?;
        Ok(FreeEnergyReport {
            form,
            error_scale: self.error_scale(),
            inputs: self.inputs,
            terms,
            total,
            diagnostics,
        })
    }
}

/// The full bound with the condensate minimum evaluated numerically.
pub fn theorem_bound(n: f64, kappa: f64, interaction: &Interaction, opts: &BoundOptions) -> Result<FreeEnergyReport> {
    let c = common(n, kappa, interaction, opts)?;
    let (beta, n0, a_n) = (c.state.beta, c.state.n0, c.inputs.a_n);
    let model = bec_model(beta, n0, a_n).map_err(|e| e.context("f_bec"))?;
    let fb = model.free_energy(n0);
    let interacting = fb - 8.0 * PI * a_n * n0 * n0;
    let ideal = f0_bec(&c.state).map_err(|e| e.context("f0_bec"))?;
    let (branch, condensate) = if interacting < ideal {
        (Branch::Interacting, interacting)
    } else {
        (Branch::Ideal, ideal)
    };
    let (bog, bog_tail) = c.bog()?;
    let terms = ReportTerms {
        f0_plus: c.f0_plus,
        density_density: c.density_density,
        condensate,
        condensate_branch_interacting: Some(interacting),
        condensate_branch_ideal: Some(ideal),
        f_bec: Some(fb),
        bog_correction: Some(bog),
        selected_branch: Some(branch),
    };
    let diag = c.diagnostics(Some(bog_tail), Some((model.mu, model.eta)));
    c.finish(BoundForm::Theorem, terms, diag)
}

/// κ > 1: F₀⁺ + 4π𝔞_N(2N² − N₀²) + (1/2β) ln(4β𝔞_N) + Bogoliubov term.
pub fn corollary_condensed(
    n: f64,
    kappa: f64,
    interaction: &Interaction,
    opts: &BoundOptions,
) -> Result<FreeEnergyReport> {
    if !(kappa > 1.0) {
        return Err(Error::Precondition(format!(
            "the condensed form needs κ > 1, got {kappa}"
        )));
    }
    let c = common(n, kappa, interaction, opts)?;
    let (beta, n0, a_n) = (c.state.beta, c.state.n0, c.inputs.a_n);
    if !(a_n > 0.0) {
        return Err(Error::Precondition("the condensed form needs 𝔞 > 0".into()));
    }
    let condensate = -4.0 * PI * a_n * n0 * n0 + (4.0 * beta * a_n).ln() / (2.0 * beta);
    let (bog, bog_tail) = c.bog()?;
    let terms = ReportTerms {
        f0_plus: c.f0_plus,
        density_density: c.density_density,
        condensate,
        condensate_branch_interacting: None,
        condensate_branch_ideal: None,
        f_bec: None,
        bog_correction: Some(bog),
        selected_branch: None,
    };
    let diag = c.diagnostics(Some(bog_tail), None);
    c.finish(BoundForm::Condensed, terms, diag)
}

/// κ < 1: F₀ + 8π𝔞_N N².
pub fn corollary_noncondensed(
    n: f64,
    kappa: f64,
    interaction: &Interaction,
    opts: &BoundOptions,
) -> Result<FreeEnergyReport> {
    if !(kappa < 1.0) {
        return Err(Error::Precondition(format!(
            "the non-condensed form needs κ < 1, got {kappa}"
        )));
    }
    let c = common(n, kappa, interaction, opts)?;
    let ideal = f0_bec(&c.state).map_err(|e| e.context("f0_bec"))?;
    let terms = ReportTerms {
        f0_plus: c.f0_plus,
        density_density: c.density_density,
        condensate: ideal,
        condensate_branch_interacting: None,
        condensate_branch_ideal: Some(ideal),
        f_bec: None,
        bog_correction: None,
        selected_branch: None,
    };
    let diag = c.diagnostics(None, None);
    c.finish(BoundForm::Noncondensed, terms, diag)
}

/// F^BEC − 8π𝔞_N N₀² against F₀^BEC − μ₀/2 for small condensates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchGap {
    pub n0: f64,
    pub mu0: f64,
    /// ln N₀ / ln N.
    pub n0_exponent: f64,
    pub interacting: f64,
    pub ideal_shifted: f64,
    /// interacting − ideal_shifted; the claim is gap ≥ −C·N^{1/2}.
    pub gap: f64,
    pub budget_shape: f64,
}

impl BranchGap {
    /// gap / N^{1/2}, the smallest admissible C is −min(this, 0).
    pub fn scaled_gap(&self) -> f64 {
        self.gap / self.budget_shape
    }
}

/// Largest admissible ε₀ in N₀ ≲ N^{2/3+ε₀}.
pub const GAP_EPS0: f64 = 1.0 / 12.0;

pub fn branch_gap_check(n: f64, kappa: f64, a: f64) -> Result<BranchGap> {
    if !(a >= 0.0) {
        return Err(Error::Input(format!("scattering length must be nonnegative, got {a}")));
    }
    let state = solve_kappa(kappa, n)?;
    let n0 = state.n0;
    let exponent = n0.ln() / n.ln();
    if !(exponent < 2.0 / 3.0 + GAP_EPS0) {
        return Err(Error::Precondition(format!(
            "N₀ = {n0:e} = N^{exponent:.4} is outside N₀ ≲ N^{{2/3+1/12}}"
        )));
    }
    let a_n = a / n;
    let interacting = bec_model(state.beta, n0, a_n)?.free_energy(n0) - 8.0 * PI * a_n * n0 * n0;
    let ideal_shifted = f0_bec(&state)? - 0.5 * state.mu0;
    Ok(BranchGap {
        n0,
        mu0: state.mu0,
        n0_exponent: exponent,
        interacting,
        ideal_shifted,
        gap: interacting - ideal_shifted,
        budget_shape: n.sqrt(),
    })
}
