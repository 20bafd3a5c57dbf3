//! Classical one-mode theory of the interacting condensate.
//!
//! The condensate amplitude z ∈ C has density ∝ exp(−β(h|z|⁴ − μ|z|²))
//! with h = 4π𝔞_N, optionally restricted to |z|² ≤ T. With dz = π⁻¹dxdy
//! every radial integral reduces to one over t = |z|² ∈ [0, T], and in
//! x = √(βh)·t the weight becomes e^{2ηx − x²} on [0, A] with
//! η = μ√(β/4h) and A = √(βh)·T.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::quad::{integrate, QuadOptions};
use crate::numerics::roots::{brent, expand_bracket, RootOptions};
use crate::numerics::special::{erf, erfcx, log_half_erfc_neg, mills_tail, sqrt_pi};

pub const DEFAULT_C_TILDE: f64 = 4.0;
pub const DEFAULT_B_TILDE: f64 = 1.5;
pub const DEFAULT_REGIME_EPS: f64 = 0.05;

/// Quadrature ranges stop where the weight has dropped by e^{−60}.
const LOG_RANGE: f64 = 60.0;

fn check_cutoff(a: f64) -> Result<()> {
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Input(format!("cutoff A must be positive or infinite, got {a}")));
    }
    Ok(())
}

/// Υ(η) = ⟨x⟩ for the weight e^{2ηx − x²} on [0, A]; `a` may be infinite.
///
/// Equals √(βh) times the mean of |z|². All factors e^{η²}·erf[…] are
/// carried by erfcx so nothing overflows, and η > A/2 is reduced to
/// η < A/2 by the reflection x ↦ A − x.
pub fn upsilon(eta: f64, a: f64) -> Result<f64> {
    check_cutoff(a)?;
    if !eta.is_finite() {
        return Err(Error::Input(format!("η must be finite, got {eta}")));
    }
    let v = upsilon_unchecked(eta, a);
    if !v.is_finite() {
        return Err(Error::NonFinite {
            context: format!("Υ({eta}, {a})"),
        });
    }
    Ok(v)
}

fn upsilon_unchecked(eta: f64, a: f64) -> f64 {
    let sp = sqrt_pi();
    if a.is_infinite() {
        return if eta < 0.0 {
            mills_tail(-eta)
        } else {
            eta + 1.0 / (sp * erfcx(-eta))
        };
    }
    if eta > 0.5 * a {
        return a - upsilon_unchecked(a - eta, a);
    }
    let lo = -eta;
    let hi = a - eta;
    // d = A(A − 2η) ≥ 0; the upper end carries a factor e^{−d}.
    let d = a * (hi + lo);
    let q = (-d).exp();
    if lo > 1.0 {
        let (ea, eb) = (erfcx(lo), erfcx(hi));
        // Υ = K(−η) + q(E_b − E_a)/(√π E_a (E_a − q E_b)), K the Mills tail.
        mills_tail(lo) + q * (eb - ea) / (sp * ea * (ea - q * eb))
    } else {
        // Here e^{−η²} ≥ e^{−1}, so plain error functions suffice.
        let num = (-lo * lo).exp() * -(-d).exp_m1();
        let den = sp * (erf(hi) - erf(lo));
        eta + num / den
    }
}

/// ln ∫₀^A e^{2ηx − x²} dx, overflow-free.
fn log_weight_mass(eta: f64, a: f64) -> f64 {
    let half_sp = 0.5 * sqrt_pi();
    if a.is_infinite() {
        return if eta <= 0.0 {
            (half_sp * erfcx(-eta)).ln()
        } else {
            eta * eta + (2.0 * half_sp).ln() + log_half_erfc_neg(eta)
        };
    }
    if eta > 0.5 * a {
        return 2.0 * eta * a - a * a + log_weight_mass(a - eta, a);
    }
    let lo = -eta;
    let hi = a - eta;
    if lo >= 0.0 {
        let q = (-a * (hi + lo)).exp();
        half_sp.ln() + (erfcx(lo) - q * erfcx(hi)).ln()
    } else {
        eta * eta + half_sp.ln() + (erf(hi) - erf(lo)).ln()
    }
}

/// Both sides of 2e^{x²}∫ₓ^∞ e^{−t²}dt = 1/x − 1/(2x³) + Q(x).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErfAsymptotic {
    pub x: f64,
    /// √π·erfcx(x).
    pub scaled: f64,
    pub expansion: f64,
    /// Q(x) = scaled − expansion.
    pub remainder: f64,
    /// 3/(4x⁵).
    pub bound: f64,
}

impl ErfAsymptotic {
    pub fn holds(&self) -> bool {
        self.remainder.abs() <= self.bound
    }
}

pub fn erf_asymptotic_check(x: f64) -> Result<ErfAsymptotic> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Input(format!("x must be positive, got {x}")));
    }
    let scaled = sqrt_pi() * erfcx(x);
    let expansion = 1.0 / x - 0.5 / (x * x * x);
    Ok(ErfAsymptotic {
        x,
        scaled,
        expansion,
        remainder: scaled - expansion,
        bound: 0.75 / x.powi(5),
    })
}

/// Density parameters of the one-mode theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CondensateModel {
    pub beta: f64,
    /// 4π𝔞_N.
    pub h: f64,
    pub mu: f64,
    /// Cutoff on t = |z|², `None` for the untruncated density.
    pub t_max: Option<f64>,
    /// μ√(β/4h); absent when h = 0.
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CondensateMoments {
    /// ln Z, Z = ∫₀^T e^{−β(ht² − μt)} dt.
    pub log_z: f64,
    /// ⟨|z|²⟩.
    pub m1: f64,
    /// ⟨|z|⁴⟩.
    pub m2: f64,
    /// ⟨|z|⁴⟩ − ⟨|z|²⟩², computed centred.
    pub variance: f64,
    /// −∫ g log g.
    pub entropy_cl: f64,
}

impl CondensateMoments {
    pub fn z_norm(&self) -> f64 {
        self.log_z.exp()
    }
}

impl CondensateModel {
    pub fn new(beta: f64, h: f64, mu: f64, t_max: Option<f64>) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Input(format!("β must be positive, got {beta}")));
        }
        if !(h >= 0.0 && h.is_finite()) {
            return Err(Error::Input(format!("h must be nonnegative, got {h}")));
        }
        if !mu.is_finite() {
            return Err(Error::Input(format!("μ must be finite, got {mu}")));
        }
        if let Some(t) = t_max {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Input(format!("cutoff must be positive, got {t}")));
            }
            if h == 0.0 {
                return Err(Error::Precondition("a particle cutoff needs h > 0".into()));
            }
        } else if h == 0.0 && mu >= 0.0 {
            return Err(Error::Domain(format!("the free density needs μ < 0, got {mu}")));
        }
        let eta = (h > 0.0).then(|| mu * (beta / (4.0 * h)).sqrt());
        Ok(Self {
            beta,
            h,
            mu,
            t_max,
            eta,
        })
    }

    /// The truncated density: |z|² ≤ c̃N with μ̃
    /// fixed by ⟨|z|²⟩ = M. Requires c̃ > 2, 1 < b̃ < c̃/2 and 0 < M < b̃N.
    pub fn with_particle_cutoff(beta: f64, h: f64, m: f64, n: f64, c_tilde: f64, b_tilde: f64) -> Result<Self> {
        if !(c_tilde > 2.0) {
            return Err(Error::Precondition(format!("c̃ must exceed 2, got {c_tilde}")));
        }
        if !(b_tilde > 1.0 && b_tilde < 0.5 * c_tilde) {
            return Err(Error::Precondition(format!(
                "need 1 < b̃ < c̃/2, got b̃ = {b_tilde}, c̃ = {c_tilde}"
            )));
        }
        if !(m > 0.0 && m < b_tilde * n) {
            return Err(Error::Precondition(format!(
                "need 0 < M < b̃N, got M = {m}, b̃N = {}",
                b_tilde * n
            )));
        }
        solve_mu(beta, h, m, Some(c_tilde * n))
    }

    /// A = √(βh)·T, infinite without cutoff.
    pub fn cutoff_a(&self) -> f64 {
        match self.t_max {
            Some(t) => (self.beta * self.h).sqrt() * t,
            None => f64::INFINITY,
        }
    }

    /// Closed-form ln Z.
    pub fn log_z(&self) -> f64 {
        match self.eta {
            None => -(self.beta * -self.mu).ln(),
            Some(eta) => -0.5 * (self.beta * self.h).ln() + log_weight_mass(eta, self.cutoff_a()),
        }
    }

    /// Closed-form ⟨|z|²⟩ = Υ(η)/√(βh).
    pub fn mean(&self) -> f64 {
        match self.eta {
            None => 1.0 / (self.beta * -self.mu),
            Some(eta) => upsilon_unchecked(eta, self.cutoff_a()) / (self.beta * self.h).sqrt(),
        }
    }

    /// Normalised density at t = |z|², zero beyond the cutoff.
    pub fn density(&self, t: f64) -> f64 {
        if t < 0.0 || self.t_max.is_some_and(|m| t > m) {
            return 0.0;
        }
        (-self.beta * (self.h * t * t - self.mu * t) - self.log_z()).exp()
    }

    /// The truncated density ζ; errors on a model without cutoff.
    pub fn zeta_density(&self, t: f64) -> Result<f64> {
        if self.t_max.is_none() {
            return Err(Error::Precondition("ζ needs a finite cutoff".into()));
        }
        if !(t >= 0.0) {
            return Err(Error::Input(format!("t = |z|² must be nonnegative, got {t}")));
        }
        Ok(self.density(t))
    }

    /// −(1/β) ln Z + μN₀.
    pub fn free_energy(&self, n0: f64) -> f64 {
        -self.log_z() / self.beta + self.mu * n0
    }

    /// Moments by adaptive quadrature in t, with the weight measured
    /// relative to its maximum. h = 0 uses the exponential law directly.
    pub fn moments(&self) -> Result<CondensateMoments> {
        let (beta, h, mu) = (self.beta, self.h, self.mu);
        if h == 0.0 {
            let m1 = 1.0 / (beta * -mu);
            return Ok(CondensateMoments {
                log_z: m1.ln(),
                m1,
                m2: 2.0 * m1 * m1,
                variance: m1 * m1,
                entropy_cl: 1.0 + m1.ln(),
            });
        }
        let t_max = self.t_max.unwrap_or(f64::INFINITY);
        let t_hat = mu / (2.0 * h);
        let tp = t_hat.clamp(0.0, t_max);
        // exponent relative to the peak value; ≤ 0 on [0, T]
        let rel = |t: f64| -beta * (t - tp) * (h * (t + tp) - mu);
        let reach = |b: f64| 2.0 * LOG_RANGE / (b + (b * b + 4.0 * beta * h * LOG_RANGE).sqrt());
        let hi = if tp < t_max {
            (tp + reach(beta * (2.0 * h * tp - mu))).min(t_max)
        } else {
            tp
        };
        let lo = if tp > 0.0 {
            (tp - reach(beta * (mu - 2.0 * h * tp))).max(0.0)
        } else {
            0.0
        };
        let opts = QuadOptions::rel(1e-13);
        let both = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
            let left = integrate(g, lo, tp, opts)?;
            let right = integrate(g, tp, hi, opts)?;
            Ok(left.value + right.value)
        };
        let i0 = both(&|t| rel(t).exp())?;
        let i1 = both(&|t| (t - tp) * rel(t).exp())?;
        let m1 = tp + i1 / i0;
        let variance = both(&|t| (t - m1) * (t - m1) * rel(t).exp())? / i0;
        let mean_rel = both(&|t| rel(t) * rel(t).exp())? / i0;
        let log_z = -beta * tp * (h * tp - mu) + i0.ln();
        let out = CondensateMoments {
            log_z,
            m1,
            m2: variance + m1 * m1,
            variance,
            entropy_cl: i0.ln() - mean_rel,
        };
        if ![out.log_z, out.m1, out.variance, out.entropy_cl]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::NonFinite {
                context: format!("condensate moments at β = {beta}, h = {h}, μ = {mu}"),
            });
        }
        Ok(out)
    }

    /// Predictions for μ̃ at occupation `m` among `n` particles.
    pub fn mu_asymptotics(&self, m: f64, n: f64) -> MuAsymptotics {
        MuAsymptotics {
            mu: self.mu,
            condensed: 2.0 * self.h * m,
            dilute: -1.0 / (self.beta * m),
            bound_shape: 1.0 / (m * self.beta) + 1.0 / (self.beta * n).sqrt() + m / n,
        }
    }
}

/// Solve ⟨|z|²⟩ = `n0` for μ. `t_max` is the optional cutoff on |z|².
pub fn solve_mu(beta: f64, h: f64, n0: f64, t_max: Option<f64>) -> Result<CondensateModel> {
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::Precondition(format!(
            "target occupation must be positive, got {n0}"
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Input(format!("β must be positive, got {beta}")));
    }
    if h == 0.0 {
        if t_max.is_some() {
            return Err(Error::Precondition("a particle cutoff needs h > 0".into()));
        }
        return CondensateModel::new(beta, 0.0, -1.0 / (beta * n0), None);
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Input(format!("h must be nonnegative, got {h}")));
    }
    let s = (beta * h).sqrt();
    let a = t_max.map_or(f64::INFINITY, |t| s * t);
    let target = s * n0;
    if !(target < a) {
        return Err(Error::Precondition(format!(
            "target occupation {n0} is not below the cutoff {}",
            t_max.unwrap_or(f64::INFINITY)
        )));
    }
    let f = |eta: f64| upsilon_unchecked(eta, a) - target;
    // Υ ≈ η for large η and ≈ −1/(2η) for very negative η.
    let guess = if target > 1.0 { target } else { -0.5 / target };
    let guess = guess.min(0.5 * a);
    let (lo, hi) = expand_bracket(f, guess - 1.0, guess + 1.0, 200)?;
    let eta = brent(f, lo, hi, RootOptions::default())?;
    let residual = (f(eta) / target).abs();
    if !(residual <= 1e-12) {
        return Err(Error::Solver(format!(
            "Υ(η) = √(βh)N₀ solved only to {residual:e} at η = {eta}"
        )));
    }
    let mu = 2.0 * eta * (h / beta).sqrt();
    let mut model = CondensateModel::new(beta, h, mu, t_max)?;
    model.eta = Some(eta);
    Ok(model)
}

/// The untruncated model at interaction 4π`a_n` and occupation `n0`.
pub fn bec_model(beta: f64, n0: f64, a_n: f64) -> Result<CondensateModel> {
    if !(a_n >= 0.0) {
        return Err(Error::Input(format!("𝔞_N must be nonnegative, got {a_n}")));
    }
    solve_mu(beta, 4.0 * std::f64::consts::PI * a_n, n0, None)
}

/// F^BEC(β, N₀) = −(1/β) ln ∫ exp(−β(4π𝔞_N|z|⁴ − μ|z|²)) dz + μN₀.
pub fn f_bec(beta: f64, n0: f64, a_n: f64) -> Result<f64> {
    Ok(bec_model(beta, n0, a_n)?.free_energy(n0))
}

/// 4π𝔞_N N₀² + (1/2β) ln(4β𝔞_N), the large-N₀ form of F^BEC.
pub fn condensed_expansion(beta: f64, n0: f64, a_n: f64) -> f64 {
    4.0 * std::f64::consts::PI * a_n * n0 * n0 + fluctuation_term(beta, a_n)
}

/// (1/2β) ln(4β𝔞_N).
pub fn fluctuation_term(beta: f64, a_n: f64) -> f64 {
    (4.0 * beta * a_n).ln() / (2.0 * beta)
}

/// −(1/β)(ln N₀ + 1), the small-N₀ form of F^BEC.
pub fn noncondensed_expansion(beta: f64, n0: f64) -> f64 {
    -(n0.ln() + 1.0) / beta
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MuAsymptotics {
    pub mu: f64,
    /// 8π𝔞_N M.
    pub condensed: f64,
    /// −1/(βM).
    pub dilute: f64,
    /// 1/(Mβ) + 1/√(βN) + M/N.
    pub bound_shape: f64,
}

/// (1/2β) ln(4β𝔞_N) against 4π𝔞_N Var_g(|z|²) − S^cl(g)/β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FluctuationCheck {
    pub log_term: f64,
    pub fluctuation_free_energy: f64,
    pub variance: f64,
    pub entropy_cl: f64,
    pub residual: f64,
}

impl FluctuationCheck {
    pub fn relative(&self) -> f64 {
        self.residual / self.log_term.abs()
    }
}

pub fn fluctuation_identity_check(beta: f64, n0: f64, a_n: f64) -> Result<FluctuationCheck> {
    if !(a_n > 0.0) {
        return Err(Error::Precondition(format!(
            "the fluctuation identity needs 𝔞_N > 0, got {a_n}"
        )));
    }
    let m = bec_model(beta, n0, a_n)?.moments()?;
    let log_term = fluctuation_term(beta, a_n);
    let fluct = 4.0 * std::f64::consts::PI * a_n * m.variance - m.entropy_cl / beta;
    Ok(FluctuationCheck {
        log_term,
        fluctuation_free_energy: fluct,
        variance: m.variance,
        entropy_cl: m.entropy_cl,
        residual: (log_term - fluct).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// N₀ ≥ N^{5/6+ε}.
    Condensed,
    /// N₀ ≤ N^{5/6−ε}.
    Dilute,
    Transition,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    pub regime: Regime,
    pub eps: f64,
    pub lower_threshold: f64,
    pub upper_threshold: f64,
}

pub fn classify_regime(n0: f64, n: f64, eps: f64) -> Result<RegimeReport> {
    if !(eps > 0.0 && eps < 5.0 / 6.0) {
        return Err(Error::Input(format!("ε must lie in (0, 5/6), got {eps}")));
    }
    let lower = n.powf(5.0 / 6.0 - eps);
    let upper = n.powf(5.0 / 6.0 + eps);
    let regime = if n0 >= upper {
        Regime::Condensed
    } else if n0 <= lower {
        Regime::Dilute
    } else {
        Regime::Transition
    };
    Ok(RegimeReport {
        regime,
        eps,
        lower_threshold: lower,
        upper_threshold: upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn upsilon_against_high_precision_quadrature() {
        let inf = f64::INFINITY;
        let cases = [
            (0.0, 50.0, 0.5641895835477562869480795),
            (-3.0, 5.0, 0.1518768445016172124848921),
            (2.0, 5.0, 2.005144021076193075027399),
            (4.0, 5.0, 3.887364412198785115805983),
            (-30.0, inf, 0.01664819937811420283776863),
            (0.7, inf, 0.9060061892164573344255417),
            (10.0, inf, 10.0),
        ];
        for (eta, a, want) in cases {
            let got = upsilon(eta, a).unwrap();
            assert!(close(got, want, 1e-13), "Υ({eta}, {a}) = {got}, want {want}");
        }
    }

    #[test]
    fn upsilon_fixed_point_and_limits() {
        for a in [1.0, 10.0, 100.0, 1e3] {
            assert!((upsilon(0.5 * a, a).unwrap() - 0.5 * a).abs() <= 1e-12 * a);
        }
        assert!((upsilon(0.0, 50.0).unwrap() - 1.0 / PI.sqrt()).abs() < 1e-10);
        let far = upsilon(-30.0, f64::INFINITY).unwrap();
        assert!(far < 0.02 && close(far, 1.0 / 60.0, 0.01));
        assert!(upsilon(0.0, 0.0).is_err());
    }

    #[test]
    fn upsilon_finite_cutoff_approaches_infinite() {
        for eta in [-5.0, 0.0, 3.0, 20.0] {
            let a = upsilon(eta, 200.0).unwrap();
            let b = upsilon(eta, f64::INFINITY).unwrap();
            assert!(close(a, b, 1e-14), "{eta}: {a} vs {b}");
        }
    }

    #[test]
    fn erf_expansion_remainder() {
        for x in [1.0, 2.0, 5.0, 10.0, 50.0] {
            let c = erf_asymptotic_check(x).unwrap();
            assert!(c.holds(), "{c:?}");
        }
        assert!(erf_asymptotic_check(2.0).unwrap().remainder.abs() <= 3.0 / 128.0);
        assert!(erf_asymptotic_check(10.0).unwrap().remainder.abs() <= 7.5e-6);
        let c = erf_asymptotic_check(1e6).unwrap();
        assert!(close(c.scaled, c.expansion, 1e-12));
    }

    #[test]
    fn exponential_branch() {
        let (beta, mu) = (2.0, -0.25);
        let m = CondensateModel::new(beta, 0.0, mu, None).unwrap().moments().unwrap();
        let k = 1.0 / (beta * -mu);
        assert!(close(m.z_norm(), k, 1e-15));
        assert!(close(m.m1, k, 1e-15));
        assert!(close(m.m2, 2.0 * k * k, 1e-15));
        assert!(close(m.entropy_cl, 1.0 + k.ln(), 1e-15));
        assert!(CondensateModel::new(beta, 0.0, 0.1, None).is_err());
    }

    #[test]
    fn f_bec_against_high_precision_quadrature() {
        let a_n = 1.0 / (4.0 * PI);
        let model = bec_model(1.0, 3.0, a_n).unwrap();
        assert!(close(model.eta.unwrap(), 2.999965179078226074933299, 1e-13));
        assert!(close(model.log_z(), 9.572144970872314749224463, 1e-13));
        assert!(close(f_bec(1.0, 3.0, a_n).unwrap(), 8.427646103597041700375333, 1e-12));
        let m = model.moments().unwrap();
        assert!(close(m.log_z, 9.572144970872314749224463, 1e-12));
        assert!(close(m.m1, 3.0, 1e-12));
        assert!(close(m.variance, 0.4998955372346782247998984, 1e-11));
        assert!(close(m.entropy_cl, 1.072249433637636524424565, 1e-11));
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        for (beta, h, mu, t) in [
            (1.0, 1.0, -3.0, None),
            (0.5, 0.01, 4.0, None),
            (2.0, 1e-4, 0.5, Some(500.0)),
            (1.0, 0.3, 2.0, Some(4.0)),
            (1e-3, 1e-6, -2.0, Some(1e4)),
        ] {
            let model = CondensateModel::new(beta, h, mu, t).unwrap();
            let m = model.moments().unwrap();
            assert!(
                close(m.log_z, model.log_z(), 1e-12),
                "{model:?}: {} vs {}",
                m.log_z,
                model.log_z()
            );
            assert!(close(m.m1, model.mean(), 1e-12), "{model:?}");
            let identity = m.log_z + beta * (h * m.m2 - mu * m.m1);
            assert!(close(m.entropy_cl, identity, 1e-10), "{model:?}");
            assert!(m.m2 >= m.m1 * m.m1);
        }
    }

    #[test]
    fn solve_mu_round_trip() {
        for (beta, h, n0, t) in [
            (1.0, 1.0, 3.0, None),
            (0.01, 1e-5, 5e3, None),
            (0.01, 1e-5, 0.1, None),
            (1e-4, 1e-7, 6e5, None),
            (6.5e-4, 1.26e-5, 5e3, Some(4e4)),
        ] {
            let model = solve_mu(beta, h, n0, t).unwrap();
            assert!(close(model.mean(), n0, 1e-12));
            let m = model.moments().unwrap();
            assert!(close(m.m1, n0, 1e-10), "{n0}: {}", m.m1);
        }
        assert!(solve_mu(1.0, 1.0, 10.0, Some(5.0)).is_err());
        assert!(solve_mu(1.0, 1.0, -1.0, None).is_err());
    }

    #[test]
    fn particle_cutoff_preconditions() {
        let (beta, h, n) = (1e-3, 1e-5, 1e4);
        assert!(CondensateModel::with_particle_cutoff(beta, h, 5e3, n, DEFAULT_C_TILDE, DEFAULT_B_TILDE).is_ok());
        assert!(CondensateModel::with_particle_cutoff(beta, h, 2e4, n, DEFAULT_C_TILDE, DEFAULT_B_TILDE).is_err());
        assert!(CondensateModel::with_particle_cutoff(beta, h, 5e3, n, 2.0, 1.5).is_err());
        assert!(CondensateModel::with_particle_cutoff(beta, h, 5e3, n, 4.0, 2.5).is_err());
    }

    #[test]
    fn zeta_density_is_normalised_and_truncated() {
        let model = CondensateModel::with_particle_cutoff(1.0, 0.05, 3.0, 4.0, 4.0, 1.5).unwrap();
        let t_max = model.t_max.unwrap();
        assert_eq!(model.zeta_density(t_max * 1.0001).unwrap(), 0.0);
        let total = integrate(|t| model.zeta_density(t).unwrap(), 0.0, t_max, QuadOptions::rel(1e-13)).unwrap();
        assert!((total.value - 1.0).abs() < 1e-10);
        assert!(bec_model(1.0, 3.0, 0.1).unwrap().zeta_density(1.0).is_err());
    }

    #[test]
    fn regimes() {
        let n = 1e6;
        let r = classify_regime(6e5, n, DEFAULT_REGIME_EPS).unwrap();
        assert_eq!(r.regime, Regime::Condensed);
        assert_eq!(classify_regime(n.powf(0.7), n, 0.05).unwrap().regime, Regime::Dilute);
        assert_eq!(
            classify_regime(n.powf(5.0 / 6.0), n, 0.05).unwrap().regime,
            Regime::Transition
        );
        assert!(r.lower_threshold < r.upper_threshold);
    }

    #[test]
    fn fluctuation_check_rejects_free_condensate() {
        assert!(matches!(
            fluctuation_identity_check(1.0, 3.0, 0.0),
            Err(Error::Precondition(_))
        ));
    }
}
