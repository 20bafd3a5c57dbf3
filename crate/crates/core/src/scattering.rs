//! Zero-energy s-wave scattering for radial, compactly supported,
//! nonnegative potentials (units ħ = 2m = 1), and the truncated profile
//! f_ℓ with its energy and integral bounds.
//!
//! Writing f(r) = u(r)/r, the equation Δf = (V/2) f becomes
//! u'' = (V/2) u. The solver carries w = r u' − u alongside (u, u'), since
//! w' = r (V/2) u ≥ 0 and outside the support u = c (r − 𝔞) with
//! 𝔞 = w/c read off without cancellation.

use std::f64::consts::PI;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::ode::{self, OdeOptions};
use crate::numerics::{integrate, QuadOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialSpec {
    HardCore {
        radius: f64,
    },
    SquareBarrier {
        radius: f64,
        height: f64,
    },
    /// Piecewise linear through the nodes, zero beyond the last one.
    Tabulated {
        r: Vec<f64>,
        v: Vec<f64>,
    },
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::HardCore { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Input(format!("hard-core radius must be positive, got {radius}")));
                }
            }
            PotentialSpec::SquareBarrier { radius, height } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Input(format!("barrier radius must be positive, got {radius}")));
                }
                if !(*height >= 0.0 && height.is_finite()) {
                    return Err(Error::Input(format!(
                        "barrier height must be nonnegative, got {height}"
                    )));
                }
            }
            PotentialSpec::Tabulated { r, v } => {
                if r.len() != v.len() || r.len() < 2 {
                    return Err(Error::Input(
                        "tabulated potential needs at least two (r, V) rows".into(),
                    ));
                }
                if r[0] != 0.0 {
                    return Err(Error::Input(format!(
                        "tabulated grid must start at r = 0 to cover the support, starts at {}",
                        r[0]
                    )));
                }
                for w in r.windows(2) {
                    if !(w[1] > w[0]) || !w[1].is_finite() {
                        return Err(Error::Input(format!(
                            "tabulated radii must be strictly increasing and finite, got {} then {}",
                            w[0], w[1]
                        )));
                    }
                }
                if let Some(bad) = v.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
                    return Err(Error::Input(format!(
                        "tabulated potential values must be finite and ≥ 0, got {bad}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest R with V = 0 on (R, ∞).
    pub fn support_radius(&self) -> f64 {
        match self {
            PotentialSpec::HardCore { radius } => *radius,
            PotentialSpec::SquareBarrier { radius, height } => {
                if *height == 0.0 {
                    0.0
                } else {
                    *radius
                }
            }
            PotentialSpec::Tabulated { r, v } => match v.iter().rposition(|x| *x > 0.0) {
                None => 0.0,
                Some(k) if k + 1 < r.len() => r[k + 1],
                Some(k) => r[k],
            },
        }
    }

    /// V(r); infinite inside a hard core.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::HardCore { radius } => {
                if x < *radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            PotentialSpec::SquareBarrier { radius, height } => {
                if x <= *radius {
                    *height
                } else {
                    0.0
                }
            }
            PotentialSpec::Tabulated { r, v } => {
                if x > *r.last().unwrap() || x < 0.0 {
                    return 0.0;
                }
                let k = r.partition_point(|t| *t <= x);
                if k == r.len() {
                    return *v.last().unwrap();
                }
                let (r0, r1, v0, v1) = (r[k - 1], r[k], v[k - 1], v[k]);
                v0 + (v1 - v0) * (x - r0) / (r1 - r0)
            }
        }
    }

    /// The rescaled potential N² V(N r).
    pub fn scaled(&self, n: f64) -> PotentialSpec {
        match self {
            PotentialSpec::HardCore { radius } => PotentialSpec::HardCore { radius: radius / n },
            PotentialSpec::SquareBarrier { radius, height } => PotentialSpec::SquareBarrier {
                radius: radius / n,
                height: height * n * n,
            },
            PotentialSpec::Tabulated { r, v } => PotentialSpec::Tabulated {
                r: r.iter().map(|x| x / n).collect(),
                v: v.iter().map(|x| x * n * n).collect(),
            },
        }
    }

    /// Parse two whitespace-separated columns (r, V); `#` starts a comment.
    pub fn parse_table(text: &str) -> Result<PotentialSpec> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::Input(format!(
                    "line {}: expected two columns, found {}",
                    lineno + 1,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Input(format!("line {}: cannot parse {s:?}: {e}", lineno + 1)))
            };
            r.push(parse(cols[0])?);
            v.push(parse(cols[1])?);
        }
        let spec = PotentialSpec::Tabulated { r, v };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<PotentialSpec> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_table(&text)
    }

    /// Points where V may be non-smooth, within (0, R].
    fn breakpoints(&self) -> Vec<f64> {
        match self {
            PotentialSpec::HardCore { radius } => vec![*radius],
            PotentialSpec::SquareBarrier { radius, .. } => vec![*radius],
            PotentialSpec::Tabulated { r, .. } => {
                let rs = self.support_radius();
                r.iter().copied().filter(|x| *x > 0.0 && *x <= rs).collect()
            }
        }
    }
}

/// 𝔞_N = 𝔞/N.
pub fn scattering_length_scaled(a: f64, n: f64) -> f64 {
    a / n
}

const GRID_NODES: usize = 2048;
const AFFINE_TOL: f64 = 1e-10;
const GRID_DECADES: f64 = 6.0;

#[derive(Debug, Clone, Copy)]
struct Node {
    r: f64,
    /// (u, u', w), normalized so u'(R) = 1.
    y: [f64; 3],
}

#[derive(Debug, Clone, Serialize)]
pub struct ScatteringSolution {
    pub potential: PotentialSpec,
    pub scattering_length: f64,
    pub support_radius: f64,
    /// |𝔞 from the two-point exterior fit − 𝔞 from w/u'|.
    pub affine_mismatch: f64,
    #[serde(skip)]
    nodes: Vec<Node>,
}

fn rhs(pot: &PotentialSpec) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] + '_ {
    move |r, y| {
        let hv = 0.5 * pot.value(r);
        [y[1], hv * y[0], r * hv * y[0]]
    }
}

/// Radii over which one step of the growing solution stays well inside
/// the exponent range.
fn chunk_length(pot: &PotentialSpec) -> f64 {
    let vmax = match pot {
        PotentialSpec::SquareBarrier { height, .. } => *height,
        PotentialSpec::Tabulated { v, .. } => v.iter().copied().fold(0.0, f64::max),
        PotentialSpec::HardCore { .. } => 0.0,
    };
    if vmax > 0.0 {
        40.0 / (0.5 * vmax).sqrt()
    } else {
        f64::INFINITY
    }
}

pub fn solve_zero_energy(pot: &PotentialSpec) -> Result<ScatteringSolution> {
    pot.validate()?;
    let support = pot.support_radius();
    if let PotentialSpec::HardCore { radius } = pot {
        return Ok(ScatteringSolution {
            potential: pot.clone(),
            scattering_length: *radius,
            support_radius: *radius,
            affine_mismatch: 0.0,
            nodes: Vec::new(),
        });
    }
    if support == 0.0 {
        return Ok(ScatteringSolution {
            potential: pot.clone(),
            scattering_length: 0.0,
            support_radius: 0.0,
            affine_mismatch: 0.0,
            nodes: Vec::new(),
        });
    }

    let mut grid: Vec<f64> = (0..GRID_NODES)
        .map(|k| support * 10f64.powf(-GRID_DECADES * (GRID_NODES - 1 - k) as f64 / (GRID_NODES - 1) as f64))
        .collect();
    grid.extend(pot.breakpoints());
    let chunk = chunk_length(pot);
    if chunk.is_finite() {
        let mut x = chunk;
        while x < support {
            grid.push(x);
            x += chunk;
        }
    }
    grid.push(support);
    grid.sort_by(f64::total_cmp);
    grid.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs());
    *grid.last_mut().unwrap() = support;

    let opts = OdeOptions::default();
    let f = rhs(pot);
    let mut nodes = Vec::with_capacity(grid.len() + 1);
    // log of the factor each stored node must be multiplied by to sit on
    // the common normalization of the final state.
    let mut log_scale = Vec::with_capacity(grid.len() + 1);
    let mut cur_log = 0.0f64;
    let mut y = [0.0, 1.0, 0.0];
    let mut x = 0.0;
    nodes.push(Node { r: 0.0, y });
    log_scale.push(0.0);
    for &next in &grid {
        let h0 = (next - x) * 0.25;
        y = ode::integrate(&f, x, y, next, h0, opts).map_err(|e| e.context("zero-energy scattering ODE"))?;
        x = next;
        let big = y[1].abs().max(y[0].abs() / x.max(1e-300));
        if big > 1e100 {
            let s = big.ln();
            cur_log += s;
            for c in &mut y {
                *c /= big;
            }
        }
        nodes.push(Node { r: x, y });
        log_scale.push(cur_log);
    }
    let c = y[1];
    let scattering_length = y[2] / c;
    for (node, ls) in nodes.iter_mut().zip(&log_scale) {
        let factor = (ls - cur_log).exp() / c;
        for comp in &mut node.y {
            *comp *= factor;
        }
    }

    // Exterior affine check at R and 1.5 R.
    let r_far = 1.5 * support;
    let y_far = ode::integrate(&f, support, y, r_far, 0.5 * support, opts)?;
    let slope = (y_far[0] - y[0]) / (r_far - support);
    let a_fit = support - y[0] / slope;
    let affine_mismatch = (a_fit - scattering_length).abs();
    if !(scattering_length.is_finite()) {
        return Err(Error::Solver("scattering length is not finite".into()));
    }
    // The fit inherits the integrator's relative error in u, amplified by
    // R/𝔞 through the subtraction, so it is held to a looser standard.
    if affine_mismatch > AFFINE_TOL * support.max(scattering_length) {
        return Err(Error::Solver(format!(
            "exterior solution is not affine: two-point fit gives {a_fit:e}, flux gives {scattering_length:e}"
        )));
    }
    Ok(ScatteringSolution {
        potential: pot.clone(),
        scattering_length,
        support_radius: support,
        affine_mismatch,
        nodes,
    })
}

impl ScatteringSolution {
    pub fn is_hard_core(&self) -> bool {
        matches!(self.potential, PotentialSpec::HardCore { .. })
    }

    /// Stored (r, u(r) = r f(r)) samples on the solver grid.
    pub fn profile(&self) -> Vec<(f64, f64)> {
        self.nodes.iter().map(|n| (n.r, n.y[0])).collect()
    }

    /// Normalized state (u, u', w) at r ≤ R.
    fn state(&self, r: f64) -> [f64; 3] {
        let k = self.nodes.partition_point(|n| n.r <= r);
        let node = self.nodes[k.saturating_sub(1)];
        if node.r == r {
            return node.y;
        }
        let h0 = (r - node.r) * 0.5;
        ode::integrate(rhs(&self.potential), node.r, node.y, r, h0, OdeOptions::default()).unwrap_or([f64::NAN; 3])
    }

    /// f(r), with f → 1 at infinity.
    pub fn f(&self, r: f64) -> f64 {
        let a = self.scattering_length;
        if self.is_hard_core() {
            return if r <= a { 0.0 } else { 1.0 - a / r };
        }
        if r >= self.support_radius {
            return 1.0 - a / r;
        }
        let y = self.state(r);
        if r == 0.0 {
            y[1]
        } else {
            y[0] / r
        }
    }

    /// f'(r) = w/r² ≥ 0.
    pub fn df(&self, r: f64) -> f64 {
        let a = self.scattering_length;
        if self.is_hard_core() {
            return if r <= a { 0.0 } else { a / (r * r) };
        }
        if r >= self.support_radius {
            return a / (r * r);
        }
        if r == 0.0 {
            return 0.0;
        }
        self.state(r)[2] / (r * r)
    }

    pub fn f_ell(&self, ell: f64) -> Result<FEll<'_>> {
        if !(ell >= 2.0 * self.support_radius) || ell <= 0.0 {
            return Err(Error::Precondition(format!(
                "ℓ = {ell} must be at least twice the support radius {}",
                self.support_radius
            )));
        }
        let f_at_ell = 1.0 - self.scattering_length / ell;
        Ok(FEll {
            sol: self,
            ell,
            f_at_ell,
        })
    }

    /// Radii splitting [0, ℓ] into pieces on which the integrands are smooth.
    fn pieces(&self, ell: f64) -> Vec<f64> {
        let mut xs = vec![0.0];
        if self.is_hard_core() {
            xs.push(self.scattering_length);
        } else if self.support_radius > 0.0 {
            // Every 64th grid node, plus all potential breakpoints.
            xs.extend(self.nodes.iter().skip(1).step_by(64).map(|n| n.r));
            xs.extend(self.potential.breakpoints());
            xs.push(self.support_radius);
        }
        xs.push(ell);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.retain(|x| *x <= ell);
        xs
    }
}

/// f_ℓ(r) = f(r)/f(ℓ) for r < ℓ, 1 beyond.
#[derive(Debug, Clone, Copy)]
pub struct FEll<'a> {
    sol: &'a ScatteringSolution,
    ell: f64,
    f_at_ell: f64,
}

impl FEll<'_> {
    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn value(&self, r: f64) -> f64 {
        if r >= self.ell {
            1.0
        } else {
            self.sol.f(r) / self.f_at_ell
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r >= self.ell {
            0.0
        } else {
            self.sol.df(r) / self.f_at_ell
        }
    }

    fn radial_integral<G: Fn(f64) -> f64>(&self, g: G) -> Result<f64> {
        let xs = self.sol.pieces(self.ell);
        let opts = QuadOptions {
            rel_tol: 1e-13,
            abs_tol: 0.0,
            max_intervals: 2000,
        };
        let mut acc = crate::numerics::CompensatedSum::new();
        for w in xs.windows(2) {
            let r = integrate(|r| g(r) * r * r, w[0], w[1], opts)?;
            acc.add(r.value);
        }
        Ok(4.0 * PI * acc.value())
    }

    /// E_ℓ[f_ℓ + δ] = ∫_{|x|≤ℓ} |∇(f_ℓ+δ)|² + ½ V (f_ℓ+δ)² by quadrature.
    pub fn energy_with<D, DD>(&self, delta: D, d_delta: DD) -> Result<f64>
    where
        D: Fn(f64) -> f64,
        DD: Fn(f64) -> f64,
    {
        let hard = self.sol.is_hard_core();
        let a = self.sol.scattering_length;
        self.radial_integral(|r| {
            if hard && r < a {
                // Infinite wall: only profiles vanishing here have finite energy.
                return 0.0;
            }
            let phi = self.value(r) + delta(r);
            let dphi = self.derivative(r) + d_delta(r);
            let v = if hard { 0.0 } else { self.sol.potential.value(r) };
            dphi * dphi + 0.5 * v * phi * phi
        })
        .map_err(|e| e.context("energy functional"))
    }

    pub fn energy(&self) -> Result<f64> {
        self.energy_with(|_| 0.0, |_| 0.0)
    }

    /// (∫u_ℓ, ∫u_ℓ², ∫|∇f_ℓ|) over R³ with u_ℓ = 1 − f_ℓ.
    pub fn u_integrals(&self) -> Result<UEllIntegrals> {
        let u1 = self.radial_integral(|r| 1.0 - self.value(r))?;
        let u2 = self.radial_integral(|r| (1.0 - self.value(r)).powi(2))?;
        let g = self.radial_integral(|r| self.derivative(r))?;
        let a = self.sol.scattering_length;
        let ell = self.ell;
        Ok(UEllIntegrals {
            u: u1,
            u_sq: u2,
            grad: g,
            u_bound: U_CONST * a * ell * ell,
            u_sq_bound: U_SQ_CONST * a * a * ell,
            grad_bound: 8.0 * PI * a * ell,
        })
    }
}

/// Constants in ∫u_ℓ ≤ C𝔞ℓ² and ∫u_ℓ² ≤ C𝔞²ℓ, from u_ℓ ≤ min(1, 𝔞/r).
pub const U_CONST: f64 = 2.0 * PI;
pub const U_SQ_CONST: f64 = 4.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UEllIntegrals {
    pub u: f64,
    pub u_sq: f64,
    pub grad: f64,
    pub u_bound: f64,
    pub u_sq_bound: f64,
    pub grad_bound: f64,
}

impl UEllIntegrals {
    pub fn within_bounds(&self) -> bool {
        let slack = 1.0 + 1e-12;
        self.u <= self.u_bound * slack && self.u_sq <= self.u_sq_bound * slack && self.grad <= self.grad_bound * slack
    }
}

/// 4π𝔞_N / (1 − 𝔞_N/ℓ).
pub fn energy_f_ell(a_n: f64, ell: f64) -> Result<f64> {
    if !(ell > a_n) {
        return Err(Error::Domain(format!("ℓ = {ell} must exceed 𝔞_N = {a_n}")));
    }
    Ok(4.0 * PI * a_n / (1.0 - a_n / ell))
}

/// Closed form 𝔞 = R − tanh(kR)/k, k = √(V₀/2), for a square barrier.
pub fn square_barrier_length(radius: f64, height: f64) -> f64 {
    let k = (0.5 * height).sqrt();
    if k * radius < 1e-4 {
        // tanh(x)/x = 1 − x²/3 + 2x⁴/15
        let x2 = (k * radius).powi(2);
        return radius * (x2 / 3.0 - 2.0 * x2 * x2 / 15.0);
    }
    radius - (k * radius).tanh() / k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn barrier(radius: f64, height: f64) -> PotentialSpec {
        PotentialSpec::SquareBarrier { radius, height }
    }

    #[test]
    fn hard_core_branch() {
        let s = solve_zero_energy(&PotentialSpec::HardCore { radius: 0.5 }).unwrap();
        assert_eq!(s.scattering_length, 0.5);
        let fe = s.f_ell(2.0).unwrap();
        assert_eq!(fe.value(0.5), 0.0);
        assert_eq!(fe.value(3.0), 1.0);
        let ell = 4.0 * 0.5;
        assert!((fe.value(ell / 2.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn square_barrier_matches_closed_form() {
        for (r, v) in [(1.0, 1.0), (0.01, 100.0), (0.3, 5e4), (2.0, 1e-3), (1.0, 1e6)] {
            let s = solve_zero_energy(&barrier(r, v)).unwrap();
            let want = square_barrier_length(r, v);
            assert!(
                ((s.scattering_length - want) / want).abs() < 1e-10,
                "R={r} V0={v}: {} vs {want}",
                s.scattering_length
            );
        }
    }

    #[test]
    fn free_table_is_trivial() {
        let p = PotentialSpec::Tabulated {
            r: vec![0.0, 1.0],
            v: vec![0.0, 0.0],
        };
        let s = solve_zero_energy(&p).unwrap();
        assert_eq!(s.scattering_length, 0.0);
        assert_eq!(s.f(0.3), 1.0);
        let ints = s.f_ell(1.0).unwrap().u_integrals().unwrap();
        assert_eq!((ints.u, ints.u_sq, ints.grad), (0.0, 0.0, 0.0));
    }

    #[test]
    fn tabulated_step_equals_barrier() {
        let p = PotentialSpec::Tabulated {
            r: vec![0.0, 0.5, 0.5 + 1e-13],
            v: vec![8.0, 8.0, 0.0],
        };
        let s = solve_zero_energy(&p).unwrap();
        let want = square_barrier_length(0.5, 8.0);
        assert!((s.scattering_length - want).abs() < 1e-11);
    }

    #[test]
    fn parse_table_text() {
        let t = "# r V\n0 2.0\n0.5 1.0 # mid\n\n1.0 0\n";
        let p = PotentialSpec::parse_table(t).unwrap();
        assert_eq!(p.support_radius(), 1.0);
        assert_eq!(p.value(0.25), 1.5);
        assert!(PotentialSpec::parse_table("0.1 1\n0.2 0\n").is_err());
        assert!(PotentialSpec::parse_table("0 1\n0 0\n").is_err());
        assert!(PotentialSpec::parse_table("0 1\n1 -1\n").is_err());
        assert!(PotentialSpec::parse_table("0 1 2\n").is_err());
    }

    #[test]
    fn scaling_law() {
        let p = barrier(1.0, 30.0);
        let a = solve_zero_energy(&p).unwrap().scattering_length;
        for n in [10.0, 1e3, 1e6] {
            let an = solve_zero_energy(&p.scaled(n)).unwrap().scattering_length;
            assert!((an / scattering_length_scaled(a, n) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn energy_matches_closed_form() {
        let s = solve_zero_energy(&barrier(0.01, 1e4)).unwrap();
        let a = s.scattering_length;
        for ell in [0.02, 0.05, 1.0] {
            let e = s.f_ell(ell).unwrap().energy().unwrap();
            let want = energy_f_ell(a, ell).unwrap();
            assert!(((e - want) / want).abs() < 1e-8, "ℓ={ell}: {e} vs {want}");
        }
    }

    #[test]
    fn energy_formula_limits() {
        assert_eq!(energy_f_ell(0.0, 1.0).unwrap(), 0.0);
        let a = 1e-3;
        let v = energy_f_ell(a, 1e9 * a).unwrap();
        assert!((v / (4.0 * PI * a) - 1.0).abs() < 1e-9);
        assert!(energy_f_ell(1.0, 1.0).is_err());
    }

    #[test]
    fn f_ell_precondition() {
        let s = solve_zero_energy(&barrier(1.0, 1.0)).unwrap();
        assert!(matches!(s.f_ell(1.5), Err(Error::Precondition(_))));
    }

    #[test]
    fn hard_core_u_integral_closed_form() {
        let a = 0.3;
        let s = solve_zero_energy(&PotentialSpec::HardCore { radius: a }).unwrap();
        for ell in [0.6, 1.2, 5.0] {
            let ints = s.f_ell(ell).unwrap().u_integrals().unwrap();
            let q = 1.0 - a / ell;
            let d3 = (ell.powi(3) - a.powi(3)) / 3.0;
            let d2 = (ell * ell - a * a) / 2.0;
            let want = 4.0 * PI * (a.powi(3) / 3.0 + d3 - (d3 - a * d2) / q);
            assert!(((ints.u - want) / want).abs() < 1e-10, "ℓ={ell}");
            assert!(ints.within_bounds());
        }
        let ints = s.f_ell(4.0 * a).unwrap().u_integrals().unwrap();
        assert!(ints.grad <= 8.0 * PI * a * 4.0 * a);
    }

    #[test]
    fn pointwise_bounds_and_monotonicity() {
        let s = solve_zero_energy(&barrier(1.0, 50.0)).unwrap();
        let a = s.scattering_length;
        let mut prev = -1.0;
        for (r, u) in s.profile().into_iter().skip(1) {
            let f = u / r;
            assert!(f <= 1.0 + 1e-14 && f >= (1.0 - a / r).max(0.0) - 1e-14, "r={r} f={f}");
            assert!(f >= prev - 1e-15);
            prev = f;
        }
    }
}
