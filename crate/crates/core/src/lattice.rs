//! The momentum lattice Λ*₊ = 2πZ³ \ {0} grouped into norm shells, and
//! radial lattice sums with a certified integral tail.

use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::numerics::{integrate_to_infinity, CompensatedSum, QuadOptions};

pub const TWO_PI: f64 = 2.0 * PI;
pub const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Largest shell radius, in units of 2π, that will ever be tabulated.
/// Sums needing more rely on the integral tail.
pub const MAX_RADIUS_INDEX: u64 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shell {
    /// |n|² for the integer vector n = p/2π.
    pub m: u64,
    pub multiplicity: u64,
}

impl Shell {
    pub fn norm_sq(&self) -> f64 {
        FOUR_PI_SQ * self.m as f64
    }

    pub fn norm(&self) -> f64 {
        TWO_PI * (self.m as f64).sqrt()
    }
}

/// Nonempty shells with 0 < |p| ≤ p_max, in increasing order of |p|.
#[derive(Debug, Clone)]
pub struct ShellTable {
    shells: Arc<[Shell]>,
    len: usize,
    p_max: f64,
}

impl ShellTable {
    pub fn shells(&self) -> &[Shell] {
        &self.shells[..self.len]
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn point_count(&self) -> u64 {
        self.shells().iter().map(|s| s.multiplicity).sum()
    }

    /// Restrict to shells with |p| ≤ p (sharing storage).
    pub fn truncate(&self, p: f64) -> Result<ShellTable> {
        if p < TWO_PI {
            return Err(Error::EmptyLattice { p_max: p });
        }
        let m_max = max_index_sq(p);
        let len = self.shells().partition_point(|s| s.m <= m_max);
        Ok(ShellTable {
            shells: Arc::clone(&self.shells),
            len,
            p_max: p.min(self.p_max),
        })
    }
}

/// floor((p/2π)²), nudged so exact shell radii such as 2π√2 are included.
fn max_index_sq(p: f64) -> u64 {
    let r = p / TWO_PI;
    (r * r * (1.0 + 1e-12)).floor() as u64
}

fn tabulate(m_max: u64) -> Vec<Shell> {
    let r = (m_max as f64).sqrt().floor() as u64 + 1;
    let mut counts = vec![0u64; m_max as usize + 1];
    // Sorted triples 0 ≤ a ≤ b ≤ c with sign and permutation weights.
    for a in 0..=r {
        let a2 = a * a;
        if a2 > m_max {
            break;
        }
        for b in a..=r {
            let ab = a2 + b * b;
            if ab > m_max {
                break;
            }
            for c in b..=r {
                let m = ab + c * c;
                if m > m_max {
                    break;
                }
                if m == 0 {
                    continue;
                }
                let nonzero = (a > 0) as u32 + (b > 0) as u32 + (c > 0) as u32;
                let perms = if a == b && b == c {
                    1
                } else if a == b || b == c {
                    3
                } else {
                    6
                };
                counts[m as usize] += perms << nonzero;
            }
        }
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(m, &c)| Shell {
            m: m as u64,
            multiplicity: c,
        })
        .collect()
}

static CACHE: Mutex<Option<(u64, Arc<[Shell]>)>> = Mutex::new(None);

/// All shells of Λ*₊ with |p| ≤ p_max.
///
/// Tables are cached process-wide; a smaller request is served as a
/// prefix of the largest table built so far, which is bit-identical to
/// building it afresh.
pub fn build_shells(p_max: f64) -> Result<ShellTable> {
    if !(p_max >= TWO_PI) {
        return Err(Error::EmptyLattice { p_max });
    }
    let cap = MAX_RADIUS_INDEX * MAX_RADIUS_INDEX;
    let m_max = max_index_sq(p_max);
    if m_max > cap {
        return Err(Error::Input(format!(
            "p_max = {p_max} exceeds the tabulation limit 2π·{MAX_RADIUS_INDEX}"
        )));
    }
    let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    let table = match guard.as_ref() {
        Some((built, t)) if *built >= m_max => Arc::clone(t),
        _ => {
            let built = guard.as_ref().map_or(0, |(b, _)| *b);
            let target = m_max.max((2 * built).min(cap));
            let t: Arc<[Shell]> = tabulate(target).into();
            *guard = Some((target, Arc::clone(&t)));
            t
        }
    };
    drop(guard);
    let len = table.partition_point(|s| s.m <= m_max);
    Ok(ShellTable {
        shells: table,
        len,
        p_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailPolicy {
    None,
    /// Certified bound from the sum–integral comparison; needs a
    /// nonnegative nonincreasing summand.
    IntegralBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub truncated_sum: f64,
    pub tail_bound: f64,
    pub lambda: f64,
}

impl TailEstimate {
    pub fn upper(&self) -> f64 {
        self.truncated_sum + self.tail_bound
    }
}

/// Σ over the table of multiplicity·g(|p|²). Shell order is fixed, so the
/// result is reproducible.
pub fn shell_sum<G: FnMut(f64) -> f64>(table: &ShellTable, mut g: G) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    for s in table.shells() {
        let v = g(s.norm_sq());
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: format!("lattice summand at |p|² = {}", s.norm_sq()),
            });
        }
        acc.add(s.multiplicity as f64 * v);
    }
    Ok(acc.value())
}

/// Σ_{p ∈ table} f(|p|) with an optional tail bound for |p| ≥ p_max.
///
/// `scale` is the momentum scale on which f decays; it only steers the
/// tail quadrature.
pub fn lattice_sum<F: Fn(f64) -> f64>(
    f: F,
    table: &ShellTable,
    policy: TailPolicy,
    scale: f64,
) -> Result<TailEstimate> {
    let truncated_sum = shell_sum(table, |p2| f(p2.sqrt()))?;
    let lambda = table.p_max();
    let tail_bound = match policy {
        TailPolicy::None => 0.0,
        TailPolicy::IntegralBound => sum_integral_upper_bound(&f, lambda, scale)?,
    };
    Ok(TailEstimate {
        truncated_sum,
        tail_bound,
        lambda,
    })
}

/// (2π)⁻³ ∫_{|p| ≥ [λ − 2π√3]₊} f(|p|)(1 + 2π/|p| + 6π/|p|²) dp, which
/// dominates Σ_{p ∈ Λ*₊, |p| ≥ λ} f(|p|) for nonnegative nonincreasing f.
pub fn sum_integral_upper_bound<F: Fn(f64) -> f64>(f: F, lambda: f64, scale: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::Input(format!("lambda must be nonnegative, got {lambda}")));
    }
    let r0 = (lambda - TWO_PI * 3f64.sqrt()).max(0.0);
    let radial = |r: f64| {
        let v = f(r);
        if v == 0.0 {
            return 0.0;
        }
        v * (r * r + TWO_PI * r + 6.0 * PI)
    };
    let opts = QuadOptions {
        rel_tol: 1e-12,
        abs_tol: 1e-300,
        max_intervals: 2000,
    };
    let r = integrate_to_infinity(radial, r0, scale, opts).map_err(|e| e.context("lattice tail integral"))?;
    Ok(4.0 * PI * r.value / (TWO_PI * TWO_PI * TWO_PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(m_max: i64) -> Vec<u64> {
        let r = (m_max as f64).sqrt() as i64 + 1;
        let mut c = vec![0u64; m_max as usize + 1];
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    let m = x * x + y * y + z * z;
                    if m > 0 && m <= m_max {
                        c[m as usize] += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn first_shells() {
        let t = build_shells(TWO_PI).unwrap();
        assert_eq!(t.shells(), &[Shell { m: 1, multiplicity: 6 }]);
        assert_eq!(t.shells()[0].norm_sq(), FOUR_PI_SQ);
        let t = build_shells(TWO_PI * 2f64.sqrt()).unwrap();
        assert_eq!(
            t.shells(),
            &[Shell { m: 1, multiplicity: 6 }, Shell { m: 2, multiplicity: 12 }]
        );
    }

    #[test]
    fn below_first_shell_is_empty_lattice() {
        assert!(matches!(build_shells(6.0), Err(Error::EmptyLattice { .. })));
    }

    #[test]
    fn multiplicities_match_brute_force() {
        let m_max = 400; // (40π)² = 4π²·400
        let t = build_shells(40.0 * PI).unwrap();
        let brute = brute_count(m_max);
        let mut from_table = vec![0u64; m_max as usize + 1];
        for s in t.shells() {
            from_table[s.m as usize] = s.multiplicity;
        }
        assert_eq!(from_table, brute);
        let t10 = build_shells(TWO_PI * 10f64.sqrt()).unwrap();
        assert_eq!(t10.point_count(), brute_count(10).iter().sum::<u64>());
    }

    #[test]
    fn never_representable_norms_are_absent() {
        let t = build_shells(TWO_PI * 30.0).unwrap();
        for s in t.shells() {
            let mut m = s.m;
            while m % 4 == 0 {
                m /= 4;
            }
            assert_ne!(m % 8, 7, "m = {} is not a sum of three squares", s.m);
        }
    }

    #[test]
    fn prefix_matches_fresh_table() {
        let big = build_shells(TWO_PI * 40.0).unwrap();
        let small = build_shells(TWO_PI * 7.5).unwrap();
        let trunc = big.truncate(TWO_PI * 7.5).unwrap();
        assert_eq!(small.shells(), trunc.shells());
        assert_eq!(small.shells(), &tabulate(56)[..]);
    }

    #[test]
    fn bose_sum_matches_triple_loop() {
        let f = |p: f64| 1.0 / (p * p).exp_m1();
        let t = build_shells(20.0 * PI).unwrap();
        let got = lattice_sum(f, &t, TailPolicy::None, 1.0).unwrap().truncated_sum;
        let mut want = 0.0;
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                for z in -10i64..=10 {
                    let m = x * x + y * y + z * z;
                    if m > 0 && m <= 100 {
                        want += f(TWO_PI * (m as f64).sqrt());
                    }
                }
            }
        }
        assert!(((got - want) / want).abs() < 1e-12);
    }

    #[test]
    fn zero_summand() {
        let t = build_shells(10.0).unwrap();
        let r = lattice_sum(|_| 0.0, &t, TailPolicy::IntegralBound, 1.0).unwrap();
        assert_eq!((r.truncated_sum, r.tail_bound), (0.0, 0.0));
        assert_eq!(sum_integral_upper_bound(|_| 0.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_quartic_tail_brackets_refined_sum() {
        let f = |p: f64| p.powi(-4);
        let coarse = lattice_sum(f, &build_shells(40.0 * PI).unwrap(), TailPolicy::IntegralBound, 100.0).unwrap();
        let fine = lattice_sum(f, &build_shells(400.0 * PI).unwrap(), TailPolicy::None, 1.0).unwrap();
        assert!(coarse.upper() >= fine.truncated_sum);
        assert!(coarse.truncated_sum < fine.truncated_sum);
    }

    #[test]
    fn cubic_constant_is_bracketed() {
        let exact = crate::numerics::special::CUBIC_INV_N4 / FOUR_PI_SQ.powi(2);
        let f = |p: f64| p.powi(-4);
        let r = lattice_sum(
            f,
            &build_shells(TWO_PI * 200.0).unwrap(),
            TailPolicy::IntegralBound,
            1e3,
        )
        .unwrap();
        assert!(r.truncated_sum < exact && exact <= r.upper());
        // The missing piece should look like the continuum tail 4π/R in
        // units of (2π)⁻⁴.
        let continuum = 4.0 * PI / 200.0 / FOUR_PI_SQ.powi(2);
        let ratio = (exact - r.truncated_sum) / continuum;
        assert!((ratio - 1.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn integral_bound_dominates_gaussian_sum() {
        let f = |p: f64| (-p * p).exp();
        let bound = sum_integral_upper_bound(f, 0.0, 1.0).unwrap();
        let sum = lattice_sum(f, &build_shells(20.0 * PI).unwrap(), TailPolicy::None, 1.0).unwrap();
        assert!(bound >= sum.truncated_sum);
    }

    #[test]
    fn integral_bound_dominates_bose_tail() {
        let f = |p: f64| 1.0 / (p * p).exp_m1();
        let lambda = 4.0 * PI;
        let bound = sum_integral_upper_bound(f, lambda, 1.0).unwrap();
        let t = build_shells(40.0 * PI).unwrap();
        let tail = shell_sum(&t, |p2| {
            if p2 >= lambda * lambda * (1.0 - 1e-12) {
                f(p2.sqrt())
            } else {
                0.0
            }
        })
        .unwrap();
        assert!(bound >= tail && tail > 0.0);
    }

    #[test]
    fn sum_integral_inequality_with_intermediate_lambda() {
        // λ strictly between 2π√3 and 4π, as used for thermal sums.
        let lambda = 3.7 * PI;
        for beta in [0.01, 0.1, 1.0] {
            let f = |p: f64| 1.0 / (beta * p * p).exp_m1();
            let t = build_shells(TWO_PI * 120.0).unwrap();
            let lhs = shell_sum(&t, |p2| if p2 >= lambda * lambda { f(p2.sqrt()) } else { 0.0 }).unwrap();
            let rhs = sum_integral_upper_bound(f, lambda, 1.0 / beta.sqrt()).unwrap();
            assert!(lhs <= rhs, "beta = {beta}: {lhs} > {rhs}");
        }
    }
}
