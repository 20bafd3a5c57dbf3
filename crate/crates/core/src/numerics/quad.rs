//! Adaptive Gauss–Kronrod (7/15) quadrature with QUADPACK-style error
//! estimates, plus a rational map for semi-infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    id: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    // Largest error first; ties broken by creation order so the refinement
    // sequence never depends on heap internals.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.id.cmp(&self.id))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let err = rescale_error((res_k - res_g) * half, res_abs * half.abs(), res_asc * half.abs());
    (value, err)
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Input(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (v0, e0) = gk15(&mut f, a, b);
    if !v0.is_finite() || !e0.is_finite() {
        return Err(Error::NonFinite {
            context: format!("integrand on [{a}, {b}]"),
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
        id: 0,
    });
    let mut next_id = 1;
    let mut total = v0;
    let mut total_err = e0;
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}] after {} intervals: value {total:e}, error estimate {total_err:e}",
                heap.len()
            )));
        }
        let seg = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval cannot be split further in floating point.
            heap.push(seg);
            if total_err <= 1e3 * tol {
                break;
            }
            return Err(Error::Quadrature(format!(
                "interval collapsed near {mid:e}; error estimate {total_err:e}"
            )));
        }
        let (v1, e1) = gk15(&mut f, seg.a, mid);
        let (v2, e2) = gk15(&mut f, mid, seg.b);
        if !(v1.is_finite() && v2.is_finite() && e1.is_finite() && e2.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("integrand on [{}, {}]", seg.a, seg.b),
            });
        }
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: v1,
            error: e1,
            id: next_id,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: v2,
            error: e2,
            id: next_id + 1,
        });
        next_id += 2;
        // Recompute sums periodically to stop drift from the running updates.
        if next_id % 64 == 1 {
            let mut segs: Vec<_> = heap.iter().copied().collect();
            segs.sort_by_key(|s| s.id);
            total = crate::numerics::sum::compensated_sum(segs.iter().map(|s| s.value));
            total_err = segs.iter().map(|s| s.error).sum();
        }
    }
    let mut segs: Vec<_> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = crate::numerics::sum::compensated_sum(segs.iter().map(|s| s.value));
    let error = segs.iter().map(|s| s.error).sum();
    Ok(QuadResult {
        value,
        error,
        intervals: segs.len(),
    })
}

/// Integrate `f` over `[a, ∞)` through r = a + L·t/(1−t).
///
/// `scale` is the length L over which the integrand changes appreciably;
/// a poor choice only costs extra intervals. Failure to converge is
/// reported as divergence.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    scale: f64,
    opts: QuadOptions,
) -> Result<QuadResult> {
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Input(format!("length scale must be positive, got {scale}")));
    }
    let g = |t: f64| {
        let s = 1.0 - t;
        let r = a + scale * t / s;
        if r.is_infinite() {
            return 0.0;
        }
        let v = f(r);
        if v == 0.0 {
            0.0
        } else {
            v * scale / (s * s)
        }
    };
    match integrate(g, 0.0, 1.0, opts) {
        Ok(r) => Ok(r),
        Err(Error::Quadrature(m)) | Err(Error::NonFinite { context: m }) => Err(Error::Divergent(m)),
        Err(e) => Err(e),
    }
}
