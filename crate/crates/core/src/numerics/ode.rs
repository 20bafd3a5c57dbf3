//! Dormand–Prince 5(4) with embedded error control.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 200_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += h * c * k[i];
        }
    }
    out
}

/// Integrate y' = f(x, y) from `x0` to `x1` (`x1 > x0`). The right-hand
/// side must be smooth on the open interval.
pub fn integrate<const N: usize, F>(
    mut f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    h_init: f64,
    opts: OdeOptions,
) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    if !(x1 >= x0) {
        return Err(Error::Input(format!("ODE interval must run forward, got [{x0}, {x1}]")));
    }
    if x1 == x0 {
        return Ok(y0);
    }
    let span = x1 - x0;
    let mut x = x0;
    let mut y = y0;
    let mut h = if h_init > 0.0 { h_init.min(span) } else { span * 1e-3 };
    let mut k1 = f(x, &y);
    for _ in 0..opts.max_steps {
        let last = x + h >= x1;
        if last {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(x + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(x + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            x + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            x + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let x_new = if last { x1 } else { x + h };
        let k7 = f(x_new, &y_new);
        let mut err = 0.0f64;
        for i in 0..N {
            let ei = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err = err.max((ei / sc).abs());
        }
        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            if h < span * 1e-15 {
                return Err(Error::NonFinite {
                    context: format!("ODE state near x = {x}"),
                });
            }
            h *= 0.1;
            continue;
        }
        if err <= 1.0 {
            x = x_new;
            y = y_new;
            k1 = k7;
            if last {
                return Ok(y);
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            if h < span * 1e-15 {
                return Err(Error::Solver(format!("ODE step size underflow near x = {x}")));
            }
        }
    }
    Err(Error::Solver(format!(
        "ODE step limit {} reached at x = {x}",
        opts.max_steps
    )))
}
