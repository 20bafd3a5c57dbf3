use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    pub x_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            x_tol: 0.0,
            rel_tol: 4.0 * f64::EPSILON,
            max_iter: 300,
        }
    }
}

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: RootOptions) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Solver(format!("NaN at bracket endpoints [{a}, {b}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Solver(format!(
            "no sign change on [{a}, {b}]: f = ({fa:e}, {fb:e})"
        )));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * opts.rel_tol * b.abs() + 0.5 * opts.x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Solver(format!("NaN encountered at x = {b}")));
        }
    }
    Err(Error::Solver(format!(
        "Brent iteration limit {} reached near x = {b}",
        opts.max_iter
    )))
}

/// Plain bisection on a sign-changing bracket, stopping once the bracket
/// is relatively narrower than `rel`. Returns the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, rel: f64) -> Result<(f64, f64)> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo.is_nan() || fhi.is_nan() || flo.signum() == fhi.signum() {
        return Err(Error::Solver(format!(
            "bisection needs a sign change on [{lo}, {hi}], got ({flo:e}, {fhi:e})"
        )));
    }
    let rising = fhi > flo;
    for _ in 0..2000 {
        if (hi - lo).abs() <= rel * lo.abs().max(hi.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(Error::Solver(format!("NaN at x = {mid}")));
        }
        if (fm > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Expand `[lo, hi]` geometrically until `f` changes sign. `f` is assumed
/// increasing.
pub fn expand_bracket<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    max_steps: usize,
) -> Result<(f64, f64)> {
    for _ in 0..max_steps {
        let flo = f(lo);
        let fhi = f(hi);
        if flo <= 0.0 && fhi >= 0.0 {
            return Ok((lo, hi));
        }
        let w = hi - lo;
        if flo > 0.0 {
            lo -= 2.0 * w;
        }
        if fhi < 0.0 {
            hi += 2.0 * w;
        }
    }
    Err(Error::Solver(format!(
        "could not bracket a root; last bracket [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_cubic() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, RootOptions::default()).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn brent_rejects_same_sign() {
        assert!(brent(|x| x * x + 1.0, -1.0, 1.0, RootOptions::default()).is_err());
    }

    #[test]
    fn bisect_narrows() {
        let (lo, hi) = bisect(|x| x.exp() - 3.0, 0.0, 2.0, 1e-6).unwrap();
        assert!(lo <= 3f64.ln() && hi >= 3f64.ln() && hi - lo < 2e-6);
    }

    #[test]
    fn expand_finds_bracket() {
        let (lo, hi) = expand_bracket(|x| x - 37.0, 0.0, 1.0, 60).unwrap();
        assert!(lo <= 37.0 && hi >= 37.0);
    }
}
