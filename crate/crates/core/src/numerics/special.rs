//! Special functions: Riemann zeta on the real axis, the scaled
//! complementary error function and a few cancellation-free helpers.

use std::f64::consts::PI;

/// Σ_{n ∈ Z³ \ 0} |n|⁻⁴, evaluated to 30 digits from the Lorenz-type
/// decomposition 2ζ(4) + 2π ζ(3/2) β(3/2) + (exponentially convergent
/// Bessel remainder). Checked in tests against direct partial sums.
pub const CUBIC_INV_N4: f64 = 16.532_315_959_761_669_643_797_221_912;

/// Σ_{n ∈ Z³ \ 0} |n|⁻⁶, same decomposition with 2ζ(6) + (3π/2) ζ(5/2) β(5/2).
pub const CUBIC_INV_N6: f64 = 8.401_923_974_827_539_991_897_746_310_6;

const SQRT_PI: f64 = 1.772_453_850_905_516_027_298_167_483_341_145_2;

/// Riemann ζ(s) for real s > 1 by Euler–Maclaurin with 10 explicit terms
/// and 8 Bernoulli corrections.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta is only implemented for s > 1");
    // B_{2k}/(2k)!
    const BERN: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 720.0,
        1.0 / 30240.0,
        -1.0 / 1209600.0,
        1.0 / 47900160.0,
        -691.0 / 1307674368000.0,
        1.0 / 74724249600.0,
        -3617.0 / 10670622842880000.0,
    ];
    let n = 10.0f64;
    let mut acc = super::sum::CompensatedSum::new();
    for k in 1..10 {
        acc.add((k as f64).powf(-s));
    }
    acc.add(n.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * n.powf(-s));
    // Rising factorial s(s+1)…(s+2k−2) times n^{−s−2k+1}.
    let mut poch = s;
    let mut pow = n.powf(-s - 1.0);
    for (k, b) in BERN.iter().enumerate() {
        acc.add(b * poch * pow);
        let j = 2.0 * k as f64;
        poch *= (s + j + 1.0) * (s + j + 2.0);
        pow /= n * n;
    }
    acc.value()
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Continued fraction (1/2)/(x + 1/(x + (3/2)/(x + …))), which equals
/// 1/(√π erfcx(x)) − x for x > 0. Modified Lentz.
fn mills_cf_tail(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..5000 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d == 0.0 {
            d = TINY;
        }
        d = 1.0 / d;
        c = x + a / c;
        if c == 0.0 {
            c = TINY;
        }
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    f
}

/// exp(x²)·erfc(x) without overflow for large positive x.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x >= 2.0 {
        if x.is_infinite() {
            return 0.0;
        }
        1.0 / (SQRT_PI * (x + mills_tail(x)))
    } else if x >= 0.0 {
        exp_sq(x) * libm::erfc(x)
    } else {
        // erfc(x) = 2 − erfc(−x)
        if x < -26.6 {
            return f64::INFINITY;
        }
        2.0 * exp_sq(x) - erfcx(-x)
    }
}

/// exp(x²) with the rounding error of x² carried through.
fn exp_sq(x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    hi.exp() * (1.0 + lo)
}

/// K(x) = 1/(√π erfcx(x)) − x for x ≥ 0; behaves like 1/(2x) at large x
/// and is computed without the subtraction there.
pub fn mills_tail(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x >= 2.0 {
        mills_cf_tail(x)
    } else {
        1.0 / (SQRT_PI * erfcx(x)) - x
    }
}

/// x − ln(1 + x) for x > −1, accurate for small x.
pub fn x_minus_log1p(x: f64) -> f64 {
    if x.abs() < 0.25 {
        // Σ_{k≥2} (−1)^k x^k / k
        let mut term = x * x;
        let mut acc = 0.0f64;
        let mut k = 2.0;
        let mut sign = 1.0;
        while term.abs() > 1e-18 * acc.abs() || k < 4.0 {
            acc += sign * term / k;
            term *= x;
            k += 1.0;
            sign = -sign;
            if k > 200.0 {
                break;
            }
        }
        acc
    } else {
        x - x.ln_1p()
    }
}

/// x − x²/2 + x³/3 − ln(1 + x) for x ≥ 0. Nonnegative, ~x⁴/4 near zero.
pub fn log1p_quartic_remainder(x: f64) -> f64 {
    if x < 0.25 {
        // Σ_{k≥4} (−1)^k x^k / k
        let mut term = x * x * x * x;
        let mut acc = 0.0f64;
        let mut k = 4.0;
        let mut sign = 1.0;
        while k < 200.0 {
            let t = sign * term / k;
            acc += t;
            if t.abs() <= 1e-18 * acc.abs() {
                break;
            }
            term *= x;
            k += 1.0;
            sign = -sign;
        }
        acc
    } else {
        x - 0.5 * x * x + x * x * x / 3.0 - x.ln_1p()
    }
}

/// ln(1 − e^{−x}) for x > 0.
pub fn log1mexp(x: f64) -> f64 {
    if x <= std::f64::consts::LN_2 {
        (-(-x).exp_m1()).ln()
    } else {
        (-(-x).exp()).ln_1p()
    }
}

/// Bose–Einstein occupation 1/(eˣ − 1) for x > 0.
pub fn bose(x: f64) -> f64 {
    1.0 / x.exp_m1()
}

/// ln(erfc(−η)/2) = ln((1 + erf η)/2), stable for all η.
pub fn log_half_erfc_neg(eta: f64) -> f64 {
    if eta > -1.0 {
        (0.5 * libm::erfc(-eta)).ln()
    } else {
        // erfc(−η) = erfc(|η|) = e^{−η²} erfcx(|η|)
        -eta * eta + (0.5 * erfcx(-eta)).ln()
    }
}

pub fn sqrt_pi() -> f64 {
    SQRT_PI
}

pub fn two_pi() -> f64 {
    2.0 * PI
}
