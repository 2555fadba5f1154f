//! Exponential integral and generalized upper incomplete gamma values at
//! nonpositive integer order, in exponentially scaled form.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 400;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// `E1(x)` for `x > 0`: series for small arguments, continued fraction
/// otherwise.
pub fn exp_e1(x: f64) -> Result<f64> {
    Ok(e1_scaled(x)? * (-x).exp())
}

/// `e^x * E1(x)` for `x > 0`, stable for large `x`.
pub fn e1_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::OracleFailure(format!("e1_scaled needs x > 0, got {x}")));
    }
    if x <= 1.1 {
        // Series: E1 = -gamma - ln x + sum (-1)^{k+1} x^k / (k k!).
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..MAX_ITER {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < EPS * sum.abs().max(1.0) {
                return Ok((sum - EULER_GAMMA - x.ln()) * x.exp());
            }
        }
        Err(Error::OracleFailure("E1 series did not converge".into()))
    } else {
        // Modified Lentz continued fraction for e^x E1(x).
        let mut b = x + 1.0;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let a = -((i * i) as f64);
            b += 2.0;
            d = a * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + a / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(h);
            }
        }
        Err(Error::OracleFailure("E1 continued fraction did not converge".into()))
    }
}

/// Continued fraction for `e^x Gamma(a, x) / x^a`, valid when `x` dominates
/// `a` (used here with `a = -k <= 0` and large `x`).
fn gamma_cf_scaled(a: f64, x: f64) -> Result<f64> {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::OracleFailure("incomplete gamma continued fraction did not converge".into()))
}

/// `e^x * Gamma(-k, x)` for integer `k >= 0` and `x > 0`.
///
/// Small arguments use the downward recurrence
/// `Gamma(-k, x) = (Gamma(-k+1, x) - x^{-k} e^{-x}) / (-k)` seeded by
/// `Gamma(0, x) = E1(x)`; large arguments use a per-order continued fraction,
/// which avoids the cancellation the recurrence suffers when `x >> k`.
pub fn upper_gamma_scaled_neg(k: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::OracleFailure(format!(
            "upper_gamma_scaled_neg needs x > 0, got {x}"
        )));
    }
    if x > 30.0 {
        return Ok(gamma_cf_scaled(-(k as f64), x)? * x.powi(-(k as i32)));
    }
    let mut s = e1_scaled(x)?;
    for j in 1..=k {
        s = (s - x.powi(-(j as i32))) / (-(j as f64));
    }
    Ok(s)
}
