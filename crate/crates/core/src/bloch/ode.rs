//! Dormand–Prince 5(4) with embedded error control and FSAL.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    /// Largest allowed step, as a fraction of the span.
    pub h_max_frac: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-10,
            atol: 1e-30,
            h_init: None,
            h_max_frac: 0.1,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates y' = f(t, y) from `t0` to `t1` in place.
///
/// `observe` sees every accepted step, including the initial state.
pub fn dopri5<F, O>(
    mut f: F,
    t0: f64,
    y: &mut [f64],
    t1: f64,
    opts: &OdeOptions,
    mut observe: O,
) -> Result<OdeStats>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    let n = y.len();
    let span = t1 - t0;
    let mut stats = OdeStats::default();
    observe(t0, y);
    if span == 0.0 || n == 0 {
        return Ok(stats);
    }
    let dir = span.signum();
    let h_max = opts.h_max_frac * span.abs();
    let h_min = 1e-14 * span.abs();

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];

    f(t0, y, &mut k1);
    stats.evaluations += 1;

    let scale = |yi: f64, zi: f64| opts.atol + opts.rtol * yi.abs().max(zi.abs());

    // Hairer's starting step
    let mut h = match opts.h_init {
        Some(h) => h.abs().min(h_max),
        None => {
            // components that start at zero would otherwise be weighed by
            // atol alone and force a vanishing first step
            let ymax = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let floor = opts.atol.max(opts.rtol * ymax);
            let scale = |yi: f64, _: f64| floor + opts.rtol * yi.abs();
            let d0 = norm(y.iter().map(|&v| v / scale(v, v)));
            let d1 = norm(y.iter().zip(&k1).map(|(&v, &d)| d / scale(v, v)));
            let h0 = if d0 < 1e-5 || d1 < 1e-5 {
                1e-6 * span.abs()
            } else {
                0.01 * d0 / d1
            };
            let h0 = h0.min(h_max);
            for i in 0..n {
                tmp[i] = y[i] + dir * h0 * k1[i];
            }
            f(t0 + dir * h0, &tmp, &mut k2);
            stats.evaluations += 1;
            let d2 = norm(
                y.iter()
                    .zip(k1.iter().zip(&k2))
                    .map(|(&v, (&a, &b))| (b - a) / scale(v, v)),
            ) / h0;
            let h1 = if d1.max(d2) <= 1e-15 {
                (h0 * 1e-3).max(1e-6 * span.abs())
            } else {
                (0.01 / d1.max(d2)).powf(0.2)
            };
            (100.0 * h0).min(h1).min(h_max)
        }
    };

    let mut t = t0;
    let mut last_rejected = false;
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        if h >= remaining {
            h = remaining;
        }
        if stats.accepted + stats.rejected >= opts.max_steps || (h < h_min && h < remaining) {
            return Err(Error::Stiff { t, h });
        }
        let hs = dir * h;

        for i in 0..n {
            tmp[i] = y[i] + hs * A21 * k1[i];
        }
        f(t + C2 * hs, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        f(t + C3 * hs, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        f(t + C4 * hs, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        f(t + C5 * hs, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] =
                y[i] + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        f(t + hs, &tmp, &mut k6);
        for i in 0..n {
            ynew[i] =
                y[i] + hs * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        f(t + hs, &ynew, &mut k7);
        stats.evaluations += 6;

        let mut err: f64 = 0.0;
        for i in 0..n {
            let e =
                hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            err = err.max(e.abs() / scale(y[i], ynew[i]));
        }

        if err <= 1.0 {
            t = if h == remaining { t1 } else { t + hs };
            y.copy_from_slice(&ynew);
            std::mem::swap(&mut k1, &mut k7);
            stats.accepted += 1;
            observe(t, y);
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            let grow = if last_rejected { grow.min(1.0) } else { grow };
            h = (h * grow).min(h_max);
            last_rejected = false;
        } else {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            last_rejected = true;
        }
    }
    Ok(stats)
}

fn norm(it: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = it.fold((0.0, 0usize), |(s, n), v| (s + v * v, n + 1));
    if n == 0 {
        0.0
    } else {
        (s / n as f64).sqrt()
    }
}
