use schwinger::basis::IrrepLabel;
use schwinger::coherent::{nprime_squared, nprime_squared_double_sum, nprime_squared_jacobi};
use schwinger::specfun::{ak_closed, ak_double_sum, ak_rearranged, jacobi_p, jacobi_p_explicit, ln_gamma, log_factorial};

use crate::record::Ctx;

const I0_MAX_X2: u32 = 12;
const NPRIME_PQ_MAX: u32 = 6;
const T_POINTS: u32 = 20;

/// Γ-series form P_n^(α,β)(x) = Γ(α+n+1)/(n! Γ(α+β+n+1)) Σ_m C(n,m) Γ(α+β+n+m+1)/Γ(α+m+1) ((x−1)/2)^m,
/// valid when every Γ argument is positive.
fn jacobi_gamma_series(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    let nf = n as f64;
    let pre = ln_gamma(alpha + nf + 1.0) - log_factorial(n as u64) - ln_gamma(alpha + beta + nf + 1.0);
    let mut s = 0.0;
    for m in 0..=n {
        let mf = m as f64;
        let ln = pre + log_factorial(n as u64) - log_factorial(m as u64) - log_factorial((n - m) as u64)
            + ln_gamma(alpha + beta + nf + mf + 1.0)
            - ln_gamma(alpha + mf + 1.0);
        s += ln.exp() * (0.5 * (x - 1.0)).powi(m as i32);
    }
    s
}

pub fn run(ctx: &mut Ctx) {
    ctx.group("jacobi-forms", |ctx| {
        for n in 0..=6u32 {
            for beta in [0.0, 1.0, 2.0, 5.0] {
                for x in [-0.7, 0.0, 0.5, 3.0] {
                    let rec = jacobi_p(n, 0.0, beta, x);
                    let scale = rec.abs().max(1.0);
                    let d = format!("n={n};beta={beta};x={x}");
                    ctx.close("jacobi-forms", &format!("gamma-series;{d}"), jacobi_gamma_series(n, 0.0, beta, x), rec, 1e-10 * scale);
                    ctx.close("jacobi-forms", &format!("binomial-sum;{d}"), jacobi_p_explicit(n, 0.0, beta, x), rec, 1e-10 * scale);
                }
            }
        }
        Ok(())
    });

    ctx.group("jacobi-reflection", |ctx| {
        for i2 in 0..=I0_MAX_X2 as i32 {
            for m2 in (i2 % 2..=i2).step_by(2) {
                let (lo, hi) = (((i2 - m2) / 2) as u32, ((i2 + m2) / 2) as u32);
                let m0 = 0.5 * m2 as f64;
                for x in [0.05f64, 0.25, 0.5, 0.75, 1.0] {
                    let lhs = x.powf(m0) * jacobi_p(lo, 0.0, m2 as f64, 2.0 * x - 1.0);
                    let rhs = x.powf(-m0) * jacobi_p(hi, 0.0, -m2 as f64, 2.0 * x - 1.0);
                    ctx.close("jacobi-reflection", &format!("2I={i2};2M0={m2};x={x}"), lhs, rhs, 1e-10);
                }
            }
        }
        Ok(())
    });

    ctx.group("ak-identity", |ctx| {
        for i0x2 in 0..=I0_MAX_X2 {
            for m0x2 in (-(i0x2 as i32)..=i0x2 as i32).step_by(2) {
                let kmax = (i0x2 as i32 - m0x2.abs()) / 2;
                for k in 0..=kmax as u32 {
                    let closed = ak_closed(i0x2, m0x2, k);
                    let d = format!("2I0={i0x2};2M0={m0x2};k={k}");
                    ctx.exact("ak-identity", &format!("double-sum;{d}"), ak_double_sum(i0x2, m0x2, k), closed);
                    ctx.exact("ak-identity", &format!("rearranged;{d}"), ak_rearranged(i0x2, m0x2, k), closed);
                }
            }
        }
        Ok(())
    });

    ctx.group("nprime-routes", |ctx| {
        for p in 0..=NPRIME_PQ_MAX {
            for q in 0..=NPRIME_PQ_MAX {
                let label = IrrepLabel::new(p, q);
                for k in 0..T_POINTS {
                    let t = k as f64 / (T_POINTS - 1) as f64;
                    let closed = nprime_squared(label, t)?;
                    let sum = nprime_squared_double_sum(label, t)?;
                    ctx.close("nprime-routes", &format!("{label};t={t:.6}"), sum, closed, 1e-10);
                }
            }
        }
        Ok(())
    });

    ctx.group("nprime-jacobi", |ctx| {
        for p in 0..=NPRIME_PQ_MAX {
            for q in 0..=NPRIME_PQ_MAX {
                let label = IrrepLabel::new(p, q);
                for t in [0.2, 0.5, 0.8, 1.0] {
                    let closed = nprime_squared(label, t)?;
                    let jac = nprime_squared_jacobi(label, t)?;
                    ctx.close("nprime-jacobi", &format!("{label};t={t}"), jac, closed, 1e-10 * closed.max(1.0));
                }
            }
        }
        Ok(())
    });
}
