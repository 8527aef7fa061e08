//! Scalar special functions: factorials, 0F1, terminating 2F1, Laguerre and
//! Jacobi polynomials, modified Bessel K, and the a_k coefficient identities
//! behind the closed form of N'.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const LOG_FACT_TABLE: usize = 1024;

fn log_fact_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LOG_FACT_TABLE);
        t.push(0.0);
        // exact products while they fit in f64 mantissa-safe range, then sums
        let mut prod = 1.0f64;
        let mut acc = 0.0f64;
        for n in 1..LOG_FACT_TABLE {
            if n <= 20 {
                prod *= n as f64;
                acc = prod.ln();
            } else {
                acc += (n as f64).ln();
            }
            t.push(acc);
        }
        t
    })
}

/// ln(n!).
pub fn log_factorial(n: u64) -> f64 {
    if (n as usize) < LOG_FACT_TABLE {
        log_fact_table()[n as usize]
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// n! as a float (overflows to inf past 170).
pub fn factorial(n: u64) -> f64 {
    if n <= 20 {
        (1..=n).product::<u64>() as f64
    } else {
        log_factorial(n).exp()
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection; only reached for 0 < x < 0.5
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let fx = x.fract();
    if fx == 0.0 && x <= LOG_FACT_TABLE as f64 {
        return log_factorial(x as u64 - 1);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> f64 {
    ln_gamma(x).exp()
}

/// Binomial coefficient C(n, k) as a float via log-factorials.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= 60 {
        return binomial_exact(n, k) as f64;
    }
    (log_factorial(n) - log_factorial(k) - log_factorial(n - k)).exp().round()
}

/// Exact binomial coefficient; zero when k > n.
pub fn binomial_exact(n: u64, k: u64) -> i128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r
}

/// Generalized binomial C(a, k) = a(a-1)…(a-k+1)/k! for real a.
pub fn binomial_real(a: f64, k: u32) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r *= (a - i as f64) / (i as f64 + 1.0);
    }
    r
}

/// Rising factorial (a)_n.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a + i as f64))
}

pub const HYP0F1_MAX_TERMS: usize = 10_000;
const HYP0F1_RTOL: f64 = 1e-14;

/// ₀F₁(;c;x) = Σ xⁿ/((c)ₙ n!) for real x.
pub fn hyp0f1(c: f64, x: f64) -> Result<f64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Domain(format!("hyp0f1 requires c > 0, got {c}")));
    }
    hyp0f1_complex(c, C64::new(x, 0.0)).map(|v| v.re)
}

/// ₀F₁(;c;z) for complex z; used for overlaps ⟨k,κ′|k,κ⟩.
pub fn hyp0f1_complex(c: f64, z: C64) -> Result<C64> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::Domain(format!("hyp0f1 requires c > 0, got {c}")));
    }
    let az = z.norm();
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for n in 0..HYP0F1_MAX_TERMS {
        let denom = (c + n as f64) * (n as f64 + 1.0);
        term *= z / denom;
        sum += term;
        // stop only once terms are monotonically decreasing
        if denom > az && term.norm() <= HYP0F1_RTOL * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { what: "hyp0f1", iterations: HYP0F1_MAX_TERMS })
}

/// ₂F₁(−m, −n; c; x), an exact finite sum of min(m,n)+1 terms.
pub fn hyp2f1_terminating(m: u32, n: u32, c: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 0..m.min(n) {
        let j = j as f64;
        term *= (j - m as f64) * (j - n as f64) / ((c + j) * (j + 1.0)) * x;
        sum += term;
    }
    sum
}

/// ₂F₁(a, b; c; x) with a = −m, b = −n given as reals; rejects anything that
/// is not a nonpositive integer.
pub fn hyp2f1_terminating_checked(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let as_count = |v: f64| -> Result<u32> {
        if v <= 0.0 && v.fract() == 0.0 && v > -(u32::MAX as f64) {
            Ok((-v) as u32)
        } else {
            Err(Error::Domain(format!("terminating 2F1 needs nonpositive integer parameter, got {v}")))
        }
    };
    Ok(hyp2f1_terminating(as_count(a)?, as_count(b)?, c, x))
}

/// Associated Laguerre polynomial L_n^α(x) by forward recurrence.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let l2 = ((2.0 * k + 1.0 + alpha - x) * l1 - (k + alpha) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Jacobi polynomial P_n^(α,β)(x). Uses the three-term recurrence; falls back
/// to the explicit binomial sum when a recurrence denominator vanishes (e.g.
/// negative integer β).
pub fn jacobi_p(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let ab = alpha + beta;
    let singular = (2..=n).any(|k| {
        let k = k as f64;
        (k + ab).abs() < 1e-12 || (2.0 * k + ab - 2.0).abs() < 1e-12
    });
    if singular {
        return jacobi_p_explicit(n, alpha, beta, x);
    }
    let mut p0 = 1.0;
    let mut p1 = (alpha + 1.0) + 0.5 * (ab + 2.0) * (x - 1.0);
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + ab;
        let a1 = 2.0 * k * (k + ab) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta);
        let a3 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c;
        let p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// P_n^(α,β)(x) = 2⁻ⁿ Σ_m C(n+α, m) C(n+β, n−m) (x−1)^{n−m} (x+1)^m.
pub fn jacobi_p_explicit(n: u32, alpha: f64, beta: f64, x: f64) -> f64 {
    let nf = n as f64;
    let mut s = 0.0;
    for m in 0..=n {
        s += binomial_real(nf + alpha, m)
            * binomial_real(nf + beta, n - m)
            * (x - 1.0).powi((n - m) as i32)
            * (x + 1.0).powi(m as i32);
    }
    s / 2f64.powi(n as i32)
}

// Coefficients c_k of 1/Γ(z) = Σ_{k≥1} c_k z^k.
const RGAMMA: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// (gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ)) for |μ| ≤ ½, as needed by Temme's series.
/// gam1 = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ), gam2 = (1/Γ(1−μ) + 1/Γ(1+μ))/2.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ_i RGAMMA[i] μ^i: even i feed gam2, odd i feed −gam1
    let mu2 = mu * mu;
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut pw = 1.0;
    for pair in RGAMMA.chunks(2) {
        gam2 += pair[0] * pw;
        if let Some(c) = pair.get(1) {
            gam1 -= c * pw;
        }
        pw *= mu2;
    }
    (gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1)
}

const BESSEL_EPS: f64 = 1e-16;
const BESSEL_MAXIT: usize = 10_000;

/// Modified Bessel function of the second kind K_ν(x), x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires x > 0, got {x}")));
    }
    let nu = nu.abs();
    let nl = (nu + 0.5).floor() as u32;
    let mu = nu - nl as f64;
    let mu2 = mu * mu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let (mut rkmu, mut rk1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < BESSEL_EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < BESSEL_EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..BESSEL_MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * BESSEL_EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { what: "bessel_k series", iterations: BESSEL_MAXIT });
        }
        rkmu = sum;
        rk1 = sum1 * xi2;
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..BESSEL_MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < BESSEL_EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { what: "bessel_k continued fraction", iterations: BESSEL_MAXIT });
        }
        h *= a1;
        rkmu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
        rk1 = rkmu * (mu + x + 0.5 - h) * xi;
    }
    for i in 1..=nl {
        let t = (mu + i as f64) * xi2 * rk1 + rkmu;
        rkmu = rk1;
        rk1 = t;
    }
    Ok(rkmu)
}

/// Splits (2I₀, 2M₀) into A = I₀−|M₀| and B = 2|M₀|.
fn ak_params(i0x2: u32, m0x2: i32) -> (i64, i64) {
    let b = m0x2.unsigned_abs();
    assert!(b <= i0x2 && (i0x2 - b).is_multiple_of(2), "invalid (2I0, 2M0) = ({i0x2}, {m0x2})");
    (((i0x2 - b) / 2) as i64, b as i64)
}

fn c(n: i64, k: i64) -> i128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial_exact(n as u64, k as u64)
    }
}

/// a_k in closed form: (k+1)·C(I₀+|M₀|+1, k+1)·C(I₀−|M₀|+1, k+1).
pub fn ak_closed(i0x2: u32, m0x2: i32, k: u32) -> i128 {
    let (a, b) = ak_params(i0x2, m0x2);
    let k = k as i64;
    // I₀+|M₀| = A + B
    (k as i128 + 1) * c(a + b + 1, k + 1) * c(a + 1, k + 1)
}

/// a_k from the double sum obtained by expanding N'² in powers of (1−t²):
/// Σ_{M=0}^{k} Σ_{I=M}^{A} (2I+B+1) C(I+B+M, M) C(I, M) C(A−M, k−M) (−1)^{k−M}
/// with A = I₀−|M₀|, B = 2|M₀|, and I shifted by |M₀|.
pub fn ak_double_sum(i0x2: u32, m0x2: i32, k: u32) -> i128 {
    let (a, b) = ak_params(i0x2, m0x2);
    let k = k as i64;
    let mut total: i128 = 0;
    for m in 0..=k {
        let sign: i128 = if (k - m) % 2 == 0 { 1 } else { -1 };
        for i in m..=a {
            total += sign * (2 * i + b + 1) as i128 * c(i + b + m, m) * c(i, m) * c(a - m, k - m);
        }
    }
    total
}

/// a_k from the rearranged single-index form
/// Σ_M (−1)^M C(A+M−k, M) Σ_I (2I+2k+B−2M+1) C(I+k−M, I) C(I+2k+B−2M, k−M).
pub fn ak_rearranged(i0x2: u32, m0x2: i32, k: u32) -> i128 {
    let (a, b) = ak_params(i0x2, m0x2);
    let k = k as i64;
    let mut total: i128 = 0;
    for m in 0..=k {
        let sign: i128 = if m % 2 == 0 { 1 } else { -1 };
        let mut inner: i128 = 0;
        for i in 0..=(a - k + m) {
            inner += (2 * i + 2 * k + b - 2 * m + 1) as i128 * c(i + k - m, i) * c(i + 2 * k + b - 2 * m, k - m);
        }
        total += sign * c(a + m - k, m) * inner;
    }
    total
}
