use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use schwinger::specfun::{
    ak_closed, ak_double_sum, ak_rearranged, binomial_exact, factorial, hyp0f1, hyp2f1_terminating, jacobi_p,
    jacobi_p_explicit, laguerre, log_factorial,
};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// ₂F₁(−m, −n; c; x) summed in exact rationals.
fn hyp2f1_exact(m: u32, n: u32, c: i64, x: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for j in 0..m.min(n) as i64 {
        term = term * rat(j - m as i64) * rat(j - n as i64) / (rat(c + j) * rat(j + 1)) * x;
        sum += &term;
    }
    sum
}

/// L_n^α(x) = Σ_j (−1)^j C(n+α, n−j) x^j / j! for integer α ≥ 0, in exact rationals.
fn laguerre_exact(n: u32, alpha: u32, x: &BigRational) -> BigRational {
    let mut sum = BigRational::zero();
    let mut power = BigRational::one();
    for j in 0..=n as u64 {
        let b = BigInt::from(binomial_exact((n + alpha) as u64, n as u64 - j));
        let term = BigRational::from_integer(b) * &power / BigRational::from_integer(BigInt::from(factorial(j) as u64));
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power *= x;
    }
    sum
}

proptest! {
    #[test]
    fn terminating_2f1_matches_rational_sum(m in 0u32..14, n in 0u32..14, c in 1i64..12, num in -40i64..40, den in 1i64..20) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let want = hyp2f1_exact(m, n, c, &x).to_f64().unwrap();
        let got = hyp2f1_terminating(m, n, c as f64, num as f64 / den as f64);
        prop_assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{got} vs {want}");
    }

    #[test]
    fn laguerre_matches_rational_sum(n in 0u32..16, alpha in 0u32..6, num in 0i64..60, den in 1i64..10) {
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        let want = laguerre_exact(n, alpha, &x).to_f64().unwrap();
        let got = laguerre(n, alpha as f64, num as f64 / den as f64);
        // sum of absolute terms
        let scale = laguerre_exact(n, alpha, &-x.clone()).to_f64().unwrap().abs().max(1.0);
        prop_assert!((got - want).abs() <= 1e-11 * scale, "{got} vs {want}");
    }

    #[test]
    fn jacobi_recurrence_matches_binomial_sum(n in 0u32..12, alpha in -0.9f64..6.0, beta in -0.9f64..6.0, x in -1.0f64..1.0) {
        let a = jacobi_p(n, alpha, beta, x);
        let b = jacobi_p_explicit(n, alpha, beta, x);
        prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn jacobi_reflection(i2 in 0i32..14, k in 0i32..14, x in 0.05f64..1.0) {
        // M0 runs over I0, I0-1, ..., -I0 in twice-units
        prop_assume!(k <= 2 * i2 && k % 2 == 0);
        let m2 = i2 - k;
        let m0 = m2 as f64 / 2.0;
        let lhs = x.powf(m0) * jacobi_p(((i2 - m2) / 2) as u32, 0.0, m2 as f64, 2.0 * x - 1.0);
        let rhs = x.powf(-m0) * jacobi_p(((i2 + m2) / 2) as u32, 0.0, -m2 as f64, 2.0 * x - 1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn ak_forms_agree(i0x2 in 0u32..17, j in 0u32..17, k in 0u32..12) {
        prop_assume!(j <= i0x2);
        let m0x2 = i0x2 as i32 - 2 * j as i32;
        let closed = ak_closed(i0x2, m0x2, k);
        prop_assert_eq!(ak_double_sum(i0x2, m0x2, k), closed);
        prop_assert_eq!(ak_rearranged(i0x2, m0x2, k), closed);
    }

    #[test]
    fn hyp0f1_half_integer_parameters(z in -6.0f64..6.0) {
        let x = z * z / 4.0;
        let ch = hyp0f1(0.5, x).unwrap();
        prop_assert!((ch - z.cosh()).abs() <= 1e-13 * z.cosh());
        let sh = hyp0f1(1.5, x).unwrap();
        let want = if z == 0.0 { 1.0 } else { z.sinh() / z };
        prop_assert!((sh - want).abs() <= 1e-13 * want);
        let c = hyp0f1(0.5, -x).unwrap();
        prop_assert!((c - z.cos()).abs() <= 1e-12);
    }
}

#[test]
fn log_factorial_matches_direct_sum() {
    let mut acc = 0.0f64;
    for n in 1..=300u64 {
        acc += (n as f64).ln();
        assert!((log_factorial(n) - acc).abs() <= 1e-12 * acc.max(1.0), "n = {n}");
    }
}
