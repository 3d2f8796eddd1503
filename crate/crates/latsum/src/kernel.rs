//! The one-dimensional kernel F(t, y; b) = t·e^{(t−2πib)y}/(e^{t−2πib} − 1) and its
//! coefficients C(k, y; b) = k!·[t^k]F.

use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::error::Result;
use crate::rat::{GaussQ, Q};
use crate::scalar::{Field, Ring};
use crate::series::TruncatedSeries;

static BERNOULLI: RwLock<Vec<Q>> = RwLock::new(Vec::new());

fn binomial(n: u32, k: u32) -> Q {
    let mut r = Q::one();
    for i in 0..k {
        r = r * Q::from_integer((n - i).into()) / Q::from_integer((i + 1).into());
    }
    r
}

/// Bernoulli numbers with B_1 = −1/2, from Σ_{j≤n} C(n+1, j)·B_j = 0.
pub fn bernoulli_number(n: u32) -> Q {
    if let Some(b) = BERNOULLI.read().unwrap().get(n as usize) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().unwrap();
    if table.is_empty() {
        table.push(Q::one());
    }
    while table.len() <= n as usize {
        let m = table.len() as u32;
        let s: Q = (0..m).map(|j| binomial(m + 1, j) * &table[j as usize]).sum();
        table.push(-s / Q::from_integer((m + 1).into()));
    }
    table[n as usize].clone()
}

/// Coefficients of B_n(y) = Σ_j C(n, j)·B_{n−j}·y^j, lowest degree first.
pub fn bernoulli_poly_coeffs(n: u32) -> Vec<Q> {
    (0..=n).map(|j| binomial(n, j) * bernoulli_number(n - j)).collect()
}

pub fn bernoulli_poly(n: u32, y: &Q) -> Q {
    bernoulli_poly_coeffs(n).iter().rev().fold(Q::zero(), |acc, c| acc * y + c)
}

fn factorial(k: u32) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * Q::from_integer(i.into()))
}

/// Kernel series in one variable through degree `order`. `y` is a fractional-part value in [0, 1].
pub fn kernel_series<R: Ring>(ring: &R, b: &GaussQ, y: &Q, order: u32) -> Result<TruncatedSeries<R::Elem>> {
    let phase = ring.exp_two_pi_i(&b.scale(&-y))?;
    if b.is_integer() {
        let terms = (0..=order).map(|k| (vec![k], phase.scale(&(bernoulli_poly(k, y) / factorial(k)))));
        return Ok(TruncatedSeries::from_terms(1, order, terms));
    }
    let rho = ring.exp_two_pi_i(&b.neg())?;
    // numerator t·e^{−2πiby}·e^{ty}, denominator ρ·e^t − 1 with ρ − 1 ≠ 0
    let num = TruncatedSeries::from_terms(
        1,
        order,
        (1..=order).map(|k| (vec![k], phase.scale(&(y.pow(k as i32 - 1) / factorial(k - 1))))),
    );
    let den = TruncatedSeries::from_terms(
        1,
        order,
        (0..=order).map(|k| {
            let c = rho.scale(&factorial(k).recip());
            (vec![k], if k == 0 { c.sub(&ring.one()) } else { c })
        }),
    );
    num.mul(&den.invert_unit()?)
}

/// C(k, y; b) read off the kernel series.
pub fn kernel_coefficient<R: Ring>(ring: &R, k: u32, b: &GaussQ, y: &Q) -> Result<R::Elem> {
    let s = kernel_series(ring, b, y, k)?;
    Ok(s.coefficient(&[k]).cloned().unwrap_or_else(|| ring.zero()).scale(&factorial(k)))
}

/// C(0, y; b): e^{−2πiby} for integral b, else 0.
pub fn kernel_c0<R: Ring>(ring: &R, b: &GaussQ, y: &Q) -> Result<R::Elem> {
    if b.is_integer() {
        ring.exp_two_pi_i(&b.scale(&-y))
    } else {
        Ok(ring.zero())
    }
}

/// C(1, y; b): (y − 1/2)·e^{−2πiby} for integral b, else e^{−2πiby}/(e^{−2πib} − 1).
pub fn kernel_c1<R: Ring>(ring: &R, b: &GaussQ, y: &Q) -> Result<R::Elem> {
    let phase = ring.exp_two_pi_i(&b.scale(&-y))?;
    if b.is_integer() {
        return Ok(phase.scale(&(y - Q::new(1.into(), 2.into()))));
    }
    let den = ring.exp_two_pi_i(&b.neg())?.sub(&ring.one());
    Ok(phase.mul(&den.inv().expect("b is not integral")))
}

/// −((2πi)^k/k!)·∫₀¹ C(k, x; b)·e^{−2πimx} dx by the four-case table.
pub fn kernel_moment(k: u32, m: i64, b: &Q) -> Q {
    let s = Q::from_integer(m.into()) + b;
    match (s.is_zero(), k == 0) {
        (true, true) => -Q::one(),
        (false, true) | (true, false) => Q::zero(),
        (false, false) => s.pow(k as i32).recip(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};
    use crate::scalar::{ExactRing, ExactScalar, NumericRing};

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli_number(1), q(-1, 2));
        assert_eq!(bernoulli_number(2), q(1, 6));
        assert_eq!(bernoulli_number(8), q(-1, 30));
        assert_eq!(bernoulli_number(12), q(-691, 2730));
        assert_eq!(bernoulli_poly(2, &qi(0)), q(1, 6));
        assert_eq!(bernoulli_poly(2, &q(1, 2)), q(-1, 12));
        assert_eq!(bernoulli_poly(3, &q(1, 3)), q(1, 27));
        // B_k(1 − y) = (−1)^k B_k(y)
        for k in 0..=8 {
            for y in [q(1, 3), q(2, 7)] {
                let s = if k % 2 == 0 { qi(1) } else { qi(-1) };
                assert_eq!(bernoulli_poly(k, &(qi(1) - &y)), s * bernoulli_poly(k, &y));
            }
        }
    }

    #[test]
    fn integral_kernel_is_bernoulli() {
        let r = ExactRing::new(4);
        for k in 0..=8 {
            for y in [qi(0), q(1, 2), q(1, 3)] {
                assert_eq!(kernel_coefficient(&r, k, &GaussQ::real(qi(0)), &y).unwrap().as_rational(), Some(bernoulli_poly(k, &y)));
            }
        }
    }

    #[test]
    fn low_order_closed_forms() {
        for (b, y) in [(qi(0), q(1, 3)), (qi(2), q(1, 4)), (q(1, 2), q(1, 3)), (q(1, 3), q(1, 5)), (q(2, 5), qi(1)), (q(3, 4), qi(0))] {
            let n = 4 * 3 * 5 * 4 * 5;
            let r = ExactRing::new(n);
            let b = GaussQ::real(b);
            assert_eq!(kernel_coefficient(&r, 0, &b, &y).unwrap(), kernel_c0(&r, &b, &y).unwrap());
            assert_eq!(kernel_coefficient(&r, 1, &b, &y).unwrap(), kernel_c1(&r, &b, &y).unwrap());
        }
    }

    #[test]
    fn series_matches_closed_polynomial_form() {
        // For non-integral b: C(k, y; b) = e^{−2πiby}·Σ_j C(k, j)·g_j·y^{k−j}, g_j = C(j, 0; b).
        let r = ExactRing::new(60);
        for b in [q(1, 2), q(1, 3), q(-2, 5)] {
            let b = GaussQ::real(b);
            let g: Vec<ExactScalar> = (0..=6).map(|j| kernel_coefficient(&r, j, &b, &qi(0)).unwrap()).collect();
            for y in [q(1, 4), q(2, 3)] {
                let phase = r.exp_two_pi_i(&b.scale(&-&y)).unwrap();
                for k in 0..=6u32 {
                    let mut acc = r.zero();
                    for j in 0..=k {
                        acc = acc.add(&g[j as usize].scale(&(binomial(k, j) * y.pow((k - j) as i32))));
                    }
                    assert_eq!(kernel_coefficient(&r, k, &b, &y).unwrap(), phase.mul(&acc), "k={k}");
                }
            }
        }
    }

    /// ∫₀¹ x^n e^{−2πiλx} dx in Q(ζ)(π), with e^{−2πiλ} = ρ.
    fn monomial_moments(r: &ExactRing, n_max: u32, lam: &Q, rho: &ExactScalar) -> Vec<ExactScalar> {
        if lam.is_zero() {
            return (0..=n_max).map(|n| r.rational(&Q::new(1.into(), (n + 1).into()))).collect();
        }
        // I_n = (ρ − n·I_{n−1})/(−2πiλ)
        let c = r.two_pi_i(&GaussQ::real(-lam)).inv().unwrap();
        let mut out = vec![rho.sub(&r.one()).mul(&c)];
        for n in 1..=n_max {
            let prev = out[n as usize - 1].scale(&Q::from_integer(n.into()));
            out.push(rho.sub(&prev).mul(&c));
        }
        out
    }

    #[test]
    fn moment_table_by_exact_integration() {
        let r = ExactRing::new(12);
        for b in [qi(0), q(1, 2), q(1, 3)] {
            let bg = GaussQ::real(b.clone());
            let rho = r.exp_two_pi_i(&bg.neg()).unwrap();
            // C(k, x; b) = e^{−2πibx}·P_k(x); the phase merges into the Fourier weight.
            let g: Vec<ExactScalar> = (0..=4).map(|j| kernel_coefficient(&r, j, &bg, &qi(0)).unwrap()).collect();
            for k in 0..=4u32 {
                for m in -3i64..=3 {
                    let lam = Q::from_integer(m.into()) + &b;
                    let mom = monomial_moments(&r, k, &lam, &rho);
                    let mut integral = r.zero();
                    for j in 0..=k {
                        let coef = g[j as usize].scale(&binomial(k, j));
                        integral = integral.add(&coef.mul(&mom[(k - j) as usize]));
                    }
                    let pref = r.two_pi_i(&GaussQ::real(qi(1))).pow(k).scale(&factorial(k).recip()).neg();
                    let got = pref.mul(&integral);
                    assert_eq!(got, r.rational(&kernel_moment(k, m, &b)), "k={k} m={m} b={b}");
                }
            }
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(kernel_moment(0, -1, &qi(1)), qi(-1));
        assert_eq!(kernel_moment(2, 3, &qi(0)), q(1, 9));
        assert_eq!(kernel_moment(1, -1, &qi(1)), qi(0));
        assert_eq!(kernel_moment(0, 2, &q(1, 2)), qi(0));
    }

    #[test]
    fn fourier_series_of_bernoulli() {
        // Σ_{0<|m|≤N} e^{2πimy}/m^k ≈ −((2πi)^k/k!)·B_k({y})
        let n = 10_000i64;
        for k in 2..=6u32 {
            for yq in [qi(0), q(1, 2), q(1, 3), q(1, 5)] {
                let y = crate::scalar::bigfloat_to_f64(&crate::scalar::bigfloat_from_rational(&yq, 64));
                let (mut re, mut im) = (0.0f64, 0.0f64);
                for m in 1..=n {
                    let a = 2.0 * std::f64::consts::PI * m as f64 * y;
                    let w = (m as f64).powi(k as i32);
                    re += 2.0 * a.cos() / w * if k % 2 == 0 { 1.0 } else { 0.0 };
                    im += 2.0 * a.sin() / w * if k % 2 == 1 { 1.0 } else { 0.0 };
                }
                let bk = crate::scalar::bigfloat_to_f64(&crate::scalar::bigfloat_from_rational(&bernoulli_poly(k, &yq), 64));
                let mag = (2.0 * std::f64::consts::PI).powi(k as i32) / factorial_f64(k) * bk;
                // (2πi)^k: real for even k (sign (−1)^{k/2}), imaginary for odd k
                let (ere, eim) = match k % 4 {
                    0 => (-mag, 0.0),
                    1 => (0.0, -mag),
                    2 => (mag, 0.0),
                    _ => (0.0, mag),
                };
                let err = ((re - ere).powi(2) + (im - eim).powi(2)).sqrt();
                assert!(err < 10.0 / n as f64, "k={k} y={y} err={err}");
            }
        }
    }

    fn factorial_f64(k: u32) -> f64 {
        (1..=k).map(f64::from).product()
    }

    #[test]
    fn numeric_matches_exact() {
        let b = GaussQ::real(q(1, 3));
        let e = kernel_series(&ExactRing::new(12), &b, &q(1, 5), 6).unwrap();
        let n = kernel_series(&NumericRing::new(128), &b, &q(1, 5), 6).unwrap();
        for (ex, c) in e.terms() {
            let d = crate::scalar::embed(c, 128).sub(n.coefficient(ex).unwrap());
            assert!(d.abs() < 1e-30);
        }
    }
}
