//! Arbitrary-precision complex floats.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode};
use num_bigint::{BigInt, Sign};
use num_traits::Zero;

use crate::rat::Q;

pub const DEFAULT_PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision: at least 32 guard bits, rounded up to whole 64-bit words.
pub fn work(p: usize) -> usize {
    (p + 32).div_ceil(64) * 64
}

pub fn bigfloat_from_bigint(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let w = work(p);
    let base = BigFloat::from_f64(18446744073709551616.0, w);
    let mut acc = BigFloat::from_u64(0, w);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, w, RM).add(&BigFloat::from_u64(*d, w), w, RM);
    }
    if sign == Sign::Minus {
        acc = acc.neg();
    }
    acc
}

pub fn bigfloat_from_rational(x: &Q, p: usize) -> BigFloat {
    let w = work(p);
    bigfloat_from_bigint(x.numer(), p).div(&bigfloat_from_bigint(x.denom(), p), w, RM)
}

pub fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    format!("{x}").parse().unwrap_or(f64::NAN)
}

pub fn pi_float(p: usize) -> BigFloat {
    with_consts(|cc| cc.pi(work(p), RM))
}

pub fn exp_float(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.exp(work(p), RM, cc))
}

/// Complex number (re, im) at a fixed mantissa precision.
#[derive(Clone, Debug)]
pub struct NumericScalar {
    pub re: BigFloat,
    pub im: BigFloat,
    prec: usize,
}

impl NumericScalar {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        NumericScalar { re, im, prec }
    }

    pub fn zero(prec: usize) -> Self {
        let z = BigFloat::from_u64(0, work(prec));
        NumericScalar { re: z.clone(), im: z, prec }
    }

    pub fn from_rational(x: &Q, prec: usize) -> Self {
        let mut z = Self::zero(prec);
        if !x.is_zero() {
            z.re = bigfloat_from_rational(x, prec);
        }
        z
    }

    pub fn from_parts(re: &Q, im: &Q, prec: usize) -> Self {
        let mut z = Self::from_rational(re, prec);
        if !im.is_zero() {
            z.im = bigfloat_from_rational(im, prec);
        }
        z
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        NumericScalar { re: BigFloat::from_f64(re, work(prec)), im: BigFloat::from_f64(im, work(prec)), prec }
    }

    pub fn pi(prec: usize) -> Self {
        let mut z = Self::zero(prec);
        z.re = pi_float(prec);
        z
    }

    /// e^{2πi·x} for a real rational x.
    pub fn exp_two_pi_i(x: &Q, prec: usize) -> Self {
        let w = work(prec);
        let ang = pi_float(prec).mul(&BigFloat::from_u64(2, w), w, RM).mul(&bigfloat_from_rational(x, prec), w, RM);
        let (c, s) = with_consts(|cc| (ang.cos(w, RM, cc), ang.sin(w, RM, cc)));
        NumericScalar { re: c, im: s, prec }
    }

    /// e^{x} for a real rational x.
    pub fn exp_real(x: &Q, prec: usize) -> Self {
        let mut z = Self::zero(prec);
        z.re = exp_float(&bigfloat_from_rational(x, prec), prec);
        z
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn add(&self, o: &Self) -> Self {
        let w = work(self.prec.max(o.prec));
        NumericScalar { re: self.re.add(&o.re, w, RM), im: self.im.add(&o.im, w, RM), prec: self.prec.max(o.prec) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let w = work(self.prec.max(o.prec));
        NumericScalar { re: self.re.sub(&o.re, w, RM), im: self.im.sub(&o.im, w, RM), prec: self.prec.max(o.prec) }
    }

    pub fn neg(&self) -> Self {
        NumericScalar { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec.max(o.prec);
        let w = work(p);
        let re = self.re.mul(&o.re, w, RM).sub(&self.im.mul(&o.im, w, RM), w, RM);
        let im = self.re.mul(&o.im, w, RM).add(&self.im.mul(&o.re, w, RM), w, RM);
        NumericScalar { re, im, prec: p }
    }

    pub fn scale(&self, s: &Q) -> Self {
        let w = work(self.prec);
        let f = bigfloat_from_rational(s, self.prec);
        NumericScalar { re: self.re.mul(&f, w, RM), im: self.im.mul(&f, w, RM), prec: self.prec }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let w = work(self.prec);
        let d = self.re.mul(&self.re, w, RM).add(&self.im.mul(&self.im, w, RM), w, RM);
        Some(NumericScalar { re: self.re.div(&d, w, RM), im: self.im.neg().div(&d, w, RM), prec: self.prec })
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// |z| at working precision.
    pub fn abs_float(&self) -> BigFloat {
        let w = work(self.prec);
        if self.is_zero() {
            return BigFloat::from_u64(0, w);
        }
        self.re.mul(&self.re, w, RM).add(&self.im.mul(&self.im, w, RM), w, RM).sqrt(w, RM)
    }

    pub fn abs(&self) -> f64 {
        bigfloat_to_f64(&self.abs_float())
    }

    pub fn re_f64(&self) -> f64 {
        bigfloat_to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        bigfloat_to_f64(&self.im)
    }

    /// Decimal rendering with `digits` significant digits for each part.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let re = decimal(&self.re, digits);
        if self.im.is_zero() {
            return re;
        }
        let neg = self.im.is_negative();
        let im = decimal(&self.im.abs(), digits);
        format!("{re} {} {im}*i", if neg { "-" } else { "+" })
    }
}

/// Plain scientific notation with the given number of significant digits.
fn decimal(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = format!("{x}");
    let (mant, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let neg = mant.starts_with('-');
    let m = mant.trim_start_matches('-');
    let (ip, fp) = m.split_once('.').unwrap_or((m, ""));
    let all: String = format!("{ip}{fp}");
    let kept: String = all.chars().take(digits.max(1)).collect();
    let body = if kept.len() > 1 { format!("{}.{}", &kept[..1], &kept[1..]) } else { kept };
    let e: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
    format!("{}{}e{}", if neg { "-" } else { "" }, body, e)
}

impl fmt::Display for NumericScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.prec as f64 * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal_string(digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{q, qi};

    #[test]
    fn rational_round_trip() {
        let x = NumericScalar::from_rational(&q(-39, 8), 128);
        assert_eq!(x.re_f64(), -4.875);
        let big = Q::from_integer(BigInt::from(10).pow(40)) + qi(7);
        let y = NumericScalar::from_rational(&big, 200);
        assert_eq!(y.to_decimal_string(45), "1.0000000000000000000000000000000000000007e40");
    }

    #[test]
    fn quarter_turn_is_i() {
        let z = NumericScalar::exp_two_pi_i(&q(1, 4), 128);
        assert!(z.re_f64().abs() < 1e-38);
        assert!((z.im_f64() - 1.0).abs() < 1e-38);
    }

    #[test]
    fn inverse() {
        let z = NumericScalar::from_parts(&q(3, 2), &q(-2, 7), 128);
        let one = z.mul(&z.inv().unwrap());
        assert!((one.re_f64() - 1.0).abs() < 1e-36 && one.im_f64().abs() < 1e-36);
    }
}
