//! Coefficient rings: the exact field Q(ζ_N)(π) and arbitrary-precision complex floats.

mod cyclo;
mod exact;
mod numeric;
mod parse;

use std::fmt::Debug;

pub use cyclo::{cyclotomic_poly, euler_phi, Cyclo};
pub use exact::ExactScalar;
pub use numeric::{work as working_precision, bigfloat_from_bigint, bigfloat_from_rational, bigfloat_to_f64, pi_float, NumericScalar, DEFAULT_PRECISION};
pub use parse::parse_exact;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{Arrangement, Basis, GenericDirection};
use crate::rat::{denom_u64, lcm_u64, GaussQ, Q};

/// Field operations shared by both scalar kinds.
pub trait Field: Clone + Debug + Send + Sync {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn scale(&self, q: &Q) -> Self;
    /// Absolute value as f64; used for residual reports and tolerances.
    fn magnitude(&self) -> f64;
}

/// A coefficient ring with the constants the generating function needs.
pub trait Ring: Clone + Send + Sync {
    type Elem: Field;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn rational(&self, q: &Q) -> Self::Elem;
    fn gaussian(&self, z: &GaussQ) -> Self::Elem;
    /// 2π√−1·z.
    fn two_pi_i(&self, z: &GaussQ) -> Self::Elem;
    /// e^{2π√−1·z}.
    fn exp_two_pi_i(&self, z: &GaussQ) -> Result<Self::Elem>;
    fn is_exact(&self) -> bool;
    /// Relative residual accepted by exact division: 0 in exact mode.
    fn division_tolerance(&self) -> f64;
}

impl Field for ExactScalar {
    fn add(&self, rhs: &Self) -> Self {
        ExactScalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        ExactScalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        ExactScalar::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        ExactScalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        ExactScalar::inv(self)
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn scale(&self, q: &Q) -> Self {
        ExactScalar::scale(self, q)
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            embed(self, 64).abs()
        }
    }
}

impl Field for NumericScalar {
    fn add(&self, rhs: &Self) -> Self {
        NumericScalar::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        NumericScalar::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        NumericScalar::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        NumericScalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        NumericScalar::inv(self)
    }
    fn is_zero(&self) -> bool {
        NumericScalar::is_zero(self)
    }
    fn scale(&self, q: &Q) -> Self {
        NumericScalar::scale(self, q)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

/// Q(ζ_N)(π) with a fixed cyclotomic order N (a multiple of 4).
#[derive(Clone, Debug)]
pub struct ExactRing {
    pub n: u32,
}

impl ExactRing {
    pub fn new(n: u32) -> Self {
        assert!(n.is_multiple_of(4), "cyclotomic order must be divisible by 4");
        ExactRing { n }
    }
}

impl Ring for ExactRing {
    type Elem = ExactScalar;

    fn zero(&self) -> ExactScalar {
        ExactScalar::zero(self.n)
    }
    fn one(&self) -> ExactScalar {
        ExactScalar::one(self.n)
    }
    fn rational(&self, q: &Q) -> ExactScalar {
        ExactScalar::from_rational(self.n, q.clone())
    }
    fn gaussian(&self, z: &GaussQ) -> ExactScalar {
        self.rational(&z.re).add(&ExactScalar::imag_unit(self.n).scale(&z.im))
    }
    fn two_pi_i(&self, z: &GaussQ) -> ExactScalar {
        // 2πi(a + bi) = π(2a·i − 2b)
        let c = self.gaussian(&GaussQ { re: -&z.im * Q::from_integer(2.into()), im: &z.re * Q::from_integer(2.into()) });
        c.mul(&ExactScalar::pi(self.n))
    }
    fn exp_two_pi_i(&self, z: &GaussQ) -> Result<ExactScalar> {
        if !z.is_real() {
            return Err(Error::NotExact(format!("e^(2πi·({z})) with non-real exponent")));
        }
        let den = denom_u64(&z.re);
        let m = lcm_u64(self.n as u64, den) as u32;
        let k = (&z.re * Q::from_integer(m.into())).to_integer().mod_floor(&BigInt::from(m));
        let k = i64::try_from(k).expect("reduced residue fits i64");
        Ok(ExactScalar::root_of_unity(m, k))
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn division_tolerance(&self) -> f64 {
        0.0
    }
}

/// Complex floats with a mantissa of `precision` bits.
#[derive(Clone, Debug)]
pub struct NumericRing {
    pub precision: usize,
}

impl NumericRing {
    pub fn new(precision: usize) -> Self {
        NumericRing { precision }
    }
}

impl Ring for NumericRing {
    type Elem = NumericScalar;

    fn zero(&self) -> NumericScalar {
        NumericScalar::zero(self.precision)
    }
    fn one(&self) -> NumericScalar {
        NumericScalar::from_rational(&Q::from_integer(1.into()), self.precision)
    }
    fn rational(&self, q: &Q) -> NumericScalar {
        NumericScalar::from_rational(q, self.precision)
    }
    fn gaussian(&self, z: &GaussQ) -> NumericScalar {
        NumericScalar::from_parts(&z.re, &z.im, self.precision)
    }
    fn two_pi_i(&self, z: &GaussQ) -> NumericScalar {
        let two_pi = NumericScalar::pi(self.precision).scale(&Q::from_integer(2.into()));
        two_pi.mul(&NumericScalar::from_parts(&-&z.im, &z.re, self.precision))
    }
    fn exp_two_pi_i(&self, z: &GaussQ) -> Result<NumericScalar> {
        let phase = NumericScalar::exp_two_pi_i(&z.re, self.precision);
        if z.im.is_zero() {
            return Ok(phase);
        }
        // e^{2πi(a+bi)} = e^{−2πb}·e^{2πia}
        let p = self.precision;
        let w = numeric::work(p);
        let rm = astro_float::RoundingMode::ToEven;
        let arg = pi_float(p).mul(&bigfloat_from_rational(&(-&z.im * Q::from_integer(2.into())), p), w, rm);
        let mag = numeric_exp(&arg, p);
        Ok(phase.mul(&NumericScalar::new(mag, astro_float::BigFloat::from_u64(0, w), p)))
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn division_tolerance(&self) -> f64 {
        2f64.powi(-(self.precision as i32) / 2)
    }
}

fn numeric_exp(x: &astro_float::BigFloat, p: usize) -> astro_float::BigFloat {
    numeric::exp_float(x, p)
}

/// Evaluates ζ_N ↦ e^{2πi/N}, π ↦ π at the requested precision.
pub fn embed(x: &ExactScalar, precision: usize) -> NumericScalar {
    let pi = NumericScalar::pi(precision);
    let cyc = |c: &Cyclo| -> NumericScalar {
        let mut acc = NumericScalar::zero(precision);
        for (j, a) in c.terms() {
            let root = NumericScalar::exp_two_pi_i(&Q::new((*j).into(), c.order().into()), precision);
            acc = acc.add(&root.mul(&NumericScalar::from_rational(a, precision)));
        }
        acc
    };
    let poly = |p: &[Cyclo]| -> NumericScalar {
        let mut acc = NumericScalar::zero(precision);
        for c in p.iter().rev() {
            acc = acc.mul(&pi).add(&cyc(c));
        }
        acc
    };
    if x.is_zero() {
        return NumericScalar::zero(precision);
    }
    poly(x.numerator()).mul(&poly(x.denominator()).inv().expect("nonzero denominator"))
}

/// N = lcm(4, denominators of every c_f, ⟨y+w, f⃗^B⟩ and c_f·{y+w}_{B,f}).
///
/// The products c_f·{y+w}_{B,f} are the exponents of the phases e^{−2πi c_f {y+w}_{B,f}}; their
/// denominators need not divide the lcm of the factors' denominators.
pub fn cyclotomic_order(arr: &Arrangement, bases: &[Basis], phi: &GenericDirection, y: &[Q]) -> Result<u32> {
    let mut n = 4u64;
    for f in arr.functionals() {
        if !f.constant.is_real() {
            return Err(Error::NotExact(format!("non-real constant {}", f.constant)));
        }
        n = lcm_u64(n, denom_u64(&f.constant.re));
    }
    for b in bases {
        for w in b.coset_reps() {
            for (pos, &fid) in b.members().iter().enumerate() {
                let v = b.pairing(y, w, pos);
                n = lcm_u64(n, denom_u64(&v));
                let fr = b.frac_part(y, w, pos, phi);
                let c = &arr.functionals()[fid].constant.re;
                n = lcm_u64(n, denom_u64(&(c * fr)));
            }
        }
    }
    u32::try_from(n).map_err(|_| Error::NotExact("cyclotomic order overflow".into()))
}
