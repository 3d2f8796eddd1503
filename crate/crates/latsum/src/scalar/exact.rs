//! Q(ζ_n)(π): rational functions in a transcendental π over a cyclotomic field.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cyclo::Cyclo;
use crate::rat::{format_rational, Q};

type Poly = Vec<Cyclo>;

/// Reduced fraction num/den of polynomials in π; den is monic and coprime to num.
#[derive(Clone, Debug)]
pub struct ExactScalar {
    n: u32,
    num: Poly,
    den: Poly,
}

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Cyclo::is_zero) {
        p.pop();
    }
}

fn poly_lift(p: &Poly, m: u32) -> Poly {
    p.iter().map(|c| c.lift(m)).collect()
}

fn poly_add(a: &Poly, b: &Poly, n: u32) -> Poly {
    let len = a.len().max(b.len());
    let mut v: Poly = (0..len)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => Cyclo::zero(n),
        })
        .collect();
    trim(&mut v);
    v
}

fn poly_mul(a: &Poly, b: &Poly, n: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![Cyclo::zero(n); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                v[i + j] = v[i + j].add(&x.mul(y));
            }
        }
    }
    trim(&mut v);
    v
}

fn poly_shift(p: &Poly, k: usize, n: u32) -> Poly {
    if p.is_empty() {
        return vec![];
    }
    let mut v = vec![Cyclo::zero(n); k];
    v.extend(p.iter().cloned());
    v
}

fn poly_scale(p: &Poly, c: &Cyclo) -> Poly {
    p.iter().map(|x| x.mul(c)).collect()
}

fn poly_divrem(a: &Poly, b: &Poly, n: u32) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut quo = vec![Cyclo::zero(n); r.len() - db];
    for i in (0..quo.len()).rev() {
        let c = r[i + db].mul(&lead_inv);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = r[i + j].sub(&c.mul(bj));
            }
        }
        quo[i] = c;
    }
    trim(&mut r);
    (quo, r)
}

fn poly_gcd(a: &Poly, b: &Poly, n: u32) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y, n);
        x = std::mem::replace(&mut y, r);
    }
    x
}

fn is_monomial(p: &Poly) -> Option<usize> {
    let nz: Vec<usize> = (0..p.len()).filter(|&i| !p[i].is_zero()).collect();
    (nz.len() == 1).then(|| nz[0])
}

impl ExactScalar {
    pub fn zero(n: u32) -> Self {
        ExactScalar { n, num: vec![], den: vec![Cyclo::one(n)] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_cyclo(Cyclo::one(n))
    }

    pub fn from_rational(n: u32, x: Q) -> Self {
        Self::from_cyclo(Cyclo::from_rational(n, x))
    }

    pub fn from_cyclo(c: Cyclo) -> Self {
        let n = c.order();
        let mut num = vec![c];
        trim(&mut num);
        ExactScalar { n, num, den: vec![Cyclo::one(n)] }
    }

    /// c·π^e for any integer e.
    pub fn monomial(c: Cyclo, e: i64) -> Self {
        let n = c.order();
        if c.is_zero() {
            return Self::zero(n);
        }
        if e >= 0 {
            ExactScalar { n, num: poly_shift(&vec![c], e as usize, n), den: vec![Cyclo::one(n)] }
        } else {
            ExactScalar { n, num: vec![c], den: poly_shift(&vec![Cyclo::one(n)], (-e) as usize, n) }
        }
    }

    pub fn pi(n: u32) -> Self {
        Self::monomial(Cyclo::one(n), 1)
    }

    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        Self::from_cyclo(Cyclo::root_power(n, k))
    }

    /// √−1 = ζ_n^{n/4}; n must be divisible by 4.
    pub fn imag_unit(n: u32) -> Self {
        assert!(n.is_multiple_of(4), "√−1 needs 4 | N");
        Self::root_of_unity(n, (n / 4) as i64)
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn numerator(&self) -> &[Cyclo] {
        &self.num
    }

    pub fn denominator(&self) -> &[Cyclo] {
        &self.den
    }

    fn from_parts(n: u32, mut num: Poly, mut den: Poly) -> Self {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return Self::zero(n);
        }
        if let Some(d) = is_monomial(&den) {
            let lead_inv = den[d].inv().unwrap();
            let lo = (0..num.len()).find(|&i| !num[i].is_zero()).unwrap();
            let s = lo.min(d);
            let num = num[s..].iter().map(|c| c.mul(&lead_inv)).collect();
            return ExactScalar { n, num, den: poly_shift(&vec![Cyclo::one(n)], d - s, n) };
        }
        let g = poly_gcd(&num, &den, n);
        if g.len() > 1 {
            num = poly_divrem(&num, &g, n).0;
            den = poly_divrem(&den, &g, n).0;
        }
        let lead_inv = den.last().unwrap().inv().unwrap();
        ExactScalar { n, num: poly_scale(&num, &lead_inv), den: poly_scale(&den, &lead_inv) }
    }

    /// Re-express in Q(ζ_m)(π) for a multiple m of the current order.
    pub fn lift(&self, m: u32) -> Self {
        if m == self.n {
            return self.clone();
        }
        ExactScalar { n: m, num: poly_lift(&self.num, m), den: poly_lift(&self.den, m) }
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        let m = self.n.lcm(&o.n);
        (self.lift(m), o.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// If the denominator is a pure power π^d, returns d.
    pub fn pi_denominator_power(&self) -> Option<usize> {
        is_monomial(&self.den)
    }

    /// Terms (exponent of π, coefficient) when the value is a Laurent polynomial in π.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, Cyclo)>> {
        let d = self.pi_denominator_power()? as i64;
        Some(
            self.num
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 - d, c.clone()))
                .collect(),
        )
    }

    /// The value as a rational number, if it is one.
    pub fn as_rational(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.den.len() == 1 && self.num.len() == 1 {
            return self.num[0].as_rational().cloned();
        }
        None
    }

    /// True when every coefficient of the Laurent polynomial is rational.
    pub fn has_rational_coefficients(&self) -> bool {
        self.laurent_terms().is_some_and(|t| t.iter().all(|(_, c)| c.as_rational().is_some()))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.n != o.n {
            let (a, b) = self.aligned(o);
            return a.add(&b);
        }
        let n = self.n;
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if let (Some(a), Some(b)) = (is_monomial(&self.den), is_monomial(&o.den)) {
            // Both denominators are monic powers of π.
            let d = a.max(b);
            let num = poly_add(&poly_shift(&self.num, d - a, n), &poly_shift(&o.num, d - b, n), n);
            let den = poly_shift(&vec![Cyclo::one(n)], d, n);
            return Self::from_parts(n, num, den);
        }
        let num = poly_add(&poly_mul(&self.num, &o.den, n), &poly_mul(&o.num, &self.den, n), n);
        Self::from_parts(n, num, poly_mul(&self.den, &o.den, n))
    }

    pub fn neg(&self) -> Self {
        ExactScalar { n: self.n, num: self.num.iter().map(Cyclo::neg).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.n != o.n {
            let (a, b) = self.aligned(o);
            return a.mul(&b);
        }
        let n = self.n;
        if self.is_zero() || o.is_zero() {
            return Self::zero(n);
        }
        Self::from_parts(n, poly_mul(&self.num, &o.num, n), poly_mul(&self.den, &o.den, n))
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        ExactScalar { n: self.n, num: self.num.iter().map(|c| c.scale(s)).collect(), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_parts(self.n, self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Canonical string; see [`super::parse_exact`] for the grammar.
    pub fn to_canonical_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        match self.laurent_terms() {
            Some(mut terms) => {
                terms.sort_by_key(|b| std::cmp::Reverse(b.0));
                join_terms(&terms)
            }
            None => {
                let num: Vec<(i64, Cyclo)> =
                    self.num.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64, c.clone())).collect();
                let den: Vec<(i64, Cyclo)> =
                    self.den.iter().enumerate().rev().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64, c.clone())).collect();
                format!("({})/({})", join_terms(&num), join_terms(&den))
            }
        }
    }
}

fn pi_power(e: i64) -> String {
    if e == 1 {
        "pi".into()
    } else {
        format!("pi^{e}")
    }
}

fn join_terms(terms: &[(i64, Cyclo)]) -> String {
    let mut out = String::new();
    for (e, c) in terms {
        let (neg, body) = match c.as_rational() {
            Some(r) => {
                let a = r.abs();
                let body = if *e == 0 {
                    format_rational(&a)
                } else {
                    let p = pi_power(*e);
                    match (a.numer().is_one(), a.denom().is_one()) {
                        (true, true) => p,
                        (true, false) => format!("{p}/{}", a.denom()),
                        (false, true) => format!("{}*{p}", a.numer()),
                        (false, false) => format!("{}*{p}/{}", a.numer(), a.denom()),
                    }
                };
                (r.is_negative(), body)
            }
            None => {
                let body = if *e == 0 { c.to_string() } else { format!("{c}*{}", pi_power(*e)) };
                (false, body)
            }
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl PartialEq for ExactScalar {
    fn eq(&self, o: &Self) -> bool {
        let (a, b) = if self.n == o.n { (self.clone(), o.clone()) } else { self.aligned(o) };
        a.num == b.num && a.den == b.den
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
