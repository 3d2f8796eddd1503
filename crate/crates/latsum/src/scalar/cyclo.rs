//! The cyclotomic field Q(ζ_n), stored sparsely over a basis of roots of unity.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{format_rational, Q};

/// Coefficients of Φ_n, lowest degree first. Cached per n.
pub fn cyclotomic_poly(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic order must be positive");
    // x^n - 1 divided by Φ_d for all proper divisors d.
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_poly(d);
            p = exact_int_div(&p, &q);
        }
    }
    let p = Arc::new(p);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![0i64; rem.len() - dd];
    for i in (0..quo.len()).rev() {
        let c = rem[i + dd];
        quo[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quo
}

pub fn euler_phi(n: u32) -> usize {
    factor(n).iter().map(|&(p, e)| ((p - 1) * p.pow(e - 1)) as usize).product()
}

fn factor(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// One prime-power factor q = p^e of the order, with its CRT idempotent.
#[derive(Debug)]
struct Part {
    p: u32,
    q: u32,
    stride: u32,
    idem: u64,
}

/// The basis of Q(ζ_n) made of the roots ζ_n^j whose every prime-power component
/// j mod p^e = a + p^{e−1}·b has b ≤ p − 2 (b = 0 for p = 2). It contains 1, so rationals
/// and single roots stay sparse.
#[derive(Debug)]
struct RootBasis {
    n: u32,
    parts: Vec<Part>,
}

impl RootBasis {
    fn get(n: u32) -> Arc<RootBasis> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<RootBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut c = cache.lock().unwrap();
        c.entry(n)
            .or_insert_with(|| {
                assert!(n >= 1, "cyclotomic order must be positive");
                let parts = factor(n)
                    .into_iter()
                    .map(|(p, e)| {
                        let q = p.pow(e);
                        let rest = (n / q) as u64;
                        // idem ≡ 1 (mod q), ≡ 0 (mod n/q)
                        let inv = (1..=q as u64).find(|x| (rest * x) % q as u64 == 1 % q as u64).unwrap_or(1);
                        Part { p, q, stride: q / p, idem: (rest * inv) % n as u64 }
                    })
                    .collect();
                Arc::new(RootBasis { n, parts })
            })
            .clone()
    }

    /// ζ_n^j in the basis, as (exponent, ±1) pairs.
    fn expand(&self, j: u32, out: &mut Vec<(u32, i8)>) {
        out.clear();
        out.push((0, 1));
        let n = self.n as u64;
        let mut scratch = vec![];
        for part in &self.parts {
            let c = j % part.q;
            let (a, b) = (c % part.stride, c / part.stride);
            let ok = if part.p == 2 { b == 0 } else { b + 2 <= part.p };
            scratch.clear();
            for &(acc, s) in out.iter() {
                if ok {
                    scratch.push((((acc as u64 + part.idem * c as u64) % n) as u32, s));
                } else if part.p == 2 {
                    scratch.push((((acc as u64 + part.idem * a as u64) % n) as u32, -s));
                } else {
                    for b2 in 0..part.p - 1 {
                        let comp = (a + part.stride * b2) as u64;
                        scratch.push((((acc as u64 + part.idem * comp) % n) as u32, -s));
                    }
                }
            }
            std::mem::swap(out, &mut scratch);
        }
    }
}

/// An element Σ c_j ζ_n^j of Q(ζ_n), stored sparsely over the root basis.
#[derive(Clone)]
pub struct Cyclo {
    basis: Arc<RootBasis>,
    terms: Vec<(u32, Q)>,
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo[{}]{}", self.basis.n, self)
    }
}

impl Cyclo {
    pub fn zero(n: u32) -> Self {
        Cyclo { basis: RootBasis::get(n), terms: vec![] }
    }

    pub fn from_rational(n: u32, x: Q) -> Self {
        let mut z = Self::zero(n);
        if !x.is_zero() {
            z.terms.push((0, x));
        }
        z
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Q::one())
    }

    /// ζ_n^k for any integer k.
    pub fn root_power(n: u32, k: i64) -> Self {
        let basis = RootBasis::get(n);
        let mut acc = HashMap::new();
        push_root(&basis, k.rem_euclid(n as i64) as u32, &Q::one(), &mut acc, &mut vec![]);
        Self::from_map(basis, acc)
    }

    fn from_map(basis: Arc<RootBasis>, acc: HashMap<u32, Q>) -> Self {
        let mut terms: Vec<(u32, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|t| t.0);
        Cyclo { basis, terms }
    }

    pub fn order(&self) -> u32 {
        self.basis.n
    }

    /// Nonzero (exponent, coefficient) pairs over the root basis, ascending exponent.
    pub fn terms(&self) -> &[(u32, Q)] {
        &self.terms
    }

    /// Re-express in Q(ζ_m) for a multiple m of the current order.
    pub fn lift(&self, m: u32) -> Self {
        let n = self.basis.n;
        if m == n {
            return self.clone();
        }
        assert!(m.is_multiple_of(n), "cannot lift Q(ζ_{n}) into Q(ζ_{m})");
        let step = m / n;
        let basis = RootBasis::get(m);
        let mut acc = HashMap::new();
        let mut buf = vec![];
        for (j, c) in &self.terms {
            push_root(&basis, j * step, c, &mut acc, &mut buf);
        }
        Self::from_map(basis, acc)
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        let m = self.basis.n.lcm(&o.basis.n);
        (self.lift(m), o.lift(m))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(One::is_one)
    }

    pub fn as_rational(&self) -> Option<&Q> {
        static ZERO: OnceLock<Q> = OnceLock::new();
        match self.terms.as_slice() {
            [] => Some(ZERO.get_or_init(Q::zero)),
            [(0, c)] => Some(c),
            _ => None,
        }
    }

    fn merge(&self, o: &Self, sign: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if sign { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if sign { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Cyclo { basis: self.basis.clone(), terms: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.basis.n != o.basis.n {
            let (a, b) = self.aligned(o);
            return a.add(&b);
        }
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        if self.basis.n != o.basis.n {
            let (a, b) = self.aligned(o);
            return a.sub(&b);
        }
        self.merge(o, true)
    }

    pub fn neg(&self) -> Self {
        Cyclo { basis: self.basis.clone(), terms: self.terms.iter().map(|(j, c)| (*j, -c)).collect() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return Cyclo { basis: self.basis.clone(), terms: vec![] };
        }
        Cyclo { basis: self.basis.clone(), terms: self.terms.iter().map(|(j, c)| (*j, c * s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.basis.n != o.basis.n {
            let (a, b) = self.aligned(o);
            return a.mul(&b);
        }
        if let Some(r) = o.as_rational() {
            return self.scale(r);
        }
        if let Some(r) = self.as_rational() {
            return o.scale(r);
        }
        let n = self.basis.n;
        let mut acc = HashMap::new();
        let mut buf = vec![];
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let e = ((*i as u64 + *j as u64) % n as u64) as u32;
                push_root(&self.basis, e, &(a * b), &mut acc, &mut buf);
            }
        }
        Self::from_map(self.basis.clone(), acc)
    }

    /// Multiplicative inverse, computed in the smallest Q(ζ_d) ⊂ Q(ζ_n) spanned by the support.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(self.basis.n, r.recip()));
        }
        let n = self.basis.n;
        if let [(j, c)] = self.terms.as_slice() {
            return Some(Self::root_power(n, -(*j as i64)).scale(&c.recip()));
        }
        let g = self.terms.iter().fold(n, |g, (j, _)| g.gcd(j));
        let d = n / g;
        let phi = cyclotomic_poly(d);
        let mut dense = vec![Q::zero(); d as usize];
        for (j, c) in &self.terms {
            dense[(j / g) as usize] += c;
        }
        let modulus: Vec<Q> = phi.iter().map(|&c| Q::from_integer(c.into())).collect();
        let s = qpoly::inverse_mod(&dense, &modulus)?;
        let mut acc = HashMap::new();
        let mut buf = vec![];
        for (i, c) in s.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            push_root(&self.basis, ((i as u64 * g as u64) % n as u64) as u32, c, &mut acc, &mut buf);
        }
        Some(Self::from_map(self.basis.clone(), acc))
    }

    /// Complex value as a pair of f64, for diagnostics.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, c) in &self.terms {
            let x = rat_to_f64(c);
            let ang = std::f64::consts::TAU * *j as f64 / self.basis.n as f64;
            re += x * ang.cos();
            im += x * ang.sin();
        }
        (re, im)
    }
}

fn push_root(basis: &RootBasis, e: u32, c: &Q, acc: &mut HashMap<u32, Q>, buf: &mut Vec<(u32, i8)>) {
    basis.expand(e, buf);
    for &(x, s) in buf.iter() {
        let entry = acc.entry(x).or_insert_with(Q::zero);
        if s > 0 {
            *entry += c;
        } else {
            *entry -= c;
        }
    }
}

pub(crate) fn rat_to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for Cyclo {
    fn eq(&self, o: &Self) -> bool {
        if self.basis.n == o.basis.n {
            self.terms == o.terms
        } else {
            let (a, b) = self.aligned(o);
            a.terms == b.terms
        }
    }
}

impl fmt::Display for Cyclo {
    /// Rational values print bare; others as "(c0 + c1*z + …)" with z = ζ_n.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(r));
        }
        let mut out = String::new();
        for (j, c) in &self.terms {
            let j = *j;
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let zpart = match j {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{j}"),
            };
            if j == 0 {
                out.push_str(&format_rational(&a));
            } else if a.is_one() {
                out.push_str(&zpart);
            } else if a.denom().is_one() {
                out.push_str(&format!("{}*{zpart}", a.numer()));
            } else if a.numer().is_one() {
                out.push_str(&format!("{zpart}/{}", a.denom()));
            } else {
                out.push_str(&format!("{}*{zpart}/{}", a.numer(), a.denom()));
            }
        }
        write!(f, "({out})")
    }
}

/// Dense polynomials over Q, lowest degree first.
mod qpoly {
    use super::*;

    fn trim(p: &mut Vec<Q>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    fn divrem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = b[db].recip();
        if r.len() < b.len() {
            return (vec![], r);
        }
        let mut quo = vec![Q::zero(); r.len() - db];
        for i in (0..quo.len()).rev() {
            let c = &r[i + db] * &lead_inv;
            if !c.is_zero() {
                for (j, bj) in b.iter().enumerate() {
                    r[i + j] -= &c * bj;
                }
            }
            quo[i] = c;
        }
        trim(&mut r);
        (quo, r)
    }

    fn mul(a: &[Q], b: &[Q]) -> Vec<Q> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut v = vec![Q::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                v[i + j] += x * y;
            }
        }
        trim(&mut v);
        v
    }

    fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
        let n = a.len().max(b.len());
        let mut v: Vec<Q> = (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
            .collect();
        trim(&mut v);
        v
    }

    /// s with s·a ≡ 1 (mod m), if gcd(a, m) = 1.
    pub fn inverse_mod(a: &[Q], m: &[Q]) -> Option<Vec<Q>> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1): (Vec<Q>, Vec<Q>) = (vec![], vec![Q::one()]);
        while !r1.is_empty() {
            let (quo, rem) = divrem(&r0, &r1);
            let s2 = sub(&s0, &mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = r0[0].recip();
        Some(s0.into_iter().map(|x| x * &c).collect())
    }
}
