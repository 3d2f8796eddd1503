//! Multivariate power series truncated by total degree, linear forms, and rational forms
//! whose denominators are products of linear forms without constant term.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Display};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Q;
use crate::scalar::{Field, Ring};

pub type Exponent = Vec<u32>;

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Σ c_e t^e over exponents of total degree ≤ order.
#[derive(Clone, Debug)]
pub struct TruncatedSeries<E> {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Exponent, E>,
}

impl<E: Field> TruncatedSeries<E> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        TruncatedSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: E) -> Self {
        Self::monomial(nvars, order, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, order: u32, exp: Exponent, c: E) -> Self {
        let mut s = Self::zero(nvars, order);
        s.insert(exp, c);
        s
    }

    /// Builds a series, dropping zero coefficients and exponents past the order.
    pub fn from_terms(nvars: usize, order: u32, terms: impl IntoIterator<Item = (Exponent, E)>) -> Self {
        let mut s = Self::zero(nvars, order);
        for (e, c) in terms {
            s.accumulate(e, c);
        }
        s
    }

    fn insert(&mut self, e: Exponent, c: E) {
        debug_assert_eq!(e.len(), self.nvars);
        if degree(&e) <= self.order && !c.is_zero() {
            self.terms.insert(e, c);
        }
    }

    fn accumulate(&mut self, e: Exponent, c: E) {
        debug_assert_eq!(e.len(), self.nvars);
        if degree(&e) > self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, E> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Option<&E> {
        self.terms.get(e)
    }

    pub fn constant_term(&self) -> Option<&E> {
        self.terms.get(&vec![0; self.nvars])
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncatedSeries {
            nvars: self.nvars,
            order,
            terms: self.terms.iter().filter(|(e, _)| degree(e) <= order).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Terms of total degree exactly d.
    pub fn homogeneous(&self, d: u32) -> impl Iterator<Item = (&Exponent, &E)> {
        self.terms.iter().filter(move |(e, _)| degree(e) == d)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.nvars != o.nvars {
            return Err(Error::Mismatch(format!("{} vs {} variables", self.nvars, o.nvars)));
        }
        Ok(())
    }

    /// Sum; the result keeps the smaller of the two orders.
    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut r = self.truncate(self.order.min(o.order));
        for (e, c) in &o.terms {
            r.accumulate(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &E) -> Self {
        self.map(|c| c.mul(s))
    }

    pub fn scale_q(&self, s: &Q) -> Self {
        self.map(|c| c.scale(s))
    }

    fn map(&self, f: impl Fn(&E) -> E) -> Self {
        TruncatedSeries::from_terms(self.nvars, self.order, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let order = self.order.min(o.order);
        let b: Vec<(&Exponent, u32, &E)> = o.terms.iter().map(|(e, c)| (e, degree(e), c)).collect();
        let mut r = Self::zero(self.nvars, order);
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            if da > order {
                continue;
            }
            for &(eb, db, cb) in &b {
                if da + db <= order {
                    let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                    r.accumulate(e, ca.mul(cb));
                }
            }
        }
        Ok(r)
    }

    pub fn pow(&self, k: u32, one: &E) -> Self {
        let mut acc = Self::constant(self.nvars, self.order, one.clone());
        for _ in 0..k {
            acc = acc.mul(self).expect("same shape");
        }
        acc
    }

    /// Multiplies by Σ a_j t_j; the result is valid one degree higher.
    pub fn mul_linear(&self, coeffs: &[Q]) -> Self {
        let mut r = Self::zero(self.nvars, self.order + 1);
        for (e, c) in &self.terms {
            for (j, a) in coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                let mut e2 = e.clone();
                e2[j] += 1;
                r.accumulate(e2, c.scale(a));
            }
        }
        r
    }

    /// 1/s for a series with nonzero constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.constant_term().ok_or(Error::ZeroConstantTerm)?;
        let inv0 = c0.inv().ok_or(Error::ZeroConstantTerm)?;
        // s = c0·(1 − r)  ⇒  1/s = c0⁻¹·Σ rʲ
        let mut r = self.scale(&inv0).neg();
        r.terms.remove(&vec![0; self.nvars]);
        let one = inv0.mul(c0);
        let mut acc = Self::constant(self.nvars, self.order, one.clone());
        for _ in 0..self.order {
            acc = acc.mul(&r).expect("same shape").add(&Self::constant(self.nvars, self.order, one.clone())).expect("same shape");
        }
        Ok(acc.scale(&inv0))
    }

    /// Places a univariate series into variable slot `slot` of an nvars-variable series.
    pub fn embed_variable(&self, nvars: usize, slot: usize) -> Self {
        assert_eq!(self.nvars, 1);
        TruncatedSeries::from_terms(
            nvars,
            self.order,
            self.terms.iter().map(|(e, c)| {
                let mut x = vec![0; nvars];
                x[slot] = e[0];
                (x, c.clone())
            }),
        )
    }

    /// Moves variable i of this series to slot `slots[i]` of an nvars-variable series.
    pub fn relabel(&self, nvars: usize, slots: &[usize]) -> Self {
        assert_eq!(slots.len(), self.nvars);
        TruncatedSeries::from_terms(
            nvars,
            self.order,
            self.terms.iter().map(|(e, c)| {
                let mut x = vec![0; nvars];
                for (i, &s) in slots.iter().enumerate() {
                    x[s] += e[i];
                }
                (x, c.clone())
            }),
        )
    }

    /// Σ a_k·L(t)^k for a univariate series Σ a_k x^k and a linear form L with rational coefficients.
    pub fn compose_linear(&self, coeffs: &[Q]) -> Self {
        assert_eq!(self.nvars, 1);
        let nvars = coeffs.len();
        let mut powers = LinearPowers::new(coeffs);
        let mut r = Self::zero(nvars, self.order);
        for (e, c) in &self.terms {
            for (x, a) in powers.get(e[0]) {
                r.accumulate(x.clone(), c.scale(a));
            }
        }
        r
    }

    /// Replaces t_slot by Σ a_j t_j (a homogeneous linear substitution; degrees are preserved).
    pub fn substitute(&self, slot: usize, coeffs: &[Q]) -> Self {
        let mut powers = LinearPowers::new(coeffs);
        let mut r = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[slot] = 0;
            for (x, a) in powers.get(e[slot]) {
                let y = rest.iter().zip(x).map(|(p, q)| p + q).collect();
                r.accumulate(y, c.scale(a));
            }
        }
        r
    }

    /// The quotient q with q·l = s, l = Σ a_j t_j. The quotient is valid one degree lower.
    ///
    /// Changes variables so that l becomes the coordinate u in the pivot slot, strips one power
    /// of u and changes back. Any u⁰ term larger than `tolerance·max|s|` is a residual.
    pub fn divide_exact(&self, l: &[Q], tolerance: f64) -> Result<Self> {
        assert_eq!(l.len(), self.nvars);
        let pivot = pivot_of(l).ok_or_else(|| Error::InvalidInput("division by the zero linear form".into()))?;
        let ap = &l[pivot];
        let forward: Vec<Q> = l.iter().enumerate().map(|(j, a)| if j == pivot { ap.recip() } else { -a / ap }).collect();
        let moved = self.substitute(pivot, &forward);
        let mut residual_terms = 0;
        let mut residual_norm = 0f64;
        let scale = if tolerance > 0.0 { self.max_magnitude() } else { 0.0 };
        let mut shifted = Self::zero(self.nvars, self.order.saturating_sub(1));
        for (e, c) in &moved.terms {
            if e[pivot] == 0 {
                let m = c.magnitude();
                if tolerance == 0.0 || m > tolerance * scale {
                    residual_terms += 1;
                    residual_norm = residual_norm.max(m);
                }
            } else {
                let mut e2 = e.clone();
                e2[pivot] -= 1;
                shifted.accumulate(e2, c.clone());
            }
        }
        if residual_terms > 0 {
            return Err(Error::NonDivisible { divisor: format_linear(l), residual_terms, residual_norm });
        }
        Ok(shifted.substitute(pivot, l))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// True if every coefficient of `o` matches within `tol` (0 demands exact equality).
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        match self.sub(o) {
            Ok(d) => d.terms.values().all(|c| if tol == 0.0 { c.is_zero() } else { c.magnitude() <= tol }),
            Err(_) => false,
        }
    }
}

impl<E: Field + Display> TruncatedSeries<E> {
    /// "(e1,e2,…) : scalar" lines in lexicographic exponent order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            let ex: Vec<String> = e.iter().map(u32::to_string).collect();
            out.push_str(&format!("({}) : {}\n", ex.join(","), c));
        }
        out
    }
}

/// e^{Σ a_j t_j} truncated at `order`.
pub fn exp_linear<R: Ring>(ring: &R, coeffs: &[Q], order: u32) -> TruncatedSeries<R::Elem> {
    let mut fact = Q::one();
    let uni = TruncatedSeries::from_terms(
        1,
        order,
        (0..=order).map(|k| {
            if k > 0 {
                fact *= Q::from_integer(k.into());
            }
            (vec![k], ring.rational(&fact.recip()))
        }),
    );
    uni.compose_linear(coeffs)
}

/// Pivot: largest |a_j|, ties broken by the lowest index.
fn pivot_of(l: &[Q]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (j, a) in l.iter().enumerate() {
        if !a.is_zero() && best.is_none_or(|b| a.abs() > l[b].abs()) {
            best = Some(j);
        }
    }
    best
}

pub fn format_linear(l: &[Q]) -> String {
    let parts: Vec<String> = l.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| format!("{a}*t{j}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Cached powers of a linear form with rational coefficients.
struct LinearPowers {
    coeffs: Vec<Q>,
    cache: HashMap<u32, Vec<(Exponent, Q)>>,
}

impl LinearPowers {
    fn new(coeffs: &[Q]) -> Self {
        LinearPowers { coeffs: coeffs.to_vec(), cache: HashMap::new() }
    }

    fn get(&mut self, k: u32) -> &[(Exponent, Q)] {
        if !self.cache.contains_key(&k) {
            let n = self.coeffs.len();
            let v = if k == 0 {
                vec![(vec![0; n], Q::one())]
            } else {
                let prev = self.get(k - 1).to_vec();
                let mut acc: BTreeMap<Exponent, Q> = BTreeMap::new();
                for (e, c) in &prev {
                    for (j, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
                        let mut e2 = e.clone();
                        e2[j] += 1;
                        *acc.entry(e2).or_insert_with(Q::zero) += c * a;
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            };
            self.cache.insert(k, v);
        }
        &self.cache[&k]
    }
}

/// ⟨coeffs, t⟩ + constant.
#[derive(Clone, Debug)]
pub struct LinearForm<E> {
    pub coeffs: Vec<Q>,
    pub constant: E,
}

impl<E: Field> LinearForm<E> {
    pub fn new(coeffs: Vec<Q>, constant: E) -> Result<Self> {
        if constant.is_zero() && coeffs.iter().all(Zero::is_zero) {
            return Err(Error::InvalidInput("linear form is identically zero".into()));
        }
        Ok(LinearForm { coeffs, constant })
    }

    pub fn is_constant_free(&self) -> bool {
        self.constant.is_zero()
    }

    pub fn to_series(&self, order: u32, one: &E) -> TruncatedSeries<E> {
        let n = self.coeffs.len();
        let mut s = TruncatedSeries::constant(n, order, self.constant.clone());
        for (j, a) in self.coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            s.accumulate(e, one.scale(a));
        }
        s
    }
}

/// numerator / ∏ denominators, each denominator a constant-free linear form.
#[derive(Clone, Debug)]
pub struct RationalForm<E> {
    pub numerator: TruncatedSeries<E>,
    pub denominators: Vec<Vec<Q>>,
}

impl<E: Field> RationalForm<E> {
    pub fn new(numerator: TruncatedSeries<E>, denominators: Vec<Vec<Q>>) -> Result<Self> {
        for d in &denominators {
            if d.len() != numerator.nvars() || d.iter().all(Zero::is_zero) {
                return Err(Error::InvalidInput(format!("bad denominator {}", format_linear(d))));
            }
        }
        Ok(RationalForm { numerator, denominators })
    }

    pub fn holomorphic(numerator: TruncatedSeries<E>) -> Self {
        RationalForm { numerator, denominators: vec![] }
    }
}

/// Scales l so its first nonzero coefficient is 1; returns the normalized form and that coefficient.
fn normalize(l: &[Q]) -> (Vec<Q>, Q) {
    let lead = l.iter().find(|a| !a.is_zero()).cloned().expect("nonzero form");
    (l.iter().map(|a| a / &lead).collect(), lead)
}

/// Σ forms over the common denominator, then one exact division per denominator factor.
/// Returns the total and the number of divisions performed.
pub fn sum_rational_forms<E: Field>(forms: &[RationalForm<E>], tolerance: f64) -> Result<(TruncatedSeries<E>, usize)> {
    let first = forms.first().ok_or_else(|| Error::InvalidInput("no forms to sum".into()))?;
    let nvars = first.numerator.nvars();
    let mut normalized = vec![];
    let mut common: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    for f in forms {
        let mut counts: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
        let mut lead_prod = Q::one();
        for d in &f.denominators {
            let (n, lead) = normalize(d);
            lead_prod *= lead;
            *counts.entry(n).or_default() += 1;
        }
        for (k, &m) in &counts {
            let e = common.entry(k.clone()).or_default();
            *e = (*e).max(m);
        }
        normalized.push((f.numerator.scale_q(&lead_prod.recip()), counts));
    }
    let mut total: Option<TruncatedSeries<E>> = None;
    for (num, counts) in normalized {
        let mut s = num;
        for (k, &m) in &common {
            for _ in counts.get(k).copied().unwrap_or(0)..m {
                s = s.mul_linear(k);
            }
        }
        total = Some(match total {
            None => s,
            Some(t) => t.add(&s)?,
        });
    }
    let mut total = total.unwrap_or_else(|| TruncatedSeries::zero(nvars, 0));
    let mut divisions = 0;
    for (k, &m) in &common {
        for _ in 0..m {
            total = total.divide_exact(k, tolerance)?;
            divisions += 1;
        }
    }
    Ok((total, divisions))
}

impl<E: Field + Display> Display for RationalForm<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ds: Vec<String> = self.denominators.iter().map(|d| format!("({})", format_linear(d))).collect();
        write!(f, "[{} terms] / {}", self.numerator.len(), if ds.is_empty() { "1".into() } else { ds.join("") })
    }
}
