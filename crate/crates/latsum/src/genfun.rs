//! The generating function F(t, y; Λ) as a sum over bases, its coefficients C(k, y; Λ) and
//! the lattice sums S(k, y; Λ) = ∏_f (−(2πi)^{k_f}/k_f!)·C(k, y; Λ).
//!
//! Two coefficient routes are provided. The full route expands every basis summand in all
//! #Λ variables and resolves the singular ones by exact division. The targeted route extracts
//! a single coefficient per basis in r variables: the singular factors t_g/(t_g − ℓ_g(t_B)) are
//! expanded as Laurent series in the common region |t_0| ≫ |t_1| ≫ …, where the sum of the
//! expansions is the Taylor expansion of F.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::kernel_series;
use crate::lattice::{Arrangement, Basis, GenericDirection};
use crate::rat::{GaussQ, Q};
use crate::scalar::{cyclotomic_order, embed, ExactRing, ExactScalar, Field, NumericRing, NumericScalar, Ring};
use crate::series::{sum_rational_forms, LinearForm, RationalForm, TruncatedSeries};

/// Weights k_f, one per functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightVector {
    pub k: Vec<u32>,
}

impl WeightVector {
    pub fn new(k: Vec<u32>) -> Self {
        WeightVector { k }
    }

    pub fn total(&self) -> u32 {
        self.k.iter().sum()
    }

    /// Λ₀
    pub fn zero_set(&self) -> Vec<usize> {
        self.indices(|k| k == 0)
    }

    /// Λ₊
    pub fn positive_set(&self) -> Vec<usize> {
        self.indices(|k| k > 0)
    }

    /// Λ₁
    pub fn ones_set(&self) -> Vec<usize> {
        self.indices(|k| k == 1)
    }

    fn indices(&self, p: impl Fn(u32) -> bool) -> Vec<usize> {
        self.k.iter().enumerate().filter(|(_, &k)| p(k)).map(|(i, _)| i).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Numeric { precision: usize },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Numeric { .. } => f.write_str("numeric"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Full series when it stays small, targeted extraction otherwise.
    Auto,
    Targeted,
    FullSeries,
}

/// Full-series monomial budget under `Strategy::Auto`.
const AUTO_FULL_SERIES_TERMS: u64 = 2000;

#[derive(Clone, Debug)]
pub struct Options {
    pub mode: Mode,
    pub strategy: Strategy,
    pub phi: Option<GenericDirection>,
}

impl Default for Options {
    fn default() -> Self {
        Options { mode: Mode::Exact, strategy: Strategy::Auto, phi: None }
    }
}

/// An exact or numeric scalar result.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(ExactScalar),
    Numeric(NumericScalar),
}

impl Value {
    pub fn to_numeric(&self, precision: usize) -> NumericScalar {
        match self {
            Value::Exact(x) => embed(x, precision),
            Value::Numeric(x) => x.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Numeric(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(x) => x.is_zero(),
            Value::Numeric(x) => x.is_zero(),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => write!(f, "{x}"),
            Value::Numeric(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvaluationReport {
    pub s: Value,
    pub c: Value,
    pub mode: Mode,
    pub series_order: u32,
    pub basis_count: usize,
    pub degenerate_divisions: usize,
    pub cyclotomic_order: Option<u32>,
    pub strategy: Strategy,
    pub phi: GenericDirection,
}

fn check_shape(arr: &Arrangement, y: &[Q], k: Option<&WeightVector>) -> Result<()> {
    if y.len() != arr.rank() {
        return Err(Error::InvalidInput(format!("y has {} coordinates, rank is {}", y.len(), arr.rank())));
    }
    if let Some(k) = k {
        if k.k.len() != arr.len() {
            return Err(Error::InvalidInput(format!("{} weights for {} functionals", k.k.len(), arr.len())));
        }
    }
    Ok(())
}

/// ExcludedPoint if y lies on 𝔥_{Λ∖{f}} + Zʳ for some indispensable f in `subset`.
pub fn check_excluded(arr: &Arrangement, y: &[Q], subset: &[usize]) -> Result<()> {
    if let Some(f) = arr.excluded_witness(y, subset) {
        let fun = &arr.functionals()[f];
        let b = arr.bases().iter().find(|b| b.contains(f)).expect("indispensable functional lies in every basis");
        let d: Vec<String> = b.dual(b.position(f).unwrap()).iter().map(|x| x.to_string()).collect();
        return Err(Error::ExcludedPoint(format!(
            "y lies on the hyperplane ⟨v, ({})⟩ ∈ ⟨Zʳ, ({})⟩ spanned by the other directions, which is excluded for functional {f} = {fun}",
            d.join(", "),
            d.join(", ")
        )));
    }
    Ok(())
}

fn resolve_phi(arr: &Arrangement, phi: Option<&GenericDirection>) -> Result<GenericDirection> {
    match phi {
        None => Ok(arr.choose_phi()),
        Some(p) if p.phi.len() == arr.rank() && p.is_valid_for(arr.bases()) => Ok(p.clone()),
        Some(p) => Err(Error::InvalidInput(format!("φ = {:?} is not generic for this arrangement", p.phi))),
    }
}

/// a_{g,f} = ⟨g⃗, f⃗^B⟩ for each member f of B.
pub fn basis_coordinates(b: &Basis, g: &[i64]) -> Vec<Q> {
    (0..b.members().len()).map(|pos| b.coordinate(g, pos)).collect()
}

/// κ_g = c_g − Σ_{f∈B} c_f·⟨g⃗, f⃗^B⟩: the denominator t_g − ℓ_g(t_B) − 2πiκ_g is degenerate iff κ_g = 0.
pub fn residual_constant(arr: &Arrangement, b: &Basis, g: usize) -> GaussQ {
    let fs = arr.functionals();
    let a = basis_coordinates(b, &fs[g].direction);
    b.members().iter().zip(&a).fold(fs[g].constant.clone(), |acc, (&f, x)| acc.sub(&fs[f].constant.scale(x)))
}

/// ∏_{f∈B} F(t_f, {y+w}_{B,f}; c_f) in the r local variables of B (member order).
pub fn coset_kernel_product<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    b: &Basis,
    w: &[i64],
    y: &[Q],
    phi: &GenericDirection,
    order: u32,
) -> Result<TruncatedSeries<R::Elem>> {
    let r = b.members().len();
    let mut acc = TruncatedSeries::constant(r, order, ring.one());
    for (pos, &f) in b.members().iter().enumerate() {
        let fr = b.frac_part(y, w, pos, phi);
        let ks = kernel_series(ring, &arr.functionals()[f].constant, &fr, order)?;
        acc = acc.mul(&ks.embed_variable(r, pos))?;
    }
    Ok(acc)
}

/// Φ_B = (1/index)·Σ_w ∏_{f∈B} F(t_f, {y+w}_{B,f}; c_f) over the given coset representatives.
pub fn basis_kernel<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    b: &Basis,
    cosets: &[Vec<i64>],
    y: &[Q],
    phi: &GenericDirection,
    order: u32,
) -> Result<TruncatedSeries<R::Elem>> {
    let r = b.members().len();
    let mut acc = TruncatedSeries::zero(r, order);
    for w in cosets {
        acc = acc.add(&coset_kernel_product(ring, arr, b, w, y, phi, order)?)?;
    }
    Ok(acc.scale_q(&Q::new(1.into(), b.index().into())))
}

/// The B-summand of F as a rational form in all #Λ variables, valid through total degree
/// `order` once its degenerate denominators are cleared.
pub fn basis_summand_form<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    b: &Basis,
    cosets: &[Vec<i64>],
    y: &[Q],
    phi: &GenericDirection,
    order: u32,
) -> Result<RationalForm<R::Elem>> {
    let n = arr.len();
    let others: Vec<usize> = (0..n).filter(|g| !b.contains(*g)).collect();
    let degenerate: Vec<bool> = others.iter().map(|&g| residual_constant(arr, b, g).is_zero()).collect();
    let num_order = order + degenerate.iter().filter(|&&d| d).count() as u32;
    let mut num = basis_kernel(ring, arr, b, cosets, y, phi, num_order)?.relabel(n, b.members());
    let mut dens = vec![];
    for (&g, &deg) in others.iter().zip(&degenerate) {
        // L = t_g − Σ_f a_{gf} t_f − 2πiκ_g
        let a = basis_coordinates(b, &arr.functionals()[g].direction);
        let mut coeffs = vec![Q::zero(); n];
        coeffs[g] = Q::one();
        for (&f, x) in b.members().iter().zip(&a) {
            coeffs[f] = -x;
        }
        let mut tg = vec![Q::zero(); n];
        tg[g] = Q::one();
        if deg {
            num = num.mul_linear(&tg).truncate(num_order);
            dens.push(coeffs);
        } else {
            let kappa = residual_constant(arr, b, g);
            let l = LinearForm::new(coeffs, ring.two_pi_i(&kappa).neg())?;
            num = num.mul(&l.to_series(num_order, &ring.one()).invert_unit()?.mul_linear(&tg))?;
        }
    }
    RationalForm::new(num, dens)
}

/// F(t, y; Λ) through total degree `order` with the number of exact divisions performed.
pub fn generating_function_unchecked<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    y: &[Q],
    phi: &GenericDirection,
    order: u32,
) -> Result<(TruncatedSeries<R::Elem>, usize)> {
    let forms: Vec<RationalForm<R::Elem>> = arr
        .bases()
        .par_iter()
        .map(|b| basis_summand_form(ring, arr, b, b.coset_reps(), y, phi, order))
        .collect::<Result<_>>()?;
    sum_rational_forms(&forms, ring.division_tolerance())
}

/// F(t, y; Λ) through total degree `order`; y must avoid the excluded hyperplanes of Λ̃.
pub fn generating_function<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    y: &[Q],
    phi: &GenericDirection,
    order: u32,
) -> Result<TruncatedSeries<R::Elem>> {
    check_shape(arr, y, None)?;
    check_excluded(arr, y, arr.indispensable())?;
    Ok(generating_function_unchecked(ring, arr, y, phi, order)?.0)
}

/// A factor −ℓ^{−k} with ℓ = a·t_lead·(1 + Σ_j (a_j/a)·t_j/t_lead), in local positions.
struct LaurentFactor {
    lead: usize,
    k: u32,
    lead_coeff: Q,
    ratios: Vec<(usize, Q)>,
}

type LaurentTerms = BTreeMap<Vec<i64>, Q>;

fn potential(e: &[i64]) -> i64 {
    e.iter().enumerate().map(|(j, &x)| x * j as i64).sum()
}

fn laurent_mul(a: &LaurentTerms, b: &LaurentTerms, pmax: i64) -> LaurentTerms {
    let mut out = LaurentTerms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<i64> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if potential(&e) <= pmax {
                *out.entry(e).or_insert_with(Q::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// ∏ (1 + u_g)^{−k_g}, keeping monomials of potential ≤ pmax. Each u-monomial t_j/t_lead
/// (j after lead) raises the potential by at least one.
fn ratio_expansion(factors: &[LaurentFactor], r: usize, pmax: i64) -> LaurentTerms {
    let unit = LaurentTerms::from([(vec![0i64; r], Q::one())]);
    let mut acc = unit.clone();
    for f in factors {
        let u: LaurentTerms = f
            .ratios
            .iter()
            .map(|(j, c)| {
                let mut e = vec![0i64; r];
                e[*j] += 1;
                e[f.lead] -= 1;
                (e, c / &f.lead_coeff)
            })
            .collect();
        let mut series = LaurentTerms::new();
        let mut power = unit.clone();
        let mut binom = Q::one();
        for m in 0..=pmax {
            if power.is_empty() {
                break;
            }
            for (e, c) in &power {
                *series.entry(e.clone()).or_insert_with(Q::zero) += c * &binom;
            }
            // C(−k, m+1) = C(−k, m)·(−k − m)/(m + 1)
            binom = binom * Q::from_integer((-(f.k as i64) - m).into()) / Q::from_integer((m + 1).into());
            power = laurent_mul(&power, &u, pmax);
        }
        series.retain(|_, c| !c.is_zero());
        acc = laurent_mul(&acc, &series, pmax);
    }
    acc
}

/// [t^k] of the B-summand by Laurent extraction; returns the value and the number of
/// degenerate factors expanded.
fn targeted_basis_coefficient<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    b: &Basis,
    y: &[Q],
    phi: &GenericDirection,
    k: &WeightVector,
) -> Result<(R::Elem, usize)> {
    let r = b.members().len();
    let members = b.members();
    let mut target: Vec<u32> = members.iter().map(|&f| k.k[f]).collect();
    let mut unit_factors = vec![];
    let mut laurent = vec![];
    let mut sign = Q::one();
    for g in (0..arr.len()).filter(|g| !b.contains(*g)) {
        let kg = k.k[g];
        let a = basis_coordinates(b, &arr.functionals()[g].direction);
        let kappa = residual_constant(arr, b, g);
        if !kappa.is_zero() {
            // [t_g^k] t_g/(t_g − A) = −A^{−k} for k ≥ 1, 0 for k = 0
            if kg == 0 {
                return Ok((ring.zero(), 0));
            }
            unit_factors.push((LinearForm::new(a, ring.two_pi_i(&kappa))?, kg));
            continue;
        }
        let lead = a.iter().position(|x| !x.is_zero()).expect("nonzero direction");
        if g < members[lead] {
            // t_g dominates ℓ_g: t_g/(t_g − ℓ) = Σ (ℓ/t_g)^j
            if kg != 0 {
                return Ok((ring.zero(), 0));
            }
            continue;
        }
        if kg == 0 {
            return Ok((ring.zero(), 0));
        }
        sign = -sign;
        target[lead] += kg;
        let ratios = a.iter().enumerate().skip(lead + 1).filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
        laurent.push(LaurentFactor { lead, k: kg, lead_coeff: a[lead].clone(), ratios });
    }
    let d: u32 = target.iter().sum();
    let mut h = basis_kernel(ring, arr, b, b.coset_reps(), y, phi, d)?;
    for (l, kg) in &unit_factors {
        let inv = l.to_series(d, &ring.one()).invert_unit()?;
        h = h.mul(&inv.pow(*kg, &ring.one()).neg())?;
    }
    let target_i: Vec<i64> = target.iter().map(|&x| x as i64).collect();
    let ratios = ratio_expansion(&laurent, r, potential(&target_i));
    let mut scale = sign;
    for f in &laurent {
        scale /= f.lead_coeff.pow(f.k as i32);
    }
    let mut acc = ring.zero();
    for (e, c) in h.homogeneous(d) {
        let rest: Vec<i64> = target_i.iter().zip(e).map(|(t, x)| t - *x as i64).collect();
        if let Some(q) = ratios.get(&rest) {
            acc = acc.add(&c.scale(q));
        }
    }
    Ok((acc.scale(&scale), laurent.len()))
}

fn factorial(k: u32) -> Q {
    (1..=k).fold(Q::one(), |acc, i| acc * Q::from_integer(i.into()))
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// The route `Strategy::Auto` resolves to for this shape.
pub fn resolve_strategy(arr: &Arrangement, k: &WeightVector, strategy: Strategy) -> Strategy {
    match strategy {
        Strategy::Auto => {
            let n = arr.len() as u64;
            let terms = binomial_u64(k.total() as u64 + n, n);
            if terms <= AUTO_FULL_SERIES_TERMS {
                Strategy::FullSeries
            } else {
                Strategy::Targeted
            }
        }
        s => s,
    }
}

/// C(k, y; Λ) = k!·[t^k]F, without exclusion checks. Returns (C, divisions, route used).
pub fn coefficient_unchecked<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    y: &[Q],
    phi: &GenericDirection,
    k: &WeightVector,
    strategy: Strategy,
) -> Result<(R::Elem, usize, Strategy)> {
    let kfact = k.k.iter().fold(Q::one(), |acc, &x| acc * factorial(x));
    match resolve_strategy(arr, k, strategy) {
        Strategy::FullSeries => {
            let (f, divisions) = generating_function_unchecked(ring, arr, y, phi, k.total())?;
            let c = f.coefficient(&k.k).cloned().unwrap_or_else(|| ring.zero());
            Ok((c.scale(&kfact), divisions, Strategy::FullSeries))
        }
        _ => {
            let parts: Vec<(R::Elem, usize)> =
                arr.bases().par_iter().map(|b| targeted_basis_coefficient(ring, arr, b, y, phi, k)).collect::<Result<_>>()?;
            let mut acc = ring.zero();
            let mut divisions = 0;
            for (c, d) in parts {
                acc = acc.add(&c);
                divisions += d;
            }
            Ok((acc.scale(&kfact), divisions, Strategy::Targeted))
        }
    }
}

/// C(k, y; Λ); y must avoid the excluded hyperplanes of Λ̃.
pub fn coefficient<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    y: &[Q],
    phi: &GenericDirection,
    k: &WeightVector,
    strategy: Strategy,
) -> Result<R::Elem> {
    check_shape(arr, y, Some(k))?;
    check_excluded(arr, y, arr.indispensable())?;
    Ok(coefficient_unchecked(ring, arr, y, phi, k, strategy)?.0)
}

/// ∏_f (−(2πi)^{k_f}/k_f!), the factor turning C into S.
pub fn s_prefactor<R: Ring>(ring: &R, k: &WeightVector) -> R::Elem {
    let two_pi_i = ring.two_pi_i(&GaussQ::real(Q::one()));
    let mut acc = ring.one();
    for &kf in &k.k {
        let mut p = ring.one();
        for _ in 0..kf {
            p = p.mul(&two_pi_i);
        }
        acc = acc.mul(&p.scale(&factorial(kf).recip()).neg());
    }
    acc
}

fn evaluate_in<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    y: &[Q],
    phi: &GenericDirection,
    k: &WeightVector,
    strategy: Strategy,
) -> Result<(R::Elem, R::Elem, usize, Strategy)> {
    let (c, divisions, used) = coefficient_unchecked(ring, arr, y, phi, k, strategy)?;
    Ok((s_prefactor(ring, k).mul(&c), c, divisions, used))
}

/// S(k, y; Λ). y must avoid the excluded hyperplanes of the indispensable functionals of weight 1.
pub fn lattice_sum_value(arr: &Arrangement, y: &[Q], k: &WeightVector, opts: &Options) -> Result<EvaluationReport> {
    check_shape(arr, y, Some(k))?;
    let critical: Vec<usize> = k.ones_set();
    check_excluded(arr, y, &critical)?;
    let phi = resolve_phi(arr, opts.phi.as_ref())?;
    let base = |s, c, divisions, strategy, n| EvaluationReport {
        s,
        c,
        mode: opts.mode,
        series_order: k.total(),
        basis_count: arr.bases().len(),
        degenerate_divisions: divisions,
        cyclotomic_order: n,
        strategy,
        phi: phi.clone(),
    };
    match opts.mode {
        Mode::Exact => {
            let n = cyclotomic_order(arr, arr.bases(), &phi, y)?;
            let ring = ExactRing::new(n);
            let (s, c, d, used) = evaluate_in(&ring, arr, y, &phi, k, opts.strategy)?;
            Ok(base(Value::Exact(s), Value::Exact(c), d, used, Some(n)))
        }
        Mode::Numeric { precision } => {
            let ring = NumericRing::new(precision);
            let (s, c, d, used) = evaluate_in(&ring, arr, y, &phi, k, opts.strategy)?;
            Ok(base(Value::Numeric(s), Value::Numeric(c), d, used, None))
        }
    }
}

/// Documented symmetric families relating S to a zeta value over positive integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaFamily {
    /// Rank 1, symmetric under v ↦ −v; S = 2ζ.
    A1,
    /// Rank 2, symmetric under the order-six group generated by (m, n) ↦ (n, m) and
    /// (m, n) ↦ (−m, m + n); S = 6ζ₂.
    A2,
}

impl ZetaFamily {
    pub fn factor(self) -> u32 {
        match self {
            ZetaFamily::A1 => 2,
            ZetaFamily::A2 => 6,
        }
    }

    /// Integer matrices M acting as v ↦ M·v that generate the symmetry group.
    fn generators(self) -> Vec<Vec<Vec<i64>>> {
        match self {
            ZetaFamily::A1 => vec![vec![vec![-1]]],
            ZetaFamily::A2 => vec![vec![vec![0, 1], vec![1, 0]], vec![vec![-1, 0], vec![1, 1]]],
        }
    }

    fn rank(self) -> usize {
        match self {
            ZetaFamily::A1 => 1,
            ZetaFamily::A2 => 2,
        }
    }
}

/// Checks that v ↦ M·v permutes the weighted functionals up to sign, with sign changes
/// only on even weights.
fn invariant_under(arr: &Arrangement, k: &WeightVector, m: &[Vec<i64>]) -> bool {
    let fs = arr.functionals();
    let mut used = vec![false; fs.len()];
    for (i, f) in fs.iter().enumerate() {
        // (f∘M)(v) = ⟨Mᵀ f⃗, v⟩ + c_f
        let dir: Vec<i64> = (0..m.len()).map(|j| (0..m.len()).map(|i2| f.direction[i2] * m[i2][j]).sum()).collect();
        let hit = fs.iter().enumerate().position(|(j, g)| {
            if used[j] || k.k[j] != k.k[i] {
                return false;
            }
            let same = g.direction == dir && g.constant == f.constant;
            let flipped = g.direction.iter().zip(&dir).all(|(a, b)| *a == -b) && g.constant == f.constant.neg() && k.k[i].is_multiple_of(2);
            same || flipped
        });
        match hit {
            Some(j) => used[j] = true,
            None => return false,
        }
    }
    true
}

/// S divided by the symmetry factor of a documented family at y = 0.
pub fn zeta_from_s(arr: &Arrangement, y: &[Q], k: &WeightVector, family: ZetaFamily, s: &Value) -> Result<Value> {
    if arr.rank() != family.rank() || y.iter().any(|c| !c.is_zero()) {
        return Err(Error::UnsupportedFamily(format!("{family:?} needs rank {} and y = 0", family.rank())));
    }
    if k.k.contains(&0) {
        return Err(Error::UnsupportedFamily("zeta relation needs positive weights".into()));
    }
    for m in family.generators() {
        if !invariant_under(arr, k, &m) {
            return Err(Error::UnsupportedFamily(format!("arrangement is not invariant under {m:?}")));
        }
    }
    let f = Q::new(1.into(), family.factor().into());
    Ok(match s {
        Value::Exact(x) => Value::Exact(x.scale(&f)),
        Value::Numeric(x) => Value::Numeric(x.scale(&f)),
    })
}

/// Whether every coefficient of the series is a real rational times a power of π (no roots of unity left).
pub fn is_pi_polynomial(x: &ExactScalar) -> bool {
    x.has_rational_coefficients() && x.pi_denominator_power().is_some()
}
