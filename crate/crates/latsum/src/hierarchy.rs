//! The operators D_g = (t_g − 2πi c_g)/t_g − (1/t_g)∂_{g⃗} and the identity
//! (∏_{g∈Λ∖Λ′} D_g) F(t, y; Λ) = F(t′, y; Λ′).

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genfun::{basis_coordinates, basis_summand_form, check_excluded, generating_function};
use crate::lattice::{Arrangement, Basis, GenericDirection};
use crate::rat::{GaussQ, Q};
use crate::scalar::{Field, Ring};
use crate::series::{sum_rational_forms, LinearForm, RationalForm, TruncatedSeries};

/// One factor D_g of the operator product.
#[derive(Clone, Debug)]
pub struct HierarchyStep {
    pub removed: usize,
}

impl HierarchyStep {
    /// (t_g − 2πi c_g) as a series in all #Λ variables.
    fn constant_part<R: Ring>(&self, ring: &R, arr: &Arrangement, order: u32) -> Result<TruncatedSeries<R::Elem>> {
        let mut coeffs = vec![Q::zero(); arr.len()];
        coeffs[self.removed] = Q::one();
        Ok(affine(ring, coeffs, &arr.functionals()[self.removed].constant)?.to_series(order, &ring.one()))
    }

    /// ∂_{g⃗} on the (B, w) summand: y enters only through e^{s_f {y+w}_{B,f}}, whose gradient
    /// along g⃗ is s_f ⟨g⃗, f⃗^B⟩.
    fn derivative_factor<R: Ring>(&self, ring: &R, arr: &Arrangement, b: &Basis, order: u32) -> Result<TruncatedSeries<R::Elem>> {
        let fs = arr.functionals();
        let a = basis_coordinates(b, &fs[self.removed].direction);
        let mut coeffs = vec![Q::zero(); arr.len()];
        let mut constant = GaussQ::real(Q::zero());
        for (&f, x) in b.members().iter().zip(&a) {
            coeffs[f] += x;
            constant = constant.add(&fs[f].constant.scale(x));
        }
        Ok(match affine(ring, coeffs, &constant) {
            Ok(l) => l.to_series(order, &ring.one()),
            Err(_) => TruncatedSeries::zero(arr.len(), order),
        })
    }

    /// K(t, g)·t_g = s_g − Σ_{f∈B} s_f ⟨g⃗, f⃗^B⟩ with s_h = t_h − 2πi c_h; zero when g ∈ B.
    fn eigenvalue_numerator<R: Ring>(&self, ring: &R, arr: &Arrangement, b: &Basis) -> Result<Option<LinearForm<R::Elem>>> {
        let fs = arr.functionals();
        let a = basis_coordinates(b, &fs[self.removed].direction);
        let mut coeffs = vec![Q::zero(); arr.len()];
        coeffs[self.removed] = Q::one();
        let mut constant = fs[self.removed].constant.clone();
        for (&f, x) in b.members().iter().zip(&a) {
            coeffs[f] -= x;
            constant = constant.sub(&fs[f].constant.scale(x));
        }
        if coeffs.iter().all(Zero::is_zero) && constant.is_zero() {
            return Ok(None);
        }
        Ok(Some(affine(ring, coeffs, &constant)?))
    }
}

/// coeffs·t − 2πi·constant.
fn affine<R: Ring>(ring: &R, coeffs: Vec<Q>, constant: &GaussQ) -> Result<LinearForm<R::Elem>> {
    LinearForm::new(coeffs, ring.two_pi_i(constant).neg())
}

fn unit(n: usize, g: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); n];
    e[g] = Q::one();
    e
}

/// D_g applied to one (B, w) summand given as a rational form whose numerator carries one spare
/// order. Returns the result by the definition (numerator divided exactly by t_g) after checking
/// it against multiplication by K(t, g) as a rational form.
pub fn apply_dg_summand<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    b: &Basis,
    step: &HierarchyStep,
    summand: &RationalForm<R::Elem>,
) -> Result<RationalForm<R::Elem>> {
    let n = arr.len();
    let num = &summand.numerator;
    let order = num.order();
    let tg = unit(n, step.removed);

    // (a) K(t, g)·F_{B,w} = (K·t_g)·N / (t_g·∏L)
    let by_eigenvalue = match step.eigenvalue_numerator(ring, arr, b)? {
        None => TruncatedSeries::zero(n, order),
        Some(l) => num.mul(&l.to_series(order, &ring.one()))?,
    };

    // (b) ((t_g − 2πi c_g) − ∂_{g⃗})·N, then the exact division by t_g
    let constant = num.mul(&step.constant_part(ring, arr, order)?)?;
    let derivative = num.mul(&step.derivative_factor(ring, arr, b, order)?)?;
    let quotient = constant.sub(&derivative)?.divide_exact(&tg, ring.division_tolerance())?;

    let lifted = quotient.mul_linear(&tg).truncate(order);
    let gap = by_eigenvalue.sub(&lifted)?;
    let tol = ring.division_tolerance() * by_eigenvalue.max_magnitude().max(1.0);
    if gap.max_magnitude() > tol {
        return Err(Error::Mismatch(format!("D_{} on a summand: the two routes differ by {:e}", step.removed, gap.max_magnitude())));
    }
    RationalForm::new(quotient, summand.denominators.clone())
}

#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub removed: Vec<usize>,
    pub order: u32,
    pub summands: usize,
    pub vanishing_summands: usize,
    pub max_discrepancy: f64,
    pub exact: bool,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        if self.exact {
            self.max_discrepancy == 0.0
        } else {
            self.max_discrepancy.is_finite() && self.max_discrepancy < 1e-20
        }
    }
}

/// (∏_{g∈removed} D_g)F(t, y; Λ) through total degree `order`, applied summand by summand in
/// the listed order, as a series in all #Λ variables.
pub fn reduce<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    removed: &[usize],
    y: &[Q],
    phi: &GenericDirection,
    order: u32,
) -> Result<(TruncatedSeries<R::Elem>, usize, usize)> {
    let steps: Vec<HierarchyStep> = removed.iter().map(|&g| HierarchyStep { removed: g }).collect();
    let spare = order + steps.len() as u32;
    let jobs: Vec<(&Basis, &Vec<i64>)> = arr.bases().iter().flat_map(|b| b.coset_reps().iter().map(move |w| (b, w))).collect();
    let forms: Vec<RationalForm<R::Elem>> = jobs
        .par_iter()
        .map(|(b, w)| {
            let mut form = basis_summand_form(ring, arr, b, std::slice::from_ref(*w), y, phi, spare)?;
            for s in &steps {
                form = apply_dg_summand(ring, arr, b, s, &form)?;
            }
            Ok(form)
        })
        .collect::<Result<_>>()?;
    let vanishing = forms.iter().filter(|f| f.numerator.is_zero()).count();
    let (series, _) = sum_rational_forms(&forms, ring.division_tolerance())?;
    Ok((series.truncate(order), jobs.len(), vanishing))
}

/// Compares (∏ D_g)F(t, y; Λ) with F(t′, y; Λ′) for Λ′ = Λ ∖ removed.
pub fn check_hierarchy<R: Ring>(ring: &R, arr: &Arrangement, removed: &[usize], y: &[Q], order: u32) -> Result<HierarchyReport> {
    let sub = arr.without(removed)?;
    check_excluded(arr, y, arr.indispensable())?;
    check_excluded(&sub, y, sub.indispensable())?;
    // bases of Λ′ are bases of Λ, so a φ generic for Λ serves both
    let phi = arr.choose_phi();
    let (lhs, summands, vanishing) = reduce(ring, arr, removed, y, &phi, order)?;
    let kept: Vec<usize> = (0..arr.len()).filter(|i| !removed.contains(i)).collect();
    let rhs = generating_function(ring, &sub, y, &phi, order)?.relabel(arr.len(), &kept);
    let gap = lhs.sub(&rhs)?;
    Ok(HierarchyReport {
        removed: removed.to_vec(),
        order,
        summands,
        vanishing_summands: vanishing,
        max_discrepancy: if gap.is_zero() { 0.0 } else { gap.max_magnitude().max(f64::MIN_POSITIVE) },
        exact: ring.is_exact(),
    })
}
