//! Brute-force truncated lattice sums Z(N; k, y; Λ) over boxes, used as numeric ground truth.

use astro_float::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::genfun::WeightVector;
use crate::lattice::{invert, solve_integer_system, Arrangement};
use crate::rat::{lcm_u64, Q};
use crate::scalar::{bigfloat_from_bigint, NumericScalar};

const RM: RoundingMode = RoundingMode::ToEven;

/// Region of summation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowShape {
    /// |v_j| ≤ N for every coordinate.
    Box,
    /// |Re f(v)| ≤ N for the r functionals of a basis, given by their positions.
    Parallelotope(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationWindow {
    pub n: u64,
    pub shape: WindowShape,
}

impl TruncationWindow {
    pub fn cube(n: u64) -> Self {
        TruncationWindow { n, shape: WindowShape::Box }
    }
}

/// A functional scaled to integers: d·f(v) = d·⟨f⃗, v⟩ + re + i·im.
#[derive(Clone, Debug)]
struct ScaledFunctional {
    direction: Vec<i64>,
    scale: i128,
    re: i128,
    im: i128,
}

impl ScaledFunctional {
    fn value(&self, v: &[i64]) -> (i128, i128) {
        let dot: i128 = self.direction.iter().zip(v).map(|(a, b)| *a as i128 * *b as i128).sum();
        (self.scale * dot + self.re, self.im)
    }
}

fn scaled(arr: &Arrangement, f: usize) -> Result<ScaledFunctional> {
    let fun = &arr.functionals()[f];
    let d = lcm_u64(
        fun.constant.re.denom().to_u64().unwrap_or(0),
        fun.constant.im.denom().to_u64().unwrap_or(0),
    );
    let to_i = |x: &Q| (x * Q::from_integer(d.into())).to_integer().to_i128();
    match (d, to_i(&fun.constant.re), to_i(&fun.constant.im)) {
        (d, Some(re), Some(im)) if d > 0 => Ok(ScaledFunctional { direction: fun.direction.clone(), scale: d as i128, re, im }),
        _ => Err(Error::InvalidInput(format!("constant of functional {f} is too large for the oracle"))),
    }
}

/// How the points of the affine sublattice {f(v) = 0, f ∈ Λ₀} are enumerated.
#[derive(Clone, Debug)]
enum Plan {
    Empty,
    /// v = base + Σ_i z_i·kernel_i, with z recovered from the pivot coordinates of v.
    Lattice { base: Vec<i64>, kernel: Vec<Vec<i64>>, pivots: Vec<usize>, pivot_inverse: Vec<Vec<Q>> },
}

fn plan(arr: &Arrangement, zero_set: &[usize]) -> Plan {
    let r = arr.rank();
    let mut rows = vec![];
    let mut rhs = vec![];
    for &f in zero_set {
        let c = &arr.functionals()[f].constant;
        if !c.is_integer() {
            return Plan::Empty;
        }
        let Some(c) = c.re.to_integer().to_i64() else {
            return Plan::Empty;
        };
        rows.push(arr.functionals()[f].direction.clone());
        rhs.push(-c);
    }
    let Some((base, kernel)) = solve_integer_system(&rows, &rhs, r) else {
        return Plan::Empty;
    };
    let d = kernel.len();
    // Greedy choice of d coordinates on which the kernel vectors are independent.
    let mut pivots = vec![];
    for j in 0..r {
        let mut trial = pivots.clone();
        trial.push(j);
        let m: Vec<Vec<Q>> = trial.iter().map(|&p| kernel.iter().map(|k| Q::from_integer(k[p].into())).collect()).collect();
        if crate::lattice::rank_q(m) == trial.len() {
            pivots = trial;
        }
        if pivots.len() == d {
            break;
        }
    }
    let sq: Vec<Vec<Q>> = pivots.iter().map(|&p| kernel.iter().map(|k| Q::from_integer(k[p].into())).collect()).collect();
    let pivot_inverse = if d == 0 { vec![] } else { invert(&sq).expect("pivot block is invertible") };
    Plan::Lattice { base, kernel, pivots, pivot_inverse }
}

/// Box containing the window, per coordinate.
fn bounding_box(arr: &Arrangement, window: &TruncationWindow) -> Result<Vec<(i64, i64)>> {
    let r = arr.rank();
    let n = window.n as i64;
    match &window.shape {
        WindowShape::Box => Ok(vec![(-n, n); r]),
        WindowShape::Parallelotope(members) => {
            if members.len() != r {
                return Err(Error::InvalidInput(format!("parallelotope needs {r} functionals")));
            }
            let m: Vec<Vec<Q>> = members
                .iter()
                .map(|&f| arr.functionals()[f].direction.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect();
            let inv = invert(&m).ok_or_else(|| Error::InvalidInput("parallelotope functionals are not a basis".into()))?;
            let radii: Vec<Q> = members.iter().map(|&f| Q::from_integer(n.into()) + arr.functionals()[f].constant.re.abs()).collect();
            Ok((0..r)
                .map(|j| {
                    let b: Q = (0..r).map(|i| inv[j][i].abs() * &radii[i]).sum();
                    let b = b.ceil().to_integer().to_i64().unwrap_or(i64::MAX / 4);
                    (-b, b)
                })
                .collect())
        }
    }
}

fn in_window(arr: &Arrangement, window: &TruncationWindow, v: &[i64]) -> bool {
    let n = Q::from_integer(window.n.into());
    match &window.shape {
        WindowShape::Box => v.iter().all(|x| x.unsigned_abs() <= window.n),
        WindowShape::Parallelotope(members) => members.iter().all(|&f| {
            let fun = &arr.functionals()[f];
            let dot: i64 = fun.direction.iter().zip(v).map(|(a, b)| a * b).sum();
            (Q::from_integer(dot.into()) + &fun.constant.re).abs() <= n
        }),
    }
}

/// Enumerates the admissible points with the first pivot coordinate fixed to `first`
/// (all points when there are no pivots), in lexicographic order of the pivot coordinates.
struct Slice<'a> {
    arr: &'a Arrangement,
    window: &'a TruncationWindow,
    positive: &'a [ScaledFunctional],
    plan: &'a Plan,
    ranges: Vec<(i64, i64)>,
}

impl Slice<'_> {
    fn for_each(&self, first: Option<i64>, mut visit: impl FnMut(&[i64])) {
        let Plan::Lattice { base, kernel, pivots, pivot_inverse } = self.plan else {
            return;
        };
        let d = pivots.len();
        let r = base.len();
        let identity = d == r && kernel.iter().enumerate().all(|(i, k)| k.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)));
        let mut u: Vec<i64> = pivots.iter().map(|&p| self.ranges[p].0).collect();
        if let Some(f) = first {
            u[0] = f;
        }
        let mut v = vec![0i64; r];
        loop {
            let point = if identity {
                for (j, p) in pivots.iter().enumerate() {
                    v[*p] = u[j] + base[*p];
                }
                true
            } else {
                self.solve(base, kernel, pivots, pivot_inverse, &u, &mut v)
            };
            if point && in_window(self.arr, self.window, &v) && self.positive.iter().all(|f| f.value(&v) != (0, 0)) {
                visit(&v);
            }
            // advance the odometer; the first digit is fixed when slicing
            let lowest = usize::from(first.is_some());
            let mut j = d;
            loop {
                if j == lowest {
                    return;
                }
                j -= 1;
                if u[j] < self.ranges[pivots[j]].1 {
                    u[j] += 1;
                    break;
                }
                u[j] = self.ranges[pivots[j]].0;
            }
            if d == 0 {
                return;
            }
        }
    }

    fn solve(&self, base: &[i64], kernel: &[Vec<i64>], pivots: &[usize], inv: &[Vec<Q>], u: &[i64], v: &mut [i64]) -> bool {
        let d = pivots.len();
        let mut z = vec![0i64; d];
        for i in 0..d {
            let s: Q = (0..d).map(|j| &inv[i][j] * Q::from_integer((u[j] - base[pivots[j]]).into())).sum();
            if !s.is_integer() {
                return false;
            }
            z[i] = s.to_integer().to_i64().unwrap_or(i64::MAX);
        }
        for (c, slot) in v.iter_mut().enumerate() {
            *slot = base[c] + kernel.iter().zip(&z).map(|(k, zi)| k[c] * zi).sum::<i64>();
        }
        true
    }

    fn first_range(&self) -> Option<(i64, i64)> {
        match self.plan {
            Plan::Lattice { pivots, .. } if !pivots.is_empty() => Some(self.ranges[pivots[0]]),
            _ => None,
        }
    }
}

struct Prepared {
    positive: Vec<ScaledFunctional>,
    weights: Vec<u32>,
    plan: Plan,
    ranges: Vec<(i64, i64)>,
    sign_negative: bool,
}

fn prepare(arr: &Arrangement, k: &WeightVector, window: &TruncationWindow) -> Result<Prepared> {
    if k.k.len() != arr.len() {
        return Err(Error::InvalidInput(format!("{} weights for {} functionals", k.k.len(), arr.len())));
    }
    let zero = k.zero_set();
    let pos = k.positive_set();
    let positive = pos.iter().map(|&f| scaled(arr, f)).collect::<Result<Vec<_>>>()?;
    let mut ranges = bounding_box(arr, window)?;
    let plan = plan(arr, &zero);
    if let Plan::Lattice { base, pivots, .. } = &plan {
        // enumerate u = v − base on pivot coordinates in the box case
        if pivots.len() == arr.rank() {
            for &p in pivots {
                ranges[p] = (ranges[p].0 - base[p], ranges[p].1 - base[p]);
            }
        }
    }
    Ok(Prepared { positive, weights: pos.iter().map(|&f| k.k[f]).collect(), plan, ranges, sign_negative: zero.len() % 2 == 1 })
}

/// Lattice points of the window with f(v) = 0 on Λ₀ and f(v) ≠ 0 on Λ₊.
pub fn constrained_points(arr: &Arrangement, k: &WeightVector, window: &TruncationWindow) -> Result<Vec<Vec<i64>>> {
    let p = prepare(arr, k, window)?;
    let slice = Slice { arr, window, positive: &p.positive, plan: &p.plan, ranges: p.ranges.clone() };
    let mut out = vec![];
    slice.for_each(None, |v| out.push(v.to_vec()));
    Ok(out)
}

/// Neumaier-compensated running sum of BigFloats.
#[derive(Clone, Debug)]
struct Compensated {
    sum: BigFloat,
    carry: BigFloat,
    w: usize,
}

impl Compensated {
    fn new(w: usize) -> Self {
        Compensated { sum: BigFloat::from_u64(0, w), carry: BigFloat::from_u64(0, w), w }
    }

    fn add(&mut self, x: &BigFloat) {
        let t = self.sum.add(x, self.w, RM);
        let big_sum = self.sum.abs_cmp(x).is_some_and(|c| c >= 0);
        let lost = if big_sum { self.sum.sub(&t, self.w, RM).add(x, self.w, RM) } else { x.sub(&t, self.w, RM).add(&self.sum, self.w, RM) };
        self.carry = self.carry.add(&lost, self.w, RM);
        self.sum = t;
    }

    fn absorb(&mut self, o: &Compensated) {
        self.add(&o.sum);
        self.add(&o.carry);
    }

    fn value(&self) -> BigFloat {
        self.sum.add(&self.carry, self.w, RM)
    }
}

/// Phases e^{2πi⟨y,v⟩}, tabulated by the residue of D·⟨y,v⟩ mod D.
struct PhaseTable {
    den: i128,
    scaled_y: Vec<i128>,
    table: Vec<NumericScalar>,
    precision: usize,
}

const PHASE_TABLE_LIMIT: i128 = 1 << 14;

impl PhaseTable {
    fn new(y: &[Q], precision: usize) -> Self {
        let den = y.iter().fold(1u64, |acc, x| lcm_u64(acc, x.denom().to_u64().unwrap_or(1))) as i128;
        let scaled_y = y.iter().map(|x| (x * Q::from_integer(den.into())).to_integer().to_i128().unwrap_or(0)).collect();
        let table = if den <= PHASE_TABLE_LIMIT {
            (0..den).map(|j| NumericScalar::exp_two_pi_i(&Q::new(j.into(), den.into()), precision)).collect()
        } else {
            vec![]
        };
        PhaseTable { den, scaled_y, table, precision }
    }

    fn at(&self, v: &[i64]) -> Option<NumericScalar> {
        let j = self.scaled_y.iter().zip(v).map(|(a, b)| a * *b as i128).sum::<i128>().rem_euclid(self.den);
        if j == 0 {
            return None;
        }
        Some(match self.table.get(j as usize) {
            Some(z) => z.clone(),
            None => NumericScalar::exp_two_pi_i(&Q::new(j.into(), self.den.into()), self.precision),
        })
    }
}

/// ∏ (x_f + i·y_f)^{k_f} exactly.
fn gaussian_product(values: &[(i128, i128)], weights: &[u32]) -> (BigInt, BigInt) {
    let mut small = Some((1i128, 0i128));
    for (&(a, b), &k) in values.iter().zip(weights) {
        for _ in 0..k {
            small = small.and_then(|(re, im)| {
                let r = re.checked_mul(a)?.checked_sub(im.checked_mul(b)?)?;
                let i = re.checked_mul(b)?.checked_add(im.checked_mul(a)?)?;
                Some((r, i))
            });
        }
    }
    if let Some((re, im)) = small {
        return (re.into(), im.into());
    }
    let (mut re, mut im) = (BigInt::one(), BigInt::zero());
    for (&(a, b), &k) in values.iter().zip(weights) {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        for _ in 0..k {
            let r = &re * &a - &im * &b;
            im = &re * &b + &im * &a;
            re = r;
        }
    }
    (re, im)
}

fn big_to_float(x: &BigInt, w: usize) -> BigFloat {
    match x.to_i128() {
        Some(v) => BigFloat::from_i128(v, w),
        None => bigfloat_from_bigint(x, w),
    }
}

/// Z(N; k, y; Λ) = (−1)^{#Λ₀} Σ_v e^{2πi⟨y,v⟩} ∏_{f∈Λ₊} f(v)^{−k_f} over the constrained points
/// of the window, summed in lexicographic chunks with compensated accumulation.
pub fn truncated_sum(arr: &Arrangement, k: &WeightVector, y: &[Q], window: &TruncationWindow, precision: usize) -> Result<NumericScalar> {
    if y.len() != arr.rank() {
        return Err(Error::InvalidInput(format!("y has {} coordinates, rank is {}", y.len(), arr.rank())));
    }
    let p = prepare(arr, k, window)?;
    let w = crate::scalar::working_precision(precision);
    let slice = Slice { arr, window, positive: &p.positive, plan: &p.plan, ranges: p.ranges.clone() };
    let phases = PhaseTable::new(y, precision);
    // ∏ d_f^{k_f} is pulled out of the sum
    let scale: Q = p.positive.iter().zip(&p.weights).fold(Q::one(), |acc, (f, &kf)| acc * Q::from_integer(f.scale.into()).pow(kf as i32));

    let chunk = |first: Option<i64>| -> (Compensated, Compensated) {
        let (mut re, mut im) = (Compensated::new(w), Compensated::new(w));
        let mut values = vec![(0i128, 0i128); p.positive.len()];
        slice.for_each(first, |v| {
            for (slot, f) in values.iter_mut().zip(&p.positive) {
                *slot = f.value(v);
            }
            let (gr, gi) = gaussian_product(&values, &p.weights);
            // 1/G = conj(G)/|G|²
            let (tr, ti) = if gi.is_zero() {
                (BigFloat::from_u64(1, w).div(&big_to_float(&gr, w), w, RM), BigFloat::from_u64(0, w))
            } else {
                let norm = big_to_float(&(&gr * &gr + &gi * &gi), w);
                (big_to_float(&gr, w).div(&norm, w, RM), big_to_float(&-gi, w).div(&norm, w, RM))
            };
            match phases.at(v) {
                None => {
                    re.add(&tr);
                    im.add(&ti);
                }
                Some(z) => {
                    re.add(&z.re.mul(&tr, w, RM).sub(&z.im.mul(&ti, w, RM), w, RM));
                    im.add(&z.re.mul(&ti, w, RM).add(&z.im.mul(&tr, w, RM), w, RM));
                }
            }
        });
        (re, im)
    };

    let parts: Vec<(Compensated, Compensated)> = match slice.first_range() {
        Some((lo, hi)) => (lo..=hi).into_par_iter().map(|f| chunk(Some(f))).collect(),
        None => vec![chunk(None)],
    };
    let (mut re, mut im) = (Compensated::new(w), Compensated::new(w));
    for (a, b) in &parts {
        re.absorb(a);
        im.absorb(b);
    }
    let mut z = NumericScalar::new(re.value(), im.value(), precision).scale(&scale);
    if p.sign_negative {
        z = z.neg();
    }
    Ok(z)
}

/// One row of a convergence scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub n: u64,
    pub value: NumericScalar,
    /// |Z(N) − Z(2N)|.
    pub step: f64,
    /// |Z(N) − target| when a target is supplied.
    pub error: Option<f64>,
}

/// Z(N) and |Z(N) − Z(2N)| for each N of an increasing list.
pub fn convergence_scan(
    arr: &Arrangement,
    k: &WeightVector,
    y: &[Q],
    ns: &[u64],
    target: Option<&NumericScalar>,
    precision: usize,
) -> Result<Vec<ScanRow>> {
    if ns.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidInput("truncation sizes must increase".into()));
    }
    let mut cache: std::collections::BTreeMap<u64, NumericScalar> = Default::default();
    let mut z = |n: u64| -> Result<NumericScalar> {
        if let Some(v) = cache.get(&n) {
            return Ok(v.clone());
        }
        let v = truncated_sum(arr, k, y, &TruncationWindow::cube(n), precision)?;
        cache.insert(n, v.clone());
        Ok(v)
    };
    let mut rows = vec![];
    for &n in ns {
        let value = z(n)?;
        let step = value.sub(&z(2 * n)?).abs();
        let error = target.map(|t| value.sub(t).abs());
        rows.push(ScanRow { n, value, step, error });
    }
    Ok(rows)
}

/// Z(N) over the parallelotope |Re f(v)| ≤ N, f in `members`.
pub fn truncated_sum_parallelotope(
    arr: &Arrangement,
    k: &WeightVector,
    y: &[Q],
    members: &[usize],
    n: u64,
    precision: usize,
) -> Result<NumericScalar> {
    truncated_sum(arr, k, y, &TruncationWindow { n, shape: WindowShape::Parallelotope(members.to_vec()) }, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Functional;
    use crate::rat::{q, qi};

    fn lam(alpha: i64) -> Arrangement {
        Arrangement::new(1, vec![Functional::real(&[-1], qi(alpha)), Functional::real(&[1], qi(0)), Functional::real(&[1], qi(alpha))]).unwrap()
    }

    #[test]
    fn nonintegral_zero_constraint_is_empty() {
        let arr = Arrangement::new(2, vec![Functional::real(&[1, 0], q(1, 2)), Functional::real(&[0, 1], qi(0))]).unwrap();
        let k = WeightVector::new(vec![0, 2]);
        assert!(constrained_points(&arr, &k, &TruncationWindow::cube(3)).unwrap().is_empty());
        let z = truncated_sum(&arr, &k, &[qi(0), qi(0)], &TruncationWindow::cube(3), 64).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn zero_constraint_slices_the_box() {
        let arr = Arrangement::new(2, vec![Functional::real(&[1, 0], qi(0)), Functional::real(&[0, 1], q(1, 2))]).unwrap();
        let pts = constrained_points(&arr, &WeightVector::new(vec![0, 1]), &TruncationWindow::cube(2)).unwrap();
        let want: Vec<Vec<i64>> = (-2..=2).map(|n| vec![0, n]).collect();
        assert_eq!(pts, want);
        let skew = Arrangement::new(2, vec![Functional::real(&[2, 1], qi(-1)), Functional::real(&[1, 1], q(1, 3))]).unwrap();
        let pts = constrained_points(&skew, &WeightVector::new(vec![0, 3]), &TruncationWindow::cube(4)).unwrap();
        for v in &pts {
            assert_eq!(2 * v[0] + v[1], 1);
            assert!(v.iter().all(|x| x.abs() <= 4));
        }
        // brute force count
        let count = (-4i64..=4).flat_map(|a| (-4i64..=4).map(move |b| (a, b))).filter(|(a, b)| 2 * a + b == 1).count();
        assert_eq!(pts.len(), count);
    }

    #[test]
    fn positive_set_exclusions() {
        let pts = constrained_points(&lam(1), &WeightVector::new(vec![2, 2, 2]), &TruncationWindow::cube(3)).unwrap();
        assert_eq!(pts, vec![vec![-3], vec![-2], vec![2], vec![3]]);
    }

    #[test]
    fn hurwitz_pair_converges() {
        let z = truncated_sum(&lam(1), &WeightVector::new(vec![2, 2, 2]), &[qi(0)], &TruncationWindow::cube(2000), 128).unwrap();
        let target = std::f64::consts::PI.powi(2) / 2.0 - 39.0 / 8.0;
        assert!((z.re_f64() - target).abs() < 1e-3);
        assert!(z.im_f64().abs() < 1e-30);
    }

    #[test]
    fn weight_one_converges_to_kernel_value() {
        let arr = Arrangement::new(1, vec![Functional::real(&[1], qi(0))]).unwrap();
        let z = truncated_sum(&arr, &WeightVector::new(vec![1]), &[q(1, 4)], &TruncationWindow::cube(10_000), 128).unwrap();
        // −2πi(1/4 − 1/2) = πi/2
        assert!(z.re_f64().abs() < 1e-2);
        assert!((z.im_f64() - std::f64::consts::PI / 2.0).abs() < 1e-2);
    }

    #[test]
    fn empty_window_sum_is_exact_zero_and_scan_is_flat() {
        let arr = Arrangement::new(1, vec![Functional::real(&[1], qi(0)), Functional::real(&[1], qi(1))]).unwrap();
        // v = 0 is forced by the first functional and killed by nothing: a single point
        let k = WeightVector::new(vec![0, 2]);
        let rows = convergence_scan(&arr, &k, &[qi(0)], &[1, 2, 4], None, 64).unwrap();
        for row in rows {
            assert_eq!(row.step, 0.0);
            assert!((row.value.re_f64() + 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn redundant_zero_weight_flips_sign() {
        let one = Arrangement::new(2, vec![Functional::real(&[1, 0], qi(0)), Functional::real(&[0, 1], q(1, 3))]).unwrap();
        let two = Arrangement::new(
            2,
            vec![Functional::real(&[1, 0], qi(0)), Functional::real(&[0, 1], q(1, 3)), Functional::real(&[2, 0], qi(0))],
        )
        .unwrap();
        let y = [q(1, 5), q(1, 7)];
        let a = truncated_sum(&one, &WeightVector::new(vec![0, 2]), &y, &TruncationWindow::cube(50), 128).unwrap();
        let b = truncated_sum(&two, &WeightVector::new(vec![0, 2, 0]), &y, &TruncationWindow::cube(50), 128).unwrap();
        assert!(a.add(&b).abs() < 1e-30);
        assert!(a.abs() > 0.1);
    }

    #[test]
    fn symmetric_arrangement_sums_are_real() {
        let z = truncated_sum(&lam(2), &WeightVector::new(vec![2, 2, 2]), &[qi(0)], &TruncationWindow::cube(500), 128).unwrap();
        assert!(z.im_f64().abs() < 2f64.powi(-118));
    }

    #[test]
    fn complex_constants_use_gaussian_products() {
        let c = crate::rat::GaussQ { re: q(1, 2), im: q(1, 3) };
        let arr = Arrangement::new(1, vec![Functional::new(vec![1], c)]).unwrap();
        let z = truncated_sum(&arr, &WeightVector::new(vec![2]), &[qi(0)], &TruncationWindow::cube(1), 64).unwrap();
        let want: num_complex_like::C = (-1..=1).map(|m| num_complex_like::C::new(m as f64 + 0.5, 1.0 / 3.0).powi(-2)).fold(num_complex_like::C::new(0.0, 0.0), |a, b| a.add(b));
        assert!((z.re_f64() - want.re).abs() < 1e-12 && (z.im_f64() - want.im).abs() < 1e-12, "{} {} vs {} {}", z.re_f64(), z.im_f64(), want.re, want.im);
    }

    mod num_complex_like {
        #[derive(Clone, Copy)]
        pub struct C {
            pub re: f64,
            pub im: f64,
        }
        impl C {
            pub fn new(re: f64, im: f64) -> Self {
                C { re, im }
            }
            pub fn add(self, o: C) -> C {
                C::new(self.re + o.re, self.im + o.im)
            }
            fn mul(self, o: C) -> C {
                C::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
            }
            pub fn powi(self, e: i32) -> C {
                let n = self.re * self.re + self.im * self.im;
                let inv = C::new(self.re / n, -self.im / n);
                let b = if e < 0 { inv } else { self };
                (0..e.abs()).fold(C::new(1.0, 0.0), |a, _| a.mul(b))
            }
        }
    }
}
