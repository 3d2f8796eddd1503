//! The polytopes P(m; y) ⊂ [0,1]^{#Λ−r} whose exponential integrals reassemble the generating
//! function, their vertices, and the vertex formula for ∫ e^{a·x} over a simple polytope.

use std::collections::BTreeMap;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::kernel_series;
use crate::lattice::{combinations, det_q, invert, Arrangement};
use crate::rat::{GaussQ, Q};
use crate::scalar::{Field, NumericScalar, Ring};
use crate::series::{exp_linear, sum_rational_forms, LinearForm, RationalForm, TruncatedSeries};

/// normal·x ≥ offset, optionally tagged with the (f, a) it comes from.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfSpace {
    pub label: Option<(usize, u8)>,
    pub normal: Vec<Q>,
    pub offset: Q,
}

impl HalfSpace {
    pub fn slack(&self, x: &[Q]) -> Q {
        dot(&self.normal, x) - &self.offset
    }
}

#[derive(Clone, Debug)]
pub struct HPolytope {
    pub dim: usize,
    pub halfspaces: Vec<HalfSpace>,
}

/// W = (B, A): a basis (index into `Arrangement::bases`) and a_g ∈ {0,1} for each g ∉ B, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWitness {
    pub basis: usize,
    pub labels: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: Vec<Q>,
    /// Indices of the half-spaces whose hyperplane passes through the point.
    pub incident: Vec<usize>,
    pub witness: Option<VertexWitness>,
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn qi64(x: i64) -> Q {
    Q::from_integer(x.into())
}

/// Λ = B₀ ∪ L₀ with the pairings ⟨g⃗, f⃗^{B₀}⟩.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub basis: usize,
    pub members: Vec<usize>,
    pub rest: Vec<usize>,
    /// pairing[i][j] = ⟨rest[i], members[j]^{B₀}⟩.
    pub pairing: Vec<Vec<Q>>,
}

impl Decomposition {
    pub fn new(arr: &Arrangement, basis: usize) -> Self {
        let b = &arr.bases()[basis];
        let members = b.members().to_vec();
        let rest: Vec<usize> = (0..arr.len()).filter(|g| !b.contains(*g)).collect();
        let pairing = rest.iter().map(|&g| (0..members.len()).map(|j| b.coordinate(&arr.functionals()[g].direction, j)).collect()).collect();
        Decomposition { basis, members, rest, pairing }
    }

    pub fn first(arr: &Arrangement) -> Self {
        Self::new(arr, 0)
    }

    pub fn dim(&self) -> usize {
        self.rest.len()
    }

    /// ⟨y + m, f⃗^{B₀}⟩ for each member f.
    pub fn coordinates(&self, arr: &Arrangement, y: &[Q], m: &[i64]) -> Vec<Q> {
        let b = &arr.bases()[self.basis];
        (0..self.members.len()).map(|j| b.pairing(y, m, j)).collect()
    }

    /// u(f, a) ∈ Q^{#L₀}.
    pub fn normal(&self, f: usize, a: u8) -> Vec<Q> {
        let sign = |neg: bool| if neg { -Q::one() } else { Q::one() };
        match self.members.iter().position(|&x| x == f) {
            Some(j) => self.pairing.iter().map(|row| sign(a == 0) * &row[j]).collect(),
            None => self.rest.iter().map(|&g| if g == f { sign(a == 1) } else { Q::zero() }).collect(),
        }
    }

    /// v(f, a; m; y).
    pub fn offset(&self, coords: &[Q], f: usize, a: u8) -> Q {
        match self.members.iter().position(|&x| x == f) {
            // ⟨y + m − a f⃗, f⃗^{B₀}⟩ = coords_f − a
            Some(j) => {
                let v = &coords[j] - Q::from_integer(a.into());
                if a == 0 {
                    -v
                } else {
                    v
                }
            }
            None => -Q::from_integer(a.into()),
        }
    }

    /// t*_g = s_g − Σ_{f∈B₀} s_f ⟨g⃗, f⃗^{B₀}⟩ in the shifted variables s_f = t_f − 2πi c_f.
    pub fn t_star(&self, nvars: usize) -> Vec<Vec<Q>> {
        self.rest
            .iter()
            .zip(&self.pairing)
            .map(|(&g, row)| {
                let mut v = vec![Q::zero(); nvars];
                v[g] = Q::one();
                for (&f, x) in self.members.iter().zip(row) {
                    v[f] -= x;
                }
                v
            })
            .collect()
    }
}

/// P(m; y) as the intersection of the 2·#Λ half-spaces H⁺(f, a).
pub fn polytope(arr: &Arrangement, dec: &Decomposition, y: &[Q], m: &[i64]) -> HPolytope {
    let coords = dec.coordinates(arr, y, m);
    let mut halfspaces = vec![];
    for f in 0..arr.len() {
        for a in 0..2u8 {
            halfspaces.push(HalfSpace { label: Some((f, a)), normal: dec.normal(f, a), offset: dec.offset(&coords, f, a) });
        }
    }
    HPolytope { dim: dec.dim(), halfspaces }
}

fn solve(rows: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    if rows.is_empty() {
        return Some(vec![]);
    }
    let inv = invert(rows)?;
    Some(inv.iter().map(|row| dot(row, rhs)).collect())
}

fn incidence(p: &HPolytope, x: &[Q]) -> Vec<usize> {
    p.halfspaces.iter().enumerate().filter(|(_, h)| h.slack(x).is_zero()).map(|(i, _)| i).collect()
}

/// ⟨y + m − Σ_{g∉B} a_g g⃗, f⃗^B⟩ for the members f of B.
pub fn witness_coordinates(arr: &Arrangement, w: &VertexWitness, y: &[Q], m: &[i64]) -> Vec<Q> {
    let b = &arr.bases()[w.basis];
    let others: Vec<usize> = (0..arr.len()).filter(|g| !b.contains(*g)).collect();
    let mut shifted: Vec<Q> = y.iter().zip(m).map(|(a, b)| a + qi64(*b)).collect();
    for (&g, &a) in others.iter().zip(&w.labels) {
        if a == 1 {
            for (s, d) in shifted.iter_mut().zip(&arr.functionals()[g].direction) {
                *s -= qi64(*d);
            }
        }
    }
    (0..b.members().len()).map(|j| dot(&shifted, b.dual(j))).collect()
}

/// Vertices p(m; y; W) for every W ∈ 𝓑 × {0,1}^{#Λ−r} passing the coordinate test
/// 0 ≤ ⟨y + m − Σ a_g g⃗, f⃗^B⟩ ≤ 1; points reached by several witnesses are listed once.
pub fn vertices(p: &HPolytope, arr: &Arrangement, dec: &Decomposition, y: &[Q], m: &[i64]) -> Vec<Vertex> {
    let coords = dec.coordinates(arr, y, m);
    let n = dec.dim();
    let mut found: BTreeMap<Vec<Q>, Vertex> = BTreeMap::new();
    for (bi, b) in arr.bases().iter().enumerate() {
        let others: Vec<usize> = (0..arr.len()).filter(|g| !b.contains(*g)).collect();
        for mask in 0..(1u64 << n) {
            let labels: Vec<u8> = (0..n).map(|i| ((mask >> i) & 1) as u8).collect();
            let w = VertexWitness { basis: bi, labels };
            let inside = witness_coordinates(arr, &w, y, m).iter().all(|c| !c.is_negative() && *c <= Q::one());
            if !inside {
                continue;
            }
            let rows: Vec<Vec<Q>> = others.iter().zip(&w.labels).map(|(&g, &a)| dec.normal(g, a)).collect();
            let rhs: Vec<Q> = others.iter().zip(&w.labels).map(|(&g, &a)| dec.offset(&coords, g, a)).collect();
            let point = solve(&rows, &rhs).expect("a basis witness determines a unique point");
            found.entry(point.clone()).or_insert_with(|| Vertex { incident: incidence(p, &point), point, witness: Some(w) });
        }
    }
    found.into_values().collect()
}

/// Vertices by brute force over all dim-subsets of the half-spaces.
pub fn vertices_generic(p: &HPolytope) -> Vec<Vertex> {
    let mut found: BTreeMap<Vec<Q>, Vertex> = BTreeMap::new();
    for subset in combinations(p.halfspaces.len(), p.dim) {
        let rows: Vec<Vec<Q>> = subset.iter().map(|&i| p.halfspaces[i].normal.clone()).collect();
        let rhs: Vec<Q> = subset.iter().map(|&i| p.halfspaces[i].offset.clone()).collect();
        let Some(point) = solve(&rows, &rhs) else {
            continue;
        };
        if p.halfspaces.iter().all(|h| !h.slack(&point).is_negative()) {
            found.entry(point.clone()).or_insert_with(|| Vertex { incident: incidence(p, &point), point, witness: None });
        }
    }
    found.into_values().collect()
}

/// Every vertex lies on exactly `dim` of the defining hyperplanes.
pub fn is_simple(p: &HPolytope, verts: &[Vertex]) -> bool {
    verts.iter().all(|v| v.incident.len() == p.dim)
}

/// Neighbours of each vertex: vertices sharing dim − 1 incident hyperplanes.
pub fn edges(p: &HPolytope, verts: &[Vertex]) -> Vec<Vec<usize>> {
    verts
        .iter()
        .enumerate()
        .map(|(k, v)| {
            verts
                .iter()
                .enumerate()
                .filter(|(j, u)| *j != k && v.incident.iter().filter(|i| u.incident.contains(i)).count() + 1 == p.dim)
                .map(|(j, _)| j)
                .collect()
        })
        .collect()
}

/// |det(p_k − p_j)_{j∈E_k}| for each vertex.
fn edge_volumes(verts: &[Vertex], nbrs: &[Vec<usize>]) -> Vec<Q> {
    verts
        .iter()
        .zip(nbrs)
        .map(|(v, e)| {
            let rows: Vec<Vec<Q>> = e.iter().map(|&j| v.point.iter().zip(&verts[j].point).map(|(a, b)| a - b).collect()).collect();
            if rows.is_empty() {
                Q::one()
            } else {
                det_q(&rows).abs()
            }
        })
        .collect()
}

fn require_simple(p: &HPolytope, verts: &[Vertex]) -> Result<Vec<Vec<usize>>> {
    if let Some(v) = verts.iter().find(|v| v.incident.len() != p.dim) {
        return Err(Error::NotSimple(format!("vertex {:?} lies on {} hyperplanes in dimension {}", v.point, v.incident.len(), p.dim)));
    }
    let nbrs = edges(p, verts);
    if let Some(e) = nbrs.iter().find(|e| e.len() != p.dim) {
        return Err(Error::NotSimple(format!("a vertex has {} edges in dimension {}", e.len(), p.dim)));
    }
    Ok(nbrs)
}

/// ∫_P e^{a·x} dx by the vertex formula Σ_k |det(p_k − p_j)| e^{a·p_k} / ∏_j a·(p_k − p_j).
pub fn exp_integral_simple(p: &HPolytope, verts: &[Vertex], a: &[Q], precision: usize) -> Result<NumericScalar> {
    if verts.is_empty() {
        return Ok(NumericScalar::zero(precision));
    }
    let nbrs = require_simple(p, verts)?;
    let vols = edge_volumes(verts, &nbrs);
    let mut acc = NumericScalar::zero(precision);
    for (k, v) in verts.iter().enumerate() {
        let mut weight = vols[k].clone();
        for &j in &nbrs[k] {
            let d: Vec<Q> = v.point.iter().zip(&verts[j].point).map(|(x, y)| x - y).collect();
            let s = dot(a, &d);
            if s.is_zero() {
                return Err(Error::DegenerateExponent);
            }
            weight /= s;
        }
        acc = acc.add(&NumericScalar::exp_real(&dot(a, &v.point), precision).scale(&weight));
    }
    Ok(acc)
}

/// Labels m with P(m; y) ≠ ∅: the B₀-coordinates ⟨y+m, f⃗^{B₀}⟩ must meet the range of
/// Σ_g x_g ⟨g⃗, f⃗^{B₀}⟩ over the unit cube, widened by one; survivors must have a vertex.
pub fn enumerate_m(arr: &Arrangement, dec: &Decomposition, y: &[Q]) -> Vec<Vec<i64>> {
    let r = arr.rank();
    let b = &arr.bases()[dec.basis];
    let ranges: Vec<(Q, Q)> = (0..r)
        .map(|j| {
            let lo: Q = dec.pairing.iter().map(|row| row[j].clone().min(Q::zero())).sum();
            let hi: Q = dec.pairing.iter().map(|row| row[j].clone().max(Q::zero())).sum();
            (lo, hi + Q::one())
        })
        .collect();
    // y + m = Σ_f c_f f⃗
    let bounds: Vec<(i64, i64)> = (0..r)
        .map(|i| {
            let (mut lo, mut hi) = (-&y[i], -&y[i]);
            for (j, &f) in dec.members.iter().enumerate() {
                let d = qi64(arr.functionals()[f].direction[i]);
                let (a, c) = (&d * &ranges[j].0, &d * &ranges[j].1);
                lo += a.clone().min(c.clone());
                hi += a.max(c);
            }
            (lo.floor().to_integer().to_i64().unwrap(), hi.ceil().to_integer().to_i64().unwrap())
        })
        .collect();
    let mut out = vec![];
    let mut m: Vec<i64> = bounds.iter().map(|b| b.0).collect();
    loop {
        let c: Vec<Q> = (0..r).map(|j| b.pairing(y, &m, j)).collect();
        if c.iter().zip(&ranges).all(|(x, (lo, hi))| x >= lo && x <= hi) {
            let p = polytope(arr, dec, y, &m);
            if !vertices(&p, arr, dec, y, &m).is_empty() {
                out.push(m.clone());
            }
        }
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if m[i] < bounds[i].1 {
                m[i] += 1;
                break;
            }
            m[i] = bounds[i].0;
        }
    }
}

/// U: rows indexed by g ∈ L₀, column f holding u(f, a_f) for f ∈ Λ ∖ B.
pub fn witness_matrix(arr: &Arrangement, dec: &Decomposition, w: &VertexWitness) -> Vec<Vec<Q>> {
    let b = &arr.bases()[w.basis];
    let others: Vec<usize> = (0..arr.len()).filter(|g| !b.contains(*g)).collect();
    let cols: Vec<Vec<Q>> = others.iter().zip(&w.labels).map(|(&f, &a)| dec.normal(f, a)).collect();
    (0..dec.dim()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// det U(f, t*) / det U as a linear form in the shifted variables s, for the `col`-th f ∉ B.
pub fn cramer_ratio(arr: &Arrangement, dec: &Decomposition, w: &VertexWitness, col: usize) -> Vec<Q> {
    let u = witness_matrix(arr, dec, w);
    let d = det_q(&u);
    let ts = dec.t_star(arr.len());
    (0..arr.len())
        .map(|h| {
            let mut m = u.clone();
            for (row, t) in m.iter_mut().zip(&ts) {
                row[col] = t[h].clone();
            }
            det_q(&m) / &d
        })
        .collect()
}

/// Σ_{f∈B₀} s_f ⟨y+m, f⃗^{B₀}⟩ + t*·p as a linear form in s.
pub fn vertex_exponent(arr: &Arrangement, dec: &Decomposition, y: &[Q], m: &[i64], p: &[Q]) -> Vec<Q> {
    let mut mu = vec![Q::zero(); arr.len()];
    for (&f, c) in dec.members.iter().zip(dec.coordinates(arr, y, m)) {
        mu[f] += c;
    }
    for (t, x) in dec.t_star(arr.len()).iter().zip(p) {
        for (a, b) in mu.iter_mut().zip(t) {
            *a += b * x;
        }
    }
    mu
}

/// Σ_h λ_h c_h: a linear form λ·s equals λ·t − 2πi·(this).
fn shift_constant(arr: &Arrangement, lambda: &[Q]) -> GaussQ {
    lambda.iter().zip(arr.functionals()).fold(GaussQ::real(Q::zero()), |acc, (l, f)| acc.add(&f.constant.scale(l)))
}

/// Per-label summary of one polytope.
#[derive(Clone, Debug)]
pub struct CellReport {
    pub m: Vec<i64>,
    pub vertices: usize,
    pub generic_vertices: usize,
    pub simple: bool,
}

#[derive(Clone, Debug)]
pub struct PolytopeAssembly<E> {
    pub series: TruncatedSeries<E>,
    pub cells: Vec<CellReport>,
    pub divisions: usize,
}

/// ∫_{P(m;y)} e^{t*·x} dx·e^{Σ_{B₀} s_f⟨y+m,f⃗^{B₀}⟩} through total degree `order`.
fn cell_series<R: Ring>(
    ring: &R,
    arr: &Arrangement,
    dec: &Decomposition,
    y: &[Q],
    m: &[i64],
    order: u32,
) -> Result<(TruncatedSeries<R::Elem>, CellReport, usize)> {
    let n = arr.len();
    let p = polytope(arr, dec, y, m);
    let verts = vertices(&p, arr, dec, y, m);
    let generic = vertices_generic(&p).len();
    let report = CellReport { m: m.to_vec(), vertices: verts.len(), generic_vertices: generic, simple: is_simple(&p, &verts) };
    let nbrs = require_simple(&p, &verts)?;
    let vols = edge_volumes(&verts, &nbrs);
    let ts = dec.t_star(n);
    let mut forms = vec![];
    for (k, v) in verts.iter().enumerate() {
        let mut degenerate = vec![];
        let mut units = vec![];
        for &j in &nbrs[k] {
            let mut lambda = vec![Q::zero(); n];
            for ((a, b), t) in v.point.iter().zip(&verts[j].point).zip(&ts) {
                let d = a - b;
                for (l, x) in lambda.iter_mut().zip(t) {
                    *l += &d * x;
                }
            }
            if lambda.iter().all(Zero::is_zero) {
                return Err(Error::DegenerateExponent);
            }
            let kappa = shift_constant(arr, &lambda);
            if kappa.is_zero() {
                degenerate.push(lambda);
            } else {
                units.push((lambda, kappa));
            }
        }
        let num_order = order + degenerate.len() as u32;
        let mu = vertex_exponent(arr, dec, y, m, &v.point);
        let phase = ring.exp_two_pi_i(&shift_constant(arr, &mu).neg())?;
        let mut num = exp_linear(ring, &mu, num_order).scale(&phase.scale(&vols[k]));
        for (lambda, kappa) in units {
            let l = LinearForm::new(lambda, ring.two_pi_i(&kappa).neg())?;
            num = num.mul(&l.to_series(num_order, &ring.one()).invert_unit()?)?;
        }
        forms.push(RationalForm::new(num, degenerate)?);
    }
    let (s, d) = sum_rational_forms(&forms, ring.division_tolerance())?;
    Ok((s.truncate(order), report, d))
}

/// F̃(t, y; Λ) assembled from the polytopes P(m; y) through total degree `order`.
pub fn genfun_via_polytopes<R: Ring>(ring: &R, arr: &Arrangement, y: &[Q], order: u32) -> Result<PolytopeAssembly<R::Elem>> {
    if y.len() != arr.rank() {
        return Err(Error::InvalidInput(format!("y has {} coordinates, rank is {}", y.len(), arr.rank())));
    }
    if arr.in_h_r(y) {
        return Err(Error::NotSimple("y lies on a translate of a hyperplane spanned by r − 1 directions".into()));
    }
    let n = arr.len();
    let dec = Decomposition::first(arr);
    let labels = enumerate_m(arr, &dec, y);
    let cells: Vec<(TruncatedSeries<R::Elem>, CellReport, usize)> =
        labels.par_iter().map(|m| cell_series(ring, arr, &dec, y, m, order)).collect::<Result<_>>()?;
    let mut total = TruncatedSeries::zero(n, order);
    let mut reports = vec![];
    let mut divisions = 0;
    for (s, rep, d) in cells {
        total = total.add(&s)?;
        reports.push(rep);
        divisions += d;
    }
    for (f, fun) in arr.functionals().iter().enumerate() {
        let k = kernel_series(ring, &fun.constant, &Q::zero(), order)?;
        total = total.mul(&k.embed_variable(n, f))?;
    }
    let index = arr.bases()[dec.basis].index();
    Ok(PolytopeAssembly { series: total.scale_q(&Q::new(1.into(), index.into())), cells: reports, divisions })
}

/// Largest coefficient magnitude of a − b.
pub fn max_discrepancy<E: Field>(a: &TruncatedSeries<E>, b: &TruncatedSeries<E>) -> Result<f64> {
    Ok(a.sub(b)?.max_magnitude())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfun::generating_function;
    use crate::lattice::Functional;
    use crate::rat::{q, qi};
    use crate::scalar::{cyclotomic_order, ExactRing};

    fn cube(dim: usize) -> HPolytope {
        let mut hs = vec![];
        for i in 0..dim {
            let e: Vec<Q> = (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect();
            hs.push(HalfSpace { label: None, normal: e.clone(), offset: Q::zero() });
            hs.push(HalfSpace { label: None, normal: e.iter().map(|x| -x).collect(), offset: -Q::one() });
        }
        HPolytope { dim, halfspaces: hs }
    }

    fn ex31(a: Q, b: Q, c: Q) -> Arrangement {
        Arrangement::new(2, vec![Functional::real(&[1, 0], a), Functional::real(&[0, 1], b), Functional::real(&[1, 1], c)]).unwrap()
    }

    fn remark_72(alpha: Q) -> Arrangement {
        // B₀ = {e₁, e₂}, L₀ = {g = e₁ + e₂, h = e₁ + 2e₂}
        Arrangement::new(
            2,
            vec![
                Functional::real(&[1, 0], alpha.clone()),
                Functional::real(&[0, 1], alpha.clone()),
                Functional::real(&[1, 1], alpha.clone()),
                Functional::real(&[1, 2], alpha),
            ],
        )
        .unwrap()
    }

    fn lam(alpha: Q) -> Arrangement {
        Arrangement::new(1, vec![Functional::real(&[-1], alpha.clone()), Functional::real(&[1], qi(0)), Functional::real(&[1], alpha)]).unwrap()
    }

    #[test]
    fn unit_interval_and_square() {
        let p = cube(1);
        let v = vertices_generic(&p);
        assert_eq!(v.len(), 2);
        assert!(is_simple(&p, &v));
        let t = q(3, 7);
        let got = exp_integral_simple(&p, &v, std::slice::from_ref(&t), 128).unwrap();
        let want = (3f64 / 7.0).exp_m1() / (3.0 / 7.0);
        assert!((got.re_f64() - want).abs() < 1e-15);
        let sq = cube(2);
        let v = vertices_generic(&sq);
        assert_eq!(v.len(), 4);
        assert!(is_simple(&sq, &v));
        let got = exp_integral_simple(&sq, &v, &[q(1, 2), q(-2, 3)], 128).unwrap();
        let want = (0.5f64.exp_m1() / 0.5) * ((-2f64 / 3.0).exp_m1() / (-2.0 / 3.0));
        assert!((got.re_f64() - want).abs() < 1e-15);
        assert!(matches!(exp_integral_simple(&sq, &v, &[qi(0), qi(1)], 64), Err(Error::DegenerateExponent)));
    }

    #[test]
    fn witness_vertices_match_generic_enumeration() {
        for (arr, y) in [
            (remark_72(q(1, 3)), vec![q(2, 7), q(3, 11)]),
            (remark_72(q(1, 3)), vec![qi(0), q(1, 2)]),
            (ex31(q(1, 2), q(1, 3), q(1, 5)), vec![q(1, 7), q(1, 11)]),
            (lam(q(1, 2)), vec![q(1, 3)]),
        ] {
            let dec = Decomposition::first(&arr);
            for m in enumerate_m(&arr, &dec, &y) {
                let p = polytope(&arr, &dec, &y, &m);
                let a = vertices(&p, &arr, &dec, &y, &m);
                let b = vertices_generic(&p);
                let pa: Vec<_> = a.iter().map(|v| v.point.clone()).collect();
                let pb: Vec<_> = b.iter().map(|v| v.point.clone()).collect();
                assert_eq!(pa, pb, "m = {m:?}");
            }
        }
    }

    #[test]
    fn simplicity_follows_genericity() {
        let arr = remark_72(q(1, 3));
        let dec = Decomposition::first(&arr);
        let generic = [q(2, 7), q(3, 11)];
        assert!(!arr.in_h_r(&generic));
        for m in enumerate_m(&arr, &dec, &generic) {
            let p = polytope(&arr, &dec, &generic, &m);
            assert!(is_simple(&p, &vertices(&p, &arr, &dec, &generic, &m)));
        }
        // y₁ = 0 puts y on a translate of the e₂ line
        let special = [qi(0), q(1, 5)];
        assert!(arr.in_h_r(&special));
        let any_non_simple = enumerate_m(&arr, &dec, &special).iter().any(|m| {
            let p = polytope(&arr, &dec, &special, m);
            !is_simple(&p, &vertices(&p, &arr, &dec, &special, m))
        });
        assert!(any_non_simple);
    }

    #[test]
    fn unique_vertex_from_two_hyperplanes() {
        // the witness ({f₂, h}, (1, 0)) is cut out by H(f₁, 1) and H(g, 0)
        let arr = remark_72(q(1, 3));
        let dec = Decomposition::first(&arr);
        let y = [q(2, 7), q(3, 11)];
        let b = arr.bases().iter().position(|b| b.members() == [1, 3]).unwrap();
        let w = VertexWitness { basis: b, labels: vec![1, 0] };
        let mut hits = 0;
        for m in enumerate_m(&arr, &dec, &y) {
            let p = polytope(&arr, &dec, &y, &m);
            for v in vertices(&p, &arr, &dec, &y, &m) {
                if v.witness.as_ref() == Some(&w) {
                    let labels: Vec<_> = v.incident.iter().map(|&i| p.halfspaces[i].label.unwrap()).collect();
                    assert_eq!(labels, vec![(0, 1), (2, 0)]);
                    hits += 1;
                }
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn label_windows_translate_with_y() {
        let arr = remark_72(q(1, 3));
        let dec = Decomposition::first(&arr);
        let y = [q(2, 7), q(3, 11)];
        let shifted = [q(2, 7) + qi(2), q(3, 11) - qi(1)];
        let a = enumerate_m(&arr, &dec, &y);
        let b: Vec<Vec<i64>> = enumerate_m(&arr, &dec, &shifted).into_iter().map(|m| vec![m[0] + 2, m[1] - 1]).collect();
        assert_eq!(a, b);
        // brute-force scan of a wider window agrees
        let mut scan = vec![];
        for m0 in -6..=6 {
            for m1 in -6..=6 {
                let m = [m0, m1];
                let p = polytope(&arr, &dec, &y, &m);
                if !vertices_generic(&p).is_empty() {
                    scan.push(m.to_vec());
                }
            }
        }
        assert_eq!(a, scan);
    }

    #[test]
    fn zero_dimensional_cells() {
        let arr = Arrangement::new(2, vec![Functional::real(&[1, 0], q(1, 3)), Functional::real(&[1, 1], q(1, 5))]).unwrap();
        let dec = Decomposition::first(&arr);
        let y = [q(1, 7), q(5, 11)];
        let ms = enumerate_m(&arr, &dec, &y);
        // 0 ≤ ⟨y+m, f⃗^{B₀}⟩ ≤ 1 pins m to a single label
        assert_eq!(ms.len(), 1);
        let c = dec.coordinates(&arr, &y, &ms[0]);
        assert!(c.iter().all(|x| !x.is_negative() && *x <= Q::one()));
    }

    #[test]
    fn witness_determinant_is_an_index_ratio() {
        let arr = Arrangement::new(
            2,
            vec![Functional::real(&[1, 1], q(1, 3)), Functional::real(&[1, -1], q(1, 5)), Functional::real(&[1, 0], q(1, 7)), Functional::real(&[0, 1], qi(0))],
        )
        .unwrap();
        for b0 in 0..arr.bases().len() {
            let dec = Decomposition::new(&arr, b0);
            let i0 = Q::from_integer(arr.bases()[b0].index().into());
            for (bi, b) in arr.bases().iter().enumerate() {
                for mask in 0..4u8 {
                    let w = VertexWitness { basis: bi, labels: vec![mask & 1, mask >> 1] };
                    let d = det_q(&witness_matrix(&arr, &dec, &w)).abs();
                    assert_eq!(d, Q::from_integer(b.index().into()) / &i0);
                }
            }
        }
    }

    #[test]
    fn cramer_ratio_matches_closed_form() {
        for arr in [remark_72(q(1, 3)), ex31(q(1, 2), q(1, 3), q(1, 5)), lam(q(1, 2))] {
            let n = arr.len();
            for b0 in 0..arr.bases().len() {
                let dec = Decomposition::new(&arr, b0);
                for (bi, b) in arr.bases().iter().enumerate() {
                    let others: Vec<usize> = (0..n).filter(|g| !b.contains(*g)).collect();
                    for mask in 0..(1u32 << others.len()) {
                        let labels: Vec<u8> = (0..others.len()).map(|i| ((mask >> i) & 1) as u8).collect();
                        let w = VertexWitness { basis: bi, labels: labels.clone() };
                        for (col, &f) in others.iter().enumerate() {
                            // (−1)^{a_f}(s_f − Σ_{g∈B} s_g ⟨f⃗, g⃗^B⟩)
                            let mut want = vec![Q::zero(); n];
                            want[f] = Q::one();
                            for (pos, &g) in b.members().iter().enumerate() {
                                want[g] -= b.coordinate(&arr.functionals()[f].direction, pos);
                            }
                            if labels[col] == 1 {
                                want.iter_mut().for_each(|x| *x = -x.clone());
                            }
                            assert_eq!(cramer_ratio(&arr, &dec, &w, col), want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vertex_exponent_identity() {
        for (arr, y) in [(remark_72(q(1, 3)), vec![q(2, 7), q(3, 11)]), (ex31(q(1, 2), q(1, 3), q(1, 5)), vec![q(1, 7), q(1, 11)])] {
            let n = arr.len();
            let dec = Decomposition::first(&arr);
            for m in enumerate_m(&arr, &dec, &y) {
                let p = polytope(&arr, &dec, &y, &m);
                for v in vertices(&p, &arr, &dec, &y, &m) {
                    let w = v.witness.unwrap();
                    let b = &arr.bases()[w.basis];
                    let others: Vec<usize> = (0..n).filter(|g| !b.contains(*g)).collect();
                    let mut want = vec![Q::zero(); n];
                    for (&g, &a) in others.iter().zip(&w.labels) {
                        want[g] = Q::from_integer(a.into());
                    }
                    for (&f, c) in b.members().iter().zip(witness_coordinates(&arr, &w, &y, &m)) {
                        want[f] = c;
                    }
                    assert_eq!(vertex_exponent(&arr, &dec, &y, &m, &v.point), want);
                }
            }
        }
    }

    #[test]
    fn integral_is_invariant_under_relabeling() {
        let arr = remark_72(q(1, 3));
        let dec = Decomposition::first(&arr);
        let y = [q(2, 7), q(3, 11)];
        let a = [q(3, 5), q(-7, 4)];
        for m in enumerate_m(&arr, &dec, &y) {
            let p = polytope(&arr, &dec, &y, &m);
            let v = vertices(&p, &arr, &dec, &y, &m);
            let x = exp_integral_simple(&p, &v, &a, 128).unwrap();
            let mut rev = p.clone();
            rev.halfspaces.reverse();
            let rv = vertices_generic(&rev);
            let z = exp_integral_simple(&rev, &rv, &a, 128).unwrap();
            assert!(x.sub(&z).abs() < 1e-35);
        }
    }

    fn check_equal(arr: &Arrangement, y: &[Q], order: u32) {
        let phi = arr.choose_phi();
        let n = cyclotomic_order(arr, arr.bases(), &phi, y).unwrap();
        let ring = ExactRing::new(n);
        let f = generating_function(&ring, arr, y, &phi, order).unwrap();
        let ft = genfun_via_polytopes(&ring, arr, y, order).unwrap();
        assert!(ft.cells.iter().all(|c| c.simple && c.vertices == c.generic_vertices));
        let d = f.sub(&ft.series).unwrap();
        assert!(d.is_zero(), "{}", d.dump());
    }

    #[test]
    fn polytopes_reassemble_the_generating_function() {
        check_equal(&ex31(q(1, 2), q(1, 3), q(1, 5)), &[q(1, 7), q(1, 11)], 3);
        check_equal(&lam(q(1, 2)), &[q(1, 3)], 4);
        check_equal(&remark_72(q(1, 3)), &[q(2, 7), q(3, 11)], 2);
    }

    /// Gauss–Legendre nodes and weights on [0, 1] in f64 refined by Newton steps.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        (1..=n)
            .map(|i| {
                let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-17 {
                        break;
                    }
                }
                ((1.0 - x) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    #[test]
    fn simplex_integral_matches_quadrature() {
        // simplex with vertices 0, e₁, e₁+e₂, e₁+e₂+e₃ scaled: 0 ≤ z ≤ y ≤ x ≤ 1
        let hs = vec![
            HalfSpace { label: None, normal: vec![qi(-1), qi(0), qi(0)], offset: qi(-1) },
            HalfSpace { label: None, normal: vec![qi(1), qi(-1), qi(0)], offset: qi(0) },
            HalfSpace { label: None, normal: vec![qi(0), qi(1), qi(-1)], offset: qi(0) },
            HalfSpace { label: None, normal: vec![qi(0), qi(0), qi(1)], offset: qi(0) },
        ];
        let p = HPolytope { dim: 3, halfspaces: hs };
        let v = vertices_generic(&p);
        assert_eq!(v.len(), 4);
        assert!(is_simple(&p, &v));
        let a = [q(3, 4), q(-5, 6), q(2, 7)];
        let got = exp_integral_simple(&p, &v, &a, 128).unwrap();
        // iterated Gauss–Legendre over x ∈ [0,1], y ∈ [0,x], z ∈ [0,y]
        let nodes = gauss_legendre(24);
        let af: Vec<f64> = a.iter().map(|x| x.to_f64().unwrap()).collect();
        let mut sum = 0.0;
        for &(x, wx) in &nodes {
            for &(u, wy) in &nodes {
                let yy = x * u;
                for &(w, wz) in &nodes {
                    let z = yy * w;
                    sum += wx * wy * wz * x * yy * (af[0] * x + af[1] * yy + af[2] * z).exp();
                }
            }
        }
        let got = got.re_f64();
        assert!((got - sum).abs() < 1e-14, "{got} vs {sum}");
    }
}
