//! Arrangements of affine functionals on Zʳ: bases, dual bases, cosets, the generic
//! direction φ and the multi-dimensional fractional part.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{frac, is_integer, GaussQ, Q};
use crate::scalar::{ExactRing, ExactScalar, Ring};

/// f(v) = ⟨direction, v⟩ + constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional {
    pub direction: Vec<i64>,
    pub constant: GaussQ,
}

impl Functional {
    pub fn new(direction: Vec<i64>, constant: GaussQ) -> Self {
        Functional { direction, constant }
    }

    pub fn real(direction: &[i64], constant: Q) -> Self {
        Functional { direction: direction.to_vec(), constant: GaussQ::real(constant) }
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {})", self.direction, self.constant)
    }
}

/// A basis B ∈ 𝓑: r functionals with independent directions.
#[derive(Clone, Debug)]
pub struct Basis {
    members: Vec<usize>,
    matrix: Vec<Vec<i64>>,
    /// dual[i] = f⃗_i^B, so ⟨f⃗_i, f⃗_j^B⟩ = δ_ij.
    dual: Vec<Vec<Q>>,
    index: u64,
    coset_reps: Vec<Vec<i64>>,
}

impl Basis {
    fn new(members: Vec<usize>, matrix: Vec<Vec<i64>>) -> Option<Self> {
        let qm: Vec<Vec<Q>> = matrix.iter().map(|row| row.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
        let inv = invert(&qm)?;
        let r = matrix.len();
        let dual = (0..r).map(|j| (0..r).map(|i| inv[i][j].clone()).collect()).collect();
        let snf = smith_normal_form(&matrix);
        let index: u64 = snf.diagonal.iter().map(|d| d.unsigned_abs() as u64).product();
        let coset_reps = snf.coset_representatives();
        Some(Basis { members, matrix, dual, index, coset_reps })
    }

    /// Functional identifiers, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, f: usize) -> bool {
        self.members.contains(&f)
    }

    pub fn position(&self, f: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == f)
    }

    pub fn direction_matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    /// f⃗^B for the member at position `pos`.
    pub fn dual(&self, pos: usize) -> &[Q] {
        &self.dual[pos]
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coset_reps(&self) -> &[Vec<i64>] {
        &self.coset_reps
    }

    /// ⟨v, f⃗^B⟩ for an integer vector v.
    pub fn coordinate(&self, v: &[i64], pos: usize) -> Q {
        dot_iq(v, &self.dual[pos])
    }

    /// ⟨y + w, f⃗^B⟩.
    pub fn pairing(&self, y: &[Q], w: &[i64], pos: usize) -> Q {
        let d = &self.dual[pos];
        y.iter().zip(w).zip(d).map(|((yi, &wi), di)| (yi + Q::from_integer(wi.into())) * di).sum()
    }

    /// {y + w}_{B,f} for the member at position `pos`.
    pub fn frac_part(&self, y: &[Q], w: &[i64], pos: usize, phi: &GenericDirection) -> Q {
        let a = self.pairing(y, w, pos);
        frac_branch(&a, phi.pairing(&self.dual[pos]).is_positive())
    }

    /// Whether v lies in the lattice ⟨B⃗⟩ spanned by the member directions.
    pub fn lattice_contains(&self, v: &[i64]) -> bool {
        (0..self.matrix.len()).all(|pos| is_integer(&self.coordinate(v, pos)))
    }
}

/// {a} on the positive branch, 1 − {−a} on the negative one.
pub fn frac_branch(a: &Q, positive: bool) -> Q {
    if positive {
        frac(a)
    } else {
        Q::one() - frac(&-a)
    }
}

/// φ with ⟨φ, f⃗^B⟩ ≠ 0 for all B ∈ 𝓑, f ∈ B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericDirection {
    pub phi: Vec<i64>,
}

impl GenericDirection {
    pub fn pairing(&self, v: &[Q]) -> Q {
        dot_iq(&self.phi, v)
    }

    pub fn is_valid_for(&self, bases: &[Basis]) -> bool {
        bases.iter().all(|b| (0..b.members.len()).all(|pos| !self.pairing(b.dual(pos)).is_zero()))
    }
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    rank: usize,
    functionals: Vec<Functional>,
    bases: Vec<Basis>,
    indispensable: Vec<usize>,
}

impl Arrangement {
    pub fn new(rank: usize, functionals: Vec<Functional>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArrangement("rank must be positive".into()));
        }
        for (i, f) in functionals.iter().enumerate() {
            if f.direction.len() != rank {
                return Err(Error::InvalidArrangement(format!("functional {i} has direction of length {} (rank {rank})", f.direction.len())));
            }
            if f.direction.iter().all(|&x| x == 0) {
                return Err(Error::InvalidArrangement(format!("functional {i} has zero direction")));
            }
        }
        let dirs: Vec<&[i64]> = functionals.iter().map(|f| f.direction.as_slice()).collect();
        if int_rank(&dirs) != rank {
            return Err(Error::InvalidArrangement(format!("directions do not span rank {rank}")));
        }
        let indispensable = (0..functionals.len())
            .filter(|&i| {
                let rest: Vec<&[i64]> = dirs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, d)| *d).collect();
                int_rank(&rest) < rank
            })
            .collect();
        let bases = combinations(functionals.len(), rank)
            .into_iter()
            .filter_map(|members| {
                let matrix = members.iter().map(|&i| functionals[i].direction.clone()).collect();
                Basis::new(members, matrix)
            })
            .collect();
        Ok(Arrangement { rank, functionals, bases, indispensable })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn functionals(&self) -> &[Functional] {
        &self.functionals
    }

    /// 𝓑(Λ), sorted by member identifiers.
    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    /// Λ̃: functionals whose removal drops the direction rank.
    pub fn indispensable(&self) -> &[usize] {
        &self.indispensable
    }

    /// The arrangement with the given functionals removed (identifiers shift down).
    pub fn without(&self, removed: &[usize]) -> Result<Arrangement> {
        let kept: Vec<Functional> =
            self.functionals.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, f)| f.clone()).collect();
        let dirs: Vec<&[i64]> = kept.iter().map(|f| f.direction.as_slice()).collect();
        if int_rank(&dirs) < self.rank {
            return Err(Error::RankDrop(self.rank));
        }
        Arrangement::new(self.rank, kept)
    }

    /// Reorders functionals: the new list is `perm.map(|i| old[i])`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Arrangement> {
        Arrangement::new(self.rank, perm.iter().map(|&i| self.functionals[i].clone()).collect())
    }

    /// Deterministic φ = (1, M, …, M^{r−1}) with the smallest working M.
    pub fn choose_phi(&self) -> GenericDirection {
        let mut m: i64 = 1;
        loop {
            if let Some(phi) = self.phi_with_ratio(m) {
                return phi;
            }
            m += 1;
        }
    }

    /// φ = (1, M, …, M^{r−1}) if it is generic.
    pub fn phi_with_ratio(&self, m: i64) -> Option<GenericDirection> {
        let phi = GenericDirection { phi: (0..self.rank as u32).map(|k| m.pow(k)).collect() };
        phi.is_valid_for(&self.bases).then_some(phi)
    }

    /// Whether y lies on some excluded hyperplane 𝔥_{Λ∖{f}} + Zʳ for f in `subset`.
    pub fn on_excluded_hyperplanes(&self, y: &[Q], subset: &[usize]) -> bool {
        self.excluded_witness(y, subset).is_some()
    }

    /// The first f ∈ subset ∩ Λ̃ whose translated hyperplane contains y.
    pub fn excluded_witness(&self, y: &[Q], subset: &[usize]) -> Option<usize> {
        subset.iter().copied().filter(|f| self.indispensable.contains(f)).find(|&f| {
            let b = self.bases.iter().find(|b| b.contains(f)).expect("indispensable functional lies in every basis");
            on_translated_kernel(y, b.dual(b.position(f).unwrap()))
        })
    }

    /// y ∈ 𝔥_𝓡: some ⟨y, f⃗^B⟩ lies in the subgroup ⟨Zʳ, f⃗^B⟩ of Q.
    pub fn in_h_r(&self, y: &[Q]) -> bool {
        self.bases.iter().any(|b| (0..self.rank).any(|pos| on_translated_kernel(y, b.dual(pos))))
    }
}

/// ⟨y, d⟩ ∈ ⟨Zʳ, d⟩ = g·Z, g the rational gcd of the entries of d.
fn on_translated_kernel(y: &[Q], d: &[Q]) -> bool {
    let g = rational_gcd(d);
    let v: Q = y.iter().zip(d).map(|(a, b)| a * b).sum();
    is_integer(&(v / g))
}

fn rational_gcd(v: &[Q]) -> Q {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for x in v.iter().filter(|x| !x.is_zero()) {
        num = num.gcd(x.numer());
        den = den.lcm(x.denom());
    }
    Q::new(num, den)
}

fn dot_iq(a: &[i64], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(&x, y)| y * Q::from_integer(x.into())).sum()
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Rank over Q of integer row vectors.
pub fn int_rank(rows: &[&[i64]]) -> usize {
    let m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect()).collect();
    rank_q(m)
}

pub fn rank_q(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..rows {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in c..cols {
                    let t = &f * &m[rank][j];
                    m[i][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Inverse of a square rational matrix, None if singular.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &piv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of a square rational matrix.
pub fn det_q(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Q::zero() };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= &a[c][c];
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = &a[i][c] / &a[c][c];
                for j in c..n {
                    let t = &f * &a[c][j];
                    a[i][j] -= t;
                }
            }
        }
    }
    det
}

/// U·M·V = D with U, V unimodular and D diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<i128>,
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

impl SmithForm {
    /// Representatives of Zʳ/(row lattice of M): images b·V⁻¹ of the box Π [0, d_i).
    pub fn coset_representatives(&self) -> Vec<Vec<i64>> {
        let r = self.diagonal.len();
        let mut reps = vec![];
        let mut b = vec![0i128; r];
        loop {
            let w: Vec<i64> = (0..r).map(|j| (0..r).map(|i| b[i] * self.v_inv[i][j]).sum::<i128>() as i64).collect();
            reps.push(w);
            let mut i = 0;
            loop {
                if i == r {
                    return reps;
                }
                b[i] += 1;
                if b[i] < self.diagonal[i].abs() {
                    break;
                }
                b[i] = 0;
                i += 1;
            }
        }
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Smith normal form of an integer matrix (rows × cols); the diagonal has min(rows, cols) entries.
pub fn smith_normal_form(m: &[Vec<i64>]) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut v_inv = identity(cols);

    // Column operation helpers keep v and v_inv consistent.
    fn col_swap(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], i: usize, j: usize) {
        for r in a.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
        vi.swap(i, j);
    }
    // col_j += k·col_i
    fn col_add(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], j: usize, i: usize, k: i128) {
        for r in a.iter_mut() {
            r[j] += k * r[i];
        }
        for r in v.iter_mut() {
            r[j] += k * r[i];
        }
        // E = I + k·e_i e_jᵀ, E⁻¹ = I − k·e_i e_jᵀ: row_i(vi) −= k·row_j(vi)
        let rowj = vi[j].clone();
        for (c, x) in rowj.iter().enumerate() {
            vi[i][c] -= k * x;
        }
    }
    fn col_neg(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vi: &mut [Vec<i128>], i: usize) {
        for r in a.iter_mut() {
            r[i] = -r[i];
        }
        for r in v.iter_mut() {
            r[i] = -r[i];
        }
        for x in vi[i].iter_mut() {
            *x = -*x;
        }
    }

    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // Smallest nonzero entry in the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, &mut v, &mut v_inv, t, pj);
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let k = a[i][t].div_euclid(p);
                if k != 0 {
                    for c in 0..cols {
                        a[i][c] -= k * a[t][c];
                    }
                    for c in 0..rows {
                        u[i][c] -= k * u[t][c];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let k = a[t][j].div_euclid(p);
                if k != 0 {
                    col_add(&mut a, &mut v, &mut v_inv, j, t, -k);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility of the trailing block by the pivot.
            let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
            match bad {
                Some((i, _)) => {
                    for c in 0..cols {
                        a[t][c] += a[i][c];
                    }
                    for c in 0..rows {
                        u[t][c] += u[i][c];
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            col_neg(&mut a, &mut v, &mut v_inv, t);
        }
    }
    SmithForm { diagonal: (0..steps).map(|i| a[i][i]).collect(), u, v, v_inv }
}

/// Integer solutions of A·v = b: None if inconsistent, else (particular, kernel basis).
pub fn solve_integer_system(a: &[Vec<i64>], b: &[i64], cols: usize) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    if a.is_empty() {
        return Some((vec![0; cols], (0..cols).map(|i| (0..cols).map(|j| i64::from(i == j)).collect()).collect()));
    }
    let s = smith_normal_form(a);
    let rows = a.len();
    let ub: Vec<i128> = (0..rows).map(|i| (0..rows).map(|k| s.u[i][k] * b[k] as i128).sum()).collect();
    let mut z = vec![0i128; cols];
    let mut rank = 0;
    for (i, &d) in s.diagonal.iter().enumerate() {
        if d != 0 {
            if ub[i] % d != 0 {
                return None;
            }
            z[i] = ub[i] / d;
            rank = i + 1;
        }
    }
    if ub.iter().skip(rank).any(|&x| x != 0) {
        return None;
    }
    let part = (0..cols).map(|r| (0..cols).map(|c| s.v[r][c] * z[c]).sum::<i128>() as i64).collect();
    let kernel = (rank..cols).map(|c| (0..cols).map(|r| s.v[r][c] as i64).collect()).collect();
    Some((part, kernel))
}

/// (1/index)·Σ_w e^{2πi⟨w, λ⟩} over coset representatives of Zʳ/⟨B⃗⟩; λ must lie in ⟨B⃗*⟩.
pub fn coset_character_sum(b: &Basis, lam: &[Q]) -> Result<ExactScalar> {
    for row in b.direction_matrix() {
        if !is_integer(&dot_iq(row, lam)) {
            return Err(Error::InvalidInput("λ is not in the dual lattice of the basis".into()));
        }
    }
    let n = lam.iter().fold(4u64, |acc, x| crate::rat::lcm_u64(acc, crate::rat::denom_u64(x))) as u32;
    let ring = ExactRing::new(n);
    let mut acc = ring.zero();
    for w in b.coset_reps() {
        acc = acc.add(&ring.exp_two_pi_i(&GaussQ::real(dot_iq(w, lam)))?);
    }
    Ok(acc.scale(&Q::new(1.into(), b.index().into())))
}
