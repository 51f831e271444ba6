use crate::error::{Error, Result};
use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Integer column vector of fixed dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZVec(pub Vec<Int>);

impl ZVec {
    pub fn zero(n: usize) -> Self {
        ZVec(vec![Int::zero(); n])
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[k] = Int::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        ZVec(entries.iter().map(|&x| Int::from(x)).collect())
    }
}

impl Add for &ZVec {
    type Output = ZVec;
    fn add(self, rhs: &ZVec) -> ZVec {
        assert_eq!(self.dim(), rhs.dim());
        ZVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ZVec {
    type Output = ZVec;
    fn sub(self, rhs: &ZVec) -> ZVec {
        assert_eq!(self.dim(), rhs.dim());
        ZVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &ZVec {
    type Output = ZVec;
    fn neg(self) -> ZVec {
        ZVec(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for ZVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    pub n: usize,
    entries: Vec<Int>,
}

impl IMat {
    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let n = rows.len();
        for r in &rows {
            assert_eq!(r.len(), n, "matrix must be square");
        }
        IMat {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Int::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat {
            n,
            entries: vec![Int::zero(); n * n],
        };
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn rows(&self) -> Vec<Vec<Int>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].clone()).collect())
            .collect()
    }

    pub fn mul(&self, rhs: &IMat) -> IMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = IMat {
            n,
            entries: vec![Int::zero(); n * n],
        };
        for i in 0..n {
            for k in 0..n {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &ZVec) -> ZVec {
        assert_eq!(self.n, v.dim());
        let mut out = ZVec::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.0[i] += &self[(i, j)] * &v.0[j];
            }
        }
        out
    }

    pub fn transpose(&self) -> IMat {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].clone();
            }
        }
        out
    }

    pub fn det(&self) -> Int {
        self.to_qmat().det().to_integer()
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.det();
        d == Int::one() || d == -Int::one()
    }

    pub fn to_qmat(&self) -> QMat {
        QMat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|x| Rat::from_integer(x.clone()))
                .collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.entries[i * self.n + j]
    }
}

/// Square rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMat {
    pub n: usize,
    entries: Vec<Rat>,
}

impl QMat {
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let n = rows.len();
        for r in &rows {
            assert_eq!(r.len(), n, "matrix must be square");
        }
        QMat {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat {
            n,
            entries: vec![Rat::zero(); n * n],
        };
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == QMat::identity(self.n)
    }

    pub fn rows(&self) -> Vec<Vec<Rat>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].clone()).collect())
            .collect()
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = QMat {
            n,
            entries: vec![Rat::zero(); n * n],
        };
        for i in 0..n {
            for k in 0..n {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = &self[(i, k)] * &rhs[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| (0..self.n).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn det(&self) -> Rat {
        let mut m = self.clone();
        let n = m.n;
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                for j in 0..n {
                    let (a, b) = (m[(p, j)].clone(), m[(col, j)].clone());
                    m[(p, j)] = b;
                    m[(col, j)] = a;
                }
                det = -det;
            }
            det *= m[(col, col)].clone();
            let inv = m[(col, col)].recip();
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for j in col..n {
                    let sub = &factor * &m[(col, j)];
                    m[(r, j)] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<QMat> {
        let n = self.n;
        let mut m = self.clone();
        let mut inv = QMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[(r, col)].is_zero());
            let Some(p) = pivot else {
                return Err(Error::SingularMatrix);
            };
            if p != col {
                for j in 0..n {
                    m.entries.swap(p * n + j, col * n + j);
                    inv.entries.swap(p * n + j, col * n + j);
                }
            }
            let scale = m[(col, col)].recip();
            for j in 0..n {
                m[(col, j)] *= scale.clone();
                inv[(col, j)] *= scale.clone();
            }
            for r in 0..n {
                if r == col || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for j in 0..n {
                    let a = &factor * &m[(col, j)];
                    let b = &factor * &inv[(col, j)];
                    m[(r, j)] -= a;
                    inv[(r, j)] -= b;
                }
            }
        }
        Ok(inv)
    }

    /// Solve `self * x = b` exactly. Errors on singular matrices.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        Ok(self.inverse()?.apply(b))
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn to_imat(&self) -> Option<IMat> {
        if !self.is_integral() {
            return None;
        }
        Some(IMat {
            n: self.n,
            entries: self.entries.iter().map(|x| x.to_integer()).collect(),
        })
    }

    pub fn transpose(&self) -> QMat {
        let n = self.n;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> Rat {
        (0..self.n).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn scale(&self, s: &Rat) -> QMat {
        QMat {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.n, rhs.n);
        QMat {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.entries[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.entries[i * self.n + j]
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U * M`, `U`
/// unimodular, `H` lower-triangular with positive diagonal entries and
/// below-diagonal residues reduced into `[0, diag)`. Zero diagonal entries
/// remain when `M` is singular.
pub fn hermite_normal_form(m: &IMat) -> (IMat, IMat) {
    let n = m.n;
    let mut h = m.clone();
    let mut u = IMat::identity(n);

    // Zero out the above-diagonal part column by column, rightmost first,
    // using row j as the pivot row for column j.
    for j in (0..n).rev() {
        for i in 0..j {
            if h[(i, j)].is_zero() {
                continue;
            }
            let (g, s, t) = ext_gcd(&h[(j, j)], &h[(i, j)]);
            let a = &h[(i, j)] / &g; // h_ij / g
            let b = &h[(j, j)] / &g; // h_jj / g
            for c in 0..n {
                let hj = h[(j, c)].clone();
                let hi = h[(i, c)].clone();
                h[(j, c)] = &s * &hj + &t * &hi;
                h[(i, c)] = &b * &hi - &a * &hj;
                let uj = u[(j, c)].clone();
                let ui = u[(i, c)].clone();
                u[(j, c)] = &s * &uj + &t * &ui;
                u[(i, c)] = &b * &ui - &a * &uj;
            }
        }
    }
    // Positive diagonal.
    for j in 0..n {
        if h[(j, j)].is_negative() {
            for c in 0..n {
                h[(j, c)] = -h[(j, c)].clone();
                u[(j, c)] = -u[(j, c)].clone();
            }
        }
    }
    // Reduce below-diagonal residues, highest column first so later passes
    // never disturb a finished column.
    for j in (0..n).rev() {
        if h[(j, j)].is_zero() {
            continue;
        }
        for i in j + 1..n {
            let q = h[(i, j)].div_floor(&h[(j, j)]);
            if q.is_zero() {
                continue;
            }
            for c in 0..n {
                let sub_h = &q * &h[(j, c)];
                let sub_u = &q * &u[(j, c)];
                h[(i, c)] -= sub_h;
                u[(i, c)] -= sub_u;
            }
        }
    }
    (h, u)
}

/// Extended gcd: returns `(g, s, t)` with `g = s*a + t*b`, `g >= 0`.
fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Decides `v ∈ M * Z^n` and returns the exact integral preimage when it
/// exists. Errors when `M` is singular.
pub fn solve_membership(m: &IMat, v: &ZVec) -> Result<Option<ZVec>> {
    let q = m.to_qmat();
    let b: Vec<Rat> = v.0.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let x = q.solve(&b)?;
    if x.iter().all(|c| c.is_integer()) {
        Ok(Some(ZVec(x.into_iter().map(|c| c.to_integer()).collect())))
    } else {
        Ok(None)
    }
}

/// Canonical coset machinery for the finite quotient `Z^n / M*Z^n` of a
/// nonsingular integer matrix. The canonical representative of a class is
/// the unique vector in the residue box of the column-style Hermite normal
/// form of `M`.
#[derive(Debug, Clone)]
pub struct CosetTable {
    /// Upper-triangular column HNF `C = M * V` (same column lattice as `M`).
    col_hnf: IMat,
    index: Int,
}

impl CosetTable {
    pub fn new(m: &IMat) -> Result<CosetTable> {
        let det = m.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        // Row HNF of the transpose gives L = U * M^T lower-triangular, so
        // L^T = M * U^T is an upper-triangular matrix with the same column
        // lattice as M.
        let (l, _) = hermite_normal_form(&m.transpose());
        Ok(CosetTable {
            col_hnf: l.transpose(),
            index: det.abs(),
        })
    }

    /// `|det M|`, the number of cosets.
    pub fn index(&self) -> &Int {
        &self.index
    }

    /// Canonical representative of `v` modulo the column lattice.
    pub fn reduce(&self, v: &ZVec) -> ZVec {
        let n = self.col_hnf.n;
        assert_eq!(v.dim(), n);
        let mut r = v.clone();
        for j in (0..n).rev() {
            let d = &self.col_hnf[(j, j)];
            debug_assert!(d.is_positive());
            let q = r.0[j].div_floor(d);
            if q.is_zero() {
                continue;
            }
            for i in 0..=j {
                let sub = &q * &self.col_hnf[(i, j)];
                r.0[i] -= sub;
            }
        }
        r
    }

    pub fn contains(&self, v: &ZVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// All canonical representatives in deterministic lexicographic order of
    /// their box coordinates.
    pub fn reps(&self) -> Vec<ZVec> {
        let n = self.col_hnf.n;
        let dims: Vec<Int> = (0..n).map(|j| self.col_hnf[(j, j)].clone()).collect();
        let mut out = Vec::new();
        let mut cur = ZVec::zero(n);
        loop {
            out.push(cur.clone());
            // Increment the mixed-radix counter, last coordinate fastest.
            let mut j = n;
            loop {
                if j == 0 {
                    return out;
                }
                j -= 1;
                cur.0[j] += Int::one();
                if cur.0[j] < dims[j] {
                    break;
                }
                cur.0[j] = Int::zero();
            }
        }
    }
}

/// Coset representatives of `Z^n / M*Z^n`, in deterministic order.
pub fn coset_reps(m: &IMat) -> Result<Vec<ZVec>> {
    Ok(CosetTable::new(m)?.reps())
}

/// Basis of the kernel `{x : R x = 0}` of a rational matrix given as rows of
/// length `cols`. Exact Gauss-Jordan elimination; the basis vectors are the
/// standard free-variable parametrization, in column order.
pub fn rational_kernel(rows: &[Vec<Rat>], cols: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = &m[r][j] * &f;
                    m[i][j] = &m[i][j] - &sub;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for c in 0..cols {
            if let Some(pr) = pivot_of_col[c] {
                v[c] = -m[pr][free].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Basis of the intersection of two subspaces of `Q^dim`, each given by a
/// spanning set of row vectors.
pub fn intersect_subspaces(a: &[Vec<Rat>], b: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Solve sum_i x_i a_i - sum_j y_j b_j = 0: kernel of the dim x (|a|+|b|)
    // matrix whose columns are the a_i and -b_j.
    let cols = a.len() + b.len();
    let mut rows = vec![vec![Rat::zero(); cols]; dim];
    for (i, v) in a.iter().enumerate() {
        for k in 0..dim {
            rows[k][i] = v[k].clone();
        }
    }
    for (j, v) in b.iter().enumerate() {
        for k in 0..dim {
            rows[k][a.len() + j] = -v[k].clone();
        }
    }
    let mut out = Vec::new();
    for sol in rational_kernel(&rows, cols) {
        let mut vec = vec![Rat::zero(); dim];
        for (i, v) in a.iter().enumerate() {
            for k in 0..dim {
                let add = &sol[i] * &v[k];
                vec[k] = &vec[k] + &add;
            }
        }
        if vec.iter().any(|c| !c.is_zero()) {
            out.push(vec);
        }
    }
    // The parametrization can repeat directions when the spanning sets are
    // redundant; reduce to an independent set.
    independent_subset(&out, dim)
}

/// Row-reduce a spanning set to an independent basis (deterministic order).
pub fn independent_subset(vecs: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut echelon: Vec<Vec<Rat>> = Vec::new();
    let mut basis = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for e in &echelon {
            let lead = e
                .iter()
                .position(|c: &Rat| !c.is_zero())
                .expect("echelon rows are nonzero");
            if !w[lead].is_zero() {
                let f = &w[lead] / &e[lead];
                for j in 0..dim {
                    let sub = &e[j] * &f;
                    w[j] = &w[j] - &sub;
                }
            }
        }
        if w.iter().any(|c| !c.is_zero()) {
            echelon.push(w);
            basis.push(v.clone());
        }
    }
    basis
}
