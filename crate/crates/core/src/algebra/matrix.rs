//! Integer matrices, exact rational solves and fraction-free determinants.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{gcd, q_div, q_mul, q_sub, Rational};
use super::wpoly::WPoly;
use crate::error::{Error, Result};

/// Integral domain operations needed by Bareiss elimination.
pub trait BareissRing: Clone {
    fn vanishes(&self) -> bool;
    fn times(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Exact quotient; callers only divide when the quotient is known to exist.
    fn exact_div(&self, rhs: &Self) -> Self;
}

impl BareissRing for BigInt {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % rhs)));
        self / rhs
    }
}

impl BareissRing for WPoly {
    fn vanishes(&self) -> bool {
        WPoly::is_zero(self)
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn exact_div(&self, rhs: &Self) -> Self {
        WPoly::div_exact(self, rhs).expect("Bareiss division is exact")
    }
}

/// Result of fraction-free elimination: the successive pivots, each equal
/// (up to the sign of the row permutation) to a leading principal minor.
struct Elimination<R> {
    pivots: Vec<R>,
    negated: bool,
    complete: bool,
}

/// Bareiss elimination with lazily updated rows.
///
/// A row whose entry in the current pivot column is zero is not touched; its
/// stored values stay valid up to the factor `p_level / p_since`, which is
/// applied only when the row is next needed. On banded matrices this keeps the
/// work proportional to the band.
fn bareiss<R: BareissRing>(mut rows: Vec<Vec<R>>, one: R, pivoting: bool) -> Elimination<R> {
    let n = rows.len();
    let mut pivots: Vec<R> = Vec::with_capacity(n);
    let mut prev = vec![one.clone()];
    let mut since = vec![0usize; n];
    let mut negated = false;
    for k in 0..n {
        let mut pr = k;
        while pr < n && rows[pr][k].vanishes() {
            if !pivoting {
                return Elimination { pivots, negated, complete: false };
            }
            pr += 1;
        }
        if pr == n {
            return Elimination { pivots, negated, complete: false };
        }
        if pr != k {
            rows.swap(pr, k);
            since.swap(pr, k);
            negated = !negated;
        }
        catch_up(&mut rows[k], k, &prev, &mut since[k]);
        let pivot = rows[k][k].clone();
        let (head, tail) = rows.split_at_mut(k + 1);
        let prow = &head[k];
        for (off, row) in tail.iter_mut().enumerate() {
            let i = k + 1 + off;
            if row[k].vanishes() {
                continue;
            }
            catch_up(row, k, &prev, &mut since[i]);
            let factor = row[k].clone();
            for j in (k + 1)..n {
                let a = pivot.times(&row[j]);
                let b = factor.times(&prow[j]);
                row[j] = a.minus(&b).exact_div(&prev[k]);
            }
            row[k] = pivot.minus(&pivot);
            since[i] = k + 1;
        }
        prev.push(pivot.clone());
        pivots.push(pivot);
    }
    Elimination { pivots, negated, complete: true }
}

fn catch_up<R: BareissRing>(row: &mut [R], level: usize, prev: &[R], since: &mut usize) {
    if *since == level {
        return;
    }
    let (num, den) = (&prev[level], &prev[*since]);
    for x in row.iter_mut().skip(level) {
        if !x.vanishes() {
            *x = x.times(num).exact_div(den);
        }
    }
    *since = level;
}

fn determinant_of<R: BareissRing>(rows: Vec<Vec<R>>, one: R, zero: R) -> R {
    if rows.is_empty() {
        return one;
    }
    let e = bareiss(rows, one, true);
    if !e.complete {
        return zero;
    }
    let det = e.pivots.last().unwrap().clone();
    if e.negated {
        det.negated()
    } else {
        det
    }
}

/// A square matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(IntMatrix { n, data: rows.into_iter().flatten().map(BigInt::from).collect() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// The principal submatrix on `indices`, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let mut m = Self::zeros(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| !self.get(i, j).is_zero())
                    .map(|j| Rational::from_integer(self.get(i, j).clone()) * &x[j])
                    .sum()
            })
            .collect()
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        determinant_of(self.rows(), BigInt::one(), BigInt::zero())
    }

    /// Leading principal minors `det_1, ..., det_k`, stopping after the first
    /// zero minor.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        let e = bareiss(self.rows(), BigInt::one(), false);
        let mut out = e.pivots;
        if !e.complete {
            out.push(BigInt::zero());
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Whether every leading principal minor has sign `(-1)^k`.
pub fn check_negative_definite(m: &IntMatrix) -> Result<bool> {
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let pivots = symmetric_pivots(m);
    Ok(pivots.len() == m.dim() && pivots.iter().all(Signed::is_negative))
}

/// Pivots of symmetric Gaussian elimination on a symmetric matrix, taking
/// diagonal pivots in minimum-degree order and stopping at the first zero
/// pivot. When all `n` pivots exist their product is the determinant, and
/// the matrix is negative definite exactly when every pivot is negative.
pub fn symmetric_pivots(m: &IntMatrix) -> Vec<Rational> {
    let n = m.dim();
    let mut rows: Vec<BTreeMap<usize, Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| !m.get(i, j).is_zero())
                .map(|j| (j, Rational::from_integer(m.get(i, j).clone())))
                .collect()
        })
        .collect();
    let mut alive = vec![true; n];
    let mut pivots = Vec::with_capacity(n);
    for _ in 0..n {
        let p = (0..n)
            .filter(|&i| alive[i])
            .min_by_key(|&i| rows[i].len())
            .expect("a vertex remains");
        let Some(d) = rows[p].get(&p).cloned().filter(|d| !d.is_zero()) else {
            return pivots;
        };
        alive[p] = false;
        let nbrs: Vec<(usize, Rational)> = rows[p].iter().filter(|(j, _)| **j != p).map(|(j, v)| (*j, v.clone())).collect();
        for (i, vi) in &nbrs {
            rows[*i].remove(&p);
            let f = q_div(vi, &d);
            for (j, vj) in &nbrs {
                let entry = rows[*i].entry(*j).or_insert_with(Rational::zero);
                *entry = q_sub(entry, &q_mul(&f, vj));
                if entry.is_zero() {
                    rows[*i].remove(j);
                }
            }
        }
        pivots.push(d);
    }
    pivots
}

/// Exact solution of `m x = rhs` by sparse fraction-free elimination.
///
/// Rows stay integral (the right-hand side is scaled to a common
/// denominator first) and are divided by their content after each update.
pub fn solve_rational_system(m: &IntMatrix, rhs: &[Rational]) -> Result<Vec<Rational>> {
    let n = m.dim();
    if rhs.len() != n {
        return Err(Error::NotSquare);
    }
    let t = rhs.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    // sparse rows: (column, value) sorted by column, right-hand side last
    let mut rows: Vec<Row> = (0..n)
        .map(|i| Row {
            entries: (0..n).filter(|&j| !m.get(i, j).is_zero()).map(|j| (j, m.get(i, j).clone())).collect(),
            rhs: rhs[i].numer() * (&t / rhs[i].denom()),
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    for k in 0..n {
        // choose the sparsest available row with a nonzero in column k
        let pick = (k..n)
            .filter(|&r| rows[order[r]].at(k).is_some())
            .min_by_key(|&r| rows[order[r]].entries.len())
            .ok_or(Error::SingularMatrix)?;
        order.swap(k, pick);
        let p = order[k];
        let prow = rows[p].clone();
        let pivot = prow.at(k).unwrap();
        for &r in &order[k + 1..] {
            if let Some(e) = rows[r].at(k) {
                let g = gcd(pivot, e);
                rows[r] = rows[r].combine(&(pivot / &g), &prow, &(e / &g));
            }
        }
    }
    let mut x = vec![Rational::zero(); n];
    for k in (0..n).rev() {
        let row = &rows[order[k]];
        let mut acc = Rational::from_integer(row.rhs.clone());
        let mut diag = BigInt::zero();
        for (j, v) in &row.entries {
            if *j == k {
                diag = v.clone();
            } else if *j > k {
                acc = q_sub(&acc, &q_mul(&x[*j], &Rational::from_integer(v.clone())));
            }
        }
        x[k] = q_div(&acc, &Rational::from_integer(diag * &t));
    }
    Ok(x)
}

#[derive(Clone)]
struct Row {
    entries: Vec<(usize, BigInt)>,
    rhs: BigInt,
}

impl Row {
    fn at(&self, col: usize) -> Option<&BigInt> {
        self.entries.iter().find(|(j, _)| *j == col).map(|(_, v)| v)
    }

    /// `a * self - f * other`, dropping zeros and dividing out the content.
    fn combine(&self, a: &BigInt, other: &Row, f: &BigInt) -> Row {
        let (row, prow) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(row.len() + prow.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < prow.len() {
            if j == prow.len() || (i < row.len() && row[i].0 < prow[j].0) {
                out.push((row[i].0, a * &row[i].1));
                i += 1;
            } else if i == row.len() || prow[j].0 < row[i].0 {
                out.push((prow[j].0, -(f * &prow[j].1)));
                j += 1;
            } else {
                let v = a * &row[i].1 - f * &prow[j].1;
                if !v.is_zero() {
                    out.push((row[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        let rhs = a * &self.rhs - f * &other.rhs;
        let c = out.iter().fold(rhs.abs(), |c, (_, v)| gcd(&c, v));
        if c.is_zero() || c.is_one() {
            Row { entries: out, rhs }
        } else {
            Row { entries: out.into_iter().map(|(j, v)| (j, v / &c)).collect(), rhs: rhs / &c }
        }
    }
}

/// Determinant of a square matrix of polynomials sharing one scale.
///
/// Dimensions up to 4 use cofactor expansion; larger ones use fraction-free
/// elimination with exact polynomial division.
pub fn poly_determinant(m: &[Vec<WPoly>]) -> Result<WPoly> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare);
    }
    let scale = m.first().and_then(|r| r.first()).map(|p| p.scale()).unwrap_or(1);
    if let Some(p) = m.iter().flatten().find(|p| p.scale() != scale) {
        return Err(Error::ScaleMismatch(format!(
            "matrix entries use scales {scale} and {}",
            p.scale()
        )));
    }
    if n <= 4 {
        return Ok(cofactor_determinant(m, scale));
    }
    let w = bandwidth(m);
    if w <= 3 {
        return Ok(banded_determinant(m, w, scale));
    }
    let det = determinant_of(m.to_vec(), WPoly::one(scale), WPoly::zero(scale));
    // keep the declared scale even when the quotient was computed at a finer one
    Ok(det.rescaled(scale).unwrap_or(det))
}

fn bandwidth(m: &[Vec<WPoly>]) -> usize {
    let mut w = 0;
    for (i, row) in m.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            if !p.is_zero() {
                w = w.max(i.abs_diff(j));
            }
        }
    }
    w
}

/// Determinant of a matrix whose nonzero entries satisfy `|i - j| <= w`,
/// summing over band-respecting permutations row by row. A state records
/// which of the columns `i - w .. i + w` are taken; columns before 0 count
/// as taken.
fn banded_determinant(m: &[Vec<WPoly>], w: usize, scale: u64) -> WPoly {
    let n = m.len();
    let full = (1u32 << w) - 1;
    let mut states: BTreeMap<u32, WPoly> = BTreeMap::from([(full, WPoly::one(scale))]);
    for (i, row) in m.iter().enumerate() {
        let mut next: BTreeMap<u32, WPoly> = BTreeMap::new();
        for (&mask, acc) in &states {
            for b in 0..=2 * w {
                let Some(col) = (i + b).checked_sub(w).filter(|&c| c < n) else { continue };
                let used = mask | (1 << b);
                if mask & (1 << b) != 0 || used & 1 == 0 || row[col].is_zero() {
                    continue;
                }
                let term = acc * &row[col];
                let term = if (mask >> (b + 1)).count_ones() % 2 == 1 { -term } else { term };
                let slot = next.entry(used >> 1).or_insert_with(|| WPoly::zero(scale));
                *slot = &*slot + &term;
            }
        }
        states = next;
    }
    states.remove(&full).unwrap_or_else(|| WPoly::zero(scale))
}

/// Laplace expansion along the first row.
pub fn cofactor_determinant(m: &[Vec<WPoly>], scale: u64) -> WPoly {
    let n = m.len();
    if n == 0 {
        return WPoly::one(scale);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = WPoly::zero(scale);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<WPoly>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &m[0][j] * &cofactor_determinant(&minor, scale);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn solve_examples() {
        let m = IntMatrix::from_rows(vec![vec![-2]]).unwrap();
        assert_eq!(solve_rational_system(&m, &[int(-2)]).unwrap(), vec![int(1)]);

        let id = IntMatrix::identity(3);
        let v = vec![rat(1, 2), int(-3), int(0)];
        assert_eq!(solve_rational_system(&id, &v).unwrap(), v);

        // a_i - 1 = x_i for the A_{5,3} chain
        let m = IntMatrix::from_rows(vec![vec![-2, 1], vec![1, -3]]).unwrap();
        let x = solve_rational_system(&m, &[int(0), int(1)]).unwrap();
        // Cramer: det = 5, x1 = (0*-3 - 1*1)/5, x2 = (-2*1 - 0*1)/5
        assert_eq!(x, vec![rat(-1, 5), rat(-2, 5)]);
        assert_eq!(x.iter().map(|v| v + int(1)).collect::<Vec<_>>(), vec![rat(4, 5), rat(3, 5)]);

        let sing = IntMatrix::from_rows(vec![vec![-1, 1], vec![1, -1]]).unwrap();
        assert_eq!(solve_rational_system(&sing, &[int(0), int(0)]), Err(Error::SingularMatrix));
    }

    #[test]
    fn negative_definite_examples() {
        let m = IntMatrix::from_rows(vec![vec![-2]]).unwrap();
        assert!(check_negative_definite(&m).unwrap());
        let m = IntMatrix::from_rows(vec![vec![-1, 1], vec![1, -1]]).unwrap();
        assert!(!check_negative_definite(&m).unwrap());
        let tri = IntMatrix::from_rows(vec![
            vec![-1, 1, 1, 1],
            vec![1, -2, 0, 0],
            vec![1, 0, -3, 0],
            vec![1, 0, 0, -7],
        ])
        .unwrap();
        assert!(check_negative_definite(&tri).unwrap());
        assert_eq!(tri.determinant(), BigInt::one());
        let asym = IntMatrix::from_rows(vec![vec![-2, 1], vec![0, -2]]).unwrap();
        assert_eq!(check_negative_definite(&asym), Err(Error::NotSymmetric));
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = IntMatrix::from_rows(vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]).unwrap();
        // 0*(0*8 - 3*-3) - 1*(1*8 - 3*4) + 2*(1*-3 - 0*4) = 4 - 6
        assert_eq!(m.determinant(), BigInt::from(-2));
    }

    #[test]
    fn poly_determinant_examples() {
        let k1 = WPoly::geometric(5, &rat(4, 5), 2).unwrap();
        let k2 = WPoly::geometric(5, &rat(3, 5), 3).unwrap();
        assert_eq!(poly_determinant(&[vec![k1.clone()]]).unwrap(), k1);
        let m = vec![
            vec![k1.clone(), -WPoly::z_term(5, &int(1), 1).unwrap()],
            vec![-WPoly::z_term(5, &int(1), 1).unwrap(), k2.clone()],
        ];
        let expected = &(&k2 * &k1) - &WPoly::z_term(5, &int(2), 1).unwrap();
        assert_eq!(poly_determinant(&m).unwrap(), expected);
        let id: Vec<Vec<WPoly>> = (0..6)
            .map(|i| (0..6).map(|j| WPoly::constant(1, i64::from(i == j))).collect())
            .collect();
        assert_eq!(poly_determinant(&id).unwrap(), WPoly::one(1));
        let mixed = vec![vec![WPoly::one(1), WPoly::one(2)], vec![WPoly::one(1), WPoly::one(1)]];
        assert!(matches!(poly_determinant(&mixed), Err(Error::ScaleMismatch(_))));
    }

    #[test]
    fn banded_agrees_with_elimination() {
        let mut seed = 7u64;
        let mut next = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as i64
        };
        for n in 1..9 {
            for w in 0..4 {
                let m: Vec<Vec<WPoly>> = (0..n)
                    .map(|i: usize| {
                        (0..n)
                            .map(|j: usize| {
                                if i.abs_diff(j) > w || next() % 4 == 0 {
                                    WPoly::zero(3)
                                } else {
                                    WPoly::from_terms(3, (0..3).map(|_| (next() % 7 - 2, BigInt::from(next() % 5 - 2))))
                                }
                            })
                            .collect()
                    })
                    .collect();
                let general = determinant_of(m.clone(), WPoly::one(3), WPoly::zero(3));
                assert_eq!(banded_determinant(&m, w, 3), general, "n = {n}, w = {w}");
            }
        }
    }
}
