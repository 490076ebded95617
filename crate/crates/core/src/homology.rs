//! Exact integer matrices, Smith normal form and the cellular chain complex
//! of a surface.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::{DirectedEdge, SurfaceComplex};
use crate::error::ComplexError;

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntegerMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has the wrong length");
            for (i, &x) in col.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: i64) {
        self.entries[i * self.cols + j] += value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= factor * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = factor * self.get(source, j);
            if !delta.is_zero() {
                self.entries[target * self.cols + j] -= delta;
            }
        }
    }

    /// col[target] -= factor * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = factor * self.get(i, source);
            if !delta.is_zero() {
                self.entries[i * self.cols + target] -= delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }
}

/// Smith normal form `left * m * right = diag(diagonal)`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// Invariant factors `d_1 | d_2 | ...`, padded with zeros to `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    /// Unimodular row transform (`rows x rows`), present when requested.
    pub left: Option<IntegerMatrix>,
    /// Unimodular column transform (`cols x cols`), present when requested.
    pub right: Option<IntegerMatrix>,
}

impl SmithForm {
    /// Nonzero invariant factors that differ from 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal[..self.rank]
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Invariant factors and rank of `m`.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    reduce(m.clone(), false)
}

/// Smith normal form together with the unimodular transforms.
pub fn smith_decomposition(m: &IntegerMatrix) -> SmithForm {
    reduce(m.clone(), true)
}

fn reduce(mut a: IntegerMatrix, track: bool) -> SmithForm {
    let (rows, cols) = (a.rows, a.cols);
    let mut left = track.then(|| IntegerMatrix::identity(rows));
    let mut right = track.then(|| IntegerMatrix::identity(cols));
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        if let Some(l) = left.as_mut() {
            l.swap_rows(t, pi);
        }
        if let Some(r) = right.as_mut() {
            r.swap_cols(t, pj);
        }

        loop {
            // Clear column t and row t below/right of the pivot.
            let mut residue = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.row_axpy(i, t, &q);
                if let Some(l) = left.as_mut() {
                    l.row_axpy(i, t, &q);
                }
                residue |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.col_axpy(j, t, &q);
                if let Some(r) = right.as_mut() {
                    r.col_axpy(j, t, &q);
                }
                residue |= !a.get(t, j).is_zero();
            }
            if residue {
                // A remainder smaller than the pivot survived; make it the pivot.
                let (pi, pj) = min_abs_in_cross(&a, t);
                a.swap_rows(t, pi);
                a.swap_cols(t, pj);
                if let Some(l) = left.as_mut() {
                    l.swap_rows(t, pi);
                }
                if let Some(r) = right.as_mut() {
                    r.swap_cols(t, pj);
                }
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let pivot = a.get(t, t).clone();
            let bad_row =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::from(-1);
                    a.row_axpy(t, i, &one);
                    if let Some(l) = left.as_mut() {
                        l.row_axpy(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            if let Some(l) = left.as_mut() {
                l.negate_row(t);
            }
        }
        rank += 1;
    }

    let diagonal = (0..rows.min(cols)).map(|i| a.get(i, i).clone()).collect();
    SmithForm {
        diagonal,
        rank,
        left,
        right,
    }
}

fn min_abs_entry(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let unit = ax.is_one();
                best = Some((i, j, ax));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn min_abs_in_cross(a: &IntegerMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t, a.get(t, t).abs());
    let candidates = (t + 1..a.rows)
        .map(|i| (i, t))
        .chain((t + 1..a.cols).map(|j| (t, j)));
    for (i, j) in candidates {
        let x = a.get(i, j);
        if !x.is_zero() && x.abs() < best.2 {
            best = (i, j, x.abs());
        }
    }
    (best.0, best.1)
}

pub fn rank(m: &IntegerMatrix) -> usize {
    smith_normal_form(m).rank
}

/// An integer solution `x` of `m x = b`, if one exists.
pub fn solve_integer(m: &IntegerMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len(), "dimension mismatch");
    let snf = smith_decomposition(m);
    let left = snf.left.as_ref().unwrap();
    let right = snf.right.as_ref().unwrap();
    let c = left.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let d = &snf.diagonal[i];
            if !ci.is_multiple_of(d) {
                return None;
            }
            y[i] = ci / d;
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(right.mul_vec(&y))
}

/// Cellular boundary maps `d2: C2 -> C1` (faces to edges) and
/// `d1: C1 -> C0` (edges to vertices).
///
/// A face contributes +1 on edges it traverses forward and -1 on edges it
/// traverses reversed; an edge runs from the tail to the head of its forward
/// side.
pub fn boundary_matrices(
    complex: &SurfaceComplex,
) -> Result<(IntegerMatrix, IntegerMatrix), ComplexError> {
    let topo = complex.topology()?;
    let mut d2 = IntegerMatrix::zeros(complex.num_edges(), complex.num_faces());
    for (f, face) in complex.faces().iter().enumerate() {
        for side in &face.sides {
            d2.add_to(side.edge, f, if side.reversed { -1 } else { 1 });
        }
    }
    let mut d1 = IntegerMatrix::zeros(topo.num_vertices(), complex.num_edges());
    for e in 0..complex.num_edges() {
        let forward = DirectedEdge::new(e, false);
        d1.add_to(topo.head(forward), e, 1);
        d1.add_to(topo.tail(forward), e, -1);
    }
    Ok((d2, d1))
}

/// Rank of `ker d1 / im d2`.
pub fn first_betti_number(complex: &SurfaceComplex) -> Result<usize, ComplexError> {
    let (d2, d1) = boundary_matrices(complex)?;
    Ok(complex.num_edges() - rank(&d1) - rank(&d2))
}

pub(crate) fn to_i64_vec(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(ToPrimitive::to_i64).collect()
}
