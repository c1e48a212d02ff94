//! Exact integer linear algebra over [`BigInt`].
//!
//! The workhorse is [`smith_normal_form`], which feeds
//! [`QuotientPresentation`]: a finitely generated abelian group `Z^k / L`
//! given by relation rows spanning `L`, with canonical coset coordinates.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds from rows; `cols` fixes the width when `rows` is empty.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned().map(Into::into));
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Matrix times column vector.
    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::Dimension {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += x * a;
            }
        }
        Ok(out)
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.data.extend(row);
        self.rows += 1;
        Ok(())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = q * &self[(src, j)];
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = q * &self[(i, src)];
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        f.write_str("]")
    }
}

/// `u * m * v = s`, with `v_inv = v^-1` tracked alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Smith {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

/// Smith normal form by row/column gcd elimination, always pivoting on an
/// entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let col_add = |a: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, dst, src, q: &BigInt| {
        a.add_col_multiple(dst, src, q);
        v.add_col_multiple(dst, src, q);
        // inverse of the column operation, applied on the left of v_inv
        v_inv.add_row_multiple(src, dst, &-q);
    };

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&a, t, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&pivot);
                col_add(&mut a, &mut v, &mut v_inv, j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                let line = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                let (pi, pj) = min_abs_entry(&a, t, line).expect("pivot is nonzero");
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
                continue;
            }
            // row t and column t are clear; enforce divisibility of the rest
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Smith {
        u,
        s: a,
        v,
        v_inv,
        rank: t,
    }
}

fn min_abs_entry(a: &IntMatrix, _t: usize, positions: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    positions
        .filter(|&p| !a[p].is_zero())
        .min_by(|&p, &q| a[p].abs().cmp(&a[q].abs()))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension {
            expected: m.rows,
            found: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    Ok(sign * &a[(n - 1, n - 1)])
}

/// An integer solution `z` of `m * z = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != m.rows {
        return Err(Error::Dimension {
            expected: m.rows,
            found: b.len(),
        });
    }
    let smith = smith_normal_form(m);
    // s * (v^-1 z) = u b
    let c = smith.u.apply(b)?;
    let mut w = vec![BigInt::zero(); m.cols];
    for (i, ci) in c.iter().enumerate() {
        if i < smith.rank {
            let d = &smith.s[(i, i)];
            if !ci.is_multiple_of(d) {
                return Ok(None);
            }
            w[i] = ci / d;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(smith.v.apply(&w)?))
}

/// `Z^k / L` where `L` is spanned by the rows of a relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientPresentation {
    rank: usize,
    relations: IntMatrix,
    smith: Smith,
    /// Length `rank`: `d_i` for the first `smith.rank` coordinates, then 0.
    moduli: Vec<BigInt>,
}

impl QuotientPresentation {
    pub fn new(rank: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != rank {
            return Err(Error::Dimension {
                expected: rank,
                found: relations.cols(),
            });
        }
        let smith = smith_normal_form(&relations);
        let moduli = (0..rank)
            .map(|i| {
                if i < smith.rank {
                    smith.s[(i, i)].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        Ok(QuotientPresentation {
            rank,
            relations,
            smith,
            moduli,
        })
    }

    /// `Z^k` with no relations.
    pub fn free(rank: usize) -> Self {
        QuotientPresentation::new(rank, IntMatrix::zeros(0, rank)).expect("widths agree")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn smith(&self) -> &Smith {
        &self.smith
    }

    /// Per-coordinate moduli of [`QuotientPresentation::coset_reduce`]:
    /// `d_i` (possibly 1) on torsion coordinates, 0 on free ones.
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Invariant factors other than 1, with a 0 for each free summand:
    /// `Z/2 + Z` gives `[2, 0]`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.moduli.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.moduli.iter().filter(|d| d.is_zero()).count()
    }

    pub fn torsion(&self) -> Vec<BigInt> {
        self.moduli
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().all(One::is_one)
    }

    /// Canonical coordinates in `prod Z/d_i x Z^f`: equal exactly when the
    /// inputs differ by a relation-lattice vector.
    pub fn coset_reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if x.len() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                found: x.len(),
            });
        }
        let mut y = self.smith.v.left_apply(x)?;
        for (yi, d) in y.iter_mut().zip(&self.moduli) {
            if !d.is_zero() {
                *yi = yi.mod_floor(d);
            }
        }
        Ok(y)
    }

    /// Canonical representative of the coset of `x`, in original coordinates.
    pub fn representative(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        let y = self.coset_reduce(x)?;
        self.smith.v_inv.left_apply(&y)
    }

    pub fn is_zero_in_quotient(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.coset_reduce(x)?.iter().all(Zero::is_zero))
    }
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows).unwrap()
    }

    fn check_smith(m: &IntMatrix) -> Smith {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.s);
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        assert_eq!(determinant(&s.u).unwrap().abs(), BigInt::one());
        assert_eq!(determinant(&s.v).unwrap().abs(), BigInt::one());
        s
    }

    #[test]
    fn smith_examples() {
        let s = check_smith(&IntMatrix::identity(3));
        assert_eq!(s.invariant_factors(), to_big(&[1, 1, 1]));

        let s = check_smith(&IntMatrix::zeros(2, 3));
        assert!(s.s.is_zero());
        assert_eq!(s.rank, 0);

        let s = check_smith(&mat(2, &[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.invariant_factors(), to_big(&[2, 4]));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(
            determinant(&mat(2, &[vec![2, 4], vec![6, 8]])).unwrap(),
            BigInt::from(-8)
        );
        assert_eq!(
            determinant(&mat(3, &[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]])).unwrap(),
            BigInt::from(-2)
        );
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn coset_reduce_examples() {
        let p = QuotientPresentation::new(2, mat(2, &[vec![2, 0]])).unwrap();
        assert_eq!(p.coset_reduce(&to_big(&[3, 5])).unwrap(), to_big(&[1, 5]));
        assert_eq!(p.coset_reduce(&to_big(&[0, 0])).unwrap(), to_big(&[0, 0]));

        let p = QuotientPresentation::new(2, IntMatrix::identity(2)).unwrap();
        assert!(p.is_zero_in_quotient(&to_big(&[7, -3])).unwrap());
        assert!(p.is_trivial());

        assert!(matches!(p.coset_reduce(&to_big(&[1])), Err(Error::Dimension { .. })));
    }

    #[test]
    fn quotient_membership() {
        let z2 = QuotientPresentation::new(1, mat(1, &[vec![2]])).unwrap();
        assert!(z2.is_zero_in_quotient(&to_big(&[4])).unwrap());
        assert!(!z2.is_zero_in_quotient(&to_big(&[3])).unwrap());

        let p = QuotientPresentation::new(2, mat(2, &[vec![1, 1], vec![0, 2]])).unwrap();
        assert!(p.is_zero_in_quotient(&to_big(&[1, -1])).unwrap());
        assert_eq!(p.invariant_factors(), to_big(&[2]));
    }

    #[test]
    fn representatives_are_canonical() {
        let p = QuotientPresentation::new(2, mat(2, &[vec![2, 4], vec![6, 8]])).unwrap();
        let a = p.representative(&to_big(&[5, 3])).unwrap();
        let b = p.representative(&to_big(&[5 + 2 + 6, 3 + 4 + 8])).unwrap();
        assert_eq!(a, b);
        let diff: Vec<BigInt> = a.iter().zip(to_big(&[5, 3])).map(|(x, y)| x - y).collect();
        assert!(p.is_zero_in_quotient(&diff).unwrap());
    }

    #[test]
    fn solve_integer_systems() {
        let m = mat(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(solve(&m, &to_big(&[4, 9])).unwrap(), Some(to_big(&[2, 3])));
        assert_eq!(solve(&m, &to_big(&[1, 0])).unwrap(), None);
    }
}
