//! Fraction-free Gauss-Jordan elimination over checked `i128` integers.
//!
//! Rational input rows are cleared of denominators by multiplying each row
//! with the lcm of its denominators; row scaling leaves the solution set and
//! the null space unchanged. Rows are kept primitive (gcd 1) after every
//! update so entries stay small.

use crate::rational::{gcd_i128, ArithmeticError, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct IntMatrix {
    rows: Vec<Vec<i128>>,
    cols: usize,
}

/// Reduced row echelon form: `pivots[i]` is the pivot column of row `i`.
#[derive(Debug, Clone)]
pub(crate) struct Echelon {
    pub rows: Vec<Vec<i128>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn checked(v: Option<i128>) -> Result<i128, ArithmeticError> {
    v.ok_or(ArithmeticError::Overflow)
}

fn make_primitive(row: &mut [i128]) {
    let g = row.iter().fold(0i128, |g, &x| gcd_i128(g, x));
    if g > 1 {
        row.iter_mut().for_each(|x| *x /= g);
    }
}

impl IntMatrix {
    pub fn from_rational_rows(rows: &[Vec<Rational>]) -> Result<Self, ArithmeticError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            debug_assert_eq!(row.len(), cols);
            let mut lcm: i128 = 1;
            for r in row {
                let d = r.denom() as i128;
                lcm = checked(lcm.checked_mul(d / gcd_i128(lcm, d)))?;
            }
            let mut int_row = Vec::with_capacity(cols);
            for r in row {
                let v = checked((r.numer() as i128).checked_mul(lcm / r.denom() as i128))?;
                int_row.push(v);
            }
            make_primitive(&mut int_row);
            out.push(int_row);
        }
        Ok(IntMatrix { rows: out, cols })
    }

    /// Gauss-Jordan to reduced echelon form. Pivot columns are taken left to
    /// right, so free columns come out in input order.
    pub fn echelon(mut self) -> Result<Echelon, ArithmeticError> {
        let n_rows = self.rows.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == n_rows {
                break;
            }
            // smallest nonzero magnitude keeps growth down
            let Some(p) = (r..n_rows)
                .filter(|&i| self.rows[i][c] != 0)
                .min_by_key(|&i| self.rows[i][c].unsigned_abs())
            else {
                continue;
            };
            self.rows.swap(r, p);
            if self.rows[r][c] < 0 {
                self.rows[r].iter_mut().for_each(|x| *x = -*x);
            }
            let pivot_row = self.rows[r].clone();
            let a = pivot_row[c];
            for i in 0..n_rows {
                if i == r || self.rows[i][c] == 0 {
                    continue;
                }
                let b = self.rows[i][c];
                let g = gcd_i128(a, b);
                let (ka, kb) = (a / g, b / g);
                for (x, &p) in self.rows[i].iter_mut().zip(&pivot_row) {
                    let lhs = checked(x.checked_mul(ka))?;
                    let rhs = checked(p.checked_mul(kb))?;
                    *x = checked(lhs.checked_sub(rhs))?;
                }
                make_primitive(&mut self.rows[i]);
            }
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon {
            rows: self.rows,
            pivots,
            cols: self.cols,
        })
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// One null-space vector per free column, with that column set to 1 and
    /// the other free columns to 0.
    pub fn null_space(&self) -> Result<Vec<Vec<Rational>>, ArithmeticError> {
        let mut basis = Vec::new();
        for f in self.free_columns() {
            let mut v = vec![Rational::ZERO; self.cols];
            v[f] = Rational::ONE;
            for (i, &p) in self.pivots.iter().enumerate() {
                let num = -self.rows[i][f];
                let den = self.rows[i][p];
                v[p] = Rational::new(
                    i64::try_from(num).map_err(|_| ArithmeticError::Overflow)?,
                    i64::try_from(den).map_err(|_| ArithmeticError::Overflow)?,
                )?;
            }
            basis.push(v);
        }
        Ok(basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &[&[i64]]) -> Vec<Vec<Rational>> {
        m.iter()
            .map(|r| r.iter().map(|&x| Rational::integer(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_blast_matrix() {
        // columns r, E, rho, t; rows M, L, T
        let m = rows(&[&[0, 1, 1, 0], &[1, 2, -3, 0], &[0, -2, 0, 1]]);
        let e = IntMatrix::from_rational_rows(&m).unwrap().echelon().unwrap();
        assert_eq!(e.rank(), 3);
        assert_eq!(e.free_columns(), vec![3]);
        let ns = e.null_space().unwrap();
        let r = |n, d| Rational::new(n, d).unwrap();
        assert_eq!(ns, vec![vec![r(-5, 2), r(1, 2), r(-1, 2), r(1, 1)]]);
    }

    #[test]
    fn rational_rows_are_cleared() {
        let half = Rational::new(1, 2).unwrap();
        let third = Rational::new(1, 3).unwrap();
        let m = IntMatrix::from_rational_rows(&[vec![half, third]]).unwrap();
        assert_eq!(m.rows, vec![vec![3, 2]]);
    }

    #[test]
    fn zero_matrix_has_full_null_space() {
        let m = rows(&[&[0, 0], &[0, 0]]);
        let e = IntMatrix::from_rational_rows(&m).unwrap().echelon().unwrap();
        assert_eq!(e.rank(), 0);
        assert_eq!(e.null_space().unwrap().len(), 2);
    }
}
