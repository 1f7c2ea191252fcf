use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Dense row-major matrix over Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(MatrixQ {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, rhs: &MatrixQ) -> Result<MatrixQ> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = MatrixQ::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(l, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for MatrixQ {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatrixQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Display for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|c| c.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Exact determinant: rows are scaled to integers, then fraction-free
/// (Bareiss) elimination runs over Z with exact divisions.
pub fn determinant(m: &MatrixQ) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            scale *= &l;
            row.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(Rational::zero()),
            }
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                row[j] = (&pivot_row[k] * &row[j] - &row[k] * &pivot_row[j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = Rational::new(a[n - 1][n - 1].clone(), scale);
    Ok(if negate { -det } else { det })
}

/// Outcome of [`linear_solve`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// Consistent with a `nullity`-dimensional solution space; `particular`
    /// sets every free variable to zero.
    Underdetermined {
        particular: Vec<Rational>,
        nullity: usize,
    },
    Inconsistent,
}

impl Solution {
    pub fn any(&self) -> Option<&[Rational]> {
        match self {
            Solution::Unique(x) | Solution::Underdetermined { particular: x, .. } => Some(x),
            Solution::Inconsistent => None,
        }
    }
}

/// Solves `m x = b` exactly by Gauss-Jordan elimination over Q.
pub fn linear_solve(m: &MatrixQ, b: &[Rational]) -> Result<Solution> {
    if b.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            m.rows,
            b.len()
        )));
    }
    let cols = m.cols;
    let mut a: Vec<Vec<Rational>> = (0..m.rows)
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == a.len() {
            break;
        }
        let Some(p) = (row..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(p, row);
        let inv = a[row][col].recip();
        for v in a[row][col..].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (j, pv) in pivot_row.iter().enumerate().skip(col) {
                if !pv.is_zero() {
                    r[j] -= &f * pv;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[cols].is_zero()) {
        return Ok(Solution::Inconsistent);
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    let nullity = cols - pivots.len();
    Ok(if nullity == 0 {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined {
            particular: x,
            nullity,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> MatrixQ {
        MatrixQ::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&m(&[&[7]])).unwrap(), int(7));
        assert_eq!(determinant(&m(&[&[1, 2], &[3, 4]])).unwrap(), int(-2));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])).unwrap(), int(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])).unwrap(), int(0));
        assert!(matches!(
            determinant(&MatrixQ::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn solve_statuses() {
        let b = vec![rat(1, 2), int(-3), int(4)];
        assert_eq!(
            linear_solve(&MatrixQ::identity(3), &b).unwrap(),
            Solution::Unique(b.clone())
        );
        assert_eq!(
            linear_solve(&MatrixQ::zeros(2, 2), &[int(1), int(0)]).unwrap(),
            Solution::Inconsistent
        );
        let under = linear_solve(&m(&[&[1, 1]]), &[int(2)]).unwrap();
        assert_eq!(
            under,
            Solution::Underdetermined {
                particular: vec![int(2), int(0)],
                nullity: 1
            }
        );
        assert!(linear_solve(&MatrixQ::identity(2), &[int(1)]).is_err());
    }

    #[test]
    fn structure_fit_k2() {
        // r(x) = a x^2 + b x + c through (k/4, k^2/4 - k/4), (1/16, 3/128), (9/16, -45/128), k = 2
        let rows = vec![
            vec![int(4), int(8), int(16)],
            vec![int(1), int(16), int(256)],
            vec![int(81), int(144), int(256)],
        ];
        let sol = linear_solve(&MatrixQ::from_rows(rows).unwrap(), &[int(8), int(6), int(-90)])
            .unwrap();
        assert_eq!(
            sol,
            Solution::Unique(vec![rat(-206, 7), rat(247, 14), rat(-27, 28)])
        );
    }

    fn square(n: usize) -> impl Strategy<Value = MatrixQ> {
        proptest::collection::vec(-4i64..5, n * n).prop_map(move |v| {
            MatrixQ::from_rows(v.chunks(n).map(|r| r.iter().map(|&x| int(x)).collect()).collect())
                .unwrap()
        })
    }

    proptest! {
        #[test]
        fn det_multiplicative(a in square(4), b in square(4)) {
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(
                determinant(&ab).unwrap(),
                determinant(&a).unwrap() * determinant(&b).unwrap()
            );
        }

        #[test]
        fn solutions_satisfy(a in square(3), b in proptest::collection::vec(-5i64..5, 3)) {
            let b: Vec<Rational> = b.into_iter().map(int).collect();
            if let Some(x) = linear_solve(&a, &b).unwrap().any() {
                prop_assert_eq!(a.mul_vec(x).unwrap(), b);
            }
        }
    }
}
