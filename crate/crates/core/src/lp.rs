//! Exact feasibility of `{ x >= 0 : A x = b }` by the two-phase simplex
//! method's first phase, with Bland's rule.
//!
//! The tableau is kept integral with a shared positive denominator and
//! updated by fraction-free (Bareiss) pivoting, so every intermediate value
//! is exact and divisions are exact integer divisions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Integral tableau; the represented value of entry `(i, j)` is
/// `cells[i][j] / denom`. Row `m` is the phase-one objective.
struct Tableau {
    rows: usize,
    cols: usize,
    cells: Vec<Vec<BigInt>>,
    denom: BigInt,
    basis: Vec<usize>,
}

impl Tableau {
    /// Variables are the `n` structural columns followed by `m` artificials;
    /// the last column holds the right-hand side.
    fn phase_one(a: &[Vec<BigInt>], b: &[BigInt]) -> Self {
        let m = a.len();
        let n = a.first().map_or(0, |r| r.len());
        let cols = n + m + 1;
        let mut cells = Vec::with_capacity(m + 1);
        for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
            assert_eq!(row.len(), n, "ragged constraint matrix");
            let flip = rhs.is_negative();
            let mut line = vec![BigInt::zero(); cols];
            for (j, v) in row.iter().enumerate() {
                line[j] = if flip { -v } else { v.clone() };
            }
            line[n + i] = BigInt::from(1);
            line[cols - 1] = if flip { -rhs } else { rhs.clone() };
            cells.push(line);
        }
        // minimise the sum of artificials: reduced costs are minus column sums
        let mut objective = vec![BigInt::zero(); cols];
        for line in &cells {
            for j in 0..n {
                objective[j] -= &line[j];
            }
            objective[cols - 1] -= &line[cols - 1];
        }
        cells.push(objective);
        Tableau {
            rows: m,
            cols,
            cells,
            denom: BigInt::from(1),
            basis: (n..n + m).collect(),
        }
    }

    fn rhs(&self) -> usize {
        self.cols - 1
    }

    /// Bland: the lowest-index column with negative reduced cost.
    fn entering(&self) -> Option<usize> {
        let obj = &self.cells[self.rows];
        (0..self.rhs()).find(|&j| obj[j].is_negative())
    }

    /// Minimum ratio test; ties go to the row whose basic variable has the
    /// lowest index.
    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.rhs();
        let mut best: Option<usize> = None;
        for i in 0..self.rows {
            let a = &self.cells[i][col];
            if !a.is_positive() {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(r) => {
                    // b_i / a_i  vs  b_r / a_r, denominators positive
                    let lhs = &self.cells[i][rhs] * &self.cells[r][col];
                    let rhs_v = &self.cells[r][rhs] * a;
                    if lhs < rhs_v || (lhs == rhs_v && self.basis[i] < self.basis[r]) {
                        Some(i)
                    } else {
                        Some(r)
                    }
                }
            };
        }
        best
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.cells[row][col].clone();
        debug_assert!(p.is_positive());
        let pivot_row = self.cells[row].clone();
        for (i, line) in self.cells.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let factor = line[col].clone();
            for (cell, pr) in line.iter_mut().zip(&pivot_row) {
                let v = &*cell * &p - &factor * pr;
                let (q, r) = v.div_rem(&self.denom);
                debug_assert!(r.is_zero(), "inexact fraction-free pivot");
                *cell = q;
            }
        }
        self.denom = p;
        self.basis[row] = col;
    }

    fn objective_value_is_zero(&self) -> bool {
        self.cells[self.rows][self.rhs()].is_zero()
    }
}

/// Whether some `x >= 0` satisfies `A x = b`. `a` is given by rows.
pub fn is_feasible(a: &[Vec<BigInt>], b: &[BigInt]) -> bool {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let mut t = Tableau::phase_one(a, b);
    loop {
        if t.objective_value_is_zero() {
            return true;
        }
        let Some(col) = t.entering() else {
            return false;
        };
        // phase one is bounded below by zero, so a leaving row always exists
        let row = t.leaving(col).expect("phase one cannot be unbounded");
        t.pivot(row, col);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn vecb(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn simple_feasible_and_infeasible() {
        // x + y = 1, x - y = 0  ->  x = y = 1/2
        let a = mat(&[&[1, 1], &[1, -1]]);
        assert!(is_feasible(&a, &vecb(&[1, 0])));
        // x + y = 1, x + y = 2
        let a = mat(&[&[1, 1], &[1, 1]]);
        assert!(!is_feasible(&a, &vecb(&[1, 2])));
        // x = -1 with x >= 0
        let a = mat(&[&[1]]);
        assert!(!is_feasible(&a, &vecb(&[-1])));
        assert!(is_feasible(&a, &vecb(&[0])));
    }

    #[test]
    fn negative_rhs_rows_are_normalised() {
        // -x - y = -3, x - y = 1  ->  x = 2, y = 1
        let a = mat(&[&[-1, -1], &[1, -1]]);
        assert!(is_feasible(&a, &vecb(&[-3, 1])));
    }

    #[test]
    fn empty_system_is_feasible() {
        assert!(is_feasible(&[], &[]));
    }

    #[test]
    fn zero_columns_with_nonzero_rhs() {
        let a = vec![Vec::<BigInt>::new()];
        assert!(!is_feasible(&a, &vecb(&[1])));
        assert!(is_feasible(&a, &vecb(&[0])));
    }

    #[test]
    fn degenerate_redundant_rows() {
        // classic degenerate system with duplicated rows
        let a = mat(&[&[1, 2, 3, 0], &[1, 2, 3, 0], &[0, 1, 1, 1], &[2, 4, 6, 0]]);
        assert!(is_feasible(&a, &vecb(&[6, 6, 2, 12])));
        assert!(!is_feasible(&a, &vecb(&[6, 6, 2, 11])));
    }

    #[test]
    fn beale_constraints_terminate() {
        // Beale's cycling example scaled to integers, with slacks.
        let a = mat(&[
            &[1, -32, -4, 36, 1, 0, 0],
            &[1, -24, -1, 6, 0, 1, 0],
            &[0, 0, 1, 0, 0, 0, 1],
        ]);
        assert!(is_feasible(&a, &vecb(&[0, 0, 1])));
        assert!(!is_feasible(&a, &vecb(&[0, 0, -1])));
    }

    proptest! {
        #[test]
        fn systems_built_from_a_nonnegative_point_are_feasible(
            rows in proptest::collection::vec(proptest::collection::vec(-5i64..6, 4), 1..5),
            x in proptest::collection::vec(0i64..4, 4),
        ) {
            let a = mat(&rows.iter().map(|r| r.as_slice()).collect::<Vec<_>>());
            let b: Vec<BigInt> = rows
                .iter()
                .map(|r| BigInt::from(r.iter().zip(&x).map(|(u, v)| u * v).sum::<i64>()))
                .collect();
            prop_assert!(is_feasible(&a, &b));

            let mut a2 = a.clone();
            a2.push(vecb(&[1, 1, 1, 1]));
            let mut b2 = b.clone();
            b2.push(BigInt::from(-1));
            prop_assert!(!is_feasible(&a2, &b2));
        }
    }
}
