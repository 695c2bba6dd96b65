//! Smith normal form of integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Nonzero invariant factors `d_1 | d_2 | ...`, all positive.
    pub divisors: Vec<BigInt>,
}

impl SmithForm {
    /// Torsion part: the divisors that are not 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(rows: &[Vec<i64>], ncols: usize) -> SmithForm {
    let mut a: Vec<Vec<BigInt>> =
        rows.iter().map(|r| (0..ncols).map(|j| BigInt::from(*r.get(j).unwrap_or(&0))).collect()).collect();
    let m = a.len();
    let n = ncols;
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero entry in the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, e) in row.iter().enumerate().skip(t) {
                if !e.is_zero() && best.is_none_or(|(bi, bj)| e.abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = false;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    for j in t..n {
                        let v = &a[t][j] * &q;
                        a[i][j] -= v;
                    }
                    if !a[i][t].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    for row in a.iter_mut().skip(t) {
                        let v = &row[t] * &q;
                        row[j] -= v;
                    }
                    if !a[t][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if !dirty {
                // Divisibility: fold any entry not divisible by the pivot into row t.
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &p).is_zero()));
                match bad {
                    Some(i) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..m {
                if !a[i][t].is_zero() && (a[best.0][best.1].is_zero() || a[i][t].abs() < a[best.0][best.1].abs()) {
                    best = (i, t);
                }
            }
            for j in t..n {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    SmithForm { rank: diag.len(), divisors: diag }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclic_of_order_two() {
        let s = smith_normal_form(&[vec![2]], 1);
        assert_eq!(s.divisors, vec![BigInt::from(2)]);
    }

    #[test]
    fn divisibility_chain() {
        let s = smith_normal_form(&[vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(6)]);
        let s = smith_normal_form(&[vec![1, 1], vec![1, -1]], 2);
        assert_eq!(s.divisors, vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&[vec![0, 0]], 2);
        assert_eq!(s.rank, 0);
    }

    proptest! {
        #[test]
        fn divisors_divide_and_preserve_determinant(data in prop::collection::vec(-6i64..7, 9)) {
            let rows: Vec<Vec<i64>> = data.chunks(3).map(|c| c.to_vec()).collect();
            let s = smith_normal_form(&rows, 3);
            for w in s.divisors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            let det = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
            if det != 0 {
                prop_assert_eq!(s.rank, 3);
                let prod: BigInt = s.divisors.iter().product();
                prop_assert_eq!(prod, BigInt::from(det.abs()));
            } else {
                prop_assert!(s.rank < 3);
            }
        }
    }
}
