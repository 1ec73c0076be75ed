//! Smith normal form of small integer matrices, tracking the inverse of the
//! column transform.

/// Result of [`smith`]: `U * A * V = diag(invariants)` for some unimodular `U`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub invariants: Vec<i64>,
    /// `V^{-1}`; row `i` expresses the `i`-th new basis vector in old coordinates.
    pub v_inv: Vec<Vec<i64>>,
}

/// Smith normal form of a `rows x cols` matrix with `rows >= cols` and full
/// column rank. Invariant factors come out positive and in divisibility order.
pub fn smith(mut a: Vec<Vec<i64>>, cols: usize) -> Smith {
    let rows = a.len();
    let mut v_inv: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();

    for piv in 0..cols.min(rows) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(piv) {
                for (j, &x) in row.iter().enumerate().skip(piv) {
                    if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                break;
            };
            a.swap(piv, bi);
            if bj != piv {
                for row in a.iter_mut() {
                    row.swap(piv, bj);
                }
                v_inv.swap(piv, bj);
            }
            let p = a[piv][piv];
            let mut clean = true;
            for i in piv + 1..rows {
                let f = a[i][piv] / p;
                if f != 0 {
                    for j in piv..cols {
                        a[i][j] -= f * a[piv][j];
                    }
                }
                clean &= a[i][piv] == 0;
            }
            for j in piv + 1..cols {
                let f = a[piv][j] / p;
                if f != 0 {
                    // col_j -= f * col_piv  =>  row_piv(V^{-1}) += f * row_j(V^{-1})
                    for row in a.iter_mut() {
                        row[j] -= f * row[piv];
                    }
                    for k in 0..cols {
                        v_inv[piv][k] += f * v_inv[j][k];
                    }
                }
                clean &= a[piv][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offending = (piv + 1..rows).find(|&i| (piv + 1..cols).any(|j| a[i][j] % p != 0));
            match offending {
                Some(i) => {
                    for j in piv..cols {
                        a[piv][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        if a[piv][piv] < 0 {
            for j in piv..cols {
                a[piv][j] = -a[piv][j];
            }
        }
    }
    Smith {
        invariants: (0..cols).map(|i| a[i][i]).collect(),
        v_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_kept() {
        let s = smith(vec![vec![4, 0], vec![0, 2]], 2);
        let mut inv = s.invariants.clone();
        inv.sort();
        assert_eq!(inv, [2, 4]);
    }

    #[test]
    fn divisibility_chain() {
        // Z/2 x Z/3 = Z/6
        let s = smith(vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(s.invariants, [1, 6]);
        let s = smith(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3);
        assert_eq!(s.invariants, [2, 6, 12]);
    }

    #[test]
    fn v_inverse_maps_lattice() {
        // lattice rows (2,0),(1,2): index 4, group Z/4
        let a = vec![vec![2, 0], vec![1, 2]];
        let s = smith(a.clone(), 2);
        assert_eq!(s.invariants, [1, 4]);
        // V^{-1} is unimodular
        let det = s.v_inv[0][0] * s.v_inv[1][1] - s.v_inv[0][1] * s.v_inv[1][0];
        assert_eq!(det.abs(), 1);
    }
}
