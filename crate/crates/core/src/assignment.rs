//! Minimum-cost linear assignment (Hungarian method with potentials).
//!
//! O(n^2 m) for an `n x m` cost matrix. Rectangular inputs are handled by
//! transposing so the smaller side is always fully assigned.

/// Assigns every row (if `rows <= cols`) or every column to a distinct
/// partner so the total cost is minimal. Returns the column chosen for each
/// row, `None` for rows left out of a wide-side assignment.
///
/// All rows must have the same length and costs must be finite.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = cost.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = cost[0].len();
    debug_assert!(cost.iter().all(|r| r.len() == cols));
    if cols == 0 {
        return vec![None; rows];
    }
    if rows <= cols {
        solve(rows, cols, |i, j| cost[i][j]).into_iter().map(Some).collect()
    } else {
        let col_to_row = solve(cols, rows, |i, j| cost[j][i]);
        let mut out = vec![None; rows];
        for (c, r) in col_to_row.into_iter().enumerate() {
            out[r] = Some(c);
        }
        out
    }
}

/// Core solver for `n <= m`; returns the column of each row.
fn solve(n: usize, m: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    // 1-based potentials; column 0 is the virtual root.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut row_to_col = vec![0usize; n];
    for j in 1..=m {
        if owner[j] != 0 {
            row_to_col[owner[j] - 1] = j - 1;
        }
    }
    row_to_col
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(cost: &[Vec<f64>], a: &[Option<usize>]) -> f64 {
        a.iter().enumerate().filter_map(|(i, c)| c.map(|c| cost[i][c])).sum()
    }

    fn brute(cost: &[Vec<f64>]) -> f64 {
        fn go(cost: &[Vec<f64>], row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == cost.len() {
                *best = best.min(acc);
                return;
            }
            for c in 0..used.len() {
                if !used[c] {
                    used[c] = true;
                    go(cost, row + 1, used, acc + cost[row][c], best);
                    used[c] = false;
                }
            }
        }
        let mut best = f64::INFINITY;
        go(cost, 0, &mut vec![false; cost[0].len()], 0.0, &mut best);
        best
    }

    #[test]
    fn square_and_rectangular() {
        let c = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        let a = min_cost_assignment(&c);
        assert_eq!(total(&c, &a), 5.0);
        assert_eq!(brute(&c), 5.0);

        let wide = vec![vec![9.0, 1.0, 8.0, 7.0], vec![1.0, 9.0, 9.0, 9.0]];
        let a = min_cost_assignment(&wide);
        assert_eq!(a, vec![Some(1), Some(0)]);

        let tall = vec![vec![9.0, 1.0], vec![1.0, 9.0], vec![0.5, 0.5]];
        let a = min_cost_assignment(&tall);
        assert_eq!(a.iter().filter(|x| x.is_some()).count(), 2);
        assert_eq!(total(&tall, &a), 1.5);
    }

    #[test]
    fn empty_inputs() {
        assert!(min_cost_assignment(&[]).is_empty());
        assert_eq!(min_cost_assignment(&[vec![], vec![]]), vec![None, None]);
    }

    #[test]
    fn negative_costs() {
        let c = vec![vec![-0.9, -0.6], vec![-0.7, -0.8]];
        assert_eq!(min_cost_assignment(&c), vec![Some(0), Some(1)]);
    }
}
