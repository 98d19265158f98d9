//! Minimum-cost bipartite assignment (rectangular, rows <= columns) by the
//! shortest-augmenting-path method with dual potentials; cubic in the number
//! of rows, which is all the spectral matching here needs.

/// Assign each row to a distinct column minimizing total cost.
///
/// `cost` is row-major with `rows <= cols`. Returns, for each row, its
/// assigned column index.
pub(crate) fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let rows = cost.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = cost[0].len();
    assert!(rows <= cols, "assignment needs rows <= cols");

    // potentials over rows/cols; col_to_row[cols] is the virtual staging slot
    let mut row_potential = vec![0.0f64; rows];
    let mut col_potential = vec![0.0f64; cols + 1];
    let mut col_to_row = vec![usize::MAX; cols + 1];
    let mut predecessor = vec![cols; cols];

    for row in 0..rows {
        col_to_row[cols] = row;
        let mut j0 = cols;
        let mut min_value = vec![f64::INFINITY; cols];
        let mut visited = vec![false; cols + 1];
        loop {
            visited[j0] = true;
            let i0 = col_to_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = cols;
            for j in 0..cols {
                if visited[j] {
                    continue;
                }
                let reduced = cost[i0][j] - row_potential[i0] - col_potential[j];
                if reduced < min_value[j] {
                    min_value[j] = reduced;
                    predecessor[j] = j0;
                }
                if min_value[j] < delta {
                    delta = min_value[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if visited[j] {
                    if col_to_row[j] != usize::MAX {
                        row_potential[col_to_row[j]] += delta;
                    }
                    col_potential[j] -= delta;
                } else if j < cols {
                    min_value[j] -= delta;
                }
            }
            j0 = j1;
            if col_to_row[j0] == usize::MAX {
                break;
            }
        }
        // augment along the found path
        while j0 != cols {
            let j1 = predecessor[j0];
            col_to_row[j0] = col_to_row[j1];
            j0 = j1;
        }
    }

    let mut row_to_col = vec![usize::MAX; rows];
    for j in 0..cols {
        if col_to_row[j] != usize::MAX {
            row_to_col[col_to_row[j]] = j;
        }
    }
    row_to_col
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(cost: &[Vec<f64>], assign: &[usize]) -> f64 {
        assign.iter().enumerate().map(|(r, &c)| cost[r][c]).sum()
    }

    fn brute_force_min(cost: &[Vec<f64>]) -> f64 {
        let rows = cost.len();
        let cols = cost[0].len();
        let mut best = f64::INFINITY;
        let mut columns: Vec<usize> = (0..cols).collect();
        permute(&mut columns, 0, rows, cost, &mut best);
        best
    }

    fn permute(cols: &mut Vec<usize>, depth: usize, rows: usize, cost: &[Vec<f64>], best: &mut f64) {
        if depth == rows {
            let value: f64 = (0..rows).map(|r| cost[r][cols[r]]).sum();
            *best = best.min(value);
            return;
        }
        for i in depth..cols.len() {
            cols.swap(depth, i);
            permute(cols, depth + 1, rows, cost, best);
            cols.swap(depth, i);
        }
    }

    #[test]
    fn square_known_case() {
        let cost = vec![
            vec![4.0, 1.0, 3.0],
            vec![2.0, 0.0, 5.0],
            vec![3.0, 2.0, 2.0],
        ];
        let assign = min_cost_assignment(&cost);
        assert_eq!(total(&cost, &assign), 5.0);
    }

    #[test]
    fn rectangular_case() {
        let cost = vec![vec![10.0, 2.0, 8.0, 1.0], vec![1.0, 9.0, 8.0, 7.0]];
        let assign = min_cost_assignment(&cost);
        assert_eq!(assign, vec![3, 0]);
    }

    #[test]
    fn matches_brute_force_on_deterministic_instances() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / (1u64 << 53) as f64
        };
        for rows in 1..=5usize {
            for extra in 0..=2usize {
                let cols = rows + extra;
                for _rep in 0..20 {
                    let cost: Vec<Vec<f64>> =
                        (0..rows).map(|_| (0..cols).map(|_| next()).collect()).collect();
                    let assign = min_cost_assignment(&cost);
                    let mut seen = std::collections::HashSet::new();
                    assert!(assign.iter().all(|c| seen.insert(*c)), "duplicate column");
                    let got = total(&cost, &assign);
                    let want = brute_force_min(&cost);
                    assert!(
                        (got - want).abs() <= 1e-12,
                        "{rows}x{cols}: {got} vs brute force {want}"
                    );
                }
            }
        }
    }
}
