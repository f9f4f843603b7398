//! Integer solutions of A x = b by column Hermite reduction.
//!
//! The columns of A are stacked over an identity block and reduced with
//! unimodular column operations to lower echelon form H = A U. A solution is
//! read off H by forward substitution; the columns of U beyond the rank span
//! the integer kernel of A.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A particular integer solution and a basis of the integer kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSolution {
    pub solution: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// `a` is given row-major with `cols` columns. Returns `None` when the system
/// has no integer solution.
pub fn solve(a: &[Vec<i64>], cols: usize, b: &[i64]) -> Option<IntegerSolution> {
    let rows = a.len();
    assert_eq!(b.len(), rows);
    let height = rows + cols;
    // stacked[k] = (column k of A) ++ (column k of the identity)
    let mut stacked: Vec<Vec<BigInt>> = (0..cols)
        .map(|k| {
            let mut col = Vec::with_capacity(height);
            col.extend(a.iter().map(|row| BigInt::from(row[k])));
            col.extend((0..cols).map(|i| {
                if i == k {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            col
        })
        .collect();

    // pivot_of_row[i] = Some(column) for rows that received a pivot
    let mut pivot_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut rank = 0;
    for (i, pivot_slot) in pivot_of_row.iter_mut().enumerate() {
        if rank == cols {
            break;
        }
        loop {
            let smallest = (rank..cols)
                .filter(|&k| !stacked[k][i].is_zero())
                .min_by(|&x, &y| stacked[x][i].abs().cmp(&stacked[y][i].abs()));
            let Some(k) = smallest else { break };
            stacked.swap(rank, k);
            let mut done = true;
            for k in rank + 1..cols {
                if stacked[k][i].is_zero() {
                    continue;
                }
                let factor = &stacked[k][i] / &stacked[rank][i];
                if !factor.is_zero() {
                    sub_multiple(&mut stacked, k, rank, &factor);
                }
                if !stacked[k][i].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if stacked.get(rank).is_none_or(|c| c[i].is_zero()) {
            continue;
        }
        if stacked[rank][i].is_negative() {
            for x in stacked[rank].iter_mut() {
                *x = -&*x;
            }
        }
        // reduce earlier pivot columns modulo the new pivot
        for j in 0..rank {
            let factor = stacked[j][i].div_floor(&stacked[rank][i]);
            if !factor.is_zero() {
                sub_multiple(&mut stacked, j, rank, &factor);
            }
        }
        *pivot_slot = Some(rank);
        rank += 1;
    }

    // forward substitution on H y = b
    let mut y = vec![BigInt::zero(); cols];
    for i in 0..rows {
        let mut rest = BigInt::from(b[i]);
        for (j, yj) in y.iter().enumerate().take(rank) {
            if !yj.is_zero() && pivot_of_row[i] != Some(j) {
                rest -= &stacked[j][i] * yj;
            }
        }
        match pivot_of_row[i] {
            Some(p) => {
                let (quot, rem) = rest.div_rem(&stacked[p][i]);
                if !rem.is_zero() {
                    return None;
                }
                y[p] = quot;
            }
            None => {
                if !rest.is_zero() {
                    return None;
                }
            }
        }
    }

    let mut solution = vec![BigInt::zero(); cols];
    for (p, yp) in y.iter().enumerate().take(rank) {
        if yp.is_zero() {
            continue;
        }
        for (s, u) in solution.iter_mut().zip(&stacked[p][rows..]) {
            *s += u * yp;
        }
    }
    let kernel = stacked[rank..]
        .iter()
        .map(|col| col[rows..].to_vec())
        .collect();
    Some(IntegerSolution { solution, kernel })
}

fn sub_multiple(stacked: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    let (t, s) = if target < source {
        let (lo, hi) = stacked.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = stacked.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= factor * y;
        }
    }
}

/// Greedy l1 reduction: adds or subtracts kernel vectors while that strictly
/// lowers the l1 norm.
pub fn reduce_l1(solution: &mut [BigInt], kernel: &[Vec<BigInt>]) {
    let norm = |v: &[BigInt]| v.iter().map(|x| x.abs()).sum::<BigInt>();
    let mut best = norm(solution);
    loop {
        let mut improved = false;
        for k in kernel {
            for sign in [1, -1] {
                let candidate: Vec<BigInt> = solution
                    .iter()
                    .zip(k)
                    .map(|(x, d)| if sign > 0 { x + d } else { x - d })
                    .collect();
                let n = norm(&candidate);
                if n < best {
                    best = n;
                    solution.clone_from_slice(&candidate);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &[Vec<i64>], x: &[BigInt], b: &[i64]) {
        for (row, &bi) in a.iter().zip(b) {
            let lhs: BigInt = row.iter().zip(x).map(|(&m, xi)| BigInt::from(m) * xi).sum();
            assert_eq!(lhs, BigInt::from(bi));
        }
    }

    #[test]
    fn solves_unimodular_system() {
        let a = vec![vec![2, 3], vec![1, 2]];
        let sol = solve(&a, 2, &[1, 0]).unwrap();
        check(&a, &sol.solution, &[1, 0]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn detects_non_integral_solution() {
        // 2x = 1 has a rational but no integer solution
        assert_eq!(solve(&[vec![2]], 1, &[1]), None);
        // inconsistent dependent rows
        assert_eq!(solve(&[vec![1, 1], vec![2, 2]], 2, &[1, 3]), None);
    }

    #[test]
    fn kernel_vectors_are_in_the_kernel() {
        let a = vec![vec![1, 1, 1, 0], vec![0, 1, 1, 1]];
        let sol = solve(&a, 4, &[1, 1]).unwrap();
        check(&a, &sol.solution, &[1, 1]);
        assert_eq!(sol.kernel.len(), 2);
        for k in &sol.kernel {
            check(&a, k, &[0, 0]);
        }
    }

    #[test]
    fn l1_reduction_keeps_solutions_valid() {
        let a = vec![vec![3, 5, 7], vec![1, 1, 1]];
        let mut sol = solve(&a, 3, &[12, 2]).unwrap();
        let before: BigInt = sol.solution.iter().map(|x| x.abs()).sum();
        reduce_l1(&mut sol.solution, &sol.kernel);
        let after: BigInt = sol.solution.iter().map(|x| x.abs()).sum();
        assert!(after <= before);
        check(&a, &sol.solution, &[12, 2]);
    }
}
