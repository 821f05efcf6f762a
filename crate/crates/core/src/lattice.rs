//! Small exact integer linear algebra used by the cone and witness code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divides out the content of a nonzero vector.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|x| x / g).collect()
}

pub fn det2(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Counter-clockwise perpendicular.
pub fn perp(a: &[i64]) -> [i64; 2] {
    [-a[1], a[0]]
}

/// Rank of an integer matrix given by rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    row_reduce(&mut m)
}

/// Gaussian elimination in place; returns the rank.
fn row_reduce(m: &mut [Vec<BigRational>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(pr) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, pr);
        let pivot = m[pivot_row][col].clone();
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = &m[r][col] / &pivot;
                for c in col..cols {
                    let delta = &factor * &m[pivot_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    pivot_row
}

/// Solves `A x = b` where the columns of `A` are `cols`. Returns `None` when
/// the columns are dependent.
pub fn solve_columns(cols: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let d = b.len();
    let n = cols.len();
    if n != d {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = cols
                .iter()
                .map(|c| BigRational::from_integer(BigInt::from(c[i])))
                .collect();
            row.push(BigRational::from_integer(BigInt::from(b[i])));
            row
        })
        .collect();
    // reduce only over the coefficient columns
    let mut pivot_row = 0;
    for col in 0..n {
        let pr = (pivot_row..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot_row, pr);
        let pivot = m[pivot_row][col].clone();
        for c in 0..=n {
            m[pivot_row][c] = &m[pivot_row][c] / &pivot;
        }
        for r in 0..d {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..=n {
                    let delta = &factor * &m[pivot_row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivot_row += 1;
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

pub fn floor_div(a: i128, b: i128) -> i128 {
    Integer::div_floor(&a, &b)
}

pub fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

/// All `x ∈ ℤ²` with `lo[i] ≤ normals[i]·x < hi[i]` for `i = 0, 1`.
///
/// The two normals must be linearly independent. Points come out in
/// lexicographic order.
pub fn lattice_points_2d(normals: [&[i64]; 2], lo: [i64; 2], hi: [i64; 2]) -> Vec<[i64; 2]> {
    let (n0, n1) = (normals[0], normals[1]);
    let det = (n0[0] as i128) * (n1[1] as i128) - (n0[1] as i128) * (n1[0] as i128);
    assert!(det != 0, "normals must be independent");
    if lo[0] >= hi[0] || lo[1] >= hi[1] {
        return Vec::new();
    }
    // x = N⁻¹ y, with N⁻¹ = adj(N) / det
    let adj = [
        [n1[1] as i128, -(n0[1] as i128)],
        [-(n1[0] as i128), n0[0] as i128],
    ];
    let mut lo_x = [i128::MAX; 2];
    let mut hi_x = [i128::MIN; 2];
    for y0 in [lo[0] as i128, hi[0] as i128] {
        for y1 in [lo[1] as i128, hi[1] as i128] {
            for k in 0..2 {
                let num = adj[k][0] * y0 + adj[k][1] * y1;
                let (f, c) = if det > 0 {
                    (floor_div(num, det), ceil_div(num, det))
                } else {
                    (floor_div(-num, -det), ceil_div(-num, -det))
                };
                lo_x[k] = lo_x[k].min(f);
                hi_x[k] = hi_x[k].max(c);
            }
        }
    }
    let mut out = Vec::new();
    for x in lo_x[0]..=hi_x[0] {
        for y in lo_x[1]..=hi_x[1] {
            let p = [x as i64, y as i64];
            let a = dot(n0, &p);
            let b = dot(n1, &p);
            if a >= lo[0] && a < hi[0] && b >= lo[1] && b < hi[1] {
                out.push(p);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(rank(&[vec![2, 4], vec![1, 2]]), 1);
        assert_eq!(rank(&[vec![0, 0, 0]]), 0);
        assert_eq!(rank(&[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]), 2);
    }

    #[test]
    fn solve_small_system() {
        let x = solve_columns(&[vec![1, 0], vec![3, 4]], &[1, 1]).unwrap();
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        assert_eq!(x, vec![quarter.clone(), quarter]);
        assert!(solve_columns(&[vec![1, 2], vec![2, 4]], &[1, 1]).is_none());
    }

    #[test]
    fn lattice_points_in_parallelogram() {
        // 0 ≤ y < 4 and 0 ≤ 4x − 3y < 4
        let pts = lattice_points_2d([&[0, 1], &[4, -3]], [0, 0], [4, 4]);
        assert_eq!(pts, vec![[0, 0], [1, 1], [2, 2], [3, 3]]);
        let brute: Vec<[i64; 2]> = (-20..20)
            .flat_map(|x| (-20..20).map(move |y| [x, y]))
            .filter(|p| (0..4).contains(&p[1]) && (0..4).contains(&(4 * p[0] - 3 * p[1])))
            .collect();
        assert_eq!(pts, brute);
    }
}
