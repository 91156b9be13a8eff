//! Exact linear algebra over the integers.
//!
//! Everything here is fraction-free: ranks over the rationals come from
//! Bareiss elimination on arbitrary-precision integers, ranks over `ℤ/2`
//! from bitset elimination, and torsion from a Smith normal form.  Inputs
//! are small signed matrices (boundary maps and exponent-sum matrices);
//! intermediate growth is absorbed by `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rank over the rationals, by fraction-free (Bareiss) elimination.
pub(crate) fn rank_rational(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let num = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                // Exact by Sylvester's determinant identity.
                a[r][c] = num / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over `ℤ/2`, by elimination on bit rows.
pub(crate) fn rank_mod2(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let words = cols.div_ceil(64);
    let mut bits: Vec<Vec<u64>> = m
        .iter()
        .map(|r| {
            let mut row = vec![0u64; words];
            for (c, &x) in r.iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    row[c / 64] |= 1 << (c % 64);
                }
            }
            row
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let word = col / 64;
        let mask = 1u64 << (col % 64);
        let Some(pivot) = (rank..rows).find(|&r| bits[r][word] & mask != 0) else {
            continue;
        };
        bits.swap(rank, pivot);
        for r in 0..rows {
            if r != rank && bits[r][word] & mask != 0 {
                let (head, tail) = bits.split_at_mut(rank.max(r));
                let (a, b) = if r < rank {
                    (&mut head[r], &tail[0])
                } else {
                    (&mut tail[0], &head[rank])
                };
                for w in 0..words {
                    a[w] ^= b[w];
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank and invariant factors (> 1) of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SmithSummary {
    pub rank: usize,
    /// Invariant factors greater than 1, in divisibility order.
    pub torsion: Vec<BigInt>,
}

/// Smith normal form by the classical pivot-and-reduce algorithm.
pub(crate) fn smith(m: &[Vec<i64>]) -> SmithSummary {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<BigInt>> =
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // Smallest nonzero entry of the trailing submatrix becomes the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        // Clear row and column t; reductions may reintroduce entries, loop.
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                for j in t..cols {
                    let sub = &q * &a[t][j];
                    a[i][j] -= sub;
                }
                if !a[i][t].is_zero() {
                    // Remainder smaller than the pivot: swap up and restart.
                    a.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        // Divisibility fix-up: the pivot must divide the whole trailing
        // submatrix; otherwise fold the offending row in and redo this step.
        let mut redo = false;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for jj in t..cols {
                        let add = a[i][jj].clone();
                        a[t][jj] += add;
                    }
                    redo = true;
                    break 'scan;
                }
            }
        }
        if !redo {
            t += 1;
        }
    }
    let mut diagonal: Vec<BigInt> =
        (0..t).map(|i| a[i][i].abs()).filter(|d| !d.is_zero()).collect();
    diagonal.sort();
    let torsion = diagonal.into_iter().filter(|d| *d > BigInt::one()).collect();
    SmithSummary { rank: t, torsion }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(vals: &[i64]) -> Vec<BigInt> {
        vals.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn rational_rank_of_small_matrices() {
        assert_eq!(rank_rational(&[]), 0);
        assert_eq!(rank_rational(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank_rational(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_rational(&[vec![1, 2], vec![3, 4]]), 2);
        assert_eq!(rank_rational(&[vec![2, 0, 0], vec![0, 0, 5]]), 2);
    }

    #[test]
    fn mod2_rank_differs_when_two_divides() {
        let m = vec![vec![2, 0], vec![0, 1]];
        assert_eq!(rank_rational(&m), 2);
        assert_eq!(rank_mod2(&m), 1);
    }

    #[test]
    fn smith_form_of_known_matrices() {
        // diag(2,3) ~ diag(1,6)
        let s = smith(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.rank, 2);
        assert_eq!(s.torsion, big(&[6]));

        let s = smith(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        assert_eq!(s.rank, 3);
        // Known invariant factors of this classic example: 2, 2, 156.
        assert_eq!(s.torsion, big(&[2, 2, 156]));

        let s = smith(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(s.rank, 2);
        assert!(s.torsion.is_empty());
    }

    #[test]
    fn smith_rank_agrees_with_rational_rank_on_random_matrices() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rows = rng.random_range(1..6);
            let cols = rng.random_range(1..6);
            let m: Vec<Vec<i64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(-4..=4)).collect())
                .collect();
            assert_eq!(smith(&m).rank, rank_rational(&m), "matrix {m:?}");
        }
    }

    #[test]
    fn torsion_of_presentation_like_matrices() {
        // Relator x^2 in <x>: exponent matrix [2].
        let s = smith(&[vec![2]]);
        assert_eq!(s.rank, 1);
        assert_eq!(s.torsion, big(&[2]));
        // <x, y | x y x^-1 y^-1> abelianizes to Z^2: zero matrix.
        let s = smith(&[vec![0, 0]]);
        assert_eq!(s.rank, 0);
        assert!(s.torsion.is_empty());
    }
}
