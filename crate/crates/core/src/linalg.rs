use crate::field::FieldElem;

/// Rank of a list of row vectors over their common field, by Gaussian elimination.
pub fn rank(rows: &[Vec<FieldElem>]) -> usize {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].inv().expect("pivot is nonzero");
        let prow: Vec<FieldElem> = m[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                *x = &*x - &(&factor * p);
            }
        }
        m[rank] = prow;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    #[test]
    fn rank_over_f3() {
        let k = FieldCtx::prime(3).unwrap();
        let v = |xs: &[i64]| xs.iter().map(|&x| k.from_int(x)).collect::<Vec<_>>();
        assert_eq!(rank(&[v(&[1, 2, 0]), v(&[2, 1, 0])]), 1);
        assert_eq!(rank(&[v(&[1, 2, 0]), v(&[0, 1, 1]), v(&[1, 0, 0])]), 3);
        assert_eq!(rank(&[v(&[0, 0, 0])]), 0);
        assert_eq!(rank(&[]), 0);
    }
}
