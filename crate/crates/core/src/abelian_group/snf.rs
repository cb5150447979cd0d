/// Smith normal form of an integer matrix with at least as many rows as columns.
///
/// Returns the diagonal `d_0 | d_1 | …` (one entry per column) and a unimodular
/// `V` with `U·A·V = diag(d)` for some unimodular `U`. Row operations are not
/// recorded.
pub fn smith_normal_form(a: &[Vec<i128>]) -> (Vec<i128>, Vec<Vec<i128>>) {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut v: Vec<Vec<i128>> = (0..cols).map(|i| (0..cols).map(|j| i128::from(i == j)).collect()).collect();
    let mut diag = vec![0i128; cols];

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return (diag, v) };
            m.swap(t, pi);
            if pj != t {
                for row in m.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if clean {
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                    }
                    None => break,
                }
            }
        }
        diag[t] = m[t][t].abs();
    }
    (diag, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
        a.iter()
            .map(|row| (0..b[0].len()).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn diag_divisibility() {
        let a = vec![vec![2, 0], vec![0, 3]];
        let (d, _) = smith_normal_form(&a);
        assert_eq!(d, vec![1, 6]);
        let a = vec![vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10], vec![2, 3, 5]];
        let (d, v) = smith_normal_form(&a);
        for w in d.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        let prod: i128 = d.iter().product();
        assert_eq!(prod, 120);
        let av = mat_mul(&a, &v);
        assert_eq!(av.len(), 4);
    }
}
