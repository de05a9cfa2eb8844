//! Smith normal form of small integer matrices, tracking the column
//! transform and its inverse.

/// `D = U·A·V` with `D` diagonal, `d_1 | d_2 | …`, all `d_i ≥ 0`. Only `V` and
/// `V^{-1}` are kept; `U` is not needed by callers.
#[derive(Clone, Debug)]
pub struct Smith {
    pub diag: Vec<i128>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
}

/// Smith form of a square matrix.
pub fn smith(a: &[Vec<i128>]) -> Smith {
    let n = a.len();
    let mut m: Vec<Vec<i128>> = a.to_vec();
    let mut v = identity(n);
    let mut v_inv = identity(n);

    // column j -= c·column i, mirrored on V and V^{-1}
    let col_sub = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, v_inv: &mut Vec<Vec<i128>>, j: usize, i: usize, c: i128| {
        for row in m.iter_mut() {
            row[j] -= c * row[i];
        }
        for row in v.iter_mut() {
            row[j] -= c * row[i];
        }
        let ri = v_inv[j].clone();
        for (x, y) in v_inv[i].iter_mut().zip(ri) {
            *x += c * y;
        }
    };
    let col_swap = |m: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, v_inv: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    };

    for t in 0..n {
        loop {
            // smallest nonzero entry of the remaining block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for r in t..n {
                for c in t..n {
                    if m[r][c] != 0 && best.is_none_or(|(br, bc)| m[r][c].abs() < m[br][bc].abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { break };
            m.swap(t, br);
            if bc != t {
                col_swap(&mut m, &mut v, &mut v_inv, t, bc);
            }
            let p = m[t][t];
            let mut clean = true;
            for r in t + 1..n {
                let c = m[r][t] / p;
                if c != 0 {
                    let pivot_row = m[t].clone();
                    for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                        *x -= c * y;
                    }
                }
                clean &= m[r][t] == 0;
            }
            for c in t + 1..n {
                let f = m[t][c] / p;
                if f != 0 {
                    col_sub(&mut m, &mut v, &mut v_inv, c, t, f);
                }
                clean &= m[t][c] == 0;
            }
            if !clean {
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..n).find(|&r| (t + 1..n).any(|c| m[r][c] % p != 0));
            match bad {
                Some(r) => {
                    let row = m[r].clone();
                    for (x, y) in m[t].iter_mut().zip(row) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if m[t][t] < 0 {
            for row in m.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
            for x in v_inv[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    Smith { diag: (0..n).map(|i| m[i][i]).collect(), v, v_inv }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect()
}

#[cfg(test)]
fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|l| a[i][l] * b[l][j]).sum()).collect()).collect()
}
