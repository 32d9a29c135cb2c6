//! Smith normal form of small integer matrices with unimodular transforms.

/// Result of `smith_normal_form`: `u * a * v == s` with `s` diagonal,
/// `s[i][i]` dividing `s[i+1][i+1]`, and nonnegative diagonal entries.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: Vec<Vec<i128>>,
    pub u_inv: Vec<Vec<i128>>,
    pub s: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    pub v_inv: Vec<Vec<i128>>,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i128> {
        (0..self.s.len().min(self.s.first().map_or(0, |r| r.len())))
            .map(|i| self.s[i][i])
            .collect()
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

struct Work {
    s: Vec<Vec<i128>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    v_inv: Vec<Vec<i128>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.s.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        for k in 0..self.s[0].len() {
            let t = self.s[j][k] * c;
            self.s[i][k] += t;
        }
        for k in 0..self.u.len() {
            let t = self.u[j][k] * c;
            self.u[i][k] += t;
        }
        for row in self.u_inv.iter_mut() {
            row[j] -= c * row[i];
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.s[i].iter_mut() {
            *x = -*x;
        }
        for x in self.u[i].iter_mut() {
            *x = -*x;
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -row[i];
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.s.iter_mut() {
            row.swap(i, j);
        }
        for row in self.v.iter_mut() {
            row.swap(i, j);
        }
        self.v_inv.swap(i, j);
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        for row in self.s.iter_mut() {
            row[i] += c * row[j];
        }
        for row in self.v.iter_mut() {
            row[i] += c * row[j];
        }
        let n = self.v_inv.len();
        for k in 0..n {
            let t = self.v_inv[i][k] * c;
            self.v_inv[j][k] -= t;
        }
    }
}

/// Smith normal form of an `rows x cols` integer matrix.
pub fn smith_normal_form(a: &[Vec<i128>], rows: usize, cols: usize) -> Snf {
    let mut w = Work {
        s: if rows == 0 { vec![] } else { a.to_vec() },
        u: identity(rows),
        u_inv: identity(rows),
        v: identity(cols),
        v_inv: identity(cols),
    };
    if rows == 0 || cols == 0 {
        return Snf {
            u: w.u,
            u_inv: w.u_inv,
            s: w.s,
            v: w.v,
            v_inv: w.v_inv,
            rank: 0,
        };
    }
    let mut t = 0;
    while t < rows.min(cols) {
        // Pivot: smallest nonzero absolute value in the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.s[i][j] != 0 && best.map_or(true, |(bi, bj)| w.s[i][j].abs() < w.s[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.s[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = w.s[i][t].div_euclid(p);
                if q != 0 {
                    w.add_row(i, t, -q);
                }
                if w.s[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = w.s[t][j].div_euclid(p);
                if q != 0 {
                    w.add_col(j, t, -q);
                }
                if w.s[t][j] != 0 {
                    dirty = true;
                }
            }
            if !dirty {
                // Divisibility of the remaining block.
                let mut fix = None;
                'outer: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if w.s[i][j] % p != 0 {
                            fix = Some(i);
                            break 'outer;
                        }
                    }
                }
                match fix {
                    Some(i) => {
                        w.add_row(t, i, 1);
                        continue;
                    }
                    None => break,
                }
            }
            // Move the smallest entry of row/column t to the pivot.
            let mut best = (t, t);
            for i in t..rows {
                if w.s[i][t] != 0 && w.s[i][t].abs() < w.s[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if w.s[t][j] != 0 && w.s[t][j].abs() < w.s[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                w.swap_rows(t, best.0);
            }
            if best.1 != t {
                w.swap_cols(t, best.1);
            }
        }
        if w.s[t][t] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    Snf {
        u: w.u,
        u_inv: w.u_inv,
        s: w.s,
        v: w.v,
        v_inv: w.v_inv,
        rank: t,
    }
}
