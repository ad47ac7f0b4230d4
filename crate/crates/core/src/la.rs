//! Exact linear algebra over Q, just enough for number-field work:
//! expressing vectors in a spanning set and finding the first linear
//! dependence in a sequence of vectors.

use rug::Rational;

/// Incremental row space over Q with expression tracking.
///
/// Rows are inserted one at a time; each accepted row is stored in echelon
/// form together with its expression in terms of the *original* inserted
/// rows, so membership queries can report exact combinations.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    dim: usize,
    /// (echelon row, pivot column, combination over original rows)
    echelon: Vec<(Vec<Rational>, usize, Vec<Rational>)>,
    inserted: usize,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            echelon: Vec::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon.len()
    }

    /// Reduce `v` against the current echelon rows. Returns the residual and
    /// the combination of original rows subtracted from `v`.
    fn reduce(&self, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        assert_eq!(v.len(), self.dim);
        let mut res: Vec<Rational> = v.to_vec();
        let mut combo = vec![Rational::new(); self.inserted];
        for (row, pivot, expr) in &self.echelon {
            let c = res[*pivot].clone();
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for (r, x) in res.iter_mut().zip(row.iter()) {
                *r -= Rational::from(&c * x);
            }
            for (acc, e) in combo.iter_mut().zip(expr.iter()) {
                *acc += Rational::from(&c * e);
            }
        }
        (res, combo)
    }

    /// Insert a row. Returns `Ok(())` if it enlarged the span, or
    /// `Err(combination)` expressing the row over previously inserted rows.
    pub fn insert(&mut self, v: &[Rational]) -> Result<(), Vec<Rational>> {
        let (mut res, combo) = self.reduce(v);
        let pivot = res
            .iter()
            .position(|c| c.cmp0() != std::cmp::Ordering::Equal);
        match pivot {
            None => {
                self.inserted += 1;
                Err(combo)
            }
            Some(p) => {
                let lead = res[p].clone();
                for c in res.iter_mut() {
                    *c /= &lead;
                }
                // expression of the normalized residual over original rows:
                // (v - combo·rows) / lead, where v is original row `inserted`
                let mut expr = vec![Rational::new(); self.inserted + 1];
                for (e, c) in expr.iter_mut().zip(combo.iter()) {
                    *e = -Rational::from(c / &lead);
                }
                expr[self.inserted] = Rational::from(1) / lead;
                // keep earlier expressions aligned with the new insert count
                for (_, _, ex) in self.echelon.iter_mut() {
                    ex.resize(self.inserted + 1, Rational::new());
                }
                self.echelon.push((res, p, expr));
                self.inserted += 1;
                Ok(())
            }
        }
    }

    /// Express `v` over the original inserted rows, if it lies in the span.
    pub fn express(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let (res, mut combo) = self.reduce(v);
        if res
            .iter()
            .any(|c| c.cmp0() != std::cmp::Ordering::Equal)
        {
            return None;
        }
        combo.resize(self.inserted, Rational::new());
        Some(combo)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.express(v).is_some()
    }
}

/// Solve the square system Ax = b over Q (columns of `a` are `a[j]`).
/// Returns None if A is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    assert!(a.len() == n && a.iter().all(|col| col.len() == n));
    // augmented matrix, row major
    let mut m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| a[j][i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| m[r][col].cmp0() != std::cmp::Ordering::Equal)?;
        m.swap(col, pivot);
        let lead = m[col][col].clone();
        for c in m[col].iter_mut() {
            *c /= &lead;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r][col].clone();
            if f.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            for c in 0..=n {
                let sub = Rational::from(&f * &m[col][c]);
                m[r][c] -= sub;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}
