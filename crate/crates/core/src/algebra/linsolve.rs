//! Exact linear algebra over rational functions.

use super::ratfun::RationalFunction;

type Matrix = Vec<Vec<RationalFunction>>;

/// Cost used to pick pivots: smaller entries keep intermediate swell down.
fn weight(x: &RationalFunction) -> usize {
    x.numer().num_terms() + x.denom().num_terms()
}

/// Row echelon form in place. Returns the pivot column of each pivot row.
fn echelon(m: &mut Matrix, cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Fewest remaining nonzeros first limits fill-in; then smallest entry.
        let Some(p) = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c..cols].iter().filter(|x| !x.is_zero()).count(), weight(&m[i][c])))
        else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip().expect("pivot is nonzero");
        let row: Vec<RationalFunction> = m[r].iter().map(|x| x * &inv).collect();
        m[r] = row;
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..m[i].len() {
                if !m[r][j].is_zero() {
                    let d = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A x = b`.
///
/// Returns `None` if the system is inconsistent. For underdetermined systems
/// the free variables are set to zero.
pub fn linear_solve(a: &[Vec<RationalFunction>], b: &[RationalFunction]) -> Option<Vec<RationalFunction>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), cols, "ragged matrix");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m, cols);
    // A zero row with nonzero right-hand side means inconsistency.
    if m[pivots.len()..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![RationalFunction::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Basis of the right nullspace of `A`, one vector per free column.
pub fn nullspace(a: &[Vec<RationalFunction>], cols: usize) -> Vec<Vec<RationalFunction>> {
    let mut m: Matrix = a.to_vec();
    let pivots = echelon(&mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![RationalFunction::zero(); cols];
        v[free] = RationalFunction::one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -&m[r][free];
        }
        basis.push(v);
    }
    basis
}
