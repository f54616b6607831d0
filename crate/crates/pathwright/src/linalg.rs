//! Small dense solves with an explicit pivot tolerance.

use nalgebra::DMatrix;

/// Gauss-Jordan inverse with partial pivoting. Returns `None` when a pivot
/// falls below `tol` (singular to working precision).
pub fn invert_with_tol(m: &DMatrix<f64>, tol: f64) -> Option<DMatrix<f64>> {
    let k = m.nrows();
    assert_eq!(k, m.ncols());
    let mut a = m.clone();
    let mut inv = DMatrix::identity(k, k);
    for col in 0..k {
        let (pivot_row, pivot) = (col..k)
            .map(|r| (r, a[(r, col)].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if pivot < tol {
            return None;
        }
        if pivot_row != col {
            a.swap_rows(pivot_row, col);
            inv.swap_rows(pivot_row, col);
        }
        let d = a[(col, col)];
        for j in 0..k {
            a[(col, j)] /= d;
            inv[(col, j)] /= d;
        }
        for r in 0..k {
            if r != col {
                let f = a[(r, col)];
                if f != 0.0 {
                    for j in 0..k {
                        a[(r, j)] -= f * a[(col, j)];
                        inv[(r, j)] -= f * inv[(col, j)];
                    }
                }
            }
        }
    }
    Some(inv)
}
