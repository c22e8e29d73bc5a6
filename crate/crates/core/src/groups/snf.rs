use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U * A * V = S` with unimodular `U`, `V`.
///
/// The diagonal of `S` is non-negative and each entry divides the next; zeros come last.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Diagonal entries `s_0, ..., s_{min(m,n)-1}`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct State {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl State {
    fn row_add(&mut self, target: usize, src: usize, k: &BigInt) {
        self.m.add_row_multiple(target, src, k);
        self.u.add_row_multiple(target, src, k);
        self.u_inv.add_col_multiple(src, target, &-k);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.m.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn col_add(&mut self, target: usize, src: usize, k: &BigInt) {
        self.m.add_col_multiple(target, src, k);
        self.v.add_col_multiple(target, src, k);
        self.v_inv.add_row_multiple(src, target, &-k);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// Position of the smallest nonzero |entry| in the lower-right block from `t`, ties row-major.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let e = &self.m[(i, j)];
                if e.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if self.m[b].abs() <= e.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Computes the Smith normal form of `a`.
///
/// Deterministic: the pivot is the smallest nonzero absolute value in the remaining
/// block, ties broken in row-major order.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (rows, cols) = (a.rows(), a.cols());
    let mut st = State {
        m: a.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = st.pivot(t) else {
                return finish(st);
            };
            st.row_swap(t, pi);
            st.col_swap(t, pj);
            let piv = st.m[(t, t)].clone();
            for i in t + 1..rows {
                let q = &st.m[(i, t)] / &piv;
                if !q.is_zero() {
                    st.row_add(i, t, &-q);
                }
            }
            for j in t + 1..cols {
                let q = &st.m[(t, j)] / &piv;
                if !q.is_zero() {
                    st.col_add(j, t, &-q);
                }
            }
            let dirty = (t + 1..rows).any(|i| !st.m[(i, t)].is_zero())
                || (t + 1..cols).any(|j| !st.m[(t, j)].is_zero());
            if dirty {
                continue;
            }
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !st.m[(i, j)].is_multiple_of(&piv)));
            match bad_row {
                Some(i) => st.row_add(t, i, &BigInt::from(1)),
                None => break,
            }
        }
        if st.m[(t, t)].is_negative() {
            st.row_negate(t);
        }
    }
    finish(st)
}

fn finish(st: State) -> Snf {
    Snf { u: st.u, s: st.m, v: st.v, u_inv: st.u_inv, v_inv: st.v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: &IntMatrix) -> Snf {
        let f = smith_normal_form(a);
        assert_eq!(f.u.mul(a).unwrap().mul(&f.v).unwrap(), f.s);
        assert_eq!(f.u.mul(&f.u_inv).unwrap(), IntMatrix::identity(a.rows()));
        assert_eq!(f.v.mul(&f.v_inv).unwrap(), IntMatrix::identity(a.cols()));
        for i in 0..f.s.rows() {
            for j in 0..f.s.cols() {
                if i != j {
                    assert!(f.s[(i, j)].is_zero());
                }
            }
        }
        let d = f.diagonal();
        for w in d.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        f
    }

    #[test]
    fn textbook_example() {
        let a = IntMatrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let f = check(&a);
        assert_eq!(f.diagonal(), crate::groups::int_vec(&[2, 6, 12]));
    }

    #[test]
    fn empty_and_zero_shapes() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
        let f = check(&IntMatrix::zeros(2, 3));
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn coprime_entries_collapse() {
        let a = IntMatrix::from_i64(1, 2, &[4, 6]);
        let f = check(&a);
        assert_eq!(f.diagonal(), crate::groups::int_vec(&[2]));
    }

    #[test]
    fn divisibility_fixup() {
        let a = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let f = check(&a);
        assert_eq!(f.diagonal(), crate::groups::int_vec(&[1, 6]));
    }
}
