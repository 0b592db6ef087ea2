// SPDX-License-Identifier: Apache-2.0

//! Index bookkeeping for the exterior algebra of `ℝ⁴`.
//!
//! A basis monomial `dx_{i₁} ∧ … ∧ dx_{iₘ}` with `i₁ < … < iₘ` is stored as the
//! bitmask with bits `i₁, …, iₘ` set.

use std::ops::{Add, Mul, Neg};

use num_traits::Zero;

pub const DIM: usize = 4;

/// Basis masks of degree `m`, in lexicographic order of their index tuples.
pub fn masks(m: usize) -> Vec<u8> {
    let mut out: Vec<u8> = (0u8..16).filter(|x| x.count_ones() as usize == m).collect();
    out.sort_by_key(|&x| indices(x));
    out
}

pub fn indices(mask: u8) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn mask_of(idx: &[usize]) -> u8 {
    idx.iter().fold(0u8, |m, &i| m | (1 << i))
}

pub fn degree(mask: u8) -> usize {
    mask.count_ones() as usize
}

/// Sign of `dx_A ∧ dx_B` relative to `dx_{A∪B}`, or `None` when `A ∩ B ≠ ∅`.
pub fn wedge_sign(a: u8, b: u8) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0;
    for i in indices(a) {
        for j in indices(b) {
            if i > j {
                inversions += 1;
            }
        }
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Sign of a permutation given as a sequence of distinct indices.
pub fn perm_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minor `det(M[rows, cols])` by the Leibniz formula (sizes ≤ 4).
pub fn minor<T>(m: &[[T; 4]; 4], rows: u8, cols: u8) -> T
where
    T: Clone + Zero + Neg<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T> + Add<&'a T, Output = T>,
{
    let r = indices(rows);
    let c = indices(cols);
    debug_assert_eq!(r.len(), c.len());
    let mut total = T::zero();
    for p in permutations(r.len()) {
        let mut term: Option<T> = None;
        for (ri, &pi) in p.iter().enumerate() {
            let entry = &m[r[ri]][c[pi]];
            term = Some(match term {
                None => entry.clone(),
                Some(t) => &t * entry,
            });
        }
        let term = term.unwrap_or_else(|| unreachable!("minor of size 0"));
        total = if perm_sign(&p) > 0 { &total + &term } else { &total + &(-term) };
    }
    total
}

/// Complement mask and the sign `ε` with `dx_A ∧ dx_{Aᶜ} = ε · dx₀₁₂₃`.
pub fn complement(mask: u8) -> (u8, i32) {
    let c = !mask & 0b1111;
    (c, wedge_sign(mask, c).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_orders() {
        assert_eq!(masks(2).iter().map(|&m| indices(m)).collect::<Vec<_>>(), vec![
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 2],
            vec![1, 3],
            vec![2, 3]
        ]);
        assert_eq!(masks(0), vec![0]);
        assert_eq!(masks(4), vec![0b1111]);
    }

    #[test]
    fn signs() {
        assert_eq!(wedge_sign(mask_of(&[1]), mask_of(&[0])), Some(-1));
        assert_eq!(wedge_sign(mask_of(&[0, 2]), mask_of(&[1, 3])), Some(-1));
        assert_eq!(wedge_sign(mask_of(&[0, 1]), mask_of(&[2, 3])), Some(1));
        assert_eq!(wedge_sign(mask_of(&[0, 1]), mask_of(&[1])), None);
        assert_eq!(complement(mask_of(&[1])), (mask_of(&[0, 2, 3]), -1));
    }

    #[test]
    fn minor_matches_direct_determinant() {
        let m: [[f64; 4]; 4] = [[2.0, 1.0, 0.0, 3.0], [1.0, 4.0, 1.0, 0.0], [0.0, 2.0, 5.0, 1.0], [1.0, 0.0, 1.0, 2.0]];
        let full: f64 = minor(&m, 0b1111, 0b1111);
        let n = nalgebra::Matrix4::from_fn(|r, c| m[r][c]);
        assert!((full - n.determinant()).abs() < 1e-12);
        assert_eq!(minor(&m, mask_of(&[0, 1]), mask_of(&[0, 1])), 7.0);
    }
}
