//! Row-style Hermite normal form of integer lattices given by spanning vectors.
//!
//! Columns are ordered so that index 0 is the most significant coordinate;
//! each basis row has a positive pivot at its first nonzero column, pivots
//! strictly increase down the basis, and every entry above a pivot lies in
//! `[0, pivot)`.

use std::collections::BTreeMap;

use crate::polycore::int::{ext_gcd, floor_div, is_negative, Int};

/// `dst[from..] -= q * src[from..]`
fn sub_scaled(dst: &mut [Int], src: &[Int], q: &Int, from: usize) {
    if q.is_zero() {
        return;
    }
    for (d, s) in dst[from..].iter_mut().zip(&src[from..]) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Incremental echelon form; rows are keyed by pivot column.
#[derive(Clone, Debug, Default)]
pub struct EchelonBuilder {
    width: usize,
    rows: BTreeMap<usize, Vec<Int>>,
}

impl EchelonBuilder {
    pub fn new(width: usize) -> Self {
        EchelonBuilder { width, rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut v: Vec<Int>) {
        assert_eq!(v.len(), self.width, "vector width");
        let mut start = 0;
        loop {
            let Some(col) = (start..self.width).find(|&i| !v[i].is_zero()) else {
                return;
            };
            let Some(row) = self.rows.get_mut(&col) else {
                if is_negative(&v[col]) {
                    v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                }
                self.rows.insert(col, v);
                return;
            };
            let a = row[col].clone();
            let b = v[col].clone();
            if (&b % &a).is_zero() {
                sub_scaled(&mut v, row, &(&b / &a), col);
            } else {
                let (g, s, t) = ext_gcd(&a, &b);
                let (a_g, b_g) = (&a / &g, &b / &g);
                for i in col..self.width {
                    let (r, x) = (&row[i], &v[i]);
                    if r.is_zero() && x.is_zero() {
                        continue;
                    }
                    let new_row = &s * r + &t * x;
                    let new_v = &a_g * x - &b_g * r;
                    row[i] = new_row;
                    v[i] = new_v;
                }
            }
            start = col + 1;
        }
    }

    pub fn finish(self) -> HermiteBasis {
        let mut rows: Vec<(usize, Vec<Int>)> = self.rows.into_iter().collect();
        for i in 0..rows.len() {
            let (head, tail) = rows.split_at_mut(i);
            let (p, pivot_row) = (&tail[0].0, &tail[0].1);
            for (_, above) in head.iter_mut() {
                let q = floor_div(&above[*p], &pivot_row[*p]);
                sub_scaled(above, pivot_row, &q, *p);
            }
        }
        HermiteBasis { width: self.width, rows }
    }
}

/// A lattice in `ℤ^width` in Hermite normal form; equal lattices have equal
/// bases.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HermiteBasis {
    width: usize,
    rows: Vec<(usize, Vec<Int>)>,
}

impl HermiteBasis {
    pub fn from_vectors<I: IntoIterator<Item = Vec<Int>>>(width: usize, vectors: I) -> Self {
        let mut b = EchelonBuilder::new(width);
        for v in vectors {
            b.insert(v);
        }
        b.finish()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(pivot column, row)` pairs, pivots increasing.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &[Int])> {
        self.rows.iter().map(|(p, r)| (*p, r.as_slice()))
    }

    /// Canonical remainder of `v` modulo the lattice: zero iff `v` lies in it.
    pub fn reduce(&self, mut v: Vec<Int>) -> Vec<Int> {
        assert_eq!(v.len(), self.width, "vector width");
        for (p, row) in &self.rows {
            let q = floor_div(&v[*p], &row[*p]);
            sub_scaled(&mut v, row, &q, *p);
        }
        v
    }

    pub fn contains(&self, v: Vec<Int>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}
