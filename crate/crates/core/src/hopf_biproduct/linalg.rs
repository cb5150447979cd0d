//! Sparse vectors, tensors and matrices over a fixed cyclotomic field.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cyclotomic::{CycloNum, CyclotomicField};
use crate::error::{Error, Result};

pub type Vector = BTreeMap<usize, CycloNum>;
pub type Tensor = BTreeMap<(usize, usize), CycloNum>;
pub type Tensor3 = BTreeMap<(usize, usize, usize), CycloNum>;

/// Adds `c` at `key`, dropping the entry if it cancels.
pub fn add_term<K: Ord>(v: &mut BTreeMap<K, CycloNum>, key: K, c: CycloNum) {
    if c.is_zero() {
        return;
    }
    match v.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = &*e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn basis_vector(f: &Arc<CyclotomicField>, i: usize) -> Vector {
    let mut v = Vector::new();
    v.insert(i, CycloNum::one_in(f));
    v
}

pub fn scale<K: Ord + Clone>(v: &BTreeMap<K, CycloNum>, c: &CycloNum) -> BTreeMap<K, CycloNum> {
    if c.is_zero() {
        return BTreeMap::new();
    }
    v.iter().map(|(k, x)| (k.clone(), x * c)).collect()
}

pub fn add<K: Ord + Clone>(a: &BTreeMap<K, CycloNum>, b: &BTreeMap<K, CycloNum>) -> BTreeMap<K, CycloNum> {
    let mut out = a.clone();
    for (k, c) in b {
        add_term(&mut out, k.clone(), c.clone());
    }
    out
}

pub fn sub<K: Ord + Clone>(a: &BTreeMap<K, CycloNum>, b: &BTreeMap<K, CycloNum>) -> BTreeMap<K, CycloNum> {
    let mut out = a.clone();
    for (k, c) in b {
        add_term(&mut out, k.clone(), -c);
    }
    out
}

/// A linear map given by the images of basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub dom: usize,
    pub cod: usize,
    pub cols: Vec<Vector>,
}

impl LinMap {
    pub fn new(dom: usize, cod: usize, cols: Vec<Vector>) -> Result<Self> {
        if cols.len() != dom || cols.iter().any(|c| c.keys().any(|&k| k >= cod)) {
            return Err(Error::InvalidInput("column data does not fit the declared shape".into()));
        }
        Ok(Self { dom, cod, cols })
    }

    pub fn identity(f: &Arc<CyclotomicField>, n: usize) -> Self {
        Self { dom: n, cod: n, cols: (0..n).map(|i| basis_vector(f, i)).collect() }
    }

    /// The map sending basis vector `i` to basis vector `table[i]`.
    pub fn from_table(f: &Arc<CyclotomicField>, cod: usize, table: &[usize]) -> Self {
        Self { dom: table.len(), cod, cols: table.iter().map(|&j| basis_vector(f, j)).collect() }
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, c) in v {
            for (&j, d) in &self.cols[i] {
                add_term(&mut out, j, c * d);
            }
        }
        out
    }

    pub fn col(&self, i: usize) -> &Vector {
        &self.cols[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinMap) -> Result<LinMap> {
        if other.cod != self.dom {
            return Err(Error::InvalidInput("composition of incompatible maps".into()));
        }
        Ok(LinMap { dom: other.dom, cod: self.cod, cols: other.cols.iter().map(|c| self.apply(c)).collect() })
    }

    /// `(self ⊗ other)` applied to a tensor.
    pub fn tensor_apply(&self, other: &LinMap, t: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (&(i, j), c) in t {
            for (&a, x) in &self.cols[i] {
                let cx = c * x;
                for (&b, y) in &other.cols[j] {
                    add_term(&mut out, (a, b), &cx * y);
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> Result<usize> {
        let mut rows: Vec<Vector> = self.cols.iter().filter(|c| !c.is_empty()).cloned().collect();
        let mut rank = 0;
        while let Some(pivot_row) = rows.pop() {
            let Some((&p, pc)) = pivot_row.iter().next() else { continue };
            let inv = pc.inverse()?;
            let pivot = scale(&pivot_row, &inv);
            rank += 1;
            for r in rows.iter_mut() {
                if let Some(c) = r.get(&p).cloned() {
                    *r = sub(r, &scale(&pivot, &c));
                }
            }
            rows.retain(|r| !r.is_empty());
        }
        Ok(rank)
    }

    pub fn is_bijective(&self) -> Result<bool> {
        Ok(self.dom == self.cod && self.rank()? == self.dom)
    }

    /// If every column is a single basis vector with coefficient one, the
    /// underlying index map.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.dom);
        for c in &self.cols {
            if c.len() != 1 {
                return None;
            }
            let (&j, x) = c.iter().next().expect("one entry");
            if !x.is_one() {
                return None;
            }
            out.push(j);
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::field;

    #[test]
    fn rank_and_composition() {
        let f = field(4).unwrap();
        let i = CycloNum::zeta_pow_in(&f, 1);
        let one = CycloNum::one_in(&f);
        let mut c0 = Vector::new();
        c0.insert(0, one.clone());
        c0.insert(1, i.clone());
        let mut c1 = Vector::new();
        c1.insert(0, i.clone());
        c1.insert(1, -&one);
        let m = LinMap::new(2, 2, vec![c0, c1]).unwrap();
        assert_eq!(m.rank().unwrap(), 1);
        let id = LinMap::identity(&f, 2);
        assert_eq!(id.compose(&m).unwrap(), m);
        assert!(id.is_bijective().unwrap());
        let swap = LinMap::from_table(&f, 2, &[1, 0]);
        assert_eq!(swap.compose(&swap).unwrap(), id);
        assert_eq!(swap.as_permutation(), Some(vec![1, 0]));
    }

    #[test]
    fn cancellation_removes_entries() {
        let f = field(3).unwrap();
        let mut v = Vector::new();
        add_term(&mut v, 2, CycloNum::one_in(&f));
        add_term(&mut v, 2, -CycloNum::one_in(&f));
        assert!(v.is_empty());
    }
}
