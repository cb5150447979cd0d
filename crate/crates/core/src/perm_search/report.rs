use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian_group::FiniteAbelianGroup;
use crate::error::{Error, Result};

use super::Perm;

/// Outcome of a closure check on a finite set of permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClosureCertificate {
    Closed,
    Empty,
    MissingIdentity,
    ProductOutside { left: usize, right: usize },
    InverseOutside { element: usize },
}

impl ClosureCertificate {
    pub fn is_closed(&self) -> bool {
        matches!(self, ClosureCertificate::Closed)
    }
}

/// Checks that `perms` (sorted) is a subgroup of the symmetric group.
pub fn check_group_closure(perms: &[Perm]) -> ClosureCertificate {
    let Some(first) = perms.first() else { return ClosureCertificate::Empty };
    let set: HashSet<&Perm> = perms.iter().collect();
    if !set.contains(&Perm::identity(first.len())) {
        return ClosureCertificate::MissingIdentity;
    }
    for (i, p) in perms.iter().enumerate() {
        if !set.contains(&p.inverse()) {
            return ClosureCertificate::InverseOutside { element: i };
        }
        for (j, q) in perms.iter().enumerate() {
            if !set.contains(&p.compose(q)) {
                return ClosureCertificate::ProductOutside { left: i, right: j };
            }
        }
    }
    ClosureCertificate::Closed
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn perm_order(p: &Perm) -> u64 {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut ord = 1u64;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0u64;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p.apply(x);
            len += 1;
        }
        ord = ord.lcm(&len);
    }
    ord
}

/// Invariant-factor label (`"Z6 x Z2"`) of an abelian group given by the
/// multiset of its element orders. Factors are listed in descending order.
pub fn abelian_label(element_orders: &[u64]) -> String {
    let order = element_orders.len() as u64;
    if order <= 1 {
        return "Z1".into();
    }
    // For each prime, the partition of the p-part is read off from the
    // counts of elements killed by p^i.
    let mut factors: Vec<u64> = Vec::new();
    for p in prime_factors(order) {
        let mut logs = vec![0u32];
        let mut pi = 1u64;
        loop {
            pi *= p;
            let mut c = element_orders.iter().filter(|&&o| pi % o == 0).count() as u64;
            let mut l = 0;
            while c > 1 {
                c /= p;
                l += 1;
            }
            if l == *logs.last().expect("nonempty") {
                break;
            }
            logs.push(l);
        }
        // ge[i] = number of parts of size > i
        let ge: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let num_parts = ge.first().copied().unwrap_or(0) as usize;
        for j in 0..num_parts {
            let size = ge.iter().filter(|&&d| d as usize > j).count() as u32;
            if factors.len() <= j {
                factors.push(1);
            }
            factors[j] *= p.pow(size);
        }
    }
    factors.sort_unstable_by(|a, b| b.cmp(a));
    factors.iter().map(|f| format!("Z{f}")).collect::<Vec<_>>().join(" x ")
}

/// A finite permutation group with canonical element order and a few flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermGroupReport {
    pub elements: Vec<Perm>,
    pub order: usize,
    pub generators: Vec<Perm>,
    pub closure: ClosureCertificate,
    pub is_closed: bool,
    pub contains_aut_sigma: bool,
    pub abelian: bool,
    pub label: String,
    /// Number of elements that are group automorphisms.
    pub additive: usize,
}

fn generated(gens: &[Perm], n: usize) -> HashSet<Perm> {
    let mut set = HashSet::new();
    let id = Perm::identity(n);
    set.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.compose(&x);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

impl PermGroupReport {
    pub fn new(group: &FiniteAbelianGroup, mut elements: Vec<Perm>, aut: Option<&[Perm]>) -> Result<Self> {
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InternalInconsistency("duplicate permutations in enumeration".into()));
        }
        let n = group.order();
        let closure = check_group_closure(&elements);
        let is_closed = closure.is_closed();
        let contains_aut_sigma = aut.map_or(true, |a| a.iter().all(|x| elements.binary_search(x).is_ok()));
        let abelian = elements.iter().all(|p| elements.iter().all(|q| p.compose(q) == q.compose(p)));
        let mut generators = Vec::new();
        if is_closed {
            let mut span = generated(&generators, n);
            for e in &elements {
                if !span.contains(e) {
                    generators.push(e.clone());
                    span = generated(&generators, n);
                }
            }
        }
        let label = if is_closed && abelian {
            abelian_label(&elements.iter().map(perm_order).collect::<Vec<_>>())
        } else {
            format!("order {}", elements.len())
        };
        let additive = elements.iter().filter(|p| p.is_additive(group)).count();
        Ok(Self { order: elements.len(), elements, generators, closure, is_closed, contains_aut_sigma, abelian, label, additive })
    }

    /// Element-order histogram.
    pub fn order_histogram(&self) -> BTreeMap<u64, usize> {
        let mut h = BTreeMap::new();
        for e in &self.elements {
            *h.entry(perm_order(e)).or_insert(0) += 1;
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders_of(moduli: &[u64]) -> Vec<u64> {
        let g = FiniteAbelianGroup::new(moduli).unwrap();
        g.elements().map(|a| g.element_order(a)).collect()
    }

    #[test]
    fn labels() {
        assert_eq!(abelian_label(&orders_of(&[6, 2])), "Z6 x Z2");
        assert_eq!(abelian_label(&orders_of(&[2, 3, 2])), "Z6 x Z2");
        assert_eq!(abelian_label(&orders_of(&[4, 2, 8])), "Z8 x Z4 x Z2");
        assert_eq!(abelian_label(&orders_of(&[9])), "Z9");
        assert_eq!(abelian_label(&orders_of(&[1])), "Z1");
        assert_eq!(abelian_label(&orders_of(&[3, 3, 5])), "Z15 x Z3");
    }

    #[test]
    fn closure_failures() {
        let id = Perm::identity(3);
        let swap = Perm::from_table(vec![1, 0, 2]).unwrap();
        let cyc = Perm::from_table(vec![1, 2, 0]).unwrap();
        assert!(check_group_closure(&[id.clone(), swap.clone()]).is_closed());
        assert_eq!(check_group_closure(&[swap.clone()]), ClosureCertificate::MissingIdentity);
        assert_eq!(check_group_closure(&[id.clone(), cyc.clone()]), ClosureCertificate::InverseOutside { element: 1 });
        let mut s = vec![id, swap, Perm::from_table(vec![0, 2, 1]).unwrap()];
        s.sort();
        assert!(matches!(check_group_closure(&s), ClosureCertificate::ProductOutside { .. }));
    }
}
