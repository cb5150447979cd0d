//! `R = ℤ_{p²}` and `R = 𝔽_p[x]/(x²)` with `σ(a) = ua` for a generator `u`
//! of `R^×`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::abelian_group::{FiniteAbelianGroup, GroupMap, Orbits};
use crate::error::{Error, Result};
use crate::perm_search::{aut_sigma_elements, sym_sigma_elements, BruteCap, Perm, PermGroupReport, SigmaContext, Strategy};

use super::is_prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalRingKind {
    Zp2,
    Fpx2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRingSpec {
    pub kind: LocalRingKind,
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalRingReport {
    pub kind: LocalRingKind,
    pub p: u64,
    pub moduli: Vec<u64>,
    pub u: Vec<u64>,
    pub m: Vec<u64>,
    pub sigma_order: u64,
    /// `r = |R^× m| = |ℳ| − 1`.
    pub r: usize,
    pub aut_sigma_order: usize,
    pub sym_sigma_order: usize,
    pub g2_order: usize,
    pub aut_label: String,
    pub sym_label: String,
    /// `Aut_σ(R⁺) = ⟨σ⟩`.
    pub aut_is_powers_of_sigma: bool,
    /// `s ↦ τ_s` is an injective homomorphism `ℤ_r → Sym_σ`.
    pub tau_s_hom: bool,
    /// `G₂ = {τ ∈ Sym_σ : τ|_{R^×} = id} = {τ_s}`.
    pub g2_is_fixer: bool,
    /// `Aut_σ × G₂ → Sym_σ`, `(a, t) ↦ a∘t`, is a bijection.
    pub decomposition: bool,
    /// Every `τ ∈ Aut_σ` with `τ(1) = 1` is the identity.
    pub tau_one_identity: bool,
    pub strict: bool,
}

impl LocalRingReport {
    pub fn expected_orders(&self) -> bool {
        let p = self.p as usize;
        self.aut_sigma_order == p * (p - 1) && self.sym_sigma_order == p * (p - 1) * (p - 1)
    }

    pub fn holds(&self) -> bool {
        self.expected_orders()
            && self.aut_is_powers_of_sigma
            && self.tau_s_hom
            && self.g2_is_fixer
            && self.decomposition
            && self.tau_one_identity
            && self.strict == (self.p > 2)
    }
}

struct Ring {
    group: FiniteAbelianGroup,
    kind: LocalRingKind,
    p: u64,
}

impl Ring {
    fn mul(&self, a: usize, b: usize) -> usize {
        let g = &self.group;
        match self.kind {
            LocalRingKind::Zp2 => (a * b) % g.order(),
            LocalRingKind::Fpx2 => {
                let (a0, a1) = (g.coord(a, 0), g.coord(a, 1));
                let (b0, b1) = (g.coord(b, 0), g.coord(b, 1));
                g.index(&[(a0 * b0) % self.p, (a0 * b1 + a1 * b0) % self.p])
            }
        }
    }

    fn one(&self) -> usize {
        match self.kind {
            LocalRingKind::Zp2 => 1,
            LocalRingKind::Fpx2 => self.group.index(&[1, 0]),
        }
    }

    fn mult_order(&self, a: usize) -> Option<u64> {
        let one = self.one();
        let mut x = a;
        for k in 1..=self.group.order() as u64 {
            if x == one {
                return Some(k);
            }
            x = self.mul(x, a);
        }
        None
    }
}

pub fn build_local_ring(spec: &LocalRingSpec) -> Result<LocalRingReport> {
    let p = spec.p;
    if !is_prime(p) {
        return Err(Error::InvalidSpec(format!("p = {p} is not prime")));
    }
    let group = match spec.kind {
        LocalRingKind::Zp2 => FiniteAbelianGroup::new(&[p * p])?,
        LocalRingKind::Fpx2 => FiniteAbelianGroup::new(&[p, p])?,
    };
    let ring = Ring { group: group.clone(), kind: spec.kind, p };
    let units_count = (p * (p - 1)) as usize;
    let (u, m) = match spec.kind {
        LocalRingKind::Zp2 => {
            let u = group
                .elements()
                .find(|&a| ring.mult_order(a) == Some(units_count as u64))
                .ok_or_else(|| Error::InternalInconsistency("no generator of the unit group".into()))?;
            (u, p as usize)
        }
        LocalRingKind::Fpx2 => {
            let v = (1..p).find(|&v| p_order(v, p) == p - 1).unwrap_or(1);
            let u = group.index(&[v, v]);
            (u, group.index(&[0, 1]))
        }
    };
    if ring.mult_order(u) != Some(units_count as u64) {
        return Err(Error::InternalInconsistency(format!("u = {} does not generate R^×", group.element(u))));
    }
    if ring.mul(m, m) != 0 || m == 0 {
        return Err(Error::InternalInconsistency("m² ≠ 0 or m = 0".into()));
    }
    let ideal: BTreeSet<usize> = group.elements().map(|r| ring.mul(r, m)).collect();
    let units: BTreeSet<usize> = group.elements().filter(|&a| ring.mult_order(a).is_some()).collect();
    let nonunits: BTreeSet<usize> = group.elements().filter(|a| !units.contains(a)).collect();
    if ideal != nonunits || ideal.len() != p as usize || units.len() != units_count {
        return Err(Error::InternalInconsistency("Rm is not the maximal ideal".into()));
    }

    let table: Vec<usize> = group.elements().map(|a| ring.mul(u, a)).collect();
    let sigma = GroupMap::from_table(&group, &table)?;
    let orbits = Orbits::new(&sigma)?;
    let ctx = SigmaContext::new(&sigma)?;
    let aut = aut_sigma_elements(&ctx)?;
    let sym = sym_sigma_elements(&ctx, false, Strategy::Constrained, BruteCap::default())?;
    let sym_set: BTreeSet<Perm> = sym.iter().cloned().collect();

    let powers: BTreeSet<Perm> = (0..orbits.order).map(|k| Perm::from_map(&sigma.pow(k))).collect::<Result<_>>()?;
    let aut_set: BTreeSet<Perm> = aut.iter().cloned().collect();
    let aut_is_powers_of_sigma = powers == aut_set;

    let r = ideal.len() - 1;
    let tau_s = |s: u64| -> Result<Perm> {
        let ss = sigma.pow(s);
        Perm::from_table(group.elements().map(|a| if ideal.contains(&a) && a != 0 { ss.eval(a) } else { a }).collect())
    };
    let family = (0..r as u64).map(tau_s).collect::<Result<Vec<_>>>()?;
    let distinct: BTreeSet<&Perm> = family.iter().collect();
    let tau_s_hom = distinct.len() == r
        && family.iter().all(|t| sym_set.contains(t))
        && (0..r).all(|a| (0..r).all(|b| family[a].compose(&family[b]) == family[(a + b) % r]));
    let g2: BTreeSet<Perm> = sym.iter().filter(|t| units.iter().all(|&a| t.apply(a) == a)).cloned().collect();
    let g2_is_fixer = g2 == family.iter().cloned().collect();

    let products: BTreeSet<Perm> = aut.iter().flat_map(|a| g2.iter().map(move |t| a.compose(t))).collect();
    let decomposition = products == sym_set && aut.len() * g2.len() == sym.len();

    let one = ring.one();
    let tau_one_identity = aut.iter().filter(|t| t.apply(one) == one).all(|t| t.is_identity());

    let aut_rep = PermGroupReport::new(&group, aut.clone(), None)?;
    let sym_rep = PermGroupReport::new(&group, sym.clone(), Some(&aut))?;
    Ok(LocalRingReport {
        kind: spec.kind,
        p,
        moduli: group.moduli().to_vec(),
        u: group.coords(u),
        m: group.coords(m),
        sigma_order: orbits.order,
        r,
        aut_sigma_order: aut.len(),
        sym_sigma_order: sym.len(),
        g2_order: g2.len(),
        aut_label: aut_rep.label,
        sym_label: sym_rep.label,
        aut_is_powers_of_sigma,
        tau_s_hom,
        g2_is_fixer,
        decomposition,
        tau_one_identity,
        strict: sym.len() > aut.len(),
    })
}

/// Multiplicative order of `v` in `𝔽_p^×`.
fn p_order(v: u64, p: u64) -> u64 {
    let mut x = v % p;
    let mut k = 1;
    while x != 1 {
        x = x * v % p;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_for_small_primes() {
        for kind in [LocalRingKind::Zp2, LocalRingKind::Fpx2] {
            for p in [2, 3] {
                let r = build_local_ring(&LocalRingSpec { kind, p }).unwrap();
                assert!(r.holds(), "{r:?}");
            }
        }
        let r = build_local_ring(&LocalRingSpec { kind: LocalRingKind::Zp2, p: 3 }).unwrap();
        assert_eq!((r.aut_sigma_order, r.sym_sigma_order), (6, 12));
        assert_eq!(r.aut_label, "Z6");
        assert_eq!(r.sym_label, "Z6 x Z2");
        assert_eq!(r.u, vec![2]);
        let r = build_local_ring(&LocalRingSpec { kind: LocalRingKind::Fpx2, p: 3 }).unwrap();
        assert_eq!(r.u, vec![2, 2]);
    }

    #[test]
    fn composite_p_rejected() {
        assert!(matches!(build_local_ring(&LocalRingSpec { kind: LocalRingKind::Zp2, p: 4 }), Err(Error::InvalidSpec(_))));
    }
}
