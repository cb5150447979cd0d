//! Equality theorems between `Aut_σ`, `Γ` and `Sym_σ`, each checked on a
//! concrete `(G, σ)`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian_group::{fixed_subgroup, quotient, FiniteAbelianGroup, GroupMap};
use crate::error::{Error, Result};
use crate::perm_search::{
    all_automorphisms, aut_sigma_elements, enumerate, for_each_permutation, gamma_witnesses, validate, BruteCap, Perm,
    SigmaContext, Strategy, Target,
};

/// Which sufficient conditions for `Γ = Aut_σ` hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoFixHypotheses {
    /// `σ` has a unique fixed point.
    pub a: bool,
    /// `gcd(|σ|, |G|) = 1`.
    pub b: bool,
    /// `|σ|` is prime and its square does not divide `|G|`.
    pub c: bool,
}

impl NoFixHypotheses {
    pub fn of(sigma: &GroupMap) -> Result<Self> {
        let g = sigma.group();
        let n = crate::abelian_group::map_order(sigma)?;
        let order = g.order() as u64;
        Ok(Self {
            a: g.elements().filter(|&x| sigma.eval(x) == x).count() == 1,
            b: n.gcd(&order) == 1,
            c: super::is_prime(n) && order % (n * n) != 0,
        })
    }

    pub fn any(&self) -> bool {
        self.a || self.b || self.c
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoFixReport {
    pub hypotheses: NoFixHypotheses,
    pub aut_order: usize,
    pub gamma_order: usize,
    pub equal: bool,
}

pub fn check_sigma_nofix(sigma: &GroupMap) -> Result<NoFixReport> {
    let ctx = SigmaContext::new(sigma)?;
    let aut = aut_sigma_elements(&ctx)?;
    let gamma = enumerate(&ctx, Target::Gamma, Strategy::Constrained, BruteCap::default())?;
    Ok(NoFixReport {
        hypotheses: NoFixHypotheses::of(sigma)?,
        aut_order: aut.len(),
        gamma_order: gamma.len(),
        equal: aut == gamma,
    })
}

/// For each witness `(τ, α)` whose only `σ`-fixed point in `Ker(α)` is `0`,
/// whether `τ` is additive. Returns `(checked, all additive)`.
pub fn check_only_fixed_zero(ctx: &SigmaContext) -> Result<(usize, bool)> {
    let g = &ctx.group;
    let mut checked = 0;
    let mut ok = true;
    for w in gamma_witnesses(ctx, Strategy::Constrained, BruteCap::default(), 1)? {
        let fixed_in_kernel = g.elements().filter(|&x| ctx.sigma.eval(x) == x && w.alpha.eval(x) == 0).count();
        if fixed_in_kernel == 1 {
            checked += 1;
            ok &= w.tau.is_additive(g);
        }
    }
    Ok((checked, ok))
}

/// For every invariant `α` and every `s`: with `m = σ(s) − s` and
/// `f = m + σ(m) + ⋯ + σ^{|m|−1}(m)`, `m, f ∈ Ker(α)`, `σ(f) = f` and
/// `|s| = ord(f)·|m|`.
pub fn check_orbit_lengths(ctx: &SigmaContext) -> Result<bool> {
    let g = &ctx.group;
    let len = &ctx.orbits.len_of;
    for alpha in ctx.invariant_characters()? {
        for s in g.elements() {
            let m = g.sub_idx(ctx.sigma.eval(s), s);
            let f = (0..len[m] as u64).fold(0, |acc, k| g.add_idx(acc, ctx.sigma_pow(k, m)));
            if alpha.eval(m) != 0 || alpha.eval(f) != 0 || ctx.sigma.eval(f) != f {
                return Ok(false);
            }
            if len[s] as u64 != g.element_order(f) * len[m] as u64 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityReport {
    pub aut_order: usize,
    pub sym_order: usize,
    pub equal: bool,
}

/// `Sym_σ = Aut_σ` for an involution of an odd-order group. `Sym_σ` is
/// found by scanning `Sym(G)` under `cap`.
pub fn check_involution(sigma: &GroupMap, cap: BruteCap) -> Result<EqualityReport> {
    let g = sigma.group();
    if g.order() % 2 == 0 {
        return Err(Error::Precondition(format!("|G| = {} is even", g.order())));
    }
    if sigma.is_identity() || !sigma.compose(sigma)?.is_identity() {
        return Err(Error::Precondition("σ must have order exactly two".into()));
    }
    let ctx = SigmaContext::new(sigma)?;
    let mut sym = enumerate(&ctx, Target::SymMinus, Strategy::Brute, cap)?;
    sym.sort();
    let aut = aut_sigma_elements(&ctx)?;
    Ok(EqualityReport { aut_order: aut.len(), sym_order: sym.len(), equal: aut == sym })
}

/// All `σ` with `σ² = id`, `σ ≠ id`.
pub fn involutions(g: &FiniteAbelianGroup) -> Result<Vec<GroupMap>> {
    Ok(all_automorphisms(g)?
        .into_iter()
        .filter(|s| !s.is_identity() && s.compose(s).map(|t| t.is_identity()).unwrap_or(false))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub quotient_moduli: Vec<u64>,
    pub quotient_fixed_points: usize,
    pub sym_order: usize,
    /// `τ ∈ Sym_σ` with `τ̄ ∈ Aut_σ̄`.
    pub premises: usize,
    /// Premises that also have `τ ∈ Aut_σ`.
    pub conclusions: usize,
}

impl ReductionReport {
    pub fn holds(&self) -> bool {
        self.quotient_fixed_points == 1 && self.premises == self.conclusions
    }
}

/// The reduction to `Ḡ = G/G_σ`, requiring `gcd(|σ|, |G|) = 1`.
pub fn check_reduction(sigma: &GroupMap, strategy: Strategy, cap: BruteCap) -> Result<ReductionReport> {
    let n = crate::abelian_group::map_order(sigma)?;
    let order = sigma.group().order() as u64;
    if n.gcd(&order) != 1 {
        return Err(Error::Precondition(format!("gcd(|σ|, |G|) = gcd({n}, {order}) ≠ 1")));
    }
    check_reduction_conclusions(sigma, strategy, cap)
}

/// The conclusions of the reduction without checking its coprimality
/// hypothesis.
pub fn check_reduction_conclusions(sigma: &GroupMap, strategy: Strategy, cap: BruteCap) -> Result<ReductionReport> {
    let g = sigma.group();
    let q = quotient(&fixed_subgroup(sigma))?;
    let sigma_bar = q.induced_map(sigma)?;
    let qg = &q.group;
    let quotient_fixed_points = qg.elements().filter(|&x| sigma_bar.eval(x) == x).count();
    let ctx = SigmaContext::new(sigma)?;
    let ctx_bar = SigmaContext::new(&sigma_bar)?;
    let sym = enumerate(&ctx, Target::SymMinus, strategy, cap)?;
    let lifts = q.lifts();
    let (mut premises, mut conclusions) = (0, 0);
    for tau in &sym {
        let table: Vec<usize> = qg.elements().map(|x| q.projection[tau.apply(lifts[x])]).collect();
        if g.elements().any(|a| q.projection[tau.apply(a)] != table[q.projection[a]]) {
            return Err(Error::InternalInconsistency("τ does not descend to G/G_σ".into()));
        }
        let tau_bar = Perm::from_table(table)?;
        if validate::is_automorphism(qg, &tau_bar) && validate::commutes_with_sigma(&ctx_bar, &tau_bar) {
            premises += 1;
            if validate::is_automorphism(g, tau) && validate::commutes_with_sigma(&ctx, tau) {
                conclusions += 1;
            }
        }
    }
    Ok(ReductionReport {
        quotient_moduli: qg.moduli().to_vec(),
        quotient_fixed_points,
        sym_order: sym.len(),
        premises,
        conclusions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymEqualityReport {
    pub minus_order: usize,
    pub plus_order: usize,
    pub equal: bool,
}

/// `Sym_σ⁻ = Sym_σ⁺`. With the brute strategy both memberships are
/// decided on every permutation of `G`.
pub fn check_sym_equality(sigma: &GroupMap, strategy: Strategy, cap: BruteCap) -> Result<SymEqualityReport> {
    let ctx = SigmaContext::new(sigma)?;
    match strategy {
        Strategy::Constrained => {
            let minus = enumerate(&ctx, Target::SymMinus, strategy, cap)?;
            let plus = enumerate(&ctx, Target::SymPlus, strategy, cap)?;
            Ok(SymEqualityReport { minus_order: minus.len(), plus_order: plus.len(), equal: minus == plus })
        }
        Strategy::Brute => {
            cap.check(ctx.n())?;
            let (mut minus, mut plus, mut equal) = (0, 0, true);
            for_each_permutation(ctx.n(), |t| {
                let tau = Perm::from_table(t.to_vec()).expect("permutation");
                let a = validate::is_sym_minus(&ctx, &tau);
                let b = validate::is_sym_plus(&ctx, &tau);
                minus += a as usize;
                plus += b as usize;
                equal &= a == b;
            });
            Ok(SymEqualityReport { minus_order: minus, plus_order: plus, equal })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub aut: bool,
    pub gamma: bool,
    pub sym_minus: bool,
    pub sym_plus: bool,
}

impl OracleReport {
    pub fn holds(&self) -> bool {
        self.aut && self.gamma && self.sym_minus && self.sym_plus
    }
}

/// Constrained and brute enumerations agree as sets.
pub fn check_oracle(sigma: &GroupMap, cap: BruteCap) -> Result<OracleReport> {
    let ctx = SigmaContext::new(sigma)?;
    let same = |t: Target| -> Result<bool> {
        let a: BTreeSet<Perm> = enumerate(&ctx, t, Strategy::Constrained, cap)?.into_iter().collect();
        let b: BTreeSet<Perm> = enumerate(&ctx, t, Strategy::Brute, cap)?.into_iter().collect();
        Ok(a == b)
    };
    Ok(OracleReport {
        aut: same(Target::AutSigma)?,
        gamma: same(Target::Gamma)?,
        sym_minus: same(Target::SymMinus)?,
        sym_plus: same(Target::SymPlus)?,
    })
}

/// Invariant-factor moduli `d₁ | d₂ | ⋯` of every abelian group of order
/// `n`, smallest factors first; `[1]` for the trivial group.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    fn rec(rest: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        for d in min..=rest {
            if rest % d == 0 && cur.last().map_or(true, |&l| d % l == 0) {
                cur.push(d);
                rec(rest / d, d, cur, out);
                cur.pop();
            }
        }
    }
    if n == 1 {
        return vec![vec![1]];
    }
    let mut out = Vec::new();
    rec(n, 2, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: u64, k: i64) -> GroupMap {
        GroupMap::scalar(&FiniteAbelianGroup::cyclic(n).unwrap(), k)
    }

    #[test]
    fn groups_by_order() {
        assert_eq!(abelian_groups_of_order(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(abelian_groups_of_order(9), vec![vec![3, 3], vec![9]]);
        assert_eq!(abelian_groups_of_order(6), vec![vec![6]]);
        let total: usize = (1..=8).map(|n| abelian_groups_of_order(n).len()).sum();
        assert_eq!(total, 11);
    }

    #[test]
    fn hypotheses() {
        let h = NoFixHypotheses::of(&cyc(5, 2)).unwrap();
        assert!(h.a && h.b && !h.c);
        let g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let swap = GroupMap::from_image_indices(&g, vec![g.index(&[0, 1]), g.index(&[1, 0])]).unwrap();
        assert!(!NoFixHypotheses::of(&swap).unwrap().any());
        let h = NoFixHypotheses::of(&cyc(6, 5)).unwrap();
        assert!(!h.a && !h.b && h.c);
    }

    #[test]
    fn nofix_on_cyclic() {
        let r = check_sigma_nofix(&cyc(9, 2)).unwrap();
        assert!(r.equal);
        assert_eq!(r.aut_order, 6);
    }

    #[test]
    fn involutions_of_small_odd_groups() {
        for (n, k) in [(5, -1), (7, -1)] {
            let r = check_involution(&cyc(n, k), BruteCap::default()).unwrap();
            assert!(r.equal, "{r:?}");
        }
        assert!(matches!(check_involution(&cyc(5, 2), BruteCap::default()), Err(Error::Precondition(_))));
        assert!(matches!(check_involution(&cyc(4, -1), BruteCap::default()), Err(Error::Precondition(_))));
        let g = FiniteAbelianGroup::new(&[3, 3]).unwrap();
        assert!(matches!(check_involution(&involutions(&g).unwrap()[0], BruteCap::default()), Err(Error::ResourceCap(_))));
        assert_eq!(involutions(&FiniteAbelianGroup::cyclic(7).unwrap()).unwrap().len(), 1);
    }

    #[test]
    fn reduction_examples() {
        let r = check_reduction(&cyc(5, 1), Strategy::Constrained, BruteCap::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.quotient_moduli, vec![1]);
        let r = check_reduction(&cyc(7, 2), Strategy::Brute, BruteCap::default()).unwrap();
        assert!(r.holds());
        assert_eq!(r.quotient_moduli, vec![7]);
        let g = FiniteAbelianGroup::new(&[3, 7]).unwrap();
        let s = GroupMap::from_image_indices(&g, vec![g.index(&[1, 0]), g.index(&[0, 2])]).unwrap();
        assert!(matches!(check_reduction(&s, Strategy::Constrained, BruteCap::default()), Err(Error::Precondition(_))));
        let r = check_reduction_conclusions(&s, Strategy::Constrained, BruteCap::default()).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.quotient_moduli, vec![7]);
    }

    #[test]
    fn orbit_lengths_and_fixed_zero() {
        for s in [cyc(9, 2), cyc(8, 3), cyc(7, 2)] {
            let ctx = SigmaContext::new(&s).unwrap();
            assert!(check_orbit_lengths(&ctx).unwrap());
            assert!(check_only_fixed_zero(&ctx).unwrap().1);
        }
    }

    #[test]
    fn sym_equality_both_ways() {
        let s = cyc(8, 3);
        let a = check_sym_equality(&s, Strategy::Constrained, BruteCap::default()).unwrap();
        let b = check_sym_equality(&s, Strategy::Brute, BruteCap::default()).unwrap();
        assert!(a.equal && b.equal);
        assert_eq!(a.minus_order, b.minus_order);
    }
}
