//! Subsets of `Sym(G)` attached to an automorphism `σ`:
//!
//! * `Aut_σ(G)`: automorphisms commuting with `σ`;
//! * `Γ`: permutations `τ` admitting a character `α` with `(τ, α)` satisfying
//!   conditions (a)-(d) below;
//! * `Sym_σ^±`: permutations commuting with `σ` that carry every translated
//!   orbit `a ∓ 𝒪` onto `τ(a) ∓ τ(𝒪)`.
//!
//! For `(τ, α)`: (a) `τσ = στ`, (b) `α∘σ = α`, (c) `α^N = 1`, and
//! (d) `τ(s − m) = τ(s) − τ(σ^{ℓ_α(s,m)}(m))` for all `s, m`.
//!
//! Every set can be computed two ways. The constrained strategy backtracks
//! with propagation; the brute strategy scans all of `Sym(G)` and is capped by
//! group order. Membership is always re-certified by the independent
//! validators in [`validate`].

mod brute;
mod report;
mod search;
pub mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian_group::{FiniteAbelianGroup, GroupMap, Orbits};
use crate::characters::{sigma_invariant_characters, Character};
use crate::error::{Error, Result};

pub use brute::for_each_permutation;
pub use report::{abelian_label, check_group_closure, ClosureCertificate, PermGroupReport};
pub use search::{all_automorphisms, aut_sigma_elements};

/// A permutation of `{0, …, n-1}` stored as its value table.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    table: Vec<usize>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.table)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Self { table: (0..n).collect() }
    }

    pub fn from_table(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        let mut seen = vec![false; n];
        for &x in &table {
            if x >= n || seen[x] {
                return Err(Error::InvalidInput("table is not a permutation".into()));
            }
            seen[x] = true;
        }
        Ok(Self { table })
    }

    pub fn from_map(f: &GroupMap) -> Result<Self> {
        Self::from_table(f.table().to_vec())
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm { table: other.table.iter().map(|&x| self.table[x]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.table.len()];
        for (a, &b) in self.table.iter().enumerate() {
            inv[b] = a;
        }
        Perm { table: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.table.iter().enumerate().all(|(a, &b)| a == b)
    }

    pub fn is_additive(&self, g: &FiniteAbelianGroup) -> bool {
        validate::is_automorphism(g, self)
    }
}

/// Brute-force guard. Scans are allowed for `|G| ≤ cap`, and for `|G| = 9`
/// when `allow_nine` is set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteCap {
    pub cap: usize,
    pub allow_nine: bool,
}

impl Default for BruteCap {
    fn default() -> Self {
        Self { cap: 8, allow_nine: false }
    }
}

impl BruteCap {
    pub fn nine() -> Self {
        Self { cap: 8, allow_nine: true }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if n <= self.cap || (n == 9 && self.allow_nine) {
            Ok(())
        } else {
            Err(Error::ResourceCap(format!(
                "brute-force scan of Sym(G) refused for |G| = {n} (cap {}{})",
                self.cap,
                if self.allow_nine { ", nine allowed" } else { "" }
            )))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Brute,
    Constrained,
}

/// Which set to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    AutSigma,
    Gamma,
    SymMinus,
    SymPlus,
}

impl Target {
    pub fn name(&self) -> &'static str {
        match self {
            Target::AutSigma => "aut-sigma",
            Target::Gamma => "gamma",
            Target::SymMinus => "sym-minus",
            Target::SymPlus => "sym-plus",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "aut-sigma" => Some(Target::AutSigma),
            "gamma" => Some(Target::Gamma),
            "sym-minus" | "sym" => Some(Target::SymMinus),
            "sym-plus" => Some(Target::SymPlus),
            _ => None,
        }
    }
}

/// `(G, σ)` with everything the searches need precomputed.
#[derive(Clone, Debug)]
pub struct SigmaContext {
    pub group: FiniteAbelianGroup,
    pub sigma: GroupMap,
    pub orbits: Orbits,
    /// `powers[k]` is the table of `σ^k` for `0 ≤ k < N`.
    pub powers: Vec<Vec<usize>>,
    pub sigma_inv: Vec<usize>,
}

impl SigmaContext {
    pub fn new(sigma: &GroupMap) -> Result<Self> {
        let orbits = Orbits::new(sigma)?;
        let g = sigma.group().clone();
        let n = g.order();
        let mut powers = vec![(0..n).collect::<Vec<_>>()];
        for k in 1..orbits.order as usize {
            let prev = &powers[k - 1];
            powers.push((0..n).map(|a| sigma.eval(prev[a])).collect());
        }
        let mut sigma_inv = vec![0; n];
        for a in 0..n {
            sigma_inv[sigma.eval(a)] = a;
        }
        Ok(Self { group: g, sigma: sigma.clone(), orbits, powers, sigma_inv })
    }

    /// `N = |σ|`.
    pub fn order(&self) -> u64 {
        self.orbits.order
    }

    pub fn n(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn sigma_pow(&self, k: u64, a: usize) -> usize {
        self.powers[(k % self.orbits.order) as usize][a]
    }

    pub fn invariant_characters(&self) -> Result<Vec<Character>> {
        sigma_invariant_characters(&self.sigma)
    }
}

/// A member of `Γ` with the character certifying it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaWitness {
    pub tau: Perm,
    pub alpha: Character,
}

/// `Aut_σ(G)` by generator-image backtracking.
pub fn aut_sigma(ctx: &SigmaContext) -> Result<PermGroupReport> {
    let elems = aut_sigma_elements(ctx)?;
    PermGroupReport::new(&ctx.group, elems.clone(), Some(&elems))
}

/// `Γ` with one witness per element, ordered by the permutation table.
///
/// `root_power` selects the primitive root `λ^k` used to read `ℓ_α`; `1`
/// is the default root.
pub fn gamma_witnesses(ctx: &SigmaContext, strategy: Strategy, cap: BruteCap, root_power: u64) -> Result<Vec<GammaWitness>> {
    let chars = ctx.invariant_characters()?;
    let chars = chars
        .iter()
        .map(|a| crate::characters::reexpress_for_root(a, root_power).map(|b| (a.clone(), b)))
        .collect::<Result<Vec<_>>>()?;
    let mut out: Vec<GammaWitness> = Vec::new();
    match strategy {
        Strategy::Constrained => {
            for (alpha, read) in &chars {
                for tau in search::gamma_for_alpha(ctx, read) {
                    out.push(GammaWitness { tau, alpha: alpha.clone() });
                }
            }
        }
        Strategy::Brute => {
            cap.check(ctx.n())?;
            for_each_permutation(ctx.n(), |t| {
                for (alpha, read) in &chars {
                    let tau = Perm { table: t.to_vec() };
                    if validate::check_gamma_pair(ctx, &tau, read).is_ok() {
                        out.push(GammaWitness { tau, alpha: alpha.clone() });
                    }
                }
            });
        }
    }
    for w in &out {
        let read = crate::characters::reexpress_for_root(&w.alpha, root_power)?;
        if let Err(v) = validate::check_gamma_pair(ctx, &w.tau, &read) {
            return Err(Error::InternalInconsistency(format!("search produced an invalid pair: {v}")));
        }
    }
    out.sort_by(|a, b| a.tau.cmp(&b.tau).then_with(|| a.alpha.cmp(&b.alpha)));
    for w in out.windows(2) {
        if w[0].tau == w[1].tau {
            return Err(Error::InternalInconsistency(format!(
                "τ = {:?} has two certifying characters; the projection to Sym(G) is not injective",
                w[0].tau
            )));
        }
    }
    Ok(out)
}

pub fn gamma_group(ctx: &SigmaContext, strategy: Strategy, cap: BruteCap) -> Result<PermGroupReport> {
    let elems: Vec<Perm> = gamma_witnesses(ctx, strategy, cap, 1)?.into_iter().map(|w| w.tau).collect();
    let aut = aut_sigma_elements(ctx)?;
    PermGroupReport::new(&ctx.group, elems, Some(&aut))
}

/// Elements of `Sym_σ^-` (`plus = false`) or `Sym_σ^+` (`plus = true`).
pub fn sym_sigma_elements(ctx: &SigmaContext, plus: bool, strategy: Strategy, cap: BruteCap) -> Result<Vec<Perm>> {
    let mut out = match strategy {
        Strategy::Constrained => search::sym_sigma(ctx, plus),
        Strategy::Brute => {
            cap.check(ctx.n())?;
            let mut v = Vec::new();
            for_each_permutation(ctx.n(), |t| {
                let tau = Perm { table: t.to_vec() };
                let ok = if plus { validate::is_sym_plus(ctx, &tau) } else { validate::is_sym_minus(ctx, &tau) };
                if ok {
                    v.push(tau);
                }
            });
            v
        }
    };
    for tau in &out {
        let ok = if plus { validate::is_sym_plus(ctx, tau) } else { validate::is_sym_minus(ctx, tau) };
        if !ok {
            return Err(Error::InternalInconsistency(format!("search produced a non-member {tau:?}")));
        }
    }
    out.sort();
    Ok(out)
}

pub fn sym_sigma(ctx: &SigmaContext, plus: bool, strategy: Strategy, cap: BruteCap) -> Result<PermGroupReport> {
    let elems = sym_sigma_elements(ctx, plus, strategy, cap)?;
    let aut = aut_sigma_elements(ctx)?;
    PermGroupReport::new(&ctx.group, elems, Some(&aut))
}

/// Elements of the requested set.
pub fn enumerate(ctx: &SigmaContext, target: Target, strategy: Strategy, cap: BruteCap) -> Result<Vec<Perm>> {
    match target {
        Target::AutSigma => match strategy {
            Strategy::Constrained => aut_sigma_elements(ctx),
            Strategy::Brute => {
                cap.check(ctx.n())?;
                let mut v = Vec::new();
                for_each_permutation(ctx.n(), |t| {
                    let tau = Perm { table: t.to_vec() };
                    if validate::is_automorphism(&ctx.group, &tau) && validate::commutes_with_sigma(ctx, &tau) {
                        v.push(tau);
                    }
                });
                Ok(v)
            }
        },
        Target::Gamma => Ok(gamma_witnesses(ctx, strategy, cap, 1)?.into_iter().map(|w| w.tau).collect()),
        Target::SymMinus => sym_sigma_elements(ctx, false, strategy, cap),
        Target::SymPlus => sym_sigma_elements(ctx, true, strategy, cap),
    }
}

/// All σ-invariant `α` with `(τ, α)` valid. At most one exists.
pub fn nu_fiber(ctx: &SigmaContext, tau: &Perm) -> Result<Vec<Character>> {
    if tau.len() != ctx.n() {
        return Err(Error::InvalidInput("permutation size differs from group order".into()));
    }
    let fiber: Vec<Character> = ctx
        .invariant_characters()?
        .into_iter()
        .filter(|a| validate::check_gamma_pair(ctx, tau, a).is_ok())
        .collect();
    if fiber.len() > 1 {
        return Err(Error::InternalInconsistency(format!("{} characters certify the same τ", fiber.len())));
    }
    Ok(fiber)
}

/// Verdicts for `Aut_σ ⊆ Γ ⊆ Sym_σ^- ⊆ Sym(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContainmentChain {
    pub aut_in_gamma: bool,
    pub gamma_in_sym: bool,
    pub sym_in_sym_g: bool,
    pub aut_order: usize,
    pub gamma_order: usize,
    pub sym_order: usize,
}

impl ContainmentChain {
    pub fn holds(&self) -> bool {
        self.aut_in_gamma && self.gamma_in_sym && self.sym_in_sym_g
    }
}

fn subset(a: &[Perm], b: &[Perm]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

pub fn containment_chain(ctx: &SigmaContext, strategy: Strategy, cap: BruteCap) -> Result<ContainmentChain> {
    let mut aut = enumerate(ctx, Target::AutSigma, strategy, cap)?;
    aut.sort();
    let gamma = enumerate(ctx, Target::Gamma, strategy, cap)?;
    let sym = enumerate(ctx, Target::SymMinus, strategy, cap)?;
    Ok(ContainmentChain {
        aut_in_gamma: subset(&aut, &gamma),
        gamma_in_sym: subset(&gamma, &sym),
        sym_in_sym_g: sym.iter().all(|t| t.len() == ctx.n()),
        aut_order: aut.len(),
        gamma_order: gamma.len(),
        sym_order: sym.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(moduli: &[u64], images: &[&[i64]]) -> SigmaContext {
        let g = FiniteAbelianGroup::new(moduli).unwrap();
        let imgs: Vec<_> = images.iter().map(|c| g.elem(c).unwrap()).collect();
        SigmaContext::new(&GroupMap::new(&g, &imgs).unwrap()).unwrap()
    }

    #[test]
    fn aut_sigma_of_z7() {
        let c = ctx(&[7], &[&[3]]);
        let r = aut_sigma(&c).unwrap();
        assert_eq!(r.order, 6);
        assert_eq!(r.label, "Z6");
    }

    #[test]
    fn sym_minus_z4_inversion() {
        let c = ctx(&[4], &[&[3]]);
        assert_eq!(sym_sigma_elements(&c, false, Strategy::Constrained, BruteCap::default()).unwrap().len(), 2);
        assert_eq!(sym_sigma_elements(&c, false, Strategy::Brute, BruteCap::default()).unwrap().len(), 2);
    }

    #[test]
    fn sym_minus_z9_doubling() {
        let c = ctx(&[9], &[&[2]]);
        let r = sym_sigma(&c, false, Strategy::Constrained, BruteCap::default()).unwrap();
        assert_eq!(r.order, 12);
        let brute = sym_sigma_elements(&c, false, Strategy::Brute, BruteCap::nine()).unwrap();
        assert_eq!(brute, r.elements);
    }

    #[test]
    fn gamma_swap_equals_aut() {
        let c = ctx(&[2, 2], &[&[0, 1], &[1, 0]]);
        let g = gamma_group(&c, Strategy::Constrained, BruteCap::default()).unwrap();
        let a = aut_sigma(&c).unwrap();
        assert_eq!(g.elements, a.elements);
        assert_eq!(g.order, 2);
    }

    #[test]
    fn brute_cap_is_enforced() {
        let c = ctx(&[9], &[&[2]]);
        let err = sym_sigma_elements(&c, false, Strategy::Brute, BruteCap::default()).unwrap_err();
        assert!(matches!(err, Error::ResourceCap(_)));
        let c = ctx(&[10], &[&[3]]);
        let err = gamma_group(&c, Strategy::Brute, BruteCap::nine()).unwrap_err();
        assert!(matches!(err, Error::ResourceCap(_)));
    }

    #[test]
    fn nu_fiber_of_identity_is_trivial_character() {
        let c = ctx(&[2, 4], &[&[1, 0], &[1, 3]]);
        let fib = nu_fiber(&c, &Perm::identity(8)).unwrap();
        assert_eq!(fib.len(), 1);
        assert!(fib[0].is_trivial());
    }

    #[test]
    fn chain_on_small_instance() {
        let c = ctx(&[2, 4], &[&[1, 0], &[1, 3]]);
        let chain = containment_chain(&c, Strategy::Constrained, BruteCap::default()).unwrap();
        assert!(chain.holds());
        assert!(chain.aut_order < chain.gamma_order);
    }

    #[test]
    fn gamma_does_not_depend_on_the_root() {
        let cases: [(&[u64], &[&[i64]]); 5] = [
            (&[2, 4], &[&[1, 2], &[0, 3]]),
            (&[9], &[&[2]]),
            (&[7], &[&[3]]),
            (&[3, 3], &[&[1, 0], &[1, 1]]),
            (&[8], &[&[5]]),
        ];
        for (moduli, images) in cases {
            let c = ctx(moduli, images);
            let n = c.order();
            let taus = |k: u64| -> Vec<Perm> {
                let mut v: Vec<Perm> = gamma_witnesses(&c, Strategy::Constrained, BruteCap::default(), k)
                    .unwrap()
                    .into_iter()
                    .map(|w| w.tau)
                    .collect();
                v.sort();
                v
            };
            let base = taus(1);
            for k in (2..n).filter(|k| num_integer::gcd(*k, n) == 1) {
                assert_eq!(taus(k), base, "{moduli:?} with λ^{k}");
            }
        }
    }
}
