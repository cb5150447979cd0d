//! Explicit example families with their membership certificates, and the
//! equality theorems checked over instance batches.

mod local_ring;
pub mod theorems;

use serde::{Deserialize, Serialize};

use crate::abelian_group::{FiniteAbelianGroup, GroupMap, Subgroup};
use crate::characters::Character;
use crate::error::{Error, Result};
use crate::perm_search::{aut_sigma_elements, nu_fiber, validate, Perm, SigmaContext};

pub use local_ring::{build_local_ring, LocalRingKind, LocalRingReport, LocalRingSpec};

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn spec_err<T>(m: impl Into<String>) -> Result<T> {
    Err(Error::InvalidSpec(m.into()))
}

/// `k·a` by repeated addition.
fn repeated_add(g: &FiniteAbelianGroup, k: u64, a: usize) -> usize {
    let mut acc = g.zero();
    for _ in 0..k {
        acc = g.add_idx(acc, a);
    }
    acc
}

/// Data `(p, G, G₀, s, m, τ₀, n)` of the main example family.
#[derive(Clone, Debug)]
pub struct MainExampleSpec {
    pub p: u64,
    pub group: FiniteAbelianGroup,
    pub g0: Subgroup,
    pub s: usize,
    pub m: usize,
    pub n: usize,
    /// `τ₀` as a table on `G`, meaningful on `G₀` only.
    tau0: Vec<usize>,
    /// `a = coset[a]·s + part[a]` with `part[a] ∈ G₀`.
    coset: Vec<u64>,
    part: Vec<usize>,
}

impl MainExampleSpec {
    /// Checks every hypothesis, including the `p`-dependent condition on `n`.
    pub fn new(p: u64, g: &FiniteAbelianGroup, g0_gens: &[usize], s: usize, m: usize, n: usize, tau0_images: &[usize]) -> Result<Self> {
        let spec = Self::base(p, g, g0_gens, s, m, n, tau0_images)?;
        let lhs = spec.tau0[spec.p_s()];
        let rhs = if p == 2 {
            g.add_idx(g.add_idx(g.times_idx(2, s), g.times_idx(2, n)), m)
        } else {
            g.add_idx(g.times_idx(p, s), g.times_idx(p, n))
        };
        if lhs != rhs {
            let which = if p == 2 { "τ₀(2s) = 2s + 2n + m" } else { "τ₀(ps) = ps + pn" };
            return spec_err(format!("{which} fails: left {}, right {}", g.element(lhs), g.element(rhs)));
        }
        Ok(spec)
    }

    /// Hypotheses of the Sym⁻ family: `τ₀(ps) − ps − pn ∈ ℤm` instead of
    /// the exact condition on `n`.
    pub fn for_group_main(p: u64, g: &FiniteAbelianGroup, g0_gens: &[usize], s: usize, m: usize, n: usize, tau0_images: &[usize]) -> Result<Self> {
        let spec = Self::base(p, g, g0_gens, s, m, n, tau0_images)?;
        spec.check_group_main()?;
        Ok(spec)
    }

    fn check_group_main(&self) -> Result<()> {
        let g = &self.group;
        let d = g.sub_idx(g.sub_idx(self.tau0[self.p_s()], self.p_s()), g.times_idx(self.p, self.n));
        if !(0..self.p).any(|k| g.times_idx(k, self.m) == d) {
            return spec_err(format!("τ₀(ps) − ps − pn = {} is not a multiple of m", g.element(d)));
        }
        Ok(())
    }

    fn p_s(&self) -> usize {
        self.group.times_idx(self.p, self.s)
    }

    fn base(p: u64, g: &FiniteAbelianGroup, g0_gens: &[usize], s: usize, m: usize, n: usize, tau0_images: &[usize]) -> Result<Self> {
        if !is_prime(p) {
            return spec_err(format!("p = {p} is not prime"));
        }
        let ord = g.order();
        if [s, m, n].iter().chain(g0_gens).chain(tau0_images).any(|&x| x >= ord) {
            return spec_err("element index out of range");
        }
        let g0 = Subgroup::generated_by(g, g0_gens);
        if g0.order() * p as usize != ord {
            return spec_err(format!("G₀ has index {}, expected p = {p}", ord / g0.order().max(1)));
        }
        if g0.contains(s) {
            return spec_err("s lies in G₀, so s + G₀ does not generate G/G₀");
        }
        if !g0.contains(m) || m == 0 || g.times_idx(p, m) != 0 {
            return spec_err("m must be a nonzero element of G₀ with pm = 0");
        }
        if !g0.contains(n) {
            return spec_err("n must lie in G₀");
        }
        if tau0_images.len() != g0_gens.len() {
            return spec_err(format!("{} images for {} generators of G₀", tau0_images.len(), g0_gens.len()));
        }
        // Extend τ₀ along the generators, checking consistency.
        let mut tau0 = vec![usize::MAX; ord];
        tau0[0] = 0;
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for (&gen, &img) in g0_gens.iter().zip(tau0_images) {
                let y = g.add_idx(x, gen);
                let ty = g.add_idx(tau0[x], img);
                if tau0[y] == usize::MAX {
                    tau0[y] = ty;
                    queue.push(y);
                } else if tau0[y] != ty {
                    return spec_err("τ₀ is not a well-defined homomorphism on G₀");
                }
            }
        }
        let mut hit = vec![false; ord];
        for &x in g0.members() {
            let y = tau0[x];
            if !g0.contains(y) || hit[y] {
                return spec_err("τ₀ is not an automorphism of G₀");
            }
            hit[y] = true;
        }
        if tau0[m] != m {
            return spec_err("τ₀(m) ≠ m");
        }
        let mut coset = vec![u64::MAX; ord];
        let mut part = vec![usize::MAX; ord];
        for i in 0..p {
            let is = g.times_idx(i, s);
            for &x in g0.members() {
                let a = g.add_idx(is, x);
                coset[a] = i;
                part[a] = x;
            }
        }
        Ok(Self { p, group: g.clone(), g0, s, m, n, tau0, coset, part })
    }

    /// `σ(is + x) = is + im + x`.
    pub fn sigma(&self) -> Result<GroupMap> {
        let g = &self.group;
        let table: Vec<usize> = g
            .elements()
            .map(|a| g.add_idx(a, g.times_idx(self.coset[a], self.m)))
            .collect();
        GroupMap::from_table(g, &table)
    }

    /// `α(G_i) = λ^i`.
    pub fn alpha(&self) -> Result<Character> {
        let g = &self.group;
        let exps: Vec<u64> = (0..g.rank()).map(|j| self.coset[g.generator(j)]).collect();
        let alpha = Character::new(g, self.p, &exps)?;
        if g.elements().any(|a| alpha.eval(a) != self.coset[a]) {
            return Err(Error::InternalInconsistency("coset index is not a character".into()));
        }
        Ok(alpha)
    }

    /// `τ(is + x) = i(s + n) + c(i)·m + τ₀(x)`.
    fn tau_with(&self, c: impl Fn(u64) -> u64) -> Result<Perm> {
        let g = &self.group;
        let sn = g.add_idx(self.s, self.n);
        let table: Vec<usize> = g
            .elements()
            .map(|a| {
                let i = self.coset[a];
                g.add_idx(g.add_idx(g.times_idx(i, sn), repeated_add(g, c(i), self.m)), self.tau0[self.part[a]])
            })
            .collect();
        Perm::from_table(table).map_err(|_| Error::InternalInconsistency("τ is not a bijection".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainCertificate {
    pub pair_valid: bool,
    pub violation: Option<String>,
    pub tau_additive: bool,
    pub tau_in_aut_sigma: bool,
    pub aut_sigma_order: usize,
    /// `(τ, α)` is valid and `τ ∉ Aut_σ`, so `Aut_σ < Γ`.
    pub strict: bool,
}

#[derive(Clone, Debug)]
pub struct MainExample {
    pub sigma: GroupMap,
    pub tau: Perm,
    pub alpha: Character,
    pub certificate: MainCertificate,
}

pub fn build_main_example(spec: &MainExampleSpec) -> Result<MainExample> {
    let sigma = spec.sigma()?;
    let alpha = spec.alpha()?;
    let tau = spec.tau_with(|i| i * i.saturating_sub(1) / 2)?;
    let ctx = SigmaContext::new(&sigma)?;
    let check = validate::check_gamma_pair(&ctx, &tau, &alpha);
    let aut = aut_sigma_elements(&ctx)?;
    let tau_in_aut_sigma = aut.contains(&tau);
    let certificate = MainCertificate {
        pair_valid: check.is_ok(),
        violation: check.err().map(|v| v.to_string()),
        tau_additive: validate::is_automorphism(&spec.group, &tau),
        tau_in_aut_sigma,
        aut_sigma_order: aut.len(),
        strict: false,
    };
    let strict = certificate.pair_valid && !tau_in_aut_sigma;
    Ok(MainExample { sigma, tau, alpha, certificate: MainCertificate { strict, ..certificate } })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupMainWitness {
    pub ells: Vec<u64>,
    pub tau: Perm,
    /// All `ℓ = 0`.
    pub aut_candidate: bool,
    /// `ℓ_{i,1} = i − 1` for all `i`.
    pub gamma_candidate: bool,
    pub in_sym_minus: bool,
    pub in_aut_sigma: bool,
    pub in_gamma: bool,
    /// Exponents of the certifying character when `τ ∈ Γ`.
    pub gamma_character: Option<Vec<u64>>,
}

impl GroupMainWitness {
    /// `τ ∈ Sym_σ⁻`, and `τ ∈ Aut_σ` only for the all-zero pattern.
    pub fn consistent(&self) -> bool {
        self.in_sym_minus && (!self.in_aut_sigma || self.aut_candidate)
    }

    /// `τ ∈ Γ \ Aut_σ` only for the pattern `ℓ_{i,1} = i − 1`. This can fail
    /// when the certifying character is a power of the coset character.
    pub fn gamma_pattern_holds(&self) -> bool {
        !self.in_gamma || self.in_aut_sigma || self.gamma_candidate
    }
}

/// `τ(is + x) = i(s + n) + s(i,1)m + τ₀(x)` with `s(i,1) = Σ_{u=2}^{i} ℓ_{u,1}`.
pub fn build_group_main(spec: &MainExampleSpec, ells: &[u64]) -> Result<GroupMainWitness> {
    let p = spec.p;
    if ells.len() as u64 != p.saturating_sub(2) || ells.iter().any(|&l| l >= p) {
        return Err(Error::InvalidInput(format!("need {} values ℓ_(2,1), …, ℓ_(p−1,1) in [0, {p})", p.saturating_sub(2))));
    }
    spec.check_group_main()?;
    let partial = |i: u64| -> u64 { (2..=i).map(|u| ells[(u - 2) as usize]).sum() };
    let tau = spec.tau_with(partial)?;
    let sigma = spec.sigma()?;
    let ctx = SigmaContext::new(&sigma)?;
    let in_aut_sigma = validate::is_automorphism(&spec.group, &tau) && validate::commutes_with_sigma(&ctx, &tau);
    let fiber = nu_fiber(&ctx, &tau)?;
    Ok(GroupMainWitness {
        ells: ells.to_vec(),
        aut_candidate: ells.iter().all(|&l| l == 0),
        gamma_candidate: ells.iter().enumerate().all(|(k, &l)| l == k as u64 + 1),
        in_sym_minus: validate::is_sym_minus(&ctx, &tau),
        in_aut_sigma,
        in_gamma: !fiber.is_empty(),
        gamma_character: fiber.first().map(|a| a.exps().to_vec()),
        tau,
    })
}

/// Certifies `Aut_σ < Γ < Sym_σ⁻` from constructed witnesses sharing one `σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub witnesses: Vec<GroupMainWitness>,
    pub has_aut: bool,
    pub has_gamma_not_aut: bool,
    pub has_sym_not_gamma: bool,
    pub all_consistent: bool,
    /// Witnesses in `Γ \ Aut_σ` whose `ℓ` pattern is not `i − 1`.
    pub gamma_pattern_exceptions: usize,
}

impl ChainCertificate {
    pub fn holds(&self) -> bool {
        self.has_aut && self.has_gamma_not_aut && self.has_sym_not_gamma && self.all_consistent
    }
}

pub fn group_main_chain(cases: &[(MainExampleSpec, Vec<u64>)]) -> Result<ChainCertificate> {
    let mut sigma: Option<GroupMap> = None;
    let mut witnesses = Vec::new();
    for (spec, ells) in cases {
        let s = spec.sigma()?;
        if sigma.as_ref().is_some_and(|t| *t != s) {
            return Err(Error::InvalidInput("chain cases do not share one σ".into()));
        }
        sigma = Some(s);
        witnesses.push(build_group_main(spec, ells)?);
    }
    let has_aut = witnesses.iter().any(|w| w.in_aut_sigma && w.in_gamma);
    let has_gamma_not_aut = witnesses.iter().any(|w| w.in_gamma && !w.in_aut_sigma);
    let has_sym_not_gamma = witnesses.iter().any(|w| w.in_sym_minus && !w.in_gamma);
    let all_consistent = witnesses.iter().all(|w| w.consistent());
    let gamma_pattern_exceptions = witnesses.iter().filter(|w| !w.gamma_pattern_holds()).count();
    Ok(ChainCertificate { witnesses, has_aut, has_gamma_not_aut, has_sym_not_gamma, all_consistent, gamma_pattern_exceptions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm_search::{gamma_witnesses, BruteCap, Strategy};

    fn z2z4() -> MainExampleSpec {
        let g = FiniteAbelianGroup::new(&[2, 4]).unwrap();
        let i = |a: u64, b: u64| g.index(&[a, b]);
        MainExampleSpec::new(2, &g, &[i(1, 0), i(0, 2)], i(0, 1), i(1, 2), 0, &[i(0, 2), i(1, 0)]).unwrap()
    }

    fn z3z3() -> MainExampleSpec {
        let g = FiniteAbelianGroup::new(&[3, 3]).unwrap();
        let i = |a: u64, b: u64| g.index(&[a, b]);
        MainExampleSpec::new(3, &g, &[i(1, 0)], i(0, 1), i(1, 0), 0, &[i(1, 0)]).unwrap()
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn z2z4_strict() {
        let spec = z2z4();
        let ex = build_main_example(&spec).unwrap();
        let g = &spec.group;
        assert_eq!(ex.sigma.eval(g.index(&[0, 1])), g.index(&[1, 3]));
        assert!(ex.certificate.strict, "{:?}", ex.certificate);
        assert!(!ex.certificate.tau_additive);
        // τ(s) = s, τ(2s) = τ₀(2s) = (1,0).
        assert_eq!(ex.tau.apply(g.index(&[0, 1])), g.index(&[0, 1]));
        assert_eq!(ex.tau.apply(g.index(&[0, 2])), g.index(&[1, 0]));
        let ctx = SigmaContext::new(&ex.sigma).unwrap();
        let gamma = gamma_witnesses(&ctx, Strategy::Brute, BruteCap::default(), 1).unwrap();
        assert!(gamma.iter().any(|w| w.tau == ex.tau && w.alpha == ex.alpha));
        assert!(gamma.len() > ex.certificate.aut_sigma_order);
    }

    #[test]
    fn z3z3_strict_and_patterns() {
        let spec = z3z3();
        let ex = build_main_example(&spec).unwrap();
        assert!(ex.certificate.strict);
        let ws: Vec<_> = (0..3).map(|e| build_group_main(&spec, &[e]).unwrap()).collect();
        assert!(ws[0].tau.is_identity() && ws[0].in_aut_sigma);
        assert_eq!(ws[1].tau, ex.tau);
        assert!(ws.iter().all(|w| w.consistent() && w.in_gamma));
        // ℓ = 2 is certified by the square of the coset character.
        assert!(!ws[2].gamma_pattern_holds());
        assert_eq!(ws[2].gamma_character, Some(vec![0, 2]));
    }

    #[test]
    fn z3z9_chain() {
        let g = FiniteAbelianGroup::new(&[3, 9]).unwrap();
        let i = |a: u64, b: u64| g.index(&[a, b]);
        let gens = [i(1, 0), i(0, 3)];
        let base = MainExampleSpec::new(3, &g, &gens, i(0, 1), i(1, 0), 0, &gens).unwrap();
        let twisted = MainExampleSpec::for_group_main(3, &g, &gens, i(0, 1), i(1, 0), 0, &[i(1, 0), i(1, 3)]).unwrap();
        assert!(MainExampleSpec::new(3, &g, &gens, i(0, 1), i(1, 0), 0, &[i(1, 0), i(1, 3)]).is_err());
        let chain = group_main_chain(&[(base.clone(), vec![0]), (base, vec![1]), (twisted, vec![0])]).unwrap();
        assert!(chain.holds(), "{chain:?}");
        assert_eq!(chain.gamma_pattern_exceptions, 0);
        assert!(!chain.witnesses[2].in_gamma && !chain.witnesses[2].in_aut_sigma);
    }

    #[test]
    fn invalid_specs_are_named() {
        let g = FiniteAbelianGroup::new(&[2, 4]).unwrap();
        let i = |a: u64, b: u64| g.index(&[a, b]);
        let e = MainExampleSpec::new(4, &g, &[i(1, 0), i(0, 2)], i(0, 1), i(1, 2), 0, &[i(0, 2), i(1, 0)]).unwrap_err();
        assert!(matches!(e, Error::InvalidSpec(ref m) if m.contains("prime")));
        // τ₀ = id breaks τ₀(2s) = 2s + 2n + m.
        let e = MainExampleSpec::new(2, &g, &[i(1, 0), i(0, 2)], i(0, 1), i(1, 2), 0, &[i(1, 0), i(0, 2)]).unwrap_err();
        assert!(matches!(e, Error::InvalidSpec(ref m) if m.contains("2s")));
        let e = MainExampleSpec::new(2, &g, &[i(1, 0), i(0, 2)], i(0, 2), i(1, 2), 0, &[i(0, 2), i(1, 0)]).unwrap_err();
        assert!(matches!(e, Error::InvalidSpec(ref m) if m.contains("s lies")));
        let e = MainExampleSpec::new(2, &g, &[i(1, 0), i(0, 2)], i(0, 1), 0, 0, &[i(0, 2), i(1, 0)]).unwrap_err();
        assert!(matches!(e, Error::InvalidSpec(_)));
        let spec = z3z3();
        assert!(build_group_main(&spec, &[3]).is_err());
        assert!(build_group_main(&spec, &[]).is_err());
    }
}
