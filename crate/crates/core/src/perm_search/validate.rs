//! Definitional membership tests. None of the search code is reused here.

use std::fmt;

use crate::abelian_group::FiniteAbelianGroup;
use crate::characters::{ell_alpha, Character};

use super::{Perm, SigmaContext};

/// The first condition a candidate pair breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongSize,
    NotCommuting { a: usize },
    NotInvariant,
    WrongModulus { modulus: u64, order: u64 },
    Difference { s: usize, m: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongSize => write!(f, "permutation size differs from |G|"),
            Violation::NotCommuting { a } => write!(f, "(a) τσ ≠ στ at index {a}"),
            Violation::NotInvariant => write!(f, "(b) α∘σ ≠ α"),
            Violation::WrongModulus { modulus, order } => {
                write!(f, "(c) α has modulus {modulus}, expected N = {order}")
            }
            Violation::Difference { s, m } => write!(f, "(d) fails at s = {s}, m = {m}"),
        }
    }
}

pub fn is_automorphism(g: &FiniteAbelianGroup, tau: &Perm) -> bool {
    tau.len() == g.order()
        && g.elements().all(|a| g.elements().all(|b| tau.apply(g.add_idx(a, b)) == g.add_idx(tau.apply(a), tau.apply(b))))
}

pub fn commutes_with_sigma(ctx: &SigmaContext, tau: &Perm) -> bool {
    tau.len() == ctx.n() && ctx.group.elements().all(|a| tau.apply(ctx.sigma.eval(a)) == ctx.sigma.eval(tau.apply(a)))
}

/// Conditions (a)-(d) for `(τ, α)`, read literally.
pub fn check_gamma_pair(ctx: &SigmaContext, tau: &Perm, alpha: &Character) -> Result<(), Violation> {
    let g = &ctx.group;
    if tau.len() != g.order() || alpha.group() != g {
        return Err(Violation::WrongSize);
    }
    for a in g.elements() {
        if tau.apply(ctx.sigma.eval(a)) != ctx.sigma.eval(tau.apply(a)) {
            return Err(Violation::NotCommuting { a });
        }
    }
    if g.elements().any(|a| alpha.eval(ctx.sigma.eval(a)) != alpha.eval(a)) {
        return Err(Violation::NotInvariant);
    }
    if alpha.modulus() != ctx.order() {
        return Err(Violation::WrongModulus { modulus: alpha.modulus(), order: ctx.order() });
    }
    for s in g.elements() {
        for m in g.elements() {
            let l = ell_alpha(alpha, s, m, &ctx.orbits);
            let mut shifted = m;
            for _ in 0..l {
                shifted = ctx.sigma.eval(shifted);
            }
            if tau.apply(g.sub_idx(s, m)) != g.sub_idx(tau.apply(s), tau.apply(shifted)) {
                return Err(Violation::Difference { s, m });
            }
        }
    }
    Ok(())
}

fn orbit_translate_ok(ctx: &SigmaContext, tau: &Perm, plus: bool) -> bool {
    let g = &ctx.group;
    if tau.len() != g.order() || !commutes_with_sigma(ctx, tau) {
        return false;
    }
    let op = |a: usize, b: usize| if plus { g.add_idx(a, b) } else { g.sub_idx(a, b) };
    let mut lhs = vec![false; g.order()];
    let mut rhs = vec![false; g.order()];
    for a in g.elements() {
        for orb in &ctx.orbits.orbits {
            lhs.iter_mut().for_each(|x| *x = false);
            rhs.iter_mut().for_each(|x| *x = false);
            for &o in orb {
                lhs[tau.apply(op(a, o))] = true;
                rhs[op(tau.apply(a), tau.apply(o))] = true;
            }
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// `τσ = στ` and `τ(a − 𝒪) = τ(a) − τ(𝒪)` for every `a` and σ-orbit `𝒪`.
pub fn is_sym_minus(ctx: &SigmaContext, tau: &Perm) -> bool {
    orbit_translate_ok(ctx, tau, false)
}

/// `τσ = στ` and `τ(a + 𝒪) = τ(a) + τ(𝒪)` for every `a` and σ-orbit `𝒪`.
pub fn is_sym_plus(ctx: &SigmaContext, tau: &Perm) -> bool {
    orbit_translate_ok(ctx, tau, true)
}
