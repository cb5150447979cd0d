//! Backtracking with propagation. Every rule used to prune is a direct
//! consequence of the defining conditions of the target set.

use crate::abelian_group::{FiniteAbelianGroup, GroupMap};
use crate::characters::Character;
use crate::error::Result;

use super::{Perm, SigmaContext};

const NONE: usize = usize::MAX;

struct Partial {
    tau: Vec<usize>,
    inv: Vec<usize>,
    trail: Vec<usize>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Self { tau: vec![NONE; n], inv: vec![NONE; n], trail: Vec::with_capacity(n) }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().expect("nonempty trail");
            self.inv[self.tau[x]] = NONE;
            self.tau[x] = NONE;
        }
    }
}

trait Rules {
    fn admissible(&self, x: usize, y: usize) -> bool;
    /// Pushes forced assignments; returns `false` on a detected conflict.
    fn consequences(&self, p: &Partial, x: usize, y: usize, out: &mut Vec<(usize, usize)>) -> bool;
}

fn assign(p: &mut Partial, rules: &impl Rules, x: usize, y: usize) -> bool {
    let mut queue = vec![(x, y)];
    while let Some((x, y)) = queue.pop() {
        if p.tau[x] == y {
            continue;
        }
        if p.tau[x] != NONE || p.inv[y] != NONE || !rules.admissible(x, y) {
            return false;
        }
        p.tau[x] = y;
        p.inv[y] = x;
        p.trail.push(x);
        if !rules.consequences(p, x, y, &mut queue) {
            return false;
        }
    }
    true
}

fn backtrack(p: &mut Partial, rules: &impl Rules, out: &mut Vec<Perm>) {
    let n = p.tau.len();
    let Some(x) = (0..n).find(|&x| p.tau[x] == NONE) else {
        out.push(Perm { table: p.tau.clone() });
        return;
    };
    for y in 0..n {
        if p.inv[y] != NONE || !rules.admissible(x, y) {
            continue;
        }
        let save = p.trail.len();
        if assign(p, rules, x, y) {
            backtrack(p, rules, out);
        }
        p.undo_to(save);
    }
}

fn run(n: usize, rules: &impl Rules) -> Vec<Perm> {
    let mut p = Partial::new(n);
    let mut out = Vec::new();
    if assign(&mut p, rules, 0, 0) {
        backtrack(&mut p, rules, &mut out);
    }
    out
}

struct GammaRules<'a> {
    ctx: &'a SigmaContext,
    exps: Vec<u64>,
    modulus: u64,
}

impl GammaRules<'_> {
    #[inline]
    fn ell(&self, s: usize, m: usize) -> u64 {
        let d = (self.exps[s] + self.modulus - self.exps[m]) % self.modulus;
        d % self.ctx.orbits.len_of[m] as u64
    }
}

impl Rules for GammaRules<'_> {
    fn admissible(&self, x: usize, y: usize) -> bool {
        self.ctx.orbits.len_of[x] == self.ctx.orbits.len_of[y]
    }

    fn consequences(&self, p: &Partial, x: usize, y: usize, out: &mut Vec<(usize, usize)>) -> bool {
        let c = self.ctx;
        let g = &c.group;
        out.push((c.sigma.eval(x), c.sigma.eval(y)));
        out.push((c.sigma_inv[x], c.sigma_inv[y]));
        for &z in &p.trail {
            let tz = p.tau[z];
            out.push((g.sub_idx(x, z), g.sub_idx(y, c.sigma_pow(self.ell(x, z), tz))));
            out.push((g.sub_idx(z, x), g.sub_idx(tz, c.sigma_pow(self.ell(z, x), y))));
        }
        true
    }
}

/// All `τ` with `(τ, α)` satisfying (a)-(d) for a fixed invariant `α`.
pub(super) fn gamma_for_alpha(ctx: &SigmaContext, alpha: &Character) -> Vec<Perm> {
    if alpha.modulus() != ctx.order() || !alpha.is_sigma_invariant(&ctx.sigma) {
        return Vec::new();
    }
    let exps = ctx.group.elements().map(|x| alpha.eval(x)).collect();
    run(ctx.n(), &GammaRules { ctx, exps, modulus: alpha.modulus() })
}

struct SymRules<'a> {
    ctx: &'a SigmaContext,
    plus: bool,
}

impl Rules for SymRules<'_> {
    fn admissible(&self, x: usize, y: usize) -> bool {
        self.ctx.orbits.len_of[x] == self.ctx.orbits.len_of[y]
    }

    fn consequences(&self, p: &Partial, x: usize, y: usize, out: &mut Vec<(usize, usize)>) -> bool {
        let c = self.ctx;
        let g = &c.group;
        let orb = &c.orbits.orbit_of;
        let fixed = |a: usize| c.orbits.len_of[a] == 1;
        out.push((c.sigma.eval(x), c.sigma.eval(y)));
        out.push((c.sigma_inv[x], c.sigma_inv[y]));
        for &z in &p.trail {
            let tz = p.tau[z];
            if self.plus {
                // τ(a + b) ∈ τ(a) + Orb(τ(b)) for all a, b.
                let d = g.add_idx(x, z);
                if fixed(z) {
                    out.push((d, g.add_idx(y, tz)));
                } else if p.tau[d] != NONE && orb[g.sub_idx(p.tau[d], y)] != orb[tz] {
                    return false;
                }
                if fixed(x) {
                    out.push((d, g.add_idx(tz, y)));
                } else if p.tau[d] != NONE && orb[g.sub_idx(p.tau[d], tz)] != orb[y] {
                    return false;
                }
                let b = g.sub_idx(x, z);
                if p.tau[b] != NONE && orb[g.sub_idx(y, tz)] != orb[p.tau[b]] {
                    return false;
                }
            } else {
                // τ(a − b) ∈ τ(a) − Orb(τ(b)) for all a, b.
                let d = g.sub_idx(x, z);
                if fixed(z) {
                    out.push((d, g.sub_idx(y, tz)));
                } else if p.tau[d] != NONE && orb[g.sub_idx(y, p.tau[d])] != orb[tz] {
                    return false;
                }
                let d2 = g.sub_idx(z, x);
                if fixed(x) {
                    out.push((d2, g.sub_idx(tz, y)));
                } else if p.tau[d2] != NONE && orb[g.sub_idx(tz, p.tau[d2])] != orb[y] {
                    return false;
                }
                let b = g.sub_idx(z, x);
                if p.tau[b] != NONE && orb[g.sub_idx(tz, y)] != orb[p.tau[b]] {
                    return false;
                }
            }
        }
        true
    }
}

pub(super) fn sym_sigma(ctx: &SigmaContext, plus: bool) -> Vec<Perm> {
    run(ctx.n(), &SymRules { ctx, plus })
}

/// `Aut_σ(G)` by choosing generator images.
///
/// Images of the first `j` generators must span a subgroup of order
/// `n_1⋯n_j`, and `τσ = στ` is checked on every generator whose `σ`-image
/// already lies in the span of assigned generators.
pub fn aut_sigma_elements(ctx: &SigmaContext) -> Result<Vec<Perm>> {
    let g = &ctx.group;
    let t = g.rank();
    let gens: Vec<usize> = (0..t).map(|j| g.generator(j)).collect();
    let sig_gens: Vec<usize> = gens.iter().map(|&x| ctx.sigma.eval(x)).collect();
    let mut images = vec![0usize; t];
    let mut out = Vec::new();
    let mut span = vec![false; g.order()];
    span[0] = true;
    rec_aut(ctx, 0, &gens, &sig_gens, &mut images, &span, &mut out)?;
    out.sort();
    Ok(out)
}

fn partial_eval(g: &FiniteAbelianGroup, images: &[usize], upto: usize, a: usize) -> Option<usize> {
    let mut acc = 0;
    for j in 0..g.rank() {
        let c = g.coord(a, j);
        if c == 0 {
            continue;
        }
        if j > upto {
            return None;
        }
        acc = g.add_idx(acc, g.scalar_idx(c as i64, images[j]));
    }
    Some(acc)
}

fn rec_aut(
    ctx: &SigmaContext,
    j: usize,
    gens: &[usize],
    sig_gens: &[usize],
    images: &mut Vec<usize>,
    span: &[bool],
    out: &mut Vec<Perm>,
) -> Result<()> {
    let g = &ctx.group;
    let t = g.rank();
    if j == t {
        let f = GroupMap::from_image_indices(g, images.clone())?;
        if f.is_auto() && g.elements().all(|a| f.eval(ctx.sigma.eval(a)) == ctx.sigma.eval(f.eval(a))) {
            out.push(Perm::from_map(&f)?);
        }
        return Ok(());
    }
    let nj = g.moduli()[j];
    for x in g.elements() {
        if g.scalar_idx(nj as i64, x) != 0 {
            continue;
        }
        // x must have order exactly n_j modulo the current span.
        let mut k = 1;
        let mut y = x;
        while !span[y] {
            y = g.add_idx(y, x);
            k += 1;
        }
        if k != nj {
            continue;
        }
        images[j] = x;
        let ok = (0..=j).all(|i| match partial_eval(g, images, j, sig_gens[i]) {
            Some(v) => v == ctx.sigma.eval(images[i]),
            None => true,
        });
        if !ok {
            continue;
        }
        let mut next = span.to_vec();
        let mut frontier: Vec<usize> = (0..g.order()).filter(|&a| span[a]).collect();
        for _ in 1..nj {
            frontier = frontier.iter().map(|&a| g.add_idx(a, x)).collect();
            for &a in &frontier {
                next[a] = true;
            }
        }
        rec_aut(ctx, j + 1, gens, sig_gens, images, &next, out)?;
    }
    Ok(())
}

/// `Aut(G)`, the case `σ = id`.
pub fn all_automorphisms(g: &FiniteAbelianGroup) -> Result<Vec<GroupMap>> {
    let ctx = SigmaContext::new(&GroupMap::identity(g))?;
    aut_sigma_elements(&ctx)?
        .iter()
        .map(|p| {
            let images = (0..g.rank()).map(|j| p.apply(g.generator(j))).collect();
            GroupMap::from_image_indices(g, images)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automorphism_counts() {
        let cases: &[(&[u64], usize)] = &[(&[1], 1), (&[2], 1), (&[8], 4), (&[2, 2], 6), (&[2, 4], 8), (&[2, 2, 2], 168), (&[3, 3], 48), (&[9], 6)];
        for &(m, count) in cases {
            let g = FiniteAbelianGroup::new(m).unwrap();
            assert_eq!(all_automorphisms(&g).unwrap().len(), count, "{m:?}");
        }
    }
}
