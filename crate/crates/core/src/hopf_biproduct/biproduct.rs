use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian_group::{dual_inverse, map_order, FiniteAbelianGroup, GroupMap, Orbits};
use crate::cyclotomic::{field, CycloNum, CyclotomicField};
use crate::error::{Error, Result};

use super::linalg::{add_term, basis_vector, LinMap, Tensor, Vector};
use super::structure::{verify_bialgebra, AxiomReport, Tables};

/// Default bound on `|𝒢|·|G|`.
pub const MAX_DIM: usize = 4096;

/// Input data of a biproduct `k[𝒢] × k[G]`.
///
/// `action[j]` is the automorphism of `𝒢` by which the `j`-th generator of
/// `G` acts, and `u` is the element `𝛌` of `G` matched with the primitive
/// root `λ`.
#[derive(Clone, Debug)]
pub struct BiproductSpec {
    pub gcal: FiniteAbelianGroup,
    pub theta: GroupMap,
    pub big_g: FiniteAbelianGroup,
    pub action: Vec<GroupMap>,
    pub u: usize,
}

/// Hypotheses that hold but are not required.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFlags {
    /// `Im(π) ⊆ ⟨θ⟩`.
    pub image_in_theta: bool,
    /// The eigenvector decomposition of every `θ`-orbit reproduces `e_m`.
    pub eigenbasis_ok: bool,
}

impl BiproductSpec {
    /// `A' = k[𝒢] × k[𝐔]` with `𝐔 = ℤ_N` acting trivially.
    pub fn a_prime(theta: &GroupMap) -> Result<Self> {
        let n = map_order(theta)?;
        let big_g = FiniteAbelianGroup::cyclic(n)?;
        let u = if n == 1 { 0 } else { big_g.generator(0) };
        Ok(Self {
            gcal: theta.group().clone(),
            theta: theta.clone(),
            action: vec![GroupMap::identity(theta.group())],
            big_g,
            u,
        })
    }

    /// `π(h)` for an element of `G`.
    fn pi(&self, h: usize) -> GroupMap {
        let mut acc = GroupMap::identity(&self.gcal);
        for (j, a) in self.action.iter().enumerate() {
            let c = self.big_g.coord(h, j);
            acc = acc.compose(&a.pow(c)).expect("same group");
        }
        acc
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::SpecInvalid(m));
        if self.theta.group() != &self.gcal || !self.theta.is_auto() {
            return bad("θ is not an automorphism of 𝒢".into());
        }
        if self.action.len() != self.big_g.rank() {
            return bad(format!("{} action maps for {} generators of G", self.action.len(), self.big_g.rank()));
        }
        for (j, a) in self.action.iter().enumerate() {
            if a.group() != &self.gcal || !a.is_auto() {
                return bad(format!("action of generator {j} is not an automorphism of 𝒢"));
            }
            if !a.pow(self.big_g.moduli()[j]).is_identity() {
                return bad(format!("π does not extend to a homomorphism: π(g_{j})^{} ≠ id", self.big_g.moduli()[j]));
            }
            for (k, b) in self.action.iter().enumerate().skip(j + 1) {
                if a.compose(b)? != b.compose(a)? {
                    return bad(format!("π(g_{j}) and π(g_{k}) do not commute"));
                }
            }
            if a.compose(&self.theta)? != self.theta.compose(a)? {
                return bad(format!("hypothesis (a) fails: π(g_{j})∘θ ≠ θ∘π(g_{j})"));
            }
        }
        if self.u >= self.big_g.order() {
            return bad("𝛌 is not an element of G".into());
        }
        let n = map_order(&self.theta)?;
        if self.big_g.element_order(self.u) != n {
            return bad(format!("𝛌 has order {} but θ has order {n}", self.big_g.element_order(self.u)));
        }
        if !self.pi(self.u).is_identity() {
            return bad("hypothesis (b) fails: 𝛌 ∉ Ker(π)".into());
        }
        if self.gcal.order() * self.big_g.order() > MAX_DIM {
            return Err(Error::ResourceCap(format!(
                "dimension {} exceeds {MAX_DIM}",
                self.gcal.order() * self.big_g.order()
            )));
        }
        Ok(())
    }
}

/// `A = k[𝒢] × k[G]` on the basis `e_m × h`, index `m·|G| + h`.
#[derive(Clone, Debug)]
pub struct Biproduct {
    pub spec: BiproductSpec,
    /// Action of `θ` on idempotent labels: `θ(e_m) = e_{σ(m)}`.
    pub sigma: GroupMap,
    pub orbits: Orbits,
    pub n_order: u64,
    pub field: Arc<CyclotomicField>,
    /// `h·e_m = e_{act[h][m]}`.
    pub act: Vec<Vec<usize>>,
    /// `ρ(e_k) = Σ c·h ⊗ e_x` as `(h, x, c)`.
    pub coaction: Vec<Vec<(usize, usize, CycloNum)>>,
    pub flags: SpecFlags,
    pub tables: Tables,
    pub b: Tables,
    pub h: Tables,
}

impl Biproduct {
    pub fn build(spec: BiproductSpec) -> Result<Self> {
        spec.validate()?;
        let gc = spec.gcal.clone();
        let gg = spec.big_g.clone();
        let n = gc.order();
        let sigma = dual_inverse(&spec.theta)?;
        let orbits = Orbits::new(&sigma)?;
        let n_order = orbits.order;
        let conductor = (n as u64).lcm(&n_order);
        let f = field(conductor)?;
        let act: Vec<Vec<usize>> = gg
            .elements()
            .map(|h| {
                let d = dual_inverse(&spec.pi(h))?;
                Ok(gc.elements().map(|m| d.eval(m)).collect())
            })
            .collect::<Result<_>>()?;

        // ρ(e_k) = Σ_{i,ℓ ∈ ℤ_L} (λ_k^{-iℓ}/L) 𝛌^{(N/L)i} ⊗ e_{σ^ℓ(k)}, L = |k|.
        let mut coaction = Vec::with_capacity(n);
        for k in gc.elements() {
            let len = orbits.len_of[k] as u64;
            let mut terms: Tensor = Tensor::new();
            for i in 0..len {
                let h = gg.times_idx((n_order / len) * i, spec.u);
                let mut x = k;
                for l in 0..len {
                    let e = -(((conductor / len) * ((i * l) % len)) as i64);
                    let c = CycloNum::zeta_pow_in(&f, e).try_div(&CycloNum::from_int_in(&f, len as i64))?;
                    add_term(&mut terms, (h, x), c);
                    x = sigma.eval(x);
                }
            }
            coaction.push(terms.into_iter().map(|((h, x), c)| (h, x, c)).collect());
        }

        let image_in_theta = {
            let powers: Vec<GroupMap> = (0..n_order).map(|k| spec.theta.pow(k)).collect();
            gg.elements().all(|h| powers.contains(&spec.pi(h)))
        };
        let eigenbasis_ok = check_eigenbasis(&sigma, &orbits, &f, conductor);

        let b = Tables::idempotent_algebra(&gc, &f);
        let h = Tables::group_algebra(&gg, &f);
        let mut out = Self {
            spec,
            sigma,
            orbits,
            n_order,
            field: f.clone(),
            act,
            coaction,
            flags: SpecFlags { image_in_theta, eigenbasis_ok },
            tables: Tables::group_algebra(&FiniteAbelianGroup::cyclic(1)?, &f),
            b,
            h,
        };
        out.tables = out.build_tables();
        Ok(out)
    }

    pub fn gcal(&self) -> &FiniteAbelianGroup {
        &self.spec.gcal
    }

    pub fn big_g(&self) -> &FiniteAbelianGroup {
        &self.spec.big_g
    }

    pub fn dim(&self) -> usize {
        self.gcal().order() * self.big_g().order()
    }

    #[inline]
    pub fn idx(&self, m: usize, h: usize) -> usize {
        m * self.big_g().order() + h
    }

    #[inline]
    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.big_g().order(), i % self.big_g().order())
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor()
    }

    pub fn one(&self) -> CycloNum {
        CycloNum::one_in(&self.field)
    }

    /// `λ^k = ζ_M^{kM/N}`.
    pub fn lambda_pow(&self, k: u64) -> CycloNum {
        CycloNum::zeta_pow_in(&self.field, ((self.conductor() / self.n_order) * (k % self.n_order)) as i64)
    }

    /// `ω^k = ζ_M^{kM/n}`.
    pub fn omega_pow(&self, k: i64) -> CycloNum {
        CycloNum::zeta_pow_in(&self.field, (self.conductor() / self.gcal().order() as u64) as i64 * k)
    }

    fn build_tables(&self) -> Tables {
        let (gc, gg) = (self.gcal(), self.big_g());
        let d = self.dim();
        let f = &self.field;
        let one = self.one();
        let mut mul = vec![vec![Vector::new(); d]; d];
        for m in gc.elements() {
            for g in gg.elements() {
                for nn in gc.elements() {
                    if self.act[g][nn] != m {
                        continue;
                    }
                    for g2 in gg.elements() {
                        mul[self.idx(m, g)][self.idx(nn, g2)] = basis_vector(f, self.idx(m, gg.add_idx(g, g2)));
                    }
                }
            }
        }
        let unit = gc.elements().map(|m| (self.idx(m, 0), one.clone())).collect();
        let mut comul = Vec::with_capacity(d);
        let mut counit = Vec::with_capacity(d);
        for i in 0..d {
            let (m, h) = self.split(i);
            let mut t = Tensor::new();
            for j in gc.elements() {
                for (hh, x, c) in &self.coaction[gc.sub_idx(m, j)] {
                    add_term(&mut t, (self.idx(j, gg.add_idx(*hh, h)), self.idx(*x, h)), c.clone());
                }
            }
            comul.push(t);
            counit.push(if m == 0 { one.clone() } else { CycloNum::zero_in(f) });
        }
        Tables { dim: d, field: f.clone(), mul, unit, comul, counit }
    }

    /// `ρ(b)` as a tensor in `H ⊗ B`.
    pub fn rho(&self, b: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (&k, c) in b {
            for (h, x, d) in &self.coaction[k] {
                add_term(&mut out, (*h, *x), c * d);
            }
        }
        out
    }

    /// `h·b` for a group element `h`.
    pub fn act_on(&self, h: usize, b: &Vector) -> Vector {
        b.iter().map(|(&m, c)| (self.act[h][m], c.clone())).collect()
    }

    /// Axioms of the bialgebra `A` together with the module, comodule and
    /// Yetter-Drinfel'd conditions for `B` over `H`.
    pub fn verify_bialgebra(&self) -> AxiomReport {
        let mut r = verify_bialgebra(&self.tables);
        let (gc, gg) = (self.gcal(), self.big_g());
        let e = |m: usize| basis_vector(&self.field, m);

        let module_fail = gg
            .elements()
            .flat_map(|a| gg.elements().flat_map(move |b| gc.elements().map(move |m| (a, b, m))))
            .find(|&(a, b, m)| self.act[gg.add_idx(a, b)][m] != self.act[a][self.act[b][m]]);
        let module_fail = module_fail.map(|(a, b, m)| vec![a, b, m]).or_else(|| {
            gc.elements().find(|&m| self.act[0][m] != m).map(|m| vec![0, m])
        });
        r.push("module", module_fail);

        // Action is by algebra and coalgebra automorphisms of B.
        let modalg_fail = gg.elements().find(|&h| {
            let perm = &self.act[h];
            perm[0] != 0 || gc.elements().any(|m| gc.elements().any(|j| perm[gc.sub_idx(m, j)] != gc.sub_idx(perm[m], perm[j])))
        });
        r.push("module bialgebra", modalg_fail.map(|h| vec![h]));

        // (Δ_H ⊗ id)ρ = (id ⊗ ρ)ρ and (ε ⊗ id)ρ = id.
        let comod_fail = gc.elements().find(|&k| {
            let mut left = super::linalg::Tensor3::new();
            let mut right = super::linalg::Tensor3::new();
            let mut eps = Vector::new();
            for (h, x, c) in &self.coaction[k] {
                add_term(&mut left, (*h, *h, *x), c.clone());
                add_term(&mut eps, *x, c.clone());
                for (h2, y, d) in &self.coaction[*x] {
                    add_term(&mut right, (*h, *h2, *y), c * d);
                }
            }
            left != right || eps != e(k)
        });
        r.push("comodule", comod_fail.map(|k| vec![k]));

        // ρ is an algebra map: ρ(e_a e_b) = ρ(e_a)ρ(e_b), ρ(1) = 1 ⊗ 1.
        let comodalg_fail = gc.elements().flat_map(|a| gc.elements().map(move |b| (a, b))).find(|&(a, b)| {
            let lhs = if a == b { self.rho(&e(a)) } else { Tensor::new() };
            let mut rhs = Tensor::new();
            for (h, x, c) in &self.coaction[a] {
                for (h2, y, d) in &self.coaction[b] {
                    if x == y {
                        add_term(&mut rhs, (gg.add_idx(*h, *h2), *x), c * d);
                    }
                }
            }
            lhs != rhs
        });
        r.push("comodule algebra", comodalg_fail.map(|(a, b)| vec![a, b]));

        // h m_(-1) ⊗ h·m_(0) = (h·m)_(-1) h ⊗ (h·m)_(0), for group-like h.
        let yd_fail = gg.elements().flat_map(|h| gc.elements().map(move |m| (h, m))).find(|&(h, m)| {
            let mut lhs = Tensor::new();
            for (hh, x, c) in &self.coaction[m] {
                add_term(&mut lhs, (gg.add_idx(h, *hh), self.act[h][*x]), c.clone());
            }
            let mut rhs = Tensor::new();
            for (hh, x, c) in &self.coaction[self.act[h][m]] {
                add_term(&mut rhs, (gg.add_idx(*hh, h), *x), c.clone());
            }
            lhs != rhs
        });
        r.push("yetter-drinfeld", yd_fail.map(|(h, m)| vec![h, m]));
        r
    }

    /// `π(e_m × h) = δ_{m,0} h`.
    pub fn pi_projection(&self) -> LinMap {
        let cols = (0..self.dim())
            .map(|i| {
                let (m, h) = self.split(i);
                if m == 0 { basis_vector(&self.field, h) } else { Vector::new() }
            })
            .collect();
        LinMap { dom: self.dim(), cod: self.big_g().order(), cols }
    }

    /// `j(h) = 1 × h`.
    pub fn j_injection(&self) -> LinMap {
        let cols = self
            .big_g()
            .elements()
            .map(|h| self.gcal().elements().map(|m| (self.idx(m, h), self.one())).collect())
            .collect();
        LinMap { dom: self.big_g().order(), cod: self.dim(), cols }
    }

    /// `Π(b × h) = b ε(h)`.
    pub fn pi_cap(&self) -> LinMap {
        let cols = (0..self.dim()).map(|i| basis_vector(&self.field, self.split(i).0)).collect();
        LinMap { dom: self.dim(), cod: self.gcal().order(), cols }
    }

    /// `J(b) = b × 1`.
    pub fn j_cap(&self) -> LinMap {
        let cols = self.gcal().elements().map(|m| basis_vector(&self.field, self.idx(m, 0))).collect();
        LinMap { dom: self.gcal().order(), cod: self.dim(), cols }
    }

    /// The antipode of `H`: group inversion.
    pub fn antipode_h(&self) -> LinMap {
        let g = self.big_g();
        LinMap::from_table(&self.field, g.order(), &g.elements().map(|h| g.neg_idx(h)).collect::<Vec<_>>())
    }

    /// `π∘j = Id_H`, `Π∘J = Id_B` and `J∘Π = Id_A ⋆ (j∘S∘π)`.
    pub fn verify_structure_maps(&self) -> Result<AxiomReport> {
        let mut r = AxiomReport::default();
        let pi = self.pi_projection();
        let j = self.j_injection();
        let big_pi = self.pi_cap();
        let big_j = self.j_cap();
        let pij = pi.compose(&j)?;
        r.push("pi j = id", first_col_diff(&pij, &LinMap::identity(&self.field, self.big_g().order())));
        let pj = big_pi.compose(&big_j)?;
        r.push("Pi J = id", first_col_diff(&pj, &LinMap::identity(&self.field, self.gcal().order())));
        let lhs = big_j.compose(&big_pi)?;
        let jsp = j.compose(&self.antipode_h())?.compose(&pi)?;
        let rhs = self.tables.convolve(&self.tables, &LinMap::identity(&self.field, self.dim()), &jsp);
        r.push("J Pi = id * j S pi", first_col_diff(&lhs, &rhs));
        Ok(r)
    }

    /// `A'` inside `A`: the sub-biproduct over `k[𝐔]` and the embedding of
    /// its basis into that of `A`.
    pub fn sub_biproduct_u(&self) -> Result<(Biproduct, Vec<usize>)> {
        let sub = Biproduct::build(BiproductSpec::a_prime(&self.spec.theta)?)?;
        let gg = self.big_g();
        let embed = (0..sub.dim())
            .map(|i| {
                let (m, k) = sub.split(i);
                self.idx(m, gg.times_idx(k as u64, self.spec.u))
            })
            .collect();
        Ok((sub, embed))
    }

    /// `true` when `G = ⟨𝛌⟩` acts trivially, i.e. the algebra is an `A'`.
    pub fn is_a_prime(&self) -> bool {
        self.big_g().order() as u64 == self.n_order
            && (self.n_order == 1 || self.big_g().element_order(self.spec.u) == self.n_order)
            && self.act.iter().all(|p| p.iter().enumerate().all(|(i, &x)| i == x))
    }
}

pub(crate) fn first_col_diff(a: &LinMap, b: &LinMap) -> Option<Vec<usize>> {
    if a.dom != b.dom || a.cod != b.cod {
        return Some(vec![]);
    }
    (0..a.dom).find(|&i| a.cols[i] != b.cols[i]).map(|i| vec![i])
}

/// `θ(e_{m,μ}) = μ e_{m,μ}` and `Σ_i e_{m,λ_m^i} = e_m` on every orbit.
fn check_eigenbasis(sigma: &GroupMap, orbits: &Orbits, f: &Arc<CyclotomicField>, conductor: u64) -> bool {
    let g = sigma.group();
    for m in g.elements() {
        let len = orbits.len_of[m] as u64;
        let pts: Vec<usize> = std::iter::successors(Some(m), |&x| Some(sigma.eval(x))).take(len as usize).collect();
        let inv_len = match CycloNum::from_int_in(f, len as i64).inverse() {
            Ok(x) => x,
            Err(_) => return false,
        };
        let root = |k: i64| CycloNum::zeta_pow_in(f, (conductor / len) as i64 * k);
        let mut total = Vector::new();
        for i in 0..len as i64 {
            let v: Vector = pts.iter().enumerate().map(|(l, &x)| (x, &root(-i * l as i64) * &inv_len)).collect();
            let theta_v: Vector = v.iter().map(|(&x, c)| (sigma.eval(x), c.clone())).collect();
            let scaled: Vector = v.iter().map(|(&x, c)| (x, c * &root(i))).collect();
            if theta_v != scaled {
                return false;
            }
            for (x, c) in v {
                add_term(&mut total, x, c);
            }
        }
        if total != basis_vector(f, m) {
            return false;
        }
    }
    true
}
