//! Structure constants of finite dimensional bialgebras and the axiom checker.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::abelian_group::{pairing, FiniteAbelianGroup};
use crate::cyclotomic::{CycloNum, CyclotomicField};
use crate::error::Result;

use super::linalg::{add_term, basis_vector, LinMap, Tensor, Tensor3, Vector};

/// Algebra and coalgebra structure constants on a basis `x_0, …, x_{d-1}`.
#[derive(Clone, Debug)]
pub struct Tables {
    pub dim: usize,
    pub field: Arc<CyclotomicField>,
    /// `mul[i][j] = x_i x_j`.
    pub mul: Vec<Vec<Vector>>,
    pub unit: Vector,
    /// `comul[i] = Δ(x_i)`.
    pub comul: Vec<Tensor>,
    pub counit: Vec<CycloNum>,
}

impl Tables {
    /// The group algebra `k[G]` on its group-like basis.
    pub fn group_algebra(g: &FiniteAbelianGroup, f: &Arc<CyclotomicField>) -> Self {
        let n = g.order();
        let one = CycloNum::one_in(f);
        let mul = (0..n).map(|a| (0..n).map(|b| basis_vector(f, g.add_idx(a, b))).collect()).collect();
        let comul = (0..n)
            .map(|a| {
                let mut t = Tensor::new();
                t.insert((a, a), one.clone());
                t
            })
            .collect();
        Self { dim: n, field: f.clone(), mul, unit: basis_vector(f, 0), comul, counit: vec![one; n] }
    }

    /// `k[𝒢]` on the idempotent basis `{e_m}`.
    pub fn idempotent_algebra(g: &FiniteAbelianGroup, f: &Arc<CyclotomicField>) -> Self {
        let n = g.order();
        let one = CycloNum::one_in(f);
        let mul = (0..n)
            .map(|a| (0..n).map(|b| if a == b { basis_vector(f, a) } else { Vector::new() }).collect())
            .collect();
        let comul = (0..n)
            .map(|m| (0..n).map(|j| ((j, g.sub_idx(m, j)), one.clone())).collect())
            .collect();
        let counit = (0..n).map(|m| if m == 0 { one.clone() } else { CycloNum::zero_in(f) }).collect();
        Self { dim: n, field: f.clone(), mul, unit: (0..n).map(|m| (m, one.clone())).collect(), comul, counit }
    }

    pub fn one(&self) -> CycloNum {
        CycloNum::one_in(&self.field)
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum::zero_in(&self.field)
    }

    pub fn mul_vec(&self, a: &Vector, b: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, x) in a {
            for (&j, y) in b {
                let p = &self.mul[i][j];
                if p.is_empty() {
                    continue;
                }
                let xy = x * y;
                for (&k, z) in p {
                    add_term(&mut out, k, &xy * z);
                }
            }
        }
        out
    }

    pub fn comul_vec(&self, a: &Vector) -> Tensor {
        let mut out = Tensor::new();
        for (&i, x) in a {
            for (&k, z) in &self.comul[i] {
                add_term(&mut out, k, x * z);
            }
        }
        out
    }

    pub fn counit_vec(&self, a: &Vector) -> CycloNum {
        let mut s = self.zero();
        for (&i, x) in a {
            s = &s + &(x * &self.counit[i]);
        }
        s
    }

    /// Product in `self ⊗ self`.
    pub fn mul_tensor(&self, a: &Tensor, b: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (&(i, j), x) in a {
            for (&(k, l), y) in b {
                let p = &self.mul[i][k];
                let q = &self.mul[j][l];
                if p.is_empty() || q.is_empty() {
                    continue;
                }
                let xy = x * y;
                for (&u, z) in p {
                    let c = &xy * z;
                    for (&v, w) in q {
                        add_term(&mut out, (u, v), &c * w);
                    }
                }
            }
        }
        out
    }

    /// `η∘ε` as a map from `self` into `target`.
    pub fn unit_counit_into(&self, target: &Tables) -> LinMap {
        LinMap { dom: self.dim, cod: target.dim, cols: self.counit.iter().map(|c| super::linalg::scale(&target.unit, c)).collect() }
    }

    /// Convolution `f ⋆ g = μ_D ∘ (f ⊗ g) ∘ Δ_C` for `f, g: self → target`.
    pub fn convolve(&self, target: &Tables, f: &LinMap, g: &LinMap) -> LinMap {
        let cols = (0..self.dim)
            .map(|i| {
                let mut out = Vector::new();
                for (&(a, b), c) in &self.comul[i] {
                    let p = target.mul_vec(f.col(a), g.col(b));
                    for (k, x) in p {
                        add_term(&mut out, k, c * &x);
                    }
                }
                out
            })
            .collect();
        LinMap { dom: self.dim, cod: target.dim, cols }
    }
}

/// One axiom with the first basis indices where it failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub counterexample: Option<Vec<usize>>,
}

impl AxiomCheck {
    pub fn from_search(name: &str, failure: Option<Vec<usize>>) -> Self {
        Self { name: name.into(), passed: failure.is_none(), counterexample: failure }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn push(&mut self, name: &str, failure: Option<Vec<usize>>) {
        self.checks.push(AxiomCheck::from_search(name, failure));
    }
}

fn first<I: Iterator<Item = Vec<usize>>>(mut it: I) -> Option<Vec<usize>> {
    it.next()
}

fn coassoc_left(t: &Tables, i: usize) -> Tensor3 {
    let mut out = Tensor3::new();
    for (&(a, b), c) in &t.comul[i] {
        for (&(x, y), d) in &t.comul[a] {
            add_term(&mut out, (x, y, b), c * d);
        }
    }
    out
}

fn coassoc_right(t: &Tables, i: usize) -> Tensor3 {
    let mut out = Tensor3::new();
    for (&(a, b), c) in &t.comul[i] {
        for (&(x, y), d) in &t.comul[b] {
            add_term(&mut out, (a, x, y), c * d);
        }
    }
    out
}

/// Bialgebra axioms on all basis pairs and triples.
pub fn verify_bialgebra(t: &Tables) -> AxiomReport {
    let d = t.dim;
    let one = t.one();
    let e = |i: usize| basis_vector(&t.field, i);
    let mut r = AxiomReport::default();

    r.push(
        "associativity",
        first((0..d).flat_map(|i| (0..d).flat_map(move |j| (0..d).map(move |k| vec![i, j, k]))).filter(|v| {
            let (i, j, k) = (v[0], v[1], v[2]);
            t.mul_vec(&t.mul[i][j], &e(k)) != t.mul_vec(&e(i), &t.mul[j][k])
        })),
    );
    r.push("unit", first((0..d).map(|i| vec![i]).filter(|v| t.mul_vec(&t.unit, &e(v[0])) != e(v[0]) || t.mul_vec(&e(v[0]), &t.unit) != e(v[0]))));
    r.push("coassociativity", first((0..d).map(|i| vec![i]).filter(|v| coassoc_left(t, v[0]) != coassoc_right(t, v[0]))));
    r.push(
        "counit",
        first((0..d).map(|i| vec![i]).filter(|v| {
            let mut left = Vector::new();
            let mut right = Vector::new();
            for (&(a, b), c) in &t.comul[v[0]] {
                add_term(&mut left, b, c * &t.counit[a]);
                add_term(&mut right, a, c * &t.counit[b]);
            }
            left != e(v[0]) || right != e(v[0])
        })),
    );
    let unit_tensor = {
        let mut u = Tensor::new();
        for (&a, x) in &t.unit {
            for (&b, y) in &t.unit {
                add_term(&mut u, (a, b), x * y);
            }
        }
        u
    };
    let delta_unit_ok = t.comul_vec(&t.unit) == unit_tensor;
    r.push(
        "comultiplication multiplicative",
        if !delta_unit_ok {
            Some(vec![])
        } else {
            first((0..d).flat_map(|i| (0..d).map(move |j| vec![i, j])).filter(|v| {
                t.comul_vec(&t.mul[v[0]][v[1]]) != t.mul_tensor(&t.comul[v[0]], &t.comul[v[1]])
            }))
        },
    );
    let eps_unit_ok = t.counit_vec(&t.unit) == one;
    r.push(
        "counit multiplicative",
        if !eps_unit_ok {
            Some(vec![])
        } else {
            first((0..d).flat_map(|i| (0..d).map(move |j| vec![i, j])).filter(|v| {
                t.counit_vec(&t.mul[v[0]][v[1]]) != &t.counit[v[0]] * &t.counit[v[1]]
            }))
        },
    );
    r
}

/// `Δ'(x_k) = Δ(x_k) + x_k ⊗ x_j`, a deliberately broken coproduct.
pub fn corrupt_coproduct(t: &Tables, k: usize, j: usize) -> Tables {
    let mut c = t.clone();
    add_term(&mut c.comul[k], (k, j), CycloNum::one_in(&t.field));
    c
}

/// Which basis `k[𝒢]` elements are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BBasis {
    GroupLike,
    Idempotent,
}

/// An element of `B = k[𝒢]` with its basis made explicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BElem {
    pub basis: BBasis,
    pub coeffs: Vector,
}

/// Outcome of the idempotent identities, each as a first failing index list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentReport {
    pub order: usize,
    pub checks: AxiomReport,
}

/// The idempotents `e_m = Σ_r ω^{⟨m,r⟩}/n g^(r)` of `k[𝒢]`.
#[derive(Clone, Debug)]
pub struct IdempotentBasis {
    group: FiniteAbelianGroup,
    field: Arc<CyclotomicField>,
    /// `M / n`: exponent scale from `ω` to `ζ_M`.
    step: u64,
}

impl IdempotentBasis {
    pub fn new(group: &FiniteAbelianGroup, field: &Arc<CyclotomicField>) -> Result<Self> {
        let n = group.order() as u64;
        if field.conductor() % n != 0 {
            return crate::error::invalid(format!("conductor {} does not contain ζ_{n}", field.conductor()));
        }
        Ok(Self { group: group.clone(), field: field.clone(), step: field.conductor() / n })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    fn m(&self) -> usize {
        self.field.conductor() as usize
    }

    /// Exponent of `ω^{⟨m,r⟩}` as a power of `ζ_M`.
    fn exp(&self, m: usize, r: usize) -> usize {
        (pairing(&self.group, m, r) * self.step) as usize % self.m()
    }

    fn neg_exp(&self, m: usize, r: usize) -> usize {
        (self.m() - self.exp(m, r)) % self.m()
    }

    /// `e_m` in the group-like basis.
    pub fn idempotent(&self, m: usize) -> BElem {
        let n = self.group.order() as i64;
        let coeffs = self
            .group
            .elements()
            .map(|r| {
                let mut counts = vec![0i64; self.m()];
                counts[self.exp(m, r)] = 1;
                (r, CycloNum::from_root_counts(&self.field, &counts, n).expect("n > 0"))
            })
            .collect();
        BElem { basis: BBasis::GroupLike, coeffs }
    }

    /// `g^(m) = Σ_n α_m(n) e_n` in the idempotent basis.
    pub fn group_like(&self, m: usize) -> BElem {
        let coeffs = self.group.elements().map(|r| (r, CycloNum::zeta_pow_in(&self.field, self.neg_exp(m, r) as i64))).collect();
        BElem { basis: BBasis::Idempotent, coeffs }
    }

    /// The integral `Λ = e_0` of `B`, normalized by `ε(Λ) = 1`.
    pub fn integral(&self) -> BElem {
        BElem { basis: BBasis::Idempotent, coeffs: basis_vector(&self.field, 0) }
    }

    /// Change of basis matrix from idempotent to group-like coordinates.
    pub fn to_group_map(&self) -> LinMap {
        let n = self.group.order();
        LinMap { dom: n, cod: n, cols: (0..n).map(|m| self.idempotent(m).coeffs).collect() }
    }

    pub fn to_idempotent_map(&self) -> LinMap {
        let n = self.group.order();
        LinMap { dom: n, cod: n, cols: (0..n).map(|m| self.group_like(m).coeffs).collect() }
    }

    pub fn convert(&self, x: &BElem, target: BBasis) -> BElem {
        if x.basis == target {
            return x.clone();
        }
        let m = match target {
            BBasis::GroupLike => self.to_group_map(),
            BBasis::Idempotent => self.to_idempotent_map(),
        };
        BElem { basis: target, coeffs: m.apply(&x.coeffs) }
    }

    fn counts_num(&self, counts: &[i64], den: i64) -> CycloNum {
        CycloNum::from_root_counts(&self.field, counts, den).expect("nonzero denominator")
    }

    /// Verifies the defining identities of the idempotent basis in the
    /// group-like basis. Every coefficient is assembled as an integer count of
    /// roots of unity before it is reduced, so the check stays exact and cheap.
    pub fn verify(&self) -> IdempotentReport {
        let g = &self.group;
        let n = g.order();
        let mm = self.m();
        let n2 = (n * n) as i64;
        let ni = n as i64;
        let mut checks = AxiomReport::default();

        // Σ_m e_m = 1: coefficient of g^(r) is Σ_m ω^{⟨m,r⟩}/n.
        let sum_fail = g.elements().find(|&r| {
            let mut counts = vec![0i64; mm];
            for m in g.elements() {
                counts[self.exp(m, r)] += 1;
            }
            let want = if r == 0 { 1 } else { 0 };
            self.counts_num(&counts, ni) != CycloNum::from_int_in(&self.field, want)
        });
        checks.push("sum to one", sum_fail.map(|r| vec![r]));

        // e_a e_b = δ_{a,b} e_b.
        let mut orth_fail = None;
        'outer: for a in g.elements() {
            for b in g.elements() {
                for t in g.elements() {
                    let mut counts = vec![0i64; mm];
                    for r in g.elements() {
                        counts[(self.exp(a, r) + self.exp(b, g.sub_idx(t, r))) % mm] += 1;
                    }
                    let lhs = self.counts_num(&counts, n2);
                    let rhs = if a == b {
                        let mut c = vec![0i64; mm];
                        c[self.exp(b, t)] = 1;
                        self.counts_num(&c, ni)
                    } else {
                        CycloNum::zero_in(&self.field)
                    };
                    if lhs != rhs {
                        orth_fail = Some(vec![a, b, t]);
                        break 'outer;
                    }
                }
            }
        }
        checks.push("orthogonality", orth_fail);

        // g^(m) e_k = ω^{-⟨m,k⟩} e_k: coefficient of g^(t) on the left is ω^{⟨k,t−m⟩}/n.
        let act_fail = g
            .elements()
            .flat_map(|m| g.elements().flat_map(move |k| g.elements().map(move |t| (m, k, t))))
            .find(|&(m, k, t)| {
                let mut c = vec![0i64; mm];
                c[self.exp(k, g.sub_idx(t, m))] = 1;
                let mut d = vec![0i64; mm];
                d[(self.neg_exp(m, k) + self.exp(k, t)) % mm] = 1;
                self.counts_num(&c, ni) != self.counts_num(&d, ni)
            });
        checks.push("group-like action", act_fail.map(|(m, k, t)| vec![m, k, t]));

        // Δ(e_m) = Σ_j e_j ⊗ e_{m−j}, compared on g^(r) ⊗ g^(s).
        let mut co_fail = None;
        'co: for m in g.elements() {
            for r in g.elements() {
                for s in g.elements() {
                    let mut counts = vec![0i64; mm];
                    for j in g.elements() {
                        counts[(self.exp(j, r) + self.exp(g.sub_idx(m, j), s)) % mm] += 1;
                    }
                    let lhs = self.counts_num(&counts, n2);
                    let rhs = if r == s {
                        let mut c = vec![0i64; mm];
                        c[self.exp(m, r)] = 1;
                        self.counts_num(&c, ni)
                    } else {
                        CycloNum::zero_in(&self.field)
                    };
                    if lhs != rhs {
                        co_fail = Some(vec![m, r, s]);
                        break 'co;
                    }
                }
            }
        }
        checks.push("coproduct", co_fail);

        let eps_fail = g.elements().find(|&m| {
            let mut counts = vec![0i64; mm];
            for r in g.elements() {
                counts[self.exp(m, r)] += 1;
            }
            let want = if m == 0 { 1 } else { 0 };
            self.counts_num(&counts, ni) != CycloNum::from_int_in(&self.field, want)
        });
        checks.push("counit", eps_fail.map(|m| vec![m]));

        // g^(m) = Σ_k α_m(k) e_k: coefficient of g^(t) is Σ_k ω^{-⟨m,k⟩+⟨k,t⟩}/n.
        let exp_fail = g.elements().flat_map(|m| g.elements().map(move |t| (m, t))).find(|&(m, t)| {
            let mut counts = vec![0i64; mm];
            for k in g.elements() {
                counts[(self.neg_exp(m, k) + self.exp(k, t)) % mm] += 1;
            }
            let want = if m == t { 1 } else { 0 };
            self.counts_num(&counts, ni) != CycloNum::from_int_in(&self.field, want)
        });
        checks.push("character expansion", exp_fail.map(|(m, t)| vec![m, t]));

        IdempotentReport { order: n, checks }
    }
}
