//! Hopf endomorphisms of a biproduct fixing `π`, their factorization
//! `F ↦ (F_L, F_R)`, and the checks built on it.

use serde::{Deserialize, Serialize};

use crate::abelian_group::pairing;
use crate::characters::Character;
use crate::cyclotomic::CycloNum;
use crate::error::{Error, Result};
use crate::perm_search::Perm;

use super::biproduct::{first_col_diff, Biproduct};
use super::linalg::{add_term, basis_vector, LinMap, Tensor, Vector};

/// Bound on candidate maps in the independent enumeration.
pub const MAX_CANDIDATES: usize = 200_000;

/// Result of checking `F ∈ End_Hopf(A, π)` and bijectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HopfEndoReport {
    pub algebra: bool,
    pub unit: bool,
    pub coalgebra: bool,
    pub counit: bool,
    pub fixes_pi: bool,
    pub bijective: bool,
    /// First failing condition with its basis indices.
    pub first_failure: Option<(String, Vec<usize>)>,
}

impl HopfEndoReport {
    pub fn holds(&self) -> bool {
        self.algebra && self.unit && self.coalgebra && self.counit && self.fixes_pi && self.bijective
    }
}

/// `F_L = Π∘F∘J` and `F_R = Π∘F∘j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factors {
    pub fl: LinMap,
    pub fr: LinMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RTrivialReport {
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    pub f: bool,
}

impl RTrivialReport {
    pub fn values(&self) -> [bool; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f]
    }

    pub fn agree(&self) -> bool {
        let v = self.values();
        v.iter().all(|&x| x == v[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YdReport {
    pub bijective: bool,
    pub algebra: bool,
    pub coalgebra: bool,
    pub module: bool,
    pub comodule: bool,
}

impl YdReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.algebra && self.coalgebra && self.module && self.comodule
    }
}

/// The six conditions describing the kernel group `𝒩(B, H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NbhReport {
    pub conditions: [bool; 6],
}

impl NbhReport {
    pub fn holds(&self) -> bool {
        self.conditions.iter().all(|&x| x)
    }
}

/// Restriction `Θ(F)` to the sub-biproduct over `k[𝐔]`.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub map: LinMap,
    pub is_hopf: bool,
    pub left_agrees: bool,
    pub right_agrees: bool,
}

impl Biproduct {
    fn e(&self, i: usize) -> Vector {
        basis_vector(&self.field, i)
    }

    fn b_one(&self) -> Vector {
        self.b.unit.clone()
    }

    /// Checks the Hopf endomorphism conditions of `F` and `π∘F = π`.
    pub fn is_hopf_endo_fixing_pi(&self, f: &LinMap) -> Result<HopfEndoReport> {
        let d = self.dim();
        if f.dom != d || f.cod != d {
            return Err(Error::InvalidInput("map does not act on A".into()));
        }
        let t = &self.tables;
        let mut first: Option<(String, Vec<usize>)> = None;
        let mut note = |name: &str, at: Option<Vec<usize>>| -> bool {
            match at {
                Some(v) => {
                    if first.is_none() {
                        first = Some((name.to_string(), v));
                    }
                    false
                }
                None => true,
            }
        };
        let alg = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .find(|&(i, j)| f.apply(&t.mul[i][j]) != t.mul_vec(f.col(i), f.col(j)));
        let algebra = note("algebra", alg.map(|(i, j)| vec![i, j]));
        let unit = note("unit", (f.apply(&t.unit) != t.unit).then(Vec::new));
        let co = (0..d).find(|&i| t.comul_vec(f.col(i)) != f.tensor_apply(f, &t.comul[i]));
        let coalgebra = note("coalgebra", co.map(|i| vec![i]));
        let cu = (0..d).find(|&i| t.counit_vec(f.col(i)) != t.counit[i]);
        let counit = note("counit", cu.map(|i| vec![i]));
        let pi = self.pi_projection();
        let fixes_pi = note("pi", first_col_diff(&pi.compose(f)?, &pi));
        let bijective = f.is_bijective()?;
        let _ = note("bijective", (!bijective).then(Vec::new));
        Ok(HopfEndoReport { algebra, unit, coalgebra, counit, fixes_pi, bijective, first_failure: first })
    }

    /// `f(b) g(h) × h` on basis elements, the map attached to `(f, g)`.
    pub fn map_from_factors(&self, fl: &LinMap, fr: &LinMap) -> LinMap {
        let cols = (0..self.dim())
            .map(|i| {
                let (m, h) = self.split(i);
                let b = self.b.mul_vec(fl.col(m), fr.col(h));
                b.into_iter().map(|(x, c)| (self.idx(x, h), c)).collect()
            })
            .collect();
        LinMap { dom: self.dim(), cod: self.dim(), cols }
    }

    /// `(F_L, F_R)`, with `F(b × h) = F_L(b)F_R(h) × h` re-verified.
    pub fn factorize(&self, f: &LinMap) -> Result<Factors> {
        let big_pi = self.pi_cap();
        let fl = big_pi.compose(&f.compose(&self.j_cap())?)?;
        let fr = big_pi.compose(&f.compose(&self.j_injection())?)?;
        let rebuilt = self.map_from_factors(&fl, &fr);
        if let Some(at) = first_col_diff(&rebuilt, f) {
            return Err(Error::InternalInconsistency(format!(
                "F(b × h) ≠ F_L(b)F_R(h) × h at basis element {at:?}; F is not in End_Hopf(A, π)"
            )));
        }
        Ok(Factors { fl, fr })
    }

    pub fn eta_epsilon(&self) -> LinMap {
        self.h.unit_counit_into(&self.b)
    }

    /// `f ⋆ g` for maps `H → B`.
    pub fn convolve(&self, f: &LinMap, g: &LinMap) -> LinMap {
        self.h.convolve(&self.b, f, g)
    }

    /// `J_R(h) = h·F_R(h⁻¹)` on group-likes.
    pub fn convolution_inverse_fr(&self, fr: &LinMap) -> LinMap {
        let g = self.big_g();
        let cols = g.elements().map(|h| self.act_on(h, fr.col(g.neg_idx(h)))).collect();
        LinMap { dom: g.order(), cod: self.gcal().order(), cols }
    }

    /// Reads `τ` off `F_L(e_m) = e_{τ(m)}`.
    pub fn tau_of(&self, fl: &LinMap) -> Result<Perm> {
        let table = fl
            .as_permutation()
            .ok_or_else(|| Error::InternalInconsistency("F_L does not permute the idempotents".into()))?;
        Perm::from_table(table)
    }

    fn is_coalgebra_map_b(&self, fl: &LinMap) -> bool {
        let b = &self.b;
        (0..b.dim).all(|m| b.comul_vec(fl.col(m)) == fl.tensor_apply(fl, &b.comul[m]) && b.counit_vec(fl.col(m)) == b.counit[m])
    }

    /// Whether `F_L` is a coalgebra map, decided three ways that must agree:
    /// directly, through `F_R(c_(-1)) ⊗ c_(0) = 1 ⊗ c` on `Im(F_L)`, and
    /// through additivity of `τ`.
    pub fn fl_coalgebra_test(&self, f: &LinMap) -> Result<bool> {
        let Factors { fl, fr } = self.factorize(f)?;
        let direct = self.is_coalgebra_map_b(&fl);
        let via_fr = self.gcal().elements().all(|m| {
            let c = fl.col(m);
            let mut lhs = Tensor::new();
            for (&k, ck) in c {
                for (h, x, d) in &self.coaction[k] {
                    for (&y, e) in fr.col(*h) {
                        add_term(&mut lhs, (y, *x), &(ck * d) * e);
                    }
                }
            }
            let mut rhs = Tensor::new();
            for (&x, cx) in c {
                for y in self.gcal().elements() {
                    add_term(&mut rhs, (y, x), cx.clone());
                }
            }
            lhs == rhs
        });
        let tau = self.tau_of(&fl)?;
        let additive = tau.is_additive(self.gcal());
        if direct != via_fr || direct != additive {
            return Err(Error::InternalInconsistency(format!(
                "coalgebra test disagrees: direct {direct}, via F_R {via_fr}, τ additive {additive}"
            )));
        }
        Ok(direct)
    }

    /// The six equivalent conditions for `F_R` to be trivial, each evaluated
    /// separately.
    pub fn rtrivial_equivalences(&self, f: &LinMap) -> Result<RTrivialReport> {
        let Factors { fl, fr } = self.factorize(f)?;
        let (gc, gg) = (self.gcal(), self.big_g());
        let j = self.j_injection();
        let one = self.one();
        let constant = |v: &Vector| -> Option<CycloNum> {
            let first = v.get(&0).cloned().unwrap_or_else(|| CycloNum::zero_in(&self.field));
            gc.elements()
                .all(|m| v.get(&m).cloned().unwrap_or_else(|| CycloNum::zero_in(&self.field)) == first)
                .then_some(first)
        };
        let a = gg.elements().all(|h| {
            let img = f.apply(j.col(h));
            gg.elements().all(|h2| {
                let slice: Vector = img.iter().filter(|(&i, _)| self.split(i).1 == h2).map(|(&i, c)| (self.split(i).0, c.clone())).collect();
                constant(&slice).is_some()
            })
        });
        let b = gg.elements().all(|h| constant(fr.col(h)).is_some());
        let c = gg.elements().all(|h| constant(fr.col(h)).is_some_and(|x| x == one) && fr.col(h).len() == gc.order());
        let d = fr == self.eta_epsilon();
        let e = (0..self.dim()).all(|i| {
            let (m, h) = self.split(i);
            let want: Vector = fl.col(m).iter().map(|(&x, c)| (self.idx(x, h), c.clone())).collect();
            f.col(i) == &want
        });
        let ff = gg.elements().all(|h| f.apply(j.col(h)) == *j.col(h));
        Ok(RTrivialReport { a, b, c, d, e, f: ff })
    }

    /// `f ∈ Aut_YD-Hopf(B)`: bijective algebra and coalgebra map commuting
    /// with the action and coaction.
    pub fn yd_membership_test(&self, fl: &LinMap) -> Result<YdReport> {
        let (gc, gg) = (self.gcal(), self.big_g());
        let b = &self.b;
        let bijective = fl.is_bijective()?;
        let algebra = gc.elements().all(|x| gc.elements().all(|y| fl.apply(&b.mul[x][y]) == b.mul_vec(fl.col(x), fl.col(y))))
            && fl.apply(&b.unit) == b.unit;
        let coalgebra = self.is_coalgebra_map_b(fl);
        let module = gg.elements().all(|h| gc.elements().all(|m| *fl.col(self.act[h][m]) == self.act_on(h, fl.col(m))));
        let comodule = gc.elements().all(|m| {
            let lhs = self.rho(fl.col(m));
            let mut rhs = Tensor::new();
            for (h, x, c) in &self.coaction[m] {
                for (&y, d) in fl.col(*x) {
                    add_term(&mut rhs, (*h, y), c * d);
                }
            }
            lhs == rhs
        });
        Ok(YdReport { bijective, algebra, coalgebra, module, comodule })
    }

    /// The conditions (1)-(6) for `g: H → B` to lie in `𝒩(B, H)`.
    pub fn nbh_conditions(&self, g: &LinMap) -> NbhReport {
        let (gc, gg) = (self.gcal(), self.big_g());
        let b = &self.b;
        let one = self.b_one();
        let c1 = gc.elements().all(|k| {
            let mut lhs = Tensor::new();
            for (h, x, c) in &self.coaction[k] {
                for (&y, d) in g.col(*h) {
                    add_term(&mut lhs, (y, *x), c * d);
                }
            }
            let rhs: Tensor = gc.elements().map(|y| ((y, k), self.one())).collect();
            lhs == rhs
        });
        let c2 = gg.elements().all(|h| {
            gc.elements().all(|m| {
                let hb = self.act_on(h, &self.e(m));
                b.mul_vec(&hb, g.col(h)) == b.mul_vec(g.col(h), &hb)
            })
        });
        let c3 = gg.elements().all(|h| {
            gg.elements().all(|h2| *g.col(gg.add_idx(h, h2)) == b.mul_vec(g.col(h), &self.act_on(h, g.col(h2))))
        });
        let c4 = *g.col(0) == one;
        let c5 = gg.elements().all(|h| {
            let v = g.col(h);
            let mut vv = Tensor::new();
            for (&x, c) in v {
                for (&y, d) in v {
                    add_term(&mut vv, (x, y), c * d);
                }
            }
            b.comul_vec(v) == vv && b.counit_vec(v) == self.one()
        });
        let c6 = gg.elements().all(|h| {
            let rhs: Tensor = g.col(h).iter().map(|(&x, c)| ((0, x), c.clone())).collect();
            self.rho(g.col(h)) == rhs
        });
        NbhReport { conditions: [c1, c2, c3, c4, c5, c6] }
    }

    /// Conclusions (a)-(e) about `F_L` for an endomorphism in `End_Hopf(A, π)`.
    pub fn fl_structure(&self, fac: &Factors) -> [bool; 5] {
        let (gc, gg) = (self.gcal(), self.big_g());
        let b = &self.b;
        let Factors { fl, fr } = fac;
        let a = gc.elements().all(|x| gc.elements().all(|y| fl.apply(&b.mul[x][y]) == b.mul_vec(fl.col(x), fl.col(y))))
            && fl.apply(&b.unit) == b.unit;
        let bb = gc.elements().all(|m| b.counit_vec(fl.col(m)) == b.counit[m]);
        let c = gc.elements().all(|m| {
            let lhs = b.comul_vec(fl.col(m));
            let mut rhs = Tensor::new();
            for j in gc.elements() {
                for (h, x, coef) in &self.coaction[gc.sub_idx(m, j)] {
                    let left = b.mul_vec(fl.col(j), fr.col(*h));
                    for (&u, cu) in &left {
                        for (&v, cv) in fl.col(*x) {
                            add_term(&mut rhs, (u, v), &(coef * cu) * cv);
                        }
                    }
                }
            }
            lhs == rhs
        });
        let d = gc.elements().all(|m| {
            let lhs = self.rho(fl.col(m));
            let mut rhs = Tensor::new();
            for (h, x, coef) in &self.coaction[m] {
                for (&y, cy) in fl.col(*x) {
                    add_term(&mut rhs, (*h, y), coef * cy);
                }
            }
            lhs == rhs
        });
        let e = gg.elements().all(|h| {
            gc.elements().all(|m| {
                let lhs = b.mul_vec(fl.col(self.act[h][m]), fr.col(h));
                let rhs = b.mul_vec(fr.col(h), &self.act_on(h, fl.col(m)));
                lhs == rhs
            })
        });
        [a, bb, c, d, e]
    }

    /// Conclusions (a)-(d) about `F_R`.
    pub fn fr_structure(&self, fac: &Factors) -> [bool; 4] {
        let n = self.nbh_conditions(&fac.fr).conditions;
        [n[2], n[3], n[4], n[5]]
    }

    /// `F(e_s × 𝛌^ℓ) = α(s)^ℓ e_{τ(s)} × 𝛌^ℓ` on an `A'`.
    pub fn automorphism_from_pair(&self, tau: &Perm, alpha: &Character) -> Result<LinMap> {
        self.require_a_prime()?;
        if tau.len() != self.gcal().order() || alpha.group() != self.gcal() || alpha.modulus() != self.n_order {
            return Err(Error::InvalidInput("pair does not match the biproduct".into()));
        }
        let cols = (0..self.dim())
            .map(|i| {
                let (s, h) = self.split(i);
                let l = self.power_of_u(h);
                let c = self.lambda_pow(alpha.eval(s) * l);
                let mut v = Vector::new();
                v.insert(self.idx(tau.apply(s), h), c);
                v
            })
            .collect();
        LinMap::new(self.dim(), self.dim(), cols)
    }

    /// Inverse of [`Biproduct::automorphism_from_pair`]: `τ` from `F_L` and
    /// `α` from `F_R(𝛌)e_{τ(s)} = α(s)e_{τ(s)}`.
    pub fn pair_from_automorphism(&self, f: &LinMap) -> Result<(Perm, Character)> {
        self.require_a_prime()?;
        let fac = self.factorize(f)?;
        let tau = self.tau_of(&fac.fl)?;
        let g_lambda = fac.fr.col(self.spec.u);
        let n = self.n_order;
        let exps: Vec<u64> = self
            .gcal()
            .elements()
            .map(|s| {
                let v = g_lambda.get(&tau.apply(s)).cloned().unwrap_or_else(|| CycloNum::zero_in(&self.field));
                (0..n)
                    .find(|&a| self.lambda_pow(a) == v)
                    .ok_or_else(|| Error::InternalInconsistency("F_R(𝛌) has an eigenvalue outside μ_N".into()))
            })
            .collect::<Result<_>>()?;
        let g = self.gcal();
        let gens: Vec<u64> = (0..g.rank()).map(|j| exps[g.generator(j)]).collect();
        let alpha = Character::new(g, n, &gens)?;
        if g.elements().any(|s| alpha.eval(s) != exps[s]) {
            return Err(Error::InternalInconsistency("eigenvalues of F_R(𝛌) are not a character".into()));
        }
        Ok((tau, alpha))
    }

    fn require_a_prime(&self) -> Result<()> {
        if self.is_a_prime() {
            Ok(())
        } else {
            Err(Error::InvalidInput("operation needs A' = k[𝒢] × k[𝐔]".into()))
        }
    }

    fn power_of_u(&self, h: usize) -> u64 {
        (0..self.n_order).find(|&l| self.big_g().times_idx(l, self.spec.u) == h).unwrap_or(0)
    }

    /// `Aut_Hopf(A', π')` by testing every candidate against the Hopf
    /// verifier. Candidates use only two necessary conditions: `τ(0) = 0`
    /// with `τσ = στ`, and `F_R(𝛌)` group-like of order dividing `N`.
    pub fn enumerate_aut_hopf_a_prime(&self) -> Result<Vec<LinMap>> {
        self.require_a_prime()?;
        let gc = self.gcal();
        let taus = centralizer_fixing_zero(&self.sigma, &self.orbits.orbits);
        let cs: Vec<usize> = gc.elements().filter(|&c| gc.times_idx(self.n_order, c) == 0).collect();
        if taus.len() * cs.len() > MAX_CANDIDATES {
            return Err(Error::ResourceCap(format!("{} candidate maps", taus.len() * cs.len())));
        }
        let mut out = Vec::new();
        for tau in &taus {
            for &c in &cs {
                let cols = (0..self.dim())
                    .map(|i| {
                        let (s, h) = self.split(i);
                        let l = self.power_of_u(h);
                        let k = pairing(gc, gc.times_idx(l, c), tau[s]) as i64;
                        let mut v = Vector::new();
                        v.insert(self.idx(tau[s], h), self.omega_pow(-k));
                        v
                    })
                    .collect();
                let f = LinMap::new(self.dim(), self.dim(), cols)?;
                if self.is_hopf_endo_fixing_pi(&f)?.holds() {
                    out.push(f);
                }
            }
        }
        Ok(out)
    }

    /// `𝒩(B, H)` from group-like candidates `g(h) = g^(Σ h_j c_j)` with
    /// `θ(c_j) = c_j`, filtered by `g(b_(-1)) ⊗ b_(0) = 1 ⊗ b` on the
    /// eigenvectors `e_{m,λ_m^i}`, where it reads `g(𝛌_m^i) = 1`.
    pub fn kernel_nu_elements(&self) -> Result<Vec<LinMap>> {
        let (gc, gg) = (self.gcal(), self.big_g());
        let theta = &self.spec.theta;
        let per_gen: Vec<Vec<usize>> = gg
            .moduli()
            .iter()
            .map(|&nj| gc.elements().filter(|&c| gc.times_idx(nj, c) == 0 && theta.eval(c) == c).collect())
            .collect();
        let total: usize = per_gen.iter().map(|v| v.len()).product();
        if total > MAX_CANDIDATES {
            return Err(Error::ResourceCap(format!("{total} candidate maps")));
        }
        let mut lens: Vec<u64> = self.orbits.len_of.iter().map(|&l| l as u64).collect();
        lens.sort_unstable();
        lens.dedup();
        let mut out = Vec::new();
        let mut choice = vec![0usize; per_gen.len()];
        loop {
            let image = |h: usize| -> usize {
                let mut acc = 0;
                for (j, &k) in choice.iter().enumerate() {
                    acc = gc.add_idx(acc, gc.times_idx(gg.coord(h, j), per_gen[j][k]));
                }
                acc
            };
            let passes = lens.iter().all(|&len| {
                (0..len).all(|i| image(gg.times_idx((self.n_order / len) * i, self.spec.u)) == 0)
            });
            if passes {
                let cols = gg
                    .elements()
                    .map(|h| {
                        let c = image(h);
                        gc.elements().map(|m| (m, self.omega_pow(-(pairing(gc, c, m) as i64)))).collect()
                    })
                    .collect();
                let g = LinMap::new(gg.order(), gc.order(), cols)?;
                if !self.nbh_conditions(&g).holds() {
                    return Err(Error::InternalInconsistency("filtered candidate violates the kernel conditions".into()));
                }
                out.push(g);
            }
            // Advance the mixed-radix counter.
            let mut j = 0;
            loop {
                if j == choice.len() {
                    return Ok(out);
                }
                choice[j] += 1;
                if choice[j] < per_gen[j].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
        }
    }

    /// Whether `maps` is a group under convolution.
    pub fn is_convolution_group(&self, maps: &[LinMap]) -> bool {
        let unit = self.eta_epsilon();
        maps.contains(&unit)
            && maps.iter().all(|f| {
                maps.iter().all(|g| maps.contains(&self.convolve(f, g)))
                    && maps.iter().any(|g| self.convolve(f, g) == unit && self.convolve(g, f) == unit)
            })
    }

    /// Extends generator images to `g: H → B` by `g(hh') = g(h)(h·g(h'))`,
    /// failing if the relations of `G` are not respected.
    pub fn extend_cocycle(&self, gen_images: &[Vector]) -> Result<LinMap> {
        let gg = self.big_g();
        if gen_images.len() != gg.rank() {
            return Err(Error::InvalidInput(format!("{} images for {} generators", gen_images.len(), gg.rank())));
        }
        let mut cols: Vec<Option<Vector>> = vec![None; gg.order()];
        cols[0] = Some(self.b_one());
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(h) = queue.pop_front() {
            let gh = cols[h].clone().expect("visited");
            for (j, img) in gen_images.iter().enumerate() {
                let next = gg.add_idx(h, gg.generator(j));
                let v = self.b.mul_vec(&gh, &self.act_on(h, img));
                match &cols[next] {
                    Some(w) if *w != v => {
                        return Err(Error::InvalidInput("generator images do not extend to a cocycle".into()))
                    }
                    Some(_) => {}
                    None => {
                        cols[next] = Some(v);
                        queue.push_back(next);
                    }
                }
            }
        }
        LinMap::new(gg.order(), self.gcal().order(), cols.into_iter().map(|c| c.expect("G is generated")).collect())
    }

    /// `Θ(F) = F|_{B × H'}` with `Θ(F)_L = F_L` and `Θ(F)_R = F_R|_{H'}` checked.
    pub fn restrict_theta(&self, f: &LinMap) -> Result<(Biproduct, Restriction)> {
        let (sub, embed) = self.sub_biproduct_u()?;
        let mut back = vec![usize::MAX; self.dim()];
        for (i, &k) in embed.iter().enumerate() {
            back[k] = i;
        }
        let mut cols = Vec::with_capacity(sub.dim());
        for &k in &embed {
            let mut v = Vector::new();
            for (&x, c) in f.col(k) {
                if back[x] == usize::MAX {
                    return Err(Error::InternalInconsistency("F does not stabilize B × H'".into()));
                }
                v.insert(back[x], c.clone());
            }
            cols.push(v);
        }
        let map = LinMap::new(sub.dim(), sub.dim(), cols)?;
        let is_hopf = sub.is_hopf_endo_fixing_pi(&map)?.holds();
        let full = self.factorize(f)?;
        let part = sub.factorize(&map)?;
        let left_agrees = part.fl == full.fl;
        let right_agrees =
            (0..sub.big_g().order()).all(|k| part.fr.col(k) == full.fr.col(self.big_g().times_idx(k as u64, self.spec.u)));
        Ok((sub, Restriction { map, is_hopf, left_agrees, right_agrees }))
    }
}

/// Permutations `τ` of the group fixing `0` and commuting with `σ`, given
/// the `σ`-orbits. An orbit is sent to an orbit of the same length, and the
/// image of its first point determines the rest.
pub fn centralizer_fixing_zero(sigma: &crate::abelian_group::GroupMap, orbits: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = sigma.group().order();
    let mut out = Vec::new();
    let mut tau = vec![usize::MAX; n];
    tau[0] = 0;
    let free: Vec<&Vec<usize>> = orbits.iter().filter(|o| !o.contains(&0)).collect();
    let mut used = vec![false; free.len()];
    fn rec(
        k: usize,
        free: &[&Vec<usize>],
        used: &mut [bool],
        tau: &mut Vec<usize>,
        sigma: &crate::abelian_group::GroupMap,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == free.len() {
            out.push(tau.clone());
            return;
        }
        let src = free[k];
        for t in 0..free.len() {
            if used[t] || free[t].len() != src.len() {
                continue;
            }
            used[t] = true;
            for &start in free[t] {
                let mut y = start;
                let mut x = src[0];
                for _ in 0..src.len() {
                    tau[x] = y;
                    x = sigma.eval(x);
                    y = sigma.eval(y);
                }
                rec(k + 1, free, used, tau, sigma, out);
            }
            used[t] = false;
        }
    }
    rec(0, &free, &mut used, &mut tau, sigma, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::biproduct::BiproductSpec;
    use super::*;
    use crate::abelian_group::{dual_inverse, FiniteAbelianGroup, GroupMap};
    use crate::perm_search::{gamma_witnesses, BruteCap, SigmaContext, Strategy};

    fn sigma_p2() -> GroupMap {
        let g = FiniteAbelianGroup::new(&[2, 4]).unwrap();
        GroupMap::new(&g, &[g.elem(&[1, 0]).unwrap(), g.elem(&[1, 3]).unwrap()]).unwrap()
    }

    fn a_prime() -> Biproduct {
        Biproduct::build(BiproductSpec::a_prime(&dual_inverse(&sigma_p2()).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn sigma_is_recovered_from_theta() {
        let a = a_prime();
        assert_eq!(a.sigma, sigma_p2());
        assert_eq!(a.n_order, 2);
    }

    #[test]
    fn identity_factors() {
        let a = a_prime();
        let id = LinMap::identity(&a.field, a.dim());
        assert!(a.is_hopf_endo_fixing_pi(&id).unwrap().holds());
        let fac = a.factorize(&id).unwrap();
        assert_eq!(fac.fl, LinMap::identity(&a.field, 8));
        assert_eq!(fac.fr, a.eta_epsilon());
        assert_eq!(a.convolution_inverse_fr(&fac.fr), a.eta_epsilon());
        assert!(a.fl_coalgebra_test(&id).unwrap());
        let rt = a.rtrivial_equivalences(&id).unwrap();
        assert!(rt.values().iter().all(|&x| x));
        assert!(a.yd_membership_test(&fac.fl).unwrap().holds());
        let f = fac.fr.clone();
        assert_eq!(a.convolve(&f, &a.eta_epsilon()), f);
    }

    #[test]
    fn gamma_witnesses_give_automorphisms() {
        let a = a_prime();
        let ctx = SigmaContext::new(&a.sigma).unwrap();
        let ws = gamma_witnesses(&ctx, Strategy::Constrained, BruteCap::default(), 1).unwrap();
        assert!(!ws.is_empty());
        let mut saw_non_additive = false;
        for w in &ws {
            let f = a.automorphism_from_pair(&w.tau, &w.alpha).unwrap();
            let r = a.is_hopf_endo_fixing_pi(&f).unwrap();
            assert!(r.holds(), "{r:?}");
            let fac = a.factorize(&f).unwrap();
            let g_lambda = fac.fr.col(a.spec.u);
            for s in a.gcal().elements() {
                assert_eq!(g_lambda[&w.tau.apply(s)], a.lambda_pow(w.alpha.eval(s)));
            }
            assert_eq!(a.pair_from_automorphism(&f).unwrap(), (w.tau.clone(), w.alpha.clone()));
            let jr = a.convolution_inverse_fr(&fac.fr);
            assert_eq!(a.convolve(&fac.fr, &jr), a.eta_epsilon());
            assert_eq!(a.convolve(&jr, &fac.fr), a.eta_epsilon());
            let coalg = a.fl_coalgebra_test(&f).unwrap();
            assert_eq!(coalg, w.tau.is_additive(a.gcal()));
            saw_non_additive |= !coalg;
            assert!(a.fl_structure(&fac).iter().all(|&x| x));
            assert!(a.fr_structure(&fac).iter().all(|&x| x));
            assert_eq!(a.map_from_factors(&fac.fl, &fac.fr), f);
            let rt = a.rtrivial_equivalences(&f).unwrap();
            assert!(rt.agree());
            assert_eq!(rt.a, w.alpha.is_trivial());
            let yd = a.yd_membership_test(&fac.fl).unwrap();
            assert_eq!(yd.holds(), coalg);
        }
        assert!(saw_non_additive);
    }

    #[test]
    fn non_witness_fails_coalgebra() {
        let a = a_prime();
        let ctx = SigmaContext::new(&a.sigma).unwrap();
        let ws: Vec<Perm> = gamma_witnesses(&ctx, Strategy::Constrained, BruteCap::default(), 1)
            .unwrap()
            .into_iter()
            .map(|w| w.tau)
            .collect();
        let taus = centralizer_fixing_zero(&a.sigma, &a.orbits.orbits);
        let bad = taus.into_iter().map(|t| Perm::from_table(t).unwrap()).find(|t| !ws.contains(t)).unwrap();
        let triv = Character::trivial(a.gcal(), a.n_order);
        let f = a.automorphism_from_pair(&bad, &triv).unwrap();
        let r = a.is_hopf_endo_fixing_pi(&f).unwrap();
        assert!(!r.holds());
        assert!(!r.coalgebra);
        assert_eq!(r.first_failure.as_ref().unwrap().0, "coalgebra");
    }

    #[test]
    fn independent_enumeration_matches_gamma() {
        let a = a_prime();
        let all = a.enumerate_aut_hopf_a_prime().unwrap();
        let ctx = SigmaContext::new(&a.sigma).unwrap();
        let ws = gamma_witnesses(&ctx, Strategy::Constrained, BruteCap::default(), 1).unwrap();
        assert_eq!(all.len(), ws.len());
        for w in &ws {
            assert!(all.contains(&a.automorphism_from_pair(&w.tau, &w.alpha).unwrap()));
        }
    }

    #[test]
    fn kernel_group_on_a_prime() {
        let a = a_prime();
        let ker = a.kernel_nu_elements().unwrap();
        assert_eq!(ker, vec![a.eta_epsilon()]);
        assert!(a.is_convolution_group(&ker));
        let id_theta = GroupMap::identity(&FiniteAbelianGroup::new(&[3]).unwrap());
        let triv = Biproduct::build(BiproductSpec::a_prime(&id_theta).unwrap()).unwrap();
        assert_eq!(triv.kernel_nu_elements().unwrap().len(), 1);
    }

    fn full_a() -> Biproduct {
        let theta = dual_inverse(&sigma_p2()).unwrap();
        let gc = theta.group().clone();
        let big_g = FiniteAbelianGroup::new(&[2, 2]).unwrap();
        let u = big_g.index(&[1, 0]);
        let spec = BiproductSpec { gcal: gc.clone(), theta: theta.clone(), big_g, action: vec![GroupMap::identity(&gc), theta], u };
        Biproduct::build(spec).unwrap()
    }

    #[test]
    fn witness_extends_to_full_biproduct() {
        let a = full_a();
        let ctx = SigmaContext::new(&a.sigma).unwrap();
        let ws = gamma_witnesses(&ctx, Strategy::Constrained, BruteCap::default(), 1).unwrap();
        let w = ws.iter().find(|w| !w.alpha.is_trivial() && !w.tau.is_additive(a.gcal())).unwrap();
        let fl = LinMap::from_table(&a.field, 8, w.tau.table());
        let gu: Vector = a.gcal().elements().map(|s| (w.tau.apply(s), a.lambda_pow(w.alpha.eval(s)))).collect();
        let fr = a.extend_cocycle(&[gu, a.b_one()]).unwrap();
        let f = a.map_from_factors(&fl, &fr);
        let r = a.is_hopf_endo_fixing_pi(&f).unwrap();
        assert!(r.holds(), "{r:?}");
        assert!(!a.fl_coalgebra_test(&f).unwrap());
        let (sub, res) = a.restrict_theta(&f).unwrap();
        assert!(res.is_hopf && res.left_agrees && res.right_agrees);
        assert_eq!(res.map, sub.automorphism_from_pair(&w.tau, &w.alpha).unwrap());
        assert_ne!(sub.factorize(&res.map).unwrap().fr, sub.eta_epsilon());
    }

    #[test]
    fn kernel_group_on_full_biproduct() {
        let a = full_a();
        let ker = a.kernel_nu_elements().unwrap();
        assert_eq!(ker.len(), 2);
        assert!(a.is_convolution_group(&ker));
        let gc = a.gcal();
        let c = gc.index(&[0, 2]);
        let gc_vec: Vector = gc.elements().map(|m| (m, a.omega_pow(-(pairing(gc, c, m) as i64)))).collect();
        let expected = a.extend_cocycle(&[a.b_one(), gc_vec]).unwrap();
        assert!(ker.contains(&expected));
        let f = a.map_from_factors(&LinMap::identity(&a.field, 8), &expected);
        assert!(a.is_hopf_endo_fixing_pi(&f).unwrap().holds());
        let (_, res) = a.restrict_theta(&f).unwrap();
        assert!(res.map.is_bijective().unwrap());
        assert_eq!(res.map, LinMap::identity(&a.field, 16));
    }

    #[test]
    fn inconsistent_cocycle_is_rejected() {
        let a = full_a();
        let two: Vector = [(0usize, CycloNum::from_int_in(&a.field, 2))].into_iter().collect();
        assert!(a.extend_cocycle(&[two, a.b_one()]).is_err());
    }
}
