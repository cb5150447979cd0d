//! Characters `G → μ_M` in exponent form.
//!
//! A character with modulus `M` sends `a` to `ζ_M^{Σ e_j a_j}`; it is
//! well defined when `n_j·e_j ≡ 0 (mod M)` for every generator.

use serde::{Deserialize, Serialize};

use crate::abelian_group::{FiniteAbelianGroup, GroupMap, Orbits};
use crate::cyclotomic::{field, CycloNum};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    group: FiniteAbelianGroup,
    modulus: u64,
    exps: Vec<u64>,
}

/// Serializable exponent form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterRepr {
    pub modulus: u64,
    pub exps: Vec<u64>,
}

impl Character {
    pub fn new(group: &FiniteAbelianGroup, modulus: u64, exps: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return invalid("character modulus must be ≥ 1");
        }
        if exps.len() != group.rank() {
            return invalid(format!("expected {} exponents, got {}", group.rank(), exps.len()));
        }
        let exps: Vec<u64> = exps.iter().map(|e| e % modulus).collect();
        for (j, (&e, &n)) in exps.iter().zip(group.moduli()).enumerate() {
            if (n as u128 * e as u128) % modulus as u128 != 0 {
                return Err(Error::InvalidHom(format!(
                    "exponent {e} on generator {j} is not killed by its order {n} mod {modulus}"
                )));
            }
        }
        Ok(Self { group: group.clone(), modulus, exps })
    }

    pub fn trivial(group: &FiniteAbelianGroup, modulus: u64) -> Self {
        Self { group: group.clone(), modulus, exps: vec![0; group.rank()] }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    pub fn repr(&self) -> CharacterRepr {
        CharacterRepr { modulus: self.modulus, exps: self.exps.clone() }
    }

    /// Exponent `a` with `α(x) = ζ_M^a`.
    pub fn eval(&self, x: usize) -> u64 {
        let m = self.modulus as u128;
        let mut acc: u128 = 0;
        for j in 0..self.group.rank() {
            acc += self.exps[j] as u128 * self.group.coord(x, j) as u128;
        }
        (acc % m) as u64
    }

    /// `α(x)` as a field element of conductor `M`.
    pub fn value(&self, x: usize) -> Result<CycloNum> {
        CycloNum::zeta_pow(self.modulus, self.eval(x) as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn pow(&self, k: u64) -> Self {
        let exps = self.exps.iter().map(|&e| ((e as u128 * k as u128) % self.modulus as u128) as u64).collect();
        Self { group: self.group.clone(), modulus: self.modulus, exps }
    }

    /// `α ∘ f`.
    pub fn compose(&self, f: &GroupMap) -> Result<Self> {
        if f.group() != &self.group {
            return invalid("character and map live on different groups");
        }
        let exps: Vec<u64> = (0..self.group.rank()).map(|j| self.eval(f.eval(self.group.generator(j)))).collect();
        Self::new(&self.group, self.modulus, &exps)
    }

    pub fn is_sigma_invariant(&self, sigma: &GroupMap) -> bool {
        (0..self.group.rank()).all(|j| {
            let g = self.group.generator(j);
            self.eval(sigma.eval(g)) == self.eval(g)
        })
    }

    /// `Ker α`.
    pub fn kernel(&self) -> Vec<usize> {
        self.group.elements().filter(|&x| self.eval(x) == 0).collect()
    }
}

/// `α_m(r) = ω^{-⟨m, r⟩}` with `ω = ζ_n`, `n = |G|`.
pub fn char_from_element(group: &FiniteAbelianGroup, m: usize) -> Character {
    let n = group.order() as u64;
    let exps: Vec<u64> = (0..group.rank())
        .map(|j| {
            let nj = group.moduli()[j];
            (n - ((n / nj) * group.coord(m, j)) % n) % n
        })
        .collect();
    Character::new(group, n, &exps).expect("pairing characters are well defined")
}

/// All characters `α: G → μ_N` with `α ∘ σ = α`, `N = |σ|`, in lexicographic
/// order of their exponent vectors.
pub fn sigma_invariant_characters(sigma: &GroupMap) -> Result<Vec<Character>> {
    let orbits = Orbits::new(sigma)?;
    let g = sigma.group();
    let n_ord = orbits.order;
    let choices: Vec<Vec<u64>> = g
        .moduli()
        .iter()
        .map(|&nj| (0..n_ord).filter(|&e| (nj as u128 * e as u128) % n_ord as u128 == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![0u64; g.rank()];
    fn rec(
        j: usize,
        choices: &[Vec<u64>],
        cur: &mut Vec<u64>,
        g: &FiniteAbelianGroup,
        n: u64,
        sigma: &GroupMap,
        out: &mut Vec<Character>,
    ) {
        if j == choices.len() {
            let a = Character { group: g.clone(), modulus: n, exps: cur.clone() };
            if a.is_sigma_invariant(sigma) {
                out.push(a);
            }
            return;
        }
        for &e in &choices[j] {
            cur[j] = e;
            rec(j + 1, choices, cur, g, n, sigma, out);
        }
    }
    rec(0, &choices, &mut cur, g, n_ord, sigma, &mut out);
    Ok(out)
}

/// `ℓ_α(s, m) ∈ ℤ_{|m|}` from exponents: `(a(s) − a(m)) mod |m|`.
pub fn ell_alpha(alpha: &Character, s: usize, m: usize, orbits: &Orbits) -> u64 {
    let len = orbits.len_of[m] as u64;
    let n = alpha.modulus();
    let d = (alpha.eval(s) + n - alpha.eval(m)) % n;
    d % len
}

/// `ℓ_α(s, m)` from its defining identity
/// `(α(s)/α(m))^{N/|m|} = λ_m^ℓ`, `λ_m = λ^{N/|m|}`, evaluated in `ℚ(ζ_N)`.
pub fn ell_alpha_by_roots(alpha: &Character, s: usize, m: usize, orbits: &Orbits) -> Result<u64> {
    let n_ord = alpha.modulus();
    let f = field(n_ord)?;
    let len = orbits.len_of[m] as u64;
    if n_ord % len != 0 {
        return invalid("orbit length does not divide the character modulus");
    }
    let ratio = CycloNum::zeta_pow_in(&f, alpha.eval(s) as i64).try_div(&CycloNum::zeta_pow_in(&f, alpha.eval(m) as i64))?;
    let lhs = ratio.pow(n_ord / len);
    let lambda_m = CycloNum::zeta_pow_in(&f, (n_ord / len) as i64);
    let mut acc = CycloNum::one(n_ord)?;
    for l in 0..len {
        if acc == lhs {
            return Ok(l);
        }
        acc = acc.try_mul(&lambda_m)?;
    }
    Err(Error::InternalInconsistency("no ℓ solves the defining identity".into()))
}

/// Rewrites `α` for the primitive root `λ' = λ^k`: returns `β` with
/// `β`'s exponents read against `λ'` giving the same values as `α` against `λ`.
pub fn reexpress_for_root(alpha: &Character, k: u64) -> Result<Character> {
    let n = alpha.modulus();
    let inv = (1..=n).find(|&x| (x as u128 * k as u128) % n as u128 == 1 % n as u128).ok_or_else(|| {
        Error::InvalidInput(format!("{k} is not a unit mod {n}"))
    })?;
    Ok(alpha.pow(inv))
}
