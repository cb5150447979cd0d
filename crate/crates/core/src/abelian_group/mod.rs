//! Finite abelian groups `ℤ_{n_1} ⊕ … ⊕ ℤ_{n_t}` with elements addressed by
//! their lexicographic index, plus homomorphisms, subgroups and quotients.
//!
//! Index 0 is always the zero element. The first coordinate is the most
//! significant digit of the index.

mod snf;

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use snf::smith_normal_form;

/// Largest group for which full lookup tables are built.
pub const TABLE_LIMIT: usize = 1 << 16;

#[derive(Debug)]
struct GroupInner {
    moduli: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

/// `ℤ_{n_1} ⊕ … ⊕ ℤ_{n_t}`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupInner>,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.inner.moduli == other.inner.moduli
    }
}
impl Eq for FiniteAbelianGroup {}

impl PartialOrd for FiniteAbelianGroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FiniteAbelianGroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.moduli().cmp(other.moduli())
    }
}
impl std::hash::Hash for FiniteAbelianGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.moduli().hash(state)
    }
}

/// An element in coordinate form, each coordinate reduced mod its modulus.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElem {
    pub coords: Vec<u64>,
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    pub fn new(moduli: &[u64]) -> Result<Self> {
        if moduli.is_empty() {
            return invalid("group needs at least one modulus");
        }
        if let Some(bad) = moduli.iter().find(|&&n| n == 0) {
            return invalid(format!("modulus {bad} is not ≥ 1"));
        }
        let mut order: usize = 1;
        for &n in moduli {
            order = usize::try_from(n)
                .ok()
                .and_then(|n| order.checked_mul(n))
                .filter(|&o| o <= u32::MAX as usize)
                .ok_or_else(|| Error::InvalidInput(format!("group order overflows for moduli {moduli:?}")))?;
        }
        let t = moduli.len();
        let mut strides = vec![1usize; t];
        for j in (0..t.saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * moduli[j + 1] as usize;
        }
        Ok(Self { inner: Arc::new(GroupInner { moduli: moduli.to_vec(), strides, order }) })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn moduli(&self) -> &[u64] {
        &self.inner.moduli
    }

    pub fn rank(&self) -> usize {
        self.inner.moduli.len()
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> u64 {
        self.moduli().iter().fold(1u64, |a, &b| a.lcm(&b))
    }

    pub fn zero(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    #[inline]
    pub fn coord(&self, idx: usize, j: usize) -> u64 {
        ((idx / self.inner.strides[j]) as u64) % self.inner.moduli[j]
    }

    pub fn coords(&self, idx: usize) -> Vec<u64> {
        (0..self.rank()).map(|j| self.coord(idx, j)).collect()
    }

    /// Index of reduced coordinates. Coordinates are assumed reduced.
    #[inline]
    pub fn index(&self, coords: &[u64]) -> usize {
        coords.iter().zip(&self.inner.strides).map(|(&c, &s)| c as usize * s).sum()
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn elem(&self, coords: &[i64]) -> Result<GroupElem> {
        if coords.len() != self.rank() {
            return invalid(format!("expected {} coordinates, got {}", self.rank(), coords.len()));
        }
        Ok(GroupElem {
            coords: coords
                .iter()
                .zip(self.moduli())
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        })
    }

    pub fn element(&self, idx: usize) -> GroupElem {
        GroupElem { coords: self.coords(idx) }
    }

    /// Validates that `e` belongs to this group and returns its index.
    pub fn index_of(&self, e: &GroupElem) -> Result<usize> {
        if e.coords.len() != self.rank() {
            return invalid(format!("element {e} does not belong to a group with moduli {:?}", self.moduli()));
        }
        for (c, n) in e.coords.iter().zip(self.moduli()) {
            if c >= n {
                return invalid(format!("element {e} has an unreduced coordinate for moduli {:?}", self.moduli()));
            }
        }
        Ok(self.index(&e.coords))
    }

    /// Index of the j-th standard generator.
    pub fn generator(&self, j: usize) -> usize {
        if self.inner.moduli[j] == 1 {
            0
        } else {
            self.inner.strides[j]
        }
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for j in 0..self.rank() {
            let n = self.inner.moduli[j];
            out += (((self.coord(a, j) + self.coord(b, j)) % n) as usize) * self.inner.strides[j];
        }
        out
    }

    #[inline]
    pub fn neg_idx(&self, a: usize) -> usize {
        let mut out = 0;
        for j in 0..self.rank() {
            let n = self.inner.moduli[j];
            out += (((n - self.coord(a, j)) % n) as usize) * self.inner.strides[j];
        }
        out
    }

    #[inline]
    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for j in 0..self.rank() {
            let n = self.inner.moduli[j];
            out += (((self.coord(a, j) + n - self.coord(b, j)) % n) as usize) * self.inner.strides[j];
        }
        out
    }

    /// Componentwise ring product of `ℤ_{n_1} × … × ℤ_{n_t}`.
    pub fn mul_idx(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        for j in 0..self.rank() {
            let n = self.inner.moduli[j];
            out += (((self.coord(a, j) * self.coord(b, j)) % n) as usize) * self.inner.strides[j];
        }
        out
    }

    /// `k·a` for any integer `k`.
    pub fn scalar_idx(&self, k: i64, a: usize) -> usize {
        let mut out = 0;
        for j in 0..self.rank() {
            let n = self.inner.moduli[j] as i64;
            let c = (k.rem_euclid(n) * self.coord(a, j) as i64) % n;
            out += (c as usize) * self.inner.strides[j];
        }
        out
    }

    /// `k·a` computed by repeated addition.
    pub fn times_idx(&self, k: u64, a: usize) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.add_idx(acc, a);
        }
        acc
    }

    pub fn add(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.element(self.add_idx(i, j)))
    }

    pub fn sub(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.element(self.sub_idx(i, j)))
    }

    pub fn neg(&self, a: &GroupElem) -> Result<GroupElem> {
        Ok(self.element(self.neg_idx(self.index_of(a)?)))
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        let (i, j) = (self.index_of(a)?, self.index_of(b)?);
        Ok(self.element(self.mul_idx(i, j)))
    }

    pub fn element_order(&self, idx: usize) -> u64 {
        (0..self.rank())
            .map(|j| {
                let n = self.inner.moduli[j];
                n / n.gcd(&self.coord(idx, j))
            })
            .fold(1u64, |a, b| a.lcm(&b))
    }
}

/// A homomorphism `G → G` stored by generator images.
#[derive(Clone, Debug)]
pub struct GroupMap {
    group: FiniteAbelianGroup,
    images: Vec<usize>,
    table: OnceLock<Vec<usize>>,
    is_auto: bool,
}

impl PartialEq for GroupMap {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.images == other.images
    }
}
impl Eq for GroupMap {}

impl GroupMap {
    /// `images[j]` is the image of the j-th standard generator.
    pub fn new(group: &FiniteAbelianGroup, images: &[GroupElem]) -> Result<Self> {
        if images.len() != group.rank() {
            return invalid(format!("expected {} generator images, got {}", group.rank(), images.len()));
        }
        let idx = images.iter().map(|e| group.index_of(e)).collect::<Result<Vec<_>>>()?;
        Self::from_image_indices(group, idx)
    }

    pub fn from_image_indices(group: &FiniteAbelianGroup, images: Vec<usize>) -> Result<Self> {
        if images.len() != group.rank() {
            return invalid(format!("expected {} generator images, got {}", group.rank(), images.len()));
        }
        for (j, &x) in images.iter().enumerate() {
            if x >= group.order() {
                return invalid(format!("image index {x} out of range"));
            }
            let n = group.moduli()[j];
            if group.scalar_idx(n as i64, x) != 0 {
                return Err(Error::InvalidHom(format!(
                    "generator {j} has order dividing {n} but its image {} does not",
                    group.element(x)
                )));
            }
        }
        let mut map = Self { group: group.clone(), images, table: OnceLock::new(), is_auto: false };
        map.is_auto = (1..group.order()).all(|a| map.eval(a) != 0);
        Ok(map)
    }

    /// Builds a map from a full table, checking additivity.
    pub fn from_table(group: &FiniteAbelianGroup, table: &[usize]) -> Result<Self> {
        if table.len() != group.order() {
            return invalid("table length differs from group order");
        }
        for a in group.elements() {
            for b in group.elements() {
                if table[group.add_idx(a, b)] != group.add_idx(table[a], table[b]) {
                    return Err(Error::InvalidHom(format!(
                        "table is not additive at {} + {}",
                        group.element(a),
                        group.element(b)
                    )));
                }
            }
        }
        let images = (0..group.rank()).map(|j| table[group.generator(j)]).collect();
        Self::from_image_indices(group, images)
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        let images = (0..group.rank()).map(|j| group.generator(j)).collect();
        Self::from_image_indices(group, images).expect("identity is a homomorphism")
    }

    /// `a ↦ k·a`.
    pub fn scalar(group: &FiniteAbelianGroup, k: i64) -> Self {
        let images = (0..group.rank()).map(|j| group.scalar_idx(k, group.generator(j))).collect();
        Self::from_image_indices(group, images).expect("scalar maps are homomorphisms")
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn image_indices(&self) -> &[usize] {
        &self.images
    }

    pub fn images(&self) -> Vec<GroupElem> {
        self.images.iter().map(|&i| self.group.element(i)).collect()
    }

    pub fn is_auto(&self) -> bool {
        self.is_auto
    }

    fn eval_direct(&self, a: usize) -> usize {
        let g = &self.group;
        let mut acc = 0;
        for j in 0..g.rank() {
            let c = g.coord(a, j);
            if c != 0 {
                acc = g.add_idx(acc, g.scalar_idx(c as i64, self.images[j]));
            }
        }
        acc
    }

    /// Value table, built on first use for groups up to [`TABLE_LIMIT`].
    pub fn table(&self) -> &[usize] {
        self.table.get_or_init(|| self.group.elements().map(|a| self.eval_direct(a)).collect())
    }

    #[inline]
    pub fn eval(&self, a: usize) -> usize {
        if self.group.order() <= TABLE_LIMIT {
            self.table()[a]
        } else {
            self.eval_direct(a)
        }
    }

    pub fn apply(&self, a: &GroupElem) -> Result<GroupElem> {
        Ok(self.group.element(self.eval(self.group.index_of(a)?)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupMap) -> Result<GroupMap> {
        if self.group != other.group {
            return invalid("composing maps on different groups");
        }
        let images = other.images.iter().map(|&x| self.eval(x)).collect();
        Self::from_image_indices(&self.group, images)
    }

    pub fn pow(&self, k: u64) -> GroupMap {
        let mut acc = Self::identity(&self.group);
        for _ in 0..k {
            acc = self.compose(&acc).expect("same group");
        }
        acc
    }

    pub fn inverse(&self) -> Result<GroupMap> {
        if !self.is_auto {
            return invalid("map is not invertible");
        }
        let t = self.table();
        let mut inv = vec![0; t.len()];
        for (a, &b) in t.iter().enumerate() {
            inv[b] = a;
        }
        let images = (0..self.group.rank()).map(|j| inv[self.group.generator(j)]).collect();
        Self::from_image_indices(&self.group, images)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.group.rank()).all(|j| self.images[j] == self.group.generator(j))
    }
}

/// Orbit decomposition of an automorphism.
#[derive(Clone, Debug)]
pub struct Orbits {
    /// Orbits in order of their smallest element; each starts at that element
    /// and follows `σ`.
    pub orbits: Vec<Vec<usize>>,
    pub orbit_of: Vec<usize>,
    pub len_of: Vec<usize>,
    /// Order of the map, the lcm of the orbit lengths.
    pub order: u64,
}

impl Orbits {
    pub fn new(sigma: &GroupMap) -> Result<Self> {
        if !sigma.is_auto() {
            return invalid("orbit decomposition needs an automorphism");
        }
        let g = sigma.group();
        let n = g.order();
        let mut orbit_of = vec![usize::MAX; n];
        let mut len_of = vec![0; n];
        let mut orbits = Vec::new();
        for a in 0..n {
            if orbit_of[a] != usize::MAX {
                continue;
            }
            let orb = orbit(sigma, a);
            for &x in &orb {
                orbit_of[x] = orbits.len();
                len_of[x] = orb.len();
            }
            orbits.push(orb);
        }
        let order = orbits.iter().fold(1u64, |acc, o| acc.lcm(&(o.len() as u64)));
        Ok(Self { orbits, orbit_of, len_of, order })
    }

    /// Histogram `length ↦ number of orbits`.
    pub fn histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut h = std::collections::BTreeMap::new();
        for o in &self.orbits {
            *h.entry(o.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn same_orbit(&self, a: usize, b: usize) -> bool {
        self.orbit_of[a] == self.orbit_of[b]
    }
}

/// The σ-orbit of `a`, starting at `a`.
pub fn orbit(sigma: &GroupMap, a: usize) -> Vec<usize> {
    let mut out = vec![a];
    let mut x = sigma.eval(a);
    while x != a {
        out.push(x);
        x = sigma.eval(x);
    }
    out
}

/// Order of an automorphism as the lcm of its orbit lengths.
pub fn map_order(sigma: &GroupMap) -> Result<u64> {
    Ok(Orbits::new(sigma)?.order)
}

/// Order of a map found by iterating until the identity comes back.
pub fn map_order_by_iteration(sigma: &GroupMap) -> Result<u64> {
    if !sigma.is_auto() {
        return invalid("order of a non-invertible map");
    }
    let mut k = 1;
    let mut cur = sigma.clone();
    while !cur.is_identity() {
        cur = sigma.compose(&cur)?;
        k += 1;
    }
    Ok(k)
}

/// A subgroup given by its sorted member list.
#[derive(Clone, Debug)]
pub struct Subgroup {
    group: FiniteAbelianGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
    generators: Vec<usize>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.members == other.members
    }
}
impl Eq for Subgroup {}

fn span(group: &FiniteAbelianGroup, gens: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; group.order()];
    mask[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = group.add_idx(x, g);
            if !mask[y] {
                mask[y] = true;
                queue.push_back(y);
            }
        }
    }
    mask
}

impl Subgroup {
    pub fn generated_by(group: &FiniteAbelianGroup, gens: &[usize]) -> Self {
        let mask = span(group, gens);
        Self::from_mask(group, mask)
    }

    pub fn from_elems(group: &FiniteAbelianGroup, gens: &[GroupElem]) -> Result<Self> {
        let idx = gens.iter().map(|e| group.index_of(e)).collect::<Result<Vec<_>>>()?;
        Ok(Self::generated_by(group, &idx))
    }

    /// Checks closure of an explicit member list.
    pub fn from_members(group: &FiniteAbelianGroup, members: &[usize]) -> Result<Self> {
        let mut mask = vec![false; group.order()];
        for &m in members {
            if m >= group.order() {
                return invalid("member index out of range");
            }
            mask[m] = true;
        }
        if !mask[0] {
            return invalid("subset does not contain zero");
        }
        for &a in members {
            for &b in members {
                if !mask[group.sub_idx(a, b)] {
                    return invalid("subset is not closed under subtraction");
                }
            }
        }
        Ok(Self::from_mask(group, mask))
    }

    fn from_mask(group: &FiniteAbelianGroup, mask: Vec<bool>) -> Self {
        let members: Vec<usize> = (0..group.order()).filter(|&i| mask[i]).collect();
        let mut generators = Vec::new();
        let mut spanned = span(group, &[]);
        for &m in &members {
            if !spanned[m] {
                generators.push(m);
                spanned = span(group, &generators);
            }
        }
        Self { group: group.clone(), members, mask, generators }
    }

    pub fn whole(group: &FiniteAbelianGroup) -> Self {
        Self::from_mask(group, vec![true; group.order()])
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.group.order() / self.order()
    }

    #[inline]
    pub fn contains(&self, a: usize) -> bool {
        self.mask[a]
    }

    /// Cosets sorted by their smallest element; each coset is sorted.
    pub fn cosets(&self) -> Vec<Vec<usize>> {
        let g = &self.group;
        let mut seen = vec![false; g.order()];
        let mut out = Vec::new();
        for a in g.elements() {
            if seen[a] {
                continue;
            }
            let mut c: Vec<usize> = self.members.iter().map(|&h| g.add_idx(a, h)).collect();
            c.sort_unstable();
            for &x in &c {
                seen[x] = true;
            }
            out.push(c);
        }
        out
    }
}

/// `G_σ = {a : σ(a) = a}`.
pub fn fixed_subgroup(sigma: &GroupMap) -> Subgroup {
    let g = sigma.group();
    let mask: Vec<bool> = g.elements().map(|a| sigma.eval(a) == a).collect();
    Subgroup::from_mask(g, mask)
}

/// A quotient `G/H` in invariant-factor form with its projection table.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    pub projection: Vec<usize>,
}

impl Quotient {
    /// Smallest preimage of every quotient element.
    pub fn lifts(&self) -> Vec<usize> {
        let mut lift = vec![usize::MAX; self.group.order()];
        for (a, &q) in self.projection.iter().enumerate() {
            if lift[q] == usize::MAX {
                lift[q] = a;
            }
        }
        lift
    }

    /// The map induced on the quotient by `f`, which must preserve the kernel.
    pub fn induced_map(&self, f: &GroupMap) -> Result<GroupMap> {
        let lift = self.lifts();
        let q = &self.group;
        let images = (0..q.rank()).map(|j| self.projection[f.eval(lift[q.generator(j)])]).collect();
        let fbar = GroupMap::from_image_indices(q, images)?;
        for a in f.group().elements() {
            if self.projection[f.eval(a)] != fbar.eval(self.projection[a]) {
                return invalid("map does not descend to the quotient");
            }
        }
        Ok(fbar)
    }
}

/// `G/H` via the Smith normal form of the relation lattice.
pub fn quotient(sub: &Subgroup) -> Result<Quotient> {
    let g = sub.group();
    let t = g.rank();
    let mut rel: Vec<Vec<i128>> = Vec::new();
    for j in 0..t {
        let mut row = vec![0i128; t];
        row[j] = g.moduli()[j] as i128;
        rel.push(row);
    }
    for &h in sub.generators() {
        rel.push(g.coords(h).into_iter().map(|c| c as i128).collect());
    }
    let (diag, v) = smith_normal_form(&rel);
    let kept: Vec<usize> = (0..t).filter(|&i| diag[i] != 1).collect();
    let moduli: Vec<u64> = if kept.is_empty() { vec![1] } else { kept.iter().map(|&i| diag[i] as u64).collect() };
    let q = FiniteAbelianGroup::new(&moduli)?;
    let projection = g
        .elements()
        .map(|a| {
            let x = g.coords(a);
            let coords: Vec<u64> = if kept.is_empty() {
                vec![0]
            } else {
                kept.iter()
                    .map(|&i| {
                        let s: i128 = (0..t).map(|k| x[k] as i128 * v[k][i]).sum();
                        s.rem_euclid(diag[i]) as u64
                    })
                    .collect()
            };
            q.index(&coords)
        })
        .collect::<Vec<_>>();
    if q.order() * sub.order() != g.order() {
        return Err(Error::InternalInconsistency("quotient order mismatch".into()));
    }
    Ok(Quotient { group: q, projection })
}

/// The pairing `⟨m, r⟩ = Σ_j (n/n_j) m_j r_j mod n` with `n = |G|`.
pub fn pairing(group: &FiniteAbelianGroup, m: usize, r: usize) -> u64 {
    let n = group.order() as u64;
    (0..group.rank())
        .map(|j| (n / group.moduli()[j]) * ((group.coord(m, j) * group.coord(r, j)) % group.moduli()[j]))
        .sum::<u64>()
        % n
}

/// The automorphism `ψ` with `⟨ψ(m), φ(r)⟩ = ⟨m, r⟩` for all `m, r`.
///
/// For an automorphism `θ` of `𝒢` acting on group-likes, the induced action on
/// the orthogonal idempotents is `e_m ↦ e_{ψ(m)}`.
pub fn dual_inverse(phi: &GroupMap) -> Result<GroupMap> {
    if !phi.is_auto() {
        return invalid("dual inverse needs an automorphism");
    }
    let g = phi.group();
    let gens: Vec<usize> = (0..g.rank()).map(|j| g.generator(j)).collect();
    let mut images = Vec::with_capacity(g.rank());
    for &m in &gens {
        let x = g
            .elements()
            .find(|&x| gens.iter().all(|&r| pairing(g, x, phi.eval(r)) == pairing(g, m, r)))
            .ok_or_else(|| Error::InternalInconsistency("pairing is degenerate".into()))?;
        images.push(x);
    }
    GroupMap::from_image_indices(g, images)
}
