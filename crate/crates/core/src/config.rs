//! JSON descriptors for groups, automorphisms, example families and
//! biproducts, plus the bundled instance library.

use serde::{Deserialize, Serialize};

use crate::abelian_group::{FiniteAbelianGroup, GroupMap};
use crate::constructions::{LocalRingKind, LocalRingSpec, MainExampleSpec};
use crate::error::{Error, Result};
use crate::hopf_biproduct::BiproductSpec;

const LIBRARY: &str = include_str!("../data/examples.json");

/// Images of the standard generators, one coordinate vector per generator.
pub type Images = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    pub moduli: Vec<u64>,
}

impl GroupConfig {
    pub fn build(&self) -> Result<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(&self.moduli)
    }
}

/// An automorphism given by generator images or by a named main example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SigmaConfig {
    Images(Images),
    Named { main_example: String },
}

/// `(G, σ)`; `σ` defaults to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub moduli: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tags: Vec<String>,
}

pub fn map_from_images(g: &FiniteAbelianGroup, images: &Images) -> Result<GroupMap> {
    let elems = images.iter().map(|c| g.elem(c)).collect::<Result<Vec<_>>>()?;
    GroupMap::new(g, &elems)
}

impl InstanceConfig {
    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("{:?}", self.moduli))
    }

    pub fn has_tag(&self, t: &str) -> bool {
        self.tags.iter().any(|x| x == t)
    }

    pub fn build(&self, lib: &Library) -> Result<(FiniteAbelianGroup, GroupMap)> {
        let g = FiniteAbelianGroup::new(&self.moduli)?;
        let sigma = match &self.sigma {
            None => GroupMap::identity(&g),
            Some(SigmaConfig::Images(im)) => map_from_images(&g, im)?,
            Some(SigmaConfig::Named { main_example }) => {
                let spec = lib.main_example(main_example)?.build()?;
                let sigma = spec.sigma()?;
                if sigma.group() != &g {
                    return Err(Error::InvalidInput(format!(
                        "main example {main_example} lives on {:?}, not {:?}",
                        sigma.group().moduli(),
                        self.moduli
                    )));
                }
                sigma
            }
        };
        if !sigma.is_auto() {
            return Err(Error::InvalidInput("σ is not an automorphism".into()));
        }
        Ok((g, sigma))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MainExampleConfig {
    pub name: String,
    pub p: u64,
    pub moduli: Vec<u64>,
    /// Generators of `G₀`.
    pub g0: Images,
    pub s: Vec<i64>,
    pub m: Vec<i64>,
    pub n: Vec<i64>,
    /// `τ₀` on the listed generators of `G₀`, in order.
    pub tau0: Images,
}

impl MainExampleConfig {
    pub fn build(&self) -> Result<MainExampleSpec> {
        self.build_with(None, None, true)
    }

    /// The Sym⁻ family hypotheses, optionally replacing `τ₀` and `n`.
    pub fn build_group_main(&self, tau0: Option<&Images>, n: Option<&Vec<i64>>) -> Result<MainExampleSpec> {
        self.build_with(tau0, n, false)
    }

    fn build_with(&self, tau0: Option<&Images>, n: Option<&Vec<i64>>, strict: bool) -> Result<MainExampleSpec> {
        let g = FiniteAbelianGroup::new(&self.moduli)?;
        let idx = |c: &Vec<i64>| -> Result<usize> { g.index_of(&g.elem(c)?) };
        let g0 = self.g0.iter().map(idx).collect::<Result<Vec<_>>>()?;
        let t0 = tau0.unwrap_or(&self.tau0).iter().map(idx).collect::<Result<Vec<_>>>()?;
        let n = idx(n.unwrap_or(&self.n))?;
        let (s, m) = (idx(&self.s)?, idx(&self.m)?);
        if strict {
            MainExampleSpec::new(self.p, &g, &g0, s, m, n, &t0)
        } else {
            MainExampleSpec::for_group_main(self.p, &g, &g0, s, m, n, &t0)
        }
    }
}

/// One `τ` of the Sym⁻ family: a named example, optional `τ₀`/`n`
/// replacements and `ℓ_{2,1}, …, ℓ_{p−1,1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupMainCase {
    pub example: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0: Option<Images>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<i64>>,
    pub ells: Vec<u64>,
}

/// Cases sharing one `σ`, checked together as a chain certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupMainConfig {
    pub name: String,
    pub cases: Vec<GroupMainCase>,
}

impl GroupMainConfig {
    pub fn build(&self, lib: &Library) -> Result<Vec<(MainExampleSpec, Vec<u64>)>> {
        self.cases
            .iter()
            .map(|c| Ok((lib.main_example(&c.example)?.build_group_main(c.tau0.as_ref(), c.n.as_ref())?, c.ells.clone())))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalRingConfig {
    pub kind: LocalRingKind,
    pub p: u64,
}

impl LocalRingConfig {
    pub fn spec(&self) -> LocalRingSpec {
        LocalRingSpec { kind: self.kind, p: self.p }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImagesConfig {
    pub images: Images,
}

/// A biproduct `k[𝒢] × k[G]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiproductConfig {
    pub gcal: GroupConfig,
    pub theta: ImagesConfig,
    #[serde(rename = "bigG")]
    pub big_g: GroupConfig,
    pub action: Vec<ImagesConfig>,
    pub u_generator: Vec<i64>,
}

impl BiproductConfig {
    pub fn build(&self) -> Result<BiproductSpec> {
        let gc = self.gcal.build()?;
        let gg = self.big_g.build()?;
        let theta = map_from_images(&gc, &self.theta.images)?;
        let action = self.action.iter().map(|a| map_from_images(&gc, &a.images)).collect::<Result<Vec<_>>>()?;
        let u = gg.index_of(&gg.elem(&self.u_generator)?)?;
        Ok(BiproductSpec { gcal: gc, theta, big_g: gg, action, u })
    }
}

/// `A'` from a named main example (`θ` dual to its `σ`) or a full biproduct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HopfConfig {
    Named { a_prime_of: String },
    Full(BiproductConfig),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSection {
    pub a_prime: HopfConfig,
    pub full: BiproductConfig,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Library {
    pub instances: Vec<InstanceConfig>,
    pub involution_groups: Vec<Vec<u64>>,
    pub main_examples: Vec<MainExampleConfig>,
    pub group_main: Vec<GroupMainConfig>,
    pub local_rings: Vec<LocalRingConfig>,
    pub hopf: HopfSection,
}

impl Library {
    pub fn bundled() -> Result<Self> {
        Self::from_json(LIBRARY)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("instance library: {e}")))
    }

    pub fn main_example(&self, name: &str) -> Result<&MainExampleConfig> {
        self.main_examples
            .iter()
            .find(|m| m.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("no main example named {name}")))
    }

    pub fn tagged<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a InstanceConfig> + 'a {
        self.instances.iter().filter(move |i| i.has_tag(tag))
    }

    pub fn hopf_spec(&self, cfg: &HopfConfig) -> Result<BiproductSpec> {
        match cfg {
            HopfConfig::Named { a_prime_of } => {
                let sigma = self.main_example(a_prime_of)?.build()?.sigma()?;
                BiproductSpec::a_prime(&crate::abelian_group::dual_inverse(&sigma)?)
            }
            HopfConfig::Full(b) => b.build(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_library_parses() {
        let lib = Library::bundled().unwrap();
        for inst in &lib.instances {
            inst.build(&lib).unwrap();
        }
        for m in &lib.main_examples {
            m.build().unwrap();
        }
        assert!(lib.tagged("nofix").count() >= 5);
        lib.hopf_spec(&lib.hopf.a_prime).unwrap();
        lib.hopf.full.build().unwrap();
        for gm in &lib.group_main {
            gm.build(&lib).unwrap();
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = r#"{"moduli":[3],"sigma":[[2]],"colour":1}"#;
        assert!(serde_json::from_str::<InstanceConfig>(bad).is_err());
        let ok = r#"{"moduli":[3],"sigma":[[2]]}"#;
        assert!(serde_json::from_str::<InstanceConfig>(ok).is_ok());
    }
}
