//! `group-report` and `enumerate`.

use biprod::abelian_group::{fixed_subgroup, FiniteAbelianGroup, GroupMap, Orbits};
use biprod::config::{InstanceConfig, Library};
use biprod::perm_search::{
    aut_sigma_elements, containment_chain, enumerate as run_enumeration, gamma_witnesses, ContainmentChain, PermGroupReport,
    SigmaContext, Strategy, Target,
};
use serde_json::{json, Value};

use crate::{Failure, Outcome, Rendered, RunConfig, VERSION};

/// One instance or a list of them.
pub fn instances(cfg: &RunConfig) -> Outcome<Vec<InstanceConfig>> {
    let parse = |v: &Value| -> Outcome<InstanceConfig> {
        serde_json::from_value(v.clone()).map_err(|e| Failure::Config(format!("instance descriptor: {e}")))
    };
    match &cfg.input {
        Value::Null => Err(Failure::Config("--input is required".into())),
        Value::Array(items) if items.is_empty() => Err(Failure::Config("empty instance list".into())),
        Value::Array(items) => items.iter().map(parse).collect(),
        v => Ok(vec![parse(v)?]),
    }
}

pub fn coords(g: &FiniteAbelianGroup, a: usize) -> Value {
    json!(g.coords(a))
}

pub fn sigma_images(sigma: &GroupMap) -> Value {
    let g = sigma.group();
    Value::Array((0..g.rank()).map(|j| coords(g, sigma.eval(g.generator(j)))).collect())
}

pub fn group_label(g: &FiniteAbelianGroup) -> String {
    g.moduli().iter().map(|n| format!("Z{n}")).collect::<Vec<_>>().join(" x ")
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

/// Adds the version and resolved config. A single-object input yields a
/// flat report, a list yields `instances`.
fn envelope(cfg: &RunConfig, mut reports: Vec<Value>) -> Value {
    if cfg.input.is_object() && reports.len() == 1 {
        if let Value::Object(mut m) = reports.remove(0) {
            m.insert("version".into(), json!(VERSION));
            m.insert("config".into(), json!(cfg));
            return Value::Object(m);
        }
    }
    json!({
        "version": VERSION,
        "config": cfg,
        "instances": reports,
    })
}

pub fn group_report(cfg: &RunConfig) -> Outcome<Rendered> {
    let lib = Library::bundled()?;
    let mut reports = Vec::new();
    let mut tsv = String::from("name\tgroup\tsigma\torder\tsigma_order\torbit_histogram\tfixed_order\n");
    for inst in instances(cfg)? {
        let (g, sigma) = inst.build(&lib)?;
        let orbits = Orbits::new(&sigma)?;
        let fixed = fixed_subgroup(&sigma);
        let hist: serde_json::Map<String, Value> = orbits.histogram().into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        let r = json!({
            "name": inst.label(),
            "group": g.moduli(),
            "label": group_label(&g),
            "order": g.order(),
            "exponent": g.exponent(),
            "sigma": sigma_images(&sigma),
            "sigma_order": orbits.order,
            "orbit_histogram": hist,
            "orbits": orbits.orbits.iter().map(|o| o.iter().map(|&a| coords(&g, a)).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "fixed_subgroup": {
                "order": fixed.order(),
                "generators": fixed.generators().iter().map(|&a| coords(&g, a)).collect::<Vec<_>>(),
                "members": fixed.members().iter().map(|&a| coords(&g, a)).collect::<Vec<_>>(),
            },
            "cosets": fixed.cosets().iter().map(|c| c.iter().map(|&a| coords(&g, a)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            inst.label(),
            group_label(&g),
            compact(&r["sigma"]),
            g.order(),
            orbits.order,
            compact(&r["orbit_histogram"]),
            fixed.order()
        ));
        reports.push(r);
    }
    Ok(Rendered { json: envelope(cfg, reports), tsv, passed: true })
}

fn chain_verdict(c: &ContainmentChain) -> String {
    if !c.holds() {
        return "broken".into();
    }
    let rel = |a: usize, b: usize| if a == b { "=" } else { "<" };
    format!("Aut{}Gamma{}Sym", rel(c.aut_order, c.gamma_order), rel(c.gamma_order, c.sym_order))
}

pub fn enumerate(cfg: &RunConfig, target: Target) -> Outcome<Rendered> {
    let lib = Library::bundled()?;
    let strategy = cfg.strategy.unwrap_or(Strategy::Constrained);
    let cap = cfg.cap();
    let mut reports = Vec::new();
    let mut passed = true;
    let mut tsv = String::from("name\tgroup\tsigma\taut_sigma\tgamma\tsym_sigma\tchain\n");
    for inst in instances(cfg)? {
        let (g, sigma) = inst.build(&lib)?;
        let ctx = SigmaContext::new(&sigma)?;
        let aut = aut_sigma_elements(&ctx)?;
        let elems = run_enumeration(&ctx, target, strategy, cap)?;
        let report = PermGroupReport::new(&g, elems, Some(&aut))?;
        let witnesses: Vec<Value> = if target == Target::Gamma {
            gamma_witnesses(&ctx, strategy, cap, 1)?
                .into_iter()
                .map(|w| json!({ "tau": w.tau, "alpha": w.alpha.repr() }))
                .collect()
        } else {
            Vec::new()
        };
        let chain = containment_chain(&ctx, strategy, cap)?;
        passed &= chain.holds();
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            inst.label(),
            group_label(&g),
            compact(&sigma_images(&sigma)),
            chain.aut_order,
            chain.gamma_order,
            chain.sym_order,
            chain_verdict(&chain)
        ));
        reports.push(json!({
            "name": inst.label(),
            "group": g.moduli(),
            "sigma": sigma_images(&sigma),
            "target": target.name(),
            "strategy": strategy,
            "order": report.order,
            "label": report.label,
            "is_closed": report.is_closed,
            "abelian": report.abelian,
            "contains_aut_sigma": report.contains_aut_sigma,
            "additive": report.additive,
            "generators": report.generators,
            "elements": report.elements,
            "witnesses": witnesses,
            "chain": {
                "aut_sigma": chain.aut_order,
                "gamma": chain.gamma_order,
                "sym_sigma": chain.sym_order,
                "aut_in_gamma": chain.aut_in_gamma,
                "gamma_in_sym": chain.gamma_in_sym,
                "verdict": chain_verdict(&chain),
            },
        }));
    }
    Ok(Rendered { json: envelope(cfg, reports), tsv, passed })
}
