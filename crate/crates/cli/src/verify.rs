//! Theorem suites run by `verify`.

use biprod::abelian_group::{FiniteAbelianGroup, GroupMap};
use biprod::config::{map_from_images, Library};
use biprod::constructions::theorems::{
    abelian_groups_of_order, check_involution, check_only_fixed_zero, check_orbit_lengths, check_reduction,
    check_reduction_conclusions, check_sigma_nofix, check_sym_equality, involutions, NoFixHypotheses,
};
use biprod::constructions::{build_local_ring, build_main_example, group_main_chain, LocalRingKind, LocalRingReport};
use biprod::hopf_biproduct::{Biproduct, IdempotentBasis, LinMap};
use biprod::perm_search::{all_automorphisms, enumerate, gamma_witnesses, BruteCap, SigmaContext, Strategy, Target};
use serde_json::{json, Value};

use crate::commands::{group_label, sigma_images};
use crate::{Failure, Outcome, Rendered, RunConfig, VERSION};

pub const THEOREMS: [&str; 12] = [
    "two-ffs",
    "sigma-nofix",
    "involution",
    "reduction",
    "main-examples",
    "group-main",
    "sym-equality",
    "hopf-axioms",
    "factorization-laws",
    "kernel-nu",
    "phi-not",
    "all",
];

struct Check {
    instance: String,
    passed: bool,
    skipped: bool,
    details: Value,
}

impl Check {
    fn new(instance: impl Into<String>, passed: bool, details: Value) -> Self {
        Self { instance: instance.into(), passed, skipped: false, details }
    }

    fn skip(instance: impl Into<String>, reason: &str) -> Self {
        Self { instance: instance.into(), passed: true, skipped: true, details: json!({ "reason": reason }) }
    }

    fn json(&self) -> Value {
        json!({ "instance": self.instance, "passed": self.passed, "skipped": self.skipped, "details": self.details })
    }
}

fn library(cfg: &RunConfig) -> Outcome<Library> {
    match &cfg.input {
        Value::Null => Ok(Library::bundled()?),
        v => serde_json::from_value(v.clone()).map_err(|e| Failure::Config(format!("instance library: {e}"))),
    }
}

fn brute_allowed(cap: BruteCap, n: usize) -> bool {
    cap.check(n).is_ok()
}

pub fn run(cfg: &RunConfig) -> Outcome<Rendered> {
    let lib = library(cfg)?;
    let theorem = cfg.theorem.as_deref().unwrap_or("all");
    let names: Vec<&str> = if theorem == "all" { THEOREMS[..THEOREMS.len() - 1].to_vec() } else { vec![theorem] };
    let mut suites = Vec::new();
    let mut tsv = String::from("theorem\tinstance\tpassed\tskipped\tdetails\n");
    let mut passed = true;
    for name in names {
        let checks = run_one(name, &lib, cfg.cap())?;
        let ok = checks.iter().all(|c| c.passed);
        passed &= ok;
        for c in &checks {
            tsv.push_str(&format!(
                "{name}\t{}\t{}\t{}\t{}\n",
                c.instance,
                c.passed,
                c.skipped,
                serde_json::to_string(&c.details).unwrap_or_default()
            ));
        }
        suites.push(json!({
            "theorem": name,
            "passed": ok,
            "checked": checks.iter().filter(|c| !c.skipped).count(),
            "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
        }));
    }
    let json = json!({ "version": VERSION, "config": cfg, "passed": passed, "suites": suites });
    Ok(Rendered { json, tsv, passed })
}

fn run_one(name: &str, lib: &Library, cap: BruteCap) -> Outcome<Vec<Check>> {
    match name {
        "two-ffs" => two_ffs(lib, cap),
        "sigma-nofix" => sigma_nofix(lib),
        "involution" => involution(lib, cap),
        "reduction" => reduction(lib, cap),
        "main-examples" => main_examples(lib, cap),
        "group-main" => group_main(lib),
        "sym-equality" => sym_equality(lib, cap),
        "hopf-axioms" => hopf_axioms(lib),
        "factorization-laws" => factorization_laws(lib),
        "kernel-nu" => kernel_nu(lib),
        "phi-not" => phi_not(lib),
        other => Err(Failure::Config(format!("unknown theorem {other}"))),
    }
}

fn a_prime(lib: &Library) -> Outcome<Biproduct> {
    Ok(Biproduct::build(lib.hopf_spec(&lib.hopf.a_prime)?)?)
}

fn full(lib: &Library) -> Outcome<Biproduct> {
    Ok(Biproduct::build(lib.hopf.full.build()?)?)
}

fn describe(a: &Biproduct) -> String {
    format!("k[{}] x k[{}]", group_label(a.gcal()), group_label(a.big_g()))
}

fn two_ffs(lib: &Library, cap: BruteCap) -> Outcome<Vec<Check>> {
    let a = a_prime(lib)?;
    let all = a.enumerate_aut_hopf_a_prime()?;
    let ctx = SigmaContext::new(&a.sigma)?;
    let ws = gamma_witnesses(&ctx, Strategy::Constrained, cap, 1)?;
    let mut mismatch: Option<Value> = None;
    for f in &all {
        let (tau, alpha) = a.pair_from_automorphism(f)?;
        let found = ws.iter().any(|w| w.tau == tau && w.alpha == alpha);
        if !found || a.automorphism_from_pair(&tau, &alpha)? != *f {
            mismatch.get_or_insert(json!({ "tau": tau, "alpha": alpha.repr() }));
        }
    }
    for w in &ws {
        if !all.contains(&a.automorphism_from_pair(&w.tau, &w.alpha)?) {
            mismatch.get_or_insert(json!({ "tau": w.tau, "alpha": w.alpha.repr() }));
        }
    }
    let brute = if brute_allowed(cap, ctx.n()) {
        Some(enumerate(&ctx, Target::Gamma, Strategy::Brute, cap)?.len())
    } else {
        None
    };
    let passed = all.len() == ws.len() && mismatch.is_none() && brute.map_or(true, |b| b == all.len());
    Ok(vec![Check::new(
        describe(&a),
        passed,
        json!({
            "aut_hopf": all.len(),
            "gamma": ws.len(),
            "gamma_brute": brute,
            "conductor": a.conductor(),
            "first_mismatch": mismatch,
        }),
    )])
}

fn sigma_nofix(lib: &Library) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    for inst in lib.tagged("nofix") {
        let (_, sigma) = inst.build(lib)?;
        let hyp = NoFixHypotheses::of(&sigma)?;
        if !hyp.any() {
            out.push(Check::skip(inst.label(), "none of the hypotheses (a), (b), (c) holds"));
            continue;
        }
        let r = check_sigma_nofix(&sigma)?;
        let ctx = SigmaContext::new(&sigma)?;
        let (witnessed, additive) = check_only_fixed_zero(&ctx)?;
        let lengths = check_orbit_lengths(&ctx)?;
        out.push(Check::new(
            inst.label(),
            r.equal && additive && lengths,
            json!({
                "hypotheses": r.hypotheses,
                "aut_sigma": r.aut_order,
                "gamma": r.gamma_order,
                "equal": r.equal,
                "kernel_fixed_zero_witnesses": witnessed,
                "kernel_fixed_zero_additive": additive,
                "orbit_lengths": lengths,
            }),
        ));
    }
    Ok(out)
}

fn involution(lib: &Library, cap: BruteCap) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    for moduli in &lib.involution_groups {
        let g = FiniteAbelianGroup::new(moduli)?;
        for sigma in involutions(&g)? {
            let r = check_involution(&sigma, cap)?;
            out.push(Check::new(
                format!("{} {}", group_label(&g), sigma_images(&sigma)),
                r.equal,
                json!({ "aut_sigma": r.aut_order, "sym_sigma": r.sym_order }),
            ));
        }
    }
    Ok(out)
}

fn reduction(lib: &Library, cap: BruteCap) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    for (tag, coprime) in [("reduction", true), ("reduction-conclusions", false)] {
        for inst in lib.tagged(tag) {
            let (_, sigma) = inst.build(lib)?;
            let r = if coprime {
                check_reduction(&sigma, Strategy::Constrained, cap)?
            } else {
                check_reduction_conclusions(&sigma, Strategy::Constrained, cap)?
            };
            out.push(Check::new(inst.label(), r.holds(), json!({ "coprime_checked": coprime, "report": r })));
        }
    }
    Ok(out)
}

/// `σ(a) = ua` on the additive group of the local ring.
fn local_ring_sigma(r: &LocalRingReport) -> Outcome<GroupMap> {
    let g = FiniteAbelianGroup::new(&r.moduli)?;
    let u: Vec<i64> = r.u.iter().map(|&x| x as i64).collect();
    let images = match r.kind {
        LocalRingKind::Zp2 => vec![u],
        LocalRingKind::Fpx2 => vec![u.clone(), vec![0, u[0]]],
    };
    Ok(map_from_images(&g, &images)?)
}

fn main_examples(lib: &Library, cap: BruteCap) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    for m in &lib.main_examples {
        let spec = m.build()?;
        let ex = build_main_example(&spec)?;
        let c = &ex.certificate;
        let ctx = SigmaContext::new(&ex.sigma)?;
        let brute = if brute_allowed(cap, ctx.n()) {
            Some(enumerate(&ctx, Target::Gamma, Strategy::Brute, cap)?.len())
        } else {
            None
        };
        let passed = c.pair_valid && !c.tau_additive && c.strict && brute.map_or(true, |b| b > c.aut_sigma_order);
        out.push(Check::new(
            m.name.clone(),
            passed,
            json!({
                "sigma": sigma_images(&ex.sigma),
                "tau": ex.tau,
                "alpha": ex.alpha.repr(),
                "certificate": c,
                "gamma_brute": brute,
            }),
        ));
    }
    for lr in &lib.local_rings {
        let r = build_local_ring(&lr.spec())?;
        let sigma = local_ring_sigma(&r)?;
        let ctx = SigmaContext::new(&sigma)?;
        let brute = if brute_allowed(cap, ctx.n()) {
            Some(enumerate(&ctx, Target::SymMinus, Strategy::Brute, cap)?.len())
        } else {
            None
        };
        let passed = r.holds() && brute.map_or(true, |b| b == r.sym_sigma_order);
        out.push(Check::new(
            format!("{:?} p={}", r.kind, r.p).to_lowercase(),
            passed,
            json!({ "report": r, "sym_brute": brute }),
        ));
    }
    Ok(out)
}

fn group_main(lib: &Library) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    for gm in &lib.group_main {
        let chain = group_main_chain(&gm.build(lib)?)?;
        out.push(Check::new(gm.name.clone(), chain.holds(), json!(chain)));
    }
    Ok(out)
}

fn sym_equality(lib: &Library, cap: BruteCap) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    let strategy_for = |n: usize| if brute_allowed(cap, n) { Strategy::Brute } else { Strategy::Constrained };
    for inst in &lib.instances {
        let (g, sigma) = inst.build(lib)?;
        let s = strategy_for(g.order());
        let r = check_sym_equality(&sigma, s, cap)?;
        out.push(Check::new(inst.label(), r.equal, json!({ "strategy": s, "report": r })));
    }
    // Every automorphism of every group small enough to scan.
    let mut n = 1;
    while brute_allowed(cap, n as usize) && n <= 8 {
        for moduli in abelian_groups_of_order(n) {
            let g = FiniteAbelianGroup::new(&moduli)?;
            let autos = all_automorphisms(&g)?;
            let mut first_failure = None;
            for sigma in &autos {
                let r = check_sym_equality(sigma, Strategy::Brute, cap)?;
                if !r.equal && first_failure.is_none() {
                    first_failure = Some(sigma_images(sigma));
                }
            }
            out.push(Check::new(
                format!("{} (all σ)", group_label(&g)),
                first_failure.is_none(),
                json!({ "automorphisms": autos.len(), "first_failure": first_failure }),
            ));
        }
        n += 1;
    }
    Ok(out)
}

fn hopf_axioms(lib: &Library) -> Outcome<Vec<Check>> {
    let mut out = Vec::new();
    for a in [a_prime(lib)?, full(lib)?] {
        let mut report = a.verify_bialgebra();
        report.checks.extend(a.verify_structure_maps()?.checks);
        let idem = IdempotentBasis::new(a.gcal(), &a.field)?.verify();
        report.checks.extend(idem.checks.checks);
        let failures: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        out.push(Check::new(
            describe(&a),
            report.all_pass(),
            json!({
                "conductor": a.conductor(),
                "dimension": a.dim(),
                "flags": a.flags,
                "checks": report.checks.len(),
                "failures": failures,
            }),
        ));
    }
    Ok(out)
}

fn factorization_laws(lib: &Library) -> Outcome<Vec<Check>> {
    let a = a_prime(lib)?;
    let all = a.enumerate_aut_hopf_a_prime()?;
    let factors = all.iter().map(|f| a.factorize(f)).collect::<biprod::Result<Vec<_>>>()?;
    let unit = a.eta_epsilon();
    let mut failure: Option<Value> = None;
    for (i, f) in all.iter().enumerate() {
        let fi = &factors[i];
        let jr = a.convolution_inverse_fr(&fi.fr);
        if a.convolve(&fi.fr, &jr) != unit || a.convolve(&jr, &fi.fr) != unit {
            failure.get_or_insert(json!({ "law": "J_R is a two-sided convolution inverse of F_R", "f": i }));
        }
        if !a.rtrivial_equivalences(f)?.agree() {
            failure.get_or_insert(json!({ "law": "R-trivial conditions agree", "f": i }));
        }
        for (j, g) in all.iter().enumerate() {
            let gj = &factors[j];
            let fg = a.factorize(&f.compose(g)?)?;
            if fg.fl != fi.fl.compose(&gj.fl)? {
                failure.get_or_insert(json!({ "law": "(FG)_L = F_L G_L", "f": i, "g": j }));
            }
            if fg.fr != a.convolve(&fi.fl.compose(&gj.fr)?, &fi.fr) {
                failure.get_or_insert(json!({ "law": "(FG)_R = (F_L G_R) * F_R", "f": i, "g": j }));
            }
        }
    }
    Ok(vec![Check::new(
        describe(&a),
        failure.is_none(),
        json!({ "automorphisms": all.len(), "pairs": all.len() * all.len(), "first_failure": failure }),
    )])
}

fn kernel_nu(lib: &Library) -> Outcome<Vec<Check>> {
    let a = a_prime(lib)?;
    let ker = a.kernel_nu_elements()?;
    let id = LinMap::identity(&a.field, a.gcal().order());
    let mut via_aut = Vec::new();
    for f in a.enumerate_aut_hopf_a_prime()? {
        let fac = a.factorize(&f)?;
        if fac.fl == id {
            via_aut.push(fac.fr);
        }
    }
    let same = ker.len() == via_aut.len() && ker.iter().all(|g| via_aut.contains(g));
    let group = a.is_convolution_group(&ker);
    let mut out = vec![Check::new(
        describe(&a),
        same && group,
        json!({ "kernel": ker.len(), "from_automorphisms": via_aut.len(), "equal": same, "convolution_group": group }),
    )];
    let b = full(lib)?;
    let kb = b.kernel_nu_elements()?;
    let group = b.is_convolution_group(&kb);
    out.push(Check::new(describe(&b), group, json!({ "kernel": kb.len(), "convolution_group": group })));
    Ok(out)
}

fn phi_not(lib: &Library) -> Outcome<Vec<Check>> {
    let biprod::config::HopfConfig::Named { a_prime_of } = &lib.hopf.a_prime else {
        return Err(Failure::Config("phi-not needs the A' section to name a main example".into()));
    };
    let spec = lib.main_example(a_prime_of)?.build()?;
    let ex = build_main_example(&spec)?;
    let a = a_prime(lib)?;
    let f = a.automorphism_from_pair(&ex.tau, &ex.alpha)?;
    let hopf = a.is_hopf_endo_fixing_pi(&f)?;
    let fl_coalgebra = a.fl_coalgebra_test(&f)?;
    let fac = a.factorize(&f)?;
    let yd = a.yd_membership_test(&fac.fl)?;
    Ok(vec![Check::new(
        a_prime_of.clone(),
        hopf.holds() && !fl_coalgebra,
        json!({
            "tau": ex.tau,
            "alpha": ex.alpha.repr(),
            "hopf_endo_fixing_pi": hopf,
            "fl_coalgebra": fl_coalgebra,
            "fl_in_yd_category": yd,
        }),
    )])
}
