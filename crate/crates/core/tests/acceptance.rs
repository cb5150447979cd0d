//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Built with `harness = false`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use biprod::abelian_group::{FiniteAbelianGroup, GroupMap};
use biprod::config::{HopfConfig, Library};
use biprod::constructions::theorems::{
    abelian_groups_of_order, check_involution, check_oracle, check_sigma_nofix, check_sym_equality, involutions, NoFixHypotheses,
};
use biprod::constructions::{build_local_ring, build_main_example, group_main_chain, LocalRingKind, LocalRingSpec};
use biprod::hopf_biproduct::{Biproduct, IdempotentBasis, LinMap};
use biprod::perm_search::{
    all_automorphisms, aut_sigma_elements, enumerate, gamma_witnesses, nu_fiber, validate, BruteCap, Perm, SigmaContext,
    Strategy, Target,
};
use biprod::{Error, Result};

type Verdict = Result<(bool, String)>;

fn fail(msg: String) -> Verdict {
    Ok((false, msg))
}

fn sorted(v: Vec<Perm>) -> Vec<Perm> {
    let s: BTreeSet<Perm> = v.into_iter().collect();
    s.into_iter().collect()
}

fn local_ring_sigma(kind: LocalRingKind, moduli: &[u64], u: &[u64]) -> Result<GroupMap> {
    let g = FiniteAbelianGroup::new(moduli)?;
    let table: Vec<usize> = g
        .elements()
        .map(|a| match kind {
            LocalRingKind::Zp2 => (u[0] as usize * a) % g.order(),
            LocalRingKind::Fpx2 => {
                let p = moduli[0];
                let (a0, a1) = (g.coord(a, 0), g.coord(a, 1));
                g.index(&[(u[0] * a0) % p, (u[0] * a1 + u[1] * a0) % p])
            }
        })
        .collect();
    GroupMap::from_table(&g, &table)
}

/// Local ring orders, with brute-force `Sym_σ` at every size.
fn criterion_1() -> Verdict {
    let mut rows = Vec::new();
    for p in [2u64, 3] {
        for kind in [LocalRingKind::Zp2, LocalRingKind::Fpx2] {
            let r = build_local_ring(&LocalRingSpec { kind, p })?;
            let pu = p as usize;
            if r.aut_sigma_order != pu * (pu - 1) || r.sym_sigma_order != pu * (pu - 1) * (pu - 1) {
                return fail(format!("{kind:?} p={p}: |Aut_σ| = {}, |Sym_σ| = {}", r.aut_sigma_order, r.sym_sigma_order));
            }
            if r.strict != (p > 2) {
                return fail(format!("{kind:?} p={p}: strictness {}", r.strict));
            }
            let ctx = SigmaContext::new(&local_ring_sigma(kind, &r.moduli, &r.u)?)?;
            let brute = sorted(enumerate(&ctx, Target::SymMinus, Strategy::Brute, BruteCap::nine())?);
            let constrained = sorted(enumerate(&ctx, Target::SymMinus, Strategy::Constrained, BruteCap::nine())?);
            if brute != constrained || brute.len() != r.sym_sigma_order {
                return fail(format!("{kind:?} p={p}: brute Sym_σ has {} elements", brute.len()));
            }
            if aut_sigma_elements(&ctx)?.len() != r.aut_sigma_order {
                return fail(format!("{kind:?} p={p}: Aut_σ recount differs"));
            }
            rows.push(format!("{kind:?}(p={p}): {}/{}", r.aut_sigma_order, r.sym_sigma_order).to_lowercase());
        }
    }
    Ok((true, rows.join(", ")))
}

/// Main-example witnesses are valid pairs, non-additive, and strict at |G| = 8.
fn criterion_2(lib: &Library) -> Verdict {
    let mut rows = Vec::new();
    for name in ["p2-z2-z4", "p3-z3-z9", "p3-z3-z3"] {
        let spec = lib.main_example(name)?.build()?;
        let ex = build_main_example(&spec)?;
        let ctx = SigmaContext::new(&ex.sigma)?;
        if let Err(v) = validate::check_gamma_pair(&ctx, &ex.tau, &ex.alpha) {
            return fail(format!("{name}: pair rejected: {v:?}"));
        }
        if ex.tau.is_additive(&ctx.group) {
            return fail(format!("{name}: τ is additive"));
        }
        let aut = aut_sigma_elements(&ctx)?;
        if aut.contains(&ex.tau) {
            return fail(format!("{name}: τ lies in Aut_σ"));
        }
        if ctx.n() == 8 {
            let gamma = sorted(enumerate(&ctx, Target::Gamma, Strategy::Brute, BruteCap::default())?);
            if gamma.len() <= aut.len() || !aut.iter().all(|a| gamma.binary_search(a).is_ok()) {
                return fail(format!("{name}: brute Γ has {} elements, Aut_σ {}", gamma.len(), aut.len()));
            }
            rows.push(format!("{name}: |Aut_σ| {} < |Γ| {} (brute)", aut.len(), gamma.len()));
        } else {
            rows.push(format!("{name}: τ ∈ Γ \\ Aut_σ"));
        }
    }
    Ok((true, rows.join(", ")))
}

/// Three constructed τ on ℤ₃ ⊕ ℤ₉ certify Aut_σ < Γ < Sym_σ⁻.
fn criterion_3(lib: &Library) -> Verdict {
    let gm = lib.group_main.first().ok_or_else(|| Error::InvalidInput("no group_main entry".into()))?;
    let cases = gm.build(lib)?;
    if cases.len() != 3 || cases[0].0.p != 3 {
        return fail(format!("{}: expected three p = 3 cases", gm.name));
    }
    let chain = group_main_chain(&cases)?;
    let sigma = cases[0].0.sigma()?;
    let ctx = SigmaContext::new(&sigma)?;
    let aut = aut_sigma_elements(&ctx)?;
    // Recheck every membership with the validators directly.
    let mut classes = Vec::new();
    for w in &chain.witnesses {
        let in_aut = aut.contains(&w.tau);
        let in_gamma = !nu_fiber(&ctx, &w.tau)?.is_empty();
        let in_sym = validate::is_sym_minus(&ctx, &w.tau);
        if (in_aut, in_gamma, in_sym) != (w.in_aut_sigma, w.in_gamma, w.in_sym_minus) {
            return fail(format!("membership mismatch for ℓ = {:?}", w.ells));
        }
        classes.push(match (in_aut, in_gamma, in_sym) {
            (true, true, true) => "Aut",
            (false, true, true) => "Γ\\Aut",
            (false, false, true) => "Sym⁻\\Γ",
            _ => "?",
        });
    }
    if !chain.holds() || classes != ["Aut", "Γ\\Aut", "Sym⁻\\Γ"] {
        return fail(format!("classes {classes:?}"));
    }
    Ok((true, format!("{}: {}", gm.name, classes.join(", "))))
}

/// Γ = Aut_σ on every library instance meeting one of the hypotheses.
fn criterion_4(lib: &Library) -> Verdict {
    let mut checked = 0;
    for inst in lib.tagged("nofix") {
        let (_, sigma) = inst.build(lib)?;
        if !NoFixHypotheses::of(&sigma)?.any() {
            continue;
        }
        let r = check_sigma_nofix(&sigma)?;
        if !r.equal {
            return fail(format!("{}: |Aut_σ| {} vs |Γ| {}", inst.label(), r.aut_order, r.gamma_order));
        }
        checked += 1;
    }
    if checked == 0 {
        return fail("no instance satisfies the hypotheses".into());
    }
    Ok((true, format!("{checked} instances")))
}

/// Sym_σ = Aut_σ for every involution of every group of order 3, 5, 7, 9.
fn criterion_5() -> Verdict {
    let mut count = 0;
    for n in [3u64, 5, 7, 9] {
        for moduli in abelian_groups_of_order(n) {
            let g = FiniteAbelianGroup::new(&moduli)?;
            for sigma in involutions(&g)? {
                let r = check_involution(&sigma, BruteCap::nine())?;
                if !r.equal {
                    return fail(format!("{moduli:?}: |Aut_σ| {} vs |Sym_σ| {}", r.aut_order, r.sym_order));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} involutions, |G| = 9 scanned behind the nine flag")))
}

/// Sym_σ⁻ = Sym_σ⁺ by scanning Sym(G), every σ, every |G| ≤ 8.
fn criterion_6() -> Verdict {
    let mut count = 0;
    for n in 1..=8u64 {
        for moduli in abelian_groups_of_order(n) {
            let g = FiniteAbelianGroup::new(&moduli)?;
            for sigma in all_automorphisms(&g)? {
                let r = check_sym_equality(&sigma, Strategy::Brute, BruteCap::default())?;
                if !r.equal {
                    return fail(format!("{moduli:?} with σ {:?}", sigma.table()));
                }
                count += 1;
            }
        }
    }
    Ok((true, format!("{count} pairs (G, σ)")))
}

fn a_prime(lib: &Library) -> Result<Biproduct> {
    Biproduct::build(lib.hopf_spec(&lib.hopf.a_prime)?)
}

/// Hopf axioms of A', the bijection with Γ, and the non-coalgebra F_L.
fn criterion_7(lib: &Library) -> Verdict {
    let a = a_prime(lib)?;
    if a.conductor() != 8 {
        return fail(format!("conductor {}", a.conductor()));
    }
    let mut report = a.verify_bialgebra();
    report.checks.extend(a.verify_structure_maps()?.checks);
    report.checks.extend(IdempotentBasis::new(a.gcal(), &a.field)?.verify().checks.checks);
    if let Some(c) = report.checks.iter().find(|c| !c.passed) {
        return fail(format!("{} fails at {:?}", c.name, c.counterexample));
    }
    for name in ["orthogonality", "coproduct", "J Pi = id * j S pi", "coassociativity"] {
        if report.get(name).is_none() {
            return fail(format!("missing check {name}"));
        }
    }
    let all = a.enumerate_aut_hopf_a_prime()?;
    let ctx = SigmaContext::new(&a.sigma)?;
    let ws = gamma_witnesses(&ctx, Strategy::Constrained, BruteCap::default(), 1)?;
    if all.len() != ws.len() {
        return fail(format!("|Aut_Hopf| {} vs |Γ| {}", all.len(), ws.len()));
    }
    for f in &all {
        let (tau, alpha) = a.pair_from_automorphism(f)?;
        if !ws.iter().any(|w| w.tau == tau && w.alpha == alpha) || a.automorphism_from_pair(&tau, &alpha)? != *f {
            return fail(format!("automorphism with τ {tau:?} has no matching pair"));
        }
    }
    for w in &ws {
        if !all.contains(&a.automorphism_from_pair(&w.tau, &w.alpha)?) {
            return fail(format!("pair with τ {:?} gives no automorphism", w.tau));
        }
    }
    let HopfConfig::Named { a_prime_of } = &lib.hopf.a_prime else {
        return fail("A' is not tied to a main example".into());
    };
    let ex = build_main_example(&lib.main_example(a_prime_of)?.build()?)?;
    let f = a.automorphism_from_pair(&ex.tau, &ex.alpha)?;
    let hopf = a.is_hopf_endo_fixing_pi(&f)?.holds();
    let fl_co = a.fl_coalgebra_test(&f)?;
    if !hopf || fl_co {
        return fail(format!("witness: hopf {hopf}, F_L coalgebra {fl_co}"));
    }
    Ok((true, format!("{} checks, |Aut_Hopf(A', π')| = |Γ| = {}, witness F_L not a coalgebra map", report.checks.len(), all.len())))
}

/// Composition laws for every ordered pair of automorphisms of A'.
fn criterion_8(lib: &Library) -> Verdict {
    let a = a_prime(lib)?;
    let all = a.enumerate_aut_hopf_a_prime()?;
    let factors = all.iter().map(|f| a.factorize(f)).collect::<Result<Vec<_>>>()?;
    let unit = a.eta_epsilon();
    for (i, f) in all.iter().enumerate() {
        let fi = &factors[i];
        let jr = a.convolution_inverse_fr(&fi.fr);
        if a.convolve(&fi.fr, &jr) != unit || a.convolve(&jr, &fi.fr) != unit {
            return fail(format!("J_R is not a convolution inverse for F #{i}"));
        }
        if !a.rtrivial_equivalences(f)?.agree() {
            return fail(format!("R-trivial conditions disagree for F #{i}"));
        }
        for (j, g) in all.iter().enumerate() {
            let gj = &factors[j];
            let fg = a.factorize(&f.compose(g)?)?;
            if fg.fl != fi.fl.compose(&gj.fl)? {
                return fail(format!("(FG)_L ≠ F_L G_L for ({i}, {j})"));
            }
            if fg.fr != a.convolve(&fi.fl.compose(&gj.fr)?, &fi.fr) {
                return fail(format!("(FG)_R ≠ (F_L G_R) ⋆ F_R for ({i}, {j})"));
            }
        }
    }
    Ok((true, format!("{} pairs", all.len() * all.len())))
}

/// The kernel of F ↦ F_L found two ways, and its group structure.
fn criterion_9(lib: &Library) -> Verdict {
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
    if ker.len() != via_aut.len() || !ker.iter().all(|g| via_aut.contains(g)) {
        return fail(format!("filtered {} vs from automorphisms {}", ker.len(), via_aut.len()));
    }
    if !a.is_convolution_group(&ker) {
        return fail("not a convolution group".into());
    }
    Ok((true, format!("|𝒩| = {}", ker.len())))
}

/// Constrained and brute searches agree on every small library instance.
fn criterion_10(lib: &Library) -> Verdict {
    let mut count = 0;
    for inst in &lib.instances {
        let (g, sigma) = inst.build(lib)?;
        if g.order() > 8 {
            continue;
        }
        let r = check_oracle(&sigma, BruteCap::default())?;
        if !r.holds() {
            return fail(format!("{}: {r:?}", inst.label()));
        }
        count += 1;
    }
    Ok((true, format!("{count} instances, four targets each")))
}

fn main() -> ExitCode {
    let lib = Library::bundled().expect("bundled library");
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        ("local ring orders", Box::new(criterion_1)),
        ("main example strict inclusion", Box::new(|| criterion_2(&lib))),
        ("group-main chain", Box::new(|| criterion_3(&lib))),
        ("no-fixed-point equality", Box::new(|| criterion_4(&lib))),
        ("involution equality", Box::new(criterion_5)),
        ("Sym⁻ = Sym⁺", Box::new(criterion_6)),
        ("Hopf suite on A'", Box::new(|| criterion_7(&lib))),
        ("factorization laws", Box::new(|| criterion_8(&lib))),
        ("kernel agreement", Box::new(|| criterion_9(&lib))),
        ("oracle equivalence", Box::new(|| criterion_10(&lib))),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {detail} ({:.2}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
