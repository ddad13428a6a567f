//! Builds a non-integrability perturbation of the constant potential on the
//! Lattès rule and checks its evidence.

use thurston::complex::{Complex, Symbolic};
use thurston::potential::Potential;
use thurston::sni::{check_sni, construct_perturbation, openness_perturbation, openness_radius, CheckConfig, PlanConfig};
use thurston::{parse_rule, rules};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_rule(rules::LATTES_2X2)?;
    let mut cx = Complex::new(&spec)?;
    let sym = Symbolic::new(&cx.pattern);
    let t = std::time::Instant::now();
    let cfg = PlanConfig::new(2.0, 0.99, 2.0, 1.0);
    let (phi, upsilon) = construct_perturbation(&mut cx, &sym, &Potential::Const(1.0), &cfg)?;
    let plan = &upsilon.plan;
    println!(
        "N = {}, D_N = {}, eps = {:e}, N0 = {}, M0 = {}, C27 = {:.1}, undecided = {} ({:?})",
        plan.n_big, plan.dn, plan.eps, plan.n0, plan.m0, plan.c27, plan.deltas.undecided(), t.elapsed()
    );
    let check = CheckConfig { eps: plan.eps, m_max: plan.m_max(), n_list: vec![plan.n0, plan.n0 + 1], tile_limit: 1 << 22 };
    let report = check_sni(&phi, &sym, plan, &check)?;
    println!("rows = {}, all pass = {}, min quotient = {:e} ({:?})", report.rows.len(), report.all_pass(), report.min_quotient(), t.elapsed());
    let r = openness_radius(plan.eps, plan.alpha, plan.lambda, plan.c0);
    let psi = openness_perturbation(&sym, &upsilon, r);
    let moved = thurston::potential::Potential::Sum(vec![phi, psi]);
    let half = CheckConfig { eps: plan.eps / 2.0, ..check };
    let report = check_sni(&moved, &sym, plan, &half)?;
    println!("perturbed by {r:e}: rows = {}, all pass at eps/2 = {}, min quotient = {:e} ({:?})", report.rows.len(), report.all_pass(), report.min_quotient(), t.elapsed());
    Ok(())
}
