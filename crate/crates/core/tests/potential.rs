use std::sync::Arc;

use proptest::prelude::*;
use thurston::complex::{Addr, Complex, PointRef, SymVertex, Symbolic, Word};
use thurston::interval::Interval;
use thurston::potential::*;
use thurston::sni::{BumpFunction, BumpParams};
use thurston::{parse_rule, rules};

fn lattes(n: usize) -> (Complex, Symbolic) {
    let mut cx = Complex::new(&parse_rule(rules::LATTES_2X2).unwrap()).unwrap();
    cx.build_to(n).unwrap();
    let sym = Symbolic::new(&cx.pattern);
    (cx, sym)
}

/// Admissible word following the choices `picks` (each reduced mod the child count).
fn word_from(sym: &Symbolic, host: usize, picks: &[usize]) -> Word {
    let mut w: Word = Vec::new();
    for &k in picks {
        let c = if w.is_empty() { host } else { sym.color(&w).index() };
        let kids = &sym.pattern.children[c];
        w.push(kids[k % kids.len()] as u16);
    }
    w
}

fn small_bump(sym: &Symbolic, eps: f64) -> BumpFunction {
    let params = BumpParams { lambda: 2.0, alpha: 0.5, c26: 8.0, eps, n_big: 2, dn: 4 };
    let centre = SymVertex { word: word_from(sym, 0, &[1, 2]), corner: 2 };
    BumpFunction::new(sym, &centre, 0, params).unwrap()
}

#[test]
fn distortion_constant_example() {
    assert_eq!(distortion_constant_c1(1.0, 2.0, 2.0, 1.0), 4.0);
    assert_eq!(distortion_constant_c1(0.0, 2.0, 2.0, 1.0), 0.0);
}

#[test]
fn lambda_pow_encloses_exact_powers() {
    for k in 0..40 {
        let p = lambda_pow(2.0, 1.0, k);
        assert!(p.contains(0.5f64.powi(k as i32)));
        assert!(p.width() <= 8.0 * f64::EPSILON * p.hi);
    }
}

#[test]
fn constant_birkhoff_sum_is_exact() {
    let (_, sym) = lattes(0);
    let x = Addr::new(&sym, vec![], vec![0]).unwrap();
    assert_eq!(birkhoff_sum(&Potential::Const(1.5), &sym, &x, 4), Interval::point(6.0));
    assert_eq!(birkhoff_sum(&Potential::Const(1.5), &sym, &x, 0), Interval::ZERO);
}

#[test]
fn declared_bounds_of_combinations() {
    let (_, sym) = lattes(0);
    let b = Arc::new(small_bump(&sym, 0.01));
    let phi = Potential::Sum(vec![
        Potential::Const(2.0),
        Potential::Scaled(-3.0, Box::new(Potential::Bump { weight: 1.0, bump: b.clone() })),
    ]);
    assert!((phi.sup_bound() - (2.0 + 3.0 * b.amplitude())).abs() < 1e-15);
    assert_eq!(phi.seminorm_bound(), b.seminorm_bound().map(|h| 3.0 * h));
    assert_eq!(phi.constant_value(), None);
    assert_eq!(Potential::Sum(vec![Potential::Const(1.0), Potential::Const(2.5)]).constant_value(), Some(3.5));
    let dp = Potential::DistPow { center: Addr::new(&sym, vec![], vec![0]).unwrap(), alpha: 0.5, weight: 1.0, lambda: 2.0, depth: 20 };
    assert_eq!(dp.seminorm_bound(), None);
    assert_eq!(phi.terms().len(), 2);
}

#[test]
fn seminorm_estimate_respects_declared_bound() {
    let (cx, sym) = lattes(6);
    let b = Arc::new(small_bump(&sym, 0.01));
    let phi = Potential::Bump { weight: 1.0, bump: b.clone() };
    let est = seminorm_estimate(&phi, &cx, &sym, 4, 2.0, 0.5);
    assert!(est > 0.0);
    assert!(est <= b.seminorm_bound().unwrap(), "{est}");
    assert_eq!(seminorm_estimate(&Potential::Const(3.0), &cx, &sym, 4, 2.0, 0.5), 0.0);
}

#[test]
fn positivity_of_one_plus_bump() {
    let (mut cx, sym) = lattes(0);
    let b = Arc::new(small_bump(&sym, 0.01));
    let phi = Potential::Sum(vec![Potential::Const(1.0), Potential::Bump { weight: 1.0, bump: b }]);
    match eventually_positive_check(&phi, &mut cx, &sym, 1.0, 2.0, 0.5, 3).unwrap() {
        Positivity::Certified { n_star, min_block, .. } => {
            assert_eq!(n_star, 1);
            assert!(min_block > 0.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn negative_constant_is_not_positive() {
    let (mut cx, sym) = lattes(0);
    match eventually_positive_check(&Potential::Const(-1.0), &mut cx, &sym, 1.0, 2.0, 0.5, 3).unwrap() {
        Positivity::Inconclusive { witness: Some((3, _, v)) } => assert!(v <= 0.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn expression_parser_round_trips() {
    for text in ["const 1", "distpow 2:5 0.5 -1.5", "sum(const 1; distpow 0:0 1 2)", "perturbed(const 1, plan.txt)"] {
        let e = parse_potential_expr(text).unwrap();
        assert_eq!(parse_potential_expr(&e.to_string()).unwrap(), e);
    }
    assert_eq!(
        parse_potential_expr("sum(const 1; sum(const 2; const 3))").unwrap(),
        PotentialExpr::Sum(vec![
            PotentialExpr::Const(1.0),
            PotentialExpr::Sum(vec![PotentialExpr::Const(2.0), PotentialExpr::Const(3.0)])
        ])
    );
    for bad in ["", "const", "const x", "distpow 2 0.5 1", "distpow 1:0 1.5 1", "sum(const 1;)", "perturbed(const 1)"] {
        assert!(parse_potential_expr(bad).is_err(), "{bad:?}");
    }
}

fn addr_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (prop::collection::vec(0usize..4, 0..6), prop::collection::vec(0usize..4, 1..4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `S_{n+m}φ(x) = S_nφ(x) + S_mφ(fⁿx)`, as overlapping enclosures.
    #[test]
    fn birkhoff_cocycle((pre, per) in addr_strategy(), n in 0usize..5, m in 0usize..5, host in 0usize..2) {
        let (_, sym) = lattes(0);
        let pre = word_from(&sym, host, &pre);
        let c = if pre.is_empty() { host } else { sym.color(&pre).index() };
        let period = word_from(&sym, c, &per);
        let Ok(x) = Addr::new(&sym, pre, period) else { return Ok(()); };
        let centre = Addr::new(&sym, vec![], vec![0]).unwrap();
        let phis = [
            Potential::DistPow { center: centre, alpha: 0.5, weight: 1.0, lambda: 2.0, depth: 30 },
            Potential::Bump { weight: 1.0, bump: Arc::new(small_bump(&sym, 0.1)) },
        ];
        for phi in &phis {
            let whole = birkhoff_sum(phi, &sym, &x, n + m);
            let split = birkhoff_sum(phi, &sym, &x, n) + birkhoff_sum(phi, &sym, &x.shift(n), m);
            prop_assert!(whole.intersects(split), "{whole} vs {split}");
        }
    }

    /// Vertex references and their addresses give the same potential values.
    #[test]
    fn vertex_and_address_agree(id in 0u32..200) {
        let (cx, sym) = lattes(4);
        let b = Potential::Bump { weight: 1.0, bump: Arc::new(small_bump(&sym, 0.1)) };
        let x = PointRef::Vertex { level: 4, id: id % cx.level(4).num_vertices() as u32 }.to_addr(&cx, &sym);
        let v = b.eval(&sym, &x);
        prop_assert!(v.width() <= 1e-14, "{v}");
        prop_assert!(v.lo >= 0.0 && v.hi <= b.sup_bound());
    }
}
