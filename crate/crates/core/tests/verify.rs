use std::sync::Arc;

use lietorus::grading::*;
use lietorus::liealg::ChevalleyAlgebra;
use lietorus::repmod::{build_realized, ModuleSpec, Quadruple};
use lietorus::toroidal::ToroidalAlgebra;
use lietorus::verify::*;
use lietorus::CycScalar;

fn flip_dec(rank: usize, perm: &[usize]) -> Arc<EigenspaceDecomposition> {
    let g = Arc::new(ChevalleyAlgebra::build('A', rank).unwrap());
    let f = make_diagram_aut(&g, perm).unwrap();
    let group = validate_tuple(std::slice::from_ref(&f), &[2]).unwrap();
    Arc::new(eigenspace_decompose(g, vec![f], group).unwrap())
}

fn sign_dec() -> Arc<EigenspaceDecomposition> {
    let g = Arc::new(ChevalleyAlgebra::build('A', 1).unwrap());
    let s = make_torus_aut(&g, &[CycScalar::from_int(-1)]).unwrap();
    let group = validate_tuple(std::slice::from_ref(&s), &[2]).unwrap();
    Arc::new(eigenspace_decompose(g, vec![s], group).unwrap())
}

#[test]
fn jacobi_sweeps_pass_for_every_cocycle() {
    let dec = flip_dec(2, &[1, 0]);
    for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let cfg = SweepConfig::new(SweepTarget::Algebra, 2).with_phi(a, b);
        let r = sweep_jacobi(dec.clone(), &cfg).unwrap();
        assert!(r.all_pass(), "{}", r.to_json_string());
        assert!(r.check("jacobi").unwrap().total > 0);
    }
}

#[test]
fn corrupted_constant_yields_replayable_witness() {
    let dec = flip_dec(2, &[1, 0]);
    let g = &dec.g;
    let bad_g = g
        .with_corrupted_constant(g.e(0), g.f(0), g.h(0), CycScalar::one())
        .with_corrupted_constant(g.e(1), g.f(1), g.h(1), CycScalar::one());
    let mut bad = (*dec).clone();
    bad.g = Arc::new(bad_g);
    let bad = Arc::new(bad);
    let cfg = SweepConfig::new(SweepTarget::Algebra, 1);
    let r = sweep_jacobi(bad.clone(), &cfg).unwrap();
    let j = r.check("jacobi").unwrap();
    assert_eq!(j.status, Status::Fail);
    let w = &j.witnesses[0];
    let t = ToroidalAlgebra::new(bad, cfg.phi.clone(), 1);
    let x = t.parse(w["x"].as_str().unwrap()).unwrap();
    let y = t.parse(w["y"].as_str().unwrap()).unwrap();
    let z = t.parse(w["z"].as_str().unwrap()).unwrap();
    let replay = jacobi_sum(&t, &x, &y, &z);
    assert!(replay.map_or(true, |s| !s.is_zero()));
}

fn adjoint_module(w: i64) -> lietorus::repmod::RealizedModule {
    let torus = ToroidalAlgebra::new(flip_dec(2, &[1, 0]), (CycScalar::zero(), CycScalar::zero()), w);
    let q = Quadruple { psi: vec![], c: CycScalar::one(), lambda: vec![1, 1], beta: vec![CycScalar::zero()] };
    build_realized(&torus, &ModuleSpec::new(q).with_shift(vec![1])).unwrap()
}

#[test]
fn module_sweep_passes_and_detects_corruption() {
    let m = adjoint_module(2);
    let cfg = SweepConfig::new(SweepTarget::Module, 2).with_samples(20).with_seed(3);
    let r = sweep_module(&m, &cfg).unwrap();
    assert!(r.all_pass(), "{}", r.to_json_string());
    assert_eq!(r.summary_lines().len(), 5);
    let bad = m.with_shifted_piece(vec![1], CycScalar::one());
    let r = sweep_module(&bad, &cfg).unwrap();
    let ax = r.check("module_axiom").unwrap();
    assert_eq!(ax.status, Status::Fail);
    assert!(ax.witnesses[0].get("degree").is_some());
}

#[test]
fn lie_torus_sweeps() {
    let cfg = SweepConfig::new(SweepTarget::Algebra, 2);
    let a2 = sweep_lietorus(&flip_dec(2, &[1, 0]), &cfg).unwrap();
    assert!(a2.all_pass());
    assert_eq!(a2.checks.len(), 4);
    let a3 = sweep_lietorus(&flip_dec(3, &[2, 1, 0]), &cfg).unwrap();
    assert!(a3.all_pass());
    let sl2 = sweep_lietorus(&sign_dec(), &cfg).unwrap();
    assert_eq!(sl2.check("g0_simple").unwrap().status, Status::Fail);
}

#[test]
fn reports_are_reproducible() {
    let m = adjoint_module(1);
    let cfg = SweepConfig::new(SweepTarget::Module, 1).with_samples(10).with_seed(11);
    let a = sweep_module(&m, &cfg).unwrap().to_json_string();
    let mut cfg2 = cfg.clone();
    cfg2.threads = 2;
    let b = sweep_module(&m, &cfg2).unwrap().to_json_string();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for c in v.as_array().unwrap() {
        for key in ["check", "status", "witnesses", "elapsed_ms"] {
            assert!(c.get(key).is_some());
        }
        assert!(c["elapsed_ms"].is_null());
    }
}
