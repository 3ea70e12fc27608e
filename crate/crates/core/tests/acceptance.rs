//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use lietorus::grading::*;
use lietorus::liealg::ChevalleyAlgebra;
use lietorus::linalg::{Matrix, Vector};
use lietorus::repmod::*;
use lietorus::toroidal::{ToroidalAlgebra, ToroidalElement};
use lietorus::verify::*;
use lietorus::CycScalar;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn s(v: i64) -> CycScalar {
    CycScalar::from_int(v)
}

fn flip_dec(rank: usize, perm: &[usize]) -> Arc<EigenspaceDecomposition> {
    let g = Arc::new(ChevalleyAlgebra::build('A', rank).unwrap());
    let f = make_diagram_aut(&g, perm).unwrap();
    let group = validate_tuple(std::slice::from_ref(&f), &[2]).unwrap();
    Arc::new(eigenspace_decompose(g, vec![f], group).unwrap())
}

fn sign_dec() -> Arc<EigenspaceDecomposition> {
    let g = Arc::new(ChevalleyAlgebra::build('A', 1).unwrap());
    let f = make_torus_aut(&g, &[s(-1)]).unwrap();
    let group = validate_tuple(std::slice::from_ref(&f), &[2]).unwrap();
    Arc::new(eigenspace_decompose(g, vec![f], group).unwrap())
}

/// A_2 graded by (flip, identity), m = (2, 1).
fn two_variable_dec() -> Arc<EigenspaceDecomposition> {
    let g = Arc::new(ChevalleyAlgebra::build('A', 2).unwrap());
    let f = make_diagram_aut(&g, &[1, 0]).unwrap();
    let id = FiniteOrderAut::identity(&g);
    let group = validate_tuple(&[f.clone(), id.clone()], &[2, 1]).unwrap();
    Arc::new(eigenspace_decompose(g, vec![f, id], group).unwrap())
}

/// dim ker(sigma - eigen I), straight from the automorphism matrix.
fn kernel_dim(sigma: &FiniteOrderAut, eigen: &CycScalar) -> usize {
    let d = sigma.matrix.rows;
    d - sigma.matrix.sub(&Matrix::identity(d).scale(eigen)).rank()
}

fn adjoint_module(w: i64) -> RealizedModule {
    let torus = ToroidalAlgebra::new(flip_dec(2, &[1, 0]), (s(0), s(0)), w);
    let q = Quadruple { psi: vec![], c: s(1), lambda: vec![1, 1], beta: vec![s(0)] };
    build_realized(&torus, &ModuleSpec::new(q).with_shift(vec![1])).unwrap()
}

fn require_checks(r: &SweepReport, names: &[&str]) -> std::result::Result<(), String> {
    for name in names {
        let c = r.check(name).ok_or_else(|| format!("missing check {name}"))?;
        ensure!(c.status == Status::Pass, "{name} failed: {}", serde_json::to_string(&c.witnesses).unwrap());
    }
    Ok(())
}

fn criterion_1() -> Outcome {
    let mut totals = Vec::new();
    for (label, dec) in [("A2^(2)", flip_dec(2, &[1, 0])), ("A3^(2)", flip_dec(3, &[2, 1, 0]))] {
        let started = Instant::now();
        for (a, b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let cfg = SweepConfig::new(SweepTarget::Algebra, 3).with_phi(a, b);
            let r = sweep_jacobi(dec.clone(), &cfg).map_err(|e| e.to_string())?;
            require_checks(&r, &["antisymmetry", "jacobi"])?;
            let j = r.check("jacobi").unwrap();
            let dim = ToroidalAlgebra::new(dec.clone(), cfg.phi.clone(), 3).window_basis().len();
            ensure!(is_exhaustive(dim) && j.total > 0, "{label}: jacobi was sampled, not exhaustive");
            totals.push(j.total);
        }
        let secs = started.elapsed().as_secs_f64();
        ensure!(secs < 60.0, "{label} took {secs:.1}s");
    }
    Ok(format!("triples per cocycle {totals:?}"))
}

fn criterion_2() -> Outcome {
    let cases = [(flip_dec(2, &[1, 0]), vec![3, 5]), (flip_dec(3, &[2, 1, 0]), vec![10, 5]), (sign_dec(), vec![1, 2])];
    for (dec, expect) in cases {
        let got: Vec<usize> = dec.group.elements().iter().map(|k| dec.class_dim(k)).collect();
        let oracle = vec![kernel_dim(&dec.sigmas[0], &s(1)), kernel_dim(&dec.sigmas[0], &s(-1))];
        ensure!(got == expect && oracle == expect, "dims {got:?}, oracle {oracle:?}, expected {expect:?}");
    }
    Ok("(3,5) (10,5) (1,2)".into())
}

fn criterion_3() -> Outcome {
    for dec in [flip_dec(2, &[1, 0]), flip_dec(3, &[2, 1, 0])] {
        let r = check_lie_torus(&dec, 3);
        ensure!(r.entries.len() == 4 && r.all_pass(), "{:?}", r.entries);
    }
    let sl2 = sign_dec();
    let r = check_lie_torus(&sl2, 3);
    ensure!(!r.entry("g0_simple").unwrap().pass, "sign grading passed g0_simple");
    ensure!(sl2.class_dim(&[0]) == 1, "g_0 has dimension {}", sl2.class_dim(&[0]));
    Ok("sign grading rejected with dim g_0 = 1".into())
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let m = adjoint_module(2);
    let cfg = SweepConfig::new(SweepTarget::Module, 2).with_samples(100).with_seed(2024);
    let r = sweep_module(&m, &cfg).map_err(|e| e.to_string())?;
    require_checks(&r, &["module_axiom", "level_zero", "weight_dims", "weyl"])?;
    ensure!(r.check("module_axiom").unwrap().total > 0, "no axiom instances checked");
    ensure!(r.check("weyl").unwrap().total > 0, "no reflections checked");
    // weight dims per degree against the eigenspace dims of the flip matrix
    let sigma = &m.dec().sigmas[0];
    let mut per_degree: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    for e in m.weight_table() {
        *per_degree.entry(e.k.clone()).or_default() += e.dim;
    }
    ensure!(per_degree.len() == 5, "weight table covers {} degrees", per_degree.len());
    for (k, total) in &per_degree {
        let eigen = if k[0].rem_euclid(2) == 0 { s(1) } else { s(-1) };
        let expect = m.dim_v1() * kernel_dim(sigma, &eigen);
        ensure!(*total == expect, "degree {k:?}: {total} != {expect}");
    }
    let secs = started.elapsed().as_secs_f64();
    ensure!(secs < 120.0, "took {secs:.1}s");
    Ok(format!("{} axiom instances, {} reflections", r.check("module_axiom").unwrap().total, r.check("weyl").unwrap().total))
}

fn criterion_5() -> Outcome {
    let m = adjoint_module(2);
    let bound = m.nilpotency_bound();
    let dim_v2 = m.graded.as_ref().unwrap().dim();
    ensure!(bound == m.dim_v1() * dim_v2 + 1, "bound {bound}");
    let samples = m.check_integrable(100, 2024);
    ensure!(samples.len() == 100, "{} samples", samples.len());
    let worst = samples.iter().map(|x| x.exponent.ok_or(format!("{x:?} not nilpotent"))).collect::<Result<Vec<_>, _>>()?;
    let max = worst.iter().max().copied().unwrap_or(0);
    ensure!(max <= bound, "exponent {max} exceeds {bound}");
    Ok(format!("max exponent {max} <= {bound}"))
}

fn criterion_6() -> Outcome {
    let m = adjoint_module(2);
    let dec = m.dec();
    // the top of the adjoint is the highest root vector; its class carries W_2
    let theta = dec.g.basis_vec(dec.g.e(dec.g.num_positive() - 1));
    let top_class = dec.group.elements().into_iter().find(|k| dec.in_class(k, &theta)).unwrap();
    let mut interior = 0;
    for e in m.highest_weight_space().map_err(|x| x.to_string())? {
        if !e.interior {
            continue;
        }
        interior += 1;
        let expect = if dec.group.quotient(&e.k) == top_class { m.dim_v1() } else { 0 };
        ensure!(e.dim == expect && e.expected == expect, "degree {:?}: dim {} expected {expect}", e.k, e.dim);
        for g in m.positive_generators() {
            let l = g.loops.keys().next().unwrap();
            if !m.torus.window.contains(&[e.k[0] + l[0]]) {
                continue;
            }
            for (_, op) in m.operator(&g, &e.k).map_err(|x| x.to_string())? {
                ensure!(op.mul(&e.basis).is_zero(), "positive generator does not kill V+ at {:?}", e.k);
            }
        }
    }
    ensure!(interior > 0, "no interior degrees");
    Ok(format!("{interior} interior degrees"))
}

fn criterion_7() -> Outcome {
    let dec = flip_dec(2, &[1, 0]);
    let cases: Vec<(Vec<i64>, i64, Vec<i64>, i64)> = vec![
        (vec![1, 0], 1, vec![0, 1], -1),
        (vec![1, 0], 1, vec![0, 1], 1),
        (vec![1, 0], 1, vec![1, 0], 1),
        (vec![1, 0], 1, vec![1, 0], -1),
        (vec![1, 1], 1, vec![1, 1], -1),
        (vec![1, 0], 2, vec![0, 1], -2),
        (vec![1, 0], 2, vec![1, 0], -2),
        (vec![0, 1], 3, vec![1, 0], -3),
    ];
    let mut agree = 0;
    for (l, a, mu, b) in &cases {
        let x = build_evaluation(dec.clone(), l, &[s(*a)]).map_err(|e| e.to_string())?;
        let y = build_evaluation(dec.clone(), mu, &[s(*b)]).map_err(|e| e.to_string())?;
        let pred = evaluation_iso_predicate(&dec, l, &[s(*a)], mu, &[s(*b)]).map_err(|e| e.to_string())?;
        let t = find_intertwiner(&x, &y, None).map_err(|e| e.to_string())?;
        ensure!(t.is_some() == pred, "ev_{a} V{l:?} vs ev_{b} V{mu:?}: intertwiner {} predicate {pred}", t.is_some());
        if let Some(t) = t {
            ensure!(t.rank() == x.dim(), "intertwiner is singular");
            for (g, k) in x.generators(2) {
                let lhs = t.mul(&x.action(&g, &k).unwrap());
                ensure!(lhs == y.action(&g, &k).unwrap().mul(&t), "intertwiner fails at degree {k:?}");
            }
        }
        agree += 1;
    }
    let named = [(0, true), (1, false)];
    for (i, want) in named {
        let (l, a, mu, b) = &cases[i];
        ensure!(evaluation_iso_predicate(&dec, l, &[s(*a)], mu, &[s(*b)]).unwrap() == want, "case {i} verdict");
    }
    Ok(format!("{agree} pairs agree"))
}

/// Isomorphism invariants read off from the module action alone.
#[derive(Clone, Debug)]
struct Signature {
    psi: Vec<i64>,
    c: CycScalar,
    tops: BTreeSet<Vec<i64>>,
    beta: Vec<CycScalar>,
}

fn block(m: &RealizedModule, x: &ToroidalElement, k: &[i64], target: &[i64]) -> Matrix {
    let ops = m.operator(x, k).unwrap();
    ops.get(target).cloned().unwrap_or_else(|| Matrix::zeros(m.piece_dim(target), m.piece_dim(k)))
}

fn signature(m: &RealizedModule) -> Signature {
    let n = m.n();
    let dec = m.dec();
    let zero = vec![0i64; n];
    let dim0 = m.piece_dim(&zero);
    let beta: Vec<CycScalar> = (0..n)
        .map(|i| block(m, &ToroidalElement::deriv_term(s(1), zero.clone(), i), &zero, &zero).get(0, 0).clone())
        .collect();
    // units E_ji acting on V_1, from t^{m_j e_j} d_i on degree zero
    let mut units = vec![vec![Matrix::zeros(dim0, dim0); n]; n];
    for j in 0..n {
        let mut r = zero.clone();
        r[j] = dec.m()[j] as i64;
        for i in 0..n {
            let op = block(m, &ToroidalElement::deriv_term(s(1), r.clone(), i), &zero, &r);
            let op = op.sub(&Matrix::identity(dim0).scale(&beta[i]));
            units[j][i] = op.scale(&CycScalar::frac(1, dec.m()[j] as i64));
        }
    }
    let total = (0..n).fold(Matrix::zeros(dim0, dim0), |acc, i| acc.add(&units[i][i]));
    let c = total.get(0, 0).clone();
    let psi = if n == 1 {
        vec![]
    } else {
        let raise = &units[0][1];
        let h = units[0][0].sub(&units[1][1]);
        let v = raise.nullspace().into_iter().next().unwrap();
        let hv = h.mul_vec(&v);
        let p = v.iter().position(|x| !x.is_zero()).unwrap();
        vec![(&hv[p] / &v[p]).to_i64().unwrap()]
    };

    // forget the grading: assemble the g-action on the sum of one piece per class
    let reps: Vec<Vec<i64>> = dec.group.elements().iter().map(|k| k.iter().map(|&x| x as i64).collect()).collect();
    let dims: Vec<usize> = reps.iter().map(|k| m.piece_dim(k)).collect();
    let offs: Vec<usize> = dims.iter().scan(0, |acc, d| {
        let o = *acc;
        *acc += d;
        Some(o)
    }).collect();
    let total_dim: usize = dims.iter().sum();
    let act = |y: &Vector| -> Matrix {
        let mut out = Matrix::zeros(total_dim, total_dim);
        for (_, part) in dec.split_by_class(y) {
            for (a, k) in reps.iter().enumerate() {
                for (b, k2) in reps.iter().enumerate() {
                    let l: Vec<i64> = k2.iter().zip(k).map(|(x, y)| x - y).collect();
                    if !dec.in_class(&dec.group.quotient(&l), &part) {
                        continue;
                    }
                    let blk = block(m, &ToroidalElement::loop_term(part.clone(), l), k, k2);
                    for r in 0..dims[b] {
                        for col in 0..dims[a] {
                            out.set(offs[b] + r, offs[a] + col, blk.get(r, col).clone());
                        }
                    }
                }
            }
        }
        out
    };
    let g = &dec.g;
    let raise: Vec<Matrix> = (0..g.rank()).map(|i| act(&g.basis_vec(g.e(i)))).collect();
    let cartan: Vec<Matrix> = (0..g.rank()).map(|i| act(&g.basis_vec(g.h(i)))).collect();
    let mut tops = BTreeSet::new();
    let bound = 4i64;
    let mut mu = vec![0i64; g.rank()];
    loop {
        let mut rows = raise.clone();
        for (j, h) in cartan.iter().enumerate() {
            rows.push(h.sub(&Matrix::identity(total_dim).scale(&s(mu[j]))));
        }
        if !Matrix::vstack(&rows).nullspace().is_empty() {
            tops.insert(mu.clone());
        }
        let mut i = 0;
        while i < mu.len() && mu[i] == bound {
            mu[i] = 0;
            i += 1;
        }
        if i == mu.len() {
            break;
        }
        mu[i] += 1;
    }
    Signature { psi, c, tops, beta }
}

fn integral_difference(a: &[CycScalar], b: &[CycScalar]) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).is_integer())
}

fn iso_grid(dec: Arc<EigenspaceDecomposition>, quads: Vec<Quadruple>, w: i64) -> std::result::Result<(usize, [usize; 3]), String> {
    let torus = ToroidalAlgebra::new(dec.clone(), (s(0), s(0)), w);
    let sigs: Vec<Signature> = quads
        .iter()
        .map(|q| build_realized(&torus, &ModuleSpec::new(q.clone())).map(|m| signature(&m)).map_err(|e| format!("{q:?}: {e}")))
        .collect::<Result<_, _>>()?;
    for (q, sig) in quads.iter().zip(&sigs) {
        ensure!(sig.psi == q.psi && sig.c == q.c && sig.beta == q.beta, "signature of {q:?} reads {sig:?}");
    }
    let mut clause_fails = [0usize; 3];
    let mut pairs = 0;
    for (q, a) in quads.iter().zip(&sigs) {
        for (q2, b) in quads.iter().zip(&sigs) {
            let v = iso_check(&dec, q, &dec, q2).map_err(|e| e.to_string())?;
            let oracle = [a.psi == b.psi && a.c == b.c, a.tops == b.tops, integral_difference(&a.beta, &b.beta)];
            ensure!(v.clauses == oracle, "{q:?} vs {q2:?}: clauses {:?} oracle {oracle:?}", v.clauses);
            ensure!(v.isomorphic == oracle.iter().all(|&x| x), "{q:?} vs {q2:?}: verdict");
            for (i, ok) in oracle.iter().enumerate() {
                if !ok {
                    clause_fails[i] += 1;
                }
            }
            pairs += 1;
        }
    }
    Ok((pairs, clause_fails))
}

fn criterion_8() -> Outcome {
    let lambdas = [vec![1, 0], vec![0, 1], vec![1, 1]];
    let mut one = Vec::new();
    for c in [1, 2] {
        for l in &lambdas {
            for b in [CycScalar::zero(), s(1), CycScalar::frac(1, 2), CycScalar::frac(-3, 2)] {
                one.push(Quadruple { psi: vec![], c: s(c), lambda: l.clone(), beta: vec![b] });
            }
        }
    }
    let (p1, f1) = iso_grid(flip_dec(2, &[1, 0]), one, 2)?;
    let mut two = Vec::new();
    for psi in [0, 1] {
        for c in [1, 2] {
            for l in &lambdas {
                for (b0, b1) in [(s(0), s(0)), (s(1), s(-1)), (CycScalar::frac(1, 2), s(0)), (s(0), CycScalar::frac(1, 3))] {
                    two.push(Quadruple { psi: vec![psi], c: s(c), lambda: l.clone(), beta: vec![b0, b1] });
                }
            }
        }
    }
    let (p2, f2) = iso_grid(two_variable_dec(), two, 2)?;
    for (i, (a, b)) in f1.iter().zip(&f2).enumerate() {
        ensure!(*a > 0 && *b > 0, "clause {} never separates a pair", i + 1);
    }
    Ok(format!("{} pairs agree", p1 + p2))
}

fn i_generators(t: &ToroidalAlgebra) -> Vec<(Vector, Vec<i64>)> {
    let n = t.n();
    let mut out = Vec::new();
    for r in window_degrees(n, t.window.w) {
        if r.iter().all(|&x| x == 0) || !t.in_gamma(&r) {
            continue;
        }
        for j in 0..n {
            let mut u = vec![s(0); n];
            u[j] = s(1);
            out.push((u, r.clone()));
        }
    }
    out
}

fn criterion_9() -> Outcome {
    let started = Instant::now();
    let mut pairs = 0;
    for (dec, w) in [(flip_dec(2, &[1, 0]), 4), (two_variable_dec(), 2)] {
        let t = ToroidalAlgebra::new(dec, (s(0), s(0)), w);
        let gens = i_generators(&t);
        for (u, r) in &gens {
            let a = t.i_element(u, r).map_err(|e| e.to_string())?;
            for (v, q) in &gens {
                let sum: Vec<i64> = r.iter().zip(q).map(|(x, y)| x + y).collect();
                if !t.window.contains(&sum) {
                    continue;
                }
                let b = t.i_element(v, q).map_err(|e| e.to_string())?;
                let br = t.bracket(&a, &b).map_err(|e| e.to_string())?;
                let closed = t.i_bracket_closed(u, r, v, q).map_err(|e| e.to_string())?;
                ensure!(br == closed, "closed form differs for I({u:?},{r:?}), I({v:?},{q:?})");
                let lhs = t.pi_map(&br).map_err(|e| e.to_string())?;
                let rhs = t.pi_map(&a).unwrap().commutator(&t.pi_map(&b).unwrap());
                ensure!(lhs == rhs, "pi is not a homomorphism on I({u:?},{r:?}), I({v:?},{q:?})");
                pairs += 1;
            }
        }
    }
    let one = ToroidalAlgebra::new(flip_dec(2, &[1, 0]), (s(0), s(0)), 2);
    let l1 = build_l_beta(&one, build_gln_module(&[], s(1)).unwrap(), Some((&[1, 1], &[s(-1)])), &[CycScalar::frac(2, 5)])
        .map_err(|e| e.to_string())?;
    let two = ToroidalAlgebra::new(two_variable_dec(), (s(0), s(0)), 1);
    let l2 = build_l_beta(
        &two,
        build_gln_module(&[1], s(1)).unwrap(),
        Some((&[1, 0], &[s(-1), s(1)])),
        &[CycScalar::frac(1, 2), CycScalar::frac(1, 3)],
    )
    .map_err(|e| e.to_string())?;
    let mut instances = 0;
    for (l, w) in [(&l1, 2), (&l2, 1)] {
        let r = sweep_module(l, &SweepConfig::new(SweepTarget::Module, w)).map_err(|e| e.to_string())?;
        require_checks(&r, &["module_axiom"])?;
        instances += r.check("module_axiom").unwrap().total;
    }
    let secs = started.elapsed().as_secs_f64();
    ensure!(secs < 30.0, "took {secs:.1}s");
    Ok(format!("{pairs} I-pairs, {instances} module axiom instances"))
}

fn criterion_10() -> Outcome {
    let m = adjoint_module(2);
    let cfg = SweepConfig::new(SweepTarget::Module, 2).with_samples(100).with_seed(99);
    let a = sweep_module(&m, &cfg).map_err(|e| e.to_string())?.to_json_string();
    let mut threaded = cfg.clone();
    threaded.threads = 3;
    let b = sweep_module(&adjoint_module(2), &threaded).map_err(|e| e.to_string())?.to_json_string();
    ensure!(a == b, "module reports differ");
    let dec = flip_dec(2, &[1, 0]);
    let jc = SweepConfig::new(SweepTarget::Algebra, 2).with_phi(1, 1).with_samples(500).with_seed(5);
    let j1 = sweep_jacobi(dec.clone(), &jc).map_err(|e| e.to_string())?.to_json_string();
    let j2 = sweep_jacobi(dec, &jc).map_err(|e| e.to_string())?.to_json_string();
    ensure!(j1 == j2, "algebra reports differ");
    ensure!(m.check_integrable(100, 99) == m.check_integrable(100, 99), "integrability samples differ");
    ensure!(m.weight_table_tsv() == adjoint_module(2).weight_table_tsv(), "weight tables differ");
    Ok("reports byte-identical".into())
}

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("twisted algebra soundness", criterion_1),
        ("eigenspace dimensions", criterion_2),
        ("Lie torus gate", criterion_3),
        ("realized module correctness", criterion_4),
        ("integrability", criterion_5),
        ("highest weight space", criterion_6),
        ("evaluation module isomorphisms", criterion_7),
        ("isomorphism classes", criterion_8),
        ("I-subalgebra and pi", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
