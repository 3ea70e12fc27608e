use std::collections::BTreeMap;
use std::sync::Arc;

use lietorus::liealg::{ChevalleyAlgebra, IrrepModule, RootSystem};
use lietorus::scalar::Rational;
use lietorus::{CycScalar, Error};
use num_traits::Zero;
use proptest::prelude::*;

fn alg(letter: char, rank: usize) -> Arc<ChevalleyAlgebra> {
    Arc::new(ChevalleyAlgebra::build(letter, rank).unwrap())
}

fn classical_positive_count(letter: char, l: usize) -> usize {
    match letter {
        'A' => l * (l + 1) / 2,
        'B' | 'C' => l * l,
        'D' => l * (l - 1),
        'E' => [36, 63, 120][l - 6],
        'F' => 24,
        'G' => 6,
        _ => unreachable!(),
    }
}

#[test]
fn dimensions_match_classical_counts() {
    for (t, l) in [('A', 1), ('A', 2), ('A', 4), ('B', 2), ('B', 3), ('C', 3), ('D', 4), ('D', 5), ('G', 2), ('F', 4), ('E', 6)] {
        let rs = RootSystem::new(t, l).unwrap();
        let np = classical_positive_count(t, l);
        assert_eq!(rs.num_positive(), np, "{t}{l}");
        let g = ChevalleyAlgebra::build(t, l).unwrap();
        assert_eq!(g.dim(), 2 * np + l);
    }
    assert_eq!(ChevalleyAlgebra::build('A', 2).unwrap().dim(), 8);
    assert_eq!(ChevalleyAlgebra::build('D', 4).unwrap().dim(), 28);
}

#[test]
fn e7_e8_root_counts() {
    assert_eq!(RootSystem::new('E', 7).unwrap().num_positive(), 63);
    assert_eq!(RootSystem::new('E', 8).unwrap().num_positive(), 120);
}

#[test]
fn invalid_types_rejected() {
    assert!(matches!(ChevalleyAlgebra::build('B', 1), Err(Error::UnsupportedType(_))));
    assert!(matches!(ChevalleyAlgebra::build('D', 3), Err(Error::UnsupportedType(_))));
    assert!(matches!(ChevalleyAlgebra::build('E', 5), Err(Error::UnsupportedType(_))));
    assert!(matches!(ChevalleyAlgebra::build('X', 2), Err(Error::UnsupportedType(_))));
}

#[test]
fn sl2_relations() {
    let g = alg('A', 1);
    let (e, f, h) = (g.basis_vec(0), g.basis_vec(1), g.basis_vec(2));
    assert_eq!(g.bracket(&e, &f), h);
    let two_e: Vec<CycScalar> = e.iter().map(|x| x * &CycScalar::from_int(2)).collect();
    assert_eq!(g.bracket(&h, &e), two_e);
    assert_eq!(g.form(&h, &h), CycScalar::from_int(2));
    assert_eq!(g.form(&e, &f), CycScalar::one());
    assert_eq!(g.form(&e, &e), CycScalar::zero());
}

fn check_jacobi(g: &ChevalleyAlgebra) {
    let d = g.dim();
    for a in 0..d {
        for b in 0..d {
            let ab = g.bracket(&g.basis_vec(a), &g.basis_vec(b));
            let ba = g.bracket(&g.basis_vec(b), &g.basis_vec(a));
            assert!(ab.iter().zip(&ba).all(|(x, y)| (x + y).is_zero()));
        }
    }
    for a in 0..d {
        for b in a + 1..d {
            for c in b + 1..d {
                let (x, y, z) = (g.basis_vec(a), g.basis_vec(b), g.basis_vec(c));
                let t1 = g.bracket(&x, &g.bracket(&y, &z));
                let t2 = g.bracket(&y, &g.bracket(&z, &x));
                let t3 = g.bracket(&z, &g.bracket(&x, &y));
                for k in 0..d {
                    assert!((&(&t1[k] + &t2[k]) + &t3[k]).is_zero(), "Jacobi fails on {a},{b},{c}");
                }
            }
        }
    }
}

#[test]
fn jacobi_on_all_basis_triples() {
    for (t, l) in [('A', 1), ('A', 2), ('A', 3), ('B', 2), ('G', 2), ('C', 3), ('B', 3), ('D', 4)] {
        check_jacobi(&alg(t, l));
    }
}

#[test]
fn structure_constants_integral_and_coroots() {
    for (t, l) in [('A', 3), ('B', 3), ('C', 3), ('G', 2), ('F', 4)] {
        let g = alg(t, l);
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                for (_, v) in g.bracket_basis(a, b) {
                    assert!(v.is_integer(), "{t}{l}: non-integral constant");
                }
            }
        }
        for r in 0..g.num_positive() {
            let hv = g.bracket(&g.basis_vec(g.e(r)), &g.basis_vec(g.f(r)));
            assert_eq!(hv, g.coroot_vec(r), "{t}{l}: [e,f] != h for root {r}");
        }
    }
}

#[test]
fn invariant_form_properties() {
    for (t, l) in [('A', 2), ('B', 2), ('G', 2), ('C', 3)] {
        let g = alg(t, l);
        let d = g.dim();
        let theta = g.num_positive() - 1;
        assert_eq!(g.root_length(theta), Rational::from_integer(2.into()));
        let ht = g.coroot_vec(theta);
        assert_eq!(g.form(&ht, &ht), CycScalar::from_int(2));
        // symmetric, associative, nondegenerate
        let mut gram = lietorus::linalg::Matrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                assert_eq!(g.form_basis(a, b), g.form_basis(b, a));
                gram.set(a, b, g.form_basis(a, b));
                for c in 0..d {
                    let (x, y, z) = (g.basis_vec(a), g.basis_vec(b), g.basis_vec(c));
                    assert_eq!(g.form(&g.bracket(&x, &y), &z), g.form(&x, &g.bracket(&y, &z)));
                }
            }
        }
        assert_eq!(gram.rank(), d);
        // proportional to the Killing form
        let scale = &g.killing(&ht, &ht) / &CycScalar::from_int(2);
        for a in 0..d {
            for b in 0..d {
                let k = g.killing(&g.basis_vec(a), &g.basis_vec(b));
                assert_eq!(k, &scale * &g.form_basis(a, b));
            }
        }
    }
}

#[test]
fn weyl_dimension_examples() {
    let a1 = RootSystem::new('A', 1).unwrap();
    assert_eq!(a1.weyl_dimension(&[0]).unwrap(), 1);
    let a2 = RootSystem::new('A', 2).unwrap();
    assert_eq!(a2.weyl_dimension(&[1, 0]).unwrap(), 3);
    let c2 = RootSystem::new('C', 2).unwrap();
    assert_eq!(c2.weyl_dimension(&[0, 1]).unwrap(), 5);
    assert!(matches!(a2.weyl_dimension(&[-1, 0]), Err(Error::NonDominantWeight(_))));
    let e8 = RootSystem::new('E', 8).unwrap();
    assert_eq!(e8.weyl_dimension(&[0, 0, 0, 0, 0, 0, 0, 1]).unwrap(), 248);
}

/// Freudenthal multiplicity formula, weights in fundamental-weight coordinates.
fn freudenthal(rs: &RootSystem, lambda: &[i64]) -> BTreeMap<Vec<i64>, i64> {
    let l = rs.rank;
    let fw = rs.fundamental_weights();
    // (omega_i|omega_j) = c_ij * half_len_j
    let ip = |x: &[i64], y: &[i64]| -> Rational {
        let mut acc = Rational::zero();
        for i in 0..l {
            for j in 0..l {
                acc += Rational::from_integer((x[i] * y[j]).into()) * &fw[i][j] * &rs.half_len[j];
            }
        }
        acc
    };
    let to_omega = |root: &[i64]| -> Vec<i64> {
        (0..l).map(|i| (0..l).map(|k| root[k] * rs.cartan[i][k]).sum()).collect()
    };
    let pos: Vec<Vec<i64>> = rs.positive.iter().map(|r| to_omega(r)).collect();
    let rho = vec![1i64; l];
    let add = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
    let top = ip(&add(lambda, &rho), &add(lambda, &rho));
    let mut mult: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    mult.insert(lambda.to_vec(), 1);
    let mut frontier = vec![lambda.to_vec()];
    let mut seen = std::collections::BTreeSet::new();
    let mut depth_order: Vec<(i64, Vec<i64>)> = Vec::new();
    // enumerate candidate weights by depth
    let simple: Vec<Vec<i64>> = (0..l).map(|k| pos[k].clone()).collect();
    for depth in 1.. {
        let mut next = Vec::new();
        for mu in &frontier {
            for s in &simple {
                let nu: Vec<i64> = mu.iter().zip(s).map(|(a, b)| a - b).collect();
                if seen.insert(nu.clone()) {
                    next.push(nu);
                }
            }
        }
        let mut kept = Vec::new();
        for nu in next {
            let denom = &top - ip(&add(&nu, &rho), &add(&nu, &rho));
            if denom <= Rational::zero() {
                continue;
            }
            let mut s = Rational::zero();
            for a in &pos {
                let mut k = 1;
                loop {
                    let up: Vec<i64> = nu.iter().zip(a).map(|(x, y)| x + k * y).collect();
                    match mult.get(&up) {
                        Some(&m) => s += Rational::from_integer(m.into()) * ip(&up, a),
                        None => {
                            if k > 2 * (lambda.iter().sum::<i64>() + 4) {
                                break;
                            }
                        }
                    }
                    k += 1;
                    if k > 2 * (lambda.iter().sum::<i64>() + 4) {
                        break;
                    }
                }
            }
            let m = Rational::from_integer(2.into()) * s / denom;
            assert!(m.is_integer());
            let m: i64 = m.to_integer().try_into().unwrap();
            if m > 0 {
                mult.insert(nu.clone(), m);
                depth_order.push((depth, nu.clone()));
                kept.push(nu);
            }
        }
        if kept.is_empty() {
            break;
        }
        frontier = kept;
    }
    mult
}

fn check_module(v: &IrrepModule) {
    let g = &v.algebra;
    for a in 0..g.dim() {
        for b in 0..g.dim() {
            let lhs = v.action(&g.bracket(&g.basis_vec(a), &g.basis_vec(b)));
            let rhs = v.mats[a].commutator(&v.mats[b]);
            assert!(lhs.same_as(&rhs), "module axiom fails for {a},{b}");
        }
    }
}

#[test]
fn irreps_against_weyl_and_freudenthal() {
    let cases: Vec<(char, usize, Vec<i64>)> = vec![
        ('A', 1, vec![1]),
        ('A', 2, vec![1, 0]),
        ('A', 2, vec![1, 1]),
        ('A', 2, vec![2, 1]),
        ('B', 2, vec![0, 1]),
        ('B', 2, vec![1, 1]),
        ('C', 2, vec![0, 1]),
        ('G', 2, vec![1, 0]),
        ('G', 2, vec![0, 1]),
        ('A', 3, vec![0, 1, 0]),
        ('D', 4, vec![1, 0, 0, 0]),
    ];
    for (t, l, lambda) in cases {
        let g = alg(t, l);
        let v = g.build_irrep(&lambda).unwrap();
        assert_eq!(v.dim() as u64, g.roots.weyl_dimension(&lambda).unwrap(), "{t}{l} {lambda:?}");
        let fr = freudenthal(&g.roots, &lambda);
        let got: BTreeMap<Vec<i64>, i64> = v.weight_multiplicities().into_iter().map(|(k, m)| (k, m as i64)).collect();
        assert_eq!(got, fr, "{t}{l} {lambda:?}");
        check_module(&v);
    }
}

#[test]
fn small_irrep_examples() {
    let sl2 = alg('A', 1);
    let v = sl2.build_irrep(&[1]).unwrap();
    assert_eq!(v.dim(), 2);
    let ws: Vec<i64> = v.weights().iter().map(|w| w[0]).collect();
    assert_eq!(ws, vec![1, -1]);
    let sl3 = alg('A', 2);
    let adj = sl3.build_irrep(&[1, 1]).unwrap();
    assert_eq!(adj.dim(), 8);
    assert_eq!(adj.weight_multiplicities()[&vec![0, 0]], 2);
    assert!(matches!(sl3.build_irrep(&[1, -1]), Err(Error::NonDominantWeight(_))));
}

#[test]
fn weight_multiplicities_are_weyl_symmetric() {
    let g = alg('B', 2);
    let v = g.build_irrep(&[1, 1]).unwrap();
    let m = v.weight_multiplicities();
    for (w, k) in &m {
        for i in 0..2 {
            // s_i on fundamental-weight coordinates
            let r: Vec<i64> = (0..2).map(|j| w[j] - w[i] * g.roots.cartan[j][i]).collect();
            assert_eq!(m.get(&r), Some(k));
        }
    }
}

#[test]
fn extended_root_sets() {
    let a2 = RootSystem::new('A', 2).unwrap();
    assert_eq!(a2.extended_roots().len(), 6);
    let b2 = RootSystem::new('B', 2).unwrap();
    let ext = b2.extended_roots();
    assert_eq!(ext.len(), 12);
    let a1 = RootSystem::new('A', 1).unwrap();
    let mut e1 = a1.extended_roots();
    e1.sort();
    assert_eq!(e1, vec![vec![-2], vec![-1], vec![1], vec![2]]);
    for rs in [&b2, &a2] {
        let ext = rs.extended_roots();
        for r in &ext {
            let neg: Vec<i64> = r.iter().map(|x| -x).collect();
            assert!(ext.contains(&neg));
            for i in 0..rs.rank {
                assert!(ext.contains(&rs.reflect(r, i)));
            }
        }
    }
}

#[test]
fn serialization_lists_constants_as_strings() {
    let g = alg('A', 1);
    let j = g.to_json();
    assert_eq!(j["basis"], serde_json::json!(["e1", "f1", "h1"]));
    let consts = j["structure_constants"].as_array().unwrap();
    assert!(consts.contains(&serde_json::json!(["e1", "f1", "h1", "1"])));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]
    #[test]
    fn random_a2_irreps_have_weyl_dimension(a in 0i64..3, b in 0i64..3) {
        let g = alg('A', 2);
        let v = g.build_irrep(&[a, b]).unwrap();
        prop_assert_eq!(v.dim() as u64, g.roots.weyl_dimension(&[a, b]).unwrap());
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let lhs = v.action(&g.bracket(&g.basis_vec(i), &g.basis_vec(j)));
                prop_assert!(lhs.same_as(&v.mats[i].commutator(&v.mats[j])));
            }
        }
    }

    #[test]
    fn random_b2_g2_dims(a in 0i64..3, b in 0i64..2, g2 in proptest::bool::ANY) {
        let (t, l) = if g2 { ('G', 2) } else { ('B', 2) };
        let g = alg(t, l);
        let v = g.build_irrep(&[a, b]).unwrap();
        prop_assert_eq!(v.dim() as u64, g.roots.weyl_dimension(&[a, b]).unwrap());
    }
}
