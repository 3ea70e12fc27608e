use std::sync::Arc;

use lietorus::grading::*;
use lietorus::liealg::ChevalleyAlgebra;
use lietorus::linalg::Matrix;
use lietorus::{CycScalar, Error};
use proptest::prelude::*;

fn alg(letter: char, rank: usize) -> Arc<ChevalleyAlgebra> {
    Arc::new(ChevalleyAlgebra::build(letter, rank).unwrap())
}

fn flip_dec(letter: char, rank: usize, perm: &[usize]) -> EigenspaceDecomposition {
    let g = alg(letter, rank);
    let s = make_diagram_aut(&g, perm).unwrap();
    let group = validate_tuple(std::slice::from_ref(&s), &[s.order]).unwrap();
    eigenspace_decompose(g, vec![s], group).unwrap()
}

fn sign_dec() -> EigenspaceDecomposition {
    let g = alg('A', 1);
    let s = make_torus_aut(&g, &[CycScalar::from_int(-1)]).unwrap();
    let group = validate_tuple(std::slice::from_ref(&s), &[2]).unwrap();
    eigenspace_decompose(g, vec![s], group).unwrap()
}

fn dims(dec: &EigenspaceDecomposition) -> Vec<usize> {
    dec.group.elements().iter().map(|k| dec.class_dim(k)).collect()
}

/// Independent oracle: dim ker(sigma - lambda I) from the rank of the raw matrix.
fn kernel_dim(s: &FiniteOrderAut, eigen: CycScalar) -> usize {
    let d = s.matrix.rows;
    d - s.matrix.sub(&Matrix::identity(d).scale(&eigen)).rank()
}

#[test]
fn eigenspace_dimensions_match_rank_oracle() {
    let a2 = flip_dec('A', 2, &[1, 0]);
    assert_eq!(dims(&a2), vec![3, 5]);
    assert_eq!(
        vec![kernel_dim(&a2.sigmas[0], CycScalar::one()), kernel_dim(&a2.sigmas[0], CycScalar::from_int(-1))],
        vec![3, 5]
    );
    let a3 = flip_dec('A', 3, &[2, 1, 0]);
    assert_eq!(dims(&a3), vec![10, 5]);
    assert_eq!(rank_oracle_dims(&a3.sigmas, &a3.group), vec![10, 5]);
    let sl2 = sign_dec();
    assert_eq!(dims(&sl2), vec![1, 2]);
    assert_eq!(rank_oracle_dims(&sl2.sigmas, &sl2.group), vec![1, 2]);
}

#[test]
fn identity_tuple_is_trivial() {
    let g = alg('A', 2);
    let id = make_diagram_aut(&g, &[0, 1]).unwrap();
    assert_eq!(id.order, 1);
    let group = validate_tuple(std::slice::from_ref(&id), &[1]).unwrap();
    assert_eq!(group.order(), 1);
    let dec = eigenspace_decompose(g, vec![id], group).unwrap();
    assert_eq!(dims(&dec), vec![8]);
    assert!(check_lie_torus(&dec, 1).all_pass());
}

#[test]
fn automorphisms_are_automorphisms() {
    let g = alg('A', 3);
    let d = make_diagram_aut(&g, &[2, 1, 0]).unwrap();
    assert_eq!(d.order, 2);
    assert!(d.is_automorphism(&g));
    let g2 = alg('A', 2);
    let z3 = CycScalar::root_of_unity(3, 1);
    let t = make_torus_aut(&g2, &[z3, CycScalar::one()]).unwrap();
    assert_eq!(t.order, 3);
    assert!(t.is_automorphism(&g2));
    let id = make_torus_aut(&g2, &[CycScalar::one(), CycScalar::one()]).unwrap();
    assert_eq!(id.order, 1);
    let sl2 = alg('A', 1);
    let s = make_torus_aut(&sl2, &[CycScalar::from_int(-1)]).unwrap();
    assert_eq!(s.apply(&sl2.basis_vec(0)), sl2.basis_vec(0).iter().map(|x| -x).collect::<Vec<_>>());
    assert_eq!(s.apply(&sl2.basis_vec(2)), sl2.basis_vec(2));
    let d4 = alg('D', 4);
    let tri = make_diagram_aut(&d4, &[2, 1, 3, 0]).unwrap();
    assert_eq!(tri.order, 3);
    assert!(tri.is_automorphism(&d4));
}

#[test]
fn automorphism_errors() {
    let g = alg('A', 3);
    assert!(matches!(make_diagram_aut(&g, &[1, 0, 2]), Err(Error::NotADiagramSymmetry(_))));
    let g2 = alg('A', 1);
    assert!(matches!(make_torus_aut(&g2, &[CycScalar::from_int(2)]), Err(Error::NotRootOfUnity(_))));
}

#[test]
fn validate_tuple_errors() {
    let g = alg('A', 2);
    let s = make_diagram_aut(&g, &[1, 0]).unwrap();
    let t = make_torus_aut(&g, &[CycScalar::root_of_unity(3, 1), CycScalar::one()]).unwrap();
    assert!(matches!(validate_tuple(&[s.clone(), s.clone()], &[2, 2]), Err(Error::GroupOrderViolation { actual: 2, expected: 4 })));
    assert!(matches!(validate_tuple(&[s.clone()], &[4]), Err(Error::OrderMismatch { .. })));
    assert!(matches!(validate_tuple(&[s, t], &[2, 3]), Err(Error::NonCommuting(0, 1))));
}

#[test]
fn grading_is_compatible_with_bracket() {
    for dec in [flip_dec('A', 2, &[1, 0]), flip_dec('A', 3, &[2, 1, 0]), sign_dec()] {
        let g = &dec.g;
        let els = dec.group.elements();
        for k in &els {
            for l in &els {
                let kl = dec.group.add(k, l);
                for x in dec.class_basis(k) {
                    for y in dec.class_basis(l) {
                        assert!(dec.in_class(&kl, &g.bracket(&x, &y)));
                    }
                }
            }
        }
        for k in &els {
            for x in dec.class_basis(k) {
                for (s, (&c, &m)) in dec.sigmas.iter().zip(k.iter().zip(dec.m())) {
                    let ev = CycScalar::root_of_unity(m, c as i64);
                    assert_eq!(s.apply(&x), x.iter().map(|v| v * &ev).collect::<Vec<_>>());
                }
            }
        }
    }
}

#[test]
fn lie_torus_checks() {
    let a2 = check_lie_torus(&flip_dec('A', 2, &[1, 0]), 2);
    assert!(a2.all_pass(), "{:?}", a2.entries);
    assert_eq!(a2.entries.len(), 4);
    let dec3 = flip_dec('A', 3, &[2, 1, 0]);
    let a3 = check_lie_torus(&dec3, 2);
    assert!(a3.all_pass(), "{:?}", a3.entries);
    let rd = dec3.root_data.as_ref().unwrap();
    assert!(matches!(rd.type_name, Some(('B', 2)) | Some(('C', 2))));
    let sl2 = check_lie_torus(&sign_dec(), 2);
    assert!(!sl2.entry("g0_simple").unwrap().pass);
}

#[test]
fn a2_twisted_odd_weights_form_bc1() {
    let dec = flip_dec('A', 2, &[1, 0]);
    let ext = dec.extended_fixed_roots().unwrap();
    assert_eq!(ext.len(), 4);
    let zw = dec.zero_weight();
    let mut seen = 0;
    for p in dec.class_piece_list(&[1]) {
        assert!(p.weight == zw || ext.contains(&dec.weights[p.weight]));
        seen += p.basis.len();
    }
    assert_eq!(seen, 5);
}

#[test]
fn character_automorphisms() {
    let dec = flip_dec('A', 2, &[1, 0]);
    let id = dec.character_aut(&Character::Exponents(vec![0])).unwrap();
    assert_eq!(id.order, 1);
    let a = dec.character_aut(&Character::Values(vec![CycScalar::from_int(-1)])).unwrap();
    assert_eq!(a.matrix, dec.sigmas[0].matrix);
    for x in dec.class_basis(&[0]) {
        assert_eq!(a.apply(&x), x);
    }
    assert!(matches!(
        dec.character_aut(&Character::Values(vec![CycScalar::root_of_unity(3, 1)])),
        Err(Error::NotAHomomorphism(_))
    ));
    assert_eq!(outer_part(&dec.g, &a).unwrap(), vec![1, 0]);
    let a3 = flip_dec('A', 3, &[2, 1, 0]);
    assert_eq!(outer_part(&a3.g, &a3.sigmas[0]).unwrap(), vec![2, 1, 0]);
}

#[test]
fn character_aut_is_multiplicative_on_klein_group() {
    let g = alg('A', 3);
    let s = make_diagram_aut(&g, &[2, 1, 0]).unwrap();
    let t = make_torus_aut(&g, &[CycScalar::one(), CycScalar::from_int(-1), CycScalar::one()]).unwrap();
    let group = validate_tuple(&[s.clone(), t.clone()], &[2, 2]).unwrap();
    let dec = eigenspace_decompose(g, vec![s, t], group).unwrap();
    let els = dec.group.elements();
    for a in &els {
        for b in &els {
            let ea: Vec<i64> = a.iter().map(|&x| x as i64).collect();
            let eb: Vec<i64> = b.iter().map(|&x| x as i64).collect();
            let ab: Vec<i64> = dec.group.add(a, b).iter().map(|&x| x as i64).collect();
            let ca = dec.character_aut(&Character::Exponents(ea)).unwrap();
            let cb = dec.character_aut(&Character::Exponents(eb)).unwrap();
            let cab = dec.character_aut(&Character::Exponents(ab)).unwrap();
            assert_eq!(ca.matrix.mul(&cb.matrix), cab.matrix);
        }
    }
    let first = dec.character_aut(&Character::Exponents(vec![1, 0])).unwrap();
    assert_eq!(first.order, 2);
}

#[test]
fn ghat_orbits() {
    let dec = flip_dec('A', 2, &[1, 0]);
    assert_eq!(dec.ghat_orbit(&[1, 0]).unwrap(), vec![vec![1, 0], vec![0, 1]]);
    assert_eq!(dec.ghat_orbit(&[1, 1]).unwrap(), vec![vec![1, 1]]);
    assert!(matches!(dec.ghat_orbit(&[-1, 0]), Err(Error::NonDominantWeight(_))));
    let g = alg('A', 2);
    let id = FiniteOrderAut::identity(&g);
    let group = validate_tuple(std::slice::from_ref(&id), &[1]).unwrap();
    let triv = eigenspace_decompose(g, vec![id], group).unwrap();
    assert_eq!(triv.ghat_orbit(&[2, 1]).unwrap(), vec![vec![2, 1]]);
    // torus twists have trivial outer part
    let sl3 = alg('A', 2);
    let t = make_torus_aut(&sl3, &[CycScalar::root_of_unity(3, 1), CycScalar::one()]).unwrap();
    let group = validate_tuple(std::slice::from_ref(&t), &[3]).unwrap();
    let tdec = eigenspace_decompose(sl3, vec![t], group).unwrap();
    assert_eq!(tdec.ghat_orbit(&[1, 0]).unwrap(), vec![vec![1, 0]]);
}

#[test]
fn ghat_orbits_partition() {
    let dec = flip_dec('A', 3, &[2, 1, 0]);
    let weights: Vec<Vec<i64>> =
        vec![vec![1, 0, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 1, 0], vec![0, 1, 1], vec![2, 0, 1], vec![1, 0, 2]];
    for a in &weights {
        let oa = dec.ghat_orbit(a).unwrap();
        for b in &weights {
            let ob = dec.ghat_orbit(b).unwrap();
            assert_eq!(oa.contains(b), ob.contains(a));
        }
    }
}

#[test]
fn character_between_weights() {
    let dec = flip_dec('A', 2, &[1, 0]);
    assert_eq!(dec.character_between(&[1, 0], &[1, 0]).unwrap(), Some(vec![0]));
    assert_eq!(dec.character_between(&[1, 0], &[0, 1]).unwrap(), Some(vec![1]));
    assert_eq!(dec.character_between(&[1, 0], &[1, 1]).unwrap(), None);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn orbits_partition_random_weights(a in proptest::collection::vec(0i64..3, 3), b in proptest::collection::vec(0i64..3, 3)) {
        prop_assume!(a.iter().any(|&x| x > 0) && b.iter().any(|&x| x > 0));
        let dec = flip_dec('A', 3, &[2, 1, 0]);
        let oa = dec.ghat_orbit(&a).unwrap();
        let ob = dec.ghat_orbit(&b).unwrap();
        prop_assert_eq!(oa.contains(&b), ob.contains(&a));
    }

    #[test]
    fn eigenspace_dims_survive_conjugation(ka in 0i64..4, kb in 0i64..4) {
        let g = alg('A', 2);
        let s = make_diagram_aut(&g, &[1, 0]).unwrap();
        let tau = make_torus_aut(&g, &[CycScalar::root_of_unity(4, ka), CycScalar::root_of_unity(4, kb)]).unwrap();
        let conj = FiniteOrderAut::from_matrix(tau.matrix.mul(&s.matrix).mul(&tau.inverse().matrix), "conjugate").unwrap();
        prop_assert!(conj.is_automorphism(&g));
        let group = validate_tuple(std::slice::from_ref(&conj), &[2]).unwrap();
        let dec = eigenspace_decompose(g, vec![conj], group).unwrap();
        prop_assert_eq!(dims(&dec), vec![3, 5]);
    }

    #[test]
    fn characters_multiply(a in 0i64..2, b in 0i64..2, c in 0i64..2, d in 0i64..2) {
        let g = alg('A', 3);
        let s = make_diagram_aut(&g, &[2, 1, 0]).unwrap();
        let t = make_torus_aut(&g, &[CycScalar::one(), CycScalar::from_int(-1), CycScalar::one()]).unwrap();
        let group = validate_tuple(&[s.clone(), t.clone()], &[2, 2]).unwrap();
        let dec = eigenspace_decompose(g, vec![s, t], group).unwrap();
        let x = dec.character_aut(&Character::Exponents(vec![a, b])).unwrap();
        let y = dec.character_aut(&Character::Exponents(vec![c, d])).unwrap();
        let xy = dec.character_aut(&Character::Exponents(vec![a + c, b + d])).unwrap();
        prop_assert_eq!(x.matrix.mul(&y.matrix), xy.matrix);
    }
}
