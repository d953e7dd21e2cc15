//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Criterion 10 (CLI end-to-end) lives in the CLI crate's
//! integration tests.

mod common;

use std::time::Instant;

use common::*;
use qlogic_core::linalg::{self, Complex64, ComplexMatrix, C_ONE, C_ZERO};
use qlogic_core::projlattice;
use qlogic_core::spectral::Observable;
use qlogic_core::{jointdist, measurement, opalgebra, proplang, spectral, truth, TolerancePolicy};
use rand::Rng;

fn tol() -> TolerancePolicy {
    TolerancePolicy::default()
}

fn report(n: u32, name: &str, ok: bool) {
    println!(
        "criterion {n} ({name}): {}",
        if ok { "pass" } else { "fail" }
    );
    assert!(ok, "criterion {n} ({name}) failed");
}

#[test]
fn criterion_01_orthomodular_law() {
    let t = tol();
    let mut r = rng(1001);
    let start = Instant::now();
    let mut ok = true;
    for i in 0..500 {
        let dim = 2 + i % 5;
        let p = random_projection(&mut r, dim, &t);
        let q = projlattice::join(&p, &random_projection(&mut r, dim, &t), &t).unwrap();
        let back = projlattice::join(
            &p,
            &projlattice::meet(&projlattice::ortho(&p), &q, &t).unwrap(),
            &t,
        )
        .unwrap();
        let diff = back.matrix().sub(q.matrix()).max_abs();
        if diff > 1e-8 {
            eprintln!("  OM violation at pair {i}, dim {dim}: {diff:e}");
            ok = false;
        }
    }
    ok &= start.elapsed().as_secs_f64() < 10.0;
    report(1, "orthomodular law, 500 pairs", ok);
}

#[test]
fn criterion_02_two_projection_commutator() {
    let t = tol();
    let mut r = rng(1002);
    let start = Instant::now();
    let mut ok = true;
    for i in 0..500 {
        let dim = 2 + i % 5;
        let p = random_projection(&mut r, dim, &t);
        let q = random_projection(&mut r, dim, &t);
        let m = projlattice::marsden_com(&p, &q, &t).unwrap();
        let k = linalg::kernel_projector(&[p.matrix().commutator(q.matrix())], dim, &t).unwrap();
        let diff = m.matrix().sub(&k).max_abs();
        if diff > 1e-8 {
            eprintln!("  marsden/kernel mismatch at pair {i}, dim {dim}: {diff:e}");
            ok = false;
        }
    }
    ok &= start.elapsed().as_secs_f64() < 10.0;
    report(2, "marsden com = commutator kernel, 500 pairs", ok);
}

#[test]
fn criterion_03_born_formula_oracle() {
    let t = tol();
    let mut r = rng(1003);
    let mut ok = true;
    for i in 0..100 {
        let dim = r.gen_range(2..=6);
        let n = r.gen_range(1..=3);
        let (obs, diags, u) = random_commuting_family_with_basis(&mut r, dim, n, &t);
        let rho = random_density(&mut r, dim);
        let cutoffs: Vec<f64> = (0..n)
            .map(|_| r.gen_range(-2i32..=2) as f64 + 0.5)
            .collect();

        // Classical diagonal model: p_k = <u_k|rho|u_k> over the common
        // eigenbasis, joint CDF from the diagonal values.
        let mut cdf = 0.0f64;
        for k in 0..dim {
            let col: Vec<Complex64> = (0..dim).map(|row| u.get(row, k)).collect();
            let pk = rho
                .matvec(&col)
                .iter()
                .zip(&col)
                .map(|(a, b)| (b.conj() * a).re)
                .sum::<f64>();
            if diags.iter().zip(&cutoffs).all(|(d, &c)| d[k] <= c) {
                cdf += pk;
            }
        }

        let mut model = truth::Model::new(dim, t).unwrap();
        let mut terms = Vec::new();
        for (j, (o, &c)) in obs.iter().zip(&cutoffs).enumerate() {
            model.add_observable(&format!("X{j}"), o.clone()).unwrap();
            terms.push(format!("X{j} <= {c}"));
        }
        model.add_state("rho", rho).unwrap();
        let ast = proplang::parse(&terms.join(" & ")).unwrap();
        let p = truth::probability(&ast, &model, "rho").unwrap();
        if (p - cdf).abs() > 1e-10 {
            eprintln!("  Born mismatch at family {i}: {p} vs {cdf}");
            ok = false;
        }
    }
    report(3, "Born formula vs classical joint CDF, 100 families", ok);
}

#[test]
fn criterion_04_jd_and_qe_equalities() {
    let t = tol();
    let mut r = rng(1004);
    let mut ok = true;
    for i in 0..200 {
        let dim = r.gen_range(2..=5);
        let n = r.gen_range(2..=3);
        let xs: Vec<Observable> = (0..n).map(|_| random_observable(&mut r, dim, &t)).collect();
        let refs: Vec<&Observable> = xs.iter().collect();
        let sup = truth::finite_joint_sup(&refs, &t).unwrap();
        let com = truth::joint_projection(&refs, &t).unwrap();
        if sup.matrix().sub(com.matrix()).max_abs() > 1e-8 {
            eprintln!("  (JD) mismatch at tuple {i}, dim {dim}");
            ok = false;
        }
        let esup = truth::finite_equality_sup(&xs[0], &xs[1], &t).unwrap();
        let eq = truth::equality_projection(&xs[0], &xs[1], &t).unwrap();
        if esup.matrix().sub(eq.matrix()).max_abs() > 1e-8 {
            eprintln!("  (QE) mismatch at pair {i}, dim {dim}");
            ok = false;
        }
    }

    // Block example: A = diag(1,2,3), B swaps the first two coordinates and
    // scales the third; the common classical part is the third axis.
    let a = ComplexMatrix::diag(&[1.0, 2.0, 3.0]);
    let b = ComplexMatrix::from_entries(
        3,
        vec![
            C_ZERO,
            C_ONE,
            C_ZERO,
            C_ONE,
            C_ZERO,
            C_ZERO,
            C_ZERO,
            C_ZERO,
            Complex64::new(5.0, 0.0),
        ],
    )
    .unwrap();
    let com = opalgebra::set_commutator(&[a, b], 3, &t).unwrap();
    ok &= com
        .matrix()
        .sub(&ComplexMatrix::diag(&[0.0, 0.0, 1.0]))
        .max_abs()
        <= 1e-8;
    report(4, "Eq. (JD) and Eq. (QE), 200 tuples + block example", ok);
}

#[test]
fn criterion_05_equivalence_relation_suite() {
    let t = tol();
    let mut r = rng(1005);
    let mut ok = true;
    for i in 0..200 {
        let dim = r.gen_range(2..=4);
        let x = random_observable(&mut r, dim, &t);
        let y = random_observable(&mut r, dim, &t);
        let z = random_observable(&mut r, dim, &t);

        let refl = truth::equality_projection(&x, &x, &t).unwrap();
        let xy = truth::equality_projection(&x, &y, &t).unwrap();
        let yx = truth::equality_projection(&y, &x, &t).unwrap();
        let yz = truth::equality_projection(&y, &z, &t).unwrap();
        let xz = truth::equality_projection(&x, &z, &t).unwrap();
        let chain = projlattice::meet(&xy, &yz, &t).unwrap();
        let com = truth::joint_projection(&[&x, &y], &t).unwrap();

        let here = refl.is_identity(&t)
            && xy.matrix().sub(yx.matrix()).max_abs() <= 1e-8
            && projlattice::leq(&chain, &xz, &t).unwrap()
            && projlattice::leq(&xy, &com, &t).unwrap();
        if !here {
            eprintln!("  equivalence-relation failure at triple {i}, dim {dim}");
            ok = false;
        }
    }
    report(
        5,
        "equality equivalence relation + eq <= com, 200 triples",
        ok,
    );
}

fn random_polynomial(r: &mut rand_chacha::ChaCha8Rng, nvars: usize) -> jointdist::Polynomial {
    let terms = (0..r.gen_range(1..=4))
        .map(|_| {
            let coeff = r.gen::<f64>() * 2.0 - 1.0;
            let mut exps = vec![0u32; nvars];
            let mut degree_left = 3;
            for e in exps.iter_mut() {
                let d = r.gen_range(0..=degree_left);
                *e = d;
                degree_left -= d;
            }
            (coeff, exps)
        })
        .collect();
    jointdist::Polynomial { terms }
}

#[test]
fn criterion_06_jpd_theorem() {
    let t = tol();
    let mut r = rng(1006);
    let mut ok = true;
    for i in 0..100 {
        let dim = r.gen_range(2..=4);
        let (x, y) = if i % 2 == 0 {
            let (obs, _) = random_commuting_family(&mut r, dim, 2, &t);
            (obs[0].clone(), obs[1].clone())
        } else {
            (
                random_observable(&mut r, dim, &t),
                random_observable(&mut r, dim, &t),
            )
        };
        let rho = random_density(&mut r, dim);
        let exists = jointdist::jpd_exists(&[&x, &y], &rho, &t).unwrap();

        // Brute-force criterion: all pairwise commutators of the generated
        // algebra annihilate the state.
        let alg = opalgebra::generated_algebra(&[x.matrix().clone(), y.matrix().clone()], dim, &t)
            .unwrap();
        let mut max_comm = 0.0f64;
        for a in alg.basis() {
            for b in alg.basis() {
                max_comm = max_comm.max(a.commutator(b).mul(&rho).max_abs());
            }
        }
        if exists != (max_comm <= 1e-8) {
            eprintln!("  existence mismatch at instance {i}: {exists} vs {max_comm:e}");
            ok = false;
            continue;
        }
        if !exists {
            continue;
        }

        let named = [("X", &x), ("Y", &y)];
        let dist = jointdist::jpd(&named, &rho, &t).unwrap();
        for (axis, obs) in [&x, &y].iter().enumerate() {
            for (v, mass) in dist.marginal(axis) {
                let born = spectral::eigen_atom(obs, v).matrix().mul(&rho).trace().re;
                if (mass - born).abs() > 1e-10 {
                    eprintln!("  marginal mismatch at instance {i}, axis {axis}, value {v}");
                    ok = false;
                }
            }
        }
        let id = |v: f64| v;
        for _ in 0..5 {
            let poly = random_polynomial(&mut r, 2);
            let (lhs, rhs) = jointdist::moment_check(&named, &rho, &[&id, &id], &poly, &t).unwrap();
            if (lhs - rhs).abs() > 1e-8 {
                eprintln!("  moment mismatch at instance {i}: {lhs} vs {rhs}");
                ok = false;
            }
        }
    }
    report(
        6,
        "JPD existence theorem + marginals + moments, 100 instances",
        ok,
    );
}

#[test]
fn criterion_07_identity_theorem() {
    let t = tol();
    let mut r = rng(1007);
    let z = ComplexMatrix::diag(&[1.0, -1.0]);
    let i2 = ComplexMatrix::identity(2);
    let zi = Observable::new(linalg::tensor_product(&z, &i2), &t).unwrap();
    let iz = Observable::new(linalg::tensor_product(&i2, &z), &t).unwrap();

    let inv = 1.0 / 2.0f64.sqrt();
    let bell_vec = [
        Complex64::new(inv, 0.0),
        C_ZERO,
        C_ZERO,
        Complex64::new(inv, 0.0),
    ];
    let bell = ComplexMatrix::outer(&bell_vec, &bell_vec);
    let e01 = ComplexMatrix::diag(&[0.0, 1.0, 0.0, 0.0]);

    let eq = truth::equality_projection(&zi, &iz, &t).unwrap();
    let pr_bell = eq.matrix().mul(&bell).trace().re;
    let dm_bell = jointdist::diagonal_mass(("ZI", &zi), ("IZ", &iz), &bell, &t).unwrap();
    let pr_e01 = eq.matrix().mul(&e01).trace().re;
    let dm_e01 = jointdist::diagonal_mass(("ZI", &zi), ("IZ", &iz), &e01, &t).unwrap();
    let mut ok = (pr_bell - 1.0).abs() <= 1e-10
        && (dm_bell - 1.0).abs() <= 1e-10
        && pr_e01.abs() <= 1e-10
        && dm_e01.abs() <= 1e-10;

    for i in 0..50 {
        let rho = random_density(&mut r, 4);
        if !jointdist::jpd_exists(&[&zi, &iz], &rho, &t).unwrap() {
            continue;
        }
        let pr = eq.matrix().mul(&rho).trace().re;
        let dm = jointdist::diagonal_mass(("ZI", &zi), ("IZ", &iz), &rho, &t).unwrap();
        if (pr - dm).abs() > 1e-8 {
            eprintln!("  identity-theorem mismatch at state {i}: {pr} vs {dm}");
            ok = false;
        }
    }
    report(7, "identity theorem on Z⊗I / I⊗Z family", ok);
}

#[test]
fn criterion_08_measurement_equivalence() {
    let t = tol();
    let mut r = rng(1008);
    let mut ok = true;
    for i in 0..50 {
        let sys = r.gen_range(2..=3);
        let probe = r.gen_range(2..=3);
        let mp = measurement::MeasuringProcess::new(
            sys,
            probe,
            random_density(&mut r, probe),
            random_unitary(&mut r, sys * probe),
            random_observable(&mut r, probe, &t).matrix().clone(),
            &t,
        )
        .unwrap();
        let a = random_observable(&mut r, sys, &t);
        let rho = random_density(&mut r, sys);
        let rep = measurement::equivalence_suite(&mp, &a, &rho, &t).unwrap();
        if !rep.consistent() {
            eprintln!("  equivalence disagreement at process {i}: {rep:?}");
            ok = false;
        }
    }

    // CNOT reading the probe in |0>: POVM is the spectral family of Z.
    let mut u = ComplexMatrix::zeros(4);
    u.set(0, 0, C_ONE);
    u.set(1, 1, C_ONE);
    u.set(2, 3, C_ONE);
    u.set(3, 2, C_ONE);
    let cnot = measurement::MeasuringProcess::new(
        2,
        2,
        ComplexMatrix::diag(&[1.0, 0.0]),
        u,
        ComplexMatrix::diag(&[1.0, -1.0]),
        &t,
    )
    .unwrap();
    let pi = measurement::povm(&cnot, &t).unwrap();
    ok &= pi.at(0.0).sub(&ComplexMatrix::diag(&[0.0, 1.0])).max_abs() <= 1e-10;
    let z = Observable::new(ComplexMatrix::diag(&[1.0, -1.0]), &t).unwrap();
    let x = Observable::new(
        ComplexMatrix::from_entries(2, vec![C_ZERO, C_ONE, C_ONE, C_ZERO]).unwrap(),
        &t,
    )
    .unwrap();
    ok &= measurement::measures_everywhere_iff(&cnot, &z, &t).unwrap();
    ok &= !measurement::measures_everywhere_iff(&cnot, &x, &t).unwrap();
    report(8, "measurement equivalence, 50 processes + CNOT", ok);
}

#[test]
fn criterion_09_transfer_principle() {
    let t = tol();
    let mut r = rng(1009);
    // 20 classical tautology skeletons over up to three atoms {0},{1},{2}.
    let skeletons = [
        "{0} | !({0})",
        "!({0} & !({0}))",
        "!({0}) | {0}",
        "!({0} & {1}) | {0}",
        "!({0} & {1}) | {1}",
        "!({0}) | ({0} | {1})",
        "!({1}) | ({0} | {1})",
        "!({0} & ({1} | {2})) | (({0} & {1}) | ({0} & {2}))",
        "!(({0} & {1}) | ({0} & {2})) | ({0} & ({1} | {2}))",
        "!(!(!({0}))) | {0}",
        "!({0} | {1}) | ({1} | {0})",
        "!({0} & {1}) | ({1} & {0})",
        "!({0}) | !({1}) | ({0} & {1})",
        "!({0} & {1} & {2}) | {2}",
        "{0} | {1} | !({0})",
        "!({0} | ({1} | {2})) | (({0} | {1}) | {2})",
        "!(({0} | {1}) | {2}) | ({0} | ({1} | {2}))",
        "!({0} & !({1})) | {0}",
        "({0} & {1}) | !({0}) | !({1})",
        "!({0} | {1}) | {0} | {1}",
    ];
    let mut ok = true;
    for commuting in [true, false] {
        let dim = 4;
        let obs: Vec<Observable> = if commuting {
            random_commuting_family(&mut r, dim, 3, &t).0
        } else {
            (0..3).map(|_| random_observable(&mut r, dim, &t)).collect()
        };
        let mut model = truth::Model::new(dim, t).unwrap();
        for (j, o) in obs.iter().enumerate() {
            model.add_observable(&format!("A{j}"), o.clone()).unwrap();
        }
        let atoms = ["A0 <= 0.5", "A1 <= -0.5", "A2 <= 1.5"];
        for (i, skel) in skeletons.iter().enumerate() {
            let text = skel
                .replace("{0}", atoms[0])
                .replace("{1}", atoms[1])
                .replace("{2}", atoms[2]);
            let ast = proplang::parse(&text).unwrap();
            match truth::transfer_check(&ast, &model) {
                Ok(true) => {}
                other => {
                    eprintln!(
                        "  transfer failure at skeleton {i} (commuting={commuting}): {other:?}"
                    );
                    ok = false;
                }
            }
        }
    }
    report(9, "transfer principle, 20 tautology skeletons", ok);
}
