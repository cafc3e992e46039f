//! Acceptance battery: one test per criterion, each printing a single
//! pass/FAIL line.  All comparisons are exact symbolic equalities (tolerance
//! zero).  Criteria that pin source values which the exact computation
//! contradicts are asserted as stated and fail honestly; their output lines
//! carry the computed values for comparison.

use qgroups::dbos::{
    a1_spin32_claimed_entries, b3_claimed_entries, binomial_coefficient, cartan_extract,
    covector_quantum_plane_check, lfunctional_check, make_rprime, normalization_lambda,
    qexp_coefficient, relation_report, ClaimedEntry, Gen,
};
use qgroups::frt::{antipode_identities, frt_condition, identity_suite, pairing_chain_check};
use qgroups::minpoly::{b3_default_probe_rows, minpoly_generic, minpoly_probe};
use qgroups::qfield::{qint, rat_frac, rat_int, CoeffElem, FracElem};
use qgroups::repmod::{builtin_a1_spin32, builtin_a1_vector, builtin_b3_spin};
use qgroups::rmatrix::{
    a1_root_vector_specs, b3_root_vector_specs, b3_root_vector_specs_alt_fside, build_rvv,
    build_rvv_lenient, symmetry_witness, RMatrixBundle,
};
use qgroups::serial;
use qgroups::tensor::{permutation, qybe_residual, TensorMatrix};

fn qp(k: i64) -> CoeffElem {
    CoeffElem::monomial_v(k)
}

fn b3() -> RMatrixBundle {
    build_rvv(&builtin_b3_spin(), &b3_root_vector_specs()).unwrap()
}

fn spin32() -> RMatrixBundle {
    let m = builtin_a1_spin32();
    let s = a1_root_vector_specs(&m);
    build_rvv(&m, &s).unwrap()
}

fn vector() -> RMatrixBundle {
    let m = builtin_a1_vector();
    let s = a1_root_vector_specs(&m);
    build_rvv(&m, &s).unwrap()
}

fn pair_for(b: &RMatrixBundle, target: i64) -> qgroups::dbos::RPrimePair {
    let n = b.module.dim;
    let lambda =
        normalization_lambda(&b.module.weight_pairing(n, n), &rat_int(target)).unwrap();
    let mp = minpoly_generic(&b.braiding());
    make_rprime(&b.r_paper, &mp, &(-lambda)).unwrap()
}

#[test]
fn acceptance_01_qybe() {
    for (name, b) in [("b3-spin", b3()), ("a1-spin32", spin32()), ("a1-vector", vector())] {
        assert!(
            qybe_residual(&b.r_paper).unwrap().is_zero(),
            "criterion 1 (qybe): FAIL at {name}"
        );
    }
    println!("criterion 1 (qybe): pass — all three R-matrices satisfy R12R13R23 = R23R13R12");
}

#[test]
fn acceptance_02_golden_entries() {
    let b = b3();
    // source values: R^{53}_{71} = -q^{-1}(q^{1/2}-q^{-1/2})q^{-1/4},
    //                R^{17}_{35} = -q(q^{1/2}-q^{-1/2})q^{-1/4}
    let diff = qp(2) - qp(-2); // q^{1/2} - q^{-1/2}
    let want_53 = &(&-qp(-4) * &diff) * &qp(-1);
    let want_17 = &(&-qp(4) * &diff) * &qp(-1);
    let got_53 = b.r_paper.get(5, 3, 7, 1);
    let got_17 = b.r_paper.get(1, 7, 3, 5);
    let ok = got_53 == want_53 && got_17 == want_17;
    println!(
        "criterion 2 (golden entries): {} — computed R^{{53}}_{{71}} = {got_53}, R^{{17}}_{{35}} = {got_17}; \
         stated -q^{{-5/4}}(q^{{1/2}}-q^{{-1/2}}) and -q^{{3/4}}(q^{{1/2}}-q^{{-1/2}}); the two \
         positions are forced equal by the shared raising-path data, so the stated unequal pair \
         cannot occur in any matrix of this product form",
        if ok { "pass" } else { "FAIL" }
    );
    assert_eq!(got_53, want_53, "criterion 2: R^{{53}}_{{71}} differs from the stated value");
    assert_eq!(got_17, want_17, "criterion 2: R^{{17}}_{{35}} differs from the stated value");
}

#[test]
fn acceptance_03_spin32_golden_matrix() {
    let b = spin32();
    let fc = FracElem::from_coeff;
    let c = qexp_coefficient;
    let r3 = fc(CoeffElem::r3());
    let two = fc(qint(2));
    let three = fc(qint(3));
    let qpf = |k: i64| fc(qp(k));
    let mut golden = TensorMatrix::zero(4);
    let diag: [i64; 16] = [18, 6, -6, -18, 6, 2, -2, -6, -6, -2, 2, 6, -18, -6, 6, 18];
    for f in 0..16usize {
        let (i, k) = (f / 4 + 1, f % 4 + 1);
        golden.set(i, k, i, k, qp(diag[f]));
    }
    // the fourteen printed off-diagonal entries, 1-based 16x16 flat positions
    let off: Vec<(usize, usize, FracElem)> = vec![
        (2, 5, &(&c(1) * &three) * &qpf(6)),
        (3, 6, &(&(&c(1) * &r3) * &two) * &qpf(-2)),
        (3, 9, &(&(&c(2) * &three) * &(&two * &two)) * &qpf(-6)),
        (4, 7, &(&c(1) * &three) * &qpf(-10)),
        (4, 10, &(&(&c(2) * &three) * &(&two * &two)) * &qpf(-10)),
        (4, 13, &(&(&c(3) * &(&three * &three)) * &(&two * &two)) * &qpf(-18)),
        (6, 9, &(&(&c(1) * &r3) * &two) * &qpf(-2)),
        (7, 10, &(&c(1) * &(&two * &two)) * &qpf(-2)),
        (7, 13, &(&(&c(2) * &three) * &(&two * &two)) * &qpf(-10)),
        (8, 11, &(&(&c(1) * &r3) * &two) * &qpf(-2)),
        (8, 14, &(&(&c(2) * &three) * &(&two * &two)) * &qpf(-6)),
        (10, 13, &(&c(1) * &three) * &qpf(-10)),
        (11, 14, &(&(&c(1) * &r3) * &two) * &qpf(-2)),
        (12, 15, &(&c(1) * &three) * &qpf(6)),
    ];
    for (r, cc, vf) in off {
        let (i, k) = ((r - 1) / 4 + 1, (r - 1) % 4 + 1);
        let (j, l) = ((cc - 1) / 4 + 1, (cc - 1) % 4 + 1);
        golden.set(i, k, j, l, vf.as_coeff().expect("printed entry is polynomial"));
    }
    assert_eq!(b.r_paper, golden, "criterion 3: built 16x16 differs from the printed matrix");
    println!("criterion 3 (spin-3/2 golden matrix): pass — all 256 entries match");
}

#[test]
fn acceptance_04_symmetry() {
    let b = b3();
    assert!(symmetry_witness(&b.braiding()).is_none(), "criterion 4: b3 braiding not symmetric");
    let g = spin32();
    assert!(
        symmetry_witness(&g.braiding()).is_none(),
        "criterion 4: spin-3/2 braiding not symmetric"
    );
    let alt = build_rvv_lenient(&builtin_b3_spin(), &b3_root_vector_specs_alt_fside()).unwrap();
    let br = alt.braiding();
    let witness = symmetry_witness(&br);
    let at_stated_pair = br.get(3, 5, 7, 1) != br.get(7, 1, 3, 5);
    println!(
        "criterion 4 (symmetry): {} — both braidings symmetric; alternative lowering vectors \
         break symmetry (first witness {witness:?}), but the entries at the stated pair \
         ((35),(71)) remain equal ({} = {}); the asymmetry appears at ((32),(41)) instead",
        if at_stated_pair { "pass" } else { "FAIL" },
        br.get(3, 5, 7, 1),
        br.get(7, 1, 3, 5),
    );
    assert!(witness.is_some(), "criterion 4: alternative build unexpectedly symmetric");
    assert!(
        at_stated_pair,
        "criterion 4: asymmetry not reproduced at the stated entry pair ((35),(71))"
    );
}

#[test]
fn acceptance_05_minimal_polynomial() {
    let b = b3();
    let braid = b.braiding();
    let mp = minpoly_generic(&braid);
    // stated roots {q^{3/4}, -q^{-1/4}, -q^{-9/4}, -q^{-21/4}} and
    // Delta_4 = -q^{-7}
    let stated = vec![qp(3), -qp(-1), -qp(-9), -qp(-21)];
    let computed = mp.eigenvalues.clone();
    let d4 = mp.elementary_symmetric[3].as_coeff().unwrap();
    // probe route agrees with generic elimination on all three bundles
    for (bundle, rows, deg) in [
        (b3(), b3_default_probe_rows(), 4usize),
        (spin32(), vec![(1, 1), (1, 2), (1, 3), (1, 4), (2, 3)], 4),
        (vector(), vec![(1, 1), (1, 2), (2, 1)], 2),
    ] {
        let br = bundle.braiding();
        let gen = minpoly_generic(&br);
        let probe = minpoly_probe(&br, gen.degree, &rows).unwrap_or_else(|_| {
            minpoly_probe(&br, deg, &[(1, 1), (1, 2), (2, 1), (2, 2)]).unwrap()
        });
        assert_eq!(gen.coefficients, probe.coefficients, "criterion 5: probe != generic");
    }
    let ok = computed == stated && d4 == -qp(-28);
    println!(
        "criterion 5 (minimal polynomial): {} — computed roots {}; computed Delta_4 = {d4}; the \
         stated fourth root -q^{{-21/4}} and Delta_4 = -q^{{-7}} have the wrong sign (the q=1 \
         flip-trace forces signs (+,-,-,+)); probe and generic routes agree on all bundles",
        if ok { "pass" } else { "FAIL" },
        computed.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(", "),
    );
    assert_eq!(computed, stated, "criterion 5: eigenvalues differ from the stated list");
    assert_eq!(d4, -qp(-28), "criterion 5: Delta_4 differs from the stated value");
}

#[test]
fn acceptance_06_normalization() {
    let b = b3();
    let pair_b = pair_for(&b, 1);
    assert_eq!(pair_b.lambda, qp(-1), "criterion 6: rank-3 lambda != q^{{-1/4}}");
    let g = spin32();
    let pair_g = pair_for(&g, 6);
    assert_eq!(pair_g.lambda, qp(-6), "criterion 6: rank-1 lambda != q^{{-3/2}}");
    for p in [&pair_b, &pair_g] {
        assert_eq!(
            p.eigenvalues_normalized[p.normalized_index],
            -CoeffElem::one(),
            "criterion 6: normalized eigenvalue is not -1"
        );
    }
    println!(
        "criterion 6 (normalization): pass — lambda = q^{{-1/4}} and q^{{-3/2}}, normalized \
         braiding eigenvalue -1 in both cases"
    );
}

#[test]
fn acceptance_07_pair_and_expansion() {
    // make_rprime verifies (PR+1)(PR'-1) = 0 and both mixed three-leg
    // relations internally; reaching this point certifies them.
    let b = b3();
    let pair_b = pair_for(&b, 1);
    let g = spin32();
    let pair_g = pair_for(&g, 6);
    assert_eq!(
        binomial_coefficient(&pair_b.rprime, 8, 7).unwrap(),
        qp(2),
        "criterion 7: e8 e7 != q^{{1/2}} e7 e8"
    );
    assert_eq!(
        binomial_coefficient(&pair_g.rprime, 4, 3).unwrap(),
        qp(12),
        "criterion 7: e4 e3 != q^{{3}} e3 e4"
    );
    // stated expansion: R' = R RH^2 + (q^{-2}-q+q^{-5}) R RH
    //                      + (q^{-7}-q^{-4}-q^{-1}) R - (q^{-6}-1) P
    let p = permutation(8);
    let rh = p.mul(&pair_b.r).unwrap();
    let rrh = pair_b.r.mul(&rh).unwrap();
    let stated = rrh
        .mul(&rh)
        .unwrap()
        .add(&rrh.scale(&(qp(-8) - qp(4) + qp(-20))))
        .unwrap()
        .add(&pair_b.r.scale(&(qp(-28) - qp(-16) - qp(-4))))
        .unwrap()
        .add(&p.scale(&-(qp(-24) - CoeffElem::one())))
        .unwrap();
    let ok = stated == pair_b.rprime;
    println!(
        "criterion 7 (R,R' pair): {} — annihilation and mixed relations hold and both binomial \
         rows match; the stated expansion coefficients inherit the fourth-root sign error \
         (correct: -q+q^{{-2}}-q^{{-5}}, -q^{{-1}}+q^{{-4}}-q^{{-7}}, 1+q^{{-6}}), so the \
         product form does not equal the stated expanded formula",
        if ok { "pass" } else { "FAIL" }
    );
    assert_eq!(stated, pair_b.rprime, "criterion 7: stated expansion differs from the product");
}

#[test]
fn acceptance_08_frt_suite() {
    for (name, b) in [("b3-spin", b3()), ("a1-spin32", spin32()), ("a1-vector", vector())] {
        let r = &b.r_paper;
        let consts = frt_condition(r).unwrap_or_else(|e| panic!("criterion 8: {name}: {e}"));
        assert!(!consts.is_empty());
        let suite = identity_suite(r).unwrap();
        assert!(suite.all_pass(), "criterion 8: identity suite fails for {name}");
        assert!(pairing_chain_check(r).unwrap().pass, "criterion 8: pairing chain {name}");
        assert!(antipode_identities(r).unwrap().all_pass(), "criterion 8: antipode {name}");
        // invertibility of the four partial transposes
        for m in [
            r.transpose_t1(),
            r.transpose_t2(),
            r.invert().unwrap().transpose_t1(),
            r.invert().unwrap().transpose_t2(),
        ] {
            m.invert().unwrap_or_else(|e| panic!("criterion 8: transpose not invertible: {e}"));
        }
    }
    println!(
        "criterion 8 (FRT suite): pass — dual-basis constants, the ten-identity battery (one \
         identity in the index placement that holds for every tested R), weak antipodes, and \
         partial-transpose invertibility on all three bundles"
    );
}

/// The stated generator tables: the verified tables with each entry divided
/// by its measured correction ratio.
fn stated_tables(
    g2: bool,
) -> (Vec<ClaimedEntry>, Vec<ClaimedEntry>) {
    let fc = FracElem::from_coeff;
    if !g2 {
        let (plus, mut minus) = b3_claimed_entries();
        // as stated, the lowering off-diagonals carry an extra factor q
        for e in minus.iter_mut() {
            if e.row != e.col {
                e.coeff = &e.coeff * &fc(CoeffElem::q_pow(1));
            }
        }
        (plus, minus)
    } else {
        let (mut plus, mut minus) = a1_spin32_claimed_entries();
        let two = fc(qint(2));
        // measured ratios computed/stated per off-diagonal entry
        let ratio = |row: usize, col: usize| -> FracElem {
            let m = |k: i64| fc(-CoeffElem::q_pow(k));
            match (row, col) {
                (1, 2) => m(-1),
                (1, 3) => &m(2) * &two,
                (1, 4) => m(9),
                (2, 3) => m(1),
                (2, 4) => m(6),
                (3, 4) => m(3),
                (2, 1) => m(3),
                (3, 1) => fc(CoeffElem::q_pow(6)),
                (3, 2) => m(2),
                (4, 1) => m(3),
                (4, 2) => two.clone(),
                (4, 3) => fc(-CoeffElem::one()),
                _ => FracElem::one(),
            }
        };
        for e in plus.iter_mut().chain(minus.iter_mut()) {
            if e.row != e.col {
                e.coeff = &e.coeff * &ratio(e.row, e.col).inv();
                if (e.row, e.col) == (4, 2) {
                    // the stated word has K^{1/2} where the computation
                    // requires K^{3/2}
                    e.word[0] = Gen::K(1, rat_frac(1, 2));
                }
            }
        }
        (plus, minus)
    }
}

#[test]
fn acceptance_09_l_functionals() {
    // the verified (corrected) tables match the leg-sliced computation
    let b = b3();
    let (vp, vm) = b3_claimed_entries();
    lfunctional_check(&b, &vp, &vm).unwrap();
    qgroups::dbos::diagonal_weight_check(&b).unwrap();
    let g = spin32();
    let (vp, vm) = a1_spin32_claimed_entries();
    lfunctional_check(&g, &vp, &vm).unwrap();
    qgroups::dbos::diagonal_weight_check(&g).unwrap();

    // the stated tables do not
    let (sp, sm) = stated_tables(false);
    let b3_mismatch = lfunctional_check(&b, &sp, &sm).err();
    let (sp, sm) = stated_tables(true);
    let g2_mismatch = lfunctional_check(&g, &sp, &sm).err();
    let ok = b3_mismatch.is_none() && g2_mismatch.is_none();
    println!(
        "criterion 9 (L-functionals): {} — diagonals equal the weight monomials and the \
         corrected tables match the leg-sliced computation exactly, but the stated tables do \
         not: rank-3 lowering entries carry a spurious factor q at {:?}; rank-1 entries \
         mismatch at {:?} (corrected coefficients are the canonical q-exponential values \
         c_n(q_beta) times the module matrix elements)",
        if ok { "pass" } else { "FAIL" },
        b3_mismatch.clone().unwrap_or_default(),
        g2_mismatch.clone().unwrap_or_default(),
    );
    assert!(
        ok,
        "criterion 9: stated generator tables mismatch the computation at {:?} / {:?}",
        b3_mismatch.unwrap_or_default(),
        g2_mismatch.unwrap_or_default()
    );
}

#[test]
fn acceptance_10_cartan_matrices() {
    let b = b3();
    let rep = cartan_extract(&b, &qp(-1), 8, &rat_int(1)).unwrap();
    assert_eq!(
        rep.cartan_matrix,
        vec![
            vec![2, -1, 0, 0],
            vec![-1, 2, -2, 0],
            vec![0, -1, 2, -1],
            vec![0, 0, -1, 2],
        ],
        "criterion 10: rank-4 Cartan matrix"
    );
    let g = spin32();
    let pair_g = pair_for(&g, 6);
    let repg = relation_report(&g, &pair_g, 4, &rat_int(6)).unwrap();
    assert_eq!(
        repg.cartan_matrix,
        vec![vec![2, -3], vec![-1, 2]],
        "criterion 10: rank-2 Cartan matrix"
    );
    let pair_b = pair_for(&b, 1);
    let repb = relation_report(&b, &pair_b, 8, &rat_int(1)).unwrap();
    let jb = repb.relations.join("\n");
    assert!(jb.contains("e^8 K_3 = q^{-1/2} K_3 e^8"), "criterion 10: rank-4 scalar");
    let jg = repg.relations.join("\n");
    assert!(jg.contains("e^4 K_1 = q^{-3} K_1 e^4"), "criterion 10: rank-2 scalar");
    let v = vector();
    let pair_v = pair_for(&v, 2);
    let repv = relation_report(&v, &pair_v, 2, &rat_int(2)).unwrap();
    assert_eq!(
        repv.cartan_matrix,
        vec![vec![2, -1], vec![-1, 2]],
        "criterion 10: sanity-case Cartan matrix"
    );
    println!(
        "criterion 10 (Cartan matrices): pass — the two target matrices, the intermediate \
         commutation scalars, and the rank-2 sanity case all match"
    );
}

#[test]
fn acceptance_11_covector_consistency() {
    let g = spin32();
    let pair = pair_for(&g, 6);
    // as stated: bare monomials f_i = x^{i-1} y^{3-(i-1)} with yx = qxy give
    // per-pair scalar identities q^{(4-i)(j-1)} = sum R'^{ab}_{ij} q^{(4-b)(a-1)}
    let mut first_fail = None;
    'outer: for i in 1..=4usize {
        for j in 1..=4usize {
            let lhs = qp(4 * ((4 - i) as i64) * ((j - 1) as i64));
            let mut rhs = CoeffElem::zero();
            for a in 1..=4usize {
                for b in 1..=4usize {
                    let v = pair.rprime.get(a, b, i, j);
                    if !v.is_zero() {
                        rhs = rhs + &v * &qp(4 * ((4 - b) as i64) * ((a - 1) as i64));
                    }
                }
            }
            if lhs != rhs {
                first_fail = Some((i, j));
                break 'outer;
            }
        }
    }
    // the identification that does close: opposite plane orientation plus
    // normalizations (1, 1, q/[3]^{1/2}, q^3/[3]^{3/2})
    let norm = covector_quantum_plane_check(&pair.rprime).unwrap();
    assert_eq!(norm[2], FracElem::new(&CoeffElem::r3() * &qp(4), qint(3)));
    assert_eq!(norm[3], FracElem::new(&CoeffElem::r3() * &qp(12), &qint(3) * &qint(3)));
    println!(
        "criterion 11 (co-vector consistency): {} — the bare identification fails first at \
         (i,j) = {first_fail:?}; the relations do close under the opposite plane orientation \
         xy = qyx with basis normalizations g3 = q [3]^{{-1/2}}, g4 = q^3 [3]^{{-3/2}}",
        if first_fail.is_none() { "pass" } else { "FAIL" },
    );
    assert!(
        first_fail.is_none(),
        "criterion 11: stated identification fails at {first_fail:?}"
    );
}

#[test]
fn acceptance_12_property_suites() {
    // deterministic spot checks of every property family; the randomized
    // fixed-seed versions live in the property-test target
    let a = &qp(3) - &CoeffElem::r2();
    let b = &CoeffElem::r3() * &qp(-2);
    let c = qp(1) + CoeffElem::one();
    // ring axioms
    assert_eq!(&a * &b, &b * &a);
    assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    // transpose involutions
    let r = vector().r_paper;
    assert_eq!(r.transpose_t().transpose_t(), r);
    assert_eq!(r.transpose_t1().transpose_t1(), r);
    assert_eq!(r.transpose_t2().transpose_t2(), r);
    // Vieta consistency
    let mp = minpoly_generic(&b3().braiding());
    for (k, d) in mp.elementary_symmetric.iter().enumerate() {
        let e = qgroups::minpoly::elementary_symmetric(&mp.eigenvalues, k + 1);
        assert_eq!(d.as_coeff().unwrap(), e);
    }
    // oracle equivalence
    let braid = b3().braiding();
    let probe = minpoly_probe(&braid, 4, &b3_default_probe_rows()).unwrap();
    assert_eq!(probe.coefficients, mp.coefficients);
    // serialization round-trip
    let m = builtin_b3_spin();
    let s = serial::module_to_json(&m);
    assert_eq!(serial::module_to_json(&serial::module_from_json(&s).unwrap()), s);
    println!(
        "criterion 12 (property suites): pass — ring axioms, transpose involutions, Vieta, \
         oracle equivalence, and round-trip serialization hold (randomized versions in the \
         property-test target)"
    );
}
