//! End-to-end acceptance checks, one test per headline property of the
//! pipeline, plus a negative control on the relation checker. Each test is
//! self-contained and exact over GF(2); the timed ones bound wall-clock
//! runtime on the reference inputs.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use annular_linfty::akh::{
    ckh_module, ckh_operators, ckh_wedge_module, commutator, dg_algebra_ops, invariance_report,
    run_pipeline,
};
use annular_linfty::complex::enumerate_generators;
use annular_linfty::diagram::AnnularDiagram;
use annular_linfty::homology::{
    check_side_conditions, contract_onto_homology, F2Matrix, F2Vec, MatrixTriplets, PivotStrategy,
};
use annular_linfty::lie::{builtin_algebra, dg_contraction, BuiltinAlgebra};
use annular_linfty::linfty::{check_module_relation, transfer_algebra, transfer_module};
use annular_linfty::testing::{
    random_contraction, random_graded_complex, random_strict_module, small_diagrams, TestRng,
};

const BUDGET: u64 = 1 << 20;

/// Every shipped diagram the default budget can enumerate.
const CORPUS: [&str; 9] = [
    "unknot_trivial.apd.json",
    "unknot_axis.apd.json",
    "unknot_axis_ri_plus.apd.json",
    "unknot_axis_ri_minus.apd.json",
    "trefoil_left_axis.apd.json",
    "trefoil_right_axis.apd.json",
    "trefoil_left_rii.apd.json",
    "riii_before.apd.json",
    "riii_after.apd.json",
];

fn diagrams_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../diagrams")
}

fn load(name: &str) -> AnnularDiagram {
    AnnularDiagram::from_path(&diagrams_dir().join(name)).expect(name)
}

/// All non-decreasing `n`-tuples over 0..dim.
fn tuples(dim: u8, n: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                let lo = t.last().copied().unwrap_or(0);
                (lo..dim).map(move |b| {
                    let mut next = t.clone();
                    next.push(b);
                    next
                })
            })
            .collect();
    }
    out
}

#[test]
fn trefoil_k3_class_and_its_mirror() {
    let t0 = Instant::now();
    let p = run_pipeline(
        &load("trefoil_left_axis.apd.json"),
        4,
        BUDGET,
        PivotStrategy::Canonical,
    )
    .unwrap();
    // the all-minus labeling of the all-0 resolution, in the minimal
    // homological degree, survives to homology ...
    let generator = p.table.index(0, 0);
    assert_eq!(p.table.describe(generator), "000|w- w- w-");
    assert!(!p.class_of(generator).is_zero(), "class must survive to homology");
    let min_r = p.table.gradings.iter().map(|t| t.r).min().unwrap();
    assert_eq!(p.table.gradings[generator].r, min_r);
    // ... and the cubic operation k3(v2, v-2; -) of the module on the cube
    // complex is nonzero on its cycle representative
    let cycle = F2Vec::from_indices(p.table.total, &[generator]);
    assert!(p.dg_module.differential().mul_vec(&cycle).is_zero());
    assert!(
        !p.wedge_module.k(&[3, 4]).mul_vec(&cycle).is_zero(),
        "k3(v2, v-2) must act on the surviving cycle"
    );
    // on the mirror, k3(v2, v-2; -) vanishes on the whole lowest homological
    // degree, both on the cube complex and after transfer
    let m = run_pipeline(
        &load("trefoil_right_axis.apd.json"),
        4,
        BUDGET,
        PivotStrategy::Canonical,
    )
    .unwrap();
    let min_r = m.table.gradings.iter().map(|t| t.r).min().unwrap();
    let low: Vec<usize> =
        (0..m.table.total).filter(|&g| m.table.gradings[g].r == min_r).collect();
    assert!(!low.is_empty());
    assert!(m.wedge_module.k(&[3, 4]).select_columns(&low).is_zero());
    let low_small: Vec<usize> = m
        .contraction
        .small_gradings
        .iter()
        .enumerate()
        .filter(|(_, t)| t.r == min_r)
        .map(|(i, _)| i)
        .collect();
    assert!(!low_small.is_empty());
    assert!(m.akh_module.k(&[3, 4]).select_columns(&low_small).is_zero());
    assert!(t0.elapsed() < Duration::from_secs(5), "took {:?}", t0.elapsed());
}

#[test]
fn k3_equals_the_deformation_differential_on_every_diagram() {
    for name in CORPUS {
        let table = enumerate_generators(&load(name), BUDGET).unwrap();
        let ops = ckh_operators(&table).unwrap();
        let dg = ckh_module(&table, &ops).unwrap();
        let wedge = ckh_wedge_module(&dg, 4).unwrap();
        assert_eq!(wedge.k(&[3, 4]), ops.d0_lee, "{name}: k3(v2, v-2)");
        assert_eq!(wedge.k(&[4, 3]), ops.d0_lee, "{name}: argument order");
    }
}

#[test]
fn algebra_transfer_yields_no_higher_operations() {
    let t0 = Instant::now();
    let contraction = dg_contraction();
    let (small, morphism) = transfer_algebra(&dg_algebra_ops(), &contraction, 5).unwrap();
    let v2 = contraction.small.index_of("v2").unwrap() as u8;
    let vm2 = contraction.small.index_of("v-2").unwrap() as u8;
    let cap_d = contraction.big.index_of("D").unwrap();
    assert_eq!(
        morphism.term(&[v2, vm2]),
        F2Vec::from_indices(contraction.big.dim(), &[cap_d]),
        "the quadratic correction of the inclusion must hit D"
    );
    for n in 3..=5 {
        for args in tuples(contraction.small.dim() as u8, n) {
            assert!(small.op(n, &args).is_zero(), "l_{n} on {args:?}");
        }
    }
    assert!(t0.elapsed() < Duration::from_secs(1), "took {:?}", t0.elapsed());
}

#[test]
fn bracket_relations_hold_as_operator_identities() {
    let dg = builtin_algebra(BuiltinAlgebra::Sl2WedgeDg);
    let mut diagrams: Vec<AnnularDiagram> = CORPUS.iter().map(|n| load(n)).collect();
    diagrams.extend(small_diagrams(2));
    assert!(diagrams.len() > 1000, "the generator must enumerate broadly");
    for diagram in &diagrams {
        let table = enumerate_generators(diagram, BUDGET).unwrap();
        let ops = ckh_operators(&table).unwrap();
        let op_of = |i: usize| ops.operator(&dg.basis[i]).unwrap();
        for i in 0..dg.dim() {
            for j in i..dg.dim() {
                let lhs = commutator(op_of(i), op_of(j));
                let mut rhs = F2Matrix::zeros(table.total, table.total);
                for o in dg.bracket_basis(i, j).iter_ones() {
                    rhs = rhs.add(op_of(o));
                }
                assert_eq!(
                    lhs, rhs,
                    "[{}, {}] on crossings {:?}, axis {:?}",
                    dg.basis[i], dg.basis[j], diagram.crossings, diagram.axis
                );
            }
        }
    }
}

#[test]
fn module_relations_hold_for_all_three_structures() {
    for name in CORPUS {
        let p = run_pipeline(&load(name), 4, BUDGET, PivotStrategy::Canonical).unwrap();
        assert!(check_module_relation(&p.dg_module, 4).is_empty(), "{name}: strict dg module");
        assert!(check_module_relation(&p.wedge_module, 4).is_empty(), "{name}: restricted module");
        assert!(check_module_relation(&p.akh_module, 4).is_empty(), "{name}: transferred module");
    }
}

#[test]
fn contractions_satisfy_the_side_conditions() {
    let mut rng = TestRng::new(0xacce55);
    for trial in 0..200 {
        let (d, gradings, _) = random_graded_complex(&mut rng, 64);
        let c = contract_onto_homology(&d, &gradings, PivotStrategy::Canonical).unwrap();
        check_side_conditions(&c.differential, &c.inclusion, &c.projection, &c.homotopy)
            .unwrap_or_else(|e| panic!("random complex {trial}: {e}"));
    }
    for name in CORPUS {
        let c = run_pipeline(&load(name), 2, BUDGET, PivotStrategy::Canonical)
            .unwrap()
            .contraction;
        check_side_conditions(&c.differential, &c.inclusion, &c.projection, &c.homotopy)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn reidemeister_pairs_have_equal_invariants() {
    let t0 = Instant::now();
    let pairs = [
        ("unknot_axis.apd.json", "unknot_axis_ri_plus.apd.json"),
        ("unknot_axis.apd.json", "unknot_axis_ri_minus.apd.json"),
        ("trefoil_left_axis.apd.json", "trefoil_left_rii.apd.json"),
        ("riii_before.apd.json", "riii_after.apd.json"),
    ];
    for (a, b) in pairs {
        let report = invariance_report(&load(a), &load(b), 4, BUDGET).unwrap();
        assert!(report.agree, "{a} vs {b}:\n{}", report.to_text());
    }
    // and the two trefoils really are told apart
    let report = invariance_report(
        &load("trefoil_left_axis.apd.json"),
        &load("trefoil_right_axis.apd.json"),
        4,
        BUDGET,
    )
    .unwrap();
    assert!(!report.agree, "mirror trefoils must differ");
    assert!(t0.elapsed() < Duration::from_secs(30), "took {:?}", t0.elapsed());
}

#[test]
fn transferred_k3_matches_the_closed_form() {
    // q k2(a, T k2(b, i -)) + q k2(b, T k2(a, i -)), coded here from
    // scratch, against the generic transfer on random strict modules
    let algebra = dg_algebra_ops();
    let basis = algebra.dim() as u8;
    let mut rng = TestRng::new(0x0c10_5ed0);
    for trial in 0..120 {
        let dim = 2 + rng.below(5);
        let c = random_contraction(&mut rng, dim);
        let module = random_strict_module(&mut rng, algebra.clone(), c.differential.clone());
        let (small, _) = transfer_module(&module, &c, 3).unwrap();
        let one_way = |x: u8, y: u8| {
            c.projection
                .mul(&module.k(&[x]))
                .mul(&c.homotopy)
                .mul(&module.k(&[y]))
                .mul(&c.inclusion)
        };
        for a in 0..basis {
            for b in a..basis {
                assert_eq!(
                    small.k(&[a, b]),
                    one_way(a, b).add(&one_way(b, a)),
                    "trial {trial}, arguments ({a}, {b})"
                );
            }
        }
    }
}

#[test]
fn cli_output_is_deterministic() {
    let file = diagrams_dir().join("trefoil_left_axis.apd.json");
    let run = |extra: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_annular-linfty"))
            .arg("compute")
            .arg(&file)
            .args(extra)
            .env_remove("ANNULAR_LINFTY_JOBS")
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    // byte-identical output independent of the worker count
    let jobs1 = run(&["--jobs", "1"]);
    let jobs8 = run(&["--jobs", "8"]);
    assert_eq!(jobs1, jobs8, "outputs differ between --jobs 1 and --jobs 8");

    // identical graded dimensions and k2 rank profiles across pivot orders
    let canonical: serde_json::Value = serde_json::from_slice(&jobs1).unwrap();
    let reverse: serde_json::Value =
        serde_json::from_slice(&run(&["--pivot", "reverse"])).unwrap();
    assert_eq!(canonical["graded_dims"], reverse["graded_dims"]);
    let ranks = |v: &serde_json::Value| -> BTreeMap<String, usize> {
        v["k2_tables"]
            .as_object()
            .unwrap()
            .iter()
            .map(|(name, table)| {
                let triplets: MatrixTriplets = serde_json::from_value(table.clone()).unwrap();
                (name.clone(), F2Matrix::try_from(&triplets).unwrap().rank())
            })
            .collect()
    };
    assert_eq!(ranks(&canonical), ranks(&reverse));
}

#[test]
fn corrupted_module_reports_a_named_violation() {
    let table = enumerate_generators(&load("unknot_axis.apd.json"), BUDGET).unwrap();
    let ops = ckh_operators(&table).unwrap();
    let good = ckh_module(&table, &ops).unwrap();
    assert!(check_module_relation(&good, 3).is_empty());
    // overwrite the e action with the f action; [e, f] = h can no longer
    // hold, and the checker must say which relation instance broke
    let mut bad = good.clone();
    bad.insert(2, vec![0], ops.f.clone()).unwrap();
    let violations = check_module_relation(&bad, 3);
    assert!(!violations.is_empty(), "corruption must be caught");
    let culprit = violations
        .iter()
        .find(|v| v.n == 3 && v.args == vec![0, 1])
        .expect("the (e, f) instance must be reported");
    assert!(!culprit.detail.is_empty());
}
