use origami_sim::mcg::{word_to_matrix, MCGMatrix, MCGWord};
use origami_sim::origami::*;
use origami_sim::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(s: &str) -> MCGWord {
    s.parse().unwrap()
}

fn mat(s: &str) -> MCGMatrix {
    word_to_matrix(&word(s)).unwrap()
}

fn published() -> Vec<Protocol> {
    catalog_names()
        .into_iter()
        .filter(|n| !PRINTED_VARIANTS.contains(n))
        .map(|n| builtin_protocol(n).unwrap())
        .filter(|p| !p.stub)
        .collect()
}

#[test]
fn every_published_protocol_is_transversal_closed_and_traces_to_its_word() {
    for p in published() {
        assert!(check_transversal(&p.steps, &p.geometry), "{} not transversal", p.name);
        assert_eq!(closure_witness(&p.steps, &p.geometry).unwrap(), None, "{}", p.name);
        let m = trace_loops(&p.steps, &p.geometry).unwrap();
        assert_eq!(m, word_to_matrix(&p.expected).unwrap(), "{}", p.name);
    }
}

#[test]
fn printed_twelve_layer_variants_do_not_close() {
    for n in PRINTED_VARIANTS {
        let p = builtin_protocol(n).unwrap();
        assert!(check_transversal(&p.steps, &p.geometry));
        assert!(!check_closure(&p.steps, &p.geometry), "{n}");
        assert!(matches!(trace_loops(&p.steps, &p.geometry), Err(Error::NotClosed(_))));
    }
}

#[test]
fn sixteen_layer_s_is_a_stub() {
    let p = builtin_protocol("fig3b_16layer_S").unwrap();
    assert!(p.stub);
    assert!(p.steps.is_empty());
    assert_eq!(p.expected, word("S"));
}

#[test]
fn catalog_examples_match_their_printed_steps() {
    let s = builtin_protocol("appB_8layer_S").unwrap();
    assert_eq!(s.expected, word("S"));
    let cycles: Vec<String> = s.steps.iter().map(|st| st.to_string()).collect();
    assert_eq!(cycles, ["SWAP(1,2)(3,4)(5,6)(7,8)", "SWAP(1,8)(2,5)(3,6)(4,7)"]);
    assert_eq!(s.describe_steps(), "[SWAP(1,8)(2,5)(3,6)(4,7)] [SWAP(1,2)(3,4)(5,6)(7,8)]");

    let t = builtin_protocol("appE_12layer_TRb").unwrap();
    assert_eq!(t.steps[0].to_string(), "SWAP(1,2)(3,4)(5,6)(7,8)(9,10)(11,12)");

    let c = builtin_protocol("appD_4layer_C").unwrap();
    assert_eq!(c.steps[0].to_string(), "SWAP(1,3)(2,4)");

    // Both spellings of the two-step genon protocol name the same permutation.
    let eq1 = builtin_protocol("fig3_genon4_RaS").unwrap();
    let patch = ProtocolStep::swap("patch", "(1,4)(3,2)", 4).unwrap();
    assert_eq!(eq1.steps[1], patch);
    assert_eq!(eq1.describe_steps(), "[SWAP_patch(1,4)(2,3)] [SWAP_outside(1,2)(3,4)]");

    assert!(matches!(builtin_protocol("no_such"), Err(Error::UnknownProtocol(_))));
}

#[test]
fn folds_create_the_expected_boundaries() {
    let g2 = square_fold2().unwrap();
    assert_eq!(g2.layers(), 2);
    let crease: Vec<_> = g2.boundary_pairings().unwrap();
    assert_eq!(crease.len(), 1);
    assert_eq!(crease[0].pairing.to_string(), "(1,2)");

    let g8 = square_fold8().unwrap();
    assert_eq!(g8.layers(), 8);
    let left = g8
        .boundary_pairings()
        .unwrap()
        .into_iter()
        .find(|e| e.from[1].abs() < 1e-9 && e.to[1].abs() < 1e-9)
        .expect("edge on the x axis");
    assert_eq!(left.pairing.to_string(), "(1,6)(2,5)(3,8)(4,7)");

    let h = hexagon_fold6_a().unwrap();
    assert_eq!(h.layers(), 6);
    assert_eq!(h.pieces.len(), 1);
    assert_eq!(h.pieces[0].polygon.len(), 3);
}

#[test]
fn each_fold_doubles_layers_and_alternates_chirality() {
    let mut n = 1;
    for g in [square_torus(), square_fold2(), square_fold4(), square_fold8()] {
        let g = g.unwrap();
        assert_eq!(g.layers(), n);
        let o = g.orientation();
        for (l, c) in o.iter().enumerate() {
            let expect = if l % 2 == 0 { Chirality::Original } else { Chirality::Reversed };
            assert_eq!(*c, expect, "{} layer {}", g.name, l + 1);
        }
        n *= 2;
    }
}

#[test]
fn boundary_and_cut_pairings_are_involutions() {
    for name in geometry_names() {
        let g = builtin_geometry(name).unwrap();
        for e in g.boundaries().unwrap() {
            if matches!(e.kind, EdgeKind::GappedBoundary | EdgeKind::BranchCut) {
                assert!(e.pairing.is_involution(), "{name}: {:?}", e);
            }
        }
    }
}

#[test]
fn fold_rejects_non_symmetries() {
    // Moves the genons of the bilayer off themselves.
    let shifted = FoldAxis {
        name: "x = 1/4".into(),
        mirror: Affine::new([[-1, 0], [0, 1]], [0.5, 0.0]),
        keep: vec![vec![[0.0, 0.0], [0.25, 0.0], [0.25, 2.0], [0.0, 2.0]]],
    };
    assert!(matches!(fold(&bilayer_genons().unwrap(), &shifted), Err(Error::Geometry(_))));

    // Not an isometry of the hexagonal metric.
    let square_mirror = FoldAxis {
        name: "y = 0 in lattice coordinates".into(),
        mirror: Affine::linear([[1, 0], [0, -1]]),
        keep: vec![vec![[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]]],
    };
    assert!(matches!(fold(&hexagon_torus().unwrap(), &square_mirror), Err(Error::Geometry(_))));

    // A rotation is not a fold axis.
    let rot = FoldAxis {
        name: "quarter turn".into(),
        mirror: Affine::linear([[0, -1], [1, 0]]),
        keep: vec![vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]],
    };
    assert!(fold(&square_torus().unwrap(), &rot).is_err());
}

#[test]
fn transversality_examples() {
    let g = square_fold2().unwrap();
    let swap = vec![ProtocolStep::swap(Region::All, "(1,2)", 2).unwrap()];
    assert!(check_transversal(&swap, &g));
    assert!(check_transversal(&[], &g));
    let mirror = unfolded_protocol("square_mirror_antidiagonal").unwrap();
    assert!(!check_transversal(&mirror.steps, &mirror.geometry));
}

#[test]
fn closure_examples() {
    let eq1 = builtin_protocol("fig3_genon4_RaS").unwrap();
    assert!(check_closure(&eq1.steps, &eq1.geometry));
    let step_i = unfolded_protocol("fig3a_i").unwrap();
    assert!(!check_closure(&step_i.steps, &step_i.geometry));
    assert!(check_closure(&[], &step_i.geometry));
}

#[test]
fn unfolded_protocols_trace_but_are_not_transversal() {
    for n in UNFOLDED_NAMES {
        let p = unfolded_protocol(n).unwrap();
        assert!(!check_transversal(&p.steps, &p.geometry), "{n}");
        if *n == "fig3a_i" {
            continue;
        }
        assert_eq!(trace_loops(&p.steps, &p.geometry).unwrap(), word_to_matrix(&p.expected).unwrap(), "{n}");
    }
}

#[test]
fn trace_examples() {
    let cases = [("fig2_fold2_RaS", "Ra S"), ("fig3_genon4_RaS", "Ra S"), ("appD_bilayer_C", "C")];
    for (n, w) in cases {
        let p = builtin_protocol(n).unwrap();
        assert_eq!(trace_loops(&p.steps, &p.geometry).unwrap(), mat(w), "{n}");
    }
    assert_eq!(mat("C"), MCGMatrix::new(-1, 0, 0, -1).unwrap());
}

#[test]
fn folding_turns_a_mirror_into_a_layer_swap() {
    let pairs = [
        ("fig2_fold2_RaS", "square_mirror_antidiagonal"),
        ("appB_8layer_RaS", "square_mirror_antidiagonal"),
        ("appB_8layer_Ra", "square_mirror_vertical"),
    ];
    for (folded, unfolded) in pairs {
        let f = builtin_protocol(folded).unwrap();
        let u = unfolded_protocol(unfolded).unwrap();
        assert_eq!(
            trace_loops(&f.steps, &f.geometry).unwrap(),
            trace_loops(&u.steps, &u.geometry).unwrap(),
            "{folded} vs {unfolded}"
        );
    }
}

#[test]
fn determinant_tracks_reflection_parity() {
    let mut all = published();
    all.extend(UNFOLDED_NAMES.iter().filter(|n| **n != "fig3a_i").map(|n| unfolded_protocol(n).unwrap()));
    for p in all {
        let m = trace_loops(&p.steps, &p.geometry).unwrap();
        let odd = p.expected.reflection_count() % 2 == 1;
        assert_eq!(m.det() == -1, odd, "{}", p.name);
    }
}

#[test]
fn eight_layer_s_decomposes_into_two_four_cycles() {
    let p = builtin_protocol("appB_8layer_S").unwrap();
    let cycles = cycle_decomposition(&p.steps, 8).unwrap();
    assert_eq!(cycles, vec![vec![1, 7, 3, 5], vec![2, 6, 4, 8]]);
    assert_eq!(cycle_decomposition(&[], 8).unwrap(), Vec::<Vec<usize>>::new());
    let single = [ProtocolStep::swap(Region::All, "(12)", 2).unwrap()];
    assert_eq!(cycle_decomposition(&single, 2).unwrap(), vec![vec![1, 2]]);
    let regional = builtin_protocol("fig3_genon4_RaS").unwrap();
    assert_eq!(cycle_decomposition(&regional.steps, 4), Err(Error::NotGloballyDecomposable));
}

#[test]
fn compositions_of_twelve_layer_protocols() {
    let trb = builtin_protocol("appE_12layer_TRb").unwrap();
    let rbs = builtin_protocol("appE_12layer_RbS").unwrap();
    let ras = builtin_protocol("appE_12layer_RaS").unwrap();

    let ts = compose_protocols(&trb, &rbs).unwrap();
    assert_eq!(word_to_matrix(&ts.expected).unwrap(), mat("T S"));
    assert_eq!(trace_loops(&ts.steps, &ts.geometry).unwrap(), mat("T S"));

    let ts_inv = compose_protocols(&trb, &ras).unwrap();
    let t_s_inv = mat("T").checked_mul(&mat("S").inverse()).unwrap();
    assert_eq!(word_to_matrix(&ts_inv.expected).unwrap(), t_s_inv);
    assert_eq!(trace_loops(&ts_inv.steps, &ts_inv.geometry).unwrap(), t_s_inv);

    let st_inv = compose_protocols(&rbs, &trb).unwrap();
    assert_eq!(trace_loops(&st_inv.steps, &st_inv.geometry).unwrap(), mat("T S").inverse());
}

#[test]
fn composing_with_the_identity_changes_nothing() {
    let p = builtin_protocol("appB_8layer_RaS").unwrap();
    let id = Protocol { name: "id".into(), steps: vec![], expected: MCGWord::empty(), ..p.clone() };
    let q = compose_protocols(&p, &id).unwrap();
    assert_eq!(q.steps, p.steps);
    assert_eq!(q.expected, p.expected);
}

#[test]
fn composing_across_geometries_fails() {
    let a = builtin_protocol("appB_8layer_RaS").unwrap();
    let b = builtin_protocol("fig2_fold2_RaS").unwrap();
    assert!(matches!(compose_protocols(&a, &b), Err(Error::GeometryMismatch(..))));
}

#[test]
fn protocols_round_trip_through_json() {
    for n in ["fig3_genon4_RaS", "appC_hexagon6_TRb", "appE_12layer_RbS"] {
        let p = builtin_protocol(n).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"cycles\""));
        let back: Protocol = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
    }
    let step: ProtocolStep =
        serde_json::from_str(r#"{"kind":"swap","region":"ALL","perm":{"layers":4,"cycles":"(1,3)(2,4)"}}"#).unwrap();
    assert_eq!(step.to_string(), "SWAP(1,3)(2,4)");
}

#[test]
fn exhausted_budget_reports_the_stuck_path() {
    let path = LoopPath { segments: vec![Segment::Circle { genon: 0, turns: 12, layer: 0 }] };
    let ctx = RewriteContext::for_geometry(&bilayer_genons().unwrap());
    let err = path.normalize(&ctx, 3).unwrap_err();
    match err {
        Error::RewriteBudget { budget, path } => {
            assert_eq!(budget, 3);
            assert!(path.contains("genon0"), "{path}");
        }
        other => panic!("unexpected {other}"),
    }
    let (nf, used) = path.normalize(&ctx, DEFAULT_BUDGET).unwrap();
    assert!(nf.segments.is_empty());
    assert_eq!(used, 6);
}

fn with_circles(path: &LoopPath, inserts: &[(usize, usize, i32)], layers: usize) -> LoopPath {
    let mut out = path.clone();
    for &(pos, genon, k) in inserts {
        let at = pos % (out.segments.len() + 1);
        out.segments.insert(at, Segment::Circle { genon: genon % 4, turns: 2 * k, layer: at % layers });
    }
    out
}

const GENON_ENTRIES: &[&str] =
    &["appD_bilayer_C", "fig3_genon4_RaS", "appE_4layer_RbS", "appE_12layer_RbS", "appE_12layer_TRb"];

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn rewrite_order_does_not_change_the_normal_form(
        entry in 0..GENON_ENTRIES.len(),
        inserts in prop::collection::vec((0usize..64, 0usize..4, prop::sample::select(vec![-2, -1, 1, 2])), 0..5),
        seed in any::<u64>(),
    ) {
        let p = builtin_protocol(GENON_ENTRIES[entry]).unwrap();
        let ctx = RewriteContext::for_geometry(&p.geometry);
        let [(alpha, _), (beta, _)] = image_paths(&p.steps, &p.geometry, 600).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for path in [alpha, beta] {
            let (reference, _) = path.normalize(&ctx, DEFAULT_BUDGET).unwrap();
            let noisy = with_circles(&path, &inserts, p.geometry.layers());
            let (a, _) = noisy.normalize(&ctx, DEFAULT_BUDGET).unwrap();
            let (b, _) = noisy.normalize_random(&ctx, DEFAULT_BUDGET, &mut rng).unwrap();
            prop_assert_eq!(&a, &reference);
            prop_assert_eq!(&b, &reference);
        }
    }

    #[test]
    fn trace_is_a_homomorphism_on_the_twelve_layer_hexagon(
        picks in prop::collection::vec(0usize..5, 1..4),
    ) {
        let names = ["appC_hexagon12_TRb", "appC_hexagon12_RbS", "appC_hexagon12_RaS",
                     "appC_hexagon12_TSinv", "appC_hexagon12_STinv"];
        let ps: Vec<Protocol> = picks.iter().map(|&i| builtin_protocol(names[i]).unwrap()).collect();
        let mut acc = ps[0].clone();
        for q in &ps[1..] {
            acc = compose_protocols(&acc, q).unwrap();
        }
        let whole = trace_loops(&acc.steps, &acc.geometry).unwrap();
        let mut product = MCGMatrix::new(1, 0, 0, 1).unwrap();
        for q in &ps {
            product = product.checked_mul(&trace_loops(&q.steps, &q.geometry).unwrap()).unwrap();
        }
        prop_assert_eq!(whole, product);
        prop_assert_eq!(whole, word_to_matrix(&acc.expected).unwrap());
    }

    #[test]
    fn cycle_decomposition_reproduces_the_product(
        perms in prop::collection::vec(Just((0..6).collect::<Vec<usize>>()).prop_shuffle(), 0..4),
    ) {
        let steps: Vec<ProtocolStep> = perms
            .iter()
            .map(|v| ProtocolStep::Swap { region: Region::All, perm: Permutation::from_images(v.clone()).unwrap() })
            .collect();
        let cycles = cycle_decomposition(&steps, 6).unwrap();
        // Rebuild: layer l holds the original content of layer σ(l).
        let mut sigma: Vec<usize> = (0..6).collect();
        for c in &cycles {
            for k in 0..c.len() {
                sigma[c[k] - 1] = c[(k + 1) % c.len()] - 1;
            }
        }
        let mut content: Vec<usize> = (0..6).collect();
        for v in &perms {
            let mut next = vec![0; 6];
            for (l, &c) in content.iter().enumerate() {
                next[v[l]] = c;
            }
            content = next;
        }
        prop_assert_eq!(sigma, content);
    }
}
