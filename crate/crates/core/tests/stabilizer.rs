use origami_sim::mcg::MCGWord;
use origami_sim::origami::{builtin_protocol, catalog_names, check_transversal, unfolded_protocol, UNFOLDED_NAMES};
use origami_sim::stabilizer::*;
use origami_sim::Error;
use proptest::prelude::*;

fn word(s: &str) -> MCGWord {
    s.parse().unwrap()
}

fn action_of(code: &StabilizerCode, mv: Move) -> LogicalAction {
    logical_action(code, &geometric_permutation(code, mv).unwrap()).unwrap()
}

// (H⊗H)·SWAP in the (X̄₁, Z̄₁, X̄₂, Z̄₂) basis: X̄₁ ↔ Z̄₂ and Z̄₁ ↔ X̄₂.
fn hh_swap() -> Symplectic {
    Symplectic(vec![vec![0, 0, 0, 1], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0]])
}

#[test]
fn toric_code_parameters() {
    for (l, n) in [(2, 8), (3, 18), (4, 32)] {
        let c = build_toric_torus(l).unwrap();
        assert_eq!((c.n, c.k(), c.generators.len()), (n, 2, n));
        c.validate().unwrap();
    }
    assert!(matches!(build_toric_torus(1), Err(Error::LatticeTooSmall(1))));
    assert!(matches!(build_toric_torus(0), Err(Error::LatticeTooSmall(0))));
}

#[test]
fn electric_and_magnetic_loops_anticommute() {
    for l in 2..=5 {
        let c = build_toric_torus(l).unwrap();
        let (we_alpha, wm_beta) = &c.logical_pairs[0];
        assert!(we_alpha.anticommutes(wm_beta));
        assert_eq!(we_alpha.weight(), l);
    }
}

#[test]
fn genon_code_shape() {
    let c = build_bilayer_genon_code(6).unwrap();
    assert_eq!((c.n, c.k()), (288, 2));
    c.validate().unwrap();
    assert!(c.coords.iter().all(|q| q.layer == 1 || q.layer == 2));
    assert_eq!(c.coords.iter().filter(|q| q.layer == 2).count(), 144);
    assert!(c.metadata.contains_key("boundary"));
    let (w_alpha, w_beta) = &c.logical_pairs[0];
    assert!(w_alpha.anticommutes(w_beta));
    // The α loop crosses both cuts, so it visits both sheets; the β loop circles one cut in a single sheet.
    let layers = |p: &PauliOp| {
        let mut ls: Vec<u8> = p.z_bits().union(p.x_bits()).map(|q| c.coords[q].layer).collect();
        ls.sort();
        ls.dedup();
        ls
    };
    assert_eq!(layers(w_alpha), vec![1, 2]);
    assert_eq!(layers(w_beta), vec![1]);
    for bad in [GenonCuts { length: 0, separation: 3 }, GenonCuts { length: 3, separation: 0 }] {
        assert!(matches!(build_bilayer_genon_code_with(bad), Err(Error::InvalidCode(_))));
    }
}

#[test]
fn stabilizers_crossing_a_cut_touch_both_layers() {
    let c = build_bilayer_genon_code(3).unwrap();
    let mut mixed = 0;
    for g in &c.generators {
        let support: Vec<_> = g.x_bits().union(g.z_bits()).collect();
        let l1 = support.iter().any(|&q| c.coords[q].layer == 1);
        let l2 = support.iter().any(|&q| c.coords[q].layer == 2);
        if l1 && l2 {
            mixed += 1;
            // Mixed stabilizers sit on the fold edges X = 0 or X = 2a of the footprint.
            assert!(support.iter().any(|&q| [0, 1, 5, 6].contains(&c.coords[q].site[0])));
        }
    }
    assert!(mixed > 0 && mixed < c.generators.len());
}

#[test]
fn double_loop_around_genon_is_a_stabilizer() {
    let c = build_bilayer_genon_code(3).unwrap();
    let space = c.stabilizer_space();
    for genon in [[0, 0], [3, 0], [0, 3], [3, 3]] {
        let lp = double_genon_loop(&c, genon).unwrap();
        assert_eq!(lp.weight(), 8);
        assert_eq!(c.stabilizer_phase(&space, &lp), Some(0));
    }
}

#[test]
fn distance_grows_with_cut_separation() {
    let d = |sep| build_bilayer_genon_code_with(GenonCuts { length: 2, separation: sep }).unwrap().distance(6).unwrap();
    assert_eq!(d(1), 2);
    assert_eq!(d(2), 4);
    assert_eq!(build_toric_torus(3).unwrap().distance(4).unwrap(), 3);
}

#[test]
fn torus_moves() {
    for l in 2..=4 {
        let c = build_toric_torus(l).unwrap();
        assert_eq!(action_of(&c, Move::ReflectDiagonal).symplectic, hh_swap());
        assert_eq!(action_of(&c, Move::RotateQuarterVertex).symplectic, hh_swap());
        assert_eq!(action_of(&c, Move::RotateQuarterVertex).gate.as_deref(), Some("(H⊗H)·SWAP"));
        assert_eq!(action_of(&c, Move::ReflectVertical).symplectic, Symplectic::identity(4));
        assert_eq!(action_of(&c, Move::RotateQuarterPlaquette).symplectic, hh_swap());
        assert!(matches!(
            geometric_permutation(&c, Move::RotateQuarterEdge),
            Err(Error::NonAutomorphism(m)) if m == "rotate_quarter_edge"
        ));
        let tagged = geometric_permutation(&c, Move::RotateQuarterEdgeHadamard).unwrap();
        assert!(tagged.hadamard.is_full());
        assert!(geometric_permutation(&c, Move::LayerSwap).is_err());
    }
}

#[test]
fn reflection_matches_anyon_prediction() {
    let expected = expected_action(&word("Ra S")).unwrap();
    assert_eq!(expected, hh_swap());
    assert_eq!(expected_action(&word("S")).unwrap(), hh_swap());
    assert_eq!(expected_action(&word("C")).unwrap(), Symplectic::identity(4));
    assert_eq!(expected_action(&word("Ra")).unwrap(), Symplectic::identity(4));
    for l in 2..=4 {
        let c = build_toric_torus(l).unwrap();
        assert_eq!(action_of(&c, Move::ReflectDiagonal).symplectic, expected);
    }
}

#[test]
fn genon_protocol_steps() {
    let c = build_bilayer_genon_code(6).unwrap();
    let patch = Move::PatchLayerSwap(GenonRegion::Patch);
    let i_ii = sequence_permutation(&c, &[Move::ReflectDiagonal, patch]).unwrap();
    assert_eq!(logical_action(&c, &i_ii).unwrap().symplectic, expected_action(&word("Ra S")).unwrap());
    let i_iii = sequence_permutation(&c, &[Move::ReflectDiagonal, patch, Move::ReflectVertical]).unwrap();
    assert_eq!(logical_action(&c, &i_iii).unwrap().symplectic, expected_action(&word("S")).unwrap());
    let swap = geometric_permutation(&c, Move::LayerSwap).unwrap();
    let a = logical_action(&c, &swap).unwrap();
    assert_eq!(a.symplectic, Symplectic::identity(4));
    assert_eq!(a.gate.as_deref(), Some("I"));
    // Step i alone leaves the patch sheets crossed and is not a symmetry.
    assert!(matches!(geometric_permutation(&c, Move::ReflectDiagonal), Err(Error::NonAutomorphism(_))));
    assert!(matches!(geometric_permutation(&c, patch), Err(Error::NonAutomorphism(_))));
    assert_eq!(sequence_permutation(&c, &[]).unwrap(), QubitPermutation::identity(c.n));
}

#[test]
fn microscopic_steps_equal_origami_steps() {
    let patch = Move::PatchLayerSwap(GenonRegion::Patch);
    for l in 1..=4 {
        let c = build_bilayer_genon_code(l).unwrap();
        let micro = sequence_permutation(&c, &[Move::ReflectDiagonal, patch]).unwrap();
        let from_origami = origami_permutation(&c, &unfolded_protocol("fig3a_i_ii").unwrap()).unwrap();
        assert_eq!(micro, from_origami);
    }
    let c = build_bilayer_genon_code(2).unwrap();
    assert!(matches!(origami_permutation(&c, &unfolded_protocol("fig3a_i").unwrap()), Err(Error::NotClosed(_))));
}

#[test]
fn catalog_agrees_with_tableau() {
    let mut checked = 0;
    let names = catalog_names().into_iter().chain(UNFOLDED_NAMES.iter().copied());
    for name in names {
        let p = builtin_protocol(name).or_else(|_| unfolded_protocol(name)).unwrap();
        let g = p.geometry.name.as_str();
        let build: fn(usize) -> origami_sim::Result<StabilizerCode> = if g.starts_with("square") {
            build_toric_torus
        } else if g == "bilayer_genons" || g == "genon_fold4" {
            build_bilayer_genon_code
        } else {
            continue;
        };
        if p.stub || name == "fig3a_i" {
            continue;
        }
        for l in 2..=4 {
            let r = protocol_action(&build(l).unwrap(), &p).unwrap();
            assert!(r.agrees, "{name} at L={l}: {:?} vs {:?}", r.action.symplectic, r.expected);
            checked += 1;
        }
    }
    assert_eq!(checked, 3 * 12);
}

#[test]
fn diagonal_fold_certificate() {
    for l in 2..=4 {
        let c = build_toric_torus(l).unwrap();
        let fold = FoldMap::antidiagonal(&c).unwrap();
        let cert = folded_view(&fold, &geometric_permutation(&c, Move::ReflectDiagonal).unwrap()).unwrap();
        assert_eq!(cert.per_site.len(), c.n / 2);
        assert!(cert.all_equal_to(&[1, 0]));
        let p = builtin_protocol("fig2_fold2_RaS").unwrap();
        assert!(check_transversal(&p.steps, &p.geometry));
        assert_eq!(origami_permutation(&c, &p).unwrap(), geometric_permutation(&c, Move::ReflectDiagonal).unwrap());

        let vertical = geometric_permutation(&c, Move::ReflectVertical).unwrap();
        match folded_view(&fold, &vertical) {
            Err(Error::NotTransversal(a, b)) => assert_ne!(fold.site[a], fold.site[b]),
            other => panic!("expected a witness, got {other:?}"),
        }
        let id = folded_view(&fold, &QubitPermutation::identity(c.n)).unwrap();
        assert!(id.all_equal_to(&[0, 1]));
    }
}

#[test]
fn bilayer_fold_certificate() {
    let c = build_bilayer_genon_code(3).unwrap();
    let fold = FoldMap::bilayer(&c).unwrap();
    let cert = folded_view(&fold, &geometric_permutation(&c, Move::LayerSwap).unwrap()).unwrap();
    assert!(cert.all_equal_to(&[1, 0]));
    assert!(FoldMap::bilayer(&build_toric_torus(2).unwrap()).is_err());
}

#[test]
fn text_export() {
    let c = build_toric_torus(2).unwrap();
    let text = c.to_text();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 8);
    // Star at the origin: edges (1,0), (0,1), (-1,0), (0,-1) are qubits 0, 1, 2, 5.
    assert_eq!(lines[0], "+XXXIIXII");
    for line in lines {
        let p: PauliOp = line.parse().unwrap();
        assert_eq!(p.n(), 8);
    }
    let json = serde_json::to_value(action_of(&c, Move::ReflectDiagonal)).unwrap();
    assert_eq!(json["symplectic"][0], serde_json::json!([0, 0, 0, 1]));
}

const AUTOMORPHISMS: [Move; 5] = [
    Move::ReflectDiagonal,
    Move::ReflectVertical,
    Move::RotateQuarterVertex,
    Move::RotateQuarterPlaquette,
    Move::RotateQuarterEdgeHadamard,
];

fn pauli(n: usize) -> impl Strategy<Value = PauliOp> {
    (prop::collection::vec(0u8..4, n), 0u8..4).prop_map(move |(letters, phase)| {
        let s: String = letters.iter().map(|&c| ['I', 'X', 'Y', 'Z'][c as usize]).collect();
        let p: PauliOp = s.parse().unwrap();
        let ph = p.phase();
        p.with_phase(ph + phase)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutation_is_the_symplectic_form(a in pauli(7), b in pauli(7)) {
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        prop_assert_eq!(ab.x_bits(), ba.x_bits());
        let sign_flip = (ab.phase() + 4 - ba.phase()) % 4 == 2;
        prop_assert_eq!(sign_flip, a.anticommutes(&b));
        prop_assert_eq!(ab == ba, a.commutes_with(&b));
    }

    #[test]
    fn conjugation_preserves_commutation(
        a in pauli(6),
        b in pauli(6),
        images in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
        tags in prop::collection::vec(any::<bool>(), 6),
    ) {
        let mut perm = QubitPermutation::new(images).unwrap();
        for (q, t) in tags.into_iter().enumerate() {
            perm.hadamard.set(q, t);
        }
        prop_assert_eq!(a.conjugated(&perm).anticommutes(&b.conjugated(&perm)), a.anticommutes(&b));
        prop_assert_eq!(a.mul(&b).conjugated(&perm), a.conjugated(&perm).mul(&b.conjugated(&perm)));
    }

    #[test]
    fn logical_actions_are_symplectic(l in 2usize..=4, seq in prop::collection::vec(0usize..5, 0..4)) {
        let c = build_toric_torus(l).unwrap();
        let moves: Vec<Move> = seq.iter().map(|&i| AUTOMORPHISMS[i]).collect();
        let perm = sequence_permutation(&c, &moves).unwrap();
        let a = logical_action(&c, &perm).unwrap();
        prop_assert!(a.symplectic.preserves_form());
        // Composition of moves is composition of actions.
        let stepwise = moves.iter().fold(Symplectic::identity(4), |acc, &m| {
            logical_action(&c, &geometric_permutation(&c, m).unwrap()).unwrap().symplectic.after(&acc)
        });
        prop_assert_eq!(a.symplectic, stepwise);
    }

    #[test]
    fn reflections_square_to_identity(l in 2usize..=4, which in 0usize..2) {
        let c = build_toric_torus(l).unwrap();
        let mv = [Move::ReflectDiagonal, Move::ReflectVertical][which];
        let p = geometric_permutation(&c, mv).unwrap();
        prop_assert!(p.then(&p).is_identity());
        let a = logical_action(&c, &p).unwrap().symplectic;
        prop_assert_eq!(a.after(&a), Symplectic::identity(4));
    }

    #[test]
    fn k_and_distance_are_invariant(l in 2usize..=3, i in 0usize..5) {
        let c = build_toric_torus(l).unwrap();
        let image = c.conjugated(&geometric_permutation(&c, AUTOMORPHISMS[i]).unwrap());
        image.validate().unwrap();
        prop_assert_eq!(image.k(), c.k());
        prop_assert_eq!(image.distance(l).unwrap(), c.distance(l).unwrap());
    }
}
