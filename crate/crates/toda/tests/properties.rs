use proptest::prelude::*;
use symexpr::*;
use toda::*;

fn arb_id() -> impl Strategy<Value = SystemId> {
    (0..Series::ALL.len(), 1u32..=5, any::<bool>()).prop_map(|(i, n, printed)| {
        let s = Series::ALL[i];
        let n = n.max(s.min_rank());
        let id = SystemId::new(s, n);
        if printed && s.has_printed_variant() {
            id.printed()
        } else {
            id
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn renaming_round_trips(id in arb_id()) {
        let h = build_hamiltonian(&id, &Couplings::generic(&id), None).unwrap();
        let fresh = Variable::layer_vec(Family::U, 9, id.nvars());
        let back = h.on_vars(&fresh).unwrap().on_vars(&h.vars).unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn potential_uses_only_declared_couplings(id in arb_id()) {
        let c = Couplings::generic(&id);
        let h = build_hamiltonian(&id, &c, None).unwrap();
        let allowed = coupling_indices(&id);
        for s in h.potential.syms() {
            match s {
                Sym::G(i) | Sym::Sigma(i) => prop_assert!(allowed.contains(&i), "{} uses {:?}", id, s),
                _ => {}
            }
        }
        prop_assert!(h.potential.vars().iter().all(|v| h.vars.contains(v)));
    }

    #[test]
    fn descriptor_roots_live_in_chain_dimension(id in arb_id()) {
        let d = describe(&id).unwrap();
        prop_assert!(d.roots.iter().all(|r| r.coords.len() == id.nvars() as usize));
        prop_assert!(d.dynkin.iter().all(|e| e.lines >= 1 && e.lines <= 4));
    }
}
