use proptest::prelude::*;

use t310::boolpoly::{anf, format_poly, parse, BoolPoly, Notation, VarId, F, K, L};
use t310::invariant::verify_invariant;
use t310::symbolic::build_round_anf;
use t310::t310::{CipherState, Fixture, RoundInputs, T310};

/// Random polynomial over the first `nvars` state bits.
fn poly(nvars: u32, max_terms: usize) -> impl Strategy<Value = BoolPoly> {
    prop::collection::vec(0u64..(1 << nvars), 0..max_terms).prop_map(BoolPoly::from_masks)
}

/// Random polynomial over the state bits, spread across all 36 positions.
fn state_poly() -> impl Strategy<Value = BoolPoly> {
    prop::collection::vec(prop::collection::vec(1usize..=36, 0..4), 0..6).prop_map(|terms| {
        BoolPoly::from_masks(
            terms.into_iter().map(|vs| vs.into_iter().fold(0, |m, i| m | VarId::state(i).bit())).collect(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn ring_axioms(p in poly(8, 12), q in poly(8, 12), r in poly(8, 12)) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p + &p).is_zero());
        prop_assert_eq!(&p * &p, p.clone());
        prop_assert_eq!(&p * &BoolPoly::one(), p.clone());
        prop_assert!((&p * &BoolPoly::zero()).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_map(p in poly(10, 15), q in poly(10, 15), x in 0u64..1024) {
        prop_assert_eq!((&p + &q).eval_mask(x), p.eval_mask(x) ^ q.eval_mask(x));
        prop_assert_eq!((&p * &q).eval_mask(x), p.eval_mask(x) & q.eval_mask(x));
    }

    #[test]
    fn text_round_trip(p in state_poly()) {
        for n in [Notation::Indexed, Notation::Letters] {
            prop_assert_eq!(parse(&format_poly(&p, n)).unwrap(), p.clone());
        }
    }

    #[test]
    fn mobius_round_trip(tt in any::<u64>()) {
        let p = anf::anf_from_truth_table(tt);
        prop_assert_eq!(anf::truth_table_from_anf(&p).unwrap(), tt);
        prop_assert_eq!(anf::mobius(anf::mobius(tt)), tt);
    }

    #[test]
    fn parseval(tt in any::<u64>()) {
        let w = anf::walsh_spectrum(tt);
        prop_assert_eq!(w.iter().map(|&v| (v * v) as i64).sum::<i64>(), 4096);
        prop_assert_eq!(w[0], 64 - 2 * tt.count_ones() as i32);
    }

    #[test]
    fn product_divisible_by_factors(a in poly(6, 5), b in poly(6, 5)) {
        let ab = &a * &b;
        prop_assert!(a.divides(&ab).unwrap());
        prop_assert!(b.divides(&ab).unwrap());
    }

    #[test]
    fn transform_is_a_homomorphism(p in state_poly(), q in state_poly(), idx in 0usize..5) {
        let f = Fixture::all().swap_remove(idx);
        for round in [build_round_anf(&f.lzs, None), build_round_anf(&f.lzs, Some(&f.z))] {
            prop_assert_eq!(round.transform(&(&p + &q)), &round.transform(&p) + &round.transform(&q));
            prop_assert_eq!(round.transform(&(&p * &q)), &round.transform(&p) * &round.transform(&q));
        }
    }

    #[test]
    fn transform_matches_one_round(p in state_poly(), s in any::<u64>(), r in 0u8..8, idx in 0usize..5) {
        let f = Fixture::all().swap_remove(idx);
        let round = build_round_anf(&f.lzs, Some(&f.z));
        let state = CipherState::new(s);
        let ri = RoundInputs::from_bits(r);
        let vals = state.bits() | (ri.f as u64) * F.bit() | (ri.k as u64) * K.bit() | (ri.l as u64) * L.bit();
        let out = T310::new(&f.lzs, &f.z).round(state, ri);
        prop_assert_eq!(round.transform(&p).eval_mask(vals), p.eval_mask(out.bits()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Sums and products of known invariants stay invariant.
    #[test]
    fn invariants_form_a_ring(picks in prop::collection::vec((0usize..3, any::<bool>()), 1..4), idx in 0usize..5) {
        let f = Fixture::all().swap_remove(idx);
        let inv: Vec<BoolPoly> = f.invariants.iter().map(|e| f.expand(e).unwrap()).collect();
        let mut acc = BoolPoly::one();
        for (i, mul) in picks {
            let q = &inv[i % inv.len()];
            acc = if mul { &acc * q } else { &acc + q };
        }
        prop_assert!(verify_invariant(&acc, &f.lzs, &f.z, 1).unwrap().is_proven());
    }
}
