use proptest::prelude::*;
use twistfold::braid::{burau_matrix, h_rods, BraidWord};
use twistfold::Error;

fn word_strategy(max_len: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 1..=max_len)
        .prop_map(|codes| BraidWord::from_codes(&codes).unwrap())
}

/// Plain 2x2 integer product, independent of the library's matrix type.
fn mul(a: [i64; 4], b: [i64; 4]) -> [i64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn concatenation_composes(a in word_strategy(12), b in word_strategy(12)) {
        let ab = burau_matrix(&a.concat(&b)).unwrap().entries();
        let ma = burau_matrix(&a).unwrap().entries();
        let mb = burau_matrix(&b).unwrap().entries();
        prop_assert_eq!(ab, mul(mb, ma));
    }

    #[test]
    fn word_times_inverse_is_identity(w in word_strategy(20)) {
        prop_assert!(burau_matrix(&w.concat(&w.inverse())).unwrap().is_identity());
        prop_assert!(burau_matrix(&w.inverse().concat(&w)).unwrap().is_identity());
    }

    #[test]
    fn rotation_preserves_spectrum(w in word_strategy(20), shift in 0usize..40) {
        let m = burau_matrix(&w).unwrap();
        let r = burau_matrix(&w.rotate(shift)).unwrap();
        prop_assert_eq!(m.trace(), r.trace());
        prop_assert_eq!(m.det(), r.det());
        prop_assert_eq!(h_rods(&w).unwrap().h_rods, h_rods(&w.rotate(shift)).unwrap().h_rods);
    }

    #[test]
    fn entropy_scales_with_powers(w in word_strategy(8), n in 1usize..=5) {
        let h = h_rods(&w).unwrap().h_rods;
        prop_assert!(h >= 0.0);
        match h_rods(&w.pow(n).unwrap()) {
            Ok(hn) => prop_assert!((hn.h_rods - n as f64 * h).abs() <= 1e-10 * (1.0 + n as f64 * h)),
            Err(Error::Overflow) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }
}

#[test]
fn twist_pairs_match_closed_form() {
    for k in 1..=6i64 {
        for l in 1..=6i64 {
            let m = burau_matrix(&BraidWord::twist_pair(k, l).unwrap()).unwrap();
            assert_eq!(m.entries(), [1 + k * l, l, k, 1], "k={k} l={l}");
        }
    }
}
