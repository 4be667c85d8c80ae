use std::collections::BTreeMap;

use klr_core::expr::{eval_str, parse, print, EvalContext};
use klr_core::{CartanDatum, ExtendedDatum, KlrAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ALPHABET: &[u8] = b"psixe()*+-^,~0123456789 L_1\t";

#[test]
fn random_bytes_never_panic() {
    let x = ExtendedDatum::new(&CartanDatum::a2()).unwrap();
    let alg = KlrAlgebra::new(x.datum().clone(), x.specialized_params(&BTreeMap::new()).unwrap());
    let ctx = EvalContext::ambient(&alg);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut parsed = 0;
    for k in 0..10_000 {
        let len = rng.gen_range(0..40);
        let bytes: Vec<u8> = if k % 2 == 0 {
            (0..len).map(|_| rng.gen()).collect()
        } else {
            (0..len).map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())]).collect()
        };
        let text = String::from_utf8_lossy(&bytes);
        if parse(&text).is_ok() {
            parsed += 1;
        }
        if let Ok(v) = eval_str(&text, &ctx) {
            let again = eval_str(&print(&alg, v.ambient()), &ctx).unwrap();
            assert_eq!(again.ambient(), v.ambient(), "{text}");
        }
    }
    assert!(parsed > 0);
}

#[test]
fn well_formed_inputs_evaluate() {
    let alg = KlrAlgebra::new(CartanDatum::a1(), klr_core::ScalarParams::trivial(&CartanDatum::a1()));
    let ctx = EvalContext::ambient(&alg);
    for text in ["e(1)", "x1^3*e(1)", "psi1*psi1*e(1,1)", "-x2*psi1*e(1,1) + 1/2*e(1,1)", "(x1 + x2)^2*e(1,1)"] {
        assert!(eval_str(text, &ctx).is_ok(), "{text}");
    }
    assert!(eval_str("psi1*psi1*e(1,1)", &ctx).unwrap().ambient().is_zero());
    assert!(eval_str("x1^99*e(1)", &ctx).is_err());
    assert!(eval_str("e(3)", &ctx).is_err());
}
