use adams_core::profile::CONTINUITY_TOL;
use adams_core::{Piece, PiecewiseProfile, PowerTerm};
use proptest::prelude::*;

#[test]
fn json_round_trip() {
    let g = PiecewiseProfile::new(
        vec![0.0, 1.0, 3.0],
        vec![
            Piece::linear(0.0, 1.0),
            Piece::PowerSum {
                shift: 0.0,
                terms: vec![PowerTerm::new(1.0, 0.5)],
                log_coef: 0.0,
            },
        ],
        Some(Piece::ExpSaturation {
            offset: 3f64.sqrt(),
            coef: 0.2,
            rate: 1.0,
            start: 3.0,
        }),
    )
    .unwrap();
    let text = serde_json::to_string(&g).unwrap();
    let back: PiecewiseProfile = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let first = &v.as_array().unwrap()[0];
    for key in ["knot", "value", "piece_kind", "params"] {
        assert!(first.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn continuity_enforced() {
    let bad = PiecewiseProfile::new(
        vec![0.0, 1.0, 2.0],
        vec![Piece::constant(0.0), Piece::constant(1.0)],
        None,
    );
    assert!(bad.is_err());
    let ok = PiecewiseProfile::with_jumps(
        vec![0.0, 1.0, 2.0],
        vec![Piece::constant(0.0), Piece::constant(1.0)],
        None,
    )
    .unwrap();
    assert!(!ok.is_continuous());
    assert_eq!(ok.value(1.0).unwrap(), 1.0);
}

proptest! {
    #[test]
    fn linear_chain_continuous(vals in prop::collection::vec(-10.0f64..10.0, 2..10)) {
        let knots: Vec<f64> = (0..vals.len()).map(|i| i as f64).collect();
        let pieces: Vec<Piece> = vals.windows(2).enumerate()
            .map(|(i, w)| Piece::linear(w[0] - (w[1] - w[0]) * i as f64, w[1] - w[0]))
            .collect();
        let g = PiecewiseProfile::new(knots.clone(), pieces, None).unwrap();
        for (k, v) in knots.iter().zip(&vals) {
            prop_assert!((g.value(*k).unwrap() - v).abs() <= CONTINUITY_TOL * (1.0 + v.abs()));
        }
        let back: PiecewiseProfile = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }
}
