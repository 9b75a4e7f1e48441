use rug::Rational;
use strip_core::{hilbert_polynomial, verlinde_det, verlinde_trig};

#[test]
fn determinant_matches_trigonometric_sum() {
    for g in 2..=10 {
        for k in 0..=12 {
            assert_eq!(
                verlinde_det(g, k).unwrap(),
                verlinde_trig(g, k, 512).unwrap(),
                "g={g} k={k}"
            );
        }
    }
}

#[test]
fn strictly_increasing_in_level() {
    for g in 2..=10 {
        let values: Vec<_> = (1..=12).map(|k| verlinde_det(g, k).unwrap()).collect();
        assert!(values[0] > 0);
        assert!(values.windows(2).all(|w| w[0] < w[1]), "g={g}");
    }
}

#[test]
fn hilbert_polynomial_reproduces_verlinde_numbers() {
    for g in 2..=6 {
        let h = hilbert_polynomial(g).unwrap();
        for k in 0..=20 {
            assert_eq!(
                h.eval_int(k),
                Rational::from(verlinde_det(g, k as u32).unwrap()),
                "g={g} k={k}"
            );
        }
    }
}

#[test]
fn serre_symmetry_at_value_level() {
    for g in 2..=8 {
        let h = hilbert_polynomial(g).unwrap();
        let sign = if (3 * g - 3) % 2 == 0 { 1 } else { -1 };
        for k in 0..=6i64 {
            assert_eq!(h.eval_int(k), h.eval_int(-k - 2) * sign, "g={g} k={k}");
        }
    }
}
