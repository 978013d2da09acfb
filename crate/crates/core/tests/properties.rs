mod common;

use proptest::prelude::*;

use multiarr::arr3::{
    self, chamber_count, char_poly, char_poly_affine, euler_chamber_count, is_free_all,
    ziegler_restriction, AffineArrangement2, Arrangement3, CharPoly,
};
use multiarr::document::{ArrangementDocument, Parsed};
use multiarr::exactalg::{binary_form_divides, BinaryForm, Field, LinearForm2, Matrix, Scalar};
use multiarr::multiarr2::{
    derivation_space_dim, exponents, nonbalanced_exponents, Arrangement2, Derivation2, Multiplicity,
};
use multiarr::shift::nabla;

use common::{oracle_dim, oracle_exponents, trimmed, whitney_affine, whitney_central};

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::Rational),
        Just(Field::Prime(2)),
        Just(Field::Prime(5)),
        Just(Field::Prime(101)),
    ]
}

fn matrix(f: Field) -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..6).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-4i64..5, c), r).prop_map(move |rows| {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|x| Scalar::from_i64(f, x)).collect())
                .collect();
            Matrix::from_rows(f, c, rows).unwrap()
        })
    })
}

/// Pairwise independent integer lines over ℚ.
fn lines2(max: usize) -> impl Strategy<Value = Arrangement2> {
    prop::collection::vec((-3i64..4, -3i64..4), 2..=max).prop_filter_map("dependent", |v| {
        let mut kept: Vec<(i64, i64)> = Vec::new();
        for (a, b) in v {
            if (a, b) != (0, 0) && kept.iter().all(|&(c, d)| a * d - b * c != 0) {
                kept.push((a, b));
            }
        }
        (kept.len() >= 2).then(|| Arrangement2::from_ints(Field::Rational, &kept).unwrap())
    })
}

fn multi(max_lines: usize, max_mult: u32) -> impl Strategy<Value = (Arrangement2, Multiplicity)> {
    lines2(max_lines).prop_flat_map(move |a| {
        let n = a.len();
        (
            Just(a),
            prop::collection::vec(1u32..=max_mult, n).prop_map(Multiplicity::new),
        )
    })
}

fn form(f: Field, d: usize) -> impl Strategy<Value = BinaryForm> {
    prop::collection::vec(-3i64..4, d + 1).prop_map(move |c| BinaryForm::from_ints(f, &c))
}

fn derivation(d: usize) -> impl Strategy<Value = Derivation2> {
    (form(Field::Rational, d), form(Field::Rational, d)).prop_map(|(f, g)| Derivation2::new(f, g))
}

fn central3(max: usize) -> impl Strategy<Value = Arrangement3> {
    prop::collection::vec((-2i64..3, -2i64..3, -2i64..3), 2..=max).prop_filter_map(
        "degenerate",
        |v| {
            let mut kept: Vec<(i64, i64, i64)> = Vec::new();
            for (a, b, c) in v {
                let cross = |&(x, y, z): &(i64, i64, i64)| {
                    (b * z - c * y, c * x - a * z, a * y - b * x) == (0, 0, 0)
                };
                if (a, b, c) != (0, 0, 0) && !kept.iter().any(cross) {
                    kept.push((a, b, c));
                }
            }
            (kept.len() >= 2).then(|| Arrangement3::from_ints(Field::Rational, &kept).unwrap())
        },
    )
}

fn affine2(max: usize) -> impl Strategy<Value = AffineArrangement2> {
    prop::collection::vec((-2i64..3, -2i64..3, -2i64..3), 1..=max).prop_filter_map(
        "degenerate",
        |v| {
            let mut kept: Vec<(i64, i64, i64)> = Vec::new();
            for (a, b, c) in v {
                let same = |&(x, y, z): &(i64, i64, i64)| {
                    (b * z - c * y, c * x - a * z, a * y - b * x) == (0, 0, 0)
                };
                if (a, b) != (0, 0) && !kept.iter().any(same) {
                    kept.push((a, b, c));
                }
            }
            (!kept.is_empty())
                .then(|| AffineArrangement2::from_ints(Field::Rational, &kept).unwrap())
        },
    )
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn kernel_vectors_are_annihilated((f, m) in field().prop_flat_map(|f| (Just(f), matrix(f)))) {
        let k = m.kernel_basis().unwrap();
        prop_assert_eq!(k.len(), m.cols() - m.rank().unwrap());
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
            prop_assert_eq!(v[0].field(), f);
        }
    }

    #[test]
    fn rational_rank_matches_oracle(m in matrix(Field::Rational)) {
        let rows = (0..m.rows())
            .map(|r| m.row(r).iter().map(|x| x.as_rational().unwrap().clone()).collect())
            .collect();
        prop_assert_eq!(m.rank().unwrap(), common::rank(rows));
    }

    #[test]
    fn scalar_add_sub_roundtrip(f in field(), a in -1000i64..1000, b in -1000i64..1000) {
        let (x, y) = (Scalar::from_i64(f, a), Scalar::from_i64(f, b));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&(&x * &y), &(&y * &x));
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y).div(&y).unwrap(), &x);
        }
    }

    #[test]
    fn divisibility_agrees_with_division(
        f in field(),
        (a, b) in (-3i64..4, -3i64..4).prop_filter("zero", |&(a, b)| (a, b) != (0, 0)),
        k in 0u32..4,
        q in form(Field::Rational, 3),
    ) {
        let alpha = match LinearForm2::from_ints(f, a, b) {
            Ok(l) => l,
            Err(_) => return Ok(()),
        };
        let q = BinaryForm::from_coeffs(f, q.coeffs().iter().map(|c| Scalar::from_rational(f, c.as_rational().unwrap()).unwrap()).collect());
        let p = alpha.to_form().pow(k).mul(&q);
        prop_assert!(binary_form_divides(&alpha, k, &p));
        let divisor = alpha.to_form().pow(k + 1);
        let (_, rem) = p.div_rem(&divisor);
        prop_assert_eq!(binary_form_divides(&alpha, k + 1, &p), rem.is_zero());
    }

    #[test]
    fn nabla_is_bilinear_and_leibniz(
        t in derivation(1),
        p1 in derivation(2),
        p2 in derivation(2),
        g in form(Field::Rational, 1),
    ) {
        prop_assert_eq!(nabla(&t, &p1.add(&p2)), nabla(&t, &p1).add(&nabla(&t, &p2)));
        let two = Scalar::from_i64(Field::Rational, 2);
        prop_assert_eq!(nabla(&t.scale(&two), &p1), nabla(&t, &p1).scale(&two));
        // ∇_θ(g φ) = θ(g) φ + g ∇_θ φ
        let lhs = nabla(&t, &p1.mul_form(&g));
        let rhs = p1.mul_form(&t.apply(&g)).add(&nabla(&t, &p1).mul_form(&g));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn document_round_trip((a, m) in multi(5, 4), name in "[a-z]{0,6}") {
        let doc = ArrangementDocument::from_multi(Some(&name), &a, &m);
        let text = doc.to_canonical_json();
        let back = ArrangementDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_canonical_json(), text);
        prop_assert_eq!(back.interpret().unwrap(), Parsed::Multi(a, m));
    }
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn exponents_match_oracle((a, m) in multi(4, 3)) {
        let e = exponents(&a, &m).unwrap();
        prop_assert_eq!(e.d1 + e.d2, m.total());
        prop_assert_eq!((e.d1, e.d2), oracle_exponents(&a, m.values()));
    }

    #[test]
    fn hilbert_function_is_two_shifted_lines((a, m) in multi(4, 3)) {
        let e = exponents(&a, &m).unwrap();
        for d in 0..=(m.total() as usize + 1) {
            let law = (d + 1).saturating_sub(e.d1 as usize) + (d + 1).saturating_sub(e.d2 as usize);
            prop_assert_eq!(derivation_space_dim(&a, &m, d).unwrap(), law);
            prop_assert_eq!(oracle_dim(&a, m.values(), d), law);
        }
    }

    #[test]
    fn exponents_are_coordinate_invariant(
        (a, m) in multi(4, 3),
        t in [-2i64..3, -2i64..3, -2i64..3, -2i64..3],
    ) {
        prop_assume!(t[0] * t[3] - t[1] * t[2] != 0);
        let s = |x| Scalar::from_i64(Field::Rational, x);
        let b = a.pullback(&[[s(t[0]), s(t[1])], [s(t[2]), s(t[3])]]).unwrap();
        prop_assert_eq!(exponents(&a, &m).unwrap(), exponents(&b, &m).unwrap());
    }

    #[test]
    fn unbalanced_fast_path_agrees((a, mut m) in multi(4, 2), k in 0usize..4, extra in 0u32..3) {
        let k = k % a.len();
        let mut v = m.values().to_vec();
        let rest: u32 = v.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &x)| x).sum();
        v[k] = rest + 1 + extra;
        m = Multiplicity::new(v);
        let (e, theta) = nonbalanced_exponents(&a, &m).unwrap();
        prop_assert_eq!(e, exponents(&a, &m).unwrap());
        prop_assert!(theta.is_member(&a, &m));
    }

    #[test]
    fn coning_multiplies_by_t_minus_one(a in affine2(6)) {
        let (c, _) = arr3::cone(&a).unwrap();
        let chi_bar = char_poly_affine(&a);
        prop_assert_eq!(chi_bar.coeffs().to_vec(), trimmed(whitney_affine(&a)));
        prop_assert_eq!(char_poly(&c).coeffs().to_vec(), trimmed(whitney_central(&c)));
        prop_assert_eq!(char_poly(&c), CharPoly::from_roots(&[1]).mul(&chi_bar));
    }

    #[test]
    fn chamber_count_matches_euler(a in affine2(7)) {
        let z = chamber_count(&a).unwrap();
        prop_assert_eq!(z.zaslavsky, euler_chamber_count(&a).unwrap());
        prop_assert_eq!(z.zaslavsky as i64, char_poly_affine(&a).eval(-1).abs());
    }

    #[test]
    fn freeness_is_independent_of_h0(a in central3(6)) {
        let verdicts = is_free_all(&a).unwrap();
        let chi = char_poly(&a);
        for (h0, v) in verdicts.iter().enumerate() {
            prop_assert_eq!(v.free, verdicts[0].free);
            prop_assert!(v.coker_dim >= 0);
            let z = ziegler_restriction(&a, h0).unwrap();
            prop_assert_eq!(z.multiplicity.total(), a.len() as u64 - 1);
            if let Some([_, d1, d2]) = v.exponents {
                prop_assert_eq!(&chi, &CharPoly::from_roots(&[1, d1 as i64, d2 as i64]));
            }
        }
    }
}
