use maxrank::binary::{
    apolar_kernel, catalecticant, complex_rank, exact_decomposition, expand_exact, parse_binary_form, rank, real_rank,
    sylvester_decompose, BinaryForm, Minimality,
};
use maxrank::typical::sample_binary_form;
use maxrank::{evaluate, Field};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn form(s: &str) -> BinaryForm {
    parse_binary_form(s).unwrap()
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Real roots of `f(t, 1)` plus a root at infinity, counted with
/// multiplicity, from companion-matrix eigenvalues.
fn real_root_count_numeric(coeffs: &[i64]) -> usize {
    let d = coeffs.len() - 1;
    let mut at_infinity = 0;
    let mut c: Vec<f64> = coeffs.iter().map(|&x| x as f64).collect();
    while c[0] == 0.0 {
        c.remove(0);
        at_infinity += 1;
    }
    // f(t,1) = c0 t^e + c1 t^(e-1) + ... ; companion of the monic version.
    let e = c.len() - 1;
    if e == 0 {
        return at_infinity;
    }
    let m = DMatrix::from_fn(e, e, |i, j| {
        if i == 0 {
            -c[j + 1] / c[0]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eig = m.complex_eigenvalues();
    let scale = eig.iter().map(|z| z.norm()).fold(1.0, f64::max);
    assert_eq!(d, e + at_infinity);
    eig.iter().filter(|z| z.im.abs() <= 1e-7 * scale).count() + at_infinity
}

fn check_certificate(f: &BinaryForm, field: Field) -> usize {
    let cert = rank(f, field).unwrap();
    assert!(cert.verify(f), "{f}: certificate does not verify");
    let dec = sylvester_decompose(&cert, f).unwrap();
    assert_eq!(dec.len(), cert.rank);
    let back = evaluate(&dec).unwrap();
    let dist = back.relative_distance(&f.to_point());
    assert!(dist < 1e-9, "{f}: decomposition off by {dist}");
    if let Some(terms) = exact_decomposition(&cert, f).unwrap() {
        assert_eq!(&expand_exact(&terms, f.degree()).unwrap(), f);
    }
    cert.rank
}

#[test]
fn structured_complex_ranks() {
    for d in 3..=10 {
        let mut c = vec![0; d + 1];
        c[1] = 1;
        let f = BinaryForm::from_ints(&c).unwrap();
        assert_eq!(check_certificate(&f, Field::Complex), d, "x^{}y", d - 1);
        let mut c = vec![0; d + 1];
        c[0] = 1;
        assert_eq!(check_certificate(&BinaryForm::from_ints(&c).unwrap(), Field::Complex), 1);
    }
    assert_eq!(check_certificate(&form("x^3 + y^3"), Field::Complex), 2);
    assert_eq!(check_certificate(&form("x*y"), Field::Complex), 2);
    assert_eq!(check_certificate(&form("x^2*y^2"), Field::Complex), 3);
}

#[test]
fn classical_real_ranks() {
    let cases = [
        ("x^3*y", 4),
        ("x^3 + y^3", 2),
        ("x^3 - 3*x*y^2", 3),
        ("x^2*y", 3),
        ("x*y*(x + y)", 3),
        ("x^6", 1),
        ("x^4 + y^4", 2),
        ("x^5*y", 6),
        ("x*y", 2),
        ("x^2 + y^2", 2),
    ];
    for (s, r) in cases {
        let f = form(s);
        assert_eq!(check_certificate(&f, Field::Real), r, "{s}");
        assert_eq!(real_rank(&f).unwrap().minimality, Minimality::Proven, "{s}");
    }
    // xy(x+y): complex rank 2 but real rank 3.
    assert_eq!(complex_rank(&form("x*y*(x+y)")).unwrap().rank, 2);
}

#[test]
fn cubic_real_rank_follows_root_count() {
    // Square-free real cubics: rank 3 with three real roots, else 2.
    for i in 0..60 {
        let f = sample_binary_form(3, 11, i).unwrap();
        let ints: Vec<i64> = f.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        let want = if real_root_count_numeric(&ints) == 3 { 3 } else { 2 };
        assert_eq!(check_certificate(&f, Field::Real), want, "{f}");
    }
}

#[test]
fn quartic_real_rank_follows_root_count() {
    // Generic real quartics: rank 4 exactly when all roots are real, else 3.
    for i in 0..60 {
        let f = sample_binary_form(4, 12, i).unwrap();
        let ints: Vec<i64> = f.coeffs().iter().map(|c| c.to_integer().try_into().unwrap()).collect();
        let want = if real_root_count_numeric(&ints) == 4 { 4 } else { 3 };
        assert_eq!(check_certificate(&f, Field::Real), want, "{f}");
    }
}

#[test]
fn random_forms_have_generic_complex_rank() {
    for d in 3..=10 {
        for i in 0..10 {
            let f = sample_binary_form(d, 5, i).unwrap();
            assert_eq!(complex_rank(&f).unwrap().rank, d.div_ceil(2) + usize::from(d % 2 == 0), "{f}");
        }
    }
}

#[test]
fn catalecticant_shape_and_kernel() {
    let f = form("x^4 + y^4");
    let cat = catalecticant(&f, 2).unwrap();
    assert_eq!((cat.len(), cat[0].len()), (3, 3));
    // a = (1, 0, 0, 0, 1): the kernel at order 2 is spanned by X Y.
    let k = apolar_kernel(&f, 2).unwrap();
    assert_eq!(k.len(), 1);
    let g = &k[0];
    assert!(g.coeffs()[0] == q(0) && g.coeffs()[2] == q(0) && g.coeffs()[1] != q(0));
    assert!(catalecticant(&f, 5).is_err());
}

#[test]
fn zero_form_is_rejected() {
    let z = BinaryForm::from_ints(&[0, 0, 0]).unwrap();
    assert!(complex_rank(&z).is_err());
    assert!(real_rank(&z).is_err());
}

#[test]
fn foreign_certificate_is_rejected() {
    let cert = complex_rank(&form("x^3 + y^3")).unwrap();
    assert!(!cert.verify(&form("x^2*y")));
    assert!(sylvester_decompose(&cert, &form("x^2*y")).is_err());
}

prop_compose! {
    fn arb_form(max_d: usize)(d in 2..=max_d)(c in prop::collection::vec(-20i64..=20, d + 1)) -> Vec<i64> {
        c
    }
}

prop_compose! {
    fn arb_matrix()(m in prop::array::uniform4(-3i64..=3).prop_filter("invertible", |m| m[0] * m[3] != m[1] * m[2])) -> [[BigRational; 2]; 2] {
        [[q(m[0]), q(m[1])], [q(m[2]), q(m[3])]]
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ranks_are_invariant_under_real_substitutions(c in arb_form(6), m in arb_matrix(), s in -5i64..=5) {
        let f = BinaryForm::from_ints(&c).unwrap();
        prop_assume!(!f.is_zero());
        prop_assume!(s != 0);
        let g = f.compose(&m).scale(&q(s));
        let (cf, rf) = (complex_rank(&f).unwrap(), real_rank(&f).unwrap());
        let (cg, rg) = (complex_rank(&g).unwrap(), real_rank(&g).unwrap());
        prop_assert_eq!(cf.rank, cg.rank);
        if rf.minimality == Minimality::Proven && rg.minimality == Minimality::Proven {
            prop_assert_eq!(rf.rank, rg.rank);
        }
        prop_assert!(cf.rank <= rf.rank && rf.rank <= f.degree());
        prop_assert!(cf.verify(&f) && rf.verify(&f) && cg.verify(&g) && rg.verify(&g));
    }

    #[test]
    fn display_parses_back(c in arb_form(8), den in 1i64..30) {
        let f = BinaryForm::new(c.iter().map(|&x| BigRational::new(x.into(), den.into())).collect()).unwrap();
        prop_assume!(!f.is_zero());
        prop_assert_eq!(parse_binary_form(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn form_json_round_trips(c in arb_form(8), den in 1i64..50) {
        let f = BinaryForm::new(c.iter().map(|&x| BigRational::new(x.into(), den.into())).collect()).unwrap();
        let back: BinaryForm = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}
