use maxrank::{cone_jacobian, cone_point, evaluate, AmbientPoint, ConeParam, Decomposition, Field, Term, VarietySpec};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Exponent tuples of degree `d` in `n` variables, lexicographically decreasing.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            go(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, d, &mut Vec::new(), &mut out);
    out
}

/// Coefficients of `(sum l_i x_i)^d` by the multinomial theorem.
fn veronese_oracle(l: &[f64], d: u32) -> Vec<f64> {
    monomials(l.len(), d)
        .iter()
        .map(|e| {
            let multinomial = factorial(d) / e.iter().map(|&k| factorial(k)).product::<f64>();
            multinomial * e.iter().zip(l).map(|(&k, &x)| x.powi(k as i32)).product::<f64>()
        })
        .collect()
}

fn close(a: &[Complex64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.re - y).abs() <= tol * (1.0 + y.abs()) && x.im == 0.0)
}

#[test]
fn veronese_matches_multinomial_expansion() {
    for (n, d) in [(2, 3), (3, 4), (4, 3), (3, 5)] {
        let spec = VarietySpec::veronese(n, d).unwrap();
        let l: Vec<f64> = (0..n).map(|i| 0.5 + i as f64 * 0.75 - (i % 2) as f64 * 2.0).collect();
        let p = cone_point(&spec, &ConeParam::real(&l)).unwrap();
        assert!(close(p.coeffs(), &veronese_oracle(&l, d as u32), 1e-12), "{spec}");
    }
}

#[test]
fn binary_quartic_basis_order() {
    // (x + 2y)^4 = x^4 + 8x^3y + 24x^2y^2 + 32xy^3 + 16y^4
    let spec = VarietySpec::veronese(2, 4).unwrap();
    let p = cone_point(&spec, &ConeParam::real(&[1.0, 2.0])).unwrap();
    assert!(close(p.coeffs(), &[1.0, 8.0, 24.0, 32.0, 16.0], 0.0));
}

#[test]
fn segre_is_row_major_outer_product() {
    let spec = VarietySpec::segre(&[2, 3, 2]).unwrap();
    let (a, b, w) = ([1.0, -2.0], [3.0, 0.5, -1.0], [2.0, 7.0]);
    let params: Vec<f64> = a.iter().chain(&b).chain(&w).copied().collect();
    let p = cone_point(&spec, &ConeParam::real(&params)).unwrap();
    let mut want = Vec::new();
    for x in a {
        for y in b {
            for z in w {
                want.push(x * y * z);
            }
        }
    }
    assert!(close(p.coeffs(), &want, 0.0));
}

#[test]
fn grassmannian_plucker_relation() {
    // G(2,4): p12 p34 - p13 p24 + p14 p23 = 0, subsets in lex order
    // 12, 13, 14, 23, 24, 34.
    let spec = VarietySpec::grassmannian(2, 4).unwrap();
    let v = [1.0, 2.0, -1.0, 3.0, 0.5, -4.0, 2.0, 1.0];
    let p = cone_point(&spec, &ConeParam::real(&v)).unwrap().real_coeffs();
    let rel = p[0] * p[5] - p[1] * p[4] + p[2] * p[3];
    assert!(rel.abs() < 1e-12, "{rel}");
    // p12 is the leading 2x2 minor.
    assert_eq!(p[0], 1.0 * -4.0 - 2.0 * 0.5);
}

#[test]
fn grassmannian_three_planes_satisfy_minor_identity() {
    // Plücker coordinates of a 3-plane in 6 space: each equals a 3x3 minor.
    let spec = VarietySpec::grassmannian(3, 6).unwrap();
    let v: Vec<f64> = (0..18).map(|i| ((i * 7 % 11) as f64) - 5.0).collect();
    let p = cone_point(&spec, &ConeParam::real(&v)).unwrap().real_coeffs();
    let det3 = |cols: [usize; 3]| {
        let m = |r: usize, c: usize| v[r * 6 + cols[c]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    let mut k = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                assert!((p[k] - det3([a, b, c])).abs() < 1e-9);
                k += 1;
            }
        }
    }
    assert_eq!(k, p.len());
}

#[test]
fn power_of_forms_squares_a_quadric() {
    // (x^2 + y^2)^2 = x^4 + 2 x^2 y^2 + y^4 in V(2,4) order.
    let spec = VarietySpec::power_of_forms(2, 2, 2).unwrap();
    let p = cone_point(&spec, &ConeParam::real(&[1.0, 0.0, 1.0])).unwrap();
    assert!(close(p.coeffs(), &[1.0, 0.0, 2.0, 0.0, 1.0], 0.0));
}

fn specs() -> Vec<VarietySpec> {
    vec![
        VarietySpec::veronese(3, 4).unwrap(),
        VarietySpec::veronese(2, 5).unwrap(),
        VarietySpec::segre(&[2, 2, 2]).unwrap(),
        VarietySpec::segre(&[3, 3, 3]).unwrap(),
        VarietySpec::grassmannian(2, 5).unwrap(),
        VarietySpec::grassmannian(3, 6).unwrap(),
        VarietySpec::power_of_forms(3, 2, 2).unwrap(),
    ]
}

fn complex_param(spec: &VarietySpec, salt: f64) -> ConeParam {
    let v = (0..spec.param_dim())
        .map(|i| c(((i as f64 + salt) * 1.37).sin(), ((i as f64 * 0.61 + salt) * 2.11).cos()))
        .collect();
    ConeParam::complex(v)
}

#[test]
fn jacobian_matches_central_differences() {
    for spec in specs() {
        let param = complex_param(&spec, 0.3);
        let jac = cone_jacobian(&spec, &param).unwrap();
        let h = 1e-6;
        for j in 0..spec.param_dim() {
            let shift = |s: f64| {
                let mut v = param.values().to_vec();
                v[j] += s;
                cone_point(&spec, &ConeParam::complex(v)).unwrap()
            };
            let (plus, minus) = (shift(h), shift(-h));
            for i in 0..spec.ambient_affine_dim() {
                let fd = (plus.coeffs()[i] - minus.coeffs()[i]) / (2.0 * h);
                let an = jac[(i, j)];
                assert!((fd - an).norm() <= 1e-6 * (1.0 + an.norm()), "{spec} ({i},{j}): {fd} vs {an}");
            }
        }
    }
}

#[test]
fn cone_points_are_homogeneous() {
    for spec in specs() {
        let param = complex_param(&spec, 1.1);
        let t = c(0.7, -1.3);
        let scaled = ConeParam::complex(param.values().iter().map(|z| z * t).collect());
        let w = spec.homogeneity_weight() as i32;
        let p = cone_point(&spec, &param).unwrap();
        let q = cone_point(&spec, &scaled).unwrap();
        let tw = t.powi(w);
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            assert!((a * tw - b).norm() <= 1e-10 * (1.0 + b.norm()), "{spec}");
        }
    }
}

#[test]
fn real_parameters_give_exactly_real_points() {
    for spec in specs() {
        let v: Vec<f64> = (0..spec.param_dim()).map(|i| (i as f64 * 0.9).sin()).collect();
        let p = cone_point(&spec, &ConeParam::real(&v)).unwrap();
        assert_eq!(p.field(), Field::Real);
        assert!(p.coeffs().iter().all(|z| z.im == 0.0));
    }
}

#[test]
fn evaluate_is_the_weighted_sum() {
    let spec = VarietySpec::veronese(2, 3).unwrap();
    let terms = vec![
        Term { coeff: c(2.0, 0.0), param: ConeParam::real(&[1.0, 1.0]) },
        Term { coeff: c(-1.0, 0.0), param: ConeParam::real(&[1.0, -1.0]) },
    ];
    let dec = Decomposition::new(spec, Field::Real, terms, None).unwrap();
    // 2(x+y)^3 - (x-y)^3 = x^3 + 9x^2y + 3xy^2 + 3y^3
    let p = evaluate(&dec).unwrap();
    assert!(close(p.coeffs(), &[1.0, 9.0, 3.0, 3.0], 0.0));
}

#[test]
fn decomposition_rejects_malformed_terms() {
    let spec = VarietySpec::veronese(2, 3).unwrap();
    let zero = vec![Term { coeff: c(1.0, 0.0), param: ConeParam::real(&[0.0, 0.0]) }];
    assert!(Decomposition::new(spec.clone(), Field::Real, zero, None).is_err());
    let short = vec![Term { coeff: c(1.0, 0.0), param: ConeParam::real(&[1.0]) }];
    assert!(Decomposition::new(spec.clone(), Field::Real, short, None).is_err());
    let mixed = vec![Term { coeff: c(1.0, 0.0), param: ConeParam::complex(vec![c(1.0, 0.0); 2]) }];
    assert!(Decomposition::new(spec, Field::Real, mixed, None).is_err());
}

#[test]
fn ambient_point_json_layout() {
    let spec = VarietySpec::veronese(3, 4).unwrap();
    let mut coeffs = vec![c(0.0, 0.0); 15];
    coeffs[0] = c(1.5, -2.0);
    let p = AmbientPoint::new(spec, Field::Complex, coeffs).unwrap();
    let v: serde_json::Value = serde_json::to_value(&p).unwrap();
    assert_eq!(v["family"], "veronese");
    assert_eq!(v["params"]["n"], 3);
    assert_eq!(v["params"]["d"], 4);
    assert_eq!(v["field"], "complex");
    assert_eq!(v["coeffs_re"][0], 1.5);
    assert_eq!(v["coeffs_im"][0], -2.0);
    let back: AmbientPoint = serde_json::from_value(v).unwrap();
    assert_eq!(back, p);
}

#[test]
fn json_rejects_inconsistent_points() {
    let bad = [
        r#"{"family":"veronese","params":{"n":2,"d":3},"field":"real","coeffs_re":[1,2,3]}"#,
        r#"{"family":"veronese","params":{"n":2,"d":3},"field":"complex","coeffs_re":[1,2,3,4]}"#,
        r#"{"family":"veronese","params":{"n":2,"d":3},"field":"real","coeffs_re":[1,2,3,4],"coeffs_im":[0,0,1,0]}"#,
        r#"{"family":"veronese","params":{"n":1,"d":3},"field":"real","coeffs_re":[1]}"#,
        r#"{"family":"segre","params":{"formats":[2]},"field":"real","coeffs_re":[1,2]}"#,
    ];
    for s in bad {
        assert!(serde_json::from_str::<AmbientPoint>(s).is_err(), "{s}");
    }
}

prop_compose! {
    fn arb_spec()(choice in 0usize..4, a in 2usize..4, b in 2usize..4) -> VarietySpec {
        match choice {
            0 => VarietySpec::veronese(a, b + 1).unwrap(),
            1 => VarietySpec::segre(&[a, b, 2]).unwrap(),
            2 => VarietySpec::grassmannian(2, a + b).unwrap(),
            _ => VarietySpec::power_of_forms(a, 2, b).unwrap(),
        }
    }
}

proptest! {
    #[test]
    fn decomposition_json_round_trips(
        spec in arb_spec(),
        complex in any::<bool>(),
        seed in any::<u64>(),
        len in 1usize..4,
        residual in proptest::option::of(0.0f64..1.0),
    ) {
        let field = if complex { Field::Complex } else { Field::Real };
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 4.0 - 2.0 + 1e-3
        };
        let terms: Vec<Term> = (0..len)
            .map(|_| {
                let mut z = || if complex { c(next(), next()) } else { c(next(), 0.0) };
                let coeff = z();
                let values = (0..spec.param_dim()).map(|_| z()).collect();
                Term { coeff, param: ConeParam::new(field, values).unwrap() }
            })
            .collect();
        let dec = Decomposition::new(spec, field, terms, residual).unwrap();
        let text = serde_json::to_string(&dec).unwrap();
        let back: Decomposition = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &dec);
        let p = evaluate(&dec).unwrap();
        let back: AmbientPoint = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        prop_assert_eq!(back, p);
    }
}
