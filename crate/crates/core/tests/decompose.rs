use maxrank::decompose::{
    certify, fit_rank, local_model, local_model_dim, two_point_split_complex, two_point_split_real, FitOptions,
};
use maxrank::rng::{substream, Domain};
use maxrank::{cone_point, evaluate, AmbientPoint, ConeParam, Decomposition, Error, Field, VarietySpec};
use num_complex::Complex64;
use rand::Rng;

fn opts(seed: u64) -> FitOptions {
    FitOptions { seed, ..FitOptions::default() }
}

fn random_real(spec: &VarietySpec, seed: u64) -> AmbientPoint {
    let mut rng = substream(seed, Domain::RealPoints, 0);
    let v: Vec<f64> = (0..spec.ambient_affine_dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
    AmbientPoint::real(spec.clone(), &v).unwrap()
}

/// Exponent tuples of degree `d` in `n` variables, lexicographically decreasing.
fn monomials(n: usize, d: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .rev()
        .flat_map(|e| {
            monomials(n - 1, d - e).into_iter().map(move |mut rest| {
                rest.insert(0, e);
                rest
            })
        })
        .collect()
}

/// `sum_i c_i l_i^d` expanded by the multinomial theorem.
fn power_sum_oracle(dec: &Decomposition, n: usize, d: usize) -> Vec<f64> {
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    monomials(n, d)
        .iter()
        .map(|e| {
            let m = fact(d) / e.iter().map(|&k| fact(k)).product::<f64>();
            dec.terms()
                .iter()
                .map(|t| {
                    let l = t.param.real_values();
                    t.coeff.re * m * e.iter().zip(&l).map(|(&k, x)| x.powi(k as i32)).product::<f64>()
                })
                .sum()
        })
        .collect()
}

#[test]
fn gradient_matches_finite_differences() {
    for (spec, r, field) in [
        (VarietySpec::veronese(3, 3).unwrap(), 3, Field::Real),
        (VarietySpec::segre(&[2, 3, 2]).unwrap(), 2, Field::Real),
        (VarietySpec::veronese(2, 4).unwrap(), 2, Field::Complex),
        (VarietySpec::grassmannian(2, 4).unwrap(), 2, Field::Complex),
    ] {
        let target = random_real(&spec, 4);
        let m = local_model_dim(&spec, r, field);
        let mut rng = substream(99, Domain::Fit, 0);
        let x: Vec<f64> = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lm = local_model(&target, r, field, &x).unwrap();
        let h = 1e-6;
        for k in 0..m {
            let (mut xp, mut xm) = (x.clone(), x.clone());
            xp[k] += h;
            xm[k] -= h;
            let fd = (local_model(&target, r, field, &xp).unwrap().objective
                - local_model(&target, r, field, &xm).unwrap().objective)
                / (2.0 * h);
            let g = lm.gradient[k];
            assert!((fd - g).abs() <= 1e-5 * (1.0 + g.abs()), "{spec} coordinate {k}: {fd} vs {g}");
        }
        // The Gauss-Newton step is a descent direction.
        let dot: f64 = lm.gradient.iter().zip(&lm.gauss_newton).map(|(a, b)| a * b).sum();
        assert!(dot < 0.0, "{spec}");
        assert!(local_model(&target, r, field, &x[1..]).is_err());
    }
}

#[test]
fn rank_one_points_fit_at_rank_one() {
    let spec = VarietySpec::veronese(3, 4).unwrap();
    let target = cone_point(&spec, &ConeParam::real(&[0.7, -1.2, 0.4])).unwrap();
    for field in [Field::Real, Field::Complex] {
        let o = FitOptions { target_relative_residual: 1e-10, ..opts(1) };
        let dec = fit_rank(&target, 1, field, &o).unwrap();
        assert_eq!(dec.len(), 1);
        assert!(certify(&dec, &target).unwrap() <= 1e-10);
    }
}

#[test]
fn real_fits_stay_real() {
    let spec = VarietySpec::segre(&[2, 2, 2]).unwrap();
    let a = cone_point(&spec, &ConeParam::real(&[1.0, 2.0, -1.0, 0.5, 3.0, 1.0])).unwrap();
    let b = cone_point(&spec, &ConeParam::real(&[0.3, -1.0, 2.0, 1.0, -0.5, 2.0])).unwrap();
    let coeffs: Vec<f64> = a.real_coeffs().iter().zip(b.real_coeffs()).map(|(x, y)| x - y).collect();
    let target = AmbientPoint::real(spec, &coeffs).unwrap();
    let dec = fit_rank(&target, 2, Field::Real, &opts(3)).unwrap();
    assert_eq!(dec.field(), Field::Real);
    for t in dec.terms() {
        assert_eq!(t.coeff.im, 0.0);
        assert!(t.param.values().iter().all(|z| z.im == 0.0));
    }
    assert!(evaluate(&dec).unwrap().coeffs().iter().all(|z| z.im == 0.0));
}

#[test]
fn fits_are_deterministic_per_seed() {
    let spec = VarietySpec::veronese(3, 4).unwrap();
    let target = random_real(&spec, 8);
    let a = fit_rank(&target, 6, Field::Complex, &opts(5)).unwrap();
    let b = fit_rank(&target, 6, Field::Complex, &opts(5)).unwrap();
    assert_eq!(a, b);
    assert!(a.residual().unwrap() <= 1e-8);
}

#[test]
fn underparameterized_fit_fails_honestly() {
    // V(3,4) has generic rank 6; a general quartic is not a sum of 4 powers.
    let spec = VarietySpec::veronese(3, 4).unwrap();
    let target = random_real(&spec, 2);
    let o = FitOptions { restarts: 2, max_iterations: 200, ..opts(0) };
    assert!(matches!(fit_rank(&target, 4, Field::Complex, &o), Err(Error::FitFailed { .. })));
}

#[test]
fn real_split_of_a_rank_four_binary_quartic() {
    // x^3 y has real rank 4; the generic real rank of quartics is 3.
    let spec = VarietySpec::veronese(2, 4).unwrap();
    let target = AmbientPoint::real(spec, &[0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    let rep = two_point_split_real(&target, 3, &opts(0)).unwrap();
    assert!(rep.length <= 6);
    assert!(rep.relative_residual <= 1e-8);
    let oracle = power_sum_oracle(&rep.combined, 2, 4);
    let err = oracle.iter().zip(target.real_coeffs()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
    assert!(err <= 1e-7, "{err}");
}

#[test]
fn complex_split_of_plane_quartics() {
    let spec = VarietySpec::veronese(3, 4).unwrap();
    for seed in 0..5 {
        let target = random_real(&spec, 100 + seed);
        let rep = two_point_split_complex(&target, 6, &opts(seed)).unwrap();
        assert!(rep.length <= 12);
        assert_eq!(rep.combined.field(), Field::Complex);
        let back = evaluate(&rep.combined).unwrap();
        let t = AmbientPoint::new(target.spec().clone(), Field::Complex, target.coeffs().to_vec()).unwrap();
        assert!(back.relative_distance(&t) <= 1e-8);
        assert_eq!(rep.input, target);
    }
}

#[test]
fn real_split_of_cubics_matches_oracle() {
    let spec = VarietySpec::veronese(3, 3).unwrap();
    for seed in 0..5 {
        let target = random_real(&spec, 200 + seed);
        let rep = two_point_split_real(&target, 4, &opts(seed)).unwrap();
        assert!(rep.length <= 8);
        let oracle = power_sum_oracle(&rep.combined, 3, 3);
        let tn = target.norm();
        let err = oracle.iter().zip(target.real_coeffs()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        assert!(err <= 1e-7 * tn, "{err}");
    }
}

#[test]
fn splits_reject_bad_input() {
    let spec = VarietySpec::veronese(2, 3).unwrap();
    let zero = AmbientPoint::zero(spec.clone(), Field::Real);
    assert!(two_point_split_complex(&zero, 2, &opts(0)).is_err());
    let complex = AmbientPoint::new(spec, Field::Complex, vec![Complex64::new(0.0, 1.0); 4]).unwrap();
    assert!(two_point_split_real(&complex, 2, &opts(0)).is_err());
    let bad = FitOptions { restarts: 0, ..opts(0) };
    assert!(fit_rank(&random_real(&VarietySpec::veronese(2, 3).unwrap(), 0), 2, Field::Real, &bad).is_err());
}

#[test]
fn certify_measures_relative_distance() {
    let spec = VarietySpec::veronese(2, 3).unwrap();
    let param = ConeParam::real(&[1.0, 1.0]);
    let target = cone_point(&spec, &param).unwrap();
    let term = maxrank::Term { coeff: Complex64::new(1.0, 0.0), param };
    let dec = Decomposition::new(spec.clone(), Field::Real, vec![term], None).unwrap();
    assert_eq!(certify(&dec, &target).unwrap(), 0.0);
    let half = dec.scaled(Complex64::new(0.5, 0.0)).unwrap();
    assert!((certify(&half, &target).unwrap() - 0.5).abs() < 1e-15);
}
