use l1lab::*;
use proptest::prelude::*;

fn naive_lp(x: &[f64], p: f64) -> f64 {
    x.iter().map(|v| v.abs().powf(p)).sum::<f64>().powf(1.0 / p)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn norms() -> Vec<SequenceNorm> {
    let plog = OrliczFunction::new(OrliczKind::PowerLog { p: 1.4, q: 1.0 }).unwrap();
    vec![
        SequenceNorm::lp(1.0).unwrap(),
        SequenceNorm::lp(1.7).unwrap(),
        SequenceNorm::Linf,
        SequenceNorm::orlicz(OrliczFunction::power(1.5).unwrap()),
        SequenceNorm::orlicz(plog.clone()),
        SequenceNorm::convexified(SequenceNorm::orlicz(plog), 1.3).unwrap(),
        SequenceNorm::concavified(SequenceNorm::lp(2.0).unwrap(), 1.5).unwrap(),
    ]
}

fn coeffs(max_dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 1..=max_dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_sign_pattern_is_an_isometry(x in coeffs(5)) {
        for n in norms() {
            let base = n.norm(&x);
            for mask in 0u32..(1 << x.len()) {
                let y: Vec<f64> = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if mask >> i & 1 == 1 { -v } else { *v })
                    .collect();
                prop_assert!(rel_close(n.norm(&y), base, 1e-9), "{n:?}");
            }
        }
    }

    #[test]
    fn norms_are_lattice_monotone(x in coeffs(6), shrink in prop::collection::vec(0.0f64..=1.0, 6)) {
        let y: Vec<f64> = x.iter().zip(&shrink).map(|(v, s)| v * s).collect();
        for n in norms() {
            prop_assert!(n.norm(&y) <= n.norm(&x) * (1.0 + 1e-9), "{n:?}");
        }
    }

    #[test]
    fn norms_are_homogeneous(x in coeffs(6), c in -20.0f64..20.0) {
        let y: Vec<f64> = x.iter().map(|v| c * v).collect();
        for n in norms() {
            prop_assert!(rel_close(n.norm(&y), c.abs() * n.norm(&x), 1e-9), "{n:?}");
        }
    }

    #[test]
    fn triangle_inequality(x in coeffs(6), y in coeffs(6)) {
        let d = x.len().min(y.len());
        let s: Vec<f64> = x[..d].iter().zip(&y[..d]).map(|(a, b)| a + b).collect();
        for n in norms() {
            prop_assert!(n.norm(&s) <= (n.norm(&x[..d]) + n.norm(&y[..d])) * (1.0 + 1e-9), "{n:?}");
        }
    }

    #[test]
    fn convexifying_lp_multiplies_the_exponent(x in coeffs(8), p in 1.0f64..2.5, q in 1.0f64..3.0) {
        let base = SequenceNorm::lp(p).unwrap();
        let v = convexified_norm(&x, &base, q).unwrap();
        prop_assert!(rel_close(v, naive_lp(&x, p * q), 1e-12));
    }

    #[test]
    fn concavify_undoes_convexify(x in coeffs(6), q in 1.0f64..3.0) {
        let base = SequenceNorm::orlicz(OrliczFunction::power(1.6).unwrap());
        let conv = SequenceNorm::convexified(base.clone(), q).unwrap();
        let back = concavified_norm(&x, &conv, q).unwrap();
        prop_assert!(rel_close(back, base.norm(&x), 1e-8));
    }

    #[test]
    fn ls_is_monotone_in_s(values in prop::collection::vec(-5.0f64..5.0, 1..40), s in 1.0f64..3.0, ds in 0.0f64..2.0) {
        let n = values.len();
        let mu = AtomicMeasure::uniform(n).unwrap();
        let v = StepVector::new(values).unwrap();
        prop_assert!(ls_norm(&v, &mu, s).unwrap() <= ls_norm(&v, &mu, s + ds).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn change_of_density_inverts(
        pairs in prop::collection::vec((-5.0f64..5.0, 0.05f64..4.0), 1..60),
    ) {
        let n = pairs.len();
        let mu = AtomicMeasure::uniform(n).unwrap();
        let x = StepVector::new(pairs.iter().map(|p| p.0).collect()).unwrap();
        let mass: f64 = pairs.iter().map(|p| p.1).sum::<f64>() / n as f64;
        let h = StepVector::new(pairs.iter().map(|p| p.1 / mass).collect()).unwrap();
        let (nu, ys) = change_of_density(&[x.clone()], &mu, &h).unwrap();
        let inv = StepVector::new(h.iter().map(|v| 1.0 / v).collect()).unwrap();
        let (back_mu, back) = change_of_density(&ys, &nu, &inv).unwrap();
        for (a, b) in back[0].iter().zip(x.iter()) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
        for (a, b) in back_mu.weights().iter().zip(mu.weights()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
        prop_assert!(rel_close(ls_norm(&ys[0], &nu, 1.0).unwrap(), ls_norm(&x, &mu, 1.0).unwrap(), 1e-12));
    }

    #[test]
    fn embedding_map_is_linear(
        a in prop::collection::vec(-3.0f64..3.0, 6),
        b in prop::collection::vec(-3.0f64..3.0, 6),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
    ) {
        let e = sample_gaussian(2, 120, 1).unwrap();
        let f = sample_stable(&StableSampleSpec::new(1.5, 3, 110, 2)).unwrap();
        let map = tensor_embed(e, TensorFactor::Realization(f)).unwrap();
        let comb: Vec<f64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
        let lhs = map.image(&comb).unwrap();
        let (ia, ib) = (map.image(&a).unwrap(), map.image(&b).unwrap());
        for ((l, x), y) in lhs.iter().zip(ia.iter()).zip(ib.iter()) {
            prop_assert!((l - (alpha * x + beta * y)).abs() <= 1e-12 * (1.0 + l.abs()));
        }
    }

    #[test]
    fn ratios_are_scale_invariant(
        x in prop::collection::vec(0.0f64..5.0, 3),
        y in prop::collection::vec(0.0f64..5.0, 3),
        c in 0.01f64..100.0,
    ) {
        prop_assume!(x.iter().any(|v| *v > 0.0) || y.iter().any(|v| *v > 0.0));
        let e = SequenceNorm::lp(1.3).unwrap();
        let (cx, cy): (Vec<f64>, Vec<f64>) = (x.iter().map(|v| c * v).collect(), y.iter().map(|v| c * v).collect());
        let a = concavity_ratio(&e, &[&x, &y], 2.0).unwrap();
        let b = concavity_ratio(&e, &[&cx, &cy], 2.0).unwrap();
        prop_assert!(rel_close(a, b, 1e-12));
        let a = convexity_ratio(&e, &[&x, &y], 1.2).unwrap();
        let b = convexity_ratio(&e, &[&cx, &cy], 1.2).unwrap();
        prop_assert!(rel_close(a, b, 1e-12));
    }

    #[test]
    fn lq_ratios_are_identically_one(
        x in prop::collection::vec(-5.0f64..5.0, 4),
        y in prop::collection::vec(-5.0f64..5.0, 4),
        q in 1.0f64..4.0,
    ) {
        prop_assume!(x.iter().chain(&y).any(|v| *v != 0.0));
        let e = SequenceNorm::lp(q).unwrap();
        prop_assert!((concavity_ratio(&e, &[&x, &y], q).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!((convexity_ratio(&e, &[&x, &y], q).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn estimate_is_monotone_in_budget(seed in 0u64..1000, b1 in 1usize..12, extra in 0usize..12) {
        let e = SequenceNorm::lp(1.5).unwrap();
        let mode = ConstantMode::Concavity { r: 2.0 };
        let small = estimate_constant(&e, mode, 3, 2, b1, seed).unwrap();
        let large = estimate_constant(&e, mode, 3, 2, b1 + extra, seed).unwrap();
        prop_assert!(small <= large);
    }

    #[test]
    fn certify_at_one_is_exactly_one(values in prop::collection::vec(-3.0f64..3.0, 2..30), seed in 0u64..100) {
        let n = values.len();
        let mu = AtomicMeasure::uniform(n).unwrap();
        let x = StepVector::new(values.clone()).unwrap();
        let y = StepVector::new(values.iter().rev().map(|v| v + 0.5).collect()).unwrap();
        prop_assert_eq!(certify_norm_equivalence(&[x, y], &mu, 1.0, 8, seed).unwrap().constant, 1.0);
    }
}

/// Sup of the convexity ratio of `ℓ_1` at `p = 2` over pairs of nonnegative
/// vectors in `R^2`, on a mesh: each vector is `ρ_k (cos θ_k, sin θ_k)`.
fn mesh_convexity_l1_p2() -> f64 {
    let steps = 24;
    let angles: Vec<f64> = (0..=steps).map(|k| std::f64::consts::FRAC_PI_2 * k as f64 / steps as f64).collect();
    let scales = [0.25, 0.5, 1.0, 2.0, 4.0];
    let mut best: f64 = 0.0;
    for &t1 in &angles {
        for &t2 in &angles {
            for &rho in &scales {
                let x = [t1.cos(), t1.sin()];
                let y = [rho * t2.cos(), rho * t2.sin()];
                let top: f64 = (0..2).map(|i| (x[i] * x[i] + y[i] * y[i]).sqrt()).sum();
                let nx: f64 = x.iter().sum();
                let ny: f64 = y.iter().sum();
                best = best.max(top / (nx * nx + ny * ny).sqrt());
            }
        }
    }
    best
}

#[test]
fn estimate_matches_mesh_oracle() {
    let l1 = SequenceNorm::lp(1.0).unwrap();
    let oracle = mesh_convexity_l1_p2();
    let est = estimate_constant(&l1, ConstantMode::Convexity { p: 2.0 }, 2, 2, 64, 3).unwrap();
    assert!((est / oracle - 1.0).abs() <= 0.05, "estimate {est}, mesh {oracle}");
    // concavity of ℓ_1 at r = 2 is attained (value 1) by proportional tuples
    let est = estimate_constant(&l1, ConstantMode::Concavity { r: 2.0 }, 2, 2, 64, 3).unwrap();
    assert!((est - 1.0).abs() <= 0.05, "estimate {est}");
    let disjoint = concavity_ratio(&l1, &[&[1.0, 0.0], &[0.0, 1.0]], 2.0).unwrap();
    assert!(est >= disjoint);
}

#[test]
fn stable_sums_depend_only_on_the_alpha_norm() {
    let alpha = 1.5;
    let real = sample_stable(&StableSampleSpec::new(alpha, 4, 20_000, 17)).unwrap();
    let a = [1.0, 0.0, 0.0, 0.0];
    let c = 0.5f64.powf(1.0 / alpha);
    let b = [0.0, c, -c, 0.0];
    assert!((naive_lp(&b, alpha) - 1.0).abs() < 1e-12);
    let (na, nb) = (real.l1_norm(&a), real.l1_norm(&b));
    assert!((na - nb).abs() <= 0.05, "{na} vs {nb}");
}

struct SignFlip<'a> {
    inner: &'a BasisRealization,
    signs: Vec<f64>,
}

impl LinearMap for SignFlip<'_> {
    fn domain_dim(&self) -> usize {
        self.inner.dim()
    }

    fn image_norm(&self, a: &[f64]) -> f64 {
        let b: Vec<f64> = a.iter().zip(&self.signs).map(|(x, s)| x * s).collect();
        self.inner.l1_norm(&b)
    }
}

struct Scaled<'a>(&'a BasisRealization, f64);

impl LinearMap for Scaled<'_> {
    fn domain_dim(&self) -> usize {
        self.0.dim()
    }

    fn image_norm(&self, a: &[f64]) -> f64 {
        self.1 * self.0.l1_norm(a)
    }
}

#[test]
fn distortion_examples() {
    let l1 = SequenceNorm::lp(1.0).unwrap();
    let id = realize_l1_disjoint(4, 4).unwrap();
    let rep = distortion(&id, &l1, 32, 2, 0).unwrap();
    assert!((rep.distortion - 1.0).abs() < 1e-12);
    assert!(rep.lower_ratio <= rep.upper_ratio);

    let scaled = distortion(&Scaled(&id, 3.0), &l1, 32, 2, 0).unwrap();
    assert!((scaled.distortion - 1.0).abs() < 1e-12);
    assert!((scaled.upper_ratio - 3.0 * rep.upper_ratio).abs() < 1e-12);

    // diagonal (1, 2) on two disjoint atoms
    let mu = AtomicMeasure::uniform(2).unwrap();
    let diag = BasisRealization::new(
        mu,
        vec![StepVector::new(vec![2.0, 0.0]).unwrap(), StepVector::new(vec![0.0, 4.0]).unwrap()],
        0,
    )
    .unwrap();
    let rep = distortion(&diag, &l1, 64, 4, 1).unwrap();
    assert!((rep.distortion - 2.0).abs() < 1e-9, "{rep:?}");

    let flipped = SignFlip {
        inner: &id,
        signs: vec![1.0, -1.0, -1.0, 1.0],
    };
    assert_eq!(distortion(&flipped, &l1, 32, 2, 5).unwrap(), distortion(&id, &l1, 32, 2, 5).unwrap());
}

#[test]
fn density_never_worse_than_uniform() {
    let g = sample_stable(&StableSampleSpec::new(1.6, 3, 400, 3)).unwrap();
    let res = density_search(g.basis(), g.measure(), 1.4, 3, 2).unwrap();
    assert!(res.constant <= res.uniform_constant);
    let total: f64 = res.h.iter().zip(g.measure().weights()).map(|(h, w)| h * w).sum();
    assert!((total - 1.0).abs() < 1e-10);
    assert!(res.h.iter().all(|v| *v > 0.0));
}
