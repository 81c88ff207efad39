use noframe::quantum::{max_abs_diff, numerical_rank, random_density, unitarity_residual, ZERO};
use noframe::twirl::{
    channel_fixed_point_check, twirl_monte_carlo_with, twirl_su2_exact, twirl_su2_monte_carlo,
    twirl_u1_dephasing, TwirlChannel,
};
use noframe::{
    block_projector, collective_rotation, decompose, haar_random_su2, trace_distance, CMatrix,
    CVector, DensityOperator, GroupElement, HalfInteger, RandomSource, StateVector,
};

#[test]
fn coupling_matrix_is_unitary() {
    for n in 1..=10 {
        let d = decompose(n).unwrap();
        assert!(unitarity_residual(&d.coupling_matrix()) < 1e-10, "n={n}");
    }
}

#[test]
fn projectors_are_invariant_and_orthogonal() {
    let mut rng = RandomSource::new(31);
    for n in [3, 4, 5] {
        let d = decompose(n).unwrap();
        let projectors: Vec<CMatrix> = d.blocks().iter().map(|b| b.projector()).collect();
        for _ in 0..20 {
            let u = collective_rotation(&haar_random_su2(&mut rng), n).unwrap();
            for p in &projectors {
                assert!(max_abs_diff(&(p * &u), &(&u * p)) < 1e-9);
            }
        }
        let zero = CMatrix::zeros(d.dim(), d.dim());
        for (a, pa) in projectors.iter().enumerate() {
            for pb in &projectors[a + 1..] {
                assert!(max_abs_diff(&(pa * pb), &zero) < 1e-10);
            }
        }
    }
}

#[test]
fn spin_one_projectors_have_rank_three() {
    let d = decompose(4).unwrap();
    for r in 1..=3 {
        let p = block_projector(&d, HalfInteger::integer(1), r).unwrap();
        assert_eq!(numerical_rank(&p, 1e-9), 3);
    }
}

/// Dimension of `{X : X B = B X for all B}` from the null space of the
/// stacked linear maps `X ↦ XB − BX`.
fn commutant_dimension(gens: &[CMatrix]) -> usize {
    let d = gens[0].nrows();
    let mut stacked = CMatrix::zeros(d * d * gens.len(), d * d);
    for (g, b) in gens.iter().enumerate() {
        // column-major vec: vec(XB) = (Bᵀ ⊗ I) vec X, vec(BX) = (I ⊗ B) vec X
        let id = CMatrix::identity(d, d);
        let op = b.transpose().kronecker(&id) - id.kronecker(b);
        stacked.view_mut((g * d * d, 0), (d * d, d * d)).copy_from(&op);
    }
    let sv = stacked.singular_values();
    sv.iter().filter(|&&s| s < 1e-8).count()
}

#[test]
fn blocks_are_irreducible() {
    let mut rng = RandomSource::new(32);
    for n in [2, 3, 4, 5] {
        let d = decompose(n).unwrap();
        let us: Vec<CMatrix> = (0..20)
            .map(|_| collective_rotation(&haar_random_su2(&mut rng), n).unwrap())
            .collect();
        for block in d.blocks() {
            let v = &block.isometry;
            let gens: Vec<CMatrix> = us.iter().map(|u| v.adjoint() * u * v).collect();
            assert_eq!(commutant_dimension(&gens), 1, "n={n} j={} r={}", block.j, block.r);
        }
    }
}

fn singlet() -> StateVector {
    let s = 1.0 / 2f64.sqrt();
    StateVector::new(CVector::from_vec(vec![ZERO, s.into(), (-s).into(), ZERO])).unwrap()
}

#[test]
fn twirl_preserves_block_populations() {
    let mut rng = RandomSource::new(33);
    for n in [3, 4] {
        let ch = TwirlChannel::full_su2(n).unwrap();
        let d = decompose(n).unwrap();
        for _ in 0..10 {
            let rho = random_density(1 << n, &mut rng);
            let out = ch.apply(&rho).unwrap();
            for b in d.blocks() {
                let p = b.projector();
                let before = (&p * rho.matrix()).trace().re;
                let after = (&p * out.matrix()).trace().re;
                assert!((before - after).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn output_lies_in_commutant() {
    let mut rng = RandomSource::new(34);
    for n in 1..=5 {
        let ch = TwirlChannel::full_su2(n).unwrap();
        let out = ch.apply(&random_density(1 << n, &mut rng)).unwrap();
        for _ in 0..5 {
            let u = collective_rotation(&haar_random_su2(&mut rng), n).unwrap();
            let m = out.matrix();
            assert!(max_abs_diff(&(m * &u), &(&u * m)) < 1e-9);
        }
    }
}

#[test]
fn eight_qubit_channels_are_idempotent() {
    let mut rng = RandomSource::new(35);
    for ch in [TwirlChannel::full_su2(8).unwrap(), TwirlChannel::u1_dephasing(8).unwrap()] {
        let rho = random_density(256, &mut rng);
        let once = ch.apply(&rho).unwrap();
        let twice = ch.apply(&once).unwrap();
        assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-9);
        assert!((once.trace() - 1.0).abs() < 1e-10);
    }
}

#[test]
fn wrong_channel_is_rejected() {
    let rho = DensityOperator::maximally_mixed(4);
    assert!(twirl_su2_exact(&rho, &TwirlChannel::u1_dephasing(2).unwrap()).is_err());
    assert!(twirl_u1_dephasing(&rho, &TwirlChannel::full_su2(2).unwrap()).is_err());
}

#[test]
fn fixed_point_checks() {
    let e2 = TwirlChannel::full_su2(2).unwrap();
    assert!(channel_fixed_point_check(&singlet().to_density(), &e2, 1e-9).unwrap());
    let up = StateVector::from_bits("00").unwrap().to_density();
    assert!(!channel_fixed_point_check(&up, &e2, 1e-9).unwrap());
    for n in 1..=4 {
        let mixed = DensityOperator::maximally_mixed(1 << n);
        for ch in [TwirlChannel::full_su2(n).unwrap(), TwirlChannel::u1_dephasing(n).unwrap()] {
            assert!(channel_fixed_point_check(&mixed, &ch, 1e-9).unwrap());
        }
    }
}

#[test]
fn monte_carlo_with_identity_and_singlet() {
    let mut rng = RandomSource::new(36);
    let rho = random_density(4, &mut rng);
    let out = twirl_monte_carlo_with(&rho, 1, GroupElement::identity).unwrap();
    assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);

    let s = singlet().to_density();
    let out = twirl_su2_monte_carlo(&s, 5000, &rng).unwrap();
    assert!(max_abs_diff(out.matrix(), s.matrix()) < 1e-12);
}

/// Least-squares slope of log(error) against log(samples).
fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let num: f64 = points.iter().map(|(x, y)| (x.ln() - mx) * (y.ln() - my)).sum();
    let den: f64 = points.iter().map(|(x, _)| (x.ln() - mx).powi(2)).sum();
    num / den
}

#[test]
fn monte_carlo_converges_at_root_n() {
    let ch = TwirlChannel::full_su2(2).unwrap();
    let mut state_rng = RandomSource::new(37);
    let sizes = [100usize, 1_000, 10_000, 100_000];
    let mut mean_err = [0.0; 4];
    let states = 10;
    for s in 0..states {
        let rho = random_density(4, &mut state_rng);
        let exact = ch.apply(&rho).unwrap();
        for (k, &m) in sizes.iter().enumerate() {
            let est = twirl_su2_monte_carlo(&rho, m, &RandomSource::new(1000 + s)).unwrap();
            let err = trace_distance(&est, &exact).unwrap();
            if m == 100_000 {
                assert!(err < 0.02, "{err}");
            }
            mean_err[k] += err / states as f64;
        }
    }
    let pts: Vec<(f64, f64)> = sizes.iter().zip(mean_err).map(|(&m, e)| (m as f64, e)).collect();
    let slope = loglog_slope(&pts);
    assert!((slope + 0.5).abs() < 0.15, "slope {slope}, errors {mean_err:?}");
}
