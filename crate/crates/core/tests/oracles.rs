//! Independent reference computations checked against the library.

use nalgebra::{Matrix4, SymmetricEigen};
use num_rational::Ratio;
use num_complex::Complex64;

use noframe::irrep::{binomial, spins_for};
use noframe::protocols::helstrom_success_probability;
use noframe::quantum::{random_density, sigma_x, sigma_y, sigma_z};
use noframe::twirl::TwirlChannel;
use noframe::{
    clebsch_gordan, enumerate_paths, haar_random_su2, multiplicity, total_irrep_count,
    trace_distance, CMatrix, DensityOperator, HalfInteger, RandomSource, StateVector,
};

type Q = Ratio<i128>;

fn fact(n: i64) -> i128 {
    (1..=n as i128).product()
}

/// Racah formula with every factor kept as an exact rational. Arguments are
/// doubled quantum numbers. Returns (sign, square) of the coefficient.
fn cg_exact(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> (i32, Q) {
    if tm != tm1 + tm2 {
        return (0, Q::from_integer(0));
    }
    let h = |x: i64| x / 2;
    let pre = Q::new(
        (tj as i128 + 1)
            * fact(h(tj1 + tj2 - tj))
            * fact(h(tj1 - tj2 + tj))
            * fact(h(-tj1 + tj2 + tj))
            * fact(h(tj + tm))
            * fact(h(tj - tm))
            * fact(h(tj1 - tm1))
            * fact(h(tj1 + tm1))
            * fact(h(tj2 - tm2))
            * fact(h(tj2 + tm2)),
        fact(h(tj1 + tj2 + tj) + 1),
    );
    let mut sum = Q::from_integer(0);
    for k in 0..=h(tj1 + tj2 + tj) + 1 {
        let args = [
            k,
            h(tj1 + tj2 - tj) - k,
            h(tj1 - tm1) - k,
            h(tj2 + tm2) - k,
            h(tj - tj2 + tm1) + k,
            h(tj - tj1 - tm2) + k,
        ];
        if args.iter().any(|&a| a < 0) {
            continue;
        }
        let d: i128 = args.iter().map(|&a| fact(a)).product();
        let term = Q::new(1, d);
        sum = if k % 2 == 0 { sum + term } else { sum - term };
    }
    let sign = if sum > Q::from_integer(0) {
        1
    } else if sum < Q::from_integer(0) {
        -1
    } else {
        0
    };
    (sign, pre * sum * sum)
}

#[test]
fn clebsch_gordan_matches_exact_rationals() {
    let hi = HalfInteger::from_twice;
    let mut checked = 0;
    for tj1 in 1..=6i64 {
        for tj2 in 1..=6i64 {
            for tj in ((tj1 - tj2).abs()..=tj1 + tj2).step_by(2) {
                for tm1 in (-tj1..=tj1).step_by(2) {
                    for tm2 in (-tj2..=tj2).step_by(2) {
                        let tm = tm1 + tm2;
                        if tm.abs() > tj {
                            continue;
                        }
                        let (sign, sq) = cg_exact(tj1, tm1, tj2, tm2, tj, tm);
                        let got = clebsch_gordan(
                            hi(tj1 as i32),
                            hi(tm1 as i32),
                            hi(tj2 as i32),
                            hi(tm2 as i32),
                            hi(tj as i32),
                            hi(tm as i32),
                        )
                        .unwrap();
                        let want = sign as f64 * (*sq.numer() as f64 / *sq.denom() as f64).sqrt();
                        assert!(
                            (got - want).abs() < 1e-12,
                            "<{tj1}/2 {tm1}/2; {tj2}/2 {tm2}/2 | {tj}/2 {tm}/2>: {got} vs {want}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000);
}

#[test]
fn clebsch_gordan_rows_are_orthonormal() {
    let hi = HalfInteger::from_twice;
    // Σ_{m1,m2} <j1 m1; j2 m2|j m><j1 m1; j2 m2|j' m> = δ_{jj'}
    for (tj1, tj2) in [(1i32, 1i32), (2, 1), (3, 2), (4, 4)] {
        for tm in (-(tj1 + tj2)..=tj1 + tj2).step_by(2) {
            let spins: Vec<i32> = ((tj1 - tj2).abs()..=tj1 + tj2)
                .step_by(2)
                .filter(|&tj| tm.abs() <= tj)
                .collect();
            for &a in &spins {
                for &b in &spins {
                    let mut dot = 0.0;
                    for tm1 in (-tj1..=tj1).step_by(2) {
                        let tm2 = tm - tm1;
                        if tm2.abs() > tj2 {
                            continue;
                        }
                        let ca = clebsch_gordan(hi(tj1), hi(tm1), hi(tj2), hi(tm2), hi(a), hi(tm)).unwrap();
                        let cb = clebsch_gordan(hi(tj1), hi(tm1), hi(tj2), hi(tm2), hi(b), hi(tm)).unwrap();
                        dot += ca * cb;
                    }
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12);
                }
            }
        }
    }
}

/// Counts coupling paths by scanning every up/down step sequence.
fn bitmask_path_count(n: usize, tj: i32) -> u128 {
    let steps = n - 1;
    let mut count = 0;
    for mask in 0u32..(1 << steps) {
        let mut s = 1i32;
        let mut ok = true;
        for k in 0..steps {
            s += if mask >> k & 1 == 1 { 1 } else { -1 };
            if s < 0 {
                ok = false;
                break;
            }
        }
        if ok && s == tj {
            count += 1;
        }
    }
    count
}

#[test]
fn multiplicity_matches_path_counting() {
    for n in 1..=10 {
        for j in spins_for(n) {
            let want = bitmask_path_count(n, j.twice());
            assert_eq!(multiplicity(n, j).unwrap(), want, "n={n} j={j}");
            assert_eq!(enumerate_paths(n, j).unwrap().len() as u128, want, "n={n} j={j}");
        }
    }
    assert_eq!(bitmask_path_count(6, 2), 9);
}

#[test]
fn dimension_sum_rule() {
    for n in 1..=12 {
        let total: u128 = spins_for(n)
            .into_iter()
            .map(|j| j.dimension() as u128 * multiplicity(n, j).unwrap())
            .sum();
        assert_eq!(total, 1u128 << n);
    }
}

#[test]
fn irrep_count_is_central_binomial() {
    for (n, want) in [(2, 2u128), (4, 6), (6, 20), (8, 70), (10, 252)] {
        assert_eq!(total_irrep_count(n).unwrap(), want);
        assert_eq!(binomial(n as u64, n as u64 / 2), want);
    }
    // odd n: C(n, (n-1)/2)
    for n in [1usize, 3, 5, 7, 9] {
        assert_eq!(total_irrep_count(n).unwrap(), binomial(n as u64, (n as u64 - 1) / 2));
    }
}

#[test]
fn four_qubit_singlet_paths_by_exhaustion() {
    let mut found = Vec::new();
    for mask in 0u32..8 {
        let mut s = vec![1i32];
        for k in 0..3 {
            let last = *s.last().unwrap();
            s.push(last + if mask >> (2 - k) & 1 == 1 { 1 } else { -1 });
        }
        if s.iter().all(|&x| x >= 0) && s[3] == 0 {
            found.push(s);
        }
    }
    let mut got: Vec<Vec<i32>> = enumerate_paths(4, HalfInteger::ZERO)
        .unwrap()
        .iter()
        .map(|p| p.spins().iter().map(|h| h.twice()).collect())
        .collect();
    found.sort();
    got.sort();
    assert_eq!(got, found);
}

/// `∫ |R₀₀|² dΩ` by Simpson quadrature over Euler angles. With ZYZ angles
/// `R₀₀ = e^{−i(α+γ)/2} cos(β/2)` and the Haar density is `sin β`, so only
/// the β integral is nontrivial.
fn euler_quadrature_r00() -> f64 {
    let steps = 2000;
    let h = std::f64::consts::PI / steps as f64;
    let simpson = |f: &dyn Fn(f64) -> f64| {
        (0..=steps)
            .map(|k| {
                let w = if k == 0 || k == steps {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w * f(k as f64 * h)
            })
            .sum::<f64>()
            * h
            / 3.0
    };
    let num = simpson(&|b: f64| (b / 2.0).cos().powi(2) * b.sin());
    let den = simpson(&|b: f64| b.sin());
    num / den
}

#[test]
fn haar_moments_match_quadrature() {
    let q = euler_quadrature_r00();
    assert!((q - 0.5).abs() < 1e-9);

    let mut rng = RandomSource::new(2024);
    let samples = 100_000;
    let mut mean = [Complex64::new(0.0, 0.0); 4];
    let mut r00 = 0.0;
    for _ in 0..samples {
        let g = haar_random_su2(&mut rng);
        let m = g.matrix2();
        for (k, z) in m.iter().enumerate() {
            mean[k] += z;
        }
        r00 += m[(0, 0)].norm_sqr();
    }
    for z in mean {
        assert!((z / samples as f64).norm() < 0.02);
    }
    assert!((r00 / samples as f64 - q).abs() < 0.01);
}

fn singlet_projector() -> Matrix4<f64> {
    let v = nalgebra::Vector4::new(0.0, 1.0, -1.0, 0.0) / 2f64.sqrt();
    v * v.transpose()
}

#[test]
fn product_state_baseline_from_explicit_difference() {
    // E₂(|00⟩) = Π_sym/3, E₂(|01⟩) = Π_sym/6 + Π_singlet/2
    let singlet = singlet_projector();
    let sym = Matrix4::identity() - singlet;
    let delta = sym / 6.0 - singlet / 2.0;
    let eig = SymmetricEigen::new(delta).eigenvalues;
    let oracle = 0.5 * eig.iter().map(|x| x.abs()).sum::<f64>();
    assert!((oracle - 0.5).abs() < 1e-15);

    let ch = TwirlChannel::full_su2(2).unwrap();
    let a = ch.apply(&StateVector::from_bits("00").unwrap().to_density()).unwrap();
    let b = ch.apply(&StateVector::from_bits("01").unwrap().to_density()).unwrap();
    assert!((trace_distance(&a, &b).unwrap() - oracle).abs() < 1e-9);
    assert!((helstrom_success_probability(&a, &b).unwrap() - 0.75).abs() < 1e-9);
}

/// Best two-outcome projective measurement over a grid of real rank-one
/// projectors in R⁴ (the complement covers rank three).
fn grid_best_real_4(delta: &Matrix4<f64>, steps: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let mut best = 0.0f64;
    for a in 0..=steps {
        let t1 = pi * a as f64 / steps as f64;
        for b in 0..=steps {
            let t2 = pi * b as f64 / steps as f64;
            for c in 0..2 * steps {
                let t3 = pi * c as f64 / steps as f64;
                let v = nalgebra::Vector4::new(
                    t1.cos(),
                    t1.sin() * t2.cos(),
                    t1.sin() * t2.sin() * t3.cos(),
                    t1.sin() * t2.sin() * t3.sin(),
                );
                best = best.max((v.transpose() * delta * v)[0].abs());
            }
        }
    }
    0.5 + 0.5 * best
}

#[test]
fn helstrom_matches_grid_search_on_two_qubits() {
    let singlet = singlet_projector();
    let delta = (Matrix4::identity() - singlet) / 6.0 - singlet / 2.0;
    let grid = grid_best_real_4(&delta, 96);
    assert!((grid - 0.75).abs() < 1e-3, "{grid}");
}

/// Grid over the Bloch sphere: every nontrivial two-outcome projective
/// measurement on a qubit is `{|n⟩⟨n|, I − |n⟩⟨n|}`.
fn grid_best_qubit(rho0: &CMatrix, rho1: &CMatrix, steps: usize) -> f64 {
    let pi = std::f64::consts::PI;
    let delta = rho0 - rho1;
    let mut best = 0.0f64;
    for a in 0..=steps {
        let th = pi * a as f64 / steps as f64;
        for b in 0..2 * steps {
            let ph = pi * b as f64 / steps as f64;
            let p = (CMatrix::identity(2, 2)
                + sigma_x().scale(th.sin() * ph.cos())
                + sigma_y().scale(th.sin() * ph.sin())
                + sigma_z().scale(th.cos()))
            .scale(0.5);
            best = best.max((p * &delta).trace().re.abs());
        }
    }
    0.5 + 0.5 * best
}

#[test]
fn helstrom_matches_grid_search_on_qubits() {
    let mut rng = RandomSource::new(77);
    for _ in 0..20 {
        let a = random_density(2, &mut rng);
        let b = random_density(2, &mut rng);
        let grid = grid_best_qubit(a.matrix(), b.matrix(), 200);
        let exact = helstrom_success_probability(&a, &b).unwrap();
        assert!((grid - exact).abs() < 1e-3, "{grid} vs {exact}");
        assert!(grid <= exact + 1e-12);
    }
    let id = DensityOperator::maximally_mixed(2);
    assert!((helstrom_success_probability(&id, &id).unwrap() - 0.5).abs() < 1e-15);
}
