mod common;

use proptest::prelude::*;
use relent::relmax::{
    abramov_entropy, build_induced, fiber_entropy_optimizer, fiber_periodic, homclump_family,
    maximal_induced_measure, return_word_system, InducedBernoulli, InducedSystem,
    HOMCLUMP_STATES,
};
use relent::{gallery, Error, FactorCode, MarkovMeasure, PeriodicOrbit, Sft};

use common::{abk_nu, q};

const DEFAULT_L: usize = relent::relmax::DEFAULT_TRUNCATION;

fn abk_induced(truncation: usize) -> InducedSystem {
    let code = gallery::load("ABK").unwrap().code;
    let nu = abk_nu(&code);
    let a = code.codomain().index_of("a").unwrap();
    build_induced(&code, &nu, a, truncation).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn equidistribution_is_optimal(seed in proptest::collection::vec(0.0f64..1.0, 64), scale in 0.01f64..1.0) {
        let induced = abk_induced(12);
        let best = maximal_induced_measure(&induced);
        let mut cursor = 0;
        let weights: Vec<Vec<f64>> = induced
            .loops
            .iter()
            .map(|l| {
                let raw: Vec<f64> = (0..l.band_count())
                    .map(|_| {
                        cursor += 1;
                        1.0 + scale * (seed[cursor % seed.len()] - 0.5)
                    })
                    .collect();
                let s: f64 = raw.iter().sum();
                let mut row: Vec<f64> = raw.iter().map(|r| r * l.probability / s).collect();
                // Absorb rounding in the last entry.
                let last = row.len() - 1;
                row[last] = l.probability - row[..last].iter().sum::<f64>();
                row
            })
            .collect();
        let uniform = weights
            .iter()
            .zip(&best.weights)
            .all(|(a, b)| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-15));
        let other = InducedBernoulli::with_weights(induced, weights).unwrap();
        if !uniform {
            prop_assert!(other.induced_entropy() < best.induced_entropy());
            prop_assert!(other.fiber_entropy() < best.fiber_entropy());
        }
    }
}

#[test]
fn bands_project_to_their_loops() {
    let induced = abk_induced(DEFAULT_L);
    let code = induced.code().clone();
    assert!(induced.retained_mass <= 1.0);
    assert!(induced.retained_mass > 1.0 - 1e-9);
    for l in &induced.loops {
        assert_eq!(l.band_count(), l.length());
        for b in &l.bands {
            assert_eq!(code.image_word(b), l.word);
            let inner = &b.symbols()[1..b.len() - 1];
            assert!(!inner.contains(&induced.clump_x));
        }
        assert_eq!(code.count_preimages(&l.word).unwrap(), (l.band_count() as u32).into());
    }
}

#[test]
fn truncation_is_reported() {
    let induced = abk_induced(5);
    assert_eq!(induced.retained_mass_exact.clone().unwrap(), q(15, 16));
    let m = maximal_induced_measure(&induced);
    assert!(matches!(abramov_entropy(&m, 1.0 - 1e-6), Err(Error::TruncationMass { .. })));
    assert!(abramov_entropy(&m, 0.9).is_ok());
}

#[test]
fn abramov_pieces_agree() {
    let m = maximal_induced_measure(&abk_induced(DEFAULT_L));
    let ab = abramov_entropy(&m, 1.0 - 1e-6).unwrap();
    assert!((ab.h_rel - ab.fiber_entropy).abs() < 1e-9);
    assert!((ab.h_mu - ab.clump_mass * ab.induced_entropy).abs() < 1e-15);
    assert!((ab.clump_mass - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn non_singleton_clumps_are_rejected() {
    let homc = gallery::load("HOMC").unwrap();
    let nu = MarkovMeasure::new(homc.y.clone(), vec![vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap();
    let a = homc.y.index_of("a").unwrap();
    assert!(matches!(build_induced(&homc.code, &nu, a, 10), Err(Error::NotSingletonClump(_))));
}

#[test]
fn periodic_verdicts_are_rotation_invariant() {
    for entry in gallery::load_all().unwrap() {
        for orbit in entry.y.periodic_orbits(6).unwrap() {
            let base = fiber_periodic(&entry.code, &orbit).unwrap();
            for s in 1..orbit.period() {
                let r = fiber_periodic(&entry.code, &orbit.rotated(s)).unwrap();
                assert_eq!(r.determinate, base.determinate, "{}", entry.name);
                assert_eq!(r.components.len(), base.components.len());
                assert!((r.max_entropy - base.max_entropy).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn periodic_fiber_examples() {
    let abk = gallery::load("ABK").unwrap();
    let ab = PeriodicOrbit::new(&abk.y, abk.y.parse_word("a b").unwrap()).unwrap();
    let f = fiber_periodic(&abk.code, &ab).unwrap();
    let mut names = f.components[0].vertices.clone();
    names.sort();
    assert_eq!(names, ["a@0", "b1@1", "b2@1"]);
    let b = PeriodicOrbit::new(&abk.y, abk.y.parse_word("b").unwrap()).unwrap();
    let f = fiber_periodic(&abk.code, &b).unwrap();
    assert!(!f.determinate);
    assert_eq!(f.maximal_components, 2);
}

#[test]
fn return_system_has_the_six_states() {
    let homc = gallery::load("HOMC").unwrap();
    let a = homc.y.index_of("a").unwrap();
    let sys = return_word_system(&homc.code, a, 8).unwrap();
    let mut names: Vec<&str> = sys.x.names().iter().map(String::as_str).collect();
    names.sort();
    let mut expected = HOMCLUMP_STATES.to_vec();
    expected.sort();
    assert_eq!(names, expected);
    assert_eq!(sys.y.names(), ["aa", "aba"]);
    assert_eq!(sys.y.edges().len(), 4);
}

#[test]
fn homclump_family_is_the_optimum() {
    let homc = gallery::load("HOMC").unwrap();
    let a = homc.y.index_of("a").unwrap();
    let sys = return_word_system(&homc.code, a, 8).unwrap();
    for k in [0.5, 2.0] {
        let fam = homclump_family(k).unwrap();
        let p = k / (k + 1.0);
        let nu_a = MarkovMeasure::bernoulli(
            sys.y.clone(),
            &sys.y.names().iter().map(|n| if n == "aa" { p } else { 1.0 - p }).collect::<Vec<_>>(),
        )
        .unwrap();
        // The family as a chain on the return-word system.
        let idx: Vec<usize> = HOMCLUMP_STATES.iter().map(|s| sys.x.index_of(s).unwrap()).collect();
        let mut t = vec![vec![0.0; 6]; 6];
        for (r, &i) in idx.iter().enumerate() {
            for (c, &j) in idx.iter().enumerate() {
                t[i][j] = fam.matrix[r][c];
            }
        }
        let mu = MarkovMeasure::new(sys.x.clone(), t).unwrap();
        for n in 1..=4 {
            let img = sys.code.pushforward_blocks(&mu, n).unwrap();
            let target = nu_a.block_distribution(n).unwrap();
            for (w, pr) in &target {
                assert!((img.get(w).copied().unwrap_or(0.0) - pr).abs() < 1e-12);
            }
        }
        let opt = fiber_entropy_optimizer(&sys.code, &nu_a, 1, 16, 3).unwrap();
        assert!((opt.entropy - mu.entropy()).abs() < 1e-6, "{} vs {}", opt.entropy, mu.entropy());
    }
}

#[test]
fn xor_lifts_have_no_relative_entropy() {
    let xor = gallery::load("XOR").unwrap();
    let nu = MarkovMeasure::bernoulli(xor.y.clone(), &[0.3, 0.7]).unwrap();
    let opt = fiber_entropy_optimizer(&xor.code, &nu, 1, 4, 1).unwrap();
    assert!((opt.entropy - nu.entropy()).abs() < 1e-8);
    assert!(opt.constraint_deviation < 1e-8);
}

#[test]
fn abk_optimizer_approaches_abramov_from_above() {
    let m = maximal_induced_measure(&abk_induced(DEFAULT_L));
    let h_rel = abramov_entropy(&m, 1.0 - 1e-6).unwrap().h_rel;
    let code = gallery::load("ABK").unwrap().code;
    let nu = abk_nu(&code);
    let mut prev = f64::INFINITY;
    for order in 1..=3 {
        let opt = fiber_entropy_optimizer(&code, &nu, order, 8, 5).unwrap();
        assert!(opt.heuristic);
        assert!(opt.constraint_deviation < 1e-8);
        assert!(opt.relative_entropy >= h_rel - 1e-9);
        assert!(opt.relative_entropy <= prev + 1e-12);
        prev = opt.relative_entropy;
    }
    assert!(prev - h_rel < 1e-3);
}

#[test]
fn optimizer_is_deterministic() {
    let code = gallery::load("ABK").unwrap().code;
    let nu = abk_nu(&code);
    let a = fiber_entropy_optimizer(&code, &nu, 2, 6, 42).unwrap();
    let b = fiber_entropy_optimizer(&code, &nu, 2, 6, 42).unwrap();
    assert_eq!(a.entropy.to_bits(), b.entropy.to_bits());
    assert_eq!(a.best_restart, b.best_restart);
}

#[test]
fn optimizer_rejects_bad_input() {
    let code = gallery::load("ABK").unwrap().code;
    let nu = abk_nu(&code);
    assert!(fiber_entropy_optimizer(&code, &nu, 4, 4, 0).is_err());
    let x = Sft::from_matrix(&["0", "1"], &[vec![1, 1], vec![1, 0]]).unwrap();
    let y = Sft::full_shift(&["a", "b"]).unwrap();
    let thin = FactorCode::new(x, y.clone(), vec![0, 1]).unwrap();
    let nu = MarkovMeasure::bernoulli(y, &[0.5, 0.5]).unwrap();
    assert!(matches!(fiber_entropy_optimizer(&thin, &nu, 1, 2, 0), Err(Error::Infeasible(_))));
}
