mod common;

use approx::assert_abs_diff_eq;
use common::*;
use lelm_lab::apparatus::{compose, diagonal_all, haar_random, haar_random_separate, hadamard_lr, projective_separate, uopt_n1, Apparatus};
use lelm_lab::bellcore::{bell_vector, enumerate_bell_labels, BellLabel, BellToken::*};
use lelm_lab::detection::{outcome_amplitude, outcome_probability, signature_support, Statistics, DEFAULT_EPS};
use lelm_lab::partition::partition_of;

fn apparatus_zoo() -> Vec<(String, Apparatus)> {
    let mut zoo = vec![("uopt".to_string(), uopt_n1())];
    for v in 1..=2 {
        zoo.push((format!("hadamard n={v}"), hadamard_lr(n(v))));
        zoo.push((format!("separate n={v}"), projective_separate(n(v))));
        zoo.push((format!("hadamard+diag n={v}"), compose(&hadamard_lr(n(v)), &diagonal_all(n(v))).unwrap()));
        for seed in 0..3 {
            zoo.push((format!("haar n={v} seed={seed}"), haar_random(n(v), seed)));
            zoo.push((format!("haar-sep n={v} seed={seed}"), haar_random_separate(n(v), seed)));
        }
    }
    zoo
}

#[test]
fn tensor_product_matches_bell_vector() {
    for v in 1..=3 {
        for label in enumerate_bell_labels(n(v)) {
            let c = tensor_bell(&label);
            let b = bell_vector(&label);
            for (a, row) in c.iter().enumerate() {
                for (bb, &x) in row.iter().enumerate() {
                    assert_abs_diff_eq!(b.at(a, bb).re, x, epsilon = 1e-15);
                    assert_eq!(b.at(a, bb).im, 0.0);
                }
            }
        }
    }
}

#[test]
fn oracle_reproduces_hand_values() {
    let h = hadamard_lr(n(1));
    let phi_plus = BellLabel::from_tokens(&[PhiPlus]).unwrap();
    let psi_plus = BellLabel::from_tokens(&[PsiPlus]).unwrap();

    let amps = fock_amplitudes(&h, Statistics::Boson, &phi_plus);
    let a11 = amps[&(0, 0)];
    assert_abs_diff_eq!(a11.re, std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-15);
    assert_abs_diff_eq!(fock_probability(a11, 0, 0), 0.25, epsilon = 1e-15);

    let amps = fock_amplitudes(&h, Statistics::Boson, &psi_plus);
    assert_abs_diff_eq!(amps[&(0, 3)].norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(fock_probability(amps[&(0, 2)], 0, 2), 0.5, epsilon = 1e-15);
}

#[test]
fn implementation_matches_oracle_everywhere() {
    for (name, app) in apparatus_zoo() {
        for stats in [Statistics::Boson, Statistics::Fermion] {
            for label in enumerate_bell_labels(app.n()) {
                let oracle = fock_amplitudes(&app, stats, &label);
                let mut total = 0.0;
                for (&(i, j), &expected) in &oracle {
                    let o = outcome(i + 1, j + 1);
                    let got = outcome_amplitude(&app, stats, &label, &o).unwrap();
                    assert!(
                        (got - expected).norm() < 1e-12,
                        "{name} {stats} {label} {o}: {got} vs {expected}"
                    );
                    let p = outcome_probability(&app, stats, &label, &o).unwrap();
                    assert_abs_diff_eq!(p, fock_probability(expected, i, j), epsilon = 1e-12);
                    total += p;
                }
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn frozen_supports() {
    let h = hadamard_lr(n(1));
    let sep = projective_separate(n(1));
    let cases = [
        (&h, PsiMinus, vec![(1, 4), (2, 3)]),
        (&h, PhiMinus, vec![(1, 1), (2, 2), (3, 3), (4, 4)]),
        (&h, PhiPlus, vec![(1, 1), (2, 2), (3, 3), (4, 4)]),
        (&h, PsiPlus, vec![(1, 3), (2, 4)]),
        (&sep, PhiPlus, vec![(1, 2), (3, 4)]),
    ];
    for (app, token, expected) in cases {
        let label = BellLabel::from_tokens(&[token]).unwrap();
        // oracle first
        let oracle: Vec<(usize, usize)> = fock_amplitudes(app, Statistics::Boson, &label)
            .into_iter()
            .filter(|(_, a)| a.norm() > DEFAULT_EPS)
            .map(|((i, j), _)| (i + 1, j + 1))
            .collect();
        assert_eq!(oracle, expected);
        let got: Vec<(usize, usize)> = signature_support(app, Statistics::Boson, &label, DEFAULT_EPS)
            .unwrap()
            .iter()
            .map(|o| o.modes())
            .collect();
        assert_eq!(got, expected);
    }
}

#[test]
fn partitions_match_brute_force() {
    for (name, app) in apparatus_zoo() {
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let supports: Vec<Vec<(usize, usize)>> = enumerate_bell_labels(app.n())
                .iter()
                .map(|l| {
                    fock_amplitudes(&app, stats, l)
                        .into_iter()
                        .filter(|(_, a)| a.norm() > DEFAULT_EPS)
                        .map(|(k, _)| k)
                        .collect()
                })
                .collect();
            let expected = brute_force_classes(&supports);
            let got: Vec<Vec<usize>> = partition_of(&app, stats)
                .classes()
                .iter()
                .map(|c| c.iter().map(|l| l.index()).collect())
                .collect();
            assert_eq!(got, expected, "{name} {stats}");
        }
    }
}

#[test]
fn frozen_class_lists() {
    let names = |app: &Apparatus| -> Vec<Vec<String>> {
        partition_of(app, Statistics::Boson)
            .classes()
            .iter()
            .map(|c| c.iter().map(|l| l.ascii()).collect())
            .collect()
    };
    assert_eq!(names(&hadamard_lr(n(1))), vec![vec!["phi+", "phi-"], vec!["psi+"], vec!["psi-"]]);
    assert_eq!(names(&projective_separate(n(1))), vec![vec!["phi+", "phi-"], vec!["psi+", "psi-"]]);
    assert_eq!(names(&uopt_n1()), vec![vec!["phi+", "psi+"], vec!["phi-"], vec!["psi-"]]);
}
