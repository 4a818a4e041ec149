mod common;

use causal_switch_core::channels::KrausChannel;
use causal_switch_core::{
    apply_channel, apply_switch, compose_definite, depolarizing_kraus, depolarizing_switch_mixture,
    holevo_classical, holevo_from_branches, holevo_switch, BlochAngles, DensityMatrix,
    MeasurementSet, SwitchInput,
};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_angles(rng: &mut ChaCha8Rng) -> (f64, f64) {
    // uniform on the sphere
    let z: f64 = rng.random_range(-1.0..=1.0);
    (z.acos(), rng.random_range(0.0..std::f64::consts::TAU))
}

#[test]
fn pauli_mixture_matches_brute_force_kraus_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let q = rng.random_range(0.0..=1.0);
        let gamma = rng.random_range(0.0..=1.0);
        let (theta, phi) = random_angles(&mut rng);
        let ops = depolarizing_ops(q);
        let oracle = switch_output(&ops, &ops, &control(gamma), &pure_target(theta, phi));
        let input =
            SwitchInput::new(gamma, DensityMatrix::pure(BlochAngles::new(theta, phi))).unwrap();
        let lib = depolarizing_switch_mixture(q, &input).unwrap();
        assert!(max_diff_lib(&oracle, lib.matrix()) < 1e-12);

        let ch = depolarizing_kraus(q).unwrap();
        let kraus = apply_switch(&ch, &ch, &input).unwrap();
        assert!(max_diff_lib(&oracle, kraus.matrix()) < 1e-12);
    }
}

#[test]
fn full_depolarisation_spectrum() {
    let ops = depolarizing_ops(1.0);
    for (theta, phi) in [(0.0, 0.0), (1.0, 2.0), (2.5, 5.0)] {
        let out = switch_output(&ops, &ops, &control(0.5), &pure_target(theta, phi));
        let eigs = eigenvalues4(&out);
        for (l, e) in eigs.iter().zip([0.375, 0.25, 0.25, 0.125]) {
            assert!((l - e).abs() < 1e-12, "{eigs:?}");
        }
        assert!((entropy_bits(&eigs) - 1.90564).abs() < 1e-5);
    }
    let r = holevo_switch(1.0, 0.5).unwrap();
    let exact = entropy_bits(&[0.375, 0.25, 0.25, 0.125]);
    assert!((r.h_min - exact).abs() < 1e-10);
}

/// Holevo quantity of the equiprobable ensemble {|ψ⟩, |ψ⊥⟩} through the
/// composed channel, maximised over a grid of ensemble axes.
#[test]
fn classical_capacity_from_orthogonal_ensembles() {
    for q in [0.0, 0.25, 0.5, 0.9, 1.0] {
        let ch = depolarizing_kraus(q).unwrap();
        let composed = compose_definite(&ch, &ch).unwrap();
        let mut best = 0.0f64;
        for k in 0..=8 {
            for l in 0..8 {
                let theta = std::f64::consts::PI * k as f64 / 8.0;
                let phi = std::f64::consts::TAU * l as f64 / 8.0;
                let a = DensityMatrix::pure(BlochAngles::new(theta, phi));
                let b = DensityMatrix::pure(BlochAngles::new(
                    std::f64::consts::PI - theta,
                    phi + std::f64::consts::PI,
                ));
                let oa = apply_channel(&composed, &a).unwrap();
                let ob = apply_channel(&composed, &b).unwrap();
                let h = |m: &DensityMatrix| {
                    let e = m.spectrum();
                    entropy_bits(e.as_slice())
                };
                let avg =
                    DensityMatrix::new((*oa.matrix() + *ob.matrix()).scale_real(0.5)).unwrap();
                best = best.max(h(&avg) - 0.5 * (h(&oa) + h(&ob)));
            }
        }
        let formula = holevo_classical(q).unwrap();
        assert!((best - formula).abs() < 1e-10, "q={q}: {best} vs {formula}");
    }
    assert!((holevo_classical(0.5).unwrap() - 0.04557).abs() < 5e-6);
}

fn random_sample_min<F: Fn(f64, f64) -> M4>(out: F, n: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (t, p) = random_angles(&mut rng);
            entropy_bits(&eigenvalues4(&out(t, p)))
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn search_agrees_with_random_sampling_depolarising() {
    for (q, gamma) in [(0.78, 0.5), (0.4, 0.3)] {
        let ops = depolarizing_ops(q);
        let sample = random_sample_min(
            |t, p| switch_output(&ops, &ops, &control(gamma), &pure_target(t, p)),
            10_000,
            3,
        );
        let r = holevo_switch(q, gamma).unwrap();
        assert!(r.h_min <= sample + 1e-10);
        assert!((r.h_min - sample).abs() < 1e-4, "{} vs {sample}", r.h_min);
    }
}

/// The measured table gives an anisotropic landscape, unlike the ideal case.
#[test]
fn search_agrees_with_random_sampling_measured_branches() {
    let meas = MeasurementSet::bundled();
    let s = meas.coherences();
    for q in [0.78, 1.0] {
        let p = [1.0 - 0.75 * q, q / 4.0, q / 4.0, q / 4.0];
        let branch_state = |t: f64, ph: f64| {
            let rho_t = pure_target(t, ph);
            let mut acc = [[c(0.0, 0.0); 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    let u = mul2(&sigma(i), &sigma(j));
                    let ut = mul2(&mul2(&u, &rho_t), &dagger2(&u));
                    let sij = s.get(i, j);
                    let rc = [
                        [c(0.5, 0.0), c(sij / 2.0, 0.0)],
                        [c(sij / 2.0, 0.0), c(0.5, 0.0)],
                    ];
                    let mut term = kron(&rc, &ut);
                    for row in term.iter_mut() {
                        for z in row.iter_mut() {
                            *z *= p[i] * p[j];
                        }
                    }
                    add4(&mut acc, &term);
                }
            }
            acc
        };
        let sample = random_sample_min(branch_state, 10_000, 5);
        let r = holevo_from_branches(&s, q, 0.5).unwrap();
        assert!(r.h_min <= sample + 1e-10);
        assert!(
            (r.h_min - sample).abs() < 1e-4,
            "q={q}: {} vs {sample}",
            r.h_min
        );
    }
}

fn dagger2(a: &M2) -> M2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

#[test]
fn damping_switch_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let g: f64 = rng.random_range(0.0..=1.0);
        let gamma = rng.random_range(0.0..=1.0);
        let (theta, phi) = random_angles(&mut rng);
        let amp = [
            [
                [c(1.0, 0.0), c(0.0, 0.0)],
                [c(0.0, 0.0), c((1.0 - g).sqrt(), 0.0)],
            ],
            [[c(0.0, 0.0), c(g.sqrt(), 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]],
        ];
        let oracle = switch_output(&amp, &amp, &control(gamma), &pure_target(theta, phi));
        let ch = causal_switch_core::amplitude_damping_kraus(g).unwrap();
        let input =
            SwitchInput::new(gamma, DensityMatrix::pure(BlochAngles::new(theta, phi))).unwrap();
        let lib = apply_switch(&ch, &ch, &input).unwrap();
        assert!(max_diff_lib(&oracle, lib.matrix()) < 1e-12);
    }
}

#[test]
fn unitary_channels_in_switch() {
    // a single Pauli pair is a unitary switch; compare with KrausChannel::unitary
    let lib_paulis = causal_switch_core::qmath::paulis();
    for i in 0..4 {
        for j in 0..4 {
            let a = KrausChannel::unitary("a", lib_paulis[i]).unwrap();
            let b = KrausChannel::unitary("b", lib_paulis[j]).unwrap();
            let input =
                SwitchInput::new(0.5, DensityMatrix::pure(BlochAngles::new(0.7, 1.3))).unwrap();
            let lib = apply_switch(&a, &b, &input).unwrap();
            let oracle = switch_output(
                &[sigma(i)],
                &[sigma(j)],
                &control(0.5),
                &pure_target(0.7, 1.3),
            );
            assert!(max_diff_lib(&oracle, lib.matrix()) < 1e-12);
            let pair = causal_switch_core::pauli_pair_switch(i, j, &input).unwrap();
            assert!(max_diff_lib(&oracle, pair.matrix()) < 1e-12);
        }
    }
}
