mod common;

use std::collections::BTreeMap;

use common::*;
use histent_core::circuit::teleportation_schedule_p;
use histent_core::entanglement::{
    density_from_history, space_reduce, space_separability, time_reduce, Side, SpacePartition,
};
use histent_core::history::{
    build_history_vector, chain_operator, marginal_check, HistoryIndex, HistoryVector, MeasurementEvent, Schedule,
};
use histent_core::io::{emit_schedule, parse_schedule_str};
use histent_core::linalg::{hermitian_eigenvalues, kron, partial_trace, ComplexMatrix, SpaceFactorization, C64};
use proptest::prelude::*;

fn computational_two_qubit(seed: u64, n: usize) -> Schedule {
    let mut r = rng(seed);
    let f = SpaceFactorization::qubits(2).unwrap();
    let steps = (1..=n)
        .map(|t| (random_unitary(&mut r, 4), MeasurementEvent::computational(t, &f).unwrap()))
        .collect();
    Schedule::new(random_state(&mut r, 4), steps).unwrap().with_factors(f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut r = rng(seed);
        let (a, cc) = (random_hermitian(&mut r, m), random_hermitian(&mut r, m));
        let (b, d) = (random_hermitian(&mut r, n), random_hermitian(&mut r, n));
        let left = kron(&a, &b).matmul(&kron(&cc, &d)).unwrap();
        let right = kron(&a.matmul(&cc).unwrap(), &b.matmul(&d).unwrap());
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product(seed in any::<u64>(), m in 1usize..4, n in 1usize..4) {
        let mut r = rng(seed);
        let (a, b) = (random_hermitian(&mut r, m), random_hermitian(&mut r, n));
        let f = SpaceFactorization::new(vec![m, n]).unwrap();
        let got = partial_trace(&kron(&a, &b), &f, &[0]).unwrap();
        prop_assert!(got.max_abs_diff(&a.scale(b.trace())) < 1e-12);
        let got = partial_trace(&kron(&a, &b), &f, &[1]).unwrap();
        prop_assert!(got.max_abs_diff(&b.scale(a.trace())) < 1e-12);
    }

    #[test]
    fn spectrum_is_unitarily_invariant(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, n);
        let u = random_unitary(&mut r, n);
        let conj = u.matmul(&h).unwrap().matmul(&u.adjoint()).unwrap();
        let a = hermitian_eigenvalues(&h).unwrap();
        let b = hermitian_eigenvalues(&conj).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!((a.iter().sum::<f64>() - h.trace().re).abs() < 1e-10);
        prop_assert!(a.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn history_probabilities_are_normalized(seed in any::<u64>()) {
        let s = random_schedule(&mut rng(seed));
        let hv = build_history_vector(&s).unwrap();
        prop_assert!((hv.total_probability() - 1.0).abs() < 1e-10);
        // Σ_{α,β} Tr(C_α C_β†) = ‖ψ‖² = 1 by completeness
        let total = all_positions(&s)
            .iter()
            .map(|p| chain_operator(&s, &HistoryIndex::new(p.clone())).unwrap())
            .fold(ComplexMatrix::zeros(s.dim(), s.dim()), |acc, c| acc.add(&c).unwrap());
        let d = total.trace_inner(&total).unwrap();
        prop_assert!((d.re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn density_invariants_and_entropy_bounds(seed in any::<u64>()) {
        let s = random_schedule(&mut rng(seed));
        let hv = build_history_vector(&s).unwrap();
        let rho = density_from_history(&hv).unwrap();
        rho.check_invariants().unwrap();
        prop_assert!(rho.entropy().unwrap().abs() < 1e-9);
        let times: Vec<usize> = (1..=s.n_events()).collect();
        for t in 1..s.n_events() {
            let (j, k): (Vec<usize>, Vec<usize>) = times.iter().partition(|&&x| x <= t);
            let rj = time_reduce(&rho, &j).unwrap();
            let rk = time_reduce(&rho, &k).unwrap();
            rj.check_invariants().unwrap();
            let (sj, sk) = (rj.entropy().unwrap(), rk.entropy().unwrap());
            // complementary reductions of a pure state share their spectrum
            prop_assert!((sj - sk).abs() < 1e-8);
            prop_assert!(sj >= -1e-12 && sj <= (rj.dim() as f64).log2() + 1e-9);
        }
    }

    #[test]
    fn last_time_marginal_law(seed in any::<u64>()) {
        let s = random_schedule(&mut rng(seed));
        prop_assume!(s.n_events() >= 2);
        let rep = marginal_check(&s, 1).unwrap();
        prop_assert!(rep.last_time_holds);
        prop_assert!(rep.last_time.max_discrepancy < 1e-10);
    }

    #[test]
    fn space_and_time_reductions_commute(seed in any::<u64>(), n in 2usize..4) {
        let s = computational_two_qubit(seed, n);
        let rho = density_from_history(&build_history_vector(&s).unwrap()).unwrap();
        let part = SpacePartition::qubits(2, &[0]).unwrap();
        for side in [Side::A, Side::B] {
            for keep in (1..=n).map(|t| vec![t]) {
                let st = time_reduce(&space_reduce(&rho, &part, side).unwrap(), &keep).unwrap();
                let ts = space_reduce(&time_reduce(&rho, &keep).unwrap(), &part, side).unwrap();
                prop_assert_eq!(st.basis(), ts.basis());
                prop_assert!(st.matrix().max_abs_diff(ts.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn emitted_files_round_trip(seed in any::<u64>()) {
        let s = random_schedule(&mut rng(seed));
        let text = emit_schedule(&s, None);
        let back = parse_schedule_str(&text, &BTreeMap::new(), 1e-10).unwrap().schedule;
        let (a, b) = (build_history_vector(&s).unwrap(), build_history_vector(&back).unwrap());
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.terms().iter().zip(b.terms()) {
            prop_assert_eq!(&x.index, &y.index);
            prop_assert!((x.amplitude.unwrap() - y.amplitude.unwrap()).norm() <= 1e-15);
        }
    }

    #[test]
    fn teleportation_temporal_entropy_curve(p in 0.0f64..=1.0) {
        let s = teleportation_schedule_p(p).unwrap();
        let rho = density_from_history(&build_history_vector(&s).unwrap()).unwrap();
        let s3 = time_reduce(&rho, &[3]).unwrap().entropy().unwrap();
        prop_assert!((s3 - teleportation_curve(p)).abs() < 1e-8);
        let s12 = time_reduce(&rho, &[1, 2]).unwrap().entropy().unwrap();
        let s1 = time_reduce(&rho, &[1]).unwrap().entropy().unwrap();
        prop_assert!((s12 - s3).abs() < 1e-8 && (s1 - s3).abs() < 1e-8);
    }

    #[test]
    fn product_histories_are_detected(seed in any::<u64>()) {
        // A(α, β) = a(α) b(β) over two 2-time alphabets of size 2
        let mut r = rng(seed);
        let a = random_state(&mut r, 4);
        let b = random_state(&mut r, 4);
        let f = SpaceFactorization::qubits(2).unwrap();
        let events: Vec<MeasurementEvent> = (1..=2).map(|t| MeasurementEvent::computational(t, &f).unwrap()).collect();
        let mut amps: Vec<(HistoryIndex, C64)> = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                // joint label at each time is (alice bit, bob bit)
                let (a1, a2, b1, b2) = (i >> 1, i & 1, j >> 1, j & 1);
                let pos = vec![2 * a1 + b1, 2 * a2 + b2];
                amps.push((HistoryIndex::new(pos), a.amplitudes()[i] * b.amplitudes()[j]));
            }
        }
        let hv = HistoryVector::from_amplitudes(events, amps).unwrap();
        let part = SpacePartition::qubits(2, &[0]).unwrap();
        let rep = space_separability(&hv, &part).unwrap();
        prop_assert!(rep.separable && rep.ratio <= 1e-10);
        let (left, _) = rep.factors.unwrap();
        // left factor equals a up to a global phase
        let overlap: C64 = (0..4)
            .map(|i| {
                let labels = [format!("{}", i >> 1), format!("{}", i & 1)];
                let l = left.amplitude(&[labels[0].as_str(), labels[1].as_str()]);
                l.conj() * a.amplitudes()[i]
            })
            .sum();
        let left_norm: f64 = left.entries.iter().map(|(_, (re, im))| re * re + im * im).sum::<f64>().sqrt();
        prop_assert!((overlap.norm() - left_norm).abs() < 1e-10);
    }
}
