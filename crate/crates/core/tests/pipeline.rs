mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xzsat::circuit::{
    apply_circuit, check_standard_form, compile_g2_to_gt2, compile_gt2_to_g2, compile_to, parse_circuit, standard_form,
    Circuit, GateSet,
};
use xzsat::clock::{all_strings, ClockClass};
use xzsat::hamiltonian::{build_full, build_h_format, build_h_prop, parse_instance, serialize_instance, Layout};
use xzsat::spectral::{
    energy, history_state, history_state_unnormalized, min_eigenvalue_with, solver_registry, term_energy, Sector,
};
use xzsat::{ExactState, Gate, NumericState, RingReal, StateVector};

use common::*;

fn g2_gate() -> impl Strategy<Value = (u8, Vec<usize>)> {
    (
        0u8..4,
        Just(()).prop_perturb(|_, mut rng| {
            let mut q = vec![1, 2, 3];
            for i in (1..3).rev() {
                q.swap(i, rng.random_range(0..=i));
            }
            q
        }),
    )
}

fn g2_circuit() -> impl Strategy<Value = Circuit> {
    (1usize..=3, prop::collection::vec(g2_gate(), 0..5)).prop_map(|(n_proof, gates)| {
        let gates = gates
            .into_iter()
            .map(|(k, q)| match k {
                0 => Gate::x(q[0]),
                1 => Gate::cx(q[0], q[1]),
                2 => Gate::ccx(q[0], q[1], q[2]),
                _ => Gate::hh(q[0], q[1]),
            })
            .collect();
        Circuit::new(n_proof, 3 - n_proof, gates, GateSet::G2).unwrap()
    })
}

/// Runs `c` on `|x⟩` padded with zeros up to the circuit width.
fn run(c: &Circuit, x: usize, n: usize) -> ExactState {
    let pad = c.n_qubits() - n;
    let init = ExactState::basis(c.n_qubits(), x << pad);
    apply_circuit(c, &init).unwrap()
}

fn padded(s: &ExactState, extra: usize) -> ExactState {
    s.tensor(&StateVector::basis(extra, 0))
}

proptest! {
    #[test]
    fn compilation_preserves_the_action(c in g2_circuit(), x in 0usize..8) {
        let gt2 = compile_g2_to_gt2(&c).unwrap();
        let back = compile_gt2_to_g2(&gt2).unwrap();
        let reference = run(&c, x, 3);
        prop_assert_eq!(run(&gt2, x, 3), padded(&reference, gt2.n_qubits() - 3));
        prop_assert_eq!(run(&back, x, 3), padded(&reference, back.n_qubits() - 3));
        prop_assert!(gt2.gates().iter().all(|g| GateSet::Gt2.contains(g.kind())));
    }

    #[test]
    fn standard_form_keeps_order_and_action(seed in any::<u64>(), len in 0usize..6, x in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_gt2_circuit(&mut rng, 2, 1, len);
        let s = standard_form(&c).unwrap();
        prop_assert_eq!(s.len(), (2 * len + 1).max(3));
        prop_assert!(check_standard_form(s.gates()).is_ok());
        let real: Vec<&Gate> = s.gates().iter().filter(|g| !g.kind().is_placeholder()).collect();
        prop_assert_eq!(real, c.gates().iter().collect::<Vec<_>>());
        prop_assert_eq!(run(&s, x, 3), run(&c, x, 3));
    }

    #[test]
    fn circuit_text_round_trips(c in g2_circuit()) {
        let text = c.to_text();
        prop_assert_eq!(parse_circuit(&text).unwrap(), c.clone());
        let s = compile_to(&c, GateSet::Gt2Standard).unwrap();
        prop_assert_eq!(parse_circuit(&s.to_text()).unwrap(), s);
    }
}

/// Mixed-basis vector to the computational basis: Hadamards on even clock
/// positions.
fn from_mixed(phi: &[f64], layout: &Layout) -> NumericState {
    let mut s = NumericState::from_amplitudes(phi.to_vec()).unwrap();
    let even: Vec<usize> = (2..=layout.t).step_by(2).map(|p| layout.clock(p)).collect();
    s.apply_hadamards(&even).unwrap();
    s
}

fn block(phi: &[f64], n: usize, big_t: usize, word: u64) -> NumericState {
    let v = (0..1usize << n).map(|x| phi[(x << big_t) | word as usize]).collect();
    NumericState::from_amplitudes(v).unwrap()
}

#[test]
fn propagation_energy_is_a_sum_over_clock_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (n_proof, n_anc, len) in [(1, 0, 1), (1, 1, 2), (2, 0, 2), (1, 1, 0)] {
        let c = standard_form(&random_gt2_circuit(&mut rng, n_proof, n_anc, len)).unwrap();
        let layout = Layout::for_circuit(&c);
        let (n, big_t) = (c.n_qubits(), c.len());
        let phi: Vec<f64> = (0..1usize << (n + big_t))
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let psi = from_mixed(&phi, &layout);
        let terms = build_h_prop(&c).unwrap();
        assert_eq!(terms.len(), big_t);
        for (i, term) in terms.iter().enumerate() {
            let t = i + 1;
            let mut expected = 0.0;
            for s in all_strings(big_t).unwrap() {
                if s.is_set(t) || !s.edge_condition(t) {
                    continue;
                }
                let mut moved = block(&phi, n, big_t, s.bits());
                c.apply_step(t, &mut moved).unwrap();
                let target = block(&phi, n, big_t, s.flip(t).bits());
                let diff: f64 = target
                    .amplitudes()
                    .iter()
                    .zip(moved.amplitudes())
                    .map(|(a, b)| (a - b).powi(2))
                    .sum();
                expected += 0.5 * diff;
            }
            let got = term_energy(term, &psi);
            assert!((got - expected).abs() < 1e-9, "T={big_t} t={t}: {got} vs {expected}");
        }
    }
}

#[test]
fn format_terms_count_bad_clock_violations() {
    for big_t in [3, 5, 7] {
        let layout = Layout::new(1, 0, big_t);
        let (z, x) = build_h_format(&layout);
        let terms: Vec<_> = z.into_iter().chain(x).collect();
        for s in all_strings(big_t).unwrap() {
            let mut phi = vec![0.0; 1 << (1 + big_t)];
            phi[s.bits() as usize] = 1.0;
            let psi = from_mixed(&phi, &layout);
            let e: f64 = terms.iter().map(|t| term_energy(t, &psi)).sum();
            assert!((e - e.round()).abs() < 1e-12, "{s}: {e}");
            if s.classify() == ClockClass::Bad {
                assert!(e >= 1.0 - 1e-12, "{s}: bad string has energy {e}");
            } else {
                assert!(e.abs() < 1e-12, "{s}: format string has energy {e}");
            }
        }
    }
}

#[test]
fn history_states_of_accepting_circuits_have_zero_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for i in 0..8 {
        let f = yes_fixture(&mut rng, 1 + i % 2, i % 3 / 2, 1 + i % 2, i % 3 == 0);
        assert!(output_is_one(&f.circuit, &f.witness));
        let inst = build_full(&f.circuit).unwrap();
        let hist = history_state_unnormalized(&f.circuit, &f.witness).unwrap();
        assert_eq!(
            hist.norm_sqr(),
            RingReal::from((f.circuit.len() + 1) as i64) * f.witness.norm_sqr()
        );
        assert!(energy(&inst, &hist).unwrap().is_zero());
    }
}

#[test]
fn rejected_witness_history_pays_the_output_term() {
    // T = 3 so the normalized history state is exact
    let c = standard_form(&Circuit::new(1, 0, vec![Gate::x(1)], GateSet::Gt2).unwrap()).unwrap();
    let inst = build_full(&c).unwrap();
    let hist = history_state(&c, &ExactState::basis(1, 1)).unwrap();
    assert_eq!(energy(&inst, &hist).unwrap(), RingReal::new(1, 0, 2));
}

#[test]
fn solvers_agree_on_every_sector() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let solvers = solver_registry();
    for _ in 0..3 {
        let c = standard_form(&random_gt2_circuit(&mut rng, 1, 1, 2)).unwrap();
        let inst = build_full(&c).unwrap();
        for sector in [Sector::Full, Sector::Good, Sector::FakeBad] {
            let dense = min_eigenvalue_with(&inst, sector, solvers.get("dense").unwrap(), 0)
                .unwrap()
                .0;
            for name in ["iterative", "auto"] {
                let r = min_eigenvalue_with(&inst, sector, solvers.get(name).unwrap(), 7)
                    .unwrap()
                    .0;
                assert!(
                    (r.lambda_min - dense.lambda_min).abs() < 1e-8,
                    "{name} {sector:?}: {} vs {}",
                    r.lambda_min,
                    dense.lambda_min
                );
                assert!(r.residual < 1e-6);
            }
        }
    }
}

#[test]
fn instances_round_trip_through_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..5 {
        let c = standard_form(&random_gt2_circuit(&mut rng, 2, 1, 3)).unwrap();
        let inst = build_full(&c).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
    }
}

#[test]
fn no_circuit_ground_energies_follow_the_path_gap() {
    // the clock path of length T + 1 with a penalty at one end
    for (name, c) in no_circuits() {
        let inst = build_full(&c).unwrap();
        let r = min_eigenvalue_with(&inst, Sector::Full, solver_registry().get("auto").unwrap(), 0)
            .unwrap()
            .0;
        let t = c.len() as f64;
        let expected = 1.0 - (std::f64::consts::PI / (2.0 * (t + 1.0))).cos();
        assert!(
            (r.lambda_min - expected).abs() < 1e-9,
            "{name}: {} vs {expected}",
            r.lambda_min
        );
    }
}
