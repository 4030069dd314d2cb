//! Cross-validation between the fast signed-shift path and the exact
//! engines: the parity membership test against brute-force closure, and the
//! float simulator against exact matrix powers.

use grover_walk::linalg::build_u;
use grover_walk::sim::{build_u_float, matrix_to_complex, AmplitudeState};
use grover_walk::walk_group::{monomial_walk_group, DEFAULT_MAX_ELEMENTS};
use num_complex::Complex64;

/// The fast membership test (`shift = 0` and evenly many `-1` signs) must
/// agree with brute-force closure membership for *every* element of `K`
/// before it can be trusted; the commutator sign patterns span exactly the
/// even-weight parity vectors, and this pins the index convention down.
#[test]
fn parity_membership_equals_bruteforce_membership() {
    for n in 2u64..=8 {
        let wg = monomial_walk_group(n, DEFAULT_MAX_ELEMENTS).unwrap();
        let mut fast_members = 0usize;
        for element in wg.k().elements() {
            let fast = element.in_h();
            let brute = wg.h().contains(element);
            assert_eq!(
                fast, brute,
                "in_h disagrees with closure membership at n={n} for {element}"
            );
            fast_members += fast as usize;
        }
        assert_eq!(
            fast_members,
            1usize << (n - 1),
            "count of in-H elements of K at n={n}"
        );
    }
}

/// Float evolution tracks the exact matrix powers entrywise within 1e-10
/// for n <= 6 and t <= 2n.
#[test]
fn float_evolution_tracks_exact_powers() {
    for n in 2usize..=6 {
        let dim = n * n;
        let u_float = build_u_float(n);
        let u_exact = build_u(n as u64);

        // one float state per basis column, advanced in lockstep with the
        // exact running power
        let mut columns: Vec<AmplitudeState> = (0..dim)
            .map(|col| {
                let mut amps = vec![Complex64::new(0.0, 0.0); dim];
                amps[col] = Complex64::new(1.0, 0.0);
                AmplitudeState::new(n, amps).unwrap()
            })
            .collect();
        let mut exact_power = u_exact.clone();

        for t in 1..=2 * n {
            for state in columns.iter_mut() {
                *state = u_float.apply(state);
            }
            let exact_numeric = matrix_to_complex(&exact_power);
            for (col, state) in columns.iter().enumerate() {
                for row in 0..dim {
                    let delta = (state.amplitudes()[row] - exact_numeric[row * dim + col]).norm();
                    assert!(
                        delta < 1e-10,
                        "n={n}, t={t}, entry ({row},{col}) drifted by {delta}"
                    );
                }
            }
            if t < 2 * n {
                exact_power = exact_power.matmul(&u_exact).unwrap();
            }
        }
    }
}
