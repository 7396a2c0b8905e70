mod common;

use common::*;
use ngsim::fock::{auto_cutoffs, oracle_overlap, oracle_state};
use ngsim::gates::{Gate, GaussOp};
use ngsim::linalg::*;
use ngsim::phase::{overlap, stellar_overlap, GaussianPure};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair_cutoffs(n: usize, a: &[Gate], b: &[Gate]) -> Vec<usize> {
    let ca = auto_cutoffs(n, a, 1e-18);
    let cb = auto_cutoffs(n, b, 1e-18);
    ca.iter().zip(&cb).map(|(x, y)| *x.max(y)).collect()
}

#[test]
fn random_pairs_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..40 {
        let n = 1 + trial % 2;
        let ga = random_state_gates(&mut rng, n, 1.0, 1.5);
        let gb = random_state_gates(&mut rng, n, 1.0, 1.5);
        let cut = pair_cutoffs(n, &ga, &gb);
        let fa = oracle_state(n, &ga, &cut).unwrap();
        let fb = oracle_state(n, &gb, &cut).unwrap();
        let want = oracle_overlap(&fa, &fb).unwrap();
        let a = GaussianPure::from_gates(n, &ga).unwrap();
        let b = GaussianPure::from_gates(n, &gb).unwrap();
        let via_triple = overlap(&a, &b).unwrap();
        let via_stellar = stellar_overlap(&a, &b).unwrap();
        assert!(close(via_triple, want, 1e-8), "trial {trial}: {via_triple} vs {want}");
        assert!(close(via_stellar, want, 1e-8), "trial {trial}: {via_stellar} vs {want}");
        // vacuum amplitude and one Fock amplitude with phase
        assert!(close(a.ref_overlap(), fa.amps[0], 1e-9));
        let occ = vec![1; n];
        assert!(close(a.fock_amplitude(&occ), fa.amplitude(&occ).unwrap(), 1e-9));
    }
}

#[test]
fn symplectic_gate_has_positive_vacuum_amplitude() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..6 {
        let gates = random_state_gates(&mut rng, 2, 0.8, 1.0);
        let s = gates.iter().fold(RMat::identity(4, 4), |acc, g| g.symplectic(2) * acc);
        let d = gates.iter().fold(RVec::zeros(4), |acc, g| g.symplectic(2) * acc + g.op(2).d);
        let whole = Gate::Symplectic { s: s.clone(), d: d.clone() };
        let cut = auto_cutoffs(2, &gates, 1e-18);
        let f = oracle_state(2, &[whole.clone()], &cut).unwrap();
        let g = GaussianPure::from_gates(2, &[whole]).unwrap();
        let h = GaussianPure::from_op(&GaussOp::new(s.clone(), d).unwrap()).unwrap();
        assert!(close(g.ref_overlap(), f.amps[0], 1e-9));
        assert!(close(h.ref_overlap(), f.amps[0], 1e-9));
        // without displacement the vacuum amplitude is real and positive
        let bare = GaussianPure::from_op(&GaussOp::new(s, RVec::zeros(4)).unwrap()).unwrap();
        assert!(bare.ref_overlap().im.abs() < 1e-14 && bare.ref_overlap().re > 0.0);
    }
}

#[test]
fn squeezed_vacuum_overlap_value() {
    let g = GaussianPure::from_gates(1, &[Gate::Squeeze { mode: 0, r: 1.0, phi: 0.0 }]).unwrap();
    let f = oracle_state(1, &[Gate::Squeeze { mode: 0, r: 1.0, phi: 0.0 }], &[200]).unwrap();
    let v = GaussianPure::vacuum(1);
    assert!((overlap(&v, &g).unwrap().re - 1.0 / 1f64.cosh().sqrt()).abs() < 1e-14);
    assert!(close(overlap(&v, &g).unwrap(), f.amps[0], 1e-12));
}
