use polygamy_core::measures::{
    assistance_closed_schmidt, assistance_oracle, formation_oracle, wootters_concurrence, Bipartition, MeasureKind,
    OracleConfig, SchmidtCut,
};
use polygamy_core::states::{haar_random_pure_with, reduce, schmidt_state, seeded_stream, w_state, DensityMatrix, SchmidtFamily};
use polygamy_core::tensor::{hermitian_eigenvalues, hermitian_sqrt, spin_flip, SubsystemDims};

fn pair_cut() -> Bipartition {
    Bipartition::new(&[0], 2).unwrap()
}

/// Two-qubit concurrence of assistance as `Σ η_i`, from the square roots
/// of the eigenvalues of `√ρ ρ̃ √ρ`.
fn assistance_sum_of_etas(rho: &DensityMatrix) -> f64 {
    let root = hermitian_sqrt(rho.matrix()).unwrap();
    let r = &(&root * &spin_flip(rho.matrix()).unwrap()) * &root;
    hermitian_eigenvalues(&r).unwrap().into_iter().map(|l| l.max(0.0).sqrt()).sum()
}

fn random_two_qubit(seed: u64, rank: usize) -> DensityMatrix {
    let mut rng = seeded_stream(seed, 0);
    let dims = SubsystemDims::qubits(2);
    let states: Vec<_> = (0..rank).map(|_| haar_random_pure_with(&dims, &mut rng)).collect();
    let w: Vec<f64> = (0..rank).map(|k| 1.0 + k as f64).collect();
    let total: f64 = w.iter().sum();
    let parts: Vec<_> = states.iter().zip(&w).map(|(s, w)| (w / total, s)).collect();
    DensityMatrix::mixture(&parts).unwrap()
}

#[test]
fn assistance_matches_schmidt_closed_forms() {
    let cfg = OracleConfig::default();
    let mut rng = seeded_stream(8, 0);
    for _ in 0..10 {
        let p = SchmidtFamily::sample(&mut rng, false, false);
        let s = schmidt_state(&p).unwrap();
        for (keep, cut) in [([0, 1], SchmidtCut::AB), ([0, 2], SchmidtCut::AC)] {
            let got = assistance_oracle(&reduce(&s, &keep).unwrap(), &pair_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg)
                .unwrap()
                .value;
            let want = assistance_closed_schmidt(&p, cut);
            assert!((got - want).abs() < 1e-6, "{cut:?}: {got} vs {want}");
        }
    }
}

#[test]
fn assistance_matches_sum_of_etas() {
    let cfg = OracleConfig::default();
    for (seed, rank) in [(1, 2), (2, 3), (3, 4), (4, 2)] {
        let rho = random_two_qubit(seed, rank);
        let got = assistance_oracle(&rho, &pair_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap();
        let want = assistance_sum_of_etas(&rho);
        assert!(got.value <= want + 1e-9);
        assert!(want - got.value < 5e-3, "rank {rank}: {} vs {want}", got.value);
    }
}

#[test]
fn formation_matches_wootters_on_rank_two() {
    let cfg = OracleConfig::default();
    for seed in 10..16 {
        let rho = random_two_qubit(seed, 2);
        let got = formation_oracle(&rho, &pair_cut(), &cfg).unwrap().value;
        let want = wootters_concurrence(&rho).unwrap();
        assert!(got >= want - 1e-9);
        assert!(got - want < 5e-3, "{got} vs {want}");
    }
}

#[test]
fn w_pair_tangle_of_assistance_exceeds_squared_concurrence_of_assistance() {
    // measuring C in the computational basis leaves |Ψ+> with probability 2/3
    let rho = reduce(&w_state(3), &[0, 1]).unwrap();
    let cfg = OracleConfig::default();
    let tau = assistance_oracle(&rho, &pair_cut(), MeasureKind::TangleOfAssistance, &cfg).unwrap().value;
    let ca = assistance_oracle(&rho, &pair_cut(), MeasureKind::ConcurrenceOfAssistance, &cfg).unwrap().value;
    assert!((tau - 2.0 / 3.0).abs() < 1e-9);
    assert!((ca - 2.0 / 3.0).abs() < 1e-6);
    assert!(tau > ca * ca + 0.2, "{tau} {ca}");
}
