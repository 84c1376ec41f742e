use qprune_core::problems::generate::{desk_instance, DESK_SEED};
use qprune_core::problems::{build_number_partitioning, ProblemKind};
use qprune_core::sampler::{brute_force, sample_many, SaParams};

#[test]
fn samples_carry_their_true_energy_and_never_beat_brute_force() {
    let (_, q) = build_number_partitioning(&[5, 3, 2, 7, 1, 9, 4, 6], 1.0).unwrap();
    let floor = brute_force(&q).unwrap().energy;
    let set = sample_many(&q, 50, &SaParams::default().with_sweeps(50)).unwrap();
    assert_eq!(set.samples.len(), 50);
    for s in &set.samples {
        assert_eq!(s.energy, q.energy(&s.assignment).unwrap());
        assert!(floor <= s.energy);
    }
    let mean = set.samples.iter().map(|s| s.energy).sum::<f64>() / 50.0;
    assert_eq!(set.mean_energy(), mean);
    assert_eq!(set.best().unwrap().energy, set.samples.iter().map(|s| s.energy).fold(f64::INFINITY, f64::min));
}

#[test]
fn same_parameters_same_samples() {
    let (_, q) = desk_instance(ProblemKind::Tsp, DESK_SEED).unwrap();
    let params = SaParams::default().with_sweeps(200).with_seed(42);
    assert_eq!(sample_many(&q, 5, &params).unwrap(), sample_many(&q, 5, &params).unwrap());
}

#[test]
fn more_sweeps_do_not_hurt_on_the_desk_suite() {
    for kind in ProblemKind::ALL {
        let (_, q) = desk_instance(kind, DESK_SEED).unwrap();
        let mean = |sweeps: usize| sample_many(&q, 100, &SaParams::default().with_sweeps(sweeps).with_seed(3)).unwrap().mean_energy();
        let (short, long) = (mean(250), mean(1000));
        assert!(long <= short, "{kind}: {long} with 1000 sweeps vs {short} with 250");
    }
}
