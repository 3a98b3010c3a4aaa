use framesmith::arith::{rat, PiRational};
use framesmith::construction::{
    admissibility_check, build_scaling, build_wavelets, random_admissible_sigma, PartitionRule, SpectralSpec,
};
use framesmith::family_file::FamilyFile;
use framesmith::frametest::{frame_energy, TestSignal, DEFAULT_K_BUDGET};
use framesmith::report::Status;
use framesmith::verification::{
    check_ntf_multiwavelet, check_scaling_wavelet_pair, check_sufficiency, check_with_decay, Mode, VerifyOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DILATIONS: [i64; 4] = [2, 3, -2, -3];

#[test]
fn random_admissible_sigmas_yield_verified_families() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = VerifyOptions::default();
    for n in 0..50 {
        let a = DILATIONS[rng.random_range(0..DILATIONS.len())];
        let spec = SpectralSpec::new(random_admissible_sigma(&mut rng, a), a).unwrap();
        assert!(admissibility_check(&spec).passed(), "case {n}");
        let rule = if n % 2 == 0 {
            PartitionRule::Layered
        } else {
            PartitionRule::Windows
        };
        let phi = build_scaling(&spec).unwrap();
        let psi = build_wavelets(&spec, rule).unwrap();
        for r in [
            check_scaling_wavelet_pair(&phi, &psi, &opts),
            check_with_decay(&phi, &psi, &opts),
            check_sufficiency(&phi, &psi, &opts),
            check_ntf_multiwavelet(&psi, Mode::Exact, &opts),
        ] {
            assert_eq!(
                r.status,
                Status::Pass,
                "case {n}, a = {a}, sigma {:?}: {r:#?}",
                spec.sigma
            );
        }

        let bad = psi.scaled(&rat(101, 100));
        let r = check_sufficiency(&phi, &bad, &opts);
        assert_eq!(r.status, Status::Fail, "case {n}");
        assert!(r.checks.iter().any(|c| c.witness.is_some()));
    }
}

#[test]
fn family_files_survive_a_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let spec = SpectralSpec::new(random_admissible_sigma(&mut rng, 3), 3).unwrap();
        let f = FamilyFile::construct(&spec, PartitionRule::Windows, "random").unwrap();
        let text = f.to_json();
        assert_eq!(FamilyFile::from_json(&text).unwrap().to_json(), text);
    }
}

#[test]
fn frame_energy_is_invariant_under_dilating_the_signal() {
    let spec = SpectralSpec::new(framesmith::construction::examples::shannon_sigma(), 2).unwrap();
    let psi = build_wavelets(&spec, PartitionRule::Layered).unwrap();
    let f = TestSignal::tent(&PiRational::new(1, 2), &PiRational::integer(3)).unwrap();
    let g = TestSignal::tent(&PiRational::integer(1), &PiRational::integer(6)).unwrap();
    let e_f = frame_energy(&f, &psi, -20, 6, DEFAULT_K_BUDGET).unwrap();
    // ĝ(ξ) = f̂(ξ/2), so scale j of g matches scale j − 1 of f
    let e_g = frame_energy(&g, &psi, -19, 7, DEFAULT_K_BUDGET).unwrap();
    assert!((e_f.ratio - e_g.ratio).abs() < 1e-6, "{} vs {}", e_f.ratio, e_g.ratio);
    assert!((e_g.norm_sqr - 2.0 * e_f.norm_sqr).abs() < 1e-12);
}
