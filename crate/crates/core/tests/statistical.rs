use sectorscatter_core::statistics::{chi_square_uniform, correlation, integrate, ks_test};
use sectorscatter_core::{
    demo_layout, run_csa, sample_batch, superposed_density, PolarPoint, RandomStream, SectorAnnulus,
};
use std::f64::consts::{PI, TAU};

/// Each test runs at α = 0.01 over 80 independent runs, so about one
/// rejection is expected. More than 4 has probability ≈ 1.3e-3 under a
/// correct sampler. Regions get disjoint seeds: the radius KS statistic
/// depends only on the uniforms, so shared seeds would repeat it.
#[test]
fn radius_and_angle_pass_goodness_of_fit_in_several_regions() {
    let regions = [
        (0.0, 1.0, 0.0, TAU),
        (200.0, 1000.0, 0.0, TAU),
        (999.0, 1000.0, 1.0, 1.2),
        (5.0, 50.0, 3.0 * PI / 2.0, TAU),
    ];
    let per_region = 10u64;
    let mut rejections = Vec::new();
    for (k, &(l1, l2, a1, a2)) in regions.iter().enumerate() {
        let reg = SectorAnnulus::new(l1, l2, a1, a2).unwrap();
        for seed in (0..per_region).map(|i| 100 + per_region * k as u64 + i) {
            let batch = sample_batch(&reg, 100_000, &mut RandomStream::new(seed));
            let r: Vec<f64> = batch.radii().collect();
            let t: Vec<f64> = batch.angles().collect();
            let ks = ks_test(&r, |x| reg.radial_cdf(x)).unwrap();
            let chi = chi_square_uniform(&t, a1, a2, 32).unwrap();
            for report in [ks, chi] {
                if !report.passed {
                    rejections.push(format!("{reg:?} seed {seed}: {report:?}"));
                }
            }
            assert!(correlation(&r, &t).unwrap().abs() < 0.015);
        }
    }
    let runs = 2 * regions.len() * per_region as usize;
    assert!(
        rejections.len() <= 4,
        "{} of {runs} rejected:\n{}",
        rejections.len(),
        rejections.join("\n")
    );
}

#[test]
fn single_precision_sampling_is_uniform() {
    let reg = SectorAnnulus::<f32>::new(200.0, 1000.0, 0.0, std::f32::consts::TAU).unwrap();
    let batch = sample_batch(&reg, 200_000, &mut RandomStream::new(5));
    let r: Vec<f64> = batch.radii().map(f64::from).collect();
    let reg64 = SectorAnnulus::<f64>::new(200.0, 1000.0, 0.0, TAU).unwrap();
    let ks = ks_test(&r, |x| reg64.radial_cdf(x)).unwrap();
    assert!(ks.passed, "{ks:?}");
}

#[test]
fn uniform_in_disc_radius_is_not_uniform() {
    // Naive r = l2·u must be rejected; guards against a silent sqrt loss.
    let reg = SectorAnnulus::disc(1.0).unwrap();
    let mut s = RandomStream::new(11);
    let naive: Vec<f64> = (0..100_000).map(|_| s.uniform::<f64>()).collect();
    assert!(!ks_test(&naive, |x| reg.radial_cdf(x)).unwrap().passed);
}

/// Polar-binned histogram of the superposed demo placement against the
/// mixture density, bin by bin, within a binomial envelope.
#[test]
fn superposed_histogram_matches_mixture_density() {
    let base = demo_layout::<f64>();
    let total_target = 1_000_000usize;
    let per = total_target / base.sector_count();
    // Unequal weights so the mixture is non-trivial.
    let mut layout = base.with_uniform_counts(per);
    for (m, sector) in layout
        .layers
        .iter_mut()
        .flat_map(|l| l.sectors.iter_mut())
        .enumerate()
    {
        sector.node_count = per / 2 + m * per / 7;
    }
    let placed = run_csa(&layout, &RandomStream::new(2024)).unwrap();
    let n = placed.superposed.len();
    assert_eq!(n, layout.total_nodes());

    let (nr, nt) = (20usize, 24usize);
    let r_max = 1000.0;
    let mut counts = vec![0usize; nr * nt];
    for p in &placed.superposed {
        let i = ((p.polar.r / r_max * nr as f64) as usize).min(nr - 1);
        let j = ((p.polar.theta / TAU * nt as f64) as usize).min(nt - 1);
        counts[i * nt + j] += 1;
    }

    let mut worst = 0.0f64;
    for i in 0..nr {
        for j in 0..nt {
            let (r_lo, r_hi) = (r_max * i as f64 / nr as f64, r_max * (i + 1) as f64 / nr as f64);
            let (t_lo, t_hi) = (TAU * j as f64 / nt as f64, TAU * (j + 1) as f64 / nt as f64);
            // Bins are aligned with layer and sector edges, so the density is
            // smooth inside each bin; nested quadrature is plenty.
            let mass = integrate(
                |r| {
                    integrate(
                        |t| superposed_density(&layout, PolarPoint::new(r, t)),
                        t_lo,
                        t_hi,
                        1e-12,
                    )
                    .unwrap()
                },
                r_lo,
                r_hi,
                1e-10,
            )
            .unwrap();
            let expected = mass * n as f64;
            let sd = (n as f64 * mass * (1.0 - mass)).sqrt().max(1.0);
            let z = (counts[i * nt + j] as f64 - expected).abs() / sd;
            worst = worst.max(z);
        }
    }
    // 480 bins: P(max |z| > 4.5) is about 3e-3 under the null.
    assert!(worst < 4.5, "worst bin z = {worst}");
}
