use proptest::prelude::*;
use sectorscatter_core::statistics::{ks_statistic, EmpiricalCdf};
use sectorscatter_core::{
    inverse_radius, pl_pdf_closed_form, sample_batch, sample_node, PathLossParams, RandomStream,
    SectorAnnulus,
};
use std::f64::consts::TAU;

fn region() -> impl Strategy<Value = SectorAnnulus<f64>> {
    (0.0..1e4f64, 1e-3..1e4f64, 0.0..TAU, 1e-3..TAU).prop_filter_map("valid region", |(l1, dl, a1, da)| {
        let a2 = (a1 + da).min(TAU);
        SectorAnnulus::new(l1, l1 + dl, a1, a2).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip_identity(reg in region(), u in 0.0..=1.0f64) {
        let r = inverse_radius(&reg, u).unwrap();
        let back = reg.radial_cdf(r);
        prop_assert!((back - u).abs() <= 1e-12, "u={u} back={back}");
        if reg.l1() == 0.0 && u > 0.0 {
            prop_assert!(((back - u) / u).abs() <= 1e-12);
        }
    }

    #[test]
    fn samples_stay_in_region(reg in region(), seed in any::<u64>()) {
        let batch = sample_batch(&reg, 200, &mut RandomStream::new(seed));
        for (p, q) in batch.polar.iter().zip(&batch.points) {
            prop_assert!(reg.contains(*p), "{p:?} outside {reg:?}");
            prop_assert!(q.x.is_finite() && q.y.is_finite());
        }
    }

    #[test]
    fn single_precision_samples_stay_in_region(reg in region(), seed in any::<u64>()) {
        let r32 = SectorAnnulus::new(reg.l1() as f32, reg.l2() as f32, reg.a1() as f32, reg.a2() as f32);
        prop_assume!(r32.is_ok());
        let r32 = r32.unwrap();
        let mut s = RandomStream::new(seed);
        for _ in 0..200 {
            let p = sample_node(&r32, &mut s);
            prop_assert!(r32.contains(p), "{p:?} outside {r32:?}");
        }
    }

    #[test]
    fn radial_cdf_is_monotone(reg in region(), n in 2usize..400) {
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=n {
            let r = reg.l1() + (reg.l2() - reg.l1()) * k as f64 / n as f64;
            let f = reg.radial_cdf(r);
            prop_assert!(f >= prev && (0.0..=1.0).contains(&f));
            prev = f;
        }
    }

    #[test]
    fn cdf_derivative_matches_pdf(reg in region(), t in 0.05..0.95f64) {
        let span = reg.l2() - reg.l1();
        let h = 1e-5 * span;
        let r = reg.l1() + t * span;
        let fd = (reg.radial_cdf(r + h) - reg.radial_cdf(r - h)) / (2.0 * h);
        let pdf = reg.radial_pdf(r);
        // O(h²) truncation is zero for a linear pdf; what remains is the
        // rounding of r ± h and of the two CDF values, divided by 2h.
        let rounding = 4.0 * f64::EPSILON * (reg.l2() * pdf + 1.0) / (2.0 * h);
        prop_assert!((fd - pdf).abs() <= rounding + 1e-9 * pdf, "fd={fd} pdf={pdf}");
    }

    #[test]
    fn scale_covariance_power_of_two(reg in region(), k in -8i32..8, t in 0.0..=1.0f64) {
        let c = 2f64.powi(k);
        let scaled = reg.scaled(c).unwrap();
        let r = reg.l1() + t * (reg.l2() - reg.l1());
        prop_assert_eq!(scaled.radial_cdf(c * r), reg.radial_cdf(r));
    }

    #[test]
    fn scale_covariance_general(reg in region(), c in 1e-3..1e3f64, t in 0.0..=1.0f64) {
        let scaled = reg.scaled(c).unwrap();
        let r = reg.l1() + t * (reg.l2() - reg.l1());
        let (a, b) = (scaled.radial_cdf(c * r), reg.radial_cdf(r));
        let slack = 8.0 * f64::EPSILON * (reg.l2() * reg.l2() / reg.radial_span_sq()).max(1.0);
        prop_assert!((a - b).abs() <= slack, "{a} vs {b}");
    }

    #[test]
    fn equal_seeds_give_identical_batches(reg in region(), seed in any::<u64>()) {
        let a = sample_batch(&reg, 64, &mut RandomStream::new(seed));
        let b = sample_batch(&reg, 64, &mut RandomStream::new(seed));
        for (p, q) in a.polar.iter().zip(&b.polar) {
            prop_assert_eq!(p.r.to_bits(), q.r.to_bits());
            prop_assert_eq!(p.theta.to_bits(), q.theta.to_bits());
        }
    }

    #[test]
    fn ks_invariant_under_increasing_transform(
        xs in prop::collection::vec(0.001..0.999f64, 50..300),
        shift in -5.0..5.0f64,
        scale in 0.1..10.0f64,
    ) {
        let cdf = |x: f64| x.clamp(0.0, 1.0);
        let d = ks_statistic(&xs, cdf).unwrap();
        // y = scale·x³ + shift is strictly increasing; its inverse feeds the CDF.
        let g = |x: f64| scale * x * x * x + shift;
        let ginv = |y: f64| ((y - shift) / scale).cbrt();
        let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        let d2 = ks_statistic(&ys, |y| cdf(ginv(y))).unwrap();
        prop_assert!((d - d2).abs() < 1e-9, "{d} vs {d2}");
    }

    #[test]
    fn empirical_cdf_is_a_step_function(xs in prop::collection::vec(-1e3..1e3f64, 1..200)) {
        let e = EmpiricalCdf::new(&xs).unwrap();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(e.eval(lo - 1.0), 0.0);
        prop_assert_eq!(e.eval(hi), 1.0);
        let mut prev = 0.0;
        for k in 0..=100 {
            let x = lo - 1.0 + (hi - lo + 2.0) * k as f64 / 100.0;
            let f = e.eval(x);
            prop_assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn closed_form_density_is_nonnegative(
        l1 in 0.0..500f64,
        dl in 1.0..2000f64,
        alpha in 0.0..120f64,
        beta in 10.0..60f64,
        sigma in 0.5..15f64,
        t in -1.0..2.0f64,
    ) {
        let p = PathLossParams::new(l1, l1 + dl, 1.0, alpha, beta, sigma).unwrap();
        let (lo, hi) = p.support(4.0, 1e-3);
        let l = lo + t * (hi - lo);
        let f = pl_pdf_closed_form(&p, l).unwrap();
        prop_assert!(f >= -1e-12 && f.is_finite(), "f({l}) = {f}");
    }
}
