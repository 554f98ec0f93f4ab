//! Statistical checks of the Monte Carlo sampler.

use std::f64::consts::PI;

use wishprod_core::quad;
use wishprod_core::sampler::{
    empirical_cdf, ks_two_sample, rescale, sample_ginibre, sample_induced_square, sample_product_spectrum,
    sample_spectra, sup_distance, RngStream, Scaling, TabulatedCdf,
};
use wishprod_core::EnsembleParams;

fn mp_cdf() -> TabulatedCdf {
    TabulatedCdf::from_density(
        |x| Ok((x * (4.0 - x)).max(0.0).sqrt() / (2.0 * PI * x)),
        0.0,
        4.0,
        400,
        2.0,
        1e-11,
    )
    .unwrap()
}

#[test]
fn ginibre_moments() {
    let mut rng = RngStream::new(10, 0);
    let g = sample_ginibre(1000, 1000, &mut rng);
    let n = 1e6;
    let m2 = g.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
    let cov = g.iter().map(|z| z.re * z.im).sum::<f64>() / n;
    assert!((m2 - 1.0).abs() < 0.004, "{m2}");
    assert!(cov.abs() < 0.004, "{cov}");
}

#[test]
fn marchenko_pastur_global_spectrum() {
    let p = EnsembleParams::new(200, vec![0], vec![]).unwrap();
    let draws = sample_spectra(&p, &RngStream::new(21, 0), 100).unwrap();
    let mut all = Vec::new();
    for d in &draws {
        all.extend(rescale(d, Scaling::Global).unwrap().eigenvalues);
    }
    let cdf = mp_cdf();
    let d = sup_distance(&empirical_cdf(all).unwrap(), |x| cdf.cdf(x));
    assert!(d < 0.03, "{d}");
}

#[test]
fn inverse_wishart_ratio_is_arcsine() {
    let p = EnsembleParams::new(200, vec![0], vec![0]).unwrap();
    let draws = sample_spectra(&p, &RngStream::new(22, 0), 20).unwrap();
    let lam: Vec<f64> = draws.iter().flat_map(|d| d.eigenvalues.iter().map(|x| 1.0 / (1.0 + x))).collect();
    let d = sup_distance(&empirical_cdf(lam).unwrap(), |l| (2.0 / PI) * l.clamp(0.0, 1.0).sqrt().asin());
    assert!(d < 0.03, "{d}");
}

#[test]
fn psd_and_sorted_every_draw() {
    let p = EnsembleParams::new(12, vec![0, 2], vec![1, 0]).unwrap();
    for d in sample_spectra(&p, &RngStream::new(3, 0), 50).unwrap() {
        let max = *d.eigenvalues.last().unwrap();
        assert!(d.eigenvalues[0] >= -1e-10 * max);
        assert!(d.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn sampling_is_thread_count_independent() {
    let p = EnsembleParams::new(6, vec![1], vec![0]).unwrap();
    let root = RngStream::new(77, 5);
    let a = sample_spectra(&p, &root, 16).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let b = pool.install(|| sample_spectra(&p, &root, 16).unwrap());
    assert_eq!(a, b);
}

#[test]
fn induced_trace_mean() {
    let (n, big_n) = (5, 3);
    let root = RngStream::new(4, 0);
    let m = 100_000;
    let tr: Vec<f64> = (0..m)
        .map(|i| {
            let x = sample_induced_square(n, big_n, &mut root.substream(i));
            x.iter().map(|z| z.norm_sqr()).sum::<f64>()
        })
        .collect();
    let mean = tr.iter().sum::<f64>() / m as f64;
    // Tr H†H is Gamma(nN, 1)
    let se = ((n * big_n) as f64 / m as f64).sqrt();
    assert!((mean - (n * big_n) as f64).abs() < 3.0 * se, "{mean}");
}

#[test]
fn induced_scalar_is_gamma() {
    let n = 3;
    let root = RngStream::new(5, 0);
    let xs: Vec<f64> =
        (0..100_000).map(|i| sample_induced_square(n, 1, &mut root.substream(i))[(0, 0)].norm_sqr()).collect();
    // Gamma(3, 1) CDF
    let cdf = |x: f64| 1.0 - (-x).exp() * (1.0 + x + x * x / 2.0);
    let d = sup_distance(&empirical_cdf(xs).unwrap(), cdf);
    assert!(d < 0.02, "{d}");
}

#[test]
fn induced_with_zero_exponent_matches_ginibre() {
    let root = RngStream::new(6, 0);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..3000 {
        let x = sample_induced_square(4, 4, &mut root.substream(2 * i));
        let g = sample_ginibre(4, 4, &mut root.substream(2 * i + 1));
        a.extend(x.singular_values().iter().copied());
        b.extend(g.singular_values().iter().copied());
    }
    let (_, p) = ks_two_sample(&empirical_cdf(a).unwrap(), &empirical_cdf(b).unwrap());
    assert!(p > 0.01, "{p}");
}

#[test]
fn factor_order_does_not_change_spectrum() {
    let p1 = EnsembleParams::new(20, vec![0], vec![1, 3]).unwrap();
    let p2 = EnsembleParams::new(20, vec![0], vec![3, 1]).unwrap();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for d in sample_spectra(&p1, &RngStream::new(8, 0), 500).unwrap() {
        a.push(d.eigenvalues[0]);
        a.push(d.eigenvalues[10]);
    }
    for d in sample_spectra(&p2, &RngStream::new(8, 1), 500).unwrap() {
        b.push(d.eigenvalues[0]);
        b.push(d.eigenvalues[10]);
    }
    let (_, pv) = ks_two_sample(&empirical_cdf(a).unwrap(), &empirical_cdf(b).unwrap());
    assert!(pv > 0.01, "{pv}");
}

#[test]
fn fuss_catalan_moments_at_finite_n() {
    let p = EnsembleParams::new(100, vec![0, 0], vec![]).unwrap();
    let draws = sample_spectra(&p, &RngStream::new(9, 0), 40).unwrap();
    let mut m = [0.0; 3];
    let mut count = 0.0;
    for d in &draws {
        for x in rescale(d, Scaling::Global).unwrap().eigenvalues {
            m[0] += x;
            m[1] += x * x;
            m[2] += x * x * x;
            count += 1.0;
        }
    }
    for (k, e) in [1.0, 3.0, 12.0].iter().enumerate() {
        let v = m[k] / count;
        assert!((v - e).abs() < 0.05 * e, "m{} = {v}", k + 1);
    }
}

#[test]
fn jacobi_reduction_n1() {
    for alpha in [0u32, 2] {
        let p = EnsembleParams::new(1, vec![alpha], vec![0]).unwrap();
        let root = RngStream::new(12, alpha as u64);
        let lam: Vec<f64> = (0..50_000)
            .map(|i| 1.0 / (1.0 + sample_product_spectrum(&p, &mut root.substream(i)).unwrap().eigenvalues[0]))
            .collect();
        let a = alpha as i32 + 1;
        let d = sup_distance(&empirical_cdf(lam).unwrap(), |l| 1.0 - (1.0 - l).powi(a));
        assert!(d < 0.01, "α={alpha}: {d}");
    }
}

#[test]
fn jacobi_reduction_n2() {
    // one-point marginal of (1-λ₁)^α(1-λ₂)^α(λ₁-λ₂)² on [0,1]²
    for alpha in [0u32, 2] {
        let a = alpha as i32;
        let marginal = |l: f64| {
            quad::integrate(|t| Ok((1.0 - l).powi(a) * (1.0 - t).powi(a) * (l - t).powi(2)), 0.0, 1.0, 1e-14, 1e-13)
        };
        let cdf = TabulatedCdf::from_density(marginal, 0.0, 1.0, 200, 1.0, 1e-12).unwrap();
        let p = EnsembleParams::new(2, vec![alpha], vec![0]).unwrap();
        let lam: Vec<f64> = sample_spectra(&p, &RngStream::new(13, alpha as u64), 20_000)
            .unwrap()
            .iter()
            .flat_map(|d| d.eigenvalues.iter().map(|x| 1.0 / (1.0 + x)).collect::<Vec<_>>())
            .collect();
        let d = sup_distance(&empirical_cdf(lam).unwrap(), |l| cdf.cdf(l));
        assert!(d < 0.01, "α={alpha}: {d}");
    }
}
