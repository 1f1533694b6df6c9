use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use twdp_bench::{label, params, psk, radius, snr, PARAM_SETS};
use twdp_core::asep::{asep_exact, asep_quadrature};
use twdp_core::dist::{cdf, pdf, SnrContext};
use twdp_core::mgf::{mgf_closed, mgf_series};
use twdp_core::SeriesControl;

fn envelope(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let mut g = c.benchmark_group("envelope");
    for (k, gamma) in PARAM_SETS {
        let p = params(k, gamma);
        let r = radius(0.9);
        g.bench_with_input(BenchmarkId::new("pdf", label(k, gamma)), &p, |b, p| {
            b.iter(|| pdf(p, black_box(r), &ctl).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("cdf", label(k, gamma)), &p, |b, p| {
            b.iter(|| cdf(p, black_box(r), &ctl).unwrap())
        });
    }
    g.finish();
}

fn asep(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let mut g = c.benchmark_group("asep");
    for (k, gamma) in PARAM_SETS {
        let p = params(k, gamma);
        for m in [2, 16] {
            let id = format!("{}_m{m}", label(k, gamma));
            let spec = psk(m);
            g.bench_function(BenchmarkId::new("exact", &id), |b| {
                b.iter(|| asep_exact(&p, &spec, black_box(snr(20.0)), &ctl).unwrap())
            });
            g.bench_function(BenchmarkId::new("quadrature", &id), |b| {
                b.iter(|| asep_quadrature(&p, &spec, black_box(snr(20.0))).unwrap())
            });
        }
    }
    g.finish();
}

fn mgf(c: &mut Criterion) {
    let ctl = SeriesControl::default();
    let mut g = c.benchmark_group("mgf");
    for (k, gamma) in PARAM_SETS {
        let p = params(k, gamma);
        let ctx = SnrContext::from_gamma0(&p, 10.0).unwrap();
        g.bench_function(BenchmarkId::new("series", label(k, gamma)), |b| {
            b.iter(|| mgf_series(&p, &ctx, black_box(-0.5), &ctl).unwrap())
        });
        g.bench_function(BenchmarkId::new("closed", label(k, gamma)), |b| {
            b.iter(|| mgf_closed(&p, &ctx, black_box(-0.5)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, envelope, asep, mgf);
criterion_main!(benches);
