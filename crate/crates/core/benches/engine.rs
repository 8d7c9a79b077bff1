use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use densecell::deployment::build_layout;
use densecell::engine::{compute_sinr_map, simulate_layout, EngineParams};
use densecell::propagation::build_link_gain_matrix;
use densecell::{Exec, ScenarioConfig};

fn modes() -> Vec<(&'static str, Exec)> {
    let mut m = vec![("sequential", Exec::Sequential)];
    if Exec::Parallel.is_parallel() {
        m.push(("parallel", Exec::Parallel));
    }
    m
}

fn gain_matrix(c: &mut Criterion) {
    let cfg = ScenarioConfig::reference();
    let layout = build_layout(&cfg.geometry, 1, 0).unwrap();
    let mut g = c.benchmark_group("gain_matrix");
    for (name, exec) in modes() {
        g.bench_function(name, |b| b.iter(|| build_link_gain_matrix(&layout, &cfg.propagation, exec)));
    }
    g.finish();
}

fn drop_by_density(c: &mut Criterion) {
    let mut g = c.benchmark_group("drop");
    g.sample_size(10);
    for picos in [0usize, 2, 5] {
        let mut cfg = ScenarioConfig::reference();
        cfg.geometry.picos_per_sector = picos;
        cfg.run.ttis = 50;
        let layout = build_layout(&cfg.geometry, 1, 0).unwrap();
        let params = EngineParams::from_config(&cfg);
        for (name, exec) in modes() {
            g.bench_with_input(BenchmarkId::new(name, picos), &picos, |b, _| {
                b.iter(|| {
                    let gains = build_link_gain_matrix(&layout, &cfg.propagation, exec);
                    simulate_layout(&layout, &gains, &params, exec).unwrap()
                })
            });
        }
    }
    g.finish();
}

fn sinr_map(c: &mut Criterion) {
    let cfg = ScenarioConfig::reference();
    let layout = build_layout(&cfg.geometry, 1, 0).unwrap();
    let mut g = c.benchmark_group("sinr_map");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(name, |b| {
            b.iter(|| compute_sinr_map(&layout, &cfg.propagation, &cfg.l2s, 0.0, 25.0, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, gain_matrix, drop_by_density, sinr_map);
criterion_main!(benches);
