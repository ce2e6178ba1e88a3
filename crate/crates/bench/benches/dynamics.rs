use criterion::{criterion_group, criterion_main, Criterion};
use nucleoq::bloch::evolve;
use nucleoq::pipeline::{run_batch, run_scenario};
use nucleoq::units::{ElectricField, Energy, Time};
use nucleoq::{ScenarioConfig, SublevelSystem};
use nucleoq_bench::shipped_dataset;
use std::hint::black_box;

fn bloch(c: &mut Criterion) {
    let ds = shipped_dataset();
    let mut g = c.benchmark_group("evolve");
    for iso in ["Fe57", "Ta181"] {
        let t = ds.transition(iso).unwrap();
        let sys =
            SublevelSystem::new(t, Energy::from_ev(1e-8), Energy(0.0), Energy(0.0), 1).unwrap();
        g.bench_function(iso, |b| {
            b.iter(|| {
                evolve(
                    &sys,
                    black_box(ElectricField(1e12)),
                    Time::from_fs(100.0),
                    1e-10,
                )
            })
        });
    }
    g.finish();
}

fn scenarios(c: &mut Criterion) {
    let ds = shipped_dataset();
    let fe = ScenarioConfig::new("Fe57", "XFELO");
    c.bench_function("run_scenario Fe57/XFELO", |b| {
        b.iter(|| run_scenario(black_box(&fe), &ds))
    });
    let ion = ScenarioConfig::ion_beam("Ho165", "EuropeanXFEL");
    c.bench_function("run_scenario Ho165 ion beam", |b| {
        b.iter(|| run_scenario(black_box(&ion), &ds))
    });
    // every solid-state target against every laser
    let table: Vec<ScenarioConfig> = ds
        .transitions
        .iter()
        .filter(|(_, t)| ds.material_for(t).is_ok())
        .flat_map(|(iso, _)| {
            ["EuropeanXFEL", "LCLS", "SACLA", "XFELO"].map(|l| ScenarioConfig::new(iso, l))
        })
        .collect();
    c.bench_function("run_batch solid-state table", |b| {
        b.iter(|| run_batch(black_box(&table), &ds))
    });
}

criterion_group!(benches, bloch, scenarios);
criterion_main!(benches);
