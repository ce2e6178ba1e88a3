use nucleoq::cooperative::{
    collective_context, crossover_focal_diameter, effective_thickness, lamb_moessbauer,
    lamb_moessbauer_factor, recoil_energy, resonance_cross_section, Regime,
};
use nucleoq::nucdata::{load_dataset, Dataset, NuclearTransition, TargetMaterial};
use nucleoq::photonics::focal_length;
use nucleoq::units::{Area, Energy, Length, Temperature};
use proptest::prelude::*;
use std::path::PathBuf;

fn dataset() -> Dataset {
    load_dataset(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")).unwrap()
}

fn fe(ds: &Dataset) -> (NuclearTransition, TargetMaterial) {
    let t = ds.transition("Fe57").unwrap().clone();
    let m = ds.material_for(&t).unwrap().clone();
    (t, m)
}

#[test]
fn fe57_recoil_energy() {
    let ds = dataset();
    let (t, m) = fe(&ds);
    let er = recoil_energy(&t, &m).ev();
    // E_γ²/(2Mc²) with M = 56.9354 u is 1.9585e-3 eV; the rounded 1.956e-3
    // quoted in the literature uses a slightly different mass
    assert!((er - 1.956e-3).abs() / 1.956e-3 < 5e-3, "{er}");
}

#[test]
fn fe57_lamb_moessbauer() {
    let ds = dataset();
    let (t, m) = fe(&ds);
    let f = lamb_moessbauer(&t, &m).unwrap();
    assert!((f - 0.76).abs() <= 0.01, "{f}");
}

#[test]
fn fe57_cross_section_and_thickness() {
    let ds = dataset();
    let (t, m) = fe(&ds);
    // with the tabulated f_LM
    let sigma = resonance_cross_section(&t, 0.76);
    assert!(
        (sigma.0 - 1.87e-22).abs() / 1.87e-22 < 0.01,
        "{:e}",
        sigma.0
    );
    let xi = effective_thickness(sigma, &m, Length::from_um(21.9));
    assert!((xi - 86.7).abs() / 86.7 < 0.02, "{xi}");
    assert_eq!(effective_thickness(sigma, &m, Length(0.0)), 0.0);
    assert_eq!(resonance_cross_section(&t, 0.0), Area(0.0));
    let mut heavy = t.clone();
    heavy.alpha = 1e300;
    assert!(resonance_cross_section(&heavy, 0.76).0 < 1e-300);
}

#[test]
fn xi_of_100_thickness() {
    // invert ξ = 99 … 100 for a Fe-57 slab: about 25 μm at this σ_R
    let ds = dataset();
    let (t, m) = fe(&ds);
    let sigma = resonance_cross_section(&t, 0.76);
    let d = 4.0 * 100.0 / (sigma.0 * m.resonant_density());
    assert!(d > 20e-6 && d < 30e-6, "{d}");
}

/// (isotope, f_LM, L_foc [μm], ξ) as tabulated
const TABLE2: [(&str, f64, f64, f64); 16] = [
    ("Hg201", 0.98, 19.8, 0.00359),
    ("Pt193", 1.0, 20.8, 0.323),
    ("Pb205", 0.95, 29.5, 2.98e-7),
    ("Sm151", 0.92, 61.1, 0.218),
    ("Tm171", 0.95, 63.8, 0.249),
    ("Rb83", 0.2, 66.6, 0.556),
    ("Ta181", 0.94, 79.0, 2.53),
    ("Tm169", 0.85, 107.0, 1.66),
    ("Os187", 0.95, 124.0, 1.34),
    ("Tm167", 0.78, 132.0, 0.155),
    ("La137", 0.5, 134.0, 0.384),
    ("Cs134", 0.00015, 142.0, 0.000239),
    ("Ge73", 0.75, 168.0, 0.0764),
    ("Fe57", 0.76, 183.0, 86.7),
    ("Sm149", 0.16, 285.0, 0.472),
    ("Sn119", 0.082, 302.0, 6.86),
];

#[test]
fn table2_reproduced() {
    let ds = dataset();
    for (name, f_tab, l_tab, xi_tab) in TABLE2 {
        let t = ds.transition(name).unwrap();
        let m = ds.material_for(t).unwrap();
        let f = lamb_moessbauer(t, m).unwrap();
        // f_LM is printed to two significant figures
        assert!(
            (f - f_tab).abs() <= 0.01 + 0.05 * f_tab,
            "{name}: f_LM {f} vs {f_tab}"
        );
        let l = focal_length(t.wavelength(), Length::from_nm(100.0)).um();
        assert!(
            (l - l_tab).abs() / l_tab < 0.01,
            "{name}: L_foc {l} vs {l_tab}"
        );
        let xi = effective_thickness(resonance_cross_section(t, f), m, m.inv_mu);
        assert!(
            (xi - xi_tab).abs() / xi_tab < 0.10,
            "{name}: ξ {xi} vs {xi_tab}"
        );
    }
}

#[test]
fn ta181_thickness() {
    let ds = dataset();
    let t = ds.transition("Ta181").unwrap();
    let m = ds.material_for(t).unwrap();
    let xi = effective_thickness(
        resonance_cross_section(t, lamb_moessbauer(t, m).unwrap()),
        m,
        m.inv_mu,
    );
    assert!((xi - 2.53).abs() / 2.53 < 0.10, "{xi}");
}

#[test]
fn absorption_length_always_shorter_than_focus_at_100nm() {
    let ds = dataset();
    for (name, _, _, _) in TABLE2 {
        let t = ds.transition(name).unwrap();
        let m = ds.material_for(t).unwrap();
        let c = collective_context(t, m, Length::from_nm(100.0), None, true).unwrap();
        assert_eq!(c.regime, Regime::Absorption, "{name}");
        assert_eq!(c.d_used, m.inv_mu);
    }
}

#[test]
fn fe57_crossover_near_35nm() {
    let ds = dataset();
    let (t, m) = fe(&ds);
    let d = crossover_focal_diameter(&t, &m);
    assert!((d.nm() - 35.0).abs() < 1.0, "{}", d.nm());
    let l = focal_length(t.wavelength(), d);
    assert!((l.0 - m.inv_mu.0).abs() / m.inv_mu.0 < 1e-12);
    // the regime flips across it
    let below = collective_context(&t, &m, Length(d.0 * 0.999), None, true).unwrap();
    let above = collective_context(&t, &m, Length(d.0 * 1.001), None, true).unwrap();
    assert_eq!(below.regime, Regime::FocalLength);
    assert_eq!(above.regime, Regime::Absorption);
}

#[test]
fn cooperative_switch() {
    let ds = dataset();
    let (t, m) = fe(&ds);
    let on = collective_context(&t, &m, Length::from_nm(100.0), None, true).unwrap();
    let off = collective_context(&t, &m, Length::from_nm(100.0), None, false).unwrap();
    assert_eq!(off.xi, 0.0);
    assert_eq!(off.gamma, off.gamma0);
    assert!((on.gamma / on.gamma0 - (on.xi + 1.0)).abs() < 1e-12);
    assert!((on.xi + 1.0 - 88.0).abs() / 88.0 < 0.02);
}

proptest! {
    #[test]
    fn f_lm_decreasing_in_temperature_and_energy(
        t1 in 1.0f64..600.0, dt in 1.0f64..300.0,
        e1 in 1.0f64..50.0, de in 0.5f64..20.0,
        theta in 50.0f64..600.0
    ) {
        let er = |e_kev: f64| Energy((e_kev * 1e3 * 1.602176634e-19).powi(2) / (2.0 * 57.0 * 1.66053906660e-27 * 8.987551787368176e16));
        let th = Temperature(theta);
        let a = lamb_moessbauer_factor(er(e1), th, Temperature(t1)).unwrap();
        let b = lamb_moessbauer_factor(er(e1), th, Temperature(t1 + dt)).unwrap();
        prop_assert!(b < a);
        let c = lamb_moessbauer_factor(er(e1 + de), th, Temperature(t1)).unwrap();
        prop_assert!(c < a);
        prop_assert!(a > 0.0 && a <= 1.0);
    }

    #[test]
    fn xi_linear(s in 1e-24f64..1e-21, d in 1e-7f64..1e-4, k in 0.1f64..10.0) {
        let ds = dataset();
        let (_, m) = fe(&ds);
        let base = effective_thickness(Area(s), &m, Length(d));
        let ks = effective_thickness(Area(s * k), &m, Length(d));
        let kd = effective_thickness(Area(s), &m, Length(d * k));
        let mut mk = m.clone();
        mk.number_density *= k;
        let kn = effective_thickness(Area(s), &mk, Length(d));
        for v in [ks, kd, kn] {
            prop_assert!((v / base - k).abs() < 1e-12 * k);
        }
    }
}
