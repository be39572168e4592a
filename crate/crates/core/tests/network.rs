use std::collections::BTreeSet;
use std::f64::consts::PI;

use proptest::prelude::*;
use visector_core::antenna::{normalized_gain, IntegrationGrid};
use visector_core::network::{
    pathloss_db, serving_cell, serving_map, BBox, CellId, Deployment, MacroAntenna, NetworkParams, VisSpec,
};
use visector_core::radio::{per_hz_powers, LinkBudget, RadioMode};
use visector_core::{ArrayDesign, Point, ScenarioConfig};

fn macros_only(rings: usize) -> Deployment {
    let params = NetworkParams {
        rings,
        ..NetworkParams::default()
    };
    let design = ArrayDesign::uniform(2, 2, 0.5, 0.5).unwrap();
    Deployment::build(&params, &MacroAntenna::default(), &design, &[], &IntegrationGrid::default()).unwrap()
}

fn paper_deployment() -> Deployment {
    let cfg = ScenarioConfig::paper();
    Deployment::build(
        &cfg.network,
        &cfg.macro_antenna,
        &cfg.array.design().unwrap(),
        &cfg.vis,
        &cfg.array.grid().unwrap(),
    )
    .unwrap()
}

fn all_cells(dep: &Deployment) -> Vec<CellId> {
    dep.cells.iter().map(|c| c.id).collect()
}

#[test]
fn every_macro_sector_owns_a_region() {
    let dep = macros_only(2);
    let budget = LinkBudget::from_deployment(&dep);
    let powers = per_hz_powers(&dep, &budget, RadioMode::Baseline);
    let map = serving_map(&dep, &powers, &all_cells(&dep), &BBox::centered(1300.0), 10.0).unwrap();
    assert_eq!(map.distinct().len(), 57);
}

#[test]
fn lone_site_has_three_regions() {
    let dep = macros_only(0);
    let budget = LinkBudget::from_deployment(&dep);
    let powers = per_hz_powers(&dep, &budget, RadioMode::Baseline);
    let map = serving_map(&dep, &powers, &all_cells(&dep), &BBox::centered(400.0), 20.0).unwrap();
    assert_eq!(map.distinct(), vec![CellId(0), CellId(1), CellId(2)]);
}

#[test]
fn virtual_sectors_form_islands_inside_their_parent_sectors() {
    let dep = paper_deployment();
    let budget = LinkBudget::from_deployment(&dep);
    let on = per_hz_powers(&dep, &budget, RadioMode::BandwidthSharing);
    let off = per_hz_powers(&dep, &budget, RadioMode::Baseline);
    let cells = all_cells(&dep);
    let macros: Vec<CellId> = dep.cells.iter().filter(|c| !c.is_virtual()).map(|c| c.id).collect();
    let map = serving_map(&dep, &on, &cells, &BBox::centered(700.0), 10.0).unwrap();

    let mut seen = BTreeSet::new();
    for j in 0..map.ny {
        for i in 0..map.nx {
            let id = map.get(i, j);
            if !dep.cell(id).is_virtual() {
                continue;
            }
            seen.insert(id);
            let p = map.pixel_center(i, j);
            let links = dep.links(p).unwrap();
            let parent = dep.pairs.iter().find(|q| q.vis_cell == id).unwrap().macro_cell;
            assert_eq!(serving_cell(&links, &off, &macros).unwrap(), parent, "pixel at {p:?}");
            // island: never touches the edge of the window
            assert!(i > 0 && j > 0 && i + 1 < map.nx && j + 1 < map.ny);
        }
    }
    assert_eq!(seen.len(), 3);
}

#[test]
fn rerunning_a_map_is_identical() {
    let dep = macros_only(1);
    let budget = LinkBudget::from_deployment(&dep);
    let powers = per_hz_powers(&dep, &budget, RadioMode::Baseline);
    let bbox = BBox::centered(600.0);
    let a = serving_map(&dep, &powers, &all_cells(&dep), &bbox, 25.0).unwrap();
    let b = serving_map(&dep, &powers, &all_cells(&dep), &bbox, 25.0).unwrap();
    let (mut ca, mut cb) = (Vec::new(), Vec::new());
    a.write_csv(&mut ca).unwrap();
    b.write_csv(&mut cb).unwrap();
    assert_eq!(ca, cb);
    let mut pgm = Vec::new();
    a.write_pgm(&mut pgm).unwrap();
    assert!(pgm.starts_with(b"P2\n"));
}

fn macro_gain_oracle(h_off_deg: f64, v_off_deg: f64) -> f64 {
    14.0 - f64::min(12.0 * (h_off_deg / 70.0).powi(2), 25.0) - f64::min(12.0 * (v_off_deg / 10.0).powi(2), 20.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn attenuation_combines_gain_and_pathloss(x in -900.0f64..900.0, y in -900.0f64..900.0) {
        let dep = paper_deployment();
        let pos = Point::new(x, y);
        for (k, cell) in dep.cells.iter().enumerate().filter(|(k, _)| *k < 3 || *k >= 57) {
            let (dx, dy) = (x - cell.position.x, y - cell.position.y);
            let ground = dx.hypot(dy);
            let d3 = ground.hypot(30.5);
            let pl = 128.1 + 37.6 * (d3.max(10.0) / 1000.0).log10();
            prop_assert!((pathloss_db(d3 / 1000.0).unwrap() - pl).abs() < 1e-9);
            let mut off = dy.atan2(dx) - cell.azimuth_rad;
            while off > PI { off -= 2.0 * PI; }
            while off <= -PI { off += 2.0 * PI; }
            let depression = 30.5f64.atan2(ground);
            let gain = if cell.is_virtual() {
                let spec = &dep.cells[k];
                let visector_core::network::Antenna::Array(a) = &spec.antenna else { unreachable!() };
                let theta = PI / 2.0 + depression;
                let g = if off.abs() <= PI / 2.0 {
                    normalized_gain(a.model.design(), a.model.steering(), theta, off).unwrap() * a.g0
                } else {
                    0.0
                };
                if g > 0.0 { (10.0 * g.log10()).max(-30.0) } else { -30.0 }
            } else {
                macro_gain_oracle(off.to_degrees(), depression.to_degrees() - 8.0)
            };
            let want = 10f64.powf((gain - pl) / 10.0);
            let got = dep.attenuation(cell.id, pos).unwrap();
            prop_assert!((got - want).abs() <= 1e-9 * want, "cell {k}: {got} vs {want}");
        }
    }
}

#[test]
fn virtual_sector_beats_its_macro_on_beam() {
    // On the beam axis of each virtual sector, the array gain exceeds the
    // macro gain, so the link ratio equals the dB gain difference.
    let dep = paper_deployment();
    for (spec, pair) in ScenarioConfig::paper().vis.iter().zip(&dep.pairs) {
        let vis = dep.cell(pair.vis_cell);
        let ground = 30.5 / spec.vertical_tilt_deg.to_radians().tan();
        let bearing = vis.azimuth_rad + spec.horizontal_tilt_deg.to_radians();
        let p = Point::new(ground * bearing.cos(), ground * bearing.sin());
        let h_vis = dep.attenuation(pair.vis_cell, p).unwrap();
        let h_mac = dep.attenuation(pair.macro_cell, p).unwrap();
        let ratio_db = 10.0 * (h_vis / h_mac).log10();
        let off = spec.horizontal_tilt_deg;
        let dep_deg = spec.vertical_tilt_deg;
        let visector_core::network::Antenna::Array(a) = &vis.antenna else { unreachable!() };
        let theta = (90.0 + dep_deg).to_radians();
        let g_vis = 10.0 * (a.g0 * normalized_gain(a.model.design(), a.model.steering(), theta, off.to_radians()).unwrap()).log10();
        let g_mac = macro_gain_oracle(off, dep_deg - 8.0);
        assert!((ratio_db - (g_vis - g_mac)).abs() < 1e-9);
        assert!(ratio_db > 10.0, "{ratio_db}");
    }
}

#[test]
fn rejects_bad_virtual_sectors() {
    let params = NetworkParams::default();
    let design = ArrayDesign::uniform(2, 2, 0.5, 0.5).unwrap();
    let grid = IntegrationGrid::default();
    let build = |v: &[VisSpec]| Deployment::build(&params, &MacroAntenna::default(), &design, v, &grid);
    let ok = VisSpec { parent_sector: 0, vertical_tilt_deg: 10.0, horizontal_tilt_deg: 0.0 };
    assert!(build(&[ok]).is_ok());
    assert!(build(&[VisSpec { parent_sector: 3, ..ok }]).is_err());
    assert!(build(&[ok, ok]).is_err());
    assert!(build(&[VisSpec { vertical_tilt_deg: 35.0, ..ok }]).is_err());
    assert!(build(&[VisSpec { horizontal_tilt_deg: 50.0, ..ok }]).is_err());
}
