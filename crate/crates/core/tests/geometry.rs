use ksmooth::geometry::assemble_polygons;
use ksmooth::geometry::geojson::{canonicalize, write_geojson, Layer};
use ksmooth::{
    h_plugin, kdde_grad_at, kde, kde_at, marching_squares, probability_contours, BandwidthMatrix,
    DensityField, FieldKind, Grid2D, PointSet,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

fn shoelace(ring: &[geojson::Position]) -> f64 {
    ring.windows(2)
        .map(|w| w[0][0] * w[1][1] - w[1][0] * w[0][1])
        .sum::<f64>()
        / 2.0
}

fn sample() -> PointSet {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..400 {
        let u = (i as f64 * 0.618_034).fract();
        let v = (i as f64 * 0.414_214).fract();
        let c = if i % 3 == 0 { 4.0 } else { 0.0 };
        xs.push(c + 2.0 * (u - 0.5));
        ys.push(1.6 * (v - 0.5) + 0.4 * u);
    }
    PointSet::new(xs, ys).unwrap()
}

#[test]
fn geojson_rings_follow_right_hand_rule() {
    let pts = sample();
    let est = kde(&pts, &BandwidthMatrix::new(0.05, 0.0, 0.05).unwrap(), 101).unwrap();
    let set = probability_contours(&est, &[10, 50, 90]).unwrap();
    let text = write_geojson(&Layer::from_contours("contours", &set)).unwrap();
    let fc: geojson::FeatureCollection = text.parse().unwrap();
    assert_eq!(fc.features.len(), 3);
    let mut rings = 0;
    for f in &fc.features {
        let polys = match &f.geometry.as_ref().unwrap().value {
            geojson::GeometryValue::MultiPolygon { coordinates } => coordinates.clone(),
            geojson::GeometryValue::Polygon { coordinates } => vec![coordinates.clone()],
            other => panic!("unexpected geometry {other:?}"),
        };
        for poly in polys {
            assert!(
                shoelace(&poly[0]) > 0.0,
                "exterior must be counterclockwise"
            );
            for hole in &poly[1..] {
                assert!(shoelace(hole) < 0.0, "holes must be clockwise");
            }
            for ring in &poly {
                assert!(ring.len() >= 4);
                assert_eq!(ring.first(), ring.last());
                rings += 1;
            }
        }
    }
    assert!(rings >= 3);
    assert_eq!(canonicalize(&text).unwrap(), text);
    let reserialised = geojson::GeoJson::from(fc).to_string();
    assert_eq!(canonicalize(&reserialised).unwrap(), text);
}

#[test]
fn contour_regions_match_thresholded_grid() {
    let mut r = StdRng::seed_from_u64(11);
    let xs: Vec<f64> = (0..2000)
        .map(|_| r.sample::<f64, _>(StandardNormal))
        .collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|x| 0.5 * x + 0.8 * r.sample::<f64, _>(StandardNormal))
        .collect();
    let pts = PointSet::new(xs, ys).unwrap();
    let est = kde(&pts, &h_plugin(&pts, 0).unwrap(), 151).unwrap();
    let set = probability_contours(&est, &[30, 60, 90]).unwrap();
    let g = *est.field.grid();
    for region in &set.regions {
        let (mut inside, mut above) = (0.0, 0.0);
        for j in 0..g.ny {
            for i in 0..g.nx {
                let w = est.field.at(i, j) * g.dx * g.dy;
                if region.geometry.contains(g.vertex(i, j)) {
                    inside += w;
                }
                if est.field.at(i, j) >= region.estimate {
                    above += w;
                }
            }
        }
        let p = region.contlabel as f64 / 100.0;
        assert!(
            (inside - above).abs() < 1e-9,
            "p={p}: polygon mass {inside} vs threshold mass {above}"
        );
        assert!((inside - p).abs() < 0.05, "p={p} mass {inside}");
    }
}

fn random_field(values: Vec<f64>, nx: usize) -> DensityField {
    let ny = values.len() / nx;
    let grid = Grid2D::new(-1.0, 2.0, 0.5, 0.25, nx, ny).unwrap();
    DensityField::new(grid, values[..nx * ny].to_vec(), FieldKind::Density).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn superlevel_set_contains_exactly_the_high_vertices(
        values in prop::collection::vec(0.0f64..1.0, 64),
        level in 0.05f64..0.95,
    ) {
        let f = random_field(values, 8);
        let rings = marching_squares(&f, level).unwrap();
        let mp = assemble_polygons(rings, &f, level).unwrap();
        let g = *f.grid();
        for j in 1..g.ny - 1 {
            for i in 1..g.nx - 1 {
                let v = f.at(i, j);
                prop_assert_eq!(mp.contains(g.vertex(i, j)), v >= level, "vertex ({}, {}) = {}", i, j, v);
            }
        }
        for p in mp.polygons() {
            prop_assert!(p.exterior.is_ccw());
            prop_assert!(p.holes.iter().all(|h| !h.is_ccw()));
        }
    }

    #[test]
    fn density_is_translation_equivariant(
        tx in -50.0f64..50.0,
        ty in -50.0f64..50.0,
        ex in -3.0f64..3.0,
        ey in -3.0f64..3.0,
    ) {
        let pts = sample();
        let h = BandwidthMatrix::new(0.3, -0.1, 0.2).unwrap();
        let moved = pts.translated([tx, ty]);
        let a = kde_at(&pts, &h, &[[ex, ey]])[0];
        let b = kde_at(&moved, &h, &[[ex + tx, ey + ty]])[0];
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1e-300));
        let ga = kdde_grad_at(&pts, &h, &[[ex, ey]])[0];
        let gb = kdde_grad_at(&moved, &h, &[[ex + tx, ey + ty]])[0];
        let scale = ga[0].hypot(ga[1]).max(1e-12);
        prop_assert!((ga[0] - gb[0]).hypot(ga[1] - gb[1]) <= 1e-7 * scale);
    }

    #[test]
    fn density_is_point_reflection_symmetric(ex in -3.0f64..3.0, ey in -3.0f64..3.0) {
        let pts = sample();
        let flipped = pts.scaled(-1.0, -1.0);
        let h = BandwidthMatrix::new(0.3, 0.12, 0.2).unwrap();
        let a = kde_at(&pts, &h, &[[ex, ey]])[0];
        let b = kde_at(&flipped, &h, &[[-ex, -ey]])[0];
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }
}
