mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::erp_weight;
use odisr::geometry::*;
use proptest::prelude::*;

fn circular_gap(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

#[test]
fn weights_match_closed_form_and_mirror() {
    for n in [1usize, 2, 3, 4, 7, 100, 1023, 4096] {
        let q = row_weights(n).unwrap();
        for y in 0..n {
            assert!((q.get(y) - erp_weight(y, n)).abs() < 1e-15);
            assert!(q.get(y) > 0.0 && q.get(y) <= 1.0);
            assert_eq!(q.get(y).to_bits(), q.get(n - 1 - y).to_bits());
        }
    }
    assert!(row_weights(0).is_err());
}

#[test]
fn weight_total_approximates_sphere_integral() {
    for n in [256usize, 1024, 4096] {
        let q = row_weights(n).unwrap();
        let total: f64 = q.weights().iter().sum::<f64>() * PI / n as f64;
        assert!((total - 2.0).abs() < 1e-4, "n={n} total={total}");
        assert!((q.column_total() * PI / n as f64 - total).abs() < 1e-12);
    }
}

#[test]
fn direction_round_trip() {
    let (w, h) = (360, 180);
    for (u, v) in [(0.5, 0.5), (180.0, 90.0), (359.5, 179.5), (12.25, 33.75)] {
        let (lon, lat) = pixel_to_direction(u, v, w, h).unwrap();
        let (u2, v2) = direction_to_pixel(lon, lat, w, h);
        assert!((u - u2).abs() < 1e-9 && (v - v2).abs() < 1e-9);
    }
    let (lon, lat) = pixel_to_direction(180.0, 90.0, w, h).unwrap();
    assert!(lon.abs() < 1e-15 && lat.abs() < 1e-15);
    assert!(pixel_to_direction(360.5, 0.0, w, h).is_err());
    let (_, v) = direction_to_pixel(0.0, FRAC_PI_2 + 0.1, w, h);
    assert_eq!(v, 0.0);
}

#[test]
fn viewport_spec_validation() {
    assert!(ViewportSpec::new(PI, 0.0, 1.0, 4, 4).is_err());
    assert!(ViewportSpec::new(0.0, 1.6, 1.0, 4, 4).is_err());
    assert!(ViewportSpec::new(0.0, 0.0, PI, 4, 4).is_err());
    assert!(ViewportSpec::new(0.0, 0.0, 1.0, 0, 4).is_err());
    let s = ViewportSpec::from_degrees(540.0, 10.0, 90.0, 8, 4).unwrap();
    assert!((s.yaw() + PI).abs() < 1e-12);
}

#[test]
fn straight_up_view_reaches_top_row() {
    let spec = ViewportSpec::new(0.0, FRAC_PI_2, 1.0, 5, 5).unwrap();
    let grid = viewport_sample_grid(&spec, 64, 32);
    let (_, v) = grid.get(2, 2);
    assert!(v < 1e-9);
}

proptest! {
    #[test]
    fn yaw_rotation_shifts_columns(yaw in -3.0f64..3.0, delta in -3.0f64..3.0, pitch in -1.4f64..1.4,
                                   fov in 0.2f64..2.5, w in 8usize..512) {
        let h = w / 2 + 1;
        let wrapped = (yaw + delta + PI).rem_euclid(2.0 * PI) - PI;
        let base = viewport_sample_grid(&ViewportSpec::new(yaw, pitch, fov, 9, 7).unwrap(), w, h);
        let turned = viewport_sample_grid(&ViewportSpec::new(wrapped, pitch, fov, 9, 7).unwrap(), w, h);
        let shift = delta * w as f64 / (2.0 * PI);
        for (&(u0, v0), &(u1, v1)) in base.coords().iter().zip(turned.coords()) {
            prop_assert!(circular_gap(u1, u0 + shift, w as f64) < 1e-9);
            prop_assert!((v1 - v0).abs() < 1e-9);
        }
    }
}
