use super::*;
use crate::chebfam::ell;

fn one() -> FamilyParameter {
    FamilyParameter::one()
}

#[test]
fn tiny_pixmap_layout() {
    let spec = GridSpec::new(2, 1, Viewport::adapted_default()).unwrap();
    let g = ImageGrid {
        spec,
        pixels: vec![Pixel { code: 1, time: 0 }, Pixel { code: 4, time: 1 }],
    };
    let bytes = g.pixmap_bytes(&Palette::basins()).unwrap();
    assert_eq!(bytes.len(), 21 + 6);
    assert_eq!(&bytes[..21], b"P6\n# chebdyn\n2 1\n255\n");
    assert_eq!(&bytes[21..24], &[0, 160, 60]);
}

#[test]
fn missing_code_fails_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.ppm");
    let spec = GridSpec::new(1, 1, Viewport::adapted_default()).unwrap();
    let g = ImageGrid { spec, pixels: vec![Pixel { code: 9, time: 0 }] };
    assert!(matches!(
        write_pixmap(&g, &Palette::basins(), &path),
        Err(RenderError::MissingCode(9))
    ));
    assert!(!path.exists());
}

#[test]
fn palette_text_round_trip() {
    let p = Palette::partition();
    assert_eq!(p.to_text().parse::<Palette>().unwrap(), p);
    assert!("1 2 3".parse::<Palette>().is_err());
}

#[test]
fn viewport_and_size_parsing() {
    let v: Viewport = "-3.5,4.5,-1.5,1.5".parse().unwrap();
    assert_eq!(v, Viewport::boundary_map_default());
    assert!("1,0,0,1".parse::<Viewport>().is_err());
    assert_eq!(GridSpec::parse_size("640x480").unwrap(), (640, 480));
    assert!(GridSpec::parse_size("0x3").is_err());
}

#[test]
fn pixel_centres() {
    let spec = GridSpec::new(800, 300, Viewport::boundary_map_default()).unwrap();
    let (x, y) = spec.pixel_center(0, 0);
    assert!((x - (-3.495)).abs() < 1e-12 && (y - 1.495).abs() < 1e-12);
    assert_eq!(spec.pixel_of(x, y), Some((0, 0)));
    let (_, y) = spec.pixel_center(0, 299);
    assert!((y + 1.495).abs() < 1e-12);
}

#[test]
fn basin_examples_at_t_one() {
    let ev = FamilyEval { t: 1.0 };
    let sinks = attractors(1.0);
    let chart = AdaptedChart::new();
    let c = basin_pixel(&ev, &sinks, chart.from_real(0.0, 0.0), 200);
    assert_eq!(c.code, CODE_INTERIOR);
    for j in 0..3 {
        let p = basin_pixel(&ev, &sinks, ProjPoint::basis(j), 200);
        assert_eq!(p, Pixel { code: j as u8 + 1, time: 0 });
    }
}

#[test]
fn u_stays_unresolved() {
    let spec = GridSpec::new(96, 96, Viewport::adapted_default()).unwrap();
    let g = render_basins(&one(), &spec, 200);
    let chart = AdaptedChart::new();
    let (mut inside, mut interior) = (0, 0);
    for j in 0..96 {
        for i in 0..96 {
            let (x, y) = spec.pixel_center(i, j);
            if crate::chebfam::rho(&chart.from_real(x, y)).re * chart.from_real(x, y).coords()[2].re.signum() < 0.0
                && x * x + y * y < 0.24
            {
                inside += 1;
                interior += (g.get(i, j).code == CODE_INTERIOR) as usize;
            }
        }
    }
    assert!(inside > 1000);
    assert!(interior as f64 >= 0.99 * inside as f64, "{interior}/{inside}");
}

#[test]
fn basins_have_threefold_symmetry() {
    let ev = FamilyEval { t: 1.0 };
    let sinks = attractors(1.0);
    let chart = AdaptedChart::new();
    let (c, s) = ((2.0 * std::f64::consts::PI / 3.0).cos(), (2.0 * std::f64::consts::PI / 3.0).sin());
    let mut mismatches = 0;
    let n = 400;
    for k in 0..n {
        let x = -1.2 + 2.4 * ((k as f64) * 0.618_034).fract();
        let y = -1.2 + 2.4 * ((k as f64) * 0.414_214).fract();
        let a = basin_pixel(&ev, &sinks, chart.from_real(x, y), 100);
        let b = basin_pixel(&ev, &sinks, chart.from_real(c * x - s * y, s * x + c * y), 100);
        let rot = |code: u8| match code {
            1..=3 => (code % 3) + 1,
            4..=6 => ((code - 3) % 3) + 4,
            other => other,
        };
        mismatches += (rot(a.code) != b.code) as usize;
    }
    assert!(mismatches <= n / 100, "{mismatches}");
}

#[test]
fn partition_at_level_zero_is_the_regions() {
    let spec = GridSpec::new(64, 64, Viewport::adapted_default()).unwrap();
    let g = render_partition(&one(), &spec, 0);
    let census = g.census();
    for c in 0..=4u8 {
        assert!(census.get(&c).copied().unwrap_or(0) > 0, "code {c} missing");
    }
    let chart = AdaptedChart::new();
    let (x, y) = spec.pixel_center(32, 32);
    let p = chart.from_real(x, y).real_coords();
    assert!(ell(p[0] / p[2], p[1] / p[2]).iter().all(|&l| l > 0.0));
    assert_eq!(g.get(32, 32).code, 0);
}

#[test]
fn partition_refines_consistently() {
    // misses are counted only where the image lands away from a k = 2 edge
    let n = 128;
    let spec = GridSpec::new(n, n, Viewport::new(-0.5, 0.5, -0.5, 0.5).unwrap()).unwrap();
    let ev = FamilyEval { t: 1.0 };
    let chart = AdaptedChart::new();
    let k3 = render_partition(&one(), &spec, 3);
    let k2 = render_partition(&one(), &spec, 2);
    let uniform = |u: usize, v: usize| {
        let c = k2.get(u, v).code;
        (u.saturating_sub(1)..(u + 2).min(n)).all(|a| (v.saturating_sub(1)..(v + 2).min(n)).all(|b| k2.get(a, b).code == c))
    };
    let (mut total, mut bad) = (0, 0);
    for j in 0..n {
        for i in 0..n {
            let px = k3.get(i, j);
            if px.code > 3 {
                continue;
            }
            let (x, y) = spec.pixel_center(i, j);
            let q = ProjPoint::new(ev.eval(&chart.from_real(x, y).coords())).unwrap();
            let a = chart.to_chart(&q).unwrap();
            let (u, v) = spec.pixel_of(a[0].re, a[1].re).unwrap();
            if uniform(u, v) {
                total += 1;
                bad += (k2.get(u, v).code != px.code) as usize;
            }
        }
    }
    assert!(total > 5000);
    assert!((bad as f64) <= 0.01 * total as f64, "{bad}/{total}");
}

#[test]
fn julia_examples_and_conjugation_symmetry() {
    let r = RatMap1D::literal_boundary_map();
    let spec = GridSpec::new(160, 60, Viewport::boundary_map_default()).unwrap();
    let g = render_julia_1d(&r, &spec, 500).unwrap();
    assert_eq!(g, g.flipped_vertically().flipped_vertically());
    assert_eq!(g.pixels, g.flipped_vertically().pixels);
    let bc = BasinClassifier::new(&r).unwrap();
    for (z, code) in [(0.0, 1u8), (1.0, 2u8)] {
        let res = bc.classify(ExtC::Finite(C64::new(z, 0.0)), 10);
        assert_eq!((banded(res.target.unwrap(), res.escape_time), res.escape_time), (code, 0));
    }
    let unresolved = g.census().get(&CODE_INTERIOR).copied().unwrap_or(0);
    assert!((unresolved as f64) < 0.05 * g.pixels.len() as f64);
}

#[test]
fn renders_ignore_thread_count() {
    let spec = GridSpec::new(48, 40, Viewport::adapted_default()).unwrap();
    let run = |n| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .unwrap()
            .install(|| render_basins(&FamilyParameter::parse("1/2").unwrap(), &spec, 60))
    };
    assert_eq!(run(1).pixmap_bytes(&Palette::basins()).unwrap(), run(4).pixmap_bytes(&Palette::basins()).unwrap());
}

#[test]
fn mu_samples_fall_in_their_partition_pixels() {
    let t = FamilyParameter::parse("1/2").unwrap();
    let spec = GridSpec::new(256, 256, Viewport::new(-0.55, 0.55, -0.55, 0.55).unwrap()).unwrap();
    let g = render_partition(&t, &spec, 0);
    let recs = crate::ergodic::sample_mu(&t, 1000, 20, 1, 3).unwrap();
    let chart = AdaptedChart::new();
    let ok = recs
        .iter()
        .filter(|r| {
            let a = chart.to_chart(&r.points[0]).unwrap();
            let (i, j) = spec.pixel_of(a[0].re, a[1].re).unwrap();
            Some(g.get(i, j).code) == r.labels[0].and_then(|l| l.symbol())
        })
        .count();
    assert!(ok >= 990, "{ok}");
}
