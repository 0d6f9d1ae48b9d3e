use super::*;
use crate::chebfam::FamilyParameter;

fn t(s: &str) -> FamilyParameter {
    FamilyParameter::parse(s).unwrap()
}

#[test]
fn centre_codes_to_zeros() {
    let c = ProjPoint::real([1.0, 1.0, 1.0]).unwrap();
    let w = itinerary(&FamilyParameter::one(), &c, 12).unwrap();
    assert_eq!(w.to_string(), "000000000000");
}

#[test]
fn outside_point_leaves_at_once() {
    let p = ProjPoint::real([5.0, 0.1, 1.0]).unwrap();
    assert!(matches!(
        itinerary(&t("1/2"), &p, 5),
        Err(ErgodicError::LeftU { step: 0, .. })
    ));
}

#[test]
fn realized_words_round_trip() {
    let tt = t("1/2");
    let anchor = default_anchors()[0];
    for w in ["0123", "3210", "1111", "203"] {
        let word: ItineraryWord = w.parse().unwrap();
        let p = realize_word(&tt, &word, &anchor).unwrap();
        assert_eq!(itinerary(&tt, &p, word.len()).unwrap(), word);
    }
}

#[test]
fn all_words_of_length_two() {
    let tt = t("1/2");
    let anchor = default_anchors()[0];
    for i in 0..16 {
        let w = ItineraryWord::from_index(i, 2);
        let p = realize_word(&tt, &w, &anchor).unwrap();
        assert_eq!(itinerary(&tt, &p, 2).unwrap(), w);
    }
}

#[test]
fn constant_word_of_length_twenty() {
    let tt = t("1/2");
    let w = ItineraryWord::new(vec![0; 20]).unwrap();
    let chain = realize_chain(&tt, &w, &default_anchors()[1]).unwrap();
    assert_eq!(chain.len(), 21);
}

#[test]
fn shift_equivariance() {
    let tt = t("1/2");
    let w: ItineraryWord = "2130312".parse().unwrap();
    let p = realize_word(&tt, &w, &default_anchors()[0]).unwrap();
    let fp = crate::chebfam::build_family_map(&tt).evaluate(&p).unwrap();
    assert_eq!(itinerary(&tt, &fp, 6).unwrap(), w.shift());
}

#[test]
fn word_parsing() {
    assert!(matches!("014".parse::<ItineraryWord>(), Err(ErgodicError::InvalidSymbol('4'))));
    assert_eq!(ItineraryWord::from_index(27, 3).to_string(), "123");
    assert_eq!(ItineraryWord::from_index(27, 3).cylinder(3), 27);
}

#[test]
fn mu_samples_are_real_and_in_u() {
    for s in ["1/20", "1"] {
        let recs = sample_mu(&t(s), 200, 30, 5, 11).unwrap();
        for r in &recs {
            assert_eq!(r.len(), 5);
            for (p, l) in r.points.iter().zip(&r.labels) {
                assert!(p.max_imag() < 1e-12);
                assert!(l.and_then(|l| l.symbol()).is_some());
            }
            assert!(r.max_relation_defect() < 1e-9);
        }
    }
}

#[test]
fn mu_cylinders_are_uniform() {
    let recs = sample_mu(&t("1/2"), 6400, 20, 3, 5).unwrap();
    let mut counts = [0usize; 64];
    for r in &recs {
        let w = itinerary(&r.t, &r.points[0], 3).unwrap();
        counts[w.cylinder(3)] += 1;
    }
    let expected = 100.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 63 degrees of freedom; 3 standard deviations above the mean
    assert!(chi2 < 63.0 + 3.0 * (2.0f64 * 63.0).sqrt(), "chi2 = {chi2}");
}

#[test]
fn branches_keep_u_backward_invariant() {
    use crate::chebfam::{classify_region, FamilyInverse};
    use rand::Rng;
    let ch = AdaptedChart::new();
    let mut r = crate::rng::stream(9, 0);
    for s in ["1/2", "1/20", "9/10"] {
        let inv = FamilyInverse { t: t(s).value() };
        for _ in 0..2500 {
            let (rad, th): (f64, f64) = (r.gen_range(0.0..0.499), r.gen_range(0.0..std::f64::consts::TAU));
            let p = ch.from_real(rad * th.cos(), rad * th.sin());
            for b in 0..4 {
                let q = inv.branch(&p, b).unwrap();
                let l = classify_region(&q).unwrap();
                assert!(l.symbol().is_some() || l == crate::chebfam::RegionLabel::BoundaryAmbiguous);
            }
        }
    }
}

#[test]
fn nu_samples_are_complex_and_consistent() {
    let tt = t("1/20");
    let cfg = NuConfig {
        orbit_length: 5,
        ..NuConfig::default()
    };
    let recs = sample_nu_with(&tt, 100, &cfg, 4).unwrap();
    let complex = recs
        .iter()
        .filter(|r| {
            let lc = line_chart().to_chart(&r.points[0]).unwrap();
            lc[0].im.abs() > 1e-3
        })
        .count();
    assert!(complex >= 90, "{complex}");
    for r in &recs {
        assert!(r.max_relation_defect() < 1e-8);
    }
}

#[test]
fn nu_history_depth_converges() {
    let tt = t("1/20");
    let a = sample_nu(&tt, 10, 20, 8).unwrap();
    let b = sample_nu(&tt, 10, 30, 8).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(fs_distance(&x.points[0], &y.points[0]) < 1e-6);
    }
}

#[test]
fn nu_rejects_large_t() {
    assert!(matches!(
        sample_nu(&t("1/2"), 1, 20, 0),
        Err(ErgodicError::ParameterOutOfRange(_))
    ));
}

#[test]
fn lyapunov_sign_patterns() {
    let tt = t("1/20");
    let mu = sample_mu(&tt, 1, 50, 4000, 1).unwrap();
    let e = *lyapunov(&mu[0]).unwrap().estimate().unwrap();
    assert!(e.z_scores()[1] > 5.0, "{e:?}");
    let cfg = NuConfig {
        orbit_length: 4000,
        ..NuConfig::default()
    };
    let nu = sample_nu_with(&tt, 1, &cfg, 1).unwrap();
    let e = *lyapunov(&nu[0]).unwrap().estimate().unwrap();
    assert!(e.z_scores()[0] > 5.0 && e.z_scores()[1] < -5.0, "{e:?}");
}

#[test]
fn sink_is_reported() {
    let p = ProjPoint::real([1.0, 0.01, 0.02]).unwrap();
    let out = lyapunov_forward(&FamilyParameter::one(), &p, 1000).unwrap();
    assert!(matches!(out, LyapunovOutcome::NonHyperbolicSink { .. }));
}

#[test]
fn entropy_depth_one_and_three() {
    let r = entropy_lower_bound(&t("1/2"), 1).unwrap();
    assert_eq!((r.realized, r.total), (4, 4));
    assert!((r.bound - 4f64.ln()).abs() < 1e-12);
    let r = entropy_lower_bound(&t("1/20"), 3).unwrap();
    assert_eq!(r.realized, 64);
    assert!(r.epsilon > 0.0);
}

#[test]
fn fates_are_mostly_attracted() {
    let s = fate_survey(&t("1/20"), 200, &[], &FateConfig::default(), 2);
    assert!(s.count(|f| matches!(f, Fate::Attracted(_))) > 150);
    assert!(s.to_csv().starts_with("index,fate,steps\n0,"));
}
