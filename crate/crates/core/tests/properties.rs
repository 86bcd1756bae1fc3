//! Property tests for the algebraic laws the library relies on.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use motivic::arcspaces::{arc_count, ArcSetSpec, Strategy};
use motivic::convolution::{conv, conv_unsimplified};
use motivic::expr::parse_class;
use motivic::gammatools::{alpha_by_fibers, alpha_m, ominimal_chi, AffineFunctional, GammaSet, Piece, Q};
use motivic::gring::{MotClass, Realizer};
use motivic::resolution::{milnor_from_strata, parse_strata, StrataData, CUSP_BLOWUP};
use motivic::sampling::{random_poly, with_junk, ClassSampler};
use motivic::series::{Combiner, RationalSeries};

fn pair(seed: u64) -> (MotClass, MotClass, MotClass) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = ClassSampler::default();
    (s.fragment_class(&mut rng), s.fragment_class(&mut rng), s.fragment_class(&mut rng))
}

/// Points and open intervals cut out by sorted breakpoints `k / den`.
fn cells(seed: u64, den: i128) -> Vec<Piece> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<i128> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(-6..=6)).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let pts: Vec<Q> = cuts.iter().map(|&c| Q::new(c, den)).collect();
    let mut out = vec![Piece::interval(None, Some(pts[0])).unwrap()];
    for w in pts.windows(2) {
        out.push(Piece::interval(Some(w[0]), Some(w[1])).unwrap());
    }
    out.extend(pts.iter().map(|&p| Piece::point(vec![p]).unwrap()));
    out.push(Piece::interval(Some(pts[pts.len() - 1]), None).unwrap());
    out
}

fn bounded(pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.into_iter().filter(Piece::is_bounded).collect()
}

fn split(pieces: Vec<Piece>, mask: u32) -> (GammaSet, GammaSet) {
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, p) in pieces.into_iter().enumerate() {
        if mask >> (i % 32) & 1 == 1 { a.push(p) } else { b.push(p) }
    }
    (GammaSet::new(1, a).unwrap(), GammaSet::new(1, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(seed in any::<u64>()) {
        let (x, y, z) = pair(seed);
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert!((&x - &x).is_zero());
        prop_assert_eq!(&x * &MotClass::one(), x.clone());
    }

    #[test]
    fn realizations_are_ring_maps(seed in any::<u64>(), q in prop::sample::select(vec![7u64, 13, 19])) {
        let (x, y, _) = pair(seed);
        let r = Realizer::new();
        let (px, py) = (r.plain(&x, q).unwrap(), r.plain(&y, q).unwrap());
        prop_assert_eq!(r.plain(&(&x + &y), q).unwrap(), &px + &py);
        prop_assert_eq!(r.plain(&(&x * &y), q).unwrap(), &px * &py);
        prop_assert_eq!(r.twisted(&x, q, 0).unwrap(), px);
        for k in 0..6 {
            let (tx, ty) = (r.twisted(&x, q, k).unwrap(), r.twisted(&y, q, k).unwrap());
            prop_assert_eq!(r.twisted(&(&x + &y), q, k).unwrap(), &tx + &ty);
            prop_assert_eq!(r.twisted(&(&x * &y), q, k).unwrap(), &tx * &ty);
        }
    }

    #[test]
    fn convolution_is_symmetric_and_rewrites_soundly(seed in any::<u64>()) {
        let (x, y, _) = pair(seed);
        let c = conv(&x, &y).unwrap();
        prop_assert_eq!(&c, &conv(&y, &x).unwrap());
        let raw = conv_unsimplified(&x, &y).unwrap();
        let r = Realizer::new();
        for q in [7u64, 13] {
            prop_assert_eq!(r.plain(&c, q).unwrap(), r.plain(&raw, q).unwrap());
            for k in 0..6 {
                prop_assert_eq!(r.twisted(&c, q, k).unwrap(), r.twisted(&raw, q, k).unwrap());
            }
        }
    }

    #[test]
    fn class_display_round_trips(seed in any::<u64>()) {
        let (x, _, _) = pair(seed);
        prop_assert_eq!(parse_class(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn chi_is_additive_and_multiplicative(s1 in any::<u64>(), s2 in any::<u64>(), mask in any::<u32>()) {
        let whole = GammaSet::new(1, cells(s1, 2)).unwrap();
        prop_assert_eq!(ominimal_chi(&whole), -1);
        let (a, b) = split(cells(s1, 2), mask);
        prop_assert_eq!(ominimal_chi(&a.union(&b).unwrap()), ominimal_chi(&a) + ominimal_chi(&b));
        let (c, _) = split(cells(s2, 3), mask.rotate_left(7));
        prop_assert_eq!(ominimal_chi(&a.product(&c).unwrap()), ominimal_chi(&a) * ominimal_chi(&c));
    }

    #[test]
    fn alpha_is_additive_and_matches_fibers(
        s1 in any::<u64>(),
        s2 in any::<u64>(),
        mask in any::<u32>(),
        m in 1u64..6,
        coeffs in prop::collection::vec(-2i64..=2, 2),
        constant in -2i128..=2,
    ) {
        let (a, b) = split(bounded(cells(s1, 2)), mask);
        let l1 = AffineFunctional::new(vec![coeffs[0]], Q::new(constant, 2));
        let u = a.union(&b).unwrap();
        let sum = &alpha_m(&a, &l1, m).unwrap() + &alpha_m(&b, &l1, m).unwrap();
        prop_assert_eq!(alpha_m(&u, &l1, m).unwrap(), sum);
        prop_assert_eq!(alpha_by_fibers(&u, &l1, m).unwrap(), alpha_m(&u, &l1, m).unwrap());
        let c = GammaSet::new(1, bounded(cells(s2, 3))).unwrap();
        let square = u.product(&c).unwrap();
        let l2 = AffineFunctional::new(coeffs.clone(), Q::new(constant, 3));
        prop_assert_eq!(alpha_by_fibers(&square, &l2, m).unwrap(), alpha_m(&square, &l2, m).unwrap());
    }

    #[test]
    fn hadamard_multiplies_coefficients(
        terms1 in prop::collection::vec((1u64..=6, -3i64..=3, 1u64..=4), 1..3),
        terms2 in prop::collection::vec((1u64..=6, -3i64..=3, 1u64..=4), 1..3),
    ) {
        let build = |terms: &[(u64, i64, u64)]| {
            let mut s = RationalSeries::zero();
            for &(d, a, b) in terms {
                s.add_term(MotClass::mu(d), a, b).unwrap();
            }
            s
        };
        let (x, y) = (build(&terms1), build(&terms2));
        let prod = x.hadamard(&y, Combiner::Product).unwrap();
        let cv = x.hadamard(&y, Combiner::Convolution).unwrap();
        for m in 1..=24u64 {
            let (cx, cy) = (x.coefficient(m), y.coefficient(m));
            prop_assert_eq!(prod.coefficient(m), &cx * &cy);
            prop_assert_eq!(cv.coefficient(m), conv(&cx, &cy).unwrap());
        }
    }

    #[test]
    fn series_display_round_trips(terms in prop::collection::vec((1u64..=6, -3i64..=3, 1u64..=4), 0..4)) {
        let mut s = RationalSeries::constant(MotClass::mu(2));
        for (d, a, b) in terms {
            s.add_term(MotClass::mu(d), a, b).unwrap();
        }
        prop_assert_eq!(s.to_string().parse::<RationalSeries>().unwrap(), s);
    }

    #[test]
    fn arc_counts_ignore_high_degree_terms(seed in any::<u64>(), m in 1u32..=4, q in prop::sample::select(vec![2u64, 3, 4, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nvars = if (q as u128).pow(2 * m) <= 4096 { 2 } else { 1 };
        let f = random_poly(&mut rng, nvars, m + 1, 4);
        let g = with_junk(&mut rng, &f, m, 12);
        let truncated = f.truncate_for_level(m);
        let count = |p| arc_count(&ArcSetSpec::Milnor { f: p, m }, q, Strategy::Full).unwrap();
        let base = count(f.clone());
        prop_assert_eq!(count(g), base);
        prop_assert_eq!(count(truncated), base);
    }

    #[test]
    fn strata_formula_is_additive(mask in any::<u32>()) {
        let data = parse_strata(CUSP_BLOWUP).unwrap();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, e) in data.entries().iter().enumerate() {
            if mask >> i & 1 == 1 { a.push(e.clone()) } else { b.push(e.clone()) }
        }
        let part = |v| milnor_from_strata(&StrataData::new(data.dimension(), v).unwrap());
        prop_assert_eq!(&part(a) + &part(b), milnor_from_strata(&data));
    }
}
