//! Acceptance suite. Every check is exact; one PASS/FAIL line is printed per
//! criterion and the process exits nonzero if any criterion fails.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use motivic::arcspaces::{
    arc_count, milnor_monomial, verify_fermat_arc_map, zeta_monomial, ArcSetSpec, PolyFn, Strategy,
};
use motivic::cli::random_realization_check;
use motivic::convolution::{conv, conv_commutativity_check, conv_unsimplified, ts_combine};
use motivic::ff::Budget;
use motivic::gammatools::{alpha_m, ominimal_chi, parse_set, AffineFunctional};
use motivic::gring::{realize_plain, FermatKind, Generator, LPoly, MotClass, Realizer};
use motivic::resolution::{cusp_cover_bindings, milnor_from_strata, parse_strata, CUSP_BLOWUP, CUSP_MINIMAL};
use motivic::sampling::{random_poly, with_junk};
use motivic::series::{Combiner, RationalSeries};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn monomial_milnor_fibers() -> Outcome {
    for n in [1u64, 2, 3, 6] {
        let got = milnor_monomial(n as u32);
        ensure(got == MotClass::mu(n), || format!("milnor_monomial({n}) = {got}"))?;
        ensure(got.generators().all(|g| Some(g) == Generator::mu(n).as_ref()), || format!("{got} is not Mu({n})"))?;
    }
    let mut checked = 0;
    for n in 1u32..=3 {
        let z = zeta_monomial(n);
        for m in 1u32..=6 {
            for q in [5u64, 7] {
                let c = realize_plain(&z.coefficient(m as u64), q).map_err(s)?;
                let lhs = c * BigRational::from_integer(BigInt::from(q).pow(m));
                let f = PolyFn::pure_power(n);
                let rhs = arc_count(&ArcSetSpec::Milnor { f, m }, q, Strategy::Full).map_err(s)?;
                ensure(lhs == BigRational::from_integer(rhs.into()), || {
                    format!("n={n} m={m} q={q}: zeta gives {lhs}, arcs give {rhs}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (n, m, q) triples"))
}

fn limit_rule() -> Outcome {
    for (a, b) in [(-1i64, 1u64), (-1, 3), (-2, 2)] {
        let z = RationalSeries::geometric(MotClass::one(), a, b).map_err(s)?;
        let lim = z.limit_at_infinity();
        ensure(lim == MotClass::int(-1), || format!("(a, b) = ({a}, {b}): limit {lim}"))?;
    }
    Ok("3 series".into())
}

fn convolution_unit_and_commutativity() -> Outcome {
    let one = MotClass::one();
    let u = conv(&one, &one).map_err(s)?;
    ensure(u == one, || format!("conv(1, 1) = {u}"))?;
    let set: Vec<MotClass> = [1u64, 2, 3, 4, 6].iter().map(|&d| MotClass::mu(d)).collect();
    let r = Realizer::new();
    let mut points = 0;
    for x in &set {
        for y in &set {
            ensure(conv_commutativity_check(x, y).map_err(s)?, || format!("conv({x}, {y}) is not symmetric"))?;
            let classes = [conv(x, y).map_err(s)?, conv(y, x).map_err(s)?, conv_unsimplified(x, y).map_err(s)?];
            let order = classes.iter().map(Realizer::required_order).fold(1, num_integer::lcm);
            for q in [7u64, 13] {
                let mut ks = vec![None];
                if (q - 1) % order == 0 {
                    ks.extend((0..order).map(Some));
                }
                for k in ks {
                    let v = r.at(&classes[0], q, k).map_err(s)?;
                    for c in &classes[1..] {
                        ensure(r.at(c, q, k).map_err(s)? == v, || format!("conv({x}, {y}) at q={q} k={k:?}"))?;
                    }
                    points += 1;
                }
            }
        }
    }
    Ok(format!("25 pairs, {points} realization points"))
}

fn cusp_thom_sebastiani() -> Outcome {
    let qs = [7u64, 13, 19];
    let route_a = ts_combine(&MotClass::mu(2), &MotClass::mu(3), 1, 1).map_err(s)?;
    let r = Realizer::with_bindings(cusp_cover_bindings(&qs).map_err(s)?);
    let mut points = 0;
    for file in [CUSP_MINIMAL, CUSP_BLOWUP] {
        let route_b = milnor_from_strata(&parse_strata(file).map_err(s)?);
        for q in qs {
            ensure((q - 1) % 6 == 0, || format!("6 does not divide {q} - 1"))?;
            let ks = std::iter::once(None).chain((0..6).map(Some));
            for k in ks {
                let (a, b) = (r.at(&route_a, q, k).map_err(s)?, r.at(&route_b, q, k).map_err(s)?);
                ensure(a == b, || format!("q={q} k={k:?}: convolution {a}, strata {b}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} realization points over 2 resolutions"))
}

fn fermat_arc_model() -> Outcome {
    let (f, g) = (PolyFn::pure_power(2), PolyFn::pure_power(2));
    let budget = Budget::default();
    let mut summary = Vec::new();
    for (kind, q) in [(FermatKind::Zero, 5u64), (FermatKind::One, 5), (FermatKind::One, 13)] {
        let r = verify_fermat_arc_map(&f, &g, 2, q, kind, &budget).map_err(s)?;
        ensure(r.passes(), || format!("{r:?}"))?;
        ensure(r.domain_size == 4 * r.image_size, || format!("{r:?}"))?;
        summary.push(format!(
            "kind {} q={q}: {} -> {} of {} over F_{q}^{}",
            r.kind, r.domain_size, r.image_size, r.target_size, r.extension_degree
        ));
    }
    Ok(summary.join("; "))
}

fn hadamard_limit_exchange() -> Outcome {
    let h = zeta_monomial(2).hadamard(&zeta_monomial(3), Combiner::Convolution).map_err(s)?;
    let lhs = -h.limit_at_infinity();
    let rhs = conv(&MotClass::mu(2), &MotClass::mu(3)).map_err(s)?;
    ensure(lhs == rhs, || format!("-lim = {lhs}, conv = {rhs}"))?;
    Ok(format!("{rhs}"))
}

fn gamma_constants() -> Outcome {
    let open = parse_set("(0,1)").map_err(s)?;
    let chi = ominimal_chi(&open);
    ensure(chi == -1, || format!("chi((0,1)) = {chi}"))?;
    for m in 1u64..=8 {
        let got = alpha_m(&open, &AffineFunctional::zero(1), m).map_err(s)?;
        let sum = LPoly::from_terms((1..m as i64).map(|j| (-j, 1)));
        let want = MotClass::from_lpoly(LPoly::from_terms([(1, 1), (0, -1)]) * sum);
        ensure(got == want, || format!("m={m}: {got} vs {want}"))?;
    }
    Ok("chi and m = 1..8".into())
}

fn truncation_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7275_6e63);
    let qs = [2u64, 3, 4, 5, 7, 9];
    let cap = 20_000u128;
    let mut cases = 0;
    while cases < 20 {
        let q = qs[rng.gen_range(0..qs.len())];
        let nvars = rng.gen_range(1..=2usize);
        let m = rng.gen_range(1..=6u32);
        if (q as u128).pow(m * nvars as u32) > cap {
            continue;
        }
        let f = random_poly(&mut rng, nvars, m + 1, 4);
        let junked = with_junk(&mut rng, &f, m, 100);
        let a = arc_count(&ArcSetSpec::Milnor { f: f.clone(), m }, q, Strategy::Full).map_err(s)?;
        let b = arc_count(&ArcSetSpec::Milnor { f: junked, m }, q, Strategy::Full).map_err(s)?;
        ensure(a == b, || format!("f = {f}, m = {m}, q = {q}: {a} vs {b}"))?;
        cases += 1;
    }
    Ok("20 cases, 100 junk monomials each".into())
}

fn realization_soundness() -> Outcome {
    let o = random_realization_check(0x5eed, 200, &[7, 13]).map_err(s)?;
    ensure(o.failures.is_empty(), || o.failures.join("\n"))?;
    ensure(realize_plain(&MotClass::one(), 7).map_err(s)? == BigRational::one(), || "1 does not realize to 1".into())?;
    Ok(format!("200 pairs, {} checks", o.checks))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 monomial Milnor fibers", monomial_milnor_fibers),
        ("2 limit rule", limit_rule),
        ("3 convolution unit and commutativity", convolution_unit_and_commutativity),
        ("4 Thom-Sebastiani for the cusp", cusp_thom_sebastiani),
        ("5 Fermat arc model", fermat_arc_model),
        ("6 Hadamard-limit exchange", hadamard_limit_exchange),
        ("7 value-group constants", gamma_constants),
        ("8 truncation invariance", truncation_invariance),
        ("9 realization soundness", realization_soundness),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.2}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
