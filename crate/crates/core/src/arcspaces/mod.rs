//! Truncated arcs: closed-form classes and zeta functions of pure powers,
//! and exhaustive finite-field enumeration of arc sets.
//!
//! An arc of level `m` in `d` variables is a tuple of truncated series
//! `phi_i = c_1 t + ... + c_m t^m`, stored as coefficient vectors of
//! length `m + 1` with entry 0 equal to zero.

mod fermat_map;
mod poly;

use rayon::prelude::*;
use thiserror::Error;

use crate::ff::{self, least_twist_degree, Budget, FieldError, FiniteField, TwistExtension};
use crate::gring::{ActionSpec, Generator, MotClass};
use crate::series::RationalSeries;

pub use fermat_map::{fermat_arc_map, verify_fermat_arc_map, FermatMapReport};
pub use poly::PolyFn;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("polynomial syntax: {0}")]
    Parse(String),
    #[error("structured counting needs single-variable pure powers: {0}")]
    StructureUnsupported(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("level must be positive")]
    ZeroLevel,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Arc tuple: one coefficient vector per variable.
pub type ArcTuple = Vec<Vec<u64>>;

/// The truncated-arc sets that can be counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcSetSpec {
    /// `f(phi) = t^m mod t^(m+1)`.
    Milnor { f: PolyFn, m: u32 },
    /// `ord f(phi) = ord g(psi) = m` and `f(phi) + g(psi) = t^m mod t^(m+1)`.
    Z1Star { f: PolyFn, g: PolyFn, m: u32 },
    /// `-f(phi) = g(psi) = t^m mod t^(m+1)`.
    Z0Set { f: PolyFn, g: PolyFn, m: u32 },
}

impl ArcSetSpec {
    pub fn level(&self) -> u32 {
        match self {
            ArcSetSpec::Milnor { m, .. } | ArcSetSpec::Z1Star { m, .. } | ArcSetSpec::Z0Set { m, .. } => *m,
        }
    }

    /// Total number of arc variables.
    pub fn nvars(&self) -> usize {
        match self {
            ArcSetSpec::Milnor { f, .. } => f.nvars(),
            ArcSetSpec::Z1Star { f, g, .. } | ArcSetSpec::Z0Set { f, g, .. } => f.nvars() + g.nvars(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every arc is enumerated and checked.
    Full,
    /// Closed-form leading-coefficient counts for pure powers.
    Structured,
}

/// `a * b mod t^(m+1)` for coefficient vectors of length `m + 1`.
fn series_mul(field: &FiniteField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len();
    let mut out = vec![0u64; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().take(n - i).enumerate() {
            if y != 0 {
                out[i + j] = field.add(out[i + j], field.mul(x, y));
            }
        }
    }
    out
}

/// `f(phi) mod t^(m+1)`, evaluated monomial by monomial.
pub fn evaluate(f: &PolyFn, field: &FiniteField, arc: &[Vec<u64>]) -> Vec<u64> {
    let len = arc.first().map(|v| v.len()).unwrap_or(1);
    let mut max_exp = vec![0u32; f.nvars()];
    for (e, _) in f.terms() {
        for (i, &p) in e.iter().enumerate() {
            max_exp[i] = max_exp[i].max(p);
        }
    }
    let mut unit = vec![0u64; len];
    unit[0] = 1;
    let powers: Vec<Vec<Vec<u64>>> = (0..f.nvars())
        .map(|i| {
            let mut pw = vec![unit.clone()];
            for _ in 0..max_exp[i] {
                let next = series_mul(field, pw.last().expect("nonempty"), &arc[i]);
                pw.push(next);
            }
            pw
        })
        .collect();
    let mut total = vec![0u64; len];
    for (e, c) in f.terms() {
        let mut term = unit.clone();
        term[0] = field.from_int(c);
        for (i, &p) in e.iter().enumerate() {
            if p > 0 {
                term = series_mul(field, &term, &powers[i][p as usize]);
            }
        }
        for (t, x) in total.iter_mut().zip(term) {
            *t = field.add(*t, x);
        }
    }
    total
}

/// `c` if `s = c t^m mod t^(m+1)` (`c` may be zero), else `None`.
pub fn leading_at_level(s: &[u64]) -> Option<u64> {
    let m = s.len() - 1;
    s[..m].iter().all(|&x| x == 0).then_some(s[m])
}

fn decode_arc(mut idx: u64, q: u64, nvars: usize, m: usize, arc: &mut [Vec<u64>]) {
    for var in arc.iter_mut().take(nvars) {
        for c in var.iter_mut().skip(1).take(m) {
            *c = idx % q;
            idx /= q;
        }
    }
}

/// `h[c] = #{phi : f(phi) = c t^m mod t^(m+1)}` over all `q^(m d)` arcs.
pub fn leading_histogram_full(
    f: &PolyFn,
    m: u32,
    q: u64,
    budget: &Budget,
) -> Result<Vec<u128>, ArcError> {
    if m == 0 {
        return Err(ArcError::ZeroLevel);
    }
    let field = ff::field(q)?;
    let (d, m) = (f.nvars(), m as usize);
    let total = (q as u128)
        .checked_pow((m * d) as u32)
        .unwrap_or(u128::MAX);
    budget.check_enumeration(total)?;
    let hist = (0..total as u64)
        .into_par_iter()
        .fold(
            || (vec![0u128; q as usize], vec![vec![0u64; m + 1]; d]),
            |(mut h, mut arc), idx| {
                decode_arc(idx, q, d, m, &mut arc);
                if let Some(c) = leading_at_level(&evaluate(f, &field, &arc)) {
                    h[c as usize] += 1;
                }
                (h, arc)
            },
        )
        .map(|(h, _)| h)
        .reduce(
            || vec![0u128; q as usize],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(hist)
}

/// Closed-form histogram for `f = c x_i^n`: arcs with `f(phi) = y t^m`,
/// `y != 0`, have `ord phi_i = m/n` with leading `lambda`, `c lambda^n = y`,
/// free higher coefficients and free other variables. Entry 0 is not used.
pub fn leading_histogram_structured(f: &PolyFn, m: u32, q: u64) -> Result<Vec<u128>, ArcError> {
    if m == 0 {
        return Err(ArcError::ZeroLevel);
    }
    let (_, n, c) = f
        .as_pure_power()
        .ok_or_else(|| ArcError::StructureUnsupported(f.to_string()))?;
    let field = ff::field(q)?;
    let mut h = vec![0u128; q as usize];
    if !m.is_multiple_of(n) {
        return Ok(h);
    }
    let free = (m - m / n) + m * (f.nvars() as u32 - 1);
    let weight = (q as u128).pow(free);
    let cf = field.from_int(c);
    for lambda in field.units() {
        let y = field.mul(cf, field.pow(lambda, n as u128));
        if y != 0 {
            h[y as usize] += weight;
        }
    }
    Ok(h)
}

fn histogram(f: &PolyFn, m: u32, q: u64, strategy: Strategy, budget: &Budget) -> Result<Vec<u128>, ArcError> {
    match strategy {
        Strategy::Full => leading_histogram_full(f, m, q, budget),
        Strategy::Structured => leading_histogram_structured(f, m, q),
    }
}

/// Number of `F_q`-points of the arc set.
pub fn arc_count(spec: &ArcSetSpec, q: u64, strategy: Strategy) -> Result<u128, ArcError> {
    arc_count_with(spec, q, strategy, &Budget::from_env())
}

pub fn arc_count_with(
    spec: &ArcSetSpec,
    q: u64,
    strategy: Strategy,
    budget: &Budget,
) -> Result<u128, ArcError> {
    let field = ff::field(q)?;
    if strategy == Strategy::Full {
        let m = spec.level();
        let total = (q as u128)
            .checked_pow(m * spec.nvars() as u32)
            .unwrap_or(u128::MAX);
        budget.check_enumeration(total)?;
    }
    match spec {
        ArcSetSpec::Milnor { f, m } => Ok(histogram(f, *m, q, strategy, budget)?[1]),
        ArcSetSpec::Z1Star { f, g, m } => {
            let hf = histogram(f, *m, q, strategy, budget)?;
            let hg = histogram(g, *m, q, strategy, budget)?;
            Ok(field
                .units()
                .filter(|&c| c != 1)
                .map(|c| hf[c as usize] * hg[field.sub(1, c) as usize])
                .sum())
        }
        ArcSetSpec::Z0Set { f, g, m } => {
            let hf = histogram(f, *m, q, strategy, budget)?;
            let hg = histogram(g, *m, q, strategy, budget)?;
            Ok(hf[field.neg(1) as usize] * hg[1])
        }
    }
}

/// Twisted count of the Milnor arc set: arcs over the algebraic closure with
/// `Frob(c_i) = zeta_m^(-k i) c_i`, `zeta_m` the fixed primitive root of
/// `F_q`. Needs `m | q - 1`.
pub fn twisted_arc_count(f: &PolyFn, m: u32, q: u64, k: u64) -> Result<u128, ArcError> {
    twisted_arc_count_with(f, m, q, k, &Budget::from_env())
}

pub fn twisted_arc_count_with(
    f: &PolyFn,
    m: u32,
    q: u64,
    k: u64,
    budget: &Budget,
) -> Result<u128, ArcError> {
    if m == 0 {
        return Err(ArcError::ZeroLevel);
    }
    let base = ff::field(q)?;
    let mm = m as u64;
    if !(q - 1).is_multiple_of(mm) {
        return Err(FieldError::IncompatibleOrder { order: mm, q }.into());
    }
    let d = f.nvars();
    let total = (q as u128).checked_pow(m * d as u32).unwrap_or(u128::MAX);
    budget.check_enumeration(total)?;
    let j = -((k % mm) as i64);
    let e = least_twist_degree(q, mm, j, m).expect("bounded by m");
    let tw = TwistExtension::new(&base, e, budget)?;
    let alpha = tw.coset_root(j, mm).expect("degree chosen so the root exists");
    let big = tw.field();
    let scales: Vec<u64> = (0..=m as u128).map(|i| big.pow(alpha, i)).collect();
    let m = m as usize;
    let target = |s: &[u64]| leading_at_level(s) == Some(1);
    let count = (0..total as u64)
        .into_par_iter()
        .fold(
            || (0u128, vec![vec![0u64; m + 1]; d]),
            |(mut n, mut arc), idx| {
                decode_arc(idx, q, d, m, &mut arc);
                for var in arc.iter_mut() {
                    for (i, c) in var.iter_mut().enumerate().skip(1) {
                        *c = big.mul(scales[i], tw.embed(*c));
                    }
                }
                if target(&evaluate(f, big, &arc)) {
                    n += 1;
                }
                (n, arc)
            },
        )
        .map(|(n, _)| n)
        .sum();
    Ok(count)
}

/// Class of the level-`m` Milnor arcs of `x^n`: `Mu(n) L^(m - m/n)` with
/// `mu_m` acting on leading coefficients through weight `m/n`, or 0.
pub fn arc_class_monomial(n: u32, m: u32) -> MotClass {
    if n == 0 || m == 0 || !m.is_multiple_of(n) {
        return MotClass::zero();
    }
    let action = ActionSpec::new(m as u64, (m / n) as i64).expect("positive order");
    let g = Generator::mu_with_action(n as u64, action).expect("m | (m/n) n");
    MotClass::generator(g).mul_l_pow((m - m / n) as i64)
}

/// Zeta function of `x^n`: `Mu(n) L^-1 T^n / (1 - L^-1 T^n)`.
pub fn zeta_monomial(n: u32) -> RationalSeries {
    RationalSeries::geometric(MotClass::mu(n as u64), -1, n as u64)
        .expect("positive period")
}

/// Milnor fiber of `x^n`: minus the limit of its zeta function.
pub fn milnor_monomial(n: u32) -> MotClass {
    -zeta_monomial(n).limit_at_infinity()
}

/// `truncate_for_level` as a free function.
pub fn truncate_for_level(f: &PolyFn, m: u32) -> PolyFn {
    f.truncate_for_level(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gring::{realize_plain, realize_twisted};
    use num_rational::BigRational;

    fn milnor(s: &str, m: u32) -> ArcSetSpec {
        ArcSetSpec::Milnor { f: PolyFn::parse(s).unwrap(), m }
    }

    /// Independent oracle: nested loops over every coefficient with direct
    /// power-series multiplication in one variable.
    fn brute_one_var(n: u32, m: u32, q: u64) -> u128 {
        let f = FiniteField::new(q).unwrap();
        let m = m as usize;
        let mut count = 0u128;
        let total = q.pow(m as u32);
        for idx in 0..total {
            let mut phi = vec![0u64; m + 1];
            let mut r = idx;
            for c in phi.iter_mut().skip(1) {
                *c = r % q;
                r /= q;
            }
            let mut p = vec![0u64; m + 1];
            p[0] = 1;
            for _ in 0..n {
                let mut next = vec![0u64; m + 1];
                for i in 0..=m {
                    for j in 0..=m - i {
                        next[i + j] = f.add(next[i + j], f.mul(p[i], phi[j]));
                    }
                }
                p = next;
            }
            let ok = (0..m).all(|i| p[i] == 0) && p[m] == 1;
            count += ok as u128;
        }
        count
    }

    #[test]
    fn examples() {
        assert_eq!(arc_count(&milnor("x1^2", 2), 3, Strategy::Full).unwrap(), 6);
        for s in [Strategy::Full, Strategy::Structured] {
            assert_eq!(arc_count(&milnor("x1^2", 1), 5, s).unwrap(), 0);
            assert_eq!(arc_count(&milnor("x1", 3), 5, s).unwrap(), 1);
        }
    }

    #[test]
    fn full_matches_brute_force_and_structured() {
        for q in [3u64, 4, 5, 7] {
            for n in 1..=3u32 {
                for m in 1..=4u32 {
                    let spec = milnor(&format!("x1^{n}"), m);
                    let full = arc_count(&spec, q, Strategy::Full).unwrap();
                    assert_eq!(full, brute_one_var(n, m, q), "n={n} m={m} q={q}");
                    assert_eq!(full, arc_count(&spec, q, Strategy::Structured).unwrap());
                }
            }
        }
        // extra free variable and a nontrivial coefficient
        let spec = ArcSetSpec::Milnor { f: PolyFn::parse_in("3*x2^2", 2).unwrap(), m: 2 };
        assert_eq!(
            arc_count(&spec, 5, Strategy::Full).unwrap(),
            arc_count(&spec, 5, Strategy::Structured).unwrap()
        );
    }

    #[test]
    fn closed_forms_realize_to_counts() {
        for q in [5u64, 7] {
            for n in 1..=3u32 {
                for m in 1..=6u32 {
                    let count = arc_count(&milnor(&format!("x1^{n}"), m), q, Strategy::Structured).unwrap();
                    let class = realize_plain(&arc_class_monomial(n, m), q).unwrap();
                    assert_eq!(class, BigRational::from_integer(count.into()));
                }
            }
        }
        assert_eq!(arc_class_monomial(3, 3), MotClass::mu(3).mul_l_pow(2));
        assert!(arc_class_monomial(3, 4).is_zero());
        assert_eq!(arc_class_monomial(1, 5), MotClass::one());
    }

    #[test]
    fn zeta_and_milnor() {
        assert_eq!(zeta_monomial(3).coefficient(6), MotClass::mu(3).mul_l_pow(-2));
        assert_eq!(arc_count(&milnor("x1^3", 6), 5, Strategy::Full).unwrap(), 625);
        for n in [1u32, 2, 6] {
            assert_eq!(milnor_monomial(n), MotClass::mu(n as u64));
        }
        for m in 1..=6u32 {
            assert_eq!(
                zeta_monomial(2).coefficient(m as u64),
                arc_class_monomial(2, m).mul_l_pow(-(m as i64))
            );
        }
    }

    #[test]
    fn twisted_counts_match_closed_forms() {
        for (q, n, m) in [(7u64, 2u32, 2u32), (7, 3, 3), (7, 2, 6), (7, 3, 6), (13, 2, 4), (13, 3, 3), (5, 2, 4)] {
            let f = PolyFn::pure_power(n);
            for k in 0..m as u64 {
                let count = twisted_arc_count(&f, m, q, k).unwrap();
                let class = realize_twisted(&arc_class_monomial(n, m), q, k).unwrap();
                assert_eq!(class, BigRational::from_integer(count.into()), "q={q} n={n} m={m} k={k}");
            }
        }
        assert_eq!(twisted_arc_count(&PolyFn::pure_power(2), 2, 7, 0).unwrap(),
            arc_count(&milnor("x1^2", 2), 7, Strategy::Full).unwrap());
    }

    #[test]
    fn truncation_preserves_counts() {
        let f = PolyFn::parse("x1^2 + x1^5").unwrap();
        let g = truncate_for_level(&f, 3);
        for q in [5u64, 7] {
            assert_eq!(
                arc_count(&ArcSetSpec::Milnor { f: f.clone(), m: 3 }, q, Strategy::Full).unwrap(),
                arc_count(&ArcSetSpec::Milnor { f: g.clone(), m: 3 }, q, Strategy::Full).unwrap()
            );
        }
    }

    #[test]
    fn z_sets_full_and_structured_agree() {
        for (a, b, m, q) in [(2u32, 2u32, 2u32, 5u64), (2, 2, 2, 7), (2, 4, 4, 3), (1, 2, 2, 5), (3, 3, 3, 7)] {
            let f = PolyFn::pure_power(a);
            let g = PolyFn::pure_power(b);
            for spec in [
                ArcSetSpec::Z1Star { f: f.clone(), g: g.clone(), m },
                ArcSetSpec::Z0Set { f: f.clone(), g: g.clone(), m },
            ] {
                assert_eq!(
                    arc_count(&spec, q, Strategy::Full).unwrap(),
                    arc_count(&spec, q, Strategy::Structured).unwrap(),
                    "{spec:?} q={q}"
                );
            }
        }
    }

    #[test]
    fn budget_and_structure_errors() {
        let tiny = Budget { enumeration: 10, field_size: 100 };
        assert!(matches!(
            arc_count_with(&milnor("x1^2", 3), 5, Strategy::Full, &tiny),
            Err(ArcError::Field(FieldError::BudgetExceeded { .. }))
        ));
        assert!(matches!(
            arc_count(&milnor("x1^2 + x1^3", 3), 5, Strategy::Structured),
            Err(ArcError::StructureUnsupported(_))
        ));
    }
}
