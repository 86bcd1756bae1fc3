//! The substitution map `(phi, psi; a, b) -> (phi(a t), psi(b t))` from
//! Milnor arcs times a Fermat set onto the `Z1Star` / `Z0Set` models, with an
//! exhaustive check of its fiber structure.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{evaluate, leading_at_level, ArcError, ArcTuple, PolyFn};
use crate::ff::{self, Budget, FiniteField, TwistExtension};
use crate::gring::FermatKind;

/// `(a, b)` with `a, b != 0` and `a^m + b^m = 1` (kind 1), or
/// `a^m = -1, b^m = 1` (kind 0).
fn on_fermat_set(field: &FiniteField, kind: FermatKind, a: u64, b: u64, m: u32) -> bool {
    if a == 0 || b == 0 {
        return false;
    }
    let (am, bm) = (field.pow(a, m as u128), field.pow(b, m as u128));
    match kind {
        FermatKind::One => field.add(am, bm) == 1,
        FermatKind::Zero => am == field.neg(1) && bm == 1,
    }
}

/// Leading coefficient of `f(phi)` at level `m`, if `ord f(phi) >= m`.
fn leading(field: &FiniteField, f: &PolyFn, arc: &[Vec<u64>]) -> Option<u64> {
    leading_at_level(&evaluate(f, field, arc))
}

fn in_target(field: &FiniteField, kind: FermatKind, f: &PolyFn, g: &PolyFn, phi: &[Vec<u64>], psi: &[Vec<u64>]) -> bool {
    match (leading(field, f, phi), leading(field, g, psi)) {
        (Some(c), Some(d)) => match kind {
            FermatKind::One => c != 0 && d != 0 && field.add(c, d) == 1,
            FermatKind::Zero => c == field.neg(1) && d == 1,
        },
        _ => false,
    }
}

/// `phi(s t)`: coefficient `i` scaled by `s^i`.
fn substitute(field: &FiniteField, arc: &[Vec<u64>], s: u64) -> ArcTuple {
    arc.iter()
        .map(|v| {
            v.iter()
                .enumerate()
                .map(|(i, &c)| field.mul(c, field.pow(s, i as u128)))
                .collect()
        })
        .collect()
}

/// Applies the map over `field`, checking that `phi`, `psi` are Milnor arcs
/// of `f`, `g` at level `m` and that `(a, b)` lies on the Fermat set.
#[allow(clippy::too_many_arguments)]
pub fn fermat_arc_map(
    field: &FiniteField,
    phi: &[Vec<u64>],
    psi: &[Vec<u64>],
    a: u64,
    b: u64,
    f: &PolyFn,
    g: &PolyFn,
    m: u32,
    kind: FermatKind,
) -> Result<(ArcTuple, ArcTuple), ArcError> {
    let shaped = |arc: &[Vec<u64>], n: usize| arc.len() == n && arc.iter().all(|v| v.len() == m as usize + 1 && v[0] == 0);
    if !shaped(phi, f.nvars()) || !shaped(psi, g.nvars()) {
        return Err(ArcError::PreconditionViolated(format!("arcs must have level {m} and vanish at 0")));
    }
    if leading(field, f, phi) != Some(1) || leading(field, g, psi) != Some(1) {
        return Err(ArcError::PreconditionViolated("arcs are not Milnor arcs".into()));
    }
    if !on_fermat_set(field, kind, a, b, m) {
        return Err(ArcError::PreconditionViolated(format!("({a}, {b}) is off the Fermat set")));
    }
    Ok((substitute(field, phi, a), substitute(field, psi, b)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FermatMapReport {
    pub kind: u8,
    pub q: u64,
    pub m: u32,
    pub domain_size: usize,
    pub image_size: usize,
    pub target_size: usize,
    /// Every image point satisfies the target conditions.
    pub well_defined: bool,
    /// Distinct preimage counts over the image.
    pub fiber_sizes: BTreeSet<usize>,
    /// Least `e` making every leading coefficient on the target an `m`-th power.
    pub extension_degree: u32,
    /// Every `F_q`-point of the target has a preimage over `F_{q^e}`.
    pub surjective_over_extension: bool,
}

impl FermatMapReport {
    pub fn fibers_are_uniform(&self) -> bool {
        let m2 = (self.m * self.m) as usize;
        self.fiber_sizes.iter().all(|&s| s == m2) && self.domain_size == m2 * self.image_size
    }

    pub fn passes(&self) -> bool {
        self.well_defined && self.fibers_are_uniform() && self.surjective_over_extension
    }
}

fn all_arcs(q: u64, nvars: usize, m: u32) -> impl Iterator<Item = ArcTuple> {
    let m = m as usize;
    let total = q.pow((m * nvars) as u32);
    (0..total).map(move |mut idx| {
        let mut arc = vec![vec![0u64; m + 1]; nvars];
        for v in arc.iter_mut() {
            for c in v.iter_mut().skip(1) {
                *c = idx % q;
                idx /= q;
            }
        }
        arc
    })
}

/// Whether `c in F_q^*` is an `m`-th power in `F_{q^e}`.
fn is_mth_power_after(field: &FiniteField, c: u64, m: u32, e: u32) -> bool {
    let qe = (field.order() as u128).pow(e) - 1;
    let g = num_integer::gcd(m as u128, qe);
    let ord = field.element_order(c);
    (qe / g).is_multiple_of(ord)
}

/// Exhaustive check of the map over `F_q`: well-definedness, fiber sizes and
/// surjectivity after the least extension on which the inverse
/// `(Phi, Psi) -> (Phi(c^(-1/m) t), Psi(c'^(-1/m) t); c^(1/m), c'^(1/m))` is
/// defined, `c`, `c'` the leading coefficients.
pub fn verify_fermat_arc_map(
    f: &PolyFn,
    g: &PolyFn,
    m: u32,
    q: u64,
    kind: FermatKind,
    budget: &Budget,
) -> Result<FermatMapReport, ArcError> {
    if m == 0 {
        return Err(ArcError::ZeroLevel);
    }
    let field = ff::field(q)?;
    let total = (q as u128)
        .checked_pow(m * (f.nvars() + g.nvars()) as u32)
        .unwrap_or(u128::MAX);
    budget.check_enumeration(total)?;

    let with_leading = |p: &PolyFn| -> Vec<(ArcTuple, Option<u64>)> {
        all_arcs(q, p.nvars(), m)
            .map(|arc| {
                let c = leading(&field, p, &arc);
                (arc, c)
            })
            .collect()
    };
    let arcs_f = with_leading(f);
    let arcs_g = with_leading(g);
    let milnor = |arcs: &[(ArcTuple, Option<u64>)]| -> Vec<ArcTuple> {
        arcs.iter().filter(|(_, c)| *c == Some(1)).map(|(a, _)| a.clone()).collect()
    };
    let (milnor_f, milnor_g) = (milnor(&arcs_f), milnor(&arcs_g));
    let roots: Vec<(u64, u64)> = field
        .units()
        .flat_map(|a| field.units().map(move |b| (a, b)))
        .filter(|&(a, b)| on_fermat_set(&field, kind, a, b, m))
        .collect();

    let mut image: HashMap<(ArcTuple, ArcTuple), usize> = HashMap::new();
    let mut well_defined = true;
    let mut domain_size = 0usize;
    for phi in &milnor_f {
        for psi in &milnor_g {
            for &(a, b) in &roots {
                let (x, y) = fermat_arc_map(&field, phi, psi, a, b, f, g, m, kind)?;
                well_defined &= in_target(&field, kind, f, g, &x, &y);
                *image.entry((x, y)).or_insert(0) += 1;
                domain_size += 1;
            }
        }
    }
    let fiber_sizes: BTreeSet<usize> = image.values().copied().collect();

    let target: Vec<(&ArcTuple, u64, &ArcTuple, u64)> = arcs_f
        .iter()
        .filter_map(|(x, c)| c.filter(|&c| c != 0).map(|c| (x, c)))
        .flat_map(|(x, c)| {
            arcs_g
                .iter()
                .filter_map(|(y, d)| d.filter(|&d| d != 0).map(|d| (y, d)))
                .map(move |(y, d)| (x, c, y, d))
        })
        .filter(|&(x, _, y, _)| in_target(&field, kind, f, g, x, y))
        .collect();

    let leads: BTreeSet<u64> = target.iter().flat_map(|&(_, c, _, d)| [c, d]).collect();
    let limit = 64u32;
    let e = (1..=limit)
        .find(|&e| leads.iter().all(|&c| is_mth_power_after(&field, c, m, e)))
        .ok_or_else(|| ArcError::PreconditionViolated(format!("no extension of degree <= {limit} takes m-th roots")))?;
    let size = (q as u128).checked_pow(e).unwrap_or(u128::MAX);
    budget.check_enumeration(size)?;
    let tw = TwistExtension::new(&field, e, budget)?;
    let big = tw.field();
    let mut roots_of: HashMap<u64, u64> = HashMap::new();
    for y in big.units() {
        roots_of.entry(big.pow(y, m as u128)).or_insert(y);
    }
    let embed = |arc: &ArcTuple| -> ArcTuple {
        arc.iter().map(|v| v.iter().map(|&c| tw.embed(c)).collect()).collect()
    };
    let mut surjective = true;
    for &(x, c, y, d) in &target {
        let (xk, yk) = (embed(x), embed(y));
        let (Some(&a), Some(&b)) = (roots_of.get(&tw.embed(c)), roots_of.get(&tw.embed(d))) else {
            surjective = false;
            continue;
        };
        let phi = substitute(big, &xk, big.inv(a));
        let psi = substitute(big, &yk, big.inv(b));
        surjective &= matches!(
            fermat_arc_map(big, &phi, &psi, a, b, f, g, m, kind),
            Ok((u, v)) if u == xk && v == yk
        );
    }

    Ok(FermatMapReport {
        kind: kind.index(),
        q,
        m,
        domain_size,
        image_size: image.len(),
        target_size: target.len(),
        well_defined,
        fiber_sizes,
        extension_degree: e,
        surjective_over_extension: surjective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcspaces::{arc_count, ArcSetSpec, Strategy};

    fn report(a: u32, b: u32, m: u32, q: u64, kind: FermatKind) -> FermatMapReport {
        verify_fermat_arc_map(&PolyFn::pure_power(a), &PolyFn::pure_power(b), m, q, kind, &Budget::default()).unwrap()
    }

    #[test]
    fn squares_over_f5() {
        let zero = report(2, 2, 2, 5, FermatKind::Zero);
        assert_eq!(zero.domain_size, 400);
        assert_eq!(zero.image_size, 100);
        assert!(zero.passes(), "{zero:?}");
        // a^2 + b^2 = 1 has no solution with ab != 0 in F_5
        let one = report(2, 2, 2, 5, FermatKind::One);
        assert_eq!((one.domain_size, one.target_size), (0, 0));
        assert!(one.passes());
    }

    #[test]
    fn nonempty_kind_one() {
        for q in [7u64, 13, 25] {
            let r = report(2, 2, 2, q, FermatKind::One);
            assert!(r.domain_size > 0);
            assert!(r.passes(), "{r:?}");
            let spec = ArcSetSpec::Z1Star { f: PolyFn::pure_power(2), g: PolyFn::pure_power(2), m: 2 };
            assert_eq!(r.target_size as u128, arc_count(&spec, q, Strategy::Full).unwrap());
        }
        // leading coefficients of squares are squares
        assert_eq!(report(2, 2, 2, 7, FermatKind::One).extension_degree, 1);
        // ord x = 2 leaves the leading coefficient free, so square roots need F_49
        for kind in [FermatKind::One, FermatKind::Zero] {
            let r = report(1, 2, 2, 7, kind);
            assert!(r.passes(), "{r:?}");
        }
        assert_eq!(report(1, 2, 2, 7, FermatKind::One).extension_degree, 2);
    }

    #[test]
    fn image_is_everything_rational_when_extension_is_trivial() {
        let r = report(1, 1, 1, 5, FermatKind::One);
        assert_eq!(r.extension_degree, 1);
        assert_eq!(r.image_size, r.target_size);
        assert!(r.passes());
    }

    #[test]
    fn preconditions() {
        let field = ff::field(5).unwrap();
        let f = PolyFn::pure_power(2);
        let phi = vec![vec![0, 1, 0]];
        let bad = vec![vec![0, 2, 0]];
        assert!(fermat_arc_map(&field, &phi, &phi, 2, 1, &f, &f, 2, FermatKind::Zero).is_ok());
        assert!(matches!(
            fermat_arc_map(&field, &bad, &phi, 2, 1, &f, &f, 2, FermatKind::Zero),
            Err(ArcError::PreconditionViolated(_))
        ));
        assert!(fermat_arc_map(&field, &phi, &phi, 1, 1, &f, &f, 2, FermatKind::Zero).is_err());
        assert!(fermat_arc_map(&field, &phi, &phi, 1, 1, &f, &f, 2, FermatKind::One).is_err());
    }
}
