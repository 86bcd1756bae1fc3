//! Point-counting realizations.
//!
//! The plain realization counts `F_q`-points: `L -> q`, `Mu(d) -> #mu_d(F_q)`,
//! Fermat curves by counting. The twisted realization at `(q, k)` counts
//! points `P` over the algebraic closure with `Frob(P) = zeta^(-k) . P`,
//! where `zeta = g^((q-1)/m)` for the least primitive element `g` of `F_q`.
//! Kind-0 Fermat curves are counted on the split form `{u^a = v^b}`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::class::MotClass;
use super::generator::{FermatCurve, FermatKind, Generator};
use super::GringError;
use crate::ff::{self, least_twist_degree, Budget, FieldError, FiniteField, TwistExtension};

/// Values of opaque classes, keyed by name, field size and twist
/// (`None` binds every twist).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bindings {
    values: HashMap<(String, u64, Option<u64>), BigRational>,
}

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn insert(&mut self, name: &str, q: u64, k: Option<u64>, value: BigRational) {
        self.values.insert((name.to_string(), q, k), value);
    }

    pub fn extend(&mut self, other: &Bindings) {
        for (key, v) in &other.values {
            self.values.insert(key.clone(), v.clone());
        }
    }

    pub fn get(&self, name: &str, q: u64, k: u64) -> Option<&BigRational> {
        let name = name.to_string();
        self.values
            .get(&(name.clone(), q, Some(k)))
            .or_else(|| self.values.get(&(name, q, None)))
    }

    /// Parses lines `name q k value`; `k` may be `*`, `value` is `p` or `p/r`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, GringError> {
        let mut b = Bindings::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| GringError::BindingSyntax {
                line: idx + 1,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [name, q, k, value] = fields[..] else {
                return Err(err("expected `name q k value`"));
            };
            let q: u64 = q.parse().map_err(|_| err("bad field size"))?;
            let k = match k {
                "*" => None,
                s => Some(s.parse::<u64>().map_err(|_| err("bad twist"))?),
            };
            let value = parse_rational(value).ok_or_else(|| err("bad value"))?;
            b.insert(name, q, k, value);
        }
        Ok(b)
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            let n: BigInt = n.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

fn int(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn power_histogram(field: &FiniteField, n: u64) -> std::sync::Arc<Vec<u64>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), std::sync::Arc<Vec<u64>>>>> =
        OnceLock::new();
    let key = (field.order(), n);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(h) = cache.lock().expect("histogram cache").get(&key) {
        return h.clone();
    }
    let h = std::sync::Arc::new(field.power_histogram(n));
    cache.lock().expect("histogram cache").insert(key, h.clone());
    h
}

/// `#{(u, v) in (F_q^*)^2 : A u^a + B v^b = 1}` (kind 1) or
/// `#{A u^a = B v^b}` (kind 0), in `O(q)` via power histograms.
fn count_descended(field: &FiniteField, kind: FermatKind, a: u64, b: u64, ca: u64, cb: u64) -> u64 {
    let ha = power_histogram(field, a);
    let hb = power_histogram(field, b);
    let inv_b = field.inv(cb);
    let mut total = 0u64;
    for y in field.units() {
        let n = ha[y as usize];
        if n == 0 {
            continue;
        }
        let ay = field.mul(ca, y);
        let z = match kind {
            FermatKind::One => field.mul(field.sub(1, ay), inv_b),
            FermatKind::Zero => field.mul(ay, inv_b),
        };
        if z != 0 {
            total += n * hb[z as usize];
        }
    }
    total
}

/// `#{(u, v) in (F_q^*)^2 : u^a + v^b = kind}`.
pub fn count_fermat(kind: FermatKind, a: u64, b: u64, q: u64) -> Result<u64, GringError> {
    count_fermat_with(kind, a, b, q, &Budget::from_env())
}

fn count_fermat_with(
    kind: FermatKind,
    a: u64,
    b: u64,
    q: u64,
    budget: &Budget,
) -> Result<u64, GringError> {
    budget.check_enumeration(q as u128 * q as u128)?;
    let field = ff::field(q)?;
    Ok(match kind {
        FermatKind::One => count_descended(&field, kind, a, b, 1, 1),
        FermatKind::Zero => count_descended(&field, kind, a, b, 1, field.neg(1)),
    })
}

/// The scalar `A = alpha^a in F_q` attached to one coordinate of weight `w`:
/// twisted solutions are `alpha * u'` with `u' in F_q^*` and
/// `alpha^(q-1) = zeta_m^(-k w)`.
fn coordinate_scalar(
    field: &FiniteField,
    m: u64,
    w: u64,
    exponent: u64,
    k: u64,
    budget: &Budget,
) -> Result<u64, GringError> {
    let j = (-((k as i128 * w as i128) % m as i128)).rem_euclid(m as i128) as i64;
    if j == 0 {
        return Ok(1);
    }
    let e = least_twist_degree(field.order(), m, j, m as u32)
        .expect("q = 1 mod m bounds the twist degree by m");
    let tw = TwistExtension::new(field, e, budget)?;
    let alpha = tw.coset_root(j, m).expect("degree chosen so the root exists");
    let scalar = tw.field().pow(alpha, exponent as u128);
    Ok(tw
        .restrict(scalar)
        .expect("alpha^a is fixed by Frobenius for the descent weights"))
}

/// Twisted point count of a Fermat generator at `(q, k)`. Needs `m | q - 1`.
pub fn twisted_fermat_count(c: &FermatCurve, q: u64, k: u64) -> Result<u64, GringError> {
    twisted_fermat_count_with(c, q, k, &Budget::from_env())
}

fn twisted_fermat_count_with(
    c: &FermatCurve,
    q: u64,
    k: u64,
    budget: &Budget,
) -> Result<u64, GringError> {
    static CACHE: OnceLock<Mutex<HashMap<(FermatCurve, u64, u64), u64>>> = OnceLock::new();
    let m = c.m();
    if !(q - 1).is_multiple_of(m) {
        return Err(GringError::IncompatibleOrder { order: m, q });
    }
    let k = k % m;
    let key = (*c, q, k);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().expect("fermat cache").get(&key) {
        return Ok(v);
    }
    budget.check_enumeration(q as u128 * q as u128)?;
    let field = ff::field(q)?;
    let ca = coordinate_scalar(&field, m, c.w_u(), c.a(), k, budget)?;
    let cb = coordinate_scalar(&field, m, c.w_v(), c.b(), k, budget)?;
    let v = count_descended(&field, c.kind(), c.a(), c.b(), ca, cb);
    cache.lock().expect("fermat cache").insert(key, v);
    Ok(v)
}

/// Evaluates classes at points `(q, k)`; holds opaque bindings and budgets.
#[derive(Debug, Clone, Default)]
pub struct Realizer {
    bindings: Bindings,
    budget: Budget,
}

impl Realizer {
    pub fn new() -> Self {
        Realizer {
            bindings: Bindings::new(),
            budget: Budget::from_env(),
        }
    }

    pub fn with_bindings(bindings: Bindings) -> Self {
        Realizer {
            bindings,
            budget: Budget::from_env(),
        }
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn bindings_mut(&mut self) -> &mut Bindings {
        &mut self.bindings
    }

    /// Least common multiple of all roots-of-unity orders a twisted count
    /// of `x` needs inside `F_q`.
    pub fn required_order(x: &MotClass) -> u64 {
        x.generators().fold(1u64, |acc, g| acc.lcm(&g.required_order()))
    }

    fn check_q(q: u64) -> Result<(), GringError> {
        ff::prime_power(q)
            .map(|_| ())
            .ok_or(GringError::Field(FieldError::NotPrimePower(q)))
    }

    fn opaque(&self, name: &str, q: u64, k: u64) -> Result<BigRational, GringError> {
        self.bindings
            .get(name, q, k)
            .cloned()
            .ok_or_else(|| GringError::UnboundOpaque {
                name: name.to_string(),
                q,
                k,
            })
    }

    fn assemble<F>(&self, x: &MotClass, q: u64, mut value: F) -> Result<BigRational, GringError>
    where
        F: FnMut(&Generator) -> Result<BigRational, GringError>,
    {
        let qr = int(q);
        let mut total = BigRational::zero();
        for (m, p) in x.numerator() {
            let mut term = p.eval(&qr);
            for g in m.generators() {
                term *= value(g)?;
            }
            total += term;
        }
        for &i in x.denominator() {
            total /= BigRational::one() - num_traits::pow(qr.clone(), i as usize);
        }
        Ok(total)
    }

    /// Plain `F_q`-point count.
    pub fn plain(&self, x: &MotClass, q: u64) -> Result<BigRational, GringError> {
        Self::check_q(q)?;
        self.assemble(x, q, |g| match g {
            Generator::MuTorsor { d, .. } => Ok(int(d.gcd(&(q - 1)))),
            Generator::Fermat(c) => Ok(int(match c.kind() {
                FermatKind::One => count_fermat_with(FermatKind::One, c.a(), c.b(), q, &self.budget)?,
                FermatKind::Zero => {
                    self.budget
                        .check_enumeration(q as u128 * q as u128)
                        .map_err(GringError::from)?;
                    let field = ff::field(q).map_err(GringError::from)?;
                    count_descended(&field, FermatKind::Zero, c.a(), c.b(), 1, 1)
                }
            })),
            Generator::Opaque { name, .. } => self.opaque(name, q, 0),
        })
    }

    /// Twisted count at `(q, k)`; every action order must divide `q - 1`.
    pub fn twisted(&self, x: &MotClass, q: u64, k: u64) -> Result<BigRational, GringError> {
        Self::check_q(q)?;
        let order = Self::required_order(x);
        if !(q - 1).is_multiple_of(order) {
            return Err(GringError::IncompatibleOrder { order, q });
        }
        self.assemble(x, q, |g| match g {
            Generator::MuTorsor { d, order } => {
                Ok(int(if k.is_multiple_of(*order) { *d } else { 0 }))
            }
            Generator::Fermat(c) => Ok(int(twisted_fermat_count_with(c, q, k, &self.budget)?)),
            Generator::Opaque { name, action_order } => self.opaque(name, q, k % action_order),
        })
    }

    /// Values at each `(q, k)`; `k = None` selects the plain count.
    pub fn at(&self, x: &MotClass, q: u64, k: Option<u64>) -> Result<BigRational, GringError> {
        match k {
            None => self.plain(x, q),
            Some(k) => self.twisted(x, q, k),
        }
    }
}

/// Plain realization with no opaque bindings.
pub fn realize_plain(x: &MotClass, q: u64) -> Result<BigRational, GringError> {
    Realizer::new().plain(x, q)
}

/// Twisted realization with no opaque bindings.
pub fn realize_twisted(x: &MotClass, q: u64, k: u64) -> Result<BigRational, GringError> {
    Realizer::new().twisted(x, q, k)
}

/// Agreement of two classes at every listed `(q, k)` (`k = None`: plain).
/// A necessary condition for equality in the ring, not a proof of it.
pub fn realize_equal(
    realizer: &Realizer,
    x: &MotClass,
    y: &MotClass,
    points: &[(u64, Option<u64>)],
) -> Result<bool, GringError> {
    for &(q, k) in points {
        if realizer.at(x, q, k)? != realizer.at(y, q, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Realization `L -> 1` on classes that are Laurent polynomials in `L`.
pub fn euler_characteristic(x: &MotClass) -> Result<BigInt, GringError> {
    x.as_lpoly()
        .map(|p| p.sum_of_coefficients())
        .ok_or(GringError::EulerUndefined)
}
