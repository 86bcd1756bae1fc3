//! Finite fields `GF(p^n)` with deterministic presentations.
//!
//! Elements are encoded as integers `0..p^n`: the base-`p` digits of the index
//! are the coefficients `c_0, c_1, ...` of the representing polynomial in the
//! field generator `x`. The modulus is the least monic irreducible polynomial
//! of degree `n` in the order of its coefficient index, so every field built
//! from the same `(p, n)` has the same presentation.
//!
//! [`TwistExtension`] carries the machinery used by twisted point counting:
//! an embedding `F_q -> F_{q^e}` and elements `alpha` with a prescribed value
//! of `alpha^(q-1)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{what} of size {size} exceeds the configured budget {budget}")]
    BudgetExceeded { what: &'static str, size: u128, budget: u128 },
    #[error("no root of unity of order {order} in a field of size {q}")]
    IncompatibleOrder { order: u64, q: u64 },
}

/// Enumeration and field-size limits. Both can be overridden through the
/// `MOTIVIC_ENUM_BUDGET` and `MOTIVIC_FIELD_BUDGET` environment variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of enumerated points (arcs, coordinate pairs).
    pub enumeration: u128,
    /// Maximum size of an extension field used for element arithmetic.
    pub field_size: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: 100_000_000,
            field_size: 1_000_000_000,
        }
    }
}

impl Budget {
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(v) = std::env::var("MOTIVIC_ENUM_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            b.enumeration = v;
        }
        if let Some(v) = std::env::var("MOTIVIC_FIELD_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
        {
            b.field_size = v;
        }
        b
    }

    pub fn check_enumeration(&self, size: u128) -> Result<(), FieldError> {
        if size > self.enumeration {
            return Err(FieldError::BudgetExceeded {
                what: "enumeration",
                size,
                budget: self.enumeration,
            });
        }
        Ok(())
    }
}

/// Splits `q` as `p^r`, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = smallest_prime_factor(q);
    let mut r = 0;
    let mut n = q;
    while n.is_multiple_of(p) {
        n /= p;
        r += 1;
    }
    (n == 1).then_some((p, r))
}

fn smallest_prime_factor(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    n
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, coefficient vectors low degree first, no
// trailing zeros.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = pow_mod(m[dm], p - 2, p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * inv_lead % p;
        let shift = top - dm;
        for (j, &mj) in m.iter().enumerate() {
            let sub = c * mj % p;
            r[shift + j] = (r[shift + j] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    result
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n <= 1 {
        return n == 1;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for _ in 0..n / 2 {
        h = poly_powmod(&h, p as u128, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(f, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `n` over F_p, ordered by the
/// base-`p` index of its non-leading coefficients (`c_0` least significant).
pub fn least_irreducible(p: u64, n: usize) -> Vec<u64> {
    let tails = (p as u128).pow(n as u32);
    for t in 0..tails {
        let mut f = Vec::with_capacity(n + 1);
        let mut rest = t;
        for _ in 0..n {
            f.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        f.push(1);
        if n == 1 || (f[0] != 0 && is_irreducible(&f, p)) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The field `GF(p^n)` in its deterministic presentation.
pub struct FiniteField {
    p: u64,
    degree: usize,
    order: u64,
    modulus: Vec<u64>,
    primitive: OnceLock<u64>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.degree)
    }
}

impl FiniteField {
    /// The field with `q` elements.
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, r) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Ok(Self::extension(p, r as usize))
    }

    /// `GF(p^n)`; panics if `p^n` does not fit in 63 bits.
    pub fn extension(p: u64, n: usize) -> Self {
        let order = (p as u128).pow(n as u32);
        assert!(order < (1u128 << 63), "field too large");
        FiniteField {
            p,
            degree: n,
            order: order as u64,
            modulus: least_irreducible(p, n),
            primitive: OnceLock::new(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    /// Iterator over all elements in index order.
    pub fn elements(&self) -> std::ops::Range<u64> {
        0..self.order
    }

    /// Iterator over the nonzero elements in index order.
    pub fn units(&self) -> std::ops::Range<u64> {
        1..self.order
    }

    /// The image of an integer under `Z -> F_p -> F`.
    pub fn from_int(&self, c: i64) -> u64 {
        c.rem_euclid(self.p as i64) as u64
    }

    fn digits(&self, mut x: u64) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.degree);
        for _ in 0..self.degree {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    fn encode(&self, v: &[u64]) -> u64 {
        v.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }

    /// Coefficients of `x` in the power basis, low degree first.
    pub fn coefficients(&self, x: u64) -> Vec<u64> {
        self.digits(x)
    }

    /// The element with the given power-basis coefficients.
    pub fn from_coefficients(&self, coeffs: &[u64]) -> u64 {
        let mut v = coeffs.iter().map(|c| c % self.p).collect::<Vec<_>>();
        v.resize(self.degree, 0);
        self.encode(&v)
    }

    /// The field generator `x` (a root of the modulus).
    pub fn generator_root(&self) -> u64 {
        if self.degree == 1 {
            // the modulus is x + c_0, whose root is -c_0
            (self.p - self.modulus[0]) % self.p
        } else {
            self.p
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            return (a + b) % self.p;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.encode(&s)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.degree == 1 {
            return (self.p - a) % self.p;
        }
        let s: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|u| (self.p - u) % self.p)
            .collect();
        self.encode(&s)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.degree == 1 {
            return (a as u128 * b as u128 % self.p as u128) as u64;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let (mut x, mut y) = (self.digits(a), self.digits(b));
        trim(&mut x);
        trim(&mut y);
        let mut r = poly_mulmod(&x, &y, &self.modulus, self.p);
        r.resize(self.degree, 0);
        self.encode(&r)
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut result = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        result
    }

    /// Power with a signed exponent; `a` must be nonzero when `e < 0`.
    pub fn pow_signed(&self, a: u64, e: i128) -> u64 {
        let n = (self.order - 1) as i128;
        self.pow(a, e.rem_euclid(n) as u128)
    }

    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero");
        self.pow(a, (self.order - 2) as u128)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u64) -> u128 {
        assert!(a != 0);
        let mut n = (self.order - 1) as u128;
        for l in prime_factors(n) {
            while n.is_multiple_of(l) && self.pow(a, n / l) == 1 {
                n /= l;
            }
        }
        n
    }

    /// Least-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> u64 {
        *self.primitive.get_or_init(|| {
            let n = (self.order - 1) as u128;
            let factors = prime_factors(n);
            (1..self.order)
                .find(|&a| factors.iter().all(|&l| self.pow(a, n / l) != 1))
                .expect("multiplicative group is cyclic")
        })
    }

    /// The fixed primitive `m`-th root of unity `g^((q-1)/m)`, `g` the
    /// least primitive element. Compatible across orders:
    /// `root_of_unity(m)^(m/d) = root_of_unity(d)`.
    pub fn root_of_unity(&self, m: u64) -> Result<u64, FieldError> {
        if m == 0 || !(self.order - 1).is_multiple_of(m) {
            return Err(FieldError::IncompatibleOrder { order: m, q: self.order });
        }
        Ok(self.pow(self.primitive_element(), ((self.order - 1) / m) as u128))
    }

    /// Histogram of `x -> x^n` on the units: `h[y] = #{x != 0 : x^n = y}`.
    pub fn power_histogram(&self, n: u64) -> Vec<u64> {
        let mut h = vec![0u64; self.order as usize];
        for x in self.units() {
            h[self.pow(x, n as u128) as usize] += 1;
        }
        h
    }
}

/// The field with `q` elements, shared across callers.
pub fn field(q: u64) -> Result<Arc<FiniteField>, FieldError> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<FiniteField>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("field cache").get(&q) {
        return Ok(f.clone());
    }
    let f = Arc::new(FiniteField::new(q)?);
    f.primitive_element();
    cache.lock().expect("field cache").insert(q, f.clone());
    Ok(f)
}

/// Carrier for a field `F_{q^e}` as an extension of `F_q`: `q`, the extension
/// degree and the presentation of the big field.
#[derive(Debug)]
pub struct FiniteFieldSpec {
    pub q: u64,
    pub e: u32,
    pub field: FiniteField,
}

impl FiniteFieldSpec {
    pub fn new(q: u64, e: u32, budget: &Budget) -> Result<Self, FieldError> {
        let (p, r) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        let size = (q as u128).checked_pow(e).unwrap_or(u128::MAX);
        if size > budget.field_size {
            return Err(FieldError::BudgetExceeded {
                what: "field",
                size,
                budget: budget.field_size,
            });
        }
        Ok(FiniteFieldSpec {
            q,
            e,
            field: FiniteField::extension(p, (r * e) as usize),
        })
    }

    pub fn modulus(&self) -> &[u64] {
        self.field.modulus()
    }
}

/// `F_{q^e}` together with a fixed embedding of `F_q` and an element `G`
/// whose norm `G^N`, `N = (q^e-1)/(q-1)`, is the image of the least primitive
/// element of `F_q`.
pub struct TwistExtension<'a> {
    base: &'a FiniteField,
    ext: FiniteFieldSpec,
    norm_exp: u128,
    embed: Vec<u64>,
    restrict: HashMap<u64, u64>,
    norm_root: u64,
}

impl<'a> TwistExtension<'a> {
    pub fn new(base: &'a FiniteField, e: u32, budget: &Budget) -> Result<Self, FieldError> {
        let q = base.order();
        let ext = FiniteFieldSpec::new(q, e, budget)?;
        let big = &ext.field;
        let qe = big.order() as u128;
        let norm_exp = (qe - 1) / (q as u128 - 1);

        // Image of the generator of F_q: a root of the base modulus lying in
        // the subfield of size q, searched among norms y^N in index order.
        let x_image = if base.degree() == 1 {
            big.from_int((base.generator_root()) as i64)
        } else {
            let modulus = base.modulus();
            let eval = |z: u64| {
                modulus
                    .iter()
                    .rev()
                    .fold(0u64, |acc, &c| big.add(big.mul(acc, z), big.from_int(c as i64)))
            };
            big.units()
                .map(|y| big.pow(y, norm_exp))
                .find(|&z| eval(z) == 0)
                .expect("F_q embeds in F_{q^e}")
        };
        let embed: Vec<u64> = base
            .elements()
            .map(|a| {
                if base.degree() == 1 {
                    big.from_int(a as i64)
                } else {
                    base.coefficients(a)
                        .iter()
                        .rev()
                        .fold(0u64, |acc, &c| {
                            big.add(big.mul(acc, x_image), big.from_int(c as i64))
                        })
                }
            })
            .collect();
        let restrict = embed
            .iter()
            .enumerate()
            .map(|(a, &b)| (b, a as u64))
            .collect();
        let g_image = embed[base.primitive_element() as usize];
        let norm_root = big
            .units()
            .find(|&y| big.pow(y, norm_exp) == g_image)
            .expect("the norm map is surjective");
        Ok(TwistExtension {
            base,
            ext,
            norm_exp,
            embed,
            restrict,
            norm_root,
        })
    }

    pub fn base(&self) -> &FiniteField {
        self.base
    }

    pub fn field(&self) -> &FiniteField {
        &self.ext.field
    }

    pub fn degree(&self) -> u32 {
        self.ext.e
    }

    pub fn embed(&self, a: u64) -> u64 {
        self.embed[a as usize]
    }

    /// Inverse of [`embed`](Self::embed) on the subfield; `None` off it.
    pub fn restrict(&self, b: u64) -> Option<u64> {
        self.restrict.get(&b).copied()
    }

    /// An element `alpha` with `alpha^(q-1) = zeta_m^j`, where `zeta_m` is the
    /// fixed primitive `m`-th root of unity of `F_q`. Requires `m | j*N`.
    pub fn coset_root(&self, j: i64, m: u64) -> Option<u64> {
        let m128 = m as i128;
        let num = j as i128 * self.norm_exp as i128;
        if num % m128 != 0 {
            return None;
        }
        Some(self.field().pow_signed(self.norm_root, num / m128))
    }
}

/// Least `e >= 1` with `m | j * (1 + q + ... + q^(e-1))`, scanning up to `limit`.
pub fn least_twist_degree(q: u64, m: u64, j: i64, limit: u32) -> Option<u32> {
    let jm = j.rem_euclid(m as i64) as u128;
    let m = m as u128;
    let q = q as u128 % m;
    let mut n = 1u128 % m;
    let mut qpow = 1u128;
    for e in 1..=limit {
        if (jm * n).is_multiple_of(m) {
            return Some(e);
        }
        qpow = qpow * q % m;
        n = (n + qpow) % m;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn least_irreducibles() {
        // over F_2: x^2 + x + 1, x^3 + x + 1
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        // over F_3: x^2 + 1
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(least_irreducible(5, 1), vec![0, 1]);
    }

    #[test]
    fn field_axioms_gf9() {
        let f = FiniteField::new(9).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        let g = f.primitive_element();
        assert_eq!(f.element_order(g), 8);
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = FiniteField::extension(5, 3);
        for c in 0..5 {
            assert_eq!(f.pow(c, 5), c);
        }
        let x = f.generator_root();
        assert_ne!(f.pow(x, 5), x);
        assert_eq!(f.pow(x, 125), x);
    }

    #[test]
    fn roots_of_unity_are_compatible() {
        let f = FiniteField::new(13).unwrap();
        let z12 = f.root_of_unity(12).unwrap();
        assert_eq!(f.element_order(z12), 12);
        assert_eq!(f.pow(z12, 3), f.root_of_unity(4).unwrap());
        assert!(f.root_of_unity(5).is_err());
    }

    #[test]
    fn twist_degree() {
        // q = 7, m = 6: N(e) = e mod 6
        assert_eq!(least_twist_degree(7, 6, 1, 20), Some(6));
        assert_eq!(least_twist_degree(7, 6, 2, 20), Some(3));
        assert_eq!(least_twist_degree(7, 6, 0, 20), Some(1));
    }

    #[test]
    fn coset_roots_have_prescribed_power() {
        let base = FiniteField::new(7).unwrap();
        let budget = Budget::default();
        for j in 0..6 {
            let e = least_twist_degree(7, 6, j, 10).unwrap();
            let tw = TwistExtension::new(&base, e, &budget).unwrap();
            let alpha = tw.coset_root(j, 6).unwrap();
            let zeta = tw.embed(base.pow(base.root_of_unity(6).unwrap(), j as u128));
            assert_eq!(tw.field().pow(alpha, 6), zeta);
        }
    }

    #[test]
    fn embedding_of_prime_power_base() {
        let base = FiniteField::new(4).unwrap();
        let budget = Budget::default();
        let tw = TwistExtension::new(&base, 3, &budget).unwrap();
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(
                    tw.embed(base.mul(a, b)),
                    tw.field().mul(tw.embed(a), tw.embed(b))
                );
                assert_eq!(
                    tw.embed(base.add(a, b)),
                    tw.field().add(tw.embed(a), tw.embed(b))
                );
            }
            assert_eq!(tw.restrict(tw.embed(a)), Some(a));
        }
    }

    #[test]
    fn field_budget_enforced() {
        let budget = Budget {
            enumeration: 10,
            field_size: 1000,
        };
        assert!(matches!(
            FiniteFieldSpec::new(13, 3, &budget),
            Err(FieldError::BudgetExceeded { .. })
        ));
    }
}
