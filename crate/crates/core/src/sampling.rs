//! Seeded random classes and polynomials for property checks.

use rand::Rng;

use crate::arcspaces::PolyFn;
use crate::gring::{Generator, LPoly, Monomial, MotClass};

#[derive(Debug, Clone)]
pub struct ClassSampler {
    /// Torsor sizes to draw from; 1 means no torsor.
    pub orders: Vec<u64>,
    pub max_terms: usize,
    pub max_coeff: i64,
    pub exponents: (i64, i64),
    /// Allow `(1 - L^i)` denominators, `i <= 3`.
    pub denominators: bool,
}

impl Default for ClassSampler {
    fn default() -> Self {
        ClassSampler {
            orders: vec![1, 2, 3, 6],
            max_terms: 3,
            max_coeff: 3,
            exponents: (-2, 2),
            denominators: true,
        }
    }
}

impl ClassSampler {
    fn lpoly<R: Rng>(&self, rng: &mut R) -> LPoly {
        let n = rng.gen_range(1..=2);
        LPoly::from_terms((0..n).map(|_| {
            let c = rng.gen_range(-self.max_coeff..=self.max_coeff);
            (rng.gen_range(self.exponents.0..=self.exponents.1), c)
        }))
    }

    /// A class in the convolution fragment: each monomial carries at most
    /// one free torsor and at most one trivially acted torsor.
    pub fn fragment_class<R: Rng>(&self, rng: &mut R) -> MotClass {
        let mut x = MotClass::zero();
        for _ in 0..rng.gen_range(1..=self.max_terms) {
            let mut gens = Vec::new();
            let d = self.orders[rng.gen_range(0..self.orders.len())];
            gens.extend(Generator::mu(d));
            if rng.gen_bool(0.25) {
                let t = self.orders[rng.gen_range(0..self.orders.len())];
                gens.extend(Generator::mu_trivial(t));
            }
            x = &x + &MotClass::term(Monomial::new(gens), self.lpoly(rng));
        }
        if self.denominators && rng.gen_bool(0.3) {
            x = x.div_one_minus_l_pow(rng.gen_range(1..=3));
        }
        x
    }
}

/// `count` distinct monomials in `nvars` variables, each of total degree in
/// `degrees`, with nonzero coefficients in `-5..=5`.
pub fn random_monomials<R: Rng>(
    rng: &mut R,
    nvars: usize,
    degrees: std::ops::RangeInclusive<u32>,
    count: usize,
) -> Vec<(Vec<u32>, i64)> {
    (0..count)
        .map(|_| {
            let deg = rng.gen_range(degrees.clone());
            let mut e = vec![0u32; nvars];
            for _ in 0..deg {
                e[rng.gen_range(0..nvars)] += 1;
            }
            let c = loop {
                let c = rng.gen_range(-5i64..=5);
                if c != 0 {
                    break c;
                }
            };
            (e, c)
        })
        .collect()
}

/// A polynomial vanishing at the origin with up to `terms` monomials of
/// degree `1..=max_degree`; never zero.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, terms: usize) -> PolyFn {
    loop {
        let n = rng.gen_range(1..=terms);
        let f = PolyFn::new(nvars, random_monomials(rng, nvars, 1..=max_degree, n))
            .expect("positive degrees");
        if !f.is_zero() {
            return f;
        }
    }
}

/// `f` plus `count` random monomials of degree above `m`.
pub fn with_junk<R: Rng>(rng: &mut R, f: &PolyFn, m: u32, count: usize) -> PolyFn {
    let junk = random_monomials(rng, f.nvars(), m + 1..=m + 4, count);
    PolyFn::new(
        f.nvars(),
        f.terms().map(|(e, c)| (e.to_vec(), c)).chain(junk),
    )
    .expect("same variable count")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::in_fragment;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_deterministic_and_in_fragment() {
        let s = ClassSampler::default();
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let x = s.fragment_class(&mut a);
            assert_eq!(x, s.fragment_class(&mut b));
            assert!(in_fragment(&x), "{x}");
        }
    }

    #[test]
    fn junk_has_high_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_poly(&mut rng, 2, 3, 3);
        let g = with_junk(&mut rng, &f, 3, 20);
        assert_eq!(g.truncate_for_level(3), f.truncate_for_level(3));
    }
}
