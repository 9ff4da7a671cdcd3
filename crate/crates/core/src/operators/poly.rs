//! Sparse polynomials in up to three complex variables.
//!
//! The exponent triple is the map key, so the representation is canonical:
//! no zero coefficients are stored and term order never matters for
//! equality. Bidisc polynomials simply keep the third exponent at zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::maps::LinearMap;
use crate::C;

/// One serialized term, `{"exp": [a, b, c], "coef": [re, im]}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PolyTerm {
    pub exp: [u32; 3],
    pub coef: [f64; 2],
}

/// Sparse polynomial in the variables `v0, v1, v2` with complex
/// coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly3 {
    terms: BTreeMap<[u32; 3], C>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(C::new(1.0, 0.0))
    }

    pub fn constant(value: C) -> Self {
        Self::monomial([0, 0, 0], value)
    }

    /// The variable `v_index`, `index < 3`.
    pub fn variable(index: usize) -> Self {
        assert!(index < 3, "variable index out of range");
        let mut exp = [0u32; 3];
        exp[index] = 1;
        Self::monomial(exp, C::new(1.0, 0.0))
    }

    pub fn monomial(exp: [u32; 3], coeff: C) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != C::new(0.0, 0.0) {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ([u32; 3], C)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (exp, coeff) in iter {
            p.add_term(exp, coeff);
        }
        p
    }

    fn add_term(&mut self, exp: [u32; 3], coeff: C) {
        let entry = self.terms.entry(exp).or_insert(C::new(0.0, 0.0));
        *entry += coeff;
        if *entry == C::new(0.0, 0.0) {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = ([u32; 3], C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    /// Taylor coefficient at the given exponent triple; zero when absent.
    pub fn coefficient(&self, exp: [u32; 3]) -> C {
        self.terms.get(&exp).copied().unwrap_or(C::new(0.0, 0.0))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    pub fn eval(&self, p: &[C]) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (exp, coeff) in &self.terms {
            let mut term = *coeff;
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term *= p[i].powu(e);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn scale(&self, factor: C) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * factor)))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        result
    }

    /// Substitutes `subs[i]` for the variable `v_i`.
    pub fn compose(&self, subs: &[Poly3; 3]) -> Self {
        let mut acc = Self::zero();
        for (exp, coeff) in &self.terms {
            let mut term = Self::constant(*coeff);
            for (i, &e) in exp.iter().enumerate() {
                if e > 0 {
                    term = &term * &subs[i].pow(e);
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitutes the linear map's rows for the variables. The map may act
    /// on C^2 or C^3; missing variables are substituted by themselves.
    pub fn compose_linear(&self, m: &LinearMap) -> Self {
        let dim = m.dim();
        let mut subs = [Self::variable(0), Self::variable(1), Self::variable(2)];
        for (i, slot) in subs.iter_mut().enumerate().take(dim) {
            let mut row_poly = Self::zero();
            for (j, coeff) in m.rows()[i].iter().enumerate() {
                row_poly = &row_poly + &Self::monomial(unit_exp(j), *coeff);
            }
            *slot = row_poly;
        }
        self.compose(&subs)
    }

    /// Largest coefficient distance to another polynomial, over the union
    /// of their supports.
    pub fn max_coeff_distance(&self, other: &Self) -> f64 {
        let mut max = 0.0f64;
        for (exp, coeff) in &self.terms {
            max = max.max((coeff - other.coefficient(*exp)).norm());
        }
        for (exp, coeff) in &other.terms {
            max = max.max((self.coefficient(*exp) - coeff).norm());
        }
        max
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_coeff_distance(other) <= tol
    }

    /// Drops terms with coefficient modulus at most `tol`.
    pub fn cleanup(&self, tol: f64) -> Self {
        Self::from_terms(self.terms().filter(|(_, c)| c.norm() > tol))
    }

    /// Largest coefficient modulus; zero for the zero polynomial.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn unit_exp(index: usize) -> [u32; 3] {
    let mut exp = [0u32; 3];
    exp[index] = 1;
    exp
}

impl Add for &Poly3 {
    type Output = Poly3;

    fn add(self, rhs: Self) -> Poly3 {
        let mut out = self.clone();
        for (exp, coeff) in rhs.terms() {
            out.add_term(exp, coeff);
        }
        out
    }
}

impl Sub for &Poly3 {
    type Output = Poly3;

    fn sub(self, rhs: Self) -> Poly3 {
        let mut out = self.clone();
        for (exp, coeff) in rhs.terms() {
            out.add_term(exp, -coeff);
        }
        out
    }
}

impl Mul for &Poly3 {
    type Output = Poly3;

    fn mul(self, rhs: Self) -> Poly3 {
        let mut out = Poly3::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in rhs.terms() {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }
}

impl Neg for &Poly3 {
    type Output = Poly3;

    fn neg(self) -> Poly3 {
        self.scale(C::new(-1.0, 0.0))
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (exp, coeff) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)", coeff.re, coeff.im)?;
            for (name, &e) in ["v0", "v1", "v2"].iter().zip(exp) {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Poly3 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<PolyTerm> = self
            .terms()
            .map(|(exp, c)| PolyTerm {
                exp,
                coef: [c.re, c.im],
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Poly3 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<PolyTerm>::deserialize(deserializer)?;
        for t in &terms {
            if !(t.coef[0].is_finite() && t.coef[1].is_finite()) {
                return Err(D::Error::custom("non-finite polynomial coefficient"));
            }
        }
        Ok(Poly3::from_terms(
            terms
                .into_iter()
                .map(|t| (t.exp, C::new(t.coef[0], t.coef[1]))),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::c;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_drops_zeros() {
        let p = Poly3::from_terms([([1, 0, 0], c(1.0, 0.0)), ([1, 0, 0], c(-1.0, 0.0))]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), None);
    }

    #[test]
    fn arithmetic_and_eval_agree() {
        let x = Poly3::variable(0);
        let y = Poly3::variable(1);
        let p = &(&x * &x) + &y.scale(c(2.0, 1.0));
        let at = [c(0.3, -0.2), c(0.5, 0.1), c(0.0, 0.0)];
        let direct = at[0] * at[0] + c(2.0, 1.0) * at[1];
        assert!((p.eval(&at) - direct).norm() < 1e-15);
    }

    #[test]
    fn degree_is_additive_without_cancellation() {
        let p = Poly3::from_terms([([2, 0, 0], c(1.0, 0.0)), ([0, 0, 1], c(3.0, 0.0))]);
        let q = Poly3::from_terms([([0, 1, 0], c(1.0, 0.0)), ([0, 0, 0], c(-1.0, 0.0))]);
        assert_eq!((&p * &q).degree(), Some(3));
    }

    #[test]
    fn composition_substitutes() {
        // f(x1, x2, x3) = x3 composed with the tetrablock forward map.
        let f = Poly3::variable(2);
        let subs = [
            Poly3::variable(0),
            Poly3::variable(1),
            &(&Poly3::variable(0) * &Poly3::variable(1))
                - &(&Poly3::variable(2) * &Poly3::variable(2)),
        ];
        let g = f.compose(&subs);
        assert_eq!(g.coefficient([1, 1, 0]), c(1.0, 0.0));
        assert_eq!(g.coefficient([0, 0, 2]), c(-1.0, 0.0));
        assert_eq!(g.num_terms(), 2);
    }

    proptest! {
        #[test]
        fn json_round_trip(coeffs in proptest::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..8)) {
            let p = Poly3::from_terms(
                coeffs.iter().enumerate().map(|(i, (re, im))| {
                    ([i as u32 % 4, (i as u32 / 2) % 3, i as u32 % 2], c(*re, *im))
                }),
            );
            let json = serde_json::to_string(&p).unwrap();
            let back: Poly3 = serde_json::from_str(&json).unwrap();
            prop_assert!(p.approx_eq(&back, 0.0));
        }

        #[test]
        fn eval_is_multiplicative(
            a_re in -2.0..2.0f64, b_re in -2.0..2.0f64,
            x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
        ) {
            let p = &Poly3::variable(0).scale(c(a_re, 1.0)) + &Poly3::one();
            let q = &Poly3::monomial([0, 1, 1], c(b_re, -0.5)) + &Poly3::variable(2);
            let at = [c(x, y), c(y, z), c(z, x)];
            let lhs = (&p * &q).eval(&at);
            let rhs = p.eval(&at) * q.eval(&at);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
        }
    }
}
