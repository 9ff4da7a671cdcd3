//! The operator triple Gamma, Gamma* and the orthogonal projection P.
//!
//! For a proper holomorphic map `pi: D -> G` of multiplicity `m`,
//! `Gamma f = (1/sqrt(m)) (f o pi) Jpi` is a unitary from the Bergman space
//! of `G` onto a closed subspace of the Bergman space of `D`; its inverse
//! on the range divides by the Jacobian and rewrites the deck-invariant
//! quotient in target coordinates, and the orthogonal projection onto the
//! range averages `det(U) (g o U)` over the deck group. All three are
//! realised exactly on sparse polynomials, which are dense in the spaces
//! involved.

mod poly;

pub use poly::{Poly3, PolyTerm};

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::maps::{MapName, ProperMap};
use crate::C;

/// Coefficient tolerance absorbing `sqrt(2)` rounding in otherwise exact
/// polynomial identities.
pub const COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error("polynomial is not in the range of Gamma: {reason}")]
    NotInRange { reason: String },
}

/// Shared strictly positive weight evaluator.
pub type WeightFn = Arc<dyn Fn(&[C]) -> f64 + Send + Sync>;

/// Weight multiplying the volume form of an inner product.
#[derive(Clone)]
pub enum WeightFunction {
    One,
    OnePlusAbsX1Sq,
    Custom(WeightFn),
}

impl WeightFunction {
    pub fn evaluate(&self, p: &[C]) -> f64 {
        match self {
            WeightFunction::One => 1.0,
            WeightFunction::OnePlusAbsX1Sq => 1.0 + p[0].norm_sqr(),
            WeightFunction::Custom(f) => f(p),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightFunction::One => "one",
            WeightFunction::OnePlusAbsX1Sq => "one-plus-abs-x1-sq",
            WeightFunction::Custom(_) => "custom",
        }
    }
}

impl fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Forward-map components as polynomials on the source.
fn forward_polys(map: &ProperMap) -> [Poly3; 3] {
    let v0 = Poly3::variable(0);
    let v1 = Poly3::variable(1);
    let v2 = Poly3::variable(2);
    match map.name {
        MapName::Tetra => [v0.clone(), v1.clone(), &(&v0 * &v1) - &(&v2 * &v2)],
        // Third slot is unused by bidisc polynomials.
        MapName::Sym2 => [&v0 + &v1, &v0 * &v1, Poly3::zero()],
    }
}

/// Jacobian determinant as a polynomial on the source.
fn jacobian_poly(map: &ProperMap) -> Poly3 {
    match map.name {
        MapName::Tetra => Poly3::variable(2).scale(C::new(-2.0, 0.0)),
        MapName::Sym2 => &Poly3::variable(0) - &Poly3::variable(1),
    }
}

/// `Gamma f = (1/sqrt(m)) (f o pi) Jpi`, exact on polynomials.
pub fn gamma_apply(f: &Poly3, map: &ProperMap) -> Poly3 {
    let composed = f.compose(&forward_polys(map));
    (&composed * &jacobian_poly(map)).scale(C::new(1.0 / (map.multiplicity as f64).sqrt(), 0.0))
}

/// `Gamma* g = sqrt(m) (g / Jpi)~`: divides by the Jacobian, checks that
/// the quotient is deck invariant and rewrites it in target coordinates,
/// so that `gamma_star_apply(gamma_apply(f)) = f`.
pub fn gamma_star_apply(g: &Poly3, map: &ProperMap) -> Result<Poly3, OperatorError> {
    let sqrt_m = C::new((map.multiplicity as f64).sqrt(), 0.0);
    match map.name {
        MapName::Tetra => {
            // Divide by Jphi = -2z.
            let mut quotient_terms = Vec::with_capacity(g.num_terms());
            for (exp, coeff) in g.terms() {
                if exp[2] == 0 {
                    return Err(OperatorError::NotInRange {
                        reason: format!(
                            "term v0^{} v1^{} is not divisible by the Jacobian",
                            exp[0], exp[1]
                        ),
                    });
                }
                quotient_terms.push(([exp[0], exp[1], exp[2] - 1], coeff / C::new(-2.0, 0.0)));
            }
            let quotient = Poly3::from_terms(quotient_terms);
            // Deck invariance of the quotient means evenness in z.
            if quotient.terms().any(|(exp, _)| exp[2] % 2 != 0) {
                return Err(OperatorError::NotInRange {
                    reason: "quotient by the Jacobian is not deck invariant".into(),
                });
            }
            // Rewrite z11^a z22^b (z^2)^n as x1^a x2^b (x1 x2 - x3)^n.
            let base = &(&Poly3::variable(0) * &Poly3::variable(1)) - &Poly3::variable(2);
            let mut out = Poly3::zero();
            for (exp, coeff) in quotient.terms() {
                let rewritten = &Poly3::monomial([exp[0], exp[1], 0], coeff) * &base.pow(exp[2] / 2);
                out = &out + &rewritten;
            }
            Ok(out.scale(sqrt_m))
        }
        MapName::Sym2 => {
            if g.terms().any(|(exp, _)| exp[2] != 0) {
                return Err(OperatorError::NotInRange {
                    reason: "bidisc polynomial uses the third variable".into(),
                });
            }
            let scale = g.max_coeff().max(1.0);
            let (quotient, remainder) = divide_by_v0_minus_v1(g);
            if remainder.max_coeff() > COEFF_TOL * scale {
                return Err(OperatorError::NotInRange {
                    reason: "not divisible by the Jacobian".into(),
                });
            }
            let swapped = quotient.compose_linear(&crate::maps::LinearMap::swap2());
            if !quotient.approx_eq(&swapped, COEFF_TOL * scale) {
                return Err(OperatorError::NotInRange {
                    reason: "quotient by the Jacobian is not symmetric".into(),
                });
            }
            let h = symmetric_to_elementary(&quotient);
            Ok(h.scale(sqrt_m))
        }
    }
}

/// Long division by `v0 - v1`; the remainder is the restriction to the
/// diagonal and vanishes exactly when the input is antisymmetric.
fn divide_by_v0_minus_v1(g: &Poly3) -> (Poly3, Poly3) {
    let mut remainder = g.clone();
    let mut quotient = Poly3::zero();
    // Peel the lexicographically largest term with positive first exponent.
    while let Some((exp, coeff)) = remainder
        .terms()
        .filter(|(e, _)| e[0] > 0)
        .max_by_key(|(e, _)| *e)
    {
        let q_term = Poly3::monomial([exp[0] - 1, exp[1], 0], coeff);
        quotient = &quotient + &q_term;
        // remainder -= q_term * (v0 - v1)
        remainder = &remainder
            - &Poly3::from_terms([
                ([exp[0], exp[1], 0], coeff),
                ([exp[0] - 1, exp[1] + 1, 0], -coeff),
            ]);
    }
    (quotient, remainder)
}

/// Rewrites a symmetric polynomial in `(v0, v1)` in terms of the elementary
/// symmetric polynomials, by repeated subtraction of the lex-leading term.
fn symmetric_to_elementary(q: &Poly3) -> Poly3 {
    let scale = q.max_coeff().max(1.0);
    let mut rest = q.clone();
    let mut out = Poly3::zero();
    let e1 = &Poly3::variable(0) + &Poly3::variable(1);
    let e2 = &Poly3::variable(0) * &Poly3::variable(1);
    while !rest.is_zero() {
        let (exp, coeff) = rest.terms().max_by_key(|(e, _)| *e).expect("nonzero");
        debug_assert!(exp[0] >= exp[1], "lex leader of a symmetric polynomial");
        out = &out + &Poly3::monomial([exp[0] - exp[1], exp[1], 0], coeff);
        let subtract = (&e1.pow(exp[0] - exp[1]) * &e2.pow(exp[1])).scale(coeff);
        rest = (&rest - &subtract).cleanup(COEFF_TOL * scale);
    }
    out
}

/// Orthogonal projection onto the range of Gamma:
/// `P g = (1/m) sum over the deck group of det(U) (g o U)`.
pub fn project_generic(g: &Poly3, map: &ProperMap) -> Poly3 {
    let group = map.deck_group();
    let mut acc = Poly3::zero();
    for u in group.elements() {
        acc = &acc + &g.compose_linear(u).scale(u.det());
    }
    acc.scale(C::new(1.0 / map.multiplicity as f64, 0.0))
}

/// Tetrablock specialisation of the projection:
/// `P f = (f(z11, z22, z) - f(z11, z22, -z)) / 2`, the odd part in the
/// off-diagonal variable.
pub fn project_tetra(g: &Poly3) -> Poly3 {
    Poly3::from_terms(g.terms().filter(|(exp, _)| exp[2] % 2 == 1))
}

/// Exact coefficient lookup.
pub fn taylor_coefficient(g: &Poly3, exp: [u32; 3]) -> C {
    g.coefficient(exp)
}

/// Range characterisation for the tetrablock map: a polynomial lies in the
/// range of Gamma exactly when every Taylor coefficient with an even
/// off-diagonal exponent vanishes.
pub fn in_gamma_range_tetra(g: &Poly3, tol: f64) -> bool {
    g.terms()
        .filter(|(exp, _)| exp[2] % 2 == 0)
        .all(|(_, coeff)| coeff.norm() <= tol)
}

/// All exponent triples of total degree at most `max_degree` in the first
/// `vars` variables; test grid for the operator laws.
pub fn monomials_up_to(max_degree: u32, vars: usize) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for a in 0..=max_degree {
        for b in 0..=max_degree - a {
            if vars == 2 {
                out.push([a, b, 0]);
            } else {
                for c in 0..=max_degree - a - b {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::c;

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn gamma_of_constant_is_jacobian_line() {
        let tetra = ProperMap::tetra();
        let g = gamma_apply(&Poly3::one(), &tetra);
        let expected = Poly3::monomial([0, 0, 1], c(-SQRT2, 0.0));
        assert!(g.approx_eq(&expected, COEFF_TOL), "{g}");

        let sym2 = ProperMap::sym2();
        let g = gamma_apply(&Poly3::one(), &sym2);
        let expected = Poly3::from_terms([
            ([1, 0, 0], c(1.0 / SQRT2, 0.0)),
            ([0, 1, 0], c(-1.0 / SQRT2, 0.0)),
        ]);
        assert!(g.approx_eq(&expected, COEFF_TOL), "{g}");
    }

    #[test]
    fn gamma_of_third_coordinate() {
        let tetra = ProperMap::tetra();
        let g = gamma_apply(&Poly3::variable(2), &tetra);
        // (-sqrt(2) z)(z11 z22 - z^2)
        let expected = Poly3::from_terms([
            ([1, 1, 1], c(-SQRT2, 0.0)),
            ([0, 0, 3], c(SQRT2, 0.0)),
        ]);
        assert!(g.approx_eq(&expected, COEFF_TOL), "{g}");
    }

    #[test]
    fn gamma_star_inverts_gamma_on_examples() {
        let tetra = ProperMap::tetra();
        let g = Poly3::monomial([0, 0, 1], c(-SQRT2, 0.0));
        let f = gamma_star_apply(&g, &tetra).unwrap();
        assert!(f.approx_eq(&Poly3::one(), COEFF_TOL), "{f}");

        // z^3 round trip.
        let z3 = Poly3::monomial([0, 0, 3], c(1.0, 0.0));
        let f = gamma_star_apply(&z3, &tetra).unwrap();
        let back = gamma_apply(&f, &tetra);
        assert!(back.approx_eq(&z3, COEFF_TOL), "{back}");
    }

    #[test]
    fn gamma_star_rejects_outside_range() {
        let tetra = ProperMap::tetra();
        let z11 = Poly3::variable(0);
        assert!(matches!(
            gamma_star_apply(&z11, &tetra),
            Err(OperatorError::NotInRange { .. })
        ));
        // Divisible by z but the quotient is odd, hence not deck invariant.
        let z2 = Poly3::monomial([0, 0, 2], c(1.0, 0.0));
        assert!(matches!(
            gamma_star_apply(&z2, &tetra),
            Err(OperatorError::NotInRange { .. })
        ));
        // Symmetric (not antisymmetric) bidisc polynomial.
        let sym2 = ProperMap::sym2();
        let sym = &Poly3::variable(0) + &Poly3::variable(1);
        assert!(matches!(
            gamma_star_apply(&sym, &sym2),
            Err(OperatorError::NotInRange { .. })
        ));
    }

    #[test]
    fn gamma_star_handles_sym2_range() {
        let sym2 = ProperMap::sym2();
        // Antisymmetric: (z1 - z2) * (z1 + z2) = z1^2 - z2^2.
        let g = Poly3::from_terms([([2, 0, 0], c(1.0, 0.0)), ([0, 2, 0], c(-1.0, 0.0))]);
        let f = gamma_star_apply(&g, &sym2).unwrap();
        // (g / J) = z1 + z2 = e1, so f = sqrt(2) x1.
        let expected = Poly3::monomial([1, 0, 0], c(SQRT2, 0.0));
        assert!(f.approx_eq(&expected, COEFF_TOL), "{f}");
        let back = gamma_apply(&f, &sym2);
        assert!(back.approx_eq(&g, COEFF_TOL));
    }

    #[test]
    fn projection_parity_examples() {
        let tetra = ProperMap::tetra();
        let z = Poly3::variable(2);
        assert!(project_generic(&z, &tetra).approx_eq(&z, COEFF_TOL));

        let even = &Poly3::variable(0) * &Poly3::variable(1);
        assert!(project_generic(&even, &tetra).is_zero());

        // z11 z^3 + z^2 projects to z11 z^3.
        let mixed = Poly3::from_terms([([1, 0, 3], c(1.0, 0.0)), ([0, 0, 2], c(1.0, 0.0))]);
        let expected = Poly3::monomial([1, 0, 3], c(1.0, 0.0));
        assert!(project_generic(&mixed, &tetra).approx_eq(&expected, COEFF_TOL));
        assert!(project_tetra(&mixed).approx_eq(&expected, 0.0));
    }

    #[test]
    fn project_tetra_parity_table() {
        let z4 = Poly3::monomial([0, 0, 4], c(1.0, 0.0));
        assert!(project_tetra(&z4).is_zero());
        let z5 = Poly3::monomial([0, 0, 5], c(1.0, 0.0));
        assert!(project_tetra(&z5).approx_eq(&z5, 0.0));
        let fixed = Poly3::monomial([2, 1, 1], c(1.0, 0.0));
        assert!(project_tetra(&fixed).approx_eq(&fixed, 0.0));
        // 3 + 2z + z^2 -> 2z.
        let p = Poly3::from_terms([
            ([0, 0, 0], c(3.0, 0.0)),
            ([0, 0, 1], c(2.0, 0.0)),
            ([0, 0, 2], c(1.0, 0.0)),
        ]);
        let expected = Poly3::monomial([0, 0, 1], c(2.0, 0.0));
        assert!(project_tetra(&p).approx_eq(&expected, 0.0));
    }

    #[test]
    fn taylor_coefficient_lookup() {
        let g = Poly3::monomial([0, 0, 1], c(-SQRT2, 0.0));
        assert_eq!(taylor_coefficient(&g, [0, 0, 1]), c(-SQRT2, 0.0));
        assert_eq!(taylor_coefficient(&g, [0, 0, 2]), c(0.0, 0.0));
    }

    #[test]
    fn range_characterisation_by_parity() {
        let tetra = ProperMap::tetra();
        for exp in monomials_up_to(6, 3) {
            let f = Poly3::monomial(exp, c(1.0, 0.0));
            let g = gamma_apply(&f, &tetra);
            assert!(in_gamma_range_tetra(&g, COEFF_TOL), "Gamma image fails parity at {exp:?}");
            assert!(project_tetra(&g).approx_eq(&g, 0.0));
        }
        assert!(!in_gamma_range_tetra(&Poly3::variable(0), COEFF_TOL));
    }

    #[test]
    fn operator_laws_on_monomial_grid() {
        for map in [ProperMap::tetra(), ProperMap::sym2()] {
            let vars = map.source_dim();
            for exp in monomials_up_to(4, vars) {
                let g = Poly3::monomial(exp, c(1.0, -0.5));
                let pg = project_generic(&g, &map);
                let ppg = project_generic(&pg, &map);
                assert!(ppg.approx_eq(&pg, COEFF_TOL), "P^2 != P at {exp:?}");
            }
            for exp in monomials_up_to(3, vars) {
                let f = Poly3::monomial(exp, c(1.0, 0.25));
                let gf = gamma_apply(&f, &map);
                assert!(
                    project_generic(&gf, &map).approx_eq(&gf, COEFF_TOL),
                    "P Gamma != Gamma at {exp:?}"
                );
                let back = gamma_star_apply(&gf, &map).unwrap();
                assert!(back.approx_eq(&f, COEFF_TOL), "Gamma* Gamma != id at {exp:?}");
            }
        }
    }

    #[test]
    fn weight_functions_are_positive() {
        let p = [c(0.5, -0.5), c(0.0, 0.0), c(0.0, 0.0)];
        assert_eq!(WeightFunction::One.evaluate(&p), 1.0);
        assert_eq!(WeightFunction::OnePlusAbsX1Sq.evaluate(&p), 1.5);
        let w = WeightFunction::Custom(Arc::new(|p: &[C]| 2.0 + p[1].re));
        assert_eq!(w.evaluate(&p), 2.0);
    }
}
