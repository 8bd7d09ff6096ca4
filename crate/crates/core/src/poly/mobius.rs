use super::{BiPoly, DensePoly, PolyError};
use crate::scalar::Scalar;

const SINGULAR_TOL: f64 = 1e-14;

/// x ↦ (a·n + b)/(c·n + d).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MobiusQuadruple<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> MobiusQuadruple<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self, PolyError> {
        let q = Self { a, b, c, d };
        q.check()?;
        Ok(q)
    }

    pub fn identity() -> Self {
        Self {
            a: T::one(),
            b: T::zero(),
            c: T::zero(),
            d: T::one(),
        }
    }

    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    pub fn check(&self) -> Result<(), PolyError> {
        let det = self.det();
        let scale = self.a.modulus() * self.d.modulus() + self.b.modulus() * self.c.modulus();
        if det.is_zero() || det.modulus() <= SINGULAR_TOL * scale {
            return Err(PolyError::SingularTransformation { det: det.modulus() });
        }
        Ok(())
    }

    pub fn apply(&self, n: T) -> T {
        (self.a * n + self.b) / (self.c * n + self.d)
    }
}

/// n³ coefficient of the cleared substitution: A·a³ + B·a²c + C·ac² + G·c³.
pub fn leading_coefficient_n3<T: Scalar>(cubic: [T; 4], quad: &MobiusQuadruple<T>) -> T {
    let [ca, cb, cc, cg] = cubic;
    let MobiusQuadruple { a, c, .. } = *quad;
    ca * a * a * a + cb * a * a * c + cc * a * c * c + cg * c * c * c
}

/// (c·n + d)³ · [A t³ + B t² + C t + G] at t = (a·n + b)/(c·n + d), as a
/// polynomial in n. `cubic` is (A, B, C, G).
pub fn mobius_substitute_cleared<T: Scalar>(
    cubic: [T; 4],
    quad: &MobiusQuadruple<T>,
) -> Result<DensePoly<T>, PolyError> {
    quad.check()?;
    let [ca, cb, cc, cg] = cubic;
    let MobiusQuadruple { a, b, c, d } = *quad;
    let two = T::from_int(2);
    let three = T::from_int(3);
    let n0 = ca * b * b * b + cb * b * b * d + cc * b * d * d + cg * d * d * d;
    let n1 = ca * three * a * b * b
        + cb * (b * b * c + two * a * b * d)
        + cc * (a * d * d + two * b * c * d)
        + cg * three * c * d * d;
    let n2 = ca * three * a * a * b
        + cb * (a * a * d + two * a * b * c)
        + cc * (b * c * c + two * a * c * d)
        + cg * three * c * c * d;
    let n3 = leading_coefficient_n3(cubic, quad);
    DensePoly::new(vec![n0, n1, n2, n3])
}

/// E(m, n): the cleared substitution with a = m·c and G = −(Am³ + Bm² + Cm),
/// so that the n³ coefficient vanishes identically. `abc` is (A, B, C).
pub fn eliminated_bivariate<T: Scalar>(
    abc: [T; 3],
    b: T,
    c: T,
    d: T,
) -> Result<BiPoly<T>, PolyError> {
    let [ca, cb, cc] = abc;
    let k = |x: T| DensePoly::constant(x);
    let a = DensePoly::linear(T::zero(), c);
    let g = DensePoly::new(vec![T::zero(), -cc, -cb, -ca])?;
    let a2 = a.mul(&a)?;
    let two = T::from_int(2);
    let three = T::from_int(3);

    let n0 = &k(ca * b * b * b + cb * b * b * d + cc * b * d * d) + &g.scale(d * d * d);
    let n1 = &(&a.scale(ca * three * b * b + cb * two * b * d + cc * d * d)
        + &k(cb * b * b * c + cc * two * b * c * d))
        + &g.scale(three * c * d * d);
    let n2 = &(&(&a2.scale(ca * three * b + cb * d)
        + &a.scale(cb * two * b * c + cc * two * c * d))
        + &k(cc * b * c * c))
        + &g.scale(three * c * c * d);
    BiPoly::from_n_coefficients(&[n0, n1, n2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{C64, Q64};

    fn q(n: i64) -> Q64 {
        Q64::from_integer(n)
    }

    #[test]
    fn identity_quadruple_is_a_no_op() {
        let cubic = [q(2), q(-3), q(5), q(7)];
        let p = mobius_substitute_cleared(cubic, &MobiusQuadruple::identity()).unwrap();
        assert_eq!(p.coeffs(), &[q(7), q(5), q(-3), q(2)]);
    }

    #[test]
    fn zero_cubic_gives_zero() {
        let quad = MobiusQuadruple::new(q(1), q(2), q(3), q(5)).unwrap();
        assert!(mobius_substitute_cleared([q(0); 4], &quad)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn pure_cube_expands_binomially() {
        let quad = MobiusQuadruple::new(q(1), q(1), q(1), q(2)).unwrap();
        let p = mobius_substitute_cleared([q(1), q(0), q(0), q(0)], &quad).unwrap();
        assert_eq!(p.coeffs(), &[q(1), q(3), q(3), q(1)]);
    }

    #[test]
    fn singular_quadruple_rejected() {
        assert!(matches!(
            MobiusQuadruple::new(q(1), q(2), q(2), q(4)),
            Err(PolyError::SingularTransformation { .. })
        ));
    }

    #[test]
    fn leading_coefficient_ignores_b_and_d() {
        for (b, d) in [(0, 1), (5, -3), (-7, 2)] {
            let quad = MobiusQuadruple::new(q(1), q(b), q(1), q(d)).unwrap();
            assert_eq!(leading_coefficient_n3([q(1); 4], &quad), q(4));
        }
        let quad = MobiusQuadruple::new(q(0), q(1), q(3), q(2)).unwrap();
        assert_eq!(
            leading_coefficient_n3([q(2), q(3), q(4), q(5)], &quad),
            q(5 * 27)
        );
    }

    #[test]
    fn cleared_form_matches_direct_substitution_exactly() {
        let cubic = [Q64::new(3, 2), q(-1), Q64::new(2, 7), q(4)];
        let quad = MobiusQuadruple::new(q(2), Q64::new(-1, 3), q(5), q(1)).unwrap();
        let p = mobius_substitute_cleared(cubic, &quad).unwrap();
        for n in [q(0), q(1), Q64::new(-2, 5), q(9)] {
            let t = quad.apply(n);
            let den = quad.c * n + quad.d;
            let direct = den
                * den
                * den
                * (cubic[0] * t * t * t + cubic[1] * t * t + cubic[2] * t + cubic[3]);
            assert_eq!(p.eval(n), direct);
        }
        assert_eq!(p.coeff(3), leading_coefficient_n3(cubic, &quad));
    }

    #[test]
    fn eliminated_bivariate_agrees_with_pointwise_substitution() {
        let abc = [Q64::new(3, 2), q(-1), Q64::new(2, 7)];
        let (b, c, d) = (Q64::new(-1, 3), q(5), q(1));
        let e = eliminated_bivariate(abc, b, c, d).unwrap();
        assert_eq!(e.excess(3, 2), 0.0);
        for m in [q(1), q(2), Q64::new(-3, 4)] {
            let g = -(abc[0] * m * m * m + abc[1] * m * m + abc[2] * m);
            let quad = MobiusQuadruple::new(m * c, b, c, d).unwrap();
            let p = mobius_substitute_cleared([abc[0], abc[1], abc[2], g], &quad).unwrap();
            assert_eq!(p.coeff(3), q(0));
            for n in [q(0), q(3), Q64::new(1, 9)] {
                assert_eq!(e.eval(m, n), p.eval(n));
            }
        }
    }

    #[test]
    fn complex_substitution_matches_direct() {
        let cubic = [
            C64::new(1.0, 0.5),
            C64::new(-2.0, 0.1),
            C64::new(0.3, -0.4),
            C64::new(0.7, 0.0),
        ];
        let quad = MobiusQuadruple::new(
            C64::new(0.2, 1.0),
            C64::new(-1.0, 0.3),
            C64::new(0.5, 0.5),
            C64::new(2.0, -0.1),
        )
        .unwrap();
        let p = mobius_substitute_cleared(cubic, &quad).unwrap();
        let n = C64::new(0.37, -1.2);
        let t = quad.apply(n);
        let den = quad.c * n + quad.d;
        let direct =
            den.powu(3) * (cubic[0] * t.powu(3) + cubic[1] * t * t + cubic[2] * t + cubic[3]);
        assert!((p.eval(n) - direct).norm() < 1e-12 * direct.norm());
    }
}
