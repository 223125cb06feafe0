use drgeom::clifford::{build_irreducible, Class};
use drgeom::curvature::{ConstantCurvature, CurvatureModel};
use drgeom::damek_ricci::DRSpace;
use drgeom::linalg::{self, dot, Mat};
use drgeom::octonion::{CayleyPlane, Octonion};
use drgeom::two_stein::{coordinate_frame, TwoSteinFrame};
use drgeom::{rat, BigRational};
use proptest::prelude::*;

fn q(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| rat(x, 3)).collect()
}

fn small(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn octonion_norm_is_multiplicative(a in small(8), b in small(8)) {
        let (a, b) = (Octonion::from_slice(&q(&a)), Octonion::from_slice(&q(&b)));
        prop_assert_eq!(a.mul(&b).norm2(), a.norm2() * b.norm2());
    }

    #[test]
    fn octonions_are_alternative(a in small(8), b in small(8)) {
        let (a, b) = (Octonion::from_slice(&q(&a)), Octonion::from_slice(&q(&b)));
        prop_assert_eq!(a.mul(&a).mul(&b), a.mul(&a.mul(&b)));
        prop_assert_eq!(b.mul(&a).mul(&a), b.mul(&a.mul(&a)));
    }

    #[test]
    fn clifford_square_is_minus_norm(m in 1usize..=8, z in small(8), v in small(16)) {
        let rep = build_irreducible(m, Class::Positive).unwrap();
        let z = q(&z[..m]);
        let v = q(&v[..rep.dim_v()]);
        let jj = rep.j_apply(&z, &rep.j_apply(&z, &v));
        prop_assert_eq!(jj, linalg::scale(&-dot(&z, &z), &v));
    }

    #[test]
    fn damek_ricci_curvature_symmetries(x in small(15), y in small(15), z in small(15), w in small(15)) {
        // m = 5 is not symmetric
        let sp = DRSpace::new(build_irreducible(5, Class::Positive).unwrap());
        let n = sp.dim_s();
        let (x, y, z, w) = (q(&x[..n]), q(&y[..n]), q(&z[..n]), q(&w[..n]));
        let r = CurvatureModel::<BigRational>::curvature4(&sp, &x, &y, &z, &w);
        prop_assert_eq!(r.clone(), -sp.curvature4(&y, &x, &z, &w));
        prop_assert_eq!(r, sp.curvature4(&z, &w, &x, &y));
    }

    #[test]
    fn cayley_sectional_curvature_is_pinched(x in small(16), y in small(16)) {
        let plane = CayleyPlane::new(1).unwrap();
        let (x, y): (Vec<f64>, Vec<f64>) = (x.iter().map(|&a| a as f64).collect(), y.iter().map(|&a| a as f64).collect());
        let gram = dot(&x, &x) * dot(&y, &y) - dot(&x, &y).powi(2);
        prop_assume!(gram > 1e-6);
        let k = CurvatureModel::<f64>::curvature4(&plane, &y, &x, &x, &y) / gram;
        prop_assert!((0.25 - 1e-9..=1.0 + 1e-9).contains(&k), "{}", k);
    }

    #[test]
    fn space_form_expansion_is_exact(x in small(6), rho in -4i64..=4) {
        let n = 7;
        let rho = rat(rho, 2);
        let ct1 = rho.clone() * rat(6, 1);
        let ct2 = rho.clone() * rho.clone() * rat(6, 1);
        let fr = TwoSteinFrame::new(
            ConstantCurvature { n, rho },
            coordinate_frame(n, 2),
            Mat::zeros(n - 1, n - 1),
            ct1,
            ct2,
            None,
            None,
        )
        .unwrap();
        let x = q(&x);
        for d in [1, 2] {
            prop_assert_eq!(fr.jacobi_t_expansion(&x, d).unwrap(), fr.expected_expansion(&x, d).unwrap());
        }
    }
}
