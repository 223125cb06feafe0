//! Verification suites. Each returns its checks in a fixed order.

use drgeom::clifford::{build_irreducible, build_module, has_two_classes, irreducible_dim, Class};
use drgeom::curvature::{ConstantCurvature, CurvatureModel};
use drgeom::damek_ricci::{complement_basis, DRSpace, TangentVec};
use drgeom::einstein::{
    analyze_q, enumerate_h, gauss_einstein_residual, jacobi_focal_scan, solve_case_717, solve_case_78,
    sphere_einstein_radius, SphereModel,
};
use drgeom::geodesy::{
    build_example_15d, eigen_e, example_15d_vectors, is_homogeneous_tg, is_minus_one_subspace, k2_eigenvectors,
    l4_block_check, nabla_r_invariance_residual, r_invariance_residual, zdouble_closure, ClosureCase, Subspace,
};
use drgeom::linalg::{self, dot, norm, Mat};
use drgeom::octonion::{bianchi_residual, jacobi_xi, perp_xi_checks, sectional_range, CayleyPlane, CayleyTangent};
use drgeom::sampling::SampleRng;
use drgeom::surd::QuadSurd;
use drgeom::two_stein::{
    cauchy_schwarz_constant_curvature, coordinate_frame, op2_sphere_frame, op2_sphere_frame_f64, rank_sh_conclusion,
    TwoSteinFrame,
};
use drgeom::{rat, BigRational, Error, Scalar};
use num_traits::{Signed, Zero};

use crate::config::{Mode, RunConfig, SpaceSel};
use crate::report::{Check, Value};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Clifford,
    Curvature,
    Geodesy,
    Cayley,
    Einstein,
    Twostein,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Clifford => "clifford",
            Suite::Curvature => "curvature",
            Suite::Geodesy => "geodesy",
            Suite::Cayley => "cayley",
            Suite::Einstein => "einstein",
            Suite::Twostein => "twostein",
            Suite::All => "all",
        }
    }

    pub fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Clifford,
                Suite::Curvature,
                Suite::Geodesy,
                Suite::Cayley,
                Suite::Einstein,
                Suite::Twostein,
            ],
            s => vec![s],
        }
    }
}

/// Runs every member suite (in parallel) and concatenates the checks in
/// suite order. Under `all`, suites that need a Damek-Ricci space are
/// skipped when none is configured.
pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let members = suite.members();
    let lenient = suite == Suite::All;
    let results: Vec<Result<Vec<Check>, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = members.iter().map(|&m| s.spawn(move || run_one(m, cfg, lenient))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn run_one(suite: Suite, cfg: &RunConfig, lenient: bool) -> Result<Vec<Check>, CliError> {
    let need_dr = |what: &str| -> Result<Option<DRSpace>, CliError> {
        match cfg.space {
            Some(SpaceSel::DamekRicci { m, mult_plus, mult_minus }) => Ok(Some(DRSpace::new(
                build_module(m, mult_plus, mult_minus).map_err(|e| CliError::Config(e.to_string()))?,
            ))),
            _ if lenient => Ok(None),
            _ => Err(CliError::Config(format!("the {what} suite needs a damek_ricci space (--config or --space)"))),
        }
    };
    match suite {
        Suite::Clifford => clifford(cfg),
        Suite::Curvature => match cfg.space {
            Some(SpaceSel::Cayley { .. }) => Ok(cayley_curvature(cfg)),
            _ => Ok(need_dr("curvature")?.map(|sp| dr_curvature(&sp, cfg)).unwrap_or_default()),
        },
        Suite::Geodesy => Ok(need_dr("geodesy")?.map(|sp| geodesy(&sp, cfg)).unwrap_or_default()),
        Suite::Cayley => Ok(cayley(cfg)),
        Suite::Einstein => einstein(cfg),
        Suite::Twostein => twostein(cfg),
        Suite::All => unreachable!("expanded by run"),
    }
}

fn exact(cfg: &RunConfig) -> bool {
    cfg.mode == Mode::Exact
}

fn bool_residual(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

// ---------------------------------------------------------------- clifford

fn clifford(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "clifford";
    let mut out = Vec::new();
    for m in 1..=8 {
        let classes: &[Class] = if has_two_classes(m) { &[Class::Positive, Class::Negative] } else { &[Class::Positive] };
        for &class in classes {
            let sign = if class == Class::Positive { "+" } else { "-" };
            let rep = build_irreducible(m, class).map_err(|e| CliError::Config(e.to_string()))?;
            let r = rep.axiom_residual();
            let bad = r.skew + r.square + r.anticommute;
            out.push(Check::residual(S, format!("axioms m={m} class={sign}"), bad as f64, 0.0, "clifford-axioms"));
            let dim_ok = irreducible_dim(m).ok() == Some(rep.dim_v());
            out.push(
                Check::new(S, format!("dim_v m={m} class={sign}"), dim_ok, "clifford-dimension-table")
                    .with_value(Value::rational(&rat(rep.dim_v() as i64, 1))),
            );
            if has_two_classes(m) {
                let vol = rep.volume_element();
                let expected = Mat::<BigRational>::identity(rep.dim_v()).scale(&rat(class.sign(), 1));
                out.push(Check::new(S, format!("volume element m={m} class={sign}"), vol == expected, "clifford-class"));
            }
        }
    }
    if let Some(SpaceSel::DamekRicci { m, mult_plus, mult_minus }) = cfg.space {
        let rep = build_module(m, mult_plus, mult_minus).map_err(|e| CliError::Config(e.to_string()))?;
        let r = rep.axiom_residual();
        out.push(Check::residual(
            S,
            format!("axioms module m={m} ({mult_plus},{mult_minus})"),
            (r.skew + r.square + r.anticommute) as f64,
            0.0,
            "clifford-axioms",
        ));
        let expected = (mult_plus + mult_minus) * irreducible_dim(m).unwrap_or(0);
        out.push(
            Check::new(S, format!("dim_v module m={m} ({mult_plus},{mult_minus})"), rep.dim_v() == expected, "clifford-dimension-table")
                .with_value(Value::rational(&rat(rep.dim_v() as i64, 1))),
        );
    }
    Ok(out)
}

// ---------------------------------------------------------------- curvature

/// `-(dim v / 4 + m)`.
pub fn einstein_constant_exact(sp: &DRSpace) -> BigRational {
    -(rat(sp.dim_v() as i64, 4) + rat(sp.m() as i64, 1))
}

/// `Tr R_T / |T|^2` in exact arithmetic on a fixed rational vector.
pub fn einstein_constant_traced(sp: &DRSpace) -> BigRational {
    let flat: Vec<BigRational> = (0..sp.dim_s()).map(|k| rat(k as i64 % 5 - 2, (k as i64 % 3) + 1)).collect();
    let t = TangentVec::from_flat(&flat, sp.dim_v());
    sp.jacobi_op(&t).expect("shape matches").trace() / t.norm2()
}

/// Largest violation of antisymmetry, pair symmetry and the first Bianchi
/// identity over the given samples.
fn tensor_identities<T: Scalar, M: CurvatureModel<T>>(model: &M, samples: &[[Vec<T>; 4]]) -> (f64, f64) {
    let mut sym: f64 = 0.0;
    let mut bianchi: f64 = 0.0;
    for [x, y, z, w] in samples {
        let r = model.curvature4(x, y, z, w);
        let anti = r.clone() + model.curvature4(y, x, z, w);
        let pair = r - model.curvature4(z, w, x, y);
        sym = sym.max(anti.to_f64().abs()).max(pair.to_f64().abs());
        let b = linalg::add(&linalg::add(&model.curvature(x, y, z), &model.curvature(y, z, x)), &model.curvature(z, x, y));
        bianchi = bianchi.max(linalg::max_abs(&b));
    }
    (sym, bianchi)
}

fn rational_samples(n: usize, count: usize, seed: u64) -> Vec<[Vec<BigRational>; 4]> {
    (0..count)
        .map(|i| {
            let mut rng = SampleRng::new(seed, i as u64);
            [0, 1, 2, 3].map(|_| rng.rational_vec(n, 5, 3))
        })
        .collect()
}

fn float_samples(n: usize, count: usize, seed: u64) -> Vec<[Vec<f64>; 4]> {
    (0..count)
        .map(|i| {
            let mut rng = SampleRng::new(seed, i as u64);
            [0, 1, 2, 3].map(|_| rng.gaussian_vec(n))
        })
        .collect()
}

fn identity_checks<M: CurvatureModel<BigRational> + CurvatureModel<f64>>(
    s: &'static str,
    model: &M,
    n: usize,
    cfg: &RunConfig,
    out: &mut Vec<Check>,
) {
    let count = cfg.samples_or(30);
    let (sym, bianchi, tol) = if exact(cfg) {
        let (a, b) = tensor_identities::<BigRational, _>(model, &rational_samples(n, count, cfg.seed));
        (a, b, 0.0)
    } else {
        let (a, b) = tensor_identities::<f64, _>(model, &float_samples(n, count, cfg.seed));
        (a, b, cfg.tol)
    };
    out.push(Check::residual(s, "tensor symmetries", sym, tol, "curvature-symmetries"));
    out.push(Check::residual(s, "first bianchi identity", bianchi, tol, "first-bianchi"));
}

fn dr_curvature(sp: &DRSpace, cfg: &RunConfig) -> Vec<Check> {
    const S: &str = "curvature";
    let mut out = Vec::new();
    let count = cfg.samples_or(200);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..count {
        let mut rng = SampleRng::new(cfg.seed, i as u64);
        let t = TangentVec::from_flat(&rng.unit_vec(sp.dim_s()), sp.dim_v());
        for v in linalg::sym_eigen(&sp.jacobi_op(&t).expect("shape matches")).values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let violation = (-1.0 - lo).max(hi).max(0.0);
    out.push(
        Check::residual(S, "jacobi spectrum in [-1, 0]", violation, cfg.tol, "jacobi-spectrum-range")
            .with_note(format!("observed [{lo:.6}, {hi:.6}]")),
    );
    let probe = sp.two_stein_probe(count.max(2), cfg.seed);
    let c1 = einstein_constant_exact(sp);
    let c1_traced = einstein_constant_traced(sp);
    out.push(
        Check::new(S, "einstein constant c1", c1 == c1_traced && (probe.c1 - c1.to_f64()).abs() <= cfg.tol, "einstein-constant")
            .with_value(Value::rational(&c1)),
    );
    out.push(Check::residual(S, "Tr R_T constant on unit vectors", probe.maxdev_trace, cfg.tol, "two-stein-trace"));
    out.push(
        Check::residual(S, "Tr R_T^2 constant on unit vectors", probe.maxdev_trace_sq, cfg.tol, "two-stein-trace-square")
            .with_value(Value::float(probe.c2)),
    );
    identity_checks(S, sp, sp.dim_s(), cfg, &mut out);
    out
}

fn cayley_curvature(cfg: &RunConfig) -> Vec<Check> {
    const S: &str = "curvature";
    let plane = CayleyPlane::new(cfg.epsilon).expect("epsilon validated");
    let mut out = Vec::new();
    identity_checks(S, &plane, 16, cfg, &mut out);
    out
}

// ---------------------------------------------------------------- geodesy

fn draw_nonzero(rng: &mut SampleRng) -> f64 {
    let x = rng.gaussian();
    if x.abs() < 1e-3 {
        1.0
    } else {
        x
    }
}

fn example33(sp: &DRSpace, cfg: &RunConfig, out: &mut Vec<Check>) {
    const S: &str = "geodesy";
    const ANCHOR: &str = "example33-minus-one-subspace";
    let count = cfg.samples_or(10);
    for sign in [1i64, -1] {
        let mut worst_sec: f64 = 0.0;
        let mut worst_r: f64 = 0.0;
        let mut worst_nabla: f64 = 0.0;
        let mut minus_one = true;
        let mut homogeneous = false;
        for i in 0..count {
            let mut rng = SampleRng::new(cfg.seed, i as u64);
            let (a, b, s) = (draw_nonzero(&mut rng), draw_nonzero(&mut rng), draw_nonzero(&mut rng));
            let Ok(ex) = build_example_15d(sign, a, b, s) else {
                minus_one = false;
                continue;
            };
            for p in 0..4 {
                for q in (p + 1)..4 {
                    let k = ex.space.sectional(&ex.tangents[p], &ex.tangents[q]).unwrap_or(f64::NAN);
                    worst_sec = worst_sec.max((k + 1.0).abs());
                }
            }
            worst_r = worst_r.max(r_invariance_residual(&ex.space, &ex.subspace));
            worst_nabla = worst_nabla.max(nabla_r_invariance_residual(&ex.space, &ex.subspace));
            minus_one &= is_minus_one_subspace(&ex.space, &ex.subspace).map(|v| v.holds).unwrap_or(false);
            homogeneous |= is_homogeneous_tg(&ex.space, &ex.subspace).holds;
        }
        let tag = if sign == 1 { "+1" } else { "-1" };
        out.push(Check::new(S, format!("(-1)-subspace, eigenvalue {tag}"), minus_one, ANCHOR));
        out.push(Check::residual(S, format!("sectional curvatures -1, eigenvalue {tag}"), worst_sec, cfg.tol, ANCHOR));
        out.push(Check::residual(S, format!("R-invariance, eigenvalue {tag}"), worst_r, cfg.tol, "totally-geodesic-invariance"));
        out.push(Check::residual(
            S,
            format!("nabla R-invariance, eigenvalue {tag}"),
            worst_nabla,
            cfg.tol,
            "totally-geodesic-invariance",
        ));
        out.push(Check::new(S, format!("not homogeneous, eigenvalue {tag}"), !homogeneous, "homogeneity-criterion"));
        if exact(cfg) {
            let (_, _, t) = example_15d_vectors(sp, sign, rat(3, 5), rat(-7, 4), rat(2, 3)).expect("m = 6");
            let all = (0..4).all(|p| ((p + 1)..4).all(|q| sp.sectional(&t[p], &t[q]).ok() == Some(rat(-1, 1))));
            out.push(Check::new(S, format!("exact sectional curvatures, eigenvalue {tag}"), all, ANCHOR));
        }
    }
    let (_, v, _) = example_15d_vectors(sp, 1, rat(3, 1), rat(1, 1), rat(0, 1)).expect("m = 6");
    let zp: Vec<Vec<BigRational>> = (0..3).map(|k| unit(6, k)).collect();
    let case = zdouble_closure(sp, &v, &zp, 0.0).ok();
    out.push(
        Check::new(S, "closure case", case.as_ref().map(|c| c.case) == Some(ClosureCase::III), "closure-cases")
            .with_note(case.map(|c| format!("{} {:?}", c.case.label(), c.dims())).unwrap_or_default()),
    );
}

fn unit(n: usize, k: usize) -> Vec<BigRational> {
    let mut e = vec![rat(0, 1); n];
    e[k] = rat(1, 1);
    e
}

fn generic_geodesy(sp: &DRSpace, cfg: &RunConfig, out: &mut Vec<Check>) {
    const S: &str = "geodesy";
    let l = Subspace::a_plus_z(sp);
    out.push(Check::residual(S, "a + z R-invariance", r_invariance_residual(sp, &l), cfg.tol, "totally-geodesic-invariance"));
    out.push(Check::new(S, "a + z homogeneous", is_homogeneous_tg(sp, &l).holds, "homogeneity-criterion"));
    out.push(Check::new(
        S,
        "a + z is a (-1)-subspace",
        is_minus_one_subspace(sp, &l).map(|v| v.holds).unwrap_or(false),
        "minus-one-subspace",
    ));
    let m = sp.m();
    if m < 2 {
        return;
    }
    let count = cfg.samples_or(20);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    let mut errors = 0;
    for i in 0..count {
        let mut rng = SampleRng::new(cfg.seed, i as u64);
        let t = TangentVec::from_flat(&rng.unit_vec(sp.dim_s()), sp.dim_v());
        let k = sp.k_operator(&t.v, &t.y).expect("shape matches").matrix();
        let k2 = k.matmul(&k);
        let comp = complement_basis(&t.y);
        let restricted = Mat::from_fn(comp.len(), comp.len(), |a, b| dot(&comp[a], &k2.apply(&comp[b])));
        let eig = linalg::sym_eigen(&restricted);
        for (mu, coeffs) in eig.values.iter().zip(&eig.vectors) {
            if (mu + 1.0).abs() < 1e-6 {
                continue;
            }
            let mut x = vec![0.0; m];
            for (c, b) in coeffs.iter().zip(&comp) {
                x = linalg::axpy(&x, c, b);
            }
            let x = linalg::scale(&(1.0 / norm(&x)), &x);
            match eigen_e(sp, &t, &x, *mu) {
                Ok(rep) => {
                    pairs += rep.pairs.len();
                    worst = rep.pairs.iter().fold(worst, |w, p| w.max(p.residual));
                }
                Err(_) => errors += 1,
            }
        }
    }
    let mut c = Check::residual(S, "generic jacobi eigenvectors", worst, cfg.tol.max(1e-8), "jacobi-eigenvectors")
        .with_note(format!("{pairs} pairs, {errors} errors"));
    if errors > 0 || pairs == 0 {
        c = Check::new(S, "generic jacobi eigenvectors", false, "jacobi-eigenvectors").with_note(format!("{pairs} pairs, {errors} errors"));
    }
    out.push(c);

    // exact l4 block on rational configurations where a rational K^2
    // eigenvector is available
    let mut bad = 0;
    let mut checked = 0;
    for i in 0..count {
        let mut rng = SampleRng::new(cfg.seed ^ 0x14, i as u64);
        let v = rng.rational_vec(sp.dim_v(), 4, 3);
        let y = rng.rational_vec(m, 4, 3);
        if linalg::is_zero_vec(&v, 0.0) || linalg::is_zero_vec(&y, 0.0) {
            continue;
        }
        let candidate = if m == 2 {
            let x = vec![y[1].clone(), -y[0].clone()];
            sp.k_operator(&v, &y).ok().map(|k| {
                let k2x = k.scaled_square().apply(&x);
                let idx = x.iter().position(|c| !c.is_zero()).expect("y is nonzero");
                let mu = k2x[idx].clone() / x[idx].clone();
                (x, mu)
            })
        } else {
            k2_eigenvectors(sp, &v, &y, &rat(0, 1), 0.0).ok().and_then(|xs| xs.into_iter().next()).map(|x| (x, rat(0, 1)))
        };
        let Some((x, mu)) = candidate else { continue };
        let t = TangentVec::new(v, y, rng.small_rational(5, 2));
        checked += 1;
        let ok = if exact(cfg) {
            l4_block_check(sp, &t, &x, &mu, 0.0)
                .map(|r| r.image_residual.is_zero() && r.square_residual.is_zero())
                .unwrap_or(false)
        } else {
            // residuals scale like |V|^4 |Y|^2 |X|, so compare relatively
            let tf = TangentVec::new(linalg::to_f64_vec(&t.v), linalg::to_f64_vec(&t.y), t.s.to_f64());
            let xf = linalg::to_f64_vec(&x);
            let (nv, ny) = (dot(&tf.v, &tf.v), dot(&tf.y, &tf.y));
            let scale = 1.0 + nv * nv * (ny + mu.to_f64().abs()) * (1.0 + ny) * linalg::max_abs(&xf);
            l4_block_check(sp, &tf, &xf, &mu.to_f64(), 1e-9 * scale)
                .map(|r| r.image_residual.abs().max(r.square_residual.abs()) <= cfg.tol * scale)
                .unwrap_or(false)
        };
        bad += usize::from(!ok);
    }
    if checked > 0 {
        out.push(
            Check::residual(S, "l4 block of nabla R", bad as f64, 0.0, "l4-block")
                .with_note(format!("{checked} configurations")),
        );
    }
}

fn geodesy(sp: &DRSpace, cfg: &RunConfig) -> Vec<Check> {
    let mut out = Vec::new();
    if cfg.example33 {
        example33(sp, cfg, &mut out);
    }
    generic_geodesy(sp, cfg, &mut out);
    out
}

// ---------------------------------------------------------------- cayley

fn case_branch_checks(s: &'static str, eps: i64, out: &mut Vec<Check>) -> Result<(), CliError> {
    let core = |e: Error| CliError::Internal(e.to_string());
    let c78 = solve_case_78(eps).map_err(core)?;
    let c717 = solve_case_717(eps).map_err(core)?;
    if eps == -1 {
        out.push(
            Check::new(s, "no (7,8) einstein hypersurface", c78.branches.is_empty() && c78.alpha1_sq.is_negative(), "nonexistence-hyperbolic")
                .with_value(Value::rational(&c78.alpha1_sq))
                .with_note("value is alpha1^2"),
        );
        out.push(
            Check::new(s, "no (7,7,1) einstein hypersurface", c717.branches.is_empty() && c717.alpha1_sq.is_negative(), "nonexistence-hyperbolic")
                .with_value(Value::rational(&c717.alpha1_sq))
                .with_note("value is alpha1^2"),
        );
    } else {
        out.push(
            Check::new(s, "(7,8) branches", c78.branches.len() == 2, "case-78").with_value(Value::rational(&c78.alpha1_sq)),
        );
        out.push(
            Check::new(s, "(7,7,1) branches", c717.branches.len() == 2, "case-717").with_value(Value::rational(&c717.alpha1_sq)),
        );
    }
    Ok(())
}

fn cayley(cfg: &RunConfig) -> Vec<Check> {
    const S: &str = "cayley";
    let eps = cfg.epsilon;
    let mut out = Vec::new();
    let r = jacobi_xi::<BigRational>(eps).expect("epsilon validated");
    let mut diag: Vec<BigRational> = (0..16).map(|i| r[(i, i)].clone()).collect();
    let off_zero = (0..16).all(|i| (0..16).all(|j| i == j || r[(i, j)].is_zero()));
    diag.sort();
    let mut expected = vec![rat(0, 1)];
    expected.extend(std::iter::repeat_n(rat(eps, 1), 7));
    expected.extend(std::iter::repeat_n(rat(eps, 4), 8));
    expected.sort();
    out.push(Check::new(S, "R_xi spectrum {0, eps x7, eps/4 x8}", off_zero && diag == expected, "cayley-jacobi-xi"));

    let count = cfg.samples_or(200);
    let perp = perp_xi_checks(eps, count.min(100), cfg.seed).expect("epsilon validated");
    out.push(Check::new(S, "eigenspace triples orthogonal to xi", perp.exact, "cayley-eigenspace-orthogonality"));
    let mut bianchi = true;
    for i in 0..count.min(100) {
        let mut rng = SampleRng::new(cfg.seed ^ 0xb1, i as u64);
        let mut draw = || CayleyTangent::from_flat(&rng.rational_vec(16, 5, 3), eps);
        let (x, y, z) = (draw(), draw(), draw());
        bianchi &= bianchi_residual(&x, &y, &z).map(|b| b.iter().all(|c| c.is_zero())).unwrap_or(false);
    }
    out.push(Check::residual(S, "first bianchi identity", bool_residual(bianchi), 0.0, "first-bianchi"));

    let (lo, hi) = sectional_range(&CayleyPlane::new(eps).expect("epsilon validated"), count, cfg.seed);
    let (a, b) = if eps == 1 { (0.25, 1.0) } else { (-1.0, -0.25) };
    let violation = (a - lo).max(hi - b).max(0.0);
    out.push(
        Check::residual(S, "sectional curvature range", violation, cfg.tol, "cayley-sectional-range")
            .with_note(format!("observed [{lo:.6}, {hi:.6}], bounds [{a}, {b}]")),
    );
    if let Err(e) = case_branch_checks(S, eps, &mut out) {
        out.push(Check::new(S, "case solvers", false, "case-78").with_note(e.to_string()));
    }
    out
}

// ---------------------------------------------------------------- einstein

fn einstein(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "einstein";
    let core = |e: Error| CliError::Internal(e.to_string());
    let mut out = Vec::new();
    case_branch_checks(S, cfg.epsilon, &mut out)?;
    if cfg.epsilon == -1 {
        let en = enumerate_h(-1, 0.0).map_err(core)?;
        out.push(
            Check::new(S, "no einstein sphere in the hyperbolic plane", sphere_free(&en), "nonexistence-hyperbolic")
                .with_note(format!("{} candidate mean curvatures", en.solutions.len())),
        );
        return Ok(out);
    }
    let sol = solve_case_78(1).map_err(core)?;
    let br = sol.branches.iter().find(|b| b.eps_prime == 1).ok_or_else(|| CliError::Internal("no (7,8) branch".into()))?;
    let (a1, a3) = (br.alphas[0].clone(), br.alphas[1].clone());
    let sr = sphere_einstein_radius().map_err(core)?;
    out.push(
        Check::residual(S, "cot_r0", (sr.cot_r0 - a1.to_f64()).abs(), cfg.tol, "einstein-sphere-radius")
            .with_value(Value::surd(&a1))
            .with_note(format!("scan gives {}", crate::report::decimal(sr.cot_r0))),
    );
    out.push(Check::new(S, "alpha3 of the (7,8) branch", true, "case-78").with_value(Value::surd(&a3)));
    out.push(Check::new(S, "mean curvature of the (7,8) branch", true, "case-78").with_value(Value::surd(&br.h)));
    out.push(Check::new(S, "gauss constant of the (7,8) branch", true, "case-78").with_value(Value::surd(&br.c)));
    let hs = SphereModel::new(sr.r0).map_err(core)?.to_hypersurface();
    out.push(Check::residual(S, "gauss einstein residual at r0", gauss_einstein_residual(&hs), cfg.tol, "einstein-sphere-radius"));
    out.push(Check::residual(
        S,
        "alpha3 = cot(r0/2)/2",
        (a3.to_f64() - 0.5 / (0.5 * sr.r0).tan()).abs(),
        cfg.tol,
        "einstein-sphere-radius",
    ));
    match jacobi_focal_scan(a1.to_f64(), a3.to_f64(), 2000, 1e-9) {
        Ok(scan) => out.push(
            Check::residual(S, "focal radius", (scan.r - sr.r0).abs(), cfg.tol, "focal-map-rank")
                .with_value(Value::float(scan.r))
                .with_note(format!("rank {} at r0, {} elsewhere", scan.rank, scan.min_rank_elsewhere)),
        ),
        Err(e) => out.push(Check::new(S, "focal radius", false, "focal-map-rank").with_note(e.to_string())),
    }
    let en = enumerate_h(1, br.c.to_f64()).map_err(core)?;
    let found = en.solutions.iter().any(|s| s.q == [7, 0, 8, 0] && (s.h - br.h.to_f64()).abs() <= cfg.tol);
    out.push(
        Check::new(S, "mean curvature enumeration finds the sphere", found, "mean-curvature-enumeration")
            .with_note(format!("{} solutions, {} rejected", en.solutions.len(), en.rejected.len())),
    );
    let c717 = solve_case_717(1).map_err(core)?;
    for br in c717.branches.iter().filter(|b| b.eps_prime == 1) {
        for (name, x) in ["alpha1", "alpha3", "alpha4"].iter().zip(&br.alphas) {
            out.push(Check::new(S, format!("(7,7,1) {name}"), true, "case-717").with_value(Value::surd(x)));
        }
    }
    let qa = analyze_q().map_err(core)?;
    out.push(
        Check::new(S, "det Q nonzero", !qa.det_q.is_zero(), "case-717-excluded")
            .with_value(Value::rational(&qa.det_q))
            .with_note(format!("quoted {}; Q = printed integer matrix times {}", qa.det_quoted, qa.scale)),
    );
    Ok(out)
}

fn sphere_free(en: &drgeom::einstein::HEnumeration) -> bool {
    !en.solutions.iter().any(|s| s.q == [7, 0, 8, 0])
}

// ---------------------------------------------------------------- twostein

fn twostein(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    const S: &str = "twostein";
    let core = |e: Error| CliError::Internal(e.to_string());
    let mut out = Vec::new();
    let count = cfg.samples_or(20);
    if exact(cfg) {
        let fr = op2_sphere_frame().map_err(core)?;
        let mut bad = [false; 8];
        let mut names = [""; 8];
        for i in 0..count.min(3) {
            let x: Vec<QuadSurd> =
                SampleRng::new(cfg.seed, i as u64).rational_vec(15, 3, 2).into_iter().map(QuadSurd::rational).collect();
            for (k, id) in fr.coefficient_identities(&x).into_iter().enumerate() {
                names[k] = id.name;
                bad[k] |= !id.value.is_zero();
            }
        }
        for (name, b) in names.iter().zip(bad) {
            out.push(Check::residual(S, format!("OP2 sphere {name}"), bool_residual(!b), 0.0, "hypersurface-t-expansion"));
        }
        out.push(Check::new(S, "OP2 sphere trace identity", fr.trace_identity_residual().is_zero(), "hypersurface-trace-identity")
            .with_value(Value::surd(&fr.c1))
            .with_note("value is c1 of the sphere"));
    } else {
        let fr = op2_sphere_frame_f64().map_err(core)?;
        let mut worst = [0.0f64; 8];
        let mut names = [""; 8];
        for i in 0..count {
            let x = SampleRng::new(cfg.seed, i as u64).unit_vec(15);
            for (k, id) in fr.coefficient_identities(&x).into_iter().enumerate() {
                names[k] = id.name;
                worst[k] = worst[k].max(id.value.abs());
            }
        }
        for (name, w) in names.iter().zip(worst) {
            out.push(Check::residual(S, format!("OP2 sphere {name}"), w, cfg.tol, "hypersurface-t-expansion"));
        }
        out.push(
            Check::residual(S, "OP2 sphere trace identity", fr.trace_identity_residual().abs(), cfg.tol, "hypersurface-trace-identity")
                .with_value(Value::float(fr.c1)),
        );
    }
    let cs = cauchy_schwarz_constant_curvature(&rat(9, 1), &rat(15, 2), 16, 0.0);
    out.push(Check::new(S, "OP2 constants are not those of a space form", !cs, "cauchy-schwarz-equality"));

    let frame = |n: usize, rho: BigRational, d: Vec<BigRational>| {
        let ct1 = rho.clone() * rat(n as i64 - 1, 1);
        let ct2 = rho.clone() * rho.clone() * rat(n as i64 - 1, 1);
        TwoSteinFrame::new(ConstantCurvature { n, rho }, coordinate_frame(n, n - 1), Mat::diagonal(&d), ct1, ct2, None, None)
    };
    let n = 6;
    let rho = rat(-1, 1);
    let flat = frame(n, rho.clone(), vec![rat(0, 1); n - 1]).map_err(core)?;
    let x = SampleRng::new(cfg.seed, 0).rational_vec(n - 1, 5, 3);
    let all_zero = flat.coefficient_identities(&x).iter().all(|id| id.value.is_zero());
    out.push(Check::residual(S, "totally geodesic space-form frame identities", bool_residual(all_zero), 0.0, "hypersurface-t-expansion"));
    let mut d = vec![rat(0, 1); n - 1];
    d[0] = rat(5, 2);
    let one = frame(n, rho.clone(), d.clone()).map_err(core)?;
    let verdict = rank_sh_conclusion(&one, 0.0);
    out.push(
        Check::new(S, "rank one shape operator accepted", verdict.as_ref().map(|v| v.holds()).unwrap_or(false), "shape-operator-rank")
            .with_note(verdict.map(|v| format!("rank {}", v.rank)).unwrap_or_else(|e| e.to_string())),
    );
    d[1] = rat(5, 2);
    let two = frame(n, rho, d).map_err(core)?;
    let rejected = matches!(rank_sh_conclusion(&two, 0.0), Err(Error::Precondition(_)));
    out.push(Check::new(S, "rank two shape operator rejected", rejected, "shape-operator-rank"));

    if let Some(SpaceSel::DamekRicci { m, mult_plus, mult_minus }) = cfg.space {
        let sp = DRSpace::new(build_module(m, mult_plus, mult_minus).map_err(|e| CliError::Config(e.to_string()))?);
        let probe = sp.two_stein_probe(count.max(2), cfg.seed);
        out.push(
            Check::residual(S, "configured space is 2-stein", probe.maxdev_trace.max(probe.maxdev_trace_sq), cfg.tol, "two-stein-trace")
                .with_value(Value::rational(&einstein_constant_exact(&sp)))
                .with_note(format!("c2 = {}", crate::report::decimal(probe.c2))),
        );
    }
    Ok(out)
}
