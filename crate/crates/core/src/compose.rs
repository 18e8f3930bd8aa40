//! Stationary-point composition of central actions and the groupoid product.
//!
//! Two actions compose through the midpoint triangle area: the composed
//! value at a center `m` is the stationary value of
//! `f1(m1) + f2(m2) + Δ(m, m1, m2)` over the two auxiliary centers. Chains
//! are folded left-associatively, with a direct quadrilateral cross-check
//! for triples.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::areas::{quad_area, triangle_area, triangle_constraint};
use crate::central::{forward_map, CentralAction};
use crate::error::{CentralError, Result};
use crate::scalar::{half, lit, Real};
use crate::spaces::{
    self, distance, exp_vec, log_map, midpoint, mink, parallel_transport, tangent_basis,
    tangent_components, ModelSpace, Point, TangentVector,
};

/// Residual target for the stationarity solver.
const STAT_TOL: f64 = 1e-12;
/// Residual accepted as a stationary point.
const STAT_ACCEPT: f64 = 1e-10;
const STAT_MAX_ITERS: usize = 80;
const FD_H: f64 = 1e-6;
/// Number of perturbed restarts used for branch reporting.
const RESTARTS: usize = 4;

/// Outcome of a stationary composition.
#[derive(Debug, Clone)]
pub struct CompositionResult<T: Real> {
    /// Composed action value at the requested center, modulo constants.
    pub value: T,
    /// Auxiliary centers at the stationary point (`[m1, m2]` for a pair,
    /// one per factor for chains).
    pub stationary_points: Vec<Point<T>>,
    /// Gradient norm at the solution.
    pub residual: T,
    pub iterations: usize,
    /// Human-readable note about branch multiplicity.
    pub branch_note: String,
}

struct SplitMix(u64);
impl SplitMix {
    fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        ((z ^ (z >> 31)) as f64) / (u64::MAX as f64)
    }
}

/// Analytic gradient of `Δ(m, m1, m2)` in its second slot.
fn grad_triangle_m1<T: Real>(m: &Point<T>, m1: &Point<T>, m2: &Point<T>) -> Result<Vector3<T>> {
    triangle_constraint(m, m1, m2)?;
    match m.space() {
        ModelSpace::Plane | ModelSpace::Torus => {
            let b = if m.space() == ModelSpace::Plane {
                let (bp, bq) = m2.to_flat();
                let (mp, mq) = m.to_flat();
                (bp - mp, bq - mq)
            } else {
                let (bp, bq) = m2.to_flat();
                let (mp, mq) = m.to_flat();
                (spaces::torus_diff(bp, mp), spaces::torus_diff(bq, mq))
            };
            Ok(Vector3::new(lit::<T>(2.0) * b.1, lit::<T>(-2.0) * b.0, T::zero()))
        }
        ModelSpace::Sphere => {
            let d = m.coords().dot(&m1.coords().cross(&m2.coords()));
            let w2 = T::one() - d * d;
            if w2 <= lit(1e-12) {
                return Err(CentralError::InvalidMidpoints {
                    constraint: "triangle at the half-sphere branch point",
                });
            }
            let dots = m.coords().dot(&m1.coords()) + m1.coords().dot(&m2.coords())
                + m2.coords().dot(&m.coords());
            let sigma = if dots >= T::zero() { T::one() } else { -T::one() };
            let dd = m2.coords().cross(&m.coords());
            let t = dd - m1.coords() * dd.dot(&m1.coords());
            Ok(t * (lit::<T>(2.0) / (sigma * w2.sqrt())))
        }
        ModelSpace::Hyperbolic => {
            let d = m.coords().dot(&m1.coords().cross(&m2.coords()));
            let w2 = T::one() - d * d;
            if w2 <= lit(1e-12) {
                return Err(CentralError::InvalidMidpoints {
                    constraint: "midpoint determinant must stay below one in modulus",
                });
            }
            let dd = m2.coords().cross(&m.coords());
            let amb = Vector3::new(dd.x, dd.y, -dd.z);
            let t = amb + m1.coords() * mink(&amb, &m1.coords());
            Ok(t * (lit::<T>(2.0) / w2.sqrt()))
        }
    }
}

/// Analytic gradient of `Δ(m, m1, m2)` in its third slot.
fn grad_triangle_m2<T: Real>(m: &Point<T>, m1: &Point<T>, m2: &Point<T>) -> Result<Vector3<T>> {
    // Δ(m, m1, m2) = -Δ(m, m2, m1); differentiate the swapped form
    grad_triangle_m1(m, m2, m1).map(|g| -g)
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_subset().unwrap_or(f64::NAN)
}

/// Generic damped Newton on a stationarity system over several points.
///
/// `grad` returns the stacked tangent components of the objective gradient;
/// the Jacobian is taken by central differences of `grad`.
fn stationary_solve<T: Real>(
    pts: Vec<Point<T>>,
    grad: &dyn Fn(&[Point<T>]) -> Result<DVector<T>>,
) -> Result<(Vec<Point<T>>, T, usize)> {
    stationary_solve_tol(pts, grad, lit(STAT_TOL), lit(STAT_ACCEPT))
}

fn stationary_solve_tol<T: Real>(
    mut pts: Vec<Point<T>>,
    grad: &dyn Fn(&[Point<T>]) -> Result<DVector<T>>,
    target: T,
    accept: T,
) -> Result<(Vec<Point<T>>, T, usize)> {
    let n = pts.len();
    let dim = 2 * n;
    let h = lit::<T>(FD_H);
    let mut r = grad(&pts)?;
    let mut rn = r.norm();
    let mut iterations = 0usize;
    let mut stall = 0usize;

    while rn > target && iterations < STAT_MAX_ITERS {
        iterations += 1;
        let mut jac = DMatrix::<T>::zeros(dim, dim);
        let mut ok = true;
        'cols: for k in 0..n {
            let (e1, e2) = tangent_basis(&pts[k]);
            for (sub, e) in [e1, e2].into_iter().enumerate() {
                let mut plus = pts.clone();
                let mut minus = pts.clone();
                plus[k] = exp_vec(&pts[k], &(e * h))?;
                minus[k] = exp_vec(&pts[k], &(e * -h))?;
                let (rp, rm) = match (grad(&plus), grad(&minus)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => {
                        ok = false;
                        break 'cols;
                    }
                };
                let col = (rp - rm) / (lit::<T>(2.0) * h);
                jac.set_column(2 * k + sub, &col);
            }
        }
        let step = if ok { jac.lu().solve(&(-&r)) } else { None };
        let Some(step) = step else {
            return Err(CentralError::NoConvergence { residual: to_f64(rn) });
        };

        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..25 {
            let mut trial = pts.clone();
            let mut feasible = true;
            for k in 0..n {
                let (e1, e2) = tangent_basis(&pts[k]);
                let d = e1 * (step[2 * k] * lambda) + e2 * (step[2 * k + 1] * lambda);
                match exp_vec(&pts[k], &d) {
                    Ok(p) => trial[k] = p,
                    Err(_) => {
                        feasible = false;
                        break;
                    }
                }
            }
            if feasible {
                if let Ok(rt) = grad(&trial) {
                    let rtn = rt.norm();
                    if rtn.is_finite() && (rtn < rn || rtn <= target) {
                        pts = trial;
                        r = rt;
                        rn = rtn;
                        accepted = true;
                        break;
                    }
                }
            }
            lambda = half(lambda);
        }
        if !accepted {
            stall += 1;
            if stall >= 3 {
                break;
            }
        } else {
            stall = 0;
        }
    }

    if rn > accept || !rn.is_finite() {
        return Err(CentralError::NoConvergence { residual: to_f64(rn) });
    }
    Ok((pts, rn, iterations))
}

/// Stacked stationarity gradient of the two-action objective.
fn pair_gradient<T: Real>(
    f1: &CentralAction<T>,
    f2: &CentralAction<T>,
    m: &Point<T>,
    pts: &[Point<T>],
) -> Result<DVector<T>> {
    let (m1, m2) = (&pts[0], &pts[1]);
    let g1 = f1.gradient(m1)? + grad_triangle_m1(m, m1, m2)?;
    let g2 = f2.gradient(m2)? + grad_triangle_m2(m, m1, m2)?;
    let (a1, b1) = tangent_components(m1, &g1);
    let (a2, b2) = tangent_components(m2, &g2);
    Ok(DVector::from_vec(vec![a1, b1, a2, b2]))
}

fn pair_value<T: Real>(
    f1: &CentralAction<T>,
    f2: &CentralAction<T>,
    m: &Point<T>,
    pts: &[Point<T>],
) -> Result<T> {
    Ok(f1.eval(&pts[0]) + f2.eval(&pts[1]) + triangle_area(m, &pts[0], &pts[1])?)
}

/// Seed the auxiliary centers from the generated maps: find a source `a`
/// whose two-step image `c` is geodesically centered on `m`.
fn seed_from_maps<T: Real>(
    f1: &CentralAction<T>,
    f2: &CentralAction<T>,
    m: &Point<T>,
) -> (Point<T>, Point<T>) {
    let mut a = *m;
    let mut bguess = *m;
    let mut cguess = *m;
    let mut seed = (*m, *m);
    // a loose fixed-point pass: the stationarity solver does the polishing
    for _ in 0..12 {
        let Ok(s1) = forward_map(f1, &a, &bguess) else { return seed };
        let b = s1.pair.plus;
        let Ok(s2) = forward_map(f2, &b, &cguess) else { return seed };
        let c = s2.pair.plus;
        bguess = s1.center;
        cguess = s2.center;
        let (Ok(mid1), Ok(mid2)) = (midpoint(&a, &b), midpoint(&b, &c)) else {
            return seed;
        };
        seed = (mid1, mid2);
        let Ok(mc) = midpoint(&a, &c) else { return seed };
        let Ok(delta) = log_map(&mc, m) else { return seed };
        if delta.norm() < lit(1e-5) {
            return seed;
        }
        let Ok(shift) = parallel_transport(&mc, &a, &delta.vec) else { return seed };
        let Ok(next) = exp_vec(&a, &shift) else { return seed };
        a = next;
    }
    seed
}

fn solve_pair<T: Real>(
    f1: &CentralAction<T>,
    f2: &CentralAction<T>,
    m: &Point<T>,
    seed: (Point<T>, Point<T>),
) -> Result<CompositionResult<T>> {
    let grad = |pts: &[Point<T>]| pair_gradient(f1, f2, m, pts);
    let (pts, residual, iterations) = stationary_solve(vec![seed.0, seed.1], &grad)?;
    let value = pair_value(f1, f2, m, &pts)?;
    Ok(CompositionResult {
        value,
        stationary_points: pts,
        residual,
        iterations,
        branch_note: String::new(),
    })
}

/// Compose two central actions at the center `m`.
///
/// Without an explicit starting point the auxiliary centers are seeded from
/// the generated maps and up to four perturbed restarts probe for further
/// stationary branches; distinct branches are reported, never averaged.
pub fn compose2<T: Real>(
    f1: &CentralAction<T>,
    f2: &CentralAction<T>,
    m: &Point<T>,
    init: Option<(Point<T>, Point<T>)>,
) -> Result<CompositionResult<T>> {
    if f1.space() != m.space() || f2.space() != m.space() {
        return Err(CentralError::SpaceMismatch);
    }
    if let Some(seed) = init {
        let mut out = solve_pair(f1, f2, m, seed)?;
        out.branch_note = "caller-provided start".into();
        return Ok(out);
    }
    let seed = seed_from_maps(f1, f2, m);
    let mut primary = solve_pair(f1, f2, m, seed)?;

    // deterministic perturbed restarts probe for other branches
    let mut rng = SplitMix(0x5EED_0001);
    let mut extra = 0usize;
    for _ in 0..RESTARTS {
        let jitter = |p: &Point<T>, rng: &mut SplitMix| -> Point<T> {
            let (e1, e2) = tangent_basis(p);
            let s = 0.15;
            let d = e1 * lit::<T>((rng.next() - 0.5) * s) + e2 * lit::<T>((rng.next() - 0.5) * s);
            exp_vec(p, &d).unwrap_or(*p)
        };
        let s0 = jitter(&seed.0, &mut rng);
        let s1 = jitter(&seed.1, &mut rng);
        if let Ok(alt) = solve_pair(f1, f2, m, (s0, s1)) {
            let same = distance(&alt.stationary_points[0], &primary.stationary_points[0])
                .map(|d| d < lit(1e-7))
                .unwrap_or(false)
                && distance(&alt.stationary_points[1], &primary.stationary_points[1])
                    .map(|d| d < lit(1e-7))
                    .unwrap_or(false);
            if !same {
                extra += 1;
            }
        }
    }
    primary.branch_note = if extra == 0 {
        "single stationary branch".into()
    } else {
        format!("{} additional stationary branch(es) found near the seed", extra)
    };
    Ok(primary)
}

/// The composed action as a callable body; evaluation failures surface as
/// NaN. Successive evaluations warm-start from the last stationary points,
/// which keeps the nested solves cheap on difference stencils.
pub fn composed_action<T: Real>(f1: CentralAction<T>, f2: CentralAction<T>) -> CentralAction<T> {
    let space = f1.space();
    let cache: std::sync::Mutex<Option<(Point<T>, (Point<T>, Point<T>))>> =
        std::sync::Mutex::new(None);
    CentralAction::from_fn(space, move |p: &Point<T>| {
        let warm = cache
            .lock()
            .ok()
            .and_then(|g| *g)
            .filter(|(c, _)| matches!(distance(c, p), Ok(d) if d < lit(0.2)))
            .map(|(_, pts)| pts);
        let seed = warm.unwrap_or_else(|| seed_from_maps(&f1, &f2, p));
        match solve_pair(&f1, &f2, p, seed) {
            Ok(r) => {
                if let Ok(mut g) = cache.lock() {
                    *g = Some((*p, (r.stationary_points[0], r.stationary_points[1])));
                }
                r.value
            }
            Err(_) => lit(f64::NAN),
        }
    })
}

/// Compose an ordered list of central actions at `m` by left-associated
/// pairwise composition; for three factors the result is cross-checked
/// against the direct quadrilateral objective when its constraints hold.
pub fn compose_chain<T: Real>(fs: &[CentralAction<T>], m: &Point<T>) -> Result<CompositionResult<T>> {
    match fs.len() {
        0 => Err(CentralError::InvalidSpec("empty composition chain".into())),
        1 => Ok(CompositionResult {
            value: fs[0].eval(m),
            stationary_points: vec![],
            residual: T::zero(),
            iterations: 0,
            branch_note: "single factor".into(),
        }),
        2 => {
            let mut out = compose2(&fs[0], &fs[1], m, None)?;
            out.branch_note = format!("pair composition; {}", out.branch_note);
            Ok(out)
        }
        _ => {
            // left fold: acc_k = f1 △ ... △ f_k
            let mut stages: Vec<CentralAction<T>> = vec![fs[0].clone()];
            for f in &fs[1..] {
                let prev = stages.last().unwrap().clone();
                stages.push(composed_action(prev, f.clone()));
            }
            // top-level stationary data (single-branch solves inside the fold)
            let top = {
                let seed = seed_from_maps(&stages[fs.len() - 2], &fs[fs.len() - 1], m);
                solve_pair(&stages[fs.len() - 2], &fs[fs.len() - 1], m, seed)?
            };
            let mut centers = vec![top.stationary_points[1]];
            let mut inner_center = top.stationary_points[0];
            let mut residual = top.residual;
            let mut iterations = top.iterations;
            for k in (1..fs.len() - 1).rev() {
                let stage = {
                    let seed = seed_from_maps(&stages[k - 1], &fs[k], &inner_center);
                    solve_pair(&stages[k - 1], &fs[k], &inner_center, seed)?
                };
                centers.push(stage.stationary_points[1]);
                residual = residual.max(stage.residual);
                iterations += stage.iterations;
                inner_center = stage.stationary_points[0];
            }
            centers.push(inner_center);
            centers.reverse();

            let mut note = "left-associated fold".to_string();
            if fs.len() == 3 {
                if let Some(direct) = direct_triple_value(fs, m, &centers) {
                    let dev = (direct - top.value).abs();
                    if dev > lit(1e-6) {
                        return Err(CentralError::BranchMismatch { deviation: to_f64(dev) });
                    }
                    note = format!(
                        "left-associated fold; quadrilateral cross-check deviation {:.3e}",
                        to_f64(dev)
                    );
                }
            }
            Ok(CompositionResult {
                value: top.value,
                stationary_points: centers,
                residual,
                iterations,
                branch_note: note,
            })
        }
    }
}

/// Direct objective of a triple composition through the quadrilateral area,
/// solved from the folded solution; `None` when the constraints fail there.
fn direct_triple_value<T: Real>(
    fs: &[CentralAction<T>],
    m: &Point<T>,
    seed: &[Point<T>],
) -> Option<T> {
    let objective = |pts: &[Point<T>]| -> Result<T> {
        let mut v = quad_area(&pts[0], &pts[1], &pts[2], m)?;
        for (f, p) in fs.iter().zip(pts.iter()) {
            v += f.eval(p);
        }
        Ok(v)
    };
    objective(seed).ok()?;
    let grad = |pts: &[Point<T>]| -> Result<DVector<T>> {
        let h = lit::<T>(FD_H);
        let mut out = DVector::zeros(2 * pts.len());
        for k in 0..pts.len() {
            let (e1, e2) = tangent_basis(&pts[k]);
            for (sub, e) in [e1, e2].into_iter().enumerate() {
                let mut plus = pts.to_vec();
                let mut minus = pts.to_vec();
                plus[k] = exp_vec(&pts[k], &(e * h))?;
                minus[k] = exp_vec(&pts[k], &(e * -h))?;
                out[2 * k + sub] =
                    (objective(&plus)? - objective(&minus)?) / (lit::<T>(2.0) * h);
            }
        }
        Ok(out)
    };
    // finite differences floor the reachable residual around 1e-9
    let (pts, _res, _it) =
        stationary_solve_tol(seed.to_vec(), &grad, lit(1e-11), lit(1e-8)).ok()?;
    objective(&pts).ok()
}

/// Groupoid product of two composable centered tangent elements.
pub fn groupoid_product<T: Real>(
    t1: &TangentVector<T>,
    t2: &TangentVector<T>,
) -> Result<TangentVector<T>> {
    if t1.base.space() != t2.base.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let plus1 = exp_vec(&t1.base, &t1.vec)?;
    let minus2 = exp_vec(&t2.base, &(-t2.vec))?;
    if distance(&plus1, &minus2)? > lit(1e-9) {
        return Err(CentralError::NotComposable);
    }
    let minus1 = exp_vec(&t1.base, &(-t1.vec))?;
    let plus2 = exp_vec(&t2.base, &t2.vec)?;
    spaces::symmetric_exp_inverse(&spaces::PointPair::new(minus1, plus2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{exact_transform, make_action, ActionSpec};
    use crate::central::{central_map, generated_pair};
    use crate::spaces::PointPair;
    use approx::assert_abs_diff_eq;

    type P = Point<f64>;

    fn translation(xi: [f64; 2]) -> CentralAction<f64> {
        make_action(&ActionSpec::FlatTranslation { xi }).unwrap()
    }

    fn wedge(a: [f64; 2], b: [f64; 2]) -> f64 {
        a[0] * b[1] - a[1] * b[0]
    }

    #[test]
    fn plane_translations_compose_in_closed_form() {
        let xi1 = [0.7, -0.3];
        let xi2 = [-0.2, 0.9];
        let f1 = translation(xi1);
        let f2 = translation(xi2);
        for m in [P::plane(0.0, 0.0), P::plane(1.3, -0.4), P::plane(-2.0, 0.8)] {
            let out = compose2(&f1, &f2, &m, None).unwrap();
            let (mp, mq) = m.to_flat();
            let expect = wedge([xi1[0] + xi2[0], xi1[1] + xi2[1]], [mp, mq])
                - 0.5 * wedge(xi1, xi2);
            assert_abs_diff_eq!(out.value, expect, epsilon = 1e-10);
            // stationary points: m1 = m - ξ2/2, m2 = m + ξ1/2
            let s1 = out.stationary_points[0].to_flat();
            let s2 = out.stationary_points[1].to_flat();
            assert_abs_diff_eq!(s1.0, mp - xi2[0] / 2.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s1.1, mq - xi2[1] / 2.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s2.0, mp + xi1[0] / 2.0, epsilon = 1e-9);
            assert_abs_diff_eq!(s2.1, mq + xi1[1] / 2.0, epsilon = 1e-9);
            assert!(out.residual < 1e-10);
        }
    }

    #[test]
    fn identity_composition_returns_the_action() {
        let spec = ActionSpec::SphereRotation { pole: [0.0, 0.0, 1.0], gamma: 0.3 };
        let f = make_action(&spec).unwrap();
        let zero = CentralAction::constant(ModelSpace::Sphere, 0.0);
        for m in [P::sphere_polar(0.8, 0.3), P::sphere_polar(1.4, 2.0)] {
            let out = compose2(&f, &zero, &m, None).unwrap();
            assert_abs_diff_eq!(out.value, f.eval(&m), epsilon = 1e-9);
            let swapped = compose2(&zero, &f, &m, None).unwrap();
            assert_abs_diff_eq!(swapped.value, f.eval(&m), epsilon = 1e-9);
        }
    }

    #[test]
    fn same_pole_rotations_add_half_angles() {
        let f1 = make_action(&ActionSpec::SphereRotation { pole: [0.0, 0.0, 1.0], gamma: 0.25 })
            .unwrap();
        let f2 = make_action(&ActionSpec::SphereRotation { pole: [0.0, 0.0, 1.0], gamma: 0.4 })
            .unwrap();
        let sum = make_action(&ActionSpec::SphereRotation { pole: [0.0, 0.0, 1.0], gamma: 0.65 })
            .unwrap();
        // modulo one additive constant, fitted at the first grid point
        let mut offset = None;
        for (theta, phi) in [(0.5, 0.1), (0.9, 1.2), (1.3, 3.0), (1.7, 4.4)] {
            let m = P::sphere_polar(theta, phi);
            let out = compose2(&f1, &f2, &m, None).unwrap();
            let expect = sum.eval(&m);
            let c = out.value - expect;
            match offset {
                None => offset = Some(c),
                Some(c0) => assert_abs_diff_eq!(c, c0, epsilon = 1e-8),
            }
        }
        // the constant itself is small for the same-pole family
        assert!(offset.unwrap().abs() < 1e-7, "offset {}", offset.unwrap());
    }

    #[test]
    fn composition_value_shifts_with_constants() {
        let f1 = translation([0.4, 0.1]);
        let f2 = translation([-0.3, 0.2]);
        let m = P::plane(0.6, -0.2);
        let base = compose2(&f1, &f2, &m, None).unwrap().value;
        let shifted = compose2(&f1.plus_const(1.3), &f2.plus_const(-0.8), &m, None)
            .unwrap()
            .value;
        assert_abs_diff_eq!(shifted, base + 1.3 - 0.8, epsilon = 1e-10);
    }

    #[test]
    fn stationary_triangle_sides_are_the_transformation_chords() {
        let f1 = make_action(&ActionSpec::SphereRotation { pole: [0.0, 0.6, 0.8], gamma: 0.3 })
            .unwrap();
        let f2 = make_action(&ActionSpec::SphereRotation { pole: [0.6, 0.0, 0.8], gamma: 0.2 })
            .unwrap();
        let m = P::sphere_polar(1.0, 0.7);
        let out = compose2(&f1, &f2, &m, None).unwrap();
        let (m1, m2) = (out.stationary_points[0], out.stationary_points[1]);
        let (a, b, c) = crate::areas::triangle_vertices(&m, &m1, &m2).unwrap();
        let pair1 = generated_pair(&f1, &m1).unwrap();
        let pair2 = generated_pair(&f2, &m2).unwrap();
        assert!(distance(&pair1.minus, &a).unwrap() < 1e-7);
        assert!(distance(&pair1.plus, &b).unwrap() < 1e-7);
        assert!(distance(&pair2.minus, &b).unwrap() < 1e-7);
        assert!(distance(&pair2.plus, &c).unwrap() < 1e-7);
        // and the closing side is the composite chord centered on m
        let comp = crate::spaces::symmetric_exp_inverse(&PointPair::new(a, c).unwrap()).unwrap();
        assert!(distance(&comp.base, &m).unwrap() < 1e-7);
    }

    #[test]
    fn composed_map_is_the_oracle_product() {
        let s1 = ActionSpec::SphereRotation { pole: [0.0, 0.6, 0.8], gamma: 0.3 };
        let s2 = ActionSpec::SphereRotation { pole: [0.6, 0.0, 0.8], gamma: 0.2 };
        let f1 = make_action(&s1).unwrap();
        let f2 = make_action(&s2).unwrap();
        let f12 = composed_action(f1, f2);
        let start = P::sphere_polar(0.9, 0.4);
        let sol = forward_map(&f12, &start, &start).unwrap();
        let oracle = exact_transform(&s2, &exact_transform(&s1, &start).unwrap()).unwrap();
        assert!(
            distance(&sol.pair.plus, &oracle).unwrap() < 1e-8,
            "composite map off by {:e}",
            distance(&sol.pair.plus, &oracle).unwrap()
        );
    }

    #[test]
    fn chain_of_three_translations() {
        let xs = [[0.4, 0.1], [-0.2, 0.3], [0.1, -0.5]];
        let fs: Vec<CentralAction<f64>> = xs.iter().map(|xi| translation(*xi)).collect();
        let m = P::plane(0.3, 0.7);
        let out = compose_chain(&fs, &m).unwrap();
        // iterate the two-translation closed form
        let pair12 = wedge([xs[0][0] + xs[1][0], xs[0][1] + xs[1][1]], [0.3, 0.7])
            - 0.5 * wedge(xs[0], xs[1]);
        let _ = pair12;
        let total = [
            xs[0][0] + xs[1][0] + xs[2][0],
            xs[0][1] + xs[1][1] + xs[2][1],
        ];
        let c12 = -0.5 * wedge(xs[0], xs[1]);
        let xi12 = [xs[0][0] + xs[1][0], xs[0][1] + xs[1][1]];
        let c123 = c12 - 0.5 * wedge(xi12, xs[2]);
        let expect = wedge(total, [0.3, 0.7]) + c123;
        assert_abs_diff_eq!(out.value, expect, epsilon = 1e-8);
        assert_eq!(out.stationary_points.len(), 3);
        assert!(out.branch_note.contains("cross-check"), "{}", out.branch_note);
    }

    #[test]
    fn chain_of_identities_is_zero() {
        let fs = vec![
            CentralAction::constant(ModelSpace::Sphere, 0.0),
            CentralAction::constant(ModelSpace::Sphere, 0.0),
            CentralAction::constant(ModelSpace::Sphere, 0.0),
        ];
        let m = P::sphere_polar(1.1, 0.4);
        let out = compose_chain(&fs, &m).unwrap();
        assert_abs_diff_eq!(out.value, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn associativity_of_three_rotations() {
        let specs = [
            ActionSpec::SphereRotation { pole: [0.0, 0.0, 1.0], gamma: 0.2 },
            ActionSpec::SphereRotation { pole: [0.0, 0.6, 0.8], gamma: 0.15 },
            ActionSpec::SphereRotation { pole: [0.6, 0.0, 0.8], gamma: 0.25 },
        ];
        let fs: Vec<CentralAction<f64>> = specs.iter().map(|s| make_action(s).unwrap()).collect();
        let m = P::sphere_polar(1.0, 0.5);
        let left = compose2(
            &composed_action(fs[0].clone(), fs[1].clone()),
            &fs[2],
            &m,
            None,
        )
        .unwrap();
        let right = compose2(
            &fs[0],
            &composed_action(fs[1].clone(), fs[2].clone()),
            &m,
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(left.value, right.value, epsilon = 1e-7);
    }

    #[test]
    fn groupoid_product_examples() {
        // plane: ((0.5,0),(0.5,0)) ⊙ ((1.5,0),(0.5,0)) = ((1,0),(1,0))
        let t1 = TangentVector::new(P::plane(0.5, 0.0), Vector3::new(0.5, 0.0, 0.0)).unwrap();
        let t2 = TangentVector::new(P::plane(1.5, 0.0), Vector3::new(0.5, 0.0, 0.0)).unwrap();
        let t3 = groupoid_product(&t1, &t2).unwrap();
        assert_abs_diff_eq!(t3.base.to_flat().0, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(t3.vec.x, 1.0, epsilon = 1e-12);

        // inverse composes to an identity element over the source point
        let base = P::sphere_polar(0.9, 1.1);
        let (e1, _) = tangent_basis(&base);
        let tau = TangentVector::new(base, e1 * 0.4).unwrap();
        let plus = exp_vec(&base, &tau.vec).unwrap();
        let inv_base = plus; // inverse element lives over the swapped pair
        let _ = inv_base;
        let inv = TangentVector::new(base, -tau.vec).unwrap();
        let idel = groupoid_product(&tau, &inv).unwrap();
        assert!(idel.norm() < 1e-12);
        assert!(distance(&idel.base, &exp_vec(&base, &(-tau.vec)).unwrap()).unwrap() < 1e-12);

        // two quarter arcs along one great circle give the half arc
        let q = std::f64::consts::FRAC_PI_4 / 2.0;
        let m1 = P::sphere_polar(0.6, 0.0);
        let (e1, _) = tangent_basis(&m1);
        let ta = TangentVector::new(m1, e1 * q).unwrap();
        let end = exp_vec(&m1, &ta.vec).unwrap();
        let m2 = exp_vec(&end, &(parallel_transport(&m1, &end, &(e1 * q)).unwrap())).unwrap();
        let (e1b, _) = tangent_basis(&m2);
        let _ = e1b;
        let tb = crate::spaces::symmetric_exp_inverse(
            &PointPair::new(end, exp_vec(&m2, &(parallel_transport(&end, &m2, &(parallel_transport(&m1, &end, &(e1 * q)).unwrap())).unwrap())).unwrap()).unwrap(),
        )
        .unwrap();
        let tc = groupoid_product(&ta, &tb).unwrap();
        assert_abs_diff_eq!(tc.norm(), 2.0 * q, epsilon = 1e-9);
    }

    #[test]
    fn mismatched_endpoints_are_rejected() {
        let t1 = TangentVector::new(P::plane(0.0, 0.0), Vector3::new(0.5, 0.0, 0.0)).unwrap();
        let t2 = TangentVector::new(P::plane(9.0, 0.0), Vector3::new(0.5, 0.0, 0.0)).unwrap();
        assert!(matches!(groupoid_product(&t1, &t2), Err(CentralError::NotComposable)));
    }
}
