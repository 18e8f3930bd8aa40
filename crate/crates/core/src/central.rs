//! The central equation: from a real function on phase space to the
//! canonical transformation it generates.
//!
//! A central action stores the doubled normalization `f_α = 2f`. Its
//! differential, turned by -90 degrees in the oriented tangent frame and
//! rescaled from momentum magnitude to geodesic arc, is the centered tangent
//! field `F`; the symmetric exponential of `F` is the generated pair
//! `(m₋, m₊)`. The implicit forward map `m₋ ↦ m₊` is solved by a damped
//! Newton iteration over the center.

use std::sync::Arc;

use nalgebra::{Matrix2, Vector2, Vector3};

use crate::error::{CentralError, Result};
use crate::scalar::{clamp_unit, half, lit, Real};
use crate::spaces::{
    self, exp_vec, rot_minus90, tangent_basis, tangent_components, tangent_from_components,
    ModelSpace, Point, PointPair, ScalarField, TangentVector,
};

type EvalFn<T> = dyn Fn(&Point<T>) -> T + Send + Sync;
type GradFn<T> = dyn Fn(&Point<T>) -> Vector3<T> + Send + Sync;
type DomainFn<T> = dyn Fn(&Point<T>) -> bool + Send + Sync;

/// Newton convergence target on the center residual.
pub const NEWTON_TOL: f64 = 1e-13;
/// Residual accepted as a solution.
pub const NEWTON_ACCEPT: f64 = 1e-10;
/// Iteration cap for the forward-map solver.
pub const NEWTON_MAX_ITERS: usize = 50;
/// Consecutive residual growths treated as divergence.
pub const NEWTON_DIVERGE_STREAK: usize = 5;
/// Finite-difference step for solver Jacobians.
const JAC_STEP: f64 = 1e-6;

/// A real scalar generating function on one model space, stored in the
/// doubled normalization `f_α = 2f`, with an optional analytic gradient and
/// an optional extra domain predicate.
#[derive(Clone)]
pub struct CentralAction<T: Real> {
    space: ModelSpace,
    eval: Arc<EvalFn<T>>,
    grad: Option<Arc<GradFn<T>>>,
    domain: Option<Arc<DomainFn<T>>>,
}

impl<T: Real> CentralAction<T> {
    /// Wrap a callable body; the closure must return the doubled value `f_α`.
    pub fn from_fn<F>(space: ModelSpace, f: F) -> Self
    where
        F: Fn(&Point<T>) -> T + Send + Sync + 'static,
    {
        CentralAction { space, eval: Arc::new(f), grad: None, domain: None }
    }

    /// Attach an analytic gradient of `f_α` (tangent vector in the embedding).
    pub fn with_gradient<G>(mut self, g: G) -> Self
    where
        G: Fn(&Point<T>) -> Vector3<T> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(g));
        self
    }

    /// Attach an extra validity predicate beyond the space's own condition.
    pub fn with_domain<D>(mut self, d: D) -> Self
    where
        D: Fn(&Point<T>) -> bool + Send + Sync + 'static,
    {
        self.domain = Some(Arc::new(d));
        self
    }

    pub fn constant(space: ModelSpace, c: T) -> Self {
        CentralAction::from_fn(space, move |_| c).with_gradient(|_| Vector3::zeros())
    }

    pub fn space(&self) -> ModelSpace {
        self.space
    }

    /// Value of the doubled action `f_α` at `m`.
    pub fn eval(&self, m: &Point<T>) -> T {
        (self.eval)(m)
    }

    /// Gradient of `f_α`, analytic when available, else by geodesic
    /// central differences (regular at the chart poles).
    pub fn gradient(&self, m: &Point<T>) -> Result<Vector3<T>> {
        match &self.grad {
            Some(g) => Ok(g(m)),
            None => spaces::fd_gradient(m, |p| self.eval(p)),
        }
    }

    /// Action scaled by a constant; `scaled(-1)` generates the inverse map.
    pub fn scaled(&self, s: T) -> Self {
        let eval = Arc::clone(&self.eval);
        let grad = self.grad.clone();
        let domain = self.domain.clone();
        CentralAction {
            space: self.space,
            eval: Arc::new(move |m| s * eval(m)),
            grad: grad.map(|g| {
                Arc::new(move |m: &Point<T>| g(m) * s) as Arc<GradFn<T>>
            }),
            domain,
        }
    }

    /// Action shifted by an additive constant (same generated map).
    pub fn plus_const(&self, c: T) -> Self {
        let eval = Arc::clone(&self.eval);
        let grad = self.grad.clone();
        let domain = self.domain.clone();
        CentralAction {
            space: self.space,
            eval: Arc::new(move |m| eval(m) + c),
            grad,
            domain,
        }
    }

    /// Whether `m` lies in the action's validity domain: the attached
    /// predicate plus the space's consistency condition.
    pub fn domain_ok(&self, m: &Point<T>) -> bool {
        if let Some(d) = &self.domain {
            if !d(m) {
                return false;
            }
        }
        consistency_ok(self, m)
    }
}

impl<T: Real> ScalarField<T> for CentralAction<T> {
    fn space(&self) -> ModelSpace {
        self.space
    }
    fn eval(&self, m: &Point<T>) -> T {
        CentralAction::eval(self, m)
    }
    fn gradient(&self, m: &Point<T>) -> Result<Vector3<T>> {
        CentralAction::gradient(self, m)
    }
}

/// Check the space's consistency condition for the central equation at `m`.
fn consistency_ok<T: Real>(f: &CentralAction<T>, m: &Point<T>) -> bool {
    let Ok(ga) = f.gradient(m) else { return false };
    let gf = ga * half(T::one());
    match m.space() {
        ModelSpace::Plane | ModelSpace::Hyperbolic => true,
        ModelSpace::Torus => gf.x.abs() < T::frac_pi_2() && gf.y.abs() < T::frac_pi_2(),
        ModelSpace::Sphere => gf.norm() < T::one(),
    }
}

/// The centered tangent field `F` of the central equation at `m`.
///
/// The momentum vector is the differential of `f = f_α / 2` rotated by -90
/// degrees; on the sphere its length is `sin‖v‖` and on the hyperboloid
/// `sinh‖v‖`, so the arc length is recovered through the inverse map.
pub fn central_map<T: Real>(f: &CentralAction<T>, m: &Point<T>) -> Result<TangentVector<T>> {
    if f.space() != m.space() {
        return Err(CentralError::SpaceMismatch);
    }
    if let Some(d) = &f.domain {
        if !d(m) {
            return Err(CentralError::ConsistencyViolation("action domain predicate"));
        }
    }
    let ga = f.gradient(m)?;
    let gf = ga * half(T::one());
    let w = rot_minus90(m, &gf);
    let vec = match m.space() {
        ModelSpace::Plane => w,
        ModelSpace::Torus => {
            if w.x.abs() >= T::frac_pi_2() || w.y.abs() >= T::frac_pi_2() {
                return Err(CentralError::ConsistencyViolation(
                    "torus gradient components must stay below pi/2",
                ));
            }
            w
        }
        ModelSpace::Sphere => {
            let s = w.norm();
            if s >= T::one() {
                return Err(CentralError::ConsistencyViolation(
                    "sphere gradient norm must stay below 1",
                ));
            }
            if s < lit(1e-14) {
                w
            } else {
                w * (s.asin() / s)
            }
        }
        ModelSpace::Hyperbolic => {
            let s = spaces::mink(&w, &w).max(T::zero()).sqrt();
            if s < lit(1e-14) {
                w
            } else {
                w * (s.asinh() / s)
            }
        }
    };
    Ok(TangentVector { base: *m, vec })
}

/// The canonical pair generated by `f` at the center `m` (embedding route).
pub fn generated_pair<T: Real>(f: &CentralAction<T>, m: &Point<T>) -> Result<PointPair<T>> {
    let tau = central_map(f, m)?;
    spaces::symmetric_exp(&tau)
}

/// The generated pair evaluated through the polar-chart closed forms on the
/// sphere and the hyperbolic plane; cross-check for the embedding route.
pub fn generated_pair_chart<T: Real>(f: &CentralAction<T>, m: &Point<T>) -> Result<PointPair<T>> {
    if f.space() != m.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let grad_f = f.gradient(m)? * half(T::one());
    let (rad_hat, phi_hat) = spaces::polar_frame(m)?;
    match m.space() {
        ModelSpace::Sphere => {
            let (theta, phi) = m.to_sphere_polar();
            let (st, ct) = (theta.sin(), theta.cos());
            let f_theta = grad_f.dot(&rad_hat);
            let f_phi = st * grad_f.dot(&phi_hat);
            let s0 = grad_f.norm();
            if s0 >= T::one() {
                return Err(CentralError::ConsistencyViolation(
                    "sphere gradient norm must stay below 1",
                ));
            }
            let c0 = (T::one() - s0 * s0).sqrt();
            let theta_m = clamp_unit(ct * c0 + f_phi).acos();
            let theta_p = clamp_unit(ct * c0 - f_phi).acos();
            let alpha_m = st * st * c0 - ct * f_phi;
            let alpha_p = st * st * c0 + ct * f_phi;
            let phi_m = phi + (st * f_theta).atan2(alpha_m);
            let phi_p = phi - (st * f_theta).atan2(alpha_p);
            PointPair::new(
                Point::sphere_polar(theta_m, phi_m),
                Point::sphere_polar(theta_p, phi_p),
            )
        }
        ModelSpace::Hyperbolic => {
            let (rho, phi) = m.to_hyperbolic_polar();
            let (sh, ch) = (rho.sinh(), rho.cosh());
            let f_rho = spaces::mink(&grad_f, &rad_hat);
            let f_phi = sh * spaces::mink(&grad_f, &phi_hat);
            let s0 = spaces::mink(&grad_f, &grad_f).max(T::zero()).sqrt();
            let c0 = (T::one() + s0 * s0).sqrt();
            let rho_m = (ch * c0 - f_phi).max(T::one()).acosh();
            let rho_p = (ch * c0 + f_phi).max(T::one()).acosh();
            let gam_m = sh * sh * c0 - ch * f_phi;
            let gam_p = sh * sh * c0 + ch * f_phi;
            let phi_m = phi + (sh * f_rho).atan2(gam_m);
            let phi_p = phi - (sh * f_rho).atan2(gam_p);
            PointPair::new(
                Point::hyperbolic_polar(rho_m, phi_m),
                Point::hyperbolic_polar(rho_p, phi_p),
            )
        }
        _ => generated_pair(f, m),
    }
}

/// Thresholds for flagging near-caustic behaviour.
#[derive(Debug, Clone, Copy)]
pub struct CausticThresholds {
    /// Flag when the central indicator exceeds this.
    pub central_max: f64,
    /// Flag when the graph indicator falls below this.
    pub graph_min: f64,
}

impl Default for CausticThresholds {
    fn default() -> Self {
        CausticThresholds { central_max: 1e8, graph_min: 1e-8 }
    }
}

/// Caustic diagnostics: Jacobian determinants of the centered field and of
/// the backward endpoint map, with threshold flags.
#[derive(Debug, Clone, Copy)]
pub struct CausticReport<T: Real> {
    /// `|det ∂F/∂m|` in normal coordinates at the evaluation point.
    pub central_indicator: T,
    /// `|det ∂(Exp_m(-F(m)))/∂m|` in the same coordinates.
    pub graph_indicator: T,
    pub central_flag: bool,
    pub graph_flag: bool,
}

/// Finite-difference caustic indicators at `m`.
pub fn caustic_indicators<T: Real>(
    f: &CentralAction<T>,
    m: &Point<T>,
    thresholds: CausticThresholds,
) -> Result<CausticReport<T>> {
    let h = lit::<T>(JAC_STEP);
    let (e1, e2) = tangent_basis(m);

    // columns: derivative along e_j of the transported field / backward point
    let mut jf = Matrix2::<T>::zeros();
    let mut jg = Matrix2::<T>::zeros();
    for (j, e) in [e1, e2].into_iter().enumerate() {
        let sample = |s: T| -> Result<(Vector2<T>, Vector2<T>)> {
            let mp = exp_vec(m, &(e * s))?;
            let tau = central_map(f, &mp).map_err(|err| match err {
                CentralError::ConsistencyViolation(_) => CentralError::StencilOutsideDomain,
                other => other,
            })?;
            let back = spaces::parallel_transport(&mp, m, &tau.vec)?;
            let (a, b) = tangent_components(m, &back);
            let pm = exp_vec(&mp, &(-tau.vec))?;
            let lg = spaces::log_map(m, &pm)?;
            let (c, d) = tangent_components(m, &lg.vec);
            Ok((Vector2::new(a, b), Vector2::new(c, d)))
        };
        let (fp, gp) = sample(h)?;
        let (fm, gm) = sample(-h)?;
        let two_h = lit::<T>(2.0) * h;
        jf.set_column(j, &((fp - fm) / two_h));
        jg.set_column(j, &((gp - gm) / two_h));
    }

    let det_f = jf.determinant().abs();
    let det_g = jg.determinant().abs();
    let central_indicator = if det_f.is_finite() { det_f } else { T::one() / T::zero() };
    let graph_indicator = if det_g.is_finite() { det_g } else { T::one() / T::zero() };
    Ok(CausticReport {
        central_indicator,
        graph_indicator,
        central_flag: !central_indicator.is_finite()
            || central_indicator > lit(thresholds.central_max),
        graph_flag: !graph_indicator.is_finite()
            || graph_indicator < lit(thresholds.graph_min)
            || graph_indicator > lit(thresholds.central_max),
    })
}

/// Solution of the implicit forward problem, with solver diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct ForwardSolution<T: Real> {
    /// The center whose generated pair starts at the requested source.
    pub center: Point<T>,
    /// Source and image of the transformation.
    pub pair: PointPair<T>,
    /// Final residual of the center equation.
    pub residual: T,
    pub iterations: usize,
}

/// Solve `Exp_m(-F(m)) = m_minus` for the center `m` by damped Newton and
/// return the transformation image `m_plus = Exp_m(+F(m))`.
pub fn forward_map<T: Real>(
    f: &CentralAction<T>,
    m_minus: &Point<T>,
    guess: &Point<T>,
) -> Result<ForwardSolution<T>> {
    if f.space() != m_minus.space() || guess.space() != m_minus.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let residual = |m: &Point<T>| -> Result<Vector2<T>> {
        let tau = central_map(f, m)?;
        let back = exp_vec(m, &(-tau.vec))?;
        let lg = spaces::log_map(m_minus, &back)?;
        let (a, b) = tangent_components(m_minus, &lg.vec);
        Ok(Vector2::new(a, b))
    };

    let mut m = *guess;
    let mut r = residual(&m)?;
    let mut rn = r.norm();
    let mut growth_streak = 0usize;
    let mut iterations = 0usize;
    let h = lit::<T>(JAC_STEP);

    while rn > lit(NEWTON_TOL) && iterations < NEWTON_MAX_ITERS {
        iterations += 1;
        let (e1, e2) = tangent_basis(&m);
        let mut jac = Matrix2::<T>::zeros();
        let mut jac_ok = true;
        for (j, e) in [e1, e2].into_iter().enumerate() {
            let rp = residual(&exp_vec(&m, &(e * h))?);
            let rm = residual(&exp_vec(&m, &(e * -h))?);
            match (rp, rm) {
                (Ok(rp), Ok(rm)) => jac.set_column(j, &((rp - rm) / (lit::<T>(2.0) * h))),
                _ => {
                    jac_ok = false;
                    break;
                }
            }
        }
        let step = if jac_ok {
            jac.lu().solve(&(-r))
        } else {
            None
        };
        let Some(step) = step else {
            return Err(CentralError::NoConvergence {
                residual: rn.to_subset().unwrap_or(f64::NAN),
            });
        };

        // step halving until the residual decreases
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..25 {
            let delta = tangent_from_components(&m, step.x * lambda, step.y * lambda);
            if let Ok(mt) = exp_vec(&m, &delta) {
                if let Ok(rt) = residual(&mt) {
                    let rtn = rt.norm();
                    if rtn < rn || rtn <= lit(NEWTON_TOL) {
                        m = mt;
                        r = rt;
                        growth_streak = if rtn >= rn { growth_streak + 1 } else { 0 };
                        rn = rtn;
                        accepted = true;
                        break;
                    }
                }
            }
            lambda = half(lambda);
        }
        if !accepted {
            growth_streak += 1;
            if growth_streak >= NEWTON_DIVERGE_STREAK {
                break;
            }
        }
        if growth_streak >= NEWTON_DIVERGE_STREAK {
            break;
        }
    }

    if rn > lit(NEWTON_ACCEPT) {
        return Err(CentralError::NoConvergence {
            residual: rn.to_subset().unwrap_or(f64::NAN),
        });
    }
    let tau = central_map(f, &m)?;
    let plus = exp_vec(&m, &tau.vec)?;
    Ok(ForwardSolution {
        center: m,
        pair: PointPair { minus: *m_minus, plus },
        residual: rn,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::spaces::distance;

    type P = Point<f64>;

    fn planar_action<F: Fn(f64, f64) -> f64 + Send + Sync + 'static>(f: F) -> CentralAction<f64> {
        CentralAction::from_fn(ModelSpace::Plane, move |m: &P| {
            let (p, q) = m.to_flat();
            f(p, q)
        })
    }

    #[test]
    fn plane_central_map_turns_the_gradient() {
        // f = pq (doubled body 2pq) has v = (∂f/∂q, -∂f/∂p) = (q-slot p, -q)
        let f = planar_action(|p, q| 2.0 * p * q);
        let v = central_map(&f, &P::plane(1.0, 2.0)).unwrap();
        assert_abs_diff_eq!(v.vec.x, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(v.vec.y, -2.0, epsilon = 1e-9);
    }

    #[test]
    fn constants_generate_the_identity() {
        for m in [
            P::plane(0.4, -0.8),
            P::torus(1.0, 2.0),
            Point::sphere(nalgebra::Vector3::new(0.0, 0.6, 0.8)).unwrap(),
            P::hyperbolic_polar(0.9, 0.3),
        ] {
            let f = CentralAction::constant(m.space(), 3.7);
            let v = central_map(&f, &m).unwrap();
            assert_eq!(v.vec, Vector3::zeros());
            let pair = generated_pair(&f, &m).unwrap();
            assert_eq!(pair.minus.coords(), m.coords());
            assert_eq!(pair.plus.coords(), m.coords());
        }
    }

    #[test]
    fn sphere_consistency_violation() {
        let f = CentralAction::from_fn(ModelSpace::Sphere, |m: &P| {
            let (theta, _) = m.to_sphere_polar();
            2.4 * theta
        });
        let m = P::sphere_polar(1.2, 0.7);
        assert!(matches!(
            central_map(&f, &m),
            Err(CentralError::ConsistencyViolation(_))
        ));
    }

    #[test]
    fn torus_consistency_violation() {
        let f = CentralAction::from_fn(ModelSpace::Torus, |m: &P| {
            let (p, _) = m.to_flat();
            3.4 * p
        });
        // v_q = -∂f/∂p = -1.7, beyond pi/2
        let m = P::torus(1.0, 1.0);
        assert!(matches!(
            central_map(&f, &m),
            Err(CentralError::ConsistencyViolation(_))
        ));
    }

    #[test]
    fn translation_generated_pair() {
        // doubled action ξ∧x for ξ = (0,1) sends x to the pair x ∓ ξ/2
        let f = planar_action(|p, _q| -p);
        let pair = generated_pair(&f, &P::plane(2.0, 3.0)).unwrap();
        assert_abs_diff_eq!(pair.minus.to_flat().0, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(pair.minus.to_flat().1, 2.5, epsilon = 1e-9);
        assert_abs_diff_eq!(pair.plus.to_flat().0, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(pair.plus.to_flat().1, 3.5, epsilon = 1e-9);
    }

    #[test]
    fn chart_route_matches_embedding_route() {
        let smooth_sphere = CentralAction::from_fn(ModelSpace::Sphere, |m: &P| {
            let c = m.coords();
            0.3 * c.z + 0.2 * c.x * c.y - 0.1 * c.y
        });
        for (theta, phi) in [(0.6, 0.3), (1.2, 2.5), (2.2, 4.4), (1.57, 0.0)] {
            let m = P::sphere_polar(theta, phi);
            let a = generated_pair(&smooth_sphere, &m).unwrap();
            let b = generated_pair_chart(&smooth_sphere, &m).unwrap();
            assert!(distance(&a.minus, &b.minus).unwrap() < 1e-9);
            assert!(distance(&a.plus, &b.plus).unwrap() < 1e-9);
        }

        let smooth_hyp = CentralAction::from_fn(ModelSpace::Hyperbolic, |m: &P| {
            let c = m.coords();
            0.4 * c.z - 0.3 * c.x + 0.25 * c.x * c.y
        });
        for (rho, phi) in [(0.4, 0.2), (1.1, 3.0), (1.8, 5.5)] {
            let m = P::hyperbolic_polar(rho, phi);
            let a = generated_pair(&smooth_hyp, &m).unwrap();
            let b = generated_pair_chart(&smooth_hyp, &m).unwrap();
            assert!(distance(&a.minus, &b.minus).unwrap() < 1e-9);
            assert!(distance(&a.plus, &b.plus).unwrap() < 1e-9);
        }
    }

    #[test]
    fn sign_antisymmetry_inverts_the_map() {
        let f = CentralAction::from_fn(ModelSpace::Sphere, |m: &P| {
            let c = m.coords();
            0.5 * c.z + 0.3 * c.x
        });
        let m = P::sphere_polar(1.0, 0.8);
        let v = central_map(&f, &m).unwrap();
        let vneg = central_map(&f.scaled(-1.0), &m).unwrap();
        assert_eq!(v.vec, -vneg.vec);

        // forward map of -f undoes forward map of f
        let start = P::sphere_polar(1.1, 0.5);
        let fwd = forward_map(&f, &start, &start).unwrap();
        let back = forward_map(&f.scaled(-1.0), &fwd.pair.plus, &fwd.center).unwrap();
        assert!(distance(&back.pair.plus, &start).unwrap() < 1e-9);
    }

    #[test]
    fn short_time_limit_matches_hamiltonian_field() {
        // F for f_α = -t h approaches (t/2) v_h with error o(t)
        let m = P::sphere_polar(0.9, 1.4);
        let h_field = crate::spaces::FnField::new(ModelSpace::Sphere, |m: &P| -m.coords().z);
        let vh = crate::spaces::hamiltonian_vector_field(&h_field, &m).unwrap();
        let mut last_ratio = f64::INFINITY;
        for k in 0..4 {
            let t = 0.2 / 2f64.powi(k);
            let f = CentralAction::from_fn(ModelSpace::Sphere, move |m: &P| t * m.coords().z);
            let v = central_map(&f, &m).unwrap();
            let err = (v.vec - vh.vec * (t / 2.0)).norm();
            let ratio = err / t;
            assert!(ratio < last_ratio * 0.6, "ratio {ratio} vs {last_ratio}");
            last_ratio = ratio;
        }
    }

    #[test]
    fn caustic_indicators_flat_families() {
        // translation: constant field, identity backward map
        let f = planar_action(|p, _| -2.0 * p);
        let rep = caustic_indicators(&f, &P::plane(0.3, 0.4), CausticThresholds::default()).unwrap();
        assert_abs_diff_eq!(rep.central_indicator, 0.0, epsilon = 1e-6);
        assert_abs_diff_eq!(rep.graph_indicator, 1.0, epsilon = 1e-6);
        assert!(!rep.central_flag && !rep.graph_flag);

        // quadratic with unit-determinant saddle Hessian: graph indicator 0
        let f = planar_action(|p, q| 2.0 * p * q)
            .with_gradient(|m: &P| {
                let (p, q) = m.to_flat();
                Vector3::new(2.0 * q, 2.0 * p, 0.0)
            });
        let rep = caustic_indicators(&f, &P::plane(0.1, -0.2), CausticThresholds::default()).unwrap();
        assert!(rep.graph_indicator < 1e-8, "graph {}", rep.graph_indicator);
        assert!(rep.graph_flag);

        // rotation family blows up as the angle approaches a reflection
        let lam = std::f64::consts::PI - 1e-5;
        let b = -(lam / 2.0).tan();
        let f = planar_action(move |p, q| b * (p * p + q * q));
        let rep = caustic_indicators(&f, &P::plane(0.5, 0.5), CausticThresholds::default()).unwrap();
        assert!(rep.central_indicator > 1e9);
        assert!(rep.central_flag);
    }

    #[test]
    fn forward_map_translation_and_identity() {
        let f = planar_action(|p, _| -3.0 * p); // ξ = (0, -3)... doubled ξ∧x with ξ=(0,-3)?
        // body is f_α = ξ∧x = ξ_p q - ξ_q p with ξ = (0, 3): f_α = -3p
        let sol = forward_map(&f, &P::plane(0.0, 0.0), &P::plane(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!(sol.pair.plus.to_flat().0, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.pair.plus.to_flat().1, 3.0, epsilon = 1e-10);

        let id = CentralAction::constant(ModelSpace::Hyperbolic, 0.0);
        let m = P::hyperbolic_polar(0.7, 2.0);
        let sol = forward_map(&id, &m, &m).unwrap();
        assert!(distance(&sol.pair.plus, &m).unwrap() < 1e-12);
    }
}
