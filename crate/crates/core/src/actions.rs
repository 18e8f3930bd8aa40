//! Closed-form central-action families and their exact transformation
//! oracles: flat translations and quadratics (Cayley), sphere rotations,
//! real hyperbolic rotations and ideal hyperbolic translations.
//!
//! Sign conventions: with `ORIENT = +1` the action with half-angle `γ`
//! generates the rotation by `-2γ` in the oriented (increasing azimuth)
//! sense about its pole, and the ideal translation with half-length `z`
//! displaces axis points by `2z` against the axis orientation. The matrix
//! oracles below are built with exactly those senses, and every family is
//! validated against its oracle by the test suites.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::central::CentralAction;
use crate::error::{CentralError, Result};
use crate::scalar::{clamp_unit, lit, Real};
use crate::spaces::{mink, ModelSpace, Point};

/// Parameter block of one closed-form family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ActionSpec<T: Real> {
    /// Uniform translation of the plane by `xi`.
    FlatTranslation { xi: [T; 2] },
    /// Homogeneous quadratic (plus optional translation): the Cayley family.
    FlatQuadratic {
        b: [[T; 2]; 2],
        #[serde(default)]
        xi: Option<[T; 2]>,
    },
    /// Rotation of the sphere about `pole` with half-angle `gamma`.
    SphereRotation { pole: [T; 3], gamma: T },
    /// Rotation of the hyperbolic plane about a real pole.
    HyperbolicRotation { pole: [T; 3], gamma: T },
    /// Translation along a hyperbolic axis at distance `nu` from the
    /// origin, reached under angle `epsilon`, with signed half-length `z`.
    HyperbolicIdealTranslation { nu: T, epsilon: T, z: T },
}

impl<T: Real> ActionSpec<T> {
    pub fn space(&self) -> ModelSpace {
        match self {
            ActionSpec::FlatTranslation { .. } | ActionSpec::FlatQuadratic { .. } => {
                ModelSpace::Plane
            }
            ActionSpec::SphereRotation { .. } => ModelSpace::Sphere,
            ActionSpec::HyperbolicRotation { .. }
            | ActionSpec::HyperbolicIdealTranslation { .. } => ModelSpace::Hyperbolic,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ActionSpec::FlatTranslation { .. } => Ok(()),
            ActionSpec::FlatQuadratic { b, .. } => {
                if (b[0][1] - b[1][0]).abs() > lit(1e-12) {
                    return Err(CentralError::InvalidSpec(
                        "quadratic matrix must be symmetric".into(),
                    ));
                }
                Ok(())
            }
            ActionSpec::SphereRotation { pole, gamma } => {
                if gamma.abs() >= T::frac_pi_2() {
                    return Err(CentralError::InvalidSpec(
                        "rotation half-angle must lie strictly inside (-pi/2, pi/2)".into(),
                    ));
                }
                Point::sphere(Vector3::new(pole[0], pole[1], pole[2]))
                    .map_err(|_| CentralError::InvalidSpec("pole must be a unit vector".into()))?;
                Ok(())
            }
            ActionSpec::HyperbolicRotation { pole, gamma } => {
                if gamma.abs() >= T::frac_pi_2() {
                    return Err(CentralError::InvalidSpec(
                        "rotation half-angle must lie strictly inside (-pi/2, pi/2)".into(),
                    ));
                }
                Point::hyperboloid(Vector3::new(pole[0], pole[1], pole[2])).map_err(|_| {
                    CentralError::InvalidSpec("pole must lie on the upper hyperboloid".into())
                })?;
                Ok(())
            }
            ActionSpec::HyperbolicIdealTranslation { nu, .. } => {
                if *nu < T::zero() {
                    return Err(CentralError::InvalidSpec(
                        "axis distance must be nonnegative".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

fn flat_translation_grad<T: Real>(xi: [T; 2]) -> Vector3<T> {
    Vector3::new(-xi[1], xi[0], T::zero())
}

/// Unit spacelike normal of the hyperbolic axis `(nu, epsilon)`.
fn axis_normal<T: Real>(nu: T, epsilon: T) -> Vector3<T> {
    Vector3::new(nu.cosh() * epsilon.cos(), nu.cosh() * epsilon.sin(), nu.sinh())
}

/// Build the generating function of a closed-form family, with analytic
/// gradient and domain predicate.
pub fn make_action<T: Real>(spec: &ActionSpec<T>) -> Result<CentralAction<T>> {
    spec.validate()?;
    Ok(match spec.clone() {
        ActionSpec::FlatTranslation { xi } => {
            CentralAction::from_fn(ModelSpace::Plane, move |m: &Point<T>| {
                let (p, q) = m.to_flat();
                xi[0] * q - xi[1] * p
            })
            .with_gradient(move |_| flat_translation_grad(xi))
        }
        ActionSpec::FlatQuadratic { b, xi } => {
            let bm = Matrix2::new(b[0][0], b[0][1], b[1][0], b[1][1]);
            let xi = xi.unwrap_or([T::zero(), T::zero()]);
            let eval_bm = bm;
            CentralAction::from_fn(ModelSpace::Plane, move |m: &Point<T>| {
                let (p, q) = m.to_flat();
                let x = Vector2::new(p, q);
                (eval_bm * x).dot(&x) + xi[0] * q - xi[1] * p
            })
            .with_gradient(move |m: &Point<T>| {
                let (p, q) = m.to_flat();
                let g = bm * Vector2::new(p, q) * lit::<T>(2.0);
                Vector3::new(g.x, g.y, T::zero()) + flat_translation_grad(xi)
            })
        }
        ActionSpec::SphereRotation { pole, gamma } => {
            let pole = Point::sphere(Vector3::new(pole[0], pole[1], pole[2]))?.coords();
            let sg = gamma.sin();
            CentralAction::from_fn(ModelSpace::Sphere, move |m: &Point<T>| {
                let u = m.coords().dot(&pole);
                lit::<T>(-2.0) * clamp_unit(sg * u).asin()
            })
            .with_gradient(move |m: &Point<T>| {
                let c = m.coords();
                let u = c.dot(&pole);
                let w = (T::one() - sg * sg * u * u).sqrt();
                (pole - c * u) * (lit::<T>(-2.0) * sg / w)
            })
        }
        ActionSpec::HyperbolicRotation { pole, gamma } => {
            let pole = Point::hyperboloid(Vector3::new(pole[0], pole[1], pole[2]))?.coords();
            let sg = gamma.sin();
            CentralAction::from_fn(ModelSpace::Hyperbolic, move |m: &Point<T>| {
                let u = -mink(&m.coords(), &pole);
                lit::<T>(-2.0) * clamp_unit(sg * u).asin()
            })
            .with_gradient(move |m: &Point<T>| {
                let c = m.coords();
                let u = -mink(&c, &pole);
                let w = (T::one() - sg * sg * u * u).max(lit(1e-300)).sqrt();
                (c * u - pole) * (lit::<T>(-2.0) * sg / w)
            })
            .with_domain(move |m: &Point<T>| {
                let u = -mink(&m.coords(), &pole);
                (sg * u).abs() < T::one()
            })
        }
        ActionSpec::HyperbolicIdealTranslation { nu, epsilon, z } => {
            let n = axis_normal(nu, epsilon);
            let sz = z.sinh();
            CentralAction::from_fn(ModelSpace::Hyperbolic, move |m: &Point<T>| {
                let u = mink(&m.coords(), &n);
                lit::<T>(2.0) * clamp_unit(sz * u).asin()
            })
            .with_gradient(move |m: &Point<T>| {
                let c = m.coords();
                let u = mink(&c, &n);
                let w = (T::one() - sz * sz * u * u).max(lit(1e-300)).sqrt();
                (n + c * u) * (lit::<T>(2.0) * sz / w)
            })
            .with_domain(move |m: &Point<T>| {
                let u = mink(&m.coords(), &n);
                (sz * u).abs() <= T::one()
            })
        }
    })
}

/// The group element realized by one closed-form family.
#[derive(Debug, Clone, Copy)]
pub enum ExactMap<T: Real> {
    /// Affine map of the plane `x ↦ M x + t`.
    Affine { m: Matrix2<T>, t: Vector2<T> },
    /// Linear isometry of the sphere or hyperboloid embedding.
    Linear3(Matrix3<T>),
}

/// Right-handed rotation of euclidean 3-space about `axis` by `angle`.
pub fn rotation_matrix<T: Real>(axis: &Vector3<T>, angle: T) -> Matrix3<T> {
    let a = axis / axis.norm();
    let (s, c) = (angle.sin(), angle.cos());
    let k = Matrix3::new(
        T::zero(), -a.z, a.y,
        a.z, T::zero(), -a.x,
        -a.y, a.x, T::zero(),
    );
    Matrix3::identity() + k * s + k * k * (T::one() - c)
}

/// Rotation of the hyperboloid about the vertical axis through the origin.
pub fn so21_vertical_rotation<T: Real>(angle: T) -> Matrix3<T> {
    let (s, c) = (angle.sin(), angle.cos());
    Matrix3::new(c, -s, T::zero(), s, c, T::zero(), T::zero(), T::zero(), T::one())
}

/// Boost along the x-axis geodesic by arc length `rho`.
pub fn so21_boost_x<T: Real>(rho: T) -> Matrix3<T> {
    let (s, c) = (rho.sinh(), rho.cosh());
    Matrix3::new(c, T::zero(), s, T::zero(), T::one(), T::zero(), s, T::zero(), c)
}

/// Boost along the y-axis geodesic by arc length `rho`.
pub fn so21_boost_y<T: Real>(rho: T) -> Matrix3<T> {
    let (s, c) = (rho.sinh(), rho.cosh());
    Matrix3::new(T::one(), T::zero(), T::zero(), T::zero(), c, s, T::zero(), s, c)
}

/// Isometry moving the hyperbolic origin to `p` along the connecting geodesic.
pub fn so21_origin_to<T: Real>(p: &Vector3<T>) -> Matrix3<T> {
    let rho = p.z.max(T::one()).acosh();
    if rho < lit(1e-14) {
        return Matrix3::identity();
    }
    let phi = p.y.atan2(p.x);
    so21_vertical_rotation(phi) * so21_boost_x(rho) * so21_vertical_rotation(-phi)
}

/// The matrix / affine realization of a family's transformation.
pub fn exact_map<T: Real>(spec: &ActionSpec<T>) -> Result<ExactMap<T>> {
    spec.validate()?;
    Ok(match spec {
        ActionSpec::FlatTranslation { xi } => ExactMap::Affine {
            m: Matrix2::identity(),
            t: Vector2::new(xi[0], xi[1]),
        },
        ActionSpec::FlatQuadratic { b, xi } => {
            let bm = Matrix2::new(b[0][0], b[0][1], b[1][0], b[1][1]);
            let j = Matrix2::new(T::zero(), T::one(), -T::one(), T::zero());
            let jb = j * bm;
            let denom = Matrix2::identity() - jb;
            let inv = denom
                .try_inverse()
                .ok_or(CentralError::OutOfDomain("quadratic family is singular here"))?;
            let cayley = (Matrix2::identity() + jb) * inv;
            let xi = xi.unwrap_or([T::zero(), T::zero()]);
            let xiv = Vector2::new(xi[0], xi[1]);
            let t = (cayley + Matrix2::identity()) * xiv * lit::<T>(0.5);
            ExactMap::Affine { m: cayley, t }
        }
        ActionSpec::SphereRotation { pole, gamma } => {
            let p = Point::sphere(Vector3::new(pole[0], pole[1], pole[2]))?.coords();
            ExactMap::Linear3(rotation_matrix(&p, lit::<T>(-2.0 * crate::spaces::ORIENT) * *gamma))
        }
        ActionSpec::HyperbolicRotation { pole, gamma } => {
            // opposite sense to the sphere family: the hyperbolic cosine of
            // the pole distance grows where the spherical one shrinks
            let p = Point::hyperboloid(Vector3::new(pole[0], pole[1], pole[2]))?.coords();
            let l = so21_origin_to(&p);
            let linv = l
                .try_inverse()
                .ok_or(CentralError::OutOfDomain("pole isometry is singular"))?;
            ExactMap::Linear3(
                l * so21_vertical_rotation(lit::<T>(2.0 * crate::spaces::ORIENT) * *gamma) * linv,
            )
        }
        ActionSpec::HyperbolicIdealTranslation { nu, epsilon, z } => {
            let c = so21_vertical_rotation(*epsilon) * so21_boost_x(*nu);
            let cinv = c
                .try_inverse()
                .ok_or(CentralError::OutOfDomain("axis isometry is singular"))?;
            ExactMap::Linear3(c * so21_boost_y(lit::<T>(-2.0 * crate::spaces::ORIENT) * *z) * cinv)
        }
    })
}

/// Apply the family's group transformation to `m_minus`.
pub fn exact_transform<T: Real>(spec: &ActionSpec<T>, m_minus: &Point<T>) -> Result<Point<T>> {
    if spec.space() != m_minus.space() {
        return Err(CentralError::SpaceMismatch);
    }
    match exact_map(spec)? {
        ExactMap::Affine { m, t } => {
            let (p, q) = m_minus.to_flat();
            let out = m * Vector2::new(p, q) + t;
            Ok(Point::plane(out.x, out.y))
        }
        ExactMap::Linear3(r) => {
            let out = r * m_minus.coords();
            match m_minus.space() {
                ModelSpace::Sphere => Point::sphere(out),
                ModelSpace::Hyperbolic => Point::hyperboloid(out),
                _ => unreachable!(),
            }
        }
    }
}

/// Recover a sphere-rotation spec from an `SO(3)` matrix.
///
/// Errors when the matrix is a point reflection (half-angle would reach
/// `±π/2`, a caustic of the family).
pub fn sphere_rotation_from_matrix<T: Real>(r: &Matrix3<T>) -> Result<ActionSpec<T>> {
    let skew = Vector3::new(
        r[(2, 1)] - r[(1, 2)],
        r[(0, 2)] - r[(2, 0)],
        r[(1, 0)] - r[(0, 1)],
    ) * lit::<T>(0.5);
    let s = skew.norm();
    if s < lit(1e-14) {
        let trace = r.trace();
        if trace > T::zero() {
            // identity
            return Ok(ActionSpec::SphereRotation {
                pole: [T::zero(), T::zero(), T::one()],
                gamma: T::zero(),
            });
        }
        return Err(CentralError::OutOfDomain(
            "point reflections are not generated by this family",
        ));
    }
    // with pole -skew/s the signed angle is negative: gamma positive
    let pole = -skew / s;
    let cos_a = clamp_unit((r.trace() - T::one()) * lit(0.5));
    let angle = s.min(T::one()).asin();
    let angle = if cos_a >= T::zero() { angle } else { T::pi() - angle };
    let gamma = angle * lit::<T>(0.5 * crate::spaces::ORIENT);
    if gamma.abs() >= T::frac_pi_2() {
        return Err(CentralError::OutOfDomain(
            "point reflections are not generated by this family",
        ));
    }
    Ok(ActionSpec::SphereRotation { pole: [pole.x, pole.y, pole.z], gamma })
}

/// Recover a hyperbolic-rotation spec from an elliptic `SO(2,1)` matrix.
pub fn hyperbolic_rotation_from_matrix<T: Real>(r: &Matrix3<T>) -> Result<ActionSpec<T>> {
    // fixed point: eigenvector of eigenvalue 1, must be timelike
    let a = r - Matrix3::identity();
    let rows: Vec<Vector3<T>> = (0..3).map(|i| a.row(i).transpose()).collect();
    let mut best = Vector3::zeros();
    let mut best_n = T::zero();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let c = rows[i].cross(&rows[j]);
        if c.norm() > best_n {
            best_n = c.norm();
            best = c;
        }
    }
    if best_n < lit(1e-12) {
        return Err(CentralError::OutOfDomain("matrix has no isolated fixed point"));
    }
    let b = mink(&best, &best);
    if b >= T::zero() {
        return Err(CentralError::OutOfDomain("fixed direction is not a real point"));
    }
    let mut p = best / (-b).sqrt();
    if p.z < T::zero() {
        p = -p;
    }
    let pole = Point::hyperboloid(p)?;
    let (e1, e2) = crate::spaces::tangent_basis(&pole);
    let im = r * e1;
    let angle = mink(&im, &e2).atan2(mink(&im, &e1));
    let gamma = angle * lit::<T>(0.5 * crate::spaces::ORIENT);
    if gamma.abs() >= T::frac_pi_2() {
        return Err(CentralError::OutOfDomain(
            "point reflections are not generated by this family",
        ));
    }
    Ok(ActionSpec::HyperbolicRotation { pole: [p.x, p.y, p.z], gamma })
}
