//! Chart-free geometric primitives for the four model spaces.
//!
//! Points live in embeddings: the plane and torus use two coordinates, the
//! sphere a euclidean unit 3-vector, the hyperbolic plane a vector on the
//! upper sheet of `x^2 + y^2 - z^2 = -1` in Minkowski 3-space. Polar charts
//! exist only for I/O and for cross-checking chart formulas; all interior
//! computation is done on the embeddings.
//!
//! Orientation is pinned once: `ORIENT = +1` means the symplectic pairing is
//! `dp ∧ dq` on flat spaces and `det[m, u, w]` on the curved ones, and every
//! sign in the library (Hamiltonian fields, triangle areas, rotation senses)
//! is derived from that single choice.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{CentralError, Result};
use crate::scalar::{clamp_unit, half, lit, Real};

/// Global orientation convention; all signs in the library trace back here.
pub const ORIENT: f64 = 1.0;

/// Embedding drift below this is left untouched.
pub const RENORM_TRIGGER: f64 = 1e-9;
/// Embedding drift above this is a hard error; in between we renormalize.
pub const EMBED_HARD: f64 = 1e-6;
/// Step for geodesic central differences of scalar fields.
pub const FD_STEP: f64 = 1e-6;

/// Selector for the model geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelSpace {
    Plane,
    Torus,
    Sphere,
    Hyperbolic,
}

impl ModelSpace {
    pub fn is_flat(self) -> bool {
        matches!(self, ModelSpace::Plane | ModelSpace::Torus)
    }

    /// Name used in CLI configs and error records.
    pub fn name(self) -> &'static str {
        match self {
            ModelSpace::Plane => "plane",
            ModelSpace::Torus => "torus",
            ModelSpace::Sphere => "sphere",
            ModelSpace::Hyperbolic => "hyperbolic",
        }
    }
}

/// A phase-space point in the embedding of its model space.
///
/// Flat spaces store `(p, q)` in `x, y` with `z = 0`; torus angles are kept
/// reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point<T: Real> {
    space: ModelSpace,
    coords: Vector3<T>,
}

/// A centered tangent element `τ = (m, v)` of the standard groupoid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector<T: Real> {
    pub base: Point<T>,
    pub vec: Vector3<T>,
}

/// An ordered pair `(m₋, m₊)` on one model space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPair<T: Real> {
    pub minus: Point<T>,
    pub plus: Point<T>,
}

impl<T: Real> PointPair<T> {
    pub fn new(minus: Point<T>, plus: Point<T>) -> Result<Self> {
        if minus.space() != plus.space() {
            return Err(CentralError::SpaceMismatch);
        }
        Ok(PointPair { minus, plus })
    }

    /// Swap source and target.
    pub fn swapped(self) -> Self {
        PointPair { minus: self.plus, plus: self.minus }
    }
}

fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::two_pi();
    let mut y = x % tau;
    if y < T::zero() {
        y += tau;
    }
    // `%` can return exactly tau after the correction for tiny negatives
    if y >= tau {
        y -= tau;
    }
    y
}

/// Shortest representative of an angle difference, in `(-π, π]`.
fn wrap_diff<T: Real>(x: T) -> T {
    let tau = T::two_pi();
    let mut y = x % tau;
    if y > T::pi() {
        y -= tau;
    }
    if y <= -T::pi() {
        y += tau;
    }
    y
}

/// Minkowski pairing with signature (+, +, -).
#[inline]
pub fn mink<T: Real>(u: &Vector3<T>, w: &Vector3<T>) -> T {
    u.x * w.x + u.y * w.y - u.z * w.z
}

/// Flip the sign of the z component (Minkowski metric applied to a vector).
#[inline]
fn mink_flip<T: Real>(u: &Vector3<T>) -> Vector3<T> {
    Vector3::new(u.x, u.y, -u.z)
}

#[inline]
fn det3<T: Real>(a: &Vector3<T>, b: &Vector3<T>, c: &Vector3<T>) -> T {
    a.dot(&b.cross(c))
}

impl<T: Real> Point<T> {
    pub fn space(&self) -> ModelSpace {
        self.space
    }

    /// Raw embedding coordinates.
    pub fn coords(&self) -> Vector3<T> {
        self.coords
    }

    pub fn plane(p: T, q: T) -> Self {
        Point { space: ModelSpace::Plane, coords: Vector3::new(p, q, T::zero()) }
    }

    pub fn torus(p: T, q: T) -> Self {
        Point {
            space: ModelSpace::Torus,
            coords: Vector3::new(wrap_angle(p), wrap_angle(q), T::zero()),
        }
    }

    /// Build a sphere point from an (approximately unit) 3-vector.
    pub fn sphere(v: Vector3<T>) -> Result<Self> {
        Point { space: ModelSpace::Sphere, coords: v }.renormalized()
    }

    /// Build a hyperbolic point from an (approximately on-sheet) 3-vector.
    pub fn hyperboloid(v: Vector3<T>) -> Result<Self> {
        Point { space: ModelSpace::Hyperbolic, coords: v }.renormalized()
    }

    pub fn sphere_polar(theta: T, phi: T) -> Self {
        let (st, ct) = (theta.sin(), theta.cos());
        Point {
            space: ModelSpace::Sphere,
            coords: Vector3::new(st * phi.cos(), st * phi.sin(), ct),
        }
    }

    pub fn hyperbolic_polar(rho: T, phi: T) -> Self {
        let (sh, ch) = (rho.sinh(), rho.cosh());
        Point {
            space: ModelSpace::Hyperbolic,
            coords: Vector3::new(sh * phi.cos(), sh * phi.sin(), ch),
        }
    }

    /// Polar chart `(θ, φ)` of a sphere point, `φ ∈ [0, 2π)`.
    pub fn to_sphere_polar(&self) -> (T, T) {
        let theta = clamp_unit(self.coords.z).acos();
        let phi = wrap_angle(self.coords.y.atan2(self.coords.x));
        (theta, phi)
    }

    /// Polar chart `(ρ, φ)` of a hyperbolic point, `φ ∈ [0, 2π)`.
    pub fn to_hyperbolic_polar(&self) -> (T, T) {
        let rho = self.coords.z.max(T::one()).acosh();
        let phi = wrap_angle(self.coords.y.atan2(self.coords.x));
        (rho, phi)
    }

    /// Flat coordinates `(p, q)` of a plane or torus point.
    pub fn to_flat(&self) -> (T, T) {
        (self.coords.x, self.coords.y)
    }

    /// Deviation from the embedding constraint.
    pub fn embedding_defect(&self) -> T {
        match self.space {
            ModelSpace::Plane | ModelSpace::Torus => T::zero(),
            ModelSpace::Sphere => (self.coords.norm() - T::one()).abs(),
            ModelSpace::Hyperbolic => {
                let b = mink(&self.coords, &self.coords);
                let sheet = if self.coords.z > T::zero() { T::zero() } else { T::one() };
                (b + T::one()).abs() + sheet
            }
        }
    }

    /// Renormalize onto the embedding; errors when the drift exceeds the hard band.
    pub fn renormalized(self) -> Result<Self> {
        match self.space {
            ModelSpace::Plane => Ok(self),
            ModelSpace::Torus => Ok(Point::torus(self.coords.x, self.coords.y)),
            ModelSpace::Sphere | ModelSpace::Hyperbolic => {
                let defect = self.embedding_defect();
                if defect <= lit(RENORM_TRIGGER) {
                    return Ok(self);
                }
                if defect > lit(EMBED_HARD) {
                    return Err(CentralError::EmbeddingViolation {
                        defect: defect.to_subset().unwrap_or(f64::NAN),
                    });
                }
                let c = self.coords;
                let coords = if self.space == ModelSpace::Sphere {
                    c / c.norm()
                } else {
                    c / (-mink(&c, &c)).sqrt()
                };
                Ok(Point { space: self.space, coords })
            }
        }
    }

    fn rebuilt(space: ModelSpace, coords: Vector3<T>) -> Result<Self> {
        match space {
            ModelSpace::Plane => Ok(Point::plane(coords.x, coords.y)),
            ModelSpace::Torus => Ok(Point::torus(coords.x, coords.y)),
            ModelSpace::Sphere => {
                let n = coords.norm();
                if (n - T::one()).abs() > lit(EMBED_HARD) {
                    return Err(CentralError::EmbeddingViolation {
                        defect: (n - T::one()).abs().to_subset().unwrap_or(f64::NAN),
                    });
                }
                Ok(Point { space, coords: coords / n })
            }
            ModelSpace::Hyperbolic => {
                let b = mink(&coords, &coords);
                if (b + T::one()).abs() > lit(EMBED_HARD) || coords.z <= T::zero() {
                    return Err(CentralError::EmbeddingViolation {
                        defect: (b + T::one()).abs().to_subset().unwrap_or(f64::NAN),
                    });
                }
                Ok(Point { space, coords: coords / (-b).sqrt() })
            }
        }
    }
}

impl<T: Real> TangentVector<T> {
    /// Project a raw ambient vector onto the tangent space at `base`.
    pub fn new(base: Point<T>, raw: Vector3<T>) -> Result<Self> {
        let proj = project_tangent(&base, &raw);
        let defect = (raw - proj).norm();
        if defect > lit::<T>(EMBED_HARD) * T::one().max(raw.norm()) {
            return Err(CentralError::EmbeddingViolation {
                defect: defect.to_subset().unwrap_or(f64::NAN),
            });
        }
        Ok(TangentVector { base, vec: proj })
    }

    pub fn zero(base: Point<T>) -> Self {
        TangentVector { base, vec: Vector3::zeros() }
    }

    /// Geodesic speed: euclidean norm on flat spaces and the sphere,
    /// Minkowski norm on the hyperboloid.
    pub fn norm(&self) -> T {
        match self.base.space() {
            ModelSpace::Hyperbolic => mink(&self.vec, &self.vec).max(T::zero()).sqrt(),
            _ => self.vec.norm(),
        }
    }

    pub fn scaled(&self, s: T) -> Self {
        TangentVector { base: self.base, vec: self.vec * s }
    }

    pub fn negated(&self) -> Self {
        self.scaled(-T::one())
    }

    /// Membership in the standard central groupoid.
    pub fn in_standard_groupoid(&self) -> bool {
        let fp2 = T::frac_pi_2();
        match self.base.space() {
            ModelSpace::Plane | ModelSpace::Hyperbolic => true,
            ModelSpace::Sphere => self.norm() < fp2,
            ModelSpace::Torus => self.vec.x.abs() < fp2 && self.vec.y.abs() < fp2,
        }
    }
}

/// Orthogonal projection of an ambient vector onto the tangent space at `m`.
pub fn project_tangent<T: Real>(m: &Point<T>, raw: &Vector3<T>) -> Vector3<T> {
    let c = m.coords();
    match m.space() {
        ModelSpace::Plane | ModelSpace::Torus => Vector3::new(raw.x, raw.y, T::zero()),
        ModelSpace::Sphere => raw - c * raw.dot(&c),
        ModelSpace::Hyperbolic => raw + c * mink(raw, &c),
    }
}

/// Orthonormal tangent basis `(e₁, e₂)` at `m`, positively oriented:
/// `symplectic_pairing(m, e₁, e₂) = +1`.
pub fn tangent_basis<T: Real>(m: &Point<T>) -> (Vector3<T>, Vector3<T>) {
    match m.space() {
        ModelSpace::Plane | ModelSpace::Torus => {
            (Vector3::new(T::one(), T::zero(), T::zero()), Vector3::new(T::zero(), T::one(), T::zero()))
        }
        ModelSpace::Sphere => {
            let c = m.coords();
            let seed = if c.x.abs() < lit(0.9) {
                Vector3::new(T::one(), T::zero(), T::zero())
            } else {
                Vector3::new(T::zero(), T::one(), T::zero())
            };
            let e1n = seed - c * seed.dot(&c);
            let e1 = e1n / e1n.norm();
            let e2 = c.cross(&e1);
            (e1, e2)
        }
        ModelSpace::Hyperbolic => {
            let c = m.coords();
            let seed = if c.x.abs() < c.y.abs() + T::one() {
                Vector3::new(T::one(), T::zero(), T::zero())
            } else {
                Vector3::new(T::zero(), T::one(), T::zero())
            };
            let e1n = seed + c * mink(&seed, &c);
            let e1 = e1n / mink(&e1n, &e1n).sqrt();
            let e2 = mink_flip(&c.cross(&e1));
            (e1, e2)
        }
    }
}

/// Rotate a tangent vector at `m` by +90 degrees in the oriented frame.
///
/// This is the complex structure tied to `ORIENT`; Hamiltonian fields are
/// `rot_plus90(grad h)` and the central map is the opposite rotation.
pub fn rot_plus90<T: Real>(m: &Point<T>, u: &Vector3<T>) -> Vector3<T> {
    match m.space() {
        ModelSpace::Plane | ModelSpace::Torus => Vector3::new(-u.y, u.x, T::zero()),
        ModelSpace::Sphere => m.coords().cross(u),
        ModelSpace::Hyperbolic => mink_flip(&m.coords().cross(u)),
    }
}

/// Rotate a tangent vector at `m` by -90 degrees in the oriented frame.
pub fn rot_minus90<T: Real>(m: &Point<T>, u: &Vector3<T>) -> Vector3<T> {
    -rot_plus90(m, u)
}

/// Geodesic distance between two points of one space.
pub fn distance<T: Real>(a: &Point<T>, b: &Point<T>) -> Result<T> {
    if a.space() != b.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let (ca, cb) = (a.coords(), b.coords());
    Ok(match a.space() {
        ModelSpace::Plane => (cb - ca).norm(),
        ModelSpace::Torus => {
            let dp = wrap_diff(cb.x - ca.x);
            let dq = wrap_diff(cb.y - ca.y);
            (dp * dp + dq * dq).sqrt()
        }
        ModelSpace::Sphere => ca.cross(&cb).norm().atan2(ca.dot(&cb)),
        ModelSpace::Hyperbolic => {
            // chordal form: B(a-b, a-b) = 4 sinh^2(d/2), no cancellation near d = 0
            let delta = cb - ca;
            let chord2 = mink(&delta, &delta).max(T::zero());
            lit::<T>(2.0) * (half(chord2.sqrt())).asinh()
        }
    })
}

fn check_based<T: Real>(m: &Point<T>, v: &TangentVector<T>) -> Result<()> {
    if v.base.space() != m.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let d = distance(&v.base, m)?;
    if d > lit(EMBED_HARD) {
        return Err(CentralError::SpaceMismatch);
    }
    Ok(())
}

/// Geodesic endpoint `Exp_m(v)` at unit parameter.
pub fn exp_map<T: Real>(m: &Point<T>, v: &TangentVector<T>) -> Result<Point<T>> {
    check_based(m, v)?;
    exp_vec(m, &v.vec)
}

/// Internal exponential on raw tangent components.
pub(crate) fn exp_vec<T: Real>(m: &Point<T>, v: &Vector3<T>) -> Result<Point<T>> {
    let c = m.coords();
    match m.space() {
        ModelSpace::Plane => Ok(Point::plane(c.x + v.x, c.y + v.y)),
        ModelSpace::Torus => Ok(Point::torus(c.x + v.x, c.y + v.y)),
        ModelSpace::Sphere => {
            let n = v.norm();
            if n < lit(1e-300) {
                return Ok(*m);
            }
            Point::rebuilt(ModelSpace::Sphere, c * n.cos() + (v / n) * n.sin())
        }
        ModelSpace::Hyperbolic => {
            let n2 = mink(v, v);
            let n = n2.max(T::zero()).sqrt();
            if n < lit(1e-300) {
                return Ok(*m);
            }
            Point::rebuilt(ModelSpace::Hyperbolic, c * n.cosh() + (v / n) * n.sinh())
        }
    }
}

/// Inverse of the exponential map along the short geodesic.
pub fn log_map<T: Real>(m: &Point<T>, m2: &Point<T>) -> Result<TangentVector<T>> {
    if m.space() != m2.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let (ca, cb) = (m.coords(), m2.coords());
    let vec = match m.space() {
        ModelSpace::Plane => cb - ca,
        ModelSpace::Torus => {
            let dp = wrap_diff(cb.x - ca.x);
            let dq = wrap_diff(cb.y - ca.y);
            if (dp.abs() - T::pi()).abs() < lit(1e-12) || (dq.abs() - T::pi()).abs() < lit(1e-12) {
                return Err(CentralError::CutLocus("torus angle difference of pi"));
            }
            Vector3::new(dp, dq, T::zero())
        }
        ModelSpace::Sphere => {
            let cosd = clamp_unit(ca.dot(&cb));
            let cross = ca.cross(&cb).norm();
            if cosd < T::zero() && cross < lit(1e-9) {
                return Err(CentralError::CutLocus("antipodal sphere points"));
            }
            let d = cross.atan2(cosd);
            let dir = cb - ca * cosd;
            let dn = dir.norm();
            if dn < lit(1e-300) {
                Vector3::zeros()
            } else {
                dir * (d / dn)
            }
        }
        ModelSpace::Hyperbolic => {
            let delta = cb - ca;
            let chord2 = mink(&delta, &delta).max(T::zero());
            let d = lit::<T>(2.0) * (half(chord2.sqrt())).asinh();
            let dir = cb - ca * d.cosh();
            let dn = mink(&dir, &dir).max(T::zero()).sqrt();
            if dn < lit(1e-300) {
                Vector3::zeros()
            } else {
                dir * (d / dn)
            }
        }
    };
    Ok(TangentVector { base: *m, vec })
}

/// Geodesic inversion through `center`.
pub fn reflect<T: Real>(center: &Point<T>, m: &Point<T>) -> Result<Point<T>> {
    if center.space() != m.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let (cc, cm) = (center.coords(), m.coords());
    match center.space() {
        ModelSpace::Plane => Ok(Point::plane(
            lit::<T>(2.0) * cc.x - cm.x,
            lit::<T>(2.0) * cc.y - cm.y,
        )),
        ModelSpace::Torus => {
            let dp = wrap_diff(cm.x - cc.x);
            let dq = wrap_diff(cm.y - cc.y);
            if (dp.abs() - T::pi()).abs() < lit(1e-12) || (dq.abs() - T::pi()).abs() < lit(1e-12) {
                return Err(CentralError::CutLocus("torus angle difference of pi"));
            }
            Ok(Point::torus(lit::<T>(2.0) * cc.x - cm.x, lit::<T>(2.0) * cc.y - cm.y))
        }
        ModelSpace::Sphere => {
            let d = cc.dot(&cm);
            if d < -T::one() + lit(1e-12) {
                return Err(CentralError::CutLocus("antipodal sphere points"));
            }
            Point::rebuilt(ModelSpace::Sphere, cc * (lit::<T>(2.0) * d) - cm)
        }
        ModelSpace::Hyperbolic => {
            let b = mink(&cm, &cc);
            Point::rebuilt(ModelSpace::Hyperbolic, cc * (lit::<T>(-2.0) * b) - cm)
        }
    }
}

/// Midpoint of the short geodesic arc between `a` and `b`.
pub fn midpoint<T: Real>(a: &Point<T>, b: &Point<T>) -> Result<Point<T>> {
    if a.space() != b.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let (ca, cb) = (a.coords(), b.coords());
    match a.space() {
        ModelSpace::Plane => Ok(Point::plane(half(ca.x + cb.x), half(ca.y + cb.y))),
        ModelSpace::Torus => {
            let v = log_map(a, b)?;
            exp_vec(a, &(v.vec * half(T::one())))
        }
        ModelSpace::Sphere => {
            let s = ca + cb;
            if s.norm() < lit(1e-9) {
                return Err(CentralError::CutLocus("antipodal sphere points"));
            }
            Point::rebuilt(ModelSpace::Sphere, s / s.norm())
        }
        ModelSpace::Hyperbolic => {
            let s = ca + cb;
            Point::rebuilt(ModelSpace::Hyperbolic, s / (-mink(&s, &s)).sqrt())
        }
    }
}

/// The symmetric exponential map `τ = (m, v) ↦ (Exp_m(-v), Exp_m(+v))`.
pub fn symmetric_exp<T: Real>(tau: &TangentVector<T>) -> Result<PointPair<T>> {
    if !tau.in_standard_groupoid() {
        return Err(CentralError::OutsideGroupoid);
    }
    let minus = exp_vec(&tau.base, &(-tau.vec))?;
    let plus = exp_vec(&tau.base, &tau.vec)?;
    PointPair::new(minus, plus)
}

/// Inverse of the symmetric exponential map on its image.
pub fn symmetric_exp_inverse<T: Real>(pair: &PointPair<T>) -> Result<TangentVector<T>> {
    let base = midpoint(&pair.minus, &pair.plus).map_err(|e| match e {
        CentralError::CutLocus(_) => CentralError::OutsideImage,
        other => other,
    })?;
    let v = log_map(&base, &pair.plus).map_err(|e| match e {
        CentralError::CutLocus(_) => CentralError::OutsideImage,
        other => other,
    })?;
    Ok(v)
}

/// Symplectic pairing `ω(u, w)` of two tangent vectors at `m`.
pub fn symplectic_pairing<T: Real>(
    m: &Point<T>,
    u: &TangentVector<T>,
    w: &TangentVector<T>,
) -> Result<T> {
    check_based(m, u)?;
    check_based(m, w)?;
    Ok(pairing_raw(m, &u.vec, &w.vec))
}

/// Pairing on raw tangent components; `ORIENT` enters here and only here.
pub(crate) fn pairing_raw<T: Real>(m: &Point<T>, u: &Vector3<T>, w: &Vector3<T>) -> T {
    let value = match m.space() {
        ModelSpace::Plane | ModelSpace::Torus => u.x * w.y - u.y * w.x,
        ModelSpace::Sphere | ModelSpace::Hyperbolic => det3(&m.coords(), u, w),
    };
    lit::<T>(ORIENT) * value
}

/// Parallel transport of a tangent vector at `a` to `b` along the short geodesic.
pub fn parallel_transport<T: Real>(
    a: &Point<T>,
    b: &Point<T>,
    u: &Vector3<T>,
) -> Result<Vector3<T>> {
    match a.space() {
        ModelSpace::Plane | ModelSpace::Torus => Ok(*u),
        ModelSpace::Sphere => {
            let t = log_map(a, b)?;
            let d = t.norm();
            if d < lit(1e-14) {
                return Ok(*u);
            }
            let that = t.vec / d;
            let along = u.dot(&that);
            let perp = u - that * along;
            Ok(perp + (that * d.cos() - a.coords() * d.sin()) * along)
        }
        ModelSpace::Hyperbolic => {
            let t = log_map(a, b)?;
            let d = t.norm();
            if d < lit(1e-14) {
                return Ok(*u);
            }
            let that = t.vec / d;
            let along = mink(u, &that);
            let perp = u - that * along;
            Ok(perp + (that * d.cosh() + a.coords() * d.sinh()) * along)
        }
    }
}

/// A real scalar field on one model space, with an optionally analytic gradient.
pub trait ScalarField<T: Real> {
    fn space(&self) -> ModelSpace;
    fn eval(&self, m: &Point<T>) -> T;

    /// Riemannian gradient in the embedding. The default uses geodesic
    /// central differences, which stay regular at the chart poles.
    fn gradient(&self, m: &Point<T>) -> Result<Vector3<T>> {
        fd_gradient(m, |p| self.eval(p))
    }
}

/// Gradient of a raw closure by geodesic central differences.
pub fn fd_gradient<T: Real, F: Fn(&Point<T>) -> T>(m: &Point<T>, f: F) -> Result<Vector3<T>> {
    let h = lit::<T>(FD_STEP);
    let (e1, e2) = tangent_basis(m);
    let mut g = Vector3::zeros();
    for e in [e1, e2] {
        let fp = f(&exp_vec(m, &(e * h))?);
        let fm = f(&exp_vec(m, &(e * -h))?);
        g += e * ((fp - fm) / (lit::<T>(2.0) * h));
    }
    Ok(g)
}

/// Scalar field given by a plain closure.
pub struct FnField<T: Real, F: Fn(&Point<T>) -> T> {
    pub space: ModelSpace,
    pub f: F,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real, F: Fn(&Point<T>) -> T> FnField<T, F> {
    pub fn new(space: ModelSpace, f: F) -> Self {
        FnField { space, f, _marker: std::marker::PhantomData }
    }
}

impl<T: Real, F: Fn(&Point<T>) -> T> ScalarField<T> for FnField<T, F> {
    fn space(&self) -> ModelSpace {
        self.space
    }
    fn eval(&self, m: &Point<T>) -> T {
        (self.f)(m)
    }
}

/// Hamiltonian vector field `v_h` defined by `dh + v_h ⌋ ω = 0`.
///
/// With the flat convention this reads `ṗ = -∂h/∂q`, `q̇ = ∂h/∂p`.
pub fn hamiltonian_vector_field<T: Real>(
    h: &dyn ScalarField<T>,
    m: &Point<T>,
) -> Result<TangentVector<T>> {
    if h.space() != m.space() {
        return Err(CentralError::SpaceMismatch);
    }
    let g = h.gradient(m)?;
    Ok(TangentVector { base: *m, vec: rot_plus90(m, &g) })
}

/// Polar coordinate frame `(θ̂, φ̂)` on the sphere or `(ρ̂, φ̂)` on the
/// hyperboloid; errors at the chart pole.
pub fn polar_frame<T: Real>(m: &Point<T>) -> Result<(Vector3<T>, Vector3<T>)> {
    let c = m.coords();
    let rxy = (c.x * c.x + c.y * c.y).sqrt();
    if rxy < lit(1e-12) {
        return Err(CentralError::ChartSingularity);
    }
    let (cphi, sphi) = (c.x / rxy, c.y / rxy);
    match m.space() {
        ModelSpace::Sphere => {
            let theta = clamp_unit(c.z).acos();
            let (st, ct) = (theta.sin(), theta.cos());
            let theta_hat = Vector3::new(ct * cphi, ct * sphi, -st);
            let phi_hat = Vector3::new(-sphi, cphi, T::zero());
            Ok((theta_hat, phi_hat))
        }
        ModelSpace::Hyperbolic => {
            let rho = c.z.max(T::one()).acosh();
            let (sh, ch) = (rho.sinh(), rho.cosh());
            let rho_hat = Vector3::new(ch * cphi, ch * sphi, sh);
            let phi_hat = Vector3::new(-sphi, cphi, T::zero());
            Ok((rho_hat, phi_hat))
        }
        _ => Err(CentralError::ChartSingularity),
    }
}

/// Shortest angular difference helper, exposed for the torus lifts.
pub fn torus_diff<T: Real>(a: T, b: T) -> T {
    wrap_diff(a - b)
}

/// Components of a raw tangent vector in the oriented basis at `m`,
/// taken with the space's own metric pairing.
pub fn tangent_components<T: Real>(m: &Point<T>, v: &Vector3<T>) -> (T, T) {
    let (e1, e2) = tangent_basis(m);
    match m.space() {
        ModelSpace::Plane | ModelSpace::Torus => (v.x, v.y),
        ModelSpace::Sphere => (v.dot(&e1), v.dot(&e2)),
        ModelSpace::Hyperbolic => (mink(v, &e1), mink(v, &e2)),
    }
}

/// Rebuild a tangent vector at `m` from components in the oriented basis.
pub fn tangent_from_components<T: Real>(m: &Point<T>, a: T, b: T) -> Vector3<T> {
    let (e1, e2) = tangent_basis(m);
    e1 * a + e2 * b
}
