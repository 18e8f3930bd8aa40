//! Symplectic areas of geodesic triangles and quadrilaterals determined by
//! their side midpoints, the per-space validity constraints, and the
//! vertex/midpoint reconstructions.
//!
//! Slot convention for `triangle_area(m, m1, m2)`: the circumscribed circuit
//! is `a → b → c → a` with `m1 = mid(a,b)`, `m2 = mid(b,c)` and the closing
//! side carrying `m = mid(c,a)`. The returned value is the signed symplectic
//! area of that circuit; it is the kernel of the composition law.

use nalgebra::{Matrix3, Vector3};

use crate::error::{CentralError, Result};
use crate::scalar::{clamp_unit, half, lit, Real};
use crate::spaces::{
    self, distance, midpoint, mink, pairing_raw, torus_diff, ModelSpace, Point, ORIENT,
};

/// Dot products below this are treated as exactly orthogonal midpoints.
const ORTH_TOL: f64 = 1e-12;
/// Acceptance tolerance for reconstruction midpoint conditions.
const RECON_TOL: f64 = 1e-8;

const TORUS_TRIANGLE: &str = "torus midpoint separations must stay below pi/2";
const SPHERE_TRIANGLE: &str = "pairwise midpoint dot products must share one sign";
const HYPERBOLIC_TRIANGLE: &str = "midpoint determinant must stay below one in modulus";
const SPHERE_QUAD: &str = "consecutive midpoint triple determinants must share one sign";
const HYPERBOLIC_QUAD: &str = "quadrilateral cosine combination must stay below one in modulus";

/// A midpoint triplet with its validity verdict.
#[derive(Debug, Clone, Copy)]
pub struct MidpointTriangle<T: Real> {
    pub m: Point<T>,
    pub m1: Point<T>,
    pub m2: Point<T>,
    pub valid: bool,
    pub reason: Option<&'static str>,
}

impl<T: Real> MidpointTriangle<T> {
    pub fn new(m: Point<T>, m1: Point<T>, m2: Point<T>) -> Result<Self> {
        if m.space() != m1.space() || m.space() != m2.space() {
            return Err(CentralError::SpaceMismatch);
        }
        let (valid, reason) = match triangle_constraint(&m, &m1, &m2) {
            Ok(()) => (true, None),
            Err(CentralError::InvalidMidpoints { constraint }) => (false, Some(constraint)),
            Err(other) => return Err(other),
        };
        Ok(MidpointTriangle { m, m1, m2, valid, reason })
    }
}

fn wedge<T: Real>(a: (T, T), b: (T, T)) -> T {
    a.0 * b.1 - a.1 * b.0
}

fn det3<T: Real>(a: &Vector3<T>, b: &Vector3<T>, c: &Vector3<T>) -> T {
    a.dot(&b.cross(c))
}

/// Shortest-representative lift of `b` around `a` on the torus.
fn torus_lift<T: Real>(a: &Vector3<T>, b: &Point<T>) -> Result<Vector3<T>> {
    let (bp, bq) = b.to_flat();
    let dp = torus_diff(bp, a.x);
    let dq = torus_diff(bq, a.y);
    if (dp.abs() - T::pi()).abs() < lit(1e-12) || (dq.abs() - T::pi()).abs() < lit(1e-12) {
        return Err(CentralError::CutLocus("torus angle difference of pi"));
    }
    Ok(Vector3::new(a.x + dp, a.y + dq, T::zero()))
}

/// Check the space's midpoint-triplet constraint.
pub fn triangle_constraint<T: Real>(m: &Point<T>, m1: &Point<T>, m2: &Point<T>) -> Result<()> {
    match m.space() {
        ModelSpace::Plane => Ok(()),
        ModelSpace::Torus => {
            let fp2 = T::frac_pi_2();
            for (a, b) in [(m, m1), (m, m2), (m1, m2)] {
                let (ap, aq) = a.to_flat();
                let (bp, bq) = b.to_flat();
                if torus_diff(ap, bp).abs() >= fp2 || torus_diff(aq, bq).abs() >= fp2 {
                    return Err(CentralError::InvalidMidpoints { constraint: TORUS_TRIANGLE });
                }
            }
            Ok(())
        }
        ModelSpace::Sphere => {
            sphere_sigma(m, m1, m2).map(|_| ())
        }
        ModelSpace::Hyperbolic => {
            let d = det3(&m.coords(), &m1.coords(), &m2.coords());
            if d.abs() >= T::one() {
                return Err(CentralError::InvalidMidpoints { constraint: HYPERBOLIC_TRIANGLE });
            }
            Ok(())
        }
    }
}

/// Common sign of the pairwise dot products: -1, 0 or +1.
fn sphere_sigma<T: Real>(m: &Point<T>, m1: &Point<T>, m2: &Point<T>) -> Result<i8> {
    let dots = [
        m.coords().dot(&m1.coords()),
        m1.coords().dot(&m2.coords()),
        m2.coords().dot(&m.coords()),
    ];
    let mut sign = 0i8;
    for d in dots {
        if d.abs() <= lit(ORTH_TOL) {
            continue;
        }
        let s = if d > T::zero() { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            return Err(CentralError::InvalidMidpoints { constraint: SPHERE_TRIANGLE });
        }
    }
    Ok(sign)
}

/// Signed symplectic area of the geodesic triangle with the given midpoints.
pub fn triangle_area<T: Real>(m: &Point<T>, m1: &Point<T>, m2: &Point<T>) -> Result<T> {
    if m.space() != m1.space() || m.space() != m2.space() {
        return Err(CentralError::SpaceMismatch);
    }
    match m.space() {
        ModelSpace::Plane => {
            let (a, b, c) = (m.to_flat(), m1.to_flat(), m2.to_flat());
            Ok(lit::<T>(2.0) * (wedge(a, b) + wedge(b, c) + wedge(c, a)))
        }
        ModelSpace::Torus => {
            triangle_constraint(m, m1, m2)?;
            let base = m.coords();
            let l1 = torus_lift(&base, m1)?;
            let l2 = torus_lift(&base, m2)?;
            let d1 = (l1.x - base.x, l1.y - base.y);
            let d2 = (l2.x - base.x, l2.y - base.y);
            Ok(lit::<T>(2.0) * wedge(d1, d2))
        }
        ModelSpace::Sphere => {
            let sigma = sphere_sigma(m, m1, m2)?;
            let d = clamp_unit(det3(&m.coords(), &m1.coords(), &m2.coords()));
            if sigma == 0 {
                // mutually orthogonal midpoints: area is half a great sphere
                return Ok(lit::<T>(ORIENT) * d.signum() * T::pi());
            }
            let w = (T::one() - d * d).sqrt() * lit::<T>(f64::from(sigma));
            Ok(lit::<T>(2.0) * d.atan2(w))
        }
        ModelSpace::Hyperbolic => {
            let d = det3(&m.coords(), &m1.coords(), &m2.coords());
            if d.abs() >= T::one() {
                return Err(CentralError::InvalidMidpoints { constraint: HYPERBOLIC_TRIANGLE });
            }
            Ok(lit::<T>(2.0) * d.asin())
        }
    }
}

/// Reflection through a point, as a matrix on the embedding.
fn reflection_matrix<T: Real>(c: &Point<T>) -> Matrix3<T> {
    let v = c.coords();
    match c.space() {
        ModelSpace::Sphere => {
            let two = lit::<T>(2.0);
            Matrix3::identity() * -T::one() + (v * v.transpose()) * two
        }
        ModelSpace::Hyperbolic => {
            let gv = Vector3::new(v.x, v.y, -v.z);
            Matrix3::identity() * -T::one() - (v * gv.transpose()) * lit::<T>(2.0)
        }
        _ => unreachable!(),
    }
}

/// Null-space direction of a near-singular 3x3 matrix via row crosses.
fn null_direction<T: Real>(a: &Matrix3<T>) -> Option<Vector3<T>> {
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
    if best_n < lit(1e-11) {
        None
    } else {
        Some(best / best_n)
    }
}

fn vertices_match<T: Real>(
    m: &Point<T>,
    m1: &Point<T>,
    m2: &Point<T>,
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
) -> bool {
    let check = |x: &Point<T>, y: &Point<T>, mid: &Point<T>| -> bool {
        match midpoint(x, y) {
            Ok(p) => matches!(distance(&p, mid), Ok(d) if d < lit(RECON_TOL)),
            Err(_) => false,
        }
    };
    check(a, b, m1) && check(b, c, m2) && check(c, a, m)
}

/// Vertices `(a, b, c)` of the circumscribed geodesic triangle:
/// `mid(a,b) = m1`, `mid(b,c) = m2`, `mid(c,a) = m`.
pub fn triangle_vertices<T: Real>(
    m: &Point<T>,
    m1: &Point<T>,
    m2: &Point<T>,
) -> Result<(Point<T>, Point<T>, Point<T>)> {
    if m.space() != m1.space() || m.space() != m2.space() {
        return Err(CentralError::SpaceMismatch);
    }
    match m.space() {
        ModelSpace::Plane => {
            let (mp, m1p, m2p) = (m.coords(), m1.coords(), m2.coords());
            let a = mp + m1p - m2p;
            let b = m1p + m2p - mp;
            let c = m2p + mp - m1p;
            Ok((
                Point::plane(a.x, a.y),
                Point::plane(b.x, b.y),
                Point::plane(c.x, c.y),
            ))
        }
        ModelSpace::Torus => {
            triangle_constraint(m, m1, m2)?;
            let base = m.coords();
            let l1 = torus_lift(&base, m1)?;
            let l2 = torus_lift(&base, m2)?;
            let a = base + l1 - l2;
            let b = l1 + l2 - base;
            let c = l2 + base - l1;
            let va = Point::torus(a.x, a.y);
            let vb = Point::torus(b.x, b.y);
            let vc = Point::torus(c.x, c.y);
            if !vertices_match(m, m1, m2, &va, &vb, &vc) {
                return Err(CentralError::DegenerateTriplet);
            }
            Ok((va, vb, vc))
        }
        ModelSpace::Sphere => {
            let p = reflection_matrix(m) * reflection_matrix(m2) * reflection_matrix(m1);
            let axis = null_direction(&(p - Matrix3::identity()))
                .ok_or(CentralError::DegenerateTriplet)?;
            for cand in [axis, -axis] {
                let a = Point::sphere(cand)?;
                let b = Point::sphere(reflection_matrix(m1) * a.coords())?;
                let c = Point::sphere(reflection_matrix(m2) * b.coords())?;
                if vertices_match(m, m1, m2, &a, &b, &c) {
                    return Ok((a, b, c));
                }
            }
            Err(CentralError::DegenerateTriplet)
        }
        ModelSpace::Hyperbolic => {
            let p = reflection_matrix(m) * reflection_matrix(m2) * reflection_matrix(m1);
            let dir = null_direction(&(p - Matrix3::identity()))
                .ok_or(CentralError::DegenerateTriplet)?;
            if mink(&dir, &dir) >= T::zero() {
                return Err(CentralError::DegenerateTriplet);
            }
            let mut v = dir / (-mink(&dir, &dir)).sqrt();
            if v.z < T::zero() {
                v = -v;
            }
            let a = Point::hyperboloid(v)?;
            let b = Point::hyperboloid(reflection_matrix(m1) * a.coords())?;
            let c = Point::hyperboloid(reflection_matrix(m2) * b.coords())?;
            if !vertices_match(m, m1, m2, &a, &b, &c) {
                return Err(CentralError::DegenerateTriplet);
            }
            Ok((a, b, c))
        }
    }
}

fn sphere_vertex_triangle<T: Real>(a: &Vector3<T>, b: &Vector3<T>, c: &Vector3<T>) -> T {
    let num = det3(a, b, c);
    let den = T::one() + a.dot(b) + b.dot(c) + c.dot(a);
    lit::<T>(2.0 * ORIENT) * num.atan2(den)
}

fn hyp_vertex_triangle<T: Real>(a: &Vector3<T>, b: &Vector3<T>, c: &Vector3<T>) -> T {
    let num = det3(a, b, c);
    let den = T::one() - mink(a, b) - mink(b, c) - mink(c, a);
    lit::<T>(2.0 * ORIENT) * num.atan2(den)
}

/// Signed symplectic area of the closed geodesic polygon through `vertices`
/// (the closing edge from the last vertex back to the first is implicit).
pub fn vertex_polygon_area<T: Real>(vertices: &[Point<T>]) -> Result<T> {
    if vertices.len() < 3 {
        return Err(CentralError::DegenerateTriplet);
    }
    let space = vertices[0].space();
    if vertices.iter().any(|v| v.space() != space) {
        return Err(CentralError::SpaceMismatch);
    }
    match space {
        ModelSpace::Plane => {
            let mut acc = T::zero();
            for i in 0..vertices.len() {
                let a = vertices[i].to_flat();
                let b = vertices[(i + 1) % vertices.len()].to_flat();
                acc += wedge(a, b);
            }
            Ok(half(acc))
        }
        ModelSpace::Torus => {
            let mut lift = vec![vertices[0].coords()];
            for i in 1..vertices.len() {
                let prev = *lift.last().unwrap();
                lift.push(torus_lift(&prev, &vertices[i])?);
            }
            let closing = torus_lift(lift.last().unwrap(), &vertices[0])?;
            if (closing - lift[0]).norm() > lit(1e-9) {
                return Err(CentralError::NonreducibleLoop);
            }
            let mut acc = T::zero();
            for i in 0..lift.len() {
                let a = lift[i];
                let b = lift[(i + 1) % lift.len()];
                acc += wedge((a.x, a.y), (b.x, b.y));
            }
            Ok(half(acc))
        }
        ModelSpace::Sphere => {
            for i in 0..vertices.len() {
                let d = distance(&vertices[i], &vertices[(i + 1) % vertices.len()])?;
                if d > T::pi() - lit(1e-9) {
                    return Err(CentralError::CutLocus("polygon edge reaches the antipode"));
                }
            }
            let mut sum = Vector3::zeros();
            for v in vertices {
                sum += v.coords();
            }
            let anchor = if sum.norm() > lit(1e-9) {
                sum / sum.norm()
            } else {
                vertices[0].coords()
            };
            if vertices.iter().any(|v| v.coords().dot(&anchor) < lit::<T>(-1.0 + 1e-6)) {
                return Err(CentralError::CutLocus("polygon wraps around the anchor point"));
            }
            let mut acc = T::zero();
            for i in 0..vertices.len() {
                let a = vertices[i].coords();
                let b = vertices[(i + 1) % vertices.len()].coords();
                acc += sphere_vertex_triangle(&anchor, &a, &b);
            }
            Ok(acc)
        }
        ModelSpace::Hyperbolic => {
            let mut sum = Vector3::zeros();
            for v in vertices {
                sum += v.coords();
            }
            let anchor = sum / (-mink(&sum, &sum)).sqrt();
            let mut acc = T::zero();
            for i in 0..vertices.len() {
                let a = vertices[i].coords();
                let b = vertices[(i + 1) % vertices.len()].coords();
                acc += hyp_vertex_triangle(&anchor, &a, &b);
            }
            Ok(acc)
        }
    }
}

fn quad_constraint_sphere<T: Real>(q: &[&Point<T>; 4]) -> Result<T> {
    let dets = [
        det3(&q[0].coords(), &q[1].coords(), &q[2].coords()),
        det3(&q[1].coords(), &q[2].coords(), &q[3].coords()),
        det3(&q[2].coords(), &q[3].coords(), &q[0].coords()),
        det3(&q[3].coords(), &q[0].coords(), &q[1].coords()),
    ];
    let tol = lit::<T>(ORTH_TOL);
    let pos = dets.iter().any(|d| *d > tol);
    let neg = dets.iter().any(|d| *d < -tol);
    if pos && neg {
        Err(CentralError::InvalidMidpoints { constraint: SPHERE_QUAD })
    } else if neg {
        Ok(-T::one())
    } else {
        Ok(T::one())
    }
}

/// Signed symplectic area of the geodesic quadrilateral whose consecutive
/// side midpoints are `q1, q2, q3, q4` (convex small-triangle regime).
pub fn quad_area<T: Real>(
    q1: &Point<T>,
    q2: &Point<T>,
    q3: &Point<T>,
    q4: &Point<T>,
) -> Result<T> {
    let q = [q1, q2, q3, q4];
    let space = q1.space();
    if q.iter().any(|p| p.space() != space) {
        return Err(CentralError::SpaceMismatch);
    }
    match space {
        ModelSpace::Plane => {
            let (a, b, c, d) = (q1.to_flat(), q2.to_flat(), q3.to_flat(), q4.to_flat());
            let gap = ((a.0 - b.0 + c.0 - d.0), (a.1 - b.1 + c.1 - d.1));
            if (gap.0 * gap.0 + gap.1 * gap.1).sqrt() > lit(1e-9) {
                return Err(CentralError::ParallelogramViolation);
            }
            Ok(lit::<T>(2.0) * (wedge(a, b) + wedge(c, d)))
        }
        ModelSpace::Torus => {
            let fp2 = T::frac_pi_2();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let (ap, aq) = q[i].to_flat();
                    let (bp, bq) = q[j].to_flat();
                    if torus_diff(ap, bp).abs() >= fp2 || torus_diff(aq, bq).abs() >= fp2 {
                        return Err(CentralError::InvalidMidpoints { constraint: TORUS_TRIANGLE });
                    }
                }
            }
            let base = q1.coords();
            let l2 = torus_lift(&base, q2)?;
            let l3 = torus_lift(&l2, q3)?;
            let l4 = torus_lift(&l3, q4)?;
            let gap = base - l2 + l3 - l4;
            if gap.norm() > lit(1e-9) {
                return Err(CentralError::ParallelogramViolation);
            }
            let a = (base.x, base.y);
            let b = (l2.x, l2.y);
            let c = (l3.x, l3.y);
            let d = (l4.x, l4.y);
            Ok(lit::<T>(2.0) * (wedge(a, b) + wedge(c, d)))
        }
        ModelSpace::Sphere => {
            let sigma = quad_constraint_sphere(&q)?;
            let dot = |i: usize, j: usize| q[i].coords().dot(&q[j].coords());
            let r = dot(0, 1) * dot(2, 3) + dot(1, 2) * dot(3, 0) - dot(0, 2) * dot(1, 3);
            Ok(lit::<T>(2.0 * ORIENT) * sigma * clamp_unit(r).acos())
        }
        ModelSpace::Hyperbolic => {
            let ch = |i: usize, j: usize| -mink(&q[i].coords(), &q[j].coords());
            let r = ch(0, 1) * ch(2, 3) + ch(1, 2) * ch(3, 0) - ch(0, 2) * ch(1, 3);
            if r.abs() >= T::one() {
                return Err(CentralError::InvalidMidpoints { constraint: HYPERBOLIC_QUAD });
            }
            let dets = [
                det3(&q[0].coords(), &q[1].coords(), &q[2].coords()),
                det3(&q[1].coords(), &q[2].coords(), &q[3].coords()),
                det3(&q[2].coords(), &q[3].coords(), &q[0].coords()),
                det3(&q[3].coords(), &q[0].coords(), &q[1].coords()),
            ];
            let orient: T = dets.iter().fold(T::zero(), |acc, d| acc + *d);
            let sigma = if orient >= T::zero() { T::one() } else { -T::one() };
            Ok(lit::<T>(2.0 * ORIENT) * sigma * clamp_unit(r).acos())
        }
    }
}

/// Midpoint of the diagonal splitting the quadrilateral `q1..q4` into the
/// triangles `(m0, q1, q2)` and `(m0, q3, q4)`.
pub fn quad_diagonal_midpoint<T: Real>(
    q1: &Point<T>,
    q2: &Point<T>,
    q3: &Point<T>,
    q4: &Point<T>,
) -> Result<Point<T>> {
    let space = q1.space();
    if [q2, q3, q4].iter().any(|p| p.space() != space) {
        return Err(CentralError::SpaceMismatch);
    }
    match space {
        ModelSpace::Plane => {
            // the diagonal midpoint coincides with the parallelogram center
            let c = (q1.coords() + q3.coords()) * half(T::one());
            Ok(Point::plane(c.x, c.y))
        }
        ModelSpace::Torus => {
            let base = q1.coords();
            let l3 = torus_lift(&base, q3)?;
            let c = (base + l3) * half(T::one());
            Ok(Point::torus(c.x, c.y))
        }
        ModelSpace::Sphere => {
            let c12 = q1.coords().dot(&q2.coords());
            let c34 = q3.coords().dot(&q4.coords());
            let z = q3.coords().cross(&q4.coords()) * c12
                + q1.coords().cross(&q2.coords()) * c34;
            let n = z.norm();
            if n < lit(1e-12) {
                return Err(CentralError::OutOfRegime);
            }
            let mut m0 = z / n;
            let mean = q1.coords() + q2.coords() + q3.coords() + q4.coords();
            if m0.dot(&mean) < T::zero() {
                m0 = -m0;
            }
            Point::sphere(m0)
        }
        ModelSpace::Hyperbolic => {
            let mcross = |a: &Vector3<T>, b: &Vector3<T>| {
                let c = a.cross(b);
                Vector3::new(c.x, c.y, -c.z)
            };
            let c12 = -mink(&q1.coords(), &q2.coords());
            let c34 = -mink(&q3.coords(), &q4.coords());
            let z = mcross(&q3.coords(), &q4.coords()) * c12
                + mcross(&q1.coords(), &q2.coords()) * c34;
            let b = mink(&z, &z);
            if b >= T::zero() {
                return Err(CentralError::OutOfRegime);
            }
            let mut m0 = z / (-b).sqrt();
            if m0.z < T::zero() {
                m0 = -m0;
            }
            Point::hyperboloid(m0)
        }
    }
}

/// Signed angle sum route for a vertex triangle; used by tests as an
/// independent oracle for the closed-form areas.
pub fn vertex_triangle_angle_area<T: Real>(
    a: &Point<T>,
    b: &Point<T>,
    c: &Point<T>,
) -> Result<T> {
    let ang = |v: &Point<T>, n: &Point<T>, p: &Point<T>| -> Result<T> {
        let u = spaces::log_map(v, n)?.vec;
        let w = spaces::log_map(v, p)?.vec;
        let s = pairing_raw(v, &u, &w);
        let metric = match v.space() {
            ModelSpace::Hyperbolic => mink(&u, &w),
            _ => u.dot(&w),
        };
        Ok(s.atan2(metric))
    };
    let sum = ang(a, b, c)? + ang(b, c, a)? + ang(c, a, b)?;
    let curv = match a.space() {
        ModelSpace::Sphere => T::one(),
        ModelSpace::Hyperbolic => -T::one(),
        _ => return vertex_polygon_area(&[*a, *b, *c]),
    };
    if sum.abs() < lit(1e-12) {
        return Ok(T::zero());
    }
    Ok(curv * (sum - sum.signum() * T::pi()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    type P = Point<f64>;

    fn sp(x: f64, y: f64, z: f64) -> P {
        Point::sphere(Vector3::new(x, y, z)).unwrap()
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

    #[test]
    fn plane_triangle_area_example() {
        let v = triangle_area(&P::plane(0.0, 0.0), &P::plane(1.0, 0.0), &P::plane(0.0, 1.0))
            .unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn collinear_midpoints_give_zero() {
        let v = triangle_area(&P::plane(0.0, 0.0), &P::plane(1.0, 1.0), &P::plane(2.0, 2.0))
            .unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        let v = triangle_area(
            &P::sphere_polar(0.4, 0.0),
            &P::sphere_polar(0.6, 0.0),
            &P::sphere_polar(0.9, 0.0),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn orthogonal_sphere_midpoints_give_half_sphere() {
        let v = triangle_area(&sp(1.0, 0.0, 0.0), &sp(0.0, 1.0, 0.0), &sp(0.0, 0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v, std::f64::consts::PI, epsilon = 1e-14);
    }

    #[test]
    fn triangle_area_symmetries() {
        let m = sp(0.0, 0.6, 0.8);
        let m1 = P::sphere_polar(0.9, 1.0);
        let m2 = P::sphere_polar(1.2, 2.2);
        let a = triangle_area(&m, &m1, &m2).unwrap();
        let swapped = triangle_area(&m, &m2, &m1).unwrap();
        assert_abs_diff_eq!(a, -swapped, epsilon = 1e-12);
        let cyc = triangle_area(&m1, &m2, &m).unwrap();
        assert_abs_diff_eq!(a, cyc, epsilon = 1e-12);
    }

    #[test]
    fn constraint_rejections() {
        // sphere: mixed dot signs
        let r = triangle_area(&sp(1.0, 0.0, 0.0), &sp(0.9, 0.4358898943540674, 0.0), &sp(-0.9, 0.4358898943540674, 0.0));
        assert!(matches!(r, Err(CentralError::InvalidMidpoints { .. })));
        // hyperbolic: determinant above one
        let h1 = P::hyperbolic_polar(2.0, 0.0);
        let h2 = P::hyperbolic_polar(2.0, 2.0943951023931953);
        let h3 = P::hyperbolic_polar(2.0, 4.1887902047863905);
        assert!(matches!(
            triangle_area(&h1, &h2, &h3),
            Err(CentralError::InvalidMidpoints { .. })
        ));
        // torus: separation beyond pi/2
        let t = triangle_area(&P::torus(0.0, 0.0), &P::torus(1.7, 0.0), &P::torus(0.0, 0.3));
        assert!(matches!(t, Err(CentralError::InvalidMidpoints { .. })));
    }

    #[test]
    fn plane_vertex_reconstruction_example() {
        let (a, b, c) =
            triangle_vertices(&P::plane(0.0, 0.0), &P::plane(1.0, 0.0), &P::plane(0.0, 1.0))
                .unwrap();
        assert_eq!(a.to_flat(), (1.0, -1.0));
        assert_eq!(b.to_flat(), (1.0, 1.0));
        assert_eq!(c.to_flat(), (-1.0, 1.0));
    }

    #[test]
    fn coincident_midpoints_reconstruct_to_the_point() {
        let m = sp(0.0, 0.6, 0.8);
        let (a, b, c) = triangle_vertices(&m, &m, &m).unwrap();
        for v in [a, b, c] {
            assert!(distance(&v, &m).unwrap() < 1e-9);
        }
    }

    #[test]
    fn reconstruction_round_trip_on_random_triplets() {
        let mut rng = SplitMix(7);
        let mut done = 0;
        while done < 60 {
            // sample vertices, derive midpoints, reconstruct
            let space_pick = done % 3;
            let verts: Vec<P> = match space_pick {
                0 => (0..3)
                    .map(|_| P::plane(rng.next() * 4.0 - 2.0, rng.next() * 4.0 - 2.0))
                    .collect(),
                1 => (0..3)
                    .map(|_| {
                        P::sphere_polar(0.2 + rng.next() * 1.2, rng.next() * std::f64::consts::TAU)
                    })
                    .collect(),
                _ => (0..3)
                    .map(|_| {
                        P::hyperbolic_polar(rng.next() * 1.5, rng.next() * std::f64::consts::TAU)
                    })
                    .collect(),
            };
            let m1 = match midpoint(&verts[0], &verts[1]) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let m2 = match midpoint(&verts[1], &verts[2]) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let m = match midpoint(&verts[2], &verts[0]) {
                Ok(p) => p,
                Err(_) => continue,
            };
            if triangle_constraint(&m, &m1, &m2).is_err() {
                continue;
            }
            let (a, b, c) = triangle_vertices(&m, &m1, &m2).unwrap();
            assert!(distance(&midpoint(&a, &b).unwrap(), &m1).unwrap() < 1e-9);
            assert!(distance(&midpoint(&b, &c).unwrap(), &m2).unwrap() < 1e-9);
            assert!(distance(&midpoint(&c, &a).unwrap(), &m).unwrap() < 1e-9);
            done += 1;
        }
    }

    #[test]
    fn midpoint_area_matches_vertex_area() {
        let mut rng = SplitMix(99);
        let mut done = 0;
        while done < 40 {
            let which = done % 2;
            let verts: Vec<P> = if which == 0 {
                (0..3)
                    .map(|_| {
                        P::sphere_polar(0.2 + rng.next() * 1.1, rng.next() * std::f64::consts::TAU)
                    })
                    .collect()
            } else {
                (0..3)
                    .map(|_| {
                        P::hyperbolic_polar(rng.next() * 1.4, rng.next() * std::f64::consts::TAU)
                    })
                    .collect()
            };
            let (Ok(m1), Ok(m2), Ok(m)) = (
                midpoint(&verts[0], &verts[1]),
                midpoint(&verts[1], &verts[2]),
                midpoint(&verts[2], &verts[0]),
            ) else {
                continue;
            };
            if triangle_constraint(&m, &m1, &m2).is_err() {
                continue;
            }
            let dt = triangle_area(&m, &m1, &m2).unwrap();
            let dv = vertex_polygon_area(&verts).unwrap();
            let angle = vertex_triangle_angle_area(&verts[0], &verts[1], &verts[2]).unwrap();
            assert_abs_diff_eq!(dv, angle, epsilon = 1e-10);
            // areas agree modulo the sphere branch
            let diff = dt - dv;
            let wrapped = if which == 0 {
                let fourpi = 4.0 * std::f64::consts::PI;
                (diff / fourpi - (diff / fourpi).round()) * fourpi
            } else {
                diff
            };
            assert!(wrapped.abs() < 1e-9, "area mismatch {wrapped:e}");
            done += 1;
        }
    }

    #[test]
    fn vertex_polygon_examples() {
        let square = [
            P::plane(0.0, 0.0),
            P::plane(1.0, 0.0),
            P::plane(1.0, 1.0),
            P::plane(0.0, 1.0),
        ];
        assert_abs_diff_eq!(vertex_polygon_area(&square).unwrap(), 1.0, epsilon = 1e-14);
        let mut rev = square;
        rev.reverse();
        assert_abs_diff_eq!(vertex_polygon_area(&rev).unwrap(), -1.0, epsilon = 1e-14);

        let octant = [sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, 0.0, 1.0)];
        assert_abs_diff_eq!(
            vertex_polygon_area(&octant).unwrap(),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn torus_polygon_lifts_and_rejects_winding() {
        let tri = [P::torus(6.0, 0.1), P::torus(0.4, 0.2), P::torus(0.1, 1.0)];
        let lifted = vertex_polygon_area(&tri).unwrap();
        let flat = vertex_polygon_area(&[
            P::plane(6.0, 0.1),
            P::plane(2.0 * std::f64::consts::PI + 0.4, 0.2),
            P::plane(2.0 * std::f64::consts::PI + 0.1, 1.0),
        ])
        .unwrap();
        assert_abs_diff_eq!(lifted, flat, epsilon = 1e-12);

        // an irreducible loop around the p-circle
        let loop_pts: Vec<P> = (0..8)
            .map(|k| P::torus(k as f64 * std::f64::consts::TAU / 8.0, 0.5 + 0.2 * (k % 2) as f64))
            .collect();
        assert!(matches!(
            vertex_polygon_area(&loop_pts),
            Err(CentralError::NonreducibleLoop)
        ));
    }

    #[test]
    fn quad_examples() {
        let v = quad_area(
            &P::plane(0.0, 0.0),
            &P::plane(1.0, 0.0),
            &P::plane(1.0, 1.0),
            &P::plane(0.0, 1.0),
        )
        .unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-14);

        let m = sp(0.0, 0.6, 0.8);
        assert_abs_diff_eq!(quad_area(&m, &m, &m, &m).unwrap(), 0.0, epsilon = 1e-12);

        let bad = quad_area(
            &P::plane(0.0, 0.0),
            &P::plane(1.0, 0.0),
            &P::plane(1.0, 1.0),
            &P::plane(0.5, 1.0),
        );
        assert!(matches!(bad, Err(CentralError::ParallelogramViolation)));
    }

    #[test]
    fn quad_split_matches_direct_area() {
        let mut rng = SplitMix(1234);
        let mut done = [0usize; 2];
        while done[0] < 30 || done[1] < 30 {
            let which = if done[0] < 30 { 0 } else { 1 };
            // small convex quadrilateral around a random center
            let verts: Vec<P> = {
                let r0 = 0.25 + 0.3 * rng.next();
                let (c1, c2) = (rng.next() * 0.8, rng.next() * std::f64::consts::TAU);
                let jitter: Vec<f64> = (0..4).map(|_| 0.7 + 0.3 * rng.next()).collect();
                (0..4)
                    .map(|k| {
                        let ang = k as f64 * std::f64::consts::FRAC_PI_2 + 0.3;
                        let rad = r0 * jitter[k];
                        if which == 0 {
                            let base = P::sphere_polar(1.0 + c1 * 0.4, c2);
                            let (e1, e2) = spaces::tangent_basis(&base);
                            let v = e1 * (rad * ang.cos()) + e2 * (rad * ang.sin());
                            spaces::exp_map(
                                &base,
                                &crate::spaces::TangentVector::new(base, v).unwrap(),
                            )
                            .unwrap()
                        } else {
                            let base = P::hyperbolic_polar(c1, c2);
                            let (e1, e2) = spaces::tangent_basis(&base);
                            let v = e1 * (rad * ang.cos()) + e2 * (rad * ang.sin());
                            spaces::exp_map(
                                &base,
                                &crate::spaces::TangentVector::new(base, v).unwrap(),
                            )
                            .unwrap()
                        }
                    })
                    .collect()
            };
            let mids: Vec<P> = (0..4)
                .map(|i| midpoint(&verts[i], &verts[(i + 1) % 4]).unwrap())
                .collect();
            let area = match quad_area(&mids[0], &mids[1], &mids[2], &mids[3]) {
                Ok(a) => a,
                Err(_) => continue,
            };
            let m0 = match quad_diagonal_midpoint(&mids[0], &mids[1], &mids[2], &mids[3]) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let t1 = match triangle_area(&m0, &mids[0], &mids[1]) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let t2 = match triangle_area(&m0, &mids[2], &mids[3]) {
                Ok(v) => v,
                Err(_) => continue,
            };
            assert_abs_diff_eq!(area, t1 + t2, epsilon = 1e-8);
            // direct check: the reconstructed diagonal midpoint is the
            // midpoint of the actual diagonal
            let d0 = midpoint(&verts[0], &verts[2]).unwrap();
            assert!(distance(&m0, &d0).unwrap() < 1e-8);
            // and the quadrilateral area matches the vertex circuit
            let vp = vertex_polygon_area(&verts).unwrap();
            assert_abs_diff_eq!(area, vp, epsilon = 1e-8);
            done[which] += 1;
        }
    }

    #[test]
    fn flat_quad_midpoints_form_parallelograms() {
        let mut rng = SplitMix(5);
        for _ in 0..20 {
            let verts: Vec<P> = (0..4)
                .map(|_| P::plane(rng.next() * 4.0 - 2.0, rng.next() * 4.0 - 2.0))
                .collect();
            let mids: Vec<(f64, f64)> = (0..4)
                .map(|i| midpoint(&verts[i], &verts[(i + 1) % 4]).unwrap().to_flat())
                .collect();
            let gx = mids[0].0 - mids[1].0 + mids[2].0 - mids[3].0;
            let gy = mids[0].1 - mids[1].1 + mids[2].1 - mids[3].1;
            assert_abs_diff_eq!(gx, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(gy, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gamma_relation_on_reconstructed_triangles() {
        let mut rng = SplitMix(42);
        let mut done = 0;
        while done < 20 {
            let verts: Vec<P> = (0..3)
                .map(|_| P::sphere_polar(0.3 + rng.next() * 1.0, rng.next() * std::f64::consts::TAU))
                .collect();
            let (Ok(m1), Ok(m2), Ok(m)) = (
                midpoint(&verts[0], &verts[1]),
                midpoint(&verts[1], &verts[2]),
                midpoint(&verts[2], &verts[0]),
            ) else {
                continue;
            };
            if triangle_constraint(&m, &m1, &m2).is_err() {
                continue;
            }
            let (a, b, c) = triangle_vertices(&m, &m1, &m2).unwrap();
            // x_i: separations of midpoints; y_i: half side lengths
            let gamma = |x: f64, y: f64| x.cos() / y.cos();
            let y1 = distance(&a, &b).unwrap() / 2.0;
            let y2 = distance(&b, &c).unwrap() / 2.0;
            let y3 = distance(&c, &a).unwrap() / 2.0;
            let x1 = distance(&m2, &m).unwrap(); // opposite m1
            let x2 = distance(&m, &m1).unwrap();
            let x3 = distance(&m1, &m2).unwrap();
            let g1 = gamma(x1, y1);
            let g2 = gamma(x2, y2);
            let g3 = gamma(x3, y3);
            assert_abs_diff_eq!(g1, g2, epsilon = 1e-9);
            assert_abs_diff_eq!(g2, g3, epsilon = 1e-9);
            done += 1;
        }
    }

    #[test]
    fn small_sphere_triangles_match_arcsine_form() {
        let mut rng = SplitMix(77);
        let mut done = 0;
        while done < 20 {
            let m = P::sphere_polar(0.4 + rng.next() * 0.8, rng.next() * std::f64::consts::TAU);
            let (e1, e2) = spaces::tangent_basis(&m);
            let mk = |rng: &mut SplitMix| {
                let v = e1 * (rng.next() * 0.4 - 0.2) + e2 * (rng.next() * 0.4 - 0.2);
                spaces::exp_map(&m, &crate::spaces::TangentVector::new(m, v).unwrap()).unwrap()
            };
            let m1 = mk(&mut rng);
            let m2 = mk(&mut rng);
            let area = match triangle_area(&m, &m1, &m2) {
                Ok(a) => a,
                Err(_) => continue,
            };
            if area.abs() >= std::f64::consts::PI {
                continue;
            }
            let d = m.coords().dot(&m1.coords().cross(&m2.coords()));
            assert_abs_diff_eq!(area, 2.0 * d.asin(), epsilon = 1e-10);
            done += 1;
        }
    }
}
