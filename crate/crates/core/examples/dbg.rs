use centract_core::spaces::*;
use nalgebra::Vector3;
type P = Point<f64>;

fn mink3(u: &Vector3<f64>, w: &Vector3<f64>) -> f64 { u.x*w.x + u.y*w.y - u.z*w.z }

fn angle_route(a: &P, b: &P, c: &P) -> f64 {
    let ang = |v: &P, n: &P, p: &P| -> f64 {
        let u = log_map(v, n).unwrap().vec;
        let w = log_map(v, p).unwrap().vec;
        let omega = symplectic_pairing(v, &TangentVector::new(*v, u).unwrap(), &TangentVector::new(*v, w).unwrap()).unwrap();
        omega.atan2(mink3(&u, &w))
    };
    let sum = ang(a, b, c) + ang(b, c, a) + ang(c, a, b);
    if sum.abs() < 1e-12 { return 0.0; }
    sum.signum() * std::f64::consts::PI - sum
}

fn closed_form(a: &P, b: &P, c: &P) -> f64 {
    let det = a.coords().dot(&b.coords().cross(&c.coords()));
    let ch = |x: &P, y: &P| -mink3(&x.coords(), &y.coords());
    2.0 * det.atan2(1.0 + ch(a,b) + ch(b,c) + ch(c,a))
}

fn main() {
    let mut s = 12345u64;
    let mut rnd = || { s ^= s << 13; s ^= s >> 7; s ^= s << 17; (s as f64 / u64::MAX as f64) };
    for i in 0..8 {
        let a = P::hyperbolic_polar(rnd()*2.0, rnd()*6.28);
        let b = P::hyperbolic_polar(rnd()*2.0, rnd()*6.28);
        let c = P::hyperbolic_polar(rnd()*2.0, rnd()*6.28);
        println!("{i}: angle={:.15} closed={:.15} diff={:.3e}", angle_route(&a,&b,&c), closed_form(&a,&b,&c), (angle_route(&a,&b,&c)-closed_form(&a,&b,&c)).abs());
    }
}
