//! One-dimensional minimization: downhill bracketing followed by Brent's
//! parabolic/golden-section search. Non-finite objective values act as walls.

const GOLDEN: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub converged: bool,
}

/// Walks downhill from `x0` with growing steps until the objective rises.
/// Returns `(a, b, c, f(b))` with `a < b < c` and `f(b)` no larger than the
/// values at `a` and `c`, or `None` when `f(x0)` is not finite.
pub(crate) fn bracket<F: FnMut(f64) -> f64>(
    f: &mut F,
    x0: f64,
    step: f64,
    max_steps: usize,
) -> Option<(f64, f64, f64, f64)> {
    let f0 = f(x0);
    if !f0.is_finite() {
        return None;
    }
    let fr = f(x0 + step);
    let fl = f(x0 - step);
    if !(fr < f0) && !(fl < f0) {
        return Some((x0 - step, x0, x0 + step, f0));
    }
    let dir = if fr < f0 && !(fl < fr) { 1.0 } else { -1.0 };
    let (mut a, mut b) = (x0, x0 + dir * step);
    let mut fb = if dir > 0.0 { fr } else { fl };
    let mut h = step;
    for _ in 0..max_steps {
        h *= GOLDEN;
        let c = b + dir * h;
        let fc = f(c);
        // `!(fc < fb)` also catches NaN walls.
        if !(fc < fb) {
            return Some(if dir > 0.0 { (a, b, c, fb) } else { (c, b, a, fb) });
        }
        a = b;
        b = c;
        fb = fc;
    }
    None
}

/// Brent's method on a bracket `a < b < c` with `f(b) = fb`.
pub(crate) fn brent<F: FnMut(f64) -> f64>(
    f: &mut F,
    (a, b, c): (f64, f64, f64),
    fb: f64,
    tol: f64,
    max_iter: usize,
) -> Minimum {
    let (mut lo, mut hi) = (a.min(c), a.max(c));
    let (mut x, mut w, mut v) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let xm = 0.5 * (lo + hi);
        let tol1 = tol * (x.abs() + 1.0);
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (hi - lo) {
            return Minimum { x, fx, converged: true };
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (lo - x) && p < q * (hi - x) {
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { lo - x } else { hi - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Minimum { x, fx, converged: false }
}

/// Brent-Dekker root finding on `[a, b]` where `fa` and `fb` have opposite
/// signs. Returns the root estimate and whether the tolerance was met.
pub(crate) fn brent_root<F: FnMut(f64) -> f64>(
    f: &mut F,
    (mut a, mut b): (f64, f64),
    (mut fa, mut fb): (f64, f64),
    tol: f64,
    max_iter: usize,
) -> (f64, bool) {
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if (fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return (b, true);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    (b, false)
}
