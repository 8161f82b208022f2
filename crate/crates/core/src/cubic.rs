//! Real-coefficient cubic roots: closed form followed by Newton polish.

use num_complex::Complex64;

/// Roots of `c[0]·x³ + c[1]·x² + c[2]·x + c[3]`, highest degree first.
///
/// A vanishing leading coefficient drops to the quadratic (or linear) case,
/// so fewer than three roots may come back. Real roots are returned with an
/// exactly zero imaginary part; complex roots come in conjugate pairs.
pub fn cubic_roots(c: [f64; 4]) -> Vec<Complex64> {
    let [a, b, cc, d] = c;
    let (b_n, c_n, d_n) = (b / a, cc / a, d / a);
    if a == 0.0 || !(b_n.is_finite() && c_n.is_finite() && d_n.is_finite()) {
        return quadratic_roots(b, cc, d);
    }
    let mut roots = monic_cubic(b_n, c_n, d_n);
    for r in roots.iter_mut() {
        *r = polish(&c, *r);
    }
    roots
}

/// Roots of `a·x² + b·x + c`, degrading to the linear case.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<Complex64> {
    if a == 0.0 || !(b / a).is_finite() || !(c / a).is_finite() {
        if b == 0.0 {
            return Vec::new();
        }
        return vec![Complex64::new(-c / b, 0.0)];
    }
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        // Avoids cancellation in the smaller root.
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            return vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        vec![Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a).abs();
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn monic_cubic(b: f64, c: f64, d: f64) -> Vec<Complex64> {
    // x = t - b/3 gives t³ + p t + q = 0
    let shift = b / 3.0;
    let p = c - b * shift;
    let q = 2.0 * shift * shift * shift - c * shift + d;
    let h = 0.25 * q * q + p * p * p / 27.0;

    if h > 0.0 {
        let s = h.sqrt();
        let u = (-0.5 * q - q.signum() * s).cbrt();
        let t = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        let r = t - shift;
        // deflate x³ + b x² + c x + d by (x - r)
        let b1 = b + r;
        let c1 = c + r * b1;
        let mut roots = vec![Complex64::new(r, 0.0)];
        roots.extend(quadratic_roots(1.0, b1, c1));
        roots
    } else if p == 0.0 {
        let r = Complex64::new(-shift, 0.0);
        vec![r, r, r]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        (0..3)
            .map(|k| {
                let t = m * (theta - std::f64::consts::TAU * k as f64 / 3.0).cos();
                Complex64::new(t - shift, 0.0)
            })
            .collect()
    }
}

fn eval(c: &[f64; 4], x: Complex64) -> (Complex64, Complex64) {
    let p = ((x * c[0] + c[1]) * x + c[2]) * x + c[3];
    let dp = (x * (3.0 * c[0]) + 2.0 * c[1]) * x + c[2];
    (p, dp)
}

fn polish(c: &[f64; 4], mut x: Complex64) -> Complex64 {
    let real = x.im == 0.0;
    let (mut px, _) = eval(c, x);
    for _ in 0..8 {
        let (_, dp) = eval(c, x);
        if dp.norm() == 0.0 || px.norm() == 0.0 {
            break;
        }
        let mut next = x - px / dp;
        if real {
            next.im = 0.0;
        }
        let (pn, _) = eval(c, next);
        if !(pn.norm() < px.norm()) {
            break;
        }
        x = next;
        px = pn;
    }
    x
}

/// Evaluate the cubic at a complex point.
pub fn cubic_value(c: [f64; 4], x: Complex64) -> Complex64 {
    eval(&c, x).0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_by_re_im(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn roots_of_unity() {
        let r = sorted_by_re_im(cubic_roots([1.0, 0.0, 0.0, -1.0]));
        let h = 3f64.sqrt() / 2.0;
        let expected = [
            Complex64::new(-0.5, -h),
            Complex64::new(-0.5, h),
            Complex64::new(1.0, 0.0),
        ];
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip(expected.iter()) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn double_root() {
        // (n-2)^2 (n-5) = n³ - 9n² + 24n - 20
        let r = sorted_by_re_im(cubic_roots([1.0, -9.0, 24.0, -20.0]));
        assert_eq!(r.len(), 3);
        for (a, b) in r.iter().zip([2.0, 2.0, 5.0]) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-6, "{a}");
        }
    }

    #[test]
    fn triple_root() {
        // (x-3)^3
        let r = cubic_roots([1.0, -9.0, 27.0, -27.0]);
        for z in r {
            assert!((z - Complex64::new(3.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn degree_reduction() {
        let r = sorted_by_re_im(cubic_roots([0.0, 1.0, -3.0, 2.0]));
        assert_eq!(r.len(), 2);
        assert!((r[0].re - 1.0).abs() < 1e-14 && (r[1].re - 2.0).abs() < 1e-14);
        let lin = cubic_roots([0.0, 0.0, 2.0, -4.0]);
        assert_eq!(lin, vec![Complex64::new(2.0, 0.0)]);
    }

    #[test]
    fn widely_separated_roots() {
        // roots 1e-3, 70, 71 scaled by a large leading coefficient
        let (r1, r2, r3) = (1e-3, 70.0, 71.0);
        let k = 8e11;
        let c = [
            k,
            -k * (r1 + r2 + r3),
            k * (r1 * r2 + r1 * r3 + r2 * r3),
            -k * r1 * r2 * r3,
        ];
        let r = sorted_by_re_im(cubic_roots(c));
        for (z, want) in r.iter().zip([r1, r2, r3]) {
            assert!((z.re - want).abs() < 1e-9 * want, "{z} vs {want}");
        }
    }
}
