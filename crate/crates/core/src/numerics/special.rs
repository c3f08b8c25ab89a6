//! Hermite functions and Fresnel-type integrals.

use num_complex::Complex64;

/// Normalized Hermite functions φ_0(x) … φ_{n_max}(x), via the stable three-term recurrence.
pub fn hermite_functions(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let p0 = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    out.push(p0);
    if n_max == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * x * p0);
    for k in 2..=n_max {
        let kf = k as f64;
        let next = (2.0 / kf).sqrt() * x * out[k - 1] - ((kf - 1.0) / kf).sqrt() * out[k - 2];
        out.push(next);
    }
    out
}

// below this |y| the integral is done by quadrature, above by the asymptotic tail
const FRESNEL_SWITCH: f64 = 6.0;

/// E(y) = ∫_0^y e^{−iu²} du.
pub fn fresnel_unit(y: f64) -> Complex64 {
    if y.abs() <= FRESNEL_SWITCH {
        fresnel_quadrature(y)
    } else {
        let half = 0.5 * std::f64::consts::PI.sqrt() * Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4);
        (half - fresnel_tail(y.abs())) * y.signum()
    }
}

/// ∫_y^∞ e^{−iu²} du for y ≥ 6, from the asymptotic expansion.
fn fresnel_tail(y: f64) -> Complex64 {
    let z = Complex64::new(0.0, 2.0 * y * y);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        let next = -term * (2.0 * k - 1.0) / z;
        if next.norm() >= term.norm() || next.norm() < 1e-18 {
            sum += next;
            break;
        }
        sum += next;
        term = next;
        k += 1.0;
    }
    Complex64::new(0.0, -y * y).exp() / Complex64::new(0.0, 2.0 * y) * sum
}

fn fresnel_quadrature(y: f64) -> Complex64 {
    thread_local! {
        static RULE: (Vec<f64>, Vec<f64>) = super::quad::gauss_legendre(24);
    }
    if y == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let panels = (y.abs() * 2.0).ceil().max(1.0) as usize;
    RULE.with(|(x, w)| {
        let width = y / panels as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let c = (p as f64 + 0.5) * width;
            for (xi, wi) in x.iter().zip(w) {
                let u = c + 0.5 * width * xi;
                acc += Complex64::new(0.0, -u * u).exp() * wi;
            }
        }
        acc * (0.5 * width)
    })
}

/// ∫_lo^hi e^{−i a u²} du for `a > 0`, keeping accuracy when both limits lie far out on the same side.
pub fn fresnel_segment(a: f64, lo: f64, hi: f64) -> Complex64 {
    let s = a.sqrt();
    let (ylo, yhi) = (lo * s, hi * s);
    let v = if ylo > FRESNEL_SWITCH && yhi > FRESNEL_SWITCH {
        fresnel_tail(ylo) - fresnel_tail(yhi)
    } else if ylo < -FRESNEL_SWITCH && yhi < -FRESNEL_SWITCH {
        fresnel_tail(-yhi) - fresnel_tail(-ylo)
    } else {
        fresnel_unit(yhi) - fresnel_unit(ylo)
    };
    v / s
}
