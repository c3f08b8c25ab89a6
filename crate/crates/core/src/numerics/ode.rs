//! Dormand–Prince 5(4) integrator with continuous (dense) output.

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Largest allowed step; `None` means the whole span.
    pub h_max: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-10, max_steps: 1_000_000, h_max: None }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

/// Why an integration stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeFailure {
    StepUnderflow { t: f64 },
    NonFinite { t: f64 },
    TooManySteps { t: f64 },
}

impl OdeFailure {
    pub fn time(&self) -> f64 {
        match *self {
            OdeFailure::StepUnderflow { t } | OdeFailure::NonFinite { t } | OdeFailure::TooManySteps { t } => t,
        }
    }
}

/// Piecewise quartic interpolant covering `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    dim: usize,
    t0: f64,
    t1: f64,
    y0: Vec<f64>,
    y1: Vec<f64>,
    starts: Vec<f64>,
    widths: Vec<f64>,
    // five coefficient vectors per step, laid out step-major
    coeffs: Vec<f64>,
    accepted: usize,
    rejected: usize,
}

impl DenseSolution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn span(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    pub fn steps(&self) -> (usize, usize) {
        (self.accepted, self.rejected)
    }

    pub fn final_state(&self) -> &[f64] {
        &self.y1
    }

    /// Step boundaries chosen by the integrator, including both ends.
    pub fn mesh(&self) -> Vec<f64> {
        let mut m = self.starts.clone();
        m.push(self.t1);
        m
    }

    /// State at `t`, clamped to the integrated span.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out);
        out
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        if self.starts.is_empty() || t <= self.t0 {
            out.copy_from_slice(&self.y0);
            return;
        }
        if t >= self.t1 {
            out.copy_from_slice(&self.y1);
            return;
        }
        let idx = match self.starts.binary_search_by(|s| s.partial_cmp(&t).unwrap()) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let theta = (t - self.starts[idx]) / self.widths[idx];
        let theta1 = 1.0 - theta;
        let base = idx * 5 * self.dim;
        let c = &self.coeffs[base..base + 5 * self.dim];
        let d = self.dim;
        for i in 0..d {
            let (r1, r2, r3, r4, r5) = (c[i], c[d + i], c[2 * d + i], c[3 * d + i], c[4 * d + i]);
            out[i] = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Integrates `y' = rhs(t, y)` from `t0` to `t1 >= t0`.
pub fn integrate<F>(mut rhs: F, t0: f64, y0: &[f64], t1: f64, opts: &OdeOptions) -> Result<DenseSolution, OdeFailure>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    assert!(t1 >= t0, "integrate requires t1 >= t0");
    let n = y0.len();
    let mut sol = DenseSolution {
        dim: n,
        t0,
        t1,
        y0: y0.to_vec(),
        y1: y0.to_vec(),
        starts: Vec::new(),
        widths: Vec::new(),
        coeffs: Vec::new(),
        accepted: 0,
        rejected: 0,
    };
    if t1 == t0 {
        return Ok(sol);
    }
    let span = t1 - t0;
    let h_max = opts.h_max.unwrap_or(span).min(span);
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut ytmp = vec![0.0; n];
    let mut ynew = vec![0.0; n];
    rhs(t0, &y, &mut k1);

    let mut h = initial_step(&mut rhs, t0, &y, &k1, opts, h_max);
    let mut t = t0;
    let mut last_rejected = false;
    let mut steps = 0usize;
    while t < t1 {
        if steps >= opts.max_steps {
            return Err(OdeFailure::TooManySteps { t });
        }
        steps += 1;
        if h < 1e-14 * t.abs().max(span) {
            return Err(OdeFailure::StepUnderflow { t });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        rhs(t + C2 * h, &ytmp, &mut k2);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(t + C3 * h, &ytmp, &mut k3);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(t + C4 * h, &ytmp, &mut k4);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(t + C5 * h, &ytmp, &mut k5);
        for i in 0..n {
            ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        rhs(t + h, &ytmp, &mut k6);
        for i in 0..n {
            ynew[i] = y[i] + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        rhs(t + h, &ynew, &mut k7);

        let mut err2 = 0.0;
        let mut finite = true;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(ynew[i].abs());
            err2 += (e / sc) * (e / sc);
            finite &= ynew[i].is_finite();
        }
        let err = (err2 / n as f64).sqrt();
        if !finite || !err.is_finite() {
            if h < 1e-12 * span {
                return Err(OdeFailure::NonFinite { t });
            }
            h *= 0.2;
            last_rejected = true;
            sol.rejected += 1;
            continue;
        }
        let mut fac = if err == 0.0 { 10.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 10.0) };
        if err <= 1.0 {
            sol.starts.push(t);
            sol.widths.push(h);
            sol.coeffs.extend_from_slice(&y[..n]);
            for i in 0..n {
                sol.coeffs.push(ynew[i] - y[i]);
            }
            for i in 0..n {
                sol.coeffs.push(h * k1[i] - (ynew[i] - y[i]));
            }
            for i in 0..n {
                let ydiff = ynew[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                sol.coeffs.push(ydiff - h * k7[i] - bspl);
            }
            for i in 0..n {
                sol.coeffs.push(h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]));
            }
            sol.accepted += 1;
            t = if last { t1 } else { t + h };
            y.copy_from_slice(&ynew);
            k1.copy_from_slice(&k7);
            if last_rejected {
                fac = fac.min(1.0);
            }
            last_rejected = false;
            h = (h * fac).min(h_max);
        } else {
            sol.rejected += 1;
            last_rejected = true;
            h *= fac.min(1.0);
        }
    }
    sol.y1 = y;
    Ok(sol)
}

fn initial_step<F>(rhs: &mut F, t0: f64, y0: &[f64], f0: &[f64], opts: &OdeOptions, h_max: f64) -> f64
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let n = y0.len() as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y0.len() {
        let sc = opts.atol + opts.rtol * y0[i].abs();
        d0 += (y0[i] / sc).powi(2);
        d1 += (f0[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(h_max);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h0 * f).collect();
    let mut f1 = vec![0.0; y0.len()];
    rhs(t0 + h0, &y1, &mut f1);
    let mut d2 = 0.0;
    for i in 0..y0.len() {
        let sc = opts.atol + opts.rtol * y0[i].abs();
        d2 += ((f1[i] - f0[i]) / sc).powi(2);
    }
    let d2 = (d2 / n).sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    (100.0 * h0).min(h1).min(h_max)
}
