//! Dormand–Prince 5(4) single step with FSAL.

pub(crate) type State = [f64; 2];

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

// difference between the 5th and 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Step {
    pub y: State,
    pub err: State,
    /// Derivative at the new point (first stage of the next step).
    pub k7: State,
}

fn comb(y: &State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = *y;
    for (a, k) in terms {
        out[0] += h * a * k[0];
        out[1] += h * a * k[1];
    }
    out
}

/// One step of size `h` for an autonomous field, given `k1 = f(y)`.
pub(crate) fn step<F: Fn(&State) -> State>(f: &F, y: &State, k1: &State, h: f64) -> Step {
    let k2 = f(&comb(y, h, &[(A21, k1)]));
    let k3 = f(&comb(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(&comb(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(&comb(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
    let k6 = f(&comb(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ));
    let y5 = comb(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
    let k7 = f(&y5);
    let mut err = [0.0; 2];
    for i in 0..2 {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Step { y: y5, err, k7 }
}

/// Scaled RMS error norm used by the step-size controller.
pub(crate) fn error_norm(y0: &State, s: &Step, abs_tol: f64, rel_tol: f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..2 {
        let sc = abs_tol + rel_tol * y0[i].abs().max(s.y[i].abs());
        acc += (s.err[i] / sc).powi(2);
    }
    (acc / 2.0).sqrt()
}
