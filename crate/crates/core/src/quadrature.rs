//! Globally adaptive Gauss-Kronrod (7/15) quadrature for complex integrands,
//! in one dimension and nested over rectangles.

use num_complex::Complex64;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
// Gauss weights at the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_intervals: 20_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

/// Kronrod estimate and |K - G| on one interval.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integral of f over [a, b], bisecting the worst interval until the summed
/// error estimate meets max(abs_tol, rel_tol |I|).
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::param("interval", "limits must be finite"));
    }
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            intervals: 0,
        });
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    while err > opts.abs_tol.max(opts.rel_tol * total.norm()) {
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                error: err,
                tol: opts.abs_tol.max(opts.rel_tol * total.norm()),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        if m <= worst.a || m >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(&f, worst.a, m);
        let (v2, e2) = gk15(&f, m, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Piece { a: worst.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: worst.b, value: v2, error: e2 });
        if heap.len() % 64 == 0 {
            // resum to stop cancellation drift in the running totals
            total = heap.iter().map(|p| p.value).sum();
            err = heap.iter().map(|p| p.error).sum();
        }
    }
    let total: Complex64 = heap.iter().map(|p| p.value).sum();
    let err: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value: total,
        error: err,
        intervals: heap.len(),
    })
}

/// Integral of f(x) over consecutive panels between the given breakpoints.
pub fn integrate_panels<F: Fn(f64) -> Complex64>(f: F, breaks: &[f64], opts: QuadOptions) -> Result<QuadResult> {
    let mut out = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        intervals: 0,
    };
    for w in breaks.windows(2) {
        let r = integrate(&f, w[0], w[1], opts)?;
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
    }
    Ok(out)
}

/// Iterated integral over [ax, bx] x [ay, by]: the inner integral in y is
/// done adaptively for every outer node. Inner failures are propagated.
pub fn integrate_2d<F: Fn(f64, f64) -> Complex64>(
    f: F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    outer: QuadOptions,
    inner: QuadOptions,
) -> Result<QuadResult> {
    integrate_iterated(|_| Complex64::new(1.0, 0.0), f, (ax, bx), |_| (ay, by), outer, inner)
}

/// Integral of w(x) * int f(x, y) dy over a <= x <= b, with y-limits that may
/// depend on x. w is evaluated once per outer node, so x-only factors of the
/// integrand belong there. The reported error adds the worst inner estimate
/// times the outer length.
pub fn integrate_iterated<W, F, L>(
    w: W,
    f: F,
    (ax, bx): (f64, f64),
    limits: L,
    outer: QuadOptions,
    inner: QuadOptions,
) -> Result<QuadResult>
where
    W: Fn(f64) -> Complex64,
    F: Fn(f64, f64) -> Complex64,
    L: Fn(f64) -> (f64, f64),
{
    let failure = std::cell::RefCell::new(None);
    let inner_err = std::cell::Cell::new(0.0_f64);
    let g = |x: f64| -> Complex64 {
        if failure.borrow().is_some() {
            return Complex64::new(0.0, 0.0);
        }
        let wx = w(x);
        if wx == Complex64::new(0.0, 0.0) {
            return wx;
        }
        let (ay, by) = limits(x);
        match integrate(|y| f(x, y), ay, by, inner) {
            Ok(r) => {
                inner_err.set(inner_err.get().max(r.error * wx.norm()));
                wx * r.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let r = integrate(g, ax, bx, outer)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(QuadResult {
        value: r.value,
        error: r.error + inner_err.get() * (bx - ax).abs(),
        intervals: r.intervals,
    })
}
