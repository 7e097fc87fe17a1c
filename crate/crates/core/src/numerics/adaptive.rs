//! Globally adaptive Gauss–Kronrod (7/15) integration on finite intervals.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-13,
            abs: 0.0,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = WGK[7] * fc;
    let mut rg = WG[3] * fc;
    let mut finite = fc.is_finite();
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        finite &= s.is_finite();
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    if !finite {
        return Err(Error::NonFiniteIntegrand { node: 0 });
    }
    let value = rk * h;
    let error = ((rk - rg) * h).abs();
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]`, bisecting the segment with the largest error
/// estimate until `error <= max(abs, rel * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    integrate_with_breaks(f, &[a, b], tol)
}

/// Like [`integrate`] but seeds the partition with the given break points
/// (sorted ascending, at least two).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<Estimate> {
    if breaks.len() < 2 {
        return Err(Error::InvalidInput("need at least two break points".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let s = kronrod(&f, w[0], w[1])?;
        total += s.value;
        err += s.error;
        heap.push(s);
    }
    let mut intervals = heap.len();
    while err > tol.abs.max(tol.rel * total.abs()) && intervals < tol.max_intervals {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let l = kronrod(&f, worst.a, mid)?;
        let r = kronrod(&f, mid, worst.b)?;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        intervals += 1;
    }
    // Re-sum to shed the drift of the running updates.
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    Ok(Estimate {
        value,
        error,
        intervals,
    })
}

/// Integrates a rapidly decaying integrand over `[a, inf)` by summing panels of
/// growing width until a panel contributes less than `tail_rel` of the total
/// (or the integrand magnitude at the panel end drops below `tail_rel` of the
/// largest magnitude seen).
pub fn integrate_tail<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    first_width: f64,
    tol: Tolerance,
    tail_rel: f64,
) -> Result<Estimate> {
    let mut total = 0.0;
    let mut err = 0.0;
    let mut intervals = 0;
    let mut lo = a;
    let mut width = first_width;
    let mut peak = f(a).abs();
    for _ in 0..200 {
        let hi = lo + width;
        let seg = integrate(&f, lo, hi, tol)?;
        total += seg.value;
        err += seg.error;
        intervals += seg.intervals;
        let end = f(hi).abs();
        peak = peak.max(end).max(seg.value.abs() / width);
        if seg.value.abs() <= tail_rel * total.abs() && end <= tail_rel * peak {
            return Ok(Estimate {
                value: total,
                error: err,
                intervals,
            });
        }
        lo = hi;
        width *= 1.5;
    }
    Err(Error::SeriesDivergence(
        "semi-infinite integrand did not decay".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((r.value - (8.0 + 1.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        let r = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, Tolerance::default()).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value - exact).abs() < 1e-11 * exact);
    }

    #[test]
    fn gaussian_tail() {
        let r = integrate_tail(|x| (-x * x).exp(), 0.0, 1.0, Tolerance::default(), 1e-18).unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
    }
}
