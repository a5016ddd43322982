//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! The integrator bisects the interval with the largest error estimate until
//! the summed estimate satisfies `max(abs_tol, rel_tol * |I|)`. Integrands may
//! be real or complex; the error is measured in the modulus.
//!
//! Most callers in this crate integrate in `u = ln x`, so the infinite ranges
//! they need become finite windows plus an analytic tail.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_958_109_831,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Values that can be integrated: real or complex scalars.
pub trait QuadValue:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn modulus(&self) -> f64;
}

impl QuadValue for f64 {
    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
    pub converged: bool,
}

impl<V: QuadValue> Estimate<V> {
    /// Convert a non-converged estimate into [`Error::Quadrature`].
    pub fn certified(self, context: &'static str, opts: &QuadOptions) -> Result<V> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                context,
                achieved: self.error,
                requested: opts.abs_tol.max(opts.rel_tol * self.value.modulus()),
            })
        }
    }
}

struct Segment<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Segment<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Segment<V> {}
impl<V> PartialOrd for Segment<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Segment<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::default();
    let mut abs_sum = fc.modulus() * WGK[10];
    let mut fv1 = [V::default(); 10];
    let mut fv2 = [V::default(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += WGK[j] * (f1.modulus() + f2.modulus());
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fc - mean).modulus();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).modulus() + (fv2[j] - mean).modulus());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).modulus();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (value, err)
}

/// Integrate `f` over `[points[0], points[last]]` with mandatory splits at
/// every interior point. Points must be increasing and finite.
pub fn integrate<V, F>(mut f: F, points: &[f64], opts: &QuadOptions) -> Estimate<V>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    debug_assert!(points.len() >= 2);
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let (value, error) = kronrod21(&mut f, w[0], w[1]);
            evaluations += 21;
            heap.push(Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            });
        }
    }
    loop {
        let (total, err) = heap.iter().fold((V::default(), 0.0), |(v, e), s| {
            (v + s.value, e + s.error)
        });
        let tol = opts.abs_tol.max(opts.rel_tol * total.modulus());
        let finite = err.is_finite() && total.modulus().is_finite();
        let done = finite && (err <= tol || heap.is_empty());
        if done || !finite || heap.len() >= opts.max_intervals {
            return Estimate {
                value: total,
                error: err,
                evaluations,
                intervals: heap.len(),
                converged: done,
            };
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            continue;
        }
        let (v1, e1) = kronrod21(&mut f, worst.a, mid);
        let (v2, e2) = kronrod21(&mut f, mid, worst.b);
        evaluations += 42;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
}

/// Sorted, deduplicated breakpoints restricted to `[lo, hi]`, endpoints included.
pub fn breakpoints(lo: f64, hi: f64, interior: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo];
    pts.extend(interior.iter().copied().filter(|p| p.is_finite() && *p > lo && *p < hi));
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
