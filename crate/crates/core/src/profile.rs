//! Transmittance ramps and the cumulative transmittance `h(t) = ∫₀ᵗ TR(u) du`.
//!
//! Every profile rises monotonically from 0 to 1 at `t_end` and stays at 1
//! afterwards, so `h` is continuous, non-decreasing and grows linearly past
//! `t_end`. Times are microseconds.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Shape of the transmittance ramp.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind<T> {
    /// Idealised instantaneous opening: `TR(t) = 1` for `t > 0`.
    Step,
    /// `TR(t) = t / t_end`.
    Linear,
    /// `TR(t) = (t / t_end)²`.
    Quadratic,
    /// Piecewise-linear through `(t, TR)` knots starting at `(0, 0)`.
    Tabulated(Vec<(T, T)>),
}

impl<T> ProfileKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Step => "step",
            ProfileKind::Linear => "linear",
            ProfileKind::Quadratic => "quadratic",
            ProfileKind::Tabulated(_) => "tabulated",
        }
    }
}

/// A monotone transmittance ramp `TR(t)` reaching 1 at `t_end`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmittanceProfile<T> {
    kind: ProfileKind<T>,
    t_end: T,
    /// `h` at each tabulated knot; empty for analytic kinds.
    knot_area: Vec<T>,
}

impl<T: Real> TransmittanceProfile<T> {
    pub fn step() -> Self {
        Self { kind: ProfileKind::Step, t_end: T::zero(), knot_area: Vec::new() }
    }

    pub fn linear(t_end: T) -> Result<Self> {
        check_t_end(t_end)?;
        Ok(Self { kind: ProfileKind::Linear, t_end, knot_area: Vec::new() })
    }

    pub fn quadratic(t_end: T) -> Result<Self> {
        check_t_end(t_end)?;
        Ok(Self { kind: ProfileKind::Quadratic, t_end, knot_area: Vec::new() })
    }

    /// Piecewise-linear profile through `knots`.
    ///
    /// The first knot must be `(0, 0)`, times strictly increasing, values
    /// non-decreasing within `[0, 1]`, and the last value exactly 1. The last
    /// knot time becomes `t_end`.
    pub fn tabulated(knots: Vec<(T, T)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Profile("tabulated profile needs at least two knots".into()));
        }
        if knots[0] != (T::zero(), T::zero()) {
            return Err(Error::Profile("tabulated profile must start at (0, 0)".into()));
        }
        for pair in knots.windows(2) {
            let ((t0, v0), (t1, v1)) = (pair[0], pair[1]);
            if !(t1.is_finite() && t1 > t0) {
                return Err(Error::Profile(format!("knot times must strictly increase ({t0} -> {t1})")));
            }
            if !(v1 >= v0 && v1 <= T::one()) {
                return Err(Error::Profile(format!(
                    "transmittance must be non-decreasing within [0, 1] ({v0} -> {v1})"
                )));
            }
        }
        let (t_end, last) = knots[knots.len() - 1];
        if last != T::one() {
            return Err(Error::Profile(format!("last knot must reach transmittance 1, got {last}")));
        }
        let mut knot_area = Vec::with_capacity(knots.len());
        let mut acc = T::zero();
        knot_area.push(acc);
        for pair in knots.windows(2) {
            let ((t0, v0), (t1, v1)) = (pair[0], pair[1]);
            acc += (t1 - t0) * (v0 + v1) * T::of(0.5);
            knot_area.push(acc);
        }
        Ok(Self { kind: ProfileKind::Tabulated(knots), t_end, knot_area })
    }

    /// Builds a profile by name: `step`, `linear` or `quadratic`.
    pub fn from_name(name: &str, t_end: T) -> Result<Self> {
        match name {
            "step" => Ok(Self::step()),
            "linear" => Self::linear(t_end),
            "quadratic" => Self::quadratic(t_end),
            other => Err(Error::Profile(format!("unknown profile kind '{other}'"))),
        }
    }

    #[inline]
    pub fn kind(&self) -> &ProfileKind<T> {
        &self.kind
    }

    /// Time at which transmittance reaches 1 (0 for the step profile).
    #[inline]
    pub fn t_end(&self) -> T {
        self.t_end
    }

    /// Horizon after which a pixel that has not fired is declared cold:
    /// `10 · t_end` for ramps, unbounded for the step profile.
    pub fn capture_horizon(&self) -> Option<T> {
        match self.kind {
            ProfileKind::Step => None,
            _ => Some(self.t_end * T::of(10.0)),
        }
    }

    /// `TR(t)`; zero for negative `t`.
    pub fn transmittance(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t >= self.t_end {
            return T::one();
        }
        match &self.kind {
            ProfileKind::Step => T::one(),
            ProfileKind::Linear => t / self.t_end,
            ProfileKind::Quadratic => {
                let r = t / self.t_end;
                r * r
            }
            ProfileKind::Tabulated(knots) => {
                let i = segment_of(knots, t);
                let ((t0, v0), (t1, v1)) = (knots[i], knots[i + 1]);
                v0 + (v1 - v0) * (t - t0) / (t1 - t0)
            }
        }
    }

    /// Area under the ramp, `h(t_end)`.
    pub fn ramp_area(&self) -> T {
        match &self.kind {
            ProfileKind::Step => T::zero(),
            ProfileKind::Linear => self.t_end * T::of(0.5),
            ProfileKind::Quadratic => self.t_end / T::of(3.0),
            ProfileKind::Tabulated(_) => self.knot_area[self.knot_area.len() - 1],
        }
    }

    /// Cumulative transmittance `h(t) = ∫₀ᵗ TR(u) du`.
    pub fn h_integral(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::Domain(format!("h(t) needs t >= 0, got {t}")));
        }
        Ok(self.h(t))
    }

    /// Unchecked `h`; callers guarantee `t >= 0`.
    pub(crate) fn h(&self, t: T) -> T {
        if t.is_infinite() {
            return t;
        }
        if t >= self.t_end {
            return self.ramp_area() + (t - self.t_end);
        }
        match &self.kind {
            ProfileKind::Step => t,
            ProfileKind::Linear => t * t / (self.t_end + self.t_end),
            ProfileKind::Quadratic => t * t * t / (T::of(3.0) * self.t_end * self.t_end),
            ProfileKind::Tabulated(knots) => {
                let i = segment_of(knots, t);
                let (t0, v0) = knots[i];
                let v = self.transmittance(t);
                self.knot_area[i] + (t - t0) * (v0 + v) * T::of(0.5)
            }
        }
    }

    /// Smallest `t` with `h(t) = v`.
    ///
    /// Closed form for the analytic kinds; tabulated ramps are inverted by
    /// bisection inside the knot segment that brackets `v`.
    pub fn h_inverse(&self, v: T) -> Result<T> {
        if !(v >= T::zero()) {
            return Err(Error::Domain(format!("h⁻¹(v) needs v >= 0, got {v}")));
        }
        Ok(self.h_inv(v))
    }

    /// Unchecked inverse; callers guarantee `v >= 0`.
    pub(crate) fn h_inv(&self, v: T) -> T {
        let area = self.ramp_area();
        if v.is_infinite() {
            return v;
        }
        if v >= area {
            return self.t_end + (v - area);
        }
        match &self.kind {
            ProfileKind::Step => v,
            ProfileKind::Linear => (T::of(2.0) * self.t_end * v).sqrt(),
            ProfileKind::Quadratic => (T::of(3.0) * self.t_end * self.t_end * v).cbrt(),
            ProfileKind::Tabulated(knots) => {
                // first knot whose area reaches v closes the bracket
                let hi = self.knot_area.partition_point(|a| *a < v).max(1);
                let lo = hi - 1;
                bisect_increasing(|t| self.h(t), v, knots[lo].0, knots[hi].0, T::bisection_floor())
            }
        }
    }
}

fn check_t_end<T: Real>(t_end: T) -> Result<()> {
    if !(t_end.is_finite() && t_end > T::zero()) {
        return Err(Error::Profile(format!("t_end must be positive and finite, got {t_end}")));
    }
    Ok(())
}

/// Index `i` of the knot segment `[t_i, t_{i+1})` containing `t`.
fn segment_of<T: Real>(knots: &[(T, T)], t: T) -> usize {
    let i = knots.partition_point(|(k, _)| *k <= t);
    i.saturating_sub(1).min(knots.len() - 2)
}

/// Smallest `x` in `[lo, hi]` with `f(x) >= target`, for non-decreasing `f`,
/// located to within `tol` (or to the scalar's resolution, whichever is
/// coarser).
///
/// Returns `lo` when `f(lo) >= target` and `hi` when `f(hi) < target`.
pub fn bisect_increasing<T: Real>(f: impl Fn(T) -> T, target: T, mut lo: T, mut hi: T, tol: T) -> T {
    if f(lo) >= target {
        return lo;
    }
    if f(hi) < target {
        return hi;
    }
    // f(lo) < target <= f(hi)
    for _ in 0..256 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + (hi - lo) * T::of(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}
