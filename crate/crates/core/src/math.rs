//! Floating-point helpers that work without `std`.

pub(crate) use core::f64::consts::{FRAC_PI_2, PI};

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    // libm::pow is exact for the integer exponents used throughout.
    libm::pow(x, y)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub(crate) fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

/// `acos` with its argument clamped to `[-1, 1]`.
#[inline]
pub(crate) fn acos_clamped(x: f64) -> f64 {
    libm::acos(x.clamp(-1.0, 1.0))
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

/// `|x|^p` with the `p == 1` and `p == 2` cases kept exact.
#[inline]
pub(crate) fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else {
        powf(a, p)
    }
}

/// Inverse of [`abs_pow`] on non-negative inputs.
#[inline]
pub(crate) fn root(x: f64, p: f64) -> f64 {
    let x = x.max(0.0);
    if p == 1.0 {
        x
    } else if p == 2.0 {
        sqrt(x)
    } else {
        powf(x, 1.0 / p)
    }
}
