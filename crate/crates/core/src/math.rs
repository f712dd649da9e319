//! Thin wrappers over `libm` so the numerics read like `std` float code.

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn exp_m1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}

/// `2^k` for integer `k`, exact over the normal range.
#[inline]
pub fn exp2i(k: i32) -> f64 {
    libm::ldexp(1.0, k)
}

/// `|x|^r` with the convention `0^r = 0` for `r > 0`.
#[inline]
pub fn abs_pow(x: f64, r: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        if r > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else if r == 1.0 {
        a
    } else if r == 2.0 {
        a * a
    } else {
        pow(a, r)
    }
}
