use super::XReal;

/// Sign plus natural-log-magnitude representation for quantities that
/// overflow any fixed-exponent format (e.g. 2^(2N) * B*_N at large N).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    /// -1, 0, or +1.
    pub sign: i8,
    /// ln |x|; meaningless when sign == 0.
    pub log_mag: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            Self { sign, log_mag }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                log_mag: x.abs().ln(),
            }
        }
    }

    /// Conversion from an extended-precision value. The log is taken at the
    /// source precision and rounded once to a double, so round-trips hold to
    /// well over 12 significant digits whenever the magnitude fits a double.
    pub fn from_xreal(x: &XReal) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        let sign = if x.is_sign_negative() { -1 } else { 1 };
        let log_mag = XReal::with_val(x.prec(), x.clone().abs().ln()).to_f64();
        Self { sign, log_mag }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn mul(&self, other: &LogValue) -> LogValue {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        LogValue {
            sign: self.sign * other.sign,
            log_mag: self.log_mag + other.log_mag,
        }
    }

    pub fn div(&self, other: &LogValue) -> LogValue {
        debug_assert!(!other.is_zero());
        if self.is_zero() {
            return Self::ZERO;
        }
        LogValue {
            sign: self.sign * other.sign,
            log_mag: self.log_mag - other.log_mag,
        }
    }

    pub fn recip(&self) -> LogValue {
        debug_assert!(!self.is_zero());
        LogValue {
            sign: self.sign,
            log_mag: -self.log_mag,
        }
    }

    /// May overflow to +/- infinity or underflow to zero; total for finite input.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            self.sign as f64 * self.log_mag.exp()
        }
    }

    /// ln |self / other|, used to express huge-magnitude comparisons as
    /// relative errors of the ratio.
    pub fn log_ratio(&self, other: &LogValue) -> f64 {
        self.log_mag - other.log_mag
    }

    /// Relative error of self against a reference, computed on the ratio.
    pub fn rel_err_vs(&self, reference: &LogValue) -> f64 {
        if reference.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        if self.is_zero() {
            return 1.0;
        }
        let ratio = (self.sign * reference.sign) as f64 * self.log_ratio(reference).exp();
        (ratio - 1.0).abs()
    }
}

impl std::fmt::Display for LogValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => {
                let sign = if s < 0 { "-" } else { "" };
                write!(f, "{}exp({:.12e})", sign, self.log_mag)
            }
        }
    }
}
