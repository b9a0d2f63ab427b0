//! Discrete logical time.
//!
//! Timestamps are signed integers with a fixed granularity of one. The
//! largest representable value is reserved as `INF` and absorbs every shift,
//! which is how relaxed (unbounded) join parameters are expressed.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_traits::{PrimInt, Signed};

/// Integer type usable as a timestamp.
pub trait TimePoint: PrimInt + Signed + Hash + Debug + Display + FromStr + Default + Send + Sync + 'static {
    /// Positive infinity; equal to the maximum representable value.
    const INF: Self;

    /// Adds `delta`, saturating at the representable range.
    ///
    /// `INF` on either side yields `INF`.
    #[inline]
    fn shift(self, delta: Self) -> Self {
        if self == Self::INF || delta == Self::INF {
            Self::INF
        } else {
            self.saturating_add(delta)
        }
    }

    #[inline]
    fn is_inf(self) -> bool {
        self == Self::INF
    }

    /// Widening conversion used where differences of timestamps must not
    /// overflow.
    #[inline]
    fn widen(self) -> i128 {
        // every supported type fits in i128
        self.to_i128().unwrap_or(i128::MAX)
    }
}

macro_rules! impl_time_point {
    ($($t:ty),*) => {
        $(impl TimePoint for $t {
            const INF: Self = <$t>::MAX;
        })*
    };
}

impl_time_point!(i16, i32, i64, i128);
