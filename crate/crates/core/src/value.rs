//! Objective values with explicit infinities.
//!
//! The solver core always maximizes. Values are plain `i64` with two
//! sentinels that are exact negations of each other, so flipping the
//! objective sense maps `INFINITY` to `NEG_INFINITY` and back.

pub type Value = i64;

pub const INFINITY: Value = i64::MAX;
pub const NEG_INFINITY: Value = -i64::MAX;

#[inline]
fn clamp_finite(v: i128) -> Value {
    v.clamp((NEG_INFINITY + 1) as i128, (INFINITY - 1) as i128) as Value
}

#[inline]
pub fn is_finite(v: Value) -> bool {
    v != INFINITY && v != NEG_INFINITY
}

/// `a + b`. Negative infinity absorbs everything, including positive infinity.
#[inline]
pub fn add(a: Value, b: Value) -> Value {
    if a == NEG_INFINITY || b == NEG_INFINITY {
        NEG_INFINITY
    } else if a == INFINITY || b == INFINITY {
        INFINITY
    } else {
        clamp_finite(a as i128 + b as i128)
    }
}

/// `a - b`. Subtracting negative infinity yields positive infinity whatever `a` is.
#[inline]
pub fn sub(a: Value, b: Value) -> Value {
    if b == NEG_INFINITY {
        INFINITY
    } else if a == NEG_INFINITY || b == INFINITY {
        NEG_INFINITY
    } else if a == INFINITY {
        INFINITY
    } else {
        clamp_finite(a as i128 - b as i128)
    }
}

#[inline]
pub fn neg(a: Value) -> Value {
    -a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinities_are_symmetric() {
        assert_eq!(neg(INFINITY), NEG_INFINITY);
        assert_eq!(neg(NEG_INFINITY), INFINITY);
    }

    #[test]
    fn arithmetic_with_infinities() {
        assert_eq!(add(3, 4), 7);
        assert_eq!(add(INFINITY, 4), INFINITY);
        assert_eq!(add(NEG_INFINITY, INFINITY), NEG_INFINITY);
        assert_eq!(sub(21, 13), 8);
        assert_eq!(sub(21, NEG_INFINITY), INFINITY);
        assert_eq!(sub(NEG_INFINITY, NEG_INFINITY), INFINITY);
        assert_eq!(sub(NEG_INFINITY, 5), NEG_INFINITY);
        assert_eq!(sub(INFINITY, 5), INFINITY);
        assert_eq!(sub(5, INFINITY), NEG_INFINITY);
    }

    #[test]
    fn finite_results_never_hit_sentinels() {
        assert_eq!(add(INFINITY - 1, 10), INFINITY - 1);
        assert!(is_finite(add(NEG_INFINITY + 1, -10)));
    }
}
