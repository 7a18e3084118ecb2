//! Shared test oracles, independent of the library's own code paths.

/// Reference binary16 rounding, written as integer field surgery with
/// explicit guard/sticky round-to-nearest-even. Deliberately a different
/// algorithm from the library's grid-scaling routine so the two can
/// cross-check each other.
pub fn f16_ref(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() || x == 0.0 {
        return x;
    }
    let bits = x.abs().to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    // |x| = sig * 2^(exp - 52), with bit 52 of sig set
    let (sig, exp) = if biased == 0 {
        let shift = frac.leading_zeros() as i32 - 11;
        (frac << shift, -1022 - shift)
    } else {
        (frac | (1u64 << 52), biased - 1023)
    };
    if exp < -26 {
        // below half the smallest subnormal: rounds to zero
        return 0.0f64.copysign(x);
    }
    // round the significand so that the unit in the last place is
    // 2^unit_exp: 10 fraction bits for normals, a fixed 2^-24 grid below
    let unit_exp = (exp - 10).max(-24);
    let shift = (unit_exp - exp + 52) as u32; // 42..=54
    let kept = sig >> shift;
    let rem = sig & ((1u64 << shift) - 1);
    let half = 1u64 << (shift - 1);
    let kept = if rem > half || (rem == half && kept & 1 == 1) {
        kept + 1
    } else {
        kept
    };
    let value = kept as f64 * 2f64.powi(unit_exp);
    if value > 65504.0 {
        f64::INFINITY.copysign(x)
    } else {
        value.copysign(x)
    }
}

/// Every finite binary16 value, built arithmetically (not from bit
/// patterns): subnormals `mant * 2^-24` and normals `mant * 2^(e-10)`.
pub fn all_f16_values() -> Vec<f64> {
    let mut out = Vec::with_capacity(63488);
    for mant in 0..1024u32 {
        out.push(f64::from(mant) * 2f64.powi(-24));
    }
    for e in -14..=15i32 {
        for mant in 1024..2048u32 {
            out.push(f64::from(mant) * 2f64.powi(e - 10));
        }
    }
    let negatives: Vec<f64> = out.iter().skip(1).map(|v| -v).collect();
    out.extend(negatives);
    out
}
