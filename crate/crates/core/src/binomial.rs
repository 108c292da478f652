/// `C(a, b)` with the zero convention outside `0 <= b <= a`.
///
/// Panics if the value does not fit in an `i128`.
pub fn binomial(a: i64, b: i64) -> i128 {
    if a < 0 || b < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: i128 = 1;
    for i in 0..b {
        // acc * (a - i) / (i + 1) stays integral at every step.
        acc = acc
            .checked_mul((a - i) as i128)
            .expect("binomial coefficient overflows i128")
            / (i as i128 + 1);
    }
    acc
}
