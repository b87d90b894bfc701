/// Fixed-point rendering with ten significant digits.
pub fn sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.000000000".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (9 - magnitude).max(0) as usize;
    // adding 0.0 turns -0.0 into 0.0
    format!("{:.*}", decimals, x + 0.0)
}

#[cfg(test)]
mod tests {
    use super::sig;

    #[test]
    fn ten_significant_digits() {
        assert_eq!(sig(0.25), "0.2500000000");
        assert_eq!(sig(1.0), "1.000000000");
        assert_eq!(sig(2.0 / 3.0), "0.6666666667");
        assert_eq!(sig(0.0), "0.000000000");
        assert_eq!(sig(12345.0), "12345.00000");
        assert_eq!(sig(-0.0125), "-0.01250000000");
        assert_eq!(sig(3e-12), "0.000000000003000000000");
    }
}
