//! Text rendering of states as sums of labelled kets.

use zol_core::statevec::State;
use zol_core::Complex64;

/// Kets longer than this are cut off with a count of the remaining terms.
pub const MAX_TERMS: usize = 256;

const EPS: f64 = 1e-9;

/// `|x|` as `m/√2^k` when it has that form with a small integer `m`.
fn sqrt2_fraction(x: f64) -> Option<(u64, u32)> {
    let mut y = x.abs();
    for k in 0..=48u32 {
        let m = y.round();
        if (1.0..=4096.0).contains(&m) && (y - m).abs() < 1e-7 {
            return Some((m as u64, k));
        }
        y *= core::f64::consts::SQRT_2;
    }
    None
}

/// Magnitude of a real amplitude, exact where possible: `1/√2`, `3/4`,
/// `1/(2√2)`, `1/√6`.
pub fn magnitude(x: f64) -> String {
    match sqrt2_fraction(x) {
        Some((m, 0)) => m.to_string(),
        Some((m, k)) => {
            let whole = 1u64 << (k / 2);
            let den = match (k % 2 == 1, whole) {
                (false, w) => w.to_string(),
                (true, 1) => "√2".to_string(),
                (true, w) => format!("{w}√2"),
            };
            let den = if k % 2 == 1 && whole > 1 {
                format!("({den})")
            } else {
                den
            };
            format!("{m}/{den}")
        }
        None => {
            let inv = 1.0 / (x * x);
            if (inv - inv.round()).abs() < 1e-7 && (2.0..=4096.0).contains(&inv.round()) {
                format!("1/√{}", inv.round() as u64)
            } else {
                format!("{:.6}", x.abs())
            }
        }
    }
}

/// A signed coefficient, split into sign and magnitude text; the magnitude
/// is empty for a unit coefficient.
fn coefficient(c: Complex64) -> (bool, String) {
    if c.im.abs() < EPS {
        let text = magnitude(c.re);
        return (c.re < 0.0, if text == "1" { String::new() } else { text });
    }
    if c.re.abs() < EPS {
        let text = magnitude(c.im);
        let text = if text == "1" {
            "i".to_string()
        } else {
            format!("{text}·i")
        };
        return (c.im < 0.0, text);
    }
    let im_sign = if c.im < 0.0 { '-' } else { '+' };
    (false, format!("({:.6} {im_sign} {:.6}i)", c.re, c.im.abs()))
}

/// The nonzero terms of a state, in basis order, e.g.
/// `1/√2 |01⟩_B|00⟩_A + 1/√2 |11⟩_B|00⟩_A`.
pub fn render(state: &State) -> String {
    let layout = state.layout();
    let names: Vec<&str> = layout.registers().iter().map(|r| r.name()).collect();
    let terms: Vec<(usize, Complex64)> = state.support(EPS).collect();
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (n, (index, amp)) in terms.iter().take(MAX_TERMS).enumerate() {
        let (negative, coef) = coefficient(*amp);
        match (n, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !coef.is_empty() {
            out.push_str(&coef);
            out.push(' ');
        }
        for (label, name) in layout.labels_of(*index).iter().zip(&names) {
            out.push_str(&format!("|{label}⟩_{name}"));
        }
    }
    if terms.len() > MAX_TERMS {
        out.push_str(&format!(" + ... ({} more terms)", terms.len() - MAX_TERMS));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_fractions() {
        let r = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(magnitude(1.0), "1");
        assert_eq!(magnitude(r), "1/√2");
        assert_eq!(magnitude(0.5), "1/2");
        assert_eq!(magnitude(-0.5), "1/2");
        assert_eq!(magnitude(0.75), "3/4");
        assert_eq!(magnitude(r / 2.0), "1/(2√2)");
        assert_eq!(magnitude(3.0 * r / 4.0), "3/(4√2)");
        assert_eq!(magnitude(0.3), "0.300000");
        assert_eq!(magnitude(1.0 / 6f64.sqrt()), "1/√6");
        assert_eq!(magnitude(-1.0 / 24f64.sqrt()), "1/√24");
    }

    #[test]
    fn coefficients() {
        assert_eq!(coefficient(Complex64::new(-1.0, 0.0)), (true, String::new()));
        assert_eq!(coefficient(Complex64::new(0.0, 0.5)), (false, "1/2·i".to_string()));
        assert_eq!(coefficient(Complex64::new(0.0, -1.0)), (true, "i".to_string()));
    }
}
