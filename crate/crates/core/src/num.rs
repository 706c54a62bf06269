use std::fmt;

/// Displays a float with the fewest digits that parse back to the same
/// value, switching to exponent form outside `[1e-4, 1e16)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // adding +0.0 folds -0 into 0
        let x = self.0 + 0.0;
        let a = x.abs();
        if a == 0.0 || !a.is_finite() || (1e-4..1e16).contains(&a) {
            write!(f, "{x}")
        } else {
            write!(f, "{x:e}")
        }
    }
}
