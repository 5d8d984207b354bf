//! Outcome record and line format shared by the acceptance harness.

use std::fmt;
use std::time::Duration;

#[derive(Debug, Clone)]
pub struct Criterion {
    pub id: &'static str,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {}: {} [{:.3}s] {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Running maximum of a residual, remembering where it occurred.
#[derive(Debug, Clone, Default)]
pub struct Worst {
    pub value: f64,
    pub at: String,
}

impl Worst {
    pub fn update(&mut self, value: f64, at: impl FnOnce() -> String) {
        if value > self.value || value.is_nan() {
            self.value = value;
            self.at = at();
        }
    }

    pub fn below(&self, tol: f64) -> bool {
        self.value < tol
    }
}

impl fmt::Display for Worst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.at.is_empty() {
            write!(f, "{:.3e}", self.value)
        } else {
            write!(f, "{:.3e} ({})", self.value, self.at)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_tracks_maximum() {
        let mut w = Worst::default();
        w.update(1e-3, || "a".into());
        w.update(1e-5, || "b".into());
        assert_eq!(w.at, "a");
        assert!(!w.below(1e-4));
        w.update(f64::NAN, || "nan".into());
        assert!(!w.below(1.0));
    }
}
