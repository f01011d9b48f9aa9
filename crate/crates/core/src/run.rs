//! Run-control primitives shared by the iterative solvers: a completion
//! status and a wall-clock deadline.

use std::time::{Duration, Instant};

/// How a bounded computation ended. `Timeout` covers any exhausted budget,
/// wall-clock or iteration count; the carried partial result is still the
/// best one found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Timeout,
    PrecisionError,
}

impl RunStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RunStatus::Ok => "ok",
            RunStatus::Timeout => "timeout",
            RunStatus::PrecisionError => "precision_error",
        }
    }
}

/// Wall-clock budget. Cheap to copy; callers poll `expired` at convenient
/// intervals rather than per inner-loop step.
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    start: Instant,
    budget: Duration,
}

impl Deadline {
    pub fn after(budget: Duration) -> Self {
        Deadline {
            start: Instant::now(),
            budget,
        }
    }

    pub fn expired(&self) -> bool {
        self.start.elapsed() >= self.budget
    }
}

/// Polls an optional deadline.
pub fn expired(deadline: &Option<Deadline>) -> bool {
    deadline.as_ref().is_some_and(|d| d.expired())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deadline_expiry() {
        let d = Deadline::after(Duration::from_secs(3600));
        assert!(!d.expired());
        let d = Deadline::after(Duration::ZERO);
        assert!(d.expired());
        assert!(!expired(&None));
    }

    #[test]
    fn status_labels() {
        assert_eq!(RunStatus::Ok.as_str(), "ok");
        assert_eq!(RunStatus::Timeout.as_str(), "timeout");
        assert_eq!(RunStatus::PrecisionError.as_str(), "precision_error");
    }
}
