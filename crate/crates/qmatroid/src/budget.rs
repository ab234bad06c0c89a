//! Wall-clock budgets for long-running scans.

use crate::Error;
use std::time::{Duration, Instant};

/// A wall-clock budget. Long-running operations check it periodically and
/// abort with [`Error::BudgetExceeded`] instead of returning partial results.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    started: Instant,
    limit: Option<Duration>,
}

impl Budget {
    /// A budget that never expires.
    pub fn unlimited() -> Self {
        Budget { started: Instant::now(), limit: None }
    }

    /// A budget of `ms` milliseconds starting now.
    pub fn from_ms(ms: u64) -> Self {
        Budget { started: Instant::now(), limit: Some(Duration::from_millis(ms)) }
    }

    /// Optional budget: `None` means unlimited.
    pub fn from_opt_ms(ms: Option<u64>) -> Self {
        match ms {
            Some(ms) => Budget::from_ms(ms),
            None => Budget::unlimited(),
        }
    }

    /// Milliseconds elapsed since the budget started.
    pub fn spent_ms(&self) -> u64 {
        self.started.elapsed().as_millis() as u64
    }

    /// Errors out if the budget is spent; `progress` describes how far
    /// the caller got (counts only, never partial mathematical results).
    pub fn check(&self, progress: impl Fn() -> String) -> crate::Result<()> {
        if let Some(limit) = self.limit {
            if self.started.elapsed() > limit {
                return Err(Error::BudgetExceeded { spent_ms: self.spent_ms(), progress: progress() });
            }
        }
        Ok(())
    }

    /// True if any limit is set.
    pub fn is_limited(&self) -> bool {
        self.limit.is_some()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}
