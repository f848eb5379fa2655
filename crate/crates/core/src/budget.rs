//! Step budgets and the meter that enforces them.
//!
//! A step is one instrumented elementary operation: a loop iteration, a
//! recursive call, one byte read. Counting steps instead of wall-clock time
//! keeps every report identical across machines.

use std::fmt;

use thiserror::Error;

/// Default per-call step budget.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

/// Environment variable consulted by [`StepBudget::from_env`].
pub const MAX_STEPS_ENV: &str = "NONDEC_MAX_STEPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepBudget {
    max_steps: u64,
}

impl StepBudget {
    /// A zero budget is bumped to one; budgets are positive.
    pub fn new(max_steps: u64) -> Self {
        StepBudget {
            max_steps: max_steps.max(1),
        }
    }

    pub fn max_steps(self) -> u64 {
        self.max_steps
    }

    /// Reads `NONDEC_MAX_STEPS`, falling back to the default when unset or
    /// unparseable.
    pub fn from_env() -> Self {
        std::env::var(MAX_STEPS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(StepBudget::new)
            .unwrap_or_default()
    }

    pub fn meter(self) -> StepMeter {
        StepMeter::new(self)
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::new(DEFAULT_MAX_STEPS)
    }
}

impl fmt::Display for StepBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} steps", self.max_steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("step budget of {max_steps} exhausted")]
pub struct Exhausted {
    pub max_steps: u64,
}

/// Counts steps against a budget. `used()` never exceeds the maximum.
#[derive(Debug, Clone)]
pub struct StepMeter {
    used: u64,
    max: u64,
}

impl StepMeter {
    pub fn new(budget: StepBudget) -> Self {
        StepMeter {
            used: 0,
            max: budget.max_steps(),
        }
    }

    #[inline]
    pub fn tick(&mut self) -> Result<(), Exhausted> {
        if self.used >= self.max {
            return Err(Exhausted {
                max_steps: self.max,
            });
        }
        self.used += 1;
        Ok(())
    }

    /// Charges `n` steps at once; on failure the meter is left full.
    pub fn charge(&mut self, n: u64) -> Result<(), Exhausted> {
        if self.max - self.used < n {
            self.used = self.max;
            return Err(Exhausted {
                max_steps: self.max,
            });
        }
        self.used += n;
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn max(&self) -> u64 {
        self.max
    }
}
