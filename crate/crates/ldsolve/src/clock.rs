use std::time::{Duration, Instant};

use ldsolve_core::Clock;

/// Wall-clock time since construction, with an optional limit.
#[derive(Debug, Clone, Copy)]
pub struct WallClock {
    start: Instant,
    limit: Option<Duration>,
}

impl WallClock {
    pub fn start(limit: Option<Duration>) -> Self {
        Self {
            start: Instant::now(),
            limit,
        }
    }
}

impl Clock for WallClock {
    fn expired(&self) -> bool {
        self.limit.is_some_and(|l| self.start.elapsed() >= l)
    }

    fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}
