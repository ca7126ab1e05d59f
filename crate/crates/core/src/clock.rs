use core::time::Duration;

/// Time source for search limits. The core crate never reads a clock itself.
pub trait Clock {
    fn expired(&self) -> bool;

    fn elapsed(&self) -> Duration;
}

/// Never expires and reports zero elapsed time.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unlimited;

impl Clock for Unlimited {
    fn expired(&self) -> bool {
        false
    }

    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }
}
