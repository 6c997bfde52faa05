//! Abstract work accounting.
//!
//! Every structure in this crate charges its auxiliary reads, writes,
//! multiplications and comparisons to a [`WorkMeter`]. Meters are cheap
//! handles: cloning one yields a second handle onto the same counter, which
//! is how sub-instances (a ranked set inside an evaluator, a string-equality
//! instance inside a Dyck node) add their charge to the owner's total.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

#[derive(Clone, Default)]
pub struct WorkMeter {
    counter: Arc<AtomicU64>,
}

impl WorkMeter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&self, units: u64) {
        self.counter.fetch_add(units, Ordering::Relaxed);
    }

    #[inline]
    pub fn tick(&self) {
        self.charge(1);
    }

    /// Units charged since the last reset.
    pub fn read(&self) -> u64 {
        self.counter.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.counter.store(0, Ordering::Relaxed);
    }

    /// Runs `f` and returns its result together with the units it charged.
    pub fn measure<T>(&self, f: impl FnOnce() -> T) -> (T, u64) {
        let before = self.read();
        let out = f();
        (out, self.read() - before)
    }

    /// True when both handles share one counter.
    pub fn same_as(&self, other: &WorkMeter) -> bool {
        Arc::ptr_eq(&self.counter, &other.counter)
    }
}

impl fmt::Debug for WorkMeter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("WorkMeter").field(&self.read()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reset_then_read_is_zero() {
        let m = WorkMeter::new();
        m.charge(17);
        m.reset();
        assert_eq!(m.read(), 0);
    }

    #[test]
    fn reads_without_charges_agree() {
        let m = WorkMeter::new();
        m.charge(3);
        assert_eq!(m.read(), m.read());
    }

    #[test]
    fn clones_share_the_counter() {
        let a = WorkMeter::new();
        let b = a.clone();
        b.charge(5);
        a.tick();
        assert_eq!(a.read(), 6);
        assert!(a.same_as(&b));
        assert!(!a.same_as(&WorkMeter::new()));
    }

    #[test]
    fn measure_is_additive() {
        let m = WorkMeter::new();
        let (_, wa) = m.measure(|| m.charge(4));
        let (_, wb) = m.measure(|| m.charge(9));
        assert_eq!(m.read(), wa + wb);
    }
}
