//! Explicit accounting of working memory, in 64-bit words.
//!
//! Solvers call [`SpaceMeter::alloc`] / [`SpaceMeter::free`] (or hold a
//! [`MeterGuard`]) around every buffer whose size depends on the input. Fixed
//! scalars are not counted. The meter is confined to one solver invocation.

use std::cell::Cell;

#[derive(Debug, Default)]
pub struct SpaceMeter {
    current: Cell<u64>,
    peak: Cell<u64>,
}

impl SpaceMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&self, words: u64) {
        let c = self.current.get() + words;
        self.current.set(c);
        if c > self.peak.get() {
            self.peak.set(c);
        }
    }

    pub fn free(&self, words: u64) {
        let c = self.current.get();
        debug_assert!(words <= c, "freeing {words} words with only {c} live");
        self.current.set(c.saturating_sub(words));
    }

    /// Accounts `words` until the guard is dropped.
    pub fn guard(&self, words: u64) -> MeterGuard<'_> {
        self.alloc(words);
        MeterGuard { meter: self, words }
    }

    pub fn current(&self) -> u64 {
        self.current.get()
    }

    pub fn peak(&self) -> u64 {
        self.peak.get()
    }
}

#[must_use]
pub struct MeterGuard<'a> {
    meter: &'a SpaceMeter,
    words: u64,
}

impl Drop for MeterGuard<'_> {
    fn drop(&mut self) {
        self.meter.free(self.words);
    }
}
