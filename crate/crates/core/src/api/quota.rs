//! Quota accounting for API calls.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

/// Per-page unit costs, table-driven because the platform reprices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuotaCosts {
    pub search_page: u64,
    pub list_page: u64,
}

impl Default for QuotaCosts {
    fn default() -> Self {
        Self {
            search_page: 100,
            list_page: 1,
        }
    }
}

/// Shared spend counter. Charging is atomic and can never push spend past
/// the total, including on error paths: callers charge before fetching and
/// a failed charge leaves the counter untouched.
#[derive(Debug)]
pub struct QuotaBudget {
    total_units: u64,
    spent_units: Mutex<u64>,
}

impl QuotaBudget {
    pub fn new(total_units: u64) -> Self {
        Self {
            total_units,
            spent_units: Mutex::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Books `units` if the remainder covers them; returns whether the
    /// charge happened.
    pub fn try_charge(&self, units: u64) -> bool {
        let mut spent = self.spent_units.lock().expect("budget lock");
        match spent.checked_add(units) {
            Some(next) if next <= self.total_units => {
                *spent = next;
                true
            }
            _ => false,
        }
    }

    pub fn spent(&self) -> u64 {
        *self.spent_units.lock().expect("budget lock")
    }

    pub fn total(&self) -> u64 {
        self.total_units
    }

    pub fn remaining(&self) -> u64 {
        self.total_units - self.spent()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charge_stops_at_total() {
        let budget = QuotaBudget::new(250);
        assert!(budget.try_charge(100));
        assert!(budget.try_charge(100));
        assert!(!budget.try_charge(100));
        assert_eq!(budget.spent(), 200);
        assert_eq!(budget.remaining(), 50);
        assert!(budget.try_charge(50));
        assert_eq!(budget.remaining(), 0);
    }

    #[test]
    fn zero_budget_charges_nothing() {
        let budget = QuotaBudget::new(0);
        assert!(!budget.try_charge(1));
        assert_eq!(budget.spent(), 0);
    }

    #[test]
    fn concurrent_charges_never_overspend() {
        let budget = std::sync::Arc::new(QuotaBudget::new(1000));
        std::thread::scope(|scope| {
            for _ in 0..8 {
                let budget = budget.clone();
                scope.spawn(move || {
                    for _ in 0..1000 {
                        budget.try_charge(1);
                    }
                });
            }
        });
        assert_eq!(budget.spent(), 1000);
    }
}
