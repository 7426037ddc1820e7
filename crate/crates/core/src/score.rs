//! Integer fast path for evaluating tripartitions under the derived revenue
//! share. Welfares are kept doubled so the balanced split stays integral;
//! results agree exactly with [`crate::plan::welfare`].

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::instance::{Agent, Instance};
use crate::plan::Rho;
use crate::rational::ratio;
use crate::set::ResourceSet;

/// `u1(S1)`, `u2(S2)` and `p(S0)` of a tripartition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tally {
    pub u1: u64,
    pub u2: u64,
    pub p: u64,
}

impl Tally {
    pub fn of(inst: &Instance, s0: ResourceSet, s1: ResourceSet, s2: ResourceSet) -> Tally {
        Tally {
            u1: inst.utility(Agent::One, s1),
            u2: inst.utility(Agent::Two, s2),
            p: inst.price(s0),
        }
    }

    /// `2·p(S0)·q` for the derived share q, an integer in `[0, 2·p(S0)]`.
    pub fn share_units(self) -> u64 {
        if self.p == 0 {
            return 0;
        }
        let raw = self.p as i128 - self.u1 as i128 + self.u2 as i128;
        raw.clamp(0, 2 * self.p as i128) as u64
    }

    pub fn share(self) -> BigRational {
        if self.p == 0 {
            ratio(0, 1)
        } else {
            ratio(self.share_units(), 2 * self.p)
        }
    }

    pub fn doubled(self) -> Doubled {
        let t = self.share_units() as u128;
        let (u1, u2, p) = (self.u1 as u128, self.u2 as u128, self.p as u128);
        Doubled {
            w1: 2 * u1 + t,
            w2: 2 * u2 + 2 * p - t,
        }
        .audited()
    }
}

/// Twice the welfares `(W1, W2)` of a plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Doubled {
    pub w1: u128,
    pub w2: u128,
}

impl Doubled {
    pub fn positive(self) -> bool {
        self.w1 > 0 && self.w2 > 0
    }

    /// `2·|W1 - W2|`.
    pub fn gap(self) -> u128 {
        self.w1.abs_diff(self.w2)
    }

    /// `4·W1·W2`.
    pub fn nash(self) -> u128 {
        self.w1 * self.w2
    }

    fn hi_lo(self) -> (u128, u128) {
        (self.w1.max(self.w2), self.w1.min(self.w2))
    }

    /// Orders by `max(W1/W2, W2/W1)`, with zero welfare ranked as +∞.
    pub fn cmp_rho(self, other: Doubled) -> Ordering {
        let (a_hi, a_lo) = self.hi_lo();
        let (b_hi, b_lo) = other.hi_lo();
        match (a_lo == 0, b_lo == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (a_hi * b_lo).cmp(&(b_hi * a_lo)),
        }
    }

    /// Records the `d = 0 ⇔ ρ = 1` check for this evaluation, comparing the
    /// gap against the cross-multiplied ratio test.
    pub fn audited(self) -> Self {
        let unit = Doubled { w1: 1, w2: 1 };
        audit::observe(self.gap() == 0, self.cmp_rho(unit) == Ordering::Equal, self.positive());
        self
    }

    pub fn rho(self) -> Rho {
        let (hi, lo) = self.audited().hi_lo();
        if lo == 0 {
            Rho::Infinite
        } else {
            Rho::Finite(ratio(hi, lo))
        }
    }

    pub fn d(self) -> BigRational {
        ratio(self.gap(), 2u32)
    }

    pub fn welfare(self) -> (BigRational, BigRational) {
        (ratio(self.w1, 2u32), ratio(self.w2, 2u32))
    }
}

/// Process-wide counters for the `d = 0 ⇔ ρ = 1` invariant, checked on every
/// positive-welfare evaluation that produces a reported metric.
pub mod audit {
    use std::sync::atomic::{AtomicU64, Ordering};

    static CHECKED: AtomicU64 = AtomicU64::new(0);
    static VIOLATIONS: AtomicU64 = AtomicU64::new(0);

    pub(crate) fn observe(d_is_zero: bool, rho_is_one: bool, positive: bool) {
        if !positive {
            return;
        }
        CHECKED.fetch_add(1, Ordering::Relaxed);
        if d_is_zero != rho_is_one {
            VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        }
    }

    /// `(checked, violations)` so far in this process.
    pub fn snapshot() -> (u64, u64) {
        (CHECKED.load(Ordering::Relaxed), VIOLATIONS.load(Ordering::Relaxed))
    }
}
