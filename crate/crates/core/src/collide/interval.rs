//! Closed interval sets over the extended reals, used for half-angle tangent
//! rotation coordinates.

use smallvec::SmallVec;

/// Closed interval `[lo, hi]`; endpoints may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn point(t: f64) -> Self {
        Self { lo: t, hi: t }
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }
}

/// Sorted, disjoint, merged list of closed intervals.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TIntervalSet {
    ivs: SmallVec<[Interval; 4]>,
}

impl TIntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole extended line.
    pub fn full() -> Self {
        Self::single(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn single(lo: f64, hi: f64) -> Self {
        Self::from_intervals([Interval::new(lo, hi)])
    }

    /// Builds the canonical form of an arbitrary collection. Reversed pairs
    /// and NaN endpoints are dropped.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(it: I) -> Self {
        let mut v: SmallVec<[Interval; 4]> = it.into_iter().filter(|i| i.lo <= i.hi).collect();
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: SmallVec<[Interval; 4]> = SmallVec::new();
        for iv in v {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => {
                    if iv.hi > last.hi {
                        last.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        Self { ivs: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.ivs
    }

    pub fn is_empty(&self) -> bool {
        self.ivs.is_empty()
    }

    pub fn contains(&self, t: f64) -> bool {
        self.ivs.iter().any(|i| i.contains(t))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_intervals(self.ivs.iter().chain(other.ivs.iter()).copied())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.ivs, &other.ivs);
        let (mut i, mut j) = (0, 0);
        let mut out: SmallVec<[Interval; 4]> = SmallVec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo <= hi {
                out.push(Interval { lo, hi });
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { ivs: out }
    }

    /// Widens every finite endpoint by `rel·max(1, |t|)`.
    pub fn dilated(&self, rel: f64) -> Self {
        let grow = |t: f64| rel * t.abs().max(1.0);
        Self::from_intervals(self.ivs.iter().map(|i| Interval {
            lo: if i.lo.is_finite() {
                i.lo - grow(i.lo)
            } else {
                i.lo
            },
            hi: if i.hi.is_finite() {
                i.hi + grow(i.hi)
            } else {
                i.hi
            },
        }))
    }

    /// Closure of the complement within the extended line.
    pub fn complement(&self) -> Self {
        let mut out: SmallVec<[Interval; 4]> = SmallVec::new();
        let mut cursor = f64::NEG_INFINITY;
        for iv in &self.ivs {
            if iv.lo > cursor {
                out.push(Interval {
                    lo: cursor,
                    hi: iv.lo,
                });
            }
            cursor = iv.hi;
        }
        if cursor < f64::INFINITY {
            out.push(Interval {
                lo: cursor,
                hi: f64::INFINITY,
            });
        }
        Self { ivs: out }
    }
}
