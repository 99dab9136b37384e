use std::fmt;

/// A half-open integer interval `(begin, end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    begin: u32,
    end: u32,
}

impl Interval {
    pub fn new(begin: u32, end: u32) -> Self {
        assert!(begin <= end, "interval ({begin}, {end}] is reversed");
        Interval { begin, end }
    }

    pub fn begin(&self) -> u32 {
        self.begin
    }

    pub fn end(&self) -> u32 {
        self.end
    }

    pub fn len(&self) -> u32 {
        self.end - self.begin
    }

    pub fn is_empty(&self) -> bool {
        self.begin == self.end
    }

    /// `begin + end`, i.e. twice the center. Orders tree intervals by
    /// in-order traversal.
    pub fn center2(&self) -> u32 {
        self.begin + self.end
    }

    /// Center of an interval of even length.
    pub fn center(&self) -> u32 {
        debug_assert!(self.len().is_multiple_of(2));
        (self.begin + self.end) / 2
    }

    pub fn left(&self) -> Interval {
        Interval::new(self.begin, self.center())
    }

    pub fn right(&self) -> Interval {
        Interval::new(self.center(), self.end)
    }

    pub fn contains(&self, t: u32) -> bool {
        self.begin < t && t <= self.end
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.begin <= other.begin && other.end <= self.end
    }

    /// `self ∩ other`, `None` when empty.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let b = self.begin.max(other.begin);
        let e = self.end.min(other.end);
        (b < e).then(|| Interval::new(b, e))
    }

    pub fn slots(&self) -> std::ops::RangeInclusive<u32> {
        self.begin + 1..=self.end
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}]", self.begin, self.end)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halves_and_membership() {
        let i = Interval::new(4, 8);
        assert_eq!(i.left(), Interval::new(4, 6));
        assert_eq!(i.right(), Interval::new(6, 8));
        assert!(!i.contains(4) && i.contains(5) && i.contains(8));
        assert_eq!(i.intersect(&Interval::new(0, 5)), Some(Interval::new(4, 5)));
        assert_eq!(i.intersect(&Interval::new(0, 4)), None);
        assert_eq!(i.to_string(), "(4, 8]");
    }
}
