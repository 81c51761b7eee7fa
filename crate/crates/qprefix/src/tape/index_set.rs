//! Subsets of tape cell indices.

use std::fmt;
use std::str::FromStr;

use crate::error::IndexSetError;

/// A set of tape cell indices (1-based), either finite or cofinite.
///
/// Cofinite sets (all of ℕ minus a finite exclusion set) are what the
/// complement of a finite set looks like, so restricting to "everything
/// from cell m on" or placing a factor on the complement of a finite set
/// needs no truncation bookkeeping: `complement` is an involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndexSet {
    /// Sorted, distinct indices ≥ 1.
    Finite(Vec<usize>),
    /// ℕ minus the sorted, distinct excluded indices ≥ 1.
    Cofinite(Vec<usize>),
}

fn normalize(mut indices: Vec<usize>) -> Result<Vec<usize>, IndexSetError> {
    indices.sort_unstable();
    if indices.first() == Some(&0) {
        return Err(IndexSetError::ZeroIndex);
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return Err(IndexSetError::DuplicateIndex);
    }
    Ok(indices)
}

impl IndexSet {
    /// Finite set from arbitrary (possibly unsorted) indices.
    pub fn finite<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self, IndexSetError> {
        Ok(IndexSet::Finite(normalize(indices.into_iter().collect())?))
    }

    /// ℕ minus the given indices.
    pub fn cofinite_excluding<I: IntoIterator<Item = usize>>(
        indices: I,
    ) -> Result<Self, IndexSetError> {
        Ok(IndexSet::Cofinite(normalize(
            indices.into_iter().collect(),
        )?))
    }

    /// The interval `[start, end]`. `end = start - 1` gives the empty set,
    /// so `range(1, 0)` is the 0-cell prefix.
    pub fn range(start: usize, end: usize) -> Result<Self, IndexSetError> {
        if start == 0 {
            return Err(IndexSetError::ZeroIndex);
        }
        if end < start.saturating_sub(1) {
            return Err(IndexSetError::InvalidRange { start, end });
        }
        Ok(IndexSet::Finite((start..=end).collect()))
    }

    /// The tail `[start, ∞)`.
    pub fn tail(start: usize) -> Result<Self, IndexSetError> {
        if start == 0 {
            return Err(IndexSetError::ZeroIndex);
        }
        Ok(IndexSet::Cofinite((1..start).collect()))
    }

    /// All of ℕ.
    pub fn full() -> Self {
        IndexSet::Cofinite(Vec::new())
    }

    pub fn empty() -> Self {
        IndexSet::Finite(Vec::new())
    }

    pub fn singleton(i: usize) -> Result<Self, IndexSetError> {
        IndexSet::finite([i])
    }

    pub fn contains(&self, i: usize) -> bool {
        match self {
            IndexSet::Finite(v) => v.binary_search(&i).is_ok(),
            IndexSet::Cofinite(excl) => i >= 1 && excl.binary_search(&i).is_err(),
        }
    }

    pub fn complement(&self) -> IndexSet {
        match self {
            IndexSet::Finite(v) => IndexSet::Cofinite(v.clone()),
            IndexSet::Cofinite(v) => IndexSet::Finite(v.clone()),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, IndexSet::Finite(_))
    }

    /// Cardinality; `None` means infinite.
    pub fn len(&self) -> Option<usize> {
        match self {
            IndexSet::Finite(v) => Some(v.len()),
            IndexSet::Cofinite(_) => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, IndexSet::Finite(v) if v.is_empty())
    }

    /// The k-th smallest member (0-based), if it exists.
    pub fn nth_member(&self, k: usize) -> Option<usize> {
        match self {
            IndexSet::Finite(v) => v.get(k).copied(),
            IndexSet::Cofinite(excl) => {
                // walk cells in order, skipping exclusions
                let mut remaining = k;
                let mut cell = 1usize;
                let mut e = excl.iter().peekable();
                loop {
                    if e.peek() == Some(&&cell) {
                        e.next();
                    } else if remaining == 0 {
                        return Some(cell);
                    } else {
                        remaining -= 1;
                    }
                    cell += 1;
                }
            }
        }
    }

    /// Position of cell `i` within the set (0-based), if `i` is a member.
    pub fn rank_of(&self, i: usize) -> Option<usize> {
        match self {
            IndexSet::Finite(v) => v.binary_search(&i).ok(),
            IndexSet::Cofinite(excl) => {
                if i == 0 || excl.binary_search(&i).is_ok() {
                    None
                } else {
                    let excluded_below = excl.iter().take_while(|&&e| e < i).count();
                    Some(i - 1 - excluded_below)
                }
            }
        }
    }

    /// Members `≤ n` in increasing order.
    pub fn members_up_to(&self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&i| self.contains(i)).collect()
    }

    /// `|self ∩ [1, n]|`.
    pub fn count_up_to(&self, n: usize) -> usize {
        match self {
            IndexSet::Finite(v) => v.iter().take_while(|&&i| i <= n).count(),
            IndexSet::Cofinite(excl) => n - excl.iter().take_while(|&&i| i <= n).count(),
        }
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet::Finite(v) => {
                // render contiguous runs as ranges
                if v.is_empty() {
                    return write!(f, "{{}}");
                }
                let contiguous = v.windows(2).all(|w| w[1] == w[0] + 1);
                if contiguous && v.len() > 1 {
                    write!(f, "[{},{}]", v[0], v[v.len() - 1])
                } else {
                    write!(f, "{{")?;
                    for (k, i) in v.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{i}")?;
                    }
                    write!(f, "}}")
                }
            }
            IndexSet::Cofinite(excl) => {
                // an excluded initial segment is just a tail
                let initial = excl.iter().enumerate().all(|(k, &i)| i == k + 1);
                if initial {
                    write!(f, "[{},inf)", excl.len() + 1)
                } else {
                    write!(f, "N\\{{")?;
                    for (k, i) in excl.iter().enumerate() {
                        if k > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{i}")?;
                    }
                    write!(f, "}}")
                }
            }
        }
    }
}

/// Accepts the literal forms `[m,n]`, `{i,j,...}`, `{}` and `[m,inf)`.
impl FromStr for IndexSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_num = |t: &str| -> Result<usize, String> {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid cell index {t:?}"))
        };
        if let Some(body) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let body = body.trim();
            if body.is_empty() {
                return Ok(IndexSet::empty());
            }
            let indices = body
                .split(',')
                .map(parse_num)
                .collect::<Result<Vec<_>, _>>()?;
            return IndexSet::finite(indices).map_err(|e| e.to_string());
        }
        if let Some(body) = s.strip_prefix('[') {
            if let Some(body) = body.strip_suffix(')') {
                let (m, tail) = body
                    .split_once(',')
                    .ok_or_else(|| format!("malformed index set {s:?}"))?;
                if tail.trim() != "inf" {
                    return Err(format!("malformed index set {s:?}: expected [m,inf)"));
                }
                return IndexSet::tail(parse_num(m)?).map_err(|e| e.to_string());
            }
            if let Some(body) = body.strip_suffix(']') {
                let (m, n) = body
                    .split_once(',')
                    .ok_or_else(|| format!("malformed index set {s:?}"))?;
                let (m, n) = (parse_num(m)?, parse_num(n)?);
                if n < m {
                    return Err(format!("malformed index range [{m},{n}]: end before start"));
                }
                return IndexSet::range(m, n).map_err(|e| e.to_string());
            }
        }
        Err(format!(
            "malformed index set {s:?}: expected [m,n], {{i,j,...}} or [m,inf)"
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_involutive() {
        let sets = [
            IndexSet::finite([1, 3, 5]).unwrap(),
            IndexSet::empty(),
            IndexSet::tail(3).unwrap(),
            IndexSet::cofinite_excluding([2, 4]).unwrap(),
            IndexSet::full(),
        ];
        for s in sets {
            assert_eq!(s.complement().complement(), s);
        }
    }

    #[test]
    fn membership_and_ranks() {
        let s = IndexSet::finite([2, 5, 7]).unwrap();
        assert!(s.contains(5));
        assert!(!s.contains(3));
        assert_eq!(s.rank_of(5), Some(1));
        assert_eq!(s.rank_of(3), None);
        assert_eq!(s.nth_member(2), Some(7));
        assert_eq!(s.nth_member(3), None);

        let c = s.complement();
        assert!(c.contains(3));
        assert!(!c.contains(5));
        // members of N \ {2,5,7}: 1,3,4,6,8,...
        assert_eq!(c.nth_member(0), Some(1));
        assert_eq!(c.nth_member(1), Some(3));
        assert_eq!(c.nth_member(3), Some(6));
        assert_eq!(c.nth_member(4), Some(8));
        assert_eq!(c.rank_of(6), Some(3));
        assert_eq!(c.rank_of(7), None);
    }

    #[test]
    fn ranges_and_tails() {
        let r = IndexSet::range(2, 4).unwrap();
        assert_eq!(r.members_up_to(10), vec![2, 3, 4]);
        assert!(IndexSet::range(1, 0).unwrap().is_empty());
        assert!(IndexSet::range(3, 1).is_err());
        assert!(IndexSet::range(0, 2).is_err());

        let t = IndexSet::tail(3).unwrap();
        assert!(!t.contains(2));
        assert!(t.contains(1000));
        assert_eq!(t.count_up_to(5), 3);
        assert_eq!(t.len(), None);
    }

    #[test]
    fn rejects_invalid_indices() {
        assert!(matches!(
            IndexSet::finite([0, 1]),
            Err(IndexSetError::ZeroIndex)
        ));
        assert!(matches!(
            IndexSet::finite([2, 2]),
            Err(IndexSetError::DuplicateIndex)
        ));
        // unsorted input is normalized
        assert_eq!(
            IndexSet::finite([5, 1, 3]).unwrap().members_up_to(9),
            vec![1, 3, 5]
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        for text in ["[1,4]", "{1,3}", "{}", "[3,inf)", "[2,2]"] {
            let set: IndexSet = text.parse().unwrap();
            let shown = set.to_string();
            let reparsed: IndexSet = shown.parse().unwrap();
            assert_eq!(set, reparsed, "{text} -> {shown}");
        }
        assert!("[3,2]".parse::<IndexSet>().is_err());
        assert!("[1,inf]".parse::<IndexSet>().is_err());
        assert!("(1,2)".parse::<IndexSet>().is_err());
    }
}
