use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A set of distinct non-negative offsets `d_1 < d_2 < … < d_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple {
    offsets: Vec<u64>,
}

impl Tuple {
    /// Sorts the offsets; repeated offsets are an error.
    pub fn new(offsets: impl Into<Vec<u64>>) -> Result<Self> {
        let mut offsets = offsets.into();
        offsets.sort_unstable();
        if offsets.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parameter(format!(
                "tuple offsets must be distinct: {offsets:?}"
            )));
        }
        Ok(Self { offsets })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn max_offset(&self) -> u64 {
        self.offsets.last().copied().unwrap_or(0)
    }

    /// Largest minus smallest offset (0 for `k <= 1`).
    pub fn span(&self) -> u64 {
        match (self.offsets.first(), self.offsets.last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    /// The sub-tuple selected by the bits of `mask` (bit `i` keeps `d_{i+1}`).
    pub fn subset(&self, mask: u32) -> Tuple {
        Tuple {
            offsets: self
                .offsets
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &d)| d)
                .collect(),
        }
    }

    pub fn shifted(&self, t: u64) -> Tuple {
        Tuple {
            offsets: self.offsets.iter().map(|d| d + t).collect(),
        }
    }

    /// The translate whose smallest offset is 0.
    pub fn normalized(&self) -> Tuple {
        let lo = self.offsets.first().copied().unwrap_or(0);
        Tuple {
            offsets: self.offsets.iter().map(|d| d - lo).collect(),
        }
    }
}

impl FromStr for Tuple {
    type Err = Error;

    /// Parses comma-separated offsets such as `0,2,6`; the empty string is `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Ok(Tuple::empty());
        }
        let offsets = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|e| Error::Parameter(format!("bad offset {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Tuple::new(offsets)
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.offsets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_distinct() {
        assert_eq!(Tuple::new(vec![6, 0, 2]).unwrap().offsets(), &[0, 2, 6]);
        assert!(Tuple::new(vec![1, 1]).is_err());
    }

    #[test]
    fn parse_and_display() {
        let t: Tuple = "0, 2,6".parse().unwrap();
        assert_eq!(t.to_string(), "{0,2,6}");
        assert_eq!("".parse::<Tuple>().unwrap(), Tuple::empty());
        assert!("1,x".parse::<Tuple>().is_err());
    }

    #[test]
    fn subsets_and_shifts() {
        let t = Tuple::new(vec![3, 5, 11]).unwrap();
        assert_eq!(t.subset(0b101).offsets(), &[3, 11]);
        assert!(t.subset(0).is_empty());
        assert_eq!(t.normalized().offsets(), &[0, 2, 8]);
        assert_eq!(t.shifted(2).offsets(), &[5, 7, 13]);
        assert_eq!(t.span(), 8);
    }
}
