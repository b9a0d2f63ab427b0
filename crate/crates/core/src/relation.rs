//! Temporal tuples and relations.

use std::fmt;

use thiserror::Error;

use crate::time::TimePoint;

/// Position of a tuple within its relation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TupleId(pub u32);

impl TupleId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// # Panics
    /// If `index` does not fit in 32 bits.
    #[inline]
    pub fn from_index(index: usize) -> Self {
        TupleId(u32::try_from(index).expect("tuple index exceeds u32 range"))
    }
}

impl fmt::Display for TupleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A tuple valid over the half-open interval `[ts, te)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IntervalTuple<T> {
    pub id: TupleId,
    pub ts: T,
    pub te: T,
    pub payload: u32,
}

impl<T: TimePoint> IntervalTuple<T> {
    pub fn new(id: TupleId, ts: T, te: T, payload: u32) -> Self {
        IntervalTuple { id, ts, te, payload }
    }
}

/// Why a tuple was rejected at ingestion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalDefect {
    /// `ts == te`
    Empty,
    /// `ts > te`
    Inverted,
    /// `te` is the reserved infinity sentinel
    UnboundedEnd,
}

impl fmt::Display for IntervalDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalDefect::Empty => "empty interval",
            IntervalDefect::Inverted => "inverted interval",
            IntervalDefect::UnboundedEnd => "unbounded interval end",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalIssue {
    pub id: TupleId,
    pub defect: IntervalDefect,
}

impl fmt::Display for IntervalIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at id {}", self.defect, self.id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("relation `{relation}` has {} invalid tuple(s): {}", issues.len(), render_issues(issues))]
pub struct InvalidRelation {
    pub relation: String,
    pub issues: Vec<IntervalIssue>,
}

fn render_issues(issues: &[IntervalIssue]) -> String {
    const SHOWN: usize = 8;
    let mut out = issues.iter().take(SHOWN).map(ToString::to_string).collect::<Vec<_>>().join("; ");
    if issues.len() > SHOWN {
        out.push_str(&format!("; ... {} more", issues.len() - SHOWN));
    }
    out
}

/// An ordered collection of tuples where the tuple at position `i` has id `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<T> {
    name: String,
    tuples: Vec<IntervalTuple<T>>,
}

impl<T: TimePoint> Relation<T> {
    /// Builds and validates a relation from `(ts, te, payload)` triples.
    pub fn new<I>(name: impl Into<String>, intervals: I) -> Result<Self, InvalidRelation>
    where
        I: IntoIterator<Item = (T, T, u32)>,
    {
        let rel = Self::new_unchecked(name, intervals);
        rel.validate()?;
        Ok(rel)
    }

    /// Assigns ids by position without validating.
    pub fn new_unchecked<I>(name: impl Into<String>, intervals: I) -> Self
    where
        I: IntoIterator<Item = (T, T, u32)>,
    {
        let tuples = intervals
            .into_iter()
            .enumerate()
            .map(|(i, (ts, te, payload))| IntervalTuple::new(TupleId::from_index(i), ts, te, payload))
            .collect();
        Relation { name: name.into(), tuples }
    }

    pub fn empty(name: impl Into<String>) -> Self {
        Relation { name: name.into(), tuples: Vec::new() }
    }

    /// Checks `ts < te` and a finite `te` for every tuple.
    pub fn validate(&self) -> Result<(), InvalidRelation> {
        let issues: Vec<_> = self
            .tuples
            .iter()
            .filter_map(|t| {
                let defect = if t.te.is_inf() {
                    IntervalDefect::UnboundedEnd
                } else if t.ts == t.te {
                    IntervalDefect::Empty
                } else if t.ts > t.te {
                    IntervalDefect::Inverted
                } else {
                    return None;
                };
                Some(IntervalIssue { id: t.id, defect })
            })
            .collect();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(InvalidRelation { relation: self.name.clone(), issues })
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[IntervalTuple<T>] {
        &self.tuples
    }

    #[inline]
    pub fn get(&self, id: TupleId) -> Option<&IntervalTuple<T>> {
        self.tuples.get(id.index())
    }

    /// # Panics
    /// If `id` is out of range.
    #[inline]
    pub fn tuple(&self, id: TupleId) -> &IntervalTuple<T> {
        match self.tuples.get(id.index()) {
            Some(t) => t,
            None => panic!("tuple id {id} out of range for relation `{}` ({} tuples)", self.name, self.len()),
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, IntervalTuple<T>> {
        self.tuples.iter()
    }
}

/// Validates `rel`, listing every offending tuple.
pub fn validate_relation<T: TimePoint>(rel: &Relation<T>) -> Result<(), InvalidRelation> {
    rel.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_valid_interval() {
        assert!(Relation::<i64>::new("r", [(0, 1, 0)]).is_ok());
    }

    #[test]
    fn rejects_empty_interval() {
        let err = Relation::<i64>::new("r", [(3, 3, 0)]).unwrap_err();
        assert_eq!(err.issues, vec![IntervalIssue { id: TupleId(0), defect: IntervalDefect::Empty }]);
        assert!(err.to_string().contains("empty interval at id 0"));
    }

    #[test]
    fn rejects_inverted_interval() {
        let err = Relation::<i64>::new("r", [(5, 2, 0)]).unwrap_err();
        assert_eq!(err.issues[0].defect, IntervalDefect::Inverted);
        assert!(err.to_string().contains("inverted interval at id 0"));
    }

    #[test]
    fn rejects_infinite_end() {
        let err = Relation::<i32>::new("r", [(0, 4, 0), (1, i32::INF, 0)]).unwrap_err();
        assert_eq!(err.issues, vec![IntervalIssue { id: TupleId(1), defect: IntervalDefect::UnboundedEnd }]);
    }

    #[test]
    fn reports_every_offender() {
        let rel = Relation::<i64>::new_unchecked("r", [(0, 1, 0), (2, 2, 0), (4, 3, 0)]);
        let err = validate_relation(&rel).unwrap_err();
        let ids: Vec<_> = err.issues.iter().map(|i| i.id.0).collect();
        assert_eq!(ids, [1, 2]);
    }

    #[test]
    fn ids_follow_positions() {
        let rel = Relation::<i64>::new("r", [(0, 1, 9), (1, 3, 8)]).unwrap();
        for (i, t) in rel.iter().enumerate() {
            assert_eq!(t.id.index(), i);
        }
        assert_eq!(rel.tuple(TupleId(1)).payload, 8);
    }
}
