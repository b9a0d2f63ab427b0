//! Join predicates: which interval relation to join on, with optional
//! distance bounds.
//!
//! The ISEQL relations take a start/gap bound `delta` and an end bound
//! `epsilon`; an absent bound is relaxed (unbounded). Allen's relations take
//! no parameters.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::time::TimePoint;

/// An interval relation between a left tuple `r` and a right tuple `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredicateKind {
    /// `r.ts <= s.ts < r.te`
    StartPreceding,
    /// `r.ts < s.ts < r.te`
    StrictStartPreceding,
    /// Start preceding with `s` on the left.
    ReverseStartPreceding,
    /// `r.ts < s.te <= r.te`
    EndFollowing,
    /// `r.ts < s.te < r.te`
    StrictEndFollowing,
    /// End following with `s` on the left.
    ReverseEndFollowing,
    /// `r.te <= s.ts`
    Before,
    /// Before with `s` on the left.
    After,
    /// `r.ts <= s.ts < r.te <= s.te`
    LeftOverlap,
    /// Left overlap with `s` on the left.
    RightOverlap,
    /// `s.ts <= r.ts && r.te <= s.te`
    During,
    /// During with `s` on the left.
    ReverseDuring,
    /// `r.te < s.ts`
    AllenBefore,
    AllenAfter,
    /// `r.te == s.ts`
    Meets,
    MetBy,
    /// `r.ts < s.ts < r.te < s.te`
    Overlaps,
    OverlappedBy,
    /// `s.ts < r.ts && r.te < s.te`
    AllenDuring,
    Contains,
    /// `r.ts == s.ts && r.te < s.te`
    Starts,
    StartedBy,
    /// `s.ts < r.ts && r.te == s.te`
    Finishes,
    FinishedBy,
    Equals,
}

impl PredicateKind {
    pub const ALL: [PredicateKind; 25] = [
        PredicateKind::StartPreceding,
        PredicateKind::StrictStartPreceding,
        PredicateKind::ReverseStartPreceding,
        PredicateKind::EndFollowing,
        PredicateKind::StrictEndFollowing,
        PredicateKind::ReverseEndFollowing,
        PredicateKind::Before,
        PredicateKind::After,
        PredicateKind::LeftOverlap,
        PredicateKind::RightOverlap,
        PredicateKind::During,
        PredicateKind::ReverseDuring,
        PredicateKind::AllenBefore,
        PredicateKind::AllenAfter,
        PredicateKind::Meets,
        PredicateKind::MetBy,
        PredicateKind::Overlaps,
        PredicateKind::OverlappedBy,
        PredicateKind::AllenDuring,
        PredicateKind::Contains,
        PredicateKind::Starts,
        PredicateKind::StartedBy,
        PredicateKind::Finishes,
        PredicateKind::FinishedBy,
        PredicateKind::Equals,
    ];

    /// Allen's thirteen relations.
    pub const ALLEN: [PredicateKind; 13] = [
        PredicateKind::AllenBefore,
        PredicateKind::AllenAfter,
        PredicateKind::Meets,
        PredicateKind::MetBy,
        PredicateKind::Overlaps,
        PredicateKind::OverlappedBy,
        PredicateKind::AllenDuring,
        PredicateKind::Contains,
        PredicateKind::Starts,
        PredicateKind::StartedBy,
        PredicateKind::Finishes,
        PredicateKind::FinishedBy,
        PredicateKind::Equals,
    ];

    /// The five parameterized ISEQL relations.
    pub const ISEQL: [PredicateKind; 5] = [
        PredicateKind::StartPreceding,
        PredicateKind::EndFollowing,
        PredicateKind::Before,
        PredicateKind::LeftOverlap,
        PredicateKind::During,
    ];

    pub fn name(self) -> &'static str {
        use PredicateKind::*;
        match self {
            StartPreceding => "start-preceding",
            StrictStartPreceding => "strict-start-preceding",
            ReverseStartPreceding => "reverse-start-preceding",
            EndFollowing => "end-following",
            StrictEndFollowing => "strict-end-following",
            ReverseEndFollowing => "reverse-end-following",
            Before => "before",
            After => "after",
            LeftOverlap => "left-overlap",
            RightOverlap => "right-overlap",
            During => "during",
            ReverseDuring => "reverse-during",
            AllenBefore => "allen-before",
            AllenAfter => "allen-after",
            Meets => "meets",
            MetBy => "met-by",
            Overlaps => "overlaps",
            OverlappedBy => "overlapped-by",
            AllenDuring => "allen-during",
            Contains => "contains",
            Starts => "starts",
            StartedBy => "started-by",
            Finishes => "finishes",
            FinishedBy => "finished-by",
            Equals => "equals",
        }
    }

    pub fn is_allen(self) -> bool {
        Self::ALLEN.contains(&self)
    }

    pub fn accepts_delta(self) -> bool {
        use PredicateKind::*;
        matches!(
            self,
            StartPreceding
                | StrictStartPreceding
                | ReverseStartPreceding
                | Before
                | After
                | LeftOverlap
                | RightOverlap
                | During
                | ReverseDuring
        )
    }

    pub fn accepts_epsilon(self) -> bool {
        use PredicateKind::*;
        matches!(
            self,
            EndFollowing
                | StrictEndFollowing
                | ReverseEndFollowing
                | LeftOverlap
                | RightOverlap
                | During
                | ReverseDuring
        )
    }

    /// The relation with `r` and `s` exchanged, if it has a name of its own.
    pub fn inverse(self) -> Option<Self> {
        use PredicateKind::*;
        Some(match self {
            StartPreceding => ReverseStartPreceding,
            ReverseStartPreceding => StartPreceding,
            EndFollowing => ReverseEndFollowing,
            ReverseEndFollowing => EndFollowing,
            Before => After,
            After => Before,
            LeftOverlap => RightOverlap,
            RightOverlap => LeftOverlap,
            During => ReverseDuring,
            ReverseDuring => During,
            AllenBefore => AllenAfter,
            AllenAfter => AllenBefore,
            Meets => MetBy,
            MetBy => Meets,
            Overlaps => OverlappedBy,
            OverlappedBy => Overlaps,
            AllenDuring => Contains,
            Contains => AllenDuring,
            Starts => StartedBy,
            StartedBy => Starts,
            Finishes => FinishedBy,
            FinishedBy => Finishes,
            Equals => Equals,
            StrictStartPreceding | StrictEndFollowing => return None,
        })
    }

    /// The strict counterpart of an ISEQL relation: `<` in place of `<=`.
    pub fn strict_form(self) -> Option<Self> {
        use PredicateKind::*;
        Some(match self {
            StartPreceding => StrictStartPreceding,
            EndFollowing => StrictEndFollowing,
            Before => AllenBefore,
            After => AllenAfter,
            LeftOverlap => Overlaps,
            RightOverlap => OverlappedBy,
            During => AllenDuring,
            ReverseDuring => Contains,
            _ => return None,
        })
    }
}

impl fmt::Display for PredicateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown predicate `{0}`")]
pub struct UnknownPredicate(pub String);

impl FromStr for PredicateKind {
    type Err = UnknownPredicate;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL.into_iter().find(|k| k.name() == wanted).ok_or_else(|| UnknownPredicate(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("{relation} does not take a {param} parameter")]
    UnsupportedParameter { relation: PredicateKind, param: &'static str },
    #[error("{param} must be non-negative, got {value}")]
    NegativeParameter { param: &'static str, value: String },
}

/// A relation plus its optional bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PredicateSpec<T> {
    pub relation: PredicateKind,
    pub delta: Option<T>,
    pub epsilon: Option<T>,
}

impl<T: TimePoint> PredicateSpec<T> {
    /// A spec with both bounds relaxed.
    pub fn new(relation: PredicateKind) -> Self {
        PredicateSpec { relation, delta: None, epsilon: None }
    }

    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_epsilon(mut self, epsilon: T) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        for (param, value, allowed) in [
            ("delta", self.delta, self.relation.accepts_delta()),
            ("epsilon", self.epsilon, self.relation.accepts_epsilon()),
        ] {
            let Some(value) = value else { continue };
            if !allowed {
                return Err(SpecError::UnsupportedParameter { relation: self.relation, param });
            }
            if value < T::zero() {
                return Err(SpecError::NegativeParameter { param, value: value.to_string() });
            }
        }
        Ok(())
    }

    /// The same predicate with `r` and `s` exchanged.
    pub fn inverse(&self) -> Option<Self> {
        self.relation.inverse().map(|relation| PredicateSpec { relation, ..*self })
    }
}

impl<T: fmt::Display> fmt::Display for PredicateSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.relation)?;
        if let Some(d) = &self.delta {
            write!(f, " delta={d}")?;
        }
        if let Some(e) = &self.epsilon {
            write!(f, " epsilon={e}")?;
        }
        Ok(())
    }
}
