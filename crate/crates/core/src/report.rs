use serde::{Serialize, Serializer};

/// Outcome of one check; failures carry replayable evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<E> {
    Pass,
    Fail(E),
}

impl<E> Verdict<E> {
    pub fn passed(&self) -> bool {
        matches!(self, Self::Pass)
    }

    pub fn evidence(&self) -> Option<&E> {
        match self {
            Self::Pass => None,
            Self::Fail(e) => Some(e),
        }
    }
}

impl<E> Serialize for Verdict<E> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(if self.passed() { "pass" } else { "fail" })
    }
}
