//! Uniform, machine-checkable result records for every inequality the crate certifies.

use std::fmt;

use num_bigint::BigInt;

use crate::scalar::{big, int, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Failed,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Failed
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Failed => "FAILED",
            Verdict::NotApplicable => "NOT-APPLICABLE",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub key: String,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub instance_id: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub note: Option<String>,
}

impl Certificate {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            instance_id: String::new(),
            verdict: Verdict::NotApplicable,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn witness(mut self, key: impl Into<String>, value: Scalar) -> Self {
        self.witnesses.push(Witness {
            key: key.into(),
            value,
        });
        self
    }

    pub fn count(self, key: impl Into<String>, value: usize) -> Self {
        self.witness(key, big(BigInt::from(value)))
    }

    pub fn flag(self, key: impl Into<String>, value: bool) -> Self {
        self.witness(key, int(value as i64))
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn verdict(mut self, verdict: Verdict) -> Self {
        self.verdict = verdict;
        self
    }

    pub fn passed_if(self, ok: bool) -> Self {
        self.verdict(Verdict::from_bool(ok))
    }

    pub fn with_instance(mut self, id: impl Into<String>) -> Self {
        self.instance_id = id.into();
        self
    }

    pub fn is_pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn is_failed(&self) -> bool {
        self.verdict == Verdict::Failed
    }

    pub fn get(&self, key: &str) -> Option<&Scalar> {
        self.witnesses
            .iter()
            .find(|w| w.key == key)
            .map(|w| &w.value)
    }
}
