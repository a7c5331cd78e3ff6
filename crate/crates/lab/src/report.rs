//! JSON-lines report records. Exact values are always strings.

use std::collections::BTreeMap;

use serde::Serialize;
use usvp_core::descent::{basis_hash, QueryRecord};
use usvp_core::scalar::to_exact_string;
use usvp_core::sparsify::SparsifyTrace;
use usvp_core::{Certificate, Verdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRecord {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRecord {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub name: String,
    pub instance_id: String,
    pub verdict: &'static str,
    pub witnesses: Vec<WitnessRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&Certificate> for CertificateRecord {
    fn from(c: &Certificate) -> Self {
        Self {
            kind: "certificate",
            name: c.name.clone(),
            instance_id: c.instance_id.clone(),
            verdict: c.verdict.as_str(),
            witnesses: c
                .witnesses
                .iter()
                .map(|w| WitnessRecord {
                    key: w.key.clone(),
                    value: to_exact_string(&w.value),
                })
                .collect(),
            note: c.note.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleRecord {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub source: &'static str,
    pub index: usize,
    pub basis_hash: String,
    pub rank: usize,
    pub d: String,
    pub verdict: &'static str,
    pub promise_holds: bool,
}

impl OracleRecord {
    pub fn new(index: usize, q: &QueryRecord) -> Self {
        Self {
            kind: "transcript",
            source: "oracle",
            index,
            basis_hash: q.basis_hash.clone(),
            rank: q.rank,
            d: to_exact_string(&q.d),
            verdict: q.verdict.as_str(),
            promise_holds: q.promise_holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub source: &'static str,
    pub seed: u64,
    pub generator: &'static str,
    pub step: usize,
    /// One-based subset members.
    pub subset: Vec<usize>,
    pub pivot: Option<usize>,
    pub survivor_pairs: Option<usize>,
    pub basis_hash: String,
}

impl StepRecord {
    pub fn from_trace(t: &SparsifyTrace) -> Vec<Self> {
        (0..t.chain.len())
            .map(|k| {
                let choice = k.checked_sub(1).map(|i| &t.choices[i]);
                Self {
                    kind: "transcript",
                    source: "sparsify",
                    seed: t.seed,
                    generator: t.generator,
                    step: k,
                    subset: choice
                        .map_or_else(Vec::new, |c| c.subset.iter().map(|j| j + 1).collect()),
                    pivot: choice.and_then(|c| c.pivot).map(|p| p + 1),
                    survivor_pairs: t.survivor_pairs.as_ref().map(|s| s[k]),
                    basis_hash: basis_hash(&t.chain[k]),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub input: Option<String>,
    pub seed: u64,
    pub norm: String,
    pub rank_cap: usize,
    pub output: Option<String>,
    pub mode: Option<String>,
    pub eta: Option<u32>,
    pub trials: Option<usize>,
    pub d: Option<String>,
    pub gamma: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummaryRecord {
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub config: ConfigEcho,
    pub values: BTreeMap<String, String>,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub exit_code: i32,
    pub timing_ms: BTreeMap<String, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Record {
    Certificate(CertificateRecord),
    Oracle(OracleRecord),
    Step(StepRecord),
    Summary(SummaryRecord),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub certificates: Vec<Certificate>,
    pub oracle: Vec<QueryRecord>,
    pub steps: Vec<StepRecord>,
    pub values: BTreeMap<String, String>,
    pub timing_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn certify(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    pub fn value(&mut self, key: impl Into<String>, value: impl ToString) {
        self.values.insert(key.into(), value.to_string());
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.certificates.iter().filter(|c| c.verdict == v).count()
    }

    /// Exit code implied by the certificates: NOT-APPLICABLE never fails.
    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Failed) > 0 {
            crate::error::EXIT_CERTIFICATE
        } else {
            crate::error::EXIT_OK
        }
    }

    pub fn records(&self, config: &ConfigEcho) -> Vec<Record> {
        let mut out: Vec<Record> = self
            .certificates
            .iter()
            .map(|c| Record::Certificate(c.into()))
            .collect();
        out.extend(
            self.oracle
                .iter()
                .enumerate()
                .map(|(i, q)| Record::Oracle(OracleRecord::new(i, q))),
        );
        out.extend(self.steps.iter().cloned().map(Record::Step));
        out.push(Record::Summary(SummaryRecord {
            kind: "summary",
            config: config.clone(),
            values: self.values.clone(),
            passed: self.count(Verdict::Pass),
            failed: self.count(Verdict::Failed),
            not_applicable: self.count(Verdict::NotApplicable),
            exit_code: self.exit_code(),
            timing_ms: self.timing_ms.clone(),
        }));
        out
    }

    pub fn to_json_lines(&self, config: &ConfigEcho) -> String {
        json_lines(&self.records(config))
    }

    /// Certificate records only; free of timing and therefore reproducible.
    pub fn certificate_stream(&self) -> String {
        certificate_stream(&self.certificates)
    }
}

pub fn json_lines(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

pub fn certificate_stream(certs: &[Certificate]) -> String {
    let records: Vec<Record> = certs
        .iter()
        .map(|c| Record::Certificate(c.into()))
        .collect();
    json_lines(&records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use usvp_core::scalar::ratio;

    #[test]
    fn certificate_json_shape() {
        let c = Certificate::new("x")
            .witness("w", ratio(-3, 4))
            .passed_if(true)
            .with_instance("i1");
        let line = certificate_stream(&[c]);
        assert_eq!(
            line,
            "{\"type\":\"certificate\",\"name\":\"x\",\"instance_id\":\"i1\",\"verdict\":\"PASS\",\"witnesses\":[{\"key\":\"w\",\"value\":\"-3/4\"}]}\n"
        );
    }

    #[test]
    fn summary_counts() {
        let mut r = Report::default();
        r.certify(Certificate::new("a").passed_if(true));
        r.certify(Certificate::new("b"));
        assert_eq!(r.exit_code(), 0);
        r.certify(Certificate::new("c").passed_if(false));
        assert_eq!(r.exit_code(), 4);
        let text = r.to_json_lines(&ConfigEcho::default());
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().last().unwrap().contains("\"failed\":1"));
    }
}
