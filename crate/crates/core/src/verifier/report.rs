use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::exactcore::format_rat;

/// Expected or observed quantity of a case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Rational(BigRational),
    Count(usize),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Rational(x) => format_rat(x),
            Value::Count(c) => c.to_string(),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Rational(x) => s.serialize_str(&format_rat(x)),
            Value::Count(c) => s.serialize_u64(*c as u64),
        }
    }
}

impl From<BigRational> for Value {
    fn from(x: BigRational) -> Self {
        Value::Rational(x)
    }
}

impl From<usize> for Value {
    fn from(c: usize) -> Self {
        Value::Count(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The oracle matches the derived constant but not the printed one.
    ErrataMatch,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::ErrataMatch => "errata-match",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub suite: String,
    #[serde(rename = "caseId")]
    pub case_id: String,
    pub params: BTreeMap<String, String>,
    pub expected: Value,
    pub actual: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CaseResult {
    /// Plain equality check: pass iff `expected == actual`.
    pub fn compare(suite: &str, case_id: String, params: Params, expected: Value, actual: Value) -> Self {
        let verdict = if expected == actual { Verdict::Pass } else { Verdict::Fail };
        Self { suite: suite.into(), case_id, params: params.0, expected, actual, verdict, note: None }
    }

    /// Formula check with two candidate values. `expected` is the printed
    /// value; the verdict is errata-match when the oracle agrees with the
    /// derived value instead.
    pub fn formula(
        suite: &str,
        case_id: String,
        params: Params,
        printed: BigRational,
        derived: &BigRational,
        oracle: BigRational,
    ) -> Self {
        let verdict = if oracle == printed {
            Verdict::Pass
        } else if &oracle == derived {
            Verdict::ErrataMatch
        } else {
            Verdict::Fail
        };
        let note = (verdict == Verdict::Fail).then(|| format!("derived value {}", format_rat(derived)));
        Self {
            suite: suite.into(),
            case_id,
            params: params.0,
            expected: Value::Rational(printed),
            actual: Value::Rational(oracle),
            verdict,
            note,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Ordered `key -> value` echo of a case's inputs.
#[derive(Debug, Clone, Default)]
pub struct Params(pub BTreeMap<String, String>);

impl Params {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.0.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrataEntry {
    pub location: String,
    #[serde(rename = "printedConstant")]
    pub printed_constant: String,
    #[serde(rename = "resolvedConstant")]
    pub resolved_constant: String,
    pub witness: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub errata: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub config: BTreeMap<String, String>,
    pub cases: Vec<CaseResult>,
    pub errata: Vec<ErrataEntry>,
    pub summary: Summary,
    /// Wall time; kept out of the serialized report so output stays
    /// byte-identical between runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `suite,caseId,expected,actual,verdict` rows, one per case.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,caseId,expected,actual,verdict\n");
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                c.suite,
                c.case_id,
                c.expected.render(),
                c.actual.render(),
                c.verdict.as_str()
            );
        }
        out
    }
}
