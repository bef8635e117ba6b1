//! Verification output as data: one row per check with trial counts, plus
//! findings that record anything noteworthy that is not a pass/fail bit.
//! Rows sort deterministically so merged reports do not depend on the
//! order the work ran in.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub family: String,
    pub subcase: String,
    pub name: String,
    pub params: String,
    pub trials: u64,
    pub failures: u64,
    pub status: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Check {
    pub fn new(family: &str, subcase: &str, name: &str, trials: u64, failures: u64) -> Check {
        Check {
            family: family.to_string(),
            subcase: subcase.to_string(),
            name: name.to_string(),
            params: String::new(),
            trials,
            failures,
            status: if failures == 0 { "pass" } else { "fail" }.to_string(),
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_params(mut self, params: String) -> Check {
        self.params = params;
        self
    }

    pub fn with_witnesses(mut self, witnesses: Vec<String>) -> Check {
        self.witnesses = witnesses;
        self
    }

    pub fn with_notes(mut self, notes: Vec<String>) -> Check {
        self.notes = notes;
        self
    }
}

/// Anything worth surfacing that is not a failed assertion: a membership
/// miss against necessary-only laws, a text reading that had to be pinned
/// down, an orbit the reduction cannot reach.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub kind: String,
    pub family: String,
    pub subcase: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
    pub findings: Vec<Finding>,
}

impl Report {
    pub fn new(seed: u64) -> Report {
        Report {
            seed,
            checks: Vec::new(),
            findings: Vec::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn finding(&mut self, kind: &str, family: &str, subcase: &str, detail: String) {
        self.findings.push(Finding {
            kind: kind.to_string(),
            family: family.to_string(),
            subcase: subcase.to_string(),
            detail,
        });
    }

    /// Appends another report's rows; the receiver's seed wins.
    pub fn absorb(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.findings.extend(other.findings);
    }

    /// Deterministic row order regardless of production order.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| {
            (&a.family, &a.subcase, &a.name, &a.params).cmp(&(
                &b.family, &b.subcase, &b.name, &b.params,
            ))
        });
        self.findings.sort_by(|a, b| {
            (&a.family, &a.subcase, &a.kind, &a.detail).cmp(&(
                &b.family, &b.subcase, &b.kind, &b.detail,
            ))
        });
    }

    pub fn all_green(&self) -> bool {
        self.checks.iter().all(|c| c.status == "pass")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let params = if c.params.is_empty() {
                String::new()
            } else {
                format!(" [{}]", c.params)
            };
            out.push_str(&format!(
                "{:<4} {}/{} {}{} ({} trials, {} failures)\n",
                c.status.to_uppercase(),
                c.family,
                c.subcase,
                c.name,
                params,
                c.trials,
                c.failures
            ));
            for n in &c.notes {
                out.push_str(&format!("     note: {n}\n"));
            }
        }
        if !self.findings.is_empty() {
            out.push_str("findings:\n");
            for f in &self.findings {
                out.push_str(&format!(
                    "  [{}] {}/{}: {}\n",
                    f.kind, f.family, f.subcase, f.detail
                ));
            }
        }
        let failed = self.checks.iter().filter(|c| c.status != "pass").count();
        if failed == 0 {
            out.push_str(&format!("all {} checks passed\n", self.checks.len()));
        } else {
            out.push_str(&format!(
                "{failed} of {} checks FAILED\n",
                self.checks.len()
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_then_sort_is_order_independent() {
        let mk = |fam: &str, name: &str| Check::new(fam, "all", name, 3, 0);
        let mut a = Report::new(7);
        a.check(mk("B", "x"));
        a.check(mk("A", "y"));
        let mut b = Report::new(7);
        b.check(mk("A", "x"));
        let mut left = a.clone();
        left.absorb(b.clone());
        left.sort();
        let mut right = b;
        right.absorb(a);
        right.seed = 7;
        right.sort();
        assert_eq!(left, right);
        assert!(left.all_green());
    }

    #[test]
    fn json_round_trips() {
        let mut r = Report::new(3);
        r.check(
            Check::new("F", "s", "atlas", 10, 1)
                .with_params("def=(1,0,-1) nu=(1,0,-1)".into())
                .with_witnesses(vec!["[[e^0]]".into()])
                .with_notes(vec!["note".into()]),
        );
        r.finding("reading_note", "F", "s", "detail".into());
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!back.all_green());
    }
}
