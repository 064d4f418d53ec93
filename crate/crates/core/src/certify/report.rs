use crate::error::numerical;
use crate::Result;
use std::collections::BTreeMap;

/// One evaluated node or pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub location: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl Sample {
    pub fn new(location: Vec<f64>, lhs: f64, rhs: f64) -> Self {
        Sample {
            location,
            lhs,
            rhs,
            slack: lhs - rhs,
        }
    }
}

/// The result of one inequality over all nodes of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    /// Non-asserted sections are diagnostics; they never affect `pass`.
    pub asserted: bool,
    pub tolerance: f64,
    pub columns: Vec<String>,
    pub worst_slack: f64,
    pub worst_location: Vec<f64>,
    pub violations: usize,
    pub samples: Vec<Sample>,
}

impl Section {
    /// Reduces samples in index order; the lowest index wins ties.
    pub fn new(name: &str, asserted: bool, tolerance: f64, columns: &[&str], samples: Vec<Sample>) -> Result<Self> {
        let mut worst = f64::NEG_INFINITY;
        let mut at = Vec::new();
        let mut violations = 0;
        for s in &samples {
            if !s.slack.is_finite() {
                return numerical(format!(
                    "{name}: non-finite slack at {:?} (lhs {}, rhs {})",
                    s.location, s.lhs, s.rhs
                ));
            }
            if s.slack > worst {
                worst = s.slack;
                at = s.location.clone();
            }
            if s.slack > tolerance {
                violations += 1;
            }
        }
        Ok(Section {
            name: name.to_string(),
            asserted,
            tolerance,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            worst_slack: worst,
            worst_location: at,
            violations,
            samples,
        })
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn pass(&self) -> bool {
        self.violations == 0
    }

    /// Up to `m` samples with the largest slack, worst first.
    pub fn worst_samples(&self, m: usize) -> Vec<&Sample> {
        let mut idx: Vec<usize> = (0..self.samples.len()).collect();
        idx.sort_by(|&a, &b| {
            self.samples[b]
                .slack
                .total_cmp(&self.samples[a].slack)
                .then(a.cmp(&b))
        });
        idx.into_iter().take(m).map(|i| &self.samples[i]).collect()
    }
}

/// A wide per-node table, used when one row carries several estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub tolerance: f64,
    pub worst_slack: f64,
    pub worst_section: String,
    pub worst_location: Vec<f64>,
    pub violations: usize,
    pub pass: bool,
    /// The first section is the primary one; its samples are the report's rows.
    pub sections: Vec<Section>,
    pub metrics: BTreeMap<String, f64>,
    pub notes: Vec<String>,
    pub table: Option<Table>,
}

impl VerificationReport {
    pub fn new(check: &str, params: BTreeMap<String, String>, tolerance: f64, sections: Vec<Section>) -> Self {
        let mut worst = f64::NEG_INFINITY;
        let mut worst_section = String::new();
        let mut at = Vec::new();
        let mut violations = 0;
        for s in sections.iter().filter(|s| s.asserted) {
            violations += s.violations;
            if s.worst_slack > worst {
                worst = s.worst_slack;
                worst_section = s.name.clone();
                at = s.worst_location.clone();
            }
        }
        VerificationReport {
            check: check.to_string(),
            params,
            tolerance,
            worst_slack: worst,
            worst_section,
            worst_location: at,
            violations,
            pass: violations == 0,
            sections,
            metrics: BTreeMap::new(),
            notes: Vec::new(),
            table: None,
        }
    }

    pub fn primary(&self) -> &Section {
        &self.sections[0]
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn with_metric(mut self, key: &str, v: f64) -> Self {
        self.metrics.insert(key.to_string(), v);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
