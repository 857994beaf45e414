use std::fmt;

use serde::Serialize;

/// One checked clause: an identifier, its outcome and, on failure, the first
/// witness found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// A list of clauses, kept sorted by id so output never depends on the order
/// checks ran in.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub subject: String,
    pub clauses: Vec<Clause>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report {
            subject: subject.into(),
            clauses: Vec::new(),
        }
    }

    /// Records a clause; `witness` is `None` when it passed.
    pub fn record(&mut self, id: impl Into<String>, witness: Option<String>) {
        let id = id.into();
        let clause = Clause {
            passed: witness.is_none(),
            witness,
            id,
        };
        let at = self.clauses.partition_point(|c| c.id < clause.id);
        self.clauses.insert(at, clause);
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.record(id, None);
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: impl Into<String>) {
        self.record(id, Some(witness.into()));
    }

    /// Appends every clause of `other`, prefixing ids with `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for c in other.clauses {
            self.record(format!("{prefix}.{}", c.id), c.witness);
        }
    }

    pub fn passed(&self) -> bool {
        self.clauses.iter().all(|c| c.passed)
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for c in &self.clauses {
            match &c.witness {
                None => writeln!(f, "  pass {}", c.id)?,
                Some(w) => writeln!(f, "  FAIL {}: {w}", c.id)?,
            }
        }
        Ok(())
    }
}
