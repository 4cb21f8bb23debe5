//! Named exact checks with their expected and computed values.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    /// Free-form lines printed after the checks.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            ..Report::default()
        }
    }

    pub fn check(
        &mut self,
        label: impl Into<String>,
        expected: impl fmt::Display,
        computed: impl fmt::Display,
        pass: bool,
    ) -> bool {
        self.checks.push(Check {
            label: label.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
        });
        pass
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    /// Conjunction of every check; an empty report does not pass.
    pub fn overall(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for (i, c) in self.checks.iter().enumerate() {
            writeln!(
                f,
                "[{}] {}. {}: expected {}, computed {}",
                if c.pass { "PASS" } else { "FAIL" },
                i + 1,
                c.label,
                c.expected,
                c.computed
            )?;
        }
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        write!(f, "overall: {}", if self.overall() { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_is_conjunction() {
        let mut r = Report::new("t");
        assert!(!r.overall());
        r.check("a", 1, 1, true);
        assert!(r.overall());
        r.check("b", 1, 2, false);
        assert!(!r.overall());
        assert_eq!(r.failed().len(), 1);
        assert!(r.to_string().contains("[FAIL] 2. b: expected 1, computed 2"));
    }
}
