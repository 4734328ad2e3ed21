//! Pass/fail reporting for mathematical validity checks. A report never
//! throws anything away: each item carries both sides of the equation it
//! checked, so a failure is directly actionable.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub items: Vec<CheckItem>,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.items.push(CheckItem {
            name,
            passed,
            detail,
        });
    }

    pub fn warn(&mut self, message: String) {
        self.warnings.push(message);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            let tag = if item.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", item.name, item.detail)?;
        }
        for warning in &self.warnings {
            writeln!(f, "warn {warning}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_passes_only_when_every_item_does() {
        let mut report = CheckReport::new();
        report.push("first", true, "1 = 1".to_string());
        assert!(report.passed());
        report.push("second", false, "2 != 3".to_string());
        assert!(!report.passed());
        assert_eq!(report.failures().count(), 1);
        assert_eq!(report.failures().next().unwrap().name, "second");
    }

    #[test]
    fn warnings_do_not_fail_a_report() {
        let mut report = CheckReport::new();
        report.push("only", true, "fine".to_string());
        report.warn("coefficient growth is unusual".to_string());
        assert!(report.passed());
        let text = report.to_string();
        assert!(text.contains("ok   only: fine"));
        assert!(text.contains("warn coefficient growth"));
    }
}
