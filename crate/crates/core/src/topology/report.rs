use alloc::string::String;
use alloc::vec::Vec;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Digest of a sequence of text parts, separated so `("ab","c")` and
/// `("a","bc")` differ.
pub fn digest<'a>(parts: impl IntoIterator<Item = &'a str>) -> u64 {
    let mut bytes = Vec::new();
    for p in parts {
        bytes.extend_from_slice(p.as_bytes());
        bytes.push(0x1f);
    }
    fnv1a(&bytes)
}

/// One checked inequality `lhs ≤ rhs` (or a residual against its bound).
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeCase {
    pub digest: u64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub margin: f64,
    /// Allowed negative slack for this case.
    pub tolerance: f64,
}

impl ProbeCase {
    pub fn new(digest: u64, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Self { digest, lhs, rhs, margin: rhs - lhs, tolerance }
    }

    pub fn holds(&self) -> bool {
        self.margin >= -self.tolerance
    }
}

/// Outcome of a probe; cases are sorted by digest.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub probe: String,
    pub cases: Vec<ProbeCase>,
    pub worst_margin: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl ProbeReport {
    /// Passes iff every case holds within its tolerance; trivially for no
    /// cases.
    pub fn from_cases(probe: &str, mut cases: Vec<ProbeCase>) -> Self {
        cases.sort_by_key(|c| c.digest);
        let worst_margin = cases.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
        let pass = cases.iter().all(ProbeCase::holds);
        Self {
            probe: probe.into(),
            cases,
            worst_margin: if worst_margin.is_finite() { worst_margin } else { 0.0 },
            pass,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.notes.push(note);
        self
    }

    /// The failing cases.
    pub fn failures(&self) -> impl Iterator<Item = &ProbeCase> {
        self.cases.iter().filter(|c| !c.holds())
    }

    /// Concatenates reports of one probe kind.
    pub fn merge(probe: &str, reports: impl IntoIterator<Item = ProbeReport>) -> Self {
        let mut cases = Vec::new();
        let mut notes = Vec::new();
        let mut pass = true;
        for r in reports {
            pass &= r.pass;
            cases.extend(r.cases);
            notes.extend(r.notes);
        }
        let mut merged = Self::from_cases(probe, cases);
        merged.pass &= pass;
        merged.notes = notes;
        merged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a(b"a"), 0xaf63dc4c8601ec8c);
        assert_ne!(digest(["ab", "c"]), digest(["a", "bc"]));
    }

    #[test]
    fn pass_and_worst_margin() {
        let r = ProbeReport::from_cases("p", alloc::vec![ProbeCase::new(2, 1.0, 3.0, 0.0), ProbeCase::new(1, 2.0, 2.0, 0.0)]);
        assert!(r.pass);
        assert_eq!(r.worst_margin, 0.0);
        assert_eq!(r.cases[0].digest, 1);
        let r = ProbeReport::from_cases("p", alloc::vec![ProbeCase::new(1, 2.0, 1.0, 0.5)]);
        assert!(!r.pass);
        assert!(ProbeReport::from_cases("empty", alloc::vec![]).pass);
    }
}
