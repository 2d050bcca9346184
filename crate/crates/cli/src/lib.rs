//! Report types and subcommand bodies for the `khr` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use khr_core::braid::{parse_braid_word, BraidWord};
use khr_core::complex::{minimal_rouquier_complex, rouquier_complex, BimoduleChainComplex, CONVENTION_VERSION};
use khr_core::decompose::format_label;
use khr_core::error::Error;
use khr_core::hecke::{braid_to_hecke, homfly, ocneanu_trace};
use khr_core::hochschild::{euler_bridge, hhh_of_complex, trace_series, TriGradedTable};
use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_DEGREE: i64 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Braid input as accepted in JSON files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidInput {
    pub n: usize,
    pub word: Vec<i32>,
}

impl BraidInput {
    pub fn braid(&self) -> Result<BraidWord, Error> {
        BraidWord::new(self.n, self.word.clone())
    }
}

pub fn read_braid(n: Option<usize>, text: Option<&str>, input: Option<&Path>) -> Result<BraidWord, String> {
    match (input, n) {
        (Some(path), _) => {
            let raw = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let parsed: BraidInput = serde_json::from_str(&raw).map_err(|e| format!("{}: {e}", path.display()))?;
            parsed.braid().map_err(|e| e.to_string())
        }
        (None, Some(n)) => parse_braid_word(text.unwrap_or(""), n).map_err(|e| e.to_string()),
        (None, None) => Err("either --n (with --braid) or --input is required".into()),
    }
}

/// Minimized complexes on disk, keyed by strand count, word and convention version.
#[derive(Clone, Debug)]
pub struct ComplexCache {
    dir: PathBuf,
}

impl ComplexCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(ComplexCache { dir })
    }

    pub fn path_for(&self, b: &BraidWord) -> PathBuf {
        let word: Vec<String> = b.letters().iter().map(|l| l.to_string()).collect();
        self.dir.join(format!("v{CONVENTION_VERSION}-n{}-[{}].json", b.strands(), word.join(",")))
    }

    /// A cached entry that fails to parse or validate is recomputed and overwritten.
    pub fn minimal_complex(&self, b: &BraidWord) -> Result<BimoduleChainComplex, String> {
        let path = self.path_for(b);
        if let Ok(raw) = fs::read_to_string(&path) {
            if let Ok(c) = serde_json::from_str::<BimoduleChainComplex>(&raw) {
                if c.n() == b.strands() {
                    return Ok(c);
                }
            }
        }
        let c = minimal_rouquier_complex(b).map_err(|e| e.to_string())?;
        let text = serde_json::to_string(&c).map_err(|e| e.to_string())?;
        fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(c)
    }
}

fn minimal(b: &BraidWord, cache: Option<&ComplexCache>) -> Result<BimoduleChainComplex, String> {
    match cache {
        Some(c) => c.minimal_complex(b),
        None => minimal_rouquier_complex(b).map_err(|e| e.to_string()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomflyReport {
    /// Raw trace, keyed by power of `a`.
    pub trace: BTreeMap<String, String>,
    /// Normalized invariant, keyed by power of `α` (`a = -α²`).
    pub normalized: BTreeMap<String, String>,
}

pub fn homfly_report(b: &BraidWord) -> HomflyReport {
    HomflyReport {
        trace: ocneanu_trace(&braid_to_hecke(b)).to_string_map(),
        normalized: homfly(b).to_string_map(),
    }
}

impl HomflyReport {
    pub fn text(&self) -> String {
        let show = |m: &BTreeMap<String, String>, var: &str| {
            if m.is_empty() {
                return "0".to_string();
            }
            m.iter().map(|(k, v)| format!("({v})*{}", k.replacen('a', var, 1))).collect::<Vec<_>>().join(" + ")
        };
        format!("normalized (in α, a = -α²): {}\ntrace: {}\n", show(&self.normalized, "α"), show(&self.trace, "a"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectEntry {
    pub label: String,
    pub shift: i64,
    pub rank: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeEntry {
    pub degree: i64,
    pub objects: Vec<ObjectEntry>,
}

pub fn rouquier_report(b: &BraidWord, minimize: bool, cache: Option<&ComplexCache>) -> Result<Vec<DegreeEntry>, String> {
    let c = if minimize { minimal(b, cache)? } else { rouquier_complex(b).map_err(|e| e.to_string())? };
    Ok(c.levels()
        .iter()
        .map(|(&degree, terms)| DegreeEntry {
            degree,
            objects: terms
                .iter()
                .map(|t| ObjectEntry { label: format_label(&t.word(), 0), shift: t.shift, rank: t.graded_rank().to_string() })
                .collect(),
        })
        .collect())
}

pub fn rouquier_text(entries: &[DegreeEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let objs: Vec<String> = e
            .objects
            .iter()
            .map(|o| if o.shift == 0 { o.label.clone() } else { format!("{}({})", o.label, o.shift) })
            .collect();
        let ranks: Vec<&str> = e.objects.iter().map(|o| o.rank.as_str()).collect();
        let _ = writeln!(out, "[{}] {}    ranks: {}", e.degree, objs.join(" ⊕ "), ranks.join(", "));
    }
    if entries.is_empty() {
        out.push_str("0\n");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    #[serde(rename = "match")]
    pub matches: bool,
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HhhReport {
    #[serde(flatten)]
    pub table: TriGradedTable,
    pub euler_check: EulerCheck,
}

pub fn hhh_report(b: &BraidWord, max_degree: i64, cache: Option<&ComplexCache>) -> Result<HhhReport, String> {
    if max_degree < 0 {
        return Err(format!("max degree must be nonnegative, got {max_degree}"));
    }
    let table = hhh_of_complex(&minimal(b, cache)?, max_degree);
    let matches = euler_bridge(&table) == trace_series(b, max_degree);
    Ok(HhhReport { table, euler_check: EulerCheck { matches, order: max_degree } })
}

impl HhhReport {
    pub fn text(&self) -> String {
        let mut out = format!("HHH up to internal degree {}\n   k    i    j  dim\n", self.table.truncation);
        for (&(k, i, j), d) in &self.table.entries {
            let _ = writeln!(out, "{k:>4} {i:>4} {j:>4} {d:>4}");
        }
        let verdict = if self.euler_check.matches { "matches" } else { "DOES NOT match" };
        let _ = writeln!(out, "Euler characteristic {verdict} the trace to order {}", self.euler_check.order);
        out
    }
}

pub fn verify_text(r: &khr_core::verify::VerifyReport) -> String {
    use khr_core::verify::Status;
    let mut out = String::new();
    for s in &r.suites {
        let tag = match s.status {
            Status::Passed => "PASS",
            Status::Failed => "FAIL",
            Status::Skipped => "SKIP",
            Status::TimedOut => "TIMEOUT",
        };
        let _ = writeln!(out, "{tag:<7} {} ({} checks, {} ms)", s.suite, s.checks.len(), s.elapsed_ms);
        for c in s.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(out, "        ✗ {}: {}", c.name, c.detail);
        }
    }
    let _ = writeln!(out, "{}", if r.passed { "all executed checks passed" } else { "verification FAILED" });
    out
}
