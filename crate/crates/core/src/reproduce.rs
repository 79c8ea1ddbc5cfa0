//! Reproduction targets: each reruns one computation of the paper and
//! compares it with a golden file.

use crate::crossratio::{degeneration_matrix, fig1_trees, m010_system};
use crate::exactnum::{char_poly, quartic_galois_class, QMatrix};
use crate::flatnet::catalog_audit;
use crate::groebner::Budget;
use crate::io::{parse_matrix, parse_poly_file, parse_subgroups};
use crate::multipoly::MultiPoly;
use crate::report::{Grade, Report, Status};
use crate::toruscan::{coset_lines, scan, subspace_census, tier_scan, CosetLine, ExponentSubgroup, ScanOptions};
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    LemSo,
    LemSoOdd,
    M010Subspaces,
    M010Prune,
    MatricesM123,
    CharpolyD4,
    ModuliAudit,
}

pub const ALL_TARGETS: [Target; 7] =
    [Target::LemSo, Target::LemSoOdd, Target::M010Subspaces, Target::M010Prune, Target::MatricesM123, Target::CharpolyD4, Target::ModuliAudit];

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::LemSo => "lem-so",
            Target::LemSoOdd => "lem-so-odd",
            Target::M010Subspaces => "m010-subspaces",
            Target::M010Prune => "m010-prune",
            Target::MatricesM123 => "matrices-m123",
            Target::CharpolyD4 => "charpoly-d4",
            Target::ModuliAudit => "moduli-audit",
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            Target::LemSo => "Lemma lem:So, the union of the 6 lines",
            Target::LemSoOdd => "Lemma lem:SoODD, tiers 8796, 51, 3",
            Target::M010Subspaces => "M_{0,10} scan, a list of 554 subspaces",
            Target::M010Prune => "M_{0,10} scan, all but 78 of the 554",
            Target::MatricesM123 => "Lemma three_matrices",
            Target::CharpolyD4 => "square-tiled surface in (2,2)^odd, dihedral group with 8 elements",
            Target::ModuliAudit => "Theorem moduli_bound",
        }
    }
}

impl FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        ALL_TARGETS.iter().copied().find(|t| t.name() == s).ok_or_else(|| format!("unknown target {s}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub key: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error("golden file {0}: {1}")]
    Golden(String, String),
    #[error("{target}: {} differences from the golden file", diff.len())]
    Mismatch { target: String, diff: Vec<DiffEntry>, report: Box<Report> },
    #[error("computation failed: {0}")]
    Compute(String),
}

/// Source of golden files: the copies compiled into the library, or a
/// directory with files of the same names.
#[derive(Clone, Debug, Default)]
pub struct Golden {
    pub dir: Option<PathBuf>,
}

fn embedded(name: &str) -> Option<&'static str> {
    Some(match name {
        "cubic.poly" => include_str!("../golden/cubic.poly"),
        "h14.poly" => include_str!("../golden/h14.poly"),
        "lem_so.expected" => include_str!("../golden/lem_so.expected"),
        "lem_so_odd.expected" => include_str!("../golden/lem_so_odd.expected"),
        "m010_subspaces.expected" => include_str!("../golden/m010_subspaces.expected"),
        "m010_prune.expected" => include_str!("../golden/m010_prune.expected"),
        "matrices_m123.expected" => include_str!("../golden/matrices_m123.expected"),
        "monodromy_a.mat" => include_str!("../golden/monodromy_a.mat"),
        "monodromy_b.mat" => include_str!("../golden/monodromy_b.mat"),
        "charpoly_d4.expected" => include_str!("../golden/charpoly_d4.expected"),
        "moduli_audit.expected" => include_str!("../golden/moduli_audit.expected"),
        _ => return None,
    })
}

impl Golden {
    pub fn read(&self, name: &str) -> Result<String, ReproduceError> {
        match &self.dir {
            Some(d) => std::fs::read_to_string(d.join(name)).map_err(|e| ReproduceError::Golden(name.into(), e.to_string())),
            None => embedded(name).map(String::from).ok_or_else(|| ReproduceError::Golden(name.into(), "no such golden file".into())),
        }
    }
}

/// `key value` pairs of an expected-values file.
fn expected_pairs(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| match l.split_once(char::is_whitespace) {
            Some((k, v)) => (k.to_string(), v.trim().to_string()),
            None => (l.to_string(), String::new()),
        })
        .collect()
}

fn expected_lines(pairs: &[(String, String)]) -> BTreeSet<String> {
    pairs.iter().filter(|(k, _)| k == "line").map(|(_, v)| v.replace(' ', "")).collect()
}

fn expected_value<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Compares scalar keys; missing golden keys count as differences.
fn compare_keys(pairs: &[(String, String)], actual: &[(&str, String)], diff: &mut Vec<DiffEntry>) {
    for (k, a) in actual {
        let e = expected_value(pairs, k).unwrap_or("<missing>");
        if e != a {
            diff.push(DiffEntry { key: k.to_string(), expected: e.into(), actual: a.clone() });
        }
    }
}

fn compare_lines(pairs: &[(String, String)], actual: &[CosetLine], diff: &mut Vec<DiffEntry>) {
    let want = expected_lines(pairs);
    let got: BTreeSet<String> = actual.iter().map(|l| l.to_string().replace(' ', "")).collect();
    if want != got {
        let fmt = |s: &BTreeSet<String>| s.iter().cloned().collect::<Vec<_>>().join(" ");
        diff.push(DiffEntry { key: "lines".into(), expected: fmt(&want), actual: fmt(&got) });
    }
}

fn parse_err(name: &str) -> impl Fn(crate::io::IoError) -> ReproduceError + '_ {
    move |e| ReproduceError::Golden(name.into(), e.to_string())
}

/// Runs one target. A disagreement with the golden file is an error that
/// still carries the full report.
pub fn reproduce(target: Target, golden: &Golden, budget: &Budget, budget_name: &str) -> Result<Report, ReproduceError> {
    let start = Instant::now();
    let mut rep = Report::new(&format!("reproduce {}", target.name()), budget_name);
    rep.anchor = Some(target.anchor().into());
    let mut diff = Vec::new();
    let load = |rep: &mut Report, name: &str| -> Result<String, ReproduceError> {
        let t = golden.read(name)?;
        rep.input(name, t.as_bytes());
        Ok(t)
    };
    let compute = |e: crate::toruscan::ScanError| ReproduceError::Compute(e.to_string());
    match target {
        Target::LemSo => {
            let f = parse_poly_file(&load(&mut rep, "cubic.poly")?).map_err(parse_err("cubic.poly"))?;
            let exp = expected_pairs(&load(&mut rep, "lem_so.expected")?);
            let r = scan(&f.polys, &ExponentSubgroup::identity(f.vars.len()), &ScanOptions::default(), budget).map_err(compute)?;
            let lines = survivor_lines(&r.survivors, budget);
            rep.stage("subgroups", r.candidates_by_rank.iter().map(|c| c.count).sum(), None);
            rep.stage("survivors", r.survivors.len(), None);
            rep.results = json!({ "lines": lines.iter().map(|l| l.to_string()).collect::<Vec<_>>(), "undetermined": r.undetermined });
            compare_lines(&exp, &lines, &mut diff);
        }
        Target::LemSoOdd => {
            let f = parse_poly_file(&load(&mut rep, "h14.poly")?).map_err(parse_err("h14.poly"))?;
            let exp = expected_pairs(&load(&mut rep, "lem_so_odd.expected")?);
            let r = tier_scan(&f.polys, &[6, 6, 2], budget).map_err(compute)?;
            let t = r.tiers.clone().expect("tier mode reports tiers");
            let lines = survivor_lines(&r.survivors, budget);
            rep.stage("tier1", t.tier1_up_to_sign, None);
            rep.stage("tier2", t.tier2, None);
            rep.stage("tier3", t.tier3, None);
            rep.results = json!({
                "tier1-up-to-sign": t.tier1_up_to_sign,
                "tier1-signed": t.tier1_signed,
                "tier2": t.tier2,
                "tier3": t.tier3,
                "undetermined": r.undetermined,
                "lines": lines.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
            });
            compare_keys(&exp, &[("tier1", t.tier1_up_to_sign.to_string()), ("tier2", t.tier2.to_string()), ("tier3", t.tier3.to_string())], &mut diff);
            compare_lines(&exp, &lines, &mut diff);
        }
        Target::M010Subspaces | Target::M010Prune => {
            let name = if target == Target::M010Subspaces { "m010_subspaces.expected" } else { "m010_prune.expected" };
            let exp = expected_pairs(&load(&mut rep, name)?);
            let m = m123_subgroups();
            let c = subspace_census(&m010_system(), &m).map_err(compute)?;
            rep.stage("enumerated", c.enumerated, None);
            rep.stage("after-singleton", c.after_singleton, None);
            rep.results = serde_json::to_value(&c).expect("census serializes");
            let rank = |r: usize| c.by_rank.iter().find(|x| x.rank == r).map_or(0, |x| x.count).to_string();
            if target == Target::M010Subspaces {
                compare_keys(&exp, &[("enumerated", c.enumerated.to_string()), ("rank3", rank(3)), ("rank2", rank(2)), ("rank1", rank(1))], &mut diff);
            } else {
                compare_keys(&exp, &[("after-singleton", c.after_singleton.to_string())], &mut diff);
            }
        }
        Target::MatricesM123 => {
            let text = load(&mut rep, "matrices_m123.expected")?;
            let blocks: Vec<&str> = text.split("\n--\n").collect();
            let mut got = Vec::new();
            for (k, t) in fig1_trees().iter().enumerate() {
                let m = degeneration_matrix(t).map_err(|e| ReproduceError::Compute(e.to_string()))?;
                let want = blocks.get(k).map(|b| parse_matrix(b)).transpose().map_err(parse_err("matrices_m123.expected"))?;
                let as_q = QMatrix::from_rows(m.iter().map(|r| r.iter().map(|&x| crate::exactnum::int(x)).collect()).collect());
                if want.as_ref() != Some(&as_q) {
                    diff.push(DiffEntry { key: format!("M{}", k + 1), expected: want.map_or("<missing>".into(), |w| w.to_string()), actual: as_q.to_string() });
                }
                got.push(m);
            }
            rep.results = json!({ "M1": got[0], "M2": got[1], "M3": got[2] });
        }
        Target::CharpolyD4 => {
            let a = parse_matrix(&load(&mut rep, "monodromy_a.mat")?).map_err(parse_err("monodromy_a.mat"))?;
            let b = parse_matrix(&load(&mut rep, "monodromy_b.mat")?).map_err(parse_err("monodromy_b.mat"))?;
            let exp = expected_pairs(&load(&mut rep, "charpoly_d4.expected")?);
            if a.rows() != a.cols() || a.cols() != b.rows() || b.rows() != b.cols() {
                return Err(ReproduceError::Golden("monodromy".into(), "matrices must be square of equal size".into()));
            }
            let cp = char_poly(&a.mul(&b));
            let class = quartic_galois_class(&cp).map_or("none".to_string(), |g| g.to_string());
            let actual = MultiPoly::from_terms(1, cp.coeffs().iter().enumerate().map(|(i, c)| (vec![i as i32], c.clone())));
            let shown = actual.display(&["x"]);
            let want = expected_value(&exp, "charpoly").map(|s| MultiPoly::parse(s, &["x"], false));
            match want {
                Some(Ok(w)) if w == actual => {}
                Some(Ok(w)) => diff.push(DiffEntry { key: "charpoly".into(), expected: w.display(&["x"]), actual: shown.clone() }),
                _ => diff.push(DiffEntry { key: "charpoly".into(), expected: "<unreadable>".into(), actual: shown.clone() }),
            }
            compare_keys(&exp, &[("galois", class.clone())], &mut diff);
            rep.results = json!({ "charpoly": shown, "galois": class });
        }
        Target::ModuliAudit => {
            let exp = expected_pairs(&load(&mut rep, "moduli_audit.expected")?);
            let a = catalog_audit(5, 4);
            rep.stage("graphs", a.graphs, None);
            rep.stage("current-families", a.current_families, None);
            rep.results = serde_json::to_value(&a).expect("audit serializes");
            compare_keys(
                &exp,
                &[
                    ("circuit-failures", a.circuit_failures.to_string()),
                    ("oracle-mismatches", a.oracle_mismatches.to_string()),
                    ("height-violations", a.height_violations.to_string()),
                ],
                &mut diff,
            );
        }
    }
    rep.total_millis = Some(start.elapsed().as_millis() as u64);
    if diff.is_empty() {
        rep.verdict(target.name(), Status::Pass, Grade::Exact, "matches golden file");
        Ok(rep)
    } else {
        rep.verdict(target.name(), Status::Fail, Grade::Exact, format!("{} differences", diff.len()));
        rep.results = json!({ "computed": rep.results, "diff": diff });
        Err(ReproduceError::Mismatch { target: target.name().into(), diff, report: Box::new(rep) })
    }
}

/// `M_1, M_2, M_3` as saturated subgroups of `Z^9`.
pub fn m123_subgroups() -> Vec<ExponentSubgroup> {
    let text = embedded("matrices_m123.expected").expect("embedded");
    parse_subgroups(text, 9).expect("golden matrices parse")
}

/// Rational coset lines of all rank-one survivors, sorted.
pub fn survivor_lines(survivors: &[crate::toruscan::CosetCandidate], budget: &Budget) -> Vec<CosetLine> {
    let mut v: Vec<CosetLine> = survivors.iter().filter_map(|c| coset_lines(c, budget)).flatten().collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_names_round_trip() {
        for t in ALL_TARGETS {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("nope".parse::<Target>().is_err());
    }

    #[test]
    fn fast_targets_pass() {
        let b = Budget::default();
        for t in [Target::LemSo, Target::M010Subspaces, Target::M010Prune, Target::MatricesM123] {
            let r = reproduce(t, &Golden::default(), &b, "default").unwrap();
            assert_eq!(r.verdicts[0].status, Status::Pass);
        }
    }

    #[test]
    fn corrupted_golden_is_a_mismatch() {
        let dir = std::env::temp_dir().join(format!("torsionkit-golden-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("cubic.poly"), embedded("cubic.poly").unwrap()).unwrap();
        std::fs::write(dir.join("lem_so.expected"), "line (1, -1, t)\nline (2, 2, t)\n").unwrap();
        let r = reproduce(Target::LemSo, &Golden { dir: Some(dir.clone()) }, &Budget::default(), "default");
        std::fs::remove_dir_all(&dir).ok();
        match r {
            Err(ReproduceError::Mismatch { diff, report, .. }) => {
                assert_eq!(diff[0].key, "lines");
                assert_eq!(report.verdicts[0].status, Status::Fail);
            }
            other => panic!("expected a mismatch, got {other:?}"),
        }
    }

    #[test]
    fn printed_monodromy_does_not_give_the_stated_polynomial() {
        // The matrices as printed give x^4 - 7x^3 - 36x^2 - 7x + 1.
        match reproduce(Target::CharpolyD4, &Golden::default(), &Budget::default(), "default") {
            Err(ReproduceError::Mismatch { diff, .. }) => {
                assert_eq!(diff[0].key, "charpoly");
                assert_eq!(diff[0].actual, "x^4 - 7*x^3 - 36*x^2 - 7*x + 1");
            }
            other => panic!("{other:?}"),
        }
    }
}
