//! One function per subcommand. Inputs are read and parsed before any
//! computation starts; each function returns the report and summary lines.

use clap::{Args, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};
use torsionkit::crossratio::{check_cre, residues, torsion_config_check, QCoords, RootOfUnityTest, StableFormConfig, TorsionVerdict};
use torsionkit::exactnum::{parse_rational, FieldElement, Rational, Scalar, UniPoly};
use torsionkit::flatnet::{block_decomposition, enumerate_currents, kirchhoff_check, moduli_height_audit, solve_moduli, trace_matrix, is_psd, FlatnetError, ModuliOutcome};
use torsionkit::groebner::{eliminate, groebner_basis, is_trivial, saturate, torus_trivial, Budget, GroebnerError, TermOrder};
use torsionkit::heights::{height_algebraic, height_point, HeightError, HeightMode, HeightValue};
use torsionkit::io::{parse_config, parse_graph, parse_poly_file, parse_subgroups, ConfigFile, GraphFile, PolyFile};
use torsionkit::multipoly::MultiPoly;
use torsionkit::report::{Grade, Report, Status};
use torsionkit::reproduce::{survivor_lines, Golden, ReproduceError, Target, ALL_TARGETS};
use torsionkit::toruscan::{saturated_scan, scan, tier_scan, degrevlex_sorted, CandidateStatus, ExponentSubgroup, ScanError, ScanOptions, ScanReport};

pub struct Context {
    pub budget: Budget,
    pub budget_name: &'static str,
}

/// Errors that stop a run before a report exists.
pub enum Failure {
    /// Unreadable or malformed input.
    Input(String),
    /// A resource limit hit outside any per-candidate accounting.
    Budget(String),
    Compute(String),
}

impl From<GroebnerError> for Failure {
    fn from(e: GroebnerError) -> Self {
        match e {
            GroebnerError::ResourceExhausted(_) => Failure::Budget(e.to_string()),
            GroebnerError::Unsupported(_) => Failure::Input(e.to_string()),
        }
    }
}

impl From<ScanError> for Failure {
    fn from(e: ScanError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(Report, Vec<String>), Failure>;

fn read(rep: &mut Report, path: &Path) -> Result<String, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let name = path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
    rep.input(&name, text.as_bytes());
    Ok(text)
}

fn input_err(path: &Path) -> impl Fn(torsionkit::io::IoError) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn read_polys(rep: &mut Report, path: &Path) -> Result<PolyFile, Failure> {
    let text = read(rep, path)?;
    parse_poly_file(&text).map_err(input_err(path))
}

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',').map(|w| w.trim().parse().map_err(|_| Failure::Input(format!("not an integer: {w}")))).collect()
}

// ---------------------------------------------------------------------------
// torus-scan

#[derive(Args)]
pub struct TorusScanArgs {
    /// Polynomial file.
    #[arg(long)]
    polys: PathBuf,
    /// Subgroup file, or `identity` for the whole lattice.
    #[arg(long, default_value = "identity")]
    subspace: String,
    /// Three-tier search for one surface in three variables.
    #[arg(long)]
    tier_mode: bool,
    /// Distinguished support exponent for tier mode, e.g. `6,6,2`; the
    /// degrevlex-largest one when omitted.
    #[arg(long)]
    lambda: Option<String>,
    /// Peripheral polynomials: drop translates inside their zero sets.
    #[arg(long)]
    saturate: Option<PathBuf>,
    /// Extra conditions, saturated after the peripheral stage.
    #[arg(long)]
    conditions: Option<PathBuf>,
}

pub fn torus_scan(a: &TorusScanArgs, ctx: &Context) -> Outcome {
    let mut rep = Report::new("torus-scan", ctx.budget_name);
    let f = read_polys(&mut rep, &a.polys)?;
    let n = f.vars.len();
    let subgroups = if a.subspace == "identity" {
        vec![ExponentSubgroup::identity(n)]
    } else {
        let p = PathBuf::from(&a.subspace);
        let text = read(&mut rep, &p)?;
        parse_subgroups(&text, n).map_err(input_err(&p))?
    };
    let mut side = |p: &Option<PathBuf>| -> Result<Vec<MultiPoly>, Failure> {
        let Some(p) = p else { return Ok(vec![]) };
        let g = read_polys(&mut rep, p)?;
        if g.vars != f.vars {
            return Err(Failure::Input(format!("{}: variables differ from the scanned polynomials", p.display())));
        }
        Ok(g.polys)
    };
    let peripheral = side(&a.saturate)?;
    let extra = side(&a.conditions)?;
    let lambda = a.lambda.as_deref().map(parse_ints).transpose()?.map(|v| v.into_iter().map(|x| x as i32).collect::<Vec<i32>>());

    let r: ScanReport = if a.tier_mode {
        if f.polys.len() != 1 {
            return Err(Failure::Input("tier mode needs a single polynomial".into()));
        }
        let l1 = match lambda {
            Some(l) => l,
            None => degrevlex_sorted(&f.polys[0].support()).into_iter().next().unwrap_or_default(),
        };
        tier_scan(&f.polys, &l1, &ctx.budget)?
    } else if !peripheral.is_empty() || !extra.is_empty() {
        saturated_scan(&f.polys, &subgroups, &peripheral, &extra, &ctx.budget)?
    } else {
        let mut merged: Option<ScanReport> = None;
        for m in &subgroups {
            let r = scan(&f.polys, m, &ScanOptions::default(), &ctx.budget)?;
            merged = Some(match merged {
                None => r,
                Some(mut acc) => {
                    acc.pruned_singleton += r.pruned_singleton;
                    acc.trivial += r.trivial;
                    acc.undetermined += r.undetermined;
                    acc.survivors.extend(r.survivors);
                    acc.all.extend(r.all);
                    acc.candidates_by_rank.extend(r.candidates_by_rank);
                    acc
                }
            });
        }
        merged.expect("at least one subgroup")
    };

    let mut lines = Vec::new();
    if let Some(t) = &r.tiers {
        rep.stage("tier1", t.tier1_up_to_sign, None);
        rep.stage("tier2", t.tier2, None);
        rep.stage("tier3", t.tier3, None);
        lines.push(format!("tiers: {} (signed {}) -> {} -> {}", t.tier1_up_to_sign, t.tier1_signed, t.tier2, t.tier3));
    } else if r.stages.is_empty() {
        rep.stage("candidates", r.all.len(), None);
        rep.stage("survivors", r.survivors.len(), None);
    }
    for (name, count) in &r.stages {
        rep.stage(name, *count, None);
        lines.push(format!("{name}: {count}"));
    }
    let coset_lines = survivor_lines(&r.survivors, &ctx.budget);
    for l in &coset_lines {
        lines.push(format!("line {l}"));
    }
    for s in r.survivors.iter().filter(|s| s.subgroup.rank() != 1) {
        lines.push(format!("survivor of rank {}: {:?}", s.subgroup.rank(), s.subgroup.basis()));
    }
    let undetermined: Vec<&[Vec<i64>]> = r.all.iter().filter(|c| c.status == CandidateStatus::Undetermined).map(|c| c.subgroup.basis()).collect();
    for u in &undetermined {
        lines.push(format!("undetermined: {u:?}"));
    }
    rep.results = json!({
        "candidates-by-rank": r.candidates_by_rank,
        "pruned-singleton": r.pruned_singleton,
        "trivial": r.trivial,
        "undetermined": undetermined,
        "survivors": r.survivors,
        "lines": coset_lines.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "tiers": r.tiers,
        "stages": r.stages,
    });
    if undetermined.is_empty() {
        rep.verdict("scan", Status::Pass, Grade::Exact, format!("{} survivors", r.survivors.len()));
    } else {
        rep.verdict("scan", Status::Undetermined, Grade::Undetermined, format!("{} survivors, {} candidates exhausted the budget", r.survivors.len(), undetermined.len()));
    }
    Ok((rep, lines))
}

// ---------------------------------------------------------------------------
// ideal

#[derive(Clone, Copy, ValueEnum)]
pub enum IdealOp {
    Gb,
    Member,
    Eliminate,
    Saturate,
    Trivial,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Order {
    Grevlex,
    Lex,
}

#[derive(Args)]
pub struct IdealArgs {
    /// Polynomial file with the generators.
    #[arg(long)]
    polys: PathBuf,
    #[arg(long, value_enum)]
    op: IdealOp,
    /// Term order for `gb` and `member`.
    #[arg(long, value_enum, default_value_t = Order::Grevlex)]
    order: Order,
    /// Polynomial to test with `member`, or to saturate by with `saturate`.
    #[arg(long)]
    poly: Option<String>,
    /// Comma-separated variables kept by `eliminate`.
    #[arg(long)]
    keep: Option<String>,
    /// With `trivial`, decide emptiness on the torus instead of affine space.
    #[arg(long)]
    torus: bool,
}

pub fn ideal(a: &IdealArgs, ctx: &Context) -> Outcome {
    let mut rep = Report::new("ideal", ctx.budget_name);
    let f = read_polys(&mut rep, &a.polys)?;
    let names = f.var_names();
    let laurent = f.polys.iter().any(|p| p.is_laurent());
    let show = |ps: &[MultiPoly]| -> Vec<String> { ps.iter().map(|p| p.display(&names)).collect() };
    let extra_poly = |what: &str| -> Result<MultiPoly, Failure> {
        let s = a.poly.as_deref().ok_or_else(|| Failure::Input(format!("--op {what} needs --poly")))?;
        MultiPoly::parse(s, &names, laurent).map_err(|e| Failure::Input(format!("--poly: {e}")))
    };
    let order = match a.order {
        Order::Grevlex => TermOrder::Grevlex,
        Order::Lex => TermOrder::Lex,
    };
    let mut lines = Vec::new();
    match a.op {
        IdealOp::Gb => {
            let gb = groebner_basis(&f.polys, order, &ctx.budget)?;
            let g = show(&gb.generators());
            rep.stage("basis", g.len(), None);
            lines.extend(g.iter().cloned());
            rep.results = json!({ "basis": g });
            rep.verdict("gb", Status::Pass, Grade::Exact, format!("{} generators", g.len()));
        }
        IdealOp::Member => {
            let p = extra_poly("member")?;
            let gb = groebner_basis(&f.polys, order, &ctx.budget)?;
            let nf = gb.normal_form(&p)?;
            let member = nf.is_zero();
            rep.results = json!({ "normal-form": nf.display(&names), "member": member });
            lines.push(format!("normal form: {}", nf.display(&names)));
            let status = if member { Status::Pass } else { Status::Fail };
            rep.verdict("member", status, Grade::Exact, if member { "in the ideal" } else { "not in the ideal" });
        }
        IdealOp::Eliminate => {
            let keep_s = a.keep.as_deref().ok_or_else(|| Failure::Input("--op eliminate needs --keep".into()))?;
            let keep: Vec<usize> = keep_s
                .split(',')
                .map(|v| names.iter().position(|n| *n == v.trim()).ok_or_else(|| Failure::Input(format!("unknown variable {v}"))))
                .collect::<Result<_, _>>()?;
            let g = show(&eliminate(&f.polys, &keep, &ctx.budget)?);
            lines.extend(g.iter().cloned());
            rep.results = json!({ "kept": keep_s, "generators": g });
            rep.verdict("eliminate", Status::Pass, Grade::Exact, format!("{} generators", g.len()));
        }
        IdealOp::Saturate => {
            let p = extra_poly("saturate")?;
            let g = show(&saturate(&f.polys, &p, &ctx.budget)?);
            lines.extend(g.iter().cloned());
            rep.results = json!({ "by": p.display(&names), "generators": g });
            rep.verdict("saturate", Status::Pass, Grade::Exact, format!("{} generators", g.len()));
        }
        IdealOp::Trivial => {
            let t = if a.torus { torus_trivial(&f.polys, &ctx.budget)? } else { is_trivial(&f.polys, &ctx.budget)? };
            let where_ = if a.torus { "torus" } else { "affine space" };
            rep.results = json!({ "trivial": t, "domain": where_ });
            let status = if t { Status::Pass } else { Status::Fail };
            rep.verdict("trivial", status, Grade::Exact, if t { format!("no zeros on the {where_}") } else { format!("has zeros on the {where_}") });
        }
    }
    Ok((rep, lines))
}

// ---------------------------------------------------------------------------
// height

#[derive(Args)]
#[group(required = true, multiple = false)]
pub struct HeightArgs {
    /// Affine point, comma-separated rationals such as `2/3,5`.
    #[arg(long)]
    affine: Option<String>,
    /// Projective point, comma- or colon-separated rationals.
    #[arg(long)]
    projective: Option<String>,
    /// Minimal polynomial in `x` of an algebraic number.
    #[arg(long)]
    minpoly: Option<String>,
}

fn parse_point(s: &str) -> Result<Vec<Rational>, Failure> {
    s.split([',', ':']).map(|w| parse_rational(w.trim()).ok_or_else(|| Failure::Input(format!("not a rational: {w}")))).collect()
}

fn height_err(e: HeightError) -> Failure {
    Failure::Input(e.to_string())
}

pub fn height(a: &HeightArgs, ctx: &Context) -> Outcome {
    let mut rep = Report::new("height", ctx.budget_name);
    let (input, h): (String, HeightValue) = if let Some(s) = &a.affine {
        (s.clone(), height_point(&parse_point(s)?, HeightMode::Affine).map_err(height_err)?)
    } else if let Some(s) = &a.projective {
        (s.clone(), height_point(&parse_point(s)?, HeightMode::Projective).map_err(height_err)?)
    } else {
        let s = a.minpoly.as_deref().unwrap_or_default();
        let p = MultiPoly::parse(s, &["x"], false).map_err(|e| Failure::Input(format!("--minpoly: {e}")))?;
        let deg = p.terms().map(|(m, _)| m.0[0] as usize).max().unwrap_or(0);
        let mut c = vec![Rational::from_integer(0.into()); deg + 1];
        for (m, x) in p.terms() {
            c[m.0[0] as usize] = x.clone();
        }
        (s.to_string(), height_algebraic(&UniPoly::new(c)).map_err(height_err)?)
    };
    rep.input("argument", input.as_bytes());
    let grade = if h.is_exact() { Grade::Exact } else { Grade::Numeric };
    rep.results = serde_json::to_value(&h).expect("heights serialize");
    rep.verdict("height", Status::Pass, grade, h.to_string());
    Ok((rep, vec![]))
}

// ---------------------------------------------------------------------------
// cross-ratio

#[derive(Clone, Copy, ValueEnum)]
pub enum CrossCheck {
    Torsion,
    Cre,
    ZeroOrder,
}

#[derive(Args)]
pub struct CrossRatioArgs {
    /// Stable-form configuration file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    check: CrossCheck,
    /// Torsion order `N` for `--check torsion`.
    #[arg(long)]
    torsion_order: Option<u64>,
    /// Exponents `a1,a2,a3` for `--check cre`; poles are paired in order.
    #[arg(long)]
    exponents: Option<String>,
}

fn show_q(x: &Rational) -> String {
    x.to_string()
}

fn show_fe(x: &FieldElement) -> String {
    MultiPoly::from_terms(1, x.coords().into_iter().enumerate().map(|(i, c)| (vec![i as i32], c))).display(&["zeta"])
}

pub fn cross_ratio(a: &CrossRatioArgs, ctx: &Context) -> Outcome {
    let mut rep = Report::new("cross-ratio", ctx.budget_name);
    let text = read(&mut rep, &a.config)?;
    let cfg = parse_config(&text).map_err(input_err(&a.config))?;
    let exps = match (a.check, &a.exponents) {
        (CrossCheck::Cre, Some(s)) => {
            let v = parse_ints(s)?;
            Some(<[i64; 3]>::try_from(v).map_err(|_| Failure::Input("--exponents takes three integers".into()))?)
        }
        (CrossCheck::Cre, None) => return Err(Failure::Input("--check cre needs --exponents".into())),
        _ => None,
    };
    let order = match (a.check, a.torsion_order) {
        (CrossCheck::Torsion, None) => return Err(Failure::Input("--check torsion needs --torsion-order".into())),
        (_, n) => n.unwrap_or(1),
    };
    let lines = match cfg {
        ConfigFile::Rational { cfg, residues } => config_check(&mut rep, a.check, &cfg, residues.as_deref(), exps, order, show_q)?,
        ConfigFile::Cyclo { cfg, residues, field } => {
            rep.results = json!({ "field": format!("Q(zeta_{})", field.order()) });
            config_check(&mut rep, a.check, &cfg, residues.as_deref(), exps, order, show_fe)?
        }
    };
    Ok((rep, lines))
}

fn config_check<S: Scalar + QCoords + RootOfUnityTest>(
    rep: &mut Report,
    check: CrossCheck,
    cfg: &StableFormConfig<S>,
    given: Option<&[S]>,
    exps: Option<[i64; 3]>,
    order: u64,
    show: fn(&S) -> String,
) -> Result<Vec<String>, Failure> {
    let mut results = match rep.results.take() {
        serde_json::Value::Object(m) => m,
        _ => serde_json::Map::new(),
    };
    let (n, orders) = cfg.signature();
    results.insert("signature".into(), json!({ "poles": n, "zero-orders": orders }));
    let mut lines = Vec::new();
    match check {
        CrossCheck::ZeroOrder => match cfg.validate() {
            Err(e) => rep.verdict("zero-order", Status::Fail, Grade::Exact, e.to_string()),
            Ok(()) => {
                let r = residues(cfg).map_err(|e| Failure::Input(e.to_string()))?;
                let sum = r.iter().fold(r[0].zero_like(), |acc, x| acc.add(x));
                let shown: Vec<String> = r.iter().map(show).collect();
                lines.push(format!("residues: {}", shown.join(", ")));
                results.insert("residues".into(), json!(shown));
                let matches_given = given.map(|g| {
                    let g0 = g[0].clone();
                    g.iter().zip(&r).all(|(x, y)| x.div(&g0).is_some_and(|q| q == *y))
                });
                results.insert("matches-given-residues".into(), json!(matches_given));
                if !sum.is_zero_elem() {
                    rep.verdict("zero-order", Status::Fail, Grade::Exact, "residues do not sum to zero");
                } else if matches_given == Some(false) {
                    rep.verdict("zero-order", Status::Fail, Grade::Exact, "given residues are not proportional to the computed ones");
                } else {
                    rep.verdict("zero-order", Status::Pass, Grade::Exact, "zero orders and residues are consistent");
                }
            }
        },
        CrossCheck::Torsion => {
            let v = torsion_config_check(cfg, order).map_err(|e| Failure::Input(e.to_string()))?;
            results.insert("torsion".into(), serde_json::to_value(&v).expect("verdicts serialize"));
            match v {
                TorsionVerdict::Satisfies { grade } => rep.verdict("torsion", Status::Pass, grade, format!("conditions hold for N = {order}")),
                TorsionVerdict::Violates { detail, .. } => rep.verdict("torsion", Status::Fail, Grade::Exact, detail),
            }
        }
        CrossCheck::Cre => {
            let a = exps.expect("checked by the caller");
            let pts: Vec<S> = cfg.poles.iter().map(|p| p.affine()).collect::<Option<_>>().ok_or_else(|| Failure::Input("cre needs finite poles".into()))?;
            if pts.len() != 6 {
                return Err(Failure::Input(format!("cre needs six poles, found {}", pts.len())));
            }
            let pairs = [(pts[0].clone(), pts[1].clone()), (pts[2].clone(), pts[3].clone()), (pts[4].clone(), pts[5].clone())];
            let c = check_cre(&pairs, &a).map_err(|e| Failure::Input(e.to_string()))?;
            let crs: Vec<String> = c.cross_ratios.iter().map(show).collect();
            lines.push(format!("cross-ratios: {}", crs.join(", ")));
            lines.push(format!("product: {}", show(&c.value)));
            results.insert("cross-ratios".into(), json!(crs));
            results.insert("product".into(), json!(show(&c.value)));
            results.insert("order".into(), json!(c.verdict.order));
            let status = if c.verdict.root_of_unity { Status::Pass } else { Status::Fail };
            let detail = match c.verdict.order {
                Some(k) => format!("product is a root of unity of order {k}"),
                None if c.verdict.root_of_unity => "product lies on the unit circle".to_string(),
                None => "product is not a root of unity".to_string(),
            };
            rep.verdict("cre", status, c.verdict.grade, detail);
        }
    }
    rep.results = serde_json::Value::Object(results);
    Ok(lines)
}

// ---------------------------------------------------------------------------
// network

#[derive(Args)]
#[command(group(clap::ArgGroup::new("mode").required(true)))]
pub struct NetworkArgs {
    /// Graph file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, group = "mode")]
    check_kirchhoff: bool,
    #[arg(long, group = "mode")]
    solve_moduli: bool,
    #[arg(long, group = "mode")]
    trace_matrix: bool,
    /// Solve for moduli and audit each block against torsion order `N`.
    #[arg(long, group = "mode", value_name = "N")]
    audit: Option<u64>,
    /// All currents with `c_v1 = N`, `c_v2 = -N`, `|w_e| <= N`.
    #[arg(long, group = "mode", num_args = 3, value_names = ["N", "V1", "V2"])]
    enumerate: Option<Vec<String>>,
}

/// Cap on enumerated current assignments.
const ENUMERATION_LIMIT: usize = 100_000;

fn flat_err(e: FlatnetError) -> Failure {
    Failure::Input(e.to_string())
}

pub fn network(a: &NetworkArgs, ctx: &Context) -> Outcome {
    let mut rep = Report::new("network", ctx.budget_name);
    let text = read(&mut rep, &a.graph)?;
    let GraphFile { graph: g, assignment, moduli } = parse_graph(&text).map_err(input_err(&a.graph))?;
    g.validate().map_err(flat_err)?;
    let need_assignment = || assignment.clone().ok_or_else(|| Failure::Input("graph file has no currents or sources".into()));
    let mut lines = Vec::new();
    if a.check_kirchhoff {
        let w = need_assignment()?;
        let ok = kirchhoff_check(&g, &w).map_err(flat_err)?;
        rep.results = json!({ "kirchhoff": ok });
        let status = if ok { Status::Pass } else { Status::Fail };
        rep.verdict("kirchhoff", status, Grade::Exact, if ok { "currents balance at every vertex" } else { "some vertex violates Kirchhoff's law" });
    } else if a.solve_moduli || a.audit.is_some() {
        let w = need_assignment()?;
        let out = solve_moduli(&g, std::slice::from_ref(&w)).map_err(flat_err)?;
        let mut audits = Vec::new();
        match &out {
            ModuliOutcome::Unique { blocks } => {
                for b in blocks {
                    let ids: Vec<&str> = b.edges.iter().map(|&k| g.edges[k].id.as_str()).collect();
                    let m: Vec<String> = b.moduli.iter().map(|x| x.to_string()).collect();
                    lines.push(format!("block {}: moduli {}", ids.join(" "), m.join(" ")));
                    if let Some(n) = a.audit {
                        audits.push(moduli_height_audit(&b.moduli, n));
                    }
                }
                if a.audit.is_some() {
                    let bad = audits.iter().filter(|x| !x.passes).count();
                    let status = if bad == 0 { Status::Pass } else { Status::Fail };
                    rep.verdict("moduli-audit", status, Grade::Exact, format!("{} of {} blocks within the bound", audits.len() - bad, audits.len()));
                } else {
                    rep.verdict("moduli", Status::Pass, Grade::Exact, "unique up to scaling in each block");
                }
            }
            ModuliOutcome::Underdetermined { degrees_of_freedom } => {
                let detail = format!("{degrees_of_freedom} degrees of freedom beyond block scaling");
                if a.audit.is_some() {
                    rep.verdict("moduli-audit", Status::Undetermined, Grade::Exact, format!("nothing to audit: {detail}"));
                } else {
                    rep.verdict("moduli", Status::Pass, Grade::Exact, format!("underdetermined: {detail}"));
                }
            }
            ModuliOutcome::Infeasible { witness } => {
                let ids: Vec<String> = witness.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, &c)| format!("{}{}", if c > 0 { "+" } else { "-" }, g.edges[k].id)).collect();
                lines.push(format!("witness circuit: {}", ids.join(" ")));
                rep.verdict("moduli", Status::Fail, Grade::Exact, "infeasible: a circuit relation forces a zero or negative modulus");
            }
        }
        rep.results = json!({ "moduli": out, "audit": audits });
    } else if a.trace_matrix {
        let m = moduli.ok_or_else(|| Failure::Input("graph file has no moduli".into()))?;
        let bd = block_decomposition(&g).map_err(flat_err)?;
        let mut blocks = Vec::new();
        let mut all_psd = true;
        for b in &bd.blocks {
            let mb: Vec<Rational> = b.iter().map(|&k| m[k].clone()).collect();
            let q = trace_matrix(&g, b, &mb).map_err(flat_err)?;
            let symmetric = q == q.transpose();
            let psd = is_psd(&q);
            all_psd &= symmetric && psd;
            let ids: Vec<&str> = b.iter().map(|&k| g.edges[k].id.as_str()).collect();
            lines.push(format!("block {}:\n{q}", ids.join(" ")));
            blocks.push(json!({ "edges": ids, "q": q.to_string(), "symmetric": symmetric, "psd": psd }));
        }
        rep.results = json!({ "blocks": blocks });
        let status = if all_psd { Status::Pass } else { Status::Fail };
        rep.verdict("trace-matrix", status, Grade::Exact, if all_psd { "every block is symmetric positive semidefinite" } else { "some block is not symmetric PSD" });
    } else if let Some(e) = &a.enumerate {
        let n: i64 = e[0].parse().map_err(|_| Failure::Input(format!("not an integer: {}", e[0])))?;
        let v1 = g.vertex_index(&e[1]).map_err(flat_err)?;
        let v2 = g.vertex_index(&e[2]).map_err(flat_err)?;
        match enumerate_currents(&g, n, v1, v2, ENUMERATION_LIMIT) {
            Ok(ws) => {
                for w in &ws {
                    lines.push(format!("currents {:?}", w.currents));
                }
                rep.stage("assignments", ws.len(), None);
                rep.results = json!({ "assignments": ws });
                rep.verdict("enumerate", Status::Pass, Grade::Exact, format!("{} assignments", ws.len()));
            }
            Err(FlatnetError::BudgetExceeded(k)) => {
                rep.verdict("enumerate", Status::Undetermined, Grade::Undetermined, format!("more than {k} assignments"));
            }
            Err(e) => return Err(flat_err(e)),
        }
    }
    Ok((rep, lines))
}

// ---------------------------------------------------------------------------
// reproduce

#[derive(Args)]
pub struct ReproduceArgs {
    /// Target name, or `all`.
    target: String,
    /// Directory with golden files overriding the built-in copies.
    #[arg(long)]
    golden: Option<PathBuf>,
}

pub fn reproduce(a: &ReproduceArgs, ctx: &Context) -> Outcome {
    let targets: Vec<Target> = if a.target == "all" {
        ALL_TARGETS.to_vec()
    } else {
        vec![a.target.parse().map_err(|e: String| {
            let names: Vec<&str> = ALL_TARGETS.iter().map(|t| t.name()).collect();
            Failure::Input(format!("{e}; expected one of {} or all", names.join(", ")))
        })?]
    };
    let golden = Golden { dir: a.golden.clone() };
    let mut reports = Vec::new();
    let mut lines = Vec::new();
    for t in targets {
        let r = match torsionkit::reproduce::reproduce(t, &golden, &ctx.budget, ctx.budget_name) {
            Ok(r) => r,
            Err(ReproduceError::Mismatch { diff, report, .. }) => {
                for d in &diff {
                    lines.push(format!("{}: {} differs\n  expected: {}\n  actual:   {}", t.name(), d.key, d.expected, d.actual));
                }
                *report
            }
            Err(ReproduceError::Golden(name, msg)) => return Err(Failure::Input(format!("golden file {name}: {msg}"))),
            Err(ReproduceError::Compute(msg)) => return Err(Failure::Compute(msg)),
        };
        reports.push(r);
    }
    if reports.len() == 1 {
        return Ok((reports.pop().expect("one report"), lines));
    }
    let mut rep = Report::new("reproduce all", ctx.budget_name);
    for r in &reports {
        rep.inputs.extend(r.inputs.iter().cloned());
        rep.stages.extend(r.stages.iter().map(|s| torsionkit::report::Stage { name: format!("{}/{}", r.command.trim_start_matches("reproduce "), s.name), ..s.clone() }));
        rep.verdicts.extend(r.verdicts.iter().cloned());
    }
    rep.results = json!(reports.iter().map(|r| json!({ "command": r.command, "anchor": r.anchor, "results": r.results })).collect::<Vec<_>>());
    Ok((rep, lines))
}
