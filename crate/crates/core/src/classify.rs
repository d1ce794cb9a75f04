//! The index-5 classification: seeds, obstruction filters, family runs,
//! dimension eliminations and final assembly.

use crate::bigraph::{
    annular_multiplicities, canonical_key_up_to_swap, BigraphPair, BigraphWithDuals,
};
use crate::error::{Error, Result};
use crate::fixtures::{self, key_set, shape_of, TreeShape};
use crate::obstructions::{dual_count_check, even_quadruple_prefix_check, triple_point_check};
use crate::odometer::{run_odometer, step_weed, ClassificationStatement, OdometerConfig, OdometerTree, DEFAULT_SLACK};
use crate::spectral::{dimension_screen, graph_norm, q_from_delta, DimensionMode, ScreenCondition, ScreenResult};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::path::Path;

/// Index limits above this are treated as exact index `limit`, below by slack.
const EXACT_TOL: f64 = 1e-9;

/// A pair with the stage that removed it and why.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Elimination {
    pub pair: BigraphPair,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct StageRecord {
    pub name: String,
    pub kept: Vec<BigraphPair>,
    pub eliminated: Vec<Elimination>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FamilyRecord {
    pub name: String,
    pub seeds: Vec<BigraphPair>,
    pub stops: Vec<BigraphPair>,
    pub max_steps: Option<usize>,
    pub statement: ClassificationStatement,
    pub tree: OdometerTree,
}

/// Evidence recorded by a dimension or index test.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CheckRecord {
    pub target: BigraphPair,
    pub description: String,
    pub passed: bool,
    pub screen: Option<ScreenResult>,
    pub value: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PipelineReport {
    pub index_limit: f64,
    /// Named initial seeds.
    pub seeds: Vec<(String, BigraphPair)>,
    pub stages: Vec<StageRecord>,
    pub families: Vec<FamilyRecord>,
    pub checks: Vec<CheckRecord>,
    pub statement: ClassificationStatement,
}

impl PipelineReport {
    pub fn family(&self, name: &str) -> Option<&FamilyRecord> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// A linear combination of dimensions that must meet a condition.
#[derive(Clone, Debug, PartialEq)]
pub struct ScreenSpec {
    pub description: String,
    pub terms: Vec<((usize, usize), f64)>,
    pub condition: ScreenCondition,
}

/// How a weed with exotic dimensions is disposed of.
#[derive(Clone, Debug, PartialEq)]
pub enum WeedPlan {
    /// No translate of the weed's extensions can occur.
    ForbiddenPrefix,
    /// The untranslated weed and its extensions fail `screen`; translates
    /// by 2 or more are handled by `translated`.
    Screened { screen: ScreenSpec, translated: TranslatedPlan },
}

#[derive(Clone, Debug, PartialEq)]
pub enum TranslatedPlan {
    /// The first graph translated by `shift` already has index at least
    /// the limit, so no translate by 2 or more fits.
    IndexAbove { shift: usize },
    /// Rerun the odometer on the translate by 2; its weeds are handled by
    /// `follow_ups`, matched by isomorphism.
    Rerun { name: String, stops: Vec<BigraphPair>, follow_ups: Vec<(BigraphPair, WeedPlan)> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyPlan {
    pub name: String,
    pub stops: Vec<BigraphPair>,
    pub max_steps: Option<usize>,
}

/// Knobs of the pipeline. The defaults reproduce the known index-5 run.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub index_limit: f64,
    pub slack: f64,
    /// Names for specific pairs (seeds and family members), matched by isomorphism.
    pub labels: Vec<(String, BigraphPair)>,
    /// Stop weeds for the unbounded family runs, keyed by family name.
    pub stops: BTreeMap<String, Vec<BigraphPair>>,
    /// Disposal plans for weeds of the quadruple-point runs.
    pub weed_plans: Vec<(BigraphPair, WeedPlan)>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let mut labels: Vec<(String, BigraphPair)> = fixtures::named_pairs("seeds")
            .into_iter()
            .map(|(n, p)| (n.expect("named"), p))
            .collect();
        for (suffix, p) in ["11a", "11b", "11c"].into_iter().zip(fixtures::pairs("family_11")) {
            labels.push((suffix.to_string(), p));
        }
        let mut stops = BTreeMap::new();
        stops.insert("10".to_string(), fixtures::pairs("weeds_10"));
        stops.insert("o2a".to_string(), fixtures::pairs("weeds_o2a"));
        stops.insert("o2c".to_string(), fixtures::pairs("weeds_o2c"));
        stops.insert("e2".to_string(), fixtures::pairs("weeds_e2"));
        PipelineConfig { index_limit: 5.0, slack: DEFAULT_SLACK, labels, stops, weed_plans: default_weed_plans() }
    }
}

fn cos_pi(n: f64) -> f64 {
    2.0 * (PI / n).cos()
}

fn default_weed_plans() -> Vec<(BigraphPair, WeedPlan)> {
    let o2a = fixtures::pairs("weeds_o2a");
    let e2 = fixtures::pairs("weeds_e2");
    let g4621 = fixtures::pairs("weed_4621").remove(0);
    vec![
        (
            o2a[1].clone(),
            WeedPlan::Screened {
                screen: ScreenSpec {
                    description: "univalent depth-5 vertex has dimension [4]/[3], strictly between 2cos(pi/5) and 2cos(pi/6)".into(),
                    terms: vec![((5, 1), 1.0)],
                    condition: ScreenCondition::Inside(cos_pi(5.0), cos_pi(6.0)),
                },
                translated: TranslatedPlan::Rerun { name: "5321".into(), stops: Vec::new(), follow_ups: Vec::new() },
            },
        ),
        (e2[0].clone(), WeedPlan::ForbiddenPrefix),
        (
            e2[1].clone(),
            WeedPlan::Screened {
                screen: ScreenSpec {
                    description: "univalent depth-3 vertex has dimension [3]/[2], strictly between 2cos(pi/6) and 2cos(pi/7)".into(),
                    terms: vec![((3, 2), 1.0)],
                    condition: ScreenCondition::Inside(cos_pi(6.0), cos_pi(7.0)),
                },
                translated: TranslatedPlan::Rerun {
                    name: "4321".into(),
                    stops: vec![g4621.clone()],
                    follow_ups: vec![(
                        g4621,
                        WeedPlan::Screened {
                            screen: ScreenSpec {
                                description: "depth-10 vertex has dimension below 1".into(),
                                terms: vec![((10, 0), 1.0)],
                                condition: ScreenCondition::Below(1.0),
                            },
                            translated: TranslatedPlan::IndexAbove { shift: 2 },
                        },
                    )],
                },
            },
        ),
        (
            e2[2].clone(),
            WeedPlan::Screened {
                screen: ScreenSpec {
                    description: "the two depth-5 vertices have dimensions summing to less than 2".into(),
                    terms: vec![((5, 0), 1.0), ((5, 1), 1.0)],
                    condition: ScreenCondition::Below(2.0),
                },
                translated: TranslatedPlan::IndexAbove { shift: 1 },
            },
        ),
    ]
}

impl PipelineConfig {
    /// The odometer settings used by every family run.
    pub fn odometer(&self) -> OdometerConfig {
        OdometerConfig::new(self.index_limit).with_slack(self.slack).with_strict_limit(true)
    }

    fn label(&self, p: &BigraphPair) -> Option<String> {
        let key = canonical_key_up_to_swap(p);
        self.labels.iter().find(|(_, q)| canonical_key_up_to_swap(q) == key).map(|(n, _)| n.clone())
    }
}

fn exact_index_below(g: &BigraphWithDuals, limit: f64) -> bool {
    let n = graph_norm(g.graph());
    n * n < limit - EXACT_TOL
}

/// Name from the branch shape: parity of the branch depth, number of new
/// vertices minus one, and for odd branches the dual pattern past it.
fn shape_name(p: &BigraphPair) -> String {
    let n = p.supertransitivity();
    let branch = p.first().vertex_count(n + 1) - 1;
    if n.is_multiple_of(2) {
        return format!("e{branch}");
    }
    let fixed = |g: &BigraphWithDuals| {
        let c = g.dual_counts_at_branch().expect("odd branch");
        c.non_self_dual_pairs == 0
    };
    let suffix = match (fixed(p.first()), fixed(p.second())) {
        (true, true) => 'a',
        (false, false) => 'c',
        _ => 'b',
    };
    format!("o{branch}{suffix}")
}

/// Pairs branching at depth 2 or 3 that pass associativity with index
/// below the limit. Branching at depth 1 is excluded for index in (4, 5),
/// and deeper branches are translates of these.
pub fn initial_seeds(index_limit: f64) -> Result<Vec<BigraphPair>> {
    if !(index_limit > 4.0 && index_limit <= 5.0) {
        return Err(Error::InvalidArgument(format!("index limit {index_limit} outside (4, 5]")));
    }
    let cfg = OdometerConfig::new(index_limit).with_strict_limit(true);
    let mut out = BTreeMap::new();
    for n in [2, 3] {
        let chain = BigraphPair::new(BigraphWithDuals::chain(n), BigraphWithDuals::chain(n))?;
        for w in step_weed(&chain, &cfg)?.weeds {
            let branched = w.first().supertransitivity() == n && w.second().supertransitivity() == n;
            if branched && exact_index_below(w.first(), index_limit) && exact_index_below(w.second(), index_limit) {
                out.insert(canonical_key_up_to_swap(&w), w);
            }
        }
    }
    Ok(out.into_values().collect())
}

/// Families keyed by `(a_{n+1}, a_{n+2})`, `n` the supertransitivity.
pub fn partition_by_annular_multiplicity(weeds: &[BigraphPair]) -> Result<BTreeMap<(i128, i128), Vec<BigraphPair>>> {
    let mut out: BTreeMap<(i128, i128), Vec<BigraphPair>> = BTreeMap::new();
    for w in weeds {
        if w.is_chain() {
            return Err(Error::InvalidArgument(format!("{w} has no branch point")));
        }
        let n = w.supertransitivity();
        let key_of = |g: &BigraphWithDuals| -> Result<(i128, i128)> {
            let a = annular_multiplicities(g.graph(), n + 2)?;
            Ok((a[n + 1], a[n + 2]))
        };
        let key = key_of(w.first())?;
        if key_of(w.second())? != key {
            return Err(Error::InvalidArgument(format!("{w}: graphs have different annular multiplicities")));
        }
        out.entry(key).or_default().push(w.clone());
    }
    Ok(out)
}

/// Runs the odometer from the given seeds.
pub fn run_family(
    name: &str,
    seeds: &[BigraphPair],
    cfg: &OdometerConfig,
    stops: &[BigraphPair],
    max_steps: Option<usize>,
) -> Result<FamilyRecord> {
    let first = seeds.first().ok_or_else(|| Error::InvalidArgument("family without seeds".into()))?;
    let mut s = ClassificationStatement::new(first.clone(), cfg.index_limit);
    s.weeds = seeds.to_vec();
    let (statement, tree) = run_odometer(&s, cfg, max_steps, stops)?;
    Ok(FamilyRecord {
        name: name.to_string(),
        seeds: seeds.to_vec(),
        stops: stops.to_vec(),
        max_steps,
        statement,
        tree,
    })
}

struct Disposal {
    families: Vec<FamilyRecord>,
    checks: Vec<CheckRecord>,
    /// Weeds no plan disposed of.
    retained: Vec<BigraphPair>,
    eliminated: Vec<Elimination>,
}

fn screen_weed(target: &BigraphPair, spec: &ScreenSpec, limit: f64) -> Result<CheckRecord> {
    let g = target.first().graph();
    let q_low = q_from_delta(graph_norm(g));
    let q_high = q_from_delta(limit.sqrt());
    let result = dimension_screen(g, DimensionMode::Truncated, &spec.terms, q_low, q_high, spec.condition)?;
    Ok(CheckRecord {
        target: target.clone(),
        description: format!("{} for q in ({q_low:.5}, {q_high:.5})", spec.description),
        passed: result.holds,
        screen: Some(result),
        value: None,
    })
}

fn dispose(
    weed: &BigraphPair,
    plan: &WeedPlan,
    cfg: &PipelineConfig,
    out: &mut Disposal,
) -> Result<()> {
    let limit = cfg.index_limit;
    match plan {
        WeedPlan::ForbiddenPrefix => {
            let report = even_quadruple_prefix_check(weed);
            let killed = !report.passed();
            out.checks.push(CheckRecord {
                target: weed.clone(),
                description: "starts like the forbidden even quadruple point pair".into(),
                passed: killed,
                screen: None,
                value: None,
            });
            if killed {
                out.eliminated.push(Elimination { pair: weed.clone(), reason: "even quadruple point prefix".into() });
            } else {
                out.retained.push(weed.clone());
            }
        }
        WeedPlan::Screened { screen, translated } => {
            let check = screen_weed(weed, screen, limit)?;
            let untranslated_ok = check.passed;
            out.checks.push(check);
            let translated_ok = match translated {
                TranslatedPlan::IndexAbove { shift } => {
                    let g = weed.first().graph().translated(*shift);
                    let norm = graph_norm(&g);
                    // A proper translate is a proper supergraph, so equality at shift 1 suffices.
                    let ok = if *shift >= 2 { norm * norm > limit } else { norm * norm >= limit - EXACT_TOL };
                    out.checks.push(CheckRecord {
                        target: weed.clone(),
                        description: format!("index of the translate by {shift}"),
                        passed: ok,
                        screen: None,
                        value: Some(norm * norm),
                    });
                    ok
                }
                TranslatedPlan::Rerun { name, stops, follow_ups } => {
                    let seed = weed.translated(2)?;
                    let fam = run_family(name, &[seed], &cfg.odometer(), stops, None)?;
                    let weeds = fam.statement.weeds.clone();
                    out.families.push(fam);
                    let mut all_ok = true;
                    for w in &weeds {
                        let key = canonical_key_up_to_swap(w);
                        match follow_ups.iter().find(|(t, _)| canonical_key_up_to_swap(t) == key) {
                            Some((t, p)) => dispose(t, p, cfg, out)?,
                            None => {
                                all_ok = false;
                                out.retained.push(w.clone());
                            }
                        }
                    }
                    all_ok
                }
            };
            if untranslated_ok && translated_ok {
                out.eliminated.push(Elimination { pair: weed.clone(), reason: screen.description.clone() });
            } else {
                out.retained.push(weed.clone());
            }
        }
    }
    Ok(())
}

/// Whether every translate of `g` has norm at most 2 (index at most 4).
fn all_translates_at_most_two(g: &BigraphWithDuals) -> bool {
    graph_norm(&g.graph().translated(60)) <= 2.0 + EXACT_TOL
}

fn filter_stage(name: &str, input: &[BigraphPair], test: impl Fn(&BigraphPair) -> Option<String>) -> StageRecord {
    let mut kept = Vec::new();
    let mut eliminated = Vec::new();
    for p in input {
        match test(p) {
            None => kept.push(p.clone()),
            Some(reason) => eliminated.push(Elimination { pair: p.clone(), reason }),
        }
    }
    StageRecord { name: name.to_string(), kept, eliminated }
}

/// The full run. With the default configuration this reproduces the
/// known classification statement for index below 5.
pub fn run_index5_classification(cfg: &PipelineConfig) -> Result<PipelineReport> {
    let ocfg = cfg.odometer();
    let limit = cfg.index_limit;
    let mut stages = Vec::new();
    let mut families = Vec::new();

    let seeds = initial_seeds(limit)?;
    let named: Vec<(String, BigraphPair)> =
        seeds.iter().map(|p| (cfg.label(p).unwrap_or_else(|| shape_name(p)), p.clone())).collect();

    let duals = filter_stage("dual counts", &seeds, |p| match dual_count_check(p) {
        Ok(r) if !r.passed() => Some(format!("dual counts differ: {:?}", r.witness)),
        _ => None,
    });
    let survivors = duals.kept.clone();
    stages.push(duals);

    let name_of = |p: &BigraphPair| cfg.label(p).unwrap_or_else(|| shape_name(p));
    let (triple, quadruple): (Vec<_>, Vec<_>) =
        survivors.into_iter().partition(|p| p.first().vertex_count(p.supertransitivity() + 1) == 2);

    // One step past each triple point, then the triple point obstruction.
    let first_steps: Vec<FamilyRecord> = triple
        .par_iter()
        .map(|p| run_family(&name_of(p), std::slice::from_ref(p), &ocfg, &[], Some(1)))
        .collect::<Result<_>>()?;
    let stepped: Vec<BigraphPair> = first_steps.iter().flat_map(|f| f.statement.weeds.clone()).collect();
    families.extend(first_steps);
    let tp = filter_stage("triple point", &stepped, |p| match triple_point_check(p) {
        Ok(r) if !r.passed() => Some(format!("forbidden quintuple: {:?}", r.witness)),
        _ => None,
    });
    let tp_survivors = tp.kept.clone();
    stages.push(tp);

    let partition = partition_by_annular_multiplicity(&tp_survivors)?;
    let mut plans: Vec<(String, Vec<BigraphPair>, Option<usize>)> = Vec::new();
    for ((a1, a2), members) in &partition {
        let family = format!("{a1}{a2}");
        if (*a1, *a2) == (1, 2) {
            plans.push((family, members.clone(), Some(1)));
        } else if members.len() == 1 {
            plans.push((family, members.clone(), None));
        } else {
            let mut labelled: Vec<(String, BigraphPair)> = members
                .iter()
                .enumerate()
                .map(|(i, m)| (cfg.label(m).unwrap_or_else(|| format!("{family}:{i}")), m.clone()))
                .collect();
            labelled.sort_by(|a, b| a.0.cmp(&b.0));
            for (n, m) in labelled {
                plans.push((n, vec![m], None));
            }
        }
    }
    for p in &quadruple {
        plans.push((name_of(p), vec![p.clone()], None));
    }
    let runs: Vec<FamilyRecord> = plans
        .par_iter()
        .map(|(name, seeds, steps)| {
            let stops = cfg.stops.get(name).cloned().unwrap_or_default();
            run_family(name, seeds, &ocfg, &stops, *steps)
        })
        .collect::<Result<_>>()?;
    families.extend(runs);

    // Weeds of the quadruple point runs with exotic dimensions.
    let mut disposal = Disposal { families: Vec::new(), checks: Vec::new(), retained: Vec::new(), eliminated: Vec::new() };
    let mut weeds: Vec<BigraphPair> = Vec::new();
    for f in &families {
        if f.max_steps == Some(1) && triple.iter().any(|t| f.seeds.contains(t)) {
            continue;
        }
        for w in &f.statement.weeds {
            let key = canonical_key_up_to_swap(w);
            match cfg.weed_plans.iter().find(|(t, _)| canonical_key_up_to_swap(t) == key) {
                Some((t, plan)) => dispose(t, plan, cfg, &mut disposal)?,
                None => weeds.push(w.clone()),
            }
        }
    }
    weeds.extend(disposal.retained.iter().cloned());
    stages.push(StageRecord {
        name: "quadruple point weeds".into(),
        kept: disposal.retained.clone(),
        eliminated: disposal.eliminated.clone(),
    });
    families.extend(disposal.families);

    let mut vines = BTreeMap::new();
    for f in &families {
        for v in &f.statement.vines {
            vines.entry(canonical_key_up_to_swap(v)).or_insert_with(|| v.clone());
        }
    }
    let vines: Vec<BigraphPair> = vines.into_values().collect();
    let small = filter_stage("index at most 4", &vines, |p| {
        (all_translates_at_most_two(p.first()) || all_translates_at_most_two(p.second()))
            .then(|| "every translate has index at most 4".to_string())
    });
    let spurious = |p: &BigraphPair| {
        (!exact_index_below(p.first(), limit) || !exact_index_below(p.second(), limit))
            .then(|| format!("index not below {limit}"))
    };
    let big = filter_stage("index below limit", &small.kept, spurious);
    let weed_stage = filter_stage("weed index below limit", &weeds, spurious);
    let final_vines = big.kept.clone();
    let final_weeds = weed_stage.kept.clone();
    stages.push(small);
    stages.push(big);
    stages.push(weed_stage);

    let root = BigraphPair::new(BigraphWithDuals::chain(1), BigraphWithDuals::chain(1))?;
    let mut statement = ClassificationStatement::new(root, limit);
    statement.vines = sorted_classes(&final_vines);
    statement.weeds = sorted_classes(&final_weeds);
    Ok(PipelineReport { index_limit: limit, seeds: named, stages, families, checks: disposal.checks, statement })
}

fn sorted_classes(pairs: &[BigraphPair]) -> Vec<BigraphPair> {
    let mut m = BTreeMap::new();
    for p in pairs {
        let c = crate::bigraph::canonical_form_up_to_swap(p);
        m.insert(c.to_string(), c);
    }
    m.into_values().collect()
}

/// Expected-results corpus: embedded, or read from a directory of the same files.
#[derive(Clone, Debug)]
pub struct Fixtures {
    files: BTreeMap<String, String>,
}

impl Fixtures {
    pub fn embedded() -> Self {
        Fixtures { files: fixtures::FILES.iter().map(|(n, c)| (n.to_string(), c.to_string())).collect() }
    }

    /// Files present in `dir` override the embedded ones.
    pub fn from_dir(dir: &Path) -> std::io::Result<Self> {
        let mut f = Fixtures::embedded();
        for entry in std::fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) == Some("txt") {
                let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
                f.files.insert(name, std::fs::read_to_string(&path)?);
            }
        }
        Ok(f)
    }

    fn pairs(&self, name: &str) -> Result<Vec<BigraphPair>> {
        let text = self.files.get(name).ok_or_else(|| Error::InvalidArgument(format!("missing fixture {name}")))?;
        Ok(fixtures::parse_pairs(text)?.into_iter().map(|(_, p)| p).collect())
    }

    fn tree(&self, name: &str) -> Result<Vec<TreeShape>> {
        let text = self.files.get(name).ok_or_else(|| Error::InvalidArgument(format!("missing fixture {name}")))?;
        fixtures::parse_tree(text)
    }
}

/// One disagreement between a run and the expected corpus.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Mismatch {
    pub what: String,
    /// Present in the run, absent from the fixture.
    pub unexpected: Vec<String>,
    /// In the fixture but not produced.
    pub missing: Vec<String>,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "{}:", self.what)?;
        for u in &self.unexpected {
            writeln!(f, "  + {u}")?;
        }
        for m in &self.missing {
            writeln!(f, "  - {m}")?;
        }
        Ok(())
    }
}

fn compare_sets(what: &str, got: &BTreeSet<String>, want: &BTreeSet<String>, out: &mut Vec<Mismatch>) {
    if got != want {
        out.push(Mismatch {
            what: what.to_string(),
            unexpected: got.difference(want).cloned().collect(),
            missing: want.difference(got).cloned().collect(),
        });
    }
}

fn flatten(shapes: &[TreeShape], prefix: &str, out: &mut BTreeSet<String>) {
    for s in shapes {
        let path = format!("{prefix}/{}{}", if s.weed { "W:" } else { "" }, s.key);
        out.insert(path.clone());
        flatten(&s.children, &path, out);
    }
}

/// Compares every recorded list and tree with the corpus.
pub fn compare_with_fixtures(report: &PipelineReport, fx: &Fixtures) -> Result<Vec<Mismatch>> {
    let mut out = Vec::new();
    let seeds: Vec<BigraphPair> = report.seeds.iter().map(|(_, p)| p.clone()).collect();
    compare_sets("initial seeds", &key_set(&seeds), &key_set(&fx.pairs("seeds")?), &mut out);

    let lists: &[(&str, &str, &str)] = &[
        ("o1a", "step_o1a", ""),
        ("o1c", "step_o1c", ""),
        ("e1", "step_e1", ""),
        ("12", "", "vines_12"),
        ("11a", "", "vines_11a"),
        ("11b", "", "vines_11b"),
        ("11c", "", "vines_11c"),
        ("10", "weeds_10", "vines_10"),
        ("o2a", "weeds_o2a", "vines_o2a"),
        ("o2c", "weeds_o2c", "vines_o2c"),
        ("e2", "weeds_e2", "vines_e2"),
        ("5321", "", "vines_5321"),
        ("4321", "weed_4621", "vines_4321"),
    ];
    for &(family, weeds, vines) in lists {
        let Some(f) = report.family(family) else {
            out.push(Mismatch { what: format!("family {family}"), unexpected: vec![], missing: vec!["run".into()] });
            continue;
        };
        let want_weeds = if weeds.is_empty() { BTreeSet::new() } else { key_set(&fx.pairs(weeds)?) };
        compare_sets(&format!("family {family} weeds"), &key_set(&f.statement.weeds), &want_weeds, &mut out);
        if !vines.is_empty() {
            compare_sets(&format!("family {family} vines"), &key_set(&f.statement.vines), &key_set(&fx.pairs(vines)?), &mut out);
        }
    }

    let trees: &[(&str, &str)] = &[
        ("11a", "tree_11a"),
        ("11b", "tree_11b"),
        ("11c", "tree_11c"),
        ("10", "tree_10"),
        ("o2a", "tree_o2a"),
        ("o2c", "tree_o2c"),
        ("e2", "tree_e2"),
        ("5321", "tree_5321"),
        ("4321", "tree_4321"),
    ];
    for &(family, name) in trees {
        if let Some(f) = report.family(family) {
            let mut got = BTreeSet::new();
            let mut want = BTreeSet::new();
            flatten(&shape_of(&f.tree), "", &mut got);
            flatten(&fx.tree(name)?, "", &mut want);
            compare_sets(&format!("tree {family}"), &got, &want, &mut out);
        }
    }

    let tp_kept = report.stage("triple point").map(|s| key_set(&s.kept)).unwrap_or_default();
    let mut fam_union = BTreeSet::new();
    for name in ["family_12", "family_11", "family_10"] {
        fam_union.extend(key_set(&fx.pairs(name)?));
    }
    compare_sets("triple point survivors", &tp_kept, &fam_union, &mut out);

    compare_sets("final vines", &key_set(&report.statement.vines), &key_set(&fx.pairs("main_vines")?), &mut out);
    compare_sets("final weeds", &key_set(&report.statement.weeds), &key_set(&fx.pairs("main_weeds")?), &mut out);
    Ok(out)
}
