use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::metrics::{binary_precision_recall, mean_sample_std, pr_auc, precision_recall_at_prevalence};
use super::split::{split, EvalSplit};
use crate::anchors::{build_anchor_map, build_title_map, AnchorMap};
use crate::dataset::{write_links_to, Dataset};
use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::predictors::{
    fit_atilp, fit_deepwalk, read_predictions, score_atilp, score_deepwalk, score_lsa, score_random, write_predictions,
    AtilpModel, AtilpSampling, DeepWalkParams, LsaScorer, Method, Mode, Prediction,
};
use crate::text::{SvdOptions, DEFAULT_DIMENSION};

#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub methods: Vec<Method>,
    pub modes: Vec<Mode>,
    pub runs: usize,
    pub base_seed: u64,
    pub transductive_ratio: f64,
    pub inductive_ratio: f64,
    pub lsa_dimension: usize,
    pub svd: SvdOptions,
    pub deepwalk: DeepWalkParams,
    pub atilp: AtilpSampling,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            methods: Method::BUILTIN.to_vec(),
            modes: vec![Mode::Transductive, Mode::Inductive],
            runs: 5,
            base_seed: 0,
            transductive_ratio: 0.1,
            inductive_ratio: 0.1,
            lsa_dimension: DEFAULT_DIMENSION,
            svd: SvdOptions::default(),
            deepwalk: DeepWalkParams::default(),
            atilp: AtilpSampling::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowStatus {
    Ok,
    Skipped,
    Failed,
}

/// Aggregate metrics of one method in one mode, in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub mode: Mode,
    pub method: String,
    pub auc_mean: Option<f64>,
    pub auc_std: Option<f64>,
    pub p_mean: Option<f64>,
    pub p_std: Option<f64>,
    pub r_mean: Option<f64>,
    pub r_std: Option<f64>,
    pub runs: usize,
    pub split_hash: String,
    pub status: RowStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRun {
    pub method: String,
    pub auc: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: usize,
    pub mode: Mode,
    pub seed: u64,
    pub hidden: usize,
    pub positives: usize,
    pub negatives: usize,
    pub split_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub atilp: Option<AtilpModel>,
    pub methods: Vec<MethodRun>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub dataset: String,
    pub rows: Vec<ReportRow>,
    pub per_run: Vec<RunRecord>,
}

impl EvalReport {
    pub fn has_failures(&self) -> bool {
        self.rows.iter().any(|r| r.status == RowStatus::Failed)
    }

    pub fn row(&self, mode: Mode, method: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.mode == mode && r.method == method)
    }

    /// Table with one row per method and `AUC / P / R` column groups per
    /// mode; cells read `mean (std)`.
    pub fn markdown(&self) -> String {
        let mut modes: Vec<Mode> = Vec::new();
        let mut methods: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !modes.contains(&r.mode) {
                modes.push(r.mode);
            }
            if !methods.contains(&r.method.as_str()) {
                methods.push(&r.method);
            }
        }
        let mut out = String::from("| Method |");
        for m in &modes {
            let title = match m {
                Mode::Transductive => "Transductive",
                Mode::Inductive => "Inductive",
            };
            out.push_str(&format!(" {title} AUC | P | R |"));
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(3 * modes.len()));
        out.push('\n');
        for name in methods {
            let label = name.parse::<Method>().map_or(name.to_string(), |m| m.label().to_string());
            out.push_str(&format!("| {label} |"));
            for &mode in &modes {
                let cells: [String; 3] = match self.row(mode, name) {
                    Some(r) if r.status == RowStatus::Ok => [
                        cell(r.auc_mean, r.auc_std),
                        cell(r.p_mean, r.p_std),
                        cell(r.r_mean, r.r_std),
                    ],
                    Some(r) if r.status == RowStatus::Failed => ["failed".into(), "failed".into(), "failed".into()],
                    _ => ["—".into(), "—".into(), "—".into()],
                };
                for c in cells {
                    out.push_str(&format!(" {c} |"));
                }
            }
            out.push('\n');
        }
        out
    }
}

fn cell(mean: Option<f64>, std: Option<f64>) -> String {
    match (mean, std) {
        (Some(m), Some(s)) => format!("{m:.2} ({s:.2})"),
        _ => "—".into(),
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

struct Context<'a> {
    dataset: &'a Dataset,
    config: &'a EvalConfig,
    anchor_map: AnchorMap,
    title_map: AnchorMap,
}

struct SplitModels {
    lsa: Option<Result<LsaScorer>>,
    atilp: Option<Result<AtilpModel>>,
}

impl Context<'_> {
    fn lsa<'m>(&self, split: &EvalSplit, seed: u64, models: &'m mut SplitModels) -> Result<&'m LsaScorer> {
        let visible = split.visible();
        let entry = models.lsa.get_or_insert_with(|| {
            LsaScorer::fit(
                &self.dataset.articles,
                Some(&visible),
                self.config.lsa_dimension,
                seed,
                &self.config.svd,
            )
        });
        entry.as_ref().map_err(|e| Error::invalid(format!("LSA fit failed: {e}")))
    }

    fn scores(
        &self,
        method: &Method,
        split: &EvalSplit,
        run: usize,
        seed: u64,
        models: &mut SplitModels,
    ) -> Result<Vec<f64>> {
        let pairs = &split.test_pairs;
        let articles = &self.dataset.articles;
        match method {
            Method::Random => Ok((0..pairs.len() as u64).map(|i| score_random(seed, i)).collect()),
            Method::AtAnchor => Ok(pairs.iter().map(|p| f64::from(u8::from(!p.matched.is_empty()))).collect()),
            Method::AtTitle => {
                let mut cache: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
                Ok(pairs
                    .iter()
                    .map(|p| {
                        let targets = cache.entry(p.source).or_insert_with(|| {
                            self.title_map
                                .scan_candidates(&articles[p.source])
                                .into_iter()
                                .map(|c| c.target)
                                .collect()
                        });
                        f64::from(u8::from(targets.binary_search(&p.target).is_ok()))
                    })
                    .collect())
            }
            Method::Lsa => {
                let lsa = self.lsa(split, seed, models)?;
                Ok(pairs.iter().map(|p| score_lsa(lsa, p.source, p.target)).collect())
            }
            Method::DeepWalk => {
                if split.mode == Mode::Inductive {
                    return Err(Error::UnsupportedMode("DeepWalk cannot score unseen documents".into()));
                }
                let model = fit_deepwalk(&split.train_network, &self.config.deepwalk, seed)?;
                pairs
                    .iter()
                    .map(|p| score_deepwalk(&model, split.mode, p.source, p.target))
                    .collect()
            }
            Method::Atilp => {
                self.lsa(split, seed, models)?;
                if models.atilp.is_none() {
                    let lsa = models.lsa.as_ref().unwrap().as_ref().unwrap();
                    let fit = fit_atilp(
                        &split.train_network,
                        lsa,
                        &self.anchor_map,
                        articles,
                        &split.visible(),
                        &self.config.atilp,
                        seed,
                    );
                    models.atilp = Some(fit);
                }
                let lsa = models.lsa.as_ref().unwrap().as_ref().unwrap();
                let model = models
                    .atilp
                    .as_ref()
                    .unwrap()
                    .as_ref()
                    .map_err(|e| Error::invalid(format!("ATILP fit failed: {e}")))?;
                Ok(pairs.iter().map(|p| score_atilp(model, lsa, &p.candidate())).collect())
            }
            Method::External { path, .. } => {
                let path = path.replace("{run}", &run.to_string()).replace("{mode}", split.mode.name());
                let given: HashMap<(NodeId, NodeId), f64> = read_predictions(Path::new(&path))?
                    .into_iter()
                    .map(|p| ((p.source, p.target), p.score))
                    .collect();
                pairs
                    .iter()
                    .map(|p| {
                        given.get(&p.key()).copied().ok_or_else(|| {
                            Error::invalid(format!("{path}: no score for pair ({}, {})", p.source, p.target))
                        })
                    })
                    .collect()
            }
        }
    }
}

fn metrics(method: &Method, split: &EvalSplit, scores: &[f64]) -> Result<(f64, f64, f64)> {
    let labels: Vec<bool> = split.test_pairs.iter().map(|p| p.label).collect();
    let auc = pr_auc(scores, &labels)?;
    let (p, r) = if method.is_binary() {
        let predicted: Vec<bool> = scores.iter().map(|&s| s >= 0.5).collect();
        binary_precision_recall(&predicted, &labels)?
    } else {
        let keys: Vec<(NodeId, NodeId)> = split.test_pairs.iter().map(|p| p.key()).collect();
        precision_recall_at_prevalence(&keys, scores, &labels)?
    };
    Ok((auc, p, r))
}

/// Runs every configured method on identical splits for each run and mode.
/// With `out` set, splits, per-run predictions, `report.json`, `runs.json`
/// and `report.md` are written there.
pub fn run_eval(dataset: &Dataset, name: &str, config: &EvalConfig, out: Option<&Path>) -> Result<EvalReport> {
    if config.runs == 0 {
        return Err(Error::invalid("at least one run is required"));
    }
    let ctx = Context {
        dataset,
        config,
        anchor_map: build_anchor_map(&dataset.network)?,
        title_map: build_title_map(&dataset.articles)?,
    };
    let mut per_run = Vec::new();
    let mut mode_hash: BTreeMap<Mode, Sha256> = BTreeMap::new();
    for run in 0..config.runs {
        let seed = config.base_seed.wrapping_add(run as u64);
        for &mode in &config.modes {
            let ratio = match mode {
                Mode::Transductive => config.transductive_ratio,
                Mode::Inductive => config.inductive_ratio,
            };
            let split = split(mode, &dataset.network, &ctx.anchor_map, &dataset.articles, ratio, seed)?;
            let mut test_bytes = Vec::new();
            split.write_test_pairs(&mut test_bytes)?;
            let mut train_bytes = Vec::new();
            write_links_to(&split.train_network, &mut train_bytes)?;
            let run_hash = hex(&Sha256::new()
                .chain_update(&test_bytes)
                .chain_update(&train_bytes)
                .finalize());
            mode_hash
                .entry(mode)
                .or_default()
                .update(run_hash.as_bytes());
            let run_dir = out.map(|o| o.join("splits").join(format!("run_{run}")).join(mode.name()));
            if let Some(dir) = &run_dir {
                fs::create_dir_all(dir)?;
                fs::write(dir.join("test_pairs.tsv"), &test_bytes)?;
                fs::write(dir.join("train_links.tsv"), &train_bytes)?;
            }
            let mut models = SplitModels { lsa: None, atilp: None };
            let mut methods = Vec::new();
            for method in &config.methods {
                if !method.supports(mode) {
                    continue;
                }
                let result = ctx
                    .scores(method, &split, run, seed, &mut models)
                    .and_then(|s| metrics(method, &split, &s).map(|m| (s, m)));
                match result {
                    Ok((scores, (auc, p, r))) => {
                        if let Some(o) = out {
                            let dir = o.join("predictions").join(format!("run_{run}")).join(mode.name());
                            fs::create_dir_all(&dir)?;
                            let preds: Vec<Prediction> = split
                                .test_pairs
                                .iter()
                                .zip(&scores)
                                .map(|(p, &score)| Prediction {
                                    source: p.source,
                                    target: p.target,
                                    score,
                                })
                                .collect();
                            write_predictions(&dir.join(format!("{}.tsv", method.name())), &preds)?;
                        }
                        methods.push(MethodRun {
                            method: method.name().to_string(),
                            auc: Some(auc),
                            precision: Some(p),
                            recall: Some(r),
                            error: None,
                        });
                    }
                    Err(e) => {
                        log::warn!("{} failed in {mode} run {run}: {e}", method.name());
                        methods.push(MethodRun {
                            method: method.name().to_string(),
                            auc: None,
                            precision: None,
                            recall: None,
                            error: Some(e.to_string()),
                        });
                    }
                }
            }
            per_run.push(RunRecord {
                run,
                mode,
                seed,
                hidden: match mode {
                    Mode::Transductive => split.hidden_edges.len(),
                    Mode::Inductive => split.hidden_nodes.len(),
                },
                positives: split.positives(),
                negatives: split.negatives(),
                split_hash: run_hash,
                atilp: models.atilp.and_then(|r| r.ok()),
                methods,
            });
        }
    }

    let hashes: BTreeMap<Mode, String> = mode_hash.into_iter().map(|(m, h)| (m, hex(&h.finalize()))).collect();
    let mut rows = Vec::new();
    for &mode in &config.modes {
        for method in &config.methods {
            let base = ReportRow {
                dataset: name.to_string(),
                mode,
                method: method.name().to_string(),
                auc_mean: None,
                auc_std: None,
                p_mean: None,
                p_std: None,
                r_mean: None,
                r_std: None,
                runs: config.runs,
                split_hash: hashes[&mode].clone(),
                status: RowStatus::Skipped,
                error: None,
            };
            if !method.supports(mode) {
                rows.push(base);
                continue;
            }
            let results: Vec<&MethodRun> = per_run
                .iter()
                .filter(|r| r.mode == mode)
                .flat_map(|r| r.methods.iter().filter(|m| m.method == method.name()))
                .collect();
            if let Some(failed) = results.iter().find(|m| m.error.is_some()) {
                rows.push(ReportRow {
                    status: RowStatus::Failed,
                    error: failed.error.clone(),
                    ..base
                });
                continue;
            }
            let collect = |f: fn(&MethodRun) -> Option<f64>| -> Vec<f64> { results.iter().filter_map(|m| f(m)).collect() };
            let (am, asd) = mean_sample_std(&collect(|m| m.auc));
            let (pm, psd) = mean_sample_std(&collect(|m| m.precision));
            let (rm, rsd) = mean_sample_std(&collect(|m| m.recall));
            rows.push(ReportRow {
                auc_mean: Some(am),
                auc_std: Some(asd),
                p_mean: Some(pm),
                p_std: Some(psd),
                r_mean: Some(rm),
                r_std: Some(rsd),
                status: RowStatus::Ok,
                ..base
            });
        }
    }
    let report = EvalReport {
        dataset: name.to_string(),
        rows,
        per_run,
    };
    if let Some(o) = out {
        write_report(&report, o)?;
    }
    Ok(report)
}

/// `report.json` (rows), `runs.json` (per-run records) and `report.md`.
pub fn write_report(report: &EvalReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(&report.rows)? + "\n")?;
    fs::write(dir.join("runs.json"), serde_json::to_string_pretty(&report.per_run)? + "\n")?;
    fs::write(dir.join("report.md"), report.markdown())?;
    Ok(())
}

/// Reads a directory written by [`write_report`].
pub fn read_report(dir: &Path) -> Result<EvalReport> {
    let rows: Vec<ReportRow> = serde_json::from_str(&fs::read_to_string(dir.join("report.json"))?)?;
    let runs_path = dir.join("runs.json");
    let per_run = if runs_path.exists() {
        serde_json::from_str(&fs::read_to_string(runs_path)?)?
    } else {
        Vec::new()
    };
    Ok(EvalReport {
        dataset: rows.first().map(|r| r.dataset.clone()).unwrap_or_default(),
        rows,
        per_run,
    })
}
