use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::centrality::{
    hill_default_window, normalized_totals, pagerank_exact, tail_exponent_estimate,
    write_scores_csv,
};
use crate::error::{Error, Result};
use crate::generate::{generate_p, generate_u};
use crate::graph::Graph;
use crate::params::ModelParams;
use crate::rng::RngStream;
use crate::sample::{attribute_representation, empirical_bias, SampleReport, SchemeSpec};
use crate::stats::{census, compare_fringe};
use crate::theory::{
    bias_limit, rare_minority, sampling_limits, solve, RareMinorityReport, SamplingLimits,
    TheorySolution,
};

fn default_reps() -> usize {
    10_000
}
fn default_c() -> f64 {
    0.85
}
fn default_alpha() -> f64 {
    0.01
}
fn default_p() -> f64 {
    0.5
}
fn default_fringe_cap() -> usize {
    3
}

/// Which suites a run executes.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Toggles {
    #[serde(default)]
    pub theory: bool,
    #[serde(default)]
    pub generate: bool,
    #[serde(default)]
    pub pagerank: bool,
    #[serde(default)]
    pub sample: bool,
    #[serde(default)]
    pub fringe: bool,
    #[serde(default)]
    pub bias: bool,
    #[serde(default)]
    pub rare_minority: Option<RareMinorityToggle>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RareMinorityToggle {
    pub a: f64,
    #[serde(rename = "D")]
    pub d: f64,
}

/// Full description of one reproducible experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: ModelParams,
    pub n: usize,
    #[serde(default = "default_reps")]
    pub reps: usize,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default)]
    pub schemes: Vec<SchemeSpec>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_p")]
    pub p: f64,
    pub seed: u64,
    #[serde(default)]
    pub outputs: Option<PathBuf>,
    #[serde(default = "default_fringe_cap")]
    pub fringe_cap: usize,
    #[serde(default)]
    pub write_graph: bool,
    #[serde(default)]
    pub use_joint_model: bool,
    #[serde(default)]
    pub toggles: Toggles,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        crate::params::validate(self.params.clone())?;
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::MalformedInput(format!(
                "damping must lie in (0,1), got {}",
                self.c
            )));
        }
        for s in &self.schemes {
            s.validate()?;
        }
        let t = &self.toggles;
        if (t.pagerank || t.sample || t.fringe || t.bias || t.generate) && self.n == 0 {
            return Err(Error::MalformedInput(
                "graph suites need a positive n".into(),
            ));
        }
        if t.sample && self.schemes.is_empty() {
            return Err(Error::MalformedInput(
                "sample suite enabled but no schemes listed".into(),
            ));
        }
        if let Some(rm) = &t.rare_minority {
            if !(rm.a > 0.0 && rm.a < 1.0) || rm.d <= 0.0 {
                return Err(Error::MalformedInput(
                    "rare-minority suite needs a in (0,1) and D > 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Hex SHA-256 of the canonical parameter serialization; ties empirical
/// artifacts to the theory they must be compared against.
pub fn param_hash(params: &ModelParams) -> String {
    let canon = serde_json::to_string(params).expect("parameters always serialize");
    let mut h = Sha256::new();
    h.update(canon.as_bytes());
    format!("{:x}", h.finalize())
}

/// One theory-vs-empirical statistic in the comparison table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub suite: String,
    pub statistic: String,
    pub theory: f64,
    pub empirical: f64,
    pub stderr: f64,
    pub z: f64,
}

fn comparison_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("suite,statistic,theory,empirical,stderr,z\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.suite, r.statistic, r.theory, r.empirical, r.stderr, r.z
        ));
    }
    out
}

/// Theory outputs bundled with the parameter hash they were computed from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TheoryArtifact {
    pub param_hash: String,
    pub solution: TheorySolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling_limits: Option<SamplingLimits>,
}

/// Sample reports bundled with the parameter hash of the generating run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleArtifact {
    pub param_hash: String,
    pub reports: Vec<SampleReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub suites_run: Vec<String>,
    pub suite_errors: Vec<(String, String)>,
    pub comparison: Vec<ComparisonRow>,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.suite_errors.is_empty() {
            0
        } else {
            1
        }
    }
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    fs::write(dir.join(name), serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn scheme_limit(scheme: &SchemeSpec, limits: &SamplingLimits) -> Option<Vec<f64>> {
    match *scheme {
        SchemeSpec::Uniform => Some(limits.uniform.clone()),
        SchemeSpec::Degree => Some(limits.degree.clone()),
        SchemeSpec::InDegree => Some(limits.in_degree.clone()),
        SchemeSpec::PagerankWalk { c } if c == limits.c => Some(limits.pagerank.clone()),
        SchemeSpec::FixedWalk { m } if m == limits.walk_len => Some(limits.fixed_walk.clone()),
        _ => None,
    }
}

fn scheme_label(scheme: &SchemeSpec) -> String {
    match *scheme {
        SchemeSpec::Uniform => "uniform".into(),
        SchemeSpec::Degree => "degree".into(),
        SchemeSpec::InDegree => "in_degree".into(),
        SchemeSpec::PagerankWalk { c } => format!("pagerank_walk(c={c})"),
        SchemeSpec::FixedWalk { m } => format!("fixed_walk(m={m})"),
        SchemeSpec::InducedNodes { p } => format!("induced_nodes(p={p})"),
        SchemeSpec::IncidentEdges { p } => format!("incident_edges(p={p})"),
    }
}

/// Runs every enabled suite, writing a manifest, JSON reports, optional graph
/// CSVs, and a tidy comparison table under the output directory. Suites run
/// independently: a failing suite is recorded and the rest still run.
pub fn run_experiment(config: &ExperimentConfig, out_dir: &Path) -> Result<RunSummary> {
    config.validate()?;
    fs::create_dir_all(out_dir)?;
    let hash = param_hash(&config.params);

    #[derive(Serialize)]
    struct Manifest<'a> {
        config: &'a ExperimentConfig,
        param_hash: &'a str,
        created: String,
    }
    write_json(
        out_dir,
        "manifest.json",
        &Manifest {
            config,
            param_hash: &hash,
            created: chrono_free_timestamp(),
        },
    )?;

    let mut summary = RunSummary {
        out_dir: out_dir.to_path_buf(),
        suites_run: Vec::new(),
        suite_errors: Vec::new(),
        comparison: Vec::new(),
    };
    let t = &config.toggles;
    let record = |summary: &mut RunSummary, suite: &str, r: Result<()>| {
        summary.suites_run.push(suite.to_string());
        if let Err(e) = r {
            summary.suite_errors.push((suite.to_string(), e.to_string()));
        }
    };

    // the theory solution feeds several empirical suites
    let solution = if t.theory || t.sample || t.fringe {
        match solve(&config.params, config.c) {
            Ok(s) => Some(s),
            Err(e) => {
                record(&mut summary, "theory", Err(e));
                None
            }
        }
    } else {
        None
    };

    if t.theory {
        if let Some(sol) = &solution {
            let limits = if config.params.is_tree() {
                sampling_limits(sol, &config.params, config.c, walk_len_of(config)).ok()
            } else {
                None
            };
            let artifact = TheoryArtifact {
                param_hash: hash.clone(),
                solution: sol.clone(),
                sampling_limits: limits,
            };
            record(
                &mut summary,
                "theory",
                write_json(out_dir, "theory.json", &artifact),
            );
        }
    }

    // one shared graph for all empirical suites
    let needs_graph = t.generate || t.pagerank || t.sample || t.fringe || t.bias;
    let graph = if needs_graph {
        let mut rng = RngStream::new(config.seed, 0);
        // root attribute follows the newcomer law, avoiding a systematic
        // seed bias in attribute statistics
        let root_attr = {
            use rand::Rng;
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = config.params.k - 1;
            for (a, &w) in config.params.pi.iter().enumerate() {
                acc += w;
                if u < acc {
                    pick = a;
                    break;
                }
            }
            pick
        };
        let seed_graph = Graph::singleton_seed(root_attr, config.params.k);
        let built = if config.use_joint_model {
            generate_u(&config.params, config.n, &seed_graph, &mut rng)
        } else {
            generate_p(&config.params, config.n, &seed_graph, &mut rng)
        };
        match built {
            Ok(g) => Some(g),
            Err(e) => {
                record(&mut summary, "generate", Err(e));
                None
            }
        }
    } else {
        None
    };

    if t.generate {
        if let Some(g) = &graph {
            let res = (|| -> Result<()> {
                if config.write_graph {
                    let mut vf = fs::File::create(out_dir.join("vertices.csv"))?;
                    g.write_vertices_csv(&mut vf)?;
                    let mut ef = fs::File::create(out_dir.join("edges.csv"))?;
                    g.write_edges_csv(&mut ef)?;
                }
                let c = census(g, 0)?;
                write_json(out_dir, "census.json", &c)
            })();
            record(&mut summary, "generate", res);
        }
    }

    if t.pagerank {
        if let Some(g) = &graph {
            let res = (|| -> Result<()> {
                let scores = pagerank_exact(g, config.c)?;
                let mut f = fs::File::create(out_dir.join("pagerank.csv"))?;
                write_scores_csv(&scores, g, &mut f)?;
                let (total, per_attr) = normalized_totals(&scores, g);
                let window = hill_default_window(g.n());
                let hill = tail_exponent_estimate(&scores.r, window).ok();
                #[derive(Serialize)]
                struct PrReport {
                    param_hash: String,
                    c: f64,
                    total_normalized_mass: f64,
                    per_attribute_mass: Vec<f64>,
                    hill_window: usize,
                    hill_exponent: Option<f64>,
                    hill_ci_halfwidth: Option<f64>,
                }
                write_json(
                    out_dir,
                    "pagerank.json",
                    &PrReport {
                        param_hash: hash.clone(),
                        c: config.c,
                        total_normalized_mass: total,
                        per_attribute_mass: per_attr,
                        hill_window: window,
                        hill_exponent: hill.map(|h| h.0),
                        hill_ci_halfwidth: hill.map(|h| h.1),
                    },
                )
            })();
            record(&mut summary, "pagerank", res);
        }
    }

    if t.sample {
        if let (Some(g), Some(sol)) = (&graph, &solution) {
            let res = (|| -> Result<()> {
                let limits = if config.params.is_tree() {
                    sampling_limits(sol, &config.params, config.c, walk_len_of(config)).ok()
                } else {
                    None
                };
                let mut reports = Vec::new();
                for (i, scheme) in config.schemes.iter().enumerate() {
                    let mut rng = RngStream::new(config.seed, 100 + i as u64);
                    let mut rep = attribute_representation(g, scheme, config.reps, &mut rng)?;
                    if let Some(l) = &limits {
                        rep.theory = scheme_limit(scheme, l);
                    }
                    if let Some(th) = &rep.theory {
                        for a in 0..config.params.k {
                            let se = rep.stderr[a].max(1e-300);
                            summary.comparison.push(ComparisonRow {
                                suite: "sample".into(),
                                statistic: format!("{}:attr{}", scheme_label(scheme), a),
                                theory: th[a],
                                empirical: rep.attr_freq[a],
                                stderr: rep.stderr[a],
                                z: (rep.attr_freq[a] - th[a]) / se,
                            });
                        }
                    }
                    reports.push(rep);
                }
                write_json(
                    out_dir,
                    "samples.json",
                    &SampleArtifact {
                        param_hash: hash.clone(),
                        reports,
                    },
                )
            })();
            record(&mut summary, "sample", res);
        }
    }

    if t.fringe {
        if let (Some(g), Some(sol)) = (&graph, &solution) {
            let res = (|| -> Result<()> {
                let c = census(g, config.fringe_cap)?;
                let rows = compare_fringe(&c, sol, &config.params)?;
                for r in &rows {
                    summary.comparison.push(ComparisonRow {
                        suite: "fringe".into(),
                        statistic: r.class.clone(),
                        theory: r.theory,
                        empirical: r.empirical,
                        stderr: (r.theory * (1.0 - r.theory) / c.n as f64).sqrt(),
                        z: r.z,
                    });
                }
                write_json(out_dir, "fringe.json", &rows)
            })();
            record(&mut summary, "fringe", res);
        }
    }

    if t.bias {
        if let Some(g) = &graph {
            let res = (|| -> Result<()> {
                let limit = bias_limit(&config.params, config.p, config.alpha)?;
                let mut rows = Vec::new();
                for (j, scheme) in [
                    SchemeSpec::InducedNodes { p: config.p },
                    SchemeSpec::IncidentEdges { p: config.p },
                ]
                .iter()
                .enumerate()
                {
                    let mut rng = RngStream::new(config.seed, 200 + j as u64);
                    let vals: Vec<f64> = (0..config.reps.max(1).min(1000))
                        .map(|_| empirical_bias(g, scheme, config.alpha, &mut rng))
                        .collect::<Result<_>>()?;
                    let n = vals.len() as f64;
                    let mean = vals.iter().sum::<f64>() / n;
                    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
                        / (n - 1.0).max(1.0);
                    let se = (var / n).sqrt().max(1e-300);
                    summary.comparison.push(ComparisonRow {
                        suite: "bias".into(),
                        statistic: scheme_label(scheme),
                        theory: limit,
                        empirical: mean,
                        stderr: se,
                        z: (mean - limit) / se,
                    });
                    rows.push((scheme_label(scheme), mean, se, limit));
                }
                write_json(out_dir, "bias.json", &rows)
            })();
            record(&mut summary, "bias", res);
        }
    }

    if let Some(rm) = &t.rare_minority {
        let res = (|| -> Result<()> {
            let report: RareMinorityReport =
                rare_minority(rm.a, rm.d, config.c, walk_len_of(config))?;
            write_json(out_dir, "rare_minority.json", &report)
        })();
        record(&mut summary, "rare_minority", res);
    }

    fs::write(
        out_dir.join("comparison.csv"),
        comparison_csv(&summary.comparison),
    )?;
    write_json(out_dir, "summary.json", &summary)?;
    Ok(summary)
}

fn walk_len_of(config: &ExperimentConfig) -> usize {
    config
        .schemes
        .iter()
        .find_map(|s| match s {
            SchemeSpec::FixedWalk { m } => Some(*m),
            _ => None,
        })
        .unwrap_or(1)
}

/// ISO-like timestamp without pulling in a clock crate; seconds since the
/// epoch is enough for a manifest.
fn chrono_free_timestamp() -> String {
    use std::time::{SystemTime, UNIX_EPOCH};
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{secs}")
}

/// Matches empirical sample reports against a theory artifact. The parameter
/// hashes embedded in both files must agree.
pub fn compare(theory_json: &str, empirical_json: &str) -> Result<Vec<ComparisonRow>> {
    let theory: TheoryArtifact = serde_json::from_str(theory_json)?;
    let empirical: SampleArtifact = serde_json::from_str(empirical_json)?;
    if theory.param_hash != empirical.param_hash {
        return Err(Error::HashMismatch(format!(
            "theory artifact hash {} does not match empirical hash {}",
            theory.param_hash, empirical.param_hash
        )));
    }
    let mut rows = Vec::new();
    for rep in &empirical.reports {
        let limit = rep.theory.clone().or_else(|| {
            theory
                .sampling_limits
                .as_ref()
                .and_then(|l| scheme_limit(&rep.scheme, l))
        });
        let Some(limit) = limit else { continue };
        for a in 0..rep.attr_freq.len() {
            let se = rep.stderr[a].max(1e-300);
            rows.push(ComparisonRow {
                suite: "sample".into(),
                statistic: format!("{}:attr{}", scheme_label(&rep.scheme), a),
                theory: limit[a],
                empirical: rep.attr_freq[a],
                stderr: rep.stderr[a],
                z: (rep.attr_freq[a] - limit[a]) / se,
            });
        }
    }
    Ok(rows)
}

pub fn comparison_table_csv(rows: &[ComparisonRow]) -> String {
    comparison_csv(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn base_config() -> ExperimentConfig {
        ExperimentConfig {
            params: ModelParams::tree(
                vec![0.5, 0.5],
                vec![vec![2.0, 1.0], vec![1.0, 2.0]],
                1.0,
            )
            .unwrap(),
            n: 2000,
            reps: 2000,
            c: 0.85,
            schemes: vec![SchemeSpec::Uniform, SchemeSpec::Degree],
            alpha: 0.05,
            p: 0.5,
            seed: 42,
            outputs: None,
            fringe_cap: 2,
            write_graph: true,
            use_joint_model: false,
            toggles: Toggles {
                theory: true,
                generate: true,
                pagerank: true,
                sample: true,
                fringe: true,
                bias: true,
                rare_minority: Some(RareMinorityToggle { a: 0.01, d: 1.0 }),
            },
        }
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = r#"{"params":{"k":1,"pi":[1.0],"kappa":[[1.0]],"m":[1],"gamma":1.0},
                       "n":10,"seed":1,"bogus":3}"#;
        assert!(ExperimentConfig::from_json(text).is_err());
    }

    #[test]
    fn empty_toggles_manifest_only() {
        let mut cfg = base_config();
        cfg.toggles = Toggles::default();
        let dir = tempdir().unwrap();
        let s = run_experiment(&cfg, dir.path()).unwrap();
        assert_eq!(s.exit_code(), 0);
        assert!(dir.path().join("manifest.json").exists());
        assert!(!dir.path().join("theory.json").exists());
    }

    #[test]
    fn full_run_writes_all_artifacts() {
        let cfg = base_config();
        let dir = tempdir().unwrap();
        let s = run_experiment(&cfg, dir.path()).unwrap();
        assert_eq!(s.exit_code(), 0, "suite errors: {:?}", s.suite_errors);
        for f in [
            "manifest.json",
            "theory.json",
            "vertices.csv",
            "edges.csv",
            "census.json",
            "pagerank.csv",
            "pagerank.json",
            "samples.json",
            "fringe.json",
            "bias.json",
            "rare_minority.json",
            "comparison.csv",
            "summary.json",
        ] {
            assert!(dir.path().join(f).exists(), "missing {f}");
        }
        assert!(s.comparison.iter().all(|r| r.z.is_finite()));
    }

    #[test]
    fn identical_seeds_reproduce_reports() {
        let cfg = base_config();
        let (d1, d2) = (tempdir().unwrap(), tempdir().unwrap());
        run_experiment(&cfg, d1.path()).unwrap();
        run_experiment(&cfg, d2.path()).unwrap();
        for f in ["theory.json", "samples.json", "comparison.csv", "pagerank.csv"] {
            let a = fs::read_to_string(d1.path().join(f)).unwrap();
            let b = fs::read_to_string(d2.path().join(f)).unwrap();
            assert_eq!(a, b, "mismatch in {f}");
        }
    }

    #[test]
    fn compare_theory_against_itself_is_zero() {
        let cfg = base_config();
        let dir = tempdir().unwrap();
        run_experiment(&cfg, dir.path()).unwrap();
        let theory = fs::read_to_string(dir.path().join("theory.json")).unwrap();
        // synthesize an "empirical" file whose frequencies equal the limits
        let art: TheoryArtifact = serde_json::from_str(&theory).unwrap();
        let lim = art.sampling_limits.clone().unwrap();
        let fake = SampleArtifact {
            param_hash: art.param_hash.clone(),
            reports: vec![SampleReport {
                scheme: SchemeSpec::Uniform,
                reps: 1000,
                attr_freq: lim.uniform.clone(),
                stderr: vec![0.01; lim.uniform.len()],
                theory: None,
            }],
        };
        let rows = compare(&theory, &serde_json::to_string(&fake).unwrap()).unwrap();
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r.z == 0.0));
    }

    #[test]
    fn compare_rejects_mismatched_hashes() {
        let cfg = base_config();
        let dir = tempdir().unwrap();
        run_experiment(&cfg, dir.path()).unwrap();
        let theory = fs::read_to_string(dir.path().join("theory.json")).unwrap();
        let fake = SampleArtifact {
            param_hash: "deadbeef".into(),
            reports: vec![],
        };
        assert!(matches!(
            compare(&theory, &serde_json::to_string(&fake).unwrap()),
            Err(Error::HashMismatch(_))
        ));
    }

    #[test]
    fn sample_without_schemes_rejected() {
        let mut cfg = base_config();
        cfg.schemes.clear();
        assert!(cfg.validate().is_err());
    }
}
