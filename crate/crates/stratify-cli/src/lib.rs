//! Command implementations behind the `stratify` binary. Each command returns
//! its rendered output; `main` only prints and maps errors to exit codes.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use stratify::chart_valuation::{attaining, support, Atlas};
use stratify::coord_ring::GradedQuotient;
use stratify::exact_arith::{fmt_rational, LaurentPoly, TotalOrder};
use stratify::fan_monoids::hodge_fan;
use stratify::hilbert_geometry::{self, image_lattices};
use stratify::lattice::LatticeQ;
use stratify::ls_paths::{self, FlagData, RootSystem};
use stratify::shipped;
use stratify::smt_subduction::Subductor;
use stratify::strat_poset::{self, Chain, StratPoset, TieRule};

pub const SCHEMA_VERSION: u32 = 1;

/// Valuation images up to this degree generate the lattices used by `degree`
/// and `hilbert`.
pub const IMAGE_DEGREE: u32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Lib(#[from] stratify::Error),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use stratify::Error as E;
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                E::Schema(_) | E::Parse { .. } | E::UnknownId(_) | E::MissingDegree(_) | E::MissingChart(_) => 2,
                E::Bound(_) => 3,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A command's rendered output and exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Input files plus configuration shared by all commands.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub poset: StratPoset,
    pub atlas: Option<Atlas>,
    pub ring: Option<GradedQuotient>,
    pub tie: TieRule,
}

impl Workspace {
    /// `strat` is a JSON file path, or the name of a bundled example.
    pub fn load(strat: &str, atlas: Option<&Path>, ring: Option<&Path>, tie: TieRule) -> CliResult<Self> {
        let path = PathBuf::from(strat);
        let (poset, bundled) = if path.exists() {
            (StratPoset::from_json(&read(&path)?)?, None)
        } else if let Some(text) = shipped::strat_json(strat) {
            (StratPoset::from_json(text)?, Some(shipped::load(strat)?))
        } else {
            return Err(CliError::Io { path: strat.into(), msg: "no such file or bundled example".into() });
        };
        let atlas = match (atlas, &bundled) {
            (Some(dir), _) => Some(Atlas::load_dir(dir, &poset)?),
            (None, Some(ex)) => Some(ex.atlas.clone()),
            _ => None,
        };
        let ring = match (ring, &bundled) {
            (Some(p), _) => Some(GradedQuotient::load(p)?),
            (None, Some(ex)) => ex.ring.clone(),
            _ => None,
        };
        Ok(Self { poset, atlas, ring, tie })
    }

    pub fn order(&self) -> TotalOrder {
        self.poset.default_order(self.tie)
    }

    fn atlas(&self) -> CliResult<&Atlas> {
        self.atlas.as_ref().ok_or_else(|| CliError::Usage("this command needs --atlas".into()))
    }

    fn ring(&self) -> CliResult<&GradedQuotient> {
        self.ring.as_ref().ok_or_else(|| CliError::Usage("this command needs --ring".into()))
    }

    /// Image lattices when charts and a ring are present, else none (L^C).
    fn lattices(&self) -> CliResult<(BTreeMap<Chain, LatticeQ>, &'static str)> {
        match (&self.atlas, &self.ring) {
            (Some(a), Some(r)) => {
                let l = image_lattices(&self.poset, a, r, &self.order(), IMAGE_DEGREE)?;
                Ok((l, "valuation-images"))
            }
            _ => Ok((BTreeMap::new(), "chain-lattice")),
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn json_doc(command: &str, body: Value) -> String {
    let header = json!({ "schema": format!("stratify/{command}"), "version": SCHEMA_VERSION });
    format!("{header}\n{}\n", serde_json::to_string_pretty(&body).expect("serializable"))
}

pub fn cmd_validate(ws: &Workspace) -> CliResult<Output> {
    let report = strat_poset::validate(&ws.poset);
    let charts = match &ws.atlas {
        None => json!(null),
        Some(a) => match a.check_covers(&ws.poset) {
            Ok(()) => json!({ "ok": true, "charts": a.charts().count() }),
            Err(e) => json!({ "ok": false, "error": e.to_string() }),
        },
    };
    let ok = report.ok && charts.get("ok").is_none_or(|v| v == &json!(true));
    let text = json_doc("validate", json!({ "ok": ok, "poset": report, "charts": charts }));
    Ok(Output { text, code: if ok { 0 } else { 1 } })
}

pub fn cmd_hasse(ws: &Workspace) -> CliResult<Output> {
    Ok(Output::ok(format!("// schema: stratify/hasse v{SCHEMA_VERSION}\n{}", strat_poset::hasse_dot(&ws.poset))))
}

pub fn cmd_degree(ws: &Workspace) -> CliResult<Output> {
    let (lattices, method) = ws.lattices()?;
    let body = if ws.atlas.is_none() && ws.poset.all_bonds_one() {
        let d = hilbert_geometry::hodge_degree(&ws.poset)?;
        json!({ "degree": fmt_rational(&d), "method": "hodge", "chains": [] })
    } else {
        let (d, rows) = hilbert_geometry::degree(&ws.poset, &lattices)?;
        let fallback: Vec<String> =
            ws.poset.maximal_chains().iter().filter(|c| !lattices.contains_key(c)).map(|c| c.to_string()).collect();
        json!({ "degree": fmt_rational(&d), "method": method, "chain_lattice_fallback": fallback, "chains": rows })
    };
    Ok(Output::ok(json_doc("degree", body)))
}

pub fn cmd_hilbert(ws: &Workspace, max: u64) -> CliResult<Output> {
    let (lattices, _) = ws.lattices()?;
    let hodge = ws.poset.all_bonds_one();
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Usage(e.to_string());
    w.write_record(["m", "incl_excl", "stanley_reisner", "ring"]).map_err(csv_err)?;
    for m in 0..=max {
        let ie = hilbert_geometry::hilbert_incl_excl(&ws.poset, &lattices, m)?.to_string();
        let sr = if hodge { hilbert_geometry::sr_hilbert(&ws.poset, m)?.to_string() } else { String::new() };
        let ring = match &ws.ring {
            Some(r) => r.hilbert(u32::try_from(m).map_err(|_| CliError::Usage("degree too large".into()))?)?.to_string(),
            None => String::new(),
        };
        w.write_record([m.to_string(), ie, sr, ring]).map_err(csv_err)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?).expect("utf-8");
    Ok(Output::ok(format!("# schema: stratify/hilbert v{SCHEMA_VERSION}\n{body}")))
}

pub fn cmd_valuate(ws: &Workspace, poly: &str) -> CliResult<Output> {
    let atlas = ws.atlas()?;
    let g = LaurentPoly::parse(poly)?;
    let ord = ws.order();
    let results = atlas.chain_values(&g)?;
    let att = attaining(&results, &ord)?;
    let value = results.iter().find(|r| r.chain == att[0]).map(|r| r.value.clone()).expect("attaining chain");
    let chains: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "chain": r.chain.to_string(),
                "value": r.value,
                "nu": r.nu,
                "entries": r.chain.ids().iter().zip(&r.d).map(|(p, q)| json!([p, fmt_rational(q)])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let body = json!({
        "poly": g.to_string(),
        "value": value,
        "support": support(&value),
        "attaining": att.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "chains": chains,
    });
    Ok(Output::ok(json_doc("valuate", body)))
}

pub fn cmd_subduct(ws: &Workspace, poly: &str) -> CliResult<Output> {
    let (atlas, ring) = (ws.atlas()?, ws.ring()?);
    let fan = hodge_fan(&ws.poset)?;
    let sub = Subductor::with_extremal(&ws.poset, ring, atlas, &fan, ws.order())?;
    let f = LaurentPoly::parse(poly)?;
    let exp = sub.subduction(&f)?;
    let terms: Vec<Value> = exp
        .terms
        .iter()
        .map(|t| json!({ "coeff": fmt_rational(&t.coeff), "monomial": t.monomial.factors, "text": t.monomial.to_string() }))
        .collect();
    let body = json!({ "poly": f.to_string(), "terms": terms, "trace": exp.trace });
    Ok(Output::ok(json_doc("subduct", body)))
}

/// Parses "1,2" into fundamental-weight coefficients.
pub fn parse_lambda(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad λ coefficient `{x}`"))))
        .collect()
}

/// Parses "s1s2", "1,2" or "e" into a 0-based reduced word.
pub fn parse_word(s: &str) -> CliResult<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t == "e" || t == "id" {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = if t.contains(',') { t.split(',').collect() } else { t.split('s').filter(|x| !x.is_empty()).collect() };
    parts
        .into_iter()
        .map(|x| match x.trim().trim_start_matches('s').parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(CliError::Usage(format!("bad reduced word `{s}`"))),
        })
        .collect()
}

pub fn cmd_lspaths(ty: &str, lambda: &str, degree: u64, tau: Option<&str>) -> CliResult<Output> {
    let rs = RootSystem::from_type(ty)?;
    let lambda = parse_lambda(lambda)?;
    let fd = FlagData::new(rs, lambda.clone())?;
    let paths = ls_paths::enumerate_ls(&fd, degree)?;
    let report = ls_paths::character_check(&fd, degree)?;
    let tau_idx = match tau {
        Some(t) => fd.w.from_word(&fd.rs, &parse_word(t)?)?,
        None => fd.w.longest(),
    };
    let tau_name = fd.w.elements[tau_idx].name();
    let sd = ls_paths::schubert_degree(&fd, &tau_name)?;
    let path_rows = paths
        .iter()
        .map(|p| Ok(json!({ "dirs": p.dirs, "cuts": p.cuts.iter().map(fmt_rational).collect::<Vec<_>>(), "weight": ls_paths::weight(p, &fd)? })))
        .collect::<CliResult<Vec<_>>>()?;
    let covers: Vec<Value> =
        fd.poset.covers().iter().map(|c| json!({ "upper": c.upper, "lower": c.lower, "bond": c.bond })).collect();
    let body = json!({
        "type": ty,
        "lambda": lambda,
        "degree": degree,
        "poset": { "elements": fd.w.elements.iter().map(|e| e.name()).collect::<Vec<_>>(), "covers": covers },
        "count": paths.len(),
        "paths": path_rows,
        "character": report,
        "schubert_degree": { "tau": tau_name, "value": sd },
        "weyl_degree": fmt_rational(&ls_paths::weyl_degree(&fd.rs, &lambda)),
    });
    let code = if report.matches { 0 } else { 1 };
    Ok(Output { text: json_doc("lspaths", body), code })
}
