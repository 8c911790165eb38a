//! Example stratifications bundled with the crate.

use std::collections::BTreeMap;

use crate::chart_valuation::{Atlas, AtlasFile, ChainChart, ChartFile};
use crate::coord_ring::GradedQuotient;
use crate::error::{Error, Result};
use crate::exact_arith::LaurentPoly;
use crate::strat_poset::{generic_model, StratPoset};

macro_rules! data {
    ($name:literal, $file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/", $name, "/", $file))
    };
}

struct Raw {
    strat: &'static str,
    ring: Option<&'static str>,
    charts: &'static [&'static str],
    extremal: &'static str,
}

pub const NAMES: [&str; 8] = ["gr24", "sl3b", "pset-p2", "quadric", "elliptic1", "elliptic2", "psl2", "torus"];

fn raw(name: &str) -> Option<Raw> {
    Some(match name {
        "gr24" => Raw {
            strat: data!("gr24", "strat.json"),
            ring: Some(data!("gr24", "ring.json")),
            charts: &[data!("gr24", "atlas/chain1.json"), data!("gr24", "atlas/chain2.json")],
            extremal: data!("gr24", "atlas/extremal.json"),
        },
        "sl3b" => Raw {
            strat: data!("sl3b", "strat.json"),
            ring: Some(data!("sl3b", "ring.json")),
            charts: &[
                data!("sl3b", "atlas/chain1.json"),
                data!("sl3b", "atlas/chain2.json"),
                data!("sl3b", "atlas/chain3.json"),
                data!("sl3b", "atlas/chain4.json"),
            ],
            extremal: data!("sl3b", "atlas/extremal.json"),
        },
        "pset-p2" => Raw {
            strat: data!("pset-p2", "strat.json"),
            ring: Some(data!("pset-p2", "ring.json")),
            charts: &[
                data!("pset-p2", "atlas/chain1.json"),
                data!("pset-p2", "atlas/chain2.json"),
                data!("pset-p2", "atlas/chain3.json"),
                data!("pset-p2", "atlas/chain4.json"),
                data!("pset-p2", "atlas/chain5.json"),
                data!("pset-p2", "atlas/chain6.json"),
            ],
            extremal: data!("pset-p2", "atlas/extremal.json"),
        },
        "quadric" => Raw {
            strat: data!("quadric", "strat.json"),
            ring: Some(data!("quadric", "ring.json")),
            charts: &[data!("quadric", "atlas/chain1.json"), data!("quadric", "atlas/chain2.json")],
            extremal: data!("quadric", "atlas/extremal.json"),
        },
        "elliptic1" => Raw {
            strat: data!("elliptic1", "strat.json"),
            ring: Some(data!("elliptic1", "ring.json")),
            charts: &[data!("elliptic1", "atlas/chain1.json")],
            extremal: data!("elliptic1", "atlas/extremal.json"),
        },
        "elliptic2" => Raw {
            strat: data!("elliptic2", "strat.json"),
            ring: Some(data!("elliptic2", "ring.json")),
            charts: &[data!("elliptic2", "atlas/chain1.json"), data!("elliptic2", "atlas/chain2.json")],
            extremal: data!("elliptic2", "atlas/extremal.json"),
        },
        "psl2" => Raw {
            strat: data!("psl2", "strat.json"),
            ring: Some(data!("psl2", "ring.json")),
            charts: &[
                data!("psl2", "atlas/chain1.json"),
                data!("psl2", "atlas/chain2.json"),
                data!("psl2", "atlas/chain3.json"),
                data!("psl2", "atlas/chain4.json"),
            ],
            extremal: data!("psl2", "atlas/extremal.json"),
        },
        "torus" => Raw {
            strat: data!("torus", "strat.json"),
            ring: None,
            charts: &[
                data!("torus", "atlas/chain01.json"),
                data!("torus", "atlas/chain02.json"),
                data!("torus", "atlas/chain03.json"),
                data!("torus", "atlas/chain04.json"),
                data!("torus", "atlas/chain05.json"),
                data!("torus", "atlas/chain06.json"),
                data!("torus", "atlas/chain07.json"),
                data!("torus", "atlas/chain08.json"),
                data!("torus", "atlas/chain09.json"),
                data!("torus", "atlas/chain10.json"),
                data!("torus", "atlas/chain11.json"),
                data!("torus", "atlas/chain12.json"),
            ],
            extremal: data!("torus", "atlas/extremal.json"),
        },
        _ => return None,
    })
}

/// A bundled stratification with its charts and, where available, its ring.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: String,
    pub poset: StratPoset,
    pub atlas: Atlas,
    pub ring: Option<GradedQuotient>,
}

pub fn load(name: &str) -> Result<Example> {
    let r = raw(name).ok_or_else(|| Error::Schema(format!("no bundled example `{name}`")))?;
    let poset = StratPoset::from_json(r.strat)?;
    let charts = r
        .charts
        .iter()
        .map(|s| serde_json::from_str::<ChartFile>(s).map_err(|e| Error::Schema(format!("{name}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let extremal = serde_json::from_str(r.extremal).map_err(|e| Error::Schema(format!("{name}: {e}")))?;
    let atlas = Atlas::from_file(&AtlasFile { charts, extremal }, &poset)?;
    atlas.check_covers(&poset)?;
    let ring = r.ring.map(GradedQuotient::from_json).transpose()?;
    Ok(Example { name: name.to_string(), poset, atlas, ring })
}

/// Raw strat.json text of a bundled example.
pub fn strat_json(name: &str) -> Option<&'static str> {
    raw(name).map(|r| r.strat)
}

/// Synthetic monomial charts for the generic model: on the chain ending in
/// q_{0,k}, f_{q_j} = t_0 t_j, f_{0,k} = t_0^{s-1} and f_{0,m} = t_0^{s-1} t_1
/// for m ≠ k.
pub fn generic_model_atlas(s: usize, r: usize) -> Result<(StratPoset, Atlas)> {
    let ps = generic_model(s, r)?;
    let e = s.saturating_sub(1).max(1);
    let mut charts = Vec::new();
    for chain in ps.maximal_chains() {
        let bottom = chain.bottom().to_string();
        let divisor_vars: Vec<String> = (0..=r).rev().map(|j| format!("t{j}")).collect();
        let mut f_exprs = BTreeMap::new();
        for j in 1..=r {
            f_exprs.insert(format!("q{j}"), format!("t0*t{j}"));
        }
        for k in 1..=s {
            let id = format!("q0_{k}");
            let expr = if id == bottom { format!("t0^{e}") } else { format!("t0^{e}*t1") };
            f_exprs.insert(id, expr);
        }
        let file = ChartFile { chain: chain.ids().to_vec(), divisor_vars, extra_vars: Vec::new(), f_exprs, ambient_map: BTreeMap::new() };
        charts.push(ChainChart::new(&file, &ps)?);
    }
    let atlas = Atlas::new(charts, BTreeMap::<String, LaurentPoly>::new())?;
    Ok((ps, atlas))
}
