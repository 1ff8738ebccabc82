//! Memoized and disk-cached evaluation of graph invariants.
//!
//! Values are computed on the canonical representative of a graph and mapped
//! back to the caller's vertex labeling. Disk entries are keyed by a digest of
//! the canonical form, the method and the evaluator parameters, and are written
//! atomically (temporary file, then rename).

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::forms::{charge_relation, charge_var};
use super::invariant::{cg_top, cg_with, Method, Strategy};
use super::oracle::OracleParams;
use crate::error::{Error, Result};
use crate::exactmath::poly::MultiPoly;
use crate::graph::canon::DEFAULT_MAX_VERTICES;
use crate::graph::iso::canon_of;
use crate::graph::{canonical_form, canonical_graph, StableGraph};

pub const CACHE_SCHEMA: u32 = 1;
pub const CACHE_ENV: &str = "DRCALC_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".drcalc-cache";

/// Which quantity is cached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    Full,
    Top,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema: u32,
    pub canonical_form: String,
    /// The canonical representative the value was computed on.
    pub graph: StableGraph,
    pub method: Method,
    pub part: Part,
    pub params: String,
    pub value: MultiPoly,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// Directory from `DRCALC_CACHE_DIR`, else `./.drcalc-cache`.
    pub fn from_env() -> Self {
        Cache::new(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn key(form: &str, method: Method, part: Part, params: &str) -> String {
        let mut h = Sha256::new();
        h.update(form.as_bytes());
        h.update([0]);
        h.update(method.name().as_bytes());
        h.update([0]);
        h.update(format!("{part:?}").as_bytes());
        h.update([0]);
        h.update(params.as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, form: &str, method: Method, part: Part, params: &str) -> Option<MultiPoly> {
        let text = fs::read_to_string(self.path(&Self::key(form, method, part, params))).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.schema == CACHE_SCHEMA && entry.canonical_form == form && entry.method == method && entry.part == part)
            .then_some(entry.value)
    }

    pub fn put(
        &self,
        canon: &StableGraph,
        form: &str,
        method: Method,
        part: Part,
        params: &str,
        value: &MultiPoly,
    ) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            schema: CACHE_SCHEMA,
            canonical_form: form.to_string(),
            graph: canon.clone(),
            method,
            part,
            params: params.to_string(),
            value: value.clone(),
        };
        let target = self.path(&Self::key(form, method, part, params));
        let tmp = self.dir.join(format!(".tmp-{}-{}", std::process::id(), TMP_COUNTER.fetch_add(1, Ordering::Relaxed)));
        fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }

    pub fn entries(&self) -> Result<Vec<CacheEntry>> {
        let mut out = Vec::new();
        if !self.dir.exists() {
            return Ok(out);
        }
        let mut paths: Vec<PathBuf> = fs::read_dir(&self.dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for p in paths {
            let entry: CacheEntry = serde_json::from_str(&fs::read_to_string(&p)?)?;
            out.push(entry);
        }
        Ok(out)
    }

    /// Removes every entry; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let mut n = 0;
        if !self.dir.exists() {
            return Ok(0);
        }
        for e in fs::read_dir(&self.dir)? {
            let p = e?.path();
            if p.extension().is_some_and(|x| x == "json")
                || p.file_name().is_some_and(|f| f.to_string_lossy().starts_with(".tmp-"))
            {
                fs::remove_file(p)?;
                n += 1;
            }
        }
        Ok(n)
    }
}

/// Evaluates invariants with a fixed method, memoizing by canonical form.
pub struct Evaluator {
    method: Method,
    oracle: OracleParams,
    cache: Option<Cache>,
    memo: Mutex<HashMap<(String, Part), MultiPoly>>,
}

impl Evaluator {
    pub fn new(method: Method) -> Self {
        Evaluator { method, oracle: OracleParams::default(), cache: None, memo: Mutex::new(HashMap::new()) }
    }

    pub fn with_cache(mut self, cache: Cache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_oracle(mut self, oracle: OracleParams) -> Self {
        self.oracle = oracle;
        self
    }

    pub fn cache(&self) -> Option<&Cache> {
        self.cache.as_ref()
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// The parameter string that enters the cache key.
    pub fn params(&self) -> String {
        match self.method {
            Method::Oracle => format!(
                "max_vertices={DEFAULT_MAX_VERTICES};validation_r={};max_escalations={}",
                self.oracle.validation_r, self.oracle.max_escalations
            ),
            _ => format!("max_vertices={DEFAULT_MAX_VERTICES}"),
        }
    }

    fn canonical_value(&self, canon: &StableGraph, form: &str, part: Part) -> Result<MultiPoly> {
        let memo_key = (form.to_string(), part);
        if let Some(v) = self.memo.lock().expect("memo poisoned").get(&memo_key) {
            return Ok(v.clone());
        }
        let params = self.params();
        if let Some(c) = &self.cache {
            if let Some(v) = c.get(form, self.method, part, &params) {
                self.memo.lock().expect("memo poisoned").insert(memo_key, v.clone());
                return Ok(v);
            }
        }
        let value = match part {
            Part::Full => cg_with(canon, self.method, &self.oracle)?.value,
            Part::Top => {
                let strategy = match self.method {
                    Method::ZagierDivision => Strategy::Division,
                    Method::ZagierLaurent => Strategy::Laurent,
                    Method::Oracle => {
                        let full = cg_with(canon, Method::Oracle, &self.oracle)?.value;
                        let d = 2 * canon.num_edges() as u32;
                        return self.store(memo_key, canon, form, part, full.homogeneous_part(d));
                    }
                };
                cg_top(canon, strategy)?.value
            }
        };
        self.store(memo_key, canon, form, part, value)
    }

    fn store(
        &self,
        memo_key: (String, Part),
        canon: &StableGraph,
        form: &str,
        part: Part,
        value: MultiPoly,
    ) -> Result<MultiPoly> {
        if let Some(c) = &self.cache {
            c.put(canon, form, self.method, part, &self.params(), &value)?;
        }
        self.memo.lock().expect("memo poisoned").insert(memo_key, value.clone());
        Ok(value)
    }

    fn in_labeling(&self, g: &StableGraph, part: Part) -> Result<MultiPoly> {
        let canon = canonical_graph(g)?;
        let form = canonical_form(&canon)?;
        let value = self.canonical_value(&canon, &form, part)?;
        let perm = canon_of(g)?.vertex_perm;
        let back: BTreeMap<String, String> =
            perm.iter().enumerate().map(|(old, &new)| (charge_var(new), charge_var(old))).collect();
        let renamed = value.rename(|v| back.get(v).cloned().unwrap_or_else(|| v.to_string()));
        if renamed.vars().iter().any(|v| !back.values().any(|x| x == v)) {
            return Err(Error::Domain("cached value has foreign variables".into()));
        }
        Ok(charge_relation(g.num_vertices()).normalize(&renamed))
    }

    /// Recomputes a cache entry from scratch with this evaluator's oracle
    /// parameters, bypassing every cache layer.
    pub fn recompute(&self, entry: &CacheEntry) -> Result<MultiPoly> {
        let fresh = Evaluator::new(entry.method).with_oracle(self.oracle.clone());
        fresh.canonical_value(&entry.graph, &entry.canonical_form, entry.part)
    }

    /// `C(G)` in the vertex labeling of `g`.
    pub fn invariant(&self, g: &StableGraph) -> Result<MultiPoly> {
        self.in_labeling(g, Part::Full)
    }

    /// The top-degree part of `C(G)` in the vertex labeling of `g`.
    pub fn top(&self, g: &StableGraph) -> Result<MultiPoly> {
        self.in_labeling(g, Part::Top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drinvariant::invariant::cg;

    #[test]
    fn relabeling_is_transparent() {
        let g = StableGraph::raw(
            vec![StableGraph::v(0, &[1]), StableGraph::v(1, &[]), StableGraph::v(0, &[2])],
            vec![StableGraph::e(0, 1), StableGraph::e(1, 2), StableGraph::e(2, 0)],
            false,
        );
        let h = g.permute_vertices(&[2, 0, 1]);
        let ev = Evaluator::new(Method::ZagierLaurent);
        let direct_g = cg(&g, Method::ZagierLaurent).unwrap().value;
        let direct_h = cg(&h, Method::ZagierLaurent).unwrap().value;
        assert_eq!(ev.invariant(&g).unwrap(), direct_g);
        assert_eq!(ev.invariant(&h).unwrap(), direct_h);
    }

    #[test]
    fn disk_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let lp = StableGraph::raw(vec![StableGraph::v(0, &[1])], vec![StableGraph::e(0, 0)], false);
        let ev = Evaluator::new(Method::ZagierLaurent).with_cache(cache.clone());
        let v = ev.invariant(&lp).unwrap();
        assert_eq!(cache.entries().unwrap().len(), 1);
        let ev2 = Evaluator::new(Method::ZagierLaurent).with_cache(cache.clone());
        assert_eq!(ev2.invariant(&lp).unwrap(), v);
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }
}
