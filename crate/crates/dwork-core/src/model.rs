//! Per-(n, c) cache of the expensive objects. Entries are built once and
//! shared read-only between threads.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use symcore::{MatF, QuotientCtx};

use crate::chart::{solve_dependents, ChartSpec};
use crate::connection::{Connection, VecField};
use crate::dworkgeo::{CMode, DworkParams};
use crate::error::Result;
use crate::groupaction::{lie_gen, lie_indices};
use crate::modular::{modular_vf_with, YukawaSet};

pub type GenIndex = (usize, usize);

pub struct Model {
    pub conn: Connection,
    modular: OnceLock<Result<(VecField, YukawaSet)>>,
    basis: OnceLock<Result<BTreeMap<GenIndex, VecField>>>,
}

impl Model {
    pub fn build(params: &DworkParams) -> Result<Model> {
        let spec = solve_dependents(params)?;
        Ok(Model { conn: Connection::new(spec)?, modular: OnceLock::new(), basis: OnceLock::new() })
    }

    pub fn spec(&self) -> &ChartSpec {
        &self.conn.spec
    }

    pub fn params(&self) -> &DworkParams {
        &self.conn.spec.params
    }

    pub fn ctx(&self) -> &QuotientCtx {
        &self.conn.spec.ctx
    }

    pub fn n(&self) -> usize {
        self.params().n
    }

    /// The modular vector field and its Yukawa couplings.
    pub fn modular(&self) -> Result<&(VecField, YukawaSet)> {
        self.modular.get_or_init(|| modular_vf_with(&self.conn)).as_ref().map_err(Clone::clone)
    }

    pub fn r(&self) -> Result<&VecField> {
        Ok(&self.modular()?.0)
    }

    pub fn yukawa(&self) -> Result<&YukawaSet> {
        Ok(&self.modular()?.1)
    }

    /// R_{g_ab} for the canonical basis, solved in parallel.
    pub fn basis(&self) -> Result<&BTreeMap<GenIndex, VecField>> {
        self.basis
            .get_or_init(|| {
                let n = self.n();
                let idx = lie_indices(n);
                let fields: Vec<Result<(GenIndex, VecField)>> = idx
                    .par_iter()
                    .map(|&(a, b)| {
                        let g = lie_gen(n, a, b)?;
                        Ok(((a, b), self.conn.solve_vf(&g.mat.transpose())?))
                    })
                    .collect();
                fields.into_iter().collect()
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn basis_field(&self, a: usize, b: usize) -> Result<&VecField> {
        let n = self.n();
        self.basis()?
            .get(&(a, b))
            .ok_or_else(|| crate::DworkError::IndexOutOfRange(format!("g_{}{} for n={}", a, b, n)))
    }

    pub fn contract(&self, h: &VecField) -> MatF {
        self.conn.contract(h)
    }
}

type Slot = Arc<OnceLock<Result<Arc<Model>>>>;

fn cache() -> &'static Mutex<HashMap<(usize, String), Slot>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, String), Slot>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared model for (n, c mode); built at most once per process.
pub fn model(n: usize, mode: &CMode) -> Result<Arc<Model>> {
    let slot = {
        let mut map = cache().lock().unwrap();
        map.entry((n, mode.label())).or_default().clone()
    };
    slot.get_or_init(|| Model::build(&DworkParams::new(n, mode.clone())).map(Arc::new)).clone()
}
