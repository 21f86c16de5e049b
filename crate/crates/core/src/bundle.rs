//! Instance bundles: the matrices a [`GenSpec`] produces, their certified
//! orders and the residuals of every hypothesis, written as a JSON directory.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{minimal_order, OrderKind, MAX_SEARCH_BOUND};
use crate::drazin::core_nilpotent;
use crate::elementary::Pair;
use crate::error::{Error, Result};
use crate::generators::{
    commuting_family, isometry_plus_nilpotent_instance, jordan_block, mr_symmetric_instance, random_selfadjoint, random_unitary,
    theorem1_instance, theorem2_instance, theorem3_default, theorem3_instance, Family, GenOptions, GenSpec, Theorem3Options,
};
use crate::harness::{commutator_check, delta_check, theorem1, theorem2, theorem3, triangle_check};
use crate::json;
use crate::matrix::{c, CMatrix};
use crate::rng::Rng;
use crate::tolerance::{Residual, ToleranceContext};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const DRAZIN_FILE: &str = "drazin.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub spec: GenSpec,
    pub matrices: BTreeMap<String, CMatrix>,
    pub orders: BTreeMap<String, usize>,
    pub hypotheses: Vec<Residual>,
    /// Extra JSON documents, by file stem.
    pub sidecars: BTreeMap<String, serde_json::Value>,
}

/// `manifest.json`: everything but the matrices, plus the file list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub spec: GenSpec,
    pub files: Vec<String>,
    pub orders: BTreeMap<String, usize>,
    pub hypotheses: Vec<Residual>,
    pub hypotheses_hold: bool,
}

impl Bundle {
    fn new(spec: &GenSpec) -> Self {
        Bundle { spec: spec.clone(), matrices: BTreeMap::new(), orders: BTreeMap::new(), hypotheses: Vec::new(), sidecars: BTreeMap::new() }
    }

    fn put(&mut self, name: impl Into<String>, m: CMatrix) {
        self.matrices.insert(name.into(), m);
    }

    pub fn files(&self) -> Vec<String> {
        let mut files: Vec<String> = self.matrices.keys().map(|k| format!("{k}.json")).collect();
        files.extend(self.sidecars.keys().map(|k| format!("{k}.json")));
        files.sort();
        files
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            spec: self.spec.clone(),
            files: self.files(),
            orders: self.orders.clone(),
            hypotheses: self.hypotheses.clone(),
            hypotheses_hold: self.hypotheses.iter().all(|r| r.pass),
        }
    }

    /// Writes `manifest.json` and one file per matrix and sidecar.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let write = |name: &str, text: String| {
            let p = dir.join(name);
            fs::write(&p, text).map_err(|e| Error::io(&p, e))
        };
        write(MANIFEST_FILE, json::to_string(&self.manifest())?)?;
        for (k, m) in &self.matrices {
            write(&format!("{k}.json"), json::to_string(m)?)?;
        }
        for (k, v) in &self.sidecars {
            write(&format!("{k}.json"), json::to_string(v)?)?;
        }
        Ok(())
    }
}

fn order_residual(kind: OrderKind, a: &CMatrix, k: usize, tol: &ToleranceContext) -> Result<Residual> {
    let b = a.adjoint();
    let id = CMatrix::identity(a.dim());
    match kind {
        OrderKind::Triangle => triangle_check(format!("Δ^{k}_{{A*,A}}(I)"), Pair::new(&b, a), &id, k, tol),
        OrderKind::Delta => delta_check(format!("δ^{k}_{{A*,A}}(I)"), Pair::new(&b, a), &id, k, tol),
    }
}

/// Certifies minimal isometry and symmetry orders of a single operator, when found.
fn single_operator_orders(bundle: &mut Bundle, a: &CMatrix, tol: &ToleranceContext) -> Result<()> {
    let b = a.adjoint();
    let id = CMatrix::identity(a.dim());
    let bound = (2 * a.dim() + 1).min(MAX_SEARCH_BOUND);
    for (kind, name) in [(OrderKind::Triangle, "isometry"), (OrderKind::Delta, "symmetry")] {
        if let Some(k) = minimal_order(kind, &b, a, &id, bound, tol)?.order {
            bundle.orders.insert(name.into(), k);
            bundle.hypotheses.push(order_residual(kind, a, k, tol)?);
        }
    }
    Ok(())
}

fn gen_options(spec: &GenSpec) -> Result<GenOptions> {
    let mut o = GenOptions::default();
    if let Some(k) = spec.int("max_order")? {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidParam(format!("max_order must be in 1..=3, got {k}")));
        }
        o.max_order = k;
    }
    o.conjugate = spec.flag("conjugate", true)?;
    let nil = ["m1", "n1", "m2", "n2"].map(|k| spec.int(k));
    if nil.iter().any(|r| matches!(r, Ok(Some(_)))) {
        let mut t = [0; 4];
        for (slot, r) in t.iter_mut().zip(nil) {
            *slot = r?.ok_or_else(|| Error::InvalidParam("give all of m1, n1, m2, n2 or none".into()))?;
        }
        o.nil_orders = Some(t);
    }
    Ok(o)
}

pub fn generate(spec: &GenSpec) -> Result<Bundle> {
    spec.validate()?;
    let tol = ToleranceContext::default();
    let (seed, dim) = (spec.seed, spec.dim);
    if dim == 0 {
        return Err(Error::InvalidParam("dim must be positive".into()));
    }
    let mut b = Bundle::new(spec);
    match spec.family {
        Family::Jordan => {
            let lambda = c(spec.float("lambda").unwrap_or(1.0), spec.float("lambda_im").unwrap_or(0.0));
            let a = jordan_block(lambda, dim);
            single_operator_orders(&mut b, &a, &tol)?;
            b.put("a", a);
        }
        Family::Unitary => {
            let a = random_unitary(&mut Rng::new(seed), dim);
            b.orders.insert("isometry".into(), 1);
            b.hypotheses.push(order_residual(OrderKind::Triangle, &a, 1, &tol)?);
            b.put("a", a);
        }
        Family::Selfadjoint => {
            let a = random_selfadjoint(&mut Rng::new(seed), dim);
            b.orders.insert("symmetry".into(), 1);
            b.hypotheses.push(order_residual(OrderKind::Delta, &a, 1, &tol)?);
            b.put("a", a);
        }
        Family::Commuting => {
            let count = spec.int("count")?.unwrap_or(2);
            let fam = commuting_family(&mut Rng::new(seed), dim, count, spec.flag("nilpotent", false)?)?;
            for (i, x) in fam.iter().enumerate() {
                for (j, y) in fam.iter().enumerate().skip(i + 1) {
                    b.hypotheses.push(commutator_check(format!("[a{i},a{j}]"), x, y, &tol)?);
                }
            }
            for (i, x) in fam.into_iter().enumerate() {
                b.put(format!("a{i}"), x);
            }
        }
        Family::Mr | Family::Isonil => {
            let n = spec.int("n")?.unwrap_or(2);
            let (a, k, kind, name) = if spec.family == Family::Mr {
                let (a, k) = mr_symmetric_instance(seed, dim, n, spec.float("lambda"))?;
                (a, k, OrderKind::Delta, "symmetry")
            } else {
                let (a, k) = isometry_plus_nilpotent_instance(seed, dim, n, spec.float("phase"))?;
                (a, k, OrderKind::Triangle, "isometry")
            };
            b.orders.insert(name.into(), k);
            b.hypotheses.push(order_residual(kind, &a, k, &tol)?);
            if k > 1 {
                let below = order_residual(kind, &a, k - 1, &tol)?;
                b.hypotheses.push(tol.check_nonzero(format!("{} nonzero", below.label), below.residual, below.scale));
            }
            b.put("a", a);
        }
        Family::Thm1 => {
            let inst = theorem1_instance(seed, dim, &gen_options(spec)?)?;
            let rep = theorem1::verify_theorem1(&inst, seed, dim, false, &tol);
            b.hypotheses = rep.hypotheses;
            let o = inst.orders;
            for (k, v) in [("m1", o.m1), ("n1", o.n1), ("r1", o.r1), ("n2", o.n2), ("m2", o.m2), ("s1", o.s1), ("r2", o.r2), ("s2", o.s2)] {
                b.orders.insert(k.into(), v);
            }
            for i in 0..2 {
                b.put(format!("a{}", i + 1), inst.a[i].clone());
                b.put(format!("b{}", i + 1), inst.b[i].clone());
                b.put(format!("s{}", i + 1), inst.s[i].clone());
                b.put(format!("t{}", i + 1), inst.t[i].clone());
            }
            b.put("x", inst.x);
        }
        Family::Thm2 => {
            let inst = theorem2_instance(seed, dim, &gen_options(spec)?)?;
            let rep = theorem2::verify_theorem2(&inst, seed, dim, &tol);
            b.hypotheses = rep.hypotheses;
            let nil = inst.nil;
            for (k, v) in [("m", inst.m), ("n", inst.n), ("m1", nil.m1), ("n1", nil.n1), ("m2", nil.m2), ("n2", nil.n2)] {
                b.orders.insert(k.into(), v);
            }
            for i in 0..2 {
                b.put(format!("a{}", i + 1), inst.a[i].clone());
                b.put(format!("b{}", i + 1), inst.b[i].clone());
                b.put(format!("m{}", i + 1), inst.mm[i].clone());
                b.put(format!("n{}", i + 1), inst.nn[i].clone());
            }
            b.put("x", inst.x);
        }
        Family::Thm3 => {
            let inst = if spec.flag("default", false)? {
                if dim != 3 {
                    return Err(Error::InvalidParam("the default theorem-3 instance has dim 3".into()));
                }
                theorem3_default()
            } else {
                let o = Theorem3Options {
                    p: spec.int("p")?,
                    strict: spec.flag("strict", false)?,
                    x22: spec.flag("x22", true)?,
                    conjugate: spec.flag("conjugate", true)?,
                };
                theorem3_instance(seed, dim, &o)?
            };
            let reps = theorem3::verify_theorem3(&inst, seed, dim, &tol);
            b.hypotheses = reps.into_iter().next().map(|r| r.hypotheses).unwrap_or_default();
            for (k, v) in [("m", inst.m), ("n", inst.n), ("p", inst.p), ("core_dim", inst.core_dim)] {
                b.orders.insert(k.into(), v);
            }
            let dd = core_nilpotent(&inst.a, &tol)?;
            b.sidecars.insert("drazin".into(), serde_json::to_value(&dd).map_err(|e| Error::Parse(e.to_string()))?);
            b.put("a", inst.a);
            b.put("x", inst.x);
            b.put("canonical_a", inst.canonical_a);
            b.put("canonical_x", inst.canonical_x);
        }
    }
    Ok(b)
}
