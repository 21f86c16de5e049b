//! Drazin-invertible `(X,(m,n))`-isosymmetric operators.
//!
//! The conclusions are checked on the core block: with `S⁻¹AS = T₁ ⊕ T₂`,
//! the `H₁` block of `S⁻¹ R S` for each residual `R`. The full-space
//! values are kept as diagnostics.

use super::{from_test, equal_check, pair_check, pair_nonzero, run_cell, Suite, VerificationReport};
use crate::drazin::{core_nilpotent, DrazinDecomposition};
use crate::elementary::{delta_power, delta_weight, triangle_power, triangle_weight, Pair};
use crate::error::Result;
use crate::generators::{theorem3_default, theorem3_instance, GenOptions, Theorem3Instance, Theorem3Options};
use crate::matrix::{c, CMatrix};
use crate::tolerance::{Residual, ToleranceContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Tri,
    Del,
}

fn apply(op: Op, b: &CMatrix, a: &CMatrix, x: &CMatrix, k: usize) -> Result<CMatrix> {
    match op {
        Op::Tri => triangle_power(b, a, x, k),
        Op::Del => delta_power(b, a, x, k),
    }
}

fn weight(op: Op, b: &CMatrix, a: &CMatrix, k: usize) -> Result<f64> {
    match op {
        Op::Tri => triangle_weight(Pair::new(b, a), k),
        Op::Del => delta_weight(Pair::new(b, a), k),
    }
}

/// `outer^ko_{bo,ao}(inner^ki_{bi,ai}(X))` with its scale.
struct Nested<'a> {
    label: &'static str,
    outer: (Op, &'a CMatrix, &'a CMatrix, usize),
    inner: (Op, &'a CMatrix, &'a CMatrix, usize),
}

impl Nested<'_> {
    fn eval(&self, x: &CMatrix) -> Result<(CMatrix, f64)> {
        let (oi, bi, ai, ki) = self.inner;
        let (oo, bo, ao, ko) = self.outer;
        let y = apply(oo, bo, ao, &apply(oi, bi, ai, x, ki)?, ko)?;
        Ok((y, x.fro_norm() * weight(oi, bi, ai, ki)? * weight(oo, bo, ao, ko)?))
    }

    fn full(&self, x: &CMatrix, tol: &ToleranceContext) -> Result<Residual> {
        let (y, s) = self.eval(x)?;
        Ok(tol.check_zero(format!("{} (full space)", self.label), y.fro_norm(), s))
    }

    fn core(&self, x: &CMatrix, dd: &DrazinDecomposition, tol: &ToleranceContext) -> Result<Residual> {
        let (y, s) = self.eval(x)?;
        let block = dd.to_splitting(&y).diag_block(0, dd.core_dim);
        let k = dd.diagnostics.splitting_cond;
        Ok(tol.check_zero(format!("{} on core", self.label), block.fro_norm(), k * k * s))
    }
}

/// Operators shared by all parts.
struct Ops {
    a: CMatrix,
    a_adj: CMatrix,
    ad: CMatrix,
    ad_adj: CMatrix,
    /// `A²A_d`: the core part `T₁ ⊕ 0`.
    core_part: CMatrix,
    dd: DrazinDecomposition,
}

impl Ops {
    fn new(a: &CMatrix, tol: &ToleranceContext) -> Result<Self> {
        let dd = core_nilpotent(a, tol)?;
        let ad = dd.td.clone();
        Ok(Ops {
            a: a.clone(),
            a_adj: a.adjoint(),
            ad_adj: ad.adjoint(),
            core_part: &(a * a) * &ad,
            ad,
            dd,
        })
    }
}

fn drazin_hypotheses(r: &mut VerificationReport, ops: &Ops, p: usize) {
    let d = &ops.dd.diagnostics;
    r.hyp(from_test("A = S(T1 ⊕ T2)S⁻¹", &d.reconstruction));
    r.hyp(from_test("T2^p = 0", &d.nilpotency));
    r.hyp(from_test("[A_d, A] = 0", &d.commutes));
    r.hyp(from_test("A_d A A_d = A_d", &d.reflexive));
    r.hyp(from_test("A^{p+1} A_d = A^p", &d.index_identity));
    r.hyp(Residual::flag(format!("Drazin index {} = {p}", ops.dd.p), ops.dd.p == p));
}

/// Reports for parts `i`, `ii`, `iii`.
pub fn verify_theorem3(inst: &Theorem3Instance, seed: u64, dim: usize, tol: &ToleranceContext) -> Vec<VerificationReport> {
    let (m, n, x) = (inst.m, inst.n, &inst.x);
    let mk = |variant: &'static str, part: &dyn Fn(&mut VerificationReport, &Ops) -> Result<()>| {
        run_cell(Suite::Thm3, "thm3", seed, dim, |r| {
            let ops = Ops::new(&inst.a, tol)?;
            drazin_hypotheses(r, &ops, inst.p);
            let o = &ops;
            r.hyp(pair_check(
                format!("((A*,A),(A*,A)) at ({m},{n})"),
                Pair::new(&o.a_adj, &o.a),
                Pair::new(&o.a_adj, &o.a),
                x,
                m,
                n,
                tol,
            )?);
            if o.dd.core_dim == 0 {
                r.note("A is nilpotent: the core block is empty");
            }
            part(r, o)
        })
        .with_variant(variant)
    };
    let part_i = |r: &mut VerificationReport, o: &Ops| -> Result<()> {
        let proof = [
            Nested { label: "Δ^n_{Ad*,A²Ad}(Δ^m_{Ad*,Ad}(X))", outer: (Op::Tri, &o.ad_adj, &o.core_part, n), inner: (Op::Tri, &o.ad_adj, &o.ad, m) },
            Nested { label: "δ^m_{Ad*,A²Ad}(δ^n_{Ad*,Ad}(X))", outer: (Op::Del, &o.ad_adj, &o.core_part, m), inner: (Op::Del, &o.ad_adj, &o.ad, n) },
        ];
        let statement = [
            Nested { label: "Δ^n_{Ad*,A}(Δ^m_{A*,Ad}(X))", outer: (Op::Tri, &o.ad_adj, &o.a, n), inner: (Op::Tri, &o.a_adj, &o.ad, m) },
            Nested { label: "δ^m_{Ad*,A}(δ^n_{Ad*,Ad}(X))", outer: (Op::Del, &o.ad_adj, &o.a, m), inner: (Op::Del, &o.ad_adj, &o.ad, n) },
        ];
        for f in &proof {
            r.concl(f.core(x, &o.dd, tol)?);
            r.diag(f.full(x, tol)?);
        }
        for f in &statement {
            r.diag(f.full(x, tol)?);
            r.diag(f.core(x, &o.dd, tol)?);
        }
        Ok(())
    };
    let part_ii = |r: &mut VerificationReport, o: &Ops| -> Result<()> {
        let hyp = Nested { label: "Δ^m_{Ad*,A}(δ^n_{A*,A}(X))", outer: (Op::Tri, &o.ad_adj, &o.a, m), inner: (Op::Del, &o.a_adj, &o.a, n) };
        let (y, s) = hyp.eval(x)?;
        r.hyp(tol.check_zero(hyp.label, y.fro_norm(), s));
        let concl = Nested { label: "Δ^n_{Ad*,A}(Δ^m_{A*,Ad}(X))", outer: (Op::Tri, &o.ad_adj, &o.a, n), inner: (Op::Tri, &o.a_adj, &o.ad, m) };
        r.concl(concl.core(x, &o.dd, tol)?);
        r.diag(concl.full(x, tol)?);
        Ok(())
    };
    let part_iii = |r: &mut VerificationReport, o: &Ops| -> Result<()> {
        let hyp = Nested { label: "Δ^m_{A*,A}(δ^n_{Ad*,A}(X))", outer: (Op::Tri, &o.a_adj, &o.a, m), inner: (Op::Del, &o.ad_adj, &o.a, n) };
        let (y, s) = hyp.eval(x)?;
        r.hyp(tol.check_zero(hyp.label, y.fro_norm(), s));
        let concl = Nested { label: "δ^n_{A*,Ad}(δ^m_{Ad*,A}(X))", outer: (Op::Del, &o.a_adj, &o.ad, n), inner: (Op::Del, &o.ad_adj, &o.a, m) };
        r.concl(concl.core(x, &o.dd, tol)?);
        r.diag(concl.full(x, tol)?);
        Ok(())
    };
    vec![mk("i", &part_i), mk("ii", &part_ii), mk("iii", &part_iii)]
}

/// Adding `S[[0,E],[0,0]]S⁻¹` to `X` breaks the hypothesis: the off-diagonal
/// block of `X` is forced to vanish.
pub fn verify_forcing(inst: &Theorem3Instance, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Thm3, "thm3-forcing", seed, dim, |r| {
        let ops = Ops::new(&inst.a, tol)?;
        let dd = &ops.dd;
        let (k, d) = (dd.core_dim, dim);
        r.hyp(pair_check(
            format!("((A*,A),(A*,A)) at ({},{})", inst.m, inst.n),
            Pair::new(&ops.a_adj, &ops.a),
            Pair::new(&ops.a_adj, &ops.a),
            &inst.x,
            inst.m,
            inst.n,
            tol,
        )?);
        if k == 0 || k == d {
            r.hyp(Residual::flag("both splitting blocks nonempty", false));
            return Ok(());
        }
        let e = CMatrix::unit(d, 0, k);
        let xp = &inst.x + &dd.from_splitting(&e);
        let p = Pair::new(&ops.a_adj, &ops.a);
        r.concl(pair_nonzero(format!("X + S E12 S⁻¹ at ({},{}) nonzero", inst.m, inst.n), p, p, &xp, inst.m, inst.n, tol)?);
        Ok(())
    })
}

/// In splitting coordinates with `X₁₂ = X₂₁ = 0`, each nested residual is the
/// direct sum of the block residuals, with `A_d = T₁⁻¹ ⊕ 0`.
pub fn verify_block_formulas(inst: &Theorem3Instance, seed: u64, tol: &ToleranceContext) -> Vec<VerificationReport> {
    let dim = inst.a.dim();
    let (m, n) = (inst.m, inst.n);
    let k = inst.core_dim;
    let run = |id: &'static str, f: fn(&[CMatrix; 4], &CMatrix, usize, usize) -> Result<(CMatrix, f64)>| {
        run_cell(Suite::Thm3, id, seed, dim, |r| {
            let t = &inst.canonical_a;
            let x = &inst.canonical_x;
            let t1 = t.diag_block(0, k);
            let t2 = t.diag_block(k, dim - k);
            let x11 = x.diag_block(0, k);
            let x22 = x.diag_block(k, dim - k);
            let off = x - &x11.direct_sum(&x22);
            r.hyp(tol.check_zero("X12, X21 = 0", off.fro_norm(), x.fro_norm()));
            let t1_inv = if k > 0 { t1.inverse()? } else { CMatrix::zeros(0) };
            let td = t1_inv.direct_sum(&CMatrix::zeros(dim - k));
            let dd = crate::drazin::drazin_inverse(t, tol)?;
            r.hyp(tol.check_zero("A_d = T1⁻¹ ⊕ 0", (&dd - &td).fro_norm(), td.fro_norm().max(1.0)));
            let (full, scale) = f(&[t.clone(), t.adjoint(), td.clone(), td.adjoint()], x, m, n)?;
            let zeros = CMatrix::zeros(dim - k);
            let (b1, s1) = if k > 0 { f(&[t1.clone(), t1.adjoint(), t1_inv.clone(), t1_inv.adjoint()], &x11, m, n)? } else { (CMatrix::zeros(0), 0.0) };
            let (b2, s2) = f(&[t2.clone(), t2.adjoint(), zeros.clone(), zeros], &x22, m, n)?;
            r.concl(equal_check("full = block 1 ⊕ block 2", &full, &b1.direct_sum(&b2), scale.max(s1 + s2), tol));
            Ok(())
        })
    };
    // ops: [T, T*, Td, Td*]
    vec![
        run("eq1-block", |o, x, m, n| {
            let y = triangle_power(&o[1], &o[0], &delta_power(&o[1], &o[0], x, n)?, m)?;
            Ok((y, x.fro_norm() * triangle_weight(Pair::new(&o[1], &o[0]), m)? * delta_weight(Pair::new(&o[1], &o[0]), n)?))
        }),
        run("eq2-block", |o, x, m, n| {
            let y = triangle_power(&o[3], &o[0], &delta_power(&o[1], &o[0], x, n)?, m)?;
            Ok((y, x.fro_norm() * triangle_weight(Pair::new(&o[3], &o[0]), m)? * delta_weight(Pair::new(&o[1], &o[0]), n)?))
        }),
        run("eq3-block", |o, x, m, n| {
            let y = delta_power(&o[3], &o[0], &triangle_power(&o[1], &o[0], x, m)?, n)?;
            Ok((y, x.fro_norm() * triangle_weight(Pair::new(&o[1], &o[0]), m)? * delta_weight(Pair::new(&o[3], &o[0]), n)?))
        }),
    ]
}

pub fn options_for(seed: u64, dim: usize, opts: &GenOptions) -> Theorem3Options {
    Theorem3Options { p: None, strict: dim >= 3 && seed % 2 == 1, x22: true, conjugate: opts.conjugate }
}

pub fn run(seed: u64, dim: usize, opts: &GenOptions) -> Vec<VerificationReport> {
    match theorem3_instance(seed, dim, &options_for(seed, dim, opts)) {
        Ok(inst) => {
            let mut out = verify_theorem3(&inst, seed, dim, &opts.tol);
            out.push(verify_forcing(&inst, seed, dim, &opts.tol));
            out.extend(verify_block_formulas(&inst, seed, &opts.tol));
            out
        }
        Err(e) => vec![run_cell(Suite::Thm3, "thm3", seed, dim, |_| Err(e))],
    }
}

/// `A = diag(1, −1, 0)`, `X = I`.
pub fn fixed(tol: &ToleranceContext) -> Vec<VerificationReport> {
    let inst = theorem3_default();
    let mut out: Vec<_> = verify_theorem3(&inst, 0, 3, tol).into_iter().map(|r| {
        let v = format!("default-{}", r.variant);
        r.with_variant(v)
    }).collect();
    let mut forced = inst.clone();
    forced.x = &forced.x + &CMatrix::unit(3, 0, 2).scale(c(1.0, 0.0));
    out.push(run_cell(Suite::Thm3, "thm3-default-forcing", 0, 3, |r| {
        let a = &inst.a;
        let aa = a.adjoint();
        let p = Pair::new(&aa, a);
        let y = triangle_power(&aa, a, &delta_power(&aa, a, &forced.x, 1)?, 1)?;
        r.concl(tol.check_zero("residual = 1", (y.fro_norm() - 1.0).abs(), 1.0));
        r.concl(pair_nonzero("X = I + e13 breaks the hypothesis", p, p, &forced.x, 1, 1, tol)?);
        Ok(())
    }));
    out.extend(verify_block_formulas(&inst, 0, tol).into_iter().map(|r| r.with_variant("default")));
    out
}
