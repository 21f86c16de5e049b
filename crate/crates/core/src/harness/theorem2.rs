//! Perturbation of left-`(X,(m,n))`-symmetric pairs by commuting nilpotents.

use super::{commutator_check, equal_check, order_label, pair_check, pair_nonzero, run_cell, Suite, VerificationReport};
use crate::elementary::{binomial, delta_power, delta_weight, triangle_power, triangle_weight, Pair};
use crate::error::Result;
use crate::generators::{
    nilpotency_order, retry, theorem2_instance, BlockAlgebra, GenOptions, Kind, Theorem2Instance,
};
use crate::matrix::{c, CMatrix};
use crate::rng::Rng;
use crate::tolerance::{Residual, ToleranceContext};

fn nil_check(label: &str, m: &CMatrix, k: usize, tol: &ToleranceContext) -> Residual {
    tol.check_zero(format!("{label}^{k} = 0"), m.pow(k).fro_norm(), m.fro_norm().powi(k as i32).max(f64::MIN_POSITIVE))
}

pub fn verify_theorem2(inst: &Theorem2Instance, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Thm2, "thm2", seed, dim, |r| {
        let i = inst;
        r.hyp(commutator_check("[A1,A2]", &i.a[0], &i.a[1], tol)?);
        r.hyp(commutator_check("[B1,B2]", &i.b[0], &i.b[1], tol)?);
        r.hyp(commutator_check("[M1,M2]", &i.mm[0], &i.mm[1], tol)?);
        r.hyp(commutator_check("[N1,N2]", &i.nn[0], &i.nn[1], tol)?);
        for k in 0..2 {
            r.hyp(commutator_check(format!("[A{0},M{0}]", k + 1), &i.a[k], &i.mm[k], tol)?);
            r.hyp(commutator_check(format!("[B{0},N{0}]", k + 1), &i.b[k], &i.nn[k], tol)?);
        }
        r.hyp(nil_check("M1", &i.mm[0], i.nil.m1, tol));
        r.hyp(nil_check("N1", &i.nn[0], i.nil.n1, tol));
        r.hyp(nil_check("M2", &i.mm[1], i.nil.m2, tol));
        r.hyp(nil_check("N2", &i.nn[1], i.nil.n2, tol));
        let (o, inn) = (Pair::new(&i.b[0], &i.a[0]), Pair::new(&i.b[1], &i.a[1]));
        r.hyp(pair_check(order_label("((B1,A1),(B2,A2))", i.m, i.n), o, inn, &i.x, i.m, i.n, tol)?);

        let (cm, cn) = i.conclusion();
        let [(b1, a1), (b2, a2)] = i.perturbed();
        let (po, pi) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));
        r.concl(pair_check(order_label("((B1+N1,A1+M1),(B2+N2,A2+M2))", cm, cn), po, pi, &i.x, cm, cn, tol)?);
        if cm > 1 {
            r.diag(pair_check(order_label("one lower outer", cm - 1, cn), po, pi, &i.x, cm - 1, cn, tol)?);
        }
        if cn > 1 {
            r.diag(pair_check(order_label("one lower inner", cm, cn - 1), po, pi, &i.x, cm, cn - 1, tol)?);
        }
        Ok(())
    })
}

/// Operands for the partial-commutation remark: the first pair and its
/// perturbations live in one block algebra, the second pair in another,
/// differently conjugated one.
#[derive(Debug, Clone)]
pub struct PartialInstance {
    pub a: [CMatrix; 2],
    pub b: [CMatrix; 2],
    pub mm: [CMatrix; 2],
    pub nn: [CMatrix; 2],
    pub x: CMatrix,
    pub m: usize,
    pub n: usize,
    pub nil: [usize; 4],
}

pub fn partial_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<PartialInstance> {
    let depth = opts.max_order.clamp(1, 2);
    retry("thm2-partial", seed, |rng| {
        let alg1 = BlockAlgebra::random(rng, dim, 3, true);
        let alg2 = BlockAlgebra::random(rng, dim, 3, true);
        let zero1 = vec![Vec::new(); alg1.sizes().len()];
        let zero2 = vec![Vec::new(); alg2.sizes().len()];
        let base1 = alg1.element(&alg1.kind_scalars(rng, Kind::Unitary), &zero1);
        let a1 = &base1 + &alg1.nilpotent(rng, depth);
        let kind2 = Kind::random(rng);
        let base2 = alg2.element(&alg2.kind_scalars(rng, kind2), &zero2);
        let a2 = &base2 + &alg2.nilpotent(rng, depth);
        let (b1, b2) = (base1.adjoint(), base2.adjoint());
        let t: [usize; 4] = std::array::from_fn(|_| 1 + rng.below(3));
        let mm = [alg1.nilpotent(rng, t[0]), alg2.nilpotent(rng, t[2])];
        let nn = [alg1.nilpotent(rng, t[1]).adjoint(), alg2.nilpotent(rng, t[3]).adjoint()];
        let x = alg1.operand(rng);
        let nil = [&mm[0], &nn[0], &mm[1], &nn[1]].map(|z| nilpotency_order(z, &opts.tol));
        let [Some(m1), Some(n1), Some(m2), Some(n2)] = nil else {
            return Ok(None);
        };
        let Some(m) = (1..=2 * depth).find(|&k| {
            let y = triangle_power(&b1, &a1, &x, k).expect("dims agree");
            opts.tol.is_zero(y.fro_norm(), crate::elementary::triangle_scale(Pair::new(&b1, &a1), &x, k).unwrap_or(0.0))
        }) else {
            return Ok(None);
        };
        Ok(Some(PartialInstance {
            a: [a1, a2],
            b: [b1, b2],
            mm,
            nn,
            x,
            m,
            n: 1 + rng.below(2),
            nil: [m1, n1, m2, n2],
        }))
    })
}

/// With only `[A_i,M_i] = [B_i,N_i] = 0`: `δ^{n+m2+n2−2}(Δ^{m+m1+n1−2}(X)) = 0`.
pub fn verify_partial(inst: &PartialInstance, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Thm2, "thm2-partial", seed, dim, |r| {
        let i = inst;
        for k in 0..2 {
            r.hyp(commutator_check(format!("[A{0},M{0}]", k + 1), &i.a[k], &i.mm[k], tol)?);
            r.hyp(commutator_check(format!("[B{0},N{0}]", k + 1), &i.b[k], &i.nn[k], tol)?);
        }
        let [m1, n1, m2, n2] = i.nil;
        for (label, z, k) in [("M1", &i.mm[0], m1), ("N1", &i.nn[0], n1), ("M2", &i.mm[1], m2), ("N2", &i.nn[1], n2)] {
            r.hyp(nil_check(label, z, k, tol));
        }
        let (o, inn) = (Pair::new(&i.b[0], &i.a[0]), Pair::new(&i.b[1], &i.a[1]));
        let y = triangle_power(&i.b[0], &i.a[0], &i.x, i.m)?;
        let y = delta_power(&i.b[1], &i.a[1], &y, i.n)?;
        let scale = i.x.fro_norm() * triangle_weight(o, i.m)? * delta_weight(inn, i.n)?;
        r.hyp(tol.check_zero(format!("δ^{}(Δ^{}(X))", i.n, i.m), y.fro_norm(), scale));
        r.diag(commutator_check("[A1,A2]", &i.a[0], &i.a[1], tol)?);

        let (cm, cn) = (i.m + m1 + n1 - 2, i.n + m2 + n2 - 2);
        let p1 = (&i.b[0] + &i.nn[0], &i.a[0] + &i.mm[0]);
        let p2 = (&i.b[1] + &i.nn[1], &i.a[1] + &i.mm[1]);
        let (po, pi) = (Pair::new(&p1.0, &p1.1), Pair::new(&p2.0, &p2.1));
        let z = triangle_power(&p1.0, &p1.1, &i.x, cm)?;
        let z = delta_power(&p2.0, &p2.1, &z, cn)?;
        let scale = i.x.fro_norm() * triangle_weight(po, cm)? * delta_weight(pi, cn)?;
        r.concl(tol.check_zero(format!("δ^{cn}(Δ^{cm}(X)) perturbed"), z.fro_norm(), scale));
        let w = delta_power(&p2.0, &p2.1, &i.x, cn)?;
        let w = triangle_power(&p1.0, &p1.1, &w, cm)?;
        r.diag(tol.check_zero(format!("Δ^{cm}(δ^{cn}(X)) perturbed"), w.fro_norm(), scale));
        Ok(())
    })
}

/// `A1 = B1 = I`, `M1 = N1 = e12` in dimension 2: the conclusion order `m + m1 + n1 − 2`
/// cannot be lowered.
pub fn verify_sharp(seed: u64, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Thm2, "thm2-sharp", seed, 2, |r| {
        let mut rng = Rng::derived(seed, 0x5a);
        let mut g = || CMatrix::from_fn(2, |_, _| rng.complex_gaussian());
        let (b2, a2, x) = (g(), g(), g());
        let i = CMatrix::identity(2);
        let e = CMatrix::unit(2, 0, 1);
        r.hyp(pair_check("((I,I),(B2,A2)) at (1,1)", Pair::new(&i, &i), Pair::new(&b2, &a2), &x, 1, 1, tol)?);
        r.hyp(nil_check("M1", &e, 2, tol));
        let p = &i + &e;
        let (po, pi) = (Pair::new(&p, &p), Pair::new(&b2, &a2));
        r.concl(pair_check("perturbed at (3,1)", po, pi, &x, 3, 1, tol)?);
        r.concl(pair_nonzero("perturbed at (2,1) nonzero", po, pi, &x, 2, 1, tol)?);
        Ok(())
    })
}

/// `Δ^K_{B,A+N} = Σ_j C(K,j)(L_B R_N)^j Δ^{K−j}_{B,A}` and
/// `δ^K_{B,A+N} = Σ_j (−1)^j C(K,j) R_N^j δ^{K−j}_{B,A}` for commuting `A, N`.
pub fn verify_expansion(seed: u64, dim: usize, count: usize, max_order: usize, rtol: f64) -> VerificationReport {
    run_cell(Suite::Thm2, "thm2-expansion", seed, dim, |r| {
        let tol = ToleranceContext { atol: 1e-14, rtol };
        let mut rng = Rng::derived(seed, 0x2e);
        for idx in 0..count {
            let alg = BlockAlgebra::random(&mut rng, dim, 3, true);
            let kind = Kind::random(&mut rng);
            let a = alg.kind_element(&mut rng, kind, 2);
            let n = alg.nilpotent(&mut rng, 2).scale(c(rng.uniform_in(0.5, 1.5), 0.0));
            let b = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian().scale(0.5));
            let x = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
            let k = 1 + rng.below(max_order);
            let an = &a + &n;
            let (bp, np) = (b.powers(k), n.powers(k));
            let mut tsum = CMatrix::zeros(dim);
            let mut dsum = CMatrix::zeros(dim);
            let (mut tw, mut dw) = (0.0, 0.0);
            for j in 0..=k {
                let cb = binomial(k, j)? as f64;
                let tj = triangle_power(&b, &a, &x, k - j)?;
                tsum = &tsum + &(&(&bp[j] * &tj) * &np[j]).scale_real(cb);
                tw += cb * bp[j].spectral_norm() * np[j].spectral_norm() * triangle_weight(Pair::new(&b, &a), k - j)?;
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let dj = delta_power(&b, &a, &x, k - j)?;
                dsum = &dsum + &(&dj * &np[j]).scale_real(sign * cb);
                dw += cb * np[j].spectral_norm() * delta_weight(Pair::new(&b, &a), k - j)?;
            }
            let xn = x.fro_norm();
            r.concl(equal_check(format!("#{idx} Δ^{k} expansion"), &triangle_power(&b, &an, &x, k)?, &tsum, tw * xn, &tol));
            r.concl(equal_check(format!("#{idx} δ^{k} expansion"), &delta_power(&b, &an, &x, k)?, &dsum, dw * xn, &tol));
        }
        Ok(())
    })
}

pub fn run(seed: u64, dim: usize, opts: &GenOptions) -> Vec<VerificationReport> {
    let mut out = vec![match theorem2_instance(seed, dim, opts) {
        Ok(inst) => verify_theorem2(&inst, seed, dim, &opts.tol),
        Err(e) => run_cell(Suite::Thm2, "thm2", seed, dim, |_| Err(e)),
    }];
    out.push(match partial_instance(seed, dim, opts) {
        Ok(inst) => verify_partial(&inst, seed, dim, &opts.tol),
        Err(e) => run_cell(Suite::Thm2, "thm2-partial", seed, dim, |_| Err(e)),
    });
    out.push(verify_expansion(seed, dim, 10, 4, 1e-10));
    out
}

pub fn fixed(tol: &ToleranceContext) -> Vec<VerificationReport> {
    vec![verify_sharp(0, tol)]
}
