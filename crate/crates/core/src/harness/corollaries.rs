//! Consequences of the product and perturbation results: isosymmetric
//! products, tensor products, and commuting nilpotent perturbations.

use num_complex::Complex64;

use super::{commutator_check, equal_check, order_label, pair_check, run_cell, Suite, VerificationReport};
use crate::classify::{minimal_order, OrderKind};
use crate::elementary::{as_superop, compose_mn, compose_scale, delta_power, triangle_power, ComposeOrder, Pair, SuperSpec};
use crate::error::{Error, Result};
use crate::generators::{certify_pair_orders, nilpotency_order, pick_kinds, retry, BlockAlgebra, GenOptions, Kind};
use crate::matrix::{c, CMatrix};
use crate::rng::Rng;
use crate::tolerance::{Residual, ToleranceContext};

/// Largest factor dimension for tensor-product cells.
pub const MAX_TENSOR_FACTOR_DIM: usize = 4;
/// Tensor dimension up to which the superoperator cross-check runs.
pub const MAX_SUPEROP_CHECK_DIM: usize = 8;

fn full_nil_coeffs(rng: &mut Rng, s: usize) -> Vec<Complex64> {
    (1..s).map(|_| rng.complex_in_annulus(0.3, 1.0)).collect()
}

fn min_order(kind: OrderKind, b: &CMatrix, a: &CMatrix, x: &CMatrix, tol: &ToleranceContext) -> Result<Option<usize>> {
    Ok(minimal_order(kind, b, a, x, 8, tol)?.order)
}

fn pair_of(alg: &BlockAlgebra, rng: &mut Rng, kind: Kind, depth: usize) -> (CMatrix, CMatrix) {
    let zero = vec![Vec::new(); alg.sizes().len()];
    let base = alg.element(&alg.kind_scalars(rng, kind), &zero);
    let a = &base + &alg.nilpotent(rng, depth);
    (base.adjoint(), a)
}

/// `[A,B] = [A,B*] = 0`, `A` `(m,n)`-isosymmetric, `B` `r`-isometric and `s`-symmetric.
#[derive(Debug, Clone)]
pub struct IsoProductInstance {
    pub a: CMatrix,
    pub b: CMatrix,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: usize,
}

/// Blocks carry a nilpotent part in at most one of `A`, `B`; `B` has
/// constant term `±1` on every block.
pub fn iso_product_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<IsoProductInstance> {
    retry("cor01", seed, |rng| {
        let alg = BlockAlgebra::random(rng, dim, 3, opts.conjugate);
        let kind = Kind::random(rng);
        let a_scalars = alg.kind_scalars(rng, kind);
        let b_scalars = alg.kind_scalars(rng, Kind::Signature);
        let (mut ac, mut bc) = (Vec::new(), Vec::new());
        for &s in alg.sizes() {
            if rng.coin() {
                ac.push(full_nil_coeffs(rng, s));
                bc.push(Vec::new());
            } else {
                ac.push(Vec::new());
                bc.push(full_nil_coeffs(rng, s));
            }
        }
        let a = alg.element(&a_scalars, &ac);
        let b = alg.element(&b_scalars, &bc);
        let i = CMatrix::identity(dim);
        let aa = a.adjoint();
        let Some((m, n)) = certify_pair_orders(Pair::new(&aa, &a), Pair::new(&aa, &a), &i, 6, &opts.tol)? else {
            return Ok(None);
        };
        let ba = b.adjoint();
        let (Some(r), Some(s)) = (min_order(OrderKind::Triangle, &ba, &b, &i, &opts.tol)?, min_order(OrderKind::Delta, &ba, &b, &i, &opts.tol)?) else {
            return Ok(None);
        };
        Ok(Some(IsoProductInstance { a, b, m, n, r, s }))
    })
}

/// `AB` is `(m+r−1, n+s−1)`-isosymmetric.
pub fn verify_iso_product(inst: &IsoProductInstance, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Corollaries, "cor01", seed, dim, |rep| {
        let (a, b) = (&inst.a, &inst.b);
        let (aa, ba) = (a.adjoint(), b.adjoint());
        let i = CMatrix::identity(dim);
        rep.hyp(commutator_check("[A,B]", a, b, tol)?);
        rep.hyp(commutator_check("[A,B*]", a, &ba, tol)?);
        rep.hyp(pair_check(order_label("A isosymmetric", inst.m, inst.n), Pair::new(&aa, a), Pair::new(&aa, a), &i, inst.m, inst.n, tol)?);
        rep.hyp(super::triangle_check(format!("Δ^{}_{{B*,B}}(I)", inst.r), Pair::new(&ba, b), &i, inst.r, tol)?);
        rep.hyp(super::delta_check(format!("δ^{}_{{B*,B}}(I)", inst.s), Pair::new(&ba, b), &i, inst.s, tol)?);
        let ab = a * b;
        let ab_adj = ab.adjoint();
        let (cm, cn) = (inst.m + inst.r - 1, inst.n + inst.s - 1);
        let p = Pair::new(&ab_adj, &ab);
        rep.concl(pair_check(order_label("AB isosymmetric", cm, cn), p, p, &i, cm, cn, tol)?);
        Ok(())
    })
}

/// Operands of the two-pair product corollary.
#[derive(Debug, Clone)]
pub struct PairProductInstance {
    pub a: [CMatrix; 2],
    pub b: [CMatrix; 2],
    pub s: [CMatrix; 2],
    pub t: [CMatrix; 2],
    pub x: CMatrix,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s_order: usize,
}

pub fn pair_product_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<PairProductInstance> {
    let depth = opts.depth();
    retry("cor02", seed, |rng| {
        let alg = BlockAlgebra::random(rng, dim, 3, opts.conjugate);
        let kinds = pick_kinds(rng, |k: &[Kind; 2]| k[0].kills_triangle() || k[1].kills_delta());
        let (b1, a1) = pair_of(&alg, rng, kinds[0], depth);
        let (b2, a2) = pair_of(&alg, rng, kinds[1], depth);
        let (s1, t1) = pair_of(&alg, rng, Kind::Unitary, depth);
        let (s2, t2) = pair_of(&alg, rng, Kind::SelfAdjoint, depth);
        let x = alg.operand(rng);
        let Some((m, n)) = certify_pair_orders(Pair::new(&b1, &a1), Pair::new(&b2, &a2), &x, 2 * depth, &opts.tol)? else {
            return Ok(None);
        };
        let (Some(r), Some(s_order)) =
            (min_order(OrderKind::Triangle, &s1, &t1, &x, &opts.tol)?, min_order(OrderKind::Delta, &s2, &t2, &x, &opts.tol)?)
        else {
            return Ok(None);
        };
        Ok(Some(PairProductInstance { a: [a1, a2], b: [b1, b2], s: [s1, s2], t: [t1, t2], x, m, n, r, s_order }))
    })
}

/// `((B1S1,A1T1),(B2S2,A2T2))` at `(m+r−1, n+s−1)`.
pub fn verify_pair_product(inst: &PairProductInstance, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Corollaries, "cor02", seed, dim, |rep| {
        let i = inst;
        for p in 0..2 {
            for q in 0..2 {
                rep.hyp(commutator_check(format!("[A{},T{}]", p + 1, q + 1), &i.a[p], &i.t[q], tol)?);
                rep.hyp(commutator_check(format!("[B{},S{}]", p + 1, q + 1), &i.b[p], &i.s[q], tol)?);
            }
        }
        rep.hyp(commutator_check("[S1,S2]", &i.s[0], &i.s[1], tol)?);
        rep.hyp(commutator_check("[B1,B2]", &i.b[0], &i.b[1], tol)?);
        rep.hyp(commutator_check("[A1,A2]", &i.a[0], &i.a[1], tol)?);
        let (o, inn) = (Pair::new(&i.b[0], &i.a[0]), Pair::new(&i.b[1], &i.a[1]));
        rep.hyp(pair_check(order_label("((B1,A1),(B2,A2))", i.m, i.n), o, inn, &i.x, i.m, i.n, tol)?);
        rep.hyp(super::triangle_check(format!("Δ^{}_{{S1,T1}}(X)", i.r), Pair::new(&i.s[0], &i.t[0]), &i.x, i.r, tol)?);
        rep.hyp(super::delta_check(format!("δ^{}_{{S2,T2}}(X)", i.s_order), Pair::new(&i.s[1], &i.t[1]), &i.x, i.s_order, tol)?);
        let prods = [0, 1].map(|k| (&i.b[k] * &i.s[k], &i.a[k] * &i.t[k]));
        let (cm, cn) = (i.m + i.r - 1, i.n + i.s_order - 1);
        let (po, pi) = (Pair::new(&prods[0].0, &prods[0].1), Pair::new(&prods[1].0, &prods[1].1));
        rep.concl(pair_check(order_label("((B1S1,A1T1),(B2S2,A2T2))", cm, cn), po, pi, &i.x, cm, cn, tol)?);
        Ok(())
    })
}

/// Factor pairs `(E_i,F_i)`, `(P_i,Q_i)` and operand `X` for the tensor corollary.
#[derive(Debug, Clone)]
pub struct TensorInstance {
    pub e: [CMatrix; 2],
    pub f: [CMatrix; 2],
    pub p: [CMatrix; 2],
    pub q: [CMatrix; 2],
    pub x: CMatrix,
    /// `[m1, n1, r1, n2, m2, s1, r2, s2]`
    pub orders: [usize; 8],
}

impl TensorInstance {
    pub fn conclusion(&self) -> (usize, usize) {
        let [m1, n1, r1, n2, m2, s1, r2, s2] = self.orders;
        (m1.max(m2) + r1.max(r2) - 1, n1.max(n2) + s1.max(s2) - 1)
    }
}

fn lifted_ok(i: &TensorInstance, tol: &ToleranceContext) -> Result<bool> {
    Ok(lifted_checks(i, tol)?.iter().all(|r| r.pass))
}

/// The two hypotheses of the product theorem on `X ⊗ X` that are not plain
/// tensor factors of the stated ones.
fn lifted_checks(i: &TensorInstance, tol: &ToleranceContext) -> Result<[Residual; 2]> {
    let [_, _, r1, n2, m2, s1, _, _] = i.orders;
    let lhs = delta_power(&i.e[1], &i.f[1], &i.x, n2)?.kron(&triangle_power(&i.p[0], &i.q[0], &i.x, r1)?)?;
    let rhs = triangle_power(&i.e[0], &i.f[0], &i.x, m2)?.kron(&delta_power(&i.p[1], &i.q[1], &i.x, s1)?)?;
    let s3 = compose_scale(Pair::new(&i.p[0], &i.q[0]), Pair::new(&i.e[1], &i.f[1]), &i.x, r1, n2)? * i.x.fro_norm();
    let s4 = compose_scale(Pair::new(&i.e[0], &i.f[0]), Pair::new(&i.p[1], &i.q[1]), &i.x, m2, s1)? * i.x.fro_norm();
    Ok([
        tol.check_zero(format!("δ^{n2}_{{E2,F2}}(X) ⊗ Δ^{r1}_{{P1,Q1}}(X)"), lhs.fro_norm(), s3),
        tol.check_zero(format!("Δ^{m2}_{{E1,F1}}(X) ⊗ δ^{s1}_{{P2,Q2}}(X)"), rhs.fro_norm(), s4),
    ])
}

pub fn tensor_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<TensorInstance> {
    let bd = dim.min(MAX_TENSOR_FACTOR_DIM);
    let depth = opts.depth();
    retry("cor03", seed, |rng| {
        let alg = BlockAlgebra::random(rng, bd, 2, opts.conjugate);
        // E1, E2, P1, P2
        let k = pick_kinds(rng, |k: &[Kind; 4]| {
            (k[1].kills_delta() || k[2].kills_triangle()) && (k[0].kills_triangle() || k[3].kills_delta())
        });
        let (e1, f1) = pair_of(&alg, rng, k[0], depth);
        let (e2, f2) = pair_of(&alg, rng, k[1], depth);
        let (p1, q1) = pair_of(&alg, rng, k[2], depth);
        let (p2, q2) = pair_of(&alg, rng, k[3], depth);
        let x = alg.operand(rng);
        let kmax = 2 * depth;
        let certify = |o: (&CMatrix, &CMatrix), i: (&CMatrix, &CMatrix)| {
            certify_pair_orders(Pair::new(o.0, o.1), Pair::new(i.0, i.1), &x, kmax, &opts.tol)
        };
        let (Some((m1, n1)), Some((r1, n2)), Some((m2, s1)), Some((r2, s2))) = (
            certify((&e1, &f1), (&e2, &f2))?,
            certify((&p1, &q1), (&e2, &f2))?,
            certify((&e1, &f1), (&p2, &q2))?,
            certify((&p1, &q1), (&p2, &q2))?,
        ) else {
            return Ok(None);
        };
        let inst = TensorInstance { e: [e1, e2], f: [f1, f2], p: [p1, p2], q: [q1, q2], x, orders: [m1, n1, r1, n2, m2, s1, r2, s2] };
        Ok(lifted_ok(&inst, &opts.tol)?.then_some(inst))
    })
}

pub fn verify_tensor(inst: &TensorInstance, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Corollaries, "cor03", seed, dim, |rep| {
        let i = inst;
        let [m1, n1, r1, n2, m2, s1, r2, s2] = i.orders;
        rep.hyp(commutator_check("[E1,E2]", &i.e[0], &i.e[1], tol)?);
        rep.hyp(commutator_check("[F1,F2]", &i.f[0], &i.f[1], tol)?);
        let e1 = Pair::new(&i.e[0], &i.f[0]);
        let e2 = Pair::new(&i.e[1], &i.f[1]);
        let p1 = Pair::new(&i.p[0], &i.q[0]);
        let p2 = Pair::new(&i.p[1], &i.q[1]);
        rep.hyp(pair_check(order_label("((E1,F1),(E2,F2))", m1, n1), e1, e2, &i.x, m1, n1, tol)?);
        rep.hyp(pair_check(order_label("((P1,Q1),(E2,F2))", r1, n2), p1, e2, &i.x, r1, n2, tol)?);
        rep.hyp(pair_check(order_label("((E1,F1),(P2,Q2))", m2, s1), e1, p2, &i.x, m2, s1, tol)?);
        rep.hyp(pair_check(order_label("((P1,Q1),(P2,Q2))", r2, s2), p1, p2, &i.x, r2, s2, tol)?);
        for r in lifted_checks(i, tol)? {
            rep.hyp(r);
        }
        let kron = |a: &CMatrix, b: &CMatrix| a.kron(b);
        let (b1, a1) = (kron(&i.e[0], &i.p[0])?, kron(&i.f[0], &i.q[0])?);
        let (b2, a2) = (kron(&i.e[1], &i.p[1])?, kron(&i.f[1], &i.q[1])?);
        let xx = kron(&i.x, &i.x)?;
        let (cm, cn) = i.conclusion();
        let (o, inn) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));
        rep.concl(pair_check(order_label("tensor pairs on X⊗X", cm, cn), o, inn, &xx, cm, cn, tol)?);
        if xx.dim() <= MAX_SUPEROP_CHECK_DIM {
            let direct = compose_mn(o, inn, &xx, cm, cn, ComposeOrder::TriangleFirstOutside)?;
            let sup = as_superop(SuperSpec::ComposeMn { outer: o, inner: inn, m: cm, n: cn })?.apply(&xx)?;
            rep.diag(equal_check("superoperator = direct", &sup, &direct, compose_scale(o, inn, &xx, cm, cn)?, tol));
        }
        Ok(())
    })
}

/// `S, T` with `[S,T] = 0` and the common order `n`.
#[derive(Debug, Clone)]
pub struct TensorIsoInstance {
    pub s: CMatrix,
    pub t: CMatrix,
    pub n: usize,
}

/// Stated and lifted hypotheses of the tensor-isosymmetry corollary at common order `n`.
pub fn tensor_iso_hypotheses(s: &CMatrix, t: &CMatrix, n: usize, tol: &ToleranceContext) -> Result<Vec<Residual>> {
    let i = CMatrix::identity(s.dim());
    let (sa, ta) = (s.adjoint(), t.adjoint());
    let (ps, pt) = (Pair::new(&sa, s), Pair::new(&ta, t));
    let mut out = vec![
        pair_check(order_label("((S*,S),(S*,S))", n, n), ps, ps, &i, n, n, tol)?,
        pair_check(order_label("((T*,T),(T*,T))", n, n), pt, pt, &i, n, n, tol)?,
        pair_check(order_label("((T*,T),(S*,S))", n, n), pt, ps, &i, n, n, tol)?,
        pair_check(order_label("((S*,S),(T*,T))", n, n), ps, pt, &i, n, n, tol)?,
    ];
    let lifted = [
        (delta_power(&sa, s, &i, n)?.kron(&triangle_power(&ta, t, &i, n)?)?, compose_scale(pt, ps, &i, n, n)?),
        (triangle_power(&sa, s, &i, n)?.kron(&delta_power(&ta, t, &i, n)?)?, compose_scale(ps, pt, &i, n, n)?),
    ];
    for (k, (v, sc)) in lifted.iter().enumerate() {
        let label = if k == 0 { format!("δ^{n}_{{S*,S}}(I) ⊗ Δ^{n}_{{T*,T}}(I)") } else { format!("Δ^{n}_{{S*,S}}(I) ⊗ δ^{n}_{{T*,T}}(I)") };
        out.push(tol.check_zero(label, v.fro_norm(), sc * i.fro_norm()));
    }
    Ok(out)
}

pub fn tensor_iso_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<TensorIsoInstance> {
    let bd = dim.min(MAX_TENSOR_FACTOR_DIM);
    let depth = opts.depth();
    retry("cor04", seed, |rng| {
        let alg = BlockAlgebra::random(rng, bd, 2, opts.conjugate);
        let k = pick_kinds(rng, |k: &[Kind; 2]| {
            (k[0].kills_delta() || k[1].kills_triangle()) && (k[0].kills_triangle() || k[1].kills_delta())
        });
        let s = alg.kind_element(rng, k[0], depth);
        let t = alg.kind_element(rng, k[1], depth);
        for n in 1..=4 {
            if tensor_iso_hypotheses(&s, &t, n, &opts.tol)?.iter().all(|r| r.pass) {
                return Ok(Some(TensorIsoInstance { s, t, n }));
            }
        }
        Ok(None)
    })
}

/// `Δ^{2n−1}(δ^{2n−1}(I⊗I)) = 0` for the pair `(S*⊗T*, S⊗T)`.
pub fn verify_tensor_iso(inst: &TensorIsoInstance, id: &str, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Corollaries, id, seed, dim, |rep| {
        let (s, t, n) = (&inst.s, &inst.t, inst.n);
        rep.hyp(commutator_check("[S,T]", s, t, tol)?);
        for r in tensor_iso_hypotheses(s, t, n, tol)? {
            rep.hyp(r);
        }
        let st = s.kron(t)?;
        let st_adj = st.adjoint();
        let ii = CMatrix::identity(st.dim());
        let k = 2 * n - 1;
        let p = Pair::new(&st_adj, &st);
        rep.concl(pair_check(order_label("(S*⊗T*, S⊗T)", k, k), p, p, &ii, k, k, tol)?);
        Ok(())
    })
}

/// `A + N` with `[A,N] = 0 = N^{n1}`.
#[derive(Debug, Clone)]
pub struct NilPerturbInstance {
    pub a: CMatrix,
    pub nil: CMatrix,
    pub x: CMatrix,
    pub m: usize,
    pub n: usize,
    pub n1: usize,
}

pub fn nil_perturb_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<NilPerturbInstance> {
    let depth = opts.depth();
    retry("cor05", seed, |rng| {
        let alg = BlockAlgebra::random(rng, dim, 3, opts.conjugate);
        let kind = Kind::random(rng);
        let a = alg.kind_element(rng, kind, depth);
        let nil_depth = 1 + rng.below(3);
        let nil = alg.nilpotent(rng, nil_depth);
        let weights: Vec<Complex64> = alg.sizes().iter().map(|_| c(rng.uniform_in(0.5, 1.5), 0.0)).collect();
        let zero = vec![Vec::new(); alg.sizes().len()];
        let x = alg.element(&weights, &zero);
        let aa = a.adjoint();
        let Some((m, n)) = certify_pair_orders(Pair::new(&aa, &a), Pair::new(&aa, &a), &x, 2 * depth + 1, &opts.tol)? else {
            return Ok(None);
        };
        let Some(n1) = nilpotency_order(&nil, &opts.tol) else {
            return Ok(None);
        };
        Ok(Some(NilPerturbInstance { a, nil, x, m, n, n1 }))
    })
}

/// `A + N` is `(X,(m+2n1−2, n+2n1−2))`-isosymmetric.
pub fn verify_nil_perturb(inst: &NilPerturbInstance, id: &str, seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Corollaries, id, seed, dim, |rep| {
        let i = inst;
        rep.hyp(commutator_check("[A,N]", &i.a, &i.nil, tol)?);
        rep.hyp(tol.check_zero(format!("N^{} = 0", i.n1), i.nil.pow(i.n1).fro_norm(), i.nil.fro_norm().powi(i.n1 as i32).max(f64::MIN_POSITIVE)));
        let aa = i.a.adjoint();
        let p = Pair::new(&aa, &i.a);
        rep.hyp(pair_check(order_label("A isosymmetric", i.m, i.n), p, p, &i.x, i.m, i.n, tol)?);
        let an = &i.a + &i.nil;
        let an_adj = an.adjoint();
        let (cm, cn) = (i.m + 2 * i.n1 - 2, i.n + 2 * i.n1 - 2);
        let q = Pair::new(&an_adj, &an);
        rep.concl(pair_check(order_label("A + N isosymmetric", cm, cn), q, q, &i.x, cm, cn, tol)?);
        Ok(())
    })
}

fn or_fail<T>(r: Result<T>, id: &str, seed: u64, dim: usize, f: impl FnOnce(T) -> VerificationReport) -> VerificationReport {
    match r {
        Ok(v) => f(v),
        Err(e) => run_cell(Suite::Corollaries, id, seed, dim, |_| Err(e)),
    }
}

pub fn run(seed: u64, dim: usize, opts: &GenOptions) -> Vec<VerificationReport> {
    let tol = &opts.tol;
    vec![
        or_fail(iso_product_instance(seed, dim, opts), "cor01", seed, dim, |i| verify_iso_product(&i, seed, dim, tol)),
        or_fail(pair_product_instance(seed, dim, opts), "cor02", seed, dim, |i| verify_pair_product(&i, seed, dim, tol)),
        or_fail(tensor_instance(seed, dim, opts), "cor03", seed, dim, |i| verify_tensor(&i, seed, dim, tol)),
        or_fail(tensor_iso_instance(seed, dim, opts), "cor04", seed, dim, |i| verify_tensor_iso(&i, "cor04", seed, dim, tol)),
        or_fail(nil_perturb_instance(seed, dim, opts), "cor05", seed, dim, |i| verify_nil_perturb(&i, "cor05", seed, dim, tol)),
    ]
}

pub fn jordan_tensor() -> TensorIsoInstance {
    let j = CMatrix::from_real(2, &[1.0, 1.0, 0.0, 1.0]);
    TensorIsoInstance { s: j.clone(), t: j, n: 3 }
}

pub fn fixed(tol: &ToleranceContext) -> Vec<VerificationReport> {
    let sig = CMatrix::real_diag(&[1.0, -1.0]);
    let jordan_nil = NilPerturbInstance {
        a: CMatrix::identity(2),
        nil: CMatrix::unit(2, 0, 1).scale(c(0.7, 0.0)),
        x: CMatrix::identity(2),
        m: 1,
        n: 1,
        n1: 2,
    };
    vec![
        verify_tensor_iso(&jordan_tensor(), "cor04-jordan", 0, 2, tol),
        verify_tensor_iso(&TensorIsoInstance { s: sig.clone(), t: sig, n: 1 }, "cor04-signature", 0, 2, tol),
        verify_nil_perturb(&jordan_nil, "cor05-jordan", 0, 2, tol),
    ]
}

/// Smallest common order at which every stated and lifted hypothesis holds.
pub fn minimal_tensor_iso_order(s: &CMatrix, t: &CMatrix, bound: usize, tol: &ToleranceContext) -> Result<Option<usize>> {
    if bound == 0 {
        return Err(Error::InvalidParam("bound must be positive".into()));
    }
    for n in 1..=bound {
        if tensor_iso_hypotheses(s, t, n, tol)?.iter().all(|r| r.pass) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::Verdict;

    #[test]
    fn fixed_cells_pass() {
        for r in fixed(&ToleranceContext::default()) {
            assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
        }
    }

    #[test]
    fn jordan_needs_order_three() {
        let j = jordan_tensor();
        assert_eq!(minimal_tensor_iso_order(&j.s, &j.t, 5, &ToleranceContext::default()).unwrap(), Some(3));
    }

    #[test]
    fn random_cells_pass() {
        let opts = GenOptions::default();
        for seed in 0..4 {
            for dim in [2, 4] {
                for r in run(seed, dim, &opts) {
                    assert_eq!(r.verdict, Verdict::Pass, "{r:#?}");
                }
            }
        }
    }
}
