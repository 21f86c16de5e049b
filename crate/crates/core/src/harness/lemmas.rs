//! Ascent, inversion, powers and commutation lemmas, plus the evaluation
//! oracles they rely on.

use super::{
    commutator_check, delta_check, equal_check, order_label, pair_check, run_cell, triangle_check, Suite, VerificationReport,
};
use crate::classify::{minimal_order, OrderKind};
use crate::elementary::{
    as_superop, compose_mn, delta_apply, delta_power, delta_scale, delta_weight, triangle_apply, triangle_power, triangle_scale,
    triangle_weight, binomial, compose_scale, ComposeOrder, Pair, SuperSpec,
};
use crate::error::Result;
use crate::generators::{
    certify_pair_orders, isometry_plus_nilpotent_instance, jordan_block, mr_symmetric_instance, pick_kinds, retry, BlockAlgebra,
    GenOptions, Kind,
};
use crate::matrix::{c, CMatrix};
use crate::rng::Rng;
use crate::tolerance::{Residual, ToleranceContext};

/// Number of orders past the hypothesis order checked by the ascent lemma.
pub const ASCENT: usize = 3;

/// Operands for the single-pair and pair-of-pairs lemmas, all invertible and
/// drawn from one block algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaBundle {
    pub x: CMatrix,
    /// `(B, A)` with `Δ^m_{B,A}(X) = 0`.
    pub iso: [CMatrix; 2],
    pub m: usize,
    /// `(B, A)` with `δ^n_{B,A}(X) = 0`.
    pub sym: [CMatrix; 2],
    pub n: usize,
    /// `[B1, A1, B2, A2]`, left-`(X,(pm, pn))`-symmetric.
    pub pair: [CMatrix; 4],
    pub pm: usize,
    pub pn: usize,
}

impl LemmaBundle {
    /// Everything the identity: every order is 1.
    pub fn identity(dim: usize) -> Self {
        let i = CMatrix::identity(dim);
        LemmaBundle {
            x: i.clone(),
            iso: [i.clone(), i.clone()],
            m: 1,
            sym: [i.clone(), i.clone()],
            n: 1,
            pair: [i.clone(), i.clone(), i.clone(), i],
            pm: 1,
            pn: 1,
        }
    }

    pub fn random(seed: u64, dim: usize, opts: &GenOptions) -> Result<Self> {
        let depth = opts.depth();
        let kmax = (2 * depth - 1).min(opts.max_order).max(1);
        retry("lemmas", seed, |rng| {
            let alg = BlockAlgebra::random(rng, dim, depth, opts.conjugate);
            let x = alg.operand(rng);
            let u = alg.kind_element(rng, Kind::Unitary, depth);
            let h = alg.kind_element(rng, Kind::SelfAdjoint, depth);
            let kinds = pick_kinds(rng, |k: &[Kind; 2]| k[0].kills_triangle() || k[1].kills_delta());
            let a1 = alg.kind_element(rng, kinds[0], depth);
            let a2 = alg.kind_element(rng, kinds[1], depth);
            let (ub, hb) = (u.adjoint(), h.adjoint());
            let m = minimal_order(OrderKind::Triangle, &ub, &u, &x, kmax, &opts.tol)?.order;
            let n = minimal_order(OrderKind::Delta, &hb, &h, &x, kmax, &opts.tol)?.order;
            let (b1, b2) = (a1.adjoint(), a2.adjoint());
            let p = certify_pair_orders(Pair::new(&b1, &a1), Pair::new(&b2, &a2), &x, kmax, &opts.tol)?;
            let (Some(m), Some(n), Some((pm, pn))) = (m, n, p) else {
                return Ok(None);
            };
            Ok(Some(LemmaBundle { x, iso: [ub, u], m, sym: [hb, h], n, pair: [b1, a1, b2, a2], pm, pn }))
        })
    }

    fn iso_pair(&self) -> Pair<'_> {
        Pair::new(&self.iso[0], &self.iso[1])
    }

    fn sym_pair(&self) -> Pair<'_> {
        Pair::new(&self.sym[0], &self.sym[1])
    }
}

fn single_hypotheses(r: &mut VerificationReport, b: &LemmaBundle, tol: &ToleranceContext) -> Result<()> {
    r.hyp(triangle_check(format!("Δ^{}(X)", b.m), b.iso_pair(), &b.x, b.m, tol)?);
    r.hyp(delta_check(format!("δ^{}(X)", b.n), b.sym_pair(), &b.x, b.n, tol)?);
    Ok(())
}

fn pair_hypotheses(r: &mut VerificationReport, b: &LemmaBundle, tol: &ToleranceContext) -> Result<()> {
    let [b1, a1, b2, a2] = &b.pair;
    r.hyp(commutator_check("[A1,A2]", a1, a2, tol)?);
    r.hyp(commutator_check("[B1,B2]", b1, b2, tol)?);
    r.hyp(pair_check(order_label("pair", b.pm, b.pn), Pair::new(b1, a1), Pair::new(b2, a2), &b.x, b.pm, b.pn, tol)?);
    Ok(())
}

/// One report per lemma for `bundle`.
pub fn verify_lemmas(bundle: &LemmaBundle, seed: u64, dim: usize, tol: &ToleranceContext) -> Vec<VerificationReport> {
    let b = bundle;
    let mut out = Vec::new();

    out.push(run_cell(Suite::Lemmas, "lem0-ascent", seed, dim, |r| {
        single_hypotheses(r, b, tol)?;
        for t in b.m + 1..=b.m + ASCENT {
            r.concl(triangle_check(format!("Δ^{t}(X)"), b.iso_pair(), &b.x, t, tol)?);
        }
        for t in b.n + 1..=b.n + ASCENT {
            r.concl(delta_check(format!("δ^{t}(X)"), b.sym_pair(), &b.x, t, tol)?);
        }
        Ok(())
    }));

    out.push(run_cell(Suite::Lemmas, "lem0-inverse", seed, dim, |r| {
        single_hypotheses(r, b, tol)?;
        let (bi, ai) = (b.iso[0].inverse()?, b.iso[1].inverse()?);
        r.concl(triangle_check(format!("Δ^{}_(B⁻¹,A⁻¹)(X)", b.m), Pair::new(&bi, &ai), &b.x, b.m, tol)?);
        let (bi, ai) = (b.sym[0].inverse()?, b.sym[1].inverse()?);
        r.concl(delta_check(format!("δ^{}_(B⁻¹,A⁻¹)(X)", b.n), Pair::new(&bi, &ai), &b.x, b.n, tol)?);
        Ok(())
    }));

    out.push(run_cell(Suite::Lemmas, "lem1", seed, dim, |r| {
        pair_hypotheses(r, b, tol)?;
        let inv: Vec<CMatrix> = b.pair.iter().map(CMatrix::inverse).collect::<Result<_>>()?;
        let label = order_label("inverse pair", b.pm, b.pn);
        r.concl(pair_check(label, Pair::new(&inv[0], &inv[1]), Pair::new(&inv[2], &inv[3]), &b.x, b.pm, b.pn, tol)?);
        Ok(())
    }));

    out.push(run_cell(Suite::Lemmas, "lem2", seed, dim, |r| {
        single_hypotheses(r, b, tol)?;
        for k in 2..=4 {
            let (bk, ak) = (b.iso[0].pow(k), b.iso[1].pow(k));
            r.concl(triangle_check(format!("Δ^{}_(B^{k},A^{k})(X)", b.m), Pair::new(&bk, &ak), &b.x, b.m, tol)?);
            let (bk, ak) = (b.sym[0].pow(k), b.sym[1].pow(k));
            r.concl(delta_check(format!("δ^{}_(B^{k},A^{k})(X)", b.n), Pair::new(&bk, &ak), &b.x, b.n, tol)?);
        }
        Ok(())
    }));

    out.push(run_cell(Suite::Lemmas, "lem3", seed, dim, |r| {
        let (outer, inner) = (b.iso_pair(), b.sym_pair());
        r.hyp(commutator_check("[A1,A2]", outer.a, inner.a, tol)?);
        r.hyp(commutator_check("[B1,B2]", outer.b, inner.b, tol)?);
        single_hypotheses(r, b, tol)?;
        for k in 1..=ASCENT {
            r.concl(pair_check(order_label("Δ-side vanishing", b.m, k), outer, inner, &b.x, b.m, k, tol)?);
            r.concl(pair_check(order_label("δ-side vanishing", k, b.n), outer, inner, &b.x, k, b.n, tol)?);
        }
        Ok(())
    }));

    out.push(run_cell(Suite::Lemmas, "lem4", seed, dim, |r| {
        pair_hypotheses(r, b, tol)?;
        let [b1, a1, b2, a2] = &b.pair;
        for m1 in b.pm..=b.pm + ASCENT {
            for n1 in b.pn..=b.pn + ASCENT {
                r.concl(pair_check(order_label("pair", m1, n1), Pair::new(b1, a1), Pair::new(b2, a2), &b.x, m1, n1, tol)?);
            }
        }
        Ok(())
    }));
    out
}

/// `δ^m_{B^k,A^k} = δ^m_{B,A}∘P = P∘δ^m_{B,A}` with `P = (Σ_{i<k} L_B^{k−1−i} R_A^i)^m`,
/// and `Δ^m_{B^k,A^k} = Δ^m_{B,A}∘Q = Q∘Δ^m_{B,A}` with `Q = (Σ_{i<k} (L_B R_A)^i)^m`,
/// on arbitrary (noncommuting) `B, A`.
pub fn verify_factorizations(seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Lemmas, "lem-identity", seed, dim, |r| {
        let mut rng = Rng::derived(seed, 0x1de);
        let b = unit_gaussian(&mut rng, dim);
        let a = unit_gaussian(&mut rng, dim);
        let x = unit_gaussian(&mut rng, dim);
        let pair = Pair::new(&b, &a);
        for k in 1..=3 {
            let (bk, ak) = (b.pow(k), a.pow(k));
            let pk = Pair::new(&bk, &ak);
            let bp = b.powers(k);
            let ap = a.powers(k);
            let p_once = |y: &CMatrix| {
                (0..k).fold(CMatrix::zeros(dim), |acc, i| &acc + &(&(&bp[k - 1 - i] * y) * &ap[i]))
            };
            let q_once = |y: &CMatrix| (0..k).fold(CMatrix::zeros(dim), |acc, i| &acc + &(&(&bp[i] * y) * &ap[i]));
            let p_norm: f64 = (0..k).map(|i| bp[k - 1 - i].spectral_norm() * ap[i].spectral_norm()).sum();
            let q_norm: f64 = (0..k).map(|i| bp[i].spectral_norm() * ap[i].spectral_norm()).sum();
            for m in 1..=3 {
                let lhs = delta_power(&bk, &ak, &x, m)?;
                let px = (0..m).fold(x.clone(), |y, _| p_once(&y));
                let right = delta_power(&b, &a, &px, m)?;
                let left = (0..m).fold(delta_power(&b, &a, &x, m)?, |y, _| p_once(&y));
                let scale = delta_scale(pk, &x, m)? + p_norm.powi(m as i32) * delta_scale(pair, &x, m)?;
                r.concl(equal_check(format!("δ^{m} at power {k}: δ∘P"), &lhs, &right, scale, tol));
                r.concl(equal_check(format!("δ^{m} at power {k}: P∘δ"), &lhs, &left, scale, tol));

                let lhs = triangle_power(&bk, &ak, &x, m)?;
                let qx = (0..m).fold(x.clone(), |y, _| q_once(&y));
                let right = triangle_power(&b, &a, &qx, m)?;
                let left = (0..m).fold(triangle_power(&b, &a, &x, m)?, |y, _| q_once(&y));
                let scale = triangle_scale(pk, &x, m)? + q_norm.powi(m as i32) * triangle_scale(pair, &x, m)?;
                r.concl(equal_check(format!("Δ^{m} at power {k}: Δ∘Q"), &lhs, &right, scale, tol));
                r.concl(equal_check(format!("Δ^{m} at power {k}: Q∘Δ"), &lhs, &left, scale, tol));
            }
        }
        Ok(())
    })
}

fn unit_gaussian(rng: &mut Rng, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
    let n = g.spectral_norm();
    g.scale_real(1.0 / n)
}

/// `J = [[1,1],[0,1]]`.
pub fn jordan2() -> CMatrix {
    jordan_block(c(1.0, 0.0), 2)
}

/// The 2×2 Jordan block is `(I,(1,1))`-isosymmetric; every `(m₁,n₁) ∈ {1..4}²` follows.
pub fn verify_lem4_jordan(tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Lemmas, "lem4-jordan", 0, 2, |r| {
        let a = jordan2();
        let b = a.adjoint();
        let x = CMatrix::identity(2);
        let p = Pair::new(&b, &a);
        r.hyp(pair_check(order_label("pair", 1, 1), p, p, &x, 1, 1, tol)?);
        for m1 in 1..=4 {
            for n1 in 1..=4 {
                r.concl(pair_check(order_label("pair", m1, n1), p, p, &x, m1, n1, tol)?);
            }
        }
        Ok(())
    })
}

/// Sharpness of the Jordan block: 3-isometric (`Δ²(I) = 2e₂₂`) and
/// 3-symmetric (`δ²(I) = −2e₂₂`), with the order-2 residuals clearly nonzero.
pub fn verify_jordan_sharpness(tol: &ToleranceContext) -> Vec<VerificationReport> {
    let a = jordan2();
    let b = a.adjoint();
    let i = CMatrix::identity(2);
    let exact = ToleranceContext { atol: 1e-12, rtol: 0.0 };
    let iso = run_cell(Suite::Lemmas, "sharp-iso3", 0, 2, |r| {
        let p = Pair::new(&b, &a);
        r.concl(triangle_check("Δ^3(I)", p, &i, 3, tol)?);
        let d2 = triangle_power(&b, &a, &i, 2)?;
        r.concl(tol.check_nonzero("Δ^2(I)", d2.fro_norm(), triangle_scale(p, &i, 2)?));
        r.concl(equal_check("Δ^2(I) = [[0,0],[0,2]]", &d2, &CMatrix::real_diag(&[0.0, 2.0]), 0.0, &exact));
        let mo = minimal_order(OrderKind::Triangle, &b, &a, &i, 20, tol)?;
        r.concl(Residual::flag("minimal isometry order 3", mo.order == Some(3)));
        Ok(())
    });
    let sym = run_cell(Suite::Lemmas, "sharp-sym3", 0, 2, |r| {
        let p = Pair::new(&b, &a);
        r.concl(delta_check("δ^3(I)", p, &i, 3, tol)?);
        let d2 = delta_power(&b, &a, &i, 2)?;
        r.concl(tol.check_nonzero("δ^2(I)", d2.fro_norm(), delta_scale(p, &i, 2)?));
        r.concl(equal_check("δ^2(I) = [[0,0],[0,-2]]", &d2, &CMatrix::real_diag(&[0.0, -2.0]), 0.0, &exact));
        let mo = minimal_order(OrderKind::Delta, &b, &a, &i, 20, tol)?;
        r.concl(Residual::flag("minimal symmetry order 3", mo.order == Some(3)));
        r.concl(pair_check(order_label("isosymmetry", 1, 1), p, p, &i, 1, 1, tol)?);
        Ok(())
    });
    vec![iso, sym]
}

/// Self-adjoint plus commuting `n`-nilpotent: minimal symmetry order `2n − 1`.
pub fn verify_mr(seed: u64, dim: usize, n: usize, tol: &ToleranceContext) -> VerificationReport {
    shifted_family("mr-sym", OrderKind::Delta, seed, dim, n, tol, |s, d, n| mr_symmetric_instance(s, d, n, None))
}

/// Unimodular scalar times `I + J` blocks: minimal isometry order `2n − 1`.
pub fn verify_isonil(seed: u64, dim: usize, n: usize, tol: &ToleranceContext) -> VerificationReport {
    shifted_family("isonil", OrderKind::Triangle, seed, dim, n, tol, |s, d, n| isometry_plus_nilpotent_instance(s, d, n, None))
}

fn shifted_family(
    id: &str,
    kind: OrderKind,
    seed: u64,
    dim: usize,
    n: usize,
    tol: &ToleranceContext,
    make: impl FnOnce(u64, usize, usize) -> Result<(CMatrix, usize)>,
) -> VerificationReport {
    let cell = run_cell(Suite::Lemmas, id, seed, dim, |r| {
        let (a, k) = make(seed, dim, n)?;
        let b = a.adjoint();
        let i = CMatrix::identity(dim);
        let p = Pair::new(&b, &a);
        let (top, below) = match kind {
            OrderKind::Triangle => (triangle_check(format!("Δ^{k}(I)"), p, &i, k, tol)?, {
                let v = triangle_power(&b, &a, &i, k - 1)?;
                tol.check_nonzero(format!("Δ^{}(I)", k - 1), v.fro_norm(), triangle_scale(p, &i, k - 1)?)
            }),
            OrderKind::Delta => (delta_check(format!("δ^{k}(I)"), p, &i, k, tol)?, {
                let v = delta_power(&b, &a, &i, k - 1)?;
                tol.check_nonzero(format!("δ^{}(I)", k - 1), v.fro_norm(), delta_scale(p, &i, k - 1)?)
            }),
        };
        r.concl(top);
        r.concl(below);
        Ok(())
    });
    cell.with_variant(format!("n={n}"))
}

/// The abstract's exponent pattern `B1^{m−j}B2^{n−k} X A2^{n−k} A1^j`.
pub fn abstract_double_sum(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, m: usize, n: usize) -> Result<CMatrix> {
    let b1 = outer.b.powers(m);
    let a1 = outer.a.powers(m);
    let b2 = inner.b.powers(n);
    let a2 = inner.a.powers(n);
    let mut acc = CMatrix::zeros(x.dim());
    for j in 0..=m {
        for k in 0..=n {
            let w = (binomial(m, j)? * binomial(n, k)?) as f64 * if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
            let term = &(&(&(&b1[m - j] * &b2[n - k]) * x) * &a2[n - k]) * &a1[j];
            acc = &acc + &term.scale_real(w);
        }
    }
    Ok(acc)
}

fn commuting_operands(rng: &mut Rng, dim: usize) -> (BlockAlgebra, [CMatrix; 4]) {
    let alg = BlockAlgebra::random(rng, dim, dim.min(3), true);
    let els: [CMatrix; 2] = std::array::from_fn(|_| {
        let k = Kind::random(rng);
        alg.kind_element(rng, k, 3)
    });
    let [a1, a2] = els;
    (alg, [a1.adjoint(), a1, a2.adjoint(), a2])
}

/// The displayed double sum matches iterated evaluation on commuting input;
/// the abstract's exponent pattern is recorded alongside.
pub fn verify_double_sum_variants(seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Lemmas, "doublesum-variants", seed, dim, |r| {
        let mut rng = Rng::derived(seed, 0xd5);
        let (_, [b1, a1, b2, a2]) = commuting_operands(&mut rng, dim);
        let x = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
        let (m, n) = (1 + rng.below(3), 1 + rng.below(3));
        let (outer, inner) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));
        r.hyp(commutator_check("[A1,A2]", &a1, &a2, tol)?);
        r.hyp(commutator_check("[B1,B2]", &b1, &b2, tol)?);
        let scale = compose_scale(outer, inner, &x, m, n)?;
        let reference = compose_mn(outer, inner, &x, m, n, ComposeOrder::TriangleFirstOutside)?;
        let display = compose_mn(outer, inner, &x, m, n, ComposeOrder::DoubleSum)?;
        r.concl(equal_check(format!("display double sum = iterated ({m},{n})"), &display, &reference, scale, tol));
        let variant = abstract_double_sum(outer, inner, &x, m, n)?;
        let diff = (&variant - &reference).fro_norm();
        let matches = tol.is_zero(diff, scale);
        r.diag(tol.check_nonzero(format!("abstract exponent pattern differs ({m},{n})"), diff, scale));
        r.note(if matches {
            "abstract exponent pattern agrees with iterated evaluation on this instance"
        } else {
            "abstract exponent pattern differs from iterated evaluation; the displayed form matches"
        });
        Ok(())
    })
}

/// Both composition orders agree on commuting input and differ on a
/// noncommuting one.
pub fn verify_commuting_orders(seed: u64, dim: usize, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Lemmas, "commuting-orders", seed, dim, |r| {
        let mut rng = Rng::derived(seed, 0xc0);
        let (_, [b1, a1, b2, a2]) = commuting_operands(&mut rng, dim);
        let x = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
        let (outer, inner) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 3)] {
            let t = compose_mn(outer, inner, &x, m, n, ComposeOrder::TriangleFirstOutside)?;
            let d = compose_mn(outer, inner, &x, m, n, ComposeOrder::DeltaFirstOutside)?;
            let scale = compose_scale(outer, inner, &x, m, n)?;
            r.concl(equal_check(format!("commuting: Δ(δ) = δ(Δ) at ({m},{n})"), &t, &d, scale, tol));
        }
        if dim >= 2 {
            let b = unit_gaussian(&mut rng, dim);
            let a = unit_gaussian(&mut rng, dim);
            let (outer, inner) = (Pair::new(&b, &a), Pair::new(&a, &b));
            let t = compose_mn(outer, inner, &x, 1, 1, ComposeOrder::TriangleFirstOutside)?;
            let d = compose_mn(outer, inner, &x, 1, 1, ComposeOrder::DeltaFirstOutside)?;
            let scale = compose_scale(outer, inner, &x, 1, 1)?;
            r.concl(tol.check_nonzero("noncommuting: Δ(δ) ≠ δ(Δ) at (1,1)", (&t - &d).fro_norm(), scale));
        }
        Ok(())
    })
}

/// Binomial sums, iterated single steps and vec-superoperators agree for
/// `Δ^m`, `δ^n` and the composed transform on arbitrary operands.
pub fn verify_cross_representation(seed: u64, dim: usize, count: usize, max_order: usize, rtol: f64) -> VerificationReport {
    let tol = ToleranceContext { atol: 1e-14, rtol };
    run_cell(Suite::Lemmas, "cross-representation", seed, dim, |r| {
        let mut rng = Rng::derived(seed, 0xc7);
        for i in 0..count {
            let [b1, a1, b2, a2, x] = std::array::from_fn(|_| unit_gaussian(&mut rng, dim).scale_real(rng.uniform_in(0.5, 1.5)));
            let m = 1 + rng.below(max_order);
            let n = 1 + rng.below(max_order);
            let (p1, p2) = (Pair::new(&b1, &a1), Pair::new(&b2, &a2));

            let sum = triangle_power(&b1, &a1, &x, m)?;
            let iter = (0..m).try_fold(x.clone(), |y, _| triangle_apply(&b1, &a1, &y))?;
            let sup = as_superop(SuperSpec::Triangle { pair: p1, m })?.apply(&x)?;
            let s = triangle_scale(p1, &x, m)?;
            r.concl(equal_check(format!("#{i} Δ^{m} iterated"), &iter, &sum, s, &tol));
            r.concl(equal_check(format!("#{i} Δ^{m} superoperator"), &sup, &sum, s, &tol));

            let sum = delta_power(&b2, &a2, &x, n)?;
            let iter = (0..n).try_fold(x.clone(), |y, _| delta_apply(&b2, &a2, &y))?;
            let sup = as_superop(SuperSpec::Delta { pair: p2, n })?.apply(&x)?;
            let s = delta_scale(p2, &x, n)?;
            r.concl(equal_check(format!("#{i} δ^{n} iterated"), &iter, &sum, s, &tol));
            r.concl(equal_check(format!("#{i} δ^{n} superoperator"), &sup, &sum, s, &tol));

            let direct = compose_mn(p1, p2, &x, m, n, ComposeOrder::TriangleFirstOutside)?;
            let inner = (0..n).try_fold(x.clone(), |y, _| delta_apply(&b2, &a2, &y))?;
            let iter = (0..m).try_fold(inner, |y, _| triangle_apply(&b1, &a1, &y))?;
            let sup = as_superop(SuperSpec::ComposeMn { outer: p1, inner: p2, m, n })?.apply(&x)?;
            let s = x.fro_norm() * triangle_weight(p1, m)? * delta_weight(p2, n)?;
            r.concl(equal_check(format!("#{i} ({m},{n}) iterated"), &iter, &direct, s, &tol));
            r.concl(equal_check(format!("#{i} ({m},{n}) superoperator"), &sup, &direct, s, &tol));
        }
        Ok(())
    })
}

/// Every lemma cell for one `(seed, dim)`.
pub fn run(seed: u64, dim: usize, opts: &GenOptions) -> Vec<VerificationReport> {
    let tol = &opts.tol;
    let mut out = match LemmaBundle::random(seed, dim, opts) {
        Ok(b) => verify_lemmas(&b, seed, dim, tol),
        Err(e) => vec![run_cell(Suite::Lemmas, "lemma-bundle", seed, dim, |_| Err(e))],
    };
    out.push(verify_factorizations(seed, dim, tol));
    out.push(verify_double_sum_variants(seed, dim, tol));
    out.push(verify_commuting_orders(seed, dim, tol));
    if dim <= 6 {
        out.push(verify_cross_representation(seed, dim, 5, 4, 1e-10));
    }
    out.push(super::exact::verify_exact(seed, dim.min(4), 3, 3));
    for n in 2..=4.min(dim) {
        out.push(verify_mr(seed, dim, n, tol));
        out.push(verify_isonil(seed, dim, n, tol));
    }
    out
}

/// Seed-independent lemma cells.
pub fn fixed(tol: &ToleranceContext) -> Vec<VerificationReport> {
    let mut out = verify_lemmas(&LemmaBundle::identity(3), 0, 3, tol);
    for r in &mut out {
        r.variant = "identity".into();
    }
    out.push(verify_lem4_jordan(tol));
    out.extend(verify_jordan_sharpness(tol));
    out
}
