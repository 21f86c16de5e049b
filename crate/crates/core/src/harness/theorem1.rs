//! Products of commuting left-`(X,(m,n))`-symmetric pairs.

use super::{
    commutator_check, equal_check, order_label, pair_check, run_cell, Suite, VerificationReport,
};
use crate::elementary::{binomial, compose_mn, delta_power, delta_weight, triangle_power, triangle_weight, ComposeOrder, Pair};
use crate::error::Result;
use crate::generators::{theorem1_instance, GenOptions, Kind, Theorem1Instance, Theorem1Orders};
use crate::matrix::CMatrix;
use crate::tolerance::ToleranceContext;

/// All operators the identity; every order 1.
pub fn identity_instance(dim: usize) -> Theorem1Instance {
    let i = CMatrix::identity(dim);
    Theorem1Instance {
        a: [i.clone(), i.clone()],
        b: [i.clone(), i.clone()],
        s: [i.clone(), i.clone()],
        t: [i.clone(), i.clone()],
        x: i,
        kinds: [Kind::Signature; 4],
        orders: Theorem1Orders { m1: 1, n1: 1, r1: 1, n2: 1, m2: 1, s1: 1, r2: 1, s2: 1 },
    }
}

/// Which of the four proof cases a term `(j, k)` of the double expansion falls in.
pub fn case_of(j: usize, k: usize, r: usize, s: usize) -> usize {
    match (j >= r, k >= s) {
        (true, true) => 1,
        (false, true) => 2,
        (true, false) => 3,
        (false, false) => 4,
    }
}

pub fn verify_theorem1(inst: &Theorem1Instance, seed: u64, dim: usize, term_checks: bool, tol: &ToleranceContext) -> VerificationReport {
    run_cell(Suite::Thm1, "thm1", seed, dim, |r| {
        let i = inst;
        let o = &i.orders;
        r.hyp(commutator_check("[A1,A2]", &i.a[0], &i.a[1], tol)?);
        r.hyp(commutator_check("[B1,B2]", &i.b[0], &i.b[1], tol)?);
        for k in 0..2 {
            r.hyp(commutator_check(format!("[A{0},T{0}]", k + 1), &i.a[k], &i.t[k], tol)?);
            r.hyp(commutator_check(format!("[B{0},S{0}]", k + 1), &i.b[k], &i.s[k], tol)?);
        }
        for (label, outer, inner, m, n) in i.hypotheses() {
            r.hyp(pair_check(order_label(label, m, n), outer, inner, &i.x, m, n, tol)?);
        }
        // commutations the expansion relies on beyond the stated ones
        r.diag(commutator_check("[T1,T2]", &i.t[0], &i.t[1], tol)?);
        r.diag(commutator_check("[S1,S2]", &i.s[0], &i.s[1], tol)?);
        r.diag(commutator_check("[T1,A2]", &i.t[0], &i.a[1], tol)?);
        r.diag(commutator_check("[S1,B2]", &i.s[0], &i.b[1], tol)?);

        let (big_m, big_n) = o.conclusion();
        let [(sb1, ta1), (sb2, ta2)] = i.products();
        let (outer, inner) = (Pair::new(&sb1, &ta1), Pair::new(&sb2, &ta2));
        r.concl(pair_check(order_label("((S1B1,T1A1),(S2B2,T2A2))", big_m, big_n), outer, inner, &i.x, big_m, big_n, tol)?);

        if term_checks {
            case_checks(r, i, tol)?;
            let direct = compose_mn(outer, inner, &i.x, big_m, big_n, ComposeOrder::TriangleFirstOutside)?;
            let (sum, weight) = expansion(i)?;
            r.diag(equal_check("double expansion = conclusion value", &sum, &direct, weight, tol));
        }
        Ok(())
    })
}

/// Each summand's case condition, e.g. `Δ^j_{S1,T1}(δ^k_{S2,T2}(X)) = 0` for `j ≥ r, k ≥ s`.
fn case_checks(rep: &mut VerificationReport, i: &Theorem1Instance, tol: &ToleranceContext) -> Result<()> {
    let o = &i.orders;
    let (m, n, r, s) = (o.m(), o.n(), o.r(), o.s());
    let (big_m, big_n) = o.conclusion();
    let p_a1 = Pair::new(&i.b[0], &i.a[0]);
    let p_a2 = Pair::new(&i.b[1], &i.a[1]);
    let p_t1 = Pair::new(&i.s[0], &i.t[0]);
    let p_t2 = Pair::new(&i.s[1], &i.t[1]);
    for j in 0..=big_m {
        for k in 0..=big_n {
            let (outer, mo, inner, no) = match case_of(j, k, r, s) {
                1 => (p_t1, j, p_t2, k),
                2 => (p_a1, m + r - 1 - j, p_t2, k),
                3 => (p_t1, j, p_a2, n + s - 1 - k),
                _ => (p_a1, m + r - 1 - j, p_a2, n + s - 1 - k),
            };
            let label = format!("case {} term (j={j},k={k}): Δ^{mo}(δ^{no})", case_of(j, k, r, s));
            rep.concl(pair_check(label, outer, inner, &i.x, mo, no, tol)?);
        }
    }
    Ok(())
}

/// `Σ_{j,k} C(M,j)C(N,k) (L_{S1}R_{T1})^{M−j} L_{S2}^{N−k} R_{A2}^k Δ^{M−j}_{B1,A1} Δ^j_{S1,T1} δ^{N−k}_{B2,A2} δ^k_{S2,T2}(X)`
/// and the total weight of its terms.
pub fn expansion(i: &Theorem1Instance) -> Result<(CMatrix, f64)> {
    let (big_m, big_n) = i.orders.conclusion();
    let s1p = i.s[0].powers(big_m);
    let t1p = i.t[0].powers(big_m);
    let s2p = i.s[1].powers(big_n);
    let a2p = i.a[1].powers(big_n);
    let d = i.x.dim();
    let mut acc = CMatrix::zeros(d);
    let mut weight = 0.0;
    for j in 0..=big_m {
        for k in 0..=big_n {
            let y = delta_power(&i.s[1], &i.t[1], &i.x, k)?;
            let y = delta_power(&i.b[1], &i.a[1], &y, big_n - k)?;
            let y = triangle_power(&i.s[0], &i.t[0], &y, j)?;
            let y = triangle_power(&i.b[0], &i.a[0], &y, big_m - j)?;
            let c = (binomial(big_m, j)? * binomial(big_n, k)?) as f64;
            let term = (&(&(&s1p[big_m - j] * &s2p[big_n - k]) * &y) * &(&a2p[k] * &t1p[big_m - j])).scale_real(c);
            let w = c
                * s1p[big_m - j].spectral_norm()
                * t1p[big_m - j].spectral_norm()
                * s2p[big_n - k].spectral_norm()
                * a2p[k].spectral_norm()
                * triangle_weight(Pair::new(&i.b[0], &i.a[0]), big_m - j)?
                * triangle_weight(Pair::new(&i.s[0], &i.t[0]), j)?
                * delta_weight(Pair::new(&i.b[1], &i.a[1]), big_n - k)?
                * delta_weight(Pair::new(&i.s[1], &i.t[1]), k)?;
            weight += w * i.x.fro_norm();
            acc = &acc + &term;
        }
    }
    Ok((acc, weight))
}

pub fn run(seed: u64, dim: usize, opts: &GenOptions) -> Vec<VerificationReport> {
    vec![match theorem1_instance(seed, dim, opts) {
        Ok(inst) => verify_theorem1(&inst, seed, dim, true, &opts.tol),
        Err(e) => run_cell(Suite::Thm1, "thm1", seed, dim, |_| Err(e)),
    }]
}

pub fn fixed(tol: &ToleranceContext) -> Vec<VerificationReport> {
    vec![verify_theorem1(&identity_instance(3), 0, 3, true, tol).with_variant("identity")]
}
