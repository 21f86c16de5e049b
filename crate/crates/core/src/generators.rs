//! Seeded constructors of structured instances.
//!
//! Most families are built inside a *block algebra*: `dim` is split into
//! diagonal blocks, and an element is block-diagonal with each block a
//! polynomial `c₀I + Σ_k c_k J^k` in that block's upper shift `J`. All such
//! elements commute, so do their adjoints, and a block-diagonal operand `X`
//! is mapped to a block-diagonal operand by every `L_B R_A`. The whole
//! picture is then conjugated by a seeded random unitary `Q`.
//!
//! With `B = A*` and `A` of nilpotent depth `ν` (every block's nilpotent part
//! `N` has `N^ν = 0`):
//!
//! * if every `c₀` has modulus one, `Δ^{2ν−1}_{A*,A}` annihilates every
//!   block-diagonal operand;
//! * if every `c₀` is real, `δ^{2ν−1}_{A*,A}` does.
//!
//! Every instance is certified by evaluating its hypotheses before it is
//! returned; failed certification retries with a derived seed, up to
//! [`MAX_ATTEMPTS`] times.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classify::{minimal_order, OrderKind};
use crate::elementary::{compose_mn, compose_scale, ComposeOrder, Pair};
use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix, Limits};
use crate::rng::Rng;
use crate::tolerance::ToleranceContext;

pub const MAX_ATTEMPTS: usize = 50;
pub const MAX_THEOREM1_DIM: usize = 6;
pub const MAX_THEOREM23_DIM: usize = 8;
pub const MAX_FAMILY_COUNT: usize = 6;

/// `λI + J` of size `k`.
pub fn jordan_block(lambda: Complex64, k: usize) -> CMatrix {
    let mut m = CMatrix::shift(k);
    for i in 0..k {
        m.set(i, i, lambda);
    }
    m
}

/// Unitary from modified Gram–Schmidt on the columns of a complex Gaussian
/// matrix (entries drawn row-major).
pub fn random_unitary(rng: &mut Rng, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
    let mut cols: Vec<Vec<Complex64>> = (0..dim).map(|j| (0..dim).map(|i| g.get(i, j)).collect()).collect();
    for j in 0..dim {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let proj: Complex64 = qk.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (v, q) in rest[0].iter_mut().zip(qk) {
                *v -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// `(G + G*)/2` for a complex Gaussian `G`.
pub fn random_selfadjoint(rng: &mut Rng, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, |_, _| rng.complex_gaussian());
    (&g + &g.adjoint()).scale_real(0.5)
}

/// `count` polynomials of degree `< dim` in one seeded upper-triangular `J`
/// (normalized to spectral norm 1). With `nilpotent`, `J` is strictly upper
/// triangular and constant terms are zero.
pub fn commuting_family(rng: &mut Rng, dim: usize, count: usize, nilpotent: bool) -> Result<Vec<CMatrix>> {
    if count == 0 || count > MAX_FAMILY_COUNT {
        return Err(Error::InvalidParam(format!("count must be in 1..={MAX_FAMILY_COUNT}, got {count}")));
    }
    let j = CMatrix::from_fn(dim, |r, col| {
        if col > r || (col == r && !nilpotent) {
            rng.complex_gaussian()
        } else {
            c(0.0, 0.0)
        }
    });
    let norm = j.spectral_norm();
    let j = if norm > 0.0 { j.scale_real(1.0 / norm) } else { j };
    let powers = j.powers(dim.saturating_sub(1));
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut acc = CMatrix::zeros(dim);
        for (k, pk) in powers.iter().enumerate() {
            if nilpotent && k == 0 {
                continue;
            }
            let coeff = rng.complex_gaussian() / (k as f64 + 1.0);
            acc = &acc + &pk.scale(coeff);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Block sizes: the first block has size `min(max_block, dim)` so that
/// nilpotent depths are attained; the rest are uniform in `1..=max_block`.
fn partition(rng: &mut Rng, dim: usize, max_block: usize) -> Vec<usize> {
    let max_block = max_block.max(1);
    let mut sizes = vec![max_block.min(dim)];
    let mut left = dim - sizes[0];
    while left > 0 {
        let s = 1 + rng.below(max_block.min(left));
        sizes.push(s);
        left -= s;
    }
    sizes
}

/// The per-block polynomial algebra described in the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockAlgebra {
    sizes: Vec<usize>,
    q: Option<CMatrix>,
}

impl BlockAlgebra {
    pub fn new(sizes: Vec<usize>, q: Option<CMatrix>) -> Self {
        assert!(sizes.iter().all(|&s| s > 0));
        BlockAlgebra { sizes, q }
    }

    pub fn random(rng: &mut Rng, dim: usize, max_block: usize, conjugate: bool) -> Self {
        let sizes = partition(rng, dim, max_block);
        let q = conjugate.then(|| random_unitary(rng, dim));
        BlockAlgebra { sizes, q }
    }

    pub fn dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn unitary(&self) -> Option<&CMatrix> {
        self.q.as_ref()
    }

    /// `Q M Q*`, or `M` when unconjugated.
    pub fn conjugate(&self, m: &CMatrix) -> CMatrix {
        match &self.q {
            Some(q) => &(q * m) * &q.adjoint(),
            None => m.clone(),
        }
    }

    fn assemble(&self, blocks: &[CMatrix]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim());
        let mut offset = 0;
        for b in blocks {
            out.embed(offset, b);
            offset += b.dim();
        }
        self.conjugate(&out)
    }

    /// Element with per-block scalar `scalars[b]` and shift coefficients
    /// `coeffs[b][k−1]` for `J^k`.
    pub fn element(&self, scalars: &[Complex64], coeffs: &[Vec<Complex64>]) -> CMatrix {
        let blocks: Vec<CMatrix> = self
            .sizes
            .iter()
            .enumerate()
            .map(|(b, &s)| {
                let shift = CMatrix::shift(s);
                let mut m = CMatrix::identity(s).scale(scalars[b]);
                let mut power = CMatrix::identity(s);
                for k in 1..s {
                    power = &power * &shift;
                    let ck = coeffs.get(b).and_then(|v| v.get(k - 1)).copied().unwrap_or(c(0.0, 0.0));
                    m = &m + &power.scale(ck);
                }
                m
            })
            .collect();
        self.assemble(&blocks)
    }

    fn nilpotent_coeffs(&self, rng: &mut Rng, depth: usize) -> Vec<Vec<Complex64>> {
        let depth = depth.max(1);
        self.sizes
            .iter()
            .map(|&s| {
                let k0 = s.div_ceil(depth);
                (1..s).map(|k| if k >= k0 { rng.complex_in_annulus(0.3, 1.0) } else { c(0.0, 0.0) }).collect()
            })
            .collect()
    }

    pub fn kind_scalars(&self, rng: &mut Rng, kind: Kind) -> Vec<Complex64> {
        self.sizes.iter().map(|_| kind.scalar(rng)).collect()
    }

    /// Element of the given kind whose nilpotent part has depth `≤ depth`.
    pub fn kind_element(&self, rng: &mut Rng, kind: Kind, depth: usize) -> CMatrix {
        let scalars = self.kind_scalars(rng, kind);
        let coeffs = self.nilpotent_coeffs(rng, depth);
        self.element(&scalars, &coeffs)
    }

    /// Nilpotent element with `N^depth = 0`.
    pub fn nilpotent(&self, rng: &mut Rng, depth: usize) -> CMatrix {
        let scalars = vec![c(0.0, 0.0); self.sizes.len()];
        let coeffs = self.nilpotent_coeffs(rng, depth);
        self.element(&scalars, &coeffs)
    }

    /// Random block-diagonal operand (complex Gaussian blocks).
    pub fn operand(&self, rng: &mut Rng) -> CMatrix {
        let blocks: Vec<CMatrix> = self.sizes.iter().map(|&s| CMatrix::from_fn(s, |_, _| rng.complex_gaussian())).collect();
        self.assemble(&blocks)
    }
}

/// Constant-term class of a block-algebra element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// Unimodular constant terms: `Δ_{A*,A}` is nilpotent on block-diagonal operands.
    Unitary,
    /// Real constant terms in `±[0.5, 1.5]`: `δ_{A*,A}` is nilpotent there.
    SelfAdjoint,
    /// Constant terms `±1`: both.
    Signature,
}

impl Kind {
    pub const ALL: [Kind; 3] = [Kind::Unitary, Kind::SelfAdjoint, Kind::Signature];

    pub fn kills_triangle(self) -> bool {
        matches!(self, Kind::Unitary | Kind::Signature)
    }

    pub fn kills_delta(self) -> bool {
        matches!(self, Kind::SelfAdjoint | Kind::Signature)
    }

    fn scalar(self, rng: &mut Rng) -> Complex64 {
        match self {
            Kind::Unitary => rng.unit_complex(),
            Kind::SelfAdjoint => c(rng.sign() * rng.uniform_in(0.5, 1.5), 0.0),
            Kind::Signature => c(rng.sign(), 0.0),
        }
    }

    pub fn random(rng: &mut Rng) -> Kind {
        Kind::ALL[rng.below(3)]
    }
}

/// Draws `N` kinds until `accept` holds.
pub fn pick_kinds<const N: usize>(rng: &mut Rng, accept: impl Fn(&[Kind; N]) -> bool) -> [Kind; N] {
    loop {
        let kinds = std::array::from_fn(|_| Kind::random(rng));
        if accept(&kinds) {
            return kinds;
        }
    }
}

/// Do both composition orders of `Δ^m_{outer}(δ^n_{inner}(X))` vanish?
pub fn pair_vanishes(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, m: usize, n: usize, tol: &ToleranceContext) -> Result<bool> {
    let scale = compose_scale(outer, inner, x, m, n)?;
    for order in [ComposeOrder::TriangleFirstOutside, ComposeOrder::DeltaFirstOutside] {
        if !tol.is_zero(compose_mn(outer, inner, x, m, n, order)?.fro_norm(), scale) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Among passing `(m, n) ∈ [1, kmax]²` that are Pareto-minimal, the one
/// with smallest `m + n` (ties: smaller `m`).
pub fn certify_pair_orders(outer: Pair<'_>, inner: Pair<'_>, x: &CMatrix, kmax: usize, tol: &ToleranceContext) -> Result<Option<(usize, usize)>> {
    let mut passing = Vec::new();
    for m in 1..=kmax {
        for n in 1..=kmax {
            if passing.iter().any(|&(pm, pn)| pm <= m && pn <= n) {
                continue;
            }
            if pair_vanishes(outer, inner, x, m, n, tol)? {
                passing.push((m, n));
            }
        }
    }
    Ok(passing.into_iter().min_by_key(|&(m, n)| (m + n, m)))
}

/// Smallest `k ≥ 1` with `M^k` numerically zero (at most `dim + 1`).
pub fn nilpotency_order(m: &CMatrix, tol: &ToleranceContext) -> Option<usize> {
    let norm = m.fro_norm();
    let mut power = m.clone();
    for k in 1..=m.dim() + 1 {
        if tol.is_zero(power.fro_norm(), norm.powi(k as i32)) {
            return Some(k);
        }
        power = &power * m;
    }
    None
}

pub(crate) fn retry<T>(family: &str, seed: u64, mut attempt: impl FnMut(&mut Rng) -> Result<Option<T>>) -> Result<T> {
    for i in 0..MAX_ATTEMPTS {
        let mut rng = Rng::derived(seed, i as u64);
        if let Some(v) = attempt(&mut rng)? {
            return Ok(v);
        }
    }
    Err(Error::GenerationFailed { family: family.to_string(), attempts: MAX_ATTEMPTS })
}

fn check_dim(dim: usize, max: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParam("dimension must be positive".into()));
    }
    if dim > max {
        return Err(Error::DimTooLarge { dim, max });
    }
    Ok(())
}

/// Options shared by the theorem-instance generators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenOptions {
    /// Upper bound on certified hypothesis orders.
    pub max_order: usize,
    /// Conjugate by a seeded random unitary.
    pub conjugate: bool,
    /// Target nilpotency orders `[m1, n1, m2, n2]` of the perturbations
    /// (each in `1..=3`); drawn when absent.
    pub nil_orders: Option<[usize; 4]>,
    pub tol: ToleranceContext,
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions { max_order: 3, conjugate: true, nil_orders: None, tol: ToleranceContext::default() }
    }
}

impl GenOptions {
    /// Largest nilpotent depth `ν` with `2ν − 1 ≤ max_order`, capped at 2.
    pub fn depth(&self) -> usize {
        self.max_order.div_ceil(2).clamp(1, 2)
    }
}

/// Self-adjoint (blockwise real scalar) plus a block-nilpotent of order
/// exactly `n`; minimal symmetry order `2n − 1`.
pub fn mr_symmetric_instance(seed: u64, dim: usize, n: usize, lambda: Option<f64>) -> Result<(CMatrix, usize)> {
    shifted_blocks_instance(seed, dim, n, "mr", OrderKind::Delta, |rng| c(lambda.unwrap_or_else(|| rng.uniform_in(-1.0, 1.0)), 0.0))
}

/// Blockwise unimodular scalar `u` times `(I + J)`; minimal isometry order `2n − 1`.
pub fn isometry_plus_nilpotent_instance(seed: u64, dim: usize, n: usize, phase: Option<f64>) -> Result<(CMatrix, usize)> {
    shifted_blocks_instance(seed, dim, n, "isonil", OrderKind::Triangle, |rng| {
        Complex64::from_polar(1.0, phase.unwrap_or_else(|| std::f64::consts::TAU * rng.uniform()))
    })
}

fn shifted_blocks_instance(
    seed: u64,
    dim: usize,
    n: usize,
    family: &str,
    kind: OrderKind,
    mut scalar: impl FnMut(&mut Rng) -> Complex64,
) -> Result<(CMatrix, usize)> {
    check_dim(dim, Limits::from_env()?.max_dim)?;
    if n < 2 || n > dim {
        return Err(Error::InvalidParam(format!("nilpotency order must be in 2..={dim}, got {n}")));
    }
    let expected = 2 * n - 1;
    let tol = ToleranceContext::default();
    retry(family, seed, |rng| {
        let mut sizes = vec![n];
        let mut left = dim - n;
        while left > 0 {
            let s = 1 + rng.below(n.min(left));
            sizes.push(s);
            left -= s;
        }
        let mut a = CMatrix::zeros(dim);
        let mut offset = 0;
        for &s in &sizes {
            let z = scalar(rng);
            let block = match kind {
                OrderKind::Delta => jordan_block(z, s),
                OrderKind::Triangle => jordan_block(c(1.0, 0.0), s).scale(z),
            };
            a.embed(offset, &block);
            offset += s;
        }
        let id = CMatrix::identity(dim);
        let found = minimal_order(kind, &a.adjoint(), &a, &id, expected.min(20), &tol)?;
        Ok((found.order == Some(expected)).then_some((a, expected)))
    })
}

/// Operands of the product theorem: `A_i, T_i` in one block algebra,
/// `B_i = A_i*`, `S_i = T_i*`, block-diagonal `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Instance {
    pub a: [CMatrix; 2],
    pub b: [CMatrix; 2],
    pub s: [CMatrix; 2],
    pub t: [CMatrix; 2],
    pub x: CMatrix,
    /// Kinds of `A1, A2, T1, T2`.
    pub kinds: [Kind; 4],
    pub orders: Theorem1Orders,
}

/// Certified orders of hypotheses (ii)–(v).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem1Orders {
    pub m1: usize,
    pub n1: usize,
    pub r1: usize,
    pub n2: usize,
    pub m2: usize,
    pub s1: usize,
    pub r2: usize,
    pub s2: usize,
}

impl Theorem1Orders {
    pub fn m(&self) -> usize {
        self.m1.max(self.m2)
    }
    pub fn n(&self) -> usize {
        self.n1.max(self.n2)
    }
    pub fn r(&self) -> usize {
        self.r1.max(self.r2)
    }
    pub fn s(&self) -> usize {
        self.s1.max(self.s2)
    }
    /// `(m + r − 1, n + s − 1)`.
    pub fn conclusion(&self) -> (usize, usize) {
        (self.m() + self.r() - 1, self.n() + self.s() - 1)
    }
}

impl Theorem1Instance {
    /// The four hypothesis pairs `(Δ side, δ side)` with their orders, in
    /// the order (ii), (iii), (iv), (v).
    pub fn hypotheses(&self) -> [(&'static str, Pair<'_>, Pair<'_>, usize, usize); 4] {
        let o = &self.orders;
        let p_a1 = Pair::new(&self.b[0], &self.a[0]);
        let p_a2 = Pair::new(&self.b[1], &self.a[1]);
        let p_t1 = Pair::new(&self.s[0], &self.t[0]);
        let p_t2 = Pair::new(&self.s[1], &self.t[1]);
        [
            ("(B1,A1),(B2,A2)", p_a1, p_a2, o.m1, o.n1),
            ("(S1,T1),(B2,A2)", p_t1, p_a2, o.r1, o.n2),
            ("(B1,A1),(S2,T2)", p_a1, p_t2, o.m2, o.s1),
            ("(S1,T1),(S2,T2)", p_t1, p_t2, o.r2, o.s2),
        ]
    }

    /// `(S_i B_i, T_i A_i)`.
    pub fn products(&self) -> [(CMatrix, CMatrix); 2] {
        [0, 1].map(|i| (&self.s[i] * &self.b[i], &self.t[i] * &self.a[i]))
    }
}

/// Kind pattern making all four product-theorem hypotheses hold.
pub fn theorem1_kinds_ok(k: &[Kind; 4]) -> bool {
    let [a1, a2, t1, t2] = *k;
    (a1.kills_triangle() || a2.kills_delta())
        && (t1.kills_triangle() || a2.kills_delta())
        && (a1.kills_triangle() || t2.kills_delta())
        && (t1.kills_triangle() || t2.kills_delta())
}

pub fn theorem1_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<Theorem1Instance> {
    check_dim(dim, MAX_THEOREM1_DIM)?;
    let depth = opts.depth();
    let kmax = opts.max_order.min(2 * depth - 1).max(1);
    retry("thm1", seed, |rng| {
        let alg = BlockAlgebra::random(rng, dim, depth, opts.conjugate);
        let kinds = pick_kinds(rng, theorem1_kinds_ok);
        let els: Vec<CMatrix> = kinds.iter().map(|&k| alg.kind_element(rng, k, depth)).collect();
        let x = alg.operand(rng);
        let a = [els[0].clone(), els[1].clone()];
        let t = [els[2].clone(), els[3].clone()];
        let b = [a[0].adjoint(), a[1].adjoint()];
        let s = [t[0].adjoint(), t[1].adjoint()];
        let mut orders = Vec::with_capacity(4);
        for (outer, inner) in [(0usize, 1usize), (2, 1), (0, 3), (2, 3)] {
            let pick = |i: usize| if i < 2 { Pair::new(&b[i], &a[i]) } else { Pair::new(&s[i - 2], &t[i - 2]) };
            match certify_pair_orders(pick(outer), pick(inner), &x, kmax, &opts.tol)? {
                Some(o) => orders.push(o),
                None => return Ok(None),
            }
        }
        let orders = Theorem1Orders {
            m1: orders[0].0,
            n1: orders[0].1,
            r1: orders[1].0,
            n2: orders[1].1,
            m2: orders[2].0,
            s1: orders[2].1,
            r2: orders[3].0,
            s2: orders[3].1,
        };
        Ok(Some(Theorem1Instance { a, b, s, t, x, kinds, orders }))
    })
}

/// Operands of the nilpotent-perturbation theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Instance {
    pub a: [CMatrix; 2],
    pub b: [CMatrix; 2],
    /// Added to `A_i`.
    pub mm: [CMatrix; 2],
    /// Added to `B_i`.
    pub nn: [CMatrix; 2],
    pub x: CMatrix,
    pub m: usize,
    pub n: usize,
    pub nil: NilOrders,
    /// Kinds of `A1, A2`.
    pub kinds: [Kind; 2],
}

/// Nilpotency orders: `M_i^{m_i} = N_i^{n_i} = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NilOrders {
    pub m1: usize,
    pub n1: usize,
    pub m2: usize,
    pub n2: usize,
}

impl Theorem2Instance {
    /// `(m + m1 + n1 − 2, n + m2 + n2 − 2)`.
    pub fn conclusion(&self) -> (usize, usize) {
        (self.m + self.nil.m1 + self.nil.n1 - 2, self.n + self.nil.m2 + self.nil.n2 - 2)
    }

    /// `(B_i + N_i, A_i + M_i)`.
    pub fn perturbed(&self) -> [(CMatrix, CMatrix); 2] {
        [0, 1].map(|i| (&self.b[i] + &self.nn[i], &self.a[i] + &self.mm[i]))
    }
}

/// `A_i = c_i + K_i` (block scalar plus nilpotent of depth `≤ 2`) with
/// `B_i = c_i*` only, so `Δ_{B,A}` or `δ_{B,A}` reduces to right
/// multiplication by a nilpotent; `M_i` are nilpotent shift polynomials and
/// `N_i` adjoints of such, of order `≤ 3`.
pub fn theorem2_instance(seed: u64, dim: usize, opts: &GenOptions) -> Result<Theorem2Instance> {
    check_dim(dim, MAX_THEOREM23_DIM)?;
    if let Some(t) = opts.nil_orders {
        if t.iter().any(|&k| k == 0 || k > 3 || k > dim) {
            return Err(Error::InvalidParam(format!("nilpotency orders must be in 1..={}, got {t:?}", dim.min(3))));
        }
    }
    let depth = opts.max_order.clamp(1, 2);
    retry("thm2", seed, |rng| {
        let alg = BlockAlgebra::random(rng, dim, 3, opts.conjugate);
        let kinds = pick_kinds(rng, |k: &[Kind; 2]| k[0].kills_triangle() || k[1].kills_delta());
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &k in &kinds {
            let scalars = alg.kind_scalars(rng, k);
            let zero = vec![Vec::new(); alg.sizes().len()];
            let base = alg.element(&scalars, &zero);
            let nil = alg.nilpotent(rng, depth);
            a.push(&base + &nil);
            b.push(base.adjoint());
        }
        let nil_targets = opts.nil_orders.unwrap_or_else(|| std::array::from_fn(|_| 1 + rng.below(3)));
        let mm = [alg.nilpotent(rng, nil_targets[0]), alg.nilpotent(rng, nil_targets[2])];
        let nn = [alg.nilpotent(rng, nil_targets[1]).adjoint(), alg.nilpotent(rng, nil_targets[3]).adjoint()];
        let x = alg.operand(rng);
        let orders = (
            nilpotency_order(&mm[0], &opts.tol),
            nilpotency_order(&nn[0], &opts.tol),
            nilpotency_order(&mm[1], &opts.tol),
            nilpotency_order(&nn[1], &opts.tol),
        );
        let (Some(m1), Some(n1), Some(m2), Some(n2)) = orders else {
            return Ok(None);
        };
        if opts.nil_orders.is_some_and(|t| t != [m1, n1, m2, n2]) {
            return Ok(None);
        }
        let Some((m, n)) = certify_pair_orders(Pair::new(&b[0], &a[0]), Pair::new(&b[1], &a[1]), &x, depth, &opts.tol)? else {
            return Ok(None);
        };
        Ok(Some(Theorem2Instance {
            a: [a[0].clone(), a[1].clone()],
            b: [b[0].clone(), b[1].clone()],
            mm,
            nn,
            x,
            m,
            n,
            nil: NilOrders { m1, n1, m2, n2 },
            kinds,
        }))
    })
}

/// A Drazin-invertible `A = Q(T₁ ⊕ T₂)Q*` that is `(X,(m,n))`-isosymmetric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Instance {
    pub a: CMatrix,
    pub x: CMatrix,
    pub m: usize,
    pub n: usize,
    /// Nilpotency index of `T₂` (Drazin index of `A`).
    pub p: usize,
    pub core_dim: usize,
    /// `T₁ ⊕ T₂` and `X₁₁ ⊕ X₂₂` before conjugation.
    pub canonical_a: CMatrix,
    pub canonical_x: CMatrix,
    pub strict: bool,
}

/// `A = diag(1, −1, 0)`, `X = I`, `m = n = p = 1`.
pub fn theorem3_default() -> Theorem3Instance {
    let a = CMatrix::real_diag(&[1.0, -1.0, 0.0]);
    let x = CMatrix::identity(3);
    Theorem3Instance { a: a.clone(), x: x.clone(), m: 1, n: 1, p: 1, core_dim: 2, canonical_a: a, canonical_x: x, strict: false }
}

/// Options for [`theorem3_instance`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Options {
    /// Nilpotency index of `T₂`; `None` draws from `1..=min(3, dim − 1)`.
    pub p: Option<usize>,
    /// Put a 2×2 Jordan block at 1 into `T₁` (strict (1,1)-isosymmetric core).
    pub strict: bool,
    /// Make `X₂₂` a nonzero multiple of the identity (forces `n = 2p − 1`).
    pub x22: bool,
    pub conjugate: bool,
}

impl Default for Theorem3Options {
    fn default() -> Self {
        Theorem3Options { p: None, strict: false, x22: true, conjugate: true }
    }
}

pub fn theorem3_instance(seed: u64, dim: usize, o: &Theorem3Options) -> Result<Theorem3Instance> {
    check_dim(dim, MAX_THEOREM23_DIM)?;
    if dim < 2 {
        return Err(Error::InvalidParam("theorem-3 instances need dim ≥ 2".into()));
    }
    let core_min = if o.strict { 2 } else { 1 };
    if dim < core_min + 1 {
        return Err(Error::InvalidParam(format!("strict theorem-3 instances need dim ≥ {}", core_min + 1)));
    }
    let p_max = 3.min(dim - core_min);
    if let Some(p) = o.p {
        if p == 0 || p > p_max {
            return Err(Error::InvalidParam(format!("index p must be in 1..={p_max} for dim {dim}")));
        }
    }
    let tol = ToleranceContext::default();
    retry("thm3", seed, |rng| {
        let p = o.p.unwrap_or_else(|| 1 + rng.below(p_max));
        // nilpotent part: dimension d2 ∈ [p, dim − core_min], blocks ≤ p, first = p
        let d2 = p + rng.below(dim - core_min - p + 1);
        let d1 = dim - d2;
        let mut t1 = CMatrix::zeros(d1);
        let mut x11 = CMatrix::zeros(d1);
        let mut offset = 0;
        if o.strict {
            t1.embed(0, &jordan_block(c(1.0, 0.0), 2));
            x11.embed(0, &CMatrix::identity(2).scale(rng.complex_in_annulus(0.5, 1.5)));
            offset = 2;
        }
        for i in offset..d1 {
            let sign = if i == offset && !o.strict { 1.0 } else if i == offset + 1 && !o.strict { -1.0 } else { rng.sign() };
            t1.set(i, i, c(sign, 0.0));
            x11.set(i, i, rng.complex_in_annulus(0.5, 1.5));
        }
        let mut t2 = CMatrix::zeros(d2);
        let mut sizes = vec![p];
        let mut left = d2 - p;
        while left > 0 {
            let s = 1 + rng.below(p.min(left));
            sizes.push(s);
            left -= s;
        }
        let mut off = 0;
        for &s in &sizes {
            let scaled = CMatrix::shift(s).scale_real(rng.uniform_in(0.5, 1.5));
            t2.embed(off, &scaled);
            off += s;
        }
        let x22 = if o.x22 { CMatrix::identity(d2).scale(rng.complex_in_annulus(0.5, 1.5)) } else { CMatrix::zeros(d2) };
        let n = if o.x22 { 2 * p - 1 } else { 1 };
        let canonical_a = t1.direct_sum(&t2);
        let canonical_x = x11.direct_sum(&x22);
        let (a, x) = if o.conjugate {
            let q = random_unitary(rng, dim);
            let qa = q.adjoint();
            (&(&q * &canonical_a) * &qa, &(&q * &canonical_x) * &qa)
        } else {
            (canonical_a.clone(), canonical_x.clone())
        };
        let b = a.adjoint();
        let ok = pair_vanishes(Pair::new(&b, &a), Pair::new(&b, &a), &x, 1, n, &tol)?;
        Ok(ok.then_some(Theorem3Instance { a, x, m: 1, n, p, core_dim: d1, canonical_a, canonical_x, strict: o.strict }))
    })
}

/// Named generator families exposed by `gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Jordan,
    Unitary,
    Selfadjoint,
    Commuting,
    Mr,
    Isonil,
    Thm1,
    Thm2,
    Thm3,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Jordan,
        Family::Unitary,
        Family::Selfadjoint,
        Family::Commuting,
        Family::Mr,
        Family::Isonil,
        Family::Thm1,
        Family::Thm2,
        Family::Thm3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Jordan => "jordan",
            Family::Unitary => "unitary",
            Family::Selfadjoint => "selfadjoint",
            Family::Commuting => "commuting",
            Family::Mr => "mr",
            Family::Isonil => "isonil",
            Family::Thm1 => "thm1",
            Family::Thm2 => "thm2",
            Family::Thm3 => "thm3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown family `{s}`")))
    }
}

/// Everything that determines a generated bundle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub family: Family,
    pub seed: u64,
    pub dim: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl GenSpec {
    pub fn new(family: Family, seed: u64, dim: usize) -> Self {
        GenSpec { family, seed, dim, params: BTreeMap::new() }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    fn allowed_params(&self) -> &'static [&'static str] {
        match self.family {
            Family::Jordan => &["lambda", "lambda_im"],
            Family::Unitary | Family::Selfadjoint => &[],
            Family::Commuting => &["count", "nilpotent"],
            Family::Mr => &["n", "lambda"],
            Family::Isonil => &["n", "phase"],
            Family::Thm1 => &["max_order", "conjugate"],
            Family::Thm2 => &["max_order", "conjugate", "m1", "n1", "m2", "n2"],
            Family::Thm3 => &["p", "strict", "x22", "conjugate", "default"],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim, Limits::from_env()?.max_dim)?;
        let allowed = self.allowed_params();
        for (k, v) in &self.params {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::InvalidParam(format!(
                    "family `{}` does not take parameter `{k}` (allowed: {})",
                    self.family,
                    allowed.join(", ")
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidParam(format!("parameter `{k}` must be finite")));
            }
        }
        Ok(())
    }

    pub fn float(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    pub fn int(&self, key: &str) -> Result<Option<usize>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 && v < 1e9 => Ok(Some(v as usize)),
            Some(&v) => Err(Error::InvalidParam(format!("parameter `{key}` must be a nonnegative integer, got {v}"))),
        }
    }

    pub fn flag(&self, key: &str, default: bool) -> Result<bool> {
        Ok(self.int(key)?.map(|v| v != 0).unwrap_or(default))
    }
}
