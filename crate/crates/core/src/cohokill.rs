//! Constructive witnesses that rational functions lie in the image of the
//! universal additive form F(X) = −X₀ + Σ_f λ^f X_f^p (or its α_p variant
//! Σ_f λ^f X_f^p) over K(T), possibly after a substitution T ↦ αT^{p^d}.
//!
//! Every construction returns a certificate that is re-verified exactly:
//! F(H) = G(αT^{p^d}) as elements of K(T) over the (possibly extended)
//! field tower.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::idx::{self, MultiIdx};
use crate::kfield::{Ctx, KElement};
use crate::linalg;
use crate::pfd::{classical_pfd, PoleSupport};
use crate::ratfun::{substitute, RatFun, UPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetForm {
    /// −X₀ + Σ_{f∈I₁} λ^f X_f^p
    V,
    /// Σ_{f∈I₁} λ^f X_f^p
    AlphaP,
}

/// Substitution data (α, d) plus coordinates H over K(T) certifying
/// F(H) = G(αT^{p^d}); the context may carry adjunctions made along the way.
#[derive(Debug, Clone)]
pub struct Witness {
    pub ctx: Ctx,
    pub target: TargetForm,
    pub alpha: KElement,
    pub d: u32,
    /// Indexed by I₁ in enumeration order.
    pub coords: Vec<RatFun>,
}

impl Witness {
    pub fn zero(ctx: &Ctx, target: TargetForm) -> Witness {
        let p = ctx.p as u32;
        let slots = idx::enumerate(ctx.r, p).len();
        Witness {
            ctx: ctx.clone(),
            target,
            alpha: KElement::one(ctx),
            d: 0,
            coords: vec![RatFun::zero(ctx); slots],
        }
    }

    pub fn lift_to(&self, ctx: &Ctx) -> Result<Witness> {
        Ok(Witness {
            ctx: ctx.clone(),
            target: self.target,
            alpha: self.alpha.lift_to(ctx)?,
            d: self.d,
            coords: self
                .coords
                .iter()
                .map(|c| c.lift_to(ctx))
                .collect::<Result<_>>()?,
        })
    }

    /// Coordinatewise sum; requires identical substitutions.
    pub fn add(&self, other: &Witness) -> Result<Witness> {
        assert_eq!(self.ctx.id, other.ctx.id, "witness contexts differ");
        assert_eq!(self.target, other.target);
        assert!(self.alpha == other.alpha && self.d == other.d, "substitutions differ");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Witness { ctx: self.ctx.clone(), target: self.target, alpha: self.alpha.clone(), d: self.d, coords })
    }

    pub fn neg(&self) -> Witness {
        Witness {
            ctx: self.ctx.clone(),
            target: self.target,
            alpha: self.alpha.clone(),
            d: self.d,
            coords: self.coords.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Add coordinates only, keeping this witness's substitution data. Used
    /// when the caller has already aligned the certified identities.
    pub fn add_coords(&self, other: &Witness) -> Result<Witness> {
        assert_eq!(self.ctx.id, other.ctx.id, "witness contexts differ");
        assert_eq!(self.target, other.target);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(Witness {
            ctx: self.ctx.clone(),
            target: self.target,
            alpha: self.alpha.clone(),
            d: self.d,
            coords,
        })
    }

    pub fn sub(&self, other: &Witness) -> Result<Witness> {
        self.add(&other.neg())
    }

    /// Apply a further substitution T ↦ α'T^{p^{d'}} to the certified
    /// identity: coordinates compose and the substitution data composes to
    /// (α·α'^{p^d}, d+d').
    pub fn substitute_further(&self, alpha2: &KElement, d2: u32) -> Result<Witness> {
        if alpha2.is_zero() {
            return Err(Error::ZeroScale);
        }
        let coords = self
            .coords
            .iter()
            .map(|c| substitute(c, alpha2, d2))
            .collect::<Result<_>>()?;
        Ok(Witness {
            ctx: self.ctx.clone(),
            target: self.target,
            alpha: self.alpha.mul(&alpha2.frobenius(self.d)),
            d: self.d + d2,
            coords,
        })
    }
}

/// ∏ basis_i^{f(i)}.
fn basis_pow(basis: &[KElement], f: &[u32]) -> KElement {
    let ctx = &basis[0].ctx;
    let mut acc = KElement::one(ctx);
    for (b, &e) in basis.iter().zip(f) {
        acc = acc.mul(&b.pow(e));
    }
    acc
}

/// Evaluate the additive form attached to `target` on coordinates, with the
/// given p-basis supplying the coefficients.
pub fn f_eval(basis: &[KElement], target: TargetForm, coords: &[RatFun]) -> Result<RatFun> {
    let ctx = &basis[0].ctx;
    let p = ctx.p as u32;
    let idxs = idx::enumerate(basis.len(), p);
    assert_eq!(coords.len(), idxs.len());
    let mut acc = RatFun::zero(ctx);
    for (fi, f) in idxs.iter().enumerate() {
        let t = coords[fi].pow_p(1)?.mul_scalar(&basis_pow(basis, f))?;
        acc = acc.add(&t)?;
    }
    if target == TargetForm::V {
        acc = acc.sub(&coords[0])?;
    }
    Ok(acc)
}

fn lambda_basis(ctx: &Ctx) -> Vec<KElement> {
    (0..ctx.r).map(|i| KElement::lambda(ctx, i)).collect()
}

/// Exact check that F(cert.H) = G(αT^{p^d}), in the certificate's context
/// and the standard λ-basis. Pure: performs no adjunctions.
pub fn verify_witness(g: &RatFun, w: &Witness) -> bool {
    let check = || -> Result<bool> {
        let gl = g.lift_to(&w.ctx)?;
        let lhs = f_eval(&lambda_basis(&w.ctx), w.target, &w.coords)?;
        let rhs = substitute(&gl, &w.alpha, w.d)?;
        Ok(lhs == rhs)
    };
    check().unwrap_or(false)
}

/// Binomial coefficient mod p by Lucas' rule.
pub fn lucas_binom(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return 0;
        }
        // digits are < p: direct product formula
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..kd {
            num = num * ((nd - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        let mut dinv = 1u64;
        for _ in 0..p - 2 {
            dinv = dinv * den % p;
        }
        acc = acc * num % p * dinv % p;
        n /= p;
        k /= p;
    }
    acc
}

/// Closed-form witness for β/(T^{p^n} + basis₁): adjoin γ with
/// ℘(γ) = basis₁^{-1}β, lay down the binomial-weighted coordinates along the
/// basis₁-chain, then substitute T ↦ T^{p^{n-1}} for higher n.
pub fn witness_simple_pole_in_basis(
    ctx: &Ctx,
    basis: &[KElement],
    beta: &KElement,
    n: u32,
) -> Result<(Ctx, Witness)> {
    assert!(n >= 1);
    let p = ctx.p;
    if beta.is_zero() {
        return Ok((ctx.clone(), Witness::zero(ctx, TargetForm::V)));
    }
    let c = basis[0].inv()?.mul(beta);
    let (cx, gamma) = ctx.adjoin_artin_schreier(&c)?;
    let basis: Vec<KElement> = basis
        .iter()
        .map(|b| b.lift_to(&cx))
        .collect::<Result<_>>()?;
    let q = UPoly::from_terms(
        &cx,
        vec![(p, KElement::one(&cx)), (0, basis[0].clone())],
    );
    let idxs = idx::enumerate(basis.len(), p as u32);
    let mut coords = Vec::with_capacity(idxs.len());
    for f in &idxs {
        if f[1..].iter().any(|&x| x != 0) {
            coords.push(RatFun::zero(&cx));
            continue;
        }
        let j = f[0] as u64;
        let h = if j == 0 {
            // basis₁·γ / (T^p + basis₁)
            RatFun::new(
                UPoly::constant(basis[0].mul(&gamma)),
                q.clone(),
            )?
        } else {
            let cb = lucas_binom(p - 1, j - 1, p);
            let coeff = gamma.mul_int(cb as i64);
            RatFun::new(UPoly::monomial(coeff, p - j), q.clone())?
        };
        coords.push(h);
    }
    let mut w = Witness {
        ctx: cx.clone(),
        target: TargetForm::V,
        alpha: KElement::one(&cx),
        d: 0,
        coords,
    };
    if n > 1 {
        // composing the level-1 identity with T ↦ T^{p^{n-1}} certifies the
        // level-n target with an unchanged substitution
        let one = KElement::one(&cx);
        w.coords = w
            .coords
            .iter()
            .map(|c| substitute(c, &one, n - 1))
            .collect::<Result<_>>()?;
    }
    Ok((cx, w))
}

/// Witness for (∏ basis_i^{f(i)})·G^{p^n}, f ∈ I_n nonzero; no adjunctions.
pub fn witness_monomial_ppower_in_basis(
    ctx: &Ctx,
    basis: &[KElement],
    f: &MultiIdx,
    g: &RatFun,
    n: u32,
) -> Result<Witness> {
    assert!(n >= 1 && !idx::is_zero(f));
    let p = ctx.p as u32;
    if n == 1 {
        let idxs = idx::enumerate(basis.len(), p);
        let fi = idxs.iter().position(|x| x == f).expect("index in I_1");
        let mut w = Witness::zero(ctx, TargetForm::V);
        w.coords[fi] = g.clone();
        return Ok(w);
    }
    let h = idx::rem(f, p);
    let tail = idx::div(&idx::sub(f, &h), p);
    let gprime = g
        .pow_p(n - 1)?
        .mul_scalar(&basis_pow(basis, &tail))?;
    if !idx::is_zero(&h) {
        witness_monomial_ppower_in_basis(ctx, basis, &h, &gprime, 1)
    } else {
        // basis^f G^{p^n} = (basis^tail G^{p^{n-1}})^p
        //                 = F(frobenius diff) + basis^tail G^{p^{n-1}}
        let w2 = witness_frobenius_diff_in_basis(ctx, basis, &gprime, 1)?;
        let w1 = witness_monomial_ppower_in_basis(ctx, basis, &tail, g, n - 1)?;
        w1.add(&w2)
    }
}

/// Witness for G^{p^n} − G; no adjunctions.
pub fn witness_frobenius_diff_in_basis(
    ctx: &Ctx,
    basis: &[KElement],
    g: &RatFun,
    n: u32,
) -> Result<Witness> {
    assert!(n >= 1);
    let _ = basis;
    if n == 1 {
        let mut w = Witness::zero(ctx, TargetForm::V);
        w.coords[0] = g.clone();
        return Ok(w);
    }
    let w1 = witness_frobenius_diff_in_basis(ctx, basis, &g.pow_p(n - 1)?, 1)?;
    let w2 = witness_frobenius_diff_in_basis(ctx, basis, g, n - 1)?;
    w1.add(&w2)
}

/// Batched witness for Σ_ℓ β_ℓ T^ℓ/(T^{p^n} + basis₁), 0 ≤ ℓ < p^n, all in
/// one pass: a single starting simple-pole witness (one Artin–Schreier
/// adjunction), its level-n expansion along the basis₁-chain, and the
/// congruence-lemma corrections.
pub fn witness_pole_batch_in_basis(
    ctx: &Ctx,
    basis: &[KElement],
    coeffs: &BTreeMap<u64, KElement>,
    n: u32,
) -> Result<(Ctx, Witness)> {
    let p = ctx.p;
    let pn = p.pow(n);
    if coeffs.values().all(|b| b.is_zero()) {
        return Ok((ctx.clone(), Witness::zero(ctx, TargetForm::V)));
    }
    // per-ℓ setup: j = p^n−1−ℓ, rr = (ℓ+1) mod p^n, scale by the Lucas unit
    let mut entries = vec![];
    let mut start = KElement::zero(ctx);
    for (&ell, beta) in coeffs {
        assert!(ell < pn, "pole term exponent out of range");
        if beta.is_zero() {
            continue;
        }
        let j = pn - 1 - ell;
        let rr = (ell + 1) % pn;
        let e = ((j + rr) / pn) as u32;
        let cb = lucas_binom(pn - 1, j, p);
        assert!(cb != 0, "Lucas binomial must be a unit here");
        let unit = KElement::from_int(ctx, cb as i64).mul(&basis[0].pow(e));
        let b = beta.div(&unit)?;
        start = start.add(&basis[0].pow(rr as u32).mul(&b.frobenius(n)));
        entries.push((ell, rr, b));
    }
    let (cx, w_all) = witness_simple_pole_in_basis(ctx, basis, &start, n)?;
    let basis: Vec<KElement> = basis
        .iter()
        .map(|b| b.lift_to(&cx))
        .collect::<Result<_>>()?;
    let q = UPoly::from_terms(
        &cx,
        vec![(pn, KElement::one(&cx)), (0, basis[0].clone())],
    );
    // the unique expansion start/q = Σ_{i<p^n} basis₁^i G_i^{p^n}
    let mut g_list = vec![RatFun::zero(&cx); pn as usize];
    for (_, rr, b) in &entries {
        let b = b.lift_to(&cx)?;
        for jj in 0..pn {
            let i = ((rr + jj) % pn) as usize;
            let cb = lucas_binom(pn - 1, jj, p);
            if cb == 0 {
                continue;
            }
            let coeff = b
                .mul_int(cb as i64)
                .mul(&basis[0].pow(((rr + jj) / pn) as u32));
            let t = RatFun::new(UPoly::monomial(coeff, pn - 1 - jj), q.clone())?;
            g_list[i] = g_list[i].add(&t)?;
        }
    }
    // sanity: the expansion reproduces start/q exactly
    {
        let mut sum = RatFun::zero(&cx);
        for (i, gi) in g_list.iter().enumerate() {
            let t = gi.pow_p(n)?.mul_scalar(&basis[0].pow(i as u32))?;
            sum = sum.add(&t)?;
        }
        let lhs = RatFun::new(
            UPoly::constant(start.lift_to(&cx)?),
            q.clone(),
        )?;
        assert_eq!(sum, lhs, "basis₁-chain expansion must be exact");
    }
    let mut w = w_all;
    for (i, gi) in g_list.iter().enumerate().skip(1) {
        if gi.is_zero() {
            continue;
        }
        let mut f = vec![0u32; basis.len()];
        f[0] = i as u32;
        let wi = witness_monomial_ppower_in_basis(&cx, &basis, &f, gi, n)?;
        w = w.sub(&wi)?;
    }
    if !g_list[0].is_zero() {
        let wf = witness_frobenius_diff_in_basis(&cx, &basis, &g_list[0], n)?;
        w = w.sub(&wf)?;
    }
    Ok((cx, w))
}

// ---------------------------------------------------------------------------
// p-basis exchange

/// Data converting witnesses for the μ-completed basis form F_μ into
/// witnesses for the standard form F_λ: an invertible matrix A and scalar c
/// with F_μ(A·X) = c·F_λ(X).
struct Exchange {
    basis: Vec<KElement>,
    a_inv: Vec<Vec<KElement>>,
    c: KElement,
}

fn build_exchange(ctx: &Ctx, mu: &KElement) -> Result<(Ctx, Exchange)> {
    let r = ctx.r;
    let p = ctx.p as u32;
    // exchange μ against some λ_{i0}, keeping a p-basis
    let mut basis = None;
    for i0 in 0..r {
        let mut cand = vec![mu.clone()];
        for i in 0..r {
            if i != i0 {
                cand.push(KElement::lambda(ctx, i));
            }
        }
        if crate::imprim::is_p_independent(ctx, &cand)? {
            basis = Some(cand);
            break;
        }
    }
    let basis = basis.ok_or(Error::ExchangeFailed)?;
    let idxs = idx::enumerate(r, p);
    // zero-components m^{(h,g)} of the μ-expansions of λ^h μ^g
    let lam = lambda_basis(ctx);
    let mut rows = vec![];
    for h in idxs.iter().skip(1) {
        let lh = basis_pow(&lam, h);
        let mut row = Vec::with_capacity(idxs.len());
        for g in &idxs {
            let x = lh.mul(&basis_pow(&basis, g));
            let comps = x.expand_in_basis(&basis, 1)?;
            let zero_idx = vec![0u32; r];
            let m0 = comps
                .iter()
                .find(|(f, _)| *f == zero_idx)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(|| KElement::zero(ctx));
            row.push(m0);
        }
        rows.push(row);
    }
    let kernel = linalg::kernel(&rows);
    let gamma = kernel
        .iter()
        .find(|v| !v[0].is_zero())
        .cloned()
        .or_else(|| {
            // try sums of kernel basis vectors
            for i in 0..kernel.len() {
                for j in i + 1..kernel.len() {
                    let v: Vec<KElement> = kernel[i]
                        .iter()
                        .zip(&kernel[j])
                        .map(|(a, b)| a.add(b))
                        .collect();
                    if !v[0].is_zero() {
                        return Some(v);
                    }
                }
            }
            None
        })
        .ok_or(Error::ExchangeFailed)?;
    // c₁ = Σ μ^g γ_g^p, then scale γ by t with t^{p−1} = γ₀/c₁
    let mut c1 = KElement::zero(ctx);
    for (gi, g) in idxs.iter().enumerate() {
        c1 = c1.add(&basis_pow(&basis, g).mul(&gamma[gi].frobenius(1)));
    }
    if c1.is_zero() {
        return Err(Error::ExchangeFailed);
    }
    let ratio = gamma[0].div(&c1)?;
    let (cx, t) = if p == 2 {
        (ctx.clone(), ratio)
    } else {
        ctx.adjoin_radical(&ratio, p - 1)?
    };
    let basis: Vec<KElement> = basis
        .iter()
        .map(|b| b.lift_to(&cx))
        .collect::<Result<_>>()?;
    let c = t.frobenius(1).mul(&c1.lift_to(&cx)?);
    // A's column h is the μ-expansion of c·λ^h
    let lam = lambda_basis(&cx);
    let mut a = vec![vec![KElement::zero(&cx); idxs.len()]; idxs.len()];
    for (hi, h) in idxs.iter().enumerate() {
        let target = c.mul(&basis_pow(&lam, h));
        let comps = target.expand_in_basis(&basis, 1)?;
        for (f, coeff) in comps {
            let fi = idxs.iter().position(|x| *x == f).unwrap();
            a[fi][hi] = coeff;
        }
    }
    // the defining properties of (A, c)
    assert_eq!(a[0][0], c, "p-power part of c must be c itself");
    for hi in 1..idxs.len() {
        assert!(a[0][hi].is_zero(), "p-power part of c·λ^h must vanish");
    }
    let a_inv = linalg::invert(&a).ok_or(Error::Singular)?;
    Ok((cx, Exchange { basis, a_inv, c }))
}

/// Witness for Σ β_ℓ T^ℓ/(T^{p^n}+μ) with μ ∉ K^p, without substitution:
/// directly along the λ₁-chain when μ = λ₁, otherwise through the p-basis
/// exchange transform.
pub fn witness_pole_batch(
    ctx: &Ctx,
    coeffs: &BTreeMap<u64, KElement>,
    mu: &KElement,
    n: u32,
) -> Result<(Ctx, Witness)> {
    if mu.pth_root().is_ok() {
        return Err(Error::PthPowerModulus);
    }
    let lam = lambda_basis(ctx);
    if *mu == lam[0] {
        return witness_pole_batch_in_basis(ctx, &lam, coeffs, n);
    }
    let (cx, ex) = build_exchange(ctx, mu)?;
    let scaled: BTreeMap<u64, KElement> = coeffs
        .iter()
        .map(|(&l, b)| Ok((l, ex.c.mul(&b.lift_to(&cx)?))))
        .collect::<Result<_>>()?;
    let (cx2, wmu) = witness_pole_batch_in_basis(&cx, &ex.basis, &scaled, n)?;
    // convert: H := A^{-1}·H_μ certifies F_λ(H) = c^{-1}·F_μ(H_μ) = target
    let mut coords = vec![RatFun::zero(&cx2); wmu.coords.len()];
    for (i, row) in ex.a_inv.iter().enumerate() {
        let mut acc = RatFun::zero(&cx2);
        for (j, aij) in row.iter().enumerate() {
            let t = wmu.coords[j].mul_scalar(&aij.lift_to(&cx2)?)?;
            acc = acc.add(&t)?;
        }
        coords[i] = acc;
    }
    Ok((
        cx2.clone(),
        Witness {
            ctx: cx2,
            target: TargetForm::V,
            alpha: wmu.alpha,
            d: wmu.d,
            coords,
        },
    ))
}

/// Single pole term β·T^ℓ/(T^{p^n}+μ), μ ∉ K^p (d = 0, α = 1).
pub fn witness_pole_term(
    ctx: &Ctx,
    beta: &KElement,
    mu: &KElement,
    ell: u64,
    n: u32,
) -> Result<(Ctx, Witness)> {
    let mut coeffs = BTreeMap::new();
    coeffs.insert(ell, beta.clone());
    witness_pole_batch(ctx, &coeffs, mu, n)
}

/// Kill β·T^ℓ/(T^{p^n}+μ) for arbitrary μ: recursion on n through p-th roots
/// of the modulus, with substitutions where the exponent is prime to p.
pub fn kill_pole_term(
    ctx: &Ctx,
    beta: &KElement,
    mu: &KElement,
    ell: u64,
    n: u32,
) -> Result<(Ctx, Witness)> {
    let p = ctx.p;
    if beta.is_zero() {
        return Ok((ctx.clone(), Witness::zero(ctx, TargetForm::V)));
    }
    let lam1 = KElement::lambda(ctx, 0);
    if n == 0 {
        // G(βT^p/λ₁) = λ₁/(T^p + μλ₁/β)
        assert_eq!(ell, 0);
        let alpha = beta.div(&lam1)?;
        let mu2 = mu.mul(&lam1).div(beta)?;
        let (cx, mut w) = match mu2.pth_root() {
            Err(Error::NotAPthPower) => {
                witness_pole_term(ctx, &lam1, &mu2, 0, 1)?
            }
            Ok(gamma) => {
                // λ₁·(1/(T+γ))^p
                let g = RatFun::new(
                    UPoly::one(ctx),
                    UPoly::from_terms(ctx, vec![(1, KElement::one(ctx)), (0, gamma)]),
                )?;
                let mut f = vec![0u32; ctx.r];
                f[0] = 1;
                let lam = lambda_basis(ctx);
                (ctx.clone(), witness_monomial_ppower_in_basis(ctx, &lam, &f, &g, 1)?)
            }
            Err(e) => return Err(e),
        };
        w.alpha = alpha.lift_to(&cx)?.mul(&w.alpha);
        w.d += 1;
        return Ok((cx, w));
    }
    match mu.pth_root() {
        Err(Error::NotAPthPower) => witness_pole_term(ctx, beta, mu, ell, n),
        Err(e) => Err(e),
        Ok(gamma) => {
            if ell % p == 0 {
                // β = Σ λ^f c_f^p pushes everything down one level
                let exp = beta.pbasis_expand(1)?;
                let denom = UPoly::from_terms(
                    ctx,
                    vec![(p.pow(n - 1), KElement::one(ctx)), (0, gamma.clone())],
                );
                let lam = lambda_basis(ctx);
                let mut w_fixed = Witness::zero(ctx, TargetForm::V);
                let mut c0 = KElement::zero(ctx);
                for f in idx::enumerate(ctx.r, p as u32) {
                    let cf = exp.coeff(&f, ctx);
                    if cf.is_zero() {
                        continue;
                    }
                    let gf = RatFun::new(UPoly::monomial(cf.clone(), ell / p), denom.clone())?;
                    if idx::is_zero(&f) {
                        c0 = cf;
                        let wf = witness_frobenius_diff_in_basis(ctx, &lam, &gf, 1)?;
                        w_fixed = w_fixed.add(&wf)?;
                    } else {
                        let wf = witness_monomial_ppower_in_basis(ctx, &lam, &f, &gf, 1)?;
                        w_fixed = w_fixed.add(&wf)?;
                    }
                }
                let (cx, w_rec) = kill_pole_term(ctx, &c0, &gamma, ell / p, n - 1)?;
                let composed = w_fixed
                    .lift_to(&cx)?
                    .substitute_further(&w_rec.alpha, w_rec.d)?;
                let total = composed.add(&w_rec)?;
                Ok((cx, total))
            } else {
                // α^{p^n − ℓ} = β/λ₁, then G(αT^p) = λ₁(T^ℓ/(T^{p^n}+γα^{-p^{n-1}}))^p
                let radicand = beta.div(&lam1)?;
                let expo = (p.pow(n) - ell) as u32;
                let (cx, alpha) = ctx.adjoin_radical(&radicand, expo)?;
                let gamma = gamma.lift_to(&cx)?;
                let shift = gamma.mul(&alpha.frobenius(n - 1).inv()?);
                let g = RatFun::new(
                    UPoly::monomial(KElement::one(&cx), ell),
                    UPoly::from_terms(&cx, vec![(p.pow(n), KElement::one(&cx)), (0, shift)]),
                )?;
                let mut f = vec![0u32; ctx.r];
                f[0] = 1;
                let lam = lambda_basis(&cx);
                let mut w = witness_monomial_ppower_in_basis(&cx, &lam, &f, &g, 1)?;
                w.alpha = alpha.mul(&w.alpha);
                w.d += 1;
                Ok((cx, w))
            }
        }
    }
}

/// Kill a monomial c·T^m.
pub fn kill_monomial(ctx: &Ctx, c: &KElement, m: u64) -> Result<(Ctx, Witness)> {
    let p = ctx.p;
    if c.is_zero() {
        return Ok((ctx.clone(), Witness::zero(ctx, TargetForm::V)));
    }
    if m == 0 {
        // ℘(γ) = c gives −γ + γ^p = c
        let (cx, gamma) = ctx.adjoin_artin_schreier(c)?;
        let lam = lambda_basis(&cx);
        let w = witness_frobenius_diff_in_basis(
            &cx,
            &lam,
            &RatFun::constant(gamma),
            1,
        )?;
        return Ok((cx, w));
    }
    if m % p == 0 {
        let exp = c.pbasis_expand(1)?;
        let lam = lambda_basis(ctx);
        let mut w_fixed = Witness::zero(ctx, TargetForm::V);
        let mut c0 = KElement::zero(ctx);
        for f in idx::enumerate(ctx.r, p as u32) {
            let cf = exp.coeff(&f, ctx);
            if cf.is_zero() {
                continue;
            }
            let gf = RatFun::from_poly(UPoly::monomial(cf.clone(), m / p));
            if idx::is_zero(&f) {
                c0 = cf;
                w_fixed = w_fixed.add(&witness_frobenius_diff_in_basis(ctx, &lam, &gf, 1)?)?;
            } else {
                w_fixed = w_fixed.add(&witness_monomial_ppower_in_basis(ctx, &lam, &f, &gf, 1)?)?;
            }
        }
        let (cx, w_rec) = kill_monomial(ctx, &c0, m / p)?;
        let composed = w_fixed
            .lift_to(&cx)?
            .substitute_further(&w_rec.alpha, w_rec.d)?;
        return Ok((cx, composed.add(&w_rec)?));
    }
    // p ∤ m: α^m = c^{-1}λ₁ turns the monomial into λ₁(T^m)^p
    let lam1 = KElement::lambda(ctx, 0);
    let radicand = c.inv()?.mul(&lam1);
    let (cx, alpha) = ctx.adjoin_radical(&radicand, m as u32)?;
    let g = RatFun::from_poly(UPoly::monomial(KElement::one(&cx), m));
    let mut f = vec![0u32; ctx.r];
    f[0] = 1;
    let lam = lambda_basis(&cx);
    let mut w = witness_monomial_ppower_in_basis(&cx, &lam, &f, &g, 1)?;
    w.alpha = alpha.mul(&w.alpha);
    w.d += 1;
    Ok((cx, w))
}

/// One S-term of the decomposition of G.
#[derive(Debug, Clone)]
enum Term {
    Mono { c: KElement, m: u64 },
    PoleBatch { n: u32, mu: KElement, coeffs: BTreeMap<u64, KElement> },
}

impl Term {
    fn substitute(&self, ctx: &Ctx, alpha: &KElement, d: u32) -> Result<Term> {
        let p = ctx.p;
        Ok(match self {
            Term::Mono { c, m } => Term::Mono {
                c: c.mul(&alpha.pow(*m as u32)),
                m: m * p.pow(d),
            },
            Term::PoleBatch { n, mu, coeffs } => {
                let apn = alpha.frobenius(*n);
                let mu2 = mu.mul(&apn.inv()?);
                let mut out = BTreeMap::new();
                for (&ell, beta) in coeffs {
                    // β T^ℓ/(T^{p^n}+μ) ∘ (αT^{p^d})
                    //   = (β α^{ℓ−p^n}) T^{ℓp^d} / (T^{p^{n+d}} + μα^{−p^n})
                    let b2 = beta.mul(&alpha.pow(ell as u32)).mul(&apn.inv()?);
                    out.insert(ell * p.pow(d), b2);
                }
                Term::PoleBatch { n: n + d, mu: mu2, coeffs: out }
            }
        })
    }

    fn lift_to(&self, ctx: &Ctx) -> Result<Term> {
        Ok(match self {
            Term::Mono { c, m } => Term::Mono { c: c.lift_to(ctx)?, m: *m },
            Term::PoleBatch { n, mu, coeffs } => Term::PoleBatch {
                n: *n,
                mu: mu.lift_to(ctx)?,
                coeffs: coeffs
                    .iter()
                    .map(|(&l, b)| Ok((l, b.lift_to(ctx)?)))
                    .collect::<Result<_>>()?,
            },
        })
    }

    fn value(&self, ctx: &Ctx) -> Result<RatFun> {
        Ok(match self {
            Term::Mono { c, m } => RatFun::from_poly(UPoly::monomial(c.lift_to(ctx)?, *m)),
            Term::PoleBatch { n, mu, coeffs } => {
                let p = ctx.p;
                let q = UPoly::from_terms(
                    ctx,
                    vec![(p.pow(*n), KElement::one(ctx)), (0, mu.lift_to(ctx)?)],
                );
                let mut num = UPoly::zero(ctx);
                for (&l, b) in coeffs {
                    num = num.add(&UPoly::monomial(b.lift_to(ctx)?, l));
                }
                RatFun::new(num, q)?
            }
        })
    }
}

/// Kill the class of G in one shot: decompose into S-terms against the
/// declared denominator factorization, kill terms in order (monomials by
/// ascending degree, then pole terms by ascending level), composing
/// substitutions; already-killed terms stay killed because the substitution
/// maps the image of the form into itself.
pub fn kill_class(
    ctx: &Ctx,
    g: &RatFun,
    factors: &[(u32, KElement)],
    target: TargetForm,
) -> Result<(Ctx, Witness)> {
    let p = ctx.p;
    if target == TargetForm::AlphaP {
        return kill_class_alphap(ctx, g);
    }
    if g.is_zero() {
        return Ok((ctx.clone(), Witness::zero(ctx, TargetForm::V)));
    }
    // declared factorization check (by multiplication)
    let mut qs = vec![];
    for (n, mu) in factors {
        qs.push(UPoly::from_terms(
            ctx,
            vec![(p.pow(*n), KElement::one(ctx)), (0, mu.clone())],
        ));
    }
    let support = PoleSupport::new(qs.clone())?;
    let mut rest = g.den.clone();
    let mut mults = vec![0u32; qs.len()];
    for (i, q) in qs.iter().enumerate() {
        loop {
            let (quo, rem) = rest.divrem(q)?;
            if rem.is_zero() {
                mults[i] += 1;
                rest = quo;
            } else {
                break;
            }
        }
    }
    if rest.degree() != Some(0) {
        return Err(Error::UndeclaredPole);
    }
    let mut check = UPoly::one(ctx);
    for (q, &e) in qs.iter().zip(&mults) {
        check = check.mul(&q.pow(e));
    }
    if check != g.den {
        return Err(Error::UndeclaredPole);
    }
    // polynomial part (monomials, ascending degree) + proper pole parts
    let (poly, propnum) = g.num.divrem(&g.den)?;
    let proper = RatFun::new(propnum, g.den.clone())?;
    let mut queue: Vec<Term> = poly
        .terms
        .iter()
        .map(|(e, c)| Term::Mono { c: c.clone(), m: *e })
        .collect();
    if !proper.is_zero() {
        let parts = classical_pfd(&proper, &support)?;
        let mut pole_terms: Vec<(u32, usize, u64, Term)> = vec![];
        for (i, part) in parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            // lift the denominator power to a p-power: q^e → q^{p^k};
            // q^{p^k} = T^{p^{n+k}} + μ^{p^k}
            let (e, _) = {
                let mut e = 0u32;
                let mut d = part.den.clone();
                while d.degree() != Some(0) {
                    let (quo, rem) = d.divrem(&qs[i])?;
                    assert!(rem.is_zero(), "component denominator is a power of its pole");
                    e += 1;
                    d = quo;
                }
                (e, d)
            };
            let mut k = 0u32;
            while p.pow(k) < e as u64 {
                k += 1;
            }
            let lift_num = part.num.mul(&qs[i].pow(p.pow(k) as u32 - e));
            let (n2, mu2) = (factors[i].0 + k, factors[i].1.frobenius(k));
            let coeffs: BTreeMap<u64, KElement> = lift_num
                .terms
                .iter()
                .map(|(exp, c)| (*exp, c.clone()))
                .collect();
            // a level-0 or p-th-power modulus needs the substitution
            // recursion per term; a fresh modulus can be batched
            let batchable = n2 >= 1 && matches!(mu2.pth_root(), Err(Error::NotAPthPower));
            if batchable {
                pole_terms.push((n2, i, 0, Term::PoleBatch { n: n2, mu: mu2, coeffs }));
            } else {
                for (ell, beta) in coeffs {
                    let single: BTreeMap<u64, KElement> =
                        BTreeMap::from([(ell, beta)]);
                    pole_terms.push((
                        n2,
                        i,
                        ell,
                        Term::PoleBatch { n: n2, mu: mu2.clone(), coeffs: single },
                    ));
                }
            }
        }
        pole_terms.sort_by_key(|(n, i, ell, _)| (*n, *i, *ell));
        queue.extend(pole_terms.into_iter().map(|(_, _, _, t)| t));
    }
    // the S-term decomposition must re-sum to G exactly
    {
        let mut sum = RatFun::zero(ctx);
        for t in &queue {
            sum = sum.add(&t.value(ctx)?)?;
        }
        assert_eq!(&sum, g, "S-term decomposition must be exact");
    }
    // main loop invariant: substitute(G, acc.alpha, acc.d)
    //   = F(acc.coords) + Σ value(queue[j..])
    let mut cur_ctx = ctx.clone();
    let mut acc = Witness::zero(ctx, TargetForm::V);
    for term_idx in 0..queue.len() {
        let term = queue[term_idx].lift_to(&cur_ctx)?;
        let (cx, w) = match &term {
            Term::Mono { c, m } => kill_monomial(&cur_ctx, c, *m)?,
            Term::PoleBatch { n, mu, coeffs } => {
                if *n >= 1 && matches!(mu.pth_root(), Err(Error::NotAPthPower)) {
                    witness_pole_batch(&cur_ctx, coeffs, mu, *n)?
                } else {
                    assert_eq!(coeffs.len(), 1, "p-power moduli are enqueued singly");
                    let (&ell, beta) = coeffs.iter().next().unwrap();
                    kill_pole_term(&cur_ctx, beta, mu, ell, *n)?
                }
            }
        };
        // step substitution σ = (w.alpha, w.d); push it through everything
        acc = acc.lift_to(&cx)?.substitute_further(&w.alpha, w.d)?;
        acc = acc.add_coords(&w)?;
        for t in queue.iter_mut().skip(term_idx + 1) {
            *t = t.lift_to(&cx)?.substitute(&cx, &w.alpha, w.d)?;
        }
        cur_ctx = cx;
    }
    assert!(verify_witness(g, &acc), "kill_class certificate must verify");
    Ok((cur_ctx, acc))
}

/// α_p target: T ↦ T^p makes every coefficient situation a p-th power; the
/// coordinates are the level-1 expansions of the coefficients of G(T^p).
pub fn kill_class_alphap(ctx: &Ctx, g: &RatFun) -> Result<(Ctx, Witness)> {
    let one = KElement::one(ctx);
    let gs = substitute(g, &one, 1)?;
    let p = ctx.p as u32;
    // E := num·den^{p−1} lies in K[T^p]; expand coefficient-wise
    let e = gs.num.mul(&gs.den.pow(p - 1));
    let idxs = idx::enumerate(ctx.r, p);
    let mut nums = vec![UPoly::zero(ctx); idxs.len()];
    for (exp, c) in &e.terms {
        assert_eq!(exp % ctx.p, 0, "composition with T^p has p-divisible exponents");
        let comps = c.expand_level1()?;
        for (fi, cf) in comps.iter().enumerate() {
            if !cf.is_zero() {
                nums[fi] = nums[fi].add(&UPoly::monomial(cf.clone(), exp / ctx.p));
            }
        }
    }
    let coords = nums
        .into_iter()
        .map(|n| RatFun::new(n, gs.den.clone()))
        .collect::<Result<Vec<_>>>()?;
    let w = Witness {
        ctx: ctx.clone(),
        target: TargetForm::AlphaP,
        alpha: one,
        d: 1,
        coords,
    };
    assert!(verify_witness(g, &w));
    Ok((ctx.clone(), w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::FieldContext;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lam(ctx: &Ctx, i: usize) -> KElement {
        KElement::lambda(ctx, i)
    }

    fn simple_pole_target(ctx: &Ctx, beta: &KElement, n: u32) -> RatFun {
        let q = UPoly::from_terms(
            ctx,
            vec![(ctx.p.pow(n), KElement::one(ctx)), (0, lam(ctx, 0))],
        );
        RatFun::new(UPoly::constant(beta.clone()), q).unwrap()
    }

    #[test]
    fn lucas_values() {
        assert_eq!(lucas_binom(1, 0, 2), 1);
        assert_eq!(lucas_binom(3, 1, 2), 1);
        assert_eq!(lucas_binom(2, 1, 2), 0);
        assert_eq!(lucas_binom(3, 1, 3), 0);
        assert_eq!(lucas_binom(8, 2, 3), 1); // 28 ≡ 1 (mod 3)
        // every digit of p^n − 1 is p−1, so these are never 0
        for j in 0..9 {
            assert_ne!(lucas_binom(8, j, 3), 0);
        }
    }

    #[test]
    fn simple_pole_closed_form() {
        // β = λ³+λ² gives γ = λ and the closed-form coordinates
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        let beta = l.pow(3).add(&l.pow(2));
        let basis = vec![l.clone()];
        let (cx, w) = witness_simple_pole_in_basis(&ctx, &basis, &beta, 1).unwrap();
        assert_eq!(cx.id, ctx.id, "γ = λ needs no extension");
        let g = simple_pole_target(&ctx, &beta, 1);
        assert!(verify_witness(&g, &w));
        // H₀ = λ²/(T²+λ), H₁ = λT/(T²+λ)
        let q = UPoly::from_terms(&ctx, vec![(2, KElement::one(&ctx)), (0, l.clone())]);
        assert_eq!(w.coords[0], RatFun::new(UPoly::constant(l.pow(2)), q.clone()).unwrap());
        assert_eq!(w.coords[1], RatFun::new(UPoly::monomial(l.clone(), 1), q).unwrap());
    }

    #[test]
    fn simple_pole_with_adjunction_and_levels() {
        for p in [2u64, 3] {
            for r in [1usize, 2] {
                let ctx = FieldContext::new(p, 1, r);
                let mut rng = ChaCha8Rng::seed_from_u64(p + r as u64);
                for n in 1..=2u32 {
                    for _ in 0..3 {
                        let beta = crate::kfield::random_element(&ctx, &mut rng, 2, 2);
                        let basis: Vec<KElement> =
                            (0..r).map(|i| lam(&ctx, i)).collect();
                        let (cx, w) =
                            witness_simple_pole_in_basis(&ctx, &basis, &beta, n).unwrap();
                        let g = simple_pole_target(&ctx, &beta, n).lift_to(&cx).unwrap();
                        assert!(verify_witness(&g, &w), "p={p} r={r} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn monomial_ppower_recursions() {
        let ctx = FieldContext::new(2, 1, 1);
        let basis = vec![lam(&ctx, 0)];
        let t = RatFun::t(&ctx);
        // n=1, f=1, G=T → λT²
        let w = witness_monomial_ppower_in_basis(&ctx, &basis, &vec![1], &t, 1).unwrap();
        let target = RatFun::from_poly(UPoly::monomial(lam(&ctx, 0), 2));
        assert!(verify_witness(&target, &w));
        // n=2, f=2 (= p·1), G=1 → λ²·1
        let one = RatFun::constant(KElement::one(&ctx));
        let w = witness_monomial_ppower_in_basis(&ctx, &basis, &vec![2], &one, 2).unwrap();
        let target = RatFun::constant(lam(&ctx, 0).pow(2));
        assert!(verify_witness(&target, &w));
        // n=2, f=3, G=T → λ³T⁴
        let w = witness_monomial_ppower_in_basis(&ctx, &basis, &vec![3], &t, 2).unwrap();
        let target = RatFun::from_poly(UPoly::monomial(lam(&ctx, 0).pow(3), 4));
        assert!(verify_witness(&target, &w));
    }

    #[test]
    fn frobenius_diff_witnesses() {
        let ctx = FieldContext::new(2, 1, 1);
        let basis = vec![lam(&ctx, 0)];
        // G = 0 trivially
        let w = witness_frobenius_diff_in_basis(&ctx, &basis, &RatFun::zero(&ctx), 1).unwrap();
        assert!(verify_witness(&RatFun::zero(&ctx), &w));
        // G = T, n = 1: −T + T²
        let t = RatFun::t(&ctx);
        let w = witness_frobenius_diff_in_basis(&ctx, &basis, &t, 1).unwrap();
        let target = t.pow_p(1).unwrap().sub(&t).unwrap();
        assert!(verify_witness(&target, &w));
        // G = 1/(T+1), n = 2
        let g = RatFun::new(
            UPoly::one(&ctx),
            UPoly::from_terms(&ctx, vec![(1, KElement::one(&ctx)), (0, KElement::one(&ctx))]),
        )
        .unwrap();
        let w = witness_frobenius_diff_in_basis(&ctx, &basis, &g, 2).unwrap();
        let target = g.pow_p(2).unwrap().sub(&g).unwrap();
        assert!(verify_witness(&target, &w));
    }

    #[test]
    fn pole_batch_lambda_case() {
        // F(H) = T/(T²+λ) via the expansion route, p = 2
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        let coeffs = BTreeMap::from([(1u64, KElement::one(&ctx))]);
        let (cx, w) = witness_pole_batch(&ctx, &coeffs, &l, 1).unwrap();
        let q = UPoly::from_terms(&cx, vec![(2, KElement::one(&cx)), (0, l.lift_to(&cx).unwrap())]);
        let target = RatFun::new(UPoly::monomial(KElement::one(&cx), 1), q).unwrap();
        assert!(verify_witness(&target, &w));
        assert!(w.alpha.is_one() && w.d == 0);
    }

    #[test]
    fn pole_term_exchange_path() {
        // μ = λ₂ with r = 2 exercises the p-basis exchange
        let ctx = FieldContext::new(2, 1, 2);
        let mu = lam(&ctx, 1);
        let (cx, w) = witness_pole_term(&ctx, &KElement::one(&ctx), &mu, 0, 1).unwrap();
        let q = UPoly::from_terms(
            &cx,
            vec![(2, KElement::one(&cx)), (0, mu.lift_to(&cx).unwrap())],
        );
        let target = RatFun::new(UPoly::one(&cx), q).unwrap();
        assert!(verify_witness(&target, &w));
        assert!(w.alpha.is_one() && w.d == 0);
    }

    #[test]
    fn pole_term_rejects_pth_power_modulus() {
        let ctx = FieldContext::new(2, 1, 1);
        let mu = lam(&ctx, 0).pow(2);
        let r = witness_pole_term(&ctx, &KElement::one(&ctx), &mu, 0, 1);
        assert!(matches!(r, Err(Error::PthPowerModulus)));
    }

    #[test]
    fn kill_pole_term_pth_power_branch() {
        // μ = λ², β = 1, ℓ = 0, n = 1: descends to n = 0
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        let mu = l.pow(2);
        let (cx, w) = kill_pole_term(&ctx, &KElement::one(&ctx), &mu, 0, 1).unwrap();
        let q = UPoly::from_terms(
            &ctx,
            vec![(2, KElement::one(&ctx)), (0, mu.clone())],
        );
        let g = RatFun::new(UPoly::one(&ctx), q).unwrap().lift_to(&cx).unwrap();
        assert!(verify_witness(&g, &w));
    }

    #[test]
    fn kill_monomial_examples() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        // c = λ, m = 1 → α = 1, d = 1, H₁ = T
        let (cx, w) = kill_monomial(&ctx, &l, 1).unwrap();
        assert_eq!(cx.id, ctx.id);
        assert!(w.alpha.is_one());
        assert_eq!(w.d, 1);
        assert_eq!(w.coords[1], RatFun::t(&ctx));
        let g = RatFun::from_poly(UPoly::monomial(l.clone(), 1));
        assert!(verify_witness(&g, &w));
        // c = 0
        let (_, w) = kill_monomial(&ctx, &KElement::zero(&ctx), 3).unwrap();
        assert!(w.coords.iter().all(|c| c.is_zero()));
        // c = λ²+λ, m = 0 → γ = λ, H₀ = λ
        let c = l.pow(2).add(&l);
        let (cx, w) = kill_monomial(&ctx, &c, 0).unwrap();
        assert_eq!(cx.id, ctx.id);
        assert_eq!(w.coords[0], RatFun::constant(l.clone()));
        let g = RatFun::constant(c);
        assert!(verify_witness(&g, &w));
    }

    #[test]
    fn kill_class_composite() {
        // G = λT + 1/(T²+λ), declared factor (1, λ), p = 2, r = 1
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        let q = UPoly::from_terms(&ctx, vec![(2, KElement::one(&ctx)), (0, l.clone())]);
        let g = RatFun::from_poly(UPoly::monomial(l.clone(), 1))
            .add(&RatFun::new(UPoly::one(&ctx), q).unwrap())
            .unwrap();
        let (_, w) = kill_class(&ctx, &g, &[(1, l.clone())], TargetForm::V).unwrap();
        assert!(verify_witness(&g, &w));
        // zero input → trivial certificate
        let (_, w) = kill_class(&ctx, &RatFun::zero(&ctx), &[], TargetForm::V).unwrap();
        assert!(w.coords.iter().all(|c| c.is_zero()));
        assert!(w.alpha.is_one() && w.d == 0);
    }

    #[test]
    fn kill_class_alphap_example() {
        // G = λ/(T²+λ³): d = 1 certificate from level-1 expansions
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        let q = UPoly::from_terms(&ctx, vec![(2, KElement::one(&ctx)), (0, l.pow(3))]);
        let g = RatFun::new(UPoly::constant(l.clone()), q).unwrap();
        let (_, w) = kill_class(&ctx, &g, &[(1, l.pow(3))], TargetForm::AlphaP).unwrap();
        assert_eq!(w.d, 1);
        assert!(verify_witness(&g, &w));
    }

    #[test]
    fn tampered_witness_fails() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = lam(&ctx, 0);
        let beta = l.pow(3).add(&l.pow(2));
        let basis = vec![l.clone()];
        let (cx, w) = witness_simple_pole_in_basis(&ctx, &basis, &beta, 1).unwrap();
        let g = simple_pole_target(&ctx, &beta, 1).lift_to(&cx).unwrap();
        assert!(verify_witness(&g, &w));
        // zero witness against a nonzero target
        let wz = Witness::zero(&cx, TargetForm::V);
        assert!(!verify_witness(&g, &wz));
        // perturb a λ-weighted coordinate by +1
        let mut bad = w.clone();
        bad.coords[1] = bad
            .coords[1]
            .add(&RatFun::constant(KElement::one(&cx)))
            .unwrap();
        assert!(!verify_witness(&g, &bad));
        // shifting the distinguished coordinate by a prime-field constant
        // lands in the kernel of ℘ and must NOT change the value
        let mut shifted = w.clone();
        shifted.coords[0] = shifted
            .coords[0]
            .add(&RatFun::constant(KElement::one(&cx)))
            .unwrap();
        assert!(verify_witness(&g, &shifted));
    }
}
