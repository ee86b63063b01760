//! The ground field K = F_q(λ_1..λ_r), its separable constant adjunctions,
//! and exact arithmetic in the resulting tower.
//!
//! A tower generator γ (Artin–Schreier root of X^p − X − c, or a prime-to-p
//! radical root of X^n − c) is stored internally as the scaled generator
//! g := B·γ where B is the λ-denominator of c, so every reduction rule
//! g^deg → rhs has polynomial right-hand side. Elements are fractions
//! num/den with num in the tower order and den a polynomial in the λ's only;
//! this representation admits a canonical form (den lex-monic, λ-content of
//! num coprime to den), so structural equality is field equality.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::idx::{self, MultiIdx};
use crate::poly::{self, MPoly, Mono};

static NEXT_CTX_ID: AtomicU64 = AtomicU64::new(1);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdjunctionKind {
    ArtinSchreier,
    Radical(u32),
}

#[derive(Debug, Clone)]
pub struct GenDef {
    pub kind: AdjunctionKind,
    /// Reduction degree: p for Artin–Schreier, n for radicals.
    pub deg: u32,
    /// g^deg = rhs; polynomial in the variables up to and including this one
    /// (Artin–Schreier rules carry a linear g-term).
    rhs: MPoly,
    /// g = scale · root, scale a λ-polynomial.
    pub scale: MPoly,
    /// Defining data (c of X^p−X−c, or the radicand), at this context's width.
    pub c_num: MPoly,
    pub c_den: MPoly,
    /// Whether the adjunction is a constant-field extension.
    pub constant: bool,
}

#[derive(Debug)]
pub struct FieldContext {
    pub p: u64,
    pub e: u32,
    pub r: usize,
    pub fq: Fq,
    pub gens: Vec<GenDef>,
    pub id: u64,
    pub parent: Option<Ctx>,
    frob_cache: Mutex<HashMap<usize, Arc<Vec<Vec<(MPoly, MPoly)>>>>>,
}

pub type Ctx = Arc<FieldContext>;

impl FieldContext {
    pub fn new(p: u64, e: u32, r: usize) -> Ctx {
        Arc::new(FieldContext {
            p,
            e,
            r,
            fq: Fq::new(p, e),
            gens: vec![],
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            parent: None,
            frob_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn nvars(&self) -> usize {
        self.r + self.gens.len()
    }

    /// True if `self` equals `other` or descends from it by adjunctions.
    pub fn descends_from(&self, other: &FieldContext) -> bool {
        if self.id == other.id {
            return true;
        }
        let mut cur = self.parent.clone();
        while let Some(c) = cur {
            if c.id == other.id {
                return true;
            }
            cur = c.parent.clone();
        }
        false
    }

    fn child_with(self: &Ctx, gen: GenDef) -> Ctx {
        let mut gens = self.gens.clone();
        gens.push(gen);
        Arc::new(FieldContext {
            p: self.p,
            e: self.e,
            r: self.r,
            fq: self.fq.clone(),
            gens,
            id: NEXT_CTX_ID.fetch_add(1, Ordering::Relaxed),
            parent: Some(self.clone()),
            frob_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Reduce all generator exponents below their defining degrees.
    pub fn reduce(&self, mp: MPoly) -> MPoly {
        let mut cur = mp;
        loop {
            let mut hit = None;
            'scan: for gi in (0..self.gens.len()).rev() {
                let v = self.r + gi;
                let d = self.gens[gi].deg;
                for (m, _) in &cur.terms {
                    if m.0.len() > v && m.0[v] >= d {
                        hit = Some((gi, v, d));
                        break 'scan;
                    }
                }
            }
            let (gi, v, d) = match hit {
                None => return cur,
                Some(h) => h,
            };
            let rhs = self.gens[gi].rhs.extend_vars(cur.nvars);
            let mut keep = vec![];
            let mut rewritten = MPoly::zero(cur.nvars);
            for (m, c) in cur.terms {
                if m.0[v] >= d {
                    let mut mm = m.clone();
                    mm.0[v] -= d;
                    rewritten = rewritten.add(&rhs.mul(&MPoly::monomial(mm, c), &self.fq), &self.fq);
                } else {
                    keep.push((m, c));
                }
            }
            cur = MPoly::from_terms(rewritten.nvars, &self.fq, keep).add(&rewritten, &self.fq);
        }
    }

    /// Cached inverse of the matrix expressing (g^p)^i on the g-power basis,
    /// used for Frobenius descent through generator `gi`.
    fn frob_matrix_inv(self: &Ctx, gi: usize) -> Result<Arc<Vec<Vec<(MPoly, MPoly)>>>> {
        if let Some(m) = self.frob_cache.lock().unwrap().get(&gi) {
            return Ok(m.clone());
        }
        let v = self.r + gi;
        let d = self.gens[gi].deg as usize;
        let nv = self.nvars();
        let mut gp_mono = Mono::one(nv);
        gp_mono.0[v] = self.p as u32;
        let gp = self.reduce(MPoly::monomial(gp_mono, 1));
        let mut mat = Vec::with_capacity(d);
        let mut pw = MPoly::one(nv);
        for _ in 0..d {
            let row: Vec<KElement> = (0..d)
                .map(|j| KElement::make(self.clone(), pw.coeff_of(v, j as u32), MPoly::one(nv)))
                .collect();
            mat.push(row);
            pw = self.reduce(pw.mul(&gp, &self.fq));
        }
        let inv = crate::linalg::invert(&mat).ok_or(Error::Singular)?;
        let stored: Vec<Vec<(MPoly, MPoly)>> = inv
            .into_iter()
            .map(|row| row.into_iter().map(|e| (e.num, e.den)).collect())
            .collect();
        let arc = Arc::new(stored);
        self.frob_cache.lock().unwrap().insert(gi, arc.clone());
        Ok(arc)
    }
}

#[derive(Debug, Clone)]
pub struct KElement {
    pub ctx: Ctx,
    pub num: MPoly,
    /// λ-polynomial denominator (generator-free), lex-monic.
    pub den: MPoly,
}

impl PartialEq for KElement {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.ctx.id, other.ctx.id, "context mismatch in comparison");
        self.num == other.num && self.den == other.den
    }
}
impl Eq for KElement {}

impl PartialOrd for KElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for KElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.num, &self.den).cmp(&(&other.num, &other.den))
    }
}

impl KElement {
    pub fn make(ctx: Ctx, num: MPoly, den: MPoly) -> Self {
        let mut e = KElement { ctx, num, den };
        e.normalize();
        e
    }

    pub fn zero(ctx: &Ctx) -> Self {
        let nv = ctx.nvars();
        KElement { ctx: ctx.clone(), num: MPoly::zero(nv), den: MPoly::one(nv) }
    }

    pub fn one(ctx: &Ctx) -> Self {
        let nv = ctx.nvars();
        KElement { ctx: ctx.clone(), num: MPoly::one(nv), den: MPoly::one(nv) }
    }

    pub fn from_fq(ctx: &Ctx, c: FqElem) -> Self {
        let nv = ctx.nvars();
        KElement { ctx: ctx.clone(), num: MPoly::constant(c, nv), den: MPoly::one(nv) }
    }

    pub fn from_int(ctx: &Ctx, n: i64) -> Self {
        Self::from_fq(ctx, ctx.fq.from_int(n))
    }

    pub fn lambda(ctx: &Ctx, i: usize) -> Self {
        assert!(i < ctx.r, "lambda index out of range");
        let nv = ctx.nvars();
        KElement { ctx: ctx.clone(), num: MPoly::var(i, nv), den: MPoly::one(nv) }
    }

    /// ∏ λ_i^{a_i} with integer (possibly negative) exponents.
    pub fn lambda_pow(ctx: &Ctx, a: &[i64]) -> Self {
        let nv = ctx.nvars();
        let mut nm = Mono::one(nv);
        let mut dm = Mono::one(nv);
        for (i, &ai) in a.iter().enumerate() {
            if ai >= 0 {
                nm.0[i] = ai as u32;
            } else {
                dm.0[i] = (-ai) as u32;
            }
        }
        KElement::make(ctx.clone(), MPoly::monomial(nm, 1), MPoly::monomial(dm, 1))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == MPoly::one(self.ctx.nvars()) && self.den == MPoly::one(self.ctx.nvars())
    }

    fn assert_ctx(&self, other: &KElement) {
        assert_eq!(self.ctx.id, other.ctx.id, "operands from different field contexts");
    }

    fn normalize(&mut self) {
        let fq = &self.ctx.fq;
        self.num = self.ctx.reduce(std::mem::replace(&mut self.num, MPoly::zero(0)));
        assert!(!self.den.is_zero(), "zero denominator");
        debug_assert!(!self.den.uses_var_at_or_above(self.ctx.r), "denominator must be λ-only");
        if self.num.is_zero() {
            self.den = MPoly::one(self.ctx.nvars());
            return;
        }
        // cancel common λ-monomial content
        let mut nc = self.num.mono_content();
        for v in self.ctx.r..nc.0.len() {
            nc.0[v] = 0;
        }
        let dc = self.den.mono_content();
        let common =
            Mono(nc.0.iter().zip(&dc.0).map(|(a, b)| *a.min(b)).collect());
        if !common.is_one() {
            self.num = self.num.div_mono(&common);
            self.den = self.den.div_mono(&common);
        }
        if !self.den.is_constant() {
            // cancel the gcd of the λ-content of num with den
            let mut groups: HashMap<Vec<u32>, Vec<(Mono, FqElem)>> = HashMap::new();
            for (m, c) in &self.num.terms {
                let gen_part: Vec<u32> = m.0[self.ctx.r..].to_vec();
                let mut lam = m.clone();
                for v in self.ctx.r..lam.0.len() {
                    lam.0[v] = 0;
                }
                groups.entry(gen_part).or_default().push((lam, *c));
            }
            let mut cont = MPoly::zero(self.ctx.nvars());
            for (_, terms) in groups {
                let g = MPoly::from_terms(self.ctx.nvars(), fq, terms);
                cont = poly::gcd(&cont, &g, fq);
                if cont.is_constant() {
                    break;
                }
            }
            if !cont.is_constant() {
                let g = poly::gcd(&cont, &self.den, fq);
                if !g.is_constant() {
                    self.num = self.num.divexact(&g, fq).expect("content gcd divides");
                    self.den = self.den.divexact(&g, fq).expect("content gcd divides");
                }
            }
        }
        let lead = self.den.lead_coeff();
        if lead != 1 {
            let inv = fq.inv(lead);
            self.num = self.num.mul_scalar(inv, fq);
            self.den = self.den.mul_scalar(inv, fq);
        }
    }

    pub fn add(&self, other: &KElement) -> KElement {
        self.assert_ctx(other);
        let fq = &self.ctx.fq;
        let num = self
            .num
            .mul(&other.den, fq)
            .add(&other.num.mul(&self.den, fq), fq);
        let den = self.den.mul(&other.den, fq);
        KElement::make(self.ctx.clone(), num, den)
    }

    pub fn neg(&self) -> KElement {
        KElement {
            ctx: self.ctx.clone(),
            num: self.num.neg(&self.ctx.fq),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &KElement) -> KElement {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &KElement) -> KElement {
        self.assert_ctx(other);
        let fq = &self.ctx.fq;
        KElement::make(
            self.ctx.clone(),
            self.num.mul(&other.num, fq),
            self.den.mul(&other.den, fq),
        )
    }

    pub fn mul_int(&self, n: i64) -> KElement {
        let c = self.ctx.fq.from_int(n);
        KElement::make(
            self.ctx.clone(),
            self.num.mul_scalar(c, &self.ctx.fq),
            self.den.clone(),
        )
    }

    pub fn inv(&self) -> Result<KElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = self.ctx.r;
        let top = self
            .num
            .max_var_used()
            .filter(|&v| v >= r);
        let num_inv = match top {
            None => {
                // λ-only numerator: swap
                return Ok(KElement::make(self.ctx.clone(), self.den.clone(), self.num.clone()));
            }
            Some(v) => {
                let gi = v - r;
                let d = self.ctx.gens[gi].deg as usize;
                let one = MPoly::one(self.ctx.nvars());
                let a: Vec<KElement> = (0..d)
                    .map(|k| KElement::make(self.ctx.clone(), self.num.coeff_of(v, k as u32), one.clone()))
                    .collect();
                // minimal polynomial X^d − rhs(X)
                let rhs = self.ctx.gens[gi].rhs.extend_vars(self.ctx.nvars());
                let mut m: Vec<KElement> = (0..=d)
                    .map(|k| {
                        if k == d {
                            KElement::one(&self.ctx)
                        } else {
                            KElement::make(self.ctx.clone(), rhs.coeff_of(v, k as u32), one.clone()).neg()
                        }
                    })
                    .collect();
                trim(&mut m);
                let mut a = a;
                trim(&mut a);
                let (g, u) = upoly_half_ext_gcd(&a, &m)?;
                if g.len() != 1 {
                    return Err(Error::ZeroDivisor(format!(
                        "gcd of degree {} with the rule for generator {}",
                        g.len().saturating_sub(1),
                        gi
                    )));
                }
                let ginv = g[0].inv()?;
                // Σ u_k g^k, scaled so u·a ≡ 1
                let mut acc = KElement::zero(&self.ctx);
                for (k, uk) in u.iter().enumerate() {
                    let mut mono = Mono::one(self.ctx.nvars());
                    mono.0[v] = k as u32;
                    let gk = KElement {
                        ctx: self.ctx.clone(),
                        num: MPoly::monomial(mono, 1),
                        den: MPoly::one(self.ctx.nvars()),
                    };
                    acc = acc.add(&uk.mul(&gk));
                }
                acc.mul(&ginv)
            }
        };
        // (num/den)^{-1} = den · num^{-1}
        let den_elt = KElement {
            ctx: self.ctx.clone(),
            num: self.den.clone(),
            den: MPoly::one(self.ctx.nvars()),
        };
        Ok(num_inv.mul(&den_elt))
    }

    pub fn div(&self, other: &KElement) -> Result<KElement> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, n: u32) -> KElement {
        let mut acc = KElement::one(&self.ctx);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn pow_i(&self, n: i64) -> Result<KElement> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            self.inv().map(|x| x.pow((-n) as u32))
        }
    }

    /// x ↦ x^{p^d}, exact and cheap in characteristic p.
    pub fn frobenius(&self, d: u32) -> KElement {
        let fq = &self.ctx.fq;
        let mut cur = self.clone();
        for _ in 0..d {
            cur = KElement::make(
                self.ctx.clone(),
                cur.num.raw_pow_p(1, fq),
                cur.den.raw_pow_p(1, fq),
            );
        }
        cur
    }

    pub fn lift_to(&self, ctx: &Ctx) -> Result<KElement> {
        if ctx.id == self.ctx.id {
            return Ok(self.clone());
        }
        if !ctx.descends_from(&self.ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(KElement {
            ctx: ctx.clone(),
            num: self.num.extend_vars(ctx.nvars()),
            den: self.den.extend_vars(ctx.nvars()),
        })
    }

    /// Unique decomposition x = Σ_f λ^f c_f^p over f ∈ I_1, in enumeration order.
    pub fn expand_level1(&self) -> Result<Vec<KElement>> {
        let ctx = &self.ctx;
        let r = ctx.r;
        let p = ctx.p as u32;
        let fq = &ctx.fq;
        let nv = ctx.nvars();
        let idxs = idx::enumerate(r, p);
        let top = self.num.max_var_used().filter(|&v| v >= r);
        match top {
            None => {
                // rational case: multiply by den^{p-1} and split monomials
                let y = self.num.mul(&self.den.pow(p - 1, fq), fq);
                let mut buckets: HashMap<MultiIdx, Vec<(Mono, FqElem)>> = HashMap::new();
                for (m, c) in &y.terms {
                    let f: MultiIdx = (0..r).map(|i| m.0[i] % p).collect();
                    let mut q = Mono::one(nv);
                    for i in 0..r {
                        q.0[i] = m.0[i] / p;
                    }
                    buckets.entry(f).or_default().push((q, fq.pth_root(*c)));
                }
                Ok(idxs
                    .iter()
                    .map(|f| {
                        let terms = buckets.remove(f).unwrap_or_default();
                        KElement::make(
                            ctx.clone(),
                            MPoly::from_terms(nv, fq, terms),
                            self.den.clone(),
                        )
                    })
                    .collect())
            }
            Some(v) => {
                let gi = v - r;
                let d = ctx.gens[gi].deg as usize;
                let minv = ctx.frob_matrix_inv(gi)?;
                let xvec: Vec<KElement> = (0..d)
                    .map(|k| {
                        KElement::make(ctx.clone(), self.num.coeff_of(v, k as u32), self.den.clone())
                    })
                    .collect();
                // ξ = M^{-1} x: x on the (g^p)-power basis
                let mut xi = vec![KElement::zero(ctx); d];
                for (i, xi_i) in xi.iter_mut().enumerate() {
                    for (j, x_j) in xvec.iter().enumerate() {
                        let (n, dd) = &minv[j][i];
                        let entry = KElement {
                            ctx: ctx.clone(),
                            num: n.clone(),
                            den: dd.clone(),
                        };
                        *xi_i = xi_i.add(&entry.mul(x_j));
                    }
                }
                let mut out = vec![KElement::zero(ctx); idxs.len()];
                for (i, xii) in xi.iter().enumerate() {
                    let sub = xii.expand_level1()?;
                    let mut mono = Mono::one(nv);
                    mono.0[v] = i as u32;
                    let gpow = KElement {
                        ctx: ctx.clone(),
                        num: MPoly::monomial(mono, 1),
                        den: MPoly::one(nv),
                    };
                    for (fi, c) in sub.iter().enumerate() {
                        out[fi] = out[fi].add(&c.mul(&gpow));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn pth_root(&self) -> Result<KElement> {
        let comps = self.expand_level1()?;
        for (fi, f) in idx::enumerate(self.ctx.r, self.ctx.p as u32).iter().enumerate() {
            if !idx::is_zero(f) && !comps[fi].is_zero() {
                return Err(Error::NotAPthPower);
            }
        }
        Ok(comps[0].clone())
    }

    pub fn is_pth_power(&self) -> bool {
        self.pth_root().is_ok()
    }

    pub fn pbasis_expand(&self, n: u32) -> Result<PBasisExpansion> {
        assert!(n >= 1);
        assert!(self.ctx.r >= 1, "expansion needs at least one λ");
        let coeffs = expand_level_n(self, n)?;
        Ok(PBasisExpansion {
            level: n,
            coeffs,
        })
    }

    /// Level-n decomposition in an arbitrary p-basis of the current tower.
    pub fn expand_in_basis(&self, basis: &[KElement], n: u32) -> Result<Vec<(MultiIdx, KElement)>> {
        assert!(n >= 1);
        let ctx = &self.ctx;
        let p = ctx.p as u32;
        let r = basis.len();
        let idxs1 = idx::enumerate(r, p);
        // transition matrix: μ^f = Σ_h λ^h m_{f,h}^p
        let mut cols = Vec::with_capacity(idxs1.len());
        for f in &idxs1 {
            let mut m = KElement::one(ctx);
            for (i, b) in basis.iter().enumerate() {
                m = m.mul(&b.pow(f[i]));
            }
            cols.push(m.expand_level1()?);
        }
        let level1 = |x: &KElement| -> Result<Vec<KElement>> {
            let rhs = x.expand_level1()?;
            let lam_idxs = idx::enumerate(ctx.r, p);
            let mat: Vec<Vec<KElement>> = (0..lam_idxs.len())
                .map(|h| (0..idxs1.len()).map(|f| cols[f][h].clone()).collect())
                .collect();
            crate::linalg::solve(&mat, &rhs).ok_or(Error::Singular)
        };
        let mut acc: Vec<(MultiIdx, KElement)> =
            vec![(vec![0; r], self.clone())];
        for level in 0..n {
            let mut next = Vec::new();
            for (f, c) in acc {
                let sub = level1(&c)?;
                for (gi, g) in idxs1.iter().enumerate() {
                    if sub[gi].is_zero() {
                        continue;
                    }
                    let nf: MultiIdx = f
                        .iter()
                        .zip(g)
                        .map(|(&a, &b)| a + b * p.pow(level))
                        .collect();
                    next.push((nf, sub[gi].clone()));
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}

fn expand_level_n(
    x: &KElement,
    n: u32,
) -> Result<std::collections::BTreeMap<MultiIdx, KElement>> {
    let p = x.ctx.p as u32;
    let r = x.ctx.r;
    let idxs1 = idx::enumerate(r, p);
    let mut acc: Vec<(MultiIdx, KElement)> = vec![(vec![0; r], x.clone())];
    for level in 0..n {
        let mut next = Vec::new();
        for (f, c) in acc {
            let sub = c.expand_level1()?;
            for (gi, g) in idxs1.iter().enumerate() {
                if sub[gi].is_zero() {
                    continue;
                }
                let nf: MultiIdx = f
                    .iter()
                    .zip(g)
                    .map(|(&a, &b)| a + b * p.pow(level))
                    .collect();
                next.push((nf, sub[gi].clone()));
            }
        }
        acc = next;
    }
    Ok(acc.into_iter().collect())
}

/// The coefficients {c_f} of x = Σ_{f ∈ I_n} λ^f c_f^{p^n}. Zero coefficients
/// are omitted from the map.
#[derive(Debug, Clone)]
pub struct PBasisExpansion {
    pub level: u32,
    pub coeffs: std::collections::BTreeMap<MultiIdx, KElement>,
}

impl PBasisExpansion {
    pub fn coeff(&self, f: &[u32], ctx: &Ctx) -> KElement {
        self.coeffs
            .get(f)
            .cloned()
            .unwrap_or_else(|| KElement::zero(ctx))
    }

    pub fn reconstruct(&self, ctx: &Ctx) -> KElement {
        let mut acc = KElement::zero(ctx);
        for (f, c) in &self.coeffs {
            let lam = KElement::lambda_pow(ctx, &f.iter().map(|&x| x as i64).collect::<Vec<_>>());
            acc = acc.add(&lam.mul(&c.frobenius(self.level)));
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// adjunctions

impl FieldContext {
    /// Adjoin a root γ of X^p − X − c, reusing a root already in the tower
    /// when one is found. Returns the (possibly unchanged) context and γ.
    pub fn adjoin_artin_schreier(self: &Ctx, c: &KElement) -> Result<(Ctx, KElement)> {
        assert_eq!(self.id, c.ctx.id, "adjunction data from wrong context");
        if let Some(root) = artin_schreier_root(self, c) {
            return Ok((self.clone(), root));
        }
        Ok(self.adjoin_artin_schreier_forced(c))
    }

    /// Extend unconditionally (used when replaying recorded adjunctions).
    pub fn adjoin_artin_schreier_forced(self: &Ctx, c: &KElement) -> (Ctx, KElement) {
        let fq = &self.fq;
        let p = self.p as u32;
        let nv_new = self.nvars() + 1;
        let b = c.den.extend_vars(nv_new);
        let t = c.num.extend_vars(nv_new);
        let bp1 = b.pow(p - 1, fq);
        // g^p = B^{p-1} g + B^{p-1} T
        let rhs = bp1
            .mul(&MPoly::var(nv_new - 1, nv_new), fq)
            .add(&bp1.mul(&t, fq), fq);
        let constant = is_constant_element(self, c);
        let gen = GenDef {
            kind: AdjunctionKind::ArtinSchreier,
            deg: p,
            rhs,
            scale: b,
            c_num: c.num.clone(),
            c_den: c.den.clone(),
            constant,
        };
        let child = self.child_with(gen);
        let nv = child.nvars();
        let root = KElement::make(
            child.clone(),
            MPoly::var(nv - 1, nv),
            c.den.extend_vars(nv),
        );
        (child, root)
    }

    /// Adjoin α with α^n = c, gcd(n, p) = 1 required, reusing existing roots.
    pub fn adjoin_radical(self: &Ctx, c: &KElement, n: u32) -> Result<(Ctx, KElement)> {
        assert_eq!(self.id, c.ctx.id, "adjunction data from wrong context");
        if n as u64 % self.p == 0 {
            return Err(Error::InseparableRadical);
        }
        if c.is_zero() {
            return Err(Error::ZeroRadicand);
        }
        if n == 1 {
            return Ok((self.clone(), c.clone()));
        }
        if let Some(root) = radical_root(self, c, n) {
            return Ok((self.clone(), root));
        }
        Ok(self.adjoin_radical_forced(c, n))
    }

    pub fn adjoin_radical_forced(self: &Ctx, c: &KElement, n: u32) -> (Ctx, KElement) {
        let fq = &self.fq;
        let nv_new = self.nvars() + 1;
        let b = c.den.extend_vars(nv_new);
        let t = c.num.extend_vars(nv_new);
        // g^n = B^{n-1} T
        let rhs = b.pow(n - 1, fq).mul(&t, fq);
        let constant = is_constant_element(self, c);
        let gen = GenDef {
            kind: AdjunctionKind::Radical(n),
            deg: n,
            rhs,
            scale: b,
            c_num: c.num.clone(),
            c_den: c.den.clone(),
            constant,
        };
        let child = self.child_with(gen);
        let nv = child.nvars();
        let root = KElement::make(
            child.clone(),
            MPoly::var(nv - 1, nv),
            c.den.extend_vars(nv),
        );
        (child, root)
    }

    /// The KElement for the i-th adjoined generator's root.
    pub fn gen_root(self: &Ctx, gi: usize) -> KElement {
        let nv = self.nvars();
        KElement::make(
            self.clone(),
            MPoly::var(self.r + gi, nv),
            self.gens[gi].scale.extend_vars(nv),
        )
    }
}

fn is_constant_element(ctx: &Ctx, c: &KElement) -> bool {
    if !c.den.is_constant() {
        return false;
    }
    c.num.terms.iter().all(|(m, _)| {
        m.0.iter().enumerate().all(|(v, &e)| {
            e == 0 || (v >= ctx.r && ctx.gens[v - ctx.r].constant)
        })
    })
}

/// Search the tower for a root of X^p − X − c. Complete for generator-free c;
/// for tower elements it checks constants and previously adjoined roots.
fn artin_schreier_root(ctx: &Ctx, c: &KElement) -> Option<KElement> {
    if c.is_zero() {
        return Some(KElement::zero(ctx));
    }
    let p = ctx.p;
    // previously adjoined Artin–Schreier generators with the same c
    for (gi, g) in ctx.gens.iter().enumerate() {
        if g.kind == AdjunctionKind::ArtinSchreier
            && g.c_num.extend_vars(ctx.nvars()) == c.num
            && g.c_den.extend_vars(ctx.nvars()) == c.den
        {
            return Some(canonical_as_root(ctx, ctx.gen_root(gi)));
        }
    }
    if is_constant_element(ctx, c) {
        if let Some(cc) = c.num.as_constant() {
            if c.den.as_constant() == Some(1) {
                for y in ctx.fq.elements() {
                    if ctx.fq.sub(ctx.fq.pow(y, p), y) == cc {
                        return Some(canonical_as_root(ctx, KElement::from_fq(ctx, y)));
                    }
                }
            }
        }
        return None;
    }
    if c.num.uses_var_at_or_above(ctx.r) {
        return None; // incomplete for general tower elements
    }
    rational_as_root(ctx, c).map(|y| canonical_as_root(ctx, y))
}

/// Among the p roots y + F_p pick the canonically least.
fn canonical_as_root(ctx: &Ctx, y: KElement) -> KElement {
    let mut best = y.clone();
    for k in 1..ctx.p {
        let cand = y.add(&KElement::from_int(ctx, k as i64));
        if cand < best {
            best = cand;
        }
    }
    best
}

/// Complete Artin–Schreier root search over F_q(λ_1..λ_r): the denominator of
/// any root's ℘-image is a p-th power, and the numerator equation
/// A^p − A·B^{p−1} = N is F_p-linear with per-variable degree bounds.
fn rational_as_root(ctx: &Ctx, c: &KElement) -> Option<KElement> {
    let fq = &ctx.fq;
    let p = ctx.p as u32;
    let nv = ctx.nvars();
    let d = &c.den;
    // B with B^p = den (exists iff all exponents divisible by p)
    if !d.terms.iter().all(|(m, _)| m.0.iter().all(|&e| e % p == 0)) {
        return None;
    }
    let b = MPoly {
        nvars: nv,
        terms: d
            .terms
            .iter()
            .map(|(m, cc)| {
                (Mono(m.0.iter().map(|&e| e / p).collect()), fq.pth_root(*cc))
            })
            .collect(),
    };
    let n = &c.num;
    // candidate monomials for A
    let mut bounds = vec![0u32; nv];
    for v in 0..nv {
        let dn = n.deg_in(v).div_ceil(p);
        bounds[v] = dn.max(b.deg_in(v));
    }
    let total: u64 = bounds.iter().map(|&x| x as u64 + 1).product();
    if total > 20_000 {
        return None; // out of supported range; caller will extend the tower
    }
    let cand: Vec<Mono> = idx::enumerate(nv, bounds.iter().max().map_or(1, |&m| m + 1))
        .into_iter()
        .filter(|f| f.iter().zip(&bounds).all(|(&e, &bd)| e <= bd))
        .map(Mono)
        .collect();
    let bp1 = b.pow(p - 1, fq);
    // F_p-linear system: unknowns are F_p-coordinates of the coefficients of A
    let e = ctx.e as usize;
    let pp = ctx.p;
    let mut row_index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let ncols = cand.len() * e;
    let get_rows = |mono: &Mono, rows: &mut Vec<Vec<u64>>, row_index: &mut HashMap<Vec<u32>, usize>| -> usize {
        let base = *row_index.entry(mono.0.clone()).or_insert_with(|| {
            let i = rows.len() / e;
            for _ in 0..e {
                rows.push(vec![0u64; ncols + 1]);
            }
            i
        });
        base * e
    };
    for (ci, m) in cand.iter().enumerate() {
        for j in 0..e {
            let col = ci * e + j;
            let basis_elt: FqElem = pp.pow(j as u32);
            // (b_j m)^p
            let c1 = fq.pow(basis_elt, pp);
            let m1 = m.pow_scale(p);
            let rbase = get_rows(&m1, &mut rows, &mut row_index);
            add_fq_to_rows(&mut rows, rbase, col, c1, pp, e);
            // −(b_j m)·B^{p−1}
            for (bm, bc) in &bp1.terms {
                let c2 = fq.neg(fq.mul(basis_elt, *bc));
                let m2 = m.mul(bm);
                let rbase = get_rows(&m2, &mut rows, &mut row_index);
                add_fq_to_rows(&mut rows, rbase, col, c2, pp, e);
            }
        }
    }
    // right-hand side N
    for (mn, cn) in &n.terms {
        let rbase = get_rows(mn, &mut rows, &mut row_index);
        add_fq_to_rows(&mut rows, rbase, ncols, *cn, pp, e);
    }
    let sol = solve_fp(&mut rows, ncols, pp)?;
    let mut terms = vec![];
    for (ci, m) in cand.iter().enumerate() {
        let mut coeff: FqElem = 0;
        for j in 0..e {
            let digit = sol[ci * e + j];
            coeff = fq.add(coeff, fq.mul(digit, pp.pow(j as u32)));
        }
        if coeff != 0 {
            terms.push((m.clone(), coeff));
        }
    }
    let a = MPoly::from_terms(nv, fq, terms);
    let root = KElement::make(ctx.clone(), a, b);
    // paranoid check: ℘(root) must equal c exactly
    let img = root.frobenius(1).sub(&root);
    if &img == c {
        Some(root)
    } else {
        None
    }
}

fn add_fq_to_rows(rows: &mut [Vec<u64>], rbase: usize, col: usize, c: FqElem, p: u64, e: usize) {
    let mut x = c;
    for j in 0..e {
        let digit = x % p;
        x /= p;
        rows[rbase + j][col] = (rows[rbase + j][col] + digit) % p;
    }
}

/// Gaussian elimination over F_p; returns one solution if consistent.
fn solve_fp(rows: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Option<Vec<u64>> {
    let nrows = rows.len();
    let mut pivot_of_col = vec![usize::MAX; ncols];
    let mut rank = 0;
    for col in 0..ncols {
        let mut piv = None;
        for (r, row) in rows.iter().enumerate().skip(rank) {
            if row[col] % p != 0 {
                piv = Some(r);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][col] % p, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..nrows {
            if r != rank && rows[r][col] % p != 0 {
                let f = rows[r][col] % p;
                for cc in 0..=ncols {
                    let sub = f * rows[rank][cc] % p;
                    rows[r][cc] = (rows[r][cc] + p - sub) % p;
                }
            }
        }
        pivot_of_col[col] = rank;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    for row in rows.iter() {
        if row[..ncols].iter().all(|&x| x % p == 0) && row[ncols] % p != 0 {
            return None;
        }
    }
    let mut sol = vec![0u64; ncols];
    for col in 0..ncols {
        if pivot_of_col[col] != usize::MAX {
            sol[col] = rows[pivot_of_col[col]][ncols] % p;
        }
    }
    Some(sol)
}

fn mod_inv(a: u64, p: u64) -> u64 {
    let mut x = 1u64;
    for _ in 0..p - 2 {
        x = x * a % p;
    }
    x
}

/// Search for an n-th root of c. Complete for monomials; constants by
/// enumeration.
fn radical_root(ctx: &Ctx, c: &KElement, n: u32) -> Option<KElement> {
    let fq = &ctx.fq;
    for (gi, g) in ctx.gens.iter().enumerate() {
        if g.kind == AdjunctionKind::Radical(n)
            && g.c_num.extend_vars(ctx.nvars()) == c.num
            && g.c_den.extend_vars(ctx.nvars()) == c.den
        {
            return Some(ctx.gen_root(gi));
        }
    }
    if c.num.terms.len() == 1 && c.den.terms.len() == 1 {
        let (nm, nc) = &c.num.terms[0];
        let (dm, dc) = &c.den.terms[0];
        if nm.0.iter().all(|&e| e % n == 0) && dm.0.iter().all(|&e| e % n == 0) {
            let ratio = fq.mul(*nc, fq.inv(*dc));
            if let Some(w) = fq.nth_root(ratio, n as u64) {
                let num = MPoly::monomial(Mono(nm.0.iter().map(|&e| e / n).collect()), w);
                let den = MPoly::monomial(Mono(dm.0.iter().map(|&e| e / n).collect()), 1);
                let root = KElement::make(ctx.clone(), num, den);
                if root.pow(n) == *c {
                    return Some(root);
                }
            }
        }
        return None;
    }
    if is_constant_element(ctx, c) && ctx.gens.iter().all(|g| !g.constant) {
        if let (Some(cc), Some(1)) = (c.num.as_constant(), c.den.as_constant()) {
            if let Some(w) = fq.nth_root(cc, n as u64) {
                return Some(KElement::from_fq(ctx, w));
            }
        }
    }
    None
}

/// Random ratio of small λ-polynomials, for tests and verifier batteries.
pub fn random_element<R: rand::Rng>(ctx: &Ctx, rng: &mut R, max_deg: u32, nterms: usize) -> KElement {
    let nv = ctx.nvars();
    let fq = &ctx.fq;
    let q = fq.q();
    let rand_poly = |rng: &mut R| -> MPoly {
        let k = 1 + rng.gen_range(0..nterms);
        let mut terms = vec![];
        for _ in 0..k {
            let mut m = Mono::one(nv);
            for i in 0..ctx.r {
                m.0[i] = rng.gen_range(0..=max_deg);
            }
            terms.push((m, rng.gen_range(0..q)));
        }
        MPoly::from_terms(nv, fq, terms)
    };
    let num = rand_poly(rng);
    let mut den = rand_poly(rng);
    while den.is_zero() {
        den = rand_poly(rng);
    }
    KElement::make(ctx.clone(), num, den)
}

// ---------------------------------------------------------------------------
// dense univariate helpers for inversion in the tower

fn trim(v: &mut Vec<KElement>) {
    while v.len() > 1 && v.last().map(|x| x.is_zero()) == Some(true) {
        v.pop();
    }
    if v.is_empty() {
        // represent zero as the empty-free single zero
    }
}

fn updeg(v: &[KElement]) -> usize {
    v.len().saturating_sub(1)
}

fn upoly_is_zero(v: &[KElement]) -> bool {
    v.iter().all(|x| x.is_zero())
}

fn upoly_sub(a: &[KElement], b: &[KElement]) -> Vec<KElement> {
    let n = a.len().max(b.len());
    let ctx = a
        .first()
        .or(b.first())
        .map(|x| x.ctx.clone())
        .expect("nonempty");
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| KElement::zero(&ctx));
        let y = b.get(i).cloned().unwrap_or_else(|| KElement::zero(&ctx));
        out.push(x.sub(&y));
    }
    let mut out = out;
    trim(&mut out);
    out
}

fn upoly_mul(a: &[KElement], b: &[KElement]) -> Vec<KElement> {
    let ctx = a.first().expect("nonempty").ctx.clone();
    let mut out = vec![KElement::zero(&ctx); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(&mut out);
    out
}

fn upoly_divrem(a: &[KElement], b: &[KElement]) -> Result<(Vec<KElement>, Vec<KElement>)> {
    let ctx = a.first().expect("nonempty").ctx.clone();
    let db = updeg(b);
    let lead_inv = b[db].inv()?;
    let mut rem: Vec<KElement> = a.to_vec();
    trim(&mut rem);
    let mut quo = vec![KElement::zero(&ctx); a.len()];
    while !upoly_is_zero(&rem) && updeg(&rem) >= db {
        let dr = updeg(&rem);
        let c = rem[dr].mul(&lead_inv);
        quo[dr - db] = quo[dr - db].add(&c);
        for j in 0..=db {
            let t = c.mul(&b[j]);
            rem[dr - db + j] = rem[dr - db + j].sub(&t);
        }
        trim(&mut rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    trim(&mut quo);
    Ok((quo, rem))
}

/// Half extended gcd: returns (g, u) with u·a ≡ g (mod m).
fn upoly_half_ext_gcd(a: &[KElement], m: &[KElement]) -> Result<(Vec<KElement>, Vec<KElement>)> {
    let ctx = a.first().expect("nonempty").ctx.clone();
    let mut r0: Vec<KElement> = m.to_vec();
    let mut r1: Vec<KElement> = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut u0 = vec![KElement::zero(&ctx)];
    let mut u1 = vec![KElement::one(&ctx)];
    while !upoly_is_zero(&r1) {
        let (q, r) = upoly_divrem(&r0, &r1)?;
        let qu = if upoly_is_zero(&q) {
            vec![KElement::zero(&ctx)]
        } else {
            upoly_mul(&q, &u1)
        };
        let new_u = upoly_sub(&u0, &qu);
        r0 = std::mem::replace(&mut r1, r);
        u0 = std::mem::replace(&mut u1, new_u);
        trim(&mut r1);
        if r1.len() == 1 && r1[0].is_zero() {
            break;
        }
    }
    Ok((r0, u0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2(r: usize) -> Ctx {
        FieldContext::new(2, 1, r)
    }

    #[test]
    fn frobenius_on_fractions() {
        let ctx = FieldContext::new(3, 1, 2);
        let x = KElement::lambda(&ctx, 0)
            .div(&KElement::lambda(&ctx, 1))
            .unwrap();
        let y = x.frobenius(1);
        let expect = KElement::lambda(&ctx, 0)
            .pow(3)
            .div(&KElement::lambda(&ctx, 1).pow(3))
            .unwrap();
        assert_eq!(y, expect);
    }

    #[test]
    fn frobenius_identity_case() {
        let ctx = ctx2(1);
        let x = KElement::lambda(&ctx, 0).add(&KElement::one(&ctx));
        assert_eq!(x.frobenius(0), x);
        // (λ+1)^2 = λ^2+1 in char 2
        let sq = x.frobenius(1);
        let expect = KElement::lambda(&ctx, 0).pow(2).add(&KElement::one(&ctx));
        assert_eq!(sq, expect);
    }

    #[test]
    fn pth_root_examples() {
        let ctx = ctx2(2);
        let l1 = KElement::lambda(&ctx, 0);
        let l2 = KElement::lambda(&ctx, 1);
        assert_eq!(l1.pow(2).pth_root().unwrap(), l1);
        assert_eq!(l1.pth_root(), Err(Error::NotAPthPower));
        let x = l1.add(&l2).pow(2).div(&l2.pow(2)).unwrap();
        assert_eq!(x.pth_root().unwrap(), l1.add(&l2).div(&l2).unwrap());
    }

    #[test]
    fn expansion_of_inverse() {
        // 1/(λ+1) = 1/(λ+1) + λ·(1/(λ+1))² over F_2(λ)
        let ctx = ctx2(1);
        let l = KElement::lambda(&ctx, 0);
        let x = l.add(&KElement::one(&ctx)).inv().unwrap();
        let exp = x.pbasis_expand(1).unwrap();
        assert_eq!(exp.coeff(&[0], &ctx), x);
        assert_eq!(exp.coeff(&[1], &ctx), x);
        assert_eq!(exp.reconstruct(&ctx), x);
    }

    #[test]
    fn expansion_reconstructs_in_tower() {
        let ctx = ctx2(1);
        let l = KElement::lambda(&ctx, 0);
        let (ctx2, g) = ctx.adjoin_artin_schreier(&l).unwrap();
        assert_ne!(ctx2.id, ctx.id);
        // γ² + γ = λ
        assert_eq!(g.frobenius(1).sub(&g), l.lift_to(&ctx2).unwrap());
        let x = g
            .mul(&KElement::lambda(&ctx2, 0))
            .add(&KElement::one(&ctx2))
            .div(&g.add(&KElement::lambda(&ctx2, 0)))
            .unwrap();
        let exp = x.pbasis_expand(2).unwrap();
        assert_eq!(exp.reconstruct(&ctx2), x);
    }

    #[test]
    fn artin_schreier_existing_root_found() {
        let ctx = ctx2(1);
        let l = KElement::lambda(&ctx, 0);
        // c = λ² + λ = ℘(λ)
        let c = l.pow(2).add(&l);
        let (same, root) = ctx.adjoin_artin_schreier(&c).unwrap();
        assert_eq!(same.id, ctx.id);
        assert_eq!(root.frobenius(1).sub(&root), c);
        assert_eq!(root, l); // canonical least of {λ, λ+1}
    }

    #[test]
    fn artin_schreier_zero() {
        let ctx = ctx2(1);
        let (same, root) = ctx.adjoin_artin_schreier(&KElement::zero(&ctx)).unwrap();
        assert_eq!(same.id, ctx.id);
        assert!(root.is_zero());
    }

    #[test]
    fn radical_examples() {
        let ctx = ctx2(1);
        let l = KElement::lambda(&ctx, 0);
        let (same, a) = ctx.adjoin_radical(&l.pow(3), 3).unwrap();
        assert_eq!(same.id, ctx.id);
        assert_eq!(a, l);
        let ctx3 = FieldContext::new(3, 1, 1);
        let (s2, one) = ctx3.adjoin_radical(&KElement::one(&ctx3), 2).unwrap();
        assert_eq!(s2.id, ctx3.id);
        assert!(one.is_one());
        // genuinely new radical
        let (cx, al) = ctx.adjoin_radical(&l, 3).unwrap();
        assert_ne!(cx.id, ctx.id);
        assert_eq!(al.pow(3), l.lift_to(&cx).unwrap());
    }

    #[test]
    fn inseparable_radical_rejected() {
        let ctx = ctx2(1);
        let l = KElement::lambda(&ctx, 0);
        assert_eq!(ctx.adjoin_radical(&l, 2).err(), Some(Error::InseparableRadical));
        assert_eq!(
            ctx.adjoin_radical(&KElement::zero(&ctx), 3).err(),
            Some(Error::ZeroRadicand)
        );
    }

    #[test]
    fn tower_inverse_roundtrip() {
        let ctx = ctx2(2);
        let l1 = KElement::lambda(&ctx, 0);
        let (cx, g) = ctx.adjoin_artin_schreier(&l1).unwrap();
        let (cx2, a) = cx
            .adjoin_radical(&KElement::lambda(&cx, 1), 3)
            .unwrap();
        let g2 = g.lift_to(&cx2).unwrap();
        let x = g2
            .add(&a.mul(&KElement::lambda(&cx2, 0)))
            .add(&KElement::one(&cx2));
        let xi = x.inv().unwrap();
        assert!(x.mul(&xi).is_one());
    }

    #[test]
    fn expansion_p3_two_lambdas() {
        let ctx = FieldContext::new(3, 1, 2);
        let l1 = KElement::lambda(&ctx, 0);
        let l2 = KElement::lambda(&ctx, 1);
        let x = l1
            .pow(4)
            .mul(&l2)
            .add(&l1.div(&l2).unwrap())
            .add(&KElement::from_int(&ctx, 2));
        let e = x.pbasis_expand(2).unwrap();
        assert_eq!(e.reconstruct(&ctx), x);
    }

    #[test]
    fn expand_in_alternate_basis() {
        let ctx = ctx2(1);
        let l = KElement::lambda(&ctx, 0);
        let mu = l.pow(3).add(&l); // λ³+λ ∉ K²
        let x = l.add(&KElement::one(&ctx)).inv().unwrap();
        let comps = x.expand_in_basis(&[mu.clone()], 1).unwrap();
        let mut acc = KElement::zero(&ctx);
        for (f, c) in comps {
            acc = acc.add(&mu.pow(f[0]).mul(&c.frobenius(1)));
        }
        assert_eq!(acc, x);
    }
}
