//! Presentations of the explicit unipotent groups: the universal hypersurface
//! group, its level-n relatives, the moduli groups of §-style computations,
//! and the Weil-restriction forms, together with the surjections φ_n and the
//! multi-additive pairing into the multi-λ group.

use crate::error::{Error, Result};
use crate::idx::{self, MultiIdx};
use crate::kfield::{Ctx, KElement};
use crate::ppoly::PPolynomial;
use crate::ratfun::RatFun;
use crate::sympoly::{Frac, SymPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// −X₀ + Σ_{f∈I₁} λ^f X_f^p = 0
    V,
    /// −X + X^p + Σ_{f∈I_n, p∤f} λ^f X_f^{p^n} = 0
    Vn,
    /// Alias of V in the moduli-space coordinates.
    U,
    /// −X₀ + X₀^p + Σ_{f∈J_s} λ^f X_f^{p^s} = 0 (needs r ≥ 2)
    Ws,
    /// b_{ph} = Σ_{g≡h (p^{s−1})} λ^{(g−h)/p^{s−1}} b_g^p for h ∈ I_{s−1}
    Uprime,
    /// W_s plus the descended equation killing the split part.
    Nprime,
    /// −X_{p−1} + Σ_j λ^j X_j^p = 0 (r = 1)
    WeilResGm,
    /// Σ_{f∈I₁} λ^f X_f^p = 0
    WeilAlphaP,
}

impl Preset {
    pub fn parse(s: &str) -> Option<Preset> {
        Some(match s {
            "V" => Preset::V,
            "Vn" => Preset::Vn,
            "U" => Preset::U,
            "Ws" => Preset::Ws,
            "Uprime" => Preset::Uprime,
            "Nprime" => Preset::Nprime,
            "weil_gm" => Preset::WeilResGm,
            "weil_alphap" => Preset::WeilAlphaP,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Coord {
    pub name: String,
    pub index: Option<MultiIdx>,
}

#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub name: String,
    pub ctx: Ctx,
    pub preset: Preset,
    pub level: u32,
    pub coords: Vec<Coord>,
    pub equations: Vec<PPolynomial>,
}

fn coord_name(prefix: &str, f: &[u32]) -> String {
    let tags: Vec<String> = f.iter().map(|x| x.to_string()).collect();
    format!("{}{}", prefix, tags.join("_"))
}

fn lam_mono(ctx: &Ctx, f: &[u32]) -> KElement {
    KElement::lambda_pow(ctx, &f.iter().map(|&e| e as i64).collect::<Vec<_>>())
}

/// J_s: indices not ≡ 0 mod p with some component beyond the first nonzero.
pub fn j_set(r: usize, p: u32, s: u32) -> Vec<MultiIdx> {
    idx::enumerate(r, p.pow(s))
        .into_iter()
        .filter(|f| !idx::divisible(f, p) && f[1..].iter().any(|&x| x != 0))
        .collect()
}

pub fn make_group(preset: Preset, ctx: &Ctx, level: u32) -> Result<GroupPresentation> {
    let p = ctx.p as u32;
    let r = ctx.r;
    if r < 1 {
        return Err(Error::BadParams("r ≥ 1 required".into()));
    }
    match preset {
        Preset::V | Preset::U => {
            let idxs = idx::enumerate(r, p);
            let coords: Vec<Coord> = idxs
                .iter()
                .map(|f| Coord { name: coord_name("X", f), index: Some(f.clone()) })
                .collect();
            let mut terms = vec![(KElement::one(ctx).neg(), 0usize, 0u32)];
            for (fi, f) in idxs.iter().enumerate() {
                terms.push((lam_mono(ctx, f), fi, 1));
            }
            let eq = PPolynomial::new(
                ctx.clone(),
                coords.iter().map(|c| c.name.clone()).collect(),
                terms,
            );
            Ok(GroupPresentation {
                name: if preset == Preset::V { "V".into() } else { "U".into() },
                ctx: ctx.clone(),
                preset,
                level: 1,
                coords,
                equations: vec![eq],
            })
        }
        Preset::Vn => {
            let n = level;
            if n < 1 {
                return Err(Error::BadParams("Vn needs n ≥ 1".into()));
            }
            let idxs: Vec<MultiIdx> = idx::enumerate(r, p.pow(n))
                .into_iter()
                .filter(|f| !idx::divisible(f, p))
                .collect();
            let mut coords = vec![Coord { name: "X".into(), index: None }];
            coords.extend(idxs.iter().map(|f| Coord {
                name: coord_name("X", f),
                index: Some(f.clone()),
            }));
            let mut terms = vec![
                (KElement::one(ctx).neg(), 0usize, 0u32),
                (KElement::one(ctx), 0, 1),
            ];
            for (fi, f) in idxs.iter().enumerate() {
                terms.push((lam_mono(ctx, f), fi + 1, n));
            }
            let eq = PPolynomial::new(
                ctx.clone(),
                coords.iter().map(|c| c.name.clone()).collect(),
                terms,
            );
            Ok(GroupPresentation {
                name: format!("V{n}"),
                ctx: ctx.clone(),
                preset,
                level: n,
                coords,
                equations: vec![eq],
            })
        }
        Preset::Ws | Preset::Nprime => {
            let s = level;
            if s < 1 {
                return Err(Error::BadParams("Ws needs s ≥ 1".into()));
            }
            if r < 2 {
                return Err(Error::BadParams("Ws needs r ≥ 2".into()));
            }
            let js = j_set(r, p, s);
            let mut coords = vec![Coord { name: "X0".into(), index: None }];
            coords.extend(js.iter().map(|f| Coord {
                name: coord_name("X", f),
                index: Some(f.clone()),
            }));
            let vars: Vec<String> = coords.iter().map(|c| c.name.clone()).collect();
            let mut terms = vec![
                (KElement::one(ctx).neg(), 0usize, 0u32),
                (KElement::one(ctx), 0, 1),
            ];
            for (fi, f) in js.iter().enumerate() {
                terms.push((lam_mono(ctx, f), fi + 1, s));
            }
            let weq = PPolynomial::new(ctx.clone(), vars.clone(), terms);
            let mut equations = vec![weq];
            if preset == Preset::Nprime {
                // X₀^{p^{s−1}} + Σ_{f∈J_s} Σ_{d=1}^{ord_p(f')} λ^{f·p^{s−1−d}} X_f^{p^{2s−1−d}}
                let mut terms = vec![(KElement::one(ctx), 0usize, s - 1)];
                for (fi, f) in js.iter().enumerate() {
                    let ord = ord_p_tail(f, p);
                    for d in 1..=ord {
                        let scaled = idx::scale(f, p.pow(s - 1 - d));
                        terms.push((lam_mono(ctx, &scaled), fi + 1, 2 * s - 1 - d));
                    }
                }
                equations.push(PPolynomial::new(ctx.clone(), vars, terms));
            }
            Ok(GroupPresentation {
                name: if preset == Preset::Ws { format!("W{s}") } else { format!("N'{s}") },
                ctx: ctx.clone(),
                preset,
                level: s,
                coords,
                equations,
            })
        }
        Preset::Uprime => {
            let s = level;
            if s < 1 {
                return Err(Error::BadParams("Uprime needs s ≥ 1".into()));
            }
            let gs = idx::enumerate(r, p.pow(s));
            let coords: Vec<Coord> = gs
                .iter()
                .map(|g| Coord { name: coord_name("b", g), index: Some(g.clone()) })
                .collect();
            let vars: Vec<String> = coords.iter().map(|c| c.name.clone()).collect();
            let mut equations = vec![];
            for h in idx::enumerate(r, p.pow(s - 1)) {
                let ph = idx::scale(&h, p);
                let phi = gs.iter().position(|g| *g == ph).unwrap();
                let mut terms = vec![(KElement::one(ctx).neg(), phi, 0u32)];
                for (gi, g) in gs.iter().enumerate() {
                    if idx::congruent(g, &h, p.pow(s - 1)) {
                        let e = idx::div(&idx::sub(g, &h), p.pow(s - 1));
                        terms.push((lam_mono(ctx, &e), gi, 1));
                    }
                }
                equations.push(PPolynomial::new(ctx.clone(), vars.clone(), terms));
            }
            Ok(GroupPresentation {
                name: format!("U'{s}"),
                ctx: ctx.clone(),
                preset,
                level: s,
                coords,
                equations,
            })
        }
        Preset::WeilResGm => {
            if r != 1 {
                return Err(Error::BadParams("weil_gm is a degree-of-imperfection-1 preset".into()));
            }
            let coords: Vec<Coord> = (0..p)
                .map(|j| Coord { name: format!("X{j}"), index: Some(vec![j]) })
                .collect();
            let mut terms = vec![(KElement::one(ctx).neg(), (p - 1) as usize, 0u32)];
            for j in 0..p {
                terms.push((KElement::lambda(ctx, 0).pow(j), j as usize, 1));
            }
            let eq = PPolynomial::new(
                ctx.clone(),
                coords.iter().map(|c| c.name.clone()).collect(),
                terms,
            );
            Ok(GroupPresentation {
                name: "R_{K^{1/p}/K}(Gm)/Gm".into(),
                ctx: ctx.clone(),
                preset,
                level: 1,
                coords,
                equations: vec![eq],
            })
        }
        Preset::WeilAlphaP => {
            let idxs = idx::enumerate(r, p);
            let coords: Vec<Coord> = idxs
                .iter()
                .map(|f| Coord { name: coord_name("X", f), index: Some(f.clone()) })
                .collect();
            let terms = idxs
                .iter()
                .enumerate()
                .map(|(fi, f)| (lam_mono(ctx, f), fi, 1u32))
                .collect();
            let eq = PPolynomial::new(
                ctx.clone(),
                coords.iter().map(|c| c.name.clone()).collect(),
                terms,
            );
            Ok(GroupPresentation {
                name: "R_{K^{1/p}/K}(alpha_p)".into(),
                ctx: ctx.clone(),
                preset,
                level: 1,
                coords,
                equations: vec![eq],
            })
        }
    }
}

/// Largest t with p^t dividing every entry of f beyond the first.
pub fn ord_p_tail(f: &[u32], p: u32) -> u32 {
    let mut t = 0;
    loop {
        if f[1..].iter().any(|&x| x % p.pow(t + 1) != 0) {
            return t;
        }
        t += 1;
    }
}

pub fn membership(g: &GroupPresentation, values: &[RatFun]) -> Result<bool> {
    if values.len() != g.coords.len() {
        return Err(Error::ArityMismatch { expected: g.coords.len(), got: values.len() });
    }
    for eq in &g.equations {
        if !eq.eval_rat(values)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// φ_n: V_{n+1} → V_n on point values; re-checks membership on both sides.
pub fn apply_phi(ctx: &Ctx, n: u32, values: &[RatFun]) -> Result<Vec<RatFun>> {
    let p = ctx.p as u32;
    let src = make_group(Preset::Vn, ctx, n + 1)?;
    let dst = make_group(Preset::Vn, ctx, n)?;
    if !membership(&src, values)? {
        return Err(Error::NotAMember);
    }
    let src_idx: Vec<MultiIdx> = src.coords[1..]
        .iter()
        .map(|c| c.index.clone().unwrap())
        .collect();
    let mut out = vec![values[0].clone()];
    for c in &dst.coords[1..] {
        let g = c.index.as_ref().unwrap();
        let mut z = RatFun::zero(ctx);
        for (fi, f) in src_idx.iter().enumerate() {
            if idx::congruent(f, g, p.pow(n)) {
                let e = idx::div(&idx::sub(f, g), p.pow(n));
                let t = values[fi + 1].pow_p(1)?.mul_scalar(&lam_mono(ctx, &e))?;
                z = z.add(&t)?;
            }
        }
        out.push(z);
    }
    if !membership(&dst, &out)? {
        return Err(Error::NotAMember);
    }
    Ok(out)
}

/// Number of kernel components of φ_n (copies of the α_p Weil restriction),
/// both by coordinate count and by the closed formula.
pub fn phi_kernel_count(p: u32, r: usize, n: u32) -> (u64, u64) {
    let count = idx::enumerate(r, p.pow(n))
        .into_iter()
        .filter(|g| !idx::divisible(g, p))
        .count() as u64;
    let formula = (p as u64).pow(n * r as u32) - (p as u64).pow((n - 1) * r as u32);
    (count, formula)
}

// ---------------------------------------------------------------------------
// symbolic layer

/// Convert a preset equation (λ-monomial coefficients) to a SymPoly over its
/// own coordinates; None if a coefficient is not a λ-monomial.
pub fn equation_sympoly(eq: &PPolynomial) -> Option<SymPoly> {
    let ctx = &eq.ctx;
    let nlam = ctx.r;
    let nvars = eq.vars.len();
    let mut out = SymPoly::zero(ctx.p, nlam, nvars);
    for (c, v, d) in &eq.terms {
        if c.num.terms.len() != 1 || !c.den.is_constant() {
            return None;
        }
        let (m, u) = &c.num.terms[0];
        if m.0[ctx.r..].iter().any(|&e| e > 0) {
            return None;
        }
        let dc = c.den.as_constant()?;
        let unit = ctx.fq.mul(*u, ctx.fq.inv(dc));
        if unit >= ctx.p {
            return None; // outside the prime field
        }
        let lam: Vec<Frac> = (0..ctx.r).map(|i| Frac::int(m.0[i] as i64)).collect();
        let e = (ctx.p).pow(*d);
        out = out.add(&SymPoly::lam_var(ctx.p, nlam, nvars, unit as i64, lam, *v, e));
    }
    Some(out)
}

/// Additivity of every defining equation, checked as a free polynomial
/// identity F(x+y) − F(x) − F(y) = 0 in doubled coordinates.
pub fn verify_additivity(g: &GroupPresentation) -> bool {
    let ncoords = g.coords.len();
    for eq in &g.equations {
        let Some(f) = equation_sympoly(eq) else { return false };
        // embed into 2n variables: x at 0..n, y at n..2n
        let p = g.ctx.p;
        let widen = |s: &SymPoly, shift: usize| -> SymPoly {
            let mut out = SymPoly::zero(p, s.nlam, 2 * ncoords);
            for (m, c) in &s.terms {
                let mut vars = vec![0u64; 2 * ncoords];
                for (i, &e) in m.vars.iter().enumerate() {
                    vars[i + shift] = e;
                }
                out = out.add(&SymPoly::term(
                    p,
                    s.nlam,
                    2 * ncoords,
                    *c as i64,
                    m.lam.clone(),
                    vars,
                ));
            }
            out
        };
        let fx = widen(&f, 0);
        let fy = widen(&f, ncoords);
        // F(x+y): substitute x_i := x_i + y_i in fx
        let mut fxy = fx.clone();
        for i in 0..ncoords {
            let repl = SymPoly::var(p, f.nlam, 2 * ncoords, i)
                .add(&SymPoly::var(p, f.nlam, 2 * ncoords, i + ncoords));
            fxy = fxy.subst_var(i, &repl);
        }
        if !fxy.sub(&fx).sub(&fy).is_zero() {
            return false;
        }
    }
    true
}

/// Pullback of the coordinate characters of V_n along φ_n, symbolically over
/// the coordinates of V_{n+1}: X via the defining relation, Z_g via its
/// definition; both must be K-combinations of p-th powers.
pub fn verify_hom_chi_pullback(p: u64, r: usize, n: u32) -> bool {
    let pu = p as u32;
    let src_idx: Vec<MultiIdx> = idx::enumerate(r, pu.pow(n + 1))
        .into_iter()
        .filter(|f| !idx::divisible(f, pu))
        .collect();
    let nvars = 1 + src_idx.len();
    // Σ λ^f X_f^{p^{n+1}} over the V_{n+1} coordinates
    let mut sigma = SymPoly::zero(p, r, nvars);
    for (fi, f) in src_idx.iter().enumerate() {
        let lam: Vec<Frac> = f.iter().map(|&x| Frac::int(x as i64)).collect();
        sigma = sigma.add(&SymPoly::lam_var(p, r, nvars, 1, lam, fi + 1, p.pow(n + 1)));
    }
    // X = X^p + Σ λ^f X_f^{p^{n+1}} on V_{n+1}; E must consist of p-th powers
    let e = SymPoly::lam_var(p, r, nvars, 1, vec![Frac::zero(); r], 0, p).add(&sigma);
    if !e.is_combination_of_pth_powers() {
        return false;
    }
    let x = SymPoly::var(p, r, nvars, 0);
    let relation = x.sub(&e);
    // sanity: the relation reduces to zero under its rule X^p → X − Σ
    let rule_rhs = x.sub(&sigma);
    if !relation.reduce(&[(0, p as u64, rule_rhs)]).is_zero() {
        return false;
    }
    for g in idx::enumerate(r, pu.pow(n)) {
        if idx::divisible(&g, pu) {
            continue;
        }
        let mut z = SymPoly::zero(p, r, nvars);
        for (fi, f) in src_idx.iter().enumerate() {
            if idx::congruent(f, &g, pu.pow(n)) {
                let ediv = idx::div(&idx::sub(f, &g), pu.pow(n));
                let lam: Vec<Frac> = ediv.iter().map(|&x| Frac::int(x as i64)).collect();
                z = z.add(&SymPoly::lam_var(p, r, nvars, 1, lam, fi + 1, p));
            }
        }
        if z.is_zero() || !z.is_combination_of_pth_powers() {
            return false;
        }
    }
    true
}

/// φ_n is a homomorphism: every image coordinate Z_g is a p-polynomial in
/// the source coordinates, checked as the free identity
/// Z_g(x+y) − Z_g(x) − Z_g(y) = 0 in doubled indeterminates.
pub fn verify_phi_homomorphism(p: u64, r: usize, n: u32) -> bool {
    let pu = p as u32;
    let src_idx: Vec<MultiIdx> = idx::enumerate(r, pu.pow(n + 1))
        .into_iter()
        .filter(|f| !idx::divisible(f, pu))
        .collect();
    let nvars = 1 + src_idx.len();
    let mut images = vec![SymPoly::var(p, r, nvars, 0)];
    for g in idx::enumerate(r, pu.pow(n)) {
        if idx::divisible(&g, pu) {
            continue;
        }
        let mut z = SymPoly::zero(p, r, nvars);
        for (fi, f) in src_idx.iter().enumerate() {
            if idx::congruent(f, &g, pu.pow(n)) {
                let e = idx::div(&idx::sub(f, &g), pu.pow(n));
                let lam: Vec<Frac> = e.iter().map(|&x| Frac::int(x as i64)).collect();
                z = z.add(&SymPoly::lam_var(p, r, nvars, 1, lam, fi + 1, p));
            }
        }
        images.push(z);
    }
    for img in &images {
        let widen = |s: &SymPoly, shift: usize| -> SymPoly {
            let mut out = SymPoly::zero(p, r, 2 * nvars);
            for (m, c) in &s.terms {
                let mut vars = vec![0u64; 2 * nvars];
                for (i, &ee) in m.vars.iter().enumerate() {
                    vars[i + shift] = ee;
                }
                out = out.add(&SymPoly::term(p, r, 2 * nvars, *c as i64, m.lam.clone(), vars));
            }
            out
        };
        let fx = widen(img, 0);
        let fy = widen(img, nvars);
        let mut fxy = fx.clone();
        for i in 0..nvars {
            let repl = SymPoly::var(p, r, 2 * nvars, i)
                .add(&SymPoly::var(p, r, 2 * nvars, i + nvars));
            fxy = fxy.subst_var(i, &repl);
        }
        if !fxy.sub(&fx).sub(&fy).is_zero() {
            return false;
        }
    }
    true
}

/// Variable layout for the pairing: slot i contributes X_i and X_{i,ℓ} for
/// the ℓ ∈ (0, p^n) with p ∤ ℓ.
pub struct PairingVars {
    pub p: u64,
    pub n: u32,
    pub r: usize,
    pub ells: Vec<u32>,
    pub nvars: usize,
}

impl PairingVars {
    pub fn new(p: u64, n: u32, r: usize) -> PairingVars {
        let pu = p as u32;
        let ells: Vec<u32> = (1..pu.pow(n)).filter(|l| l % pu != 0).collect();
        let nvars = r * (1 + ells.len());
        PairingVars { p, n, r, ells, nvars }
    }

    pub fn x(&self, i: usize) -> usize {
        i * (1 + self.ells.len())
    }

    pub fn x_ell(&self, i: usize, ell_pos: usize) -> usize {
        i * (1 + self.ells.len()) + 1 + ell_pos
    }
}

fn v_p(mut x: u32, p: u32) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Z and the Z_f of the multi-additive pairing, symbolically. Each is a
/// product of one additive form per slot.
pub fn pairing_symbolic(vars: &PairingVars) -> (SymPoly, Vec<(MultiIdx, SymPoly)>) {
    let (p, n, r) = (vars.p, vars.n, vars.r);
    let pu = p as u32;
    let mut z = SymPoly::term(p, r, vars.nvars, 1, vec![Frac::zero(); r], vec![0; vars.nvars]);
    for i in 0..r {
        z = z.mul(&SymPoly::var(p, r, vars.nvars, vars.x(i)));
    }
    let mut zfs = vec![];
    for f in idx::enumerate(r, pu.pow(n)) {
        if idx::divisible(&f, pu) {
            continue;
        }
        let mut zf =
            SymPoly::term(p, r, vars.nvars, 1, vec![Frac::zero(); r], vec![0; vars.nvars]);
        for i in 0..r {
            if f[i] == 0 {
                zf = zf.mul(&SymPoly::var(p, r, vars.nvars, vars.x(i)));
            } else {
                let v = v_p(f[i], pu);
                let base = f[i] / pu.pow(v);
                let modulus = pu.pow(n - v);
                let mut form = SymPoly::zero(p, r, vars.nvars);
                for (lp, &ell) in vars.ells.iter().enumerate() {
                    if ell % modulus == base % modulus {
                        let e = (ell - base) / modulus;
                        let mut lam = vec![Frac::zero(); r];
                        lam[i] = Frac::int(e as i64);
                        form = form.add(&SymPoly::lam_var(
                            p,
                            r,
                            vars.nvars,
                            1,
                            lam,
                            vars.x_ell(i, lp),
                            p.pow(v),
                        ));
                    }
                }
                assert!(!form.terms.is_empty(), "empty congruence class in pairing");
                zf = zf.mul(&form);
            }
        }
        zfs.push((f, zf));
    }
    (z, zfs)
}

/// Numeric pairing on point values of the factors V_{n,λ_i}.
pub struct PairingOutput {
    pub z: RatFun,
    pub z_f: Vec<(MultiIdx, RatFun)>,
}

pub fn build_pairing(
    ctx: &Ctx,
    n: u32,
    inputs: &[Vec<RatFun>],
) -> Result<PairingOutput> {
    let p = ctx.p as u32;
    let r = ctx.r;
    if inputs.len() != r {
        return Err(Error::ArityMismatch { expected: r, got: inputs.len() });
    }
    let ells: Vec<u32> = (1..p.pow(n)).filter(|l| l % p != 0).collect();
    for v in inputs {
        if v.len() != 1 + ells.len() {
            return Err(Error::ArityMismatch { expected: 1 + ells.len(), got: v.len() });
        }
    }
    let mut z = RatFun::constant(KElement::one(ctx));
    for input in inputs {
        z = z.mul(&input[0])?;
    }
    let mut z_f = vec![];
    for f in idx::enumerate(r, p.pow(n)) {
        if idx::divisible(&f, p) {
            continue;
        }
        let mut zf = RatFun::constant(KElement::one(ctx));
        for i in 0..r {
            if f[i] == 0 {
                zf = zf.mul(&inputs[i][0])?;
            } else {
                let v = v_p(f[i], p);
                let base = f[i] / p.pow(v);
                let modulus = p.pow(n - v);
                let mut form = RatFun::zero(ctx);
                for (lp, &ell) in ells.iter().enumerate() {
                    if ell % modulus == base % modulus {
                        let e = (ell - base) / modulus;
                        let lam = KElement::lambda(ctx, i).pow(e);
                        let t = inputs[i][lp + 1].pow_p(v)?.mul_scalar(&lam)?;
                        form = form.add(&t)?;
                    }
                }
                if form.is_zero() && ells.iter().all(|&ell| ell % modulus != base % modulus) {
                    return Err(Error::BadIndex);
                }
                zf = zf.mul(&form)?;
            }
        }
        z_f.push((f, zf));
    }
    Ok(PairingOutput { z, z_f })
}

/// Random point on a V- or Vn-preset group: free coordinates random, the
/// distinguished coordinate solved by an Artin–Schreier adjunction.
pub fn random_point<R: rand::Rng>(
    g: &GroupPresentation,
    rng: &mut R,
) -> Result<(Ctx, Vec<KElement>)> {
    let ctx = &g.ctx;
    match g.preset {
        Preset::V | Preset::U | Preset::Vn => {}
        _ => return Err(Error::BadParams("random points only for V-type presets".into())),
    }
    let eq = &g.equations[0];
    // choose values for all coords except the distinguished X (index 0);
    // then X^p − X = −Σ(rest) has an Artin–Schreier solution.
    let mut vals = vec![KElement::zero(ctx)];
    for _ in 1..g.coords.len() {
        vals.push(crate::kfield::random_element(ctx, rng, 1, 2));
    }
    let mut rest = KElement::zero(ctx);
    for (c, v, d) in &eq.terms {
        if *v != 0 {
            rest = rest.add(&c.mul(&vals[*v].frobenius(*d)));
        }
    }
    // V-presets: the X-part of the equation is −X + X^p (for Vn) or
    // −X₀ + X₀^p (for V with the f = 0 slot): ℘(X) = −rest
    let c = rest.neg();
    let (cx, root) = ctx.adjoin_artin_schreier(&c)?;
    let mut out = Vec::with_capacity(vals.len());
    out.push(root);
    for v in &vals[1..] {
        out.push(v.lift_to(&cx)?);
    }
    Ok((cx, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::FieldContext;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn preset_shapes() {
        let ctx = FieldContext::new(2, 1, 1);
        let v = make_group(Preset::V, &ctx, 1).unwrap();
        assert_eq!(v.coords.len(), 2);
        assert_eq!(v.coords[0].name, "X0");
        let v2 = make_group(Preset::Vn, &ctx, 2).unwrap();
        let names: Vec<&str> = v2.coords.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["X", "X1", "X3"]);
        let wa = make_group(Preset::WeilAlphaP, &ctx, 1).unwrap();
        assert_eq!(wa.equations[0].terms.len(), 2);
    }

    #[test]
    fn membership_examples() {
        let ctx = FieldContext::new(2, 1, 1);
        let v = make_group(Preset::V, &ctx, 1).unwrap();
        let zero = RatFun::zero(&ctx);
        let one = RatFun::constant(KElement::one(&ctx));
        let lam = RatFun::constant(KElement::lambda(&ctx, 0));
        assert!(membership(&v, &[zero.clone(), zero.clone()]).unwrap());
        // (1, 0): −1 + 1 = 0
        assert!(membership(&v, &[one.clone(), zero.clone()]).unwrap());
        // (λ, 0): −λ + λ² ≠ 0
        assert!(!membership(&v, &[lam, zero]).unwrap());
    }

    #[test]
    fn preset_additivity() {
        let ctx2 = FieldContext::new(2, 1, 2);
        let ctx3 = FieldContext::new(3, 1, 2);
        for ctx in [&ctx2, &ctx3] {
            for (preset, lv) in [
                (Preset::V, 1),
                (Preset::Vn, 2),
                (Preset::Ws, 2),
                (Preset::Uprime, 2),
                (Preset::Nprime, 2),
                (Preset::WeilAlphaP, 1),
            ] {
                let g = make_group(preset, ctx, lv).unwrap();
                assert!(verify_additivity(&g), "{} not additive", g.name);
            }
        }
        let ctx1 = FieldContext::new(3, 1, 1);
        let g = make_group(Preset::WeilResGm, &ctx1, 1).unwrap();
        assert!(verify_additivity(&g));
    }

    #[test]
    fn phi_on_points_and_kernel_count() {
        let ctx = FieldContext::new(2, 1, 1);
        // zero point maps to zero point
        let v2 = make_group(Preset::Vn, &ctx, 2).unwrap();
        let zeros = vec![RatFun::zero(&ctx); v2.coords.len()];
        let img = apply_phi(&ctx, 1, &zeros).unwrap();
        assert!(img.iter().all(|x| x.is_zero()));
        // (1, 0, 0) ∈ V₂ maps to (1, 0)
        let one = RatFun::constant(KElement::one(&ctx));
        let img = apply_phi(&ctx, 1, &[one.clone(), RatFun::zero(&ctx), RatFun::zero(&ctx)]).unwrap();
        assert_eq!(img.len(), 2);
        assert_eq!(img[0], one);
        assert!(img[1].is_zero());
        for (n, r) in [(1u32, 1usize), (1, 2), (2, 1), (2, 2)] {
            let (count, formula) = phi_kernel_count(2, r, n);
            assert_eq!(count, formula);
        }
    }

    #[test]
    fn phi_rejects_non_members() {
        let ctx = FieldContext::new(2, 1, 1);
        let lam = RatFun::constant(KElement::lambda(&ctx, 0));
        let err = apply_phi(&ctx, 1, &[lam.clone(), RatFun::zero(&ctx), RatFun::zero(&ctx)]);
        assert!(matches!(err, Err(Error::NotAMember)));
    }

    #[test]
    fn chi_pullback_small_cases() {
        assert!(verify_hom_chi_pullback(2, 1, 1));
        assert!(verify_hom_chi_pullback(3, 1, 1));
        assert!(verify_hom_chi_pullback(2, 1, 2));
        assert!(verify_hom_chi_pullback(2, 2, 1));
    }

    #[test]
    fn pairing_explicit_2_1_2() {
        // Z = X₁X₂, Z_{(1,0)} = X_{1,1}X₂, Z_{(0,1)} = X₁X_{2,1}, Z_{(1,1)} = X_{1,1}X_{2,1}
        let vars = PairingVars::new(2, 1, 2);
        let (z, zfs) = pairing_symbolic(&vars);
        assert_eq!(z.terms.len(), 1);
        assert_eq!(zfs.len(), 3);
        for (f, zf) in &zfs {
            assert_eq!(zf.terms.len(), 1, "Z_{f:?} should be a single monomial here");
        }
    }

    #[test]
    fn random_points_are_members_and_add() {
        let ctx = FieldContext::new(2, 1, 1);
        let v = make_group(Preset::V, &ctx, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..5 {
            let (cx, pt) = random_point(&v, &mut rng).unwrap();
            let vv = make_group(Preset::V, &cx, 1).unwrap();
            let vals: Vec<RatFun> = pt.iter().map(|x| RatFun::constant(x.clone())).collect();
            assert!(membership(&vv, &vals).unwrap());
            let (cx2, pt2raw) = random_point(&vv, &mut rng).unwrap();
            let sum: Vec<RatFun> = pt
                .iter()
                .zip(&pt2raw)
                .map(|(a, b)| {
                    RatFun::constant(a.lift_to(&cx2).unwrap().add(b))
                })
                .collect();
            let vv2 = make_group(Preset::V, &cx2, 1).unwrap();
            assert!(membership(&vv2, &sum).unwrap());
        }
    }
}
