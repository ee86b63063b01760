//! p-polynomial forms: principal parts, reducedness certification via
//! λ-exponent classes, constructive universality for the supported families,
//! and wound/permawound reports.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::idx;
use crate::kfield::{Ctx, KElement};
use crate::ratfun::RatFun;

/// A sum of terms c·X_v^{p^d}, additive as a map K^n → K.
#[derive(Debug, Clone)]
pub struct PPolynomial {
    pub ctx: Ctx,
    pub vars: Vec<String>,
    /// (coefficient, variable index, p-power exponent d), sorted by (var, d),
    /// at most one term per (var, d), no zero coefficients.
    pub terms: Vec<(KElement, usize, u32)>,
}

impl PPolynomial {
    pub fn new(ctx: Ctx, vars: Vec<String>, terms: Vec<(KElement, usize, u32)>) -> Self {
        let mut map: std::collections::BTreeMap<(usize, u32), KElement> =
            std::collections::BTreeMap::new();
        for (c, v, d) in terms {
            assert!(v < vars.len(), "term references unknown variable");
            let e = map.entry((v, d)).or_insert_with(|| KElement::zero(&ctx));
            *e = e.add(&c);
        }
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((v, d), c)| (c, v, d))
            .collect();
        PPolynomial { ctx, vars, terms }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn eval_k(&self, values: &[KElement]) -> Result<KElement> {
        if values.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: values.len() });
        }
        let mut acc = KElement::zero(&self.ctx);
        for (c, v, d) in &self.terms {
            acc = acc.add(&c.mul(&values[*v].frobenius(*d)));
        }
        Ok(acc)
    }

    pub fn eval_rat(&self, values: &[RatFun]) -> Result<RatFun> {
        if values.len() != self.vars.len() {
            return Err(Error::ArityMismatch { expected: self.vars.len(), got: values.len() });
        }
        let mut acc = RatFun::zero(&self.ctx);
        for (c, v, d) in &self.terms {
            let t = values[*v].pow_p(*d)?.mul_scalar(c)?;
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// The highest-degree term in each variable.
    pub fn principal_part(&self) -> Result<PrincipalPart> {
        if self.terms.is_empty() {
            return Err(Error::MalformedForm("zero p-polynomial has no principal part".into()));
        }
        let mut best: std::collections::BTreeMap<usize, (KElement, u32)> =
            std::collections::BTreeMap::new();
        for (c, v, d) in &self.terms {
            match best.get(v) {
                Some((_, bd)) if bd > d => {}
                Some((_, bd)) if bd == d => {
                    return Err(Error::MalformedForm(format!(
                        "variable {} has two terms at its maximal degree",
                        self.vars[*v]
                    )));
                }
                _ => {
                    best.insert(*v, (c.clone(), *d));
                }
            }
        }
        Ok(PrincipalPart {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: best.into_iter().map(|(v, (c, d))| (c, v, d)).collect(),
        })
    }

    pub fn lift_to(&self, ctx: &Ctx) -> Result<PPolynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(c, v, d)| Ok((c.lift_to(ctx)?, *v, *d)))
            .collect::<Result<_>>()?;
        Ok(PPolynomial { ctx: ctx.clone(), vars: self.vars.clone(), terms })
    }
}

/// One term per variable, each at that variable's maximal p-power degree.
#[derive(Debug, Clone)]
pub struct PrincipalPart {
    pub ctx: Ctx,
    pub vars: Vec<String>,
    pub terms: Vec<(KElement, usize, u32)>,
}

impl PrincipalPart {
    pub fn eval_k(&self, values: &[KElement]) -> Result<KElement> {
        let pp = PPolynomial {
            ctx: self.ctx.clone(),
            vars: self.vars.clone(),
            terms: self.terms.clone(),
        };
        pp.eval_k(values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Certified(bool),
    Unknown,
}

/// Coefficient as unit·λ^a with integer exponent vector, if monomial.
fn as_lambda_monomial(c: &KElement) -> Option<(u64, Vec<i64>)> {
    let ctx = &c.ctx;
    if c.num.terms.len() != 1 || c.den.terms.len() != 1 {
        return None;
    }
    let (nm, nc) = &c.num.terms[0];
    let (dm, dc) = &c.den.terms[0];
    if nm.0[ctx.r..].iter().any(|&e| e > 0) || dm.0[ctx.r..].iter().any(|&e| e > 0) {
        return None;
    }
    let unit = ctx.fq.mul(*nc, ctx.fq.inv(*dc));
    let a: Vec<i64> = (0..ctx.r)
        .map(|i| nm.0[i] as i64 - dm.0[i] as i64)
        .collect();
    Some((unit, a))
}

/// Certify that a principal part has no nontrivial zero over K.
///
/// For monomial coefficients u_v·λ^{a_v}: inflating each variable of degree
/// p^{d_v} by a generic level-(N−d_v) expansion puts every resulting term in
/// the λ-exponent class a_v + p^{d_v}·I (mod p^N). Classes from one variable
/// never meet; classes from v and w meet exactly when a_v ≡ a_w mod
/// p^{min(d_v,d_w)}. All classes distinct forces the trivial zero; a meeting
/// pair yields an explicit zero by cancelling the two terms.
pub fn certify_reduced(pp: &PrincipalPart) -> (Certificate, Option<Vec<KElement>>) {
    let ctx = &pp.ctx;
    let p = ctx.p as i64;
    let mut mono = Vec::with_capacity(pp.terms.len());
    for (c, v, d) in &pp.terms {
        match as_lambda_monomial(c) {
            Some((u, a)) => mono.push((u, a, *v, *d)),
            None => {
                // outside the certified fragment: bounded random refutation only
                if let Some(zero) = random_zero_search(pp) {
                    return (Certificate::Certified(false), Some(zero));
                }
                return (Certificate::Unknown, None);
            }
        }
    }
    for i in 0..mono.len() {
        for j in i + 1..mono.len() {
            let (ref ui, ref ai, vi, di) = mono[i];
            let (ref uj, ref aj, vj, dj) = mono[j];
            let dmin = di.min(dj);
            let modulus = p.pow(dmin);
            let collide = ai
                .iter()
                .zip(aj.iter())
                .all(|(x, y)| (x - y).rem_euclid(modulus) == 0);
            if collide {
                // order so that v carries the smaller degree
                let ((uv, av, v, dv), (uw, aw, w, _dw)) = if di <= dj {
                    ((ui, ai, vi, di), (uj, aj, vj, dj))
                } else {
                    ((uj, aj, vj, dj), (ui, ai, vi, di))
                };
                let mut zero = vec![KElement::zero(ctx); pp.vars.len()];
                // x_w := 1, x_v := (−u_w/u_v)^{1/p^{d_v}} λ^{(a_w−a_v)/p^{d_v}}
                zero[w] = KElement::one(ctx);
                let mut unit = ctx.fq.neg(ctx.fq.mul(*uw, ctx.fq.inv(*uv)));
                for _ in 0..dv {
                    unit = ctx.fq.pth_root(unit);
                }
                let exps: Vec<i64> = aw
                    .iter()
                    .zip(av.iter())
                    .map(|(x, y)| (x - y) / p.pow(dv))
                    .collect();
                zero[v] = KElement::from_fq(ctx, unit)
                    .mul(&KElement::lambda_pow(ctx, &exps));
                debug_assert!(pp.eval_k(&zero).map(|x| x.is_zero()).unwrap_or(false));
                return (Certificate::Certified(false), Some(zero));
            }
        }
    }
    (Certificate::Certified(true), None)
}

/// Bounded-height randomized zero search, used as a refuter outside the
/// certified monomial fragment. Deterministic (fixed seed).
fn random_zero_search(pp: &PrincipalPart) -> Option<Vec<KElement>> {
    let ctx = &pp.ctx;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let q = ctx.fq.q();
    for _ in 0..400 {
        let mut cand = vec![KElement::zero(ctx); pp.vars.len()];
        let mut nontrivial = false;
        for c in cand.iter_mut() {
            if rng.gen_bool(0.4) {
                continue;
            }
            let u = 1 + rng.gen_range(0..q - 1);
            let exps: Vec<i64> = (0..ctx.r).map(|_| rng.gen_range(-2..=2)).collect();
            *c = KElement::from_fq(ctx, u).mul(&KElement::lambda_pow(ctx, &exps));
            nontrivial = true;
        }
        if nontrivial && pp.eval_k(&cand).map(|x| x.is_zero()).unwrap_or(false) {
            return Some(cand);
        }
    }
    None
}

/// The three supported universal families of principal parts.
enum Family {
    /// {u_f λ^f X_f^{p^n} : f ∈ I_n}, slots[fi] = (var, unit)
    Full { n: u32, slots: Vec<(usize, u64)> },
    /// u·X^p + {u_f λ^f X_f^{p^n} : f ∈ I_n, p∤f}
    FShape { n: u32, x: (usize, u64), slots: Vec<(usize, u64)> },
}

fn recognize_family(pp: &PrincipalPart) -> Option<Family> {
    let ctx = &pp.ctx;
    let p = ctx.p as i64;
    let mut mono = Vec::with_capacity(pp.terms.len());
    for (c, v, d) in &pp.terms {
        let (u, a) = as_lambda_monomial(c)?;
        if a.iter().any(|&x| x < 0) {
            return None;
        }
        mono.push((u, a.iter().map(|&x| x as u32).collect::<Vec<u32>>(), *v, *d));
    }
    let n = mono.iter().map(|&(_, _, _, d)| d).max()?;
    if n == 0 {
        return None;
    }
    let bound = (p as u32).pow(n);
    let full_idx = idx::enumerate(ctx.r, bound);
    // full family: every term at level n, coefficient exponents < p^n,
    // exactly one term per f ∈ I_n
    if mono.iter().all(|&(_, _, _, d)| d == n) && mono.len() == full_idx.len() {
        let mut slots = vec![None; full_idx.len()];
        let mut ok = true;
        for (u, a, v, _) in &mono {
            if a.iter().any(|&x| x >= bound) {
                ok = false;
                break;
            }
            let fi = full_idx.iter().position(|f| f == a)?;
            if slots[fi].is_some() {
                ok = false;
                break;
            }
            slots[fi] = Some((*v, *u));
        }
        if ok && slots.iter().all(|s| s.is_some()) {
            return Some(Family::Full {
                n,
                slots: slots.into_iter().map(|s| s.unwrap()).collect(),
            });
        }
    }
    // F-shape: one X^p term with constant coefficient, the rest at level n
    // covering exactly {f ∈ I_n : p ∤ f}
    let x_terms: Vec<_> = mono.iter().filter(|&&(_, ref a, _, d)| d == 1 && a.iter().all(|&x| x == 0)).collect();
    if x_terms.len() == 1 && n >= 1 {
        let x = (x_terms[0].2, x_terms[0].0);
        let rest: Vec<_> = mono
            .iter()
            .filter(|&&(_, _, v, _)| v != x.0)
            .collect();
        let want: Vec<_> = full_idx
            .iter()
            .filter(|f| !idx::divisible(f, ctx.p as u32))
            .cloned()
            .collect();
        if rest.len() == want.len() && rest.iter().all(|&&(_, _, _, d)| d == n) {
            let mut slots = vec![None; want.len()];
            for &&(u, ref a, v, _) in &rest {
                let fi = want.iter().position(|f| f == a)?;
                if slots[fi].is_some() {
                    return None;
                }
                slots[fi] = Some((v, u));
            }
            if slots.iter().all(|s| s.is_some()) {
                return Some(Family::FShape {
                    n,
                    x,
                    slots: slots.into_iter().map(|s| s.unwrap()).collect(),
                });
            }
        }
    }
    None
}

fn unit_root(ctx: &Ctx, u: u64, d: u32) -> KElement {
    let mut x = ctx.fq.inv(u);
    for _ in 0..d {
        x = ctx.fq.pth_root(x);
    }
    KElement::from_fq(ctx, x)
}

/// Solve P(w) = β exactly for a principal part in a supported universal
/// family. The full family is the level-n expansion itself; the F-shape
/// routes the p-divisible part of the expansion into the X^p slot.
pub fn solve_principal(pp: &PrincipalPart, beta: &KElement) -> Result<Vec<KElement>> {
    let ctx = &pp.ctx;
    let p = ctx.p as u32;
    let fam = recognize_family(pp).ok_or(Error::UnsupportedFamily)?;
    let mut w = vec![KElement::zero(ctx); pp.vars.len()];
    match fam {
        Family::Full { n, slots } => {
            let exp = beta.pbasis_expand(n)?;
            for (fi, f) in idx::enumerate(ctx.r, p.pow(n)).iter().enumerate() {
                let c = exp.coeff(f, ctx);
                let (v, u) = slots[fi];
                w[v] = c.mul(&unit_root(ctx, u, n));
            }
        }
        Family::FShape { n, x, slots } => {
            let exp = beta.pbasis_expand(n)?;
            let want: Vec<_> = idx::enumerate(ctx.r, p.pow(n))
                .into_iter()
                .filter(|f| !idx::divisible(f, p))
                .collect();
            for (fi, f) in want.iter().enumerate() {
                let c = exp.coeff(f, ctx);
                let (v, u) = slots[fi];
                w[v] = c.mul(&unit_root(ctx, u, n));
            }
            // the p-divisible part Σ λ^{pg} c_{pg}^{p^n} = (Σ λ^g c_{pg}^{p^{n-1}})^p
            let mut xval = KElement::zero(ctx);
            for g in idx::enumerate(ctx.r, p.pow(n - 1)) {
                let f = idx::scale(&g, p);
                let c = exp.coeff(&f, ctx);
                if c.is_zero() {
                    continue;
                }
                let lam = KElement::lambda_pow(
                    ctx,
                    &g.iter().map(|&e| e as i64).collect::<Vec<_>>(),
                );
                xval = xval.add(&lam.mul(&c.frobenius(n - 1)));
            }
            w[x.0] = xval.mul(&unit_root(ctx, x.1, 1));
        }
    }
    let check = pp.eval_k(&w)?;
    assert_eq!(&check, beta, "principal solve must be exact");
    Ok(w)
}

#[derive(Debug, Clone)]
pub struct WoundReport {
    pub smooth: bool,
    pub reduced: Certificate,
    pub universal: Certificate,
    /// For hypersurface presentations permawound is equivalent to the
    /// principal part being universal; that is the criterion applied here,
    /// covering the non-smooth Weil-restriction form as well.
    pub permawound: bool,
    pub refuted_zero: Option<Vec<KElement>>,
}

pub fn certify_wound_permawound(f: &PPolynomial) -> Result<WoundReport> {
    let ctx = &f.ctx;
    let smooth = f.terms.iter().any(|(c, _, d)| *d == 0 && !c.is_zero());
    let pp = f.principal_part()?;
    let (reduced, refuted_zero) = certify_reduced(&pp);
    let universal = if recognize_family(&pp).is_some() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xbeef);
        let mut battery = vec![
            KElement::zero(ctx),
            KElement::one(ctx),
            KElement::lambda(ctx, 0),
            crate::kfield::random_element(ctx, &mut rng, 2, 3),
        ];
        let ok = battery
            .drain(..)
            .all(|beta| solve_principal(&pp, &beta).is_ok());
        if ok {
            Certificate::Certified(true)
        } else {
            Certificate::Unknown
        }
    } else {
        Certificate::Unknown
    };
    let permawound = universal == Certificate::Certified(true);
    Ok(WoundReport { smooth, reduced, universal, permawound, refuted_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::FieldContext;

    fn v_form(ctx: &Ctx) -> PPolynomial {
        // −X₀ + Σ_{f∈I₁} λ^f X_f^p  (the universal hypersurface form)
        let p = ctx.p as u32;
        let idxs = idx::enumerate(ctx.r, p);
        let vars: Vec<String> = idxs
            .iter()
            .map(|f| {
                let tags: Vec<String> = f.iter().map(|x| x.to_string()).collect();
                format!("X{}", tags.join("_"))
            })
            .collect();
        let mut terms = vec![(KElement::one(ctx).neg(), 0usize, 0u32)];
        for (fi, f) in idxs.iter().enumerate() {
            let lam = KElement::lambda_pow(
                ctx,
                &f.iter().map(|&e| e as i64).collect::<Vec<_>>(),
            );
            terms.push((lam, fi, 1));
        }
        PPolynomial::new(ctx.clone(), vars, terms)
    }

    #[test]
    fn principal_part_examples() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        // −X + X² + λX₁²
        let f = PPolynomial::new(
            ctx.clone(),
            vec!["X".into(), "X1".into()],
            vec![
                (KElement::one(&ctx).neg(), 0, 0),
                (KElement::one(&ctx), 0, 1),
                (l.clone(), 1, 1),
            ],
        );
        let pp = f.principal_part().unwrap();
        assert_eq!(pp.terms.len(), 2);
        assert!(pp.terms.iter().all(|(_, _, d)| *d == 1));
        // F = −X alone
        let f = PPolynomial::new(
            ctx.clone(),
            vec!["X".into()],
            vec![(KElement::one(&ctx).neg(), 0, 0)],
        );
        let pp = f.principal_part().unwrap();
        assert_eq!(pp.terms.len(), 1);
        assert_eq!(pp.terms[0].2, 0);
    }

    #[test]
    fn reduced_certificates() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let one = KElement::one(&ctx);
        // X² + λX₁²: classes 0 and 1 mod 2 distinct
        let pp = PrincipalPart {
            ctx: ctx.clone(),
            vars: vec!["X".into(), "X1".into()],
            terms: vec![(one.clone(), 0, 1), (l.clone(), 1, 1)],
        };
        assert_eq!(certify_reduced(&pp).0, Certificate::Certified(true));
        // X₁² + λ²X₂²: λ² = (λ)², zero at (λ, 1)
        let pp = PrincipalPart {
            ctx: ctx.clone(),
            vars: vec!["X1".into(), "X2".into()],
            terms: vec![(one.clone(), 0, 1), (l.pow(2), 1, 1)],
        };
        let (cert, zero) = certify_reduced(&pp);
        assert_eq!(cert, Certificate::Certified(false));
        let zero = zero.unwrap();
        assert_eq!(zero[0], l);
        assert!(zero[1].is_one());
        assert!(pp.eval_k(&zero).unwrap().is_zero());
        // non-monomial coefficient → Unknown
        let pp = PrincipalPart {
            ctx: ctx.clone(),
            vars: vec!["X1".into(), "X2".into()],
            terms: vec![(one.clone(), 0, 1), (l.add(&one).mul(&l.pow(2)).add(&l), 1, 1)],
        };
        assert_eq!(certify_reduced(&pp).0, Certificate::Unknown);
    }

    #[test]
    fn solve_principal_full_family() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let f = v_form(&ctx);
        let pp = f.principal_part().unwrap();
        // β = λ: w = (0, 1)
        let w = solve_principal(&pp, &l).unwrap();
        assert!(w[0].is_zero());
        assert!(w[1].is_one());
        // β = 0 → all-zero
        let w = solve_principal(&pp, &KElement::zero(&ctx)).unwrap();
        assert!(w.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_principal_fshape() {
        // x^p + λ x₁^p with β = λ³ = λ·(λ)²: x₁ = λ, x = 0
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let pp = PrincipalPart {
            ctx: ctx.clone(),
            vars: vec!["X".into(), "X1".into()],
            terms: vec![(KElement::one(&ctx), 0, 1), (l.clone(), 1, 1)],
        };
        let w = solve_principal(&pp, &l.pow(3)).unwrap();
        assert!(w[0].is_zero());
        assert_eq!(w[1], l);
    }

    #[test]
    fn wound_permawound_verdicts() {
        let ctx = FieldContext::new(2, 1, 1);
        let rep = certify_wound_permawound(&v_form(&ctx)).unwrap();
        assert!(rep.smooth);
        assert_eq!(rep.reduced, Certificate::Certified(true));
        assert_eq!(rep.universal, Certificate::Certified(true));
        assert!(rep.permawound);
        // F = −X₀ + X₁²: principal part −X₀ + X₁² collides at d=0
        let f = PPolynomial::new(
            ctx.clone(),
            vec!["X0".into(), "X1".into()],
            vec![
                (KElement::one(&ctx).neg(), 0, 0),
                (KElement::one(&ctx), 1, 1),
            ],
        );
        let rep = certify_wound_permawound(&f).unwrap();
        assert!(rep.smooth);
        assert_eq!(rep.reduced, Certificate::Certified(false));
        assert!(rep.refuted_zero.is_some());
        assert!(!rep.permawound);
    }

    #[test]
    fn weilrest_gm_form_is_permawound() {
        // −X_{p−1} + Σ_j λ^j X_j^p for p = 3
        let ctx = FieldContext::new(3, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let vars: Vec<String> = (0..3).map(|j| format!("X{j}")).collect();
        let mut terms = vec![(KElement::one(&ctx).neg(), 2usize, 0u32)];
        for j in 0..3u32 {
            terms.push((l.pow(j), j as usize, 1));
        }
        let f = PPolynomial::new(ctx.clone(), vars, terms);
        let rep = certify_wound_permawound(&f).unwrap();
        assert!(rep.smooth && rep.permawound);
        assert_eq!(rep.reduced, Certificate::Certified(true));
    }

    #[test]
    fn solve_battery_is_exact_on_random_betas() {
        let ctx = FieldContext::new(3, 1, 2);
        let f = v_form(&ctx);
        let pp = f.principal_part().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let beta = crate::kfield::random_element(&ctx, &mut rng, 3, 4);
            let w = solve_principal(&pp, &beta).unwrap();
            assert_eq!(pp.eval_k(&w).unwrap(), beta);
        }
    }
}
