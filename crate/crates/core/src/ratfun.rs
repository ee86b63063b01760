//! The univariate rational function field K(T): sparse polynomials in T with
//! KElement coefficients, and reduced fractions with monic denominator.

use crate::error::{Error, Result};
use crate::kfield::{Ctx, KElement};

/// Sparse polynomial in T, terms sorted by ascending exponent, no zeros.
#[derive(Debug, Clone)]
pub struct UPoly {
    pub ctx: Ctx,
    pub terms: Vec<(u64, KElement)>,
}

impl PartialEq for UPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.id == other.ctx.id && self.terms == other.terms
    }
}
impl Eq for UPoly {}

impl UPoly {
    pub fn zero(ctx: &Ctx) -> Self {
        UPoly { ctx: ctx.clone(), terms: vec![] }
    }

    pub fn constant(c: KElement) -> Self {
        let ctx = c.ctx.clone();
        if c.is_zero() {
            Self::zero(&ctx)
        } else {
            UPoly { ctx, terms: vec![(0, c)] }
        }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(KElement::one(ctx))
    }

    pub fn t(ctx: &Ctx) -> Self {
        UPoly { ctx: ctx.clone(), terms: vec![(1, KElement::one(ctx))] }
    }

    pub fn monomial(c: KElement, e: u64) -> Self {
        let ctx = c.ctx.clone();
        if c.is_zero() {
            Self::zero(&ctx)
        } else {
            UPoly { ctx, terms: vec![(e, c)] }
        }
    }

    pub fn from_terms(ctx: &Ctx, mut terms: Vec<(u64, KElement)>) -> Self {
        terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(u64, KElement)> = vec![];
        for (e, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == e {
                    last.1 = last.1.add(&c);
                    if last.1.is_zero() {
                        out.pop();
                    }
                    continue;
                }
            }
            if !c.is_zero() {
                out.push((e, c));
            }
        }
        UPoly { ctx: ctx.clone(), terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn lead_coeff(&self) -> Option<&KElement> {
        self.terms.last().map(|(_, c)| c)
    }

    pub fn coeff(&self, e: u64) -> KElement {
        self.terms
            .iter()
            .find(|(ee, _)| *ee == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| KElement::zero(&self.ctx))
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(&self.ctx, terms)
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                terms.push((e1 + e2, c1.mul(c2)));
            }
        }
        Self::from_terms(&self.ctx, terms)
    }

    pub fn mul_scalar(&self, c: &KElement) -> UPoly {
        if c.is_zero() {
            return Self::zero(&self.ctx);
        }
        UPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, k)| (*e, k.mul(c))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> UPoly {
        let mut acc = Self::one(&self.ctx);
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

    /// Characteristic-p power: term-wise.
    pub fn pow_p(&self, d: u32) -> UPoly {
        let scale = (self.ctx.p as u64).pow(d);
        UPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * scale, c.frobenius(d)))
                .collect(),
        }
    }

    pub fn divrem(&self, other: &UPoly) -> Result<(UPoly, UPoly)> {
        let db = other.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = other.lead_coeff().unwrap().inv()?;
        let mut rem = self.clone();
        let mut quo = UPoly::zero(&self.ctx);
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let c = rem.lead_coeff().unwrap().mul(&lead_inv);
            let t = UPoly::monomial(c, dr - db);
            quo = quo.add(&t);
            rem = rem.sub(&t.mul(other));
        }
        Ok((quo, rem))
    }

    pub fn gcd(&self, other: &UPoly) -> Result<UPoly> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: (g, u, v) with u·self + v·other = g, g monic.
    pub fn ext_gcd(&self, other: &UPoly) -> Result<(UPoly, UPoly, UPoly)> {
        let ctx = &self.ctx;
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut u0 = UPoly::one(ctx);
        let mut u1 = UPoly::zero(ctx);
        let mut v0 = UPoly::zero(ctx);
        let mut v1 = UPoly::one(ctx);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let nu = u0.sub(&q.mul(&u1));
            let nv = v0.sub(&q.mul(&v1));
            r0 = std::mem::replace(&mut r1, r);
            u0 = std::mem::replace(&mut u1, nu);
            v0 = std::mem::replace(&mut v1, nv);
        }
        if let Some(l) = r0.lead_coeff() {
            let inv = l.inv()?;
            r0 = r0.mul_scalar(&inv);
            u0 = u0.mul_scalar(&inv);
            v0 = v0.mul_scalar(&inv);
        }
        Ok((r0, u0, v0))
    }

    pub fn monic(&self) -> Result<UPoly> {
        match self.lead_coeff() {
            None => Ok(self.clone()),
            Some(l) => {
                let inv = l.inv()?;
                Ok(self.mul_scalar(&inv))
            }
        }
    }

    /// T ↦ α·T^{p^d}.
    pub fn substitute(&self, alpha: &KElement, d: u32) -> UPoly {
        let scale = (self.ctx.p as u64).pow(d);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e * scale, c.mul(&alpha.pow(*e as u32))))
            .collect();
        UPoly { ctx: self.ctx.clone(), terms }
    }

    pub fn eval(&self, x: &KElement) -> KElement {
        let mut acc = KElement::zero(&self.ctx);
        for (e, c) in &self.terms {
            acc = acc.add(&c.mul(&x.pow(*e as u32)));
        }
        acc
    }

    pub fn lift_to(&self, ctx: &Ctx) -> Result<UPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((*e, c.lift_to(ctx)?)))
            .collect::<Result<_>>()?;
        Ok(UPoly { ctx: ctx.clone(), terms })
    }
}

/// Element of K(T) in canonical form: denominator monic, gcd(num, den) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    pub num: UPoly,
    pub den: UPoly,
}

// RatFun equality is structural (both parts canonical).

impl RatFun {
    pub fn new(num: UPoly, den: UPoly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut r = RatFun { num, den };
        r.normalize()?;
        Ok(r)
    }

    pub fn zero(ctx: &Ctx) -> RatFun {
        RatFun { num: UPoly::zero(ctx), den: UPoly::one(ctx) }
    }

    pub fn from_poly(p: UPoly) -> RatFun {
        let ctx = p.ctx.clone();
        RatFun { num: p, den: UPoly::one(&ctx) }
    }

    pub fn constant(c: KElement) -> RatFun {
        Self::from_poly(UPoly::constant(c))
    }

    pub fn t(ctx: &Ctx) -> RatFun {
        Self::from_poly(UPoly::t(ctx))
    }

    pub fn ctx(&self) -> &Ctx {
        &self.num.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) -> Result<()> {
        if self.num.is_zero() {
            self.den = UPoly::one(&self.num.ctx);
            return Ok(());
        }
        if self.den.degree() != Some(0) {
            let g = self.num.gcd(&self.den)?;
            if g.degree().unwrap_or(0) > 0 {
                self.num = self.num.divrem(&g)?.0;
                self.den = self.den.divrem(&g)?.0;
            }
        }
        let lead_inv = self.den.lead_coeff().unwrap().inv()?;
        self.num = self.num.mul_scalar(&lead_inv);
        self.den = self.den.mul_scalar(&lead_inv);
        Ok(())
    }

    pub fn add(&self, other: &RatFun) -> Result<RatFun> {
        RatFun::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFun) -> Result<RatFun> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFun) -> Result<RatFun> {
        RatFun::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_scalar(&self, c: &KElement) -> Result<RatFun> {
        RatFun::new(self.num.mul_scalar(c), self.den.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFun::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn pow_p(&self, d: u32) -> Result<RatFun> {
        RatFun::new(self.num.pow_p(d), self.den.pow_p(d))
    }

    pub fn pow(&self, n: u32) -> Result<RatFun> {
        RatFun::new(self.num.pow(n), self.den.pow(n))
    }

    /// Vanishes at infinity: proper fraction.
    pub fn is_proper(&self) -> bool {
        self.is_zero() || self.num.degree() < self.den.degree()
    }

    pub fn lift_to(&self, ctx: &Ctx) -> Result<RatFun> {
        Ok(RatFun { num: self.num.lift_to(ctx)?, den: self.den.lift_to(ctx)? })
    }
}

/// G(T) ↦ G(α·T^{p^d}), a field endomorphism of K(T).
pub fn substitute(g: &RatFun, alpha: &KElement, d: u32) -> Result<RatFun> {
    if alpha.is_zero() {
        return Err(Error::ZeroScale);
    }
    RatFun::new(g.num.substitute(alpha, d), g.den.substitute(alpha, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::FieldContext;

    #[test]
    fn substitute_examples() {
        let ctx = FieldContext::new(2, 1, 2);
        let one = KElement::one(&ctx);
        let l1 = KElement::lambda(&ctx, 0);
        let l2 = KElement::lambda(&ctx, 1);
        // T with identity substitution
        let t = RatFun::t(&ctx);
        assert_eq!(substitute(&t, &one, 0).unwrap(), t);
        // 1/(T²+λ₁) with d=1 → 1/(T⁴+λ₁)
        let g = RatFun::new(
            UPoly::one(&ctx),
            UPoly::from_terms(&ctx, vec![(2, one.clone()), (0, l1.clone())]),
        )
        .unwrap();
        let s = substitute(&g, &one, 1).unwrap();
        assert_eq!(s.den.degree(), Some(4));
        assert_eq!(s.den.coeff(0), l1);
        // λ₁T with α=λ₂, d=1 → λ₁λ₂T²  (α^1 times T²)
        let h = RatFun::from_poly(UPoly::monomial(l1.clone(), 1));
        let hs = substitute(&h, &l2, 1).unwrap();
        assert_eq!(hs, RatFun::from_poly(UPoly::monomial(l1.mul(&l2), 2)));
    }

    #[test]
    fn substitution_composes() {
        let ctx = FieldContext::new(2, 1, 2);
        let l1 = KElement::lambda(&ctx, 0);
        let l2 = KElement::lambda(&ctx, 1);
        let g = RatFun::new(
            UPoly::from_terms(&ctx, vec![(1, l1.clone()), (0, KElement::one(&ctx))]),
            UPoly::from_terms(&ctx, vec![(2, KElement::one(&ctx)), (0, l1.clone())]),
        )
        .unwrap();
        // G(α₂ T^{p^{d₂}}) then T ↦ α₁ T^{p^{d₁}} equals G with α₂·α₁^{p^{d₂}}, d₁+d₂
        let (a1, d1) = (l2.clone(), 1u32);
        let (a2, d2) = (l1.add(&l2), 1u32);
        let lhs = substitute(&substitute(&g, &a2, d2).unwrap(), &a1, d1).unwrap();
        let alpha = a2.mul(&a1.frobenius(d2));
        let rhs = substitute(&g, &alpha, d1 + d2).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn ratfun_canonical_gcd() {
        let ctx = FieldContext::new(2, 1, 1);
        let one = KElement::one(&ctx);
        let t = UPoly::t(&ctx);
        let tp1 = t.add(&UPoly::one(&ctx));
        // (T²+T)/(T+1) = T
        let r = RatFun::new(t.mul(&tp1), tp1.clone()).unwrap();
        assert_eq!(r, RatFun::from_poly(t.clone()));
        let _ = one;
    }
}
