//! Textual expression grammar shared by the CLI and test fixtures.
//!
//! Identifiers: `l1`..`lr` for the λ's, `T` for the curve variable,
//! `g1`.. for adjoined tower generators, `w` for the F_q generator over F_p
//! (only when e > 1). Operators: `+ - * / ^ ( )`, integer literals, unary
//! minus. The serializer emits canonical forms that re-parse to equal values.

use crate::error::{Error, Result};
use crate::fq::FqElem;
use crate::kfield::{Ctx, KElement};
use crate::poly::MPoly;
use crate::ratfun::{RatFun, UPoly};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = vec![];
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                it.next();
            }
            '+' => {
                it.next();
                out.push(Tok::Plus);
            }
            '-' => {
                it.next();
                out.push(Tok::Minus);
            }
            '*' => {
                it.next();
                out.push(Tok::Star);
            }
            '/' => {
                it.next();
                out.push(Tok::Slash);
            }
            '^' => {
                it.next();
                out.push(Tok::Caret);
            }
            '(' => {
                it.next();
                out.push(Tok::LParen);
            }
            ')' => {
                it.next();
                out.push(Tok::RParen);
            }
            '0'..='9' => {
                let mut n = 0u64;
                while let Some(&d @ '0'..='9') = it.peek() {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64 - '0' as u64))
                        .ok_or_else(|| Error::Parse("integer literal overflow".into()))?;
                    it.next();
                }
                out.push(Tok::Int(n));
            }
            c if c.is_ascii_alphabetic() => {
                let mut id = String::new();
                while let Some(&ch) = it.peek() {
                    if ch.is_ascii_alphanumeric() {
                        id.push(ch);
                        it.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(id));
            }
            other => return Err(Error::Parse(format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    ctx: &'a Ctx,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.factor()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Star => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?)?;
                }
                Tok::Slash => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatFun> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let f = self.factor()?;
            return Ok(f.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFun> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.next() {
                Some(Tok::Int(n)) => {
                    if n > u32::MAX as u64 {
                        return Err(Error::Parse("exponent too large".into()));
                    }
                    return base.pow(n as u32);
                }
                _ => return Err(Error::Parse("expected integer exponent after '^'".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFun> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(RatFun::constant(KElement::from_int(
                self.ctx,
                (n % self.ctx.p) as i64,
            ))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                if self.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Ident(id)) => self.ident(&id),
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn ident(&mut self, id: &str) -> Result<RatFun> {
        if id == "T" {
            return Ok(RatFun::t(self.ctx));
        }
        if id == "w" {
            if self.ctx.e == 1 {
                return Err(Error::Parse("'w' requires a nontrivial F_q (e > 1)".into()));
            }
            return Ok(RatFun::constant(KElement::from_fq(self.ctx, self.ctx.p)));
        }
        if let Some(n) = id.strip_prefix('l').and_then(|s| s.parse::<usize>().ok()) {
            if n >= 1 && n <= self.ctx.r {
                return Ok(RatFun::constant(KElement::lambda(self.ctx, n - 1)));
            }
            return Err(Error::Parse(format!("λ index out of range: {id}")));
        }
        if let Some(n) = id.strip_prefix('g').and_then(|s| s.parse::<usize>().ok()) {
            if n >= 1 && n <= self.ctx.gens.len() {
                return Ok(RatFun::constant(self.ctx.gen_root(n - 1)));
            }
            return Err(Error::Parse(format!("generator index out of range: {id}")));
        }
        Err(Error::Parse(format!("unknown identifier '{id}'")))
    }
}

pub fn parse_ratfun(ctx: &Ctx, s: &str) -> Result<RatFun> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, ctx };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    Ok(e)
}

pub fn parse_kelement(ctx: &Ctx, s: &str) -> Result<KElement> {
    let r = parse_ratfun(ctx, s)?;
    ratfun_to_kelement(&r)
}

pub fn ratfun_to_kelement(r: &RatFun) -> Result<KElement> {
    if r.num.degree().unwrap_or(0) > 0 || r.den.degree().unwrap_or(0) > 0 {
        return Err(Error::Parse("expression involves T where a field element is required".into()));
    }
    let n = r.num.coeff(0);
    let d = r.den.coeff(0);
    n.div(&d)
}

// ---------------------------------------------------------------------------
// p-polynomial front end: the grammar extended with coordinate names X…

/// Sums of c·X^{p^d} with coefficients in the base grammar. Coordinates are
/// identifiers starting with `X`; each monomial may contain at most one
/// coordinate, raised to a p-power.
pub fn parse_ppolynomial(ctx: &Ctx, s: &str) -> Result<crate::ppoly::PPolynomial> {
    #[derive(Clone)]
    struct CTerm {
        coeff: RatFun,
        var: Option<(String, u32)>,
    }
    #[derive(Clone)]
    struct CPoly(Vec<CTerm>);

    impl CPoly {
        fn add(mut self, o: CPoly) -> CPoly {
            self.0.extend(o.0);
            CPoly(self.0)
        }
        fn neg(self) -> CPoly {
            CPoly(
                self.0
                    .into_iter()
                    .map(|t| CTerm { coeff: t.coeff.neg(), var: t.var })
                    .collect(),
            )
        }
        fn mul(self, o: CPoly) -> Result<CPoly> {
            let mut out = vec![];
            for a in &self.0 {
                for b in &o.0 {
                    let var = match (&a.var, &b.var) {
                        (None, None) => None,
                        (Some(v), None) | (None, Some(v)) => Some(v.clone()),
                        (Some(u), Some(v)) if u.0 == v.0 => Some((u.0.clone(), u.1 + v.1)),
                        _ => {
                            return Err(Error::Parse(
                                "p-polynomials cannot mix coordinates in one monomial".into(),
                            ))
                        }
                    };
                    out.push(CTerm { coeff: a.coeff.mul(&b.coeff)?, var });
                }
            }
            Ok(CPoly(out))
        }
        fn powi(self, n: u32) -> Result<CPoly> {
            let mut acc = CPoly(vec![CTerm {
                coeff: RatFun::constant(KElement::one(&self.0[0].coeff.num.ctx)),
                var: None,
            }]);
            for _ in 0..n {
                acc = acc.mul(self.clone())?;
            }
            Ok(acc)
        }
    }

    fn walk(p: &mut Parser, prec: u8) -> Result<CPoly> {
        // precedence climbing over + - * / ^ with coordinate atoms
        let mut lhs = match p.next() {
            Some(Tok::Minus) => walk(p, 3)?.neg(),
            Some(Tok::LParen) => {
                let e = walk(p, 0)?;
                if p.next() != Some(Tok::RParen) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                e
            }
            Some(Tok::Ident(id)) if id.starts_with('X') => CPoly(vec![CTerm {
                coeff: RatFun::constant(KElement::one(p.ctx)),
                var: Some((id, 1)),
            }]),
            Some(Tok::Ident(id)) => {
                let r = p.ident(&id)?;
                CPoly(vec![CTerm { coeff: r, var: None }])
            }
            Some(Tok::Int(n)) => CPoly(vec![CTerm {
                coeff: RatFun::constant(KElement::from_int(p.ctx, (n % p.ctx.p) as i64)),
                var: None,
            }]),
            other => return Err(Error::Parse(format!("unexpected token {other:?}"))),
        };
        loop {
            let op = match p.peek() {
                Some(Tok::Caret) => 4,
                Some(Tok::Star) | Some(Tok::Slash) => 2,
                Some(Tok::Plus) | Some(Tok::Minus) => 1,
                _ => break,
            };
            if op <= prec {
                break;
            }
            match p.next().unwrap() {
                Tok::Caret => match p.next() {
                    Some(Tok::Int(n)) => {
                        lhs = match (&lhs.0[..], n) {
                            ([t], n) if t.var.is_some() => {
                                let (name, e) = t.var.clone().unwrap();
                                CPoly(vec![CTerm {
                                    coeff: t.coeff.pow(n as u32)?,
                                    var: Some((name, e * n as u32)),
                                }])
                            }
                            _ => lhs.powi(n as u32)?,
                        };
                    }
                    _ => return Err(Error::Parse("expected integer exponent".into())),
                },
                Tok::Star => lhs = lhs.mul(walk(p, 2)?)?,
                Tok::Slash => {
                    let rhs = walk(p, 2)?;
                    if rhs.0.len() != 1 || rhs.0[0].var.is_some() {
                        return Err(Error::Parse("can only divide by coordinate-free factors".into()));
                    }
                    let inv = RatFun::constant(KElement::one(p.ctx)).div(&rhs.0[0].coeff)?;
                    lhs = lhs.mul(CPoly(vec![CTerm { coeff: inv, var: None }]))?;
                }
                Tok::Plus => lhs = lhs.add(walk(p, 1)?),
                Tok::Minus => lhs = lhs.add(walk(p, 1)?.neg()),
                _ => unreachable!(),
            }
        }
        Ok(lhs)
    }

    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, ctx };
    let poly = walk(&mut p, 0)?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse("trailing input".into()));
    }
    // collect coordinates (natural numeric-ish order)
    let mut names: Vec<String> = poly
        .0
        .iter()
        .filter_map(|t| t.var.as_ref().map(|(n, _)| n.clone()))
        .collect();
    names.sort_by_key(|n| (n.len(), n.clone()));
    names.dedup();
    let mut terms = vec![];
    for t in poly.0 {
        let c = ratfun_to_kelement(&t.coeff)?;
        match t.var {
            None => {
                if !c.is_zero() {
                    return Err(Error::Parse(
                        "constant terms are not allowed in additive forms".into(),
                    ));
                }
            }
            Some((name, e)) => {
                let v = names.iter().position(|n| *n == name).unwrap();
                let mut d = 0u32;
                let mut x = e as u64;
                while x % ctx.p == 0 {
                    x /= ctx.p;
                    d += 1;
                }
                if x != 1 {
                    return Err(Error::Parse(format!(
                        "exponent {e} of {name} is not a p-power"
                    )));
                }
                terms.push((c, v, d));
            }
        }
    }
    Ok(crate::ppoly::PPolynomial::new(ctx.clone(), names, terms))
}

// ---------------------------------------------------------------------------
// canonical printing

fn fq_to_string(ctx: &Ctx, c: FqElem) -> String {
    if ctx.e == 1 {
        return format!("{c}");
    }
    let p = ctx.p;
    let mut parts = vec![];
    let mut x = c;
    let mut j = 0;
    while x > 0 {
        let digit = x % p;
        x /= p;
        if digit != 0 {
            let mut s = String::new();
            if digit != 1 || j == 0 {
                s.push_str(&digit.to_string());
            }
            if j >= 1 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push('w');
                if j > 1 {
                    s.push_str(&format!("^{j}"));
                }
            }
            parts.push(s);
        }
        j += 1;
    }
    if parts.is_empty() {
        "0".into()
    } else if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        format!("({})", parts.join(" + "))
    }
}

pub fn mpoly_to_string(ctx: &Ctx, p: &MPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = vec![];
    for (m, c) in &p.terms {
        let mut factors: Vec<String> = vec![];
        if *c != 1 || m.is_one() {
            factors.push(fq_to_string(ctx, *c));
        }
        for (v, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = if v < ctx.r {
                format!("l{}", v + 1)
            } else {
                // print the root itself: gN is the scaled generator, so divide by scale
                format!("g{}", v - ctx.r + 1)
            };
            if e == 1 {
                factors.push(name);
            } else {
                factors.push(format!("{name}^{e}"));
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ")
}

/// Canonical form of a field element. Note: tower generator variables print
/// as `gN`, which denote the *scaled* generators (gN = BN·rootN); the parser
/// maps `gN` back to the root, so printing divides the stored numerator
/// accordingly via the identity element = num(g)/den. To keep the round trip
/// exact we print num and den verbatim and rely on `gN` meaning the root,
/// compensating with the scale polynomial where needed.
pub fn kelement_to_string(x: &KElement) -> String {
    let ctx = &x.ctx;
    // Rewrite num in terms of the displayed roots: substitute g = scale·root
    // symbolically. Since the parser evaluates gN to root = g/scale, printing
    // the stored monomials with an extra scale^e factor keeps values equal.
    // We avoid that bookkeeping by printing num/den with each generator
    // occurrence gN^e multiplied by scale^e merged into the term.
    let mut num_parts: Vec<String> = vec![];
    for (m, c) in &x.num.terms {
        let mut factors: Vec<String> = vec![];
        if *c != 1 || m.is_one() {
            factors.push(fq_to_string(ctx, *c));
        }
        let mut scale_acc: Option<MPoly> = None;
        for (v, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if v < ctx.r {
                if e == 1 {
                    factors.push(format!("l{}", v + 1));
                } else {
                    factors.push(format!("l{}^{}", v + 1, e));
                }
            } else {
                let gi = v - ctx.r;
                let name = format!("g{}", gi + 1);
                if e == 1 {
                    factors.push(name);
                } else {
                    factors.push(format!("{name}^{e}"));
                }
                let sc = ctx.gens[gi].scale.extend_vars(ctx.nvars()).pow(e, &ctx.fq);
                if !sc.is_constant() || sc.as_constant() != Some(1) {
                    scale_acc = Some(match scale_acc {
                        None => sc,
                        Some(acc) => acc.mul(&sc, &ctx.fq),
                    });
                }
            }
        }
        if let Some(sc) = scale_acc {
            factors.push(format!("({})", mpoly_to_string(ctx, &sc)));
        }
        num_parts.push(factors.join("*"));
    }
    let num_s = if num_parts.is_empty() {
        "0".to_string()
    } else {
        num_parts.join(" + ")
    };
    if x.den.is_constant() && x.den.as_constant() == Some(1) {
        num_s
    } else {
        format!("({})/({})", num_s, mpoly_to_string(ctx, &x.den))
    }
}

pub fn upoly_to_string(p: &UPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = vec![];
    for (e, c) in p.terms.iter().rev() {
        let cs = kelement_to_string(c);
        let mut s = String::new();
        if *e == 0 {
            s.push_str(&wrap(&cs));
        } else {
            if !(c.is_one()) {
                s.push_str(&wrap(&cs));
                s.push('*');
            }
            s.push('T');
            if *e > 1 {
                s.push_str(&format!("^{e}"));
            }
        }
        parts.push(s);
    }
    parts.join(" + ")
}

fn wrap(s: &str) -> String {
    if s.contains('+') || s.contains('-') || s.contains('/') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

pub fn ratfun_to_string(r: &RatFun) -> String {
    let n = upoly_to_string(&r.num);
    if r.den.degree() == Some(0) && r.den.coeff(0).is_one() {
        n
    } else {
        format!("({})/({})", n, upoly_to_string(&r.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kfield::FieldContext;

    #[test]
    fn parse_spec_example() {
        let ctx = FieldContext::new(2, 1, 2);
        let x = parse_kelement(&ctx, "(l1^2 + l1*l2)/(l2 + 1)").unwrap();
        let l1 = KElement::lambda(&ctx, 0);
        let l2 = KElement::lambda(&ctx, 1);
        let expect = l1
            .pow(2)
            .add(&l1.mul(&l2))
            .div(&l2.add(&KElement::one(&ctx)))
            .unwrap();
        assert_eq!(x, expect);
    }

    #[test]
    fn roundtrip_kelement() {
        let ctx = FieldContext::new(3, 1, 2);
        let x = parse_kelement(&ctx, "(2*l1^4 + l2)/(l1*l2^2 + 1) - 1/l1").unwrap();
        let s = kelement_to_string(&x);
        let y = parse_kelement(&ctx, &s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn roundtrip_with_generator() {
        let ctx = FieldContext::new(2, 1, 1);
        let l = KElement::lambda(&ctx, 0);
        let c = KElement::one(&ctx).div(&l).unwrap();
        let (cx, g) = ctx.adjoin_artin_schreier(&c).unwrap();
        // element mixing the root with λ; the root has a nontrivial scale
        let x = g
            .mul(&KElement::lambda(&cx, 0))
            .add(&g.pow(1))
            .add(&KElement::one(&cx));
        let s = kelement_to_string(&x);
        let y = parse_kelement(&cx, &s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn roundtrip_ratfun() {
        let ctx = FieldContext::new(2, 1, 1);
        let g = parse_ratfun(&ctx, "(l1*T + 1)/(T^2 + l1)").unwrap();
        let s = ratfun_to_string(&g);
        assert_eq!(parse_ratfun(&ctx, &s).unwrap(), g);
    }

    #[test]
    fn roundtrip_fq_generator() {
        let ctx = FieldContext::new(2, 2, 1);
        let x = parse_kelement(&ctx, "w*l1 + w^2").unwrap();
        let s = kelement_to_string(&x);
        assert_eq!(parse_kelement(&ctx, &s).unwrap(), x);
    }

    #[test]
    fn parse_ppoly_form() {
        let ctx = FieldContext::new(2, 1, 1);
        let f = parse_ppolynomial(&ctx, "-X0 + X0^2 + l1*X1^2").unwrap();
        assert_eq!(f.vars, vec!["X0".to_string(), "X1".to_string()]);
        assert_eq!(f.terms.len(), 3);
        // non-p-power exponent rejected
        assert!(parse_ppolynomial(&ctx, "X0^3").is_err());
        // mixed-coordinate monomial rejected
        assert!(parse_ppolynomial(&ctx, "X0*X1").is_err());
    }
}
